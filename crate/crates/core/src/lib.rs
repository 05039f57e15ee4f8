//! Information-theoretic quantities for symmetric α-stable laws.
//!
//! Densities follow the characteristic function `exp(-s|k|^α)`. On top of
//! them the crate computes Fisher scores, relative entropy between two scales
//! of one family and its scale derivative, and the mixed fractional
//! information (MFI) by its chain-rule and integral formulations, together
//! with the identity that makes the two agree.
//!
//! Every engine is generic over [`Real`]; the aliases below fix `f64`.

pub mod error;
pub mod info;
pub mod mfi;
pub mod quadrature;
pub mod scalar;
pub mod stable;
pub mod stencil;

pub use error::{Error, Result};
pub use info::{EntropyDerivativeConfig, ScoreMethod, Stencil};
pub use mfi::Tier;
pub use quadrature::Tolerance;
pub use scalar::Real;

/// Version of this crate, recorded in validation reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Interval = quadrature::Interval<f64>;
pub type QuadratureResult = quadrature::QuadratureResult<f64>;
pub type StabilityIndex = stable::StabilityIndex<f64>;
pub type Scale = stable::Scale<f64>;
pub type DensitySpec = stable::DensitySpec<f64>;
pub type TailAsymptote = stable::TailAsymptote<f64>;
pub type ScorePair = info::ScorePair<f64>;
pub type StencilEstimate = info::StencilEstimate<f64>;
pub type MfiResult = mfi::MfiResult<f64>;
pub type InterpolationPath = mfi::InterpolationPath<f64>;
pub type ConsistencyRecord = mfi::ConsistencyRecord<f64>;
pub type PositivityRow = mfi::PositivityRow<f64>;
