use crate::scalar::Real;

/// Wynn's epsilon algorithm over a stream of partial sums.
///
/// Only the latest anti-diagonal of the table is stored. Each call to
/// [`EpsilonTable::push`] returns the current best limit estimate, which is
/// the highest even-order entry of that anti-diagonal.
#[derive(Debug, Clone)]
pub struct EpsilonTable<T> {
    diagonal: Vec<T>,
    max_order: usize,
}

impl<T: Real> EpsilonTable<T> {
    pub fn new() -> Self {
        Self::with_max_order(48)
    }

    pub fn with_max_order(max_order: usize) -> Self {
        Self {
            diagonal: Vec::new(),
            max_order,
        }
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    pub fn push(&mut self, partial_sum: T) -> T {
        let prev = std::mem::take(&mut self.diagonal);
        let mut cur = Vec::with_capacity(prev.len() + 1);
        cur.push(partial_sum);
        for k in 0..prev.len().min(self.max_order) {
            let below = if k == 0 { T::zero() } else { prev[k - 1] };
            let diff = cur[k] - prev[k];
            if diff == T::zero() || !diff.is_finite() {
                break;
            }
            let next = below + diff.recip();
            if !next.is_finite() {
                break;
            }
            cur.push(next);
        }
        let estimate = cur[(cur.len() - 1) & !1];
        self.diagonal = cur;
        estimate
    }
}

impl<T: Real> Default for EpsilonTable<T> {
    fn default() -> Self {
        Self::new()
    }
}
