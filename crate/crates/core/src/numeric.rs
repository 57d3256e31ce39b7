//! Small numerical helpers shared across modules.

/// Neumaier compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Uniform nodes `2 pi m / n`, `m = 0..n`.
pub(crate) fn uniform_nodes(n: usize) -> impl Iterator<Item = f64> + Clone {
    let step = std::f64::consts::TAU / n as f64;
    (0..n).map(move |m| m as f64 * step)
}
