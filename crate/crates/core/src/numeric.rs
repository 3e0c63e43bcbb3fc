//! Scalar helpers: compensated summation and log-space combinatorics.

/// Neumaier-compensated running sum. Terms are accumulated in call order.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

/// Sum an iterator left to right with compensation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.value()
}

/// Largest `n` for which [`binomial_f64`] multiplies exactly in integers.
pub const EXACT_BINOMIAL_MAX_N: u64 = 30;

/// `ln n!` via log-gamma.
pub fn ln_factorial(n: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// `ln C(n, k)`; exact integer evaluation up to [`EXACT_BINOMIAL_MAX_N`], log-gamma beyond.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_binomial: k > n");
    if n <= EXACT_BINOMIAL_MAX_N {
        libm::log(binomial_u64(n, k) as f64)
    } else {
        ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
    }
}

/// Exact binomial coefficient; panics on overflow of `u64`.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    assert!(k <= n, "binomial_u64: k > n");
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    u64::try_from(acc).expect("binomial_u64 overflow")
}

/// Round half to even, used for `k = round(r n)` on sweep grids.
pub fn round_half_even(x: f64) -> f64 {
    libm::rint(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let terms = [1.0, 1e-16, 1e-16, 1e-16, 1e-16, -1.0];
        let naive: f64 = terms.iter().sum();
        assert_eq!(naive, 0.0);
        assert!((compensated_sum(terms) - 4e-16).abs() < 1e-30);
    }

    #[test]
    fn binomials_agree_across_the_exact_cutoff() {
        assert_eq!(binomial_u64(4, 2), 6);
        assert_eq!(binomial_u64(30, 15), 155_117_520);
        assert_eq!(binomial_u64(7, 0), 1);
        for n in [31u64, 40, 60] {
            for k in [0, 1, n / 3, n / 2, n] {
                let exact = libm::log(binomial_u64(n, k) as f64);
                assert!((ln_binomial(n, k) - exact).abs() < 1e-11, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn ties_round_to_even() {
        assert_eq!(round_half_even(2.5), 2.0);
        assert_eq!(round_half_even(3.5), 4.0);
        assert_eq!(round_half_even(2.4), 2.0);
    }
}
