//! Levin u-transform for slowly convergent series.
//!
//! Streaming triangular recurrence (Weniger's formulation with β = 1) over
//! numerator/denominator tables. The remainder estimate is the u-variant
//! `ω_n = (n+1)·a_n`, which targets exactly the n^(-1-s) tails the
//! unit-argument hypergeometric series produce.

#[derive(Debug)]
pub(crate) struct LevinU {
    numer: Vec<f64>,
    denom: Vec<f64>,
    count: usize,
    sum: f64,
    prev: [f64; 2],
    best: f64,
    best_err: f64,
}

const BETA: f64 = 1.0;

impl LevinU {
    pub(crate) fn new(capacity: usize) -> Self {
        LevinU {
            numer: vec![0.0; capacity],
            denom: vec![0.0; capacity],
            count: 0,
            sum: 0.0,
            prev: [f64::NAN; 2],
            best: f64::NAN,
            best_err: f64::INFINITY,
        }
    }

    /// Feeds the next series term; returns the current accelerated estimate
    /// once at least three terms are in.
    pub(crate) fn push(&mut self, term: f64) -> Option<f64> {
        let m = self.count;
        if m >= self.numer.len() {
            return None;
        }
        self.sum += term;
        let omega = (BETA + m as f64) * term;
        if omega == 0.0 {
            // Terminated series: the plain sum is exact from here on.
            self.best = self.sum;
            self.best_err = 0.0;
            return Some(self.sum);
        }
        self.numer[m] = self.sum / omega;
        self.denom[m] = 1.0 / omega;

        for j in (0..m).rev() {
            let k = m - j;
            // c = (β+j)(β+j+k-1)^(k-2) / (β+j+k)^(k-1), kept in ratio form
            // so no intermediate power can overflow.
            let base = (BETA + (j + k) as f64 - 1.0) / (BETA + (j + k) as f64);
            let c = (BETA + j as f64) / (BETA + (j + k) as f64) * base.powi(k as i32 - 2);
            self.numer[j] = self.numer[j + 1] - c * self.numer[j];
            self.denom[j] = self.denom[j + 1] - c * self.denom[j];
        }

        self.count += 1;
        if self.denom[0] == 0.0 {
            return None;
        }
        let est = self.numer[0] / self.denom[0];
        if est.is_finite() && m >= 2 {
            // Consecutive-difference error estimate, kept conservative by
            // looking two estimates back.
            let err = (est - self.prev[0]).abs().max((est - self.prev[1]).abs());
            if err < self.best_err {
                self.best_err = err;
                self.best = est;
            }
        }
        self.prev[1] = self.prev[0];
        self.prev[0] = est;
        Some(est)
    }

    /// Best estimate so far and its error estimate.
    pub(crate) fn best(&self) -> (f64, f64) {
        (self.best, self.best_err)
    }
}

/// Accelerates the series whose terms are produced by `terms`; stops early
/// once the internal error estimate drops below `tol` relative to the value.
pub(crate) fn accelerate<I: Iterator<Item = f64>>(terms: I, max_terms: usize, tol: f64) -> (f64, f64) {
    let n = max_terms.min(64);
    let mut levin = LevinU::new(n);
    for t in terms.take(n) {
        levin.push(t);
        let (best, err) = levin.best();
        if best.is_finite() && err <= tol * best.abs() {
            return (best, err);
        }
    }
    levin.best()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_2() {
        // Σ 1/n² = π²/6; plain summation would need ~1e12 terms for 1e-12.
        let (val, _) = accelerate((1..).map(|n| 1.0 / (n as f64 * n as f64)), 40, 1e-13);
        let want = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        assert!((val - want).abs() < 1e-9, "got {val}, want {want}");
    }

    #[test]
    fn logarithmically_convergent() {
        // Σ n^(-1.5) = ζ(3/2) = 2.6123753486854883
        let (val, err) = accelerate((1..).map(|n| (n as f64).powf(-1.5)), 48, 1e-13);
        let want = 2.6123753486854883;
        assert!(
            (val - want).abs() < 1e-9,
            "got {val} (err est {err}), want {want}"
        );
    }

    #[test]
    fn alternating() {
        // Σ (-1)^(n+1)/n = ln 2
        let (val, _) = accelerate(
            (1..).map(|n| if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64),
            32,
            1e-14,
        );
        assert!((val - std::f64::consts::LN_2).abs() < 1e-13);
    }

    #[test]
    fn terminating_series_is_exact() {
        let terms = [1.0, 0.5, 0.25, 0.0, 0.0, 0.0];
        let (val, err) = accelerate(terms.into_iter(), 32, 1e-14);
        assert_eq!(val, 1.75);
        assert_eq!(err, 0.0);
    }
}
