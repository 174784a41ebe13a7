//! The generalized Beta-prime distribution GBP(α, β, p, q).
//!
//! Density `p/(q B(α,β)) (x/q)^(αp-1) / (1+(x/q)^p)^(α+β)` on x ≥ 0, with
//! CDF `I_w(α, β)` in the transformed coordinate `w = (x/q)^p/(1+(x/q)^p)`.
//! Special cases: Singh-Maddala (α=1), Dagum (β=1), log-logistic (α=β=1).
//!
//! Sampling uses the Beta-transform relationship: if X ~ Beta(α, β) then
//! `q (X/(1-X))^(1/p)` is GBP-distributed. The Beta draw is realized as a
//! ratio of two Gamma draws so the whole stream is a pure function of
//! (seed, chunk index), which keeps parallel and serial sampling identical.

use crate::error::{Error, Result};
use crate::specfun::{inv_reg_inc_beta, ln_beta_unchecked, reg_inc_beta_unchecked};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

/// Draws per deterministic sampling chunk.
pub const SAMPLE_CHUNK: usize = 1 << 20;

/// Parameters of the generalized Beta-prime distribution.
///
/// All four parameters are strictly positive; `alpha`, `beta`, and `p` are
/// shapes, `q` carries the units of the observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbpParams {
    alpha: f64,
    beta: f64,
    p: f64,
    q: f64,
}

impl GbpParams {
    pub fn new(alpha: f64, beta: f64, p: f64, q: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("p", p), ("q", q)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(
                    "GbpParams::new",
                    format!("{name} must be a positive finite real, got {v}"),
                ));
            }
        }
        Ok(GbpParams { alpha, beta, p, q })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }

    /// The mean is finite iff `beta * p > 1`.
    pub fn mean_finite(&self) -> bool {
        self.beta * self.p > 1.0
    }

    /// Transformed coordinate `w = (x/q)^p / (1 + (x/q)^p)` and its
    /// complement, computed from whichever ratio stays below one so neither
    /// power can overflow.
    pub(crate) fn w_split(&self, x: f64) -> (f64, f64) {
        if x <= self.q {
            let r = (x / self.q).powf(self.p);
            (r / (1.0 + r), 1.0 / (1.0 + r))
        } else {
            let r = (self.q / x).powf(self.p);
            (1.0 / (1.0 + r), r / (1.0 + r))
        }
    }

    /// Probability density at x ≥ 0.
    ///
    /// At the origin the density is 0 for αp > 1, the finite limit
    /// `p/(q B(α,β))` for αp = 1, and +∞ (an integrable singularity) for
    /// αp < 1.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::domain(
                "GbpParams::pdf",
                format!("x must be nonnegative, got {x}"),
            ));
        }
        let ap = self.alpha * self.p;
        if x == 0.0 {
            let ln_norm =
                self.p.ln() - self.q.ln() - ln_beta_unchecked(self.alpha, self.beta);
            return Ok(match ap.partial_cmp(&1.0).expect("ap is finite") {
                std::cmp::Ordering::Greater => 0.0,
                std::cmp::Ordering::Equal => ln_norm.exp(),
                std::cmp::Ordering::Less => f64::INFINITY,
            });
        }
        let ln_r = x.ln() - self.q.ln();
        let t = self.p * ln_r;
        // ln(1 + r^p) without overflow on either side.
        let ln_one_plus_rp = t.max(0.0) + (-t.abs()).exp().ln_1p();
        let ln_pdf = self.p.ln() - self.q.ln() - ln_beta_unchecked(self.alpha, self.beta)
            + (ap - 1.0) * ln_r
            - (self.alpha + self.beta) * ln_one_plus_rp;
        Ok(ln_pdf.exp())
    }

    /// Cumulative distribution function at x ≥ 0.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::domain(
                "GbpParams::cdf",
                format!("x must be nonnegative, got {x}"),
            ));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        let (w, _) = self.w_split(x);
        Ok(reg_inc_beta_unchecked(w, self.alpha, self.beta))
    }

    /// Survival function `1 - F(x)`, evaluated without cancellation via the
    /// reflected incomplete beta.
    pub fn sf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::domain(
                "GbpParams::sf",
                format!("x must be nonnegative, got {x}"),
            ));
        }
        if x == 0.0 {
            return Ok(1.0);
        }
        let (_, omw) = self.w_split(x);
        Ok(reg_inc_beta_unchecked(omw, self.beta, self.alpha))
    }

    /// Mean `μ = q B(α + 1/p, β - 1/p) / B(α, β)`; requires `beta * p > 1`.
    pub fn mean(&self) -> Result<f64> {
        if !self.mean_finite() {
            return Err(Error::InfiniteMean {
                beta_p: self.beta * self.p,
            });
        }
        let ip = 1.0 / self.p;
        let ln_mu = ln_beta_unchecked(self.alpha + ip, self.beta - ip)
            - ln_beta_unchecked(self.alpha, self.beta);
        Ok(self.q * ln_mu.exp())
    }

    /// Quantile function: `q (v/(1-v))^(1/p)` with v the inverse
    /// regularized incomplete beta at u.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0 < u && u < 1.0) {
            return Err(Error::domain(
                "GbpParams::quantile",
                format!("u must lie in (0,1), got {u}"),
            ));
        }
        let v = inv_reg_inc_beta(u, self.alpha, self.beta)?;
        Ok(self.q * (v / (1.0 - v)).powf(1.0 / self.p))
    }

    /// Draws `n` samples, deterministically given `(seed, n)`.
    ///
    /// The stream is the in-order concatenation of independent chunk
    /// substreams of [`SAMPLE_CHUNK`] draws, so any chunk can also be
    /// produced independently (see [`GbpParams::sample_chunk`]).
    pub fn sample(&self, seed: u64, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        let mut chunk = 0u64;
        while out.len() < n {
            let len = SAMPLE_CHUNK.min(n - out.len());
            self.sample_chunk(seed, chunk, len, &mut out);
            chunk += 1;
        }
        out
    }

    /// Appends the draws of one chunk; a pure function of
    /// `(seed, chunk_index)` regardless of the calling thread.
    pub fn sample_chunk(&self, seed: u64, chunk_index: u64, len: usize, out: &mut Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk_index);
        let ga = Gamma::new(self.alpha, 1.0).expect("alpha validated positive");
        let gb = Gamma::new(self.beta, 1.0).expect("beta validated positive");
        let inv_p = 1.0 / self.p;
        out.reserve(len);
        for _ in 0..len {
            let g1: f64 = ga.sample(&mut rng);
            let g2: f64 = gb.sample(&mut rng);
            // Beta transform: B/(1-B) = g1/g2 for B = g1/(g1+g2).
            out.push(self.q * (g1 / g2).powf(inv_p));
        }
    }

    /// ln B(α, β), shared with the CRPS formulas.
    pub(crate) fn ln_beta(&self) -> f64 {
        ln_beta_unchecked(self.alpha, self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad;

    fn params(a: f64, b: f64, p: f64, q: f64) -> GbpParams {
        GbpParams::new(a, b, p, q).unwrap()
    }

    #[test]
    fn pdf_trivial_values() {
        // 1/B(1,1) * 1/(1+1)^2 = 1/4
        assert!((params(1.0, 1.0, 1.0, 1.0).pdf(1.0).unwrap() - 0.25).abs() < 1e-14);
        // alpha p - 1 > 0 kills the origin
        assert_eq!(params(2.0, 1.0, 1.0, 1.0).pdf(0.0).unwrap(), 0.0);
        // alpha p = 1: finite limit p/(q B)
        let p = params(0.5, 1.0, 2.0, 1.0);
        assert!((p.pdf(0.0).unwrap() - 2.0 / crate::specfun::beta(0.5, 1.0).unwrap()).abs() < 1e-13);
        // alpha p < 1: integrable singularity
        assert_eq!(params(0.25, 1.0, 2.0, 1.0).pdf(0.0).unwrap(), f64::INFINITY);
        assert!(params(1.0, 1.0, 1.0, 1.0).pdf(-0.5).is_err());
    }

    #[test]
    fn pdf_normalizes_by_quadrature() {
        // Adaptive quadrature of the density over the compactified half-line.
        let d = params(1.0, 2.0, 1.5, 1.0);
        let q = quad::adaptive(
            |t: f64| {
                let x = t / (1.0 - t);
                d.pdf(x).unwrap() / ((1.0 - t) * (1.0 - t))
            },
            0.0,
            1.0,
            1e-12,
            1e-11,
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-10, "integral {}", q.value);
    }

    #[test]
    fn cdf_values() {
        // Median at the scale point when alpha = beta.
        for (a, p, q) in [(1.0, 1.0, 1.0), (2.5, 1.7, 3.0)] {
            let d = params(a, a, p, q);
            assert!((d.cdf(q).unwrap() - 0.5).abs() < 1e-13);
        }
        assert_eq!(params(1.0, 2.0, 1.5, 1.0).cdf(0.0).unwrap(), 0.0);
        // I_{1/2}(1,2) = 0.75
        assert!((params(1.0, 2.0, 1.5, 1.0).cdf(1.0).unwrap() - 0.75).abs() < 1e-13);
    }

    #[test]
    fn cdf_plus_sf_is_one() {
        let d = params(0.7, 2.2, 1.9, 1.4);
        for x in [0.01, 0.5, 1.4, 3.0, 25.0] {
            let s = d.cdf(x).unwrap() + d.sf(x).unwrap();
            assert!((s - 1.0).abs() < 1e-13, "x={x}: {s}");
        }
    }

    #[test]
    fn mean_values() {
        // Quadrature oracle for the first moment.
        let d = params(1.0, 2.0, 1.5, 1.0);
        let oracle = quad::adaptive(
            |t: f64| {
                let x = t / (1.0 - t);
                x * d.pdf(x).unwrap() / ((1.0 - t) * (1.0 - t))
            },
            0.0,
            1.0,
            1e-12,
            1e-11,
        )
        .unwrap()
        .value;
        let got = d.mean().unwrap();
        assert!((got - oracle).abs() < 1e-9, "got {got}, oracle {oracle}");
        // 2 B(5/3, 4/3) from 40-digit arithmetic.
        assert!((got - 0.80613305077076349).abs() < 1e-13);

        // Log-logistic mean (q pi / p) / sin(pi/p) at p = 2 is pi/2.
        let ll = params(1.0, 1.0, 2.0, 1.0).mean().unwrap();
        assert!((ll - std::f64::consts::FRAC_PI_2).abs() < 1e-13);

        assert!(matches!(
            params(1.0, 1.0, 1.0, 1.0).mean(),
            Err(Error::InfiniteMean { .. })
        ));
    }

    #[test]
    fn quantile_values() {
        for (a, p, q) in [(1.0, 1.0, 1.0), (3.0, 0.8, 2.0)] {
            let d = params(a, a, p, q);
            assert!((d.quantile(0.5).unwrap() - q).abs() < 1e-10 * q);
        }
        // v = 0.75 -> v/(1-v) = 3 for the p = 1 log-logistic.
        assert!((params(1.0, 1.0, 1.0, 1.0).quantile(0.75).unwrap() - 3.0).abs() < 1e-10);

        let d = params(1.3, 2.6, 1.7, 2.0);
        for x in [0.2, 2.0, 20.0] {
            let u = d.cdf(x).unwrap();
            let back = d.quantile(u).unwrap();
            assert!(
                (back - x).abs() < 1e-9 * x,
                "roundtrip x={x}: u={u}, back={back}"
            );
        }
        assert!(d.quantile(0.0).is_err());
        assert!(d.quantile(1.0).is_err());
    }

    #[test]
    fn cdf_derivative_matches_pdf() {
        for d in [
            params(1.0, 2.0, 1.5, 1.0),
            params(2.0, 3.0, 2.0, 1.0),
            params(0.5, 2.0, 2.0, 1.0),
        ] {
            for i in 1..=100 {
                let x = d.quantile(i as f64 / 101.0).unwrap();
                let h = 1e-5 * x.max(0.1);
                let deriv =
                    (d.cdf(x + h).unwrap() - d.cdf((x - h).max(0.0)).unwrap()) / (x + h - (x - h).max(0.0));
                let pdf = d.pdf(x).unwrap();
                assert!(
                    (deriv - pdf).abs() <= 1e-6 * pdf.max(1e-12),
                    "x={x}: deriv {deriv} vs pdf {pdf}"
                );
            }
        }
    }

    #[test]
    fn scale_equivariance() {
        let base = params(1.3, 2.1, 1.8, 1.0);
        let scaled = params(1.3, 2.1, 1.8, 7.5);
        for x in [0.1, 0.9, 2.0, 11.0] {
            let c1 = scaled.cdf(x).unwrap();
            let c2 = base.cdf(x / 7.5).unwrap();
            assert!((c1 - c2).abs() <= 1e-12);
            let p1 = scaled.pdf(x).unwrap();
            let p2 = base.pdf(x / 7.5).unwrap() / 7.5;
            assert!((p1 - p2).abs() <= 1e-12 * p2.max(1.0));
        }
        for u in [0.05, 0.5, 0.95] {
            let q1 = scaled.quantile(u).unwrap();
            let q2 = 7.5 * base.quantile(u).unwrap();
            assert!((q1 - q2).abs() <= 1e-12 * q2);
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let d = params(1.0, 2.0, 1.5, 1.0);
        let a = d.sample(42, 1000);
        let b = d.sample(42, 1000);
        assert_eq!(a, b);
        let c = d.sample(43, 1000);
        assert_ne!(a, c);
        // Chunked assembly equals the serial stream.
        let mut chunked = Vec::new();
        d.sample_chunk(42, 0, 1000, &mut chunked);
        assert_eq!(a, chunked);
    }

    #[test]
    fn sampler_matches_mean_and_median() {
        let d = params(1.0, 2.0, 1.5, 1.0);
        let n = 1_000_000usize;
        let xs = d.sample(7, n);
        let mean: f64 = xs.iter().sum::<f64>() / n as f64;
        let var: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let mu = d.mean().unwrap();
        assert!(
            (mean - mu).abs() < 4.0 * se,
            "sample mean {mean} vs mu {mu} (se {se})"
        );

        let sym = params(2.0, 2.0, 1.0, 1.0);
        let xs = sym.sample(11, n);
        let frac_below = xs.iter().filter(|&&x| x < 1.0).count() as f64 / n as f64;
        let bound = 4.0 * (0.25 / n as f64).sqrt();
        assert!(
            (frac_below - 0.5).abs() < bound,
            "fraction below q: {frac_below}"
        );
    }

    #[test]
    fn sampler_kolmogorov_smirnov() {
        // KS statistic below the 1% critical value 1.6276/sqrt(n).
        let d = params(1.0, 2.0, 1.5, 1.0);
        let n = 1_000_000usize;
        let mut xs = d.sample(123, n);
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks = 0.0f64;
        for (i, &x) in xs.iter().enumerate() {
            let f = d.cdf(x).unwrap();
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((f - lo).abs()).max((f - hi).abs());
        }
        let critical = 1.6276236115189502 / (n as f64).sqrt();
        assert!(ks < critical, "KS {ks} vs critical {critical}");
    }

    #[test]
    fn cdf_pushforward_is_uniform() {
        // Chi-squared over 100 equiprobable bins, n = 1e6; 0.1% critical
        // value of chi2(99) is 148.2303591651017.
        let d = params(2.0, 2.0, 1.0, 1.0);
        let n = 1_000_000usize;
        let xs = d.sample(99, n);
        let mut bins = [0u64; 100];
        for x in xs {
            let u = d.cdf(x).unwrap();
            let b = ((u * 100.0) as usize).min(99);
            bins[b] += 1;
        }
        let expected = n as f64 / 100.0;
        let chi2: f64 = bins
            .iter()
            .map(|&c| {
                let dlt = c as f64 - expected;
                dlt * dlt / expected
            })
            .sum();
        assert!(chi2 < 148.2303591651017, "chi2 {chi2}");
    }

    #[test]
    fn rejects_bad_params() {
        assert!(GbpParams::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(GbpParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(GbpParams::new(1.0, 1.0, f64::INFINITY, 1.0).is_err());
        assert!(GbpParams::new(1.0, 1.0, 1.0, f64::NAN).is_err());
    }
}
