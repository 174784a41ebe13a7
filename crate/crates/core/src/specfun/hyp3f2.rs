//! ₃F₂(a₁, a₂, a₃; b₁, b₂; 1), the generalized hypergeometric sum at unit
//! argument.
//!
//! Convergence is governed by the exponent `s = b₁+b₂-a₁-a₂-a₃`: the terms
//! decay like n^(-1-s), so the plain series is hopeless for small s. The
//! evaluation pipeline is:
//!
//! 1. terminating series (an upper parameter is a nonpositive integer);
//! 2. upper/lower cancellation, reducing to Gauss summation of a ₂F₁;
//! 3. a two-term Thomae relation that rewrites the sum as a series with a
//!    larger convergence exponent (and which terminates outright whenever
//!    one of the transformed upper parameters is a nonpositive integer);
//! 4. direct summation with an extrapolated power-law tail correction;
//! 5. Levin u-acceleration of the partial sums;
//! 6. adaptive quadrature of the Euler integral (always available, also the
//!    independent test oracle for this function).

use super::gamma::{gamma_ratio, ln_gamma_signed};
use super::hyp2f1::hyp2f1;
use super::levin;
use super::{is_nonpositive_integer, SeriesControl};
use crate::error::{Error, Result};
use crate::quad;

/// ₃F₂(a₁,a₂,a₃; b₁,b₂; 1). Requires b₁, b₂ > 0 and, for non-terminating
/// series, a positive convergence exponent.
pub fn hyp3f2_unit(
    a1: f64,
    a2: f64,
    a3: f64,
    b1: f64,
    b2: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    ctrl.validate("hyp3f2_unit")?;
    let upper = [a1, a2, a3];
    let lower = [b1, b2];
    if upper.iter().chain(lower.iter()).any(|v| !v.is_finite()) {
        return Err(Error::domain("hyp3f2_unit", "arguments must be finite"));
    }
    if !(b1 > 0.0 && b2 > 0.0) {
        return Err(Error::domain(
            "hyp3f2_unit",
            format!("lower parameters must be positive, got ({b1}, {b2})"),
        ));
    }

    // Terminating series converge regardless of the exponent.
    if upper.iter().any(|&a| is_nonpositive_integer(a)) {
        return terminating_sum(upper, lower, ctrl);
    }

    // Upper/lower cancellation: drop the pair and Gauss-sum the remaining
    // 2F1 (the Dagum case of the CRPS formula).
    for (i, &a) in upper.iter().enumerate() {
        for (j, &b) in lower.iter().enumerate() {
            if a == b {
                let rem: Vec<f64> = upper
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, &v)| v)
                    .collect();
                let other = lower[1 - j];
                return hyp2f1(rem[0], rem[1], other, 1.0, ctrl);
            }
        }
    }

    let s = b1 + b2 - a1 - a2 - a3;
    if !(s > 0.0) {
        return Err(Error::NoConvergence {
            op: "hyp3f2_unit",
            terms: 0,
            estimate: f64::NAN,
            error: f64::INFINITY,
        });
    }

    // Pick the best series representation among the original and the
    // admissible Thomae transforms.
    let rep = best_representation(upper, lower, s);

    let needed = ctrl.rel_tol;
    let (sum, err, terms) = tail_corrected_sum(rep.upper, rep.lower, rep.exponent, ctrl);
    if err <= 3.0 * needed * sum.abs() {
        return Ok(rep.prefactor * sum);
    }

    // Acceleration tier: Levin-u on the partial sums of the same series.
    let (acc, acc_err) = levin::accelerate(SeriesTerms::new(rep.upper, rep.lower), 64, needed);
    if acc.is_finite() && acc_err <= 1e-9 * acc.abs().max(1e-300) {
        return Ok(rep.prefactor * acc);
    }

    // Quadrature fallback on the original parameters.
    match euler_integral(upper, lower, ctrl) {
        Ok(v) => Ok(v),
        Err(_) if err.is_finite() => Err(Error::NoConvergence {
            op: "hyp3f2_unit",
            terms,
            estimate: rep.prefactor * sum,
            error: rep.prefactor.abs() * err,
        }),
        Err(e) => Err(e),
    }
}

struct Representation {
    upper: [f64; 3],
    lower: [f64; 2],
    prefactor: f64,
    exponent: f64,
}

/// The two-term Thomae relation
/// `3F2(a,b,c; d,e; 1) = Γ(e)Γ(s)/(Γ(e-a)Γ(s+a)) · 3F2(a, d-b, d-c; d, s+a; 1)`
/// (s the convergence exponent of the left side) turns the exponent into
/// `e - a`. Trying every (upper, lower) pairing yields up to six candidate
/// series; pick a terminating one if it exists, otherwise the largest
/// exponent.
fn best_representation(upper: [f64; 3], lower: [f64; 2], s: f64) -> Representation {
    let mut best = Representation {
        upper,
        lower,
        prefactor: 1.0,
        exponent: s,
    };
    let mut best_terminates = false;

    for i in 0..3 {
        for j in 0..2 {
            let a = upper[i];
            let e = lower[j];
            let d = lower[1 - j];
            let new_exp = e - a;
            if !(new_exp > 0.0) {
                continue;
            }
            let rest: Vec<f64> = upper
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &v)| v)
                .collect();
            let new_upper = [a, d - rest[0], d - rest[1]];
            let new_lower = [d, s + a];
            // The transformed series needs positive lower parameters and a
            // finite, nonzero prefactor.
            if !(new_lower[1] > 0.0) {
                continue;
            }
            let (_, sign_ea) = ln_gamma_signed(e - a);
            let (_, sign_sa) = ln_gamma_signed(s + a);
            if sign_ea == 0.0 || sign_sa == 0.0 {
                continue;
            }
            let terminates = new_upper[1..].iter().any(|&v| is_nonpositive_integer(v));
            if terminates && !best_terminates {
                best_terminates = true;
            } else if best_terminates || new_exp <= best.exponent {
                continue;
            }
            best = Representation {
                upper: new_upper,
                lower: new_lower,
                prefactor: gamma_ratio(&[e, s], &[e - a, s + a]),
                exponent: new_exp,
            };
        }
    }
    best
}

/// Term generator for the unit-argument series.
struct SeriesTerms {
    upper: [f64; 3],
    lower: [f64; 2],
    term: f64,
    n: f64,
}

impl SeriesTerms {
    fn new(upper: [f64; 3], lower: [f64; 2]) -> Self {
        SeriesTerms {
            upper,
            lower,
            term: 1.0,
            n: 0.0,
        }
    }
}

impl Iterator for SeriesTerms {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        let t = self.term;
        let [a1, a2, a3] = self.upper;
        let [b1, b2] = self.lower;
        let n = self.n;
        self.term *= (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1.0));
        self.n += 1.0;
        Some(t)
    }
}

fn terminating_sum(upper: [f64; 3], lower: [f64; 2], ctrl: &SeriesControl) -> Result<f64> {
    let mut sum = 0.0;
    let mut it = SeriesTerms::new(upper, lower);
    for _ in 0..=ctrl.max_terms {
        let t = it.next().expect("series iterator is infinite");
        sum += t;
        if it.term == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        op: "hyp3f2_unit terminating sum",
        terms: ctrl.max_terms,
        estimate: sum,
        error: it.term.abs(),
    })
}

/// Direct summation with a power-law tail correction.
///
/// At geometric checkpoints the local decay exponent γ(n) is measured from
/// the term ratio and Richardson-extrapolated in 1/n; the remaining tail is
/// then `Σ_{k>n} t_k ≈ t_n n^γ (n+1/2)^(1-γ)/(γ-1)` (midpoint integral of
/// the fitted power law). The error estimate is the change of the corrected
/// sum between checkpoints. Returns `(value, error, terms_used)`.
fn tail_corrected_sum(
    upper: [f64; 3],
    lower: [f64; 2],
    exponent: f64,
    ctrl: &SeriesControl,
) -> (f64, f64, usize) {
    let mut it = SeriesTerms::new(upper, lower);
    let mut sum = 0.0f64;
    let mut prev_term = f64::NAN;
    let mut last_sign_change = 0usize;
    let mut checkpoint = 32usize;
    let mut prev_corrected: Option<(f64, f64)> = None; // (gamma_at_prev, corrected)
    let mut prev_gamma: Option<(usize, f64)> = None;
    let mut best = (f64::NAN, f64::INFINITY);

    for n in 0..ctrl.max_terms {
        let t = it.next().expect("series iterator is infinite");
        sum += t;
        if it.term == 0.0 {
            return (sum, 0.0, n + 1);
        }
        if t * prev_term < 0.0 {
            last_sign_change = n;
        }
        prev_term = t;

        if n == checkpoint {
            checkpoint += (checkpoint / 2).max(16);
            if n < 2 * last_sign_change + 8 {
                continue;
            }
            let nf = n as f64;
            // Local decay exponent from the last term ratio.
            let ratio = it.term / t;
            if !(ratio > 0.0 && ratio < 1.0) {
                continue;
            }
            let gamma_n = -ratio.ln() / ((nf + 1.0) / nf).ln();
            // Richardson extrapolation of gamma(n) = gamma_inf + d/n.
            let gamma_inf = match prev_gamma {
                Some((m, g_prev)) => {
                    let mf = m as f64;
                    gamma_n + (gamma_n - g_prev) * mf / (nf - mf)
                }
                None => gamma_n,
            };
            prev_gamma = Some((n, gamma_n));
            if !(gamma_inf > 1.0) {
                continue;
            }
            let tail = t * (nf / (gamma_inf - 1.0)) * ((nf + 0.5) / nf).powf(1.0 - gamma_inf);
            let corrected = sum + tail;
            if let Some((_, prev)) = prev_corrected {
                let err = (corrected - prev).abs();
                if err < best.1 {
                    best = (corrected, err);
                }
                if err <= ctrl.rel_tol * corrected.abs() && tail.abs() < 0.5 * corrected.abs() {
                    return (corrected, err, n + 1);
                }
            }
            prev_corrected = Some((gamma_inf, corrected));
        }

        // Fast path: the raw tail is already negligible.
        if t.abs() / exponent.max(0.05) <= ctrl.rel_tol * sum.abs() && n > 16 {
            let tail = it.term * (n as f64 + 1.0) / exponent.max(1e-3);
            return (sum + tail, t.abs() / exponent.max(0.05), n + 1);
        }
    }

    if best.1.is_finite() {
        (best.0, best.1, ctrl.max_terms)
    } else {
        (sum, f64::INFINITY, ctrl.max_terms)
    }
}

/// Euler's integral: integrating out an upper parameter u against a lower
/// parameter e (with e - u > 0) leaves a ₂F₁ in the integrand:
/// `3F2 = Γ(e)/(Γ(u)Γ(e-u)) ∫₀¹ t^(u-1)(1-t)^(e-u-1) ₂F₁(p,q;d;t) dt`.
fn euler_integral(upper: [f64; 3], lower: [f64; 2], ctrl: &SeriesControl) -> Result<f64> {
    // Prefer the pairing with the largest (e - u) and a moderate inner
    // singularity, for the friendliest integrand.
    let mut choice: Option<(usize, usize, f64)> = None;
    for i in 0..3 {
        for j in 0..2 {
            let u = upper[i];
            let e = lower[j];
            if !(u > 0.0 && e - u > 0.0) {
                continue;
            }
            let score = e - u;
            if choice.map_or(true, |(_, _, best)| score > best) {
                choice = Some((i, j, score));
            }
        }
    }
    let (i, j, _) = choice.ok_or_else(|| {
        Error::domain(
            "hyp3f2_unit",
            "no admissible Euler pairing (need an upper u with 0 < u < some lower)",
        )
    })?;

    let u = upper[i];
    let e = lower[j];
    let d = lower[1 - j];
    let rest: Vec<f64> = upper
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, &v)| v)
        .collect();
    let (p, q) = (rest[0], rest[1]);
    // The 2F1 in the integrand behaves like (1-t)^sigma near t = 1 when
    // sigma = d-p-q < 0; fold that branch into the endpoint weight.
    let sigma = (d - p - q).min(0.0);
    let lam1 = e - u + sigma;
    if !(lam1 > 0.0) {
        return Err(Error::domain(
            "hyp3f2_unit",
            "Euler integrand not integrable at t = 1",
        ));
    }
    let inner_ctrl = SeriesControl {
        rel_tol: (0.1 * ctrl.rel_tol).max(1e-14),
        ..*ctrl
    };
    let s_inner = d - p - q;
    let near_log_case = (s_inner - s_inner.round()).abs() < 1e-3;
    let g = |t: f64| -> f64 {
        let x = 1.0 - t;
        if x >= 1e-8 || near_log_case {
            match hyp2f1(p, q, d, t, &inner_ctrl) {
                Ok(v) => v * x.powf(-sigma),
                Err(_) => f64::NAN,
            }
        } else {
            // Deep in the corner, assemble the two connection branches
            // directly so neither can overflow.
            let coef1 = gamma_ratio(&[d, s_inner], &[d - p, d - q]);
            let coef2 = gamma_ratio(&[d, -s_inner], &[p, q]);
            coef1 * x.powf(-sigma) + coef2 * x.powf(s_inner - sigma)
        }
    };
    let quad = quad::algebraic_01(g, u, lam1, 0.0, (0.3 * ctrl.rel_tol).max(1e-13))?;
    Ok(gamma_ratio(&[e], &[u, e - u]) * quad.value)
}
