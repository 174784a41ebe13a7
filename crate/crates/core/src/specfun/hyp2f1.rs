//! Gauss hypergeometric ₂F₁(a, b; c; z) for z ∈ [0, 1].
//!
//! Evaluation strategy:
//! - terminating series (a or b a nonpositive integer) summed exactly;
//! - direct power series for z < 0.75;
//! - the z ↔ 1-z connection formula for z ≥ 0.75;
//! - Gauss summation at z = 1 (requires c-a-b > 0);
//! - when c-a-b sits within 1e-3 of an integer (the logarithmic case of the
//!   connection formula), adaptive quadrature of Euler's integral instead,
//!   with an accelerated direct series as the last resort.

use super::gamma::gamma_ratio;
use super::levin;
use super::{is_nonpositive_integer, SeriesControl};
use crate::error::{Error, Result};
use crate::quad;

const Z_SWITCH: f64 = 0.75;
const INTEGER_GUARD: f64 = 1e-3;

/// ₂F₁(a, b; c; z) on z ∈ [0, 1], c > 0.
///
/// At z = 1 the series must be Gauss-summable (c - a - b > 0).
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    hyp2f1_zc(a, b, c, z, 1.0 - z, ctrl)
}

/// Like [`hyp2f1`] but with the complement `1 - z` supplied by the caller.
///
/// The CRPS formulas evaluate at `z = w = y^p/(q^p+y^p)` whose complement
/// they know to full relative precision; recomputing `1 - z` from a z near
/// one would truncate it to absolute 1e-16 and poison the connection
/// formula's `(1-z)^(c-a-b)` factor.
pub(crate) fn hyp2f1_zc(
    a: f64,
    b: f64,
    c: f64,
    z: f64,
    omz: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    ctrl.validate("hyp2f1")?;
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::domain("hyp2f1", "arguments must be finite"));
    }
    if !(c > 0.0) {
        return Err(Error::domain(
            "hyp2f1",
            format!("c must be positive, got {c}"),
        ));
    }
    if !(0.0..=1.0).contains(&z) || !(0.0..=1.0).contains(&omz) {
        return Err(Error::domain(
            "hyp2f1",
            format!("z must lie in [0,1], got {z}"),
        ));
    }

    // Normalize the upper-parameter order so symmetric calls take bitwise
    // identical paths.
    let (a, b) = if a <= b { (a, b) } else { (b, a) };

    if z == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return series(a, b, c, z, ctrl);
    }
    if omz == 0.0 {
        let s = c - a - b;
        if !(s > 0.0) {
            return Err(Error::domain(
                "hyp2f1",
                format!("z = 1 requires c - a - b > 0, got {s}"),
            ));
        }
        return Ok(gamma_ratio(&[c, s], &[c - a, c - b]));
    }
    if z < Z_SWITCH {
        return series(a, b, c, z, ctrl);
    }

    let s = c - a - b;
    if (s - s.round()).abs() < INTEGER_GUARD {
        // Logarithmic case of the connection formula: correctness over
        // speed, go through Euler's integral.
        return euler_integral(a, b, c, z, omz, ctrl)
            .or_else(|_| accelerated_series(a, b, c, z, ctrl));
    }

    let f1 = series(a, b, 1.0 - s, omz, ctrl)?;
    let f2 = series(c - a, c - b, 1.0 + s, omz, ctrl)?;
    let coef1 = gamma_ratio(&[c, s], &[c - a, c - b]);
    let coef2 = gamma_ratio(&[c, -s], &[a, b]);
    Ok(coef1 * f1 + omz.powf(s) * coef2 * f2)
}

/// Plain power series with a geometric tail bound.
///
/// Internal: also used with the (possibly negative, non-integer) lower
/// parameters produced by the connection formula.
fn series(a: f64, b: f64, c: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for n in 0..ctrl.max_terms {
        let n = n as f64;
        let ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        term *= ratio;
        if term == 0.0 {
            return Ok(sum);
        }
        sum += term;
        let rho = ratio.abs();
        if rho < 1.0 {
            let tail = term.abs() * rho / (1.0 - rho);
            if tail <= ctrl.rel_tol * sum.abs() && term.abs() <= ctrl.rel_tol * sum.abs() {
                return Ok(sum);
            }
        }
    }
    Err(Error::NoConvergence {
        op: "hyp2f1 series",
        terms: ctrl.max_terms,
        estimate: sum,
        error: term.abs(),
    })
}

/// Euler's integral representation, used when the connection formula is
/// degenerate. Needs one upper parameter u with 0 < u < c.
fn euler_integral(a: f64, b: f64, c: f64, z: f64, omz: f64, ctrl: &SeriesControl) -> Result<f64> {
    let (u, v) = if 0.0 < b && b < c {
        (b, a)
    } else if 0.0 < a && a < c {
        (a, b)
    } else {
        return Err(Error::domain(
            "hyp2f1",
            "no admissible Euler pairing (need 0 < a < c or 0 < b < c)",
        ));
    };
    // 1 - z t = (1 - t) + t (1 - z), kept in complement form so the
    // integrand stays accurate as z -> 1.
    let g = |t: f64| ((1.0 - t) + t * omz).powf(-v);
    let q = quad::algebraic_01(g, u, c - u, 0.0, 0.1 * ctrl.rel_tol)?;
    Ok(gamma_ratio(&[c], &[u, c - u]) * q.value)
}

/// Levin-accelerated direct series; last resort close to z = 1.
fn accelerated_series(a: f64, b: f64, c: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    let mut term = 1.0f64;
    let mut n = 0.0f64;
    let terms = std::iter::from_fn(move || {
        let t = term;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        n += 1.0;
        Some(t)
    });
    let (value, err) = levin::accelerate(terms, 64, ctrl.rel_tol);
    if value.is_finite() && err <= 1e-8 * value.abs() {
        Ok(value)
    } else {
        Err(Error::NoConvergence {
            op: "hyp2f1 accelerated series",
            terms: 64,
            estimate: value,
            error: err,
        })
    }
}
