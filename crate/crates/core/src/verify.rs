//! Independent verification oracles and the reference-table harness.
//!
//! Two routes that share nothing with the closed forms beyond the CDF:
//!
//! - [`crps_quadrature`]: adaptive quadrature of the defining integral
//!   `∫₀^y F² dx + ∫_y^∞ (1-F)² dx` after the change of variables
//!   `u = x^p/(q^p+x^p)` that compactifies the half-line (plus power
//!   substitutions that absorb the algebraic endpoint behavior);
//! - [`crps_mc`]: seeded, chunk-deterministic Monte Carlo of the
//!   expectation form `E|X-y| - E[X(2F(X)-1)]`.
//!
//! [`table1_report`] reruns the paper-scale verification table: the
//! analytic column is checked against the printed values, the Monte Carlo
//! column is recomputed fresh (it is seed-dependent and judged only by
//! interval containment, never digit matching).

use crate::crps::{crps_auto, crps_dagum, crps_gbp, crps_log_logistic, crps_singh_maddala, Formula};
use crate::error::{Error, Result};
use crate::gbp::{GbpParams, SAMPLE_CHUNK};
use crate::quad;
use crate::specfun::{reg_inc_beta_over_pow, SeriesControl};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

// ---------------------------------------------------------------------------
// Quadrature oracle
// ---------------------------------------------------------------------------

/// Tolerances for the quadrature oracle. The Heaviside split point is the
/// observation itself, passed to [`crps_quadrature`] alongside.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::domain(
                "QuadratureSpec",
                "tolerances must be positive",
            ));
        }
        Ok(())
    }
}

/// CRPS by adaptive quadrature of the defining integral.
///
/// Requires `beta * p > 1/2` so the upper-tail integrand `(1-F)²` is
/// integrable. On `u = x^p/(q^p+x^p)` the two pieces become beta-type
/// integrals with endpoint exponents `2α + 1/p` (at 0) and `2β - 1/p`
/// (at 1); dividing the squared regularized incomplete beta by its leading
/// power keeps the transformed integrands bounded.
pub fn crps_quadrature(params: &GbpParams, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(y >= 0.0) {
        return Err(Error::domain(
            "crps_quadrature",
            format!("y must be nonnegative, got {y}"),
        ));
    }
    let (alpha, beta, p, q) = (params.alpha(), params.beta(), params.p(), params.q());
    if !(beta * p > 0.5) {
        return Err(Error::domain(
            "crps_quadrature",
            format!(
                "integrand (1-F)^2 not integrable: beta * p = {} <= 1/2",
                beta * p
            ),
        ));
    }
    let ip = 1.0 / p;
    let (w, omw) = {
        let pt = crate::crps::WorkPoint::new(params, y)?;
        (pt.w, pt.one_minus_w())
    };

    // Lower piece: (q/p) w^(2α+1/p) ∫₀¹ τ^(2α+1/p-1) g1(wτ) dτ with
    // g1(u) = [I_u(α,β)/u^α]² (1-u)^(-1/p-1).
    let lower = if w == 0.0 {
        0.0
    } else {
        let lam = 2.0 * alpha + ip;
        let g1 = |t: f64| {
            let u = w * t;
            let r = reg_inc_beta_over_pow(u, alpha, beta);
            r * r * (1.0 - u).powf(-ip - 1.0)
        };
        let qd = quad::algebraic_01(g1, lam, 1.0, spec.abs_tol, spec.rel_tol)?;
        (q / p) * w.powf(lam) * qd.value
    };

    // Upper piece, reflected to x = 1-u: (q/p) (1-w)^(2β-1/p)
    // ∫₀¹ τ^(2β-1/p-1) g2((1-w)τ) dτ with
    // g2(x) = [I_x(β,α)/x^β]² (1-x)^(1/p-1).
    let upper = if omw == 0.0 {
        0.0
    } else {
        let lam = 2.0 * beta - ip;
        let g2 = |t: f64| {
            let x = omw * t;
            let r = reg_inc_beta_over_pow(x, beta, alpha);
            r * r * (1.0 - x).powf(ip - 1.0)
        };
        let qd = quad::algebraic_01(g2, lam, 1.0, spec.abs_tol, spec.rel_tol)?;
        (q / p) * omw.powf(lam) * qd.value
    };

    Ok(lower + upper)
}

// ---------------------------------------------------------------------------
// Monte Carlo oracle
// ---------------------------------------------------------------------------

/// Which Monte Carlo estimator to average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    /// Per-draw statistic `|x-y| - x (2F(x) - 1)`.
    CdfForm,
    /// Per-pair statistic `(|x-y| + |x'-y|)/2 - |x-x'|/2` over disjoint
    /// draw pairs.
    EnergyForm,
}

impl std::str::FromStr for Estimator {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cdf-form" | "cdf" => Ok(Estimator::CdfForm),
            "energy-form" | "energy" => Ok(Estimator::EnergyForm),
            other => Err(format!("unknown estimator {other:?}")),
        }
    }
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    /// Number of draws.
    pub n: usize,
    /// RNG seed; the estimate is a pure function of (n, seed, estimator,
    /// chunk).
    pub seed: u64,
    pub estimator: Estimator,
    /// Draws per deterministic chunk. Chunks may run on any number of
    /// workers; partial sums are reduced in chunk order, so results are
    /// bitwise reproducible regardless of parallelism.
    pub chunk: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n: 1_000_000,
            seed: 42,
            estimator: Estimator::CdfForm,
            chunk: SAMPLE_CHUNK,
        }
    }
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkStat {
    sum: f64,
    sum_sq: f64,
    count: u64,
}

fn cdf_form_stat(params: &GbpParams, y: f64, xs: &[f64]) -> ChunkStat {
    let mut s = ChunkStat::default();
    for &x in xs {
        let f = params.cdf(x).expect("samples are nonnegative");
        let sf = params.sf(x).expect("samples are nonnegative");
        let g = (x - y).abs() - x * (f - sf);
        s.sum += g;
        s.sum_sq += g * g;
        s.count += 1;
    }
    s
}

fn energy_form_stat(y: f64, xs: &[f64]) -> ChunkStat {
    let mut s = ChunkStat::default();
    for pair in xs.chunks_exact(2) {
        let (x1, x2) = (pair[0], pair[1]);
        let g = 0.5 * ((x1 - y).abs() + (x2 - y).abs()) - 0.5 * (x1 - x2).abs();
        s.sum += g;
        s.sum_sq += g * g;
        s.count += 1;
    }
    s
}

/// Seeded Monte Carlo CRPS estimate.
///
/// Deterministic given the configuration, independent of worker count:
/// each chunk's draws are a pure function of (seed, chunk index) and the
/// per-chunk partial sums are combined in index order.
pub fn crps_mc(params: &GbpParams, y: f64, cfg: &McConfig) -> Result<McEstimate> {
    if cfg.n < 2 {
        return Err(Error::domain("crps_mc", "need at least 2 draws"));
    }
    if cfg.chunk == 0 {
        return Err(Error::domain("crps_mc", "chunk must be >= 1"));
    }
    let n_chunks = cfg.n.div_ceil(cfg.chunk);
    let stats: Vec<ChunkStat> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let len = cfg.chunk.min(cfg.n - c * cfg.chunk);
            let mut buf = Vec::with_capacity(len);
            params.sample_chunk(cfg.seed, c as u64, len, &mut buf);
            match cfg.estimator {
                Estimator::CdfForm => cdf_form_stat(params, y, &buf),
                Estimator::EnergyForm => energy_form_stat(y, &buf),
            }
        })
        .collect();

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut count = 0u64;
    for s in &stats {
        sum += s.sum;
        sum_sq += s.sum_sq;
        count += s.count;
    }
    let count_f = count as f64;
    let mean = sum / count_f;
    let var = ((sum_sq - count_f * mean * mean) / (count_f - 1.0)).max(0.0);
    Ok(McEstimate {
        value: mean,
        std_error: (var / count_f).sqrt(),
    })
}

// ---------------------------------------------------------------------------
// Table 1 harness
// ---------------------------------------------------------------------------

/// One parameter row of the reference table, with the analytic value as
/// printed there. The two rows whose power column prints "3.14" were
/// computed with p = 3.14159 (π to five decimals): that is the only
/// reading that reproduces both printed analytic values to six decimals,
/// so that is what they carry here.
#[derive(Debug, Clone, Copy)]
pub struct Table1Case {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub y: f64,
    pub printed: f64,
}

const PI5: f64 = 3.14159;

pub const TABLE1: [Table1Case; 15] = [
    Table1Case { alpha: 1.0, beta: 2.0, p: 1.5, q: 1.0, y: 1.0, printed: 0.253261 },
    Table1Case { alpha: 1.0, beta: 2.0, p: 1.5, q: 1.0, y: 0.5, printed: 0.130956 },
    Table1Case { alpha: 1.0, beta: 2.0, p: 1.5, q: 1.0, y: 2.0, printed: 0.982212 },
    Table1Case { alpha: 2.0, beta: 3.0, p: 2.0, q: 1.0, y: 1.0, printed: 0.133398 },
    Table1Case { alpha: 1.0, beta: 3.0, p: 2.0, q: 2.0, y: 1.0, printed: 0.157655 },
    Table1Case { alpha: 0.5, beta: 2.0, p: 2.0, q: 1.0, y: 1.0, printed: 0.385010 },
    Table1Case { alpha: 1.0, beta: 2.0, p: 3.0, q: 1.0, y: 1.0, printed: 0.149604 },
    Table1Case { alpha: 1.0, beta: 2.0, p: 2.0, q: 1.0, y: 1.0, printed: 0.205476 },
    Table1Case { alpha: 1.0, beta: 3.0, p: 1.5, q: 1.0, y: 1.0, printed: 0.358729 },
    Table1Case { alpha: 1.0, beta: 2.0, p: PI5, q: 1.0, y: 1.0, printed: 0.144072 },
    Table1Case { alpha: 2.0, beta: 1.0, p: 2.0, q: 1.0, y: 1.0, printed: 0.420078 },
    Table1Case { alpha: 3.0, beta: 1.0, p: 1.5, q: 1.0, y: 1.0, printed: 1.131873 },
    Table1Case { alpha: 3.0, beta: 1.0, p: PI5, q: 1.0, y: 1.0, printed: 0.363000 },
    Table1Case { alpha: 2.0, beta: 2.0, p: 1.0, q: 1.0, y: 2.0, printed: 0.577778 },
    Table1Case { alpha: 2.0, beta: 1.5, p: 1.0, q: 3.0, y: 1.0, printed: 2.646148 },
];

/// One computed row of the verification report.
#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub y: f64,
    pub analytic: f64,
    pub printed: f64,
    pub mc: f64,
    pub mc_std_error: f64,
    pub rel_error: f64,
    pub formula: Formula,
    /// |analytic - printed| within half an ulp of the printed precision.
    pub analytic_matches_printed: bool,
    /// |analytic - mc| <= 5 standard errors.
    pub mc_within_5se: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Report {
    pub n: usize,
    pub seed: u64,
    pub rows: Vec<Table1Row>,
}

/// Recomputes the verification table: the analytic column via the closed
/// forms (auto-dispatched), the Monte Carlo column fresh from
/// (n, seed).
pub fn table1_report(n: usize, seed: u64) -> Result<Table1Report> {
    if n < 10_000 {
        return Err(Error::domain("table1_report", "need n >= 10^4 draws"));
    }
    let ctrl = SeriesControl::default();
    let rows: Vec<Table1Row> = TABLE1
        .par_iter()
        .map(|case| {
            let base = Table1Row {
                alpha: case.alpha,
                beta: case.beta,
                p: case.p,
                q: case.q,
                y: case.y,
                analytic: f64::NAN,
                printed: case.printed,
                mc: f64::NAN,
                mc_std_error: f64::NAN,
                rel_error: f64::NAN,
                formula: Formula::Gbp,
                analytic_matches_printed: false,
                mc_within_5se: false,
                error: None,
            };
            let params = match GbpParams::new(case.alpha, case.beta, case.p, case.q) {
                Ok(p) => p,
                Err(e) => {
                    return Table1Row {
                        error: Some(e.to_string()),
                        ..base
                    }
                }
            };
            let analytic = match crps_auto(&params, case.y, &ctrl) {
                Ok(b) => b,
                Err(e) => {
                    return Table1Row {
                        error: Some(e.to_string()),
                        ..base
                    }
                }
            };
            let cfg = McConfig {
                n,
                seed,
                ..McConfig::default()
            };
            let mc = match crps_mc(&params, case.y, &cfg) {
                Ok(m) => m,
                Err(e) => {
                    return Table1Row {
                        analytic: analytic.crps,
                        formula: analytic.formula,
                        error: Some(e.to_string()),
                        ..base
                    }
                }
            };
            Table1Row {
                analytic: analytic.crps,
                mc: mc.value,
                mc_std_error: mc.std_error,
                rel_error: (mc.value - analytic.crps).abs() / analytic.crps.abs(),
                formula: analytic.formula,
                analytic_matches_printed: (analytic.crps - case.printed).abs() <= 5e-7,
                mc_within_5se: (mc.value - analytic.crps).abs() <= 5.0 * mc.std_error,
                error: None,
                ..base
            }
        })
        .collect();
    Ok(Table1Report { n, seed, rows })
}

impl Table1Report {
    pub fn all_pass(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.error.is_none() && r.analytic_matches_printed && r.mc_within_5se)
    }

    /// Aligned text rendering, mirroring the reference table's layout.
    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "CRPS verification table (n = {}, seed = {})",
            self.n, self.seed
        );
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>5} {:>5} {:>5}  {:>10} {:>10} {:>10} {:>9}  {:<14} {}",
            "alpha", "beta", "p", "q", "y", "analytic", "mc", "mc_se", "rel_err", "formula", "ok"
        );
        for r in &self.rows {
            if let Some(err) = &r.error {
                let _ = writeln!(
                    out,
                    "{:>5.2} {:>5.2} {:>5.2} {:>5.2} {:>5.2}  error: {}",
                    r.alpha, r.beta, r.p, r.q, r.y, err
                );
                continue;
            }
            let ok = r.analytic_matches_printed && r.mc_within_5se;
            let _ = writeln!(
                out,
                "{:>5.2} {:>5.2} {:>5.2} {:>5.2} {:>5.2}  {:>10.6} {:>10.6} {:>10.2e} {:>9.2e}  {:<14} {}",
                r.alpha,
                r.beta,
                r.p,
                r.q,
                r.y,
                r.analytic,
                r.mc,
                r.mc_std_error,
                r.rel_error,
                r.formula.to_string(),
                if ok { "pass" } else { "FAIL" }
            );
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Reduction identities
// ---------------------------------------------------------------------------

/// Worst relative discrepancy between one formula pair over a random grid.
#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub name: &'static str,
    pub points: usize,
    pub max_rel_discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub pairs: Vec<PairCheck>,
    /// Worst deviation of the four formulas from 1 - π/4 at
    /// (α=β=1, p=2, q=1, y=1).
    pub special_point_max_dev: f64,
}

impl ReductionReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.special_point_max_dev <= 1e-10
            && self.pairs.iter().all(|p| p.max_rel_discrepancy <= tol)
    }

    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for p in &self.pairs {
            let _ = writeln!(
                out,
                "{:<32} {:>4} points  max rel discrepancy {:.3e}",
                p.name, p.points, p.max_rel_discrepancy
            );
        }
        let _ = writeln!(
            out,
            "{:<32} all formulas vs 1 - pi/4: max dev {:.3e}",
            "special point (p=2,q=1,y=1)", self.special_point_max_dev
        );
        out
    }
}

/// Compares the general formula with each specialization over random valid
/// parameters (all with `beta * p > 1.05`), plus the common log-logistic
/// point where every route must reproduce 1 - π/4.
pub fn reduction_check(grid_size: usize, seed: u64) -> Result<ReductionReport> {
    if grid_size == 0 {
        return Err(Error::domain("reduction_check", "grid_size must be >= 1"));
    }
    let ctrl = SeriesControl::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let rel = |a: f64, b: f64| (a - b).abs() / (1.0 + b.abs());
    let mut pairs = Vec::new();

    // GBP(alpha=1) vs Singh-Maddala.
    let mut worst = 0.0f64;
    for _ in 0..grid_size {
        let p = rng.random_range(0.5..5.0);
        let bp = (rng.random_range(1.06f64.ln()..20.0f64.ln())).exp();
        let b = bp / p;
        let q = (rng.random_range(0.2f64.ln()..5.0f64.ln())).exp();
        let y = rng.random_range(0.0..4.0 * q);
        let general = crps_gbp(&GbpParams::new(1.0, b, p, q)?, y, &ctrl)?.crps;
        let special = crps_singh_maddala(b, p, q, y, &ctrl)?.crps;
        worst = worst.max(rel(general, special));
    }
    pairs.push(PairCheck {
        name: "gbp vs singh-maddala (alpha=1)",
        points: grid_size,
        max_rel_discrepancy: worst,
    });

    // GBP(beta=1) vs Dagum.
    let mut worst = 0.0f64;
    for _ in 0..grid_size {
        let p = rng.random_range(1.06..6.0);
        let a = rng.random_range(0.2..5.0);
        let q = (rng.random_range(0.2f64.ln()..5.0f64.ln())).exp();
        let y = rng.random_range(0.0..4.0 * q);
        let general = crps_gbp(&GbpParams::new(a, 1.0, p, q)?, y, &ctrl)?.crps;
        let special = crps_dagum(a, p, q, y, &ctrl)?.crps;
        worst = worst.max(rel(general, special));
    }
    pairs.push(PairCheck {
        name: "gbp vs dagum (beta=1)",
        points: grid_size,
        max_rel_discrepancy: worst,
    });

    // Singh-Maddala(beta=1) vs log-logistic.
    let mut worst = 0.0f64;
    for _ in 0..grid_size {
        let p = rng.random_range(1.06..6.0);
        let q = (rng.random_range(0.2f64.ln()..5.0f64.ln())).exp();
        let y = rng.random_range(0.0..4.0 * q);
        let sm = crps_singh_maddala(1.0, p, q, y, &ctrl)?.crps;
        let ll = crps_log_logistic(p, q, y, &ctrl)?.crps;
        worst = worst.max(rel(sm, ll));
    }
    pairs.push(PairCheck {
        name: "singh-maddala vs log-logistic",
        points: grid_size,
        max_rel_discrepancy: worst,
    });

    // Dagum(alpha=1) vs log-logistic.
    let mut worst = 0.0f64;
    for _ in 0..grid_size {
        let p = rng.random_range(1.06..6.0);
        let q = (rng.random_range(0.2f64.ln()..5.0f64.ln())).exp();
        let y = rng.random_range(0.0..4.0 * q);
        let dg = crps_dagum(1.0, p, q, y, &ctrl)?.crps;
        let ll = crps_log_logistic(p, q, y, &ctrl)?.crps;
        worst = worst.max(rel(dg, ll));
    }
    pairs.push(PairCheck {
        name: "dagum vs log-logistic",
        points: grid_size,
        max_rel_discrepancy: worst,
    });

    // Common point: all four formulas at the log-logistic (p=2,q=1,y=1).
    let want = 1.0 - std::f64::consts::FRAC_PI_4;
    let params = GbpParams::new(1.0, 1.0, 2.0, 1.0)?;
    let values = [
        crps_gbp(&params, 1.0, &ctrl)?.crps,
        crps_singh_maddala(1.0, 2.0, 1.0, 1.0, &ctrl)?.crps,
        crps_dagum(1.0, 2.0, 1.0, 1.0, &ctrl)?.crps,
        crps_log_logistic(2.0, 1.0, 1.0, &ctrl)?.crps,
    ];
    let special_point_max_dev = values
        .iter()
        .map(|v| (v - want).abs())
        .fold(0.0f64, f64::max);

    Ok(ReductionReport {
        pairs,
        special_point_max_dev,
    })
}

// ---------------------------------------------------------------------------
// Quadrature-vs-analytic check over the reference table
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct QuadCheckRow {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub y: f64,
    pub analytic: f64,
    pub quadrature: f64,
    pub rel_diff: f64,
}

/// Closed form vs the quadrature oracle on every reference-table row.
pub fn quad_table1_check(spec: &QuadratureSpec) -> Result<Vec<QuadCheckRow>> {
    let ctrl = SeriesControl::default();
    TABLE1
        .iter()
        .map(|case| {
            let params = GbpParams::new(case.alpha, case.beta, case.p, case.q)?;
            let analytic = crps_auto(&params, case.y, &ctrl)?.crps;
            let quadrature = crps_quadrature(&params, case.y, spec)?;
            Ok(QuadCheckRow {
                alpha: case.alpha,
                beta: case.beta,
                p: case.p,
                q: case.q,
                y: case.y,
                analytic,
                quadrature,
                rel_diff: (analytic - quadrature).abs() / (1.0 + analytic.abs()),
            })
        })
        .collect()
}
