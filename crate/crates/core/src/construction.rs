//! Assembly of the final polynomial `T = (1/m) sum_d sum_j w(d) F_{d,N_j}`
//! over a weight scheme and a geometric schedule of lengths, with a
//! certified floor and the resulting free-coefficient bound, plus the
//! schedule helpers and the Dirichlet-approximation diagnostic.

use crate::poly::{build_f, CosinePoly};
use crate::tau::{error_diagnostics, ErrorDiagnostics};
use crate::weights::WeightScheme;
use crate::{Error, Real, Result};
use num_traits::ToPrimitive;
use rustfft::FftNum;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct ConstructionConfig {
    pub scheme: WeightScheme,
    /// Strictly increasing lengths `N_1 < ... < N_m`.
    pub n_schedule: Vec<u64>,
    /// Starting grid for floor certification (raised to at least 4x the
    /// degree, then doubled adaptively).
    pub grid_size: usize,
    pub delta_target: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub d: u64,
    pub n_j: u64,
    pub shapes: ErrorDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionResult<T> {
    pub polynomial: CosinePoly<T>,
    pub certified_floor: T,
    /// `|floor| / (1 + |floor|)` when the floor is negative, else 0: the
    /// free coefficient of the shift-normalized member of the nonnegative
    /// class this run realizes.
    pub a0_bound: T,
    pub max_frequency: u64,
    pub diagnostics: Vec<DiagnosticsRow>,
}

/// Cap for the adaptive certification grid.
const CERT_GRID_CAP: usize = 1 << 23;

/// Geometric schedule `N_j = round(N0 * ratio^j)`, `j = 1..m`, deduplicated.
pub fn default_schedule(scheme: &WeightScheme, m: usize, ratio: f64, n0: u64) -> Result<Vec<u64>> {
    if m < 1 {
        return Err(Error::Domain("schedule needs m >= 1".into()));
    }
    if ratio <= 1.0 {
        return Err(Error::Domain("schedule ratio must exceed 1".into()));
    }
    let mut schedule = Vec::with_capacity(m);
    for j in 1..=m {
        let nj = (n0 as f64 * ratio.powi(j as i32)).round();
        if !nj.is_finite() || nj > u64::MAX as f64 {
            return Err(Error::Resource("schedule overflows".into()));
        }
        schedule.push(nj as u64);
    }
    schedule.dedup();
    let max_d = scheme.members.iter().map(|&(d, _)| d).max().unwrap_or(1);
    let last = *schedule.last().unwrap();
    let limit = max_d
        .checked_mul(last)
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::Resource("schedule exceeds budget: d*N_m overflows".into()))?;
    crate::arith::sieve_budget_check(limit)?;
    Ok(schedule)
}

/// The paper's own (symbolic) schedule at a given `delta`; astronomically
/// beyond desk scale, printed for comparison and never built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperSchedule {
    pub delta: f64,
    /// `4/delta <= m < 4/delta + 1`
    pub m: u64,
    /// `Q = exp((log 1/delta)^2)`
    pub q: f64,
    /// `D0 = Q^2`
    pub d0: f64,
    /// `D1 = Q^4`
    pub d1: f64,
    /// `N0 = exp(c2 (log D1)^2)` with `c2` an unknowable absolute constant
    pub n0_formula: String,
    pub nj_formula: String,
}

pub fn paper_schedule(delta: f64) -> Result<PaperSchedule> {
    if delta <= 0.0 || delta >= 1.0 {
        return Err(Error::Domain("delta must lie in (0,1)".into()));
    }
    let m = (4.0 / delta).ceil().max(4.0 / delta) as u64;
    let log_inv = (1.0 / delta).ln();
    let q = (log_inv * log_inv).exp();
    Ok(PaperSchedule {
        delta,
        m,
        q,
        d0: q * q,
        d1: q.powi(4),
        n0_formula: format!("exp(c2 * (log D1)^2) = exp(c2 * {:.6e})", (q.powi(4)).ln().powi(2)),
        nj_formula: "N_j = N0 * D1^(8j), j = 1..m".to_string(),
    })
}

/// Builds `T = (1/m) sum_d sum_j w(d) F_{d, N_j}` and certifies its floor.
pub fn assemble<T: Real + FftNum>(config: &ConstructionConfig) -> Result<ConstructionResult<T>> {
    if config.scheme.members.is_empty() {
        return Err(Error::Domain("construction needs a nonempty scheme".into()));
    }
    if config.n_schedule.is_empty() {
        return Err(Error::Domain("construction needs a nonempty schedule".into()));
    }
    if !config.n_schedule.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("schedule must be strictly increasing".into()));
    }
    let m = config.n_schedule.len();
    let inv_m = T::one() / T::from_usize(m).unwrap();

    let mut pieces: Vec<(T, CosinePoly<T>)> = Vec::with_capacity(config.scheme.members.len() * m);
    let mut diagnostics = Vec::new();
    let max_d = config.scheme.members.iter().map(|&(d, _)| d).max().unwrap() as f64;
    let r_report = *config.n_schedule.last().unwrap() as f64;
    let q_report = r_report.sqrt().max(2.0);
    for (d, w) in &config.scheme.members {
        let wt = T::from_f64(w.to_f64().ok_or_else(|| {
            Error::Domain("weight does not fit in a float".into())
        })?)
        .unwrap();
        for &nj in &config.n_schedule {
            let f = build_f::<T>(*d, nj)?;
            pieces.push((wt * inv_m, f));
            diagnostics.push(DiagnosticsRow {
                d: *d,
                n_j: nj,
                shapes: error_diagnostics(*d, (nj as f64).max(2.0), q_report, r_report, max_d),
            });
        }
    }
    let parts: Vec<(T, &CosinePoly<T>)> = pieces.iter().map(|(w, p)| (*w, p)).collect();
    let polynomial = CosinePoly::combine(&parts);

    let at_zero = polynomial.evaluate(T::zero());
    if (at_zero - T::one()).abs() > T::from_f64(1e-9).unwrap() {
        return Err(Error::Domain(format!(
            "assembled polynomial fails normalization: T(0) = {at_zero}"
        )));
    }

    let certified_floor = adaptive_floor(&polynomial, config.grid_size)?;
    let a0_bound = if certified_floor < T::zero() {
        let s = certified_floor.abs();
        s / (T::one() + s)
    } else {
        T::zero()
    };
    Ok(ConstructionResult {
        max_frequency: polynomial.degree(),
        polynomial,
        certified_floor,
        a0_bound,
        diagnostics,
    })
}

/// Grid certification starting from `max(grid_size, 4 * degree)` rounded up
/// to a power of two, doubling until the Lipschitz slack drops below 10% of
/// the observed grid minimum (or the grid cap).
fn adaptive_floor<T: Real + FftNum>(poly: &CosinePoly<T>, grid_size: usize) -> Result<T> {
    let mut grid = grid_size
        .max(4 * poly.degree() as usize)
        .max(16)
        .next_power_of_two();
    loop {
        let cert = poly.certified_min(grid)?;
        let slack = cert.grid_min - cert.certified_lower;
        let scale = cert.grid_min.abs().max(T::from_f64(1e-6).unwrap());
        if slack <= T::from_f64(0.1).unwrap() * scale || grid >= CERT_GRID_CAP {
            return Ok(cert.certified_lower);
        }
        grid *= 2;
    }
}

/// One row of the finite-scale trend table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub max_frequency: u64,
    pub a0_bound: f64,
    pub inv_log_n: f64,
    pub a0_times_log_n: f64,
}

/// Runs each configuration and tabulates `(n, a0_bound, 1/log n,
/// a0_bound * log n)`. No monotonicity is claimed; the table reports what is
/// measured.
pub fn sweep(configs: &[ConstructionConfig]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(configs.len());
    for config in configs {
        let result = assemble::<f64>(config)?;
        let n = result.max_frequency as f64;
        rows.push(SweepRow {
            max_frequency: result.max_frequency,
            a0_bound: result.a0_bound,
            inv_log_n: 1.0 / n.ln(),
            a0_times_log_n: result.a0_bound * n.ln(),
        });
    }
    Ok(rows)
}

/// Smallest `q <= R` with `|theta - a/q| <= 1/(qR)`, by direct search.
/// Existence is Dirichlet's approximation theorem.
pub fn dirichlet_approx(theta: f64, big_r: u64) -> Result<(i64, u64)> {
    if big_r == 0 {
        return Err(Error::Domain("R must be positive".into()));
    }
    if big_r > 10_000_000 {
        return Err(Error::Resource(format!("R = {big_r} beyond the search cap")));
    }
    for q in 1..=big_r {
        let a = (theta * q as f64).round();
        if (theta - a / q as f64).abs() <= 1.0 / (q as f64 * big_r as f64) {
            return Ok((a as i64, q));
        }
    }
    // unreachable for real theta by Dirichlet; guard against NaN inputs
    Err(Error::Domain(format!("no approximation found for theta = {theta}")))
}
