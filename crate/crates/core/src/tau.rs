//! Main-term arithmetic for the construction: the function `tau(d, q)`, the
//! exponential sums `tau_{a,d,q}`, an executable form of the identity
//! relating them, and the non-rigorous error-term shape diagnostics.

use crate::arith::{euler_phi, is_squarefree};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The main-term function, exact rational.
///
/// With `r = q / gcd(q, d)`: returns `1` if `q | d`, `0` if `gcd(d, r) > 1`
/// or `r` is not square-free, and `-1/phi(r)` otherwise.
pub fn tau(d: u64, q: u64) -> BigRational {
    assert!(d >= 1 && q >= 1);
    if d % q == 0 {
        return BigRational::one();
    }
    let r = q / q.gcd(&d);
    if d.gcd(&r) > 1 || !is_squarefree(r) {
        return BigRational::zero();
    }
    -BigRational::new(BigInt::one(), BigInt::from(euler_phi(r)))
}

/// The exponential sum `tau_{a,d,q} = sum over 0 <= m < q with
/// gcd(m*d + 1, q) = 1 of e(m*a/q)`.
pub fn tau_adq(a: i64, d: u64, q: u64) -> Complex64 {
    assert!(q >= 1);
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..q {
        if (m * d + 1).gcd(&q) == 1 {
            let phase = 2.0 * std::f64::consts::PI * (m as i64 * a) as f64 / q as f64;
            sum += Complex64::new(phase.cos(), phase.sin());
        }
    }
    sum
}

/// Checks `|tau_{a*,d,r}| / phi(r) == |tau(d, q)|` with `r = q/gcd(q,d)` and
/// `a* = a*d/gcd(q,d)`, within `1e-9` on the complex side.
///
/// Preconditions: `gcd(a, q) = 1` and `r > 1`; violations are domain errors.
pub fn check_lemma_tau(d: u64, q: u64, a: u64) -> Result<bool> {
    assert!(d >= 1 && q >= 1);
    if a.gcd(&q) != 1 {
        return Err(Error::Domain(format!("need gcd(a, q) = 1, got a={a}, q={q}")));
    }
    let g = q.gcd(&d);
    let r = q / g;
    if r <= 1 {
        return Err(Error::Domain(format!("need r = q/gcd(q,d) > 1, got d={d}, q={q}")));
    }
    let a_star = (a * d / g) as i64;
    let lhs = tau_adq(a_star, d, r).norm() / euler_phi(r) as f64;
    let rhs = tau(d, q).abs().to_f64().expect("tau is a small rational");
    Ok((lhs - rhs).abs() <= 1e-9)
}

/// Shape diagnostics for the three error-term magnitudes, with implied
/// constant 1. These guide parameter schedules; they are never rigorous
/// bounds (the underlying big-O constants are not computable here).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ErrorDiagnostics {
    /// `1/D1 + N/R`
    pub e1: f64,
    /// `D1*N/R`
    pub e2: f64,
    /// `D1^2 (log N)^4 (1/sqrt(Q) + N^{-1/5} + sqrt(R/N))`
    pub e3: f64,
}

/// Evaluates the three error-term shapes for the given parameters.
/// `d` is carried for reporting symmetry with the per-`(d, N)` call sites;
/// the shapes themselves are uniform in `d <= D1`.
pub fn error_diagnostics(d: u64, n: f64, q: f64, r: f64, d1: f64) -> ErrorDiagnostics {
    assert!(d >= 1 && n >= 2.0 && q > 0.0 && r > 0.0 && d1 > 0.0);
    let log_n = n.ln();
    ErrorDiagnostics {
        e1: 1.0 / d1 + n / r,
        e2: d1 * n / r,
        e3: d1 * d1 * log_n.powi(4) * (1.0 / q.sqrt() + n.powf(-0.2) + (r / n).sqrt()),
    }
}
