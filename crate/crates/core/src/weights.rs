//! The weighted collection `D` whose tau main terms cancel: construction of
//! the scheme, the exhaustive representative class of moduli `q`, and exact
//! verification of the cancellation inequality `sum w(d) tau(d, q) >= -delta/2`.

use crate::arith::{euler_phi, sieve_primes};
use crate::tau::tau;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Generating parameters for a weight scheme.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SchemeParams {
    pub delta: f64,
    pub p_minus: u64,
    pub p_plus: u64,
    pub l: u32,
    /// The exceptional modulus `d_D`, folded into `d*` when present.
    pub d_exceptional: Option<u64>,
}

impl SchemeParams {
    /// The paper's own parameterization: `p+ = ceil(2/delta) + 1`,
    /// `l = ceil(2 log(1/delta) (2 log log(2/delta) / log 2 + 1))`,
    /// `p- = 2 l^2 + 1`.
    ///
    /// Degenerate at desk scale for moderate `delta` (`p-` overtakes `p+`,
    /// leaving no interval primes); feasibility is reported by
    /// [`build_scheme`], never assumed.
    pub fn paper_preset(delta: f64, d_exceptional: Option<u64>) -> Self {
        assert!(delta > 0.0 && delta < 1.0);
        let p_plus = (2.0 / delta).ceil() as u64 + 1;
        let log_inv = (1.0 / delta).ln();
        let l = (2.0 * log_inv * (2.0 * (2.0 / delta).ln().ln() / 2f64.ln() + 1.0)).ceil();
        let l = l.max(0.0) as u32;
        let p_minus = 2 * (l as u64) * (l as u64) + 1;
        SchemeParams { delta, p_minus, p_plus, l, d_exceptional }
    }
}

/// The collection `D` with exact rational weights summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightScheme {
    pub params: SchemeParams,
    /// `d* = prod of primes <= p-`, times `d_D` in the exceptional case.
    pub d_star: u64,
    /// Pairs `(d, w(d))`, ascending in `d`.
    pub members: Vec<(u64, BigRational)>,
    /// Primes in `(p-, p+]` coprime to `d*`; the alphabet of the `d` parts
    /// and of the representative `q` class.
    pub interval_primes: Vec<u64>,
}

/// Outcome of the exhaustive cancellation check.
#[derive(Debug, Clone, PartialEq)]
pub struct CancellationReport {
    pub q_checked: String,
    pub min_value: BigRational,
    pub argmin_q: u64,
    pub passed: bool,
}

fn checked_prod(factors: impl IntoIterator<Item = u64>) -> Result<u64> {
    factors.into_iter().try_fold(1u64, |acc, f| {
        acc.checked_mul(f)
            .ok_or_else(|| Error::Resource("scheme modulus overflows u64".into()))
    })
}

/// Builds the scheme `D(l)`: members `d* * d'` over all products `d'` of
/// exactly `l` distinct interval primes, weighted `w = (1/W) * 1/phi(d')`
/// with `W = sum 1/phi(d')`.
pub fn build_scheme(params: &SchemeParams) -> Result<WeightScheme> {
    if params.delta <= 0.0 || params.delta >= 1.0 {
        return Err(Error::Domain(format!("delta must lie in (0,1), got {}", params.delta)));
    }
    let mut d_star_factors: Vec<u64> = if params.p_minus >= 2 {
        sieve_primes(params.p_minus.max(2))?
            .primes
            .into_iter()
            .filter(|&p| p <= params.p_minus)
            .collect()
    } else {
        Vec::new()
    };
    if let Some(d_exc) = params.d_exceptional {
        if d_exc == 0 {
            return Err(Error::Domain("exceptional modulus must be positive".into()));
        }
        d_star_factors.push(d_exc);
    }
    let d_star = checked_prod(d_star_factors)?;

    let interval_primes: Vec<u64> = if params.p_plus >= 2 {
        sieve_primes(params.p_plus.max(2))?
            .primes
            .into_iter()
            .filter(|&p| p > params.p_minus && p <= params.p_plus && d_star % p != 0)
            .collect()
    } else {
        Vec::new()
    };

    let l = params.l as usize;
    if interval_primes.len() < l {
        return Err(Error::Domain(format!(
            "infeasible parameters: need {} primes in ({}, {}] coprime to d*, found {}",
            l,
            params.p_minus,
            params.p_plus,
            interval_primes.len()
        )));
    }

    let mut members = Vec::new();
    let mut total = BigRational::zero();
    for combo in combinations(&interval_primes, l) {
        let d_prime = checked_prod(combo.iter().copied())?;
        let d = d_star
            .checked_mul(d_prime)
            .ok_or_else(|| Error::Resource("scheme modulus overflows u64".into()))?;
        let w = BigRational::new(BigInt::one(), BigInt::from(euler_phi(d_prime)));
        total += &w;
        members.push((d, w));
    }
    for (_, w) in &mut members {
        *w /= &total;
    }
    members.sort_by_key(|&(d, _)| d);
    Ok(WeightScheme { params: params.clone(), d_star, members, interval_primes })
}

fn combinations(items: &[u64], k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// `A(q) = sum over members of w(d) * tau(d, q)`, exact.
pub fn scheme_a(scheme: &WeightScheme, q: u64) -> BigRational {
    scheme
        .members
        .iter()
        .map(|(d, w)| w * tau(*d, q))
        .sum()
}

/// The finite representative class of moduli: all square-free products of
/// the interval primes. Every other positive `q` reduces to one of these or
/// to the two symbolic regimes (non-square-free `q`; `q` with a prime factor
/// beyond `p+`), both handled inside [`verify_cancellation`].
pub fn reduce_q_class(scheme: &WeightScheme) -> Vec<u64> {
    let primes = &scheme.interval_primes;
    let mut out = Vec::with_capacity(1 << primes.len());
    for mask in 0u64..(1 << primes.len()) {
        let mut q = 1u64;
        for (i, &p) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                q *= p;
            }
        }
        out.push(q);
    }
    out.sort_unstable();
    out
}

fn next_prime_after(n: u64) -> u64 {
    let mut m = n + 1;
    loop {
        if m >= 2 && crate::arith::omega(m) == 1 && crate::arith::is_squarefree(m) {
            return m;
        }
        m += 1;
    }
}

/// Exact minimum of `A(q)` over all positive integers `q`, reported with its
/// argmin, and the verdict `min >= -delta/2`.
///
/// The minimum over the representative class is exhaustive; the large-prime
/// regime is covered by `q = P` for the first prime `P > p+` (every `q`
/// containing a prime `> p+` satisfies `A(q) >= A(P) = -1/(P-1)` termwise),
/// and non-square-free `q` only zero out or repeat representative values.
pub fn verify_cancellation(scheme: &WeightScheme, delta: f64) -> CancellationReport {
    let reps = reduce_q_class(scheme);
    let mut min_value = scheme_a(scheme, 1);
    let mut argmin_q = 1u64;
    for &q in &reps {
        let a = scheme_a(scheme, q);
        if a < min_value {
            min_value = a;
            argmin_q = q;
        }
    }
    let p_next = next_prime_after(scheme.params.p_plus.max(1));
    let large = scheme_a(scheme, p_next);
    if large < min_value {
        min_value = large;
        argmin_q = p_next;
    }
    let threshold = BigRational::from_float(delta).expect("finite delta")
        / BigRational::from_integer(BigInt::from(-2));
    let passed = min_value >= threshold;
    CancellationReport {
        q_checked: format!(
            "{} square-free products of interval primes {:?}, plus large-prime representative {}",
            reps.len(),
            scheme.interval_primes,
            p_next
        ),
        min_value,
        argmin_q,
        passed,
    }
}
