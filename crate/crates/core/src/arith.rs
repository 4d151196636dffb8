//! Exact elementary number theory: segmented sieve, primes in arithmetic
//! progressions, multiplicative functions, Ramanujan sums, and the Chebyshev
//! `theta` / `psi` functions restricted to a progression.

use crate::{Error, Result};
use num_integer::Integer;

/// Environment variable overriding the sieve memory budget (bytes).
pub const MEMORY_BUDGET_ENV: &str = "VDC_MEMORY_BUDGET";

/// Default sieve memory budget: 2^31 bytes.
pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 31;

fn memory_budget() -> u64 {
    std::env::var(MEMORY_BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MEMORY_BUDGET)
}

/// All primes up to `limit`, complete and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    pub limit: u64,
    pub primes: Vec<u64>,
}

impl PrimeTable {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.limit && self.primes.binary_search(&n).is_ok()
    }
}

/// Primes `p <= d*N + 1` with `p == 1 (mod d)`, the support of `F_{N,d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApPrimeSet {
    pub d: u64,
    pub n: u64,
    pub primes: Vec<u64>,
}

/// Complete prime table up to `limit`, by a segmented sieve of Eratosthenes.
///
/// Errors with [`Error::Resource`] when the estimated table size exceeds the
/// configured memory budget (default 2^31 bytes, overridable through
/// `VDC_MEMORY_BUDGET`).
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    sieve_primes_with_budget(limit, memory_budget())
}

/// Checks that sieving up to `limit` stays within the configured budget
/// without performing the sieve.
pub fn sieve_budget_check(limit: u64) -> Result<()> {
    let est = 8 * (limit as f64 / (limit as f64).ln().max(1.0) * 1.3) as u64 + SEGMENT_LEN as u64;
    let budget = memory_budget();
    if est > budget {
        return Err(Error::Resource(format!(
            "sieve to {limit} needs ~{est} bytes, budget is {budget}"
        )));
    }
    Ok(())
}

/// Same as [`sieve_primes`] with an explicit byte budget.
pub fn sieve_primes_with_budget(limit: u64, budget: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::Domain(format!("sieve limit must be >= 2, got {limit}")));
    }
    // rough upper estimate of 8 * pi(limit) bytes plus one segment
    let est = 8 * (limit as f64 / (limit as f64).ln().max(1.0) * 1.3) as u64 + SEGMENT_LEN as u64;
    if est > budget {
        return Err(Error::Resource(format!(
            "sieve to {limit} needs ~{est} bytes, budget is {budget}"
        )));
    }
    Ok(PrimeTable { limit, primes: segmented_sieve(limit) })
}

const SEGMENT_LEN: usize = 1 << 20;

fn small_sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn segmented_sieve(limit: u64) -> Vec<u64> {
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = small_sieve(root as usize);
    let mut primes: Vec<u64> = base.iter().copied().filter(|&p| p <= limit).collect();
    let mut lo = root + 1;
    let mut segment = vec![false; SEGMENT_LEN];
    while lo <= limit {
        let hi = (lo + SEGMENT_LEN as u64 - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        segment[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = lo.div_ceil(p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut j = start;
            while j <= hi {
                segment[(j - lo) as usize] = true;
                j += p;
            }
        }
        for (i, &c) in segment[..len].iter().enumerate() {
            if !c {
                primes.push(lo + i as u64);
            }
        }
        lo = hi + 1;
    }
    primes
}

/// Exactly the primes `p <= d*N + 1` with `p == 1 (mod d)`.
pub fn primes_in_ap(d: u64, n: u64) -> Result<ApPrimeSet> {
    if d < 1 || n < 1 {
        return Err(Error::Domain(format!("primes_in_ap needs d,N >= 1, got ({d},{n})")));
    }
    let bound = d
        .checked_mul(n)
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::Resource(format!("d*N+1 overflows for ({d},{n})")))?;
    let table = sieve_primes(bound.max(2))?;
    let primes = table
        .primes
        .into_iter()
        .filter(|&p| p <= bound && p % d == 1 % d)
        .collect();
    Ok(ApPrimeSet { d, n, primes })
}

/// Prime factorization `n = prod p_i^{e_i}` by trial division.
///
/// Rejects `n > 10^12`; everything downstream stays far below that.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    if n > 1_000_000_000_000 {
        return Err(Error::Resource(format!("factorization capped at 10^12, got {n}")));
    }
    Ok(factor_trial(n))
}

fn factor_trial(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    // wheel mod 30
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0usize;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += STEPS[i];
        i = (i + 1) % 8;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient, exact. `euler_phi(1) = 1`.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1);
    factor_trial(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Moebius function in `{-1, 0, 1}`.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let f = factor_trial(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> u32 {
    assert!(n >= 1);
    factor_trial(n).len() as u32
}

pub fn is_squarefree(n: u64) -> bool {
    assert!(n >= 1);
    factor_trial(n).iter().all(|&(_, e)| e == 1)
}

/// Ramanujan sum `c_q(a)`, exact integer via
/// `c_q(a) = mu(q/g) * phi(q) / phi(q/g)` with `g = gcd(q, a)`.
pub fn ramanujan_sum(q: u64, a: i64) -> i64 {
    assert!(q >= 1);
    let a_mod = a.rem_euclid(q as i64) as u64;
    let g = q.gcd(&a_mod);
    let r = q / g;
    mobius(r) * (euler_phi(q) / euler_phi(r)) as i64
}

/// `theta(x; q, a) = sum of log p over primes p <= x, p == a (mod q)`.
pub fn chebyshev_theta_ap(x: f64, q: u64, a: u64) -> Result<f64> {
    assert!(q >= 1 && a < q);
    if x < 2.0 {
        return Ok(0.0);
    }
    let bound = x.floor() as u64;
    let table = sieve_primes(bound.max(2))?;
    Ok(table
        .primes
        .iter()
        .filter(|&&p| p <= bound && p % q == a)
        .map(|&p| (p as f64).ln())
        .sum())
}

/// `psi(x; q, a) = sum of Lambda(n) over n <= x, n == a (mod q)`.
pub fn chebyshev_psi_ap(x: f64, q: u64, a: u64) -> Result<f64> {
    assert!(q >= 1 && a < q);
    if x < 2.0 {
        return Ok(0.0);
    }
    let bound = x.floor() as u64;
    let table = sieve_primes(bound.max(2))?;
    let mut sum = 0.0;
    for &p in &table.primes {
        if p > bound {
            break;
        }
        let logp = (p as f64).ln();
        let mut pk = p;
        loop {
            if pk % q == a {
                sum += logp;
            }
            match pk.checked_mul(p) {
                Some(next) if next <= bound => pk = next,
                _ => break,
            }
        }
    }
    Ok(sum)
}
