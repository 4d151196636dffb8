//! Companion measures: exact Heilbronn `eta(n) = sup_theta min_h ||h theta||`
//! over the shifted-prime spectrum, a grid bracket cross-check, exhaustive
//! maximum difference-avoiding sets on a finite window, and the periodization
//! of an avoiding set with an avoidance verifier.

use crate::gamma::Spectrum;
use crate::{Error, Result};
use num_integer::Integer;
use serde::Serialize;

/// Budget on `sum of spectrum frequencies` for the exact eta enumeration;
/// admits every `n <= 500`.
pub const ETA_FREQ_SUM_BUDGET: u64 = 25_000;

/// Exhaustive cap for the avoiding-set search; larger windows fall back to a
/// greedy heuristic with `optimal = false`.
pub const AVOID_EXHAUSTIVE_CAP: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EtaMethod {
    Exact,
    GridBracket,
}

/// Value of `eta(n)` with the rational argmax.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaResult {
    pub n: u64,
    pub value: f64,
    /// Exact value as a reduced fraction (grid lower bound for the
    /// grid-bracket method).
    pub value_num: u64,
    pub value_den: u64,
    /// Reduced rational argmax in `[0, 1/2]`.
    pub argmax_num: u64,
    pub argmax_den: u64,
    pub method: EtaMethod,
}

/// `min over h of ||h * a/den||` as a fraction with denominator `den`
/// (numerator returned).
fn g_at(freqs: &[u64], a: u64, den: u64) -> u64 {
    let mut best = den; // ||.|| <= 1/2, so den works as infinity
    for &h in freqs {
        let m = (h * a) % den;
        let dist = m.min(den - m);
        if dist < best {
            best = dist;
            if best == 0 {
                return 0;
            }
        }
    }
    best
}

fn frac_less(n1: u64, d1: u64, n2: u64, d2: u64) -> bool {
    (n1 as u128) * (d2 as u128) < (n2 as u128) * (d1 as u128)
}

/// Exact maximization of `g(theta) = min_h ||h theta||`.
///
/// `g` is piecewise linear; its local maxima sit either at single-tent peaks
/// `(2a+1)/(2h)` or at crossings of two tents, rationals with denominators
/// `h1 + h2` or `|h1 - h2|`. All such candidates are evaluated in exact
/// integer arithmetic; ties resolve to the smallest `theta`.
pub fn eta_exact(spectrum: &Spectrum) -> Result<EtaResult> {
    if spectrum.freqs.is_empty() {
        return Err(Error::Domain("eta needs a nonempty spectrum".into()));
    }
    let freq_sum: u64 = spectrum.freqs.iter().sum();
    if freq_sum > ETA_FREQ_SUM_BUDGET {
        // too many candidates for the exact path; fall back with a warning
        eprintln!(
            "warning: spectrum frequency sum {freq_sum} exceeds exact-eta budget \
             {ETA_FREQ_SUM_BUDGET}; falling back to a grid bracket"
        );
        let max_freq = *spectrum.freqs.last().unwrap();
        let bracket = eta_bracket(spectrum, (4 * max_freq as usize).next_power_of_two())?;
        return Ok(EtaResult {
            n: spectrum.n,
            value: bracket.lower,
            value_num: bracket.lower_num,
            value_den: bracket.lower_den,
            argmax_num: bracket.argmax_num,
            argmax_den: bracket.argmax_den,
            method: EtaMethod::GridBracket,
        });
    }

    let freqs = &spectrum.freqs;
    let mut dens = std::collections::BTreeSet::new();
    for &h in freqs {
        dens.insert(2 * h);
    }
    for (i, &h1) in freqs.iter().enumerate() {
        for &h2 in &freqs[i + 1..] {
            dens.insert(h1 + h2);
            dens.insert(h2 - h1);
        }
    }
    dens.remove(&0);

    // best value and argmax, exact fractions
    let (mut best_n, mut best_d) = (0u64, 1u64);
    let (mut arg_n, mut arg_d) = (0u64, 1u64);
    for &den in &dens {
        for a in 0..=den / 2 {
            let v = g_at(freqs, a, den);
            if frac_less(best_n, best_d, v, den) {
                best_n = v;
                best_d = den;
                arg_n = a;
                arg_d = den;
            }
        }
    }
    let gv = best_n.gcd(&best_d);
    let ga = arg_n.gcd(&arg_d).max(1);
    Ok(EtaResult {
        n: spectrum.n,
        value: best_n as f64 / best_d as f64,
        value_num: best_n / gv,
        value_den: best_d / gv,
        argmax_num: arg_n / ga,
        argmax_den: arg_d / ga,
        method: EtaMethod::Exact,
    })
}

/// Grid bracket `[lower, upper]` for `eta`, with the exact grid maximum as a
/// fraction. `upper = lower + max_freq / (2 * grid)` from the Lipschitz bound
/// `|g'| <= max_freq`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EtaBracket {
    pub lower: f64,
    pub upper: f64,
    pub lower_num: u64,
    pub lower_den: u64,
    pub argmax_num: u64,
    pub argmax_den: u64,
}

pub fn eta_bracket(spectrum: &Spectrum, grid_size: usize) -> Result<EtaBracket> {
    if spectrum.freqs.is_empty() {
        return Err(Error::Domain("eta needs a nonempty spectrum".into()));
    }
    let max_freq = *spectrum.freqs.last().unwrap();
    if (grid_size as u64) < 2 * max_freq {
        return Err(Error::Domain(format!(
            "eta grid {grid_size} too coarse; need at least {}",
            2 * max_freq
        )));
    }
    let den = grid_size as u64;
    let mut best = 0u64;
    let mut arg = 0u64;
    for a in 0..=den / 2 {
        let v = g_at(&spectrum.freqs, a, den);
        if v > best {
            best = v;
            arg = a;
        }
    }
    let g = best.gcd(&den).max(1);
    let ga = arg.gcd(&den).max(1);
    let lower = best as f64 / den as f64;
    Ok(EtaBracket {
        lower,
        upper: lower + max_freq as f64 / (2.0 * den as f64),
        lower_num: best / g,
        lower_den: den / g,
        argmax_num: arg / ga,
        argmax_den: den / ga,
    })
}

/// A maximum-density subset of `{0..M-1}` whose difference set avoids the
/// forbidden integers, with an exhaustive optimality certificate when the
/// window is within [`AVOID_EXHAUSTIVE_CAP`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvoidingSetResult {
    pub window: u64,
    pub forbidden: Vec<u64>,
    pub best_set: Vec<u64>,
    pub density_num: u64,
    pub density_den: u64,
    pub optimal: bool,
}

struct MisSearch<'a> {
    adj: &'a [u64],
    order: Vec<usize>,
}

impl<'a> MisSearch<'a> {
    /// Greedy clique cover of `cand`: an upper bound on the independent set.
    fn clique_cover_bound(&self, mut cand: u64) -> u32 {
        let mut cliques = 0u32;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique = 1u64 << v;
            cand &= !(1u64 << v);
            let mut common = self.adj[v] & cand;
            while common != 0 {
                let u = common.trailing_zeros() as usize;
                clique |= 1 << u;
                cand &= !(1u64 << u);
                common &= self.adj[u];
            }
            let _ = clique;
            cliques += 1;
        }
        cliques
    }

    fn max_is(&self, cand: u64, best: &mut u32, size: u32) {
        if cand == 0 {
            if size > *best {
                *best = size;
            }
            return;
        }
        if size + self.clique_cover_bound(cand) <= *best {
            return;
        }
        // branch on the highest-degree vertex within the candidates
        let v = self
            .order
            .iter()
            .copied()
            .find(|&v| cand & (1 << v) != 0)
            .unwrap();
        let bit = 1u64 << v;
        // include v
        self.max_is(cand & !bit & !self.adj[v], best, size + 1);
        // exclude v
        self.max_is(cand & !bit, best, size);
    }

    fn size(&self, cand: u64) -> u32 {
        let mut best = 0;
        self.max_is(cand, &mut best, 0);
        best
    }
}

/// Branch-and-bound maximum independent set on the circulant-style conflict
/// graph: vertices `0..M-1`, edges where `|x - y|` is forbidden. Exhaustive
/// up to `M = 64`, greedy beyond; the reported set is the lexicographically
/// smallest among the optima in the exhaustive regime.
pub fn max_avoiding_set(window: u64, forbidden: &[u64]) -> Result<AvoidingSetResult> {
    if window == 0 {
        return Err(Error::Domain("window must be positive".into()));
    }
    if window > 1_000_000 {
        return Err(Error::Resource(format!("window {window} beyond supported range")));
    }
    let mut forbidden: Vec<u64> = forbidden.iter().copied().filter(|&f| f > 0).collect();
    forbidden.sort_unstable();
    forbidden.dedup();

    if window > AVOID_EXHAUSTIVE_CAP {
        // greedy ascending fill
        let mut chosen: Vec<u64> = Vec::new();
        for x in 0..window {
            if chosen
                .iter()
                .all(|&y| !forbidden.contains(&(x - y)))
            {
                chosen.push(x);
            }
        }
        let g = (chosen.len() as u64).gcd(&window).max(1);
        return Ok(AvoidingSetResult {
            window,
            density_num: chosen.len() as u64 / g,
            density_den: window / g,
            best_set: chosen,
            forbidden,
            optimal: false,
        });
    }

    let m = window as usize;
    let mut adj = vec![0u64; m];
    for x in 0..m {
        for y in 0..x {
            if forbidden.binary_search(&((x - y) as u64)).is_ok() {
                adj[x] |= 1 << y;
                adj[y] |= 1 << x;
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].count_ones()), v));
    let search = MisSearch { adj: &adj, order };

    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let target = search.size(full);

    // lexicographically smallest optimum: greedily commit vertices that keep
    // the target reachable
    let mut chosen: Vec<u64> = Vec::new();
    let mut cand = full;
    let mut have = 0u32;
    for v in 0..m {
        let bit = 1u64 << v;
        if cand & bit == 0 {
            continue;
        }
        let after = cand & !bit & !adj[v];
        if have + 1 + search.size(after) == target {
            chosen.push(v as u64);
            have += 1;
            cand = after;
        } else {
            cand &= !bit;
        }
    }
    debug_assert_eq!(have, target);

    let g = (target as u64).gcd(&window).max(1);
    Ok(AvoidingSetResult {
        window,
        density_num: target as u64 / g,
        density_den: window / g,
        best_set: chosen,
        forbidden,
        optimal: true,
    })
}

/// A periodic set given by residues modulo `2n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicSet {
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub density_num: u64,
    pub density_den: u64,
}

/// Periodizes an avoiding set `A` inside `[1, n]` to
/// `B = { x : x mod 2n in A }`.
pub fn periodize(avoiding_set: &[u64], n: u64) -> Result<PeriodicSet> {
    if n == 0 {
        return Err(Error::Domain("periodize needs n >= 1".into()));
    }
    let mut residues: Vec<u64> = avoiding_set.to_vec();
    residues.sort_unstable();
    residues.dedup();
    if residues.iter().any(|&a| a < 1 || a > n) {
        return Err(Error::Domain(format!("avoiding set must lie in [1, {n}]")));
    }
    let modulus = 2 * n;
    let count = residues.len() as u64;
    let g = count.gcd(&modulus).max(1);
    Ok(PeriodicSet {
        modulus,
        residues,
        density_num: count / g,
        density_den: modulus / g,
    })
}

/// Outcome of the difference-avoidance check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvoidanceCheck {
    pub ok: bool,
    pub counterexample: Option<u64>,
}

/// Checks `(B - B)` misses every forbidden value up to `check_limit`.
/// By periodicity the differences of `B` are exactly the residue differences
/// mod `modulus`, shifted by multiples of `modulus`.
pub fn verify_avoidance(set: &PeriodicSet, forbidden: &[u64], check_limit: u64) -> AvoidanceCheck {
    let m = set.modulus;
    let mut diffs = std::collections::HashSet::new();
    for &a in &set.residues {
        for &b in &set.residues {
            diffs.insert((a + m - b) % m);
        }
    }
    for &f in forbidden {
        if f == 0 || f > check_limit {
            continue;
        }
        if diffs.contains(&(f % m)) {
            return AvoidanceCheck { ok: false, counterexample: Some(f) };
        }
    }
    AvoidanceCheck { ok: true, counterexample: None }
}
