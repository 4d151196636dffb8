//! Sparse even trigonometric polynomials `a0 + sum a_d cos(2 pi d theta)`:
//! the normalized prime polynomials `F_{N,d}`, evaluation, linear
//! combination, certified global lower bounds, and shift-normalization into
//! the nonnegative normed class.

use crate::arith::primes_in_ap;
use crate::{Error, Real, Result};
use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use rustfft::{FftDirection, FftNum, FftPlanner};
use serde::{Deserialize, Serialize};

/// Sparse even cosine polynomial with strictly increasing integer
/// frequencies. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosinePoly<T> {
    pub a0: T,
    /// `(frequency, coefficient)` pairs, frequencies unique and ascending.
    pub terms: Vec<(u64, T)>,
}

/// A rigorous global lower bound from a grid scan plus a Lipschitz
/// correction: `certified_lower <= min of the polynomial over [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifiedMin<T> {
    pub grid_min: T,
    /// Grid argmin, in `[0, 1/2]` by evenness.
    pub grid_argmin: T,
    /// `2 pi sum |coeff| * freq`, a bound on `|T'|`.
    pub lipschitz: T,
    /// `grid_min - lipschitz * h / 2` for grid step `h`.
    pub certified_lower: T,
    pub grid_step: T,
}

fn kahan<T: Real>(values: impl Iterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut c = T::zero();
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

impl<T: Real> CosinePoly<T> {
    /// Builds a polynomial, merging duplicate frequencies and sorting.
    /// Frequency 0 contributions fold into `a0`.
    pub fn new(a0: T, terms: impl IntoIterator<Item = (u64, T)>) -> Self {
        let mut map = std::collections::BTreeMap::new();
        let mut a0 = a0;
        for (f, c) in terms {
            if f == 0 {
                a0 = a0 + c;
            } else {
                let slot = map.entry(f).or_insert_with(T::zero);
                *slot = *slot + c;
            }
        }
        CosinePoly { a0, terms: map.into_iter().collect() }
    }

    pub fn constant(a0: T) -> Self {
        CosinePoly { a0, terms: Vec::new() }
    }

    pub fn degree(&self) -> u64 {
        self.terms.last().map_or(0, |&(f, _)| f)
    }

    /// `a0 + sum coeff * cos(2 pi freq * theta)`, compensated summation.
    pub fn evaluate(&self, theta: T) -> T {
        let two_pi = T::from_f64(2.0 * std::f64::consts::PI).unwrap();
        let head = std::iter::once(self.a0);
        let tail = self
            .terms
            .iter()
            .map(|&(f, c)| c * (two_pi * T::from_u64(f).unwrap() * theta).cos());
        kahan(head.chain(tail))
    }

    /// Values at `theta_i = i / grid_size`, `i = 0 .. grid_size - 1`,
    /// pointwise evaluation (reference path).
    pub fn evaluate_grid_direct(&self, grid_size: usize) -> Vec<T> {
        assert!(grid_size >= 1);
        let inv = T::one() / T::from_usize(grid_size).unwrap();
        (0..grid_size)
            .into_par_iter()
            .map(|i| self.evaluate(T::from_usize(i).unwrap() * inv))
            .collect()
    }

    /// `sum |coeff| * freq`, the l1-weighted derivative bound divided by 2 pi.
    fn weighted_l1(&self) -> T {
        kahan(self.terms.iter().map(|&(f, c)| c.abs() * T::from_u64(f).unwrap()))
    }

    /// Linear combination `sum weight_i * poly_i`, merged frequency-wise.
    pub fn combine(parts: &[(T, &CosinePoly<T>)]) -> CosinePoly<T> {
        let mut map: std::collections::BTreeMap<u64, Vec<T>> = std::collections::BTreeMap::new();
        let mut a0_parts = Vec::new();
        for &(w, p) in parts {
            a0_parts.push(w * p.a0);
            for &(f, c) in &p.terms {
                map.entry(f).or_default().push(w * c);
            }
        }
        CosinePoly {
            a0: kahan(a0_parts.into_iter()),
            terms: map
                .into_iter()
                .map(|(f, cs)| (f, kahan(cs.into_iter())))
                .collect(),
        }
    }

    /// Rescales `(T + |floor|) / (1 + |floor|)`; the result still has value 1
    /// at 0 and is nonnegative whenever the input's true minimum is
    /// `>= floor`. Returns the polynomial and the readout
    /// `|floor| / (1 + |floor|)` (the free-coefficient bound it realizes).
    pub fn shift_normalize(&self, floor: T) -> Result<(CosinePoly<T>, T)> {
        if floor > T::zero() {
            return Err(Error::Domain("shift floor must be nonpositive".into()));
        }
        let at_zero = self.evaluate(T::zero());
        if (at_zero - T::one()).abs() > T::from_f64(1e-9).unwrap() {
            return Err(Error::Domain(format!(
                "shift_normalize needs poly(0) = 1, got {at_zero}"
            )));
        }
        let shift = floor.abs();
        let scale = T::one() / (T::one() + shift);
        let out = CosinePoly {
            a0: (self.a0 + shift) * scale,
            terms: self.terms.iter().map(|&(f, c)| (f, c * scale)).collect(),
        };
        Ok((out, shift * scale))
    }
}

impl<T: Real + FftNum> CosinePoly<T> {
    /// Grid evaluation; dispatches to an FFT for large power-of-two grids
    /// exceeding the degree, pointwise otherwise. Both paths agree within
    /// 1e-9 (tested).
    pub fn evaluate_grid(&self, grid_size: usize) -> Vec<T> {
        if grid_size >= 4096
            && grid_size.is_power_of_two()
            && (self.degree() as usize) < grid_size
        {
            self.evaluate_grid_fft(grid_size)
        } else {
            self.evaluate_grid_direct(grid_size)
        }
    }

    fn evaluate_grid_fft(&self, grid_size: usize) -> Vec<T> {
        debug_assert!((self.degree() as usize) < grid_size);
        let mut buf = vec![Complex::<T>::zero(); grid_size];
        buf[0].re = self.a0;
        for &(f, c) in &self.terms {
            buf[f as usize].re = buf[f as usize].re + c;
        }
        let fft = FftPlanner::new().plan_fft(grid_size, FftDirection::Inverse);
        fft.process(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }

    /// Scans `theta in [0, 1/2]` (evenness) on a uniform grid and certifies
    /// a global lower bound through the derivative bound
    /// `|T'| <= 2 pi sum |a_d| d`.
    ///
    /// Refuses grids finer than the spectrum can tolerate: requires
    /// `grid_size >= 4 * degree`.
    pub fn certified_min(&self, grid_size: usize) -> Result<CertifiedMin<T>> {
        let need = (4 * self.degree()).max(4) as usize;
        if grid_size < need {
            return Err(Error::Domain(format!(
                "grid {grid_size} too coarse for degree {}; need at least {need}",
                self.degree()
            )));
        }
        let h = T::one() / T::from_usize(grid_size).unwrap();
        let two_pi = T::from_f64(2.0 * std::f64::consts::PI).unwrap();
        let lipschitz = two_pi * self.weighted_l1();

        let values = self.evaluate_grid(grid_size);
        let half = grid_size / 2;
        let mut min_idx = 0usize;
        let mut min_val = values[0];
        for (i, &v) in values[..=half].iter().enumerate() {
            if v < min_val {
                min_val = v;
                min_idx = i;
            }
        }
        let grid_argmin = T::from_usize(min_idx).unwrap() * h;
        let two = T::from_f64(2.0).unwrap();
        Ok(CertifiedMin {
            grid_min: min_val,
            grid_argmin,
            lipschitz,
            certified_lower: min_val - lipschitz * h / two,
            grid_step: h,
        })
    }
}

/// The normalized prime cosine polynomial `F_{N,d}`: frequencies `p - 1` for
/// primes `p <= d*N + 1`, `p == 1 (mod d)`, coefficients `log p / k` with
/// `k = theta(d*N + 1; d, 1)` so that `F(0) = 1`.
pub fn build_f<T: Real>(d: u64, n: u64) -> Result<CosinePoly<T>> {
    let ap = primes_in_ap(d, n)?;
    if ap.primes.is_empty() {
        return Err(Error::Domain(format!(
            "no primes p == 1 (mod {d}) up to {}",
            d * n + 1
        )));
    }
    let logs: Vec<f64> = ap.primes.iter().map(|&p| (p as f64).ln()).collect();
    let k: f64 = logs.iter().sum();
    let terms = ap
        .primes
        .iter()
        .zip(&logs)
        .map(|(&p, &lp)| (p - 1, T::from_f64(lp / k).unwrap()));
    Ok(CosinePoly::new(T::zero(), terms))
}

/// Two-column TSV `(theta, value)` over one period, for plotting.
pub fn grid_tsv<T: Real + FftNum>(poly: &CosinePoly<T>, grid_size: usize) -> String {
    let values = poly.evaluate_grid(grid_size);
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        out.push_str(&format!("{}\t{}\n", i as f64 / grid_size as f64, v));
    }
    out
}
