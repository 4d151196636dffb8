//! Dense primal simplex for problems in the form
//! `minimize c.x subject to A x <= b, x >= 0` with `b >= 0`, so the slack
//! basis is immediately feasible. Deterministic pivoting: most negative
//! reduced cost with smallest-index tie-breaking, switching to Bland's rule
//! after a long degenerate streak.

use crate::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, objective: T },
    Unbounded,
    /// Iteration cap hit before optimality; carries the best feasible point.
    Stalled { x: Vec<T>, objective: T },
}

pub struct DenseLp<T> {
    /// Row-major constraint matrix, `rows x cols`.
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub c: Vec<T>,
}

const MAX_PIVOTS: usize = 200_000;
const DEGENERATE_STREAK_FOR_BLAND: usize = 512;

pub fn solve<T: Real>(lp: &DenseLp<T>) -> LpOutcome<T> {
    let m = lp.b.len();
    let n = lp.c.len();
    debug_assert!(lp.a.len() == m && lp.a.iter().all(|r| r.len() == n));
    let eps = T::from_f64(1e-9).unwrap();

    // tableau: m rows of [structural | slack | rhs], plus objective row
    let width = n + m + 1;
    let mut tab: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut row = vec![T::zero(); width];
        row[..n].copy_from_slice(&lp.a[i]);
        row[n + i] = T::one();
        row[width - 1] = lp.b[i];
        tab.push(row);
    }
    let mut obj = vec![T::zero(); width];
    obj[..n].copy_from_slice(&lp.c);

    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut degenerate_streak = 0usize;

    for _pivot in 0..MAX_PIVOTS {
        let bland = degenerate_streak >= DEGENERATE_STREAK_FOR_BLAND;
        let entering = if bland {
            (0..n + m).find(|&j| obj[j] < -eps)
        } else {
            let mut best: Option<(usize, T)> = None;
            for j in 0..n + m {
                if obj[j] < -eps {
                    match best {
                        Some((_, v)) if obj[j] >= v => {}
                        _ => best = Some((j, obj[j])),
                    }
                }
            }
            best.map(|(j, _)| j)
        };
        let Some(col) = entering else {
            return LpOutcome::Optimal { x: extract(&tab, &basis, n, width), objective: -obj[width - 1] };
        };

        // ratio test; ties broken by smallest basic-variable index
        let mut leave: Option<(usize, T)> = None;
        for i in 0..m {
            if tab[i][col] > eps {
                let ratio = tab[i][width - 1] / tab[i][col];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - eps || (ratio < lr + eps && basis[i] < basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((row, ratio)) = leave else {
            return LpOutcome::Unbounded;
        };
        if ratio.abs() <= eps {
            degenerate_streak += 1;
        } else {
            degenerate_streak = 0;
        }

        // pivot on (row, col)
        let piv = tab[row][col];
        for v in tab[row].iter_mut() {
            *v = *v / piv;
        }
        for i in 0..m {
            if i != row {
                let factor = tab[i][col];
                if factor != T::zero() {
                    for j in 0..width {
                        let delta = factor * tab[row][j];
                        tab[i][j] = tab[i][j] - delta;
                    }
                }
            }
        }
        let factor = obj[col];
        if factor != T::zero() {
            for j in 0..width {
                let delta = factor * tab[row][j];
                obj[j] = obj[j] - delta;
            }
        }
        basis[row] = col;
    }
    LpOutcome::Stalled { x: extract(&tab, &basis, n, width), objective: -obj[width - 1] }
}

fn extract<T: Real>(tab: &[Vec<T>], basis: &[usize], n: usize, width: usize) -> Vec<T> {
    let mut x = vec![T::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = tab[i][width - 1];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_lp() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let lp = DenseLp::<f64> {
            a: vec![
                vec![1.0, 0.0],
                vec![0.0, 2.0],
                vec![3.0, 2.0],
            ],
            b: vec![4.0, 12.0, 18.0],
            c: vec![-3.0, -5.0],
        };
        match solve(&lp) {
            LpOutcome::Optimal { x, objective } => {
                assert!((x[0] - 2.0).abs() < 1e-9);
                assert!((x[1] - 6.0).abs() < 1e-9);
                assert!((objective - (-36.0)).abs() < 1e-9);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn unbounded_lp() {
        let lp = DenseLp { a: vec![vec![-1.0]], b: vec![1.0], c: vec![-1.0] };
        assert_eq!(solve(&lp), LpOutcome::Unbounded);
    }

    #[test]
    fn already_optimal() {
        let lp = DenseLp { a: vec![vec![1.0]], b: vec![1.0], c: vec![1.0] };
        match solve(&lp) {
            LpOutcome::Optimal { x, objective } => {
                assert_eq!(x, vec![0.0]);
                assert_eq!(objective, 0.0);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }
}
