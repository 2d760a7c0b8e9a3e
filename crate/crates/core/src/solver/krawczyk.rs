//! The Krawczyk operator
//!
//! ```text
//! K(X) = m - Y F(m) + (I - Y J(X)) (X - m)
//! ```
//!
//! with `m` the midpoint of `X`, `J(X)` an enclosure of the Jacobian over
//! `X` and `Y` an approximate inverse of `J(m)`. Every zero of `F` in `X`
//! lies in `K(X)`; if `K(X)` falls strictly inside `X` there is exactly one.

use crate::numeric::{Interval, IntervalVector};
use crate::solver::NumericSystem;

#[derive(Clone, Debug, PartialEq)]
pub enum KrawczykOutcome {
    /// Exactly one zero of the (sub)system in the input box; it lies in the
    /// returned box.
    Unique(IntervalVector),
    /// No zero in the box.
    Empty,
    /// Undecided; the returned box (a subset of the input) still contains
    /// every zero.
    Inconclusive(IntervalVector),
}

/// Inverse of a small dense matrix by Gauss-Jordan with partial pivoting.
pub(crate) fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, piv);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let factor = m[r][col];
                if factor != 0.0 {
                    for c in 0..2 * n {
                        let sub = factor * m[col][c];
                        m[r][c] -= sub;
                    }
                }
            }
        }
    }
    let inv: Vec<Vec<f64>> = m.into_iter().map(|r| r[n..].to_vec()).collect();
    inv.iter().flatten().all(|v| v.is_finite()).then_some(inv)
}

/// Approximate inverse of a square matrix whose rows may differ in scale by
/// many orders of magnitude: rows are normalized before inversion.
pub(crate) fn preconditioner<'a>(rows: impl Iterator<Item = &'a [f64]>) -> Option<Vec<Vec<f64>>> {
    let mut scales = Vec::new();
    let mut normalized = Vec::new();
    for r in rows {
        let norm = r.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        if norm == 0.0 || !norm.is_finite() {
            return None;
        }
        scales.push(1.0 / norm);
        normalized.push(r.iter().map(|v| v / norm).collect::<Vec<_>>());
    }
    let mut inv = invert(&normalized)?;
    for row in inv.iter_mut() {
        for (v, s) in row.iter_mut().zip(&scales) {
            *v *= s;
        }
    }
    Some(inv)
}

/// Chooses `n` of the `m >= n` rows of a Jacobian by full-pivoting
/// elimination on the row-normalized matrix, largest pivot first. Returns the
/// row indices in increasing order.
pub fn select_rows(jac: &[Vec<f64>]) -> Vec<usize> {
    let m = jac.len();
    let n = jac.first().map_or(0, Vec::len);
    if m == n {
        return (0..m).collect();
    }
    let mut a: Vec<Vec<f64>> = jac
        .iter()
        .map(|r| {
            let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 && norm.is_finite() {
                r.iter().map(|v| v / norm).collect()
            } else {
                vec![0.0; n]
            }
        })
        .collect();
    let mut row_free = vec![true; m];
    let mut col_free = vec![true; n];
    let mut chosen = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = (usize::MAX, usize::MAX, -1.0f64);
        for (r, row) in a.iter().enumerate() {
            if !row_free[r] {
                continue;
            }
            for (c, &v) in row.iter().enumerate() {
                if col_free[c] && v.abs() > best.2 {
                    best = (r, c, v.abs());
                }
            }
        }
        let (pr, pc, _) = best;
        if pr == usize::MAX {
            break;
        }
        row_free[pr] = false;
        col_free[pc] = false;
        chosen.push(pr);
        let pivot_row = a[pr].clone();
        let p = pivot_row[pc];
        if p == 0.0 {
            continue;
        }
        for (r, row) in a.iter_mut().enumerate() {
            if row_free[r] {
                let f = row[pc] / p;
                for c in 0..n {
                    row[c] -= f * pivot_row[c];
                }
            }
        }
    }
    // fill up with any remaining rows if the matrix was rank deficient
    for r in 0..m {
        if chosen.len() == n {
            break;
        }
        if row_free[r] {
            row_free[r] = false;
            chosen.push(r);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// One Krawczyk step for the rows `rows` of `sys` on box `b`.
pub(crate) fn krawczyk_step(sys: &NumericSystem, rows: &[usize], b: &IntervalVector) -> KrawczykOutcome {
    let n = sys.dim();
    debug_assert_eq!(rows.len(), n);
    let mid = b.mid();
    let jac_mid = sys.jacobian(&mid);
    let Some(y) = preconditioner(rows.iter().map(|&r| jac_mid[r].as_slice())) else {
        return KrawczykOutcome::Inconclusive(b.clone());
    };
    let f_mid: Vec<Interval> = rows
        .iter()
        .map(|&r| {
            let p = sys.equation(r);
            let f = p.eval_point(&mid);
            // near a root rounding dominates the float enclosure
            if f.contains_zero() {
                p.eval_point_exact(&mid)
            } else {
                f
            }
        })
        .collect();
    let jac_box = sys.jacobian_box(b);
    let jb: Vec<&Vec<Interval>> = rows.iter().map(|&r| &jac_box[r]).collect();
    let dx: Vec<Interval> = (0..n).map(|k| b[k] - Interval::point(mid[k])).collect();

    let mut k_box = Vec::with_capacity(n);
    for i in 0..n {
        // m_i - (Y F(m))_i
        let mut yf = Interval::ZERO;
        for (j, f) in f_mid.iter().enumerate() {
            yf = yf + Interval::point(y[i][j]) * *f;
        }
        let mut acc = Interval::point(mid[i]) - yf;
        for k in 0..n {
            // (I - Y J)_ik
            let mut yj = Interval::ZERO;
            for j in 0..n {
                yj = yj + Interval::point(y[i][j]) * jb[j][k];
            }
            let c = if i == k { Interval::point(1.0) - yj } else { -yj };
            acc = acc + c * dx[k];
        }
        k_box.push(acc);
    }
    let k_box = IntervalVector::new(k_box);
    let unique = (0..n).all(|i| k_box[i].is_interior_of(&b[i]));
    match k_box.intersect(b) {
        None => KrawczykOutcome::Empty,
        Some(inter) if unique => KrawczykOutcome::Unique(inter),
        Some(inter) => KrawczykOutcome::Inconclusive(inter),
    }
}
