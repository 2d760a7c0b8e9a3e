use std::collections::HashMap;

use crate::error::PolyError;
use crate::poly::{Poly, Vars};

/// Dense rectangular matrix of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    vars: Vars,
    rows: Vec<Vec<Poly>>,
    ncols: usize,
}

impl PolyMatrix {
    pub fn new(vars: &Vars, rows: Vec<Vec<Poly>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        PolyMatrix {
            vars: vars.clone(),
            rows,
            ncols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.rows[i]
    }

    /// Exact determinant by cofactor expansion along rows, memoizing the
    /// sub-determinants by their column set.
    pub fn det(&self) -> Result<Poly, PolyError> {
        if self.nrows() != self.ncols {
            return Err(PolyError::NotSquare {
                rows: self.nrows(),
                cols: self.ncols,
            });
        }
        let rows: Vec<usize> = (0..self.nrows()).collect();
        let cols: Vec<usize> = (0..self.ncols).collect();
        Ok(self.det_of(&rows, &cols))
    }

    fn det_of(&self, rows: &[usize], cols: &[usize]) -> Poly {
        debug_assert_eq!(rows.len(), cols.len());
        if rows.is_empty() {
            return Poly::from_int(&self.vars, 1);
        }
        let mut memo: HashMap<u64, Poly> = HashMap::new();
        let full: u64 = cols.iter().fold(0, |m, &c| m | (1 << c));
        self.cofactor(rows, 0, full, &mut memo)
    }

    // Determinant of rows[depth..] against the columns in `mask`.
    fn cofactor(&self, rows: &[usize], depth: usize, mask: u64, memo: &mut HashMap<u64, Poly>) -> Poly {
        if depth == rows.len() {
            return Poly::from_int(&self.vars, 1);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let r = rows[depth];
        let mut acc = Poly::zero(&self.vars);
        let mut sign_positive = true;
        for c in 0..self.ncols {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = &self.rows[r][c];
            if !entry.is_zero() {
                let sub = self.cofactor(rows, depth + 1, mask & !(1 << c), memo);
                let term = entry * &sub;
                acc = if sign_positive { &acc + &term } else { &acc - &term };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// All `k x k` minors, enumerated by row subset then column subset, each
    /// in lexicographic order.
    pub fn minors(&self, k: usize) -> Result<Vec<Poly>, PolyError> {
        if k > self.nrows() || k > self.ncols {
            return Err(PolyError::MinorTooLarge {
                k,
                rows: self.nrows(),
                cols: self.ncols,
            });
        }
        let mut out = Vec::new();
        for rs in combinations(self.nrows(), k) {
            for cs in combinations(self.ncols, k) {
                out.push(self.det_of(&rs, &cs));
            }
        }
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix {
            vars: self.vars.clone(),
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
            ncols: self.ncols,
        }
    }
}

/// k-subsets of 0..n in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}
