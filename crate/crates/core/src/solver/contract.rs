//! Box contractors. Each one returns a sub-box that still contains every
//! root of the system inside the input box, or `None` when it proves there
//! is no root.

use crate::numeric::{Interval, IntervalVector};
use crate::solver::NumericSystem;

/// Drops the box when some equation's range excludes zero.
pub fn range_check(sys: &NumericSystem, b: &IntervalVector) -> bool {
    (0..sys.num_equations()).all(|i| sys.equation(i).eval_interval(b.as_slice()).contains_zero())
}

/// Term-wise projection: for `sum_t c_t m_t(x) = 0`, a term `c_t x_j^e r(x)`
/// with `e <= 2` satisfies `x_j^e = -(other terms) / (c_t r(x))`, which bounds
/// `x_j` whenever `c_t r` stays away from zero.
pub fn project_terms(sys: &NumericSystem, b: &mut IntervalVector) -> Option<()> {
    let n = sys.dim();
    for i in 0..sys.num_equations() {
        if !sys.is_small(i) {
            continue;
        }
        let terms = sys.equation(i).terms();
        if terms.is_empty() {
            continue;
        }
        let mut vals: Vec<Interval> = Vec::with_capacity(terms.len());
        for t in terms {
            let mut v = t.coeff;
            for k in 0..n {
                if t.exps[k] > 0 {
                    v = v * b[k].powi(t.exps[k] as u32);
                }
            }
            vals.push(v);
        }
        // prefix[i] = sum of vals[..i], suffix[i] = sum of vals[i..]
        let mut prefix = vec![Interval::ZERO; vals.len() + 1];
        for (k, v) in vals.iter().enumerate() {
            prefix[k + 1] = prefix[k] + *v;
        }
        if !prefix[vals.len()].contains_zero() {
            return None;
        }
        let mut suffix = vec![Interval::ZERO; vals.len() + 1];
        for k in (0..vals.len()).rev() {
            suffix[k] = suffix[k + 1] + vals[k];
        }
        for (ti, t) in terms.iter().enumerate() {
            let others = -(prefix[ti] + suffix[ti + 1]);
            for j in 0..n {
                let e = t.exps[j];
                if e == 0 || e > 2 {
                    continue;
                }
                let mut rest = t.coeff;
                for k in 0..n {
                    if k != j && t.exps[k] > 0 {
                        rest = rest * b[k].powi(t.exps[k] as u32);
                    }
                }
                let Ok(q) = others.div(rest) else { continue };
                let xj = b[j];
                let narrowed = if e == 1 {
                    q.intersect(&xj)?
                } else {
                    let s = q.sqrt()?;
                    let pos = s.intersect(&xj);
                    let neg = (-s).intersect(&xj);
                    match (pos, neg) {
                        (Some(p), Some(m)) => p.hull(&m),
                        (Some(p), None) => p,
                        (None, Some(m)) => m,
                        (None, None) => return None,
                    }
                };
                b[j] = narrowed;
            }
        }
    }
    Some(())
}

/// Mean-value form per equation: `F_i(x) in F_i(m) + sum_k J_ik (x_k - m_k)`.
/// Each equation is solved for each variable whose derivative enclosure
/// excludes zero.
pub fn linear_contract(
    sys: &NumericSystem,
    b: &mut IntervalVector,
    mid: &[f64],
    f_mid: &[Interval],
    jac: &[Vec<Interval>],
) -> Option<()> {
    let n = sys.dim();
    for i in 0..sys.num_equations() {
        let dx: Vec<Interval> = (0..n).map(|k| b[k] - Interval::point(mid[k])).collect();
        let terms: Vec<Interval> = (0..n).map(|k| jac[i][k] * dx[k]).collect();
        let mut total = f_mid[i];
        for t in &terms {
            total = total + *t;
        }
        if !total.contains_zero() {
            return None;
        }
        for j in 0..n {
            if jac[i][j].contains_zero() {
                continue;
            }
            let mut rest = f_mid[i];
            for (k, t) in terms.iter().enumerate() {
                if k != j {
                    rest = rest + *t;
                }
            }
            let Ok(step) = (-rest).div(jac[i][j]) else { continue };
            let cand = step + Interval::point(mid[j]);
            b[j] = cand.intersect(&b[j])?;
        }
    }
    Some(())
}
