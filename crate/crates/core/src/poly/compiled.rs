use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, ToPrimitive, Zero};

use crate::error::SolveError;
use crate::numeric::rational::enclose_rational;
use crate::numeric::{Interval, Rational};
use crate::poly::Poly;

/// Maximum number of unknowns a compiled polynomial may depend on.
pub const MAX_UNKNOWNS: usize = 8;

#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub coeff: Interval,
    pub exps: [u8; MAX_UNKNOWNS],
}

/// Integer form `p = (1/denom) * sum a_k x^k` used for exact evaluation at
/// float points.
#[derive(Clone, Debug)]
struct IntegerForm {
    denom: BigInt,
    degree: u32,
    terms: Vec<(BigInt, [u8; MAX_UNKNOWNS])>,
}

#[derive(Clone, Debug)]
enum Node {
    Leaf(Interval, f64),
    Branch { var: usize, parts: Vec<(u32, Node)> },
}

/// A polynomial in the unknowns of a system (parameters already fixed),
/// prepared for fast float and interval evaluation.
///
/// Interval evaluation groups terms by powers of each unknown in turn, so
/// that a subexpression shared by several monomials is enclosed once.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    dim: usize,
    root: Node,
    terms: Vec<Term>,
    integer: IntegerForm,
}

impl CompiledPoly {
    /// `unknowns[k]` is the variable index (in `p.vars()`) of box component
    /// `k`. Fails if `p` depends on any other variable.
    pub fn new(p: &Poly, unknowns: &[usize]) -> Result<Self, SolveError> {
        let dim = unknowns.len();
        assert!(dim <= MAX_UNKNOWNS, "too many unknowns");
        let mut terms = Vec::with_capacity(p.num_terms());
        for (m, c) in p.terms() {
            let mut exps = [0u8; MAX_UNKNOWNS];
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match unknowns.iter().position(|&u| u == v) {
                    Some(k) => exps[k] = e,
                    None => return Err(SolveError::UnboundParameter(p.vars()[v].clone())),
                }
            }
            terms.push(Term {
                coeff: Interval::from_rational(c),
                exps,
            });
        }
        let approx: Vec<f64> = p.terms().map(|(_, c)| c.to_f64().unwrap_or(f64::NAN)).collect();
        let indexed: Vec<usize> = (0..terms.len()).collect();
        let root = build(&terms, &approx, &indexed, 0, dim);
        let denom = p
            .terms()
            .fold(BigInt::from(1), |acc, (_, c)| acc.lcm(c.denom()));
        let integer = IntegerForm {
            degree: p.total_degree(),
            terms: p
                .terms()
                .zip(&terms)
                .map(|((_, c), t)| (c.numer() * (&denom / c.denom()), t.exps))
                .collect(),
            denom,
        };
        Ok(CompiledPoly {
            dim,
            root,
            terms,
            integer,
        })
    }

    /// Enclosure of the value at a float point, at most a few ulps wide:
    /// the polynomial is evaluated exactly in integer arithmetic and rounded
    /// once.
    pub fn eval_point_exact(&self, x: &[f64]) -> Interval {
        debug_assert_eq!(x.len(), self.dim);
        if x.iter().any(|v| !v.is_finite()) {
            return Interval::ENTIRE;
        }
        let form = &self.integer;
        // x_k = n_k * 2^e with integer n_k and a common exponent e <= 0
        let decoded: Vec<(u64, i32, i8)> = x
            .iter()
            .map(|v| {
                let (m, e, sign) = Float::integer_decode(*v);
                (m, e as i32, sign)
            })
            .collect();
        let e = decoded
            .iter()
            .filter(|d| d.0 != 0)
            .map(|d| d.1)
            .min()
            .unwrap_or(0)
            .min(0);
        let shift = (-e) as usize;
        let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(self.dim);
        for &(m, ek, sign) in &decoded {
            let n = if m == 0 {
                BigInt::zero()
            } else {
                let n = BigInt::from(m) << ((ek - e) as usize);
                if sign < 0 {
                    -n
                } else {
                    n
                }
            };
            let mut pw = vec![BigInt::from(1)];
            for j in 1..=form.degree as usize {
                let next = &pw[j - 1] * &n;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut sum = BigInt::zero();
        for (a, exps) in &form.terms {
            let mut t = a.clone();
            let mut deg = 0usize;
            for (k, &ek) in exps.iter().enumerate().take(self.dim) {
                if ek > 0 {
                    t *= &powers[k][ek as usize];
                    deg += ek as usize;
                }
            }
            sum += t << (shift * (form.degree as usize - deg));
        }
        let value = Rational::new(sum, &form.denom << (shift * form.degree as usize));
        let (lo, hi) = enclose_rational(&value);
        Interval::new(lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        eval_f64(&self.root, x)
    }

    /// Enclosure of the range over a box.
    pub fn eval_interval(&self, x: &[Interval]) -> Interval {
        debug_assert_eq!(x.len(), self.dim);
        eval_iv(&self.root, x)
    }

    /// Enclosure of the value at a float point (outward rounded).
    pub fn eval_point(&self, x: &[f64]) -> Interval {
        let pts: Vec<Interval> = x.iter().map(|&v| Interval::point(v)).collect();
        eval_iv(&self.root, &pts)
    }

    /// Monomial-sum enclosure, the unfactored reference form.
    pub fn eval_interval_naive(&self, x: &[Interval]) -> Interval {
        let mut sum = Interval::ZERO;
        for t in &self.terms {
            let mut v = t.coeff;
            for (k, &e) in t.exps[..self.dim].iter().enumerate() {
                if e > 0 {
                    v = v * x[k].powi(e as u32);
                }
            }
            sum = sum + v;
        }
        sum
    }
}

fn build(terms: &[Term], approx: &[f64], idx: &[usize], level: usize, dim: usize) -> Node {
    if level == dim {
        let mut c = Interval::ZERO;
        let mut f = 0.0;
        for &i in idx {
            c = c + terms[i].coeff;
            f += approx[i];
        }
        return Node::Leaf(c, f);
    }
    let mut powers: Vec<u8> = idx.iter().map(|&i| terms[i].exps[level]).collect();
    powers.sort_unstable();
    powers.dedup();
    if powers.len() == 1 && powers[0] == 0 {
        return build(terms, approx, idx, level + 1, dim);
    }
    let parts = powers
        .into_iter()
        .map(|p| {
            let group: Vec<usize> = idx.iter().copied().filter(|&i| terms[i].exps[level] == p).collect();
            (p as u32, build(terms, approx, &group, level + 1, dim))
        })
        .collect();
    Node::Branch { var: level, parts }
}

fn eval_f64(node: &Node, x: &[f64]) -> f64 {
    match node {
        Node::Leaf(_, f) => *f,
        Node::Branch { var, parts } => {
            let mut sum = 0.0;
            for (p, child) in parts {
                let c = eval_f64(child, x);
                sum += if *p == 0 { c } else { c * x[*var].powi(*p as i32) };
            }
            sum
        }
    }
}

fn eval_iv(node: &Node, x: &[Interval]) -> Interval {
    match node {
        Node::Leaf(c, _) => *c,
        Node::Branch { var, parts } => {
            let mut sum = Interval::ZERO;
            for (p, child) in parts {
                let c = eval_iv(child, x);
                sum = sum + if *p == 0 { c } else { c * x[*var].powi(*p) };
            }
            sum
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::ratio;
    use crate::poly::vars;

    #[test]
    fn factored_and_naive_forms_agree_at_points() {
        let v = vars(&["x", "y", "a"]);
        let x = Poly::var(&v, "x").unwrap();
        let y = Poly::var(&v, "y").unwrap();
        let p = &(&(&x * &x) * &y) - &(&x * &y).scale(&ratio(3, 2)) + Poly::from_int(&v, 2);
        let c = CompiledPoly::new(&p, &[0, 1]).unwrap();
        let pt = [0.75, -1.25];
        let exact = p.eval_rational(&[ratio(3, 4), ratio(-5, 4), ratio(0, 1)]);
        let exact = num_traits::ToPrimitive::to_f64(&exact).unwrap();
        assert!(c.eval_point(&pt).contains(exact));
        assert!((c.eval(&pt) - exact).abs() < 1e-12);
        let b = [Interval::new(0.5, 1.0), Interval::new(-2.0, -1.0)];
        let f = c.eval_interval(&b);
        let n = c.eval_interval_naive(&b);
        assert!(f.contains(exact) && n.contains(exact));
        assert!(f.width() <= n.width() + 1e-12);
    }

    #[test]
    fn unbound_parameter_is_reported() {
        let v = vars(&["x", "a"]);
        let p = &Poly::var(&v, "x").unwrap() * &Poly::var(&v, "a").unwrap();
        assert_eq!(
            CompiledPoly::new(&p, &[0]).unwrap_err(),
            SolveError::UnboundParameter("a".into())
        );
    }

    #[test]
    fn exact_evaluation_detects_true_zeros() {
        let v = vars(&["x", "y"]);
        let x = Poly::var(&v, "x").unwrap();
        let y = Poly::var(&v, "y").unwrap();
        // x^2 - 2xy + y^2 - 1/1024 vanishes at (0.1 + 1/32, 0.1)
        let p = &(&(&x * &x) - &(&x * &y).scale(&ratio(2, 1))) + &(&y * &y)
            - Poly::constant(&v, ratio(1, 1024));
        let c = CompiledPoly::new(&p, &[0, 1]).unwrap();
        let pt = [0.1 + 1.0 / 32.0, 0.1];
        let exact = c.eval_point_exact(&pt);
        let xr = crate::numeric::rational::rational_from_f64(pt[0]);
        let yr = crate::numeric::rational::rational_from_f64(pt[1]);
        let truth = p.eval_rational(&[xr, yr]);
        let truth = num_traits::ToPrimitive::to_f64(&truth).unwrap();
        assert!(exact.contains(truth));
        assert!(exact.width() <= 4.0 * f64::EPSILON * truth.abs().max(f64::MIN_POSITIVE));
        assert!(c.eval_point(&pt).contains(truth));
        let on = [0.5 + 1.0 / 32.0, 0.5];
        assert_eq!(c.eval_point_exact(&on), Interval::point(0.0));
    }
}
