//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] lives in a fixed list of named variables; terms are stored as a
//! map from exponent vectors to nonzero coefficients. All arithmetic is
//! exact. Interval evaluation comes in two flavours: the plain sum of
//! monomial enclosures ([`Poly::eval_interval_naive`]) and a nested,
//! variable-by-variable factored form ([`CompiledPoly`]) used by the solver.

mod compiled;
mod matrix;
mod system;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::PolyError;
use crate::numeric::{format_rational, Interval, Rational};

pub use compiled::CompiledPoly;
pub use matrix::PolyMatrix;
pub use system::PolySystem;

/// Shared, ordered list of variable names.
pub type Vars = Arc<[String]>;

pub fn vars(names: &[&str]) -> Vars {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

/// Exponent vector ordered by graded lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Poly::constant(vars, Rational::from_integer(c.into()))
    }

    /// The variable with the given index.
    pub fn var_at(vars: &Vars, index: usize) -> Self {
        let mut m = Monomial::one(vars.len());
        m.0[index] = 1;
        let mut p = Poly::zero(vars);
        p.terms.insert(m, Rational::one());
        p
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self, PolyError> {
        let i = index_of(vars, name)?;
        Ok(Poly::var_at(vars, i))
    }

    /// Builds from `(exponents, coefficient)` pairs; zero coefficients and
    /// repeated monomials are merged.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u8>, Rational)>,
    {
        let mut p = Poly::zero(vars);
        for (exps, c) in terms {
            assert_eq!(exps.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(exps), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.0[index] as u32).max().unwrap_or(0)
    }

    /// Indices of the variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn check_compatible(&self, other: &Poly) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists"
        );
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::constant(&self.vars, Rational::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces variable `index` by the value `value`.
    pub fn substitute_at(&self, index: usize, value: &Rational) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            let mut m2 = m.clone();
            m2.0[index] = 0;
            let factor = pow_rational(value, e as u32);
            out.add_term(m2, c * factor);
        }
        out
    }

    pub fn substitute(&self, name: &str, value: &Rational) -> Result<Poly, PolyError> {
        Ok(self.substitute_at(index_of(&self.vars, name)?, value))
    }

    pub fn derivative_at(&self, index: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[index] = e - 1;
            out.add_term(m2, c * Rational::from_integer(e.into()));
        }
        out
    }

    pub fn derivative(&self, name: &str) -> Result<Poly, PolyError> {
        Ok(self.derivative_at(index_of(&self.vars, name)?))
    }

    pub fn eval_rational(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.vars.len());
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= pow_rational(x, e as u32);
                }
            }
            sum += t;
        }
        sum
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.vars.len());
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (x, &e) in point.iter().zip(&m.0) {
                    if e > 0 {
                        t *= x.powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Sum of `|coefficient * monomial|` at a point; the natural scale against
    /// which a float residual is judged.
    pub fn magnitude_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN).abs();
                for (x, &e) in point.iter().zip(&m.0) {
                    t *= x.abs().powi(e as i32);
                }
                t
            })
            .sum()
    }

    /// Reference interval evaluation: each monomial enclosed separately and
    /// summed.
    pub fn eval_interval_naive(&self, point: &[Interval]) -> Interval {
        assert_eq!(point.len(), self.vars.len());
        let mut sum = Interval::ZERO;
        for (m, c) in &self.terms {
            let mut t = Interval::from_rational(c);
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = t * x.powi(e as u32);
                }
            }
            sum = sum + t;
        }
        sum
    }

    /// Textual dump, one term per line as `coeff * v1^a v2^b ...`, leading
    /// term first in graded-lex order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let _ = write!(out, "{} *", format_rational(c));
            for (name, e) in self.vars.iter().zip(&m.0) {
                let _ = write!(out, " {name}^{e}");
            }
            out.push('\n');
        }
        out
    }
}

fn pow_rational(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

pub(crate) fn index_of(vars: &Vars, name: &str) -> Result<usize, PolyError> {
    vars.iter()
        .position(|v| v == name)
        .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_compatible(rhs);
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            let mag = c.abs();
            let is_const = m.degree() == 0;
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
            }
            let mut first = mag.is_one() && !is_const;
            for (name, &e) in self.vars.iter().zip(&m.0) {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
