//! Closed intervals of `f64` with outward rounding.
//!
//! Every operation returns an interval that contains the exact real result
//! for all operand values. Rounding direction is recovered from error-free
//! transformations (two-sum, fused multiply-add residuals), so results that
//! are exactly representable stay exact.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::IntervalError;
use crate::numeric::rational::{enclose_rational, Rational};

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

// Below this magnitude the fma residual may itself be inexact.
const TINY: f64 = 1e-280;

#[inline]
fn down(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        x
    } else {
        x.next_down()
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x == f64::INFINITY {
        x
    } else {
        x.next_up()
    }
}

/// `a + b` rounded toward -inf and +inf.
#[inline]
fn add_rd_ru(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if !s.is_finite() {
        return (if s.is_nan() { f64::NEG_INFINITY } else { s }, if s.is_nan() { f64::INFINITY } else { s });
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    if err < 0.0 {
        (down(s), s)
    } else if err > 0.0 {
        (s, up(s))
    } else {
        (s, s)
    }
}

#[inline]
fn mul_rd_ru(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if p.is_nan() {
        // 0 * inf
        return (f64::NEG_INFINITY, f64::INFINITY);
    }
    if !p.is_finite() {
        return (p, p);
    }
    if p.abs() < TINY {
        if p == 0.0 && (a == 0.0 || b == 0.0) {
            return (0.0, 0.0);
        }
        return (down(p), up(p));
    }
    let err = a.mul_add(b, -p);
    if err < 0.0 {
        (down(p), p)
    } else if err > 0.0 {
        (p, up(p))
    } else {
        (p, p)
    }
}

#[inline]
fn div_rd_ru(a: f64, b: f64) -> (f64, f64) {
    let q = a / b;
    if !q.is_finite() {
        return (down(q), up(q));
    }
    if q.abs() < TINY || a.abs() < TINY {
        if a == 0.0 {
            return (0.0, 0.0);
        }
        return (down(q), up(q));
    }
    // a - q*b, exact
    let r = (-q).mul_add(b, a);
    let r = if b < 0.0 { -r } else { r };
    if r < 0.0 {
        (down(q), q)
    } else if r > 0.0 {
        (q, up(q))
    } else {
        (q, q)
    }
}

impl Interval {
    /// Interval `[lo, hi]`. Panics on `lo > hi` or NaN endpoints.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Self> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub const fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub const ZERO: Interval = Interval::point(0.0);

    /// Tight enclosure of an exact rational.
    pub fn from_rational(value: &Rational) -> Self {
        let (lo, hi) = enclose_rational(value);
        Interval { lo, hi }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Midpoint, always inside the interval.
    #[inline]
    pub fn mid(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Largest absolute value.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Smallest absolute value.
    #[inline]
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    #[inline]
    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `self` lies in the open interior of `other`.
    pub fn is_interior_of(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::try_new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn div(self, rhs: Interval) -> Result<Interval, IntervalError> {
        if rhs.contains_zero() {
            return Err(IntervalError::DivisionByZero);
        }
        let cands = [
            div_rd_ru(self.lo, rhs.lo),
            div_rd_ru(self.lo, rhs.hi),
            div_rd_ru(self.hi, rhs.lo),
            div_rd_ru(self.hi, rhs.hi),
        ];
        Ok(hull_of(&cands))
    }

    pub fn square(self) -> Interval {
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let (small, large) = if a <= b { (a, b) } else { (b, a) };
        let hi = mul_rd_ru(large, large).1;
        if self.contains_zero() {
            Interval { lo: 0.0, hi }
        } else {
            Interval {
                lo: mul_rd_ru(small, small).0,
                hi,
            }
        }
    }

    /// Integer power with the tight range for even exponents.
    pub fn powi(self, n: u32) -> Interval {
        match n {
            0 => Interval::point(1.0),
            1 => self,
            2 => self.square(),
            _ => {
                let pd = |x: f64| pow_abs(x.abs(), n).0;
                let pu = |x: f64| pow_abs(x.abs(), n).1;
                if n % 2 == 0 {
                    let (a, b) = (self.lo.abs(), self.hi.abs());
                    let (small, large) = if a <= b { (a, b) } else { (b, a) };
                    let lo = if self.contains_zero() { 0.0 } else { pd(small) };
                    Interval { lo, hi: pu(large) }
                } else {
                    // odd powers are monotone
                    let lo = if self.lo >= 0.0 { pd(self.lo) } else { -pu(self.lo) };
                    let hi = if self.hi >= 0.0 { pu(self.hi) } else { -pd(self.hi) };
                    Interval { lo, hi }
                }
            }
        }
    }

    /// Square root of the nonnegative part; `None` when entirely negative.
    pub fn sqrt(self) -> Option<Interval> {
        if self.hi < 0.0 {
            return None;
        }
        let lo = if self.lo <= 0.0 { 0.0 } else { sqrt_rd_ru(self.lo).0 };
        Some(Interval {
            lo,
            hi: sqrt_rd_ru(self.hi).1,
        })
    }

    /// Interval scaled by an exact float.
    pub fn scale(self, k: f64) -> Interval {
        self * Interval::point(k)
    }

    /// Widen symmetrically by `eps` (rounded outward).
    pub fn inflate(self, eps: f64) -> Interval {
        Interval {
            lo: add_rd_ru(self.lo, -eps).0,
            hi: add_rd_ru(self.hi, eps).1,
        }
    }

    /// Bisect at `lo + frac * width`.
    pub fn split_at(self, frac: f64) -> (Interval, Interval) {
        let cut = (self.lo + frac * (self.hi - self.lo)).clamp(self.lo, self.hi);
        (
            Interval { lo: self.lo, hi: cut },
            Interval { lo: cut, hi: self.hi },
        )
    }
}

fn sqrt_rd_ru(x: f64) -> (f64, f64) {
    let s = x.sqrt();
    if !s.is_finite() || s < TINY {
        return (down(s).max(0.0), up(s));
    }
    let r = (-s).mul_add(s, x);
    if r < 0.0 {
        (down(s), s)
    } else if r > 0.0 {
        (s, up(s))
    } else {
        (s, s)
    }
}

/// `x^n` for `x >= 0`, rounded down and up.
fn pow_abs(x: f64, n: u32) -> (f64, f64) {
    let mut lo = 1.0;
    let mut hi = 1.0;
    for _ in 0..n {
        lo = mul_rd_ru(lo, x).0;
        hi = mul_rd_ru(hi, x).1;
    }
    (lo.max(0.0), hi)
}

fn hull_of(cands: &[(f64, f64)]) -> Interval {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &(l, h) in cands {
        lo = lo.min(l);
        hi = hi.max(h);
    }
    Interval { lo, hi }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: add_rd_ru(self.lo, rhs.lo).0,
            hi: add_rd_ru(self.hi, rhs.hi).1,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        self + (-rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        if self.lo >= 0.0 && rhs.lo >= 0.0 {
            return Interval {
                lo: mul_rd_ru(self.lo, rhs.lo).0,
                hi: mul_rd_ru(self.hi, rhs.hi).1,
            };
        }
        let cands = [
            mul_rd_ru(self.lo, rhs.lo),
            mul_rd_ru(self.lo, rhs.hi),
            mul_rd_ru(self.hi, rhs.lo),
            mul_rd_ru(self.hi, rhs.hi),
        ];
        hull_of(&cands)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
