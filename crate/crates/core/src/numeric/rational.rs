//! Exact rational numbers and their ingestion from decimal text.

use std::fmt::Write as _;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Parses a finite decimal such as `"15.91"`, `"-0.5"` or `"+3"` into the
/// rational it denotes exactly.
pub fn rational_from_decimal(text: &str) -> Result<Rational, ParseError> {
    let bad = || ParseError::Decimal(text.to_string());
    let s = text.trim();
    let (negative, digits) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        Some(_) => (false, s),
        None => return Err(bad()),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let numer: BigInt = all.parse().map_err(|_| bad())?;
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Parses either a finite decimal or an explicit fraction `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    match text.split_once('/') {
        Some((p, q)) => {
            let bad = || ParseError::Decimal(text.to_string());
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => rational_from_decimal(text),
    }
}

/// Renders a rational so that [`parse_rational`] reads it back exactly: a
/// terminating decimal when the denominator allows it, `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    let denom = value.denom();
    let mut rest = denom.clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    while rest.is_even() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", value.numer(), denom);
    }
    let places = twos.max(fives);
    let scaled = value * Rational::from_integer(BigInt::from(10u32).pow(places));
    debug_assert!(scaled.is_integer());
    let digits = scaled.to_integer().abs().to_string();
    let mut out = String::new();
    if value.is_negative() {
        out.push('-');
    }
    if places == 0 {
        out.push_str(&digits);
        return out;
    }
    let places = places as usize;
    if digits.len() <= places {
        out.push_str("0.");
        for _ in digits.len()..places {
            out.push('0');
        }
        out.push_str(&digits);
    } else {
        let (i, f) = digits.split_at(digits.len() - places);
        let _ = write!(out, "{i}.{f}");
    }
    out
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

/// Nearest float to a rational (not guaranteed to be correctly rounded; use
/// [`enclose_rational`] when a bound is needed).
pub fn rational_to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.numer().sign() == Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Floats `(lo, hi)` with `lo <= value <= hi`, at most a couple of ulps apart.
pub fn enclose_rational(value: &Rational) -> (f64, f64) {
    let approx = rational_to_f64(value);
    if !approx.is_finite() {
        return if approx > 0.0 {
            (f64::MAX, f64::INFINITY)
        } else {
            (f64::NEG_INFINITY, f64::MIN)
        };
    }
    let mut lo = approx;
    let mut hi = approx;
    while rational_from_f64(lo) > *value {
        lo = lo.next_down();
    }
    while rational_from_f64(hi) < *value {
        hi = hi.next_up();
    }
    (lo, hi)
}

/// Convenience: rational from a small integer ratio.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Best rational approximation of `x` whose distance to `x` is within `tol`,
/// found among the continued-fraction convergents of `x`.
pub fn simplest_within(x: &Rational, tol: &Rational) -> Rational {
    let mut h_prev = BigInt::one();
    let mut h_prev2 = BigInt::zero();
    let mut k_prev = BigInt::zero();
    let mut k_prev2 = BigInt::one();
    let mut rem = x.clone();
    loop {
        let a = rem.floor().to_integer();
        let h = &a * &h_prev + &h_prev2;
        let k = &a * &k_prev + &k_prev2;
        let approx = Rational::new(h.clone(), k.clone());
        if (&approx - x).abs() <= *tol {
            return approx;
        }
        let frac = &rem - Rational::from_integer(a);
        if frac.is_zero() {
            return approx;
        }
        rem = frac.recip();
        h_prev2 = std::mem::replace(&mut h_prev, h);
        k_prev2 = std::mem::replace(&mut k_prev, k);
    }
}
