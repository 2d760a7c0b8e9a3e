//! Containment properties of interval arithmetic and field identities of the
//! rational kernel.

use cuspidal::numeric::rational::rational_from_f64;
use cuspidal::numeric::{Interval, Rational};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn interval() -> impl Strategy<Value = Interval> {
    (-1e3f64..1e3, 0.0f64..1e3).prop_map(|(lo, w)| Interval::new(lo, lo + w))
}

/// An interval together with a sub-interval of it.
fn nested() -> impl Strategy<Value = (Interval, Interval)> {
    (interval(), 0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(outer, f, g)| {
        let (f, g) = if f <= g { (f, g) } else { (g, f) };
        let lo = (outer.lo() + f * outer.width()).min(outer.hi());
        let hi = (outer.lo() + g * outer.width()).clamp(lo, outer.hi());
        (Interval::new(lo, hi), outer)
    })
}

fn exact(x: f64) -> Rational {
    rational_from_f64(x)
}

fn encloses(iv: &Interval, q: &Rational) -> bool {
    exact(iv.lo()) <= *q && *q <= exact(iv.hi())
}

/// The rational point `lo + (hi - lo) * k / 64`.
fn point_in(iv: &Interval, k: u8) -> Rational {
    let (lo, hi) = (exact(iv.lo()), exact(iv.hi()));
    &lo + (&hi - &lo) * Rational::new(k.into(), 64.into())
}

fn binary_ops(a: Interval, b: Interval) -> Vec<(&'static str, Option<Interval>)> {
    vec![
        ("add", Some(a + b)),
        ("sub", Some(a - b)),
        ("mul", Some(a * b)),
        ("div", a.div(b).ok()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn containment_monotonicity((a, a2) in nested(), (b, b2) in nested(), n in 0u32..6) {
        for ((name, inner), (_, outer)) in binary_ops(a, b).into_iter().zip(binary_ops(a2, b2)) {
            match (inner, outer) {
                (Some(i), Some(o)) => prop_assert!(i.is_subset_of(&o), "{name}: {i:?} not in {o:?}"),
                (None, Some(_)) => prop_assert!(false, "{name}: inner failed but outer succeeded"),
                _ => {}
            }
        }
        prop_assert!((-a).is_subset_of(&(-a2)));
        prop_assert!(a.square().is_subset_of(&a2.square()));
        prop_assert!(a.powi(n).is_subset_of(&a2.powi(n)));
        if let (Some(s), Some(s2)) = (a.sqrt(), a2.sqrt()) {
            prop_assert!(s.is_subset_of(&s2));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn point_consistency(a in interval(), b in interval(), i in 0u8..=64, j in 0u8..=64, n in 0u32..6) {
        let (p, q) = (point_in(&a, i), point_in(&b, j));
        prop_assert!(encloses(&(a + b), &(&p + &q)));
        prop_assert!(encloses(&(a - b), &(&p - &q)));
        prop_assert!(encloses(&(a * b), &(&p * &q)));
        prop_assert!(encloses(&a.square(), &(&p * &p)));
        let pow = (0..n).fold(Rational::from_integer(1.into()), |acc, _| acc * &p);
        prop_assert!(encloses(&a.powi(n), &pow));
        if !q.is_zero() {
            if let Ok(d) = a.div(b) {
                prop_assert!(encloses(&d, &(&p / &q)));
            }
        }
    }

    #[test]
    fn rational_point_enclosures_are_tight(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
        let q = Rational::new(n.into(), d.into());
        let iv = Interval::from_rational(&q);
        prop_assert!(encloses(&iv, &q));
        prop_assert!(iv.width() <= 2.0 * f64::EPSILON * iv.mag().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn rational_distributivity(
        a in (-10_000i64..10_000, 1i64..10_000),
        b in (-10_000i64..10_000, 1i64..10_000),
        c in (-10_000i64..10_000, 1i64..10_000),
    ) {
        let r = |(n, d): (i64, i64)| Rational::new(n.into(), d.into());
        let (p, q, s) = (r(a), r(b), r(c));
        let lhs = (&p + &q) * &s;
        prop_assert_eq!(&lhs, &(&p * &s + &q * &s));
        for v in [&p, &q, &s, &lhs] {
            prop_assert!(v.denom().is_positive());
            prop_assert!(v.numer().gcd(v.denom()) == 1.into() || v.numer().is_zero());
        }
    }
}

#[test]
fn division_by_interval_containing_zero_is_an_error() {
    assert!(Interval::new(1.0, 1.0).div(Interval::new(0.0, 1.0)).is_err());
    assert_eq!(Interval::new(1.0, 2.0) + Interval::new(3.0, 4.0), Interval::new(4.0, 6.0));
    assert_eq!(Interval::new(-1.0, 2.0).square(), Interval::new(0.0, 4.0));
}
