//! Structure of the built systems and agreement with numerically built
//! Jacobians and minors.

mod common;

use common::{det4, Oracle};
use cuspidal::model::{build_cusp_system, build_singular_system, Geometry, POSE_VARS};
use cuspidal::numeric::Rational;
use proptest::prelude::*;
use rand::Rng;

fn degrees_sorted(g: &Geometry) -> Vec<u32> {
    let mut d = build_cusp_system(g).degrees();
    d.sort();
    d
}

/// Geometries with small rational data and a rational platform angle.
fn geometry() -> impl Strategy<Value = Geometry> {
    (1i64..40, -30i64..30, -30i64..30, 1i64..30, 1i64..30, -20i64..20, 1i64..20).prop_filter_map(
        "valid geometry",
        |(a2x, a3x, a3y, d1, d3, tn, td)| {
            let r = |n: i64| Rational::from_integer(n.into());
            let t = Rational::new(tn.into(), td.into());
            let one = r(1);
            let den = &one + &t * &t;
            let bx = (&one - &t * &t) / &den;
            let by = (r(2) * &t) / &den;
            Geometry::from_beta(r(a2x), r(a3x), r(a3y), r(d1), r(d3), bx, by).ok()
        },
    )
}

#[test]
fn benchmark_cusp_system_has_the_expected_degrees() {
    let g = Geometry::benchmark();
    let cs = build_cusp_system(&g);
    assert_eq!(cs.len(), 9);
    assert_eq!(cs.degrees(), vec![2, 2, 2, 2, 3, 5, 5, 5, 5]);
    assert_eq!(cs.unknown_names(), vec!["B1x", "B1y", "tx", "ty", "r2", "r3"]);
    assert_eq!(cs.parameter_names(), vec!["r1"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn any_geometry_gives_the_same_structure(g in geometry()) {
        prop_assert_eq!(degrees_sorted(&g), vec![2, 2, 2, 2, 3, 5, 5, 5, 5]);
        let sing = build_singular_system(&g);
        let minors = sing.jacobian(&POSE_VARS).unwrap().minors(4).unwrap();
        prop_assert_eq!(minors.len(), 5);
        prop_assert!(minors[0] == sing.equations()[4]);
        let cs = build_cusp_system(&g);
        prop_assert!(cs.equations()[..5] == sing.equations()[..]);
        prop_assert!(cs.equations()[5..] == minors[1..]);
    }
}

fn central<const N: usize>(f: impl Fn(&[f64; 4]) -> [f64; N], x: &[f64; 4], h: f64) -> [[f64; 4]; N] {
    let mut out = [[0.0; 4]; N];
    for k in 0..4 {
        let (mut up, mut down) = (*x, *x);
        up[k] += h;
        down[k] -= h;
        let (fu, fd) = (f(&up), f(&down));
        for i in 0..N {
            out[i][k] = (fu[i] - fd[i]) / (up[k] - down[k]);
        }
    }
    out
}

#[test]
fn symbolic_systems_match_finite_difference_constructions() {
    let g = Geometry::benchmark();
    let o = Oracle::new(&g);
    let cs = build_cusp_system(&g);
    let mut rng = common::rng(101);
    for _ in 0..100 {
        let x = [
            rng.gen_range(-30.0..30.0),
            rng.gen_range(-30.0..30.0),
            rng.gen_range(-1.2..1.2),
            rng.gen_range(-1.2..1.2),
        ];
        let r = [rng.gen_range(0.0..35.0), rng.gen_range(0.0..45.0), rng.gen_range(0.0..45.0)];
        let e = |y: &[f64; 4]| o.residual(y, &r);
        let jac = |y: &[f64; 4]| [det4(central(e, y, 1e-3))];
        let mut rows = central(e, &x, 1e-3).to_vec();
        rows.push(central(jac, &x, 1e-3)[0]);
        let mut numeric = e(&x).to_vec();
        numeric.push(jac(&x)[0]);
        for skip in (0..4).rev() {
            let m: Vec<[f64; 4]> = (0..5).filter(|&i| i != skip).map(|i| rows[i]).collect();
            numeric.push(det4([m[0], m[1], m[2], m[3]]));
        }
        let pt = [x[0], x[1], x[2], x[3], r[0], r[1], r[2]];
        for (k, (p, v)) in cs.equations().iter().zip(&numeric).enumerate() {
            let sym = p.eval_f64(&pt);
            let scale = p.magnitude_f64(&pt).max(1.0);
            assert!((sym - v).abs() <= 1e-5 * scale, "equation {k} at {pt:?}: {sym} vs {v}");
        }
    }
}
