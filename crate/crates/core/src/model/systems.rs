use std::sync::OnceLock;

use num_traits::ToPrimitive;

use crate::error::GeometryError;
use crate::model::Geometry;
use crate::numeric::rational::rational_from_f64;
use crate::numeric::Rational;
use crate::poly::{vars, Poly, PolySystem, Vars};

/// Pose unknowns, in box order.
pub const POSE_VARS: [&str; 4] = ["B1x", "B1y", "tx", "ty"];

/// Unknowns of the cusp system for a fixed `r1`.
pub const CUSP_UNKNOWNS: [&str; 6] = ["B1x", "B1y", "tx", "ty", "r2", "r3"];

const ALL_VARS: [&str; 7] = ["B1x", "B1y", "tx", "ty", "r1", "r2", "r3"];

/// The variable list shared by every model polynomial.
pub fn model_vars() -> Vars {
    static VARS: OnceLock<Vars> = OnceLock::new();
    VARS.get_or_init(|| vars(&ALL_VARS)).clone()
}

/// Platform pose: `B1` and `(cos alpha, sin alpha)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    pub b1x: f64,
    pub b1y: f64,
    pub tx: f64,
    pub ty: f64,
}

impl Pose {
    pub fn new(b1x: f64, b1y: f64, tx: f64, ty: f64) -> Self {
        Pose { b1x, b1y, tx, ty }
    }

    pub fn from_angle(b1x: f64, b1y: f64, alpha: f64) -> Self {
        Pose::new(b1x, b1y, alpha.cos(), alpha.sin())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.b1x, self.b1y, self.tx, self.ty]
    }

    /// Platform joints `B1, B2, B3`.
    pub fn platform_points(&self, g: &Geometry) -> [(f64, f64); 3] {
        let g = g.f64s();
        let b1 = (self.b1x, self.b1y);
        let b2 = (self.b1x + g.d1 * self.tx, self.b1y + g.d1 * self.ty);
        let b3 = (
            self.b1x + g.d3 * (self.tx * g.bx - self.ty * g.by),
            self.b1y + g.d3 * (self.tx * g.by + self.ty * g.bx),
        );
        [b1, b2, b3]
    }
}

/// Actuated leg lengths `(r1, r2, r3)`, held exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct JointLengths {
    pub r1: Rational,
    pub r2: Rational,
    pub r3: Rational,
}

impl JointLengths {
    pub fn new(r1: Rational, r2: Rational, r3: Rational) -> Self {
        JointLengths { r1, r2, r3 }
    }

    pub fn from_f64(r: [f64; 3]) -> Self {
        JointLengths::new(rational_from_f64(r[0]), rational_from_f64(r[1]), rational_from_f64(r[2]))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        [f(&self.r1), f(&self.r2), f(&self.r3)]
    }

    pub fn is_nonnegative(&self) -> bool {
        let z = Rational::from_integer(0.into());
        self.r1 >= z && self.r2 >= z && self.r3 >= z
    }
}

/// A joint vector together with one platform pose.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub lengths: [f64; 3],
    pub pose: Pose,
}

impl Configuration {
    /// `(r1, r2, r3, B1x, B1y, tx, ty)`.
    pub fn as_array(&self) -> [f64; 7] {
        let [r1, r2, r3] = self.lengths;
        let p = self.pose;
        [r1, r2, r3, p.b1x, p.b1y, p.tx, p.ty]
    }
}

fn c(v: &Vars, q: &Rational) -> Poly {
    Poly::constant(v, q.clone())
}

/// The four constraint polynomials `E1..E4` in the pose unknowns, with the
/// leg lengths as parameters.
pub fn build_constraints(g: &Geometry) -> PolySystem {
    let v = model_vars();
    let x = |n: &str| Poly::var(&v, n).expect("model variable");
    let (b1x, b1y, tx, ty) = (x("B1x"), x("B1y"), x("tx"), x("ty"));
    let (r1, r2, r3) = (x("r1"), x("r2"), x("r3"));
    let one = Poly::from_int(&v, 1);

    let e1 = &(&b1x * &b1x + &b1y * &b1y) - &(&r1 * &r1);

    let u2 = &(&b1x + &tx.scale(&g.d1)) - &c(&v, &g.a2x);
    let w2 = &b1y + &ty.scale(&g.d1);
    let e2 = &(&u2 * &u2 + &w2 * &w2) - &(&r2 * &r2);

    let rot_x = &tx.scale(&g.beta_x) - &ty.scale(&g.beta_y);
    let rot_y = &tx.scale(&g.beta_y) + &ty.scale(&g.beta_x);
    let u3 = &(&b1x + &rot_x.scale(&g.d3)) - &c(&v, &g.a3x);
    let w3 = &(&b1y + &rot_y.scale(&g.d3)) - &c(&v, &g.a3y);
    let e3 = &(&u3 * &u3 + &w3 * &w3) - &(&r3 * &r3);

    let e4 = &(&tx * &tx + &ty * &ty) - &one;

    PolySystem::new(&v, vec![e1, e2, e3, e4], &POSE_VARS, &["r1", "r2", "r3"]).expect("declared variables")
}

/// `E1..E4` plus `J = det(dE/dX)`; its solutions are the parallel
/// singularities.
pub fn build_singular_system(g: &Geometry) -> PolySystem {
    let e = build_constraints(g);
    let j = e.jacobian(&POSE_VARS).expect("pose variables").det().expect("square");
    let mut eqs = e.equations().to_vec();
    eqs.push(j);
    PolySystem::new(e.vars(), eqs, &POSE_VARS, &["r1", "r2", "r3"]).expect("declared variables")
}

/// The nine-equation cusp system: `E1..E4`, `J = M1`, and the four `4x4`
/// minors `M2..M5` of the Jacobian of `(E1, E2, E3, E4, J)` that involve the
/// gradient of `J`. Unknowns are the pose and `(r2, r3)`; `r1` is the
/// parameter.
pub fn build_cusp_system(g: &Geometry) -> PolySystem {
    let sing = build_singular_system(g);
    let minors = sing
        .jacobian(&POSE_VARS)
        .expect("pose variables")
        .minors(4)
        .expect("5x4 matrix");
    debug_assert_eq!(minors.len(), 5);
    let mut eqs = sing.equations().to_vec();
    eqs.extend(minors.into_iter().skip(1));
    PolySystem::new(sing.vars(), eqs, &CUSP_UNKNOWNS, &["r1"]).expect("declared variables")
}

/// Leg lengths `|A_i B_i|` for a pose.
pub fn inverse_kinematics(g: &Geometry, p: &Pose) -> Result<[f64; 3], GeometryError> {
    let n = p.tx * p.tx + p.ty * p.ty;
    if !((n - 1.0).abs() <= 1e-9) {
        return Err(GeometryError::Invalid(format!(
            "orientation ({}, {}) is not a unit vector",
            p.tx, p.ty
        )));
    }
    let gf = g.f64s();
    let [b1, b2, b3] = p.platform_points(g);
    Ok([
        b1.0.hypot(b1.1),
        (b2.0 - gf.a2x).hypot(b2.1),
        (b3.0 - gf.a3x).hypot(b3.1 - gf.a3y),
    ])
}

/// Float values of `E1..E4` at a configuration `(r1, r2, r3, B1x, B1y, tx, ty)`.
pub fn constraint_residuals(g: &Geometry, config: &[f64; 7]) -> [f64; 4] {
    let [r1, r2, r3, b1x, b1y, tx, ty] = *config;
    let gf = g.f64s();
    let [b1, b2, b3] = Pose::new(b1x, b1y, tx, ty).platform_points(g);
    [
        b1.0 * b1.0 + b1.1 * b1.1 - r1 * r1,
        (b2.0 - gf.a2x).powi(2) + b2.1.powi(2) - r2 * r2,
        (b3.0 - gf.a3x).powi(2) + (b3.1 - gf.a3y).powi(2) - r3 * r3,
        tx * tx + ty * ty - 1.0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::beta_from_degrees;
    use crate::numeric::rational::ratio;
    use crate::numeric::rational_from_decimal;
    use num_traits::Zero;

    fn dec(s: &str) -> Rational {
        rational_from_decimal(s).unwrap()
    }

    /// Cusp configurations at r1 = 14.98, printed to three decimals:
    /// `(r2, r3, B1x, B1y, tx, ty)`.
    const PUBLISHED_CUSPS: [[f64; 6]; 6] = [
        [0.845, 3.777, 5.336, -13.997, 0.633, 0.773],
        [13.851, 6.260, -14.963, 0.698, 0.998, -0.045],
        [31.276, 16.178, -6.104, 13.679, -0.543, -0.839],
        [17.988, 26.446, 14.721, -2.769, -0.985, 0.167],
        [30.449, 26.619, -10.363, 10.816, 0.537, 0.843],
        [16.027, 29.566, 14.437, 3.995, 0.999, -0.010],
    ];

    /// Point in `model_vars()` order `(B1x, B1y, tx, ty, r1, r2, r3)`.
    fn published_point(row: &[f64; 6]) -> [f64; 7] {
        [row[2], row[3], row[4], row[5], 14.98, row[0], row[1]]
    }

    #[test]
    fn orientation_constraint_is_the_unit_circle() {
        let e = build_constraints(&Geometry::benchmark());
        let e4 = &e.equations()[3];
        assert_eq!(e4.to_string(), "tx^2 + ty^2 - 1");
        let z = Rational::from_integer(0.into());
        let at = [z.clone(), z.clone(), ratio(3, 5), ratio(4, 5), z.clone(), z.clone(), z];
        assert!(e4.eval_rational(&at).is_zero());
    }

    #[test]
    fn first_leg_at_origin_has_zero_length() {
        let e = build_constraints(&Geometry::benchmark());
        let z = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        let at = [z.clone(), z.clone(), one, z.clone(), z.clone(), z.clone(), z];
        assert!(e.equations()[0].eval_rational(&at).is_zero());
    }

    #[test]
    fn exact_pose_satisfies_its_own_leg_lengths() {
        let g = Geometry::benchmark();
        let pose = Pose::new(3.0, -4.0, 0.6, 0.8);
        let [r1, r2, r3] = inverse_kinematics(&g, &pose).unwrap();
        let res = constraint_residuals(&g, &[r1, r2, r3, 3.0, -4.0, 0.6, 0.8]);
        for v in res {
            assert!(v.abs() < 1e-10, "{res:?}");
        }
        assert!((r1 - 5.0).abs() < 1e-14);
    }

    #[test]
    fn published_cusps_nearly_satisfy_the_cusp_system() {
        let cs = build_cusp_system(&Geometry::benchmark());
        for row in &PUBLISHED_CUSPS {
            let pt = published_point(row);
            for (k, p) in cs.equations().iter().enumerate() {
                let rel = p.eval_f64(&pt).abs() / p.magnitude_f64(&pt);
                assert!(rel < 5e-2, "row {row:?} equation {k}: relative residual {rel}");
            }
        }
    }

    #[test]
    fn residuals_match_polynomial_constraints() {
        let g = Geometry::benchmark();
        let e = build_constraints(&g);
        for row in &PUBLISHED_CUSPS {
            let pt = published_point(row);
            let direct = constraint_residuals(&g, &[pt[4], pt[5], pt[6], pt[0], pt[1], pt[2], pt[3]]);
            for k in 0..4 {
                let poly = e.equations()[k].eval_f64(&pt);
                assert!((poly - direct[k]).abs() < 1e-9 * (1.0 + poly.abs()));
            }
        }
    }

    /// `det(dE/dX)` from hand-written partial derivatives, by cofactor
    /// expansion in floats.
    fn jacobian_oracle(g: &Geometry, x: [f64; 4]) -> f64 {
        let gf = g.f64s();
        let [b1x, b1y, tx, ty] = x;
        let u2 = b1x + gf.d1 * tx - gf.a2x;
        let w2 = b1y + gf.d1 * ty;
        let u3 = b1x + gf.d3 * (tx * gf.bx - ty * gf.by) - gf.a3x;
        let w3 = b1y + gf.d3 * (tx * gf.by + ty * gf.bx) - gf.a3y;
        let m = [
            [2.0 * b1x, 2.0 * b1y, 0.0, 0.0],
            [2.0 * u2, 2.0 * w2, 2.0 * gf.d1 * u2, 2.0 * gf.d1 * w2],
            [
                2.0 * u3,
                2.0 * w3,
                2.0 * gf.d3 * (u3 * gf.bx + w3 * gf.by),
                2.0 * gf.d3 * (-u3 * gf.by + w3 * gf.bx),
            ],
            [0.0, 0.0, 2.0 * tx, 2.0 * ty],
        ];
        fn det(m: &[Vec<f64>]) -> f64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|c| {
                    let minor: Vec<Vec<f64>> = m[1..]
                        .iter()
                        .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect())
                        .collect();
                    let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                    sign * m[0][c] * det(&minor)
                })
                .sum()
        }
        det(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn determinant_matches_hand_derived_jacobian() {
        let g = Geometry::benchmark();
        let sing = build_singular_system(&g);
        let j = &sing.equations()[4];
        for (k, x) in [
            [1.0, 2.0, 0.6, 0.8],
            [-7.5, 3.25, -0.28, 0.96],
            [12.0, -9.0, 1.0, 0.0],
            [0.3, 0.1, 0.2, -0.4],
        ]
        .into_iter()
        .enumerate()
        {
            let poly = j.eval_f64(&[x[0], x[1], x[2], x[3], 0.0, 0.0, 0.0]);
            let oracle = jacobian_oracle(&g, x);
            assert!(
                (poly - oracle).abs() <= 1e-9 * oracle.abs().max(1.0),
                "point {k}: {poly} vs {oracle}"
            );
        }
    }

    /// Legs whose lines all pass through one point give a singular pose.
    #[test]
    fn concurrent_legs_are_singular() {
        let (bx, by) = beta_from_degrees(50.0, &ratio(1, 1_000_000_000)).unwrap();
        let (d1, d3) = (ratio(6, 1), ratio(4, 1));
        let (b1x, b1y, tx, ty) = (ratio(3, 1), ratio(4, 1), ratio(1, 1), ratio(0, 1));
        let b2 = (&b1x + &d1 * &tx, &b1y + &d1 * &ty);
        let b3 = (
            &b1x + &d3 * (&tx * &bx - &ty * &by),
            &b1y + &d3 * (&tx * &by + &ty * &bx),
        );
        // common point P on the line A1 B1 (A1 is the origin)
        let lambda = ratio(-1, 1);
        let p = (&lambda * &b1x, &lambda * &b1y);
        // A2 is where line P B2 crosses the x-axis
        let t = -&p.1 / (&b2.1 - &p.1);
        let a2x = &p.0 + &t * (&b2.0 - &p.0);
        // A3 anywhere on line P B3
        let mu = ratio(7, 3);
        let a3 = (&p.0 + &mu * (&b3.0 - &p.0), &p.1 + &mu * (&b3.1 - &p.1));
        let g = Geometry::from_beta(a2x, a3.0, a3.1, d1, d3, bx, by).unwrap();
        let sing = build_singular_system(&g);
        let z = Rational::from_integer(0.into());
        let at = [b1x, b1y, tx, ty, z.clone(), z.clone(), z];
        assert!(sing.equations()[4].eval_rational(&at).is_zero());

        // moving A3 off the line breaks concurrency
        let mut off = g.clone();
        off.a3y += ratio(1, 2);
        let j_off = build_singular_system(&off).equations()[4].eval_rational(&at);
        assert!(!j_off.is_zero());
    }

    #[test]
    fn cusp_system_shape() {
        let cs = build_cusp_system(&Geometry::benchmark());
        assert_eq!(cs.len(), 9);
        let mut degrees = cs.degrees();
        degrees.sort_unstable();
        assert_eq!(degrees, vec![2, 2, 2, 2, 3, 5, 5, 5, 5]);
        let sing = build_singular_system(&Geometry::benchmark());
        assert_eq!(cs.equations()[4], sing.equations()[4]);
        assert_eq!(cs.unknown_names(), CUSP_UNKNOWNS.to_vec());
        assert_eq!(cs.parameter_names(), vec!["r1"]);
    }

    #[test]
    fn mirror_images_differ_in_third_leg() {
        // platform with d1 = d3 = 5 and beta = +-37 degrees, B1 on a leg at
        // 53 degrees of length 5, platform angle 0
        let tol = ratio(1, 1_000_000_000_000);
        let mk = |deg: f64| {
            let (bx, by) = beta_from_degrees(deg, &tol).unwrap();
            Geometry::from_beta(dec("11"), dec("7"), dec("10"), dec("5"), dec("5"), bx, by).unwrap()
        };
        let t1 = 53f64.to_radians();
        let pose = Pose::from_angle(5.0 * t1.cos(), 5.0 * t1.sin(), 0.0);
        let plus = inverse_kinematics(&mk(37.0), &pose).unwrap();
        let minus = inverse_kinematics(&mk(-37.0), &pose).unwrap();
        assert!((plus[0] - 5.0).abs() < 1e-12);
        assert!((plus[1] - 5.0).abs() < 0.05, "{plus:?}");
        assert!((plus[2] - 3.0).abs() < 0.05, "{plus:?}");
        assert!((minus[2] - 9.0).abs() < 0.05, "{minus:?}");
        assert_eq!(plus[1], minus[1]);
    }

    #[test]
    fn inverse_kinematics_rejects_non_unit_orientation() {
        let g = Geometry::benchmark();
        assert!(inverse_kinematics(&g, &Pose::new(0.0, 0.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn joint_lengths_round_trip_floats() {
        let l = JointLengths::from_f64([14.98, 0.845, 3.777]);
        assert_eq!(l.to_f64(), [14.98, 0.845, 3.777]);
        assert!(l.is_nonnegative());
        assert!(!JointLengths::new(dec("-1"), dec("0"), dec("0")).is_nonnegative());
    }
}
