use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GeometryError;
use crate::numeric::rational::{rational_from_f64, ratio, simplest_within};
use crate::numeric::{rational_from_decimal, Rational};

/// Which way the platform triangle turns from `B1 -> B2` to `B1 -> B3`.
/// A triangle and its mirror image differ only in this sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Orientation {
    #[default]
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    pub fn sign(self) -> i32 {
        match self {
            Orientation::CounterClockwise => 1,
            Orientation::Clockwise => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
        }
    }
}

/// Default bound on `|cos(beta) - law_of_cosines|` when `beta` is snapped to
/// a rational point of the unit circle.
pub fn default_beta_tol() -> Rational {
    ratio(1, 1_000_000_000_000)
}

/// Base anchors `A1 = (0, 0)`, `A2 = (a2x, 0)`, `A3 = (a3x, a3y)`; platform
/// sides `d1 = |B1B2|`, `d3 = |B1B3|` and the signed platform angle at `B1`
/// stored exactly as `(cos beta, sin beta)` on the unit circle.
#[derive(Clone, PartialEq)]
pub struct Geometry {
    pub a2x: Rational,
    pub a3x: Rational,
    pub a3y: Rational,
    pub d1: Rational,
    pub d3: Rational,
    pub beta_x: Rational,
    pub beta_y: Rational,
    /// Side `d2` as given, when the geometry was built from three sides.
    pub d2_nominal: Option<Rational>,
}

/// Result of snapping the platform angle to the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaFit {
    pub beta_x: Rational,
    pub beta_y: Rational,
    /// `d1^2 + d3^2 - 2 d1 d3 cos(beta)`: the squared third side implied by
    /// the snapped angle.
    pub d2_squared: Rational,
}

/// Exact `(cos beta, sin beta)` from the platform sides.
///
/// `cos beta` from the law of cosines is approximated within `tol` by
/// `(1 - t^2) / (1 + t^2)` for a rational `t`, which keeps the point exactly
/// on the unit circle; `sin beta = sign * 2t / (1 + t^2)`.
pub fn beta_from_sides(
    d1: &Rational,
    d2: &Rational,
    d3: &Rational,
    orientation: Orientation,
    tol: &Rational,
) -> Result<BetaFit, GeometryError> {
    let describe = || format!("({d1}, {d2}, {d3})");
    if !d1.is_positive() || !d2.is_positive() || !d3.is_positive() {
        return Err(GeometryError::DegenerateTriangle(describe()));
    }
    if d1 + d2 <= *d3 || d2 + d3 <= *d1 || d1 + d3 <= *d2 {
        return Err(GeometryError::DegenerateTriangle(describe()));
    }
    if !tol.is_positive() {
        return Err(GeometryError::Invalid("beta tolerance must be positive".into()));
    }
    let two = ratio(2, 1);
    let cos_beta = (d1 * d1 + d3 * d3 - d2 * d2) / (&two * d1 * d3);
    let one = Rational::one();
    // tan^2(beta / 2)
    let q = (&one - &cos_beta) / (&one + &cos_beta);
    let t_target = rational_sqrt(&q);
    let mut tol_t = tol / ratio(4, 1);
    loop {
        let t = simplest_within(&t_target, &tol_t);
        let (bx, by) = unit_point(&t, orientation);
        if (&bx - &cos_beta).abs() <= *tol {
            let d2_squared = d1 * d1 + d3 * d3 - &two * d1 * d3 * &bx;
            return Ok(BetaFit {
                beta_x: bx,
                beta_y: by,
                d2_squared,
            });
        }
        tol_t /= ratio(16, 1);
    }
}

/// Exact unit-circle point closest (within `tol` on the cosine) to an angle
/// in degrees.
pub fn beta_from_degrees(degrees: f64, tol: &Rational) -> Result<(Rational, Rational), GeometryError> {
    if !degrees.is_finite() || degrees.abs() >= 180.0 || degrees == 0.0 {
        return Err(GeometryError::Invalid(format!(
            "platform angle {degrees} degrees must lie in (-180, 0) or (0, 180)"
        )));
    }
    let half = degrees.to_radians() / 2.0;
    let t_target = rational_from_f64(half.tan().abs());
    let orientation = if degrees > 0.0 {
        Orientation::CounterClockwise
    } else {
        Orientation::Clockwise
    };
    let cos_target = rational_from_f64(degrees.to_radians().cos());
    let mut tol_t = tol / ratio(4, 1);
    for _ in 0..16 {
        let t = simplest_within(&t_target, &tol_t);
        let (bx, by) = unit_point(&t, orientation);
        if (&bx - &cos_target).abs() <= *tol {
            return Ok((bx, by));
        }
        tol_t /= ratio(16, 1);
    }
    let (bx, by) = unit_point(&t_target, orientation);
    Ok((bx, by))
}

fn unit_point(t: &Rational, orientation: Orientation) -> (Rational, Rational) {
    let one = Rational::one();
    let t2 = t * t;
    let den = &one + &t2;
    let bx = (&one - &t2) / &den;
    let mut by = (ratio(2, 1) * t) / &den;
    if orientation == Orientation::Clockwise {
        by = -by;
    }
    (bx, by)
}

/// Square root of a nonnegative rational to roughly 100 significant digits.
fn rational_sqrt(q: &Rational) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    let mut t = rational_from_f64(q.to_f64().unwrap_or(1.0).sqrt());
    let half = ratio(1, 2);
    for _ in 0..3 {
        t = &half * (&t + q / &t);
        // keep denominators bounded
        let scale = Rational::from_integer(num_bigint::BigInt::from(10u32).pow(120));
        t = (&t * &scale).round() / scale;
    }
    t
}

impl Geometry {
    /// Builds a geometry from the three platform sides.
    pub fn from_sides(
        a2x: Rational,
        a3x: Rational,
        a3y: Rational,
        d1: Rational,
        d2: Rational,
        d3: Rational,
        orientation: Orientation,
        tol: &Rational,
    ) -> Result<Self, GeometryError> {
        let fit = beta_from_sides(&d1, &d2, &d3, orientation, tol)?;
        let g = Geometry {
            a2x,
            a3x,
            a3y,
            d1,
            d3,
            beta_x: fit.beta_x,
            beta_y: fit.beta_y,
            d2_nominal: Some(d2),
        };
        g.validate()?;
        Ok(g)
    }

    /// Builds a geometry from an exact unit-circle platform angle.
    pub fn from_beta(
        a2x: Rational,
        a3x: Rational,
        a3y: Rational,
        d1: Rational,
        d3: Rational,
        beta_x: Rational,
        beta_y: Rational,
    ) -> Result<Self, GeometryError> {
        let g = Geometry {
            a2x,
            a3x,
            a3y,
            d1,
            d3,
            beta_x,
            beta_y,
            d2_nominal: None,
        };
        g.validate()?;
        Ok(g)
    }

    /// The manipulator studied throughout the cusp literature:
    /// `A2 = (15.91, 0)`, `A3 = (0, 10)`, sides `(17.04, 16.54, 20.84)`.
    pub fn benchmark() -> Self {
        Self::benchmark_with(Orientation::CounterClockwise)
    }

    pub fn benchmark_with(orientation: Orientation) -> Self {
        let d = |s: &str| rational_from_decimal(s).expect("literal");
        Geometry::from_sides(
            d("15.91"),
            d("0"),
            d("10"),
            d("17.04"),
            d("16.54"),
            d("20.84"),
            orientation,
            &default_beta_tol(),
        )
        .expect("benchmark geometry is valid")
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !self.d1.is_positive() || !self.d3.is_positive() {
            return Err(GeometryError::Invalid("platform sides d1, d3 must be positive".into()));
        }
        if !self.a2x.is_positive() {
            return Err(GeometryError::Invalid("A2x must be positive".into()));
        }
        if &self.beta_x * &self.beta_x + &self.beta_y * &self.beta_y != Rational::one() {
            return Err(GeometryError::Invalid("(betax, betay) must lie exactly on the unit circle".into()));
        }
        if self.beta_y.is_zero() {
            return Err(GeometryError::Invalid("platform triangle is flat (sin beta = 0)".into()));
        }
        Ok(())
    }

    pub fn orientation(&self) -> Orientation {
        if self.beta_y.is_negative() {
            Orientation::Clockwise
        } else {
            Orientation::CounterClockwise
        }
    }

    /// Squared third side implied by `d1`, `d3` and the stored angle.
    pub fn d2_squared(&self) -> Rational {
        &self.d1 * &self.d1 + &self.d3 * &self.d3 - ratio(2, 1) * &self.d1 * &self.d3 * &self.beta_x
    }

    pub fn d2_f64(&self) -> f64 {
        self.d2_squared().to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Mirror image across the x-axis: `A3y -> -A3y`, `beta -> -beta`.
    pub fn mirrored(&self) -> Self {
        Geometry {
            a3y: -self.a3y.clone(),
            beta_y: -self.beta_y.clone(),
            ..self.clone()
        }
    }

    /// Same platform triangle seen with the opposite orientation.
    pub fn flipped_platform(&self) -> Self {
        Geometry {
            beta_y: -self.beta_y.clone(),
            ..self.clone()
        }
    }

    /// All lengths multiplied by `s > 0`.
    pub fn scaled(&self, s: &Rational) -> Self {
        Geometry {
            a2x: &self.a2x * s,
            a3x: &self.a3x * s,
            a3y: &self.a3y * s,
            d1: &self.d1 * s,
            d3: &self.d3 * s,
            beta_x: self.beta_x.clone(),
            beta_y: self.beta_y.clone(),
            d2_nominal: self.d2_nominal.as_ref().map(|d| d * s),
        }
    }

    pub(crate) fn f64s(&self) -> GeometryF64 {
        let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
        GeometryF64 {
            a2x: f(&self.a2x),
            a3x: f(&self.a3x),
            a3y: f(&self.a3y),
            d1: f(&self.d1),
            d3: f(&self.d3),
            bx: f(&self.beta_x),
            by: f(&self.beta_y),
        }
    }

    /// `|A3|`, rounded up.
    pub fn a3_norm_upper(&self) -> f64 {
        let g = self.f64s();
        (g.a3x.hypot(g.a3y) * (1.0 + 4.0 * f64::EPSILON)).next_up()
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct GeometryF64 {
    pub a2x: f64,
    pub a3x: f64,
    pub a3y: f64,
    pub d1: f64,
    pub d3: f64,
    pub bx: f64,
    pub by: f64,
}

impl fmt::Debug for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.f64s();
        f.debug_struct("Geometry")
            .field("a2x", &g.a2x)
            .field("a3x", &g.a3x)
            .field("a3y", &g.a3y)
            .field("d1", &g.d1)
            .field("d3", &g.d3)
            .field("beta_x", &g.bx)
            .field("beta_y", &g.by)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        rational_from_decimal(s).unwrap()
    }

    #[test]
    fn equilateral_platform() {
        let tol = default_beta_tol();
        let fit = beta_from_sides(&r("1"), &r("1"), &r("1"), Orientation::CounterClockwise, &tol).unwrap();
        assert!((&fit.beta_x - ratio(1, 2)).abs() <= tol);
        let by = fit.beta_y.to_f64().unwrap();
        assert!((by - 3f64.sqrt() / 2.0).abs() < 1e-11);
        assert_eq!(&fit.beta_x * &fit.beta_x + &fit.beta_y * &fit.beta_y, Rational::one());
    }

    #[test]
    fn benchmark_platform_matches_law_of_cosines() {
        // cos(beta) = (d1^2 + d3^2 - d2^2) / (2 d1 d3), evaluated exactly in
        // units of 1/100: (170400^2... ) reduces to 4510956 / 7102272.
        let d1 = r("17.04");
        let d2 = r("16.54");
        let d3 = r("20.84");
        let numer = 1704i64 * 1704 + 2084 * 2084 - 1654 * 1654;
        let denom = 2 * 1704i64 * 2084;
        let expected = ratio(numer, denom);
        assert_eq!(expected, ratio(4510956, 7102272));
        let tol = default_beta_tol();
        let fit = beta_from_sides(&d1, &d2, &d3, Orientation::CounterClockwise, &tol).unwrap();
        assert!((&fit.beta_x - &expected).abs() <= tol);
        assert!(fit.beta_y.is_positive());
        let d2sq_err = (&fit.d2_squared - &d2 * &d2).abs();
        assert!(d2sq_err <= ratio(2, 1) * &d1 * &d3 * &tol);
    }

    #[test]
    fn degenerate_triangles_are_rejected() {
        let tol = default_beta_tol();
        for (a, b, c) in [("1", "3", "1"), ("1", "2", "1"), ("0", "1", "1"), ("5", "1", "1")] {
            let err = beta_from_sides(&r(a), &r(b), &r(c), Orientation::CounterClockwise, &tol);
            assert!(matches!(err, Err(GeometryError::DegenerateTriangle(_))), "{a} {b} {c}");
        }
    }

    #[test]
    fn mirror_orientation_flips_sine_only() {
        let g = Geometry::benchmark();
        let m = Geometry::benchmark_with(Orientation::Clockwise);
        assert_eq!(g.beta_x, m.beta_x);
        assert_eq!(g.beta_y, -m.beta_y.clone());
        assert_eq!(m.orientation(), Orientation::Clockwise);
        assert_eq!(g.flipped_platform(), m);
    }

    #[test]
    fn degrees_snap_to_unit_circle() {
        let tol = default_beta_tol();
        let (bx, by) = beta_from_degrees(37.0, &tol).unwrap();
        assert_eq!(&bx * &bx + &by * &by, Rational::one());
        assert!((bx.to_f64().unwrap() - 37f64.to_radians().cos()).abs() < 1e-11);
        let (_, by) = beta_from_degrees(-37.0, &tol).unwrap();
        assert!(by.is_negative());
        assert!(beta_from_degrees(0.0, &tol).is_err());
        assert!(beta_from_degrees(180.0, &tol).is_err());
    }

    #[test]
    fn invalid_geometries() {
        let one = Rational::one();
        let z = Rational::zero();
        assert!(Geometry::from_beta(z.clone(), z.clone(), one.clone(), one.clone(), one.clone(), z.clone(), one.clone()).is_err());
        assert!(Geometry::from_beta(one.clone(), z.clone(), one.clone(), one.clone(), one.clone(), ratio(1, 2), ratio(1, 2)).is_err());
        assert!(Geometry::from_beta(one.clone(), z.clone(), one.clone(), one.clone(), one.clone(), ratio(3, 5), ratio(4, 5)).is_ok());
    }
}
