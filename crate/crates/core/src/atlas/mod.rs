//! Joint-space analysis built on the solver: direct kinematics, cusp
//! configurations of a slice `r1 = const`, singular curves of a slice, and
//! the cusp count as a function of `r1`.

mod profile;
mod slice;

use num_traits::Signed;

use crate::error::AtlasError;
use crate::model::{
    build_constraints, build_cusp_system, build_singular_system, Configuration, Geometry, JointLengths, Pose,
    CUSP_UNKNOWNS, POSE_VARS,
};
use crate::numeric::rational::{enclose_rational, rational_to_f64};
use crate::numeric::{Interval, IntervalVector, Rational};
use crate::poly::{CompiledPoly, PolySystem};
use crate::solver::{isolate_roots, solve_overdetermined, CertifiedRoot, SearchBox, SolveReport, SolverOptions};

pub use profile::{count_profile, sample_points, Breakpoint, CountProfile, ProfileOptions};
pub use slice::{singular_slice, SingularSlice, SliceGrid};

/// Relative outward margin on the `B1` and orientation bounds, so that roots
/// lying exactly on those bounds can still be certified.
const BOUNDARY_MARGIN: f64 = 1e-9;

fn upper(value: &Rational) -> f64 {
    enclose_rational(value).1
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn pose_bounds(r1: &Rational) -> [Interval; 4] {
    let r = upper(&r1.abs());
    let b = Interval::new(-r, r).inflate(BOUNDARY_MARGIN * r);
    let t = Interval::new(-1.0, 1.0).inflate(BOUNDARY_MARGIN);
    [b, b, t, t]
}

/// The box searched for cusp configurations at a fixed `r1`:
/// `B1 in [-r1, r1]^2`, orientation in `[-1, 1]^2`,
/// `r2 in [0, r1 + d1 + A2x]`, `r3 in [0, r1 + d3 + |A3|]`.
pub fn search_box_for(g: &Geometry, r1: &Rational) -> SearchBox {
    let [b1x, b1y, tx, ty] = pose_bounds(r1);
    let r2_max = upper(&(r1 + &g.d1 + &g.a2x));
    let r3_max = (Interval::from_rational(&(r1 + &g.d3)) + Interval::point(g.a3_norm_upper())).hi();
    SearchBox::new(
        names(&CUSP_UNKNOWNS),
        IntervalVector::new(vec![
            b1x,
            b1y,
            tx,
            ty,
            Interval::new(0.0, r2_max),
            Interval::new(0.0, r3_max),
        ]),
    )
}

/// The box searched for assembly modes: `B1 in [-r1, r1]^2`, orientation in
/// `[-1, 1]^2`.
pub fn dk_search_box(lengths: &JointLengths) -> SearchBox {
    SearchBox::new(names(&POSE_VARS), IntervalVector::new(pose_bounds(&lengths.r1).to_vec()))
}

/// `E1..E4` with the leg lengths fixed.
pub fn dk_system(g: &Geometry, lengths: &JointLengths) -> PolySystem {
    build_constraints(g)
        .substitute("r1", &lengths.r1)
        .and_then(|s| s.substitute("r2", &lengths.r2))
        .and_then(|s| s.substitute("r3", &lengths.r3))
        .expect("model parameters")
}

/// Certified assembly modes for one joint vector.
#[derive(Clone, Debug, PartialEq)]
pub struct DkResult {
    pub poses: Vec<Pose>,
    pub report: SolveReport,
}

impl DkResult {
    /// No box was left undecided, so `poses` is every assembly mode.
    pub fn is_complete(&self) -> bool {
        self.report.is_complete()
    }
}

fn pose_of(root: &CertifiedRoot) -> Pose {
    let m = &root.midpoint;
    Pose::new(m[0], m[1], m[2], m[3])
}

/// All assembly modes of the manipulator for the leg lengths `lengths`.
/// Singular joint vectors leave unresolved boxes around the double poses.
pub fn direct_kinematics(g: &Geometry, lengths: &JointLengths, opts: &SolverOptions) -> Result<DkResult, AtlasError> {
    if !lengths.is_nonnegative() {
        return Err(AtlasError::NegativeLength(format!(
            "({}, {}, {})",
            lengths.r1, lengths.r2, lengths.r3
        )));
    }
    let report = isolate_roots(&dk_system(g, lengths), &dk_search_box(lengths), opts)?;
    Ok(DkResult {
        poses: report.roots.iter().map(pose_of).collect(),
        report,
    })
}

/// `det(dE/dX)` compiled over the pose unknowns.
pub struct SingularityDeterminant(CompiledPoly);

impl SingularityDeterminant {
    pub fn new(g: &Geometry) -> Self {
        let sing = build_singular_system(g);
        let j = &sing.equations()[4];
        let unknowns: Vec<usize> = sing.unknowns().to_vec();
        SingularityDeterminant(CompiledPoly::new(j, &unknowns).expect("J depends on the pose only"))
    }

    pub fn eval(&self, p: &Pose) -> f64 {
        self.0.eval(&p.as_array())
    }
}

/// One certified cusp configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct CuspPoint {
    pub config: Configuration,
    /// Largest side of the certified box.
    pub box_width: f64,
    pub root: CertifiedRoot,
}

/// The cusp configurations of a slice `r1 = const`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceResult {
    pub r1: Rational,
    pub cusps: Vec<CuspPoint>,
    /// Boxes the solver could not decide; nonempty near count changes.
    pub unresolved: Vec<IntervalVector>,
    pub report_stats: crate::solver::SolveStats,
}

impl SliceResult {
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    pub fn count(&self) -> usize {
        self.cusps.len()
    }
}

/// The cusp system with `r1` fixed.
pub fn cusp_system_at(g: &Geometry, r1: &Rational) -> PolySystem {
    build_cusp_system(g).substitute("r1", r1).expect("r1 is a parameter")
}

/// All cusp configurations with the given `r1`.
pub fn cusp_slice(g: &Geometry, r1: &Rational, opts: &SolverOptions) -> Result<SliceResult, AtlasError> {
    if r1.is_negative() {
        return Err(AtlasError::NegativeLength(r1.to_string()));
    }
    let report = solve_overdetermined(&cusp_system_at(g, r1), &search_box_for(g, r1), opts)?;
    let r1f = rational_to_f64(r1);
    let cusps = report
        .roots
        .iter()
        .map(|root| {
            let m = &root.midpoint;
            CuspPoint {
                config: Configuration {
                    lengths: [r1f, m[4], m[5]],
                    pose: Pose::new(m[0], m[1], m[2], m[3]),
                },
                box_width: root.width(),
                root: root.clone(),
            }
        })
        .collect();
    Ok(SliceResult {
        r1: r1.clone(),
        cusps,
        unresolved: report.unresolved,
        report_stats: report.stats,
    })
}
