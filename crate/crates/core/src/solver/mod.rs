//! Certified real-root isolation by branch and prune.
//!
//! A box is repeatedly contracted (range test, term-wise projection,
//! mean-value contraction, Krawczyk) and bisected. It ends up
//!
//! * discarded, when some enclosure proves it holds no root;
//! * certified, when the Krawczyk operator maps it strictly into itself,
//!   which proves exactly one root of the (square sub)system inside;
//! * unresolved, when the depth or width budget runs out first. Multiple
//!   roots (singular configurations, cusps) always end here.
//!
//! For systems with more equations than unknowns, each box certifies a
//! square subsystem picked by pivoting on the midpoint Jacobian. The
//! remaining equations take part in pruning, and a certified root is kept
//! only if every equation's enclosure over its final box contains zero.

mod contract;
mod krawczyk;
mod numeric_system;

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::SolveError;
use crate::numeric::rational::rational_from_f64;
use crate::numeric::{Interval, IntervalVector};
use crate::poly::PolySystem;

pub use krawczyk::{select_rows, KrawczykOutcome};
pub use numeric_system::NumericSystem;

/// Bisection point as a fraction of the split component; kept off 1/2 so
/// that roots at "round" coordinates do not land on a cut.
const SPLIT_FRACTION: f64 = 0.487_654_321;

/// Normalized width below which an inflated Krawczyk test is also tried.
const INFLATE_BELOW: f64 = 1e-4;

/// Certified boxes wider than this (relative to the coordinates) are
/// re-certified around a Newton-polished point.
const POLISHED_WIDTH: f64 = 1e-10;

/// Boxes handed to parallel workers once the frontier reaches this size.
const PARALLEL_FRONTIER: usize = 48;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Boxes narrower than this, relative to the initial search box in every
    /// component, are reported unresolved.
    pub min_width: f64,
    /// Maximum number of bisections along any branch.
    pub max_depth: usize,
    /// Hard cap on processed boxes; hitting it leaves the remaining boxes
    /// unresolved.
    pub max_boxes: usize,
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            min_width: 1e-9,
            max_depth: 64,
            max_boxes: 20_000_000,
            parallel: true,
        }
    }
}

/// The bounded region searched, one interval per unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchBox {
    names: Vec<String>,
    bounds: IntervalVector,
}

impl SearchBox {
    pub fn new(names: Vec<String>, bounds: IntervalVector) -> Self {
        assert_eq!(names.len(), bounds.len(), "one bound per unknown");
        assert!(
            bounds.iter().all(|i| i.lo().is_finite() && i.hi().is_finite()),
            "search box must be bounded"
        );
        SearchBox { names, bounds }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn bounds(&self) -> &IntervalVector {
        &self.bounds
    }

    pub fn get(&self, name: &str) -> Option<Interval> {
        self.names.iter().position(|n| n == name).map(|i| self.bounds[i])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifiedRoot {
    /// Box proven to contain exactly one root of the certified subsystem.
    pub bounds: IntervalVector,
    pub midpoint: Vec<f64>,
    /// Box in which the certified subsystem has no other root.
    pub uniqueness_box: IntervalVector,
    /// Equations making up the certified square subsystem.
    pub certified_rows: Vec<usize>,
    /// Enclosure of every equation over `bounds`.
    pub residuals: Vec<Interval>,
}

impl CertifiedRoot {
    /// `max_i mag(F_i(bounds))`.
    pub fn residual(&self) -> f64 {
        self.residuals.iter().map(Interval::mag).fold(0.0, f64::max)
    }

    pub fn width(&self) -> f64 {
        self.bounds.width()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub boxes_processed: usize,
    pub max_depth: usize,
    /// Subsystem roots dropped because another equation excluded zero.
    pub rejected: usize,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub roots: Vec<CertifiedRoot>,
    pub unresolved: Vec<IntervalVector>,
    pub stats: SolveStats,
}

impl SolveReport {
    /// The root list is complete over the search box.
    pub fn is_complete(&self) -> bool {
        self.unresolved.is_empty()
    }

    /// Equality of everything except timing.
    pub fn same_outcome(&self, other: &SolveReport) -> bool {
        self.roots == other.roots
            && self.unresolved == other.unresolved
            && self.stats.boxes_processed == other.stats.boxes_processed
            && self.stats.rejected == other.stats.rejected
            && self.stats.max_depth == other.stats.max_depth
    }
}

/// Contracts `b` with the range test, term projection and mean-value
/// contraction. `None` means `b` holds no root.
pub fn prune(sys: &PolySystem, b: &IntervalVector) -> Result<Option<IntervalVector>, SolveError> {
    prune_compiled(&NumericSystem::new(sys)?, b)
}

/// [`prune`] for a system compiled once and pruned many times.
pub fn prune_compiled(ns: &NumericSystem, b: &IntervalVector) -> Result<Option<IntervalVector>, SolveError> {
    check_dim(ns, b)?;
    Ok(prune_numeric(ns, b.clone()))
}

fn prune_numeric(ns: &NumericSystem, mut b: IntervalVector) -> Option<IntervalVector> {
    if !contract::range_check(ns, &b) {
        return None;
    }
    contract::project_terms(ns, &mut b)?;
    let mid = b.mid();
    let f_mid = ns.eval_point_enclosure(&mid);
    let jac = ns.jacobian_box(&b);
    contract::linear_contract(ns, &mut b, &mid, &f_mid, &jac)?;
    Some(b)
}

/// Krawczyk existence/uniqueness test on a square system.
pub fn krawczyk_test(sys: &PolySystem, b: &IntervalVector) -> Result<KrawczykOutcome, SolveError> {
    let ns = NumericSystem::new(sys)?;
    check_dim(&ns, b)?;
    if ns.num_equations() != ns.dim() {
        return Err(SolveError::NotSquare {
            equations: ns.num_equations(),
            unknowns: ns.dim(),
        });
    }
    let rows: Vec<usize> = (0..ns.dim()).collect();
    Ok(krawczyk::krawczyk_step(&ns, &rows, b))
}

/// All roots of a square system in `search`.
pub fn isolate_roots(sys: &PolySystem, search: &SearchBox, opts: &SolverOptions) -> Result<SolveReport, SolveError> {
    if sys.len() != sys.unknowns().len() {
        return Err(SolveError::NotSquare {
            equations: sys.len(),
            unknowns: sys.unknowns().len(),
        });
    }
    solve_system(sys, search, opts)
}

/// All roots of a consistent overdetermined system in `search`.
pub fn solve_overdetermined(
    sys: &PolySystem,
    search: &SearchBox,
    opts: &SolverOptions,
) -> Result<SolveReport, SolveError> {
    if sys.len() < sys.unknowns().len() {
        return Err(SolveError::Underdetermined {
            equations: sys.len(),
            unknowns: sys.unknowns().len(),
        });
    }
    solve_system(sys, search, opts)
}

/// Point components of the search box are substituted exactly and the
/// remaining system is solved on the other components.
fn solve_system(sys: &PolySystem, search: &SearchBox, opts: &SolverOptions) -> Result<SolveReport, SolveError> {
    let full = NumericSystem::new(sys)?;
    check_dim(&full, search.bounds())?;
    let fixed: Vec<usize> = (0..full.dim()).filter(|&k| search.bounds()[k].is_point()).collect();
    if fixed.is_empty() {
        return solve_numeric(&full, search, opts);
    }
    let start_time = Instant::now();
    let names = sys.unknown_names();
    let mut reduced = sys.clone();
    for &k in &fixed {
        reduced = reduced
            .fix_unknown(names[k], &rational_from_f64(search.bounds()[k].lo()))
            .expect("declared unknown");
    }
    let kept: Vec<usize> = (0..reduced.len()).filter(|&i| !reduced.equations()[i].is_zero()).collect();
    let free: Vec<usize> = (0..full.dim()).filter(|k| !fixed.contains(k)).collect();
    let empty_report = |boxes| SolveReport {
        roots: Vec::new(),
        unresolved: Vec::new(),
        stats: SolveStats {
            boxes_processed: boxes,
            wall_time: start_time.elapsed(),
            ..SolveStats::default()
        },
    };
    if kept.iter().any(|&i| reduced.equations()[i].total_degree() == 0) {
        return Ok(empty_report(1));
    }
    if free.is_empty() {
        // every equation vanishes identically at the point
        let point = search.bounds().clone();
        let mut report = empty_report(1);
        report.roots.push(CertifiedRoot {
            midpoint: point.mid(),
            residuals: full.eval_box(&point),
            uniqueness_box: point.clone(),
            bounds: point,
            certified_rows: Vec::new(),
        });
        return Ok(report);
    }
    if kept.len() < free.len() {
        return Err(SolveError::Underdetermined {
            equations: kept.len(),
            unknowns: free.len(),
        });
    }
    let free_names: Vec<&str> = free.iter().map(|&k| names[k]).collect();
    let param_names = reduced.parameter_names();
    let sub_sys = PolySystem::new(
        reduced.vars(),
        kept.iter().map(|&i| reduced.equations()[i].clone()).collect(),
        &free_names,
        &param_names,
    )
    .expect("variables already declared");
    let sub_search = SearchBox::new(
        free_names.iter().map(|s| s.to_string()).collect(),
        IntervalVector::new(free.iter().map(|&k| search.bounds()[k]).collect()),
    );
    let sub = solve_numeric(&NumericSystem::new(&sub_sys)?, &sub_search, opts)?;
    let embed = |b: &IntervalVector| {
        let mut out = search.bounds().clone();
        for (j, &k) in free.iter().enumerate() {
            out[k] = b[j];
        }
        out
    };
    let roots = sub
        .roots
        .iter()
        .map(|r| {
            let bounds = embed(&r.bounds);
            CertifiedRoot {
                midpoint: bounds.mid(),
                residuals: full.eval_box(&bounds),
                uniqueness_box: embed(&r.uniqueness_box),
                certified_rows: r.certified_rows.iter().map(|&i| kept[i]).collect(),
                bounds,
            }
        })
        .collect();
    Ok(SolveReport {
        roots,
        unresolved: sub.unresolved.iter().map(embed).collect(),
        stats: SolveStats {
            wall_time: start_time.elapsed(),
            ..sub.stats
        },
    })
}

fn check_dim(ns: &NumericSystem, b: &IntervalVector) -> Result<(), SolveError> {
    if b.len() != ns.dim() {
        return Err(SolveError::DimensionMismatch {
            expected: ns.dim(),
            got: b.len(),
        });
    }
    Ok(())
}

enum Outcome {
    Empty,
    Certified(CertifiedRoot),
    Rejected,
    Unresolved(IntervalVector),
    Split(IntervalVector, IntervalVector),
}

struct Search<'a> {
    ns: &'a NumericSystem,
    init_width: Vec<f64>,
    opts: &'a SolverOptions,
}

#[derive(Default)]
struct Partial {
    roots: Vec<CertifiedRoot>,
    unresolved: Vec<IntervalVector>,
    boxes: usize,
    max_depth: usize,
    rejected: usize,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.roots.extend(other.roots);
        self.unresolved.extend(other.unresolved);
        self.boxes += other.boxes;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.rejected += other.rejected;
        self
    }

    fn record(&mut self, outcome: Outcome, depth: usize) -> Option<(IntervalVector, IntervalVector)> {
        self.boxes += 1;
        self.max_depth = self.max_depth.max(depth);
        match outcome {
            Outcome::Empty => None,
            Outcome::Certified(r) => {
                self.roots.push(r);
                None
            }
            Outcome::Rejected => {
                self.rejected += 1;
                None
            }
            Outcome::Unresolved(b) => {
                self.unresolved.push(b);
                None
            }
            Outcome::Split(a, b) => Some((a, b)),
        }
    }
}

impl Search<'_> {
    fn normalized_widths(&self, b: &IntervalVector) -> Vec<f64> {
        b.iter()
            .zip(&self.init_width)
            .map(|(c, &w0)| if w0 > 0.0 { c.width() / w0 } else { 0.0 })
            .collect()
    }

    fn rows_for(&self, b: &IntervalVector) -> Vec<usize> {
        if self.ns.num_equations() == self.ns.dim() {
            (0..self.ns.dim()).collect()
        } else {
            select_rows(&self.ns.jacobian(&b.mid()))
        }
    }

    fn process(&self, leaf: IntervalVector, depth: usize, over_budget: bool) -> Outcome {
        let ns = self.ns;
        let mut b = leaf.clone();
        for _ in 0..8 {
            let before = self.normalized_widths(&b);
            b = match prune_numeric(ns, b) {
                Some(b) => b,
                None => return Outcome::Empty,
            };
            let rows = self.rows_for(&b);
            match krawczyk::krawczyk_step(ns, &rows, &b) {
                KrawczykOutcome::Empty => return Outcome::Empty,
                KrawczykOutcome::Unique(k) => return self.certify(k, b, rows, &leaf),
                KrawczykOutcome::Inconclusive(k) => b = k,
            }
            let after = self.normalized_widths(&b);
            let progressed = before
                .iter()
                .zip(&after)
                .any(|(&w0, &w1)| w0 > 0.0 && w1 < 0.7 * w0);
            if !progressed {
                break;
            }
        }
        let widths = self.normalized_widths(&b);
        let (axis, widest) = widths
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &w)| if w > acc.1 { (i, w) } else { acc });
        if widest < INFLATE_BELOW {
            // contraction can leave components thinner than the attainable
            // enclosure of F(m); retry on a slightly fattened box
            let fat = self.inflated(&b);
            let rows = self.rows_for(&fat);
            if let KrawczykOutcome::Unique(k) = krawczyk::krawczyk_step(ns, &rows, &fat) {
                return self.certify(k, fat, rows, &leaf);
            }
        }
        if over_budget || depth >= self.opts.max_depth || widest < self.opts.min_width {
            return Outcome::Unresolved(b);
        }
        let (l, r) = b.split(axis, SPLIT_FRACTION);
        Outcome::Split(l, r)
    }

    fn inflated(&self, b: &IntervalVector) -> IntervalVector {
        IntervalVector::new(
            b.iter()
                .zip(&self.init_width)
                .map(|(c, &w0)| c.inflate(0.25 * c.width() + 1e-11 * w0 + 1e-13 * c.mag()))
                .collect(),
        )
    }

    /// Tightens `b`, known to hold the only root of the `rows` subsystem in
    /// `region`, then checks every equation against it. Roots outside `leaf`
    /// are left to the box that owns them.
    fn certify(&self, mut b: IntervalVector, region: IntervalVector, rows: Vec<usize>, leaf: &IntervalVector) -> Outcome {
        for _ in 0..40 {
            let w = b.width();
            match krawczyk::krawczyk_step(self.ns, &rows, &b) {
                KrawczykOutcome::Unique(k) | KrawczykOutcome::Inconclusive(k) => b = k,
                // cannot happen for a box holding a root; keep the last box
                KrawczykOutcome::Empty => break,
            }
            if !(b.width() < 0.5 * w) {
                break;
            }
        }
        if b.width() > POLISHED_WIDTH * (1.0 + b.iter().map(Interval::mag).fold(0.0, f64::max)) {
            if let Some(tight) = self.polish(&b, &rows) {
                b = tight;
            }
        }
        if !b.overlaps(leaf) {
            return Outcome::Empty;
        }
        let residuals = self.ns.eval_box(&b);
        if residuals.iter().any(|r| !r.contains_zero()) {
            return Outcome::Rejected;
        }
        Outcome::Certified(CertifiedRoot {
            midpoint: b.mid(),
            bounds: b,
            uniqueness_box: region,
            certified_rows: rows,
            residuals,
        })
    }

    /// Newton-polishes the midpoint of `b` in floats and tries to certify a
    /// small box around the result. Any box inside `b` that passes the test
    /// holds the root already known to be unique in `b`.
    fn polish(&self, b: &IntervalVector, rows: &[usize]) -> Option<IntervalVector> {
        let mut x = b.mid();
        for _ in 0..12 {
            let jac = self.ns.jacobian(&x);
            let y = krawczyk::preconditioner(rows.iter().map(|&r| jac[r].as_slice()))?;
            let f: Vec<f64> = rows.iter().map(|&r| self.ns.equation(r).eval(&x)).collect();
            let dx: Vec<f64> = y.iter().map(|row| row.iter().zip(&f).map(|(a, v)| a * v).sum()).collect();
            for (xi, d) in x.iter_mut().zip(&dx) {
                *xi -= d;
            }
        }
        let mut radius = 1e-13;
        while radius <= 1e-6 {
            let small = IntervalVector::new(
                x.iter()
                    .map(|&v| Interval::point(v).inflate(radius * (1.0 + v.abs())))
                    .collect(),
            );
            if small.is_subset_of(b) {
                if let KrawczykOutcome::Unique(k) = krawczyk::krawczyk_step(self.ns, rows, &small) {
                    return Some(k);
                }
            }
            radius *= 100.0;
        }
        None
    }

    fn run_dfs(&self, start: IntervalVector, depth: usize, budget: usize) -> Partial {
        let mut part = Partial::default();
        let mut stack = vec![(start, depth)];
        while let Some((b, d)) = stack.pop() {
            let outcome = self.process(b, d, part.boxes >= budget);
            if let Some((l, r)) = part.record(outcome, d) {
                stack.push((r, d + 1));
                stack.push((l, d + 1));
            }
        }
        part
    }
}

fn cmp_boxes(a: &IntervalVector, b: &IntervalVector) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.lo().total_cmp(&y.lo()).then(x.hi().total_cmp(&y.hi())) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Two certified boxes describe the same root when one lies inside the
/// other's uniqueness box for the same subsystem. Overlapping boxes from
/// different subsystems are merged as well. A root on a shared face can be
/// certified from both sides.
fn dedup_roots(roots: Vec<CertifiedRoot>) -> Vec<CertifiedRoot> {
    let mut kept: Vec<CertifiedRoot> = Vec::with_capacity(roots.len());
    for r in roots {
        let duplicate = kept.iter().any(|k| {
            if k.certified_rows == r.certified_rows {
                r.bounds.is_subset_of(&k.uniqueness_box) || k.bounds.is_subset_of(&r.uniqueness_box)
            } else {
                r.bounds.overlaps(&k.bounds)
            }
        });
        if !duplicate {
            kept.push(r);
        }
    }
    kept
}

/// Branch and prune over an already compiled system.
pub fn solve_numeric(ns: &NumericSystem, search: &SearchBox, opts: &SolverOptions) -> Result<SolveReport, SolveError> {
    let start_time = Instant::now();
    check_dim(ns, search.bounds())?;
    let search_ctx = Search {
        ns,
        init_width: search.bounds().iter().map(Interval::width).collect(),
        opts,
    };

    // breadth-first until the frontier is wide enough to share out
    let mut total = Partial::default();
    let mut frontier = vec![(search.bounds().clone(), 0usize)];
    while !frontier.is_empty() && frontier.len() < PARALLEL_FRONTIER {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for (b, d) in frontier {
            let outcome = search_ctx.process(b, d, false);
            if let Some((l, r)) = total.record(outcome, d) {
                next.push((l, d + 1));
                next.push((r, d + 1));
            }
        }
        frontier = next;
    }

    let budget = opts.max_boxes / frontier.len().max(1);
    let parts: Vec<Partial> = if opts.parallel {
        frontier
            .into_par_iter()
            .map(|(b, d)| search_ctx.run_dfs(b, d, budget))
            .collect()
    } else {
        frontier
            .into_iter()
            .map(|(b, d)| search_ctx.run_dfs(b, d, budget))
            .collect()
    };
    let mut total = parts.into_iter().fold(total, Partial::merge);
    total.roots.sort_by(|a, b| cmp_boxes(&a.bounds, &b.bounds));
    total.roots = dedup_roots(total.roots);
    total.unresolved.sort_by(cmp_boxes);
    Ok(SolveReport {
        roots: total.roots,
        unresolved: total.unresolved,
        stats: SolveStats {
            boxes_processed: total.boxes,
            max_depth: total.max_depth,
            rejected: total.rejected,
            wall_time: start_time.elapsed(),
        },
    })
}
