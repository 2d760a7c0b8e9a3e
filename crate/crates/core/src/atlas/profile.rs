use rayon::prelude::*;

use crate::atlas::cusp_slice;
use crate::error::AtlasError;
use crate::model::Geometry;
use crate::numeric::rational::rational_to_f64;
use crate::numeric::{rational_from_decimal, Rational};
use crate::solver::SolverOptions;

/// Sampling and bracketing parameters for [`count_profile`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileOptions {
    /// Distance between samples of `r1`.
    pub step: f64,
    /// Bisection stops once a count change is bracketed this tightly.
    pub bracket_tol: f64,
    pub solver: SolverOptions,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            step: 0.02,
            bracket_tol: 5e-3,
            solver: SolverOptions::default(),
        }
    }
}

/// A value of `r1` where the number of cusps changes.
#[derive(Clone, Debug, PartialEq)]
pub struct Breakpoint {
    /// Midpoint of the bracket.
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// Certified count at `lo`.
    pub count_below: usize,
    /// Certified count at `hi`.
    pub count_above: usize,
}

impl Breakpoint {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Number of cusp configurations as a piecewise constant function of `r1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CountProfile {
    pub range: (f64, f64),
    pub breakpoints: Vec<Breakpoint>,
    /// `counts[k]` holds between `breakpoints[k - 1]` and `breakpoints[k]`.
    pub counts: Vec<usize>,
    /// Samples left out because the solve stayed incomplete after one
    /// perturbed retry.
    pub excluded_samples: Vec<f64>,
    /// Every certified sample `(r1, count)`, including bisection midpoints.
    pub samples: Vec<(f64, usize)>,
}

impl CountProfile {
    /// The open intervals between breakpoints with their counts, as
    /// `(lo, hi, count)`; the first and last reach to the range ends.
    pub fn intervals(&self) -> Vec<(f64, f64, usize)> {
        let mut edges = vec![self.range.0];
        edges.extend(self.breakpoints.iter().map(|b| b.value));
        edges.push(self.range.1);
        edges
            .windows(2)
            .zip(&self.counts)
            .map(|(w, &c)| (w[0], w[1], c))
            .collect()
    }

    /// Share of planned samples that had to be excluded.
    pub fn excluded_fraction(&self, planned: usize) -> f64 {
        if planned == 0 {
            0.0
        } else {
            self.excluded_samples.len() as f64 / planned as f64
        }
    }
}

/// Shortest decimal that reads back as `x`, as an exact rational.
fn decimal(x: f64) -> Rational {
    rational_from_decimal(&format!("{x}")).expect("finite float prints as a decimal")
}

/// The sample points `lo, lo + step, ...` up to `hi`, exactly.
pub fn sample_points(range: (f64, f64), step: f64) -> Vec<Rational> {
    let lo = decimal(range.0);
    let hi = decimal(range.1);
    let step = decimal(step);
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        out.push(x.clone());
        x += &step;
    }
    out
}

struct Counter<'a> {
    g: &'a Geometry,
    opts: &'a SolverOptions,
}

impl Counter<'_> {
    /// Certified cusp count at `r1`, or at `r1 + nudge` if the first solve
    /// is incomplete. Returns the point actually used.
    fn count(&self, r1: &Rational, nudge: &Rational) -> Result<Option<(Rational, usize)>, AtlasError> {
        for x in [r1.clone(), r1 + nudge] {
            let slice = cusp_slice(self.g, &x, self.opts)?;
            if slice.is_complete() {
                return Ok(Some((x, slice.count())));
            }
        }
        Ok(None)
    }

    /// Bisects the count change between `a` and `b`.
    fn refine(
        &self,
        (a, ca): (Rational, usize),
        (b, cb): (Rational, usize),
        tol: &Rational,
        samples: &mut Vec<(f64, usize)>,
    ) -> Result<Vec<Breakpoint>, AtlasError> {
        let width = &b - &a;
        if &width <= tol {
            return Ok(vec![bracket(&a, ca, &b, cb)]);
        }
        let two = Rational::from_integer(2.into());
        let mid = (&a + &b) / &two;
        let nudge = &width / Rational::from_integer(17.into());
        let Some((m, cm)) = self.count(&mid, &nudge)? else {
            return Ok(vec![bracket(&a, ca, &b, cb)]);
        };
        samples.push((rational_to_f64(&m), cm));
        if m >= b {
            return Ok(vec![bracket(&a, ca, &b, cb)]);
        }
        if cm == ca {
            self.refine((m, cm), (b, cb), tol, samples)
        } else if cm == cb {
            self.refine((a, ca), (m, cm), tol, samples)
        } else {
            let mut left = self.refine((a, ca), (m.clone(), cm), tol, samples)?;
            left.extend(self.refine((m, cm), (b, cb), tol, samples)?);
            Ok(left)
        }
    }
}

fn bracket(a: &Rational, ca: usize, b: &Rational, cb: usize) -> Breakpoint {
    let lo = rational_to_f64(a);
    let hi = rational_to_f64(b);
    Breakpoint {
        value: rational_to_f64(&((a + b) / Rational::from_integer(2.into()))),
        lo,
        hi,
        count_below: ca,
        count_above: cb,
    }
}

/// Samples the cusp count over `range` and brackets every change between
/// neighbouring samples by bisection. Count changes closer together than
/// `step` with equal counts on both sides go unnoticed.
pub fn count_profile(g: &Geometry, range: (f64, f64), opts: &ProfileOptions) -> Result<CountProfile, AtlasError> {
    if !(range.0.is_finite() && range.1.is_finite() && range.0 < range.1) {
        return Err(AtlasError::InvalidSampling(format!("empty range [{}, {}]", range.0, range.1)));
    }
    if range.0 < 0.0 {
        return Err(AtlasError::InvalidSampling("range starts below zero".into()));
    }
    if !(opts.step > 0.0 && opts.step.is_finite()) {
        return Err(AtlasError::InvalidSampling(format!("step must be positive, got {}", opts.step)));
    }
    if !(opts.bracket_tol > 0.0 && opts.bracket_tol.is_finite()) {
        return Err(AtlasError::InvalidSampling(format!(
            "bracket tolerance must be positive, got {}",
            opts.bracket_tol
        )));
    }
    let counter = Counter { g, opts: &opts.solver };
    let points = sample_points(range, opts.step);
    let nudge = decimal(opts.step) / Rational::from_integer(17.into());
    let run = |x: &Rational| counter.count(x, &nudge);
    let counted: Vec<Option<(Rational, usize)>> = if opts.solver.parallel {
        points.par_iter().map(run).collect::<Result<_, _>>()?
    } else {
        points.iter().map(run).collect::<Result<_, _>>()?
    };

    let excluded_samples: Vec<f64> = points
        .iter()
        .zip(&counted)
        .filter(|(_, c)| c.is_none())
        .map(|(x, _)| rational_to_f64(x))
        .collect();
    let good: Vec<(Rational, usize)> = counted.into_iter().flatten().collect();
    let mut samples: Vec<(f64, usize)> = good.iter().map(|(x, c)| (rational_to_f64(x), *c)).collect();

    let tol = decimal(opts.bracket_tol);
    let changes: Vec<usize> = (1..good.len()).filter(|&k| good[k - 1].1 != good[k].1).collect();
    let refine = |&k: &usize| {
        let mut extra = Vec::new();
        counter
            .refine(good[k - 1].clone(), good[k].clone(), &tol, &mut extra)
            .map(|b| (b, extra))
    };
    let refined: Vec<(Vec<Breakpoint>, Vec<(f64, usize)>)> = if opts.solver.parallel {
        changes.par_iter().map(refine).collect::<Result<_, _>>()?
    } else {
        changes.iter().map(refine).collect::<Result<_, _>>()?
    };

    let mut breakpoints = Vec::new();
    for (b, extra) in refined {
        breakpoints.extend(b);
        samples.extend(extra);
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut counts = Vec::with_capacity(breakpoints.len() + 1);
    if let Some((_, c)) = good.first() {
        counts.push(*c);
    }
    counts.extend(breakpoints.iter().map(|b| b.count_above));
    Ok(CountProfile {
        range,
        breakpoints,
        counts,
        excluded_samples,
        samples,
    })
}
