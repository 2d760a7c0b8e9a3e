use crate::error::SolveError;
use crate::numeric::{Interval, IntervalVector};
use crate::poly::{CompiledPoly, PolySystem};

/// A polynomial system with every parameter fixed, compiled for evaluation
/// over boxes of its unknowns.
#[derive(Clone, Debug)]
pub struct NumericSystem {
    names: Vec<String>,
    f: Vec<CompiledPoly>,
    jac: Vec<Vec<CompiledPoly>>,
    /// Equations cheap enough for term-wise projection.
    small: Vec<bool>,
}

const PROJECTION_MAX_TERMS: usize = 24;

impl NumericSystem {
    pub fn new(sys: &PolySystem) -> Result<Self, SolveError> {
        let unknowns = sys.unknowns();
        let f = sys
            .equations()
            .iter()
            .map(|p| CompiledPoly::new(p, unknowns))
            .collect::<Result<Vec<_>, _>>()?;
        let jac = sys
            .equations()
            .iter()
            .map(|p| {
                unknowns
                    .iter()
                    .map(|&j| CompiledPoly::new(&p.derivative_at(j), unknowns))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let small = sys
            .equations()
            .iter()
            .map(|p| p.num_terms() <= PROJECTION_MAX_TERMS)
            .collect();
        Ok(NumericSystem {
            names: sys.unknown_names().iter().map(|s| s.to_string()).collect(),
            f,
            jac,
            small,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn num_equations(&self) -> usize {
        self.f.len()
    }

    pub fn unknown_names(&self) -> &[String] {
        &self.names
    }

    pub fn equation(&self, i: usize) -> &CompiledPoly {
        &self.f[i]
    }

    pub(crate) fn is_small(&self, i: usize) -> bool {
        self.small[i]
    }

    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.f.iter().map(|p| p.eval(x)).collect()
    }

    pub fn eval_box(&self, b: &IntervalVector) -> Vec<Interval> {
        self.f.iter().map(|p| p.eval_interval(b.as_slice())).collect()
    }

    pub fn eval_point_enclosure(&self, x: &[f64]) -> Vec<Interval> {
        self.f.iter().map(|p| p.eval_point(x)).collect()
    }

    pub fn jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.jac
            .iter()
            .map(|row| row.iter().map(|p| p.eval(x)).collect())
            .collect()
    }

    pub fn jacobian_box(&self, b: &IntervalVector) -> Vec<Vec<Interval>> {
        self.jac
            .iter()
            .map(|row| row.iter().map(|p| p.eval_interval(b.as_slice())).collect())
            .collect()
    }

    /// Largest residual magnitude over a box: `max_i mag(F_i(box))`.
    pub fn residual(&self, b: &IntervalVector) -> f64 {
        self.eval_box(b).iter().map(Interval::mag).fold(0.0, f64::max)
    }
}
