use std::fmt::Write as _;

use crate::error::PolyError;
use crate::numeric::Rational;
use crate::poly::{index_of, Poly, PolyMatrix, Vars};

/// Ordered equations `p_i = 0` with an explicit split of the variables into
/// unknowns and parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    vars: Vars,
    equations: Vec<Poly>,
    unknowns: Vec<usize>,
    parameters: Vec<usize>,
}

impl PolySystem {
    /// Every variable occurring in an equation must be declared as unknown or
    /// parameter.
    pub fn new(
        vars: &Vars,
        equations: Vec<Poly>,
        unknowns: &[&str],
        parameters: &[&str],
    ) -> Result<Self, PolyError> {
        let unknowns = unknowns
            .iter()
            .map(|n| index_of(vars, n))
            .collect::<Result<Vec<_>, _>>()?;
        let parameters = parameters
            .iter()
            .map(|n| index_of(vars, n))
            .collect::<Result<Vec<_>, _>>()?;
        for p in &equations {
            for v in p.support() {
                if !unknowns.contains(&v) && !parameters.contains(&v) {
                    return Err(PolyError::UnknownVariable(vars[v].clone()));
                }
            }
        }
        Ok(PolySystem {
            vars: vars.clone(),
            equations,
            unknowns,
            parameters,
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Variable indices of the unknowns, in declaration order.
    pub fn unknowns(&self) -> &[usize] {
        &self.unknowns
    }

    pub fn parameters(&self) -> &[usize] {
        &self.parameters
    }

    pub fn unknown_names(&self) -> Vec<&str> {
        self.unknowns.iter().map(|&i| self.vars[i].as_str()).collect()
    }

    pub fn parameter_names(&self) -> Vec<&str> {
        self.parameters.iter().map(|&i| self.vars[i].as_str()).collect()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.equations.iter().map(Poly::total_degree).collect()
    }

    /// Fixes a parameter to an exact value and drops it from the parameter
    /// list.
    pub fn substitute(&self, name: &str, value: &Rational) -> Result<PolySystem, PolyError> {
        let idx = index_of(&self.vars, name)?;
        if !self.parameters.contains(&idx) {
            return Err(PolyError::UnknownVariable(name.to_string()));
        }
        Ok(PolySystem {
            vars: self.vars.clone(),
            equations: self
                .equations
                .iter()
                .map(|p| p.substitute_at(idx, value))
                .collect(),
            unknowns: self.unknowns.clone(),
            parameters: self.parameters.iter().copied().filter(|&p| p != idx).collect(),
        })
    }

    /// Fixes an unknown to an exact value and drops it from the unknown
    /// list.
    pub fn fix_unknown(&self, name: &str, value: &Rational) -> Result<PolySystem, PolyError> {
        let idx = index_of(&self.vars, name)?;
        if !self.unknowns.contains(&idx) {
            return Err(PolyError::UnknownVariable(name.to_string()));
        }
        Ok(PolySystem {
            vars: self.vars.clone(),
            equations: self
                .equations
                .iter()
                .map(|p| p.substitute_at(idx, value))
                .collect(),
            unknowns: self.unknowns.iter().copied().filter(|&u| u != idx).collect(),
            parameters: self.parameters.clone(),
        })
    }

    /// Entry `(i, j)` is the derivative of equation `i` by `vars[j]`.
    pub fn jacobian(&self, wrt: &[&str]) -> Result<PolyMatrix, PolyError> {
        let idx = wrt
            .iter()
            .map(|n| index_of(&self.vars, n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.jacobian_at(&idx))
    }

    pub fn jacobian_at(&self, wrt: &[usize]) -> PolyMatrix {
        let rows = self
            .equations
            .iter()
            .map(|p| wrt.iter().map(|&j| p.derivative_at(j)).collect())
            .collect();
        PolyMatrix::new(&self.vars, rows)
    }

    /// Jacobian with respect to the declared unknowns.
    pub fn unknown_jacobian(&self) -> PolyMatrix {
        self.jacobian_at(&self.unknowns)
    }

    /// Human- and diff-friendly dump: a header with the variable split and
    /// degree list, then each equation's terms.
    pub fn dump(&self, title: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# system: {title}");
        let _ = writeln!(out, "# variables: {}", self.vars.join(" "));
        let _ = writeln!(out, "# unknowns: {}", self.unknown_names().join(" "));
        let _ = writeln!(out, "# parameters: {}", self.parameter_names().join(" "));
        let _ = writeln!(out, "# equations: {}", self.len());
        let degrees: Vec<String> = self.degrees().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "# degrees: {}", degrees.join(" "));
        let mut sorted = self.degrees();
        sorted.sort_unstable();
        let sorted: Vec<String> = sorted.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "# degree multiset: {{{}}}", sorted.join(","));
        for (i, p) in self.equations.iter().enumerate() {
            let _ = writeln!(out, "[equation {}] terms={} degree={}", i + 1, p.num_terms(), p.total_degree());
            out.push_str(&p.dump());
        }
        out
    }
}
