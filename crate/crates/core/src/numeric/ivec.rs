use std::fmt;
use std::ops::{Index, IndexMut};

use crate::numeric::Interval;

/// A box: one interval per unknown, in the unknown order of the system it
/// belongs to.
#[derive(Clone, PartialEq)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(components: Vec<Interval>) -> Self {
        IntervalVector(components)
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> Self {
        IntervalVector(bounds.iter().map(|&(l, h)| Interval::new(l, h)).collect())
    }

    pub fn point(x: &[f64]) -> Self {
        IntervalVector(x.iter().map(|&v| Interval::point(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    /// Largest component width.
    pub fn width(&self) -> f64 {
        self.0.iter().map(Interval::width).fold(0.0, f64::max)
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(Interval::mid).collect()
    }

    pub fn lower(&self) -> Vec<f64> {
        self.0.iter().map(Interval::lo).collect()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.0.len() == x.len() && self.0.iter().zip(x).all(|(i, &v)| i.contains(v))
    }

    pub fn is_subset_of(&self, other: &IntervalVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset_of(b))
    }

    pub fn intersect(&self, other: &IntervalVector) -> Option<IntervalVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(IntervalVector)
    }

    pub fn hull(&self, other: &IntervalVector) -> IntervalVector {
        IntervalVector(self.0.iter().zip(&other.0).map(|(a, b)| a.hull(b)).collect())
    }

    /// True when the closed boxes share at least one point.
    pub fn overlaps(&self, other: &IntervalVector) -> bool {
        self.intersect(other).is_some()
    }

    /// Splits component `axis` at the fraction `frac` of its width.
    pub fn split(&self, axis: usize, frac: f64) -> (IntervalVector, IntervalVector) {
        let (a, b) = self.0[axis].split_at(frac);
        let mut left = self.clone();
        let mut right = self.clone();
        left.0[axis] = a;
        right.0[axis] = b;
        (left, right)
    }

    pub fn into_inner(self) -> Vec<Interval> {
        self.0
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl IndexMut<usize> for IntervalVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

impl fmt::Debug for IntervalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}
