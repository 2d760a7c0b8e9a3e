use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::atlas::{direct_kinematics, SingularityDeterminant};
use crate::error::AtlasError;
use crate::model::{Geometry, JointLengths};
use crate::numeric::rational::rational_from_f64;
use crate::numeric::Rational;
use crate::solver::SolverOptions;

/// A regular `n x n` node grid over `(r2, r3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceGrid {
    pub n: usize,
    pub r2: (f64, f64),
    pub r3: (f64, f64),
}

impl SliceGrid {
    pub fn square(n: usize, lo: f64, hi: f64) -> Self {
        SliceGrid {
            n,
            r2: (lo, hi),
            r3: (lo, hi),
        }
    }

    fn validate(&self) -> Result<(), AtlasError> {
        if self.n < 2 {
            return Err(AtlasError::InvalidGrid(format!("need at least 2x2 nodes, got {}", self.n)));
        }
        for (name, (lo, hi)) in [("r2", self.r2), ("r3", self.r3)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(AtlasError::InvalidGrid(format!("empty {name} range [{lo}, {hi}]")));
            }
            if lo < 0.0 {
                return Err(AtlasError::InvalidGrid(format!("{name} range starts below zero")));
            }
        }
        Ok(())
    }

    /// Coordinates of node `(i, j)`: `i` along `r2`, `j` along `r3`.
    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let step = |(lo, hi): (f64, f64), k: usize| {
            if k + 1 == self.n {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (self.n - 1) as f64
            }
        };
        (step(self.r2, i), step(self.r3, j))
    }

    pub fn cell_size(&self) -> (f64, f64) {
        let d = (self.n - 1) as f64;
        ((self.r2.1 - self.r2.0) / d, (self.r3.1 - self.r3.0) / d)
    }
}

/// DK outcome at one grid node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeSample {
    /// Number of certified assembly modes.
    pub count: usize,
    /// Product of `det J` over the assembly modes; `+inf` when there are
    /// none.
    pub sign_value: f64,
}

/// Approximate singular curves of a slice `r1 = const`, projected to
/// `(r2, r3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSlice {
    pub r1: Rational,
    pub grid: SliceGrid,
    /// `None` where DK certification was incomplete; indexed `[i * n + j]`.
    pub nodes: Vec<Option<NodeSample>>,
    pub polylines: Vec<Vec<(f64, f64)>>,
}

impl SingularSlice {
    pub fn failed_nodes(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_none()).count()
    }

    pub fn failed_fraction(&self) -> f64 {
        self.failed_nodes() as f64 / self.nodes.len() as f64
    }

    /// Distance from `(r2, r3)` to the nearest polyline.
    pub fn distance_to_curve(&self, r2: f64, r3: f64) -> f64 {
        let mut best = f64::INFINITY;
        for line in &self.polylines {
            for w in line.windows(2) {
                best = best.min(point_segment_distance((r2, r3), w[0], w[1]));
            }
            if let [p] = line.as_slice() {
                best = best.min((p.0 - r2).hypot(p.1 - r3));
            }
        }
        best
    }
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p.0 - a.0 - t * dx).hypot(p.1 - a.1 - t * dy)
}

/// Samples DK over the grid and traces where the sign of the product of
/// `det J` over assembly modes changes, and where the number of modes
/// changes.
pub fn singular_slice(
    g: &Geometry,
    r1: &Rational,
    grid: &SliceGrid,
    opts: &SolverOptions,
) -> Result<SingularSlice, AtlasError> {
    grid.validate()?;
    if r1 < &Rational::from_integer(0.into()) {
        return Err(AtlasError::NegativeLength(r1.to_string()));
    }
    let det = SingularityDeterminant::new(g);
    let n = grid.n;
    let indices: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let sample = |&(i, j): &(usize, usize)| -> Result<Option<NodeSample>, AtlasError> {
        let (r2, r3) = grid.node(i, j);
        let lengths = JointLengths::new(r1.clone(), rational_from_f64(r2), rational_from_f64(r3));
        let dk = direct_kinematics(g, &lengths, opts)?;
        if !dk.is_complete() {
            return Ok(None);
        }
        let sign_value = if dk.poses.is_empty() {
            f64::INFINITY
        } else {
            dk.poses.iter().map(|p| det.eval(p)).product()
        };
        Ok(Some(NodeSample {
            count: dk.poses.len(),
            sign_value,
        }))
    };
    let nodes = if opts.parallel {
        indices.par_iter().map(sample).collect::<Result<Vec<_>, _>>()?
    } else {
        indices.iter().map(sample).collect::<Result<Vec<_>, _>>()?
    };
    let polylines = trace_polylines(grid, &nodes);
    Ok(SingularSlice {
        r1: r1.clone(),
        grid: grid.clone(),
        nodes,
        polylines,
    })
}

/// Curve vertices: a crossing on a horizontal (`r2`) edge, a vertical edge,
/// or a cell centre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Vertex {
    Horizontal(usize, usize),
    Vertical(usize, usize),
    Centre(usize, usize),
}

fn crossing(a: &NodeSample, b: &NodeSample) -> Option<f64> {
    let (sa, sb) = (a.sign_value, b.sign_value);
    let negative = |s: f64| s < 0.0;
    if sa.is_finite() && sb.is_finite() && negative(sa) != negative(sb) {
        return Some((sa / (sa - sb)).clamp(0.0, 1.0));
    }
    (a.count != b.count || negative(sa) != negative(sb)).then_some(0.5)
}

fn trace_polylines(grid: &SliceGrid, nodes: &[Option<NodeSample>]) -> Vec<Vec<(f64, f64)>> {
    let n = grid.n;
    let at = |i: usize, j: usize| nodes[i * n + j].as_ref();
    let mut position: BTreeMap<Vertex, (f64, f64)> = BTreeMap::new();
    let lerp = |p: (f64, f64), q: (f64, f64), t: f64| (p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1));
    for i in 0..n {
        for j in 0..n {
            let Some(a) = at(i, j) else { continue };
            if i + 1 < n {
                if let Some(t) = at(i + 1, j).and_then(|b| crossing(a, b)) {
                    position.insert(Vertex::Horizontal(i, j), lerp(grid.node(i, j), grid.node(i + 1, j), t));
                }
            }
            if j + 1 < n {
                if let Some(t) = at(i, j + 1).and_then(|b| crossing(a, b)) {
                    position.insert(Vertex::Vertical(i, j), lerp(grid.node(i, j), grid.node(i, j + 1), t));
                }
            }
        }
    }

    let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut add_edge = |a: Vertex, b: Vertex| {
        edges.insert(if a <= b { (a, b) } else { (b, a) });
    };
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            if [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
                .iter()
                .any(|&(a, b)| at(a, b).is_none())
            {
                continue;
            }
            let around = [
                Vertex::Horizontal(i, j),
                Vertex::Vertical(i + 1, j),
                Vertex::Horizontal(i, j + 1),
                Vertex::Vertical(i, j),
            ];
            let hits: Vec<Vertex> = around.into_iter().filter(|v| position.contains_key(v)).collect();
            match hits.len() {
                0 => {}
                2 => add_edge(hits[0], hits[1]),
                4 => {
                    add_edge(hits[0], hits[1]);
                    add_edge(hits[2], hits[3]);
                }
                _ => {
                    let c = Vertex::Centre(i, j);
                    let (x0, y0) = grid.node(i, j);
                    let (x1, y1) = grid.node(i + 1, j + 1);
                    position.insert(c, ((x0 + x1) / 2.0, (y0 + y1) / 2.0));
                    for h in hits {
                        add_edge(h, c);
                    }
                }
            }
        }
    }
    chain(&edges)
        .into_iter()
        .map(|line| line.iter().map(|v| position[v]).collect())
        .collect()
}

/// Joins edges into maximal paths; open paths start at vertices whose degree
/// is not two, the remaining cycles at their smallest vertex.
fn chain(edges: &BTreeSet<(Vertex, Vertex)>) -> Vec<Vec<Vertex>> {
    let mut adjacency: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for &(a, b) in edges {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    let mut used: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let key = |a: Vertex, b: Vertex| if a <= b { (a, b) } else { (b, a) };
    let mut lines = Vec::new();
    let mut walk = |start: Vertex, used: &mut BTreeSet<(Vertex, Vertex)>| {
        while let Some(&next) = adjacency[&start].iter().find(|&&b| !used.contains(&key(start, b))) {
            let mut line = vec![start];
            let mut cur = next;
            used.insert(key(start, cur));
            line.push(cur);
            while adjacency[&cur].len() == 2 {
                let Some(&step) = adjacency[&cur].iter().find(|&&b| !used.contains(&key(cur, b))) else {
                    break;
                };
                used.insert(key(cur, step));
                cur = step;
                line.push(cur);
            }
            lines.push(line);
        }
    };
    let starts: Vec<Vertex> = adjacency.iter().filter(|(_, v)| v.len() != 2).map(|(k, _)| *k).collect();
    for s in starts {
        walk(s, &mut used);
    }
    let all: Vec<Vertex> = adjacency.keys().copied().collect();
    for s in all {
        walk(s, &mut used);
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(count: usize, s: f64) -> Option<NodeSample> {
        Some(NodeSample { count, sign_value: s })
    }

    #[test]
    fn grid_nodes_hit_both_ends() {
        let g = SliceGrid::square(3, 0.0, 35.0);
        assert_eq!(g.node(0, 0), (0.0, 0.0));
        assert_eq!(g.node(1, 2), (17.5, 35.0));
        assert_eq!(g.cell_size(), (17.5, 17.5));
    }

    #[test]
    fn rejects_small_grids() {
        assert!(SliceGrid::square(1, 0.0, 1.0).validate().is_err());
        assert!(SliceGrid::square(2, 1.0, 1.0).validate().is_err());
        assert!(SliceGrid::square(2, 0.0, 1.0).validate().is_ok());
    }

    #[test]
    fn linear_sign_field_gives_a_straight_line() {
        // s = r2 - 1.25 on a 4x4 grid over [0, 3]
        let grid = SliceGrid::square(4, 0.0, 3.0);
        let nodes: Vec<_> = (0..4)
            .flat_map(|i| (0..4).map(move |_| sample(2, i as f64 - 1.25)))
            .collect();
        let lines = trace_polylines(&grid, &nodes);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), 4);
        for &(r2, _) in &lines[0] {
            assert!((r2 - 1.25).abs() < 1e-12);
        }
    }

    #[test]
    fn count_change_without_sign_change_is_traced() {
        let grid = SliceGrid::square(3, 0.0, 2.0);
        let nodes: Vec<_> = (0..3)
            .flat_map(|i| (0..3).map(move |_| if i == 0 { sample(0, f64::INFINITY) } else { sample(2, 5.0) }))
            .collect();
        let lines = trace_polylines(&grid, &nodes);
        assert_eq!(lines.len(), 1);
        assert!(lines[0].iter().all(|&(r2, _)| (r2 - 0.5).abs() < 1e-12));
    }

    #[test]
    fn constant_field_has_no_curve() {
        let grid = SliceGrid::square(3, 0.0, 2.0);
        let nodes = vec![sample(4, -3.0); 9];
        assert!(trace_polylines(&grid, &nodes).is_empty());
    }

    #[test]
    fn closed_loop_is_one_polyline() {
        // negative only at the centre node of a 3x3 grid
        let grid = SliceGrid::square(3, 0.0, 2.0);
        let nodes: Vec<_> = (0..9).map(|k| sample(2, if k == 4 { -1.0 } else { 1.0 })).collect();
        let lines = trace_polylines(&grid, &nodes);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].first(), lines[0].last());
        assert_eq!(lines[0].len(), 5);
    }

    #[test]
    fn distance_to_segment() {
        assert_eq!(point_segment_distance((0.0, 1.0), (-1.0, 0.0), (1.0, 0.0)), 1.0);
        assert_eq!(point_segment_distance((3.0, 0.0), (-1.0, 0.0), (1.0, 0.0)), 2.0);
    }
}
