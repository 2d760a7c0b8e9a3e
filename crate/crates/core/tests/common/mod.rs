//! Independent float oracles for the integration tests: the constraint map
//! and its Jacobian written out by hand, plus a multistart Newton solver.

#![allow(dead_code)]

use cuspidal::model::{Geometry, Pose};
use cuspidal::numeric::rational::rational_to_f64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    a2x: f64,
    a3x: f64,
    a3y: f64,
    d1: f64,
    d3: f64,
    bx: f64,
    by: f64,
}

impl Oracle {
    pub fn new(g: &Geometry) -> Self {
        let f = rational_to_f64;
        Oracle {
            a2x: f(&g.a2x),
            a3x: f(&g.a3x),
            a3y: f(&g.a3y),
            d1: f(&g.d1),
            d3: f(&g.d3),
            bx: f(&g.beta_x),
            by: f(&g.beta_y),
        }
    }

    fn legs(&self, x: &[f64; 4]) -> [(f64, f64); 3] {
        let [px, py, tx, ty] = *x;
        let b2 = (px + self.d1 * tx, py + self.d1 * ty);
        let b3 = (
            px + self.d3 * (self.bx * tx - self.by * ty),
            py + self.d3 * (self.by * tx + self.bx * ty),
        );
        [(px, py), (b2.0 - self.a2x, b2.1), (b3.0 - self.a3x, b3.1 - self.a3y)]
    }

    pub fn lengths(&self, x: &[f64; 4]) -> [f64; 3] {
        self.legs(x).map(|(u, v)| u.hypot(v))
    }

    pub fn residual(&self, x: &[f64; 4], r: &[f64; 3]) -> [f64; 4] {
        let l = self.legs(x);
        [
            l[0].0 * l[0].0 + l[0].1 * l[0].1 - r[0] * r[0],
            l[1].0 * l[1].0 + l[1].1 * l[1].1 - r[1] * r[1],
            l[2].0 * l[2].0 + l[2].1 * l[2].1 - r[2] * r[2],
            x[2] * x[2] + x[3] * x[3] - 1.0,
        ]
    }

    /// Rows are the gradients of the residual components.
    pub fn jacobian(&self, x: &[f64; 4]) -> [[f64; 4]; 4] {
        let [(u1, v1), (u2, v2), (u3, v3)] = self.legs(x);
        let (dxt, dyt) = (self.d3 * self.bx, self.d3 * self.by);
        [
            [2.0 * u1, 2.0 * v1, 0.0, 0.0],
            [2.0 * u2, 2.0 * v2, 2.0 * self.d1 * u2, 2.0 * self.d1 * v2],
            [
                2.0 * u3,
                2.0 * v3,
                2.0 * (u3 * dxt + v3 * dyt),
                2.0 * (-u3 * dyt + v3 * dxt),
            ],
            [0.0, 0.0, 2.0 * x[2], 2.0 * x[3]],
        ]
    }

    /// `|det J|` divided by the product of the row norms.
    pub fn conditioning(&self, x: &[f64; 4]) -> f64 {
        let j = self.jacobian(x);
        let norms: f64 = j.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt()).product();
        det4(j).abs() / norms
    }

    pub fn newton(&self, start: [f64; 4], r: &[f64; 3]) -> Option<[f64; 4]> {
        let mut x = start;
        let scale = 1.0 + r.iter().map(|v| v * v).sum::<f64>();
        for _ in 0..60 {
            let f = self.residual(&x, r);
            let step = solve4(self.jacobian(&x), f)?;
            for i in 0..4 {
                x[i] -= step[i];
            }
            if !x.iter().all(|v| v.is_finite()) {
                return None;
            }
            let small = step.iter().map(|v| v.abs()).fold(0.0, f64::max) < 1e-13 * (1.0 + r[0]);
            let f = self.residual(&x, r);
            if small && f.iter().all(|v| v.abs() < 1e-9 * scale) {
                return Some(x);
            }
        }
        None
    }

    /// Distinct real poses found by Newton from `starts` random points.
    pub fn multistart(&self, r: &[f64; 3], starts: usize, rng: &mut impl Rng) -> Vec<[f64; 4]> {
        let mut found: Vec<[f64; 4]> = Vec::new();
        for _ in 0..starts {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let b = rng.gen_range(0.0..std::f64::consts::TAU);
            let start = [r[0] * b.cos(), r[0] * b.sin(), a.cos(), a.sin()];
            if let Some(x) = self.newton(start, r) {
                if !found.iter().any(|y| dist(y, &x) < 1e-6 * (1.0 + r[0])) {
                    found.push(x);
                }
            }
        }
        found
    }
}

pub fn dist(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

pub fn pose_array(p: &Pose) -> [f64; 4] {
    p.as_array()
}

pub fn random_pose(rng: &mut impl Rng, reach: f64) -> [f64; 4] {
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    [rng.gen_range(-reach..reach), rng.gen_range(-reach..reach), a.cos(), a.sin()]
}

pub fn det4(m: [[f64; 4]; 4]) -> f64 {
    let mut a = m;
    let mut det = 1.0;
    for k in 0..4 {
        let p = (k..4).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k];
        for i in k + 1..4 {
            let f = a[i][k] / a[k][k];
            for j in k..4 {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    det
}

pub fn solve4(m: [[f64; 4]; 4], rhs: [f64; 4]) -> Option<[f64; 4]> {
    let mut a = m;
    let mut b = rhs;
    for k in 0..4 {
        let p = (k..4).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k].abs() < 1e-300 {
            return None;
        }
        a.swap(p, k);
        b.swap(p, k);
        for i in k + 1..4 {
            let f = a[i][k] / a[k][k];
            for j in k..4 {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = [0.0; 4];
    for k in (0..4).rev() {
        let s: f64 = (k + 1..4).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}
