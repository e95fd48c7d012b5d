//! Quadrature grids on the unit sphere and grid-preserving rotations.
//!
//! For n = 2 the grid is uniform in angle; for n = 3 it is a
//! Gauss–Legendre × uniform-azimuth product grid. Weights carry the
//! unnormalized surface measure, so they sum to |S^{n-1}| (2π or 4π).

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::KahanSum;

const NODE_NORM_TOL: f64 = 1e-12;
const WEIGHT_SUM_TOL: f64 = 1e-10;
/// Absolute Euclidean tolerance when matching rotated nodes to grid nodes.
const NODE_MATCH_TOL: f64 = 1e-9;
const ROTATION_TOL: f64 = 1e-12;
const MIN_RESOLUTION: usize = 4;

pub const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Quadrature nodes and positive weights on S^{n-1}.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    dim: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

/// Surface area of S^{n-1} for the supported dimensions.
pub fn sphere_surface_area(dim: usize) -> Result<f64> {
    match dim {
        2 => Ok(TAU),
        3 => Ok(2.0 * TAU),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

impl SphereGrid {
    /// Builds a grid from explicit nodes and weights, validating all
    /// invariants (unit nodes, positive weights, weight sum, distinctness).
    pub fn new(dim: usize, nodes: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let area = sphere_surface_area(dim)?;
        if nodes.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: nodes.len(),
                got: weights.len(),
            });
        }
        if nodes.is_empty() {
            return Err(Error::InvalidSpec("empty grid".into()));
        }
        let mut sum = KahanSum::new();
        for (i, (node, &w)) in nodes.iter().zip(&weights).enumerate() {
            if node.len() != dim {
                return Err(Error::LengthMismatch {
                    expected: dim,
                    got: node.len(),
                });
            }
            let norm = libm::sqrt(node.iter().map(|x| x * x).sum());
            if (norm - 1.0).abs() > NODE_NORM_TOL {
                return Err(Error::NotUnitVector { norm });
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidSpec(format!("weight {w} at node {i}")));
            }
            sum.add(w);
        }
        if (sum.value() - area).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidSpec(format!(
                "weight sum {} differs from surface area {area}",
                sum.value()
            )));
        }
        // Distinctness via lexicographic sort: duplicates become adjacent.
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_unstable_by(|&a, &b| {
            nodes[a]
                .iter()
                .zip(&nodes[b])
                .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        for pair in order.windows(2) {
            if nodes[pair[0]] == nodes[pair[1]] {
                return Err(Error::InvalidSpec(format!(
                    "duplicate nodes {} and {}",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Self { dim, nodes, weights })
    }

    /// Constructs the standard grid: `resolution` uniform angles for n = 2,
    /// a `resolution`-polar × `2·resolution`-azimuth product for n = 3.
    pub fn make(dim: usize, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::ResolutionTooSmall {
                resolution,
                min: MIN_RESOLUTION,
            });
        }
        match dim {
            2 => {
                let k = resolution;
                let w = TAU / k as f64;
                let nodes = (0..k)
                    .map(|j| {
                        let theta = TAU * j as f64 / k as f64;
                        alloc::vec![libm::cos(theta), libm::sin(theta)]
                    })
                    .collect();
                Self::new(2, nodes, alloc::vec![w; k])
            }
            3 => {
                let k = resolution;
                let (xs, ws) = gauss_legendre(k);
                let n_az = 2 * k;
                let az_w = TAU / n_az as f64;
                let mut nodes = Vec::with_capacity(k * n_az);
                let mut weights = Vec::with_capacity(k * n_az);
                for (x, wp) in xs.iter().zip(&ws) {
                    let s = libm::sqrt((1.0 - x) * (1.0 + x));
                    for j in 0..n_az {
                        let phi = TAU * j as f64 / n_az as f64;
                        nodes.push(alloc::vec![s * libm::cos(phi), s * libm::sin(phi), *x]);
                        weights.push(wp * az_w);
                    }
                }
                Self::new(3, nodes, weights)
            }
            d => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of quadrature nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn surface_area(&self) -> f64 {
        sphere_surface_area(self.dim).expect("validated at construction")
    }

    /// Σ_i w_i · values_i with compensated summation.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        let mut sum = KahanSum::new();
        for (w, v) in self.weights.iter().zip(values) {
            sum.add(w * v);
        }
        Ok(sum.value())
    }

    /// Permutation π with rot·node_i = node_{π(i)}, if the node set is
    /// closed under `rot` (within 1e-9) and weights are preserved.
    pub fn permutation_under(&self, rot: &Rotation) -> Result<Vec<usize>> {
        if rot.dim() != self.dim {
            return Err(Error::ArityMismatch {
                expected: self.dim,
                got: rot.dim(),
            });
        }
        let mut perm = Vec::with_capacity(self.len());
        for (i, node) in self.nodes.iter().enumerate() {
            let image = rot.apply(node);
            let mut found = None;
            for (j, cand) in self.nodes.iter().enumerate() {
                let d2: f64 = image
                    .iter()
                    .zip(cand)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                if d2 <= NODE_MATCH_TOL * NODE_MATCH_TOL {
                    found = Some(j);
                    break;
                }
            }
            let j = found.ok_or(Error::GridNotClosed { node: i })?;
            if (self.weights[j] - self.weights[i]).abs() > 1e-12 {
                return Err(Error::GridNotClosed { node: i });
            }
            perm.push(j);
        }
        Ok(perm)
    }

    /// Minimal angle between distinct nodes. Used to size bump bodies that
    /// must be supported on a single node.
    pub fn min_angular_gap(&self) -> f64 {
        let mut min = core::f64::consts::PI;
        for (i, a) in self.nodes.iter().enumerate() {
            for b in &self.nodes[i + 1..] {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let ang = libm::acos(dot.clamp(-1.0, 1.0));
                if ang < min {
                    min = ang;
                }
            }
        }
        min
    }
}

/// Orthogonal matrix with determinant +1, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    dim: usize,
    mat: Vec<f64>,
}

impl Rotation {
    pub fn new(dim: usize, mat: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if mat.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                got: mat.len(),
            });
        }
        // RᵀR = I
        for i in 0..dim {
            for j in 0..dim {
                let dot: f64 = (0..dim).map(|k| mat[k * dim + i] * mat[k * dim + j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).abs() > ROTATION_TOL {
                    return Err(Error::NotARotation(format!(
                        "RᵀR entry ({i},{j}) = {dot}"
                    )));
                }
            }
        }
        let det = match dim {
            2 => mat[0] * mat[3] - mat[1] * mat[2],
            3 => {
                mat[0] * (mat[4] * mat[8] - mat[5] * mat[7])
                    - mat[1] * (mat[3] * mat[8] - mat[5] * mat[6])
                    + mat[2] * (mat[3] * mat[7] - mat[4] * mat[6])
            }
            _ => unreachable!(),
        };
        if (det - 1.0).abs() > ROTATION_TOL {
            return Err(Error::NotARotation(format!("det = {det}")));
        }
        Ok(Self { dim, mat })
    }

    /// Planar rotation by `angle` (n = 2).
    pub fn planar(angle: f64) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Self {
            dim: 2,
            mat: alloc::vec![c, -s, s, c],
        }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut mat = alloc::vec![0.0; dim * dim];
        for i in 0..dim {
            mat[i * dim + i] = 1.0;
        }
        Self::new(dim, mat)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &[f64] {
        &self.mat
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.mat[i * self.dim + j] * v[j]).sum())
            .collect()
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence. Weights sum to 2.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = alloc::vec![0.0; k];
    let mut ws = alloc::vec![0.0; k];
    for i in 0..k {
        // Tricomi-style initial guess.
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5));
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(k, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(k, x);
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    xs.reverse();
    ws.reverse();
    (xs, ws)
}

fn legendre_and_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn uniform_circle_grid() {
        let g = SphereGrid::make(2, 4).unwrap();
        assert_eq!(g.len(), 4);
        for w in g.weights() {
            assert!((w - PI / 2.0).abs() < 1e-15);
        }
        // angles 0, π/2, π, 3π/2
        assert!((g.nodes()[1][1] - 1.0).abs() < 1e-15);
        assert!((g.nodes()[2][0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn weight_sums() {
        let g2 = SphereGrid::make(2, 360).unwrap();
        let sum2: f64 = g2.weights().iter().sum();
        assert!((sum2 - TAU).abs() < 1e-12);

        let g3 = SphereGrid::make(3, 16).unwrap();
        let sum3: f64 = g3.weights().iter().sum();
        assert!((sum3 - 2.0 * TAU).abs() < 1e-10);
    }

    #[test]
    fn integrate_constants() {
        for (dim, res, area) in [(2, 17, TAU), (3, 8, 2.0 * TAU)] {
            let g = SphereGrid::make(dim, res).unwrap();
            let ones = alloc::vec![1.0; g.len()];
            assert!((g.integrate(&ones).unwrap() - area).abs() < 1e-10);
        }
    }

    #[test]
    fn integrate_x_squared_on_s2() {
        // ∫_{S²} x² du = |S²|/3 by symmetry.
        let g = SphereGrid::make(3, 16).unwrap();
        let vals: alloc::vec::Vec<f64> = g.nodes().iter().map(|u| u[0] * u[0]).collect();
        let got = g.integrate(&vals).unwrap();
        assert!((got - 4.0 * PI / 3.0).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn cos_squared_exact_on_circle() {
        // exact for trigonometric polynomials of degree < k
        for k in [4, 7, 32] {
            let g = SphereGrid::make(2, k).unwrap();
            let vals: alloc::vec::Vec<f64> = g.nodes().iter().map(|u| u[0] * u[0]).collect();
            assert!((g.integrate(&vals).unwrap() - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn integrate_length_mismatch() {
        let g = SphereGrid::make(2, 4).unwrap();
        assert!(matches!(
            g.integrate(&[1.0, 2.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn permutation_cyclic_shift() {
        let g = SphereGrid::make(2, 8).unwrap();
        let rot = Rotation::planar(TAU / 8.0);
        let perm = g.permutation_under(&rot).unwrap();
        for i in 0..8 {
            assert_eq!(perm[i], (i + 1) % 8);
        }
    }

    #[test]
    fn permutation_identity() {
        let g = SphereGrid::make(2, 8).unwrap();
        let rot = Rotation::identity(2).unwrap();
        let perm = g.permutation_under(&rot).unwrap();
        assert_eq!(perm, (0..8).collect::<alloc::vec::Vec<_>>());
    }

    #[test]
    fn permutation_not_closed() {
        let g = SphereGrid::make(2, 8).unwrap();
        let rot = Rotation::planar(PI / 3.0);
        assert!(matches!(
            g.permutation_under(&rot),
            Err(Error::GridNotClosed { .. })
        ));
    }

    #[test]
    fn generator_has_order_k() {
        let k = 12;
        let g = SphereGrid::make(2, k).unwrap();
        let perm = g.permutation_under(&Rotation::planar(TAU / k as f64)).unwrap();
        let mut composed: alloc::vec::Vec<usize> = (0..k).collect();
        for _ in 0..k {
            composed = composed.iter().map(|&i| perm[i]).collect();
        }
        assert_eq!(composed, (0..k).collect::<alloc::vec::Vec<_>>());
    }

    #[test]
    fn refinement_reduces_error() {
        // smooth test integrand exp(u·e_x) against a fine reference
        let reference = {
            let g = SphereGrid::make(2, 4096).unwrap();
            let vals: alloc::vec::Vec<f64> =
                g.nodes().iter().map(|u| libm::exp(u[0])).collect();
            g.integrate(&vals).unwrap()
        };
        // stop before spectral convergence saturates at roundoff (~res 14)
        let mut last = f64::INFINITY;
        for res in [4, 6, 8, 10, 12] {
            let g = SphereGrid::make(2, res).unwrap();
            let vals: alloc::vec::Vec<f64> =
                g.nodes().iter().map(|u| libm::exp(u[0])).collect();
            let err = (g.integrate(&vals).unwrap() - reference).abs();
            assert!(err < last, "res {res}: {err} !< {last}");
            last = err;
        }
    }

    #[test]
    fn rejects_bad_rotation() {
        assert!(Rotation::new(2, alloc::vec![1.0, 0.0, 0.0, -1.0]).is_err()); // det -1
        assert!(Rotation::new(2, alloc::vec![2.0, 0.0, 0.0, 0.5]).is_err());
    }

    #[test]
    fn rejects_low_resolution_and_bad_dim() {
        assert!(matches!(
            SphereGrid::make(2, 3),
            Err(Error::ResolutionTooSmall { .. })
        ));
        assert!(matches!(
            SphereGrid::make(4, 8),
            Err(Error::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn gauss_legendre_sums_to_two() {
        for k in [4, 16, 64] {
            let (xs, ws) = gauss_legendre(k);
            assert_eq!(xs.len(), k);
            let sum: f64 = ws.iter().sum();
            assert!((sum - 2.0).abs() < 1e-13);
            // ∫ x² dx = 2/3
            let m2: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x * x).sum();
            assert!((m2 - 2.0 / 3.0).abs() < 1e-13);
        }
    }
}
