//! Star-body shapes and their radial functions on a grid.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::SphereGrid;
use crate::KahanSum;

const UNIT_TOL: f64 = 1e-12;

/// Symbolic star-body shape, evaluable to a radial function.
#[derive(Debug, Clone, PartialEq)]
pub enum StarBodySpec {
    Ball {
        radius: f64,
    },
    Ellipsoid {
        semi_axes: Vec<f64>,
    },
    /// Facet normals and offsets; must contain the origin (all offsets > 0).
    HPolytope {
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
    /// Smooth bump of height `height` around direction `center`, vanishing
    /// at angular distance ≥ `width`. Profile: cos²(π t / 2) on t ∈ [0, 1).
    CapBump {
        center: Vec<f64>,
        width: f64,
        height: f64,
    },
    /// Nonnegative radial combination Σ λ_i · body_i.
    RadialSum {
        terms: Vec<(f64, StarBodySpec)>,
    },
}

impl StarBodySpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            StarBodySpec::Ball { radius } => {
                if !(*radius > 0.0) {
                    return Err(Error::InvalidSpec(format!("ball radius {radius}")));
                }
            }
            StarBodySpec::Ellipsoid { semi_axes } => {
                if semi_axes.len() != dim {
                    return Err(Error::LengthMismatch {
                        expected: dim,
                        got: semi_axes.len(),
                    });
                }
                if semi_axes.iter().any(|a| !(*a > 0.0)) {
                    return Err(Error::InvalidSpec("nonpositive semi-axis".into()));
                }
            }
            StarBodySpec::HPolytope { normals, offsets } => {
                if normals.len() != offsets.len() || normals.is_empty() {
                    return Err(Error::InvalidSpec("facet count mismatch".into()));
                }
                for a in normals {
                    if a.len() != dim {
                        return Err(Error::LengthMismatch {
                            expected: dim,
                            got: a.len(),
                        });
                    }
                }
                if offsets.iter().any(|b| !(*b > 0.0)) {
                    return Err(Error::InvalidSpec(
                        "polytope offsets must be positive (origin interior)".into(),
                    ));
                }
            }
            StarBodySpec::CapBump { center, width, height } => {
                if center.len() != dim {
                    return Err(Error::LengthMismatch {
                        expected: dim,
                        got: center.len(),
                    });
                }
                let norm = libm::sqrt(center.iter().map(|x| x * x).sum());
                if (norm - 1.0).abs() > 1e-9 {
                    return Err(Error::NotUnitVector { norm });
                }
                if !(*width > 0.0 && *width < core::f64::consts::PI) {
                    return Err(Error::InvalidSpec(format!("cap width {width}")));
                }
                if !(*height >= 0.0) {
                    return Err(Error::InvalidSpec(format!("cap height {height}")));
                }
            }
            StarBodySpec::RadialSum { terms } => {
                for (lambda, body) in terms {
                    if !(*lambda >= 0.0) {
                        return Err(Error::NegativeScale(*lambda));
                    }
                    body.validate(dim)?;
                }
            }
        }
        Ok(())
    }

    /// Radial function of the shape at unit direction `u`.
    pub fn radial_eval(&self, u: &[f64]) -> Result<f64> {
        let norm2: f64 = u.iter().map(|x| x * x).sum();
        if (norm2 - 1.0).abs() > 3.0 * UNIT_TOL {
            return Err(Error::NotUnitVector {
                norm: libm::sqrt(norm2),
            });
        }
        self.validate(u.len())?;
        self.radial_eval_unchecked(u)
    }

    fn radial_eval_unchecked(&self, u: &[f64]) -> Result<f64> {
        match self {
            StarBodySpec::Ball { radius } => Ok(*radius),
            StarBodySpec::Ellipsoid { semi_axes } => {
                let q: f64 = u
                    .iter()
                    .zip(semi_axes)
                    .map(|(x, a)| (x / a) * (x / a))
                    .sum();
                Ok(1.0 / libm::sqrt(q))
            }
            StarBodySpec::HPolytope { normals, offsets } => {
                let mut rho = f64::INFINITY;
                for (a, b) in normals.iter().zip(offsets) {
                    let dot: f64 = a.iter().zip(u).map(|(x, y)| x * y).sum();
                    if dot > 0.0 {
                        rho = rho.min(b / dot);
                    }
                }
                if rho.is_finite() {
                    Ok(rho)
                } else {
                    Err(Error::UnboundedPolytope)
                }
            }
            StarBodySpec::CapBump { center, width, height } => {
                let dot: f64 = center.iter().zip(u).map(|(x, y)| x * y).sum();
                let angle = libm::acos(dot.clamp(-1.0, 1.0));
                let t = angle / width;
                if t >= 1.0 {
                    Ok(0.0)
                } else {
                    let c = libm::cos(core::f64::consts::FRAC_PI_2 * t);
                    Ok(height * c * c)
                }
            }
            StarBodySpec::RadialSum { terms } => {
                let mut sum = 0.0;
                for (lambda, body) in terms {
                    sum += lambda * body.radial_eval_unchecked(u)?;
                }
                Ok(sum)
            }
        }
    }

    /// Pointwise radial evaluation at every grid node.
    pub fn sample(&self, grid: &SphereGrid) -> Result<RadialFunction> {
        self.validate(grid.dim())?;
        let values = grid
            .nodes()
            .iter()
            .map(|u| self.radial_eval_unchecked(u))
            .collect::<Result<Vec<f64>>>()?;
        Ok(RadialFunction { values })
    }
}

/// Discrete radial function: nonnegative values at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    values: Vec<f64>,
}

impl RadialFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { index: i });
            }
            if *v < 0.0 {
                return Err(Error::InvalidSpec(format!("negative radial value {v} at node {i}")));
            }
        }
        Ok(Self { values })
    }

    pub fn zero(len: usize) -> Self {
        Self {
            values: alloc::vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Pointwise sum (the radial sum L +̃ M).
    pub fn radial_sum(&self, other: &RadialFunction) -> Result<RadialFunction> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(RadialFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Pointwise λ·ρ, λ ≥ 0.
    pub fn scale(&self, lambda: f64) -> Result<RadialFunction> {
        if !(lambda >= 0.0) {
            return Err(Error::NegativeScale(lambda));
        }
        Ok(RadialFunction {
            values: self.values.iter().map(|v| lambda * v).collect(),
        })
    }

    /// Volume (1/n)·Σ_i w_i ρ_iⁿ.
    pub fn volume(&self, grid: &SphereGrid) -> Result<f64> {
        if self.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.len(),
                got: self.len(),
            });
        }
        Ok(signed_volume(grid, &self.values))
    }

    /// Discrete L ∩ M = {o}: min(ρ_L, ρ_M) ≤ τ at every node.
    pub fn essentially_disjoint(&self, other: &RadialFunction, tau: f64) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a.min(*b) <= tau))
    }
}

/// (1/n)·Σ_i w_i v_iⁿ for arbitrary signed node values. Agrees with
/// [`RadialFunction::volume`] on nonnegative values and is the degree-n
/// polynomial that polarization acts on.
pub fn signed_volume(grid: &SphereGrid, values: &[f64]) -> f64 {
    let n = grid.dim();
    let mut sum = KahanSum::new();
    for (w, v) in grid.weights().iter().zip(values) {
        let mut p = 1.0;
        for _ in 0..n {
            p *= v;
        }
        sum.add(w * p);
    }
    sum.value() / n as f64
}
