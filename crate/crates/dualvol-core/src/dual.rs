//! Dual mixed volumes, the Lutwak expansion verifier, and polarization.

use alloc::vec::Vec;

use crate::body::{RadialFunction, StarBodySpec};
use crate::error::{Error, Result};
use crate::grid::SphereGrid;
use crate::KahanSum;

/// Ṽ(L_1,…,L_n) = (1/n)·Σ_i w_i·Π_j ρ_{L_j}(u_i). Requires exactly
/// n = grid.dim arguments on the grid.
pub fn dual_mixed_volume(grid: &SphereGrid, fs: &[&RadialFunction]) -> Result<f64> {
    let n = grid.dim();
    if fs.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: fs.len(),
        });
    }
    for f in fs {
        if f.len() != grid.len() {
            return Err(Error::GridMismatch {
                expected: grid.len(),
                got: f.len(),
            });
        }
    }
    let mut sum = KahanSum::new();
    let mut factors = alloc::vec![0.0f64; n];
    for (i, w) in grid.weights().iter().enumerate() {
        // factors multiplied in sorted order so the result is bit-exact
        // under permutation of the arguments
        for (slot, f) in factors.iter_mut().zip(fs) {
            *slot = f.values()[i];
        }
        factors.sort_unstable_by(f64::total_cmp);
        let mut p = *w;
        for v in &factors {
            p *= v;
        }
        sum.add(p);
    }
    Ok(sum.value() / n as f64)
}

/// Both sides of the Lutwak expansion
/// |λ_1 L_1 +̃ … +̃ λ_m L_m| = Σ_{i_1..i_n} λ_{i_1}⋯λ_{i_n} Ṽ(L_{i_1},…,L_{i_n}).
#[derive(Debug, Clone, PartialEq)]
pub struct LutwakReport {
    pub direct: f64,
    pub expanded: f64,
    pub abs_diff: f64,
}

/// Computes the volume of the radial combination directly and by the full
/// mⁿ-term dual-mixed-volume expansion. The two sides are the same
/// polynomial in the sampled values, so the difference is pure roundoff.
pub fn lutwak_check(
    grid: &SphereGrid,
    specs: &[StarBodySpec],
    lambdas: &[f64],
) -> Result<LutwakReport> {
    let m = specs.len();
    if m == 0 || lambdas.len() != m {
        return Err(Error::ArityMismatch {
            expected: m.max(1),
            got: lambdas.len(),
        });
    }
    for l in lambdas {
        if !(*l >= 0.0) {
            return Err(Error::NegativeScale(*l));
        }
    }
    let samples: Vec<RadialFunction> = specs
        .iter()
        .map(|s| s.sample(grid))
        .collect::<Result<_>>()?;

    let mut combo = RadialFunction::zero(grid.len());
    for (f, l) in samples.iter().zip(lambdas) {
        combo = combo.radial_sum(&f.scale(*l)?)?;
    }
    let direct = combo.volume(grid)?;

    // all ordered index tuples (i_1, …, i_n) ∈ {0..m}^n
    let n = grid.dim();
    let mut expanded = KahanSum::new();
    let mut idx = alloc::vec![0usize; n];
    loop {
        let mut coeff = 1.0;
        for &i in &idx {
            coeff *= lambdas[i];
        }
        let tuple: Vec<&RadialFunction> = idx.iter().map(|&i| &samples[i]).collect();
        expanded.add(coeff * dual_mixed_volume(grid, &tuple)?);
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == n {
                let expanded = expanded.value();
                return Ok(LutwakReport {
                    direct,
                    expanded,
                    abs_diff: (direct - expanded).abs(),
                });
            }
            idx[pos] += 1;
            if idx[pos] == m {
                idx[pos] = 0;
                pos += 1;
            } else {
                break;
            }
        }
    }
}

/// P(f) = T(f,…,f) for an m-linear evaluator T.
pub fn polynomial_value<T>(t: T, arity: usize, f: &RadialFunction) -> Result<f64>
where
    T: Fn(&[&RadialFunction]) -> Result<f64>,
{
    let args: Vec<&RadialFunction> = (0..arity).map(|_| f).collect();
    t(&args)
}

/// Polarization of an n-homogeneous evaluator `p` over grid functions:
/// (1/(n!·2ⁿ))·Σ_{ε∈{−1,1}ⁿ} ε_1⋯ε_n · p(Σ_j ε_j f_j).
///
/// Normalized so that equal arguments return p exactly. `p` must accept
/// signed node values (use `functional::tf_extend`-style extension first
/// when it originates from bodies).
pub fn polarize<P>(p: P, n: usize, fs: &[&[f64]]) -> Result<f64>
where
    P: Fn(&[f64]) -> f64,
{
    if fs.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: fs.len(),
        });
    }
    let len = fs.first().map(|f| f.len()).unwrap_or(0);
    for f in fs {
        if f.len() != len {
            return Err(Error::GridMismatch {
                expected: len,
                got: f.len(),
            });
        }
    }
    let mut acc = KahanSum::new();
    let mut combo = alloc::vec![0.0; len];
    for mask in 0u32..(1 << n) {
        let mut sign = 1.0;
        combo.iter_mut().for_each(|c| *c = 0.0);
        for (j, f) in fs.iter().enumerate() {
            let eps = if mask & (1 << j) == 0 { 1.0 } else { -1.0 };
            sign *= eps;
            for (c, v) in combo.iter_mut().zip(*f) {
                *c += eps * v;
            }
        }
        acc.add(sign * p(&combo));
    }
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    Ok(acc.value() / (factorial * (1u64 << n) as f64))
}
