//! Body functionals F: S_0^m → ℝ and the executable characterization
//! harness: vanishing on essentially disjoint tuples, symmetry, orthogonal
//! additivity of the associated polynomial, measure recovery, violation
//! witnesses, and the rotation-invariance reduction to c·Ṽ.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::body::{RadialFunction, StarBodySpec};
use crate::error::{Error, Result};
use crate::grid::{Rotation, SphereGrid};
use crate::polymeasure::{FinitePartition, PolyMeasure};

/// Relative tolerance for all harness checks: violations are compared
/// against 1e-9 · scale(F), never against an absolute threshold, because F
/// is homogeneous of degree m.
pub const CHECK_REL_TOL: f64 = 1e-9;

type BoxedEvaluator = Box<dyn Fn(&[&[f64]]) -> f64 + Send + Sync>;

/// What an F is backed by.
pub enum Backing {
    /// F(f_1,…,f_m) = Σ_i μ_i·Π_j f_j(i), one mass per grid node.
    Diagonal(Vec<f64>),
    /// F = ∫(f_1,…,f_m) dγ with node-level atoms.
    Tensor(PolyMeasure),
    /// Declared separately additive and positively homogeneous; probed, not
    /// assumed.
    BlackBox(BoxedEvaluator),
}

impl core::fmt::Debug for Backing {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Backing::Diagonal(m) => write!(f, "Diagonal({} masses)", m.len()),
            Backing::Tensor(g) => write!(f, "Tensor(order {})", g.order()),
            Backing::BlackBox(_) => write!(f, "BlackBox"),
        }
    }
}

#[derive(Debug)]
pub struct BodyFunctional {
    arity: usize,
    num_nodes: usize,
    backing: Backing,
}

impl BodyFunctional {
    /// F(f_1,…,f_m) = Σ_i μ_i·Π_j f_j(i).
    pub fn from_measure(masses: Vec<f64>, arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ArityMismatch {
                expected: 1,
                got: 0,
            });
        }
        if let Some(i) = masses.iter().position(|m| !m.is_finite()) {
            return Err(Error::NonFiniteEntry { index: i });
        }
        Ok(Self {
            arity,
            num_nodes: masses.len(),
            backing: Backing::Diagonal(masses),
        })
    }

    /// F = ∫(f_1,…,f_m) dγ. The partition must be node-level, otherwise
    /// sampled bodies would not be simple functions.
    pub fn from_polymeasure(gamma: PolyMeasure, partition: &FinitePartition) -> Result<Self> {
        if !partition.is_node_level() || partition.num_atoms() != gamma.num_atoms() {
            return Err(Error::NotNodeLevel {
                atoms: gamma.num_atoms(),
                nodes: partition.num_nodes(),
            });
        }
        Ok(Self {
            arity: gamma.order(),
            num_nodes: gamma.num_atoms(),
            backing: Backing::Tensor(gamma),
        })
    }

    pub fn black_box(arity: usize, num_nodes: usize, f: BoxedEvaluator) -> Self {
        Self {
            arity,
            num_nodes,
            backing: Backing::BlackBox(f),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    fn check_args(&self, args: &[&[f64]]) -> Result<()> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        for a in args {
            if a.len() != self.num_nodes {
                return Err(Error::GridMismatch {
                    expected: self.num_nodes,
                    got: a.len(),
                });
            }
        }
        Ok(())
    }

    /// Evaluates F on node-value tuples (nonnegative for BlackBox backings;
    /// Diagonal and Tensor contractions are defined on any values).
    pub fn eval(&self, args: &[&[f64]]) -> Result<f64> {
        self.check_args(args)?;
        match &self.backing {
            Backing::Diagonal(masses) => {
                // sorted factor order keeps F bit-exactly symmetric
                let mut factors = alloc::vec![0.0f64; self.arity];
                let mut sum = 0.0;
                for (i, mu) in masses.iter().enumerate() {
                    if *mu == 0.0 {
                        continue;
                    }
                    for (slot, a) in factors.iter_mut().zip(args) {
                        *slot = a[i];
                    }
                    factors.sort_unstable_by(f64::total_cmp);
                    let mut p = 1.0;
                    for v in &factors {
                        p *= v;
                    }
                    sum += mu * p;
                }
                Ok(sum)
            }
            Backing::Tensor(gamma) => gamma.contract_atoms(args),
            Backing::BlackBox(f) => Ok(f(args)),
        }
    }

    pub fn eval_bodies(&self, fs: &[&RadialFunction]) -> Result<f64> {
        let vals: Vec<&[f64]> = fs.iter().map(|f| f.values()).collect();
        self.eval(&vals)
    }

    /// The associated polynomial P_F(f) = F(f,…,f).
    pub fn polynomial(&self, f: &[f64]) -> Result<f64> {
        let args: Vec<&[f64]> = (0..self.arity).map(|_| f).collect();
        self.eval(&args)
    }

    /// Extends F to arbitrary signed grid functions by the alternating
    /// 2^m-term expansion over pointwise positive/negative parts. BlackBox
    /// backings are probed for separate additivity and positive homogeneity
    /// first; Diagonal/Tensor backings coincide with direct contraction.
    pub fn tf_extend(&self, probe_seed: u64) -> Result<SignedEvaluator<'_>> {
        if matches!(self.backing, Backing::BlackBox(_)) {
            self.probe_additive_homogeneous(probe_seed)?;
        }
        Ok(SignedEvaluator { f: self })
    }

    /// Property probe for BlackBox backings: separate additivity and
    /// positive homogeneity on random nonnegative tuples. No-op certainty is
    /// not claimed; a failure comes with the violating tuple.
    pub fn probe_additive_homogeneous(&self, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.num_nodes;
        let rand_fn = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..n).map(|_| rng.gen_range(0.0..2.0)).collect()
        };
        for _ in 0..8 {
            for slot in 0..self.arity {
                let fixed: Vec<Vec<f64>> = (0..self.arity).map(|_| rand_fn(&mut rng)).collect();
                let f = rand_fn(&mut rng);
                let g = rand_fn(&mut rng);
                let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
                let with = |h: &[f64]| -> Result<f64> {
                    let args: Vec<&[f64]> = fixed
                        .iter()
                        .enumerate()
                        .map(|(j, v)| if j == slot { h } else { v.as_slice() })
                        .collect();
                    self.eval(&args)
                };
                let lhs = with(&sum)?;
                let rhs = with(&f)? + with(&g)?;
                let tol = CHECK_REL_TOL * lhs.abs().max(rhs.abs()).max(1.0);
                if (lhs - rhs).abs() > tol {
                    return Err(Error::ProbeFailed {
                        property: "separate additivity",
                        witness: format!("slot {slot}: {lhs} vs {rhs}"),
                    });
                }
                let lambda = rng.gen_range(0.0..3.0);
                let scaled: Vec<f64> = f.iter().map(|v| lambda * v).collect();
                let lhs = with(&scaled)?;
                let rhs = lambda * with(&f)?;
                let tol = CHECK_REL_TOL * lhs.abs().max(rhs.abs()).max(1.0);
                if (lhs - rhs).abs() > tol {
                    return Err(Error::ProbeFailed {
                        property: "positive homogeneity",
                        witness: format!("slot {slot}, λ = {lambda}: {lhs} vs {rhs}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// T_F on signed grid functions; see [`BodyFunctional::tf_extend`].
pub struct SignedEvaluator<'a> {
    f: &'a BodyFunctional,
}

impl SignedEvaluator<'_> {
    pub fn eval(&self, args: &[&[f64]]) -> Result<f64> {
        self.f.check_args(args)?;
        let parts: Vec<(Vec<f64>, Vec<f64>)> = args
            .iter()
            .map(|a| {
                let pos: Vec<f64> = a.iter().map(|v| v.max(0.0)).collect();
                let neg: Vec<f64> = a.iter().map(|v| (-v).max(0.0)).collect();
                (pos, neg)
            })
            .collect();
        let m = self.f.arity;
        let mut total = 0.0;
        for mask in 0u32..(1 << m) {
            let sign = if (mask.count_ones() & 1) == 0 { 1.0 } else { -1.0 };
            let tuple: Vec<&[f64]> = parts
                .iter()
                .enumerate()
                .map(|(j, (pos, neg))| {
                    if mask & (1 << j) == 0 {
                        pos.as_slice()
                    } else {
                        neg.as_slice()
                    }
                })
                .collect();
            total += sign * self.f.eval(&tuple)?;
        }
        Ok(total)
    }
}

/// One harness check: max violation over trials against 1e-9·scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub max_violation: f64,
    pub scale: f64,
    pub pass: bool,
    pub witness: Option<String>,
}

impl CheckReport {
    fn build(name: &'static str, max_violation: f64, scale: f64, witness: Option<String>) -> Self {
        let pass = max_violation <= CHECK_REL_TOL * scale;
        CheckReport {
            name,
            max_violation,
            scale,
            pass,
            witness: if pass { None } else { witness },
        }
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Random CapBump with center on a grid node, width in [π/16, π/4], height
/// in [0.1, 2].
fn random_bump(grid: &SphereGrid, rng: &mut ChaCha8Rng) -> StarBodySpec {
    let node = rng.gen_range(0..grid.len());
    StarBodySpec::CapBump {
        center: grid.nodes()[node].clone(),
        width: rng.gen_range(core::f64::consts::PI / 16.0..core::f64::consts::PI / 4.0),
        height: rng.gen_range(0.1..2.0),
    }
}

fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    libm::acos(dot.clamp(-1.0, 1.0))
}

fn bump_parts(spec: &StarBodySpec) -> (&[f64], f64) {
    match spec {
        StarBodySpec::CapBump { center, width, .. } => (center, *width),
        _ => unreachable!("harness generates CapBumps only"),
    }
}

/// m-tuple of bumps in which the first two have disjoint angular supports
/// (center separation > sum of widths). m must be ≥ 2.
fn random_disjoint_tuple(grid: &SphereGrid, m: usize, rng: &mut ChaCha8Rng) -> Vec<StarBodySpec> {
    loop {
        let tuple: Vec<StarBodySpec> = (0..m).map(|_| random_bump(grid, rng)).collect();
        let (c0, w0) = bump_parts(&tuple[0]);
        let (c1, w1) = bump_parts(&tuple[1]);
        if angle_between(c0, c1) > w0 + w1 {
            return tuple;
        }
    }
}

/// m-tuple of bumps sharing one center: every pair overlaps.
fn random_control_tuple(grid: &SphereGrid, m: usize, rng: &mut ChaCha8Rng) -> Vec<StarBodySpec> {
    let node = rng.gen_range(0..grid.len());
    (0..m)
        .map(|_| StarBodySpec::CapBump {
            center: grid.nodes()[node].clone(),
            width: rng.gen_range(core::f64::consts::PI / 16.0..core::f64::consts::PI / 4.0),
            height: rng.gen_range(0.1..2.0),
        })
        .collect()
}

fn sample_tuple(grid: &SphereGrid, specs: &[StarBodySpec]) -> Result<Vec<RadialFunction>> {
    specs.iter().map(|s| s.sample(grid)).collect()
}

fn eval_sampled(f: &BodyFunctional, sampled: &[RadialFunction]) -> Result<f64> {
    let refs: Vec<&RadialFunction> = sampled.iter().collect();
    f.eval_bodies(&refs)
}

/// scale(F): max |F| over `trials` overlapping control tuples.
fn measure_scale(
    f: &BodyFunctional,
    grid: &SphereGrid,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let mut scale = 0.0f64;
    for t in 0..trials {
        let mut rng = trial_rng(seed, 1_000_000 + t as u64);
        let tuple = random_control_tuple(grid, f.arity(), &mut rng);
        let v = eval_sampled(f, &sample_tuple(grid, &tuple)?)?;
        scale = scale.max(v.abs());
    }
    Ok(scale)
}

/// Characterization condition (1): F must vanish on tuples containing an essentially
/// disjoint pair. Random disjoint CapBump tuples; for Tensor backings the
/// largest off-diagonal entries are additionally probed with single-node
/// bump tuples, which pin the violation exactly.
pub fn check_vanishing_on_disjoint(
    f: &BodyFunctional,
    grid: &SphereGrid,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let name = "vanishing_on_disjoint";
    if f.arity() < 2 {
        // no pair of arguments can be disjoint
        return Ok(CheckReport::build(name, 0.0, 0.0, None));
    }
    let scale = measure_scale(f, grid, trials, seed)?;
    let mut max_violation = 0.0f64;
    let mut witness = None;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let tuple = random_disjoint_tuple(grid, f.arity(), &mut rng);
        let v = eval_sampled(f, &sample_tuple(grid, &tuple)?)?.abs();
        if v > max_violation {
            max_violation = v;
            witness = Some(format!("random disjoint tuple, trial {t}, |F| = {v}"));
        }
    }
    if let Backing::Tensor(gamma) = f.backing() {
        if let Ok(w) = find_violation_witness(gamma, grid) {
            let v = w.value.abs();
            if v > max_violation {
                max_violation = v;
                witness = Some(format!(
                    "single-node bumps at atoms {:?}, |F| = {v}",
                    w.atoms
                ));
            }
        }
    }
    Ok(CheckReport::build(name, max_violation, scale, witness))
}

/// Characterization condition (2), symmetry half: |F(tuple) − F(permuted tuple)|
/// over random tuples and random argument permutations.
pub fn check_symmetry(
    f: &BodyFunctional,
    grid: &SphereGrid,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let name = "symmetry";
    let m = f.arity();
    let mut max_violation = 0.0f64;
    let mut scale = 0.0f64;
    let mut witness = None;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let tuple = (0..m)
            .map(|_| random_bump(grid, &mut rng))
            .collect::<Vec<_>>();
        let sampled = sample_tuple(grid, &tuple)?;
        // Fisher-Yates
        let mut perm: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            let j = rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        let base = eval_sampled(f, &sampled)?;
        let permuted: Vec<RadialFunction> = perm.iter().map(|&i| sampled[i].clone()).collect();
        let other = eval_sampled(f, &permuted)?;
        scale = scale.max(base.abs()).max(other.abs());
        let v = (base - other).abs();
        if v > max_violation {
            max_violation = v;
            witness = Some(format!("trial {t}, permutation {perm:?}: {base} vs {other}"));
        }
    }
    Ok(CheckReport::build(name, max_violation, scale, witness))
}

/// Characterization condition (2), orthogonal-additivity half:
/// P_F(L +̃ M) = P_F(L) + P_F(M) on random essentially disjoint pairs.
pub fn check_poly_orthogonal_additivity(
    f: &BodyFunctional,
    grid: &SphereGrid,
    trials: usize,
    seed: u64,
) -> Result<CheckReport> {
    let name = "poly_orthogonal_additivity";
    let mut max_violation = 0.0f64;
    let mut scale = 0.0f64;
    let mut witness = None;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t as u64);
        let pair = random_disjoint_tuple(grid, 2, &mut rng);
        let l = pair[0].sample(grid)?;
        let m = pair[1].sample(grid)?;
        let sum = l.radial_sum(&m)?;
        let p_sum = f.polynomial(sum.values())?;
        let p_l = f.polynomial(l.values())?;
        let p_m = f.polynomial(m.values())?;
        scale = scale.max(p_sum.abs()).max(p_l.abs() + p_m.abs());
        let v = (p_sum - p_l - p_m).abs();
        if v > max_violation {
            max_violation = v;
            witness = Some(format!("trial {t}: P(L+̃M) = {p_sum}, P(L)+P(M) = {}", p_l + p_m));
        }
    }
    Ok(CheckReport::build(name, max_violation, scale, witness))
}

/// Recovers the node measure ν with P(f) = Σ_i ν_i f_iⁿ from an
/// orthogonally additive n-homogeneous polynomial: ν_i = P(χ_{node i}).
/// Both properties are probed before recovery, and the representation is
/// validated on random functions afterwards.
pub fn recover_measure_from_polynomial<P>(
    p: P,
    degree: usize,
    num_nodes: usize,
    seed: u64,
) -> Result<Vec<f64>>
where
    P: Fn(&[f64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rand_fn = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..num_nodes).map(|_| rng.gen_range(0.0..2.0)).collect()
    };
    // homogeneity probe
    for _ in 0..8 {
        let f = rand_fn(&mut rng);
        let lambda: f64 = rng.gen_range(0.1..3.0);
        let scaled: Vec<f64> = f.iter().map(|v| lambda * v).collect();
        let lhs = p(&scaled);
        let rhs = libm::pow(lambda, degree as f64) * p(&f);
        if (lhs - rhs).abs() > CHECK_REL_TOL * lhs.abs().max(rhs.abs()).max(1.0) {
            return Err(Error::ProbeFailed {
                property: "homogeneity",
                witness: format!("λ = {lambda}: {lhs} vs {rhs}"),
            });
        }
    }
    // orthogonal additivity probe on disjointly supported pairs
    for _ in 0..8 {
        let f = rand_fn(&mut rng);
        let g = rand_fn(&mut rng);
        let split: Vec<bool> = (0..num_nodes).map(|_| rng.gen::<bool>()).collect();
        let f: Vec<f64> = f
            .iter()
            .zip(&split)
            .map(|(v, s)| if *s { *v } else { 0.0 })
            .collect();
        let g: Vec<f64> = g
            .iter()
            .zip(&split)
            .map(|(v, s)| if *s { 0.0 } else { *v })
            .collect();
        let sum: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let lhs = p(&sum);
        let rhs = p(&f) + p(&g);
        if (lhs - rhs).abs() > CHECK_REL_TOL * lhs.abs().max(rhs.abs()).max(1.0) {
            return Err(Error::ProbeFailed {
                property: "orthogonal additivity",
                witness: format!("{lhs} vs {rhs}"),
            });
        }
    }
    // ν_i = P(χ_i)
    let mut chi = alloc::vec![0.0; num_nodes];
    let mut nu = Vec::with_capacity(num_nodes);
    for i in 0..num_nodes {
        chi[i] = 1.0;
        nu.push(p(&chi));
        chi[i] = 0.0;
    }
    // validation on random simple functions
    for _ in 0..100 {
        let f = rand_fn(&mut rng);
        let direct = p(&f);
        let via_nu: f64 = nu
            .iter()
            .zip(&f)
            .map(|(n_i, v)| n_i * libm::pow(*v, degree as f64))
            .sum();
        if (direct - via_nu).abs() > CHECK_REL_TOL * direct.abs().max(via_nu.abs()).max(1.0) {
            return Err(Error::ProbeFailed {
                property: "measure representation",
                witness: format!("P(f) = {direct}, Σ ν fⁿ = {via_nu}"),
            });
        }
    }
    Ok(nu)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReduceReport {
    /// Fitted constant with F = c·Ṽ.
    pub c: f64,
    /// max_i |μ_i − c·w_i/n| after the fit.
    pub residual: f64,
    /// max over rotations and nodes of |μ_{π(i)} − μ_i|.
    pub invariance_residual: f64,
}

/// Rotation-invariance reduction: if the diagonal backing measure μ is
/// invariant under a rotation set acting transitively on the nodes, then
/// μ = c·(weights/n) and F = c·Ṽ. Refuses non-transitive rotation sets.
pub fn reduce_rotation_invariant(
    masses: &[f64],
    grid: &SphereGrid,
    rotations: &[Rotation],
    invariance_tol: f64,
) -> Result<ReduceReport> {
    if masses.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            got: masses.len(),
        });
    }
    let perms: Vec<Vec<usize>> = rotations
        .iter()
        .map(|r| grid.permutation_under(r))
        .collect::<Result<_>>()?;
    // transitivity: orbit of node 0 must cover all nodes
    let mut seen = alloc::vec![false; grid.len()];
    let mut stack = alloc::vec![0usize];
    seen[0] = true;
    let mut orbit = 1usize;
    while let Some(i) = stack.pop() {
        for perm in &perms {
            let j = perm[i];
            if !seen[j] {
                seen[j] = true;
                orbit += 1;
                stack.push(j);
            }
        }
    }
    if orbit != grid.len() {
        return Err(Error::NotTransitive {
            orbit_size: orbit,
            nodes: grid.len(),
        });
    }
    // invariance μ∘π = μ
    let mut invariance_residual = 0.0f64;
    let mut worst_node = 0usize;
    for perm in &perms {
        for (i, &j) in perm.iter().enumerate() {
            let r = (masses[j] - masses[i]).abs();
            if r > invariance_residual {
                invariance_residual = r;
                worst_node = i;
            }
        }
    }
    if invariance_residual > invariance_tol {
        return Err(Error::NotInvariant {
            node: worst_node,
            residual: invariance_residual,
        });
    }
    let n = grid.dim() as f64;
    let total_mu: f64 = masses.iter().sum();
    let total_w: f64 = grid.weights().iter().sum::<f64>() / n;
    let c = total_mu / total_w;
    let residual = masses
        .iter()
        .zip(grid.weights())
        .map(|(mu, w)| (mu - c * w / n).abs())
        .fold(0.0f64, f64::max);
    Ok(ReduceReport {
        c,
        residual,
        invariance_residual,
    })
}

/// Certified failure of condition (1) for a non-diagonal polymeasure:
/// single-node bump bodies on the witness atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationWitness {
    pub bodies: Vec<StarBodySpec>,
    pub atoms: Vec<usize>,
    /// F evaluated on the witness tuple; |value| ≥ |off-diagonal entry| − 1e-9.
    pub value: f64,
}

/// Builds the witness tuple for a non-diagonal γ over node-level atoms:
/// CapBumps of height 1 supported exactly on the witness atoms' nodes, so
/// F(tuple) reproduces the off-diagonal entry. At least two bodies are
/// essentially disjoint, demonstrating the failure of condition (1).
pub fn find_violation_witness(
    gamma: &PolyMeasure,
    grid: &SphereGrid,
) -> Result<ViolationWitness> {
    if gamma.num_atoms() != grid.len() {
        return Err(Error::NotNodeLevel {
            atoms: gamma.num_atoms(),
            nodes: grid.len(),
        });
    }
    let atoms = gamma.diagonal_witness(0.0).ok_or(Error::AlreadyDiagonal)?;
    let gap = grid.min_angular_gap();
    // support must be a single node: width strictly below the node spacing
    let width = 0.9 * gap;
    if !(width > 1e-12) {
        return Err(Error::NotSeparable);
    }
    let bodies: Vec<StarBodySpec> = atoms
        .iter()
        .map(|&j| StarBodySpec::CapBump {
            center: grid.nodes()[j].clone(),
            width,
            height: 1.0,
        })
        .collect();
    let f = BodyFunctional::from_polymeasure(
        gamma.clone(),
        &FinitePartition::node_level(grid.len()),
    )?;
    let sampled = sample_tuple(grid, &bodies)?;
    let value = eval_sampled(&f, &sampled)?;
    let entry = gamma.entry(&atoms)?;
    if value.abs() + 1e-9 < entry.abs() {
        return Err(Error::NotSeparable);
    }
    Ok(ViolationWitness {
        bodies,
        atoms,
        value,
    })
}
