//! Finite polymeasures: order-m tensors over partition atoms.
//!
//! A polymeasure γ: Σ × ⋯ × Σ → ℝ on a finite atomic algebra is determined
//! by its values on atom tuples, an order-m tensor with k^m entries.
//! Separate additivity holds by construction (finite sums over atoms).

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Size cap on exact semivariation: order · atoms ≤ 24.
pub const SEMIVARIATION_EXACT_CAP: usize = 24;

/// Disjoint nonempty node-index sets covering all grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePartition {
    num_nodes: usize,
    atoms: Vec<Vec<usize>>,
    atom_of: Vec<usize>,
}

impl FinitePartition {
    pub fn new(num_nodes: usize, atoms: Vec<Vec<usize>>) -> Result<Self> {
        let mut atom_of = alloc::vec![usize::MAX; num_nodes];
        for (a, nodes) in atoms.iter().enumerate() {
            if nodes.is_empty() {
                return Err(Error::InvalidPartition(format!("atom {a} is empty")));
            }
            for &i in nodes {
                if i >= num_nodes {
                    return Err(Error::InvalidPartition(format!(
                        "node {i} out of range in atom {a}"
                    )));
                }
                if atom_of[i] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "node {i} in atoms {} and {a}",
                        atom_of[i]
                    )));
                }
                atom_of[i] = a;
            }
        }
        if let Some(i) = atom_of.iter().position(|&a| a == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {i} uncovered")));
        }
        Ok(Self {
            num_nodes,
            atoms,
            atom_of,
        })
    }

    /// One atom per node; every grid function is simple on this partition.
    pub fn node_level(num_nodes: usize) -> Self {
        Self {
            num_nodes,
            atoms: (0..num_nodes).map(|i| alloc::vec![i]).collect(),
            atom_of: (0..num_nodes).collect(),
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[Vec<usize>] {
        &self.atoms
    }

    pub fn atom_of(&self, node: usize) -> usize {
        self.atom_of[node]
    }

    pub fn is_node_level(&self) -> bool {
        self.num_nodes == self.atoms.len()
    }

    /// Per-atom constants of a node-level function, or an error naming the
    /// first atom on which it is not constant.
    pub fn atom_values(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.num_nodes {
            return Err(Error::LengthMismatch {
                expected: self.num_nodes,
                got: f.len(),
            });
        }
        let mut out = Vec::with_capacity(self.atoms.len());
        for (a, nodes) in self.atoms.iter().enumerate() {
            let v = f[nodes[0]];
            if nodes.iter().any(|&i| f[i] != v) {
                return Err(Error::NotAtomwiseConstant { atom: a });
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Order-m tensor over k atoms, entry[j_1,…,j_m] = γ(atom_{j_1},…,atom_{j_m}).
/// Row-major layout, immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMeasure {
    order: usize,
    num_atoms: usize,
    entries: Vec<f64>,
}

/// Semivariation value with attainment status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Semivariation {
    pub value: f64,
    /// False when produced by randomized sampling: the value is then only a
    /// certified lower bound.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SemivariationMode {
    Exact,
    Randomized { seed: u64 },
}

impl PolyMeasure {
    pub fn new(order: usize, num_atoms: usize, entries: Vec<f64>) -> Result<Self> {
        if order == 0 || num_atoms == 0 {
            return Err(Error::InvalidSpec("order and atom count must be ≥ 1".into()));
        }
        let expected = num_atoms.pow(order as u32);
        if entries.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: entries.len(),
            });
        }
        if let Some(i) = entries.iter().position(|e| !e.is_finite()) {
            return Err(Error::NonFiniteEntry { index: i });
        }
        Ok(Self {
            order,
            num_atoms,
            entries,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_atoms(&self) -> usize {
        self.num_atoms
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn entry(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.entries[self.flat_index(idx)?])
    }

    fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.order {
            return Err(Error::ArityMismatch {
                expected: self.order,
                got: idx.len(),
            });
        }
        let mut flat = 0;
        for &j in idx {
            if j >= self.num_atoms {
                return Err(Error::AtomOutOfRange {
                    index: j,
                    atoms: self.num_atoms,
                });
            }
            flat = flat * self.num_atoms + j;
        }
        Ok(flat)
    }

    /// Decodes a flat entry index into its atom-index tuple.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = alloc::vec![0usize; self.order];
        for slot in idx.iter_mut().rev() {
            *slot = flat % self.num_atoms;
            flat /= self.num_atoms;
        }
        idx
    }

    /// γ(A_1,…,A_m) on arbitrary unions of atoms: Σ over index tuples drawn
    /// from the given sets.
    pub fn evaluate(&self, sets: &[Vec<usize>]) -> Result<f64> {
        if sets.len() != self.order {
            return Err(Error::ArityMismatch {
                expected: self.order,
                got: sets.len(),
            });
        }
        for set in sets {
            for &j in set {
                if j >= self.num_atoms {
                    return Err(Error::AtomOutOfRange {
                        index: j,
                        atoms: self.num_atoms,
                    });
                }
            }
        }
        if sets.iter().any(|s| s.is_empty()) {
            return Ok(0.0);
        }
        // The last factor advances fastest, matching the rectangle order of
        // `rectangle_atoms`, so product-measure masses agree bit-exactly.
        let mut sum = 0.0;
        let mut pick = alloc::vec![0usize; self.order];
        'outer: loop {
            let idx: Vec<usize> = pick.iter().enumerate().map(|(f, &p)| sets[f][p]).collect();
            sum += self.entries[self.flat_index(&idx)?];
            let mut pos = self.order;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                pick[pos] += 1;
                if pick[pos] == sets[pos].len() {
                    pick[pos] = 0;
                } else {
                    break;
                }
            }
        }
        Ok(sum)
    }

    /// v(γ)(S,…,S) = Σ |entries|. On a finite atomic algebra the supremum
    /// over partitions is attained at the atomic partition.
    ///
    /// Positive and negative entries are accumulated separately, so
    /// variation(γ⁺) + variation(γ⁻) = variation(γ) holds bit-exactly for
    /// the Jordan parts.
    pub fn variation(&self) -> f64 {
        let mut pos = 0.0f64;
        let mut neg = 0.0f64;
        for e in &self.entries {
            if *e > 0.0 {
                pos += e;
            } else if *e < 0.0 {
                neg += -e;
            }
        }
        pos + neg
    }

    /// Contraction against per-atom values: Σ_{j_1..j_m} Π_i vals_i[j_i] · entry.
    pub fn contract_atoms(&self, atom_vals: &[&[f64]]) -> Result<f64> {
        if atom_vals.len() != self.order {
            return Err(Error::ArityMismatch {
                expected: self.order,
                got: atom_vals.len(),
            });
        }
        for v in atom_vals {
            if v.len() != self.num_atoms {
                return Err(Error::LengthMismatch {
                    expected: self.num_atoms,
                    got: v.len(),
                });
            }
        }
        let k = self.num_atoms;
        let mut sum = 0.0;
        for (flat, e) in self.entries.iter().enumerate() {
            if *e == 0.0 {
                continue;
            }
            let mut p = *e;
            let mut rem = flat;
            for f in (0..self.order).rev() {
                p *= atom_vals[f][rem % k];
                rem /= k;
            }
            sum += p;
        }
        Ok(sum)
    }

    /// Elementary integral ∫(f_1,…,f_m) dγ of atom-wise-constant node
    /// functions over `partition`.
    pub fn integrate_simple(
        &self,
        partition: &FinitePartition,
        simples: &[&[f64]],
    ) -> Result<f64> {
        if partition.num_atoms() != self.num_atoms {
            return Err(Error::LengthMismatch {
                expected: self.num_atoms,
                got: partition.num_atoms(),
            });
        }
        let atom_vals: Vec<Vec<f64>> = simples
            .iter()
            .map(|f| partition.atom_values(f))
            .collect::<Result<_>>()?;
        let refs: Vec<&[f64]> = atom_vals.iter().map(|v| v.as_slice()).collect();
        self.contract_atoms(&refs)
    }

    /// Entrywise positive/negative parts: γ = γ⁺ − γ⁻ with
    /// variation(γ⁺) + variation(γ⁻) = variation(γ).
    pub fn jordan_decomposition(&self) -> (PolyMeasure, PolyMeasure) {
        let pos = self.entries.iter().map(|e| e.max(0.0)).collect();
        let neg = self.entries.iter().map(|e| (-e).max(0.0)).collect();
        (
            PolyMeasure {
                order: self.order,
                num_atoms: self.num_atoms,
                entries: pos,
            },
            PolyMeasure {
                order: self.order,
                num_atoms: self.num_atoms,
                entries: neg,
            },
        )
    }

    /// The order-1 measure on the product atom grid (k^m atoms) with
    /// γ_m(A_1×⋯×A_m) = γ(A_1,…,A_m) on rectangles.
    pub fn product_measure(&self) -> PolyMeasure {
        PolyMeasure {
            order: 1,
            num_atoms: self.entries.len(),
            entries: self.entries.clone(),
        }
    }

    /// Flat product-atom indices of the rectangle A_1×⋯×A_m.
    pub fn rectangle_atoms(&self, sets: &[Vec<usize>]) -> Result<Vec<usize>> {
        if sets.len() != self.order {
            return Err(Error::ArityMismatch {
                expected: self.order,
                got: sets.len(),
            });
        }
        let mut out = alloc::vec![0usize];
        for set in sets {
            let mut next = Vec::with_capacity(out.len() * set.len());
            for &base in &out {
                for &j in set {
                    if j >= self.num_atoms {
                        return Err(Error::AtomOutOfRange {
                            index: j,
                            atoms: self.num_atoms,
                        });
                    }
                    next.push(base * self.num_atoms + j);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Maximal-magnitude off-diagonal entry above `tol`, if any.
    pub fn diagonal_witness(&self, tol: f64) -> Option<Vec<usize>> {
        let mut best: Option<(usize, f64)> = None;
        for (flat, e) in self.entries.iter().enumerate() {
            let idx = self.multi_index(flat);
            if idx.windows(2).all(|w| w[0] == w[1]) {
                continue;
            }
            if e.abs() > tol && best.map_or(true, |(_, b)| e.abs() > b) {
                best = Some((flat, e.abs()));
            }
        }
        best.map(|(flat, _)| self.multi_index(flat))
    }

    /// True iff every entry with indices not all equal has |entry| ≤ tol.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.diagonal_witness(tol).is_none()
    }

    /// μ(atom_j) = entry[j,…,j]; requires diagonality within `tol`.
    pub fn diagonal_measure(&self, tol: f64) -> Result<Vec<f64>> {
        if let Some(witness) = self.diagonal_witness(tol) {
            return Err(Error::NotDiagonal { witness });
        }
        Ok((0..self.num_atoms)
            .map(|j| {
                let idx = alloc::vec![j; self.order];
                self.entries[self.flat_index(&idx).expect("diagonal index")]
            })
            .collect())
    }

    /// Merges atoms per `mapping` (old atom → new atom), summing entries.
    /// Refinement can only increase variation, so the coarsened tensor has
    /// variation ≤ the original.
    pub fn coarsen(&self, mapping: &[usize], new_atoms: usize) -> Result<PolyMeasure> {
        if mapping.len() != self.num_atoms {
            return Err(Error::LengthMismatch {
                expected: self.num_atoms,
                got: mapping.len(),
            });
        }
        if let Some(&bad) = mapping.iter().find(|&&t| t >= new_atoms) {
            return Err(Error::AtomOutOfRange {
                index: bad,
                atoms: new_atoms,
            });
        }
        let mut entries = alloc::vec![0.0; new_atoms.pow(self.order as u32)];
        for (flat, e) in self.entries.iter().enumerate() {
            let idx = self.multi_index(flat);
            let mut new_flat = 0;
            for &j in &idx {
                new_flat = new_flat * new_atoms + mapping[j];
            }
            entries[new_flat] += e;
        }
        PolyMeasure::new(self.order, new_atoms, entries)
    }

    /// ‖γ‖(S,…,S): supremum of |Σ a¹_{j_1}⋯a^m_{j_m}·entry| over coefficient
    /// blocks in [−1,1]^k. By separate multilinearity the supremum sits at
    /// sign vertices, so exact mode enumerates signs for the first m−1
    /// factors and resolves the last factor in closed form.
    pub fn semivariation(&self, mode: SemivariationMode) -> Result<Semivariation> {
        if self.order == 1 {
            // optimal signs are sign(entry): equals the variation
            return Ok(Semivariation {
                value: self.variation(),
                exact: true,
            });
        }
        match mode {
            SemivariationMode::Exact => {
                let bits = (self.order - 1) * self.num_atoms;
                if self.order * self.num_atoms > SEMIVARIATION_EXACT_CAP {
                    return Err(Error::SemivariationTooLarge {
                        order: self.order,
                        atoms: self.num_atoms,
                        cap: SEMIVARIATION_EXACT_CAP,
                    });
                }
                let mut best = 0.0f64;
                for assignment in 0u64..(1 << bits) {
                    let v = self.signed_contraction(assignment);
                    if v > best {
                        best = v;
                    }
                }
                Ok(Semivariation {
                    value: best,
                    exact: true,
                })
            }
            SemivariationMode::Randomized { seed } => {
                let bits = (self.order - 1) * self.num_atoms;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let budget: usize = {
                    let mk = (self.order * self.num_atoms).min(20);
                    (10usize.saturating_mul(1 << mk)).min(1_000_000)
                };
                let mut best = self.signed_contraction(0);
                let mut spent = 1usize;
                while spent < budget {
                    let mut assignment: u64 = rng.gen::<u64>() & mask(bits);
                    let mut current = self.signed_contraction(assignment);
                    spent += 1;
                    // local sign flips until no single flip improves
                    let mut improved = true;
                    while improved && spent < budget {
                        improved = false;
                        for b in 0..bits {
                            let cand = assignment ^ (1 << b);
                            let v = self.signed_contraction(cand);
                            spent += 1;
                            if v > current {
                                current = v;
                                assignment = cand;
                                improved = true;
                            }
                            if spent >= budget {
                                break;
                            }
                        }
                    }
                    if current > best {
                        best = current;
                    }
                }
                Ok(Semivariation {
                    value: best,
                    exact: false,
                })
            }
        }
    }

    /// |Σ| for the sign assignment of factors 0..m−2 packed in `assignment`
    /// (bit f·k + j = sign of coefficient j in factor f), with the last
    /// factor resolved as Σ_j |c_j|.
    fn signed_contraction(&self, assignment: u64) -> f64 {
        let k = self.num_atoms;
        let mut contracted = alloc::vec![0.0f64; k];
        for (flat, e) in self.entries.iter().enumerate() {
            let mut p = *e;
            let mut rem = flat;
            let last = rem % k;
            rem /= k;
            for f in (0..self.order - 1).rev() {
                let j = rem % k;
                rem /= k;
                if (assignment >> (f * k + j)) & 1 == 1 {
                    p = -p;
                }
            }
            contracted[last] += p;
        }
        contracted.iter().map(|c| c.abs()).sum()
    }
}

fn mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(order: usize, k: usize, entries: &[f64]) -> PolyMeasure {
        PolyMeasure::new(order, k, entries.to_vec()).unwrap()
    }

    /// Independent oracle: full 2^{mk} sign enumeration over ALL factors.
    fn brute_force_semivariation(g: &PolyMeasure) -> f64 {
        let m = g.order();
        let k = g.num_atoms();
        let bits = m * k;
        assert!(bits <= 16, "oracle limited to small instances");
        let mut best = 0.0f64;
        for assignment in 0u64..(1 << bits) {
            let mut sum = 0.0;
            for (flat, e) in g.entries().iter().enumerate() {
                let idx = g.multi_index(flat);
                let mut p = *e;
                for (f, &j) in idx.iter().enumerate() {
                    if (assignment >> (f * k + j)) & 1 == 1 {
                        p = -p;
                    }
                }
                sum += p;
            }
            best = best.max(sum.abs());
        }
        best
    }

    #[test]
    fn evaluate_total_and_singletons() {
        let g = pm(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let full = alloc::vec![alloc::vec![0, 1], alloc::vec![0, 1]];
        assert_eq!(g.evaluate(&full).unwrap(), 0.0);
        assert_eq!(
            g.evaluate(&[alloc::vec![0], alloc::vec![1]]).unwrap(),
            -1.0
        );
        assert_eq!(g.evaluate(&[alloc::vec![1], alloc::vec![1]]).unwrap(), 1.0);
    }

    #[test]
    fn evaluate_out_of_range() {
        let g = pm(1, 2, &[1.0, 2.0]);
        assert!(matches!(
            g.evaluate(&[alloc::vec![2]]),
            Err(Error::AtomOutOfRange { .. })
        ));
    }

    #[test]
    fn variation_checkerboard() {
        let g = pm(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        assert_eq!(g.variation(), 4.0);
        let zero = pm(2, 2, &[0.0; 4]);
        assert_eq!(zero.variation(), 0.0);
    }

    #[test]
    fn variation_equals_total_mass_when_nonnegative() {
        let g = pm(2, 3, &[1.0, 2.0, 0.0, 0.5, 3.0, 1.0, 0.0, 0.25, 2.0]);
        let full = alloc::vec![alloc::vec![0, 1, 2]; 2];
        assert_eq!(g.variation(), g.evaluate(&full).unwrap());
    }

    #[test]
    fn semivariation_checkerboard() {
        let g = pm(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let sv = g.semivariation(SemivariationMode::Exact).unwrap();
        assert_eq!(sv.value, 4.0);
        assert!(sv.exact);
        assert_eq!(brute_force_semivariation(&g), 4.0);
    }

    #[test]
    fn semivariation_non_checkerboard_frozen() {
        // [[1,1],[1,-1]]: brute force over all 16 sign pairs gives 2.
        let g = pm(2, 2, &[1.0, 1.0, 1.0, -1.0]);
        let sv = g.semivariation(SemivariationMode::Exact).unwrap();
        assert_eq!(brute_force_semivariation(&g), 2.0);
        assert_eq!(sv.value, 2.0);
    }

    #[test]
    fn semivariation_m1_equals_variation() {
        let g = pm(1, 4, &[1.0, -2.0, 3.0, -0.5]);
        let sv = g.semivariation(SemivariationMode::Exact).unwrap();
        assert_eq!(sv.value, g.variation());
        assert_eq!(sv.value, 6.5);
    }

    #[test]
    fn semivariation_matches_brute_force_randomly() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let m = rng.gen_range(2..=3usize);
            let k: usize = rng.gen_range(2..=if m == 2 { 4 } else { 3 });
            let entries: Vec<f64> = (0..k.pow(m as u32))
                .map(|_| rng.gen_range(-2.0..2.0))
                .collect();
            let g = pm(m, k, &entries);
            let sv = g.semivariation(SemivariationMode::Exact).unwrap();
            let oracle = brute_force_semivariation(&g);
            assert!(
                (sv.value - oracle).abs() < 1e-12,
                "m={m} k={k}: {} vs {oracle}",
                sv.value
            );
            assert!(sv.value <= g.variation() + 1e-12);
        }
    }

    #[test]
    fn semivariation_randomized_is_lower_bound() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let entries: Vec<f64> = (0..27).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g = pm(3, 3, &entries);
        let exact = g.semivariation(SemivariationMode::Exact).unwrap();
        let rand = g
            .semivariation(SemivariationMode::Randomized { seed: 9 })
            .unwrap();
        assert!(!rand.exact);
        assert!(rand.value <= exact.value + 1e-12);
        // hill climbing from many starts should reach the optimum here
        assert!((rand.value - exact.value).abs() < 1e-12);
    }

    #[test]
    fn semivariation_cap_enforced() {
        let g = pm(2, 13, &alloc::vec![1.0; 169]);
        assert!(matches!(
            g.semivariation(SemivariationMode::Exact),
            Err(Error::SemivariationTooLarge { .. })
        ));
    }

    #[test]
    fn integrate_simple_indicators() {
        // indicator tuple recovers the tensor entry
        let g = pm(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let part = FinitePartition::new(4, alloc::vec![alloc::vec![0, 1], alloc::vec![2, 3]])
            .unwrap();
        let chi0 = [1.0, 1.0, 0.0, 0.0];
        let chi1 = [0.0, 0.0, 1.0, 1.0];
        assert_eq!(g.integrate_simple(&part, &[&chi0, &chi1]).unwrap(), 2.0);
        let full = [1.0, 1.0, 1.0, 1.0];
        assert_eq!(g.integrate_simple(&part, &[&full, &full]).unwrap(), 10.0);
    }

    #[test]
    fn integrate_simple_diagonal_contraction() {
        let g = pm(2, 2, &[2.0, 0.0, 0.0, 5.0]);
        let part = FinitePartition::node_level(2);
        let f = [1.5, -0.5];
        let h = [2.0, 3.0];
        let got = g.integrate_simple(&part, &[&f, &h]).unwrap();
        assert_eq!(got, 2.0 * 1.5 * 2.0 + 5.0 * (-0.5) * 3.0);
    }

    #[test]
    fn integrate_simple_rejects_nonconstant() {
        let g = pm(1, 2, &[1.0, 1.0]);
        let part = FinitePartition::new(4, alloc::vec![alloc::vec![0, 1], alloc::vec![2, 3]])
            .unwrap();
        let bad = [1.0, 2.0, 0.0, 0.0];
        assert!(matches!(
            g.integrate_simple(&part, &[&bad]),
            Err(Error::NotAtomwiseConstant { atom: 0 })
        ));
    }

    #[test]
    fn jordan_split() {
        let g = pm(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let (pos, neg) = g.jordan_decomposition();
        assert_eq!(pos.entries(), &[1.0, 0.0, 0.0, 1.0]);
        assert_eq!(neg.entries(), &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(pos.variation() + neg.variation(), g.variation());
    }

    #[test]
    fn jordan_evaluates_like_original() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let entries: Vec<f64> = (0..27).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g = pm(3, 3, &entries);
        let (pos, neg) = g.jordan_decomposition();
        for _ in 0..100 {
            let sets: Vec<Vec<usize>> = (0..3)
                .map(|_| (0..3).filter(|_| rng.gen::<bool>()).collect())
                .collect();
            let lhs = pos.evaluate(&sets).unwrap() - neg.evaluate(&sets).unwrap();
            let rhs = g.evaluate(&sets).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn product_measure_rectangles() {
        let g = pm(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let prod = g.product_measure();
        assert_eq!(prod.order(), 1);
        assert_eq!(prod.num_atoms(), 4);
        let rect = g
            .rectangle_atoms(&[alloc::vec![0], alloc::vec![0, 1]])
            .unwrap();
        assert_eq!(prod.evaluate(&[rect]).unwrap(), 3.0);
        // total mass
        let all = g.rectangle_atoms(&alloc::vec![alloc::vec![0, 1]; 2]).unwrap();
        assert_eq!(
            prod.evaluate(&[all]).unwrap(),
            g.evaluate(&alloc::vec![alloc::vec![0, 1]; 2]).unwrap()
        );
    }

    #[test]
    fn product_measure_exhaustive_rectangles() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for (m, k) in [(2usize, 3usize), (3, 2), (3, 3)] {
            let entries: Vec<f64> = (0..k.pow(m as u32))
                .map(|_| rng.gen_range(-1.0..1.0))
                .collect();
            let g = pm(m, k, &entries);
            let prod = g.product_measure();
            // all subset tuples
            let subsets: Vec<Vec<usize>> = (0..(1usize << k))
                .map(|mask| (0..k).filter(|j| mask >> j & 1 == 1).collect())
                .collect();
            let mut pick = alloc::vec![0usize; m];
            'rects: loop {
                let sets: Vec<Vec<usize>> =
                    pick.iter().map(|&p| subsets[p].clone()).collect();
                let direct = g.evaluate(&sets).unwrap();
                let rect = g.rectangle_atoms(&sets).unwrap();
                let mass = prod.evaluate(&[rect]).unwrap();
                assert_eq!(direct, mass);
                let mut pos = 0;
                loop {
                    if pos == m {
                        break 'rects;
                    }
                    pick[pos] += 1;
                    if pick[pos] == subsets.len() {
                        pick[pos] = 0;
                        pos += 1;
                    } else {
                        break;
                    }
                }
            }
        }
    }

    #[test]
    fn diagonality() {
        let diag = pm(2, 2, &[2.0, 0.0, 0.0, 5.0]);
        assert!(diag.is_diagonal(0.0));
        assert_eq!(diag.diagonal_measure(0.0).unwrap(), alloc::vec![2.0, 5.0]);

        let off = pm(2, 2, &[0.0, 0.5, 0.0, 0.0]);
        assert_eq!(off.diagonal_witness(0.0), Some(alloc::vec![0, 1]));
        assert!(matches!(
            off.diagonal_measure(0.0),
            Err(Error::NotDiagonal { .. })
        ));
    }

    #[test]
    fn diagonal_after_zeroing() {
        let off = pm(2, 2, &[1.0, 0.5, -0.25, 2.0]);
        let zeroed = pm(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        assert!(!off.is_diagonal(0.0));
        assert!(zeroed.is_diagonal(0.0));
    }

    #[test]
    fn diagonal_measure_order_one_is_identity() {
        let g = pm(1, 3, &[1.0, -2.0, 3.0]);
        assert_eq!(g.diagonal_measure(0.0).unwrap(), alloc::vec![1.0, -2.0, 3.0]);
    }

    #[test]
    fn coarsening_shrinks_variation() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let entries: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let g = pm(2, 4, &entries);
            let mapping: Vec<usize> = (0..4).map(|_| rng.gen_range(0..2)).collect();
            let coarse = g.coarsen(&mapping, 2).unwrap();
            assert!(coarse.variation() <= g.variation() + 1e-12);
        }
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(PolyMeasure::new(2, 2, alloc::vec![1.0; 3]).is_err());
        assert!(PolyMeasure::new(1, 2, alloc::vec![f64::NAN, 0.0]).is_err());
        assert!(FinitePartition::new(3, alloc::vec![alloc::vec![0, 1]]).is_err());
        assert!(FinitePartition::new(
            2,
            alloc::vec![alloc::vec![0, 1], alloc::vec![1]]
        )
        .is_err());
    }
}
