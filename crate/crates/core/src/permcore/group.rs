use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use super::arith;
use super::perm::Permutation;
use super::stabchain::StabilizerChain;
use crate::error::{Error, Result};

/// Index of an element inside a materialized [`PermGroup`].
pub type ElemId = u32;

/// Size caps for element materialization and subgroup enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_order: usize,
    pub max_subgroup_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 1000,
            max_subgroup_order: 400,
        }
    }
}

struct CayleyTable {
    n: usize,
    mul: Vec<ElemId>,
    inv: Vec<ElemId>,
}

/// A finite permutation group with every element materialized.
///
/// Elements are kept sorted lexicographically by image sequence, so the
/// identity is always element `0` and iteration order is reproducible.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, ElemId>,
    table: OnceLock<CayleyTable>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

/// The subgroup generated by `generators`, as permutations of `degree` points.
pub fn group_closure(
    generators: &[Permutation],
    degree: usize,
    limits: &Limits,
) -> Result<PermGroup> {
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    let identity = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    seen.insert(identity.clone(), ());
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.compose(g);
            if !seen.contains_key(&y) {
                if seen.len() >= limits.max_order {
                    return Err(Error::GroupTooLarge {
                        cap: limits.max_order,
                    });
                }
                seen.insert(y.clone(), ());
                queue.push_back(y);
            }
        }
    }
    let elements: Vec<Permutation> = seen.into_keys().collect();
    Ok(PermGroup::from_parts(degree, generators.to_vec(), elements))
}

impl PermGroup {
    /// Builds a group from an element list already known to be closed.
    pub(crate) fn from_parts(
        degree: usize,
        generators: Vec<Permutation>,
        mut elements: Vec<Permutation>,
    ) -> Self {
        elements.sort();
        elements.dedup();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as ElemId))
            .collect();
        PermGroup {
            degree,
            generators,
            elements,
            index,
            table: OnceLock::new(),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::from_parts(degree, Vec::new(), vec![Permutation::identity(degree)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, id: ElemId) -> &Permutation {
        &self.elements[id as usize]
    }

    pub fn index_of(&self, x: &Permutation) -> Option<ElemId> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &Permutation) -> bool {
        self.index.contains_key(x)
    }

    pub(crate) fn require(&self, x: &Permutation) -> Result<ElemId> {
        self.index_of(x)
            .ok_or_else(|| Error::ForeignElement(x.to_string()))
    }

    pub fn identity_id(&self) -> ElemId {
        0
    }

    pub fn ids(&self) -> std::ops::Range<ElemId> {
        0..self.order() as ElemId
    }

    fn table(&self) -> &CayleyTable {
        self.table.get_or_init(|| {
            let n = self.order();
            let mut mul = Vec::with_capacity(n * n);
            for a in &self.elements {
                for b in &self.elements {
                    mul.push(self.index[&a.compose(b)]);
                }
            }
            let inv = self
                .elements
                .iter()
                .map(|a| self.index[&a.inverse()])
                .collect();
            CayleyTable { n, mul, inv }
        })
    }

    /// Product `a * b` (apply `a`, then `b`).
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        let t = self.table();
        t.mul[a as usize * t.n + b as usize]
    }

    pub fn inv(&self, a: ElemId) -> ElemId {
        self.table().inv[a as usize]
    }

    /// `x^g = g⁻¹ x g`.
    pub fn conj(&self, x: ElemId, g: ElemId) -> ElemId {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn commutator(&self, x: ElemId, y: ElemId) -> ElemId {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn pow(&self, x: ElemId, mut e: u64) -> ElemId {
        let mut acc = self.identity_id();
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: ElemId) -> usize {
        self.element(x).order()
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..]
                .iter()
                .all(|b| a.compose(b) == b.compose(a))
        })
    }

    /// True iff the order is a power of `p` (the trivial group counts).
    pub fn is_p_group(&self, p: u64) -> bool {
        arith::is_power_of(self.order() as u64, p)
    }

    /// The prime `p` when the order is a nontrivial power of `p`.
    pub fn prime_of_p_group(&self) -> Option<u64> {
        match arith::prime_divisors(self.order() as u64).as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }

    /// Order computed from a Schreier–Sims stabilizer chain on the generators.
    pub fn stabilizer_chain_order(&self) -> u128 {
        StabilizerChain::new(self.degree, &self.generators).order()
    }

    /// Checks closure, generator membership and the stabilizer-chain order.
    pub fn verify(&self) -> Result<()> {
        if self.elements.first().map(|e| e.is_identity()) != Some(true) {
            return Err(Error::Inconsistency("identity is not element 0".into()));
        }
        for g in &self.generators {
            self.require(g)?;
        }
        for a in &self.elements {
            if !self.contains(&a.inverse()) {
                return Err(Error::NotClosed(format!("inverse of {a} missing")));
            }
            for g in &self.generators {
                if !self.contains(&a.compose(g)) {
                    return Err(Error::NotClosed(format!("{a} * {g} missing")));
                }
            }
        }
        let chain = self.stabilizer_chain_order();
        if chain != self.order() as u128 {
            return Err(Error::Inconsistency(format!(
                "materialized order {} differs from stabilizer chain order {chain}",
                self.order()
            )));
        }
        Ok(())
    }

    pub(crate) fn full_set(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.order());
        s.insert_range(..);
        s
    }

    /// The subgroup generated by `gens`, grown outward from `seed`.
    ///
    /// `seed` must already lie inside `<gens>`; passing a known subgroup with
    /// its generators plus extra elements computes a join cheaply.
    pub(crate) fn close_from(&self, seed: &FixedBitSet, gens: &[ElemId]) -> FixedBitSet {
        let mut set = seed.clone();
        set.insert(self.identity_id() as usize);
        let mut queue: Vec<ElemId> = set.ones().map(|i| i as ElemId).collect();
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !set.put(y as usize) {
                    queue.push(y);
                }
            }
        }
        set
    }

    pub(crate) fn generate(&self, gens: &[ElemId]) -> FixedBitSet {
        self.close_from(&FixedBitSet::with_capacity(self.order()), gens)
    }

    /// Conjugacy class of `x`, sorted.
    pub fn conjugacy_class(&self, x: &Permutation) -> Result<Vec<Permutation>> {
        let id = self.require(x)?;
        Ok(self
            .class_ids(id)
            .ones()
            .map(|i| self.elements[i].clone())
            .collect())
    }

    pub(crate) fn class_ids(&self, x: ElemId) -> FixedBitSet {
        let mut class = FixedBitSet::with_capacity(self.order());
        for g in self.ids() {
            class.insert(self.conj(x, g) as usize);
        }
        class
    }

    pub fn is_conjugate(&self, x: &Permutation, y: &Permutation) -> Result<bool> {
        let a = self.require(x)?;
        let b = self.require(y)?;
        Ok(self.ids().any(|g| self.conj(a, g) == b))
    }

    /// True iff the elements of order prime to `p` form a subgroup, i.e. `G`
    /// has a normal `p`-complement.
    pub fn is_p_nilpotent(&self, p: u64) -> bool {
        let coprime: Vec<ElemId> = self
            .ids()
            .filter(|&x| self.element_order(x) as u64 % p != 0)
            .collect();
        let mut members = FixedBitSet::with_capacity(self.order());
        for &x in &coprime {
            members.insert(x as usize);
        }
        let closed = coprime.iter().all(|&a| {
            coprime
                .iter()
                .all(|&b| members.contains(self.mul(a, b) as usize))
        });
        if closed {
            let n = self.order() as u64;
            assert_eq!(
                coprime.len() as u64,
                n / arith::p_part(n, p),
                "normal p-complement has the wrong order"
            );
        }
        closed
    }
}
