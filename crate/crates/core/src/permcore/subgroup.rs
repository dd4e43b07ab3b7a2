use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

use super::arith;
use super::group::{ElemId, Limits, PermGroup};
use super::perm::Permutation;
use crate::error::{Error, Result};

/// A subgroup of an ambient [`PermGroup`], stored as a membership set over
/// the parent's element indices.
///
/// Because both the parent and the materialized subgroup keep their elements
/// sorted, the `i`-th element of [`Subgroup::group`] is the `i`-th member id.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<PermGroup>,
    members: FixedBitSet,
    group: OnceLock<Arc<PermGroup>>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Subgroup")
            .field("order", &self.order())
            .field("parent_order", &self.parent.order())
            .field("generators", &self.group().generators())
            .finish()
    }
}

impl Subgroup {
    /// Wraps a membership set that is known to be a subgroup.
    pub(crate) fn from_members(parent: Arc<PermGroup>, members: FixedBitSet) -> Self {
        Subgroup {
            parent,
            members,
            group: OnceLock::new(),
        }
    }

    pub fn whole(parent: &Arc<PermGroup>) -> Self {
        Subgroup::from_members(parent.clone(), parent.full_set())
    }

    pub fn trivial(parent: &Arc<PermGroup>) -> Self {
        Subgroup::from_ids(parent, &[parent.identity_id()])
    }

    pub(crate) fn from_ids(parent: &Arc<PermGroup>, gens: &[ElemId]) -> Self {
        Subgroup::from_members(parent.clone(), parent.generate(gens))
    }

    /// The subgroup of `parent` generated by `gens`.
    pub fn generated(parent: &Arc<PermGroup>, gens: &[Permutation]) -> Result<Self> {
        let ids = gens
            .iter()
            .map(|g| parent.require(g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subgroup::from_ids(parent, &ids))
    }

    /// Re-expresses the elements of `group` as a subgroup of `parent`.
    pub fn embed(group: &PermGroup, parent: &Arc<PermGroup>) -> Result<Self> {
        let mut members = FixedBitSet::with_capacity(parent.order());
        for x in group.elements() {
            members.insert(parent.require(x)? as usize);
        }
        Ok(Subgroup::from_members(parent.clone(), members))
    }

    /// The same element set viewed inside another ambient group.
    pub fn lift(&self, parent: &Arc<PermGroup>) -> Result<Self> {
        let mut members = FixedBitSet::with_capacity(parent.order());
        for x in self.ids() {
            members.insert(parent.require(self.parent.element(x))? as usize);
        }
        Ok(Subgroup::from_members(parent.clone(), members))
    }

    pub fn parent(&self) -> &Arc<PermGroup> {
        &self.parent
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.members.ones().map(|i| i as ElemId)
    }

    pub fn elements(&self) -> impl Iterator<Item = &Permutation> + '_ {
        self.ids().map(|i| self.parent.element(i))
    }

    pub fn order(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn contains_id(&self, x: ElemId) -> bool {
        self.members.contains(x as usize)
    }

    pub fn contains(&self, x: &Permutation) -> bool {
        self.parent.index_of(x).is_some_and(|i| self.contains_id(i))
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Greedy generating set: scan members in order, keep each one not yet
    /// generated.
    pub fn generator_ids(&self) -> Vec<ElemId> {
        let mut gens = Vec::new();
        let mut span = FixedBitSet::with_capacity(self.parent.order());
        span.insert(self.parent.identity_id() as usize);
        for x in self.ids() {
            if !span.contains(x as usize) {
                gens.push(x);
                span = self.parent.close_from(&span, &gens);
            }
        }
        gens
    }

    /// The subgroup as a group in its own right.
    pub fn group(&self) -> &Arc<PermGroup> {
        self.group.get_or_init(|| {
            let gens = self
                .generator_ids()
                .into_iter()
                .map(|i| self.parent.element(i).clone())
                .collect();
            let elements = self.elements().cloned().collect();
            Arc::new(PermGroup::from_parts(self.parent.degree(), gens, elements))
        })
    }

    /// `H^g`.
    pub fn conjugate(&self, g: ElemId) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.parent.order());
        for x in self.ids() {
            members.insert(self.parent.conj(x, g) as usize);
        }
        Subgroup::from_members(self.parent.clone(), members)
    }

    pub fn is_normal_in(&self, over: &Subgroup) -> bool {
        over.ids()
            .all(|g| self.ids().all(|x| self.contains_id(self.parent.conj(x, g))))
    }

    pub fn is_abelian(&self) -> bool {
        let ids: Vec<ElemId> = self.generator_ids();
        ids.iter().enumerate().all(|(i, &a)| {
            ids[i + 1..]
                .iter()
                .all(|&b| self.parent.mul(a, b) == self.parent.mul(b, a))
        })
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        Subgroup::from_members(self.parent.clone(), members)
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.generator_ids();
        gens.extend(other.generator_ids());
        Subgroup::from_members(
            self.parent.clone(),
            self.parent.close_from(&self.members, &gens),
        )
    }

    /// Verifies closure and Lagrange against the parent.
    pub fn verify(&self) -> Result<()> {
        if !self.contains_id(self.parent.identity_id()) {
            return Err(Error::NotClosed("identity missing".into()));
        }
        for a in self.ids() {
            for b in self.ids() {
                if !self.contains_id(self.parent.mul(a, b)) {
                    return Err(Error::NotClosed("product escapes subgroup".into()));
                }
            }
        }
        if self.parent.order() % self.order() != 0 {
            return Err(Error::Inconsistency(
                "subgroup order does not divide".into(),
            ));
        }
        Ok(())
    }

    fn same_parent(&self, other: &Subgroup) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent)
            || self.parent.elements() == other.parent.elements()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.same_parent(other) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by order, then by sorted element list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.ids().cmp(other.ids()))
    }
}

fn require_parent(g: &Arc<PermGroup>, h: &Subgroup) -> Result<()> {
    if Arc::ptr_eq(g, h.parent()) || g.elements() == h.parent().elements() {
        Ok(())
    } else {
        Err(Error::NotContained(
            "subgroup does not belong to this group".into(),
        ))
    }
}

/// `N_G(H)`.
pub fn normalizer(g: &Arc<PermGroup>, h: &Subgroup) -> Result<Subgroup> {
    require_parent(g, h)?;
    let mut members = FixedBitSet::with_capacity(g.order());
    for x in g.ids() {
        if h.ids().all(|y| h.contains_id(g.conj(y, x))) {
            members.insert(x as usize);
        }
    }
    Ok(Subgroup::from_members(g.clone(), members))
}

/// `C_G(S)` for an arbitrary element set `S ⊆ G`.
pub fn centralizer(g: &Arc<PermGroup>, set: &[Permutation]) -> Result<Subgroup> {
    let ids = set
        .iter()
        .map(|x| g.require(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(centralizer_ids(g, &ids))
}

pub(crate) fn centralizer_ids(g: &Arc<PermGroup>, ids: &[ElemId]) -> Subgroup {
    let mut members = FixedBitSet::with_capacity(g.order());
    for x in g.ids() {
        if ids.iter().all(|&s| g.mul(x, s) == g.mul(s, x)) {
            members.insert(x as usize);
        }
    }
    Subgroup::from_members(g.clone(), members)
}

/// `C_G(H)` for a subgroup; only its generators need checking.
pub fn centralizer_of(g: &Arc<PermGroup>, h: &Subgroup) -> Result<Subgroup> {
    require_parent(g, h)?;
    Ok(centralizer_ids(g, &h.generator_ids()))
}

pub fn center(g: &Arc<PermGroup>) -> Subgroup {
    let gens: Vec<ElemId> = g
        .generators()
        .iter()
        .map(|x| g.index_of(x).expect("generator lies in group"))
        .collect();
    centralizer_ids(g, &gens)
}

/// Every subgroup of `G` exactly once, in canonical order.
///
/// Starts from the cyclic subgroups and repeatedly joins each known subgroup
/// with each cyclic subgroup it does not contain; every subgroup is the join
/// of its cyclic subgroups, so this reaches all of them.
pub fn all_subgroups(g: &Arc<PermGroup>, limits: &Limits) -> Result<Vec<Subgroup>> {
    if g.order() > limits.max_subgroup_order {
        return Err(Error::GroupTooLarge {
            cap: limits.max_subgroup_order,
        });
    }
    let n = g.order();
    let mut cyclic: Vec<(ElemId, FixedBitSet)> = Vec::new();
    let mut cyclic_seen: HashMap<FixedBitSet, ()> = HashMap::new();
    for x in g.ids() {
        let c = g.generate(&[x]);
        if cyclic_seen.insert(c.clone(), ()).is_none() {
            cyclic.push((x, c));
        }
    }

    let mut known: HashMap<FixedBitSet, Vec<ElemId>> = HashMap::new();
    let mut queue: Vec<FixedBitSet> = Vec::new();
    for (x, c) in &cyclic {
        let gens = if c.count_ones(..) == 1 {
            vec![]
        } else {
            vec![*x]
        };
        known.insert(c.clone(), gens);
        queue.push(c.clone());
    }
    while let Some(h) = queue.pop() {
        let h_gens = known[&h].clone();
        for (x, c) in &cyclic {
            if h.contains(*x as usize) || c.is_subset(&h) {
                continue;
            }
            let mut gens = h_gens.clone();
            gens.push(*x);
            let k = g.close_from(&h, &gens);
            if !known.contains_key(&k) {
                known.insert(k.clone(), gens);
                queue.push(k);
            }
        }
    }
    let mut out: Vec<Subgroup> = known
        .into_keys()
        .map(|m| Subgroup::from_members(g.clone(), m))
        .collect();
    out.sort();
    debug_assert!(out.iter().all(|s| n % s.order() == 0));
    Ok(out)
}

/// Maximal subgroups, given the full subgroup list.
pub fn maximal_subgroups(subgroups: &[Subgroup]) -> Vec<Subgroup> {
    let Some(whole) = subgroups.iter().max_by_key(|s| s.order()) else {
        return Vec::new();
    };
    subgroups
        .iter()
        .filter(|h| h.order() < whole.order())
        .filter(|h| {
            !subgroups
                .iter()
                .any(|k| k.order() > h.order() && k.order() < whole.order() && h.is_subset_of(k))
        })
        .cloned()
        .collect()
}

/// A Sylow `p`-subgroup; the canonically smallest one among its conjugates.
pub fn sylow(g: &Arc<PermGroup>, p: u64) -> Result<Subgroup> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let target = arith::p_part(g.order() as u64, p) as usize;
    let mut current = Subgroup::trivial(g);
    while current.order() < target {
        let norm = normalizer(g, &current)?;
        let mut gens = current.generator_ids();
        let next = norm
            .ids()
            .filter(|&x| !current.contains_id(x))
            .find(|&x| arith::is_power_of(g.element_order(x) as u64, p))
            .ok_or_else(|| {
                Error::Inconsistency("no p-element extends a non-Sylow p-subgroup".into())
            })?;
        gens.push(next);
        current = Subgroup::from_members(g.clone(), g.close_from(current.members(), &gens));
        if !current.group().is_p_group(p) {
            return Err(Error::Inconsistency("Sylow growth left the p-group".into()));
        }
    }
    Ok(g.ids()
        .map(|x| current.conjugate(x))
        .min()
        .expect("group has an identity"))
}

/// `Φ(P)` as the intersection of maximal subgroups; for a `p`-group it is
/// also computed as `⟨[x,y], x^p⟩` and the two must agree.
pub fn frattini(p_group: &Arc<PermGroup>, limits: &Limits) -> Result<Subgroup> {
    let subgroups = all_subgroups(p_group, limits)?;
    let mut members = p_group.full_set();
    for m in maximal_subgroups(&subgroups) {
        members.intersect_with(m.members());
    }
    let by_maximals = Subgroup::from_members(p_group.clone(), members);
    if let Some(p) = p_group.prime_of_p_group() {
        let by_generators = frattini_by_generators(p_group, p);
        if by_generators != by_maximals {
            return Err(Error::Inconsistency(format!(
                "Frattini subgroup: maximal intersection has order {}, commutators and powers give {}",
                by_maximals.order(),
                by_generators.order()
            )));
        }
    }
    Ok(by_maximals)
}

/// `⟨[x,y], x^p⟩`, the Frattini subgroup of a `p`-group.
pub fn frattini_by_generators(p_group: &Arc<PermGroup>, p: u64) -> Subgroup {
    let mut gens = Vec::new();
    for x in p_group.ids() {
        gens.push(p_group.pow(x, p));
        for y in p_group.ids() {
            gens.push(p_group.commutator(x, y));
        }
    }
    gens.sort_unstable();
    gens.dedup();
    Subgroup::from_ids(p_group, &gens)
}

/// `[G, G]`.
pub fn derived_subgroup(g: &Arc<PermGroup>) -> Subgroup {
    let mut gens: Vec<ElemId> = g
        .ids()
        .flat_map(|x| g.ids().map(move |y| (x, y)))
        .map(|(x, y)| g.commutator(x, y))
        .collect();
    gens.sort_unstable();
    gens.dedup();
    Subgroup::from_ids(g, &gens)
}

fn check_chain(g: &Arc<PermGroup>, p: &Subgroup, q: &Subgroup) -> Result<()> {
    require_parent(g, p)?;
    require_parent(g, q)?;
    if !q.is_subset_of(p) {
        return Err(Error::NotContained("Q is not contained in P".into()));
    }
    Ok(())
}

/// `Q` is strongly closed in `P` with respect to `G`: `Q^G ∩ P ⊆ Q`.
pub fn is_strongly_closed_group(g: &Arc<PermGroup>, p: &Subgroup, q: &Subgroup) -> Result<bool> {
    Ok(strong_closure_violation_group(g, p, q)?.is_none())
}

/// An element `x ∈ Q` and a conjugate of it in `P \ Q`, if one exists.
pub fn strong_closure_violation_group(
    g: &Arc<PermGroup>,
    p: &Subgroup,
    q: &Subgroup,
) -> Result<Option<(Permutation, Permutation)>> {
    check_chain(g, p, q)?;
    for x in q.ids() {
        for y in g.class_ids(x).ones() {
            let y = y as ElemId;
            if p.contains_id(y) && !q.contains_id(y) {
                return Ok(Some((g.element(x).clone(), g.element(y).clone())));
            }
        }
    }
    Ok(None)
}
