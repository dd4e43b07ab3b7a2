use std::collections::BTreeSet;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::lattice::{SubgroupId, SubgroupLattice};
use crate::charsub::require_sylow;
use crate::error::{Error, Result};
use crate::permcore::arith;
use crate::permcore::{
    all_subgroups, centralizer_of, normalizer, ElemId, Limits, PermGroup, Permutation, Subgroup,
};

/// An injective homomorphism between subgroups of the base `p`-group.
///
/// `map[i]` is the image of the `i`-th member of `source`, as an element id
/// of the base group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FusionMorphism {
    pub source: SubgroupId,
    pub target: SubgroupId,
    pub map: Vec<ElemId>,
}

/// The realizing group of a fusion system built by [`fusion_of_group`].
#[derive(Debug, Clone)]
pub struct Provenance {
    pub group: Arc<PermGroup>,
    pub sylow: Subgroup,
}

/// A fusion system over a `p`-group, with every hom set materialized.
///
/// Morphisms are stored once per source as injective maps; `Hom(A, B)` is
/// the set of those maps on `A` whose image lies in `B`. Two systems over
/// the same base are equal iff all their hom sets agree.
#[derive(Debug, Clone)]
pub struct FusionSystem {
    p: u64,
    lattice: Arc<SubgroupLattice>,
    maps: Vec<BTreeSet<Vec<ElemId>>>,
    provenance: Option<Provenance>,
}

impl FusionSystem {
    pub(crate) fn from_maps(
        p: u64,
        lattice: Arc<SubgroupLattice>,
        maps: Vec<BTreeSet<Vec<ElemId>>>,
        provenance: Option<Provenance>,
    ) -> Self {
        debug_assert_eq!(maps.len(), lattice.len());
        FusionSystem {
            p,
            lattice,
            maps,
            provenance,
        }
    }

    /// `F_P(P)` on an existing lattice.
    pub fn inner_on(lattice: &Arc<SubgroupLattice>, p: u64) -> Self {
        let base = lattice.group();
        let maps = conjugation_maps(lattice, base, &identity_embedding(base), base.ids());
        FusionSystem::from_maps(p, lattice.clone(), maps, None)
    }

    pub(crate) fn into_maps(self) -> Vec<BTreeSet<Vec<ElemId>>> {
        self.maps
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn base(&self) -> &Arc<PermGroup> {
        self.lattice.group()
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// All maps out of `source` (each an isomorphism onto its image).
    pub fn maps_from(&self, source: SubgroupId) -> &BTreeSet<Vec<ElemId>> {
        &self.maps[source]
    }

    pub fn id_of(&self, q: &Subgroup) -> Result<SubgroupId> {
        self.lattice.id_of(q)
    }

    /// `Hom_F(A, B)`.
    pub fn homs(&self, a: SubgroupId, b: SubgroupId) -> Vec<FusionMorphism> {
        self.maps[a]
            .iter()
            .filter(|m| m.iter().all(|&y| self.lattice.contains(b, y)))
            .map(|m| FusionMorphism {
                source: a,
                target: b,
                map: m.clone(),
            })
            .collect()
    }

    pub fn hom_count(&self, a: SubgroupId, b: SubgroupId) -> usize {
        self.maps[a]
            .iter()
            .filter(|m| m.iter().all(|&y| self.lattice.contains(b, y)))
            .count()
    }

    /// Every morphism as an isomorphism onto its image.
    pub fn isomorphisms(&self) -> impl Iterator<Item = FusionMorphism> + '_ {
        self.lattice.ids().flat_map(move |a| {
            self.maps[a].iter().map(move |m| FusionMorphism {
                source: a,
                target: self.image_of(m),
                map: m.clone(),
            })
        })
    }

    pub(crate) fn image_of(&self, map: &[ElemId]) -> SubgroupId {
        self.lattice
            .image(map)
            .expect("morphism image is a subgroup")
    }

    /// `Σ_{A,B} |Hom_F(A,B)|`, counting a map once per codomain containing
    /// its image.
    pub fn morphism_count(&self) -> usize {
        self.lattice
            .ids()
            .map(|a| {
                self.maps[a]
                    .iter()
                    .map(|m| self.lattice.overgroup_count(self.image_of(m)))
                    .sum::<usize>()
            })
            .sum()
    }

    /// `Aut_F(Q)`.
    pub fn aut_f(&self, q: SubgroupId) -> BTreeSet<Vec<ElemId>> {
        self.maps[q]
            .iter()
            .filter(|m| self.image_of(m) == q)
            .cloned()
            .collect()
    }

    /// `Aut_P(Q)`: conjugations by `N_P(Q)`.
    pub fn aut_p(&self, q: SubgroupId) -> BTreeSet<Vec<ElemId>> {
        aut_p(&self.lattice, q)
    }

    /// Same base group and identical hom sets.
    pub fn same_homs(&self, other: &FusionSystem) -> bool {
        self.lattice.same_base(&other.lattice) && self.maps == other.maps
    }

    /// Deterministic hash of the base and all hom sets.
    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.p.hash(&mut h);
        self.base().elements().hash(&mut h);
        self.maps.hash(&mut h);
        h.finish()
    }

    /// `F = F_P(P)`.
    pub fn is_nilpotent(&self) -> bool {
        self.maps == FusionSystem::inner_on(&self.lattice, self.p).maps
    }

    /// No element of `Q` is `F`-conjugate to an element of `P \ Q`.
    pub fn is_strongly_closed(&self, q: &Subgroup) -> Result<bool> {
        Ok(self.strong_closure_violation(q)?.is_none())
    }

    /// A pair `(x, φ(x))` with `x ∈ Q` and `φ(x) ∉ Q`, if any.
    pub fn strong_closure_violation(
        &self,
        q: &Subgroup,
    ) -> Result<Option<(Permutation, Permutation)>> {
        let q = self.id_of(q)?;
        for a in self.lattice.ids() {
            for m in &self.maps[a] {
                for (&x, &y) in self.lattice.members(a).iter().zip(m) {
                    if self.lattice.contains(q, x) && !self.lattice.contains(q, y) {
                        let base = self.base();
                        return Ok(Some((base.element(x).clone(), base.element(y).clone())));
                    }
                }
            }
        }
        Ok(None)
    }

    /// `⟨x⁻¹ φ(x)⟩` over all morphisms.
    pub fn focal_subgroup(&self) -> Subgroup {
        let base = self.base();
        let mut gens = BTreeSet::new();
        for a in self.lattice.ids() {
            for m in &self.maps[a] {
                for (&x, &y) in self.lattice.members(a).iter().zip(m) {
                    gens.insert(base.mul(base.inv(x), y));
                }
            }
        }
        let gens: Vec<ElemId> = gens.into_iter().collect();
        Subgroup::from_ids(base, &gens)
    }

    /// `C_P(Q') ≤ Q'` for every `F`-conjugate `Q'` of `Q`.
    pub fn is_centric(&self, q: &Subgroup) -> Result<bool> {
        let q = self.id_of(q)?;
        let base = self.base();
        for m in &self.maps[q] {
            let conj = self.lattice.subgroup(self.image_of(m));
            let c = centralizer_of(base, conj)?;
            if !c.is_subset_of(conj) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks every fusion-system axiom by direct scan: injective
    /// homomorphisms, `P`-conjugations present, closure under restriction,
    /// inversion and composition.
    pub fn check_axioms(&self) -> Result<()> {
        let lat = &self.lattice;
        let base = self.base();
        let bad = |msg: String| Err(Error::Inconsistency(msg));
        let inner = FusionSystem::inner_on(lat, self.p);
        for a in lat.ids() {
            if !inner.maps[a].is_subset(&self.maps[a]) {
                return bad(format!("subgroup {a}: a P-conjugation is missing"));
            }
            let members = lat.members(a);
            for m in &self.maps[a] {
                if m.len() != members.len() {
                    return bad(format!("subgroup {a}: map has the wrong length"));
                }
                for (i, &x) in members.iter().enumerate() {
                    for (j, &y) in members.iter().enumerate() {
                        let xy = base.mul(x, y);
                        if lat.apply(a, m, xy) != base.mul(m[i], m[j]) {
                            return bad(format!("subgroup {a}: map is not a homomorphism"));
                        }
                    }
                }
                let Some(b) = lat.image(m) else {
                    return bad(format!("subgroup {a}: image is not a subgroup"));
                };
                if lat.order(b) != members.len() {
                    return bad(format!("subgroup {a}: map is not injective"));
                }
                for &c in lat.proper_subgroups(a) {
                    if !self.maps[c].contains(&lat.restrict(a, m, c)) {
                        return bad(format!("restriction from {a} to {c} missing"));
                    }
                }
                if !self.maps[b].contains(&inverse_map(lat, a, m, b)) {
                    return bad(format!("inverse of an isomorphism {a} -> {b} missing"));
                }
                for n in &self.maps[b] {
                    let composite: Vec<ElemId> = m.iter().map(|&y| lat.apply(b, n, y)).collect();
                    if !self.maps[a].contains(&composite) {
                        return bad(format!("composite {a} -> {b} -> .. missing"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl PartialEq for FusionSystem {
    fn eq(&self, other: &Self) -> bool {
        self.same_homs(other)
    }
}

pub(crate) fn aut_p(lattice: &SubgroupLattice, q: SubgroupId) -> BTreeSet<Vec<ElemId>> {
    lattice
        .group()
        .ids()
        .filter_map(|g| lattice.conjugation_map(q, g))
        .collect()
}

/// Inverse of an isomorphism `a -> b`, as a map on `b`.
pub(crate) fn inverse_map(
    lattice: &SubgroupLattice,
    a: SubgroupId,
    map: &[ElemId],
    b: SubgroupId,
) -> Vec<ElemId> {
    let mut inv = vec![0; map.len()];
    for (&x, &y) in lattice.members(a).iter().zip(map) {
        inv[lattice.position(b, y).expect("image lies in b")] = x;
    }
    inv
}

fn identity_embedding(base: &PermGroup) -> Vec<ElemId> {
    base.ids().collect()
}

/// For each subgroup `A` of the lattice, the distinct maps `x ↦ g⁻¹ x g`
/// with `A^g` inside the base, over the given conjugators `g` of `ambient`.
/// `embed[i]` is the ambient id of base element `i`.
fn conjugation_maps(
    lattice: &SubgroupLattice,
    ambient: &PermGroup,
    embed: &[ElemId],
    conjugators: impl Iterator<Item = ElemId> + Clone,
) -> Vec<BTreeSet<Vec<ElemId>>> {
    let mut back: Vec<Option<ElemId>> = vec![None; ambient.order()];
    for (i, &g) in embed.iter().enumerate() {
        back[g as usize] = Some(i as ElemId);
    }
    lattice
        .ids()
        .map(|a| {
            let members = lattice.members(a);
            conjugators
                .clone()
                .filter_map(|g| {
                    members
                        .iter()
                        .map(|&x| back[ambient.conj(embed[x as usize], g) as usize])
                        .collect::<Option<Vec<ElemId>>>()
                })
                .collect()
        })
        .collect()
}

/// `F_P(G)`: hom sets from conjugation by every element of `G`.
pub fn fusion_of_group(
    g: &Arc<PermGroup>,
    p_sub: &Subgroup,
    p: u64,
    limits: &Limits,
) -> Result<FusionSystem> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    match require_sylow(g, p_sub)? {
        Some(q) if q != p => {
            return Err(Error::NotPGroup {
                order: p_sub.order(),
                p,
            })
        }
        None if arith::p_part(g.order() as u64, p) != 1 => {
            return Err(Error::NotSylow {
                p,
                order: 1,
                expected: arith::p_part(g.order() as u64, p) as usize,
            })
        }
        _ => {}
    }
    let lattice = SubgroupLattice::new(p_sub.group().clone(), limits)?;
    let embed: Vec<ElemId> = p_sub.ids().collect();
    let maps = conjugation_maps(&lattice, g, &embed, g.ids());
    Ok(FusionSystem::from_maps(
        p,
        lattice,
        maps,
        Some(Provenance {
            group: g.clone(),
            sylow: p_sub.clone(),
        }),
    ))
}

/// `F_P(P)`.
pub fn inner_fusion(p_group: &Arc<PermGroup>, p: u64, limits: &Limits) -> Result<FusionSystem> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !p_group.is_p_group(p) {
        return Err(Error::NotPGroup {
            order: p_group.order(),
            p,
        });
    }
    let lattice = SubgroupLattice::new(p_group.clone(), limits)?;
    Ok(FusionSystem::inner_on(&lattice, p))
}

/// `|N_G(Q) : C_G(Q)|` is a power of `p` for every `Q ≤ P`.
pub fn frobenius_criterion(
    g: &Arc<PermGroup>,
    p_sub: &Subgroup,
    p: u64,
    limits: &Limits,
) -> Result<bool> {
    require_sylow(g, p_sub)?;
    for q in all_subgroups(p_sub.group(), limits)? {
        let q = q.lift(g)?;
        let n = normalizer(g, &q)?.order() as u64;
        let c = centralizer_of(g, &q)?.order() as u64;
        if !arith::is_power_of(n / c, p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Q` as a member set of the base, for callers holding element ids.
pub(crate) fn set_of(
    lattice: &SubgroupLattice,
    ids: impl IntoIterator<Item = ElemId>,
) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(lattice.group().order());
    for x in ids {
        s.insert(x as usize);
    }
    s
}
