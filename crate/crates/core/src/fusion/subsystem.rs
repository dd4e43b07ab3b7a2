use std::collections::BTreeSet;
use std::sync::Arc;

use super::lattice::{SubgroupId, SubgroupLattice};
use super::system::{inverse_map, set_of, FusionMorphism, FusionSystem};
use crate::error::{Error, Result};
use crate::permcore::{automorphism_group, ElemId, GroupHom, Limits, Subgroup};

#[derive(Debug, Clone)]
enum Auts {
    All,
    Set(BTreeSet<Vec<ElemId>>),
}

/// A subgroup `K ≤ Aut(Q)` for a subgroup `Q` of the base `p`-group.
///
/// Automorphisms are element maps aligned with the sorted members of `Q`,
/// valued in base-group ids.
#[derive(Debug, Clone)]
pub struct AutSetK {
    q: Subgroup,
    auts: Auts,
}

impl AutSetK {
    /// `K = Aut(Q)`.
    pub fn full(q: &Subgroup) -> Self {
        AutSetK {
            q: q.clone(),
            auts: Auts::All,
        }
    }

    /// `K = 1`.
    pub fn trivial(q: &Subgroup) -> Self {
        AutSetK {
            q: q.clone(),
            auts: Auts::Set(BTreeSet::from([q.ids().collect()])),
        }
    }

    /// `K = Aut_P(Q)`, conjugation by `N_P(Q)` where `P` is `q`'s parent.
    pub fn from_p(q: &Subgroup) -> Self {
        let parent = q.parent();
        let members: Vec<ElemId> = q.ids().collect();
        let auts = parent
            .ids()
            .filter_map(|g| {
                members
                    .iter()
                    .map(|&x| {
                        let y = parent.conj(x, g);
                        q.contains_id(y).then_some(y)
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .collect();
        AutSetK {
            q: q.clone(),
            auts: Auts::Set(auts),
        }
    }

    /// An explicit set of automorphisms of `Q.group()`; must contain the
    /// identity and be closed under composition.
    pub fn from_homs(q: &Subgroup, homs: &[GroupHom]) -> Result<Self> {
        let local = q.group();
        let ids: Vec<ElemId> = q.ids().collect();
        let mut auts = BTreeSet::new();
        for h in homs {
            if h.source().elements() != local.elements()
                || h.target().elements() != local.elements()
                || !h.is_injective()
                || !h.is_homomorphism()
            {
                return Err(Error::BadMorphism("not an automorphism of Q".into()));
            }
            auts.insert(h.map().iter().map(|&y| ids[y as usize]).collect::<Vec<_>>());
        }
        let k = AutSetK {
            q: q.clone(),
            auts: Auts::Set(auts),
        };
        k.check_closed()?;
        Ok(k)
    }

    pub fn q(&self) -> &Subgroup {
        &self.q
    }

    /// The automorphisms, materializing `Aut(Q)` when `K` is all of it.
    pub fn auts(&self, limits: &Limits) -> Result<BTreeSet<Vec<ElemId>>> {
        match &self.auts {
            Auts::Set(s) => Ok(s.clone()),
            Auts::All => {
                let ids: Vec<ElemId> = self.q.ids().collect();
                Ok(automorphism_group(self.q.group(), limits)?
                    .iter()
                    .map(|h| h.map().iter().map(|&y| ids[y as usize]).collect())
                    .collect())
            }
        }
    }

    fn admits(&self, restricted: &[ElemId]) -> bool {
        match &self.auts {
            Auts::All => true,
            Auts::Set(s) => s.contains(restricted),
        }
    }

    fn check_closed(&self) -> Result<()> {
        let Auts::Set(s) = &self.auts else {
            return Ok(());
        };
        let ids: Vec<ElemId> = self.q.ids().collect();
        if !s.contains(&ids) {
            return Err(Error::NotClosed("K does not contain the identity".into()));
        }
        let pos = |x: ElemId| ids.binary_search(&x).expect("automorphism stays in Q");
        for a in s {
            for b in s {
                let ab: Vec<ElemId> = a.iter().map(|&y| b[pos(y)]).collect();
                if !s.contains(&ab) {
                    return Err(Error::NotClosed("K is not closed under composition".into()));
                }
            }
        }
        Ok(())
    }
}

/// Moves a map from one lattice to another over a group sharing the
/// relevant elements.
fn translate(
    from: &SubgroupLattice,
    source: SubgroupId,
    map: &[ElemId],
    to: &SubgroupLattice,
) -> Option<(SubgroupId, Vec<ElemId>)> {
    let (fg, tg) = (from.group(), to.group());
    let src = to.id_of_elements(
        from.members(source)
            .iter()
            .map(|&x| tg.index_of(fg.element(x)))
            .collect::<Option<Vec<_>>>()?,
    )?;
    // members are sorted by permutation in both groups, so positions agree
    let image = map
        .iter()
        .map(|&y| tg.index_of(fg.element(y)))
        .collect::<Option<Vec<_>>>()?;
    Some((src, image))
}

impl FusionSystem {
    /// `N_F^K(Q)`: base `N_P^K(Q)`, keeping the morphisms `φ: A → B` that
    /// extend to some `φ̄: QA → QB` with `φ̄(Q) = Q` and `φ̄|_Q ∈ K`.
    pub fn k_normalizer(&self, k: &AutSetK, limits: &Limits) -> Result<FusionSystem> {
        let lat = self.lattice();
        let base = self.base();
        let q = self.id_of(k.q())?;
        if k.q().parent().elements() != base.elements() {
            return Err(Error::NotContained(
                "K acts on a subgroup of another group".into(),
            ));
        }
        k.check_closed()?;

        let n_members = base
            .ids()
            .filter(|&x| lat.conjugation_map(q, x).is_some_and(|m| k.admits(&m)));
        let n_set = set_of(lat, n_members);
        let n_sub = Subgroup::from_members(base.clone(), n_set);
        let n_lat = if n_sub.is_whole() {
            lat.clone()
        } else {
            SubgroupLattice::new(n_sub.group().clone(), limits)?
        };

        let mut maps = vec![BTreeSet::new(); n_lat.len()];
        for (a_local, slot) in maps.iter_mut().enumerate() {
            let a = lat.id_of(n_lat.subgroup(a_local))?;
            let qa = lat.join(q, a);
            let mut extendable = BTreeSet::new();
            for ext in self.maps_from(qa) {
                let on_q = lat.restrict(qa, ext, q);
                if on_q.iter().all(|&y| lat.contains(q, y)) && k.admits(&on_q) {
                    extendable.insert(lat.restrict(qa, ext, a));
                }
            }
            for m in self.maps_from(a) {
                if !extendable.contains(m) || !m.iter().all(|&y| n_sub.contains_id(y)) {
                    continue;
                }
                let (src, image) = translate(lat, a, m, &n_lat)
                    .ok_or_else(|| Error::Inconsistency("morphism leaves N_P^K(Q)".into()))?;
                debug_assert_eq!(src, a_local);
                slot.insert(image);
            }
        }
        Ok(FusionSystem::from_maps(self.p(), n_lat, maps, None))
    }

    /// `N_F(Q)`.
    pub fn normalizer(&self, q: &Subgroup, limits: &Limits) -> Result<FusionSystem> {
        self.k_normalizer(&AutSetK::full(&self.on_base(q)?), limits)
    }

    /// `C_F(Q)`.
    pub fn centralizer(&self, q: &Subgroup, limits: &Limits) -> Result<FusionSystem> {
        self.k_normalizer(&AutSetK::trivial(&self.on_base(q)?), limits)
    }

    /// `PC_F(Q)`, read as `N_F^K(Q)` with `K = Aut_P(Q)`.
    pub fn p_centralizer(&self, q: &Subgroup, limits: &Limits) -> Result<FusionSystem> {
        self.k_normalizer(&AutSetK::from_p(&self.on_base(q)?), limits)
    }

    fn on_base(&self, q: &Subgroup) -> Result<Subgroup> {
        Ok(self.lattice().subgroup(self.id_of(q)?).clone())
    }

    /// `Q ⊴ F`, i.e. `N_F(Q) = F`.
    pub fn is_normal_subgroup(&self, q: &Subgroup, limits: &Limits) -> Result<bool> {
        let q = self.on_base(q)?;
        if !q.is_normal_in(&Subgroup::whole(self.base())) {
            return Ok(false);
        }
        Ok(self.normalizer(&q, limits)?.same_homs(self))
    }

    /// `O_p(F)`: the largest subgroup normal in `F`.
    pub fn o_p(&self, limits: &Limits) -> Result<Subgroup> {
        let lat = self.lattice();
        let mut normal = Vec::new();
        for id in lat.ids().rev() {
            if self.is_normal_subgroup(lat.subgroup(id), limits)? {
                normal.push(id);
            }
        }
        let largest = *normal
            .first()
            .ok_or_else(|| Error::Inconsistency("the trivial subgroup is not normal".into()))?;
        if normal.iter().any(|&n| !lat.is_subset(n, largest)) {
            return Err(Error::Inconsistency(
                "normal subgroups of F are not closed under joins".into(),
            ));
        }
        Ok(lat.subgroup(largest).clone())
    }

    /// All morphisms re-expressed over another lattice whose base contains
    /// this one's base.
    pub fn morphisms_over(&self, lattice: &SubgroupLattice) -> Result<Vec<FusionMorphism>> {
        self.isomorphisms()
            .map(|m| {
                let (source, map) = translate(self.lattice(), m.source, &m.map, lattice)
                    .ok_or_else(|| Error::NotContained("base is not contained".into()))?;
                let target = lattice
                    .image(&map)
                    .ok_or_else(|| Error::Inconsistency("image is not a subgroup".into()))?;
                Ok(FusionMorphism {
                    source,
                    target,
                    map,
                })
            })
            .collect()
    }
}

/// The smallest family over `lattice` containing the `P`-conjugations and
/// `seed`, closed under restriction, inversion of isomorphisms and
/// composition. Not necessarily saturated.
pub fn generated_subsystem(
    lattice: &Arc<SubgroupLattice>,
    p: u64,
    seed: &[FusionMorphism],
) -> Result<FusionSystem> {
    let base = lattice.group();
    for m in seed {
        if m.source >= lattice.len() || m.target >= lattice.len() {
            return Err(Error::BadMorphism("unknown subgroup".into()));
        }
        let members = lattice.members(m.source);
        if m.map.len() != members.len() || m.map.iter().any(|&y| y as usize >= base.order()) {
            return Err(Error::BadMorphism("map does not cover the source".into()));
        }
        if !m.map.iter().all(|&y| lattice.contains(m.target, y)) {
            return Err(Error::BadMorphism("image escapes the target".into()));
        }
        let image = lattice.image(&m.map);
        if image.map(|b| lattice.order(b)) != Some(members.len()) {
            return Err(Error::BadMorphism(
                "map is not injective onto a subgroup".into(),
            ));
        }
        for (i, &x) in members.iter().enumerate() {
            for (j, &y) in members.iter().enumerate() {
                if lattice.apply(m.source, &m.map, base.mul(x, y)) != base.mul(m.map[i], m.map[j]) {
                    return Err(Error::BadMorphism("map is not a homomorphism".into()));
                }
            }
        }
    }

    let mut maps = FusionSystem::inner_on(lattice, p).into_maps();
    let mut work: Vec<(SubgroupId, Vec<ElemId>)> = Vec::new();
    for a in lattice.ids() {
        for m in &maps[a] {
            work.push((a, m.clone()));
        }
    }
    for m in seed {
        if maps[m.source].insert(m.map.clone()) {
            work.push((m.source, m.map.clone()));
        }
    }

    let image = |m: &[ElemId]| lattice.image(m).expect("closure preserves subgroups");
    while let Some((a, m)) = work.pop() {
        let b = image(&m);
        let mut fresh: Vec<(SubgroupId, Vec<ElemId>)> = Vec::new();
        for &c in lattice.proper_subgroups(a) {
            fresh.push((c, lattice.restrict(a, &m, c)));
        }
        fresh.push((b, inverse_map(lattice, a, &m, b)));
        for n in &maps[b] {
            fresh.push((a, m.iter().map(|&y| lattice.apply(b, n, y)).collect()));
        }
        // maps into `a` are inverses of maps out of `a`
        for w in &maps[a] {
            let c = image(w);
            let w_inv = inverse_map(lattice, a, w, c);
            fresh.push((c, w_inv.iter().map(|&x| lattice.apply(a, &m, x)).collect()));
        }
        for (src, map) in fresh {
            if maps[src].insert(map.clone()) {
                work.push((src, map));
            }
        }
    }
    Ok(FusionSystem::from_maps(p, lattice.clone(), maps, None))
}
