use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::permcore::{all_subgroups, ElemId, Limits, PermGroup, Subgroup};

/// Index of a subgroup inside a [`SubgroupLattice`].
pub type SubgroupId = usize;

/// All subgroups of a `p`-group, in canonical order, with lookup by member
/// set. Subgroup `0` is trivial and the last one is the whole group.
pub struct SubgroupLattice {
    group: Arc<PermGroup>,
    subgroups: Vec<Subgroup>,
    members: Vec<Vec<ElemId>>,
    lookup: HashMap<FixedBitSet, SubgroupId>,
    overgroups: Vec<usize>,
    proper_subgroups: Vec<Vec<SubgroupId>>,
}

impl std::fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubgroupLattice")
            .field("order", &self.group.order())
            .field("subgroups", &self.subgroups.len())
            .finish()
    }
}

impl SubgroupLattice {
    pub fn new(group: Arc<PermGroup>, limits: &Limits) -> Result<Arc<Self>> {
        let subgroups = all_subgroups(&group, limits)?;
        let members: Vec<Vec<ElemId>> = subgroups.iter().map(|s| s.ids().collect()).collect();
        let lookup = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members().clone(), i))
            .collect();
        let n = subgroups.len();
        let mut overgroups = vec![0; n];
        let mut proper_subgroups = vec![Vec::new(); n];
        for (a, sa) in subgroups.iter().enumerate() {
            for (b, sb) in subgroups.iter().enumerate() {
                if sa.is_subset_of(sb) {
                    overgroups[a] += 1;
                    if a != b {
                        proper_subgroups[b].push(a);
                    }
                }
            }
        }
        Ok(Arc::new(SubgroupLattice {
            group,
            subgroups,
            members,
            lookup,
            overgroups,
            proper_subgroups,
        }))
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn ids(&self) -> std::ops::Range<SubgroupId> {
        0..self.subgroups.len()
    }

    pub fn subgroup(&self, id: SubgroupId) -> &Subgroup {
        &self.subgroups[id]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// Sorted element ids of subgroup `id`.
    pub fn members(&self, id: SubgroupId) -> &[ElemId] {
        &self.members[id]
    }

    pub fn order(&self, id: SubgroupId) -> usize {
        self.members[id].len()
    }

    pub fn trivial(&self) -> SubgroupId {
        0
    }

    pub fn whole(&self) -> SubgroupId {
        self.subgroups.len() - 1
    }

    /// Number of subgroups containing `id`, itself included.
    pub fn overgroup_count(&self, id: SubgroupId) -> usize {
        self.overgroups[id]
    }

    pub fn proper_subgroups(&self, id: SubgroupId) -> &[SubgroupId] {
        &self.proper_subgroups[id]
    }

    pub fn contains(&self, id: SubgroupId, x: ElemId) -> bool {
        self.subgroups[id].contains_id(x)
    }

    pub fn is_subset(&self, a: SubgroupId, b: SubgroupId) -> bool {
        self.subgroups[a].is_subset_of(&self.subgroups[b])
    }

    pub fn id_of_set(&self, set: &FixedBitSet) -> Option<SubgroupId> {
        self.lookup.get(set).copied()
    }

    /// The subgroup whose members are exactly `elements`, if there is one.
    pub fn id_of_elements(&self, elements: impl IntoIterator<Item = ElemId>) -> Option<SubgroupId> {
        let mut set = FixedBitSet::with_capacity(self.group.order());
        for x in elements {
            set.insert(x as usize);
        }
        self.id_of_set(&set)
    }

    /// Locates a subgroup given in any ambient group containing it.
    pub fn id_of(&self, q: &Subgroup) -> Result<SubgroupId> {
        let mut set = FixedBitSet::with_capacity(self.group.order());
        for x in q.elements() {
            let id = self
                .group
                .index_of(x)
                .ok_or_else(|| Error::NotContained(format!("{x} is not in the base p-group")))?;
            set.insert(id as usize);
        }
        self.id_of_set(&set)
            .ok_or_else(|| Error::Inconsistency("element set is not a subgroup".into()))
    }

    pub fn join(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        let j = self.subgroups[a].join(&self.subgroups[b]);
        self.lookup[j.members()]
    }

    /// Position of `x` inside `members(id)`.
    pub fn position(&self, id: SubgroupId, x: ElemId) -> Option<usize> {
        self.members[id].binary_search(&x).ok()
    }

    /// Image of `x` under a map defined on `source`.
    pub fn apply(&self, source: SubgroupId, map: &[ElemId], x: ElemId) -> ElemId {
        map[self
            .position(source, x)
            .expect("element lies in the source")]
    }

    /// Restriction of a map on `source` to the subgroup `sub ⊆ source`.
    pub fn restrict(&self, source: SubgroupId, map: &[ElemId], sub: SubgroupId) -> Vec<ElemId> {
        self.members[sub]
            .iter()
            .map(|&x| self.apply(source, map, x))
            .collect()
    }

    /// The subgroup hit by `map`; `None` if the image is not a subgroup.
    pub fn image(&self, map: &[ElemId]) -> Option<SubgroupId> {
        self.id_of_elements(map.iter().copied())
    }

    /// Conjugation by `g` on subgroup `id`, when `g` normalizes it.
    pub fn conjugation_map(&self, id: SubgroupId, g: ElemId) -> Option<Vec<ElemId>> {
        self.members[id]
            .iter()
            .map(|&x| {
                let y = self.group.conj(x, g);
                self.contains(id, y).then_some(y)
            })
            .collect()
    }

    /// Same lattice if the base groups have the same elements.
    pub fn same_base(&self, other: &SubgroupLattice) -> bool {
        self.group.elements() == other.group.elements()
    }
}
