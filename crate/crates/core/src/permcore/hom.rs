use std::collections::VecDeque;
use std::sync::Arc;

use super::group::{ElemId, Limits, PermGroup};
use super::perm::Permutation;
use super::subgroup::Subgroup;
use crate::error::{Error, Result};

/// A homomorphism between materialized groups, stored as a full element map.
#[derive(Clone)]
pub struct GroupHom {
    source: Arc<PermGroup>,
    target: Arc<PermGroup>,
    map: Vec<ElemId>,
}

impl std::fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self
            .source
            .generators()
            .iter()
            .map(|g| format!("{g} -> {}", self.apply(g).unwrap()))
            .collect();
        f.debug_struct("GroupHom")
            .field("generators", &gens)
            .finish()
    }
}

impl GroupHom {
    /// Checks totality and the homomorphism law on every pair.
    pub fn new(source: Arc<PermGroup>, target: Arc<PermGroup>, map: Vec<ElemId>) -> Result<Self> {
        if map.len() != source.order() || map.iter().any(|&y| y as usize >= target.order()) {
            return Err(Error::BadMorphism("map is not total on the source".into()));
        }
        let hom = GroupHom {
            source,
            target,
            map,
        };
        if !hom.is_homomorphism() {
            return Err(Error::BadMorphism("map does not respect products".into()));
        }
        Ok(hom)
    }

    pub fn identity(group: &Arc<PermGroup>) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            map: group.ids().collect(),
        }
    }

    /// Conjugation `x ↦ g⁻¹ x g` restricted to a subgroup `Q` it normalizes,
    /// as an automorphism of `Q.group()`.
    pub fn conjugation(q: &Subgroup, g: ElemId) -> Result<Self> {
        let parent = q.parent();
        let local = q.group().clone();
        let map = q
            .ids()
            .map(|x| {
                let y = parent.conj(x, g);
                local
                    .index_of(parent.element(y))
                    .ok_or_else(|| Error::NotContained("conjugate leaves Q".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupHom {
            source: local.clone(),
            target: local,
            map,
        })
    }

    pub fn source(&self) -> &Arc<PermGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PermGroup> {
        &self.target
    }

    pub fn map(&self) -> &[ElemId] {
        &self.map
    }

    pub fn apply_id(&self, x: ElemId) -> ElemId {
        self.map[x as usize]
    }

    pub fn apply(&self, x: &Permutation) -> Result<Permutation> {
        let id = self.source.require(x)?;
        Ok(self.target.element(self.apply_id(id)).clone())
    }

    pub fn is_homomorphism(&self) -> bool {
        self.source.ids().all(|x| {
            self.source.ids().all(|y| {
                self.map[self.source.mul(x, y) as usize]
                    == self.target.mul(self.map[x as usize], self.map[y as usize])
            })
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        self.map
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }

    /// `self` then `other`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&y| other.map[y as usize]).collect(),
        }
    }
}

impl PartialEq for GroupHom {
    fn eq(&self, other: &Self) -> bool {
        self.map == other.map
    }
}

impl Eq for GroupHom {}

/// Extends a generator assignment along the Cayley graph; `None` when the
/// assignment is inconsistent or not bijective.
fn extend_assignment(q: &PermGroup, gens: &[ElemId], images: &[ElemId]) -> Option<Vec<ElemId>> {
    const UNSET: ElemId = ElemId::MAX;
    let mut map = vec![UNSET; q.order()];
    map[q.identity_id() as usize] = q.identity_id();
    let mut queue = VecDeque::from([q.identity_id()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(images) {
            let y = q.mul(x, s);
            let fy = q.mul(map[x as usize], t);
            match map[y as usize] {
                UNSET => {
                    map[y as usize] = fy;
                    queue.push_back(y);
                }
                prev if prev != fy => return None,
                _ => {}
            }
        }
    }
    let mut hit = vec![false; q.order()];
    for &y in &map {
        if y == UNSET || std::mem::replace(&mut hit[y as usize], true) {
            return None;
        }
    }
    Some(map)
}

/// All automorphisms of `Q`, sorted by their element maps.
///
/// Enumerates images of a greedy generating set over elements of matching
/// order, extends each assignment, and validates the result on all pairs.
pub fn automorphism_group(q: &Arc<PermGroup>, limits: &Limits) -> Result<Vec<GroupHom>> {
    if q.order() > limits.max_subgroup_order {
        return Err(Error::GroupTooLarge {
            cap: limits.max_subgroup_order,
        });
    }
    let gens = Subgroup::whole(q).generator_ids();
    let candidates: Vec<Vec<ElemId>> = gens
        .iter()
        .map(|&g| {
            let order = q.element_order(g);
            q.ids().filter(|&y| q.element_order(y) == order).collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<ElemId> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(map) = extend_assignment(q, &gens, &images) {
            out.push(GroupHom::new(q.clone(), q.clone(), map)?);
        }
        // odometer over the candidate lists
        let mut k = 0;
        loop {
            if k == choice.len() {
                out.sort_by(|a, b| a.map.cmp(&b.map));
                return Ok(out);
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}
