//! Saturation in the fully automized + receptive formulation: every
//! `F`-conjugacy class of subgroups has a member `Q` with `Aut_P(Q)` Sylow in
//! `Aut_F(Q)` such that every `F`-isomorphism `φ: Q' → Q` extends to `N_φ`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::lattice::SubgroupId;
use super::system::{inverse_map, FusionSystem};
use crate::permcore::arith;
use crate::permcore::ElemId;

/// Why a class of subgroups fails the saturation axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaturationFailure {
    /// Orders of the subgroups in the failing `F`-conjugacy class.
    pub class_orders: Vec<usize>,
    /// Per class member: `(|Aut_F(Q)|, |Aut_P(Q)|, fully automized, receptive)`.
    pub members: Vec<(usize, usize, bool, bool)>,
}

impl FusionSystem {
    /// `F`-conjugacy classes of subgroups, each sorted, in order of first member.
    pub fn subgroup_classes(&self) -> Vec<Vec<SubgroupId>> {
        let lat = self.lattice();
        let mut class_of = vec![usize::MAX; lat.len()];
        let mut classes: Vec<BTreeSet<SubgroupId>> = Vec::new();
        for a in lat.ids() {
            if class_of[a] != usize::MAX {
                continue;
            }
            // maps are closed under inversion and composition in a
            // well-formed system, so images of `a` form its whole class
            let mut class = BTreeSet::from([a]);
            let mut stack = vec![a];
            while let Some(x) = stack.pop() {
                for m in self.maps_from(x) {
                    let b = self.image_of(m);
                    if class.insert(b) {
                        stack.push(b);
                    }
                }
            }
            for &b in &class {
                class_of[b] = classes.len();
            }
            classes.push(class);
        }
        classes
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect()
    }

    /// `Aut_P(Q)` is a Sylow `p`-subgroup of `Aut_F(Q)`.
    pub fn is_fully_automized(&self, q: SubgroupId) -> bool {
        let aut_f = self.aut_f(q);
        let aut_p = self.aut_p(q);
        aut_p.is_subset(&aut_f) && aut_p.len() as u64 == arith::p_part(aut_f.len() as u64, self.p())
    }

    /// Every `F`-isomorphism onto `Q` extends to `N_φ`.
    pub fn is_receptive(&self, q: SubgroupId) -> bool {
        let lat = self.lattice();
        let base = self.base();
        let aut_p_q = self.aut_p(q);
        for src in lat.ids().filter(|&s| lat.order(s) == lat.order(q)) {
            for phi in self.maps_from(src).iter().filter(|m| self.image_of(m) == q) {
                let phi_inv = inverse_map(lat, src, phi, q);
                let n_phi: Vec<ElemId> = base
                    .ids()
                    .filter(|&g| {
                        let Some(cg) = lat.conjugation_map(src, g) else {
                            return false;
                        };
                        // y ↦ φ(c_g(φ⁻¹(y))) on Q
                        let twisted: Vec<ElemId> = phi_inv
                            .iter()
                            .map(|&x| lat.apply(src, phi, lat.apply(src, &cg, x)))
                            .collect();
                        aut_p_q.contains(&twisted)
                    })
                    .collect();
                let Some(n) = lat.id_of_elements(n_phi) else {
                    return false;
                };
                let extends = self
                    .maps_from(n)
                    .iter()
                    .any(|ext| lat.restrict(n, ext, src) == *phi);
                if !extends {
                    return false;
                }
            }
        }
        true
    }

    pub fn saturation_failure(&self) -> Option<SaturationFailure> {
        let lat = self.lattice();
        for class in self.subgroup_classes() {
            let members: Vec<(usize, usize, bool, bool)> = class
                .iter()
                .map(|&q| {
                    (
                        self.aut_f(q).len(),
                        self.aut_p(q).len(),
                        self.is_fully_automized(q),
                        self.is_receptive(q),
                    )
                })
                .collect();
            if !members.iter().any(|&(_, _, fa, r)| fa && r) {
                return Some(SaturationFailure {
                    class_orders: class.iter().map(|&q| lat.order(q)).collect(),
                    members,
                });
            }
        }
        None
    }

    pub fn is_saturated(&self) -> bool {
        self.saturation_failure().is_none()
    }
}
