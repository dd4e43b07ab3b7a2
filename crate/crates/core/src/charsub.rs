//! Thompson subgroup `J(P)`, its center `Z(J(P))`, and strongly closed
//! subgroups of a Sylow subgroup.
//!
//! `J(P)` here is generated by the abelian subgroups of `P` of maximal order.
//! Other variants (elementary abelian, maximal rank) are not provided.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::permcore::arith;
use crate::permcore::{
    all_subgroups, center, is_strongly_closed_group, Limits, PermGroup, Subgroup,
};

/// `J(P)`, `Z(J(P))` and the abelian subgroups that generate `J(P)`, all as
/// subgroups of `base`.
#[derive(Debug, Clone)]
pub struct CharSubReport {
    pub base: Arc<PermGroup>,
    pub thompson: Subgroup,
    pub z_of_j: Subgroup,
    pub witness_abelians: Vec<Subgroup>,
}

fn require_p_group(p_group: &PermGroup) -> Result<()> {
    if p_group.order() == 1 || p_group.prime_of_p_group().is_some() {
        Ok(())
    } else {
        Err(Error::NotPGroup {
            order: p_group.order(),
            p: arith::prime_divisors(p_group.order() as u64)[0],
        })
    }
}

/// The abelian subgroups of `P` whose order is maximal among abelian
/// subgroups. Never empty.
pub fn abelian_subgroups_max_order(
    p_group: &Arc<PermGroup>,
    limits: &Limits,
) -> Result<Vec<Subgroup>> {
    require_p_group(p_group)?;
    let abelian: Vec<Subgroup> = all_subgroups(p_group, limits)?
        .into_iter()
        .filter(Subgroup::is_abelian)
        .collect();
    let max = abelian.iter().map(Subgroup::order).max().unwrap_or(1);
    Ok(abelian.into_iter().filter(|a| a.order() == max).collect())
}

pub fn char_sub_report(p_group: &Arc<PermGroup>, limits: &Limits) -> Result<CharSubReport> {
    let witness_abelians = abelian_subgroups_max_order(p_group, limits)?;
    let mut thompson = witness_abelians[0].clone();
    for a in &witness_abelians[1..] {
        thompson = thompson.join(a);
    }
    let z_of_j = center(thompson.group()).lift(p_group)?;
    Ok(CharSubReport {
        base: p_group.clone(),
        thompson,
        z_of_j,
        witness_abelians,
    })
}

pub fn thompson_subgroup(p_group: &Arc<PermGroup>, limits: &Limits) -> Result<Subgroup> {
    Ok(char_sub_report(p_group, limits)?.thompson)
}

/// `Z(J(P))`, as a subgroup of `P`.
pub fn zj(p_group: &Arc<PermGroup>, limits: &Limits) -> Result<Subgroup> {
    Ok(char_sub_report(p_group, limits)?.z_of_j)
}

/// Every `Q ≤ P` strongly closed in `P` with respect to `G`, canonical order.
///
/// `p_sub` must be a Sylow subgroup of `g`; the results are subgroups of `g`.
pub fn enumerate_strongly_closed(
    g: &Arc<PermGroup>,
    p_sub: &Subgroup,
    limits: &Limits,
) -> Result<Vec<Subgroup>> {
    require_sylow(g, p_sub)?;
    let mut out = Vec::new();
    for q in all_subgroups(p_sub.group(), limits)? {
        let q = q.lift(g)?;
        if is_strongly_closed_group(g, p_sub, &q)? {
            out.push(q);
        }
    }
    Ok(out)
}

/// Checks that `p_sub` is a Sylow subgroup of `g` for the prime dividing its
/// order; returns that prime (`None` for the trivial subgroup of a
/// group whose order it does not matter for).
pub(crate) fn require_sylow(g: &Arc<PermGroup>, p_sub: &Subgroup) -> Result<Option<u64>> {
    if !Arc::ptr_eq(g, p_sub.parent()) && g.elements() != p_sub.parent().elements() {
        return Err(Error::NotContained("P is not a subgroup of G".into()));
    }
    if p_sub.is_trivial() {
        return Ok(None);
    }
    let Some(p) = p_sub.group().prime_of_p_group() else {
        return Err(Error::NotPGroup {
            order: p_sub.order(),
            p: arith::prime_divisors(p_sub.order() as u64)[0],
        });
    };
    let expected = arith::p_part(g.order() as u64, p) as usize;
    if p_sub.order() != expected {
        return Err(Error::NotSylow {
            p,
            order: p_sub.order(),
            expected,
        });
    }
    Ok(Some(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::{group_closure, sylow, Permutation};

    fn grp(gens: &[&str], n: usize) -> Arc<PermGroup> {
        let gens: Vec<_> = gens
            .iter()
            .map(|s| Permutation::parse(s, n).unwrap())
            .collect();
        Arc::new(group_closure(&gens, n, &Limits::default()).unwrap())
    }

    #[test]
    fn abelian_group_is_its_own_thompson_subgroup() {
        let lim = Limits::default();
        let c4xc2 = grp(&["(1 2 3 4)", "(5 6)"], 6);
        let r = char_sub_report(&c4xc2, &lim).unwrap();
        assert_eq!(r.witness_abelians.len(), 1);
        assert!(r.thompson.is_whole() && r.z_of_j.is_whole());
        let c5 = grp(&["(1 2 3 4 5)"], 5);
        assert!(zj(&c5, &lim).unwrap().is_whole());
    }

    #[test]
    fn dihedral_and_quaternion() {
        let lim = Limits::default();
        let d8 = grp(&["(1 2 3 4)", "(1 3)"], 4);
        let maxab = abelian_subgroups_max_order(&d8, &lim).unwrap();
        assert_eq!(maxab.len(), 3);
        assert!(maxab.iter().all(|a| a.order() == 4));
        assert_eq!(
            maxab
                .iter()
                .filter(|a| a.ids().any(|x| d8.element_order(x) == 4))
                .count(),
            1
        );
        let r = char_sub_report(&d8, &lim).unwrap();
        assert!(r.thompson.is_whole());
        assert_eq!(r.z_of_j.order(), 2);
        assert_eq!(r.z_of_j, center(&d8));

        let q8 = grp(&["(1 3 2 4)(5 8 6 7)", "(1 5 2 6)(3 7 4 8)"], 8);
        let maxab = abelian_subgroups_max_order(&q8, &lim).unwrap();
        assert_eq!(maxab.len(), 3);
        assert!(maxab
            .iter()
            .all(|a| a.order() == 4 && a.ids().any(|x| q8.element_order(x) == 4)));
        assert!(thompson_subgroup(&q8, &lim).unwrap().is_whole());
    }

    #[test]
    fn non_p_group_rejected() {
        let s3 = grp(&["(1 2)", "(1 2 3)"], 3);
        assert!(matches!(
            abelian_subgroups_max_order(&s3, &Limits::default()),
            Err(Error::NotPGroup { .. })
        ));
    }

    #[test]
    fn strongly_closed_in_s4() {
        let lim = Limits::default();
        let s4 = grp(&["(1 2)", "(1 2 3 4)"], 4);
        let p2 = sylow(&s4, 2).unwrap();
        let sc = enumerate_strongly_closed(&s4, &p2, &lim).unwrap();
        assert_eq!(
            sc.iter().map(Subgroup::order).collect::<Vec<_>>(),
            vec![1, 4, 8]
        );
        let p3 = sylow(&s4, 3).unwrap();
        let sc = enumerate_strongly_closed(&s4, &p3, &lim).unwrap();
        assert_eq!(
            sc.iter().map(Subgroup::order).collect::<Vec<_>>(),
            vec![1, 3]
        );

        let v4 = Subgroup::generated(
            &s4,
            &[
                Permutation::parse("(1 2)(3 4)", 4).unwrap(),
                Permutation::parse("(1 3)(2 4)", 4).unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(
            enumerate_strongly_closed(&s4, &v4, &lim),
            Err(Error::NotSylow { .. })
        ));
    }
}
