use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::report::{SkipReason, Status, Theorem, VerificationReport};
use crate::charsub::{char_sub_report, enumerate_strongly_closed, zj};
use crate::error::{Error, Result};
use crate::fusion::{frobenius_criterion, fusion_of_group, FusionSystem};
use crate::permcore::arith;
use crate::permcore::{
    all_subgroups, derived_subgroup, frattini, normalizer, strong_closure_violation_group, sylow,
    Limits, PermGroup, Subgroup,
};

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub include_even_p_exploratory: bool,
}

type CachedFusion = std::result::Result<Arc<FusionSystem>, (bool, String)>;

/// A group, a prime dividing its order, its Sylow subgroup, and the fusion
/// system built at most once and shared by every verifier.
pub struct GroupContext {
    pub name: String,
    pub group: Arc<PermGroup>,
    pub p: u64,
    pub sylow: Subgroup,
    pub limits: Limits,
    fusion: OnceLock<CachedFusion>,
    digest: OnceLock<u64>,
    builds: AtomicUsize,
}

impl GroupContext {
    pub fn new(name: &str, group: Arc<PermGroup>, p: u64, limits: Limits) -> Result<Self> {
        let sylow = sylow(&group, p)?;
        Ok(GroupContext {
            name: name.to_string(),
            group,
            p,
            sylow,
            limits,
            fusion: OnceLock::new(),
            digest: OnceLock::new(),
            builds: AtomicUsize::new(0),
        })
    }

    /// `F_P(G)`, constructed on first use.
    pub fn fusion(&self) -> Result<Arc<FusionSystem>> {
        let cached = self.fusion.get_or_init(|| {
            self.builds.fetch_add(1, Ordering::SeqCst);
            match fusion_of_group(&self.group, &self.sylow, self.p, &self.limits) {
                Ok(f) => {
                    let _ = self.digest.set(f.digest());
                    Ok(Arc::new(f))
                }
                Err(e) => Err((matches!(e, Error::GroupTooLarge { .. }), e.to_string())),
            }
        });
        match cached {
            Ok(f) => {
                if Some(&f.digest()) != self.digest.get() {
                    return Err(Error::Inconsistency("cached fusion system changed".into()));
                }
                Ok(f.clone())
            }
            Err((true, _)) => Err(Error::GroupTooLarge {
                cap: self.limits.max_subgroup_order,
            }),
            Err((false, msg)) => Err(Error::Inconsistency(msg.clone())),
        }
    }

    /// How many times the fusion system was constructed (0 or 1).
    pub fn fusion_builds(&self) -> usize {
        self.builds.load(Ordering::SeqCst)
    }

    fn report(&self, theorem: Theorem) -> VerificationReport {
        VerificationReport::new(
            &self.name,
            Some(self.group.order() as u128),
            Some(self.p),
            theorem,
            Status::Pass,
        )
    }
}

fn gens_of(s: &Subgroup) -> Vec<String> {
    s.group()
        .generators()
        .iter()
        .map(|g| g.to_string())
        .collect()
}

fn equivalence_status(lhs: bool, rhs: bool) -> Status {
    if lhs == rhs {
        Status::Pass
    } else {
        Status::Counterexample
    }
}

/// Runs one verifier, turning cap errors into skips and any other error into
/// an invariant failure.
pub fn verify(
    ctx: &GroupContext,
    theorem: Theorem,
    opts: &VerifyOptions,
) -> Vec<VerificationReport> {
    let start = Instant::now();
    let exploratory = theorem.requires_odd_p() && ctx.p == 2;
    if exploratory && !opts.include_even_p_exploratory {
        let mut r = ctx.report(theorem);
        r.status = Status::Skipped;
        r.skip_reason = Some(SkipReason::EvenP);
        r.detail = Some(format!("Theorem {theorem} requires odd p"));
        return vec![r];
    }
    let result = match theorem {
        Theorem::A => verify_theorem_a(ctx),
        Theorem::B => verify_theorem_b(ctx).map(|r| vec![r]),
        Theorem::C => verify_corollary_c(ctx).map(|r| vec![r]),
        Theorem::Kizmaz => verify_kizmaz(ctx),
        Theorem::Generation => verify_generation(ctx).map(|r| vec![r]),
        Theorem::Frobenius => verify_frobenius(ctx).map(|r| vec![r]),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let mut reports = match result {
        Ok(reports) => reports,
        Err(Error::GroupTooLarge { cap }) => {
            let mut r = ctx.report(theorem);
            r.status = Status::Skipped;
            r.skip_reason = Some(SkipReason::OrderCap);
            r.detail = Some(format!("subgroup enumeration cap {cap} exceeded"));
            vec![r]
        }
        Err(e) => {
            let mut r = ctx.report(theorem);
            r.status = Status::InvariantFailure;
            r.detail = Some(e.to_string());
            vec![r]
        }
    };
    for r in &mut reports {
        r.exploratory = exploratory;
        r.wall_time_ms = elapsed;
    }
    reports
}

/// For every strongly closed `D`: `F` nilpotent iff `N_F(Z(J(D)))` nilpotent.
pub fn verify_theorem_a(ctx: &GroupContext) -> Result<Vec<VerificationReport>> {
    let f = ctx.fusion()?;
    let lhs = f.is_nilpotent();
    let closed = enumerate_strongly_closed(&ctx.group, &ctx.sylow, &ctx.limits)?;
    let mut out = Vec::with_capacity(closed.len());
    for (i, d) in closed.iter().enumerate() {
        let z = zj(d.group(), &ctx.limits)?;
        let n = f.normalizer(&z, &ctx.limits)?;
        let rhs = n.is_nilpotent();
        let base_is_p = n.base().order() == f.base().order();
        let literal = base_is_p.then(|| n.same_homs(&FusionSystem::inner_on(f.lattice(), f.p())));
        let divergence = literal.is_some_and(|l| l != rhs);
        let mut r = ctx.report(Theorem::A);
        r.d_index = Some(i);
        r.status = if divergence {
            Status::InvariantFailure
        } else if d.is_trivial() && lhs == rhs {
            Status::DegeneratePass
        } else {
            equivalence_status(lhs, rhs)
        };
        r.witnesses = json!({
            "d_order": d.order(),
            "d_generators": gens_of(d),
            "strongly_closed_count": closed.len(),
            "zj_order": z.order(),
            "zj_generators": gens_of(&z),
            "normalizer_base_order": n.base().order(),
            "base_is_p": base_is_p,
            "lhs_fusion_nilpotent": lhs,
            "rhs_normalizer_nilpotent": rhs,
            "rhs_literal_equals_inner": literal,
            "divergence": divergence,
            "morphisms_f": f.morphism_count(),
            "morphisms_normalizer": n.morphism_count(),
        });
        out.push(r);
    }
    Ok(out)
}

/// `F` nilpotent iff `N_F(P) = F_P(P)` and `Φ(P)` is strongly closed in `F`.
pub fn verify_theorem_b(ctx: &GroupContext) -> Result<VerificationReport> {
    let f = ctx.fusion()?;
    let lhs = f.is_nilpotent();
    let p_whole = Subgroup::whole(f.base());
    let n = f.normalizer(&p_whole, &ctx.limits)?;
    let n_inner = n.same_homs(&FusionSystem::inner_on(f.lattice(), f.p()));
    let phi = frattini(f.base(), &ctx.limits)?;
    let violation = f.strong_closure_violation(&phi)?;
    let rhs = n_inner && violation.is_none();
    let mut r = ctx.report(Theorem::B);
    r.status = equivalence_status(lhs, rhs);
    r.witnesses = json!({
        "lhs_fusion_nilpotent": lhs,
        "normalizer_of_p_is_inner": n_inner,
        "frattini_order": phi.order(),
        "frattini_generators": gens_of(&phi),
        "frattini_strongly_closed": violation.is_none(),
        "frattini_violation": violation.map(|(x, y)| json!({"element": x.to_string(), "fused_to": y.to_string()})),
        "rhs": rhs,
        "morphisms_f": f.morphism_count(),
        "morphisms_normalizer_of_p": n.morphism_count(),
    });
    Ok(r)
}

/// `G` is `p`-nilpotent iff `N_G(P)` is and `Φ(P)` is strongly closed in `G`.
pub fn verify_corollary_c(ctx: &GroupContext) -> Result<VerificationReport> {
    let g = &ctx.group;
    let lhs = g.is_p_nilpotent(ctx.p);
    let n = normalizer(g, &ctx.sylow)?;
    let n_nilpotent = n.group().is_p_nilpotent(ctx.p);
    let phi = frattini(ctx.sylow.group(), &ctx.limits)?.lift(g)?;
    let violation = strong_closure_violation_group(g, &ctx.sylow, &phi)?;
    let rhs = n_nilpotent && violation.is_none();
    let mut r = ctx.report(Theorem::C);
    r.status = equivalence_status(lhs, rhs);
    r.witnesses = json!({
        "lhs_group_p_nilpotent": lhs,
        "sylow_normalizer_order": n.order(),
        "sylow_normalizer_p_nilpotent": n_nilpotent,
        "frattini_order": phi.order(),
        "frattini_strongly_closed": violation.is_none(),
        "frattini_violation": violation.map(|(x, y)| json!({"element": x.to_string(), "conjugate": y.to_string()})),
        "rhs": rhs,
    });
    Ok(r)
}

/// For every strongly closed `D`: `G` is `p`-nilpotent iff `N_G(Z(J(D)))` is.
pub fn verify_kizmaz(ctx: &GroupContext) -> Result<Vec<VerificationReport>> {
    let g = &ctx.group;
    let lhs = g.is_p_nilpotent(ctx.p);
    let closed = enumerate_strongly_closed(g, &ctx.sylow, &ctx.limits)?;
    let mut out = Vec::with_capacity(closed.len());
    for (i, d) in closed.iter().enumerate() {
        let z = zj(d.group(), &ctx.limits)?.lift(g)?;
        let n = normalizer(g, &z)?;
        let rhs = n.group().is_p_nilpotent(ctx.p);
        let mut r = ctx.report(Theorem::Kizmaz);
        r.d_index = Some(i);
        r.status = if d.is_trivial() && lhs == rhs {
            Status::DegeneratePass
        } else {
            equivalence_status(lhs, rhs)
        };
        r.witnesses = json!({
            "d_order": d.order(),
            "d_generators": gens_of(d),
            "strongly_closed_count": closed.len(),
            "zj_order": z.order(),
            "normalizer_of_zj_order": n.order(),
            "lhs_group_p_nilpotent": lhs,
            "rhs_normalizer_p_nilpotent": rhs,
        });
        out.push(r);
    }
    Ok(out)
}

/// `F = ⟨PC_F(Q), N_F(Q C_P(Q))⟩` with `Q = O_p(F)`.
pub fn verify_generation(ctx: &GroupContext) -> Result<VerificationReport> {
    let f = ctx.fusion()?;
    let base = f.base();
    let q = f.o_p(&ctx.limits)?;
    let r_sub = q.join(&crate::permcore::centralizer_of(base, &q)?);
    let pc = f.p_centralizer(&q, &ctx.limits)?;
    let nr = f.normalizer(&r_sub, &ctx.limits)?;
    let mut seed = pc.morphisms_over(f.lattice())?;
    seed.extend(nr.morphisms_over(f.lattice())?);
    let generated = crate::fusion::generated_subsystem(f.lattice(), f.p(), &seed)?;
    let holds = generated.same_homs(&f);

    // the largest normal p-subgroup of G lands inside O_p(F)
    let op_g = largest_normal_p_subgroup(&ctx.group, ctx.p)?;
    let op_g_in_q = op_g.elements().all(|x| q.contains(x));
    if !op_g_in_q {
        return Err(Error::Inconsistency(
            "O_p(G) is not contained in O_p(F_P(G))".into(),
        ));
    }
    let mut r = ctx.report(Theorem::Generation);
    r.status = if holds {
        Status::Pass
    } else {
        Status::Counterexample
    };
    r.witnesses = json!({
        "o_p_order": q.order(),
        "o_p_generators": gens_of(&q),
        "r_order": r_sub.order(),
        "o_p_of_group_order": op_g.order(),
        "morphisms_p_centralizer": pc.morphism_count(),
        "morphisms_normalizer_of_r": nr.morphism_count(),
        "morphisms_generated": generated.morphism_count(),
        "morphisms_f": f.morphism_count(),
        "identity_holds": holds,
    });
    Ok(r)
}

/// `O_p(G)`: the intersection of the Sylow `p`-subgroups, found as the
/// largest normal subgroup inside `P`.
pub fn largest_normal_p_subgroup(g: &Arc<PermGroup>, p: u64) -> Result<Subgroup> {
    let s = sylow(g, p)?;
    let mut core = s.clone();
    for x in g.ids() {
        core = core.intersection(&s.conjugate(x));
    }
    Ok(core)
}

/// `G` is `p`-nilpotent ⇔ Frobenius criterion ⇔ `F_P(G)` is nilpotent.
pub fn verify_frobenius(ctx: &GroupContext) -> Result<VerificationReport> {
    let f = ctx.fusion()?;
    let p_nilpotent = ctx.group.is_p_nilpotent(ctx.p);
    let frobenius = frobenius_criterion(&ctx.group, &ctx.sylow, ctx.p, &ctx.limits)?;
    let fusion_nilpotent = f.is_nilpotent();
    let mut r = ctx.report(Theorem::Frobenius);
    r.status = if p_nilpotent == frobenius && frobenius == fusion_nilpotent {
        Status::Pass
    } else {
        Status::Counterexample
    };
    r.witnesses = json!({
        "group_p_nilpotent": p_nilpotent,
        "frobenius_criterion": frobenius,
        "fusion_nilpotent": fusion_nilpotent,
    });
    Ok(r)
}

/// One group at one prime: the objects the criteria talk about.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub group: String,
    pub order: usize,
    pub p: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<AnalysisDetail>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubgroupSummary {
    pub order: usize,
    pub generators: Vec<String>,
}

impl From<&Subgroup> for SubgroupSummary {
    fn from(s: &Subgroup) -> Self {
        SubgroupSummary {
            order: s.order(),
            generators: gens_of(s),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisDetail {
    pub sylow: SubgroupSummary,
    pub frattini: SubgroupSummary,
    pub thompson: SubgroupSummary,
    pub zj: SubgroupSummary,
    pub strongly_closed: Vec<SubgroupSummary>,
    pub p_nilpotent: bool,
    pub fusion_nilpotent: bool,
    pub fusion_saturated: bool,
    pub o_p: SubgroupSummary,
    pub focal_order: usize,
    pub derived_intersection_order: usize,
    pub subgroup_count_of_sylow: usize,
    pub morphism_count: usize,
}

pub fn analyze(name: &str, g: &Arc<PermGroup>, p: u64, limits: &Limits) -> Result<Analysis> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if g.order() as u64 % p != 0 {
        return Ok(Analysis {
            group: name.to_string(),
            order: g.order(),
            p,
            status: Status::Skipped,
            detail: None,
        });
    }
    let ctx = GroupContext::new(name, g.clone(), p, *limits)?;
    let p_group = ctx.sylow.group();
    let f = ctx.fusion()?;
    let cs = char_sub_report(p_group, limits)?;
    let closed = enumerate_strongly_closed(g, &ctx.sylow, limits)?;
    let derived = derived_subgroup(g).intersection(&ctx.sylow);
    let detail = AnalysisDetail {
        sylow: (&ctx.sylow).into(),
        frattini: (&frattini(p_group, limits)?).into(),
        thompson: (&cs.thompson).into(),
        zj: (&cs.z_of_j).into(),
        strongly_closed: closed.iter().map(Into::into).collect(),
        p_nilpotent: g.is_p_nilpotent(p),
        fusion_nilpotent: f.is_nilpotent(),
        fusion_saturated: f.is_saturated(),
        o_p: (&f.o_p(limits)?).into(),
        focal_order: f.focal_subgroup().order(),
        derived_intersection_order: derived.order(),
        subgroup_count_of_sylow: all_subgroups(p_group, limits)?.len(),
        morphism_count: f.morphism_count(),
    };
    Ok(Analysis {
        group: name.to_string(),
        order: g.order(),
        p,
        status: Status::Pass,
        detail: Some(detail),
    })
}

/// Hom-set sizes of `F_P(G)` for every pair of subgroups of `P`.
#[derive(Debug, Clone, Serialize)]
pub struct FusionDump {
    pub group: String,
    pub p: u64,
    pub sylow_order: usize,
    pub subgroups: Vec<SubgroupSummary>,
    /// `(source, target, |Hom(source, target)|)` for nonempty hom sets.
    pub hom_counts: Vec<(usize, usize, usize)>,
    pub morphism_count: usize,
    pub saturated: bool,
    pub nilpotent: bool,
}

pub fn dump_fusion(name: &str, g: &Arc<PermGroup>, p: u64, limits: &Limits) -> Result<FusionDump> {
    let ctx = GroupContext::new(name, g.clone(), p, *limits)?;
    let f = ctx.fusion()?;
    let lat = f.lattice();
    let mut hom_counts = Vec::new();
    for a in lat.ids() {
        for b in lat.ids() {
            let n = f.hom_count(a, b);
            if n > 0 {
                hom_counts.push((a, b, n));
            }
        }
    }
    Ok(FusionDump {
        group: name.to_string(),
        p,
        sylow_order: ctx.sylow.order(),
        subgroups: lat.subgroups().iter().map(Into::into).collect(),
        hom_counts,
        morphism_count: f.morphism_count(),
        saturated: f.is_saturated(),
        nilpotent: f.is_nilpotent(),
    })
}
