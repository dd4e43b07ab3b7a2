//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use fusionlab::charsub::{enumerate_strongly_closed, thompson_subgroup, zj};
use fusionlab::fusion::{
    frobenius_criterion, fusion_of_group, generated_subsystem, inner_fusion, FusionMorphism,
};
use fusionlab::harness::{
    builtin_corpus, run_suite, ReportDocument, Status, SuiteConfig, Theorem, VerificationReport,
};
use fusionlab::permcore::{
    all_subgroups, automorphism_group, frattini, is_strongly_closed_group, normalizer, sylow,
    GroupHom, PermGroup,
};
use serde_json::Value;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn suite(theorems: &[Theorem]) -> ReportDocument {
    let config = SuiteConfig {
        theorems: theorems.to_vec(),
        jobs: 4,
        ..SuiteConfig::default()
    };
    run_suite(&builtin_corpus(), &config)
}

fn find<'a>(
    doc: &'a ReportDocument,
    group: &str,
    p: u64,
    theorem: Theorem,
    pick: impl Fn(&VerificationReport) -> bool,
) -> Result<&'a VerificationReport, String> {
    doc.reports
        .iter()
        .find(|r| r.group == group && r.p == Some(p) && r.theorem == theorem && pick(r))
        .ok_or_else(|| format!("no {theorem:?} record for {group}/p={p}"))
}

fn no_failures(doc: &ReportDocument) -> Result<(), String> {
    let s = &doc.summary;
    ensure(
        s.counterexample == 0 && s.invariant_failure == 0,
        format!(
            "counterexample={} invariant_failure={}",
            s.counterexample, s.invariant_failure
        ),
    )
}

fn odd_pairs_covered(doc: &ReportDocument, theorem: Theorem) -> Result<usize, String> {
    let mut pairs = 0;
    for (name, _, p) in builtin_pairs().into_iter().filter(|t| t.2 != 2) {
        let records: Vec<_> = doc
            .reports
            .iter()
            .filter(|r| r.group == name && r.p == Some(p) && r.theorem == theorem)
            .collect();
        ensure(!records.is_empty(), format!("{name}/p={p} missing"))?;
        ensure(
            records
                .iter()
                .all(|r| matches!(r.status, Status::Pass | Status::DegeneratePass)),
            format!("{name}/p={p} not passing"),
        )?;
        ensure(
            records.iter().any(|r| r.status == Status::DegeneratePass),
            format!("{name}/p={p} has no degenerate D = 1 record"),
        )?;
        pairs += 1;
    }
    Ok(pairs)
}

fn ac1() -> Check {
    let start = Instant::now();
    let pairs = builtin_pairs();
    ensure(pairs.len() >= 35, format!("only {} pairs", pairs.len()))?;
    for (name, g, p) in &pairs {
        let s = sylow(g, *p).unwrap();
        let oracle = p_nilpotent(&set_of_group(g), *p);
        let group_level = g.is_p_nilpotent(*p);
        let frobenius = frobenius_criterion(g, &s, *p, &lim()).unwrap();
        let fusion = fusion_of_group(g, &s, *p, &lim()).unwrap().is_nilpotent();
        ensure(
            oracle == group_level && group_level == frobenius && frobenius == fusion,
            format!("{name}/p={p}: oracle={oracle} group={group_level} frobenius={frobenius} fusion={fusion}"),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(600),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "{} pairs, 0 discrepancies, {:.2}s",
        pairs.len(),
        elapsed.as_secs_f64()
    ))
}

fn ac2() -> Check {
    let doc = suite(&[Theorem::A]);
    no_failures(&doc)?;
    let pairs = odd_pairs_covered(&doc, Theorem::A)?;
    let r = find(&doc, "S4", 3, Theorem::A, |r| r.witnesses["d_order"] == 3)?;
    ensure(
        r.witnesses["lhs_fusion_nilpotent"] == false
            && r.witnesses["rhs_normalizer_nilpotent"] == false,
        "S4/p=3 sides are not both false",
    )?;
    ensure(
        !p_nilpotent(&set_of_group(&builtin("S4")), 3),
        "oracle finds S4 3-nilpotent",
    )?;
    Ok(format!(
        "{pairs} odd-p pairs, pass={} degenerate_pass={}, S4/p=3 both sides false",
        doc.summary.pass, doc.summary.degenerate_pass
    ))
}

fn ac3() -> Check {
    let doc = suite(&[Theorem::B, Theorem::C]);
    no_failures(&doc)?;

    let s4 = builtin("S4");
    let p = sylow(&s4, 2).unwrap();
    let phi = set_of_sub(&frattini(p.group(), &lim()).unwrap());
    let ps = set_of_sub(&p);
    let b = find(&doc, "S4", 2, Theorem::B, |_| true)?;
    ensure(b.witnesses["rhs"] == false, "S4/p=2 right-hand side holds")?;
    ensure(
        b.witnesses["frattini_strongly_closed"] == false,
        "Φ(P) of S4 is strongly closed",
    )?;
    let element = perm(
        b.witnesses["frattini_violation"]["element"]
            .as_str()
            .ok_or("no violation")?,
        4,
    );
    let fused = perm(
        b.witnesses["frattini_violation"]["fused_to"]
            .as_str()
            .ok_or("no violation")?,
        4,
    );
    let lengths: Vec<usize> = element.cycles().iter().map(Vec::len).collect();
    ensure(
        lengths == vec![2, 2],
        format!("{element} is not a double transposition"),
    )?;
    ensure(phi.contains(&img(&element)), "witness not in Φ(P)")?;
    ensure(
        ps.contains(&img(&fused)) && !phi.contains(&img(&fused)),
        "fused image not in P \\ Φ(P)",
    )?;
    let gs = set_of_group(&s4);
    ensure(
        gs.iter().any(|h| conj(&img(&element), h) == img(&fused)),
        "witness pair is not conjugate in S4",
    )?;

    let b = find(&doc, "A4", 2, Theorem::B, |_| true)?;
    ensure(b.witnesses["rhs"] == false, "A4/p=2 right-hand side holds")?;
    ensure(
        b.witnesses["frattini_strongly_closed"] == true,
        "A4/p=2 fails through Φ(P)",
    )?;
    ensure(
        b.witnesses["normalizer_of_p_is_inner"] == false,
        "A4/p=2 has N_F(P) = F_P(P)",
    )?;
    let c = find(&doc, "A4", 2, Theorem::C, |_| true)?;
    ensure(
        c.witnesses["sylow_normalizer_p_nilpotent"] == false,
        "N_A4(P) is 2-nilpotent",
    )?;

    Ok(format!(
        "B and C over {} records, S4/p=2 via {element} -> {fused}, A4/p=2 via N_F(P)",
        doc.reports.len()
    ))
}

fn ac4() -> Check {
    let doc = suite(&[Theorem::Kizmaz]);
    no_failures(&doc)?;
    let pairs = odd_pairs_covered(&doc, Theorem::Kizmaz)?;
    let r = find(&doc, "S4", 3, Theorem::Kizmaz, |r| {
        r.witnesses["d_order"] == 3
    })?;
    ensure(
        r.witnesses["normalizer_of_zj_order"] == 6,
        "|N_G(ZJ(P))| is not 6",
    )?;
    ensure(
        r.witnesses["lhs_group_p_nilpotent"] == false
            && r.witnesses["rhs_normalizer_p_nilpotent"] == false,
        "S4/p=3 sides are not both false",
    )?;

    // brute force: ZJ(C3) = C3 and its normalizer in S4 is a non-3-nilpotent S3
    let gs = set_of_group(&builtin("S4"));
    let ps = set_of_sub(&sylow(&builtin("S4"), 3).unwrap());
    let z = common::center(&thompson(&ps));
    ensure(z == ps, "ZJ(P) != P for P of order 3")?;
    let n: Set = gs
        .iter()
        .filter(|h| z.iter().all(|x| z.contains(&conj(x, h))))
        .cloned()
        .collect();
    ensure(
        n.len() == 6 && !p_nilpotent(&n, 3),
        "oracle normalizer mismatch",
    )?;
    Ok(format!(
        "{pairs} odd-p pairs, S4/p=3 D=P gives |N_G(ZJ)| = 6, both sides false"
    ))
}

fn ac5() -> Check {
    let doc = suite(&[Theorem::Generation]);
    no_failures(&doc)?;
    let records: Vec<_> = doc
        .reports
        .iter()
        .filter(|r| r.theorem == Theorem::Generation)
        .collect();
    let pairs = builtin_pairs().len();
    ensure(
        records.len() == pairs,
        format!("{} records for {pairs} pairs", records.len()),
    )?;
    ensure(
        records
            .iter()
            .all(|r| r.status == Status::Pass && r.witnesses["identity_holds"] == true),
        "identity fails somewhere",
    )?;
    let r = find(&doc, "S4", 2, Theorem::Generation, |_| true)?;
    ensure(
        r.witnesses["o_p_order"] == 4 && r.witnesses["r_order"] == 4,
        "S4/p=2: Q or R is not of order 4",
    )?;
    let klein: Set = closure(
        &[img(&perm("(1 2)(3 4)", 4)), img(&perm("(1 3)(2 4)", 4))],
        4,
    );
    let gens: Vec<Img> = r.witnesses["o_p_generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| img(&perm(s.as_str().unwrap(), 4)))
        .collect();
    ensure(
        closure(&gens, 4) == klein,
        "S4/p=2: O_p(F) is not the Klein four group",
    )?;
    Ok(format!("{pairs} pairs hold, S4/p=2 has Q = R = Klein four"))
}

/// An automorphism of order 2 of `v4`, as a morphism `whole -> whole`.
fn involution(v4: &Arc<PermGroup>, whole: usize) -> FusionMorphism {
    let identity = GroupHom::identity(v4);
    let a = automorphism_group(v4, &lim())
        .unwrap()
        .into_iter()
        .find(|a| *a != identity && a.then(a) == identity)
        .unwrap();
    FusionMorphism {
        source: whole,
        target: whole,
        map: a.map().to_vec(),
    }
}

fn ac6() -> Check {
    let mut checked = 0;
    for (name, g, p) in builtin_pairs() {
        let s = sylow(&g, p).unwrap();
        let f = fusion_of_group(&g, &s, p, &lim()).unwrap();
        ensure(
            f.is_saturated(),
            format!("{name}/p={p} reported non-saturated"),
        )?;
        checked += 1;
    }
    let v4 = builtin("V4");
    let inner = inner_fusion(&v4, 2, &lim()).unwrap();
    let whole = inner.lattice().whole();
    let seed = involution(&v4, whole);
    let bad = generated_subsystem(inner.lattice(), 2, &[seed]).unwrap();
    ensure(
        bad.check_axioms().is_ok(),
        "constructed system breaks the axioms",
    )?;
    ensure(!bad.is_saturated(), "constructed system reported saturated")?;
    let (aut_f, aut_p) = (bad.aut_f(whole).len(), bad.aut_p(whole).len());
    ensure(
        aut_f == 2 && aut_p == 1,
        format!("|Aut_F(P)| = {aut_f}, |Aut_P(P)| = {aut_p}"),
    )?;
    Ok(format!(
        "{checked} group systems saturated, V4 with an involution: |Aut_F| = 2, |Aut_P| = 1"
    ))
}

fn ac7() -> Check {
    let mut normalizers = 0;
    let mut closures = 0;
    for (name, g, p) in builtin_pairs() {
        let s = sylow(&g, p).unwrap();
        let f = fusion_of_group(&g, &s, p, &lim()).unwrap();
        let gs = set_of_group(&g);
        let ps = set_of_sub(&s);

        let expected: Set = ps.intersection(&derived(&gs)).cloned().collect();
        ensure(
            set_of_sub(&f.focal_subgroup()) == expected,
            format!("{name}/p={p}: focal subgroup"),
        )?;

        for q in f.lattice().subgroups() {
            let qs = set_of_sub(q);
            let fusion_level = f.is_strongly_closed(q).unwrap();
            let group_level = is_strongly_closed_group(&g, &s, &q.lift(&g).unwrap()).unwrap();
            let oracle = strongly_closed(&gs, &ps, &qs);
            ensure(
                fusion_level == group_level && group_level == oracle,
                format!(
                    "{name}/p={p}: strong closure of a subgroup of order {}",
                    q.order()
                ),
            )?;
            closures += 1;
        }

        if s.order() > 16 {
            continue;
        }
        let base = f.base();
        for class in f.subgroup_classes() {
            let sizes: Vec<usize> = class
                .iter()
                .map(|&id| normalizer(base, f.lattice().subgroup(id)).unwrap().order())
                .collect();
            let top = *sizes.iter().max().unwrap();
            for (&id, &size) in class.iter().zip(&sizes) {
                if size != top {
                    continue;
                }
                let q = f.lattice().subgroup(id);
                let nf = f.normalizer(q, &lim()).unwrap();
                let q_in_g = q.lift(&g).unwrap();
                let ng = normalizer(&g, &q_in_g).unwrap();
                let np = normalizer(base, q).unwrap().lift(ng.group()).unwrap();
                let realized = fusion_of_group(ng.group(), &np, p, &lim()).unwrap();
                ensure(
                    nf == realized,
                    format!("{name}/p={p}: N_F(Q) differs for Q of order {}", q.order()),
                )?;
                normalizers += 1;
            }
        }
    }
    Ok(format!(
        "focal subgroups agree, {normalizers} fully normalized N_F(Q) match, {closures} strong-closure checks agree"
    ))
}

fn ac8() -> Check {
    let s3 = builtin("S3");
    let s4 = builtin("S4");
    let d8 = builtin("D8");
    let q8 = builtin("Q8");
    let v4 = builtin("V4");

    // oracles first
    let subs_s3 = subgroups(&set_of_group(&s3));
    let subs_s4 = subgroups(&set_of_group(&s4));
    let d8s = set_of_group(&d8);
    let phi_d8 = common::frattini(&d8s);
    let z_d8 = common::center(&d8s);
    let j_d8 = thompson(&d8s);
    let j_q8 = thompson(&set_of_group(&q8));
    let aut_v4 = automorphism_count(&set_of_group(&v4));
    let p = sylow(&s4, 2).unwrap();
    let (gs, ps) = (set_of_group(&s4), set_of_sub(&p));
    let sc_oracle: BTreeSet<Set> = subgroups(&ps)
        .into_iter()
        .filter(|q| strongly_closed(&gs, &ps, q))
        .collect();
    ensure(
        subs_s3.len() == 6 && subs_s4.len() == 30,
        "oracle subgroup counts",
    )?;
    ensure(phi_d8.len() == 2 && phi_d8 == z_d8, "oracle Φ(D8)")?;
    ensure(j_d8 == d8s && j_q8 == set_of_group(&q8), "oracle J")?;
    ensure(aut_v4 == 6, "oracle |Aut(V4)|")?;
    let mut orders: Vec<usize> = sc_oracle.iter().map(|q| q.len()).collect();
    orders.sort_unstable();
    ensure(orders == vec![1, 4, 8], "oracle strongly closed set")?;

    let lib_subs = |g: &Arc<PermGroup>| -> BTreeSet<Set> {
        all_subgroups(g, &lim())
            .unwrap()
            .iter()
            .map(set_of_sub)
            .collect()
    };
    ensure(
        lib_subs(&s3) == subs_s3 && lib_subs(&s4) == subs_s4,
        "subgroup lattices",
    )?;
    let phi = frattini(&d8, &lim()).unwrap();
    ensure(set_of_sub(&phi) == phi_d8, "Φ(D8)")?;
    ensure(
        set_of_sub(&fusionlab::permcore::center(&d8)) == z_d8,
        "Z(D8)",
    )?;
    ensure(thompson_subgroup(&d8, &lim()).unwrap().is_whole(), "J(D8)")?;
    ensure(thompson_subgroup(&q8, &lim()).unwrap().is_whole(), "J(Q8)")?;
    ensure(!zj(&d8, &lim()).unwrap().is_trivial(), "ZJ(D8)")?;
    let sc: BTreeSet<Set> = enumerate_strongly_closed(&s4, &p, &lim())
        .unwrap()
        .iter()
        .map(set_of_sub)
        .collect();
    ensure(sc == sc_oracle, "strongly closed subgroups of (S4, P)")?;
    ensure(
        automorphism_group(&v4, &lim()).unwrap().len() == 6,
        "|Aut(V4)|",
    )?;
    Ok("S3: 6, S4: 30, Φ(D8) = Z(D8) of order 2, J(D8) = D8, J(Q8) = Q8, {1, V4, P}, |Aut(V4)| = 6".into())
}

fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("wall_time_ms");
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

fn ac9() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut docs = Vec::new();
    for (run, jobs) in [(1, "1"), (2, "4")] {
        let path = dir.path().join(format!("run{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_fusionlab"))
            .args(["verify", "--builtin", "--jobs", jobs, "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(
            status.status.code() == Some(0),
            format!("run {run} exited with {:?}", status.status.code()),
        )?;
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        strip_timings(&mut v);
        if let Value::Object(map) = &mut v {
            // the echoed job count is the one intended difference
            if let Some(Value::Object(config)) = map.get_mut("config") {
                config.remove("jobs");
            }
        }
        docs.push(v);
    }
    ensure(docs[0] == docs[1], "reports differ beyond timings")?;
    let n = docs[0]["reports"].as_array().map_or(0, Vec::len);
    Ok(format!(
        "two runs ({n} records, jobs 1 and 4) identical modulo timing, exit 0"
    ))
}

fn main() -> ExitCode {
    let checks: [(&str, &str, fn() -> Check); 9] = [
        ("AC1", "Frobenius triple equivalence", ac1),
        ("AC2", "criterion A", ac2),
        ("AC3", "criteria B and C", ac3),
        ("AC4", "kizmaz criterion", ac4),
        ("AC5", "generation identity", ac5),
        ("AC6", "saturation checker", ac6),
        ("AC7", "oracle equivalences", ac7),
        ("AC8", "structure spot values", ac8),
        ("AC9", "determinism", ac9),
    ];
    let mut failed = 0;
    for (id, title, check) in checks {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{id} PASS {title}: {detail} [{secs:.2}s]"),
            Err(reason) => {
                failed += 1;
                println!("{id} FAIL {title}: {reason} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
