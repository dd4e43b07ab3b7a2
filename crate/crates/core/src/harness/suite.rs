use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::json;

use super::corpus::CorpusEntry;
use super::report::{ConfigEcho, ReportDocument, SkipReason, Theorem, VerificationReport};
use super::verify::{verify, GroupContext, VerifyOptions};
use crate::permcore::arith;
use crate::permcore::Limits;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// Label echoed into the report (a path or `builtin`).
    pub corpus_label: String,
    pub theorems: Vec<Theorem>,
    pub p: Option<u64>,
    pub limits: Limits,
    pub jobs: usize,
    pub include_even_p_exploratory: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            corpus_label: "builtin".into(),
            theorems: Theorem::ALL.to_vec(),
            p: None,
            limits: Limits::default(),
            jobs: 1,
            include_even_p_exploratory: false,
        }
    }
}

impl SuiteConfig {
    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            corpus: self.corpus_label.clone(),
            theorems: self.theorems.clone(),
            p: self.p,
            max_order: self.limits.max_order,
            max_subgroup_order: self.limits.max_subgroup_order,
            jobs: self.jobs,
            include_even_p_exploratory: self.include_even_p_exploratory,
        }
    }
}

/// Prepares per-`(entry, p)` contexts, recording skips for entries that
/// cannot be built.
fn prepare(
    corpus: &[CorpusEntry],
    config: &SuiteConfig,
    out: &mut Vec<VerificationReport>,
) -> Vec<GroupContext> {
    let mut contexts = Vec::new();
    for entry in corpus {
        let name = entry.name.as_str();
        let each = |out: &mut Vec<VerificationReport>,
                    primes: &[Option<u64>],
                    make: &dyn Fn(Option<u64>, Theorem) -> VerificationReport| {
            for &p in primes {
                for &t in &config.theorems {
                    out.push(make(p, t));
                }
            }
        };
        let order = match entry.order() {
            Ok(o) => o,
            Err(e) => {
                let msg = e.to_string();
                each(out, &[None], &|p, t| {
                    VerificationReport::invariant_failure(name, None, p, t, &msg)
                });
                continue;
            }
        };
        let primes: Vec<u64> = match config.p {
            Some(p) if order % p as u128 != 0 => {
                let msg = format!("{p} does not divide {order}");
                each(out, &[Some(p)], &|p, t| {
                    VerificationReport::skipped(
                        name,
                        Some(order),
                        p,
                        t,
                        SkipReason::PDoesNotDivide,
                        &msg,
                    )
                });
                continue;
            }
            Some(p) => vec![p],
            None => arith::prime_divisors(order.min(u64::MAX as u128) as u64),
        };
        let tagged: Vec<Option<u64>> = primes.iter().map(|&p| Some(p)).collect();
        if order > config.limits.max_order as u128 {
            let msg = format!("order {order} exceeds cap {}", config.limits.max_order);
            each(out, &tagged, &|p, t| {
                VerificationReport::skipped(name, Some(order), p, t, SkipReason::OrderCap, &msg)
            });
            continue;
        }
        let group = match entry
            .build(&config.limits)
            .and_then(|g| g.verify().map(|_| g))
        {
            Ok(g) => g,
            Err(e) => {
                let msg = e.to_string();
                each(out, &tagged, &|p, t| {
                    VerificationReport::invariant_failure(name, Some(order), p, t, &msg)
                });
                continue;
            }
        };
        for p in primes {
            match GroupContext::new(name, group.clone(), p, config.limits) {
                Ok(ctx) => contexts.push(ctx),
                Err(e) => {
                    let msg = e.to_string();
                    each(out, &[Some(p)], &|p, t| {
                        VerificationReport::invariant_failure(name, Some(order), p, t, &msg)
                    });
                }
            }
        }
    }
    contexts
}

/// Runs the selected verifiers for every `(entry, p)` with `p | |G|`.
///
/// Tasks are `(entry, p, theorem)` triples pulled from a shared counter by
/// `config.jobs` workers; the report is merged in canonical order.
pub fn run_suite(corpus: &[CorpusEntry], config: &SuiteConfig) -> ReportDocument {
    let mut reports = Vec::new();
    let contexts = prepare(corpus, config, &mut reports);
    let tasks: Vec<(usize, Theorem)> = contexts
        .iter()
        .enumerate()
        .flat_map(|(i, _)| config.theorems.iter().map(move |&t| (i, t)))
        .collect();
    let opts = VerifyOptions {
        include_even_p_exploratory: config.include_even_p_exploratory,
    };
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..config.jobs.max(1) {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some(&(ctx, theorem)) = tasks.get(k) else {
                    break;
                };
                let out = verify(&contexts[ctx], theorem, &opts);
                results.lock().expect("worker panicked").extend(out);
            });
        }
    });
    reports.extend(results.into_inner().expect("worker panicked"));

    for ctx in &contexts {
        if ctx.fusion_builds() > 1 {
            let mut r = VerificationReport::invariant_failure(
                &ctx.name,
                Some(ctx.group.order() as u128),
                Some(ctx.p),
                Theorem::Frobenius,
                "fusion system built more than once",
            );
            r.witnesses = json!({ "fusion_builds": ctx.fusion_builds() });
            reports.push(r);
        }
    }
    ReportDocument::new(config.echo(), reports)
}
