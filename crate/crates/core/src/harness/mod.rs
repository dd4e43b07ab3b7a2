//! Corpus handling, criterion verifiers, and batch reporting.

mod corpus;
mod report;
mod suite;
mod verify;

pub use corpus::{
    builtin_corpus, find_entry, load_corpus, parse_corpus, validate_corpus, CorpusEntry, CorpusFile,
};
pub use report::{
    ConfigEcho, ReportDocument, SkipReason, Status, Summary, Theorem, VerificationReport,
};
pub use suite::{run_suite, SuiteConfig};
pub use verify::{
    analyze, dump_fusion, largest_normal_p_subgroup, verify, verify_corollary_c, verify_frobenius,
    verify_generation, verify_kizmaz, verify_theorem_a, verify_theorem_b, Analysis, AnalysisDetail,
    FusionDump, GroupContext, SubgroupSummary, VerifyOptions,
};
