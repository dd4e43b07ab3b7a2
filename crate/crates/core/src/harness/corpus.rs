use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permcore::{group_closure, Limits, PermGroup, Permutation, StabilizerChain};

/// One permutation group of a corpus, given by 1-based cycle-notation
/// generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusFile {
    pub groups: Vec<CorpusEntry>,
}

impl CorpusEntry {
    pub fn new(name: &str, degree: usize, generators: &[&str], tags: &[&str]) -> Self {
        CorpusEntry {
            name: name.to_string(),
            degree,
            generators: generators.iter().map(|s| s.to_string()).collect(),
            tags: (!tags.is_empty()).then(|| tags.iter().map(|s| s.to_string()).collect()),
        }
    }

    pub fn permutations(&self) -> Result<Vec<Permutation>> {
        self.generators
            .iter()
            .map(|text| {
                Permutation::parse(text, self.degree).map_err(|e| match e {
                    Error::CycleParse { column, message } => Error::InvalidEntry {
                        name: self.name.clone(),
                        generator: text.clone(),
                        column,
                        message,
                    },
                    other => other,
                })
            })
            .collect()
    }

    /// Group order from a stabilizer chain, without materializing elements.
    pub fn order(&self) -> Result<u128> {
        Ok(StabilizerChain::new(self.degree, &self.permutations()?).order())
    }

    pub fn build(&self, limits: &Limits) -> Result<Arc<PermGroup>> {
        let gens = self.permutations()?;
        Ok(Arc::new(group_closure(&gens, self.degree, limits)?))
    }
}

/// Checks generator syntax and name uniqueness.
pub fn validate_corpus(entries: &[CorpusEntry]) -> Result<()> {
    let mut names = BTreeSet::new();
    for e in entries {
        if !names.insert(e.name.as_str()) {
            return Err(Error::DuplicateName(e.name.clone()));
        }
        if e.degree == 0 {
            return Err(Error::InvalidEntry {
                name: e.name.clone(),
                generator: String::new(),
                column: 0,
                message: "degree must be positive".into(),
            });
        }
        e.permutations()?;
    }
    Ok(())
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let file: CorpusFile = serde_json::from_str(text).map_err(|e| Error::CorpusParse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate_corpus(&file.groups)?;
    Ok(file.groups)
}

pub fn load_corpus(path: &Path) -> Result<Vec<CorpusEntry>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

pub fn find_entry<'a>(entries: &'a [CorpusEntry], name: &str) -> Result<&'a CorpusEntry> {
    entries
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

fn cycle(n: usize) -> String {
    let pts: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    format!("({})", pts.join(" "))
}

/// The built-in corpus of small permutation groups.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 2..=12 {
        let c = cycle(n);
        out.push(CorpusEntry::new(&format!("C{n}"), n, &[&c], &["cyclic"]));
    }
    let e = CorpusEntry::new;
    out.extend([
        e(
            "V4",
            4,
            &["(1 2)(3 4)", "(1 3)(2 4)"],
            &["abelian", "p-group"],
        ),
        e("C2xC4", 6, &["(1 2 3 4)", "(5 6)"], &["abelian", "p-group"]),
        e(
            "C2^3",
            6,
            &["(1 2)", "(3 4)", "(5 6)"],
            &["abelian", "p-group"],
        ),
        e("C3xC3", 6, &["(1 2 3)", "(4 5 6)"], &["abelian", "p-group"]),
        e("D8", 4, &["(1 2 3 4)", "(1 3)"], &["dihedral", "p-group"]),
        e("D10", 5, &["(1 2 3 4 5)", "(2 5)(3 4)"], &["dihedral"]),
        e("D12", 6, &["(1 2 3 4 5 6)", "(2 6)(3 5)"], &["dihedral"]),
        e(
            "D16",
            8,
            &["(1 2 3 4 5 6 7 8)", "(2 8)(3 7)(4 6)"],
            &["dihedral", "p-group"],
        ),
        e(
            "Q8",
            8,
            &["(1 3 2 4)(5 8 6 7)", "(1 5 2 6)(3 7 4 8)"],
            &["quaternion", "p-group", "regular"],
        ),
        e(
            "SD16",
            8,
            &["(1 2 3 4 5 6 7 8)", "(2 4)(3 7)(6 8)"],
            &["semidihedral", "p-group"],
        ),
        e(
            "He3",
            9,
            &[
                "(1 4 7)(2 5 8)(3 6 9)",
                "(1 2 3)(4 5 6)(7 8 9)",
                "(4 5 6)(7 9 8)",
            ],
            &["extraspecial", "p-group"],
        ),
        e("S3", 3, &["(1 2)", "(1 2 3)"], &["symmetric"]),
        e("S4", 4, &["(1 2)", "(1 2 3 4)"], &["symmetric"]),
        e("S5", 5, &["(1 2)", "(1 2 3 4 5)"], &["symmetric"]),
        e("A4", 4, &["(1 2 3)", "(1 2)(3 4)"], &["alternating"]),
        e(
            "A5",
            5,
            &["(1 2 3)", "(1 2 3 4 5)"],
            &["alternating", "simple"],
        ),
        e(
            "SL(2,3)",
            8,
            &["(1 4 7)(2 8 5)", "(3 4 5)(6 8 7)"],
            &["linear"],
        ),
        e("C3xS3", 6, &["(1 2 3)", "(4 5 6)", "(4 5)"], &["product"]),
        e(
            "C2xA4",
            6,
            &["(1 2)", "(3 4 5)", "(3 4)(5 6)"],
            &["product"],
        ),
        e(
            "S3xS3",
            6,
            &["(1 2 3)", "(1 2)", "(4 5 6)", "(4 5)"],
            &["product"],
        ),
        e("F20", 5, &["(1 2 3 4 5)", "(2 3 5 4)"], &["frobenius"]),
        e(
            "F21",
            7,
            &["(1 2 3 4 5 6 7)", "(2 3 5)(4 7 6)"],
            &["frobenius"],
        ),
    ]);
    out
}
