//! Regression corpus of small programs with known answer sets.
//!
//! Each `.alog` file carries its expectations in comment lines:
//!
//! ```text
//! % expect: {p(a), q}
//! % expect: {r}
//! % engines: solver
//! ```
//!
//! One `expect` line per answer set; `% expect: none` says there are none.
//! `engines` restricts the check to `oracle` or `solver`; by default both
//! run and must agree.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use crate::asolver::Asolver;
use crate::error::Error;
use crate::grounder::ground_program;
use crate::model::LiteralSet;
use crate::parser::parse_program;
use crate::semantics::enumerate_answer_sets_oracle;

const BUNDLED: &[(&str, &str)] = &[
    ("p0", include_str!("../corpus/p0.alog")),
    ("p1", include_str!("../corpus/p1.alog")),
    ("p2", include_str!("../corpus/p2.alog")),
    ("p3", include_str!("../corpus/p3.alog")),
    ("p4", include_str!("../corpus/p4.alog")),
    ("p4_modified", include_str!("../corpus/p4_modified.alog")),
    ("p5", include_str!("../corpus/p5.alog")),
    ("p6", include_str!("../corpus/p6.alog")),
    ("p7", include_str!("../corpus/p7.alog")),
    ("trace", include_str!("../corpus/trace.alog")),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub source: String,
}

impl Entry {
    pub fn new(name: &str, source: &str) -> Entry {
        Entry {
            name: name.to_string(),
            source: source.to_string(),
        }
    }
}

pub fn bundled() -> Vec<Entry> {
    BUNDLED.iter().map(|(n, s)| Entry::new(n, s)).collect()
}

/// Every `*.alog` file in `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> io::Result<Vec<Entry>> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir)? {
        let path = e?.path();
        if path.extension().is_some_and(|x| x == "alog") {
            let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            out.push(Entry::new(&name, &fs::read_to_string(&path)?));
        }
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engines {
    pub oracle: bool,
    pub solver: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub answer_sets: Vec<LiteralSet>,
    pub engines: Engines,
}

/// Parses `{l1, ..., ln}` into a literal set.
pub fn parse_literal_set(text: &str) -> Result<LiteralSet, String> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| format!("expected {{...}}, got `{text}`"))?;
    if inner.trim().is_empty() {
        return Ok(LiteralSet::new());
    }
    let p = parse_program(&format!("expect :- {inner}.")).map_err(|e| e.to_string())?;
    let r = &p.rules[0];
    if !r.neg.is_empty() || !r.agg.is_empty() {
        return Err(format!("expected plain literals in `{text}`"));
    }
    Ok(r.pos.iter().cloned().collect())
}

pub fn parse_expectation(source: &str) -> Result<Expectation, String> {
    let mut answer_sets = Vec::new();
    let mut none = false;
    let mut engines = Engines {
        oracle: true,
        solver: true,
    };
    for line in source.lines() {
        let Some(comment) = line.trim().strip_prefix('%') else {
            continue;
        };
        let comment = comment.trim();
        if let Some(v) = comment.strip_prefix("expect:") {
            if v.trim() == "none" {
                none = true;
            } else {
                answer_sets.push(parse_literal_set(v)?);
            }
        } else if let Some(v) = comment.strip_prefix("engines:") {
            engines = Engines {
                oracle: false,
                solver: false,
            };
            for e in v.split(',').map(str::trim) {
                match e {
                    "oracle" => engines.oracle = true,
                    "solver" => engines.solver = true,
                    _ => return Err(format!("unknown engine `{e}`")),
                }
            }
        }
    }
    if none && !answer_sets.is_empty() {
        return Err("`expect: none` together with answer sets".into());
    }
    if !none && answer_sets.is_empty() {
        return Err("no expectation".into());
    }
    answer_sets.sort();
    Ok(Expectation { answer_sets, engines })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub expected: Result<Vec<LiteralSet>, String>,
    /// One result per engine that ran.
    pub got: Vec<(&'static str, Result<Vec<LiteralSet>, String>)>,
}

impl Report {
    pub fn passed(&self) -> bool {
        match &self.expected {
            Ok(want) => !self.got.is_empty() && self.got.iter().all(|(_, g)| g.as_ref() == Ok(want)),
            Err(_) => false,
        }
    }
}

fn show(r: &Result<Vec<LiteralSet>, String>) -> String {
    match r {
        Ok(sets) if sets.is_empty() => "none".into(),
        Ok(sets) => sets.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
        Err(e) => format!("error: {e}"),
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: expected {}", self.name, show(&self.expected))?;
        for (engine, got) in &self.got {
            write!(f, "; {engine} got {}", show(got))?;
        }
        Ok(())
    }
}

fn solve_with(entry: &Entry, engine: &str, cap: usize) -> Result<Vec<LiteralSet>, String> {
    let p = parse_program(&entry.source).map_err(|e| e.to_string())?;
    let gp = ground_program(&p).map_err(|e| e.to_string())?;
    let r: Result<_, Error> = match engine {
        "oracle" => enumerate_answer_sets_oracle(&gp, cap),
        _ => Asolver::new(&gp).and_then(|s| s.enumerate(None)),
    };
    r.map_err(|e| e.to_string())
}

pub fn run_entry(entry: &Entry, oracle_cap: usize) -> Report {
    let expectation = parse_expectation(&entry.source);
    let mut got = Vec::new();
    if let Ok(exp) = &expectation {
        if exp.engines.oracle {
            got.push(("oracle", solve_with(entry, "oracle", oracle_cap)));
        }
        if exp.engines.solver {
            got.push(("solver", solve_with(entry, "solver", oracle_cap)));
        }
    }
    Report {
        name: entry.name.clone(),
        expected: expectation.map(|e| e.answer_sets),
        got,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::DEFAULT_ORACLE_CAP;

    #[test]
    fn literal_sets() {
        assert_eq!(parse_literal_set("{}").unwrap(), LiteralSet::new());
        let s = parse_literal_set(" {p(a,b), q} ").unwrap();
        assert_eq!(s.to_string(), "{p(a,b), q}");
        assert!(parse_literal_set("p(a)").is_err());
        assert!(parse_literal_set("{not p}").is_err());
    }

    #[test]
    fn expectations() {
        let e = parse_expectation("a or b.\n% expect: {b}\n% expect: {a}\n").unwrap();
        assert_eq!(e.answer_sets.len(), 2);
        assert_eq!(e.answer_sets[0].to_string(), "{a}");
        assert_eq!(
            e.engines,
            Engines {
                oracle: true,
                solver: true
            }
        );
        let e = parse_expectation("% engines: solver\n% expect: none").unwrap();
        assert!(e.answer_sets.is_empty());
        assert!(!e.engines.oracle);
        assert!(parse_expectation("p.").is_err());
        assert!(parse_expectation("% expect: none\n% expect: {p}").is_err());
    }

    #[test]
    fn bundled_corpus_passes() {
        for e in bundled() {
            let r = run_entry(&e, DEFAULT_ORACLE_CAP);
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn wrong_expectation_fails() {
        let r = run_entry(&Entry::new("x", "p.\n% expect: {q}"), DEFAULT_ORACLE_CAP);
        assert!(!r.passed());
        assert_eq!(r.to_string(), "FAIL x: expected {q}; oracle got {p}; solver got {p}");
    }
}
