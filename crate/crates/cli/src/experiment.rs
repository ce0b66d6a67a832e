//! Resumable experiment runs over a grid of families, primes and seeds.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use toricnp::family::ABParams;
use toricnp::lfunction::Verdict;

use crate::error::{CliError, CliResult};
use crate::record::{run_one, RunRecord, Status};
use crate::spec::{CellSpec, ExperimentSpec};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupSummary {
    pub records: usize,
    pub equal: usize,
    pub lies_above: usize,
    pub violation: usize,
    pub degenerate_suspect: usize,
    pub refused: usize,
    /// At least one Equal verdict with a clean nondegeneracy report.
    pub witnessed: bool,
}

impl GroupSummary {
    fn add(&mut self, r: &RunRecord) {
        self.records += 1;
        match (r.status, r.verdict) {
            (Status::Refused, _) => self.refused += 1,
            (Status::DegenerateSuspect, _) => self.degenerate_suspect += 1,
            (Status::Ok, Some(Verdict::Equal)) => self.equal += 1,
            (Status::Ok, Some(Verdict::LiesAbove)) => self.lies_above += 1,
            (Status::Ok, Some(Verdict::Violation)) => self.violation += 1,
            (Status::Ok, None) => self.degenerate_suspect += 1,
        }
        self.witnessed |= r.is_witness();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub groups: Vec<((ABParams, u64), GroupSummary)>,
    pub written: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn total_records(&self) -> usize {
        self.groups.iter().map(|(_, g)| g.records).sum()
    }

    pub fn any_violation(&self) -> bool {
        self.groups.iter().any(|(_, g)| g.violation > 0)
    }

    pub fn any_refused(&self) -> bool {
        self.groups.iter().any(|(_, g)| g.refused > 0)
    }

    pub fn all_witnessed(&self) -> bool {
        self.groups.iter().all(|(_, g)| g.witnessed)
    }

    pub fn to_json(&self) -> Value {
        let groups: Vec<Value> = self
            .groups
            .iter()
            .map(|((q, p), g)| {
                json!({
                    "family": q.label(),
                    "p": p,
                    "records": g.records,
                    "Equal": g.equal,
                    "LiesAbove": g.lies_above,
                    "Violation": g.violation,
                    "degenerate_suspect": g.degenerate_suspect,
                    "refused": g.refused,
                    "witnessed": g.witnessed,
                })
            })
            .collect();
        json!({
            "groups": groups,
            "records": self.total_records(),
            "written": self.written,
            "skipped": self.skipped,
            "violation": self.any_violation(),
            "all_witnessed": self.all_witnessed(),
        })
    }
}

type CellKey = (ABParams, u64, usize, u64);

fn key_of(r: &RunRecord) -> Option<CellKey> {
    Some((r.family, r.p, r.sample?, r.seed))
}

/// Reads the complete records of `path`, dropping a trailing partial line left by an interrupted run.
pub fn load_records(path: &Path) -> CliResult<Vec<RunRecord>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(CliError::io(path, e)),
    };
    let complete = match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    };
    if complete.len() != text.len() {
        fs::write(path, complete).map_err(|e| CliError::io(path, e))?;
    }
    complete
        .lines()
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str::<Value>(line)
                .ok()
                .and_then(|v| RunRecord::from_json(&v))
                .ok_or_else(|| CliError::Input(format!("{}: line {} is not a run record", path.display(), i + 1)))
        })
        .collect()
}

/// Runs every cell of `spec` not already present in `out`, appending one JSON line per record.
pub fn run_experiment(
    spec: &ExperimentSpec,
    out: &Path,
    mut on_record: impl FnMut(&CellSpec, &RunRecord),
) -> CliResult<Summary> {
    let existing = load_records(out)?;
    let done: HashSet<CellKey> = existing.iter().filter_map(key_of).collect();
    let mut file = OpenOptions::new().create(true).append(true).open(out).map_err(|e| CliError::io(out, e))?;
    let mut written = 0;
    let mut skipped = 0;
    let mut records: Vec<RunRecord> = existing;
    for cell in spec.cells() {
        if done.contains(&(cell.family, cell.p, cell.sample, cell.seed)) {
            skipped += 1;
            continue;
        }
        let r = run_one(cell.family, cell.p, cell.seed, Some(cell.sample), spec.budget, &spec.flags, true)?;
        let mut line = serde_json::to_string(&r.to_json()).expect("records serialize");
        line.push('\n');
        file.write_all(line.as_bytes()).and_then(|_| file.flush()).map_err(|e| CliError::io(out, e))?;
        written += 1;
        on_record(&cell, &r);
        records.push(r);
    }

    let wanted: HashSet<CellKey> = spec.cells().iter().map(|c| (c.family, c.p, c.sample, c.seed)).collect();
    let mut groups: BTreeMap<(usize, usize), ((ABParams, u64), GroupSummary)> = BTreeMap::new();
    for r in &records {
        let Some(key) = key_of(r).filter(|k| wanted.contains(k)) else { continue };
        let fi = spec.families.iter().position(|q| *q == key.0).expect("family in spec");
        let pi = spec.primes.iter().position(|p| *p == key.1).expect("prime in spec");
        groups.entry((fi, pi)).or_insert_with(|| ((key.0, key.1), GroupSummary::default())).1.add(r);
    }
    Ok(Summary { groups: groups.into_values().collect(), written, skipped })
}

/// A record with its timing field removed, for reproducibility comparisons.
pub fn without_timing(line: &str) -> Option<Value> {
    let mut v: Value = serde_json::from_str(line).ok()?;
    v.as_object_mut()?.remove("timing_ms");
    Some(v)
}
