use std::path::{Path, PathBuf};
use std::time::Instant;

use prescope_core::parallel::par_map;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::job::{run, JobSpec};

/// One corpus file: a job and the fields its result must contain.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub name: String,
    pub job: JobSpec,
    pub expected: Map<String, Value>,
}

#[derive(Debug)]
pub struct Row {
    pub file: String,
    pub name: String,
    pub mismatches: Vec<String>,
    pub seconds: f64,
}

impl Row {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub fn bundled_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Corpus files in name order; an empty or missing directory is a usage error.
pub fn files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries = std::fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut out: Vec<PathBuf> =
        entries.flatten().map(|e| e.path()).filter(|p| p.extension().is_some_and(|x| x == "json")).collect();
    out.sort();
    if out.is_empty() {
        return Err(format!("{} holds no corpus files", dir.display()));
    }
    Ok(out)
}

/// The result a job is compared on: its payload, or the error kind.
pub fn comparable(job: &JobSpec) -> Value {
    match run(job) {
        Ok(v) => v,
        Err(f) => json!({ "error": f.kind() }),
    }
}

fn check(path: &Path) -> Row {
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let start = Instant::now();
    let entry: Result<Entry, String> = std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()));
    let (name, mismatches) = match entry {
        Err(e) => (String::new(), vec![format!("unreadable: {e}")]),
        Ok(entry) => {
            let got = comparable(&entry.job);
            let mut bad = Vec::new();
            for (key, want) in &entry.expected {
                match got.get(key) {
                    Some(v) if v == want => {}
                    Some(v) => bad.push(format!("{key}: expected {want}, got {v}")),
                    None => bad.push(format!("{key}: missing, result {got}")),
                }
            }
            (entry.name, bad)
        }
    };
    Row { file, name, mismatches, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_corpus(dir: &Path) -> Result<Vec<Row>, String> {
    let paths = files(dir)?;
    Ok(par_map(&paths, |p| check(p)))
}

pub fn report(rows: &[Row]) -> Value {
    let list: Vec<Value> = rows
        .iter()
        .map(|r| json!({ "file": r.file, "name": r.name, "pass": r.passed(), "mismatches": r.mismatches }))
        .collect();
    let passed = rows.iter().filter(|r| r.passed()).count();
    json!({ "rows": list, "passed": passed, "failed": rows.len() - passed })
}

pub fn table(rows: &[Row]) -> String {
    let width = rows.iter().map(|r| r.file.len()).max().unwrap_or(4).max(4);
    let mut out = format!("{:>3}  {:<width$}  {:<6}  {:>8}  name\n", "#", "file", "result", "seconds");
    for (i, r) in rows.iter().enumerate() {
        let status = if r.passed() { "pass" } else { "FAIL" };
        out.push_str(&format!("{:>3}  {:<width$}  {:<6}  {:>8.2}  {}\n", i + 1, r.file, status, r.seconds, r.name));
        for m in &r.mismatches {
            out.push_str(&format!("       {m}\n"));
        }
    }
    let passed = rows.iter().filter(|r| r.passed()).count();
    out.push_str(&format!("{passed}/{} passed\n", rows.len()));
    out
}
