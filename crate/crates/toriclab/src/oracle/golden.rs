//! Golden files regenerated from the oracles and diffed against disk.
//!
//! Layout under the fixtures root: `germs/<name>.json` are inputs,
//! `golden/<name>.json` the recorded oracle outputs.

use super::{oracle_lattice_scan, oracle_mld, EnumerationRecord, Predicate};
use crate::error::{Error, Result};
use crate::exact_lattice::{qf, qvec, Rational};
use crate::serial::{self, QStr};
use crate::toric_germ::FibrationGerm;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable naming the fixtures root.
pub const FIXTURES_ENV: &str = "TORICLAB_FIXTURES";

/// The fixtures root: `$TORICLAB_FIXTURES`, else the workspace `fixtures/` directory.
pub fn fixtures_root() -> PathBuf {
    std::env::var_os(FIXTURES_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoldenCase {
    /// A germ file; its golden value is the oracle mld.
    Germ { name: String, path: PathBuf },
    /// A fixed lattice scan.
    Scan { name: String, basis: Vec<Vec<Rational>>, lo: Vec<i64>, hi: Vec<i64>, predicate: Predicate },
}

impl GoldenCase {
    pub fn name(&self) -> &str {
        match self {
            GoldenCase::Germ { name, .. } | GoldenCase::Scan { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GoldenValue {
    Mld { germ: String, oracle_mld: QStr, cap: QStr },
    Scan { record: EnumerationRecord },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoldenOutcome {
    Match,
    Blessed,
    Missing,
    Differs { expected: String, actual: String },
    Failed(String),
}

impl GoldenOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, GoldenOutcome::Match | GoldenOutcome::Blessed)
    }
}

fn scan_cases() -> Vec<GoldenCase> {
    let closure_simplex = Predicate::closure(&[(qvec(&[1, 0]), qf(0, 1)), (qvec(&[0, 1]), qf(0, 1)), (qvec(&[-1, -1]), qf(-1, 1))]);
    // 3·conv{0, e1, e2, -e1} = {y ≥ 0, x + y ≤ 3, y - x ≤ 3}.
    let triangle = Predicate::interior(&[(qvec(&[0, 1]), qf(0, 1)), (qvec(&[-1, -1]), qf(-3, 1)), (qvec(&[1, -1]), qf(-3, 1))]);
    let unit = Predicate::interior(&[(qvec(&[1]), qf(0, 1)), (qvec(&[-1]), qf(-1, 1))]);
    vec![
        GoldenCase::Scan {
            name: "scan_half_lattice_simplex".into(),
            basis: vec![vec![qf(1, 2), qf(1, 2)], qvec(&[0, 1])],
            lo: vec![-4, -4],
            hi: vec![4, 4],
            predicate: closure_simplex,
        },
        GoldenCase::Scan {
            name: "scan_interior_triangle".into(),
            basis: vec![qvec(&[1, 0]), qvec(&[0, 1])],
            lo: vec![-3, -3],
            hi: vec![3, 3],
            predicate: triangle,
        },
        GoldenCase::Scan {
            name: "scan_open_unit_interval".into(),
            basis: vec![qvec(&[1])],
            lo: vec![-10],
            hi: vec![10],
            predicate: unit,
        },
    ]
}

/// Every germ under `root/germs` in name order, then the fixed scans.
pub fn golden_cases(root: &Path) -> Result<Vec<GoldenCase>> {
    let dir = root.join("germs");
    let entries = std::fs::read_dir(&dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
    let mut germs: Vec<GoldenCase> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|path| GoldenCase::Germ { name: path.file_stem().unwrap().to_string_lossy().into_owned(), path })
        .collect();
    germs.sort_by(|a, b| a.name().cmp(b.name()));
    germs.extend(scan_cases());
    Ok(germs)
}

/// Smallest cap in 1, 2, 4, ... 64 at which the scan finds a value.
pub fn oracle_mld_doubling(g: &FibrationGerm) -> Result<(Rational, Rational)> {
    let mut cap = qf(1, 1);
    loop {
        match oracle_mld(g, &cap) {
            Ok(v) => return Ok((v, cap)),
            Err(Error::CapTooSmall) if cap < qf(64, 1) => cap *= qf(2, 1),
            Err(e) => return Err(e),
        }
    }
}

/// Regenerates one golden value from the oracles.
pub fn compute_golden(case: &GoldenCase) -> Result<GoldenValue> {
    match case {
        GoldenCase::Germ { name, path } => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let g = FibrationGerm::from_json(&text)?;
            let (v, cap) = oracle_mld_doubling(&g)?;
            Ok(GoldenValue::Mld { germ: name.clone(), oracle_mld: QStr(v), cap: QStr(cap) })
        }
        GoldenCase::Scan { basis, lo, hi, predicate, .. } => {
            Ok(GoldenValue::Scan { record: oracle_lattice_scan(basis, lo, hi, predicate.clone())? })
        }
    }
}

pub fn golden_path(root: &Path, name: &str) -> PathBuf {
    root.join("golden").join(format!("{name}.json"))
}

/// Regenerates every case and diffs it against `root/golden`; `bless` overwrites.
pub fn run_golden(root: &Path, bless: bool) -> Result<Vec<(String, GoldenOutcome)>> {
    let cases = golden_cases(root)?;
    Ok(cases
        .iter()
        .map(|case| (case.name().to_string(), check_golden(root, case, bless)))
        .collect())
}

/// Regenerates one case and diffs or blesses its golden file.
pub fn check_golden(root: &Path, case: &GoldenCase, bless: bool) -> GoldenOutcome {
    let actual = match compute_golden(case) {
        Ok(v) => serial::to_json(&v),
        Err(e) => return GoldenOutcome::Failed(e.to_string()),
    };
    let path = golden_path(root, case.name());
    if bless {
        let written = std::fs::create_dir_all(root.join("golden")).and_then(|_| std::fs::write(&path, format!("{actual}\n")));
        return match written {
            Ok(()) => GoldenOutcome::Blessed,
            Err(e) => GoldenOutcome::Failed(e.to_string()),
        };
    }
    match std::fs::read_to_string(&path) {
        Err(_) => GoldenOutcome::Missing,
        Ok(expected) if expected.trim_end() == actual => GoldenOutcome::Match,
        Ok(expected) => GoldenOutcome::Differs { expected: expected.trim_end().to_string(), actual },
    }
}
