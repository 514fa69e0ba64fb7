//! Certificates and batch run reports.

use serde::Serialize;
use std::time::Duration;

/// Outcome of a single exact check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A concrete counterexample: tensor indices plus the offending entry in
/// canonical string form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub indices: Vec<i64>,
    pub entry: String,
}

/// `{"status": "pass"|"fail", "witness": {...}|null}`
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub status: Status,
    pub witness: Option<Witness>,
}

impl Certificate {
    pub fn pass() -> Self {
        Certificate {
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(indices: Vec<i64>, entry: String) -> Self {
        Certificate {
            status: Status::Fail,
            witness: Some(Witness { indices, entry }),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// One line of a batch report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub status: Status,
    pub witness: Option<Witness>,
}

/// Deterministic report for a spec + seed. Wall times are kept for the
/// human-readable output but excluded from serialization so that identical
/// inputs and seed produce byte-identical JSON reports.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub fingerprint: String,
    pub seed: u64,
    pub checks: Vec<CheckLine>,
    #[serde(skip)]
    pub wall: Vec<Duration>,
}

impl RunReport {
    pub fn new(fingerprint: String, seed: u64) -> Self {
        RunReport {
            fingerprint,
            seed,
            checks: Vec::new(),
            wall: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, cert: &Certificate, wall: Duration) {
        self.checks.push(CheckLine {
            name: name.to_string(),
            status: cert.status,
            witness: cert.witness.clone(),
        });
        self.wall.push(wall);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// Human report, one line per check, with timings.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "spec {} (seed {})\n",
            self.fingerprint, self.seed
        ));
        for (c, w) in self.checks.iter().zip(self.wall.iter()) {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            out.push_str(&format!("  {status:4} {:<40} {:>8.1?}\n", c.name, w));
            if let Some(wit) = &c.witness {
                out.push_str(&format!(
                    "       witness at {:?}: {}\n",
                    wit.indices, wit.entry
                ));
            }
        }
        out
    }
}

/// FNV-1a fingerprint of the canonical spec serialization.
pub fn fingerprint(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
