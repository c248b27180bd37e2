//! CSV datasets and JSON reports.

use std::fs;
use std::path::{Path, PathBuf};

use persuasion::equilibrium::{Cutoff, SenderPolicy, Valuation};
use persuasion::model::{Action, ReceiverChoice};
use persuasion::Profile;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Config, SCHEMA_VERSION};

/// Fixed-width scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn choice_label(c: ReceiverChoice) -> &'static str {
    match c {
        ReceiverChoice::Wait => "wait",
        ReceiverChoice::Take(Action::L) => "l",
        ReceiverChoice::Take(Action::R) => "r",
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Destination for a command's report and dataset.
pub struct Sink {
    pub dir: Option<PathBuf>,
}

impl Sink {
    pub fn emit(&self, command: &str, config: &Config, result: Value, table: Option<(&str, &Table)>) -> Result<(), String> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        let report = json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "config": config,
            "result": result,
        });
        let path = dir.join("report.json");
        let text = serde_json::to_string_pretty(&report).expect("report serialises");
        fs::write(&path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
        if let Some((name, t)) = table {
            let path = dir.join(name);
            t.write(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        Ok(())
    }
}

pub fn to_value<S: Serialize>(x: &S) -> Value {
    serde_json::to_value(x).expect("value serialises")
}

pub fn profile_json(e: &Profile) -> Value {
    let cutoffs: serde_json::Map<String, Value> = e
        .cutoffs
        .entries()
        .into_iter()
        .map(|(name, c)| {
            let v = match c {
                Cutoff::At(r) => json!({ "value": r.value, "residual": r.residual }),
                Cutoff::Undefined(why) => json!({ "undefined": why }),
            };
            (name.to_owned(), v)
        })
        .collect();
    let segments: Vec<Value> = e
        .segments
        .iter()
        .map(|s| {
            let receiver = match s.valuation {
                Valuation::Waiting(_) => "wait",
                Valuation::Stopped(a) => choice_label(ReceiverChoice::Take(a)),
            };
            json!({
                "lo": s.lo,
                "hi": s.hi,
                "lo_closed": s.lo_closed,
                "hi_closed": s.hi_closed,
                "sender": to_value(&s.policy),
                "receiver": receiver,
            })
        })
        .collect();
    json!({
        "case": e.case,
        "cutoffs": cutoffs,
        "segments": segments,
        "diagnostics": to_value(&e.diagnostics),
    })
}

/// Values and strategies on `n` evenly spaced beliefs in `[0, 1]`.
pub fn value_table(e: &Profile, n: usize) -> Table {
    let mut t = Table::new(vec!["p", "sender_value", "receiver_value", "sender_policy", "target", "receiver"]);
    for i in 0..n {
        let p = i as f64 / (n - 1) as f64;
        let (policy, choice) = e.policy_at(p);
        let target = match policy {
            SenderPolicy::LDrift { target } => Some(target),
            SenderPolicy::Stationary { high } => Some(high),
            _ => None,
        };
        t.push(vec![
            num(p),
            num(e.sender_value(p).unwrap_or(f64::NAN)),
            num(e.receiver_value(p).unwrap_or(f64::NAN)),
            policy.label().to_owned(),
            opt_num(target),
            choice_label(choice).to_owned(),
        ]);
    }
    t
}
