use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictEntry {
    pub n: usize,
    pub verdict: Outcome,
    pub witness: Option<String>,
    pub detail: BTreeMap<String, Value>,
}

impl VerdictEntry {
    pub fn new(n: usize, verdict: Outcome) -> Self {
        VerdictEntry { n, verdict, witness: None, detail: BTreeMap::new() }
    }

    pub fn pass_if(n: usize, ok: bool) -> Self {
        Self::new(n, if ok { Outcome::Pass } else { Outcome::Fail })
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.detail.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn witness(mut self, w: impl ToString) -> Self {
        self.witness = Some(w.to_string());
        self
    }

    /// A failure caused by a computed value disagreeing with a closed form.
    pub fn mismatch(n: usize, what: impl ToString) -> Self {
        Self::new(n, Outcome::Fail).with("mismatch", what.to_string())
    }

    fn is_mismatch(&self) -> bool {
        self.verdict == Outcome::Fail && self.witness.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub task: String,
    pub parameters: BTreeMap<String, String>,
    pub verdicts: Vec<VerdictEntry>,
    pub timing_ms: u64,
    pub artifact_version: String,
}

impl VerificationReport {
    pub fn new(task: &str) -> Self {
        VerificationReport {
            task: task.to_string(),
            parameters: BTreeMap::new(),
            verdicts: Vec::new(),
            timing_ms: 0,
            artifact_version: ARTIFACT_VERSION.to_string(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict != Outcome::Fail)
    }

    /// 1 for a witnessed counterexample, 3 for a mismatch, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().any(|v| v.verdict == Outcome::Fail && v.witness.is_some()) {
            1
        } else if self.verdicts.iter().any(VerdictEntry::is_mismatch) {
            3
        } else {
            0
        }
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    /// One row per verdict; detail keys become columns (nested values as JSON).
    pub fn write_csv(&self, out: &mut dyn Write) -> Result<(), csv::Error> {
        let mut keys: Vec<&String> = self.verdicts.iter().flat_map(|v| v.detail.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["n", "verdict", "witness"];
        header.extend(keys.iter().map(|k| k.as_str()));
        w.write_record(&header)?;
        for v in &self.verdicts {
            let mut row = vec![
                v.n.to_string(),
                serde_json::to_value(v.verdict).unwrap().as_str().unwrap().to_string(),
                v.witness.clone().unwrap_or_default(),
            ];
            for k in &keys {
                row.push(match v.detail.get(*k) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(other) => other.to_string(),
                });
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let mut r = VerificationReport::new("t");
        r.verdicts.push(VerdictEntry::new(2, Outcome::Pass));
        r.verdicts.push(VerdictEntry::new(3, Outcome::Skipped));
        assert_eq!(r.exit_code(), 0);
        r.verdicts.push(VerdictEntry::mismatch(4, "x"));
        assert_eq!(r.exit_code(), 3);
        r.verdicts.push(VerdictEntry::new(5, Outcome::Fail).witness("-1/2"));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn csv_columns() {
        let mut r = VerificationReport::new("t");
        r.verdicts.push(VerdictEntry::new(2, Outcome::Pass).with("b", 1).with("a", true));
        r.verdicts.push(VerdictEntry::new(3, Outcome::Fail).witness("1/3").with("c", "x"));
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n,verdict,witness,a,b,c\n2,pass,,true,1,\n3,fail,1/3,,,x\n");
    }
}
