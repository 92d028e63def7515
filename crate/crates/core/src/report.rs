use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Unstable,
}

/// Parameters a check ran with.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub nu: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lambda: Option<String>,
}

/// Outcome of one verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub status: Status,
    /// Structured evidence: counts, offending objects, recorded conventions.
    pub witness: serde_json::Value,
    pub wall_ms: u64,
    pub params: Params,
}

impl CheckReport {
    pub fn new(id: &str, ok: bool, witness: serde_json::Value) -> CheckReport {
        CheckReport {
            id: id.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness,
            wall_ms: 0,
            params: Params::default(),
        }
    }

    pub fn with_params(mut self, params: Params) -> CheckReport {
        self.params = params;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json_line(s: &str) -> Result<CheckReport, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Run a closure and stamp the report with its wall time.
pub fn timed(f: impl FnOnce() -> CheckReport) -> CheckReport {
    let t = Instant::now();
    let mut r = f();
    r.wall_ms = t.elapsed().as_millis() as u64;
    r
}

/// Collects named sub-results into one report.
#[derive(Default)]
pub struct Checklist {
    items: Vec<(String, bool, serde_json::Value)>,
}

impl Checklist {
    pub fn new() -> Checklist {
        Checklist::default()
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: serde_json::Value) -> bool {
        self.items.push((name.to_string(), ok, detail));
        ok
    }

    pub fn ok(&self) -> bool {
        self.items.iter().all(|(_, ok, _)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.items.iter().filter(|(_, ok, _)| !ok).map(|(n, _, _)| n.as_str()).collect()
    }

    pub fn into_report(self, id: &str) -> CheckReport {
        let ok = self.ok();
        let mut map = serde_json::Map::new();
        for (name, pass, detail) in self.items {
            map.insert(name, serde_json::json!({ "pass": pass, "detail": detail }));
        }
        CheckReport::new(id, ok, serde_json::Value::Object(map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let r = CheckReport::new("unproj.census", true, serde_json::json!({"count": 63})).with_params(Params {
            primes: vec![13],
            seed: Some(0),
            nu: vec!["1".into()],
            lambda: None,
        });
        let back = CheckReport::from_json_line(&r.to_json_line()).unwrap();
        assert_eq!(back, r);
    }
}
