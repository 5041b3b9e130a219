use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub task: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    pub params: BTreeMap<String, String>,
    pub values: BTreeMap<String, i64>,
    pub facts: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub time_ms: u128,
}

impl Report {
    pub fn new(task: &str, algebra: Option<&str>) -> Report {
        Report {
            task: task.into(),
            algebra: algebra.map(|s| s.to_string()),
            params: BTreeMap::new(),
            values: BTreeMap::new(),
            facts: BTreeMap::new(),
            checks: vec![],
            time_ms: 0,
        }
    }

    pub fn param(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.params.insert(k.into(), v.to_string());
        self
    }

    pub fn value(&mut self, k: &str, v: impl TryInto<i64>) -> &mut Self {
        self.values.insert(k.into(), v.try_into().unwrap_or(i64::MAX));
        self
    }

    pub fn fact(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.facts.insert(k.into(), v.to_string());
        self
    }

    pub fn check(&mut self, name: &str, passed: bool, cases: usize, detail: Option<String>) -> &mut Self {
        self.checks.push(Check { name: name.into(), passed, cases, detail });
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "task: {}", self.task).unwrap();
        if let Some(a) = &self.algebra {
            writeln!(s, "algebra: {a}").unwrap();
        }
        for (k, v) in &self.params {
            writeln!(s, "param {k}: {v}").unwrap();
        }
        for (k, v) in &self.values {
            writeln!(s, "value {k} = {v}").unwrap();
        }
        for (k, v) in &self.facts {
            writeln!(s, "fact {k}: {v}").unwrap();
        }
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            write!(s, "check {}: {verdict} ({} cases)", c.name, c.cases).unwrap();
            if let Some(d) = &c.detail {
                write!(s, " -- {d}").unwrap();
            }
            writeln!(s).unwrap();
        }
        writeln!(s, "verdict: {}", if self.passed() { "pass" } else { "FAIL" }).unwrap();
        writeln!(s, "time_ms: {}", self.time_ms).unwrap();
        s
    }

    pub fn render_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
