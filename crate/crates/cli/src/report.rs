use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// A named numerical result, with uncertainty where one exists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub re: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

/// One pass/fail verdict. With a `target`, passes when
/// `|value - target| <= tolerance`; otherwise when `value <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, target: None, tolerance, passed: value <= tolerance }
    }

    pub fn near(name: impl Into<String>, value: f64, target: f64, tolerance: f64) -> Self {
        let passed = (value - target).abs() <= tolerance;
        Self { name: name.into(), value, target: Some(target), tolerance, passed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub inputs: Value,
    pub results: Vec<Quantity>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub tables: Vec<Table>,
    pub passed: bool,
    pub duration_seconds: f64,
}

/// Convergence rows: `h, n_paths, value_re, value_im, stderr`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub h: f64,
    pub n_paths: usize,
    pub value_re: f64,
    pub value_im: f64,
    pub stderr: f64,
}

impl Report {
    pub fn new(command: &str, seed: u64, inputs: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            inputs,
            results: Vec::new(),
            checks: Vec::new(),
            tables: Vec::new(),
            passed: true,
            duration_seconds: 0.0,
        }
    }

    pub fn real(&mut self, name: &str, value: f64) {
        self.results.push(Quantity { name: name.into(), re: value, im: None, stderr: None });
    }

    pub fn complex(&mut self, name: &str, value: num_complex::Complex64, stderr: Option<f64>) {
        self.results.push(Quantity { name: name.into(), re: value.re, im: Some(value.im), stderr });
    }

    pub fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn result(&self, name: &str) -> Option<&Quantity> {
        self.results.iter().find(|q| q.name == name)
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// JSON with the wall-clock duration removed: identical for identical
    /// (config, seed, version).
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.remove("duration_seconds");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["table", "h", "n_paths", "value_re", "value_im", "stderr"])?;
        for t in &self.tables {
            for r in &t.rows {
                w.write_record([
                    t.name.clone(),
                    r.h.to_string(),
                    r.n_paths.to_string(),
                    r.value_re.to_string(),
                    r.value_im.to_string(),
                    r.stderr.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
