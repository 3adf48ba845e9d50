//! Deterministic verification reports: an ordered list of check rows, each
//! carrying the identity it certifies, rendered as JSON or CSV.

use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone)]
pub struct CheckRow {
    /// Stable identifier of the verified identity, e.g. "phi-square-scalar".
    pub check: String,
    /// Key parameters of the instance, small and ordered.
    pub params: Vec<(String, String)>,
    pub pass: bool,
    /// Optional numeric/diagnostic payload.
    pub data: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), params: Vec::new(), rows: Vec::new() }
    }

    pub fn param(&mut self, k: &str, v: impl ToString) {
        self.params.push((k.into(), v.to_string()));
    }

    pub fn row(&mut self, check: &str, params: Vec<(String, String)>, pass: bool) {
        self.rows.push(CheckRow { check: check.into(), params, pass, data: Vec::new() });
    }

    pub fn row_data(
        &mut self,
        check: &str,
        params: Vec<(String, String)>,
        pass: bool,
        data: Vec<(String, String)>,
    ) {
        self.rows.push(CheckRow { check: check.into(), params, pass, data });
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "params": self.params.iter().map(|(k, v)| json!({"key": k, "value": v})).collect::<Vec<_>>(),
            "checks": self.rows.iter().map(|r| {
                json!({
                    "check": r.check,
                    "params": r.params.iter().map(|(k, v)| json!({"key": k, "value": v})).collect::<Vec<_>>(),
                    "pass": r.pass,
                    "data": r.data.iter().map(|(k, v)| json!({"key": k, "value": v})).collect::<Vec<_>>(),
                })
            }).collect::<Vec<_>>(),
            "pass": self.all_pass(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,params,pass,data\n");
        for r in &self.rows {
            let params = r
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            let data = r
                .data
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            out.push_str(&format!("{},{params},{},{data}\n", r.check, r.pass));
        }
        out
    }

    pub fn render(&self, format: &str) -> anyhow::Result<String> {
        match format {
            "json" => Ok(serde_json::to_string_pretty(&self.to_json())? + "\n"),
            "csv" => Ok(self.to_csv()),
            other => anyhow::bail!("unknown format {other:?} (expected json or csv)"),
        }
    }
}

pub fn kv(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
