use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;
use tmprod_core::fmt::sig17;
use tmprod_core::ValueWithError;

#[derive(Debug, Serialize)]
pub struct ResultRow {
    pub label: String,
    pub value: String,
    pub abs_error: String,
    pub certified: bool,
}

impl ResultRow {
    pub fn new(label: impl Into<String>, v: &ValueWithError) -> Self {
        Self {
            label: label.into(),
            value: sig17(v.value),
            abs_error: sig17(v.abs_error),
            certified: v.certified,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub inputs: BTreeMap<&'static str, String>,
    pub results: Vec<ResultRow>,
    pub pass: Option<bool>,
    pub elapsed_ms: u64,
}

impl RunReport {
    pub fn new(command: &'static str) -> Self {
        Self { command, inputs: BTreeMap::new(), results: Vec::new(), pass: None, elapsed_ms: 0 }
    }

    pub fn input(&mut self, key: &'static str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key, value.to_string());
        self
    }

    pub fn real(&mut self, key: &'static str, value: f64) -> &mut Self {
        self.input(key, sig17(value))
    }

    pub fn push(&mut self, label: impl Into<String>, v: &ValueWithError) {
        self.results.push(ResultRow::new(label, v));
    }

    pub fn write_json(&self, mut out: impl Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)
    }

    pub fn write_table(&self, mut out: impl Write) -> io::Result<()> {
        let inputs: Vec<String> = self.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "{}  {}", self.command, inputs.join(" "))?;
        let width = self.results.iter().map(|r| r.label.len()).max().unwrap_or(0).max(5);
        writeln!(out, "{:<width$}  {:<24}  {:<24}  certified", "label", "value", "abs_error")?;
        for r in &self.results {
            let cert = if r.certified { "yes" } else { "no" };
            writeln!(out, "{:<width$}  {:<24}  {:<24}  {cert}", r.label, r.value, r.abs_error)?;
        }
        if let Some(pass) = self.pass {
            writeln!(out, "{}", if pass { "PASS" } else { "FAIL" })?;
        }
        writeln!(out, "elapsed {} ms", self.elapsed_ms)
    }
}
