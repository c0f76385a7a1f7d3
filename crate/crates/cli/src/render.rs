//! Output documents: one JSON value plus a CSV table view of the same data.

use std::io::Write;

use bratteli_core::macdonald::Distribution;
use bratteli_core::report::VerifyReport;
use bratteli_core::suite::{Comparison, SuiteReport};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A command's result, ready for either format.
pub struct Document {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// An identity check or comparison failed.
    pub violated: bool,
}

impl Document {
    /// A flat object rendered as a one-row table with its keys as header.
    pub fn record(value: impl Serialize) -> Self {
        let json = serde_json::to_value(value).expect("serializable");
        let (header, row) = match &json {
            Value::Object(map) => map.iter().map(|(k, v)| (k.clone(), cell(v))).unzip(),
            other => (vec!["value".into()], vec![cell(other)]),
        };
        Document {
            json,
            header,
            rows: vec![row],
            violated: false,
        }
    }

    pub fn table(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Document {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            violated: false,
        }
    }

    pub fn distribution(d: &Distribution) -> Self {
        let rows = d.entries.iter().map(|(p, x)| vec![p.to_string(), x.to_string(), format!("{:.6}", x.to_f64())]).collect();
        Document::table(serde_json::to_value(d).expect("serializable"), &["partition", "prob", "prob_approx"], rows)
    }

    pub fn report(r: &VerifyReport) -> Self {
        let mut doc = Document::table(serde_json::to_value(r).expect("serializable"), &REPORT_HEADER, vec![report_row(r)]);
        doc.violated = !r.is_ok();
        doc
    }

    pub fn suite(s: &SuiteReport) -> Self {
        let mut doc = Document::table(serde_json::to_value(s).expect("serializable"), &REPORT_HEADER, s.reports.iter().map(report_row).collect());
        doc.violated = !s.is_ok();
        doc
    }

    pub fn comparison(c: &Comparison) -> Self {
        let mut keys: Vec<_> = c.reference.entries.iter().map(|(p, _)| p.clone()).collect();
        keys.extend(c.observed.entries.iter().map(|(p, _)| p.clone()));
        keys.sort_by(|a, b| b.cmp(a));
        keys.dedup();
        let rows = keys
            .iter()
            .map(|p| vec![p.to_string(), c.reference.prob(p).to_string(), c.observed.prob(p).to_string()])
            .collect();
        let mut doc = Document::table(serde_json::to_value(c).expect("serializable"), &["partition", "reference", "observed"], rows);
        doc.violated = !c.is_ok();
        doc
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
        }
    }
}

const REPORT_HEADER: [&str; 6] = ["identity", "n", "params", "checked_count", "status", "counterexample"];

fn report_row(r: &VerifyReport) -> Vec<String> {
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    vec![
        r.identity.clone(),
        r.n.to_string(),
        params.join(";"),
        r.checked_count.to_string(),
        if r.is_ok() { "ok" } else { "violated" }.into(),
        r.counterexample.clone().unwrap_or_default(),
    ]
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
