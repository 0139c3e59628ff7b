//! CSV and JSON emission. A JSON document holds the same rows as the CSV plus
//! a `metadata` object.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct ParamsMeta {
    pub lambda_u: f64,
    pub lambda_r: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub mu: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub command: &'static str,
    pub tool_version: &'static str,
    pub params: ParamsMeta,
    pub seed: u64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<&'static str, f64>,
}

impl Metadata {
    pub fn new(command: &'static str, config: &RunConfig) -> Self {
        let p = &config.params;
        Metadata {
            command,
            tool_version: env!("CARGO_PKG_VERSION"),
            params: ParamsMeta {
                lambda_u: p.lambda_u(),
                lambda_r: p.lambda_r(),
                gamma_a: p.a(),
                gamma_b: p.b(),
                mu: p.mu(),
                lambda: p.lam(),
            },
            seed: config.seed,
            extra: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &'static str, value: f64) -> Self {
        self.extra.insert(key, value);
        self
    }
}

#[derive(Serialize)]
struct Document<'a, R> {
    metadata: &'a Metadata,
    rows: &'a [R],
}

pub fn render<R: Serialize>(rows: &[R], meta: &Metadata, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
            Ok(w.into_inner().map_err(|e| e.into_error())?)
        }
        Format::Json => {
            let mut buf = serde_json::to_vec_pretty(&Document {
                metadata: meta,
                rows,
            })?;
            buf.push(b'\n');
            Ok(buf)
        }
    }
}

/// Writes to `--out`, or standard output.
pub fn emit(bytes: &[u8], config: &RunConfig) -> Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        #[serde(rename = "K")]
        k: u32,
        x: Option<f64>,
    }

    #[test]
    fn csv_has_header_and_empty_absent_fields() {
        let meta = Metadata::new("t", &RunConfig::default());
        let rows = [Row { k: 1, x: Some(0.5) }, Row { k: 2, x: None }];
        let text = String::from_utf8(render(&rows, &meta, Format::Csv).unwrap()).unwrap();
        assert_eq!(text, "K,x\n1,0.5\n2,\n");
    }

    #[test]
    fn json_mirrors_rows() {
        let meta = Metadata::new("t", &RunConfig::default()).with("slope", -0.5);
        let rows = [Row { k: 1, x: Some(0.5) }];
        let v: serde_json::Value =
            serde_json::from_slice(&render(&rows, &meta, Format::Json).unwrap()).unwrap();
        assert_eq!(v["rows"][0]["K"], 1);
        assert_eq!(v["metadata"]["params"]["mu"], 5.0);
        assert_eq!(v["metadata"]["seed"], 42);
        assert_eq!(v["metadata"]["extra"]["slope"], -0.5);
    }
}
