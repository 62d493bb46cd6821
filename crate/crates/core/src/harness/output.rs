use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::run::{LambdaC, RunOutput, SweepTiming};
use crate::Result;

pub const CSV_HEADER: [&str; 15] = [
    "scenario",
    "partition",
    "method",
    "lambda_over_lc",
    "lambda",
    "lambda_c",
    "sigma",
    "entropy",
    "log_negativity",
    "measure_1",
    "measure_2",
    "entropy_over_m2",
    "negativity_over_m2",
    "negativity_over_m1",
    "flags",
];

/// Shortest decimal that round-trips.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_csv<W: Write>(out: &RunOutput, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &out.rows {
        wr.write_record([
            r.scenario.clone(),
            r.partition.clone(),
            r.method.as_str().to_string(),
            num(r.lambda_over_lc),
            num(r.lambda),
            num(r.lambda_c),
            opt(r.sigma),
            opt(r.entropy),
            opt(r.log_negativity),
            num(r.measure_1),
            num(r.measure_2),
            opt(r.entropy_over_m2),
            opt(r.negativity_over_m2),
            opt(r.negativity_over_m1),
            r.flags.join(";"),
        ])
        .map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> crate::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => crate::Error::Config(format!("csv: {other:?}")),
    }
}

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub scenario: &'a str,
    pub version: &'static str,
    pub config_sha256: String,
    pub lambda_c: LambdaC,
    pub threads: usize,
    pub rows: usize,
    pub timings: &'a [SweepTiming],
    pub total_seconds: f64,
    pub files: Vec<String>,
}

pub fn config_hash(config_text: &str) -> String {
    hex::encode(Sha256::digest(config_text.as_bytes()))
}

/// Writes results.csv, results.json and manifest.json into `dir`.
pub fn write_all(out: &RunOutput, config_text: &str, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let csv_path = dir.join("results.csv");
    write_csv(
        out,
        std::io::BufWriter::new(std::fs::File::create(&csv_path)?),
    )?;
    let json_path = dir.join("results.json");
    let mut f = std::io::BufWriter::new(std::fs::File::create(&json_path)?);
    serde_json::to_writer_pretty(&mut f, out)?;
    writeln!(f)?;
    f.flush()?;
    let manifest = Manifest {
        scenario: &out.scenario,
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: config_hash(config_text),
        lambda_c: out.lambda_c,
        threads: out.threads,
        rows: out.rows.len(),
        timings: &out.timings,
        total_seconds: out.timings.iter().map(|t| t.seconds).sum(),
        files: vec!["results.csv".into(), "results.json".into()],
    };
    let manifest_path = dir.join("manifest.json");
    let mut f = std::fs::File::create(&manifest_path)?;
    serde_json::to_writer_pretty(&mut f, &manifest)?;
    writeln!(f)?;
    Ok(vec![csv_path, json_path, manifest_path])
}
