//! CSV series and the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use sha2::{Digest, Sha256};

use crate::analysis::DistributionSeries;

pub const MANIFEST: &str = "manifest.txt";
pub const MANIFEST_FORMAT: &str = "kickclock-manifest 1";

/// Files written to a run directory, in order, with their checksums.
#[derive(Debug, Default)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<(String, String)>,
}

impl OutputDir {
    pub fn create(root: &Path) -> anyhow::Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating {}", root.display()))?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let path = self.root.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.files.push((name.to_string(), sha256_hex(bytes)));
        Ok(())
    }

    pub fn files(&self) -> &[(String, String)] {
        &self.files
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

/// `t,density,cdf` at full round-trip precision.
pub fn series_csv(series: &DistributionSeries) -> anyhow::Result<Vec<u8>> {
    let rows = (0..series.times.len()).map(|i| {
        vec![
            series.times[i].to_string(),
            series.density[i].to_string(),
            series.cdf[i].to_string(),
        ]
    });
    csv_bytes(&["t", "density", "cdf"], rows)
}

pub fn cdf_csv(series: &DistributionSeries) -> anyhow::Result<Vec<u8>> {
    let rows = (0..series.times.len()).map(|i| vec![series.times[i].to_string(), series.cdf[i].to_string()]);
    csv_bytes(&["t", "cdf"], rows)
}

/// Reads a `t,density[,cdf]` file back into a series.
pub fn read_series(path: &Path, label: &str) -> anyhow::Result<DistributionSeries> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let headers = reader.headers()?.clone();
    if headers.get(0) != Some("t") || headers.get(1) != Some("density") {
        bail!("{}: expected columns t,density", path.display());
    }
    let (mut times, mut density) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |col: usize| -> anyhow::Result<f64> {
            record
                .get(col)
                .unwrap_or("")
                .parse()
                .with_context(|| format!("{} row {}: bad number", path.display(), i + 2))
        };
        times.push(parse(0)?);
        density.push(parse(1)?);
    }
    if times.len() < 2 {
        bail!("{}: fewer than two samples", path.display());
    }
    Ok(DistributionSeries::new(label, times, density))
}

/// Ordered `key = value` document.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Manifest {
    entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut out = Self::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once(" = ") else {
                bail!("manifest line {}: expected `key = value`", i + 1);
            };
            out.push(k.trim(), v.trim());
        }
        Ok(out)
    }

    pub fn load(dir: &Path) -> anyhow::Result<Self> {
        let path = dir.join(MANIFEST);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let manifest = Self::parse(&text)?;
        if manifest.get("format") != Some(MANIFEST_FORMAT) {
            bail!("{}: not a kickclock manifest", path.display());
        }
        Ok(manifest)
    }

    /// Checksums listed under `file.<name>.sha256`.
    pub fn checksums(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .filter_map(|(k, v)| {
                let name = k.strip_prefix("file.")?.strip_suffix(".sha256")?;
                Some((name.to_string(), v.clone()))
            })
            .collect()
    }
}
