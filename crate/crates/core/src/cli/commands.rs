use std::path::{Path, PathBuf};

use anyhow::{bail, Context};

use crate::analysis::{
    circular_mean_reading, distribution_distance, mean_reading, theta_distribution, tof_distribution,
    transmission_report, transmitted_theta_distribution, DistributionSeries, TimeWindow,
};
use crate::cli::output::{cdf_csv, csv_bytes, read_series, series_csv, Manifest, OutputDir, MANIFEST, MANIFEST_FORMAT};
use crate::config_file::emit_config;
use crate::experiment::{CouplingMode, ExperimentConfig};
use crate::oracles::ideal_dwell;
use crate::presets::{IMPLEMENTATION_CHOICES, PRESETS};
use crate::propagate::{describe, reading_times, run_experiment, Outcome, RunOptions};
use crate::regime::validate_regime;

pub const TOF_DENSITY: &str = "tof_density.csv";
pub const TOF_CDF: &str = "tof_cdf.csv";
pub const TOF_TRANSMITTED: &str = "tof_transmitted.csv";
pub const IDEAL: &str = "ideal_dwell.csv";
pub const TRANSMISSION: &str = "transmission.csv";
pub const DIAGNOSTICS: &str = "diagnostics.csv";
pub const REGIME: &str = "regime.txt";
pub const CONFIG: &str = "config.txt";

/// Runs one experiment and writes its data files and manifest into `out`.
pub fn cmd_run(config: &ExperimentConfig, out: &Path, options: RunOptions) -> anyhow::Result<Manifest> {
    let result = run_experiment(config, options)?;
    let regime = &result.regime;
    let warnings = regime.warnings(config.mode);
    let mut dir = OutputDir::create(out)?;
    dir.write(CONFIG, emit_config(config).as_bytes())?;

    let mut regime_text = regime.render();
    for w in &warnings {
        regime_text.push_str(&format!("warning = {w}\n"));
    }
    dir.write(REGIME, regime_text.as_bytes())?;

    let label = config.label();
    let times = reading_times(&config.clock, config.theta_points);
    let ideal = match &result.outcome {
        Outcome::Ideal(ideal) => ideal.clone(),
        Outcome::Propagated(_) => ideal_dwell(
            &config.packet,
            config.flight_distance(),
            &config.physical,
            &times,
            config.guards.negative_momentum_threshold,
        )?,
    };
    let ideal = DistributionSeries::from_ideal("ideal", &ideal);
    dir.write(IDEAL, &series_csv(&ideal)?)?;

    let mut masses: Vec<(&str, f64)> = vec![(IDEAL, ideal.mass)];
    let mut summary = Manifest::default();
    summary.push("summary.ideal_mean", ideal_mean(&ideal));

    if let Outcome::Propagated(trajectory) = &result.outcome {
        let state = &trajectory.final_state;
        let series = tof_distribution(&theta_distribution(state, config.theta_points)?, &config.clock, &label);
        let transmitted = tof_distribution(
            &transmitted_theta_distribution(state, &config.region, config.theta_points)?,
            &config.clock,
            format!("{label} transmitted"),
        );
        dir.write(TOF_DENSITY, &series_csv(&series)?)?;
        dir.write(TOF_CDF, &cdf_csv(&series)?)?;
        dir.write(TOF_TRANSMITTED, &series_csv(&transmitted)?)?;
        masses.push((TOF_DENSITY, series.mass));
        masses.push((TOF_TRANSMITTED, transmitted.mass));

        let report = transmission_report(state, &config.region);
        let rows = report.channels.iter().map(|c| {
            vec![
                c.n.to_string(),
                c.left.to_string(),
                c.inside.to_string(),
                c.right.to_string(),
            ]
        });
        dir.write(TRANSMISSION, &csv_bytes(&["n", "left", "inside", "right"], rows)?)?;

        let rows = trajectory.snapshots.iter().map(|s| {
            vec![
                s.time.to_string(),
                s.norm.to_string(),
                s.region_occupancy.to_string(),
                s.boundary_occupancy.to_string(),
            ]
        });
        dir.write(
            DIAGNOSTICS,
            &csv_bytes(&["time", "norm", "region_occupancy", "boundary_occupancy"], rows)?,
        )?;

        let distance = distribution_distance(&series, &ideal)?;
        summary.push("summary.mean_reading", mean_reading(&series, None)?);
        summary.push("summary.circular_mean_reading", circular_mean_reading(&series));
        summary.push("summary.sup_cdf_distance_to_ideal", distance.sup_cdf);
        summary.push("summary.l1_distance_to_ideal", distance.l1_density);
        summary.push("summary.mass_left", report.left);
        summary.push("summary.mass_inside", report.inside);
        summary.push("summary.mass_right", report.right);
        if let Some(tf) = config.classical_tof() {
            if let Ok(m) = mean_reading(&transmitted, Some(TimeWindow::new(0.5 * tf, 1.5 * tf))) {
                summary.push("summary.transmitted_window_mean", m);
            }
        }
    }

    let d = &result.diagnostics;
    let mut manifest = Manifest::default();
    manifest.push("format", MANIFEST_FORMAT);
    manifest.push("version", env!("CARGO_PKG_VERSION"));
    manifest.push("label", &label);
    manifest.push("description", describe(config));
    manifest.push("mode", config.mode);
    manifest.push("measurement", result.measurement());
    manifest.push("config", CONFIG);
    manifest.push("workers", options.workers.map_or("default".to_string(), |w| w.to_string()));
    for (key, value) in IMPLEMENTATION_CHOICES {
        manifest.push(format!("implementation_choice.{key}"), value);
    }
    manifest.push("diagnostics.norm_initial", d.norm_initial);
    manifest.push("diagnostics.norm_final", d.norm_final);
    manifest.push("diagnostics.norm_drift", d.norm_drift);
    manifest.push("diagnostics.max_channel_drift", d.max_channel_drift);
    manifest.push("diagnostics.region_occupancy", d.region_occupancy);
    manifest.push("diagnostics.boundary_occupancy", d.boundary_occupancy);
    manifest.push(
        "diagnostics.wall_clock_seconds",
        d.wall_clock_seconds.map_or("unavailable".to_string(), |s| format!("{s:.3}")),
    );
    manifest.push("regime.warnings", warnings.len());
    for (i, w) in warnings.iter().enumerate() {
        manifest.push(format!("regime.warning.{}", i + 1), w);
    }
    for (k, v) in summary.entries() {
        manifest.push(k.clone(), v);
    }
    for (name, mass) in &masses {
        manifest.push(format!("mass.{name}"), mass);
    }
    for (name, sum) in dir.files() {
        manifest.push(format!("file.{name}.sha256"), sum);
    }
    std::fs::write(dir.root().join(MANIFEST), manifest.render())
        .with_context(|| format!("writing manifest in {}", out.display()))?;
    Ok(manifest)
}

fn ideal_mean(ideal: &DistributionSeries) -> f64 {
    mean_reading(ideal, None).unwrap_or(f64::NAN)
}

/// One completed run as seen by `compare`.
pub struct RunSeries {
    pub dir: PathBuf,
    pub label: String,
    pub mode: CouplingMode,
    pub kick_period: Option<f64>,
    pub series: DistributionSeries,
}

pub fn load_run(dir: &Path) -> anyhow::Result<RunSeries> {
    let manifest = Manifest::load(dir)?;
    let mode: CouplingMode = manifest
        .get("mode")
        .context("manifest lacks `mode`")?
        .parse()
        .map_err(anyhow::Error::msg)?;
    let label = manifest.get("label").unwrap_or("run").to_string();
    let file = if mode == CouplingMode::IdealReference { IDEAL } else { TOF_DENSITY };
    let series = read_series(&dir.join(file), &label)?;
    let config = crate::config_file::load_config(dir.join(CONFIG))?;
    Ok(RunSeries {
        dir: dir.to_path_buf(),
        label,
        mode,
        kick_period: config.kick_period,
        series,
    })
}

pub struct Comparison {
    pub labels: Vec<String>,
    /// Row-major `sup_cdf` and `l1_density` tables.
    pub sup_cdf: Vec<f64>,
    pub l1_density: Vec<f64>,
    /// `(T, sup θ-free CDF distance to the continuous run)`, sorted by `T`.
    pub period_sweep: Vec<(f64, f64)>,
}

/// Aligned CDFs, the pairwise distance table and, when a continuous run is
/// present, the distance of each kicked run to it ordered by period.
pub fn cmd_compare(dirs: &[PathBuf], out: &Path) -> anyhow::Result<Comparison> {
    if dirs.len() < 2 {
        bail!("compare needs at least two run directories");
    }
    let mut runs = dirs.iter().map(|d| load_run(d)).collect::<anyhow::Result<Vec<_>>>()?;
    let mut labels: Vec<String> = Vec::new();
    for run in &mut runs {
        let mut label = run.label.clone();
        let mut k = 2;
        while labels.contains(&label) {
            label = format!("{} #{k}", run.label);
            k += 1;
        }
        run.label = label.clone();
        labels.push(label);
    }
    let n = runs.len();
    let mut sup_cdf = vec![0.0; n * n];
    let mut l1_density = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            let d = distribution_distance(&runs[a].series, &runs[b].series).map_err(|e| {
                anyhow::anyhow!("{} vs {}: {e}", runs[a].dir.display(), runs[b].dir.display())
            })?;
            sup_cdf[a * n + b] = d.sup_cdf;
            l1_density[a * n + b] = d.l1_density;
        }
    }

    let mut dir = OutputDir::create(out)?;
    let mut header = vec!["t".to_string()];
    header.extend(labels.iter().cloned());
    let times = &runs[0].series.times;
    let rows = (0..times.len()).map(|i| {
        let mut row = vec![times[i].to_string()];
        row.extend(runs.iter().map(|r| r.series.cdf[i].to_string()));
        row
    });
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    dir.write("compare_cdf.csv", &csv_bytes(&header_refs, rows)?)?;

    let rows = (0..n * n).map(|k| {
        vec![
            labels[k / n].clone(),
            labels[k % n].clone(),
            sup_cdf[k].to_string(),
            l1_density[k].to_string(),
        ]
    });
    dir.write("distances.csv", &csv_bytes(&["a", "b", "sup_cdf", "l1_density"], rows)?)?;

    let mut period_sweep = Vec::new();
    if let Some(c) = runs.iter().position(|r| r.mode == CouplingMode::Continuous) {
        for (k, run) in runs.iter().enumerate() {
            if let (CouplingMode::Kicked, Some(t)) = (run.mode, run.kick_period) {
                period_sweep.push((t, sup_cdf[k * n + c]));
            }
        }
        period_sweep.sort_by(|a, b| a.0.total_cmp(&b.0));
        if !period_sweep.is_empty() {
            let rows = period_sweep.iter().map(|(t, d)| vec![t.to_string(), d.to_string()]);
            dir.write("period_sweep.csv", &csv_bytes(&["T", "sup_cdf_to_continuous"], rows)?)?;
        }
    }
    Ok(Comparison {
        labels,
        sup_cdf,
        l1_density,
        period_sweep,
    })
}

impl Comparison {
    /// Whether the distance to the continuous run grows with `T`.
    pub fn sweep_monotone(&self) -> Option<bool> {
        (self.period_sweep.len() >= 2).then(|| self.period_sweep.windows(2).all(|w| w[1].1 >= w[0].1))
    }

    pub fn render(&self) -> String {
        let n = self.labels.len();
        let mut s = String::from("sup CDF distance\n");
        for a in 0..n {
            let row: Vec<String> = (0..n).map(|b| format!("{:.6}", self.sup_cdf[a * n + b])).collect();
            s.push_str(&format!("{:>24}  {}\n", self.labels[a], row.join("  ")));
        }
        if !self.period_sweep.is_empty() {
            s.push_str("kicked vs continuous by period\n");
            for (t, d) in &self.period_sweep {
                s.push_str(&format!("  T = {t}: {d:.6}\n"));
            }
            if let Some(m) = self.sweep_monotone() {
                s.push_str(&format!("  grows with T: {}\n", if m { "yes" } else { "no" }));
            }
        }
        s
    }
}

pub fn cmd_validate(config: &ExperimentConfig) -> String {
    let report = validate_regime(config);
    let mut s = report.render();
    for w in report.warnings(config.mode) {
        s.push_str(&format!("warning = {w}\n"));
    }
    s
}

pub fn preset_list() -> String {
    PRESETS
        .iter()
        .map(|p| format!("{:<24} {}\n", p.name, p.description))
        .collect()
}
