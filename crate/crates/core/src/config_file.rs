//! Plain-text experiment configuration.
//!
//! ```text
//! # comments start with '#'
//! mode = kicked              # continuous | kicked | ideal-reference (required)
//! placement = outside        # outside | inside (inferred from x0 if absent)
//!
//! [physical]  mass, hbar
//! [region]    x_left, x_right
//! [clock]     omega, j
//! [grid]      x_min, x_max, num_points
//! [packet]    sigma, x0, p0
//! [schedule]  t_final, dt, kick_period, kick_at_zero, snapshots
//! [analysis]  theta_points, dominance_factor
//! [guards]    max_norm_drift, max_region_occupancy, max_boundary_occupancy,
//!             boundary_fraction, negative_momentum_threshold
//! ```
//!
//! Every key except `mode` defaults to the `fig1` scenario. Unknown sections
//! and keys are rejected.

use std::fmt::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiment::{CouplingMode, ExperimentConfig, Placement};
use crate::presets::fig1_base;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn value<T: FromStr>(line: usize, key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| parse_err(line, format!("cannot parse `{raw}` for `{key}`")))
}

fn boolean(line: usize, key: &str, raw: &str) -> Result<bool> {
    match raw {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(parse_err(line, format!("`{key}` expects true or false, got `{raw}`"))),
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut mode: Option<CouplingMode> = None;
    let mut placement: Option<Placement> = None;
    let mut cfg = fig1_base(CouplingMode::Continuous);
    let mut section = String::new();
    let mut seen = std::collections::HashSet::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line, "unterminated section header"))?
                .trim();
            const SECTIONS: &[&str] = &[
                "physical", "region", "clock", "grid", "packet", "schedule", "analysis", "guards",
            ];
            if !SECTIONS.contains(&name) {
                return Err(parse_err(line, format!("unknown section [{name}]")));
            }
            section = name.to_string();
            continue;
        }
        let (key, raw) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
        let (key, raw) = (key.trim(), raw.trim());
        if raw.is_empty() {
            return Err(parse_err(line, format!("missing value for `{key}`")));
        }
        if !seen.insert(format!("{section}.{key}")) {
            return Err(parse_err(line, format!("duplicate key `{key}`")));
        }
        match (section.as_str(), key) {
            ("", "mode") => mode = Some(raw.parse().map_err(|e: String| parse_err(line, e))?),
            ("", "placement") => placement = Some(raw.parse().map_err(|e: String| parse_err(line, e))?),
            ("physical", "mass") => cfg.physical.mass = value(line, key, raw)?,
            ("physical", "hbar") => cfg.physical.hbar = value(line, key, raw)?,
            ("region", "x_left") => cfg.region.x_left = value(line, key, raw)?,
            ("region", "x_right") => cfg.region.x_right = value(line, key, raw)?,
            ("clock", "omega") => cfg.clock.omega = value(line, key, raw)?,
            ("clock", "j") => cfg.clock.j = value(line, key, raw)?,
            ("grid", "x_min") => cfg.grid.x_min = value(line, key, raw)?,
            ("grid", "x_max") => cfg.grid.x_max = value(line, key, raw)?,
            ("grid", "num_points") => cfg.grid.num_points = value(line, key, raw)?,
            ("packet", "sigma") => cfg.packet.sigma = value(line, key, raw)?,
            ("packet", "x0") => cfg.packet.x0 = value(line, key, raw)?,
            ("packet", "p0") => cfg.packet.p0 = value(line, key, raw)?,
            ("schedule", "t_final") => cfg.t_final = value(line, key, raw)?,
            ("schedule", "dt") => cfg.dt = Some(value(line, key, raw)?),
            ("schedule", "kick_period") => cfg.kick_period = Some(value(line, key, raw)?),
            ("schedule", "kick_at_zero") => cfg.kick_at_zero = boolean(line, key, raw)?,
            ("schedule", "snapshots") => cfg.snapshot_count = value(line, key, raw)?,
            ("analysis", "theta_points") => cfg.theta_points = value(line, key, raw)?,
            ("analysis", "dominance_factor") => cfg.dominance_factor = value(line, key, raw)?,
            ("guards", "max_norm_drift") => cfg.guards.max_norm_drift = value(line, key, raw)?,
            ("guards", "max_region_occupancy") => {
                cfg.guards.max_region_occupancy = value(line, key, raw)?
            }
            ("guards", "max_boundary_occupancy") => {
                cfg.guards.max_boundary_occupancy = value(line, key, raw)?
            }
            ("guards", "boundary_fraction") => cfg.guards.boundary_fraction = value(line, key, raw)?,
            ("guards", "negative_momentum_threshold") => {
                cfg.guards.negative_momentum_threshold = value(line, key, raw)?
            }
            _ => {
                let place = if section.is_empty() {
                    "top level".to_string()
                } else {
                    format!("[{section}]")
                };
                return Err(parse_err(line, format!("unknown key `{key}` in {place}")));
            }
        }
    }

    cfg.mode = mode.ok_or_else(|| Error::Config("missing mandatory key `mode`".into()))?;
    if !seen.contains("guards.max_boundary_occupancy") {
        cfg.guards.max_boundary_occupancy = fig1_base(cfg.mode).guards.max_boundary_occupancy;
    }
    cfg.placement = placement.unwrap_or_else(|| ExperimentConfig::infer_placement(&cfg.region, &cfg.packet));
    if cfg.mode == CouplingMode::Continuous && cfg.dt.is_none() {
        cfg.dt = Some(cfg.default_dt());
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// Renders every resolved parameter; `parse_config` reads it back unchanged.
pub fn emit_config(cfg: &ExperimentConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "mode = {}", cfg.mode);
    let _ = writeln!(s, "placement = {}", cfg.placement);
    let _ = writeln!(s, "\n[physical]\nmass = {}\nhbar = {}", cfg.physical.mass, cfg.physical.hbar);
    let _ = writeln!(s, "\n[region]\nx_left = {}\nx_right = {}", cfg.region.x_left, cfg.region.x_right);
    let _ = writeln!(s, "\n[clock]\nomega = {}\nj = {}", cfg.clock.omega, cfg.clock.j);
    let _ = writeln!(
        s,
        "\n[grid]\nx_min = {}\nx_max = {}\nnum_points = {}",
        cfg.grid.x_min, cfg.grid.x_max, cfg.grid.num_points
    );
    let _ = writeln!(
        s,
        "\n[packet]\nsigma = {}\nx0 = {}\np0 = {}",
        cfg.packet.sigma, cfg.packet.x0, cfg.packet.p0
    );
    let _ = writeln!(s, "\n[schedule]\nt_final = {}", cfg.t_final);
    if let Some(dt) = cfg.dt {
        let _ = writeln!(s, "dt = {dt}");
    }
    if let Some(t) = cfg.kick_period {
        let _ = writeln!(s, "kick_period = {t}");
    }
    let _ = writeln!(s, "kick_at_zero = {}\nsnapshots = {}", cfg.kick_at_zero, cfg.snapshot_count);
    let _ = writeln!(
        s,
        "\n[analysis]\ntheta_points = {}\ndominance_factor = {}",
        cfg.theta_points, cfg.dominance_factor
    );
    let g = &cfg.guards;
    let _ = writeln!(
        s,
        "\n[guards]\nmax_norm_drift = {}\nmax_region_occupancy = {}\nmax_boundary_occupancy = {}\nboundary_fraction = {}\nnegative_momentum_threshold = {}",
        g.max_norm_drift, g.max_region_occupancy, g.max_boundary_occupancy, g.boundary_fraction, g.negative_momentum_threshold
    );
    s
}
