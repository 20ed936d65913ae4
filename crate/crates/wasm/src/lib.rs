//! Browser bindings for the kickclock simulator.
//!
//! The plain functions ([`regime`], [`simulate`], [`transmission_curve`]) are
//! what the exported wrappers call; they are usable and testable natively.

use kickclock::analysis::{circular_mean_reading, theta_distribution, tof_distribution};
use kickclock::config_file::parse_config;
use kickclock::oracles::{barrier_amplitudes, ideal_dwell};
use kickclock::propagate::reading_times;
use kickclock::{run_experiment, PhysicalConfig, RunOptions};
use wasm_bindgen::prelude::*;

/// Clock-reading distribution of one run next to the free-motion reference.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Reading {
    times: Vec<f64>,
    density: Vec<f64>,
    ideal: Vec<f64>,
    mean: f64,
    ideal_mean: f64,
    norm_drift: f64,
    regime: String,
}

#[wasm_bindgen]
impl Reading {
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    /// Empty for `ideal-reference` configurations.
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }

    pub fn ideal(&self) -> Vec<f64> {
        self.ideal.clone()
    }

    /// Circular mean of the reading; NaN when nothing was propagated.
    #[wasm_bindgen(getter)]
    pub fn mean(&self) -> f64 {
        self.mean
    }

    #[wasm_bindgen(getter)]
    pub fn ideal_mean(&self) -> f64 {
        self.ideal_mean
    }

    #[wasm_bindgen(getter)]
    pub fn norm_drift(&self) -> f64 {
        self.norm_drift
    }

    #[wasm_bindgen(getter)]
    pub fn regime(&self) -> String {
        self.regime.clone()
    }
}

/// Regime report of a configuration, with warnings appended.
pub fn regime(config: &str) -> Result<String, String> {
    let cfg = parse_config(config).map_err(|e| e.to_string())?;
    cfg.validate().map_err(|e| e.to_string())?;
    let report = kickclock::regime::validate_regime(&cfg);
    let mut text = report.render();
    for w in report.warnings(cfg.mode) {
        text.push_str("warning = ");
        text.push_str(&w);
        text.push('\n');
    }
    Ok(text)
}

pub fn simulate(config: &str) -> Result<Reading, String> {
    let cfg = parse_config(config).map_err(|e| e.to_string())?;
    let result = run_experiment(&cfg, RunOptions::default()).map_err(|e| e.to_string())?;
    let times = reading_times(&cfg.clock, cfg.theta_points);
    let ideal = ideal_dwell(
        &cfg.packet,
        cfg.flight_distance(),
        &cfg.physical,
        &times,
        cfg.guards.negative_momentum_threshold,
    )
    .map_err(|e| e.to_string())?;
    let ideal_mean = ideal.mean();
    let (density, mean) = match result.final_state() {
        Some(state) => {
            let theta = theta_distribution(state, cfg.theta_points).map_err(|e| e.to_string())?;
            let series = tof_distribution(&theta, &cfg.clock, cfg.label());
            let mean = circular_mean_reading(&series);
            (series.density, mean)
        }
        None => (Vec::new(), f64::NAN),
    };
    Ok(Reading {
        times,
        density,
        ideal: ideal.density,
        mean,
        ideal_mean,
        norm_drift: result.diagnostics.norm_drift,
        regime: result.regime.render(),
    })
}

/// `|t(E)|²` for a barrier of the given height and width on `points`
/// log-spaced energies in `[e_min, e_max]` (`m = ħ = 1`).
pub fn transmission_curve(
    height: f64,
    width: f64,
    e_min: f64,
    e_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    if !(e_min > 0.0 && e_max > e_min) || points < 2 {
        return Err("need 0 < e_min < e_max and at least 2 points".into());
    }
    let physical = PhysicalConfig::default();
    let ratio = (e_max / e_min).ln() / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let e = e_min * (ratio * i as f64).exp();
            barrier_amplitudes(e, height, width, &physical)
                .map(|a| a.transmission_probability())
                .map_err(|err| err.to_string())
        })
        .collect()
}

#[wasm_bindgen(js_name = regime)]
pub fn regime_js(config: &str) -> Result<String, JsError> {
    regime(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(config: &str) -> Result<Reading, JsError> {
    simulate(config).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = transmissionCurve)]
pub fn transmission_curve_js(
    height: f64,
    width: f64,
    e_min: f64,
    e_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    transmission_curve(height, width, e_min, e_max, points).map_err(|e| JsError::new(&e))
}
