//! Validity conditions of the continuous and kicked clocks.
//!
//! The report is purely informational: a clock run outside its working
//! regime is still a legitimate (and often the interesting) experiment.

use std::f64::consts::PI;
use std::fmt::Write;

use crate::experiment::{CouplingMode, ExperimentConfig};
use crate::model::modular_phase;

#[derive(Debug, Clone, PartialEq)]
pub struct KickRegime {
    pub period: f64,
    /// `ħωj > 2πħ/T`: the kick phases wrap around the Floquet zone.
    pub exceeds_lower_bound: bool,
    /// `max_n ħν_n/T` over `n ∈ [-j, j]`.
    pub max_modular_energy: f64,
    /// `E ≥ factor · max_n ħν_n/T`.
    pub small_disturbance: bool,
    /// `lower < T < t_f`; `None` when either bound is undefined.
    pub inside_window: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub energy: f64,
    pub resolution: f64,
    /// `πħ/τ`.
    pub continuous_bound: f64,
    pub continuous_ratio: f64,
    pub dominance_factor: f64,
    /// `E ≥ factor · πħ/τ`.
    pub continuous_ok: bool,
    /// Classical time of flight over the measured distance.
    pub flight_time: Option<f64>,
    /// `(2j+1)τ/j = 2π/(jω)`; undefined for `j = 0`.
    pub window_lower: Option<f64>,
    pub max_time: f64,
    pub max_time_ok: Option<bool>,
    pub degenerate_clock: bool,
    pub kicked: Option<KickRegime>,
}

pub fn validate_regime(config: &ExperimentConfig) -> RegimeReport {
    let hbar = config.physical.hbar;
    let clock = &config.clock;
    let energy = config.packet.p0 * config.packet.p0 / (2.0 * config.physical.mass);
    let resolution = clock.resolution();
    let continuous_bound = PI * hbar / resolution;
    let factor = config.dominance_factor;
    let flight_time = config.classical_tof();
    let max_time = clock.max_time();
    let degenerate_clock = clock.j == 0;
    let window_lower = (!degenerate_clock).then(|| 2.0 * PI / (clock.j as f64 * clock.omega));

    let kicked = match (config.mode, config.kick_period) {
        (CouplingMode::Kicked, Some(period)) if period > 0.0 => {
            let max_modular_energy = clock
                .channels()
                .map(|n| modular_phase(n, clock, period, hbar).energy)
                .fold(0.0, f64::max);
            let inside_window = match (window_lower, flight_time) {
                (Some(lo), Some(hi)) => Some(lo < period && period < hi),
                _ => None,
            };
            Some(KickRegime {
                period,
                exceeds_lower_bound: hbar * clock.omega * clock.j as f64 > 2.0 * PI * hbar / period,
                max_modular_energy,
                small_disturbance: energy >= factor * max_modular_energy,
                inside_window,
            })
        }
        _ => None,
    };

    RegimeReport {
        energy,
        resolution,
        continuous_bound,
        continuous_ratio: energy / continuous_bound,
        dominance_factor: factor,
        continuous_ok: energy >= factor * continuous_bound,
        flight_time,
        window_lower,
        max_time,
        max_time_ok: flight_time.map(|tf| tf < max_time),
        degenerate_clock,
        kicked,
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn opt(value: Option<f64>) -> String {
    value.map_or_else(|| "undefined".to_string(), |v| v.to_string())
}

impl RegimeReport {
    /// Warnings worth surfacing for the configured mode.
    pub fn warnings(&self, mode: CouplingMode) -> Vec<String> {
        let mut out = Vec::new();
        if self.degenerate_clock {
            out.push("clock is degenerate (j = 0): the hand carries no time information".into());
        }
        if mode == CouplingMode::Continuous && !self.continuous_ok {
            out.push(format!(
                "continuous clock disturbs the particle: E = {} < {} x pi*hbar/tau = {}",
                self.energy,
                self.dominance_factor,
                self.dominance_factor * self.continuous_bound
            ));
        }
        if let Some(k) = &self.kicked {
            if k.inside_window == Some(false) {
                out.push(format!(
                    "kick period T = {} outside the working window ({}, {})",
                    k.period,
                    opt(self.window_lower),
                    opt(self.flight_time)
                ));
            }
        }
        if self.max_time_ok == Some(false) {
            out.push("flight time exceeds one clock revolution; readings wrap around".into());
        }
        out
    }

    /// Key-value rendering shared by `validate` and `regime.txt`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "energy = {}", self.energy);
        let _ = writeln!(s, "resolution_tau = {}", self.resolution);
        let _ = writeln!(s, "continuous_bound_pi_hbar_over_tau = {}", self.continuous_bound);
        let _ = writeln!(s, "energy_over_continuous_bound = {}", self.continuous_ratio);
        let _ = writeln!(s, "dominance_factor = {}", self.dominance_factor);
        let _ = writeln!(s, "flight_time = {}", opt(self.flight_time));
        let _ = writeln!(s, "max_time_2pi_over_omega = {}", self.max_time);
        let _ = writeln!(s, "kick_window_lower = {}", opt(self.window_lower));
        let _ = writeln!(s, "kick_window_upper = {}", opt(self.flight_time));
        if let Some(k) = &self.kicked {
            let _ = writeln!(s, "kick_period = {}", k.period);
            let _ = writeln!(s, "max_modular_energy = {}", k.max_modular_energy);
        }
        let _ = writeln!(s, "degenerate_clock = {}", self.degenerate_clock);
        let _ = writeln!(
            s,
            "verdict.continuous_small_disturbance = {}",
            verdict(self.continuous_ok)
        );
        match &self.kicked {
            Some(k) => {
                let _ = writeln!(
                    s,
                    "verdict.kick_period_above_lower_bound = {}",
                    verdict(k.exceeds_lower_bound)
                );
                let _ = writeln!(
                    s,
                    "verdict.kicked_small_disturbance = {}",
                    verdict(k.small_disturbance)
                );
                let _ = writeln!(
                    s,
                    "verdict.kick_window = {}",
                    k.inside_window.map_or("UNDEFINED", verdict)
                );
            }
            None => {
                let _ = writeln!(s, "verdict.kick_period_above_lower_bound = N/A");
                let _ = writeln!(s, "verdict.kicked_small_disturbance = N/A");
                let _ = writeln!(s, "verdict.kick_window = N/A");
            }
        }
        let _ = writeln!(
            s,
            "verdict.max_time = {}",
            self.max_time_ok.map_or("UNDEFINED", verdict)
        );
        s
    }
}
