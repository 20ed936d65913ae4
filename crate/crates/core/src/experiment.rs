//! The complete description of one simulated measurement.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::model::{
    build_grid, classical_tof, positive, ClockSpec, KickSchedule, PhysicalConfig, RegionSpec,
    SpatialGrid, WavepacketSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingMode {
    /// Clock runs whenever the particle is inside the region.
    Continuous,
    /// Clock advances by instantaneous kicks of period `T`.
    Kicked,
    /// No clock: the free-motion dwell-time distribution.
    IdealReference,
}

impl CouplingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            CouplingMode::Continuous => "continuous",
            CouplingMode::Kicked => "kicked",
            CouplingMode::IdealReference => "ideal-reference",
        }
    }
}

impl fmt::Display for CouplingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CouplingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "continuous" => Ok(CouplingMode::Continuous),
            "kicked" => Ok(CouplingMode::Kicked),
            "ideal-reference" | "ideal" => Ok(CouplingMode::IdealReference),
            other => Err(format!(
                "unknown mode `{other}` (expected continuous, kicked or ideal-reference)"
            )),
        }
    }
}

/// Where the packet starts relative to the region: outside measures dwell
/// times, inside measures arrival times at the right edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Placement {
    Outside,
    Inside,
}

impl Placement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Placement::Outside => "outside",
            Placement::Inside => "inside",
        }
    }

    pub fn measurement(&self) -> &'static str {
        match self {
            Placement::Outside => "dwell time",
            Placement::Inside => "arrival time",
        }
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Placement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "outside" | "dwell" => Ok(Placement::Outside),
            "inside" | "arrival" => Ok(Placement::Inside),
            other => Err(format!("unknown placement `{other}` (expected outside or inside)")),
        }
    }
}

pub const DEFAULT_BOUNDARY_FRACTION: f64 = 0.05;

/// Run-time health checks applied to every propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guards {
    pub max_norm_drift: f64,
    /// Probability still inside the region at `t_final`.
    pub max_region_occupancy: f64,
    /// Probability in the outer `boundary_fraction` of the grid on each side.
    pub max_boundary_occupancy: f64,
    pub boundary_fraction: f64,
    pub negative_momentum_threshold: f64,
}

impl Default for Guards {
    fn default() -> Self {
        Self {
            max_norm_drift: 1e-8,
            max_region_occupancy: 1e-4,
            max_boundary_occupancy: 1e-3,
            boundary_fraction: DEFAULT_BOUNDARY_FRACTION,
            negative_momentum_threshold: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub physical: PhysicalConfig,
    pub region: RegionSpec,
    pub clock: ClockSpec,
    pub packet: WavepacketSpec,
    pub grid: SpatialGrid,
    pub mode: CouplingMode,
    pub placement: Placement,
    pub t_final: f64,
    /// Strang substep of the continuous clock.
    pub dt: Option<f64>,
    /// Kick period `T`.
    pub kick_period: Option<f64>,
    /// Kick at `t = 0, T, …` instead of `T, 2T, …`.
    pub kick_at_zero: bool,
    pub snapshot_count: usize,
    pub theta_points: usize,
    /// Factor that turns the `E ≫ X` conditions into `E ≥ factor·X`.
    pub dominance_factor: f64,
    pub guards: Guards,
}

impl ExperimentConfig {
    /// Placement implied by the packet center.
    pub fn infer_placement(region: &RegionSpec, packet: &WavepacketSpec) -> Placement {
        if region.contains(packet.x0) {
            Placement::Inside
        } else {
            Placement::Outside
        }
    }

    /// Distance whose classical traversal time the clock should read.
    pub fn flight_distance(&self) -> f64 {
        match self.placement {
            Placement::Outside => self.region.width(),
            Placement::Inside => self.region.x_right - self.packet.x0,
        }
    }

    /// Classical time of flight at the mean momentum, if the packet moves right.
    pub fn classical_tof(&self) -> Option<f64> {
        classical_tof(self.flight_distance(), self.packet.p0, self.physical.mass).ok()
    }

    /// `min(τ, t_f)/200`, falling back to `τ/200` when `t_f` is undefined.
    pub fn default_dt(&self) -> f64 {
        let tau = self.clock.resolution();
        let scale = self.classical_tof().map_or(tau, |tf| tau.min(tf));
        scale / 200.0
    }

    pub fn continuous_dt(&self) -> f64 {
        self.dt.unwrap_or_else(|| self.default_dt())
    }

    pub fn kick_schedule(&self) -> Result<KickSchedule> {
        let period = self
            .kick_period
            .ok_or_else(|| Error::Config("kicked mode needs a kick period".into()))?;
        KickSchedule::new(period, self.t_final)
    }

    pub fn label(&self) -> String {
        match (self.mode, self.kick_period) {
            (CouplingMode::Kicked, Some(t)) => format!("kicked T={t}"),
            (mode, _) => mode.to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.physical.validate()?;
        self.region.validate()?;
        self.clock.validate()?;
        self.packet.validate()?;
        build_grid(self.grid.x_min, self.grid.x_max, self.grid.num_points)?;
        if self.region.x_left < self.grid.x_min || self.region.x_right > self.grid.x_max {
            return Err(invalid("region", "region must lie inside the spatial grid"));
        }
        positive("t_final", self.t_final)?;
        match self.mode {
            CouplingMode::Continuous => positive("dt", self.continuous_dt())?,
            CouplingMode::Kicked => {
                self.kick_schedule()?;
            }
            CouplingMode::IdealReference => {}
        }
        if let Some(dt) = self.dt {
            positive("dt", dt)?;
        }
        match self.placement {
            Placement::Outside => {
                if self.region.contains(self.packet.x0) {
                    return Err(invalid("x0", "outside placement needs x0 outside the region"));
                }
                if self.packet.p0 > 0.0 && self.packet.x0 > self.region.x_right {
                    return Err(invalid(
                        "x0",
                        "outside placement with p0 > 0 needs x0 < x_left",
                    ));
                }
            }
            Placement::Inside => {
                if !self.region.contains(self.packet.x0) {
                    return Err(invalid("x0", "inside placement needs x0 within the region"));
                }
            }
        }
        let required = 2 * self.clock.n_channels();
        if self.theta_points < required {
            return Err(Error::UndersampledTheta {
                points: self.theta_points,
                channels: self.clock.n_channels(),
                required,
            });
        }
        positive("dominance_factor", self.dominance_factor)?;
        positive("max_norm_drift", self.guards.max_norm_drift)?;
        positive("max_region_occupancy", self.guards.max_region_occupancy)?;
        positive("max_boundary_occupancy", self.guards.max_boundary_occupancy)?;
        positive("negative_momentum_threshold", self.guards.negative_momentum_threshold)?;
        if !(self.guards.boundary_fraction > 0.0 && self.guards.boundary_fraction < 0.5) {
            return Err(invalid("boundary_fraction", "must lie in (0, 0.5)"));
        }
        Ok(())
    }
}
