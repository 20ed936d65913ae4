//! Time evolution of the joint particle-clock state.
//!
//! The coupling commutes with the clock angular momentum, so every clock
//! channel `n` evolves on its own as a particle hitting a rectangular barrier
//! (or well) of height `nħω`. Each channel is therefore propagated through the
//! whole time interval independently; channels may run on separate workers and
//! the gather is in channel order, so results do not depend on the worker count.

use std::ops::RangeInclusive;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::experiment::{CouplingMode, ExperimentConfig, Placement, DEFAULT_BOUNDARY_FRACTION};
use crate::model::{
    init_clock_hand, init_gaussian, sq_norm, ChannelState, ClockSpec, PhysicalConfig, RegionSpec,
    SpatialGrid,
};
use crate::oracles::{ideal_dwell, IdealDwellDistribution};
use crate::regime::{validate_regime, RegimeReport};

/// Potential step `V_n = nħω` felt by channel `n` inside the region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPotential {
    pub n: i64,
    pub height: f64,
    pub region: RegionSpec,
}

impl ChannelPotential {
    pub fn at(&self, x: f64) -> f64 {
        if self.region.contains(x) {
            self.height
        } else {
            0.0
        }
    }
}

pub fn channel_potential(
    n: i64,
    clock: &ClockSpec,
    region: &RegionSpec,
    hbar: f64,
) -> Result<ChannelPotential> {
    clock.index_of(n)?;
    Ok(ChannelPotential {
        n,
        height: n as f64 * hbar * clock.omega,
        region: *region,
    })
}

/// Exact free flight over a fixed duration: FFT, multiply by
/// `exp(-iħk²Δ/2m)`, inverse FFT.
#[derive(Clone)]
pub struct KineticPropagator {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    // Includes the 1/M normalization of the inverse transform.
    phase: Vec<Complex64>,
}

impl KineticPropagator {
    pub fn new(grid: &SpatialGrid, physical: &PhysicalConfig, duration: f64) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.len());
        let inverse = planner.plan_fft_inverse(grid.len());
        let scale = 1.0 / grid.len() as f64;
        let phase = grid
            .wavenumbers()
            .into_iter()
            .map(|k| {
                let angle = -physical.hbar * k * k * duration / (2.0 * physical.mass);
                Complex64::from_polar(scale, angle)
            })
            .collect();
        Self {
            forward,
            inverse,
            phase,
        }
    }

    pub fn scratch_len(&self) -> usize {
        self.forward
            .get_inplace_scratch_len()
            .max(self.inverse.get_inplace_scratch_len())
    }

    pub fn apply(&self, psi: &mut [Complex64], scratch: &mut [Complex64]) {
        self.forward.process_with_scratch(psi, scratch);
        psi.iter_mut().zip(&self.phase).for_each(|(z, p)| *z *= p);
        self.inverse.process_with_scratch(psi, scratch);
    }
}

/// Grid points where the characteristic function of the region equals one.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMask {
    range: Option<RangeInclusive<usize>>,
}

impl RegionMask {
    pub fn new(grid: &SpatialGrid, region: &RegionSpec) -> Self {
        Self {
            range: grid.region_indices(region),
        }
    }

    pub fn apply(&self, psi: &mut [Complex64], factor: Complex64) {
        if let Some(r) = &self.range {
            psi[r.clone()].iter_mut().for_each(|z| *z *= factor);
        }
    }

    pub fn mass(&self, psi: &[Complex64]) -> f64 {
        self.range.as_ref().map_or(0.0, |r| sq_norm(&psi[r.clone()]))
    }
}

/// `exp(-i n ω Δ)`: the clock phase acquired by channel `n` while coupled for `Δ`.
fn coupling_factor(n: i64, clock: &ClockSpec, duration: f64) -> Complex64 {
    Complex64::from_polar(1.0, -(n as f64) * clock.omega * duration)
}

/// Free evolution of every channel for `dt`.
pub fn kinetic_step(state: &ChannelState, physical: &PhysicalConfig, dt: f64) -> ChannelState {
    let kinetic = KineticPropagator::new(state.grid(), physical, dt);
    let mut out = state.clone();
    map_channels(&mut out, |_, psi| {
        let mut scratch = vec![Complex64::default(); kinetic.scratch_len()];
        kinetic.apply(psi, &mut scratch);
    });
    out
}

/// Applies the clock-particle coupling for a duration: inside the region
/// channel `n` picks up `exp(-i n ω Δ)`, outside nothing changes.
pub fn coupling_phase_step(state: &ChannelState, region: &RegionSpec, duration: f64) -> ChannelState {
    let mask = RegionMask::new(state.grid(), region);
    let clock = *state.clock();
    let mut out = state.clone();
    map_channels(&mut out, |n, psi| mask.apply(psi, coupling_factor(n, &clock, duration)));
    out
}

/// Probability bookkeeping at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub norm: f64,
    pub region_occupancy: f64,
    pub boundary_occupancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub final_state: ChannelState,
    pub snapshots: Vec<Snapshot>,
    pub initial_channel_norms: Vec<f64>,
    pub final_channel_norms: Vec<f64>,
}

impl Trajectory {
    pub fn norm_drift(&self) -> f64 {
        let initial: f64 = self.initial_channel_norms.iter().sum();
        let last: f64 = self.final_channel_norms.iter().sum();
        (last - initial).abs()
    }

    pub fn max_channel_drift(&self) -> f64 {
        self.initial_channel_norms
            .iter()
            .zip(&self.final_channel_norms)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Masses collected for one channel at the snapshot steps.
struct ChannelTrace {
    initial_norm: f64,
    final_norm: f64,
    samples: Vec<(f64, f64, f64)>,
}

struct Probe {
    dx: f64,
    region: RegionMask,
    edge: usize,
}

impl Probe {
    fn new(grid: &SpatialGrid, region: &RegionSpec, boundary_fraction: f64) -> Self {
        let edge = ((grid.len() as f64 * boundary_fraction).round() as usize).max(1);
        Self {
            dx: grid.dx(),
            region: RegionMask::new(grid, region),
            edge,
        }
    }

    fn sample(&self, psi: &[Complex64]) -> (f64, f64, f64) {
        let m = psi.len();
        let boundary = sq_norm(&psi[..self.edge]) + sq_norm(&psi[m - self.edge..]);
        (
            sq_norm(psi) * self.dx,
            self.region.mass(psi) * self.dx,
            boundary * self.dx,
        )
    }
}

/// Step indices (1-based) at which diagnostics are recorded.
fn snapshot_steps(total: usize, count: usize) -> Vec<usize> {
    let count = count.max(1);
    let mut steps: Vec<usize> = (1..=count)
        .map(|k| ((k as f64 * total as f64 / count as f64).round() as usize).clamp(1, total.max(1)))
        .collect();
    steps.dedup();
    steps
}

fn gather(traces: Vec<ChannelTrace>, times: &[f64]) -> (Vec<Snapshot>, Vec<f64>, Vec<f64>) {
    let mut snapshots: Vec<Snapshot> = times
        .iter()
        .map(|&time| Snapshot {
            time,
            norm: 0.0,
            region_occupancy: 0.0,
            boundary_occupancy: 0.0,
        })
        .collect();
    let mut initial = Vec::with_capacity(traces.len());
    let mut last = Vec::with_capacity(traces.len());
    for trace in traces {
        for (snap, (norm, region, boundary)) in snapshots.iter_mut().zip(trace.samples) {
            snap.norm += norm;
            snap.region_occupancy += region;
            snap.boundary_occupancy += boundary;
        }
        initial.push(trace.initial_norm);
        last.push(trace.final_norm);
    }
    (snapshots, initial, last)
}

/// Continuous coupling advanced by symmetric splitting: half coupling, full
/// kinetic step, half coupling. Consecutive half steps are fused.
#[derive(Clone)]
pub struct ContinuousEvolver {
    clock: ClockSpec,
    grid: SpatialGrid,
    kinetic: KineticPropagator,
    region: RegionSpec,
    dt: f64,
    boundary_fraction: f64,
}

impl ContinuousEvolver {
    /// `dt` may be negative to run backwards in time.
    pub fn new(
        clock: &ClockSpec,
        grid: &SpatialGrid,
        physical: &PhysicalConfig,
        region: &RegionSpec,
        dt: f64,
    ) -> Self {
        Self {
            clock: *clock,
            grid: *grid,
            kinetic: KineticPropagator::new(grid, physical, dt),
            region: *region,
            dt,
            boundary_fraction: DEFAULT_BOUNDARY_FRACTION,
        }
    }

    pub fn with_boundary_fraction(mut self, fraction: f64) -> Self {
        self.boundary_fraction = fraction;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn advance_channel(&self, n: i64, psi: &mut [Complex64], steps: usize, record: &[usize], probe: &Probe) -> ChannelTrace {
        let mask = &probe.region;
        let half = coupling_factor(n, &self.clock, 0.5 * self.dt);
        let full = coupling_factor(n, &self.clock, self.dt);
        let mut scratch = vec![Complex64::default(); self.kinetic.scratch_len()];
        let initial_norm = sq_norm(psi) * probe.dx;
        let mut samples = Vec::with_capacity(record.len());
        let mut next = record.iter().peekable();
        if steps > 0 && n != 0 {
            mask.apply(psi, half);
        }
        for step in 1..=steps {
            self.kinetic.apply(psi, &mut scratch);
            if n != 0 {
                mask.apply(psi, if step == steps { half } else { full });
            }
            if next.peek() == Some(&&step) {
                next.next();
                samples.push(probe.sample(psi));
            }
        }
        ChannelTrace {
            initial_norm,
            final_norm: sq_norm(psi) * probe.dx,
            samples,
        }
    }

    /// Advances `state` in place by `steps` substeps, recording `snapshots`
    /// evenly spaced diagnostics.
    pub fn advance(&self, state: &mut ChannelState, steps: usize, snapshots: usize) -> Trajectory {
        let record = snapshot_steps(steps, snapshots);
        let probe = Probe::new(&self.grid, &self.region, self.boundary_fraction);
        let traces = map_channels(state, |n, psi| self.advance_channel(n, psi, steps, &record, &probe));
        let times: Vec<f64> = record.iter().map(|&s| s as f64 * self.dt).collect();
        let (snapshots, initial, last) = gather(traces, &times);
        Trajectory {
            final_state: state.clone(),
            snapshots,
            initial_channel_norms: initial,
            final_channel_norms: last,
        }
    }
}

/// Periodic kicks separated by exact free flights of duration `T`.
#[derive(Clone)]
pub struct KickedEvolver {
    clock: ClockSpec,
    grid: SpatialGrid,
    physical: PhysicalConfig,
    period_flight: KineticPropagator,
    region: RegionSpec,
    period: f64,
    kick_at_zero: bool,
    boundary_fraction: f64,
}

impl KickedEvolver {
    pub fn new(
        clock: &ClockSpec,
        grid: &SpatialGrid,
        physical: &PhysicalConfig,
        region: &RegionSpec,
        period: f64,
    ) -> Self {
        Self {
            clock: *clock,
            grid: *grid,
            physical: *physical,
            period_flight: KineticPropagator::new(grid, physical, period),
            region: *region,
            period,
            kick_at_zero: false,
            boundary_fraction: DEFAULT_BOUNDARY_FRACTION,
        }
    }

    pub fn kick_at_zero(mut self, enabled: bool) -> Self {
        self.kick_at_zero = enabled;
        self
    }

    pub fn with_boundary_fraction(mut self, fraction: f64) -> Self {
        self.boundary_fraction = fraction;
        self
    }

    /// Applies `kicks` periods and a trailing free flight of `remainder`.
    pub fn advance(&self, state: &mut ChannelState, kicks: usize, remainder: f64, snapshots: usize) -> Trajectory {
        let record = snapshot_steps(kicks, snapshots);
        let probe = Probe::new(&self.grid, &self.region, self.boundary_fraction);
        let tail = (remainder > 0.0).then(|| KineticPropagator::new(&self.grid, &self.physical, remainder));
        let traces = map_channels(state, |n, psi| {
            let kick = coupling_factor(n, &self.clock, self.period);
            let mut scratch = vec![Complex64::default(); self.period_flight.scratch_len()];
            let initial_norm = sq_norm(psi) * probe.dx;
            let mut samples = Vec::with_capacity(record.len());
            let mut next = record.iter().peekable();
            for k in 1..=kicks {
                if self.kick_at_zero {
                    probe.region.apply(psi, kick);
                    self.period_flight.apply(psi, &mut scratch);
                } else {
                    self.period_flight.apply(psi, &mut scratch);
                    probe.region.apply(psi, kick);
                }
                if next.peek() == Some(&&k) {
                    next.next();
                    samples.push(probe.sample(psi));
                }
            }
            if let Some(tail) = &tail {
                let mut scratch = vec![Complex64::default(); tail.scratch_len()];
                tail.apply(psi, &mut scratch);
            }
            ChannelTrace {
                initial_norm,
                final_norm: sq_norm(psi) * probe.dx,
                samples,
            }
        });
        let times: Vec<f64> = record.iter().map(|&k| k as f64 * self.period).collect();
        let (mut snapshots, initial, last) = gather(traces, &times);
        if kicks == 0 {
            snapshots.clear();
        }
        Trajectory {
            final_state: state.clone(),
            snapshots,
            initial_channel_norms: initial,
            final_channel_norms: last,
        }
    }
}

/// Gaussian packet times the clock hand at rest.
pub fn initial_state(config: &ExperimentConfig) -> Result<ChannelState> {
    let psi = init_gaussian(&config.packet, &config.physical, &config.grid)?;
    let weights = init_clock_hand(&config.clock);
    Ok(ChannelState::product(config.clock, config.grid, &psi, &weights))
}

fn check_norm(trajectory: &Trajectory, config: &ExperimentConfig) -> Result<()> {
    let drift = trajectory.norm_drift();
    if !(drift <= config.guards.max_norm_drift) {
        return Err(Error::NormDrift {
            drift,
            tolerance: config.guards.max_norm_drift,
        });
    }
    Ok(())
}

fn final_sample(state: &ChannelState, config: &ExperimentConfig) -> Snapshot {
    let probe = Probe::new(&config.grid, &config.region, config.guards.boundary_fraction);
    let (mut norm, mut region, mut boundary) = (0.0, 0.0, 0.0);
    for (_, psi) in state.channels() {
        let (a, b, c) = probe.sample(psi);
        norm += a;
        region += b;
        boundary += c;
    }
    Snapshot {
        time: config.t_final,
        norm,
        region_occupancy: region,
        boundary_occupancy: boundary,
    }
}

fn check_boundary(trajectory: &Trajectory, config: &ExperimentConfig) -> Result<()> {
    let last = final_sample(&trajectory.final_state, config);
    let limit = config.guards.max_boundary_occupancy;
    if !(last.boundary_occupancy <= limit) {
        return Err(Error::BoundaryContamination {
            occupancy: last.boundary_occupancy,
            limit,
        });
    }
    Ok(())
}

fn continuous_trajectory(config: &ExperimentConfig) -> Result<Trajectory> {
    let dt_max = config.continuous_dt();
    let steps = (config.t_final / dt_max).ceil().max(1.0) as usize;
    let dt = config.t_final / steps as f64;
    let mut state = initial_state(config)?;
    let evolver = ContinuousEvolver::new(&config.clock, &config.grid, &config.physical, &config.region, dt)
        .with_boundary_fraction(config.guards.boundary_fraction);
    Ok(evolver.advance(&mut state, steps, config.snapshot_count))
}

fn kicked_trajectory(config: &ExperimentConfig) -> Result<Trajectory> {
    let schedule = config.kick_schedule()?;
    let mut state = initial_state(config)?;
    let evolver = KickedEvolver::new(
        &config.clock,
        &config.grid,
        &config.physical,
        &config.region,
        schedule.period,
    )
    .kick_at_zero(config.kick_at_zero)
    .with_boundary_fraction(config.guards.boundary_fraction);
    Ok(evolver.advance(&mut state, schedule.kick_count(), schedule.remainder(), config.snapshot_count))
}

/// Runs the continuous clock from the initial product state to `t_final`.
pub fn evolve_continuous(config: &ExperimentConfig) -> Result<Trajectory> {
    if config.mode != CouplingMode::Continuous {
        return Err(Error::WrongMode {
            expected: "continuous",
        });
    }
    config.validate()?;
    let trajectory = continuous_trajectory(config)?;
    check_norm(&trajectory, config)?;
    check_boundary(&trajectory, config)?;
    Ok(trajectory)
}

/// Runs the kicked clock: free flight `T`, kick, repeated, then the leftover
/// free flight up to `t_final`.
pub fn evolve_kicked(config: &ExperimentConfig) -> Result<Trajectory> {
    if config.mode != CouplingMode::Kicked {
        return Err(Error::WrongMode { expected: "kicked" });
    }
    config.validate()?;
    let trajectory = kicked_trajectory(config)?;
    check_norm(&trajectory, config)?;
    check_boundary(&trajectory, config)?;
    Ok(trajectory)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub norm_initial: f64,
    pub norm_final: f64,
    pub norm_drift: f64,
    pub max_channel_drift: f64,
    pub region_occupancy: f64,
    pub boundary_occupancy: f64,
    pub wall_clock_seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Propagated(Trajectory),
    Ideal(IdealDwellDistribution),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub config: ExperimentConfig,
    pub regime: RegimeReport,
    pub outcome: Outcome,
    pub diagnostics: Diagnostics,
}

impl RunResult {
    pub fn final_state(&self) -> Option<&ChannelState> {
        match &self.outcome {
            Outcome::Propagated(t) => Some(&t.final_state),
            Outcome::Ideal(_) => None,
        }
    }

    pub fn trajectory(&self) -> Option<&Trajectory> {
        match &self.outcome {
            Outcome::Propagated(t) => Some(t),
            Outcome::Ideal(_) => None,
        }
    }

    /// "dwell time" or "arrival time".
    pub fn measurement(&self) -> &'static str {
        self.config.placement.measurement()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads for the channel loop; `None` uses the global pool.
    pub workers: Option<usize>,
}

/// Uniform reading-time grid `t_i = i·(2π/ω)/Θ`, `i = 0..=Θ`.
pub fn reading_times(clock: &ClockSpec, theta_points: usize) -> Vec<f64> {
    let step = clock.max_time() / theta_points as f64;
    (0..=theta_points).map(|i| i as f64 * step).collect()
}

/// Runs the configured experiment and enforces its guards.
pub fn run_experiment(config: &ExperimentConfig, options: RunOptions) -> Result<RunResult> {
    config.validate()?;
    let regime = validate_regime(config);
    let timer = Stopwatch::start();
    let outcome = match config.mode {
        CouplingMode::IdealReference => {
            let times = reading_times(&config.clock, config.theta_points);
            let ideal = ideal_dwell(
                &config.packet,
                config.flight_distance(),
                &config.physical,
                &times,
                config.guards.negative_momentum_threshold,
            )?;
            Outcome::Ideal(ideal)
        }
        CouplingMode::Continuous => {
            Outcome::Propagated(with_workers(options.workers, || continuous_trajectory(config))??)
        }
        CouplingMode::Kicked => {
            Outcome::Propagated(with_workers(options.workers, || kicked_trajectory(config))??)
        }
    };
    let wall_clock_seconds = timer.elapsed();
    let diagnostics = match &outcome {
        Outcome::Ideal(_) => Diagnostics {
            norm_initial: 1.0,
            norm_final: 1.0,
            norm_drift: 0.0,
            max_channel_drift: 0.0,
            region_occupancy: 0.0,
            boundary_occupancy: 0.0,
            wall_clock_seconds,
        },
        Outcome::Propagated(t) => {
            check_norm(t, config)?;
            let last = final_sample(&t.final_state, config);
            Diagnostics {
                norm_initial: t.initial_channel_norms.iter().sum(),
                norm_final: last.norm,
                norm_drift: t.norm_drift(),
                max_channel_drift: t.max_channel_drift(),
                region_occupancy: last.region_occupancy,
                boundary_occupancy: last.boundary_occupancy,
                wall_clock_seconds,
            }
        }
    };
    if diagnostics.boundary_occupancy > config.guards.max_boundary_occupancy {
        return Err(Error::BoundaryContamination {
            occupancy: diagnostics.boundary_occupancy,
            limit: config.guards.max_boundary_occupancy,
        });
    }
    if diagnostics.region_occupancy > config.guards.max_region_occupancy {
        return Err(Error::CollisionNotFinished {
            occupancy: diagnostics.region_occupancy,
            limit: config.guards.max_region_occupancy,
        });
    }
    Ok(RunResult {
        config: config.clone(),
        regime,
        outcome,
        diagnostics,
    })
}

/// Label attached to results, e.g. "kicked T=1 (dwell time)".
pub fn describe(config: &ExperimentConfig) -> String {
    let what = match config.placement {
        Placement::Outside => "dwell time",
        Placement::Inside => "arrival time",
    };
    format!("{} ({what})", config.label())
}

struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Self {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    fn elapsed(&self) -> Option<f64> {
        #[cfg(not(target_arch = "wasm32"))]
        {
            Some(self.start.elapsed().as_secs_f64())
        }
        #[cfg(target_arch = "wasm32")]
        {
            None
        }
    }
}

/// Runs `f` on a dedicated pool of `workers` threads.
#[cfg(feature = "parallel")]
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<R: Send>(_workers: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    Ok(f())
}

/// Applies `f(n, ψ_n)` to every channel and returns the results in channel order.
#[cfg(feature = "parallel")]
fn map_channels<R, F>(state: &mut ChannelState, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(i64, &mut [Complex64]) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let m = state.grid().len();
    let clock = *state.clock();
    state
        .amplitudes_mut()
        .par_chunks_mut(m)
        .enumerate()
        .map(|(i, psi)| f(clock.label_of(i), psi))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn map_channels<R, F>(state: &mut ChannelState, f: F) -> Vec<R>
where
    F: Fn(i64, &mut [Complex64]) -> R,
{
    let m = state.grid().len();
    let clock = *state.clock();
    state
        .amplitudes_mut()
        .chunks_mut(m)
        .enumerate()
        .map(|(i, psi)| f(clock.label_of(i), psi))
        .collect()
}
