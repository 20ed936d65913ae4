//! Independent references: closed-form free Gaussian motion, stationary
//! rectangular-barrier scattering, the high-energy phase-shift estimate, the
//! free-motion dwell-time distribution, and a brute-force evolver on the full
//! `(x, θ)` grid that cross-checks the channel representation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::experiment::{CouplingMode, ExperimentConfig};
use crate::model::{init_clock_hand, init_gaussian, PhysicalConfig, SpatialGrid, WavepacketSpec};

/// Analytic free evolution of the minimum-uncertainty packet built by
/// [`init_gaussian`](crate::model::init_gaussian), ignoring periodic images.
pub fn free_gaussian(
    spec: &WavepacketSpec,
    physical: &PhysicalConfig,
    grid: &SpatialGrid,
    t: f64,
) -> Vec<Complex64> {
    let (m, hbar) = (physical.mass, physical.hbar);
    let s0 = spec.sigma * spec.sigma;
    let st = Complex64::new(s0, hbar * t / (2.0 * m));
    let amplitude = (2.0 * PI * s0).powf(-0.25) * (Complex64::from(s0) / st).sqrt();
    let center = spec.x0 + spec.p0 * t / m;
    let energy_phase = spec.p0 * spec.p0 * t / (2.0 * m * hbar);
    grid.positions()
        .into_iter()
        .map(|x| {
            let u = x - center;
            let gauss = (-(u * u) / (4.0 * st)).exp();
            amplitude * gauss * Complex64::from_polar(1.0, spec.p0 * x / hbar - energy_phase)
        })
        .collect()
}

/// Position variance `σ²(1 + (ħt/2mσ²)²)` of the freely spreading packet.
pub fn free_gaussian_variance(spec: &WavepacketSpec, physical: &PhysicalConfig, t: f64) -> f64 {
    let s0 = spec.sigma * spec.sigma;
    let r = physical.hbar * t / (2.0 * physical.mass * s0);
    s0 * (1.0 + r * r)
}

/// Stationary scattering off a rectangular barrier (`V > 0`) or well (`V < 0`)
/// occupying `[0, d]`, for a wave `e^{ikx}` incident from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    pub energy: f64,
    pub k: f64,
    /// Interior wavenumber; purely imaginary below the barrier top.
    pub k_inside: Complex64,
    pub transmission: Complex64,
    pub reflection: Complex64,
    /// `(k' - k)d`, complex in the evanescent regime.
    pub phase_shift: Complex64,
}

impl ScatteringAmplitudes {
    pub fn transmission_probability(&self) -> f64 {
        self.transmission.norm_sqr()
    }

    pub fn reflection_probability(&self) -> f64 {
        self.reflection.norm_sqr()
    }
}

/// `sin(qd)/q`, continued to `d` at `q = 0`.
fn sinc_len(q: Complex64, d: f64) -> Complex64 {
    let z = q * d;
    if z.norm() < 1e-6 {
        d * (1.0 - z * z / 6.0 + z * z * z * z / 120.0)
    } else {
        (q * d).sin() / q
    }
}

pub fn barrier_amplitudes(
    energy: f64,
    height: f64,
    width: f64,
    physical: &PhysicalConfig,
) -> Result<ScatteringAmplitudes> {
    if !(energy > 0.0) {
        return Err(invalid("energy", "scattering energy must be > 0"));
    }
    let (m, hbar) = (physical.mass, physical.hbar);
    let k = (2.0 * m * energy).sqrt() / hbar;
    let q = if energy == height {
        Complex64::default()
    } else {
        Complex64::from(2.0 * m * (energy - height)).sqrt() / hbar
    };
    let s = sinc_len(q, width);
    let q2 = q * q;
    let k2 = Complex64::from(k * k);
    let i = Complex64::i();
    let denom = (q * width).cos() - i * (k2 + q2) / (2.0 * k) * s;
    let transmission = Complex64::from_polar(1.0, -k * width) / denom;
    let reflection = i * (q2 - k2) / (2.0 * k) * s / denom;
    Ok(ScatteringAmplitudes {
        energy,
        k,
        k_inside: q,
        transmission,
        reflection,
        phase_shift: (q - k) * width,
    })
}

/// Relative error beyond which the linearized phase shift is considered broken.
pub const PHASE_SHIFT_BREAKDOWN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    /// `(k' - k)d`; `None` when `E ≤ V_n` (evanescent interior).
    pub exact: Option<f64>,
    /// `-nω t_f(E)`.
    pub approx: f64,
    pub relative_error: Option<f64>,
    /// Set when `E ≤ |V_n|` or the linearization misses by more than
    /// [`PHASE_SHIFT_BREAKDOWN`].
    pub breakdown: bool,
}

/// Phase picked up by channel `n` crossing the region, exact versus the
/// small-disturbance estimate `-nω·t_f`.
pub fn phase_shift_approx(
    n: i64,
    omega: f64,
    energy: f64,
    width: f64,
    physical: &PhysicalConfig,
) -> Result<PhaseShift> {
    if !(energy > 0.0) {
        return Err(invalid("energy", "phase shift needs E > 0"));
    }
    let (m, hbar) = (physical.mass, physical.hbar);
    let height = n as f64 * hbar * omega;
    let k = (2.0 * m * energy).sqrt() / hbar;
    let flight = width / (2.0 * energy / m).sqrt();
    let approx = -(n as f64) * omega * flight;
    let exact = (energy > height).then(|| ((2.0 * m * (energy - height)).sqrt() / hbar - k) * width);
    let relative_error = exact.map(|e| {
        if e == 0.0 {
            approx.abs()
        } else {
            ((e - approx) / e).abs()
        }
    });
    let breakdown = energy <= height.abs() || relative_error.is_none_or(|r| r > PHASE_SHIFT_BREAKDOWN);
    Ok(PhaseShift {
        exact,
        approx,
        relative_error,
        breakdown,
    })
}

/// Free-motion dwell-time density `P_d(t) = (m d/t²) P(m d/t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealDwellDistribution {
    pub times: Vec<f64>,
    pub density: Vec<f64>,
}

impl IdealDwellDistribution {
    pub fn mass(&self) -> f64 {
        trapezoid(&self.times, &self.density)
    }

    pub fn mean(&self) -> f64 {
        let first: Vec<f64> = self.times.iter().zip(&self.density).map(|(t, p)| t * p).collect();
        trapezoid(&self.times, &first) / self.mass()
    }
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Push-forward of the packet's analytic momentum density under `p ↦ m d/p`.
/// `distance` is the region width for dwell times, or the distance to the
/// right edge for arrival times.
pub fn ideal_dwell(
    spec: &WavepacketSpec,
    distance: f64,
    physical: &PhysicalConfig,
    times: &[f64],
    negative_threshold: f64,
) -> Result<IdealDwellDistribution> {
    spec.validate()?;
    let weight = spec.negative_momentum_weight(physical.hbar);
    if !(weight <= negative_threshold) {
        return Err(Error::NegativeMomentum {
            weight,
            threshold: negative_threshold,
        });
    }
    let md = physical.mass * distance;
    let density = times
        .iter()
        .map(|&t| {
            if t <= 0.0 {
                0.0
            } else {
                md / (t * t) * spec.momentum_density(md / t, physical.hbar)
            }
        })
        .collect();
    Ok(IdealDwellDistribution {
        times: times.to_vec(),
        density,
    })
}

/// Final state of the brute-force `(x, θ)` evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGridResult {
    pub theta: Vec<f64>,
    /// `|Φ(x_i, θ_l)|²`, one row of `num_points` values per angle.
    pub density: Vec<f64>,
    /// `∫|Φ(x, θ_l)|² dx`.
    pub theta_marginal: Vec<f64>,
}

pub const THETA_GRID_MAX_POINTS: usize = 1 << 10;
pub const THETA_GRID_MAX_ANGLES: usize = 1 << 8;

/// Propagates the joint wavefunction on an explicit `(x, θ)` tensor grid with
/// the same splitting as the channel engine. The clock coupling
/// `exp(-Δω χ_d ∂_θ)` is applied as a rigid rotation of the angular profile at
/// each in-region point, through a DFT along `θ`.
pub fn evolve_theta_grid(config: &ExperimentConfig, theta_points: usize) -> Result<ThetaGridResult> {
    let m_pts = config.grid.len();
    let n_ch = config.clock.n_channels();
    if m_pts > THETA_GRID_MAX_POINTS || theta_points > THETA_GRID_MAX_ANGLES || n_ch > theta_points {
        return Err(Error::GuardExceeded(format!(
            "{m_pts} x-points, {theta_points} angles, {n_ch} channels"
        )));
    }
    let psi = init_gaussian(&config.packet, &config.physical, &config.grid)?;
    let weights = init_clock_hand(&config.clock);
    let theta: Vec<f64> = (0..theta_points)
        .map(|l| 2.0 * PI * l as f64 / theta_points as f64)
        .collect();
    let hand: Vec<Complex64> = theta
        .iter()
        .map(|&th| {
            config
                .clock
                .channels()
                .zip(&weights)
                .map(|(n, &c)| Complex64::from_polar(c, n as f64 * th))
                .sum::<Complex64>()
                / (2.0 * PI).sqrt()
        })
        .collect();
    // Row l holds Φ(·, θ_l).
    let mut field: Vec<Complex64> = hand
        .iter()
        .flat_map(|&h| psi.iter().map(move |&z| z * h))
        .collect();

    let mut tensor = TensorGrid::new(config, theta_points);
    match config.mode {
        CouplingMode::Continuous => {
            let steps = (config.t_final / config.continuous_dt()).ceil().max(1.0) as usize;
            let dt = config.t_final / steps as f64;
            let kinetic = tensor.kinetic_phase(dt);
            for _ in 0..steps {
                tensor.rotate(&mut field, 0.5 * dt);
                tensor.free(&mut field, &kinetic);
                tensor.rotate(&mut field, 0.5 * dt);
            }
        }
        CouplingMode::Kicked => {
            let schedule = config.kick_schedule()?;
            let period = tensor.kinetic_phase(schedule.period);
            for _ in 0..schedule.kick_count() {
                if config.kick_at_zero {
                    tensor.rotate(&mut field, schedule.period);
                    tensor.free(&mut field, &period);
                } else {
                    tensor.free(&mut field, &period);
                    tensor.rotate(&mut field, schedule.period);
                }
            }
            if schedule.remainder() > 0.0 {
                let tail = tensor.kinetic_phase(schedule.remainder());
                tensor.free(&mut field, &tail);
            }
        }
        CouplingMode::IdealReference => {
            return Err(Error::WrongMode {
                expected: "continuous or kicked",
            })
        }
    }

    let dx = config.grid.dx();
    let density: Vec<f64> = field.iter().map(|z| z.norm_sqr()).collect();
    let theta_marginal = density.chunks_exact(m_pts).map(|row| row.iter().sum::<f64>() * dx).collect();
    Ok(ThetaGridResult {
        theta,
        density,
        theta_marginal,
    })
}

struct TensorGrid {
    planner: FftPlanner<f64>,
    m_pts: usize,
    theta_points: usize,
    wavenumbers: Vec<f64>,
    physical: PhysicalConfig,
    omega: f64,
    inside: Vec<usize>,
}

impl TensorGrid {
    fn new(config: &ExperimentConfig, theta_points: usize) -> Self {
        let grid = &config.grid;
        Self {
            planner: FftPlanner::new(),
            m_pts: grid.len(),
            theta_points,
            wavenumbers: grid.wavenumbers(),
            physical: config.physical,
            omega: config.clock.omega,
            inside: (0..grid.len()).filter(|&i| config.region.contains(grid.x(i))).collect(),
        }
    }

    fn kinetic_phase(&self, duration: f64) -> Vec<Complex64> {
        let (m, hbar) = (self.physical.mass, self.physical.hbar);
        self.wavenumbers
            .iter()
            .map(|k| Complex64::from_polar(1.0, -hbar * k * k * duration / (2.0 * m)))
            .collect()
    }

    fn free(&mut self, field: &mut [Complex64], phase: &[Complex64]) {
        let fwd = self.planner.plan_fft_forward(self.m_pts);
        let inv = self.planner.plan_fft_inverse(self.m_pts);
        let scale = 1.0 / self.m_pts as f64;
        for row in field.chunks_exact_mut(self.m_pts) {
            fwd.process(row);
            row.iter_mut().zip(phase).for_each(|(z, p)| *z *= p * scale);
            inv.process(row);
        }
    }

    fn rotate(&mut self, field: &mut [Complex64], duration: f64) {
        let n = self.theta_points;
        let fwd = self.planner.plan_fft_forward(n);
        let inv = self.planner.plan_fft_inverse(n);
        let factors: Vec<Complex64> = (0..n)
            .map(|l| {
                let mode = if l < n / 2 { l as f64 } else { l as f64 - n as f64 };
                Complex64::from_polar(1.0 / n as f64, -mode * self.omega * duration)
            })
            .collect();
        let mut column = vec![Complex64::default(); n];
        for &i in &self.inside {
            for (l, c) in column.iter_mut().enumerate() {
                *c = field[l * self.m_pts + i];
            }
            fwd.process(&mut column);
            column.iter_mut().zip(&factors).for_each(|(z, f)| *z *= f);
            inv.process(&mut column);
            for (l, c) in column.iter().enumerate() {
                field[l * self.m_pts + i] = *c;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_grid, ClockSpec, RegionSpec};
    use crate::presets::fig1_base;
    use proptest::prelude::*;

    const UNIT: PhysicalConfig = PhysicalConfig { mass: 1.0, hbar: 1.0 };
    const FIG1_PACKET: WavepacketSpec = WavepacketSpec { sigma: 1.0, x0: -30.0, p0: 5.0 };

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
        (f(a) + f(b) + inner) * h / 3.0
    }

    #[test]
    fn free_gaussian_at_zero_is_initial_packet() {
        let grid = build_grid(-100.0, 100.0, 1 << 13).unwrap();
        let a = init_gaussian(&FIG1_PACKET, &UNIT, &grid).unwrap();
        let b = free_gaussian(&FIG1_PACKET, &UNIT, &grid, 0.0);
        let d = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(d < 1e-12, "{d}");
    }

    #[test]
    fn spreading() {
        let spec = WavepacketSpec { sigma: 1.0, x0: 0.0, p0: 0.0 };
        assert!((free_gaussian_variance(&spec, &UNIT, 2.0) - 2.0).abs() < 1e-15);
        assert!((free_gaussian_variance(&FIG1_PACKET, &UNIT, 10.0) - 26.0).abs() < 1e-12);

        let grid = build_grid(-100.0, 150.0, 1 << 13).unwrap();
        let psi = free_gaussian(&FIG1_PACKET, &UNIT, &grid, 10.0);
        let p: Vec<f64> = psi.iter().map(|z| z.norm_sqr() * grid.dx()).collect();
        let mass: f64 = p.iter().sum();
        let mean: f64 = grid.positions().iter().zip(&p).map(|(x, w)| x * w).sum();
        let var: f64 = grid.positions().iter().zip(&p).map(|(x, w)| (x - mean).powi(2) * w).sum();
        assert!((mass - 1.0).abs() < 1e-10);
        assert!((mean - 20.0).abs() < 1e-8);
        assert!((var - 26.0).abs() < 1e-8);
    }

    #[test]
    fn no_barrier_transmits_fully() {
        let s = barrier_amplitudes(3.0, 0.0, 2.0, &UNIT).unwrap();
        assert!((s.transmission - Complex64::from(1.0)).norm() < 1e-14);
        assert!(s.reflection.norm() < 1e-14);
    }

    #[test]
    fn high_energy_limit() {
        let (v, d) = (0.5, 4.0);
        let s = barrier_amplitudes(1e4, v, d, &UNIT).unwrap();
        assert!(s.transmission_probability() > 1.0 - 1e-8);
        let linear = -v * d * (1.0f64 / 2e4).sqrt();
        assert!((s.phase_shift.re - linear).abs() < 1e-3 * linear.abs());
    }

    #[test]
    fn default_clock_top_barrier_reflects() {
        let clock = ClockSpec::new(2.0 * PI / 25.0, 50).unwrap();
        let s = barrier_amplitudes(12.5, 50.0 * clock.omega, 50.0, &UNIT).unwrap();
        assert!(s.transmission_probability() < 0.9);
        assert!(s.k_inside.re.abs() < 1e-12 && s.k_inside.im > 0.0);
    }

    #[test]
    fn top_of_barrier_is_continuous() {
        let at = barrier_amplitudes(2.0, 2.0, 1.5, &UNIT).unwrap();
        for e in [2.0 * (1.0 + 1e-10), 2.0 * (1.0 - 1e-10)] {
            let near = barrier_amplitudes(e, 2.0, 1.5, &UNIT).unwrap();
            assert!((near.transmission - at.transmission).norm() < 1e-8);
            assert!((near.reflection - at.reflection).norm() < 1e-8);
        }
        assert!((at.transmission_probability() + at.reflection_probability() - 1.0).abs() < 1e-12);
        assert!(barrier_amplitudes(0.0, 1.0, 1.0, &UNIT).is_err());
    }

    proptest! {
        #[test]
        fn stationary_unitarity(e in 0.01f64..200.0, v in -50.0f64..50.0, d in 0.1f64..20.0) {
            let s = barrier_amplitudes(e, v, d, &UNIT).unwrap();
            prop_assert!((s.transmission_probability() + s.reflection_probability() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_shift_examples() {
        let omega = 2.0 * PI / 25.0;
        let zero = phase_shift_approx(0, omega, 12.5, 50.0, &UNIT).unwrap();
        assert_eq!((zero.exact, zero.approx), (Some(0.0), 0.0));
        assert!(!zero.breakdown);

        for n in [-5, 3, 50] {
            let v = (n as f64 * omega).abs();
            let p = phase_shift_approx(n, omega, 100.0 * v, 50.0, &UNIT).unwrap();
            assert!(p.relative_error.unwrap() < 0.01, "{n}: {p:?}");
            assert!(!p.breakdown);
        }

        let v = 10.0 * omega;
        let p = phase_shift_approx(10, omega, 1.05 * v, 50.0, &UNIT).unwrap();
        assert!(p.relative_error.unwrap() > 3.0 * PHASE_SHIFT_BREAKDOWN);
        assert!(p.breakdown);
        let p = phase_shift_approx(10, omega, 0.9 * v, 50.0, &UNIT).unwrap();
        assert_eq!(p.exact, None);
        assert!(p.breakdown);
    }

    fn fig1_times() -> Vec<f64> {
        (0..=4096).map(|i| 25.0 * i as f64 / 4096.0).collect()
    }

    #[test]
    fn ideal_dwell_normalized_with_independent_mean() {
        let ideal = ideal_dwell(&FIG1_PACKET, 50.0, &UNIT, &fig1_times(), 1e-6).unwrap();
        assert!((ideal.mass() - 1.0).abs() < 1e-6);
        let dp = FIG1_PACKET.momentum_std(1.0);
        let gauss = |p: f64| (-(p - 5.0).powi(2) / (2.0 * dp * dp)).exp() / (dp * (2.0 * PI).sqrt());
        let mean = simpson(|p| 50.0 / p * gauss(p), 5.0 - 8.0 * dp, 5.0 + 12.0 * dp, 20_000);
        assert!((ideal.mean() - mean).abs() < 1e-6, "{} vs {mean}", ideal.mean());
    }

    #[test]
    fn ideal_dwell_sharpens_at_classical_time() {
        let times = fig1_times();
        let wide = WavepacketSpec { sigma: 200.0, ..FIG1_PACKET };
        let ideal = ideal_dwell(&wide, 50.0, &UNIT, &times, 1e-6).unwrap();
        let peak = ideal.density.iter().enumerate().fold((0, 0.0), |a, (i, &p)| if p > a.1 { (i, p) } else { a }).0;
        assert!((times[peak] - 10.0).abs() < 0.01);
        let near: Vec<f64> = times.iter().zip(&ideal.density).map(|(t, p)| if (t - 10.0).abs() < 0.1 { *p } else { 0.0 }).collect();
        assert!(trapezoid(&times, &near) > 0.99);
    }

    #[test]
    fn ideal_dwell_rejects_backward_packets() {
        let slow = WavepacketSpec { sigma: 1.0, x0: -30.0, p0: 0.5 };
        assert!(matches!(
            ideal_dwell(&slow, 50.0, &UNIT, &fig1_times(), 1e-6),
            Err(Error::NegativeMomentum { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn ideal_dwell_is_push_forward(a in -2.0f64..2.0, b in 0.1f64..3.0, c in -1.0f64..1.0) {
            let f = |t: f64| (a * t).sin() + c * (-b * t).exp();
            let times: Vec<f64> = (0..=20_000).map(|i| 25.0 * i as f64 / 20_000.0).collect();
            let ideal = ideal_dwell(&FIG1_PACKET, 50.0, &UNIT, &times, 1e-6).unwrap();
            let weighted: Vec<f64> = times.iter().zip(&ideal.density).map(|(t, p)| f(*t) * p).collect();
            let lhs = trapezoid(&times, &weighted);
            let dp = FIG1_PACKET.momentum_std(1.0);
            let rhs = simpson(
                |p| f(50.0 / p) * FIG1_PACKET.momentum_density(p, 1.0),
                5.0 - 8.0 * dp,
                5.0 + 12.0 * dp,
                20_000,
            );
            prop_assert!((lhs - rhs).abs() < 1e-6, "{lhs} vs {rhs}");
        }
    }

    fn small_theta_config(j: u32) -> ExperimentConfig {
        let mut cfg = fig1_base(CouplingMode::Continuous);
        cfg.grid = build_grid(-50.0, 50.0, 1 << 9).unwrap();
        cfg.region = RegionSpec::new(-5.0, 5.0).unwrap();
        cfg.packet = WavepacketSpec { sigma: 1.0, x0: -15.0, p0: 3.0 };
        cfg.clock = ClockSpec::new(2.0 * PI / 10.0, j).unwrap();
        cfg.t_final = 2.0;
        cfg.dt = Some(0.01);
        cfg.theta_points = 64;
        cfg
    }

    #[test]
    fn theta_grid_single_mode_is_free_motion() {
        let cfg = small_theta_config(0);
        let out = evolve_theta_grid(&cfg, 16).unwrap();
        let free = free_gaussian(&cfg.packet, &cfg.physical, &cfg.grid, cfg.t_final);
        let m = cfg.grid.len();
        for row in out.density.chunks_exact(m) {
            for (p, z) in row.iter().zip(&free) {
                assert!((p - z.norm_sqr() / (2.0 * PI)).abs() < 1e-10);
            }
        }
        assert!(out.theta_marginal.iter().all(|p| (p - 1.0 / (2.0 * PI)).abs() < 1e-10));
    }

    #[test]
    fn theta_grid_starts_from_hand() {
        let mut cfg = small_theta_config(3);
        cfg.t_final = 0.01;
        let out = evolve_theta_grid(&cfg, 32).unwrap();
        for (th, p) in out.theta.iter().zip(&out.theta_marginal) {
            assert!((p - crate::model::hand_density(&cfg.clock, *th)).abs() < 1e-10);
        }
    }

    #[test]
    fn theta_grid_guards() {
        let mut cfg = small_theta_config(3);
        assert!(matches!(evolve_theta_grid(&cfg, 512), Err(Error::GuardExceeded(_))));
        assert!(matches!(evolve_theta_grid(&cfg, 4), Err(Error::GuardExceeded(_))));
        cfg.grid = build_grid(-50.0, 50.0, 1 << 11).unwrap();
        assert!(matches!(evolve_theta_grid(&cfg, 32), Err(Error::GuardExceeded(_))));
    }
}
