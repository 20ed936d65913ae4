//! Physical parameter records, the spatial grid, clock kinematics and the
//! initial particle-clock product state.
//!
//! All lengths, times and momenta are in atomic units. The clock is described
//! in its angular-momentum basis `u_n(θ) = e^{inθ}/√(2π)`, `n ∈ [-j, j]`; a
//! joint state is stored as one spatial amplitude per clock channel.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

/// Particle mass and the reduced Planck constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    pub mass: f64,
    pub hbar: f64,
}

impl PhysicalConfig {
    pub fn new(mass: f64, hbar: f64) -> Result<Self> {
        let cfg = Self { mass, hbar };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        positive("mass", self.mass)?;
        positive("hbar", self.hbar)
    }
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            hbar: 1.0,
        }
    }
}

/// The interval `[x_left, x_right]` in which the clock is coupled to the particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSpec {
    pub x_left: f64,
    pub x_right: f64,
}

impl RegionSpec {
    pub fn new(x_left: f64, x_right: f64) -> Result<Self> {
        let region = Self { x_left, x_right };
        region.validate()?;
        Ok(region)
    }

    pub fn validate(&self) -> Result<()> {
        finite("x_left", self.x_left)?;
        finite("x_right", self.x_right)?;
        if self.x_right <= self.x_left {
            return Err(invalid("x_right", "region must satisfy x_right > x_left"));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.x_right - self.x_left
    }

    /// Closed-interval membership, the sampling rule for the characteristic function.
    pub fn contains(&self, x: f64) -> bool {
        self.x_left <= x && x <= self.x_right
    }
}

/// Clock frequency `ω` and hand half-width `j`; the hand spans `N = 2j + 1` channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockSpec {
    pub omega: f64,
    pub j: u32,
}

impl ClockSpec {
    pub fn new(omega: f64, j: u32) -> Result<Self> {
        let clock = Self { omega, j };
        clock.validate()?;
        Ok(clock)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega", self.omega)
    }

    pub fn n_channels(&self) -> usize {
        2 * self.j as usize + 1
    }

    /// Resolution `τ = 2π/(Nω)`: the rotation time that makes two hand states orthogonal.
    pub fn resolution(&self) -> f64 {
        clock_resolution(self)
    }

    /// One full revolution `2π/ω`; readings are only known modulo this time.
    pub fn max_time(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Channel labels `-j..=j` in storage order.
    pub fn channels(&self) -> impl Iterator<Item = i64> + Clone {
        let j = self.j as i64;
        -j..=j
    }

    pub fn index_of(&self, n: i64) -> Result<usize> {
        let j = self.j as i64;
        if n < -j || n > j {
            return Err(Error::ChannelOutOfRange { n, j: self.j });
        }
        Ok((n + j) as usize)
    }

    pub fn label_of(&self, index: usize) -> i64 {
        index as i64 - self.j as i64
    }
}

/// Minimum-uncertainty Gaussian packet; `sigma` is the position standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketSpec {
    pub sigma: f64,
    pub x0: f64,
    pub p0: f64,
}

impl WavepacketSpec {
    pub fn validate(&self) -> Result<()> {
        positive("sigma", self.sigma)?;
        finite("x0", self.x0)?;
        finite("p0", self.p0)
    }

    /// Momentum standard deviation `ħ/(2σ)`.
    pub fn momentum_std(&self, hbar: f64) -> f64 {
        hbar / (2.0 * self.sigma)
    }

    /// Gaussian momentum density `P(p)`.
    pub fn momentum_density(&self, p: f64, hbar: f64) -> f64 {
        let s = self.momentum_std(hbar);
        let z = (p - self.p0) / s;
        (-0.5 * z * z).exp() / (s * (2.0 * PI).sqrt())
    }

    /// Probability carried by momenta `p < 0`.
    pub fn negative_momentum_weight(&self, hbar: f64) -> f64 {
        let s = self.momentum_std(hbar);
        0.5 * libm::erfc(self.p0 / (s * std::f64::consts::SQRT_2))
    }
}

/// Uniform periodic grid `x_i = x_min + i·dx`, `i < num_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub num_points: usize,
}

impl SpatialGrid {
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.num_points as f64
    }

    pub fn len(&self) -> usize {
        self.num_points
    }

    pub fn is_empty(&self) -> bool {
        self.num_points == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.num_points).map(|i| self.x(i)).collect()
    }

    /// Discrete Fourier wavenumbers: zero first, then the positive ones, then
    /// the negative ones from `-π/dx` upwards.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.num_points;
        let dk = 2.0 * PI / (self.x_max - self.x_min);
        (0..n)
            .map(|m| {
                if m < n / 2 {
                    m as f64 * dk
                } else {
                    (m as f64 - n as f64) * dk
                }
            })
            .collect()
    }

    /// Index range of grid points inside the closed region, if any.
    pub fn region_indices(&self, region: &RegionSpec) -> Option<std::ops::RangeInclusive<usize>> {
        let inside = |i: &usize| region.contains(self.x(*i));
        let lo = (0..self.num_points).find(inside)?;
        let hi = (0..self.num_points).rev().find(inside).unwrap_or(lo);
        Some(lo..=hi)
    }
}

pub fn build_grid(x_min: f64, x_max: f64, num_points: usize) -> Result<SpatialGrid> {
    if num_points < 8 || !num_points.is_power_of_two() {
        return Err(Error::GridSize(num_points));
    }
    if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
        return Err(Error::DegenerateInterval {
            min: x_min,
            max: x_max,
        });
    }
    Ok(SpatialGrid {
        x_min,
        x_max,
        num_points,
    })
}

/// Joint particle-clock wavefunction `Σ_n ψ_n(x) u_n(θ)`, stored channel-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    clock: ClockSpec,
    grid: SpatialGrid,
    amplitudes: Vec<Complex64>,
}

impl ChannelState {
    pub fn from_amplitudes(
        clock: ClockSpec,
        grid: SpatialGrid,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        if amplitudes.len() != clock.n_channels() * grid.len() {
            return Err(Error::Config(format!(
                "expected {} amplitudes, got {}",
                clock.n_channels() * grid.len(),
                amplitudes.len()
            )));
        }
        Ok(Self {
            clock,
            grid,
            amplitudes,
        })
    }

    /// Product state `ψ(x) Σ_n c_n u_n(θ)`.
    pub fn product(clock: ClockSpec, grid: SpatialGrid, spatial: &[Complex64], weights: &[f64]) -> Self {
        assert_eq!(spatial.len(), grid.len());
        assert_eq!(weights.len(), clock.n_channels());
        let amplitudes = weights
            .iter()
            .flat_map(|&c| spatial.iter().map(move |&z| z * c))
            .collect();
        Self {
            clock,
            grid,
            amplitudes,
        }
    }

    pub fn clock(&self) -> &ClockSpec {
        &self.clock
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn channel(&self, n: i64) -> Result<&[Complex64]> {
        let m = self.grid.len();
        let idx = self.clock.index_of(n)?;
        Ok(&self.amplitudes[idx * m..(idx + 1) * m])
    }

    pub fn channel_mut(&mut self, n: i64) -> Result<&mut [Complex64]> {
        let m = self.grid.len();
        let idx = self.clock.index_of(n)?;
        Ok(&mut self.amplitudes[idx * m..(idx + 1) * m])
    }

    /// Channels paired with their labels, in storage order.
    pub fn channels(&self) -> impl Iterator<Item = (i64, &[Complex64])> {
        self.clock
            .channels()
            .zip(self.amplitudes.chunks_exact(self.grid.len()))
    }

    pub fn channel_norms(&self) -> Vec<f64> {
        let dx = self.grid.dx();
        self.amplitudes
            .chunks_exact(self.grid.len())
            .map(|c| sq_norm(c) * dx)
            .collect()
    }

    pub fn norm(&self) -> f64 {
        self.channel_norms().iter().sum()
    }
}

pub(crate) fn sq_norm(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum()
}

/// Kick instants `T, 2T, …, ⌊t_final/T⌋·T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickSchedule {
    pub period: f64,
    pub t_final: f64,
}

impl KickSchedule {
    pub fn new(period: f64, t_final: f64) -> Result<Self> {
        positive("period", period)?;
        if period > t_final {
            return Err(invalid("period", "kick period must not exceed t_final"));
        }
        Ok(Self { period, t_final })
    }

    pub fn kick_count(&self) -> usize {
        // Ratios such as 25/0.05 land a hair under the integer.
        let ratio = self.t_final / self.period;
        let rounded = ratio.round();
        if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
            rounded as usize
        } else {
            ratio.floor() as usize
        }
    }

    pub fn kick_times(&self) -> Vec<f64> {
        (1..=self.kick_count())
            .map(|k| k as f64 * self.period)
            .collect()
    }

    /// Free flight left after the last kick.
    pub fn remainder(&self) -> f64 {
        (self.t_final - self.kick_count() as f64 * self.period).max(0.0)
    }
}

/// Normalized Gaussian `ψ ∝ exp(-(x-x0)²/4σ² + i p0 x/ħ)` sampled on the grid.
pub fn init_gaussian(
    spec: &WavepacketSpec,
    physical: &PhysicalConfig,
    grid: &SpatialGrid,
) -> Result<Vec<Complex64>> {
    spec.validate()?;
    let margin = 8.0 * spec.sigma;
    if spec.x0 - grid.x_min <= margin || grid.x_max - spec.x0 <= margin {
        return Err(Error::PacketOutsideGrid(format!(
            "x0 = {} must lie more than 8σ = {} inside [{}, {}]",
            spec.x0, margin, grid.x_min, grid.x_max
        )));
    }
    let prefactor = (2.0 * PI * spec.sigma * spec.sigma).powf(-0.25);
    let mut psi: Vec<Complex64> = grid
        .positions()
        .into_iter()
        .map(|x| {
            let u = x - spec.x0;
            let envelope = prefactor * (-u * u / (4.0 * spec.sigma * spec.sigma)).exp();
            Complex64::from_polar(envelope, spec.p0 * x / physical.hbar)
        })
        .collect();
    let norm = (sq_norm(&psi) * grid.dx()).sqrt();
    psi.iter_mut().for_each(|z| *z /= norm);
    Ok(psi)
}

/// Equal weights `1/√N` over `n ∈ [-j, j]`: the hand pointing at `θ = 0`.
pub fn init_clock_hand(clock: &ClockSpec) -> Vec<f64> {
    let n = clock.n_channels();
    vec![1.0 / (n as f64).sqrt(); n]
}

/// `⟨v | v(θ - shift)⟩` for the initial hand, computed in channel space.
pub fn hand_overlap(clock: &ClockSpec, shift: f64) -> Complex64 {
    let n = clock.n_channels() as f64;
    clock
        .channels()
        .map(|k| Complex64::from_polar(1.0 / n, -(k as f64) * shift))
        .sum()
}

/// Initial hand density `|Σ_n e^{inθ}|²/(2πN)`.
pub fn hand_density(clock: &ClockSpec, theta: f64) -> f64 {
    let n = clock.n_channels() as f64;
    let half = 0.5 * theta;
    let s = half.sin();
    if s.abs() < 1e-12 {
        return n / (2.0 * PI);
    }
    let num = (n * half).sin();
    num * num / (s * s * 2.0 * PI * n)
}

/// Classical flight time `m·d/p` across a distance `d`.
pub fn classical_tof(distance: f64, momentum: f64, mass: f64) -> Result<f64> {
    if !(momentum > 0.0) {
        return Err(invalid("momentum", "time of flight needs p > 0"));
    }
    Ok(mass * distance / momentum)
}

pub fn clock_resolution(clock: &ClockSpec) -> f64 {
    2.0 * PI / (clock.n_channels() as f64 * clock.omega)
}

/// Kick phase of channel `n` folded into one Floquet zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularPhase {
    /// `ν_n ∈ [0, 2π)`.
    pub nu: f64,
    /// `ħν_n/T ∈ [0, 2πħ/T)`.
    pub energy: f64,
}

/// Reduces the channel energy `nħω` modulo `2πħ/T` (mathematical modulo, so
/// negative channels also land in `[0, 2πħ/T)`).
pub fn modular_phase(n: i64, clock: &ClockSpec, period: f64, hbar: f64) -> ModularPhase {
    let modulus = 2.0 * PI * hbar / period;
    let mut energy = (n as f64 * hbar * clock.omega).rem_euclid(modulus);
    if energy >= modulus {
        energy = 0.0;
    }
    let mut nu = energy * period / hbar;
    if nu >= 2.0 * PI {
        nu = 0.0;
    }
    ModularPhase { nu, energy }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1_grid() -> SpatialGrid {
        build_grid(-100.0, 100.0, 1 << 13).unwrap()
    }

    #[test]
    fn grid_spacing_and_wavenumber_order() {
        let g = build_grid(0.0, 1.0, 8).unwrap();
        assert_eq!(g.dx(), 0.125);
        let k = g.wavenumbers();
        let two_pi = 2.0 * PI;
        let expected = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0].map(|m| m * two_pi);
        for (a, b) in k.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert!((k[4] + PI / g.dx()).abs() < 1e-12);

        let g = fig1_grid();
        assert!((g.dx() - 0.0244140625).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(matches!(build_grid(0.0, 1.0, 7), Err(Error::GridSize(7))));
        assert!(matches!(build_grid(0.0, 1.0, 4), Err(Error::GridSize(4))));
        assert!(matches!(
            build_grid(1.0, 1.0, 8),
            Err(Error::DegenerateInterval { .. })
        ));
    }

    fn moments(psi: &[Complex64], grid: &SpatialGrid) -> (f64, f64, f64) {
        let dx = grid.dx();
        let norm = sq_norm(psi) * dx;
        let mean = psi
            .iter()
            .enumerate()
            .map(|(i, z)| grid.x(i) * z.norm_sqr())
            .sum::<f64>()
            * dx;
        let var = psi
            .iter()
            .enumerate()
            .map(|(i, z)| (grid.x(i) - mean).powi(2) * z.norm_sqr())
            .sum::<f64>()
            * dx;
        (norm, mean, var)
    }

    /// ⟨p⟩ from the discrete Fourier transform of the array (independent of
    /// the construction formula).
    fn momentum_moments(psi: &[Complex64], grid: &SpatialGrid) -> (f64, f64) {
        use rustfft::FftPlanner;
        let mut buf = psi.to_vec();
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
        let k = grid.wavenumbers();
        let total: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
        let mean = buf.iter().zip(&k).map(|(z, k)| k * z.norm_sqr()).sum::<f64>() / total;
        let var = buf
            .iter()
            .zip(&k)
            .map(|(z, k)| (k - mean).powi(2) * z.norm_sqr())
            .sum::<f64>()
            / total;
        (mean, var.sqrt())
    }

    #[test]
    fn gaussian_moments_match_fig1_packet() {
        let grid = fig1_grid();
        let spec = WavepacketSpec {
            sigma: 1.0,
            x0: -30.0,
            p0: 5.0,
        };
        let psi = init_gaussian(&spec, &PhysicalConfig::default(), &grid).unwrap();
        let (norm, mean, var) = moments(&psi, &grid);
        assert!((norm - 1.0).abs() < 1e-12);
        assert!((mean + 30.0).abs() < 1e-6);
        assert!((var - 1.0).abs() < 1e-6);
        let (p_mean, p_std) = momentum_moments(&psi, &grid);
        assert!((p_mean - 5.0).abs() < 1e-6);
        assert!((p_std - 0.5).abs() < 1e-6);
    }

    #[test]
    fn gaussian_at_rest_is_real_and_symmetric() {
        let grid = build_grid(-32.0, 32.0, 1024).unwrap();
        let spec = WavepacketSpec {
            sigma: 1.0,
            x0: 0.0,
            p0: 0.0,
        };
        let psi = init_gaussian(&spec, &PhysicalConfig::default(), &grid).unwrap();
        assert!(psi.iter().all(|z| z.im == 0.0 && z.re > 0.0));
        // x_i = -32 + i dx, so index i mirrors index N - i about x = 0.
        for i in 1..512 {
            assert!((psi[i].re - psi[1024 - i].re).abs() < 1e-15);
        }
        let (p_mean, _) = momentum_moments(&psi, &grid);
        assert!(p_mean.abs() < 1e-12);
    }

    #[test]
    fn gaussian_rejects_leaky_or_degenerate_packets() {
        let grid = fig1_grid();
        let phys = PhysicalConfig::default();
        let leaky = WavepacketSpec {
            sigma: 1.0,
            x0: -95.0,
            p0: 5.0,
        };
        assert!(matches!(
            init_gaussian(&leaky, &phys, &grid),
            Err(Error::PacketOutsideGrid(_))
        ));
        let flat = WavepacketSpec {
            sigma: 0.0,
            x0: 0.0,
            p0: 5.0,
        };
        assert!(init_gaussian(&flat, &phys, &grid).is_err());
    }

    #[test]
    fn clock_hand_weights_and_density() {
        let c0 = ClockSpec::new(1.0, 0).unwrap();
        assert_eq!(init_clock_hand(&c0), vec![1.0]);
        for theta in [0.0, 1.0, 3.0, 6.0] {
            assert!((hand_density(&c0, theta) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        }
        let c1 = ClockSpec::new(1.0, 1).unwrap();
        let w = init_clock_hand(&c1);
        assert_eq!(w.len(), 3);
        assert!(w.iter().all(|&c| (c - 1.0 / 3f64.sqrt()).abs() < 1e-15));
        assert!((hand_density(&c1, 0.0) - 3.0 / (2.0 * PI)).abs() < 1e-15);
        // Closed form agrees with the explicit mode sum.
        for theta in [0.3, 1.7, 4.0] {
            let s: Complex64 = c1.channels().map(|n| Complex64::from_polar(1.0, n as f64 * theta)).sum();
            assert!((hand_density(&c1, theta) - s.norm_sqr() / (2.0 * PI * 3.0)).abs() < 1e-14);
        }
        let c50 = ClockSpec::new(2.0 * PI / 25.0, 50).unwrap();
        assert!(hand_overlap(&c50, 2.0 * PI / 101.0).norm() < 1e-14);
    }

    #[test]
    fn flight_time_and_resolution() {
        assert_eq!(classical_tof(50.0, 5.0, 1.0).unwrap(), 10.0);
        assert_eq!(classical_tof(50.0, 50.0, 1.0).unwrap(), 1.0);
        assert_eq!(classical_tof(0.0, 5.0, 1.0).unwrap(), 0.0);
        assert!(classical_tof(50.0, 0.0, 1.0).is_err());
        assert!(classical_tof(50.0, -1.0, 1.0).is_err());

        let tau = |omega, j| clock_resolution(&ClockSpec::new(omega, j).unwrap());
        assert!((tau(2.0 * PI, 0) - 1.0).abs() < 1e-15);
        assert!((tau(2.0 * PI / 3.0, 1) - 1.0).abs() < 1e-15);
        assert!((tau(2.0 * PI / 25.0, 50) - 25.0 / 101.0).abs() < 1e-15);
    }

    #[test]
    fn modular_phase_examples() {
        let c = ClockSpec::new(1.0, 10).unwrap();
        let zero = modular_phase(0, &ClockSpec::new(0.7, 3).unwrap(), 2.3, 1.0);
        assert_eq!(zero.nu, 0.0);
        let p = modular_phase(5, &c, PI, 1.0);
        assert!((p.energy - 1.0).abs() < 1e-12);
        assert!((p.nu - PI).abs() < 1e-12);
        let q = modular_phase(-3, &c, PI, 1.0);
        assert!((q.energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kick_schedule_counts() {
        let s = KickSchedule::new(1.0, 25.0).unwrap();
        assert_eq!(s.kick_count(), 25);
        assert_eq!(s.kick_times().last(), Some(&25.0));
        assert_eq!(s.remainder(), 0.0);
        let s = KickSchedule::new(0.4, 25.0).unwrap();
        assert_eq!(s.kick_count(), 62);
        assert!((s.remainder() - 0.2).abs() < 1e-12);
        assert_eq!(KickSchedule::new(0.05, 25.0).unwrap().kick_count(), 500);
        assert!(KickSchedule::new(30.0, 25.0).is_err());
        assert!(KickSchedule::new(0.0, 25.0).is_err());
    }

    #[test]
    fn negative_momentum_weight_of_fig1_packet_is_negligible() {
        let spec = WavepacketSpec {
            sigma: 1.0,
            x0: -30.0,
            p0: 5.0,
        };
        // p0 is ten momentum standard deviations above zero.
        let w = spec.negative_momentum_weight(1.0);
        assert!(w > 0.0 && w < 1e-20);
    }

    proptest! {
        #[test]
        fn resolution_closes_the_revolution(omega in 1e-3f64..1e3, j in 0u32..500) {
            let c = ClockSpec::new(omega, j).unwrap();
            let lhs = c.resolution() * c.n_channels() as f64 * c.omega;
            prop_assert!((lhs - 2.0 * PI).abs() < 1e-12);
        }

        #[test]
        fn hand_is_orthogonal_to_its_discrete_shifts(j in 1u32..80, m in 1i64..400) {
            let c = ClockSpec::new(1.0, j).unwrap();
            let n = c.n_channels() as i64;
            prop_assume!(m % n != 0);
            let overlap = hand_overlap(&c, m as f64 * 2.0 * PI / n as f64);
            prop_assert!(overlap.norm() < 1e-12);
        }

        #[test]
        fn modular_energy_stays_in_zone(n in -500i64..500, omega in 1e-2f64..10.0, period in 1e-2f64..50.0, hbar in 0.1f64..3.0) {
            let c = ClockSpec::new(omega, 500).unwrap();
            let p = modular_phase(n, &c, period, hbar);
            prop_assert!(p.energy >= 0.0 && p.energy < 2.0 * PI * hbar / period);
            prop_assert!(p.nu >= 0.0 && p.nu < 2.0 * PI);
        }

        #[test]
        fn gaussian_moments_hold_for_resolved_packets(
            sigma in 0.5f64..3.0, x0 in -20.0f64..20.0, p0 in -5.0f64..5.0,
        ) {
            let grid = build_grid(-64.0, 64.0, 1 << 12).unwrap();
            prop_assume!(sigma >= 20.0 * grid.dx());
            let spec = WavepacketSpec { sigma, x0, p0 };
            let psi = init_gaussian(&spec, &PhysicalConfig::default(), &grid).unwrap();
            let (norm, mean, var) = moments(&psi, &grid);
            prop_assert!((norm - 1.0).abs() < 1e-12);
            prop_assert!((mean - x0).abs() < 1e-6);
            prop_assert!((var - sigma * sigma).abs() < 1e-6);
        }
    }
}
