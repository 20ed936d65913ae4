//! From final states to clock-reading distributions.
//!
//! The clock's reduced density matrix in the channel basis is the overlap
//! matrix `O_{nn'} = ∫ψ_n ψ*_{n'} dx`; the hand-angle density is its
//! trigonometric polynomial `P(θ) = (1/2π) Σ O_{nn'} e^{i(n-n')θ}`, and
//! readings are converted to times by `t = θ/ω`.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ChannelState, ClockSpec, RegionSpec};
use crate::oracles::{trapezoid, IdealDwellDistribution};

/// Rounding noise tolerated (and clipped) below zero in reconstructed densities.
pub const DENSITY_CLIP: f64 = 1e-12;

/// Hermitian channel overlap matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelOverlapMatrix {
    size: usize,
    values: Vec<Complex64>,
}

impl ChannelOverlapMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.values[a * self.size + b]
    }

    pub fn trace(&self) -> f64 {
        (0..self.size).map(|a| self.get(a, a).re).sum()
    }

    /// Sums along the diagonals `a - b = Δ` for `Δ = 0..size`.
    fn diagonal_sums(&self) -> Vec<Complex64> {
        (0..self.size)
            .map(|delta| (delta..self.size).map(|a| self.get(a, a - delta)).sum())
            .collect()
    }
}

/// Overlap matrix restricted to grid indices `points` (the whole grid if `None`).
pub fn overlap_matrix(state: &ChannelState, points: Option<Range<usize>>) -> ChannelOverlapMatrix {
    let size = state.clock().n_channels();
    let dx = state.grid().dx();
    let range = points.unwrap_or(0..state.grid().len());
    let rows: Vec<&[Complex64]> = state.channels().map(|(_, psi)| &psi[range.clone()]).collect();
    let mut values = vec![Complex64::default(); size * size];
    for a in 0..size {
        for b in a..size {
            let v: Complex64 = rows[a].iter().zip(rows[b]).map(|(x, y)| x * y.conj()).sum::<Complex64>() * dx;
            values[a * size + b] = v;
            values[b * size + a] = v.conj();
        }
        values[a * size + a].im = 0.0;
    }
    ChannelOverlapMatrix { size, values }
}

/// Hand-angle density sampled at `θ_l = 2πl/Θ`, `l < Θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaDensity {
    pub theta: Vec<f64>,
    pub density: Vec<f64>,
}

impl ThetaDensity {
    /// Periodic integral (exact for the trigonometric polynomial when Θ ≥ 2N).
    pub fn mass(&self) -> f64 {
        self.density.iter().sum::<f64>() * 2.0 * PI / self.density.len() as f64
    }
}

pub fn theta_from_overlap(overlap: &ChannelOverlapMatrix, theta_points: usize) -> Result<ThetaDensity> {
    let required = 2 * overlap.size();
    if theta_points < required {
        return Err(Error::UndersampledTheta {
            points: theta_points,
            channels: overlap.size(),
            required,
        });
    }
    let sums = overlap.diagonal_sums();
    let theta: Vec<f64> = (0..theta_points)
        .map(|l| 2.0 * PI * l as f64 / theta_points as f64)
        .collect();
    let density = theta
        .iter()
        .map(|&th| {
            let mut acc = sums[0].re;
            for (delta, c) in sums.iter().enumerate().skip(1) {
                acc += 2.0 * (c * Complex64::from_polar(1.0, delta as f64 * th)).re;
            }
            clip(acc / (2.0 * PI))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ThetaDensity { theta, density })
}

fn clip(value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -DENSITY_CLIP {
        Ok(0.0)
    } else {
        Err(Error::NegativeDensity(value))
    }
}

/// θ-marginal of the joint state.
pub fn theta_distribution(state: &ChannelState, theta_points: usize) -> Result<ThetaDensity> {
    theta_from_overlap(&overlap_matrix(state, None), theta_points)
}

/// θ-marginal of the part of the state that lies right of the region.
pub fn transmitted_theta_distribution(
    state: &ChannelState,
    region: &RegionSpec,
    theta_points: usize,
) -> Result<ThetaDensity> {
    let grid = state.grid();
    let first = (0..grid.len()).find(|&i| grid.x(i) > region.x_right).unwrap_or(grid.len());
    theta_from_overlap(&overlap_matrix(state, Some(first..grid.len())), theta_points)
}

/// A density over clock-reading time with its running integral.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSeries {
    pub label: String,
    pub times: Vec<f64>,
    pub density: Vec<f64>,
    pub cdf: Vec<f64>,
    pub mass: f64,
}

impl DistributionSeries {
    pub fn new(label: impl Into<String>, times: Vec<f64>, density: Vec<f64>) -> Self {
        let cdf = cumulative(&times, &density);
        let mass = cdf.last().copied().unwrap_or(0.0);
        Self {
            label: label.into(),
            times,
            density,
            cdf,
            mass,
        }
    }

    pub fn from_ideal(label: impl Into<String>, ideal: &IdealDwellDistribution) -> Self {
        Self::new(label, ideal.times.clone(), ideal.density.clone())
    }

    fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// Length of the sampled interval.
    pub fn span(&self) -> f64 {
        self.times[self.times.len() - 1] - self.times[0]
    }
}

/// Times `θ/ω` on `[0, 2π/ω]`; the closing sample repeats `θ = 0`, so the
/// trapezoid integral equals the periodic one and the mass is preserved.
pub fn tof_distribution(theta: &ThetaDensity, clock: &ClockSpec, label: impl Into<String>) -> DistributionSeries {
    let count = theta.density.len();
    let step = clock.max_time() / count as f64;
    let times = (0..=count).map(|i| i as f64 * step).collect();
    let density = (0..=count).map(|i| clock.omega * theta.density[i % count]).collect();
    DistributionSeries::new(label, times, density)
}

/// Running trapezoid integral starting at zero.
pub fn cumulative(times: &[f64], density: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(density.len());
    let mut acc = 0.0;
    out.push(0.0);
    for (t, p) in times.windows(2).zip(density.windows(2)) {
        acc += 0.5 * (t[1] - t[0]) * (p[0] + p[1]);
        out.push(acc);
    }
    out.truncate(density.len());
    out
}

/// Reading-time interval; `start` may be negative to straddle `t = 0`, in
/// which case samples from the end of the period are used shifted by `-2π/ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    pub fn centered(center: f64, half_width: f64) -> Self {
        Self::new(center - half_width, center + half_width)
    }
}

/// Linear mean `∫t P dt / ∫P dt` over a window (default: the full period).
pub fn mean_reading(series: &DistributionSeries, window: Option<TimeWindow>) -> Result<f64> {
    let step = series.step();
    let last = series.times.len() - 1;
    let window = window.unwrap_or(TimeWindow::new(series.times[0], series.times[last]));
    let eps = 1e-9;
    let lo = (window.start / step - eps).ceil() as i64;
    let hi = ((window.end / step + eps).floor() as i64).min(last as i64);
    let lo = lo.max(-(last as i64) + 1);
    if hi <= lo {
        return Err(Error::EmptyWindow(window.start, window.end));
    }
    let (times, values): (Vec<f64>, Vec<f64>) = (lo..=hi)
        .map(|i| {
            let idx = if i < 0 { (i + last as i64) as usize } else { i as usize };
            (i as f64 * step, series.density[idx])
        })
        .unzip();
    let mass = trapezoid(&times, &values);
    if !(mass > 0.0) {
        return Err(Error::EmptyWindow(window.start, window.end));
    }
    let first: Vec<f64> = times.iter().zip(&values).map(|(t, p)| t * p).collect();
    Ok(trapezoid(&times, &first) / mass)
}

/// Circular mean of the reading, in `[0, span)`; robust for hands near `t = 0`.
pub fn circular_mean_reading(series: &DistributionSeries) -> f64 {
    let period = series.span();
    let k = 2.0 * PI / period;
    let n = series.times.len() - 1;
    let z: Complex64 = (0..n)
        .map(|i| Complex64::from_polar(series.density[i], k * series.times[i]))
        .sum();
    (z.arg() / k).rem_euclid(period)
}

/// Fraction of the mass whose reading lies within `half_width` of a multiple of `period`.
pub fn mass_near_multiples(series: &DistributionSeries, period: f64, half_width: f64) -> f64 {
    let n = series.times.len() - 1;
    let (mut near, mut total) = (0.0, 0.0);
    for i in 0..n {
        let t = series.times[i];
        let offset = t - (t / period).round() * period;
        total += series.density[i];
        if offset.abs() <= half_width {
            near += series.density[i];
        }
    }
    near / total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    /// `sup_t |C_a(t) - C_b(t)|`.
    pub sup_cdf: f64,
    /// `∫|P_a - P_b| dt`.
    pub l1_density: f64,
}

pub fn distribution_distance(a: &DistributionSeries, b: &DistributionSeries) -> Result<Distance> {
    if a.times.len() != b.times.len() {
        return Err(Error::GridMismatch);
    }
    let tol = 1e-9 * a.span().abs().max(1.0);
    if a.times.iter().zip(&b.times).any(|(x, y)| (x - y).abs() > tol) {
        return Err(Error::GridMismatch);
    }
    let sup_cdf = a.cdf.iter().zip(&b.cdf).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let diff: Vec<f64> = a.density.iter().zip(&b.density).map(|(x, y)| (x - y).abs()).collect();
    Ok(Distance {
        sup_cdf,
        l1_density: trapezoid(&a.times, &diff),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMasses {
    pub n: i64,
    pub left: f64,
    pub inside: f64,
    pub right: f64,
}

impl ChannelMasses {
    pub fn total(&self) -> f64 {
        self.left + self.inside + self.right
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionReport {
    pub channels: Vec<ChannelMasses>,
    pub left: f64,
    pub inside: f64,
    pub right: f64,
}

/// Probability left of, inside, and right of the region, per channel and in total.
pub fn transmission_report(state: &ChannelState, region: &RegionSpec) -> TransmissionReport {
    let grid = state.grid();
    let dx = grid.dx();
    let channels: Vec<ChannelMasses> = state
        .channels()
        .map(|(n, psi)| {
            let mut m = ChannelMasses {
                n,
                left: 0.0,
                inside: 0.0,
                right: 0.0,
            };
            for (i, z) in psi.iter().enumerate() {
                let x = grid.x(i);
                let p = z.norm_sqr() * dx;
                if x < region.x_left {
                    m.left += p;
                } else if x > region.x_right {
                    m.right += p;
                } else {
                    m.inside += p;
                }
            }
            m
        })
        .collect();
    TransmissionReport {
        left: channels.iter().map(|c| c.left).sum(),
        inside: channels.iter().map(|c| c.inside).sum(),
        right: channels.iter().map(|c| c.right).sum(),
        channels,
    }
}
