//! Momentum-space wavefunctions sampled on a uniform grid.
//!
//! Units are natural (ħ = 1) and momenta are usually expressed in units of
//! the Gaussian width `W`. Every wavefunction carries its [`GridSpec`]; the
//! position-space representation lives on the reciprocal grid with spacing
//! `2π / (p_max - p_min)`, centred on `z = 0`.
//!
//! The transform pair is a sampled version of the continuous unitary Fourier
//! transform
//!
//! ```text
//! ψ(z) = (2π)^(-1/2) ∫ Φ(p) e^{ipz} dp
//! ```
//!
//! so analytic position-space results can be compared node by node.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Norms below this are treated as an empty (dark) state.
pub const ZERO_NORM_THRESHOLD: f64 = 1e-30;

/// Uniform momentum grid with `n_points` nodes `p_k = p_min + k Δp`,
/// `Δp = (p_max - p_min) / n_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n_points: usize,
    p_min: f64,
    p_max: f64,
}

impl GridSpec {
    pub fn new(n_points: usize, p_min: f64, p_max: f64) -> Result<Self> {
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= 2, got {n_points}"
            )));
        }
        if !p_min.is_finite() || !p_max.is_finite() || p_max <= p_min {
            return Err(Error::InvalidGrid(format!(
                "need finite p_min < p_max, got [{p_min}, {p_max}]"
            )));
        }
        Ok(Self {
            n_points,
            p_min,
            p_max,
        })
    }

    /// Grid on `[-p_max, p_max)`.
    pub fn symmetric(n_points: usize, p_max: f64) -> Result<Self> {
        Self::new(n_points, -p_max, p_max)
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn span(&self) -> f64 {
        self.p_max - self.p_min
    }

    pub fn step(&self) -> f64 {
        self.span() / self.n_points as f64
    }

    pub fn momentum(&self, k: usize) -> f64 {
        self.p_min + k as f64 * self.step()
    }

    pub fn momenta(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|k| self.momentum(k))
    }

    /// Spacing of the reciprocal position grid.
    pub fn position_step(&self) -> f64 {
        2.0 * PI / self.span()
    }

    /// Position node `z_j = (j - n/2) Δz`.
    pub fn position(&self, j: usize) -> f64 {
        (j as f64 - (self.n_points / 2) as f64) * self.position_step()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|j| self.position(j))
    }

    /// Largest admissible `|δ|` for [`MomentumWavefunction::shift`].
    pub fn shift_limit(&self) -> f64 {
        self.span() / 4.0
    }
}

impl Default for GridSpec {
    /// 4096 nodes on `[-16, 16)`: room for kicks up to `2W` with a wide margin.
    fn default() -> Self {
        Self {
            n_points: 4096,
            p_min: -16.0,
            p_max: 16.0,
        }
    }
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    thread_local! {
        static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
    }
    PLANNER.with(|planner| {
        let mut planner = planner.borrow_mut();
        if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        }
    })
}

/// Complex amplitudes `Φ(p_k)` on a momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumWavefunction {
    grid: GridSpec,
    amplitudes: Vec<Complex64>,
}

impl MomentumWavefunction {
    pub fn new(grid: GridSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points {
            return Err(Error::InvalidGrid(format!(
                "{} amplitudes for a grid of {} points",
                amplitudes.len(),
                grid.n_points
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidGrid("non-finite amplitude".into()));
        }
        Ok(Self { grid, amplitudes })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            amplitudes: vec![Complex64::new(0.0, 0.0); grid.n_points],
        }
    }

    /// Samples a complex function of momentum on the grid.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.momenta().map(f).collect())
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `∫|Φ|² dp` as a Riemann sum over the grid. This is the squared L2
    /// norm, which is the selection probability for an exit-port state.
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.step()
    }

    /// `(1/N) ∫ p |Φ|² dp`.
    pub fn mean_momentum(&self) -> Result<f64> {
        let norm = self.checked_norm()?;
        let first: f64 = self
            .grid
            .momenta()
            .zip(&self.amplitudes)
            .map(|(p, a)| p * a.norm_sqr())
            .sum();
        Ok(first * self.grid.step() / norm)
    }

    /// Second central moment of `|Φ|²`.
    pub fn variance_momentum(&self) -> Result<f64> {
        let mean = self.mean_momentum()?;
        let norm = self.norm();
        let second: f64 = self
            .grid
            .momenta()
            .zip(&self.amplitudes)
            .map(|(p, a)| (p - mean).powi(2) * a.norm_sqr())
            .sum();
        Ok(second * self.grid.step() / norm)
    }

    fn checked_norm(&self) -> Result<f64> {
        let norm = self.norm();
        if norm < ZERO_NORM_THRESHOLD {
            Err(Error::ZeroNorm)
        } else {
            Ok(norm)
        }
    }

    /// `⟨self|other⟩ = ∫ Φ₁*(p) Φ₂(p) dp`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.same_grid(other)?;
        let sum: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(sum * self.grid.step())
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Returns `Φ(p - δ)`.
    ///
    /// The shift is a phase ramp `e^{iδz}` applied in position space, so it is
    /// exact for band-limited content and any real `δ`, not just multiples of
    /// the grid step.
    pub fn shift(&self, delta: f64) -> Result<Self> {
        let limit = self.grid.shift_limit();
        if !delta.is_finite() || delta.abs() >= limit {
            return Err(Error::Aliasing { delta, limit });
        }
        if delta == 0.0 {
            return Ok(self.clone());
        }
        let mut psi = self.to_position();
        psi.apply_phase_ramp(delta);
        Ok(psi.to_momentum())
    }

    pub fn to_position(&self) -> PositionWavefunction {
        let grid = self.grid;
        let n = grid.n_points;
        // e^{i k Δp z_min} = (-1)^k because z_min = -(n/2) Δz.
        let mut buf: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| if k % 2 == 1 { -a } else { *a })
            .collect();
        plan(n, true).process(&mut buf);
        let scale = grid.step() / (2.0 * PI).sqrt();
        for (j, v) in buf.iter_mut().enumerate() {
            *v *= Complex64::from_polar(scale, grid.p_min * grid.position(j));
        }
        PositionWavefunction {
            grid,
            amplitudes: buf,
        }
    }
}

/// `a Φ₁ + b Φ₂` node by node.
pub fn superpose(
    a: Complex64,
    wf1: &MomentumWavefunction,
    b: Complex64,
    wf2: &MomentumWavefunction,
) -> Result<MomentumWavefunction> {
    wf1.same_grid(wf2)?;
    Ok(MomentumWavefunction {
        grid: wf1.grid,
        amplitudes: wf1
            .amplitudes
            .iter()
            .zip(&wf2.amplitudes)
            .map(|(x, y)| a * x + b * y)
            .collect(),
    })
}

/// Amplitudes `ψ(z_j)` on the position grid reciprocal to a momentum grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionWavefunction {
    grid: GridSpec,
    amplitudes: Vec<Complex64>,
}

impl PositionWavefunction {
    pub fn new(grid: GridSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points {
            return Err(Error::InvalidGrid(format!(
                "{} amplitudes for a grid of {} points",
                amplitudes.len(),
                grid.n_points
            )));
        }
        Ok(Self { grid, amplitudes })
    }

    /// The momentum grid this position grid is dual to.
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.position_step()
    }

    pub fn mean_position(&self) -> Result<f64> {
        let norm = self.norm();
        if norm < ZERO_NORM_THRESHOLD {
            return Err(Error::ZeroNorm);
        }
        let first: f64 = self
            .grid
            .positions()
            .zip(&self.amplitudes)
            .map(|(z, a)| z * a.norm_sqr())
            .sum();
        Ok(first * self.grid.position_step() / norm)
    }

    /// Standard deviation of `|ψ(z)|²`.
    pub fn width(&self) -> Result<f64> {
        let mean = self.mean_position()?;
        let norm = self.norm();
        let second: f64 = self
            .grid
            .positions()
            .zip(&self.amplitudes)
            .map(|(z, a)| (z - mean).powi(2) * a.norm_sqr())
            .sum();
        Ok((second * self.grid.position_step() / norm).sqrt())
    }

    /// Multiplies by `e^{ikz}`, i.e. translates the momentum content by `k`.
    pub fn apply_phase_ramp(&mut self, k: f64) {
        let grid = self.grid;
        for (j, v) in self.amplitudes.iter_mut().enumerate() {
            *v *= Complex64::from_polar(1.0, k * grid.position(j));
        }
    }

    pub fn to_momentum(&self) -> MomentumWavefunction {
        let grid = self.grid;
        let n = grid.n_points;
        let scale = (2.0 * PI).sqrt() / grid.step();
        let mut buf: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(j, v)| v * Complex64::from_polar(scale, -grid.p_min * grid.position(j)))
            .collect();
        plan(n, false).process(&mut buf);
        let inv_n = 1.0 / n as f64;
        for (k, v) in buf.iter_mut().enumerate() {
            *v *= if k % 2 == 1 { -inv_n } else { inv_n };
        }
        MomentumWavefunction {
            grid,
            amplitudes: buf,
        }
    }
}

/// Width `W` and mean `μ` of the momentum-space Gaussian
/// `Φ(p) = π^(-1/4) W^(-1/2) exp(-(p-μ)²/(2W²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    width: f64,
    mean: f64,
}

impl GaussianParams {
    pub fn new(width: f64, mean: f64) -> Result<Self> {
        crate::error::check_range("width", width, width > 0.0, "W > 0")?;
        crate::error::check_range("mean", mean, true, "finite")?;
        Ok(Self { width, mean })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn amplitude(&self, p: f64) -> f64 {
        let x = (p - self.mean) / self.width;
        PI.powf(-0.25) / self.width.sqrt() * (-0.5 * x * x).exp()
    }
}

impl Default for GaussianParams {
    fn default() -> Self {
        Self {
            width: 1.0,
            mean: 0.0,
        }
    }
}

/// Samples the normalized Gaussian on `grid`.
///
/// The grid must cover `[μ - 6W, μ + 6W]` and its step must not exceed `W/2`,
/// which keeps the sampled norm within `1e-10` of one.
pub fn gaussian_init(params: GaussianParams, grid: GridSpec) -> Result<MomentumWavefunction> {
    let (w, mu) = (params.width, params.mean);
    let narrow = |reason: String| Error::GridTooNarrow {
        width: w,
        mean: mu,
        reason,
    };
    if grid.p_min > mu - 6.0 * w || grid.p_max < mu + 6.0 * w {
        return Err(narrow(format!(
            "grid [{}, {}] does not span [{}, {}]",
            grid.p_min,
            grid.p_max,
            mu - 6.0 * w,
            mu + 6.0 * w
        )));
    }
    if grid.step() > 0.5 * w {
        return Err(narrow(format!(
            "grid step {} does not resolve width {w}",
            grid.step()
        )));
    }
    MomentumWavefunction::from_fn(grid, |p| Complex64::new(params.amplitude(p), 0.0))
}
