//! Split-step propagation in one dimension.
//!
//! Used to check that a kick produced by a finite-duration linear potential
//! `V(z) = -F z` reproduces the rigid momentum shift assumed by the
//! interferometer model, and to spread free wavepackets.
//!
//! Steps are Strang-split (half potential, full kinetic, half potential).
//! The linear potential is applied as the exact phase `e^{iFzΔt/2}`, so the
//! only error is the splitting error. There are no absorbing boundaries; a
//! step that pushes norm into the outer sixteenth of either grid is reported
//! as [`Error::BoundaryLeakage`].

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::interferometer::{
    port_stats, recombine, split, BeamSplitter, Path, PhaseSetting, Port, PortOutcome,
    TwoPathState,
};
pub use crate::wavepacket::PositionWavefunction;
use crate::wavepacket::MomentumWavefunction;

/// Largest fraction of the norm allowed near the grid edges.
pub const LEAKAGE_TOLERANCE: f64 = 1e-6;

/// Constant force `F` acting for a duration `τ`, resolved into `substeps`
/// Strang steps. The imparted kick is `F τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpulsePulse {
    force: f64,
    duration: f64,
    substeps: usize,
}

impl ImpulsePulse {
    pub fn new(force: f64, duration: f64, substeps: usize) -> Result<Self> {
        check_range("force", force, true, "finite")?;
        check_range("duration", duration, duration >= 0.0, "tau >= 0")?;
        check_range("substeps", substeps as f64, substeps >= 1, "substeps >= 1")?;
        Ok(Self {
            force,
            duration,
            substeps,
        })
    }

    /// Pulse of duration `duration` delivering the kick `delta`.
    pub fn for_kick(delta: f64, duration: f64, substeps: usize) -> Result<Self> {
        check_range("duration", duration, duration > 0.0, "tau > 0 for a nonzero kick")?;
        Self::new(delta / duration, duration, substeps)
    }

    pub fn force(&self) -> f64 {
        self.force
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn kick(&self) -> f64 {
        self.force * self.duration
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationConfig {
    pub mass: f64,
}

impl PropagationConfig {
    pub fn new(mass: f64) -> Result<Self> {
        check_range("mass", mass, mass > 0.0, "m > 0")?;
        Ok(Self { mass })
    }
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self { mass: 1.0 }
    }
}

fn apply_kinetic(wf: &mut MomentumWavefunction, time: f64, mass: f64) {
    let grid = *wf.grid();
    let amps: Vec<Complex64> = grid
        .momenta()
        .zip(wf.amplitudes())
        .map(|(p, a)| a * Complex64::from_polar(1.0, -p * p * time / (2.0 * mass)))
        .collect();
    *wf = MomentumWavefunction::new(grid, amps).expect("same grid, finite phases");
}

/// Exact free evolution `e^{-ip²t/2m}` in momentum space.
pub fn free_propagate_momentum(
    wf: &MomentumWavefunction,
    time: f64,
    config: &PropagationConfig,
) -> MomentumWavefunction {
    let mut out = wf.clone();
    if time != 0.0 {
        apply_kinetic(&mut out, time, config.mass);
    }
    out
}

pub fn free_propagate(
    wf: &PositionWavefunction,
    time: f64,
    config: &PropagationConfig,
) -> PositionWavefunction {
    if time == 0.0 {
        return wf.clone();
    }
    free_propagate_momentum(&wf.to_momentum(), time, config).to_position()
}

fn edge_fraction(amps: &[Complex64]) -> f64 {
    let n = amps.len();
    let margin = (n / 16).max(1);
    let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let edges: f64 = amps[..margin]
        .iter()
        .chain(&amps[n - margin..])
        .map(|a| a.norm_sqr())
        .sum();
    edges / total
}

fn check_leakage(amps: &[Complex64]) -> Result<()> {
    let fraction = edge_fraction(amps);
    if fraction > LEAKAGE_TOLERANCE {
        Err(Error::BoundaryLeakage { fraction })
    } else {
        Ok(())
    }
}

/// Evolves under `p²/2m - F z` for the pulse duration.
pub fn apply_impulse(
    wf: &PositionWavefunction,
    pulse: &ImpulsePulse,
    config: &PropagationConfig,
) -> Result<PositionWavefunction> {
    if pulse.duration == 0.0 {
        return Ok(wf.clone());
    }
    let dt = pulse.duration / pulse.substeps as f64;
    let half_kick = 0.5 * pulse.force * dt;
    let mut psi = wf.clone();
    check_leakage(psi.amplitudes())?;
    for _ in 0..pulse.substeps {
        psi.apply_phase_ramp(half_kick);
        let mut phi = psi.to_momentum();
        check_leakage(phi.amplitudes())?;
        apply_kinetic(&mut phi, dt, config.mass);
        psi = phi.to_position();
        psi.apply_phase_ramp(half_kick);
        check_leakage(psi.amplitudes())?;
    }
    check_leakage(psi.to_momentum().amplitudes())?;
    Ok(psi)
}

/// Same as [`apply_impulse`] for a momentum-space state.
pub fn apply_impulse_momentum(
    wf: &MomentumWavefunction,
    pulse: &ImpulsePulse,
    config: &PropagationConfig,
) -> Result<MomentumWavefunction> {
    Ok(apply_impulse(&wf.to_position(), pulse, config)?.to_momentum())
}

/// `|⟨shift(before, δ)|after⟩| / (‖before‖ ‖after‖)`: how close `after` is
/// to a rigid momentum translate of `before`.
pub fn kick_fidelity(
    before: &MomentumWavefunction,
    after: &MomentumWavefunction,
    delta: f64,
) -> Result<f64> {
    let ideal = before.shift(delta)?;
    let overlap = ideal.inner(after)?;
    let norms = (ideal.norm() * after.norm()).sqrt();
    if norms < crate::wavepacket::ZERO_NORM_THRESHOLD {
        return Err(Error::ZeroNorm);
    }
    Ok(overlap.norm() / norms)
}

/// Interferometer in which arm B is kicked by a finite pulse and arm A
/// evolves freely for the same time.
pub fn run_mzi_with_pulse(
    input: &MomentumWavefunction,
    t: f64,
    pulse: &ImpulsePulse,
    config: &PropagationConfig,
    phase: PhaseSetting,
) -> Result<(PortOutcome, PortOutcome)> {
    let bs = BeamSplitter::new(t)?;
    let inside = split(input, &bs);
    let arm_a = free_propagate_momentum(inside.path_a(), pulse.duration, config);
    let arm_b = apply_impulse_momentum(inside.path_b(), pulse, config)?;
    let inside = TwoPathState::new(arm_a, arm_b)?.phase(Path::B, phase.alpha());
    let (raw_c, raw_d) = recombine(&inside)?;
    Ok((port_stats(&raw_c, Port::C), port_stats(&raw_d, Port::D)))
}
