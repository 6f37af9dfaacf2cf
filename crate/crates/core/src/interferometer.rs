//! Mach-Zehnder pipeline: first beam splitter, kick and phase in arm B,
//! balanced second beam splitter, post-selection at port C or D.
//!
//! Conventions: the first splitter has transmission `t` and reflection `ir`
//! (`r = √(1-t²)`), the second is balanced with transmission `1/√2` and
//! reflection `i/√2`. After recombination
//!
//! ```text
//! Φ_C(p) = (t Φ(p) - r e^{iα} Φ(p-δ)) / √2
//! Φ_D(p) = (t Φ(p) + r e^{iα} Φ(p-δ)) / √2
//! ```
//!
//! with the unobservable global factor `i` on port D dropped.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::wavepacket::{superpose, MomentumWavefunction};

/// Selection probabilities below this leave the port mean undefined.
pub const DARK_PORT_THRESHOLD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    t: f64,
    r: f64,
}

impl BeamSplitter {
    pub fn new(t: f64) -> Result<Self> {
        check_range("t", t, (0.0..=1.0).contains(&t), "0 <= t <= 1")?;
        Ok(Self {
            t,
            r: (1.0 - t * t).sqrt(),
        })
    }

    pub fn balanced() -> Self {
        Self {
            t: FRAC_1_SQRT_2,
            r: FRAC_1_SQRT_2,
        }
    }

    pub fn transmission(&self) -> f64 {
        self.t
    }

    pub fn reflection(&self) -> f64 {
        self.r
    }
}

/// Propagation phase `β` and kick phase `γ`. Only `α = β + γ` is observable.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseSetting {
    pub beta: f64,
    pub gamma: f64,
}

impl PhaseSetting {
    pub fn new(beta: f64, gamma: f64) -> Self {
        Self { beta, gamma }
    }

    pub fn from_alpha(alpha: f64) -> Self {
        Self {
            beta: alpha,
            gamma: 0.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.beta + self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Path {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    C,
    D,
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Path::A => "A",
            Path::B => "B",
        })
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Port::C => "C",
            Port::D => "D",
        })
    }
}

/// The particle inside the interferometer: one momentum wavefunction per arm.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPathState {
    path_a: MomentumWavefunction,
    path_b: MomentumWavefunction,
}

impl TwoPathState {
    pub fn new(path_a: MomentumWavefunction, path_b: MomentumWavefunction) -> Result<Self> {
        if path_a.grid() != path_b.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { path_a, path_b })
    }

    pub fn path(&self, path: Path) -> &MomentumWavefunction {
        match path {
            Path::A => &self.path_a,
            Path::B => &self.path_b,
        }
    }

    pub fn path_a(&self) -> &MomentumWavefunction {
        &self.path_a
    }

    pub fn path_b(&self) -> &MomentumWavefunction {
        &self.path_b
    }

    pub fn norm(&self) -> f64 {
        self.path_a.norm() + self.path_b.norm()
    }

    /// Shifts one arm by `delta`.
    pub fn kick(&self, path: Path, delta: f64) -> Result<Self> {
        let mut out = self.clone();
        match path {
            Path::A => out.path_a = self.path_a.shift(delta)?,
            Path::B => out.path_b = self.path_b.shift(delta)?,
        }
        Ok(out)
    }

    /// Multiplies one arm by `e^{i phase}`.
    pub fn phase(&self, path: Path, phase: f64) -> Self {
        let factor = Complex64::from_polar(1.0, phase);
        let mut out = self.clone();
        match path {
            Path::A => out.path_a = self.path_a.scale(factor),
            Path::B => out.path_b = self.path_b.scale(factor),
        }
        out
    }

    /// Sum over arms of `norm × mean momentum`: the value the port-weighted
    /// means must add up to.
    pub fn weighted_mean_momentum(&self) -> f64 {
        [&self.path_a, &self.path_b]
            .into_iter()
            .map(|wf| {
                let n = wf.norm();
                if n < crate::wavepacket::ZERO_NORM_THRESHOLD {
                    0.0
                } else {
                    n * wf.mean_momentum().unwrap_or(0.0)
                }
            })
            .sum()
    }
}

/// Post-selection statistics for one exit (an interferometer port, or an
/// internal state in the atomic realization).
#[derive(Debug, Clone, PartialEq)]
pub struct PortOutcome<L = Port> {
    pub port: L,
    pub probability: f64,
    /// Normalized state at the exit; `None` for a dark port.
    pub wavefunction: Option<MomentumWavefunction>,
    /// `⟨p⟩_j`; `None` for a dark port.
    pub mean_p: Option<f64>,
}

impl<L> PortOutcome<L> {
    pub fn is_dark(&self) -> bool {
        self.mean_p.is_none()
    }

    /// `P_j ⟨p⟩_j`, taken as zero for a dark port.
    pub fn weighted_mean(&self) -> f64 {
        self.mean_p.map_or(0.0, |m| m * self.probability)
    }
}

/// First beam splitter: `Φ → t Φ|A⟩ + i r Φ|B⟩`.
pub fn split(input: &MomentumWavefunction, bs: &BeamSplitter) -> TwoPathState {
    TwoPathState {
        path_a: input.scale(Complex64::new(bs.t, 0.0)),
        path_b: input.scale(Complex64::new(0.0, bs.r)),
    }
}

/// Impulsive kick `δ` plus phase `e^{iα}` on arm B.
pub fn apply_kick(state: &TwoPathState, delta: f64, phase: PhaseSetting) -> Result<TwoPathState> {
    let kicked = state.kick(Path::B, delta)?;
    let alpha = phase.alpha();
    Ok(if alpha == 0.0 {
        kicked
    } else {
        kicked.phase(Path::B, alpha)
    })
}

/// Balanced second beam splitter. Returns the unnormalized `(Φ_C, Φ_D)`.
pub fn recombine(state: &TwoPathState) -> Result<(MomentumWavefunction, MomentumWavefunction)> {
    let s = FRAC_1_SQRT_2;
    // C: A transmitted + B reflected; D: (A reflected + B transmitted) / i.
    let raw_c = superpose(
        Complex64::new(s, 0.0),
        &state.path_a,
        Complex64::new(0.0, s),
        &state.path_b,
    )?;
    let raw_d = superpose(
        Complex64::new(s, 0.0),
        &state.path_a,
        Complex64::new(0.0, -s),
        &state.path_b,
    )?;
    Ok((raw_c, raw_d))
}

/// Selection probability, normalized state and mean momentum at an exit.
pub fn port_stats<L>(raw: &MomentumWavefunction, port: L) -> PortOutcome<L> {
    let probability = raw.norm();
    if probability < DARK_PORT_THRESHOLD {
        return PortOutcome {
            port,
            probability,
            wavefunction: None,
            mean_p: None,
        };
    }
    let normalized = raw.scale(Complex64::new(probability.sqrt().recip(), 0.0));
    let mean_p = normalized.mean_momentum().ok();
    PortOutcome {
        port,
        probability,
        wavefunction: Some(normalized),
        mean_p,
    }
}

/// `|P_C⟨p⟩_C + P_D⟨p⟩_D - (t²⟨p⟩_in + r²(⟨p⟩_in + δ))|`.
pub fn conservation_residual(
    out_c: &PortOutcome,
    out_d: &PortOutcome,
    t: f64,
    delta: f64,
    mean_in: f64,
) -> f64 {
    let r2 = 1.0 - t * t;
    let expected = t * t * mean_in + r2 * (mean_in + delta);
    (out_c.weighted_mean() + out_d.weighted_mean() - expected).abs()
}

/// Full pipeline for one input state. Returns the port C and port D outcomes.
pub fn run_mzi(
    input: &MomentumWavefunction,
    t: f64,
    delta: f64,
    phase: PhaseSetting,
) -> Result<(PortOutcome, PortOutcome)> {
    let bs = BeamSplitter::new(t)?;
    let inside = apply_kick(&split(input, &bs), delta, phase)?;
    let (raw_c, raw_d) = recombine(&inside)?;
    Ok((port_stats(&raw_c, Port::C), port_stats(&raw_d, Port::D)))
}
