//! Two-level atom realization of the interferometer.
//!
//! Internal states `|A⟩` and `|B⟩` play the role of the two arms: a
//! microwave pulse is the beam splitter, a state-dependent Stern-Gerlach
//! impulse is the arm force, and selecting atoms in `|A⟩` is the
//! post-selection.
//!
//! Pulses are real rotations
//!
//! ```text
//! |A⟩ → t|A⟩ + s|B⟩,   |B⟩ → -s|A⟩ + t|B⟩,   s = √(1-t²)
//! ```
//!
//! so `t = 1/√2` is the π/2 pulse `|A⟩ → (|A⟩+|B⟩)/√2`, `|B⟩ → (-|A⟩+|B⟩)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{check_range, Error, Result};
use crate::interferometer::{port_stats, PortOutcome};
use crate::wavepacket::{superpose, MomentumWavefunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InternalState {
    A,
    B,
}

impl fmt::Display for InternalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InternalState::A => "A",
            InternalState::B => "B",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinorWavefunction {
    comp_a: MomentumWavefunction,
    comp_b: MomentumWavefunction,
}

impl SpinorWavefunction {
    pub fn new(comp_a: MomentumWavefunction, comp_b: MomentumWavefunction) -> Result<Self> {
        if comp_a.grid() != comp_b.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { comp_a, comp_b })
    }

    /// All atoms in `|A⟩` with momentum state `wf`.
    pub fn pure_a(wf: MomentumWavefunction) -> Self {
        let comp_b = MomentumWavefunction::zeros(*wf.grid());
        Self { comp_a: wf, comp_b }
    }

    pub fn component(&self, which: InternalState) -> &MomentumWavefunction {
        match which {
            InternalState::A => &self.comp_a,
            InternalState::B => &self.comp_b,
        }
    }

    pub fn norm(&self) -> f64 {
        self.comp_a.norm() + self.comp_b.norm()
    }
}

/// State-dependent momentum kicks.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SgKick {
    pub delta_a: f64,
    pub delta_b: f64,
}

impl SgKick {
    pub fn new(delta_a: f64, delta_b: f64) -> Self {
        Self { delta_a, delta_b }
    }

    /// The kick that transfers the opposite momentum.
    pub fn reversed(&self) -> Self {
        Self {
            delta_a: -self.delta_a,
            delta_b: -self.delta_b,
        }
    }
}

pub fn microwave_pulse(state: &SpinorWavefunction, t_coeff: f64) -> Result<SpinorWavefunction> {
    check_range("t_coeff", t_coeff, (0.0..=1.0).contains(&t_coeff), "0 <= t <= 1")?;
    let t = Complex64::new(t_coeff, 0.0);
    let s = Complex64::new((1.0 - t_coeff * t_coeff).sqrt(), 0.0);
    Ok(SpinorWavefunction {
        comp_a: superpose(t, &state.comp_a, -s, &state.comp_b)?,
        comp_b: superpose(s, &state.comp_a, t, &state.comp_b)?,
    })
}

pub fn stern_gerlach(state: &SpinorWavefunction, kick: &SgKick) -> Result<SpinorWavefunction> {
    Ok(SpinorWavefunction {
        comp_a: state.comp_a.shift(kick.delta_a)?,
        comp_b: state.comp_b.shift(kick.delta_b)?,
    })
}

/// Keeps only atoms found in `which`.
pub fn select_internal(
    state: &SpinorWavefunction,
    which: InternalState,
) -> PortOutcome<InternalState> {
    port_stats(state.component(which), which)
}

/// Pulse `t`, kick `(δ_a, δ_b)`, π/2 pulse, reversed kick. Returns the state
/// before selection.
pub fn protocol_state(
    input: &MomentumWavefunction,
    t_coeff: f64,
    delta_a: f64,
    delta_b: f64,
) -> Result<SpinorWavefunction> {
    let kick = SgKick::new(delta_a, delta_b);
    let state = SpinorWavefunction::pure_a(input.clone());
    let state = microwave_pulse(&state, t_coeff)?;
    let state = stern_gerlach(&state, &kick)?;
    let state = microwave_pulse(&state, FRAC_1_SQRT_2)?;
    stern_gerlach(&state, &kick.reversed())
}

/// Full protocol with selection of `|A⟩`. Equivalent to port C of the
/// interferometer with `δ = δ_b - δ_a` and `α = 0`.
pub fn run_protocol(
    input: &MomentumWavefunction,
    t_coeff: f64,
    delta_a: f64,
    delta_b: f64,
) -> Result<PortOutcome<InternalState>> {
    let state = protocol_state(input, t_coeff, delta_a, delta_b)?;
    Ok(select_internal(&state, InternalState::A))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::{run_mzi, PhaseSetting};
    use crate::wavepacket::{gaussian_init, GaussianParams, GridSpec};

    fn unit() -> MomentumWavefunction {
        gaussian_init(GaussianParams::default(), GridSpec::default()).unwrap()
    }

    fn max_diff(a: &MomentumWavefunction, b: &MomentumWavefunction) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn pulse_identity_and_range() {
        let st = SpinorWavefunction::new(unit(), unit().shift(0.3).unwrap()).unwrap();
        assert_eq!(microwave_pulse(&st, 1.0).unwrap(), st);
        assert!(microwave_pulse(&st, 1.2).is_err());
    }

    #[test]
    fn half_pulse_convention() {
        let wf = unit();
        let s = FRAC_1_SQRT_2;
        let from_a = microwave_pulse(&SpinorWavefunction::pure_a(wf.clone()), s).unwrap();
        assert!(max_diff(from_a.component(InternalState::A), &wf.scale(Complex64::new(s, 0.0))) < 1e-15);
        assert!(max_diff(from_a.component(InternalState::B), &wf.scale(Complex64::new(s, 0.0))) < 1e-15);

        let pure_b = SpinorWavefunction::new(MomentumWavefunction::zeros(*wf.grid()), wf.clone()).unwrap();
        let from_b = microwave_pulse(&pure_b, s).unwrap();
        assert!(max_diff(from_b.component(InternalState::A), &wf.scale(Complex64::new(-s, 0.0))) < 1e-15);
        assert!(max_diff(from_b.component(InternalState::B), &wf.scale(Complex64::new(s, 0.0))) < 1e-15);
    }

    #[test]
    fn pulses_compose_as_rotations() {
        // Brute-force 2x2 check: R(t)R(t') = R(tt' - ss').
        let (t1, t2) = (0.85f64, 0.4f64);
        let (s1, s2) = ((1.0 - t1 * t1).sqrt(), (1.0 - t2 * t2).sqrt());
        let m = |t: f64, s: f64| [[t, -s], [s, t]];
        let (a, b) = (m(t1, s1), m(t2, s2));
        let mut prod = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                prod[i][j] = (0..2).map(|k| b[i][k] * a[k][j]).sum();
            }
        }
        let t12 = t1 * t2 - s1 * s2;
        assert!((prod[0][0] - t12).abs() < 1e-15);

        let wf = unit();
        let st = SpinorWavefunction::pure_a(wf.clone());
        let twice = microwave_pulse(&microwave_pulse(&st, t1).unwrap(), t2).unwrap();
        let amp = Complex64::new(prod[0][0], 0.0);
        assert!(max_diff(twice.component(InternalState::A), &wf.scale(amp)) < 1e-15);
        let amp_b = Complex64::new(prod[1][0], 0.0);
        assert!(max_diff(twice.component(InternalState::B), &wf.scale(amp_b)) < 1e-15);
        assert!((twice.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn stern_gerlach_examples() {
        let st = SpinorWavefunction::pure_a(unit());
        assert_eq!(stern_gerlach(&st, &SgKick::default()).unwrap(), st);
        let kicked = stern_gerlach(&st, &SgKick::new(0.3, 0.0)).unwrap();
        assert!((kicked.component(InternalState::A).mean_momentum().unwrap() - 0.3).abs() < 1e-9);

        let (t, da, db) = (0.85, 0.1, 0.3);
        let split = microwave_pulse(&st, t).unwrap();
        let kicked = stern_gerlach(&split, &SgKick::new(da, db)).unwrap();
        let wf = unit();
        let s = (1.0 - t * t).sqrt();
        let exp_a = wf.shift(da).unwrap().scale(Complex64::new(t, 0.0));
        let exp_b = wf.shift(db).unwrap().scale(Complex64::new(s, 0.0));
        assert!(max_diff(kicked.component(InternalState::A), &exp_a) < 1e-13);
        assert!(max_diff(kicked.component(InternalState::B), &exp_b) < 1e-13);
    }

    #[test]
    fn selection_of_pure_state() {
        let st = SpinorWavefunction::pure_a(unit());
        let a = select_internal(&st, InternalState::A);
        assert!((a.probability - 1.0).abs() < 1e-10);
        let b = select_internal(&st, InternalState::B);
        assert_eq!(b.probability, 0.0);
        assert!(b.is_dark());
    }

    #[test]
    fn protocol_reproduces_port_c() {
        let wf = unit();
        let out = run_protocol(&wf, 0.85, 0.1, 0.3).unwrap();
        assert!((out.probability - 0.0567).abs() < 1e-3);
        assert!((out.mean_p.unwrap() + 0.2925).abs() < 1e-3);

        let (c, _) = run_mzi(&wf, 0.85, 0.2, PhaseSetting::default()).unwrap();
        assert!((out.probability - c.probability).abs() < 1e-12);
        assert!(max_diff(out.wavefunction.as_ref().unwrap(), c.wavefunction.as_ref().unwrap()) < 1e-10);
    }

    #[test]
    fn equal_kicks_give_zero_mean() {
        let out = run_protocol(&unit(), 0.6, 0.4, 0.4).unwrap();
        assert!(out.mean_p.unwrap().abs() < 1e-12);
        let (t, s) = (0.6f64, 0.8f64);
        assert!((out.probability - (t - s).powi(2) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn protocol_is_unitary() {
        let st = protocol_state(&unit(), 0.37, -0.4, 1.1).unwrap();
        assert!((st.norm() - 1.0).abs() < 1e-10);
    }
}
