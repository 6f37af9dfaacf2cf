//! SI-unit estimates for an electron interferometer with a capacitor in one
//! arm.
//!
//! The slit of width `a` is modelled as a Gaussian with position standard
//! deviation `σ₀ = a/2`; the momentum width is the minimum-uncertainty value
//! `W = ħ/(2σ₀)` and the kick is the transverse impulse of a uniform field
//! `E = V/d` over the transit time `L/v`.

use crate::error::{check_range, Error, Result};
use crate::gaussian_oracle::MziParams;

/// CODATA 2018 values.
pub mod constants {
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Electron mass, kg.
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    /// Elementary charge, C (also J per eV).
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    /// Electron rest energy, eV.
    pub const ELECTRON_REST_ENERGY_EV: f64 = 510_998.950_00;
}

/// Kinetic energies above this fraction of the rest energy are rejected.
pub const MAX_RELATIVISTIC_FRACTION: f64 = 0.05;

/// Path separation quoted for the 100 nm grating interferometer at 6 keV.
pub const GRATING_PATH_SEPARATION_M: f64 = 55e-6;
/// Distance from the grating at which that separation is reached.
pub const GRATING_SEPARATION_DISTANCE_M: f64 = 0.35;

pub fn ev_to_joule(ev: f64) -> f64 {
    ev * constants::ELEMENTARY_CHARGE
}

pub fn joule_to_ev(joule: f64) -> f64 {
    joule / constants::ELEMENTARY_CHARGE
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectronScenario {
    pub kinetic_energy_ev: f64,
    pub slit_width: f64,
    pub drift_distance: f64,
    pub plate_separation: f64,
    pub plate_length: f64,
    pub voltage: f64,
}

impl ElectronScenario {
    /// 6 keV beam, 1.5 μm slit, 1 m drift, 1 mm × 1 cm capacitor at 0.2 mV.
    pub fn grating_interferometer() -> Self {
        Self {
            kinetic_energy_ev: 6_000.0,
            slit_width: 1.5e-6,
            drift_distance: 1.0,
            plate_separation: 1e-3,
            plate_length: 1e-2,
            voltage: 0.2e-3,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| check_range(name, v, v > 0.0, "> 0").map(|_| ());
        positive("kinetic_energy_ev", self.kinetic_energy_ev)?;
        positive("slit_width", self.slit_width)?;
        positive("drift_distance", self.drift_distance)?;
        positive("plate_separation", self.plate_separation)?;
        positive("plate_length", self.plate_length)?;
        check_range("voltage", self.voltage, self.voltage >= 0.0, ">= 0")?;
        if self.kinetic_energy_ev > MAX_RELATIVISTIC_FRACTION * constants::ELECTRON_REST_ENERGY_EV {
            return Err(Error::Relativistic {
                energy_ev: self.kinetic_energy_ev,
            });
        }
        Ok(())
    }
}

impl Default for ElectronScenario {
    fn default() -> Self {
        Self::grating_interferometer()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    /// m/s
    pub speed: f64,
    /// kg m/s
    pub momentum: f64,
    /// s
    pub time_of_flight: f64,
    /// Position standard deviation right after the slit, m.
    pub initial_width: f64,
    /// Position standard deviation after the drift, m.
    pub beam_width_at_drift: f64,
    /// `W`, kg m/s.
    pub momentum_width: f64,
    /// `δ`, kg m/s.
    pub kick: f64,
    /// `δ / W`.
    pub ratio: f64,
}

pub fn electron_report(s: &ElectronScenario) -> Result<FeasibilityReport> {
    use constants::{ELECTRON_MASS as M, ELEMENTARY_CHARGE as E, HBAR};

    s.validate()?;
    let energy = ev_to_joule(s.kinetic_energy_ev);
    let momentum = (2.0 * M * energy).sqrt();
    let speed = momentum / M;
    let time_of_flight = s.drift_distance / speed;
    let sigma0 = s.slit_width / 2.0;
    let spread = HBAR * time_of_flight / (2.0 * M * sigma0 * sigma0);
    let beam_width_at_drift = sigma0 * (1.0 + spread * spread).sqrt();
    let momentum_width = HBAR / (2.0 * sigma0);
    let field = s.voltage / s.plate_separation;
    let kick = E * field * s.plate_length / speed;
    Ok(FeasibilityReport {
        speed,
        momentum,
        time_of_flight,
        initial_width: sigma0,
        beam_width_at_drift,
        momentum_width,
        kick,
        ratio: kick / momentum_width,
    })
}

/// Interferometer parameters corresponding to a feasibility report.
pub fn ratio_to_mzi_params(report: &FeasibilityReport, t: f64, alpha: f64) -> Result<MziParams> {
    MziParams::new(t, report.ratio, alpha)
}
