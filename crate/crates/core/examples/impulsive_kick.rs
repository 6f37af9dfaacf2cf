//! Checks the rigid-kick model: a linear potential switched on for τ kicks
//! the packet by Fτ without distortion only while τ is short compared with
//! the dispersion time m/W².
//!
//! ```bash
//! cargo run --example impulsive_kick
//! ```

use qif::gaussian_oracle::{closed_form_stats, MziParams};
use qif::schrodinger::{apply_impulse_momentum, kick_fidelity, run_mzi_with_pulse, ImpulsePulse, PropagationConfig};
use qif::{gaussian_init, GaussianParams, GridSpec, PhaseSetting};

fn main() -> qif::Result<()> {
    let input = gaussian_init(GaussianParams::default(), GridSpec::default())?;
    let config = PropagationConfig::new(1.0)?;
    let delta = 0.2;

    println!("{:>8} {:>12} {:>14}", "tau", "fidelity", "shift - F tau");
    for tau in [0.001, 0.01, 0.1, 0.5, 1.0, 2.0] {
        let pulse = ImpulsePulse::for_kick(delta, tau, 200)?;
        let after = apply_impulse_momentum(&input, &pulse, &config)?;
        let fidelity = kick_fidelity(&input, &after, delta)?;
        let shift = after.mean_momentum()? - input.mean_momentum()?;
        println!("{tau:>8} {fidelity:>12.8} {:>14.2e}", shift - delta);
    }

    let pulse = ImpulsePulse::for_kick(delta, 0.01, 100)?;
    let (c, _) = run_mzi_with_pulse(&input, 0.85, &pulse, &config, PhaseSetting::default())?;
    let exact = closed_form_stats(&MziParams::new(0.85, delta, 0.0)?);
    println!(
        "interferometer with a real pulse: P_C = {:.6} (rigid {:.6}), <p>_C = {:+.6} (rigid {:+.6})",
        c.probability,
        exact.p_c,
        c.mean_p.unwrap(),
        exact.mean_c.unwrap()
    );
    Ok(())
}
