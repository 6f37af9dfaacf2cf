//! Electron grating interferometer at 6 keV with a small capacitor in one
//! arm: how large is the kick compared with the momentum width, and is that
//! enough for a negative mean at port C?
//!
//! ```bash
//! cargo run --example electron_feasibility
//! ```

use qif::cli::cmd_feasibility;
use qif::feasibility::{electron_report, ratio_to_mzi_params, ElectronScenario};
use qif::gaussian_oracle::closed_form_stats;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = ElectronScenario::default();
    println!("{}", cmd_feasibility(scenario)?);

    let report = electron_report(&scenario)?;
    println!();
    for t in [0.6, 0.7, 0.72, 0.75, 0.8, 0.9] {
        let s = closed_form_stats(&ratio_to_mzi_params(&report, t, 0.0)?);
        println!("t = {t:.2}: P_C = {:.5}, <p>_C = {:+.4} W", s.p_c, s.mean_c.unwrap_or(f64::NAN));
    }

    println!();
    for mv in [0.05, 0.1, 0.2, 0.5, 1.0] {
        let r = electron_report(&ElectronScenario {
            voltage: mv * 1e-3,
            ..scenario
        })?;
        println!("{mv:>5} mV -> delta/W = {:.4}", r.ratio);
    }
    Ok(())
}
