//! A unit Gaussian enters an interferometer with t = 0.85, arm B is kicked
//! by +0.2 W, and the particles leaving port C end up with negative mean
//! momentum.
//!
//! ```bash
//! cargo run --example anomalous_momentum
//! ```

use qif::interferometer::{apply_kick, split, BeamSplitter};
use qif::{gaussian_init, run_mzi, GaussianParams, GridSpec, PhaseSetting};

fn main() -> qif::Result<()> {
    let grid = GridSpec::default();
    let input = gaussian_init(GaussianParams::default(), grid)?;
    let (t, delta) = (0.85, 0.2);

    let (c, d) = run_mzi(&input, t, delta, PhaseSetting::default())?;
    println!("port C: P = {:.4}, <p> = {:+.4} W", c.probability, c.mean_p.unwrap());
    println!("port D: P = {:.4}, <p> = {:+.4} W", d.probability, d.mean_p.unwrap());

    let inside = apply_kick(&split(&input, &BeamSplitter::new(t)?), delta, PhaseSetting::default())?;
    println!("mean momentum before recombination: {:+.4} W", inside.weighted_mean_momentum());
    println!(
        "P_C <p>_C + P_D <p>_D = {:+.4} W",
        c.weighted_mean() + d.weighted_mean()
    );

    // Port C amplitude around the peak.
    let wf = c.wavefunction.as_ref().unwrap();
    let step = grid.n_points() / 64;
    for k in (0..grid.n_points()).step_by(step) {
        let p = grid.momentum(k);
        if p.abs() <= 3.0 {
            let a = wf.amplitudes()[k].re;
            println!("{p:+6.2} {a:+.4} {}", "#".repeat((a.abs() * 60.0) as usize));
        }
    }
    Ok(())
}
