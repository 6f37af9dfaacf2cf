//! Sweeps (t, δ) at α = 0 and writes the port statistics as CSV, ready for a
//! surface plot of P_C, <p>_C and <p>_D.
//!
//! ```bash
//! cargo run --example figure_surfaces -- surfaces.csv
//! ```

use qif::cli::{summarize, sweep_rows, write_csv, Backend, SweepSpec};
use qif::gaussian_oracle::find_min_mean_c;
use qif::GridSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "surfaces.csv".into());
    let spec = SweepSpec::figure_domain(Backend::Oracle);
    let rows = sweep_rows(&spec, GridSpec::default())?;
    write_csv(&rows, std::io::BufWriter::new(std::fs::File::create(&out)?))?;
    println!("wrote {} rows to {out}", rows.len());
    println!("{}", summarize(&rows));

    // How negative <p>_C can be if port C must stay reasonably bright.
    for min_p in [0.0, 0.05, 0.10, 0.20, 0.30] {
        let best = rows
            .iter()
            .filter(|r| r.p_c >= min_p)
            .filter_map(|r| r.mean_c.map(|m| (m, r)))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((m, r)) = best {
            println!("P_C >= {min_p:.2}: min <p>_C = {m:+.3} W (t = {:.3}, delta = {:.3} W)", r.t, r.delta);
        }
    }

    let fine = find_min_mean_c((0.5, 0.99), (0.001, 0.5), 0.0, 800)?;
    println!(
        "refined minimum: {:+.4} W at t = {:.4}, delta = {:.4} W (bound -1/sqrt 2 = {:.4})",
        fine.value,
        fine.t,
        fine.delta_over_w,
        -std::f64::consts::FRAC_1_SQRT_2
    );
    Ok(())
}
