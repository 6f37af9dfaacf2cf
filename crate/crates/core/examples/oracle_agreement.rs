//! Grid pipeline against the closed-form Gaussian results at random
//! parameters, for a few grid sizes.
//!
//! ```bash
//! cargo run --release --example oracle_agreement
//! ```

use qif::cli::cmd_oracle_check;
use qif::GridSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, p_max) in [(256, 16.0), (1024, 16.0), (4096, 16.0), (8192, 32.0)] {
        let check = cmd_oracle_check(500, 42, GridSpec::symmetric(n, p_max)?)?;
        println!("n = {n:>5}, p_max = {p_max:>4}: max deviation {:.2e}", check.max_deviation);
    }
    Ok(())
}
