//! Parses and runs a `.qif` experiment description.
//!
//! ```bash
//! cargo run --example circuit_program
//! cargo run --example circuit_program -- crates/core/examples/programs/canonical.qif
//! ```

use qif::circuitfile::{execute, parse, serialize};
use qif::GridSpec;

const PROGRAM: &str = "\
# both ports, with the conservation check
source width=1 mean=0
bs t=0.85
kick path=B delta=0.2
phase path=B alpha=0
recombine
select port=C
report moments
report conservation
select port=D
report moments
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => PROGRAM.to_string(),
    };
    let program = parse(&text)?;
    print!("{}", serialize(&program));
    println!("--");
    print!("{}", execute(&program, GridSpec::default())?.text);

    println!("--");
    let broken = "source width=1 mean=0\nbs t=0.85\nkick path=Q delta=0.2\n";
    match parse(broken) {
        Ok(_) => unreachable!(),
        Err(e) => println!("{e}"),
    }
    Ok(())
}
