// Stepwise centralization of the derating function toward its domain
// controller, one stage per rewrite round.

use eea_core::corpus;
use eea_core::dsl::parse;
use eea_core::engine::{centralize_function, FeasibilityConfig};

pub fn run_example() -> String {
    let arch = parse(corpus::DERATING).expect("bundled file parses");
    let trace = centralize_function(&arch, "TempDerating", &FeasibilityConfig::default()).expect("valid input");
    trace.to_markdown()
}

fn main() {
    print!("{}", run_example());
}
