// Graphviz output for the first and last stage of the derating run.

use eea_core::corpus;
use eea_core::dsl::{emit_dot, parse, RenderOptions};
use eea_core::engine::{centralize_function, FeasibilityConfig};

pub fn run_example() -> String {
    let arch = parse(corpus::DERATING).expect("bundled file parses");
    let trace = centralize_function(&arch, "TempDerating", &FeasibilityConfig::default()).expect("valid input");
    let options = RenderOptions::default();
    let mut out = emit_dot(&arch, &options);
    out += &emit_dot(trace.final_architecture(), &RenderOptions { show_hosted: false, ..options });
    out
}

fn main() {
    print!("{}", run_example());
}
