// Compare the stages of a centralization run: fewer ECUs and channels,
// longer analog wiring, and a concentrated single point of failure.

use eea_core::analysis::{compare, spof_analysis};
use eea_core::corpus;
use eea_core::dsl::parse;
use eea_core::engine::{centralize_function, FeasibilityConfig};

pub fn run_example() -> String {
    let cfg = FeasibilityConfig::default();
    let arch = parse(corpus::DERATING).expect("bundled file parses");
    let trace = centralize_function(&arch, "TempDerating", &cfg).expect("valid input");
    let variants: Vec<(String, _)> =
        trace.stages.iter().enumerate().map(|(n, s)| (format!("stage_{n}"), s.architecture.clone())).collect();
    let mut out = compare(&variants, &cfg).expect("at least one stage").to_markdown();
    for (label, arch) in &variants {
        let spofs: Vec<String> = spof_analysis(arch).into_iter().map(|e| e.ecu).collect();
        out += &format!("{label} single points of failure: {}\n", spofs.join(", "));
    }
    out
}

fn main() {
    print!("{}", run_example());
}
