// ECU and network counts for three production vehicles.

use eea_core::analysis::fleet_summary;
use eea_core::corpus;
use eea_core::dsl::parse;

pub fn run_example() -> String {
    let fleet: Vec<(String, _)> = corpus::FLEET
        .iter()
        .map(|(label, text)| (label.to_string(), parse(text).expect("bundled file parses")))
        .collect();
    fleet_summary(&fleet).to_markdown()
}

fn main() {
    print!("{}", run_example());
}
