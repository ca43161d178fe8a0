// Parse a model, report integrity violations with their source positions,
// and print the canonical form.

use eea_core::corpus;
use eea_core::dsl::{parse_document, serialize};

const BROKEN: &str = "ecu A { role: specialized; pos: (0, 0, 0); }
swc S { function: F; host: A; os: event_driven; outputs: [x]; }
";

pub fn run_example() -> String {
    let mut out = String::new();
    let doc = parse_document(corpus::DERATING, "derating.eea").expect("bundled file parses");
    out += &format!("derating.eea: {} violation(s)\n", doc.violations().len());
    out += &serialize(&doc.architecture);

    let doc = parse_document(BROKEN, "broken.eea").expect("syntax is fine");
    for (span, v) in doc.violations() {
        let at = span.map_or_else(|| "broken.eea".to_string(), |s| s.to_string());
        out += &format!("{at}: {v}\n");
    }

    let err = parse_document("ecu A { role: banana; }", "typo.eea").unwrap_err();
    out += &format!("{err}\n");
    out
}

fn main() {
    print!("{}", run_example());
}
