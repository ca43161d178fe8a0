// Split a vehicle function into hardware, software, signal-line and
// communication elements and decide which software may move.

use eea_core::abstraction::{abstract_function, ElementaryClass};
use eea_core::corpus;
use eea_core::dsl::parse;

pub fn run_example() -> String {
    let arch = parse(corpus::DERATING).expect("bundled file parses");
    let fa = abstract_function(&arch, "TempDerating").expect("function exists");
    let mut out = String::new();
    for class in [ElementaryClass::Hw, ElementaryClass::Sw, ElementaryClass::IoSignalLine, ElementaryClass::IoCom] {
        let ids: Vec<String> = fa.of_class(class).map(|e| format!("{}@{}", e.id, e.location)).collect();
        out += &format!("{class}: {}\n", ids.join(" "));
    }
    for swc in &fa.relocatable_swcs {
        out += &format!("relocatable: {swc}\n");
    }
    for (id, reasons) in &fa.anchored_elements {
        let r: Vec<&str> = reasons.iter().map(|r| r.as_str()).collect();
        out += &format!("anchored: {id} [{}]\n", r.join(", "));
    }
    out
}

fn main() {
    print!("{}", run_example());
}
