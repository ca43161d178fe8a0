// A tight analog-length limit stops centralization at a zone-oriented
// layout: the sensors stay behind a gateway instead of running long lines.

use eea_core::config::Settings;
use eea_core::corpus;
use eea_core::dsl::parse;
use eea_core::engine::centralize_function;
use eea_core::model::EcuRole;

pub fn run_example() -> String {
    let settings = Settings::load(None, &["limits.max_analog_length.B=0.1".to_string()]).expect("valid override");
    let arch = parse(corpus::DERATING).expect("bundled file parses");
    let trace = centralize_function(&arch, "TempDerating", &settings.limits).expect("valid input");
    let last = trace.final_architecture();
    let gateways: Vec<&str> =
        last.ecus.values().filter(|e| e.role == EcuRole::ZoneGateway).map(|e| e.id.as_str()).collect();
    let mut out = format!(
        "stages: {}\nterminal_reason: {}\nzone gateways: {}\n",
        trace.stages.len(),
        trace.terminal_reason,
        gateways.join(", ")
    );
    for b in &trace.blocked {
        out += &format!("blocked: {b}\n");
    }
    out
}

fn main() {
    print!("{}", run_example());
}
