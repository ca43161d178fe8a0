//! Bundled example architectures. Positions are invented fixture data.

/// Three-ECU charging-inlet derating function in a domain-oriented layout.
pub const DERATING: &str = include_str!("../data/derating.eea");
pub const ID4: &str = include_str!("../data/id4.eea");
pub const MODEL_Y: &str = include_str!("../data/model_y.eea");
pub const MACH_E: &str = include_str!("../data/mach_e.eea");

/// Fleet files with their labels, in report order.
pub const FLEET: [(&str, &str); 3] = [("id4", ID4), ("model_y", MODEL_Y), ("mach_e", MACH_E)];
