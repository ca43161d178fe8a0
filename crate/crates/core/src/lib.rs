//! Typed electrical/electronic (E/E) architecture graphs with a textual
//! format, per-function abstraction into hardware, software, signal-line and
//! communication elements, stepwise centralization toward domain controllers,
//! and trade-off analysis of the resulting variants.

pub mod abstraction;
pub mod analysis;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod dsl;
pub mod engine;
pub mod model;
pub mod topology;

pub use abstraction::{abstract_function, assess_relocatability, ElementaryClass, FunctionAbstraction};
pub use analysis::{classify, compare, compute_metrics, spof_analysis, MetricsReport, Style};
pub use config::Settings;
pub use dsl::{emit_dot, parse, serialize, ParseError};
pub use engine::{centralize_all, centralize_function, centralize_step, FeasibilityConfig, StageTrace};
pub use model::{validate, Architecture};
