//! Trade-off quantification for architecture variants: counts, wire length,
//! cut leads, bus load, hop latency, single points of failure, constraint
//! checks and style classification.

mod classify;
mod constraints;
mod metrics;
mod report;
mod spof;

pub use classify::{classify, Style, StyleClassification};
pub use constraints::{check_constraints, ConstraintRule, ConstraintViolation};
pub use metrics::{compute_metrics, MetricsReport};
pub use report::{
    compare, fleet_summary, AnalysisError, ComparisonReport, ComparisonRow, FleetRow, FleetSummary, MetricDelta,
};
pub use spof::{function_operational, spof_analysis, SpofEntry};
