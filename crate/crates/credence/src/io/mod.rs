//! Parsing and serialisation: scenario files, query expressions, reports.

mod query;
mod report;
mod scenario;

pub use query::{parse_query, QueryParseError};
pub use report::{
    parse_bet_report, parse_exact_result, parse_sim_report, render_comparison, render_report,
    Report, ReportFormat,
};
pub use scenario::{parse_scenario, render_scenario, ScenarioParseError, FORMAT_VERSION};
