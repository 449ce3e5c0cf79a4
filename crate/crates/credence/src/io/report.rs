//! Report rendering: stable JSON and aligned human-readable tables.
//!
//! JSON field names match the report types' field names exactly, and
//! rationals appear as `{"num", "den", "decimal"}` objects. Rendering is
//! deterministic: identical reports give byte-identical text.

use serde::Serialize;

use crate::betting::BetReport;
use crate::exact::ExactResult;
use crate::mc::SimReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Table,
}

/// Any of the engine reports, for uniform rendering.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Exact(ExactResult),
    Sim(SimReport),
    Bet(BetReport),
}

impl From<ExactResult> for Report {
    fn from(r: ExactResult) -> Self {
        Report::Exact(r)
    }
}

impl From<SimReport> for Report {
    fn from(r: SimReport) -> Self {
        Report::Sim(r)
    }
}

impl From<BetReport> for Report {
    fn from(r: BetReport) -> Self {
        Report::Bet(r)
    }
}

pub fn render_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => to_json(report),
        ReportFormat::Table => match report {
            Report::Exact(r) => exact_table(std::slice::from_ref(r)),
            Report::Sim(r) => sim_table(r),
            Report::Bet(r) => bet_table(r),
        },
    }
}

/// Renders the two frame values side by side, one row per frame.
pub fn render_comparison(results: &[ExactResult], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => to_json(&results),
        ReportFormat::Table => exact_table(results),
    }
}

pub fn parse_exact_result(text: &str) -> Result<ExactResult, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn parse_sim_report(text: &str) -> Result<SimReport, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn parse_bet_report(text: &str) -> Result<BetReport, serde_json::Error> {
    serde_json::from_str(text)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialise")
}

fn exact_table(results: &[ExactResult]) -> String {
    let rows = results
        .iter()
        .map(|r| {
            vec![
                r.scenario.clone(),
                r.frame.to_string(),
                r.query.clone(),
                r.value.to_string(),
                r.value.to_f64().to_string(),
            ]
        })
        .collect::<Vec<_>>();
    table(&["scenario", "frame", "query", "value", "decimal"], &rows)
}

fn sim_table(r: &SimReport) -> String {
    table(
        &[
            "trials",
            "seed",
            "hits",
            "total",
            "estimate",
            "std_error",
            "ci95_low",
            "ci95_high",
        ],
        &[vec![
            r.trials.to_string(),
            r.seed.to_string(),
            r.hits.to_string(),
            r.total.to_string(),
            r.estimate.to_string(),
            r.std_error.to_string(),
            r.ci95.0.to_string(),
            r.ci95.1.to_string(),
        ]],
    )
}

fn bet_table(r: &BetReport) -> String {
    table(
        &[
            "price",
            "questions",
            "wins",
            "avg_profit_per_question",
            "total_profit",
        ],
        &[vec![
            r.price.to_string(),
            r.questions.to_string(),
            r.wins.to_string(),
            r.avg_profit_per_question.to_string(),
            r.total_profit.to_string(),
        ]],
    )
}

/// Left-aligned columns padded to the widest cell, two spaces apart.
fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut write_row = |cells: &mut dyn Iterator<Item = &str>| {
        let line: Vec<String> = cells
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    write_row(&mut headers.iter().copied());
    for row in rows {
        write_row(&mut row.iter().map(String::as_str));
    }
    out
}
