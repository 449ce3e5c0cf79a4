//! The scenario file format: a purpose-built line format in which rational
//! probabilities are first-class and error locations are exact.
//!
//! ```text
//! # format-version: 1
//! scenario sb
//! outcome heads p=1/2 w=1
//! outcome tails p=1/2 w=2 tags=monday,tuesday
//! ```
//!
//! Grammar:
//!
//! ```text
//! file     := header line*
//! header   := "scenario" IDENT
//! line     := "outcome" IDENT "p=" RATIONAL "w=" UINT ["tags=" IDENT ("," IDENT)*]
//! RATIONAL := INT "/" UINT | UINT
//! ```
//!
//! `#` starts a comment running to end of line; blank lines are ignored.
//! Probabilities must be written as rationals — decimals are rejected, so
//! `1/2` can never silently become a float. Weights must fit in 64 bits.
//! The `# format-version: N` comment is the versioning convention for the
//! format; [`render_scenario`] emits it and the parser treats it as any
//! other comment.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{validate_scenario, OutcomeSpec, Scenario, ValidationError};
use crate::rational::Rational;

/// Version emitted in the `# format-version` header comment.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        /// 1-based line number.
        line: usize,
        /// 1-based character column.
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: {source}")]
    Invalid {
        line: usize,
        col: usize,
        #[source]
        source: ValidationError,
    },
}

impl ScenarioParseError {
    pub fn line(&self) -> usize {
        match self {
            Self::Syntax { line, .. } | Self::Invalid { line, .. } => *line,
        }
    }

    pub fn col(&self) -> usize {
        match self {
            Self::Syntax { col, .. } | Self::Invalid { col, .. } => *col,
        }
    }
}

/// Source location of each field of a parsed outcome line, for mapping
/// validation errors back to the file.
struct OutcomeSpans {
    label: (usize, usize),
    prob: (usize, usize),
    tags: (usize, usize),
}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioParseError> {
    let mut header: Option<(String, usize)> = None;
    let mut outcomes = Vec::new();
    let mut spans: Vec<OutcomeSpans> = Vec::new();

    for (line_idx, raw_line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let content = match raw_line.find('#') {
            Some(i) => &raw_line[..i],
            None => raw_line,
        };
        let words = split_words(content);
        if words.is_empty() {
            continue;
        }
        if header.is_none() {
            let (name, _) = parse_header(line_no, &words)?;
            header = Some((name, line_no));
        } else {
            let (outcome, span) = parse_outcome_line(line_no, &words)?;
            outcomes.push(outcome);
            spans.push(span);
        }
    }

    let (name, header_line) = header.ok_or(ScenarioParseError::Syntax {
        line: 1,
        col: 1,
        message: "expected `scenario NAME` header".to_string(),
    })?;

    let scenario = Scenario::new(name, outcomes);
    if let Err(source) = validate_scenario(&scenario) {
        return Err(locate_validation_error(
            source,
            &scenario,
            &spans,
            header_line,
        ));
    }
    Ok(scenario)
}

/// Renders a scenario in the file format; `parse_scenario` inverts it.
pub fn render_scenario(scenario: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# format-version: {FORMAT_VERSION}");
    let _ = writeln!(out, "scenario {}", scenario.name);
    for o in &scenario.outcomes {
        let _ = write!(out, "outcome {} p={} w={}", o.label, o.prob, o.weight);
        // an empty tag list (weight 0) is indistinguishable from no tags
        // in the format, so it is not emitted
        if let Some(tags) = o.tags.as_deref().filter(|t| !t.is_empty()) {
            let _ = write!(out, " tags={}", tags.join(","));
        }
        out.push('\n');
    }
    out
}

/// Words of a line with their 1-based starting columns.
fn split_words(line: &str) -> Vec<(usize, &str)> {
    let mut words = Vec::new();
    let mut start: Option<usize> = None;
    let mut col = 0;
    let mut byte_start = 0;
    for (byte, c) in line.char_indices() {
        col += 1;
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                words.push((s, &line[byte_start..byte]));
            }
        } else if start.is_none() {
            start = Some(col);
            byte_start = byte;
        }
    }
    if let Some(s) = start {
        words.push((s, &line[byte_start..]));
    }
    words
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> ScenarioParseError {
    ScenarioParseError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_header(
    line: usize,
    words: &[(usize, &str)],
) -> Result<(String, usize), ScenarioParseError> {
    let (kw_col, kw) = words[0];
    if kw != "scenario" {
        return Err(syntax(line, kw_col, "expected `scenario NAME` header"));
    }
    let (name_col, name) = *words
        .get(1)
        .ok_or_else(|| syntax(line, kw_col + kw.len(), "missing scenario name"))?;
    if !is_ident(name) {
        return Err(syntax(
            line,
            name_col,
            format!("scenario name `{name}` is not an identifier"),
        ));
    }
    if let Some((col, _)) = words.get(2) {
        return Err(syntax(line, *col, "unexpected input after scenario name"));
    }
    Ok((name.to_string(), line))
}

fn parse_outcome_line(
    line: usize,
    words: &[(usize, &str)],
) -> Result<(OutcomeSpec, OutcomeSpans), ScenarioParseError> {
    let (kw_col, kw) = words[0];
    if kw != "outcome" {
        return Err(syntax(
            line,
            kw_col,
            format!("expected `outcome`, found `{kw}`"),
        ));
    }
    let (label_col, label) = *words
        .get(1)
        .ok_or_else(|| syntax(line, kw_col + kw.len(), "missing outcome label"))?;
    if !is_ident(label) {
        return Err(syntax(
            line,
            label_col,
            format!("outcome label `{label}` is not an identifier"),
        ));
    }

    let (prob_col, prob_word) = *words
        .get(2)
        .ok_or_else(|| syntax(line, label_col + label.len(), "missing `p=RATIONAL` field"))?;
    let prob_text = prob_word
        .strip_prefix("p=")
        .ok_or_else(|| syntax(line, prob_col, "expected `p=RATIONAL`"))?;
    let prob =
        Rational::from_str(prob_text).map_err(|e| syntax(line, prob_col + 2, e.to_string()))?;

    let (weight_col, weight_word) = *words
        .get(3)
        .ok_or_else(|| syntax(line, prob_col + prob_word.len(), "missing `w=UINT` field"))?;
    let weight_text = weight_word
        .strip_prefix("w=")
        .ok_or_else(|| syntax(line, weight_col, "expected `w=UINT`"))?;
    if !weight_text.bytes().all(|b| b.is_ascii_digit()) || weight_text.is_empty() {
        return Err(syntax(
            line,
            weight_col + 2,
            "weight must be an unsigned integer",
        ));
    }
    let weight: u64 = weight_text.parse().map_err(|_| {
        syntax(
            line,
            weight_col + 2,
            "weight exceeds the supported 64-bit range",
        )
    })?;

    let mut tags = None;
    let mut tags_span = (line, weight_col);
    if let Some(&(tags_col, tags_word)) = words.get(4) {
        let tags_text = tags_word
            .strip_prefix("tags=")
            .ok_or_else(|| syntax(line, tags_col, "expected `tags=IDENT,IDENT,...`"))?;
        let mut parsed = Vec::new();
        for part in tags_text.split(',') {
            if !is_ident(part) {
                return Err(syntax(
                    line,
                    tags_col + 5,
                    format!("tag `{part}` is not an identifier"),
                ));
            }
            parsed.push(part.to_string());
        }
        tags = Some(parsed);
        tags_span = (line, tags_col);
        if let Some((col, _)) = words.get(5) {
            return Err(syntax(line, *col, "unexpected input after tags"));
        }
    }

    let outcome = OutcomeSpec {
        label: label.to_string(),
        prob,
        weight,
        tags,
    };
    let spans = OutcomeSpans {
        label: (line, label_col),
        prob: (line, prob_col),
        tags: tags_span,
    };
    Ok((outcome, spans))
}

/// Attaches a source location to a validation error: scenario-wide errors
/// point at the header, per-outcome errors at the offending field.
fn locate_validation_error(
    source: ValidationError,
    scenario: &Scenario,
    spans: &[OutcomeSpans],
    header_line: usize,
) -> ScenarioParseError {
    let position = |label: &str, pick: fn(&OutcomeSpans) -> (usize, usize), nth: usize| {
        scenario
            .outcomes
            .iter()
            .zip(spans)
            .filter(|(o, _)| o.label == label)
            .nth(nth)
            .map(|(_, span)| pick(span))
            .unwrap_or((header_line, 1))
    };
    let (line, col) = match &source {
        ValidationError::EmptyScenario | ValidationError::ProbSumNotOne { .. } => (header_line, 1),
        ValidationError::ProbOutOfRange { label, .. } => position(label, |s| s.prob, 0),
        ValidationError::TagArityMismatch { label, .. } => position(label, |s| s.tags, 0),
        // the second occurrence of the label is the duplicate
        ValidationError::DuplicateLabel { label } => position(label, |s| s.label, 1),
    };
    ScenarioParseError::Invalid { line, col, source }
}
