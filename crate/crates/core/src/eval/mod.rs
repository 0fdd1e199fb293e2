//! Evaluation metrics: correctness category, knowledge usage, score-table
//! aggregation and the paired t-test.

mod stats;
mod table;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use stats::{critical_t, mean, median, paired_t_test, round_half_up, std_dev, Deviation, TTest};
pub use table::{aggregate, ColumnSummary, ScoreTable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("prediction is empty")]
    EmptyPrediction,
    #[error("column {0} has no scores")]
    EmptyColumn(String),
    #[error("samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("a paired test needs at least two pairs")]
    TooFewPairs,
    #[error("no critical value for alpha {0}; use 0.05 or 0.01")]
    UnsupportedAlpha(String),
    #[error("no critical value for {0} degrees of freedom; the table covers 1..=30")]
    UnsupportedDegrees(usize),
    #[error("score {value} for {metric}/{column} is outside 1..=5")]
    ScoreOutOfRange { metric: String, column: String, value: f64 },
    #[error("score table: {0}")]
    Csv(String),
}

impl EvalError {
    pub fn code(&self) -> &'static str {
        match self {
            EvalError::EmptyPrediction => "EMPTY_PREDICTION",
            EvalError::EmptyColumn(_) => "EMPTY_COLUMN",
            EvalError::LengthMismatch(..) => "LENGTH_MISMATCH",
            EvalError::TooFewPairs => "TOO_FEW_PAIRS",
            EvalError::UnsupportedAlpha(_) => "UNSUPPORTED_ALPHA",
            EvalError::UnsupportedDegrees(_) => "UNSUPPORTED_DEGREES",
            EvalError::ScoreOutOfRange { .. } => "SCORE_OUT_OF_RANGE",
            EvalError::Csv(_) => "CSV_ERROR",
        }
    }
}

/// What a pipeline concluded and which scenes it leaned on. Suspects and
/// scenes are IRIs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExplanationTrace {
    pub pipeline: String,
    pub conclusion: Vec<String>,
    pub scenes_used: BTreeSet<String>,
    #[serde(default)]
    pub steps: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correctness {
    Correct,
    CorrectWithNote,
    Incorrect,
}

/// Exactly the truth is correct; the truth among others earns a note.
pub fn correctness<S: Ord>(predicted: &BTreeSet<S>, truth: &S) -> Result<Correctness, EvalError> {
    if predicted.is_empty() {
        return Err(EvalError::EmptyPrediction);
    }
    Ok(match (predicted.contains(truth), predicted.len()) {
        (true, 1) => Correctness::Correct,
        (true, _) => Correctness::CorrectWithNote,
        (false, _) => Correctness::Incorrect,
    })
}

pub fn knowledge_usage(t: &ExplanationTrace) -> usize {
    t.scenes_used.len()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub pipeline: String,
    pub conclusion: Vec<String>,
    pub correctness: Option<Correctness>,
    pub knowledge_usage: usize,
}

/// Correctness is judged only when `truth` is given.
pub fn evaluate_trace(t: &ExplanationTrace, truth: Option<&str>) -> Result<TraceReport, EvalError> {
    let predicted: BTreeSet<&str> = t.conclusion.iter().map(String::as_str).collect();
    let correctness = truth.map(|x| correctness(&predicted, &x)).transpose()?;
    Ok(TraceReport {
        pipeline: t.pipeline.clone(),
        conclusion: t.conclusion.clone(),
        correctness,
        knowledge_usage: knowledge_usage(t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn categories() {
        let one = BTreeSet::from(["Roylott"]);
        let two = BTreeSet::from(["Roylott", "Helen"]);
        assert_eq!(correctness(&one, &"Roylott").unwrap(), Correctness::Correct);
        assert_eq!(correctness(&two, &"Roylott").unwrap(), Correctness::CorrectWithNote);
        assert_eq!(
            correctness(&BTreeSet::from(["Roma"]), &"Roylott").unwrap(),
            Correctness::Incorrect
        );
        assert_eq!(
            correctness(&BTreeSet::<&str>::new(), &"x").unwrap_err().code(),
            "EMPTY_PREDICTION"
        );
    }

    #[test]
    fn usage_is_a_set_size() {
        let mut t = ExplanationTrace::default();
        assert_eq!(knowledge_usage(&t), 0);
        t.scenes_used.extend(["s1", "s2", "s2"].map(String::from));
        assert_eq!(knowledge_usage(&t), 2);
    }
}
