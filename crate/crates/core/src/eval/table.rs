use serde::Serialize;

use super::stats::{mean, median, round_half_up, std_dev, Deviation};
use super::EvalError;

/// Metrics as rows, submissions as columns; a cell may be empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreTable {
    pub metrics: Vec<String>,
    pub columns: Vec<String>,
    /// `cells[metric][column]`.
    pub cells: Vec<Vec<Option<f64>>>,
    /// Most decimal places written in each column, for presentation.
    pub decimals: Vec<u32>,
}

impl ScoreTable {
    /// Comma-separated text with a header row; the first column names the
    /// metric.
    pub fn from_csv(text: &str) -> Result<ScoreTable, EvalError> {
        let csv_err = |e: csv::Error| EvalError::Csv(e.to_string());
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = reader.headers().map_err(csv_err)?.clone();
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut table = ScoreTable {
            metrics: Vec::new(),
            columns: columns.clone(),
            cells: Vec::new(),
            decimals: vec![0; columns.len()],
        };
        for record in reader.records() {
            let record = record.map_err(csv_err)?;
            let metric = record.get(0).unwrap_or_default().to_string();
            let mut row = Vec::with_capacity(columns.len());
            for (c, column) in columns.iter().enumerate() {
                let raw = record.get(c + 1).unwrap_or_default();
                if raw.is_empty() {
                    row.push(None);
                    continue;
                }
                let value: f64 = raw
                    .parse()
                    .map_err(|_| EvalError::Csv(format!("{metric}/{column}: {raw:?} is not a number")))?;
                if !(1.0..=5.0).contains(&value) {
                    return Err(EvalError::ScoreOutOfRange {
                        metric,
                        column: column.clone(),
                        value,
                    });
                }
                let places = raw.split_once('.').map_or(0, |(_, f)| f.len() as u32);
                table.decimals[c] = table.decimals[c].max(places);
                row.push(Some(value));
            }
            table.metrics.push(metric);
            table.cells.push(row);
        }
        Ok(table)
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        self.cells.iter().filter_map(|row| row[c]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSummary {
    pub column: String,
    pub count: usize,
    /// The metric average.
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    /// `mean` rounded half-up to the column's own precision.
    pub display_mean: f64,
}

/// Per-column statistics over present cells only.
pub fn aggregate(t: &ScoreTable, kind: Deviation) -> Result<Vec<ColumnSummary>, EvalError> {
    t.columns
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let xs = t.column(c);
            if xs.is_empty() {
                return Err(EvalError::EmptyColumn(name.clone()));
            }
            let m = mean(&xs);
            Ok(ColumnSummary {
                column: name.clone(),
                count: xs.len(),
                mean: m,
                median: median(&xs),
                std_dev: std_dev(&xs, kind),
                display_mean: round_half_up(m, t.decimals[c]),
            })
        })
        .collect()
}
