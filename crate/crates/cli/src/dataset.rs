//! Reading forecast datasets from CSV.
//!
//! Expected header: `match_id,forecaster_id,ga1,ga2,gf1,gf2`. Extra columns
//! are ignored; column order is free. Row numbers in errors count data rows
//! from 1 (the header is not counted).

use std::fs::File;
use std::io::Read;
use std::path::Path;

use scorecast::model::{parse_goals, MatchRecord, Score};

use crate::CliError;

pub const COLUMNS: [&str; 6] = ["match_id", "forecaster_id", "ga1", "ga2", "gf1", "gf2"];

pub fn read_path(path: &Path) -> Result<Vec<MatchRecord>, CliError> {
    let file = File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::FileNotFound(path.display().to_string()),
        _ => CliError::Io(e.to_string()),
    })?;
    read(file)
}

pub fn read<R: Read>(input: R) -> Result<Vec<MatchRecord>, CliError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(|e| CliError::Csv { row: 0, message: e.to_string() })?.clone();
    let mut index = [0usize; 6];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = headers.iter().position(|h| h == name).ok_or_else(|| CliError::MissingColumn(name.to_string()))?;
    }

    let mut records = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| CliError::Csv { row: row_no, message: e.to_string() })?;
        let field = |col: usize| row.get(index[col]).unwrap_or("");
        let text = |col: usize| -> Result<String, CliError> {
            let v = field(col);
            if v.is_empty() {
                return Err(CliError::Parse {
                    row: row_no,
                    column: COLUMNS[col],
                    value: v.to_string(),
                    reason: "empty identifier".into(),
                });
            }
            Ok(v.to_string())
        };
        let goals = |col: usize| {
            parse_goals(field(col)).map_err(|e| CliError::Parse {
                row: row_no,
                column: COLUMNS[col],
                value: field(col).to_string(),
                reason: match e {
                    scorecast::Error::InvalidScore { reason, .. } => reason,
                    other => other.to_string(),
                },
            })
        };
        let record = MatchRecord {
            match_id: text(0)?,
            forecaster_id: text(1)?,
            actual: Score::new(goals(2)?, goals(3)?),
            forecast: Score::new(goals(4)?, goals(5)?),
        };
        if !seen.insert((record.match_id.clone(), record.forecaster_id.clone())) {
            return Err(CliError::DuplicateKey {
                row: row_no,
                match_id: record.match_id,
                forecaster_id: record.forecaster_id,
            });
        }
        records.push(record);
    }
    if records.is_empty() {
        return Err(CliError::EmptyDataset);
    }
    Ok(records)
}
