//! Ingestion of object-by-cue datasets, enumeration of paired comparisons,
//! and object-wise train/test splits.
//!
//! Two CSV schemas are understood, both UTF-8, comma-separated, with `#`
//! starting a comment line:
//!
//! * object tables — header `name,criterion,<cue>...`, one object per row,
//!   cue cells in `{0, 1}`, criterion a decimal number;
//! * pair files — header `outcome,<cue>...`, outcome in `{0, 1}`, cue cells
//!   in `{-1, 0, 1}` (object A minus object B).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::model::PairedComparison;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataError {
    #[error("{path}:{row}:{column}: {message}")]
    Parse { path: String, row: usize, column: usize, message: String },
    #[error("duplicate object name {0:?}")]
    DuplicateName(String),
    #[error("no data rows")]
    EmptyTable,
    #[error("need at least 2 objects, got {0}")]
    TooFewObjects(usize),
    #[error("split fraction must be strictly between 0 and 1 (got {0})")]
    BadFraction(f64),
    #[error(
        "degenerate split: {train} train / {test} test objects (both sides need at least 2)"
    )]
    DegenerateSplit { train: usize, test: usize },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// An object-by-cue dataset with a numeric criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectTable {
    pub names: Vec<String>,
    pub criterion: Vec<f64>,
    /// Rows are objects, columns are cues, entries in {0, 1}.
    pub cues: Vec<Vec<u8>>,
    pub cue_names: Vec<String>,
}

impl ObjectTable {
    pub fn n_objects(&self) -> usize {
        self.names.len()
    }

    pub fn k(&self) -> usize {
        self.cue_names.len()
    }

    fn take(&self, indices: &[usize]) -> ObjectTable {
        ObjectTable {
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            criterion: indices.iter().map(|&i| self.criterion[i]).collect(),
            cues: indices.iter().map(|&i| self.cues[i].clone()).collect(),
            cue_names: self.cue_names.clone(),
        }
    }
}

/// Pairs built from a table, plus how many criterion ties were dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSet {
    pub pairs: Vec<PairedComparison>,
    pub ties_dropped: usize,
}

/// Either supported file schema.
#[derive(Debug, Clone, PartialEq)]
pub enum Dataset {
    Objects(ObjectTable),
    Pairs(Vec<PairedComparison>),
}

fn read_to_string(path: &Path) -> Result<String, DataError> {
    fs::read_to_string(path).map_err(|e| DataError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Content lines with their original 1-based row numbers; comments and blank
/// lines skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim_end_matches('\r')))
        .filter(|(_, line)| !line.trim().is_empty() && !line.trim_start().starts_with('#'))
}

/// Loads an object table. Rejects non-binary cue cells, non-numeric
/// criteria, duplicate names, and empty tables, reporting row and column.
pub fn load_objects_csv(path: &Path) -> Result<ObjectTable, DataError> {
    let text = read_to_string(path)?;
    let loc = |row: usize, column: usize, message: String| DataError::Parse {
        path: path.display().to_string(),
        row,
        column,
        message,
    };

    let mut lines = content_lines(&text);
    let Some((header_row, header)) = lines.next() else {
        return Err(DataError::EmptyTable);
    };
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 3 || columns[0].trim() != "name" || columns[1].trim() != "criterion" {
        return Err(loc(header_row, 1, "expected header `name,criterion,<cue>...`".into()));
    }
    let cue_names: Vec<String> = columns[2..].iter().map(|c| c.trim().to_string()).collect();
    let k = cue_names.len();

    let mut table = ObjectTable {
        names: Vec::new(),
        criterion: Vec::new(),
        cues: Vec::new(),
        cue_names,
    };
    for (row, line) in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != k + 2 {
            return Err(loc(row, 1, format!("expected {} fields, got {}", k + 2, cells.len())));
        }
        let name = cells[0].trim();
        if name.is_empty() {
            return Err(loc(row, 1, "empty object name".into()));
        }
        if table.names.iter().any(|n| n == name) {
            return Err(DataError::DuplicateName(name.to_string()));
        }
        let criterion: f64 = cells[1]
            .trim()
            .parse()
            .ok()
            .filter(|c: &f64| c.is_finite())
            .ok_or_else(|| loc(row, 2, format!("criterion {:?} is not a finite number", cells[1])))?;
        let mut cues = Vec::with_capacity(k);
        for (i, cell) in cells[2..].iter().enumerate() {
            match cell.trim() {
                "0" => cues.push(0),
                "1" => cues.push(1),
                other => {
                    return Err(loc(row, i + 3, format!("cue value {other:?} is not 0 or 1")));
                }
            }
        }
        table.names.push(name.to_string());
        table.criterion.push(criterion);
        table.cues.push(cues);
    }
    if table.names.is_empty() {
        return Err(DataError::EmptyTable);
    }
    Ok(table)
}

/// Loads a pair file (`outcome,<cue>...` schema).
pub fn load_pairs_csv(path: &Path) -> Result<Vec<PairedComparison>, DataError> {
    let text = read_to_string(path)?;
    let loc = |row: usize, column: usize, message: String| DataError::Parse {
        path: path.display().to_string(),
        row,
        column,
        message,
    };

    let mut lines = content_lines(&text);
    let Some((header_row, header)) = lines.next() else {
        return Err(DataError::EmptyTable);
    };
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 2 || columns[0].trim() != "outcome" {
        return Err(loc(header_row, 1, "expected header `outcome,<cue>...`".into()));
    }
    let k = columns.len() - 1;

    let mut pairs = Vec::new();
    for (row, line) in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != k + 1 {
            return Err(loc(row, 1, format!("expected {} fields, got {}", k + 1, cells.len())));
        }
        let outcome = match cells[0].trim() {
            "0" => false,
            "1" => true,
            other => return Err(loc(row, 1, format!("outcome {other:?} is not 0 or 1"))),
        };
        let mut diffs = Vec::with_capacity(k);
        for (i, cell) in cells[1..].iter().enumerate() {
            match cell.trim() {
                "-1" => diffs.push(-1),
                "0" => diffs.push(0),
                "1" | "+1" => diffs.push(1),
                other => {
                    return Err(loc(row, i + 2, format!("cue difference {other:?} is not -1, 0 or 1")));
                }
            }
        }
        pairs.push(PairedComparison::new(diffs, outcome).expect("parsed diffs are in range"));
    }
    if pairs.is_empty() {
        return Err(DataError::EmptyTable);
    }
    Ok(pairs)
}

/// Serializes pairs to the pair schema. `cue_names` defaults to `c1..cK`.
pub fn pairs_to_csv(pairs: &[PairedComparison], cue_names: Option<&[String]>) -> String {
    let k = pairs.first().map_or(0, |p| p.k());
    let mut out = String::from("outcome");
    match cue_names {
        Some(names) => {
            for name in names {
                let _ = write!(out, ",{name}");
            }
        }
        None => {
            for i in 1..=k {
                let _ = write!(out, ",c{i}");
            }
        }
    }
    out.push('\n');
    for pair in pairs {
        let _ = write!(out, "{}", u8::from(pair.outcome()));
        for &d in pair.diffs() {
            let _ = write!(out, ",{d}");
        }
        out.push('\n');
    }
    out
}

/// Loads either schema, dispatching on the header line.
pub fn load_dataset(path: &Path) -> Result<Dataset, DataError> {
    let text = read_to_string(path)?;
    let header = content_lines(&text).next().map(|(_, line)| line.to_string());
    match header {
        Some(h) if h.split(',').next().map(str::trim) == Some("outcome") => {
            Ok(Dataset::Pairs(load_pairs_csv(path)?))
        }
        _ => Ok(Dataset::Objects(load_objects_csv(path)?)),
    }
}

/// All unordered object pairs (i < j): diffs are `cues[i] - cues[j]`, the
/// outcome is `criterion[i] > criterion[j]`. Pairs with tied criteria are
/// dropped and counted.
pub fn build_pairs(table: &ObjectTable) -> Result<PairSet, DataError> {
    let n = table.n_objects();
    if n < 2 {
        return Err(DataError::TooFewObjects(n));
    }
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    let mut ties_dropped = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if table.criterion[i] == table.criterion[j] {
                ties_dropped += 1;
                continue;
            }
            let diffs: Vec<i8> = table.cues[i]
                .iter()
                .zip(&table.cues[j])
                .map(|(&a, &b)| a as i8 - b as i8)
                .collect();
            let outcome = table.criterion[i] > table.criterion[j];
            pairs.push(PairedComparison::new(diffs, outcome).expect("binary cues give diffs in range"));
        }
    }
    Ok(PairSet { pairs, ties_dropped })
}

/// Splits objects uniformly at random into train and test sides. The train
/// side gets `round(fraction * n)` objects (round half up); a side with
/// fewer than 2 objects is a degenerate split. Pairs are built within each
/// side only.
pub fn split_objects<R: Rng + ?Sized>(
    table: &ObjectTable,
    fraction: f64,
    rng: &mut R,
) -> Result<(ObjectTable, ObjectTable), DataError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(DataError::BadFraction(fraction));
    }
    let n = table.n_objects();
    let train_size = (fraction * n as f64 + 0.5).floor() as usize;
    let test_size = n.saturating_sub(train_size);
    if train_size < 2 || test_size < 2 {
        return Err(DataError::DegenerateSplit { train: train_size, test: test_size });
    }
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(rng);
    let mut train_idx = indices[..train_size].to_vec();
    let mut test_idx = indices[train_size..].to_vec();
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((table.take(&train_idx), table.take(&test_idx)))
}
