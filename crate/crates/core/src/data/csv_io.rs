use std::fmt::Write as _;
use std::path::Path;

use super::{Dataset, Split};
use crate::nncore::Matrix;
use crate::{Error, Result};

/// Reads a headerless numeric CSV. Column `label_column` (0-based) holds
/// 1-based integer labels; the remaining columns are features. `K` is the
/// largest label seen.
pub fn load_csv(path: impl AsRef<Path>, label_column: usize, split: Split) -> Result<Dataset> {
    parse_csv(&std::fs::read_to_string(path)?, label_column, split)
}

pub fn parse_csv(text: &str, label_column: usize, split: Split) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut width = None;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 1;
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(Error::CsvRagged {
                line,
                expected: w,
                found: record.len(),
            });
        }
        if label_column >= w {
            return Err(Error::Format(format!(
                "label column {label_column} out of range for {w} columns"
            )));
        }
        if w < 2 {
            return Err(Error::NoFeatures);
        }
        for (c, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::CsvNonNumeric {
                line,
                column: c,
                value: cell.to_string(),
            })?;
            if c == label_column {
                if value.fract() != 0.0 || value < 1.0 {
                    return Err(Error::CsvNonNumeric {
                        line,
                        column: c,
                        value: cell.to_string(),
                    });
                }
                labels.push(value as usize - 1);
            } else {
                features.push(value);
            }
        }
    }
    let dim = width.ok_or(Error::NoFeatures)? - 1;
    let classes = labels.iter().max().map_or(0, |m| m + 1);
    let inputs = Matrix::from_vec(labels.len(), dim, features)?;
    Dataset::new(inputs, labels, classes, split)
}

/// Writes the format read by [`load_csv`].
pub fn write_csv(dataset: &Dataset, path: impl AsRef<Path>, label_column: usize) -> Result<()> {
    let mut out = String::new();
    for (row, &y) in dataset.inputs.row_iter().zip(&dataset.labels) {
        let mut cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        cells.insert(label_column.min(cells.len()), (y + 1).to_string());
        writeln!(out, "{}", cells.join(",")).expect("string write");
    }
    std::fs::write(path, out)?;
    Ok(())
}
