//! CSV matrix files: an optional header row of labels, then `M` rows of `M`
//! non-negative integers. Lines starting with `#` are comments.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::ResultMatrix;

/// A matrix together with optional object labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFile {
    pub labels: Option<Vec<String>>,
    pub matrix: ResultMatrix,
}

impl MatrixFile {
    pub fn new(matrix: ResultMatrix) -> Self {
        MatrixFile {
            labels: None,
            matrix,
        }
    }

    /// Labels, defaulting to `"1"..="M"`.
    pub fn labels(&self) -> Vec<String> {
        match &self.labels {
            Some(labels) => labels.clone(),
            None => (1..=self.matrix.len()).map(|i| i.to_string()).collect(),
        }
    }

    pub fn read(reader: impl Read) -> Result<Self> {
        let mut csv = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut labels: Option<Vec<String>> = None;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut lines: Vec<usize> = Vec::new();
        for record in csv.records() {
            let record = record.map_err(|e| parse_error(&e))?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            if record.iter().all(str::is_empty) {
                continue;
            }
            let first_data = labels.is_none() && rows.is_empty();
            if first_data && record.iter().any(|f| f.parse::<i128>().is_err()) {
                labels = Some(record.iter().map(str::to_owned).collect());
                continue;
            }
            let mut row = Vec::with_capacity(record.len());
            for (col, field) in record.iter().enumerate() {
                let value = field.parse::<u64>().map_err(|_| Error::Parse {
                    line,
                    column: col + 1,
                    message: format!("expected a non-negative integer, found {:?}", field),
                })?;
                row.push(value);
            }
            rows.push(row);
            lines.push(line);
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                line: 0,
                column: 0,
                message: "no matrix rows found".into(),
            });
        }
        let m = rows.len();
        for (row, &line) in rows.iter().zip(&lines) {
            if row.len() != m {
                return Err(Error::Parse {
                    line,
                    column: row.len().min(m) + 1,
                    message: format!(
                        "matrix is not square: row has {} entries but there are {} rows",
                        row.len(),
                        m
                    ),
                });
            }
        }
        for (i, (row, &line)) in rows.iter().zip(&lines).enumerate() {
            if row[i] != 0 {
                return Err(Error::Parse {
                    line,
                    column: i + 1,
                    message: format!("diagonal entry must be zero, found {}", row[i]),
                });
            }
        }
        if let Some(names) = &labels {
            if names.len() != m {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!(
                        "header has {} labels for a square matrix of {} rows",
                        names.len(),
                        m
                    ),
                });
            }
        }
        let matrix = ResultMatrix::from_rows(&rows)?;
        Ok(MatrixFile { labels, matrix })
    }

    pub fn read_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)
            .map_err(|e| Error::invalid(format!("cannot open {}: {}", path.display(), e)))?;
        Self::read(std::io::BufReader::new(file))
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        Self::read(text.as_bytes())
    }

    /// Writes the header (only when labels are set) and the rows.
    pub fn write(&self, writer: impl Write) -> std::io::Result<()> {
        let mut csv = csv::WriterBuilder::new().flexible(true).from_writer(writer);
        if let Some(labels) = &self.labels {
            csv.write_record(labels)?;
        }
        for row in self.matrix.rows() {
            csv.write_record(row.iter().map(u64::to_string))?;
        }
        csv.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = Vec::new();
        self.write(&mut out).expect("writing to memory cannot fail");
        String::from_utf8(out).expect("CSV output is UTF-8")
    }
}

fn parse_error(e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        column: 0,
        message: e.to_string(),
    }
}
