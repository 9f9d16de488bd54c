//! Tabular data and the nonparametric bootstrap over its rows.

use std::io::{Read, Write};
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::DataError;

/// A single table cell. The source text is kept verbatim so resamples can be
/// written back out byte-for-byte; `value` is set when the text parses as a
/// finite number.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    raw: String,
    value: Option<f64>,
}

impl Cell {
    pub fn new(raw: impl Into<String>) -> Self {
        let raw = raw.into();
        let value = raw.trim().parse::<f64>().ok().filter(|v| v.is_finite());
        Self { raw, value }
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn value(&self) -> Option<f64> {
        self.value
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::new(format!("{}", v))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::new(v)
    }
}

pub type Row = Arc<[Cell]>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataFormat {
    #[default]
    Csv,
}

/// Ordered rows under a fixed header. Rows are shared, so resampling only
/// copies pointers.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Arc<[String]>,
    rows: Vec<Row>,
}

impl Dataset {
    pub fn new<I, R>(columns: Vec<String>, rows: I) -> Result<Self, DataError>
    where
        I: IntoIterator<Item = R>,
        R: Into<Vec<Cell>>,
    {
        let width = columns.len();
        let mut out = Vec::new();
        for (i, row) in rows.into_iter().enumerate() {
            let row: Vec<Cell> = row.into();
            if row.len() != width {
                return Err(DataError::Ragged {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
            out.push(Row::from(row));
        }
        Ok(Self {
            columns: columns.into(),
            rows: out,
        })
    }

    /// Single numeric column, mostly for synthetic fixtures.
    pub fn from_column(name: &str, values: &[f64]) -> Self {
        Self {
            columns: vec![name.to_string()].into(),
            rows: values
                .iter()
                .map(|&v| Row::from(vec![Cell::from(v)]))
                .collect(),
        }
    }

    pub fn column_names(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize, DataError> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| DataError::UnknownColumn(name.to_string()))
    }

    /// Values of a column that must be numeric in every row.
    pub fn numeric_column(&self, name: &str) -> Result<Vec<f64>, DataError> {
        let idx = self.column_index(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row[idx].value.ok_or_else(|| DataError::NotNumeric {
                    column: name.to_string(),
                    row: i + 1,
                    cell: row[idx].raw.clone(),
                })
            })
            .collect()
    }

    pub fn text_column(&self, name: &str) -> Result<Vec<&str>, DataError> {
        let idx = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[idx].raw.as_str()).collect())
    }

    fn with_rows(&self, rows: Vec<Row>) -> Self {
        Self {
            columns: Arc::clone(&self.columns),
            rows,
        }
    }

    /// Comma-separated text with a header row.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DataError> {
        let mut w = csv::Writer::from_writer(writer);
        let to_io = |e: csv::Error| DataError::Io(std::io::Error::other(e));
        w.write_record(self.columns.iter()).map_err(to_io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.raw.as_str()))
                .map_err(to_io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reads delimited text: comma separated, double-quote escaping, first
/// record is the header.
pub fn load_dataset<R: Read>(source: R, format: DataFormat) -> Result<Dataset, DataError> {
    match format {
        DataFormat::Csv => load_csv(source),
    }
}

fn load_csv<R: Read>(source: R) -> Result<Dataset, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(source);
    let mut records = reader.records();

    let header = match records.next() {
        None => return Err(DataError::MissingHeader),
        Some(rec) => rec.map_err(|e| csv_error(e, 0))?,
    };
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(DataError::MissingHeader);
    }
    let columns: Vec<String> = header.iter().map(str::to_string).collect();

    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| csv_error(e, row))?;
        if rec.len() != columns.len() {
            return Err(DataError::Ragged {
                row,
                expected: columns.len(),
                found: rec.len(),
            });
        }
        rows.push(Row::from(rec.iter().map(Cell::new).collect::<Vec<_>>()));
    }
    Ok(Dataset {
        columns: columns.into(),
        rows,
    })
}

fn csv_error(e: csv::Error, row: usize) -> DataError {
    let column = match e.kind() {
        csv::ErrorKind::Utf8 { err, .. } => err.field() + 1,
        _ => 0,
    };
    DataError::Parse {
        row,
        column,
        message: e.to_string(),
    }
}

/// Reproducible randomness keyed by a 64-bit seed.
///
/// Every consumer draws from `stream(index)`, a ChaCha8 generator seeded from
/// `seed` and positioned on its own stream, so replicate `i` sees the same
/// numbers no matter which thread produces it or in what order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeededRng {
    seed: u64,
}

impl SeededRng {
    pub const ALGORITHM: &'static str = "chacha8-stream";

    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// An independent keyed generator for nested use (e.g. trial -> replicate).
    pub fn child(&self, index: u64) -> SeededRng {
        SeededRng::new(splitmix64(
            self.seed ^ splitmix64(index ^ 0xA076_1D64_78BD_642F),
        ))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One bootstrap replicate: `row_count` rows drawn uniformly with replacement.
pub fn bootstrap_resample_with<R: Rng + ?Sized>(
    data: &Dataset,
    rng: &mut R,
) -> Result<Dataset, DataError> {
    let n = data.row_count();
    if n == 0 {
        return Err(DataError::Empty);
    }
    let rows = (0..n)
        .map(|_| Arc::clone(&data.rows[rng.random_range(0..n)]))
        .collect();
    Ok(data.with_rows(rows))
}

/// Replicate `index` of the bootstrap keyed by `rng`.
pub fn bootstrap_resample(
    data: &Dataset,
    rng: &SeededRng,
    index: u64,
) -> Result<Dataset, DataError> {
    bootstrap_resample_with(data, &mut rng.stream(index))
}

/// Replicates `0..n`. The result is identical whether generated in parallel
/// or sequentially.
pub fn resample_stream(
    data: &Dataset,
    n: usize,
    rng: &SeededRng,
    parallel: bool,
) -> Result<Vec<Dataset>, DataError> {
    if n == 0 {
        return Err(DataError::ZeroResamples);
    }
    if data.is_empty() {
        return Err(DataError::Empty);
    }
    if parallel {
        (0..n)
            .into_par_iter()
            .map(|i| bootstrap_resample(data, rng, i as u64))
            .collect()
    } else {
        (0..n)
            .map(|i| bootstrap_resample(data, rng, i as u64))
            .collect()
    }
}
