use std::borrow::Cow;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{GpcError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResponseKind {
    Real,
    /// Labels in {−1, +1}.
    Binary,
}

/// Responses plus an `N×K` design whose first column is the synthesized
/// intercept. `scales[k]` is the sample standard deviation of column `k`
/// (`scales[0] = 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    y: Vec<f64>,
    x: Vec<f64>,
    n: usize,
    k: usize,
    scales: Vec<f64>,
    names: Vec<String>,
    kind: ResponseKind,
}

impl Dataset {
    /// `covariates` are rows without the intercept; `names` label those columns.
    pub fn new(
        y: Vec<f64>,
        covariates: &[Vec<f64>],
        names: Vec<String>,
        kind: ResponseKind,
    ) -> Result<Self> {
        let n = y.len();
        if covariates.len() != n {
            return Err(GpcError::domain(format!(
                "{} responses but {} covariate rows",
                n,
                covariates.len()
            )));
        }
        let p = names.len();
        let k = p + 1;
        if n < k {
            return Err(GpcError::domain(format!("need N >= K, got N={n}, K={k}")));
        }
        let mut x = Vec::with_capacity(n * k);
        for (i, row) in covariates.iter().enumerate() {
            if row.len() != p {
                return Err(GpcError::domain(format!(
                    "row {i} has {} covariates, expected {p}",
                    row.len()
                )));
            }
            x.push(1.0);
            x.extend_from_slice(row);
        }
        if y.iter().chain(x.iter()).any(|v| !v.is_finite()) {
            return Err(GpcError::domain("dataset contains non-finite entries"));
        }
        if kind == ResponseKind::Binary {
            if let Some(i) = y.iter().position(|&v| v != 1.0 && v != -1.0) {
                return Err(GpcError::domain(format!(
                    "classification response at row {i} is {}, expected -1 or +1",
                    y[i]
                )));
            }
        }
        let mut scales = vec![1.0; k];
        for (j, scale) in scales.iter_mut().enumerate().skip(1) {
            let mean = (0..n).map(|i| x[i * k + j]).sum::<f64>() / n as f64;
            let ss: f64 = (0..n).map(|i| (x[i * k + j] - mean).powi(2)).sum();
            *scale = if n > 1 { (ss / (n - 1) as f64).sqrt() } else { 0.0 };
        }
        let mut all_names = Vec::with_capacity(k);
        all_names.push("intercept".to_string());
        all_names.extend(names);
        Ok(Self {
            y,
            x,
            n,
            k,
            scales,
            names: all_names,
            kind,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of design columns, intercept included.
    pub fn num_columns(&self) -> usize {
        self.k
    }

    pub fn response(&self, i: usize) -> f64 {
        self.y[i]
    }

    pub fn responses(&self) -> &[f64] {
        &self.y
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.k..(i + 1) * self.k]
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// Column names, starting with `intercept`.
    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn kind(&self) -> ResponseKind {
        self.kind
    }

    pub fn full_view(&self) -> DatasetView<'_> {
        DatasetView {
            base: self,
            indices: Cow::Owned((0..self.n).collect()),
        }
    }

    /// Reads a CSV with a `y` column; every other column is a numeric covariate.
    pub fn from_csv(path: impl AsRef<Path>, kind: ResponseKind) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| {
            GpcError::Ingestion(format!("cannot open {}: {e}", path.display()))
        })?;
        Self::from_reader(file, kind)
    }

    pub fn from_reader<R: Read>(reader: R, kind: ResponseKind) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        let y_col = headers
            .iter()
            .position(|h| h.trim() == "y")
            .ok_or_else(|| GpcError::Ingestion("no `y` column in header".into()))?;
        let names: Vec<String> = headers
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != y_col)
            .map(|(_, h)| h.trim().to_string())
            .collect();
        let mut y = Vec::new();
        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let mut row = Vec::with_capacity(names.len());
            for (i, field) in record.iter().enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| {
                    GpcError::Ingestion(format!(
                        "record {} column `{}`: `{field}` is not a number",
                        line + 1,
                        &headers[i]
                    ))
                })?;
                if i == y_col {
                    y.push(v);
                } else {
                    row.push(v);
                }
            }
            rows.push(row);
        }
        Self::new(y, &rows, names, kind)
    }

    /// Writes `y` followed by the stored covariates (no intercept column).
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["y".to_string()];
        header.extend(self.names.iter().skip(1).cloned());
        w.write_record(&header)?;
        for i in 0..self.n {
            let mut rec = vec![format_float(self.y[i])];
            rec.extend(self.row(i)[1..].iter().map(|v| format_float(*v)));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest representation that parses back to the same `f64`.
pub(crate) fn format_float(v: f64) -> String {
    format!("{v:?}")
}

/// A replicate of a dataset: row indices into `base`, repetitions allowed.
#[derive(Clone, Debug)]
pub struct DatasetView<'a> {
    base: &'a Dataset,
    indices: Cow<'a, [usize]>,
}

impl<'a> DatasetView<'a> {
    pub fn new(base: &'a Dataset, indices: impl Into<Cow<'a, [usize]>>) -> Result<Self> {
        let indices = indices.into();
        if let Some(&bad) = indices.iter().find(|&&i| i >= base.len()) {
            return Err(GpcError::domain(format!(
                "view index {bad} out of range for {} rows",
                base.len()
            )));
        }
        Ok(Self { base, indices })
    }

    pub fn base(&self) -> &'a Dataset {
        self.base
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `(y_i, x_i)` for every row of the view, in order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, &'a [f64])> + '_ {
        let base = self.base;
        self.indices.iter().map(move |&i| (base.response(i), base.row(i)))
    }
}
