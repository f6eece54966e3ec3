//! Ingestion of the South African Heart Disease data (462 rows).
//!
//! Accepts the usual distributions of the file: a header row, an optional
//! leading row-name column, `famhist` as `Present`/`Absent` or 1/0, and the
//! outcome as `chd` (0/1) or `y` (0/1 or −1/+1). Outcomes are recoded to
//! ±1 and `famhist` to `Present → 1`, `Absent → 0`.

use std::path::Path;

use crate::error::{GpcError, Result};
use crate::model::{Dataset, ResponseKind};

pub const SAHEART_ROWS: usize = 462;

/// Seven covariates; with the intercept this gives K = 8.
pub const SAHEART_DEFAULT_COLUMNS: [&str; 7] =
    ["sbp", "tobacco", "ldl", "famhist", "obesity", "alcohol", "age"];

fn parse_field(column: &str, raw: &str, line: usize) -> Result<f64> {
    let raw = raw.trim().trim_matches('"');
    if column == "famhist" {
        match raw {
            "Present" | "present" => return Ok(1.0),
            "Absent" | "absent" => return Ok(0.0),
            _ => {}
        }
    }
    raw.parse().map_err(|_| {
        GpcError::Ingestion(format!("record {line} column `{column}`: `{raw}` is not numeric"))
    })
}

fn outcome_to_label(v: f64, line: usize) -> Result<f64> {
    match v {
        1.0 => Ok(1.0),
        0.0 | -1.0 => Ok(-1.0),
        other => Err(GpcError::Ingestion(format!(
            "record {line}: outcome {other} is not binary"
        ))),
    }
}

pub fn load_saheart(path: impl AsRef<Path>, feature_columns: &[&str]) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|e| GpcError::Ingestion(format!("cannot open {}: {e}", path.display())))?;
    load_saheart_from_reader(file, feature_columns, Some(SAHEART_ROWS))
}

/// As [`load_saheart`]; `expected_rows = None` skips the row-count check.
pub fn load_saheart_from_reader<R: std::io::Read>(
    reader: R,
    feature_columns: &[&str],
    expected_rows: Option<usize>,
) -> Result<Dataset> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().trim_matches('"').to_string())
        .collect();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let outcome = find("chd").or_else(|| find("y")).ok_or_else(|| {
        GpcError::Ingestion(format!(
            "expected an outcome column `chd` or `y`; header is {headers:?}"
        ))
    })?;
    let feature_idx: Vec<usize> = feature_columns
        .iter()
        .map(|c| {
            find(c).ok_or_else(|| {
                GpcError::Ingestion(format!(
                    "missing column `{c}`; expected {feature_columns:?}, header is {headers:?}"
                ))
            })
        })
        .collect::<Result<_>>()?;

    let mut y = Vec::new();
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i + 1;
        let raw_outcome = parse_field(&headers[outcome], &record[outcome], line)?;
        y.push(outcome_to_label(raw_outcome, line)?);
        rows.push(
            feature_idx
                .iter()
                .map(|&j| parse_field(&headers[j], &record[j], line))
                .collect::<Result<Vec<f64>>>()?,
        );
    }
    if let Some(n) = expected_rows {
        if y.len() != n {
            return Err(GpcError::Ingestion(format!(
                "expected {n} rows, found {}",
                y.len()
            )));
        }
    }
    Dataset::new(
        y,
        &rows,
        feature_columns.iter().map(|s| s.to_string()).collect(),
        ResponseKind::Binary,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const SNIPPET: &str = "row.names,sbp,tobacco,ldl,adiposity,famhist,typea,obesity,alcohol,age,chd\n\
1,160,12,5.73,23.11,Present,49,25.3,97.2,52,1\n\
2,144,0.01,4.41,28.61,Absent,55,28.87,2.06,63,1\n\
3,118,0.08,3.48,32.28,Present,52,29.14,3.81,46,0\n\
4,170,7.5,6.41,38.03,Present,51,31.99,24.26,58,1\n\
5,134,13.6,3.5,27.78,Present,60,25.99,57.34,49,1\n\
6,132,6.2,6.47,36.21,Present,62,30.77,14.14,45,0\n\
7,142,4.05,3.38,16.2,Absent,59,20.81,2.62,38,0\n\
8,114,4.08,4.59,14.6,Present,62,23.11,6.72,58,1\n\
9,114,0,3.83,19.4,Present,49,24.86,2.49,29,0\n";

    #[test]
    fn parses_and_recodes() {
        let d = load_saheart_from_reader(SNIPPET.as_bytes(), &SAHEART_DEFAULT_COLUMNS, None).unwrap();
        assert_eq!(d.len(), 9);
        assert_eq!(d.num_columns(), 8);
        assert_eq!(d.responses()[..3], [1.0, 1.0, -1.0]);
        // famhist is column 4 of the design (after the intercept).
        assert_eq!(d.row(0)[4], 1.0);
        assert_eq!(d.row(1)[4], 0.0);
        assert_eq!(d.scales()[0], 1.0);
        assert!(d.scales()[1..].iter().all(|s| *s > 0.0));
    }

    #[test]
    fn row_count_and_columns_checked() {
        let err = load_saheart_from_reader(SNIPPET.as_bytes(), &SAHEART_DEFAULT_COLUMNS, Some(462)).unwrap_err();
        assert!(err.to_string().contains("expected 462 rows"));
        let err = load_saheart_from_reader(SNIPPET.as_bytes(), &["sbp", "bmi"], None).unwrap_err();
        assert!(err.to_string().contains("bmi"));
    }
}
