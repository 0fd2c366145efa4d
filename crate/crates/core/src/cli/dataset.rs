//! Dataset ingestion: `x,f` CSV with boundary values from flags, or JSON
//! `{knots, values, boundary: {left, right}}`.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use super::InputError;
use crate::spline::KnotDataSet;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetJson {
    knots: Vec<f64>,
    values: Vec<f64>,
    boundary: BoundaryJson,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryJson {
    left: f64,
    right: f64,
}

/// Reads a dataset file. `.json` files use the JSON schema and must not be
/// combined with boundary flags; anything else is parsed as CSV and needs
/// both flags.
pub fn parse_dataset(
    path: &Path,
    dq_left: Option<f64>,
    dq_right: Option<f64>,
) -> Result<KnotDataSet, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())))?;
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        if dq_left.is_some() || dq_right.is_some() {
            return Err(InputError::new(
                "JSON datasets carry their own boundary; drop --dq-left/--dq-right",
            ));
        }
        parse_dataset_json(&text)
    } else {
        let (Some(left), Some(right)) = (dq_left, dq_right) else {
            return Err(InputError::new(
                "CSV datasets need both --dq-left and --dq-right",
            ));
        };
        parse_dataset_csv(text.as_bytes(), left, right)
    }
}

pub fn parse_dataset_json(text: &str) -> Result<KnotDataSet, InputError> {
    let doc: DatasetJson = serde_json::from_str(text).map_err(|e| InputError {
        line: Some(e.line()),
        message: e.to_string(),
    })?;
    check_increasing(&doc.knots, |_| None, |i| format!("knots[{i}]"))?;
    KnotDataSet::new(doc.knots, doc.values, doc.boundary.left, doc.boundary.right)
        .map_err(|e| InputError::new(e.to_string()))
}

/// Parses `x,f` CSV rows; rows must already be sorted by `x`.
pub fn parse_dataset_csv<R: Read>(
    reader: R,
    dq_left: f64,
    dq_right: f64,
) -> Result<KnotDataSet, InputError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "f" {
        return Err(InputError {
            line: Some(1),
            message: format!("expected header `x,f`, found `{}`", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }

    let mut knots = Vec::new();
    let mut values = Vec::new();
    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line() as usize);
        if record.len() != 2 {
            return Err(InputError {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let field = |k: usize, name: &str| {
            record[k].parse::<f64>().map_err(|_| InputError {
                line,
                message: format!("cannot parse {name} value `{}`", &record[k]),
            })
        };
        knots.push(field(0, "x")?);
        values.push(field(1, "f")?);
        lines.push(line);
    }
    check_increasing(&knots, |i| lines[i], |i| format!("x = {}", knots[i]))?;
    KnotDataSet::new(knots, values, dq_left, dq_right).map_err(|e| InputError::new(e.to_string()))
}

fn check_increasing(
    knots: &[f64],
    line_of: impl Fn(usize) -> Option<usize>,
    describe: impl Fn(usize) -> String,
) -> Result<(), InputError> {
    match knots.windows(2).position(|w| w[1] <= w[0]) {
        Some(k) => {
            let i = k + 1;
            let kind = if knots[i] == knots[k] {
                "duplicate"
            } else {
                "non-increasing"
            };
            Err(InputError {
                line: line_of(i),
                message: format!("{kind} knot {} (rows must be sorted by x)", describe(i)),
            })
        }
        None => Ok(()),
    }
}

fn csv_error(e: csv::Error) -> InputError {
    InputError {
        line: e.position().map(|p| p.line() as usize),
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_example_dataset() {
        let text = "x,f\n-1,1\n0,0\n1,1\n";
        let d = parse_dataset_csv(text.as_bytes(), -15.0, 15.0).unwrap();
        assert_eq!(d.knots(), &[-1.0, 0.0, 1.0]);
        assert_eq!(d.values(), &[1.0, 0.0, 1.0]);
        assert_eq!((d.d_left(), d.d_right()), (-15.0, 15.0));
    }

    #[test]
    fn csv_duplicate_names_line() {
        let text = "x,f\n0,1\n0.5,2\n0.5,3\n";
        let err = parse_dataset_csv(text.as_bytes(), 0.0, 0.0).unwrap_err();
        assert_eq!(err.line, Some(4));
        assert!(err.message.contains("duplicate"));
        assert!(err.to_string().starts_with("line 4:"));
    }

    #[test]
    fn csv_unsorted_rejected() {
        let err = parse_dataset_csv("x,f\n1,0\n0,0\n".as_bytes(), 0.0, 0.0).unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.message.contains("non-increasing"));
    }

    #[test]
    fn csv_bad_header_and_number() {
        assert!(parse_dataset_csv("a,b\n1,2\n".as_bytes(), 0.0, 0.0).is_err());
        let err = parse_dataset_csv("x,f\n0,1\n1,abc\n".as_bytes(), 0.0, 0.0).unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(parse_dataset_csv("x,f\n0,1\n".as_bytes(), 0.0, 0.0).is_err());
    }

    #[test]
    fn json_dataset() {
        let d = parse_dataset_json(
            r#"{"knots":[-1,0,1],"values":[1,0,1],"boundary":{"left":-4,"right":4}}"#,
        )
        .unwrap();
        assert_eq!(d.d_left(), -4.0);
        assert_eq!(d.intervals(), 2);
    }

    #[test]
    fn json_missing_boundary() {
        let err = parse_dataset_json(r#"{"knots":[0,1],"values":[1,0]}"#).unwrap_err();
        assert!(err.message.contains("boundary"), "{err}");
    }

    #[test]
    fn json_non_increasing() {
        let err = parse_dataset_json(
            r#"{"knots":[0,2,1],"values":[1,0,1],"boundary":{"left":0,"right":0}}"#,
        )
        .unwrap_err();
        assert!(err.message.contains("knots[2]"), "{err}");
    }
}
