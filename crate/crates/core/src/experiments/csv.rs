use std::fmt::Write as _;
use std::io;

use crate::error::{Error, Result};

pub const ITERATION_COLUMN: &str = "Iterations";

const NAN_TOKEN: &str = "nan";

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub iteration: usize,
    /// One cell per method column; `None` is written as `nan`.
    pub values: Vec<Option<f64>>,
}

/// Loss table: an `Iterations` column followed by one column per method.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    columns: Vec<String>,
    rows: Vec<CsvRow>,
}

impl CsvTable {
    pub fn new(columns: Vec<String>, rows: Vec<CsvRow>) -> Result<Self> {
        for (i, label) in columns.iter().enumerate() {
            if label.is_empty() || label.contains([',', '"', '\n', '\r']) {
                return Err(Error::Csv {
                    line: 1,
                    reason: format!("unusable column label {label:?}"),
                });
            }
            if label == ITERATION_COLUMN || columns[..i].contains(label) {
                return Err(Error::Csv {
                    line: 1,
                    reason: format!("duplicate column label {label:?}"),
                });
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row.values.len() != columns.len() {
                return Err(Error::Csv {
                    line: i + 2,
                    reason: format!(
                        "expected {} values, got {}",
                        columns.len(),
                        row.values.len()
                    ),
                });
            }
        }
        Ok(Self { columns, rows })
    }

    /// Method labels, without the leading `Iterations`.
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[CsvRow] {
        &self.rows
    }

    pub fn header(&self) -> String {
        std::iter::once(ITERATION_COLUMN)
            .chain(self.columns.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Values of one method column, top to bottom.
    pub fn column(&self, label: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.columns.iter().position(|c| c == label)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for row in &self.rows {
            write!(out, "{}", row.iteration).unwrap();
            for v in &row.values {
                out.push(',');
                match v {
                    Some(x) => out.push_str(&format_value(*x)),
                    None => out.push_str(NAN_TOKEN),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write_to<W: io::Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_csv_string().as_bytes())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Csv {
            line: 1,
            reason: "empty input".into(),
        })?;
        let mut fields = header.split(',');
        if fields.next() != Some(ITERATION_COLUMN) {
            return Err(Error::Csv {
                line: 1,
                reason: format!("first column must be {ITERATION_COLUMN}"),
            });
        }
        let columns: Vec<String> = fields.map(str::to_string).collect();

        let mut rows = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.is_empty() {
                continue;
            }
            let mut cells = line.split(',');
            let iteration = cells
                .next()
                .and_then(|c| c.parse::<usize>().ok())
                .ok_or_else(|| Error::Csv {
                    line: lineno,
                    reason: "iteration index is not an integer".into(),
                })?;
            let values = cells
                .map(|c| parse_value(c, lineno))
                .collect::<Result<Vec<_>>>()?;
            rows.push(CsvRow { iteration, values });
        }
        Self::new(columns, rows)
    }
}

/// Shortest representation that parses back to the same `f64` (at most 17
/// significant digits), switching to exponent form for very large or small
/// magnitudes.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn parse_value(cell: &str, line: usize) -> Result<Option<f64>> {
    if cell == NAN_TOKEN {
        return Ok(None);
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(Error::Csv {
            line,
            reason: format!("bad numeric cell {cell:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn writes_header_and_nan() {
        let t = CsvTable::new(
            vec!["A".into(), "B".into()],
            vec![
                CsvRow {
                    iteration: 0,
                    values: vec![Some(1.5), Some(2.0)],
                },
                CsvRow {
                    iteration: 1,
                    values: vec![Some(1e-30), None],
                },
            ],
        )
        .unwrap();
        assert_eq!(t.to_csv_string(), "Iterations,A,B\n0,1.5,2\n1,1e-30,nan\n");
    }

    #[test]
    fn rejects_ragged_and_bad_labels() {
        assert!(CsvTable::new(
            vec!["A".into()],
            vec![CsvRow {
                iteration: 0,
                values: vec![]
            }]
        )
        .is_err());
        assert!(CsvTable::new(vec!["A,B".into()], vec![]).is_err());
        assert!(CsvTable::new(vec!["A".into(), "A".into()], vec![]).is_err());
        assert!(CsvTable::parse("Iter,A\n0,1\n").is_err());
        assert!(CsvTable::parse("Iterations,A\n0,abc\n").is_err());
        assert!(CsvTable::parse("Iterations,A\n0,1,2\n").is_err());
    }

    #[test]
    fn format_never_loses_precision() {
        for x in [
            0.1 + 0.2,
            1.0 / 3.0,
            123_456_789.123_456_79,
            1e300,
            -4.9e-324,
            7e-6,
        ] {
            assert_eq!(format_value(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_value(-0.0), "0");
    }

    fn cell() -> impl Strategy<Value = Option<f64>> {
        prop_oneof![
            1 => Just(None),
            8 => proptest::num::f64::NORMAL.prop_map(Some),
            1 => Just(Some(0.0)),
        ]
    }

    proptest! {
        #[test]
        fn round_trip(cols in 1usize..5, data in proptest::collection::vec(proptest::collection::vec(cell(), 5), 0..40)) {
            let columns: Vec<String> = (0..cols).map(|i| format!("m{i}")).collect();
            let rows = data
                .into_iter()
                .enumerate()
                .map(|(i, v)| CsvRow { iteration: i, values: v[..cols].to_vec() })
                .collect();
            let table = CsvTable::new(columns, rows).unwrap();
            let text = table.to_csv_string();
            let back = CsvTable::parse(&text).unwrap();
            prop_assert_eq!(&back, &table);
            prop_assert_eq!(back.to_csv_string(), text);
        }
    }
}
