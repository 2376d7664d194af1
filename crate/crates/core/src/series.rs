//! Radius-indexed measurement tables and their `r,value,exact` CSV form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing `r,value,exact` header")]
    MissingHeader,
}

/// One measured value. `value` is `f64::INFINITY` for an infinite
/// measurement; `exact = false` marks a bound rather than an exact value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub r: u32,
    #[serde(with = "value_repr")]
    pub value: f64,
    pub exact: bool,
}

mod value_repr {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("bad value `{t}`"))),
        }
    }
}

pub const CSV_HEADER: &str = "r,value,exact";

fn format_value(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_owned()
    } else if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

pub fn to_csv(points: &[SeriesPoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.r, format_value(p.value), p.exact);
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SeriesPoint>, SeriesError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(SeriesError::MissingHeader),
    }
    lines
        .map(|(i, line)| {
            let line_no = i + 1;
            let err = |message: String| SeriesError::Parse { line: line_no, message };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            }
            let r = fields[0].parse().map_err(|e| err(format!("bad radius `{}`: {e}", fields[0])))?;
            let value = if fields[1] == "inf" {
                f64::INFINITY
            } else {
                fields[1].parse().map_err(|e| err(format!("bad value `{}`: {e}", fields[1])))?
            };
            let exact = fields[2].parse().map_err(|e| err(format!("bad exact flag `{}`: {e}", fields[2])))?;
            Ok(SeriesPoint { r, value, exact })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_with_infinity() {
        let pts = vec![
            SeriesPoint { r: 0, value: 0.0, exact: true },
            SeriesPoint { r: 2, value: f64::INFINITY, exact: true },
            SeriesPoint { r: 3, value: 2.5, exact: false },
        ];
        let csv = to_csv(&pts);
        assert!(csv.starts_with("r,value,exact\n0,0,true\n2,inf,true\n"));
        assert_eq!(parse_csv(&csv).unwrap(), pts);
    }

    #[test]
    fn csv_errors_name_the_line() {
        assert_eq!(parse_csv("x,y\n"), Err(SeriesError::MissingHeader));
        match parse_csv("r,value,exact\n1,2,true\n2,zz,true\n") {
            Err(SeriesError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_uses_inf_marker() {
        let p = SeriesPoint { r: 1, value: f64::INFINITY, exact: true };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"r":1,"value":"inf","exact":true}"#);
        assert_eq!(serde_json::from_str::<SeriesPoint>(&s).unwrap(), p);
    }
}
