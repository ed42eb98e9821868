//! CSV and JSON tables.
//!
//! Reals are written with 12 significant digits, `.` as decimal separator and
//! LF line endings. Parsing an emitted file and writing it again reproduces it
//! byte for byte.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontier::{BoundaryPoint, Segment};
use crate::regions::ThresholdRow;

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest decimal text of `round_sig(x)`; scientific outside `[1e-4, 1e15)`.
pub fn fmt_real(x: f64) -> String {
    let r = round_sig(x);
    let a = r.abs();
    if r == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&a) || !a.is_finite() {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn parse_real(field: &str, column: &str) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("column `{column}`: `{field}` is not a number")))
}

fn parse_count(field: &str, column: &str) -> Result<u64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("column `{column}`: `{field}` is not a count")))
}

/// A row of one of the exported tables.
pub trait Record: Sized + Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];

    fn fields(&self) -> Vec<String>;

    fn from_fields(fields: &[&str]) -> Result<Self>;

    /// Copy with every real rounded as it would be printed.
    fn rounded(&self) -> Self;
}

pub fn to_csv<R: Record>(rows: &[R]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(R::HEADER)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_csv<R: Record>(text: &str) -> Result<Vec<R>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != R::HEADER {
        return Err(Error::Parse(format!(
            "expected header `{}`, found `{}`",
            R::HEADER.join(","),
            header.join(",")
        )));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let fields: Vec<&str> = rec.iter().collect();
        out.push(R::from_fields(&fields)?);
    }
    Ok(out)
}

pub fn to_json<R: Record>(rows: &[R]) -> Result<String> {
    let rounded: Vec<R> = rows.iter().map(Record::rounded).collect();
    Ok(serde_json::to_string_pretty(&rounded)? + "\n")
}

pub fn from_json<R: Record>(text: &str) -> Result<Vec<R>> {
    Ok(serde_json::from_str(text)?)
}

/// Output table format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn write<R: Record>(self, rows: &[R]) -> Result<String> {
        match self {
            Format::Csv => to_csv(rows),
            Format::Json => to_json(rows),
        }
    }

    pub fn read<R: Record>(self, text: &str) -> Result<Vec<R>> {
        match self {
            Format::Csv => from_csv(text),
            Format::Json => from_json(text),
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

impl Record for BoundaryPoint {
    const HEADER: &'static [&'static str] = &["alpha", "r1", "r2", "segment"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.alpha.map(fmt_real).unwrap_or_default(),
            fmt_real(self.r1),
            fmt_real(self.r2),
            self.segment.as_str().to_string(),
        ]
    }

    fn from_fields(f: &[&str]) -> Result<Self> {
        let [alpha, r1, r2, segment] = f else {
            return Err(Error::Parse(format!(
                "expected 4 fields, found {}",
                f.len()
            )));
        };
        Ok(BoundaryPoint {
            alpha: if alpha.trim().is_empty() {
                None
            } else {
                Some(parse_real(alpha, "alpha")?)
            },
            r1: parse_real(r1, "r1")?,
            r2: parse_real(r2, "r2")?,
            segment: segment.trim().parse::<Segment>()?,
        })
    }

    fn rounded(&self) -> Self {
        BoundaryPoint {
            alpha: self.alpha.map(round_sig),
            r1: round_sig(self.r1),
            r2: round_sig(self.r2),
            segment: self.segment,
        }
    }
}

impl Record for ThresholdRow {
    const HEADER: &'static [&'static str] = &["c12", "alpha_th", "r1_th", "r2_at_th"];

    fn fields(&self) -> Vec<String> {
        [self.c12, self.alpha_th, self.r1_th, self.r2_at_th]
            .into_iter()
            .map(fmt_real)
            .collect()
    }

    fn from_fields(f: &[&str]) -> Result<Self> {
        let [c12, a, r1, r2] = f else {
            return Err(Error::Parse(format!(
                "expected 4 fields, found {}",
                f.len()
            )));
        };
        Ok(ThresholdRow {
            c12: parse_real(c12, "c12")?,
            alpha_th: parse_real(a, "alpha_th")?,
            r1_th: parse_real(r1, "r1_th")?,
            r2_at_th: parse_real(r2, "r2_at_th")?,
        })
    }

    fn rounded(&self) -> Self {
        ThresholdRow {
            c12: round_sig(self.c12),
            alpha_th: round_sig(self.alpha_th),
            r1_th: round_sig(self.r1_th),
            r2_at_th: round_sig(self.r2_at_th),
        }
    }
}

/// Threshold point `(R1_th, C1 - R1_th)` of one cooperation capacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiamondRow {
    pub c12: f64,
    pub alpha_th: f64,
    pub r1: f64,
    pub r2: f64,
}

impl Record for DiamondRow {
    const HEADER: &'static [&'static str] = &["c12", "alpha_th", "r1", "r2"];

    fn fields(&self) -> Vec<String> {
        [self.c12, self.alpha_th, self.r1, self.r2]
            .into_iter()
            .map(fmt_real)
            .collect()
    }

    fn from_fields(f: &[&str]) -> Result<Self> {
        let [c12, a, r1, r2] = f else {
            return Err(Error::Parse(format!(
                "expected 4 fields, found {}",
                f.len()
            )));
        };
        Ok(DiamondRow {
            c12: parse_real(c12, "c12")?,
            alpha_th: parse_real(a, "alpha_th")?,
            r1: parse_real(r1, "r1")?,
            r2: parse_real(r2, "r2")?,
        })
    }

    fn rounded(&self) -> Self {
        DiamondRow {
            c12: round_sig(self.c12),
            alpha_th: round_sig(self.alpha_th),
            r1: round_sig(self.r1),
            r2: round_sig(self.r2),
        }
    }
}

impl Record for crate::dnfsim::SimReport {
    const HEADER: &'static [&'static str] = &[
        "trials",
        "user1_joint_errors",
        "user2_errors",
        "total_errors",
        "p_e_estimate",
        "half_width_95",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.trials.to_string(),
            self.user1_joint_errors.to_string(),
            self.user2_errors.to_string(),
            self.total_errors.to_string(),
            fmt_real(self.p_e_estimate),
            fmt_real(self.half_width_95),
        ]
    }

    fn from_fields(f: &[&str]) -> Result<Self> {
        let [t, e1, e2, et, p, h] = f else {
            return Err(Error::Parse(format!(
                "expected 6 fields, found {}",
                f.len()
            )));
        };
        Ok(crate::dnfsim::SimReport {
            trials: parse_count(t, "trials")?,
            user1_joint_errors: parse_count(e1, "user1_joint_errors")?,
            user2_errors: parse_count(e2, "user2_errors")?,
            total_errors: parse_count(et, "total_errors")?,
            p_e_estimate: parse_real(p, "p_e_estimate")?,
            half_width_95: parse_real(h, "half_width_95")?,
        })
    }

    fn rounded(&self) -> Self {
        crate::dnfsim::SimReport {
            p_e_estimate: round_sig(self.p_e_estimate),
            half_width_95: round_sig(self.half_width_95),
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formatting_examples() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(-0.0), "0");
        assert_eq!(fmt_real(0.25), "0.25");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(0.5 * 2.25f64.log2()), "0.584962500721");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        assert_eq!(fmt_real(123456.789012345), "123456.789012");
    }

    fn pt(alpha: Option<f64>, r1: f64, r2: f64, segment: Segment) -> BoundaryPoint {
        BoundaryPoint {
            alpha,
            r1,
            r2,
            segment,
        }
    }

    #[test]
    fn frontier_csv_layout() {
        let rows = vec![
            pt(Some(0.0), 0.0, 1.0 / 3.0, Segment::Proven),
            pt(None, 0.7, 1e-9, Segment::SumrateConjectured),
        ];
        let text = to_csv(&rows).unwrap();
        assert_eq!(
            text,
            "alpha,r1,r2,segment\n0,0,0.333333333333,proven\n,0.7,1e-9,sumrate_conjectured\n"
        );
        let back: Vec<BoundaryPoint> = from_csv(&text).unwrap();
        assert_eq!(back[1].alpha, None);
        assert_eq!(to_csv(&back).unwrap(), text);
    }

    #[test]
    fn rejects_wrong_header_and_values() {
        assert!(from_csv::<BoundaryPoint>("a,b,c,d\n").is_err());
        assert!(from_csv::<BoundaryPoint>("alpha,r1,r2,segment\n0,x,0,proven\n").is_err());
        assert!(from_csv::<BoundaryPoint>("alpha,r1,r2,segment\n0,0,0,maybe\n").is_err());
        assert!(from_csv::<ThresholdRow>("c12,alpha_th,r1_th,r2_at_th\n0,1,2\n").is_err());
    }

    #[test]
    fn threshold_json_roundtrip() {
        let rows = vec![ThresholdRow {
            c12: 0.5,
            alpha_th: 0.25,
            r1_th: 0.5 * 2.25f64.log2(),
            r2_at_th: 0.707518 + 1e-13,
        }];
        let text = to_json(&rows).unwrap();
        assert!(text.ends_with("}\n]\n"));
        let back: Vec<ThresholdRow> = from_json(&text).unwrap();
        assert_eq!(to_json(&back).unwrap(), text);
    }

    fn segment() -> impl Strategy<Value = Segment> {
        prop_oneof![Just(Segment::Proven), Just(Segment::SumrateConjectured)]
    }

    fn real() -> impl Strategy<Value = f64> {
        prop_oneof![0.0f64..2.0, 1e-12f64..1e-3, Just(0.0), -1.0f64..0.0]
    }

    proptest! {
        #[test]
        fn boundary_tables_roundtrip_byte_identically(
            raw in prop::collection::vec(
                (prop::option::of(0.0f64..1.0), real(), real(), segment()),
                0..20,
            )
        ) {
            let rows: Vec<BoundaryPoint> =
                raw.into_iter().map(|(a, r1, r2, s)| pt(a, r1, r2, s)).collect();
            for fmt in [Format::Csv, Format::Json] {
                let text = fmt.write(&rows).unwrap();
                let back: Vec<BoundaryPoint> = fmt.read(&text).unwrap();
                prop_assert_eq!(fmt.write(&back).unwrap(), text.clone());
                for (a, b) in rows.iter().zip(&back) {
                    prop_assert!((a.r1 - b.r1).abs() <= 1e-11 * a.r1.abs().max(1e-300));
                }
            }
        }

        #[test]
        fn diamond_tables_roundtrip_byte_identically(
            raw in prop::collection::vec((real(), real(), real(), real()), 0..10)
        ) {
            let rows: Vec<DiamondRow> = raw
                .into_iter()
                .map(|(c12, alpha_th, r1, r2)| DiamondRow { c12, alpha_th, r1, r2 })
                .collect();
            for fmt in [Format::Csv, Format::Json] {
                let text = fmt.write(&rows).unwrap();
                let back: Vec<DiamondRow> = fmt.read(&text).unwrap();
                prop_assert_eq!(fmt.write(&back).unwrap(), text);
            }
        }
    }
}
