//! Versioned JSON and CSV output. Every float is printed with 17
//! significant digits so that it parses back to the same double.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::invariants::InvariantReport;

/// Bumped whenever a JSON payload or CSV header changes shape.
pub const SCHEMA_VERSION: u32 = 1;

/// Compact JSON formatter writing floats as `{:.16e}`.
#[derive(Debug, Default, Clone, Copy)]
pub struct RoundTripFormatter;

impl Formatter for RoundTripFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{}", fmt_f64(value))
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    kind: &'a str,
    payload: &'a T,
}

/// `{"schema_version", "kind", "payload"}` followed by a newline.
pub fn to_json<T: Serialize>(kind: &str, payload: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RoundTripFormatter);
    Envelope {
        schema_version: SCHEMA_VERSION,
        kind,
        payload,
    }
    .serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// One row per `(quantity, t)`: `abs_dev` is measured from the closed form
/// when there is one, otherwise from the sweep mean.
pub fn invariants_csv(reports: &[InvariantReport]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "schema_version",
        "quantity",
        "t",
        "value",
        "closed_form",
        "abs_dev",
    ])?;
    let version = SCHEMA_VERSION.to_string();
    for r in reports {
        let name = r.quantity.to_string();
        let reference = r.closed_form.unwrap_or(r.mean);
        for (t, v) in r.ts.iter().zip(&r.samples) {
            w.write_record([
                version.as_str(),
                name.as_str(),
                &fmt_f64(*t),
                &fmt_f64(*v),
                &opt(r.closed_form),
                &fmt_f64((v - reference).abs()),
            ])?;
        }
    }
    finish(w)
}

/// Generic table with a leading `schema_version` column.
pub fn table_csv<S: AsRef<str>>(header: &[&str], rows: &[Vec<S>]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut h = vec!["schema_version"];
    h.extend_from_slice(header);
    w.write_record(&h)?;
    let version = SCHEMA_VERSION.to_string();
    for row in rows {
        let mut rec = vec![version.as_str()];
        rec.extend(row.iter().map(|s| s.as_ref()));
        w.write_record(&rec)?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> csv::Result<String> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv emits UTF-8"))
}

/// Format an optional float for a table cell.
pub fn cell(v: Option<f64>) -> String {
    opt(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{QuantityId, SweepConfig};

    #[test]
    fn floats_round_trip() {
        let vals = [
            0.1,
            1.0 / 3.0,
            std::f64::consts::PI,
            1e-300,
            -2.5e17,
            5e-324,
        ];
        let s = to_json("test", &vals).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        let back: Vec<f64> = serde_json::from_value(v["payload"].clone()).unwrap();
        assert_eq!(back, vals);
    }

    #[test]
    fn non_finite_is_null() {
        let s = to_json("x", &[f64::NAN]).unwrap();
        assert!(s.contains("null"));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let cfg = SweepConfig::default();
        let r = InvariantReport::from_samples(
            QuantityId::Area,
            Some(2.0),
            vec![0.0, 0.5],
            vec![2.0, 2.5],
            &cfg,
        );
        let s = invariants_csv(&[r]).unwrap();
        let mut rdr = csv::Reader::from_reader(s.as_bytes());
        assert_eq!(
            rdr.headers().unwrap().iter().collect::<Vec<_>>(),
            [
                "schema_version",
                "quantity",
                "t",
                "value",
                "closed_form",
                "abs_dev"
            ]
        );
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(&rows[1][1], "area");
        assert_eq!(rows[1][5].parse::<f64>().unwrap(), 0.5);
    }

    #[test]
    fn table_quotes_fields() {
        let s = table_csv(&["note"], &[vec!["a,b"]]).unwrap();
        assert!(s.contains("\"a,b\""));
    }
}
