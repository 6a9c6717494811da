use bridge_stopping::Error;
use serde::Serialize;
use std::io;
use std::path::Path;

/// Compact JSON with every `f64` written to 17 significant digits.
struct RoundTrip;

impl serde_json::ser::Formatter for RoundTrip {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RoundTrip);
    value.serialize(&mut ser).expect("records serialize to JSON");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// A number as written in CSV cells.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Config(format!("cannot write {}: {e}", path.display()))
}

/// Write a CSV file: comma separated, LF line endings, header first.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| io_error(path, e))?;
    w.write_record(header).map_err(|e| io_error(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        #[derive(Serialize)]
        struct R {
            a: f64,
            b: Option<f64>,
            c: f64,
        }
        let s = to_json(&R {
            a: 0.1,
            b: None,
            c: f64::NAN,
        });
        assert_eq!(s, r#"{"a":1.0000000000000001e-1,"b":null,"c":null}"#);
        let v: serde_json::Value = serde_json::from_str(&to_json(&R {
            a: 0.485_194_093_547_511_9,
            b: Some(-2.0),
            c: 1e300,
        }))
        .unwrap();
        assert_eq!(v["a"].as_f64(), Some(0.485_194_093_547_511_9));
        assert_eq!(v["c"].as_f64(), Some(1e300));
    }
}
