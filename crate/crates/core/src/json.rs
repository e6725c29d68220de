//! JSON output with full-precision floats.
//!
//! Every `f64` is written in scientific notation with 17 significant digits,
//! so a parse/re-render cycle reproduces the input byte for byte.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::error::Result;

/// Formatter wrapper that renders floats as `{:.16e}`.
pub struct FullPrecision<F>(pub F);

impl<F: Formatter> Formatter for FullPrecision<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{:.16e}", value)
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn end_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_key(w)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

fn render<T: Serialize + ?Sized, F: Formatter>(value: &T, fmt: F) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision(fmt));
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

/// Compact single-line JSON.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    render(value, CompactFormatter)
}

/// Indented JSON.
pub fn to_string_pretty<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    render(value, PrettyFormatter::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        let s = to_string(&vec![0.1, 1.0, -2.5e-300]).unwrap();
        assert_eq!(s, "[1.0000000000000001e-1,1.0000000000000000e0,-2.5000000000000000e-300]");
    }

    #[test]
    fn rerender_is_byte_identical() {
        let v = serde_json::json!({"b": 1.0 / 3.0, "a": [std::f64::consts::PI, 7], "z": null});
        let once = to_string_pretty(&v).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&once).unwrap();
        assert_eq!(once, to_string_pretty(&parsed).unwrap());
    }
}
