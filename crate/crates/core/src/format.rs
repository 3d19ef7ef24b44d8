//! Number formatting for emitted documents.
//!
//! Every `f64` is written with 17 significant digits in scientific notation,
//! which round-trips exactly through any correctly rounding parser.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// `1.2345678901234567e-3` style, 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Compact JSON with [`fmt_f64`] numbers; the trait defaults handle the rest.
#[derive(Debug, Default, Clone, Copy)]
pub struct SigDigitsFormatter;

impl Formatter for SigDigitsFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` to a JSON string terminated by a newline.
///
/// serde_json writes non-finite floats as `null`; callers check finiteness first.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitsFormatter);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}
