//! Byte-stable JSON: keys sorted, floats printed with 12 significant digits,
//! non-finite floats rejected.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_value::Value;

use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats a finite float with [`SIGNIFICANT_DIGITS`] significant digits,
/// positional for exponents in `[-5, 15)`, scientific otherwise.
pub fn format_float(x: f64) -> Result<String> {
    if !x.is_finite() {
        return Err(Error::Serialization(format!("non-finite number {x}")));
    }
    if x == 0.0 {
        return Ok("0.0".into());
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-5..15).contains(&exp) {
        if exp < 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
            out.push_str(digits);
        } else {
            let int_len = exp as usize + 1;
            if digits.len() <= int_len {
                out.push_str(digits);
                out.extend(std::iter::repeat_n('0', int_len - digits.len()));
                out.push_str(".0");
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        }
    } else {
        out.push_str(&digits[..1]);
        out.push('.');
        out.push_str(if digits.len() > 1 { &digits[1..] } else { "0" });
        let _ = write!(out, "e{exp}");
    }
    Ok(out)
}

fn key_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Char(c) => Ok(c.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::U8(x) => Ok(x.to_string()),
        Value::U16(x) => Ok(x.to_string()),
        Value::U32(x) => Ok(x.to_string()),
        Value::U64(x) => Ok(x.to_string()),
        Value::I8(x) => Ok(x.to_string()),
        Value::I16(x) => Ok(x.to_string()),
        Value::I32(x) => Ok(x.to_string()),
        Value::I64(x) => Ok(x.to_string()),
        other => Err(Error::Serialization(format!(
            "unsupported map key {other:?}"
        ))),
    }
}

/// `indent` is `None` for single-line output.
fn write_value(out: &mut String, v: &Value, indent: Option<usize>) -> Result<()> {
    let pad = |out: &mut String, k: Option<usize>| {
        if let Some(k) = k {
            out.push('\n');
            out.extend(std::iter::repeat_n(' ', 2 * k));
        }
    };
    let inner = indent.map(|k| k + 1);
    match v {
        Value::Unit | Value::Option(None) => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::U8(x) => out.push_str(&x.to_string()),
        Value::U16(x) => out.push_str(&x.to_string()),
        Value::U32(x) => out.push_str(&x.to_string()),
        Value::U64(x) => out.push_str(&x.to_string()),
        Value::I8(x) => out.push_str(&x.to_string()),
        Value::I16(x) => out.push_str(&x.to_string()),
        Value::I32(x) => out.push_str(&x.to_string()),
        Value::I64(x) => out.push_str(&x.to_string()),
        Value::F32(x) => out.push_str(&format_float(*x as f64)?),
        Value::F64(x) => out.push_str(&format_float(*x)?),
        Value::Char(c) => out.push_str(&serde_json::to_string(&c.to_string()).expect("string")),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Option(Some(v)) | Value::Newtype(v) => write_value(out, v, indent)?,
        Value::Bytes(b) => {
            let seq: Vec<Value> = b.iter().map(|&x| Value::U8(x)).collect();
            write_value(out, &Value::Seq(seq), indent)?;
        }
        Value::Seq(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return Ok(());
            }
            // scalar arrays stay on one line
            let flat = indent.is_none()
                || items
                    .iter()
                    .all(|i| !matches!(i, Value::Seq(_) | Value::Map(_)));
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                    if flat && indent.is_some() {
                        out.push(' ');
                    }
                }
                if !flat {
                    pad(out, inner);
                }
                write_value(out, item, inner)?;
            }
            if !flat {
                pad(out, indent);
            }
            out.push(']');
        }
        Value::Map(map) => {
            let mut entries: Vec<(String, &Value)> = map
                .iter()
                .map(|(k, v)| Ok((key_string(k)?, v)))
                .collect::<Result<_>>()?;
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            if entries.is_empty() {
                out.push_str("{}");
                return Ok(());
            }
            out.push('{');
            for (k, (key, val)) in entries.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                pad(out, inner);
                out.push_str(&serde_json::to_string(key).expect("string"));
                out.push_str(if indent.is_some() { ": " } else { ":" });
                write_value(out, val, inner)?;
            }
            pad(out, indent);
            out.push('}');
        }
    }
    Ok(())
}

/// Renders `report` as pretty, byte-stable JSON with a trailing newline.
pub fn to_stable_json<T: Serialize + ?Sized>(report: &T) -> Result<String> {
    let value = serde_value::to_value(report).map_err(|e| Error::Serialization(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &value, Some(0))?;
    out.push('\n');
    Ok(out)
}

/// Renders `report` as a single line of byte-stable JSON, without a newline.
pub fn to_stable_json_line<T: Serialize + ?Sized>(report: &T) -> Result<String> {
    let value = serde_value::to_value(report).map_err(|e| Error::Serialization(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &value, None)?;
    Ok(out)
}

/// Writes `text` to `path`, where `-` means standard output.
pub fn write_output(text: &str, path: &str) -> Result<()> {
    if path == "-" {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        lock.write_all(text.as_bytes())?;
        lock.flush()?;
    } else {
        let mut w = BufWriter::new(File::create(Path::new(path))?);
        w.write_all(text.as_bytes())?;
        w.flush()?;
    }
    Ok(())
}

/// Serializes `report` with [`to_stable_json`] and writes it to `path`.
pub fn emit_report<T: Serialize + ?Sized>(report: &T, path: &str) -> Result<()> {
    write_output(&to_stable_json(report)?, path)
}
