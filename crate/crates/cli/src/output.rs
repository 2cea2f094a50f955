use std::fs;
use std::io::Write;

use cesaro::rational::{format_rational, Rational};
use cesaro::stream::Scalar;
use serde_json::{json, Value};

use crate::{Format, OutputArgs};

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn fmt_float(x: f64) -> String {
    round12(x).to_string()
}

pub fn approx(x: f64) -> Value {
    json!({"value": round12(x), "approx": true})
}

pub fn exact(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn scalar(s: &Scalar) -> Value {
    match s {
        Scalar::Exact(r) => exact(r),
        Scalar::Approx(x) => approx(*x),
    }
}

pub fn scalar_text(s: &Scalar) -> String {
    match s {
        Scalar::Exact(r) => format_rational(r),
        Scalar::Approx(x) => fmt_float(*x),
    }
}

pub struct Report {
    pub json: Value,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub text: Vec<String>,
}

impl Report {
    fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| e.to_string())?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.csv_header)
                    .map_err(|e| e.to_string())?;
                for row in &self.csv_rows {
                    w.write_record(row).map_err(|e| e.to_string())?;
                }
                let bytes = w.into_inner().map_err(|e| e.to_string())?;
                String::from_utf8(bytes).map_err(|e| e.to_string())
            }
            Format::Text => Ok(self.text.iter().map(|l| format!("{l}\n")).collect()),
        }
    }

    pub fn emit(&self, args: &OutputArgs) -> Result<(), String> {
        let body = self.render(args.format)?;
        match &args.out {
            Some(path) => fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
            None => std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| e.to_string()),
        }
    }
}
