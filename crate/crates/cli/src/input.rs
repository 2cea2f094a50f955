use std::fs;

use cesaro::stream::format::parse_streams;
use cesaro::{EpStream, Error, Stream};

/// Reads every input (a file path or inline JSON) into streams, keeping
/// input order. Errors name the offending input and location.
pub fn load_streams(inputs: &[String]) -> Result<Vec<Stream>, String> {
    let mut out = Vec::new();
    for (n, input) in inputs.iter().enumerate() {
        let trimmed = input.trim_start();
        let (source, text) = if trimmed.starts_with('{') || trimmed.starts_with('[') {
            (format!("input {}", n + 1), input.clone())
        } else {
            let text = fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?;
            (input.clone(), text)
        };
        let streams = parse_streams(&text).map_err(|e| format!("{source}: {e}"))?;
        out.extend(streams);
    }
    Ok(out)
}

pub fn require_ep<'a>(streams: &'a [Stream], rule: &str) -> Result<Vec<&'a EpStream>, String> {
    streams
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.as_ep().ok_or_else(|| {
                Error::RuleDomain {
                    rule: rule.to_string(),
                    reason: format!("stream {i} ({}) is not eventually periodic", s.label()),
                }
                .to_string()
            })
        })
        .collect()
}

/// Parses `j0..j1` (inclusive exponents of `1 - 2^-j`).
pub fn parse_grid(text: &str) -> Result<(u32, u32), String> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| format!("delta grid `{text}` is not of the form j0..j1"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| format!("delta grid bound `{s}` is not a non-negative integer"))
    };
    let (j0, j1) = (parse(a)?, parse(b)?);
    if j0 == 0 || j0 > j1 || j1 > 52 {
        return Err(format!(
            "delta grid {j0}..{j1} must satisfy 1 <= j0 <= j1 <= 52"
        ));
    }
    Ok((j0, j1))
}
