//! The JSON stream spec format.
//!
//! ```json
//! {"type": "ep", "head": ["7"], "cycle": ["1", "2/3", 0.25]}
//! {"type": "gen", "name": "harmonic_shift", "params": {"c": 1}, "bound": 2}
//! ```
//!
//! Rationals are strings `"p/q"` or decimal literals (string or JSON number)
//! with at most 12 fractional digits; both parse exactly. Written specs
//! always use the string form.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use super::{BoundedStream, EpStream, GeneratorSpec, Stream};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

fn spec_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Spec {
        path: path.into(),
        message: message.into(),
    }
}

pub fn rational_from_value(value: &Value, path: &str) -> Result<Rational> {
    let text = match value {
        Value::String(s) => s.clone(),
        // arbitrary_precision keeps the literal text of JSON numbers
        Value::Number(n) => n.to_string(),
        other => return Err(spec_err(path, format!("expected a rational, got {other}"))),
    };
    rational::parse_rational(&text).map_err(|e| spec_err(path, e.to_string()))
}

fn rational_list(obj: &Map<String, Value>, key: &str, path: &str) -> Result<Vec<Rational>> {
    let field = format!("{path}{key}");
    match obj.get(key) {
        None => Err(spec_err(&field, "missing field")),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| rational_from_value(v, &format!("{field}[{i}]")))
            .collect(),
        Some(other) => Err(spec_err(&field, format!("expected an array, got {other}"))),
    }
}

/// Parses one stream spec object. `path` prefixes error locations.
pub fn stream_from_value(value: &Value, path: &str) -> Result<Stream> {
    let obj = value
        .as_object()
        .ok_or_else(|| spec_err(path_or_root(path), "expected a stream spec object"))?;
    let prefix = if path.is_empty() {
        String::new()
    } else {
        format!("{path}.")
    };
    match obj.get("type").and_then(Value::as_str) {
        Some("ep") => {
            let head = match obj.get("head") {
                None => Vec::new(),
                Some(_) => rational_list(obj, "head", &prefix)?,
            };
            let cycle = rational_list(obj, "cycle", &prefix)?;
            EpStream::new(head, cycle)
                .map(Stream::Ep)
                .map_err(|e| spec_err(format!("{prefix}cycle"), e.to_string()))
        }
        Some("gen") => {
            let name = obj
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| spec_err(format!("{prefix}name"), "missing generator name"))?;
            let params = match obj.get("params") {
                None => Map::new(),
                Some(Value::Object(m)) => m.clone(),
                Some(other) => {
                    return Err(spec_err(
                        format!("{prefix}params"),
                        format!("expected an object, got {other}"),
                    ))
                }
            };
            let bound = obj
                .get("bound")
                .map(|b| rational_from_value(b, &format!("{prefix}bound")))
                .transpose()?
                .ok_or_else(|| spec_err(format!("{prefix}bound"), "missing bound"))?;
            let spec = GeneratorSpec {
                name: name.to_string(),
                params,
                bound: rational::to_f64(&bound),
            };
            BoundedStream::from_generator(&spec)
                .map(Stream::Bounded)
                .map_err(|e| match e {
                    Error::Spec { path, message } => spec_err(format!("{prefix}{path}"), message),
                    other => spec_err(format!("{prefix}name"), other.to_string()),
                })
        }
        Some(other) => Err(spec_err(
            format!("{prefix}type"),
            format!("unknown stream type `{other}` (expected \"ep\" or \"gen\")"),
        )),
        None => Err(spec_err(format!("{prefix}type"), "missing stream type")),
    }
}

fn path_or_root(path: &str) -> &str {
    if path.is_empty() {
        "$"
    } else {
        path
    }
}

/// Parses a document holding one spec object or an array of them.
pub fn parse_streams(text: &str) -> Result<Vec<Stream>> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        let position = format!("line {} column {}", e.line(), e.column());
        let message = e.to_string();
        let message = message
            .strip_suffix(&format!(" at {position}"))
            .unwrap_or(&message);
        spec_err(position.clone(), message)
    })?;
    match &value {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, v)| stream_from_value(v, &format!("[{i}]")))
            .collect(),
        _ => Ok(vec![stream_from_value(&value, "")?]),
    }
}

pub fn ep_to_value(s: &EpStream) -> Value {
    let list = |xs: &[Rational]| -> Vec<Value> {
        xs.iter()
            .map(|x| Value::String(rational::format_rational(x)))
            .collect()
    };
    json!({"type": "ep", "head": list(s.head()), "cycle": list(s.cycle())})
}

/// Spec for a stream, if it has one: registry-built bounded streams
/// re-emit their generator spec, derived approximate streams have none.
pub fn stream_to_value(s: &Stream) -> Option<Value> {
    match s {
        Stream::Ep(ep) => Some(ep_to_value(ep)),
        Stream::Bounded(b) => b
            .origin()
            .map(|g| json!({"type": "gen", "name": g.name, "params": g.params, "bound": g.bound})),
    }
}

impl Serialize for EpStream {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ep_to_value(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EpStream {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        match stream_from_value(&value, "").map_err(D::Error::custom)? {
            Stream::Ep(s) => Ok(s),
            Stream::Bounded(_) => Err(D::Error::custom("expected an eventually-periodic stream")),
        }
    }
}

/// `#[serde(with = "rational_str")]` for rational fields.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let value = Value::deserialize(d)?;
        rational_from_value(&value, "").map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn parses_ep_specs_exactly() {
        let s = parse_streams(r#"{"type":"ep","head":["7", 0.1],"cycle":["1/3", 2]}"#).unwrap();
        let ep = s[0].as_ep().unwrap();
        assert_eq!(ep.head(), &[rational::int(7), frac(1, 10)]);
        assert_eq!(ep.cycle(), &[frac(1, 3), rational::int(2)]);
    }

    #[test]
    fn parses_generators() {
        let s = parse_streams(
            r#"[{"type":"gen","name":"harmonic_shift","params":{"c":1},"bound":2},
                {"type":"gen","name":"doubling_blocks","bound":1}]"#,
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        assert!(matches!(&s[1], Stream::Bounded(_)));
        let round = stream_to_value(&s[0]).unwrap();
        assert_eq!(round["name"], "harmonic_shift");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_streams(r#"{"type":"ep","head":[1,"x"],"cycle":[1]}"#).unwrap_err();
        assert!(
            matches!(e, Error::Spec { ref path, .. } if path == "head[1]"),
            "{e}"
        );
        let e = parse_streams(r#"[{"type":"ep","cycle":[]}]"#).unwrap_err();
        assert!(
            matches!(e, Error::Spec { ref path, .. } if path == "[0].cycle"),
            "{e}"
        );
        let e = parse_streams("{\n  \"type\": \"ep\",\n  oops }").unwrap_err();
        assert!(
            matches!(e, Error::Spec { ref path, .. } if path.starts_with("line 3")),
            "{e}"
        );
        let e = parse_streams(r#"{"type":"ep","cycle":[1e-3]}"#).unwrap_err();
        assert!(
            matches!(e, Error::Spec { ref path, .. } if path == "cycle[0]"),
            "{e}"
        );
        let e = parse_streams(r#"{"type":"gen","name":"nope","bound":1}"#).unwrap_err();
        assert!(
            matches!(e, Error::Spec { ref path, .. } if path == "name"),
            "{e}"
        );
    }

    #[test]
    fn serde_round_trip() {
        let s = EpStream::new(vec![frac(-7, 2)], vec![frac(1, 3), rational::int(0)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"cycle":["1/3","0"],"head":["-7/2"],"type":"ep"}"#);
        let back: EpStream = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
