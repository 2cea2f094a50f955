use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::rational;

type RuleFn = dyn Fn(u64) -> f64 + Send + Sync;

/// Names of the registered generator families.
pub const GENERATORS: [&str; 2] = ["harmonic_shift", "doubling_blocks"];

/// How a bounded stream was produced from the registry; re-emitted verbatim
/// by the spec writer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    pub bound: f64,
}

/// A deterministic rule `t -> u_t` with a declared bound `|u_t| <= B`.
///
/// The bound is checked on every evaluation.
#[derive(Clone)]
pub struct BoundedStream {
    label: String,
    bound: f64,
    rule: Arc<RuleFn>,
    origin: Option<GeneratorSpec>,
}

impl BoundedStream {
    pub fn new(
        label: impl Into<String>,
        bound: f64,
        rule: impl Fn(u64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(bound.is_finite() && bound > 0.0) {
            return Err(Error::Parameter(format!(
                "bound must be a positive finite number, got {bound}"
            )));
        }
        Ok(Self {
            label: label.into(),
            bound,
            rule: Arc::new(rule),
            origin: None,
        })
    }

    /// `u_t = c + 1/t`.
    pub fn harmonic_shift(c: f64, bound: f64) -> Result<Self> {
        Self::new(format!("harmonic_shift(c={c})"), bound, move |t| {
            c + 1.0 / t as f64
        })
    }

    /// Alternating blocks of lengths `1, 2, 4, ..`: block `m` covers
    /// `2^m..2^(m+1)-1` and holds `low` for even `m`, `high` for odd `m`.
    pub fn doubling_blocks(low: f64, high: f64, bound: f64) -> Result<Self> {
        Self::new("doubling_blocks", bound, move |t| {
            let block = 63 - t.leading_zeros();
            if block % 2 == 0 {
                low
            } else {
                high
            }
        })
    }

    /// Looks up a registered generator.
    pub fn from_generator(spec: &GeneratorSpec) -> Result<Self> {
        let param = |key: &str, default: f64| -> Result<f64> {
            match spec.params.get(key) {
                None => Ok(default),
                Some(v) => number_param(v).ok_or_else(|| Error::Spec {
                    path: format!("params.{key}"),
                    message: format!("expected a number or rational literal, got {v}"),
                }),
            }
        };
        let mut stream = match spec.name.as_str() {
            "harmonic_shift" => Self::harmonic_shift(param("c", 0.0)?, spec.bound)?,
            "doubling_blocks" => {
                Self::doubling_blocks(param("low", 0.0)?, param("high", 1.0)?, spec.bound)?
            }
            other => return Err(Error::UnknownGenerator(other.to_string())),
        };
        stream.origin = Some(spec.clone());
        Ok(stream)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn origin(&self) -> Option<&GeneratorSpec> {
        self.origin.as_ref()
    }

    pub fn value_at(&self, t: u64) -> Result<f64> {
        assert!(t >= 1, "generation indices start at 1");
        let value = (self.rule)(t);
        if !value.is_finite() || value.abs() > self.bound {
            return Err(Error::BoundViolation {
                label: self.label.clone(),
                index: t,
                value,
                bound: self.bound,
            });
        }
        Ok(value)
    }

    /// Periodic approximate stream repeating `u_1..u_T`.
    pub fn replicate_prefix(&self, horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Parameter("replication length must be >= 1".into()));
        }
        let values = (1..=horizon)
            .map(|t| self.value_at(t))
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            format!("rep({},{horizon})", self.label),
            self.bound,
            move |t| values[((t - 1) % horizon) as usize],
        )
    }
}

fn number_param(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => rational::parse_rational(s)
            .ok()
            .map(|r| rational::to_f64(&r)),
        _ => None,
    }
}

impl fmt::Debug for BoundedStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundedStream")
            .field("label", &self.label)
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}
