//! Result carrier for computed capacity bounds.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A named bound in bits per channel use, together with the parameters and
/// the optimizer trace that produced it. Closed forms carry a trivial trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundResult {
    /// Which bound this is, e.g. `"pauli"` or `"generic"`.
    pub name: String,
    /// Bound value in bits per channel use. May be `+inf` at asymptotes;
    /// non-finite values serialize as the strings `"inf"`, `"-inf"`, `"nan"`
    /// because JSON has no float infinities.
    #[serde(with = "float_repr")]
    pub value: f64,
    /// Named scalar parameters: channel parameters, minimizing phases,
    /// dimensions, seeds. A `BTreeMap` keeps serialization order stable.
    pub params: BTreeMap<String, f64>,
    pub trace: OptimizerTrace,
    /// Present when the value is only as good as an inner heuristic search,
    /// e.g. the generic estimator's input maximization.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
}

/// What the optimizer did. `running_best` is the best objective seen so far,
/// sampled once per optimizer step, so monotonicity is checkable after the fact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerTrace {
    pub evaluations: u64,
    pub restarts: u32,
    #[serde(with = "float_repr::vec")]
    pub running_best: Vec<f64>,
    /// True when the search stopped because improvements fell below
    /// tolerance; false when it ran out of budget.
    pub converged: bool,
}

impl OptimizerTrace {
    /// Trace for a closed-form evaluation: one "step", already converged.
    pub fn closed_form(value: f64) -> Self {
        OptimizerTrace {
            evaluations: 1,
            restarts: 0,
            running_best: vec![value],
            converged: true,
        }
    }
}

/// Serde adapters that spell non-finite floats as the strings `"inf"`,
/// `"-inf"`, and `"nan"` (JSON numbers cannot carry them; `serde_json`
/// would silently write `null`).
mod float_repr {
    use serde::de::Error as DeError;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Finite(f64),
        Named(String),
    }

    fn pack(x: f64) -> Repr {
        if x.is_finite() {
            Repr::Finite(x)
        } else if x.is_nan() {
            Repr::Named("nan".to_string())
        } else if x > 0.0 {
            Repr::Named("inf".to_string())
        } else {
            Repr::Named("-inf".to_string())
        }
    }

    fn unpack<E: DeError>(r: Repr) -> Result<f64, E> {
        match r {
            Repr::Finite(x) => Ok(x),
            Repr::Named(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(E::custom(format!("unknown float literal {other:?}"))),
            },
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        pack(*x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        unpack(Repr::deserialize(d)?)
    }

    pub mod vec {
        use serde::{Deserialize, Deserializer, Serialize, Serializer};

        pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
            let packed: Vec<super::Repr> = xs.iter().map(|&x| super::pack(x)).collect();
            packed.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            Vec::<super::Repr>::deserialize(d)?
                .into_iter()
                .map(super::unpack)
                .collect()
        }
    }
}

impl BoundResult {
    /// A bound computed by a closed form, with no meaningful search trace.
    pub fn closed_form(name: &str, value: f64, params: &[(&str, f64)]) -> Self {
        BoundResult {
            name: name.to_string(),
            value,
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            trace: OptimizerTrace::closed_form(value),
            caveat: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trips_including_infinities() {
        let finite = BoundResult::closed_form("demo", 1.25, &[("eta", 0.5)]);
        let text = serde_json::to_string(&finite).unwrap();
        let back: BoundResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back.value, 1.25);
        assert_eq!(back.params["eta"], 0.5);
        assert_eq!(back.trace.running_best, vec![1.25]);

        let asymptote = BoundResult::closed_form("demo", f64::INFINITY, &[]);
        let text = serde_json::to_string(&asymptote).unwrap();
        assert!(text.contains("\"inf\""));
        let back: BoundResult = serde_json::from_str(&text).unwrap();
        assert!(back.value.is_infinite() && back.value > 0.0);
        assert!(back.trace.running_best[0].is_infinite());
    }
}
