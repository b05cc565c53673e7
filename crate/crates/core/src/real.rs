//! Serde encoding for reals that may be infinite or NaN. Finite values are
//! plain JSON numbers; the others become the strings `"inf"`, `"-inf"` and
//! `"nan"`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize)]
#[serde(untagged)]
enum Repr {
    Number(f64),
    Text(&'static str),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Owned {
    Number(f64),
    Text(String),
}

fn encode(v: f64) -> Repr {
    if v.is_finite() {
        Repr::Number(v)
    } else if v.is_nan() {
        Repr::Text("nan")
    } else if v > 0.0 {
        Repr::Text("inf")
    } else {
        Repr::Text("-inf")
    }
}

fn decode<E: serde::de::Error>(r: Owned) -> Result<f64, E> {
    match r {
        Owned::Number(v) => Ok(v),
        Owned::Text(t) => match t.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(E::custom(format!(
                "expected a number, inf, -inf or nan, got `{other}`"
            ))),
        },
    }
}

pub(crate) fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    encode(*v).serialize(s)
}

pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    decode(Owned::deserialize(d)?)
}

pub(crate) mod vec {
    use super::*;

    pub(crate) fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&x| encode(x)))
    }

    pub(crate) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Owned>::deserialize(d)?
            .into_iter()
            .map(decode)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    #[derive(serde::Serialize, serde::Deserialize, Debug, PartialEq)]
    struct T {
        #[serde(with = "super")]
        a: f64,
        #[serde(with = "super::vec")]
        b: Vec<f64>,
    }

    #[test]
    fn non_finite_values_round_trip() {
        let t = T {
            a: f64::INFINITY,
            b: vec![1.5, f64::NEG_INFINITY],
        };
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"a":"inf","b":[1.5,"-inf"]}"#);
        assert_eq!(serde_json::from_str::<T>(&s).unwrap(), t);
        assert!(serde_json::from_str::<T>(r#"{"a":"big","b":[]}"#).is_err());
    }
}
