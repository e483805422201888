//! JSON file formats.
//!
//! Matrices use `{"dim": d, "re": [[..]], "im": [[..]]}`, row-major. Row and
//! column indices in files are 0-based: row `i` is energy level `i + 1`. A
//! missing `"im"` is read as all zeros.
//!
//! Hamiltonians use `{"energies": [E1, .., Ed]}` and EPCPR channels use
//! `{"p": x, "xi": <matrix>, "tau": [probs]}`. A POVM is a JSON list of
//! matrices. Infinite values are written as the strings `"inf"` / `"-inf"`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{ActivityError, Result};
use crate::linalg::ComplexMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = ActivityError;

    fn try_from(m: MatrixJson) -> Result<Self> {
        if m.re.len() != m.dim {
            return Err(ActivityError::DimensionMismatch {
                expected: m.dim,
                found: m.re.len(),
            });
        }
        let im = m
            .im
            .unwrap_or_else(|| m.re.iter().map(|r| vec![0.0; r.len()]).collect());
        ComplexMatrix::from_parts(&m.re, &im)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.dim(),
            re: m.real_rows(),
            im: Some(m.imag_rows()),
        }
    }
}

/// Serializes an `f64` that may be infinite.
pub mod extended_f64 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if x.is_infinite() {
            s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*x)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => match s.as_str() {
                "inf" | "+inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(serde::de::Error::custom(format!("invalid number `{other}`"))),
            },
        }
    }
}

/// Serializes an optional pair of extended reals.
pub mod extended_interval {
    use super::*;

    #[derive(Serialize, Deserialize)]
    struct Wire(
        #[serde(with = "extended_f64")] f64,
        #[serde(with = "extended_f64")] f64,
    );

    pub fn serialize<S: Serializer>(
        x: &Option<(f64, f64)>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        x.map(|(a, b)| Wire(a, b)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<(f64, f64)>, D::Error> {
        Ok(Option::<Wire>::deserialize(d)?.map(|Wire(a, b)| (a, b)))
    }
}
