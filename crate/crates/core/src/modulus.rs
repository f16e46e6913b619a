use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An extended-real modulus.
///
/// `+∞` means every modulus holds (vacuous: no informative pair);
/// `−∞` means no finite modulus holds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Modulus(f64);

impl Modulus {
    pub const INFINITY: Modulus = Modulus(f64::INFINITY);
    pub const NEG_INFINITY: Modulus = Modulus(f64::NEG_INFINITY);

    pub fn finite(value: f64) -> Self {
        debug_assert!(!value.is_nan());
        Modulus(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl From<f64> for Modulus {
    fn from(v: f64) -> Self {
        Modulus(v)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("inf")
        } else if self.0 == f64::NEG_INFINITY {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Finite values serialize as JSON numbers, infinities as `"inf"` / `"-inf"`.
impl Serialize for Modulus {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_extended(&self.0, s)
    }
}

pub(crate) fn serialize_extended<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    let v = *v;
    if v.is_finite() {
        s.serialize_f64(v)
    } else if v == f64::INFINITY {
        s.serialize_str("inf")
    } else if v == f64::NEG_INFINITY {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}

impl<'de> Deserialize<'de> for Modulus {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        deserialize_extended(d).map(Modulus)
    }
}

pub(crate) fn deserialize_extended<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(v) => Ok(v),
        Raw::Text(t) => match t.as_str() {
            "inf" | "+inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(serde::de::Error::custom(format!("bad extended real {other:?}"))),
        },
    }
}
