//! Serde representation of exact rationals: `{"exact": "p/q", "approx": 0.5}`.

use std::str::FromStr;

use num::{BigRational, ToPrimitive};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct Repr {
    exact: String,
    approx: f64,
}

pub fn to_exact_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    Repr { exact: to_exact_string(q), approx: q.to_f64().unwrap_or(f64::NAN) }.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
    let repr = Repr::deserialize(d)?;
    BigRational::from_str(&repr.exact).map_err(|e| de::Error::custom(format!("bad rational {:?}: {e}", repr.exact)))
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&Repr { exact: to_exact_string(q), approx: q.to_f64().unwrap_or(f64::NAN) }),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<Repr>::deserialize(d)?
            .map(|r| BigRational::from_str(&r.exact).map_err(|e| de::Error::custom(e.to_string())))
            .transpose()
    }
}
