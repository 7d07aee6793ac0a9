//! Serde adapters: rationals travel as `"p/q"` strings (`"p"` when `q = 1`),
//! Gaussian rationals as `{"re": "p/q", "im": "p/q"}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rational, GaussianRational, Rational};

pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let raw = String::deserialize(d)?;
    parse_rational(&raw).map_err(D::Error::custom)
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&v.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|raw| parse_rational(&raw).map_err(D::Error::custom))
            .transpose()
    }
}

#[derive(Serialize, Deserialize)]
struct GaussianRepr {
    re: String,
    im: String,
}

pub mod gaussian {
    use super::*;

    pub fn serialize<S: Serializer>(x: &GaussianRational, s: S) -> Result<S::Ok, S::Error> {
        GaussianRepr { re: x.re.to_string(), im: x.im.to_string() }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GaussianRational, D::Error> {
        let r = GaussianRepr::deserialize(d)?;
        let re = parse_rational(&r.re).map_err(D::Error::custom)?;
        let im = parse_rational(&r.im).map_err(D::Error::custom)?;
        Ok(GaussianRational::new(re, im))
    }
}

/// A scalar that is usually real: emitted as a plain rational string when the
/// imaginary part vanishes, as a Gaussian object otherwise.
pub mod scalar {
    use super::*;
    use num_traits::Zero;

    pub fn serialize<S: Serializer>(x: &GaussianRational, s: S) -> Result<S::Ok, S::Error> {
        if x.im.is_zero() {
            s.serialize_str(&x.re.to_string())
        } else {
            gaussian::serialize(x, s)
        }
    }
}
