//! Serde adapters for exact values in JSON reports.
//!
//! Rationals become `{"num": "...", "den": "..."}` with decimal strings and
//! big integers become decimal strings.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
struct Fraction {
    num: String,
    den: String,
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        Fraction {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let f = Fraction::deserialize(d)?;
        let num: BigInt = f.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = f.den.parse().map_err(D::Error::custom)?;
        if den == BigInt::from(0) {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}

pub mod opt_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => super::rational::serialize(r, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        Option::<Fraction>::deserialize(d)?
            .map(|f| {
                let num: BigInt = f.num.parse().map_err(D::Error::custom)?;
                let den: BigInt = f.den.parse().map_err(D::Error::custom)?;
                Ok(BigRational::new(num, den))
            })
            .transpose()
    }
}

pub mod biguint {
    use super::*;

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

pub mod biguint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|n| n.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|s| s.parse().map_err(D::Error::custom))
            .collect()
    }
}
