//! Serde adapters that keep arbitrary-precision integers and rationals
//! readable in JSON (decimal strings) and lossless on round trip.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::str::FromStr;

pub mod bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let raw = String::deserialize(d)?;
        BigInt::from_str(&raw).map_err(serde::de::Error::custom)
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|x| BigInt::from_str(x).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod bigint_vec_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = v
            .iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect())
            .collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|row| {
                row.iter()
                    .map(|x| BigInt::from_str(x).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Parse `a` or `a/b` into an exact rational.
pub fn parse_rational(raw: &str) -> Result<BigRational, String> {
    let raw = raw.trim();
    match raw.split_once('/') {
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).map_err(|e| e.to_string())?;
            let d = BigInt::from_str(den.trim()).map_err(|e| e.to_string())?;
            if d == BigInt::from(0) {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n = BigInt::from_str(raw).map_err(|e| e.to_string())?;
            Ok(BigRational::from_integer(n))
        }
    }
}
