//! Serde adapters that move integers as decimal strings.
//!
//! Values routinely exceed 64 bits, so every integer field of a serialized
//! record is written as a JSON string of decimal digits.

use std::fmt::Display;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serializer};

pub fn serialize<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
where
    T: FromStr,
    T::Err: Display,
    D: Deserializer<'de>,
{
    let text = String::deserialize(d)?;
    if text.is_empty() || !text.bytes().all(|c| c.is_ascii_digit()) {
        return Err(de::Error::custom(format!(
            "expected decimal digits, got {text:?}"
        )));
    }
    text.parse().map_err(de::Error::custom)
}

/// Same as the parent module, for a list of integers.
pub mod seq {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<T: Display, S: Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Vec<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let items = Vec::<String>::deserialize(d)?;
        items
            .into_iter()
            .map(|text| {
                if text.is_empty() || !text.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(de::Error::custom(format!(
                        "expected decimal digits, got {text:?}"
                    )));
                }
                text.parse().map_err(de::Error::custom)
            })
            .collect()
    }
}
