//! Serde helpers for arbitrary-precision integers.
//!
//! Values that fit in `u64` are written as JSON numbers, larger ones as
//! decimal strings, since most JSON readers cannot hold wider integers. Map keys are always decimal strings.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::ser::SerializeMap;
use serde::Serializer;

pub fn big<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    match value.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&value.to_str_radix(10)),
    }
}

pub fn wide<S: Serializer>(value: &u128, s: S) -> Result<S::Ok, S::Error> {
    match u64::try_from(*value) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&value.to_string()),
    }
}

pub fn big_opt<S: Serializer>(value: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => big(v, s),
        None => s.serialize_none(),
    }
}

pub fn big_keyed<S: Serializer, V: serde::Serialize>(
    map: &BTreeMap<BigUint, V>,
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        m.serialize_entry(&k.to_str_radix(10), v)?;
    }
    m.end()
}
