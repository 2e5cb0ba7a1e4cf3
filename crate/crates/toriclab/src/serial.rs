//! JSON encodings of exact values. Rationals are written as `"p/q"` strings;
//! integer matrices as JSON numbers. Readers accept either form for both.

use crate::error::{Error, Result};
use crate::exact_lattice::{parse_rational, LatVec, QMatrix, Rational};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;

/// A rational written as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QStr(pub Rational);

/// A rational written as a JSON number when integral and fitting in `i64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QNum(pub Rational);

impl Serialize for QStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl Serialize for QNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        match self.0.is_integer().then(|| self.0.to_integer().to_i64()).flatten() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        parse_rational(v).map_err(|e| E::custom(e.to_string()))
    }
}

impl<'de> Deserialize<'de> for QStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(RationalVisitor).map(QStr)
    }
}

impl<'de> Deserialize<'de> for QNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(RationalVisitor).map(QNum)
    }
}

pub fn vec_out(v: &[Rational]) -> Vec<QStr> {
    v.iter().cloned().map(QStr).collect()
}

pub fn vec_in(v: &[QStr]) -> LatVec {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn mat_out(m: &[LatVec]) -> Vec<Vec<QStr>> {
    m.iter().map(|r| vec_out(r)).collect()
}

pub fn mat_in(m: &[Vec<QStr>]) -> QMatrix {
    m.iter().map(|r| vec_in(r)).collect()
}

pub fn num_mat_out(m: &[LatVec]) -> Vec<Vec<QNum>> {
    m.iter().map(|r| r.iter().cloned().map(QNum).collect()).collect()
}

pub fn num_mat_in(m: &[Vec<QNum>]) -> QMatrix {
    m.iter().map(|r| r.iter().map(|x| x.0.clone()).collect()).collect()
}

/// Parses JSON, reporting line and column on failure.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_lattice::{q, qf};

    #[test]
    fn rationals_round_trip() {
        let v = vec![QStr(qf(-3, 4)), QStr(q(2))];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["-3/4","2"]"#);
        let back: Vec<QStr> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        let n: Vec<QNum> = serde_json::from_str(r#"[1, "1/2", -7]"#).unwrap();
        assert_eq!(serde_json::to_string(&n).unwrap(), r#"[1,"1/2",-7]"#);
    }

    #[test]
    fn bad_input_is_a_parse_error() {
        assert!(matches!(from_json::<Vec<QStr>>(r#"["1/0"]"#), Err(Error::Parse(_))));
        assert!(matches!(from_json::<Vec<QStr>>("[1.5]"), Err(Error::Parse(_))));
    }
}
