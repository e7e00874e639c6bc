//! Serde helpers: rationals and big integers are written as strings such as "-1/2".

use num_bigint::BigInt;
use serde::ser::{SerializeSeq, Serializer};

use crate::linalg::{QMatrix, Q};

pub fn q<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn q_vec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn q_vecs<S: Serializer>(vs: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for v in vs {
        seq.serialize_element(&v.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
    }
    seq.end()
}

pub fn q_matrix<S: Serializer>(m: &QMatrix, s: S) -> Result<S::Ok, S::Error> {
    q_vecs(&m.to_rows(), s)
}

pub fn bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}
