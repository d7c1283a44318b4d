//! JSON wire formats. Complex numbers travel as `[re, im]` pairs.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermite::{Node, NodeSystem};
use crate::poly::Polynomial;

/// `#[serde(with = "complex")]` for a single value.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// `#[serde(with = "complex_vec")]` for a list.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}

/// `{"coeffs": [[re, im], ...]}`, ascending degree. Unknown fields are
/// ignored, so any report carrying a `coeffs` field is accepted as input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialJson {
    #[serde(with = "complex_vec")]
    pub coeffs: Vec<Complex64>,
}

impl PolynomialJson {
    pub fn into_polynomial(self) -> Result<Polynomial> {
        Polynomial::new(self.coeffs)
    }
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        Self { coeffs: p.coeffs().to_vec() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeJson {
    #[serde(with = "complex")]
    pub z: Complex64,
    #[serde(with = "complex")]
    pub alpha: Complex64,
}

/// `{"nodes": [{"z": [re, im], "alpha": [re, im]}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeSystemJson {
    pub nodes: Vec<NodeJson>,
}

impl NodeSystemJson {
    pub fn into_system(self) -> Result<NodeSystem> {
        NodeSystem::new(self.nodes.into_iter().map(|n| Node::new(n.z, n.alpha)).collect())
    }
}

impl From<&NodeSystem> for NodeSystemJson {
    fn from(s: &NodeSystem) -> Self {
        Self { nodes: s.nodes().iter().map(|n| NodeJson { z: n.z, alpha: n.alpha }).collect() }
    }
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let j: PolynomialJson =
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("polynomial JSON: {e}")))?;
    j.into_polynomial()
}

pub fn parse_node_system(text: &str) -> Result<NodeSystem> {
    let j: NodeSystemJson =
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("node system JSON: {e}")))?;
    j.into_system()
}

/// Serializes with a fixed field order. Floats use the shortest form that
/// parses back to the identical double.
pub fn to_json_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report types always serialize")
}
