//! JSON formats.
//!
//! ```text
//! bigraph        {"v1":[ids],"v2":[ids],"edges":[[l,r],...]}
//! flag           bigraph fields plus "labels":[ids in label order]
//! kernel         {"mu":[...],"nu":[...],"values":[[...],...]}
//! decomposition  {"bags":[[ids],...],"tree_edges":[[i,j],...]}
//! ```
//!
//! Parsing enforces every invariant of the target type. Errors carry the
//! JSON path of the offending field.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize, Serializer};

use crate::bigraph::Bigraph;
use crate::decomp::TreeDecomposition;
use crate::error::{Error, Result};
use crate::flag::Flag;
use crate::stepfn::StepBigraphon;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBigraph {
    v1: Vec<String>,
    v2: Vec<String>,
    edges: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFlag {
    v1: Vec<String>,
    v2: Vec<String>,
    edges: Vec<(String, String)>,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKernel {
    mu: Vec<f64>,
    nu: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecomposition {
    bags: Vec<Vec<String>>,
    tree_edges: Vec<(usize, usize)>,
}

fn raw_edges(g: &Bigraph) -> Vec<(String, String)> {
    g.edges()
        .iter()
        .map(|&(l, r)| (g.left_ids()[l].clone(), g.right_ids()[r].clone()))
        .collect()
}

impl Serialize for Bigraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawBigraph {
            v1: self.left_ids().to_vec(),
            v2: self.right_ids().to_vec(),
            edges: raw_edges(self),
        }
        .serialize(s)
    }
}

impl Serialize for Flag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let g = self.underlying();
        RawFlag {
            v1: g.left_ids().to_vec(),
            v2: g.right_ids().to_vec(),
            edges: raw_edges(g),
            labels: self.label_ids(),
        }
        .serialize(s)
    }
}

impl Serialize for StepBigraphon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawKernel {
            mu: self.mu().to_vec(),
            nu: self.nu().to_vec(),
            values: self.rows(),
        }
        .serialize(s)
    }
}

fn decode<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse {
            path,
            message: e.into_inner().to_string(),
        }
    })?;
    de.end().map_err(|e| Error::Parse {
        path: ".".into(),
        message: e.to_string(),
    })?;
    Ok(value)
}

pub fn parse_bigraph(text: &str) -> Result<Bigraph> {
    let raw: RawBigraph = decode(text)?;
    Bigraph::new(raw.v1, raw.v2, raw.edges)
}

pub fn parse_flag(text: &str) -> Result<Flag> {
    let raw: RawFlag = decode(text)?;
    Flag::new(Bigraph::new(raw.v1, raw.v2, raw.edges)?, raw.labels)
}

pub fn parse_kernel(text: &str) -> Result<StepBigraphon> {
    let raw: RawKernel = decode(text)?;
    StepBigraphon::new(raw.mu, raw.nu, raw.values)
}

pub fn parse_decomposition(text: &str) -> Result<TreeDecomposition> {
    let raw: RawDecomposition = decode(text)?;
    TreeDecomposition::new(raw.bags, raw.tree_edges)
}

/// Which schema to parse against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Bigraph,
    Flag,
    Kernel,
    Decomposition,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Bigraph(Bigraph),
    Flag(Flag),
    Kernel(StepBigraphon),
    Decomposition(TreeDecomposition),
}

pub fn parse_input(text: &str, schema: Schema) -> Result<Parsed> {
    Ok(match schema {
        Schema::Bigraph => Parsed::Bigraph(parse_bigraph(text)?),
        Schema::Flag => Parsed::Flag(parse_flag(text)?),
        Schema::Kernel => Parsed::Kernel(parse_kernel(text)?),
        Schema::Decomposition => Parsed::Decomposition(parse_decomposition(text)?),
    })
}

/// Compact JSON for any serializable value.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data always serializes")
}
