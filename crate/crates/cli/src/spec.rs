//! Problem specifications: JSON files merged with command-line flags.
//!
//! Simple indices are 1-based here and 0-based in the library.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use dlq_core::decomp::{ChainSpec, ChainTerm};
use dlq_core::{CartanDatum, RootSystem, SimpleSubset, WeylElt, WeylGroup};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Label(String),
    Cartan(Vec<Vec<i32>>),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainTermFile {
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    pub w: Vec<usize>,
    #[serde(default)]
    pub gamma: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub terms: Vec<ChainTermFile>,
    pub x: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub group: Option<GroupSpec>,
    pub twist: Option<Vec<usize>>,
    #[serde(rename = "I")]
    pub i: Option<Vec<usize>>,
    pub w: Option<Vec<usize>>,
    #[serde(rename = "J")]
    pub j: Option<Vec<usize>>,
    pub x: Option<Vec<usize>>,
    #[serde(rename = "wPrime", alias = "w_prime")]
    pub w_prime: Option<Vec<usize>>,
    pub chain: Option<ChainFile>,
    pub n: Option<u32>,
    pub coeff: Option<String>,
    /// Accepted for compatibility; the subcommand decides the mode.
    pub mode: Option<String>,
}

impl ProblemSpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| anyhow!("invalid spec file: {e}"))
    }

    /// Flags win over file values.
    pub fn overlay(mut self, flags: ProblemSpec) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if flags.$f.is_some() { self.$f = flags.$f; } )* };
        }
        take!(group, twist, i, w, j, x, w_prime, chain, n, coeff, mode);
        self
    }
}

/// Parses `1,2,3`; an empty string or `e` is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "e" || s == "[]" {
        return Ok(Vec::new());
    }
    s.trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| anyhow!("invalid index list: {s}")))
        .collect()
}

pub fn parse_group(s: &str) -> Result<GroupSpec> {
    if s.trim_start().starts_with('[') {
        let m = serde_json::from_str(s).map_err(|e| anyhow!("invalid Cartan matrix: {e}"))?;
        Ok(GroupSpec::Cartan(m))
    } else {
        Ok(GroupSpec::Label(s.to_string()))
    }
}

pub fn max_rank() -> Result<usize> {
    match std::env::var("DLQ_MAX_RANK") {
        Ok(v) => v.trim().parse().map_err(|_| anyhow!("invalid DLQ_MAX_RANK: {v}")),
        Err(_) => Ok(8),
    }
}

pub fn build_group(spec: &ProblemSpec) -> Result<WeylGroup> {
    let group = spec.group.as_ref().ok_or_else(|| anyhow!("missing group"))?;
    let mut datum = match group {
        GroupSpec::Label(l) => CartanDatum::from_label(l)?,
        GroupSpec::Cartan(m) => CartanDatum::new(m.clone())?,
    };
    let limit = max_rank()?;
    if datum.rank() > limit {
        bail!("rank {} exceeds DLQ_MAX_RANK={limit}", datum.rank());
    }
    if let Some(t) = &spec.twist {
        if t.len() != datum.rank() {
            bail!("twist must list {} indices", datum.rank());
        }
        let t = t.iter().map(|&k| to_zero_based(k, datum.rank())).collect::<Result<_>>()?;
        datum = CartanDatum::with_twist(datum.cartan, t)?;
    }
    Ok(WeylGroup::new(RootSystem::build(datum)?))
}

fn to_zero_based(k: usize, rank: usize) -> Result<usize> {
    if k == 0 || k > rank {
        bail!("invalid simple index: {k}");
    }
    Ok(k - 1)
}

pub fn indices(g: &WeylGroup, list: &[usize]) -> Result<Vec<usize>> {
    list.iter().map(|&k| to_zero_based(k, g.rank())).collect()
}

pub fn subset(g: &WeylGroup, list: Option<&Vec<usize>>) -> Result<SimpleSubset> {
    Ok(SimpleSubset::from_indices(indices(g, list.map_or(&[][..], |v| v))?))
}

pub fn element(g: &WeylGroup, list: Option<&Vec<usize>>, what: &str) -> Result<WeylElt> {
    let list = list.ok_or_else(|| anyhow!("missing {what}"))?;
    Ok(g.from_word(&indices(g, list)?)?)
}

pub fn one_based(word: &[usize]) -> Vec<usize> {
    word.iter().map(|k| k + 1).collect()
}

pub fn subset_one_based(s: SimpleSubset) -> Vec<usize> {
    s.indices().map(|k| k + 1).collect()
}

pub fn chain(g: &WeylGroup, file: &ChainFile) -> Result<ChainSpec> {
    let terms = file
        .terms
        .iter()
        .map(|t| {
            Ok(ChainTerm {
                i: subset(g, Some(&t.i))?,
                w: element(g, Some(&t.w), "w")?,
                gamma: t.gamma.map(|k| to_zero_based(k, g.rank())).transpose()?,
            })
        })
        .collect::<Result<_>>()?;
    let x = file
        .x
        .iter()
        .map(|x| element(g, Some(x), "x"))
        .collect::<Result<_>>()?;
    Ok(ChainSpec { terms, x })
}
