//! Network description files.
//!
//! A network is written as TOML:
//!
//! ```toml
//! format = "rdlab-network"
//! version = 1
//! name = "four_species"
//! species = ["A1", "A2", "A3", "A4"]
//! growth_constant = 1.0
//!
//! [[rate]]
//! species = "A1"
//!
//! [[rate.terms]]
//! coeff = -1.0
//! exponents = [1, 0, 1, 0]
//! ```
//!
//! There is one `[[rate]]` table per species, in species order, and each term
//! is a `(coeff, exponents)` pair. Floats are written in shortest round-trip
//! form, so `write(read(text)) == text` for any file produced by this module.

use serde::{Deserialize, Serialize};

use super::{Monomial, ReactionNetwork};
use crate::error::{Error, Result};

pub const FORMAT_TAG: &str = "rdlab-network";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub format: String,
    pub version: u32,
    pub name: String,
    pub species: Vec<String>,
    pub growth_constant: f64,
    pub rate: Vec<RateEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateEntry {
    pub species: String,
    #[serde(default)]
    pub terms: Vec<Monomial>,
}

impl NetworkFile {
    pub fn from_network(net: &ReactionNetwork) -> Self {
        Self {
            format: FORMAT_TAG.to_string(),
            version: FORMAT_VERSION,
            name: net.name().to_string(),
            species: net.species().to_vec(),
            growth_constant: net.growth_constant(),
            rate: net
                .species()
                .iter()
                .zip(net.rates())
                .map(|(s, terms)| RateEntry {
                    species: s.clone(),
                    terms: terms.clone(),
                })
                .collect(),
        }
    }

    pub fn into_network(self) -> Result<ReactionNetwork> {
        if self.format != FORMAT_TAG {
            return Err(Error::Parse(format!(
                "expected format = \"{FORMAT_TAG}\", found \"{}\"",
                self.format
            )));
        }
        if self.version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported network file version {}",
                self.version
            )));
        }
        if self.rate.len() != self.species.len() {
            return Err(Error::Parse(format!(
                "{} species declared but {} [[rate]] tables",
                self.species.len(),
                self.rate.len()
            )));
        }
        for (s, r) in self.species.iter().zip(&self.rate) {
            if *s != r.species {
                return Err(Error::Parse(format!(
                    "rate table for '{}' out of order (expected '{}')",
                    r.species, s
                )));
            }
        }
        let rates = self.rate.into_iter().map(|r| r.terms).collect();
        ReactionNetwork::new(self.name, self.species, rates, self.growth_constant)
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

impl ReactionNetwork {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: NetworkFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_network()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&NetworkFile::from_network(self)).expect("network file serializes")
    }
}
