//! JSON element files.
//!
//! ```json
//! {"d": 2, "F_generators": ["(1 2)"], "domain": [[0],[1],[2]], "range": [[0],[2],[1]], "kappa": [0,1,2]}
//! ```
//! Generators are cycle strings or image arrays. Elements are always written reduced.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::almostauto::{ElementError, TreePairElement};
use crate::permgrp::{Colour, ColourGroup, PermError, Permutation};
use crate::tree::{PlaneOrder, VertexAddress};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("field {field}: {message}")]
    Field { field: &'static str, message: String },
    #[error("generator {index}: {source}")]
    Generator { index: usize, source: PermError },
    #[error(transparent)]
    Element(#[from] ElementError),
    #[error("{0}")]
    Read(#[from] std::io::Error),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Cycles(String),
    Images(Vec<Colour>),
}

impl GeneratorSpec {
    pub fn to_permutation(&self, degree: usize) -> Result<Permutation, PermError> {
        match self {
            GeneratorSpec::Cycles(s) => Permutation::parse_cycles(s, degree),
            GeneratorSpec::Images(v) => {
                if v.len() != degree {
                    return Err(PermError::DegreeMismatch { index: 0, expected: degree, found: v.len() });
                }
                Permutation::from_images(v.clone())
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementFile {
    pub d: usize,
    #[serde(rename = "F_generators", default)]
    pub f_generators: Vec<GeneratorSpec>,
    pub domain: Vec<Vec<Colour>>,
    pub range: Vec<Vec<Colour>>,
    pub kappa: Vec<usize>,
}

/// Builds the colour group from a degree `d` and generator specs.
pub fn group_from_specs(d: usize, gens: &[GeneratorSpec]) -> Result<ColourGroup, IoError> {
    if d < 2 {
        return Err(IoError::Field { field: "d", message: format!("must be at least 2, got {d}") });
    }
    let perms = gens
        .iter()
        .enumerate()
        .map(|(index, g)| g.to_permutation(d + 1).map_err(|source| IoError::Generator { index, source }))
        .collect::<Result<Vec<_>, _>>()?;
    ColourGroup::generate(d + 1, perms).map_err(|source| IoError::Generator { index: 0, source })
}

fn addresses(field: &'static str, words: Vec<Vec<Colour>>, d: usize) -> Result<Vec<VertexAddress>, IoError> {
    words
        .into_iter()
        .enumerate()
        .map(|(i, w)| VertexAddress::new(w, d).map_err(|e| IoError::Field { field, message: format!("entry {i}: {e}") }))
        .collect()
}

impl ElementFile {
    pub fn plane(&self) -> Result<Arc<PlaneOrder>, IoError> {
        Ok(PlaneOrder::new(group_from_specs(self.d, &self.f_generators)?))
    }

    /// Validates against `plane` and reduces.
    pub fn to_element_in(self, plane: &Arc<PlaneOrder>) -> Result<TreePairElement, IoError> {
        if plane.d() != self.d {
            return Err(IoError::Field { field: "d", message: format!("expected {}, found {}", plane.d(), self.d) });
        }
        let domain = addresses("domain", self.domain, self.d)?;
        let range = addresses("range", self.range, self.d)?;
        Ok(TreePairElement::new(plane, domain, range, self.kappa)?)
    }

    pub fn to_element(self) -> Result<TreePairElement, IoError> {
        let plane = self.plane()?;
        self.to_element_in(&plane)
    }

    pub fn from_element(e: &TreePairElement) -> Self {
        let e = e.reduce();
        let group = e.group();
        let mut f_generators = Vec::new();
        for g in group.generators() {
            let spec = GeneratorSpec::Cycles(g.to_cycle_string());
            if !g.is_identity() && !f_generators.contains(&spec) {
                f_generators.push(spec);
            }
        }
        ElementFile {
            d: e.d(),
            f_generators,
            domain: e.domain().leaves().iter().map(|l| l.word().to_vec()).collect(),
            range: e.range().leaves().iter().map(|l| l.word().to_vec()).collect(),
            kappa: e.kappa().to_vec(),
        }
    }
}

pub fn parse_element_str(text: &str) -> Result<TreePairElement, IoError> {
    let f: ElementFile = serde_json::from_str(text)?;
    f.to_element()
}

/// Parses an element and checks it lives over `plane`.
pub fn parse_element_str_in(text: &str, plane: &Arc<PlaneOrder>) -> Result<TreePairElement, IoError> {
    let f: ElementFile = serde_json::from_str(text)?;
    f.to_element_in(plane)
}

pub fn parse_element_file(path: &std::path::Path) -> Result<TreePairElement, IoError> {
    parse_element_str(&std::fs::read_to_string(path)?)
}

pub fn element_to_json(e: &TreePairElement) -> String {
    serde_json::to_string(&ElementFile::from_element(e)).expect("element files serialize")
}
