//! Image documents: the JSON text form of a digital image.
//!
//! ```json
//! {
//!   "name": "interval02",
//!   "dimension": 1,
//!   "adjacency": {"kind":"cu","u":1},
//!   "points": [[0],[1],[2]]
//! }
//! ```
//!
//! `adjacency.kind` is one of `cu` (`u`), `np` (`u` plus nested factor
//! documents) or `edges` (pairs of points). Points are re-sorted into
//! canonical order on load; serialization always writes canonical order.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::constructors::product;
use crate::error::{Error, Result};
use crate::lattice::{AdjacencySpec, DigitalImage, Point};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AdjacencyDocument {
    Cu { u: usize },
    Np { u: usize, factors: Vec<ImageDocument> },
    Edges { edges: Vec<(Point, Point)> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    pub adjacency: AdjacencyDocument,
    pub points: Vec<Point>,
}

impl ImageDocument {
    pub fn from_image(x: &DigitalImage, name: Option<&str>) -> Self {
        let adjacency = match x.adjacency() {
            AdjacencySpec::Cu { u } => AdjacencyDocument::Cu { u: *u },
            AdjacencySpec::Np { u, factors } => AdjacencyDocument::Np {
                u: *u,
                factors: factors.iter().map(|f| ImageDocument::from_image(f, None)).collect(),
            },
            AdjacencySpec::Explicit { .. } => AdjacencyDocument::Edges {
                edges: x
                    .edges()
                    .into_iter()
                    .map(|(p, q)| (x.point(p).clone(), x.point(q).clone()))
                    .collect(),
            },
        };
        ImageDocument {
            name: name.map(str::to_string),
            dimension: x.dimension(),
            adjacency,
            points: x.points().to_vec(),
        }
    }

    pub fn to_image(&self) -> Result<DigitalImage> {
        if self.points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if let Some(p) = self.points.iter().find(|p| p.dimension() != self.dimension) {
            return Err(Error::DimensionMismatch {
                point: p.clone(),
                expected: self.dimension,
                found: p.dimension(),
            });
        }
        match &self.adjacency {
            AdjacencyDocument::Cu { u } => DigitalImage::build(self.points.clone(), AdjacencySpec::Cu { u: *u }),
            AdjacencyDocument::Np { u, factors } => {
                let factors = factors.iter().map(ImageDocument::to_image).collect::<Result<Vec<_>>>()?;
                let declared = DigitalImage::build(
                    self.points.clone(),
                    AdjacencySpec::Np {
                        u: *u,
                        factors: factors.clone(),
                    },
                )?;
                let full = product(&factors, *u)?;
                if full.points() != declared.points() {
                    return Err(Error::Document(format!(
                        "np point set has {} points but the factor product has {}",
                        declared.len(),
                        full.len()
                    )));
                }
                Ok(declared)
            }
            AdjacencyDocument::Edges { edges } => {
                let mut sorted = self.points.clone();
                sorted.sort();
                let index = |p: &Point| {
                    sorted
                        .binary_search(p)
                        .map_err(|_| Error::Document(format!("edge endpoint {p} is not a point of the image")))
                };
                let edges = edges
                    .iter()
                    .map(|(p, q)| Ok((index(p)?, index(q)?)))
                    .collect::<Result<BTreeSet<_>>>()?;
                DigitalImage::build(self.points.clone(), AdjacencySpec::Explicit { edges })
            }
        }
    }

    /// Canonical text: fixed key order, one key per line, compact values.
    pub fn to_text(&self) -> String {
        let mut out = String::from("{\n");
        if let Some(name) = &self.name {
            out.push_str(&format!("  \"name\": {},\n", json(name)));
        }
        out.push_str(&format!("  \"dimension\": {},\n", self.dimension));
        out.push_str(&format!("  \"adjacency\": {},\n", json(&self.adjacency)));
        out.push_str(&format!("  \"points\": {}\n", json(&self.points)));
        out.push_str("}\n");
        out
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("document values serialize")
}

pub fn parse_document(text: &str) -> Result<ImageDocument> {
    serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))
}

/// Parses document text into an image.
pub fn parse_image_document(text: &str) -> Result<DigitalImage> {
    parse_document(text)?.to_image()
}

/// Canonical document text for `x`.
pub fn serialize(x: &DigitalImage, name: Option<&str>) -> String {
    ImageDocument::from_image(x, name).to_text()
}
