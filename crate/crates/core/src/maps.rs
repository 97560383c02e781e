//! Functions between digital images and their elementary algebra.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{DigitalImage, Distance};

/// A total function between two images, stored as one target index per
/// source index (canonical order on both sides).
#[derive(Clone)]
pub struct ImageMap {
    source: DigitalImage,
    target: DigitalImage,
    assignment: Vec<usize>,
}

impl fmt::Debug for ImageMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("ImageMap").field(&self.assignment).finish()
    }
}

impl PartialEq for ImageMap {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment && self.source == other.source && self.target == other.target
    }
}

impl Eq for ImageMap {}

/// Everything [`ImageMap::profile`] reports about a self-map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapProfile {
    pub fixed_points: Vec<usize>,
    pub surjective: bool,
    pub injective: bool,
    /// The map is the identity on its own image.
    pub retraction: bool,
    /// Largest geodesic distance from a point to its image.
    pub max_displacement: Distance,
}

impl ImageMap {
    pub fn new(source: DigitalImage, target: DigitalImage, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::MapMismatch(format!(
                "assignment has {} entries for a source of {} points",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&t| t >= target.len()) {
            return Err(Error::IndexOutOfRange { index: bad, len: target.len() });
        }
        Ok(ImageMap { source, target, assignment })
    }

    /// Self-map on `image` from an assignment vector.
    pub fn on(image: &DigitalImage, assignment: Vec<usize>) -> Result<Self> {
        Self::new(image.clone(), image.clone(), assignment)
    }

    pub fn identity(image: &DigitalImage) -> Self {
        ImageMap {
            source: image.clone(),
            target: image.clone(),
            assignment: (0..image.len()).collect(),
        }
    }

    pub fn constant(image: &DigitalImage, value: usize) -> Result<Self> {
        Self::on(image, vec![value; image.len()])
    }

    pub fn source(&self) -> &DigitalImage {
        &self.source
    }

    pub fn target(&self) -> &DigitalImage {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn into_assignment(self) -> Vec<usize> {
        self.assignment
    }

    pub fn apply(&self, index: usize) -> usize {
        self.assignment[index]
    }

    pub fn is_self_map(&self) -> bool {
        self.source == self.target
    }

    pub fn is_identity(&self) -> bool {
        self.is_self_map() && self.assignment.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// Adjacent source points go to adjacent-or-equal target points.
    pub fn is_continuous(&self) -> bool {
        self.source.edges().into_iter().all(|(p, q)| {
            self.target
                .adjacent_or_equal(self.assignment[p], self.assignment[q])
        })
    }

    pub fn image_set(&self) -> Vec<usize> {
        let mut hit = vec![false; self.target.len()];
        for &t in &self.assignment {
            hit[t] = true;
        }
        (0..hit.len()).filter(|&t| hit[t]).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_set().len() == self.target.len()
    }

    pub fn is_injective(&self) -> bool {
        self.image_set().len() == self.source.len()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == i).collect()
    }

    /// `g ∘ f`: applies `f` first.
    pub fn compose(g: &ImageMap, f: &ImageMap) -> Result<ImageMap> {
        if f.target != g.source {
            return Err(Error::MapMismatch("target of f is not the source of g".into()));
        }
        Ok(ImageMap {
            source: f.source.clone(),
            target: g.target.clone(),
            assignment: f.assignment.iter().map(|&y| g.assignment[y]).collect(),
        })
    }

    fn require_self_map(&self) -> Result<()> {
        if self.is_self_map() {
            Ok(())
        } else {
            Err(Error::MapMismatch("expected a self-map".into()))
        }
    }

    pub fn max_displacement(&self) -> Result<Distance> {
        self.require_self_map()?;
        Ok((0..self.assignment.len())
            .map(|i| self.source.distance(i, self.assignment[i]))
            .max()
            .unwrap_or(Distance::Steps(0)))
    }

    pub fn profile(&self) -> Result<MapProfile> {
        self.require_self_map()?;
        let image = self.image_set();
        Ok(MapProfile {
            fixed_points: self.fixed_points(),
            surjective: image.len() == self.target.len(),
            injective: image.len() == self.source.len(),
            retraction: image.iter().all(|&y| self.assignment[y] == y),
            max_displacement: self.max_displacement()?,
        })
    }

    /// Every point reaches its image along a path of at most `n` steps.
    pub fn is_n_map(&self, n: usize) -> Result<bool> {
        self.require_self_map()?;
        if !self.is_continuous() {
            return Err(Error::NotContinuous);
        }
        Ok(!self.max_displacement()?.exceeds(n))
    }

    /// Bijective, and `p ↔ q` exactly when `f(p) ↔ f(q)`.
    pub fn is_isomorphism(&self) -> bool {
        if self.source.len() != self.target.len() || !self.is_injective() {
            return false;
        }
        if self.source.edge_count() != self.target.edge_count() {
            return false;
        }
        self.source.edges().into_iter().all(|(p, q)| {
            self.target
                .adjacent(self.assignment[p], self.assignment[q])
                .unwrap_or(false)
        })
    }
}
