//! Standard images: digital intervals, boxes, normal products, wedges, and
//! the lattice symmetries used to produce isomorphic copies.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::{AdjacencySpec, DigitalImage, Point};
use crate::maps::ImageMap;

/// `[a, b]_Z` with `c_1` adjacency.
pub fn interval(a: i64, b: i64) -> Result<DigitalImage> {
    if a > b {
        return Err(Error::InvalidInterval { a, b });
    }
    DigitalImage::build((a..=b).map(|z| Point::new(vec![z])), AdjacencySpec::Cu { u: 1 })
}

/// `∏ [a_i, b_i]_Z` with `c_u` adjacency.
pub fn digital_box(axes: &[(i64, i64)], u: usize) -> Result<DigitalImage> {
    if axes.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    for &(a, b) in axes {
        if a > b {
            return Err(Error::InvalidInterval { a, b });
        }
    }
    let mut points = vec![Vec::new()];
    for &(a, b) in axes {
        points = points
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (a..=b).map(move |z| {
                    let mut p = prefix.clone();
                    p.push(z);
                    p
                })
            })
            .collect();
    }
    DigitalImage::build(points.into_iter().map(Point::new), AdjacencySpec::Cu { u })
}

/// Cartesian product of `factors` with `NP_u` adjacency. Coordinates are
/// concatenated in factor order.
pub fn product(factors: &[DigitalImage], u: usize) -> Result<DigitalImage> {
    if factors.is_empty() {
        return Err(Error::InvalidAdjacency("a product needs at least one factor".into()));
    }
    if u < 1 || u > factors.len() {
        return Err(Error::InvalidAdjacency(format!(
            "NP_{u} over {} factors requires 1 <= u <= v",
            factors.len()
        )));
    }
    let mut points = vec![Vec::new()];
    for factor in factors {
        points = points
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                factor.points().iter().map(move |p| {
                    let mut q = prefix.clone();
                    q.extend_from_slice(p.coords());
                    q
                })
            })
            .collect();
    }
    DigitalImage::build(
        points.into_iter().map(Point::new),
        AdjacencySpec::Np {
            u,
            factors: factors.to_vec(),
        },
    )
}

/// A validated wedge `X ∨ Y`.
#[derive(Clone, Debug)]
pub struct Wedge {
    pub image: DigitalImage,
    /// Index of the shared point in `image`.
    pub wedge_point: usize,
}

impl Wedge {
    /// Indices of `image` belonging to the summand with the given points.
    pub fn part(&self, summand: &DigitalImage) -> Vec<usize> {
        summand
            .points()
            .iter()
            .map(|p| self.image.index_of(p).expect("summand point lies in the wedge"))
            .collect()
    }
}

fn explicit_edges_by_point(x: &DigitalImage) -> Vec<(Point, Point)> {
    x.edges()
        .into_iter()
        .map(|(p, q)| (x.point(p).clone(), x.point(q).clone()))
        .collect()
}

/// Validates that `x` and `y`, as embedded, meet in exactly one point with
/// no other adjacency between them, and returns their union.
///
/// Two `c_u` images must share `u`. Images with explicit or product
/// adjacency are joined as an explicit edge union.
pub fn wedge(x: &DigitalImage, y: &DigitalImage) -> Result<Wedge> {
    if x.dimension() != y.dimension() {
        return Err(Error::InvalidWedge(format!(
            "dimensions differ ({} vs {})",
            x.dimension(),
            y.dimension()
        )));
    }
    let shared: Vec<&Point> = x.points().iter().filter(|p| y.contains(p)).collect();
    if shared.len() != 1 {
        return Err(Error::InvalidWedge(format!(
            "summands share {} points, expected exactly 1",
            shared.len()
        )));
    }
    let wedge_point = shared[0].clone();
    let union: Vec<Point> = x
        .points()
        .iter()
        .chain(y.points().iter().filter(|p| **p != wedge_point))
        .cloned()
        .collect();

    let image = match (x.adjacency(), y.adjacency()) {
        (AdjacencySpec::Cu { u: a }, AdjacencySpec::Cu { u: b }) => {
            if a != b {
                return Err(Error::InvalidWedge(format!("adjacency families differ: c_{a} vs c_{b}")));
            }
            DigitalImage::build(union, AdjacencySpec::Cu { u: *a })?
        }
        (AdjacencySpec::Cu { .. }, _) | (_, AdjacencySpec::Cu { .. }) => {
            return Err(Error::InvalidWedge(format!(
                "adjacency families differ: {} vs {}",
                x.adjacency().family_name(),
                y.adjacency().family_name()
            )));
        }
        _ => {
            let mut sorted = union.clone();
            sorted.sort();
            let index = |p: &Point| sorted.binary_search(p).expect("edge endpoint in union");
            let edges: BTreeSet<(usize, usize)> = explicit_edges_by_point(x)
                .iter()
                .chain(explicit_edges_by_point(y).iter())
                .map(|(p, q)| (index(p), index(q)))
                .collect();
            DigitalImage::build(union, AdjacencySpec::Explicit { edges })?
        }
    };

    let wp = image.index_of(&wedge_point).expect("wedge point in union");
    for (p, q) in image.edges() {
        let (a, b) = (image.point(p), image.point(q));
        if p != wp && q != wp && x.contains(a) != x.contains(b) {
            return Err(Error::InvalidWedge(format!("{a} and {b} are adjacent across the summands")));
        }
    }
    Ok(Wedge { image, wedge_point: wp })
}

/// Point symmetries of `Z^n` that preserve every `c_u` adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeTransform {
    Translate(Vec<i64>),
    /// New coordinate `i` is old coordinate `perm[i]`.
    Permute(Vec<usize>),
    /// Negate the flagged axes.
    Reflect(Vec<bool>),
}

impl LatticeTransform {
    fn dimension(&self) -> usize {
        match self {
            LatticeTransform::Translate(v) => v.len(),
            LatticeTransform::Permute(v) => v.len(),
            LatticeTransform::Reflect(v) => v.len(),
        }
    }

    pub fn apply(&self, p: &Point) -> Point {
        let c = p.coords();
        Point::new(match self {
            LatticeTransform::Translate(t) => c.iter().zip(t).map(|(a, b)| a + b).collect(),
            LatticeTransform::Permute(perm) => perm.iter().map(|&i| c[i]).collect(),
            LatticeTransform::Reflect(flags) => c
                .iter()
                .zip(flags)
                .map(|(&a, &f)| if f { -a } else { a })
                .collect(),
        })
    }
}

/// Applies a lattice symmetry to `x`, returning the moved image and the
/// induced bijection `x → moved`.
///
/// `c_u` images keep their adjacency; other images carry their edges over
/// as explicit adjacency.
pub fn lattice_symmetry(x: &DigitalImage, transform: &LatticeTransform) -> Result<(DigitalImage, ImageMap)> {
    let n = x.dimension();
    if transform.dimension() != n {
        return Err(Error::InvalidAdjacency(format!(
            "transform has dimension {}, image has dimension {n}",
            transform.dimension()
        )));
    }
    if let LatticeTransform::Permute(perm) = transform {
        let mut seen = perm.clone();
        seen.sort_unstable();
        if seen != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidAdjacency(format!("{perm:?} is not a permutation")));
        }
    }
    let moved: Vec<Point> = x.points().iter().map(|p| transform.apply(p)).collect();
    let mut sorted = moved.clone();
    sorted.sort();
    let index = |p: &Point| sorted.binary_search(p).expect("moved point present");
    let spec = match x.adjacency() {
        AdjacencySpec::Cu { u } => AdjacencySpec::Cu { u: *u },
        _ => AdjacencySpec::Explicit {
            edges: x
                .edges()
                .into_iter()
                .map(|(p, q)| (index(&moved[p]), index(&moved[q])))
                .collect(),
        },
    };
    let y = DigitalImage::build(moved.iter().cloned(), spec)?;
    let assignment = moved.iter().map(|p| y.index_of(p).expect("moved point present")).collect();
    let map = ImageMap::new(x.clone(), y.clone(), assignment)?;
    Ok((y, map))
}

/// Image on the listed planar points with `c_u` adjacency.
pub fn simple_closed_curve_in_plane(points: &[(i64, i64)], u: usize) -> Result<DigitalImage> {
    DigitalImage::build(points.iter().map(|&(a, b)| Point::new(vec![a, b])), AdjacencySpec::Cu { u })
}
