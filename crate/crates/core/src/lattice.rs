//! Lattice points, adjacency relations and finite digital images.
//!
//! A [`DigitalImage`] is a finite set of points of `Z^n` kept in strict
//! lexicographic order, together with a symmetric, irreflexive adjacency.
//! Every index handed out by this crate (witness maps, pin sets, paths)
//! refers to that canonical order.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bitset over point indices of one image.
pub type IndexSet = FixedBitSet;

/// A lattice point of `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<i64>);

impl Point {
    pub fn new(coords: Vec<i64>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// Projection onto coordinate `axis`.
    pub fn coord(&self, axis: usize) -> i64 {
        self.0[axis]
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }
}

impl From<Vec<i64>> for Point {
    fn from(coords: Vec<i64>) -> Self {
        Point(coords)
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(coords: [i64; N]) -> Self {
        Point(coords.to_vec())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// How the points of an image are declared adjacent.
#[derive(Clone, Debug, PartialEq)]
pub enum AdjacencySpec {
    /// `c_u`: distinct points differing by exactly 1 in at most `u`
    /// coordinates and equal in the rest.
    Cu { u: usize },
    /// Normal product adjacency `NP_u` over factor images. Points are the
    /// concatenation of one point from each factor; distinct tuples are
    /// adjacent when between 1 and `u` blocks are factor-adjacent and the
    /// remaining blocks are equal.
    Np { u: usize, factors: Vec<DigitalImage> },
    /// Unordered index pairs into the canonical (sorted) point order.
    Explicit { edges: BTreeSet<(usize, usize)> },
}

impl AdjacencySpec {
    pub fn family_name(&self) -> String {
        match self {
            AdjacencySpec::Cu { u } => format!("c_{u}"),
            AdjacencySpec::Np { u, factors } => format!("NP_{u} over {} factors", factors.len()),
            AdjacencySpec::Explicit { .. } => "explicit".to_string(),
        }
    }
}

/// Whether two points are `c_u`-adjacent.
pub fn cu_adjacent(p: &[i64], q: &[i64], u: usize) -> bool {
    let mut differing = 0;
    for (a, b) in p.iter().zip(q) {
        match (a - b).abs() {
            0 => {}
            1 => differing += 1,
            _ => return false,
        }
    }
    differing >= 1 && differing <= u
}

/// Geodesic distance inside an image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Steps(usize),
    Unreachable,
}

impl Distance {
    pub fn steps(self) -> Option<usize> {
        match self {
            Distance::Steps(m) => Some(m),
            Distance::Unreachable => None,
        }
    }

    /// True when no path of length at most `s` exists.
    pub fn exceeds(self, s: usize) -> bool {
        match self {
            Distance::Steps(m) => m > s,
            Distance::Unreachable => true,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Steps(m) => write!(f, "{m}"),
            Distance::Unreachable => write!(f, "unreachable"),
        }
    }
}

/// A stutter-free path given as point indices `y_0 .. y_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathSeq(Vec<usize>);

impl PathSeq {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Number of steps `m`.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Result of simple-closed-curve recognition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveCheck {
    /// The definition read literally: a cyclic listing of at least 3 points
    /// where each point is adjacent to exactly its two cyclic neighbours.
    pub literal: bool,
    /// `literal` together with the conventional minimum of 4 points.
    pub conventional: bool,
    /// Cyclic order starting at index 0 and heading to its lesser neighbour.
    pub cyclic_order: Option<Vec<usize>>,
}

const UNREACHABLE: u32 = u32::MAX;

struct ImageData {
    dimension: usize,
    points: Vec<Point>,
    adjacency: AdjacencySpec,
    neighbors: Vec<IndexSet>,
    closed: Vec<IndexSet>,
    neighbor_lists: Vec<Vec<usize>>,
    edge_count: usize,
    factor_indices: Option<Vec<Vec<usize>>>,
    distances: OnceLock<Vec<Vec<u32>>>,
}

/// A finite digital image `(X, κ)`. Cloning is cheap; the data is shared.
#[derive(Clone)]
pub struct DigitalImage {
    inner: Arc<ImageData>,
}

impl fmt::Debug for DigitalImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitalImage")
            .field("dimension", &self.inner.dimension)
            .field("adjacency", &self.inner.adjacency.family_name())
            .field("points", &self.inner.points)
            .finish()
    }
}

/// Two images are equal when they have the same points and the same edges,
/// however the adjacency was declared.
impl PartialEq for DigitalImage {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.points == other.inner.points
                && self.inner.neighbors == other.inner.neighbors)
    }
}

impl Eq for DigitalImage {}

impl DigitalImage {
    /// Builds an image from a point set and an adjacency declaration.
    ///
    /// Points are sorted into canonical lexicographic order. For
    /// [`AdjacencySpec::Explicit`] the edge indices refer to that sorted
    /// order.
    pub fn build(points: impl IntoIterator<Item = Point>, adjacency: AdjacencySpec) -> Result<Self> {
        let mut points: Vec<Point> = points.into_iter().collect();
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        let dimension = points[0].dimension();
        if dimension == 0 {
            return Err(Error::InvalidAdjacency("points must have dimension at least 1".into()));
        }
        for p in &points {
            if p.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    point: p.clone(),
                    expected: dimension,
                    found: p.dimension(),
                });
            }
        }
        points.sort();
        for w in points.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicatePoint(w[0].clone()));
            }
        }
        let len = points.len();
        let mut neighbors = vec![IndexSet::with_capacity(len); len];
        let mut factor_indices = None;

        match &adjacency {
            AdjacencySpec::Cu { u } => {
                if *u < 1 || *u > dimension {
                    return Err(Error::InvalidAdjacency(format!(
                        "c_{u} requires 1 <= u <= {dimension}"
                    )));
                }
                for p in 0..len {
                    for q in p + 1..len {
                        if cu_adjacent(points[p].coords(), points[q].coords(), *u) {
                            neighbors[p].insert(q);
                            neighbors[q].insert(p);
                        }
                    }
                }
            }
            AdjacencySpec::Np { u, factors } => {
                let v = factors.len();
                if v == 0 || *u < 1 || *u > v {
                    return Err(Error::InvalidAdjacency(format!(
                        "NP_{u} over {v} factors requires 1 <= u <= v"
                    )));
                }
                let total: usize = factors.iter().map(DigitalImage::dimension).sum();
                if total != dimension {
                    return Err(Error::InvalidAdjacency(format!(
                        "factor dimensions sum to {total}, points have dimension {dimension}"
                    )));
                }
                let mut blocks = Vec::with_capacity(len);
                for p in &points {
                    let mut offset = 0;
                    let mut idx = Vec::with_capacity(v);
                    for factor in factors {
                        let d = factor.dimension();
                        let block = Point::new(p.coords()[offset..offset + d].to_vec());
                        let Some(i) = factor.index_of(&block) else {
                            return Err(Error::InvalidAdjacency(format!(
                                "point {p} has block {block} outside its factor"
                            )));
                        };
                        idx.push(i);
                        offset += d;
                    }
                    blocks.push(idx);
                }
                for p in 0..len {
                    for q in p + 1..len {
                        let mut adjacent_blocks = 0;
                        let mut ok = true;
                        for (k, factor) in factors.iter().enumerate() {
                            let (a, b) = (blocks[p][k], blocks[q][k]);
                            if a == b {
                                continue;
                            }
                            if factor.inner.neighbors[a].contains(b) {
                                adjacent_blocks += 1;
                            } else {
                                ok = false;
                                break;
                            }
                        }
                        if ok && adjacent_blocks >= 1 && adjacent_blocks <= *u {
                            neighbors[p].insert(q);
                            neighbors[q].insert(p);
                        }
                    }
                }
                factor_indices = Some(blocks);
            }
            AdjacencySpec::Explicit { edges } => {
                for &(p, q) in edges {
                    if p >= len || q >= len {
                        return Err(Error::IndexOutOfRange { index: p.max(q), len });
                    }
                    if p == q {
                        return Err(Error::InvalidAdjacency(format!("self-loop at index {p}")));
                    }
                    neighbors[p].insert(q);
                    neighbors[q].insert(p);
                }
            }
        }

        // Explicit edges are stored normalized so serialization is canonical.
        let adjacency = match adjacency {
            AdjacencySpec::Explicit { edges } => AdjacencySpec::Explicit {
                edges: edges.into_iter().map(|(p, q)| (p.min(q), p.max(q))).collect(),
            },
            other => other,
        };

        let closed = neighbors
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let mut c = n.clone();
                c.insert(i);
                c
            })
            .collect();
        let neighbor_lists: Vec<Vec<usize>> = neighbors.iter().map(|n| n.ones().collect()).collect();
        let edge_count = neighbor_lists.iter().map(Vec::len).sum::<usize>() / 2;

        Ok(DigitalImage {
            inner: Arc::new(ImageData {
                dimension,
                points,
                adjacency,
                neighbors,
                closed,
                neighbor_lists,
                edge_count,
                factor_indices,
                distances: OnceLock::new(),
            }),
        })
    }

    pub fn dimension(&self) -> usize {
        self.inner.dimension
    }

    /// `#X`.
    pub fn len(&self) -> usize {
        self.inner.points.len()
    }

    /// Always false: images are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.inner.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.inner.points
    }

    pub fn point(&self, index: usize) -> &Point {
        &self.inner.points[index]
    }

    pub fn adjacency(&self) -> &AdjacencySpec {
        &self.inner.adjacency
    }

    pub fn index_of(&self, point: &Point) -> Option<usize> {
        self.inner.points.binary_search(point).ok()
    }

    pub fn contains(&self, point: &Point) -> bool {
        self.index_of(point).is_some()
    }

    /// Per-factor indices of point `index` when the image carries `NP`
    /// adjacency.
    pub fn factor_indices(&self, index: usize) -> Option<&[usize]> {
        self.inner.factor_indices.as_ref().map(|b| b[index].as_slice())
    }

    fn check(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, len: self.len() })
        }
    }

    pub fn adjacent(&self, p: usize, q: usize) -> Result<bool> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.inner.neighbors[p].contains(q))
    }

    /// `p ≃ q`: equal or adjacent. Panics on a bad index.
    pub fn adjacent_or_equal(&self, p: usize, q: usize) -> bool {
        self.inner.closed[p].contains(q)
    }

    /// Open neighbourhood bitset. Panics on a bad index.
    pub fn neighbor_set(&self, p: usize) -> &IndexSet {
        &self.inner.neighbors[p]
    }

    /// Closed neighbourhood `N[p]` as a bitset. Panics on a bad index.
    pub fn closed_set(&self, p: usize) -> &IndexSet {
        &self.inner.closed[p]
    }

    pub fn neighbors(&self, p: usize) -> &[usize] {
        &self.inner.neighbor_lists[p]
    }

    pub fn closed_neighborhood(&self, p: usize) -> Result<Vec<usize>> {
        self.check(p)?;
        Ok(self.inner.closed[p].ones().collect())
    }

    pub fn degree(&self, p: usize) -> usize {
        self.inner.neighbor_lists[p].len()
    }

    pub fn edge_count(&self) -> usize {
        self.inner.edge_count
    }

    /// Edges as `(p, q)` with `p < q`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.inner.edge_count);
        for (p, list) in self.inner.neighbor_lists.iter().enumerate() {
            out.extend(list.iter().filter(|&&q| q > p).map(|&q| (p, q)));
        }
        out
    }

    /// An index set sized for this image.
    pub fn empty_set(&self) -> IndexSet {
        IndexSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> IndexSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(p) = queue.pop_front() {
                for &q in self.neighbors(p) {
                    if !seen[q] {
                        seen[q] = true;
                        comp.push(q);
                        queue.push_back(q);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_from(0).iter().all(|&d| d != UNREACHABLE)
    }

    fn bfs_from(&self, start: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for &q in self.neighbors(p) {
                if dist[q] == UNREACHABLE {
                    dist[q] = dist[p] + 1;
                    queue.push_back(q);
                }
            }
        }
        dist
    }

    fn distance_table(&self) -> &[Vec<u32>] {
        self.inner
            .distances
            .get_or_init(|| (0..self.len()).map(|p| self.bfs_from(p)).collect())
    }

    pub fn geodesic_distance(&self, p: usize, q: usize) -> Result<Distance> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.distance(p, q))
    }

    /// Unchecked variant of [`geodesic_distance`](Self::geodesic_distance).
    pub fn distance(&self, p: usize, q: usize) -> Distance {
        match self.distance_table()[p][q] {
            UNREACHABLE => Distance::Unreachable,
            d => Distance::Steps(d as usize),
        }
    }

    /// The shortest path from `p` to `q` if it is the only one.
    pub fn unique_shortest_path(&self, p: usize, q: usize) -> Result<Option<PathSeq>> {
        self.check(p)?;
        self.check(q)?;
        let dist = &self.distance_table()[p];
        if dist[q] == UNREACHABLE {
            return Ok(None);
        }
        // Count geodesics from p, saturating at 2.
        let mut order: Vec<usize> = (0..self.len()).filter(|&v| dist[v] != UNREACHABLE).collect();
        order.sort_by_key(|&v| dist[v]);
        let mut count = vec![0u8; self.len()];
        count[p] = 1;
        for &v in &order[1..] {
            let c: u32 = self
                .neighbors(v)
                .iter()
                .filter(|&&w| dist[w] != UNREACHABLE && dist[w] + 1 == dist[v])
                .map(|&w| count[w] as u32)
                .sum();
            count[v] = c.min(2) as u8;
        }
        if count[q] != 1 {
            return Ok(None);
        }
        let mut path = vec![q];
        let mut v = q;
        while v != p {
            v = *self
                .neighbors(v)
                .iter()
                .find(|&&w| dist[w] != UNREACHABLE && dist[w] + 1 == dist[v])
                .expect("reachable vertex has a predecessor");
            path.push(v);
        }
        path.reverse();
        Ok(Some(PathSeq(path)))
    }

    /// `Bd(X)`: points with a `c_1`-neighbour in `Z^n \ X`, whatever the
    /// image's own adjacency.
    pub fn boundary(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                let coords = self.point(i).coords();
                (0..self.dimension()).any(|axis| {
                    [-1, 1].iter().any(|&delta| {
                        let mut c = coords.to_vec();
                        c[axis] += delta;
                        !self.contains(&Point(c))
                    })
                })
            })
            .collect()
    }

    pub fn simple_closed_curve(&self) -> CurveCheck {
        let n = self.len();
        let not_curve = CurveCheck {
            literal: false,
            conventional: false,
            cyclic_order: None,
        };
        if n < 3 || (0..n).any(|p| self.degree(p) != 2) || !self.is_connected() {
            return not_curve;
        }
        let mut order = vec![0];
        let mut prev = 0;
        let mut cur = self.neighbors(0)[0];
        while cur != 0 {
            order.push(cur);
            let next = self.neighbors(cur).iter().copied().find(|&w| w != prev).unwrap();
            prev = cur;
            cur = next;
        }
        CurveCheck {
            literal: true,
            conventional: n >= 4,
            cyclic_order: Some(order),
        }
    }

    pub fn is_simple_closed_curve(&self) -> bool {
        self.simple_closed_curve().literal
    }
}
