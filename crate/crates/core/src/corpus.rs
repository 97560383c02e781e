//! Deterministic test corpus: intervals, boxes, simple closed curves,
//! search-discovered rigid images, normal products and wedge embeddings,
//! plus seeded samplers for random images and subsets.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructors::{digital_box, interval, lattice_symmetry, product, simple_closed_curve_in_plane, wedge};
use crate::constructors::{LatticeTransform, Wedge};
use crate::error::{Error, Result};
use crate::homotopy::is_rigid;
use crate::lattice::{cu_adjacent, AdjacencySpec, DigitalImage, Point};
use crate::search::{SearchBudget, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    Interval,
    Box,
    Curve,
    Rigid,
    Product,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub image: DigitalImage,
    pub kind: EntryKind,
    /// Names of the factors, for products.
    pub factors: Vec<String>,
}

impl CorpusEntry {
    fn new(name: impl Into<String>, image: DigitalImage, kind: EntryKind) -> Self {
        CorpusEntry {
            name: name.into(),
            image,
            kind,
            factors: Vec::new(),
        }
    }

    /// `Some(u)` when the image carries plain `c_u` adjacency.
    pub fn cu(&self) -> Option<usize> {
        match self.image.adjacency() {
            AdjacencySpec::Cu { u } => Some(*u),
            _ => None,
        }
    }
}

/// Cells of `[0, extent]^dim` in lexicographic order.
fn grid_cells(dim: usize, extent: i64) -> Vec<Point> {
    let mut cells = vec![Vec::new()];
    for _ in 0..dim {
        cells = cells
            .into_iter()
            .flat_map(|c: Vec<i64>| {
                (0..=extent).map(move |v| {
                    let mut next = c.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    cells.into_iter().map(Point::new).collect()
}

/// First simple closed `c_u`-curve of `size` points inside `[0, extent]^dim`
/// found by depth-first search from the least cell, or `None`.
pub fn find_simple_closed_curve(size: usize, dim: usize, u: usize, extent: i64) -> Option<DigitalImage> {
    if size < 4 || u == 0 || u > dim {
        return None;
    }
    let cells = grid_cells(dim, extent);
    let n = cells.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|a| (0..n).map(|b| cu_adjacent(cells[a].coords(), cells[b].coords(), u)).collect())
        .collect();

    fn extend(adj: &[Vec<bool>], size: usize, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let k = path.len();
        if k == size {
            return true;
        }
        let (start, last) = (path[0], path[k - 1]);
        for q in start + 1..adj.len() {
            if used[q] || !adj[last][q] {
                continue;
            }
            if path[..k - 1].iter().skip(1).any(|&j| adj[q][j]) {
                continue;
            }
            let closes = adj[q][start];
            let last_point = k == size - 1;
            if (last_point && !closes) || (!last_point && k > 1 && closes) {
                continue;
            }
            path.push(q);
            used[q] = true;
            if extend(adj, size, path, used) {
                return true;
            }
            used[q] = false;
            path.pop();
        }
        false
    }

    for start in 0..n {
        let mut path = vec![start];
        let mut used = vec![false; n];
        used[start] = true;
        if extend(&adj, size, &mut path, &mut used) {
            let x = DigitalImage::build(path.iter().map(|&i| cells[i].clone()), AdjacencySpec::Cu { u }).ok()?;
            debug_assert!(x.is_simple_closed_curve());
            return Some(x);
        }
    }
    None
}

/// The 8-point ring `Bd([0,2]^2)` moved by `(dx, dy)`.
pub fn ring8(dx: i64, dy: i64, u: usize) -> DigitalImage {
    let base = [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)];
    let moved: Vec<(i64, i64)> = base.iter().map(|&(a, b)| (a + dx, b + dy)).collect();
    simple_closed_curve_in_plane(&moved, u).expect("ring points are distinct")
}

/// Two `c_1` rings of 8 points meeting at the corner `(2, 2)`: a rigid
/// wedge of simple closed curves with 15 points.
pub fn figure_eight() -> DigitalImage {
    wedge(&ring8(0, 0, 1), &ring8(2, 2, 1)).expect("rings meet in one corner").image
}

/// Outcome of the exhaustive search for rigid connected subsets of a square.
#[derive(Clone, Debug, Serialize)]
pub struct RigidDiscovery {
    pub extent: i64,
    pub u: usize,
    /// Connected subsets with at least two points.
    pub connected: u64,
    /// Connected subsets in which no point's closed neighbourhood lies inside
    /// a neighbour's; every other subset has a non-identity 1-map.
    pub candidates: u64,
    /// Candidates passed to the rigidity decider.
    pub tested: u64,
    pub unknown: u64,
    /// Every rigid image of the smallest size found, in canonical order.
    #[serde(serialize_with = "serialize_images")]
    pub smallest: Vec<DigitalImage>,
}

fn serialize_images<S: serde::Serializer>(xs: &[DigitalImage], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(x.points())?;
    }
    seq.end()
}

impl RigidDiscovery {
    pub fn smallest_size(&self) -> Option<usize> {
        self.smallest.first().map(DigitalImage::len)
    }

    pub fn representative(&self) -> Option<&DigitalImage> {
        self.smallest.first()
    }
}

/// Exhaustive search over connected subsets of `[0, extent]^2` with `c_u`
/// adjacency for the smallest rigid images with more than one point.
/// Subsets are tested in order of size, and the search stops once a size
/// class containing a rigid image is finished.
pub fn discover_rigid(extent: i64, u: usize, budget: SearchBudget) -> Result<RigidDiscovery> {
    let side = (extent + 1) as usize;
    let cells = side * side;
    if extent < 0 || cells > 25 {
        return Err(Error::TooLarge { points: cells, limit: 25 });
    }
    if u == 0 || u > 2 {
        return Err(Error::InvalidAdjacency(format!("c_{u} is not defined on Z^2")));
    }
    let coord = |i: usize| [(i / side) as i64, (i % side) as i64];
    let mut nb = vec![0u32; cells];
    for a in 0..cells {
        for b in 0..cells {
            if a != b && cu_adjacent(&coord(a), &coord(b), u) {
                nb[a] |= 1 << b;
            }
        }
    }
    let connected = |mask: u32| {
        let mut seen = 1u32 << mask.trailing_zeros();
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                next |= nb[f.trailing_zeros() as usize] & mask;
                f &= f - 1;
            }
            next &= !seen;
            seen |= next;
            frontier = next;
        }
        seen == mask
    };
    let dominated = |mask: u32| {
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            let ci = (nb[i] & mask) | (1 << i);
            let mut ns = nb[i] & mask;
            while ns != 0 {
                let j = ns.trailing_zeros() as usize;
                ns &= ns - 1;
                if ci & !((nb[j] & mask) | (1 << j)) == 0 {
                    return true;
                }
            }
        }
        false
    };

    let mut out = RigidDiscovery {
        extent,
        u,
        connected: 0,
        candidates: 0,
        tested: 0,
        unknown: 0,
        smallest: Vec::new(),
    };
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); cells + 1];
    let top: u64 = 1 << cells;
    for mask in 1..top {
        let mask = mask as u32;
        if mask.count_ones() < 2 || !connected(mask) {
            continue;
        }
        out.connected += 1;
        if !dominated(mask) {
            out.candidates += 1;
            by_size[mask.count_ones() as usize].push(mask);
        }
    }
    for class in by_size {
        for mask in class {
            let points = (0..cells).filter(|i| mask & (1 << i) != 0).map(|i| Point::new(coord(i).to_vec()));
            let x = DigitalImage::build(points, AdjacencySpec::Cu { u })?;
            out.tested += 1;
            match is_rigid(&x, budget).verdict {
                Verdict::True => out.smallest.push(x),
                Verdict::Unknown => out.unknown += 1,
                Verdict::False => {}
            }
        }
        if !out.smallest.is_empty() {
            break;
        }
    }
    out.smallest.sort_by(|a, b| a.points().cmp(b.points()));
    Ok(out)
}

/// Eight symmetries of the square, or all signed permutations for other
/// dimensions, identity first.
fn point_symmetries(dim: usize) -> Vec<Vec<LatticeTransform>> {
    let mut perms: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..dim {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..dim)
                    .filter(|i| !p.contains(i))
                    .map(|i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut out = Vec::new();
    for perm in perms {
        for flags in 0..1u32 << dim {
            let reflect: Vec<bool> = (0..dim).map(|i| flags & (1 << i) != 0).collect();
            out.push(vec![LatticeTransform::Permute(perm.clone()), LatticeTransform::Reflect(reflect)]);
        }
    }
    out
}

fn transform(x: &DigitalImage, steps: &[LatticeTransform]) -> Result<DigitalImage> {
    let mut y = x.clone();
    for t in steps {
        y = lattice_symmetry(&y, t)?.0;
    }
    Ok(y)
}

/// Places a symmetric copy of `y` against `x` so the two form a wedge, if
/// any placement works. Tries symmetries of `y`, then wedge points of `x`
/// from the largest down, then points of `y` in order; the first valid
/// placement is returned. Also returns the moved copy of `y`.
pub fn embed_wedge(x: &DigitalImage, y: &DigitalImage) -> Option<(Wedge, DigitalImage)> {
    if x.dimension() != y.dimension() || x.len() < 2 || y.len() < 2 {
        return None;
    }
    for sym in point_symmetries(x.dimension()) {
        let turned = transform(y, &sym).ok()?;
        for x0 in x.points().iter().rev() {
            for y0 in turned.points() {
                let shift: Vec<i64> = x0.coords().iter().zip(y0.coords()).map(|(a, b)| a - b).collect();
                let placed = transform(&turned, &[LatticeTransform::Translate(shift)]).ok()?;
                if let Ok(w) = wedge(x, &placed) {
                    return Some((w, placed));
                }
            }
        }
    }
    None
}

/// Base images: intervals, boxes, curves, the figure-eight and the rigid
/// images found by `discoveries`.
pub fn base_images(discoveries: &[RigidDiscovery]) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for b in 0..=4 {
        out.push(CorpusEntry::new(format!("interval0{b}"), interval(0, b).unwrap(), EntryKind::Interval));
    }
    for u in 1..=2 {
        for (name, axes) in [
            ("box11", [(0, 1), (0, 1)]),
            ("box22", [(0, 2), (0, 2)]),
            ("box12", [(0, 1), (0, 2)]),
            ("box33", [(0, 3), (0, 3)]),
        ] {
            out.push(CorpusEntry::new(format!("{name}-c{u}"), digital_box(&axes, u).unwrap(), EntryKind::Box));
        }
    }
    out.extend(curves());
    out.push(CorpusEntry::new("figure-eight-c1", figure_eight(), EntryKind::Rigid));
    for d in discoveries {
        if let Some(x) = d.representative() {
            out.push(CorpusEntry::new(format!("rigid{}-c{}", x.len(), d.u), x.clone(), EntryKind::Rigid));
        }
    }
    out
}

/// Simple closed curves of sizes 4 to 10: every size found in `[0,4]^2`
/// under `c_1` and `c_2`, and in `[0,2]^3` for sizes the plane lacks.
pub fn curves() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for size in 4..=10 {
        let mut planar = false;
        for u in 1..=2 {
            if let Some(x) = find_simple_closed_curve(size, 2, u, 4) {
                out.push(CorpusEntry::new(format!("curve{size}-c{u}"), x, EntryKind::Curve));
                planar = true;
            }
        }
        if !planar {
            if let Some((u, x)) = (1..=3).find_map(|u| find_simple_closed_curve(size, 3, u, 2).map(|x| (u, x))) {
                out.push(CorpusEntry::new(format!("curve{size}-c{u}-z3"), x, EntryKind::Curve));
            }
        }
    }
    out
}

/// Normal products `NP_v` of the named factors, `v` being the factor count.
pub fn product_entry(factors: &[&CorpusEntry]) -> Result<CorpusEntry> {
    let images: Vec<DigitalImage> = factors.iter().map(|e| e.image.clone()).collect();
    let name = factors.iter().map(|e| e.name.as_str()).collect::<Vec<_>>().join(" x ");
    let mut e = CorpusEntry::new(name, product(&images, factors.len())?, EntryKind::Product);
    e.factors = factors.iter().map(|f| f.name.clone()).collect();
    Ok(e)
}

/// Products over the factor pool: every unordered pair (with repetition)
/// and the triple cube `[0,1]^3`.
pub fn products(base: &[CorpusEntry], pool: &[&str]) -> Vec<CorpusEntry> {
    let find = |n: &str| base.iter().find(|e| e.name == n);
    let pool: Vec<&CorpusEntry> = pool.iter().filter_map(|n| find(n)).collect();
    let mut out = Vec::new();
    for i in 0..pool.len() {
        for j in i..pool.len() {
            out.push(product_entry(&[pool[i], pool[j]]).expect("corpus factors are valid"));
        }
    }
    if let Some(i) = find("interval01") {
        out.push(product_entry(&[i, i, i]).expect("corpus factors are valid"));
    }
    out
}

/// Default product factors.
pub const PRODUCT_POOL: &[&str] = &["interval01", "interval02", "box11-c1", "curve8-c1", "curve7-c2", "rigid10-c2"];

/// The whole deterministic corpus.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub discoveries: Vec<RigidDiscovery>,
    pub base: Vec<CorpusEntry>,
    pub products: Vec<CorpusEntry>,
}

impl Corpus {
    /// Runs the rigid-image searches for every `k ≤ max_extent` under `c_1`
    /// and `c_2`, keeping the results of the largest `k` for the corpus.
    pub fn generate(max_extent: i64, budget: SearchBudget) -> Result<Self> {
        let mut discoveries = Vec::new();
        for k in 1..=max_extent {
            for u in 1..=2 {
                discoveries.push(discover_rigid(k, u, budget)?);
            }
        }
        let kept: Vec<RigidDiscovery> = discoveries.iter().filter(|d| d.extent == max_extent).cloned().collect();
        let base = base_images(&kept);
        let products = products(&base, PRODUCT_POOL);
        Ok(Corpus {
            discoveries,
            base,
            products,
        })
    }

    pub fn get(&self, name: &str) -> Option<&CorpusEntry> {
        self.base.iter().chain(&self.products).find(|e| e.name == name)
    }

    pub fn all(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.base.iter().chain(&self.products)
    }
}

/// Images available by name on the command line.
pub fn builtin(name: &str) -> Option<DigitalImage> {
    let pts = |v: &[(i64, i64)], u| simple_closed_curve_in_plane(v, u).ok();
    match name {
        "singleton" => interval(0, 0).ok(),
        "interval01" => interval(0, 1).ok(),
        "interval02" => interval(0, 2).ok(),
        "interval05" => interval(0, 5).ok(),
        "square4" => digital_box(&[(0, 1), (0, 1)], 1).ok(),
        "box22" => digital_box(&[(0, 2), (0, 2)], 1).ok(),
        "curve8" => Some(ring8(0, 0, 1)),
        "curve6-c2" => pts(&[(0, 1), (0, 2), (1, 3), (2, 2), (2, 1), (1, 0)], 2),
        "figure-eight" => Some(figure_eight()),
        "rigid10-c2" => pts(
            &[(0, 1), (0, 2), (1, 0), (1, 3), (2, 1), (2, 2), (2, 4), (3, 2), (3, 4), (4, 3)],
            2,
        ),
        _ => None,
    }
}

pub const BUILTIN_NAMES: &[&str] = &[
    "singleton",
    "interval01",
    "interval02",
    "interval05",
    "square4",
    "box22",
    "curve8",
    "curve6-c2",
    "figure-eight",
    "rigid10-c2",
];

/// Connected subset of `[0, extent]^2` grown from a random cell, with a
/// random target size in `1..=max_points`.
pub fn random_connected_subset(rng: &mut ChaCha8Rng, extent: i64, u: usize, max_points: usize) -> DigitalImage {
    let cells = grid_cells(2, extent);
    let target = rng.gen_range(1..=max_points.min(cells.len()));
    let mut chosen = vec![cells.choose(rng).unwrap().clone()];
    while chosen.len() < target {
        let frontier: Vec<&Point> = cells
            .iter()
            .filter(|c| !chosen.contains(c) && chosen.iter().any(|p| cu_adjacent(p.coords(), c.coords(), u)))
            .collect();
        chosen.push((*frontier.choose(rng).unwrap()).clone());
    }
    DigitalImage::build(chosen, AdjacencySpec::Cu { u }).expect("distinct cells")
}

/// Arbitrary (possibly disconnected) image of `1..=max_points` points: a
/// planar subset of `[0,3]^2` or a spatial subset of `[0,2]^3`, with a
/// random `c_u`.
pub fn random_image(rng: &mut ChaCha8Rng, max_points: usize) -> DigitalImage {
    let dim = if rng.gen_bool(0.75) { 2 } else { 3 };
    let extent = if dim == 2 { 3 } else { 2 };
    let u = rng.gen_range(1..=dim);
    let cells = grid_cells(dim, extent);
    let k = rng.gen_range(1..=max_points);
    let chosen: Vec<Point> = cells.choose_multiple(rng, k).cloned().collect();
    DigitalImage::build(chosen, AdjacencySpec::Cu { u }).expect("distinct cells")
}

/// Uniformly random subset of the indices of `x`.
pub fn random_subset(rng: &mut ChaCha8Rng, x: &DigitalImage) -> Vec<usize> {
    (0..x.len()).filter(|_| rng.gen_bool(0.5)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn curves_of_every_size() {
        let cs = curves();
        for size in 4..=10 {
            assert!(cs.iter().any(|c| c.image.len() == size), "size {size}");
        }
        for c in &cs {
            assert!(c.image.is_simple_closed_curve(), "{}", c.name);
        }
        let names: Vec<&str> = cs.iter().map(|c| c.name.as_str()).collect();
        assert!(names.contains(&"curve5-c3-z3"));
        assert!(!names.iter().any(|n| n.starts_with("curve6-c1")));
        assert_eq!(find_simple_closed_curve(5, 2, 2, 4), None);
    }

    #[test]
    fn figure_eight_is_rigid() {
        let x = figure_eight();
        assert_eq!(x.len(), 15);
        assert_eq!(is_rigid(&x, SearchBudget::default()).verdict, Verdict::True);
    }

    #[test]
    fn small_squares_have_no_rigid_subsets() {
        for k in 1..=3 {
            for u in 1..=2 {
                let d = discover_rigid(k, u, SearchBudget::default()).unwrap();
                assert!(d.smallest.is_empty(), "k={k} u={u}");
                assert_eq!(d.unknown, 0);
            }
        }
    }

    #[test]
    fn builtin_rigid_image_is_rigid() {
        let x = builtin("rigid10-c2").unwrap();
        assert_eq!(is_rigid(&x, SearchBudget::default()).verdict, Verdict::True);
        for n in BUILTIN_NAMES {
            assert!(builtin(n).is_some(), "{n}");
        }
    }

    #[test]
    fn wedge_embedding_of_two_rings() {
        let a = ring8(0, 0, 1);
        let (w, placed) = embed_wedge(&a, &a).unwrap();
        assert_eq!(w.image.len(), 15);
        assert!(w.image.is_connected());
        assert_eq!(placed.len(), 8);
        assert!(embed_wedge(&a, &interval(0, 1).unwrap()).is_none());
    }

    #[test]
    fn samplers_are_seeded() {
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let a = random_connected_subset(&mut r1, 3, 1, 16);
            assert!(a.is_connected());
            assert_eq!(a, random_connected_subset(&mut r2, 3, 1, 16));
            let b = random_image(&mut r1, 9);
            assert!(b.len() <= 9);
            assert_eq!(b, random_image(&mut r2, 9));
        }
    }
}
