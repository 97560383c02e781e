//! Digital homotopy: the one-step relation, breadth-first search through
//! map space, and the exact rigidity and reducibility deciders.
//!
//! The deciders never walk map space. A map homotopic to the identity in
//! one step is exactly a continuous map with `f(x) ≃ x` everywhere, so
//!
//! * `X` is rigid iff the identity is its only such map, and
//! * `X` is reducible iff some such map misses a point.
//!
//! Both reduce to constraint searches with closed-neighbourhood domains.
//! The map-space search in this module is an independent route to the same
//! answers and backs [`are_homotopic`].

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::lattice::{DigitalImage, Distance};
use crate::maps::ImageMap;
use crate::search::{
    closed_neighborhood_domains, least_self_map_among, MapConstraints, SearchBudget, SearchOutcome, SearchStats,
    Verdict,
};

/// Frames `f_0 .. f_m` of a homotopy; consecutive frames are pointwise
/// adjacent-or-equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Homotopy {
    frames: Vec<ImageMap>,
}

impl Homotopy {
    pub fn new(frames: Vec<ImageMap>) -> Result<Self> {
        let Some(first) = frames.first() else {
            return Err(Error::MapMismatch("a homotopy needs at least one frame".into()));
        };
        for f in &frames {
            if !f.is_self_map() || f.source() != first.source() {
                return Err(Error::MapMismatch("frames must be self-maps of one image".into()));
            }
            if !f.is_continuous() {
                return Err(Error::NotContinuous);
            }
        }
        for w in frames.windows(2) {
            if !pointwise_close(&w[0], &w[1]) {
                return Err(Error::MapMismatch("consecutive frames are not one step apart".into()));
            }
        }
        Ok(Homotopy { frames })
    }

    pub fn frames(&self) -> &[ImageMap] {
        &self.frames
    }

    /// Number of steps `m`.
    pub fn steps(&self) -> usize {
        self.frames.len() - 1
    }

    pub fn start(&self) -> &ImageMap {
        &self.frames[0]
    }

    pub fn end(&self) -> &ImageMap {
        self.frames.last().expect("nonempty")
    }

    /// Largest distance any point travels between consecutive frames.
    pub fn max_step_displacement(&self) -> Distance {
        let x = self.start().source();
        self.frames
            .windows(2)
            .flat_map(|w| (0..x.len()).map(move |p| x.distance(w[0].apply(p), w[1].apply(p))))
            .max()
            .unwrap_or(Distance::Steps(0))
    }
}

fn pointwise_close(f: &ImageMap, g: &ImageMap) -> bool {
    let x = f.target();
    (0..f.source().len()).all(|p| x.adjacent_or_equal(f.apply(p), g.apply(p)))
}

fn require_continuous_pair(f: &ImageMap, g: &ImageMap) -> Result<()> {
    if !f.is_self_map() || !g.is_self_map() || f.source() != g.source() {
        return Err(Error::MapMismatch("expected two self-maps of the same image".into()));
    }
    if !f.is_continuous() || !g.is_continuous() {
        return Err(Error::NotContinuous);
    }
    Ok(())
}

/// `f(x) ≃ g(x)` for every `x`: a homotopy with a single step.
pub fn one_step_homotopic(f: &ImageMap, g: &ImageMap) -> Result<bool> {
    require_continuous_pair(f, g)?;
    Ok(pointwise_close(f, g))
}

/// Verdict of a map-space search plus the homotopy that reached the goal.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopySearch {
    pub verdict: Verdict,
    pub homotopy: Option<Homotopy>,
    pub stats: SearchStats,
    /// Number of maps discovered.
    pub component_size: usize,
}

enum Walk {
    Done,
    Stopped,
    OutOfBudget,
}

/// Streams every continuous `g` with `g(x) ≃ f(x)` for all `x`, in
/// lexicographic order, until `visit` returns `true`. Plain index-order
/// backtracking with forward checks; deliberately shares no code with the
/// constraint engine.
fn one_step_neighbors(
    x: &DigitalImage,
    f: &[usize],
    nodes: &mut u64,
    max_nodes: u64,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Walk {
    fn extend(
        x: &DigitalImage,
        f: &[usize],
        partial: &mut Vec<usize>,
        nodes: &mut u64,
        max_nodes: u64,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Walk {
        let i = partial.len();
        if i == f.len() {
            return if visit(partial) { Walk::Stopped } else { Walk::Done };
        }
        for v in x.closed_set(f[i]).ones() {
            *nodes += 1;
            if *nodes > max_nodes {
                return Walk::OutOfBudget;
            }
            let fits = x
                .neighbors(i)
                .iter()
                .filter(|&&j| j < i)
                .all(|&j| x.adjacent_or_equal(partial[j], v));
            if fits {
                partial.push(v);
                let walk = extend(x, f, partial, nodes, max_nodes, visit);
                partial.pop();
                if !matches!(walk, Walk::Done) {
                    return walk;
                }
            }
        }
        Walk::Done
    }
    let mut partial = Vec::with_capacity(f.len());
    extend(x, f, &mut partial, nodes, max_nodes, visit)
}

/// Breadth-first search through the maps homotopic to `start`, stopping at
/// the first map satisfying `goal`. `True` = goal reached, `False` = the
/// whole component was exhausted without reaching it.
pub fn search_component(
    start: &ImageMap,
    budget: SearchBudget,
    goal: impl Fn(&[usize]) -> bool,
) -> Result<HomotopySearch> {
    if !start.is_self_map() {
        return Err(Error::MapMismatch("expected a self-map".into()));
    }
    if !start.is_continuous() {
        return Err(Error::NotContinuous);
    }
    let x = start.source().clone();
    // Full assignment vectors are the keys, so membership is exact.
    let mut parent: HashMap<Vec<usize>, Option<Vec<usize>>> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut stats = SearchStats {
        states: 1,
        ..SearchStats::default()
    };
    let root = start.assignment().to_vec();
    parent.insert(root.clone(), None);

    let finish = |found: Option<Vec<usize>>, parent: &HashMap<Vec<usize>, Option<Vec<usize>>>, verdict, stats| {
        let homotopy = found.map(|end| {
            let mut chain = vec![end];
            while let Some(Some(prev)) = parent.get(chain.last().unwrap()) {
                chain.push(prev.clone());
            }
            chain.reverse();
            let frames = chain
                .into_iter()
                .map(|a| ImageMap::on(&x, a).expect("valid state"))
                .collect();
            Homotopy::new(frames).expect("BFS chain is a homotopy")
        });
        HomotopySearch {
            verdict,
            homotopy,
            stats,
            component_size: parent.len(),
        }
    };

    if goal(&root) {
        return Ok(finish(Some(root), &parent, Verdict::True, stats));
    }
    queue.push_back(root);
    while let Some(state) = queue.pop_front() {
        let mut found = None;
        let mut out_of_states = false;
        let walk = one_step_neighbors(&x, &state, &mut stats.nodes, budget.max_nodes, &mut |g| {
            if parent.contains_key(g) {
                return false;
            }
            stats.states += 1;
            if stats.states > budget.max_states {
                out_of_states = true;
                return true;
            }
            parent.insert(g.to_vec(), Some(state.clone()));
            if goal(g) {
                found = Some(g.to_vec());
                return true;
            }
            queue.push_back(g.to_vec());
            false
        });
        if found.is_some() {
            return Ok(finish(found, &parent, Verdict::True, stats));
        }
        if out_of_states || matches!(walk, Walk::OutOfBudget) {
            stats.budget_exhausted = true;
            return Ok(finish(None, &parent, Verdict::Unknown, stats));
        }
    }
    Ok(finish(None, &parent, Verdict::False, stats))
}

/// Decides whether `f` and `g` are homotopic by exhausting the map-space
/// component of `f`.
pub fn are_homotopic(f: &ImageMap, g: &ImageMap, budget: SearchBudget) -> Result<HomotopySearch> {
    require_continuous_pair(f, g)?;
    let target = g.assignment().to_vec();
    search_component(f, budget, |a| a == target.as_slice())
}

/// Rigidity by map-space search: `True` iff the component of the identity
/// is the identity alone.
pub fn rigid_by_map_space(x: &DigitalImage, budget: SearchBudget) -> Result<HomotopySearch> {
    let mut out = search_component(&ImageMap::identity(x), budget, |a| {
        a.iter().enumerate().any(|(i, &t)| i != t)
    })?;
    out.verdict = out.verdict.negate();
    Ok(out)
}

/// Reducibility by map-space search: `True` iff the component of the
/// identity contains a nonsurjective map.
pub fn reducible_by_map_space(x: &DigitalImage, budget: SearchBudget) -> Result<HomotopySearch> {
    let n = x.len();
    search_component(&ImageMap::identity(x), budget, move |a| {
        let mut hit = vec![false; n];
        a.iter().for_each(|&t| hit[t] = true);
        hit.contains(&false)
    })
}

/// Rigidity through 1-maps: rigid iff no continuous `f ≠ id` has
/// `f(x) ≃ x` everywhere. The witness, when not rigid, is the least such
/// map.
pub fn is_rigid(x: &DigitalImage, budget: SearchBudget) -> SearchOutcome {
    let base = closed_neighborhood_domains(x);
    let alternatives: Vec<MapConstraints> = (0..x.len())
        .filter(|&p| x.degree(p) > 0)
        .map(|p| {
            let mut d = base.clone();
            d[p].set(p, false);
            MapConstraints::none().with_domains(d)
        })
        .collect();
    let mut out = least_self_map_among(x, &alternatives, budget).expect("closed-neighbourhood domains are consistent");
    out.verdict = out.verdict.negate();
    out
}

/// Reducibility through one-step homotopies: tries each point `y` in
/// canonical order as the point a 1-map must miss. `True` on the first
/// success; `False` once every `y` has been ruled out.
pub fn is_reducible(x: &DigitalImage, budget: SearchBudget) -> SearchOutcome {
    let base = closed_neighborhood_domains(x);
    let mut stats = SearchStats::default();
    let mut unknown = false;
    for y in 0..x.len() {
        let remaining = budget.max_nodes.saturating_sub(stats.nodes);
        if remaining == 0 {
            unknown = true;
            stats.budget_exhausted = true;
            break;
        }
        let c = MapConstraints::none().with_domains(base.clone()).excluding(y);
        let sub = SearchBudget {
            max_nodes: remaining,
            ..budget
        };
        let out = least_self_map_among(x, std::slice::from_ref(&c), sub).expect("closed-neighbourhood domains are consistent");
        stats.absorb(out.stats);
        match out.verdict {
            Verdict::True => {
                return SearchOutcome {
                    verdict: Verdict::True,
                    witness: out.witness,
                    stats,
                }
            }
            Verdict::Unknown => {
                unknown = true;
                break;
            }
            Verdict::False => {}
        }
    }
    SearchOutcome {
        verdict: if unknown { Verdict::Unknown } else { Verdict::False },
        witness: None,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{digital_box, interval, simple_closed_curve_in_plane};

    fn ring8() -> DigitalImage {
        simple_closed_curve_in_plane(&[(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)], 1)
            .unwrap()
    }

    fn rotation(curve: &DigitalImage) -> ImageMap {
        let order = curve.simple_closed_curve().cyclic_order.unwrap();
        let mut a = vec![0; curve.len()];
        for k in 0..order.len() {
            a[order[k]] = order[(k + 1) % order.len()];
        }
        ImageMap::on(curve, a).unwrap()
    }

    #[test]
    fn one_step() {
        let x = interval(0, 1).unwrap();
        let id = ImageMap::identity(&x);
        assert!(one_step_homotopic(&id, &id).unwrap());
        assert!(one_step_homotopic(&id, &ImageMap::constant(&x, 0).unwrap()).unwrap());
        let r = ring8();
        assert!(one_step_homotopic(&ImageMap::identity(&r), &rotation(&r)).unwrap());
        let y = interval(0, 2).unwrap();
        let jump = ImageMap::on(&y, vec![0, 2, 2]).unwrap();
        assert_eq!(one_step_homotopic(&ImageMap::identity(&y), &jump), Err(Error::NotContinuous));
    }

    #[test]
    fn bfs_homotopies() {
        let r = ring8();
        let id = ImageMap::identity(&r);
        let same = are_homotopic(&id, &id, SearchBudget::default()).unwrap();
        assert_eq!(same.verdict, Verdict::True);
        assert_eq!(same.homotopy.unwrap().steps(), 0);

        let rot = are_homotopic(&id, &rotation(&r), SearchBudget::default()).unwrap();
        assert_eq!(rot.verdict, Verdict::True);
        let h = rot.homotopy.unwrap();
        assert_eq!(h.steps(), 1);
        assert_eq!(h.max_step_displacement(), Distance::Steps(1));

        for c in 0..r.len() {
            let out = are_homotopic(&id, &ImageMap::constant(&r, c).unwrap(), SearchBudget::default()).unwrap();
            assert_eq!(out.verdict, Verdict::False);
        }
    }

    #[test]
    fn state_budget() {
        let x = interval(0, 5).unwrap();
        let id = ImageMap::identity(&x);
        let c = ImageMap::constant(&x, 5).unwrap();
        let out = are_homotopic(&id, &c, SearchBudget::new(1_000_000, 3).unwrap()).unwrap();
        assert_eq!(out.verdict, Verdict::Unknown);
        assert!(out.stats.budget_exhausted);
        let full = are_homotopic(&id, &c, SearchBudget::default()).unwrap();
        assert_eq!(full.verdict, Verdict::True);
        assert!(full.homotopy.unwrap().max_step_displacement() <= Distance::Steps(1));
    }

    #[test]
    fn rigidity() {
        let out = is_rigid(&interval(0, 2).unwrap(), SearchBudget::default());
        assert_eq!(out.verdict, Verdict::False);
        let w = out.witness.unwrap();
        assert!(w.is_n_map(1).unwrap() && !w.is_identity());
        assert_eq!(w.assignment(), &[0, 0, 1]);

        assert_eq!(is_rigid(&ring8(), SearchBudget::default()).verdict, Verdict::False);
        assert_eq!(is_rigid(&interval(0, 0).unwrap(), SearchBudget::default()).verdict, Verdict::True);
    }

    #[test]
    fn reducibility() {
        let out = is_reducible(&interval(0, 1).unwrap(), SearchBudget::default());
        assert_eq!(out.verdict, Verdict::True);
        assert!(!out.witness.unwrap().is_surjective());

        assert_eq!(is_reducible(&ring8(), SearchBudget::default()).verdict, Verdict::False);

        let square = digital_box(&[(0, 1), (0, 1)], 1).unwrap();
        let out = is_reducible(&square, SearchBudget::default());
        assert_eq!(out.verdict, Verdict::True);
        // the hand-built witness of the spec is one valid one-step collapse
        let f = ImageMap::on(&square, vec![0, 1, 0, 1]).unwrap();
        assert!(f.is_continuous() && f.is_n_map(1).unwrap() && !f.is_surjective());

        assert_eq!(is_reducible(&interval(4, 4).unwrap(), SearchBudget::default()).verdict, Verdict::False);
    }

    #[test]
    fn map_space_agrees_on_small_images() {
        for x in [interval(0, 0).unwrap(), interval(0, 3).unwrap(), ring8(), digital_box(&[(0, 1), (0, 1)], 2).unwrap()] {
            let b = SearchBudget::default();
            assert_eq!(rigid_by_map_space(&x, b).unwrap().verdict, is_rigid(&x, b).verdict);
            assert_eq!(reducible_by_map_space(&x, b).unwrap().verdict, is_reducible(&x, b).verdict);
        }
    }

    #[test]
    fn homotopy_validation() {
        let x = interval(0, 2).unwrap();
        let id = ImageMap::identity(&x);
        let c2 = ImageMap::constant(&x, 2).unwrap();
        assert!(Homotopy::new(vec![]).is_err());
        assert!(Homotopy::new(vec![id.clone(), c2.clone()]).is_err());
        let mid = ImageMap::on(&x, vec![1, 1, 2]).unwrap();
        let h = Homotopy::new(vec![id, mid, c2]).unwrap();
        assert_eq!(h.steps(), 2);
    }
}
