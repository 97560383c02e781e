//! Backtracking enumeration of continuous maps.
//!
//! Each source point is a variable whose domain is a bitset of target
//! indices. The only constraint is the continuity condition on source
//! edges: if `p ↔ q` then `f(p) ≃ f(q)`. Arc consistency is maintained
//! before and during search; branching picks the smallest domain (ties by
//! index) and tries values in ascending order.
//!
//! Least-witness searches run branch-and-bound over the lexicographic order
//! of assignment vectors, so the reported witness does not depend on the
//! branching heuristic.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DigitalImage, IndexSet};
use crate::maps::ImageMap;

/// Default backtracking-node budget.
pub const DEFAULT_MAX_NODES: u64 = 10_000_000;
/// Default map-space state budget.
pub const DEFAULT_MAX_STATES: u64 = 1_000_000;

/// Restrictions on the maps a search may return.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MapConstraints {
    /// Source index that must map to the given target index.
    pub pinned: BTreeMap<usize, usize>,
    /// Optional candidate set per source index (default: every target index).
    pub domains: Option<Vec<IndexSet>>,
    /// Target index that must not be hit.
    pub excluded_image_point: Option<usize>,
}

impl MapConstraints {
    pub fn none() -> Self {
        Self::default()
    }

    /// Pins every index of `set` to itself.
    pub fn fixing(set: impl IntoIterator<Item = usize>) -> Self {
        MapConstraints {
            pinned: set.into_iter().map(|i| (i, i)).collect(),
            ..Self::default()
        }
    }

    pub fn pin(mut self, source: usize, target: usize) -> Self {
        self.pinned.insert(source, target);
        self
    }

    pub fn with_domains(mut self, domains: Vec<IndexSet>) -> Self {
        self.domains = Some(domains);
        self
    }

    pub fn excluding(mut self, point: usize) -> Self {
        self.excluded_image_point = Some(point);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_states: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: DEFAULT_MAX_NODES,
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_states: u64) -> Result<Self> {
        if max_nodes == 0 || max_states == 0 {
            return Err(Error::InconsistentConstraints("budgets must be positive".into()));
        }
        Ok(SearchBudget { max_nodes, max_states })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn is_definite(self) -> bool {
        self != Verdict::Unknown
    }

    /// `True` ↔ `False`; `Unknown` stays.
    pub fn negate(self) -> Self {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Unknown => Verdict::Unknown,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub states: u64,
    /// A budget ran out before the search finished. With a witness in hand
    /// the verdict is still definite, but the witness may not be the least.
    pub budget_exhausted: bool,
}

impl SearchStats {
    pub fn absorb(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.states += other.states;
        self.budget_exhausted |= other.budget_exhausted;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub witness: Option<ImageMap>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop with the lexicographically least solution.
    FirstWitness,
    /// Every solution, in lexicographic order.
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Enumeration {
    /// `True` when a solution exists. In exhaustive mode a budget cut-off
    /// makes the verdict `Unknown`, since the list is incomplete.
    pub outcome: SearchOutcome,
    pub maps: Vec<ImageMap>,
}

struct Aborted;

struct Engine<'a> {
    source_adj: Vec<&'a [usize]>,
    target: &'a DigitalImage,
    nodes: u64,
    max_nodes: u64,
    exhausted: bool,
}

impl<'a> Engine<'a> {
    fn new(source: &'a DigitalImage, target: &'a DigitalImage, max_nodes: u64) -> Self {
        Engine {
            source_adj: (0..source.len()).map(|p| source.neighbors(p)).collect(),
            target,
            nodes: 0,
            max_nodes,
            exhausted: false,
        }
    }

    /// Removes from `D(p)` every value without support in `D(q)`.
    fn revise(&self, domains: &mut [IndexSet], p: usize, q: usize) -> bool {
        let (dp, dq) = if p < q {
            let (a, b) = domains.split_at_mut(q);
            (&mut a[p], &b[0])
        } else {
            let (a, b) = domains.split_at_mut(p);
            (&mut b[0], &a[q])
        };
        let unsupported: Vec<usize> = dp.ones().filter(|&a| self.target.closed_set(a).is_disjoint(dq)).collect();
        for a in &unsupported {
            dp.set(*a, false);
        }
        !unsupported.is_empty()
    }

    /// AC-3 driven by a queue of variables whose domains shrank. Returns
    /// false on a wipe-out.
    fn propagate(&self, domains: &mut [IndexSet], changed: impl IntoIterator<Item = usize>) -> bool {
        let n = domains.len();
        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        for v in changed {
            if !queued[v] {
                queued[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(q) = queue.pop_front() {
            queued[q] = false;
            for &p in self.source_adj[q] {
                if self.revise(domains, p, q) {
                    if domains[p].is_clear() {
                        return false;
                    }
                    if !queued[p] {
                        queued[p] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
        true
    }

    fn pick_variable(domains: &[IndexSet]) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (v, d) in domains.iter().enumerate() {
            let size = d.count_ones(..);
            if size > 1 && best.is_none_or(|(_, s)| size < s) {
                best = Some((v, size));
            }
        }
        best.map(|(v, _)| v)
    }

    fn lower_bound(domains: &[IndexSet]) -> Vec<usize> {
        domains
            .iter()
            .map(|d| d.minimum().expect("nonempty domain"))
            .collect()
    }

    fn tick(&mut self) -> std::result::Result<(), Aborted> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.exhausted = true;
            Err(Aborted)
        } else {
            Ok(())
        }
    }

    fn branch(&self, domains: &[IndexSet], var: usize, value: usize) -> Option<Vec<IndexSet>> {
        let mut child = domains.to_vec();
        child[var].clear();
        child[var].insert(value);
        self.propagate(&mut child, [var]).then_some(child)
    }

    fn least(&mut self, domains: Vec<IndexSet>, best: &mut Option<Vec<usize>>) -> std::result::Result<(), Aborted> {
        let bound = Self::lower_bound(&domains);
        if best.as_ref().is_some_and(|b| bound >= *b) {
            return Ok(());
        }
        let Some(var) = Self::pick_variable(&domains) else {
            *best = Some(bound);
            return Ok(());
        };
        for value in domains[var].ones() {
            self.tick()?;
            if let Some(child) = self.branch(&domains, var, value) {
                self.least(child, best)?;
            }
        }
        Ok(())
    }

    fn all(&mut self, domains: Vec<IndexSet>, visit: &mut dyn FnMut(&[usize])) -> std::result::Result<(), Aborted> {
        let Some(var) = Self::pick_variable(&domains) else {
            visit(&Self::lower_bound(&domains));
            return Ok(());
        };
        for value in domains[var].ones() {
            self.tick()?;
            if let Some(child) = self.branch(&domains, var, value) {
                self.all(child, visit)?;
            }
        }
        Ok(())
    }
}

/// Applies pins, explicit domains and the excluded point. `Ok(None)` means
/// some domain is already empty (no map exists); an error means the
/// constraints contradict themselves.
fn initial_domains(
    source: &DigitalImage,
    target: &DigitalImage,
    constraints: &MapConstraints,
) -> Result<Option<Vec<IndexSet>>> {
    let (n, m) = (source.len(), target.len());
    let mut domains = match &constraints.domains {
        Some(d) => {
            if d.len() != n {
                return Err(Error::InconsistentConstraints(format!(
                    "{} domains supplied for {n} source points",
                    d.len()
                )));
            }
            d.iter()
                .map(|s| {
                    if s.ones().any(|t| t >= m) {
                        return Err(Error::InconsistentConstraints("domain value out of range".into()));
                    }
                    let mut s = s.clone();
                    s.grow(m);
                    Ok(s)
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => vec![target.full_set(); n],
    };
    for (&s, &t) in &constraints.pinned {
        if s >= n {
            return Err(Error::IndexOutOfRange { index: s, len: n });
        }
        if t >= m {
            return Err(Error::IndexOutOfRange { index: t, len: m });
        }
        if !domains[s].contains(t) {
            return Err(Error::InconsistentConstraints(format!(
                "pin {s} -> {t} lies outside its domain"
            )));
        }
        if constraints.excluded_image_point == Some(t) {
            return Err(Error::InconsistentConstraints(format!(
                "pin {s} -> {t} hits the excluded point"
            )));
        }
        domains[s].clear();
        domains[s].insert(t);
    }
    if let Some(y) = constraints.excluded_image_point {
        if y >= m {
            return Err(Error::IndexOutOfRange { index: y, len: m });
        }
        for d in &mut domains {
            d.set(y, false);
        }
    }
    if domains.iter().any(|d| d.is_clear()) {
        return Ok(None);
    }
    Ok(Some(domains))
}

/// Enumerates continuous maps `source → target` subject to `constraints`.
pub fn enumerate_continuous_maps(
    source: &DigitalImage,
    target: &DigitalImage,
    constraints: &MapConstraints,
    budget: SearchBudget,
    mode: SearchMode,
) -> Result<Enumeration> {
    let mut engine = Engine::new(source, target, budget.max_nodes);
    let mut stats = SearchStats::default();
    let Some(mut domains) = initial_domains(source, target, constraints)? else {
        return Ok(Enumeration {
            outcome: SearchOutcome {
                verdict: Verdict::False,
                witness: None,
                stats,
            },
            maps: Vec::new(),
        });
    };
    let consistent = engine.propagate(&mut domains, 0..source.len());
    let wrap = |a: Vec<usize>| ImageMap::new(source.clone(), target.clone(), a).expect("solution in range");
    let enumeration = match mode {
        SearchMode::FirstWitness => {
            let mut best = None;
            if consistent {
                let _ = engine.least(domains, &mut best);
            }
            let witness = best.map(wrap);
            let verdict = match (&witness, engine.exhausted) {
                (Some(_), _) => Verdict::True,
                (None, true) => Verdict::Unknown,
                (None, false) => Verdict::False,
            };
            Enumeration {
                maps: witness.iter().cloned().collect(),
                outcome: SearchOutcome { verdict, witness, stats },
            }
        }
        SearchMode::Exhaustive => {
            let mut found = Vec::new();
            if consistent {
                let _ = engine.all(domains, &mut |a| found.push(a.to_vec()));
            }
            found.sort_unstable();
            let verdict = if engine.exhausted {
                Verdict::Unknown
            } else {
                Verdict::from_bool(!found.is_empty())
            };
            let maps: Vec<ImageMap> = found.into_iter().map(wrap).collect();
            Enumeration {
                outcome: SearchOutcome {
                    verdict,
                    witness: maps.first().cloned(),
                    stats,
                },
                maps,
            }
        }
    };
    stats.nodes = engine.nodes;
    stats.budget_exhausted = engine.exhausted;
    let mut enumeration = enumeration;
    enumeration.outcome.stats = stats;
    Ok(enumeration)
}

/// How a streaming enumeration ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VisitSummary {
    /// Every solution was visited.
    pub complete: bool,
    pub solutions: u64,
    pub stats: SearchStats,
}

/// Calls `visit` once per continuous map satisfying `constraints`, without
/// collecting them. Visiting order is deterministic but follows the
/// branching heuristic rather than lexicographic order.
pub fn visit_continuous_maps(
    source: &DigitalImage,
    target: &DigitalImage,
    constraints: &MapConstraints,
    budget: SearchBudget,
    mut visit: impl FnMut(&[usize]),
) -> Result<VisitSummary> {
    let mut engine = Engine::new(source, target, budget.max_nodes);
    let mut solutions = 0u64;
    if let Some(mut domains) = initial_domains(source, target, constraints)? {
        if engine.propagate(&mut domains, 0..source.len()) {
            let _ = engine.all(domains, &mut |a| {
                solutions += 1;
                visit(a)
            });
        }
    }
    Ok(VisitSummary {
        complete: !engine.exhausted,
        solutions,
        stats: SearchStats {
            nodes: engine.nodes,
            states: 0,
            budget_exhausted: engine.exhausted,
        },
    })
}

/// Enumerates continuous self-maps of `x`.
pub fn enumerate_continuous_self_maps(
    x: &DigitalImage,
    constraints: &MapConstraints,
    budget: SearchBudget,
    mode: SearchMode,
) -> Result<Enumeration> {
    enumerate_continuous_maps(x, x, constraints, budget, mode)
}

/// The lexicographically least continuous self-map of `x` satisfying at
/// least one of `alternatives`.
///
/// A disjunctive requirement ("moves some point", "misses some point") is
/// expressed as one constraint set per case; the node budget and the
/// incumbent bound are shared across cases.
pub fn least_self_map_among(
    x: &DigitalImage,
    alternatives: &[MapConstraints],
    budget: SearchBudget,
) -> Result<SearchOutcome> {
    let mut engine = Engine::new(x, x, budget.max_nodes);
    let mut best: Option<Vec<usize>> = None;
    for constraints in alternatives {
        let Some(mut domains) = initial_domains(x, x, constraints)? else {
            continue;
        };
        if !engine.propagate(&mut domains, 0..x.len()) {
            continue;
        }
        if engine.least(domains, &mut best).is_err() {
            break;
        }
    }
    let witness = best.map(|a| ImageMap::on(x, a).expect("solution in range"));
    let verdict = match (&witness, engine.exhausted) {
        (Some(_), _) => Verdict::True,
        (None, true) => Verdict::Unknown,
        (None, false) => Verdict::False,
    };
    Ok(SearchOutcome {
        verdict,
        witness,
        stats: SearchStats {
            nodes: engine.nodes,
            states: 0,
            budget_exhausted: engine.exhausted,
        },
    })
}

/// Domains equal to closed neighbourhoods: the candidates for a 1-map.
pub fn closed_neighborhood_domains(x: &DigitalImage) -> Vec<IndexSet> {
    (0..x.len()).map(|p| x.closed_set(p).clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{digital_box, interval};

    fn brute_force(x: &DigitalImage) -> Vec<Vec<usize>> {
        let n = x.len();
        let total = n.pow(n as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut a = vec![0; n];
            let mut c = code;
            for slot in a.iter_mut().rev() {
                *slot = c % n;
                c /= n;
            }
            if x
                .edges()
                .iter()
                .all(|&(p, q)| x.adjacent_or_equal(a[p], a[q]))
            {
                out.push(a);
            }
        }
        out
    }

    fn assignments(e: &Enumeration) -> Vec<Vec<usize>> {
        e.maps.iter().map(|m| m.assignment().to_vec()).collect()
    }

    #[test]
    fn interval_counts() {
        let b = SearchBudget::default();
        let x1 = interval(0, 1).unwrap();
        let e = enumerate_continuous_self_maps(&x1, &MapConstraints::none(), b, SearchMode::Exhaustive).unwrap();
        assert_eq!(e.maps.len(), 4);
        assert_eq!(assignments(&e), brute_force(&x1));

        let x2 = interval(0, 2).unwrap();
        let e = enumerate_continuous_self_maps(&x2, &MapConstraints::none(), b, SearchMode::Exhaustive).unwrap();
        assert_eq!(e.maps.len(), 17);
        assert_eq!(assignments(&e), brute_force(&x2));
    }

    #[test]
    fn pinned_endpoints_leave_identity() {
        let x = interval(0, 2).unwrap();
        let c = MapConstraints::fixing([0, 2]);
        let e = enumerate_continuous_self_maps(&x, &c, SearchBudget::default(), SearchMode::Exhaustive).unwrap();
        assert_eq!(assignments(&e), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn first_witness_is_least() {
        let x = digital_box(&[(0, 1), (0, 2)], 2).unwrap();
        let all = brute_force(&x);
        let c = MapConstraints::none().pin(3, 5);
        let first =
            enumerate_continuous_self_maps(&x, &c, SearchBudget::default(), SearchMode::FirstWitness).unwrap();
        let expected = all.iter().find(|a| a[3] == 5).unwrap();
        assert_eq!(first.outcome.witness.unwrap().assignment(), &expected[..]);
    }

    #[test]
    fn excluded_point_and_errors() {
        let x = interval(0, 2).unwrap();
        let c = MapConstraints::none().excluding(1);
        let e = enumerate_continuous_self_maps(&x, &c, SearchBudget::default(), SearchMode::Exhaustive).unwrap();
        // constant maps 0 and 2 only
        assert_eq!(assignments(&e), vec![vec![0, 0, 0], vec![2, 2, 2]]);

        let bad = MapConstraints::none().pin(0, 1).excluding(1);
        assert!(matches!(
            enumerate_continuous_self_maps(&x, &bad, SearchBudget::default(), SearchMode::Exhaustive),
            Err(Error::InconsistentConstraints(_))
        ));
        let out_of_range = MapConstraints::none().pin(5, 0);
        assert!(enumerate_continuous_self_maps(&x, &out_of_range, SearchBudget::default(), SearchMode::Exhaustive)
            .is_err());

        let contradictory = MapConstraints::fixing([0]).pin(2, 2).pin(1, 0).pin(0, 2);
        let e = enumerate_continuous_self_maps(&x, &contradictory, SearchBudget::default(), SearchMode::FirstWitness)
            .unwrap();
        assert_eq!(e.outcome.verdict, Verdict::False);
    }

    #[test]
    fn budget_exhaustion_is_unknown() {
        let x = interval(0, 6).unwrap();
        let tiny = SearchBudget::new(3, 1).unwrap();
        let e = enumerate_continuous_self_maps(&x, &MapConstraints::none(), tiny, SearchMode::Exhaustive).unwrap();
        assert_eq!(e.outcome.verdict, Verdict::Unknown);
        assert!(e.outcome.stats.budget_exhausted);
        // pins force a jump of 6 positions across 3 steps
        let impossible = MapConstraints::none().pin(0, 0).pin(6, 6).pin(3, 6);
        let e = enumerate_continuous_self_maps(&x, &impossible, tiny, SearchMode::FirstWitness).unwrap();
        assert_eq!(e.outcome.verdict, Verdict::False, "propagation alone settles this");
        assert!(SearchBudget::new(0, 1).is_err());
    }

    #[test]
    fn visitor_sees_every_solution() {
        let x = digital_box(&[(0, 1), (0, 1)], 1).unwrap();
        let mut seen = Vec::new();
        let summary =
            visit_continuous_maps(&x, &x, &MapConstraints::none(), SearchBudget::default(), |a| seen.push(a.to_vec()))
                .unwrap();
        seen.sort();
        assert!(summary.complete);
        assert_eq!(summary.solutions as usize, seen.len());
        assert_eq!(seen, brute_force(&x));
    }

    #[test]
    fn disjunction_takes_global_minimum() {
        let x = interval(0, 2).unwrap();
        let mut moved_only_2 = closed_neighborhood_domains(&x);
        moved_only_2[2].set(2, false);
        let mut moved_only_0 = closed_neighborhood_domains(&x);
        moved_only_0[0].set(0, false);
        let alts = [
            MapConstraints::none().with_domains(moved_only_2),
            MapConstraints::none().with_domains(moved_only_0),
        ];
        let out = least_self_map_among(&x, &alts, SearchBudget::default()).unwrap();
        assert_eq!(out.verdict, Verdict::True);
        assert_eq!(out.witness.unwrap().assignment(), &[0, 0, 1]);
    }
}
