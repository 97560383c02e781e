//! Freezing sets and s-cold sets.
//!
//! `A` is freezing when the only continuous self-map fixing `A` pointwise
//! is the identity; `A` is s-cold when every such map moves each point by
//! at most `s` steps. Both are decided by searching for a violating map,
//! one sub-search per point that might violate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::DigitalImage;
use crate::search::{least_self_map_among, MapConstraints, SearchBudget, SearchOutcome, Verdict};

/// Size guard for [`cold_sets_audit`].
pub const AUDIT_MAX_POINTS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PinRole {
    FreezingCandidate,
    /// Candidate s-cold set with radius `s`.
    ColdCandidate(usize),
}

/// A candidate subset of an image, in canonical index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinSet {
    pub image: DigitalImage,
    pub indices: BTreeSet<usize>,
    pub role: PinRole,
}

impl PinSet {
    pub fn new(image: &DigitalImage, indices: impl IntoIterator<Item = usize>, role: PinRole) -> Result<Self> {
        let indices: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&bad) = indices.iter().find(|&&i| i >= image.len()) {
            return Err(Error::IndexOutOfRange { index: bad, len: image.len() });
        }
        Ok(PinSet {
            image: image.clone(),
            indices,
            role,
        })
    }

    pub fn check(&self, budget: SearchBudget) -> Result<SearchOutcome> {
        let a: Vec<usize> = self.indices.iter().copied().collect();
        match self.role {
            PinRole::FreezingCandidate => is_freezing(&self.image, &a, budget),
            PinRole::ColdCandidate(s) => is_s_cold(&self.image, &a, s, budget),
        }
    }
}

fn normalized(x: &DigitalImage, a: &[usize]) -> Result<BTreeSet<usize>> {
    let set: BTreeSet<usize> = a.iter().copied().collect();
    if let Some(&bad) = set.iter().find(|&&i| i >= x.len()) {
        return Err(Error::IndexOutOfRange { index: bad, len: x.len() });
    }
    Ok(set)
}

/// `True` iff `a` is a freezing set. Otherwise the witness is the least
/// continuous `g ≠ id` fixing `a`.
pub fn is_freezing(x: &DigitalImage, a: &[usize], budget: SearchBudget) -> Result<SearchOutcome> {
    let pinned = normalized(x, a)?;
    let alternatives: Vec<MapConstraints> = (0..x.len())
        .filter(|p| !pinned.contains(p))
        .map(|p| {
            let mut d = x.full_set();
            d.set(p, false);
            let mut domains = vec![x.full_set(); x.len()];
            domains[p] = d;
            MapConstraints::fixing(pinned.iter().copied()).with_domains(domains)
        })
        .collect();
    let mut out = least_self_map_among(x, &alternatives, budget)?;
    out.verdict = out.verdict.negate();
    Ok(out)
}

/// `True` iff `a` is an s-cold set for the connected image `x`. Otherwise
/// the witness fixes `a` and moves some point more than `s` steps.
pub fn is_s_cold(x: &DigitalImage, a: &[usize], s: usize, budget: SearchBudget) -> Result<SearchOutcome> {
    if !x.is_connected() {
        return Err(Error::Disconnected);
    }
    let pinned = normalized(x, a)?;
    let alternatives: Vec<MapConstraints> = (0..x.len())
        .filter(|p| !pinned.contains(p))
        .filter_map(|p| {
            let mut far = x.empty_set();
            for q in 0..x.len() {
                if x.distance(p, q).exceeds(s) {
                    far.insert(q);
                }
            }
            if far.is_clear() {
                return None;
            }
            let mut domains = vec![x.full_set(); x.len()];
            domains[p] = far;
            Some(MapConstraints::fixing(pinned.iter().copied()).with_domains(domains))
        })
        .collect();
    let mut out = least_self_map_among(x, &alternatives, budget)?;
    out.verdict = out.verdict.negate();
    Ok(out)
}

/// Shrinks a freezing set to a minimal one by trying to drop each point in
/// ascending order, starting over after every successful removal.
///
/// The result is *a* minimal freezing subset of `a` (no single point can
/// be removed), not necessarily one of least cardinality.
pub fn minimize_freezing(x: &DigitalImage, a: &[usize], budget: SearchBudget) -> Result<Vec<usize>> {
    let mut current: Vec<usize> = normalized(x, a)?.into_iter().collect();
    let check = |set: &[usize]| -> Result<bool> {
        let out = is_freezing(x, set, budget)?;
        match out.verdict {
            Verdict::True => Ok(true),
            Verdict::False => Ok(false),
            Verdict::Unknown => Err(Error::BudgetExhausted(format!(
                "freezing check on {set:?} ran out after {} nodes",
                out.stats.nodes
            ))),
        }
    };
    if !check(&current)? {
        return Err(Error::NotFreezing);
    }
    'restart: loop {
        for k in 0..current.len() {
            let mut smaller = current.clone();
            smaller.remove(k);
            if check(&smaller)? {
                current = smaller;
                continue 'restart;
            }
        }
        return Ok(current);
    }
}

/// Every subset classified; only the inclusion-minimal ones are listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColdSetAudit {
    /// `None` when the image is disconnected, where cold sets are undefined.
    pub minimal_cold_sets: Option<Vec<Vec<usize>>>,
    pub minimal_freezing_sets: Vec<Vec<usize>>,
    pub cold_set_count: Option<usize>,
    pub freezing_set_count: usize,
    pub notes: Vec<String>,
}

/// Classifies every subset of `x` as freezing and as cold.
///
/// Both properties pass to supersets (fixing more points only removes
/// candidate maps), so a subset containing a known minimal set is
/// classified without a search.
pub fn cold_sets_audit(x: &DigitalImage, budget: SearchBudget) -> Result<ColdSetAudit> {
    let n = x.len();
    if n > AUDIT_MAX_POINTS {
        return Err(Error::TooLarge {
            points: n,
            limit: AUDIT_MAX_POINTS,
        });
    }
    let connected = x.is_connected();
    let mut masks: Vec<u32> = (0..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
    let decide = |out: SearchOutcome| -> Result<bool> {
        match out.verdict {
            Verdict::True => Ok(true),
            Verdict::False => Ok(false),
            Verdict::Unknown => Err(Error::BudgetExhausted(format!(
                "audit subset check ran out after {} nodes",
                out.stats.nodes
            ))),
        }
    };

    let mut minimal_freezing: Vec<u32> = Vec::new();
    let mut minimal_cold: Vec<u32> = Vec::new();
    let (mut freezing_count, mut cold_count) = (0usize, 0usize);
    for &mask in &masks {
        let set: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if minimal_freezing.iter().any(|&m| m & mask == m) {
            freezing_count += 1;
        } else if decide(is_freezing(x, &set, budget)?)? {
            freezing_count += 1;
            minimal_freezing.push(mask);
        }
        if connected {
            if minimal_cold.iter().any(|&m| m & mask == m) {
                cold_count += 1;
            } else if decide(is_s_cold(x, &set, 1, budget)?)? {
                cold_count += 1;
                minimal_cold.push(mask);
            }
        }
    }
    let to_sets = |v: &[u32]| -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = v
            .iter()
            .map(|&m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
            .collect();
        sets.sort();
        sets
    };
    let mut notes = Vec::new();
    if minimal_freezing.contains(&0) {
        notes.push("the empty set is freezing: the identity is the only continuous self-map".to_string());
    }
    if !connected {
        notes.push("image is disconnected; cold sets are not defined".to_string());
    }
    Ok(ColdSetAudit {
        minimal_cold_sets: connected.then(|| to_sets(&minimal_cold)),
        minimal_freezing_sets: to_sets(&minimal_freezing),
        cold_set_count: connected.then_some(cold_count),
        freezing_set_count: freezing_count,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{digital_box, interval};
    use crate::lattice::Point;

    fn b() -> SearchBudget {
        SearchBudget::default()
    }

    #[test]
    fn freezing_examples() {
        let x = interval(0, 5).unwrap();
        assert_eq!(is_freezing(&x, &[0, 5], b()).unwrap().verdict, Verdict::True);
        let y = interval(0, 1).unwrap();
        let out = is_freezing(&y, &[0], b()).unwrap();
        assert_eq!(out.verdict, Verdict::False);
        assert_eq!(out.witness.unwrap().assignment(), &[0, 0]);
        let all: Vec<usize> = (0..x.len()).collect();
        assert_eq!(is_freezing(&x, &all, b()).unwrap().verdict, Verdict::True);
        assert!(is_freezing(&x, &[9], b()).is_err());
    }

    #[test]
    fn cold_examples() {
        assert_eq!(is_s_cold(&interval(0, 1).unwrap(), &[0], 1, b()).unwrap().verdict, Verdict::True);
        let out = is_s_cold(&interval(0, 2).unwrap(), &[1], 1, b()).unwrap();
        assert_eq!(out.verdict, Verdict::False);
        assert!(out.witness.unwrap().max_displacement().unwrap().exceeds(1));
        let x = interval(0, 4).unwrap();
        assert_eq!(is_s_cold(&x, &[0, 4], 0, b()).unwrap().verdict, Verdict::True);
        let gap = DigitalImage::build(
            [Point::from([0]), Point::from([2])],
            crate::lattice::AdjacencySpec::Cu { u: 1 },
        )
        .unwrap();
        assert_eq!(is_s_cold(&gap, &[0], 1, b()), Err(Error::Disconnected));
        // freezing queries accept disconnected images
        assert_eq!(is_freezing(&gap, &[0, 1], b()).unwrap().verdict, Verdict::True);
        assert_eq!(is_freezing(&gap, &[0], b()).unwrap().verdict, Verdict::False);
    }

    #[test]
    fn minimization() {
        let x = interval(0, 5).unwrap();
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(minimize_freezing(&x, &all, b()).unwrap(), vec![0, 5]);

        let g = digital_box(&[(0, 2), (0, 2)], 1).unwrap();
        let corners: Vec<usize> = [[0, 0], [0, 2], [2, 0], [2, 2]]
            .iter()
            .map(|c| g.index_of(&Point::from(*c)).unwrap())
            .collect();
        assert_eq!(minimize_freezing(&g, &g.boundary(), b()).unwrap(), corners);

        let single = interval(3, 3).unwrap();
        assert_eq!(minimize_freezing(&single, &[0], b()).unwrap(), Vec::<usize>::new());

        assert_eq!(minimize_freezing(&x, &[0], b()), Err(Error::NotFreezing));
    }

    #[test]
    fn audits() {
        let a = cold_sets_audit(&interval(0, 2).unwrap(), b()).unwrap();
        assert_eq!(a.minimal_cold_sets, Some(vec![vec![0, 2]]));
        assert_eq!(a.minimal_freezing_sets, vec![vec![0, 2]]);

        let a = cold_sets_audit(&interval(0, 1).unwrap(), b()).unwrap();
        // diameter 1: every self-map is a 1-map, so even the empty set is cold
        assert_eq!(a.minimal_cold_sets, Some(vec![vec![]]));
        assert_eq!(a.minimal_freezing_sets, vec![vec![0, 1]]);
        assert_eq!(a.cold_set_count, Some(4));
        assert_eq!(a.freezing_set_count, 1);

        let a = cold_sets_audit(&interval(0, 0).unwrap(), b()).unwrap();
        assert_eq!(a.minimal_cold_sets, Some(vec![vec![]]));
        assert_eq!(a.minimal_freezing_sets, vec![Vec::<usize>::new()]);
        assert!(!a.notes.is_empty());

        assert!(matches!(
            cold_sets_audit(&interval(0, 12).unwrap(), b()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn pin_sets() {
        let x = interval(0, 2).unwrap();
        let p = PinSet::new(&x, [0, 2], PinRole::FreezingCandidate).unwrap();
        assert_eq!(p.check(b()).unwrap().verdict, Verdict::True);
        let c = PinSet::new(&x, [1], PinRole::ColdCandidate(1)).unwrap();
        assert_eq!(c.check(b()).unwrap().verdict, Verdict::False);
        assert!(PinSet::new(&x, [3], PinRole::FreezingCandidate).is_err());
    }
}
