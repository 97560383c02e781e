//! Checks of the structural results on rigidity, reducibility and fixed
//! point sets over the generated corpus. Each claim is tested only in the
//! direction it asserts; instances where the hypothesis fails are recorded
//! as vacuous.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constructors::Wedge;
use crate::corpus::{embed_wedge, random_subset, Corpus, CorpusEntry, EntryKind, RigidDiscovery};
use crate::error::Result;
use crate::fixedpoint::{is_freezing, is_s_cold};
use crate::homotopy::{is_reducible, is_rigid, rigid_by_map_space, search_component};
use crate::lattice::{DigitalImage, Point};
use crate::maps::ImageMap;
use crate::search::{SearchBudget, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// The hypothesis does not hold, so the instance says nothing.
    Vacuous,
    Fail,
    /// No instance could be built; the reason is in the detail.
    Skipped,
    /// A budget ran out.
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceResult {
    pub instance: String,
    pub status: Status,
    pub detail: String,
}

fn instance(name: impl Into<String>, status: Status, detail: impl Into<String>) -> InstanceResult {
    InstanceResult {
        instance: name.into(),
        status,
        detail: detail.into(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub claim: &'static str,
    pub statement: &'static str,
    pub instances: Vec<InstanceResult>,
}

impl ClaimReport {
    fn new(claim: &'static str, statement: &'static str) -> Self {
        ClaimReport {
            claim,
            statement,
            instances: Vec::new(),
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.instances.iter().filter(|i| i.status == status).count()
    }

    /// `False` on any failure, else `Unknown` on any budget cut-off, else
    /// `True`.
    pub fn verdict(&self) -> Verdict {
        if self.count(Status::Fail) > 0 {
            Verdict::False
        } else if self.count(Status::Unknown) > 0 {
            Verdict::Unknown
        } else {
            Verdict::True
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} pass, {} vacuous, {} fail, {} skipped, {} unknown",
            self.claim,
            self.count(Status::Pass),
            self.count(Status::Vacuous),
            self.count(Status::Fail),
            self.count(Status::Skipped),
            self.count(Status::Unknown)
        )
    }
}

/// Results of one rigid-image search, with coordinates of what was found.
#[derive(Clone, Debug, Serialize)]
pub struct DiscoverySummary {
    pub region: String,
    pub adjacency: String,
    pub connected_subsets: u64,
    pub candidates: u64,
    pub tested: u64,
    pub smallest_rigid_size: Option<usize>,
    pub smallest_rigid_count: usize,
    pub representative: Option<Vec<Point>>,
}

impl From<&RigidDiscovery> for DiscoverySummary {
    fn from(d: &RigidDiscovery) -> Self {
        DiscoverySummary {
            region: format!("[0,{}]^2", d.extent),
            adjacency: format!("c_{}", d.u),
            connected_subsets: d.connected,
            candidates: d.candidates,
            tested: d.tested,
            smallest_rigid_size: d.smallest_size(),
            smallest_rigid_count: d.smallest.len(),
            representative: d.representative().map(|x| x.points().to_vec()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub discoveries: Vec<DiscoverySummary>,
    pub claims: Vec<ClaimReport>,
}

impl SuiteReport {
    pub fn verdict(&self) -> Verdict {
        let vs: Vec<Verdict> = self.claims.iter().map(ClaimReport::verdict).collect();
        if vs.contains(&Verdict::False) {
            Verdict::False
        } else if vs.contains(&Verdict::Unknown) {
            Verdict::Unknown
        } else {
            Verdict::True
        }
    }

    pub fn failures(&self) -> usize {
        self.claims.iter().map(|c| c.count(Status::Fail)).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub budget: SearchBudget,
    /// Largest `k` for the rigid-image search over `[0,k]^2`.
    pub discovery_extent: i64,
    /// Subsets sampled per rigid image for the freezing/cold equivalence.
    pub sampled_subsets: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            budget: SearchBudget::default(),
            discovery_extent: 4,
            sampled_subsets: 100,
        }
    }
}

/// Corpus plus memoized rigidity and reducibility verdicts.
pub struct Checker<'a> {
    pub corpus: &'a Corpus,
    pub budget: SearchBudget,
    rigid: HashMap<String, Verdict>,
    reducible: HashMap<String, Verdict>,
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Unknown => "unknown",
    }
}

fn same_lattice(a: &CorpusEntry, b: &CorpusEntry) -> bool {
    a.image.dimension() == b.image.dimension() && a.cu().is_some() && a.cu() == b.cu()
}

impl<'a> Checker<'a> {
    pub fn new(corpus: &'a Corpus, budget: SearchBudget) -> Self {
        Checker {
            corpus,
            budget,
            rigid: HashMap::new(),
            reducible: HashMap::new(),
        }
    }

    pub fn rigid(&mut self, name: &str, x: &DigitalImage) -> Verdict {
        let budget = self.budget;
        *self
            .rigid
            .entry(name.to_string())
            .or_insert_with(|| is_rigid(x, budget).verdict)
    }

    pub fn reducible(&mut self, name: &str, x: &DigitalImage) -> Verdict {
        let budget = self.budget;
        *self
            .reducible
            .entry(name.to_string())
            .or_insert_with(|| is_reducible(x, budget).verdict)
    }

    fn factors(&self, e: &CorpusEntry) -> Vec<&'a CorpusEntry> {
        e.factors
            .iter()
            .map(|n| self.corpus.get(n).expect("factor is in the corpus"))
            .collect()
    }

    fn base_where(&mut self, keep: impl Fn(&mut Self, &CorpusEntry) -> bool) -> Vec<&'a CorpusEntry> {
        let base = &self.corpus.base;
        base.iter()
            .filter(|e| e.kind != EntryKind::Product && e.cu().is_some() && e.image.len() > 1)
            .filter(|e| keep(self, e))
            .collect()
    }

    fn rigid_pool(&mut self) -> Vec<&'a CorpusEntry> {
        self.base_where(|c, e| e.image.is_connected() && c.rigid(&e.name, &e.image) == Verdict::True)
    }

    fn irreducible_pool(&mut self) -> Vec<&'a CorpusEntry> {
        self.base_where(|c, e| c.reducible(&e.name, &e.image) == Verdict::False)
    }

    /// If a product is rigid, every factor is rigid.
    pub fn rigid_products_have_rigid_factors(&mut self) -> ClaimReport {
        let mut r = ClaimReport::new(
            "rigid-product-has-rigid-factors",
            "a rigid normal product of images has rigid factors",
        );
        for p in &self.corpus.products {
            let v = self.rigid(&p.name, &p.image);
            let status = match v {
                Verdict::Unknown => Status::Unknown,
                Verdict::False => Status::Vacuous,
                Verdict::True => {
                    let bad: Vec<&str> = self
                        .factors(p)
                        .into_iter()
                        .filter(|f| self.rigid(&f.name, &f.image) != Verdict::True)
                        .map(|f| f.name.as_str())
                        .collect();
                    if bad.is_empty() {
                        Status::Pass
                    } else {
                        Status::Fail
                    }
                }
            };
            r.instances
                .push(instance(&p.name, status, format!("product rigid = {}", verdict_word(v))));
        }
        r
    }

    /// A reducible factor makes the product reducible.
    pub fn reducible_factor_makes_product_reducible(&mut self) -> ClaimReport {
        let mut r = ClaimReport::new(
            "reducible-factor-gives-reducible-product",
            "a normal product with a reducible factor is reducible",
        );
        for p in &self.corpus.products {
            let factors = self.factors(p);
            let reducible: Vec<&str> = factors
                .iter()
                .filter(|f| self.reducible(&f.name, &f.image) == Verdict::True)
                .map(|f| f.name.as_str())
                .collect();
            if reducible.is_empty() {
                r.instances.push(instance(&p.name, Status::Vacuous, "no reducible factor"));
                continue;
            }
            let v = self.reducible(&p.name, &p.image);
            let status = match v {
                Verdict::True => Status::Pass,
                Verdict::False => Status::Fail,
                Verdict::Unknown => Status::Unknown,
            };
            r.instances.push(instance(
                &p.name,
                status,
                format!("reducible factors {reducible:?}; product reducible = {}", verdict_word(v)),
            ));
        }
        r
    }

    /// An irreducible product has irreducible factors.
    pub fn irreducible_products_have_irreducible_factors(&mut self) -> ClaimReport {
        let mut r = ClaimReport::new(
            "irreducible-product-has-irreducible-factors",
            "an irreducible normal product has irreducible factors",
        );
        for p in &self.corpus.products {
            let v = self.reducible(&p.name, &p.image);
            let status = match v {
                Verdict::Unknown => Status::Unknown,
                Verdict::True => Status::Vacuous,
                Verdict::False => {
                    let ok = self
                        .factors(p)
                        .into_iter()
                        .all(|f| self.reducible(&f.name, &f.image) == Verdict::False);
                    if ok {
                        Status::Pass
                    } else {
                        Status::Fail
                    }
                }
            };
            r.instances
                .push(instance(&p.name, status, format!("product reducible = {}", verdict_word(v))));
        }
        r
    }

    /// Wedges over every pair (with repetition) of `pool` images sharing a
    /// lattice; `check` decides the status of each built wedge.
    fn wedge_claim(
        &mut self,
        mut r: ClaimReport,
        left: &[&'a CorpusEntry],
        right: &[&'a CorpusEntry],
        symmetric: bool,
        check: impl Fn(&DigitalImage, SearchBudget) -> Verdict,
    ) -> ClaimReport {
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                if (symmetric && j < i) || !same_lattice(a, b) {
                    continue;
                }
                let name = format!("{} v {}", a.name, b.name);
                match embed_wedge(&a.image, &b.image) {
                    None => r
                        .instances
                        .push(instance(name, Status::Skipped, "no instance found: no wedge placement")),
                    Some((w, _)) => {
                        let v = check(&w.image, self.budget);
                        let status = match v {
                            Verdict::True => Status::Pass,
                            Verdict::False => Status::Fail,
                            Verdict::Unknown => Status::Unknown,
                        };
                        r.instances.push(instance(
                            name,
                            status,
                            format!("{} points, wedge point {}", w.image.len(), w.image.point(w.wedge_point)),
                        ));
                    }
                }
            }
        }
        if left.is_empty() || right.is_empty() {
            r.instances
                .push(instance("pool", Status::Skipped, "no instance found: empty image pool"));
        }
        r
    }

    /// Wedges of connected rigid images are rigid.
    pub fn rigid_wedges_are_rigid(&mut self) -> ClaimReport {
        let pool = self.rigid_pool();
        let r = ClaimReport::new(
            "rigid-wedge-is-rigid",
            "the wedge of two connected rigid images with more than one point is rigid",
        );
        self.wedge_claim(r, &pool, &pool, true, |x, b| is_rigid(x, b).verdict)
    }

    /// Wedges of irreducible images are irreducible.
    pub fn irreducible_wedges_are_irreducible(&mut self) -> ClaimReport {
        let pool = self.irreducible_pool();
        let r = ClaimReport::new(
            "irreducible-wedge-is-irreducible",
            "the wedge of two irreducible images with more than one point is irreducible",
        );
        self.wedge_claim(r, &pool, &pool, true, |x, b| is_reducible(x, b).verdict.negate())
    }

    fn long_curves(&self) -> Vec<&'a CorpusEntry> {
        self.corpus
            .base
            .iter()
            .filter(|e| e.kind == EntryKind::Curve && e.image.len() >= 5)
            .collect()
    }

    /// A rigid image wedged with a simple closed curve of at least 5 points
    /// is rigid.
    pub fn rigid_wedge_long_curve_is_rigid(&mut self) -> ClaimReport {
        let pool = self.rigid_pool();
        let curves = self.long_curves();
        let r = ClaimReport::new(
            "rigid-wedge-long-curve-is-rigid",
            "a rigid image wedged with a simple closed curve of at least 5 points is rigid",
        );
        self.wedge_claim(r, &pool, &curves, false, |x, b| is_rigid(x, b).verdict)
    }

    /// Simple closed curves of at least 5 points are irreducible and not
    /// rigid.
    pub fn long_curves_irreducible_not_rigid(&mut self) -> ClaimReport {
        let mut r = ClaimReport::new(
            "long-curve-irreducible-not-rigid",
            "a simple closed curve of at least 5 points is irreducible but not rigid",
        );
        let curves: Vec<&CorpusEntry> = self.corpus.base.iter().filter(|e| e.kind == EntryKind::Curve).collect();
        for c in curves {
            if c.image.len() < 5 {
                r.instances.push(instance(&c.name, Status::Vacuous, "fewer than 5 points"));
                continue;
            }
            let red = self.reducible(&c.name, &c.image);
            let rig = self.rigid(&c.name, &c.image);
            let status = match (red, rig) {
                (Verdict::False, Verdict::False) => Status::Pass,
                (Verdict::Unknown, _) | (_, Verdict::Unknown) => Status::Unknown,
                _ => Status::Fail,
            };
            r.instances.push(instance(
                &c.name,
                status,
                format!("reducible = {}, rigid = {}", verdict_word(red), verdict_word(rig)),
            ));
        }
        r
    }

    /// Rigid images are irreducible.
    pub fn rigid_implies_irreducible(&mut self) -> ClaimReport {
        let mut r = ClaimReport::new("rigid-is-irreducible", "a finite rigid image is irreducible");
        for e in self.corpus.all() {
            if e.image.len() > 40 {
                continue;
            }
            let rig = self.rigid(&e.name, &e.image);
            let status = match rig {
                Verdict::False => Status::Vacuous,
                Verdict::Unknown => Status::Unknown,
                Verdict::True => match self.reducible(&e.name, &e.image) {
                    Verdict::False => Status::Pass,
                    Verdict::True => Status::Fail,
                    Verdict::Unknown => Status::Unknown,
                },
            };
            r.instances.push(instance(&e.name, status, format!("rigid = {}", verdict_word(rig))));
        }
        r
    }

    /// On connected rigid images, freezing sets and cold sets coincide.
    pub fn rigid_freezing_iff_cold(&mut self, seed: u64, samples: usize) -> ClaimReport {
        let mut r = ClaimReport::new(
            "rigid-freezing-iff-cold",
            "on a connected rigid image a subset is freezing exactly when it is 1-cold",
        );
        let pool = self.rigid_pool();
        if pool.is_empty() {
            r.instances
                .push(instance("pool", Status::Skipped, "no instance found: no rigid image in the corpus"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for e in pool {
            let (mut agree, mut freezing) = (0, 0);
            let mut bad = Vec::new();
            let mut unknown = false;
            for _ in 0..samples {
                let a = random_subset(&mut rng, &e.image);
                let f = is_freezing(&e.image, &a, self.budget).expect("valid subset").verdict;
                let c = is_s_cold(&e.image, &a, 1, self.budget).expect("connected image").verdict;
                if !f.is_definite() || !c.is_definite() {
                    unknown = true;
                } else if f == c {
                    agree += 1;
                    freezing += usize::from(f == Verdict::True);
                } else {
                    bad.push(a);
                }
            }
            let status = if !bad.is_empty() {
                Status::Fail
            } else if unknown {
                Status::Unknown
            } else {
                Status::Pass
            };
            let mut detail = format!("{agree}/{samples} subsets agree, {freezing} freezing");
            if let Some(a) = bad.first() {
                detail.push_str(&format!("; first mismatch {a:?}"));
            }
            r.instances.push(instance(&e.name, status, detail));
        }
        r
    }

    /// Rigidity decided through 1-maps matches the map-space search.
    pub fn one_map_rigidity_matches_map_space(&mut self, max_points: usize) -> ClaimReport {
        let mut r = ClaimReport::new(
            "rigidity-by-one-maps",
            "an image is rigid exactly when the identity is its only 1-map",
        );
        for e in self.corpus.all() {
            if e.image.len() > max_points {
                continue;
            }
            let csp = self.rigid(&e.name, &e.image);
            let bfs = rigid_by_map_space(&e.image, self.budget).expect("identity is continuous").verdict;
            let status = if !csp.is_definite() || !bfs.is_definite() {
                Status::Unknown
            } else if csp == bfs {
                Status::Pass
            } else {
                Status::Fail
            };
            r.instances.push(instance(
                &e.name,
                status,
                format!("1-map search = {}, map-space search = {}", verdict_word(csp), verdict_word(bfs)),
            ));
        }
        r
    }

    /// A homotopy from the identity of a simple closed curve to a map that
    /// does not cover the curve only exists for 4-point curves.
    pub fn curve_homotopies_keep_image(&mut self, sizes: std::ops::RangeInclusive<usize>) -> ClaimReport {
        let mut r = ClaimReport::new(
            "curve-deformation-needs-four-points",
            "if the identity of a simple closed curve is homotopic to a map with a smaller image, the curve has 4 points",
        );
        let curves: Vec<&CorpusEntry> = self
            .corpus
            .base
            .iter()
            .filter(|e| e.kind == EntryKind::Curve && sizes.contains(&e.image.len()))
            .collect();
        for c in curves {
            let out = curve_deformation(&c.image, self.budget);
            let status = match (out.verdict, c.image.len() == 4) {
                (Verdict::Unknown, _) => Status::Unknown,
                (Verdict::True, true) | (Verdict::False, false) => Status::Pass,
                (Verdict::False, true) => Status::Vacuous,
                (Verdict::True, false) => Status::Fail,
            };
            let detail = match &out.homotopy {
                Some(h) => format!("reached {:?} in {} steps", h.end().assignment(), h.steps()),
                None => format!("component of the identity has {} maps", out.component_size),
            };
            r.instances.push(instance(&c.name, status, detail));
        }
        r
    }

    /// The boundary of each corpus image is a freezing set.
    pub fn boundary_is_freezing(&mut self) -> ClaimReport {
        let mut r = ClaimReport::new("boundary-is-freezing", "the boundary of a finite c_u image is a freezing set");
        for e in &self.corpus.base {
            if e.cu().is_none() {
                continue;
            }
            let bd = e.image.boundary();
            let v = is_freezing(&e.image, &bd, self.budget).expect("valid subset").verdict;
            let status = match v {
                Verdict::True => Status::Pass,
                Verdict::False => Status::Fail,
                Verdict::Unknown => Status::Unknown,
            };
            r.instances.push(instance(
                &e.name,
                status,
                format!("{} of {} points on the boundary", bd.len(), e.image.len()),
            ));
        }
        r
    }

    /// Collapsing one summand of a wedge onto the wedge point is a
    /// retraction onto the other summand.
    pub fn wedge_collapse_is_retraction(&mut self) -> ClaimReport {
        let mut r = ClaimReport::new(
            "wedge-collapse-is-retraction",
            "sending one wedge summand to the wedge point is a retraction onto the other summand",
        );
        let pool = self.irreducible_pool();
        for (i, a) in pool.iter().enumerate() {
            for b in &pool[i..] {
                if !same_lattice(a, b) {
                    continue;
                }
                let Some((w, placed)) = embed_wedge(&a.image, &b.image) else {
                    continue;
                };
                let ok = [&a.image, &placed].into_iter().all(|kept| wedge_collapse_retracts(&w, kept));
                r.instances.push(instance(
                    format!("{} v {}", a.name, b.name),
                    if ok { Status::Pass } else { Status::Fail },
                    format!("{} points", w.image.len()),
                ));
            }
        }
        r
    }
}

/// Map-space search from the identity of `x` for a map that is not onto.
pub fn curve_deformation(x: &DigitalImage, budget: SearchBudget) -> crate::homotopy::HomotopySearch {
    let n = x.len();
    search_component(&ImageMap::identity(x), budget, move |a| {
        let mut hit = vec![false; n];
        a.iter().for_each(|&t| hit[t] = true);
        hit.contains(&false)
    })
    .expect("identity is continuous")
}

/// The collapse of `w` onto `kept` is continuous, fixes exactly `kept`, and
/// is idempotent.
pub fn wedge_collapse_retracts(w: &Wedge, kept: &DigitalImage) -> bool {
    let x = &w.image;
    let assignment: Vec<usize> = (0..x.len())
        .map(|i| if kept.contains(x.point(i)) { i } else { w.wedge_point })
        .collect();
    let Ok(r) = ImageMap::on(x, assignment) else {
        return false;
    };
    let fixed: Vec<&Point> = r.fixed_points().iter().map(|&i| x.point(i)).collect();
    let expected: Vec<&Point> = kept.points().iter().collect();
    let idempotent = ImageMap::compose(&r, &r).map(|rr| rr == r).unwrap_or(false);
    r.is_continuous() && fixed == expected && idempotent
}

/// Builds the corpus and runs every claim.
pub fn verify_theorems(options: SuiteOptions) -> Result<SuiteReport> {
    let corpus = Corpus::generate(options.discovery_extent, options.budget)?;
    Ok(run_claims(&corpus, options))
}

pub fn run_claims(corpus: &Corpus, options: SuiteOptions) -> SuiteReport {
    let mut c = Checker::new(corpus, options.budget);
    let claims = vec![
        c.rigid_products_have_rigid_factors(),
        c.reducible_factor_makes_product_reducible(),
        c.irreducible_products_have_irreducible_factors(),
        c.rigid_wedges_are_rigid(),
        c.irreducible_wedges_are_irreducible(),
        c.long_curves_irreducible_not_rigid(),
        c.rigid_wedge_long_curve_is_rigid(),
        c.rigid_freezing_iff_cold(options.seed, options.sampled_subsets),
        c.one_map_rigidity_matches_map_space(10),
        c.curve_homotopies_keep_image(4..=8),
        c.rigid_implies_irreducible(),
        c.boundary_is_freezing(),
        c.wedge_collapse_is_retraction(),
    ];
    SuiteReport {
        seed: options.seed,
        discoveries: corpus.discoveries.iter().map(DiscoverySummary::from).collect(),
        claims,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::interval;
    use crate::corpus::{product_entry, ring8};
    use crate::wedge;

    #[test]
    fn collapse_of_two_rings() {
        let w = wedge(&ring8(0, 0, 1), &ring8(2, 2, 1)).unwrap();
        assert!(wedge_collapse_retracts(&w, &ring8(0, 0, 1)));
        assert!(wedge_collapse_retracts(&w, &ring8(2, 2, 1)));
    }

    #[test]
    fn square_deforms_and_ring_does_not() {
        let b = SearchBudget::default();
        let sq = crate::digital_box(&[(0, 1), (0, 1)], 1).unwrap();
        let out = curve_deformation(&sq, b);
        assert_eq!(out.verdict, Verdict::True);
        assert!(out.homotopy.unwrap().max_step_displacement().steps().unwrap() <= 1);
        let ring = curve_deformation(&ring8(0, 0, 1), b);
        assert_eq!(ring.verdict, Verdict::False);
        assert_eq!(ring.component_size, 8);
    }

    #[test]
    fn ring_times_interval_is_reducible() {
        let corpus = Corpus {
            discoveries: Vec::new(),
            base: Vec::new(),
            products: Vec::new(),
        };
        let mut c = Checker::new(&corpus, SearchBudget::default());
        let ring = CorpusEntry {
            name: "ring".into(),
            image: ring8(0, 0, 1),
            kind: EntryKind::Curve,
            factors: Vec::new(),
        };
        let unit = CorpusEntry {
            name: "unit".into(),
            image: interval(0, 1).unwrap(),
            kind: EntryKind::Interval,
            factors: Vec::new(),
        };
        let p = product_entry(&[&ring, &unit]).unwrap();
        assert_eq!(p.image.len(), 16);
        assert_eq!(c.reducible(&p.name, &p.image), Verdict::True);
    }
}
