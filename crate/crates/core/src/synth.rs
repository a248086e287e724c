//! Fixture validity, minimal synthesis and exhaustive enumeration.
//!
//! A fixture on palm facet `i` is a set of fingers `(j, ℓ)` with body `j`
//! adjacent to the palm and tip `ℓ` adjacent to the body. It is valid when the
//! blocking hemispheres of palm, bodies and tips cover the sphere (C1) while
//! those of palm and bodies alone leave a serving direction (C2).
//!
//! Bodies within one fixture are pairwise distinct; tips may repeat and may sit
//! on another finger's body facet.

use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::cover::{self, CoverTolerance, Direction};
use crate::geom::{self, Vec3};
use crate::mesh::Polyhedron;
use crate::solid::{self, ExtrusionParams, SolidError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Finger {
    pub body: usize,
    pub tip: usize,
}

/// A palm facet plus fingers, kept sorted by `(body, tip)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixture {
    pub palm: usize,
    pub fingers: Vec<Finger>,
}

impl Fixture {
    pub fn new(palm: usize, fingers: impl IntoIterator<Item = Finger>) -> Self {
        let mut fingers: Vec<Finger> = fingers.into_iter().collect();
        fingers.sort_unstable();
        Fixture { palm, fingers }
    }

    pub fn finger_count(&self) -> usize {
        self.fingers.len()
    }

    pub fn bodies(&self) -> Vec<usize> {
        self.fingers.iter().map(|f| f.body).collect()
    }

    pub fn tips(&self) -> Vec<usize> {
        self.fingers.iter().map(|f| f.tip).collect()
    }

    /// Palm and body facets, ascending and without repeats.
    pub fn pb_facets(&self) -> Vec<usize> {
        let mut v = self.bodies();
        v.push(self.palm);
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Palm, body and tip facets, ascending and without repeats.
    pub fn pbt_facets(&self) -> Vec<usize> {
        let mut v = self.pb_facets();
        v.extend(self.tips());
        v.sort_unstable();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SynthError {
    #[error("facet {0} does not exist")]
    UnknownFacet(usize),
    #[error("a fixture has at most four fingers, got {0}")]
    TooManyFingers(usize),
    #[error("facets {0} and {1} are not neighbors")]
    NotNeighbor(usize, usize),
    #[error("fingertip on the palm facet {0}")]
    TipOnPalm(usize),
    #[error("body facet {0} is used by two fingers")]
    DuplicateBody(usize),
    #[error("fixture is not valid")]
    NotValid,
    #[error(transparent)]
    Solid(#[from] SolidError),
}

/// Candidate fingers per palm facet, each list ordered by `(body, tip)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateMap {
    lists: Vec<Vec<Finger>>,
}

impl CandidateMap {
    pub fn get(&self, palm: usize) -> &[Finger] {
        &self.lists[palm]
    }

    pub fn palm_count(&self) -> usize {
        self.lists.len()
    }

    pub fn total(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }
}

pub fn build_candidate_map(p: &Polyhedron) -> CandidateMap {
    let lists = (0..p.facet_count())
        .map(|i| {
            let mut m = Vec::new();
            for &j in p.neighbors(i) {
                for &l in p.neighbors(j) {
                    if l != i {
                        m.push(Finger { body: j, tip: l });
                    }
                }
            }
            m
        })
        .collect();
    CandidateMap { lists }
}

/// Checks the structural invariants of a fixture on `p`.
pub fn check_structure(p: &Polyhedron, f: &Fixture) -> Result<(), SynthError> {
    let n = p.facet_count();
    if f.palm >= n {
        return Err(SynthError::UnknownFacet(f.palm));
    }
    if f.fingers.len() > 4 {
        return Err(SynthError::TooManyFingers(f.fingers.len()));
    }
    for (k, g) in f.fingers.iter().enumerate() {
        for id in [g.body, g.tip] {
            if id >= n {
                return Err(SynthError::UnknownFacet(id));
            }
        }
        if !p.are_neighbors(f.palm, g.body) {
            return Err(SynthError::NotNeighbor(f.palm, g.body));
        }
        if !p.are_neighbors(g.body, g.tip) {
            return Err(SynthError::NotNeighbor(g.body, g.tip));
        }
        if g.tip == f.palm {
            return Err(SynthError::TipOnPalm(f.palm));
        }
        if f.fingers[..k].iter().any(|h| h.body == g.body) {
            return Err(SynthError::DuplicateBody(g.body));
        }
    }
    Ok(())
}

fn normals_of(p: &Polyhedron, ids: &[usize]) -> Vec<Vec3> {
    ids.iter().map(|&i| p.facets()[i].normal).collect()
}

/// C1 and C2 on raw normals: the serving direction when valid.
fn check_normals(pb: &[Vec3], tips: &[Vec3], tol: CoverTolerance) -> Option<Vec3> {
    let serving = cover::uncovered_direction(pb, tol.cover)?;
    if pb.len() + tips.len() < 4 {
        return None;
    }
    let mut all = Vec::with_capacity(pb.len() + tips.len());
    all.extend_from_slice(pb);
    all.extend_from_slice(tips);
    if cover::uncovered_direction(&all, tol.cover).is_some() {
        return None;
    }
    Some(serving)
}

/// Whether `f` satisfies C1 and C2. Structural violations are errors.
pub fn valid_fixture(p: &Polyhedron, f: &Fixture, tol: CoverTolerance) -> Result<bool, SynthError> {
    check_structure(p, f)?;
    Ok(check_normals(&normals_of(p, &f.pb_facets()), &normals_of(p, &f.tips()), tol).is_some())
}

/// A translation direction blocked by neither palm nor bodies.
pub fn serving_direction(p: &Polyhedron, f: &Fixture, tol: CoverTolerance) -> Result<Direction, SynthError> {
    check_structure(p, f)?;
    let d = check_normals(&normals_of(p, &f.pb_facets()), &normals_of(p, &f.tips()), tol).ok_or(SynthError::NotValid)?;
    Direction::new(d).ok_or(SynthError::NotValid)
}

/// Counters gathered during synthesis.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SynthStats {
    /// Palm visits summed over the 2-, 3- and 4-finger scans.
    pub palms_scanned: usize,
    /// Validity tests in the 2-, 3- and 4-finger scans.
    pub valid_calls: [u64; 3],
    /// Filled in by drivers that measure time.
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SynthesisResult {
    pub fixture: Option<Fixture>,
    pub serving_direction: Option<Direction>,
    pub stats: SynthStats,
}

/// Visits the valid fixtures on `palm` with exactly `k` fingers in
/// lexicographic order of their finger lists.
pub fn for_each_palm_fixture(
    p: &Polyhedron,
    map: &CandidateMap,
    palm: usize,
    k: usize,
    tol: CoverTolerance,
    calls: &mut u64,
    visit: &mut dyn FnMut(Fixture, Vec3) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let cands = map.get(palm);
    let normal = |i: usize| p.facets()[i].normal;
    search_palm(normal(palm), cands, &normal, k, tol, calls, &mut |fingers, d| visit(Fixture::new(palm, fingers.iter().copied()), d))
}

/// Abstract core of [`for_each_palm_fixture`] over a normal lookup.
pub fn search_palm(
    palm_normal: Vec3,
    cands: &[Finger],
    normal: &dyn Fn(usize) -> Vec3,
    k: usize,
    tol: CoverTolerance,
    calls: &mut u64,
    visit: &mut dyn FnMut(&[Finger], Vec3) -> ControlFlow<()>,
) -> ControlFlow<()> {
    // Index of the first candidate with a larger body, so bodies stay distinct.
    let mut next_body = alloc::vec![cands.len(); cands.len()];
    for c in (0..cands.len()).rev() {
        next_body[c] = if c + 1 < cands.len() && cands[c + 1].body == cands[c].body { next_body[c + 1] } else { c + 1 };
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut pb = Vec::with_capacity(k + 1);
    let mut tips = Vec::with_capacity(k);
    let mut fingers = Vec::with_capacity(k);
    fn rec(
        start: usize,
        k: usize,
        cands: &[Finger],
        next_body: &[usize],
        palm_normal: Vec3,
        normal: &dyn Fn(usize) -> Vec3,
        tol: CoverTolerance,
        calls: &mut u64,
        chosen: &mut Vec<usize>,
        pb: &mut Vec<Vec3>,
        tips: &mut Vec<Vec3>,
        fingers: &mut Vec<Finger>,
        visit: &mut dyn FnMut(&[Finger], Vec3) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if chosen.len() == k {
            pb.clear();
            tips.clear();
            fingers.clear();
            pb.push(palm_normal);
            for &c in chosen.iter() {
                pb.push(normal(cands[c].body));
                tips.push(normal(cands[c].tip));
                fingers.push(cands[c]);
            }
            *calls += 1;
            if let Some(d) = check_normals(pb, tips, tol) {
                return visit(fingers, d);
            }
            return ControlFlow::Continue(());
        }
        let mut c = start;
        while c < cands.len() {
            chosen.push(c);
            rec(next_body[c], k, cands, next_body, palm_normal, normal, tol, calls, chosen, pb, tips, fingers, visit)?;
            chosen.pop();
            c += 1;
        }
        ControlFlow::Continue(())
    }
    rec(0, k, cands, &next_body, palm_normal, normal, tol, calls, &mut chosen, &mut pb, &mut tips, &mut fingers, visit)
}

/// First valid `k`-finger fixture on `palm`, in lexicographic finger order.
pub fn first_palm_fixture(
    p: &Polyhedron,
    map: &CandidateMap,
    palm: usize,
    k: usize,
    tol: CoverTolerance,
    calls: &mut u64,
) -> Option<(Fixture, Vec3)> {
    let mut found = None;
    let _ = for_each_palm_fixture(p, map, palm, k, tol, calls, &mut |f, d| {
        found = Some((f, d));
        ControlFlow::Break(())
    });
    found
}

/// Number of valid `k`-finger fixtures on `palm`.
pub fn count_palm_fixtures(p: &Polyhedron, map: &CandidateMap, palm: usize, k: usize, tol: CoverTolerance) -> u64 {
    let mut n = 0;
    let mut calls = 0;
    let _ = for_each_palm_fixture(p, map, palm, k, tol, &mut calls, &mut |_, _| {
        n += 1;
        ControlFlow::Continue(())
    });
    n
}

/// All valid `k`-finger fixtures on `palm`.
pub fn palm_fixtures(p: &Polyhedron, map: &CandidateMap, palm: usize, k: usize, tol: CoverTolerance) -> Vec<Fixture> {
    let mut out = Vec::new();
    let mut calls = 0;
    let _ = for_each_palm_fixture(p, map, palm, k, tol, &mut calls, &mut |f, _| {
        out.push(f);
        ControlFlow::Continue(())
    });
    out
}

/// Four-finger search on one palm by equivalence classes of hemispheres that
/// meet the boundary circle of the palm's complement in the same semicircle.
///
/// Each candidate facet `c` (body or tip of some candidate finger) whose normal
/// is not parallel to the palm normal `n_p` meets that circle in the semicircle
/// with midpoint `normalize(n_c − (n_c · n_p) n_p)`. Within a class the maximal
/// hemisphere is the one with the most negative `n_c · n_p`. The search looks
/// for two classes with antipodal semicircles and two more classes so that the
/// four semicircles cover the circle, then realizes each class maximum by a
/// finger (as its body or its tip) and tests validity.
pub fn four_fingers_search(
    palm_normal: Vec3,
    cands: &[Finger],
    normal: &dyn Fn(usize) -> Vec3,
    tol: CoverTolerance,
    calls: &mut u64,
) -> Option<(Vec<Finger>, Vec3)> {
    let np = palm_normal.normalized();
    let mut facets: Vec<usize> = cands.iter().flat_map(|f| [f.body, f.tip]).collect();
    facets.sort_unstable();
    facets.dedup();

    struct Class {
        mid: Vec3,
        best: usize,
        depth: f64,
    }
    let mut classes: Vec<Class> = Vec::new();
    for &c in &facets {
        let n = normal(c);
        let along = n.dot(np);
        let Some(mid) = (n - np * along).try_normalize(tol.anti) else { continue };
        match classes.iter_mut().find(|k| (k.mid - mid).norm() <= tol.anti) {
            Some(k) => {
                if along < k.depth - tol.anti {
                    k.best = c;
                    k.depth = along;
                }
            }
            None => classes.push(Class { mid, best: c, depth: along }),
        }
    }

    let circle = Direction::new(np)?;
    let semis: Vec<cover::Semicircle> = classes
        .iter()
        .map(|k| cover::Semicircle { circle_normal: circle, mid: Direction::new(k.mid).expect("unit") })
        .collect();
    let options: Vec<Vec<Finger>> = classes
        .iter()
        .map(|k| cands.iter().copied().filter(|f| f.body == k.best || f.tip == k.best).collect())
        .collect();

    let m = classes.len();
    for e1 in 0..m {
        for e2 in e1 + 1..m {
            if !cover::antipodal(&semis[e1], &semis[e2], tol) {
                continue;
            }
            for e3 in 0..m {
                if e3 == e1 || e3 == e2 {
                    continue;
                }
                for e4 in e3 + 1..m {
                    if e4 == e1 || e4 == e2 {
                        continue;
                    }
                    let quad = [semis[e1], semis[e2], semis[e3], semis[e4]];
                    if !cover::covers_circle(&quad, tol).map(|w| w.covered).unwrap_or(false) {
                        continue;
                    }
                    if let Some(found) = realize(np, [e1, e2, e3, e4].map(|e| &options[e][..]), normal, tol, calls) {
                        return Some(found);
                    }
                }
            }
        }
    }
    None
}

fn realize(
    np: Vec3,
    options: [&[Finger]; 4],
    normal: &dyn Fn(usize) -> Vec3,
    tol: CoverTolerance,
    calls: &mut u64,
) -> Option<(Vec<Finger>, Vec3)> {
    for &a in options[0] {
        for &b in options[1] {
            for &c in options[2] {
                for &d in options[3] {
                    let mut fs = [a, b, c, d];
                    fs.sort_unstable();
                    if fs.windows(2).any(|w| w[0].body == w[1].body) {
                        continue;
                    }
                    let mut pb = alloc::vec![np];
                    pb.extend(fs.iter().map(|f| normal(f.body)));
                    let tips: Vec<Vec3> = fs.iter().map(|f| normal(f.tip)).collect();
                    *calls += 1;
                    if let Some(s) = check_normals(&pb, &tips, tol) {
                        return Some((fs.to_vec(), s));
                    }
                }
            }
        }
    }
    None
}

/// The four-finger class search on one palm.
pub fn four_fingers_fixture(
    p: &Polyhedron,
    map: &CandidateMap,
    palm: usize,
    tol: CoverTolerance,
    calls: &mut u64,
) -> Option<(Fixture, Vec3)> {
    let normal = |i: usize| p.facets()[i].normal;
    four_fingers_search(normal(palm), map.get(palm), &normal, tol, calls).map(|(fs, d)| (Fixture::new(palm, fs), d))
}

/// Runs one subphase (`k = 2, 3` by subsets, `k = 4` by class search) on one palm.
pub fn subphase_on_palm(
    p: &Polyhedron,
    map: &CandidateMap,
    palm: usize,
    k: usize,
    tol: CoverTolerance,
    calls: &mut u64,
) -> Option<(Fixture, Vec3)> {
    if k == 4 {
        four_fingers_fixture(p, map, palm, tol, calls)
    } else {
        first_palm_fixture(p, map, palm, k, tol, calls)
    }
}

/// A fixture with the fewest fingers: 2-finger scan, then 3-finger scan, then
/// the four-finger class search, each over all palms in id order.
pub fn minimal_snapping_fixture(p: &Polyhedron, tol: CoverTolerance) -> SynthesisResult {
    let map = build_candidate_map(p);
    let mut stats = SynthStats::default();
    for (phase, k) in [2usize, 3, 4].into_iter().enumerate() {
        for palm in 0..p.facet_count() {
            stats.palms_scanned += 1;
            if let Some((f, d)) = subphase_on_palm(p, &map, palm, k, tol, &mut stats.valid_calls[phase]) {
                return SynthesisResult { fixture: Some(f), serving_direction: Direction::new(d), stats };
            }
        }
    }
    SynthesisResult { fixture: None, serving_direction: None, stats }
}

/// Lazy stream of every valid fixture with at most `max_fingers` fingers,
/// ordered by palm, then finger count, then finger list.
pub struct FixtureStream<'a> {
    p: &'a Polyhedron,
    map: CandidateMap,
    tol: CoverTolerance,
    max_fingers: usize,
    palm: usize,
    k: usize,
    buf: VecDeque<Fixture>,
}

impl Iterator for FixtureStream<'_> {
    type Item = Fixture;

    fn next(&mut self) -> Option<Fixture> {
        loop {
            if let Some(f) = self.buf.pop_front() {
                return Some(f);
            }
            if self.palm >= self.p.facet_count() {
                return None;
            }
            self.buf.extend(palm_fixtures(self.p, &self.map, self.palm, self.k, self.tol));
            if self.k < self.max_fingers {
                self.k += 1;
            } else {
                self.k = 1;
                self.palm += 1;
            }
        }
    }
}

pub fn enumerate_fixtures(p: &Polyhedron, max_fingers: usize, tol: CoverTolerance) -> FixtureStream<'_> {
    FixtureStream {
        p,
        map: build_candidate_map(p),
        tol,
        max_fingers: max_fingers.min(4),
        palm: 0,
        k: 1,
        buf: VecDeque::new(),
    }
}

/// Smallest finger count with a valid fixture (up to `max_fingers`) and the
/// number of fixtures with that count.
pub fn minimal_fixture_count(p: &Polyhedron, max_fingers: usize, tol: CoverTolerance) -> Option<(usize, u64)> {
    let map = build_candidate_map(p);
    for k in 1..=max_fingers.min(4) {
        let n: u64 = (0..p.facet_count()).map(|palm| count_palm_fixtures(p, &map, palm, k, tol)).sum();
        if n > 0 {
            return Some((k, n));
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    Fingers,
    Weight,
    Obscuration,
}

impl core::str::FromStr for Objective {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fingers" => Ok(Objective::Fingers),
            "weight" => Ok(Objective::Weight),
            "obscuration" => Ok(Objective::Obscuration),
            _ => Err("expected fingers, weight or obscuration"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QualityMetrics {
    pub finger_count: usize,
    /// Extruded volume of the nominal parts, mm³.
    pub weight_proxy: f64,
    /// Contacted workpiece surface, mm².
    pub obscuration_proxy: f64,
}

impl QualityMetrics {
    pub fn value(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Fingers => self.finger_count as f64,
            Objective::Weight => self.weight_proxy,
            Objective::Obscuration => self.obscuration_proxy,
        }
    }
}

/// Weight and obscuration proxies from the palm facet, the full body facets
/// and the fingertip quadrilaterals.
pub fn quality_of(p: &Polyhedron, f: &Fixture, params: &ExtrusionParams) -> Result<QualityMetrics, SynthError> {
    check_structure(p, f)?;
    let palm = p.facets()[f.palm].area;
    let mut weight = params.alpha_p * palm;
    let mut contact = palm;
    for &g in &f.fingers {
        let body = p.facets()[g.body].area;
        let tip = solid::tip_base(p, g, params)?;
        let tip = if tip.len() >= 3 { geom::polygon_area(&tip) } else { 0.0 };
        weight += params.alpha_b * body + params.alpha_t * tip;
        contact += body + tip;
    }
    Ok(QualityMetrics { finger_count: f.fingers.len(), weight_proxy: weight, obscuration_proxy: contact })
}

/// Among fixtures with the fewest fingers, one minimizing `objective`; ties go
/// to the earlier fixture in stream order.
pub fn best_fixture(
    p: &Polyhedron,
    objective: Objective,
    params: &ExtrusionParams,
    tol: CoverTolerance,
) -> Result<Option<(Fixture, QualityMetrics)>, SynthError> {
    let map = build_candidate_map(p);
    for k in 2..=4 {
        let mut best: Option<(Fixture, QualityMetrics)> = None;
        let mut err = None;
        let mut calls = 0;
        for palm in 0..p.facet_count() {
            let _ = for_each_palm_fixture(p, &map, palm, k, tol, &mut calls, &mut |f, _| {
                match quality_of(p, &f, params) {
                    Ok(q) => {
                        if best.as_ref().map_or(true, |(_, b)| q.value(objective) < b.value(objective)) {
                            best = Some((f, q));
                        }
                        if objective == Objective::Fingers {
                            return ControlFlow::Break(());
                        }
                        ControlFlow::Continue(())
                    }
                    Err(e) => {
                        err = Some(e);
                        ControlFlow::Break(())
                    }
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            if objective == Objective::Fingers && best.is_some() {
                break;
            }
        }
        if best.is_some() {
            return Ok(best);
        }
    }
    Ok(None)
}
