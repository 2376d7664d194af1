//! Cayley-ball exploration and the measurements built on it: subgroup
//! distortion series, divergence estimates, log-log exponent fits and the
//! quotient-metric check for labeling kernels.
//!
//! Every search is breadth-first in generator order, so results are
//! deterministic. Budgets count stored elements, never time.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use indexmap::map::Entry;
use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{SimplicialGraph, VertexLabeling};
use crate::raag::{image_of_letters, RaagOracle};
use crate::series::SeriesPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("element budget of {budget} exhausted at radius {radius} (frontier of {frontier} elements)")]
    BudgetExceeded { budget: usize, radius: u32, frontier: usize },
    #[error("horizon {requested} not reachable within the budget; the ball is complete only to radius {reachable}")]
    Horizon { requested: u32, reachable: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("subgroup generator `{0}` fails the membership test")]
    GeneratorNotInSubgroup(String),
    #[error("need at least 3 usable points in the window, found {0}")]
    TooFewPoints(usize),
}

/// A group presented to the search engine through a finite symmetric
/// generating set.
///
/// Elements must be canonical: two elements compare equal iff they
/// represent the same group element, so the element doubles as its own
/// hash key.
pub trait GroupOracle {
    type Element: Clone + Eq + Hash;

    fn identity(&self) -> Self::Element;
    /// Number of generators, inverses included.
    fn generator_count(&self) -> usize;
    fn generator_label(&self, i: usize) -> String;
    fn generator(&self, i: usize) -> Self::Element;
    fn compose(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    /// `a` times generator `i`.
    fn step(&self, a: &Self::Element, i: usize) -> Self::Element {
        self.compose(a, &self.generator(i))
    }

    /// Exact word length, when the oracle knows it without searching.
    fn exact_length(&self, _x: &Self::Element) -> Option<u32> {
        None
    }

    /// Automorphisms that fix the identity and permute the generating set.
    fn symmetry_count(&self) -> usize {
        0
    }

    fn apply_symmetry(&self, _k: usize, x: &Self::Element) -> Self::Element {
        x.clone()
    }

    fn generator_labels(&self) -> Vec<String> {
        (0..self.generator_count()).map(|i| self.generator_label(i)).collect()
    }
}

/// Elements within some radius of the identity with their exact distances,
/// in breadth-first discovery order.
#[derive(Debug, Clone)]
pub struct Ball<E: Hash + Eq> {
    elements: IndexMap<E, u32>,
    layer_ends: Vec<usize>,
    complete_radius: u32,
    truncated: bool,
    frontier: usize,
}

impl<E: Hash + Eq> Ball<E> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn length_of(&self, x: &E) -> Option<u32> {
        self.elements.get(x).copied()
    }

    pub fn index_of(&self, x: &E) -> Option<usize> {
        self.elements.get_index_of(x)
    }

    pub fn get(&self, i: usize) -> (&E, u32) {
        let (e, &l) = self.elements.get_index(i).expect("index in range");
        (e, l)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&E, u32)> {
        self.elements.iter().map(|(e, &l)| (e, l))
    }

    /// Largest radius whose layer is fully enumerated.
    pub fn complete_radius(&self) -> u32 {
        self.complete_radius
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Number of elements of length at most `r`, for `r <= complete_radius`.
    pub fn count_within(&self, r: u32) -> usize {
        self.layer_ends[r as usize]
    }

    pub fn into_map(self) -> IndexMap<E, u32> {
        self.elements
    }
}

/// Breadth-first enumeration up to `radius`, stopping cleanly when
/// `budget` elements are stored.
pub fn explore<G: GroupOracle>(g: &G, radius: u32, budget: usize) -> Ball<G::Element> {
    let mut elements = IndexMap::new();
    elements.insert(g.identity(), 0u32);
    let mut layer_ends = vec![1];
    let mut start = 0;
    for r in 0..radius {
        let end = elements.len();
        for idx in start..end {
            let x = elements.get_index(idx).expect("in range").0.clone();
            for i in 0..g.generator_count() {
                let y = g.step(&x, i);
                let full = elements.len() >= budget;
                if let Entry::Vacant(slot) = elements.entry(y) {
                    if full {
                        return Ball { elements, layer_ends, complete_radius: r, truncated: true, frontier: end - start };
                    }
                    slot.insert(r + 1);
                }
            }
        }
        layer_ends.push(elements.len());
        start = end;
    }
    Ball { elements, layer_ends, complete_radius: radius, truncated: false, frontier: 0 }
}

/// The full ball of `radius`, or a budget error naming the frontier size.
pub fn ball<G: GroupOracle>(g: &G, radius: u32, budget: usize) -> Result<Ball<G::Element>, MetricError> {
    let b = explore(g, radius, budget);
    if b.truncated {
        Err(MetricError::BudgetExceeded { budget, radius: b.complete_radius + 1, frontier: b.frontier })
    } else {
        Ok(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistortionPoint {
    pub r: u32,
    pub value: u64,
    /// `false` when some subgroup element in the ball kept an unresolved
    /// length; `value` is then a lower bound.
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistortionSeries {
    pub points: Vec<DistortionPoint>,
    pub s_labels: Vec<String>,
    pub t_labels: Vec<String>,
    pub ambient_ball_size: usize,
    pub ambient_complete_radius: u32,
    pub subgroup_ball_size: usize,
    pub subgroup_complete_radius: u32,
    pub targets: usize,
    pub unresolved: usize,
}

impl DistortionSeries {
    pub fn value(&self, r: u32) -> Option<u64> {
        self.points.iter().find(|p| p.r == r).map(|p| p.value)
    }

    pub fn all_exact(&self) -> bool {
        self.points.iter().all(|p| p.exact)
    }

    pub fn to_points(&self) -> Vec<SeriesPoint> {
        self.points
            .iter()
            .map(|p| SeriesPoint { r: p.r, value: p.value as f64, exact: p.exact })
            .collect()
    }
}

/// Distortion of the subgroup generated by `h` inside `g`.
///
/// Subgroup elements of the ambient ball are the targets; their subgroup
/// lengths come from `h.exact_length` when available and otherwise from one
/// shared breadth-first search of the subgroup Cayley graph.
pub fn distortion_series<G, H, M>(
    g: &G,
    membership: M,
    h: &H,
    r_max: u32,
    budget: usize,
) -> Result<DistortionSeries, MetricError>
where
    G: GroupOracle,
    H: GroupOracle<Element = G::Element>,
    M: Fn(&G::Element) -> bool,
{
    for i in 0..h.generator_count() {
        if !membership(&h.generator(i)) {
            return Err(MetricError::GeneratorNotInSubgroup(h.generator_label(i)));
        }
    }
    let sball = explore(g, r_max, budget);
    let ambient_ball_size = sball.len();
    let ambient_complete_radius = sball.complete_radius();

    let mut target_index: HashMap<G::Element, usize> = HashMap::new();
    let mut s_len = Vec::new();
    let mut t_len: Vec<Option<u32>> = Vec::new();
    for (x, len) in sball.into_map() {
        if membership(&x) {
            t_len.push(h.exact_length(&x));
            s_len.push(len);
            target_index.insert(x, s_len.len() - 1);
        }
    }
    let mut unresolved = t_len.iter().filter(|t| t.is_none()).count();

    let mut subgroup_ball_size = 0;
    let mut subgroup_complete_radius = u32::MAX;
    if unresolved > 0 {
        let mut seen: IndexMap<G::Element, ()> = IndexMap::new();
        let id = h.identity();
        if let Some(&k) = target_index.get(&id) {
            if t_len[k].is_none() {
                t_len[k] = Some(0);
                unresolved -= 1;
            }
        }
        seen.insert(id, ());
        let mut start = 0;
        let mut radius = 0u32;
        'layers: while unresolved > 0 {
            let end = seen.len();
            if start == end {
                break;
            }
            for idx in start..end {
                let x = seen.get_index(idx).expect("in range").0.clone();
                for i in 0..h.generator_count() {
                    let y = h.step(&x, i);
                    let full = seen.len() >= budget;
                    if let Entry::Vacant(slot) = seen.entry(y) {
                        if full {
                            break 'layers;
                        }
                        if let Some(&k) = target_index.get(slot.key()) {
                            if t_len[k].is_none() {
                                t_len[k] = Some(radius + 1);
                                unresolved -= 1;
                            }
                        }
                        slot.insert(());
                    }
                }
            }
            radius += 1;
            start = end;
        }
        subgroup_ball_size = seen.len();
        subgroup_complete_radius = radius;
    }

    let unresolved_floor = subgroup_complete_radius.saturating_add(1);
    let mut order: Vec<usize> = (0..s_len.len()).collect();
    order.sort_by_key(|&k| s_len[k]);
    let mut points = Vec::with_capacity(r_max as usize + 1);
    let (mut best, mut all_resolved, mut cursor) = (0u64, true, 0);
    for r in 0..=r_max {
        while cursor < order.len() && s_len[order[cursor]] <= r {
            let k = order[cursor];
            match t_len[k] {
                Some(t) => best = best.max(t as u64),
                None => {
                    all_resolved = false;
                    best = best.max(unresolved_floor as u64);
                }
            }
            cursor += 1;
        }
        points.push(DistortionPoint { r, value: best, exact: all_resolved && r <= ambient_complete_radius });
    }

    Ok(DistortionSeries {
        points,
        s_labels: g.generator_labels(),
        t_labels: h.generator_labels(),
        ambient_ball_size,
        ambient_complete_radius,
        subgroup_ball_size,
        subgroup_complete_radius: if subgroup_complete_radius == u32::MAX { 0 } else { subgroup_complete_radius },
        targets: s_len.len(),
        unresolved,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum DivergenceValue {
    Finite(u64),
    /// Some sphere pair is certifiably disconnected outside the inner ball.
    Infinite,
    /// Some sphere pair is disconnected inside the explored region without a
    /// certificate; `lower` is the largest finite distance seen.
    Inconclusive { lower: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceEstimate {
    pub r: u32,
    pub rho: f64,
    /// Elements of length below this value are removed.
    pub inner_radius: u32,
    pub horizon: u32,
    pub value: DivergenceValue,
    pub max_finite: u64,
    /// Finite values are exact when no detour could leave the horizon more
    /// cheaply; `Infinite` is always certified.
    pub exact: bool,
    pub sphere_size: usize,
    pub orbit_count: usize,
    pub region_size: usize,
    pub tree_certificate: bool,
}

impl DivergenceEstimate {
    pub fn to_point(&self) -> SeriesPoint {
        match self.value {
            DivergenceValue::Finite(v) => SeriesPoint { r: self.r, value: v as f64, exact: self.exact },
            DivergenceValue::Infinite => SeriesPoint { r: self.r, value: f64::INFINITY, exact: true },
            DivergenceValue::Inconclusive { lower } => SeriesPoint { r: self.r, value: lower as f64, exact: false },
        }
    }
}

/// `⌈ρr⌉`, the discretized radius of the removed open ball.
pub fn inner_radius(r: u32, rho: f64) -> u32 {
    let x = rho * r as f64;
    // guard against 0.5 * 4 landing a hair above 2
    let rounded = x.round();
    if (x - rounded).abs() < 1e-9 {
        rounded as u32
    } else {
        x.ceil() as u32
    }
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// A complete ball with its Cayley-graph adjacency, shared by divergence
/// estimates at several radii.
struct Region<E: Clone + Eq + Hash> {
    explored: Ball<E>,
    horizon: u32,
    lengths: Vec<u32>,
    offsets: Vec<usize>,
    adjacency: Vec<u32>,
}

impl<E: Clone + Eq + Hash> Region<E> {
    fn build<G: GroupOracle<Element = E>>(g: &G, explored: Ball<E>) -> Self {
        let horizon = explored.complete_radius();
        let n = explored.count_within(horizon);
        let gens = g.generator_count();
        let mut adjacency: Vec<u32> = Vec::with_capacity(n * gens);
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0usize);
        let mut lengths = Vec::with_capacity(n);
        for idx in 0..n {
            let (x, len) = explored.get(idx);
            lengths.push(len);
            for i in 0..gens {
                let y = g.step(x, i);
                if let Some(j) = explored.index_of(&y).filter(|&j| j < n) {
                    adjacency.push(j as u32);
                }
            }
            offsets.push(adjacency.len());
        }
        Region { explored, horizon, lengths, offsets, adjacency }
    }

    fn neighbours(&self, u: usize) -> &[u32] {
        &self.adjacency[self.offsets[u]..self.offsets[u + 1]]
    }
}

fn check_divergence_parameters(r: u32, rho: f64, horizon: Option<u32>) -> Result<(), MetricError> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(MetricError::InvalidParameter(format!("rho must lie in (0, 1], got {rho}")));
    }
    if r == 0 {
        return Err(MetricError::InvalidParameter("radius must be at least 1".into()));
    }
    if let Some(hz) = horizon {
        if hz < r {
            return Err(MetricError::InvalidParameter(format!("horizon {hz} is below the radius {r}")));
        }
    }
    Ok(())
}

/// Explores up to `cap` and checks that the complete part reaches `need`.
fn explore_region<G: GroupOracle>(
    g: &G,
    cap: u32,
    need: u32,
    fixed_horizon: bool,
    budget: usize,
) -> Result<Region<G::Element>, MetricError> {
    let explored = explore(g, cap, budget);
    let hz = explored.complete_radius();
    if explored.is_truncated() {
        if fixed_horizon {
            return Err(MetricError::Horizon { requested: cap, reachable: hz });
        }
        if hz < need {
            return Err(MetricError::BudgetExceeded { budget, radius: hz + 1, frontier: explored.frontier });
        }
    }
    Ok(Region::build(g, explored))
}

/// Divergence at radius `r`: the largest distance between two points of the
/// `r`-sphere measured in the complement of the open ball of radius `ρr`,
/// inside the ball of radius `horizon`.
///
/// Without an explicit horizon the search uses the largest complete radius
/// up to `2r + 2` that fits in `budget` (at least `r`).
pub fn divergence_estimate<G: GroupOracle>(
    g: &G,
    r: u32,
    rho: f64,
    horizon: Option<u32>,
    budget: usize,
) -> Result<DivergenceEstimate, MetricError> {
    check_divergence_parameters(r, rho, horizon)?;
    let region = explore_region(g, horizon.unwrap_or(2 * r + 2), r, horizon.is_some(), budget)?;
    Ok(estimate_in_region(g, &region, r, rho, region.horizon))
}

fn estimate_in_region<G: GroupOracle>(g: &G, region: &Region<G::Element>, r: u32, rho: f64, hz: u32) -> DivergenceEstimate {
    let explored = &region.explored;
    let lengths = &region.lengths;
    let n = explored.count_within(hz);
    let inner = inner_radius(r, rho);

    let edge_entries: usize = (0..n).map(|u| region.neighbours(u).iter().filter(|&&v| (v as usize) < n).count()).sum();
    let tree_certificate = edge_entries == 2 * (n - 1);

    let sphere_lo = explored.count_within(r - 1);
    let sphere_hi = explored.count_within(r);
    let sphere_size = sphere_hi - sphere_lo;

    let mut sets = DisjointSets((0..sphere_size).collect());
    for k in 0..g.symmetry_count() {
        for s in 0..sphere_size {
            let image = g.apply_symmetry(k, explored.get(sphere_lo + s).0);
            if let Some(j) = explored.index_of(&image) {
                if (sphere_lo..sphere_hi).contains(&j) {
                    sets.union(s, j - sphere_lo);
                }
            }
        }
    }
    let reps: Vec<usize> = (0..sphere_size).filter(|&s| sets.find(s) == s).collect();

    let mut dist = vec![u32::MAX; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut max_finite = 0u64;
    let mut certified_gap = false;
    let mut uncertified_gap = false;
    for &rep in &reps {
        let source = sphere_lo + rep;
        for &t in &touched {
            dist[t] = u32::MAX;
        }
        touched.clear();
        dist[source] = 0;
        touched.push(source);
        queue.push_back(source);
        let mut reached = 1;
        let mut touches_horizon = lengths[source] == hz;
        while let Some(u) = queue.pop_front() {
            if reached == sphere_size {
                break;
            }
            for &v in region.neighbours(u) {
                let v = v as usize;
                if v < n && dist[v] == u32::MAX && lengths[v] >= inner {
                    dist[v] = dist[u] + 1;
                    touched.push(v);
                    queue.push_back(v);
                    touches_horizon |= lengths[v] == hz;
                    if lengths[v] == r {
                        reached += 1;
                        max_finite = max_finite.max(dist[v] as u64);
                    }
                }
            }
        }
        queue.clear();
        if reached < sphere_size {
            if tree_certificate || !touches_horizon {
                certified_gap = true;
            } else {
                uncertified_gap = true;
            }
        }
    }

    let exact_limit = 2 * (hz as u64 + 1 - r as u64);
    let (value, exact) = if certified_gap {
        (DivergenceValue::Infinite, true)
    } else if uncertified_gap {
        (DivergenceValue::Inconclusive { lower: max_finite }, false)
    } else {
        (DivergenceValue::Finite(max_finite), max_finite <= exact_limit)
    };
    DivergenceEstimate {
        r,
        rho,
        inner_radius: inner,
        horizon: hz,
        value,
        max_finite,
        exact,
        sphere_size,
        orbit_count: reps.len(),
        region_size: n,
        tree_certificate,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceSeries {
    pub rho: f64,
    pub estimates: Vec<DivergenceEstimate>,
}

impl DivergenceSeries {
    pub fn to_points(&self) -> Vec<SeriesPoint> {
        self.estimates.iter().map(DivergenceEstimate::to_point).collect()
    }
}

/// Estimates at several radii from one exploration. Each radius uses the
/// same horizon rule as [`divergence_estimate`], so the values agree with
/// separate calls.
pub fn divergence_series<G: GroupOracle>(
    g: &G,
    radii: impl IntoIterator<Item = u32>,
    rho: f64,
    horizon: Option<u32>,
    budget: usize,
) -> Result<DivergenceSeries, MetricError> {
    let radii: Vec<u32> = radii.into_iter().collect();
    for &r in &radii {
        check_divergence_parameters(r, rho, horizon)?;
    }
    let (Some(&r_lo), Some(&r_hi)) = (radii.iter().min(), radii.iter().max()) else {
        return Ok(DivergenceSeries { rho, estimates: Vec::new() });
    };
    let cap = horizon.unwrap_or(2 * r_hi + 2);
    let region = explore_region(g, cap, r_lo, horizon.is_some(), budget)?;
    let mut estimates = Vec::with_capacity(radii.len());
    for r in radii {
        if region.horizon < r {
            let frontier = region.explored.frontier;
            return Err(MetricError::BudgetExceeded { budget, radius: region.horizon + 1, frontier });
        }
        let hz = horizon.unwrap_or(2 * r + 2).min(region.horizon);
        estimates.push(estimate_in_region(g, &region, r, rho, hz));
    }
    Ok(DivergenceSeries { rho, estimates })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub exponent: f64,
    pub coefficient: f64,
    pub r_squared: f64,
    pub window: (u32, u32),
    pub points: usize,
}

/// Least-squares line through `(ln r, ln value)` over the window. Points with
/// `r = 0`, non-positive or infinite values are skipped.
pub fn fit_exponent(series: &[SeriesPoint], window: (u32, u32)) -> Result<FitResult, MetricError> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(MetricError::InvalidParameter(format!("empty window {lo}:{hi}")));
    }
    let xy: Vec<(f64, f64)> = series
        .iter()
        .filter(|p| p.r >= lo && p.r <= hi && p.r > 0 && p.value.is_finite() && p.value > 0.0)
        .map(|p| ((p.r as f64).ln(), p.value.ln()))
        .collect();
    if xy.len() < 3 {
        return Err(MetricError::TooFewPoints(xy.len()));
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xy.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy <= f64::EPSILON { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(FitResult { exponent: slope, coefficient: intercept.exp(), r_squared, window, points: xy.len() })
}

/// The longest run of consecutive radii whose points are exact, finite and
/// positive; ties go to the run at larger radii.
pub fn largest_exact_window(series: &[SeriesPoint]) -> Option<(u32, u32)> {
    let mut best: Option<(u32, u32)> = None;
    let mut run: Option<(u32, u32)> = None;
    let mut sorted: Vec<&SeriesPoint> = series.iter().collect();
    sorted.sort_by_key(|p| p.r);
    for p in sorted {
        let good = p.exact && p.r > 0 && p.value.is_finite() && p.value > 0.0;
        run = match (good, run) {
            (true, Some((lo, hi))) if hi + 1 == p.r => Some((lo, p.r)),
            (true, _) => Some((p.r, p.r)),
            (false, _) => None,
        };
        if let Some((lo, hi)) = run {
            if best.is_none_or(|(blo, bhi)| hi - lo >= bhi - blo) {
                best = Some((lo, hi));
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DominationVerdict {
    Dominated,
    NotDominated,
    Inconclusive,
}

/// Heuristic comparison of growth rates through fitted exponents. Finite
/// data cannot decide asymptotic domination; this only reports whether the
/// fits are consistent with it.
pub fn dominated_by(f: &FitResult, g: &FitResult, tolerance: f64) -> DominationVerdict {
    if f.exponent <= g.exponent + tolerance {
        DominationVerdict::Dominated
    } else if f.r_squared >= 0.9 && g.r_squared >= 0.9 {
        DominationVerdict::NotDominated
    } else {
        DominationVerdict::Inconclusive
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientReport {
    pub radius: u32,
    pub checked: usize,
    pub fibres: usize,
    /// Elements whose fibre minimum is shorter than the quotient length.
    pub violations: Vec<String>,
    /// Fibres whose shortest member in the ball exceeds the quotient length.
    pub missing_lifts: Vec<String>,
}

impl QuotientReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.missing_lifts.is_empty()
    }
}

/// Compares coset distances in `A_Γ` with word lengths in `Z^d` under the
/// image generating set, over every element of the ball of `radius`.
pub fn quotient_metric_check(
    graph: &Arc<SimplicialGraph>,
    labeling: &VertexLabeling,
    radius: u32,
    budget: usize,
) -> Result<QuotientReport, MetricError> {
    if labeling.len() != graph.len() {
        return Err(MetricError::InvalidParameter("labeling does not match the graph".into()));
    }
    let oracle = RaagOracle::standard(graph);
    let b = ball(&oracle, radius, budget)?;

    // quotient word metric by breadth-first search in Z^d
    let d = labeling.dim() as usize;
    let mut steps: Vec<Vec<i64>> = Vec::new();
    for v in 0..graph.len() {
        let label = labeling.label(v) as usize;
        if label == 0 {
            continue;
        }
        for sign in [1, -1] {
            let mut e = vec![0i64; d];
            e[label - 1] = sign;
            if !steps.contains(&e) {
                steps.push(e);
            }
        }
    }
    let mut quotient: HashMap<Vec<i64>, u32> = HashMap::new();
    quotient.insert(vec![0; d], 0);
    let mut frontier = vec![vec![0i64; d]];
    for len in 1..=radius {
        let mut next = Vec::new();
        for p in &frontier {
            for s in &steps {
                let q: Vec<i64> = p.iter().zip(s).map(|(a, b)| a + b).collect();
                if !quotient.contains_key(&q) {
                    quotient.insert(q.clone(), len);
                    next.push(q);
                }
            }
        }
        frontier = next;
    }

    let mut fibre_min: HashMap<Vec<i64>, u32> = HashMap::new();
    for (x, len) in b.iter() {
        let img = image_of_letters(labeling, x).0;
        let slot = fibre_min.entry(img).or_insert(len);
        *slot = (*slot).min(len);
    }
    let mut violations = Vec::new();
    let mut missing_lifts = Vec::new();
    let mut fibres: Vec<(&Vec<i64>, &u32)> = fibre_min.iter().collect();
    fibres.sort();
    for (img, &min_len) in fibres {
        let q = quotient.get(img).copied().unwrap_or(u32::MAX);
        if min_len < q {
            violations.push(format!("{img:?}: fibre length {min_len} < quotient length {q}"));
        } else if min_len > q {
            missing_lifts.push(format!("{img:?}: fibre length {min_len} > quotient length {q}"));
        }
    }
    Ok(QuotientReport { radius, checked: b.len(), fibres: fibre_min.len(), violations, missing_lifts })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Z^2 with generators ±e1, ±e2.
    struct Lattice;

    impl GroupOracle for Lattice {
        type Element = (i64, i64);
        fn identity(&self) -> (i64, i64) {
            (0, 0)
        }
        fn generator_count(&self) -> usize {
            4
        }
        fn generator_label(&self, i: usize) -> String {
            ["a", "a^-1", "b", "b^-1"][i].into()
        }
        fn generator(&self, i: usize) -> (i64, i64) {
            [(1, 0), (-1, 0), (0, 1), (0, -1)][i]
        }
        fn compose(&self, a: &(i64, i64), b: &(i64, i64)) -> (i64, i64) {
            (a.0 + b.0, a.1 + b.1)
        }
    }

    #[test]
    fn lattice_ball_sizes() {
        assert_eq!(ball(&Lattice, 0, 10).unwrap().len(), 1);
        assert_eq!(ball(&Lattice, 2, 100).unwrap().len(), 13);
        assert!(matches!(ball(&Lattice, 3, 10), Err(MetricError::BudgetExceeded { .. })));
    }

    #[test]
    fn inner_radius_rounds_up() {
        assert_eq!(inner_radius(4, 0.5), 2);
        assert_eq!(inner_radius(5, 0.5), 3);
        assert_eq!(inner_radius(3, 1.0), 3);
        assert_eq!(inner_radius(10, 0.3), 3);
    }

    #[test]
    fn fit_recovers_exact_power() {
        let pts: Vec<SeriesPoint> =
            (1..=10).map(|r| SeriesPoint { r, value: (r * r) as f64, exact: true }).collect();
        let fit = fit_exponent(&pts, (2, 10)).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-9);
        assert!((fit.coefficient - 1.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit_exponent(&pts, (9, 10)), Err(MetricError::TooFewPoints(2)));
    }

    #[test]
    fn exact_window_prefers_longest_then_latest() {
        let mk = |r, v: f64, exact| SeriesPoint { r, value: v, exact };
        let pts = vec![mk(0, 0.0, true), mk(1, 1.0, true), mk(2, 2.0, true), mk(3, 3.0, false), mk(4, 4.0, true), mk(5, 5.0, true)];
        assert_eq!(largest_exact_window(&pts), Some((4, 5)));
    }

    #[test]
    fn domination_verdicts() {
        let fit = |e, r2| FitResult { exponent: e, coefficient: 1.0, r_squared: r2, window: (1, 5), points: 5 };
        assert_eq!(dominated_by(&fit(1.0, 1.0), &fit(2.0, 1.0), 0.1), DominationVerdict::Dominated);
        assert_eq!(dominated_by(&fit(2.0, 1.0), &fit(1.0, 1.0), 0.1), DominationVerdict::NotDominated);
        assert_eq!(dominated_by(&fit(2.0, 0.5), &fit(1.0, 1.0), 0.1), DominationVerdict::Inconclusive);
        assert_eq!(dominated_by(&fit(1.7, 0.99), &fit(1.7, 0.99), 0.0), DominationVerdict::Dominated);
    }

    #[test]
    fn divergence_parameter_checks() {
        assert!(matches!(divergence_estimate(&Lattice, 2, 0.0, None, 1000), Err(MetricError::InvalidParameter(_))));
        assert!(matches!(divergence_estimate(&Lattice, 0, 0.5, None, 1000), Err(MetricError::InvalidParameter(_))));
        assert!(matches!(divergence_estimate(&Lattice, 4, 0.5, Some(40), 100), Err(MetricError::Horizon { .. })));
    }

    #[test]
    fn lattice_divergence_radius_one() {
        let est = divergence_estimate(&Lattice, 1, 1.0, None, 10_000).unwrap();
        assert_eq!(est.value, DivergenceValue::Finite(4));
        assert!(est.exact);
    }
}
