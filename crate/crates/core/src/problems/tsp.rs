//! Multiobjective symmetric TSP: tour evaluation, 2-opt with candidate
//! lists, and distance-preserving crossover (DPX).

use std::borrow::Cow;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, RngCore};

use super::{improves, Problem};
use crate::error::{Error, Result};
use crate::scalarizing::{ObjectivePoint, Scalarizer, ScalarizerKind};

/// `J` symmetric integer cost matrices over `n` cities.
#[derive(Clone, Debug)]
pub struct TspInstance {
    n: usize,
    /// Row-major `n × n` matrix per objective.
    costs: Vec<Vec<i64>>,
}

impl TspInstance {
    pub fn new(n: usize, costs: Vec<Vec<i64>>) -> Result<Self> {
        if n < 4 {
            return Err(Error::contract(format!("TSP needs at least 4 cities, got {n}")));
        }
        if costs.is_empty() {
            return Err(Error::contract("TSP needs at least one objective"));
        }
        for (j, m) in costs.iter().enumerate() {
            if m.len() != n * n {
                return Err(Error::contract(format!(
                    "objective {j}: matrix has {} entries, expected {}",
                    m.len(),
                    n * n
                )));
            }
            for a in 0..n {
                if m[a * n + a] != 0 {
                    return Err(Error::contract(format!("objective {j}: nonzero diagonal at {a}")));
                }
                for b in a + 1..n {
                    let c = m[a * n + b];
                    if c < 0 || c != m[b * n + a] {
                        return Err(Error::contract(format!(
                            "objective {j}: cost ({a},{b}) must be symmetric and nonnegative"
                        )));
                    }
                }
            }
        }
        Ok(TspInstance { n, costs })
    }

    /// One objective per coordinate set, costs `nint(Euclidean distance)`.
    pub fn from_coordinates(objectives: &[Vec<(f64, f64)>]) -> Result<Self> {
        let n = objectives.first().map_or(0, Vec::len);
        if objectives.iter().any(|c| c.len() != n) {
            return Err(Error::contract("coordinate sets differ in city count"));
        }
        let costs = objectives.iter().map(|c| euclidean_matrix(c)).collect();
        TspInstance::new(n, costs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_objectives(&self) -> usize {
        self.costs.len()
    }

    #[inline]
    pub fn cost(&self, objective: usize, a: usize, b: usize) -> i64 {
        self.costs[objective][a * self.n + b]
    }

    pub fn matrix(&self, objective: usize) -> &[i64] {
        &self.costs[objective]
    }
}

/// TSPLIB EUC_2D rounding: `nint(sqrt(dx² + dy²))`.
pub fn euclidean_distance(a: (f64, f64), b: (f64, f64)) -> i64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    ((dx * dx + dy * dy).sqrt() + 0.5).floor() as i64
}

pub fn euclidean_matrix(coords: &[(f64, f64)]) -> Vec<i64> {
    let n = coords.len();
    let mut m = vec![0; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let d = euclidean_distance(coords[a], coords[b]);
            m[a * n + b] = d;
            m[b * n + a] = d;
        }
    }
    m
}

/// A Hamiltonian cycle given as a city permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tour(Vec<usize>);

impl Tour {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &c in &order {
            if c >= order.len() || seen[c] {
                return Err(Error::contract(format!("tour is not a permutation (city {c})")));
            }
            seen[c] = true;
        }
        Ok(Tour(order))
    }

    pub fn random(n: usize, rng: &mut (impl RngCore + ?Sized)) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Tour(order)
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Undirected edges as `(min, max)` pairs, including the closing edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.0.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.0[i], self.0[(i + 1) % n]);
                (a.min(b), a.max(b))
            })
            .collect()
    }
}

/// Tour lengths per objective, closing edge included.
pub fn tsp_evaluate(inst: &TspInstance, tour: &Tour) -> ObjectivePoint {
    let n = tour.len();
    debug_assert_eq!(n, inst.n());
    let t = tour.order();
    let values: Vec<f64> = (0..inst.num_objectives())
        .map(|j| {
            (0..n)
                .map(|i| inst.cost(j, t[i], t[(i + 1) % n]))
                .sum::<i64>() as f64
        })
        .collect();
    ObjectivePoint::from(values)
}

/// Per-city candidate neighbors, closed under symmetry.
#[derive(Clone, Debug)]
pub struct CandidateLists {
    n: usize,
    lists: Vec<Vec<usize>>,
    member: Vec<bool>,
}

impl CandidateLists {
    pub fn get(&self, city: usize) -> &[usize] {
        &self.lists[city]
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.member[a * self.n + b]
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `cand(a)` = every city adjacent to `a` in at least one of the tours.
pub fn build_candidate_lists(tours: &[Tour]) -> Result<CandidateLists> {
    let first = tours
        .first()
        .ok_or_else(|| Error::contract("candidate lists need at least one tour"))?;
    let n = first.len();
    let mut member = vec![false; n * n];
    for t in tours {
        if t.len() != n {
            return Err(Error::contract("tours differ in length"));
        }
        for (a, b) in t.edges() {
            member[a * n + b] = true;
            member[b * n + a] = true;
        }
    }
    let lists = (0..n)
        .map(|a| (0..n).filter(|&b| member[a * n + b]).collect())
        .collect();
    Ok(CandidateLists { n, lists, member })
}

/// Scores 2-edge exchanges against the current objective vector. Linear
/// scalarizers use a precombined weighted cost matrix.
struct ExchangeScorer<'a> {
    inst: &'a TspInstance,
    scalarizer: &'a Scalarizer,
    combined: Option<Vec<f64>>,
    z: Vec<f64>,
    value: f64,
    scratch: Vec<f64>,
}

impl<'a> ExchangeScorer<'a> {
    fn new(inst: &'a TspInstance, scalarizer: &'a Scalarizer, tour: &Tour) -> Self {
        let combined = (scalarizer.kind() == ScalarizerKind::Linear).then(|| {
            let w = scalarizer.weights();
            let nn = inst.n * inst.n;
            (0..nn)
                .map(|k| (0..inst.num_objectives()).map(|j| w[j] * inst.costs[j][k] as f64).sum())
                .collect()
        });
        let z = tsp_evaluate(inst, tour).into_inner();
        let value = scalarizer.value(&z);
        ExchangeScorer {
            inst,
            scalarizer,
            combined,
            scratch: vec![0.0; z.len()],
            z,
            value,
        }
    }

    /// Value after removing `(a,b)`, `(c,d)` and adding `(a,c)`, `(b,d)`.
    #[inline]
    fn exchange_value(&mut self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let n = self.inst.n;
        if let Some(m) = &self.combined {
            return self.value + m[a * n + c] + m[b * n + d] - m[a * n + b] - m[c * n + d];
        }
        for (j, s) in self.scratch.iter_mut().enumerate() {
            let cost = &self.inst.costs[j];
            let delta = cost[a * n + c] + cost[b * n + d] - cost[a * n + b] - cost[c * n + d];
            *s = self.z[j] + delta as f64;
        }
        self.scalarizer.value(&self.scratch)
    }

    fn apply(&mut self, a: usize, b: usize, c: usize, d: usize) {
        let n = self.inst.n;
        for (j, z) in self.z.iter_mut().enumerate() {
            let cost = &self.inst.costs[j];
            *z += (cost[a * n + c] + cost[b * n + d] - cost[a * n + b] - cost[c * n + d]) as f64;
        }
        self.value = self.scalarizer.value(&self.z);
    }
}

/// Steepest-descent 2-opt. With candidate lists only pairs `⟨a,b⟩, ⟨c,d⟩`
/// with `c ∈ cand(a)` or `d ∈ cand(b)` are examined.
pub fn two_opt_local_search(
    inst: &TspInstance,
    tour: Tour,
    scalarizer: &Scalarizer,
    candidates: Option<&CandidateLists>,
) -> Tour {
    two_opt_local_search_traced(inst, tour, scalarizer, candidates, &mut |_| {})
}

/// As [`two_opt_local_search`], reporting the scalarizing value after every
/// accepted move.
pub fn two_opt_local_search_traced(
    inst: &TspInstance,
    tour: Tour,
    scalarizer: &Scalarizer,
    candidates: Option<&CandidateLists>,
    on_move: &mut dyn FnMut(f64),
) -> Tour {
    let n = inst.n;
    let mut scorer = ExchangeScorer::new(inst, scalarizer, &tour);
    let mut t = tour.0;
    let mut pos = vec![0usize; n];
    for (i, &c) in t.iter().enumerate() {
        pos[c] = i;
    }
    loop {
        let mut best: Option<(usize, usize)> = None;
        let mut best_value = scorer.value;
        let mut consider = |lo: usize, hi: usize, t: &[usize], scorer: &mut ExchangeScorer| {
            let (a, b, c, d) = (t[lo], t[lo + 1], t[hi], t[(hi + 1) % n]);
            let v = scorer.exchange_value(a, b, c, d);
            if improves(v, best_value) {
                best_value = v;
                best = Some((lo, hi));
            }
        };
        match candidates {
            None => {
                for lo in 0..n - 2 {
                    let hi_end = if lo == 0 { n - 1 } else { n };
                    for hi in lo + 2..hi_end {
                        consider(lo, hi, &t, &mut scorer);
                    }
                }
            }
            Some(cand) => {
                for i in 0..n {
                    let a = t[i];
                    let b = t[(i + 1) % n];
                    let via_a = cand.get(a).iter().map(|&c| pos[c]);
                    let via_b = cand.get(b).iter().map(|&d| (pos[d] + n - 1) % n);
                    for j in via_a.chain(via_b) {
                        let (lo, hi) = (i.min(j), i.max(j));
                        if hi < lo + 2 || (lo == 0 && hi == n - 1) {
                            continue;
                        }
                        consider(lo, hi, &t, &mut scorer);
                    }
                }
            }
        }
        let Some((lo, hi)) = best else { break };
        let (a, b, c, d) = (t[lo], t[lo + 1], t[hi], t[(hi + 1) % n]);
        scorer.apply(a, b, c, d);
        t[lo + 1..=hi].reverse();
        for (k, &city) in t[lo + 1..=hi].iter().enumerate() {
            pos[city] = lo + 1 + k;
        }
        on_move(scorer.value);
    }
    Tour(t)
}

struct EdgeSet {
    next: Vec<usize>,
    prev: Vec<usize>,
}

impl EdgeSet {
    fn of(tour: &[usize]) -> Self {
        let n = tour.len();
        let mut next = vec![0; n];
        let mut prev = vec![0; n];
        for i in 0..n {
            next[tour[i]] = tour[(i + 1) % n];
            prev[tour[(i + 1) % n]] = tour[i];
        }
        EdgeSet { next, prev }
    }

    #[inline]
    fn has(&self, a: usize, b: usize) -> bool {
        self.next[a] == b || self.prev[a] == b
    }
}

/// Strict completion attempts before parent edges are allowed.
const DPX_STRICT_ATTEMPTS: usize = 64;

/// Distance-preserving crossover: keeps every edge shared by both parents
/// and reconnects the resulting fragments with edges that belong to neither
/// parent whenever such a completion is found.
pub fn dpx_recombine(first: &Tour, second: &Tour, rng: &mut (impl RngCore + ?Sized)) -> Tour {
    let n = first.len();
    assert_eq!(n, second.len(), "parents differ in length");
    let e1 = EdgeSet::of(&first.0);
    let e2 = EdgeSet::of(&second.0);
    let t = &first.0;
    let common = |i: usize| e2.has(t[i], t[(i + 1) % n]);
    let Some(start) = (0..n).find(|&i| !common((i + n - 1) % n)) else {
        return first.clone();
    };

    // Fragments: maximal runs of first's order joined by common edges.
    let mut fragments: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for k in 0..n {
        let i = (start + k) % n;
        current.push(t[i]);
        if !common(i) {
            fragments.push(std::mem::take(&mut current));
        }
    }
    debug_assert!(current.is_empty());

    let parent_edge = |a: usize, b: usize| e1.has(a, b) || e2.has(a, b);
    for _ in 0..DPX_STRICT_ATTEMPTS {
        if let Some(order) = chain_fragments(&fragments, &parent_edge, true, rng) {
            return Tour(order);
        }
    }
    Tour(chain_fragments(&fragments, &parent_edge, false, rng).expect("relaxed chaining always succeeds"))
}

/// Randomly chains fragments into a cycle. In strict mode every connecting
/// edge (closing edge included) must avoid `forbidden`; otherwise
/// non-forbidden edges are merely preferred.
fn chain_fragments(
    fragments: &[Vec<usize>],
    forbidden: &dyn Fn(usize, usize) -> bool,
    strict: bool,
    rng: &mut (impl RngCore + ?Sized),
) -> Option<Vec<usize>> {
    let mut remaining: Vec<usize> = (0..fragments.len()).collect();
    let first = remaining.swap_remove(rng.random_range(0..remaining.len()));
    let mut order: Vec<usize> = fragments[first].clone();
    if rng.random::<bool>() {
        order.reverse();
    }
    let head = order[0];
    // (fragment slot, reversed)
    let mut options: Vec<(usize, bool)> = Vec::new();
    let mut fallback: Vec<(usize, bool)> = Vec::new();
    while !remaining.is_empty() {
        let end = *order.last().unwrap();
        let last_step = remaining.len() == 1;
        options.clear();
        fallback.clear();
        for (slot, &f) in remaining.iter().enumerate() {
            let frag = &fragments[f];
            let ends: &[bool] = if frag.len() == 1 { &[false] } else { &[false, true] };
            for &rev in ends {
                let (entry, exit) = if rev {
                    (*frag.last().unwrap(), frag[0])
                } else {
                    (frag[0], *frag.last().unwrap())
                };
                let ok = !forbidden(end, entry) && !(last_step && forbidden(exit, head));
                if ok {
                    options.push((slot, rev));
                } else {
                    fallback.push((slot, rev));
                }
            }
        }
        let &(slot, rev) = match options.choose(rng) {
            Some(o) => o,
            None if strict => return None,
            None => fallback.choose(rng).expect("fragments remain"),
        };
        let f = remaining.swap_remove(slot);
        if rev {
            order.extend(fragments[f].iter().rev());
        } else {
            order.extend(fragments[f].iter());
        }
    }
    Some(order)
}

/// Engine adapter for [`TspInstance`]. Candidate lists are built from the
/// initial solutions and used in the main phase only.
#[derive(Clone, Debug)]
pub struct TspProblem<'a> {
    inst: &'a TspInstance,
    use_candidate_lists: bool,
    candidates: Option<CandidateLists>,
}

impl<'a> TspProblem<'a> {
    pub fn new(inst: &'a TspInstance) -> Self {
        TspProblem {
            inst,
            use_candidate_lists: true,
            candidates: None,
        }
    }

    pub fn without_candidate_lists(mut self) -> Self {
        self.use_candidate_lists = false;
        self
    }

    pub fn candidates(&self) -> Option<&CandidateLists> {
        self.candidates.as_ref()
    }
}

impl Problem for TspProblem<'_> {
    type Solution = Tour;

    fn num_objectives(&self) -> usize {
        self.inst.num_objectives()
    }

    fn prepare(&mut self, _rng: &mut dyn RngCore) {
        self.candidates = None;
    }

    fn evaluate(&self, solution: &Tour) -> ObjectivePoint {
        tsp_evaluate(self.inst, solution)
    }

    fn normalize<'z>(&self, z: &'z ObjectivePoint) -> Cow<'z, ObjectivePoint> {
        Cow::Borrowed(z)
    }

    fn random_solution(&self, rng: &mut dyn RngCore) -> Tour {
        Tour::random(self.inst.n(), rng)
    }

    fn local_search(&self, solution: Tour, scalarizer: &Scalarizer, _rng: &mut dyn RngCore) -> Tour {
        two_opt_local_search(self.inst, solution, scalarizer, self.candidates.as_ref())
    }

    fn recombine(&self, first: &Tour, second: &Tour, rng: &mut dyn RngCore) -> Tour {
        dpx_recombine(first, second, rng)
    }

    fn begin_main_phase(&mut self, initial: &[Tour]) {
        if self.use_candidate_lists && !initial.is_empty() {
            self.candidates = Some(build_candidate_lists(initial).expect("nonempty tours"));
        }
    }
}
