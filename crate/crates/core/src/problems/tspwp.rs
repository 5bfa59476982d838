//! TSP with profits: choose a sub-tour minimizing length while maximizing
//! collected profit. Profit is negated so both objectives are minimized.

use std::borrow::Cow;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, RngCore};

use super::{improves, Problem};
use crate::error::{Error, Result};
use crate::scalarizing::{ObjectivePoint, Scalarizer, ScalarizerSpec, WeightVector};

#[derive(Clone, Debug)]
pub struct TspwpInstance {
    n: usize,
    cost: Vec<i64>,
    profit: Vec<i64>,
}

impl TspwpInstance {
    pub fn new(n: usize, cost: Vec<i64>, profit: Vec<i64>) -> Result<Self> {
        // Reuse the TSP matrix checks.
        super::tsp::TspInstance::new(n, vec![cost.clone()])?;
        if profit.len() != n {
            return Err(Error::contract(format!(
                "expected {n} profits, got {}",
                profit.len()
            )));
        }
        if let Some(p) = profit.iter().find(|&&p| p < 0) {
            return Err(Error::contract(format!("negative profit {p}")));
        }
        Ok(TspwpInstance { n, cost, profit })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn cost(&self, a: usize, b: usize) -> i64 {
        self.cost[a * self.n + b]
    }

    pub fn profit(&self, city: usize) -> i64 {
        self.profit[city]
    }

    pub fn profits(&self) -> &[i64] {
        &self.profit
    }

    pub fn matrix(&self) -> &[i64] {
        &self.cost
    }

    pub fn total_profit(&self) -> i64 {
        self.profit.iter().sum()
    }
}

/// Nonempty sequence of distinct cities read as a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubTour(Vec<usize>);

impl SubTour {
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::contract("sub-tour must visit at least one city"));
        }
        let mut seen = vec![false; n];
        for &c in &order {
            if c >= n || seen[c] {
                return Err(Error::contract(format!("invalid or repeated city {c}")));
            }
            seen[c] = true;
        }
        Ok(SubTour(order))
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

    /// Undirected cycle edges as `(min, max)`; none for one city, one for two.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let m = self.0.len();
        let count = match m {
            1 => 0,
            2 => 1,
            _ => m,
        };
        (0..count)
            .map(|i| {
                let (a, b) = (self.0[i], self.0[(i + 1) % m]);
                (a.min(b), a.max(b))
            })
            .collect()
    }
}

fn cycle_length(inst: &TspwpInstance, order: &[usize]) -> i64 {
    let m = order.len();
    (0..m).map(|i| inst.cost(order[i], order[(i + 1) % m])).sum()
}

/// `(cycle length, −collected profit)`.
pub fn tspwp_evaluate(inst: &TspwpInstance, t: &SubTour) -> ObjectivePoint {
    let profit: i64 = t.0.iter().map(|&c| inst.profit(c)).sum();
    ObjectivePoint::from(vec![cycle_length(inst, &t.0) as f64, -profit as f64])
}

/// Approximate per-objective ranges used to normalize objective vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectiveRanges {
    min: [f64; 2],
    max: [f64; 2],
}

/// Relative padding applied on both sides of estimated ranges.
pub const RANGE_PADDING: f64 = 0.01;

impl ObjectiveRanges {
    pub fn new(min: [f64; 2], max: [f64; 2]) -> Result<Self> {
        if (0..2).any(|j| max[j].partial_cmp(&min[j]) != Some(std::cmp::Ordering::Greater) || !min[j].is_finite() || !max[j].is_finite()) {
            return Err(Error::contract(format!(
                "ranges need max > min, got {min:?} / {max:?}"
            )));
        }
        Ok(ObjectiveRanges { min, max })
    }

    /// Bounding box of `points`, padded by [`RANGE_PADDING`] of the span;
    /// degenerate spans get an absolute width of 1.
    pub fn bracketing(points: &[&ObjectivePoint]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::contract("no points to bracket"));
        }
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            crate::error::check_dims(2, p.dim())?;
            for j in 0..2 {
                min[j] = min[j].min(p[j]);
                max[j] = max[j].max(p[j]);
            }
        }
        for j in 0..2 {
            let span = max[j] - min[j];
            if span > 0.0 {
                min[j] -= RANGE_PADDING * span;
                max[j] += RANGE_PADDING * span;
            } else {
                max[j] += 1.0;
            }
        }
        ObjectiveRanges::new(min, max)
    }

    pub fn min(&self) -> [f64; 2] {
        self.min
    }

    pub fn max(&self) -> [f64; 2] {
        self.max
    }

    #[inline]
    pub fn normalize_pair(&self, z: [f64; 2]) -> [f64; 2] {
        [
            (z[0] - self.min[0]) / (self.max[0] - self.min[0]),
            (z[1] - self.min[1]) / (self.max[1] - self.min[1]),
        ]
    }

    pub fn normalize(&self, z: &ObjectivePoint) -> ObjectivePoint {
        ObjectivePoint::from(self.normalize_pair([z[0], z[1]]).to_vec())
    }

    pub fn contains(&self, z: &ObjectivePoint) -> bool {
        (0..2).all(|j| z[j] >= self.min[j] && z[j] <= self.max[j])
    }
}

/// Weight vectors of the two boundary searches used for range estimation.
pub const RANGE_PROBE_WEIGHTS: [[f64; 2]; 2] = [[0.999, 0.001], [0.001, 0.999]];

/// Runs the four-move local search from random starts under mixed
/// scalarizers with the boundary weights, on raw objectives, and brackets
/// the two results.
pub fn estimate_ranges(inst: &TspwpInstance, rng: &mut (impl RngCore + ?Sized)) -> Result<ObjectiveRanges> {
    let (ranges, _) = estimate_ranges_with_probes(inst, rng)?;
    Ok(ranges)
}

/// As [`estimate_ranges`], also returning the two boundary points.
pub fn estimate_ranges_with_probes(
    inst: &TspwpInstance,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<(ObjectiveRanges, [ObjectivePoint; 2])> {
    let reference = ObjectivePoint::new(vec![0.0, -(inst.total_profit() as f64)])?;
    let spec = ScalarizerSpec::mixed_default().with_reference(reference);
    let mut probes = Vec::with_capacity(2);
    for w in RANGE_PROBE_WEIGHTS {
        let s = Scalarizer::new(spec.clone(), WeightVector::new(w.to_vec())?)?;
        let start = random_subtour(inst, rng);
        let t = tspwp_local_search(inst, start, &s, None);
        probes.push(tspwp_evaluate(inst, &t));
    }
    let ranges = ObjectiveRanges::bracketing(&[&probes[0], &probes[1]])?;
    let [a, b]: [ObjectivePoint; 2] = probes.try_into().expect("two probes");
    Ok((ranges, [a, b]))
}

/// Each city joins with probability 1/2 (at least one city), random order.
pub fn random_subtour(inst: &TspwpInstance, rng: &mut (impl RngCore + ?Sized)) -> SubTour {
    let mut order: Vec<usize> = (0..inst.n).filter(|_| rng.random::<bool>()).collect();
    if order.is_empty() {
        order.push(rng.random_range(0..inst.n));
    }
    order.shuffle(rng);
    SubTour(order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubTourMove {
    /// Reverse positions `lo+1..=hi`.
    EdgeExchange { lo: usize, hi: usize },
    /// Insert `city` after position `after`.
    Insert { city: usize, after: usize },
    Delete { pos: usize },
    Exchange { pos: usize, city: usize },
}

struct SubTourState<'a> {
    inst: &'a TspwpInstance,
    order: Vec<usize>,
    present: Vec<bool>,
    length: i64,
    profit: i64,
}

impl<'a> SubTourState<'a> {
    fn new(inst: &'a TspwpInstance, t: SubTour) -> Self {
        let mut present = vec![false; inst.n];
        for &c in &t.0 {
            present[c] = true;
        }
        SubTourState {
            inst,
            length: cycle_length(inst, &t.0),
            profit: t.0.iter().map(|&c| inst.profit(c)).sum(),
            order: t.0,
            present,
        }
    }

    #[inline]
    fn c(&self, a: usize, b: usize) -> i64 {
        self.inst.cost(a, b)
    }

    /// Best strictly improving move under `score(length, profit)`.
    fn best_move(&self, score: &impl Fn(i64, i64) -> f64) -> Option<(SubTourMove, f64)> {
        let m = self.order.len();
        let n = self.inst.n;
        let t = &self.order;
        let current = score(self.length, self.profit);
        let mut best: Option<(SubTourMove, f64)> = None;
        let mut best_value = current;
        let mut offer = |mv: SubTourMove, v: f64| {
            if improves(v, best_value) {
                best_value = v;
                best = Some((mv, v));
            }
        };

        if m >= 4 {
            for lo in 0..m - 2 {
                let hi_end = if lo == 0 { m - 1 } else { m };
                for hi in lo + 2..hi_end {
                    let (a, b, c, d) = (t[lo], t[lo + 1], t[hi], t[(hi + 1) % m]);
                    let delta = self.c(a, c) + self.c(b, d) - self.c(a, b) - self.c(c, d);
                    if delta < 0 {
                        offer(SubTourMove::EdgeExchange { lo, hi }, score(self.length + delta, self.profit));
                    }
                }
            }
        }

        // The score is nondecreasing in length, so for a fixed inserted
        // city only its cheapest position matters.
        for city in (0..n).filter(|&c| !self.present[c]) {
            let mut cheapest = (i64::MAX, 0);
            for p in 0..m {
                let (a, b) = (t[p], t[(p + 1) % m]);
                let delta = self.c(a, city) + self.c(city, b) - self.c(a, b);
                if delta < cheapest.0 {
                    cheapest = (delta, p);
                }
            }
            let v = score(self.length + cheapest.0, self.profit + self.inst.profit(city));
            offer(SubTourMove::Insert { city, after: cheapest.1 }, v);
        }

        if m >= 2 {
            for pos in 0..m {
                let (a, x, b) = (t[(pos + m - 1) % m], t[pos], t[(pos + 1) % m]);
                let delta = self.c(a, b) - self.c(a, x) - self.c(x, b);
                offer(
                    SubTourMove::Delete { pos },
                    score(self.length + delta, self.profit - self.inst.profit(x)),
                );
            }
        }

        for pos in 0..m {
            let (a, x, b) = (t[(pos + m - 1) % m], t[pos], t[(pos + 1) % m]);
            for city in (0..n).filter(|&c| !self.present[c]) {
                let delta = if m == 1 {
                    0
                } else {
                    self.c(a, city) + self.c(city, b) - self.c(a, x) - self.c(x, b)
                };
                let profit = self.profit - self.inst.profit(x) + self.inst.profit(city);
                offer(SubTourMove::Exchange { pos, city }, score(self.length + delta, profit));
            }
        }
        best
    }

    fn apply(&mut self, mv: SubTourMove) {
        match mv {
            SubTourMove::EdgeExchange { lo, hi } => self.order[lo + 1..=hi].reverse(),
            SubTourMove::Insert { city, after } => {
                self.order.insert(after + 1, city);
                self.present[city] = true;
            }
            SubTourMove::Delete { pos } => {
                let x = self.order.remove(pos);
                self.present[x] = false;
            }
            SubTourMove::Exchange { pos, city } => {
                self.present[self.order[pos]] = false;
                self.order[pos] = city;
                self.present[city] = true;
            }
        }
        self.length = cycle_length(self.inst, &self.order);
        self.profit = self.order.iter().map(|&c| self.inst.profit(c)).sum();
    }
}

fn scorer<'a>(
    scalarizer: &'a Scalarizer,
    ranges: Option<&'a ObjectiveRanges>,
) -> impl Fn(i64, i64) -> f64 + 'a {
    move |length, profit| {
        let raw = [length as f64, -profit as f64];
        let z = match ranges {
            Some(r) => r.normalize_pair(raw),
            None => raw,
        };
        scalarizer.value(&z)
    }
}

/// Steepest descent over edge exchange, insertion, deletion and node
/// exchange. With `ranges` the scalarizer sees normalized objectives.
pub fn tspwp_local_search(
    inst: &TspwpInstance,
    t: SubTour,
    scalarizer: &Scalarizer,
    ranges: Option<&ObjectiveRanges>,
) -> SubTour {
    tspwp_local_search_traced(inst, t, scalarizer, ranges, &mut |_, _| {})
}

pub fn tspwp_local_search_traced(
    inst: &TspwpInstance,
    t: SubTour,
    scalarizer: &Scalarizer,
    ranges: Option<&ObjectiveRanges>,
    on_move: &mut dyn FnMut(SubTourMove, f64),
) -> SubTour {
    let score = scorer(scalarizer, ranges);
    let mut state = SubTourState::new(inst, t);
    while let Some((mv, v)) = state.best_move(&score) {
        state.apply(mv);
        on_move(mv, v);
    }
    SubTour(state.order)
}

/// Whether some move of the four types strictly improves `t`.
pub fn has_improving_move(
    inst: &TspwpInstance,
    t: &SubTour,
    scalarizer: &Scalarizer,
    ranges: Option<&ObjectiveRanges>,
) -> bool {
    let score = scorer(scalarizer, ranges);
    SubTourState::new(inst, t.clone()).best_move(&score).is_some()
}

fn cycle_neighbors(order: &[usize], n: usize) -> (Vec<usize>, Vec<usize>) {
    let m = order.len();
    let mut next = vec![usize::MAX; n];
    let mut prev = vec![usize::MAX; n];
    if m >= 2 {
        for i in 0..m {
            next[order[i]] = order[(i + 1) % m];
            prev[order[(i + 1) % m]] = order[i];
        }
    }
    (next, prev)
}

/// Extended DPX for sub-tours. Keeps common edges and common nodes, adds
/// other cities at random so the expected size is the parents' mean size,
/// then joins the fragments into a random cycle.
pub fn dpx_wp_recombine(
    inst: &TspwpInstance,
    first: &SubTour,
    second: &SubTour,
    rng: &mut (impl RngCore + ?Sized),
) -> SubTour {
    let n = inst.n;
    let (next2, prev2) = cycle_neighbors(&second.0, n);
    let mut in_second = vec![false; n];
    for &c in &second.0 {
        in_second[c] = true;
    }
    let t = &first.0;
    let m = t.len();
    let common_edge = |i: usize| {
        if m < 2 {
            return false;
        }
        let (a, b) = (t[i], t[(i + 1) % m]);
        next2[a] == b || prev2[a] == b
    };

    // Fragments: maximal runs of the first parent's order over common nodes
    // joined by common edges.
    let mut fragments: Vec<Vec<usize>> = Vec::new();
    let mut is_common = vec![false; n];
    let mut common_nodes = 0usize;
    for &c in t {
        if in_second[c] {
            is_common[c] = true;
            common_nodes += 1;
        }
    }
    match (0..m).find(|&i| !common_edge((i + m - 1) % m)) {
        None => fragments.push(t.clone()),
        Some(start) => {
            let mut current = Vec::new();
            for k in 0..m {
                let i = (start + k) % m;
                if is_common[t[i]] {
                    current.push(t[i]);
                    if common_edge(i) {
                        continue;
                    }
                }
                if !current.is_empty() {
                    fragments.push(std::mem::take(&mut current));
                }
            }
        }
    }

    let remaining: Vec<usize> = (0..n).filter(|&c| !is_common[c]).collect();
    let expected = (first.len() + second.len()) as f64 / 2.0;
    let add_probability = if remaining.is_empty() {
        0.0
    } else {
        ((expected - common_nodes as f64) / remaining.len() as f64).clamp(0.0, 1.0)
    };
    for &c in &remaining {
        if rng.random::<f64>() < add_probability {
            fragments.push(vec![c]);
        }
    }
    if fragments.is_empty() {
        let pool: Vec<usize> = first.0.iter().chain(&second.0).copied().collect();
        return SubTour(vec![*pool.choose(rng).expect("parents are nonempty")]);
    }

    fragments.shuffle(rng);
    let mut order = Vec::new();
    for f in fragments {
        if f.len() > 1 && rng.random::<bool>() {
            order.extend(f.into_iter().rev());
        } else {
            order.extend(f);
        }
    }
    SubTour(order)
}

/// Engine adapter. Objective ranges are re-estimated in [`Problem::prepare`]
/// unless fixed with [`TspwpProblem::with_ranges`].
#[derive(Clone, Debug)]
pub struct TspwpProblem<'a> {
    inst: &'a TspwpInstance,
    fixed_ranges: Option<ObjectiveRanges>,
    ranges: Option<ObjectiveRanges>,
}

impl<'a> TspwpProblem<'a> {
    pub fn new(inst: &'a TspwpInstance) -> Self {
        TspwpProblem {
            inst,
            fixed_ranges: None,
            ranges: None,
        }
    }

    pub fn with_ranges(mut self, ranges: ObjectiveRanges) -> Self {
        self.fixed_ranges = Some(ranges.clone());
        self.ranges = Some(ranges);
        self
    }

    pub fn ranges(&self) -> Option<&ObjectiveRanges> {
        self.ranges.as_ref()
    }
}

impl Problem for TspwpProblem<'_> {
    type Solution = SubTour;

    fn num_objectives(&self) -> usize {
        2
    }

    fn prepare(&mut self, rng: &mut dyn RngCore) {
        self.ranges = match &self.fixed_ranges {
            Some(r) => Some(r.clone()),
            None => Some(estimate_ranges(self.inst, rng).expect("two-objective probes")),
        };
    }

    fn evaluate(&self, solution: &SubTour) -> ObjectivePoint {
        tspwp_evaluate(self.inst, solution)
    }

    fn normalize<'z>(&self, z: &'z ObjectivePoint) -> Cow<'z, ObjectivePoint> {
        match &self.ranges {
            Some(r) => Cow::Owned(r.normalize(z)),
            None => Cow::Borrowed(z),
        }
    }

    fn random_solution(&self, rng: &mut dyn RngCore) -> SubTour {
        random_subtour(self.inst, rng)
    }

    fn local_search(&self, solution: SubTour, scalarizer: &Scalarizer, _rng: &mut dyn RngCore) -> SubTour {
        tspwp_local_search(self.inst, solution, scalarizer, self.ranges.as_ref())
    }

    fn recombine(&self, first: &SubTour, second: &SubTour, rng: &mut dyn RngCore) -> SubTour {
        dpx_wp_recombine(self.inst, first, second, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::tsp::euclidean_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn instance(n: usize, seed: u64, profit: impl Fn(usize) -> i64) -> TspwpInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(0..1000) as f64, rng.random_range(0..1000) as f64))
            .collect();
        TspwpInstance::new(n, euclidean_matrix(&coords), (0..n).map(profit).collect()).unwrap()
    }

    fn linear(w: [f64; 2]) -> Scalarizer {
        Scalarizer::linear(WeightVector::new(w.to_vec()).unwrap())
    }

    #[test]
    fn evaluate_boundaries() {
        let inst = instance(8, 1, |c| c as i64 + 1);
        let all = SubTour::new((0..8).collect(), 8).unwrap();
        let z = tspwp_evaluate(&inst, &all);
        let full: i64 = (0..8).map(|i| inst.cost(i, (i + 1) % 8)).sum();
        assert_eq!(z.values(), &[full as f64, -36.0]);
        let single = SubTour::new(vec![3], 8).unwrap();
        assert_eq!(tspwp_evaluate(&inst, &single).values(), &[0.0, -4.0]);
    }

    #[test]
    fn evaluate_matches_resummation() {
        let inst = instance(8, 2, |c| (c * 7 % 5) as i64);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = random_subtour(&inst, &mut rng);
            let z = tspwp_evaluate(&inst, &t);
            let o = t.order();
            let mut len = 0;
            for i in 0..o.len() {
                len += inst.matrix()[o[i] * 8 + o[(i + 1) % o.len()]];
            }
            let prof: i64 = o.iter().map(|&c| inst.profits()[c]).sum();
            assert_eq!(z.values(), &[len as f64, -prof as f64]);
        }
    }

    #[test]
    fn subtour_validation() {
        assert!(SubTour::new(vec![], 5).is_err());
        assert!(SubTour::new(vec![1, 1], 5).is_err());
        assert!(SubTour::new(vec![5], 5).is_err());
        assert!(TspwpInstance::new(4, vec![0; 16], vec![1, 2, -1, 0]).is_err());
    }

    /// Exhaustive minimum of the scalarized value over all sub-tours.
    fn exhaustive_best(inst: &TspwpInstance, s: &Scalarizer) -> f64 {
        fn permute(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
            if k == items.len() {
                f(items);
                return;
            }
            for i in k..items.len() {
                items.swap(k, i);
                permute(items, k + 1, f);
                items.swap(k, i);
            }
        }
        let n = inst.n();
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << n) {
            let mut cities: Vec<usize> = (0..n).filter(|&c| mask >> c & 1 == 1).collect();
            permute(&mut cities, 0, &mut |o| {
                let v = s.value(&tspwp_evaluate(inst, &SubTour(o.to_vec())));
                best = best.min(v);
            });
        }
        best
    }

    #[test]
    fn length_weighted_search_on_six_cities() {
        let inst = instance(6, 4, |_| 10);
        let s = linear([0.999, 0.001]);
        let optimum = exhaustive_best(&inst, &s);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let start = random_subtour(&inst, &mut rng);
            let mut trace = Vec::new();
            let out = tspwp_local_search_traced(&inst, start, &s, None, &mut |_, v| trace.push(v));
            assert!(trace.windows(2).all(|w| w[1] < w[0]));
            assert!(!has_improving_move(&inst, &out, &s, None));
            // Length dominates the weights: a short cycle is optimal, and
            // deletion on a metric instance never lengthens the cycle.
            let v = s.value(&tspwp_evaluate(&inst, &out));
            assert!((v - optimum).abs() < 1e-9, "{v} vs {optimum}");
            assert_eq!(out.len(), 1, "got {:?}", out.order());
        }
    }

    #[test]
    fn profit_weighted_all_cities_fixed_point() {
        let inst = instance(7, 6, |c| 5 + c as i64);
        let s = linear([0.001, 0.999]);
        let all = SubTour::new((0..7).collect(), 7).unwrap();
        let out = tspwp_local_search(&inst, all, &s, None);
        assert_eq!(out.len(), 7);
        assert_eq!(tspwp_evaluate(&inst, &out)[1], -(inst.total_profit() as f64));
    }

    #[test]
    fn ranges_degenerate_profit_padded() {
        let inst = instance(10, 7, |_| 0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let r = estimate_ranges(&inst, &mut rng).unwrap();
        assert_eq!(r.min()[1], 0.0);
        assert_eq!(r.max()[1], 1.0);
    }

    #[test]
    fn ranges_bracket_probes_and_are_deterministic() {
        let inst = instance(15, 9, |c| 1 + (c * 13 % 100) as i64);
        let (r1, probes) = estimate_ranges_with_probes(&inst, &mut ChaCha8Rng::seed_from_u64(10)).unwrap();
        let (r2, _) = estimate_ranges_with_probes(&inst, &mut ChaCha8Rng::seed_from_u64(10)).unwrap();
        assert_eq!(r1, r2);
        for p in &probes {
            assert!(r1.contains(p));
        }
        assert!(ObjectiveRanges::new([0.0, 0.0], [0.0, 1.0]).is_err());
    }

    #[test]
    fn dpx_wp_identical_parents() {
        let inst = instance(10, 11, |_| 1);
        let p = SubTour::new(vec![3, 1, 4, 9, 2], 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let off = dpx_wp_recombine(&inst, &p, &p, &mut rng);
            let e: HashSet<_> = off.edges().into_iter().collect();
            assert_eq!(e, p.edges().into_iter().collect::<HashSet<_>>());
        }
    }

    #[test]
    fn dpx_wp_disjoint_parents_mean_size() {
        let inst = instance(20, 13, |_| 1);
        let p1 = SubTour::new(vec![0, 1, 2, 3], 20).unwrap();
        let p2 = SubTour::new(vec![4, 5, 6, 7, 8, 9], 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let trials = 10_000;
        let mut sum = 0.0;
        for _ in 0..trials {
            sum += dpx_wp_recombine(&inst, &p1, &p2, &mut rng).len() as f64;
        }
        let mean = sum / trials as f64;
        // Binomial(20, 0.25): sd of the mean = sqrt(20·0.25·0.75 / 10^4).
        let sigma = (20.0f64 * 0.25 * 0.75 / trials as f64).sqrt();
        assert!((mean - 5.0).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn dpx_wp_keeps_common_edges_and_nodes() {
        let inst = instance(15, 15, |_| 1);
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..500 {
            let p1 = random_subtour(&inst, &mut rng);
            let p2 = random_subtour(&inst, &mut rng);
            let off = dpx_wp_recombine(&inst, &p1, &p2, &mut rng);
            assert!(SubTour::new(off.order().to_vec(), 15).is_ok());
            let nodes: HashSet<usize> = off.order().iter().copied().collect();
            let n1: HashSet<usize> = p1.order().iter().copied().collect();
            for c in p2.order() {
                if n1.contains(c) {
                    assert!(nodes.contains(c));
                }
            }
            let e1: HashSet<_> = p1.edges().into_iter().collect();
            let e2: HashSet<_> = p2.edges().into_iter().collect();
            let eo: HashSet<_> = off.edges().into_iter().collect();
            for e in e1.intersection(&e2) {
                assert!(eo.contains(e), "lost common edge {e:?}");
            }
        }
    }
}
