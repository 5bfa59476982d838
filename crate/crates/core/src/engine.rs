//! The shared generational skeleton of the four methods.
//!
//! Every method runs an initial phase of `K` iterations (random construction
//! followed by local search) and a main phase of `G·K` iterations. The
//! methods differ only in where weight vectors come from and how parents are
//! picked:
//!
//! | method  | weights                | parents                           |
//! |---------|------------------------|-----------------------------------|
//! | MOMSLS  | random                 | none, fresh random start          |
//! | MOGLS   | random                 | tournament over the Pareto archive|
//! | UMOGLS  | uniform lattice, cyclic| tournament over the Pareto archive|
//! | MOEA/D  | uniform lattice, cyclic| neighborhood / global incumbents  |

use std::borrow::Cow;
use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::archive::{ArchiveEntry, ParetoArchive};
use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::scalarizing::{
    draw_random_weight, generate_uniform_weights, lattice_size, scalarize, ObjectivePoint,
    Scalarizer, ScalarizerSpec, WeightVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Momsls,
    Mogls,
    Umogls,
    Moead,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Momsls, Method::Mogls, Method::Umogls, Method::Moead];

    pub fn name(self) -> &'static str {
        match self {
            Method::Momsls => "MOMSLS",
            Method::Mogls => "MOGLS",
            Method::Umogls => "UMOGLS",
            Method::Moead => "MOEA/D",
        }
    }

    pub fn uses_uniform_weights(self) -> bool {
        matches!(self, Method::Umogls | Method::Moead)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['/', '-', '_'], "").as_str() {
            "momsls" => Ok(Method::Momsls),
            "mogls" => Ok(Method::Mogls),
            "umogls" => Ok(Method::Umogls),
            "moead" => Ok(Method::Moead),
            other => Err(Error::config(format!("unknown method `{other}`"))),
        }
    }
}

/// Method selection plus every numeric parameter of a run.
///
/// The weight budget is a lattice granularity `H`; the number of weight
/// vectors `K = C(H+J-1, J-1)` is also the number of initial solutions of the
/// random-weight methods, so all methods perform the same number of
/// iterations.
#[derive(Clone, Debug, PartialEq)]
pub struct MethodConfig {
    pub method: Method,
    pub objectives: usize,
    /// Template; the reference point is maintained online during a run.
    pub scalarizer: ScalarizerSpec,
    pub weight_granularity: usize,
    pub generations: usize,
    pub expected_rank: f64,
    pub neighborhood_size: usize,
    pub mating_probability: f64,
    pub max_replacements: usize,
    pub seed: u64,
}

impl MethodConfig {
    pub fn new(method: Method, objectives: usize, weight_granularity: usize) -> Self {
        MethodConfig {
            method,
            objectives,
            scalarizer: ScalarizerSpec::linear(),
            weight_granularity,
            generations: 1,
            expected_rank: 10.0,
            neighborhood_size: 20,
            mating_probability: 0.9,
            max_replacements: 2,
            seed: 0,
        }
    }

    /// Number of weight vectors `K`.
    pub fn weight_count(&self) -> usize {
        lattice_size(self.objectives, self.weight_granularity)
    }

    /// `K + G·K`.
    pub fn total_iterations(&self) -> usize {
        self.weight_count() * (self.generations + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.objectives < 2 {
            return Err(Error::config("need at least 2 objectives"));
        }
        if self.weight_granularity < 1 {
            return Err(Error::config("weight granularity must be at least 1"));
        }
        if self.expected_rank.is_nan() || self.expected_rank < 1.0 {
            return Err(Error::config(format!(
                "expected rank must be >= 1, got {}",
                self.expected_rank
            )));
        }
        if self.neighborhood_size < 2 {
            return Err(Error::config("neighborhood size must be at least 2"));
        }
        if self.max_replacements < 1 {
            return Err(Error::config("max replacements must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.mating_probability) {
            return Err(Error::config("mating probability must lie in [0, 1]"));
        }
        self.scalarizer.validate_template()?;
        Ok(())
    }
}

/// Tournament size giving the requested expected rank: `clamp(round(3M / 2Er), 2, M)`.
pub fn tournament_size(archive_size: usize, expected_rank: f64) -> usize {
    let t = (3.0 * archive_size as f64 / (2.0 * expected_rank)).round() as usize;
    t.max(2).min(archive_size)
}

/// Draws `T` distinct archive members and returns the indices of the best
/// and second best under `score` (lower is better).
pub fn get_parents_tournament<S>(
    archive: &ParetoArchive<S>,
    score: impl Fn(&ObjectivePoint) -> f64,
    expected_rank: f64,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<(usize, usize)> {
    let m = archive.len();
    if m < 2 {
        return Err(Error::InsufficientPopulation { size: m });
    }
    let t = tournament_size(m, expected_rank);
    let mut best: Option<(f64, usize)> = None;
    let mut second: Option<(f64, usize)> = None;
    for idx in rand::seq::index::sample(rng, m, t) {
        let v = score(&archive.get(idx).point);
        if best.is_none_or(|(b, _)| v < b) {
            second = best;
            best = Some((v, idx));
        } else if second.is_none_or(|(s, _)| v < s) {
            second = Some((v, idx));
        }
    }
    Ok((best.unwrap().1, second.unwrap().1))
}

/// Where MOEA/D drew its parents from in one iteration; the same set is used
/// for the incumbent update.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatingScope {
    Neighborhood(usize),
    Global,
}

/// Decomposition state: uniform weights, their neighborhoods and one
/// incumbent per subproblem.
#[derive(Clone, Debug)]
pub struct MoeadState<S> {
    weights: Vec<WeightVector>,
    neighbors: Vec<Vec<usize>>,
    incumbents: Vec<ArchiveEntry<S>>,
}

impl<S: Clone> MoeadState<S> {
    /// Neighborhoods are the `N` nearest weight vectors by Euclidean distance
    /// (ties by index), so each contains its own index.
    pub fn new(weights: Vec<WeightVector>, neighborhood_size: usize) -> Self {
        let n = neighborhood_size.min(weights.len());
        let neighbors = (0..weights.len())
            .map(|i| {
                let mut order: Vec<(f64, usize)> = weights
                    .iter()
                    .enumerate()
                    .map(|(j, w)| (weights[i].distance(w), j))
                    .collect();
                order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                order.into_iter().take(n).map(|(_, j)| j).collect()
            })
            .collect();
        MoeadState {
            weights,
            neighbors,
            incumbents: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[WeightVector] {
        &self.weights
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn incumbents(&self) -> &[ArchiveEntry<S>] {
        &self.incumbents
    }

    pub fn incumbent(&self, i: usize) -> &ArchiveEntry<S> {
        &self.incumbents[i]
    }

    pub fn is_initialized(&self) -> bool {
        self.incumbents.len() == self.weights.len()
    }

    /// Appends the incumbent of the next subproblem during the initial phase.
    pub fn push_incumbent(&mut self, solution: S, point: ObjectivePoint) {
        assert!(self.incumbents.len() < self.weights.len());
        self.incumbents.push(ArchiveEntry { solution, point });
    }

    fn scope_len(&self, scope: MatingScope) -> usize {
        match scope {
            MatingScope::Neighborhood(i) => self.neighbors[i].len(),
            MatingScope::Global => self.weights.len(),
        }
    }

    fn scope_member(&self, scope: MatingScope, k: usize) -> usize {
        match scope {
            MatingScope::Neighborhood(i) => self.neighbors[i][k],
            MatingScope::Global => k,
        }
    }
}

/// With probability `δ` mates within `B(i)`, otherwise within all
/// subproblems. Returns two distinct subproblem indices and the scope used.
pub fn get_parents_neighborhood<S: Clone>(
    state: &MoeadState<S>,
    i: usize,
    mating_probability: f64,
    rng: &mut (impl RngCore + ?Sized),
) -> (usize, usize, MatingScope) {
    assert!(i < state.len(), "subproblem index out of range");
    let scope = if rng.random::<f64>() < mating_probability {
        MatingScope::Neighborhood(i)
    } else {
        MatingScope::Global
    };
    let len = state.scope_len(scope);
    assert!(len >= 2, "mating scope needs at least two members");
    let picks = rand::seq::index::sample(rng, len, 2);
    (
        state.scope_member(scope, picks.index(0)),
        state.scope_member(scope, picks.index(1)),
        scope,
    )
}

/// Visits the scope in random order and replaces incumbents the offspring
/// strictly beats under their own weight vector, stopping after
/// `max_replacements`. `value(j, z)` scores point `z` on subproblem `j`.
pub fn moead_update_with<S: Clone>(
    state: &mut MoeadState<S>,
    offspring: &S,
    point: &ObjectivePoint,
    scope: MatingScope,
    max_replacements: usize,
    value: impl Fn(usize, &ObjectivePoint) -> f64,
    rng: &mut (impl RngCore + ?Sized),
) -> usize {
    assert!(state.is_initialized(), "incumbents not initialized");
    let mut order: Vec<usize> = (0..state.scope_len(scope))
        .map(|k| state.scope_member(scope, k))
        .collect();
    order.shuffle(rng);
    let mut replaced = 0;
    for j in order {
        if replaced >= max_replacements {
            break;
        }
        if value(j, point) < value(j, &state.incumbents[j].point) {
            state.incumbents[j] = ArchiveEntry {
                solution: offspring.clone(),
                point: point.clone(),
            };
            replaced += 1;
        }
    }
    replaced
}

/// [`moead_update_with`] scoring raw points with `spec` (which must carry a
/// reference point unless linear).
pub fn moead_update<S: Clone>(
    state: &mut MoeadState<S>,
    offspring: &S,
    point: &ObjectivePoint,
    scope: MatingScope,
    spec: &ScalarizerSpec,
    max_replacements: usize,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<usize> {
    spec.validate()?;
    let weights = state.weights.clone();
    Ok(moead_update_with(
        state,
        offspring,
        point,
        scope,
        max_replacements,
        |j, z| scalarize(spec, &weights[j], z),
        rng,
    ))
}

/// Source of weight vectors for successive iterations.
#[derive(Clone, Debug)]
pub enum WeightSchedule {
    Random { objectives: usize },
    Cyclic { weights: Vec<WeightVector>, next: usize },
}

impl WeightSchedule {
    pub fn random(objectives: usize) -> Self {
        WeightSchedule::Random { objectives }
    }

    pub fn cyclic(weights: Vec<WeightVector>) -> Self {
        assert!(!weights.is_empty());
        WeightSchedule::Cyclic { weights, next: 0 }
    }

    /// Next weight vector, with its lattice index for cyclic schedules.
    /// After the last lattice vector the schedule wraps to the first.
    pub fn next_weight(&mut self, rng: &mut (impl RngCore + ?Sized)) -> (Option<usize>, WeightVector) {
        match self {
            WeightSchedule::Random { objectives } => (None, draw_random_weight(*objectives, rng)),
            WeightSchedule::Cyclic { weights, next } => {
                let idx = *next;
                *next = (idx + 1) % weights.len();
                (Some(idx), weights[idx].clone())
            }
        }
    }
}

/// Per-purpose random streams derived from one root seed. Each purpose owns
/// a fixed ChaCha stream id, so extra draws in one never shift another.
struct RunStreams {
    prepare: ChaCha8Rng,
    weights: ChaCha8Rng,
    construct: ChaCha8Rng,
    search: ChaCha8Rng,
    select: ChaCha8Rng,
    recombine: ChaCha8Rng,
    update: ChaCha8Rng,
}

impl RunStreams {
    fn new(seed: u64) -> Self {
        let stream = |id: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(id);
            rng
        };
        RunStreams {
            prepare: stream(1),
            weights: stream(2),
            construct: stream(3),
            search: stream(4),
            select: stream(5),
            recombine: stream(6),
            update: stream(7),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Initial,
    Main,
}

/// Snapshot passed to run observers after every iteration.
pub struct IterationInfo<'a, S> {
    pub phase: Phase,
    /// Zero-based index over the whole run.
    pub iteration: usize,
    pub archive: &'a ParetoArchive<S>,
    /// Archive indices of the parents, for tournament methods.
    pub archive_parents: Option<(usize, usize)>,
    pub replaced: usize,
}

#[derive(Clone, Debug)]
pub struct RunResult<S> {
    pub archive: ParetoArchive<S>,
    pub iteration_count: usize,
    pub local_search_runs: usize,
    pub recombinations: usize,
    pub moead_replacements: usize,
    pub wallclock: Duration,
    pub config: MethodConfig,
}

pub fn run_method<P: Problem>(
    config: &MethodConfig,
    problem: &mut P,
) -> Result<RunResult<P::Solution>> {
    run_method_observed(config, problem, |_| {})
}

/// Online ideal point: componentwise minimum of every evaluated point.
struct IdealPoint(Option<ObjectivePoint>);

impl IdealPoint {
    fn observe(&mut self, z: &ObjectivePoint) {
        match &mut self.0 {
            Some(ideal) => ideal.min_with(z),
            None => self.0 = Some(z.clone()),
        }
    }
}

fn bind_scalarizer<P: Problem>(
    problem: &P,
    template: &ScalarizerSpec,
    ideal: &IdealPoint,
    weights: WeightVector,
) -> Result<Scalarizer> {
    let mut spec = template.clone();
    if let Some(ideal) = &ideal.0 {
        spec.reference_point = Some(problem.normalize(ideal).into_owned());
    }
    Scalarizer::new(spec, weights)
}

/// Runs one method on one problem, calling `observer` after every iteration.
pub fn run_method_observed<P: Problem>(
    config: &MethodConfig,
    problem: &mut P,
    mut observer: impl FnMut(&IterationInfo<'_, P::Solution>),
) -> Result<RunResult<P::Solution>> {
    config.validate()?;
    if problem.num_objectives() != config.objectives {
        return Err(Error::config(format!(
            "config has {} objectives, problem has {}",
            config.objectives,
            problem.num_objectives()
        )));
    }
    let started = Instant::now();
    let j = config.objectives;
    let mut rngs = RunStreams::new(config.seed);
    problem.prepare(&mut rngs.prepare);

    let lattice = generate_uniform_weights(j, config.weight_granularity)?;
    let k = lattice.len();
    let mut schedule = if config.method.uses_uniform_weights() {
        WeightSchedule::cyclic(lattice.clone())
    } else {
        WeightSchedule::random(j)
    };
    let mut moead = (config.method == Method::Moead)
        .then(|| MoeadState::new(lattice, config.neighborhood_size));

    let mut archive = ParetoArchive::new(j);
    let mut ideal = IdealPoint(None);
    let mut initial = Vec::with_capacity(k);
    let mut local_search_runs = 0;
    let mut recombinations = 0;
    let mut moead_replacements = 0;

    for it in 0..k {
        let (_, weights) = schedule.next_weight(&mut rngs.weights);
        let x = problem.random_solution(&mut rngs.construct);
        ideal.observe(&problem.evaluate(&x));
        let s = bind_scalarizer(problem, &config.scalarizer, &ideal, weights)?;
        let x = problem.local_search(x, &s, &mut rngs.search);
        local_search_runs += 1;
        let z = problem.evaluate(&x);
        ideal.observe(&z);
        archive.update(x.clone(), z.clone());
        if let Some(state) = &mut moead {
            state.push_incumbent(x.clone(), z);
        }
        initial.push(x);
        observer(&IterationInfo {
            phase: Phase::Initial,
            iteration: it,
            archive: &archive,
            archive_parents: None,
            replaced: 0,
        });
    }
    if archive.is_empty() {
        return Err(Error::contract("archive empty after the initial phase"));
    }
    problem.begin_main_phase(&initial);
    drop(initial);

    let main_iterations = config.generations * k;
    for it in 0..main_iterations {
        let (index, weights) = schedule.next_weight(&mut rngs.weights);
        let mut archive_parents = None;
        let mut scope = None;
        let x = match config.method {
            Method::Momsls => problem.random_solution(&mut rngs.construct),
            Method::Mogls | Method::Umogls => {
                let s = bind_scalarizer(problem, &config.scalarizer, &ideal, weights.clone())?;
                let (a, b) = if archive.len() >= 2 {
                    get_parents_tournament(
                        &archive,
                        |p| s.value(&problem.normalize(p)),
                        config.expected_rank,
                        &mut rngs.select,
                    )?
                } else {
                    (0, 0)
                };
                archive_parents = Some((a, b));
                recombinations += 1;
                problem.recombine(
                    &archive.get(a).solution,
                    &archive.get(b).solution,
                    &mut rngs.recombine,
                )
            }
            Method::Moead => {
                let state = moead.as_ref().expect("moead state");
                let i = index.expect("cyclic schedule yields indices");
                let (a, b, sc) =
                    get_parents_neighborhood(state, i, config.mating_probability, &mut rngs.select);
                scope = Some(sc);
                recombinations += 1;
                problem.recombine(
                    &state.incumbent(a).solution,
                    &state.incumbent(b).solution,
                    &mut rngs.recombine,
                )
            }
        };
        ideal.observe(&problem.evaluate(&x));
        let s = bind_scalarizer(problem, &config.scalarizer, &ideal, weights)?;
        let x = problem.local_search(x, &s, &mut rngs.search);
        local_search_runs += 1;
        let z = problem.evaluate(&x);
        ideal.observe(&z);
        archive.update(x.clone(), z.clone());

        let mut replaced = 0;
        if let (Some(state), Some(scope)) = (&mut moead, scope) {
            let mut spec = config.scalarizer.clone();
            if let Some(ideal) = &ideal.0 {
                spec.reference_point = Some(problem.normalize(ideal).into_owned());
            }
            let weights: Vec<WeightVector> = state.weights().to_vec();
            let prob: &P = problem;
            replaced = moead_update_with(
                state,
                &x,
                &z,
                scope,
                config.max_replacements,
                |j, p| scalarize(&spec, &weights[j], &normalized(prob, p)),
                &mut rngs.update,
            );
            moead_replacements += replaced;
        }
        observer(&IterationInfo {
            phase: Phase::Main,
            iteration: k + it,
            archive: &archive,
            archive_parents,
            replaced,
        });
    }

    Ok(RunResult {
        archive,
        iteration_count: k + main_iterations,
        local_search_runs,
        recombinations,
        moead_replacements,
        wallclock: started.elapsed(),
        config: config.clone(),
    })
}

fn normalized<'a, P: Problem>(problem: &P, z: &'a ObjectivePoint) -> Cow<'a, ObjectivePoint> {
    problem.normalize(z)
}
