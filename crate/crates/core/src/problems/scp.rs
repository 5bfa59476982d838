//! Multiobjective set covering.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, RngCore};

use super::{improves, Problem};
use crate::error::{Error, Result};
use crate::scalarizing::{ObjectivePoint, Scalarizer};

/// `rows × cols` covering matrix with `J` positive cost vectors.
#[derive(Clone, Debug)]
pub struct ScpInstance {
    rows: usize,
    cols: usize,
    /// Covering columns of each row, ascending.
    row_cover: Vec<Vec<usize>>,
    /// Rows covered by each column, ascending.
    col_rows: Vec<Vec<usize>>,
    costs: Vec<Vec<i64>>,
}

impl ScpInstance {
    pub fn new(rows: usize, cols: usize, mut row_cover: Vec<Vec<usize>>, costs: Vec<Vec<i64>>) -> Result<Self> {
        if row_cover.len() != rows {
            return Err(Error::contract(format!(
                "expected {rows} coverage lists, got {}",
                row_cover.len()
            )));
        }
        if costs.is_empty() {
            return Err(Error::contract("set covering needs at least one cost vector"));
        }
        for (j, c) in costs.iter().enumerate() {
            if c.len() != cols {
                return Err(Error::contract(format!(
                    "cost vector {j} has {} entries, expected {cols}",
                    c.len()
                )));
            }
            if let Some(i) = c.iter().position(|&v| v <= 0) {
                return Err(Error::contract(format!("column {i} has nonpositive cost in objective {j}")));
            }
        }
        let mut col_rows = vec![Vec::new(); cols];
        for (r, list) in row_cover.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(Error::contract(format!("row {r} is not covered by any column")));
            }
            for &c in list.iter() {
                if c >= cols {
                    return Err(Error::contract(format!("row {r} references column {c} of {cols}")));
                }
                col_rows[c].push(r);
            }
        }
        Ok(ScpInstance {
            rows,
            cols,
            row_cover,
            col_rows,
            costs,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_objectives(&self) -> usize {
        self.costs.len()
    }

    pub fn covering(&self, row: usize) -> &[usize] {
        &self.row_cover[row]
    }

    pub fn covered_by(&self, col: usize) -> &[usize] {
        &self.col_rows[col]
    }

    pub fn cost(&self, objective: usize, col: usize) -> i64 {
        self.costs[objective][col]
    }

    pub fn costs(&self) -> &[Vec<i64>] {
        &self.costs
    }
}

/// A set of selected columns, stored ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoverSolution(Vec<usize>);

impl CoverSolution {
    /// Validates feasibility against `inst`.
    pub fn new(inst: &ScpInstance, mut columns: Vec<usize>) -> Result<Self> {
        columns.sort_unstable();
        columns.dedup();
        if let Some(&c) = columns.iter().find(|&&c| c >= inst.cols) {
            return Err(Error::contract(format!("column {c} out of range")));
        }
        let sol = CoverSolution(columns);
        if let Some(row) = first_uncovered(inst, &sol.0) {
            return Err(Error::contract(format!("row {row} is uncovered")));
        }
        Ok(sol)
    }

    pub fn columns(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, col: usize) -> bool {
        self.0.binary_search(&col).is_ok()
    }
}

fn first_uncovered(inst: &ScpInstance, columns: &[usize]) -> Option<usize> {
    let mut covered = vec![false; inst.rows];
    for &c in columns {
        for &r in &inst.col_rows[c] {
            covered[r] = true;
        }
    }
    covered.iter().position(|&c| !c)
}

pub fn is_feasible(inst: &ScpInstance, columns: &[usize]) -> bool {
    first_uncovered(inst, columns).is_none()
}

fn cost_vector(inst: &ScpInstance, columns: &[usize]) -> Vec<f64> {
    (0..inst.num_objectives())
        .map(|j| columns.iter().map(|&c| inst.costs[j][c]).sum::<i64>() as f64)
        .collect()
}

/// Per-objective cost sums; errors on an infeasible selection.
pub fn scp_evaluate(inst: &ScpInstance, sol: &CoverSolution) -> Result<ObjectivePoint> {
    if let Some(row) = first_uncovered(inst, &sol.0) {
        return Err(Error::contract(format!("infeasible solution: row {row} uncovered")));
    }
    Ok(ObjectivePoint::from(cost_vector(inst, &sol.0)))
}

/// Row cover counts, selection flags and integer cost sums of a column set,
/// with scratch space for greedy completion.
struct CoverState<'a> {
    inst: &'a ScpInstance,
    count: Vec<u32>,
    selected: Vec<bool>,
    z: Vec<i64>,
    stamp: Vec<usize>,
    round: usize,
    trial: Vec<f64>,
}

impl<'a> CoverState<'a> {
    fn new(inst: &'a ScpInstance, columns: &[usize]) -> Self {
        let mut state = CoverState {
            inst,
            count: vec![0; inst.rows],
            selected: vec![false; inst.cols],
            z: vec![0; inst.num_objectives()],
            stamp: vec![usize::MAX; inst.cols],
            round: 0,
            trial: vec![0.0; inst.num_objectives()],
        };
        for &c in columns {
            state.add(c);
        }
        state
    }

    fn add(&mut self, col: usize) {
        self.selected[col] = true;
        for &r in &self.inst.col_rows[col] {
            self.count[r] += 1;
        }
        for (j, zj) in self.z.iter_mut().enumerate() {
            *zj += self.inst.costs[j][col];
        }
    }

    fn remove(&mut self, col: usize) {
        self.selected[col] = false;
        for &r in &self.inst.col_rows[col] {
            self.count[r] -= 1;
        }
        for (j, zj) in self.z.iter_mut().enumerate() {
            *zj -= self.inst.costs[j][col];
        }
    }

    fn value(&mut self, scalarizer: &Scalarizer) -> f64 {
        for (t, &zj) in self.trial.iter_mut().zip(&self.z) {
            *t = zj as f64;
        }
        scalarizer.value(&self.trial)
    }

    /// Greedily covers `uncovered` (ascending), pushing inserted columns to
    /// `added`. On failure the inserted columns stay selected.
    fn complete(
        &mut self,
        uncovered: &mut Vec<usize>,
        scalarizer: &Scalarizer,
        excluded: Option<usize>,
        added: &mut Vec<usize>,
    ) -> Result<()> {
        let inst = self.inst;
        while !uncovered.is_empty() {
            let current = self.value(scalarizer);
            let mut best: Option<(f64, usize)> = None;
            for &row in uncovered.iter() {
                for &col in &inst.row_cover[row] {
                    if self.selected[col] || Some(col) == excluded || self.stamp[col] == self.round {
                        continue;
                    }
                    self.stamp[col] = self.round;
                    let fresh = inst.col_rows[col].iter().filter(|&&r| self.count[r] == 0).count();
                    for (j, t) in self.trial.iter_mut().enumerate() {
                        *t = (self.z[j] + inst.costs[j][col]) as f64;
                    }
                    let ratio = (scalarizer.value(&self.trial) - current) / fresh as f64;
                    let better = match best {
                        None => true,
                        Some((b, bc)) => ratio < b || (ratio == b && col < bc),
                    };
                    if better {
                        best = Some((ratio, col));
                    }
                }
            }
            self.round += 1;
            let Some((_, col)) = best else {
                return Err(Error::RepairImpossible { row: uncovered[0] });
            };
            self.add(col);
            added.push(col);
            uncovered.retain(|&r| self.count[r] == 0);
        }
        Ok(())
    }
}

/// Completes `partial` to a cover. Each step inserts the column with the
/// lowest (scalarizing value increase) / (newly covered rows); ties go to the
/// lowest index. `excluded` is never inserted.
pub fn greedy_repair(
    inst: &ScpInstance,
    partial: &[usize],
    scalarizer: &Scalarizer,
    excluded: Option<usize>,
) -> Result<CoverSolution> {
    let mut state = CoverState::new(inst, partial);
    let mut uncovered: Vec<usize> = (0..inst.rows).filter(|&r| state.count[r] == 0).collect();
    state.complete(&mut uncovered, scalarizer, excluded, &mut Vec::new())?;
    Ok(CoverSolution((0..inst.cols).filter(|&c| state.selected[c]).collect()))
}

/// Best removal-plus-repair neighbor of `sol`, if it strictly improves.
fn best_neighbor(inst: &ScpInstance, sol: &CoverSolution, scalarizer: &Scalarizer) -> Option<(CoverSolution, f64)> {
    let mut state = CoverState::new(inst, &sol.0);
    let mut best_value = state.value(scalarizer);
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut uncovered = Vec::new();
    let mut added = Vec::new();
    for &removed in &sol.0 {
        state.remove(removed);
        uncovered.clear();
        uncovered.extend(inst.col_rows[removed].iter().copied().filter(|&r| state.count[r] == 0));
        added.clear();
        if state.complete(&mut uncovered, scalarizer, Some(removed), &mut added).is_ok() {
            let v = state.value(scalarizer);
            if improves(v, best_value) {
                best_value = v;
                best = Some((removed, added.clone()));
            }
        }
        for &c in &added {
            state.remove(c);
        }
        state.add(removed);
    }
    best.map(|(removed, added)| {
        let mut cols: Vec<usize> = sol.0.iter().copied().filter(|&c| c != removed).chain(added).collect();
        cols.sort_unstable();
        (CoverSolution(cols), best_value)
    })
}

/// Steepest descent over the removal-plus-repair neighborhood.
pub fn scp_local_search(inst: &ScpInstance, sol: CoverSolution, scalarizer: &Scalarizer) -> CoverSolution {
    scp_local_search_traced(inst, sol, scalarizer, &mut |_, _| {})
}

pub fn scp_local_search_traced(
    inst: &ScpInstance,
    mut sol: CoverSolution,
    scalarizer: &Scalarizer,
    on_move: &mut dyn FnMut(&CoverSolution, f64),
) -> CoverSolution {
    while let Some((next, v)) = best_neighbor(inst, &sol, scalarizer) {
        sol = next;
        on_move(&sol, v);
    }
    sol
}

pub fn has_improving_move(inst: &ScpInstance, sol: &CoverSolution, scalarizer: &Scalarizer) -> bool {
    best_neighbor(inst, sol, scalarizer).is_some()
}

/// First stage of recombination: common columns plus each single-parent
/// column with probability 1/2. May be infeasible.
pub fn recombine_columns(
    inst: &ScpInstance,
    first: &CoverSolution,
    second: &CoverSolution,
    rng: &mut (impl RngCore + ?Sized),
) -> Vec<usize> {
    let mut count = vec![0u8; inst.cols];
    for &c in first.0.iter().chain(&second.0) {
        count[c] += 1;
    }
    (0..inst.cols)
        .filter(|&c| match count[c] {
            2 => true,
            1 => rng.random::<bool>(),
            _ => false,
        })
        .collect()
}

/// Covers each still-uncovered row, in index order, with a uniformly drawn
/// covering column.
fn cover_remaining(inst: &ScpInstance, mut columns: Vec<usize>, rows: &[usize], rng: &mut (impl RngCore + ?Sized)) -> CoverSolution {
    let mut covered = vec![false; inst.rows];
    for &c in &columns {
        for &r in &inst.col_rows[c] {
            covered[r] = true;
        }
    }
    for &row in rows {
        if covered[row] {
            continue;
        }
        let &col = inst.row_cover[row].choose(rng).expect("rows are covered");
        columns.push(col);
        for &r in &inst.col_rows[col] {
            covered[r] = true;
        }
    }
    columns.sort_unstable();
    columns.dedup();
    CoverSolution(columns)
}

pub fn scp_recombine(
    inst: &ScpInstance,
    first: &CoverSolution,
    second: &CoverSolution,
    rng: &mut (impl RngCore + ?Sized),
) -> CoverSolution {
    let columns = recombine_columns(inst, first, second, rng);
    let rows: Vec<usize> = (0..inst.rows).collect();
    cover_remaining(inst, columns, &rows, rng)
}

/// Visits rows in random order and covers each uncovered one with a
/// uniformly drawn covering column.
pub fn random_cover(inst: &ScpInstance, rng: &mut (impl RngCore + ?Sized)) -> CoverSolution {
    let mut rows: Vec<usize> = (0..inst.rows).collect();
    rows.shuffle(rng);
    cover_remaining(inst, Vec::new(), &rows, rng)
}

#[derive(Clone, Debug)]
pub struct ScpProblem<'a> {
    inst: &'a ScpInstance,
}

impl<'a> ScpProblem<'a> {
    pub fn new(inst: &'a ScpInstance) -> Self {
        ScpProblem { inst }
    }
}

impl Problem for ScpProblem<'_> {
    type Solution = CoverSolution;

    fn num_objectives(&self) -> usize {
        self.inst.num_objectives()
    }

    fn evaluate(&self, solution: &CoverSolution) -> ObjectivePoint {
        ObjectivePoint::from(cost_vector(self.inst, &solution.0))
    }

    fn random_solution(&self, rng: &mut dyn RngCore) -> CoverSolution {
        random_cover(self.inst, rng)
    }

    fn local_search(&self, solution: CoverSolution, scalarizer: &Scalarizer, _rng: &mut dyn RngCore) -> CoverSolution {
        scp_local_search(self.inst, solution, scalarizer)
    }

    fn recombine(&self, first: &CoverSolution, second: &CoverSolution, rng: &mut dyn RngCore) -> CoverSolution {
        scp_recombine(self.inst, first, second, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalarizing::WeightVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn linear(w: &[f64]) -> Scalarizer {
        Scalarizer::linear(WeightVector::new(w.to_vec()).unwrap())
    }

    fn random_instance(rows: usize, cols: usize, density: f64, seed: u64) -> ScpInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = (0..rows)
            .map(|_| {
                let mut l: Vec<usize> = (0..cols).filter(|_| rng.random::<f64>() < density).collect();
                if l.is_empty() {
                    l.push(rng.random_range(0..cols));
                }
                l
            })
            .collect();
        let costs = (0..2)
            .map(|_| (0..cols).map(|_| rng.random_range(1..=100)).collect())
            .collect();
        ScpInstance::new(rows, cols, cover, costs).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let inst = random_instance(10, 20, 0.2, 1);
        let all = CoverSolution::new(&inst, (0..20).collect()).unwrap();
        let z = scp_evaluate(&inst, &all).unwrap();
        for j in 0..2 {
            assert_eq!(z[j], inst.costs()[j].iter().sum::<i64>() as f64);
        }
        let single = ScpInstance::new(3, 1, vec![vec![0]; 3], vec![vec![3], vec![7]]).unwrap();
        let s = CoverSolution::new(&single, vec![0]).unwrap();
        assert_eq!(scp_evaluate(&single, &s).unwrap().values(), &[3.0, 7.0]);
        assert!(scp_evaluate(&single, &CoverSolution(vec![])).is_err());
    }

    #[test]
    fn evaluate_matches_resummation() {
        let inst = random_instance(10, 20, 0.2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let sol = random_cover(&inst, &mut rng);
            let z = scp_evaluate(&inst, &sol).unwrap();
            for j in 0..2 {
                let mut total = 0;
                for c in 0..20 {
                    if sol.contains(c) {
                        total += inst.cost(j, c);
                    }
                }
                assert_eq!(z[j], total as f64);
            }
        }
    }

    #[test]
    fn instance_validation() {
        assert!(ScpInstance::new(2, 2, vec![vec![0], vec![]], vec![vec![1, 1]]).is_err());
        assert!(ScpInstance::new(1, 2, vec![vec![0]], vec![vec![1, 0]]).is_err());
        assert!(ScpInstance::new(1, 2, vec![vec![2]], vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn greedy_repair_examples() {
        let inst = random_instance(10, 20, 0.2, 4);
        let s = linear(&[0.5, 0.5]);
        let full: Vec<usize> = (0..20).collect();
        assert_eq!(greedy_repair(&inst, &full, &s, None).unwrap().columns(), &full[..]);

        let one_row = ScpInstance::new(1, 2, vec![vec![0, 1]], vec![vec![5, 4]]).unwrap();
        let s1 = linear(&[1.0]);
        assert_eq!(greedy_repair(&one_row, &[], &s1, None).unwrap().columns(), &[1]);
        assert_eq!(greedy_repair(&one_row, &[], &s1, Some(1)).unwrap().columns(), &[0]);

        let forced = ScpInstance::new(2, 2, vec![vec![0], vec![1]], vec![vec![1, 1]]).unwrap();
        match greedy_repair(&forced, &[1], &s1, Some(0)) {
            Err(Error::RepairImpossible { row }) => assert_eq!(row, 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn greedy_repair_always_feasible() {
        let inst = random_instance(10, 20, 0.2, 5);
        let s = linear(&[0.3, 0.7]);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let partial: Vec<usize> = (0..20).filter(|_| rng.random::<f64>() < 0.2).collect();
            let excluded = rng.random_range(0..20);
            let partial: Vec<usize> = partial.into_iter().filter(|&c| c != excluded).collect();
            match greedy_repair(&inst, &partial, &s, Some(excluded)) {
                Ok(sol) => {
                    assert!(is_feasible(&inst, sol.columns()));
                    assert!(!sol.contains(excluded));
                }
                Err(Error::RepairImpossible { row }) => {
                    assert_eq!(inst.covering(row), &[excluded]);
                }
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn redundant_expensive_column_removed() {
        // Columns 0 and 1 split the rows; column 2 covers everything but is
        // expensive; columns 3 and 4 are cheap singletons that do not help.
        let inst = ScpInstance::new(
            4,
            5,
            vec![vec![0, 2, 3], vec![0, 2], vec![1, 2], vec![1, 2, 4]],
            vec![vec![1, 1, 100, 5, 5], vec![1, 1, 100, 5, 5]],
        )
        .unwrap();
        let s = linear(&[0.5, 0.5]);
        let start = CoverSolution::new(&inst, vec![0, 1, 2]).unwrap();
        let mut steps = Vec::new();
        let out = scp_local_search_traced(&inst, start, &s, &mut |sol, _| steps.push(sol.clone()));
        assert_eq!(out.columns(), &[0, 1]);
        assert_eq!(steps.len(), 1, "one removal, nothing inserted");

        let mut best = (f64::INFINITY, 0u32);
        for mask in 1u32..32 {
            let cols: Vec<usize> = (0..5).filter(|&c| mask >> c & 1 == 1).collect();
            if is_feasible(&inst, &cols) {
                let v = s.value(&cost_vector(&inst, &cols));
                if v < best.0 {
                    best = (v, mask);
                }
            }
        }
        assert_eq!(best.1, 0b00011);
    }

    #[test]
    fn optimal_minimal_cover_is_fixed_point() {
        let inst = ScpInstance::new(3, 3, vec![vec![0, 2], vec![0, 1], vec![1, 2]], vec![vec![1, 1, 1]]).unwrap();
        let s = linear(&[1.0]);
        let sol = CoverSolution::new(&inst, vec![0, 1]).unwrap();
        assert_eq!(scp_local_search(&inst, sol.clone(), &s), sol);
    }

    #[test]
    fn local_search_reaches_enumerated_local_optima() {
        let inst = random_instance(8, 10, 0.3, 7);
        let s = linear(&[0.4, 0.6]);
        let mut local_optima = Vec::new();
        let mut feasible = Vec::new();
        for mask in 1u32..(1 << 10) {
            let cols: Vec<usize> = (0..10).filter(|&c| mask >> c & 1 == 1).collect();
            if !is_feasible(&inst, &cols) {
                continue;
            }
            let sol = CoverSolution(cols.clone());
            let value = s.value(&cost_vector(&inst, &cols));
            let improving = cols.iter().any(|&k| {
                let partial: Vec<usize> = cols.iter().copied().filter(|&c| c != k).collect();
                greedy_repair(&inst, &partial, &s, Some(k))
                    .map(|n| improves(s.value(&cost_vector(&inst, n.columns())), value))
                    .unwrap_or(false)
            });
            if !improving {
                local_optima.push(sol.clone());
            }
            feasible.push(sol);
        }
        for start in feasible {
            let mut trace = Vec::new();
            let out = scp_local_search_traced(&inst, start, &s, &mut |sol, v| {
                assert!(is_feasible(&inst, sol.columns()));
                trace.push(v);
            });
            assert!(trace.windows(2).all(|w| w[1] < w[0]));
            assert!(local_optima.contains(&out));
        }
    }

    #[test]
    fn recombine_examples() {
        let inst = random_instance(10, 20, 0.2, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = random_cover(&inst, &mut rng);
        assert_eq!(scp_recombine(&inst, &p, &p, &mut rng), p);

        let q = random_cover(&inst, &mut rng);
        let common: Vec<usize> = p.columns().iter().copied().filter(|&c| q.contains(c)).collect();
        for _ in 0..100 {
            let off = scp_recombine(&inst, &p, &q, &mut rng);
            assert!(is_feasible(&inst, off.columns()));
            assert!(common.iter().all(|&c| off.contains(c)));
        }
    }

    #[test]
    fn recombine_single_parent_columns_half_the_time() {
        let inst = random_instance(10, 20, 0.2, 10);
        let p1 = CoverSolution((0..15).collect());
        let p2 = CoverSolution((5..20).collect());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let trials = 10_000;
        let mut hits = [0usize; 20];
        for _ in 0..trials {
            for c in recombine_columns(&inst, &p1, &p2, &mut rng) {
                hits[c] += 1;
            }
        }
        for (c, &h) in hits.iter().enumerate() {
            let (a, b) = (p1.contains(c), p2.contains(c));
            let f = h as f64 / trials as f64;
            if a && b {
                assert_eq!(h, trials);
            } else if a || b {
                assert!((f - 0.5).abs() < 0.02, "column {c}: {f}");
            }
        }
    }

    #[test]
    fn random_cover_examples() {
        let forced = ScpInstance::new(3, 1, vec![vec![0]; 3], vec![vec![2]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        assert_eq!(random_cover(&forced, &mut rng).columns(), &[0]);
        let inst = random_instance(30, 40, 0.1, 13);
        for _ in 0..50 {
            assert!(is_feasible(&inst, random_cover(&inst, &mut rng).columns()));
        }
        let a = random_cover(&inst, &mut ChaCha8Rng::seed_from_u64(14));
        let b = random_cover(&inst, &mut ChaCha8Rng::seed_from_u64(14));
        assert_eq!(a, b);
    }
}
