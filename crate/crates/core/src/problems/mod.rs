//! Problem adapters driven by the engine.

use std::borrow::Cow;

use rand::RngCore;

use crate::scalarizing::{ObjectivePoint, Scalarizer};

pub mod scp;
pub mod tsp;
pub mod tspwp;

/// Operations the engine needs from a combinatorial problem.
///
/// Scalarizers handed to [`Problem::local_search`] live in the adapter's
/// search space: points pass through [`Problem::normalize`] before being
/// scalarized. The archive always stores raw objective values.
pub trait Problem {
    type Solution: Clone;

    fn num_objectives(&self) -> usize;

    /// Per-run setup, called once before the initial phase.
    fn prepare(&mut self, _rng: &mut dyn RngCore) {}

    fn evaluate(&self, solution: &Self::Solution) -> ObjectivePoint;

    fn normalize<'a>(&self, z: &'a ObjectivePoint) -> Cow<'a, ObjectivePoint> {
        Cow::Borrowed(z)
    }

    fn random_solution(&self, rng: &mut dyn RngCore) -> Self::Solution;

    fn local_search(
        &self,
        solution: Self::Solution,
        scalarizer: &Scalarizer,
        rng: &mut dyn RngCore,
    ) -> Self::Solution;

    fn recombine(
        &self,
        first: &Self::Solution,
        second: &Self::Solution,
        rng: &mut dyn RngCore,
    ) -> Self::Solution;

    /// Called once with the locally optimized initial solutions.
    fn begin_main_phase(&mut self, _initial: &[Self::Solution]) {}
}

/// Strict-improvement threshold shared by the local searches. Objective data
/// are integers, so genuine improvements are far above this.
pub(crate) const IMPROVEMENT_EPS: f64 = 1e-9;

pub(crate) fn improves(candidate: f64, current: f64) -> bool {
    candidate < current - IMPROVEMENT_EPS * current.abs().max(1.0)
}
