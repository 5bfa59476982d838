//! Scalarizing-function based multiobjective metaheuristics: MOMSLS, MOGLS,
//! UMOGLS and MOEA/D over a shared engine, with adapters for the
//! multiobjective TSP, the TSP with profits and set covering.

pub mod archive;
pub mod engine;
pub mod error;
pub mod harness;
pub mod indicators;
pub mod problems;
pub mod scalarizing;

pub use archive::{dominates, ArchiveEntry, ParetoArchive};
pub use engine::{run_method, run_method_observed, Method, MethodConfig, RunResult};
pub use error::{Error, Result};
pub use problems::Problem;
pub use scalarizing::{ObjectivePoint, Scalarizer, ScalarizerKind, ScalarizerSpec, WeightVector};
