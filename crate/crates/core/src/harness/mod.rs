//! Instance I/O, generators, parameter presets and experiment orchestration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use crate::engine::{run_method, MethodConfig, RunResult};
use crate::error::{Error, Result};
use crate::problems::scp::{ScpInstance, ScpProblem};
use crate::problems::tsp::{TspInstance, TspProblem};
use crate::problems::tspwp::{TspwpInstance, TspwpProblem};
use crate::scalarizing::ObjectivePoint;

pub mod experiment;
pub mod formats;
pub mod generate;
pub mod presets;
pub mod report;

pub use experiment::{run_experiment, ExperimentPlan, ExperimentReport, ResultRecord};
pub use presets::ParameterPreset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemKind {
    Tsp,
    Tspwp,
    Scp,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Tsp => "tsp",
            ProblemKind::Tspwp => "tspwp",
            ProblemKind::Scp => "scp",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tsp" | "mstsp" => Ok(ProblemKind::Tsp),
            "tspwp" => Ok(ProblemKind::Tspwp),
            "scp" | "moscp" => Ok(ProblemKind::Scp),
            other => Err(Error::config(format!("unknown problem `{other}` (tsp, tspwp, scp)"))),
        }
    }
}

/// An instance on disk: one coordinate file per objective for TSP, a
/// coordinate and a profit file for TSPWP, a single file for SCP.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub name: String,
    pub kind: ProblemKind,
    pub files: Vec<PathBuf>,
}

impl InstanceSpec {
    /// Names the instance after its first file's stem.
    pub fn new(kind: ProblemKind, files: Vec<PathBuf>) -> Self {
        let name = files
            .first()
            .and_then(|p| p.file_stem())
            .map_or_else(|| "instance".to_string(), |s| s.to_string_lossy().into_owned());
        InstanceSpec { name, kind, files }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn load(&self) -> Result<LoadedInstance> {
        let files: Vec<&Path> = self.files.iter().map(PathBuf::as_path).collect();
        match (self.kind, files.as_slice()) {
            (ProblemKind::Tsp, fs) if !fs.is_empty() => Ok(LoadedInstance::Tsp(formats::load_tsp(fs)?)),
            (ProblemKind::Tspwp, [coords, profits]) => {
                Ok(LoadedInstance::Tspwp(formats::load_tspwp(coords, profits)?))
            }
            (ProblemKind::Scp, [file]) => Ok(LoadedInstance::Scp(formats::load_scp(file)?)),
            (kind, fs) => Err(Error::config(format!(
                "{kind} instance `{}` given {} file(s): tsp takes one per objective, tspwp a coordinate and a profit file, scp one file",
                self.name,
                fs.len()
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum LoadedInstance {
    Tsp(TspInstance),
    Tspwp(TspwpInstance),
    Scp(ScpInstance),
}

impl LoadedInstance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            LoadedInstance::Tsp(_) => ProblemKind::Tsp,
            LoadedInstance::Tspwp(_) => ProblemKind::Tspwp,
            LoadedInstance::Scp(_) => ProblemKind::Scp,
        }
    }

    pub fn num_objectives(&self) -> usize {
        match self {
            LoadedInstance::Tsp(i) => i.num_objectives(),
            LoadedInstance::Tspwp(_) => 2,
            LoadedInstance::Scp(i) => i.num_objectives(),
        }
    }

    /// Runs one method and keeps only the archive's objective points.
    pub fn run(&self, config: &MethodConfig) -> Result<RunOutput> {
        match self {
            LoadedInstance::Tsp(i) => run_method(config, &mut TspProblem::new(i)).map(RunOutput::from),
            LoadedInstance::Tspwp(i) => run_method(config, &mut TspwpProblem::new(i)).map(RunOutput::from),
            LoadedInstance::Scp(i) => run_method(config, &mut ScpProblem::new(i)).map(RunOutput::from),
        }
    }
}

/// Problem-independent summary of a run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub points: Vec<ObjectivePoint>,
    pub iteration_count: usize,
    pub local_search_runs: usize,
    pub recombinations: usize,
    pub wallclock: Duration,
}

impl<S> From<RunResult<S>> for RunOutput {
    fn from(r: RunResult<S>) -> Self {
        RunOutput {
            iteration_count: r.iteration_count,
            local_search_runs: r.local_search_runs,
            recombinations: r.recombinations,
            wallclock: r.wallclock,
            points: r.archive.into_entries().into_iter().map(|e| e.point).collect(),
        }
    }
}

/// Rounds to `digits` significant digits and prints the shortest decimal
/// form of the rounded value.
pub fn format_significant(x: f64, digits: usize) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("scientific notation parses");
    format!("{rounded}")
}

/// Significant digits used for indicator values in output files.
pub const INDICATOR_DIGITS: usize = 6;
