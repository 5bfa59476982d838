//! Replicated runs of several methods on several instances.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::presets::expected_rank_for;
use super::report::{
    comparisons_csv, compare_methods, render_report, results_csv, sort_records, summarize, summary_csv, timings_csv,
    CellSummary, PairwiseComparison,
};
pub use super::report::ResultRecord;
use super::{InstanceSpec, LoadedInstance, RunOutput};
use crate::archive::points_to_csv;
use crate::engine::{Method, MethodConfig};
use crate::error::{Error, Result};
use crate::indicators::IndicatorConfig;
use crate::scalarizing::ObjectivePoint;

pub const DEFAULT_REPLICATIONS: usize = 10;
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Clone, Debug)]
pub struct ExperimentPlan {
    pub instances: Vec<InstanceSpec>,
    pub methods: Vec<Method>,
    /// Shared by every method; the `method` and `seed` fields are replaced per run.
    pub template: MethodConfig,
    pub replications: usize,
    /// Run `k` uses seed `seed_base + k`.
    pub seed_base: u64,
    /// Use the per-instance expected-rank presets where the instance name matches.
    pub instance_expected_rank: bool,
    pub workers: usize,
    pub alpha: f64,
}

impl ExperimentPlan {
    pub fn new(instances: Vec<InstanceSpec>, methods: Vec<Method>, template: MethodConfig) -> Self {
        ExperimentPlan {
            instances,
            methods,
            template,
            replications: DEFAULT_REPLICATIONS,
            seed_base: 0,
            instance_expected_rank: false,
            workers: 1,
            alpha: DEFAULT_ALPHA,
        }
    }

    /// Configuration of one run.
    pub fn config_for(&self, instance: &InstanceSpec, method: Method, replication: usize) -> MethodConfig {
        let mut c = self.template.clone();
        c.method = method;
        c.seed = self.seed_base + replication as u64;
        if self.instance_expected_rank {
            c.expected_rank = expected_rank_for(&instance.name);
        }
        c
    }

    /// Checks the plan and loads every instance.
    pub fn validate(&self) -> Result<Vec<LoadedInstance>> {
        if self.replications < 1 {
            return Err(Error::config("replications must be at least 1"));
        }
        if self.methods.is_empty() || self.instances.is_empty() {
            return Err(Error::config("plan needs at least one method and one instance"));
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return Err(Error::config(format!("method {m} listed twice")));
            }
        }
        for (i, inst) in self.instances.iter().enumerate() {
            if self.instances[..i].iter().any(|o| o.name == inst.name) {
                return Err(Error::config(format!("instance name `{}` used twice", inst.name)));
            }
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.workers < 1 {
            return Err(Error::config("workers must be at least 1"));
        }
        self.template.validate()?;
        // Fairness: every method gets the same weight count, generation
        // count and hence the same number of iterations.
        let budgets: Vec<usize> = self
            .methods
            .iter()
            .map(|&m| self.config_for(&self.instances[0], m, 0).total_iterations())
            .collect();
        if budgets.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::config(format!("methods have unequal budgets {budgets:?}")));
        }
        self.instances
            .iter()
            .map(|spec| {
                let loaded = spec.load()?;
                if loaded.num_objectives() != self.template.objectives {
                    return Err(Error::config(format!(
                        "instance `{}` has {} objectives, the plan expects {}",
                        spec.name,
                        loaded.num_objectives(),
                        self.template.objectives
                    )));
                }
                Ok(loaded)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunFailure {
    pub method: String,
    pub instance: String,
    pub seed: u64,
    pub message: String,
}

/// Final archive of one run, keyed like its record.
#[derive(Clone, Debug)]
pub struct RunArchive {
    pub method: String,
    pub instance: String,
    pub seed: u64,
    pub points: Vec<ObjectivePoint>,
}

impl RunArchive {
    pub fn file_name(&self) -> String {
        archive_file_name(&self.instance, &self.method, self.seed)
    }
}

/// `<instance>_<method>_seed<k>.csv`, with `/` in method names replaced.
pub fn archive_file_name(instance: &str, method: &str, seed: u64) -> String {
    format!("{instance}_{}_seed{seed}.csv", method.replace('/', "-"))
}

#[derive(Clone, Debug)]
pub struct InstanceReferences {
    pub instance: String,
    pub indicators: IndicatorConfig,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub records: Vec<ResultRecord>,
    pub archives: Vec<RunArchive>,
    pub failures: Vec<RunFailure>,
    pub summaries: Vec<CellSummary>,
    pub comparisons: Vec<PairwiseComparison>,
    pub references: Vec<InstanceReferences>,
    pub replications: usize,
    pub alpha: f64,
}

struct Job {
    instance: usize,
    method: Method,
    config: MethodConfig,
}

/// Runs every (instance, method, replication) job on `plan.workers`
/// threads, scores the archives against union reference points per
/// instance, and aggregates the results.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    let loaded = plan.validate()?;
    let mut jobs = Vec::new();
    for (i, spec) in plan.instances.iter().enumerate() {
        for &method in &plan.methods {
            for rep in 0..plan.replications {
                jobs.push(Job {
                    instance: i,
                    method,
                    config: plan.config_for(spec, method, rep),
                });
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<Result<RunOutput>> =
        pool.install(|| jobs.par_iter().map(|j| loaded[j.instance].run(&j.config)).collect());

    let mut records = Vec::new();
    let mut archives = Vec::new();
    let mut failures = Vec::new();
    let mut references = Vec::new();
    for (i, spec) in plan.instances.iter().enumerate() {
        let mine: Vec<(&Job, &RunOutput)> = jobs
            .iter()
            .zip(&outcomes)
            .filter(|(j, _)| j.instance == i)
            .filter_map(|(j, o)| match o {
                Ok(out) => Some((j, out)),
                Err(e) => {
                    failures.push(RunFailure {
                        method: j.method.name().to_string(),
                        instance: spec.name.clone(),
                        seed: j.config.seed,
                        message: e.to_string(),
                    });
                    None
                }
            })
            .collect();
        if mine.is_empty() {
            continue;
        }
        let sets: Vec<&[ObjectivePoint]> = mine.iter().map(|(_, o)| o.points.as_slice()).collect();
        let indicators = IndicatorConfig::from_union(&sets)?;
        for (job, out) in &mine {
            let scored = indicators
                .r_measure(&out.points)
                .and_then(|r| Ok((r, indicators.hypervolume(&out.points)?)));
            let (r, hv) = match scored {
                Ok(v) => v,
                Err(e) => {
                    failures.push(RunFailure {
                        method: job.method.name().to_string(),
                        instance: spec.name.clone(),
                        seed: job.config.seed,
                        message: e.to_string(),
                    });
                    continue;
                }
            };
            records.push(ResultRecord {
                method: job.method.name().to_string(),
                problem: spec.kind.name().to_string(),
                instance: spec.name.clone(),
                seed: job.config.seed,
                iteration_count: out.iteration_count,
                r,
                hv,
                wallclock_ms: out.wallclock.as_millis() as u64,
            });
            archives.push(RunArchive {
                method: job.method.name().to_string(),
                instance: spec.name.clone(),
                seed: job.config.seed,
                points: out.points.clone(),
            });
        }
        references.push(InstanceReferences {
            instance: spec.name.clone(),
            indicators,
        });
    }
    sort_records(&mut records);
    archives.sort_by(|a, b| (&a.method, &a.instance, a.seed).cmp(&(&b.method, &b.instance, b.seed)));
    let summaries = summarize(&records);
    let comparisons = compare_methods(&records, plan.alpha)?;
    Ok(ExperimentReport {
        records,
        archives,
        failures,
        summaries,
        comparisons,
        references,
        replications: plan.replications,
        alpha: plan.alpha,
    })
}

impl ExperimentReport {
    pub fn report_text(&self) -> String {
        let mut text = render_report(&self.summaries, &self.comparisons, Some(self.replications), self.alpha);
        if !self.references.is_empty() {
            text.push_str("\nReference points (union of all archives per instance)\n");
            for r in &self.references {
                text.push_str(&format!(
                    "{}: z* = {}, HV reference = {}, R weights = {}\n",
                    r.instance,
                    r.indicators.reference_r,
                    r.indicators.reference_hv,
                    r.indicators.r_weights.len()
                ));
            }
        }
        if !self.failures.is_empty() {
            text.push_str("\nFailed runs\n");
            for f in &self.failures {
                text.push_str(&format!("{} {} seed {}: {}\n", f.instance, f.method, f.seed, f.message));
            }
        }
        text
    }

    /// Writes `results.csv`, `timings.csv`, `report.txt`, `report.csv`,
    /// `comparisons.csv` and one archive CSV per run under `archives/`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let archive_dir = dir.join("archives");
        fs::create_dir_all(&archive_dir).map_err(|e| Error::io(&archive_dir, e))?;
        let mut written = Vec::new();
        let mut put = |path: PathBuf, text: String| -> Result<()> {
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            written.push(path);
            Ok(())
        };
        put(dir.join("results.csv"), results_csv(&self.records))?;
        put(dir.join("timings.csv"), timings_csv(&self.records))?;
        put(dir.join("report.txt"), self.report_text())?;
        put(dir.join("report.csv"), summary_csv(&self.summaries))?;
        put(dir.join("comparisons.csv"), comparisons_csv(&self.comparisons, &self.summaries))?;
        for a in &self.archives {
            let dim = a.points.first().map_or(0, ObjectivePoint::dim);
            let points: Vec<&ObjectivePoint> = a.points.iter().collect();
            put(archive_dir.join(a.file_name()), points_to_csv(dim, &points))?;
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::formats::write_tsp_coordinates;
    use crate::harness::generate::euclidean_points;
    use crate::harness::ProblemKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tiny_plan(dir: &Path, methods: Vec<Method>, replications: usize) -> ExperimentPlan {
        let mut files = Vec::new();
        for k in 0..2 {
            let path = dir.join(format!("obj{k}.txt"));
            let pts = euclidean_points(12, 1000.0, &mut ChaCha8Rng::seed_from_u64(k));
            write_tsp_coordinates(&path, &pts).unwrap();
            files.push(path);
        }
        let spec = InstanceSpec::new(ProblemKind::Tsp, files).named("tiny");
        let mut template = MethodConfig::new(Method::Mogls, 2, 6);
        template.generations = 2;
        template.neighborhood_size = 3;
        let mut plan = ExperimentPlan::new(vec![spec], methods, template);
        plan.replications = replications;
        plan
    }

    #[test]
    fn degenerate_plan_has_no_tests() {
        let dir = tempfile::tempdir().unwrap();
        let plan = tiny_plan(dir.path(), vec![Method::Momsls], 1);
        let rep = run_experiment(&plan).unwrap();
        assert_eq!(rep.records.len(), 1);
        assert!(rep.comparisons.is_empty());
        assert_eq!(rep.records[0].iteration_count, 7 * 3);
    }

    #[test]
    fn four_methods_ten_replications() {
        let dir = tempfile::tempdir().unwrap();
        let plan = tiny_plan(dir.path(), Method::ALL.to_vec(), 10);
        let rep = run_experiment(&plan).unwrap();
        assert_eq!(rep.records.len(), 40);
        assert_eq!(rep.comparisons.len(), 12, "6 pairs per indicator");
        assert!(rep.failures.is_empty());
        let out = dir.path().join("out");
        rep.write(&out).unwrap();
        let first = fs::read(out.join("results.csv")).unwrap();
        let again = run_experiment(&plan).unwrap();
        let out2 = dir.path().join("out2");
        again.write(&out2).unwrap();
        assert_eq!(first, fs::read(out2.join("results.csv")).unwrap());
        for a in &rep.archives {
            let back = crate::archive::read_points_csv(&out.join("archives").join(a.file_name())).unwrap();
            assert_eq!(back, a.points);
        }
    }

    #[test]
    fn plan_validation() {
        let dir = tempfile::tempdir().unwrap();
        let mut plan = tiny_plan(dir.path(), vec![Method::Mogls, Method::Mogls], 1);
        assert!(plan.validate().is_err());
        plan.methods = vec![Method::Mogls];
        plan.replications = 0;
        assert!(plan.validate().is_err());
        plan.replications = 1;
        plan.template.objectives = 3;
        assert!(plan.validate().is_err());
        plan.template.objectives = 2;
        plan.instances[0].files.push(dir.path().join("missing.txt"));
        assert!(plan.validate().is_err());
    }
}
