// A small replicated experiment: instance files on disk, four methods,
// per-instance union references, a summary table and Wilcoxon verdicts.

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfmoea::harness::formats::write_tsp_coordinates;
use sfmoea::harness::generate::{cluster_points, euclidean_points};
use sfmoea::harness::{run_experiment, ExperimentPlan, InstanceSpec, ParameterPreset, ProblemKind};
use sfmoea::Method;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("sfmoea-experiment-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let files: Vec<PathBuf> = ["euclidA", "clusterB"]
        .iter()
        .map(|name| dir.join(format!("{name}.tsp")))
        .collect();
    write_tsp_coordinates(&files[0], &euclidean_points(40, 3000.0, &mut rng))?;
    write_tsp_coordinates(&files[1], &cluster_points(40, 4, 3000.0, &mut rng)?.points)?;

    let mut template = ParameterPreset::by_name("mstsp2")?.config(Method::Mogls);
    template.weight_granularity = 15;
    template.generations = 3;
    let instance = InstanceSpec::new(ProblemKind::Tsp, files).named("mixedAB40");
    let mut plan = ExperimentPlan::new(vec![instance], Method::ALL.to_vec(), template);
    plan.replications = 5;

    let report = run_experiment(&plan)?;
    print!("{}", report.report_text());
    let written = report.write(&dir.join("out"))?;
    println!("wrote {} files under {}", written.len(), dir.join("out").display());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
