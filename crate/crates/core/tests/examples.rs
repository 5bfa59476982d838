//! Every example must run to completion.

macro_rules! example {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(custom_problem, "custom_problem.rs");
example!(experiment, "experiment.rs");
example!(indicators, "indicators.rs");
example!(instance_files, "instance_files.rs");
example!(pareto_archive, "pareto_archive.rs");
example!(set_covering, "set_covering.rs");
example!(tsp_biobjective, "tsp_biobjective.rs");
example!(tsp_with_profits, "tsp_with_profits.rs");
example!(weight_vectors, "weight_vectors.rs");

#[test]
fn custom_problem_runs() {
    custom_problem::run_example().unwrap();
}

#[test]
fn experiment_runs() {
    experiment::run_example().unwrap();
}

#[test]
fn indicators_runs() {
    indicators::run_example().unwrap();
}

#[test]
fn instance_files_runs() {
    instance_files::run_example().unwrap();
}

#[test]
fn pareto_archive_runs() {
    pareto_archive::run_example().unwrap();
}

#[test]
fn set_covering_runs() {
    set_covering::run_example().unwrap();
}

#[test]
fn tsp_biobjective_runs() {
    tsp_biobjective::run_example().unwrap();
}

#[test]
fn tsp_with_profits_runs() {
    tsp_with_profits::run_example().unwrap();
}

#[test]
fn weight_vectors_runs() {
    weight_vectors::run_example().unwrap();
}
