// All four methods on a random two-objective Euclidean TSP, scored with a
// shared reference.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfmoea::harness::generate::euclidean_points;
use sfmoea::indicators::IndicatorConfig;
use sfmoea::problems::tsp::{TspInstance, TspProblem};
use sfmoea::{run_method, Method, MethodConfig, ScalarizerSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let coords: Vec<Vec<(f64, f64)>> = (1..=2)
        .map(|s| euclidean_points(40, 3000.0, &mut ChaCha8Rng::seed_from_u64(s)))
        .collect();
    let inst = TspInstance::from_coordinates(&coords)?;

    let mut fronts = Vec::new();
    for method in Method::ALL {
        let mut config = MethodConfig::new(method, 2, 20);
        config.generations = 5;
        config.scalarizer = ScalarizerSpec::linear();
        let result = run_method(&config, &mut TspProblem::new(&inst))?;
        println!(
            "{:<7} {:>3} points after {} iterations",
            method.name(),
            result.archive.len(),
            result.iteration_count
        );
        fronts.push((method, result.archive.points().cloned().collect::<Vec<_>>()));
    }

    let sets: Vec<&[_]> = fronts.iter().map(|(_, p)| p.as_slice()).collect();
    let ind = IndicatorConfig::from_union(&sets)?;
    for (method, points) in &fronts {
        println!("{:<7} R = {:.1}  HV = {:.4e}", method.name(), ind.r_measure(points)?, ind.hypervolume(points)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
