// Length against collected profit: MOGLS with the mixed scalarizer on
// range-normalized objectives.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfmoea::harness::generate::{euclidean_points, random_profits};
use sfmoea::harness::presets::default_scalarizer;
use sfmoea::harness::ProblemKind;
use sfmoea::problems::tsp::euclidean_matrix;
use sfmoea::problems::tspwp::{TspwpInstance, TspwpProblem};
use sfmoea::{run_method, Method, MethodConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coords = euclidean_points(30, 1000.0, &mut rng);
    let profits = random_profits(30, (1, 100), &mut rng)?;
    let inst = TspwpInstance::new(30, euclidean_matrix(&coords), profits)?;

    let mut config = MethodConfig::new(Method::Mogls, 2, 30);
    config.generations = 4;
    config.scalarizer = default_scalarizer(ProblemKind::Tspwp);
    let mut problem = TspwpProblem::new(&inst);
    let result = run_method(&config, &mut problem)?;

    if let Some(r) = problem.ranges() {
        println!("estimated ranges: min {:?}, max {:?}", r.min(), r.max());
    }
    let mut front: Vec<_> = result.archive.entries().iter().collect();
    front.sort_by(|a, b| a.point[0].total_cmp(&b.point[0]));
    for e in front.iter().step_by((front.len() / 8).max(1)) {
        println!("length {:>6}  profit {:>5}  cities {:>2}", e.point[0], -e.point[1], e.solution.len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
