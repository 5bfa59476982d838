// Bi-objective set covering: greedy repair, local search and a short
// MOEA/D run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfmoea::harness::generate::random_scp;
use sfmoea::problems::scp::{greedy_repair, random_cover, scp_evaluate, scp_local_search, ScpProblem};
use sfmoea::{run_method, Method, MethodConfig, Scalarizer, WeightVector};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let inst = random_scp(60, 300, 2, 0.05, (1, 100), &mut rng)?;
    let s = Scalarizer::linear(WeightVector::new(vec![0.5, 0.5])?);

    let greedy = greedy_repair(&inst, &[], &s, None)?;
    println!("greedy from empty: {} columns, costs {}", greedy.len(), scp_evaluate(&inst, &greedy)?);

    let start = random_cover(&inst, &mut rng);
    let start_z = scp_evaluate(&inst, &start)?;
    let improved = scp_local_search(&inst, start, &s);
    println!("random cover {start_z} -> local optimum {}", scp_evaluate(&inst, &improved)?);

    let mut config = MethodConfig::new(Method::Moead, 2, 30);
    config.generations = 4;
    let result = run_method(&config, &mut ScpProblem::new(&inst))?;
    println!(
        "MOEA/D: {} nondominated covers, {} incumbent replacements",
        result.archive.len(),
        result.moead_replacements
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
