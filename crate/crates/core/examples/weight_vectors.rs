// Uniform lattice weights, random simplex weights and the three
// scalarizing functions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfmoea::scalarizing::{draw_random_weight, generate_uniform_weights, lattice_size};
use sfmoea::{ObjectivePoint, Scalarizer, ScalarizerSpec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for (j, h) in [(2, 100), (2, 300), (3, 81)] {
        println!("J={j} H={h}: {} weight vectors", lattice_size(j, h));
    }
    let lattice = generate_uniform_weights(3, 4)?;
    println!("J=3 H=4 lattice head: {:?}", lattice[..4].iter().map(|w| w.lambdas().to_vec()).collect::<Vec<_>>());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let w = draw_random_weight(2, &mut rng);
    let reference = ObjectivePoint::new(vec![0.0, 0.0])?;
    let z = [30.0, 10.0];
    for spec in [
        ScalarizerSpec::linear(),
        ScalarizerSpec::chebycheff(Some(reference.clone())),
        ScalarizerSpec::mixed_default().with_reference(reference),
    ] {
        let s = Scalarizer::new(spec, w.clone())?;
        println!("{:<10} at {:?} with {:?}: {:.3}", s.kind().name(), z, w.lambdas(), s.value(&z));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
