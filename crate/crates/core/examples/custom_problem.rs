// Plugging a new problem into the engine: a bi-objective 0/1 assignment
// where every bit trades cost in one objective against the other. The
// observer tracks archive growth.

use rand::{Rng, RngCore};

use sfmoea::engine::{run_method_observed, Phase};
use sfmoea::{Method, MethodConfig, ObjectivePoint, Problem, Scalarizer};

struct TradeOff {
    /// Per-bit costs paid in objective 0 when the bit is set, objective 1 otherwise.
    costs: Vec<(f64, f64)>,
}

impl Problem for TradeOff {
    type Solution = Vec<bool>;

    fn num_objectives(&self) -> usize {
        2
    }

    fn evaluate(&self, x: &Vec<bool>) -> ObjectivePoint {
        let mut z = [0.0, 0.0];
        for (&bit, &(a, b)) in x.iter().zip(&self.costs) {
            if bit {
                z[0] += a;
            } else {
                z[1] += b;
            }
        }
        ObjectivePoint::from(z.to_vec())
    }

    fn random_solution(&self, rng: &mut dyn RngCore) -> Vec<bool> {
        (0..self.costs.len()).map(|_| rng.random()).collect()
    }

    // First-improvement bit flips.
    fn local_search(&self, mut x: Vec<bool>, s: &Scalarizer, _rng: &mut dyn RngCore) -> Vec<bool> {
        let mut current = s.value(&self.evaluate(&x));
        let mut improved = true;
        while improved {
            improved = false;
            for i in 0..x.len() {
                x[i] = !x[i];
                let v = s.value(&self.evaluate(&x));
                if v < current - 1e-12 {
                    current = v;
                    improved = true;
                } else {
                    x[i] = !x[i];
                }
            }
        }
        x
    }

    fn recombine(&self, a: &Vec<bool>, b: &Vec<bool>, rng: &mut dyn RngCore) -> Vec<bool> {
        a.iter().zip(b).map(|(&x, &y)| if rng.random() { x } else { y }).collect()
    }
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let costs = (1..=16).map(|i| (i as f64, (17 - i) as f64 * 1.5)).collect();
    let mut problem = TradeOff { costs };
    let mut config = MethodConfig::new(Method::Umogls, 2, 15);
    config.generations = 3;
    config.scalarizer = sfmoea::ScalarizerSpec::chebycheff(None);

    let mut sizes = Vec::new();
    let result = run_method_observed(&config, &mut problem, |info| {
        if info.phase == Phase::Main && info.iteration % 16 == 0 {
            sizes.push(info.archive.len());
        }
    })?;
    println!("archive size every 16 main iterations: {sizes:?}");
    println!("final front ({} points):", result.archive.len());
    print!("{}", result.archive.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
