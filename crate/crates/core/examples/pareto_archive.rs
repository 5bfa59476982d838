// Feeding points through a Pareto archive and saving it as CSV.

use sfmoea::{ObjectivePoint, ParetoArchive};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut archive = ParetoArchive::new(2);
    let candidates = [[5.0, 5.0], [4.0, 6.0], [5.0, 5.0], [3.0, 3.0], [2.0, 8.0], [6.0, 1.0], [7.0, 7.0]];
    for (i, z) in candidates.iter().enumerate() {
        let changed = archive.update(i, ObjectivePoint::new(z.to_vec())?);
        println!("{z:?}: {}", if changed { "kept" } else { "rejected" });
    }
    archive.check_invariants()?;
    print!("{}", archive.to_csv());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
