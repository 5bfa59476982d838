// Hypervolume, the R measure and a paired Wilcoxon test on toy data.

use sfmoea::indicators::{hypervolume, r_measure, r_weights, wilcoxon_signed_rank};
use sfmoea::ObjectivePoint;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let front = vec![
        ObjectivePoint::new(vec![1.0, 3.0])?,
        ObjectivePoint::new(vec![2.0, 2.0])?,
        ObjectivePoint::new(vec![3.0, 1.0])?,
    ];
    let hv = hypervolume(&front, &ObjectivePoint::new(vec![4.0, 4.0])?)?;
    println!("hypervolume w.r.t. (4, 4): {hv}");

    let weights = r_weights(2)?;
    let r = r_measure(&front, &weights, &ObjectivePoint::new(vec![0.0, 0.0])?)?;
    println!("R over {} weights w.r.t. (0, 0): {r:.4}", weights.len());

    // Ten paired replications where the first method always loses.
    let a = [10.2, 11.0, 10.8, 12.1, 10.5, 11.7, 10.9, 11.3, 12.0, 10.4];
    let b = [9.1, 10.2, 10.1, 10.0, 9.9, 10.6, 10.3, 9.7, 10.8, 10.0];
    let test = wilcoxon_signed_rank(&a, &b, 0.05)?;
    println!(
        "Wilcoxon: W+ = {}, p = {:.5} (exact: {}), significant at 5%: {}",
        test.statistic, test.p_value, test.exact, test.significant
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
