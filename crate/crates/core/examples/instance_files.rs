// Instance generators and the plain-text formats: write, read back, load.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sfmoea::harness::formats::{
    load_scp, load_tsp, load_tspwp, write_profits, write_scp, write_tsp_coordinates,
};
use sfmoea::harness::generate::{cluster_points, euclidean_points, random_profits, random_scp};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("sfmoea-instances-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let a = dir.join("a.txt");
    let b = dir.join("b.txt");
    write_tsp_coordinates(&a, &euclidean_points(25, 3000.0, &mut rng))?;
    let clustered = cluster_points(25, 3, 3000.0, &mut rng)?;
    write_tsp_coordinates(&b, &clustered.points)?;
    let tsp = load_tsp(&[&a, &b])?;
    println!(
        "tsp: {} cities, {} objectives, d(0,1) = {} / {} (cluster sigma {})",
        tsp.n(),
        tsp.num_objectives(),
        tsp.cost(0, 0, 1),
        tsp.cost(1, 0, 1),
        clustered.sigma
    );

    let p = dir.join("profits.txt");
    write_profits(&p, &random_profits(25, (1, 100), &mut rng)?)?;
    let wp = load_tspwp(&a, &p)?;
    println!("tspwp: {} cities, total profit {}", wp.n(), wp.total_profit());

    let s = dir.join("scp.txt");
    write_scp(&s, &random_scp(20, 80, 2, 0.1, (1, 100), &mut rng)?)?;
    let scp = load_scp(&s)?;
    println!("scp: {} rows x {} columns, {} objectives", scp.rows(), scp.cols(), scp.num_objectives());
    println!("{}", std::fs::read_to_string(&s)?.lines().take(3).collect::<Vec<_>>().join("\n"));

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
