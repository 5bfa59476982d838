//! Random instance generators reproducing the benchmark instance classes.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::problems::scp::ScpInstance;

pub const DEFAULT_COORDINATE_RANGE: f64 = 3000.0;
pub const DEFAULT_CLUSTERS: usize = 6;
/// Cluster spread as a fraction of the coordinate range.
pub const CLUSTER_SIGMA_FRACTION: f64 = 1.0 / 40.0;
pub const DEFAULT_PROFIT_RANGE: (i64, i64) = (1, 100);
pub const DEFAULT_SCP_COST_RANGE: (i64, i64) = (1, 100);
/// Redraws of a row left empty by the density draw before giving up.
pub const SCP_ROW_RETRIES: usize = 1000;

/// Integer points uniform in `[0, range]²`.
pub fn euclidean_points(n: usize, range: f64, rng: &mut (impl RngCore + ?Sized)) -> Vec<(f64, f64)> {
    let hi = range.floor() as i64;
    (0..n)
        .map(|_| (rng.random_range(0..=hi) as f64, rng.random_range(0..=hi) as f64))
        .collect()
}

#[derive(Clone, Debug)]
pub struct ClusteredPoints {
    pub points: Vec<(f64, f64)>,
    pub centers: Vec<(f64, f64)>,
    /// Cluster index of each point.
    pub membership: Vec<usize>,
    pub sigma: f64,
}

/// Cluster centers uniform in the square; each point picks a cluster
/// uniformly and is drawn from an isotropic normal around its center,
/// rounded to integers and clamped to the square.
pub fn cluster_points(
    n: usize,
    clusters: usize,
    range: f64,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<ClusteredPoints> {
    if clusters == 0 {
        return Err(Error::Generation("cluster count must be positive".into()));
    }
    let sigma = range * CLUSTER_SIGMA_FRACTION;
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::Generation(e.to_string()))?;
    let centers = euclidean_points(clusters, range, rng);
    let mut points = Vec::with_capacity(n);
    let mut membership = Vec::with_capacity(n);
    for _ in 0..n {
        let k = rng.random_range(0..clusters);
        let (cx, cy) = centers[k];
        let x = (cx + normal.sample(rng)).round().clamp(0.0, range);
        let y = (cy + normal.sample(rng)).round().clamp(0.0, range);
        points.push((x, y));
        membership.push(k);
    }
    Ok(ClusteredPoints {
        points,
        centers,
        membership,
        sigma,
    })
}

pub fn random_profits(n: usize, range: (i64, i64), rng: &mut (impl RngCore + ?Sized)) -> Result<Vec<i64>> {
    if range.0 < 0 || range.1 < range.0 {
        return Err(Error::Generation(format!("invalid profit range {range:?}")));
    }
    Ok((0..n).map(|_| rng.random_range(range.0..=range.1)).collect())
}

/// Each cell is set with probability `density`; rows left empty are redrawn.
pub fn random_scp(
    rows: usize,
    cols: usize,
    objectives: usize,
    density: f64,
    cost_range: (i64, i64),
    rng: &mut (impl RngCore + ?Sized),
) -> Result<ScpInstance> {
    if rows == 0 || cols == 0 || objectives == 0 {
        return Err(Error::Generation("rows, columns and objectives must be positive".into()));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::Generation(format!("density must lie in (0, 1], got {density}")));
    }
    if cost_range.0 < 1 || cost_range.1 < cost_range.0 {
        return Err(Error::Generation(format!("invalid cost range {cost_range:?}")));
    }
    let mut cover = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut attempt = 0;
        let list = loop {
            let list: Vec<usize> = (0..cols).filter(|_| rng.random::<f64>() < density).collect();
            if !list.is_empty() {
                break list;
            }
            attempt += 1;
            if attempt >= SCP_ROW_RETRIES {
                return Err(Error::Generation(format!(
                    "row {r} stayed uncovered after {SCP_ROW_RETRIES} draws; density {density} is too low"
                )));
            }
        };
        cover.push(list);
    }
    let costs = (0..objectives)
        .map(|_| (0..cols).map(|_| rng.random_range(cost_range.0..=cost_range.1)).collect())
        .collect();
    ScpInstance::new(rows, cols, cover, costs)
}

/// Three-objective instance: coverage and the first two objectives of
/// `first`, plus the first objective of `second` as the third.
pub fn combine_scp3(first: &ScpInstance, second: &ScpInstance) -> Result<ScpInstance> {
    if first.cols() != second.cols() {
        return Err(Error::Generation(format!(
            "column counts differ: {} vs {}",
            first.cols(),
            second.cols()
        )));
    }
    if first.num_objectives() < 2 {
        return Err(Error::Generation("first instance needs two objectives".into()));
    }
    let cover = (0..first.rows()).map(|r| first.covering(r).to_vec()).collect();
    let costs = vec![
        first.costs()[0].clone(),
        first.costs()[1].clone(),
        second.costs()[0].clone(),
    ];
    ScpInstance::new(first.rows(), first.cols(), cover, costs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn euclidean_deterministic_and_in_range() {
        let a = euclidean_points(100, 3000.0, &mut ChaCha8Rng::seed_from_u64(1));
        let b = euclidean_points(100, 3000.0, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        assert!(a.iter().all(|&(x, y)| (0.0..=3000.0).contains(&x) && (0.0..=3000.0).contains(&y)));
        assert!(a.iter().all(|&(x, y)| x.fract() == 0.0 && y.fract() == 0.0));
    }

    #[test]
    fn cluster_points_stay_near_centers() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let c = cluster_points(300, 6, 3000.0, &mut rng).unwrap();
        assert_eq!(c.sigma, 75.0);
        // Per-coordinate 3σ bound (plus rounding); the normal law gives
        // 99.46% of points inside.
        let inside = c
            .points
            .iter()
            .zip(&c.membership)
            .filter(|(&(x, y), &k)| {
                let (cx, cy) = c.centers[k];
                (x - cx).abs() <= 3.0 * c.sigma + 0.5 && (y - cy).abs() <= 3.0 * c.sigma + 0.5
            })
            .count();
        assert!(inside as f64 >= 0.99 * 300.0, "{inside}");
        assert!(cluster_points(10, 0, 3000.0, &mut rng).is_err());
    }

    #[test]
    fn profits_in_range() {
        let p = random_profits(500, (1, 100), &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert!(p.iter().all(|v| (1..=100).contains(v)));
        assert!(random_profits(5, (5, 1), &mut ChaCha8Rng::seed_from_u64(3)).is_err());
    }

    #[test]
    fn scp_generation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let inst = random_scp(50, 100, 2, 0.02, (1, 100), &mut rng).unwrap();
        assert_eq!(inst.num_objectives(), 2);
        assert!((0..50).all(|r| !inst.covering(r).is_empty()));
        let err = random_scp(5, 10, 2, 1e-9, (1, 100), &mut rng);
        assert!(matches!(err, Err(Error::Generation(_))));

        let other = random_scp(50, 100, 2, 0.02, (1, 100), &mut rng).unwrap();
        let three = combine_scp3(&inst, &other).unwrap();
        assert_eq!(three.costs()[0], inst.costs()[0]);
        assert_eq!(three.costs()[1], inst.costs()[1]);
        assert_eq!(three.costs()[2], other.costs()[0]);
        assert_eq!(three.covering(7), inst.covering(7));
    }
}
