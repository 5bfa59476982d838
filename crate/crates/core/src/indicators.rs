//! Quality indicators (R measure, hypervolume) and the paired Wilcoxon
//! signed-rank test.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{check_dims, Error, Result};
use crate::scalarizing::{generate_uniform_weights, granularity_at_least, ObjectivePoint, WeightVector};

/// Lattice granularity of the R-measure weight set: 1000 weights for two
/// objectives, 7626 (the smallest lattice with at least 7562) for three.
pub fn r_weight_granularity(objectives: usize) -> usize {
    match objectives {
        2 => 999,
        3 => 122,
        j => granularity_at_least(j, 1000),
    }
}

pub fn r_weights(objectives: usize) -> Result<Vec<WeightVector>> {
    generate_uniform_weights(objectives, r_weight_granularity(objectives))
}

/// Mean over `weights` of the best weighted Chebycheff value reached by
/// `points` relative to `reference`. Lower is better.
pub fn r_measure(points: &[ObjectivePoint], weights: &[WeightVector], reference: &ObjectivePoint) -> Result<f64> {
    if points.is_empty() || weights.is_empty() {
        return Err(Error::contract("R measure needs nonempty point and weight sets"));
    }
    let j = reference.dim();
    for p in points {
        check_dims(j, p.dim())?;
    }
    let mut total = 0.0;
    for w in weights {
        check_dims(j, w.dim())?;
        let best = points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(reference.iter())
                    .zip(w.iter())
                    .map(|((z, r), l)| if *l == 0.0 { 0.0 } else { l * (z - r) })
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        total += best;
    }
    Ok(total / weights.len() as f64)
}

/// Exact hypervolume dominated by `points` and bounded by `reference`, for
/// two or three objectives. Every point must be strictly below the
/// reference in each objective.
pub fn hypervolume(points: &[ObjectivePoint], reference: &ObjectivePoint) -> Result<f64> {
    let j = reference.dim();
    if !(2..=3).contains(&j) {
        return Err(Error::contract(format!("hypervolume supports 2 or 3 objectives, got {j}")));
    }
    for p in points {
        check_dims(j, p.dim())?;
        if p.iter().zip(reference.iter()).any(|(z, r)| z >= r) {
            return Err(Error::contract(format!(
                "point {p} does not dominate the reference point {reference}"
            )));
        }
    }
    let pts: Vec<&[f64]> = points.iter().map(|p| p.values()).collect();
    Ok(match j {
        2 => hv2(pts.iter().map(|p| (p[0], p[1])).collect(), (reference[0], reference[1])),
        _ => hv3(pts, reference.values()),
    })
}

fn hv2(mut pts: Vec<(f64, f64)>, r: (f64, f64)) -> f64 {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut area = 0.0;
    let mut floor = r.1;
    for (x, y) in pts {
        if y < floor {
            area += (r.0 - x) * (floor - y);
            floor = y;
        }
    }
    area
}

/// Slices along the third objective; each slab has a 2-D cross-section.
fn hv3(mut pts: Vec<&[f64]>, r: &[f64]) -> f64 {
    pts.sort_by(|a, b| a[2].partial_cmp(&b[2]).expect("finite"));
    let mut volume = 0.0;
    let mut active: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        active.push((p[0], p[1]));
        let top = pts.get(i + 1).map_or(r[2], |q| q[2]);
        if top > p[2] {
            volume += hv2(active.clone(), (r[0], r[1])) * (top - p[2]);
        }
    }
    volume
}

/// Reference points shared by every archive compared on one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorConfig {
    pub r_weights: Vec<WeightVector>,
    /// Ideal point for the R measure.
    pub reference_r: ObjectivePoint,
    /// Anti-ideal point for the hypervolume.
    pub reference_hv: ObjectivePoint,
}

/// Relative padding of the hypervolume reference point beyond the union maximum.
pub const HV_REFERENCE_PADDING: f64 = 0.01;

impl IndicatorConfig {
    /// Union policy: `z*` is the componentwise minimum over all sets, the
    /// hypervolume reference is the componentwise maximum plus 1% of the span.
    pub fn from_union(sets: &[&[ObjectivePoint]]) -> Result<Self> {
        let mut all = sets.iter().flat_map(|s| s.iter());
        let first = all
            .next()
            .ok_or_else(|| Error::contract("no points to derive reference points from"))?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for p in all {
            check_dims(lo.dim(), p.dim())?;
            lo.min_with(p);
            hi.max_with(p);
        }
        let padded: Vec<f64> = lo
            .iter()
            .zip(hi.iter())
            .map(|(&a, &b)| {
                let span = b - a;
                let pad = if span > 0.0 { HV_REFERENCE_PADDING * span } else { HV_REFERENCE_PADDING * b.abs().max(1.0) };
                b + pad
            })
            .collect();
        Ok(IndicatorConfig {
            r_weights: r_weights(lo.dim())?,
            reference_r: lo,
            reference_hv: ObjectivePoint::new(padded)?,
        })
    }

    pub fn explicit(reference_r: ObjectivePoint, reference_hv: ObjectivePoint, r_weights: Vec<WeightVector>) -> Result<Self> {
        check_dims(reference_r.dim(), reference_hv.dim())?;
        Ok(IndicatorConfig {
            r_weights,
            reference_r,
            reference_hv,
        })
    }

    pub fn r_measure(&self, points: &[ObjectivePoint]) -> Result<f64> {
        r_measure(points, &self.r_weights, &self.reference_r)
    }

    pub fn hypervolume(&self, points: &[ObjectivePoint]) -> Result<f64> {
        hypervolume(points, &self.reference_hv)
    }
}

/// Largest reduced sample for which the exact null distribution is used.
pub const WILCOXON_EXACT_MAX_N: usize = 20;
pub const WILCOXON_MIN_N: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct WilcoxonResult {
    /// Sum of the ranks of positive differences `a − b`.
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
    /// Pairs left after dropping zero differences.
    pub effective_n: usize,
    pub exact: bool,
}

/// Ranks of `|d|` (1-based) with ties averaged.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite"));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut k = i;
        while k + 1 < idx.len() && values[idx[k + 1]] == values[idx[i]] {
            k += 1;
        }
        let avg = (i + k) as f64 / 2.0 + 1.0;
        for &t in &idx[i..=k] {
            ranks[t] = avg;
        }
        i = k + 1;
    }
    ranks
}

/// Two-sided paired Wilcoxon signed-rank test; significant iff `p ≤ alpha`.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64], alpha: f64) -> Result<WilcoxonResult> {
    check_dims(a.len(), b.len())?;
    if a.len() < WILCOXON_MIN_N {
        return Err(Error::contract(format!(
            "Wilcoxon test needs at least {WILCOXON_MIN_N} pairs, got {}",
            a.len()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::contract(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            statistic: 0.0,
            p_value: 1.0,
            significant: false,
            effective_n: 0,
            exact: true,
        });
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&abs);
    let w_plus: f64 = ranks.iter().zip(&diffs).filter(|(_, d)| **d > 0.0).map(|(r, _)| r).sum();

    let (p_value, exact) = if n <= WILCOXON_EXACT_MAX_N {
        (exact_p_value(&ranks, w_plus), true)
    } else {
        (normal_p_value(&ranks, &abs, w_plus), false)
    };
    Ok(WilcoxonResult {
        statistic: w_plus,
        p_value,
        significant: p_value <= alpha,
        effective_n: n,
        exact,
    })
}

/// Exact null distribution of `W+` by dynamic programming over doubled
/// ranks (tie averages are half-integers).
fn exact_p_value(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0.0f64; total + 1];
    counts[0] = 1.0;
    for &r in &doubled {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let all = 2f64.powi(ranks.len() as i32);
    let w = (2.0 * w_plus).round() as usize;
    let lower: f64 = counts[..=w].iter().sum::<f64>() / all;
    let upper: f64 = counts[w..].iter().sum::<f64>() / all;
    (2.0 * lower.min(upper)).min(1.0)
}

/// Normal approximation with tie and continuity corrections.
fn normal_p_value(ranks: &[f64], abs: &[f64], w_plus: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut sorted = abs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut k = i;
        while k + 1 < sorted.len() && sorted[k + 1] == sorted[i] {
            k += 1;
        }
        let t = (k - i + 1) as f64;
        tie_term += t * t * t - t;
        i = k + 1;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    (2.0 * (1.0 - normal.cdf(z))).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(v: &[f64]) -> ObjectivePoint {
        ObjectivePoint::new(v.to_vec()).unwrap()
    }

    fn w(v: &[f64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn r_measure_examples() {
        let zr = pt(&[0.0, 0.0]);
        let weights = r_weights(2).unwrap();
        assert_eq!(weights.len(), 1000);
        assert_eq!(r_measure(std::slice::from_ref(&zr), &weights, &zr).unwrap(), 0.0);
        let half = [w(&[0.5, 0.5])];
        let two = [pt(&[0.0, 10.0]), pt(&[10.0, 0.0])];
        assert_eq!(r_measure(&two, &half, &zr).unwrap(), 5.0);
        let three = [pt(&[0.0, 10.0]), pt(&[10.0, 0.0]), pt(&[1.0, 1.0])];
        assert_eq!(r_measure(&three, &half, &zr).unwrap(), 0.5);
        assert!(r_measure(&[], &half, &zr).is_err());
        assert!(r_measure(&two, &[], &zr).is_err());
        assert_eq!(r_weights(3).unwrap().len(), 7626);
    }

    #[test]
    fn hypervolume_examples() {
        assert_eq!(hypervolume(&[pt(&[0.0, 0.0])], &pt(&[1.0, 1.0])).unwrap(), 1.0);
        let stair = [pt(&[1.0, 3.0]), pt(&[2.0, 2.0]), pt(&[3.0, 1.0])];
        assert_eq!(hypervolume(&stair, &pt(&[4.0, 4.0])).unwrap(), 6.0);
        assert!(hypervolume(&[pt(&[5.0, 0.0])], &pt(&[4.0, 4.0])).is_err());
        assert!(hypervolume(&[pt(&[0.0; 4])], &pt(&[1.0; 4])).is_err());
        assert_eq!(hypervolume(&[], &pt(&[1.0, 1.0])).unwrap(), 0.0);
        assert_eq!(hypervolume(&[pt(&[0.0, 0.0, 0.0])], &pt(&[2.0, 3.0, 4.0])).unwrap(), 24.0);
    }

    /// Counts unit grid cells dominated by an integer point set.
    fn grid_hv(points: &[ObjectivePoint], r: &[i64]) -> f64 {
        let j = r.len();
        let total: i64 = r.iter().product();
        let mut count = 0;
        for cell in 0..total {
            let mut rem = cell;
            let corner: Vec<f64> = (0..j)
                .map(|k| {
                    let c = rem % r[k];
                    rem /= r[k];
                    c as f64
                })
                .collect();
            if points.iter().any(|p| p.iter().zip(&corner).all(|(z, c)| z <= c)) {
                count += 1;
            }
        }
        count as f64
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn hypervolume_matches_grid(raw in proptest::collection::vec((0i64..8, 0i64..8, 0i64..8), 1..15)) {
            let p3: Vec<ObjectivePoint> = raw.iter().map(|&(a, b, c)| pt(&[a as f64, b as f64, c as f64])).collect();
            let p2: Vec<ObjectivePoint> = raw.iter().map(|&(a, b, _)| pt(&[a as f64, b as f64])).collect();
            prop_assert_eq!(hypervolume(&p3, &pt(&[8.0, 8.0, 8.0])).unwrap(), grid_hv(&p3, &[8, 8, 8]));
            prop_assert_eq!(hypervolume(&p2, &pt(&[8.0, 8.0])).unwrap(), grid_hv(&p2, &[8, 8]));
        }

        #[test]
        fn hypervolume_permutation_invariant(raw in proptest::collection::vec((0.0f64..10.0, 0.0f64..10.0, 0.0f64..10.0), 1..30)) {
            let a: Vec<ObjectivePoint> = raw.iter().map(|&(x, y, z)| pt(&[x, y, z])).collect();
            let b: Vec<ObjectivePoint> = raw.iter().map(|&(x, y, z)| pt(&[z, x, y])).collect();
            let ha = hypervolume(&a, &pt(&[10.5, 11.0, 12.0])).unwrap();
            let hb = hypervolume(&b, &pt(&[12.0, 10.5, 11.0])).unwrap();
            prop_assert!((ha - hb).abs() <= 1e-9 * ha.max(1.0));
        }

        #[test]
        fn indicator_monotonicity(
            raw in proptest::collection::vec((0.0f64..10.0, 0.0f64..10.0), 1..30),
            extra in (0.0f64..10.0, 0.0f64..10.0),
        ) {
            let base: Vec<ObjectivePoint> = raw.iter().map(|&(x, y)| pt(&[x, y])).collect();
            let mut more = base.clone();
            more.push(pt(&[extra.0, extra.1]));
            let r = pt(&[11.0, 11.0]);
            let zr = pt(&[0.0, 0.0]);
            let weights = generate_uniform_weights(2, 20).unwrap();
            prop_assert!(r_measure(&more, &weights, &zr).unwrap() <= r_measure(&base, &weights, &zr).unwrap());
            let (h0, h1) = (hypervolume(&base, &r).unwrap(), hypervolume(&more, &r).unwrap());
            let dominated = base.iter().any(|p| p[0] <= extra.0 && p[1] <= extra.1);
            if dominated {
                prop_assert!((h1 - h0).abs() <= 1e-9 * h0.max(1.0));
            } else {
                prop_assert!(h1 > h0);
            }
        }
    }

    #[test]
    fn union_reference_points() {
        let a = [pt(&[1.0, 5.0]), pt(&[3.0, 2.0])];
        let b = [pt(&[2.0, 1.0])];
        let cfg = IndicatorConfig::from_union(&[&a, &b]).unwrap();
        assert_eq!(cfg.reference_r.values(), &[1.0, 1.0]);
        assert_eq!(cfg.reference_hv.values(), &[3.0 + 0.02, 5.0 + 0.04]);
        assert!(cfg.hypervolume(&a).unwrap() > 0.0);
        assert!(IndicatorConfig::from_union(&[]).is_err());
    }

    /// Two-sided p by enumerating all sign assignments.
    pub(crate) fn brute_force_p(ranks: &[f64], w_plus: f64) -> f64 {
        let n = ranks.len();
        let (mut lo, mut hi) = (0u64, 0u64);
        for mask in 0u64..(1 << n) {
            let w: f64 = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
            if w <= w_plus + 1e-9 {
                lo += 1;
            }
            if w >= w_plus - 1e-9 {
                hi += 1;
            }
        }
        (2.0 * lo.min(hi) as f64 / (1u64 << n) as f64).min(1.0)
    }

    #[test]
    fn wilcoxon_examples() {
        let a: Vec<f64> = (1..=10).map(|x| x as f64 + 0.5).collect();
        let b: Vec<f64> = (1..=10).map(|x| x as f64 * 0.5).collect();
        let res = wilcoxon_signed_rank(&a, &b, 0.05).unwrap();
        assert_eq!(res.statistic, 55.0);
        assert!((res.p_value - 2.0 / 1024.0).abs() < 1e-15);
        assert!(res.significant);

        let same = wilcoxon_signed_rank(&a, &a, 0.05).unwrap();
        assert_eq!(same.p_value, 1.0);
        assert!(!same.significant);

        let swapped = wilcoxon_signed_rank(&b, &a, 0.05).unwrap();
        assert_eq!(swapped.p_value, res.p_value);
        assert!(wilcoxon_signed_rank(&a[..4], &b[..4], 0.05).is_err());
        assert!(wilcoxon_signed_rank(&a, &b, 1.0).is_err());
    }

    #[test]
    fn wilcoxon_exact_matches_enumeration_with_ties() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a: Vec<f64> = (0..10).map(|_| rng.random_range(0..6) as f64).collect();
            let b: Vec<f64> = (0..10).map(|_| rng.random_range(0..6) as f64).collect();
            let res = wilcoxon_signed_rank(&a, &b, 0.05).unwrap();
            let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
            if diffs.is_empty() {
                continue;
            }
            let ranks = average_ranks(&diffs.iter().map(|d| d.abs()).collect::<Vec<_>>());
            assert!((res.p_value - brute_force_p(&ranks, res.statistic)).abs() < 1e-12);
        }
    }

    #[test]
    fn wilcoxon_normal_path_is_close_to_exact() {
        let a: Vec<f64> = (0..25).map(|i| (i * 7 % 11) as f64 + 0.1 * i as f64).collect();
        let b: Vec<f64> = (0..25).map(|i| (i * 5 % 13) as f64).collect();
        let res = wilcoxon_signed_rank(&a, &b, 0.05).unwrap();
        assert!(!res.exact);
        assert!(res.p_value > 0.0 && res.p_value <= 1.0);
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }
}
