//! Weight vectors and the scalarizing functions built on them.
//!
//! All objectives follow the minimization convention, so every scalarizing
//! value is "lower is better". The Chebycheff function is evaluated in its
//! minimized form `max_j λ_j (z_j - z*_j)`.

use std::fmt;
use std::ops::Deref;

use rand::{Rng, RngCore};

use crate::error::{check_dims, Error, Result};

/// Tolerance on `Σ λ_j = 1` for weight vectors built in-process.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;
/// Weights read from files are renormalized when their sum is this close to one.
pub const WEIGHT_RENORMALIZE_TOLERANCE: f64 = 1e-6;

/// Image of a solution in objective space.
#[derive(Clone, Debug, PartialEq)]
pub struct ObjectivePoint(Vec<f64>);

impl ObjectivePoint {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::contract("objective point must have at least one value"));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::contract(format!("non-finite objective value {v}")));
        }
        Ok(ObjectivePoint(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Componentwise minimum, used for ideal/reference points.
    pub fn min_with(&mut self, other: &[f64]) {
        for (a, &b) in self.0.iter_mut().zip(other) {
            if b < *a {
                *a = b;
            }
        }
    }

    pub fn max_with(&mut self, other: &[f64]) {
        for (a, &b) in self.0.iter_mut().zip(other) {
            if b > *a {
                *a = b;
            }
        }
    }
}

impl Deref for ObjectivePoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ObjectivePoint {
    /// Unchecked conversion for values produced by problem adapters.
    fn from(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        ObjectivePoint(values)
    }
}

impl fmt::Display for ObjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Nonnegative weights summing to one; one scalarizing subproblem.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        validate_weights(&lambdas, WEIGHT_SUM_TOLERANCE)?;
        Ok(WeightVector(lambdas))
    }

    /// Accepts weights read from text: sums within 1e-6 of one are renormalized.
    pub fn from_external(mut lambdas: Vec<f64>) -> Result<Self> {
        validate_weights(&lambdas, WEIGHT_RENORMALIZE_TOLERANCE)?;
        let sum: f64 = lambdas.iter().sum();
        for l in &mut lambdas {
            *l /= sum;
        }
        Ok(WeightVector(lambdas))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.0
    }

    /// Euclidean distance in weight space.
    pub fn distance(&self, other: &WeightVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn validate_weights(lambdas: &[f64], tolerance: f64) -> Result<()> {
    if lambdas.is_empty() {
        return Err(Error::contract("weight vector is empty"));
    }
    if let Some(l) = lambdas.iter().find(|l| !l.is_finite() || **l < 0.0) {
        return Err(Error::contract(format!("invalid weight component {l}")));
    }
    let sum: f64 = lambdas.iter().sum();
    if (sum - 1.0).abs() > tolerance {
        return Err(Error::contract(format!("weights sum to {sum}, expected 1")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarizerKind {
    Linear,
    Chebycheff,
    Mixed,
}

impl ScalarizerKind {
    pub fn name(self) -> &'static str {
        match self {
            ScalarizerKind::Linear => "linear",
            ScalarizerKind::Chebycheff => "chebycheff",
            ScalarizerKind::Mixed => "mixed",
        }
    }
}

impl std::str::FromStr for ScalarizerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(ScalarizerKind::Linear),
            "chebycheff" | "chebyshev" | "tchebycheff" => Ok(ScalarizerKind::Chebycheff),
            "mixed" => Ok(ScalarizerKind::Mixed),
            other => Err(Error::config(format!("unknown scalarizer kind `{other}`"))),
        }
    }
}

/// Kind of scalarizing function plus its reference point and mixing weights.
///
/// `w_linear` and `w_cheby` only matter for [`ScalarizerKind::Mixed`]; the
/// pure kinds are the boundary cases `(1, 0)` and `(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarizerSpec {
    pub kind: ScalarizerKind,
    pub reference_point: Option<ObjectivePoint>,
    pub w_linear: f64,
    pub w_cheby: f64,
}

impl ScalarizerSpec {
    pub fn linear() -> Self {
        ScalarizerSpec {
            kind: ScalarizerKind::Linear,
            reference_point: None,
            w_linear: 1.0,
            w_cheby: 0.0,
        }
    }

    pub fn chebycheff(reference_point: Option<ObjectivePoint>) -> Self {
        ScalarizerSpec {
            kind: ScalarizerKind::Chebycheff,
            reference_point,
            w_linear: 0.0,
            w_cheby: 1.0,
        }
    }

    pub fn mixed(reference_point: Option<ObjectivePoint>, w_linear: f64, w_cheby: f64) -> Self {
        ScalarizerSpec {
            kind: ScalarizerKind::Mixed,
            reference_point,
            w_linear,
            w_cheby,
        }
    }

    /// Default for heterogeneous objectives: 0.001 linear, 0.999 Chebycheff.
    pub fn mixed_default() -> Self {
        Self::mixed(None, 0.001, 0.999)
    }

    pub fn of_kind(kind: ScalarizerKind) -> Self {
        match kind {
            ScalarizerKind::Linear => Self::linear(),
            ScalarizerKind::Chebycheff => Self::chebycheff(None),
            ScalarizerKind::Mixed => Self::mixed_default(),
        }
    }

    pub fn with_reference(&self, reference_point: ObjectivePoint) -> Self {
        ScalarizerSpec {
            reference_point: Some(reference_point),
            ..self.clone()
        }
    }

    /// Checks the mixing weights; the reference point is checked separately
    /// because engine templates carry none until a run starts.
    pub fn validate_template(&self) -> Result<()> {
        let ok = self.w_linear >= 0.0
            && self.w_cheby >= 0.0
            && (self.w_linear + self.w_cheby - 1.0).abs() <= WEIGHT_SUM_TOLERANCE;
        if !ok {
            return Err(Error::contract(format!(
                "mixing weights ({}, {}) must be nonnegative and sum to 1",
                self.w_linear, self.w_cheby
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_template()?;
        if self.kind != ScalarizerKind::Linear && self.reference_point.is_none() {
            return Err(Error::contract(format!(
                "{} scalarizer requires a reference point",
                self.kind.name()
            )));
        }
        Ok(())
    }
}

/// Weighted sum `Σ λ_j z_j`.
pub fn evaluate_linear(z: &[f64], weights: &WeightVector) -> Result<f64> {
    check_dims(weights.dim(), z.len())?;
    Ok(linear_unchecked(z, weights))
}

/// Minimized weighted Chebycheff `max_j λ_j (z_j - z*_j)`.
pub fn evaluate_chebycheff(z: &[f64], weights: &WeightVector, reference: &[f64]) -> Result<f64> {
    check_dims(weights.dim(), z.len())?;
    check_dims(weights.dim(), reference.len())?;
    Ok(chebycheff_unchecked(z, weights, reference))
}

/// `w_linear · s_1 + w_cheby · s_∞`.
pub fn evaluate_mixed(z: &[f64], spec: &ScalarizerSpec, weights: &WeightVector) -> Result<f64> {
    if spec.kind != ScalarizerKind::Mixed {
        return Err(Error::contract("evaluate_mixed requires a mixed scalarizer spec"));
    }
    spec.validate()?;
    let reference = spec.reference_point.as_ref().expect("validated");
    check_dims(weights.dim(), z.len())?;
    check_dims(weights.dim(), reference.dim())?;
    Ok(mixed_unchecked(z, weights, reference, spec.w_linear, spec.w_cheby))
}

#[inline]
fn linear_unchecked(z: &[f64], weights: &[f64]) -> f64 {
    z.iter().zip(weights).map(|(z, l)| l * z).sum()
}

#[inline]
fn chebycheff_unchecked(z: &[f64], weights: &[f64], reference: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for ((z, l), r) in z.iter().zip(weights).zip(reference) {
        // zero-weight terms contribute exactly 0, never -0 * inf games
        let term = if *l == 0.0 { 0.0 } else { l * (z - r) };
        if term > best {
            best = term;
        }
    }
    best
}

#[inline]
fn mixed_unchecked(z: &[f64], weights: &[f64], reference: &[f64], wl: f64, wc: f64) -> f64 {
    wl * linear_unchecked(z, weights) + wc * chebycheff_unchecked(z, weights, reference)
}

/// Scalarizing value under `spec` and raw weights, without dimension checks.
/// `spec` must already carry a reference point unless it is linear.
#[inline]
pub fn scalarize(spec: &ScalarizerSpec, weights: &[f64], z: &[f64]) -> f64 {
    match spec.kind {
        ScalarizerKind::Linear => linear_unchecked(z, weights),
        ScalarizerKind::Chebycheff => {
            let r = spec.reference_point.as_ref().expect("chebycheff needs a reference point");
            chebycheff_unchecked(z, weights, r)
        }
        ScalarizerKind::Mixed => {
            let r = spec.reference_point.as_ref().expect("mixed needs a reference point");
            mixed_unchecked(z, weights, r, spec.w_linear, spec.w_cheby)
        }
    }
}

/// A fully bound scalarizing function `s(z)`: spec, weights and reference point.
#[derive(Clone, Debug, PartialEq)]
pub struct Scalarizer {
    spec: ScalarizerSpec,
    weights: WeightVector,
}

impl Scalarizer {
    pub fn new(spec: ScalarizerSpec, weights: WeightVector) -> Result<Self> {
        spec.validate()?;
        if let Some(r) = &spec.reference_point {
            check_dims(weights.dim(), r.dim())?;
        }
        Ok(Scalarizer { spec, weights })
    }

    pub fn linear(weights: WeightVector) -> Self {
        Scalarizer {
            spec: ScalarizerSpec::linear(),
            weights,
        }
    }

    pub fn spec(&self) -> &ScalarizerSpec {
        &self.spec
    }

    pub fn kind(&self) -> ScalarizerKind {
        self.spec.kind
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    /// Scalarizing value of `z`. Dimensions are checked in debug builds only;
    /// this is the local-search hot path.
    #[inline]
    pub fn value(&self, z: &[f64]) -> f64 {
        debug_assert_eq!(z.len(), self.weights.dim());
        scalarize(&self.spec, &self.weights, z)
    }

    pub fn checked_value(&self, z: &[f64]) -> Result<f64> {
        check_dims(self.weights.dim(), z.len())?;
        Ok(self.value(z))
    }
}

/// Binomial coefficient, saturating on overflow.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// Size of the simplex lattice with granularity `h` in `j` dimensions.
pub fn lattice_size(j: usize, h: usize) -> usize {
    binomial(h + j - 1, j - 1)
}

/// Granularity whose lattice has exactly `count` vectors, if any.
pub fn granularity_for_count(j: usize, count: usize) -> Option<usize> {
    if j < 2 || count == 0 {
        return None;
    }
    let mut h = 0;
    loop {
        let size = lattice_size(j, h);
        if size == count {
            return Some(h);
        }
        if size > count {
            return None;
        }
        h += 1;
    }
}

/// Smallest granularity whose lattice has at least `count` vectors.
pub fn granularity_at_least(j: usize, count: usize) -> usize {
    let mut h = 1;
    while lattice_size(j, h) < count {
        h += 1;
    }
    h
}

/// All vectors with components `k/H` summing to one, in lexicographic order.
pub fn generate_uniform_weights(j: usize, h: usize) -> Result<Vec<WeightVector>> {
    if j < 2 {
        return Err(Error::contract(format!("need at least 2 objectives, got {j}")));
    }
    if h < 1 {
        return Err(Error::contract("lattice granularity must be at least 1"));
    }
    let mut out = Vec::with_capacity(lattice_size(j, h));
    let mut counts = vec![0usize; j];
    enumerate_lattice(&mut counts, 0, h, h, &mut out);
    Ok(out)
}

fn enumerate_lattice(
    counts: &mut [usize],
    pos: usize,
    remaining: usize,
    h: usize,
    out: &mut Vec<WeightVector>,
) {
    if pos == counts.len() - 1 {
        counts[pos] = remaining;
        let hf = h as f64;
        out.push(WeightVector(counts.iter().map(|&k| k as f64 / hf).collect()));
        return;
    }
    for k in 0..=remaining {
        counts[pos] = k;
        enumerate_lattice(counts, pos + 1, remaining - k, h, out);
    }
}

/// Uniform draw from the standard simplex via sorted-uniform spacings.
pub fn draw_random_weight(j: usize, rng: &mut (impl RngCore + ?Sized)) -> WeightVector {
    assert!(j >= 2, "need at least 2 objectives");
    let mut cuts: Vec<f64> = (0..j - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut lambdas = Vec::with_capacity(j);
    let mut prev = 0.0;
    for c in cuts {
        lambdas.push(c - prev);
        prev = c;
    }
    lambdas.push(1.0 - prev);
    WeightVector(lambdas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(v: &[f64]) -> WeightVector {
        WeightVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn linear_examples() {
        assert_eq!(evaluate_linear(&[2.0, 3.0], &w(&[0.5, 0.5])).unwrap(), 2.5);
        assert_eq!(evaluate_linear(&[7.0, 9.0], &w(&[1.0, 0.0])).unwrap(), 7.0);
        let third = 1.0 / 3.0;
        let v = evaluate_linear(&[4.0, 4.0, 4.0], &WeightVector::from_external(vec![third; 3]).unwrap())
            .unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn chebycheff_examples() {
        let zero = [0.0, 0.0];
        assert_eq!(evaluate_chebycheff(&[2.0, 4.0], &w(&[0.5, 0.5]), &zero).unwrap(), 2.0);
        assert_eq!(evaluate_chebycheff(&[3.0, 5.0], &w(&[0.3, 0.7]), &[3.0, 5.0]).unwrap(), 0.0);
        assert_eq!(evaluate_chebycheff(&[10.0, 1.0], &w(&[0.1, 0.9]), &zero).unwrap(), 1.0);
    }

    #[test]
    fn mixed_examples() {
        let r = ObjectivePoint::new(vec![0.0, 0.0]).unwrap();
        let lam = w(&[0.5, 0.5]);
        let z = [2.0, 4.0];
        let spec = ScalarizerSpec::mixed(Some(r.clone()), 0.001, 0.999);
        let v = evaluate_mixed(&z, &spec, &lam).unwrap();
        assert!((v - 2.001).abs() < 1e-12);

        let lin = ScalarizerSpec::mixed(Some(r.clone()), 1.0, 0.0);
        assert_eq!(evaluate_mixed(&z, &lin, &lam).unwrap(), evaluate_linear(&z, &lam).unwrap());
        let ch = ScalarizerSpec::mixed(Some(r.clone()), 0.0, 1.0);
        assert_eq!(
            evaluate_mixed(&z, &ch, &lam).unwrap(),
            evaluate_chebycheff(&z, &lam, &r).unwrap()
        );
    }

    #[test]
    fn dimension_and_reference_errors() {
        assert!(matches!(
            evaluate_linear(&[1.0, 2.0, 3.0], &w(&[0.5, 0.5])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(evaluate_chebycheff(&[1.0, 2.0], &w(&[0.5, 0.5]), &[0.0]).is_err());
        let spec = ScalarizerSpec::mixed(None, 0.5, 0.5);
        assert!(matches!(
            evaluate_mixed(&[1.0, 2.0], &spec, &w(&[0.5, 0.5])),
            Err(Error::Contract(_))
        ));
        assert!(Scalarizer::new(ScalarizerSpec::chebycheff(None), w(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![-0.1, 1.1]).is_err());
        let renorm = WeightVector::from_external(vec![0.5, 0.5 + 5e-7]).unwrap();
        assert!((renorm.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(WeightVector::from_external(vec![0.5, 0.5 + 1e-5]).is_err());
    }

    #[test]
    fn uniform_weights_small_case() {
        let ws = generate_uniform_weights(2, 4).unwrap();
        let got: Vec<Vec<f64>> = ws.iter().map(|w| w.to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0.0, 1.0],
                vec![0.25, 0.75],
                vec![0.5, 0.5],
                vec![0.75, 0.25],
                vec![1.0, 0.0]
            ]
        );
    }

    #[test]
    fn uniform_weight_counts() {
        assert_eq!(generate_uniform_weights(2, 100).unwrap().len(), 101);
        assert_eq!(generate_uniform_weights(3, 81).unwrap().len(), 3403);
        assert_eq!(binomial(83, 2), 3403);
        assert_eq!(lattice_size(2, 999), 1000);
        assert_eq!(granularity_at_least(3, 7562), 122);
        assert_eq!(lattice_size(3, 122), 7626);
        assert_eq!(granularity_for_count(3, 3403), Some(81));
        assert_eq!(granularity_for_count(3, 3404), None);
        assert!(generate_uniform_weights(1, 3).is_err());
        assert!(generate_uniform_weights(2, 0).is_err());
    }

    #[test]
    fn random_weight_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| draw_random_weight(2, &mut rng)[0]).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        let frac = (0..n)
            .filter(|_| draw_random_weight(3, &mut rng)[0] > 0.5)
            .count() as f64
            / n as f64;
        // (1 - 0.5)^(J-1) for J = 3
        assert!((frac - 0.25).abs() < 0.01, "fraction {frac}");
    }

    proptest! {
        #[test]
        fn drawn_weights_are_normalized(j in 2usize..8, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = draw_random_weight(j, &mut rng);
            prop_assert!(w.iter().all(|&l| l >= 0.0));
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= WEIGHT_SUM_TOLERANCE);
        }

        #[test]
        fn lattice_contains_unit_vectors(j in 2usize..5, h in 1usize..12) {
            let ws = generate_uniform_weights(j, h).unwrap();
            prop_assert_eq!(ws.len(), binomial(h + j - 1, j - 1));
            for axis in 0..j {
                prop_assert!(ws.iter().any(|w| w[axis] == 1.0));
            }
        }

        #[test]
        fn chebycheff_zero_at_reference_and_monotone(
            z in proptest::collection::vec(-100.0f64..100.0, 3),
            d in proptest::collection::vec(0.0f64..10.0, 3),
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lam = draw_random_weight(3, &mut rng);
            let r = [-200.0, -200.0, -200.0];
            prop_assert_eq!(evaluate_chebycheff(&z, &lam, &z).unwrap(), 0.0);
            let better: Vec<f64> = z.iter().zip(&d).map(|(a, b)| a - b).collect();
            prop_assert!(
                evaluate_chebycheff(&better, &lam, &r).unwrap()
                    <= evaluate_chebycheff(&z, &lam, &r).unwrap()
            );
        }

        #[test]
        fn linear_strictly_monotone(
            z in proptest::collection::vec(-100.0f64..100.0, 2),
            d in proptest::collection::vec(0.01f64..10.0, 2),
            l in 0.01f64..0.99,
        ) {
            let lam = WeightVector::new(vec![l, 1.0 - l]).unwrap();
            let better: Vec<f64> = z.iter().zip(&d).map(|(a, b)| a - b).collect();
            prop_assert!(evaluate_linear(&better, &lam).unwrap() < evaluate_linear(&z, &lam).unwrap());
        }
    }
}
