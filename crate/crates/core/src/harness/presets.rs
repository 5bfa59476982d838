//! Named parameter settings for the benchmark problem families.

use super::ProblemKind;
use crate::engine::{Method, MethodConfig};
use crate::error::{Error, Result};
use crate::scalarizing::{lattice_size, ScalarizerSpec};

pub const DEFAULT_NEIGHBORHOOD_SIZE: usize = 20;
pub const DEFAULT_MATING_PROBABILITY: f64 = 0.9;
pub const DEFAULT_MAX_REPLACEMENTS: usize = 2;
pub const DEFAULT_EXPECTED_RANK: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParameterPreset {
    pub name: &'static str,
    pub problem: ProblemKind,
    pub objectives: usize,
    pub generations: usize,
    /// Lattice granularity; the weight count is `C(H+J−1, J−1)`.
    pub granularity: usize,
}

pub const PRESETS: [ParameterPreset; 5] = [
    ParameterPreset { name: "mstsp2", problem: ProblemKind::Tsp, objectives: 2, generations: 50, granularity: 100 },
    ParameterPreset { name: "mstsp3", problem: ProblemKind::Tsp, objectives: 3, generations: 5, granularity: 81 },
    ParameterPreset { name: "tspwp", problem: ProblemKind::Tspwp, objectives: 2, generations: 17, granularity: 300 },
    ParameterPreset { name: "moscp2", problem: ProblemKind::Scp, objectives: 2, generations: 17, granularity: 300 },
    ParameterPreset { name: "moscp3", problem: ProblemKind::Scp, objectives: 3, generations: 5, granularity: 81 },
];

impl ParameterPreset {
    pub fn by_name(name: &str) -> Result<Self> {
        PRESETS
            .iter()
            .find(|p| p.name.eq_ignore_ascii_case(name))
            .copied()
            .ok_or_else(|| {
                let known: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
                Error::config(format!("unknown preset `{name}` (known: {})", known.join(", ")))
            })
    }

    pub fn weight_count(&self) -> usize {
        lattice_size(self.objectives, self.granularity)
    }

    pub fn config(&self, method: Method) -> MethodConfig {
        let mut c = MethodConfig::new(method, self.objectives, self.granularity);
        c.generations = self.generations;
        c.scalarizer = default_scalarizer(self.problem);
        c.expected_rank = DEFAULT_EXPECTED_RANK;
        c.neighborhood_size = DEFAULT_NEIGHBORHOOD_SIZE;
        c.mating_probability = DEFAULT_MATING_PROBABILITY;
        c.max_replacements = DEFAULT_MAX_REPLACEMENTS;
        c
    }
}

/// Linear for TSP and set covering, mixed (0.001 linear, 0.999 Chebycheff)
/// for the TSP with profits.
pub fn default_scalarizer(problem: ProblemKind) -> ScalarizerSpec {
    match problem {
        ProblemKind::Tsp | ProblemKind::Scp => ScalarizerSpec::linear(),
        ProblemKind::Tspwp => ScalarizerSpec::mixed_default(),
    }
}

/// Per-instance expected-rank settings for the named benchmark instances.
pub const EXPECTED_RANK_PRESETS: [(&str, f64); 5] = [
    ("kroab100", 10.0),
    ("clusterab300", 5.0),
    ("euclideanab500", 4.0),
    ("kroabc100", 10.0),
    ("clusterabc300", 8.0),
];

/// Expected rank for an instance name, falling back to the default.
pub fn expected_rank_for(instance: &str) -> f64 {
    let key = instance.to_ascii_lowercase();
    EXPECTED_RANK_PRESETS
        .iter()
        .find(|(name, _)| *name == key)
        .map_or(DEFAULT_EXPECTED_RANK, |&(_, er)| er)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_weight_counts() {
        let counts: Vec<(&str, usize, usize)> =
            PRESETS.iter().map(|p| (p.name, p.generations, p.weight_count())).collect();
        assert_eq!(
            counts,
            vec![
                ("mstsp2", 50, 101),
                ("mstsp3", 5, 3403),
                ("tspwp", 17, 301),
                ("moscp2", 17, 301),
                ("moscp3", 5, 3403),
            ]
        );
    }

    #[test]
    fn preset_lookup_and_defaults() {
        let p = ParameterPreset::by_name("TSPWP").unwrap();
        let c = p.config(Method::Moead);
        assert_eq!(c.neighborhood_size, 20);
        assert_eq!(c.mating_probability, 0.9);
        assert_eq!(c.max_replacements, 2);
        assert_eq!(c.expected_rank, 10.0);
        assert_eq!(c.scalarizer.kind, crate::scalarizing::ScalarizerKind::Mixed);
        assert!(ParameterPreset::by_name("nope").is_err());
        assert_eq!(expected_rank_for("ClusterAB300"), 5.0);
        assert_eq!(expected_rank_for("EuclideanAB500"), 4.0);
        assert_eq!(expected_rank_for("other"), 10.0);
    }
}
