//! CLONALG and GA generation loops.
//!
//! Both engines share one pipeline shape: sort, clone the four best into
//! the next population, vary the 36 non-elites, re-score what changed and
//! record a trace point. They differ only in the variation step.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::benchmarks::BenchmarkSpec;
use crate::encoding::{decode_genome, Genome};
use crate::error::Error;
use crate::operators::{
    assemble_next, banded_mutation, clone_elites, evaluate_population, flat_mutation,
    pair_and_crossover, reuse_elite_affinities, sort_population, CloneSet, MutationGroup,
    Population,
};

/// Generation cap applied when none is given.
pub const DEFAULT_MAX_GENERATIONS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Clonalg,
    Ga,
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgorithmKind::Clonalg => "clonalg",
            AlgorithmKind::Ga => "ga",
        })
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "clonalg" => Ok(AlgorithmKind::Clonalg),
            "ga" => Ok(AlgorithmKind::Ga),
            other => Err(Error::InvalidParameter(format!(
                "algorithm must be `clonalg` or `ga`, got `{other}`"
            ))),
        }
    }
}

/// The mutation parameter; which variant is valid depends on the algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    /// Index 1..=3 of a banded CLONALG rate group.
    Group(u8),
    /// Flat per-bit GA rate in (0, 1).
    Rate(f64),
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::Group(g) => write!(f, "group-{g}"),
            Mutation::Rate(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmConfig {
    pub algorithm: AlgorithmKind,
    pub clone_set: u8,
    pub mutation: Mutation,
    pub epsilon: f64,
    pub max_generations: u64,
    pub seed: u64,
}

impl AlgorithmConfig {
    pub fn clonalg(
        clone_set: u8,
        group: u8,
        epsilon: f64,
        max_generations: u64,
        seed: u64,
    ) -> Result<Self, Error> {
        let cfg = AlgorithmConfig {
            algorithm: AlgorithmKind::Clonalg,
            clone_set,
            mutation: Mutation::Group(group),
            epsilon,
            max_generations,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn ga(
        clone_set: u8,
        rate: f64,
        epsilon: f64,
        max_generations: u64,
        seed: u64,
    ) -> Result<Self, Error> {
        let cfg = AlgorithmConfig {
            algorithm: AlgorithmKind::Ga,
            clone_set,
            mutation: Mutation::Rate(rate),
            epsilon,
            max_generations,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        CloneSet::by_index(self.clone_set)?;
        match (self.algorithm, self.mutation) {
            (AlgorithmKind::Clonalg, Mutation::Group(g)) => {
                MutationGroup::by_index(g)?;
            }
            (AlgorithmKind::Ga, Mutation::Rate(r)) => {
                if !(r > 0.0 && r < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "GA mutation rate must lie in (0, 1), got {r}"
                    )));
                }
            }
            (kind, m) => {
                return Err(Error::InvalidParameter(format!(
                    "mutation setting {m:?} does not apply to {kind}"
                )))
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be a positive finite number, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub generation: u64,
    pub best_affinity: f64,
    pub mean_affinity: f64,
}

/// Per-generation record of best and mean affinity, generation 0 being
/// the random initial population.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace {
    pub points: Vec<TracePoint>,
}

impl ConvergenceTrace {
    pub fn best_series(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.best_affinity)
    }

    pub fn is_monotone(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].best_affinity <= w[0].best_affinity)
    }

    /// Writes `generation,best_affinity,mean_affinity` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["generation", "best_affinity", "mean_affinity"])?;
        for p in &self.points {
            w.write_record([
                p.generation.to_string(),
                p.best_affinity.to_string(),
                p.mean_affinity.to_string(),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// Generations executed.
    pub iterations: u64,
    pub best_affinity: f64,
    pub best_genome: Genome,
    pub best_vector: Vec<f64>,
    pub converged: bool,
    pub trace: ConvergenceTrace,
}

pub fn run(cfg: &AlgorithmConfig, spec: &BenchmarkSpec) -> Result<RunResult, Error> {
    match cfg.algorithm {
        AlgorithmKind::Clonalg => run_clonalg(cfg, spec),
        AlgorithmKind::Ga => run_ga(cfg, spec),
    }
}

pub fn run_clonalg(cfg: &AlgorithmConfig, spec: &BenchmarkSpec) -> Result<RunResult, Error> {
    cfg.validate()?;
    let group = match (cfg.algorithm, cfg.mutation) {
        (AlgorithmKind::Clonalg, Mutation::Group(g)) => MutationGroup::by_index(g)?,
        _ => {
            return Err(Error::InvalidParameter(
                "run_clonalg needs a clonalg config".into(),
            ))
        }
    };
    Ok(evolve(cfg, spec, |p, rng| banded_mutation(p, group, rng)))
}

pub fn run_ga(cfg: &AlgorithmConfig, spec: &BenchmarkSpec) -> Result<RunResult, Error> {
    cfg.validate()?;
    let rate = match (cfg.algorithm, cfg.mutation) {
        (AlgorithmKind::Ga, Mutation::Rate(r)) => r,
        _ => return Err(Error::InvalidParameter("run_ga needs a ga config".into())),
    };
    Ok(evolve(cfg, spec, |p, rng| {
        pair_and_crossover(p, rng);
        flat_mutation(p, rate, rng).expect("rate validated");
    }))
}

fn evolve<F>(cfg: &AlgorithmConfig, spec: &BenchmarkSpec, mut vary: F) -> RunResult
where
    F: FnMut(&mut Population, &mut ChaCha8Rng),
{
    let clone_set = CloneSet::by_index(cfg.clone_set).expect("validated");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut population = Population::random(&mut rng);
    evaluate_population(&mut population, spec);

    let mut best = population.best().expect("evaluated").clone();
    let mut trace = ConvergenceTrace::default();
    let mut record = |generation: u64, best_affinity: f64, p: &Population| {
        trace.points.push(TracePoint {
            generation,
            best_affinity,
            mean_affinity: p.mean_affinity().expect("evaluated"),
        });
    };
    record(0, best.affinity.unwrap(), &population);

    let mut generation = 0;
    while best.affinity.unwrap() > cfg.epsilon && generation < cfg.max_generations {
        sort_population(&mut population);
        let clones = clone_elites(&population, clone_set);
        population = assemble_next(&population, clones);
        vary(&mut population, &mut rng);
        reuse_elite_affinities(&mut population);
        evaluate_population(&mut population, spec);
        generation += 1;

        let candidate = population.best().expect("evaluated");
        if candidate.affinity.unwrap() < best.affinity.unwrap() {
            best = candidate.clone();
        }
        record(generation, best.affinity.unwrap(), &population);
    }

    let best_affinity = best.affinity.unwrap();
    RunResult {
        iterations: generation,
        best_affinity,
        best_genome: best.genome,
        best_vector: decode_genome(&best.genome, spec.bounds),
        converged: best_affinity <= cfg.epsilon,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::lookup;

    #[test]
    fn zero_generations_returns_initial_best() {
        let spec = lookup("sphere").unwrap();
        let cfg = AlgorithmConfig::clonalg(2, 1, 1e-6, 0, 42).unwrap();
        let r = run(&cfg, &spec).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(!r.converged);
        assert_eq!(r.trace.points.len(), 1);
        assert_eq!(spec.evaluate(&r.best_vector), r.best_affinity);

        let cfg = AlgorithmConfig::ga(1, 0.001, 1e-6, 0, 42).unwrap();
        assert_eq!(run(&cfg, &spec).unwrap().iterations, 0);
    }

    #[test]
    fn config_validation() {
        assert!(AlgorithmConfig::clonalg(0, 1, 1e-3, 10, 0).is_err());
        assert!(AlgorithmConfig::clonalg(1, 4, 1e-3, 10, 0).is_err());
        assert!(AlgorithmConfig::ga(1, 0.0, 1e-3, 10, 0).is_err());
        assert!(AlgorithmConfig::ga(1, 0.01, 0.0, 10, 0).is_err());
        let mut cfg = AlgorithmConfig::ga(1, 0.01, 1e-3, 10, 0).unwrap();
        cfg.mutation = Mutation::Group(1);
        assert!(cfg.validate().is_err());
        let spec = lookup("sphere").unwrap();
        let cfg = AlgorithmConfig::ga(1, 0.01, 1e-3, 10, 0).unwrap();
        assert!(run_clonalg(&cfg, &spec).is_err());
    }

    #[test]
    fn trace_csv_header() {
        let spec = lookup("ackley").unwrap();
        let cfg = AlgorithmConfig::clonalg(1, 1, 1e-3, 3, 1).unwrap();
        let r = run(&cfg, &spec).unwrap();
        let mut buf = Vec::new();
        r.trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("generation,best_affinity,mean_affinity"));
        assert_eq!(lines.count(), r.trace.points.len());
    }
}
