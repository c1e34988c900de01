//! The six benchmark objectives and a name-keyed registry.
//!
//! Every function here is minimised, is non-negative on its domain and has
//! a global minimum of zero.

use std::f64::consts::{E, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::encoding::{Bounds, VARIABLES};
use crate::error::Error;

/// Function type as classified in the comparison table. Reporting only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modality {
    Unimodal,
    Multimodal,
    HighlyMultimodal,
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modality::Unimodal => "Unimodal",
            Modality::Multimodal => "Multimodal",
            Modality::HighlyMultimodal => "Highly Multimodal",
        })
    }
}

pub type Objective = fn(&[f64]) -> f64;

/// A benchmark objective with its search domain and known optimum.
#[derive(Debug, Clone, Copy)]
pub struct BenchmarkSpec {
    pub name: &'static str,
    pub dimension: usize,
    pub bounds: Bounds,
    pub evaluate: Objective,
    pub optimum_value: f64,
    /// Every coordinate of the minimiser takes this value.
    pub optimum_coordinate: f64,
    pub modality: Modality,
    /// Termination threshold on best affinity used when none is given.
    pub default_epsilon: f64,
}

impl BenchmarkSpec {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        (self.evaluate)(x)
    }

    pub fn optimum_location(&self) -> Vec<f64> {
        vec![self.optimum_coordinate; self.dimension]
    }
}

/// `sum x_i^2`, on [-100, 100].
pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `10 n + sum (x_i^2 - 10 cos(2 pi x_i))`, on [-5.12, 5.12].
pub fn rastrigin(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    10.0 * n
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

/// Ackley's function, on [-32, 32].
pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

/// `sum sin(x_i) + n`, on [0, 6]. Minimised at `x_i = 3 pi / 2`.
pub fn modified_sinusoidal(x: &[f64]) -> f64 {
    x.iter().map(|v| v.sin()).sum::<f64>() + x.len() as f64
}

/// `sum |x_i|^(i+1)` with 1-based `i`, on [-2.048, 2.048].
pub fn sum_of_different_powers(x: &[f64]) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| v.abs().powi(i as i32 + 2))
        .sum()
}

/// `sum |x_i| + prod |x_i|`, on [-10, 10].
pub fn schwefel_2_22(x: &[f64]) -> f64 {
    let sum: f64 = x.iter().map(|v| v.abs()).sum();
    let prod: f64 = x.iter().map(|v| v.abs()).product();
    sum + prod
}

fn spec(
    name: &'static str,
    lo: f64,
    hi: f64,
    evaluate: Objective,
    optimum_coordinate: f64,
    modality: Modality,
    default_epsilon: f64,
) -> BenchmarkSpec {
    BenchmarkSpec {
        name,
        dimension: VARIABLES,
        bounds: Bounds::new(lo, hi).expect("static bounds are valid"),
        evaluate,
        optimum_value: 0.0,
        optimum_coordinate,
        modality,
        default_epsilon,
    }
}

/// Registry identifiers, in comparison-table row order.
pub const NAMES: [&str; 6] = [
    "sphere",
    "rastrigin",
    "ackley",
    "modified-sinusoidal",
    "sum-of-powers",
    "schwefel-2-22",
];

/// All six benchmarks in comparison-table row order.
pub fn all() -> Vec<BenchmarkSpec> {
    use Modality::*;
    vec![
        spec("sphere", -100.0, 100.0, sphere, 0.0, Unimodal, 1e-6),
        spec(
            "rastrigin",
            -5.12,
            5.12,
            rastrigin,
            0.0,
            HighlyMultimodal,
            1e-2,
        ),
        spec("ackley", -32.0, 32.0, ackley, 0.0, Multimodal, 1e-3),
        // 4.714 is the commonly quoted (rounded) minimiser.
        spec(
            "modified-sinusoidal",
            0.0,
            6.0,
            modified_sinusoidal,
            1.5 * PI,
            HighlyMultimodal,
            1e-3,
        ),
        spec(
            "sum-of-powers",
            -2.048,
            2.048,
            sum_of_different_powers,
            0.0,
            Unimodal,
            1e-5,
        ),
        spec(
            "schwefel-2-22",
            -10.0,
            10.0,
            schwefel_2_22,
            0.0,
            Multimodal,
            1e-3,
        ),
    ]
}

pub fn lookup(name: &str) -> Result<BenchmarkSpec, Error> {
    all()
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownFunction {
            name: name.to_string(),
            valid: NAMES.join(", "),
        })
}
