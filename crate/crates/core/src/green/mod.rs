//! Green's function C(x) = ∫ d^dk/(2π)^d e^{ik·x}/(1 − Ĵ(k)) by three
//! independent methods, plus the asymptotic and counterexample studies.

mod asymptote;
mod engine;
mod heat;
mod quadrature;
mod series;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lattice::{canonical, LatticeField};
use crate::{Error, Result};

pub use asymptote::{
    asymptotics_report, counterexample_experiment, CounterexampleOptions, gaussian_tail_helper_holds, gaussian_tail_integral,
    heat_kernel_probe, improved_split_probe, lace_two_point, lace_two_point_fields, power_exp_helper_holds,
    resolvent_residual, AsymptoteReport, AsymptoteRow, GrowthReport, GrowthRow, HeatProbeRow, LaceTwoPoint,
    ResolventReport, SplitReport,
};
pub use engine::HeatEngine;
pub use heat::{green_heat, green_heat_split, HeatOptions, HeatSplit};
pub use quadrature::{green_quadrature, QuadratureOptions};
pub use series::{green_series, series_partial_sums, SeriesOptions, SeriesReport};

/// a_d = dΓ(d/2 − 1)/(2π^{d/2}).
pub fn gaussian_constant(d: usize) -> Result<f64> {
    if d <= 2 {
        return Err(Error::Domain(format!("a_d needs d ≥ 3 (Γ(d/2−1) has a pole at d=2), got d={d}")));
    }
    let df = d as f64;
    Ok(df * crate::quad::gamma(df / 2.0 - 1.0) / (2.0 * std::f64::consts::PI.powf(df / 2.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Quadrature,
    HeatSplit,
    Series,
}

/// Where a solver is asked to evaluate C.
#[derive(Clone, Debug, PartialEq)]
pub enum Points {
    /// Every site of the box {−h..h}^d, h = (L−1)/2.
    Box(usize),
    /// Explicit sites.
    List(Vec<Vec<i64>>),
}

impl Points {
    /// Canonical representatives (C is ℤ^d-symmetric for symmetric J).
    pub fn representatives(&self, d: usize) -> Result<Vec<Vec<i64>>> {
        let mut reps: Vec<Vec<i64>> = match self {
            Points::Box(l) => {
                if l % 2 == 0 {
                    return Err(Error::Shape(format!("box side {l} must be odd")));
                }
                crate::lattice::canonical_points(d, (*l as i64 - 1) / 2)
            }
            Points::List(v) => {
                if v.iter().any(|x| x.len() != d) {
                    return Err(Error::Shape(format!("evaluation point of wrong dimension (d={d})")));
                }
                v.iter().map(|x| canonical(x)).collect()
            }
        };
        reps.sort();
        reps.dedup();
        Ok(reps)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Midpoint grid sizes used (quadrature).
    pub grids: Vec<usize>,
    /// Number of t panels (heat and grid-sum evaluations).
    pub t_panels: usize,
    /// Largest partial-sum order (series).
    pub truncation_order: Option<u64>,
    /// Largest pointwise truncation/discretization error estimate (absolute).
    pub truncation_bound: f64,
    /// Estimated periodic-image contribution at the evaluated points (absolute).
    pub wrap_contamination: f64,
    /// Mass of the last computed term outside radius (L−1)/2 (series only).
    pub mass_outside: f64,
    /// Split point T (heat split).
    pub split_t: Option<f64>,
    /// max |C_M − C_{2M}| over the evaluated points (quadrature).
    pub richardson_delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenResult {
    pub d: usize,
    pub method: Method,
    /// Canonical representatives, sorted.
    pub points: Vec<Vec<i64>>,
    pub values: Vec<f64>,
    /// Pointwise error estimates matching `values`.
    pub errors: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl GreenResult {
    fn index_of(&self, x: &[i64]) -> Option<usize> {
        self.points.binary_search(&canonical(x)).ok()
    }

    pub fn value(&self, x: &[i64]) -> Option<f64> {
        self.index_of(x).map(|i| self.values[i])
    }

    pub fn error(&self, x: &[i64]) -> Option<f64> {
        self.index_of(x).map(|i| self.errors[i])
    }

    pub fn as_map(&self) -> BTreeMap<Vec<i64>, f64> {
        self.points.iter().cloned().zip(self.values.iter().copied()).collect()
    }

    /// Expands the orbit representatives to a full box field.
    pub fn to_field(&self, l: usize) -> Result<LatticeField> {
        let mut missing = None;
        let f = LatticeField::from_fn(self.d, l, true, |x| match self.value(x) {
            Some(v) => v,
            None => {
                missing.get_or_insert_with(|| x.to_vec());
                0.0
            }
        })?;
        if let Some(x) = missing {
            return Err(Error::Shape(format!("result has no value at {x:?}")));
        }
        Ok(f)
    }
}
