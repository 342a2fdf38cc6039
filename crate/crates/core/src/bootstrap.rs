//! The exponent-improvement recursion and its dimension gates.

use serde::{Deserialize, Serialize};

use crate::diagrams::Model;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapStep {
    pub i: usize,
    /// α_i (SAW) or β_i (percolation, LTLA); absent for the starting φ_0.
    pub alpha_or_beta: Option<f64>,
    pub gamma: Option<f64>,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapTrace {
    pub model: Model,
    pub d: usize,
    pub eps: f64,
    pub steps: Vec<BootstrapStep>,
    pub terminal_alpha: f64,
    pub threshold: f64,
    pub pass: bool,
    /// ρ with |J(x)| ≤ c|||x|||^{−(d+2+ρ)} once the threshold holds.
    pub rho: f64,
    /// Smallest dimension in which the recursion and the pointwise lemma apply.
    pub dimension_floor: usize,
    pub warnings: Vec<String>,
}

impl BootstrapTrace {
    pub fn verdict(&self) -> &'static str {
        if self.pass {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn phis(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.phi).collect()
    }
}

/// (cap on φ, cap on γ, first weight, dimension floor).
fn parameters(model: Model, d: f64) -> (f64, f64, usize) {
    match model {
        Model::Saw => (d - 2.0, d - 4.0, 5),
        Model::Percolation => (d - 4.0, d - 6.0, 9),
        Model::Ltla => (d - 6.0, d - 8.0, 11),
    }
}

pub fn rho_for(model: Model, d: usize) -> f64 {
    let d = d as f64;
    match model {
        Model::Saw => 2.0 * (d - 4.0),
        Model::Percolation => d - 6.0,
        Model::Ltla => d - 10.0,
    }
}

const MAX_STEPS: usize = 1000;

/// Iterates φ_{i+1} = 2 + {(cap_γ) ∧ ⌊φ_i⌋} − ε from φ_0 = 2 until φ repeats.
pub fn run_bootstrap(model: Model, d: usize, eps: f64) -> Result<BootstrapTrace> {
    if d < 3 {
        return Err(Error::Domain(format!("d={d} must be at least 3")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("ε={eps} must lie in (0, 1)")));
    }
    let df = d as f64;
    let (_, cap_gamma, floor) = parameters(model, df);
    let mut warnings = Vec::new();
    let mut steps = vec![BootstrapStep { i: 0, alpha_or_beta: None, gamma: None, phi: 2.0 }];
    let mut phi = 2.0f64;
    for i in 1..=MAX_STEPS {
        if phi.fract() == 0.0 && i > 1 {
            warnings.push(format!("φ_{} = {phi} is an exact integer (knife-edge of the floor)", i - 1));
        }
        let gamma = cap_gamma.min(phi.floor()) - eps;
        let first = 2.0;
        if gamma <= 0.0 {
            warnings.push(format!("γ_{i} = {gamma} is not positive: the recursion does not start in d={d}"));
        }
        check_weights(model, df, phi, first, gamma, i, &mut warnings);
        let next = first + gamma;
        steps.push(BootstrapStep { i, alpha_or_beta: Some(first), gamma: Some(gamma), phi: next });
        if next == phi {
            break;
        }
        if next < phi {
            warnings.push(format!("φ decreased at step {i}"));
            phi = next;
            break;
        }
        phi = next;
    }
    let threshold = model.alpha_threshold(d);
    let terminal_alpha = phi;
    let pass = d >= floor && terminal_alpha > threshold;
    Ok(BootstrapTrace {
        model,
        d,
        eps,
        steps,
        terminal_alpha,
        threshold,
        pass,
        rho: rho_for(model, d),
        dimension_floor: floor,
        warnings,
    })
}

/// Hypotheses of the weighted-diagram lemma for the pairs used at step i.
fn check_weights(model: Model, d: f64, phi: f64, first: f64, gamma: f64, i: usize, warnings: &mut Vec<String>) {
    let fl = phi.floor();
    let frac_ok = |b: f64, g: f64| b + g - (b.floor() + g.floor()) < 1.0;
    let odd = |x: f64| x.fract() == 0.0 && (x as i64) % 2 != 0;
    let mut bad = Vec::new();
    if odd(gamma) {
        bad.push(format!("γ={gamma} is an odd integer"));
    }
    if gamma > fl {
        bad.push(format!("γ={gamma} exceeds ⌊φ⌋={fl}"));
    }
    match model {
        Model::Saw => {
            if !(first <= phi && first < d - 2.0) {
                bad.push(format!("Ḡ^({first}) needs α ≤ φ and α < d−2"));
            }
            if !(gamma < d - 4.0 && frac_ok(0.0, gamma)) {
                bad.push(format!("W̄^(0,{gamma}) needs γ < d−4"));
            }
        }
        Model::Percolation => {
            if !(first + gamma < d - 4.0 && frac_ok(first, gamma) && first <= fl) {
                bad.push(format!("W̄^({first},{gamma}) needs β+γ < d−4 and β, γ ≤ ⌊φ⌋"));
            }
            if !(gamma < d - 6.0) {
                bad.push(format!("T̄^(0,{gamma}) needs γ < d−6"));
            }
            if !(first < d - 4.0 && d > 6.0) {
                bad.push(format!("H̄^({first}) needs β < d−4 and d > 6"));
            }
        }
        Model::Ltla => {
            if !(first + gamma < d - 6.0 && frac_ok(first, gamma) && first <= fl) {
                bad.push(format!("T̄^({first},{gamma}) needs β+γ < d−6 and β, γ ≤ ⌊φ⌋"));
            }
            if !(gamma < d - 8.0) {
                bad.push(format!("S̄^({gamma}) needs γ < d−8"));
            }
        }
    }
    for b in bad {
        warnings.push(format!("step {i}: {b}"));
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRow {
    pub model: Model,
    pub min_d: usize,
    pub terminal_alpha: f64,
    pub threshold: f64,
}

/// Minimal dimension passing the verdict for each model.
pub fn gate_table(eps: f64) -> Result<Vec<GateRow>> {
    [Model::Saw, Model::Percolation, Model::Ltla]
        .into_iter()
        .map(|model| {
            for d in 3..=200 {
                let t = run_bootstrap(model, d, eps)?;
                if t.pass {
                    return Ok(GateRow { model, min_d: d, terminal_alpha: t.terminal_alpha, threshold: t.threshold });
                }
            }
            Err(Error::Infeasible(format!("no dimension up to 200 passes for {model:?}")))
        })
        .collect()
}
