use serde::{Deserialize, Serialize};

use super::engine::{integrate_panels, HeatEngine};
use super::{Diagnostics, GreenResult, Method, Points};
use crate::quad::geometric_panels;
use crate::step::StepDistribution;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatOptions {
    /// The t integral runs to t_max = max(factor·(1 + |x|²/K_1), 10^{24/d})
    /// before the Gaussian tail takes over.
    pub t_max_factor: f64,
    /// Relative tolerance for the panel self-estimate.
    pub rel_tol: f64,
}

impl Default for HeatOptions {
    fn default() -> Self {
        Self { t_max_factor: 1e4, rel_tol: 1e-9 }
    }
}

pub(crate) fn t_max_for(d: usize, x2: f64, k1: f64, factor: f64) -> f64 {
    (factor * (1.0 + x2 / k1)).max(10f64.powf(24.0 / d as f64))
}

/// Leading local-CLT term (d/(2πK_1 t))^{d/2} exp(−d|x|²/(2tK_1)).
pub(crate) fn gaussian_term(d: usize, k1: f64, x2: f64, t: f64) -> f64 {
    let df = d as f64;
    (df / (2.0 * std::f64::consts::PI * k1 * t)).powf(df / 2.0) * (-df * x2 / (2.0 * t * k1)).exp()
}

/// ∫_{t0}^∞ of the leading Gaussian term, by its convergent series in a/t0.
pub(crate) fn gaussian_tail(d: usize, k1: f64, x2: f64, t0: f64) -> f64 {
    let df = d as f64;
    let a = df * x2 / (2.0 * k1);
    let s = df / 2.0;
    let pre = (df / (2.0 * std::f64::consts::PI * k1)).powf(s);
    let mut term_pow = t0.powf(1.0 - s);
    let mut coef = 1.0;
    let mut total = 0.0;
    for k in 0..200 {
        let term = coef * term_pow / (s - 1.0 + k as f64);
        total += term;
        if term.abs() < 1e-18 * total.abs() {
            break;
        }
        coef *= -a / (k as f64 + 1.0);
        term_pow /= t0;
    }
    pre * total
}

fn panel_report(panels: &[(f64, f64)]) -> String {
    match (panels.first(), panels.last()) {
        (Some(a), Some(b)) => format!("{} panels over [{:.3e}, {:.3e}]", panels.len(), a.0, b.1),
        _ => "no panels".into(),
    }
}

/// C(x) = ∫_0^∞ I_t(x) dt at the requested points.
pub fn green_heat(j: &StepDistribution, points: &Points, opts: &HeatOptions) -> Result<GreenResult> {
    if j.d < 3 {
        return Err(Error::Domain("the heat representation of C needs d ≥ 3".into()));
    }
    let engine = HeatEngine::new(j)?;
    let pts = points.representatives(j.d)?;
    let x2: Vec<f64> = pts.iter().map(|x| crate::lattice::norm2(x) as f64).collect();
    let x2max = x2.iter().cloned().fold(0.0, f64::max);
    let t_max = t_max_for(j.d, x2max, engine.k1, opts.t_max_factor);
    let panels = geometric_panels(0.0, t_max, 1.0);
    engine.preflight(&panels, &pts)?;
    let (mut vals, errs) = integrate_panels(&panels, pts.len(), |t| engine.eval(t, &pts))?;
    let at_tmax = engine.eval(t_max, &pts)?;
    let mut errors = Vec::with_capacity(pts.len());
    for i in 0..pts.len() {
        let tail = gaussian_tail(j.d, engine.k1, x2[i], t_max);
        let remainder = (at_tmax[i] - gaussian_term(j.d, engine.k1, x2[i], t_max)).abs() * t_max / (j.d as f64 / 2.0);
        vals[i] += tail;
        let e = errs[i] + remainder;
        if e > opts.rel_tol * vals[i].abs() + 1e-14 {
            return Err(Error::Quadrature(format!(
                "heat integral at {:?}: estimate {e:.3e} vs value {:.6e} ({})",
                pts[i],
                vals[i],
                panel_report(&panels)
            )));
        }
        errors.push(e);
    }
    let truncation_bound = errors.iter().cloned().fold(0.0, f64::max);
    Ok(GreenResult {
        d: j.d,
        method: Method::HeatSplit,
        points: pts,
        values: vals,
        errors,
        diagnostics: Diagnostics { t_panels: panels.len(), truncation_bound, ..Default::default() },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatSplit {
    pub x: Vec<i64>,
    pub eps_split: f64,
    pub t_split: f64,
    pub c_less: f64,
    pub c_greater: f64,
    pub total: f64,
    /// Analytic Gaussian contribution beyond t_max (included in c_greater).
    pub gaussian_tail: f64,
    pub t_max: f64,
    pub panels: usize,
    pub error_estimate: f64,
    /// Whether |x| ≥ 1/ε_split, the regime where the split bounds apply.
    pub in_window: bool,
}

/// Splits C(x) = C_<(x) + C_>(x) at T = ε_split|x|².
pub fn green_heat_split(j: &StepDistribution, x: &[i64], eps_split: f64, opts: &HeatOptions) -> Result<HeatSplit> {
    if !(eps_split > 0.0) {
        return Err(Error::Domain("ε_split must be positive".into()));
    }
    let x2 = crate::lattice::norm2(x) as f64;
    heat_split_at(j, x, eps_split * x2, opts).map(|mut s| {
        s.eps_split = eps_split;
        s.in_window = x2.sqrt() >= 1.0 / eps_split;
        s
    })
}

pub(crate) fn heat_split_at(j: &StepDistribution, x: &[i64], t_split: f64, opts: &HeatOptions) -> Result<HeatSplit> {
    if j.d < 3 {
        return Err(Error::Domain("the heat representation of C needs d ≥ 3".into()));
    }
    if x.len() != j.d {
        return Err(Error::Shape(format!("point {x:?} does not have dimension {}", j.d)));
    }
    let engine = HeatEngine::new(j)?;
    let x2 = crate::lattice::norm2(x) as f64;
    let t_max = t_max_for(j.d, x2, engine.k1, opts.t_max_factor).max(4.0 * t_split);
    let pts = vec![x.to_vec()];
    let lower = geometric_panels(0.0, t_split, t_split.min(1.0));
    let upper = geometric_panels(t_split, t_max, 1.0);
    engine.preflight(&lower, &pts)?;
    engine.preflight(&upper, &pts)?;
    let (cl, el) = integrate_panels(&lower, 1, |t| engine.eval(t, &pts))?;
    let (cg, eg) = integrate_panels(&upper, 1, |t| engine.eval(t, &pts))?;
    let tail = gaussian_tail(j.d, engine.k1, x2, t_max);
    let at_tmax = engine.eval(t_max, &pts)?[0];
    let remainder = (at_tmax - gaussian_term(j.d, engine.k1, x2, t_max)).abs() * t_max / (j.d as f64 / 2.0);
    let c_less = cl[0];
    let c_greater = cg[0] + tail;
    let total = c_less + c_greater;
    let error_estimate = el[0] + eg[0] + remainder;
    let npanels = lower.len() + upper.len();
    if error_estimate > opts.rel_tol * total.abs() + 1e-14 {
        return Err(Error::Quadrature(format!(
            "split integral at {x:?}: estimate {error_estimate:.3e} vs value {total:.6e} ({npanels} panels to t_max={t_max:.3e})"
        )));
    }
    Ok(HeatSplit {
        x: x.to_vec(),
        eps_split: if x2 > 0.0 { t_split / x2 } else { 0.0 },
        t_split,
        c_less,
        c_greater,
        total,
        gaussian_tail: tail,
        t_max,
        panels: npanels,
        error_estimate,
        in_window: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step::nn_step;

    const WATSON: f64 = 1.516_386_059_151_978;

    #[test]
    fn watson_value() {
        let r = green_heat(&nn_step(3), &Points::List(vec![vec![0, 0, 0]]), &HeatOptions::default()).unwrap();
        assert!((r.values[0] - WATSON).abs() < 1e-9, "{}", r.values[0]);
    }

    #[test]
    fn split_total_is_split_independent() {
        let j = nn_step(3);
        let a = green_heat_split(&j, &[4, 0, 0], 0.05, &HeatOptions::default()).unwrap();
        let b = green_heat_split(&j, &[4, 0, 0], 0.5, &HeatOptions::default()).unwrap();
        assert!((a.total - b.total).abs() < 1e-10 * a.total);
        assert!(b.c_less > a.c_less);
        assert!(!a.in_window);
    }

    #[test]
    fn gaussian_tail_matches_quadrature() {
        let (d, k1, x2, t0) = (3, 1.0, 16.0, 400.0);
        let r = crate::quad::Rule::jacobi_left(30, -0.5);
        // t = t0/u leaves a u^{−1/2} endpoint factor
        let num = r.integrate_left_singular(-0.5, 1.0, |u| {
            let t = t0 / u;
            gaussian_term(d, k1, x2, t) * t0 / (u * u) * u.sqrt()
        });
        let exact = gaussian_tail(d, k1, x2, t0);
        assert!((num - exact).abs() < 1e-6 * exact, "{num} {exact}");
    }
}
