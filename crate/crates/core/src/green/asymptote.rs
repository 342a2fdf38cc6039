use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::heat::{gaussian_term, heat_split_at, HeatOptions};
use super::quadrature::{green_quadrature, QuadratureOptions};
use super::{gaussian_constant, GreenResult, HeatEngine, Points};
use crate::lattice::{canonical, norm2, LatticeField};
use crate::step::{counterexample_step, CounterexampleParams, StepDistribution, StepKind};
use crate::sum::ksum;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteRow {
    pub x: Vec<i64>,
    pub absx: f64,
    pub c: f64,
    /// |x|^{d−2} C(x).
    pub scaled_c: f64,
    /// scaled_c / (a_d/K_1) − 1.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteReport {
    pub d: usize,
    pub a_d: f64,
    pub k1: f64,
    pub predicted_coeff: f64,
    pub rho: f64,
    /// (ρ∧2)/d.
    pub error_exponent: f64,
    /// Least-squares slope κ of log|deviation| ≈ const − κ log|x|.
    pub fitted_exponent: Option<f64>,
    pub rows: Vec<AsymptoteRow>,
}

impl AsymptoteReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let cols: Vec<String> = (1..=self.d).map(|i| format!("x{i}")).collect();
        writeln!(w, "{},absx,C,scaledC,deviation", cols.join(","))?;
        for r in &self.rows {
            let xs: Vec<String> = r.x.iter().map(|c| c.to_string()).collect();
            writeln!(w, "{},{},{:e},{:e},{:e}", xs.join(","), r.absx, r.c, r.scaled_c, r.deviation)?;
        }
        Ok(())
    }

    /// True when |deviation| strictly decreases along the rows.
    pub fn deviation_shrinking(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].deviation.abs() < w[0].deviation.abs())
    }
}

/// Least-squares slope of ys against xs.
fn slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / sxx)
}

/// Tabulates |x|^{d−2}C(x) against a_d/K_1 at every nonzero point of the result.
pub fn asymptotics_report(result: &GreenResult, j: &StepDistribution, rho: f64) -> Result<AsymptoteReport> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("ρ={rho} must be nonnegative")));
    }
    let d = result.d;
    let a_d = gaussian_constant(d)?;
    let k1 = j.moments.k1;
    let predicted = a_d / k1;
    let mut rows: Vec<AsymptoteRow> = result
        .points
        .iter()
        .zip(&result.values)
        .filter(|(x, _)| x.iter().any(|c| *c != 0))
        .map(|(x, &c)| {
            let absx = (norm2(x) as f64).sqrt();
            let scaled_c = absx.powi(d as i32 - 2) * c;
            AsymptoteRow { x: x.clone(), absx, c, scaled_c, deviation: scaled_c / predicted - 1.0 }
        })
        .collect();
    rows.sort_by(|a, b| a.absx.total_cmp(&b.absx).then_with(|| a.x.cmp(&b.x)));
    let (lx, ly): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.deviation != 0.0)
        .map(|r| (r.absx.ln(), r.deviation.abs().ln()))
        .unzip();
    Ok(AsymptoteReport {
        d,
        a_d,
        k1,
        predicted_coeff: predicted,
        rho,
        error_exponent: rho.min(2.0) / d as f64,
        fitted_exponent: slope(&lx, &ly).map(|s| -s),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaceTwoPoint {
    pub d: usize,
    pub points: Vec<Vec<i64>>,
    /// H(x) = (C*g)(x).
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub g_sum: f64,
    /// A = Σg / Σ|y|²J(y).
    pub a: f64,
    /// Predicted coefficient a_d·A of |x|^{2−d}.
    pub coefficient: f64,
}

/// H = C*g at the requested points, with C from the quadrature solver.
pub fn lace_two_point(
    g: &LatticeField,
    j: &StepDistribution,
    points: &Points,
    opts: &QuadratureOptions,
) -> Result<LaceTwoPoint> {
    if g.d != j.d {
        return Err(Error::Shape(format!("g has d={} but J has d={}", g.d, j.d)));
    }
    let pts = points.representatives(j.d)?;
    let support: Vec<(Vec<i64>, f64)> =
        (0..g.len()).filter(|&i| g.values[i] != 0.0).map(|i| (g.coords(i), g.values[i])).collect();
    let mut needed: Vec<Vec<i64>> = Vec::new();
    for x in &pts {
        for (y, _) in &support {
            needed.push(x.iter().zip(y).map(|(a, b)| a - b).collect());
        }
    }
    let c = green_quadrature(j, &Points::List(needed), opts)?;
    let mut values = Vec::with_capacity(pts.len());
    let mut errors = Vec::with_capacity(pts.len());
    for x in &pts {
        let mut terms = Vec::with_capacity(support.len());
        let mut err = Vec::with_capacity(support.len());
        for (y, w) in &support {
            let z: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            terms.push(w * c.value(&z).expect("requested point"));
            err.push(w.abs() * c.error(&z).expect("requested point"));
        }
        values.push(ksum(terms));
        errors.push(ksum(err));
    }
    let g_sum = g.sum();
    let a = g_sum / j.moments.k1;
    Ok(LaceTwoPoint { d: j.d, points: pts, values, errors, g_sum, a, coefficient: gaussian_constant(j.d)? * a })
}

/// H = C*g as a full box field from a box-valued Green's function, and A.
pub fn lace_two_point_fields(c: &LatticeField, g: &LatticeField, j: &StepDistribution) -> Result<(LatticeField, f64)> {
    let h = crate::lattice::convolve(c, g)?;
    Ok((h, g.sum() / j.moments.k1))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub l: i64,
    pub c: f64,
    pub c_error: f64,
    /// r_n = l^{d−2} C(l e_1).
    pub r: f64,
    pub g: f64,
    pub h: f64,
    /// g h⁴ exp(−c′ g h^d) with the fitted c, c′ (when a fit exists).
    pub trend: Option<f64>,
    /// r_n / (a_d/K_1).
    pub ratio_to_gaussian: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub params: CounterexampleParams,
    pub box_side: usize,
    pub delta: f64,
    pub k1: f64,
    pub a_d: f64,
    pub gaussian_coeff: f64,
    pub rows: Vec<GrowthRow>,
    /// Fitted (c, c′) in log r = log c + log(g h⁴) − c′ g h^d.
    pub fit: Option<(f64, f64)>,
    /// Largest ratio r_{n+1}/r_n.
    pub max_growth_ratio: Option<f64>,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleOptions {
    /// Box side bounding l_max plus the ball halo.
    pub l: usize,
    pub quadrature: QuadratureOptions,
    /// Distances at which r is evaluated when l_list is empty.
    pub probe: Vec<i64>,
}

impl Default for CounterexampleOptions {
    fn default() -> Self {
        Self { l: 121, quadrature: QuadratureOptions { m: 512, levels: 3 }, probe: vec![12, 24, 48] }
    }
}

/// r_n = l_n^{d−2} C(l_n e_1) for the counterexample step distribution.
pub fn counterexample_experiment(params: &CounterexampleParams, opts: &CounterexampleOptions) -> Result<GrowthReport> {
    let j = counterexample_step(params)?;
    let d = params.d;
    let halo = params.l_list.iter().map(|&l| params.ball_radius(l).floor() as i64).max().unwrap_or(0);
    let ls = if params.l_list.is_empty() { opts.probe.clone() } else { params.l_list.clone() };
    let need = ls.iter().max().copied().unwrap_or(0) + halo;
    if opts.l % 2 == 0 || (opts.l as i64 - 1) / 2 < need {
        return Err(Error::Infeasible(format!(
            "box side {} cannot hold l_max + halo = {need} (need an odd side ≥ {})",
            opts.l,
            2 * need + 1
        )));
    }
    let mut qopts = opts.quadrature.clone();
    qopts.m = qopts.m.max(opts.l + 1);
    let pts: Vec<Vec<i64>> = ls.iter().map(|&l| crate::lattice::LatticePoint::axis(d, 0, l).coords).collect();
    let c = green_quadrature(&j, &Points::List(pts.clone()), &qopts)?;
    let delta = match &j.kind {
        StepKind::Counterexample { delta, .. } => *delta,
        _ => 0.0,
    };
    let a_d = gaussian_constant(d)?;
    let gaussian_coeff = a_d / j.moments.k1;
    let mut rows: Vec<GrowthRow> = ls
        .iter()
        .zip(&pts)
        .enumerate()
        .map(|(n, (&l, x))| {
            let cv = c.value(x).expect("requested point");
            let r = (l as f64).powi(d as i32 - 2) * cv;
            GrowthRow {
                n: n + 1,
                l,
                c: cv,
                c_error: c.error(x).expect("requested point"),
                r,
                g: params.g.eval(l as f64),
                h: params.h(l as f64),
                trend: None,
                ratio_to_gaussian: r / gaussian_coeff,
            }
        })
        .collect();
    let fit = if params.l_list.is_empty() { None } else { fit_trend(&rows, d) };
    if let Some((c0, c1)) = fit {
        for row in &mut rows {
            row.trend = Some(c0 * row.g * row.h.powi(4) * (-c1 * row.g * row.h.powi(d as i32)).exp());
        }
    }
    let increasing = rows.len() >= 2 && rows.windows(2).all(|w| w[1].r > w[0].r);
    let max_growth_ratio = rows.windows(2).map(|w| w[1].r / w[0].r).reduce(f64::max);
    Ok(GrowthReport {
        params: params.clone(),
        box_side: opts.l,
        delta,
        k1: j.moments.k1,
        a_d,
        gaussian_coeff,
        rows,
        fit,
        max_growth_ratio,
        verdict: if increasing { "increasing".into() } else { "not increasing".into() },
    })
}

/// Least squares for log r − log(g h⁴) = log c − c′ g h^d.
fn fit_trend(rows: &[GrowthRow], d: usize) -> Option<(f64, f64)> {
    let xs: Vec<f64> = rows.iter().map(|r| r.g * r.h.powi(d as i32)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.r.ln() - (r.g * r.h.powi(4)).ln()).collect();
    let s = slope(&xs, &ys)?;
    let n = xs.len() as f64;
    let intercept = ys.iter().sum::<f64>() / n - s * xs.iter().sum::<f64>() / n;
    Some((intercept.exp(), -s))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub x: Vec<i64>,
    pub rho: f64,
    /// T = |x|^{2−(ρ∧2)/d}.
    pub t_split: f64,
    pub c_less: f64,
    pub c_greater: f64,
    pub total: f64,
    /// Total from the default split T = 0.05|x|².
    pub reference_total: f64,
    /// |x|^{d−2+(ρ∧2)/d} C_<(x).
    pub c_less_scaled: f64,
    /// |x|^{d−2+(ρ∧2)/d} (C_>(x) − a_d/(K_1|x|^{d−2})).
    pub c_greater_residual_scaled: f64,
    pub error_estimate: f64,
}

pub fn improved_split_probe(j: &StepDistribution, x: &[i64], rho: f64, opts: &HeatOptions) -> Result<SplitReport> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("ρ={rho} must be nonnegative")));
    }
    let d = j.d as f64;
    let absx = (norm2(x) as f64).sqrt();
    if absx == 0.0 {
        return Err(Error::Domain("the split probe needs x ≠ 0".into()));
    }
    let kappa = rho.min(2.0) / d;
    let t = absx.powf(2.0 - kappa);
    let s = heat_split_at(j, x, t, opts)?;
    let reference = heat_split_at(j, x, 0.05 * absx * absx, opts)?;
    let scale = absx.powf(d - 2.0 + kappa);
    let lead = gaussian_constant(j.d)? / (j.moments.k1 * absx.powf(d - 2.0));
    Ok(SplitReport {
        x: x.to_vec(),
        rho,
        t_split: t,
        c_less: s.c_less,
        c_greater: s.c_greater,
        total: s.total,
        reference_total: reference.total,
        c_less_scaled: scale * s.c_less,
        c_greater_residual_scaled: scale * (s.c_greater - lead),
        error_estimate: s.error_estimate + reference.error_estimate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolventReport {
    /// Points whose neighbourhood x − supp J lies inside the result.
    pub checked: usize,
    pub max_residual: f64,
    /// Worst ratio residual / allowance.
    pub worst_ratio: f64,
    pub worst_point: Option<Vec<i64>>,
    pub pass: bool,
}

/// Residual of C = δ_0 + J*C at every point whose J-neighbourhood is known.
///
/// The allowance at x is err(x) + Σ_y |J(y)| err(x−y) plus a roundoff floor
/// of 64 ulp of the terms involved.
pub fn resolvent_residual(result: &GreenResult, j: &StepDistribution) -> Result<ResolventReport> {
    if result.d != j.d {
        return Err(Error::Shape(format!("result has d={} but J has d={}", result.d, j.d)));
    }
    let map: BTreeMap<Vec<i64>, (f64, f64)> = result
        .points
        .iter()
        .cloned()
        .zip(result.values.iter().copied().zip(result.errors.iter().copied()))
        .collect();
    let mut rep = ResolventReport { checked: 0, max_residual: 0.0, worst_ratio: 0.0, worst_point: None, pass: true };
    'points: for (x, &(cx, ex)) in &map {
        let mut conv = Vec::with_capacity(j.support.len());
        let mut err = vec![ex];
        let mut mag = cx.abs();
        for (y, w) in &j.support {
            let z: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            let Some(&(cz, ez)) = map.get(&canonical(&z)) else { continue 'points };
            conv.push(w * cz);
            err.push(w.abs() * ez);
            mag += (w * cz).abs();
        }
        let delta = if x.iter().all(|c| *c == 0) { 1.0 } else { 0.0 };
        let residual = (cx - delta - ksum(conv)).abs();
        let allowance = ksum(err) + 64.0 * f64::EPSILON * (mag + 1.0);
        rep.checked += 1;
        rep.max_residual = rep.max_residual.max(residual);
        let ratio = residual / allowance;
        if ratio > rep.worst_ratio {
            rep.worst_ratio = ratio;
            rep.worst_point = Some(x.clone());
        }
        if residual > allowance {
            rep.pass = false;
        }
    }
    Ok(rep)
}

/// y^{−β} e^{−α/y} ≤ (β/(αe))^β for α, β, y > 0, compared in logarithms.
pub fn power_exp_helper_holds(alpha: f64, beta: f64, y: f64) -> bool {
    let lhs = -beta * y.ln() - alpha / y;
    let rhs = beta * (beta.ln() - alpha.ln() - 1.0);
    lhs <= rhs + 1e-12 * (1.0 + rhs.abs())
}

/// ∫_{|k|≥b} e^{−a|k|²} d^dk/(2π)^d over ℝ^d = (4πa)^{−d/2} Q(d/2, ab²).
pub fn gaussian_tail_integral(a: f64, b: f64, d: usize) -> f64 {
    let s = d as f64 / 2.0;
    (4.0 * std::f64::consts::PI * a).powf(-s) * crate::quad::gamma_upper(s, a * b * b) / crate::quad::gamma(s)
}

/// Checks the integral against (1/(2πa))^{d/2} e^{−ab²/2}.
pub fn gaussian_tail_helper_holds(a: f64, b: f64, d: usize) -> bool {
    let bound = (2.0 * std::f64::consts::PI * a).powf(-(d as f64) / 2.0) * (-a * b * b / 2.0).exp();
    gaussian_tail_integral(a, b, d) <= bound * (1.0 + 1e-12)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatProbeRow {
    pub t: f64,
    pub m: u32,
    /// sup_x |||x|||^m |I_t(x)| t^{(d−m)/2}.
    pub sup_scaled: f64,
    /// sup_x |I_t(x) − leading Gaussian term| t^{d/2}.
    pub lclt_gap: f64,
}

/// Scans the box |x_j| ≤ 6σ_t + 2 (canonical points, or the axes and
/// diagonals when that is too many) for each t and m.
pub fn heat_kernel_probe(j: &StepDistribution, ts: &[f64], ms: &[u32]) -> Result<Vec<HeatProbeRow>> {
    let engine = HeatEngine::new(j)?;
    let d = j.d;
    let mut out = Vec::new();
    for &t in ts {
        let h = (6.0 * (t * j.axis_variance()).sqrt()).ceil() as i64 + 2 + j.range();
        let pts = probe_points(d, h);
        let vals = engine.eval(t, &pts)?;
        let lclt_gap = pts
            .iter()
            .zip(&vals)
            .map(|(x, v)| (v - gaussian_term(d, engine.k1, norm2(x) as f64, t)).abs())
            .fold(0.0, f64::max)
            * t.powf(d as f64 / 2.0);
        for &m in ms {
            let sup = pts
                .iter()
                .zip(&vals)
                .map(|(x, v)| (norm2(x) as f64).sqrt().max(1.0).powi(m as i32) * v.abs())
                .fold(0.0, f64::max);
            out.push(HeatProbeRow { t, m, sup_scaled: sup * t.powf((d as f64 - m as f64) / 2.0), lclt_gap });
        }
    }
    Ok(out)
}

fn probe_points(d: usize, h: i64) -> Vec<Vec<i64>> {
    let count = (1..=d as i64).fold(1f64, |acc, i| acc * (h as f64 + i as f64) / i as f64);
    if count <= 200_000.0 {
        return crate::lattice::canonical_points(d, h);
    }
    let mut pts = Vec::new();
    for r in 0..=h {
        for ones in 1..=d {
            let mut x = vec![0; d];
            x[..ones].iter_mut().for_each(|c| *c = r);
            pts.push(x);
        }
    }
    pts.sort();
    pts.dedup();
    pts
}
