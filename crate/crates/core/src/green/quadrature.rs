use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::engine::integrate_panels;
use super::{Diagnostics, GreenResult, Method, Points};
use crate::quad::geometric_panels;
use crate::step::{axial_psi, StepDistribution};
use crate::{Error, Result};

/// Largest dense grid (M^d nodes) for the non-axial FFT path.
const DENSE_GRID_CAP: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    /// Coarsest midpoint grid size per axis (even).
    pub m: usize,
    /// Number of grids M, 2M, 4M, ... used for Richardson extrapolation (≥ 2).
    pub levels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { m: 128, levels: 3 }
    }
}

/// Midpoint-grid quadrature of the Fourier integral for C, extrapolated in M.
///
/// The midpoint sum on an M grid equals Σ_n (−1)^{n_1+…+n_d} C(x − Mn), so
/// the grid error expands in M^{−(d−2)}, M^{−d}, M^{−(d+2)}, … and each
/// doubling removes one term.
pub fn green_quadrature(j: &StepDistribution, points: &Points, opts: &QuadratureOptions) -> Result<GreenResult> {
    if j.d < 3 {
        return Err(Error::Domain(format!("C is infinite for d={} (need d ≥ 3)", j.d)));
    }
    if opts.m < 2 || opts.m % 2 != 0 {
        return Err(Error::Domain(format!("grid size M={} must be even and ≥ 2", opts.m)));
    }
    if opts.levels < 2 {
        return Err(Error::Domain("quadrature needs at least the M and 2M grids".into()));
    }
    let pts = points.representatives(j.d)?;
    let grids: Vec<usize> = (0..opts.levels).map(|i| opts.m << i).collect();
    let profile = j.axial_profile();
    if profile.is_none() {
        let top = *grids.last().unwrap();
        if top.checked_pow(j.d as u32).is_none_or(|t| t > DENSE_GRID_CAP) {
            return Err(Error::Budget(format!("dense grid {top}^{} exceeds {DENSE_GRID_CAP} nodes", j.d)));
        }
    }
    let mut raw = Vec::with_capacity(grids.len());
    let mut quad_err = vec![0.0; pts.len()];
    let mut t_panels = 0;
    for &m in &grids {
        let (v, e, np) = match &profile {
            Some(p) => axial_grid_sum(p, j.d, m, &pts)?,
            None => (dense_grid_sum(j, m, &pts)?, vec![0.0; pts.len()], 0),
        };
        quad_err.iter_mut().zip(&e).for_each(|(a, b)| *a = f64::max(*a, *b));
        t_panels = t_panels.max(np);
        raw.push(v);
    }

    let exps: Vec<f64> = (0..grids.len() - 1).map(|i| (j.d as f64 - 2.0) + 2.0 * i as f64).collect();
    let n = pts.len();
    let mut values = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n);
    let mut richardson_delta = 0.0f64;
    let mut wrap = 0.0f64;
    for i in 0..n {
        let col: Vec<f64> = raw.iter().map(|v| v[i]).collect();
        let (best, prev) = richardson(&col, &exps);
        let fine = col[col.len() - 1];
        richardson_delta = richardson_delta.max((col[col.len() - 2] - fine).abs());
        wrap = wrap.max((fine - best).abs());
        values.push(best);
        errors.push((best - prev).abs() + quad_err[i]);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow("non-finite Green's function value".into()));
    }
    let truncation_bound = errors.iter().cloned().fold(0.0, f64::max);
    Ok(GreenResult {
        d: j.d,
        method: Method::Quadrature,
        points: pts,
        values,
        errors,
        diagnostics: Diagnostics {
            grids,
            t_panels,
            truncation_bound,
            wrap_contamination: wrap,
            richardson_delta: Some(richardson_delta),
            ..Default::default()
        },
    })
}

/// Repeated Richardson elimination; returns the final value and the
/// best value of the previous stage (its difference is the error estimate).
fn richardson(col: &[f64], exps: &[f64]) -> (f64, f64) {
    let mut cur = col.to_vec();
    let mut prev_best = cur[cur.len() - 1];
    for &p in exps {
        if cur.len() < 2 {
            break;
        }
        prev_best = cur[cur.len() - 1];
        let f = 2f64.powf(p);
        cur = cur.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    (cur[cur.len() - 1], prev_best)
}

/// Exact midpoint sum for axial J via 1/(1−Ĵ) = ∫_0^∞ e^{−t(1−Ĵ)} dt, using
/// 1 − Ĵ(k) = Σ_j ψ(k_j): the grid sum factorizes into one-dimensional sums.
fn axial_grid_sum(profile: &[(i64, f64)], d: usize, m: usize, pts: &[Vec<i64>]) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    let half = m / 2;
    let n_max = pts.iter().flat_map(|x| x.iter().copied()).max().unwrap_or(0) as usize;
    let ks: Vec<f64> = (0..half).map(|i| std::f64::consts::PI * (2 * i + 1) as f64 / m as f64).collect();
    let psi: Vec<f64> = ks.iter().map(|&k| axial_psi(profile, k)).collect();
    let psi_min = psi.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(psi_min > 0.0) {
        return Err(Error::Singular(format!("1 − Ĵ(k) ≤ 0 on the M={m} midpoint grid")));
    }
    // cos table, row per node
    let mut cos = vec![0.0; half * (n_max + 1)];
    for (i, &k) in ks.iter().enumerate() {
        for n in 0..=n_max {
            cos[i * (n_max + 1) + n] = (k * n as f64).cos();
        }
    }
    let t_end = 40.0 / (d as f64 * psi_min);
    let panels = geometric_panels(0.0, t_end, 1.0f64.min(t_end));
    let scale = 2.0 / m as f64;
    let mut s = vec![0.0; n_max + 1];
    let (vals, errs) = integrate_panels(&panels, pts.len(), |t| {
        s.iter_mut().for_each(|v| *v = 0.0);
        for (i, &p) in psi.iter().enumerate() {
            let e = (-t * p).exp();
            if e == 0.0 {
                continue;
            }
            let row = &cos[i * (n_max + 1)..(i + 1) * (n_max + 1)];
            s.iter_mut().zip(row).for_each(|(a, c)| *a += e * c);
        }
        Ok(pts
            .iter()
            .map(|x| x.iter().map(|&c| scale * s[c as usize]).product())
            .collect())
    })?;
    // the neglected tail is below e^{−40} times the last integrand scale
    Ok((vals, errs, panels.len()))
}

/// Dense midpoint sum by one inverse FFT of 1/(1−Ĵ) on the M^d grid.
fn dense_grid_sum(j: &StepDistribution, m: usize, pts: &[Vec<i64>]) -> Result<Vec<f64>> {
    let d = j.d;
    let total = m
        .checked_pow(d as u32)
        .filter(|t| *t <= DENSE_GRID_CAP)
        .ok_or_else(|| Error::Budget(format!("dense grid {m}^{d} exceeds {DENSE_GRID_CAP} nodes")))?;
    let nodes = crate::lattice::FourierGrid::nodes(m);
    let psi = crate::step::TensorPsi::new(j, &nodes);
    let mut data = vec![Complex64::new(0.0, 0.0); total];
    let mut k = vec![0.0; d];
    let mut ix = vec![0usize; d];
    for (idx, slot) in data.iter_mut().enumerate() {
        let mut r = idx;
        for a in (0..d).rev() {
            ix[a] = r % m;
            k[a] = nodes[ix[a]];
            r /= m;
        }
        let den = psi.at(&ix, &k);
        if !(den > 0.0) {
            return Err(Error::Singular(format!("1 − Ĵ(k) = {den:.3e} ≤ 0 at grid node {k:?} (M={m})")));
        }
        *slot = Complex64::new(1.0 / den, 0.0);
    }
    crate::fft::fft_nd(&mut data, d, m, true);
    let shift = std::f64::consts::PI / m as f64 - std::f64::consts::PI;
    let norm = 1.0 / total as f64;
    Ok(pts
        .iter()
        .map(|x| {
            let mut idx = 0usize;
            for &c in x {
                idx = idx * m + c.rem_euclid(m as i64) as usize;
            }
            let phase = shift * x.iter().sum::<i64>() as f64;
            (Complex64::from_polar(1.0, phase) * data[idx]).re * norm
        })
        .collect())
}
