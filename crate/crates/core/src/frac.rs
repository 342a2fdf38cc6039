//! Fractional-derivative Fourier kernels L_{o,ε}, L_{e,ε} and the probes built on them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::lattice::{fourier_eval, FourierGrid, LatticeField};
use crate::quad::{gamma, Rule};
use crate::step::StepDistribution;
use crate::{Error, Result};

/// Explicit terms of the reflection series before the Euler–Maclaurin tail.
const SERIES_TERMS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
}

/// Σ_{n≥1} Σ_i c_i (2πn + s_i)^a. Requires Σc_i = 0 unless a < −1.
fn reflect_sum(a: f64, terms: &[(f64, f64)], explicit: usize) -> f64 {
    let phi = |n: f64, j: u32| -> f64 {
        let mut fall = 1.0;
        for i in 0..j {
            fall *= a - i as f64;
        }
        let scale = (2.0 * PI).powi(j as i32) * fall;
        terms.iter().map(|(c, s)| c * scale * (2.0 * PI * n + s).powf(a - j as f64)).sum()
    };
    let mut total = crate::sum::KahanSum::new();
    for n in 1..=explicit {
        total.add(phi(n as f64, 0));
    }
    let m = (explicit + 1) as f64;
    let integral: f64 = -terms.iter().map(|(c, s)| c * (2.0 * PI * m + s).powf(a + 1.0)).sum::<f64>() / (2.0 * PI * (a + 1.0));
    total.add(integral);
    total.add(phi(m, 0) / 2.0);
    total.add(-phi(m, 1) / 12.0);
    total.add(phi(m, 3) / 720.0);
    total.add(-phi(m, 5) / 30240.0);
    total.value()
}

/// η(ε) = Σ_{n≥1} (−1)^{n−1} n^{−ε}, by repeated averaging of partial sums.
pub fn dirichlet_eta(eps: f64) -> f64 {
    let k = 64;
    let mut partial = Vec::with_capacity(k);
    let mut s = 0.0;
    for n in 1..=k {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        s += sign * (n as f64).powf(-eps);
        partial.push(s);
    }
    while partial.len() > 1 {
        partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    partial[0]
}

/// The kernel pair of the fractional weighted transforms:
/// ∫_{−π}^{π} e^{ipx} L_{o,ε}(p) dp = |x|^{−ε} sgn x and
/// ∫_{−π}^{π} e^{ipx} L_{e,ε}(p) dp = |x|^{−ε} I[x ≠ 0].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FracKernel {
    pub parity: Parity,
    pub eps: f64,
    pub series_terms: usize,
    le_pi: f64,
}

impl FracKernel {
    pub fn new(parity: Parity, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Domain(format!("ε={eps} must lie in (0, 1)")));
        }
        Ok(Self { parity, eps, series_terms: SERIES_TERMS, le_pi: -dirichlet_eta(eps) / PI })
    }

    /// csc(πε/2)/(2Γ(ε)).
    pub fn c_odd(&self) -> f64 {
        1.0 / (2.0 * (0.5 * PI * self.eps).sin() * gamma(self.eps))
    }

    /// (1−ε) sec(πε/2)/(2Γ(ε)).
    pub fn c_even(&self) -> f64 {
        (1.0 - self.eps) / (2.0 * (0.5 * PI * self.eps).cos() * gamma(self.eps))
    }

    /// Coefficient A of the singular part A|p|^{ε−1} (of iL_o or L_e).
    pub fn singular_coeff(&self) -> f64 {
        match self.parity {
            Parity::Odd => self.c_odd(),
            Parity::Even => self.c_even() / (1.0 - self.eps),
        }
    }

    /// The analytic remainder R(p): iL_o(p) = A sgn(p)|p|^{ε−1} + R(p),
    /// L_e(p) = A|p|^{ε−1} + R(p). Defined on all of [−π, π].
    pub fn regular_part(&self, p: f64) -> f64 {
        let a = self.eps - 1.0;
        let n = self.series_terms;
        match self.parity {
            Parity::Odd => -self.c_odd() * reflect_sum(a, &[(1.0, -p), (-1.0, p)], n),
            Parity::Even => {
                let q = p.abs();
                self.singular_coeff()
                    * (-PI.powf(a) + reflect_sum(a, &[(1.0, -q), (1.0, q), (-1.0, -PI), (-1.0, PI)], n))
                    + self.le_pi
            }
        }
    }

    /// Real profile: iL_o(p) for the odd kernel, L_e(p) for the even one.
    pub fn real_profile(&self, p: f64) -> Result<f64> {
        self.check(p)?;
        let sing = self.singular_coeff() * p.abs().powf(self.eps - 1.0);
        Ok(match self.parity {
            Parity::Odd => sing * p.signum() + self.regular_part(p),
            Parity::Even => sing + self.regular_part(p),
        })
    }

    fn check(&self, p: f64) -> Result<()> {
        if p == 0.0 {
            return Err(Error::Singular("the kernel is singular at p = 0".into()));
        }
        if !(p.abs() <= PI) {
            return Err(Error::Domain(format!("p={p} lies outside [−π, π]")));
        }
        Ok(())
    }

    /// L(p) as a complex number (L_o is pure imaginary, L_e real).
    pub fn eval(&self, p: f64) -> Result<Complex64> {
        let v = self.real_profile(p)?;
        Ok(match self.parity {
            Parity::Odd => Complex64::new(0.0, -v),
            Parity::Even => Complex64::new(v, 0.0),
        })
    }

    /// ∂L(p) as a complex number.
    pub fn derivative(&self, p: f64) -> Result<Complex64> {
        self.check(p)?;
        let q = p.abs();
        let b = self.eps - 2.0;
        let n = self.series_terms;
        Ok(match self.parity {
            Parity::Odd => {
                let ds = -self.c_odd()
                    * (1.0 - self.eps)
                    * (q.powf(b) + reflect_sum(b, &[(1.0, -q), (1.0, q)], n));
                Complex64::new(0.0, -ds)
            }
            Parity::Even => {
                let dl = -self.c_even() * (q.powf(b) - reflect_sum(b, &[(1.0, -q), (-1.0, q)], n));
                Complex64::new(dl * p.signum(), 0.0)
            }
        })
    }

    /// The defining t-integral evaluated by quadrature (independent of the
    /// closed form); returns the same real profile as [`FracKernel::real_profile`].
    pub fn integral_representation(&self, p: f64) -> Result<f64> {
        self.check(p)?;
        let q = p.abs();
        let sp2 = 2.0 * (0.5 * q).sin().powi(2);
        let den = |t: f64| 2.0 * (0.5 * t).sinh().powi(2) + sp2;
        let num = |t: f64| match self.parity {
            Parity::Odd => q.sin(),
            Parity::Even => -(-t).exp_m1() - sp2,
        };
        let beta = self.eps - 1.0;
        let t0 = q / 8.0;
        let jac = Rule::jacobi_left(30, beta);
        let mut total = jac.integrate_left_singular(beta, t0, |t| num(t) / den(t));
        let gl = Rule::legendre(30);
        for (a, b) in crate::quad::geometric_panels(t0, 80.0, t0) {
            total += gl.integrate(a, b, |t| t.powf(beta) * num(t) / den(t));
        }
        let v = total / (2.0 * PI * gamma(self.eps));
        Ok(match self.parity {
            Parity::Odd => v * p.signum(),
            Parity::Even => v,
        })
    }

    /// ∫_{−π}^{π} e^{ipx} L(p) dp by panels; the singular part A|p|^{ε−1}
    /// is integrated against its exact weight on the panel at 0.
    /// Returns (value, self-estimate).
    pub fn fourier_coefficient(&self, x: i64, nodes: usize) -> (f64, f64) {
        let a = self.eval_fourier(x, nodes);
        let b = self.eval_fourier(x, nodes.saturating_sub(6).max(4));
        (a, (a - b).abs())
    }

    fn eval_fourier(&self, x: i64, nodes: usize) -> f64 {
        let xf = x as f64;
        let trig = |p: f64| match self.parity {
            Parity::Odd => (p * xf).sin(),
            Parity::Even => (p * xf).cos(),
        };
        let beta = self.eps - 1.0;
        let amp = self.singular_coeff();
        let panels = 8 + (x.unsigned_abs() as usize).div_ceil(2);
        let w = PI / panels as f64;
        let gl = Rule::legendre(nodes);
        let jac = Rule::jacobi_left(nodes, beta);
        let mut total = crate::sum::KahanSum::new();
        total.add(amp * jac.integrate_left_singular(beta, w, trig));
        for i in 0..panels {
            let (lo, hi) = (i as f64 * w, (i + 1) as f64 * w);
            if i > 0 {
                total.add(gl.integrate(lo, hi, |p| amp * p.powf(beta) * trig(p)));
            }
            total.add(gl.integrate(lo, hi, |p| self.regular_part(p) * trig(p)));
        }
        2.0 * total.value()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub x: i64,
    pub target: f64,
    pub value: f64,
    pub residual: f64,
    pub estimate: f64,
}

/// Residual of the Fourier identity of the kernel at integer x.
pub fn kernel_fourier_identity(kernel: &FracKernel, x: i64, quad_nodes: usize) -> Result<IdentityReport> {
    if quad_nodes < 8 {
        return Err(Error::Domain("the identity quadrature needs at least 8 nodes per panel".into()));
    }
    let (value, estimate) = kernel.fourier_coefficient(x, quad_nodes);
    if estimate > 1e-8 {
        return Err(Error::Quadrature(format!(
            "identity at x={x}: node-count comparison differs by {estimate:.3e}"
        )));
    }
    let mag = if x == 0 { 0.0 } else { (x.unsigned_abs() as f64).powf(-kernel.eps) };
    let target = match kernel.parity {
        Parity::Odd => mag * (x.signum() as f64),
        Parity::Even => mag,
    };
    Ok(IdentityReport { x, target, value, residual: (value - target).abs(), estimate })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FracTransform {
    pub m: u32,
    pub eps: f64,
    pub parity: Parity,
    /// Values of f̂_1^{(m−ε)} on the midpoint grid.
    pub grid: FourierGrid,
    /// Kernel-integrated weight x_1^m ∫e^{ipx_1}L(p)dp per column x_1.
    pub column_weights: Vec<(i64, f64)>,
    /// Largest quadrature self-estimate over the columns.
    pub estimate: f64,
}

/// f̂_1^{(m−ε)}(k) = ∫ L(p) (i∂_1)^m f̂(k_1−p, k⃗) dp on the M grid.
///
/// (i∂_1)^m f̂ is the trigonometric polynomial Σ_x x_1^m f(x) e^{−ik·x}, so the
/// p quadrature reduces to one kernel integral per column x_1. m = 0 uses
/// L_{e,ε} and gives |x_1|^{−ε} I[x_1 ≠ 0] f.
pub fn frac_transform(f: &LatticeField, m: u32, eps: f64, grid_m: usize, quad_nodes: usize) -> Result<FracTransform> {
    let parity = if m % 2 == 1 { Parity::Odd } else { Parity::Even };
    let kernel = FracKernel::new(parity, eps)?;
    let h = f.half();
    let mut column_weights = Vec::with_capacity(f.l);
    let mut estimate = 0.0f64;
    for x1 in -h..=h {
        let (w, e) = kernel.fourier_coefficient(x1, quad_nodes.max(8));
        let pw = (x1 as f64).powi(m as i32);
        column_weights.push((x1, pw * w));
        estimate = estimate.max(pw.abs() * e);
    }
    let mut g = f.clone();
    g.symmetric = false;
    let mut x = vec![0; f.d];
    for i in 0..g.len() {
        g.coords_into(i, &mut x);
        g.values[i] *= column_weights[(x[0] + h) as usize].1;
    }
    let grid = fourier_eval(&g, grid_m)?;
    Ok(FracTransform { m, eps, parity, grid, column_weights, estimate })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeProbe {
    pub m: u32,
    pub grid: usize,
    /// sup over the grid of |k|^{2+m} |∂_1^m Ĝ(k)|.
    pub sup_ratio: f64,
    pub argmax: Vec<f64>,
}

/// ∂_1^j of Σ_x w(x) cos(k·x).
fn cos_series_derivative(support: &[(Vec<i64>, f64)], k: &[f64], j: u32) -> f64 {
    crate::sum::ksum(support.iter().map(|(x, w)| {
        let phase: f64 = x.iter().zip(k).map(|(&a, &b)| a as f64 * b).sum();
        w * (x[0] as f64).powi(j as i32) * (phase + j as f64 * PI / 2.0).cos()
    }))
}

/// sup_k |k|^{2+m} |∂_1^m (ĝ/(1−Ĵ))(k)| with exact derivatives by the
/// Leibniz rule and the recursion for ∂^p(1/(1−Ĵ)).
pub fn derivative_bound_probe(g: &LatticeField, j: &StepDistribution, m: u32, grid: usize) -> Result<DerivativeProbe> {
    if grid < 2 || grid % 2 == 1 {
        return Err(Error::Domain(format!("grid size M={grid} must be even so that k = 0 is not a node")));
    }
    if g.d != j.d {
        return Err(Error::Shape(format!("g has d={} but J has d={}", g.d, j.d)));
    }
    let d = j.d;
    let total = grid
        .checked_pow(d as u32)
        .filter(|n| *n <= 1 << 22)
        .ok_or_else(|| Error::Budget(format!("{grid}^{d} grid nodes exceed 2^22")))?;
    let gs: Vec<(Vec<i64>, f64)> =
        (0..g.len()).filter(|&i| g.values[i] != 0.0).map(|i| (g.coords(i), g.values[i])).collect();
    let nodes = FourierGrid::nodes(grid);
    let binom = |n: u32, k: u32| -> f64 { (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64) };
    let mut best = (0.0f64, vec![0.0; d]);
    let mut k = vec![0.0; d];
    for idx in 0..total {
        let mut r = idx;
        for a in (0..d).rev() {
            k[a] = nodes[r % grid];
            r /= grid;
        }
        let den = j.one_minus_jhat(&k);
        if !(den > 0.0) {
            return Err(Error::Singular(format!("1 − Ĵ(k) ≤ 0 at {k:?}")));
        }
        // D^{(q)} for D = 1 − Ĵ
        let dd: Vec<f64> = (0..=m)
            .map(|q| if q == 0 { den } else { -cos_series_derivative(&j.support, &k, q) })
            .collect();
        let mut u = vec![1.0 / den];
        for q in 1..=m {
            let s: f64 = (0..q).map(|p| binom(q, p) * u[p as usize] * dd[(q - p) as usize]).sum();
            u.push(-s / den);
        }
        let deriv: f64 = (0..=m)
            .map(|p| binom(m, p) * cos_series_derivative(&gs, &k, m - p) * u[p as usize])
            .sum();
        let k2: f64 = k.iter().map(|v| v * v).sum();
        let ratio = k2.sqrt().powi(2 + m as i32) * deriv.abs();
        if ratio > best.0 {
            best = (ratio, k.clone());
        }
    }
    Ok(DerivativeProbe { m, grid, sup_ratio: best.0, argmax: best.1 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvBoundReport {
    pub rho: f64,
    pub eps: f64,
    pub grid: usize,
    /// max |(∂_1 f*g)(k)| |k_1|^{1−ε} |k⃗|^{ρ−1} |k|.
    pub margin: f64,
    /// max of |(∂_1f*g)| / (|k_1|^{ε−1}|k⃗|^{−ρ}) over |k_1| ≤ |k⃗|.
    pub inner_margin: f64,
    /// max of |(∂_1f*g)| / (|k_1|^{ε−2}|k⃗|^{1−ρ}) over |k_1| ≥ |k⃗|.
    pub outer_margin: f64,
}

/// ∫_{−π}^{π} |p|^{ε−1} ∂_1f(k_1−p, s) dp for the periodic surrogate
/// f = (2 − 2cos k_1 + s²)^{−ρ/2}/ρ, with panels graded toward the singular
/// point p = 0 and the peak p = k_1.
fn surrogate_convolution(k1: f64, s: f64, rho: f64, eps: f64, gl: &Rule, jac: &Rule) -> f64 {
    let df = |q: f64| -q.sin() * (2.0 - 2.0 * q.cos() + s * s).powf(-rho / 2.0 - 1.0);
    let beta = eps - 1.0;
    let mut breaks = vec![-PI, 0.0, PI];
    for c in [k1 - s, k1, k1 + s] {
        if c > -PI && c < PI {
            breaks.push(c);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        // grade toward whichever endpoint is 0 or within s of the peak
        let near = |c: f64| c == 0.0 || (c - k1).abs() <= s * (1.0 + 1e-9);
        let (fine_a, fine_b) = (near(a), near(b));
        let mut pieces = Vec::new();
        let min_w = 1e-14f64.max(1e-6 * s.min(k1.abs()).min(1.0));
        let grade = |from: f64, to: f64, pieces: &mut Vec<(f64, f64)>| {
            // from is the fine end
            let len = (to - from).abs();
            let dir = (to - from).signum();
            let mut lo = 0.0;
            let mut hi = min_w.min(len);
            loop {
                pieces.push((from + dir * lo, from + dir * hi));
                if hi >= len {
                    break;
                }
                lo = hi;
                hi = (2.0 * hi).min(len);
            }
        };
        match (fine_a, fine_b) {
            (true, true) => {
                grade(a, mid, &mut pieces);
                grade(b, mid, &mut pieces);
            }
            (true, false) => grade(a, b, &mut pieces),
            (false, true) => grade(b, a, &mut pieces),
            (false, false) => pieces.push((a, b)),
        }
        for (u, v) in pieces {
            let (lo, hi) = (u.min(v), u.max(v));
            if lo == 0.0 {
                total += jac.integrate_left_singular(beta, hi, |p| df(k1 - p));
            } else if hi == 0.0 {
                total += jac.integrate_left_singular(beta, -lo, |p| df(k1 + p));
            } else {
                total += gl.integrate(lo, hi, |p| p.abs().powf(beta) * df(k1 - p));
            }
        }
    }
    total
}

/// Evaluates the one-dimensional convolution bound on the positive quadrant
/// of a midpoint (k_1, |k⃗|) grid.
pub fn conv_bound_check(rho: f64, eps: f64, grid: usize) -> Result<ConvBoundReport> {
    if !(rho > 1.0) {
        return Err(Error::Domain(format!("ρ={rho} must exceed 1")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("ε={eps} must lie in (0, 1)")));
    }
    if grid < 2 || grid % 2 == 1 {
        return Err(Error::Domain(format!("grid size M={grid} must be even")));
    }
    let gl = Rule::legendre(20);
    let jac = Rule::jacobi_left(20, eps - 1.0);
    let pos: Vec<f64> = FourierGrid::nodes(grid).into_iter().filter(|k| *k > 0.0).collect();
    let mut rep = ConvBoundReport { rho, eps, grid, margin: 0.0, inner_margin: 0.0, outer_margin: 0.0 };
    for &k1 in &pos {
        for &s in &pos {
            let v = surrogate_convolution(k1, s, rho, eps, &gl, &jac).abs();
            let kk = (k1 * k1 + s * s).sqrt();
            rep.margin = rep.margin.max(v * k1.powf(1.0 - eps) * s.powf(rho - 1.0) * kk);
            if k1 <= s {
                rep.inner_margin = rep.inner_margin.max(v * k1.powf(1.0 - eps) * s.powf(rho));
            } else {
                rep.outer_margin = rep.outer_margin.max(v * k1.powf(2.0 - eps) * s.powf(rho - 1.0));
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelProbeReport {
    pub epsilon: f64,
    pub parity: Parity,
    /// Largest Fourier-identity residual over the probed x.
    pub max_residual: f64,
    /// Smallest slack of the value bound over the sampled p (negative = violated).
    pub margin: f64,
    /// Smallest slack of the derivative bound over the sampled p.
    pub derivative_margin: f64,
    /// Largest gap between the closed form and the t-integral.
    pub integral_gap: f64,
    pub grid: usize,
}

/// Identity residuals for 0 < |x| ≤ x_max, bounds at `samples` points
/// p_i = π(i+½)/samples (both signs), closed form against t-integral on
/// every 50th sample.
pub fn kernel_probe(kernel: &FracKernel, x_max: i64, samples: usize, quad_nodes: usize) -> Result<KernelProbeReport> {
    let mut max_residual = 0.0f64;
    for x in -x_max..=x_max {
        if x == 0 && kernel.parity == Parity::Odd {
            continue;
        }
        max_residual = max_residual.max(kernel_fourier_identity(kernel, x, quad_nodes)?.residual);
    }
    let eps = kernel.eps;
    let mut margin = f64::INFINITY;
    let mut derivative_margin = f64::INFINITY;
    let mut integral_gap = 0.0f64;
    for i in 0..samples {
        let q = PI * (i as f64 + 0.5) / samples as f64;
        for p in [q, -q] {
            let v = kernel.real_profile(p)?;
            let dv = kernel.derivative(p)?.norm();
            let (slack, dslack) = match kernel.parity {
                Parity::Odd => (0.5 * q.powf(eps - 1.0) - v.abs(), q.powf(eps - 2.0) - dv),
                Parity::Even => (
                    (v + 2f64.ln() / PI).min(q.powf(eps - 1.0) / (PI * (1.0 - eps)) - v),
                    q.powf(eps - 2.0) / PI - dv,
                ),
            };
            margin = margin.min(slack);
            derivative_margin = derivative_margin.min(dslack);
            if i % 50 == 0 {
                let t = kernel.integral_representation(p)?;
                integral_gap = integral_gap.max((t - v).abs() / v.abs().max(1.0));
            }
        }
    }
    Ok(KernelProbeReport {
        epsilon: eps,
        parity: kernel.parity,
        max_residual,
        margin,
        derivative_margin,
        integral_gap,
        grid: samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_values() {
        // η(1/2) = (1 − √2) ζ(1/2)
        assert!((dirichlet_eta(0.5) - 0.604_898_643_421_630_4).abs() < 1e-13);
        assert!((dirichlet_eta(0.999_999) - 2f64.ln()).abs() < 1e-6);
    }

    #[test]
    fn closed_form_matches_t_integral() {
        for parity in [Parity::Odd, Parity::Even] {
            for eps in [0.25, 0.5, 0.75] {
                let k = FracKernel::new(parity, eps).unwrap();
                for p in [0.01, 0.3, 1.7, 3.1, PI] {
                    let a = k.real_profile(p).unwrap();
                    let b = k.integral_representation(p).unwrap();
                    assert!((a - b).abs() < 1e-10 * a.abs().max(1.0), "{parity:?} ε={eps} p={p}: {a} {b}");
                }
            }
        }
    }

    #[test]
    fn known_identity_values() {
        let odd = FracKernel::new(Parity::Odd, 0.5).unwrap();
        assert!(kernel_fourier_identity(&odd, 1, 20).unwrap().residual < 1e-6);
        let even = FracKernel::new(Parity::Even, 0.5).unwrap();
        let r = kernel_fourier_identity(&even, 4, 20).unwrap();
        assert!((r.value - 0.5).abs() < 1e-6);
        assert!(kernel_fourier_identity(&even, 0, 20).unwrap().value.abs() < 1e-6);
    }

    #[test]
    fn singular_point_rejected() {
        let k = FracKernel::new(Parity::Odd, 0.5).unwrap();
        assert!(matches!(k.eval(0.0), Err(Error::Singular(_))));
        assert!(FracKernel::new(Parity::Even, 1.0).is_err());
    }
}
