use crate::quad::Rule;
use crate::step::{k0_grid_inf, StepDistribution};
use crate::{Error, Result};

/// Exponent at which e^{−t(1−Ĵ)} is treated as zero outside the k window.
const CUTOFF: f64 = 40.0;
/// Largest number of k nodes per t for the non-axial path.
const GENERIC_NODE_CAP: usize = 4_000_000;

#[derive(Clone, Debug)]
enum Kind {
    Axial { profile: Vec<(i64, f64)>, w1: f64, nonneg: bool },
    Generic { j: StepDistribution, k0: f64 },
}

/// Evaluates the heat kernel I_t(x) = ∫ d^dk/(2π)^d e^{ik·x} e^{−t(1−Ĵ(k))}.
///
/// Axial J (support on the coordinate axes) factorizes into one-dimensional
/// kernels; other J use a tensor trapezoid rule.
#[derive(Clone, Debug)]
pub struct HeatEngine {
    pub d: usize,
    pub k1: f64,
    var1: f64,
    range: i64,
    kind: Kind,
}

impl HeatEngine {
    pub fn new(j: &StepDistribution) -> Result<Self> {
        let range = j.range();
        let var1 = j.axis_variance();
        let kind = match j.axial_profile() {
            Some(profile) => {
                let w1 = profile.iter().find(|(r, _)| *r == 1).map(|p| p.1).unwrap_or(0.0);
                Kind::Axial { nonneg: j.is_nonnegative() && w1 > 0.0, profile, w1 }
            }
            None => {
                let m = crate::step::default_k0_grid(j.d).min(32);
                let k0 = k0_grid_inf(j, m);
                if !(k0 > 0.0) {
                    return Err(Error::Singular("1 − Ĵ(k) is not positive on the grid".into()));
                }
                Kind::Generic { j: j.clone(), k0 }
            }
        };
        Ok(Self { d: j.d, k1: j.moments.k1, var1, range, kind })
    }

    pub fn is_axial(&self) -> bool {
        matches!(self.kind, Kind::Axial { .. })
    }

    /// Aliasing-safe node spacing for kernels needed up to |x_j| ≤ n_max.
    fn spacing(&self, t: f64, n_max: i64) -> f64 {
        let spread = 12.0 * (t * self.var1).sqrt() + 4.0 * self.range as f64 + 20.0;
        std::f64::consts::PI / (n_max as f64 + spread)
    }

    /// I_t at each point.
    pub fn eval(&self, t: f64, pts: &[Vec<i64>]) -> Result<Vec<f64>> {
        let n_max = pts.iter().flat_map(|x| x.iter().map(|c| c.abs())).max().unwrap_or(0);
        match &self.kind {
            Kind::Axial { profile, w1, nonneg } => {
                let kappa = if *nonneg { window(2.0 * w1, t) } else { std::f64::consts::PI };
                let f = axial_kernel(profile, t, kappa, self.spacing(t, n_max), n_max);
                Ok(pts
                    .iter()
                    .map(|x| x.iter().map(|c| f[c.unsigned_abs() as usize]).product())
                    .collect())
            }
            Kind::Generic { j, .. } => {
                let (kappa, kn, total) = self.generic_grid(t, n_max)?;
                Ok(generic_kernel(j, t, kappa, kn, total, pts))
            }
        }
    }

    /// Window, node count per axis and total node count of the non-axial rule.
    fn generic_grid(&self, t: f64, n_max: i64) -> Result<(f64, usize, usize)> {
        let Kind::Generic { k0, .. } = &self.kind else {
            return Ok((std::f64::consts::PI, 0, 0));
        };
        let kappa = (2.0 * self.d as f64 * CUTOFF / (t * 0.5 * k0))
            .sqrt()
            .min(std::f64::consts::PI);
        let kn = (kappa / self.spacing(t, n_max)).ceil().max(1.0) as usize;
        let total = (kn + 1)
            .checked_pow(self.d as u32)
            .filter(|n| *n <= GENERIC_NODE_CAP)
            .ok_or_else(|| Error::Budget(format!("non-axial heat kernel needs {}^{} nodes at t={t:.3e}", kn + 1, self.d)))?;
        Ok((kappa, kn, total))
    }

    /// Fails early when some panel endpoint would exceed the node budget.
    pub fn preflight(&self, panels: &[(f64, f64)], pts: &[Vec<i64>]) -> Result<()> {
        let n_max = pts.iter().flat_map(|x| x.iter().map(|c| c.abs())).max().unwrap_or(0);
        for &(a, b) in panels {
            for t in [a, b] {
                if t > 0.0 {
                    self.generic_grid(t, n_max)?;
                }
            }
        }
        Ok(())
    }
}

/// Smallest κ ≤ π with c·(1 − cos κ)·t ≥ CUTOFF, where c(1 − cos k) ≤ ψ(k).
fn window(c: f64, t: f64) -> f64 {
    let need = CUTOFF / (c * t);
    if need >= 2.0 {
        std::f64::consts::PI
    } else {
        (1.0 - need).acos()
    }
}

/// F_t(n) = (1/2π)∫ cos(kn) e^{−tψ(k)} dk for n = 0..=n_max by the folded
/// trapezoid rule on [0, κ].
fn axial_kernel(profile: &[(i64, f64)], t: f64, kappa: f64, h_req: f64, n_max: i64) -> Vec<f64> {
    let kn = (kappa / h_req).ceil().max(1.0) as usize;
    let h = kappa / kn as f64;
    let mut out = vec![0.0; n_max as usize + 1];
    for i in 0..=kn {
        let k = i as f64 * h;
        let e = (-t * crate::step::axial_psi(profile, k)).exp();
        if e == 0.0 {
            continue;
        }
        let w = if i == 0 || i == kn { 0.5 } else { 1.0 } * e;
        // cos(nk) by the Chebyshev recurrence.
        let c1 = k.cos();
        let (mut prev, mut cur) = (c1, 1.0);
        for (n, slot) in out.iter_mut().enumerate() {
            *slot += w * cur;
            let next = if n == 0 { c1 } else { 2.0 * c1 * cur - prev };
            prev = cur;
            cur = next;
        }
    }
    let scale = h / std::f64::consts::PI;
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

fn generic_kernel(j: &StepDistribution, t: f64, kappa: f64, kn: usize, total: usize, pts: &[Vec<i64>]) -> Vec<f64> {
    let d = j.d;
    let h = kappa / kn as f64;
    let nodes: Vec<f64> = (0..=kn).map(|i| i as f64 * h).collect();
    let psi = crate::step::TensorPsi::new(j, &nodes);
    let mut out = vec![0.0; pts.len()];
    let mut k = vec![0.0; d];
    let mut ix = vec![0usize; d];
    for idx in 0..total {
        let mut r = idx;
        let mut wgt = 1.0;
        for a in (0..d).rev() {
            let i = r % (kn + 1);
            r /= kn + 1;
            ix[a] = i;
            k[a] = nodes[i];
            if i == 0 || i == kn {
                wgt *= 0.5;
            }
        }
        let e = (-t * psi.at(&ix, &k)).exp();
        if e == 0.0 {
            continue;
        }
        for (o, x) in out.iter_mut().zip(pts) {
            let c: f64 = x.iter().zip(&k).map(|(&xa, &ka)| (xa as f64 * ka).cos()).product();
            *o += wgt * e * c;
        }
    }
    let scale = (h / std::f64::consts::PI).powi(d as i32);
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

/// Integrates a vector-valued function of t over panels with a 20-point
/// Gauss rule; the 12-point rule supplies the error estimate.
pub(crate) fn integrate_panels(
    panels: &[(f64, f64)],
    npts: usize,
    mut f: impl FnMut(f64) -> Result<Vec<f64>>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let hi = Rule::legendre(20);
    let lo = Rule::legendre(12);
    let mut total = vec![0.0; npts];
    let mut err = vec![0.0; npts];
    for &(a, b) in panels {
        let mut s_hi = vec![0.0; npts];
        for (t, w) in hi.mapped(a, b) {
            for (s, v) in s_hi.iter_mut().zip(f(t)?) {
                *s += w * v;
            }
        }
        let mut s_lo = vec![0.0; npts];
        for (t, w) in lo.mapped(a, b) {
            for (s, v) in s_lo.iter_mut().zip(f(t)?) {
                *s += w * v;
            }
        }
        for i in 0..npts {
            total[i] += s_hi[i];
            err[i] += (s_hi[i] - s_lo[i]).abs();
        }
    }
    Ok((total, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step::{nn_step, spread_out_step};

    #[test]
    fn heat_kernel_sums_to_one_in_1d() {
        let j = nn_step(1);
        let e = HeatEngine::new(&j).unwrap();
        for t in [0.3, 5.0, 400.0] {
            let pts: Vec<Vec<i64>> = (-200..=200).map(|n| vec![n]).collect();
            let s: f64 = e.eval(t, &pts).unwrap().iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "t={t} sum={s}");
        }
    }

    #[test]
    fn bessel_values() {
        // e^{−t} I_0(t) at t = 1 and e^{−t} I_2(t) at t = 10.
        let e = HeatEngine::new(&nn_step(1)).unwrap();
        let v = e.eval(1.0, &[vec![0]]).unwrap()[0];
        assert!((v - 0.465_759_607_593_640_4).abs() < 1e-14);
        let v = e.eval(10.0, &[vec![2]]).unwrap()[0];
        assert!((v - 0.103_580_800_886_537_5).abs() < 1e-13);
    }

    #[test]
    fn generic_matches_axial_for_nn() {
        let j = nn_step(2);
        let axial = HeatEngine::new(&j).unwrap();
        let generic = HeatEngine { kind: Kind::Generic { j: j.clone(), k0: 0.4 }, ..axial.clone() };
        let pts = vec![vec![0, 0], vec![3, 1]];
        for t in [0.7, 30.0] {
            let a = axial.eval(t, &pts).unwrap();
            let b = generic.eval(t, &pts).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).abs() < 1e-13, "{u} {v}");
            }
        }
    }

    #[test]
    fn generic_spread_out_mass() {
        let j = spread_out_step(2, 1).unwrap();
        let e = HeatEngine::new(&j).unwrap();
        let pts: Vec<Vec<i64>> = (-40..=40).flat_map(|a| (-40..=40).map(move |b| vec![a, b])).collect();
        let s: f64 = e.eval(12.0, &pts).unwrap().iter().sum();
        assert!((s - 1.0).abs() < 1e-10, "{s}");
    }
}
