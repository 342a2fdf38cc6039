//! Step distributions J and their moment constants.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lattice::{canonical, norm2, FourierGrid, LatticeField};
use crate::sum::{ksum, KahanSum};
use crate::{Error, Result};

/// Largest number of sites a counterexample Ẽ may contain.
pub const MAX_SUPPORT: usize = 4_000_000;

/// Slowly varying functions available for the counterexample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", deny_unknown_fields)]
pub enum GSpec {
    /// g(x) = c·log(2+|x|).
    #[serde(rename = "log")]
    Log { c: f64 },
    /// g(x) = c·(log(2+|x|))^κ.
    #[serde(rename = "log_power")]
    LogPower { c: f64, kappa: f64 },
}

impl GSpec {
    pub fn eval(&self, r: f64) -> f64 {
        let lg = (2.0 + r).ln();
        match *self {
            GSpec::Log { c } => c * lg,
            GSpec::LogPower { c, kappa } => c * lg.powf(kappa),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleParams {
    pub d: usize,
    pub eps: f64,
    pub g: GSpec,
    pub l_list: Vec<i64>,
}

impl CounterexampleParams {
    /// h(x) = g(x)^{−(1+ε)/d}.
    pub fn h(&self, r: f64) -> f64 {
        self.g.eval(r).powf(-(1.0 + self.eps) / self.d as f64)
    }

    /// Radius h(x)|x| of the ball around a point of E at distance l.
    pub fn ball_radius(&self, l: i64) -> f64 {
        self.h(l as f64) * l as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum StepKind {
    NearestNeighbor,
    SpreadOut { range: i64 },
    Counterexample { params: CounterexampleParams, delta: f64 },
    Custom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasicMoments {
    pub mass: f64,
    pub k1: f64,
    pub k2: f64,
}

/// Finitely supported ℤ^d-symmetric step weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepDistribution {
    pub d: usize,
    pub support: Vec<(Vec<i64>, f64)>,
    pub kind: StepKind,
    pub moments: BasicMoments,
}

impl StepDistribution {
    /// Builds a distribution from explicit weights; checks mass 1 and symmetry.
    pub fn custom(d: usize, weights: BTreeMap<Vec<i64>, f64>) -> Result<Self> {
        Self::build(d, weights, StepKind::Custom)
    }

    fn build(d: usize, weights: BTreeMap<Vec<i64>, f64>, kind: StepKind) -> Result<Self> {
        if weights.keys().any(|x| x.len() != d) {
            return Err(Error::Shape(format!("support point of wrong dimension (d={d})")));
        }
        let support: Vec<(Vec<i64>, f64)> = weights.into_iter().filter(|(_, w)| *w != 0.0).collect();
        let mass = ksum(support.iter().map(|(_, w)| *w));
        if (mass - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("total mass {mass} differs from 1")));
        }
        let mut by_orbit: BTreeMap<Vec<i64>, Vec<f64>> = BTreeMap::new();
        for (x, w) in &support {
            by_orbit.entry(canonical(x)).or_default().push(*w);
        }
        for (rep, ws) in &by_orbit {
            let n = crate::lattice::orbit_size(rep) as usize;
            let w0 = ws[0];
            if ws.len() != n || ws.iter().any(|w| (w - w0).abs() > 1e-14 * w0.abs().max(1e-300)) {
                return Err(Error::Domain(format!("weights are not ℤ^d-symmetric on the orbit of {rep:?}")));
            }
        }
        let k1 = ksum(support.iter().map(|(x, w)| norm2(x) as f64 * w));
        let k2 = ksum(support.iter().map(|(x, w)| norm2(x) as f64 * w.abs()));
        if !k2.is_finite() {
            return Err(Error::Infeasible("K_2 = Σ|x|²|J(x)| is not finite".into()));
        }
        Ok(Self { d, support, kind, moments: BasicMoments { mass, k1, k2 } })
    }

    pub fn get(&self, x: &[i64]) -> f64 {
        self.support
            .binary_search_by(|(y, _)| y.as_slice().cmp(x))
            .map(|i| self.support[i].1)
            .unwrap_or(0.0)
    }

    /// Ĵ(k) = Σ_x J(x) cos(k·x) (real by symmetry).
    pub fn jhat(&self, k: &[f64]) -> f64 {
        let mut acc = KahanSum::new();
        for (x, w) in &self.support {
            let phase: f64 = x.iter().zip(k).map(|(&a, &b)| a as f64 * b).sum();
            acc.add(w * phase.cos());
        }
        acc.value()
    }

    /// 1 − Ĵ(k) = Σ_x J(x)(1 − cos k·x), free of cancellation near k = 0.
    pub fn one_minus_jhat(&self, k: &[f64]) -> f64 {
        let mut acc = KahanSum::new();
        for (x, w) in &self.support {
            let phase: f64 = x.iter().zip(k).map(|(&a, &b)| a as f64 * b).sum();
            let s = (0.5 * phase).sin();
            acc.add(2.0 * w * s * s);
        }
        acc.value()
    }

    /// ∂Ĵ/∂k_j.
    pub fn jhat_d1(&self, k: &[f64], j: usize) -> f64 {
        -ksum(self.support.iter().map(|(x, w)| {
            let phase: f64 = x.iter().zip(k).map(|(&a, &b)| a as f64 * b).sum();
            w * x[j] as f64 * phase.sin()
        }))
    }

    /// ∂²Ĵ/∂k_j².
    pub fn jhat_d2(&self, k: &[f64], j: usize) -> f64 {
        -ksum(self.support.iter().map(|(x, w)| {
            let phase: f64 = x.iter().zip(k).map(|(&a, &b)| a as f64 * b).sum();
            w * (x[j] * x[j]) as f64 * phase.cos()
        }))
    }

    /// Largest |x|_∞ on the support.
    pub fn range(&self) -> i64 {
        self.support.iter().flat_map(|(x, _)| x.iter().map(|c| c.abs())).max().unwrap_or(0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.support.iter().all(|(_, w)| *w >= 0.0)
    }

    /// True when every support point has odd ℓ¹ norm, so walks alternate parity.
    pub fn is_bipartite(&self) -> bool {
        self.support.iter().all(|(x, _)| x.iter().map(|c| c.abs()).sum::<i64>() % 2 == 1)
    }

    /// True when the support lies on the coordinate axes.
    pub fn is_axial(&self) -> bool {
        self.support.iter().all(|(x, _)| x.iter().filter(|c| **c != 0).count() <= 1)
    }

    /// For axial J: weights w_r = J(r e_1), r ≥ 1, so Ĵ(k) = Σ_j Σ_r 2 w_r cos(r k_j).
    pub fn axial_profile(&self) -> Option<Vec<(i64, f64)>> {
        if !self.is_axial() {
            return None;
        }
        let mut out: Vec<(i64, f64)> = self
            .support
            .iter()
            .filter(|(x, _)| x[0] > 0)
            .map(|(x, w)| (x[0], *w))
            .collect();
        out.sort_by_key(|p| p.0);
        Some(out)
    }

    /// Per-axis second moment Σ_x x_1² J(x) = K_1/d.
    pub fn axis_variance(&self) -> f64 {
        self.moments.k1 / self.d as f64
    }

    pub fn to_field(&self, l: usize) -> Result<LatticeField> {
        let mut f = LatticeField::zeros(self.d, l)?;
        let h = f.half();
        for (x, w) in &self.support {
            if x.iter().any(|c| c.abs() > h) {
                return Err(Error::Shape(format!("support point {x:?} lies outside the L={l} box")));
            }
            f.set(x, *w);
        }
        f.symmetric = true;
        Ok(f)
    }

    /// JSON header (kind, params, moments) for serialized distributions.
    pub fn header_json(&self, rho: f64) -> Result<String> {
        #[derive(Serialize)]
        struct Header<'a> {
            d: usize,
            kind: &'a StepKind,
            support_size: usize,
            moments: MomentReport,
        }
        let h = Header { d: self.d, kind: &self.kind, support_size: self.support.len(), moments: moments(self, rho) };
        Ok(serde_json::to_string_pretty(&h)?)
    }
}

pub fn nn_step(d: usize) -> StepDistribution {
    let w = 1.0 / (2 * d) as f64;
    let mut weights = BTreeMap::new();
    for j in 0..d {
        for s in [-1, 1] {
            let mut x = vec![0; d];
            x[j] = s;
            weights.insert(x, w);
        }
    }
    StepDistribution::build(d, weights, StepKind::NearestNeighbor).expect("nearest-neighbor weights are valid")
}

/// Uniform on 0 < |x|_∞ ≤ range.
pub fn spread_out_step(d: usize, range: i64) -> Result<StepDistribution> {
    if range < 1 {
        return Err(Error::Domain("spread-out range must be at least 1".into()));
    }
    let n = (2 * range + 1).pow(d as u32) - 1;
    let w = 1.0 / n as f64;
    let mut weights = BTreeMap::new();
    let side = (2 * range + 1) as usize;
    for idx in 0..side.pow(d as u32) {
        let mut x = vec![0i64; d];
        let mut r = idx;
        for j in (0..d).rev() {
            x[j] = (r % side) as i64 - range;
            r /= side;
        }
        if x.iter().any(|c| *c != 0) {
            weights.insert(x, w);
        }
    }
    StepDistribution::build(d, weights, StepKind::SpreadOut { range })
}

/// J(x) = (1−δ)/(2d)·I[|x|=1] + g(x)/|x|^{d+2}·I[x ∈ Ẽ] with δ fixing the mass.
pub fn counterexample_step(params: &CounterexampleParams) -> Result<StepDistribution> {
    let d = params.d;
    if d <= 4 {
        return Err(Error::Infeasible(format!("dimension d={d} must exceed 4")));
    }
    let eps_max = (d as f64 - 4.0) / 4.0;
    if !(params.eps > 0.0 && params.eps < eps_max) {
        return Err(Error::Infeasible(format!("ε={} must lie in (0, {eps_max})", params.eps)));
    }
    let (c, ok_kappa) = match params.g {
        GSpec::Log { c } => (c, true),
        GSpec::LogPower { c, kappa } => (c, kappa > 0.0),
    };
    if !(c > 0.0) || !ok_kappa {
        return Err(Error::Infeasible("g must be positive and diverge (c > 0, κ > 0)".into()));
    }
    if params.l_list.iter().any(|&l| l < 2) || params.l_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Infeasible("l_list must be strictly increasing with entries ≥ 2".into()));
    }
    let mut est = 0.0;
    for &l in &params.l_list {
        let r = params.ball_radius(l);
        est += 2.0 * d as f64 * ball_volume(d, r);
    }
    if est > MAX_SUPPORT as f64 {
        return Err(Error::Budget(format!(
            "Ẽ would hold about {est:.3e} sites (cap {MAX_SUPPORT}); lower h by raising g"
        )));
    }
    let mut extra: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    for &l in &params.l_list {
        let radius = params.ball_radius(l);
        let r = radius.floor() as i64;
        for j in 0..d {
            for s in [-1i64, 1] {
                let mut centre = vec![0i64; d];
                centre[j] = s * l;
                for_each_in_ball(d, r, radius * radius, |off| {
                    let y: Vec<i64> = centre.iter().zip(off).map(|(a, b)| a + b).collect();
                    extra.entry(y).or_insert(0.0);
                });
            }
        }
    }
    if extra.contains_key(&vec![0; d]) {
        return Err(Error::Infeasible("a ball of Ẽ contains the origin, where g/|x|^{d+2} is undefined".into()));
    }
    let mut delta_acc = KahanSum::new();
    for (y, w) in extra.iter_mut() {
        let r = (norm2(y) as f64).sqrt();
        *w = params.g.eval(r) / r.powi(d as i32 + 2);
        delta_acc.add(*w);
    }
    let delta = delta_acc.value();
    if delta >= 1.0 {
        return Err(Error::Infeasible(format!(
            "J ≥ 0 violated: δ = {delta:.6} ≥ 1 makes the nearest-neighbor weight (1−δ)/(2d) nonpositive"
        )));
    }
    let nn_w = (1.0 - delta) / (2 * d) as f64;
    let mut weights = extra;
    for j in 0..d {
        for s in [-1i64, 1] {
            let mut x = vec![0; d];
            x[j] = s;
            *weights.entry(x).or_insert(0.0) += nn_w;
        }
    }
    let mut out = StepDistribution::build(
        d,
        weights,
        StepKind::Counterexample { params: params.clone(), delta },
    )?;
    if params.l_list.is_empty() {
        out.kind = StepKind::Counterexample { params: params.clone(), delta: 0.0 };
    }
    Ok(out)
}

fn ball_volume(d: usize, r: f64) -> f64 {
    let r = r.max(0.5);
    std::f64::consts::PI.powf(d as f64 / 2.0) / crate::quad::gamma(d as f64 / 2.0 + 1.0) * r.powi(d as i32)
}

fn for_each_in_ball(d: usize, r: i64, r2: f64, mut f: impl FnMut(&[i64])) {
    let side = (2 * r + 1) as usize;
    let mut off = vec![0i64; d];
    for idx in 0..side.pow(d as u32) {
        let mut t = idx;
        for j in (0..d).rev() {
            off[j] = (t % side) as i64 - r;
            t /= side;
        }
        if norm2(&off) as f64 <= r2 {
            f(&off);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mass: f64,
    pub k1: f64,
    pub k2: f64,
    pub rho: f64,
    pub k2_prime: f64,
    pub k3: f64,
    pub k3_prime: f64,
    pub k0: f64,
    pub k0_grid: usize,
}

/// Default K_0 grid: the largest even M ≤ 64 with M^d ≤ 2^20 nodes.
pub fn default_k0_grid(d: usize) -> usize {
    let mut m = 64usize;
    while m > 2 && m.pow(d as u32) > 1 << 20 {
        m -= 2;
    }
    m
}

pub fn moments(j: &StepDistribution, rho: f64) -> MomentReport {
    moments_with_grid(j, rho, default_k0_grid(j.d))
}

pub fn moments_with_grid(j: &StepDistribution, rho: f64, m: usize) -> MomentReport {
    let d = j.d as i32;
    let k2_prime = ksum(j.support.iter().map(|(x, w)| (norm2(x) as f64).powf(1.0 + rho / 2.0) * w.abs()));
    let sup = |extra: f64| {
        j.support
            .iter()
            .map(|(x, w)| (norm2(x) as f64).sqrt().max(1.0).powf(d as f64 + 2.0 + extra) * w.abs())
            .fold(0.0, f64::max)
    };
    MomentReport {
        mass: j.moments.mass,
        k1: j.moments.k1,
        k2: j.moments.k2,
        rho,
        k2_prime,
        k3: sup(0.0),
        k3_prime: sup(rho),
        k0: k0_grid_inf(j, m),
        k0_grid: m,
    }
}

/// inf over the midpoint grid of 2d(1 − Ĵ(k))/|k|².
pub fn k0_grid_inf(j: &StepDistribution, m: usize) -> f64 {
    let nodes = FourierGrid::nodes(m);
    let d = j.d;
    let mut best = f64::INFINITY;
    let psi = TensorPsi::new(j, &nodes);
    let mut idx = vec![0usize; d];
    let mut k = vec![0.0; d];
    loop {
        k.iter_mut().zip(&idx).for_each(|(a, &i)| *a = nodes[i]);
        let k2: f64 = k.iter().map(|v| v * v).sum();
        best = best.min(2.0 * d as f64 * psi.at(&idx, &k) / k2);
        let mut a = d;
        loop {
            if a == 0 {
                return best;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < m {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// 1 − Ĵ on a tensor grid with the same nodes on every axis.
///
/// Axial and box (spread-out) steps reduce to per-axis tables; other steps
/// fall back to the direct sum over the support.
pub struct TensorPsi<'a> {
    kind: PsiKind<'a>,
}

enum PsiKind<'a> {
    Axial(Vec<f64>),
    /// s = 2L+1, n = s^d − 1 and e_i = s − D_L(k_i) with D_L the Dirichlet kernel.
    Box { s: f64, n: f64, e: Vec<f64> },
    Direct(&'a StepDistribution),
}

impl<'a> TensorPsi<'a> {
    pub fn new(j: &'a StepDistribution, nodes: &[f64]) -> Self {
        if let Some(p) = j.axial_profile() {
            return Self { kind: PsiKind::Axial(nodes.iter().map(|&k| axial_psi(&p, k)).collect()) };
        }
        if let StepKind::SpreadOut { range } = j.kind {
            let s = (2 * range + 1) as f64;
            let e = nodes
                .iter()
                .map(|&k| {
                    ksum((1..=range).map(|c| {
                        let v = (0.5 * c as f64 * k).sin();
                        4.0 * v * v
                    }))
                })
                .collect();
            return Self { kind: PsiKind::Box { s, n: s.powi(j.d as i32) - 1.0, e } };
        }
        Self { kind: PsiKind::Direct(j) }
    }

    /// Value at node indices `idx`; `k` holds the same point in coordinates.
    pub fn at(&self, idx: &[usize], k: &[f64]) -> f64 {
        match &self.kind {
            PsiKind::Axial(ps) => idx.iter().map(|&i| ps[i]).sum(),
            PsiKind::Box { s, n, e } => {
                // s^m − Π(s − e_a), accumulated without cancellation
                let (mut p, mut q) = (1.0, 0.0);
                for &i in idx {
                    q = s * q + p * e[i];
                    p *= s - e[i];
                }
                q / n
            }
            PsiKind::Direct(j) => j.one_minus_jhat(k),
        }
    }
}

/// ψ(k) = Σ_r 2 w_r (1 − cos r k), the per-axis share of 1 − Ĵ for axial J.
pub fn axial_psi(profile: &[(i64, f64)], k: f64) -> f64 {
    ksum(profile.iter().map(|(r, w)| {
        let s = (0.5 * *r as f64 * k).sin();
        4.0 * w * s * s
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub ok: bool,
    pub grid: usize,
    /// max over nodes of (1 − Ĵ)/(K_2|k|²/2d); at most 1 when the bound holds.
    pub max_upper_ratio: f64,
    pub min_one_minus_jhat: f64,
    /// max |R̂_2(k)|/|k|² over nodes with |k| below `small_k`.
    pub r2_ratio: f64,
    pub small_k: f64,
    /// max |∂_1Ĵ|/(K_2|k_1|/d) by central differences.
    pub d1_ratio: f64,
    /// max |∂_1²Ĵ|/(K_2/d) by central differences.
    pub d2_ratio: f64,
    pub witness: Option<Vec<f64>>,
}

/// Checks 0 ≤ 1 − Ĵ ≤ K_2|k|²/2d and the first/second derivative bounds on
/// the midpoint grid (M^d nodes; keep M^d modest).
pub fn jhat_bounds_check(j: &StepDistribution, m: usize) -> Result<BoundReport> {
    if (j.moments.mass - 1.0).abs() > 1e-12 {
        return Err(Error::Domain("jhat_bounds_check needs Ĵ(0) = 1".into()));
    }
    let d = j.d;
    let df = d as f64;
    let k2c = j.moments.k2;
    let nodes = FourierGrid::nodes(m);
    let small_k = 4.0 * std::f64::consts::PI / m as f64;
    let hstep = 1e-4;
    let mut rep = BoundReport {
        ok: true,
        grid: m,
        max_upper_ratio: 0.0,
        min_one_minus_jhat: f64::INFINITY,
        r2_ratio: 0.0,
        small_k,
        d1_ratio: 0.0,
        d2_ratio: 0.0,
        witness: None,
    };
    let total = m.checked_pow(d as u32).filter(|n| *n <= 1 << 22).ok_or_else(|| {
        Error::Budget(format!("grid {m}^{d} too large for the bound check"))
    })?;
    for idx in 0..total {
        let mut t = idx;
        let mut k = vec![0.0; d];
        for a in (0..d).rev() {
            k[a] = nodes[t % m];
            t /= m;
        }
        let k2: f64 = k.iter().map(|v| v * v).sum();
        let omj = j.one_minus_jhat(&k);
        let upper = k2c * k2 / (2.0 * df);
        rep.max_upper_ratio = rep.max_upper_ratio.max(omj / upper);
        rep.min_one_minus_jhat = rep.min_one_minus_jhat.min(omj);
        let tol = 1e-12;
        if (omj < -tol || omj > upper * (1.0 + 1e-12) + tol) && rep.witness.is_none() {
            rep.ok = false;
            rep.witness = Some(k.clone());
        }
        if k2.sqrt() < small_k {
            let r2 = omj - j.moments.k1 * k2 / (2.0 * df);
            rep.r2_ratio = rep.r2_ratio.max(r2.abs() / k2);
        }
        let mut kp = k.clone();
        kp[0] += hstep;
        let mut km = k.clone();
        km[0] -= hstep;
        let jp = j.jhat(&kp);
        let jm = j.jhat(&km);
        let j0 = j.jhat(&k);
        let d1 = (jp - jm) / (2.0 * hstep);
        let d2 = (jp - 2.0 * j0 + jm) / (hstep * hstep);
        let b1 = k2c * k[0].abs() / df;
        let b2 = k2c / df;
        rep.d1_ratio = rep.d1_ratio.max(d1.abs() / b1);
        rep.d2_ratio = rep.d2_ratio.max(d2.abs() / b2);
        if (d1.abs() > b1 * (1.0 + 1e-5) + 1e-9 || d2.abs() > b2 * (1.0 + 1e-4) + 1e-6) && rep.witness.is_none() {
            rep.ok = false;
            rep.witness = Some(k.clone());
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nn_basics() {
        let j = nn_step(5);
        assert_eq!(j.support.len(), 10);
        assert!(j.support.iter().all(|(_, w)| (*w - 0.1).abs() < 1e-15));
        for d in 1..7 {
            let j = nn_step(d);
            assert!((j.moments.k1 - 1.0).abs() < 1e-14);
            assert!((j.moments.mass - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn nn_moments() {
        let m = moments(&nn_step(3), 1.5);
        assert!((m.k2 - 1.0).abs() < 1e-14 && (m.k2_prime - 1.0).abs() < 1e-14);
        assert!((m.k3 - 1.0 / 6.0).abs() < 1e-15);
        let m = moments_with_grid(&nn_step(2), 0.0, 64);
        assert!(m.k0 > 0.0 && m.k0 <= m.k1);
    }

    #[test]
    fn nn_bound_check() {
        let r = jhat_bounds_check(&nn_step(3), 16).unwrap();
        assert!(r.ok, "{r:?}");
        assert!(r.max_upper_ratio <= 1.0);
    }

    #[test]
    fn asymmetric_rejected() {
        let mut w = BTreeMap::new();
        w.insert(vec![1], 0.7);
        w.insert(vec![-1], 0.3);
        assert!(StepDistribution::custom(1, w).is_err());
    }

    #[test]
    fn empty_counterexample_is_nn() {
        let p = CounterexampleParams { d: 5, eps: 0.1, g: GSpec::Log { c: 1.0 }, l_list: vec![] };
        let j = counterexample_step(&p).unwrap();
        assert_eq!(j.support, nn_step(5).support);
    }

    #[test]
    fn counterexample_rejects_bad_eps() {
        let p = CounterexampleParams { d: 5, eps: 0.3, g: GSpec::Log { c: 1.0 }, l_list: vec![16] };
        assert!(matches!(counterexample_step(&p), Err(Error::Infeasible(_))));
        let p = CounterexampleParams { d: 4, eps: 0.1, g: GSpec::Log { c: 1.0 }, l_list: vec![16] };
        assert!(matches!(counterexample_step(&p), Err(Error::Infeasible(_))));
    }
}
