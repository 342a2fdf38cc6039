//! Diagrammatic quantities built from a two-point field G: bubble, weighted
//! bubble, triangle, square, pentagon and the two-displacement diagram H.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::{convolve, weighted_field, LatticeField, WeightMode};
use crate::{Error, Result};

/// Reference value of λ used in reports.
pub const LAMBDA_REF: f64 = 0.493;

/// Work cap (site-pair visits) for the H samples.
const H_BUDGET: f64 = 2e9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramOptions {
    /// Weight pairs (β, γ) for W and T; S uses the γ's, H the β's.
    pub weights: Vec<(f64, f64)>,
    /// Displacement pairs (a, b) at which H is evaluated.
    pub h_samples: Vec<(Vec<i64>, Vec<i64>)>,
    /// Largest tolerated fraction of the pentagon's mass beyond radius (L−1)/2.
    pub wrap_tolerance: f64,
}

impl DiagramOptions {
    /// Axis samples a = r e_1, b = s e_1 with 0 ≤ r, s ≤ 4.
    pub fn axis_samples(d: usize, r_max: i64) -> Vec<(Vec<i64>, Vec<i64>)> {
        let ax = |r: i64| {
            let mut v = vec![0; d];
            v[0] = r;
            v
        };
        (0..=r_max).flat_map(|r| (0..=r_max).map(move |s| (ax(r), ax(s)))).collect()
    }

    pub fn new(d: usize, weights: Vec<(f64, f64)>) -> Self {
        Self { weights, h_samples: Self::axis_samples(d, 4), wrap_tolerance: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedDiagram {
    pub beta: f64,
    pub gamma: f64,
    pub field: LatticeField,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HSample {
    pub beta: f64,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Bars {
    /// Ḡ^{(α)} = sup |a|^α G(a) for every exponent in use.
    pub g: Vec<(f64, f64)>,
    pub b: f64,
    pub w: Vec<(f64, f64, f64)>,
    pub t: Vec<(f64, f64, f64)>,
    pub s: Vec<(f64, f64)>,
    pub p: f64,
    /// Max over the H sample set: a lower estimate of the true sup.
    pub h: Vec<(f64, f64)>,
    pub h_is_sample_max: bool,
}

impl Bars {
    pub fn g_bar(&self, alpha: f64) -> Option<f64> {
        self.g.iter().find(|e| e.0 == alpha).map(|e| e.1)
    }

    pub fn w_bar(&self, beta: f64, gamma: f64) -> Option<f64> {
        self.w.iter().find(|e| e.0 == beta && e.1 == gamma).map(|e| e.2)
    }

    pub fn t_bar(&self, beta: f64, gamma: f64) -> Option<f64> {
        self.t.iter().find(|e| e.0 == beta && e.1 == gamma).map(|e| e.2)
    }

    pub fn s_bar(&self, gamma: f64) -> Option<f64> {
        self.s.iter().find(|e| e.0 == gamma).map(|e| e.1)
    }

    pub fn h_bar(&self, beta: f64) -> Option<f64> {
        self.h.iter().find(|e| e.0 == beta).map(|e| e.1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramSet {
    pub d: usize,
    pub l: usize,
    pub b: LatticeField,
    pub w: Vec<WeightedDiagram>,
    pub t: Vec<WeightedDiagram>,
    pub s: Vec<WeightedDiagram>,
    pub p: LatticeField,
    pub h: Vec<HSample>,
    pub bars: Bars,
    pub wrap_contamination: f64,
    pub warnings: Vec<String>,
}

impl DiagramSet {
    pub fn w(&self, beta: f64, gamma: f64) -> Option<&LatticeField> {
        self.w.iter().find(|e| e.beta == beta && e.gamma == gamma).map(|e| &e.field)
    }

    pub fn t(&self, beta: f64, gamma: f64) -> Option<&LatticeField> {
        self.t.iter().find(|e| e.beta == beta && e.gamma == gamma).map(|e| &e.field)
    }

    pub fn s(&self, gamma: f64) -> Option<&LatticeField> {
        self.s.iter().find(|e| e.gamma == gamma).map(|e| &e.field)
    }

    pub fn bars_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.bars)?)
    }
}

fn distinct(v: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for x in v {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn is_odd_integer(x: f64) -> bool {
    x.fract() == 0.0 && (x as i64) % 2 != 0
}

/// x ↦ f(−x).
pub fn reflected(f: &LatticeField) -> LatticeField {
    let mut out = f.clone();
    let mut x = vec![0; f.d];
    for i in 0..f.len() {
        f.coords_into(i, &mut x);
        x.iter_mut().for_each(|c| *c = -*c);
        out.values[i] = f.get(&x);
    }
    out
}

fn sup_weighted(g: &LatticeField, alpha: f64) -> Result<f64> {
    Ok(weighted_field(g, alpha, WeightMode::Full)?.sup())
}

/// All diagram quantities of G on its periodic box.
pub fn diagram_suite(g: &LatticeField, opts: &DiagramOptions) -> Result<DiagramSet> {
    let d = g.d;
    let mut warnings = Vec::new();
    if !g.symmetric {
        warnings.push("G is not flagged ℤ^d-symmetric".to_string());
    }
    let mut weights = vec![(0.0, 0.0)];
    for &(b, c) in &opts.weights {
        if !(b >= 0.0 && c >= 0.0) {
            return Err(Error::Domain(format!("weights ({b}, {c}) must be nonnegative")));
        }
        if !weights.contains(&(b, c)) {
            weights.push((b, c));
        }
    }
    let betas = distinct(weights.iter().map(|w| w.0));
    let gammas = distinct(weights.iter().map(|w| w.1));
    for &e in betas.iter().chain(&gammas) {
        if is_odd_integer(e) {
            warnings.push(format!("exponent {e} is an odd integer"));
        }
    }
    let exps = distinct(betas.iter().chain(&gammas).copied().chain([0.0, 2.0]));
    let weighted: Vec<(f64, LatticeField)> =
        exps.iter().map(|&a| weighted_field(g, a, WeightMode::Full).map(|f| (a, f))).collect::<Result<_>>()?;
    let gw = |a: f64| &weighted.iter().find(|e| e.0 == a).unwrap().1;

    let origin = vec![0; d];
    let g0 = g.get(&origin);
    let gg = convolve(g, g)?;
    let mut b = gg.sub(&g.scaled(g0))?;
    b.symmetric = gg.symmetric;
    let ggg = convolve(&gg, g)?;
    let p = convolve(&convolve(&ggg, g)?, g)?;

    let mut w = Vec::new();
    let mut t = Vec::new();
    for &(beta, gamma) in &weights {
        let wf = convolve(gw(beta), gw(gamma))?;
        let mut tf = convolve(&wf, g)?;
        if beta == 0.0 && gamma == 0.0 {
            let v = tf.get(&origin) - g0.powi(3);
            tf.set(&origin, v);
        }
        w.push(WeightedDiagram { beta, gamma, field: wf });
        t.push(WeightedDiagram { beta, gamma, field: tf });
    }
    let mut s = Vec::new();
    for &gamma in &gammas {
        let mut sf = convolve(gw(gamma), &ggg)?;
        if gamma == 0.0 {
            let v = sf.get(&origin) - g0.powi(4);
            sf.set(&origin, v);
        }
        s.push(WeightedDiagram { beta: 0.0, gamma, field: sf });
    }

    let total = p.values.iter().map(|v| v.abs()).sum::<f64>();
    let wrap_contamination = if total > 0.0 { p.wrap_contamination() / total } else { 0.0 };
    if wrap_contamination > opts.wrap_tolerance {
        return Err(Error::Wrap { contamination: wrap_contamination, tolerance: opts.wrap_tolerance });
    }

    let h = h_samples(g, &betas, &opts.h_samples)?;

    let bars = Bars {
        g: exps.iter().map(|&a| Ok((a, sup_weighted(g, a)?))).collect::<Result<_>>()?,
        b: b.sup(),
        w: w.iter().map(|e| (e.beta, e.gamma, e.field.sup())).collect(),
        t: t.iter().map(|e| (e.beta, e.gamma, e.field.sup())).collect(),
        s: s.iter().map(|e| (e.gamma, e.field.sup())).collect(),
        p: p.sup(),
        h: betas
            .iter()
            .map(|&be| {
                let m = h.iter().filter(|e| e.beta == be).map(|e| e.value).fold(f64::NEG_INFINITY, f64::max);
                (be, m)
            })
            .filter(|e| e.1.is_finite())
            .collect(),
        h_is_sample_max: true,
    };
    Ok(DiagramSet { d, l: g.l, b, w, t, s, p, h, bars, wrap_contamination, warnings })
}

/// H^{(β)}(a,b) = Σ_{x,u,v} G(u)G(x−u)G^{(β)}(x)G(v−u) R(a−v) R(x+b−v) with
/// R(c) = Σ_z G(z)G(z+c); the u sum is one convolution per x.
fn h_samples(g: &LatticeField, betas: &[f64], samples: &[(Vec<i64>, Vec<i64>)]) -> Result<Vec<HSample>> {
    if samples.is_empty() {
        return Ok(Vec::new());
    }
    for (a, b) in samples {
        if a.len() != g.d || b.len() != g.d {
            return Err(Error::Shape(format!("H sample ({a:?}, {b:?}) does not have dimension {}", g.d)));
        }
    }
    let n = g.len();
    let work = (n as f64) * (n as f64) * samples.len() as f64;
    if work > H_BUDGET {
        return Err(Error::Budget(format!(
            "H on {} samples needs ~{work:.1e} site visits (cap {H_BUDGET:.0e}); shrink the box or the sample set",
            samples.len()
        )));
    }
    let r = convolve(&reflected(g), g)?;
    let gb: Vec<LatticeField> =
        betas.iter().map(|&be| weighted_field(g, be, WeightMode::Full)).collect::<Result<_>>()?;
    let mut acc = vec![vec![0.0; samples.len()]; betas.len()];
    let mut x = vec![0; g.d];
    let mut v = vec![0; g.d];
    let mut tmp = vec![0; g.d];
    let mut a_x = LatticeField::zeros(g.d, g.l)?;
    a_x.symmetric = false;
    for xi in 0..n {
        if gb.iter().all(|f| f.values[xi] == 0.0) {
            continue;
        }
        g.coords_into(xi, &mut x);
        for ui in 0..n {
            g.coords_into(ui, &mut v);
            for k in 0..g.d {
                tmp[k] = x[k] - v[k];
            }
            a_x.values[ui] = g.values[ui] * g.get(&tmp);
        }
        let t_x = convolve(&a_x, g)?;
        for (si, (a, b)) in samples.iter().enumerate() {
            let mut s = crate::sum::KahanSum::new();
            for vi in 0..n {
                let tv = t_x.values[vi];
                if tv == 0.0 {
                    continue;
                }
                g.coords_into(vi, &mut v);
                for k in 0..g.d {
                    tmp[k] = a[k] - v[k];
                }
                let r1 = r.get(&tmp);
                for k in 0..g.d {
                    tmp[k] = x[k] + b[k] - v[k];
                }
                s.add(tv * r1 * r.get(&tmp));
            }
            let inner = s.value();
            for (bi, f) in gb.iter().enumerate() {
                acc[bi][si] += f.values[xi] * inner;
            }
        }
    }
    Ok(betas
        .iter()
        .enumerate()
        .flat_map(|(bi, &beta)| {
            samples
                .iter()
                .enumerate()
                .map(move |(si, (a, b))| (bi, si, beta, a.clone(), b.clone()))
        })
        .map(|(bi, si, beta, a, b)| HSample { beta, a, b, value: acc[bi][si] })
        .collect())
}

/// sup_a B(a) on ℤ^d for G vanishing outside its box (no periodic wrap),
/// over canonical a; assumes G is ℤ^d-symmetric.
pub fn bubble_sup_exact(g: &LatticeField) -> Result<(f64, Vec<i64>)> {
    let support: Vec<(Vec<i64>, f64)> = (0..g.len())
        .filter(|&i| g.values[i] != 0.0)
        .map(|i| (g.coords(i), g.values[i]))
        .filter(|(x, _)| x.iter().any(|&c| c != 0))
        .collect();
    let pts = crate::lattice::canonical_points(g.d, 2 * g.half());
    let work = pts.len() as f64 * support.len() as f64;
    if work > 1e11 {
        return Err(Error::Budget(format!("exact bubble needs {work:.1e} products")));
    }
    let best = pts
        .par_iter()
        .map(|a| {
            let mut z = vec![0; g.d];
            let v = crate::sum::ksum(support.iter().map(|(y, gy)| {
                for k in 0..g.d {
                    z[k] = a[k] - y[k];
                }
                gy * g.get_inside(&z).unwrap_or(0.0)
            }));
            (v, a.clone())
        })
        .reduce(|| (f64::NEG_INFINITY, Vec::new()), |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x });
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiBound {
    pub n: u32,
    /// (sup_{x≠0} G) B̄^{N−1}.
    pub unweighted: f64,
    /// Weighted bound for Σ|x|^{α+β+γ}Π^{(N)}(x).
    pub weighted: f64,
    /// B̄: the ratio of successive unweighted bounds.
    pub ratio: f64,
}

/// Π^{(N)} sum bounds assembled from diagram bars. For N ≥ 3 the weighted
/// bound is N^{α+β+γ+2} Ḡ^{(α)} max(W̄^{(β,γ)}, W̄^{(β,0)}W̄^{(0,γ)}) B̄^{N−3};
/// at N = 2 it is Ḡ^{(α)} W̄^{(β,γ)}.
pub fn pi_sum_bound_saw(g: &LatticeField, set: &DiagramSet, n: u32, weights: (f64, f64, f64)) -> Result<PiBound> {
    if n < 2 {
        return Err(Error::Domain(format!("N={n} must be at least 2")));
    }
    let (al, be, ga) = weights;
    let bars = &set.bars;
    let missing = |what: String| Error::Domain(format!("{what} was not computed by the diagram suite"));
    let gbar = match bars.g_bar(al) {
        Some(v) => v,
        None => sup_weighted(g, al)?,
    };
    let w_bg = bars.w_bar(be, ga).ok_or_else(|| missing(format!("W^({be},{ga})")))?;
    let sup_g = g.sup_off_origin().max(0.0);
    let unweighted = sup_g * bars.b.powi(n as i32 - 1);
    let weighted = if n == 2 {
        gbar * w_bg
    } else {
        let w_b0 = bars.w_bar(be, 0.0).ok_or_else(|| missing(format!("W^({be},0)")))?;
        let w_0g = bars.w_bar(0.0, ga).ok_or_else(|| missing(format!("W^(0,{ga})")))?;
        (n as f64).powf(al + be + ga + 2.0) * gbar * w_bg.max(w_b0 * w_0g) * bars.b.powi(n as i32 - 3)
    };
    Ok(PiBound { n, unweighted, weighted, ratio: bars.b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Saw,
    Percolation,
    Ltla,
}

impl Model {
    /// α required of G(x) ≤ c|||x|||^{−α}.
    pub fn alpha_threshold(self, d: usize) -> f64 {
        let d = d as f64;
        match self {
            Model::Saw => (d + 2.0) / 3.0,
            Model::Percolation => (d + 2.0) / 2.0,
            Model::Ltla => (3.0 * d + 2.0) / 4.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseExponent {
    pub model: Model,
    pub d: usize,
    pub alpha: f64,
    /// |Π(x)| ≤ coefficient·|||x|||^{−exponent}.
    pub exponent: f64,
    pub coefficient: f64,
    pub coefficient_form: String,
    pub alpha_threshold: f64,
    /// exponent ≥ d + 2 (the decay demanded of J).
    pub meets_step_decay: bool,
}

/// Decay of Π(x) implied by G(x) ≤ β_coef/|||x|||^α.
pub fn pi_pointwise_exponent(model: Model, d: usize, alpha: f64, beta_coef: f64) -> Result<PointwiseExponent> {
    let df = d as f64;
    if !(alpha > 0.0 && alpha < df) {
        return Err(Error::Domain(format!("α={alpha} must lie in (0, d={d})")));
    }
    if !(beta_coef > 0.0) {
        return Err(Error::Domain("the coefficient β must be positive".into()));
    }
    let (exponent, coefficient, form) = match model {
        Model::Saw => (3.0 * alpha, beta_coef.powi(3), "beta^3"),
        Model::Percolation => (2.0 * alpha, beta_coef.powi(2), "beta^2"),
        Model::Ltla => {
            if alpha <= df / 2.0 {
                return Err(Error::Domain(format!("LTLA needs α > d/2 = {}, got α={alpha}", df / 2.0)));
            }
            (4.0 * alpha - 2.0 * df, beta_coef.powi(2).max(beta_coef.powi(4)), "max(beta^2, beta^4)")
        }
    };
    Ok(PointwiseExponent {
        model,
        d,
        alpha,
        exponent,
        coefficient,
        coefficient_form: form.to_string(),
        alpha_threshold: model.alpha_threshold(d),
        meets_step_decay: exponent >= df + 2.0,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PivotReport {
    pub p: f64,
    /// 2dp (D*G).
    pub field: LatticeField,
    pub gamma: f64,
    /// 2dp T̄^{(0,γ)}: the bound when the pivot does not touch the origin.
    pub generic_bound: f64,
    /// p[(2d−1)T̄^{(0,γ)} + 1 + T̄^{(0,γ)}]: the bound when |f| = 1.
    pub adjacent_bound: f64,
    /// adjacent_bound − generic_bound (= p), flagged as the nearest-neighbor correction.
    pub adjustment: f64,
}

/// Nearest-neighbor pivot line 2dp(D*G)(y−x) and the bounds on its
/// triangle-weighted use.
pub fn pivot_factor(g: &LatticeField, p: f64, gamma: f64) -> Result<PivotReport> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!("p={p} must be positive")));
    }
    let d = g.d;
    let dn = crate::step::nn_step(d).to_field(g.l)?;
    let field = convolve(&dn, g)?.scaled(2.0 * d as f64 * p);
    let opts = DiagramOptions { weights: vec![(0.0, gamma)], h_samples: Vec::new(), wrap_tolerance: f64::INFINITY };
    let set = diagram_suite(g, &opts)?;
    let tbar = set.bars.t_bar(0.0, gamma).unwrap_or(0.0);
    let generic_bound = 2.0 * d as f64 * p * tbar;
    let adjacent_bound = p * ((2.0 * d as f64 - 1.0) * tbar + 1.0 + tbar);
    Ok(PivotReport { p, field, gamma, generic_bound, adjacent_bound, adjustment: adjacent_bound - generic_bound })
}
