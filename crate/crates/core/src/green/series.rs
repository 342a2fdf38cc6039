use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Diagnostics, GreenResult, Method, Points};
use crate::lattice::LatticeField;
use crate::step::StepDistribution;
use crate::sum::ksum;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesOptions {
    /// Odd torus side.
    pub l: usize,
    /// Last explicitly summed convolution power.
    pub n_max: u64,
    /// Add the local-CLT estimate of Σ_{n>n_max} J^{(*n)}.
    pub tail: bool,
    /// Largest tolerated periodic-image estimate relative to C(x).
    pub wrap_tolerance: f64,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self { l: 61, n_max: 256, tail: true, wrap_tolerance: 1e-7 }
    }
}

/// Raw partial sums Σ_{n≤N} J^{(*n)} on the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport {
    pub n_max: u64,
    pub sums: LatticeField,
    /// J^{(*N)} itself.
    pub last_term: LatticeField,
    /// Σ|J^{(*N)}| outside radius (L−1)/2.
    pub mass_outside: f64,
}

/// (Σ_{m=0}^{n} z^m, z^n) by halving.
fn geometric(z: Complex64, n: u64) -> (Complex64, Complex64) {
    if n == 0 {
        return (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    }
    if n % 2 == 1 {
        let (s, p) = geometric(z, n - 1);
        let p = p * z;
        (s + p, p)
    } else {
        let (s, p) = geometric(z, n / 2);
        (s + p * (s - 1.0), p * p)
    }
}

pub fn series_partial_sums(j: &StepDistribution, l: usize, n_max: u64) -> Result<SeriesReport> {
    let jf = j.to_field(l)?;
    let jhat = jf.torus_fft();
    let (s, p): (Vec<Complex64>, Vec<Complex64>) = jhat.iter().map(|&z| geometric(z, n_max)).unzip();
    let mut sums = LatticeField::from_torus_fft(j.d, l, s)?;
    let mut last_term = LatticeField::from_torus_fft(j.d, l, p)?;
    sums.symmetric = true;
    last_term.symmetric = true;
    if sums.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow(format!("partial sum to n={n_max} is not finite")));
    }
    let mass_outside = last_term.wrap_contamination();
    Ok(SeriesReport { n_max, sums, last_term, mass_outside })
}

/// Moments entering the first Edgeworth correction of J^{(*n)}.
struct Lclt {
    d: usize,
    m2: f64,
    a4: f64,
    b22: f64,
    bipartite: bool,
}

impl Lclt {
    fn new(j: &StepDistribution) -> Self {
        let m = |f: &dyn Fn(&[i64]) -> f64| ksum(j.support.iter().map(|(x, w)| f(x) * w));
        let m2 = m(&|x| (x[0] * x[0]) as f64);
        let m4 = m(&|x| (x[0] as f64).powi(4));
        let m22 = if j.d > 1 { m(&|x| (x[0] * x[0] * x[1] * x[1]) as f64) } else { 0.0 };
        Self {
            d: j.d,
            m2,
            a4: m4 / 24.0 - m2 * m2 / 8.0,
            b22: m22 / 4.0 - m2 * m2 / 4.0,
            bipartite: j.is_bipartite(),
        }
    }

    /// f(n) = pref·e^{−b/n}·Σ_k c_k n^{−d/2−k}; returns (pref, b, c).
    fn coefficients(&self, x: &[i64]) -> (f64, f64, [f64; 4]) {
        let df = self.d as f64;
        let q: Vec<f64> = x.iter().map(|&c| (c * c) as f64 / self.m2).collect();
        let sq: f64 = q.iter().sum();
        let sq2: f64 = q.iter().map(|v| v * v).sum();
        let cross = 0.5 * (sq * sq - sq2);
        let s = 1.0 / (self.m2 * self.m2);
        let c = [
            1.0,
            s * (3.0 * df * self.a4 + self.b22 * df * (df - 1.0) / 2.0),
            -s * (6.0 * self.a4 * sq + self.b22 * (df - 1.0) * sq),
            s * (self.a4 * sq2 + self.b22 * cross),
        ];
        let factor = if self.bipartite { 2.0 } else { 1.0 };
        let pref = factor * (2.0 * std::f64::consts::PI * self.m2).powf(-df / 2.0);
        (pref, sq / 2.0, c)
    }

    /// Σ_{n>N} of the corrected local-CLT term (only n of the right parity
    /// when J is bipartite).
    fn tail(&self, x: &[i64], n_big: u64) -> f64 {
        let (pref, b, c) = self.coefficients(x);
        let half = self.d as f64 / 2.0;
        let f = |n: f64| -> f64 {
            let e = (-b / n).exp();
            e * (0..4).map(|k| c[k] * n.powf(-half - k as f64)).sum::<f64>()
        };
        let fprime = |n: f64| -> f64 {
            let e = (-b / n).exp();
            e * (0..4)
                .map(|k| {
                    let p = half + k as f64;
                    c[k] * n.powf(-p) * (b / (n * n) - p / n)
                })
                .sum::<f64>()
        };
        let (mut n, step) = if self.bipartite {
            let par = x.iter().map(|c| c.abs()).sum::<i64>() as u64 % 2;
            let mut n0 = n_big + 1;
            if n0 % 2 != par {
                n0 += 1;
            }
            (n0, 2)
        } else {
            (n_big + 1, 1)
        };
        let n1 = 4 * n_big.max(8);
        let mut direct = Vec::new();
        while n < n1 {
            direct.push(f(n as f64));
            n += step;
        }
        let nf = n as f64;
        let s = step as f64;
        // ∫_{n}^∞ n^{−p} e^{−b/n} dn as a series in b/n
        let integral: f64 = (0..4)
            .map(|k| {
                let p = half + k as f64;
                let mut term_pow = nf.powf(1.0 - p);
                let mut coef = 1.0;
                let mut total = 0.0;
                for i in 0..200 {
                    let t = coef * term_pow / (p - 1.0 + i as f64);
                    total += t;
                    if t.abs() <= 1e-18 * total.abs() {
                        break;
                    }
                    coef *= -b / (i as f64 + 1.0);
                    term_pow /= nf;
                }
                c[k] * total
            })
            .sum();
        let em = integral / s + f(nf) / 2.0 - s * fprime(nf) / 12.0;
        pref * (ksum(direct) + em)
    }

    /// Leading image contribution Σ_{n≤N} Σ_{nearest images} of the Gaussian term.
    fn image_estimate(&self, x: &[i64], l: i64, n_big: u64) -> f64 {
        let mut total = 0.0;
        for a in 0..self.d {
            for s in [-1, 1] {
                let mut y = x.to_vec();
                y[a] += s * l;
                let (pref, b, _) = self.coefficients(&y);
                let half = self.d as f64 / 2.0;
                let factor = if self.bipartite { 0.5 } else { 1.0 };
                total += factor
                    * ksum((1..=n_big).map(|n| {
                        let nf = n as f64;
                        pref * (-b / nf).exp() * nf.powf(-half)
                    }));
            }
        }
        total
    }
}

/// Σ_n J^{(*n)}(x): explicit partial sums on the torus plus the corrected
/// local-CLT tail beyond n_max.
pub fn green_series(j: &StepDistribution, points: &Points, opts: &SeriesOptions) -> Result<GreenResult> {
    if j.d < 3 {
        return Err(Error::Domain(format!("the series diverges for d={} (need d ≥ 3)", j.d)));
    }
    if !j.is_nonnegative() {
        return Err(Error::Domain("green_series needs J ≥ 0".into()));
    }
    let pts = points.representatives(j.d)?;
    let h = (opts.l as i64 - 1) / 2;
    if let Some(x) = pts.iter().find(|x| x[0] > h) {
        return Err(Error::Shape(format!("point {x:?} lies outside the L={} box", opts.l)));
    }
    let n_big = opts.n_max;
    let full = series_partial_sums(j, opts.l, n_big)?;
    let lclt = Lclt::new(j);
    let use_tail = opts.tail && n_big >= 2;
    let half_run = if use_tail { Some(series_partial_sums(j, opts.l, n_big / 2)?) } else { None };
    let mut values = Vec::with_capacity(pts.len());
    let mut errors = Vec::with_capacity(pts.len());
    let mut wrap = 0.0f64;
    for x in &pts {
        let raw = full.sums.get(x);
        let (v, e) = match &half_run {
            Some(hr) => {
                let v = raw + lclt.tail(x, n_big);
                let v_half = hr.sums.get(x) + lclt.tail(x, n_big / 2);
                (v, (v - v_half).abs())
            }
            None => (raw, full.last_term.get(x).abs() * n_big.max(1) as f64),
        };
        let img = lclt.image_estimate(x, opts.l as i64, n_big);
        if img > opts.wrap_tolerance * v.abs() {
            return Err(Error::Wrap { contamination: img / v.abs(), tolerance: opts.wrap_tolerance });
        }
        wrap = wrap.max(img);
        values.push(v);
        errors.push(e + img);
    }
    let truncation_bound = errors.iter().cloned().fold(0.0, f64::max);
    Ok(GreenResult {
        d: j.d,
        method: Method::Series,
        points: pts,
        values,
        errors,
        diagnostics: Diagnostics {
            truncation_order: Some(n_big),
            truncation_bound,
            wrap_contamination: wrap,
            mass_outside: full.mass_outside,
            ..Default::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step::nn_step;

    #[test]
    fn geometric_sum() {
        let z = Complex64::new(0.3, 0.1);
        for n in [0, 1, 5, 8, 13] {
            let (s, p) = geometric(z, n);
            let direct: Complex64 = (0..=n).map(|m| z.powu(m as u32)).sum();
            assert!((s - direct).norm() < 1e-14);
            assert!((p - z.powu(n as u32)).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_order_is_delta() {
        let r = series_partial_sums(&nn_step(3), 7, 0).unwrap();
        assert!((r.sums.get(&[0, 0, 0]) - 1.0).abs() < 1e-14);
        assert!(r.sums.get(&[1, 0, 0]).abs() < 1e-14);
    }

    #[test]
    fn watson_by_series() {
        let opts = SeriesOptions { l: 41, n_max: 128, ..Default::default() };
        let r = green_series(&nn_step(3), &Points::List(vec![vec![0, 0, 0]]), &opts).unwrap();
        assert!((r.values[0] - 1.516_386_059_151_978).abs() < 1e-5, "{}", r.values[0]);
    }
}
