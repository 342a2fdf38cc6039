use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fft::fft_nd;
use crate::sum::{ksum, KahanSum};
use crate::{Error, Result};

/// Below this many sites `convolve` uses the direct double sum.
pub const DIRECT_CONV_SITES: usize = 4096;

const SYMMETRY_SAMPLES: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn origin(d: usize) -> Self {
        Self { coords: vec![0; d] }
    }

    /// The point r·e_{axis}.
    pub fn axis(d: usize, axis: usize, r: i64) -> Self {
        let mut coords = vec![0; d];
        coords[axis] = r;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm2(&self) -> i64 {
        norm2(&self.coords)
    }

    pub fn norm(&self) -> f64 {
        (self.norm2() as f64).sqrt()
    }

    /// |||x||| = max(|x|, 1).
    pub fn clamped_norm(&self) -> f64 {
        self.norm().max(1.0)
    }

    pub fn l1(&self) -> i64 {
        self.coords.iter().map(|c| c.abs()).sum()
    }

    /// Orbit representative under coordinate permutations and sign flips.
    pub fn canonical(&self) -> Self {
        Self { coords: canonical(&self.coords) }
    }
}

pub fn norm2(x: &[i64]) -> i64 {
    x.iter().map(|c| c * c).sum()
}

pub fn canonical(x: &[i64]) -> Vec<i64> {
    let mut c: Vec<i64> = x.iter().map(|v| v.abs()).collect();
    c.sort_unstable_by(|a, b| b.cmp(a));
    c
}

/// Number of lattice points in the hyperoctahedral orbit of `x`.
pub fn orbit_size(x: &[i64]) -> u64 {
    let c = canonical(x);
    let d = c.len() as u64;
    let mut size: u64 = (1..=d).product();
    let mut i = 0;
    while i < c.len() {
        let mut j = i;
        while j < c.len() && c[j] == c[i] {
            j += 1;
        }
        let run = (j - i) as u64;
        size /= (1..=run).product::<u64>();
        if c[i] != 0 {
            size <<= run;
        }
        i = j;
    }
    size
}

/// All canonical representatives with |x|_∞ ≤ h.
pub fn canonical_points(d: usize, h: i64) -> Vec<Vec<i64>> {
    fn rec(d: usize, max: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == d {
            out.push(prefix.clone());
            return;
        }
        for v in (0..=max).rev() {
            prefix.push(v);
            rec(d, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, h, &mut Vec::with_capacity(d), &mut out);
    out.reverse();
    out
}

/// Applies a signed permutation: y[i] = sign[i]·x[perm[i]].
fn signed_permute(x: &[i64], perm: &[usize], sign: &[i64]) -> Vec<i64> {
    perm.iter().zip(sign).map(|(&p, &s)| s * x[p]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightMode {
    /// Weight |x|^α.
    Full,
    /// Weight |x_j|^α for the given 0-based axis.
    Axis(usize),
}

/// A real function on the periodic box {−h..h}^d with L = 2h+1, stored
/// row-major with the first coordinate slowest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeField {
    pub d: usize,
    pub l: usize,
    pub symmetric: bool,
    pub values: Vec<f64>,
}

impl LatticeField {
    pub fn zeros(d: usize, l: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        if l % 2 == 0 {
            return Err(Error::Shape(format!("side length {l} must be odd")));
        }
        let n = l
            .checked_pow(d as u32)
            .ok_or_else(|| Error::Budget(format!("{l}^{d} sites do not fit in memory")))?;
        Ok(Self { d, l, symmetric: true, values: vec![0.0; n] })
    }

    pub fn delta(d: usize, l: usize) -> Result<Self> {
        let mut f = Self::zeros(d, l)?;
        let o = f.index(&vec![0; d]);
        f.values[o] = 1.0;
        Ok(f)
    }

    /// Builds a field from a site function; `symmetric` is taken on trust and
    /// can be checked with [`LatticeField::check_symmetry`].
    pub fn from_fn(d: usize, l: usize, symmetric: bool, mut f: impl FnMut(&[i64]) -> f64) -> Result<Self> {
        let mut out = Self::zeros(d, l)?;
        out.symmetric = symmetric;
        let mut x = vec![0i64; d];
        for i in 0..out.values.len() {
            out.coords_into(i, &mut x);
            out.values[i] = f(&x);
        }
        Ok(out)
    }

    pub fn half(&self) -> i64 {
        (self.l as i64 - 1) / 2
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Storage index of x, wrapping periodically.
    pub fn index(&self, x: &[i64]) -> usize {
        let l = self.l as i64;
        let h = self.half();
        x.iter().fold(0usize, |acc, &c| acc * self.l + (c + h).rem_euclid(l) as usize)
    }

    pub fn coords_into(&self, mut idx: usize, out: &mut [i64]) {
        let h = self.half();
        for j in (0..self.d).rev() {
            out[j] = (idx % self.l) as i64 - h;
            idx /= self.l;
        }
    }

    pub fn coords(&self, idx: usize) -> Vec<i64> {
        let mut x = vec![0; self.d];
        self.coords_into(idx, &mut x);
        x
    }

    pub fn get(&self, x: &[i64]) -> f64 {
        self.values[self.index(x)]
    }

    /// Value at x if x lies inside the box, without wrapping.
    pub fn get_inside(&self, x: &[i64]) -> Option<f64> {
        let h = self.half();
        if x.len() == self.d && x.iter().all(|c| c.abs() <= h) {
            Some(self.get(x))
        } else {
            None
        }
    }

    pub fn set(&mut self, x: &[i64], v: f64) {
        let i = self.index(x);
        self.values[i] = v;
    }

    pub fn sum(&self) -> f64 {
        ksum(self.values.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// sup_{x ≠ 0} f(x).
    pub fn sup_off_origin(&self) -> f64 {
        let o = self.index(&vec![0; self.d]);
        self.values
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != o)
            .fold(f64::NEG_INFINITY, |m, (_, v)| m.max(*v))
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.l != other.l {
            return Err(Error::Shape(format!(
                "fields differ: (d={}, L={}) vs (d={}, L={})",
                self.d, self.l, other.d, other.l
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.symmetric = self.symmetric && other.symmetric;
        out.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    /// Copies the field into a larger (or smaller) box; sites outside the
    /// target box are dropped.
    pub fn resized(&self, l: usize) -> Result<Self> {
        let mut out = Self::zeros(self.d, l)?;
        out.symmetric = self.symmetric;
        let h = out.half();
        let mut x = vec![0; self.d];
        for i in 0..self.values.len() {
            self.coords_into(i, &mut x);
            if x.iter().all(|c| c.abs() <= h) {
                out.set(&x, self.values[i]);
            }
        }
        Ok(out)
    }

    /// Σ|f(x)| over sites with Euclidean |x| > (L−1)/2: the part of the field
    /// that sits where periodic images begin to overlap.
    pub fn wrap_contamination(&self) -> f64 {
        let h2 = self.half() * self.half();
        let mut x = vec![0; self.d];
        let mut acc = KahanSum::new();
        for i in 0..self.values.len() {
            self.coords_into(i, &mut x);
            if norm2(&x) > h2 {
                acc.add(self.values[i].abs());
            }
        }
        acc.value()
    }

    /// Samples random signed permutations and compares values; returns the
    /// first mismatching pair of points.
    pub fn symmetry_violation(&self, tol: f64) -> Option<(Vec<i64>, Vec<i64>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0b17);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut perm: Vec<usize> = (0..self.d).collect();
        for _ in 0..SYMMETRY_SAMPLES {
            let i = rng.random_range(0..self.values.len());
            let x = self.coords(i);
            for j in (1..self.d).rev() {
                let k = rng.random_range(0..=j);
                perm.swap(j, k);
            }
            let sign: Vec<i64> = (0..self.d).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
            let y = signed_permute(&x, &perm, &sign);
            if (self.get(&y) - self.values[i]).abs() > tol * scale {
                return Some((x, y));
            }
        }
        None
    }

    pub fn check_symmetry(&self) -> bool {
        self.symmetry_violation(1e-12).is_none()
    }

    /// Replaces every value by its orbit average and sets the symmetric flag.
    pub fn symmetrized(&self) -> Self {
        use std::collections::HashMap;
        let mut acc: HashMap<Vec<i64>, (f64, usize)> = HashMap::new();
        let mut x = vec![0; self.d];
        for i in 0..self.values.len() {
            self.coords_into(i, &mut x);
            let e = acc.entry(canonical(&x)).or_insert((0.0, 0));
            e.0 += self.values[i];
            e.1 += 1;
        }
        let mut out = self.clone();
        for i in 0..out.values.len() {
            self.coords_into(i, &mut x);
            let (s, n) = acc[&canonical(&x)];
            out.values[i] = s / n as f64;
        }
        out.symmetric = true;
        out
    }

    /// CSV rows `x1,..,xd,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = (1..=self.d).map(|j| format!("x{j}")).collect();
        writeln!(w, "{},value", header.join(","))?;
        let mut x = vec![0; self.d];
        for i in 0..self.values.len() {
            self.coords_into(i, &mut x);
            let xs: Vec<String> = x.iter().map(|c| c.to_string()).collect();
            writeln!(w, "{},{:.17e}", xs.join(","), self.values[i])?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(s)?;
        let expect = f.l.checked_pow(f.d as u32);
        if f.l % 2 == 0 || expect != Some(f.values.len()) {
            return Err(Error::Format(format!(
                "field header (d={}, L={}) does not match {} values",
                f.d,
                f.l,
                f.values.len()
            )));
        }
        Ok(f)
    }

    fn to_origin_order(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.values.len()];
        let mut x = vec![0; self.d];
        for i in 0..self.values.len() {
            self.coords_into(i, &mut x);
            let j = x
                .iter()
                .fold(0usize, |acc, &c| acc * self.l + c.rem_euclid(self.l as i64) as usize);
            out[j] = Complex64::new(self.values[i], 0.0);
        }
        out
    }

    fn from_origin_order(d: usize, l: usize, data: &[Complex64], scale: f64) -> Result<Self> {
        let mut out = Self::zeros(d, l)?;
        let mut x = vec![0; d];
        for i in 0..out.values.len() {
            out.coords_into(i, &mut x);
            let j = x.iter().fold(0usize, |acc, &c| acc * l + c.rem_euclid(l as i64) as usize);
            out.values[i] = data[j].re * scale;
        }
        Ok(out)
    }

    /// Discrete Fourier transform on the torus grid k = 2πm/L, origin-first order.
    pub fn torus_fft(&self) -> Vec<Complex64> {
        let mut data = self.to_origin_order();
        fft_nd(&mut data, self.d, self.l, false);
        data
    }

    /// Inverse of [`LatticeField::torus_fft`], keeping the real part.
    pub fn from_torus_fft(d: usize, l: usize, mut data: Vec<Complex64>) -> Result<Self> {
        fft_nd(&mut data, d, l, true);
        let n = data.len() as f64;
        Self::from_origin_order(d, l, &data, 1.0 / n)
    }
}

/// Periodic convolution (f*g)(x) = Σ_y f(x−y) g(y).
pub fn convolve(f: &LatticeField, g: &LatticeField) -> Result<LatticeField> {
    f.same_shape(g)?;
    let mut out = if f.len() < DIRECT_CONV_SITES {
        convolve_direct(f, g)?
    } else {
        convolve_fft(f, g)?
    };
    out.symmetric = f.symmetric && g.symmetric;
    Ok(out)
}

pub fn convolve_direct(f: &LatticeField, g: &LatticeField) -> Result<LatticeField> {
    f.same_shape(g)?;
    let mut out = LatticeField::zeros(f.d, f.l)?;
    out.symmetric = f.symmetric && g.symmetric;
    let n = f.len();
    let mut x = vec![0; f.d];
    let mut y = vec![0; f.d];
    let mut xy = vec![0; f.d];
    for i in 0..n {
        f.coords_into(i, &mut x);
        let mut acc = KahanSum::new();
        for j in 0..n {
            let gv = g.values[j];
            if gv == 0.0 {
                continue;
            }
            g.coords_into(j, &mut y);
            for k in 0..f.d {
                xy[k] = x[k] - y[k];
            }
            acc.add(f.get(&xy) * gv);
        }
        out.values[i] = acc.value();
    }
    Ok(out)
}

pub fn convolve_fft(f: &LatticeField, g: &LatticeField) -> Result<LatticeField> {
    f.same_shape(g)?;
    let mut a = f.torus_fft();
    let b = g.torus_fft();
    a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
    let mut out = LatticeField::from_torus_fft(f.d, f.l, a)?;
    out.symmetric = f.symmetric && g.symmetric;
    Ok(out)
}

/// n-fold periodic self-convolution by repeated squaring; n = 0 gives δ_0.
pub fn convolution_power(f: &LatticeField, n: u64) -> Result<LatticeField> {
    let mut result = LatticeField::delta(f.d, f.l)?;
    result.symmetric = true;
    if n == 0 {
        return Ok(result);
    }
    let mut base = f.clone();
    let mut e = n;
    let mut first = true;
    loop {
        if e & 1 == 1 {
            result = if first { base.clone() } else { convolve(&result, &base)? };
            first = false;
            check_finite(&result, n)?;
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = convolve(&base, &base)?;
        check_finite(&base, n)?;
    }
    result.symmetric = f.symmetric;
    Ok(result)
}

fn check_finite(f: &LatticeField, n: u64) -> Result<()> {
    if f.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Overflow(format!("convolution power {n} left the f64 range")));
    }
    Ok(())
}

/// Multiplies f pointwise by |x|^α or |x_j|^α (0^0 = 1).
pub fn weighted_field(f: &LatticeField, alpha: f64, mode: WeightMode) -> Result<LatticeField> {
    if !(alpha >= 0.0) {
        return Err(Error::Domain(format!("weight exponent {alpha} must be nonnegative")));
    }
    if let WeightMode::Axis(j) = mode {
        if j >= f.d {
            return Err(Error::Shape(format!("axis {j} out of range for d={}", f.d)));
        }
    }
    let mut out = f.clone();
    if let WeightMode::Axis(_) = mode {
        if alpha > 0.0 {
            out.symmetric = false;
        }
    }
    let mut x = vec![0; f.d];
    for i in 0..out.values.len() {
        f.coords_into(i, &mut x);
        let r2 = match mode {
            WeightMode::Full => norm2(&x),
            WeightMode::Axis(j) => x[j] * x[j],
        };
        out.values[i] *= weight_sq(r2, alpha);
    }
    Ok(out)
}

pub fn weight(r: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        r.powf(alpha)
    }
}

/// (r²)^{α/2}, exact for even integer α.
pub fn weight_sq(r2: i64, alpha: f64) -> f64 {
    let half = alpha / 2.0;
    if half.fract() == 0.0 && half < 64.0 {
        (r2 as f64).powi(half as i32)
    } else {
        weight((r2 as f64).sqrt(), alpha)
    }
}

/// Midpoint Fourier grid k_j = 2π(m+½)/M − π; k = 0 is never a node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierGrid {
    pub d: usize,
    pub m: usize,
    pub values: Vec<Complex64>,
}

impl FourierGrid {
    pub fn node(m: usize, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * (i as f64 + 0.5) / m as f64 - std::f64::consts::PI
    }

    pub fn nodes(m: usize) -> Vec<f64> {
        (0..m).map(|i| Self::node(m, i)).collect()
    }

    pub fn k_at(&self, mut idx: usize) -> Vec<f64> {
        let mut k = vec![0.0; self.d];
        for j in (0..self.d).rev() {
            k[j] = Self::node(self.m, idx % self.m);
            idx /= self.m;
        }
        k
    }

    pub fn origin_excluded(&self) -> bool {
        true
    }
}

/// f̂(k) = Σ_x f(x) e^{−ik·x} on the midpoint grid, by axis-wise contraction.
pub fn fourier_eval(f: &LatticeField, m: usize) -> Result<FourierGrid> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::Shape(format!("grid size M={m} must be even and at least 2")));
    }
    let h = f.half();
    let ks = FourierGrid::nodes(m);
    let phase: Vec<Complex64> = ks
        .iter()
        .flat_map(|&k| (-h..=h).map(move |c| Complex64::from_polar(1.0, -k * c as f64)))
        .collect();
    let mut data: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut shape = vec![f.l; f.d];
    for axis in 0..f.d {
        let outer: usize = shape[..axis].iter().product();
        let inner: usize = shape[axis + 1..].iter().product();
        let n_in = shape[axis];
        let mut next = vec![Complex64::new(0.0, 0.0); outer * m * inner];
        for o in 0..outer {
            for (mi, row) in phase.chunks(f.l).enumerate() {
                for c in 0..n_in {
                    let w = row[c];
                    let src = &data[(o * n_in + c) * inner..(o * n_in + c + 1) * inner];
                    let dst = &mut next[(o * m + mi) * inner..(o * m + mi + 1) * inner];
                    for (t, s) in dst.iter_mut().zip(src) {
                        *t += w * s;
                    }
                }
            }
        }
        data = next;
        shape[axis] = m;
    }
    if f.symmetric {
        data.iter_mut().for_each(|v| v.im = 0.0);
    }
    Ok(FourierGrid { d: f.d, m, values: data })
}

/// Inverse of [`fourier_eval`] onto an L box: (1/M^d) Σ_k e^{ik·x} v(k),
/// keeping the real part. Exact for fields supported in the box when M ≥ L.
pub fn fourier_inverse(grid: &FourierGrid, l: usize) -> Result<LatticeField> {
    if l % 2 == 0 || l > grid.m {
        return Err(Error::Shape(format!("box side {l} must be odd and at most M={}", grid.m)));
    }
    let m = grid.m;
    let h = (l as i64 - 1) / 2;
    let ks = FourierGrid::nodes(m);
    let phase: Vec<Complex64> = (-h..=h)
        .flat_map(|c| ks.iter().map(move |&k| Complex64::from_polar(1.0 / m as f64, k * c as f64)))
        .collect();
    let mut data = grid.values.clone();
    let mut shape = vec![m; grid.d];
    for axis in 0..grid.d {
        let outer: usize = shape[..axis].iter().product();
        let inner: usize = shape[axis + 1..].iter().product();
        let mut next = vec![Complex64::new(0.0, 0.0); outer * l * inner];
        for o in 0..outer {
            for (ci, row) in phase.chunks(m).enumerate() {
                for (mi, w) in row.iter().enumerate() {
                    let src = &data[(o * m + mi) * inner..(o * m + mi + 1) * inner];
                    let dst = &mut next[(o * l + ci) * inner..(o * l + ci + 1) * inner];
                    for (t, s) in dst.iter_mut().zip(src) {
                        *t += w * s;
                    }
                }
            }
        }
        data = next;
        shape[axis] = l;
    }
    let mut out = LatticeField::zeros(grid.d, l)?;
    out.values = data.iter().map(|v| v.re).collect();
    out.symmetric = false;
    Ok(out)
}

/// A/|||x|||^α on ℤ^d.
pub fn power_law(a: f64, alpha: f64) -> impl Fn(&[i64]) -> f64 {
    move |x| a / weight_sq(norm2(x).max(1), alpha)
}

/// (f*g)(x) = Σ_y g(y) f(x − y) on ℤ^d for finitely supported g.
pub fn convolve_at(f: impl Fn(&[i64]) -> f64, g: &[(Vec<i64>, f64)], x: &[i64]) -> f64 {
    let mut z = vec![0; x.len()];
    ksum(g.iter().map(|(y, w)| {
        for (k, zk) in z.iter_mut().enumerate() {
            *zk = x[k] - y[k];
        }
        w * f(&z)
    }))
}

/// The nonzero sites of a field as (x, value) pairs, in storage order.
pub fn support_of(f: &LatticeField) -> Vec<(Vec<i64>, f64)> {
    (0..f.len()).filter(|&i| f.values[i] != 0.0).map(|i| (f.coords(i), f.values[i])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nn(d: usize, l: usize) -> LatticeField {
        LatticeField::from_fn(d, l, true, |x| {
            if norm2(x) == 1 {
                1.0 / (2 * d) as f64
            } else {
                0.0
            }
        })
        .unwrap()
    }

    #[test]
    fn delta_is_identity() {
        let f = LatticeField::from_fn(2, 5, false, |x| (x[0] * 3 + x[1]) as f64).unwrap();
        let c = convolve(&LatticeField::delta(2, 5).unwrap(), &f).unwrap();
        assert_eq!(c.values, f.values);
    }

    #[test]
    fn half_weights_on_line() {
        let f = LatticeField::from_fn(1, 5, true, |x| if x[0].abs() == 1 { 0.5 } else { 0.0 }).unwrap();
        let c = convolve(&f, &f).unwrap();
        assert!((c.get(&[0]) - 0.5).abs() < 1e-15);
        assert!((c.get(&[2]) - 0.25).abs() < 1e-15);
        assert!((c.get(&[-2]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn nn_two_step_return() {
        let p = convolution_power(&nn(2, 7), 2).unwrap();
        assert!((p.get(&[0, 0]) - 0.25).abs() < 1e-15);
        let p0 = convolution_power(&nn(2, 7), 0).unwrap();
        assert_eq!(p0, LatticeField::delta(2, 7).unwrap());
    }

    #[test]
    fn fft_matches_direct() {
        let f = LatticeField::from_fn(2, 65, false, |x| ((x[0] * 7 + x[1] * 13).rem_euclid(11)) as f64 / 11.0).unwrap();
        let g = LatticeField::from_fn(2, 65, false, |x| if x[0].abs() + x[1].abs() <= 3 { 1.0 } else { 0.0 }).unwrap();
        let a = convolve_fft(&f, &g).unwrap();
        let b = convolve_direct(&f, &g).unwrap();
        for (u, v) in a.values.iter().zip(&b.values) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn shape_mismatch() {
        let f = LatticeField::zeros(2, 5).unwrap();
        let g = LatticeField::zeros(2, 7).unwrap();
        assert!(matches!(convolve(&f, &g), Err(Error::Shape(_))));
        assert!(LatticeField::zeros(2, 4).is_err());
    }

    #[test]
    fn weights() {
        let f = LatticeField::from_fn(2, 5, true, |_| 1.0).unwrap();
        let w = weighted_field(&f, 2.0, WeightMode::Axis(0)).unwrap();
        assert_eq!(w.get(&[1, 2]), 1.0);
        let w = weighted_field(&f, 2.0, WeightMode::Full).unwrap();
        assert_eq!(w.get(&[1, 2]), 5.0);
        assert_eq!(w.get(&[0, 0]), 0.0);
        assert_eq!(weighted_field(&f, 0.0, WeightMode::Full).unwrap(), f);
        assert!(matches!(weighted_field(&f, -1.0, WeightMode::Full), Err(Error::Domain(_))));
    }

    #[test]
    fn nn_fourier() {
        let g = fourier_eval(&nn(3, 3), 8).unwrap();
        for (i, v) in g.values.iter().enumerate() {
            let k = g.k_at(i);
            let expect = k.iter().map(|t| t.cos()).sum::<f64>() / 3.0;
            assert!((v.re - expect).abs() < 1e-14 && v.im == 0.0);
        }
        let g = fourier_eval(&LatticeField::delta(2, 5).unwrap(), 4).unwrap();
        assert!(g.values.iter().all(|v| (v.re - 1.0).abs() < 1e-15));
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit_size(&[1, 0, 0]), 6);
        assert_eq!(orbit_size(&[1, 1, 0]), 12);
        assert_eq!(orbit_size(&[2, 1, 0]), 24);
        assert_eq!(orbit_size(&[0, 0]), 1);
        assert_eq!(orbit_size(&[3, 3, 3]), 8);
        let total: u64 = canonical_points(3, 2).iter().map(|c| orbit_size(c)).sum();
        assert_eq!(total, 125);
    }

    #[test]
    fn symmetry_detection() {
        assert!(nn(3, 5).check_symmetry());
        let f = LatticeField::from_fn(2, 5, false, |x| x[0] as f64).unwrap();
        assert!(!f.check_symmetry());
        assert!(f.symmetrized().check_symmetry());
    }

    #[test]
    fn json_round_trip() {
        let f = nn(2, 5);
        let g = LatticeField::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(f, g);
        assert!(LatticeField::from_json(r#"{"d":2,"l":3,"symmetric":true,"values":[1.0]}"#).is_err());
    }
}
