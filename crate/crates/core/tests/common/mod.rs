//! Independent oracles: deliberately naive implementations that share no
//! code with the library beyond basic field storage.
#![allow(dead_code)]

pub mod diagrams;

use std::collections::{BTreeMap, HashMap, HashSet};

use lacelab::LatticeField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every n-step SAW from the origin, no symmetry reduction:
/// (n, endpoint) → count.
pub fn naive_saw(d: usize, n_max: usize) -> BTreeMap<(usize, Vec<i64>), u64> {
    fn rec(
        d: usize,
        n_max: usize,
        path: &mut Vec<Vec<i64>>,
        seen: &mut HashSet<Vec<i64>>,
        out: &mut BTreeMap<(usize, Vec<i64>), u64>,
    ) {
        let n = path.len() - 1;
        *out.entry((n, path[n].clone())).or_default() += 1;
        if n == n_max {
            return;
        }
        for j in 0..d {
            for s in [-1, 1] {
                let mut y = path[n].clone();
                y[j] += s;
                if seen.insert(y.clone()) {
                    path.push(y.clone());
                    rec(d, n_max, path, seen, out);
                    path.pop();
                    seen.remove(&y);
                }
            }
        }
    }
    let o = vec![0; d];
    let mut seen = HashSet::from([o.clone()]);
    let mut out = BTreeMap::new();
    rec(d, n_max, &mut vec![o], &mut seen, &mut out);
    out
}

type Sparse = HashMap<Vec<i64>, i128>;

fn sparse_conv(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (x, u) in a {
        for (y, v) in b {
            let z: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            *out.entry(z).or_default() += u * v;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Π coefficients from G by textbook series inversion:
/// Q_0 = δ, Q_n = −Σ_{k=1}^{n} G_k * Q_{n−k}, Π_n = [n=0]δ − [n=1]2dD − Q_n.
pub fn naive_pi(d: usize, walks: &BTreeMap<(usize, Vec<i64>), u64>, order: usize) -> Vec<Sparse> {
    let mut g: Vec<Sparse> = vec![Sparse::new(); order + 1];
    for ((n, x), c) in walks {
        if *n <= order {
            g[*n].insert(x.clone(), *c as i128);
        }
    }
    let o = vec![0; d];
    let mut q: Vec<Sparse> = vec![Sparse::from([(o.clone(), 1)])];
    for n in 1..=order {
        let mut acc = Sparse::new();
        for k in 1..=n {
            for (x, v) in sparse_conv(&g[k], &q[n - k]) {
                *acc.entry(x).or_default() -= v;
            }
        }
        acc.retain(|_, v| *v != 0);
        q.push(acc);
    }
    (0..=order)
        .map(|n| {
            let mut pi = Sparse::new();
            if n == 0 {
                pi.insert(o.clone(), 1);
            }
            if n == 1 {
                for j in 0..d {
                    for s in [-1, 1] {
                        let mut e = o.clone();
                        e[j] = s;
                        *pi.entry(e).or_default() -= 1;
                    }
                }
            }
            for (x, v) in &q[n] {
                *pi.entry(x.clone()).or_default() -= v;
            }
            pi.retain(|_, v| *v != 0);
            pi
        })
        .collect()
}

/// Torus helpers on the box {−h..h}^d, independent of LatticeField indexing.
pub struct Torus {
    pub d: usize,
    pub l: usize,
    pub sites: Vec<Vec<i64>>,
}

impl Torus {
    pub fn new(d: usize, l: usize) -> Self {
        let h = (l as i64 - 1) / 2;
        let mut sites = vec![vec![]];
        for _ in 0..d {
            sites = sites
                .into_iter()
                .flat_map(|s| {
                    (-h..=h).map(move |c| {
                        let mut t = s.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        Self { d, l, sites }
    }

    pub fn wrap(&self, x: &[i64]) -> Vec<i64> {
        let l = self.l as i64;
        let h = (l - 1) / 2;
        x.iter().map(|c| (c + h).rem_euclid(l) - h).collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.wrap(&a.iter().zip(b).map(|(p, q)| p - q).collect::<Vec<_>>())
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.wrap(&a.iter().zip(b).map(|(p, q)| p + q).collect::<Vec<_>>())
    }

    pub fn map(&self, f: &LatticeField) -> HashMap<Vec<i64>, f64> {
        self.sites.iter().map(|x| (x.clone(), f.get(x))).collect()
    }

    /// (f*g)(a) = Σ_y f(y) g(a−y), nested loops.
    pub fn conv(&self, f: &HashMap<Vec<i64>, f64>, g: &HashMap<Vec<i64>, f64>) -> HashMap<Vec<i64>, f64> {
        self.sites
            .iter()
            .map(|a| (a.clone(), self.sites.iter().map(|y| f[y] * g[&self.sub(a, y)]).sum()))
            .collect()
    }

    pub fn weighted(&self, f: &HashMap<Vec<i64>, f64>, beta: f64) -> HashMap<Vec<i64>, f64> {
        f.iter()
            .map(|(x, v)| {
                let r = (x.iter().map(|c| (c * c) as f64).sum::<f64>()).sqrt();
                let w = if beta == 0.0 { 1.0 } else { r.powf(beta) };
                (x.clone(), w * v)
            })
            .collect()
    }
}

/// A ℤ^d-symmetric positive field with G(0) = 1 and roughly |x|^{−2} decay.
pub fn random_symmetric_field(d: usize, l: usize, seed: u64) -> LatticeField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = LatticeField::from_fn(d, l, false, |x| {
        let r2 = x.iter().map(|c| c * c).sum::<i64>() as f64;
        if r2 == 0.0 {
            1.0
        } else {
            rng.random_range(0.5..1.5) * 0.3 / r2
        }
    })
    .unwrap();
    raw.symmetrized()
}

/// Exact P_p(0 ↔ x) on the d=2, L=3 torus by summing all 2^18 bond
/// configurations. Returned in centered coordinates.
pub fn exhaustive_connectivity_l3(p: f64) -> BTreeMap<Vec<i64>, f64> {
    let l = 3usize;
    let id = |x: usize, y: usize| x * l + y;
    let mut bonds = Vec::new();
    for x in 0..l {
        for y in 0..l {
            bonds.push((id(x, y), id((x + 1) % l, y)));
            bonds.push((id(x, y), id(x, (y + 1) % l)));
        }
    }
    assert_eq!(bonds.len(), 18);
    let origin = id(1, 1);
    let mut prob = [0.0f64; 9];
    for mask in 0u32..(1 << 18) {
        let mut parent: Vec<usize> = (0..9).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        for (b, &(u, v)) in bonds.iter().enumerate() {
            if mask >> b & 1 == 1 {
                let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
                parent[ru] = rv;
            }
        }
        let k = mask.count_ones() as i32;
        let w = p.powi(k) * (1.0 - p).powi(18 - k);
        let r0 = root(&mut parent, origin);
        for (s, pr) in prob.iter_mut().enumerate() {
            if root(&mut parent, s) == r0 {
                *pr += w;
            }
        }
    }
    let mut out = BTreeMap::new();
    for x in 0..l {
        for y in 0..l {
            out.insert(vec![x as i64 - 1, y as i64 - 1], prob[id(x, y)]);
        }
    }
    out
}

/// Midpoint-grid sum (1/M^d) Σ_k cos(k·x)/(1 − Ĵ(k)) for the d=3 simple
/// cubic walk, folded onto the positive octant.
pub fn dense_grid_c3(x: [i64; 3], m: usize) -> f64 {
    let ks: Vec<f64> =
        (m / 2..m).map(|i| 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / m as f64 - std::f64::consts::PI).collect();
    let cosk: Vec<f64> = ks.iter().map(|k| k.cos()).collect();
    let cx: Vec<Vec<f64>> = x.iter().map(|&c| ks.iter().map(|k| (k * c as f64).cos()).collect()).collect();
    let mut total = 0.0;
    for a in 0..ks.len() {
        let mut pa = 0.0;
        for b in 0..ks.len() {
            let mut pb = 0.0;
            for c in 0..ks.len() {
                let jhat = (cosk[a] + cosk[b] + cosk[c]) / 3.0;
                pb += cx[2][c] / (1.0 - jhat);
            }
            pa += cx[1][b] * pb;
        }
        total += cx[0][a] * pa;
    }
    8.0 * total / (m as f64).powi(3)
}

/// Dense-grid oracle with the M^{−1} and M^{−3} image terms removed by two
/// Richardson steps over M, 2M, 4M.
pub fn dense_grid_c3_extrapolated(x: [i64; 3], m: usize) -> f64 {
    let c: Vec<f64> = [m, 2 * m, 4 * m].iter().map(|&mm| dense_grid_c3(x, mm)).collect();
    let r1 = [2.0 * c[1] - c[0], 2.0 * c[2] - c[1]];
    (8.0 * r1[1] - r1[0]) / 7.0
}
