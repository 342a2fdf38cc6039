//! Bond percolation on the periodic box: Monte Carlo two-point function.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagrams::{diagram_suite, Bars, DiagramOptions, DiagramSet};
use crate::lattice::LatticeField;
use crate::{Error, Result};

/// Largest number of bond draws (bonds × samples) accepted by one call.
pub const BOND_DRAW_BUDGET: f64 = 4e10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PercEstimate {
    pub d: usize,
    pub l: usize,
    pub p: f64,
    pub n_samples: u64,
    pub seed: u64,
    /// Orbit-averaged P̂(0 ↔ x).
    pub mean: LatticeField,
    /// Binomial standard error √(m(1−m)/n) at the orbit-averaged mean.
    pub stderr: LatticeField,
}

/// Disjoint sets with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    pub fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.size.fill(1);
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }

    pub fn component_size(&mut self, x: u32) -> u32 {
        let r = self.find(x);
        self.size[r as usize]
    }
}

/// The generator for one sample: a ChaCha8 stream keyed by `seed`, stream
/// number `sample`.
pub fn sample_rng(seed: u64, sample: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample);
    rng
}

/// Torus strides in field storage order (first coordinate slowest).
fn strides(d: usize, l: usize) -> Vec<usize> {
    let mut s = vec![1; d];
    for j in (0..d.saturating_sub(1)).rev() {
        s[j] = s[j + 1] * l;
    }
    s
}

/// Occupation threshold on 32-bit draws: a bond is open when its draw is
/// below round(p·2³²), so p is resolved to 2⁻³².
pub fn bond_threshold(p: f64) -> u64 {
    (p * 4294967296.0).round() as u64
}

/// Draws one configuration and merges open bonds. Bonds are visited site by
/// site in storage order, axis by axis, each in the +e_j direction.
pub fn draw_configuration(uf: &mut UnionFind, d: usize, l: usize, p: f64, rng: &mut ChaCha8Rng) {
    let st = strides(d, l);
    let thr = bond_threshold(p);
    let n = uf.parent.len();
    uf.reset();
    let mut c = vec![0usize; d];
    for i in 0..n {
        for j in 0..d {
            if (rng.next_u32() as u64) < thr {
                let nb = if c[j] + 1 == l { i - c[j] * st[j] } else { i + st[j] };
                uf.union(i as u32, nb as u32);
            }
        }
        for j in (0..d).rev() {
            c[j] += 1;
            if c[j] < l {
                break;
            }
            c[j] = 0;
        }
    }
}

fn check_args(d: usize, l: usize, p: f64, n_samples: u64) -> Result<usize> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p={p} must lie in [0, 1]")));
    }
    if n_samples == 0 {
        return Err(Error::Domain("n_samples must be positive".into()));
    }
    if l < 3 {
        return Err(Error::Shape(format!("L={l} must be at least 3")));
    }
    let sites = LatticeField::zeros(d, l)?.len();
    if sites > u32::MAX as usize {
        return Err(Error::Budget(format!("{sites} sites exceed the union-find index range")));
    }
    let draws = sites as f64 * d as f64 * n_samples as f64;
    if draws > BOND_DRAW_BUDGET {
        return Err(Error::Budget(format!("{draws:.3e} bond draws exceed the budget {BOND_DRAW_BUDGET:.1e}")));
    }
    Ok(sites)
}

/// Connection counts #{samples : 0 ↔ x} in field storage order.
pub fn connection_counts(d: usize, l: usize, p: f64, n_samples: u64, seed: u64) -> Result<Vec<u64>> {
    let sites = check_args(d, l, p, n_samples)?;
    let origin = LatticeField::zeros(d, l)?.index(&vec![0; d]) as u32;
    let chunks = (rayon::current_num_threads() as u64 * 4).clamp(1, n_samples);
    let per = n_samples.div_ceil(chunks);
    let counts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut uf = UnionFind::new(sites);
            let mut acc = vec![0u64; sites];
            for s in c * per..((c + 1) * per).min(n_samples) {
                let mut rng = sample_rng(seed, s);
                draw_configuration(&mut uf, d, l, p, &mut rng);
                let r0 = uf.find(origin);
                for (x, a) in acc.iter_mut().enumerate() {
                    if uf.find(x as u32) == r0 {
                        *a += 1;
                    }
                }
            }
            acc
        })
        .reduce(
            || vec![0u64; sites],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(counts)
}

pub fn sample_two_point(d: usize, l: usize, p: f64, n_samples: u64, seed: u64) -> Result<PercEstimate> {
    let counts = connection_counts(d, l, p, n_samples, seed)?;
    let n = n_samples as f64;
    let mut raw = LatticeField::zeros(d, l)?;
    for (v, c) in raw.values.iter_mut().zip(&counts) {
        *v = *c as f64 / n;
    }
    let mean = raw.symmetrized();
    let mut stderr = mean.clone();
    for v in stderr.values.iter_mut() {
        *v = (*v * (1.0 - *v) / n).max(0.0).sqrt();
    }
    Ok(PercEstimate { d, l, p, n_samples, seed, mean, stderr })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PercDiagramReport {
    pub set: DiagramSet,
    /// Bars recomputed at max(mean − stderr, 0).
    pub lower: Bars,
    /// Bars recomputed at min(mean + stderr, 1).
    pub upper: Bars,
    /// lower ≤ central ≤ upper for every bar.
    pub ordered: bool,
}

fn bar_values(b: &Bars) -> Vec<f64> {
    let mut v = vec![b.b, b.p];
    v.extend(b.g.iter().map(|e| e.1));
    v.extend(b.w.iter().map(|e| e.2));
    v.extend(b.t.iter().map(|e| e.2));
    v.extend(b.s.iter().map(|e| e.1));
    v.extend(b.h.iter().map(|e| e.1));
    v
}

/// Diagram suite on the mean field plus the stderr envelope.
pub fn perc_diagram_bridge(est: &PercEstimate, opts: &DiagramOptions) -> Result<PercDiagramReport> {
    let shifted = |sign: f64| {
        let mut f = est.mean.clone();
        for (v, s) in f.values.iter_mut().zip(&est.stderr.values) {
            *v = (*v + sign * s).clamp(0.0, 1.0);
        }
        f
    };
    let set = diagram_suite(&est.mean, opts)?;
    let lower = diagram_suite(&shifted(-1.0), opts)?.bars;
    let upper = diagram_suite(&shifted(1.0), opts)?.bars;
    let (lo, mid, hi) = (bar_values(&lower), bar_values(&set.bars), bar_values(&upper));
    let tol = |x: f64| 1e-12 * x.abs().max(1e-300);
    let ordered =
        lo.iter().zip(&mid).zip(&hi).all(|((a, b), c)| *a <= *b + tol(*b) && *b <= *c + tol(*c));
    Ok(PercDiagramReport { set, lower, upper, ordered })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes() {
        let e = sample_two_point(2, 5, 0.0, 10, 1).unwrap();
        assert_eq!(e.mean, LatticeField::delta(2, 5).unwrap());
        assert!(e.stderr.values.iter().all(|&s| s == 0.0));
        let e = sample_two_point(3, 3, 1.0, 3, 1).unwrap();
        assert!(e.mean.values.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn union_find_sizes() {
        let mut uf = UnionFind::new(6);
        uf.union(0, 1);
        uf.union(2, 3);
        uf.union(1, 3);
        assert_eq!(uf.component_size(2), 4);
        assert_eq!(uf.component_size(5), 1);
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(sample_two_point(7, 9, 0.1, 100_000, 0), Err(Error::Budget(_))));
    }
}
