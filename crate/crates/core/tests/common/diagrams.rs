//! Nested-loop evaluation of every diagram on the torus, O(L^{2d}) or worse.

use std::collections::HashMap;

use lacelab::LatticeField;

use super::Torus;

pub type Map = HashMap<Vec<i64>, f64>;

pub fn rel_err(field: &LatticeField, oracle: &Map) -> f64 {
    let scale = oracle.values().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = oracle.iter().fold(0.0f64, |m, (x, v)| m.max((field.get(x) - v).abs()));
    diff / scale
}

pub struct Oracle {
    pub t: Torus,
    pub g: Map,
}

impl Oracle {
    pub fn new(g: &LatticeField) -> Self {
        let t = Torus::new(g.d, g.l);
        let g = t.map(g);
        Self { t, g }
    }

    pub fn at_origin(&self) -> Vec<i64> {
        vec![0; self.t.d]
    }

    pub fn bubble(&self) -> Map {
        let o = self.at_origin();
        let sites = &self.t.sites;
        sites
            .iter()
            .map(|a| {
                let s = sites.iter().filter(|y| **y != o).map(|y| self.g[y] * self.g[&self.t.sub(a, y)]).sum();
                (a.clone(), s)
            })
            .collect()
    }

    pub fn w(&self, beta: f64, gamma: f64) -> Map {
        self.t.conv(&self.t.weighted(&self.g, beta), &self.t.weighted(&self.g, gamma))
    }

    pub fn triangle(&self, beta: f64, gamma: f64) -> Map {
        let gb = self.t.weighted(&self.g, beta);
        let gc = self.t.weighted(&self.g, gamma);
        let sites = &self.t.sites;
        let o = self.at_origin();
        let g0 = self.g[&o];
        sites
            .iter()
            .map(|a| {
                let mut s = 0.0;
                for y in sites {
                    for z in sites {
                        s += gb[y] * gc[&self.t.sub(z, y)] * self.g[&self.t.sub(a, z)];
                    }
                }
                if *a == o && beta == 0.0 && gamma == 0.0 {
                    s -= g0.powi(3);
                }
                (a.clone(), s)
            })
            .collect()
    }

    pub fn square(&self, gamma: f64) -> Map {
        let gg = self.t.conv(&self.g, &self.g);
        let ggg = self.t.conv(&gg, &self.g);
        let mut s = self.t.conv(&self.t.weighted(&self.g, gamma), &ggg);
        if gamma == 0.0 {
            let o = self.at_origin();
            *s.get_mut(&o).unwrap() -= self.g[&o].powi(4);
        }
        s
    }

    pub fn pentagon(&self) -> Map {
        let mut p = self.g.clone();
        for _ in 0..4 {
            p = self.t.conv(&p, &self.g);
        }
        p
    }

    pub fn h(&self, beta: f64, a: &[i64], b: &[i64]) -> f64 {
        let sites = &self.t.sites;
        let r: Map = sites
            .iter()
            .map(|c| (c.clone(), sites.iter().map(|z| self.g[z] * self.g[&self.t.add(z, c)]).sum()))
            .collect();
        let gb = self.t.weighted(&self.g, beta);
        let mut total = 0.0;
        for x in sites {
            for u in sites {
                let gu = self.g[u] * self.g[&self.t.sub(x, u)] * gb[x];
                if gu == 0.0 {
                    continue;
                }
                for v in sites {
                    let xb = self.t.add(x, b);
                    total += gu * self.g[&self.t.sub(v, u)] * r[&self.t.sub(a, v)] * r[&self.t.sub(&xb, v)];
                }
            }
        }
        total
    }
}

