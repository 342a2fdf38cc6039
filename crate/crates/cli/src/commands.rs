//! Dispatch from a parsed config to the library and the report writers.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lacelab::bootstrap::{gate_table, run_bootstrap};
use lacelab::diagrams::{diagram_suite, pi_sum_bound_saw, pivot_factor, DiagramOptions, LAMBDA_REF};
use lacelab::frac::{kernel_probe, FracKernel};
use lacelab::green::{
    asymptotics_report, counterexample_experiment, green_heat, green_quadrature, green_series, resolvent_residual,
    CounterexampleOptions, GreenResult, HeatOptions, Method, Points, QuadratureOptions, SeriesOptions,
};
use lacelab::lattice::{canonical_points, norm2, LatticeField};
use lacelab::perc::{perc_diagram_bridge, sample_two_point};
use lacelab::saw::{enumerate_saw_cached, estimate_pc, extract_pi_series, g_series_eval, lambda_check, series_roundtrip_residual};
use lacelab::step::{nn_step, spread_out_step, CounterexampleParams, StepDistribution};
use serde::Serialize;
use serde_json::json;

use crate::config::*;

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Lab(lacelab::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error at {e}"),
            RunError::Lab(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<lacelab::Error> for RunError {
    fn from(e: lacelab::Error) -> Self {
        RunError::Lab(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError::Lab(e.into())
    }
}

fn bad(path: &str, message: impl Into<String>) -> RunError {
    RunError::Config(ConfigError { path: path.into(), message: message.into() })
}

/// Report files written by one run, in creation order.
pub struct Output {
    pub dir: PathBuf,
    pub files: Vec<String>,
}

impl Output {
    pub fn new(dir: PathBuf) -> std::io::Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(Self { dir, files: Vec::new() })
    }

    fn text(&mut self, name: &str, body: &str) -> Result<(), RunError> {
        fs::write(self.dir.join(name), body)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), RunError> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.text(name, &s)
    }
}

pub struct RunContext<'a> {
    pub seed: u64,
    pub cache_dir: &'a Path,
    /// Set when a SAW enumeration was served from the cache.
    pub cache_hit: Option<bool>,
}

fn coord_header(d: usize) -> String {
    (1..=d).map(|i| format!("x{i}")).collect::<Vec<_>>().join(",")
}

fn coords(x: &[i64]) -> String {
    x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn step_for(d: usize, step: StepChoice, range: i64) -> Result<StepDistribution, RunError> {
    Ok(match step {
        StepChoice::Nn => nn_step(d),
        StepChoice::SpreadOut => spread_out_step(d, range)?,
    })
}

fn check_d(d: usize) -> Result<(), RunError> {
    if d < 3 {
        return Err(bad("params.d", format!("d={d} must be at least 3")));
    }
    Ok(())
}

fn solve(j: &StepDistribution, method: Method, points: &Points, p: &SolverSettings) -> Result<GreenResult, RunError> {
    Ok(match method {
        Method::Quadrature => green_quadrature(j, points, &QuadratureOptions { m: p.m, levels: p.levels })?,
        Method::HeatSplit => {
            green_heat(j, points, &HeatOptions { t_max_factor: p.t_max_factor, rel_tol: p.rel_tol })?
        }
        Method::Series => green_series(
            j,
            points,
            &SeriesOptions { l: p.series_l, n_max: p.n_max, tail: p.tail, ..SeriesOptions::default() },
        )?,
    })
}

struct SolverSettings {
    m: usize,
    levels: usize,
    series_l: usize,
    n_max: u64,
    tail: bool,
    t_max_factor: f64,
    rel_tol: f64,
}

pub fn run(params: &Params, ctx: &mut RunContext, out: &mut Output) -> Result<(), RunError> {
    match params {
        Params::Green(p) => green(p, out),
        Params::Asymptote(p) => asymptote(p, out),
        Params::Counterexample(p) => counterexample(p, out),
        Params::Kernels(p) => kernels(p, out),
        Params::Diagrams(p) => diagrams(p, ctx, out),
        Params::Saw(p) => saw(p, ctx, out),
        Params::Percolation(p) => percolation(p, ctx.seed, out),
        Params::Bootstrap(p) => bootstrap(p, out),
        Params::Crosscheck(p) => crosscheck(p, out),
    }
}

fn green(p: &GreenParams, out: &mut Output) -> Result<(), RunError> {
    check_d(p.d)?;
    let j = step_for(p.d, p.step, p.range)?;
    let points = match (&p.l, &p.points) {
        (Some(l), None) => Points::Box(*l),
        (None, Some(v)) => Points::List(v.clone()),
        _ => return Err(bad("params", "give exactly one of `l` and `points`")),
    };
    let settings = SolverSettings {
        m: p.m,
        levels: p.levels,
        series_l: p.series_l,
        n_max: p.n_max,
        tail: p.tail,
        t_max_factor: p.t_max_factor,
        rel_tol: p.rel_tol,
    };
    let r = solve(&j, p.method, &points, &settings)?;
    let resolvent = resolvent_residual(&r, &j)?;
    let mut csv = format!("{},C,error\n", coord_header(p.d));
    for ((x, v), e) in r.points.iter().zip(&r.values).zip(&r.errors) {
        writeln!(csv, "{},{v:e},{e:e}", coords(x)).unwrap();
    }
    out.text("green.csv", &csv)?;
    out.json("green.json", &json!({ "d": p.d, "method": p.method, "diagnostics": r.diagnostics, "resolvent": resolvent }))
}

fn asymptote(p: &AsymptoteParams, out: &mut Output) -> Result<(), RunError> {
    check_d(p.d)?;
    if p.r_min < 1 || p.r_max < p.r_min {
        return Err(bad("params.r_max", "need 1 ≤ r_min ≤ r_max"));
    }
    let j = step_for(p.d, p.step, p.range)?;
    let pts = (p.r_min..=p.r_max)
        .map(|r| {
            let mut x = vec![0; p.d];
            x[0] = r;
            x
        })
        .collect();
    let r = green_quadrature(&j, &Points::List(pts), &QuadratureOptions { m: p.m, levels: p.levels })?;
    let rep = asymptotics_report(&r, &j, p.rho)?;
    let mut csv = Vec::new();
    rep.write_csv(&mut csv)?;
    out.text("asymptote.csv", &String::from_utf8(csv).expect("csv is utf-8"))?;
    out.json(
        "asymptote.json",
        &json!({
            "d": rep.d,
            "a_d": rep.a_d,
            "k1": rep.k1,
            "predicted_coeff": rep.predicted_coeff,
            "rho": rep.rho,
            "error_exponent": rep.error_exponent,
            "fitted_exponent": rep.fitted_exponent,
            "deviation_shrinking": rep.deviation_shrinking(),
            "quadrature": r.diagnostics,
        }),
    )
}

fn counterexample(p: &CounterexampleConfig, out: &mut Output) -> Result<(), RunError> {
    let params = CounterexampleParams { d: p.d, eps: p.eps, g: p.g, l_list: p.l_list.clone() };
    let opts = CounterexampleOptions {
        l: p.box_side,
        quadrature: QuadratureOptions { m: p.m, levels: p.levels },
        probe: p.probe.clone(),
    };
    let rep = counterexample_experiment(&params, &opts)?;
    out.json("growth.json", &rep)
}

fn kernels(p: &KernelParams, out: &mut Output) -> Result<(), RunError> {
    let mut reports = Vec::new();
    let mut csv = String::from("epsilon,parity,max_residual,margin,derivative_margin,integral_gap,grid\n");
    for (i, &eps) in p.eps.iter().enumerate() {
        for &parity in &p.parity {
            let k = FracKernel::new(parity, eps).map_err(|e| bad(&format!("params.eps[{i}]"), e.to_string()))?;
            let r = kernel_probe(&k, p.x_max, p.samples, p.quad_nodes)?;
            let par = serde_json::to_value(r.parity)?;
            writeln!(
                csv,
                "{:e},{},{:e},{:e},{:e},{:e},{}",
                r.epsilon,
                par.as_str().unwrap_or(""),
                r.max_residual,
                r.margin,
                r.derivative_margin,
                r.integral_gap,
                r.grid
            )
            .unwrap();
            reports.push(r);
        }
    }
    out.text("kernels.csv", &csv)?;
    out.json("kernels.json", &reports)
}

fn field_csv(f: &LatticeField) -> Result<String, RunError> {
    let mut buf = Vec::new();
    f.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

fn diagrams(p: &DiagramParams, ctx: &mut RunContext, out: &mut Output) -> Result<(), RunError> {
    let mut lambda = None;
    let mut truncation = None;
    let g = match p.source {
        DiagramSource::Saw => {
            let d = p.d.ok_or_else(|| bad("params.d", "required for source = \"saw\""))?;
            let n = p.n_max.ok_or_else(|| bad("params.n_max", "required for source = \"saw\""))?;
            let pp = p.p.ok_or_else(|| bad("params.p", "required for source = \"saw\""))?;
            let (series, hit) = enumerate_saw_cached(d, n, p.node_cap, Some(ctx.cache_dir))?;
            ctx.cache_hit = Some(hit);
            let ev = g_series_eval(&series, pp, p.l)?;
            lambda = Some(lambda_check(&ev.field)?);
            truncation = Some(ev.last_term);
            ev.field
        }
        DiagramSource::Field => {
            let path = p.field.as_ref().ok_or_else(|| bad("params.field", "required for source = \"field\""))?;
            LatticeField::from_json(&fs::read_to_string(path)?)?
        }
    };
    let (al, be, ga) = p.pi_weights;
    let mut weights = p.weights.clone();
    for w in [(be, ga), (be, 0.0), (0.0, ga)] {
        if !weights.contains(&w) {
            weights.push(w);
        }
    }
    let h_samples = if p.h_max < 0 { Vec::new() } else { DiagramOptions::axis_samples(g.d, p.h_max) };
    let opts = DiagramOptions { h_samples, ..DiagramOptions::new(g.d, weights) };
    let set = diagram_suite(&g, &opts)?;
    let pi = p
        .pi_orders
        .iter()
        .map(|&n| pi_sum_bound_saw(&g, &set, n, (al, be, ga)))
        .collect::<lacelab::Result<Vec<_>>>()?;
    let pivot = match p.pivot_p {
        Some(pp) => {
            let r = pivot_factor(&g, pp, p.pivot_gamma)?;
            Some(json!({
                "p": r.p,
                "gamma": r.gamma,
                "generic_bound": r.generic_bound,
                "adjacent_bound": r.adjacent_bound,
                "adjustment": r.adjustment,
            }))
        }
        None => None,
    };
    out.json(
        "diagrams.json",
        &json!({
            "d": set.d,
            "l": set.l,
            "bars": set.bars,
            "wrap_contamination": set.wrap_contamination,
            "warnings": set.warnings,
            "pi_bounds": pi,
            "pivot": pivot,
            "lambda": lambda,
            "series_last_term": truncation,
        }),
    )?;
    if p.dump_fields {
        out.text("bubble.csv", &field_csv(&set.b)?)?;
        out.text("triangle.csv", &field_csv(set.t(0.0, 0.0).expect("T^(0,0) is always computed"))?)?;
        out.text("pentagon.csv", &field_csv(&set.p)?)?;
    }
    Ok(())
}

fn saw(p: &SawParams, ctx: &mut RunContext, out: &mut Output) -> Result<(), RunError> {
    if p.p.is_some() && p.p_fraction.is_some() {
        return Err(bad("params", "give at most one of `p` and `p_fraction`"));
    }
    let (series, hit) = enumerate_saw_cached(p.d, p.n_max, p.node_cap, Some(ctx.cache_dir))?;
    ctx.cache_hit = Some(hit);
    let pi = extract_pi_series(&series)?;
    let residual = series_roundtrip_residual(&series, &pi)?;
    let pc = estimate_pc(&pi);
    let mut counts = String::from("n,c_n\n");
    for (n, c) in series.totals().iter().enumerate() {
        writeln!(counts, "{n},{c}").unwrap();
    }
    out.text("saw_counts.csv", &counts)?;
    let mut pis = String::from("n,pi_n\n");
    for (n, c) in pi.totals().iter().enumerate() {
        writeln!(pis, "{n},{c}").unwrap();
    }
    out.text("saw_pi.csv", &pis)?;
    let p_eval = match (p.p, p.p_fraction, &pc) {
        (Some(v), _, _) => Some(v),
        (None, Some(f), Ok(est)) => Some(f * est.p_c),
        (None, Some(_), Err(e)) => return Err(RunError::Lab(lacelab::Error::Bracket(e.to_string()))),
        (None, None, _) => None,
    };
    let lambda = match p_eval {
        Some(pv) => {
            let ev = g_series_eval(&series, pv, p.l)?;
            Some(json!({ "p": pv, "last_term": ev.last_term, "check": lambda_check(&ev.field)? }))
        }
        None => None,
    };
    let (estimate, diagnostic) = match pc {
        Ok(e) => (Some(e), None),
        Err(e) => (None, Some(e.to_string())),
    };
    out.json(
        "saw.json",
        &json!({
            "d": p.d,
            "n_max": p.n_max,
            "roundtrip_residual": residual.to_string(),
            "pc": estimate,
            "pc_diagnostic": diagnostic,
            "lambda": lambda,
        }),
    )
}

fn percolation(p: &PercParams, seed: u64, out: &mut Output) -> Result<(), RunError> {
    let est = sample_two_point(p.d, p.l, p.p, p.n_samples, seed)?;
    let mut csv = format!("{},mean,stderr\n", coord_header(p.d));
    for x in canonical_points(p.d, est.mean.half()) {
        writeln!(csv, "{},{:e},{:e}", coords(&x), est.mean.get(&x), est.stderr.get(&x)).unwrap();
    }
    out.text("perc.csv", &csv)?;
    let bridge = if p.diagrams {
        let h_samples = if p.h_max < 0 { Vec::new() } else { DiagramOptions::axis_samples(p.d, p.h_max) };
        let opts = DiagramOptions { h_samples, ..DiagramOptions::new(p.d, p.weights.clone()) };
        let r = perc_diagram_bridge(&est, &opts)?;
        let t00 = r.set.bars.t_bar(0.0, 0.0);
        Some(json!({
            "bars": r.set.bars,
            "lower": r.lower,
            "upper": r.upper,
            "ordered": r.ordered,
            "wrap_contamination": r.set.wrap_contamination,
            "warnings": r.set.warnings,
            "lambda_ref": LAMBDA_REF,
            "t00": t00,
            "t00_below_lambda": t00.map(|t| t < LAMBDA_REF),
        }))
    } else {
        None
    };
    out.json(
        "perc.json",
        &json!({
            "d": est.d,
            "l": est.l,
            "p": est.p,
            "n_samples": est.n_samples,
            "seed": est.seed,
            "diagrams": bridge,
        }),
    )
}

fn bootstrap(p: &BootstrapParams, out: &mut Output) -> Result<(), RunError> {
    let trace = match (p.model, p.d) {
        (Some(m), Some(d)) => Some(run_bootstrap(m, d, p.eps).map_err(|e| bad("params.d", e.to_string()))?),
        (None, None) => None,
        (None, Some(_)) => return Err(bad("params.model", "required when `d` is given")),
        (Some(_), None) => return Err(bad("params.d", "required when `model` is given")),
    };
    let gates = if p.gates { Some(gate_table(p.eps).map_err(|e| bad("params.eps", e.to_string()))?) } else { None };
    if let Some(t) = &trace {
        let mut csv = String::from("i,alpha_or_beta,gamma,phi\n");
        for s in &t.steps {
            let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
            writeln!(csv, "{},{},{},{:e}", s.i, opt(s.alpha_or_beta), opt(s.gamma), s.phi).unwrap();
        }
        out.text("bootstrap_trace.csv", &csv)?;
    }
    if let Some(g) = &gates {
        let mut csv = String::from("model,min_d,terminal_alpha,threshold\n");
        for r in g {
            let m = serde_json::to_value(r.model)?;
            writeln!(csv, "{},{},{:e},{:e}", m.as_str().unwrap_or(""), r.min_d, r.terminal_alpha, r.threshold).unwrap();
        }
        out.text("gates.csv", &csv)?;
    }
    let verdict = trace.as_ref().map(|t| t.verdict());
    out.json("bootstrap.json", &json!({ "trace": trace, "verdict": verdict, "gates": gates }))
}

fn crosscheck(p: &CrosscheckParams, out: &mut Output) -> Result<(), RunError> {
    check_d(p.d)?;
    let j = step_for(p.d, p.step, p.range)?;
    let pts: Vec<Vec<i64>> =
        canonical_points(p.d, p.r_max).into_iter().filter(|x| norm2(x) <= p.r_max * p.r_max).collect();
    let points = Points::List(pts.clone());
    let settings = SolverSettings {
        m: p.m,
        levels: p.levels,
        series_l: p.l,
        n_max: p.n_max,
        tail: true,
        t_max_factor: p.t_max_factor,
        rel_tol: p.rel_tol,
    };
    let methods = [Method::Quadrature, Method::HeatSplit, Method::Series];
    let results = methods.iter().map(|&m| solve(&j, m, &points, &settings)).collect::<Result<Vec<_>, _>>()?;
    let mut csv = format!("{},absx,quadrature,heat_split,series,max_rel_dev\n", coord_header(p.d));
    let mut worst = (0.0f64, Vec::new());
    for x in &pts {
        let v: Vec<f64> = results.iter().map(|r| r.value(x).expect("solver returns every requested point")).collect();
        let mut dev = 0.0f64;
        for a in 0..3 {
            for b in a + 1..3 {
                dev = dev.max((v[a] - v[b]).abs() / v[a].abs().max(v[b].abs()));
            }
        }
        if dev > worst.0 {
            worst = (dev, x.clone());
        }
        let absx = (norm2(x) as f64).sqrt();
        writeln!(csv, "{},{absx:e},{:e},{:e},{:e},{dev:e}", coords(x), v[0], v[1], v[2]).unwrap();
    }
    out.text("crosscheck.csv", &csv)?;
    let origin = vec![0; p.d];
    out.json(
        "crosscheck.json",
        &json!({
            "d": p.d,
            "points": pts.len(),
            "max_pairwise_rel_dev": worst.0,
            "worst_point": worst.1,
            "c0": methods.iter().zip(&results).map(|(m, r)| json!({ "method": m, "value": r.value(&origin) })).collect::<Vec<_>>(),
            "diagnostics": methods.iter().zip(&results).map(|(m, r)| json!({ "method": m, "diagnostics": r.diagnostics })).collect::<Vec<_>>(),
        }),
    )
}
