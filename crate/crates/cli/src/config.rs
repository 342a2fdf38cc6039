//! Experiment configuration files.

use std::path::PathBuf;

use lacelab::diagrams::Model;
use lacelab::frac::Parity;
use lacelab::green::Method;
use lacelab::step::GSpec;
use serde::de::DeserializeOwned;
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Green,
    Asymptote,
    Counterexample,
    Kernels,
    Diagrams,
    Saw,
    Percolation,
    Bootstrap,
    Crosscheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Green => "green",
            Command::Asymptote => "asymptote",
            Command::Counterexample => "counterexample",
            Command::Kernels => "kernels",
            Command::Diagrams => "diagrams",
            Command::Saw => "saw",
            Command::Percolation => "percolation",
            Command::Bootstrap => "bootstrap",
            Command::Crosscheck => "crosscheck",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Command,
    #[serde(default)]
    seed: u64,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    params: toml::Table,
}

#[derive(Debug)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
    pub params: Params,
}

#[derive(Debug)]
pub enum Params {
    Green(GreenParams),
    Asymptote(AsymptoteParams),
    Counterexample(CounterexampleConfig),
    Kernels(KernelParams),
    Diagrams(DiagramParams),
    Saw(SawParams),
    Percolation(PercParams),
    Bootstrap(BootstrapParams),
    Crosscheck(CrosscheckParams),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepChoice {
    #[default]
    Nn,
    SpreadOut,
}

fn one() -> i64 {
    1
}
fn quad_m() -> usize {
    128
}
fn levels() -> usize {
    3
}
fn series_l() -> usize {
    61
}
fn n_max() -> u64 {
    256
}
fn yes() -> bool {
    true
}
fn t_max_factor() -> f64 {
    1e4
}
fn rel_tol() -> f64 {
    1e-9
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GreenParams {
    pub d: usize,
    #[serde(default)]
    pub step: StepChoice,
    #[serde(default = "one")]
    pub range: i64,
    pub method: Method,
    /// Evaluate on every orbit of the box of this odd side...
    pub l: Option<usize>,
    /// ...or at these sites.
    pub points: Option<Vec<Vec<i64>>>,
    #[serde(default = "quad_m")]
    pub m: usize,
    #[serde(default = "levels")]
    pub levels: usize,
    #[serde(default = "series_l")]
    pub series_l: usize,
    #[serde(default = "n_max")]
    pub n_max: u64,
    #[serde(default = "yes")]
    pub tail: bool,
    #[serde(default = "t_max_factor")]
    pub t_max_factor: f64,
    #[serde(default = "rel_tol")]
    pub rel_tol: f64,
}

fn two() -> f64 {
    2.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoteParams {
    pub d: usize,
    #[serde(default)]
    pub step: StepChoice,
    #[serde(default = "one")]
    pub range: i64,
    #[serde(default = "quad_m")]
    pub m: usize,
    #[serde(default = "levels")]
    pub levels: usize,
    pub r_min: i64,
    pub r_max: i64,
    #[serde(default = "two")]
    pub rho: f64,
}

fn box_121() -> usize {
    121
}
fn m_512() -> usize {
    512
}
fn probe() -> Vec<i64> {
    vec![12, 24, 48]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleConfig {
    pub d: usize,
    pub eps: f64,
    pub g: GSpec,
    pub l_list: Vec<i64>,
    #[serde(default = "box_121")]
    pub box_side: usize,
    #[serde(default = "m_512")]
    pub m: usize,
    #[serde(default = "levels")]
    pub levels: usize,
    #[serde(default = "probe")]
    pub probe: Vec<i64>,
}

fn kernel_eps() -> Vec<f64> {
    vec![0.25, 0.5, 0.75]
}
fn parities() -> Vec<Parity> {
    vec![Parity::Odd, Parity::Even]
}
fn x_max() -> i64 {
    50
}
fn samples() -> usize {
    1000
}
fn quad_nodes() -> usize {
    20
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelParams {
    #[serde(default = "kernel_eps")]
    pub eps: Vec<f64>,
    #[serde(default = "parities")]
    pub parity: Vec<Parity>,
    #[serde(default = "x_max")]
    pub x_max: i64,
    #[serde(default = "samples")]
    pub samples: usize,
    #[serde(default = "quad_nodes")]
    pub quad_nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagramSource {
    /// Truncated SAW series G_p.
    Saw,
    /// A LatticeField JSON file.
    Field,
}

fn node_cap() -> f64 {
    lacelab::saw::DEFAULT_NODE_CAP
}
fn pi_orders() -> Vec<u32> {
    vec![2, 3, 4, 5]
}
fn h_max() -> i64 {
    4
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramParams {
    pub source: DiagramSource,
    pub d: Option<usize>,
    pub n_max: Option<usize>,
    pub p: Option<f64>,
    /// Box side for the series field (default 2N+1).
    pub l: Option<usize>,
    pub field: Option<PathBuf>,
    #[serde(default = "node_cap")]
    pub node_cap: f64,
    #[serde(default)]
    pub weights: Vec<(f64, f64)>,
    /// H is sampled at a = r e_1, b = s e_1 for 0 ≤ r, s ≤ h_max; negative disables H.
    #[serde(default = "h_max")]
    pub h_max: i64,
    #[serde(default = "pi_orders")]
    pub pi_orders: Vec<u32>,
    /// (α, β, γ) of the weighted Π bound.
    #[serde(default)]
    pub pi_weights: (f64, f64, f64),
    pub pivot_p: Option<f64>,
    #[serde(default)]
    pub pivot_gamma: f64,
    #[serde(default)]
    pub dump_fields: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SawParams {
    pub d: usize,
    pub n_max: usize,
    #[serde(default = "node_cap")]
    pub node_cap: f64,
    /// Evaluate G_p and the λ check at this p...
    pub p: Option<f64>,
    /// ...or at this multiple of the p_c estimate.
    pub p_fraction: Option<f64>,
    pub l: Option<usize>,
}

fn perc_weights() -> Vec<(f64, f64)> {
    vec![(2.0, 0.0)]
}
fn no_h() -> i64 {
    -1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PercParams {
    pub d: usize,
    pub l: usize,
    pub p: f64,
    pub n_samples: u64,
    #[serde(default = "perc_weights")]
    pub weights: Vec<(f64, f64)>,
    #[serde(default = "no_h")]
    pub h_max: i64,
    #[serde(default = "yes")]
    pub diagrams: bool,
}

fn eps_bs() -> f64 {
    0.01
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BootstrapParams {
    pub model: Option<Model>,
    pub d: Option<usize>,
    #[serde(default = "eps_bs")]
    pub eps: f64,
    #[serde(default = "yes")]
    pub gates: bool,
}

fn r_max_8() -> i64 {
    8
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosscheckParams {
    pub d: usize,
    #[serde(default)]
    pub step: StepChoice,
    #[serde(default = "one")]
    pub range: i64,
    /// Sites with |x| ≤ r_max.
    #[serde(default = "r_max_8")]
    pub r_max: i64,
    #[serde(default = "series_l")]
    pub l: usize,
    #[serde(default = "quad_m")]
    pub m: usize,
    #[serde(default = "levels")]
    pub levels: usize,
    #[serde(default = "n_max")]
    pub n_max: u64,
    #[serde(default = "t_max_factor")]
    pub t_max_factor: f64,
    #[serde(default = "rel_tol")]
    pub rel_tol: f64,
}

/// A config validation failure with the dotted path of the offending field.
#[derive(Debug)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

fn typed<T: DeserializeOwned>(value: toml::Value, prefix: &str) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner.as_str()) {
            (true, _) => inner.clone(),
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{inner}"),
        };
        let path = if path == "." { String::new() } else { path };
        ConfigError { path, message: e.into_inner().message().to_string() }
    })
}

pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let table: toml::Table =
        toml::from_str(text).map_err(|e| ConfigError { path: String::new(), message: e.to_string() })?;
    let raw: RawConfig = typed(toml::Value::Table(table), "")?;
    let p = toml::Value::Table(raw.params);
    let params = match raw.command {
        Command::Green => Params::Green(typed(p, "params")?),
        Command::Asymptote => Params::Asymptote(typed(p, "params")?),
        Command::Counterexample => Params::Counterexample(typed(p, "params")?),
        Command::Kernels => Params::Kernels(typed(p, "params")?),
        Command::Diagrams => Params::Diagrams(typed(p, "params")?),
        Command::Saw => Params::Saw(typed(p, "params")?),
        Command::Percolation => Params::Percolation(typed(p, "params")?),
        Command::Bootstrap => Params::Bootstrap(typed(p, "params")?),
        Command::Crosscheck => Params::Crosscheck(typed(p, "params")?),
    };
    Ok(ExperimentConfig { command: raw.command, seed: raw.seed, output_dir: raw.output_dir, params })
}
