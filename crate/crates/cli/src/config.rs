//! INI experiment configs. Every key has a default; unknown sections or keys
//! are rejected so that typos do not silently fall back to defaults.

use anyhow::{anyhow, bail, Context, Result};
use ini::Ini;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fracwave_core::frac::FracParams;
use fracwave_core::simulator::{InitialData, SimConfig};
use fracwave_core::spectrum::{RefineOptions, SystemParams, DEFAULT_K_MAX, DEFAULT_N0};

/// Environment variable that overrides the output directory of the config.
pub const OUT_ENV: &str = "FRACWAVE_OUT";
pub const DEFAULT_OUT_DIR: &str = "fracwave-out";

const KEYS: &[(&str, &[&str])] = &[
    ("output", &["dir"]),
    ("params", &["a", "b", "alpha", "eta", "gamma"]),
    ("spectrum", &["n_lo", "n_hi", "branches", "n0", "tol", "max_iter", "k_max"]),
    (
        "simulate",
        &[
            "n_cells", "dt", "t_final", "xi_tol", "initial", "seed", "modes", "k1", "k2", "samples", "fit_lo",
            "fit_hi", "plot_points",
        ],
    ),
    ("verify", &["kappa_scale", "n_cells", "t_final"]),
    ("sweep", &["command", "parameter", "values"]),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamsConfig {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub eta: f64,
    pub gamma: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        ParamsConfig { a: 1.0, b: 1.0, alpha: 0.5, eta: 1.0, gamma: 1.0 }
    }
}

impl ParamsConfig {
    /// Validates and builds the parameters; `allow_undamped` admits `γ = 0`.
    pub fn build(&self, allow_undamped: bool) -> Result<SystemParams> {
        let f = if self.gamma == 0.0 && allow_undamped {
            FracParams::undamped(self.alpha, self.eta)?
        } else {
            FracParams::new(self.alpha, self.eta, self.gamma)?
        };
        Ok(SystemParams::new(self.a, self.b, f)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumConfig {
    pub n_lo: i64,
    pub n_hi: i64,
    pub branches: Vec<u8>,
    pub n0: i64,
    pub tol: f64,
    pub max_iter: usize,
    pub k_max: i64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            n_lo: 20,
            n_hi: 200,
            branches: vec![1, 2],
            n0: DEFAULT_N0,
            tol: 1e-10,
            max_iter: 60,
            k_max: DEFAULT_K_MAX,
        }
    }
}

impl SpectrumConfig {
    pub fn refine_options(&self) -> RefineOptions {
        RefineOptions { tol: self.tol, max_iter: self.max_iter, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateConfig {
    pub n_cells: usize,
    pub dt: Option<f64>,
    pub t_final: f64,
    pub xi_tol: f64,
    pub initial: String,
    pub seed: u64,
    pub modes: usize,
    pub k1: i64,
    pub k2: i64,
    pub samples: Option<PathBuf>,
    pub fit_lo: Option<f64>,
    pub fit_hi: Option<f64>,
    pub plot_points: usize,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            n_cells: 200,
            dt: None,
            t_final: 100.0,
            xi_tol: 1e-6,
            initial: "standard".into(),
            seed: 1,
            modes: 8,
            k1: 2,
            k2: 1,
            samples: None,
            fit_lo: None,
            fit_hi: None,
            plot_points: 200,
        }
    }
}

impl SimulateConfig {
    /// Resolves the initial-data selector; `samples` is read from disk.
    pub fn initial_data(&self) -> Result<InitialData> {
        Ok(match self.initial.as_str() {
            "zero" => InitialData::Zero,
            "quarter_sine" => InitialData::QuarterSine,
            "standard" => InitialData::Standard,
            "random" => InitialData::Random { seed: self.seed, modes: self.modes },
            "mode" => InitialData::ExceptionalMode { k1: self.k1, k2: self.k2 },
            "samples" => {
                let path = self.samples.as_ref().ok_or_else(|| anyhow!("initial = samples needs a samples path"))?;
                read_samples(path)?
            }
            other => bail!("unknown initial data '{other}' (zero, quarter_sine, standard, random, mode, samples)"),
        })
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        Ok(SimConfig {
            n_cells: self.n_cells,
            dt: self.dt,
            t_final: self.t_final,
            initial: self.initial_data()?,
            xi_tol: self.xi_tol,
        })
    }
}

/// CSV with columns `u0,u1,y0,y1` (header required, `#` comments allowed).
fn read_samples(path: &Path) -> Result<InitialData> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading samples {}", path.display()))?;
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| anyhow!("empty samples file"))?.split(',').map(str::trim).collect();
    let col = |name: &str| header.iter().position(|h| *h == name).ok_or_else(|| anyhow!("samples file lacks column {name}"));
    let idx = [col("u0")?, col("u1")?, col("y0")?, col("y1")?];
    let mut cols: [Vec<f64>; 4] = Default::default();
    for (k, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        for (c, &i) in cols.iter_mut().zip(&idx) {
            let cell = cells.get(i).ok_or_else(|| anyhow!("samples row {} is short", k + 1))?;
            c.push(cell.parse().with_context(|| format!("samples row {}", k + 1))?);
        }
    }
    let [u0, u1, y0, y1] = cols;
    Ok(InitialData::Samples { u0, u1, y0, y1 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// Test hook: scales `κ(α)` in the transfer check.
    pub kappa_scale: f64,
    pub n_cells: usize,
    pub t_final: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { kappa_scale: 1.0, n_cells: 64, t_final: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Spectrum,
    Simulate,
    Verify,
    Sweep,
}

impl FromStr for Command {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "spectrum" => Command::Spectrum,
            "simulate" => Command::Simulate,
            "verify" => Command::Verify,
            "sweep" => Command::Sweep,
            _ => bail!("unknown command '{s}'"),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    /// `spectrum` or `simulate`.
    pub command: Command,
    /// One of `a`, `b`, `alpha`, `eta`, `gamma`.
    pub parameter: String,
    pub values: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { command: Command::Spectrum, parameter: "b".into(), values: vec![] }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub output_dir: Option<PathBuf>,
    pub params: ParamsConfig,
    pub spectrum: SpectrumConfig,
    pub simulate: SimulateConfig,
    pub verify: VerifyConfig,
    pub sweep: SweepConfig,
}

fn parse<T: FromStr>(ini: &Ini, section: &str, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match ini.get_from(Some(section), key) {
        None => Ok(None),
        Some(v) if v.trim().is_empty() => Ok(None),
        Some(v) => v.trim().parse().map(Some).map_err(|e| anyhow!("[{section}] {key} = {v}: {e}")),
    }
}

fn parse_list<T: FromStr>(ini: &Ini, section: &str, key: &str) -> Result<Option<Vec<T>>>
where
    T::Err: std::fmt::Display,
{
    let Some(v) = ini.get_from(Some(section), key) else { return Ok(None) };
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| anyhow!("[{section}] {key}: '{s}': {e}")))
        .collect::<Result<Vec<T>>>()
        .map(Some)
}

macro_rules! set {
    ($ini:expr, $sec:literal, $target:expr, $key:ident) => {
        if let Some(v) = parse($ini, $sec, stringify!($key))? {
            $target.$key = v;
        }
    };
}

macro_rules! set_opt {
    ($ini:expr, $sec:literal, $target:expr, $key:ident) => {
        if let Some(v) = parse($ini, $sec, stringify!($key))? {
            $target.$key = Some(v);
        }
    };
}

impl ExperimentConfig {
    pub fn from_ini_str(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| anyhow!("config parse error: {e}"))?;
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if let Some((k, _)) = props.iter().next() {
                    bail!("key '{k}' outside any section");
                }
                continue;
            };
            let allowed = KEYS
                .iter()
                .find(|(s, _)| *s == section)
                .ok_or_else(|| anyhow!("unknown section [{section}]"))?
                .1;
            for (k, _) in props.iter() {
                if !allowed.contains(&k) {
                    bail!("unknown key '{k}' in [{section}]");
                }
            }
        }
        let mut c = ExperimentConfig::default();
        if let Some(d) = ini.get_from(Some("output"), "dir") {
            c.output_dir = Some(PathBuf::from(d.trim()));
        }
        let p = &mut c.params;
        set!(&ini, "params", p, a);
        set!(&ini, "params", p, b);
        set!(&ini, "params", p, alpha);
        set!(&ini, "params", p, eta);
        set!(&ini, "params", p, gamma);

        let s = &mut c.spectrum;
        set!(&ini, "spectrum", s, n_lo);
        set!(&ini, "spectrum", s, n_hi);
        set!(&ini, "spectrum", s, n0);
        set!(&ini, "spectrum", s, tol);
        set!(&ini, "spectrum", s, max_iter);
        set!(&ini, "spectrum", s, k_max);
        if let Some(b) = parse_list(&ini, "spectrum", "branches")? {
            s.branches = b;
        }

        let m = &mut c.simulate;
        set!(&ini, "simulate", m, n_cells);
        set_opt!(&ini, "simulate", m, dt);
        set!(&ini, "simulate", m, t_final);
        set!(&ini, "simulate", m, xi_tol);
        set!(&ini, "simulate", m, initial);
        set!(&ini, "simulate", m, seed);
        set!(&ini, "simulate", m, modes);
        set!(&ini, "simulate", m, k1);
        set!(&ini, "simulate", m, k2);
        set_opt!(&ini, "simulate", m, samples);
        set_opt!(&ini, "simulate", m, fit_lo);
        set_opt!(&ini, "simulate", m, fit_hi);
        set!(&ini, "simulate", m, plot_points);

        let v = &mut c.verify;
        set!(&ini, "verify", v, kappa_scale);
        set!(&ini, "verify", v, n_cells);
        set!(&ini, "verify", v, t_final);

        let w = &mut c.sweep;
        set!(&ini, "sweep", w, command);
        set!(&ini, "sweep", w, parameter);
        if let Some(vals) = parse_list(&ini, "sweep", "values")? {
            w.values = vals;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut c = Self::from_ini_str(&text)?;
        // relative sample paths are taken relative to the config file
        if let (Some(s), Some(dir)) = (&c.simulate.samples, path.parent()) {
            if s.is_relative() {
                c.simulate.samples = Some(dir.join(s));
            }
        }
        Ok(c)
    }

    /// Checks everything `command` will use before any computation starts.
    pub fn validate(&self, command: Command) -> Result<()> {
        match command {
            Command::Spectrum => {
                self.params.build(false)?;
                self.validate_spectrum()
            }
            Command::Simulate => {
                self.params.build(true)?;
                self.validate_simulate()
            }
            Command::Verify => {
                self.params.build(false)?;
                let v = &self.verify;
                if !(v.kappa_scale > 0.0 && v.kappa_scale.is_finite()) {
                    bail!("[verify] kappa_scale must be positive");
                }
                if v.n_cells < 16 || !(v.t_final > 0.0) {
                    bail!("[verify] needs n_cells >= 16 and t_final > 0");
                }
                Ok(())
            }
            Command::Sweep => {
                let w = &self.sweep;
                if w.command != Command::Spectrum && w.command != Command::Simulate {
                    bail!("[sweep] command must be spectrum or simulate");
                }
                if w.values.is_empty() {
                    bail!("[sweep] values is empty");
                }
                for &v in &w.values {
                    self.with_parameter(&w.parameter, v)?.validate(w.command)?;
                }
                Ok(())
            }
        }
    }

    fn validate_spectrum(&self) -> Result<()> {
        let s = &self.spectrum;
        if s.n0 < 1 || s.n_lo < s.n0 || s.n_hi < s.n_lo {
            bail!("[spectrum] need 1 <= n0 <= n_lo <= n_hi (got n0={}, n_lo={}, n_hi={})", s.n0, s.n_lo, s.n_hi);
        }
        if s.branches.is_empty() || s.branches.iter().any(|b| *b != 1 && *b != 2) {
            bail!("[spectrum] branches must list 1 and/or 2");
        }
        if !(s.tol > 0.0 && s.tol <= 1e-2) {
            bail!("[spectrum] tol must lie in (0, 1e-2], got {}", s.tol);
        }
        if s.max_iter == 0 || s.k_max < 1 {
            bail!("[spectrum] max_iter and k_max must be positive");
        }
        Ok(())
    }

    fn validate_simulate(&self) -> Result<()> {
        let m = &self.simulate;
        if m.n_cells < 16 {
            bail!("[simulate] n_cells must be at least 16, got {}", m.n_cells);
        }
        if let Some(dt) = m.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                bail!("[simulate] dt must be positive, got {dt}");
            }
        }
        if !(m.t_final > 0.0 && m.t_final.is_finite()) {
            bail!("[simulate] t_final must be positive, got {}", m.t_final);
        }
        if !(m.xi_tol > 1e-12 && m.xi_tol < 1e-2) {
            bail!("[simulate] xi_tol must lie in (1e-12, 1e-2), got {}", m.xi_tol);
        }
        if m.plot_points < 2 {
            bail!("[simulate] plot_points must be at least 2");
        }
        m.initial_data()?;
        Ok(())
    }

    /// Copy with one physical parameter replaced.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self> {
        let mut c = self.clone();
        let p = &mut c.params;
        match name {
            "a" => p.a = value,
            "b" => p.b = value,
            "alpha" => p.alpha = value,
            "eta" => p.eta = value,
            "gamma" => p.gamma = value,
            _ => bail!("[sweep] parameter must be one of a, b, alpha, eta, gamma (got '{name}')"),
        }
        Ok(c)
    }

    /// Output directory: `--out`, then `FRACWAVE_OUT`, then `[output] dir`.
    pub fn resolve_out_dir(&self, cli: Option<&Path>, env: Option<&str>) -> PathBuf {
        if let Some(p) = cli {
            return p.to_path_buf();
        }
        if let Some(e) = env.filter(|e| !e.is_empty()) {
            return PathBuf::from(e);
        }
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    /// Full config as JSON, echoed into every output file.
    pub fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config is plain data")
    }

    /// The echo as `section.key = value` lines for CSV headers.
    pub fn echo_lines(&self) -> String {
        let mut out = String::new();
        if let serde_json::Value::Object(sections) = self.echo() {
            for (sec, v) in sections {
                match v {
                    serde_json::Value::Object(keys) => {
                        for (k, val) in keys {
                            out.push_str(&format!("{sec}.{k} = {val}\n"));
                        }
                    }
                    other => out.push_str(&format!("{sec} = {other}\n")),
                }
            }
        }
        out
    }
}
