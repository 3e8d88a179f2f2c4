use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

use fracwave_core::decay::{fit_decay_exponent, predicted_exponent, spectral_vs_energy_report};
use fracwave_core::io::{fmt_f64, plot_table, trace_table, write_json, CsvTable};
use fracwave_core::simulator::run;
use fracwave_core::spectrum::{abscissa_scan, asymptotic_root, sc_check, BranchId};
use fracwave_core::verify::{run_verify, VerifyOptions};
use fracwave_core::Execution;

use crate::config::{Command, ExperimentConfig};

/// What a command produced. `success == false` maps to exit status 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub success: bool,
    pub message: String,
    pub files: Vec<PathBuf>,
}

/// γ = 0 runs must hold `E` to this relative drift per unit time.
pub const CONSERVATION_TOL: f64 = 1e-10;

struct Writer<'a> {
    dir: &'a Path,
    cfg: &'a ExperimentConfig,
    command: Command,
    files: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(dir: &'a Path, cfg: &'a ExperimentConfig, command: Command) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Writer { dir, cfg, command, files: Vec::new() })
    }

    fn echo(&self) -> Value {
        json!({ "command": self.command, "experiment": self.cfg.echo() })
    }

    fn csv(&mut self, name: &str, table: CsvTable) -> Result<()> {
        let cmd = serde_json::to_value(self.command)?;
        let header = format!("command = {}\n{}", cmd.as_str().unwrap_or_default(), self.cfg.echo_lines());
        let path = self.dir.join(name);
        table.with_comments(&header).write(&path).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, result: &T) -> Result<()> {
        let path = self.dir.join(name);
        write_json(&path, &self.echo(), result).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(path);
        Ok(())
    }

    fn finish(self, success: bool, message: String) -> Outcome {
        Outcome { success, message, files: self.files }
    }
}

pub fn execute(command: Command, cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    cfg.validate(command)?;
    match command {
        Command::Spectrum => cmd_spectrum(cfg, out),
        Command::Simulate => cmd_simulate(cfg, out),
        Command::Verify => cmd_verify(cfg, out),
        Command::Sweep => cmd_sweep(cfg, out),
    }
}

/// Roots, asymptotic comparison and abscissa fits for every configured branch.
pub fn cmd_spectrum(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    cfg.validate(Command::Spectrum)?;
    let p = cfg.params.build(false)?;
    let s = &cfg.spectrum;
    let mut w = Writer::new(out, cfg, Command::Spectrum)?;

    let sc = sc_check(&p, s.k_max)?;
    if sc.violated {
        let msg = format!(
            "strong stability violated: b = {} is the exceptional coupling of (k1, k2) = ({}, {}); iλ = i{:.12} is an eigenvalue",
            p.b(),
            sc.k1,
            sc.k2,
            sc.lambda_imag
        );
        w.json("sc_violation.json", &json!({ "message": msg, "witness": sc }))?;
        return Ok(w.finish(false, msg));
    }

    let opts = s.refine_options();
    let mut roots = CsvTable::new(&["branch", "n", "re", "im", "residual", "iterations", "converged"]);
    let mut asym = CsvTable::new(&["branch", "n", "re_asym", "im_asym", "abs_err", "scaled_err"]);
    let mut fits = Vec::new();
    for &branch in &s.branches {
        let scan = abscissa_scan(&p, branch, (s.n_lo, s.n_hi), s.n0, &opts, Execution::Parallel)
            .with_context(|| format!("branch {branch}"))?;
        for r in &scan.roots {
            let e = &r.estimate;
            roots.push(vec![
                branch.to_string(),
                r.n.to_string(),
                fmt_f64(e.lambda.re),
                fmt_f64(e.lambda.im),
                fmt_f64(e.residual),
                e.iterations.to_string(),
                u8::from(e.converged).to_string(),
            ]);
            let a = asymptotic_root(&BranchId::new(&p, branch, r.n)?, &p, s.n0)?;
            let err = (e.lambda - a).norm();
            let scaled = err * (r.n as f64).powf(1.0 - p.alpha());
            asym.push(vec![
                branch.to_string(),
                r.n.to_string(),
                fmt_f64(a.re),
                fmt_f64(a.im),
                fmt_f64(err),
                fmt_f64(scaled),
            ]);
        }
        let report = spectral_vs_energy_report(&p, &scan, None);
        fits.push(json!({
            "branch": branch,
            "n_range": scan.n_range,
            "exponent": scan.exponent(),
            "fit": scan.fit,
            "expected_exponent": report.expected_abscissa_exponent,
            "consistent": report.abscissa_consistent,
            "report": report,
        }));
    }
    w.csv("roots.csv", roots)?;
    w.csv("asymptotics.csv", asym)?;
    let prediction = predicted_exponent(&p);
    w.json("abscissa.json", &json!({ "prediction": prediction, "branches": fits }))?;
    let exps: Vec<String> = fits
        .iter()
        .map(|f| format!("branch {}: exponent {:.4}", f["branch"], f["exponent"].as_f64().unwrap_or(f64::NAN)))
        .collect();
    Ok(w.finish(true, exps.join(", ")))
}

/// Time-domain run: trace, plot data, and a decay fit or conservation report.
pub fn cmd_simulate(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    cfg.validate(Command::Simulate)?;
    let p = cfg.params.build(true)?;
    let sim = cfg.simulate.sim_config()?;
    let mut w = Writer::new(out, cfg, Command::Simulate)?;
    let trace = run(&p, &sim)?;
    w.csv("trace.csv", trace_table(&trace))?;
    w.csv("plot.csv", plot_table(&trace, cfg.simulate.plot_points))?;

    let e0 = trace.energy[0];
    let t_final = trace.times.last().copied().unwrap_or(0.0);
    if p.gamma() == 0.0 {
        let drift = trace.max_drift();
        let per_unit_time = if e0 > 0.0 { drift / e0 / t_final.max(1.0) } else { 0.0 };
        let conserved = per_unit_time <= CONSERVATION_TOL;
        w.json(
            "conservation.json",
            &json!({
                "initial_energy": e0,
                "final_energy": trace.final_energy(),
                "max_drift": drift,
                "relative_drift_per_unit_time": per_unit_time,
                "tolerance": CONSERVATION_TOL,
                "conserved": conserved,
            }),
        )?;
        let msg = format!("undamped run: relative drift {per_unit_time:.3e} per unit time");
        return Ok(w.finish(conserved, msg));
    }

    let window = (cfg.simulate.fit_lo.unwrap_or(t_final / 4.0), cfg.simulate.fit_hi.unwrap_or(t_final));
    let prediction = predicted_exponent(&p);
    let monotone = trace.is_nonincreasing(1e-12);
    let summary = json!({
        "initial_energy": e0,
        "final_energy": trace.final_energy(),
        "monotone": monotone,
        "max_balance_residual": trace.max_balance_residual(),
        "global_balance_defect": trace.global_balance_defect(),
    });
    let msg = match fit_decay_exponent(&trace, window) {
        Ok(fit) => {
            w.json("fit.json", &json!({ "fit": fit, "prediction": prediction, "trace": summary }))?;
            format!("fitted exponent {:.4} on [{}, {}] (r² {:.4})", fit.exponent, window.0, window.1, fit.r_squared)
        }
        Err(e) => {
            let refusal = e.to_string();
            w.json("fit.json", &json!({ "fit": null, "refused": refusal, "prediction": prediction, "trace": summary }))?;
            format!("fit refused: {refusal}")
        }
    };
    Ok(w.finish(monotone, msg))
}

pub fn cmd_verify(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    cfg.validate(Command::Verify)?;
    let p = cfg.params.build(false)?;
    let v = &cfg.verify;
    let opts = VerifyOptions { params: p, kappa_scale: v.kappa_scale, n_cells: v.n_cells, t_final: v.t_final };
    let report = run_verify(&opts);
    let mut w = Writer::new(out, cfg, Command::Verify)?;
    w.json("verify.json", &report)?;
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let msg = if failed.is_empty() {
        format!("{} checks passed", report.checks.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    Ok(w.finish(report.all_passed, msg))
}

/// Runs the sweep command once per value, each into its own subdirectory,
/// then writes `summary.json`.
pub fn cmd_sweep(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    cfg.validate(Command::Sweep)?;
    let sw = &cfg.sweep;
    let jobs: Vec<(usize, f64)> = sw.values.iter().copied().enumerate().collect();
    let results = Execution::Parallel.map(&jobs, |&(k, value)| {
        let dir = out.join(format!("{:03}_{}_{}", k, sw.parameter, value));
        let sub = cfg.with_parameter(&sw.parameter, value)?;
        let outcome = match sw.command {
            Command::Spectrum => cmd_spectrum(&sub, &dir),
            _ => cmd_simulate(&sub, &dir),
        };
        anyhow::Ok((value, dir, outcome))
    });
    let mut entries = Vec::new();
    let mut files = Vec::new();
    let mut ok = 0;
    for r in results {
        let (value, dir, outcome) = r?;
        let rel = dir.strip_prefix(out).unwrap_or(&dir).to_path_buf();
        match outcome {
            Ok(o) => {
                ok += usize::from(o.success);
                entries.push(json!({ "value": value, "dir": rel, "success": o.success, "message": o.message }));
                files.extend(o.files);
            }
            Err(e) => entries.push(json!({ "value": value, "dir": rel, "success": false, "error": format!("{e:#}") })),
        }
    }
    let mut w = Writer::new(out, cfg, Command::Sweep)?;
    w.files = files;
    w.json("summary.json", &json!({ "command": sw.command, "parameter": sw.parameter, "runs": entries }))?;
    let n = sw.values.len();
    Ok(w.finish(ok == n, format!("{ok}/{n} runs succeeded")))
}
