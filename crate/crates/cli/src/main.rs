//! `gbesov`: evaluate expansions, norms and operators, and run the
//! inequality checks from a JSON config.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gbesov::besov::{besov_norm_parts, default_k};
use gbesov::defaults::default_inner_rule;
use gbesov::exponents::{luxemburg_norm, modular};
use gbesov::hermite::HermiteExpansion;
use gbesov::operators::{
    bessel_derivative_grid, bessel_derivative_integral, bessel_derivative_spectral,
    bessel_potential_grid, bessel_potential_integral, bessel_potential_spectral,
};
use gbesov::semigroups::{ou_apply_spectral, poisson_apply_spectral};
use gbesov::verify::{
    check_theorem_dbeta, check_theorem_jbeta, check_theorem_jbeta_infty, reports_to_csv,
    run_default_suite, to_json_17, Harness, SuiteConfig, VerificationReport,
};
use gbesov::{defaults, BesovParams, DiscretizedFunction, Error};
use serde_json::{json, Value};

use config::{ConfigError, Method, OperatorSpec, RunConfig, TheoremSpec};

#[derive(Parser)]
#[command(
    name = "gbesov",
    version,
    about = "Variable Gaussian Besov-Lipschitz toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Print the config fields and exit.
    #[arg(long, global = true)]
    print_schema: bool,
}

#[derive(clap::Args, Clone)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    refine: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expansion, optionally after an operator, on a point grid.
    Eval(Common),
    /// Lebesgue (and, with a `besov` section, Besov) norm of an expansion.
    Norm(Common),
    /// Besov seminorm with its time trace.
    Besov(Common),
    /// Apply an operator and list the output coefficients.
    Op(Common),
    /// Run the inequality checks.
    Verify(Common),
}

enum Failure {
    Config(String),
    Numerical(String),
    Checks,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::DimensionMismatch { .. } => {
                Failure::Config(e.to_string())
            }
            other => Failure::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numerical(format!("i/o: {e}"))
    }
}

struct Run {
    cfg: RunConfig,
    out: PathBuf,
    seed: u64,
    refine: usize,
    command: &'static str,
}

impl Run {
    fn new(common: &Common, command: &'static str) -> Result<Self, Failure> {
        let cfg = config::load(&common.config)?;
        let d = defaults();
        let seed = common.seed.or(cfg.seed).unwrap_or(d.seed);
        let refine = common.refine.or(cfg.refine).unwrap_or(1);
        if refine == 0 {
            return Err(Failure::Config("refine must be at least 1".into()));
        }
        let out = common
            .out
            .clone()
            .or(cfg.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&out)?;
        Ok(Run {
            cfg,
            out,
            seed,
            refine,
            command,
        })
    }

    fn header(&self) -> Value {
        json!({
            "command": self.command,
            "defaults": defaults(),
            "seed": self.seed,
            "refine": self.refine,
            "config": self.cfg,
        })
    }

    fn write(&self, name: &str, text: &str) -> Result<PathBuf, Failure> {
        let path = self.out.join(name);
        std::fs::write(&path, text)?;
        Ok(path)
    }

    fn write_json(&self, name: &str, body: Value) -> Result<PathBuf, Failure> {
        let doc = json!({ "header": self.header(), "result": body });
        self.write(name, &to_json_17(&doc)?)
    }

    fn rule(&self) -> gbesov::Result<gbesov::QuadratureRule> {
        match self.cfg.gauss_points {
            Some(n) => gbesov::hermite::gauss_rule(self.cfg.dimension, n),
            None => default_inner_rule(self.cfg.dimension),
        }
    }

    fn grid(&self) -> gbesov::Result<gbesov::TimeGrid> {
        let grid = self.cfg.time_grid.unwrap_or(defaults().time_grid);
        grid.validate()?;
        Ok(grid.refine(self.refine))
    }

    fn besov_params(&self) -> Result<Option<BesovParams>, Failure> {
        let Some(spec) = &self.cfg.besov else {
            return Ok(None);
        };
        let mut params = BesovParams::new(spec.alpha, self.cfg.p(), self.cfg.q(), self.rule()?)?
            .with_grid(self.grid()?)?;
        if let Some(k) = spec.k {
            params = params.with_k(k)?;
        }
        Ok(Some(params))
    }
}

fn apply_operator(
    f: &HermiteExpansion,
    op: &OperatorSpec,
) -> gbesov::Result<(HermiteExpansion, Option<f64>)> {
    Ok(match *op {
        OperatorSpec::Ou { t } => (ou_apply_spectral(f, t)?, None),
        OperatorSpec::Poisson { t } => (poisson_apply_spectral(f, t)?, None),
        OperatorSpec::BesselPotential { beta, method } => {
            let spectral = bessel_potential_spectral(f, beta)?;
            match method {
                Method::Spectral => (spectral, None),
                Method::Integral => {
                    let g = bessel_potential_integral(f, beta, &bessel_potential_grid(beta)?)?;
                    let dev = g.max_abs_diff(&spectral);
                    (g, Some(dev))
                }
            }
        }
        OperatorSpec::BesselDerivative { beta, method } => {
            let spectral = bessel_derivative_spectral(f, beta)?;
            match method {
                Method::Spectral => (spectral, None),
                Method::Integral => {
                    let grid = bessel_derivative_grid(beta, f.max_order())?;
                    let g = bessel_derivative_integral(f, beta, &grid)?;
                    let dev = g.max_abs_diff(&spectral);
                    (g, Some(dev))
                }
            }
        }
    })
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn cmd_eval(run: &Run) -> Result<(), Failure> {
    let f = run.cfg.expansion(run.seed)?;
    let f = match &run.cfg.operator {
        Some(op) => apply_operator(&f, op)?.0,
        None => f,
    };
    let grid = run
        .cfg
        .points
        .ok_or_else(|| Failure::Config("eval needs a `points` section".into()))?;
    if grid.count == 0 || !(grid.upper >= grid.lower) {
        return Err(Failure::Config(
            "points needs count ≥ 1 and upper ≥ lower".into(),
        ));
    }
    let d = run.cfg.dimension;
    let mut csv = String::new();
    let names: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    let _ = writeln!(csv, "{},value", names.join(","));
    for x in grid.tensor(d) {
        let v = f.eval(&x)?;
        let cols: Vec<String> = x.iter().map(|v| fmt17(*v)).collect();
        let _ = writeln!(csv, "{},{}", cols.join(","), fmt17(v));
    }
    let path = run.write("eval.csv", &csv)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_norm(run: &Run) -> Result<(), Failure> {
    let f = run.cfg.expansion(run.seed)?;
    let p = run.cfg.p();
    let rule = run.rule()?;
    let sampled = DiscretizedFunction::on_rule(&rule, f.sample(&rule)?)?;
    let norm = luxemburg_norm(&sampled, &p)?;
    let modular_at_norm = if norm > 0.0 {
        let scaled = sampled.with_values(sampled.values().iter().map(|v| v / norm).collect())?;
        modular(&scaled, &p)?
    } else {
        0.0
    };
    let mut body = json!({ "norm": norm, "modular_at_norm": modular_at_norm });
    if let Some(params) = run.besov_params()? {
        let parts = besov_norm_parts(&f, &params)?;
        body["besov"] = json!({
            "alpha": params.alpha,
            "k": params.k,
            "lebesgue": parts.lebesgue,
            "seminorm": parts.seminorm.value,
            "norm": parts.total(),
            "in_space": parts.seminorm.in_space,
        });
    }
    let path = run.write_json("norm.json", body)?;
    println!("norm = {norm:.12e}; wrote {}", path.display());
    Ok(())
}

fn cmd_besov(run: &Run) -> Result<(), Failure> {
    let f = run.cfg.expansion(run.seed)?;
    let params = run
        .besov_params()?
        .ok_or_else(|| Failure::Config("besov needs a `besov` section".into()))?;
    let parts = besov_norm_parts(&f, &params)?;
    let s = &parts.seminorm;
    let body = json!({
        "alpha": params.alpha,
        "k": params.k,
        "minimal_k": default_k(params.alpha),
        "seminorm": s.value,
        "residual": s.residual,
        "in_space": s.in_space,
        "t_star": s.t_star,
        "boundary": s.boundary,
        "lebesgue": parts.lebesgue,
        "norm": parts.total(),
    });
    run.write("besov_trace.csv", &s.to_csv())?;
    let path = run.write_json("besov.json", body)?;
    println!(
        "seminorm = {:.12e}, in_space = {}; wrote {}",
        s.value,
        s.in_space,
        path.display()
    );
    Ok(())
}

fn cmd_op(run: &Run) -> Result<(), Failure> {
    let f = run.cfg.expansion(run.seed)?;
    let op = run
        .cfg
        .operator
        .as_ref()
        .ok_or_else(|| Failure::Config("op needs an `operator` section".into()))?;
    let (g, deviation) = apply_operator(&f, op)?;
    let body = json!({ "output": g, "spectral_deviation": deviation });
    let path = run.write_json("op.json", body)?;
    println!("{} output terms; wrote {}", g.len(), path.display());
    Ok(())
}

fn theorem_precondition(t: &TheoremSpec) -> Result<(), Failure> {
    let (alpha, beta) = match *t {
        TheoremSpec::JbetaInfty { alpha, beta } | TheoremSpec::Jbeta { alpha, beta } => {
            if alpha >= 0.0 && beta > 0.0 {
                return Ok(());
            }
            (alpha, beta)
        }
        TheoremSpec::Dbeta { alpha, beta } => {
            if beta > 0.0 && beta < alpha {
                return Ok(());
            }
            (alpha, beta)
        }
    };
    Err(Failure::Config(format!(
        "precondition failed for {t:?}: α = {alpha}, β = {beta}"
    )))
}

fn cmd_verify(run: &Run) -> Result<(), Failure> {
    let spec = run.cfg.verify.clone().unwrap_or_default();
    for t in &spec.theorems {
        theorem_precondition(t)?;
    }
    let d = defaults();
    let slack = spec.slack.unwrap_or(d.stability_slack);
    let mut reports: Vec<VerificationReport> = Vec::new();
    if spec.default_suite {
        reports = run_default_suite(&SuiteConfig {
            dimension: run.cfg.dimension,
            seed: run.seed,
            refine: run.refine,
            slack,
            only: spec.only.clone(),
        })?;
    }
    if !spec.theorems.is_empty() {
        let mut h = Harness::default_for(run.cfg.dimension, run.seed)?.refined(run.refine);
        h.slack = slack;
        let (p, q) = (run.cfg.p(), run.cfg.q());
        for t in &spec.theorems {
            let mut r = match *t {
                TheoremSpec::JbetaInfty { alpha, beta } => {
                    check_theorem_jbeta_infty(&h, alpha, beta, &p)?
                }
                TheoremSpec::Jbeta { alpha, beta } => check_theorem_jbeta(&h, alpha, beta, &p, &q)?,
                TheoremSpec::Dbeta { alpha, beta } => check_theorem_dbeta(&h, alpha, beta, &p, &q)?,
            };
            r.check = format!("{}.config{}", r.check, reports.len());
            reports.push(r);
        }
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let body = serde_json::to_value(&reports).map_err(|e| Failure::Numerical(e.to_string()))?;
    let path = run.write_json("verify.json", body)?;
    run.write("verify.csv", &reports_to_csv(&reports))?;
    for r in &reports {
        println!(
            "{} {} measured={:.6e} bound {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.check,
            r.measured,
            r.bound
        );
    }
    println!(
        "{} checks, {failed} failed; wrote {}",
        reports.len(),
        path.display()
    );
    if failed > 0 {
        return Err(Failure::Checks);
    }
    Ok(())
}

fn dispatch(command: &Command) -> Result<(), Failure> {
    match command {
        Command::Eval(c) => cmd_eval(&Run::new(c, "eval")?),
        Command::Norm(c) => cmd_norm(&Run::new(c, "norm")?),
        Command::Besov(c) => cmd_besov(&Run::new(c, "besov")?),
        Command::Op(c) => cmd_op(&Run::new(c, "op")?),
        Command::Verify(c) => cmd_verify(&Run::new(c, "verify")?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.print_schema {
        println!("{}", config::SCHEMA);
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (eval | norm | besov | op | verify)");
        return ExitCode::from(2);
    };
    match dispatch(&command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical error: {msg}");
            ExitCode::from(3)
        }
    }
}
