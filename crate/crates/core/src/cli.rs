//! Command-line interface. Exit codes: 0 success, 1 validation or usage
//! error, 2 when `certify` hits the iteration cap without converging.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::experiments::{
    fit_logistic, run_trial_detail, sample_truth, sweep, write_summary, write_sweep_files, Estimator,
    ExperimentConfig, PaletteKind, SigmaMode, SigmaSpec, SpaceChoice, Spacing,
};
use crate::matrices::{observe, ModelKind};
use crate::mle::{recovery_check, RecoveryMode};
use crate::model::Palette;
use crate::oracle::run_oracle_suite;
use crate::rng::{stream, trial_seed, Role};
use crate::sdp::{dual_certificate, round_solution, solve_sdp, SdpParams};
use crate::statistics::{threshold, write_threshold_csv, FormulaId};

#[derive(Debug, Parser)]
#[command(name = "kpartite", version, about = "Noisy k-partite community recovery experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the critical σ² of every applicable recovery threshold.
    Thresholds(ThresholdArgs),
    /// Run one trial and describe it.
    Simulate(SimulateArgs),
    /// Run a Monte Carlo sweep over a σ grid.
    Sweep(SweepArgs),
    /// Solve the SDP for a planted instance and check the dual certificate.
    Certify(CertifyArgs),
    /// Check the closed-form statistics against matrix definitions exhaustively.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Comma-separated real colors; defaults to 0,1,…,k−1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    colors: Option<Vec<f64>>,
    /// Comma-separated group sizes; defaults to the most balanced split.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Also write the table as CSV to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// Flags mirroring the experiment config keys; each overrides the file.
#[derive(Debug, Args)]
struct ConfigFlags {
    /// TOML experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// vector-t | partition-r | gue-u | conjugated-goe-v (short forms accepted).
    #[arg(long)]
    model: Option<ModelKind>,
    /// mle | sdp
    #[arg(long, value_parser = parse_estimator)]
    estimator: Option<Estimator>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory for CSV files.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    record_timing: bool,
    #[arg(long)]
    fit_logistic: bool,
    /// real | roots
    #[arg(long, value_parser = parse_palette_kind)]
    palette: Option<PaletteKind>,
    /// Comma-separated real colors.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    colors: Option<Vec<f64>>,
    /// Comma-separated planted group sizes.
    #[arg(long, value_delimiter = ',')]
    truth_sizes: Option<Vec<usize>>,
    /// omega | fixed-counts | min-fraction | theta-a
    #[arg(long, value_parser = parse_space)]
    estimator_space: Option<SpaceChoice>,
    #[arg(long)]
    min_fraction: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    no_warm_start: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    cfg: ConfigFlags,
    /// Absolute noise level.
    #[arg(long)]
    sigma: f64,
    /// Trial index; selects the truth and noise streams.
    #[arg(long, default_value_t = 0)]
    trial: u64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    cfg: ConfigFlags,
    /// relative | absolute
    #[arg(long, value_parser = parse_sigma_mode)]
    sigma_mode: Option<SigmaMode>,
    #[arg(long, value_delimiter = ',')]
    sigma_values: Option<Vec<f64>>,
    #[arg(long)]
    sigma_lo: Option<f64>,
    #[arg(long)]
    sigma_hi: Option<f64>,
    #[arg(long)]
    sigma_steps: Option<usize>,
    /// geometric | linear
    #[arg(long, value_parser = parse_spacing)]
    spacing: Option<Spacing>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// gue-u or conjugated-goe-v.
    #[arg(long, default_value = "conjugated-goe-v")]
    model: ModelKind,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    no_warm_start: bool,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    max_k: usize,
}

fn parse_with<T: serde::de::DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_estimator(s: &str) -> std::result::Result<Estimator, String> {
    parse_with(s)
}

fn parse_palette_kind(s: &str) -> std::result::Result<PaletteKind, String> {
    parse_with(s)
}

fn parse_space(s: &str) -> std::result::Result<SpaceChoice, String> {
    parse_with(s)
}

fn parse_sigma_mode(s: &str) -> std::result::Result<SigmaMode, String> {
    parse_with(s)
}

fn parse_spacing(s: &str) -> std::result::Result<Spacing, String> {
    parse_with(s)
}

/// Rounds to six decimals and trims trailing zeros.
pub fn format_number(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Thresholds(a) => thresholds(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Sweep(a) => run_sweep(a, out),
        Command::Certify(a) => certify(a, out),
        Command::Oracle(a) => oracle(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn thresholds(a: ThresholdArgs, out: &mut dyn Write) -> Result<i32> {
    let colors = a.colors.unwrap_or_else(|| (0..a.k).map(|c| c as f64).collect());
    if colors.len() != a.k {
        return Err(Error::Input(format!("--colors has {} values, k={}", colors.len(), a.k)));
    }
    let real = Palette::real(colors)?;
    let roots = Palette::roots(a.k)?;
    let reports = vec![
        threshold(FormulaId::Thm1, a.n, &real, None)?,
        threshold(FormulaId::Thm2, a.n, &real, a.sizes.as_deref())?,
        threshold(FormulaId::Thm3, a.n, &roots, None)?,
        threshold(FormulaId::Thm5Bound, a.n, &roots, None)?,
    ];
    for r in &reports {
        writeln!(
            out,
            "{} n={} k={} sigma_sq_critical={} sigma_critical={} params={}",
            r.formula_id,
            r.n,
            r.k,
            format_number(r.sigma_sq_critical),
            format_number(r.sigma_sq_critical.sqrt()),
            r.param_json
        )
        .map_err(io)?;
    }
    if let Some(path) = a.csv {
        write_threshold_csv(&reports, std::fs::File::create(path)?)?;
    }
    Ok(0)
}

/// File, then environment, then flags.
fn build_config(flags: &ConfigFlags, sigma: Option<SigmaSpec>) -> Result<ExperimentConfig> {
    let mut cfg = match &flags.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => {
            let (Some(model), Some(n), Some(k)) = (flags.model, flags.n, flags.k) else {
                return Err(Error::Input("give --config or all of --model, --n and --k".into()));
            };
            ExperimentConfig {
                model,
                estimator: Estimator::Mle,
                n,
                k,
                seed: 0,
                trials: 100,
                threads: 0,
                output: None,
                record_timing: false,
                fit_logistic: false,
                palette: Default::default(),
                space: Default::default(),
                sigma: SigmaSpec::default(),
                solver: SdpParams::default(),
            }
        }
    };
    cfg.apply_env()?;
    if let Some(v) = flags.model {
        cfg.model = v;
    }
    if let Some(v) = flags.estimator {
        cfg.estimator = v;
    }
    if let Some(v) = flags.n {
        cfg.n = v;
    }
    if let Some(v) = flags.k {
        cfg.k = v;
    }
    if let Some(v) = flags.seed {
        cfg.seed = v;
    }
    if let Some(v) = flags.trials {
        cfg.trials = v;
    }
    if let Some(v) = flags.threads {
        cfg.threads = v;
    }
    if let Some(v) = &flags.output {
        cfg.output = Some(v.clone());
    }
    cfg.record_timing |= flags.record_timing;
    cfg.fit_logistic |= flags.fit_logistic;
    if let Some(v) = flags.palette {
        cfg.palette.kind = Some(v);
    }
    if let Some(v) = &flags.colors {
        cfg.palette.values = Some(v.clone());
    }
    if let Some(v) = &flags.truth_sizes {
        cfg.space.truth_sizes = Some(v.clone());
    }
    if let Some(v) = flags.estimator_space {
        cfg.space.estimator_space = Some(v);
    }
    if let Some(v) = flags.min_fraction {
        cfg.space.min_fraction = Some(v);
    }
    if let Some(v) = flags.max_iters {
        cfg.solver.max_iters = v;
    }
    if let Some(v) = flags.rho {
        cfg.solver.rho = Some(v);
    }
    if flags.no_warm_start {
        cfg.solver.warm_start = false;
    }
    if let Some(s) = sigma {
        cfg.sigma = s;
    }
    Ok(cfg)
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let sigma = SigmaSpec { mode: SigmaMode::Absolute, values: Some(vec![a.sigma]), ..Default::default() };
    let cfg = build_config(&a.cfg, Some(sigma))?;
    let plan = cfg.plan()?;
    let d = run_trial_detail(&plan, a.sigma, a.trial)?;
    writeln!(out, "recovered={}", d.record.recovered).map_err(io)?;
    writeln!(
        out,
        "model={} estimator={} n={} k={} sigma={} trial={} seed={}",
        cfg.model,
        match cfg.estimator {
            Estimator::Mle => "mle",
            Estimator::Sdp => "sdp",
        },
        cfg.n,
        cfg.k,
        format_number(a.sigma),
        a.trial,
        d.record.seed
    )
    .map_err(io)?;
    writeln!(out, "truth    {}", d.truth).map_err(io)?;
    writeln!(out, "estimate {}", d.estimate).map_err(io)?;
    writeln!(out, "margin={}", format_number(d.record.margin)).map_err(io)?;
    if let (Some(c), Some(conv)) = (d.certified, d.converged) {
        writeln!(out, "certified={c} sdp_converged={conv}").map_err(io)?;
    }
    let t = &plan.threshold;
    writeln!(
        out,
        "threshold {} sigma_sq_critical={} sigma_sq_ratio={}",
        t.formula_id,
        format_number(t.sigma_sq_critical),
        format_number(a.sigma * a.sigma / t.sigma_sq_critical)
    )
    .map_err(io)?;
    Ok(0)
}

fn run_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let grid_given = a.sigma_values.is_some() || a.sigma_lo.is_some() || a.sigma_hi.is_some() || a.sigma_steps.is_some();
    let mut cfg = build_config(&a.cfg, None)?;
    if grid_given {
        cfg.sigma.values = a.sigma_values;
        cfg.sigma.lo = a.sigma_lo;
        cfg.sigma.hi = a.sigma_hi;
        cfg.sigma.steps = a.sigma_steps;
    }
    if let Some(m) = a.sigma_mode {
        cfg.sigma.mode = m;
    }
    if let Some(s) = a.spacing {
        cfg.sigma.spacing = s;
    }
    let outcome = sweep(&cfg)?;
    let t = &outcome.plan.threshold;
    writeln!(out, "# threshold {} sigma_sq_critical={}", t.formula_id, format_number(t.sigma_sq_critical))
        .map_err(io)?;
    write_summary(&outcome.summary, &mut *out)?;
    if let Some(dir) = &cfg.output {
        let (trials, summary) = write_sweep_files(dir, &outcome.records, &outcome.summary)?;
        writeln!(out, "# wrote {} and {}", trials.display(), summary.display()).map_err(io)?;
    }
    if cfg.fit_logistic {
        match fit_logistic(&outcome.records) {
            Some(f) => writeln!(
                out,
                "# logistic sigma_half={} sigma_sq_half_ratio={}",
                format_number(f.sigma_half),
                format_number(f.sigma_half * f.sigma_half / t.sigma_sq_critical)
            ),
            None => writeln!(out, "# logistic fit unavailable: outcomes do not bracket a transition"),
        }
        .map_err(io)?;
    }
    Ok(0)
}

fn certify(a: CertifyArgs, out: &mut dyn Write) -> Result<i32> {
    if !a.model.is_hermitian() {
        return Err(Error::Input("certify needs gue-u or conjugated-goe-v".into()));
    }
    if !(a.sigma >= 0.0) {
        return Err(Error::Input("sigma must be ≥ 0".into()));
    }
    let cfg = ExperimentConfig {
        model: a.model,
        estimator: Estimator::Sdp,
        n: a.n,
        k: a.k,
        seed: a.seed,
        trials: 1,
        threads: 1,
        output: None,
        record_timing: false,
        fit_logistic: false,
        palette: Default::default(),
        space: Default::default(),
        sigma: SigmaSpec { mode: SigmaMode::Absolute, values: Some(vec![a.sigma]), ..Default::default() },
        solver: SdpParams {
            max_iters: a.max_iters.unwrap_or(SdpParams::default().max_iters),
            rho: a.rho,
            warm_start: !a.no_warm_start,
            ..SdpParams::default()
        },
    };
    let plan = cfg.plan()?;
    let seed = trial_seed(a.seed, 0);
    let truth = sample_truth(&plan, seed)?;
    let obs = observe(&truth, a.model, a.sigma, &mut stream(seed, Role::Noise))?;
    let v = obs.hermitian().expect("hermitian model");
    let cert = dual_certificate(v, &truth)?;
    let sol = solve_sdp(v, &cfg.solver)?;
    let estimate = round_solution(&sol.x, a.k)?;
    let recovered = recovery_check(&estimate, &truth, RecoveryMode::Phase)?;
    let planted = crate::matrices::build_p(&truth)?;
    let dist = sol.x.sub(&planted).frobenius_norm() / a.n as f64;
    writeln!(
        out,
        "certified={} lambda2={} lambda_min={} null_residual={}",
        cert.certified,
        format_number(cert.lambda_second),
        format_number(cert.lambda_min),
        format_number(cert.null_vector_residual)
    )
    .map_err(io)?;
    writeln!(
        out,
        "sdp_converged={} iterations={} primal_residual={:e} constraint_residual={:e} objective={} rounded_recovered={} dist_to_planted_per_n={:e}",
        sol.converged,
        sol.iterations,
        sol.primal_residual,
        sol.constraint_residual,
        format_number(sol.objective),
        recovered,
        dist
    )
    .map_err(io)?;
    Ok(if sol.converged { 0 } else { 2 })
}

fn oracle(a: OracleArgs, out: &mut dyn Write) -> Result<i32> {
    if a.max_k < 2 || a.max_n < a.max_k {
        return Err(Error::Input("need 2 ≤ max-k ≤ max-n".into()));
    }
    let checks = run_oracle_suite(a.max_n, a.max_k)?;
    let mut ok = true;
    for c in &checks {
        ok &= c.passed();
        writeln!(
            out,
            "{} {} (pairs={}, failures={}, worst={:e})",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.cases,
            c.failures,
            c.worst
        )
        .map_err(io)?;
    }
    Ok(if ok { 0 } else { 1 })
}
