//! `baslg`: evaluate, sample, fit and compare bimodal alpha-skew-logistic models.
//!
//! Exit status: 0 on success, 1 on domain or runtime errors, 2 on usage errors.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use baslg::data::{read_values, ColumnSpec};
use baslg::fit::{compare_models, fit_mle, lr_test, FitResult, OptimizerConfig};
use baslg::models::{family_pdf, Family, LocScaleModel};
use baslg::sampler::{SamplerConfig, SamplingMethod};
use baslg::StandardBaslg;

const FIT_FORMAT: &str = "baslg-fit-report/1";
const LR_FORMAT: &str = "baslg-lrtest/1";

#[derive(Parser)]
#[command(name = "baslg", version, about = "Bimodal alpha-skew-logistic distribution toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Density and cdf at given points.
    Eval(EvalArgs),
    /// Draw random variates, one per line.
    Sample(SampleArgs),
    /// Maximum-likelihood fit of one family.
    Fit(FitArgs),
    /// Fit several families and rank them by AIC.
    Compare(CompareArgs),
    /// Likelihood-ratio test of LG against BASLG2.
    Lrtest(LrArgs),
    /// Tab-separated data for density plots.
    Plotdata(PlotArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    beta: f64,
}

#[derive(Args, Clone)]
struct OutArg {
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Interval `lo:hi`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    range: Option<(f64, f64)>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
    points: u64,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("where").required(true).args(["at", "range"])))]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated evaluation points.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    at: Vec<f64>,
    #[command(flatten)]
    grid: GridArgs,
    /// Also print the symmetric component's pdf and cdf.
    #[arg(long)]
    symmetric: bool,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Inverse,
    Rejection,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Inverse)]
    method: MethodArg,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Clone)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    /// 1-based column of a delimited file.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    column: Option<u64>,
    /// Column delimiter (default: whitespace).
    #[arg(long)]
    delimiter: Option<char>,
}

#[derive(Args, Clone)]
struct OptimArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(100..))]
    max_evals: u64,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long, value_parser = parse_family)]
    dist: Family,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    optim: OptimArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_family, default_value = "n,lg,la,sn,aslg,baslg2")]
    dists: Vec<Family>,
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    optim: OptimArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct LrArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    optim: OptimArgs,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["curves", "overlay"])))]
struct PlotArgs {
    /// Density curves for each alpha in `--alphas`.
    #[arg(long, requires = "alphas")]
    curves: bool,
    /// Histogram of `--data` with fitted densities of `--dists`.
    #[arg(long, requires = "data")]
    overlay: bool,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alphas: Vec<f64>,
    /// Emit cdf instead of pdf curves.
    #[arg(long)]
    cdf: bool,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    column: Option<u64>,
    #[arg(long)]
    delimiter: Option<char>,
    #[arg(long, value_delimiter = ',', value_parser = parse_family, default_value = "lg,baslg2")]
    dists: Vec<Family>,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    bins: u64,
    #[command(flatten)]
    optim: OptimArgs,
    #[command(flatten)]
    out: OutArg,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad lower bound '{a}'"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad upper bound '{b}'"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("need finite lo < hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn grid(lo: f64, hi: f64, points: u64) -> Vec<f64> {
    let n = points as usize;
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn emit(out: &OutArg, text: &str) -> Result<()> {
    match &out.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn load(path: &Path, column: Option<u64>, delimiter: Option<char>) -> Result<Vec<f64>> {
    let spec = ColumnSpec { column: column.map(|c| c as usize), delimiter };
    read_values(path, &spec).with_context(|| format!("reading {}", path.display()))
}

fn optimizer(o: &OptimArgs) -> OptimizerConfig {
    OptimizerConfig {
        restarts: o.restarts as usize,
        max_evals_per_restart: o.max_evals as usize,
        seed: o.seed,
        ..Default::default()
    }
}

fn params_text(r: &FitResult) -> String {
    r.param_names.iter().zip(&r.params).map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(";")
}

fn fit_report(r: &FitResult) -> String {
    let mut s = String::new();
    writeln!(s, "format={FIT_FORMAT}").unwrap();
    writeln!(s, "family={}", r.family.id()).unwrap();
    writeln!(s, "n_obs={}", r.n_obs).unwrap();
    for (n, v) in r.param_names.iter().zip(&r.params) {
        writeln!(s, "param.{n}={v}").unwrap();
    }
    writeln!(s, "log_l={}", r.log_l).unwrap();
    writeln!(s, "aic={}", r.aic).unwrap();
    writeln!(s, "bic={}", r.bic).unwrap();
    writeln!(s, "converged={}", r.converged).unwrap();
    writeln!(s, "restarts_used={}", r.restarts_used).unwrap();
    s
}

fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let m = LocScaleModel::new(a.model.alpha, a.model.mu, a.model.beta)?;
    let sym = m.standard().symmetric_component();
    let points = match a.grid.range {
        Some((lo, hi)) => grid(lo, hi, a.grid.points),
        None => a.at.clone(),
    };
    let mut s = String::new();
    for y in points {
        write!(s, "{y}\t{}\t{}", m.pdf(y), m.cdf(y))?;
        if a.symmetric {
            let z = (y - m.mu()) / m.beta();
            write!(s, "\t{}\t{}", sym.pdf(z) / m.beta(), sym.cdf(z))?;
        }
        s.push('\n');
    }
    emit(&a.out, &s)
}

fn cmd_sample(a: &SampleArgs) -> Result<()> {
    let m = LocScaleModel::new(a.model.alpha, a.model.mu, a.model.beta)?;
    let method = match a.method {
        MethodArg::Inverse => SamplingMethod::InverseCdf,
        MethodArg::Rejection => SamplingMethod::Rejection,
    };
    let draws = m.sample(a.n as usize, SamplerConfig { method, seed: a.seed, ..Default::default() })?;
    let mut s = String::with_capacity(draws.len() * 20);
    for v in draws {
        writeln!(s, "{v}")?;
    }
    emit(&a.out, &s)
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let data = load(&a.data.data, a.data.column, a.data.delimiter)?;
    let r = fit_mle(a.dist, &data, &optimizer(&a.optim))?;
    emit(&a.out, &fit_report(&r))?;
    if !r.converged {
        bail!("fit did not converge: the two best restarts disagree by more than 1e-4 in log-likelihood");
    }
    Ok(())
}

fn cmd_compare(a: &CompareArgs) -> Result<()> {
    let data = load(&a.data.data, a.data.column, a.data.delimiter)?;
    let rows = compare_models(&data, &a.dists, &optimizer(&a.optim));
    let mut s = String::from("rank\tfamily\tk\tlog_l\taic\tbic\tconverged\tparams\terror\n");
    let mut ok = 0;
    for (i, row) in rows.iter().enumerate() {
        match &row.result {
            Ok(r) => {
                ok += 1;
                writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t",
                    i + 1,
                    row.family.id(),
                    r.k(),
                    r.log_l,
                    r.aic,
                    r.bic,
                    r.converged,
                    params_text(r)
                )?;
            }
            Err(e) => writeln!(s, "{}\t{}\t{}\tNA\tNA\tNA\tfalse\t\t{e}", i + 1, row.family.id(), row.family.n_params())?,
        }
    }
    emit(&a.out, &s)?;
    if ok == 0 {
        bail!("every family failed to fit");
    }
    Ok(())
}

fn cmd_lrtest(a: &LrArgs) -> Result<()> {
    let data = load(&a.data.data, a.data.column, a.data.delimiter)?;
    let r = lr_test(&data, &optimizer(&a.optim))?;
    let mut s = String::new();
    writeln!(s, "format={LR_FORMAT}")?;
    writeln!(s, "n_obs={}", data.len())?;
    writeln!(s, "log_l_null={}", r.null_fit.log_l)?;
    writeln!(s, "log_l_full={}", r.full_fit.log_l)?;
    writeln!(s, "statistic={}", r.statistic)?;
    writeln!(s, "df={}", r.df)?;
    writeln!(s, "critical_value={}", r.critical_value)?;
    writeln!(s, "reject_null={}", r.reject_null)?;
    let decision = if r.reject_null {
        "reject H0 (alpha = 0): the data favour BASLG2 over LG at the 1% level"
    } else {
        "do not reject H0 (alpha = 0): LG is adequate at the 1% level"
    };
    writeln!(s, "decision={decision}")?;
    writeln!(s, "null_params={}", params_text(&r.null_fit))?;
    writeln!(s, "full_params={}", params_text(&r.full_fit))?;
    emit(&a.out, &s)
}

fn cmd_plotdata(a: &PlotArgs) -> Result<()> {
    let mut s = String::new();
    if a.curves {
        let (lo, hi) = a.grid.range.unwrap_or((-15.0, 15.0));
        let dists = a.alphas.iter().map(|&al| StandardBaslg::new(al)).collect::<baslg::Result<Vec<_>>>()?;
        s.push('z');
        for al in &a.alphas {
            write!(s, "\talpha={al}")?;
        }
        s.push('\n');
        for z in grid(lo, hi, a.grid.points) {
            write!(s, "{z}")?;
            for d in &dists {
                let v = if a.cdf { d.cdf(z) } else { d.pdf(z) };
                write!(s, "\t{v}")?;
            }
            s.push('\n');
        }
        return emit(&a.out, &s);
    }
    let path = a.data.as_ref().expect("clap enforces --data with --overlay");
    let data = load(path, a.column, a.delimiter)?;
    let cfg = optimizer(&a.optim);
    let fits = a.dists.iter().map(|&f| fit_mle(f, &data, &cfg)).collect::<baslg::Result<Vec<_>>>()?;
    let (min, max) = data.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(x, y), &v| (x.min(v), y.max(v)));
    if !(max > min) {
        bail!("cannot bin data with zero range");
    }
    let bins = a.bins as usize;
    let width = (max - min) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in &data {
        let i = (((v - min) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    s.push_str("lo\thi\tmid\tdensity");
    for f in &fits {
        write!(s, "\t{}", f.family.id())?;
    }
    s.push('\n');
    let n = data.len() as f64;
    for (i, c) in counts.iter().enumerate() {
        let lo = min + i as f64 * width;
        let hi = if i + 1 == bins { max } else { lo + width };
        let mid = 0.5 * (lo + hi);
        write!(s, "{lo}\t{hi}\t{mid}\t{}", *c as f64 / (n * width))?;
        for f in &fits {
            write!(s, "\t{}", family_pdf(f.family, &f.params, mid)?)?;
        }
        s.push('\n');
    }
    emit(&a.out, &s)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval(a) => cmd_eval(&a),
        Command::Sample(a) => cmd_sample(&a),
        Command::Fit(a) => cmd_fit(&a),
        Command::Compare(a) => cmd_compare(&a),
        Command::Lrtest(a) => cmd_lrtest(&a),
        Command::Plotdata(a) => cmd_plotdata(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
