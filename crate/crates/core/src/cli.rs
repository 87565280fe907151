//! Command-line front end: data loading, fitting, evaluation, sampling,
//! risk, goodness of fit and plot-data export.
//!
//! Human output uses fixed four-decimal tables; `--format machine` emits
//! one JSON document whose numbers are shortest round-trip decimals.

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::ast::AstParams;
use crate::error::GatError;
use crate::fit::{fit_ladder, fit_mle, Family, FitOptions, FitResult, FittedParams, ModelSpec, Param};
use crate::gat::GatParams;
use crate::gof::bootstrap_p;
use crate::specfun::RandomStream;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] GatError),

    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("{path}:{line}: non-numeric value '{token}'")]
    Parse { path: String, line: usize, token: String },

    #[error("{0}")]
    Usage(String),

    #[error("writing output: {0}")]
    Output(#[from] io::Error),

    #[error("encoding output: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "gatdist", version, about = "Fit and evaluate generalised asymmetric t distributions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one model, or the nested ladder of models, by maximum likelihood
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Fit the nested ladder (both families unless --family is given)
        #[arg(long)]
        ladder: bool,
        /// Seed for the optimiser's restart jitter
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate the density, distribution function or quantile function
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, group = "what")]
        pdf: Vec<f64>,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, group = "what")]
        cdf: Vec<f64>,
        #[arg(long, num_args = 1.., allow_negative_numbers = true, group = "what")]
        quantile: Vec<f64>,
    },
    /// Draw random variates, one per line
    Sample {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'n', long, default_value_t = 1)]
        n: usize,
        /// Seed; drawn from system entropy and echoed to stderr when absent
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Value-at-risk and expected shortfall, from supplied or fitted parameters
    Risk {
        /// Data to fit first; parameter flags are used when absent
        input: Option<String>,
        #[arg(long)]
        column: Option<String>,
        #[arg(long)]
        log_returns: bool,
        #[arg(long = "fix", value_name = "NAME=VALUE")]
        fix: Vec<String>,
        #[command(flatten)]
        params: ParamArgs,
        /// Tail probability (repeatable)
        #[arg(long, required = true)]
        gamma: Vec<f64>,
    },
    /// Anderson–Darling test with a parametric-bootstrap p-value
    Gof {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Bootstrap replicates (at least 99)
        #[arg(long, default_value_t = 999)]
        boot: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Histogram and fitted GAT and AST densities as CSV
    Plotdata {
        #[command(flatten)]
        data: DataArgs,
        /// Parameters fixed in both fits (alpha applies to GAT only)
        #[arg(long = "fix", value_name = "NAME=VALUE")]
        fix: Vec<String>,
        #[arg(long, default_value_t = 15)]
        bins: usize,
    },
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// File path, `-` for standard input, or `fixture:NAME`
    pub input: String,
    /// Column by 1-based index or header name
    #[arg(long)]
    pub column: Option<String>,
    /// Replace values by ln(x[i+1] / x[i])
    #[arg(long)]
    pub log_returns: bool,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Hold a parameter fixed (repeatable)
    #[arg(long = "fix", value_name = "NAME=VALUE")]
    pub fix: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Gat,
    Ast,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Gat => Family::Gat,
            FamilyArg::Ast => Family::Ast,
        }
    }
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, value_enum, default_value = "gat")]
    pub family: FamilyArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
}

impl ParamArgs {
    fn law(&self) -> CliResult<FittedParams> {
        Ok(match self.family {
            FamilyArg::Gat => FittedParams::Gat(GatParams::new(self.mu, self.phi, self.nu, self.c, self.r, self.alpha)?),
            FamilyArg::Ast => FittedParams::Ast(AstParams::new(self.mu, self.phi, self.nu, self.c, self.r)?),
        })
    }
}

/// Values read from one source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub values: Vec<f64>,
    pub source: String,
    pub transform: Transform,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    None,
    LogReturns,
}

fn split_fields(line: &str) -> Vec<&str> {
    let fields: Vec<&str> = if line.contains([',', ';', '\t']) {
        line.split([',', ';', '\t']).map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    };
    fields
}

/// Parse one-value-per-line or delimited text. A first line in which no
/// field is numeric is a header.
pub fn parse_dataset(text: &str, source: &str, column: Option<&str>) -> CliResult<Vec<f64>> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let mut header: Option<Vec<String>> = None;
    if let Some(&(_, first)) = rows.peek() {
        let fields = split_fields(first);
        if fields.iter().all(|f| f.parse::<f64>().is_err()) {
            header = Some(fields.iter().map(|s| s.trim_matches('"').to_string()).collect());
            rows.next();
        }
    }
    let index = match column {
        None => None,
        Some(spec) => Some(match spec.parse::<usize>() {
            Ok(0) => return Err(CliError::Usage("column indices start at 1".into())),
            Ok(k) => k - 1,
            Err(_) => header
                .as_ref()
                .and_then(|h| h.iter().position(|name| name == spec))
                .ok_or_else(|| CliError::Usage(format!("no column named '{spec}' in {source}")))?,
        }),
    };
    let mut values = Vec::new();
    for (line, text) in rows {
        let fields = split_fields(text);
        let token = match index {
            Some(k) => *fields
                .get(k)
                .ok_or_else(|| CliError::Usage(format!("{source}:{line}: no column {}", k + 1)))?,
            None if fields.len() == 1 => fields[0],
            None => {
                return Err(CliError::Usage(format!(
                    "{source}:{line}: {} columns found; choose one with --column",
                    fields.len()
                )))
            }
        };
        match token.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            _ => {
                return Err(CliError::Parse {
                    path: source.to_string(),
                    line,
                    token: token.to_string(),
                })
            }
        }
    }
    Ok(values)
}

/// `ln(xᵢ₊₁ / xᵢ)` over consecutive values, all of which must be positive.
pub fn log_returns(values: &[f64]) -> CliResult<Vec<f64>> {
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.is_nan() || **v <= 0.0) {
        return Err(CliError::Usage(format!(
            "log returns need positive values; value {} is {v}",
            i + 1
        )));
    }
    if values.len() < 2 {
        return Err(GatError::EmptyData.into());
    }
    Ok(values.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

/// Read a dataset from a file, standard input (`-`) or a bundled fixture
/// (`fixture:NAME`).
pub fn load_dataset(input: &str, column: Option<&str>, log_ret: bool) -> CliResult<Dataset> {
    let raw = if let Some(name) = input.strip_prefix("fixture:") {
        crate::fixtures::fixture(name).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown fixture '{name}'; available: {}",
                crate::fixtures::NAMES.join(", ")
            ))
        })?
    } else {
        let text = if input == "-" {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io {
                path: "<stdin>".into(),
                source,
            })?;
            s
        } else {
            std::fs::read_to_string(PathBuf::from(input)).map_err(|source| CliError::Io {
                path: input.to_string(),
                source,
            })?
        };
        parse_dataset(&text, input, column)?
    };
    let (values, transform) = if log_ret {
        (log_returns(&raw)?, Transform::LogReturns)
    } else {
        (raw, Transform::None)
    };
    if values.is_empty() {
        return Err(GatError::EmptyData.into());
    }
    Ok(Dataset {
        n: values.len(),
        values,
        source: input.to_string(),
        transform,
    })
}

fn parse_fixes(fix: &[String]) -> CliResult<Vec<(Param, f64)>> {
    fix.iter()
        .map(|item| {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--fix expects NAME=VALUE, got '{item}'")))?;
            let p: Param = name.trim().parse()?;
            let v: f64 = value
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--fix {name}: '{value}' is not a number")))?;
            Ok((p, v))
        })
        .collect()
}

fn model_spec(family: Family, fix: &[String]) -> CliResult<ModelSpec> {
    Ok(ModelSpec::new(family, parse_fixes(fix)?)?)
}

/// `v` to `digits` significant digits, trailing zeros removed.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.prec$e}", prec = digits - 1)
    }
}

fn cell(e: &crate::fit::Estimate) -> String {
    if e.fixed {
        format!("{:.4}(f)", e.value)
    } else {
        format!("{:.4}", e.value)
    }
}

fn se_cell(e: &crate::fit::Estimate) -> String {
    match (e.fixed, e.std_error) {
        (true, _) => String::new(),
        (false, Some(se)) => format!("({se:.4})"),
        (false, None) => "(n/a)".into(),
    }
}

/// Rows shaped like a published fit table: one line of estimates per
/// model with a line of standard errors beneath it.
pub fn fit_table(results: &[FitResult], best: Option<usize>) -> String {
    let names = ["mu", "phi", "nu", "c", "r", "alpha"];
    let mut rows: Vec<Vec<String>> = vec![{
        let mut h = vec!["model".to_string()];
        h.extend(names.iter().map(|s| s.to_string()));
        h.extend(["-logL".into(), "AIC".into()]);
        h
    }];
    for (i, r) in results.iter().enumerate() {
        let mark = if Some(i) == best { " *" } else { "" };
        let mut row = vec![format!("{}{mark}", r.spec.label())];
        let mut se = vec!["  s.e.".to_string()];
        for name in names {
            match r.estimate(name) {
                Some(e) => {
                    row.push(cell(e));
                    se.push(se_cell(e));
                }
                None => {
                    row.push("-".into());
                    se.push(String::new());
                }
            }
        }
        row.push(format!("{:.4}", r.neg_log_lik));
        row.push(format!("{:.4}", r.aic));
        rows.push(row);
        rows.push(se);
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|j| rows.iter().map(|r| r.get(j).map_or(0, |c| c.chars().count())).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j == 0 {
                    format!("{c:<w$}", w = widths[j])
                } else {
                    format!("{c:>w$}", w = widths[j])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    for r in results {
        for d in &r.diagnostics {
            let _ = writeln!(out, "note [{}]: {d}", r.spec.label());
        }
    }
    out
}

/// GAT and AST ladders interleaved so that comparable rows sit together.
fn combined_ladder(data: &[f64], options: &FitOptions) -> CliResult<(Vec<FitResult>, usize)> {
    let gat = fit_ladder(data, Family::Gat, options)?;
    let ast = fit_ladder(data, Family::Ast, options)?;
    let g = &gat.results;
    let a = &ast.results;
    let rows = vec![
        g[0].clone(),
        a[0].clone(),
        g[1].clone(),
        a[1].clone(),
        g[2].clone(),
        g[4].clone(),
        g[3].clone(),
    ];
    let best = rows
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.aic.total_cmp(&y.1.aic))
        .map(|(i, _)| i)
        .expect("non-empty");
    Ok((rows, best))
}

fn entropy_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = RandomStream::from_entropy().seed();
        eprintln!("seed: {s}");
        s
    })
}

/// Execute a parsed command line, writing results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let machine = cli.format == Format::Machine;
    match cli.command {
        Command::Fit { data, model, ladder, seed } => {
            let ds = load_dataset(&data.input, data.column.as_deref(), data.log_returns)?;
            let options = FitOptions { seed, ..FitOptions::default() };
            let (results, best) = if ladder {
                if !model.fix.is_empty() {
                    return Err(CliError::Usage("--ladder chooses its own fixed parameters; drop --fix".into()));
                }
                match model.family {
                    None => combined_ladder(&ds.values, &options)?,
                    Some(f) => {
                        let l = fit_ladder(&ds.values, f.into(), &options)?;
                        (l.results, l.best)
                    }
                }
            } else {
                let family = model.family.map_or(Family::Gat, Family::from);
                let spec = model_spec(family, &model.fix)?;
                (vec![fit_mle(&ds.values, &spec, &options)?], 0)
            };
            if machine {
                let doc = json!({
                    "command": "fit",
                    "source": ds.source,
                    "transform": ds.transform,
                    "n_obs": ds.n,
                    "best": best,
                    "fits": results,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
            } else {
                writeln!(out, "{} ({} values)", ds.source, ds.n)?;
                let mark = if results.len() > 1 { Some(best) } else { None };
                write!(out, "{}", fit_table(&results, mark))?;
            }
        }
        Command::Eval { params, pdf, cdf, quantile } => {
            let law = params.law()?;
            let (kind, points, values): (&str, Vec<f64>, Vec<f64>) = if !pdf.is_empty() {
                let v = pdf.iter().map(|&x| law.pdf(x)).collect();
                ("pdf", pdf, v)
            } else if !cdf.is_empty() {
                let v = cdf.iter().map(|&x| law.cdf(x)).collect();
                ("cdf", cdf, v)
            } else if !quantile.is_empty() {
                let FittedParams::Gat(g) = law else {
                    return Err(CliError::Usage("quantiles are available for the GAT family only".into()));
                };
                let v = quantile.iter().map(|&u| g.quantile(u)).collect::<Result<Vec<_>, _>>()?;
                ("quantile", quantile, v)
            } else {
                return Err(CliError::Usage("choose one of --pdf, --cdf or --quantile".into()));
            };
            if machine {
                let doc = json!({ "command": "eval", "kind": kind, "points": points, "values": values });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
            } else {
                for v in values {
                    writeln!(out, "{}", format_sig(v, 15))?;
                }
            }
        }
        Command::Sample { params, n, seed } => {
            if n == 0 {
                return Err(CliError::Usage("-n must be at least 1".into()));
            }
            let law = params.law()?;
            let seed = entropy_seed(seed);
            let draws = law.sample(n, &mut RandomStream::new(seed));
            if machine {
                let doc = json!({ "command": "sample", "seed": seed, "values": draws });
                writeln!(out, "{}", serde_json::to_string(&doc)?)?;
            } else {
                let mut buf = String::with_capacity(n * 20);
                for v in draws {
                    let _ = writeln!(buf, "{v}");
                }
                out.write_all(buf.as_bytes())?;
            }
        }
        Command::Risk { input, column, log_returns, fix, params, gamma } => {
            if params.family != FamilyArg::Gat {
                return Err(CliError::Usage("risk measures are implemented for the GAT family".into()));
            }
            let law = match &input {
                Some(path) => {
                    let ds = load_dataset(path, column.as_deref(), log_returns)?;
                    let spec = model_spec(Family::Gat, &fix)?;
                    match fit_mle(&ds.values, &spec, &FitOptions::default())?.params {
                        FittedParams::Gat(g) => g,
                        FittedParams::Ast(_) => unreachable!("GAT spec"),
                    }
                }
                None => GatParams::new(params.mu, params.phi, params.nu, params.c, params.r, params.alpha)?,
            };
            let reports = gamma.iter().map(|&g| law.risk_report(g)).collect::<Result<Vec<_>, _>>()?;
            if machine {
                let doc = json!({ "command": "risk", "params": law, "reports": reports });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
            } else {
                writeln!(out, "{:>8}  {:>12}  {:>12}  {:>10}", "gamma", "VaR", "ES", "F(-VaR)")?;
                for r in reports {
                    let es = r.es.map_or_else(|| "undefined".to_string(), |v| format!("{v:.4}"));
                    writeln!(out, "{:>8}  {:>12.4}  {:>12}  {:>10.6}", r.gamma, r.var, es, r.cdf_at_neg_var)?;
                }
                if law.nu() <= law.r() {
                    writeln!(out, "note: ES undefined because nu <= r (the left tail has no mean)")?;
                }
            }
        }
        Command::Gof { data, model, boot, seed } => {
            let ds = load_dataset(&data.input, data.column.as_deref(), data.log_returns)?;
            let family = model.family.map_or(Family::Gat, Family::from);
            let spec = model_spec(family, &model.fix)?;
            let seed = entropy_seed(seed);
            let report = bootstrap_p(&ds.values, &spec, boot, &RandomStream::new(seed))?;
            if machine {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                writeln!(out, "model      {}", spec.label())?;
                writeln!(out, "A^2        {:.4}", report.statistic)?;
                writeln!(out, "p-value    {:.4}", report.p_value)?;
                writeln!(out, "replicates {}", report.n_boot)?;
                writeln!(out, "failed     {}", report.failed_replicates)?;
                writeln!(out, "seed       {}", report.seed)?;
            }
        }
        Command::Plotdata { data, fix, bins } => {
            let ds = load_dataset(&data.input, data.column.as_deref(), data.log_returns)?;
            let fixes = parse_fixes(&fix)?;
            let gat_spec = ModelSpec::new(Family::Gat, fixes.iter().copied())?;
            let ast_spec = ModelSpec::new(Family::Ast, fixes.iter().copied().filter(|(p, _)| *p != Param::Alpha))?;
            let gat = fit_mle(&ds.values, &gat_spec, &FitOptions::default())?;
            let ast = fit_mle(&ds.values, &ast_spec, &FitOptions::default())?;
            out.write_all(plot_csv(&ds.values, bins, &gat.params, &ast.params)?.as_bytes())?;
        }
    }
    Ok(())
}

/// Number of evenly spaced density evaluation points in plot output.
pub const GRID_POINTS: usize = 512;

/// CSV with a `hist` row per bin (centre, height) and a `grid` row per
/// density evaluation point; both row kinds carry the two fitted densities.
pub fn plot_csv(data: &[f64], bins: usize, gat: &FittedParams, ast: &FittedParams) -> CliResult<String> {
    if bins == 0 {
        return Err(CliError::Usage("--bins must be at least 1".into()));
    }
    let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let width = span / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in data {
        let k = (((x - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let n = data.len() as f64;
    let mut out = String::from("kind,x,histogram,gat,ast\n");
    for (k, &c) in counts.iter().enumerate() {
        let x = lo + (k as f64 + 0.5) * width;
        let _ = writeln!(out, "hist,{x},{},{},{}", c as f64 / (n * width), gat.pdf(x), ast.pdf(x));
    }
    let phi = gat.values()[Param::Phi.index()];
    let (a, b) = (lo - phi, hi + phi);
    for i in 0..GRID_POINTS {
        let x = a + (b - a) * i as f64 / (GRID_POINTS - 1) as f64;
        let _ = writeln!(out, "grid,{x},,{},{}", gat.pdf(x), ast.pdf(x));
    }
    Ok(out)
}
