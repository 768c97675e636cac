//! Command-line front end. [`run`] never exits the process; it returns the
//! exit code with the captured output so the binary stays a thin wrapper.

use std::f64::consts::PI;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::admittance::{
    check_pr, check_pt, check_pt_pole_point, effective_length, smatrix_from_admittance, AdmittanceTriple, Num, PtStatus,
    YValue, PAPER_NU_SIGN,
};
use crate::charpoly::charpoly_deleted;
use crate::designer::{hyperbola_csv, hyperbola_json, hyperbola_samples, load_library, search, CompositionQuery};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::json::{graph_to_string, graph_to_value, poly_to_json, read_graph, SCHEMA};
use crate::momentum::Momentum;
use crate::scalar::parse_quad;
use crate::scattering::{calibrate_sign, sign_calibration, smatrix_closed2, smatrix_oracle_with, Precision, SMatrix};

#[derive(Parser, Debug)]
#[command(name = "qws", version, about = "Scattering of quantum walks on two-terminal weighted graphs")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Config {
    /// Arithmetic for the oracle: float64, or extended (exact at literal momenta)
    #[arg(long, global = true, value_enum, default_value_t = PrecisionArg::Float64)]
    precision: PrecisionArg,
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Sign convention for displayed ν values
    #[arg(long = "nu-sign", global = true, value_enum, default_value_t = NuSign::PathSum)]
    nu_sign: NuSign,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PrecisionArg {
    Float64,
    Extended,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Output {
    Json,
    Csv,
    Human,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum NuSign {
    PathSum,
    Paper,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum MethodArg {
    Oracle,
    Closed,
    Munu,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum PlotFormat {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characteristic polynomial, optionally of a vertex-deleted subgraph
    Charpoly {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        delete: Vec<usize>,
    },
    /// Scattering matrix at momentum k
    Smatrix {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Oracle)]
        method: MethodArg,
    },
    /// Admittance triple at a momentum or spectral point
    Munu {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "y")]
        k: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
    /// Perfect transmission test
    CheckPt {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// Parallel or series composition of graph files
    Compose {
        #[arg(long, conflicts_with = "series", required_unless_present = "series")]
        parallel: bool,
        #[arg(long)]
        series: bool,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Search a block library for perfect-transmission composites
    Search {
        #[arg(long, required = true)]
        library: Vec<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Target transmission phase (radians or a multiple of pi)
        #[arg(long, allow_hyphen_values = true)]
        phase: Option<String>,
        #[arg(long = "max-total", default_value_t = 16)]
        max_total: usize,
        #[arg(long = "max-per", default_value_t = 16)]
        max_per: usize,
        /// Allow blocks with unequal self-admittances
        #[arg(long)]
        asymmetric: bool,
        /// Skip unreadable files instead of failing
        #[arg(long)]
        partial: bool,
        #[arg(long)]
        serial: bool,
        #[arg(long = "no-verify")]
        no_verify: bool,
        /// Bound on enumerated half-combinations
        #[arg(long = "max-partials", default_value_t = crate::designer::DEFAULT_PARTIAL_CAP)]
        max_partials: usize,
    },
    /// Effective length at a perfect-transmission momentum
    Efflength {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// Samples of the perfect-transmission hyperbola
    Hyperbola {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, value_enum)]
        format: Option<PlotFormat>,
    },
    /// Determine the global sign of the closed-form transmission amplitude
    Calibrate,
}

/// Exit code with the captured standard output and error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if !(cli.config.tol > 0.0) {
        return CliOutput { code: 1, stdout: String::new(), stderr: "error: --tol must be positive\n".into() };
    }
    let mut stderr = String::new();
    match dispatch(&cli, &mut stderr) {
        Ok(Reply { body, code }) => CliOutput { code, stdout: body, stderr },
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            let stdout = match cli.config.output {
                Output::Human => String::new(),
                _ => format!("{}\n", json!({"schema": SCHEMA, "error": e.to_string(), "exit_code": e.exit_code()})),
            };
            CliOutput { code: e.exit_code(), stdout, stderr }
        }
    }
}

struct Reply {
    body: String,
    code: i32,
}

impl Reply {
    fn ok(body: String) -> Self {
        Reply { body, code: 0 }
    }
}

fn render(v: &Value, cfg: &Config) -> String {
    match cfg.output {
        Output::Human => human(v, 0),
        _ => format!("{v}\n"),
    }
}

fn human(v: &Value, depth: usize) -> String {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            let mut s = String::new();
            for (key, val) in m {
                match val {
                    Value::Object(_) => s.push_str(&format!("{pad}{key}:\n{}", human(val, depth + 1))),
                    _ => s.push_str(&format!("{pad}{key}: {val}\n")),
                }
            }
            s
        }
        other => format!("{pad}{other}\n"),
    }
}

fn momentum(text: &str) -> Result<Momentum> {
    Momentum::parse(text)
}

/// Radians, or `[-][n]pi[/m]`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect::<String>().to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let bad = || Error::Usage(format!("cannot parse angle {text:?}"));
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1.0, r),
        None => (1.0, t.as_str()),
    };
    let (head, den) = match rest.split_once('/') {
        Some((h, d)) => (h, d.parse::<f64>().map_err(|_| bad())?),
        None => (rest, 1.0),
    };
    let num = head.strip_suffix("pi").ok_or_else(bad)?;
    let num = if num.is_empty() { 1.0 } else { num.parse::<f64>().map_err(|_| bad())? };
    Ok(sign * num * PI / den)
}

fn precision(cfg: &Config) -> Precision {
    match cfg.precision {
        PrecisionArg::Float64 => Precision::Double,
        PrecisionArg::Extended => Precision::Exact,
    }
}

fn display_num(n: &Num, cfg: &Config) -> Value {
    match (cfg.nu_sign, n) {
        (NuSign::PathSum, _) => n.to_json(),
        (NuSign::Paper, Num::Exact(q)) => Num::Exact(q.clone() * crate::Quad::from(PAPER_NU_SIGN as i64)).to_json(),
        (NuSign::Paper, Num::Float(x)) => json!(x * PAPER_NU_SIGN as f64),
    }
}

fn dispatch(cli: &Cli, stderr: &mut String) -> Result<Reply> {
    let cfg = &cli.config;
    let cal = sign_calibration();
    match &cli.command {
        Command::Charpoly { file, delete } => {
            let g = read_graph(file)?;
            let p = charpoly_deleted(&g, delete)?;
            let v = json!({
                "schema": SCHEMA,
                "graph_hash": g.graph_hash(),
                "deleted": delete,
                "coeffs": poly_to_json(&p),
                "degree": p.degree(),
            });
            Ok(Reply::ok(render(&v, cfg)))
        }
        Command::Smatrix { file, k, method } => {
            let g = read_graph(file)?;
            let k = momentum(k)?;
            let oracle = || smatrix_oracle_with(&g, &k, precision(cfg));
            let closed = || smatrix_closed2(&g, &k, cal);
            let munu = || -> Result<SMatrix> {
                let t = AdmittanceTriple::of(&g)?;
                let mut s = smatrix_from_admittance(&t.at(&k), &k, cal)?;
                s.graph_hash = Some(g.graph_hash());
                Ok(s)
            };
            let v = match method {
                MethodArg::Oracle => oracle()?.to_json(),
                MethodArg::Closed => closed()?.to_json(),
                MethodArg::Munu => munu()?.to_json(),
                MethodArg::All => {
                    let o = oracle()?;
                    let mut out = json!({"schema": SCHEMA, "k": k.k(), "k_label": k.label(), "sigma": cal.sigma, "oracle": o.to_json()});
                    let mut diffs = serde_json::Map::new();
                    for (name, s) in [("closed", closed()), ("munu", munu())] {
                        match s {
                            Ok(s) => {
                                let d = if s.phase_known { s.max_diff(&o) } else { modulus_diff(&s, &o) };
                                diffs.insert(name.into(), json!(d));
                                out[name] = s.to_json();
                            }
                            Err(e) => {
                                out[name] = json!({"error": e.to_string()});
                            }
                        }
                    }
                    out["max_diff_vs_oracle"] = Value::Object(diffs);
                    out
                }
            };
            Ok(Reply::ok(render(&v, cfg)))
        }
        Command::Munu { file, k, y } => {
            let g = read_graph(file)?;
            let t = AdmittanceTriple::of(&g)?;
            let p = match (k, y) {
                (Some(k), _) => t.at(&momentum(k)?),
                (None, Some(y)) => match parse_quad(y) {
                    Ok(q) => t.evaluate(&YValue::Exact(q)),
                    Err(_) => t.evaluate(&YValue::Float(
                        y.parse().map_err(|_| Error::Parse(format!("cannot parse y = {y:?}")))?,
                    )),
                },
                (None, None) => return Err(Error::Usage("munu needs --k or --y".into())),
            };
            let mut v = p.to_json();
            v["graph_hash"] = json!(g.graph_hash());
            v["triple"] = t.to_json();
            if let Some(nu) = p.nu() {
                v["nu_display"] = display_num(nu, cfg);
            }
            v["nu_sign"] = json!(match cfg.nu_sign {
                NuSign::PathSum => "path-sum",
                NuSign::Paper => "paper",
            });
            Ok(Reply::ok(render(&v, cfg)))
        }
        Command::CheckPt { file, k } => {
            let g = read_graph(file)?;
            let k = momentum(k)?;
            let t = AdmittanceTriple::of(&g)?;
            let p = t.at(&k);
            let mut r = if p.is_finite() { check_pt(&p, &k, cfg.tol, cal)? } else { check_pt_pole_point(&p, cal)? };
            if r.status == PtStatus::Partial && p.is_finite() {
                let pr = check_pr(&p, &k, cfg.tol, cal)?;
                if pr.status == PtStatus::PerfectReflection {
                    r = pr;
                }
            }
            let mut v = r.to_json();
            v["graph_hash"] = json!(g.graph_hash());
            v["k"] = json!(k.k());
            v["k_label"] = json!(k.label());
            Ok(Reply::ok(render(&v, cfg)))
        }
        Command::Compose { parallel, series: _, files, out } => {
            let gs = files.iter().map(|f| read_graph(f)).collect::<Result<Vec<_>>>()?;
            let g = if *parallel {
                WeightedGraph::parallel_compose(&gs)?
            } else {
                let mut acc = gs[0].clone();
                for next in &gs[1..] {
                    acc = WeightedGraph::series_compose(&acc, next)?;
                }
                acc
            };
            match out {
                Some(path) => {
                    std::fs::write(path, graph_to_string(&g) + "\n")?;
                    let v = json!({"schema": SCHEMA, "output": path.display().to_string(), "graph_hash": g.graph_hash(), "n": g.n()});
                    Ok(Reply::ok(render(&v, cfg)))
                }
                None => Ok(Reply::ok(render(&graph_to_value(&g), cfg))),
            }
        }
        Command::Search { library, k, phase, max_total, max_per, asymmetric, partial, serial, no_verify, max_partials } => {
            let k = momentum(k)?;
            let lib = load_library(library, &k, *partial)?;
            for w in &lib.warnings {
                stderr.push_str(&format!("warning: {w}\n"));
            }
            for (p, e) in &lib.failures {
                stderr.push_str(&format!("warning: skipped {}: {e}\n", p.display()));
            }
            let q = CompositionQuery {
                target_theta: phase.as_deref().map(parse_angle).transpose()?,
                max_total_blocks: *max_total,
                max_per_block: *max_per,
                tol: cfg.tol,
                require_symmetric: !asymmetric,
                parallel: !serial,
                verify: !no_verify,
                partial_cap: *max_partials,
                ..Default::default()
            };
            let outcome = search(&lib, &q)?;
            let mut body = String::new();
            for r in &outcome.results {
                match cfg.output {
                    Output::Human => {
                        let counts: Vec<String> = r.counts.iter().map(|(n, c)| format!("{c}x{n}")).collect();
                        let theta = r.pt.theta.map_or("-".into(), |t| format!("{t:.12}"));
                        let len = r.effective_length.as_ref().map_or("-".into(), |l| format!("{}", l.value));
                        body.push_str(&format!("{}  theta={theta}  length={len}\n", counts.join(" + ")));
                    }
                    _ => body.push_str(&format!("{}\n", r.to_json())),
                }
            }
            if outcome.results.is_empty() {
                stderr.push_str("no solution within bounds\n");
            }
            if outcome.truncated {
                stderr.push_str(&format!("partial cap reached after {} partials; results are incomplete\n", outcome.partials));
                return Ok(Reply { body, code: Error::ResourceLimit(String::new()).exit_code() });
            }
            Ok(Reply::ok(body))
        }
        Command::Efflength { file, k } => {
            let g = read_graph(file)?;
            let k = momentum(k)?;
            let t = AdmittanceTriple::of(&g)?;
            let p = t.at(&k);
            if !p.is_finite() {
                return Err(Error::Unsupported("effective length is not defined on the pole branch".into()));
            }
            let r = check_pt(&p, &k, cfg.tol, cal)?;
            if !r.is_pt() {
                let v = json!({
                    "schema": SCHEMA,
                    "prerequisite": false,
                    "status": r.status.as_str(),
                    "effective_length": Value::Null,
                });
                return Ok(Reply { body: render(&v, cfg), code: 2 });
            }
            let l = effective_length(&t, &k, &r)?;
            let v = json!({
                "schema": SCHEMA,
                "prerequisite": true,
                "status": r.status.as_str(),
                "effective_length": l.value,
                "effective_length_exact": l.exact.as_ref().map(crate::json::quad_to_json),
                "k": k.k(),
                "k_label": k.label(),
            });
            Ok(Reply::ok(render(&v, cfg)))
        }
        Command::Hyperbola { k, samples, format } => {
            let k = momentum(k)?;
            let pts = hyperbola_samples(&k, *samples)?;
            let csv = match format {
                Some(PlotFormat::Csv) => true,
                Some(PlotFormat::Json) => false,
                None => cfg.output == Output::Csv,
            };
            if csv {
                Ok(Reply::ok(hyperbola_csv(&pts)))
            } else {
                Ok(Reply::ok(render(&hyperbola_json(&k, &pts), cfg)))
            }
        }
        Command::Calibrate => Ok(Reply::ok(render(&calibrate_sign()?.to_json(), cfg))),
    }
}

fn modulus_diff(a: &SMatrix, b: &SMatrix) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a.get(i, j).norm() - b.get(i, j).norm()).abs());
        }
    }
    d
}
