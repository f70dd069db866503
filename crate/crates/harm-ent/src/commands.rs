//! Command implementations. Each writes its primary output to `stdout` and
//! files under `--out`; nothing depends on wall-clock time or thread count.

use std::fs;
use std::io::Write;
use std::path::Path;

use harm_ent_core::entanglement::report_with;
use harm_ent_core::kernel::build_kernel_with;
use harm_ent_core::lattice::{build_eta_chain_with, build_separable};
use harm_ent_core::scaling::{
    area_law_2d, block_log_fit, fit_log_growth, fit_saturation, szego_det_check, widom_det_check, widom_slope,
    DeterminantCheck, PartitionRule, ScalingFit, SweepPoint,
};
use harm_ent_core::spectral::classify_with;
use harm_ent_core::{
    classify, correlation_length, szego_coefficients, szego_lower_bound, CorrelationEstimate, CouplingSpec,
    EntanglementReport, Error as CoreError, EtaChainParams, Partition, SpectralKind, Tolerances,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::{Cli, Command, Format, Rule, SizeList, SpecArgs};
use crate::error::{CliError, Result};
use crate::formats::{self, num, VERSION};
use crate::parallel;
use crate::spec_file::{short_hash, SpecDocument};
use crate::svg::{line_plot, Series};

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let tol = tolerances(&cli.tol_override)?;
    match cli.command {
        Command::Classify { spec } => classify_cmd(&spec, &tol, stdout),
        Command::Report { spec, n1, format, out } => report_cmd(&spec, n1, format, out.as_deref(), &tol, stdout),
        Command::Kernel { spec, out } => kernel_cmd(&spec, out.as_deref(), &tol, stdout),
        Command::Fig1 { etas, n, sizes, out } => fig1_cmd(&etas, n, &sizes, &out, &tol, stdout),
        Command::Sweep { spec, sizes, rule, out } => sweep_cmd(&spec, &sizes, rule, out.as_deref(), &tol, stdout),
        Command::Widom { spec, sizes, out } => widom_cmd(&spec, &sizes, out.as_deref(), &tol, stdout),
        Command::Szego { spec, order, sizes, out } => szego_cmd(&spec, order, &sizes, out.as_deref(), &tol, stdout),
        Command::AreaLaw { eta, n, spec, sizes, out } => {
            area_law_cmd(eta, n, spec.as_deref(), &sizes, out.as_deref(), &tol, stdout)
        }
    }
}

pub fn tolerances(overrides: &[String]) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    for o in overrides {
        let (name, value) =
            o.split_once('=').ok_or_else(|| CliError::Spec(format!("tolerance override {o:?} is not NAME=VALUE")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Spec(format!("tolerance override {o:?} has no numeric value")))?;
        if !value.is_finite() || value < 0.0 || !tol.set(name.trim(), value) {
            return Err(CliError::Spec(format!("unknown or invalid tolerance override {o:?}")));
        }
    }
    Ok(tol)
}

/// Where the couplings come from.
#[derive(Debug, Clone)]
pub enum Source {
    Eta(f64),
    File(SpecDocument),
}

impl Source {
    pub fn from_args(args: &SpecArgs) -> Result<Self> {
        match (&args.eta, &args.spec) {
            (Some(eta), None) => Ok(Source::Eta(*eta)),
            (None, Some(path)) => Ok(Source::File(SpecDocument::load(path)?)),
            _ => Err(CliError::Spec("give exactly one of --eta or --spec".into())),
        }
    }

    /// `eta_or_spec_hash` column value.
    pub fn tag(&self) -> String {
        match self {
            Source::Eta(eta) => num(*eta),
            Source::File(doc) => doc.hash(),
        }
    }

    fn identity(&self) -> Value {
        match self {
            Source::Eta(eta) => json!({ "eta": eta }),
            Source::File(doc) => json!({ "spec": doc }),
        }
    }

    /// Spec at ring size `n`; for files, `n` replaces the single extent.
    pub fn build(&self, n: Option<usize>, tol: &Tolerances) -> Result<CouplingSpec> {
        match self {
            Source::Eta(eta) => {
                let n = n.ok_or_else(|| CliError::Spec("--n is required with --eta".into()))?;
                Ok(build_eta_chain_with(EtaChainParams { eta: *eta, n }, tol)?)
            }
            Source::File(doc) => {
                let spec = doc.build(tol)?;
                match n {
                    Some(n) if spec.extents() != [n] => {
                        if spec.dimension() != 1 {
                            return Err(CliError::Spec("--n only applies to one-dimensional specs".into()));
                        }
                        Ok(spec.resized(vec![n])?)
                    }
                    _ => Ok(spec),
                }
            }
        }
    }

    /// Builder of 1D rings of any size.
    pub fn builder(&self, tol: &Tolerances) -> Result<impl Fn(usize) -> harm_ent_core::Result<CouplingSpec> + Sync> {
        let (eta, base) = match self {
            Source::Eta(eta) => (Some(*eta), None),
            Source::File(doc) => {
                let spec = doc.build(tol)?;
                if spec.dimension() != 1 {
                    return Err(CliError::Spec("size sweeps need a one-dimensional spec".into()));
                }
                (None, Some(spec))
            }
        };
        let tol = *tol;
        Ok(move |n: usize| match (&eta, &base) {
            (Some(eta), _) => build_eta_chain_with(EtaChainParams { eta: *eta, n }, &tol),
            (_, Some(spec)) => spec.resized(vec![n]),
            _ => unreachable!(),
        })
    }
}

/// Hash of everything that determines a command's output.
pub fn config_hash(command: &str, source: Option<&Source>, args: Value, tol: &Tolerances) -> String {
    let doc = json!({
        "tool": VERSION,
        "command": command,
        "source": source.map(Source::identity),
        "args": args,
        "tolerances": tol,
    });
    short_hash(doc.to_string().as_bytes())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<()> {
    stdout.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output documents always serialize");
    s.push('\n');
    s
}

fn warn_skipped(skipped: &[(usize, CoreError)]) {
    for (n, e) in skipped {
        eprintln!("warning: skipped N={n}: {e}");
    }
}

fn classify_cmd(args: &SpecArgs, tol: &Tolerances, stdout: &mut dyn Write) -> Result<()> {
    let spec = Source::from_args(args)?.build(args.n, tol)?;
    emit(stdout, &pretty(&classify_with(&spec, tol)?))
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    config: &'a str,
    #[serde(flatten)]
    report: &'a EntanglementReport,
    correlation: Option<&'a CorrelationEstimate>,
}

fn report_cmd(
    args: &SpecArgs,
    n1: usize,
    format: Format,
    out: Option<&Path>,
    tol: &Tolerances,
    stdout: &mut dyn Write,
) -> Result<()> {
    let source = Source::from_args(args)?;
    let spec = source.build(args.n, tol)?;
    let hash = config_hash("report", Some(&source), json!({ "n": args.n, "n1": n1 }), tol);
    let partition = Partition::hyperrectangle(vec![n1; spec.dimension()]);
    let kernel = build_kernel_with(&spec, tol)?;
    let report = report_with(&kernel, &partition, tol)?;
    let correlation = if spec.dimension() == 1 {
        match correlation_length(&kernel) {
            Ok(c) => Some(c),
            Err(CoreError::InsufficientDecayData { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let json = pretty(&ReportDocument { config: &hash, report: &report, correlation: correlation.as_ref() });
    let csv = formats::report_csv(&hash, &report, correlation.as_ref());
    if let Some(dir) = out {
        write_file(dir, "report.json", &json)?;
        write_file(dir, "report.csv", &csv)?;
    }
    emit(stdout, if format == Format::Json { &json } else { &csv })
}

fn kernel_cmd(args: &SpecArgs, out: Option<&Path>, tol: &Tolerances, stdout: &mut dyn Write) -> Result<()> {
    let source = Source::from_args(args)?;
    let spec = source.build(args.n, tol)?;
    let hash = config_hash("kernel", Some(&source), json!({ "n": args.n }), tol);
    let csv = formats::kernel_csv(&hash, &build_kernel_with(&spec, tol)?);
    match out {
        Some(dir) => write_file(dir, "kernel.csv", &csv),
        None => emit(stdout, &csv),
    }
}

/// Fits are measured on blocks of at least this size.
pub const FIT_MIN_BLOCK: usize = 8;
/// A saturated curve varies by less than this past [`PLATEAU_FROM`].
pub const PLATEAU_TOLERANCE: f64 = 0.01;
pub const PLATEAU_FROM: usize = 32;

#[derive(Debug, Clone, Serialize)]
pub struct Curve {
    pub eta: f64,
    pub kind: SpectralKind,
    pub strictly_increasing: bool,
    /// `S` against the log of the chord length, blocks in `[8, N/4]`.
    pub log_fit: Option<ScalingFit>,
    /// `max |S(N₁) − S(N₁,max)|` over `N₁ ≥ 32`.
    pub plateau_spread: Option<f64>,
    pub saturated: Option<bool>,
}

impl Curve {
    pub fn from_points(eta: f64, kind: SpectralKind, n: usize, points: &[SweepPoint]) -> Self {
        let s: Vec<f64> = points.iter().map(|p| p.report.entropy).collect();
        let window: Vec<&SweepPoint> = points.iter().filter(|p| p.n1 >= FIT_MIN_BLOCK && 4 * p.n1 <= n).collect();
        let log_fit = block_log_fit(
            n,
            &window.iter().map(|p| p.n1).collect::<Vec<_>>(),
            &window.iter().map(|p| p.report.entropy).collect::<Vec<_>>(),
        )
        .ok();
        let plateau_spread = match (points.last(), s.last()) {
            (Some(last), Some(&s_last)) if last.n1 >= PLATEAU_FROM => Some(
                points
                    .iter()
                    .filter(|p| p.n1 >= PLATEAU_FROM)
                    .map(|p| (p.report.entropy - s_last).abs())
                    .fold(0.0, f64::max),
            ),
            _ => None,
        };
        Curve {
            eta,
            kind,
            strictly_increasing: s.windows(2).all(|w| w[1] > w[0]),
            log_fit,
            plateau_spread,
            saturated: plateau_spread.map(|d| d < PLATEAU_TOLERANCE),
        }
    }
}

fn fig1_cmd(
    etas: &[f64],
    n: usize,
    sizes: &SizeList,
    out: &Path,
    tol: &Tolerances,
    stdout: &mut dyn Write,
) -> Result<()> {
    let mut curves = Vec::new();
    let mut series = Vec::new();
    for &eta in etas {
        let source = Source::Eta(eta);
        let hash = config_hash("fig1", Some(&source), json!({ "n": n, "sizes": sizes.0 }), tol);
        let builder = source.builder(tol)?;
        let kind = match builder(n) {
            Ok(spec) => classify_with(&spec, tol)?.kind,
            Err(e @ CoreError::NotPositive { .. }) => {
                eprintln!("warning: skipped eta={}: {e}", num(eta));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let sweep = parallel::sweep(&builder, &sizes.0, PartitionRule::FixedRing(n))?;
        write_file(out, &format!("fig1_eta{}.csv", num(eta)), &formats::sweep_csv(&hash, &num(eta), &sweep.points))?;
        series.push(Series {
            label: format!("η = {}", num(eta)),
            points: sweep.points.iter().map(|p| (p.n1 as f64, p.report.entropy)).collect(),
        });
        curves.push(Curve::from_points(eta, kind, n, &sweep.points));
    }
    let hash = config_hash("fig1", None, json!({ "etas": etas, "n": n, "sizes": sizes.0 }), tol);
    let summary = pretty(&json!({ "config": hash, "n": n, "curves": curves }));
    write_file(out, "fig1_fit.json", &summary)?;
    write_file(out, "fig1.svg", &line_plot(&format!("Block entropy, N = {n}"), "N1", "S", &series))?;
    emit(stdout, &summary)
}

fn sweep_cmd(
    args: &SpecArgs,
    sizes: &SizeList,
    rule: Rule,
    out: Option<&Path>,
    tol: &Tolerances,
    stdout: &mut dyn Write,
) -> Result<()> {
    let source = Source::from_args(args)?;
    let rule = match rule {
        Rule::Half => PartitionRule::HalfHalf,
        Rule::Block => PartitionRule::FixedRing(
            args.n.ok_or_else(|| CliError::Spec("--rule block needs the ring size --n".into()))?,
        ),
    };
    let hash = config_hash("sweep", Some(&source), json!({ "n": args.n, "sizes": sizes.0, "rule": rule }), tol);
    let sweep = parallel::sweep(&source.builder(tol)?, &sizes.0, rule)?;
    warn_skipped(&sweep.skipped);
    let csv = formats::sweep_csv(&hash, &source.tag(), &sweep.points);
    let Some(dir) = out else {
        return emit(stdout, &csv);
    };
    let xs: Vec<f64> = sweep.points.iter().map(|p| p.n as f64).collect();
    let s: Vec<f64> = sweep.points.iter().map(|p| p.report.entropy).collect();
    let i: Vec<f64> = sweep.points.iter().map(|p| p.report.mutual_information).collect();
    let fits = match rule {
        PartitionRule::HalfHalf => json!({
            "entropy_vs_ln_n": fit_log_growth(&xs, &s).ok(),
            "information_vs_ln_n": fit_log_growth(&xs, &i).ok(),
        }),
        PartitionRule::FixedRing(n) => {
            let window: Vec<&SweepPoint> = sweep.points.iter().filter(|p| p.n1 >= FIT_MIN_BLOCK).collect();
            let n1s: Vec<usize> = window.iter().map(|p| p.n1).collect();
            let ws: Vec<f64> = window.iter().map(|p| p.report.entropy).collect();
            let wx: Vec<f64> = n1s.iter().map(|&b| b as f64).collect();
            json!({
                "entropy_vs_ln_chord": block_log_fit(n, &n1s, &ws).ok(),
                "entropy_saturation": fit_saturation(&wx, &ws).ok(),
            })
        }
    };
    let skipped: Vec<Value> = sweep.skipped.iter().map(|(n, e)| json!({ "n": n, "reason": e.to_string() })).collect();
    write_file(dir, "sweep.csv", &csv)?;
    write_file(dir, "sweep_fit.json", &pretty(&json!({ "config": hash, "fits": fits, "skipped": skipped })))?;
    emit(stdout, &format!("wrote {} points to {}\n", sweep.points.len(), dir.display()))
}

fn widom_cmd(
    args: &SpecArgs,
    sizes: &SizeList,
    out: Option<&Path>,
    tol: &Tolerances,
    stdout: &mut dyn Write,
) -> Result<()> {
    let source = Source::from_args(args)?;
    let hash = config_hash("widom", Some(&source), json!({ "sizes": sizes.0 }), tol);
    let w = widom_slope(source.builder(tol)?, &sizes.0)?;
    warn_skipped(&w.skipped);
    let skipped: Vec<Value> = w.skipped.iter().map(|(n, e)| json!({ "n": n, "reason": e.to_string() })).collect();
    let doc = pretty(&json!({
        "config": hash,
        "slope": w.fit.a,
        "expected": w.expected,
        "fit": w.fit,
        "sizes": w.sizes,
        "informations": w.informations,
        "skipped": skipped,
    }));
    if let Some(dir) = out {
        let mut csv = formats::provenance(&hash);
        csv.push_str("N,N1,I\n");
        for (n, i) in w.sizes.iter().zip(&w.informations) {
            csv.push_str(&format!("{n},{},{}\n", harm_ent_core::scaling::half_block(*n), num(*i)));
        }
        write_file(dir, "widom.csv", &csv)?;
        write_file(dir, "widom_fit.json", &doc)?;
    }
    emit(stdout, &doc)
}

fn determinant_json(kind: &str, check: &DeterminantCheck) -> Value {
    json!({
        "kind": kind,
        "block_sizes": check.block_sizes,
        "excess": check.excess,
        "expected": check.expected,
        "fit": check.fit,
    })
}

fn szego_cmd(
    args: &SpecArgs,
    order: usize,
    sizes: &SizeList,
    out: Option<&Path>,
    tol: &Tolerances,
    stdout: &mut dyn Write,
) -> Result<()> {
    let source = Source::from_args(args)?;
    let largest = *sizes.0.last().expect("size lists are never empty");
    let n = args.n.or(match source {
        Source::Eta(_) => Some(8 * largest),
        Source::File(_) => None,
    });
    let spec = source.build(n, tol)?;
    let hash = config_hash("szego", Some(&source), json!({ "n": n, "order": order, "sizes": sizes.0 }), tol);
    let coeffs = szego_coefficients(&spec, order)?;
    let determinant = if classify_with(&spec, tol)?.is_regular() {
        determinant_json("szego", &szego_det_check(&spec, &sizes.0)?)
    } else {
        determinant_json("widom", &widom_det_check(&spec, &sizes.0)?)
    };
    let doc = pretty(&json!({
        "config": hash,
        "singular": coeffs.singular,
        "c0": coeffs.c0(),
        "lower_bound": szego_lower_bound(&coeffs),
        "tail_estimate": coeffs.tail_estimate,
        "coefficients": coeffs.coefficients,
        "determinant": determinant,
    }));
    if let Some(dir) = out {
        write_file(dir, "szego.json", &doc)?;
    }
    emit(stdout, &doc)
}

fn area_law_cmd(
    eta: f64,
    n: usize,
    spec_path: Option<&Path>,
    sizes: &SizeList,
    out: Option<&Path>,
    tol: &Tolerances,
    stdout: &mut dyn Write,
) -> Result<()> {
    let (source, spec) = match spec_path {
        Some(path) => {
            let doc = SpecDocument::load(path)?;
            let spec = doc.build(tol)?;
            (Source::File(doc), spec)
        }
        None => {
            let chain = build_eta_chain_with(EtaChainParams { eta, n }, tol)?;
            (Source::Eta(eta), build_separable(&[&chain, &chain])?)
        }
    };
    // Only gapped product couplings have a theorem behind them.
    let reference = match &source {
        Source::Eta(_) => classify(&build_eta_chain_with(EtaChainParams { eta, n }, tol)?)?.is_regular(),
        Source::File(_) => false,
    };
    let hash = config_hash("area-law", Some(&source), json!({ "n": n, "sizes": sizes.0 }), tol);
    let rows = area_law_2d(&spec, &sizes.0)?;
    let doc = pretty(&json!({
        "config": hash,
        "reference": if reference { "area law" } else { "no reference value" },
        "rows": rows,
    }));
    if let Some(dir) = out {
        let mut csv = formats::provenance(&hash);
        csv.push_str("n,S,S_per_boundary_site\n");
        for r in &rows {
            csv.push_str(&format!("{},{},{}\n", r.n, num(r.entropy), num(r.per_boundary_site)));
        }
        write_file(dir, "area_law.csv", &csv)?;
        write_file(dir, "area_law.json", &doc)?;
    }
    emit(stdout, &doc)
}
