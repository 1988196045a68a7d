//! `groupfb`: validate groups, analyse and design filter banks on
//! semi-direct products, and run sampling demos. Reports are JSON (or CSV
//! with `--format csv`); identical inputs give byte-identical reports.
//!
//! Exit codes: 0 success, 2 invalid input, 3 mathematical rejection.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use groupfb::crystal::ModelSummary;
use groupfb::group::AxiomReport;
use groupfb::io::{parse_crystal, parse_filters, parse_group, parse_sampling, GroupSummary};
use groupfb::polyphase::{generator_matrix, Bounds};
use groupfb::{
    classify_pair, design_dual_pseudoinverse, dual_family, frame_bounds, verify_pr, CrystalModel,
    CrystalSpec, DemoReport, Error, FrameReport, GSignal, GramBounds, PrVerdict,
    Tolerances, C64,
};

use report::{coords, to_json, Csv, Envelope, InputDigest};

#[derive(Parser)]
#[command(name = "groupfb", version, about = "Filter banks and sampling on semi-direct product groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Perfect-reconstruction tolerance (absolute).
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_pr: f64,

    /// Frame tolerance, relative to the upper bound.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_frame: f64,

    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    #[arg(long, global = true, default_value_t = 100)]
    trials: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Average,
    Pointwise,
}

#[derive(Subcommand)]
enum Command {
    /// Group specifications.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Filter banks.
    #[command(subcommand)]
    Fb(FbCmd),
    /// Sampling problems and demos.
    #[command(subcommand)]
    Sample(SampleCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Check the group axioms and the action exhaustively.
    Validate {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Subcommand)]
enum FbCmd {
    /// Frame bounds and classification of a bank.
    Analyze {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        filters: PathBuf,
    },
    /// Perfect-reconstruction check of an analysis/synthesis pair.
    VerifyPr {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        filters: PathBuf,
    },
    /// Synthesis bank from the pseudo-inverse (or a dual-family member).
    DesignDual {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        filters: PathBuf,
    },
}

#[derive(Subcommand)]
enum SampleCmd {
    /// Reconstruction kit for a sampling problem.
    Build {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Sampling demo on a crystal model.
    DemoCrystal {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Average)]
        mode: Mode,
        /// Number of channels when the spec gives no probes.
        #[arg(long = "K")]
        k: Option<usize>,
    },
    /// Sampling demo on the dihedral model 2Z ⋊ {±1} of side q.
    DemoDihedral {
        #[arg(long, default_value_t = 8)]
        q: usize,
        #[arg(long = "K")]
        k: Option<usize>,
        #[arg(long, value_enum, default_value_t = Mode::Average)]
        mode: Mode,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn from_error(context: &str, e: Error) -> Self {
        let message = if context.is_empty() {
            e.to_string()
        } else {
            format!("{context}: {e}")
        };
        Self {
            code: if e.is_rejection() { 3 } else { 2 },
            message,
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Output {
    command: &'static str,
    status: &'static str,
    code: u8,
    seed: Option<u64>,
    json: serde_json::Value,
    csv: Option<Csv>,
}

#[derive(Serialize)]
struct Rejection {
    error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    worst_gamma: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b_h: Option<f64>,
}

fn rejection(command: &'static str, e: Error) -> Output {
    let mut r = Rejection {
        error: e.to_string(),
        worst_gamma: None,
        lambda_min: None,
        a_h: None,
        b_h: None,
    };
    if let Error::SamplesInsufficient {
        gamma,
        lambda_min,
        a_h,
        b_h,
    } = e
    {
        r.worst_gamma = Some(gamma);
        r.lambda_min = Some(lambda_min);
        r.a_h = Some(a_h);
        r.b_h = Some(b_h);
    }
    Output {
        command,
        status: "rejected",
        code: 3,
        seed: None,
        json: json(&r),
        csv: None,
    }
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report types serialize")
}

struct Inputs {
    digest: InputDigest,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Run<String> {
        let bytes = fs::read(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
        self.digest.add(&bytes);
        String::from_utf8(bytes).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
    }
}

fn ctx(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::from_error(&path.display().to_string(), e)
}

/// Splits math rejections (reported, exit 3) from hard failures (exit 2).
fn split<T>(command: &'static str, r: groupfb::Result<T>, path: &Path) -> Run<Result<T, Output>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e) if e.is_rejection() => Ok(Err(rejection(command, e))),
        Err(e) => Err(ctx(path)(e)),
    }
}

fn values(signals: &[GSignal]) -> Vec<Vec<C64>> {
    signals.iter().map(|s| s.values().to_vec()).collect()
}

fn filters_csv(signals: &[GSignal]) -> Csv {
    let mut csv = Csv::new(&["filter", "n", "h", "re", "im"]);
    for (k, s) in signals.iter().enumerate() {
        for (i, v) in s.values().iter().enumerate() {
            let g = s.group().elem(i);
            csv.row(vec![k.into(), g.n.into(), g.h.into(), v.re.into(), v.im.into()]);
        }
    }
    csv
}

#[derive(Serialize)]
struct ValidateResult {
    group: GroupSummary,
    axioms: AxiomReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    crystal: Option<ModelSummary>,
}

fn group_validate(inputs: &mut Inputs, spec: &Path) -> Run<Output> {
    let text = inputs.read(spec)?;
    let src = parse_group(&text).map_err(ctx(spec))?;
    let axioms = src.group.verify_axioms().map_err(ctx(spec))?;
    let mut csv = Csv::new(&["order_n", "order_h", "order_g", "associativity_checks", "homomorphism_checks"]);
    csv.row(vec![
        axioms.order_n.into(),
        axioms.order_h.into(),
        axioms.order_g.into(),
        axioms.associativity_checks.into(),
        axioms.homomorphism_checks.into(),
    ]);
    let result = ValidateResult {
        group: GroupSummary::of(&src.group),
        axioms,
        crystal: src.crystal.as_ref().map(CrystalModel::summary),
    };
    Ok(Output {
        command: "group validate",
        status: "ok",
        code: 0,
        seed: None,
        json: json(&result),
        csv: Some(csv),
    })
}

fn fb_analyze(inputs: &mut Inputs, spec: &Path, filters: &Path, tol: &Tolerances) -> Run<Output> {
    let group = parse_group(&inputs.read(spec)?).map_err(ctx(spec))?.group;
    let set = parse_filters(&inputs.read(filters)?, &group).map_err(ctx(filters))?;
    // the analysed system {T_n f_k}: given generators, or involuted analysis filters
    let f: Vec<GSignal> = match (&set.generators, &set.analysis) {
        (Some(g), _) => g.clone(),
        (None, Some(a)) => a.iter().map(GSignal::involution).collect(),
        (None, None) => return Err(Failure::invalid(format!("{}: need \"analysis\" or \"generators\"", filters.display()))),
    };
    let report: FrameReport = match &set.synthesis {
        Some(g) => classify_pair(&f, g, tol),
        None => frame_bounds(&f, tol),
    }
    .map_err(ctx(filters))?;
    let h = generator_matrix(&f).map_err(ctx(filters))?;
    let mut csv = Csv::new(&["gamma", "gamma_coords", "row", "col", "re", "im"]);
    for (gi, m) in h.matrices().iter().enumerate() {
        let c = coords(&group.n().coords(gi));
        for r in 0..m.nrows() {
            for col in 0..m.ncols() {
                let v = m[(r, col)];
                csv.row(vec![gi.into(), c.clone().into(), r.into(), col.into(), v.re.into(), v.im.into()]);
            }
        }
    }
    Ok(Output {
        command: "fb analyze",
        status: "ok",
        code: 0,
        seed: None,
        json: json(&report),
        csv: Some(csv),
    })
}

fn fb_verify_pr(inputs: &mut Inputs, spec: &Path, filters: &Path, tol: &Tolerances) -> Run<Output> {
    let group = parse_group(&inputs.read(spec)?).map_err(ctx(spec))?.group;
    let set = parse_filters(&inputs.read(filters)?, &group).map_err(ctx(filters))?;
    let (Some(a), Some(s)) = (&set.analysis, &set.synthesis) else {
        return Err(Failure::invalid(format!(
            "{}: need both \"analysis\" and \"synthesis\"",
            filters.display()
        )));
    };
    let verdict: PrVerdict = verify_pr(a, s, tol).map_err(ctx(filters))?;
    let mut csv = Csv::new(&["pr", "max_dev", "worst_gamma", "worst_row", "worst_col", "tolerance"]);
    csv.row(vec![
        verdict.pr.into(),
        verdict.max_dev.into(),
        coords(&verdict.worst_gamma).into(),
        verdict.worst_entry.0.into(),
        verdict.worst_entry.1.into(),
        verdict.tolerance.into(),
    ]);
    Ok(Output {
        command: "fb verify-pr",
        status: if verdict.pr { "ok" } else { "pr_failed" },
        code: if verdict.pr { 0 } else { 3 },
        seed: None,
        json: json(&verdict),
        csv: Some(csv),
    })
}

#[derive(Serialize)]
struct DesignResult {
    method: &'static str,
    synthesis: Vec<Vec<C64>>,
    pr: PrVerdict,
    frame: FrameReport,
}

fn fb_design_dual(inputs: &mut Inputs, spec: &Path, filters: &Path, tol: &Tolerances) -> Run<Output> {
    const CMD: &str = "fb design-dual";
    let group = parse_group(&inputs.read(spec)?).map_err(ctx(spec))?.group;
    let set = parse_filters(&inputs.read(filters)?, &group).map_err(ctx(filters))?;
    let analysis = match (&set.analysis, &set.generators) {
        (Some(a), _) => a.clone(),
        (None, Some(g)) => g.iter().map(GSignal::involution).collect(),
        (None, None) => return Err(Failure::invalid(format!("{}: need \"analysis\" or \"generators\"", filters.display()))),
    };
    let (method, designed) = match &set.dual_param {
        Some(u) => ("dual_family", dual_family(&analysis, u, tol)),
        None => ("pseudo_inverse", design_dual_pseudoinverse(&analysis, tol)),
    };
    let synthesis = match split(CMD, designed, filters)? {
        Ok(s) => s,
        Err(rejected) => return Ok(rejected),
    };
    let pr = verify_pr(&analysis, &synthesis, tol).map_err(ctx(filters))?;
    let f: Vec<GSignal> = analysis.iter().map(GSignal::involution).collect();
    let frame = classify_pair(&f, &synthesis, tol).map_err(ctx(filters))?;
    let csv = filters_csv(&synthesis);
    Ok(Output {
        command: CMD,
        status: "ok",
        code: 0,
        seed: None,
        json: json(&DesignResult {
            method,
            synthesis: values(&synthesis),
            pr,
            frame,
        }),
        csv: Some(csv),
    })
}

#[derive(Serialize)]
struct BuildResult {
    mode: &'static str,
    channels: usize,
    dim: usize,
    riesz: GramBounds,
    bounds: Bounds,
    frame: GramBounds,
    pr: PrVerdict,
    interpolation_deviation: Option<f64>,
    analysis_filters: Vec<Vec<C64>>,
    synthesis_filters: Vec<Vec<C64>>,
    reconstruction_vectors: Vec<Vec<C64>>,
}

fn sample_build(inputs: &mut Inputs, spec: &Path, seed: u64, tol: &Tolerances) -> Run<Output> {
    const CMD: &str = "sample build";
    let input = parse_sampling(&inputs.read(spec)?, seed, tol).map_err(ctx(spec))?;
    let p = &input.problem;
    let kit = match split(CMD, p.build_reconstruction(input.dual_param.as_ref(), tol), spec)? {
        Ok(k) => k,
        Err(rejected) => return Ok(rejected),
    };
    let interpolation_deviation = if p.channels() == p.group().order_h() {
        Some(p.interpolation_deviation(&kit).map_err(ctx(spec))?)
    } else {
        None
    };
    let mut csv = Csv::new(&["k", "site", "re", "im"]);
    for (k, c) in kit.vectors.iter().enumerate() {
        for (s, v) in c.iter().enumerate() {
            csv.row(vec![k.into(), s.into(), v.re.into(), v.im.into()]);
        }
    }
    let result = BuildResult {
        mode: p.probes().mode(),
        channels: p.channels(),
        dim: p.rep().dim(),
        riesz: p.riesz_bounds(),
        bounds: kit.bounds.clone(),
        frame: kit.frame,
        pr: kit.pr.clone(),
        interpolation_deviation,
        analysis_filters: values(p.filters()),
        synthesis_filters: values(&kit.synthesis),
        reconstruction_vectors: kit.vectors.iter().map(|c| c.iter().copied().collect()).collect(),
    };
    Ok(Output {
        command: CMD,
        status: "ok",
        code: 0,
        seed: Some(seed),
        json: json(&result),
        csv: Some(csv),
    })
}

#[derive(Serialize)]
struct DemoParams {
    mode: &'static str,
    channels: Option<usize>,
    trials: usize,
    seed: u64,
}

struct Demo {
    spec: CrystalSpec,
    mode: Mode,
    k: Option<usize>,
}

fn run_demo(
    command: &'static str,
    inputs: &mut Inputs,
    Demo { spec, mode, k }: Demo,
    cli: &Cli,
    tol: &Tolerances,
    origin: &Path,
) -> Run<Output> {
    let model = CrystalModel::new(spec).map_err(ctx(origin))?;
    inputs.digest.add(&to_json(&DemoParams {
        mode: match mode {
            Mode::Average => "average",
            Mode::Pointwise => "pointwise",
        },
        channels: k,
        trials: cli.trials,
        seed: cli.seed,
    }));
    let r = match mode {
        Mode::Average => model.demo_average(k, cli.trials, cli.seed, tol),
        Mode::Pointwise => model.demo_pointwise(k, cli.trials, cli.seed, tol),
    };
    let report: DemoReport = match split(command, r, origin)? {
        Ok(r) => r,
        Err(mut rejected) => {
            rejected.seed = Some(cli.seed);
            return Ok(rejected);
        }
    };
    let mut csv = Csv::new(&["trial", "relative_error"]);
    for (i, e) in report.errors.per_trial.iter().enumerate() {
        csv.row(vec![i.into(), (*e).into()]);
    }
    Ok(Output {
        command,
        status: "ok",
        code: 0,
        seed: Some(cli.seed),
        json: json(&report),
        csv: Some(csv),
    })
}

fn dispatch(cli: &Cli, tol: &Tolerances) -> Run<Output> {
    let mut inputs = Inputs {
        digest: InputDigest::new(),
    };
    let out = match &cli.command {
        Command::Group(GroupCmd::Validate { spec }) => group_validate(&mut inputs, spec)?,
        Command::Fb(FbCmd::Analyze { spec, filters }) => fb_analyze(&mut inputs, spec, filters, tol)?,
        Command::Fb(FbCmd::VerifyPr { spec, filters }) => fb_verify_pr(&mut inputs, spec, filters, tol)?,
        Command::Fb(FbCmd::DesignDual { spec, filters }) => fb_design_dual(&mut inputs, spec, filters, tol)?,
        Command::Sample(SampleCmd::Build { spec }) => sample_build(&mut inputs, spec, cli.seed, tol)?,
        Command::Sample(SampleCmd::DemoCrystal { spec, mode, k }) => {
            let text = inputs.read(spec)?;
            let cs = parse_crystal(&text).map_err(ctx(spec))?;
            let demo = Demo { spec: cs, mode: *mode, k: *k };
            run_demo("sample demo-crystal", &mut inputs, demo, cli, tol, spec)?
        }
        Command::Sample(SampleCmd::DemoDihedral { q, k, mode }) => {
            inputs.digest.add(format!("dihedral q={q}").as_bytes());
            let origin = Path::new("demo-dihedral");
            let demo = Demo { spec: CrystalSpec::dihedral(*q), mode: *mode, k: *k };
            run_demo("sample demo-dihedral", &mut inputs, demo, cli, tol, origin)?
        }
    };
    let digest = inputs.digest.finish();
    Ok(Output {
        json: serde_json::to_value(Envelope {
            tool: "groupfb",
            version: env!("CARGO_PKG_VERSION"),
            command: out.command,
            status: out.status,
            input_digest: digest,
            tolerances: *tol,
            seed: out.seed,
            result: out.json,
        })
        .expect("envelope serializes"),
        ..out
    })
}

fn configure_threads() -> Run<()> {
    let Ok(v) = std::env::var("GROUPFB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::invalid(format!("GROUPFB_THREADS must be a non-negative integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::invalid(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Run<u8> {
    configure_threads()?;
    for (name, v) in [("--tol-pr", cli.tol_pr), ("--tol-frame", cli.tol_frame)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Failure::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let tol = Tolerances {
        pr: cli.tol_pr,
        frame: cli.tol_frame,
    };
    let out = dispatch(cli, &tol)?;
    let bytes = match (cli.format, out.csv) {
        (Format::Csv, Some(csv)) if out.code == 0 || out.status == "pr_failed" => csv.into_bytes(),
        _ => to_json(&out.json),
    };
    match &cli.out {
        Some(path) => fs::write(path, &bytes).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| Failure::invalid(format!("stdout: {e}")))?;
        }
    }
    if out.code == 3 {
        eprintln!("rejected: {}", out.json["result"]["error"].as_str().unwrap_or(out.status));
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
