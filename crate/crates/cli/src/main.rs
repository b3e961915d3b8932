mod grid;
mod report;

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crossnorm::bipartite::{random_density, random_pure, schmidt_decompose, Shape};
use crossnorm::cross_norm::{
    lower_bound_realignment, lower_bound_witness, pi_bounds, pure_pi_norm, BoundsConfig,
};
use crossnorm::injective::g_norm_seesaw;
use crossnorm::json::{self as codec, State};
use crossnorm::separability::gallery;
use crossnorm::separability::{
    build_witness_en, classify, ppt_oracle, witness_check, ClassifyConfig, Evidence, Verdict,
};
use crossnorm::truncation::{self, Background, BlockFamily};
use crossnorm::{Error, SeeSawConfig};

use report::{input_digest, Envelope};

#[derive(Parser)]
#[command(
    name = "crossnorm",
    version,
    about = "Certified bounds on cross norms of bipartite operators"
)]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Seed for every randomized computation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// See-saw restarts.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Relative stall tolerance of the see-saw iterations.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// See-saw iteration cap per restart.
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Write CSV output here instead of stdout.
    #[arg(long, global = true)]
    csv_out: Option<PathBuf>,
    /// Leave timestamps and wall time out of reports.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Comma-separated bound strategies to run (default: all).
    #[arg(long, global = true, value_delimiter = ',')]
    strategies: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Projective and Hermitian norm bounds with certificates.
    Bounds { path: PathBuf },
    /// Separability verdict with a witness or product-mixture certificate.
    Classify { path: PathBuf },
    /// Injective norm bounds.
    Gnorm { path: PathBuf },
    /// Witness built from the first N Schmidt pairs of a vector state.
    Witness {
        path: PathBuf,
        /// Number of Schmidt pairs (default: the Schmidt rank).
        #[arg(long)]
        n: Option<usize>,
        /// Also write the witness on its own.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Write a named state as JSON.
    Gallery {
        #[command(subcommand)]
        state: GalleryState,
    },
    /// Parameter sweeps written as CSV.
    Sweep {
        #[command(subcommand)]
        family: SweepFamily,
    },
}

#[derive(Subcommand)]
enum GalleryState {
    /// Maximally entangled state on d×d.
    MaxEntangled {
        #[arg(long)]
        d: usize,
        /// Emit the vector instead of the density.
        #[arg(long)]
        vector: bool,
    },
    /// p |Φ_d⟩⟨Φ_d| + (1 - p) I / d².
    Isotropic {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        d: usize,
    },
    /// Pure state with the given Schmidt coefficients.
    PureSchmidt {
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<f64>,
        /// Rescale the coefficients to unit ℓ² norm first.
        #[arg(long)]
        normalize: bool,
    },
    /// Uniform mixture of k random product states; needs --seed.
    RandomSeparable {
        #[arg(long)]
        dh: usize,
        #[arg(long)]
        dj: usize,
        #[arg(long)]
        k: usize,
    },
    /// Random density; needs --seed.
    RandomDensity {
        #[arg(long)]
        dh: usize,
        #[arg(long)]
        dj: usize,
    },
    /// Random unit vector; needs --seed.
    RandomPure {
        #[arg(long)]
        dh: usize,
        #[arg(long)]
        dj: usize,
    },
    /// Unit vector with coefficients proportional to 1/l.
    TruncatedL2 {
        #[arg(long)]
        n: usize,
    },
    /// Dense truncation of the block family w = 2^-l, m = 4^l.
    BlockFamily {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum SweepFamily {
    /// Columns p, witness_lower, realignment_lower, ppt_min_eigenvalue, verdict.
    Isotropic {
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Grid `start:stop:step` or a comma list.
        #[arg(long)]
        p: String,
    },
    /// Columns N, lemosd_bound, witness_bound, dense_pi_lower.
    Divergence {
        #[arg(long, default_value = "1:3")]
        n: String,
    },
    /// Columns N, pure_bound, mixing_bound for the 1/l truncation mixed
    /// with the maximally mixed state at weight p.
    L2 {
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(m) => Failure::Internal(m),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn seesaw(opts: &Options) -> Result<SeeSawConfig, Failure> {
    let d = SeeSawConfig::default();
    let cfg = SeeSawConfig {
        restarts: opts.restarts.unwrap_or(d.restarts),
        max_iters: opts.max_iters.unwrap_or(d.max_iters),
        tol: opts.tol.unwrap_or(d.tol),
        seed: opts.seed.unwrap_or(d.seed),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn bounds_config(opts: &Options) -> Result<BoundsConfig, Failure> {
    let mut cfg = BoundsConfig::with_seed(opts.seed.unwrap_or(0));
    cfg.seesaw = seesaw(opts)?;
    cfg.strategies = opts.strategies.clone();
    Ok(cfg)
}

fn config_echo(opts: &Options) -> Result<Value, Failure> {
    let s = seesaw(opts)?;
    Ok(json!({
        "seed": s.seed,
        "restarts": s.restarts,
        "max_iters": s.max_iters,
        "tol": s.tol,
        "strategies": opts.strategies,
    }))
}

fn required_seed(opts: &Options) -> Result<u64, Failure> {
    opts.seed
        .ok_or_else(|| Failure::Input("--seed is required for random states".into()))
}

fn load(path: &Path) -> Result<State, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    codec::parse_state(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(target: Option<&Path>, body: &str) -> Outcome {
    match target {
        Some(p) => fs::write(p, body)
            .map_err(|e| Failure::Internal(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn emit_json(opts: &Options, v: &Value) -> Outcome {
    let mut body = serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))?;
    body.push('\n');
    write_out(opts.json_out.as_deref(), &body)
}

fn run_report(opts: &Options, command: &Command) -> Outcome {
    let env = Envelope::start(!opts.no_timestamp);
    let (name, path) = match command {
        Command::Bounds { path } => ("bounds", path),
        Command::Classify { path } => ("classify", path),
        Command::Gnorm { path } => ("gnorm", path),
        Command::Witness { path, .. } => ("witness", path),
        _ => unreachable!("not a report command"),
    };
    let state = load(path)?;
    let op = state.operator();
    let result = match command {
        Command::Bounds { .. } => codec::norm_bounds_value(&pi_bounds(&op, &bounds_config(opts)?)?),
        Command::Classify { .. } => {
            let mut cfg = ClassifyConfig::with_seed(opts.seed.unwrap_or(0));
            cfg.bounds = bounds_config(opts)?;
            let cl = classify(&op, &cfg)?;
            let bound = match &cl.evidence {
                Evidence::Witness { expectation, .. } => json!({"side": "lower", "value": expectation}),
                Evidence::Mixture(d) => json!({"side": "upper", "value": d.hermitian_weight()}),
                Evidence::Bounds(b) => json!({"side": "lower", "value": b.pi_lower.value}),
            };
            let mut v = codec::classification_value(&cl);
            v["bound"] = bound;
            v
        }
        Command::Gnorm { .. } => codec::g_norm_value(&g_norm_seesaw(&op, &seesaw(opts)?)?),
        Command::Witness { n, witness_out, .. } => {
            let State::Vector(v) = &state else {
                return Err(Failure::Input("witness needs a vector state".into()));
            };
            let n = n.unwrap_or(schmidt_decompose(v)?.rank());
            let w = build_witness_en(v, n)?;
            let check = witness_check(&w, Some(&op));
            let wv = codec::witness_value(&w);
            if let Some(p) = witness_out {
                let mut body = serde_json::to_string_pretty(&wv).expect("witness encodes");
                body.push('\n');
                write_out(Some(p), &body)?;
            }
            json!({
                "n": n,
                "pure_pi_norm": pure_pi_norm(v)?,
                "check": check,
                "witness": wv,
            })
        }
        _ => unreachable!(),
    };
    let input = input_digest(&path.display().to_string(), &state);
    emit_json(opts, &env.finish(name, input, config_echo(opts)?, result))
}

fn run_gallery(opts: &Options, state: &GalleryState) -> Outcome {
    let s = match state {
        GalleryState::MaxEntangled { d, vector: true } => State::Vector(gallery::max_entangled_vector(*d)?),
        GalleryState::MaxEntangled { d, vector: false } => State::Operator(gallery::max_entangled(*d)?),
        GalleryState::Isotropic { p, d } => State::Operator(gallery::isotropic(*p, *d)?),
        GalleryState::PureSchmidt { coeffs, normalize } => State::Vector(if *normalize {
            truncation::truncated_pure(coeffs)?
        } else {
            gallery::pure_with_schmidt(coeffs)?
        }),
        GalleryState::RandomSeparable { dh, dj, k } => State::Operator(
            gallery::random_separable(Shape::new(*dh, *dj)?, *k, required_seed(opts)?)?.0,
        ),
        GalleryState::RandomDensity { dh, dj } => {
            State::Operator(random_density(Shape::new(*dh, *dj)?, required_seed(opts)?))
        }
        GalleryState::RandomPure { dh, dj } => {
            State::Vector(random_pure(Shape::new(*dh, *dj)?, required_seed(opts)?))
        }
        GalleryState::TruncatedL2 { n } => State::Vector(truncation::truncated_l2_not_l1(*n)?.0),
        GalleryState::BlockFamily { n } => State::Operator(BlockFamily::dyadic_preset(*n).dense(*n)?),
    };
    let mut body = codec::state_to_string(&s);
    body.push('\n');
    write_out(opts.json_out.as_deref(), &body)
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Separable => "separable",
        Verdict::Entangled => "entangled",
        Verdict::Undecided => "undecided",
    }
}

fn run_sweep(opts: &Options, family: &SweepFamily) -> Outcome {
    let csv = match family {
        SweepFamily::Isotropic { d, p } => {
            let ps = grid::real_grid(p).map_err(Failure::Input)?;
            let ss = seesaw(opts)?;
            let mut cfg = ClassifyConfig::with_seed(opts.seed.unwrap_or(0));
            cfg.bounds = bounds_config(opts)?;
            let mut out = String::from("p,witness_lower,realignment_lower,ppt_min_eigenvalue,verdict\n");
            for p in ps {
                let rho = gallery::isotropic(p, *d)?;
                let w = lower_bound_witness(&rho, &ss)?.value;
                let r = lower_bound_realignment(&rho);
                let ppt = ppt_oracle(&rho)?.min_eigenvalue;
                let v = classify(&rho, &cfg)?.verdict;
                out.push_str(&format!("{p},{w},{r},{ppt},{}\n", verdict_name(v)));
            }
            out
        }
        SweepFamily::Divergence { n } => {
            let ns = grid::int_grid(n).map_err(Failure::Input)?;
            let max = ns.iter().copied().max().unwrap_or(1);
            let fam = BlockFamily::dyadic_preset(max);
            truncation::sweep_csv(&truncation::divergence_sweep(&fam, &ns, &seesaw(opts)?)?)
        }
        SweepFamily::L2 { n, p } => {
            let ns = grid::int_grid(n).map_err(Failure::Input)?;
            let mut out = String::from("N,pure_bound,mixing_bound\n");
            for n in ns {
                let (v, pure) = truncation::truncated_l2_not_l1(n)?;
                let mix = truncation::mixing_lower_bound(*p, &v, &Background::MaximallyMixed, n)?;
                out.push_str(&format!("{n},{pure},{}\n", mix.value));
            }
            out
        }
    };
    write_out(opts.csv_out.as_deref(), &csv)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gallery { state } => run_gallery(&cli.opts, state),
        Command::Sweep { family } => run_sweep(&cli.opts, family),
        other => run_report(&cli.opts, other),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match panic::catch_unwind(AssertUnwindSafe(|| run(&cli))) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure::Input(m))) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Ok(Err(Failure::Internal(m))) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
