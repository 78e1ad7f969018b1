use clap::{Args, Parser, Subcommand};
use kwlab::flow::FlowConfig;
use kwlab::operator::Background;
use kwlab::report::{self, Status, SuiteOptions};
use kwlab::spectral::ExclusionCase;
use kwlab::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "kwlab", version, about = "Numerical checks for the Kapustin-Witten operator, model solutions and flow")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report file for `verify`, output directory for `spectral` and `flow`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Multiplies every default tolerance.
    #[arg(long, global = true, default_value_t = 1.0)]
    tolerance_scale: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: algebra, clifford, model, operator, spectral, flow-smoke or all.
    Verify(VerifyArgs),
    #[command(subcommand)]
    Spectral(SpectralCmd),
    #[command(subcommand)]
    Flow(FlowCmd),
}

#[derive(Args)]
struct VerifyArgs {
    suite: String,
    /// model: emit the property map of this m only.
    #[arg(long)]
    m: Option<u32>,
    /// model: random samples per property.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// operator: trivial, nahm or model:<m>.
    #[arg(long)]
    background: Option<String>,
    /// operator: random evaluation points per background.
    #[arg(long, default_value_t = 334)]
    points: usize,
}

#[derive(Subcommand)]
enum SpectralCmd {
    /// Hardy ratios over the built-in test families.
    Hardy,
    /// Lowest Dirichlet eigenpair on the hemisphere.
    Hemisphere {
        #[arg(long, default_value_t = 2000)]
        mesh: usize,
    },
    /// μ_min and the excluded λ-interval for one reduced case.
    Exclusion {
        /// b3ct, case2 or case3.
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Admissibility of the radial system at (λ, k).
    Ode {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
    },
}

#[derive(Subcommand)]
enum FlowCmd {
    /// Integrate the flow described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn usage(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownSuite(_) | Error::Config { .. } | Error::Cfl { .. } | Error::InvalidArgument(_) | Error::MeshTooCoarse { .. }
    )
}

fn fail(e: Error) -> ExitCode {
    eprintln!("kwlab: {e}");
    if usage(&e) {
        if let Error::UnknownSuite(_) = e {
            eprintln!("suites: {}", report::SUITES.join(", "));
        }
        ExitCode::from(2)
    } else {
        ExitCode::from(1)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn verify(g: &Global, a: &VerifyArgs) -> Result<bool, Error> {
    if a.suite == "model" {
        if let Some(m) = a.m {
            let props = report::model_properties(m, a.samples, g.seed)?;
            for (name, r) in &props.0 {
                eprintln!("{} {name} {:e}", if r.pass { "PASS" } else { "FAIL" }, r.worst_violation);
            }
            emit(&json(&props), g.out.as_deref())?;
            return Ok(props.all_pass());
        }
    }
    let opts = SuiteOptions {
        seed: g.seed,
        tolerance_scale: g.tolerance_scale,
        points: a.points,
        background: a.background.as_deref().map(Background::parse).transpose()?,
        model_m: a.m,
        samples: a.samples,
    };
    let r = report::run_suite(&a.suite, &opts)?;
    for c in &r.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flagged => "FLAG",
        };
        eprintln!("{tag} {} {:e} (tol {:e})", c.id, c.metric, c.tolerance);
    }
    let flagged: Vec<&str> = r.flagged().map(|c| c.id.as_str()).collect();
    if !flagged.is_empty() {
        eprintln!("flagged discrepancies: {}", flagged.join(", "));
    }
    eprintln!("{} checks, {} failed, wall time {:.2} s", r.checks.len(), r.failures().count(), r.wall_time);
    emit(&r.to_json(), g.out.as_deref())?;
    Ok(r.passed())
}

fn spectral(g: &Global, cmd: &SpectralCmd) -> Result<bool, Error> {
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    match cmd {
        SpectralCmd::Hardy => {
            let r = report::spectral_hardy_cmd(&dir)?;
            println!("{}", json(&r));
            Ok(r.all_pass)
        }
        SpectralCmd::Hemisphere { mesh } => {
            let h = report::spectral_hemisphere_cmd(*mesh, &dir)?;
            println!("eigenvalue {} second {} distance_to_cos {:e}", h.eigenvalue, h.second, h.distance_to_cos);
            Ok(true)
        }
        SpectralCmd::Exclusion { case, m } => {
            let r = report::spectral_exclusion_cmd(ExclusionCase::parse(case, *m)?, &dir)?;
            println!("{}", json(&r));
            Ok(r.covers_zero_to_three_halves)
        }
        SpectralCmd::Ode { lambda, k } => {
            let o = report::spectral_ode_cmd(*lambda, *k, &dir)?;
            println!("{}", json(&o.admissibility));
            Ok(true)
        }
    }
}

fn flow(g: &Global, cmd: &FlowCmd) -> Result<bool, Error> {
    let FlowCmd::Run { config } = cmd;
    let text = std::fs::read_to_string(config).map_err(|e| Error::Config {
        field: "<file>".into(),
        msg: format!("{}: {e}", config.display()),
    })?;
    let cfg = FlowConfig::from_json(&text)?;
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let s = report::flow_cmd(&cfg, &dir)?;
    println!("{}", json(&s));
    let ok = matches!(s.status, kwlab::flow::FlowStatus::Completed)
        && s.monotone
        && s.energy_identity_max_relerr <= 1e-3 * g.tolerance_scale;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("KWLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second initialization can only fail if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    if !(cli.global.tolerance_scale > 0.0) {
        eprintln!("kwlab: --tolerance-scale must be positive");
        return ExitCode::from(2);
    }
    let res = match &cli.command {
        Command::Verify(a) => verify(&cli.global, a),
        Command::Spectral(c) => spectral(&cli.global, c),
        Command::Flow(c) => flow(&cli.global, c),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => fail(e),
    }
}
