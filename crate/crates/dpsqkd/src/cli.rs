//! Command-line front end: parameter resolution (flags over `key=value`
//! config files over receiver defaults), sweep orchestration, CSV and SVG
//! emission.
//!
//! Exit codes: 0 success, 2 bad flags, 3 domain validation failure,
//! 4 beyond-cutoff / no result, 1 I/O failure.
//!
//! Every emitted file begins with comment lines recording the version, the
//! fully-resolved parameter set, and the column schema. Output bytes are a
//! pure function of the flags (wall-clock timing goes to stderr only), so
//! identical invocations produce identical files.

use crate::collision;
use crate::model::{
    self, ChannelModel, ConfigFragment, ErrorCorrection, SourceKind, SourceModel,
    DEFAULT_BASELINE_ERROR,
};
use crate::montecarlo::{self, Attack, AttackTallies, SimConfig};
use crate::optimize::{self, OptimizeError, SweepProtocol, SweepSpec};
use crate::rates;
use crate::svg;
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const EXIT_OK: i32 = 0;
const EXIT_IO: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_DOMAIN: i32 = 3;
const EXIT_NO_RESULT: i32 = 4;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
    NoResult(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::NoResult(_) => EXIT_NO_RESULT,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::NoResult(m) | CliError::Io(m) => m,
        }
    }
}

impl From<model::ModelError> for CliError {
    fn from(e: model::ModelError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<rates::RateError> for CliError {
    fn from(e: rates::RateError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<montecarlo::SimError> for CliError {
    fn from(e: montecarlo::SimError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<OptimizeError> for CliError {
    fn from(e: OptimizeError) -> Self {
        match e {
            OptimizeError::BeyondCutoff | OptimizeError::NoRateAtZeroLoss => {
                CliError::NoResult(e.to_string())
            }
            OptimizeError::NoFreeParameter => CliError::Usage(e.to_string()),
            OptimizeError::Model(m) => CliError::Domain(m.to_string()),
            OptimizeError::BadSweepSpec(m) => CliError::Usage(m),
        }
    }
}

impl From<collision::CollisionError> for CliError {
    fn from(e: collision::CollisionError) -> Self {
        match e {
            collision::CollisionError::EmptyBin { .. } => CliError::NoResult(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "dpsqkd",
    version,
    about = "Secure-key rates, attack comparisons, and pulse-train simulation for differential-phase-shift QKD"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one operating point (p_click, QBER, secure rate)
    Rate(RateArgs),
    /// Sweep optimized rates over a loss grid and emit CSV
    Sweep(SweepArgs),
    /// Optimize the mean photon number at one loss
    Optimize(OptimizeArgs),
    /// Run the Monte Carlo pulse-train simulator
    Simulate(SimulateArgs),
    /// Cross-check the collision bound against the brute-force surface maximum
    Oracle(OracleArgs),
    /// Emit rate-vs-loss comparison CSVs and SVG charts
    Figures(FiguresArgs),
}

/// Channel and error-correction parameters shared by the analytic
/// subcommands. Values omitted here fall back to the config file, then to
/// the receiver defaults (dark count 1e-5 for the 2-detector DPS receiver,
/// 2e-5 for 4-detector BB84; baseline error 0.01; Shannon-limit error
/// correction).
#[derive(Args, Debug, Default)]
struct ChannelArgs {
    /// Channel loss in dB
    #[arg(long)]
    loss_db: Option<f64>,
    /// Linear channel transmission in (0, 1]; alternative to --loss-db
    #[arg(long, conflicts_with = "loss_db")]
    transmission: Option<f64>,
    /// Per-slot dark count, summed over the receiver's detectors
    #[arg(long)]
    dark_count: Option<f64>,
    /// Baseline error fraction of the system
    #[arg(long)]
    baseline_error: Option<f64>,
    /// Path to a two-column `e f` table of error-correction inefficiency
    #[arg(long)]
    f_ec: Option<PathBuf>,
    /// Plain-text key=value configuration file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RateArgs {
    /// dps | bb84-poisson | bb84-single | dps-seq
    #[arg(long)]
    protocol: Option<String>,
    /// Mean photon number per pulse (ignored for bb84-single)
    #[arg(long)]
    nbar: Option<f64>,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    loss_min: f64,
    #[arg(long, default_value_t = 60.0)]
    loss_max: f64,
    #[arg(long, default_value_t = 1.0)]
    loss_step: f64,
    /// Comma-separated protocol list
    #[arg(long, value_delimiter = ',', default_values_t = ["dps".to_string(), "bb84-poisson".to_string(), "bb84-single".to_string(), "dps-seq".to_string()])]
    protocols: Vec<String>,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    /// dps | bb84-poisson | dps-seq (bb84-single has no free nbar)
    #[arg(long)]
    protocol: Option<String>,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// none | intercept-resend | beamsplitter | beamsplitter-delayed | sequential
    #[arg(long)]
    attack: String,
    /// Block length for the sequential attack
    #[arg(long)]
    k: Option<u32>,
    /// Pulse-train length
    #[arg(long, default_value_t = 1_000_000)]
    pulses: u64,
    /// Mean photon number per pulse
    #[arg(long)]
    nbar: Option<f64>,
    /// RNG seed; echoed in the output
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Write the one-row CSV report here in addition to the summary
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Grid resolution per dimension of the brute-force scan
    #[arg(long, default_value_t = collision::ORACLE_DEFAULT_GRID_POINTS)]
    grid_points: usize,
    /// Half-width of the error-rate bin
    #[arg(long, default_value_t = collision::ORACLE_DEFAULT_E_TOL)]
    e_tol: f64,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FiguresArgs {
    /// Directory for the CSV and SVG outputs
    #[arg(long, default_value = "figures")]
    out_dir: PathBuf,
}

/// Entry point used by `main`: parse `std::env` args and run.
pub fn run_from_env() -> i32 {
    run_from(std::env::args_os())
}

/// Parse and run; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.exit_code() == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match cli.command {
        Command::Rate(args) => cmd_rate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Figures(args) => cmd_figures(args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

/// Channel parameters after merging flags, config file, and defaults.
struct ResolvedChannel {
    loss_db: f64,
    dark_count: f64,
    baseline_error: f64,
    ec: ErrorCorrection,
    config: ConfigFragment,
    ec_label: String,
}

fn load_config(path: Option<&Path>) -> Result<ConfigFragment, CliError> {
    match path {
        None => Ok(ConfigFragment::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", p.display())))?;
            model::parse_config(&text).map_err(CliError::from)
        }
    }
}

fn resolve_channel(
    args: &ChannelArgs,
    default_dark: f64,
    default_mu: f64,
    loss_required: bool,
) -> Result<ResolvedChannel, CliError> {
    let config = load_config(args.config.as_deref())?;
    let loss_db = match (args.loss_db, args.transmission) {
        (Some(l), _) => l,
        (None, Some(t)) => model::transmission_to_loss(t)?,
        (None, None) => match config.loss_db {
            Some(l) => l,
            None if loss_required => {
                return Err(CliError::Usage(
                    "missing channel loss: pass --loss-db or --transmission (or loss_db in --config)"
                        .into(),
                ))
            }
            None => 0.0,
        },
    };
    let dark_count = args.dark_count.or(config.dark_count).unwrap_or(default_dark);
    let baseline_error = args
        .baseline_error
        .or(config.baseline_error)
        .unwrap_or(default_mu);
    let (ec, ec_label) = match args.f_ec.as_deref().map(Path::to_path_buf).or_else(|| {
        config.f_ec.as_ref().map(PathBuf::from)
    }) {
        None => (ErrorCorrection::ShannonLimit, "shannon".to_string()),
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", p.display())))?;
            (
                ErrorCorrection::parse_table(&text)?,
                p.display().to_string(),
            )
        }
    };
    Ok(ResolvedChannel {
        loss_db,
        dark_count,
        baseline_error,
        ec,
        config,
        ec_label,
    })
}

fn resolve_protocol(
    flag: Option<&str>,
    config: &ConfigFragment,
) -> Result<SweepProtocol, CliError> {
    if let Some(name) = flag {
        return name.parse::<SweepProtocol>().map_err(CliError::Usage);
    }
    match config.protocol {
        Some(model::ProtocolKind::Dps) => Ok(SweepProtocol::Dps),
        Some(model::ProtocolKind::DpsSequentialAdversary) => {
            Ok(SweepProtocol::DpsSequentialAdversary)
        }
        Some(model::ProtocolKind::Bb84) => Ok(match config.source {
            Some(SourceKind::IdealSinglePhoton) => SweepProtocol::Bb84SinglePhoton,
            _ => SweepProtocol::Bb84Poisson,
        }),
        None => Err(CliError::Usage(
            "missing protocol: pass --protocol (or protocol in --config)".into(),
        )),
    }
}

/// Comment header shared by every emitted file: version, resolved
/// parameters (sorted by key), column schema.
fn header(command: &str, params: &[(&str, String)], columns: &str) -> String {
    let mut sorted: Vec<&(&str, String)> = params.iter().collect();
    sorted.sort_by_key(|(k, _)| *k);
    let mut h = format!("# dpsqkd v{VERSION}\n# command: {command}\n# params:");
    for (k, v) in sorted {
        let _ = write!(h, " {k}={v}");
    }
    let _ = writeln!(h);
    let _ = writeln!(h, "# columns: {columns}");
    h
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => {
            if let Some(dir) = path.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)
                        .map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
                }
            }
            std::fs::write(path, content)
                .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
        }
    }
}

const SWEEP_COLUMNS: &str = "loss_db,transmission,protocol,source,nbar_opt,p_click,qber,rate";

fn sweep_rows_csv(rows: &[rates::RatePoint]) -> String {
    let mut body = String::new();
    for r in rows {
        let slug = protocol_slug(r.protocol, r.source);
        let _ = writeln!(
            body,
            "{},{},{},{},{},{},{},{}",
            r.loss_db, r.transmission, slug.0, slug.1, r.nbar, r.p_click, r.qber, r.rate
        );
    }
    body
}

fn protocol_slug(
    protocol: model::ProtocolKind,
    source: SourceKind,
) -> (&'static str, &'static str) {
    let p = match protocol {
        model::ProtocolKind::Dps => "dps",
        model::ProtocolKind::Bb84 => "bb84",
        model::ProtocolKind::DpsSequentialAdversary => "dps-seq",
    };
    let s = match source {
        SourceKind::PoissonCoherent => "poisson",
        SourceKind::IdealSinglePhoton => "single",
    };
    (p, s)
}

fn cmd_rate(args: RateArgs) -> Result<(), CliError> {
    let resolved = resolve_channel(&args.channel, model::DPS_DARK_COUNT, DEFAULT_BASELINE_ERROR, true)?;
    let protocol = resolve_protocol(args.protocol.as_deref(), &resolved.config)?;
    let resolved = resolve_channel(
        &args.channel,
        protocol.default_dark_count(),
        DEFAULT_BASELINE_ERROR,
        true,
    )?;
    let nbar = match protocol {
        SweepProtocol::Bb84SinglePhoton => match args.nbar.or(resolved.config.nbar) {
            None => 1.0,
            Some(n) => {
                if n != 1.0 {
                    return Err(CliError::Usage(format!(
                        "bb84-single is pinned at nbar = 1, got {n}"
                    )));
                }
                n
            }
        },
        _ => args.nbar.or(resolved.config.nbar).ok_or_else(|| {
            CliError::Usage("missing --nbar (or nbar in --config)".into())
        })?,
    };
    let channel = ChannelModel::from_loss_db(
        resolved.loss_db,
        resolved.dark_count,
        resolved.baseline_error,
    )?;
    if let SweepProtocol::Dps = protocol {
        if nbar.is_nan() || nbar >= 0.5 {
            return Err(CliError::Domain(
                rates::RateError::DpsNbarTooLarge(nbar).to_string(),
            ));
        }
    }
    if nbar <= 0.0 {
        return Err(CliError::Domain(format!(
            "mean photon number must be positive, got {nbar}"
        )));
    }
    let rate = guard_rate(protocol, nbar, &channel, &resolved.ec)?;
    let p = rates::p_click(nbar, channel.transmission(), channel.dark_count())?;
    let e = rates::qber(
        nbar,
        channel.transmission(),
        channel.dark_count(),
        channel.baseline_error(),
    )?
    .min(0.5);

    let params = [
        ("protocol", protocol.to_string()),
        ("nbar", nbar.to_string()),
        ("loss_db", resolved.loss_db.to_string()),
        ("dark_count", resolved.dark_count.to_string()),
        ("baseline_error", resolved.baseline_error.to_string()),
        ("f_ec", resolved.ec_label.clone()),
    ];
    let slug = protocol_slug(protocol.protocol_kind(), protocol.source_kind());
    let mut content = header("rate", &params, SWEEP_COLUMNS.replace("nbar_opt", "nbar").as_str());
    let _ = writeln!(
        content,
        "{},{},{},{},{},{},{},{}",
        resolved.loss_db,
        channel.transmission(),
        slug.0,
        slug.1,
        nbar,
        p,
        e,
        rate
    );
    emit(args.out.as_deref(), &content)
}

fn guard_rate(
    protocol: SweepProtocol,
    nbar: f64,
    channel: &ChannelModel,
    ec: &ErrorCorrection,
) -> Result<f64, CliError> {
    let (t, d, mu) = (
        channel.transmission(),
        channel.dark_count(),
        channel.baseline_error(),
    );
    Ok(match protocol {
        SweepProtocol::Dps => rates::rate_dps(nbar, t, d, mu, ec)?,
        SweepProtocol::Bb84Poisson => {
            let src = SourceModel::poisson(nbar)?;
            rates::rate_bb84(&src, t, d, mu, ec)?.rate
        }
        SweepProtocol::Bb84SinglePhoton => {
            let src = SourceModel::ideal_single_photon();
            rates::rate_bb84(&src, t, d, mu, ec)?.rate
        }
        SweepProtocol::DpsSequentialAdversary => rates::rate_sequential(nbar, t, d, mu, ec)?,
    })
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    // The dark-count default is per protocol here, so the resolved value is
    // not used; only the baseline error, table, and config carry over.
    let resolved = resolve_channel(&args.channel, f64::NAN, DEFAULT_BASELINE_ERROR, false)?;
    let protocols: Vec<SweepProtocol> = args
        .protocols
        .iter()
        .map(|s| s.parse::<SweepProtocol>().map_err(CliError::Usage))
        .collect::<Result<_, _>>()?;
    // Absent everywhere means the receiver defaults apply per protocol.
    let dark_count = args.channel.dark_count.or(resolved.config.dark_count);
    let spec = SweepSpec {
        loss_min_db: args.loss_min,
        loss_max_db: args.loss_max,
        loss_step_db: args.loss_step,
        protocols: protocols.clone(),
        dark_count,
        baseline_error: resolved.baseline_error,
        error_correction: resolved.ec.clone(),
    };
    let rows = optimize::sweep(&spec)?;

    let protocol_list = protocols
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",");
    let params = [
        ("loss_min_db", args.loss_min.to_string()),
        ("loss_max_db", args.loss_max.to_string()),
        ("loss_step_db", args.loss_step.to_string()),
        ("protocols", protocol_list),
        (
            "dark_count",
            dark_count.map_or("receiver-default".to_string(), |d| d.to_string()),
        ),
        ("baseline_error", resolved.baseline_error.to_string()),
        ("f_ec", resolved.ec_label.clone()),
    ];
    let mut content = header("sweep", &params, SWEEP_COLUMNS);
    content.push_str(&sweep_rows_csv(&rows));
    emit(args.out.as_deref(), &content)
}

fn cmd_optimize(args: OptimizeArgs) -> Result<(), CliError> {
    let probe = resolve_channel(&args.channel, model::DPS_DARK_COUNT, DEFAULT_BASELINE_ERROR, true)?;
    let protocol = resolve_protocol(args.protocol.as_deref(), &probe.config)?;
    let resolved = resolve_channel(
        &args.channel,
        protocol.default_dark_count(),
        DEFAULT_BASELINE_ERROR,
        true,
    )?;
    let channel = ChannelModel::from_loss_db(
        resolved.loss_db,
        resolved.dark_count,
        resolved.baseline_error,
    )?;
    let opt = optimize::optimize_nbar(protocol, &channel, &resolved.ec)?;
    let params = [
        ("protocol", protocol.to_string()),
        ("loss_db", resolved.loss_db.to_string()),
        ("dark_count", resolved.dark_count.to_string()),
        ("baseline_error", resolved.baseline_error.to_string()),
        ("f_ec", resolved.ec_label.clone()),
    ];
    let mut content = header(
        "optimize",
        &params,
        "nbar_opt,rate_opt,bracket_lo,bracket_hi,evaluations",
    );
    let _ = writeln!(
        content,
        "{},{},{},{},{}",
        opt.nbar_opt, opt.rate_opt, opt.bracket.0, opt.bracket.1, opt.evaluations
    );
    emit(args.out.as_deref(), &content)
}

fn parse_attack(name: &str, k: Option<u32>) -> Result<Attack, CliError> {
    match name {
        "none" => Ok(Attack::NoAttack),
        "intercept-resend" => Ok(Attack::InterceptResend),
        "beamsplitter" => Ok(Attack::Beamsplitter { delayed: false }),
        "beamsplitter-delayed" => Ok(Attack::Beamsplitter { delayed: true }),
        "sequential" => {
            let k = k.ok_or_else(|| {
                CliError::Usage("--attack sequential requires --k <block length>".into())
            })?;
            Ok(Attack::Sequential { k })
        }
        other => Err(CliError::Usage(format!(
            "unknown attack `{other}` (expected none, intercept-resend, beamsplitter, beamsplitter-delayed, or sequential)"
        ))),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let attack = parse_attack(&args.attack, args.k)?;
    // Attack statistics are cleanest on an otherwise ideal receiver, so the
    // simulator defaults dark counts and baseline error to zero.
    let resolved = resolve_channel(&args.channel, 0.0, 0.0, true)?;
    let nbar = args
        .nbar
        .or(resolved.config.nbar)
        .ok_or_else(|| CliError::Usage("missing --nbar (or nbar in --config)".into()))?;
    // Honor an explicit --transmission exactly rather than round-tripping
    // it through dB.
    let transmission = match args.channel.transmission {
        Some(t) => t,
        None => model::loss_to_transmission(resolved.loss_db)?,
    };
    let config = SimConfig {
        n_pulses: args.pulses,
        nbar,
        transmission,
        dark_count: resolved.dark_count,
        baseline_error: resolved.baseline_error,
        attack,
        seed: args.seed,
    };
    let report = montecarlo::simulate(&config)?;

    let params = [
        ("attack", args.attack.clone()),
        ("k", args.k.map_or("-".to_string(), |k| k.to_string())),
        ("pulses", args.pulses.to_string()),
        ("nbar", nbar.to_string()),
        ("transmission", transmission.to_string()),
        ("dark_count", resolved.dark_count.to_string()),
        ("baseline_error", resolved.baseline_error.to_string()),
        ("seed", args.seed.to_string()),
    ];
    let columns = "seed,attack,pulses,positions,clicks,errors,eve_known,qber_est,eve_fraction_est,\
                   n_center,n_center_errors,n_edge,n_edge_errors,\
                   k,n_click_windows,n_windows,n_blocks,n_block_clicks,n_block_errors,n_block_eve_known";
    let mut detail = [0u64; 11];
    match report.attack {
        AttackTallies::None | AttackTallies::Beamsplitter { .. } => {}
        AttackTallies::InterceptResend(t) => {
            detail[0] = t.n_center;
            detail[1] = t.n_center_errors;
            detail[2] = t.n_edge;
            detail[3] = t.n_edge_errors;
        }
        AttackTallies::Sequential(t) => {
            detail[4] = t.k as u64;
            detail[5] = t.n_click_windows;
            detail[6] = t.n_windows;
            detail[7] = t.n_blocks;
            detail[8] = t.n_block_clicks;
            detail[9] = t.n_block_errors;
            detail[10] = t.n_block_eve_known;
        }
    }
    let mut content = header("simulate", &params, columns);
    let _ = writeln!(
        content,
        "{},{},{},{},{},{},{},{},{},{}",
        report.seed,
        args.attack,
        report.n_pulses,
        report.n_positions,
        report.n_clicks,
        report.n_errors,
        report.n_eve_known,
        report.qber_est,
        report.eve_fraction_est,
        detail
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    // The summary (stdout or --out) is byte-stable; timing goes to stderr.
    eprintln!("wall time: {:?}", report.wall_time);
    if args.out.is_some() {
        emit(args.out.as_deref(), &content)?;
        print!("{content}");
        Ok(())
    } else {
        emit(None, &content)
    }
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    // Bin centers across the rising branch of the bound.
    let bins: Vec<f64> = (0..=15).map(|i| i as f64 * 0.01).collect();
    let params = [
        ("grid_points", args.grid_points.to_string()),
        ("e_tol", args.e_tol.to_string()),
        (
            "e_bins",
            "0.00..0.15 step 0.01".to_string(),
        ),
    ];
    let mut content = header("oracle", &params, "e_bin,analytic_pc0,bruteforce_pc0,gap");
    for &e in &bins {
        let analytic = collision::pc0_bound(e)?.pc0;
        let brute = collision::pc0_bruteforce_max(e, args.e_tol, args.grid_points)?;
        let _ = writeln!(content, "{},{},{},{}", e, analytic, brute, brute - analytic);
    }
    emit(args.out.as_deref(), &content)
}

fn cmd_figures(args: FiguresArgs) -> Result<(), CliError> {
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", args.out_dir.display())))?;

    // Rate-vs-loss comparison: DPS against both BB84 variants.
    let spec3 = SweepSpec {
        protocols: vec![
            SweepProtocol::Dps,
            SweepProtocol::Bb84Poisson,
            SweepProtocol::Bb84SinglePhoton,
        ],
        ..SweepSpec::reference_defaults()
    };
    let rows3 = optimize::sweep(&spec3)?;
    let params3 = [
        ("loss_min_db", "0".to_string()),
        ("loss_max_db", "60".to_string()),
        ("loss_step_db", "1".to_string()),
        ("protocols", "dps,bb84-poisson,bb84-single".to_string()),
        ("dark_count", "receiver-default".to_string()),
        ("baseline_error", DEFAULT_BASELINE_ERROR.to_string()),
        ("f_ec", "shannon".to_string()),
    ];
    let mut csv3 = header("figures", &params3, SWEEP_COLUMNS);
    csv3.push_str(&sweep_rows_csv(&rows3));
    emit(Some(&args.out_dir.join("rate_vs_loss.csv")), &csv3)?;

    // Individual vs sequential attack at the shared DPS operating point.
    let spec4 = SweepSpec {
        protocols: vec![SweepProtocol::Dps, SweepProtocol::DpsSequentialAdversary],
        ..SweepSpec::reference_defaults()
    };
    let rows4 = optimize::sweep(&spec4)?;
    let params4 = [
        ("loss_min_db", "0".to_string()),
        ("loss_max_db", "60".to_string()),
        ("loss_step_db", "1".to_string()),
        ("protocols", "dps,dps-seq".to_string()),
        ("dark_count", "receiver-default".to_string()),
        ("baseline_error", DEFAULT_BASELINE_ERROR.to_string()),
        ("f_ec", "shannon".to_string()),
    ];
    let mut csv4 = header("figures", &params4, SWEEP_COLUMNS);
    csv4.push_str(&sweep_rows_csv(&rows4));
    emit(Some(&args.out_dir.join("individual_vs_sequential.csv")), &csv4)?;

    let series3 = split_series(
        &rows3,
        &[
            ("dps", "poisson", "DPS"),
            ("bb84", "poisson", "BB84 Poisson"),
            ("bb84", "single", "BB84 single photon"),
        ],
    );
    emit(
        Some(&args.out_dir.join("rate_vs_loss.svg")),
        &svg::line_chart_log_y(
            "Secure rate vs channel loss",
            "channel loss (dB)",
            "secure bits per pulse",
            &series3,
        ),
    )?;
    let series4 = split_series(
        &rows4,
        &[
            ("dps", "poisson", "individual attacks"),
            ("dps-seq", "poisson", "sequential attacks"),
        ],
    );
    emit(
        Some(&args.out_dir.join("individual_vs_sequential.svg")),
        &svg::line_chart_log_y(
            "Individual vs sequential attacks",
            "channel loss (dB)",
            "secure bits per pulse",
            &series4,
        ),
    )?;
    Ok(())
}

fn split_series(
    rows: &[rates::RatePoint],
    wanted: &[(&str, &str, &str)],
) -> Vec<svg::Series> {
    wanted
        .iter()
        .map(|&(proto, source, label)| svg::Series {
            label: label.to_string(),
            points: rows
                .iter()
                .filter(|r| {
                    let slug = protocol_slug(r.protocol, r.source);
                    slug.0 == proto && slug.1 == source
                })
                .map(|r| (r.loss_db, r.rate))
                .collect(),
        })
        .collect()
}
