//! Command-line front end. All logic lives in the library; this binary
//! parses flags, delegates, and maps failures to exit codes:
//! 0 ok, 1 usage error, 2 verification failure, 3 I/O error.

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use retrorent::arrivals::{
    adversary_probe, adversary_ttl, auto_tune_slot_duration, ingest_trace, ColumnSel,
    TraceIngestConfig,
};
use retrorent::bounds::{
    opt_on_lower, rho_any_lower, rho_rr_upper, rho_ttl_lower, sigma_rr_upper, sigma_ttl_lower,
    ttl_delta, BoundsError,
};
use retrorent::cost::{display_exact, parse_cost, CostParams};
use retrorent::experiment::{
    format_sig12, parse_distribution, run_experiment, standard_notes, write_csv,
    ExperimentConfig, SweepAxis,
};
use retrorent::policy::{simulate, PolicySpec};
use retrorent::verify::{run_suite, Suite};
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "retrorent",
    about = "Discrete-time simulator and verification harness for rent-or-fetch service caching at an edge server"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonParams {
    /// Fetch cost M (> 1); decimal or p/q.
    #[arg(long, default_value = "4")]
    m: String,
    /// Rent cost c per slot (0 <= c < kappa); decimal or p/q.
    #[arg(long, default_value = "0.35")]
    c: String,
    /// Edge capacity kappa (requests served locally per slot).
    #[arg(long, default_value_t = 1)]
    kappa: u32,
}

impl CommonParams {
    fn build(&self) -> Result<CostParams, String> {
        let m = parse_cost(&self.m).map_err(|e| e.to_string())?;
        let c = parse_cost(&self.c).map_err(|e| e.to_string())?;
        CostParams::new(m, c, self.kappa).map_err(|e| e.to_string())
    }
}

#[derive(Args, Clone)]
struct ExperimentFlags {
    /// Flat key=value config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated policies: rr | err | ttl:L | always | never.
    #[arg(long)]
    policies: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    kappa: Option<u32>,
    /// Arrival source: bernoulli:P | poisson:RATE | empirical:X:P,...
    #[arg(long)]
    arrival: Option<String>,
    /// Horizon in slots (i.i.d. arrivals).
    #[arg(long)]
    horizon: Option<usize>,
    /// Ingest arrivals from a delimited event file instead.
    #[arg(long)]
    trace_file: Option<PathBuf>,
    #[arg(long)]
    slot_duration: Option<f64>,
    #[arg(long)]
    timestamp_col: Option<String>,
    #[arg(long)]
    filter: Option<String>,
    #[arg(long)]
    filter_col: Option<String>,
    /// Seeds per sweep point.
    #[arg(long)]
    repetitions: Option<u32>,
    #[arg(long)]
    master_seed: Option<u64>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentFlags {
    fn build(&self, sweep: Option<&str>) -> Result<ExperimentConfig, String> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_file(path).map_err(|e| e.to_string())?,
            None => ExperimentConfig::default(),
        };
        let mut apply = |key: &str, value: String| -> Result<(), String> {
            config.apply(key, &value).map_err(|e| e.to_string())
        };
        if let Some(v) = &self.policies {
            apply("policies", v.clone())?;
        }
        if let Some(v) = &self.m {
            apply("M", v.clone())?;
        }
        if let Some(v) = &self.c {
            apply("c", v.clone())?;
        }
        if let Some(v) = self.kappa {
            apply("kappa", v.to_string())?;
        }
        if let Some(v) = &self.trace_file {
            apply("trace_file", v.display().to_string())?;
        }
        if let Some(v) = &self.arrival {
            apply("arrival", v.clone())?;
        }
        if let Some(v) = self.horizon {
            apply("horizon", v.to_string())?;
        }
        if let Some(v) = self.slot_duration {
            apply("slot_duration", v.to_string())?;
        }
        if let Some(v) = &self.timestamp_col {
            apply("timestamp_col", v.clone())?;
        }
        if let Some(v) = &self.filter {
            apply("filter", v.clone())?;
        }
        if let Some(v) = &self.filter_col {
            apply("filter_col", v.clone())?;
        }
        if let Some(v) = self.repetitions {
            apply("repetitions", v.to_string())?;
        }
        if let Some(v) = self.master_seed {
            apply("master_seed", v.to_string())?;
        }
        if let Some(v) = &self.out {
            apply("out", v.display().to_string())?;
        }
        if let Some(s) = sweep {
            config.sweep = Some(SweepAxis::parse(s).map_err(|e| e.to_string())?);
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured policies once (no sweep axis) and emit CSV.
    Simulate {
        #[command(flatten)]
        flags: ExperimentFlags,
    },
    /// Sweep one parameter axis (c | M | kappa | L) and emit CSV.
    Sweep {
        #[command(flatten)]
        flags: ExperimentFlags,
        /// Axis spec: param:start:stop:count or param:v1,v2,...
        #[arg(long)]
        axis: String,
    },
    /// Probe a policy with the adversarial lower-bound construction.
    Adversary {
        /// Policy to probe: rr | err | ttl:L | always | never.
        #[arg(long, default_value = "err")]
        policy: String,
        #[command(flatten)]
        params: CommonParams,
        /// Maximum probe length in slots.
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// Print every applicable closed-form bound for a configuration.
    Bounds {
        #[command(flatten)]
        params: CommonParams,
        /// TTL timer value for the TTL bounds.
        #[arg(long)]
        ttl: Option<u32>,
        /// Horizon for the expected-ratio bounds.
        #[arg(long)]
        horizon: Option<u64>,
        /// Arrival distribution for the stochastic rows.
        #[arg(long)]
        arrival: Option<String>,
    },
    /// Run a named property suite; exits 2 on failure with a minimized
    /// counterexample.
    Verify {
        /// equivalence | oracle | frames | structure | bounds-consistency
        suite: String,
        /// Random instances to draw.
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long, default_value_t = 0x5EED)]
        master_seed: u64,
    },
    /// Bin a request-event file into per-slot counts (one count per line).
    Ingest {
        path: PathBuf,
        /// Time units per slot.
        #[arg(long, default_value_t = 1.0)]
        slot_duration: f64,
        /// Pick the slot duration automatically so that no slot holds more
        /// than one request.
        #[arg(long)]
        auto_tune: bool,
        /// Timestamp column (zero-based index or header name).
        #[arg(long, default_value = "0")]
        timestamp_col: String,
        /// Keep only rows with this exact value in --filter-col (or in any
        /// column).
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        filter_col: Option<String>,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Verification(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Io(m) => m,
        }
    }
}

fn emit_rows(config: &ExperimentConfig) -> Result<(), CliError> {
    let rows = run_experiment(config).map_err(|e| CliError::Usage(e.to_string()))?;
    let notes = standard_notes(config);
    match &config.output {
        Some(path) => {
            let mut file = File::create(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            write_csv(&rows, &notes, &mut file).map_err(|e| CliError::Io(e.to_string()))?;
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => {
            let mut stdout = std::io::stdout();
            write_csv(&rows, &notes, &mut stdout).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn cmd_adversary(policy: &str, params: &CommonParams, cap: usize) -> Result<(), CliError> {
    let spec: PolicySpec = policy.parse().map_err(CliError::Usage)?;
    let params = params.build().map_err(CliError::Usage)?;
    let report = adversary_probe(spec, &params, cap);
    let head: Vec<u64> = report.trace.counts().iter().take(12).copied().collect();
    println!("policy:            {}", report.policy);
    println!("parameters:        {params}");
    println!(
        "sequence:          {} slots, head {:?}{}",
        report.trace.horizon(),
        head,
        if report.trace.horizon() > 12 { " ..." } else { "" }
    );
    match report.reaction_slot {
        Some(slot) => println!("first reaction:    slot {slot}"),
        None => println!("first reaction:    none within cap (non-reactive)"),
    }
    println!("policy cost:       {}", display_exact(&report.policy_cost));
    println!("alternative cost:  {}", display_exact(&report.alt_cost));
    println!("achieved ratio:    {}", report.ratio);
    println!(
        "lower bound:       {}",
        display_exact(&rho_any_lower(&params))
    );
    if report.non_reactive {
        println!("note:              policy never reacted; ratio reflects the capped sequence");
    }
    // The TTL attack family, for the matching lower bound.
    if let PolicySpec::Ttl { ttl } = spec {
        println!(
            "ttl lower bound:   {}",
            display_exact(&rho_ttl_lower(&params, ttl))
        );
        for attack in adversary_ttl(&params, ttl, 3) {
            let (_, ledger) = simulate(spec, &attack.trace, &params)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let ratio =
                retrorent::cost::competitive_ratio(ledger.total, attack.comparison_cost);
            println!(
                "  attack {:?}: policy {} vs comparison {} -> ratio {}",
                attack.kind,
                display_exact(&ledger.total),
                display_exact(&attack.comparison_cost),
                ratio
            );
        }
    }
    Ok(())
}

fn cmd_bounds(
    params: &CommonParams,
    ttl: Option<u32>,
    horizon: Option<u64>,
    arrival: Option<&str>,
) -> Result<(), CliError> {
    let params = params.build().map_err(CliError::Usage)?;
    println!("parameters                 {params}");
    println!(
        "rho_rr_upper               {}  ({})",
        display_exact(&rho_rr_upper(&params)),
        format_sig12(rho_rr_upper(&params).to_f64().unwrap())
    );
    println!(
        "rho_any_lower              {}  ({})",
        display_exact(&rho_any_lower(&params)),
        format_sig12(rho_any_lower(&params).to_f64().unwrap())
    );
    if let Some(l) = ttl {
        println!(
            "rho_ttl_lower(L={l})         {}  ({})",
            display_exact(&rho_ttl_lower(&params, l)),
            format_sig12(rho_ttl_lower(&params, l).to_f64().unwrap())
        );
    }
    let Some(arrival) = arrival else {
        println!("(no arrival distribution: stochastic rows omitted)");
        return Ok(());
    };
    let dist = parse_distribution(arrival).map_err(|e| CliError::Usage(e.to_string()))?;
    let stats = dist.stats(params.kappa());
    println!(
        "arrival stats              nu={} mu={} p0={}",
        display_exact(&stats.nu),
        display_exact(&stats.mu),
        display_exact(&stats.p0)
    );
    println!(
        "opt_on_lower (per slot)    {}",
        display_exact(&opt_on_lower(&params, &stats))
    );
    if stats.mu == params.rent_cost() {
        println!(
            "note: mu = c, retro-renting matches the online optimum; ratio bounds degenerate"
        );
        return Ok(());
    }
    if let Some(t) = horizon {
        match sigma_rr_upper(&params, &stats, t) {
            Ok(bound) => {
                println!(
                    "sigma_rr_upper(T={t})       {}{} at lambda {}",
                    format_sig12(bound.value),
                    if bound.vacuous {
                        "  [vacuous at this horizon: below 1]"
                    } else {
                        ""
                    },
                    format_sig12(bound.lambda.to_f64().unwrap())
                );
            }
            Err(BoundsError::NoFeasibleLambda(_)) => {
                println!("sigma_rr_upper(T={t})       infeasible horizon (T too small)");
            }
            Err(e) => println!("sigma_rr_upper(T={t})       n/a ({e})"),
        }
        if let Some(l) = ttl {
            match sigma_ttl_lower(&params, &stats, l, t) {
                Ok(v) => println!("sigma_ttl_lower(L={l},T={t})  {}", display_exact(&v)),
                Err(e) => println!("sigma_ttl_lower(L={l},T={t}) n/a ({e})"),
            }
        }
    }
    if let Some(l) = ttl {
        match ttl_delta(&params, &stats, l, 20) {
            Ok(v) => println!(
                "ttl_delta(L={l}, t=20)       {}  ({})",
                display_exact(&v),
                format_sig12(v.to_f64().unwrap())
            ),
            Err(e) => println!("ttl_delta(L={l}, t=20)       n/a ({e})"),
        }
    }
    Ok(())
}

fn cmd_verify(suite: &str, budget: u64, master_seed: u64) -> Result<(), CliError> {
    let suite: Suite = suite.parse().map_err(CliError::Usage)?;
    let report = run_suite(suite, budget, master_seed);
    println!(
        "suite {}: {} instances, {} checks",
        report.suite, report.instances, report.checks
    );
    if report.passed() {
        println!("PASS");
        Ok(())
    } else {
        for failure in &report.failures {
            println!("FAIL: {failure}");
        }
        if let Some(ce) = &report.counterexample {
            println!("minimized counterexample: {ce}");
        }
        Err(CliError::Verification(format!(
            "suite {} failed",
            report.suite
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_ingest(
    path: PathBuf,
    slot_duration: f64,
    auto_tune: bool,
    timestamp_col: String,
    filter: Option<String>,
    filter_col: Option<String>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut cfg = TraceIngestConfig {
        path,
        timestamp_column: ColumnSel::parse(&timestamp_col),
        slot_duration,
        filter,
        filter_column: filter_col.as_deref().map(ColumnSel::parse),
    };
    if auto_tune {
        cfg.slot_duration =
            auto_tune_slot_duration(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
        eprintln!("auto-tuned slot duration: {}", cfg.slot_duration);
    }
    let report = ingest_trace(&cfg).map_err(|e| match e {
        retrorent::arrivals::ArrivalsError::Io(e) => CliError::Io(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;
    eprintln!(
        "parsed {} events ({} rows skipped) into {} slots",
        report.events,
        report.skipped,
        report.trace.horizon()
    );
    let body: String = report
        .trace
        .counts()
        .iter()
        .map(|x| format!("{x}\n"))
        .collect();
    match out {
        Some(path) => std::fs::write(&path, body)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { flags } => {
            let config = flags.build(None).map_err(CliError::Usage)?;
            emit_rows(&config)
        }
        Command::Sweep { flags, axis } => {
            let config = flags.build(Some(&axis)).map_err(CliError::Usage)?;
            emit_rows(&config)
        }
        Command::Adversary {
            policy,
            params,
            cap,
        } => cmd_adversary(&policy, &params, cap),
        Command::Bounds {
            params,
            ttl,
            horizon,
            arrival,
        } => cmd_bounds(&params, ttl, horizon, arrival.as_deref()),
        Command::Verify {
            suite,
            budget,
            master_seed,
        } => cmd_verify(&suite, budget, master_seed),
        Command::Ingest {
            path,
            slot_duration,
            auto_tune,
            timestamp_col,
            filter,
            filter_col,
            out,
        } => cmd_ingest(
            path,
            slot_duration,
            auto_tune,
            timestamp_col,
            filter,
            filter_col,
            out,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version itself; map genuine parse errors to
            // the usage exit code.
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
