use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use majlab::config::{ExperimentConfig, SweepAxis, SweepConfig};
use majlab::csvio::write_trials;
use majlab::report::{
    default_claims, load_records_dir, run_claims, verdict_line, write_json, VerifyParams,
};
use majlab::runner::{run_experiment, run_sweep};
use majlab_core::oracle::{
    llt_compare, profile_prob_exact, tie_prob_exact, LltRow, NeighborProfile,
};
use majlab_core::verify::ClaimId;

/// Simulator and verifier for synchronous k-state majority dynamics on
/// G(n, p) random graphs.
#[derive(Parser)]
#[command(name = "majlab", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one experiment and write config.toml + trials.csv.
    Simulate(SimulateArgs),
    /// Run the same experiment at several values of one axis.
    Sweep(SweepArgs),
    /// Evaluate claims against a result directory.
    Verify(VerifyArgs),
    /// Exact combinatorial references.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment TOML.
    #[arg(long)]
    config: PathBuf,
    /// Sample one graph from the master seed and reuse it across trials.
    #[arg(long, conflicts_with = "fix_config")]
    fix_graph: bool,
    /// Sample one initial configuration from the master seed and reuse it.
    #[arg(long)]
    fix_config: bool,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Base experiment TOML; the axis value is overridden per run.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Comma-separated ascending values, at least three.
    #[arg(long)]
    values: String,
    #[arg(long, conflicts_with = "fix_config")]
    fix_graph: bool,
    #[arg(long)]
    fix_config: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    N,
    P,
}

#[derive(Args)]
struct VerifyArgs {
    /// Directory written by simulate or sweep.
    #[arg(long)]
    records: PathBuf,
    /// "all" or a comma-separated list of claim ids.
    #[arg(long, default_value = "all")]
    claims: String,
    /// Write newline-delimited JSON verdicts here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Conditioning scale for premise events.
    #[arg(long)]
    delta: Option<f64>,
    /// Premise scale for the degree-gap partition check.
    #[arg(long)]
    delta_degree: Option<f64>,
    /// Tolerated anti-concentration failure probability.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Degree-gap scale; defaults to n^(1/3) p.
    #[arg(long)]
    omega: Option<f64>,
    /// Configuration samples for the anti-concentration claim.
    #[arg(long)]
    ac_trials: Option<u64>,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Tabulate exact neighbor-profile probabilities against the local
    /// limit density over a window of lattice deviations.
    Llt {
        /// Population size the neighborhood is drawn from.
        #[arg(long)]
        n_star: usize,
        /// Neighborhood size.
        #[arg(long)]
        n_of_v: u64,
        /// Comma-separated part sizes (must sum to n_star).
        #[arg(long)]
        parts: String,
        /// Half-width of the deviation window per coordinate.
        #[arg(long)]
        window: u64,
        #[arg(long, value_enum, default_value = "det")]
        normalization: NormArg,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact probability of one neighbor profile.
    Profile {
        /// Comma-separated part sizes.
        #[arg(long)]
        parts: String,
        /// Comma-separated per-part neighbor counts.
        #[arg(long)]
        s: String,
    },
    /// Exact probability that two binomial counts tie.
    Tie {
        #[arg(long)]
        ni: u64,
        #[arg(long)]
        nj: u64,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NormArg {
    /// Determinant-power form (|Sigma|/2pi)^((k0-1)/2).
    Det,
    Std,
    Both,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Simulate(a) => cmd_simulate(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Oracle(a) => cmd_oracle(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn cmd_simulate(a: SimulateArgs) -> Result<ExitCode> {
    let cfg = ExperimentConfig::load(&a.config)?;
    let mode = cfg.resolve_mode(a.fix_graph, a.fix_config)?;
    ensure_dir(&a.out)?;
    let (records, summary) = run_experiment(&cfg, mode)?;
    cfg.save(&a.out.join("config.toml"), mode)?;
    write_trials(
        &a.out.join("trials.csv"),
        cfg.n,
        cfg.p,
        cfg.k as usize,
        &records,
    )?;
    println!(
        "wrote {} trials to {} (mode {})",
        records.len(),
        a.out.display(),
        mode.as_str()
    );
    print!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(a: SweepArgs) -> Result<ExitCode> {
    let base = ExperimentConfig::load(&a.config)?;
    let mode = base.resolve_mode(a.fix_graph, a.fix_config)?;
    let axis = match a.axis {
        AxisArg::N => SweepAxis::N,
        AxisArg::P => SweepAxis::P,
    };
    let values: Vec<f64> = a
        .values
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("bad sweep value {s:?}"))
        })
        .collect::<Result<_>>()?;
    let sweep = SweepConfig { base, axis, values };
    sweep.validate()?;
    ensure_dir(&a.out)?;
    sweep.save(&a.out.join("sweep.toml"))?;
    let results = run_sweep(&sweep, mode)?;
    for (idx, (value, cfg, records, summary)) in results.iter().enumerate() {
        let sub = a.out.join(sweep.value_dir_name(idx));
        ensure_dir(&sub)?;
        cfg.save(&sub.join("config.toml"), mode)?;
        write_trials(&sub.join("trials.csv"), cfg.n, cfg.p, cfg.k as usize, records)?;
        println!(
            "{} = {value}: {} trials, frac unanimous by round 3 = {:.3}, mean round-1 ties = {:.1}",
            axis.as_str(),
            records.len(),
            summary.frac_unanimous_3,
            summary.mean_tie[0]
        );
    }
    println!("wrote sweep to {}", a.out.display());
    Ok(ExitCode::SUCCESS)
}

fn parse_claims(list: &str, data_defaults: &[ClaimId]) -> Result<Vec<ClaimId>> {
    if list.trim() == "all" {
        return Ok(data_defaults.to_vec());
    }
    list.split(',')
        .map(|s| Ok(ClaimId::parse(s.trim())?))
        .collect()
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let data = load_records_dir(&a.records)?;
    let claims = parse_claims(&a.claims, &default_claims(&data))?;
    if claims.is_empty() {
        bail!("no claims requested");
    }
    let mut params = VerifyParams::default();
    if let Some(d) = a.delta {
        params.delta = d;
    }
    if let Some(d) = a.delta_degree {
        params.delta_degree = d;
    }
    if let Some(e) = a.epsilon {
        params.epsilon = e;
    }
    params.omega = a.omega.or(params.omega);
    if let Some(t) = a.ac_trials {
        params.ac_trials = t;
    }
    let verdicts = run_claims(&data, &claims, &params)?;
    for v in &verdicts {
        println!("{}", verdict_line(v));
    }
    if let Some(path) = &a.json {
        write_json(path, &verdicts)?;
        println!("wrote {}", path.display());
    }
    if verdicts.iter().all(|v| v.effective_pass()) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn parse_u64_list(s: &str, what: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .with_context(|| format!("bad {what} entry {t:?}"))
        })
        .collect()
}

fn render_llt_csv(rows: &[LltRow], both: bool, std_only: bool) -> String {
    let mut out = String::new();
    if both {
        out.push_str("delta_vec,exact,approx,rel_err,approx_std,rel_err_std\n");
    } else {
        out.push_str("delta_vec,exact,approx,rel_err\n");
    }
    for r in rows {
        let delta = r
            .delta
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(";");
        let (approx, rel) = if std_only {
            (r.approx_std, r.rel_err_std)
        } else {
            (r.approx, r.rel_err)
        };
        if both {
            out.push_str(&format!(
                "{delta},{:e},{:e},{:e},{:e},{:e}\n",
                r.exact, r.approx, r.rel_err, r.approx_std, r.rel_err_std
            ));
        } else {
            out.push_str(&format!("{delta},{:e},{approx:e},{rel:e}\n", r.exact));
        }
    }
    out
}

fn cmd_oracle(a: OracleCmd) -> Result<ExitCode> {
    match a {
        OracleCmd::Llt {
            n_star,
            n_of_v,
            parts,
            window,
            normalization,
            out,
        } => {
            let parts = parse_u64_list(&parts, "parts")?;
            let rows = llt_compare(n_star as u64, n_of_v, &parts, window)?;
            let (both, std_only) = match normalization {
                NormArg::Det => (false, false),
                NormArg::Std => (false, true),
                NormArg::Both => (true, false),
            };
            let csv = render_llt_csv(&rows, both, std_only);
            match out {
                Some(path) => {
                    std::fs::write(&path, csv)
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("wrote {} rows to {}", rows.len(), path.display());
                }
                None => print!("{csv}"),
            }
        }
        OracleCmd::Profile { parts, s } => {
            let parts = parse_u64_list(&parts, "parts")?;
            let s = parse_u64_list(&s, "s")?;
            let profile = NeighborProfile::new(s, parts)?;
            let prob = profile_prob_exact(&profile)?;
            println!("probability = {prob:e}");
        }
        OracleCmd::Tie { ni, nj, p } => {
            let prob = tie_prob_exact(ni, nj, p)?;
            println!("tie probability = {prob:e}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
