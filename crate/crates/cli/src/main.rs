mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use brac_core::exact::{self, RationalValue};
use brac_core::pcrit::{self, CurveTable, PcritResult};
use brac_core::quantum::{self, quantum_guess_probability, simulate_binary_payoff_with};
use brac_core::strategy::{best_response_binary_decoding, evaluate_binary_strategy};
use brac_core::{
    binary_classical_n2, binary_quantum_n2, binary_rac_classical_value, bound_report,
    brute_force_binary, brute_force_standard, certify_dimension, quantum_classical_gap,
    standard_rac_classical_value, EncodingStrategy, PayoffConfig, SearchMode, StateConvention,
    StatisticsFormat, StatisticsTable, TaskParams, DEFAULT_COMPOSITION_CAP,
};

use output::{Emit, Table};

#[derive(Parser)]
#[command(
    name = "brac",
    version,
    about = "Random access code bounds, p_crit scan, simulation and dimension certification"
)]
struct Cli {
    /// Print CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classical and quantum binary RAC values.
    Bounds {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Payoff of a correct YES, as a decimal or fraction.
        #[arg(long)]
        tyes: String,
        /// Largest number of compositions to enumerate.
        #[arg(long, default_value_t = DEFAULT_COMPOSITION_CAP)]
        cap: u64,
    },
    /// Smallest p_crit at which the single-YES posterior maximizes entropy.
    Pcrit {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = pcrit::DEFAULT_EPSILON)]
        eps: f64,
    },
    /// `pcrit` for several dimensions.
    PcritTable {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = pcrit::DEFAULT_EPSILON)]
        eps: f64,
    },
    /// Exhaustive search over deterministic strategies.
    Oracle {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        /// Search the binary RAC instead of the standard one.
        #[arg(long, requires = "tyes")]
        binary: bool,
        #[arg(long)]
        tyes: Option<String>,
        /// Standard RAC decodings to search over.
        #[arg(long, value_enum, default_value_t = ModeArg::Identity)]
        mode: ModeArg,
    },
    /// Simulate the two-dit qudit protocol.
    Simulate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        tyes: String,
        /// Write the per-input statistics (`.csv` for CSV, JSON otherwise).
        #[arg(long)]
        export: Option<PathBuf>,
        /// Use the unaligned Fourier-branch phase.
        #[arg(long)]
        paper_literal_state: bool,
    },
    /// Test observed statistics against the classical bound of a dimension.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        claim: usize,
        /// Required for CSV input; overrides the file value for JSON.
        #[arg(long)]
        tyes: Option<String>,
    },
    /// Sample the entropy curves H^x(T) to a CSV file.
    Curves {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        pcrit: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4])]
        x: Vec<usize>,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Identity,
    Joint,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Identity => SearchMode::IdentityDecoding,
            ModeArg::Joint => SearchMode::Joint,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<brac_core::Error>() {
        Some(e) if e.is_infeasible() => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<()> {
    let emit = Emit { csv: cli.csv };
    match &cli.command {
        Command::Bounds { d, n, tyes, cap } => {
            let params = TaskParams::new(*d, *n)?;
            let cfg = PayoffConfig::from_decimal(*d, tyes)?;
            let report = bound_report(params, &cfg, *cap)?;
            emit.one(&report, bounds_table(&report))
        }
        Command::Pcrit { d, eps } => {
            let r = pcrit::find_pcrit(*d, *eps)?;
            emit.one(&r, pcrit_table(std::slice::from_ref(&r)))
        }
        Command::PcritTable { dims, eps } => {
            let results = pcrit_many(dims, *eps)?;
            emit.one(&results, pcrit_table(&results))
        }
        Command::Oracle {
            d,
            n,
            binary,
            tyes,
            mode,
        } => {
            let params = TaskParams::new(*d, *n)?;
            if *binary {
                let tyes = tyes.as_deref().context("--binary needs --tyes")?;
                let report = binary_oracle(params, tyes)?;
                let table = Table::key_value(&serde_json::to_value(&report)?);
                emit.one(&report, table)
            } else {
                let report = standard_oracle(params, (*mode).into())?;
                let table = Table::key_value(&serde_json::to_value(&report)?);
                emit.one(&report, table)
            }
        }
        Command::Simulate {
            d,
            tyes,
            export,
            paper_literal_state,
        } => {
            let convention = if *paper_literal_state {
                StateConvention::Unaligned
            } else {
                StateConvention::PhaseAligned
            };
            let report = simulate(*d, tyes, convention, export.as_deref())?;
            let table = Table::key_value(&serde_json::to_value(&report)?);
            emit.one(&report, table)
        }
        Command::Certify { input, claim, tyes } => {
            let format = StatisticsFormat::from_path(input);
            let table = StatisticsTable::load(input, format, tyes.as_deref())
                .with_context(|| format!("loading {}", input.display()))?;
            let report = certify_dimension(&table, *claim)?;
            let kv = Table::key_value(&serde_json::to_value(&report)?);
            emit.one(&report, kv)
        }
        Command::Curves {
            d,
            pcrit: pc,
            x,
            samples,
            out,
        } => {
            let table = pcrit::emit_curves(*d, *pc, x, *samples)?;
            std::fs::write(out, table.to_csv())
                .with_context(|| format!("writing {}", out.display()))?;
            let summary = curves_summary(&table, out);
            let kv = Table::key_value(&serde_json::to_value(&summary)?);
            emit.one(&summary, kv)
        }
    }
}

fn bounds_table(r: &brac_core::BoundReport) -> Table {
    let opt = |v: Option<f64>| v.map(exact::format_sig).unwrap_or_default();
    Table::new(
        &[
            "d",
            "n",
            "t_yes",
            "classical_standard",
            "classical_standard_fraction",
            "classical_binary",
            "classical_binary_fraction",
            "quantum_binary_n2",
            "gap",
            "provenance",
        ],
        vec![vec![
            r.d.to_string(),
            r.n.to_string(),
            r.t_yes.fraction.clone(),
            exact::format_sig(r.classical_standard.decimal),
            r.classical_standard.fraction.clone(),
            exact::format_sig(r.classical_binary.decimal),
            r.classical_binary.fraction.clone(),
            opt(r.quantum_binary_n2),
            opt(r.gap),
            serde_json::to_value(r.provenance)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_default(),
        ]],
    )
}

fn pcrit_table(rows: &[PcritResult]) -> Table {
    Table::new(
        &["d", "epsilon", "p_crit", "t_yes", "steps"],
        rows.iter()
            .map(|r| {
                vec![
                    r.d.to_string(),
                    exact::format_sig(r.epsilon),
                    exact::format_sig(r.p_crit),
                    exact::format_sig(r.t_yes),
                    r.steps.to_string(),
                ]
            })
            .collect(),
    )
}

/// One scan per dimension, each on its own thread.
fn pcrit_many(dims: &[usize], eps: f64) -> Result<Vec<PcritResult>> {
    let results: Vec<brac_core::Result<PcritResult>> = std::thread::scope(|s| {
        let handles: Vec<_> = dims
            .iter()
            .map(|&d| s.spawn(move || pcrit::find_pcrit(d, eps)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("p_crit scan thread panicked"))
            .collect()
    });
    Ok(results.into_iter().collect::<brac_core::Result<Vec<_>>>()?)
}

#[derive(Serialize)]
struct StandardOracleReport {
    d: usize,
    n: usize,
    mode: SearchMode,
    optimum: RationalValue,
    composition_value: RationalValue,
    matches_composition_value: bool,
    encoding: Vec<usize>,
    decoding: Vec<Vec<usize>>,
}

fn standard_oracle(params: TaskParams, mode: SearchMode) -> Result<StandardOracleReport> {
    let best = brute_force_standard(params, mode)?;
    let closed = standard_rac_classical_value(params, DEFAULT_COMPOSITION_CAP)?;
    Ok(StandardOracleReport {
        d: params.d(),
        n: params.n(),
        mode,
        optimum: RationalValue::from(&best.value),
        composition_value: RationalValue::from(&closed),
        matches_composition_value: best.value == closed,
        encoding: best.encoding.table().to_vec(),
        decoding: best.decoding.maps().to_vec(),
    })
}

#[derive(Serialize)]
struct BinaryOracleReport {
    d: usize,
    n: usize,
    t_yes: RationalValue,
    optimum: RationalValue,
    composition_value: RationalValue,
    matches_composition_value: bool,
    majority_value: RationalValue,
    majority_is_optimal: bool,
    encoding: Vec<usize>,
}

fn binary_oracle(params: TaskParams, tyes: &str) -> Result<BinaryOracleReport> {
    let cfg = PayoffConfig::from_decimal(params.d(), tyes)?;
    let best = brute_force_binary(params, &cfg)?;
    let closed = binary_rac_classical_value(params, &cfg, DEFAULT_COMPOSITION_CAP)?;
    let majority = EncodingStrategy::majority(params)?;
    let response = best_response_binary_decoding(&majority, &cfg)?;
    let majority_value = evaluate_binary_strategy(&majority, &response, &cfg)?;
    Ok(BinaryOracleReport {
        d: params.d(),
        n: params.n(),
        t_yes: RationalValue::from(cfg.t_yes()),
        optimum: RationalValue::from(&best.value),
        composition_value: RationalValue::from(&closed),
        matches_composition_value: best.value == closed,
        majority_is_optimal: majority_value == best.value,
        majority_value: RationalValue::from(&majority_value),
        encoding: best.encoding.table().to_vec(),
    })
}

#[derive(Serialize)]
struct SimulationReport {
    d: usize,
    t_yes: RationalValue,
    convention: StateConvention,
    #[serde(serialize_with = "exact::serialize_sig")]
    simulated: f64,
    #[serde(serialize_with = "exact::serialize_sig")]
    closed_form: f64,
    #[serde(serialize_with = "exact::serialize_sig")]
    deviation: f64,
    classical_bound: RationalValue,
    #[serde(serialize_with = "exact::serialize_sig")]
    gap: f64,
    #[serde(serialize_with = "exact::serialize_sig")]
    guess_probability: f64,
    exported: Option<String>,
}

fn simulate(
    d: usize,
    tyes: &str,
    convention: StateConvention,
    export: Option<&std::path::Path>,
) -> Result<SimulationReport> {
    let cfg = PayoffConfig::from_decimal(d, tyes)?;
    let simulated = simulate_binary_payoff_with(d, &cfg, convention)?;
    let closed_form = binary_quantum_n2(&cfg);
    if let Some(path) = export {
        let stats = quantum::protocol_statistics(d, convention)?;
        let table = StatisticsTable::from_protocol(&stats, &cfg)?;
        table
            .write(path, StatisticsFormat::from_path(path))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(SimulationReport {
        d,
        t_yes: RationalValue::from(cfg.t_yes()),
        convention,
        simulated,
        closed_form,
        deviation: simulated - closed_form,
        classical_bound: RationalValue::from(&binary_classical_n2(&cfg)),
        gap: quantum_classical_gap(&cfg),
        guess_probability: quantum_guess_probability(d)?,
        exported: export.map(|p| p.display().to_string()),
    })
}

#[derive(Serialize)]
struct CurvesSummary {
    d: usize,
    #[serde(serialize_with = "exact::serialize_sig")]
    p_crit: f64,
    x: Vec<usize>,
    rows: usize,
    out: String,
    /// Per x ≥ 2: smallest sampled H^1 − H^x inside [T_0, T_1^x].
    min_delta: Vec<MinDelta>,
}

#[derive(Serialize)]
struct MinDelta {
    x: usize,
    #[serde(serialize_with = "exact::serialize_opt_sig")]
    value: Option<f64>,
}

fn curves_summary(table: &CurveTable, out: &std::path::Path) -> CurvesSummary {
    let base = table.column(1);
    let min_delta = table
        .xs
        .iter()
        .enumerate()
        .filter(|&(_, &x)| x != 1)
        .map(|(col, &x)| {
            let value = base.and_then(|b| {
                table
                    .points
                    .iter()
                    .filter_map(|p| Some(p.entropies[b]? - p.entropies[col]?))
                    .min_by(f64::total_cmp)
            });
            MinDelta { x, value }
        })
        .collect();
    CurvesSummary {
        d: table.d,
        p_crit: table.p_crit,
        x: table.xs.clone(),
        rows: table.points.len(),
        out: out.display().to_string(),
        min_delta,
    }
}
