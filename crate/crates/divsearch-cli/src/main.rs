//! Experiment harness over the `divsearch` library.
//!
//! Reruns with the same flags and seeds produce byte-identical output:
//! iteration orders are fixed and all randomness is seeded.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use divsearch::adversary::{duel, forced_comparison_count, Regime};
use divsearch::divposet::{layer_decomposition, layer_grid};
use divsearch::exact::{optimal_tree_capped, tau_exact_capped, DEFAULT_CAP};
use divsearch::search::{budget_s1, budget_s2, Algorithm};
use divsearch::suites;
use divsearch::tablegen::{probe_values, random_table, TableOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "divsearch",
    about = "Search experiments on tables consistent with the division poset",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Rs1,
    Rs2,
    Rs2star,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::Rs1 => Regime::Rs1,
            RegimeArg::Rs2 => Regime::Rs2,
            RegimeArg::Rs2star => Regime::Rs2Star,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Chains,
    Table,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Algorithm {
        match a {
            AlgoArg::Chains => Algorithm::Chains,
            AlgoArg::Table => Algorithm::Table,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Structural,
    Essential,
    Quotient,
    Witness,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Print the layer decomposition of P_n
    Layers {
        #[arg(long)]
        n: u64,
        /// restrict to a single layer base
        #[arg(long)]
        base: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Budgets, forced counts and their ratios for a list of n
    Bounds {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite; nonzero exit on any violation
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 2000)]
        n_max: u64,
    },
    /// Run one search algorithm against an adversary
    Duel {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        /// write the transcript as JSON lines
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimax values with their bound sandwich
    Exact {
        #[arg(long, default_value_t = 10)]
        n_max: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// directory for optimal decision trees, one JSON per n
        #[arg(long)]
        emit_trees: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure comparison counts on random tables against the budgets
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// probes sampled per (n, seed) pair
        #[arg(long, default_value_t = 200)]
        probes: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).with_context(|| format!("writing {path:?}")),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Layers {
            n,
            base,
            format,
            out,
        } => {
            if n < 1 {
                bail!("--n must be at least 1");
            }
            if let Some(b) = base {
                if b < 1 || b > n || b % 2 == 0 || b % 3 == 0 {
                    bail!("--base must be in [1, n] and coprime to 6");
                }
            }
            let layers = match base {
                Some(b) => vec![layer_grid(b, n)],
                None => layer_decomposition(n),
            };
            let content = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&layers)?;
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut s = String::from("base,row,col,subscript\n");
                    for g in &layers {
                        for (r, row) in g.rows.iter().enumerate() {
                            for (c, e) in row.iter().enumerate() {
                                writeln!(s, "{},{},{},{}", g.base, r, c, e)?;
                            }
                        }
                    }
                    s
                }
            };
            emit(&out, &content)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Bounds { mut n_list, out } => {
            n_list.sort_unstable();
            n_list.dedup();
            let mut s = String::from("n,s1,s2,f_rs1,f_rs2,f_rs2s,r_s2,r_rs2s\n");
            for &n in &n_list {
                if n < 1 {
                    bail!("every n must be at least 1");
                }
                let s1 = budget_s1(n);
                let s2 = budget_s2(n);
                let f1 = forced_comparison_count(n, Regime::Rs1);
                let f2 = forced_comparison_count(n, Regime::Rs2);
                let f2s = forced_comparison_count(n, Regime::Rs2Star);
                writeln!(
                    s,
                    "{n},{s1},{s2},{f1},{f2},{f2s},{:.6},{:.6}",
                    s2 as f64 / n as f64,
                    f2s as f64 / n as f64
                )?;
            }
            emit(&out, &s)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { suite, n_max } => {
            let mut failures: Vec<serde_json::Value> = Vec::new();
            let run_structural = matches!(suite, Suite::Structural | Suite::All);
            let run_essential = matches!(suite, Suite::Essential | Suite::All);
            let run_quotient = matches!(suite, Suite::Quotient | Suite::All);
            let run_witness = matches!(suite, Suite::Witness | Suite::All);

            if run_structural {
                let v = suites::structural_suite(n_max);
                println!(
                    "structural: {} (n_max={n_max}, {} violations)",
                    pass(v.is_empty()),
                    v.len()
                );
                failures.extend(v.iter().map(|x| {
                    serde_json::json!({"suite": "structural", "base": x.base, "n": x.n, "rows": x.row_lens})
                }));
            }
            if run_essential {
                let v = suites::essential_suite(n_max);
                println!(
                    "essential:  {} (n_max={n_max}, {} violations)",
                    pass(v.is_empty()),
                    v.len()
                );
                failures.extend(v.iter().map(|(n, regime, x)| {
                    serde_json::json!({"suite": "essential", "n": n, "regime": regime.name(),
                                       "essential": x.essential, "cutter": x.cutter})
                }));
            }
            if run_quotient {
                let v = suites::quotient_suite(n_max);
                println!(
                    "quotient:   {} (n_max={n_max}, {} violations)",
                    pass(v.is_empty()),
                    v.len()
                );
                failures.extend(v.iter().map(|x| {
                    serde_json::json!({"suite": "quotient", "j1": x.j1, "j2": x.j2, "q": x.quotient})
                }));
            }
            if run_witness {
                let stats = suites::witness_feasibility_sweep(n_max, 4);
                println!(
                    "witness:    PASS (n_max={n_max}, {} duels, {} feasible pins, {} infeasible pins)",
                    stats.duels, stats.feasible_pins_checked, stats.infeasible_pins_checked
                );
            }
            if failures.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                println!("{}", serde_json::to_string(&failures)?);
                Ok(ExitCode::FAILURE)
            }
        }

        Command::Duel {
            n,
            regime,
            algo,
            trace,
            out,
        } => {
            if n < 1 {
                bail!("--n must be at least 1");
            }
            let regime: Regime = regime.into();
            let algorithm: Algorithm = algo.into();
            let report = duel(n, regime, algorithm);
            if let Some(path) = trace {
                fs::write(&path, report.transcript.to_json_lines())
                    .with_context(|| format!("writing {path:?}"))?;
            }
            let summary = serde_json::json!({
                "n": n,
                "regime": regime.name(),
                "algo": algorithm.name(),
                "comparisons": report.comparisons,
                "forced_lower_bound": report.forced_lower_bound,
                "budget": algorithm.budget(n),
                "outcome": if report.outcome.found { "found" } else { "not_found" },
                "validated": true,
            });
            let mut s = serde_json::to_string_pretty(&summary)?;
            s.push('\n');
            emit(&out, &s)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Exact {
            n_max,
            cap,
            emit_trees,
            out,
        } => {
            if n_max < 1 {
                bail!("--n-max must be at least 1");
            }
            if let Some(dir) = &emit_trees {
                fs::create_dir_all(dir).with_context(|| format!("creating {dir:?}"))?;
            }
            let mut s = String::from("n,tau,lower,upper\n");
            for n in 1..=n_max {
                let tau = tau_exact_capped(n, cap).map_err(|e| anyhow::anyhow!("{e}"))?;
                let lower = [Regime::Rs1, Regime::Rs2, Regime::Rs2Star]
                    .into_iter()
                    .map(|r| forced_comparison_count(n, r))
                    .max()
                    .unwrap();
                let upper = budget_s2(n).min(budget_s1(n)).min(n);
                writeln!(s, "{n},{tau},{lower},{upper}")?;
                if !(lower <= tau as u64 && tau as u64 <= upper) {
                    bail!("sandwich violated at n={n}: {lower} <= {tau} <= {upper}");
                }
                if let Some(dir) = &emit_trees {
                    let tree = optimal_tree_capped(n, cap).map_err(|e| anyhow::anyhow!("{e}"))?;
                    let path = dir.join(format!("tree_{n}.json"));
                    fs::write(&path, format!("{}\n", tree.to_json()))
                        .with_context(|| format!("writing {path:?}"))?;
                }
            }
            emit(&out, &s)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Bench {
            mut n_list,
            seed,
            probes,
            out,
        } => {
            n_list.sort_unstable();
            n_list.dedup();
            let mut s = String::from("n,algo,seed,probes,max_cmp,mean_cmp,budget\n");
            for &n in &n_list {
                if n < 1 {
                    bail!("every n must be at least 1");
                }
                for alg in [Algorithm::Chains, Algorithm::Table] {
                    for table_seed in seed..seed + 3 {
                        let table = random_table(n, table_seed);
                        let mut rng = ChaCha8Rng::seed_from_u64(table_seed ^ 0x9e3779b9);
                        let all_probes = probe_values(&table);
                        let mut worst = 0u64;
                        let mut total = 0u64;
                        let count = probes.min(all_probes.len() as u64);
                        for _ in 0..count {
                            let x = all_probes[rng.gen_range(0..all_probes.len())];
                            let mut oracle = TableOracle::new(&table, x);
                            let outcome = alg.run(n, &mut oracle);
                            worst = worst.max(outcome.comparisons_used);
                            total += outcome.comparisons_used;
                        }
                        writeln!(
                            s,
                            "{n},{},{table_seed},{count},{worst},{:.2},{}",
                            alg.name(),
                            total as f64 / count as f64,
                            alg.budget(n)
                        )?;
                    }
                }
            }
            emit(&out, &s)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
