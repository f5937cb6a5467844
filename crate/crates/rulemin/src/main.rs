use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use rulemin::cover::{build_cover_problem, export_lp, CoverMode, Rho};
use rulemin::formats::{content_hash, GraphFile, RuleSetFile, SystemFile};
use rulemin::grammar::{gen_grammar, GrammarEncoding, GrammarSpec};
use rulemin::inference::{
    build_candidate_pool, exact_filter, spurious_transitions, ClosureMode, SpuriousStatus,
};
use rulemin::pipeline::{run_pipeline, write_run_outputs, RunConfig};
use rulemin::rewrite::{enumerate_derivations, is_subrule};
use rulemin::tictactoe::{gen_tictactoe, GameSpec, Player, ReachabilityMode};
use rulemin::transition::{check, TransitionSystem};

/// Inference of minimal DPO graph transformation rule sets from explicit
/// transition systems.
#[derive(Parser)]
#[command(name = "rulemin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolveFlags {
    /// Objective mode: exact, lossy or generating.
    #[arg(long)]
    mode: Option<String>,
    /// Rule-count weight for lossy mode, as an integer or `p/q`.
    #[arg(long)]
    rho: Option<String>,
    /// Label generalization in candidate search: off, vertices or all.
    #[arg(long)]
    epsilon: Option<String>,
    /// Solver: bnb, greedy or export.
    #[arg(long)]
    solver: Option<String>,
    /// Solver timeout in seconds.
    #[arg(long)]
    timeout: Option<u64>,
    /// Candidate closure: max-rule-pairs or all-pairs.
    #[arg(long)]
    closure: Option<String>,
    /// Key-value config file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl SolveFlags {
    fn to_run_config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            cfg.apply_config_text(&text)?;
        }
        if let Some(mode) = &self.mode {
            cfg.mode = mode.parse()?;
        }
        if let Some(rho) = &self.rho {
            cfg.rho = rho.parse()?;
        }
        if let Some(epsilon) = &self.epsilon {
            cfg.epsilon = epsilon.parse()?;
        }
        if let Some(solver) = &self.solver {
            cfg.solver = solver.parse()?;
        }
        if let Some(timeout) = self.timeout {
            cfg.timeout = (timeout > 0).then(|| Duration::from_secs(timeout));
        }
        if let Some(closure) = &self.closure {
            cfg.closure = match closure.as_str() {
                "max-rule-pairs" => ClosureMode::MaxRulePairs,
                "all-pairs" => ClosureMode::AllPairs,
                other => bail!("unknown closure `{other}`"),
            };
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Infer a minimal generating rule set for a transition system.
    Infer {
        /// Transition system file.
        #[arg(short, long)]
        input: PathBuf,
        /// Directory for run outputs (rules, summary, manifest).
        #[arg(long, default_value = "run")]
        out_dir: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Check a rule set against a transition system; exits nonzero when the
    /// rules are not generating (or, with --exact, not exact).
    Check {
        #[arg(short, long)]
        input: PathBuf,
        /// Rule set file.
        #[arg(short, long)]
        rules: PathBuf,
        /// Additionally require an empty spurious set.
        #[arg(long)]
        exact: bool,
    },
    /// Apply a rule to a graph and print every derivation.
    Apply {
        /// Rule set file.
        #[arg(short, long)]
        rules: PathBuf,
        /// Which rule of the set to apply.
        #[arg(long, default_value_t = 0)]
        rule_index: usize,
        /// Host graph file.
        #[arg(short, long)]
        graph: PathBuf,
    },
    /// Compute the complexity K(S): the size of a minimal exact generating
    /// rule set, or a certificate that none exists.
    Complexity {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Build and dump the candidate pool with coverage and spurious counts.
    Candidates {
        #[arg(short, long)]
        input: PathBuf,
        /// Write the subrule Hasse diagram in DOT format.
        #[arg(long)]
        hasse: Option<PathBuf>,
        /// Count each candidate's spurious transitions exactly.
        #[arg(long)]
        spurious_counts: bool,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Generate one of the bundled experiment systems.
    Generate {
        #[command(subcommand)]
        what: GenerateCommand,
    },
    /// Export the cover problem as an integer linear program in LP format.
    ExportLp {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
    },
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Regular grammar sentential forms as path graphs.
    Grammar {
        /// Encoding: s0 (undirected), s1 (directed), s2 (directed, markers).
        #[arg(long, default_value = "s2")]
        encoding: String,
        /// Longest sentential form kept as an input graph.
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Tic-tac-toe non-losing strategy for one player.
    Tictactoe {
        /// Player: o or x.
        #[arg(long, default_value = "o")]
        player: String,
        /// Reachability discipline: legal, both or modeled.
        #[arg(long, default_value = "legal")]
        reachability: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn load_system(path: &Path) -> Result<(TransitionSystem, BTreeMap<String, String>)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SystemFile =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    let system = file.to_system()?;
    let mut hashes = BTreeMap::new();
    hashes.insert(path.display().to_string(), content_hash(&bytes));
    Ok((system, hashes))
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Infer {
            input,
            out_dir,
            flags,
        } => {
            let (system, hashes) = load_system(&input)?;
            let cfg = flags.to_run_config()?;
            let report = run_pipeline(&system, &cfg)?;
            print!("{}", report.summary());
            let written = write_run_outputs(&out_dir, &system, &report, &hashes)?;
            for path in written {
                println!("wrote {}", path.display());
            }
            if !report.succeeded() {
                bail!("inference did not produce a verified rule set");
            }
        }
        Command::Check {
            input,
            rules,
            exact,
        } => {
            let (system, _) = load_system(&input)?;
            let text = std::fs::read_to_string(&rules)?;
            let rsf: RuleSetFile = serde_json::from_str(&text)?;
            let (_, rule_list) = rsf.to_rules()?;
            let report = check(
                &rule_list,
                &system,
                rulemin::transition::DEFAULT_DERIVATION_CAP,
            )?;
            println!(
                "generating: {} (missing {})",
                report.is_generating(),
                report.missing.len()
            );
            println!(
                "exact: {} (spurious {})",
                report.is_exact(),
                report.spurious.len()
            );
            if !report.is_generating() || (exact && !report.is_exact()) {
                bail!("rule set rejected");
            }
        }
        Command::Apply {
            rules,
            rule_index,
            graph,
        } => {
            let text = std::fs::read_to_string(&rules)?;
            let rsf: RuleSetFile = serde_json::from_str(&text)?;
            let (poset, rule_list) = rsf.to_rules()?;
            let rule = rule_list
                .get(rule_index)
                .with_context(|| format!("rule index {rule_index} out of range"))?;
            let gtext = std::fs::read_to_string(&graph)?;
            let gf: GraphFile = serde_json::from_str(&gtext)?;
            let (host, _) = gf.to_graph(&poset)?;
            let derivations = enumerate_derivations(rule, &host)?;
            println!("{} derivation(s)", derivations.len());
            for (i, d) in derivations.iter().enumerate() {
                let out = GraphFile::from_graph(&d.output);
                println!("derivation {i}: {}", serde_json::to_string(&out)?);
            }
        }
        Command::Complexity { input, flags } => {
            let (system, _) = load_system(&input)?;
            let cfg = flags.to_run_config()?;
            match rulemin::cover::complexity(&system, &cfg.pool_config(), cfg.timeout)? {
                rulemin::cover::ComplexityOutcome::Complexity { k, witness } => {
                    println!("K = {k}");
                    println!("witness rules: {}", witness.len());
                }
                rulemin::cover::ComplexityOutcome::NoExactSet { certificate } => {
                    println!("no exact generating rule set exists");
                    for w in certificate.iter().take(5) {
                        println!(
                            "  transition {} reapplies in foreign context on input {}",
                            w.transition_index, w.input_index
                        );
                    }
                    bail!("no exact set");
                }
            }
        }
        Command::Candidates {
            input,
            hasse,
            spurious_counts,
            flags,
        } => {
            let (system, _) = load_system(&input)?;
            let cfg = flags.to_run_config()?;
            let pool = build_candidate_pool(&system, &cfg.pool_config())?;
            println!("universe: {} transitions", pool.universe);
            println!("candidates: {}", pool.len());
            for (i, c) in pool.candidates.iter().enumerate() {
                let spur = if spurious_counts {
                    format!(
                        "{}",
                        spurious_transitions(&c.rule, &system, cfg.derivation_cap)?.len()
                    )
                } else {
                    match c.spurious {
                        SpuriousStatus::Clean => "0".to_string(),
                        SpuriousStatus::Dirty => ">0".to_string(),
                        SpuriousStatus::Unknown => "?".to_string(),
                    }
                };
                println!(
                    "candidate {i} code={} coverage={} |coverage|={} spurious={spur}",
                    &c.rule.code().hex()[..16],
                    c.coverage.hex(),
                    c.coverage.count(),
                );
            }
            if let Some(path) = hasse {
                let mut dot = String::from("digraph subrules {\n");
                for i in 0..pool.len() {
                    for j in 0..pool.len() {
                        if i != j
                            && is_subrule(&pool.candidates[i].rule, &pool.candidates[j].rule)?
                                .is_some()
                        {
                            dot.push_str(&format!("  c{i} -> c{j};\n"));
                        }
                    }
                }
                dot.push_str("}\n");
                std::fs::write(&path, dot)?;
                println!("wrote {}", path.display());
            }
        }
        Command::Generate { what } => match what {
            GenerateCommand::Grammar {
                encoding,
                max_len,
                output,
            } => {
                let spec = GrammarSpec {
                    encoding: encoding.parse::<GrammarEncoding>()?,
                    max_len,
                };
                let system = gen_grammar(&spec)?;
                let file = SystemFile::from_system(&system);
                std::fs::write(&output, serde_json::to_string_pretty(&file)?)?;
                println!(
                    "wrote {} (|U| = {}, |T| = {})",
                    output.display(),
                    system.inputs().len(),
                    system.transition_count()
                );
            }
            GenerateCommand::Tictactoe {
                player,
                reachability,
                output,
            } => {
                let spec = GameSpec {
                    player: player.parse::<Player>()?,
                    reachability: reachability.parse::<ReachabilityMode>()?,
                };
                let system = gen_tictactoe(&spec)?;
                let file = SystemFile::from_system(&system);
                std::fs::write(&output, serde_json::to_string_pretty(&file)?)?;
                println!(
                    "wrote {} (|U| = {}, |T| = {})",
                    output.display(),
                    system.inputs().len(),
                    system.transition_count()
                );
            }
        },
        Command::ExportLp {
            input,
            output,
            flags,
        } => {
            let (system, _) = load_system(&input)?;
            let cfg = flags.to_run_config()?;
            let pool = build_candidate_pool(&system, &cfg.pool_config())?;
            let pool = if cfg.mode == CoverMode::Exact {
                exact_filter(&pool, &system, cfg.derivation_cap)?
            } else {
                pool
            };
            let rho: Rho = cfg.rho;
            let problem = build_cover_problem(&pool, &system, cfg.mode, rho, cfg.derivation_cap)?;
            std::fs::write(&output, export_lp(&problem))?;
            println!("wrote {}", output.display());
        }
    }
    Ok(())
}
