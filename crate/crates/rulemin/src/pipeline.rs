//! End-to-end inference pipeline and run configuration.
//!
//! A run takes a transition system through maximum rules, the candidate
//! pool, the cover problem and the solver, verifies the witness rule set by
//! re-running generation, and writes the outputs (rule set, summary,
//! manifest) into a run directory. Every stage is timed. Configuration can
//! come from a key-value config file, with command-line flags taking
//! precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::cover::{
    build_cover_problem, export_lp, solve_exact, solve_greedy, CoverMode, CoverProblem, Rho,
    Solution,
};
use crate::error::{Error, Result};
use crate::formats::{content_hash, rule_to_gml, RuleSetFile};
use crate::inference::{
    build_candidate_pool, exact_filter, CandidatePool, ClosureMode, EpsilonMode, PoolConfig,
};
use crate::rule::Rule;
use crate::transition::{
    check, detect_pathology, GenerationReport, PathologyWitness, TransitionSystem,
    DEFAULT_DERIVATION_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverChoice {
    #[default]
    BranchAndBound,
    Greedy,
    Export,
}

impl std::str::FromStr for SolverChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<SolverChoice> {
        match s {
            "bnb" => Ok(SolverChoice::BranchAndBound),
            "greedy" => Ok(SolverChoice::Greedy),
            "export" => Ok(SolverChoice::Export),
            other => Err(Error::Parse(format!("unknown solver `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: CoverMode,
    pub rho: Rho,
    pub epsilon: EpsilonMode,
    pub closure: ClosureMode,
    pub solver: SolverChoice,
    pub timeout: Option<Duration>,
    pub derivation_cap: usize,
    pub max_candidates: usize,
    pub mcs_node_cap: usize,
    pub greedy_extension: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let pool = PoolConfig::default();
        RunConfig {
            mode: CoverMode::Exact,
            rho: Rho::one(),
            epsilon: EpsilonMode::Off,
            closure: ClosureMode::MaxRulePairs,
            solver: SolverChoice::BranchAndBound,
            timeout: None,
            derivation_cap: DEFAULT_DERIVATION_CAP,
            max_candidates: pool.max_candidates,
            mcs_node_cap: pool.mcs_node_cap,
            greedy_extension: false,
        }
    }
}

impl RunConfig {
    pub fn pool_config(&self) -> PoolConfig {
        PoolConfig {
            epsilon: self.epsilon,
            closure: self.closure,
            max_candidates: self.max_candidates,
            mcs_node_cap: self.mcs_node_cap,
            derivation_cap: self.derivation_cap,
            compute_spurious: self.mode != CoverMode::Generating,
            prune_dirty_pairs: self.mode == CoverMode::Exact,
            greedy_extension: self.greedy_extension,
        }
    }

    /// Applies `key = value` lines from a config file; `#` starts a comment.
    /// Recognized keys mirror the command-line flags.
    pub fn apply_config_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "mode" => self.mode = value.parse()?,
                "rho" => self.rho = value.parse()?,
                "epsilon" => self.epsilon = value.parse()?,
                "solver" => self.solver = value.parse()?,
                "closure" => {
                    self.closure = match value {
                        "max-rule-pairs" => ClosureMode::MaxRulePairs,
                        "all-pairs" => ClosureMode::AllPairs,
                        other => {
                            return Err(Error::Parse(format!("unknown closure `{other}`")))
                        }
                    }
                }
                "timeout" => {
                    let secs: u64 = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad timeout `{value}`")))?;
                    self.timeout = (secs > 0).then(|| Duration::from_secs(secs));
                }
                "derivation_cap" => {
                    self.derivation_cap = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad derivation_cap `{value}`")))?
                }
                "max_candidates" => {
                    self.max_candidates = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad max_candidates `{value}`")))?
                }
                "mcs_node_cap" => {
                    self.mcs_node_cap = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad mcs_node_cap `{value}`")))?
                }
                other => return Err(Error::Parse(format!("unknown config key `{other}`"))),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct StageTimings {
    pub stages: Vec<(String, Duration)>,
}

impl StageTimings {
    fn push(&mut self, name: &str, d: Duration) {
        self.stages.push((name.to_string(), d));
    }
}

/// Everything a pipeline run produces.
#[derive(Debug)]
pub struct PipelineReport {
    pub mode: CoverMode,
    pub rho: Rho,
    /// Present when exact mode aborted because no exact set exists.
    pub pathology: Option<Vec<PathologyWitness>>,
    pub pool_size: usize,
    pub filtered_pool_size: Option<usize>,
    pub solution: Option<Solution>,
    pub rules: Vec<Rule>,
    pub verification: Option<GenerationReport>,
    pub lp_text: Option<String>,
    pub timings: StageTimings,
}

impl PipelineReport {
    /// Spurious transitions the witness incurs (lossy mode).
    pub fn spurious_count(&self) -> usize {
        self.verification
            .as_ref()
            .map(|v| v.spurious.len())
            .unwrap_or(0)
    }

    pub fn succeeded(&self) -> bool {
        if self.pathology.is_some() {
            return false;
        }
        match (&self.solution, &self.verification) {
            (Some(_), Some(v)) => match self.mode {
                CoverMode::Exact => v.is_exact(),
                _ => v.is_generating(),
            },
            (Some(_), None) => self.lp_text.is_some(),
            _ => false,
        }
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("mode: {:?}\n", self.mode));
        out.push_str(&format!("rho: {}\n", self.rho));
        if let Some(p) = &self.pathology {
            out.push_str(&format!(
                "no exact generating rule set exists: {} certificate pair(s)\n",
                p.len()
            ));
            return out;
        }
        out.push_str(&format!("candidates: {}", self.pool_size));
        if let Some(f) = self.filtered_pool_size {
            out.push_str(&format!(" ({f} spurious-free)"));
        }
        out.push('\n');
        if let Some(s) = &self.solution {
            out.push_str(&format!(
                "rules: {} ({})\n",
                s.chosen.len(),
                if s.optimal { "proved optimal" } else { "incumbent" }
            ));
        }
        if let Some(v) = &self.verification {
            out.push_str(&format!(
                "verification: generating={} exact={} spurious={}\n",
                v.is_generating(),
                v.is_exact(),
                v.spurious.len()
            ));
        }
        for (name, d) in &self.timings.stages {
            out.push_str(&format!("time[{name}]: {d:?}\n"));
        }
        out
    }
}

/// Runs the full pipeline: candidate pool, cover problem, solver, witness
/// verification. In exact mode the pathology check runs first and a nonempty
/// certificate short-circuits the run.
pub fn run_pipeline(system: &TransitionSystem, config: &RunConfig) -> Result<PipelineReport> {
    let mut timings = StageTimings::default();
    let mut report = PipelineReport {
        mode: config.mode,
        rho: config.rho,
        pathology: None,
        pool_size: 0,
        filtered_pool_size: None,
        solution: None,
        rules: Vec::new(),
        verification: None,
        lp_text: None,
        timings: StageTimings::default(),
    };

    if config.mode == CoverMode::Exact {
        let t = Instant::now();
        let pathology = detect_pathology(system, config.derivation_cap)?;
        timings.push("pathology", t.elapsed());
        if !pathology.is_empty() {
            report.pathology = Some(pathology);
            report.timings = timings;
            return Ok(report);
        }
    }

    let t = Instant::now();
    let pool = build_candidate_pool(system, &config.pool_config())?;
    timings.push("pool", t.elapsed());
    report.pool_size = pool.len();

    let pool_for_cover: CandidatePool = if config.mode == CoverMode::Exact {
        let t = Instant::now();
        let filtered = exact_filter(&pool, system, config.derivation_cap)?;
        timings.push("filter", t.elapsed());
        report.filtered_pool_size = Some(filtered.len());
        filtered
    } else {
        pool
    };

    let t = Instant::now();
    let problem: CoverProblem = build_cover_problem(
        &pool_for_cover,
        system,
        config.mode,
        config.rho,
        config.derivation_cap,
    )?;
    timings.push("problem", t.elapsed());

    if config.solver == SolverChoice::Export {
        report.lp_text = Some(export_lp(&problem));
        report.solution = Some(solve_greedy(&problem));
        report.timings = timings;
        return Ok(report);
    }

    let t = Instant::now();
    let solution = match config.solver {
        SolverChoice::Greedy => solve_greedy(&problem),
        _ => solve_exact(&problem, config.timeout),
    };
    timings.push("solve", t.elapsed());

    report.rules = solution
        .chosen
        .iter()
        .map(|&i| pool_for_cover.candidates[i].rule.clone())
        .collect();
    report.solution = Some(solution);

    let t = Instant::now();
    let verification = check(&report.rules, system, config.derivation_cap)?;
    timings.push("verify", t.elapsed());
    report.verification = Some(verification);
    report.timings = timings;
    Ok(report)
}

/// Writes run outputs into a directory: the witness rule set, a GML dump,
/// the summary, the LP text when exported, and a manifest naming the tool
/// version and the hashes of the inputs.
pub fn write_run_outputs(
    dir: &Path,
    system: &TransitionSystem,
    report: &PipelineReport,
    input_files: &BTreeMap<String, String>,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let write = |name: &str, contents: String| -> Result<PathBuf> {
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        Ok(path)
    };

    if !report.rules.is_empty() {
        let rsf = RuleSetFile::from_rules(system.poset(), &report.rules);
        written.push(write("rules.json", serde_json::to_string_pretty(&rsf)?.to_string())?);
        let mut gml = String::new();
        for (i, rule) in report.rules.iter().enumerate() {
            gml.push_str(&rule_to_gml(rule, &format!("r{i}")));
            gml.push('\n');
        }
        written.push(write("rules.gml", gml)?);
    }
    if let Some(lp) = &report.lp_text {
        written.push(write("problem.lp", lp.clone())?);
    }
    written.push(write("summary.txt", report.summary())?);

    let mut manifest = String::new();
    manifest.push_str(&format!("tool: rulemin {}\n", env!("CARGO_PKG_VERSION")));
    for (name, hash) in input_files {
        manifest.push_str(&format!("input: {name} fnv1a64={hash}\n"));
    }
    let system_text = serde_json::to_string(&crate::formats::SystemFile::from_system(system))?;
    manifest.push_str(&format!(
        "system: |U|={} |T|={} fnv1a64={}\n",
        system.inputs().len(),
        system.transition_count(),
        content_hash(system_text.as_bytes())
    ));
    written.push(write("manifest.txt", manifest)?);
    Ok(written)
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error::Parse(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_parses() {
        let mut cfg = RunConfig::default();
        cfg.apply_config_text(
            "mode = lossy\nrho = 3/2 # comment\nepsilon = vertices\ntimeout = 30\n",
        )
        .unwrap();
        assert_eq!(cfg.mode, CoverMode::Lossy);
        assert_eq!(cfg.rho, Rho::new(3, 2).unwrap());
        assert_eq!(cfg.epsilon, EpsilonMode::Vertices);
        assert_eq!(cfg.timeout, Some(Duration::from_secs(30)));
        assert!(cfg.apply_config_text("nonsense").is_err());
        assert!(cfg.apply_config_text("bad = key").is_err());
    }
}
