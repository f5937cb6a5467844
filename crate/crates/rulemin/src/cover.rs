//! The cover problem over a candidate pool and its exact solver.
//!
//! Selecting a minimal generating rule set is set cover over the coverage
//! sets; the lossy variant additionally pays for every spurious transition
//! any chosen rule generates, with a rational weight `rho` scaling the
//! rule-count term. The solver is branch-and-bound over binary inclusion
//! variables with a greedy incumbent, dominance and essential-element
//! preprocessing, and deterministic tie-breaking by candidate order, so the
//! reported optimum is reproducible. Spurious variables are resolved
//! implicitly as the union over chosen rules.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::bits::Bits;
use crate::canon::CanonicalCode;
use crate::error::{Error, Result};
use crate::inference::{
    build_candidate_pool, exact_filter, spurious_transitions, CandidatePool, PoolConfig,
    SpuriousStatus,
};
use crate::rule::Rule;
use crate::transition::{check, detect_pathology, PathologyWitness, Transition, TransitionSystem};

/// Rational weight on the rule-count term of the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rho {
    pub num: u64,
    pub den: u64,
}

impl Rho {
    pub fn new(num: u64, den: u64) -> Result<Rho> {
        if den == 0 {
            return Err(Error::Parse("rho denominator must be nonzero".into()));
        }
        let g = gcd(num.max(1), den);
        Ok(Rho {
            num: if num == 0 { 0 } else { num / g },
            den: den / g,
        })
    }

    pub fn one() -> Rho {
        Rho { num: 1, den: 1 }
    }
}

impl std::fmt::Display for Rho {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Rho {
    type Err = Error;
    fn from_str(s: &str) -> Result<Rho> {
        let bad = |_| Error::Parse(format!("invalid rho `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => Rho::new(n.parse().map_err(bad)?, d.parse().map_err(bad)?),
            None => Rho::new(s.parse().map_err(bad)?, 1),
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Smallest spurious-free cover; requires a spurious-filtered pool.
    Exact,
    /// Smallest cover ignoring spurious transitions entirely.
    Generating,
    /// Weighted trade-off `rho * |rules| + |spurious|`.
    Lossy,
}

impl std::str::FromStr for CoverMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<CoverMode> {
        match s {
            "exact" => Ok(CoverMode::Exact),
            "generating" => Ok(CoverMode::Generating),
            "lossy" => Ok(CoverMode::Lossy),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CoverProblem {
    pub mode: CoverMode,
    pub rho: Rho,
    /// Weight on each spurious transition; the paper's objective uses 1.
    pub spurious_weight: u64,
    pub universe: usize,
    /// Per-candidate coverage over the universe.
    pub sets: Vec<Bits>,
    /// Per-candidate spurious transitions (empty outside lossy mode).
    pub spurious_sets: Vec<Bits>,
    pub spurious_universe: usize,
    /// Spurious transitions by index, for reporting.
    pub spurious_witnesses: Vec<Transition>,
    /// Canonical codes, the deterministic tie-break order.
    pub keys: Vec<CanonicalCode>,
}

/// A (proved or incumbent) solution of a cover problem.
#[derive(Debug, Clone)]
pub struct Solution {
    pub chosen: Vec<usize>,
    /// Scaled objective `rho.num * |chosen| + rho.den * w * |spurious|`.
    pub objective_scaled: u128,
    pub spurious_incurred: Vec<usize>,
    pub optimal: bool,
}

impl Solution {
    /// Objective as an exact rational `(num, den)` in the unscaled units
    /// `rho * |chosen| + w * |spurious|`.
    pub fn objective(&self, problem: &CoverProblem) -> (u128, u128) {
        (self.objective_scaled, problem.rho.den as u128)
    }
}

/// Builds the cover problem for a pool. In exact mode the pool must already
/// be spurious-free; in lossy mode every candidate's spurious transitions
/// are enumerated to create the linking structure.
pub fn build_cover_problem(
    pool: &CandidatePool,
    system: &TransitionSystem,
    mode: CoverMode,
    rho: Rho,
    derivation_cap: usize,
) -> Result<CoverProblem> {
    let sets: Vec<Bits> = pool.candidates.iter().map(|c| c.coverage.clone()).collect();
    let keys: Vec<CanonicalCode> = pool
        .candidates
        .iter()
        .map(|c| c.rule.code().clone())
        .collect();
    // Feasibility: every transition coverable.
    let mut covered = Bits::new(pool.universe);
    for s in &sets {
        covered.union_with(s);
    }
    if covered.count() != pool.universe {
        let missing = (0..pool.universe).find(|&i| !covered.get(i)).unwrap();
        return Err(Error::Infeasible(format!(
            "transition {missing} is covered by no candidate"
        )));
    }
    let mut spurious_sets = vec![Bits::new(0); sets.len()];
    let mut spurious_universe = 0;
    let mut spurious_witnesses = Vec::new();
    match mode {
        CoverMode::Exact => {
            if pool
                .candidates
                .iter()
                .any(|c| c.spurious != SpuriousStatus::Clean)
            {
                return Err(Error::Infeasible(
                    "exact mode requires a spurious-filtered pool".into(),
                ));
            }
        }
        CoverMode::Generating => {}
        CoverMode::Lossy => {
            let mut index: BTreeMap<CanonicalCode, usize> = BTreeMap::new();
            let mut per_candidate: Vec<Vec<usize>> = Vec::with_capacity(sets.len());
            for c in &pool.candidates {
                let mut local = Vec::new();
                for (code, t) in spurious_transitions(&c.rule, system, derivation_cap)? {
                    let next = index.len();
                    let id = *index.entry(code).or_insert_with(|| {
                        spurious_witnesses.push(t);
                        next
                    });
                    local.push(id);
                }
                per_candidate.push(local);
            }
            spurious_universe = index.len();
            spurious_sets = per_candidate
                .into_iter()
                .map(|ids| {
                    let mut b = Bits::new(spurious_universe);
                    for id in ids {
                        b.set(id);
                    }
                    b
                })
                .collect();
        }
    }
    Ok(CoverProblem {
        mode,
        rho,
        spurious_weight: 1,
        universe: pool.universe,
        sets,
        spurious_sets,
        spurious_universe,
        spurious_witnesses,
        keys,
    })
}

/// Scaled cost of adding a candidate given the spurious transitions already
/// incurred.
fn step_cost(problem: &CoverProblem, cand: usize, spur_acc: &Bits) -> u128 {
    let mut cost = problem.rho.num as u128;
    if problem.mode == CoverMode::Lossy {
        let mut new = problem.spurious_sets[cand].clone();
        new.subtract(spur_acc);
        cost += (problem.rho.den as u128) * (problem.spurious_weight as u128) * new.count() as u128;
    }
    cost
}

/// Cover by repeated best-marginal-gain choice: most newly covered
/// transitions per unit of scaled cost, ties broken by canonical order.
pub fn solve_greedy(problem: &CoverProblem) -> Solution {
    let mut uncovered = Bits::new(problem.universe);
    for i in 0..problem.universe {
        uncovered.set(i);
    }
    let mut spur_acc = Bits::new(problem.spurious_universe);
    let mut chosen = Vec::new();
    let mut cost: u128 = 0;
    while !uncovered.is_empty() {
        let mut best: Option<(usize, usize, u128)> = None; // (idx, new, cost)
        for (i, s) in problem.sets.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let new = s.intersection_count(&uncovered);
            if new == 0 {
                continue;
            }
            let c = step_cost(problem, i, &spur_acc).max(1);
            let better = match best {
                None => true,
                // Compare new/c > bnew/bc by cross multiplication.
                Some((bi, bnew, bc)) => {
                    let lhs = new as u128 * bc;
                    let rhs = bnew as u128 * c;
                    lhs > rhs || (lhs == rhs && problem.keys[i] < problem.keys[bi])
                }
            };
            if better {
                best = Some((i, new, c));
            }
        }
        let (i, _, _) = best.expect("feasible problems always progress");
        cost += step_cost(problem, i, &spur_acc);
        uncovered.subtract(&problem.sets[i]);
        spur_acc.union_with(&problem.spurious_sets[i]);
        chosen.push(i);
    }
    chosen.sort_unstable();
    Solution {
        chosen,
        objective_scaled: cost,
        spurious_incurred: spur_acc.ones().collect(),
        optimal: false,
    }
}

struct BnB<'a> {
    problem: &'a CoverProblem,
    /// For each universe element, the candidates covering it.
    covers: Vec<Vec<usize>>,
    covers_bits: Vec<Bits>,
    alive: Vec<bool>,
    deadline: Option<Instant>,
    timed_out: bool,
    best: Solution,
    nodes: u64,
}

/// Provably optimal solution by branch-and-bound; on timeout the best
/// incumbent is returned with `optimal = false`.
///
/// Preprocessing iterates three classic reductions to a fixpoint before the
/// search: essential candidates (an element with a single live cover forces
/// it), candidate dominance (covered-by another at no extra spurious cost),
/// and element dominance (an element whose covers include another element's
/// covers is satisfied automatically and can be dropped).
pub fn solve_exact(problem: &CoverProblem, timeout: Option<Duration>) -> Solution {
    let n = problem.sets.len();
    let mut alive = vec![true; n];
    let mut uncovered = Bits::new(problem.universe);
    for i in 0..problem.universe {
        uncovered.set(i);
    }
    let mut forced: Vec<usize> = Vec::new();
    let mut forced_cost: u128 = 0;
    let mut spur_acc = Bits::new(problem.spurious_universe);

    loop {
        let mut changed = false;
        // Essential candidates.
        loop {
            let mut pick = None;
            'elems: for e in uncovered.ones() {
                let mut only = None;
                for (i, s) in problem.sets.iter().enumerate() {
                    if alive[i] && s.get(e) {
                        if only.is_some() {
                            continue 'elems;
                        }
                        only = Some(i);
                    }
                }
                if let Some(i) = only {
                    pick = Some(i);
                    break;
                }
            }
            let Some(i) = pick else { break };
            forced_cost += step_cost(problem, i, &spur_acc);
            spur_acc.union_with(&problem.spurious_sets[i]);
            uncovered.subtract(&problem.sets[i]);
            forced.push(i);
            alive[i] = false;
            changed = true;
        }
        // Candidate dominance over the uncovered part.
        let restricted: Vec<Bits> = problem
            .sets
            .iter()
            .map(|s| {
                let mut b = s.clone();
                b.intersect_with(&uncovered);
                b
            })
            .collect();
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            if restricted[i].is_empty() {
                alive[i] = false;
                continue;
            }
            for j in 0..n {
                if i == j || !alive[j] || !alive[i] {
                    continue;
                }
                if !restricted[i].is_subset_of(&restricted[j]) {
                    continue;
                }
                let spur_ok = problem.mode != CoverMode::Lossy || {
                    let mut sj = problem.spurious_sets[j].clone();
                    sj.subtract(&spur_acc);
                    let mut si = problem.spurious_sets[i].clone();
                    si.subtract(&spur_acc);
                    sj.is_subset_of(&si)
                };
                if !spur_ok {
                    continue;
                }
                let strict = restricted[i] != restricted[j]
                    || (problem.mode == CoverMode::Lossy
                        && problem.spurious_sets[i] != problem.spurious_sets[j]);
                if strict || problem.keys[j] < problem.keys[i] {
                    alive[i] = false;
                    changed = true;
                }
            }
        }
        // Element dominance: drop e' when everything covering e covers e'.
        let mut covers_of: Vec<(usize, Bits)> = Vec::new();
        for e in uncovered.ones() {
            let mut b = Bits::new(n);
            for (i, s) in problem.sets.iter().enumerate() {
                if alive[i] && s.get(e) {
                    b.set(i);
                }
            }
            covers_of.push((e, b));
        }
        for (e1, b1) in &covers_of {
            for (e2, b2) in &covers_of {
                if e1 != e2
                    && uncovered.get(*e1)
                    && uncovered.get(*e2)
                    && b1.is_subset_of(b2)
                    && (b1 != b2 || e1 < e2)
                {
                    uncovered.clear(*e2);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut covers: Vec<Vec<usize>> = vec![Vec::new(); problem.universe];
    for (i, s) in problem.sets.iter().enumerate() {
        if alive[i] {
            for e in s.ones() {
                covers[e].push(i);
            }
        }
    }
    let covers_bits: Vec<Bits> = covers
        .iter()
        .map(|c| {
            let mut b = Bits::new(n);
            for &i in c {
                b.set(i);
            }
            b
        })
        .collect();

    if std::env::var_os("RULEMIN_SOLVER_DEBUG").is_some() {
        eprintln!(
            "solver: {} candidates alive of {}, {} forced, {} elements left",
            alive.iter().filter(|&&a| a).count(),
            n,
            forced.len(),
            uncovered.count()
        );
    }

    // Greedy incumbent completing the forced part.
    let incumbent = greedy_completion(problem, &forced, forced_cost, &uncovered, &spur_acc);
    let mut bnb = BnB {
        problem,
        covers,
        covers_bits,
        alive,
        deadline: timeout.map(|d| Instant::now() + d),
        timed_out: false,
        best: incumbent,
        nodes: 0,
    };
    let mut state = NodeState {
        uncovered,
        spur_acc,
        chosen: forced,
        cost: forced_cost,
    };
    bnb.recurse(&mut state);
    let mut best = bnb.best;
    best.optimal = !bnb.timed_out;
    best.chosen.sort_unstable();
    best
}

/// Greedy cover of the remaining elements starting from a forced prefix.
fn greedy_completion(
    problem: &CoverProblem,
    forced: &[usize],
    forced_cost: u128,
    uncovered: &Bits,
    spur_acc: &Bits,
) -> Solution {
    let mut uncovered = uncovered.clone();
    let mut spur = spur_acc.clone();
    let mut chosen: Vec<usize> = forced.to_vec();
    let mut cost = forced_cost;
    while !uncovered.is_empty() {
        let mut best: Option<(usize, usize, u128)> = None;
        for (i, s) in problem.sets.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let new = s.intersection_count(&uncovered);
            if new == 0 {
                continue;
            }
            let c = step_cost(problem, i, &spur).max(1);
            let better = match best {
                None => true,
                Some((bi, bnew, bc)) => {
                    let lhs = new as u128 * bc;
                    let rhs = bnew as u128 * c;
                    lhs > rhs || (lhs == rhs && problem.keys[i] < problem.keys[bi])
                }
            };
            if better {
                best = Some((i, new, c));
            }
        }
        let (i, _, _) = best.expect("preprocessed problems stay feasible");
        cost += step_cost(problem, i, &spur);
        uncovered.subtract(&problem.sets[i]);
        spur.union_with(&problem.spurious_sets[i]);
        chosen.push(i);
    }
    chosen.sort_unstable();
    Solution {
        chosen,
        objective_scaled: cost,
        spurious_incurred: spur.ones().collect(),
        optimal: false,
    }
}

struct NodeState {
    uncovered: Bits,
    spur_acc: Bits,
    chosen: Vec<usize>,
    cost: u128,
}

impl BnB<'_> {
    fn lower_bound(&self, state: &NodeState) -> u128 {
        let remaining = state.uncovered.count();
        if remaining == 0 {
            return state.cost;
        }
        // Largest alive set size over the uncovered part.
        let mut max_new = 1;
        for (i, s) in self.problem.sets.iter().enumerate() {
            if self.alive[i] && !state.chosen.contains(&i) {
                max_new = max_new.max(s.intersection_count(&state.uncovered));
            }
        }
        let b1 = remaining.div_ceil(max_new);
        // Packing bound: uncovered elements whose cover sets are pairwise
        // disjoint each need their own rule.
        let mut used = Bits::new(self.problem.sets.len());
        let mut b2 = 0usize;
        for e in state.uncovered.ones() {
            if !self.covers_bits[e].intersects(&used) {
                b2 += 1;
                used.union_with(&self.covers_bits[e]);
            }
        }
        state.cost + (self.problem.rho.num as u128) * (b1.max(b2) as u128)
    }

    fn recurse(&mut self, state: &mut NodeState) {
        self.nodes += 1;
        if self.timed_out {
            return;
        }
        if self.nodes % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() > deadline {
                    self.timed_out = true;
                    return;
                }
            }
        }
        if state.uncovered.is_empty() {
            // Ties on the objective prefer the solution with fewer spurious
            // transitions (the less distorted model), then the canonically
            // smaller rule multiset.
            let cand_key = (
                state.cost,
                state.spur_acc.count(),
                key_multiset(self.problem, &state.chosen),
            );
            let best_key = (
                self.best.objective_scaled,
                self.best.spurious_incurred.len(),
                key_multiset(self.problem, &self.best.chosen),
            );
            let better = cand_key < best_key;
            if better {
                self.best = Solution {
                    chosen: state.chosen.clone(),
                    objective_scaled: state.cost,
                    spurious_incurred: state.spur_acc.ones().collect(),
                    optimal: false,
                };
            }
            return;
        }
        if self.lower_bound(state) >= self.best.objective_scaled + equal_slack(self.problem) {
            return;
        }
        // Branch on the uncovered element with the fewest alive covers.
        let mut target = None;
        let mut target_count = usize::MAX;
        for e in state.uncovered.ones() {
            let c = self
                .covers[e]
                .iter()
                .filter(|&&i| self.alive[i])
                .count();
            if c < target_count {
                target_count = c;
                target = Some(e);
            }
        }
        let Some(e) = target else { return };
        if target_count == 0 {
            return;
        }
        // Candidate order: most new coverage first, canonical key on ties.
        let mut options: Vec<(usize, usize)> = self.covers[e]
            .iter()
            .filter(|&&i| self.alive[i])
            .map(|&i| (i, self.problem.sets[i].intersection_count(&state.uncovered)))
            .collect();
        options.sort_by(|a, b| {
            b.1.cmp(&a.1)
                .then_with(|| self.problem.keys[a.0].cmp(&self.problem.keys[b.0]))
        });
        for (i, _) in options {
            let saved_uncovered = state.uncovered.clone();
            let saved_spur = state.spur_acc.clone();
            let step = step_cost(self.problem, i, &state.spur_acc);
            state.uncovered.subtract(&self.problem.sets[i]);
            state.spur_acc.union_with(&self.problem.spurious_sets[i]);
            state.chosen.push(i);
            state.cost += step;
            self.alive[i] = false;
            self.recurse(state);
            self.alive[i] = true;
            state.cost -= step;
            state.chosen.pop();
            state.spur_acc = saved_spur;
            state.uncovered = saved_uncovered;
            if self.timed_out {
                return;
            }
        }
    }
}

/// Continue exploring on cost ties so the canonical tie-break applies.
fn equal_slack(_problem: &CoverProblem) -> u128 {
    1
}

fn key_multiset(problem: &CoverProblem, chosen: &[usize]) -> Vec<CanonicalCode> {
    let mut keys: Vec<CanonicalCode> = chosen.iter().map(|&i| problem.keys[i].clone()).collect();
    keys.sort();
    keys
}

/// Serializes the problem as an integer linear program in LP text format.
/// When `rho` has a nontrivial denominator the objective is scaled by it (a
/// comment documents the factor), keeping every coefficient integral.
pub fn export_lp(problem: &CoverProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ cover problem: mode {:?}, rho {}", problem.mode, problem.rho);
    if problem.rho.den != 1 {
        let _ = writeln!(out, "\\ objective scaled by {}", problem.rho.den);
    }
    out.push_str("Minimize\n obj:");
    let mut first = true;
    let term = |out: &mut String, coeff: u128, name: String, first: &mut bool| {
        if coeff == 0 {
            return;
        }
        if *first {
            *first = false;
            let _ = write!(out, " ");
        } else {
            let _ = write!(out, " + ");
        }
        if coeff == 1 {
            let _ = write!(out, "{name}");
        } else {
            let _ = write!(out, "{coeff} {name}");
        }
    };
    for i in 0..problem.sets.len() {
        term(&mut out, problem.rho.num as u128, format!("x{i}"), &mut first);
    }
    for t in 0..problem.spurious_universe {
        term(
            &mut out,
            problem.rho.den as u128 * problem.spurious_weight as u128,
            format!("z{t}"),
            &mut first,
        );
    }
    if first {
        out.push_str(" 0 x0");
    }
    out.push_str("\nSubject To\n");
    for e in 0..problem.universe {
        let _ = write!(out, " cover_{e}:");
        let mut any = false;
        for (i, s) in problem.sets.iter().enumerate() {
            if s.get(e) {
                let _ = write!(out, "{} x{i}", if any { " +" } else { "" });
                any = true;
            }
        }
        let _ = writeln!(out, " >= 1");
    }
    for (i, ss) in problem.spurious_sets.iter().enumerate() {
        for t in ss.ones() {
            let _ = writeln!(out, " link_{t}_{i}: z{t} - x{i} >= 0");
        }
    }
    out.push_str("Binaries\n");
    for i in 0..problem.sets.len() {
        let _ = writeln!(out, " x{i}");
    }
    for t in 0..problem.spurious_universe {
        let _ = writeln!(out, " z{t}");
    }
    out.push_str("End\n");
    out
}

/// Outcome of the complexity computation.
#[derive(Debug, Clone)]
pub enum ComplexityOutcome {
    /// `K(S)` with a verified exact witness.
    Complexity { k: usize, witness: Vec<Rule> },
    /// No exact generating rule set exists; the certificate pairs each
    /// affected transition with a spurious embedding of its maximum rule.
    NoExactSet { certificate: Vec<PathologyWitness> },
}

/// Computes `K(S)`: the size of a minimal exact generating rule set, with a
/// verified witness, or the pathology certificate when no exact set exists.
pub fn complexity(
    system: &TransitionSystem,
    pool_config: &PoolConfig,
    timeout: Option<Duration>,
) -> Result<ComplexityOutcome> {
    let pathology = detect_pathology(system, pool_config.derivation_cap)?;
    if !pathology.is_empty() {
        return Ok(ComplexityOutcome::NoExactSet {
            certificate: pathology,
        });
    }
    // Only spurious-free candidates can appear in an exact witness, so the
    // closure may skip pairs involving dirty candidates.
    let pool_config = PoolConfig {
        compute_spurious: true,
        prune_dirty_pairs: true,
        ..pool_config.clone()
    };
    let pool = build_candidate_pool(system, &pool_config)?;
    let filtered = exact_filter(&pool, system, pool_config.derivation_cap)?;
    let problem = build_cover_problem(
        &filtered,
        system,
        CoverMode::Exact,
        Rho::one(),
        pool_config.derivation_cap,
    )?;
    let solution = solve_exact(&problem, timeout);
    let witness: Vec<Rule> = solution
        .chosen
        .iter()
        .map(|&i| filtered.candidates[i].rule.clone())
        .collect();
    let report = check(&witness, system, pool_config.derivation_cap)?;
    if !report.is_exact() {
        return Err(Error::InvalidSystem(
            "internal error: exact witness failed verification".into(),
        ));
    }
    if !solution.optimal {
        return Err(Error::CapExceeded(
            "solver timed out before proving optimality".into(),
        ));
    }
    Ok(ComplexityOutcome::Complexity {
        k: solution.chosen.len(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem_from_sets(universe: usize, sets: &[&[usize]]) -> CoverProblem {
        let bits: Vec<Bits> = sets
            .iter()
            .map(|s| {
                let mut b = Bits::new(universe);
                for &e in *s {
                    b.set(e);
                }
                b
            })
            .collect();
        let keys = (0..sets.len())
            .map(|i| {
                crate::canon::canonicalize(&crate::canon::ColoredGraph {
                    vertex_colors: vec![i as u64],
                    edges: vec![],
                })
                .code
            })
            .collect();
        CoverProblem {
            mode: CoverMode::Generating,
            rho: Rho::one(),
            spurious_weight: 1,
            universe,
            spurious_sets: vec![Bits::new(0); sets.len()],
            spurious_universe: 0,
            spurious_witnesses: vec![],
            sets: bits,
            keys,
        }
    }

    #[test]
    fn singleton_universe() {
        let p = problem_from_sets(1, &[&[0]]);
        let s = solve_exact(&p, None);
        assert_eq!(s.chosen, vec![0]);
        assert!(s.optimal);
    }

    #[test]
    fn hand_constructed_three_elements() {
        let p = problem_from_sets(3, &[&[0, 1], &[1, 2], &[0, 2], &[0, 1, 2]]);
        let s = solve_exact(&p, None);
        assert_eq!(s.chosen.len(), 1);
        assert_eq!(s.chosen, vec![3]);
        assert_eq!(s.objective_scaled, 1);
    }

    #[test]
    fn greedy_can_be_suboptimal() {
        // Disjoint sets partitioning the universe: greedy is optimal.
        let p = problem_from_sets(4, &[&[0, 1], &[2, 3]]);
        let g = solve_greedy(&p);
        let s = solve_exact(&p, None);
        assert_eq!(g.chosen.len(), 2);
        assert_eq!(s.chosen.len(), 2);
        // Construct one where greedy truly loses: the decoy set is biggest
        // but the two disjoint halves cover everything.
        let p2 = problem_from_sets(
            8,
            &[&[1, 2, 3, 4, 5, 6], &[0, 1, 2, 3], &[4, 5, 6, 7]],
        );
        let g2 = solve_greedy(&p2);
        let s2 = solve_exact(&p2, None);
        assert!(s2.optimal);
        assert_eq!(g2.chosen.len(), 3);
        assert_eq!(s2.chosen.len(), 2);
    }

    #[test]
    fn lossy_rho_zero_prefers_clean_cover() {
        let universe = 2;
        let mut sets = problem_from_sets(universe, &[&[0, 1], &[0], &[1]]);
        sets.mode = CoverMode::Lossy;
        sets.rho = Rho::new(0, 1).unwrap();
        sets.spurious_universe = 1;
        let mut dirty = Bits::new(1);
        dirty.set(0);
        sets.spurious_sets = vec![dirty, Bits::new(1), Bits::new(1)];
        let s = solve_exact(&sets, None);
        // With free rules the solver avoids the spurious big set.
        assert_eq!(s.chosen, vec![1, 2]);
        assert_eq!(s.objective_scaled, 0);
        assert!(s.spurious_incurred.is_empty());
    }

    #[test]
    fn lp_export_shape() {
        let mut p = problem_from_sets(2, &[&[0], &[1], &[0, 1]]);
        p.mode = CoverMode::Lossy;
        p.rho = Rho::new(3, 1).unwrap();
        p.spurious_universe = 1;
        let mut dirty = Bits::new(1);
        dirty.set(0);
        p.spurious_sets = vec![Bits::new(1), Bits::new(1), dirty];
        let lp = export_lp(&p);
        assert!(lp.contains("Minimize"));
        assert!(lp.contains("cover_0:"));
        assert!(lp.contains("link_0_2: z0 - x2 >= 0"));
        assert!(lp.contains("Binaries"));
        // No z variables when the spurious set is empty.
        let p2 = problem_from_sets(1, &[&[0]]);
        let lp2 = export_lp(&p2);
        assert!(!lp2.contains("z0"));
    }
}
