//! Candidate-rule construction.
//!
//! Every rule generating a transition is a subrule of that transition's
//! maximum rule, so candidates live in the downward closure of the maximum
//! rule set. Enumerating the whole closure is hopeless; instead candidates
//! are the maximal common subrules of maximum-rule subsets, found by
//! aligning minimal cores and extending the shared invariant context to
//! maximality, McGregor style. The pool is closed under pairing candidates
//! with maximum rules (folding pairwise search reaches every maximal common
//! subrule of a subset), then pruned to the maximal representatives of each
//! coverage equivalence class.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::bits::Bits;
use crate::canon::CanonicalCode;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, IncKind, VertexId};
use crate::label::LabelPoset;
use crate::morphism::{for_each_embedding, Anchor, GraphMap, MatchOptions};
use crate::rewrite::is_subrule;
use crate::rule::{CoreEmbedding, Rule};
use crate::transition::{
    generated_from, generates, maximum_rule, TransitionSystem, DEFAULT_DERIVATION_CAP,
};

/// How far common-subrule search may weaken labels toward the bottom
/// element, beyond the meets forced in the invariant graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EpsilonMode {
    #[default]
    Off,
    Vertices,
    All,
}

impl std::str::FromStr for EpsilonMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<EpsilonMode> {
        match s {
            "off" => Ok(EpsilonMode::Off),
            "vertices" => Ok(EpsilonMode::Vertices),
            "all" => Ok(EpsilonMode::All),
            other => Err(Error::Parse(format!("unknown epsilon mode `{other}`"))),
        }
    }
}

/// Which pairs the closure processes. Pairing every candidate with every
/// maximum rule reaches all maximal common subrules of maximum-rule subsets;
/// the all-pairs variant additionally pairs derived candidates with each
/// other and is only worthwhile on small systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosureMode {
    #[default]
    MaxRulePairs,
    AllPairs,
    /// One round only: maximal common subrules of maximum-rule pairs, with
    /// no pairing of the derived candidates.
    PairsOnce,
}

#[derive(Debug, Clone)]
pub struct PoolConfig {
    pub epsilon: EpsilonMode,
    pub closure: ClosureMode,
    /// Loud-failure cap on the number of candidates.
    pub max_candidates: usize,
    /// Loud-failure cap on search nodes within one common-subrule call.
    pub mcs_node_cap: usize,
    pub derivation_cap: usize,
    /// Evaluate whether each candidate generates transitions outside the
    /// input set (needed for exact mode and the lossy objective).
    pub compute_spurious: bool,
    /// Skip pairing candidates that already generate spurious transitions.
    /// Sound when only spurious-free candidates matter (exact mode): every
    /// subrule of a spurious-generating rule generates at least the same
    /// spurious transitions, so chains toward clean candidates never pass
    /// through dirty ones.
    pub prune_dirty_pairs: bool,
    /// One greedy maximal context extension per core alignment instead of
    /// all maximal extensions.
    pub greedy_extension: bool,
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig {
            epsilon: EpsilonMode::Off,
            closure: ClosureMode::MaxRulePairs,
            max_candidates: 200_000,
            mcs_node_cap: 2_000_000,
            derivation_cap: DEFAULT_DERIVATION_CAP,
            compute_spurious: true,
            prune_dirty_pairs: false,
            greedy_extension: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpuriousStatus {
    Unknown,
    Clean,
    Dirty,
}

#[derive(Debug, Clone)]
pub struct CandidateRule {
    pub rule: Rule,
    pub coverage: Bits,
    pub spurious: SpuriousStatus,
    /// Transitions whose maximum rules this candidate was derived from.
    pub provenance: BTreeSet<usize>,
}

#[derive(Debug, Clone)]
pub struct CandidatePool {
    pub universe: usize,
    pub candidates: Vec<CandidateRule>,
    /// Candidate index of each transition's maximum rule.
    pub max_rule_of: Vec<usize>,
}

impl CandidatePool {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

/// The set of input transitions a rule generates.
pub fn coverage(rule: &Rule, system: &TransitionSystem) -> Result<Bits> {
    let mut bits = Bits::new(system.transition_count());
    for (i, st) in system.transitions().iter().enumerate() {
        if generates(rule, &st.transition)? {
            bits.set(i);
        }
    }
    Ok(bits)
}

/// Whether the rule generates any transition outside the input set.
pub fn has_spurious(rule: &Rule, system: &TransitionSystem, cap: usize) -> Result<bool> {
    for input in system.inputs() {
        for t in generated_from(rule, input, cap)? {
            if !system.contains_transition(&t) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// All distinct spurious transitions the rule generates, keyed by code.
pub fn spurious_transitions(
    rule: &Rule,
    system: &TransitionSystem,
    cap: usize,
) -> Result<BTreeMap<CanonicalCode, crate::transition::Transition>> {
    let mut out = BTreeMap::new();
    for input in system.inputs() {
        for t in generated_from(rule, input, cap)? {
            let code = t.effective_code(system.collapses_spectators());
            if !system.contains_code(&code) {
                out.entry(code).or_insert(t);
            }
        }
    }
    Ok(out)
}

/// Builds the candidate pool for a system.
pub fn build_candidate_pool(
    system: &TransitionSystem,
    config: &PoolConfig,
) -> Result<CandidatePool> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let universe = system.transition_count();
    let mut pool: Vec<CandidateRule> = Vec::new();
    let mut cores: Vec<(Rule, CoreEmbedding, CanonicalCode)> = Vec::new();
    let mut by_code: HashMap<CanonicalCode, usize> = HashMap::new();
    let mut max_rule_of = vec![usize::MAX; universe];

    let annotate = |rule: Rule,
                        provenance: BTreeSet<usize>,
                        known_coverage: Option<Bits>,
                        pool: &mut Vec<CandidateRule>,
                        cores: &mut Vec<(Rule, CoreEmbedding, CanonicalCode)>|
     -> Result<usize> {
        let mut cov = known_coverage.unwrap_or_else(|| Bits::new(universe));
        for ti in 0..universe {
            if !cov.get(ti) && generates(&rule, &system.transitions()[ti].transition)? {
                cov.set(ti);
            }
        }
        let spurious = if config.compute_spurious {
            if has_spurious(&rule, system, config.derivation_cap)? {
                SpuriousStatus::Dirty
            } else {
                SpuriousStatus::Clean
            }
        } else {
            SpuriousStatus::Unknown
        };
        let (core, emb) = rule.minimal_subrule_embedded()?;
        let align_code = core_alignment_code(&core, config.epsilon);
        cores.push((core, emb, align_code));
        pool.push(CandidateRule {
            rule,
            coverage: cov,
            spurious,
            provenance,
        });
        Ok(pool.len() - 1)
    };

    // Seed: the maximum rule of every transition.
    for (ti, st) in system.transitions().iter().enumerate() {
        let rule = maximum_rule(&st.transition)?;
        let code = rule.code().clone();
        if let Some(&idx) = by_code.get(&code) {
            max_rule_of[ti] = idx;
            pool[idx].provenance.insert(ti);
            continue;
        }
        let idx = annotate(rule, BTreeSet::from([ti]), None, &mut pool, &mut cores)?;
        debug_assert!(pool[idx].coverage.get(ti));
        by_code.insert(code, idx);
        max_rule_of[ti] = idx;
    }
    let max_rules: Vec<usize> = {
        let mut v: Vec<usize> = max_rule_of.clone();
        v.sort_unstable();
        v.dedup();
        v
    };

    // Worklist of candidate pairs, largest coverage overlap first with a
    // deterministic index tie-break. Pairs whose minimal cores differ are
    // never enqueued: they share no subrule.
    let mut pending: BinaryHeap<(usize, Reverse<(usize, usize)>)> = BinaryHeap::new();
    let push_pair =
        |a: usize,
         b: usize,
         pool: &[CandidateRule],
         cores: &[(Rule, CoreEmbedding, CanonicalCode)],
         pending: &mut BinaryHeap<(usize, Reverse<(usize, usize)>)>| {
            let (a, b) = (a.min(b), a.max(b));
            if config.prune_dirty_pairs
                && (pool[a].spurious == SpuriousStatus::Dirty
                    || pool[b].spurious == SpuriousStatus::Dirty)
            {
                return;
            }
            if cores[a].2 != cores[b].2 {
                return;
            }
            if pool[a].coverage.is_subset_of(&pool[b].coverage)
                || pool[b].coverage.is_subset_of(&pool[a].coverage)
            {
                return;
            }
            let overlap = pool[a].coverage.intersection_count(&pool[b].coverage);
            pending.push((overlap, Reverse((a, b))));
        };

    match config.closure {
        ClosureMode::MaxRulePairs | ClosureMode::PairsOnce => {
            for (i, &a) in max_rules.iter().enumerate() {
                for &b in &max_rules[i + 1..] {
                    push_pair(a, b, &pool, &cores, &mut pending);
                }
            }
        }
        ClosureMode::AllPairs => {
            for a in 0..pool.len() {
                for b in (a + 1)..pool.len() {
                    push_pair(a, b, &pool, &cores, &mut pending);
                }
            }
        }
    }

    let mcs_cfg = McsConfig {
        epsilon: config.epsilon,
        node_cap: config.mcs_node_cap,
        greedy_extension: config.greedy_extension,
    };
    while let Some((_, Reverse((a, b)))) = pending.pop() {
        let found = common_subrules_cored(
            &pool[a].rule,
            &cores[a].0,
            &cores[a].1,
            &pool[b].rule,
            &cores[b].0,
            &cores[b].1,
            &mcs_cfg,
        )?;
        for rule in found {
            let code = rule.code().clone();
            if let Some(&idx) = by_code.get(&code) {
                let prov: Vec<usize> = pool[a]
                    .provenance
                    .iter()
                    .chain(pool[b].provenance.iter())
                    .copied()
                    .collect();
                pool[idx].provenance.extend(prov);
                continue;
            }
            if pool.len() >= config.max_candidates {
                return Err(Error::CapExceeded(format!(
                    "candidate pool exceeded {} rules ({} pairs pending)",
                    config.max_candidates,
                    pending.len()
                )));
            }
            let mut seed_cov = pool[a].coverage.clone();
            seed_cov.union_with(&pool[b].coverage);
            let mut provenance = pool[a].provenance.clone();
            provenance.extend(pool[b].provenance.iter().copied());
            let idx = annotate(rule, provenance, Some(seed_cov), &mut pool, &mut cores)?;
            by_code.insert(code, idx);
            match config.closure {
                ClosureMode::MaxRulePairs => {
                    for &m in &max_rules {
                        push_pair(idx, m, &pool, &cores, &mut pending);
                    }
                }
                ClosureMode::AllPairs => {
                    for other in 0..idx {
                        push_pair(other, idx, &pool, &cores, &mut pending);
                    }
                }
                ClosureMode::PairsOnce => {}
            }
        }
    }

    let mut result = CandidatePool {
        universe,
        candidates: pool,
        max_rule_of,
    };
    prune_to_coverage_maximal(&mut result)?;
    Ok(result)
}

/// Drops candidates that have a strict superrule with identical coverage;
/// the survivors are the maximal rules of each coverage equivalence class.
fn prune_to_coverage_maximal(pool: &mut CandidatePool) -> Result<()> {
    let n = pool.candidates.len();
    let mut classes: HashMap<&Bits, Vec<usize>> = HashMap::new();
    for (i, c) in pool.candidates.iter().enumerate() {
        classes.entry(&c.coverage).or_default().push(i);
    }
    let mut drop = vec![false; n];
    for members in classes.values() {
        if members.len() < 2 {
            continue;
        }
        for &i in members {
            for &j in members {
                if i == j || drop[i] {
                    continue;
                }
                // i is dropped when it is a strict subrule of j.
                if size_leq(&pool.candidates[i].rule, &pool.candidates[j].rule)
                    && !drop[j]
                    && is_subrule(&pool.candidates[i].rule, &pool.candidates[j].rule)?.is_some()
                {
                    drop[i] = true;
                }
            }
        }
    }
    // Maximum rules are never dominated within their class (a strict
    // superrule covering the seed transition would contradict maximality).
    for &m in &pool.max_rule_of {
        debug_assert!(!drop[m]);
        drop[m] = false;
    }
    let mut remap = vec![usize::MAX; n];
    let mut kept = Vec::with_capacity(n);
    for (i, c) in pool.candidates.drain(..).enumerate() {
        if !drop[i] {
            remap[i] = kept.len();
            kept.push(c);
        }
    }
    pool.candidates = kept;
    for m in pool.max_rule_of.iter_mut() {
        *m = remap[*m];
        debug_assert!(*m != usize::MAX);
    }
    Ok(())
}

fn size_leq(a: &Rule, b: &Rule) -> bool {
    let (av, ae) = a.size();
    let (bv, be) = b.size();
    av <= bv && ae <= be
}

/// Keeps only candidates that introduce no spurious transitions.
pub fn exact_filter(pool: &CandidatePool, system: &TransitionSystem, cap: usize) -> Result<CandidatePool> {
    let mut candidates = Vec::new();
    for c in &pool.candidates {
        let clean = match c.spurious {
            SpuriousStatus::Clean => true,
            SpuriousStatus::Dirty => false,
            SpuriousStatus::Unknown => !has_spurious(&c.rule, system, cap)?,
        };
        if clean {
            let mut c = c.clone();
            c.spurious = SpuriousStatus::Clean;
            candidates.push(c);
        }
    }
    let mut max_rule_of = vec![usize::MAX; pool.universe];
    for (i, c) in candidates.iter().enumerate() {
        for &ti in &c.provenance {
            if pool.max_rule_of[ti] != usize::MAX
                && pool.candidates[pool.max_rule_of[ti]].rule.code() == c.rule.code()
            {
                max_rule_of[ti] = i;
            }
        }
    }
    Ok(CandidatePool {
        universe: pool.universe,
        candidates,
        max_rule_of,
    })
}

#[derive(Debug, Clone)]
pub struct McsConfig {
    pub epsilon: EpsilonMode,
    pub node_cap: usize,
    /// Extend each core alignment greedily to a single maximal context
    /// instead of enumerating every maximal extension.
    pub greedy_extension: bool,
}

impl Default for McsConfig {
    fn default() -> Self {
        McsConfig {
            epsilon: EpsilonMode::Off,
            node_cap: 2_000_000,
            greedy_extension: false,
        }
    }
}

/// Maximal common subrules of two rules: anchored at aligned minimal cores,
/// the shared invariant context is extended to maximality along compatible
/// context edges; results are deduplicated and reduced to the
/// subrule-maximal rules among those found.
pub fn common_subrules(p1: &Rule, p2: &Rule, cfg: &McsConfig) -> Result<Vec<Rule>> {
    let (core1, emb1) = p1.minimal_subrule_embedded()?;
    let (core2, emb2) = p2.minimal_subrule_embedded()?;
    common_subrules_cored(p1, &core1, &emb1, p2, &core2, &emb2, cfg)
}

/// [`common_subrules`] with the minimal cores precomputed by the caller.
pub fn common_subrules_cored(
    p1: &Rule,
    core1: &Rule,
    emb1: &CoreEmbedding,
    p2: &Rule,
    core2: &Rule,
    emb2: &CoreEmbedding,
    cfg: &McsConfig,
) -> Result<Vec<Rule>> {
    if cfg.epsilon == EpsilonMode::Off && core1.code() != core2.code() {
        return Ok(Vec::new());
    }
    let alignments = core_alignments(core1, emb1, core2, emb2, cfg.epsilon)?;
    let mut by_code: BTreeMap<CanonicalCode, Rule> = BTreeMap::new();
    for seed in alignments {
        let mut search = ContextSearch::new(p1, p2, &seed, cfg);
        let aligned_sets = search.run()?;
        for aligned in aligned_sets {
            let rule = build_common_rule(p1, p2, &seed, &aligned)?;
            by_code.entry(rule.code().clone()).or_insert(rule);
        }
    }
    // Subrule-maximal among those found.
    let rules: Vec<Rule> = by_code.into_values().collect();
    let mut keep = vec![true; rules.len()];
    for i in 0..rules.len() {
        for j in 0..rules.len() {
            if i != j
                && keep[i]
                && keep[j]
                && size_leq(&rules[i], &rules[j])
                && is_subrule(&rules[i], &rules[j])?.is_some()
            {
                keep[i] = false;
            }
        }
    }
    Ok(rules
        .into_iter()
        .zip(keep)
        .filter_map(|(r, k)| k.then_some(r))
        .collect())
}

/// Correspondence between the context graphs of two rules sharing a core:
/// aligned context vertex and edge pairs, seeded by a core alignment.
#[derive(Debug, Clone)]
struct AlignState {
    /// p1 context vertex -> p2 context vertex.
    v: Vec<Option<VertexId>>,
    v_used: Vec<bool>,
    /// p1 context edge -> p2 context edge.
    e: Vec<Option<EdgeId>>,
}

/// A core alignment lifted into the parents. The created parts need no
/// correspondence: their labels are forced equal by the alignment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct CoreSeed {
    /// Parent context vertex pairs covering the cores' kept elements.
    context_pairs: Vec<(VertexId, VertexId)>,
    /// Parent left-graph pairs of deleted vertices and edges.
    deleted_v: Vec<(VertexId, VertexId)>,
    deleted_e: Vec<(EdgeId, EdgeId)>,
}

/// Whether two labels may be identified at the given generalization level;
/// `edge` selects the edge policy.
fn labels_compatible(
    eps: EpsilonMode,
    edge: bool,
    a: crate::label::LabelId,
    b: crate::label::LabelId,
) -> bool {
    match (eps, edge) {
        (EpsilonMode::Off, _) | (EpsilonMode::Vertices, true) => a == b,
        _ => true,
    }
}

/// Canonical code of a core with labels erased wherever the generalization
/// mode may identify differing labels. Two cores can only align when their
/// alignment codes agree, which makes this a cheap pair filter.
fn core_alignment_code(core: &Rule, eps: EpsilonMode) -> CanonicalCode {
    if eps == EpsilonMode::Off {
        return core.code().clone();
    }
    use crate::canon::{canonicalize, ColoredGraph};
    let erase_v = |erasable: bool, label: crate::label::LabelId| -> u64 {
        if erasable && eps != EpsilonMode::Off {
            0
        } else {
            1 + label.0 as u64
        }
    };
    let erase_e = |erasable: bool, label: crate::label::LabelId| -> u64 {
        if erasable && eps == EpsilonMode::All {
            0
        } else {
            1 + label.0 as u64
        }
    };
    let (lg, kg, rg) = (core.left(), core.context(), core.right());
    let (nl, nk) = (lg.vertex_count(), kg.vertex_count());
    let mut vertex_colors = Vec::new();
    for v in lg.vertices() {
        let erasable = match core.left_context_vertex(v) {
            None => true,
            Some(k) => !core.forced_vertex(k),
        };
        vertex_colors.push((1 << 32) | erase_v(erasable, lg.vertex_label(v)));
    }
    for k in kg.vertices() {
        vertex_colors
            .push((2 << 32) | erase_v(!core.forced_vertex(k), kg.vertex_label(k)));
    }
    for v in rg.vertices() {
        let erasable = match core.right_context_vertex(v) {
            None => false,
            Some(k) => !core.forced_vertex(k),
        };
        vertex_colors.push((3 << 32) | erase_v(erasable, rg.vertex_label(v)));
    }
    let mut edges = Vec::new();
    for e in lg.edge_ids() {
        let d = lg.edge(e);
        let erasable = match core.left_context_edge(e) {
            None => true,
            Some(k) => !core.forced_edge(k),
        };
        edges.push((
            d.source.index(),
            d.target.index(),
            d.directed,
            (1 << 40) | erase_e(erasable, d.label),
        ));
    }
    for e in kg.edge_ids() {
        let d = kg.edge(e);
        edges.push((
            nl + d.source.index(),
            nl + d.target.index(),
            d.directed,
            (2 << 40) | erase_e(!core.forced_edge(e), d.label),
        ));
    }
    for e in rg.edge_ids() {
        let d = rg.edge(e);
        let erasable = match core.right_context_edge(e) {
            None => false,
            Some(k) => !core.forced_edge(k),
        };
        edges.push((
            nl + nk + d.source.index(),
            nl + nk + d.target.index(),
            d.directed,
            (3 << 40) | erase_e(erasable, d.label),
        ));
    }
    for k in kg.vertices() {
        edges.push((nl + k.index(), core.l().vertex(k).index(), true, 4 << 40));
        edges.push((
            nl + k.index(),
            nl + nk + core.r().vertex(k).index(),
            true,
            5 << 40,
        ));
    }
    canonicalize(&ColoredGraph {
        vertex_colors,
        edges,
    })
    .code
}

/// Core alignments lifted into the parents: for every action-preserving
/// isomorphism between the cores, the induced pairs of parent elements.
/// Created elements and relabeled positions keep exact labels; deleted and
/// kept elements may be identified across differing labels per the
/// generalization mode (their common rule then carries meets).
fn core_alignments(
    core1: &Rule,
    emb1: &CoreEmbedding,
    core2: &Rule,
    emb2: &CoreEmbedding,
    eps: EpsilonMode,
) -> Result<Vec<CoreSeed>> {
    let (l1, l2) = (core1.left(), core2.left());
    if l1.vertex_count() != l2.vertex_count()
        || l1.edge_count() != l2.edge_count()
        || core1.context().vertex_count() != core2.context().vertex_count()
        || core1.context().edge_count() != core2.context().edge_count()
        || core1.right().vertex_count() != core2.right().vertex_count()
        || core1.right().edge_count() != core2.right().edge_count()
    {
        return Ok(Vec::new());
    }
    let vertex_filter = |v: VertexId, w: VertexId| -> bool {
        match (core1.left_context_vertex(v), core2.left_context_vertex(w)) {
            (None, None) => labels_compatible(eps, false, l1.vertex_label(v), l2.vertex_label(w)),
            (Some(k1), Some(k2)) => {
                match (core1.forced_vertex(k1), core2.forced_vertex(k2)) {
                    // Relabel sources must agree exactly.
                    (true, true) => l1.vertex_label(v) == l2.vertex_label(w),
                    (false, false) => {
                        labels_compatible(eps, false, l1.vertex_label(v), l2.vertex_label(w))
                    }
                    _ => false,
                }
            }
            _ => false,
        }
    };
    let edge_filter = |e: EdgeId, f: EdgeId| -> bool {
        let (a, b) = (l1.edge(e).label, l2.edge(f).label);
        match (core1.left_context_edge(e), core2.left_context_edge(f)) {
            (None, None) => labels_compatible(eps, true, a, b),
            (Some(k1), Some(k2)) => match (core1.forced_edge(k1), core2.forced_edge(k2)) {
                (true, true) => a == b,
                (false, false) => labels_compatible(eps, true, a, b),
                _ => false,
            },
            _ => false,
        }
    };
    let opts = MatchOptions {
        ignore_labels: true,
        vertex_filter: Some(&vertex_filter),
        edge_filter: Some(&edge_filter),
        ..Default::default()
    };
    let mut seeds: BTreeSet<CoreSeed> = BTreeSet::new();
    for_each_embedding(l1, l2, None, &opts, |phi| {
        if let Some(seed) = validate_alignment(core1, emb1, core2, emb2, eps, &phi) {
            seeds.insert(seed);
        }
        true
    })?;
    Ok(seeds.into_iter().collect())
}

/// Completes a left-graph correspondence to a full core alignment, checking
/// the invariant correspondence and the right-side isomorphism.
fn validate_alignment(
    core1: &Rule,
    emb1: &CoreEmbedding,
    core2: &Rule,
    emb2: &CoreEmbedding,
    eps: EpsilonMode,
    phi: &GraphMap,
) -> Option<CoreSeed> {
    let mut kmap: Vec<Option<VertexId>> = vec![None; core1.context().vertex_count()];
    for k1 in core1.context().vertices() {
        let l2v = phi.vertex(core1.l().vertex(k1))?;
        let k2 = core2.left_context_vertex(l2v)?;
        kmap[k1.index()] = Some(k2);
    }
    let mut kemap: Vec<Option<EdgeId>> = vec![None; core1.context().edge_count()];
    for e1 in core1.context().edge_ids() {
        let l2e = phi.edge(core1.l().edge(e1))?;
        let e2 = core2.left_context_edge(l2e)?;
        kemap[e1.index()] = Some(e2);
    }
    // The right sides must be isomorphic extending the kept correspondence,
    // with created labels exactly equal and kept labels per the mode.
    let (r1, r2) = (core1.right(), core2.right());
    let mut anchor = Anchor::default();
    for k1 in core1.context().vertices() {
        let k2 = kmap[k1.index()].unwrap();
        anchor
            .vertex_pairs
            .push((core1.r().vertex(k1), core2.r().vertex(k2)));
    }
    for e1 in core1.context().edge_ids() {
        let e2 = kemap[e1.index()].unwrap();
        anchor
            .edge_pairs
            .push((core1.r().edge(e1), core2.r().edge(e2)));
    }
    let vertex_filter = |v: VertexId, w: VertexId| -> bool {
        match (core1.right_context_vertex(v), core2.right_context_vertex(w)) {
            (None, None) => r1.vertex_label(v) == r2.vertex_label(w),
            (Some(k1), Some(k2)) => match (core1.forced_vertex(k1), core2.forced_vertex(k2)) {
                (true, true) => r1.vertex_label(v) == r2.vertex_label(w),
                (false, false) => {
                    labels_compatible(eps, false, r1.vertex_label(v), r2.vertex_label(w))
                }
                _ => false,
            },
            _ => false,
        }
    };
    let edge_filter = |e: EdgeId, f: EdgeId| -> bool {
        let (a, b) = (r1.edge(e).label, r2.edge(f).label);
        match (core1.right_context_edge(e), core2.right_context_edge(f)) {
            (None, None) => a == b,
            (Some(k1), Some(k2)) => match (core1.forced_edge(k1), core2.forced_edge(k2)) {
                (true, true) => a == b,
                (false, false) => labels_compatible(eps, true, a, b),
                _ => false,
            },
            _ => false,
        }
    };
    let opts = MatchOptions {
        ignore_labels: true,
        limit: Some(1),
        vertex_filter: Some(&vertex_filter),
        edge_filter: Some(&edge_filter),
        ..Default::default()
    };
    let mut right_ok = false;
    for_each_embedding(r1, r2, Some(&anchor), &opts, |_| {
        right_ok = true;
        false
    })
    .ok()?;
    if !right_ok {
        return None;
    }
    // Lift into the parents.
    let mut context_pairs: Vec<(VertexId, VertexId)> = core1
        .context()
        .vertices()
        .map(|k1| {
            (
                emb1.context_v[k1.index()],
                emb2.context_v[kmap[k1.index()].unwrap().index()],
            )
        })
        .collect();
    context_pairs.sort_unstable();
    let mut deleted_v = Vec::new();
    for v1 in core1.left().vertices() {
        if core1.left_context_vertex(v1).is_none() {
            let v2 = phi.vertex(v1).unwrap();
            deleted_v.push((emb1.left_v[v1.index()], emb2.left_v[v2.index()]));
        }
    }
    deleted_v.sort_unstable();
    let mut deleted_e = Vec::new();
    for e1 in core1.left().edge_ids() {
        if core1.left_context_edge(e1).is_none() {
            let e2 = phi.edge(e1).unwrap();
            deleted_e.push((emb1.left_e[e1.index()], emb2.left_e[e2.index()]));
        }
    }
    deleted_e.sort_unstable();
    Some(CoreSeed {
        context_pairs,
        deleted_v,
        deleted_e,
    })
}

struct ContextSearch<'a> {
    p1: &'a Rule,
    p2: &'a Rule,
    epsilon: EpsilonMode,
    node_cap: usize,
    greedy: bool,
    nodes: usize,
    seed: Vec<(VertexId, VertexId)>,
    results: Vec<AlignState>,
}

impl<'a> ContextSearch<'a> {
    fn new(p1: &'a Rule, p2: &'a Rule, seed: &CoreSeed, cfg: &McsConfig) -> ContextSearch<'a> {
        ContextSearch {
            p1,
            p2,
            epsilon: cfg.epsilon,
            node_cap: cfg.node_cap,
            greedy: cfg.greedy_extension,
            nodes: 0,
            seed: seed.context_pairs.clone(),
            results: Vec::new(),
        }
    }

    fn vertex_pair_admissible(&self, k1: VertexId, k2: VertexId) -> bool {
        let (c1, c2) = (self.p1.context(), self.p2.context());
        match self.epsilon {
            EpsilonMode::Off => c1.vertex_label(k1) == c2.vertex_label(k2),
            _ => true,
        }
    }

    fn edge_pair_admissible(&self, e1: EdgeId, e2: EdgeId) -> bool {
        let (c1, c2) = (self.p1.context(), self.p2.context());
        let (d1, d2) = (c1.edge(e1), c2.edge(e2));
        if d1.directed != d2.directed {
            return false;
        }
        match self.epsilon {
            EpsilonMode::All => true,
            _ => d1.label == d2.label,
        }
    }

    fn run(&mut self) -> Result<Vec<AlignState>> {
        let k1n = self.p1.context().vertex_count();
        let k2n = self.p2.context().vertex_count();
        let mut state = AlignState {
            v: vec![None; k1n],
            v_used: vec![false; k2n],
            e: vec![None; self.p1.context().edge_count()],
        };
        for &(a, b) in &self.seed.clone() {
            state.v[a.index()] = Some(b);
            state.v_used[b.index()] = true;
        }
        self.close_edges(&mut state);
        let mut excluded: HashSet<(VertexId, VertexId)> = HashSet::new();
        self.extend(&mut state, &mut excluded)?;
        Ok(std::mem::take(&mut self.results))
    }

    /// Adds every context edge pair determined by the aligned vertices.
    fn close_edges(&self, state: &mut AlignState) {
        let c1 = self.p1.context();
        for e1 in c1.edge_ids() {
            if state.e[e1.index()].is_some() {
                continue;
            }
            let d1 = c1.edge(e1);
            let (Some(s2), Some(t2)) = (state.v[d1.source.index()], state.v[d1.target.index()])
            else {
                continue;
            };
            let e2 = self
                .p2
                .context()
                .find_edge(s2, t2, d1.directed)
                .or_else(|| {
                    if d1.directed {
                        None
                    } else {
                        self.p2.context().find_edge(t2, s2, false)
                    }
                });
            if let Some(e2) = e2 {
                if self.edge_pair_admissible(e1, e2) {
                    state.e[e1.index()] = Some(e2);
                }
            }
        }
    }

    /// Frontier: admissible unaligned vertex pairs adjacent to the aligned
    /// set through a compatible context edge pair. When nothing is aligned
    /// yet, every admissible pair is frontier.
    fn frontier(&self, state: &AlignState) -> Vec<(VertexId, VertexId)> {
        let c1 = self.p1.context();
        let c2 = self.p2.context();
        let mut out = BTreeSet::new();
        let any_aligned = state.v.iter().any(|m| m.is_some());
        if !any_aligned {
            for k1 in c1.vertices() {
                for k2 in c2.vertices() {
                    if self.vertex_pair_admissible(k1, k2) {
                        out.insert((k1, k2));
                    }
                }
            }
            return out.into_iter().collect();
        }
        for k1 in c1.vertices() {
            if state.v[k1.index()].is_some() {
                continue;
            }
            for inc1 in c1.adjacency(k1) {
                let Some(img) = state.v[inc1.other.index()] else {
                    continue;
                };
                let want = match inc1.kind {
                    IncKind::Undirected => IncKind::Undirected,
                    IncKind::Out => IncKind::In,
                    IncKind::In => IncKind::Out,
                };
                for inc2 in c2.adjacency(img) {
                    if inc2.kind != want || state.v_used[inc2.other.index()] {
                        continue;
                    }
                    if self.vertex_pair_admissible(k1, inc2.other)
                        && self.edge_pair_admissible(inc1.edge, inc2.edge)
                    {
                        out.insert((k1, inc2.other));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    fn extend(
        &mut self,
        state: &mut AlignState,
        excluded: &mut HashSet<(VertexId, VertexId)>,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.node_cap {
            return Err(Error::CapExceeded(format!(
                "common-subrule search exceeded {} nodes",
                self.node_cap
            )));
        }
        let frontier = self.frontier(state);
        let candidate = frontier.iter().find(|p| !excluded.contains(*p)).copied();
        let Some((k1, k2)) = candidate else {
            // Maximal unless a previously excluded pair is still addable.
            let dominated = excluded
                .iter()
                .any(|&(a, b)| state.v[a.index()].is_none() && !state.v_used[b.index()]
                    && frontier.contains(&(a, b)));
            if !dominated {
                self.results.push(state.clone());
            }
            return Ok(());
        };
        // Include the pair.
        let saved_e = state.e.clone();
        state.v[k1.index()] = Some(k2);
        state.v_used[k2.index()] = true;
        self.close_edges(state);
        self.extend(state, excluded)?;
        state.v[k1.index()] = None;
        state.v_used[k2.index()] = false;
        state.e = saved_e;
        if self.greedy {
            return Ok(());
        }
        // Exclude it.
        excluded.insert((k1, k2));
        self.extend(state, excluded)?;
        excluded.remove(&(k1, k2));
        Ok(())
    }
}

/// Builds the common subrule for an alignment: the core action plus the
/// aligned context, labeled by meets of the paired labels.
fn build_common_rule(p1: &Rule, p2: &Rule, seed: &CoreSeed, aligned: &AlignState) -> Result<Rule> {
    let poset: &std::sync::Arc<LabelPoset> = p1.left().poset();
    let (l1, k1g, r1) = (p1.left(), p1.context(), p1.right());
    let (l2, k2g, r2) = (p2.left(), p2.context(), p2.right());

    let mut lb = Graph::builder(poset.clone());
    let mut kb = Graph::builder(poset.clone());
    let mut rb = Graph::builder(poset.clone());

    let mut l_new: Vec<Option<VertexId>> = vec![None; l1.vertex_count()];
    let mut r_new: Vec<Option<VertexId>> = vec![None; r1.vertex_count()];
    let mut k_new: Vec<Option<VertexId>> = vec![None; k1g.vertex_count()];
    let mut k_src: Vec<VertexId> = Vec::new();

    // Deleted vertices carry the meet of the paired labels; created
    // elements come from p1's side (the alignment forces them equal).
    let mut deleted_meet: Vec<Option<crate::label::LabelId>> = vec![None; l1.vertex_count()];
    for &(v1, v2) in &seed.deleted_v {
        deleted_meet[v1.index()] =
            Some(poset.meet(l1.vertex_label(v1), l2.vertex_label(v2)));
    }
    let mut deleted_emeet: Vec<Option<crate::label::LabelId>> = vec![None; l1.edge_count()];
    for &(e1, e2) in &seed.deleted_e {
        deleted_emeet[e1.index()] = Some(poset.meet(l1.edge(e1).label, l2.edge(e2).label));
    }
    for v in l1.vertices() {
        if p1.left_context_vertex(v).is_none() {
            let label = deleted_meet[v.index()].unwrap_or_else(|| l1.vertex_label(v));
            l_new[v.index()] = Some(lb.add_vertex(label));
        }
    }
    for v in r1.vertices() {
        if p1.right_context_vertex(v).is_none() {
            r_new[v.index()] = Some(rb.add_vertex(r1.vertex_label(v)));
        }
    }
    // Aligned context vertices with meet labels on all three graphs.
    for k in k1g.vertices() {
        let Some(k2) = aligned.v[k.index()] else {
            continue;
        };
        let kl = poset.meet(k1g.vertex_label(k), k2g.vertex_label(k2));
        let ll = poset.meet(
            l1.vertex_label(p1.l().vertex(k)),
            l2.vertex_label(p2.l().vertex(k2)),
        );
        let rl = poset.meet(
            r1.vertex_label(p1.r().vertex(k)),
            r2.vertex_label(p2.r().vertex(k2)),
        );
        let kn = kb.add_vertex(kl);
        k_new[k.index()] = Some(kn);
        k_src.push(k);
        l_new[p1.l().vertex(k).index()] = Some(lb.add_vertex(ll));
        r_new[p1.r().vertex(k).index()] = Some(rb.add_vertex(rl));
    }
    // Edges.
    let mut l_enew: Vec<Option<EdgeId>> = vec![None; l1.edge_count()];
    let mut r_enew: Vec<Option<EdgeId>> = vec![None; r1.edge_count()];
    let mut k_esrc: Vec<EdgeId> = Vec::new();
    let mut k_enew: Vec<Option<EdgeId>> = vec![None; k1g.edge_count()];
    for e in l1.edge_ids() {
        if p1.left_context_edge(e).is_none() {
            let d = l1.edge(e);
            let label = deleted_emeet[e.index()].unwrap_or(d.label);
            let ne = lb.add_edge(
                l_new[d.source.index()].expect("deleted edge endpoints retained in core"),
                l_new[d.target.index()].expect("deleted edge endpoints retained in core"),
                label,
                d.directed,
            )?;
            l_enew[e.index()] = Some(ne);
        }
    }
    for e in r1.edge_ids() {
        if p1.right_context_edge(e).is_none() {
            let d = r1.edge(e);
            let ne = rb.add_edge(
                r_new[d.source.index()].expect("created edge endpoints retained in core"),
                r_new[d.target.index()].expect("created edge endpoints retained in core"),
                d.label,
                d.directed,
            )?;
            r_enew[e.index()] = Some(ne);
        }
    }
    for e in k1g.edge_ids() {
        let Some(e2) = aligned.e[e.index()] else {
            continue;
        };
        let d = k1g.edge(e);
        let (s, t) = (
            k_new[d.source.index()].expect("aligned edge has aligned endpoints"),
            k_new[d.target.index()].expect("aligned edge has aligned endpoints"),
        );
        let ke = kb.add_edge(
            s,
            t,
            poset.meet(d.label, k2g.edge(e2).label),
            d.directed,
        )?;
        k_enew[e.index()] = Some(ke);
        k_esrc.push(e);
        let le1 = p1.l().edge(e);
        let dd = l1.edge(le1);
        let ne = lb.add_edge(
            l_new[dd.source.index()].unwrap(),
            l_new[dd.target.index()].unwrap(),
            poset.meet(dd.label, l2.edge(p2.l().edge(e2)).label),
            dd.directed,
        )?;
        l_enew[le1.index()] = Some(ne);
        let re1 = p1.r().edge(e);
        let dr = r1.edge(re1);
        let nr = rb.add_edge(
            r_new[dr.source.index()].unwrap(),
            r_new[dr.target.index()].unwrap(),
            poset.meet(dr.label, r2.edge(p2.r().edge(e2)).label),
            dr.directed,
        )?;
        r_enew[re1.index()] = Some(nr);
    }

    let left = lb.build_arc()?;
    let context = kb.build_arc()?;
    let right = rb.build_arc()?;
    let mut lmap = GraphMap::new_empty(context.clone(), left);
    let mut rmap = GraphMap::new_empty(context, right);
    for (ci, &k) in k_src.iter().enumerate() {
        lmap.set_vertex(
            VertexId(ci as u32),
            l_new[p1.l().vertex(k).index()].unwrap(),
        );
        rmap.set_vertex(
            VertexId(ci as u32),
            r_new[p1.r().vertex(k).index()].unwrap(),
        );
    }
    for (ci, &e) in k_esrc.iter().enumerate() {
        lmap.set_edge(EdgeId(ci as u32), l_enew[p1.l().edge(e).index()].unwrap());
        rmap.set_edge(EdgeId(ci as u32), r_enew[p1.r().edge(e).index()].unwrap());
    }
    Rule::new(lmap, rmap)
}
