//! Weed enumeration: even translations and depth-by-depth extensions of a fixed graph pair, pruned
//! by the norm bound, the stability theorems, the spoke theorems and quadratic tangles.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog;
use crate::error::{domain, Error, Result};
use crate::graph_codec::{parse, serialize_canonical};
use crate::graph_core::{BipartiteGraph, GraphPair, Vertex, MAX_MULTIPLICITY};
use crate::obstructions::{
    is_spoke, is_stable_at, popa_rules, qt_obstruction, stable_completion, ObstructionVerdict, Status,
};
use crate::spectral::{fp_weights, graph_norm};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;
pub const NODE_BUDGET_ENV: &str = "PGKIT_NODE_BUDGET";

const SPECTRAL_TOL: f64 = 1e-11;
/// Two norms closer than this are treated as equal.
const NORM_TOL: f64 = 1e-8;

/// A fixed graph pair together with the bounds of the family it generates.
#[derive(Clone, Debug)]
pub struct Weed {
    pub pair: GraphPair,
    /// Bound on δ² = ‖Γ‖².
    pub max_index: f64,
    /// Largest depth of an enumerated graph. A bound at or below the weed's own depth reports
    /// the weed alone, read as a complete pair.
    pub max_depth: usize,
    pub max_new_vertices: usize,
    pub max_mult: u32,
}

impl Weed {
    pub fn new(
        pair: GraphPair,
        max_index: f64,
        max_depth: usize,
        max_new_vertices: usize,
        max_mult: u32,
    ) -> Result<Self> {
        if !(max_index.is_finite() && max_index > 0.0) {
            return domain(format!("index bound must be positive and finite, got {max_index}"));
        }
        if max_new_vertices == 0 {
            return domain("at least one new vertex per depth must be allowed");
        }
        if max_mult == 0 || max_mult > MAX_MULTIPLICITY {
            return domain(format!("multiplicity bound must lie in 1..={MAX_MULTIPLICITY}, got {max_mult}"));
        }
        if pair.principal.max_depth() == 0 || pair.dual.max_depth() == 0 {
            return domain("weed graphs need at least one edge");
        }
        let pair = GraphPair::new(pair.principal.without_duals().canonical(), pair.dual.without_duals().canonical());
        Ok(Weed { pair, max_index, max_depth, max_new_vertices, max_mult })
    }

    pub fn from_strings(
        principal: &str,
        dual: &str,
        max_index: f64,
        max_depth: usize,
        max_new_vertices: usize,
        max_mult: u32,
    ) -> Result<Self> {
        Weed::new(GraphPair::new(parse(principal)?, parse(dual)?), max_index, max_depth, max_new_vertices, max_mult)
    }

    fn depth(&self) -> usize {
        self.pair.principal.max_depth().max(self.pair.dual.max_depth())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleStatus {
    Pass,
    Eliminated,
    NeedsExternal,
    NotApplicable,
    /// Diagnostic finding that never eliminates.
    Flagged,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RuleReport {
    pub name: String,
    pub status: RuleStatus,
    pub detail: String,
}

impl RuleReport {
    fn new(name: &str, status: RuleStatus, detail: impl Into<String>) -> Self {
        RuleReport { name: name.into(), status, detail: detail.into() }
    }

    /// Rule-level needs_external means the rule's hypotheses are not certified, so it does not
    /// apply here.
    fn from_verdict(v: ObstructionVerdict) -> Self {
        let status = match v.status {
            Status::Eliminated => RuleStatus::Eliminated,
            Status::Survives => RuleStatus::Pass,
            Status::NeedsExternal => RuleStatus::NotApplicable,
        };
        RuleReport { name: v.rule, status, detail: v.note }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurvivorReport {
    /// Canonical strings of (Γ+, Γ−); for incomplete candidates, the known truncations.
    pub pair: [String; 2],
    pub translation: usize,
    /// Both graphs are known to end.
    pub complete: bool,
    /// Produced after the principal graph became stable at depths n and n+1.
    pub past_trigger: bool,
    pub rules: Vec<RuleReport>,
    pub status: Status,
    /// The first rule that eliminated the candidate or deferred it to external input.
    pub decided_by: Option<String>,
}

impl SurvivorReport {
    pub fn rule(&self, name: &str) -> Option<&RuleReport> {
        self.rules.iter().find(|r| r.name == name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("resource limit exceeded: node budget {budget} exhausted; {} reports so far", partial.len())]
    Budget { budget: usize, partial: Vec<SurvivorReport> },
}

/// Known subfactor principal graph pairs. Reaching one marks a candidate as surviving; the list
/// never eliminates anything.
fn reference_pairs() -> &'static [(BipartiteGraph, BipartiteGraph)] {
    static REFS: OnceLock<Vec<(BipartiteGraph, BipartiteGraph)>> = OnceLock::new();
    REFS.get_or_init(|| {
        [catalog::HAAGERUP, catalog::EXTENDED_HAAGERUP, catalog::ASAEDA_HAAGERUP, catalog::PAIR_2221]
            .iter()
            .map(|(a, b)| (parse(a).unwrap().without_duals(), parse(b).unwrap().without_duals()))
            .collect()
    })
}

fn star10() -> &'static (BipartiteGraph, BipartiteGraph) {
    static S: OnceLock<(BipartiteGraph, BipartiteGraph)> = OnceLock::new();
    S.get_or_init(|| {
        (parse(catalog::STAR10.0).unwrap().without_duals(), parse(catalog::STAR10.1).unwrap().without_duals())
    })
}

fn trunc(g: &BipartiteGraph, k: usize) -> BipartiteGraph {
    g.truncate(k.min(g.max_depth())).expect("depth within range")
}

fn norm(g: &BipartiteGraph) -> Result<f64> {
    graph_norm(g, SPECTRAL_TOL)
}

/// The n at which a pair has the *10 shape: its truncation to depth n+1 is the *10 weed
/// translated by n − 2.
fn star10_depth(p: &BipartiteGraph, d: &BipartiteGraph) -> Option<usize> {
    let st = p.supertransitivity();
    if st == 0 || (st - 1) % 2 == 1 {
        return None;
    }
    let (wp, wd) = star10();
    let (wp, wd) = (wp.translate(st - 1).ok()?, wd.translate(st - 1).ok()?);
    let depth = wp.max_depth();
    if p.max_depth() < depth || d.max_depth() < depth {
        return None;
    }
    (trunc(p, depth).is_isomorphic(&wp) && trunc(d, depth).is_isomorphic(&wd)).then_some(st + 1)
}

/// Graphs known through `level`; a `done` graph is known to end at its own last depth.
#[derive(Clone, Debug)]
struct Node {
    p: BipartiteGraph,
    d: BipartiteGraph,
    p_done: bool,
    d_done: bool,
    level: usize,
    np: f64,
    nd: f64,
}

impl Node {
    fn new(p: BipartiteGraph, d: BipartiteGraph, p_done: bool, d_done: bool, level: usize) -> Result<Self> {
        let (np, nd) = (norm(&p)?, norm(&d)?);
        Ok(Node { p, d, p_done, d_done, level, np, nd })
    }

    fn complete(&self) -> bool {
        self.p_done && self.d_done
    }

    fn key(&self) -> (BipartiteGraph, BipartiteGraph, bool, bool) {
        (self.p.clone(), self.d.clone(), self.p_done, self.d_done)
    }
}

/// One way to continue a graph by a depth, with its norm.
#[derive(Clone, Debug)]
struct Continuation {
    g: BipartiteGraph,
    done: bool,
    norm: f64,
}

enum Step {
    Reports(Vec<SurvivorReport>),
    Extend,
}

struct Search<'a> {
    weed: &'a Weed,
    budget: usize,
    used: AtomicUsize,
}

/// Runs the search with the node budget from `PGKIT_NODE_BUDGET`, or the default.
pub fn classify_weed(w: &Weed) -> std::result::Result<Vec<SurvivorReport>, ClassifyError> {
    let budget = match std::env::var(NODE_BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Domain(format!("{NODE_BUDGET_ENV} must be a non-negative integer, got {s:?}")))?,
        Err(_) => DEFAULT_NODE_BUDGET,
    };
    classify_weed_with_budget(w, budget)
}

/// Breadth-first search over even translations and depth-by-depth extensions. Every pruned
/// subtree, complete candidate and candidate left open at the depth bound yields one report.
/// Translations are searched in parallel and merged in increasing order.
pub fn classify_weed_with_budget(w: &Weed, budget: usize) -> std::result::Result<Vec<SurvivorReport>, ClassifyError> {
    let search = Search { weed: w, budget, used: AtomicUsize::new(0) };
    let mut ks = vec![0];
    // Translation embeds the shorter family member, so norms grow with k.
    let mut k = 2;
    while k + w.depth() <= w.max_depth {
        let t = norm(&w.pair.principal.translate(k)?)?.max(norm(&w.pair.dual.translate(k)?)?);
        ks.push(k);
        if t * t > w.max_index + NORM_TOL {
            break;
        }
        k += 2;
    }
    let results: Vec<(Vec<SurvivorReport>, Option<Error>)> = ks.par_iter().map(|&k| search.translation(k)).collect();
    let mut out = Vec::new();
    let mut failure = None;
    for (reports, err) in results {
        out.extend(reports);
        if failure.is_none() {
            failure = err;
        }
    }
    match failure {
        None => Ok(out),
        Some(Error::Resource(_)) => Err(ClassifyError::Budget { budget, partial: out }),
        Some(e) => Err(e.into()),
    }
}

impl Search<'_> {
    fn charge(&self) -> Result<()> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::Resource(format!("node budget {} exhausted", self.budget)));
        }
        Ok(())
    }

    fn translation(&self, k: usize) -> (Vec<SurvivorReport>, Option<Error>) {
        let mut reports = Vec::new();
        match self.run(k, &mut reports) {
            Ok(()) => (reports, None),
            Err(e) => (reports, Some(e)),
        }
    }

    fn run(&self, k: usize, reports: &mut Vec<SurvivorReport>) -> Result<()> {
        let mut level = vec![self.start(k)?];
        while !level.is_empty() {
            let steps: Vec<Result<Step>> = level.par_iter().map(|n| self.step(k, n)).collect();
            let mut open = Vec::new();
            for (node, step) in level.iter().zip(steps) {
                match step? {
                    Step::Reports(r) => reports.extend(r),
                    Step::Extend => open.push(node),
                }
            }
            // Each distinct graph is extended once per level.
            let mut todo: Vec<&BipartiteGraph> = Vec::new();
            let mut seen = HashSet::new();
            for n in &open {
                for (g, done) in [(&n.p, n.p_done), (&n.d, n.d_done)] {
                    if !done && g.max_depth() == n.level && seen.insert(g) {
                        todo.push(g);
                    }
                }
            }
            let ext: Vec<Result<Vec<Continuation>>> = todo.par_iter().map(|g| self.continuations(g)).collect();
            let mut memo = HashMap::new();
            for (g, e) in todo.into_iter().zip(ext) {
                memo.insert(g, e?);
            }
            let mut next = Vec::new();
            let mut seen = HashSet::new();
            for n in open {
                let options = |g: &BipartiteGraph, done: bool, norm: f64| -> Vec<Continuation> {
                    match memo.get(g) {
                        Some(c) if !done && g.max_depth() == n.level => c.clone(),
                        _ => vec![Continuation { g: g.clone(), done, norm }],
                    }
                };
                let bound = self.weed.max_index + NORM_TOL;
                let (p_live, p_dead): (Vec<_>, Vec<_>) =
                    options(&n.p, n.p_done, n.np).into_iter().partition(|c| c.norm * c.norm <= bound);
                let (d_live, d_dead): (Vec<_>, Vec<_>) =
                    options(&n.d, n.d_done, n.nd).into_iter().partition(|c| c.norm * c.norm <= bound);
                // Extensions over the index bound are reported once, against the other graph's
                // current truncation.
                for c in p_dead {
                    self.charge()?;
                    let v = Node { p: c.g, p_done: c.done, np: c.norm, level: n.level + 1, ..n.clone() };
                    reports.push(self.report(k, &v, self.rules(&v)?, false, "")?);
                }
                for c in d_dead {
                    self.charge()?;
                    let v = Node { d: c.g, d_done: c.done, nd: c.norm, level: n.level + 1, ..n.clone() };
                    reports.push(self.report(k, &v, self.rules(&v)?, false, "")?);
                }
                for p in &p_live {
                    for d in &d_live {
                        let child = Node {
                            p: p.g.clone(),
                            d: d.g.clone(),
                            p_done: p.done,
                            d_done: d.done,
                            level: n.level + 1,
                            np: p.norm,
                            nd: d.norm,
                        };
                        if seen.insert(child.key()) {
                            next.push(child);
                        }
                    }
                }
            }
            level = next;
        }
        Ok(())
    }

    fn continuations(&self, g: &BipartiteGraph) -> Result<Vec<Continuation>> {
        g.extend_one_depth(self.weed.max_new_vertices, self.weed.max_mult)
            .into_iter()
            .enumerate()
            .map(|(i, e)| Ok(Continuation { norm: norm(&e)?, g: e, done: i == 0 }))
            .collect()
    }

    fn start(&self, k: usize) -> Result<Node> {
        let p = self.weed.pair.principal.translate(k)?.canonical();
        let d = self.weed.pair.dual.translate(k)?.canonical();
        let whole = self.weed.depth() + k >= self.weed.max_depth;
        let level = if whole { p.max_depth().max(d.max_depth()) } else { p.max_depth().min(d.max_depth()) };
        Node::new(p, d, whole, whole, level)
    }

    fn step(&self, k: usize, node: &Node) -> Result<Step> {
        self.charge()?;
        let rules = self.rules(node)?;
        if rules.iter().any(|r| r.status == RuleStatus::Eliminated) || node.complete() {
            return Ok(Step::Reports(vec![self.report(k, node, rules, false, "")?]));
        }
        if let Some(n) = self.trigger_depth(node) {
            return Ok(Step::Reports(self.past_trigger(k, node, n)?));
        }
        if node.level < self.weed.max_depth {
            return Ok(Step::Extend);
        }
        let mut out = Vec::new();
        let ended = Node { p_done: true, d_done: true, ..node.clone() };
        let ended_rules = self.rules(&ended)?;
        if !ended_rules.iter().any(|r| r.status == RuleStatus::Eliminated) {
            out.push(self.report(k, &ended, ended_rules, false, "")?);
        }
        let why = format!("undecided at the depth bound {}", self.weed.max_depth);
        out.push(self.report(k, node, rules, false, &why)?);
        Ok(Step::Reports(out))
    }

    /// The n = supertransitivity + 1 at which Γ+ is known through depth n+2 and stable at n and
    /// n+1, so that every continuation is either a spoke with tails or excluded.
    fn trigger_depth(&self, node: &Node) -> Option<usize> {
        let p = &node.p;
        if p.is_path() {
            return None;
        }
        let n = p.supertransitivity() + 1;
        let known = node.p_done || p.max_depth() >= n + 2;
        (known && is_stable_at(p, n) && is_stable_at(p, n + 1)).then_some(n)
    }

    /// Beyond the trigger: one-depth Γ+ extensions that break stability are reported, then every
    /// tail completion of Γ+ fixes δ and Γ− is rebuilt from its truncation by tails of norm δ.
    fn past_trigger(&self, k: usize, node: &Node, n: usize) -> Result<Vec<SurvivorReport>> {
        let w = self.weed;
        let mut out = Vec::new();
        let front = node.p.max_depth();
        if !node.p_done && front < w.max_depth {
            for e in node.p.extend_one_depth(w.max_new_vertices, w.max_mult).into_iter().skip(1) {
                if is_stable_at(&e, front) {
                    continue;
                }
                self.charge()?;
                let child = Node { np: norm(&e)?, p: e, p_done: false, level: front + 1, ..node.clone() };
                let rules = self.rules(&child)?;
                out.push(self.report(
                    k,
                    &child,
                    rules,
                    true,
                    "δ > 2 not certified, so the spoke theorem does not apply",
                )?);
            }
        }
        let completions = if node.p_done { vec![node.p.clone()] } else { tail_completions(&node.p, w.max_depth)? };
        for c in completions {
            self.charge()?;
            let delta = norm(&c)?;
            let level = node.level.max(c.max_depth());
            let view = Node { p: c, p_done: true, level, np: delta, ..node.clone() };
            if delta * delta > w.max_index + NORM_TOL || delta <= 2.0 + NORM_TOL {
                let rules = self.rules(&view)?;
                out.push(self.report(k, &view, rules, true, "δ ≤ 2: left to the index ≤ 4 classification")?);
                continue;
            }
            let max_tail = if node.d_done { 0 } else { w.max_depth.saturating_sub(node.d.max_depth()) };
            let found = if node.d.is_path() {
                // Tails on a path give paths, whose norms stay below 2.
                Ok(None)
            } else {
                stable_completion(&node.d, delta, max_tail, NORM_TOL)
            };
            match found {
                Ok(Some(g)) => {
                    let full = Node { level: view.level.max(g.max_depth()), nd: norm(&g)?, d: g, d_done: true, ..view };
                    let rules = self.rules(&full)?;
                    out.push(self.report(k, &full, rules, true, "")?);
                }
                Ok(None) => {
                    let mut rules = self.rules(&view)?;
                    let spoke = rules.iter_mut().find(|r| r.name == "spoke").expect("spoke rule present");
                    *spoke = RuleReport::new(
                        "spoke",
                        RuleStatus::Eliminated,
                        format!(
                            "Γ− must be stable from depth {}, but no stable completion of Γ− has norm δ = {delta:.9}",
                            n + 1
                        ),
                    );
                    out.push(self.report(k, &view, rules, true, "")?);
                }
                Err(Error::Precision(msg)) => {
                    let rules = self.rules(&view)?;
                    out.push(self.report(k, &view, rules, true, &format!("Γ− completion not unique: {msg}"))?);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    fn rules(&self, node: &Node) -> Result<Vec<RuleReport>> {
        let (np, nd) = (node.np, node.nd);
        // Truncations bound δ from below.
        let lower = np.max(nd);
        let pair = GraphPair::new(node.p.clone(), node.d.clone());
        let mut out = vec![self.norm_rule(node, np, nd)];
        out.extend(popa_rules(&pair, node.level, lower, &[]).into_iter().map(RuleReport::from_verdict));
        out.push(spoke_rule(node, lower));
        if out.iter().any(|r| r.status == RuleStatus::Eliminated) {
            out.push(RuleReport::new("qt", RuleStatus::NotApplicable, "skipped: already eliminated"));
        } else {
            out.push(qt_rule(node, np)?);
        }
        out.push(odd_depth_rule(node));
        Ok(out)
    }

    fn norm_rule(&self, node: &Node, np: f64, nd: f64) -> RuleReport {
        let bound = self.weed.max_index;
        let elim = |d: String| RuleReport::new("norm", RuleStatus::Eliminated, d);
        if np * np > bound + NORM_TOL {
            return elim(format!("‖Γ+‖² = {:.9} exceeds the index bound {bound}", np * np));
        }
        if nd * nd > bound + NORM_TOL {
            return elim(format!("‖Γ−‖² = {:.9} exceeds the index bound {bound}", nd * nd));
        }
        if node.p_done && nd > np + NORM_TOL {
            return elim(format!("‖Γ−‖ = {nd:.9} exceeds ‖Γ+‖ = {np:.9} of the complete principal graph"));
        }
        if node.d_done && np > nd + NORM_TOL {
            return elim(format!("‖Γ+‖ = {np:.9} exceeds ‖Γ−‖ = {nd:.9} of the complete dual graph"));
        }
        RuleReport::new("norm", RuleStatus::Pass, format!("‖Γ+‖ = {np:.9}, ‖Γ−‖ = {nd:.9}"))
    }

    fn report(
        &self,
        k: usize,
        node: &Node,
        mut rules: Vec<RuleReport>,
        past_trigger: bool,
        open_reason: &str,
    ) -> Result<SurvivorReport> {
        let (status, decided_by) = if let Some(r) = rules.iter().find(|r| r.status == RuleStatus::Eliminated) {
            (Status::Eliminated, Some(r.name.clone()))
        } else if node.complete() && open_reason.is_empty() {
            let delta = node.np;
            let known = reference_pairs().iter().any(|(a, b)| node.p.is_isomorphic(a) && node.d.is_isomorphic(b));
            let (status, detail) = if known {
                (RuleStatus::Pass, "a known subfactor principal graph pair".to_string())
            } else if delta <= 2.0 + NORM_TOL {
                (RuleStatus::NeedsExternal, "δ ≤ 2: decided by the index ≤ 4 classification".to_string())
            } else if delta * delta < 5.0 - NORM_TOL {
                (
                    RuleStatus::NeedsExternal,
                    format!("index {:.9} < 5: decided by the classification below index 5", delta * delta),
                )
            } else if delta * delta <= 5.0 + NORM_TOL {
                (RuleStatus::NeedsExternal, "index 5: decided by the classification at index exactly 5".to_string())
            } else {
                (RuleStatus::Pass, "no external classification applies".to_string())
            };
            rules.push(RuleReport::new("external", status, detail));
            match status {
                RuleStatus::NeedsExternal => (Status::NeedsExternal, Some("external".to_string())),
                _ => (Status::Survives, None),
            }
        } else {
            let why = if open_reason.is_empty() { "candidate not complete" } else { open_reason };
            rules.push(RuleReport::new("open", RuleStatus::NeedsExternal, why));
            (Status::NeedsExternal, Some("open".to_string()))
        };
        Ok(SurvivorReport {
            pair: [serialize_canonical(&node.p)?, serialize_canonical(&node.d)?],
            translation: k,
            complete: node.complete(),
            past_trigger,
            rules,
            status,
            decided_by,
        })
    }
}

/// Γ+ with A_finite tails of any length at its last-depth vertices, staying within `max_depth`.
fn tail_completions(p: &BipartiteGraph, max_depth: usize) -> Result<Vec<BipartiteGraph>> {
    let f = p.max_depth();
    let front: Vec<Vertex> = (0..p.depth_sizes()[f]).map(|i| (f, i)).collect();
    let max_len = max_depth.saturating_sub(f);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for lens in front.iter().map(|_| 0..=max_len).multi_cartesian_product() {
        let mut g = p.clone();
        for (&v, &l) in front.iter().zip(&lens) {
            g = g.attach_tail(v, l)?;
        }
        let g = g.canonical();
        if seen.insert(g.clone()) {
            out.push(g);
        }
    }
    Ok(out)
}

/// The one-strand and two-strand theorems: Γ±(n+1) spokes force both graphs to be finite spokes;
/// Γ+(n+2) a spoke forces Γ+ to be a finite spoke and Γ− stable from depth n+1.
fn spoke_rule(node: &Node, lower: f64) -> RuleReport {
    let na = |d: &str| RuleReport::new("spoke", RuleStatus::NotApplicable, d);
    if lower <= 2.0 {
        return na("δ > 2 not certified by the truncations");
    }
    let (p, d) = (&node.p, &node.d);
    if p.is_path() {
        return na("principal graph is a path so far");
    }
    let n = p.supertransitivity() + 1;
    let p_known = |k: usize| node.p_done || p.max_depth() >= k;
    let d_known = |k: usize| node.d_done || d.max_depth() >= k;
    let spoke_to = |g: &BipartiteGraph, k: usize| is_spoke(&trunc(g, k)).is_some();
    let elim = |s: String| RuleReport::new("spoke", RuleStatus::Eliminated, s);
    if p_known(n + 1) && d_known(n + 1) && spoke_to(p, n + 1) && spoke_to(d, n + 1) {
        for (g, name) in [(p, "Γ+"), (d, "Γ−")] {
            if is_spoke(g).is_none() {
                return elim(format!("Γ±({}) are spokes but {name} is not a spoke", n + 1));
            }
        }
        return RuleReport::new(
            "spoke",
            RuleStatus::Pass,
            format!("Γ±({}) are spokes and both graphs stay spokes", n + 1),
        );
    }
    if p_known(n + 2) && spoke_to(p, n + 2) {
        if is_spoke(p).is_none() {
            return elim(format!("Γ+({}) is a spoke but Γ+ is not a spoke", n + 2));
        }
        if let Some(k) = (n + 1..d.max_depth()).find(|&k| !is_stable_at(d, k)) {
            return elim(format!(
                "Γ+({}) is a spoke, so Γ− must be stable from depth {}, but it is unstable at depth {k}",
                n + 2,
                n + 1
            ));
        }
        return RuleReport::new(
            "spoke",
            RuleStatus::Pass,
            format!("Γ+({}) is a spoke; Γ+ stays a spoke and Γ− stable", n + 2),
        );
    }
    if !p_known(n + 2) {
        return na("Γ+ not yet known through depth n+2");
    }
    na("neither spoke hypothesis holds")
}

/// Quadratic tangles on complete *10-shaped pairs, with r the ratio of the Frobenius-Perron
/// weights of the two depth-n vertices of Γ+.
fn qt_rule(node: &Node, delta: f64) -> Result<RuleReport> {
    let na = |d: &str| Ok(RuleReport::new("qt", RuleStatus::NotApplicable, d));
    if !node.complete() {
        return na("needs a complete pair");
    }
    let Some(n) = star10_depth(&node.p, &node.d) else { return na("not of *10 shape") };
    if delta <= 2.0 + NORM_TOL {
        return na("δ ≤ 2");
    }
    let w = fp_weights(&node.p, SPECTRAL_TOL)?;
    let (a, b) = (w.weights[n][0], w.weights[n][1]);
    let r = a.max(b) / a.min(b);
    let outcome = qt_obstruction(n as u32, delta, r, false)?;
    let mut rep = RuleReport::from_verdict(outcome.verdict);
    rep.detail = format!("n = {n}, r = {r:.9}: {}", rep.detail);
    Ok(rep)
}

fn odd_depth_rule(node: &Node) -> RuleReport {
    if !node.complete() {
        return RuleReport::new("odd_depth_dims", RuleStatus::NotApplicable, "needs a complete pair");
    }
    if GraphPair::new(node.p.clone(), node.d.clone()).odd_depth_counts_agree() {
        RuleReport::new("odd_depth_dims", RuleStatus::Pass, "odd-depth vertex counts agree")
    } else {
        RuleReport::new("odd_depth_dims", RuleStatus::Flagged, "odd-depth vertex counts differ (diagnostic only)")
    }
}
