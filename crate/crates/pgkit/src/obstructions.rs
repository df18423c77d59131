//! Graph-level predicates and obstructions: stability, spoke graphs, tail reconstruction, the
//! stability theorems as pruning rules, quantum integers and the quadratic-tangles constraint.

use std::collections::HashSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::graph_core::{BipartiteGraph, GraphPair, Vertex};
use crate::poly::LaurentPoly;
use crate::spectral::{fp_weights, graph_norm, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Eliminated,
    Survives,
    NeedsExternal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionVerdict {
    pub status: Status,
    /// Identifier of the rule that decided the verdict.
    pub rule: String,
    pub note: String,
}

impl ObstructionVerdict {
    pub fn eliminated(rule: &str, note: impl Into<String>) -> Self {
        ObstructionVerdict { status: Status::Eliminated, rule: rule.into(), note: note.into() }
    }

    pub fn survives(rule: &str, note: impl Into<String>) -> Self {
        ObstructionVerdict { status: Status::Survives, rule: rule.into(), note: note.into() }
    }

    pub fn needs_external(rule: &str, note: impl Into<String>) -> Self {
        ObstructionVerdict { status: Status::NeedsExternal, rule: rule.into(), note: note.into() }
    }

    pub fn is_eliminated(&self) -> bool {
        self.status == Status::Eliminated
    }
}

/// No merging, no splitting and only simple edges between depths n and n+1. Vacuously true at or
/// beyond the last depth.
pub fn is_stable_at(g: &BipartiteGraph, n: usize) -> bool {
    let Some(m) = g.adjacency().get(n) else { return true };
    let rows_ok = m.iter().all(|r| r.iter().sum::<u32>() <= 1);
    let cols_ok = (0..m[0].len()).all(|j| m.iter().map(|r| r[j]).sum::<u32>() <= 1);
    rows_ok && cols_ok
}

/// If `g` is a spoke graph, its distinguished vertex c. A path has no forced centre; its depth-1
/// vertex is reported.
pub fn is_spoke(g: &BipartiteGraph) -> Option<Vertex> {
    if g.max_depth() == 0 {
        return None;
    }
    let simple_edges: usize = g.adjacency().iter().flatten().flatten().filter(|&&m| m > 0).count();
    if simple_edges + 1 != g.num_vertices() || g.valence((0, 0)) != 1 {
        return None;
    }
    let high: Vec<Vertex> = g.vertices().filter(|&v| g.valence(v) > 2).collect();
    let multi: Vec<(Vertex, Vertex)> = g
        .vertices()
        .flat_map(|v| g.children(v).into_iter().filter(|&(_, m)| m > 1).map(move |(j, _)| (v, (v.0 + 1, j))))
        .collect();
    let c = match high.as_slice() {
        [] => multi.first().map(|&(p, _)| p).unwrap_or((1, 0)),
        [c] => *c,
        _ => return None,
    };
    // In a tree graded from ⋆, the edge from c toward ⋆ is the one where c is the child.
    multi.iter().all(|&(p, _)| p == c).then_some(c)
}

/// Length of the A_finite tail headed by a vertex of weight λ1 whose next vertex has weight λ2:
/// the k ≥ 2 with λ2/λ1 = [k−1]/[k]. The ratios increase strictly toward 1/q; the nearest one
/// within `tol` is returned, since consecutive ratios can be closer than any fixed tolerance.
pub fn tail_solve(delta: f64, lambda1: f64, lambda2: f64, tol: f64) -> Result<Option<usize>> {
    if delta <= 2.0 {
        return domain(format!("tail reconstruction needs δ > 2, got {delta}"));
    }
    if lambda1 <= 0.0 || lambda2 <= 0.0 {
        return domain("weights must be positive");
    }
    let r = lambda2 / lambda1;
    // ρ_k = [k−1]/[k] = 1/(δ − ρ_{k−1}), ρ_1 = 0
    let mut rho = 0.0;
    let mut best: Option<(usize, f64)> = None;
    for k in 2..100_000 {
        let next = 1.0 / (delta - rho);
        let err = (r - next).abs();
        if err <= tol && best.is_none_or(|(_, e)| err < e) {
            best = Some((k, err));
        }
        if next > r + tol || next - rho < 1e-17 {
            break;
        }
        rho = next;
    }
    Ok(best.map(|(k, _)| k))
}

fn frontier(g: &BipartiteGraph) -> Vec<Vertex> {
    let d = g.max_depth();
    (0..g.depth_sizes()[d]).map(|i| (d, i)).collect()
}

fn with_tails(g: &BipartiteGraph, tails: &[(Vertex, usize)]) -> Result<BipartiteGraph> {
    let mut out = g.clone();
    for &(v, len) in tails {
        out = out.attach_tail(v, len)?;
    }
    Ok(out)
}

/// The unique graph obtained from `g` by attaching A_finite tails (0..=max_tail edges) at its
/// frontier whose norm equals δ within `tol`. Tails only increase the norm, so the search prunes
/// as soon as a partial choice overshoots δ.
pub fn stable_completion(g: &BipartiteGraph, delta: f64, max_tail: usize, tol: f64) -> Result<Option<BipartiteGraph>> {
    if delta <= 2.0 {
        return domain(format!("tail reconstruction needs δ > 2, got {delta}"));
    }
    if g.is_path() {
        return domain("the truncation must not be a path");
    }
    let front = frontier(g);
    let mut found: Vec<BipartiteGraph> = Vec::new();
    let mut seen = HashSet::new();
    let mut lengths = vec![0usize; front.len()];
    search_tails(g, &front, 0, &mut lengths, delta, max_tail, tol, &mut seen, &mut found)?;
    match found.len() {
        0 => Ok(None),
        1 => Ok(found.pop()),
        n => Err(Error::Precision(format!("{n} non-isomorphic completions match δ = {delta} within {tol}"))),
    }
}

#[allow(clippy::too_many_arguments)]
fn search_tails(
    g: &BipartiteGraph,
    front: &[Vertex],
    i: usize,
    lengths: &mut Vec<usize>,
    delta: f64,
    max_tail: usize,
    tol: f64,
    seen: &mut HashSet<BipartiteGraph>,
    found: &mut Vec<BipartiteGraph>,
) -> Result<()> {
    if i == front.len() {
        let tails: Vec<(Vertex, usize)> = front.iter().copied().zip(lengths.iter().copied()).collect();
        let h = with_tails(g, &tails)?.without_duals().canonical();
        if seen.insert(h.clone()) && (graph_norm(&h, DEFAULT_TOL.min(tol * 1e-2))? - delta).abs() <= tol {
            found.push(h);
        }
        return Ok(());
    }
    for len in 0..=max_tail {
        lengths[i] = len;
        let partial: Vec<(Vertex, usize)> = front[..=i].iter().copied().zip(lengths[..=i].iter().copied()).collect();
        let h = with_tails(g, &partial)?;
        if graph_norm(&h, DEFAULT_TOL.min(tol * 1e-2))? > delta + tol {
            break;
        }
        search_tails(g, front, i + 1, lengths, delta, max_tail, tol, seen, found)?;
    }
    lengths[i] = 0;
    Ok(())
}

/// Checks δ·λ(a_{i+1}) < 2·λ(a_i) along every edge below depth `from` of a completed graph.
pub fn tail_inequality_holds(g: &BipartiteGraph, from: usize, tol: f64) -> Result<bool> {
    let w = fp_weights(g, tol)?;
    for v in g.vertices().filter(|v| v.0 >= from) {
        for (j, _) in g.children(v) {
            let (a, b) = (w.get(v).unwrap(), w.get((v.0 + 1, j)).unwrap());
            if w.eigenvalue * b >= 2.0 * a {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A graph declared to continue as an infinite simple ray from one of its frontier vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InfiniteTail {
    pub on_dual: bool,
    pub vertex: Vertex,
}

fn first_unstable(g: &BipartiteGraph, from: usize, to: usize) -> Option<usize> {
    (from..to).find(|&k| !is_stable_at(g, k))
}

fn trunc(g: &BipartiteGraph, k: usize) -> BipartiteGraph {
    g.truncate(k.min(g.max_depth())).expect("depth within range")
}

/// The stability theorems as pruning rules on a pair known up to `current_depth`:
/// (a) a pair stable at n with Γ(n+1) not a path stays stable;
/// (b) a principal graph stable at n and n+1 with Γ_+(n+1) not a path forces both graphs stable
///     from n+1 on;
/// (c) an infinite A tail only occurs on A_∞, A_∞,∞ or D_∞. Finite truncations never certify an
///     infinite tail, so (c) fires only on tails declared in `infinite_tails`.
pub fn popa_prune(pair: &GraphPair, current_depth: usize, delta_bound: f64) -> ObstructionVerdict {
    popa_prune_with_tails(pair, current_depth, delta_bound, &[])
}

pub fn popa_prune_with_tails(
    pair: &GraphPair,
    current_depth: usize,
    delta_bound: f64,
    infinite_tails: &[InfiniteTail],
) -> ObstructionVerdict {
    let rules = popa_rules(pair, current_depth, delta_bound, infinite_tails);
    if rules[0].status == Status::NeedsExternal {
        return rules[0].clone();
    }
    rules
        .into_iter()
        .find(ObstructionVerdict::is_eliminated)
        .unwrap_or_else(|| ObstructionVerdict::survives("popa", "no stability rule fires"))
}

/// Rules (a), (b) and (c) evaluated independently, in that order.
pub fn popa_rules(
    pair: &GraphPair,
    current_depth: usize,
    delta_bound: f64,
    infinite_tails: &[InfiniteTail],
) -> [ObstructionVerdict; 3] {
    if delta_bound <= 2.0 {
        let v = |r: &str| ObstructionVerdict::needs_external(r, "δ ≤ 2: the stability theorems do not apply");
        return [v("popa_a"), v("popa_b"), v("popa_c")];
    }
    let p = trunc(&pair.principal, current_depth);
    let d = trunc(&pair.dual, current_depth);
    let st = p.supertransitivity();
    // Γ(m) is a path exactly when the path part reaches depth m or covers the whole graph.
    let path_to = |m: usize| st >= m.min(p.max_depth());
    let mut a = ObstructionVerdict::survives("popa_a", "no depth where the pair is stable");
    for n in 0..current_depth {
        if is_stable_at(&p, n) && is_stable_at(&d, n) && !path_to(n + 1) {
            a = ObstructionVerdict::survives("popa_a", format!("pair stable from depth {n} on"));
            for (g, name) in [(&p, "principal"), (&d, "dual")] {
                if let Some(k) = first_unstable(g, n, current_depth) {
                    a = ObstructionVerdict::eliminated(
                        "popa_a",
                        format!("pair stable at depth {n} but the {name} graph is unstable at depth {k}"),
                    );
                    break;
                }
            }
            break;
        }
    }
    let mut b = ObstructionVerdict::survives("popa_b", "no two consecutive stable depths on the principal graph");
    for n in 0..current_depth.saturating_sub(1) {
        if is_stable_at(&p, n) && is_stable_at(&p, n + 1) && !path_to(n + 1) {
            b = ObstructionVerdict::survives("popa_b", format!("both graphs stable from depth {} on", n + 1));
            for (g, name) in [(&p, "principal"), (&d, "dual")] {
                if let Some(k) = first_unstable(g, n + 1, current_depth) {
                    b = ObstructionVerdict::eliminated(
                        "popa_b",
                        format!(
                            "principal graph stable at depths {n} and {} but the {name} graph is unstable at depth {k}",
                            n + 1
                        ),
                    );
                    break;
                }
            }
            break;
        }
    }
    let mut c = ObstructionVerdict::survives("popa_c", "no infinite tail declared");
    for t in infinite_tails {
        let g = if t.on_dual { &pair.dual } else { &pair.principal };
        if !is_a_or_d_infinity_prefix(g, t.vertex) {
            c = ObstructionVerdict::eliminated(
                "popa_c",
                format!("infinite tail at {:?} on a graph other than A_∞, A_∞,∞ or D_∞", t.vertex),
            );
            break;
        }
    }
    [a, b, c]
}

/// Whether `g` with an infinite ray at the leaf `v` is A_∞ or D_∞: a simply laced tree, a path
/// apart from at most one trivalent vertex whose two arms away from `v` are single edges. A_∞,∞
/// needs ⋆ of valence 2, which a graph graded from ⋆ with the ray below ⋆ cannot realise.
fn is_a_or_d_infinity_prefix(g: &BipartiteGraph, v: Vertex) -> bool {
    if !g.contains(v) || g.adjacency().iter().flatten().flatten().any(|&m| m > 1) {
        return false;
    }
    let nbrs = g.neighbour_lists();
    let edges: usize = nbrs.iter().map(Vec::len).sum::<usize>() / 2;
    let root = g.flat_index(v);
    if edges + 1 != nbrs.len() || (nbrs.len() > 1 && nbrs[root].len() != 1) {
        return false;
    }
    let forks: Vec<usize> = (0..nbrs.len()).filter(|&i| nbrs[i].len() > 2).collect();
    match forks.as_slice() {
        [] => true,
        [f] if nbrs[*f].len() == 3 => {
            // The two arms of f not leading to v must be leaves.
            let mut toward_v = root;
            let mut prev = usize::MAX;
            while toward_v != *f {
                let next = nbrs[toward_v].iter().map(|&(j, _)| j).find(|&j| j != prev).unwrap();
                prev = toward_v;
                toward_v = next;
            }
            nbrs[*f].iter().filter(|&&(j, _)| j != prev).all(|&(j, _)| nbrs[j].len() == 1)
        }
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JellyfishVerdict {
    pub one_strand: bool,
    pub two_strand_plus: bool,
    pub two_strand_minus: bool,
}

/// With n − 1 the supertransitivity of the principal graph: 1-strand generators exist iff both
/// Γ_±(n+1) are spokes; 2-strand generators for the principal (dual) side iff Γ_+(n+2)
/// (Γ_−(n+2)) is a spoke.
pub fn jellyfish_verdict(pair: &GraphPair) -> JellyfishVerdict {
    let n = pair.principal.supertransitivity() + 1;
    let spoke_at = |g: &BipartiteGraph, k: usize| is_spoke(&trunc(g, k)).is_some();
    JellyfishVerdict {
        one_strand: spoke_at(&pair.principal, n + 1) && spoke_at(&pair.dual, n + 1),
        two_strand_plus: spoke_at(&pair.principal, n + 2),
        two_strand_minus: spoke_at(&pair.dual, n + 2),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuantumMode {
    Exact,
    Numeric { q: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumScalar {
    Exact(LaurentPoly),
    Numeric(f64),
}

pub fn quantum_integer(k: u32, mode: QuantumMode) -> Result<QuantumScalar> {
    match mode {
        QuantumMode::Exact => Ok(QuantumScalar::Exact(LaurentPoly::quantum_integer(k))),
        QuantumMode::Numeric { q } if q > 1.0 => Ok(QuantumScalar::Numeric(qint(k as i32, q))),
        QuantumMode::Numeric { q } => domain(format!("numeric quantum integers need q > 1, got {q}")),
    }
}

/// [k] at a real q > 1.
pub fn qint(k: i32, q: f64) -> f64 {
    (q.powi(k) - q.powi(-k)) / (q - 1.0 / q)
}

/// The q > 1 with q + 1/q = δ.
pub fn q_from_delta(delta: f64) -> Result<f64> {
    if delta <= 2.0 {
        return domain(format!("q > 1 needs δ > 2, got {delta}"));
    }
    Ok((delta + (delta * delta - 4.0).sqrt()) / 2.0)
}

/// [2n+2]² − [n+1]²([n+2]² + [n]² − 2[n+2][n]) as a Laurent polynomial.
pub fn qt_identity_lhs(n: u32) -> LaurentPoly {
    let q = LaurentPoly::quantum_integer;
    let inner = q(n + 2).pow(2).add(&q(n).pow(2)).sub(&q(n + 2).mul(&q(n)).mul(&LaurentPoly::from_int(2)));
    q(2 * n + 2).pow(2).sub(&q(n + 1).pow(2).mul(&inner))
}

pub fn qt_identity_check(n: u32) -> bool {
    n >= 1 && qt_identity_lhs(n).is_zero()
}

/// σ^n·([2n+2]/W)·Tr(S³) + ([n+1]/W)·((−σ)^{n+1} + (−σ)^{−n−1})·Tr(Š³), with ω = σ² and
/// W = q^{2n+2} + q^{−2n−2} − ω − ω^{−1}.
pub fn qt_residual(n: u32, q: f64, sigma: Complex64, tr_s3: f64, tr_s3_check: f64) -> Result<Complex64> {
    if q <= 1.0 {
        return domain(format!("q must exceed 1, got {q}"));
    }
    if (sigma.norm() - 1.0).abs() > 1e-12 {
        return domain("σ must lie on the unit circle");
    }
    let omega = sigma * sigma;
    let m = 2 * n as i32 + 2;
    let w = Complex64::new(q.powi(m) + q.powi(-m), 0.0) - omega - omega.inv();
    if w.norm() < 1e-300 {
        return Err(Error::Pole(format!("W_{{{m},ω}} vanishes")));
    }
    let k = n as i32 + 1;
    let ms = -sigma;
    let first = sigma.powi(n as i32) * qint(m, q) / w * tr_s3;
    let second = qint(k, q) / w * (ms.powi(k) + ms.powi(-k)) * tr_s3_check;
    Ok(first + second)
}

/// Both square roots of ω, the one with non-negative real part first.
pub fn sigma_roots(omega: Complex64) -> [Complex64; 2] {
    let s = omega.sqrt();
    let s = if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) { -s } else { s };
    [s, -s]
}

/// The closed-form substitution: r ≥ 1 from r + 1/r = 2 + (2 + ω + ω^{−1})/([n+2][n]), ř = [n+2]/[n],
/// and Tr(S³), Tr(Š³) = (x^{1/2} − x^{−1/2})/[n+1]^{1/2} for x = r, ř.
pub fn qt_substitution(n: u32, q: f64, omega: Complex64) -> (f64, f64, f64) {
    let n = n as i32;
    let s = 2.0 + (2.0 + (omega + omega.inv()).re) / (qint(n + 2, q) * qint(n, q));
    let r = (s + (s * s - 4.0).max(0.0).sqrt()) / 2.0;
    let r_check = qint(n + 2, q) / qint(n, q);
    let tr = |x: f64| (x.sqrt() - 1.0 / x.sqrt()) / qint(n + 1, q).sqrt();
    (r, tr(r), tr(r_check))
}

/// For odd n with Tr(S³) = ±Tr(Š³), the residual vanishes only if q^{n+1} + q^{−n−1} = ±(σ + σ^{−1}).
/// Returns the left side, which exceeds 2 for every q > 1 while |σ + σ^{−1}| ≤ 2.
pub fn odd_n_requirement(n: u32, q: f64) -> f64 {
    let k = n as i32 + 1;
    q.powi(k) + q.powi(-k)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QtOutcome {
    pub verdict: ObstructionVerdict,
    pub omega_sum: Option<f64>,
}

/// Solves r + 1/r = 2 + (2 + ω + ω^{−1})/([n+2][n]) for ω + ω^{−1} and eliminates when no
/// unit-circle ω exists, or when n is odd. With `require_root_of_unity`, ω must also satisfy
/// ω^n = 1 (off by default).
pub fn qt_obstruction(n: u32, delta: f64, r: f64, require_root_of_unity: bool) -> Result<QtOutcome> {
    if r < 1.0 {
        return domain(format!("ratio convention needs r ≥ 1, got {r}"));
    }
    let q = q_from_delta(delta)?;
    if n % 2 == 1 {
        return Ok(QtOutcome {
            verdict: ObstructionVerdict::eliminated(
                "qt",
                format!("n = {n} is odd: q^(n+1) + q^-(n+1) = {} > 2", odd_n_requirement(n, q)),
            ),
            omega_sum: None,
        });
    }
    let ni = n as i32;
    let w = (r + 1.0 / r - 2.0) * qint(ni + 2, q) * qint(ni, q) - 2.0;
    let tol = 1e-9;
    if !(-2.0 - tol..=2.0 + tol).contains(&w) {
        return Ok(QtOutcome {
            verdict: ObstructionVerdict::eliminated("qt", format!("ω + ω^-1 = {w} lies outside [-2, 2]")),
            omega_sum: Some(w),
        });
    }
    if require_root_of_unity && !(0..n.max(1)).any(|j| (2.0 * (2.0 * PI * j as f64 / n as f64).cos() - w).abs() < 1e-7)
    {
        return Ok(QtOutcome {
            verdict: ObstructionVerdict::eliminated("qt", format!("ω + ω^-1 = {w} is not 2cos(2πj/{n})")),
            omega_sum: Some(w),
        });
    }
    Ok(QtOutcome { verdict: ObstructionVerdict::survives("qt", format!("ω + ω^-1 = {w}")), omega_sum: Some(w) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::graph_codec::parse;

    fn pair((a, b): (&str, &str)) -> GraphPair {
        GraphPair::new(parse(a).unwrap(), parse(b).unwrap())
    }

    #[test]
    fn stability_examples() {
        let a5 = BipartiteGraph::path(5);
        assert!((0..6).all(|n| is_stable_at(&a5, n)));
        let g = parse(catalog::SPOKE_2221).unwrap();
        assert!(is_stable_at(&g, 1));
        assert!(!is_stable_at(&g, 2));
        let h = parse(catalog::HAAGERUP.0).unwrap();
        assert!(is_stable_at(&h, 4));
        assert!(!is_stable_at(&h, 3));
    }

    #[test]
    fn spoke_examples() {
        assert_eq!(is_spoke(&parse(catalog::SPOKE_2221).unwrap()), Some((2, 0)));
        assert!(is_spoke(&parse(catalog::ASAEDA_HAAGERUP.0).unwrap()).is_none());
        // Double edge at c away from ⋆, simple stem.
        let s3 = BipartiteGraph::from_rows(&[vec![vec![1]], vec![vec![2]]]).unwrap();
        assert_eq!(is_spoke(&s3), Some((1, 0)));
        let stem = BipartiteGraph::from_rows(&[vec![vec![1]], vec![vec![2]], vec![vec![1], vec![1]]]);
        assert!(stem.is_err() || is_spoke(&stem.unwrap()).is_none());
        let bad = BipartiteGraph::from_rows(&[vec![vec![2]], vec![vec![1]]]).unwrap();
        assert!(is_spoke(&bad).is_none());
        assert_eq!(is_spoke(&BipartiteGraph::path(4)), Some((1, 0)));
    }

    #[test]
    fn tail_solve_examples() {
        assert_eq!(tail_solve(3.0, 1.0, 1.0 / 3.0, 1e-12).unwrap(), Some(2));
        assert_eq!(tail_solve(3.0, 8.0, 3.0, 1e-12).unwrap(), Some(3));
        assert_eq!(tail_solve(3.0, 1.0, 0.5, 1e-9).unwrap(), None);
        assert!(tail_solve(2.0, 1.0, 0.5, 1e-9).is_err());
    }

    #[test]
    fn verdicts_on_known_pairs() {
        let v = jellyfish_verdict(&pair(catalog::PAIR_2221));
        assert!(v.one_strand);
        let v = jellyfish_verdict(&pair(catalog::HAAGERUP));
        assert!(v.two_strand_plus && !v.one_strand);
        let v = jellyfish_verdict(&pair(catalog::ASAEDA_HAAGERUP));
        assert!(!v.one_strand && !v.two_strand_plus && !v.two_strand_minus);
    }

    #[test]
    fn popa_examples() {
        let h = pair(catalog::HAAGERUP);
        assert_eq!(popa_prune(&h, 6, 2.5).status, Status::Survives);
        let branched =
            GraphPair::new(parse("gbg1v1p1v1x0p0x1v1x0p0x1").unwrap(), parse("gbg1v1p1v1x0p1x0v1x0p1x0").unwrap());
        let v = popa_prune(&branched, 4, 2.5);
        assert_eq!(v.rule, "popa_b", "{v:?}");
        // Both sides stable at depth 1 past a fork, then a double edge on the dual.
        let p = parse("gbg1v1p1v1x0p0x1v1x0p0x1").unwrap();
        let d = parse("gbg1v1p1v1x0p0x1v2x0p0x1").unwrap();
        let v = popa_prune(&GraphPair::new(p, d), 4, 2.5);
        assert_eq!(v.rule, "popa_a", "{v:?}");
    }

    #[test]
    fn rule_c_on_declared_rays() {
        let g = GraphPair::new(BipartiteGraph::path(4), BipartiteGraph::path(4));
        let ok = InfiniteTail { on_dual: false, vertex: (3, 0) };
        assert_eq!(popa_prune_with_tails(&g, 3, 2.5, &[ok]).status, Status::Survives);
        // ⋆ and a sibling leaf on the depth-1 vertex, then a path: D_∞.
        let d_inf = parse("gbg1v1p1v1x0").unwrap();
        let g = GraphPair::new(d_inf.clone(), d_inf);
        let ray = InfiniteTail { on_dual: true, vertex: (3, 0) };
        assert_eq!(popa_prune_with_tails(&g, 3, 2.5, &[ray]).status, Status::Survives);
        let long_arm = parse("gbg1v1p1v1x0p0x1v1x0").unwrap();
        let g = GraphPair::new(long_arm.clone(), long_arm);
        let ray = InfiniteTail { on_dual: false, vertex: (4, 0) };
        assert_eq!(popa_prune_with_tails(&g, 4, 2.5, &[ray]).rule, "popa_c");
        let d4 = parse("gbg1v1p1").unwrap();
        let g = GraphPair::new(d4.clone(), d4);
        let ray = InfiniteTail { on_dual: false, vertex: (2, 0) };
        assert_eq!(popa_prune_with_tails(&g, 2, 2.5, &[ray]).status, Status::Survives);
    }

    #[test]
    fn quantum_identity() {
        assert!((1..=30).all(qt_identity_check));
        let perturbed = |n: u32| {
            let q = LaurentPoly::quantum_integer;
            qt_identity_lhs(n).sub(&q(2 * n + 2).pow(2)).add(&q(2 * n + 1).pow(2))
        };
        assert!(!perturbed(1).is_zero());
    }

    #[test]
    fn qt_obstruction_examples() {
        let odd = qt_obstruction(3, 2.2, 1.5, false).unwrap();
        assert!(odd.verdict.is_eliminated());
        let one = qt_obstruction(4, 2.2, 1.0, false).unwrap();
        assert_eq!(one.verdict.status, Status::Survives);
        assert!((one.omega_sum.unwrap() + 2.0).abs() < 1e-12);
        assert!(qt_obstruction(4, 2.2, 0.5, false).is_err());
        assert!(qt_obstruction(4, 2.2, 100.0, false).unwrap().verdict.is_eliminated());
    }

    #[test]
    fn qt_residual_zero_traces() {
        let s = Complex64::new(0.6, 0.8);
        assert_eq!(qt_residual(2, 1.5, s, 0.0, 0.0).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn stable_completion_recovers_known_graphs() {
        let two = parse(catalog::SPOKE_2221).unwrap();
        let delta = graph_norm(&two, 1e-13).unwrap();
        let c = stable_completion(&two.truncate(3).unwrap(), delta, 6, 1e-9).unwrap().unwrap();
        assert!(c.is_isomorphic(&two));
        let h = parse(catalog::HAAGERUP.0).unwrap().without_duals();
        let delta = ((5.0 + 13f64.sqrt()) / 2.0).sqrt();
        let c = stable_completion(&h.truncate(5).unwrap(), delta, 4, 1e-9).unwrap().unwrap();
        assert!(c.is_isomorphic(&h));
        assert!(tail_inequality_holds(&c, 5, 1e-12).unwrap());
        assert!(stable_completion(&h.truncate(4).unwrap(), 2.4, 8, 1e-9).unwrap().is_none());
    }

    #[test]
    fn norm_alone_does_not_fix_tail_lengths() {
        // Arms of 3, 2 and 7 edges give exactly the norm of H's 3, 3, 3 arms.
        let h = parse(catalog::HAAGERUP.0).unwrap().without_duals();
        let delta = ((5.0 + 13f64.sqrt()) / 2.0).sqrt();
        assert!(matches!(stable_completion(&h.truncate(5).unwrap(), delta, 8, 1e-9), Err(Error::Precision(_))));
    }
}
