//! Depth-graded bipartite multigraphs with a basepoint ⋆ at depth 0.

use std::collections::{HashSet, VecDeque};

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{domain, Error, Result};

/// A vertex is addressed by (depth, index within that depth).
pub type Vertex = (usize, usize);

/// Largest edge multiplicity the single-digit string format can carry.
pub const MAX_MULTIPLICITY: u32 = 9;

/// Vertex order per depth, a candidate relabelling during canonicalisation.
type Order = Vec<Vec<usize>>;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct BipartiteGraph {
    depth_sizes: Vec<usize>,
    /// `adjacency[d][i][j]` is the number of edges between vertex i at depth d and vertex j at
    /// depth d+1.
    adjacency: Vec<Vec<Vec<u32>>>,
    /// One involution per even depth 0, 2, 4, ... up to the maximal depth.
    #[serde(skip_serializing_if = "Option::is_none")]
    duals: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GraphPair {
    pub principal: BipartiteGraph,
    pub dual: BipartiteGraph,
}

impl GraphPair {
    pub fn new(principal: BipartiteGraph, dual: BipartiteGraph) -> Self {
        GraphPair { principal, dual }
    }

    /// Diagnostic only: the two graphs should have equally many vertices at each odd depth.
    pub fn odd_depth_counts_agree(&self) -> bool {
        let depth = self.principal.max_depth().max(self.dual.max_depth());
        (1..=depth).step_by(2).all(|d| {
            self.principal.depth_sizes.get(d).copied().unwrap_or(0)
                == self.dual.depth_sizes.get(d).copied().unwrap_or(0)
        })
    }
}

impl BipartiteGraph {
    pub fn new(depth_sizes: Vec<usize>, adjacency: Vec<Vec<Vec<u32>>>, duals: Option<Vec<Vec<usize>>>) -> Result<Self> {
        let g = BipartiteGraph { depth_sizes, adjacency, duals };
        g.validate()?;
        Ok(g)
    }

    /// Build from per-depth vertex rows: `rows[d]` lists the vertices at depth d+1, each given by
    /// its multiplicities to the vertices at depth d. This is the string format's native shape.
    pub fn from_rows(rows: &[Vec<Vec<u32>>]) -> Result<Self> {
        let mut depth_sizes = vec![1];
        let mut adjacency = Vec::with_capacity(rows.len());
        for (d, block) in rows.iter().enumerate() {
            let prev = depth_sizes[d];
            let mut m = vec![vec![0; block.len()]; prev];
            for (j, row) in block.iter().enumerate() {
                if row.len() != prev {
                    return Err(Error::Validation(format!(
                        "vertex {j} at depth {} has {} multiplicities, expected {prev}",
                        d + 1,
                        row.len()
                    )));
                }
                for (i, &x) in row.iter().enumerate() {
                    m[i][j] = x;
                }
            }
            depth_sizes.push(block.len());
            adjacency.push(m);
        }
        BipartiteGraph::new(depth_sizes, adjacency, None)
    }

    /// Grade an arbitrary connected bipartite multigraph by distance from `base`. Returns the graph
    /// and the (depth, index) of each input vertex.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize, u32)], base: usize) -> Result<(Self, Vec<Vertex>)> {
        if base >= num_vertices {
            return domain("basepoint out of range");
        }
        let mut nbrs = vec![Vec::new(); num_vertices];
        for &(u, v, m) in edges {
            if u >= num_vertices || v >= num_vertices || u == v {
                return domain(format!("bad edge ({u}, {v})"));
            }
            if m > 0 {
                nbrs[u].push(v);
                nbrs[v].push(u);
            }
        }
        let mut dist = vec![usize::MAX; num_vertices];
        dist[base] = 0;
        let mut queue = VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            for &v in &nbrs[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if dist.contains(&usize::MAX) {
            return domain("graph is not connected");
        }
        let max = *dist.iter().max().unwrap();
        let mut depth_sizes = vec![0; max + 1];
        let mut place = vec![(0, 0); num_vertices];
        for v in 0..num_vertices {
            place[v] = (dist[v], depth_sizes[dist[v]]);
            depth_sizes[dist[v]] += 1;
        }
        let mut adjacency: Vec<Vec<Vec<u32>>> =
            (0..max).map(|d| vec![vec![0; depth_sizes[d + 1]]; depth_sizes[d]]).collect();
        for &(u, v, m) in edges {
            let (a, b) = if dist[u] < dist[v] { (place[u], place[v]) } else { (place[v], place[u]) };
            if b.0 != a.0 + 1 {
                return domain(format!("edge ({u}, {v}) does not join consecutive depths"));
            }
            adjacency[a.0][a.1][b.1] += m;
        }
        Ok((BipartiteGraph::new(depth_sizes, adjacency, None)?, place))
    }

    /// The path A_m on m vertices, ⋆ at one end.
    pub fn path(m: usize) -> Self {
        assert!(m >= 1, "A_m needs at least one vertex");
        BipartiteGraph { depth_sizes: vec![1; m], adjacency: vec![vec![vec![1]]; m - 1], duals: None }
    }

    fn validate(&self) -> Result<()> {
        let ds = &self.depth_sizes;
        if ds.first() != Some(&1) {
            return Err(Error::Validation("depth 0 must hold exactly the basepoint".into()));
        }
        if ds.contains(&0) {
            return Err(Error::Validation("every listed depth needs a vertex".into()));
        }
        if self.adjacency.len() + 1 != ds.len() {
            return Err(Error::Validation("one multiplicity matrix per consecutive depth pair".into()));
        }
        for (d, m) in self.adjacency.iter().enumerate() {
            if m.len() != ds[d] || m.iter().any(|r| r.len() != ds[d + 1]) {
                return Err(Error::Validation(format!("matrix {d} has the wrong shape")));
            }
            for j in 0..ds[d + 1] {
                if m.iter().all(|r| r[j] == 0) {
                    return Err(Error::Validation(format!("vertex {j} at depth {} has no edge to depth {d}", d + 1)));
                }
            }
        }
        if let Some(duals) = &self.duals {
            let evens = self.max_depth() / 2 + 1;
            if duals.len() != evens {
                return Err(Error::Validation(format!(
                    "{} dual blocks given, {evens} even depths present",
                    duals.len()
                )));
            }
            for (i, p) in duals.iter().enumerate() {
                let n = ds[2 * i];
                if p.len() != n || p.iter().any(|&x| x >= n) {
                    return Err(Error::Validation(format!("dual block {i} is not a permutation")));
                }
                if (0..n).any(|x| p[p[x]] != x) {
                    return Err(Error::Validation(format!("dual block {i} is not an involution")));
                }
            }
        }
        Ok(())
    }

    pub fn depth_sizes(&self) -> &[usize] {
        &self.depth_sizes
    }

    pub fn adjacency(&self) -> &[Vec<Vec<u32>>] {
        &self.adjacency
    }

    pub fn duals(&self) -> Option<&[Vec<usize>]> {
        self.duals.as_deref()
    }

    pub fn with_duals(&self, duals: Vec<Vec<usize>>) -> Result<Self> {
        BipartiteGraph::new(self.depth_sizes.clone(), self.adjacency.clone(), Some(duals))
    }

    pub fn without_duals(&self) -> Self {
        BipartiteGraph { duals: None, ..self.clone() }
    }

    pub fn max_depth(&self) -> usize {
        self.depth_sizes.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.depth_sizes.iter().sum()
    }

    /// Edge count with multiplicity.
    pub fn num_edges(&self) -> u32 {
        self.adjacency.iter().flatten().flatten().sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.depth_sizes.iter().enumerate().flat_map(|(d, &n)| (0..n).map(move |i| (d, i)))
    }

    /// Position of a vertex in depth-major order.
    pub fn flat_index(&self, v: Vertex) -> usize {
        self.depth_sizes[..v.0].iter().sum::<usize>() + v.1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.0 < self.depth_sizes.len() && v.1 < self.depth_sizes[v.0]
    }

    /// Children with multiplicities.
    pub fn children(&self, v: Vertex) -> Vec<(usize, u32)> {
        match self.adjacency.get(v.0) {
            Some(m) => m[v.1].iter().enumerate().filter(|(_, &x)| x > 0).map(|(j, &x)| (j, x)).collect(),
            None => Vec::new(),
        }
    }

    /// Parents with multiplicities.
    pub fn parents(&self, v: Vertex) -> Vec<(usize, u32)> {
        if v.0 == 0 {
            return Vec::new();
        }
        self.adjacency[v.0 - 1].iter().enumerate().filter(|(_, r)| r[v.1] > 0).map(|(i, r)| (i, r[v.1])).collect()
    }

    pub fn has_descendants(&self, v: Vertex) -> bool {
        !self.children(v).is_empty()
    }

    /// Valence counting edge multiplicity.
    pub fn valence(&self, v: Vertex) -> u32 {
        self.children(v).iter().chain(self.parents(v).iter()).map(|&(_, m)| m).sum()
    }

    /// Number of distinct neighbours.
    pub fn simple_degree(&self, v: Vertex) -> usize {
        self.children(v).len() + self.parents(v).len()
    }

    /// Full symmetric adjacency matrix in depth-major vertex order.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.num_vertices();
        let mut a = vec![vec![0; n]; n];
        let mut off = 0;
        for (d, m) in self.adjacency.iter().enumerate() {
            let next = off + self.depth_sizes[d];
            for (i, row) in m.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    a[off + i][next + j] = x;
                    a[next + j][off + i] = x;
                }
            }
            off = next;
        }
        a
    }

    /// Sparse neighbour lists in depth-major order, with multiplicities.
    pub fn neighbour_lists(&self) -> Vec<Vec<(usize, u32)>> {
        let a = self.adjacency_matrix();
        a.iter().map(|r| r.iter().enumerate().filter(|(_, &x)| x > 0).map(|(j, &x)| (j, x)).collect()).collect()
    }

    pub fn is_path(&self) -> bool {
        self.depth_sizes.iter().all(|&s| s == 1) && self.adjacency.iter().all(|m| m[0][0] == 1)
    }

    /// Γ(k): vertices of depth ≤ k and the edges among them. Dual data beyond k is dropped.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k > self.max_depth() {
            return domain(format!("truncation depth {k} exceeds maximal depth {}", self.max_depth()));
        }
        Ok(BipartiteGraph {
            depth_sizes: self.depth_sizes[..=k].to_vec(),
            adjacency: self.adjacency[..k].to_vec(),
            duals: self.duals.as_ref().map(|d| d[..k / 2 + 1].to_vec()),
        })
    }

    /// Number of closed walks of length 2n from ⋆, counted with edge multiplicity.
    pub fn loop_count(&self, n: usize) -> BigUint {
        let nbrs = self.neighbour_lists();
        let mut v = vec![BigUint::zero(); nbrs.len()];
        v[0] = BigUint::one();
        for _ in 0..2 * n {
            let mut w = vec![BigUint::zero(); nbrs.len()];
            for (u, list) in nbrs.iter().enumerate() {
                if v[u].is_zero() {
                    continue;
                }
                for &(x, m) in list {
                    w[x] += &v[u] * m;
                }
            }
            v = w;
        }
        v.swap_remove(0)
    }

    /// Largest k such that Γ(k) is a path with k edges. A finite path reports its own length.
    pub fn supertransitivity(&self) -> usize {
        (1..=self.max_depth()).take_while(|&d| self.depth_sizes[d] == 1 && self.adjacency[d - 1][0][0] == 1).count()
    }

    /// Prepend a path of k edges, pushing every vertex k depths further from ⋆.
    pub fn translate(&self, k: usize) -> Result<Self> {
        if k % 2 == 1 {
            return domain(format!("translation by odd length {k} changes depth parity"));
        }
        let mut depth_sizes = vec![1; k];
        depth_sizes.extend_from_slice(&self.depth_sizes);
        let mut adjacency = vec![vec![vec![1]]; k];
        adjacency.extend(self.adjacency.iter().cloned());
        let duals = self.duals.as_ref().map(|d| {
            let mut out = vec![vec![0]; k / 2];
            out.extend(d.iter().cloned());
            out
        });
        Ok(BipartiteGraph { depth_sizes, adjacency, duals })
    }

    /// All graphs obtained by appending one depth of at most `max_new_vertices` vertices, each
    /// joined to the current last depth with multiplicities ≤ `max_multiplicity`, up to
    /// depth-preserving isomorphism. The unextended graph comes first. Dual data is kept when the
    /// new depth is odd and dropped when a new even depth appears, since its involution is
    /// unknown.
    pub fn extend_one_depth(&self, max_new_vertices: usize, max_multiplicity: u32) -> Vec<Self> {
        let base = self.canonical();
        let mut out = vec![base.clone()];
        if max_multiplicity == 0 || max_new_vertices == 0 {
            return out;
        }
        let f = *self.depth_sizes.last().unwrap();
        let rows: Vec<Vec<u32>> = (0..f)
            .map(|_| 0..=max_multiplicity)
            .multi_cartesian_product()
            .filter(|r| r.iter().any(|&x| x > 0))
            .collect();
        let mut seen = HashSet::new();
        seen.insert(base);
        let new_depth = self.depth_sizes.len();
        for size in 1..=max_new_vertices {
            for combo in (0..rows.len()).combinations_with_replacement(size) {
                let mut depth_sizes = self.depth_sizes.clone();
                depth_sizes.push(size);
                let mut adjacency = self.adjacency.clone();
                adjacency.push((0..f).map(|i| combo.iter().map(|&r| rows[r][i]).collect()).collect());
                let duals = if new_depth.is_multiple_of(2) { None } else { self.duals.clone() };
                let g = BipartiteGraph { depth_sizes, adjacency, duals }.canonical();
                if seen.insert(g.clone()) {
                    out.push(g);
                }
            }
        }
        out
    }

    /// Append a simple path of `length` edges at a vertex without descendants.
    pub fn attach_tail(&self, v: Vertex, length: usize) -> Result<Self> {
        if !self.contains(v) {
            return domain(format!("no vertex {v:?}"));
        }
        if self.has_descendants(v) {
            return domain(format!("vertex {v:?} has descendants; tails attach only at the frontier"));
        }
        if length == 0 {
            return Ok(self.clone());
        }
        let mut g = self.clone();
        let mut parent = v.1;
        let mut new_even = false;
        for step in 1..=length {
            let d = v.0 + step;
            if d == g.depth_sizes.len() {
                g.depth_sizes.push(0);
                g.adjacency.push(vec![Vec::new(); g.depth_sizes[d - 1]]);
            }
            let j = g.depth_sizes[d];
            g.depth_sizes[d] += 1;
            for (i, row) in g.adjacency[d - 1].iter_mut().enumerate() {
                row.push(u32::from(i == parent));
            }
            if d < g.adjacency.len() {
                g.adjacency[d].insert(j, vec![0; g.depth_sizes[d + 1]]);
            }
            new_even |= d.is_multiple_of(2);
            parent = j;
        }
        if new_even {
            g.duals = None;
        }
        g.validate()?;
        Ok(g)
    }

    /// Depth-preserving relabelling into canonical form: within each depth, vertices are ordered so
    /// that the concatenated rows (multiplicities to the previous depth) are lexicographically
    /// largest, ties broken by the smallest dual encoding.
    pub fn canonical(&self) -> Self {
        let order = self.canonical_order();
        self.relabel(&order)
    }

    /// Isomorphism over depth-preserving relabellings, ignoring dual data.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.depth_sizes == other.depth_sizes && self.without_duals().canonical() == other.without_duals().canonical()
    }

    fn row_of(&self, d: usize, j: usize, prev_order: &[usize]) -> Vec<u32> {
        prev_order.iter().map(|&i| self.adjacency[d - 1][i][j]).collect()
    }

    #[allow(clippy::single_range_in_vec_init)]
    fn canonical_order(&self) -> Vec<Vec<usize>> {
        let max = self.max_depth();
        let expand_last = self.duals.is_some();
        let mut cands: Vec<Vec<Vec<usize>>> = vec![vec![vec![0]]];
        for d in 1..=max {
            let mut best: Option<Vec<u32>> = None;
            let mut next: Vec<(Order, Vec<usize>, Vec<Vec<u32>>)> = Vec::new();
            for c in cands {
                let mut js: Vec<usize> = (0..self.depth_sizes[d]).collect();
                let rows: Vec<Vec<u32>> = js.iter().map(|&j| self.row_of(d, j, &c[d - 1])).collect();
                js.sort_by(|&a, &b| rows[b].cmp(&rows[a]).then(a.cmp(&b)));
                let sorted: Vec<Vec<u32>> = js.iter().map(|&j| rows[j].clone()).collect();
                let block: Vec<u32> = sorted.concat();
                match &best {
                    Some(b) if *b > block => continue,
                    Some(b) if *b < block => next.clear(),
                    _ => {}
                }
                best = Some(block);
                next.push((c, js, sorted));
            }
            cands = Vec::new();
            for (c, js, sorted) in next {
                let expand = d < max || expand_last;
                let groups: Vec<std::ops::Range<usize>> = if expand {
                    let mut gs = Vec::new();
                    let mut s = 0;
                    for e in 1..=js.len() {
                        if e == js.len() || sorted[e] != sorted[s] {
                            gs.push(s..e);
                            s = e;
                        }
                    }
                    gs
                } else {
                    vec![0..js.len()]
                };
                if !expand || groups.iter().all(|g| g.len() == 1) {
                    let mut c2 = c.clone();
                    c2.push(js);
                    cands.push(c2);
                    continue;
                }
                let per_group: Vec<Vec<Vec<usize>>> =
                    groups.iter().map(|g| js[g.clone()].iter().copied().permutations(g.len()).collect()).collect();
                for choice in per_group.iter().map(|v| v.iter()).multi_cartesian_product() {
                    let mut c2 = c.clone();
                    c2.push(choice.into_iter().flatten().copied().collect());
                    cands.push(c2);
                }
            }
        }
        match &self.duals {
            None => cands.swap_remove(0),
            Some(duals) => cands.into_iter().min_by_key(|c| conjugated_duals(duals, c)).expect("at least one ordering"),
        }
    }

    fn relabel(&self, order: &[Vec<usize>]) -> Self {
        let adjacency = (0..self.adjacency.len())
            .map(|d| {
                order[d].iter().map(|&i| order[d + 1].iter().map(|&j| self.adjacency[d][i][j]).collect()).collect()
            })
            .collect();
        let duals = self.duals.as_ref().map(|d| conjugated_duals(d, order));
        BipartiteGraph { depth_sizes: self.depth_sizes.clone(), adjacency, duals }
    }
}

/// Dual involutions expressed in a new vertex order (`order[d][new] = old`).
fn conjugated_duals(duals: &[Vec<usize>], order: &[Vec<usize>]) -> Vec<Vec<usize>> {
    duals
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ord = &order[2 * i];
            let mut inv = vec![0; ord.len()];
            for (new, &old) in ord.iter().enumerate() {
                inv[old] = new;
            }
            ord.iter().map(|&old| inv[p[old]]).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fork() -> BipartiteGraph {
        BipartiteGraph::from_rows(&[vec![vec![1]], vec![vec![1], vec![1]]]).unwrap()
    }

    #[test]
    fn validation_rejects_orphans_and_bad_duals() {
        let orphan = BipartiteGraph::new(vec![1, 1, 2], vec![vec![vec![1]], vec![vec![1, 0]]], None);
        assert!(matches!(orphan, Err(Error::Validation(_))));
        let g = fork();
        assert!(g.with_duals(vec![vec![0], vec![1, 0]]).is_ok());
        assert!(g.with_duals(vec![vec![0], vec![1, 1]]).is_err());
        assert!(g.with_duals(vec![vec![0]]).is_err());
    }

    #[test]
    fn truncate_path_and_identity() {
        let a5 = BipartiteGraph::path(5);
        assert_eq!(a5.truncate(2).unwrap(), BipartiteGraph::path(3));
        assert_eq!(a5.truncate(4).unwrap(), a5);
        assert!(a5.truncate(5).is_err());
    }

    #[test]
    fn loop_counts_by_hand() {
        let a3 = BipartiteGraph::path(3);
        assert_eq!(a3.loop_count(0), BigUint::one());
        assert_eq!(a3.loop_count(2), BigUint::from(2u32));
        // A double edge ⋆=v: walks of length 2n pick one of 2 edges at each step.
        let double = BipartiteGraph::from_rows(&[vec![vec![2]]]).unwrap();
        assert_eq!(double.loop_count(3), BigUint::from(64u32));
    }

    #[test]
    fn supertransitivity_and_translation() {
        assert_eq!(BipartiteGraph::path(5).supertransitivity(), 4);
        assert_eq!(fork().supertransitivity(), 1);
        let t = fork().translate(4).unwrap();
        assert_eq!(t.supertransitivity(), 5);
        assert_eq!(BipartiteGraph::path(3).translate(2).unwrap(), BipartiteGraph::path(5));
        assert_eq!(fork().translate(0).unwrap(), fork());
        assert!(fork().translate(3).is_err());
    }

    #[test]
    fn translate_shifts_duals() {
        let g = fork().with_duals(vec![vec![0], vec![1, 0]]).unwrap();
        let t = g.translate(2).unwrap();
        assert_eq!(t.duals().unwrap(), &[vec![0], vec![0], vec![1, 0]]);
    }

    #[test]
    fn extension_counts() {
        let a2 = BipartiteGraph::path(2);
        let e = a2.extend_one_depth(1, 1);
        assert_eq!(e, vec![a2.clone(), BipartiteGraph::path(3)]);
        assert_eq!(a2.extend_one_depth(2, 1).len(), 3);
        assert_eq!(a2.extend_one_depth(1, 2).len(), 3);
        // Fork frontier of 2 leaves, one new vertex, simple edges: attach to either leaf (isomorphic)
        // or to both.
        assert_eq!(fork().extend_one_depth(1, 1).len(), 3);
    }

    #[test]
    fn attach_tail_at_frontier_only() {
        let a2 = BipartiteGraph::path(2);
        assert_eq!(a2.attach_tail((1, 0), 3).unwrap(), BipartiteGraph::path(5));
        let g = fork().attach_tail((2, 0), 1).unwrap();
        assert_eq!(g.depth_sizes(), &[1, 1, 2, 1]);
        assert!(fork().attach_tail((1, 0), 1).is_err());
        // A leaf above the frontier gains a child at an existing depth.
        let h = fork().attach_tail((2, 1), 2).unwrap().attach_tail((2, 0), 1).unwrap();
        assert_eq!(h.depth_sizes(), &[1, 1, 2, 2, 1]);
        assert_eq!(h.num_edges(), 6);
    }

    #[test]
    fn canonical_form_is_relabelling_invariant() {
        // Two arms of different lengths listed in either order.
        let a = BipartiteGraph::from_rows(&[vec![vec![1]], vec![vec![1], vec![1]], vec![vec![1, 0]]]).unwrap();
        let b = BipartiteGraph::from_rows(&[vec![vec![1]], vec![vec![1], vec![1]], vec![vec![0, 1]]]).unwrap();
        assert_ne!(a, b);
        assert_eq!(a.canonical(), b.canonical());
        assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn from_edges_grades_by_distance() {
        // Star with three arms of length 2, based at the centre.
        let edges = [(0, 1, 1), (1, 2, 1), (0, 3, 1), (3, 4, 1), (0, 5, 1), (5, 6, 1)];
        let (g, place) = BipartiteGraph::from_edges(7, &edges, 0).unwrap();
        assert_eq!(g.depth_sizes(), &[1, 3, 3]);
        assert_eq!(place[4], (2, 1));
        let triangle = [(0, 1, 1), (1, 2, 1), (2, 0, 1)];
        assert!(BipartiteGraph::from_edges(3, &triangle, 0).is_err());
    }
}
