//! Temperley-Lieb diagrams and their linear combinations.
//!
//! A diagram lives in a rectangle with `bottom` points below and `top` points above. Boundary
//! positions run counterclockwise from the top-left corner: bottom points left to right take
//! positions `0..bottom`, then top points right to left. Gap `g` is the stretch of boundary just
//! before position `g`, so gap 0 is the left edge (both left corners) and gap `bottom` the right
//! edge. `multiply(a, b)` stacks `b` on top of `a`.

mod train;

pub use train::{factor_train, random_noncrossing, tree_lemma_holds, word_product, Factor, Train, TreeLemmaOutcome};

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::scalar::{quantum_integer_from_delta, Scalar};

/// A planar perfect matching on the boundary of a rectangle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TLDiagram {
    bottom: usize,
    top: usize,
    pairing: Vec<usize>,
    /// Shading of the region at the top-left corner; `true` for unshaded (+).
    shading: bool,
}

/// Whether an involution on `0..pairing.len()` is fixed-point free and non-crossing.
pub(crate) fn is_noncrossing_matching(pairing: &[usize]) -> bool {
    let n = pairing.len();
    let mut stack = Vec::new();
    for (i, &j) in pairing.iter().enumerate() {
        if j >= n || j == i || pairing[j] != i {
            return false;
        }
        if j > i {
            stack.push(i);
        } else if stack.pop() != Some(j) {
            return false;
        }
    }
    stack.is_empty()
}

/// Number of chords of `pairing` separating gap `a` from gap `b`.
pub(crate) fn gap_distance(pairing: &[usize], a: usize, b: usize) -> usize {
    let inside = |lo: usize, hi: usize, g: usize| lo < g && g <= hi;
    pairing.iter().enumerate().filter(|&(i, &j)| i < j && inside(i, j, a) != inside(i, j, b)).count()
}

impl TLDiagram {
    pub fn new(bottom: usize, top: usize, pairing: Vec<usize>, shading: bool) -> Result<Self> {
        if pairing.len() != bottom + top {
            return domain(format!("{} pairing entries for {} boundary points", pairing.len(), bottom + top));
        }
        if !is_noncrossing_matching(&pairing) {
            return Err(Error::Validation(format!("not a planar perfect matching: {pairing:?}")));
        }
        Ok(TLDiagram { bottom, top, pairing, shading })
    }

    pub fn identity(k: usize) -> Self {
        let pairing = (0..2 * k).map(|p| 2 * k - 1 - p).collect();
        TLDiagram { bottom: k, top: k, pairing, shading: true }
    }

    /// The unnormalised cap-cup joining strands i and i+1 (1-based).
    pub fn cap_cup(k: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= k {
            return domain(format!("cap-cup index {i} outside 1..{k}"));
        }
        let mut d = Self::identity(k);
        let (b0, b1) = (i - 1, i);
        let (t0, t1) = (d.pos_top(i - 1), d.pos_top(i));
        d.pairing[b0] = b1;
        d.pairing[b1] = b0;
        d.pairing[t0] = t1;
        d.pairing[t1] = t0;
        Ok(d)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn shading(&self) -> bool {
        self.shading
    }

    pub fn with_shading(mut self, shading: bool) -> Self {
        self.shading = shading;
        self
    }

    pub fn num_points(&self) -> usize {
        self.bottom + self.top
    }

    pub fn pos_bottom(&self, i: usize) -> usize {
        i
    }

    pub fn pos_top(&self, j: usize) -> usize {
        self.bottom + self.top - 1 - j
    }

    /// Number of strands joining bottom to top.
    pub fn through_strands(&self) -> usize {
        (0..self.bottom).filter(|&i| self.pairing[i] >= self.bottom).count()
    }

    /// Stacks `other` on top of `self`; returns the diagram and the number of closed loops.
    pub fn compose(&self, other: &TLDiagram) -> Result<(TLDiagram, u32)> {
        if self.top != other.bottom || self.shading != other.shading {
            return domain(format!(
                "cannot stack {}→{} ({}) under {}→{} ({})",
                self.bottom,
                self.top,
                sign(self.shading),
                other.bottom,
                other.top,
                sign(other.shading)
            ));
        }
        let na = self.num_points();
        let mut chord: Vec<usize> = self.pairing.clone();
        chord.extend(other.pairing.iter().map(|&p| p + na));
        let mut link = vec![None; na + other.num_points()];
        for j in 0..self.top {
            let (a, b) = (self.pos_top(j), na + other.pos_bottom(j));
            link[a] = Some(b);
            link[b] = Some(a);
        }
        let outer: Vec<usize> = (0..self.bottom).chain((other.bottom..other.num_points()).map(|p| p + na)).collect();
        let (pairing, loops) = trace(&chord, &link, &outer);
        Ok((TLDiagram { bottom: self.bottom, top: other.top, pairing, shading: self.shading }, loops))
    }

    /// Adds `m` vertical strands on the right.
    pub fn tensor_identity(&self, m: usize) -> TLDiagram {
        let (b, t) = (self.bottom + m, self.top + m);
        let map = |p: usize| if p < self.bottom { p } else { b + t - 1 - (self.bottom + self.top - 1 - p) };
        let mut pairing = vec![0; b + t];
        for (p, &q) in self.pairing.iter().enumerate() {
            pairing[map(p)] = map(q);
        }
        for j in 0..m {
            let (lo, hi) = (self.bottom + j, b + t - 1 - (self.top + j));
            pairing[lo] = hi;
            pairing[hi] = lo;
        }
        TLDiagram { bottom: b, top: t, pairing, shading: self.shading }
    }

    /// Adds `m` vertical strands on the left; an odd number flips the shading.
    pub fn tensor_identity_left(&self, m: usize) -> TLDiagram {
        let (b, t) = (self.bottom + m, self.top + m);
        let map = |p: usize| p + m;
        let mut pairing = vec![0; b + t];
        for (p, &q) in self.pairing.iter().enumerate() {
            pairing[map(p)] = map(q);
        }
        for j in 0..m {
            let (lo, hi) = (j, b + t - 1 - j);
            pairing[lo] = hi;
            pairing[hi] = lo;
        }
        TLDiagram { bottom: b, top: t, pairing, shading: self.shading ^ (m % 2 == 1) }
    }

    /// One-click rotation: position p moves to p+1 and the shading flips.
    pub fn rotate(&self) -> Result<TLDiagram> {
        if self.bottom != self.top {
            return domain("rotation needs equal top and bottom arity");
        }
        let n = self.num_points();
        let mut pairing = vec![0; n];
        for (p, &q) in self.pairing.iter().enumerate() {
            pairing[(p + 1) % n] = (q + 1) % n;
        }
        Ok(TLDiagram { pairing, shading: !self.shading, ..*self })
    }

    /// Closes the rightmost strand; returns the diagram and the loops formed.
    pub fn close_right(&self) -> Result<(TLDiagram, u32)> {
        if self.bottom != self.top || self.bottom == 0 {
            return domain("partial trace needs equal arity at least 1");
        }
        let k = self.bottom;
        let mut link = vec![None; self.num_points()];
        let (b, t) = (self.pos_bottom(k - 1), self.pos_top(k - 1));
        link[b] = Some(t);
        link[t] = Some(b);
        let outer: Vec<usize> = (0..self.num_points()).filter(|&p| p != b && p != t).collect();
        let (pairing, loops) = trace(&self.pairing, &link, &outer);
        Ok((TLDiagram { bottom: k - 1, top: k - 1, pairing, shading: self.shading }, loops))
    }

    /// Loops formed by joining top i to bottom i for every i.
    pub fn closure_loops(&self) -> Result<u32> {
        if self.bottom != self.top {
            return domain("closure needs equal top and bottom arity");
        }
        let mut link = vec![None; self.num_points()];
        for i in 0..self.bottom {
            let (b, t) = (self.pos_bottom(i), self.pos_top(i));
            link[b] = Some(t);
            link[t] = Some(b);
        }
        Ok(trace(&self.pairing, &link, &[]).1)
    }

    /// Crossing distance between two boundary gaps in the dual tree.
    pub fn dual_tree_distance(&self, x: usize, y: usize) -> Result<usize> {
        let n = self.num_points().max(1);
        if x >= n || y >= n {
            return domain(format!("gap markers must lie in 0..{n}, got {x} and {y}"));
        }
        Ok(gap_distance(&self.pairing, x, y))
    }
}

fn sign(shading: bool) -> char {
    if shading {
        '+'
    } else {
        '-'
    }
}

/// Follows strands through planar pieces glued along `link`. `chord` pairs points within each
/// piece, `link` identifies glued points, and `outer` lists the free points in output order.
/// Returns the induced matching on `outer` and the number of closed loops.
pub(crate) fn trace(chord: &[usize], link: &[Option<usize>], outer: &[usize]) -> (Vec<usize>, u32) {
    let mut slot = vec![usize::MAX; chord.len()];
    for (i, &o) in outer.iter().enumerate() {
        debug_assert!(link[o].is_none(), "outer point {o} is glued");
        slot[o] = i;
    }
    let mut seen = vec![false; chord.len()];
    let mut pairing = vec![usize::MAX; outer.len()];
    for (i, &o) in outer.iter().enumerate() {
        if seen[o] {
            continue;
        }
        seen[o] = true;
        let mut cur = chord[o];
        loop {
            seen[cur] = true;
            match link[cur] {
                Some(l) => {
                    seen[l] = true;
                    cur = chord[l];
                }
                None => break,
            }
        }
        assert!(slot[cur] != usize::MAX, "strand ends at unglued inner point {cur}");
        pairing[i] = slot[cur];
        pairing[slot[cur]] = i;
    }
    let mut loops = 0;
    for s in 0..chord.len() {
        if seen[s] {
            continue;
        }
        let mut cur = s;
        loop {
            seen[cur] = true;
            let next = chord[cur];
            seen[next] = true;
            cur = link[next].expect("inner point without a gluing");
            if cur == s {
                break;
            }
        }
        loops += 1;
    }
    (pairing, loops)
}

/// All planar pairings with k points below and k above; there are Catalan(k) of them.
pub fn enumerate_diagrams(k: usize) -> Vec<TLDiagram> {
    fn matchings(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
        if lo >= hi {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for j in (lo + 1..hi).step_by(2) {
            let inside = matchings(lo + 1, j);
            for rest in matchings(j + 1, hi) {
                for a in &inside {
                    let mut m = vec![(lo, j)];
                    m.extend(a);
                    m.extend(&rest);
                    out.push(m);
                }
            }
        }
        out
    }
    matchings(0, 2 * k)
        .into_iter()
        .map(|m| {
            let mut pairing = vec![0; 2 * k];
            for (a, b) in m {
                pairing[a] = b;
                pairing[b] = a;
            }
            TLDiagram { bottom: k, top: k, pairing, shading: true }
        })
        .collect()
}

/// A linear combination of diagrams of one shape, over a scalar ring with loop value δ.
#[derive(Clone, Debug, PartialEq)]
pub struct TLElement<S: Scalar> {
    bottom: usize,
    top: usize,
    shading: bool,
    delta: S,
    terms: BTreeMap<TLDiagram, S>,
}

impl<S: Scalar> TLElement<S> {
    pub fn zero(bottom: usize, top: usize, shading: bool, delta: S) -> Self {
        TLElement { bottom, top, shading, delta, terms: BTreeMap::new() }
    }

    pub fn from_diagram(d: TLDiagram, delta: S) -> Self {
        let mut x = Self::zero(d.bottom, d.top, d.shading, delta);
        x.terms.insert(d, S::one());
        x
    }

    pub fn identity(k: usize, delta: S) -> Self {
        Self::from_diagram(TLDiagram::identity(k), delta)
    }

    /// Unnormalised cap-cup U_i.
    pub fn cap_cup(k: usize, i: usize, delta: S) -> Result<Self> {
        Ok(Self::from_diagram(TLDiagram::cap_cup(k, i)?, delta))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn shading(&self) -> bool {
        self.shading
    }

    pub fn delta(&self) -> &S {
        &self.delta
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TLDiagram, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, d: &TLDiagram) -> S {
        self.terms.get(d).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, d: TLDiagram, c: S) {
        debug_assert_eq!((d.bottom, d.top, d.shading), (self.bottom, self.top, self.shading));
        let entry = self.terms.entry(d.clone()).or_insert_with(S::zero);
        *entry = entry.sum(&c);
        if entry.is_zero() {
            self.terms.remove(&d);
        }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if (self.bottom, self.top, self.shading) != (other.bottom, other.top, other.shading) {
            return domain("elements of different shapes");
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&S::from_int(-1)))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.bottom, self.top, self.shading, self.delta.clone());
        for (d, x) in &self.terms {
            out.add_term(d.clone(), x.prod(c));
        }
        out
    }

    pub fn with_shading(&self, shading: bool) -> Self {
        let mut out = Self::zero(self.bottom, self.top, shading, self.delta.clone());
        for (d, c) in &self.terms {
            out.add_term(d.clone().with_shading(shading), c.clone());
        }
        out
    }

    pub fn tensor_identity_left(&self, m: usize) -> Self {
        let mut out = Self::zero(self.bottom + m, self.top + m, self.shading ^ (m % 2 == 1), self.delta.clone());
        for (d, c) in &self.terms {
            out.add_term(d.tensor_identity_left(m), c.clone());
        }
        out
    }

    pub fn tensor_identity(&self, m: usize) -> Self {
        let mut out = Self::zero(self.bottom + m, self.top + m, self.shading, self.delta.clone());
        for (d, c) in &self.terms {
            out.add_term(d.tensor_identity(m), c.clone());
        }
        out
    }
}

/// Stacks `b` on top of `a`; closed loops contribute δ each.
pub fn multiply<S: Scalar>(a: &TLElement<S>, b: &TLElement<S>) -> Result<TLElement<S>> {
    if a.top != b.bottom || a.shading != b.shading {
        return domain(format!("cannot stack {}→{} under {}→{}", a.bottom, a.top, b.bottom, b.top));
    }
    let mut out = TLElement::zero(a.bottom, b.top, a.shading, a.delta.clone());
    for (da, ca) in &a.terms {
        for (db, cb) in &b.terms {
            let (d, loops) = da.compose(db)?;
            out.add_term(d, ca.prod(cb).prod(&a.delta.powu(loops)));
        }
    }
    Ok(out)
}

/// e_i = δ^{-1} U_i in TL_k.
pub fn jones_projection<S: Scalar>(k: usize, i: usize, delta: &S) -> Result<TLElement<S>> {
    let inv = delta.recip().ok_or_else(|| Error::Pole("δ = 0".into()))?;
    Ok(TLElement::cap_cup(k, i, delta.clone())?.scale(&inv))
}

/// f^{(k)} by the Wenzl recursion f^{(k)} = f^{(k−1)} − ([k−1]/[k]) f^{(k−1)} U_{k−1} f^{(k−1)}.
pub fn jones_wenzl<S: Scalar>(k: usize, delta: &S) -> Result<TLElement<S>> {
    let mut f = TLElement::identity(k.min(1), delta.clone());
    for j in 2..=k {
        let prev = f.tensor_identity(1);
        let num = quantum_integer_from_delta(j as u32 - 1, delta);
        let den = quantum_integer_from_delta(j as u32, delta);
        let ratio = den.recip().ok_or_else(|| Error::Pole(format!("[{j}] = 0 at this δ")))?.prod(&num);
        let u = TLElement::cap_cup(j, j - 1, delta.clone())?;
        let sandwich = multiply(&multiply(&prev, &u)?, &prev)?;
        f = prev.sub(&sandwich.scale(&ratio))?;
    }
    Ok(f)
}

/// Partial trace closing the rightmost strand, unnormalised: E(1_k) = δ·1_{k−1}.
pub fn conditional_expectation<S: Scalar>(x: &TLElement<S>) -> Result<TLElement<S>> {
    if x.bottom != x.top || x.bottom == 0 {
        return domain("conditional expectation needs equal arity at least 1");
    }
    let mut out = TLElement::zero(x.bottom - 1, x.top - 1, x.shading, x.delta.clone());
    for (d, c) in &x.terms {
        let (e, loops) = d.close_right()?;
        out.add_term(e, c.prod(&x.delta.powu(loops)));
    }
    Ok(out)
}

pub fn rotate<S: Scalar>(x: &TLElement<S>) -> Result<TLElement<S>> {
    if x.bottom != x.top {
        return domain("rotation needs equal top and bottom arity");
    }
    let mut out = TLElement::zero(x.bottom, x.top, !x.shading, x.delta.clone());
    for (d, c) in &x.terms {
        out.add_term(d.rotate()?, c.clone());
    }
    Ok(out)
}

/// Σ coefficient · δ^{loops} after joining top i to bottom i around the right.
pub fn trace_close<S: Scalar>(x: &TLElement<S>) -> Result<S> {
    let mut total = S::zero();
    for (d, c) in &x.terms {
        total = total.sum(&c.prod(&x.delta.powu(d.closure_loops()?)));
    }
    Ok(total)
}

/// A random element of TL_k with integer coefficients in `-range..=range` on every diagram.
pub fn random_element<S: Scalar, R: Rng>(k: usize, delta: &S, range: i64, rng: &mut R) -> TLElement<S> {
    let mut x = TLElement::zero(k, k, true, delta.clone());
    for d in enumerate_diagrams(k) {
        x.add_term(d, S::from_int(rng.gen_range(-range..=range)));
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_core::BipartiteGraph;
    use crate::poly::RatFunc;
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn catalan(k: usize) -> usize {
        let mut c = vec![1usize];
        for m in 1..=k {
            c.push((0..m).map(|i| c[i] * c[m - 1 - i]).sum());
        }
        c[k]
    }

    #[test]
    fn diagram_counts() {
        assert_eq!(enumerate_diagrams(0).len(), 1);
        assert_eq!(enumerate_diagrams(2).len(), 2);
        for k in 0..=8 {
            let ds = enumerate_diagrams(k);
            assert_eq!(ds.len(), catalan(k));
            assert!(ds.iter().all(|d| is_noncrossing_matching(d.pairing())));
            let path = BipartiteGraph::path(2 * k + 3);
            assert_eq!(path.loop_count(k), BigUint::from(ds.len()));
        }
    }

    #[test]
    fn cap_cup_squares_to_delta() {
        let d = RatFunc::delta();
        let u = TLElement::cap_cup(2, 1, d.clone()).unwrap();
        assert_eq!(multiply(&u, &u).unwrap(), u.scale(&d));
        let e = jones_projection(2, 1, &d).unwrap();
        assert_eq!(multiply(&e, &e).unwrap(), e);
    }

    #[test]
    fn jones_projection_relations() {
        let d = RatFunc::delta();
        let e = |i| jones_projection(4, i, &d).unwrap();
        let d2 = d.pow(2).inv().unwrap();
        for i in 1..3 {
            let lhs = multiply(&multiply(&e(i), &e(i + 1)).unwrap(), &e(i)).unwrap();
            assert_eq!(lhs, e(i).scale(&d2));
            let lhs = multiply(&multiply(&e(i + 1), &e(i)).unwrap(), &e(i + 1)).unwrap();
            assert_eq!(lhs, e(i + 1).scale(&d2));
        }
        assert_eq!(multiply(&e(1), &e(3)).unwrap(), multiply(&e(3), &e(1)).unwrap());
        assert!(jones_projection(4, 4, &d).is_err());
    }

    #[test]
    fn jones_wenzl_small() {
        let d = RatFunc::delta();
        assert_eq!(jones_wenzl(1, &d).unwrap(), TLElement::identity(1, d.clone()));
        let f2 = jones_wenzl(2, &d).unwrap();
        let expect = TLElement::identity(2, d.clone())
            .sub(&TLElement::cap_cup(2, 1, d.clone()).unwrap().scale(&d.inv().unwrap()))
            .unwrap();
        assert_eq!(f2, expect);
        for k in 1..=5u32 {
            let f = jones_wenzl(k as usize, &d).unwrap();
            assert_eq!(trace_close(&f).unwrap(), RatFunc::quantum_integer(k + 1));
        }
        assert!(matches!(jones_wenzl(3, &1.0f64), Err(Error::Pole(_))));
    }

    #[test]
    fn expectation_examples() {
        let d = RatFunc::delta();
        let id = TLElement::identity(3, d.clone());
        assert_eq!(conditional_expectation(&id).unwrap(), TLElement::identity(2, d.clone()).scale(&d));
        let u = TLElement::cap_cup(3, 2, d.clone()).unwrap();
        assert_eq!(conditional_expectation(&u).unwrap(), TLElement::identity(2, d.clone()));
    }

    #[test]
    fn trace_examples() {
        let d = RatFunc::delta();
        assert_eq!(trace_close(&TLElement::identity(3, d.clone())).unwrap(), d.pow(3));
        assert_eq!(trace_close(&jones_projection(2, 1, &d).unwrap()).unwrap(), RatFunc::one());
    }

    #[test]
    fn rotation_is_a_bijection_of_period_2k() {
        for k in 1..=4 {
            let ds = enumerate_diagrams(k);
            let mut rotated: Vec<TLDiagram> = ds.iter().map(|d| d.rotate().unwrap().with_shading(true)).collect();
            rotated.sort();
            let mut sorted = ds.clone();
            sorted.sort();
            assert_eq!(rotated, sorted);
            for d in &ds {
                let mut r = d.clone();
                for _ in 0..2 * k {
                    r = r.rotate().unwrap();
                }
                assert_eq!(&r, d);
            }
        }
    }

    #[test]
    fn dual_tree_distances_on_identity() {
        let id = TLDiagram::identity(4);
        assert_eq!(id.dual_tree_distance(0, 0).unwrap(), 0);
        assert_eq!(id.dual_tree_distance(0, 4).unwrap(), 4);
        assert_eq!(id.dual_tree_distance(2, 6).unwrap(), 0);
        assert!(id.dual_tree_distance(0, 8).is_err());
    }

    #[test]
    fn random_elements_associate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = RatFunc::delta();
        for _ in 0..3 {
            let (a, b, c) = (
                random_element(4, &d, 3, &mut rng),
                random_element(4, &d, 3, &mut rng),
                random_element(4, &d, 3, &mut rng),
            );
            let l = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
            let r = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }
}
