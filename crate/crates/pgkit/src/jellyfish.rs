//! The two-step jellyfish evaluation of closed labelled diagrams: pull every generator to the
//! outer region with jellyfish relations, then reduce the closed trains with the structure
//! algebra and capping data.
//!
//! Generator systems here are instantiated inside Temperley-Lieb, so every table comes from a
//! linear solve over the diagram basis and every answer has a direct TL oracle.
//!
//! A [`TrainWord`] is a train whose cars may still sit under strands. Positions follow the train
//! convention of [`crate::tl_algebra::Train`]: the legs of every car block (cars listed top to
//! bottom), then the bottom points, then the top points right to left. A car with `wraps = w`
//! has content `id_w ⊗ S` in a box of 2(n+w) legs, so its w outermost strands pass between S and
//! the outer region. Leg j of a block meets position 2m−1−j of the car box.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;
use crate::tl_algebra::{
    enumerate_diagrams, jones_wenzl, multiply, random_noncrossing, rotate, trace, trace_close, TLDiagram, TLElement,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Car {
    pub label: String,
    pub wraps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrainWord {
    n: usize,
    bottom: usize,
    top: usize,
    /// Shading of the outer region; `true` for unshaded (+).
    shading: bool,
    cars: Vec<Car>,
    pairing: Vec<usize>,
}

/// A linear combination of train words with like terms merged.
pub type TrainSum<S> = BTreeMap<TrainWord, S>;

fn add_into<S: Scalar>(sum: &mut TrainSum<S>, w: TrainWord, c: S) {
    if c.is_zero() {
        return;
    }
    let entry = sum.entry(w.clone()).or_insert_with(S::zero);
    *entry = entry.sum(&c);
    if entry.is_zero() {
        sum.remove(&w);
    }
}

fn is_noncrossing(pairing: &[usize]) -> bool {
    let mut stack = Vec::new();
    for (i, &j) in pairing.iter().enumerate() {
        if j >= pairing.len() || j == i || pairing[j] != i {
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

impl TrainWord {
    pub fn new(
        n: usize,
        bottom: usize,
        top: usize,
        shading: bool,
        cars: Vec<Car>,
        pairing: Vec<usize>,
    ) -> Result<Self> {
        if n == 0 {
            return domain("cars need at least one strand");
        }
        let legs: usize = cars.iter().map(|c| 2 * (n + c.wraps)).sum();
        if pairing.len() != legs + bottom + top {
            return domain(format!(
                "{} pairing entries for {legs} legs and {bottom}+{top} boundary points",
                pairing.len()
            ));
        }
        if !is_noncrossing(&pairing) {
            return Err(Error::Validation(format!("train word is not planar: {pairing:?}")));
        }
        Ok(TrainWord { n, bottom, top, shading, cars, pairing })
    }

    /// The 1-car train that is just the generator.
    pub fn generator(n: usize, label: &str, side: bool) -> Self {
        let mut pairing = vec![0; 4 * n];
        for j in 0..2 * n {
            pairing[2 * n - 1 - j] = 2 * n + j;
            pairing[2 * n + j] = 2 * n - 1 - j;
        }
        TrainWord { n, bottom: n, top: n, shading: side, cars: vec![Car { label: label.into(), wraps: 0 }], pairing }
    }

    pub fn from_diagram(n: usize, d: &TLDiagram) -> Self {
        TrainWord {
            n,
            bottom: d.bottom(),
            top: d.top(),
            shading: d.shading(),
            cars: Vec::new(),
            pairing: d.pairing().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn cars(&self) -> &[Car] {
        &self.cars
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn is_closed(&self) -> bool {
        self.bottom == 0 && self.top == 0
    }

    /// Every car faces the outer region.
    pub fn is_train(&self) -> bool {
        self.cars.iter().all(|c| c.wraps == 0)
    }

    fn block_len(&self, b: usize) -> usize {
        2 * (self.n + self.cars[b].wraps)
    }

    fn block_start(&self, b: usize) -> usize {
        (0..b).map(|i| self.block_len(i)).sum()
    }

    fn legs(&self) -> usize {
        self.block_start(self.cars.len())
    }

    fn pos_top(&self, j: usize) -> usize {
        self.pairing.len() - 1 - j
    }

    /// Stacks `other` on top of `self`; returns the word and the closed loops.
    fn stack(&self, other: &TrainWord) -> Result<(TrainWord, u32)> {
        if self.top != other.bottom || self.shading != other.shading {
            return domain(format!("cannot stack {}→{} under {}→{}", self.bottom, self.top, other.bottom, other.top));
        }
        let na = self.pairing.len();
        let mut chord = self.pairing.clone();
        chord.extend(other.pairing.iter().map(|&p| p + na));
        let mut link = vec![None; chord.len()];
        let lb = other.legs();
        for j in 0..self.top {
            let (a, b) = (self.pos_top(j), na + lb + j);
            link[a] = Some(b);
            link[b] = Some(a);
        }
        let la = self.legs();
        let outer: Vec<usize> =
            (na..na + lb).chain(0..la + self.bottom).chain(na + lb + other.bottom..chord.len()).collect();
        let (pairing, loops) = trace(&chord, &link, &outer);
        let mut cars = other.cars.clone();
        cars.extend(self.cars.iter().cloned());
        Ok((TrainWord { n: self.n, bottom: self.bottom, top: other.top, shading: self.shading, cars, pairing }, loops))
    }

    /// Joins top points i and i+1.
    fn cap_top(&self, i: usize) -> Result<(TrainWord, u32)> {
        if i + 1 >= self.top {
            return domain(format!("cap at {i} needs at least {} top points, have {}", i + 2, self.top));
        }
        let mut link = vec![None; self.pairing.len()];
        let (a, b) = (self.pos_top(i), self.pos_top(i + 1));
        link[a] = Some(b);
        link[b] = Some(a);
        let outer: Vec<usize> = (0..self.pairing.len()).filter(|&p| p != a && p != b).collect();
        let (pairing, loops) = trace(&self.pairing, &link, &outer);
        Ok((TrainWord { top: self.top - 2, pairing, cars: self.cars.clone(), ..*self }, loops))
    }

    /// Joins top i to bottom i around the right side.
    fn close(&self) -> Result<(TrainWord, u32)> {
        if self.bottom != self.top {
            return domain(format!("closure needs equal arity, have {}→{}", self.bottom, self.top));
        }
        let legs = self.legs();
        let mut link = vec![None; self.pairing.len()];
        for i in 0..self.bottom {
            let (a, b) = (legs + i, self.pos_top(i));
            link[a] = Some(b);
            link[b] = Some(a);
        }
        let outer: Vec<usize> = (0..legs).collect();
        let (pairing, loops) = trace(&self.pairing, &link, &outer);
        Ok((TrainWord { bottom: 0, top: 0, pairing, cars: self.cars.clone(), ..*self }, loops))
    }

    /// Positions of the grown word after every car gains one wrap: old leg j of block b moves to
    /// leg j+1, and the new outer points start after the grown legs.
    fn grown_layout(&self) -> (Vec<usize>, Vec<Car>, usize) {
        let cars: Vec<Car> = self.cars.iter().map(|c| Car { label: c.label.clone(), wraps: c.wraps + 1 }).collect();
        let mut starts = Vec::new();
        let mut s = 0;
        for c in &cars {
            starts.push(s);
            s += 2 * (self.n + c.wraps);
        }
        (starts, cars, s)
    }

    /// One-click rotation: top 0 moves down the left side, past every car, to become bottom 0.
    fn rotate(&self) -> Result<TrainWord> {
        if self.bottom != self.top || self.bottom == 0 {
            return domain("rotation needs equal arity at least 1");
        }
        let (starts, cars, legs2) = self.grown_layout();
        let legs = self.legs();
        let outer_len = self.bottom + self.top;
        let map = |p: usize| -> usize {
            if p < legs {
                let b = (0..self.cars.len()).rev().find(|&b| self.block_start(b) <= p).unwrap();
                starts[b] + (p - self.block_start(b)) + 1
            } else {
                legs2 + (p - legs + 1) % outer_len
            }
        };
        let old_top0 = self.pos_top(0);
        let partner = self.pairing[old_top0];
        let mut pairing = vec![usize::MAX; legs2 + outer_len];
        for (p, &q) in self.pairing.iter().enumerate() {
            if p != old_top0 && q != old_top0 {
                pairing[map(p)] = map(q);
            }
        }
        // New bottom 0 runs up through the outermost strand of every car, bottom car first.
        let mut chain = vec![legs2];
        for b in (0..cars.len()).rev() {
            let len = 2 * (self.n + cars[b].wraps);
            chain.push(starts[b] + len - 1);
            chain.push(starts[b]);
        }
        chain.push(map(partner));
        for pair in chain.chunks(2) {
            pairing[pair[0]] = pair[1];
            pairing[pair[1]] = pair[0];
        }
        TrainWord::new(self.n, self.bottom, self.top, !self.shading, cars, pairing)
    }

    /// `| ⊗ self`: a new strand on the left, passing outside every car.
    fn wrap_left(&self) -> TrainWord {
        let (starts, cars, legs2) = self.grown_layout();
        let legs = self.legs();
        let outer_len = self.bottom + self.top + 2;
        let map = |p: usize| -> usize {
            if p < legs {
                let b = (0..self.cars.len()).rev().find(|&b| self.block_start(b) <= p).unwrap();
                starts[b] + (p - self.block_start(b)) + 1
            } else {
                legs2 + (p - legs) + 1
            }
        };
        let mut pairing = vec![usize::MAX; legs2 + outer_len];
        for (p, &q) in self.pairing.iter().enumerate() {
            pairing[map(p)] = map(q);
        }
        let mut chain = vec![legs2 + outer_len - 1];
        for (b, c) in cars.iter().enumerate() {
            chain.push(starts[b]);
            chain.push(starts[b] + 2 * (self.n + c.wraps) - 1);
        }
        chain.push(legs2);
        for pair in chain.chunks(2) {
            pairing[pair[0]] = pair[1];
            pairing[pair[1]] = pair[0];
        }
        debug_assert!(is_noncrossing(&pairing));
        TrainWord { n: self.n, bottom: self.bottom + 1, top: self.top + 1, shading: !self.shading, cars, pairing }
    }

    /// Moves the last car block to the front. Only meaningful for closed words.
    fn cycle_last_to_front(&self) -> TrainWord {
        let l = self.pairing.len();
        let len = self.block_len(self.cars.len() - 1);
        let map = |p: usize| (p + len) % l;
        let mut pairing = vec![0; l];
        for (p, &q) in self.pairing.iter().enumerate() {
            pairing[map(p)] = map(q);
        }
        let mut cars = self.cars.clone();
        cars.rotate_right(1);
        TrainWord { pairing, cars, ..*self }
    }
}

/// Removes positions that are paired among themselves and renumbers the rest.
fn remove_positions(pairing: &[usize], removed: &BTreeSet<usize>) -> Vec<usize> {
    debug_assert!(removed.iter().all(|p| removed.contains(&pairing[*p])));
    let mut new_index = vec![usize::MAX; pairing.len()];
    let mut next = 0;
    for (p, slot) in new_index.iter_mut().enumerate() {
        if !removed.contains(&p) {
            *slot = next;
            next += 1;
        }
    }
    (0..pairing.len()).filter(|p| !removed.contains(p)).map(|p| new_index[pairing[p]]).collect()
}

/// Replaces positions `start..start+len` of `pairing` by the free points of `inner`, whose last
/// `len` points are glued on in reverse (position start+j meets inner point len−1−j).
fn splice_raw(pairing: &[usize], start: usize, len: usize, inner: &[usize], inner_free: usize) -> (Vec<usize>, u32) {
    debug_assert_eq!(inner.len(), inner_free + len);
    let n = pairing.len();
    let mut chord = pairing.to_vec();
    chord.extend(inner.iter().map(|&p| p + n));
    let mut link = vec![None; chord.len()];
    for j in 0..len {
        let (a, b) = (start + j, n + inner_free + (len - 1 - j));
        link[a] = Some(b);
        link[b] = Some(a);
    }
    let outer: Vec<usize> = (0..start).chain(n..n + inner_free).chain(start + len..n).collect();
    trace(&chord, &link, &outer)
}

/// Glues `inner` into car block `b` of `outer`, replacing that car by the cars of `inner`.
fn splice(outer: &TrainWord, b: usize, inner: &TrainWord) -> (TrainWord, u32) {
    let (start, len) = (outer.block_start(b), outer.block_len(b));
    let (pairing, loops) = splice_raw(&outer.pairing, start, len, &inner.pairing, inner.legs());
    let mut cars = outer.cars[..b].to_vec();
    cars.extend(inner.cars.iter().cloned());
    cars.extend(outer.cars[b + 1..].iter().cloned());
    (TrainWord { pairing, cars, ..*outer }, loops)
}

/// Expands `x` at a slot `start..start+len` of a word whose cars are `cars`, one term per diagram.
#[allow(clippy::too_many_arguments)]
fn splice_element<S: Scalar>(
    template: &TrainWord,
    pairing: &[usize],
    cars: Vec<Car>,
    start: usize,
    len: usize,
    x: &TLElement<S>,
    delta: &S,
    coeff: &S,
    out: &mut TrainSum<S>,
) {
    for (d, c) in x.terms() {
        let (p, loops) = splice_raw(pairing, start, len, d.pairing(), 0);
        let w = TrainWord { pairing: p, cars: cars.clone(), ..*template };
        add_into(out, w, coeff.prod(c).prod(&delta.powu(loops)));
    }
}

/// An element of the structure algebra basis on one side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    Gen(String),
    /// The Jones-Wenzl idempotent f^(n).
    Jw,
}

/// Which jellyfish relations to derive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JellyfishKind {
    OneStrand,
    TwoStrand,
    Both,
}

impl JellyfishKind {
    fn one(self) -> bool {
        self != JellyfishKind::TwoStrand
    }

    fn two(self) -> bool {
        self != JellyfishKind::OneStrand
    }
}

/// Generator data for the jellyfish algorithm, instantiated inside TL_n.
#[derive(Clone, Debug)]
pub struct GeneratorSystem<S: Scalar> {
    n: usize,
    delta: S,
    sides: BTreeMap<String, bool>,
    elements: BTreeMap<String, TLElement<S>>,
    jw: [TLElement<S>; 2],
    mult_table: BTreeMap<(bool, Basis, Basis), Vec<(Basis, S)>>,
    traces: BTreeMap<String, Vec<S>>,
    cap_table: BTreeMap<(String, usize), TLElement<S>>,
    rot_table: BTreeMap<String, Vec<(TrainWord, S)>>,
    one_strand: BTreeMap<String, Vec<(TrainWord, S)>>,
    two_strand: BTreeMap<String, Vec<(TrainWord, S)>>,
}

/// Solves Σ x_c·columns[c] = target over the diagram basis by Gauss-Jordan elimination. Earlier
/// columns are preferred as pivots and free variables are set to zero. `None` if inconsistent.
fn solve<S: Scalar>(columns: &[TLElement<S>], target: &TLElement<S>) -> Option<Vec<S>> {
    let rows: Vec<TLDiagram> = columns
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|c| c.terms().map(|(d, _)| d.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&TLDiagram, usize> = rows.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let nc = columns.len();
    let mut m = vec![vec![S::zero(); nc + 1]; rows.len()];
    for (c, col) in columns.iter().enumerate() {
        for (d, x) in col.terms() {
            m[index[d]][c] = x.clone();
        }
    }
    for (d, x) in target.terms() {
        m[index[d]][nc] = x.clone();
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..nc {
        let best = (rank..rows.len()).filter(|&r| !m[r][c].is_zero()).max_by(|&a, &b| {
            m[a][c].approx().abs().partial_cmp(&m[b][c].approx().abs()).unwrap_or(std::cmp::Ordering::Equal)
        });
        let Some(p) = best else { continue };
        m.swap(p, rank);
        let inv = m[rank][c].recip()?;
        for x in m[rank][c..].iter_mut() {
            *x = x.prod(&inv);
        }
        for r in 0..rows.len() {
            if r == rank || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            #[allow(clippy::needless_range_loop)]
            for k in c..=nc {
                let sub = f.prod(&m[rank][k]);
                m[r][k] = m[r][k].diff(&sub);
            }
        }
        pivots.push((rank, c));
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    if m[rank..].iter().any(|row| !row[nc].is_zero()) {
        return None;
    }
    let mut x = vec![S::zero(); nc];
    for (r, c) in pivots {
        x[c] = m[r][nc].clone();
    }
    Some(x)
}

/// The TL value of a word, gluing `id_w ⊗ S` into every car block.
fn word_to_tl<S: Scalar>(w: &TrainWord, elements: &BTreeMap<String, TLElement<S>>, delta: &S) -> Result<TLElement<S>> {
    let mut contents = Vec::new();
    for c in &w.cars {
        let x =
            elements.get(&c.label).ok_or_else(|| Error::Unsupported(format!("no element for label {}", c.label)))?;
        contents.push(x.tensor_identity_left(c.wraps));
    }
    let legs = w.legs();
    let total = w.pairing.len() + legs;
    let mut link = vec![None; total];
    let mut base = Vec::new();
    let mut off = w.pairing.len();
    for b in 0..w.cars.len() {
        let (start, len) = (w.block_start(b), w.block_len(b));
        for j in 0..len {
            let car_pos = off + (len - 1 - j);
            link[start + j] = Some(car_pos);
            link[car_pos] = Some(start + j);
        }
        base.push(off);
        off += len;
    }
    let outer: Vec<usize> = (legs..w.pairing.len()).collect();
    let mut out = TLElement::zero(w.bottom, w.top, w.shading, delta.clone());
    let terms: Vec<Vec<(&TLDiagram, &S)>> = contents.iter().map(|c| c.terms().collect()).collect();
    if terms.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    let mut choice = vec![0usize; terms.len()];
    loop {
        let mut chord = w.pairing.clone();
        let mut coeff = S::one();
        for (b, &i) in choice.iter().enumerate() {
            let (d, c) = terms[b][i];
            chord.extend(d.pairing().iter().map(|&p| p + base[b]));
            coeff = coeff.prod(c);
        }
        let (pairing, loops) = trace(&chord, &link, &outer);
        let d = TLDiagram::new(w.bottom, w.top, pairing, w.shading)?;
        out.add_term(d, coeff.prod(&delta.powu(loops)));
        let mut b = 0;
        while b < choice.len() {
            choice[b] += 1;
            if choice[b] < terms[b].len() {
                break;
            }
            choice[b] = 0;
            b += 1;
        }
        if b == choice.len() {
            return Ok(out);
        }
    }
}

/// All 1-car trains in P_{m} with a car of `label`, excluding cars capped onto themselves.
fn one_car_trains(n: usize, m: usize, shading: bool, label: &str) -> Vec<TrainWord> {
    let legs = 2 * n;
    enumerate_diagrams(n + m)
        .into_iter()
        .map(|d| d.pairing().to_vec())
        .filter(|p| (0..legs).all(|j| p[j] >= legs))
        .map(|pairing| TrainWord {
            n,
            bottom: m,
            top: m,
            shading,
            cars: vec![Car { label: label.into(), wraps: 0 }],
            pairing,
        })
        .collect()
}

fn dual_label(label: &str) -> String {
    format!("{label}'")
}

impl<S: Scalar> GeneratorSystem<S> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> &S {
        &self.delta
    }

    /// Side of a label: `true` for the + generators.
    pub fn side(&self, label: &str) -> Option<bool> {
        self.sides.get(label).copied()
    }

    pub fn labels(&self) -> impl Iterator<Item = &String> {
        self.sides.keys()
    }

    pub fn element(&self, label: &str) -> Option<&TLElement<S>> {
        self.elements.get(label)
    }

    pub fn jones_wenzl(&self, side: bool) -> &TLElement<S> {
        &self.jw[side as usize]
    }

    /// Structure constants of x·y (y stacked on x) on one side.
    pub fn product(&self, side: bool, x: &Basis, y: &Basis) -> Option<&[(Basis, S)]> {
        self.mult_table.get(&(side, x.clone(), y.clone())).map(Vec::as_slice)
    }

    /// Tr(S^p) for p = 1, 2, 3, closing every strand on the right.
    pub fn traces(&self, label: &str) -> Option<&[S]> {
        self.traces.get(label).map(Vec::as_slice)
    }

    /// S with box positions m and m+1 (mod 2n) joined, as an element on the remaining points in
    /// increasing order.
    pub fn cap(&self, label: &str, m: usize) -> Option<&TLElement<S>> {
        self.cap_table.get(&(label.to_string(), m))
    }

    pub fn rotation(&self, label: &str) -> Option<&[(TrainWord, S)]> {
        self.rot_table.get(label).map(Vec::as_slice)
    }

    /// Expansion of `| ⊗ S` as trains with cars from the other side.
    pub fn one_strand_relation(&self, label: &str) -> Option<&[(TrainWord, S)]> {
        self.one_strand.get(label).map(Vec::as_slice)
    }

    /// Expansion of `|| ⊗ S` as trains with cars from the same side.
    pub fn two_strand_relation(&self, label: &str) -> Option<&[(TrainWord, S)]> {
        self.two_strand.get(label).map(Vec::as_slice)
    }

    fn basis_element(&self, side: bool, x: &Basis) -> TLElement<S> {
        match x {
            Basis::Gen(l) => self.elements[l].clone(),
            Basis::Jw => self.jw[side as usize].clone(),
        }
    }

    fn expand(&self, side: bool, terms: &[(Basis, S)]) -> TLElement<S> {
        let mut out = TLElement::zero(self.n, self.n, side, self.delta.clone());
        for (b, c) in terms {
            out = out.add(&self.basis_element(side, b).scale(c)).expect("same shape");
        }
        out
    }

    /// Checks (xy)z = x(yz) through the structure constants for every basis triple.
    pub fn check_associativity(&self) -> Result<()> {
        for side in [true, false] {
            let basis = self.basis(side);
            for x in &basis {
                for y in &basis {
                    for z in &basis {
                        let lhs = self.mul_terms(side, &self.mult_table[&(side, x.clone(), y.clone())], z, false);
                        let rhs = self.mul_terms(side, &self.mult_table[&(side, y.clone(), z.clone())], x, true);
                        // Compared through the difference so that float systems use their zero tolerance.
                        if !self.expand(side, &lhs).sub(&self.expand(side, &rhs))?.is_zero() {
                            return Err(Error::Validation(format!(
                                "structure constants not associative at {x:?}·{y:?}·{z:?}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn basis(&self, side: bool) -> Vec<Basis> {
        let mut b: Vec<Basis> =
            self.sides.iter().filter(|&(_, &s)| s == side).map(|(l, _)| Basis::Gen(l.clone())).collect();
        b.push(Basis::Jw);
        b
    }

    /// (Σ c_k k)·z, or z·(Σ c_k k) when `left`.
    fn mul_terms(&self, side: bool, terms: &[(Basis, S)], z: &Basis, left: bool) -> Vec<(Basis, S)> {
        let mut out = Vec::new();
        for (k, c) in terms {
            let key = if left { (side, z.clone(), k.clone()) } else { (side, k.clone(), z.clone()) };
            for (b, d) in &self.mult_table[&key] {
                out.push((b.clone(), c.prod(d)));
            }
        }
        out
    }
}

/// Builds a generator system from + generators given as elements of TL_n. Each label L gets a
/// dual generator L' = rotate(L) when 1-strand relations are requested.
pub fn derive_generator_system<S: Scalar>(
    n: usize,
    elements: &[(String, TLElement<S>)],
    delta: &S,
    kind: JellyfishKind,
) -> Result<GeneratorSystem<S>> {
    if n == 0 {
        return domain("generators need at least one strand");
    }
    let mut sides = BTreeMap::new();
    let mut elems = BTreeMap::new();
    for (label, x) in elements {
        if label.is_empty() || label.ends_with('\'') || label.chars().any(|c| c.is_whitespace() || "()\"".contains(c)) {
            return domain(format!("label {label:?} is reserved or not a plain name"));
        }
        if x.bottom() != n || x.top() != n || !x.shading() {
            return domain(format!("generator {label} must be a + element of TL_{n}"));
        }
        if sides.insert(label.clone(), true).is_some() {
            return domain(format!("duplicate label {label}"));
        }
        elems.insert(label.clone(), x.clone());
        if kind.one() {
            sides.insert(dual_label(label), false);
            elems.insert(dual_label(label), rotate(x)?);
        }
    }
    let f = jones_wenzl(n, delta)?;
    let jw = [f.with_shading(false), f.with_shading(true)];
    let mut sys = GeneratorSystem {
        n,
        delta: delta.clone(),
        sides,
        elements: elems,
        jw,
        mult_table: BTreeMap::new(),
        traces: BTreeMap::new(),
        cap_table: BTreeMap::new(),
        rot_table: BTreeMap::new(),
        one_strand: BTreeMap::new(),
        two_strand: BTreeMap::new(),
    };

    for side in [true, false] {
        let basis = sys.basis(side);
        let columns: Vec<TLElement<S>> = basis.iter().map(|b| sys.basis_element(side, b)).collect();
        for x in &basis {
            for y in &basis {
                let target =
                    multiply(&columns[basis.iter().position(|b| b == x).unwrap()], &sys.basis_element(side, y))?;
                let sol = solve(&columns, &target).ok_or_else(|| {
                    Error::Validation(format!("product {x:?}·{y:?} lies outside span(generators ∪ {{f}})"))
                })?;
                let terms = basis.iter().cloned().zip(sol).filter(|(_, c)| !c.is_zero()).collect();
                sys.mult_table.insert((side, x.clone(), y.clone()), terms);
            }
        }
    }
    sys.check_associativity()?;

    let labels: Vec<String> = sys.sides.keys().cloned().collect();
    for l in &labels {
        let x = sys.elements[l].clone();
        let side = sys.sides[l];
        let mut powers = Vec::new();
        let mut p = x.clone();
        for _ in 0..3 {
            powers.push(trace_close(&p)?);
            p = multiply(&p, &x)?;
        }
        sys.traces.insert(l.clone(), powers);
        for m in 0..2 * n {
            sys.cap_table.insert((l.clone(), m), cap_element(&x, m, delta)?);
        }

        let opposite: Vec<String> = labels.iter().filter(|k| sys.sides[*k] != side).cloned().collect();
        let same: Vec<String> = labels.iter().filter(|k| sys.sides[*k] == side).cloned().collect();
        let rot_cols: Vec<TrainWord> = opposite
            .iter()
            .map(|k| TrainWord::generator(n, k, !side))
            .chain(enumerate_diagrams(n).iter().map(|d| TrainWord::from_diagram(n, &d.clone().with_shading(!side))))
            .collect();
        let rx = rotate(&x)?;
        sys.rot_table.insert(l.clone(), sys.train_solve(&rot_cols, &rx, &format!("rotation of {l}"))?);

        if kind.one() {
            let cols = train_columns(n, n + 1, !side, &opposite);
            let target = x.tensor_identity_left(1);
            sys.one_strand.insert(l.clone(), sys.train_solve(&cols, &target, &format!("1-strand relation for {l}"))?);
        }
        if kind.two() {
            let cols = train_columns(n, n + 2, side, &same);
            let target = x.tensor_identity_left(2);
            sys.two_strand.insert(l.clone(), sys.train_solve(&cols, &target, &format!("2-strand relation for {l}"))?);
        }
    }
    Ok(sys)
}

/// 1-car trains for each label first, then every TL diagram.
fn train_columns(n: usize, m: usize, shading: bool, labels: &[String]) -> Vec<TrainWord> {
    let mut cols: Vec<TrainWord> = labels.iter().flat_map(|l| one_car_trains(n, m, shading, l)).collect();
    cols.extend(enumerate_diagrams(m).iter().map(|d| TrainWord::from_diagram(n, &d.clone().with_shading(shading))));
    cols
}

/// Joins box positions m and m+1 (mod 2n) of `x`.
fn cap_element<S: Scalar>(x: &TLElement<S>, m: usize, delta: &S) -> Result<TLElement<S>> {
    let n = x.bottom();
    let points = 2 * n;
    let (a, b) = (m, (m + 1) % points);
    let shading = if m == points - 1 { !x.shading() } else { x.shading() };
    let mut out = TLElement::zero(n - 1, n - 1, shading, delta.clone());
    let mut link = vec![None; points];
    link[a] = Some(b);
    link[b] = Some(a);
    let outer: Vec<usize> = (0..points).filter(|&p| p != a && p != b).collect();
    for (d, c) in x.terms() {
        let (pairing, loops) = trace(d.pairing(), &link, &outer);
        out.add_term(TLDiagram::new(n - 1, n - 1, pairing, shading)?, c.prod(&delta.powu(loops)));
    }
    Ok(out)
}

impl<S: Scalar> GeneratorSystem<S> {
    fn train_solve(&self, cols: &[TrainWord], target: &TLElement<S>, what: &str) -> Result<Vec<(TrainWord, S)>> {
        let values: Vec<TLElement<S>> =
            cols.iter().map(|w| word_to_tl(w, &self.elements, &self.delta)).collect::<Result<_>>()?;
        let sol = solve(&values, target).ok_or_else(|| Error::Validation(format!("{what}: trains do not span")))?;
        Ok(cols.iter().cloned().zip(sol).filter(|(_, c)| !c.is_zero()).collect())
    }

    /// The TL value of a word under this instantiation.
    pub fn word_value(&self, w: &TrainWord) -> Result<TLElement<S>> {
        word_to_tl(w, &self.elements, &self.delta)
    }
}

/// A closed labelled diagram built from generators, TL diagrams, rotation, stacking, capping and
/// closure.
#[derive(Clone, Debug, PartialEq)]
pub enum DiagramExpr {
    Gen(String),
    Tl(TLDiagram),
    Rotate(Box<DiagramExpr>),
    /// `Multiply(a, b)` stacks b on top of a.
    Multiply(Box<DiagramExpr>, Box<DiagramExpr>),
    /// Joins top points i and i+1 (0-based).
    Cap(Box<DiagramExpr>, usize),
    Close(Box<DiagramExpr>),
}

impl DiagramExpr {
    /// Bottom arity, top arity and shading, checked at every node.
    pub fn shape<S: Scalar>(&self, sys: &GeneratorSystem<S>) -> Result<(usize, usize, bool)> {
        self.shape_at(sys, true)
    }

    fn shape_at<S: Scalar>(&self, sys: &GeneratorSystem<S>, root: bool) -> Result<(usize, usize, bool)> {
        match self {
            DiagramExpr::Gen(l) => match sys.side(l) {
                Some(side) => Ok((sys.n, sys.n, side)),
                None => Err(Error::Unsupported(format!("unknown generator {l}"))),
            },
            DiagramExpr::Tl(d) => Ok((d.bottom(), d.top(), d.shading())),
            DiagramExpr::Rotate(x) => {
                let (b, t, s) = x.shape_at(sys, false)?;
                if b != t || b == 0 {
                    return domain(format!("rotation needs equal arity at least 1, got {b}→{t}"));
                }
                Ok((b, t, !s))
            }
            DiagramExpr::Multiply(a, b) => {
                let (ab, at, asd) = a.shape_at(sys, false)?;
                let (bb, bt, bsd) = b.shape_at(sys, false)?;
                if at != bb || asd != bsd {
                    return domain(format!("cannot stack {bb}→{bt} on {ab}→{at}"));
                }
                Ok((ab, bt, asd))
            }
            DiagramExpr::Cap(x, i) => {
                let (b, t, s) = x.shape_at(sys, false)?;
                if i + 1 >= t {
                    return domain(format!("cap at {i} needs at least {} top points, have {t}", i + 2));
                }
                Ok((b, t - 2, s))
            }
            DiagramExpr::Close(x) => {
                if !root {
                    return domain("close may only appear at the root");
                }
                let (b, t, s) = x.shape_at(sys, false)?;
                if b != t {
                    return domain(format!("closure needs equal arity, have {b}→{t}"));
                }
                Ok((0, 0, s))
            }
        }
    }

    pub fn num_generators(&self) -> usize {
        match self {
            DiagramExpr::Gen(_) => 1,
            DiagramExpr::Tl(_) => 0,
            DiagramExpr::Rotate(x) | DiagramExpr::Cap(x, _) | DiagramExpr::Close(x) => x.num_generators(),
            DiagramExpr::Multiply(a, b) => a.num_generators() + b.num_generators(),
        }
    }

    pub fn num_rotations(&self) -> usize {
        match self {
            DiagramExpr::Gen(_) | DiagramExpr::Tl(_) => 0,
            DiagramExpr::Rotate(x) => 1 + x.num_rotations(),
            DiagramExpr::Cap(x, _) | DiagramExpr::Close(x) => x.num_rotations(),
            DiagramExpr::Multiply(a, b) => a.num_rotations() + b.num_rotations(),
        }
    }
}

fn pairs_spec(pairing: &[usize]) -> String {
    (0..pairing.len()).filter(|&a| pairing[a] > a).map(|a| format!("{a}-{}", pairing[a])).collect::<Vec<_>>().join(",")
}

impl fmt::Display for DiagramExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiagramExpr::Gen(l) => write!(f, "(gen {l})"),
            DiagramExpr::Tl(d) => {
                write!(f, "(tl {} {} \"{}\"", d.bottom(), d.top(), pairs_spec(d.pairing()))?;
                if !d.shading() {
                    write!(f, " -")?;
                }
                write!(f, ")")
            }
            DiagramExpr::Rotate(x) => write!(f, "(rot {x})"),
            DiagramExpr::Multiply(a, b) => write!(f, "(mult {a} {b})"),
            DiagramExpr::Cap(x, i) => write!(f, "(cap {x} {i})"),
            DiagramExpr::Close(x) => write!(f, "(close {x})"),
        }
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
    Str(String),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Token)>> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((pos, Token::Open));
                chars.next();
            }
            ')' => {
                out.push((pos, Token::Close));
                chars.next();
            }
            '"' => {
                chars.next();
                let mut text = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((_, ch)) => text.push(ch),
                        None => return Err(Error::Parse { pos, msg: "unterminated string".into() }),
                    }
                }
                out.push((pos, Token::Str(text)));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut text = String::new();
                while let Some(&(_, ch)) = chars.peek() {
                    if ch.is_whitespace() || "()\"".contains(ch) {
                        break;
                    }
                    text.push(ch);
                    chars.next();
                }
                out.push((pos, Token::Atom(text)));
            }
        }
    }
    Ok(out)
}

/// A TL diagram from the pairing syntax of `tl` terms, e.g. "0-3,1-2" with 2 bottom and 2 top
/// points.
pub fn parse_diagram(spec: &str, bottom: usize, top: usize, shading: bool) -> Result<TLDiagram> {
    TLDiagram::new(bottom, top, parse_pairs(spec, Some(bottom + top), 0)?, shading)
}

fn parse_pairs(spec: &str, points: Option<usize>, pos: usize) -> Result<Vec<usize>> {
    let err = |msg: String| Error::Parse { pos, msg };
    let mut chords = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, b) = part.split_once('-').ok_or_else(|| err(format!("expected a-b, got {part:?}")))?;
        let a: usize = a.trim().parse().map_err(|_| err(format!("bad point {a:?}")))?;
        let b: usize = b.trim().parse().map_err(|_| err(format!("bad point {b:?}")))?;
        chords.push((a, b));
    }
    let total = points.unwrap_or(2 * chords.len());
    let mut pairing = vec![usize::MAX; total];
    for (a, b) in chords {
        if a >= total || b >= total || a == b || pairing[a] != usize::MAX || pairing[b] != usize::MAX {
            return Err(err(format!("pair {a}-{b} is out of range or reuses a point")));
        }
        pairing[a] = b;
        pairing[b] = a;
    }
    if pairing.contains(&usize::MAX) {
        return Err(err("every point must be paired".into()));
    }
    Ok(pairing)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.tokens.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.at).map(|t| &t.1);
        self.at += 1;
        t
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|t| &t.1)
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.next() {
            Some(Token::Close) => Ok(()),
            _ => {
                self.at -= 1;
                self.fail("expected )")
            }
        }
    }

    fn number(&mut self) -> Result<usize> {
        match self.next() {
            Some(Token::Atom(a)) => match a.parse() {
                Ok(v) => Ok(v),
                Err(_) => {
                    self.at -= 1;
                    self.fail("expected a number")
                }
            },
            _ => {
                self.at -= 1;
                self.fail("expected a number")
            }
        }
    }

    fn expr(&mut self) -> Result<DiagramExpr> {
        match self.next() {
            Some(Token::Open) => {}
            _ => {
                self.at = self.at.saturating_sub(1);
                return self.fail("expected (");
            }
        }
        let head = match self.next() {
            Some(Token::Atom(h)) => h.clone(),
            _ => {
                self.at -= 1;
                return self.fail("expected an operator");
            }
        };
        let e = match head.as_str() {
            "gen" => match self.next() {
                Some(Token::Atom(l)) => DiagramExpr::Gen(l.clone()),
                _ => {
                    self.at -= 1;
                    return self.fail("expected a generator label");
                }
            },
            "tl" => self.tl()?,
            "rot" => DiagramExpr::Rotate(Box::new(self.expr()?)),
            "close" => DiagramExpr::Close(Box::new(self.expr()?)),
            "cap" => {
                let x = self.expr()?;
                DiagramExpr::Cap(Box::new(x), self.number()?)
            }
            "mult" => {
                let mut acc = self.expr()?;
                let second = self.expr()?;
                acc = DiagramExpr::Multiply(Box::new(acc), Box::new(second));
                while self.peek() == Some(&Token::Open) {
                    acc = DiagramExpr::Multiply(Box::new(acc), Box::new(self.expr()?));
                }
                acc
            }
            other => {
                self.at -= 1;
                return self.fail(format!("unknown operator {other:?}"));
            }
        };
        self.expect_close()?;
        Ok(e)
    }

    fn tl(&mut self) -> Result<DiagramExpr> {
        let mut dims = Vec::new();
        while let Some(Token::Atom(_)) = self.peek() {
            dims.push(self.number()?);
        }
        let pos = self.pos();
        let spec = match self.next() {
            Some(Token::Str(s)) => s.clone(),
            _ => {
                self.at -= 1;
                return self.fail("expected a quoted pairing");
            }
        };
        let shading = match self.peek() {
            Some(Token::Atom(a)) if a == "-" || a == "+" => {
                let s = a == "+";
                self.at += 1;
                s
            }
            _ => true,
        };
        let (pairing, b, t) = match dims.as_slice() {
            [] => {
                let p = parse_pairs(&spec, None, pos)?;
                let half = p.len() / 2;
                (p, half, half)
            }
            [b, t] => (parse_pairs(&spec, Some(b + t), pos)?, *b, *t),
            _ => return Err(Error::Parse { pos, msg: "tl takes either no sizes or bottom and top".into() }),
        };
        TLDiagram::new(b, t, pairing, shading)
            .map(DiagramExpr::Tl)
            .map_err(|e| Error::Parse { pos, msg: e.to_string() })
    }
}

/// Parses the s-expression form, e.g. `(close (mult (rot (gen U)) (tl "0-3,1-2")))`.
pub fn parse_expr(text: &str) -> Result<DiagramExpr> {
    let mut p = Parser { tokens: tokenize(text)?, at: 0, end: text.len() };
    let e = p.expr()?;
    if p.at < p.tokens.len() {
        return p.fail("trailing input");
    }
    Ok(e)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PullOptions {
    /// Replace `rotate(gen S)` by the rotation table before pulling.
    pub absorb_rotations: bool,
}

/// Which relations the pulling phase used.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PullLog {
    pub one_strand: usize,
    pub two_strand: usize,
    pub rotations_absorbed: usize,
    /// Labels where both relations applied and the 1-strand one was chosen.
    pub preferred_one_strand: BTreeSet<String>,
}

fn compile<S: Scalar>(
    e: &DiagramExpr,
    sys: &GeneratorSystem<S>,
    opts: &PullOptions,
    log: &mut PullLog,
) -> Result<TrainSum<S>> {
    let mut out = TrainSum::new();
    match e {
        DiagramExpr::Gen(l) => {
            add_into(&mut out, TrainWord::generator(sys.n, l, sys.sides[l]), S::one());
        }
        DiagramExpr::Tl(d) => add_into(&mut out, TrainWord::from_diagram(sys.n, d), S::one()),
        DiagramExpr::Rotate(x) => {
            if let (true, DiagramExpr::Gen(l)) = (opts.absorb_rotations, x.as_ref()) {
                log.rotations_absorbed += 1;
                for (w, c) in &sys.rot_table[l] {
                    add_into(&mut out, w.clone(), c.clone());
                }
            } else {
                for (w, c) in compile(x, sys, opts, log)? {
                    add_into(&mut out, w.rotate()?, c);
                }
            }
        }
        DiagramExpr::Multiply(a, b) => {
            let (xa, xb) = (compile(a, sys, opts, log)?, compile(b, sys, opts, log)?);
            for (wa, ca) in &xa {
                for (wb, cb) in &xb {
                    let (w, loops) = wa.stack(wb)?;
                    add_into(&mut out, w, ca.prod(cb).prod(&sys.delta.powu(loops)));
                }
            }
        }
        DiagramExpr::Cap(x, i) => {
            for (w, c) in compile(x, sys, opts, log)? {
                let (w2, loops) = w.cap_top(*i)?;
                add_into(&mut out, w2, c.prod(&sys.delta.powu(loops)));
            }
        }
        DiagramExpr::Close(x) => {
            for (w, c) in compile(x, sys, opts, log)? {
                let (w2, loops) = w.close()?;
                add_into(&mut out, w2, c.prod(&sys.delta.powu(loops)));
            }
        }
    }
    Ok(out)
}

/// Replaces a wrapped car by its jellyfish expansion, nested under the remaining wraps.
fn pull_once<S: Scalar>(w: &TrainWord, b: usize, sys: &GeneratorSystem<S>, log: &mut PullLog) -> Result<TrainSum<S>> {
    let car = &w.cars[b];
    let one = sys.one_strand.get(&car.label);
    let two = sys.two_strand.get(&car.label).filter(|_| car.wraps >= 2);
    let (table, used) = match (one, two) {
        (Some(t), two) => {
            if two.is_some() {
                log.preferred_one_strand.insert(car.label.clone());
            }
            log.one_strand += 1;
            (t, 1)
        }
        (None, Some(t)) => {
            log.two_strand += 1;
            (t, 2)
        }
        (None, None) => {
            return Err(Error::Unsupported(format!(
                "car {} sits under {} strand(s) and the system has no jellyfish relation for it",
                car.label, car.wraps
            )))
        }
    };
    let mut out = TrainSum::new();
    for (t, c) in table {
        let mut inner = t.clone();
        for _ in 0..car.wraps - used {
            inner = inner.wrap_left();
        }
        // Termination: every car brought in sits under fewer strands than the one it replaces.
        assert!(inner.cars.iter().all(|x| x.wraps < car.wraps), "jellyfish step did not reduce the wrap depth");
        let (next, loops) = splice(w, b, &inner);
        add_into(&mut out, next, c.prod(&sys.delta.powu(loops)));
    }
    Ok(out)
}

/// Rewrites `e` as a combination of trains, every car facing the outer region.
pub fn pull_to_trains<S: Scalar>(
    e: &DiagramExpr,
    sys: &GeneratorSystem<S>,
    opts: &PullOptions,
) -> Result<(TrainSum<S>, PullLog)> {
    e.shape(sys)?;
    let mut log = PullLog::default();
    let mut pending = compile(e, sys, opts, &mut log)?;
    let mut done = TrainSum::new();
    while !pending.is_empty() {
        let mut next = TrainSum::new();
        for (w, c) in pending {
            match w.cars.iter().position(|car| car.wraps > 0) {
                None => add_into(&mut done, w, c),
                Some(b) => {
                    for (w2, c2) in pull_once(&w, b, sys, &mut log)? {
                        add_into(&mut next, w2, c.prod(&c2));
                    }
                }
            }
        }
        pending = next;
    }
    Ok((done, log))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rule {
    /// Cap on box positions m, m+1 of car `block`.
    Cap { block: usize, m: usize },
    /// Merge car `block` with the car below it, or the last car with the first when `block` is
    /// the last one.
    Merge { block: usize },
}

fn applicable_rules(w: &TrainWord) -> Vec<Rule> {
    let n = w.n;
    let l = w.cars.len();
    let mut rules = Vec::new();
    for b in 0..l {
        let s = w.block_start(b);
        for j in 0..2 * n - 1 {
            if w.pairing[s + j] == s + j + 1 {
                rules.push(Rule::Cap { block: b, m: 2 * n - 2 - j });
            }
        }
    }
    if l == 1 && w.pairing.len() == 2 * n && w.pairing[0] == 2 * n - 1 {
        rules.push(Rule::Cap { block: 0, m: 2 * n - 1 });
    }
    let joined = |a: usize, b: usize, w: &TrainWord| {
        let (sa, sb) = (w.block_start(a), w.block_start(b));
        (0..n).all(|t| w.pairing[sa + 2 * n - 1 - t] == sb + t)
    };
    for a in 0..l.saturating_sub(1) {
        if joined(a, a + 1, w) {
            rules.push(Rule::Merge { block: a });
        }
    }
    if l >= 2 {
        let shifted = w.cycle_last_to_front();
        if joined(0, 1, &shifted) {
            rules.push(Rule::Merge { block: l - 1 });
        }
    }
    rules
}

fn apply_rule<S: Scalar>(w: &TrainWord, rule: Rule, sys: &GeneratorSystem<S>) -> Result<TrainSum<S>> {
    let n = w.n;
    let mut out = TrainSum::new();
    match rule {
        Rule::Cap { block, m } => {
            let s = w.block_start(block);
            let legs = [2 * n - 1 - m, 2 * n - 1 - (m + 1) % (2 * n)];
            let removed: BTreeSet<usize> = legs.iter().map(|&j| s + j).collect();
            let pairing = remove_positions(&w.pairing, &removed);
            let label = &w.cars[block].label;
            let x = sys.cap(label, m).ok_or_else(|| Error::Unsupported(format!("no cap data for {label}")))?;
            let mut cars = w.cars.clone();
            cars.remove(block);
            splice_element(w, &pairing, cars, s, 2 * n - 2, x, &sys.delta, &S::one(), &mut out);
        }
        Rule::Merge { block } => {
            let (w, a) = if block + 1 == w.cars.len() { (w.cycle_last_to_front(), 0) } else { (w.clone(), block) };
            let s = w.block_start(a);
            let removed: BTreeSet<usize> = (s + n..s + 3 * n).collect();
            let pairing = remove_positions(&w.pairing, &removed);
            let (upper, lower) = (&w.cars[a].label, &w.cars[a + 1].label);
            let side = sys.sides[upper];
            if sys.sides[lower] != side {
                return Err(Error::Stuck(format!("adjacent cars {upper} and {lower} lie on different sides")));
            }
            let key = (side, Basis::Gen(lower.clone()), Basis::Gen(upper.clone()));
            let product = sys
                .mult_table
                .get(&key)
                .ok_or_else(|| Error::Unsupported(format!("no product for {lower}·{upper}")))?;
            let mut rest = w.cars.clone();
            rest.drain(a..a + 2);
            for (basis, c) in product {
                match basis {
                    Basis::Gen(k) => {
                        let mut cars = rest.clone();
                        cars.insert(a, Car { label: k.clone(), wraps: 0 });
                        add_into(&mut out, TrainWord { pairing: pairing.clone(), cars, ..w.clone() }, c.clone());
                    }
                    Basis::Jw => {
                        let f = &sys.jw[side as usize];
                        splice_element(&w, &pairing, rest.clone(), s, 2 * n, f, &sys.delta, c, &mut out);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn reduce_with<S: Scalar>(
    w: &TrainWord,
    sys: &GeneratorSystem<S>,
    choose: &mut dyn FnMut(usize) -> usize,
) -> Result<S> {
    if !w.is_closed() {
        return domain("reduction needs a closed train");
    }
    if !w.is_train() {
        return domain("reduction needs every car to face the outer region");
    }
    if w.cars.is_empty() {
        debug_assert!(w.pairing.is_empty());
        return Ok(S::one());
    }
    let rules = applicable_rules(w);
    if rules.is_empty() {
        return Err(Error::Stuck(format!("no cap or merge applies to {w:?}")));
    }
    let rule = rules[choose(rules.len())];
    let mut total = S::zero();
    for (next, c) in apply_rule(w, rule, sys)? {
        total = total.sum(&c.prod(&reduce_with(&next, sys, choose)?));
    }
    Ok(total)
}

/// Evaluates a closed train by capping and merging cars, firing the first applicable rule.
pub fn reduce_closed_train<S: Scalar>(w: &TrainWord, sys: &GeneratorSystem<S>) -> Result<S> {
    reduce_with(w, sys, &mut |_| 0)
}

/// As [`reduce_closed_train`], choosing among applicable rules at random.
pub fn reduce_closed_train_random<S: Scalar, R: Rng>(
    w: &TrainWord,
    sys: &GeneratorSystem<S>,
    rng: &mut R,
) -> Result<S> {
    reduce_with(w, sys, &mut |k| rng.gen_range(0..k))
}

pub fn evaluate<S: Scalar>(e: &DiagramExpr, sys: &GeneratorSystem<S>) -> Result<S> {
    evaluate_with(e, sys, &PullOptions::default())
}

pub fn evaluate_with<S: Scalar>(e: &DiagramExpr, sys: &GeneratorSystem<S>, opts: &PullOptions) -> Result<S> {
    if !matches!(e, DiagramExpr::Close(_)) {
        return domain("evaluation needs a closed expression");
    }
    let (trains, _) = pull_to_trains(e, sys, opts)?;
    let mut total = S::zero();
    for (w, c) in &trains {
        total = total.sum(&c.prod(&reduce_closed_train(w, sys)?));
    }
    Ok(total)
}

/// The TL value of a non-closed expression.
pub fn direct_element<S: Scalar>(e: &DiagramExpr, sys: &GeneratorSystem<S>) -> Result<TLElement<S>> {
    match e {
        DiagramExpr::Gen(l) => {
            sys.elements.get(l).cloned().ok_or_else(|| Error::Unsupported(format!("unknown generator {l}")))
        }
        DiagramExpr::Tl(d) => Ok(TLElement::from_diagram(d.clone(), sys.delta.clone())),
        DiagramExpr::Rotate(x) => rotate(&direct_element(x, sys)?),
        DiagramExpr::Multiply(a, b) => multiply(&direct_element(a, sys)?, &direct_element(b, sys)?),
        DiagramExpr::Cap(x, i) => {
            let v = direct_element(x, sys)?;
            let t = v.top();
            if i + 1 >= t {
                return domain(format!("cap at {i} needs at least {} top points", i + 2));
            }
            let mut pairing = vec![0; 2 * t - 2];
            let top_pos = |j: usize| t + (t - 2) - 1 - j;
            let mut join = |a: usize, b: usize| {
                pairing[a] = b;
                pairing[b] = a;
            };
            join(*i, i + 1);
            for p in 0..t {
                if p < *i {
                    join(p, top_pos(p));
                } else if p > i + 1 {
                    join(p, top_pos(p - 2));
                }
            }
            let cap = TLDiagram::new(t, t - 2, pairing, v.shading())?;
            multiply(&v, &TLElement::from_diagram(cap, sys.delta.clone()))
        }
        DiagramExpr::Close(_) => domain("close may only appear at the root"),
    }
}

/// Evaluates a closed expression directly in TL, the oracle for [`evaluate`].
pub fn evaluate_direct<S: Scalar>(e: &DiagramExpr, sys: &GeneratorSystem<S>) -> Result<S> {
    match e {
        DiagramExpr::Close(x) => trace_close(&direct_element(x, sys)?),
        _ => domain("evaluation needs a closed expression"),
    }
}

/// A random closed expression with at most `max_cars` generators and `max_rotations` rotations,
/// closing a k-box for k in 1..=3.
pub fn random_closed_expr<S: Scalar, R: Rng>(
    sys: &GeneratorSystem<S>,
    max_cars: usize,
    max_rotations: usize,
    rng: &mut R,
) -> DiagramExpr {
    let k = rng.gen_range(1..=3);
    let mut budget = (max_cars, max_rotations);
    DiagramExpr::Close(Box::new(random_expr(sys, k, k, true, &mut budget, 0, rng)))
}

fn random_expr<S: Scalar, R: Rng>(
    sys: &GeneratorSystem<S>,
    b: usize,
    t: usize,
    shading: bool,
    budget: &mut (usize, usize),
    depth: usize,
    rng: &mut R,
) -> DiagramExpr {
    const MAX_POINTS: usize = 4;
    let labels: Vec<&String> = sys.sides.iter().filter(|&(_, &s)| s == shading).map(|(l, _)| l).collect();
    let mut options: Vec<(u8, u32)> = vec![(0, 1)];
    if b == sys.n && t == sys.n && budget.0 > 0 && !labels.is_empty() {
        options.push((1, 5));
    }
    if depth < 6 {
        if b == t && b > 0 && budget.1 > 0 {
            options.push((2, 3));
        }
        options.push((3, 3));
        if t + 2 <= MAX_POINTS {
            options.push((4, 1));
        }
    }
    let total: u32 = options.iter().map(|o| o.1).sum();
    let mut pick = rng.gen_range(0..total);
    let choice = options.iter().find(|o| {
        if pick < o.1 {
            true
        } else {
            pick -= o.1;
            false
        }
    });
    match choice.map(|o| o.0).unwrap_or(0) {
        1 => {
            budget.0 -= 1;
            DiagramExpr::Gen(labels.choose(rng).unwrap().to_string())
        }
        2 => {
            budget.1 -= 1;
            DiagramExpr::Rotate(Box::new(random_expr(sys, b, t, !shading, budget, depth + 1, rng)))
        }
        3 => {
            let mids: Vec<usize> =
                (0..=MAX_POINTS).filter(|m| (b + m).is_multiple_of(2) && (m + t).is_multiple_of(2)).collect();
            let m = if rng.gen_bool(0.5) && mids.contains(&sys.n) { sys.n } else { *mids.choose(rng).unwrap() };
            let lower = random_expr(sys, b, m, shading, budget, depth + 1, rng);
            let upper = random_expr(sys, m, t, shading, budget, depth + 1, rng);
            DiagramExpr::Multiply(Box::new(lower), Box::new(upper))
        }
        4 => {
            let inner = random_expr(sys, b, t + 2, shading, budget, depth + 1, rng);
            DiagramExpr::Cap(Box::new(inner), rng.gen_range(0..=t))
        }
        _ => {
            let pairing = random_noncrossing(b + t, rng);
            DiagramExpr::Tl(TLDiagram::new(b, t, pairing, shading).expect("random matchings are planar"))
        }
    }
}
