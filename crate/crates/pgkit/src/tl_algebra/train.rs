//! Trains: a TL diagram with n-box cars attached along its left edge, and the constructive proof
//! that trains lie in the algebra generated by one n-box and TL_k.
//!
//! Train positions run counterclockwise from the top-left corner: the 2n legs of each car (cars
//! listed top to bottom), then the k bottom points left to right, then the k top points right to
//! left. Leg j of a car's block is glued to position 2n−1−j of the car's own rectangle, so the
//! 1-car train with chords (2n−1−j, 2n+j) is the car itself.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{gap_distance, is_noncrossing_matching, multiply, trace, TLDiagram, TLElement};
use crate::error::{domain, Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Train<S: Scalar> {
    n: usize,
    k: usize,
    cars: Vec<TLElement<S>>,
    pairing: Vec<usize>,
}

impl<S: Scalar> Train<S> {
    pub fn new(n: usize, k: usize, cars: Vec<TLElement<S>>, pairing: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return domain("cars need at least one strand");
        }
        if let Some(c) = cars.iter().find(|c| c.bottom() != n || c.top() != n) {
            return domain(format!("car of shape {}→{} in a train of {n}-boxes", c.bottom(), c.top()));
        }
        if pairing.len() != 2 * n * cars.len() + 2 * k {
            return domain(format!("{} pairing entries for {} cars and k = {k}", pairing.len(), cars.len()));
        }
        if !is_noncrossing_matching(&pairing) {
            return Err(Error::Validation(format!("train diagram is not planar: {pairing:?}")));
        }
        Ok(Train { n, k, cars, pairing })
    }

    /// The 1-car train in P_n that is just `car`.
    pub fn generator(car: TLElement<S>) -> Result<Self> {
        let n = car.bottom();
        let mut pairing = vec![0; 4 * n];
        for j in 0..2 * n {
            pairing[2 * n - 1 - j] = 2 * n + j;
            pairing[2 * n + j] = 2 * n - 1 - j;
        }
        Train::new(n, n, vec![car], pairing)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cars(&self) -> &[TLElement<S>] {
        &self.cars
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// The element of TL_k obtained by gluing every car into the diagram.
    pub fn evaluate(&self) -> Result<TLElement<S>> {
        let delta = match self.cars.first() {
            Some(c) => c.delta().clone(),
            None => return domain("a train without cars carries no loop value; use its diagram"),
        };
        let legs = 2 * self.n * self.cars.len();
        let total = self.pairing.len() + legs;
        let mut link = vec![None; total];
        for leg in 0..legs {
            let (b, j) = (leg / (2 * self.n), leg % (2 * self.n));
            let car_pos = self.pairing.len() + 2 * self.n * b + (2 * self.n - 1 - j);
            link[leg] = Some(car_pos);
            link[car_pos] = Some(leg);
        }
        let outer: Vec<usize> = (legs..self.pairing.len()).collect();
        let mut out = TLElement::zero(self.k, self.k, true, delta.clone());
        let terms: Vec<Vec<(&TLDiagram, &S)>> = self.cars.iter().map(|c| c.terms().collect()).collect();
        let mut choice = vec![0usize; self.cars.len()];
        if terms.iter().any(Vec::is_empty) {
            return Ok(out);
        }
        loop {
            let mut chord = self.pairing.clone();
            let mut coeff = S::one();
            for (b, &i) in choice.iter().enumerate() {
                let (d, c) = terms[b][i];
                let base = self.pairing.len() + 2 * self.n * b;
                chord.extend(d.pairing().iter().map(|&p| p + base));
                coeff = coeff.prod(c);
            }
            let (pairing, loops) = trace(&chord, &link, &outer);
            let d = TLDiagram::new(self.k, self.k, pairing, true)?;
            out.add_term(d, coeff.prod(&delta.powu(loops)));
            // Next tuple of car terms.
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
}

/// A factor in a train factorisation: a TL_k diagram or a single n-box (as a train in P_n) with
/// k−n vertical strands added on the right.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor<S: Scalar> {
    Tl(TLDiagram),
    Box(Train<S>),
}

/// Multiplies a factorisation back together, bottom factor first.
pub fn word_product<S: Scalar>(word: &[Factor<S>], k: usize, delta: &S) -> Result<TLElement<S>> {
    let mut out = TLElement::identity(k, delta.clone());
    for f in word {
        let x = match f {
            Factor::Tl(d) => TLElement::from_diagram(d.clone(), delta.clone()),
            Factor::Box(t) => t.evaluate()?.tensor_identity(k - t.n),
        };
        out = multiply(&out, &x)?;
    }
    Ok(out)
}

/// A train with car slots identified by index into the original train.
#[derive(Clone, Debug)]
struct Shape {
    n: usize,
    k: usize,
    pairing: Vec<usize>,
    cars: Vec<usize>,
}

enum ShapeFactor {
    Tl(TLDiagram),
    Box(Shape),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    Outer(usize),
    /// Point number `idx` (counted from the origin) where arc `arc` crosses a strand, seen from
    /// the sector after (counterclockwise of) the arc or before it.
    Cross {
        arc: usize,
        idx: usize,
        after: bool,
    },
}

struct Arc {
    target: usize,
    required: usize,
}

/// Cuts the disk along arcs from `origin` to each target gap. Each arc crosses the strands that
/// separate its ends once (a geodesic), then gains switch-backs around the strand at its target
/// until it crosses exactly `required` times. Returns the strand pieces.
fn cut(pairing: &[usize], origin: usize, arcs: &[Arc]) -> Result<Vec<(Label, Label)>> {
    let n = pairing.len();
    let off = |g: usize| (g + n - origin) % n;
    let chords: Vec<(usize, usize)> = (0..n)
        .filter(|&a| pairing[a] > a)
        .map(|a| {
            let b = pairing[a];
            if off(a) < off(b) {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    let crosses = |(u, v): (usize, usize), t: usize| off(u) < off(arcs[t].target) && off(arcs[t].target) <= off(v);
    let mut geodesic = vec![Vec::new(); arcs.len()];
    for (t, list) in geodesic.iter_mut().enumerate() {
        let mut hit: Vec<(usize, usize)> = chords.iter().copied().filter(|&c| crosses(c, t)).collect();
        // Nested chords: the widest one is closest to the origin.
        hit.sort_by_key(|&(u, v)| std::cmp::Reverse(off(v) - off(u)));
        *list = hit;
        let d = list.len();
        if d > arcs[t].required || !(arcs[t].required - d).is_multiple_of(2) {
            return Err(Error::Stuck(format!(
                "arc to gap {} crosses {d} strands, needs {}",
                arcs[t].target, arcs[t].required
            )));
        }
    }
    let mut order: Vec<usize> = (0..arcs.len()).collect();
    order.sort_by_key(|&t| off(arcs[t].target));
    let mut pieces = Vec::new();
    for &c in &chords {
        let mut seq = vec![Label::Outer(c.0)];
        for &t in order.iter().filter(|&&t| crosses(c, t)) {
            let idx = geodesic[t].iter().position(|&h| h == c).unwrap();
            seq.push(Label::Cross { arc: t, idx, after: false });
            seq.push(Label::Cross { arc: t, idx, after: true });
        }
        seq.push(Label::Outer(c.1));
        pieces.extend(seq.chunks(2).map(|w| (w[0], w[1])));
    }
    for (t, arc) in arcs.iter().enumerate() {
        let d = geodesic[t].len();
        let m = (arc.required - d) / 2;
        if m == 0 {
            continue;
        }
        let pos = arc.target % n;
        let cross = |idx: usize, after: bool| Label::Cross { arc: t, idx, after };
        let piece = pieces.iter_mut().find(|(a, b)| *a == Label::Outer(pos) || *b == Label::Outer(pos)).unwrap();
        if piece.0 == Label::Outer(pos) {
            piece.0 = cross(d, true);
        } else {
            piece.1 = cross(d, true);
        }
        pieces.push((Label::Outer(pos), cross(d + 2 * m - 1, true)));
        for i in 1..=m {
            pieces.push((cross(d + 2 * i - 1, false), cross(d + 2 * i - 2, false)));
        }
        for i in 2..=m {
            pieces.push((cross(d + 2 * i - 2, true), cross(d + 2 * i - 3, true)));
        }
    }
    Ok(pieces)
}

/// Boundary of the sector from gap `from` counterclockwise to gap `to`: the positions between
/// them, then back along the arc ending at `to`, then out along the arc ending at `from`.
fn sector(n: usize, from: (usize, Option<(usize, usize)>), to: (usize, Option<(usize, usize)>)) -> Vec<Label> {
    let mut out = Vec::new();
    let mut p = from.0 % n;
    let mut first = true;
    while first || p != to.0 % n {
        first = false;
        out.push(Label::Outer(p));
        p = (p + 1) % n;
    }
    if let Some((arc, count)) = to.1 {
        out.extend((0..count).rev().map(|idx| Label::Cross { arc, idx, after: false }));
    }
    if let Some((arc, count)) = from.1 {
        out.extend((0..count).map(|idx| Label::Cross { arc, idx, after: true }));
    }
    out
}

fn sector_pairing(pieces: &[(Label, Label)], labels: &[Label]) -> Result<Vec<usize>> {
    let at = |l: &Label| labels.iter().position(|m| m == l);
    let mut pairing = vec![usize::MAX; labels.len()];
    for (a, b) in pieces {
        match (at(a), at(b)) {
            (Some(i), Some(j)) => {
                pairing[i] = j;
                pairing[j] = i;
            }
            (None, None) => {}
            _ => return Err(Error::Stuck(format!("strand piece {a:?}–{b:?} leaves its sector"))),
        }
    }
    if pairing.contains(&usize::MAX) || !is_noncrossing_matching(&pairing) {
        return Err(Error::Stuck(format!("cut produced an invalid sector: {pairing:?}")));
    }
    Ok(pairing)
}

fn rotate_left<T: Clone>(v: &[T], by: usize) -> Vec<T> {
    v[by..].iter().chain(&v[..by]).cloned().collect()
}

/// Glues `inner` (a train in P_n) into car slot `slot` of `outer`.
fn substitute(outer: &Shape, slot: usize, inner: &Shape) -> Result<Shape> {
    let n = outer.n;
    let no = outer.pairing.len();
    let inner_legs = 2 * n * inner.cars.len();
    let mut chord = outer.pairing.clone();
    chord.extend(inner.pairing.iter().map(|&p| p + no));
    let mut link = vec![None; chord.len()];
    for j in 0..2 * n {
        let leg = 2 * n * slot + j;
        let target = no + inner_legs + (2 * n - 1 - j);
        link[leg] = Some(target);
        link[target] = Some(leg);
    }
    let block = 2 * n * slot..2 * n * (slot + 1);
    let outer_pts: Vec<usize> = (0..block.start).chain(no..no + inner_legs).chain(block.end..no).collect();
    let (pairing, loops) = trace(&chord, &link, &outer_pts);
    if loops > 0 {
        return Err(Error::Stuck("substitution closed a loop".into()));
    }
    let mut cars = outer.cars[..slot].to_vec();
    cars.extend(&inner.cars);
    cars.extend(&outer.cars[slot + 1..]);
    Ok(Shape { n, k: outer.k, pairing, cars })
}

/// Base case: one car. Finds a region y with d(y,x), d(y,z) ≤ n and d(y,p) ≤ k−n (all of the
/// right parity) and cuts along the Y from y to the two left corners and the right edge.
fn factor_one_car(s: &Shape) -> Result<Vec<ShapeFactor>> {
    let (n, k) = (s.n, s.k);
    let total = s.pairing.len();
    let (x, p, z) = (2 * n, 2 * n + k, 0);
    let fits = |d: usize, bound: usize| d <= bound && (bound - d).is_multiple_of(2);
    let y = (0..total)
        .find(|&g| {
            fits(gap_distance(&s.pairing, g, x), n)
                && fits(gap_distance(&s.pairing, g, z), n)
                && fits(gap_distance(&s.pairing, g, p), k - n)
        })
        .ok_or_else(|| Error::Stuck("no Y-point found".into()))?;
    let arcs = [Arc { target: x, required: n }, Arc { target: p, required: k - n }, Arc { target: z, required: n }];
    let pieces = cut(&s.pairing, y, &arcs)?;
    let a = sector(total, (x, Some((0, n))), (p, Some((1, k - n))));
    let c = sector(total, (p, Some((1, k - n))), (z, Some((2, n))));
    let b = sector(total, (z, Some((2, n))), (x, Some((0, n))));
    let a = TLDiagram::new(k, k, sector_pairing(&pieces, &a)?, true)?;
    let c = TLDiagram::new(k, k, sector_pairing_rotated(&pieces, &c, k)?, true)?;
    let b = Shape { n, k: n, pairing: sector_pairing(&pieces, &b)?, cars: s.cars.clone() };
    Ok(vec![ShapeFactor::Tl(a), ShapeFactor::Box(b), ShapeFactor::Tl(c)])
}

/// Pairing of a sector whose boundary list must be rotated left by `by` into rectangle order.
fn sector_pairing_rotated(pieces: &[(Label, Label)], labels: &[Label], by: usize) -> Result<Vec<usize>> {
    sector_pairing(pieces, &rotate_left(labels, by))
}

fn merge_push(word: &mut Vec<ShapeFactor>, f: ShapeFactor) -> Result<()> {
    if let (Some(ShapeFactor::Tl(prev)), ShapeFactor::Tl(next)) = (word.last(), &f) {
        let (d, loops) = prev.compose(next)?;
        if loops > 0 {
            return Err(Error::Stuck("merging TL factors closed a loop".into()));
        }
        *word.last_mut().unwrap() = ShapeFactor::Tl(d);
    } else {
        word.push(f);
    }
    Ok(())
}

fn factor_shape(s: &Shape) -> Result<Vec<ShapeFactor>> {
    let (n, k, l) = (s.n, s.k, s.cars.len());
    if l == 0 {
        return Ok(vec![ShapeFactor::Tl(TLDiagram::new(k, k, s.pairing.clone(), true)?)]);
    }
    if l == 1 {
        return factor_one_car(s);
    }
    let total = s.pairing.len();
    let (x0, p) = (2 * n * l, 2 * n * l + k);
    if gap_distance(&s.pairing, x0, 0) <= 2 * n {
        // Case 1: an arc between the left corners crossing 2n strands leaves a single car.
        let pieces = cut(&s.pairing, 0, &[Arc { target: x0, required: 2 * n }])?;
        let inner = sector(total, (0, None), (x0, Some((0, 2 * n))));
        let inner = Shape { n, k: n, pairing: sector_pairing(&pieces, &inner)?, cars: s.cars.clone() };
        let rest = sector(total, (x0, Some((0, 2 * n))), (0, None));
        let rest = Shape { n, k, pairing: sector_pairing_rotated(&pieces, &rest, 2 * k)?, cars: vec![usize::MAX] };
        let mut word = Vec::new();
        for f in factor_one_car(&rest)? {
            let f = match f {
                ShapeFactor::Box(b) => ShapeFactor::Box(substitute(&b, 0, &inner)?),
                tl => tl,
            };
            merge_push(&mut word, f)?;
        }
        return Ok(word);
    }
    // Case 2: an arc from some x_i to the right edge crossing k strands splits the train.
    for i in 1..l {
        let xi = 2 * n * (l - i);
        if gap_distance(&s.pairing, xi, p) > k {
            continue;
        }
        let pieces = cut(&s.pairing, xi, &[Arc { target: p, required: k }])?;
        let lower = sector(total, (xi, None), (p, Some((0, k))));
        let lower = Shape { n, k, pairing: sector_pairing(&pieces, &lower)?, cars: s.cars[l - i..].to_vec() };
        let upper = sector(total, (p, Some((0, k))), (xi, None));
        let upper =
            Shape { n, k, pairing: sector_pairing_rotated(&pieces, &upper, k)?, cars: s.cars[..l - i].to_vec() };
        let mut word = Vec::new();
        for f in factor_shape(&lower)?.into_iter().chain(factor_shape(&upper)?) {
            merge_push(&mut word, f)?;
        }
        return Ok(word);
    }
    Err(Error::Stuck("neither case of the tree lemma applies".into()))
}

/// Writes a train in P_k as a product of TL_k diagrams and single n-boxes (each an n-box train
/// with k−n strands added on the right), alternating, bottom factor first.
pub fn factor_train<S: Scalar>(x: &Train<S>) -> Result<Vec<Factor<S>>> {
    if x.k <= x.n {
        return domain(format!("factorisation needs k > n, got k = {} and n = {}", x.k, x.n));
    }
    let shape = Shape { n: x.n, k: x.k, pairing: x.pairing.clone(), cars: (0..x.cars.len()).collect() };
    factor_shape(&shape)?
        .into_iter()
        .map(|f| match f {
            ShapeFactor::Tl(d) => Ok(Factor::Tl(d)),
            ShapeFactor::Box(b) => {
                let cars = b.cars.iter().map(|&i| x.cars[i].clone()).collect();
                Ok(Factor::Box(Train::new(x.n, x.n, cars, b.pairing)?))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeLemmaOutcome {
    Holds,
    Fails,
    HypothesesNotMet(String),
}

/// For points x_0..x_ℓ and p in a tree with d(x_i, x_{i+1}) ≤ 2n and d(x_0, p), d(x_ℓ, p) ≤ k:
/// either d(x_0, x_ℓ) ≤ 2n or some interior d(x_i, p) ≤ k.
pub fn tree_lemma_holds(adj: &[Vec<usize>], xs: &[usize], p: usize, n: usize, k: usize) -> Result<TreeLemmaOutcome> {
    let v = adj.len();
    let edges: usize = adj.iter().map(Vec::len).sum();
    if v == 0 || edges != 2 * (v - 1) || adj.iter().flatten().any(|&u| u >= v) {
        return domain("not a tree");
    }
    if xs.len() < 2 || xs.iter().chain([&p]).any(|&u| u >= v) {
        return domain("need at least two points x_i, all inside the tree");
    }
    let bfs = |s: usize| {
        let mut dist = vec![usize::MAX; v];
        dist[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if dist[b] == usize::MAX {
                    dist[b] = dist[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        dist
    };
    let dists: Vec<Vec<usize>> = xs.iter().map(|&x| bfs(x)).collect();
    if dists[0].contains(&usize::MAX) {
        return domain("not a tree");
    }
    let l = xs.len() - 1;
    if let Some(i) = (0..l).find(|&i| dists[i][xs[i + 1]] > 2 * n) {
        return Ok(TreeLemmaOutcome::HypothesesNotMet(format!("d(x_{i}, x_{}) > 2n", i + 1)));
    }
    if dists[0][p] > k || dists[l][p] > k {
        return Ok(TreeLemmaOutcome::HypothesesNotMet("an end point is farther than k from p".into()));
    }
    let holds = dists[0][xs[l]] <= 2 * n || (1..l).any(|i| dists[i][p] <= k);
    Ok(if holds { TreeLemmaOutcome::Holds } else { TreeLemmaOutcome::Fails })
}

/// A random planar perfect matching on `points` boundary points (cyclic lemma on a shuffled
/// balanced bracket word).
pub fn random_noncrossing<R: Rng>(points: usize, rng: &mut R) -> Vec<usize> {
    assert!(points.is_multiple_of(2), "odd number of boundary points");
    let mut steps: Vec<i32> = (0..points).map(|i| if i < points / 2 { 1 } else { -1 }).collect();
    steps.shuffle(rng);
    let (mut h, mut low, mut start) = (0, 0, 0);
    for (i, s) in steps.iter().enumerate() {
        h += s;
        if h < low {
            low = h;
            start = i + 1;
        }
    }
    let mut pairing = vec![0; points];
    let mut stack = Vec::new();
    for i in 0..points {
        let pos = (start + i) % points;
        if steps[pos] > 0 {
            stack.push(pos);
        } else {
            let q = stack.pop().unwrap();
            pairing[q] = pos;
            pairing[pos] = q;
        }
    }
    pairing
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate_diagrams, jones_wenzl, random_element};
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn delta() -> BigRational {
        BigRational::new(BigInt::from(5), BigInt::from(2))
    }

    fn all_matchings(points: usize) -> Vec<Vec<usize>> {
        fn go(lo: usize, hi: usize) -> Vec<Vec<(usize, usize)>> {
            if lo >= hi {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for j in (lo + 1..hi).step_by(2) {
                for a in go(lo + 1, j) {
                    for b in go(j + 1, hi) {
                        let mut m = vec![(lo, j)];
                        m.extend(&a);
                        m.extend(&b);
                        out.push(m);
                    }
                }
            }
            out
        }
        go(0, points)
            .into_iter()
            .map(|m| {
                let mut p = vec![0; points];
                for (a, b) in m {
                    p[a] = b;
                    p[b] = a;
                }
                p
            })
            .collect()
    }

    #[test]
    fn generator_train_is_its_car() {
        let d = delta();
        let f = jones_wenzl(3, &d).unwrap();
        assert_eq!(Train::generator(f.clone()).unwrap().evaluate().unwrap(), f);
    }

    #[test]
    fn zero_car_train_is_itself() {
        let t: Train<BigRational> = Train::new(2, 3, vec![], enumerate_diagrams(3)[2].pairing().to_vec()).unwrap();
        let w = factor_train(&t).unwrap();
        assert_eq!(w, vec![Factor::Tl(enumerate_diagrams(3)[2].clone())]);
    }

    #[test]
    fn one_car_round_trip_small() {
        let d = delta();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (n, k) in [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)] {
            let car = random_element(n, &d, 4, &mut rng);
            for pairing in all_matchings(2 * n + 2 * k) {
                let t = Train::new(n, k, vec![car.clone()], pairing).unwrap();
                let word = factor_train(&t).unwrap();
                assert_eq!(word_product(&word, k, &d).unwrap(), t.evaluate().unwrap(), "{:?}", t.pairing());
            }
        }
    }

    #[test]
    fn two_car_round_trip() {
        let d = delta();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let cars = vec![random_element(2, &d, 4, &mut rng), random_element(2, &d, 4, &mut rng)];
            let t = Train::new(2, 4, cars, random_noncrossing(16, &mut rng)).unwrap();
            let word = factor_train(&t).unwrap();
            assert_eq!(word_product(&word, 4, &d).unwrap(), t.evaluate().unwrap(), "{:?}", t.pairing());
        }
    }

    #[test]
    fn factorisation_needs_k_above_n() {
        let t = Train::generator(jones_wenzl(2, &delta()).unwrap()).unwrap();
        assert!(factor_train(&t).is_err());
    }

    #[test]
    fn tree_lemma_examples() {
        let path = vec![vec![1], vec![0, 2], vec![1]];
        assert_eq!(tree_lemma_holds(&path, &[1, 1, 1], 1, 1, 1).unwrap(), TreeLemmaOutcome::Holds);
        assert!(matches!(tree_lemma_holds(&path, &[0, 2], 1, 0, 1).unwrap(), TreeLemmaOutcome::HypothesesNotMet(_)));
        assert!(tree_lemma_holds(&[vec![1], vec![0], vec![]], &[0, 1], 0, 1, 1).is_err());
    }

    #[test]
    fn random_matchings_are_planar() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(is_noncrossing_matching(&random_noncrossing(12, &mut rng)));
        }
    }
}
