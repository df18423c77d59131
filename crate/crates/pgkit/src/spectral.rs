//! Graph norms, Frobenius-Perron weights, exact characteristic polynomials and ℓ² certificates
//! for cores with infinite rays attached.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::graph_core::{BipartiteGraph, Vertex};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Largest graph for which the exact characteristic-polynomial oracle is offered.
pub const EXACT_VERTEX_LIMIT: usize = 12;

/// Positive eigenvector, normalized to 1 at ⋆, indexed `weights[depth][index]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    pub weights: Vec<Vec<f64>>,
    pub eigenvalue: f64,
}

impl WeightVector {
    pub fn get(&self, v: Vertex) -> Option<f64> {
        self.weights.get(v.0).and_then(|d| d.get(v.1)).copied()
    }
}

/// Top eigenpair of a symmetric non-negative matrix given by neighbour lists, by power iteration
/// on A + I from the all-ones vector. The shift separates λ_max from −λ_max on bipartite graphs.
fn top_eigenpair(nbrs: &[Vec<(usize, f64)>], diag: &[f64], tol: f64) -> Result<(f64, Vec<f64>)> {
    let n = nbrs.len();
    let apply = |v: &[f64], out: &mut [f64]| {
        for i in 0..n {
            out[i] = diag[i] * v[i] + nbrs[i].iter().map(|&(j, m)| m * v[j]).sum::<f64>();
        }
    };
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut av = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        apply(&v, &mut av);
        let lambda: f64 = av.iter().zip(&v).map(|(a, b)| a * b).sum();
        residual = av.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
        if residual < tol {
            return Ok((lambda, v));
        }
        for (x, a) in v.iter_mut().zip(&av) {
            *x += a;
        }
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= s);
    }
    Err(Error::Numeric { msg: "power iteration did not converge".into(), residual })
}

fn float_neighbours(g: &BipartiteGraph) -> Vec<Vec<(usize, f64)>> {
    g.neighbour_lists().into_iter().map(|l| l.into_iter().map(|(j, m)| (j, f64::from(m))).collect()).collect()
}

/// Largest adjacency eigenvalue (the operator norm).
pub fn graph_norm(g: &BipartiteGraph, tol: f64) -> Result<f64> {
    if tol <= 0.0 {
        return domain("tolerance must be positive");
    }
    let nbrs = float_neighbours(g);
    let (lambda, _) = top_eigenpair(&nbrs, &vec![0.0; nbrs.len()], tol)?;
    Ok(lambda)
}

pub fn fp_weights(g: &BipartiteGraph, tol: f64) -> Result<WeightVector> {
    if tol <= 0.0 {
        return domain("tolerance must be positive");
    }
    let nbrs = float_neighbours(g);
    // The eigenvector error is governed by the residual, so iterate below the requested tolerance.
    let (lambda, v) = top_eigenpair(&nbrs, &vec![0.0; nbrs.len()], tol * 1e-2)?;
    let base = v[0];
    let mut weights = Vec::with_capacity(g.depth_sizes().len());
    let mut k = 0;
    for &s in g.depth_sizes() {
        weights.push(v[k..k + s].iter().map(|x| x / base).collect());
        k += s;
    }
    Ok(WeightVector { weights, eigenvalue: lambda })
}

/// Per-vertex residual λ·w(v) − Σ mult·w(neighbour), in depth-major order.
pub fn eigen_residuals(g: &BipartiteGraph, w: &WeightVector, eigenvalue: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(g.num_vertices());
    for v in g.vertices() {
        let wv = w.get(v).ok_or_else(|| Error::Domain(format!("missing weight for {v:?}")))?;
        let mut s = 0.0;
        for &(j, m) in &g.children(v) {
            s += f64::from(m) * w.get((v.0 + 1, j)).ok_or_else(|| Error::Domain("missing weight".into()))?;
        }
        for &(i, m) in &g.parents(v) {
            s += f64::from(m) * w.get((v.0 - 1, i)).ok_or_else(|| Error::Domain("missing weight".into()))?;
        }
        out.push(eigenvalue * wv - s);
    }
    Ok(out)
}

pub fn verify_eigenvector(g: &BipartiteGraph, w: &WeightVector, eigenvalue: f64, tol: f64) -> Result<bool> {
    let res = eigen_residuals(g, w, eigenvalue)?;
    let positive = g.vertices().all(|v| w.get(v).is_some_and(|x| x > 0.0));
    Ok(positive && res.iter().all(|r| r.abs() <= tol))
}

/// Characteristic polynomial det(xI − A), coefficients from x^0 upward, by Faddeev-LeVerrier.
pub fn char_poly(g: &BipartiteGraph) -> Vec<BigInt> {
    let a: Vec<Vec<BigRational>> = g
        .adjacency_matrix()
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let n = a.len();
    let matmul = |x: &Vec<Vec<BigRational>>, y: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &x[i][k] * &y[k][j])).collect())
            .collect()
    };
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I, c_{n−k} = −tr(A·M_k)/k
        let mut next = matmul(&a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = matmul(&a, &m);
        let tr = (0..n).fold(BigRational::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    coeffs.into_iter().map(|c| c.to_integer()).collect()
}

fn poly_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn poly_trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        r.pop();
        r = poly_trim(r);
    }
    r
}

fn sign_changes(seq: &[Vec<BigRational>], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = poly_eval(p, x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Largest real root of an integer polynomial, isolated by a Sturm sequence and refined by
/// exact rational bisection to width `tol`.
pub fn largest_real_root(p: &[BigInt], tol: f64) -> Result<f64> {
    let p: Vec<BigRational> = poly_trim(p.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    if p.len() < 2 {
        return domain("polynomial has no roots");
    }
    // Work with the square-free part so that repeated eigenvalues do not break the Sturm count.
    let dp: Vec<BigRational> =
        p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect();
    let mut a = p.clone();
    let mut b = dp.clone();
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    let g = a;
    let sf = if g.len() > 1 { poly_div(&p, &g) } else { p.clone() };
    let mut seq = vec![
        sf.clone(),
        poly_trim(sf.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect()),
    ];
    while seq.last().unwrap().len() > 1 {
        let n = seq.len();
        let r = poly_rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    // Cauchy bound on root magnitudes.
    let lead = sf.last().unwrap().abs();
    let bound =
        sf[..sf.len() - 1].iter().map(|c| c.abs() / &lead).fold(BigRational::zero(), |m, c| if c > m { c } else { m })
            + BigRational::one();
    let mut hi = bound.clone();
    let mut lo = -bound;
    if sign_changes(&seq, &lo) == sign_changes(&seq, &hi) {
        return domain("polynomial has no real roots");
    }
    let tol_q = BigRational::new(BigInt::one(), BigInt::from(((1.0 / tol).min(1e18)) as u64));
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > tol_q {
        let mid = (&lo + &hi) / &two;
        // Roots in (mid, hi] exist iff the counts differ.
        if sign_changes(&seq, &mid) > sign_changes(&seq, &hi) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(((lo + hi) / two).to_f64().unwrap_or(f64::NAN))
}

fn poly_div(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); a.len() - db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap() / b.last().unwrap();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        r = poly_trim(r);
    }
    poly_trim(q)
}

/// Norm from the exact characteristic polynomial; offered for graphs of at most
/// [`EXACT_VERTEX_LIMIT`] vertices.
pub fn exact_norm(g: &BipartiteGraph, tol: f64) -> Result<f64> {
    if g.num_vertices() > EXACT_VERTEX_LIMIT {
        return domain(format!("exact oracle limited to {EXACT_VERTEX_LIMIT} vertices"));
    }
    largest_real_root(&char_poly(g), tol)
}

/// A finite core with infinite simple rays attached at some of its vertices.
#[derive(Clone, Debug)]
pub struct RayFamily {
    pub core: BipartiteGraph,
    pub ray_attachments: Vec<(Vertex, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RayNorm {
    /// Strictly positive ℓ² eigenvector with ray weights decaying like t^-k, t > 1.
    L2 { norm: f64, t: f64, core_weights: WeightVector },
    /// No t > 1 exists: the norm is 2 and the eigenvector is not ℓ².
    NotL2,
}

impl RayFamily {
    pub fn new(core: BipartiteGraph, ray_attachments: Vec<(Vertex, usize)>) -> Result<Self> {
        if ray_attachments.is_empty() || ray_attachments.iter().any(|&(_, r)| r == 0) {
            return domain("a ray family needs at least one ray at each listed vertex");
        }
        if ray_attachments.iter().any(|&(v, _)| !core.contains(v)) {
            return domain("ray attached at a vertex outside the core");
        }
        Ok(RayFamily { core, ray_attachments })
    }

    fn ray_count(&self, v: Vertex) -> usize {
        self.ray_attachments.iter().filter(|(u, _)| *u == v).map(|&(_, r)| r).sum()
    }

    /// The finite graph with every ray cut to `length` vertices, graded from the core's ⋆.
    pub fn truncation(&self, length: usize) -> Result<BipartiteGraph> {
        let mut edges = Vec::new();
        for u in self.core.vertices() {
            for (j, m) in self.core.children(u) {
                edges.push((self.core.flat_index(u), self.core.flat_index((u.0 + 1, j)), m));
            }
        }
        let mut next = self.core.num_vertices();
        for &(v, r) in &self.ray_attachments {
            for _ in 0..r {
                let mut prev = self.core.flat_index(v);
                for _ in 0..length {
                    edges.push((prev, next, 1));
                    prev = next;
                    next += 1;
                }
            }
        }
        Ok(BipartiteGraph::from_edges(next, &edges, 0)?.0)
    }
}

/// Norm of a core with infinite rays. Solves the core eigen-equations with each ray contributing
/// r·w(v)/t, where λ = t + 1/t, by bisection on λ: the top eigenvalue of A_core + diag(r/t) minus
/// λ is strictly decreasing in λ. Also checks that truncation norms increase toward the answer.
pub fn ray_family_norm(f: &RayFamily, tol: f64) -> Result<RayNorm> {
    let nbrs = float_neighbours(&f.core);
    let rays: Vec<f64> = f.core.vertices().map(|v| f.ray_count(v) as f64).collect();
    let inner_tol = (tol * 1e-3).max(1e-14);
    let excess = |lambda: f64| -> Result<(f64, Vec<f64>)> {
        let t = (lambda + (lambda * lambda - 4.0).max(0.0).sqrt()) / 2.0;
        let diag: Vec<f64> = rays.iter().map(|r| r / t).collect();
        let (mu, v) = top_eigenpair(&nbrs, &diag, inner_tol)?;
        Ok((mu - lambda, v))
    };
    if excess(2.0)?.0 <= inner_tol {
        return Ok(RayNorm::NotL2);
    }
    let max_valence =
        f.core.vertices().map(|v| f64::from(f.core.valence(v)) + f.ray_count(v) as f64).fold(2.0, f64::max);
    let (mut lo, mut hi) = (2.0, max_valence + 1.0);
    while hi - lo > tol * 1e-2 {
        let mid = 0.5 * (lo + hi);
        if excess(mid)?.0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let t = (lambda + (lambda * lambda - 4.0).sqrt()) / 2.0;
    if t <= 1.0 {
        return Ok(RayNorm::NotL2);
    }
    let (_, v) = excess(lambda)?;
    let mut weights = Vec::new();
    let mut k = 0;
    for &s in f.core.depth_sizes() {
        weights.push(v[k..k + s].iter().map(|x| x / v[0]).collect());
        k += s;
    }
    let mut prev = 0.0;
    for len in [1, 2, 4, 8, 16, 32] {
        let n = graph_norm(&f.truncation(len)?, DEFAULT_TOL)?;
        if n + 1e-9 < prev || n > lambda + 1e-7 {
            return Err(Error::Numeric {
                msg: format!("truncation norm {n} at length {len} is not monotone below {lambda}"),
                residual: (n - lambda).abs(),
            });
        }
        prev = n;
    }
    Ok(RayNorm::L2 { norm: lambda, t, core_weights: WeightVector { weights, eigenvalue: lambda } })
}

/// Element a + b√d of a real quadratic field, for exact eigenvector certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: BigRational,
    pub b: BigRational,
    pub d: i64,
}

impl Surd {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Self {
        Surd { a, b, d }
    }

    pub fn rational(a: BigRational, d: i64) -> Self {
        Surd { a, b: BigRational::zero(), d }
    }

    pub fn add(&self, o: &Surd) -> Surd {
        Surd { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d }
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        Surd { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d }
    }

    pub fn mul(&self, o: &Surd) -> Surd {
        let d = BigRational::from_integer(BigInt::from(self.d));
        Surd { a: &self.a * &o.a + d * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a, d: self.d }
    }

    pub fn scale(&self, c: &BigRational) -> Surd {
        Surd { a: &self.a * c, b: &self.b * c, d: self.d }
    }

    pub fn inv(&self) -> Option<Surd> {
        let d = BigRational::from_integer(BigInt::from(self.d));
        let norm = &self.a * &self.a - d * &self.b * &self.b;
        if norm.is_zero() {
            return None;
        }
        Some(Surd { a: &self.a / &norm, b: -&self.b / &norm, d: self.d })
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

/// Exact check that the geometric weights w(v)·t^-k on the rays, together with exact core weights,
/// satisfy every eigen-equation with eigenvalue t + 1/t on rays of the given length, excluding the
/// ray ends (the truncation frontier). Returns the list of failing vertices, in (core flat index or
/// ray id, position) form; empty means certified.
pub fn certify_ray_weights(f: &RayFamily, t: &Surd, core_weights: &[Surd], ray_length: usize) -> Result<Vec<String>> {
    if core_weights.len() != f.core.num_vertices() {
        return domain("one exact weight per core vertex required");
    }
    let tinv = t.inv().ok_or_else(|| Error::Domain("t must be nonzero".into()))?;
    let lambda = t.add(&tinv);
    let mut failures = Vec::new();
    for v in f.core.vertices() {
        let i = f.core.flat_index(v);
        let mut s = Surd::rational(BigRational::zero(), t.d);
        for (j, m) in f.core.children(v) {
            s = s.add(&core_weights[f.core.flat_index((v.0 + 1, j))].scale(&BigRational::from_integer(m.into())));
        }
        for (j, m) in f.core.parents(v) {
            s = s.add(&core_weights[f.core.flat_index((v.0 - 1, j))].scale(&BigRational::from_integer(m.into())));
        }
        let r = f.ray_count(v);
        s = s.add(&core_weights[i].mul(&tinv).scale(&BigRational::from_integer(BigInt::from(r))));
        if !lambda.mul(&core_weights[i]).sub(&s).is_zero() {
            failures.push(format!("core {v:?}"));
        }
    }
    for (ray, &(v, r)) in f.ray_attachments.iter().enumerate() {
        if r == 0 {
            continue;
        }
        let w0 = &core_weights[f.core.flat_index(v)];
        // weights along the ray: w0·t^-k, k = 0 at the core vertex
        let mut prev = w0.clone();
        let mut cur = w0.mul(&tinv);
        for k in 1..ray_length {
            let next = cur.mul(&tinv);
            if !lambda.mul(&cur).sub(&prev.add(&next)).is_zero() {
                failures.push(format!("ray {ray} vertex {k}"));
            }
            prev = cur;
            cur = next;
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_codec::parse;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn path_norms() {
        assert!((graph_norm(&BipartiteGraph::path(2), 1e-12).unwrap() - 1.0).abs() < 1e-10);
        let a5 = graph_norm(&BipartiteGraph::path(5), 1e-12).unwrap();
        assert!((a5 - 3f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn fp_weights_of_a3() {
        let w = fp_weights(&BipartiteGraph::path(3), 1e-12).unwrap();
        assert!((w.eigenvalue - 2f64.sqrt()).abs() < 1e-10);
        assert!((w.get((1, 0)).unwrap() - 2f64.sqrt()).abs() < 1e-9);
        assert!((w.get((2, 0)).unwrap() - 1.0).abs() < 1e-9);
        assert!(verify_eigenvector(&BipartiteGraph::path(3), &w, w.eigenvalue, 1e-9).unwrap());
        let ones = WeightVector { weights: vec![vec![1.0]; 3], eigenvalue: 2f64.sqrt() };
        assert!(!verify_eigenvector(&BipartiteGraph::path(3), &ones, 2f64.sqrt(), 1e-9).unwrap());
        let short = WeightVector { weights: vec![vec![1.0]; 2], eigenvalue: 1.0 };
        assert!(verify_eigenvector(&BipartiteGraph::path(3), &short, 1.0, 1e-9).is_err());
    }

    #[test]
    fn char_poly_of_paths() {
        // det(xI − A(A_3)) = x^3 − 2x
        let p = char_poly(&BipartiteGraph::path(3));
        assert_eq!(p, vec![0, -2, 0, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
        let n = exact_norm(&BipartiteGraph::path(5), 1e-12).unwrap();
        assert!((n - 3f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn haagerup_norm_matches_exact_oracle() {
        let h = parse(crate::catalog::HAAGERUP.0).unwrap();
        let expect = (5.0 + 13f64.sqrt()) / 2.0;
        let e = exact_norm(&h, 1e-13).unwrap();
        assert!((e * e - expect).abs() < 1e-10);
        let p = graph_norm(&h, 1e-12).unwrap();
        assert!((p * p - expect).abs() < 1e-9);
    }

    #[test]
    fn ray_family_examples() {
        let star = RayFamily::new(BipartiteGraph::path(1), vec![((0, 0), 3)]).unwrap();
        match ray_family_norm(&star, 1e-12).unwrap() {
            RayNorm::L2 { norm, t, .. } => {
                assert!((norm - 4.5f64.sqrt()).abs() < 1e-9);
                assert!((t - 2f64.sqrt()).abs() < 1e-9);
            }
            RayNorm::NotL2 => panic!("expected an l2 eigenvector"),
        }
        let bridge = RayFamily::new(BipartiteGraph::path(2), vec![((0, 0), 2), ((1, 0), 2)]).unwrap();
        match ray_family_norm(&bridge, 1e-12).unwrap() {
            RayNorm::L2 { norm, t, .. } => {
                assert!((norm - 5f64.sqrt()).abs() < 1e-9);
                assert!((t - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
            }
            RayNorm::NotL2 => panic!("expected an l2 eigenvector"),
        }
        let line = RayFamily::new(BipartiteGraph::path(1), vec![((0, 0), 2)]).unwrap();
        assert_eq!(ray_family_norm(&line, 1e-12).unwrap(), RayNorm::NotL2);
    }

    #[test]
    fn exact_certificate_for_three_rays() {
        let star = RayFamily::new(BipartiteGraph::path(1), vec![((0, 0), 3)]).unwrap();
        let t = Surd::new(rat(0, 1), rat(1, 1), 2);
        let fails = certify_ray_weights(&star, &t, &[Surd::rational(rat(1, 1), 2)], 60).unwrap();
        assert!(fails.is_empty(), "{fails:?}");
        let wrong = Surd::new(rat(3, 2), rat(0, 1), 2);
        let fails = certify_ray_weights(&star, &wrong, &[Surd::rational(rat(1, 1), 2)], 5).unwrap();
        assert_eq!(fails, vec!["core (0, 0)".to_string()]);
    }
}
