//! Seeded random inputs and brute-force oracles shared by integration tests.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use laurent_groth::grmod::{self, expand_algebra, Arrow, Relation};
use laurent_groth::homalg;
use laurent_groth::scalar::{self, Scalar};
use laurent_groth::{AlgebraTruncation, Degree, GradedModule, LaurentSeries, OrderSpec, QuiverPresentation};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random quiver on one variable: up to `max_vertices` vertices and
/// `max_arrows` arrows of degree `1..=max_degree`.
pub fn random_quiver(rng: &mut ChaCha8Rng, max_vertices: usize, max_arrows: usize, max_degree: i64) -> (Vec<String>, Vec<Arrow>) {
    let nv = rng.gen_range(1..=max_vertices);
    let na = rng.gen_range(1..=max_arrows);
    let vertices = (1..=nv).map(|i| i.to_string()).collect();
    let arrows = (0..na)
        .map(|k| Arrow {
            name: format!("a{k}"),
            src: rng.gen_range(0..nv),
            tgt: rng.gen_range(0..nv),
            degree: Degree::from(vec![rng.gen_range(1..=max_degree)]),
        })
        .collect();
    (vertices, arrows)
}

/// Every composable path of exactly `len` arrows, in composition order.
pub fn paths_of_length(arrows: &[Arrow], len: usize) -> Vec<Vec<usize>> {
    let mut paths: Vec<Vec<usize>> = (0..arrows.len()).map(|a| vec![a]).collect();
    for _ in 1..len {
        let mut next = Vec::new();
        for p in &paths {
            // prepend an arrow leaving the target of the path
            let tgt = arrows[p[0]].tgt;
            for (a, arrow) in arrows.iter().enumerate() {
                if arrow.src == tgt {
                    let mut q = vec![a];
                    q.extend(p);
                    next.push(q);
                }
            }
        }
        paths = next;
    }
    paths
}

/// Quiver algebra whose relations are all paths of length `len`.
pub fn monomial_algebra(vertices: Vec<String>, arrows: Vec<Arrow>, len: usize, height: i64) -> Arc<AlgebraTruncation> {
    let relations =
        paths_of_length(&arrows, len).into_iter().map(|p| Relation { terms: vec![(p, scalar::one())] }).collect();
    let p = QuiverPresentation::new(Arc::new(OrderSpec::lex(1)), height, vertices, arrows, relations).unwrap();
    expand_algebra(p).unwrap()
}

/// At most 3 vertices, at most 4 arrows of degree at most 3, relations all paths of length 3.
pub fn random_monomial_algebra(rng: &mut ChaCha8Rng, height: i64) -> Arc<AlgebraTruncation> {
    let (v, a) = random_quiver(rng, 3, 4, 3);
    monomial_algebra(v, a, 3, height)
}

/// Random algebra for module-level suites: monomial relations of length 2
/// to 4, or a commutative polynomial ring modulo a power of its generators.
pub fn random_algebra(rng: &mut ChaCha8Rng, height: i64) -> Arc<AlgebraTruncation> {
    if rng.gen_bool(0.25) {
        let n = rng.gen_range(2..=4);
        let dx = rng.gen_range(1..=2);
        let dy = rng.gen_range(1..=3);
        let mut rels = vec![vec![(vec!["x", "y"], scalar::one()), (vec!["y", "x"], scalar::int(-1))]];
        rels.push(vec![(vec!["x"; n], scalar::one())]);
        rels.push(vec![(vec!["y"; n], scalar::one())]);
        let p = QuiverPresentation::from_labels(
            Arc::new(OrderSpec::lex(1)),
            height,
            &["1"],
            &[("x", "1", "1", vec![dx]), ("y", "1", "1", vec![dy])],
            &rels,
        )
        .unwrap();
        return expand_algebra(p).unwrap();
    }
    let (v, a) = random_quiver(rng, 3, 4, 2);
    let len = rng.gen_range(2..=4);
    monomial_algebra(v, a, len, height)
}

/// Brute-force Cartan oracle for monomial algebras: counts composable paths
/// shorter than `len` by source, target and degree, within `height`.
pub fn monomial_path_counts(arrows: &[Arrow], vertices: usize, len: usize, height: i64) -> HashMap<(usize, usize, i64), usize> {
    let mut out = HashMap::new();
    for v in 0..vertices {
        out.insert((v, v, 0), 1);
    }
    for l in 1..len {
        for p in paths_of_length(arrows, l) {
            let deg: i64 = p.iter().map(|&a| arrows[a].degree[0]).sum();
            if deg <= height {
                let src = arrows[*p.last().unwrap()].src;
                let tgt = arrows[p[0]].tgt;
                *out.entry((src, tgt, deg)).or_insert(0) += 1;
            }
        }
    }
    out
}

pub fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..d).map(|_| scalar::int(rng.gen_range(-2..=2))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// `k` random nonzero elements of homogeneous spaces of `m`.
pub fn random_elements(rng: &mut ChaCha8Rng, m: &GradedModule, k: usize) -> Vec<(Degree, usize, Vec<Scalar>)> {
    let spaces: Vec<(Degree, usize, usize)> = m.spaces().map(|(g, v, d)| (g.clone(), v, d)).collect();
    if spaces.is_empty() {
        return Vec::new();
    }
    (0..k)
        .map(|_| {
            let (g, v, d) = spaces[rng.gen_range(0..spaces.len())].clone();
            (g, v, random_vector(rng, d))
        })
        .collect()
}

/// Random sum of shifted projectives `(vertex, shift)`.
pub fn random_summands(rng: &mut ChaCha8Rng, alg: &AlgebraTruncation, max: usize, shifts: std::ops::RangeInclusive<i64>) -> Vec<(usize, Degree)> {
    let k = rng.gen_range(1..=max);
    (0..k)
        .map(|_| (rng.gen_range(0..alg.vertex_count()), Degree::from(vec![rng.gen_range(shifts.clone())])))
        .collect()
}

/// A random module: a sum of shifted projectives modulo a random submodule.
pub fn random_module(rng: &mut ChaCha8Rng, alg: &Arc<AlgebraTruncation>) -> GradedModule {
    let summands = random_summands(rng, alg, 3, -1..=2);
    let p = grmod::projective_sum(alg, &summands, alg.height()).unwrap();
    let k = rng.gen_range(0..=2);
    let gens = random_elements(rng, &p, k);
    if gens.is_empty() {
        return p;
    }
    let (_, incl) = homalg::generated_submodule(&p, &gens).unwrap();
    incl.cokernel().unwrap().0
}

/// Total dimension per degree.
pub fn dims_by_degree(m: &GradedModule) -> HashMap<Degree, usize> {
    let mut out = HashMap::new();
    for (g, _, d) in m.spaces() {
        *out.entry(g.clone()).or_insert(0) += d;
    }
    out
}

/// A random polynomial with `terms` terms and exponents in `lo..=hi` per coordinate.
pub fn random_terms(rng: &mut ChaCha8Rng, dim: usize, terms: usize, lo: i64, hi: i64) -> Vec<(Degree, Scalar)> {
    let mut out: HashMap<Degree, Scalar> = HashMap::new();
    for _ in 0..terms {
        let g = Degree::from((0..dim).map(|_| rng.gen_range(lo..=hi)).collect::<Vec<_>>());
        let c = scalar::int(rng.gen_range(-3..=3));
        *out.entry(g).or_insert_with(Scalar::zero) += c;
    }
    let mut v: Vec<(Degree, Scalar)> = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

pub fn polynomial(order: &Arc<OrderSpec>, terms: &[(Degree, Scalar)]) -> LaurentSeries {
    LaurentSeries::polynomial(order.clone(), terms.to_vec()).unwrap()
}

/// Schoolbook product of finitely supported coefficient tables.
pub fn naive_product(a: &[(Degree, Scalar)], b: &[(Degree, Scalar)]) -> HashMap<Degree, Scalar> {
    let mut out: HashMap<Degree, Scalar> = HashMap::new();
    for (g, x) in a {
        for (h, y) in b {
            *out.entry(g + h).or_insert_with(Scalar::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Coefficientwise equality of two one-variable classes at degrees `lo..=hi`.
pub fn classes_agree_1d(a: &laurent_groth::K0Vector, b: &laurent_groth::K0Vector, lo: i64, hi: i64) -> bool {
    a.basis() == b.basis()
        && a.basis().labels.iter().all(|l| {
            let (f, g) = (a.get(l), b.get(l));
            (lo..=hi).all(|k| {
                let d = Degree::from(vec![k]);
                f.coefficient(&d).unwrap() == g.coefficient(&d).unwrap()
            })
        })
}

pub mod suites;
