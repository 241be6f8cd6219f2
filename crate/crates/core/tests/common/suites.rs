//! One randomized trial per invariant family. Each trial returns `Err`
//! with a description of the first violated identity.

use std::collections::HashMap;
use std::sync::Arc;

use laurent_groth::grmod::{self, simple_module};
use laurent_groth::homalg::{
    self, beta_gt, beta_le, composition_multiplicities, composition_multiplicities_with, minimal_resolution,
    multiplicity_terms, ordered_composition_series, Enumeration,
};
use laurent_groth::scalar::{self, Scalar};
use laurent_groth::{ChainComplex, Degree, GradedModule, LaurentSeries, OrderSpec};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::*;

pub type Trial = std::result::Result<(), String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Trial {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn lib<T>(r: laurent_groth::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

/// One variable, two-variable lex, or a graded two-variable matrix order.
pub fn random_order(rng: &mut ChaCha8Rng) -> Arc<OrderSpec> {
    Arc::new(match rng.gen_range(0..3) {
        0 => OrderSpec::lex(1),
        1 => OrderSpec::lex(2),
        _ => OrderSpec::matrix(vec![vec![1, 1], vec![0, 1]]).unwrap(),
    })
}

pub fn random_polynomial_terms(rng: &mut ChaCha8Rng, dim: usize) -> Vec<(Degree, Scalar)> {
    loop {
        let n = rng.gen_range(1..=4);
        let t = random_terms(rng, dim, n, -3, 4);
        if !t.is_empty() {
            return t;
        }
    }
}

/// A polynomial, or a quotient of two polynomials; the terms are returned for polynomials.
pub fn random_series(rng: &mut ChaCha8Rng, order: &Arc<OrderSpec>) -> (LaurentSeries, Option<Vec<(Degree, Scalar)>>) {
    let t = random_polynomial_terms(rng, order.dim());
    let p = polynomial(order, &t);
    if rng.gen_bool(0.6) {
        return (p, Some(t));
    }
    let d = polynomial(order, &random_polynomial_terms(rng, order.dim()));
    (p.mul(&d.invert(64).unwrap()).unwrap(), None)
}

/// Every coefficient of `f` in the box `[lo, hi]^n` matches the table, which is zero elsewhere.
fn matches_table(f: &LaurentSeries, table: &HashMap<Degree, Scalar>, lo: i64, hi: i64) -> Trial {
    let n = f.dim();
    let mut point = vec![lo; n];
    loop {
        let g = Degree::from(point.clone());
        let want = table.get(&g).cloned().unwrap_or_else(Scalar::zero);
        let got = lib(f.coefficient(&g))?;
        ensure(got == want, || format!("coefficient at {g}: {got} versus {want}"))?;
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if point[i] < hi {
                point[i] += 1;
                for x in &mut point[i + 1..] {
                    *x = lo;
                }
                break;
            }
        }
    }
}

/// Associativity, distributivity and commutativity through `height`, plus
/// the schoolbook product when both factors are polynomials.
pub fn ring_axioms(rng: &mut ChaCha8Rng, height: u64) -> Trial {
    let order = random_order(rng);
    let (a, ta) = random_series(rng, &order);
    let (b, tb) = random_series(rng, &order);
    let (c, _) = random_series(rng, &order);
    let ab = lib(a.mul(&b))?;
    let same = |x: &LaurentSeries, y: &LaurentSeries| lib(x.agrees_with(y, height));
    ensure(same(&lib(ab.mul(&c))?, &lib(a.mul(&lib(b.mul(&c))?))?)?, || format!("(ab)c ≠ a(bc) under {order}"))?;
    let left = lib(a.mul(&lib(b.add(&c))?))?;
    let right = lib(ab.add(&lib(a.mul(&c))?))?;
    ensure(same(&left, &right)?, || format!("a(b + c) ≠ ab + ac under {order}"))?;
    ensure(same(&ab, &lib(b.mul(&a))?)?, || format!("ab ≠ ba under {order}"))?;
    if let (Some(ta), Some(tb)) = (ta, tb) {
        matches_table(&ab, &naive_product(&ta, &tb), -7, 9)?;
    }
    Ok(())
}

/// Coefficients of `1/p` for a one-variable polynomial with lowest term at
/// `m`, from the power-series recurrence, at `q^{-m}, …, q^{-m+len-1}`.
fn inverse_oracle(p: &[(Degree, Scalar)], len: usize) -> (i64, Vec<Scalar>) {
    let m = p[0].0[0];
    let mut c = vec![Scalar::zero(); len];
    for (g, x) in p {
        let k = (g[0] - m) as usize;
        if k < len {
            c[k] = x.clone();
        }
    }
    let mut b = vec![Scalar::zero(); len];
    for k in 0..len {
        let mut s = if k == 0 { scalar::one() } else { Scalar::zero() };
        for j in 1..=k {
            s -= &c[j] * &b[k - j];
        }
        b[k] = s / &c[0];
    }
    (-m, b)
}

/// `f·f⁻¹ = 1` through `height`, and the recurrence oracle in one variable.
pub fn inverse_round_trip(rng: &mut ChaCha8Rng, height: u64) -> Trial {
    let order = random_order(rng);
    let (f, terms) = random_series(rng, &order);
    let inv = lib(f.invert(64))?;
    let one = LaurentSeries::one(order.clone());
    ensure(lib(lib(f.mul(&inv))?.agrees_with(&one, height))?, || format!("f·f⁻¹ ≠ 1 under {order}"))?;
    if let (1, Some(t)) = (order.dim(), terms) {
        let (start, coeffs) = inverse_oracle(&t, height as usize + 1);
        for (k, want) in coeffs.iter().enumerate() {
            let g = Degree::from(vec![start + k as i64]);
            let got = lib(inv.coefficient(&g))?;
            ensure(&got == want, || format!("1/p at {g}: {got} versus {want}"))?;
        }
    }
    Ok(())
}

fn random_positive(rng: &mut ChaCha8Rng, order: &OrderSpec) -> Degree {
    loop {
        let v: Vec<i64> = (0..order.dim()).map(|_| rng.gen_range(-3..=4)).collect();
        if order.is_positive(&v) {
            return Degree::from(v);
        }
    }
}

fn random_degree(rng: &mut ChaCha8Rng, dim: usize) -> Degree {
    Degree::from((0..dim).map(|_| rng.gen_range(-4..=6)).collect::<Vec<_>>())
}

/// `g = f + c·x^d + (terms above d)`, so `f − g ∈ V_e` exactly when `e ⪯ d`.
/// Checks that agreement below `e` matches this, and is inherited by every
/// `e′ ⪯ e`.
pub fn neighbourhoods_shrink(rng: &mut ChaCha8Rng) -> Trial {
    let order = random_order(rng);
    let n = order.dim();
    let (f, _) = random_series(rng, &order);
    let d = random_degree(rng, n);
    let mut bump = vec![(d.clone(), scalar::int(rng.gen_range(1..=3)))];
    for _ in 0..rng.gen_range(0..3) {
        bump.push((&d + &random_positive(rng, &order), scalar::int(rng.gen_range(-2..=2))));
    }
    let g = lib(f.add(&polynomial(&order, &bump)))?;
    let e = random_degree(rng, n);
    let e2 = if rng.gen_bool(0.5) { &e - &random_positive(rng, &order) } else { e.clone() };
    let (e, e2) = if order.cmp(&e2, &e).is_le() { (e, e2) } else { (e2, e) };

    // in two variables the support weight need not be monotone for the
    // order, so pass an explicit bound; the difference is a polynomial with
    // lowest term at d, so the height of d suffices
    let bound = lib(f.sub(&g))?.support().height_of(&d).max(0) as u64;
    let check = |e: &Degree| {
        if n == 2 {
            lib(f.equal_up_to_within(&g, e, bound))
        } else {
            lib(f.equal_up_to(&g, e))
        }
    };
    let (at_e, at_e2) = (check(&e)?, check(&e2)?);
    let truth = |e: &Degree| order.cmp(e, &d).is_le();
    ensure(at_e == truth(&e), || format!("agreement below {e} with lead difference at {d} under {order}"))?;
    ensure(at_e2 == truth(&e2), || format!("agreement below {e2} with lead difference at {d} under {order}"))?;
    ensure(!at_e || at_e2, || format!("V_{e} ⊄ V_{e2} under {order}"))
}

/// Inverse Cartan columns equal the alternating classes of the minimal
/// resolutions of the simples, and the Cartan matrix matches path counts.
pub fn cartan_against_resolutions(rng: &mut ChaCha8Rng, max_arrows: usize, height: i64) -> std::result::Result<i64, String> {
    let (v, a) = random_quiver(rng, 3, max_arrows, 3);
    let alg = monomial_algebra(v.clone(), a.clone(), 3, height);
    let cartan = lib(alg.cartan_matrix())?;
    let oracle = monomial_path_counts(&a, v.len(), 3, height);
    for j in 0..v.len() {
        for i in 0..v.len() {
            for k in 0..=height {
                let want = scalar::int(oracle.get(&(i, j, k)).copied().unwrap_or(0) as i64);
                let got = lib(cartan.entry(j, i).coefficient(&Degree::from(vec![k])))?;
                ensure(got == want, || format!("Cartan ({j}, {i}) at q^{k}: {got} versus {want}"))?;
            }
        }
    }
    let inverse = lib(cartan.invert(height as u64))?;
    let mut least = i64::MAX;
    for (i, label) in v.iter().enumerate() {
        let s = lib(simple_module(&alg, i))?;
        let res = lib(minimal_resolution(&s, height as usize + 2))?;
        let h = res.alternating_height();
        least = least.min(h);
        ensure(h >= height, || format!("simple {label}: resolution trusted only through {h}"))?;
        let alt = lib(res.alternating_sum())?;
        let col = lib(inverse.column_vector(alg.order().clone(), label))?;
        ensure(classes_agree_1d(&alt, &col, 0, h), || format!("simple {label}: resolution and inverse Cartan differ"))?;
    }
    Ok(least)
}

fn dims_le(m: &GradedModule, g: &Degree) -> HashMap<Degree, usize> {
    dims_by_degree(&beta_le(m, g))
}

fn dims_gt(m: &GradedModule, g: &Degree) -> HashMap<Degree, usize> {
    dims_by_degree(&beta_gt(m, g))
}

fn add_dims(a: &HashMap<Degree, usize>, b: &HashMap<Degree, usize>) -> HashMap<Degree, usize> {
    let mut out = a.clone();
    for (g, d) in b {
        *out.entry(g.clone()).or_insert(0) += d;
    }
    out.retain(|_, d| *d > 0);
    out
}

/// Graded dimensions of both truncations are additive on `0 → N → M → M/N → 0`
/// at `cuts` sampled degrees, and truncations compose as intervals.
pub fn truncations_are_exact(rng: &mut ChaCha8Rng, cuts: usize) -> Trial {
    let alg = random_algebra(rng, 8);
    let m = random_module(rng, &alg);
    let k = rng.gen_range(1..=2);
    let gens = random_elements(rng, &m, k);
    if gens.is_empty() {
        return Ok(());
    }
    let (n, incl) = lib(homalg::generated_submodule(&m, &gens))?;
    let (q, _) = lib(incl.cokernel())?;
    for _ in 0..cuts {
        let g = Degree::from(vec![rng.gen_range(-2..=9)]);
        ensure(dims_le(&m, &g) == add_dims(&dims_le(&n, &g), &dims_le(&q, &g)), || format!("β_⪯{g} not additive"))?;
        ensure(dims_gt(&m, &g) == add_dims(&dims_gt(&n, &g), &dims_gt(&q, &g)), || format!("β_≻{g} not additive"))?;
        let le = beta_le(&m, &g);
        let gt = beta_gt(&m, &g);
        ensure(le.validate().is_ok() && gt.validate().is_ok(), || format!("truncations at {g} are not modules"))?;

        let h = Degree::from(vec![rng.gen_range(-2..=9)]);
        let (lo, hi) = if g[0] <= h[0] { (&g, &h) } else { (&h, &g) };
        ensure(dims_by_degree(&beta_le(&beta_le(&m, &g), &h)) == dims_le(&m, lo), || format!("β_⪯{g}β_⪯{h} ≠ β_⪯{lo}"))?;
        ensure(dims_by_degree(&beta_gt(&beta_gt(&m, &g), &h)) == dims_gt(&m, hi), || format!("β_≻{g}β_≻{h} ≠ β_≻{hi}"))?;
        let band = dims_by_degree(&beta_le(&beta_gt(&m, &h), &g));
        let mut want = dims_by_degree(&m);
        want.retain(|d, _| h[0] < d[0] && d[0] <= g[0]);
        ensure(band == want, || format!("β_⪯{g}β_≻{h} is not the band ({h}, {g}]"))?;
        let band2 = dims_by_degree(&beta_gt(&beta_le(&m, &g), &h));
        ensure(band2 == want, || format!("β_≻{h}β_⪯{g} is not the band ({h}, {g}]"))?;
    }
    Ok(())
}

/// Both enumeration strategies give the same multiplicities, and the
/// ordered composition series concatenates to them.
pub fn jordan_holder(rng: &mut ChaCha8Rng) -> Trial {
    let alg = random_algebra(rng, 8);
    let m = random_module(rng, &alg);
    let pq = multiplicity_terms(&m, Enumeration::PriorityQueue);
    ensure(pq == multiplicity_terms(&m, Enumeration::BoxScan), || "strategies disagree on terms".into())?;
    let a = lib(composition_multiplicities_with(&m, Enumeration::PriorityQueue))?;
    let b = lib(composition_multiplicities_with(&m, Enumeration::BoxScan))?;
    let full = lib(composition_multiplicities(&m))?;
    let top = m.height();
    ensure(classes_agree_1d(&a, &b, -2, top) && classes_agree_1d(&a, &full, -2, top), || {
        "strategies disagree on classes".into()
    })?;

    let series = ordered_composition_series(&m);
    let order = m.order();
    ensure(series.windows(2).all(|w| order.cmp(&w[0].0, &w[1].0).is_lt()), || "slices out of order".into())?;
    let mut counts: HashMap<(String, Degree), i64> = HashMap::new();
    for (g, slice) in &series {
        for (label, d) in slice {
            *counts.entry((label.clone(), g.clone())).or_insert(0) += *d as i64;
        }
    }
    for label in &full.basis().labels {
        let f = full.get(label);
        for k in -2..=top {
            let g = Degree::from(vec![k]);
            let want = counts.get(&(label.clone(), g.clone())).copied().unwrap_or(0);
            let got = lib(f.coefficient(&g))?;
            ensure(got == scalar::int(want), || format!("[{label}] at {g}: {got} versus {want}"))?;
        }
    }
    let total: usize = pq.iter().map(|(_, _, d)| d).sum();
    ensure(total == m.total_dim(), || "multiplicities do not add up to the dimension".into())
}

/// `M ← P₁ ← P₂` with the second map landing in the kernel of the first:
/// the Euler class equals the alternating component classes. Returns
/// whether the second differential is nonzero.
pub fn three_term_euler(rng: &mut ChaCha8Rng) -> std::result::Result<bool, String> {
    let alg = random_algebra(rng, 7);
    let m = random_module(rng, &alg);
    let k = rng.gen_range(1..=3);
    let gens = random_elements(rng, &m, k);
    if gens.is_empty() {
        return Ok(false);
    }
    let s1: Vec<(usize, Degree)> = gens.iter().map(|(g, v, _)| (*v, g.clone())).collect();
    let im1: Vec<_> = gens.iter().map(|(_, _, x)| x.clone()).collect();
    let p1 = lib(grmod::projective_sum(&alg, &s1, m.height()))?;
    let d1 = lib(homalg::map_from_projectives(&p1, &s1, &im1, &m))?;
    let (ker, incl) = lib(d1.kernel())?;

    // second map: random kernel elements, or the zero map when the kernel vanishes
    let count = rng.gen_range(1..=2);
    let kgens = random_elements(rng, &ker, count);
    let (s2, im2): (Vec<(usize, Degree)>, Vec<Vec<Scalar>>) = if kgens.is_empty() {
        (vec![(0, Degree::from(vec![0]))], vec![vec![Scalar::zero(); p1.dim(&Degree::from(vec![0]), 0)]])
    } else {
        kgens.iter().map(|(g, v, x)| ((*v, g.clone()), incl.map(g, *v).apply(x))).unzip()
    };
    let p2 = lib(grmod::projective_sum(&alg, &s2, p1.height()))?;
    let d2 = lib(homalg::map_from_projectives(&p2, &s2, &im2, &p1))?;
    ensure(lib(d1.compose(&d2))?.is_zero(), || "d² ≠ 0".into())?;
    let nonzero = !d2.is_zero();
    let x = lib(ChainComplex::new(0, vec![m.clone(), p1, p2], vec![d1, d2]))?;
    let e = lib(x.euler_class())?;
    let c = lib(x.component_class())?;
    ensure(classes_agree_1d(&e, &c, -2, m.height()), || "Euler class differs from the component classes".into())?;
    Ok(nonzero)
}

/// Assembled minimal resolutions of the simples have homology only in
/// degree 0, equal to the simple.
pub fn resolution_homology(rng: &mut ChaCha8Rng) -> Trial {
    let alg = random_algebra(rng, 7);
    for v in 0..alg.vertex_count() {
        let s = lib(simple_module(&alg, v))?;
        let res = lib(minimal_resolution(&s, 10))?;
        let h = lib(lib(res.complex())?.homology())?;
        ensure(dims_by_degree(&h[0]) == dims_by_degree(&s), || format!("H0 of the resolution of S{v} is not S{v}"))?;
        ensure(
            h[0].spaces().all(|(g, u, d)| u == v && d == 1 && g.is_zero()),
            || format!("H0 of the resolution of S{v} lives at the wrong vertex"),
        )?;
        ensure(h[1..].iter().all(GradedModule::is_zero), || format!("higher homology for S{v}"))?;
    }
    Ok(())
}
