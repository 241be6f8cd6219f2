//! End-to-end consistency checks on the truncated polynomial algebras
//! `k[x]/(x^N)` with `deg x = 2`, and the two-variable fraction
//! `(1 − λ²)/(1 − q²)`.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grmod::{expand_algebra, simple_module, AlgebraTruncation, QuiverPresentation};
use crate::homalg::minimal_resolution;
use crate::order::{Degree, OrderSpec};
use crate::scalar::{self, Scalar};
use crate::series::LaurentSeries;

/// `k[x]/(x^N)` with `deg x = 2`, expanded through `height`.
pub fn truncated_polynomial_algebra(n: usize, height: i64) -> Result<Arc<AlgebraTruncation>> {
    if n == 0 {
        return Err(Error::Presentation("the nilpotency index must be positive".into()));
    }
    let relation = vec![(vec!["x"; n], scalar::one())];
    let p = QuiverPresentation::from_labels(
        Arc::new(OrderSpec::lex(1)),
        height,
        &["1"],
        &[("x", "1", "1", vec![2])],
        &[relation],
    )?;
    expand_algebra(p)
}

/// Outcome of comparing the two routes to `[S]` in terms of `[P]`.
#[derive(Clone, Debug)]
pub struct ReciprocalCheck {
    pub n: usize,
    pub height: u64,
    /// Inverse of the Cartan matrix `1 + q² + … + q^{2N−2}`.
    pub series_route: Vec<(Degree, Scalar)>,
    /// `Σ_k (−1)^k [Q_k]` from the minimal resolution of the simple.
    pub resolution_route: Vec<(Degree, Scalar)>,
    pub resolution_length: usize,
    pub agree: bool,
}

/// Computes both routes through `height` and compares them coefficientwise.
pub fn reciprocal_check(n: usize, height: u64, probe: u64) -> Result<ReciprocalCheck> {
    let h = i64::try_from(height).map_err(|_| Error::Presentation("height too large".into()))?;
    let alg = truncated_polynomial_algebra(n, h)?;
    let cartan = alg.cartan_matrix()?;
    let inverse = cartan.entry(0, 0).invert(probe)?;
    let series_route = coefficients(&inverse, h)?;

    let s = simple_module(&alg, 0)?;
    // every step raises the least degree by at least 2
    let res = minimal_resolution(&s, (height as usize) / 2 + 1)?;
    if res.trusted_height < h {
        return Err(Error::TruncationExhausted { step: res.classes.len() });
    }
    let alt = res.alternating_sum()?.get("1");
    let resolution_route = coefficients(&alt, h)?;
    let agree = series_route == resolution_route;
    Ok(ReciprocalCheck { n, height, series_route, resolution_route, resolution_length: res.classes.len(), agree })
}

/// Nonzero coefficients at `q^0, …, q^height`, in order.
fn coefficients(f: &LaurentSeries, height: i64) -> Result<Vec<(Degree, Scalar)>> {
    let mut out = Vec::new();
    for k in 0..=height {
        let g = Degree::from(vec![k]);
        let c = f.coefficient(&g)?;
        if !c.is_zero() {
            out.push((g, c));
        }
    }
    Ok(out)
}

/// `(1 − λ²)/(1 − q²)` in `Z((q, λ))` under lex with `q` first.
pub fn lambda_fraction(probe: u64) -> Result<LaurentSeries> {
    let order = Arc::new(OrderSpec::lex(2));
    let num = LaurentSeries::polynomial(
        order.clone(),
        vec![(Degree::from(vec![0, 0]), scalar::one()), (Degree::from(vec![0, 2]), scalar::int(-1))],
    )?;
    let den = LaurentSeries::polynomial(
        order,
        vec![(Degree::from(vec![0, 0]), scalar::one()), (Degree::from(vec![2, 0]), scalar::int(-1))],
    )?;
    num.mul(&den.invert(probe)?)
}

/// Every exponent pair `(a, b)` with `a, b ≥ 0` and `a + b ≤ height`, with its
/// coefficient, in ≺-ascending order.
pub fn lambda_table(height: u64) -> Result<Vec<(Degree, Scalar)>> {
    let f = lambda_fraction(2 * height + 2)?;
    let h = height as i64;
    let mut out = Vec::new();
    for a in 0..=h {
        for b in 0..=h - a {
            let g = Degree::from(vec![a, b]);
            let c = f.coefficient(&g)?;
            out.push((g, c));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_routes_agree() {
        for n in [2, 3, 5] {
            let r = reciprocal_check(n, 24, 64).unwrap();
            assert!(r.agree, "N = {n}");
        }
        let r = reciprocal_check(3, 14, 64).unwrap();
        let degrees: Vec<i64> = r.series_route.iter().map(|(g, _)| g[0]).collect();
        assert_eq!(degrees, vec![0, 2, 6, 8, 12, 14]);
    }

    #[test]
    fn lambda_pattern() {
        for (g, c) in lambda_table(10).unwrap() {
            let expect = match (g[0] % 2, g[1]) {
                (0, 0) => 1,
                (0, 2) => -1,
                _ => 0,
            };
            assert_eq!(c, scalar::int(expect), "{g}");
        }
    }
}
