//! Additive total orders on the lattice Zⁿ.
//!
//! An order is either lexicographic or given by an invertible integer matrix
//! `R`, in which case `a ≺ b` iff `R·a <lex R·b`. Both are additive: comparing
//! `a + c` with `b + c` gives the same answer as comparing `a` with `b`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// A lattice point of Zⁿ.
///
/// The derived `Ord` is plain coordinate order, used only for deterministic
/// map keys. Use [`OrderSpec::compare`] for the order ≺.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(Vec<i64>);

impl Degree {
    pub fn new(coords: Vec<i64>) -> Self {
        Degree(coords)
    }

    pub fn zero(n: usize) -> Self {
        Degree(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn dot(&self, w: &[i64]) -> i64 {
        self.0.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, k: i64) -> Degree {
        Degree(self.0.iter().map(|c| c * k).collect())
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }
}

impl From<Vec<i64>> for Degree {
    fn from(v: Vec<i64>) -> Self {
        Degree(v)
    }
}

impl<const N: usize> From<[i64; N]> for Degree {
    fn from(v: [i64; N]) -> Self {
        Degree(v.to_vec())
    }
}

impl Deref for Degree {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Add for &Degree {
    type Output = Degree;
    fn add(self, rhs: &Degree) -> Degree {
        debug_assert_eq!(self.dim(), rhs.dim());
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Degree {
    type Output = Degree;
    fn sub(self, rhs: &Degree) -> Degree {
        debug_assert_eq!(self.dim(), rhs.dim());
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree(self.0.iter().map(|a| -a).collect())
    }
}

pub const DEFAULT_WEIGHT_BUDGET: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    Matrix(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderSpec {
    dim: usize,
    kind: OrderKind,
}

impl OrderSpec {
    pub fn lex(dim: usize) -> Self {
        OrderSpec { dim, kind: OrderKind::Lex }
    }

    /// Matrix order; the rows must be square and linearly independent over Q.
    pub fn matrix(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidOrder("empty order matrix".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidOrder(format!(
                "order matrix must be square: row of length {} in {n} rows",
                bad.len()
            )));
        }
        if Matrix::from_i64(&rows).rank() != n {
            return Err(Error::InvalidOrder("order matrix rows are linearly dependent".into()));
        }
        Ok(OrderSpec { dim: n, kind: OrderKind::Matrix(rows) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    /// Rows of the order matrix; the identity for lex.
    pub fn rows(&self) -> Vec<Vec<i64>> {
        match &self.kind {
            OrderKind::Lex => (0..self.dim)
                .map(|i| (0..self.dim).map(|j| i64::from(i == j)).collect())
                .collect(),
            OrderKind::Matrix(rows) => rows.clone(),
        }
    }

    fn check_dim(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    pub fn compare(&self, a: &[i64], b: &[i64]) -> Result<Ordering> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.cmp(a, b))
    }

    /// Unchecked comparison; callers guarantee matching dimensions.
    pub fn cmp(&self, a: &[i64], b: &[i64]) -> Ordering {
        match &self.kind {
            OrderKind::Lex => a.cmp(b),
            OrderKind::Matrix(rows) => {
                for row in rows {
                    let ra: i64 = row.iter().zip(a).map(|(r, x)| r * x).sum();
                    let rb: i64 = row.iter().zip(b).map(|(r, x)| r * x).sum();
                    match ra.cmp(&rb) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Sort key whose plain lexicographic order is ≺.
    pub fn key(&self, v: &[i64]) -> Vec<i64> {
        match &self.kind {
            OrderKind::Lex => v.to_vec(),
            OrderKind::Matrix(rows) => {
                rows.iter().map(|row| row.iter().zip(v).map(|(r, x)| r * x).sum()).collect()
            }
        }
    }

    pub fn is_positive(&self, v: &[i64]) -> bool {
        self.sign(v) == Ordering::Greater
    }

    /// Comparison of `v` against zero.
    pub fn sign(&self, v: &[i64]) -> Ordering {
        match &self.kind {
            OrderKind::Lex => v.iter().find(|&&c| c != 0).map_or(Ordering::Equal, |c| c.cmp(&0)),
            OrderKind::Matrix(rows) => rows
                .iter()
                .map(|row| row.iter().zip(v).map(|(r, x)| r * x).sum::<i64>().cmp(&0))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal),
        }
    }

    pub fn min<'a>(&self, a: &'a Degree, b: &'a Degree) -> &'a Degree {
        if self.cmp(a, b) == Ordering::Greater {
            b
        } else {
            a
        }
    }

    pub fn find_weight(&self, vectors: &[Degree]) -> Result<Vec<i64>> {
        self.find_weight_with_budget(vectors, DEFAULT_WEIGHT_BUDGET)
    }

    /// Integer vector `w` with `w·v ≥ 1` for every input vector.
    ///
    /// Tries nonnegative integer combinations of the order rows first (by
    /// increasing largest coefficient), then every integer vector by
    /// increasing max-norm, both up to `budget`.
    pub fn find_weight_with_budget(&self, vectors: &[Degree], budget: i64) -> Result<Vec<i64>> {
        for v in vectors {
            self.check_dim(v)?;
            if !self.is_positive(v) {
                return Err(Error::NotPositive(v.clone()));
            }
        }
        let ok = |w: &[i64]| vectors.iter().all(|v| v.dot(w) >= 1);
        let rows = self.rows();
        let n = self.dim;

        for m in 1..=budget {
            let mut found = None;
            for_each_tuple(n, 0, m, &mut |coeffs| {
                if coeffs.iter().all(|&c| c < m) {
                    return false;
                }
                let w: Vec<i64> = (0..n)
                    .map(|j| rows.iter().zip(coeffs).map(|(row, c)| row[j] * c).sum())
                    .collect();
                if ok(&w) {
                    found = Some(w);
                    return true;
                }
                false
            });
            if let Some(w) = found {
                return Ok(w);
            }
        }

        for m in 1..=budget {
            let mut found = None;
            for_each_tuple(n, -m, m, &mut |w| {
                if w.iter().all(|c| c.abs() < m) {
                    return false;
                }
                if ok(w) {
                    found = Some(w.to_vec());
                    return true;
                }
                false
            });
            if let Some(w) = found {
                return Ok(w);
            }
        }
        Err(Error::NoWeightCertificate { budget })
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OrderKind::Lex => write!(f, "lex"),
            OrderKind::Matrix(rows) => {
                let rows: Vec<String> = rows
                    .iter()
                    .map(|r| {
                        let r: Vec<String> = r.iter().map(i64::to_string).collect();
                        format!("[{}]", r.join(","))
                    })
                    .collect();
                write!(f, "matrix [{}]", rows.join(","))
            }
        }
    }
}

/// Visits every tuple in `[lo, hi]^n` in lexicographic order until `visit` returns true.
fn for_each_tuple(n: usize, lo: i64, hi: i64, visit: &mut dyn FnMut(&[i64]) -> bool) {
    let mut t = vec![lo; n];
    loop {
        if visit(&t) {
            return;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if t[i] < hi {
                t[i] += 1;
                for x in &mut t[i + 1..] {
                    *x = lo;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lex_examples() {
        let lex = OrderSpec::lex(2);
        assert_eq!(lex.compare(&[0, 3], &[1, -7]).unwrap(), Ordering::Less);
        assert_eq!(lex.compare(&[2, 1], &[2, 1]).unwrap(), Ordering::Equal);
        assert!(matches!(
            lex.compare(&[1], &[1, 2]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn matrix_example() {
        let o = OrderSpec::matrix(vec![vec![1, 1], vec![1, 0]]).unwrap();
        assert_eq!(o.compare(&[1, 0], &[0, 2]).unwrap(), Ordering::Less);
    }

    #[test]
    fn singular_matrix_rejected() {
        assert!(OrderSpec::matrix(vec![vec![1, 1], vec![2, 2]]).is_err());
        assert!(OrderSpec::matrix(vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(OrderSpec::lex(1).find_weight(&[Degree::from([2])]).unwrap(), vec![1]);
        let lex = OrderSpec::lex(2);
        assert_eq!(lex.find_weight(&[[1, 0].into(), [0, 1].into()]).unwrap(), vec![1, 1]);
        assert_eq!(lex.find_weight(&[[0, 1].into(), [1, -3].into()]).unwrap(), vec![4, 1]);
    }

    /// Exhaustive search over small weights: (4,1) is the only candidate of
    /// max-norm ≤ 4 certifying {(0,1),(1,-3)}.
    #[test]
    fn weight_example_oracle() {
        let vs = [[0i64, 1], [1, -3]];
        let mut hits = Vec::new();
        for a in -4..=4i64 {
            for b in -4..=4i64 {
                if vs.iter().all(|v| v[0] * a + v[1] * b >= 1) {
                    hits.push((a, b));
                }
            }
        }
        assert_eq!(hits, vec![(4, 1)]);
    }

    #[test]
    fn weight_rejects_nonpositive_and_exhausts_budget() {
        let lex = OrderSpec::lex(2);
        assert!(matches!(lex.find_weight(&[[0, -1].into()]), Err(Error::NotPositive(_))));
        // (1,-100) and (0,1) need first weight ≥ 101.
        assert!(matches!(
            lex.find_weight_with_budget(&[[1, -100].into(), [0, 1].into()], 8),
            Err(Error::NoWeightCertificate { budget: 8 })
        ));
    }

    fn any_order() -> impl Strategy<Value = OrderSpec> {
        prop_oneof![
            Just(OrderSpec::lex(3)),
            Just(OrderSpec::matrix(vec![vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap()),
            Just(OrderSpec::matrix(vec![vec![2, -1, 0], vec![0, 1, 3], vec![1, 0, 1]]).unwrap()),
        ]
    }

    fn point() -> impl Strategy<Value = Vec<i64>> {
        proptest::collection::vec(-20i64..20, 3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn additive_and_antisymmetric(o in any_order(), a in point(), b in point(), c in point()) {
            let ac: Vec<i64> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
            let bc: Vec<i64> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
            prop_assert_eq!(o.compare(&a, &b).unwrap(), o.compare(&ac, &bc).unwrap());
            prop_assert_eq!(o.compare(&a, &b).unwrap(), o.compare(&b, &a).unwrap().reverse());
        }
    }

    proptest! {
        #[test]
        fn weight_certifies(o in any_order(), raw in proptest::collection::vec(point(), 1..4)) {
            let vs: Vec<Degree> = raw.into_iter()
                .map(|v| if o.sign(&v) == Ordering::Less { -&Degree::from(v) } else { Degree::from(v) })
                .filter(|v| !v.is_zero())
                .collect();
            if let Ok(w) = o.find_weight_with_budget(&vs, 12) {
                for v in &vs {
                    prop_assert!(v.dot(&w) >= 1);
                }
            }
        }
    }
}
