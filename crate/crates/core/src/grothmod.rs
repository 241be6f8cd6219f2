//! Grothendieck-group classes with Laurent-series coefficients.
//!
//! A [`K0Vector`] is a finitely supported vector over the series ring in a
//! labelled basis (simples, projectives, or anything else). A
//! [`SeriesMatrix`] changes bases; the Cartan matrix expresses projectives in
//! terms of simples and its inverse goes the other way.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::order::OrderSpec;
use crate::series::{self, LaurentSeries};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Simple,
    Projective,
    Custom(String),
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::Simple => write!(f, "simple"),
            BasisKind::Projective => write!(f, "projective"),
            BasisKind::Custom(name) => write!(f, "{name}"),
        }
    }
}

impl BasisKind {
    pub fn parse(name: &str) -> Self {
        match name {
            "simple" => BasisKind::Simple,
            "projective" => BasisKind::Projective,
            other => BasisKind::Custom(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Basis {
    pub kind: BasisKind,
    pub labels: Vec<String>,
}

impl Basis {
    pub fn new(kind: BasisKind, labels: Vec<String>) -> Self {
        Basis { kind, labels }
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn expect_same(&self, other: &Basis) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::BasisMismatch { expected: self.kind.to_string(), got: other.kind.to_string() });
        }
        if self.labels != other.labels {
            return Err(Error::LabelMismatch(format!("{:?} vs {:?}", self.labels, other.labels)));
        }
        Ok(())
    }
}

/// A class `Σ_ℓ f_ℓ(x)·[ℓ]`; absent labels carry the zero series.
#[derive(Clone, Debug)]
pub struct K0Vector {
    order: Arc<OrderSpec>,
    basis: Basis,
    entries: BTreeMap<String, LaurentSeries>,
}

impl K0Vector {
    pub fn zero(order: Arc<OrderSpec>, basis: Basis) -> Self {
        K0Vector { order, basis, entries: BTreeMap::new() }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn order(&self) -> &Arc<OrderSpec> {
        &self.order
    }

    pub fn set(&mut self, label: &str, value: LaurentSeries) -> Result<()> {
        if self.basis.position(label).is_none() {
            return Err(Error::LabelMismatch(format!("{label} is not in the basis")));
        }
        if value.order() != &self.order {
            return Err(Error::InvalidOrder("entry uses a different order".into()));
        }
        self.entries.insert(label.to_string(), value);
        Ok(())
    }

    pub fn with(mut self, label: &str, value: LaurentSeries) -> Result<Self> {
        self.set(label, value)?;
        Ok(self)
    }

    pub fn get(&self, label: &str) -> LaurentSeries {
        self.entries.get(label).cloned().unwrap_or_else(|| LaurentSeries::zero(self.order.clone()))
    }

    /// Entries in basis order.
    pub fn components(&self) -> Vec<(String, LaurentSeries)> {
        self.basis.labels.iter().map(|l| (l.clone(), self.get(l))).collect()
    }

    pub fn add(&self, other: &K0Vector) -> Result<K0Vector> {
        self.basis.expect_same(&other.basis)?;
        let mut out = K0Vector::zero(self.order.clone(), self.basis.clone());
        for label in &self.basis.labels {
            match (self.entries.get(label), other.entries.get(label)) {
                (Some(a), Some(b)) => {
                    out.entries.insert(label.clone(), a.add(b)?);
                }
                (Some(a), None) | (None, Some(a)) => {
                    out.entries.insert(label.clone(), a.clone());
                }
                (None, None) => {}
            }
        }
        Ok(out)
    }

    pub fn negate(&self) -> K0Vector {
        K0Vector {
            order: self.order.clone(),
            basis: self.basis.clone(),
            entries: self.entries.iter().map(|(l, s)| (l.clone(), s.negate())).collect(),
        }
    }

    pub fn sub(&self, other: &K0Vector) -> Result<K0Vector> {
        self.add(&other.negate())
    }

    /// Entrywise agreement through `height` (see [`LaurentSeries::agrees_with`]).
    pub fn agrees_with(&self, other: &K0Vector, height: u64) -> Result<bool> {
        self.basis.expect_same(&other.basis)?;
        for label in &self.basis.labels {
            if !self.get(label).agrees_with(&other.get(label), height)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The series-ring action `a·v`.
pub fn k0_scale(a: &LaurentSeries, v: &K0Vector) -> Result<K0Vector> {
    let mut out = K0Vector::zero(v.order.clone(), v.basis.clone());
    for (label, s) in &v.entries {
        out.entries.insert(label.clone(), a.mul(s)?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SeriesMatrix {
    rows: Basis,
    cols: Basis,
    entries: Vec<Vec<LaurentSeries>>,
}

impl SeriesMatrix {
    pub fn new(rows: Basis, cols: Basis, entries: Vec<Vec<LaurentSeries>>) -> Result<Self> {
        if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::Shape(format!(
                "expected {}x{} entries",
                rows.len(),
                cols.len()
            )));
        }
        let mut orders = entries.iter().flatten().map(|e| e.order());
        if let Some(first) = orders.next() {
            if orders.any(|o| o != first) {
                return Err(Error::InvalidOrder("matrix entries use different orders".into()));
            }
        }
        Ok(SeriesMatrix { rows, cols, entries })
    }

    pub fn identity(order: Arc<OrderSpec>, basis: Basis) -> Self {
        let n = basis.len();
        let entries = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if r == c {
                            LaurentSeries::one(order.clone())
                        } else {
                            LaurentSeries::zero(order.clone())
                        }
                    })
                    .collect()
            })
            .collect();
        SeriesMatrix { rows: basis.clone(), cols: basis, entries }
    }

    pub fn rows(&self) -> &Basis {
        &self.rows
    }

    pub fn cols(&self) -> &Basis {
        &self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &LaurentSeries {
        &self.entries[r][c]
    }

    pub fn entries(&self) -> &[Vec<LaurentSeries>] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> Vec<LaurentSeries> {
        self.entries.iter().map(|r| r[c].clone()).collect()
    }

    /// Column `label` as a class over the row basis.
    pub fn column_vector(&self, order: Arc<OrderSpec>, label: &str) -> Result<K0Vector> {
        let c = self
            .cols
            .position(label)
            .ok_or_else(|| Error::LabelMismatch(format!("{label} is not a column label")))?;
        let mut v = K0Vector::zero(order, self.rows.clone());
        for (r, l) in self.rows.labels.iter().enumerate() {
            v.set(l, self.entries[r][c].clone())?;
        }
        Ok(v)
    }

    pub fn mul(&self, other: &SeriesMatrix) -> Result<SeriesMatrix> {
        self.cols.expect_same(&other.rows)?;
        let mut entries = Vec::with_capacity(self.rows.len());
        for r in 0..self.rows.len() {
            let mut row = Vec::with_capacity(other.cols.len());
            for c in 0..other.cols.len() {
                let mut acc: Option<LaurentSeries> = None;
                for k in 0..self.cols.len() {
                    let term = self.entries[r][k].mul(&other.entries[k][c])?;
                    acc = Some(match acc {
                        None => term,
                        Some(a) => a.add(&term)?,
                    });
                }
                row.push(acc.expect("nonempty inner dimension"));
            }
            entries.push(row);
        }
        Ok(SeriesMatrix { rows: self.rows.clone(), cols: other.cols.clone(), entries })
    }

    pub fn is_identity_through(&self, height: u64) -> Result<bool> {
        if self.rows.labels != self.cols.labels {
            return Ok(false);
        }
        let order = self.entries[0][0].order().clone();
        for (r, row) in self.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                let target =
                    if r == c { LaurentSeries::one(order.clone()) } else { LaurentSeries::zero(order.clone()) };
                if !e.agrees_with(&target, height)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Two-sided inverse, checked against the identity through `height`.
    ///
    /// With `M = M₀(I − U)` split at the constant term, the inverse is
    /// `(Σ Uʲ)·M₀⁻¹`, evaluated lazily degree by degree; every division is
    /// by the scalar matrix `M₀`.
    pub fn invert(&self, height: u64) -> Result<SeriesMatrix> {
        if self.rows.len() != self.cols.len() {
            return Err(Error::Shape("only square matrices can be inverted".into()));
        }
        if self.rows.is_empty() {
            return Ok(self.clone());
        }
        let inv = SeriesMatrix {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries: series::invert_series_matrix(self.entries.clone())?,
        };
        if !self.mul(&inv)?.is_identity_through(height)? || !inv.mul(self)?.is_identity_through(height)? {
            return Err(Error::Shape("inverse failed the identity check".into()));
        }
        Ok(inv)
    }
}

pub fn invert_matrix(m: &SeriesMatrix, height: u64) -> Result<SeriesMatrix> {
    m.invert(height)
}

/// `w_r = Σ_c M_{r,c}·v_c`, re-expressed over the row basis of `M`.
pub fn change_basis(v: &K0Vector, m: &SeriesMatrix) -> Result<K0Vector> {
    m.cols.expect_same(&v.basis)?;
    let mut out = K0Vector::zero(v.order.clone(), m.rows.clone());
    for (r, label) in m.rows.labels.iter().enumerate() {
        let mut acc: Option<LaurentSeries> = None;
        for (c, col_label) in m.cols.labels.iter().enumerate() {
            let Some(vc) = v.entries.get(col_label) else {
                continue;
            };
            let term = m.entries[r][c].mul(vc)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        if let Some(a) = acc {
            out.entries.insert(label.clone(), a);
        }
    }
    Ok(out)
}
