//! Formal Laurent series with cone supports.
//!
//! A [`LaurentSeries`] is a lazily evaluated coefficient oracle. Every series
//! carries a [`ConeSupport`] outside of which its coefficients vanish, and a
//! construction tree (terms, sums, products, inverses, external tables) that
//! is walked on demand. Computed coefficients are memoized per node, so
//! asking for a truncation at a larger height reuses earlier work.
//!
//! Coefficient queries return `Result` because external tables (graded
//! dimensions of truncated modules) refuse to answer beyond their height.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::order::{Degree, OrderSpec};
use crate::scalar::{self, Scalar};
use crate::support::ConeSupport;

/// Scalars allowed when inverting a leading coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScalarMode {
    #[default]
    Rational,
    /// Only ±1 leading coefficients may be inverted.
    Integer,
}

type Oracle = Arc<dyn Fn(&Degree) -> Result<Scalar> + Send + Sync>;

enum Kind {
    Terms(HashMap<Degree, Scalar>),
    Sum(LaurentSeries, LaurentSeries),
    Neg(LaurentSeries),
    Scale(Scalar, LaurentSeries),
    Shift(Degree, LaurentSeries),
    Product { f: LaurentSeries, g: LaurentSeries, left: ConeSupport, right: ConeSupport },
    Inverse(InverseCore),
    MatrixEntry { core: Arc<MatrixInverseCore>, row: usize, col: usize },
    /// Exactly known coefficients for weight-height `w·g ≤ height`.
    Table { values: HashMap<Degree, Scalar>, weight: Vec<i64>, height: i64 },
    External(Oracle),
}

struct Node {
    support: ConeSupport,
    kind: Kind,
    memo: Mutex<HashMap<Degree, Scalar>>,
}

#[derive(Clone)]
pub struct LaurentSeries(Arc<Node>);

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.0.kind {
            Kind::Terms(_) => "terms",
            Kind::Sum(..) => "sum",
            Kind::Neg(_) => "neg",
            Kind::Scale(..) => "scale",
            Kind::Shift(..) => "shift",
            Kind::Product { .. } => "product",
            Kind::Inverse(_) => "inverse",
            Kind::MatrixEntry { .. } => "matrix-inverse-entry",
            Kind::Table { .. } => "table",
            Kind::External(_) => "external",
        };
        f.debug_struct("LaurentSeries").field("kind", &kind).field("support", &self.0.support).finish()
    }
}

/// Coefficients of the inverse of `h = x^{-m} f / c`, supported on the unit monoid.
struct InverseCore {
    f: LaurentSeries,
    lead: Degree,
    lead_inv: Scalar,
    unit: ConeSupport,
    memo: Mutex<HashMap<Degree, Scalar>>,
}

impl InverseCore {
    /// Coefficient at `t` of `(x^{-m} f)^{-1}`.
    fn unit_coefficient(&self, t: &Degree) -> Result<Scalar> {
        if t.is_zero() {
            return Ok(self.lead_inv.clone());
        }
        if !self.unit.contains(t) {
            return Ok(Scalar::zero());
        }
        if let Some(v) = self.memo.lock().unwrap().get(t) {
            return Ok(v.clone());
        }
        let h = self.unit.height_of(t);
        let mut points = Vec::new();
        self.unit.for_each_point(h, |p| {
            if !p.is_zero() {
                let rest = t - p;
                if self.unit.contains(&rest) {
                    points.push((p.clone(), rest));
                }
            }
            true
        });
        let mut acc = Scalar::zero();
        for (p, rest) in points {
            let hp = self.f.coefficient(&(&p + &self.lead))?;
            if hp.is_zero() {
                continue;
            }
            let b = self.unit_coefficient(&rest)?;
            if !b.is_zero() {
                acc += hp * b;
            }
        }
        let value = -acc * &self.lead_inv;
        self.memo.lock().unwrap().insert(t.clone(), value.clone());
        Ok(value)
    }
}

/// Lazily computed inverse of a square matrix of series whose entries live in
/// the monoid `U` (offset zero). Coefficient blocks satisfy
/// `N_t = M₀⁻¹ (δ_{t,0} I − Σ_{p≠0} M_p N_{t−p})`.
pub(crate) struct MatrixInverseCore {
    entries: Vec<Vec<LaurentSeries>>,
    constant_inv: Matrix,
    unit: ConeSupport,
    memo: Mutex<HashMap<Degree, Arc<Matrix>>>,
}

impl MatrixInverseCore {
    fn block_of_input(&self, p: &Degree) -> Result<Matrix> {
        let n = self.entries.len();
        let mut m = Matrix::zeros(n, n);
        for (r, row) in self.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                m.set(r, c, e.coefficient(p)?);
            }
        }
        Ok(m)
    }

    fn block(&self, t: &Degree) -> Result<Arc<Matrix>> {
        let n = self.entries.len();
        if !self.unit.contains(t) {
            return Ok(Arc::new(Matrix::zeros(n, n)));
        }
        if let Some(b) = self.memo.lock().unwrap().get(t) {
            return Ok(b.clone());
        }
        let mut rhs = if t.is_zero() { Matrix::identity(n) } else { Matrix::zeros(n, n) };
        if !t.is_zero() {
            let mut points = Vec::new();
            self.unit.for_each_point(self.unit.height_of(t), |p| {
                if !p.is_zero() {
                    let rest = t - p;
                    if self.unit.contains(&rest) {
                        points.push((p.clone(), rest));
                    }
                }
                true
            });
            for (p, rest) in points {
                let mp = self.block_of_input(&p)?;
                if mp.is_zero() {
                    continue;
                }
                let nb = self.block(&rest)?;
                rhs = rhs.add(&mp.mul(&nb).scale(&-scalar::one()));
            }
        }
        let value = Arc::new(self.constant_inv.mul(&rhs));
        self.memo.lock().unwrap().insert(t.clone(), value.clone());
        Ok(value)
    }
}

impl LaurentSeries {
    fn from_kind(support: ConeSupport, kind: Kind) -> Self {
        LaurentSeries(Arc::new(Node { support, kind, memo: Mutex::new(HashMap::new()) }))
    }

    /// Series with exactly the given nonzero terms (repeated points add up).
    pub fn from_terms(terms: Vec<(Degree, Scalar)>, support: ConeSupport) -> Result<Self> {
        let mut map: HashMap<Degree, Scalar> = HashMap::new();
        for (g, c) in terms {
            if g.dim() != support.dim() {
                return Err(Error::DimensionMismatch { expected: support.dim(), got: g.dim() });
            }
            if c.is_zero() {
                continue;
            }
            if !support.contains(&g) {
                return Err(Error::SupportViolation(g));
            }
            *map.entry(g).or_insert_with(Scalar::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Self::from_kind(support, Kind::Terms(map)))
    }

    /// Polynomial with support `min + N⟨g − min⟩` over its own exponents.
    pub fn polynomial(order: Arc<OrderSpec>, terms: Vec<(Degree, Scalar)>) -> Result<Self> {
        let nonzero: Vec<&Degree> = terms.iter().filter(|(_, c)| !c.is_zero()).map(|(g, _)| g).collect();
        let Some(first) = nonzero.first() else {
            return Ok(Self::zero(order));
        };
        let mut lo = (*first).clone();
        for g in &nonzero {
            if g.dim() != order.dim() {
                return Err(Error::DimensionMismatch { expected: order.dim(), got: g.dim() });
            }
            lo = order.min(&lo, g).clone();
        }
        let mut gens: Vec<Degree> = nonzero.iter().map(|g| *g - &lo).filter(|d| !d.is_zero()).collect();
        gens.sort_by(|a, b| order.cmp(a, b));
        let support = ConeSupport::new(order, lo, gens)?;
        Self::from_terms(terms, support)
    }

    pub fn zero(order: Arc<OrderSpec>) -> Self {
        let n = order.dim();
        let support = ConeSupport::point(order, Degree::zero(n)).expect("empty generator set");
        Self::from_kind(support, Kind::Terms(HashMap::new()))
    }

    pub fn one(order: Arc<OrderSpec>) -> Self {
        Self::monomial(order.clone(), Degree::zero(order.dim()), scalar::one())
    }

    pub fn monomial(order: Arc<OrderSpec>, degree: Degree, coef: Scalar) -> Self {
        let support = ConeSupport::point(order, degree.clone()).expect("empty generator set");
        let mut map = HashMap::new();
        if !coef.is_zero() {
            map.insert(degree, coef);
        }
        Self::from_kind(support, Kind::Terms(map))
    }

    /// Truncated data: exact for `w·g ≤ height`, an error beyond.
    pub fn from_table(
        values: HashMap<Degree, Scalar>,
        support: ConeSupport,
        weight: Vec<i64>,
        height: i64,
    ) -> Result<Self> {
        for (g, c) in &values {
            if !c.is_zero() && !support.contains(g) {
                return Err(Error::SupportViolation(g.clone()));
            }
        }
        Ok(Self::from_kind(support, Kind::Table { values, weight, height }))
    }

    /// A series backed by an arbitrary deterministic oracle. The oracle is
    /// only consulted at points of `support`.
    pub fn from_oracle(
        support: ConeSupport,
        oracle: impl Fn(&Degree) -> Result<Scalar> + Send + Sync + 'static,
    ) -> Self {
        Self::from_kind(support, Kind::External(Arc::new(oracle)))
    }

    pub fn support(&self) -> &ConeSupport {
        &self.0.support
    }

    pub fn order(&self) -> &Arc<OrderSpec> {
        self.0.support.order()
    }

    pub fn dim(&self) -> usize {
        self.0.support.dim()
    }

    /// True when this node is a term list with no terms.
    pub fn is_trivially_zero(&self) -> bool {
        matches!(&self.0.kind, Kind::Terms(t) if t.is_empty())
    }

    pub fn coefficient(&self, g: &Degree) -> Result<Scalar> {
        let node = &*self.0;
        if g.dim() != node.support.dim() {
            return Err(Error::DimensionMismatch { expected: node.support.dim(), got: g.dim() });
        }
        if let Kind::Table { weight, height, .. } = &node.kind {
            if g.dot(weight) > *height {
                return Err(Error::BeyondTruncation { degree: g.clone(), height: *height });
            }
        }
        if !node.support.contains(g) {
            return Ok(Scalar::zero());
        }
        match &node.kind {
            Kind::Terms(t) => return Ok(t.get(g).cloned().unwrap_or_else(Scalar::zero)),
            Kind::Table { values, .. } => {
                return Ok(values.get(g).cloned().unwrap_or_else(Scalar::zero))
            }
            _ => {}
        }
        if let Some(v) = node.memo.lock().unwrap().get(g) {
            return Ok(v.clone());
        }
        let value = match &node.kind {
            Kind::Terms(_) | Kind::Table { .. } => unreachable!(),
            Kind::Sum(a, b) => a.coefficient(g)? + b.coefficient(g)?,
            Kind::Neg(a) => -a.coefficient(g)?,
            Kind::Scale(c, a) => c * a.coefficient(g)?,
            Kind::Shift(s, a) => a.coefficient(&(g - s))?,
            Kind::Product { f, g: other, left, right } => {
                let h = node.support.height_of(g);
                let mut pairs = Vec::new();
                left.for_each_point(h, |a| {
                    let b = g - a;
                    if right.contains(&b) {
                        pairs.push((a.clone(), b));
                    }
                    true
                });
                let mut acc = Scalar::zero();
                for (a, b) in pairs {
                    let fa = f.coefficient(&a)?;
                    if fa.is_zero() {
                        continue;
                    }
                    let gb = other.coefficient(&b)?;
                    if !gb.is_zero() {
                        acc += fa * gb;
                    }
                }
                acc
            }
            Kind::Inverse(core) => core.unit_coefficient(&(g + &core.lead))?,
            Kind::MatrixEntry { core, row, col } => core.block(g)?.get(*row, *col).clone(),
            Kind::External(oracle) => oracle(g)?,
        };
        node.memo.lock().unwrap().insert(g.clone(), value.clone());
        Ok(value)
    }

    fn check_compatible(&self, other: &LaurentSeries) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        if self.order() != other.order() {
            return Err(Error::InvalidOrder("series use different orders".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_compatible(other)?;
        if other.is_trivially_zero() {
            return Ok(self.clone());
        }
        if self.is_trivially_zero() {
            return Ok(other.clone());
        }
        let support = self.support().union_support(other.support())?;
        Ok(Self::from_kind(support, Kind::Sum(self.clone(), other.clone())))
    }

    pub fn negate(&self) -> LaurentSeries {
        Self::from_kind(self.support().clone(), Kind::Neg(self.clone()))
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.add(&other.negate())
    }

    pub fn scale(&self, c: &Scalar) -> LaurentSeries {
        Self::from_kind(self.support().clone(), Kind::Scale(c.clone(), self.clone()))
    }

    /// Multiplication by the monomial `x^s`.
    pub fn shift(&self, s: &Degree) -> LaurentSeries {
        if s.is_zero() {
            return self.clone();
        }
        Self::from_kind(self.support().translated(s), Kind::Shift(s.clone(), self.clone()))
    }

    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.check_compatible(other)?;
        let support = self.support().sum_support(other.support())?;
        if self.is_trivially_zero() || other.is_trivially_zero() {
            return Ok(Self::from_kind(support, Kind::Terms(HashMap::new())));
        }
        let left = self.support().reweighted(support.weight().to_vec())?;
        let right = other.support().reweighted(support.weight().to_vec())?;
        Ok(Self::from_kind(
            support,
            Kind::Product { f: self.clone(), g: other.clone(), left, right },
        ))
    }

    /// The ≺-least nonzero term among support points of height ≤ `probe`.
    pub fn least_term(&self, probe: u64) -> Result<Option<(Degree, Scalar)>> {
        for p in self.support().enumerate_upto(probe) {
            let c = self.coefficient(&p)?;
            if !c.is_zero() {
                return Ok(Some((p, c)));
            }
        }
        Ok(None)
    }

    pub fn invert(&self, zero_probe_height: u64) -> Result<LaurentSeries> {
        self.invert_with(zero_probe_height, ScalarMode::Rational)
    }

    /// Multiplicative inverse.
    ///
    /// Writes `f = c·x^m·(1 − u)` for the least probed term `c·x^m` and
    /// solves for the inverse coefficients by recursion on weight-height. When
    /// `m` is the support offset, `u` lives on the same generators; otherwise
    /// the differences `q − m` of the irreducible support points `q ≻ m` are
    /// added as generators.
    pub fn invert_with(&self, zero_probe_height: u64, mode: ScalarMode) -> Result<LaurentSeries> {
        let (lead, c) = self
            .least_term(zero_probe_height)?
            .ok_or(Error::ApparentlyZero { probe: zero_probe_height })?;
        if mode == ScalarMode::Integer && !scalar::is_unit_integer(&c) {
            return Err(Error::NotInvertible(scalar::format(&c)));
        }
        let support = self.support();
        let order = support.order().clone();
        let n = order.dim();
        let mut generators = support.generators().to_vec();
        if &lead != support.offset() {
            let max_gen = generators.iter().map(|g| g.dot(support.weight())).max().unwrap_or(0);
            let bound = support.height_of(&lead) + max_gen.max(zero_probe_height as i64);
            let above: Vec<Degree> = support
                .points_by_height(bound)
                .into_iter()
                .filter(|q| order.cmp(q, &lead) == Ordering::Greater)
                .collect();
            for q in &above {
                let reducible = support.generators().iter().any(|g| {
                    let r = q - g;
                    support.contains(&r) && order.cmp(&r, &lead) == Ordering::Greater
                });
                if !reducible {
                    generators.push(q - &lead);
                }
            }
        }
        let unit = if generators.len() == support.generators().len() {
            ConeSupport::with_weight(order.clone(), Degree::zero(n), generators, support.weight().to_vec())?
        } else {
            ConeSupport::new(order.clone(), Degree::zero(n), generators)?
        };
        let result_support = unit.translated(&-&lead);
        let core = InverseCore {
            f: self.clone(),
            lead,
            lead_inv: c.recip(),
            unit,
            memo: Mutex::new(HashMap::new()),
        };
        Ok(Self::from_kind(result_support, Kind::Inverse(core)))
    }

    /// Nonzero terms at support points of weight-height ≤ `height`, ≺-ascending.
    pub fn truncate(&self, height: u64) -> Result<Vec<(Degree, Scalar)>> {
        let mut out = Vec::new();
        for p in self.support().enumerate_upto(height) {
            let c = self.coefficient(&p)?;
            if !c.is_zero() {
                out.push((p, c));
            }
        }
        Ok(out)
    }

    /// Whether `f − g ∈ V_e = x^e·Z_≺⟦x⟧`, checking coefficients at the
    /// support points `p ≺ e` of weight-height at most that of `e`.
    ///
    /// Exact whenever the support weight is monotone for ≺ (one variable,
    /// or a matrix order whose first row is the weight); otherwise a
    /// truncated check, see [`equal_up_to_within`](Self::equal_up_to_within).
    pub fn equal_up_to(&self, other: &LaurentSeries, e: &Degree) -> Result<bool> {
        let diff = self.sub(other)?;
        let h = diff.support().height_of(e).max(0);
        diff.vanishes_below(e, h as u64)
    }

    /// Like [`equal_up_to`](Self::equal_up_to) with an explicit height bound
    /// on the points examined.
    pub fn equal_up_to_within(&self, other: &LaurentSeries, e: &Degree, height: u64) -> Result<bool> {
        let diff = self.sub(other)?;
        diff.vanishes_below(e, height)
    }

    fn vanishes_below(&self, e: &Degree, height: u64) -> Result<bool> {
        if e.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: e.dim() });
        }
        let order = self.order().clone();
        for p in self.support().enumerate_upto(height) {
            if order.cmp(&p, e) != Ordering::Less {
                continue;
            }
            if !self.coefficient(&p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coefficientwise equality at every support point of either series up to `height`.
    pub fn agrees_with(&self, other: &LaurentSeries, height: u64) -> Result<bool> {
        let diff = self.sub(other)?;
        for p in diff.support().points_by_height(height as i64) {
            if !diff.coefficient(&p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Lazily inverts a square matrix of series by the constant-term splitting.
pub(crate) fn invert_series_matrix(entries: Vec<Vec<LaurentSeries>>) -> Result<Vec<Vec<LaurentSeries>>> {
    let n = entries.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if entries.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("matrix to invert is not square".into()));
    }
    let order = entries[0][0].order().clone();
    let dim = order.dim();
    let zero = Degree::zero(dim);
    let mut gens: Vec<Degree> = Vec::new();
    for (r, row) in entries.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            if e.order() != &order {
                return Err(Error::InvalidOrder("matrix entries use different orders".into()));
            }
            let s = e.support();
            if order.sign(s.offset()) == Ordering::Less {
                return Err(Error::NegativeSupport { row: r, col: c });
            }
            if !s.offset().is_zero() {
                gens.push(s.offset().clone());
            }
            gens.extend(s.generators().iter().cloned());
        }
    }
    let mut constant = Matrix::zeros(n, n);
    for (r, row) in entries.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            constant.set(r, c, e.coefficient(&zero)?);
        }
    }
    let constant_inv = constant.inverse().ok_or(Error::SingularConstantTerm)?;
    let unit = ConeSupport::new(order, zero, gens)?;
    let core = Arc::new(MatrixInverseCore {
        entries,
        constant_inv,
        unit: unit.clone(),
        memo: Mutex::new(HashMap::new()),
    });
    Ok((0..n)
        .map(|row| {
            (0..n)
                .map(|col| {
                    LaurentSeries::from_kind(
                        unit.clone(),
                        Kind::MatrixEntry { core: core.clone(), row, col },
                    )
                })
                .collect()
        })
        .collect())
}

/// One term per line, `<rational> x1^a1 ... xn^an`.
pub fn format_terms(terms: &[(Degree, Scalar)]) -> String {
    let mut out = String::new();
    for (g, c) in terms {
        out.push_str(&scalar::format(c));
        for (i, a) in g.iter().enumerate() {
            out.push_str(&format!(" x{}^{}", i + 1, a));
        }
        out.push('\n');
    }
    out
}
