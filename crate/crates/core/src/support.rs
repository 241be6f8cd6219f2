//! Support certificates: translated finitely generated submonoids of Zⁿ.
//!
//! A [`ConeSupport`] is the set `e + N⟨v₁,…,v_r⟩` where every generator is
//! positive for the order. It is an over-approximation certificate: a series
//! carrying it has zero coefficients outside that set, nothing more. A weight
//! vector `w` with `w·vᵢ ≥ 1` bounds every enumeration, so the number of
//! support points of weight-height `w·(g − e) ≤ H` is finite.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::order::{Degree, OrderSpec};

/// Monoid points relative to the offset, bucketed by weight-height.
#[derive(Default)]
struct MonoidCache {
    layers: Vec<Vec<Degree>>,
    members: HashSet<Degree>,
}

impl MonoidCache {
    fn extend(&mut self, generators: &[Degree], weight: &[i64], dim: usize, height: i64) {
        if height < 0 {
            return;
        }
        if self.layers.is_empty() {
            let zero = Degree::zero(dim);
            self.members.insert(zero.clone());
            self.layers.push(vec![zero]);
        }
        let gen_heights: Vec<i64> = generators.iter().map(|g| g.dot(weight)).collect();
        while (self.layers.len() as i64) <= height {
            let h = self.layers.len() as i64;
            let mut layer = Vec::new();
            for (g, &gh) in generators.iter().zip(&gen_heights) {
                if gh > h {
                    continue;
                }
                for p in &self.layers[(h - gh) as usize] {
                    let q = p + g;
                    if self.members.insert(q.clone()) {
                        layer.push(q);
                    }
                }
            }
            self.layers.push(layer);
        }
    }
}

#[derive(Clone)]
pub struct ConeSupport {
    order: Arc<OrderSpec>,
    offset: Degree,
    generators: Vec<Degree>,
    weight: Vec<i64>,
    cache: Arc<Mutex<MonoidCache>>,
}

impl fmt::Debug for ConeSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeSupport")
            .field("offset", &self.offset)
            .field("generators", &self.generators)
            .field("weight", &self.weight)
            .finish()
    }
}

/// Structural equality: same order, offset, generator list and weight.
impl PartialEq for ConeSupport {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.offset == other.offset
            && self.generators == other.generators
            && self.weight == other.weight
    }
}

fn dedup(generators: Vec<Degree>) -> Vec<Degree> {
    let mut seen = HashSet::new();
    generators.into_iter().filter(|g| seen.insert(g.clone())).collect()
}

impl ConeSupport {
    /// Builds a support and computes its weight certificate.
    pub fn new(order: Arc<OrderSpec>, offset: Degree, generators: Vec<Degree>) -> Result<Self> {
        let generators = dedup(generators);
        let weight = order.find_weight(&generators)?;
        Self::with_weight(order, offset, generators, weight)
    }

    /// Builds a support with a caller-chosen weight, which must certify every generator.
    pub fn with_weight(
        order: Arc<OrderSpec>,
        offset: Degree,
        generators: Vec<Degree>,
        weight: Vec<i64>,
    ) -> Result<Self> {
        let n = order.dim();
        for v in std::iter::once(&offset).chain(&generators) {
            if v.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.dim() });
            }
        }
        if weight.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: weight.len() });
        }
        let generators = dedup(generators);
        for g in &generators {
            if !order.is_positive(g) {
                return Err(Error::NotPositive(g.clone()));
            }
            if g.dot(&weight) < 1 {
                return Err(Error::InvalidOrder(format!(
                    "weight {weight:?} does not certify generator {g}"
                )));
            }
        }
        Ok(ConeSupport {
            order,
            offset,
            generators,
            weight,
            cache: Arc::new(Mutex::new(MonoidCache::default())),
        })
    }

    /// The support `{offset}` with no generators.
    pub fn point(order: Arc<OrderSpec>, offset: Degree) -> Result<Self> {
        Self::new(order, offset, Vec::new())
    }

    pub fn order(&self) -> &Arc<OrderSpec> {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.order.dim()
    }

    pub fn offset(&self) -> &Degree {
        &self.offset
    }

    pub fn generators(&self) -> &[Degree] {
        &self.generators
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    /// The same point set certified by a different weight.
    pub fn reweighted(&self, weight: Vec<i64>) -> Result<Self> {
        if weight == self.weight {
            return Ok(self.clone());
        }
        Self::with_weight(self.order.clone(), self.offset.clone(), self.generators.clone(), weight)
    }

    pub fn translated(&self, shift: &Degree) -> Self {
        ConeSupport {
            order: self.order.clone(),
            offset: &self.offset + shift,
            generators: self.generators.clone(),
            weight: self.weight.clone(),
            cache: self.cache.clone(),
        }
    }

    pub fn certifies(&self, generators: &[Degree]) -> bool {
        generators.iter().all(|g| g.dot(&self.weight) >= 1)
    }

    /// Weight-height `w·(g − offset)`.
    pub fn height_of(&self, g: &Degree) -> i64 {
        (g - &self.offset).dot(&self.weight)
    }

    fn check_same(&self, other: &ConeSupport) -> Result<()> {
        if self.order != other.order {
            return Err(Error::InvalidOrder("supports use different orders".into()));
        }
        Ok(())
    }

    pub fn contains(&self, g: &Degree) -> bool {
        if g.dim() != self.dim() {
            return false;
        }
        let t = g - &self.offset;
        let h = t.dot(&self.weight);
        if h < 0 {
            return false;
        }
        if t.is_zero() {
            return true;
        }
        let mut cache = self.cache.lock().unwrap();
        cache.extend(&self.generators, &self.weight, self.dim(), h);
        cache.members.contains(&t)
    }

    /// Checked variant of [`contains`](Self::contains).
    pub fn try_contains(&self, g: &Degree) -> Result<bool> {
        if g.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: g.dim() });
        }
        Ok(self.contains(g))
    }

    /// Support points of weight-height at most `height`, in increasing
    /// weight-height (ties in generation order). Cheap after the first call.
    pub fn points_by_height(&self, height: i64) -> Vec<Degree> {
        if height < 0 {
            return Vec::new();
        }
        let mut cache = self.cache.lock().unwrap();
        cache.extend(&self.generators, &self.weight, self.dim(), height);
        cache.layers[..=height as usize]
            .iter()
            .flatten()
            .map(|t| &self.offset + t)
            .collect()
    }

    /// Visits support points of weight-height at most `height`, stopping early
    /// when `visit` returns false.
    pub fn for_each_point(&self, height: i64, mut visit: impl FnMut(&Degree) -> bool) {
        if height < 0 {
            return;
        }
        let layers: Vec<Vec<Degree>> = {
            let mut cache = self.cache.lock().unwrap();
            cache.extend(&self.generators, &self.weight, self.dim(), height);
            cache.layers[..=height as usize].to_vec()
        };
        for t in layers.iter().flatten() {
            if !visit(&(&self.offset + t)) {
                return;
            }
        }
    }

    /// All support points of weight-height at most `height`, strictly
    /// increasing for ≺.
    ///
    /// Best-first search from the offset: a queue keyed by ≺ pops the least
    /// pending point and pushes its successors `p + vᵢ`. Successors are
    /// strictly larger than their parent, so pops come out in increasing
    /// order; the weight bound keeps the search finite.
    pub fn enumerate_upto(&self, height: u64) -> Vec<Degree> {
        let height = height as i64;
        let mut queue: BTreeMap<Vec<i64>, Degree> = BTreeMap::new();
        queue.insert(self.order.key(&self.offset), self.offset.clone());
        let mut out = Vec::new();
        while let Some((_, p)) = queue.pop_first() {
            for g in &self.generators {
                let q = &p + g;
                if self.height_of(&q) <= height {
                    queue.entry(self.order.key(&q)).or_insert(q);
                }
            }
            out.push(p);
        }
        out
    }

    /// Support of a product: offsets add, generator lists merge, and the
    /// weight is a common certificate for both lists.
    pub fn sum_support(&self, other: &ConeSupport) -> Result<ConeSupport> {
        self.check_same(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        let gens = dedup(gens);
        let weight = self.common_weight(&gens)?;
        ConeSupport::with_weight(self.order.clone(), &self.offset + &other.offset, gens, weight)
    }

    /// Smallest support containing both `self` and `other`: the ≺-smaller
    /// offset, the merged generators, and the difference of offsets as an extra
    /// generator when they differ.
    pub fn union_support(&self, other: &ConeSupport) -> Result<ConeSupport> {
        self.check_same(other)?;
        let (lo, hi) = if self.order.cmp(&self.offset, &other.offset).is_le() {
            (self, other)
        } else {
            (other, self)
        };
        let mut gens = lo.generators.clone();
        gens.extend(hi.generators.iter().cloned());
        let shift = &hi.offset - &lo.offset;
        if !shift.is_zero() && !lo.contains(&hi.offset) {
            gens.push(shift);
        }
        let gens = dedup(gens);
        if gens == self.generators && lo.offset == self.offset {
            return Ok(self.clone());
        }
        let weight = self.common_weight(&gens)?;
        ConeSupport::with_weight(self.order.clone(), lo.offset.clone(), gens, weight)
    }

    /// Reuses an existing weight when it already certifies `gens`.
    fn common_weight(&self, gens: &[Degree]) -> Result<Vec<i64>> {
        if self.certifies(gens) {
            return Ok(self.weight.clone());
        }
        self.order.find_weight(gens)
    }

    /// Pairs `(a, k − a)` with `a` in `self` and `k − a` in `other`.
    pub fn convolution_pairs(&self, other: &ConeSupport, k: &Degree) -> Result<Vec<(Degree, Degree)>> {
        self.check_same(other)?;
        let total = self.sum_support(other)?;
        let left = self.reweighted(total.weight.clone())?;
        let right = other.reweighted(total.weight.clone())?;
        let h = total.height_of(k);
        let mut out = Vec::new();
        left.for_each_point(h, |a| {
            let b = k - a;
            if right.contains(&b) {
                out.push((a.clone(), b));
            }
            true
        });
        out.sort_by(|x, y| self.order.cmp(&x.0, &y.0));
        Ok(out)
    }
}
