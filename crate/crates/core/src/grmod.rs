//! Positively graded basic algebras given by quivers with relations, and
//! graded modules over them.
//!
//! Paths are written left to right in composition order: the path
//! `["a", "b"]` is `a∘b`, so `b` acts first. Its source is the source of `b`
//! and its target the target of `a`.
//!
//! The algebra is expanded degree by degree up to a weight-height `H`. Every
//! element of positive degree is a sum of `a·b` with `a` an arrow and `b` of
//! smaller degree, so the slice `e_j R_g e_i` is
//!
//! ```text
//!   (⊕_{a: tgt a = j} a ⊗ e_{src a} R_{g − deg a} e_i) / ⟨ r·b ⟩
//! ```
//!
//! where `r` runs over relations ending at `j` and `b` over a basis of the
//! slice `e_{src r} R_{g − deg r} e_i`. Consequences `p·r·q` with a nontrivial
//! left factor `p` are already zero in the lower slices, so only `r·b`
//! generators are needed at each step. Everything is exact Gaussian
//! elimination over Q.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grothmod::{Basis, BasisKind, SeriesMatrix};
use crate::linalg::Matrix;
use crate::order::{Degree, OrderSpec};
use crate::scalar::{self, Scalar};
use crate::series::LaurentSeries;
use crate::support::ConeSupport;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: Degree,
}

/// A homogeneous linear combination of paths (arrow indices, composition order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Vec<usize>, Scalar)>,
}

#[derive(Clone, Debug)]
pub struct QuiverPresentation {
    order: Arc<OrderSpec>,
    height: i64,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<Relation>,
    weight: Vec<i64>,
}

/// Source, target and degree of a path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathShape {
    pub src: usize,
    pub tgt: usize,
    pub degree: Degree,
}

impl QuiverPresentation {
    pub fn new(
        order: Arc<OrderSpec>,
        height: i64,
        vertices: Vec<String>,
        arrows: Vec<Arrow>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        if height < 0 {
            return Err(Error::Presentation("height must be nonnegative".into()));
        }
        let distinct: BTreeSet<&String> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::Presentation("duplicate vertex label".into()));
        }
        let names: BTreeSet<&String> = arrows.iter().map(|a| &a.name).collect();
        if names.len() != arrows.len() {
            return Err(Error::Presentation("duplicate arrow name".into()));
        }
        for a in &arrows {
            if a.src >= vertices.len() || a.tgt >= vertices.len() {
                return Err(Error::Presentation(format!("arrow {} has an unknown endpoint", a.name)));
            }
            if a.degree.dim() != order.dim() {
                return Err(Error::DimensionMismatch { expected: order.dim(), got: a.degree.dim() });
            }
            if !order.is_positive(&a.degree) {
                return Err(Error::Presentation(format!(
                    "arrow {} has degree {} which is not positive",
                    a.name, a.degree
                )));
            }
        }
        let degrees: Vec<Degree> = arrows.iter().map(|a| a.degree.clone()).collect();
        let weight = order.find_weight(&degrees)?;
        let p = QuiverPresentation { order, height, vertices, arrows, relations, weight };
        for (k, r) in p.relations.iter().enumerate() {
            let mut shape: Option<PathShape> = None;
            if r.terms.is_empty() {
                return Err(Error::Presentation(format!("relation {k} is empty")));
            }
            for (path, _) in &r.terms {
                if path.is_empty() {
                    return Err(Error::Presentation(format!("relation {k} contains a trivial path")));
                }
                let s = p.path_shape(path)?;
                match &shape {
                    None => shape = Some(s),
                    Some(first) if *first != s => {
                        return Err(Error::Presentation(format!(
                            "relation {k} is not homogeneous: {first:?} vs {s:?}"
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(p)
    }

    /// Presentation from labels: arrows as `(name, src, tgt, degree)` and
    /// relations as lists of `(path of arrow names, coefficient)`.
    pub fn from_labels(
        order: Arc<OrderSpec>,
        height: i64,
        vertices: &[&str],
        arrows: &[(&str, &str, &str, Vec<i64>)],
        relations: &[Vec<(Vec<&str>, Scalar)>],
    ) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let vidx = |l: &str| {
            vertices.iter().position(|v| v == l).ok_or_else(|| Error::UnknownVertex(l.to_string()))
        };
        let mut arr = Vec::new();
        for (name, s, t, d) in arrows {
            arr.push(Arrow { name: name.to_string(), src: vidx(s)?, tgt: vidx(t)?, degree: d.clone().into() });
        }
        let aidx = |n: &str| {
            arr.iter().position(|a| a.name == n).ok_or_else(|| Error::Presentation(format!("unknown arrow {n}")))
        };
        let mut rels = Vec::new();
        for r in relations {
            let mut terms = Vec::new();
            for (path, c) in r {
                let path: Result<Vec<usize>> = path.iter().map(|n| aidx(n)).collect();
                terms.push((path?, c.clone()));
            }
            rels.push(Relation { terms });
        }
        Self::new(order, height, vertices, arr, rels)
    }

    pub fn order(&self) -> &Arc<OrderSpec> {
        &self.order
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn weight(&self) -> &[i64] {
        &self.weight
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::Presentation(format!("unknown arrow {name}")))
    }

    pub fn path_shape(&self, path: &[usize]) -> Result<PathShape> {
        let Some(&last) = path.last() else {
            return Err(Error::Presentation("trivial path has no shape without a vertex".into()));
        };
        if let Some(&bad) = path.iter().find(|&&a| a >= self.arrows.len()) {
            return Err(Error::Presentation(format!("unknown arrow index {bad}")));
        }
        let mut degree = Degree::zero(self.order.dim());
        for w in path.windows(2) {
            let (outer, inner) = (&self.arrows[w[0]], &self.arrows[w[1]]);
            if inner.tgt != outer.src {
                return Err(Error::Presentation(format!(
                    "path is not composable: {} then {}",
                    inner.name, outer.name
                )));
            }
        }
        for &a in path {
            degree = &degree + &self.arrows[a].degree;
        }
        Ok(PathShape { src: self.arrows[last].src, tgt: self.arrows[path[0]].tgt, degree })
    }
}

/// `e_tgt R_degree e_src` expressed as a quotient of `⊕ a ⊗ (lower slice)`.
#[derive(Clone, Debug)]
struct Slice {
    /// Ambient coordinates `(arrow, basis index in the lower slice)`.
    ambient: Vec<(usize, usize)>,
    ambient_index: HashMap<(usize, usize), usize>,
    /// Reduced row echelon rows spanning the relations, with pivot columns.
    relations: Matrix,
    pivots: Vec<usize>,
    /// Ambient coordinates kept as basis, and the path each one stands for.
    basis: Vec<usize>,
    paths: Vec<Vec<usize>>,
}

impl Slice {
    fn idempotent() -> Self {
        Slice {
            ambient: Vec::new(),
            ambient_index: HashMap::new(),
            relations: Matrix::zeros(0, 0),
            pivots: Vec::new(),
            basis: Vec::new(),
            paths: vec![Vec::new()],
        }
    }

    fn dim(&self) -> usize {
        self.paths.len()
    }

    /// Ambient vector to basis coordinates.
    fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (col, x) in v.iter_mut().enumerate() {
                let r = self.relations.get(i, col);
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
        self.basis.iter().map(|&b| v[b].clone()).collect()
    }
}

/// Slice key: `(source vertex, target vertex, degree)`.
type SliceKey = (usize, usize, Degree);

/// The algebra presented by a quiver with relations, expanded degreewise up
/// to the presentation height.
#[derive(Debug)]
pub struct AlgebraTruncation {
    presentation: QuiverPresentation,
    monoid: ConeSupport,
    slices: BTreeMap<SliceKey, Slice>,
    /// Left multiplication by an arrow: `(arrow, source vertex i, degree h)`
    /// maps `e_{src a} R_h e_i` into `e_{tgt a} R_{h + deg a} e_i`.
    actions: HashMap<(usize, usize, Degree), Matrix>,
}

pub fn expand_algebra(p: QuiverPresentation) -> Result<Arc<AlgebraTruncation>> {
    AlgebraTruncation::expand(p).map(Arc::new)
}

impl AlgebraTruncation {
    pub fn expand(p: QuiverPresentation) -> Result<Self> {
        let order = p.order.clone();
        let degrees: Vec<Degree> = p.arrows.iter().map(|a| a.degree.clone()).collect();
        let monoid = ConeSupport::with_weight(order.clone(), Degree::zero(order.dim()), degrees, p.weight.clone())?;
        let mut alg = AlgebraTruncation { presentation: p, monoid, slices: BTreeMap::new(), actions: HashMap::new() };
        let zero = Degree::zero(alg.presentation.order.dim());
        for i in 0..alg.presentation.vertices.len() {
            alg.slices.insert((i, i, zero.clone()), Slice::idempotent());
        }
        let relation_shapes: Vec<PathShape> = alg
            .presentation
            .relations
            .iter()
            .map(|r| alg.presentation.path_shape(&r.terms[0].0))
            .collect::<Result<_>>()?;

        let degrees_in_order: Vec<Degree> = alg.monoid.points_by_height(alg.presentation.height);
        for g in degrees_in_order.into_iter().filter(|g| !g.is_zero()) {
            for i in 0..alg.presentation.vertices.len() {
                for j in 0..alg.presentation.vertices.len() {
                    alg.build_slice(i, j, &g, &relation_shapes);
                }
            }
            // left actions landing in degree g
            for (a, arrow) in alg.presentation.arrows.iter().enumerate() {
                let h = &g - &arrow.degree;
                for i in 0..alg.presentation.vertices.len() {
                    let (Some(src), Some(tgt)) =
                        (alg.slices.get(&(i, arrow.src, h.clone())), alg.slices.get(&(i, arrow.tgt, g.clone())))
                    else {
                        continue;
                    };
                    let mut m = Matrix::zeros(tgt.dim(), src.dim());
                    for b in 0..src.dim() {
                        let mut v = vec![Scalar::zero(); tgt.ambient.len()];
                        v[tgt.ambient_index[&(a, b)]] = scalar::one();
                        for (r, x) in tgt.reduce(&v).into_iter().enumerate() {
                            m.set(r, b, x);
                        }
                    }
                    alg.actions.insert((a, i, h.clone()), m);
                }
            }
        }
        Ok(alg)
    }

    fn build_slice(&mut self, i: usize, j: usize, g: &Degree, relation_shapes: &[PathShape]) {
        let p = &self.presentation;
        let mut ambient = Vec::new();
        for (a, arrow) in p.arrows.iter().enumerate() {
            if arrow.tgt != j {
                continue;
            }
            let h = g - &arrow.degree;
            if let Some(lower) = self.slices.get(&(i, arrow.src, h)) {
                for b in 0..lower.dim() {
                    ambient.push((a, b));
                }
            }
        }
        if ambient.is_empty() {
            return;
        }
        let ambient_index: HashMap<(usize, usize), usize> =
            ambient.iter().enumerate().map(|(k, &c)| (c, k)).collect();

        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (r, shape) in p.relations.iter().zip(relation_shapes) {
            if shape.tgt != j {
                continue;
            }
            let h = g - &shape.degree;
            let Some(lower) = self.slices.get(&(i, shape.src, h.clone())) else {
                continue;
            };
            for b in 0..lower.dim() {
                let mut row = vec![Scalar::zero(); ambient.len()];
                for (path, coef) in &r.terms {
                    let mut e = vec![Scalar::zero(); lower.dim()];
                    e[b] = scalar::one();
                    // apply all arrows but the outermost inside the computed slices
                    let Some(inner) = self.apply_path(&path[1..], i, shape.src, &h, e) else {
                        continue;
                    };
                    let outer = path[0];
                    for (k, x) in inner.iter().enumerate() {
                        if !x.is_zero() {
                            row[ambient_index[&(outer, k)]] += coef * x;
                        }
                    }
                }
                rows.push(row);
            }
        }
        let cols = ambient.len();
        let (relations, pivots) = Matrix::from_rows(rows, cols).rref();
        let relations = relations.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        let basis: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        if basis.is_empty() {
            return;
        }
        let paths = basis
            .iter()
            .map(|&k| {
                let (a, b) = ambient[k];
                let lower = &self.slices[&(i, p.arrows[a].src, g - &p.arrows[a].degree)];
                let mut path = vec![a];
                path.extend(lower.paths[b].iter().copied());
                path
            })
            .collect();
        self.slices.insert((i, j, g.clone()), Slice { ambient, ambient_index, relations, pivots, basis, paths });
    }

    /// Applies a path (rightmost arrow first) to a vector of the slice
    /// `e_vertex R_degree e_i`. `None` when the result is zero because some
    /// slice on the way is zero.
    fn apply_path(&self, path: &[usize], i: usize, vertex: usize, degree: &Degree, mut v: Vec<Scalar>) -> Option<Vec<Scalar>> {
        let mut deg = degree.clone();
        let mut at = vertex;
        for &a in path.iter().rev() {
            let arrow = &self.presentation.arrows[a];
            debug_assert_eq!(arrow.src, at);
            let m = self.actions.get(&(a, i, deg.clone()))?;
            v = m.apply(&v);
            deg = &deg + &arrow.degree;
            at = arrow.tgt;
        }
        Some(v)
    }

    pub fn presentation(&self) -> &QuiverPresentation {
        &self.presentation
    }

    pub fn order(&self) -> &Arc<OrderSpec> {
        &self.presentation.order
    }

    pub fn height(&self) -> i64 {
        self.presentation.height
    }

    pub fn weight(&self) -> &[i64] {
        &self.presentation.weight
    }

    pub fn vertex_count(&self) -> usize {
        self.presentation.vertices.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.presentation.vertices[v]
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.presentation.arrows[a]
    }

    pub fn arrow_count(&self) -> usize {
        self.presentation.arrows.len()
    }

    /// Support `N⟨arrow degrees⟩` with the presentation weight.
    pub fn monoid(&self) -> &ConeSupport {
        &self.monoid
    }

    pub fn height_of(&self, g: &Degree) -> i64 {
        g.dot(&self.presentation.weight)
    }

    /// `dim e_j R_g e_i`.
    pub fn slice_dim(&self, i: usize, j: usize, g: &Degree) -> usize {
        self.slices.get(&(i, j, g.clone())).map_or(0, Slice::dim)
    }

    /// Paths standing for the basis of `e_j R_g e_i`.
    pub fn slice_paths(&self, i: usize, j: usize, g: &Degree) -> &[Vec<usize>] {
        self.slices.get(&(i, j, g.clone())).map_or(&[], |s| &s.paths)
    }

    /// Nonzero slices `(i, j, g)` in key order.
    pub fn nonzero_slices(&self) -> impl Iterator<Item = (usize, usize, &Degree, usize)> {
        self.slices.iter().map(|((i, j, g), s)| (*i, *j, g, s.dim()))
    }

    /// Matrix of left multiplication by arrow `a` on `e_{src a} R_h e_i`.
    pub fn left_action(&self, a: usize, i: usize, h: &Degree) -> Option<&Matrix> {
        self.actions.get(&(a, i, h.clone()))
    }

    /// Product `x·y` of basis element `x` of `e_j R_g e_k` with an element
    /// `y` of `e_k R_h e_i` (coordinates), as coordinates in `e_j R_{g+h} e_i`.
    /// `None` when the product lies beyond the truncation height.
    pub fn multiply_basis(&self, x: (usize, usize, &Degree, usize), y: (usize, &Degree, &[Scalar])) -> Option<Vec<Scalar>> {
        let (k, j, g, idx) = x;
        let (i, h, coords) = y;
        let total = g + h;
        if self.height_of(&total) > self.height() {
            return None;
        }
        let target_dim = self.slice_dim(i, j, &total);
        let path = self.slices.get(&(k, j, g.clone()))?.paths[idx].clone();
        if coords.iter().all(Zero::is_zero) {
            return Some(vec![Scalar::zero(); target_dim]);
        }
        Some(self.apply_path(&path, i, k, h, coords.to_vec()).unwrap_or_else(|| vec![Scalar::zero(); target_dim]))
    }

    /// Coordinates of arrow `a` in the slice `e_{tgt a} R_{deg a} e_{src a}`;
    /// `None` when the arrow lies beyond the height.
    pub fn arrow_element(&self, a: usize) -> Option<Vec<Scalar>> {
        let arrow = self.arrow(a);
        let slice = self.slices.get(&(arrow.src, arrow.tgt, arrow.degree.clone()))?;
        let mut v = vec![Scalar::zero(); slice.ambient.len()];
        v[slice.ambient_index[&(a, 0)]] = scalar::one();
        Some(slice.reduce(&v))
    }

    /// `gdim R = Σ_g dim R_g x^g`, exact through the truncation height.
    pub fn graded_dimension(&self) -> Result<LaurentSeries> {
        let mut values: HashMap<Degree, Scalar> = HashMap::new();
        for (_, _, g, d) in self.nonzero_slices() {
            *values.entry(g.clone()).or_insert_with(Scalar::zero) += scalar::int(d as i64);
        }
        LaurentSeries::from_table(values, self.monoid.clone(), self.weight().to_vec(), self.height())
    }

    pub fn simple_basis(&self) -> Basis {
        Basis::new(BasisKind::Simple, self.presentation.vertices.clone())
    }

    pub fn projective_basis(&self) -> Basis {
        Basis::new(BasisKind::Projective, self.presentation.vertices.clone())
    }

    /// Entry `(j, i)` is `Σ_g dim(e_j R_g e_i) x^g`; rows are simples, columns projectives.
    pub fn cartan_matrix(&self) -> Result<SeriesMatrix> {
        let n = self.vertex_count();
        let mut entries = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                let mut values = HashMap::new();
                for ((si, sj, g), s) in &self.slices {
                    if *si == i && *sj == j {
                        values.insert(g.clone(), scalar::int(s.dim() as i64));
                    }
                }
                row.push(LaurentSeries::from_table(values, self.monoid.clone(), self.weight().to_vec(), self.height())?);
            }
            entries.push(row);
        }
        SeriesMatrix::new(self.simple_basis(), self.projective_basis(), entries)
    }
}

pub fn cartan_matrix(a: &AlgebraTruncation) -> Result<SeriesMatrix> {
    a.cartan_matrix()
}

/// A graded left module, known degreewise through a weight-height.
///
/// Spaces are keyed by `(degree, vertex)`; absent keys are zero. The action
/// of arrow `a` is stored at its source degree and maps
/// `e_{src a} M_g → e_{tgt a} M_{g + deg a}`; absent matrices are zero.
#[derive(Clone, Debug)]
pub struct GradedModule {
    algebra: Arc<AlgebraTruncation>,
    height: i64,
    dims: BTreeMap<(Degree, usize), usize>,
    actions: BTreeMap<(usize, Degree), Matrix>,
}

impl GradedModule {
    /// Builds and validates a module from raw data; zero spaces and zero maps may be omitted.
    pub fn new(
        algebra: Arc<AlgebraTruncation>,
        height: i64,
        dims: BTreeMap<(Degree, usize), usize>,
        actions: BTreeMap<(usize, Degree), Matrix>,
    ) -> Result<Self> {
        let m = Self::from_parts(algebra, height, dims, actions);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn from_parts(
        algebra: Arc<AlgebraTruncation>,
        height: i64,
        mut dims: BTreeMap<(Degree, usize), usize>,
        mut actions: BTreeMap<(usize, Degree), Matrix>,
    ) -> Self {
        let w = algebra.weight().to_vec();
        dims.retain(|(g, _), d| *d > 0 && g.dot(&w) <= height);
        actions.retain(|(a, g), m| {
            let arrow = algebra.arrow(*a);
            (&arrow.degree + g).dot(&w) <= height && !m.is_zero()
        });
        GradedModule { algebra, height, dims, actions }
    }

    pub fn zero(algebra: Arc<AlgebraTruncation>, height: i64) -> Self {
        GradedModule { algebra, height, dims: BTreeMap::new(), actions: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &Arc<AlgebraTruncation> {
        &self.algebra
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn order(&self) -> &Arc<OrderSpec> {
        self.algebra.order()
    }

    pub fn dim(&self, g: &Degree, v: usize) -> usize {
        self.dims.get(&(g.clone(), v)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Nonzero spaces `((degree, vertex), dim)` in key order.
    pub fn spaces(&self) -> impl Iterator<Item = (&Degree, usize, usize)> {
        self.dims.iter().map(|((g, v), d)| (g, *v, *d))
    }

    /// Distinct degrees carrying a nonzero space, ≺-ascending.
    pub fn degrees(&self) -> Vec<Degree> {
        let set: BTreeSet<Degree> = self.dims.keys().map(|(g, _)| g.clone()).collect();
        let mut out: Vec<Degree> = set.into_iter().collect();
        let order = self.order().clone();
        out.sort_by(|a, b| order.cmp(a, b));
        out
    }

    pub fn within_height(&self, g: &Degree) -> bool {
        self.algebra.height_of(g) <= self.height
    }

    /// Action of arrow `a` from degree `g`, as a full-size matrix (zero when absent).
    pub fn action(&self, a: usize, g: &Degree) -> Matrix {
        let arrow = self.algebra.arrow(a);
        match self.actions.get(&(a, g.clone())) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.dim(&(g + &arrow.degree), arrow.tgt), self.dim(g, arrow.src)),
        }
    }

    /// The stored action matrix, `None` when it is zero.
    pub fn stored_action(&self, a: usize, g: &Degree) -> Option<&Matrix> {
        self.actions.get(&(a, g.clone()))
    }

    pub fn stored_actions(&self) -> impl Iterator<Item = (usize, &Degree, &Matrix)> {
        self.actions.iter().map(|((a, g), m)| (*a, g, m))
    }

    /// Applies a path (rightmost arrow first) to `v ∈ e_vertex M_g`.
    pub fn act_path(&self, path: &[usize], g: &Degree, vertex: usize, v: &[Scalar]) -> (Degree, usize, Vec<Scalar>) {
        let mut deg = g.clone();
        let mut at = vertex;
        let mut v = v.to_vec();
        for &a in path.iter().rev() {
            let arrow = self.algebra.arrow(a);
            debug_assert_eq!(arrow.src, at);
            v = self.act_arrow(a, &deg, &v);
            deg = &deg + &arrow.degree;
            at = arrow.tgt;
        }
        (deg, at, v)
    }

    /// Applies one arrow to `v ∈ e_src M_g` without materialising zero blocks.
    pub fn act_arrow(&self, a: usize, g: &Degree, v: &[Scalar]) -> Vec<Scalar> {
        let arrow = self.algebra.arrow(a);
        match self.actions.get(&(a, g.clone())) {
            Some(m) => m.apply(v),
            None => vec![Scalar::zero(); self.dim(&(g + &arrow.degree), arrow.tgt)],
        }
    }

    /// Same algebra, height, spaces and action matrices.
    pub fn same_as(&self, other: &GradedModule) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra)
            && self.height == other.height
            && self.dims == other.dims
            && self.actions == other.actions
    }

    /// Shape checks and vanishing of every relation within the height.
    pub fn validate(&self) -> Result<()> {
        for ((a, g), m) in &self.actions {
            let arrow = self.algebra.arrow(*a);
            let tgt = g + &arrow.degree;
            if m.rows() != self.dim(&tgt, arrow.tgt) || m.cols() != self.dim(g, arrow.src) {
                return Err(Error::Module(format!(
                    "action of {} at {} has shape {}x{}, expected {}x{}",
                    arrow.name,
                    g,
                    m.rows(),
                    m.cols(),
                    self.dim(&tgt, arrow.tgt),
                    self.dim(g, arrow.src)
                )));
            }
        }
        let p = self.algebra.presentation();
        for (k, r) in p.relations().iter().enumerate() {
            let shape = p.path_shape(&r.terms[0].0)?;
            for ((g, v), d) in &self.dims {
                if *v != shape.src || !self.within_height(&(g + &shape.degree)) {
                    continue;
                }
                let tgt_dim = self.dim(&(g + &shape.degree), shape.tgt);
                let mut total = Matrix::zeros(tgt_dim, *d);
                for (path, coef) in &r.terms {
                    let mut m = Matrix::identity(*d);
                    let mut deg = g.clone();
                    for &a in path.iter().rev() {
                        m = self.action(a, &deg).mul(&m);
                        deg = &deg + &self.algebra.arrow(a).degree;
                    }
                    total = total.add(&m.scale(coef));
                }
                if !total.is_zero() {
                    return Err(Error::Module(format!("relation {k} does not vanish at degree {g}")));
                }
            }
        }
        Ok(())
    }

    /// `x^s M`: the space at `g + s` is the old space at `g`.
    pub fn shift(&self, s: &Degree) -> GradedModule {
        GradedModule {
            algebra: self.algebra.clone(),
            height: self.height + self.algebra.height_of(s),
            dims: self.dims.iter().map(|((g, v), d)| ((g + s, *v), *d)).collect(),
            actions: self.actions.iter().map(|((a, g), m)| ((*a, g + s), m.clone())).collect(),
        }
    }

    /// Direct sum; the height is the smaller one.
    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        let height = self.height.min(other.height);
        let mut keys: BTreeSet<(Degree, usize)> = self.dims.keys().cloned().collect();
        keys.extend(other.dims.keys().cloned());
        let dims = keys.iter().map(|(g, v)| ((g.clone(), *v), self.dim(g, *v) + other.dim(g, *v))).collect();
        let mut akeys: BTreeSet<(usize, Degree)> = self.actions.keys().cloned().collect();
        akeys.extend(other.actions.keys().cloned());
        let actions = akeys
            .into_iter()
            .map(|(a, g)| {
                let (x, y) = (self.action(a, &g), other.action(a, &g));
                ((a, g), block_diag(&x, &y))
            })
            .collect();
        GradedModule::from_parts(self.algebra.clone(), height, dims, actions)
    }

    /// Support certificate for the nonzero degrees: `N⟨arrow degrees⟩` when
    /// it contains them all, otherwise the ≺-least degree plus the arrow
    /// degrees and the missing differences.
    pub fn degree_support(&self) -> Result<ConeSupport> {
        degree_support(&self.algebra, self.dims.keys().map(|(g, _)| g))
    }

    /// `Σ_g dim(M_g) x^g` through the module height; queries beyond raise errors.
    pub fn graded_dimension(&self) -> Result<LaurentSeries> {
        let mut values: HashMap<Degree, Scalar> = HashMap::new();
        for ((g, _), d) in &self.dims {
            *values.entry(g.clone()).or_insert_with(Scalar::zero) += scalar::int(*d as i64);
        }
        LaurentSeries::from_table(values, self.degree_support()?, self.algebra.weight().to_vec(), self.height)
    }

    /// `Σ_g dim(e_v M_g) x^g`.
    pub fn vertex_dimension(&self, v: usize) -> Result<LaurentSeries> {
        let values: HashMap<Degree, Scalar> = self
            .dims
            .iter()
            .filter(|((_, u), _)| *u == v)
            .map(|((g, _), d)| (g.clone(), scalar::int(*d as i64)))
            .collect();
        LaurentSeries::from_table(values, self.degree_support()?, self.algebra.weight().to_vec(), self.height)
    }
}

pub(crate) fn degree_support<'a>(
    alg: &AlgebraTruncation,
    degrees: impl Iterator<Item = &'a Degree>,
) -> Result<ConeSupport> {
    let degrees: Vec<&Degree> = degrees.collect();
    let monoid = alg.monoid();
    if degrees.iter().all(|g| monoid.contains(g)) {
        return Ok(monoid.clone());
    }
    let order = alg.order();
    let mut lo = degrees[0].clone();
    for g in &degrees {
        lo = order.min(&lo, g).clone();
    }
    let base = monoid.translated(&lo);
    let mut gens = monoid.generators().to_vec();
    for g in &degrees {
        if !base.contains(g) {
            let d = *g - &lo;
            if !gens.contains(&d) {
                gens.push(d);
            }
        }
    }
    if gens.iter().all(|g| g.dot(alg.weight()) >= 1) {
        ConeSupport::with_weight(order.clone(), lo, gens, alg.weight().to_vec())
    } else {
        ConeSupport::new(order.clone(), lo, gens)
    }
}

pub(crate) fn block_diag(x: &Matrix, y: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(x.rows() + y.rows(), x.cols() + y.cols());
    for r in 0..x.rows() {
        for c in 0..x.cols() {
            m.set(r, c, x.get(r, c).clone());
        }
    }
    for r in 0..y.rows() {
        for c in 0..y.cols() {
            m.set(x.rows() + r, x.cols() + c, y.get(r, c).clone());
        }
    }
    m
}

/// `R e_i`, exact through the algebra height.
pub fn projective_module(alg: &Arc<AlgebraTruncation>, vertex: usize) -> Result<GradedModule> {
    if vertex >= alg.vertex_count() {
        return Err(Error::UnknownVertex(vertex.to_string()));
    }
    projective_sum(alg, &[(vertex, Degree::zero(alg.order().dim()))], alg.height())
}

/// The top `S_i = R e_i / R_{≻0} e_i`: one dimension at degree zero.
pub fn simple_module(alg: &Arc<AlgebraTruncation>, vertex: usize) -> Result<GradedModule> {
    if vertex >= alg.vertex_count() {
        return Err(Error::UnknownVertex(vertex.to_string()));
    }
    let mut dims = BTreeMap::new();
    dims.insert((Degree::zero(alg.order().dim()), vertex), 1);
    Ok(GradedModule::from_parts(alg.clone(), alg.height(), dims, BTreeMap::new()))
}

/// Layout of `⊕_t x^{s_t} R e_{j_t}` at `(g, k)`: `(summand, offset, dim)` for each nonzero block.
pub(crate) fn projective_blocks(
    alg: &AlgebraTruncation,
    summands: &[(usize, Degree)],
    g: &Degree,
    k: usize,
) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (t, (j, s)) in summands.iter().enumerate() {
        let d = alg.slice_dim(*j, k, &(g - s));
        if d > 0 {
            out.push((t, offset, d));
            offset += d;
        }
    }
    out
}

/// Height through which `⊕_t x^{s_t} R e_{j_t}` is exactly known.
pub fn projective_sum_height(alg: &AlgebraTruncation, summands: &[(usize, Degree)], cap: i64) -> i64 {
    summands.iter().map(|(_, s)| alg.height() + alg.height_of(s)).fold(cap, i64::min)
}

/// `⊕_t x^{s_t} R e_{j_t}` truncated at `min(height, trusted height)`.
pub fn projective_sum(alg: &Arc<AlgebraTruncation>, summands: &[(usize, Degree)], height: i64) -> Result<GradedModule> {
    let height = projective_sum_height(alg, summands, height);
    let mut dims = BTreeMap::new();
    for (j, s) in summands {
        for (si, k, g, d) in alg.nonzero_slices() {
            if si != *j {
                continue;
            }
            let deg = g + s;
            if alg.height_of(&deg) <= height {
                *dims.entry((deg, k)).or_insert(0) += d;
            }
        }
    }
    let mut actions = BTreeMap::new();
    for (g, v) in dims.keys() {
        for a in 0..alg.arrow_count() {
            let arrow = alg.arrow(a);
            if arrow.src != *v {
                continue;
            }
            let tg = g + &arrow.degree;
            if alg.height_of(&tg) > height {
                continue;
            }
            let src_blocks = projective_blocks(alg, summands, g, *v);
            let tgt_blocks = projective_blocks(alg, summands, &tg, arrow.tgt);
            let rows: usize = tgt_blocks.iter().map(|b| b.2).sum();
            let cols: usize = src_blocks.iter().map(|b| b.2).sum();
            let mut m = Matrix::zeros(rows, cols);
            for &(t, off, _) in &src_blocks {
                let (j, s) = &summands[t];
                let Some(local) = alg.left_action(a, *j, &(g - s)) else {
                    continue;
                };
                let Some(&(_, toff, _)) = tgt_blocks.iter().find(|b| b.0 == t) else {
                    continue;
                };
                for r in 0..local.rows() {
                    for c in 0..local.cols() {
                        m.set(toff + r, off + c, local.get(r, c).clone());
                    }
                }
            }
            actions.insert((a, g.clone()), m);
        }
    }
    Ok(GradedModule::from_parts(alg.clone(), height, dims, actions))
}
