//! Homological algebra over truncated graded algebras: degree-zero module
//! maps, baric truncations, composition multiplicities, projective covers,
//! minimal resolutions, chain complexes and the classes induced by bimodules.
//!
//! Every construction is degreewise linear algebra over Q. Results carry the
//! weight-height through which they are exact.

use std::cmp::Ordering;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grmod::{self, AlgebraTruncation, GradedModule};
use crate::grothmod::{Basis, BasisKind, K0Vector, SeriesMatrix};
use crate::linalg::Matrix;
use crate::order::Degree;
use crate::scalar::{self, Scalar};
use crate::series::LaurentSeries;

type SpaceKey = (Degree, usize);

/// A degree-preserving map of graded modules, stored per `(degree, vertex)`.
/// Absent blocks are zero.
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    source: GradedModule,
    target: GradedModule,
    maps: BTreeMap<SpaceKey, Matrix>,
}

impl ModuleMorphism {
    pub fn new(source: GradedModule, target: GradedModule, maps: BTreeMap<SpaceKey, Matrix>) -> Result<Self> {
        if !Arc::ptr_eq(source.algebra(), target.algebra()) {
            return Err(Error::Module("morphism between modules over different algebras".into()));
        }
        let f = Self::from_parts(source, target, maps);
        f.validate()?;
        Ok(f)
    }

    fn from_parts(source: GradedModule, target: GradedModule, mut maps: BTreeMap<SpaceKey, Matrix>) -> Self {
        maps.retain(|_, m| !m.is_zero());
        ModuleMorphism { source, target, maps }
    }

    pub fn zero(source: GradedModule, target: GradedModule) -> Self {
        Self::from_parts(source, target, BTreeMap::new())
    }

    pub fn identity(m: &GradedModule) -> Self {
        let maps = m.spaces().map(|(g, v, d)| ((g.clone(), v), Matrix::identity(d))).collect();
        Self::from_parts(m.clone(), m.clone(), maps)
    }

    pub fn source(&self) -> &GradedModule {
        &self.source
    }

    pub fn target(&self) -> &GradedModule {
        &self.target
    }

    pub fn height(&self) -> i64 {
        self.source.height().min(self.target.height())
    }

    /// Block at `(g, v)` as a full `dim target × dim source` matrix.
    pub fn map(&self, g: &Degree, v: usize) -> Matrix {
        match self.maps.get(&(g.clone(), v)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.target.dim(g, v), self.source.dim(g, v)),
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&Degree, usize, &Matrix)> {
        self.maps.iter().map(|((g, v), m)| (g, *v, m))
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    /// Block shapes and commutation with every arrow, within the height.
    pub fn validate(&self) -> Result<()> {
        let alg = self.source.algebra().clone();
        for ((g, v), m) in &self.maps {
            if m.rows() != self.target.dim(g, *v) || m.cols() != self.source.dim(g, *v) {
                return Err(Error::Module(format!("map block at {g}, vertex {v} has the wrong shape")));
            }
        }
        let height = self.height();
        for (g, v, _) in self.source.spaces() {
            for a in 0..alg.arrow_count() {
                let arrow = alg.arrow(a);
                if arrow.src != v {
                    continue;
                }
                let tg = g + &arrow.degree;
                if alg.height_of(&tg) > height {
                    continue;
                }
                let lhs = self.target.action(a, g).mul(&self.map(g, v));
                let rhs = self.map(&tg, arrow.tgt).mul(&self.source.action(a, g));
                if lhs != rhs {
                    return Err(Error::Module(format!("map does not commute with {} at {g}", arrow.name)));
                }
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMorphism) -> Result<ModuleMorphism> {
        if !first.target.same_as(&self.source) {
            return Err(Error::Module("composition of non-matching morphisms".into()));
        }
        let mut maps = BTreeMap::new();
        for ((g, v), m) in &first.maps {
            if let Some(n) = self.maps.get(&(g.clone(), *v)) {
                maps.insert((g.clone(), *v), n.mul(m));
            }
        }
        Ok(Self::from_parts(first.source.clone(), self.target.clone(), maps))
    }

    pub fn add(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if !self.source.same_as(&other.source) || !self.target.same_as(&other.target) {
            return Err(Error::Module("sum of morphisms with different endpoints".into()));
        }
        let mut maps = self.maps.clone();
        for (k, m) in &other.maps {
            let sum = match maps.get(k) {
                Some(x) => x.add(m),
                None => m.clone(),
            };
            maps.insert(k.clone(), sum);
        }
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), maps))
    }

    /// Kernel with its inclusion.
    pub fn kernel(&self) -> Result<(GradedModule, ModuleMorphism)> {
        let mut bases = BTreeMap::new();
        for (g, v, _) in self.source.spaces() {
            let k = self.map(g, v).kernel();
            if k.cols() > 0 {
                bases.insert((g.clone(), v), k);
            }
        }
        submodule(&self.source, bases, self.height())
    }

    /// Image with its inclusion into the target.
    pub fn image(&self) -> Result<(GradedModule, ModuleMorphism)> {
        submodule(&self.target, self.image_bases(), self.height())
    }

    /// Cokernel with the projection from the target.
    pub fn cokernel(&self) -> Result<(GradedModule, ModuleMorphism)> {
        quotient(&self.target, &self.image_bases(), self.height())
    }

    fn image_bases(&self) -> BTreeMap<SpaceKey, Matrix> {
        let mut bases = BTreeMap::new();
        for ((g, v), m) in &self.maps {
            let cols = m.independent_columns();
            if !cols.is_empty() {
                bases.insert((g.clone(), *v), m.select_columns(&cols));
            }
        }
        bases
    }

    /// The map `h` with `inj ∘ h = self`, for an injective `inj`.
    pub fn factor_through(&self, inj: &ModuleMorphism) -> Result<ModuleMorphism> {
        if !inj.target.same_as(&self.target) {
            return Err(Error::Module("factorisation through a map with another target".into()));
        }
        let mut maps = BTreeMap::new();
        for ((g, v), m) in &self.maps {
            let x = inj
                .map(g, *v)
                .solve_matrix(m)
                .ok_or_else(|| Error::Module(format!("image at {g} is not inside the submodule")))?;
            maps.insert((g.clone(), *v), x);
        }
        Ok(Self::from_parts(self.source.clone(), inj.source.clone(), maps))
    }
}

/// The submodule spanned degreewise by the columns of `bases`, which must be
/// stable under the arrows. Each space gets a basis in reduced column
/// echelon form, so coordinates are read off at its pivot rows.
fn submodule(
    m: &GradedModule,
    bases: BTreeMap<SpaceKey, Matrix>,
    height: i64,
) -> Result<(GradedModule, ModuleMorphism)> {
    let alg = m.algebra().clone();
    let echelon: BTreeMap<SpaceKey, (Matrix, Vec<usize>)> =
        bases.into_iter().map(|(k, b)| (k, b.column_echelon())).filter(|(_, (b, _))| b.cols() > 0).collect();
    let dims: BTreeMap<SpaceKey, usize> = echelon.iter().map(|(k, (b, _))| (k.clone(), b.cols())).collect();
    let mut actions = BTreeMap::new();
    for ((g, v), (b, _)) in &echelon {
        for a in 0..alg.arrow_count() {
            let arrow = alg.arrow(a);
            if arrow.src != *v {
                continue;
            }
            let tg = g + &arrow.degree;
            if alg.height_of(&tg) > height {
                continue;
            }
            let Some(act) = m.stored_action(a, g) else {
                continue;
            };
            let moved = act.mul(b);
            if moved.is_zero() {
                continue;
            }
            let unstable = || Error::Module(format!("subspace not stable under {} at {g}", arrow.name));
            let (tb, pivots) = echelon.get(&(tg.clone(), arrow.tgt)).ok_or_else(unstable)?;
            let x = moved.select_rows(pivots);
            if tb.mul(&x) != moved {
                return Err(unstable());
            }
            actions.insert((a, g.clone()), x);
        }
    }
    let sub = GradedModule::from_parts(alg, height, dims, actions);
    let bases = echelon.into_iter().map(|(k, (b, _))| (k, b)).collect();
    let incl = ModuleMorphism::from_parts(sub.clone(), m.clone(), bases);
    Ok((sub, incl))
}

/// The quotient by the stable subspaces spanned by `bases`. Representatives
/// of the quotient are standard basis vectors completing each subspace.
fn quotient(
    m: &GradedModule,
    bases: &BTreeMap<SpaceKey, Matrix>,
    height: i64,
) -> Result<(GradedModule, ModuleMorphism)> {
    let alg = m.algebra().clone();
    let mut dims = BTreeMap::new();
    let mut projections: BTreeMap<SpaceKey, Matrix> = BTreeMap::new();
    let mut lifts: BTreeMap<SpaceKey, Matrix> = BTreeMap::new();
    for (g, v, d) in m.spaces() {
        if alg.height_of(g) > height {
            continue;
        }
        let key = (g.clone(), v);
        let (proj, lift) = match bases.get(&key) {
            None => (Matrix::identity(d), Matrix::identity(d)),
            Some(sub) => {
                // x = sub·a + lift·b with a = x at the pivots, so b = x_C − sub_C·x_P
                let (sub, pivots) = sub.column_echelon();
                let comp: Vec<usize> = (0..d).filter(|r| !pivots.contains(r)).collect();
                let lift = Matrix::identity(d).select_columns(&comp);
                let mut proj = Matrix::zeros(comp.len(), d);
                for (i, &c) in comp.iter().enumerate() {
                    proj.set(i, c, scalar::one());
                    for (j, &p) in pivots.iter().enumerate() {
                        let x = sub.get(c, j);
                        if !x.is_zero() {
                            proj.set(i, p, -x.clone());
                        }
                    }
                }
                (proj, lift)
            }
        };
        if lift.cols() > 0 {
            dims.insert(key.clone(), lift.cols());
        }
        projections.insert(key.clone(), proj);
        lifts.insert(key, lift);
    }
    let mut actions = BTreeMap::new();
    for ((g, v), lift) in &lifts {
        if lift.cols() == 0 {
            continue;
        }
        for a in 0..alg.arrow_count() {
            let arrow = alg.arrow(a);
            if arrow.src != *v {
                continue;
            }
            let tg = g + &arrow.degree;
            let Some(proj) = projections.get(&(tg, arrow.tgt)) else {
                continue;
            };
            let Some(act) = m.stored_action(a, g) else {
                continue;
            };
            actions.insert((a, g.clone()), proj.mul(&act.mul(lift)));
        }
    }
    let q = GradedModule::from_parts(alg, height, dims, actions);
    let proj = ModuleMorphism::from_parts(m.clone(), q.clone(), projections);
    Ok((q, proj))
}

/// The submodule of `m` generated by the given elements `(degree, vertex, coordinates)`.
pub fn generated_submodule(
    m: &GradedModule,
    generators: &[(Degree, usize, Vec<Scalar>)],
) -> Result<(GradedModule, ModuleMorphism)> {
    let summands: Vec<(usize, Degree)> = generators.iter().map(|(g, v, _)| (*v, g.clone())).collect();
    let images: Vec<Vec<Scalar>> = generators.iter().map(|(_, _, x)| x.clone()).collect();
    let p = grmod::projective_sum(m.algebra(), &summands, m.height())?;
    let f = map_from_projectives(&p, &summands, &images, m)?;
    f.image()
}

/// The map `⊕_t x^{s_t} R e_{j_t} → M` sending the t-th generator to `images[t] ∈ e_{j_t} M_{s_t}`.
pub fn map_from_projectives(
    p: &GradedModule,
    summands: &[(usize, Degree)],
    images: &[Vec<Scalar>],
    m: &GradedModule,
) -> Result<ModuleMorphism> {
    let alg = m.algebra().clone();
    for ((j, s), x) in summands.iter().zip(images) {
        if x.len() != m.dim(s, *j) {
            return Err(Error::Shape(format!("generator image at {s} has the wrong length")));
        }
    }
    let height = p.height().min(m.height());
    let mut maps = BTreeMap::new();
    // images of paths applied to each generator, shared between longer paths
    let mut memo: Vec<HashMap<Vec<usize>, Vec<Scalar>>> = vec![HashMap::new(); summands.len()];
    for (g, k, d) in p.spaces() {
        if alg.height_of(g) > height {
            continue;
        }
        let rows = m.dim(g, k);
        let mut block = Matrix::zeros(rows, d);
        if rows > 0 {
            for (t, offset, _) in grmod::projective_blocks(&alg, summands, g, k) {
                let (j, s) = &summands[t];
                for (b, path) in alg.slice_paths(*j, k, &(g - s)).iter().enumerate() {
                    let v = path_image(m, &mut memo[t], path, s, &images[t]);
                    for (r, x) in v.iter().enumerate() {
                        if !x.is_zero() {
                            block.set(r, offset + b, x.clone());
                        }
                    }
                }
            }
        }
        maps.insert((g.clone(), k), block);
    }
    Ok(ModuleMorphism::from_parts(p.clone(), m.clone(), maps))
}

/// `path · x` for `x ∈ e_j M_s`, reusing the images of shorter paths.
fn path_image<'a>(
    m: &GradedModule,
    memo: &'a mut HashMap<Vec<usize>, Vec<Scalar>>,
    path: &[usize],
    s: &Degree,
    x: &[Scalar],
) -> &'a Vec<Scalar> {
    if !memo.contains_key(path) {
        let v = match path.split_first() {
            None => x.to_vec(),
            Some((&a, rest)) => {
                let alg = m.algebra();
                let g = rest.iter().fold(s.clone(), |g, &b| &g + &alg.arrow(b).degree);
                let inner = path_image(m, memo, rest, s, x).clone();
                m.act_arrow(a, &g, &inner)
            }
        };
        memo.insert(path.to_vec(), v);
    }
    &memo[path]
}

/// `β_{≻g} M`: the submodule living in degrees strictly above `g`.
pub fn beta_gt(m: &GradedModule, g: &Degree) -> GradedModule {
    restrict(m, |d| m.order().cmp(d, g) == Ordering::Greater)
}

/// `β_{⪯g} M = M / β_{≻g} M`: the quotient living in degrees at most `g`.
pub fn beta_le(m: &GradedModule, g: &Degree) -> GradedModule {
    restrict(m, |d| m.order().cmp(d, g) != Ordering::Greater)
}

/// Keeps the spaces whose degree satisfies `keep`, and the actions between
/// kept spaces. For an up-set or a down-set of degrees this is a submodule
/// or a quotient.
fn restrict(m: &GradedModule, keep: impl Fn(&Degree) -> bool) -> GradedModule {
    let dims = m.spaces().filter(|(g, _, _)| keep(g)).map(|(g, v, d)| ((g.clone(), v), d)).collect();
    let alg = m.algebra();
    let actions = m
        .stored_actions()
        .filter(|(a, g, _)| keep(g) && keep(&(*g + &alg.arrow(*a).degree)))
        .map(|(a, g, x)| ((a, g.clone()), x.clone()))
        .collect();
    GradedModule::from_parts(alg.clone(), m.height(), dims, actions)
}

/// How the nonzero `(degree, vertex)` spaces are discovered when counting multiplicities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Enumeration {
    /// Pops stored spaces from a heap keyed by ≺.
    PriorityQueue,
    /// Scans every lattice point of the bounding box of the stored degrees.
    BoxScan,
}

/// Multiplicity terms `(degree, vertex, dim e_v M_g)`, nonzero only, sorted by (≺, vertex).
pub fn multiplicity_terms(m: &GradedModule, strategy: Enumeration) -> Vec<(Degree, usize, usize)> {
    let order = m.order().clone();
    let mut out = Vec::new();
    match strategy {
        Enumeration::PriorityQueue => {
            let mut heap: BinaryHeap<Reverse<(Vec<i64>, usize, Degree)>> =
                m.spaces().map(|(g, v, _)| Reverse((order.key(g), v, g.clone()))).collect();
            while let Some(Reverse((_, v, g))) = heap.pop() {
                out.push((g.clone(), v, m.dim(&g, v)));
            }
        }
        Enumeration::BoxScan => {
            let degrees = m.degrees();
            if degrees.is_empty() {
                return out;
            }
            let n = order.dim();
            let lo: Vec<i64> = (0..n).map(|i| degrees.iter().map(|g| g[i]).min().unwrap()).collect();
            let hi: Vec<i64> = (0..n).map(|i| degrees.iter().map(|g| g[i]).max().unwrap()).collect();
            let mut found = Vec::new();
            let mut cur = lo.clone();
            'scan: loop {
                let g = Degree::from(cur.clone());
                for v in 0..m.algebra().vertex_count() {
                    let d = m.dim(&g, v);
                    if d > 0 {
                        found.push((g.clone(), v, d));
                    }
                }
                for i in (0..n).rev() {
                    if cur[i] < hi[i] {
                        cur[i] += 1;
                        continue 'scan;
                    }
                    cur[i] = lo[i];
                }
                break;
            }
            found.sort_by(|a, b| order.cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
            out = found;
        }
    }
    out
}

/// `[M] = Σ_j (Σ_g dim(e_j M_g) x^g)·[S_j]`, exact through the module height.
pub fn composition_multiplicities(m: &GradedModule) -> Result<K0Vector> {
    composition_multiplicities_with(m, Enumeration::PriorityQueue)
}

pub fn composition_multiplicities_with(m: &GradedModule, strategy: Enumeration) -> Result<K0Vector> {
    let alg = m.algebra();
    let support = m.degree_support()?;
    let mut tables: Vec<HashMap<Degree, Scalar>> = vec![HashMap::new(); alg.vertex_count()];
    for (g, v, d) in multiplicity_terms(m, strategy) {
        tables[v].insert(g, scalar::int(d as i64));
    }
    let mut out = K0Vector::zero(alg.order().clone(), alg.simple_basis());
    for (v, values) in tables.into_iter().enumerate() {
        let f = LaurentSeries::from_table(values, support.clone(), alg.weight().to_vec(), m.height())?;
        out.set(alg.vertex_label(v), f)?;
    }
    Ok(out)
}

/// Degree slices `M_{⪰c}/M_{≻c}` in increasing ≺ order, each as `(vertex label, multiplicity)` pairs.
pub fn ordered_composition_series(m: &GradedModule) -> Vec<(Degree, Vec<(String, usize)>)> {
    let alg = m.algebra();
    m.degrees()
        .into_iter()
        .map(|g| {
            let slice = (0..alg.vertex_count())
                .filter(|&v| m.dim(&g, v) > 0)
                .map(|v| (alg.vertex_label(v).to_string(), m.dim(&g, v)))
                .collect();
            (g, slice)
        })
        .collect()
}

/// `P → M → 0` with kernel `K`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    /// `(vertex, shift)` of each summand `x^s R e_j`, ≺-ascending in the shift.
    pub summands: Vec<(usize, Degree)>,
    pub projective: GradedModule,
    pub map: ModuleMorphism,
    pub kernel: GradedModule,
    pub inclusion: ModuleMorphism,
}

/// Top of `M`: for each `(degree, vertex)`, the standard basis vectors
/// completing the span of all arrow images landing there.
pub fn top_generators(m: &GradedModule) -> Vec<(Degree, usize, Vec<Scalar>)> {
    let alg = m.algebra();
    let mut out = Vec::new();
    for g in m.degrees() {
        for v in 0..alg.vertex_count() {
            let d = m.dim(&g, v);
            if d == 0 {
                continue;
            }
            let mut rad = Matrix::zeros(d, 0);
            for a in 0..alg.arrow_count() {
                let arrow = alg.arrow(a);
                if arrow.tgt != v {
                    continue;
                }
                let h = &g - &arrow.degree;
                if m.dim(&h, arrow.src) > 0 {
                    rad = rad.hstack(&m.action(a, &h));
                }
            }
            let comp = if rad.cols() == 0 { (0..d).collect() } else { rad.complement_coordinates() };
            for c in comp {
                let mut e = vec![Scalar::zero(); d];
                e[c] = scalar::one();
                out.push((g.clone(), v, e));
            }
        }
    }
    out
}

pub fn projective_cover(m: &GradedModule) -> Result<ProjectiveCover> {
    let tops = top_generators(m);
    let summands: Vec<(usize, Degree)> = tops.iter().map(|(g, v, _)| (*v, g.clone())).collect();
    let images: Vec<Vec<Scalar>> = tops.into_iter().map(|(_, _, x)| x).collect();
    let projective = grmod::projective_sum(m.algebra(), &summands, m.height())?;
    let map = map_from_projectives(&projective, &summands, &images, m)?;
    let (kernel, inclusion) = map.kernel()?;
    Ok(ProjectiveCover { summands, projective, map, kernel, inclusion })
}

/// `… → P_1 → P_0 → M → 0`, exact through `trusted_height`.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    /// `[P_k]` over the projective basis, one class per step.
    pub classes: Vec<K0Vector>,
    pub summands: Vec<Vec<(usize, Degree)>>,
    pub modules: Vec<GradedModule>,
    pub augmentation: ModuleMorphism,
    /// `d_k: P_k → P_{k−1}` for `k = 1, …`.
    pub differentials: Vec<ModuleMorphism>,
    /// Kernel of the last differential (or of the augmentation).
    pub last_kernel: GradedModule,
    pub trusted_height: i64,
}

impl MinimalResolution {
    /// `Σ_k (−1)^k [P_k]`.
    pub fn alternating_sum(&self) -> Result<K0Vector> {
        let mut acc = self.classes[0].clone();
        for (k, c) in self.classes.iter().enumerate().skip(1) {
            acc = if k % 2 == 0 { acc.add(c)? } else { acc.sub(c)? };
        }
        Ok(acc)
    }

    /// Height through which the alternating sum is exact: later steps only
    /// contribute in degrees of the last kernel.
    pub fn alternating_height(&self) -> i64 {
        let alg = self.last_kernel.algebra();
        let next = self.last_kernel.degrees().iter().map(|g| alg.height_of(g)).min();
        match next {
            Some(h) => self.trusted_height.min(h - 1),
            None => self.trusted_height,
        }
    }

    /// The resolution stopped because the last kernel vanishes within the height.
    pub fn is_complete(&self) -> bool {
        self.last_kernel.is_zero()
    }

    /// No differential hits a generator of its target: images lie in the radical.
    pub fn is_minimal(&self) -> bool {
        for (k, d) in self.differentials.iter().enumerate() {
            let target = &self.summands[k];
            for (g, v, m) in d.blocks() {
                for (t, offset, _) in grmod::projective_blocks(self.modules[k].algebra(), target, g, v) {
                    if target[t].1 == *g && (0..m.cols()).any(|c| !m.get(offset, c).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `P_L → … → P_0` in homological degrees `0..=L`.
    pub fn complex(&self) -> Result<ChainComplex> {
        ChainComplex::new(0, self.modules.clone(), self.differentials.clone())
    }
}

/// Iterates projective covers on successive kernels, for at most `length + 1`
/// steps, stopping early once a kernel vanishes within the height.
pub fn minimal_resolution(m: &GradedModule, length: usize) -> Result<MinimalResolution> {
    let alg = m.algebra().clone();
    let floor = m.degrees().iter().map(|g| alg.height_of(g)).min().unwrap_or(0);
    let mut classes = Vec::new();
    let mut all_summands = Vec::new();
    let mut modules = Vec::new();
    let mut differentials = Vec::new();
    let mut augmentation = None;
    let mut previous_inclusion: Option<ModuleMorphism> = None;
    let mut current = m.clone();
    let mut trusted = m.height();
    for step in 0..=length {
        let cover = projective_cover(&current)?;
        trusted = trusted.min(cover.projective.height());
        if trusted < floor {
            return Err(Error::TruncationExhausted { step });
        }
        classes.push(projective_class(&alg, &cover.summands, trusted)?);
        match &previous_inclusion {
            None => augmentation = Some(cover.map.clone()),
            Some(incl) => differentials.push(incl.compose(&cover.map)?),
        }
        all_summands.push(cover.summands);
        modules.push(cover.projective);
        previous_inclusion = Some(cover.inclusion);
        current = cover.kernel;
        if current.is_zero() {
            break;
        }
    }
    Ok(MinimalResolution {
        classes,
        summands: all_summands,
        modules,
        augmentation: augmentation.expect("at least one step"),
        differentials,
        last_kernel: current,
        trusted_height: trusted,
    })
}

/// `Σ_t x^{s_t} [P_{j_t}]` over the projective basis.
fn projective_class(alg: &Arc<AlgebraTruncation>, summands: &[(usize, Degree)], height: i64) -> Result<K0Vector> {
    let support = grmod::degree_support(alg, summands.iter().map(|(_, s)| s))?;
    let mut tables: Vec<HashMap<Degree, Scalar>> = vec![HashMap::new(); alg.vertex_count()];
    for (j, s) in summands {
        *tables[*j].entry(s.clone()).or_insert_with(Scalar::zero) += scalar::one();
    }
    let mut out = K0Vector::zero(alg.order().clone(), alg.projective_basis());
    for (j, values) in tables.into_iter().enumerate() {
        let f = LaurentSeries::from_table(values, support.clone(), alg.weight().to_vec(), height)?;
        out.set(alg.vertex_label(j), f)?;
    }
    Ok(out)
}

/// `C_hi → … → C_lo` with `d_h: C_h → C_{h−1}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    lo: i64,
    components: Vec<GradedModule>,
    /// `differentials[k]` is `d_{lo+k+1}`.
    differentials: Vec<ModuleMorphism>,
}

impl ChainComplex {
    pub fn new(lo: i64, components: Vec<GradedModule>, differentials: Vec<ModuleMorphism>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Complex("a complex needs at least one component".into()));
        }
        if differentials.len() + 1 != components.len() {
            return Err(Error::Complex(format!(
                "{} components need {} differentials, got {}",
                components.len(),
                components.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if !d.source().same_as(&components[k + 1]) || !d.target().same_as(&components[k]) {
                return Err(Error::Complex(format!("differential {} has the wrong endpoints", lo + k as i64 + 1)));
            }
            d.validate()?;
        }
        for (k, pair) in differentials.windows(2).enumerate() {
            if !pair[0].compose(&pair[1])?.is_zero() {
                return Err(Error::Complex(format!("d∘d is nonzero at homological degree {}", lo + k as i64 + 2)));
            }
        }
        Ok(ChainComplex { lo, components, differentials })
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.lo + self.components.len() as i64 - 1)
    }

    pub fn component(&self, h: i64) -> Option<&GradedModule> {
        usize::try_from(h - self.lo).ok().and_then(|k| self.components.get(k))
    }

    pub fn components(&self) -> &[GradedModule] {
        &self.components
    }

    pub fn differentials(&self) -> &[ModuleMorphism] {
        &self.differentials
    }

    /// `H_h = ker d_h / im d_{h+1}` for every `h` in the range, in order.
    pub fn homology(&self) -> Result<Vec<GradedModule>> {
        let mut out = Vec::with_capacity(self.components.len());
        for k in 0..self.components.len() {
            let c = &self.components[k];
            let (cycles, incl) = match k.checked_sub(1).map(|i| &self.differentials[i]) {
                Some(d) => d.kernel()?,
                None => (c.clone(), ModuleMorphism::identity(c)),
            };
            let h = match self.differentials.get(k) {
                Some(d_in) => d_in.factor_through(&incl)?.cokernel()?.0,
                None => cycles,
            };
            out.push(h);
        }
        Ok(out)
    }

    /// `Σ_h (−1)^h [H_h]`.
    pub fn euler_class(&self) -> Result<K0Vector> {
        alternating(self.lo, &self.homology()?)
    }

    /// `Σ_h (−1)^h [C_h]`.
    pub fn component_class(&self) -> Result<K0Vector> {
        alternating(self.lo, &self.components)
    }
}

fn alternating(lo: i64, modules: &[GradedModule]) -> Result<K0Vector> {
    let mut acc: Option<K0Vector> = None;
    for (k, m) in modules.iter().enumerate() {
        let c = composition_multiplicities(m)?;
        let c = if (lo + k as i64).rem_euclid(2) == 1 { c.negate() } else { c };
        acc = Some(match acc {
            None => c,
            Some(a) => a.add(&c)?,
        });
    }
    Ok(acc.expect("complexes are nonempty"))
}

pub fn homology(x: &ChainComplex) -> Result<Vec<GradedModule>> {
    x.homology()
}

pub fn euler_class(x: &ChainComplex) -> Result<K0Vector> {
    x.euler_class()
}

/// An `(A′, A)`-bimodule: left `A′`-modules `B e_i`, one per vertex `i` of
/// `A`, with right multiplication by the arrows of `A`.
///
/// For an arrow `b: i → j` of `A`, right multiplication maps `B e_j` to
/// `B e_i` and raises degrees by `deg b`; its matrices are keyed by
/// `(b, degree in B e_j, left vertex)`.
#[derive(Clone, Debug)]
pub struct Bimodule {
    right: Arc<AlgebraTruncation>,
    columns: Vec<GradedModule>,
    right_actions: BTreeMap<(usize, Degree, usize), Matrix>,
}

impl Bimodule {
    pub fn new(
        right: Arc<AlgebraTruncation>,
        columns: Vec<GradedModule>,
        right_actions: BTreeMap<(usize, Degree, usize), Matrix>,
    ) -> Result<Self> {
        if columns.len() != right.vertex_count() {
            return Err(Error::Module(format!(
                "bimodule needs {} columns, got {}",
                right.vertex_count(),
                columns.len()
            )));
        }
        if let Some(first) = columns.first() {
            if columns.iter().any(|c| !Arc::ptr_eq(c.algebra(), first.algebra())) {
                return Err(Error::Module("bimodule columns over different algebras".into()));
            }
        }
        let mut right_actions = right_actions;
        right_actions.retain(|_, m| !m.is_zero());
        let b = Bimodule { right, columns, right_actions };
        b.validate()?;
        Ok(b)
    }

    /// `A` as an `(A, A)`-bimodule: column `i` is `R e_i`.
    pub fn regular(alg: &Arc<AlgebraTruncation>) -> Result<Self> {
        let columns: Vec<GradedModule> =
            (0..alg.vertex_count()).map(|i| grmod::projective_module(alg, i)).collect::<Result<_>>()?;
        let mut right_actions = BTreeMap::new();
        for b in 0..alg.arrow_count() {
            let arrow = alg.arrow(b);
            let Some(elem) = alg.arrow_element(b) else {
                continue;
            };
            for (src, v, g, d) in alg.nonzero_slices() {
                if src != arrow.tgt {
                    continue;
                }
                let tg = g + &arrow.degree;
                if alg.height_of(&tg) > alg.height() {
                    continue;
                }
                let mut m = Matrix::zeros(alg.slice_dim(arrow.src, v, &tg), d);
                for p in 0..d {
                    let prod = alg
                        .multiply_basis((arrow.tgt, v, g, p), (arrow.src, &arrow.degree, &elem))
                        .unwrap_or_default();
                    for (r, x) in prod.into_iter().enumerate() {
                        m.set(r, p, x);
                    }
                }
                right_actions.insert((b, g.clone(), v), m);
            }
        }
        Self::new(alg.clone(), columns, right_actions)
    }

    pub fn left(&self) -> Option<&Arc<AlgebraTruncation>> {
        self.columns.first().map(GradedModule::algebra)
    }

    pub fn right(&self) -> &Arc<AlgebraTruncation> {
        &self.right
    }

    pub fn column(&self, i: usize) -> &GradedModule {
        &self.columns[i]
    }

    /// Right multiplication by arrow `b` from `(B e_{tgt b})_g` at left vertex `v`.
    pub fn right_action(&self, b: usize, g: &Degree, v: usize) -> Matrix {
        let arrow = self.right.arrow(b);
        match self.right_actions.get(&(b, g.clone(), v)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(
                self.columns[arrow.src].dim(&(g + &arrow.degree), v),
                self.columns[arrow.tgt].dim(g, v),
            ),
        }
    }

    fn height(&self) -> i64 {
        self.columns.iter().map(GradedModule::height).min().unwrap_or(self.right.height())
    }

    /// Shapes, commutation of left and right actions, and the right relations.
    pub fn validate(&self) -> Result<()> {
        let height = self.height();
        for ((b, g, v), m) in &self.right_actions {
            let arrow = self.right.arrow(*b);
            let rows = self.columns[arrow.src].dim(&(g + &arrow.degree), *v);
            let cols = self.columns[arrow.tgt].dim(g, *v);
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::Module(format!("right action of {} at {g} has the wrong shape", arrow.name)));
            }
        }
        let Some(left) = self.left().cloned() else {
            return Ok(());
        };
        for b in 0..self.right.arrow_count() {
            let rb = self.right.arrow(b);
            for (g, v, _) in self.columns[rb.tgt].spaces() {
                for a in 0..left.arrow_count() {
                    let la = left.arrow(a);
                    if la.src != v {
                        continue;
                    }
                    let top = &(g + &la.degree) + &rb.degree;
                    if left.height_of(&top) > height {
                        continue;
                    }
                    let right_then_left = self.columns[rb.src]
                        .action(a, &(g + &rb.degree))
                        .mul(&self.right_action(b, g, v));
                    let left_then_right =
                        self.right_action(b, &(g + &la.degree), la.tgt).mul(&self.columns[rb.tgt].action(a, g));
                    if right_then_left != left_then_right {
                        return Err(Error::Module(format!(
                            "left action of {} and right action of {} do not commute at {g}",
                            la.name, rb.name
                        )));
                    }
                }
            }
        }
        let p = self.right.presentation();
        for (k, r) in p.relations().iter().enumerate() {
            let shape = p.path_shape(&r.terms[0].0)?;
            for (g, v, d) in self.columns[shape.tgt].spaces() {
                let end = g + &shape.degree;
                if left.height_of(&end) > height {
                    continue;
                }
                let mut total = Matrix::zeros(self.columns[shape.src].dim(&end, v), d);
                for (path, coef) in &r.terms {
                    // m·(b_1∘…∘b_k) = ((m·b_1)·…)·b_k
                    let mut m = Matrix::identity(d);
                    let mut deg = g.clone();
                    for &b in path {
                        m = self.right_action(b, &deg, v).mul(&m);
                        deg = &deg + &self.right.arrow(b).degree;
                    }
                    total = total.add(&m.scale(coef));
                }
                if !total.is_zero() {
                    return Err(Error::Module(format!("right relation {k} does not vanish at {g}")));
                }
            }
        }
        Ok(())
    }

    /// Matrix of the induced map on classes: column `i` is `[B e_i] = [B ⊗_A P_i]`
    /// over the simples of `A′`.
    pub fn functor_matrix(&self) -> Result<SeriesMatrix> {
        let left = self.left().ok_or_else(|| Error::Module("bimodule over an algebra without vertices".into()))?;
        let rows = left.simple_basis();
        let cols = Basis::new(BasisKind::Projective, self.right.presentation().vertices().to_vec());
        let mut entries = vec![Vec::with_capacity(cols.len()); rows.len()];
        for column in &self.columns {
            let class = composition_multiplicities(column)?;
            for (r, label) in rows.labels.iter().enumerate() {
                entries[r].push(class.get(label));
            }
        }
        SeriesMatrix::new(rows, cols, entries)
    }
}

pub fn functor_matrix(b: &Bimodule) -> Result<SeriesMatrix> {
    b.functor_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grmod::{expand_algebra, projective_module, simple_module, QuiverPresentation};
    use crate::order::OrderSpec;

    fn truncated_polynomial(n: usize, height: i64) -> Arc<AlgebraTruncation> {
        let p = QuiverPresentation::from_labels(
            Arc::new(OrderSpec::lex(1)),
            height,
            &["1"],
            &[("x", "1", "1", vec![2])],
            &[vec![(vec!["x"; n], scalar::one())]],
        )
        .unwrap();
        expand_algebra(p).unwrap()
    }

    fn a2(height: i64) -> Arc<AlgebraTruncation> {
        let p = QuiverPresentation::from_labels(
            Arc::new(OrderSpec::lex(1)),
            height,
            &["1", "2"],
            &[("a", "1", "2", vec![1])],
            &[],
        )
        .unwrap();
        expand_algebra(p).unwrap()
    }

    fn d(k: i64) -> Degree {
        Degree::from(vec![k])
    }

    fn dims(m: &GradedModule) -> Vec<(i64, usize, usize)> {
        m.spaces().map(|(g, v, n)| (g[0], v, n)).collect()
    }

    fn coeffs(f: &LaurentSeries, upto: i64) -> Vec<i64> {
        (0..=upto).map(|k| f.coefficient(&d(k)).unwrap().to_integer().try_into().unwrap()).collect()
    }

    #[test]
    fn baric_truncations() {
        let alg = truncated_polynomial(3, 10);
        let r = projective_module(&alg, 0).unwrap();
        let le = beta_le(&r, &d(2));
        assert_eq!(dims(&le), vec![(0, 0, 1), (2, 0, 1)]);
        le.validate().unwrap();
        let gt = beta_gt(&r, &d(2));
        assert_eq!(dims(&gt), vec![(4, 0, 1)]);
        gt.validate().unwrap();
        assert!(beta_gt(&simple_module(&alg, 0).unwrap(), &d(0)).is_zero());
    }

    #[test]
    fn multiplicities_and_series() {
        let alg = truncated_polynomial(3, 10);
        let r = projective_module(&alg, 0).unwrap();
        let c = composition_multiplicities(&r).unwrap();
        assert_eq!(coeffs(&c.get("1"), 6), vec![1, 0, 1, 0, 1, 0, 0]);
        let s = simple_module(&alg, 0).unwrap().shift(&d(4));
        assert_eq!(coeffs(&composition_multiplicities(&s).unwrap().get("1"), 6), vec![0, 0, 0, 0, 1, 0, 0]);
        assert_eq!(
            multiplicity_terms(&r, Enumeration::PriorityQueue),
            multiplicity_terms(&r, Enumeration::BoxScan)
        );
        let series: Vec<(i64, Vec<(String, usize)>)> =
            ordered_composition_series(&r).into_iter().map(|(g, s)| (g[0], s)).collect();
        let one = |n| vec![("1".to_string(), n)];
        assert_eq!(series, vec![(0, one(1)), (2, one(1)), (4, one(1))]);

        let a = a2(4);
        let p1 = projective_module(&a, 0).unwrap();
        let series: Vec<(i64, Vec<(String, usize)>)> =
            ordered_composition_series(&p1).into_iter().map(|(g, s)| (g[0], s)).collect();
        assert_eq!(series, vec![(0, vec![("1".to_string(), 1)]), (1, vec![("2".to_string(), 1)])]);
    }

    #[test]
    fn covers() {
        let alg = truncated_polynomial(3, 12);
        let r = projective_module(&alg, 0).unwrap();
        let cover = projective_cover(&r).unwrap();
        assert_eq!(cover.summands, vec![(0, d(0))]);
        assert!(cover.kernel.is_zero());

        let s = simple_module(&alg, 0).unwrap();
        let cover = projective_cover(&s).unwrap();
        assert_eq!(dims(&cover.kernel), vec![(2, 0, 1), (4, 0, 1)]);
        cover.map.validate().unwrap();
        cover.kernel.validate().unwrap();

        let a = a2(4);
        let cover = projective_cover(&simple_module(&a, 0).unwrap()).unwrap();
        assert_eq!(cover.summands, vec![(0, d(0))]);
        assert_eq!(dims(&cover.kernel), vec![(1, 1, 1)]);
    }

    #[test]
    fn resolution_of_the_simple() {
        let alg = truncated_polynomial(3, 40);
        let s = simple_module(&alg, 0).unwrap();
        let res = minimal_resolution(&s, 4).unwrap();
        let shifts: Vec<Vec<(usize, Degree)>> = res.summands.clone();
        assert_eq!(shifts, vec![vec![(0, d(0))], vec![(0, d(2))], vec![(0, d(6))], vec![(0, d(8))], vec![(0, d(12))]]);
        assert!(res.is_minimal());
        assert_eq!(res.trusted_height, 40);

        let full = minimal_resolution(&s, 100).unwrap();
        assert!(full.is_complete());
        let alt = full.alternating_sum().unwrap().get("1");
        // 1 − q² + q⁶ − q⁸ + … : the reciprocal of 1 + q² + q⁴
        let expect: Vec<i64> = (0..=40)
            .map(|k| match k % 6 {
                0 => 1,
                2 => -1,
                _ => 0,
            })
            .collect();
        assert_eq!(coeffs(&alt, 40), expect);

        let hom = full.complex().unwrap().homology().unwrap();
        assert_eq!(dims(&hom[0]), vec![(0, 0, 1)]);
        assert!(hom[1..].iter().all(GradedModule::is_zero));
    }

    #[test]
    fn resolutions_of_projectives_and_sinks() {
        let alg = truncated_polynomial(3, 12);
        let res = minimal_resolution(&projective_module(&alg, 0).unwrap(), 3).unwrap();
        assert_eq!(res.classes.len(), 1);
        assert!(res.is_complete());
        let a = a2(5);
        let res = minimal_resolution(&simple_module(&a, 1).unwrap(), 3).unwrap();
        assert_eq!(res.summands, vec![vec![(1, d(0))]]);
    }

    #[test]
    fn multiplication_complex() {
        let alg = truncated_polynomial(3, 20);
        let r = projective_module(&alg, 0).unwrap();
        let r2 = r.shift(&d(2));
        let x = alg.arrow_element(0).unwrap();
        let f = map_from_projectives(&r2, &[(0, d(2))], &[x], &r).unwrap();
        f.validate().unwrap();
        let cx = ChainComplex::new(0, vec![r.clone(), r2], vec![f]).unwrap();
        let hom = cx.homology().unwrap();
        assert_eq!(dims(&hom[0]), vec![(0, 0, 1)]);
        assert_eq!(dims(&hom[1]), vec![(6, 0, 1)]);
        let e = cx.euler_class().unwrap();
        assert_eq!(coeffs(&e.get("1"), 10), vec![1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0]);
        assert!(e.agrees_with(&cx.component_class().unwrap(), 20).unwrap());
    }

    #[test]
    fn rejects_bad_complexes() {
        // x·x vanishes in k[x]/(x²) but not in k[x]/(x³)
        for (n, ok) in [(2, true), (3, false)] {
            let alg = truncated_polynomial(n, 10);
            let r = projective_module(&alg, 0).unwrap();
            let x = alg.arrow_element(0).unwrap();
            let r2 = r.shift(&d(2));
            let r4 = r.shift(&d(4));
            let f = map_from_projectives(&r2, &[(0, d(2))], std::slice::from_ref(&x), &r).unwrap();
            let g = map_from_projectives(&r4, &[(0, d(4))], &[vec![scalar::one()]], &r2).unwrap();
            assert_eq!(ChainComplex::new(0, vec![r, r2, r4], vec![f, g]).is_ok(), ok);
        }
    }

    #[test]
    fn regular_bimodule_gives_cartan() {
        for alg in [truncated_polynomial(3, 12), a2(6)] {
            let b = Bimodule::regular(&alg).unwrap();
            let m = b.functor_matrix().unwrap();
            let c = alg.cartan_matrix().unwrap();
            for r in 0..alg.vertex_count() {
                for col in 0..alg.vertex_count() {
                    assert!(m.entry(r, col).agrees_with(c.entry(r, col), alg.height() as u64).unwrap());
                }
            }
        }
    }

    #[test]
    fn simple_as_bimodule_over_the_field() {
        let alg = truncated_polynomial(3, 12);
        let field = expand_algebra(
            QuiverPresentation::from_labels(Arc::new(OrderSpec::lex(1)), 12, &["pt"], &[], &[]).unwrap(),
        )
        .unwrap();
        let col = simple_module(&field, 0).unwrap();
        let b = Bimodule::new(alg, vec![col], BTreeMap::new()).unwrap();
        let m = b.functor_matrix().unwrap();
        assert_eq!(coeffs(m.entry(0, 0), 4), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn bimodule_validation_catches_relations() {
        // right action of x as the identity on a 1-dimensional space violates x³ = 0
        let alg = truncated_polynomial(3, 12);
        let field = expand_algebra(
            QuiverPresentation::from_labels(Arc::new(OrderSpec::lex(1)), 12, &["pt"], &[], &[]).unwrap(),
        )
        .unwrap();
        let mut dims = BTreeMap::new();
        for k in 0..=6 {
            dims.insert((d(2 * k), 0), 1);
        }
        let col = GradedModule::new(field, 12, dims, BTreeMap::new()).unwrap();
        let mut right = BTreeMap::new();
        for k in 0..6 {
            right.insert((0, d(2 * k), 0), Matrix::identity(1));
        }
        assert!(Bimodule::new(alg, vec![col], right).is_err());
    }

    #[test]
    fn submodules_and_quotients() {
        let alg = truncated_polynomial(3, 12);
        let r = projective_module(&alg, 0).unwrap();
        let m = r.direct_sum(&r.shift(&d(2)));
        let gens = vec![(d(2), 0, vec![scalar::one(), scalar::one()])];
        let (n, incl) = generated_submodule(&m, &gens).unwrap();
        n.validate().unwrap();
        incl.validate().unwrap();
        let (q, proj) = incl.cokernel().unwrap();
        q.validate().unwrap();
        proj.validate().unwrap();
        assert_eq!(n.total_dim() + q.total_dim(), m.total_dim());
        assert!(proj.compose(&incl).unwrap().is_zero());
    }
}
