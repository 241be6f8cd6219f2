//! JSON schemas and text rendering shared by the command-line tool.
//!
//! Degrees inside module data are written as comma-separated keys such as
//! `"2"` or `"1,0"`. Rationals are strings `"p/q"` or `"p"`, or plain JSON
//! integers. Paths list arrows in composition order: the rightmost arrow
//! acts first.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grmod::{self, expand_algebra, AlgebraTruncation, Arrow, GradedModule, QuiverPresentation, Relation};
use crate::grothmod::{Basis, K0Vector, SeriesMatrix};
use crate::homalg::{Bimodule, ChainComplex, ModuleMorphism};
use crate::linalg::Matrix;
use crate::order::{Degree, OrderKind, OrderSpec};
use crate::scalar::{self, Scalar};
use crate::series::{self, LaurentSeries};
use crate::support::ConeSupport;

/// Parses JSON, reporting syntax and schema errors with their position.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e)))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types serialize")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderJson {
    Named(String),
    Matrix { matrix: Vec<Vec<i64>> },
}

impl Default for OrderJson {
    fn default() -> Self {
        OrderJson::Named("lex".into())
    }
}

impl OrderJson {
    pub fn build(&self, dim: usize) -> Result<OrderSpec> {
        match self {
            OrderJson::Named(name) if name == "lex" => Ok(OrderSpec::lex(dim)),
            OrderJson::Named(name) => Err(Error::InvalidOrder(format!("unknown order {name:?}"))),
            OrderJson::Matrix { matrix } => {
                let o = OrderSpec::matrix(matrix.clone())?;
                if o.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: o.dim() });
                }
                Ok(o)
            }
        }
    }

    pub fn describe(order: &OrderSpec) -> Self {
        match order.kind() {
            OrderKind::Lex => OrderJson::Named("lex".into()),
            OrderKind::Matrix(_) => OrderJson::Matrix { matrix: order.rows() },
        }
    }

    /// Dimension fixed by the order itself, if any.
    pub fn dim_hint(&self) -> Option<usize> {
        match self {
            OrderJson::Matrix { matrix } => matrix.first().map(Vec::len),
            OrderJson::Named(_) => None,
        }
    }

    /// Parses a command-line value: `lex` or an inline JSON order.
    pub fn parse_flag(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            from_json(text)
        } else {
            Ok(OrderJson::Named(text.trim().to_string()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefJson {
    Text(String),
    Int(i64),
}

impl CoefJson {
    pub fn value(&self) -> Result<Scalar> {
        match self {
            CoefJson::Text(t) => scalar::parse(t),
            CoefJson::Int(n) => Ok(scalar::int(*n)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermJson {
    Pair(Vec<i64>, CoefJson),
    Object { deg: Vec<i64>, coef: CoefJson },
}

impl TermJson {
    fn parts(&self) -> (&[i64], &CoefJson) {
        match self {
            TermJson::Pair(d, c) | TermJson::Object { deg: d, coef: c } => (d, c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportJson {
    pub offset: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
}

/// A finitely supported series, optionally declared on a larger support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u64>,
}

impl SeriesJson {
    fn dim(&self, order_override: Option<&OrderJson>) -> Result<usize> {
        let hinted = order_override.or(self.order.as_ref()).and_then(OrderJson::dim_hint);
        self.dim
            .or(hinted)
            .or_else(|| self.terms.first().map(|t| t.parts().0.len()))
            .or_else(|| self.support.as_ref().map(|s| s.offset.len()))
            .ok_or_else(|| Error::Parse("cannot infer the number of variables of an empty series".into()))
    }

    pub fn build(&self, order_override: Option<&OrderJson>) -> Result<LaurentSeries> {
        let dim = self.dim(order_override)?;
        let order = Arc::new(order_override.or(self.order.as_ref()).cloned().unwrap_or_default().build(dim)?);
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let (d, c) = t.parts();
            if d.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: d.len() });
            }
            terms.push((Degree::from(d.to_vec()), c.value()?));
        }
        let f = match &self.support {
            None => LaurentSeries::polynomial(order, terms)?,
            Some(s) => {
                let support = ConeSupport::new(
                    order,
                    s.offset.clone().into(),
                    s.generators.iter().cloned().map(Degree::from).collect(),
                )?;
                LaurentSeries::from_terms(terms, support)?
            }
        };
        let Some(h) = self.height else {
            return Ok(f);
        };
        // a table known only through `height`, measured from the support offset
        let support = f.support().clone();
        let h = i64::try_from(h).map_err(|_| Error::Parse(format!("height {h} is too large")))?;
        let absolute = h + support.offset().dot(support.weight());
        let values = f.truncate(h as u64)?.into_iter().collect();
        LaurentSeries::from_table(values, support.clone(), support.weight().to_vec(), absolute)
    }
}

impl SupportJson {
    pub fn describe(s: &ConeSupport) -> Self {
        SupportJson { offset: s.offset().to_vec(), generators: s.generators().iter().map(|g| g.to_vec()).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermOut {
    pub deg: Vec<i64>,
    pub coef: String,
}

/// Truncation of a series: every nonzero term through `height`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermTable {
    pub terms: Vec<TermOut>,
    pub height: u64,
}

impl TermTable {
    pub fn new(terms: &[(Degree, Scalar)], height: u64) -> Self {
        TermTable {
            terms: terms.iter().map(|(g, c)| TermOut { deg: g.to_vec(), coef: scalar::format(c) }).collect(),
            height,
        }
    }

    pub fn of(f: &LaurentSeries, height: u64) -> Result<Self> {
        Ok(Self::new(&f.truncate(height)?, height))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesOut {
    pub order: OrderJson,
    pub terms: Vec<TermOut>,
    pub support: SupportJson,
    pub height: u64,
}

impl SeriesOut {
    pub fn of(f: &LaurentSeries, height: u64) -> Result<Self> {
        let t = TermTable::of(f, height)?;
        Ok(SeriesOut {
            order: OrderJson::describe(f.order()),
            terms: t.terms,
            support: SupportJson::describe(f.support()),
            height,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Out {
    pub order: OrderJson,
    pub basis: String,
    pub entries: BTreeMap<String, TermTable>,
}

impl K0Out {
    pub fn of(v: &K0Vector, height: u64) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (label, f) in v.components() {
            entries.insert(label, TermTable::of(&f, height)?);
        }
        Ok(K0Out { order: OrderJson::describe(v.order()), basis: v.basis().kind.to_string(), entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisOut {
    pub kind: String,
    pub labels: Vec<String>,
}

impl BasisOut {
    fn of(b: &Basis) -> Self {
        BasisOut { kind: b.kind.to_string(), labels: b.labels.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixOut {
    pub order: OrderJson,
    pub rows: BasisOut,
    pub cols: BasisOut,
    pub entries: Vec<Vec<TermTable>>,
}

impl MatrixOut {
    pub fn of(m: &SeriesMatrix, order: &OrderSpec, height: u64) -> Result<Self> {
        let entries = m
            .entries()
            .iter()
            .map(|row| row.iter().map(|f| TermTable::of(f, height)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixOut {
            order: OrderJson::describe(order),
            rows: BasisOut::of(m.rows()),
            cols: BasisOut::of(m.cols()),
            entries,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub name: String,
    pub src: String,
    pub tgt: String,
    pub deg: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTermJson {
    pub path: Vec<String>,
    pub coef: CoefJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<i64>,
    /// Number of grading variables; needed only when there are no arrows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowJson>,
    #[serde(default)]
    pub relations: Vec<Vec<RelationTermJson>>,
}

impl PresentationJson {
    /// The presentation, with the height and order optionally overridden.
    pub fn build(&self, height: Option<i64>, order: Option<&OrderJson>) -> Result<QuiverPresentation> {
        let order_json = order.or(self.order.as_ref()).cloned().unwrap_or_default();
        let dim = self
            .dim
            .or_else(|| self.arrows.first().map(|a| a.deg.len()))
            .or_else(|| order_json.dim_hint())
            .unwrap_or(1);
        let order = Arc::new(order_json.build(dim)?);
        let height = height
            .or(self.height)
            .ok_or_else(|| Error::Presentation("no truncation height given".into()))?;
        let vidx = |l: &str| {
            self.vertices.iter().position(|v| v == l).ok_or_else(|| Error::UnknownVertex(l.to_string()))
        };
        let mut arrows = Vec::new();
        for a in &self.arrows {
            arrows.push(Arrow { name: a.name.clone(), src: vidx(&a.src)?, tgt: vidx(&a.tgt)?, degree: a.deg.clone().into() });
        }
        let aidx = |n: &str| {
            arrows.iter().position(|a| a.name == n).ok_or_else(|| Error::Presentation(format!("unknown arrow {n}")))
        };
        let mut relations = Vec::new();
        for r in &self.relations {
            let mut terms = Vec::new();
            for t in r {
                let path = t.path.iter().map(|n| aidx(n)).collect::<Result<Vec<_>>>()?;
                terms.push((path, t.coef.value()?));
            }
            relations.push(Relation { terms });
        }
        QuiverPresentation::new(order, height, self.vertices.clone(), arrows, relations)
    }

    pub fn expand(&self, height: Option<i64>, order: Option<&OrderJson>) -> Result<Arc<AlgebraTruncation>> {
        expand_algebra(self.build(height, order)?)
    }
}

pub type MatrixJson = Vec<Vec<CoefJson>>;

/// Spaces and arrow matrices of a module over a given algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<i64>,
    #[serde(default)]
    pub dims: BTreeMap<String, BTreeMap<String, usize>>,
    #[serde(default)]
    pub arrows: BTreeMap<String, BTreeMap<String, MatrixJson>>,
}

pub fn parse_degree_key(key: &str, dim: usize) -> Result<Degree> {
    let trimmed = key.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    let coords = trimmed
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|_| Error::Parse(format!("invalid degree key {key:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: coords.len() });
    }
    Ok(coords.into())
}

pub fn degree_key(g: &Degree) -> String {
    g.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn build_matrix(m: &MatrixJson, rows: usize, cols: usize, what: &str) -> Result<Matrix> {
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::Shape(format!("{what}: expected a {rows}x{cols} matrix")));
    }
    let data = m.iter().map(|r| r.iter().map(CoefJson::value).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(data, cols))
}

fn matrix_json(m: &Matrix) -> MatrixJson {
    m.to_rows().iter().map(|r| r.iter().map(|x| CoefJson::Text(scalar::format(x))).collect()).collect()
}

impl ModuleJson {
    pub fn build(&self, alg: &Arc<AlgebraTruncation>) -> Result<GradedModule> {
        let n = alg.order().dim();
        let p = alg.presentation();
        let mut dims = BTreeMap::new();
        for (v, table) in &self.dims {
            let vi = p.vertex_index(v)?;
            for (k, d) in table {
                dims.insert((parse_degree_key(k, n)?, vi), *d);
            }
        }
        let dim = |g: &Degree, v: usize| dims.get(&(g.clone(), v)).copied().unwrap_or(0);
        let mut actions = BTreeMap::new();
        for (name, table) in &self.arrows {
            let a = p.arrow_index(name)?;
            let arrow = alg.arrow(a);
            for (k, m) in table {
                let g = parse_degree_key(k, n)?;
                let rows = dim(&(&g + &arrow.degree), arrow.tgt);
                let cols = dim(&g, arrow.src);
                let m = build_matrix(m, rows, cols, &format!("arrow {name} at {g}"))?;
                actions.insert((a, g), m);
            }
        }
        GradedModule::new(alg.clone(), self.height.unwrap_or(alg.height()), dims, actions)
    }

    pub fn describe(m: &GradedModule) -> Self {
        let alg = m.algebra();
        let mut dims: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        for (g, v, d) in m.spaces() {
            dims.entry(alg.vertex_label(v).to_string()).or_default().insert(degree_key(g), d);
        }
        let mut arrows: BTreeMap<String, BTreeMap<String, MatrixJson>> = BTreeMap::new();
        for (a, g, mat) in m.stored_actions() {
            arrows.entry(alg.arrow(a).name.clone()).or_default().insert(degree_key(g), matrix_json(mat));
        }
        ModuleJson { height: Some(m.height()), dims, arrows }
    }
}

/// Blocks of a degree-zero map keyed by vertex label and degree.
pub type MapJson = BTreeMap<String, BTreeMap<String, MatrixJson>>;

fn build_morphism(source: &GradedModule, target: &GradedModule, blocks: &MapJson, what: &str) -> Result<ModuleMorphism> {
    let alg = source.algebra();
    let n = alg.order().dim();
    let mut maps = BTreeMap::new();
    for (v, table) in blocks {
        let vi = alg.presentation().vertex_index(v)?;
        for (k, m) in table {
            let g = parse_degree_key(k, n)?;
            let m = build_matrix(m, target.dim(&g, vi), source.dim(&g, vi), &format!("{what} at {g}, vertex {v}"))?;
            maps.insert((g, vi), m);
        }
    }
    ModuleMorphism::new(source.clone(), target.clone(), maps)
}

/// `{"algebra": …, "range": [lo, hi], "components": {"h": module}, "diff": {"h": map C_h → C_{h−1}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub algebra: PresentationJson,
    pub range: [i64; 2],
    #[serde(default)]
    pub components: BTreeMap<String, ModuleJson>,
    #[serde(default)]
    pub diff: BTreeMap<String, MapJson>,
}

impl ComplexJson {
    pub fn build(&self, height: Option<i64>, order: Option<&OrderJson>) -> Result<ChainComplex> {
        let alg = self.algebra.expand(height, order)?;
        let [lo, hi] = self.range;
        if hi < lo {
            return Err(Error::Complex("empty homological range".into()));
        }
        for k in self.components.keys().chain(self.diff.keys()) {
            let h: i64 = k.parse().map_err(|_| Error::Parse(format!("invalid homological degree {k:?}")))?;
            if h < lo || h > hi {
                return Err(Error::Complex(format!("homological degree {h} outside the range")));
            }
        }
        let mut components = Vec::new();
        for h in lo..=hi {
            let m = match self.components.get(&h.to_string()) {
                Some(m) => m.build(&alg)?,
                None => GradedModule::zero(alg.clone(), alg.height()),
            };
            components.push(m);
        }
        let mut diffs = Vec::new();
        for h in lo + 1..=hi {
            let k = (h - lo) as usize;
            let empty = MapJson::new();
            let blocks = self.diff.get(&h.to_string()).unwrap_or(&empty);
            diffs.push(build_morphism(&components[k], &components[k - 1], blocks, &format!("d_{h}"))?);
        }
        ChainComplex::new(lo, components, diffs)
    }
}

/// Either `{"regular": presentation}` or explicit bimodule data: left `A′`
/// modules `B e_i` per right vertex, and right arrow matrices keyed by
/// `arrow → left vertex → degree in B e_{tgt}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular: Option<PresentationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<PresentationJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<PresentationJson>,
    #[serde(default)]
    pub columns: BTreeMap<String, ModuleJson>,
    #[serde(default)]
    pub right_arrows: BTreeMap<String, MapJson>,
}

impl BimoduleJson {
    pub fn build(&self, height: Option<i64>, order: Option<&OrderJson>) -> Result<Bimodule> {
        if let Some(p) = &self.regular {
            return Bimodule::regular(&p.expand(height, order)?);
        }
        let (Some(l), Some(r)) = (&self.left, &self.right) else {
            return Err(Error::Module("a bimodule needs \"regular\" or both \"left\" and \"right\"".into()));
        };
        let left = l.expand(height, order)?;
        let right = r.expand(height, order)?;
        let rp = right.presentation();
        for k in self.columns.keys() {
            rp.vertex_index(k)?;
        }
        let mut columns = Vec::new();
        for label in rp.vertices() {
            columns.push(match self.columns.get(label) {
                Some(m) => m.build(&left)?,
                None => GradedModule::zero(left.clone(), left.height()),
            });
        }
        let n = left.order().dim();
        let mut right_actions = BTreeMap::new();
        for (name, by_vertex) in &self.right_arrows {
            let b = rp.arrow_index(name)?;
            let arrow = right.arrow(b);
            for (v, table) in by_vertex {
                let vi = left.presentation().vertex_index(v)?;
                for (k, m) in table {
                    let g = parse_degree_key(k, n)?;
                    let rows = columns[arrow.src].dim(&(&g + &arrow.degree), vi);
                    let cols = columns[arrow.tgt].dim(&g, vi);
                    let m = build_matrix(m, rows, cols, &format!("right action of {name} at {g}"))?;
                    right_actions.insert((b, g, vi), m);
                }
            }
        }
        Bimodule::new(right, columns, right_actions)
    }
}

/// Header line echoing the order and the truncation height.
pub fn text_header(order: &OrderSpec, height: u64) -> String {
    let order = match order.kind() {
        OrderKind::Lex => "lex".to_string(),
        OrderKind::Matrix(_) => format!("matrix {:?}", order.rows()),
    };
    format!("# order {order}; height {height}\n")
}

pub fn series_text(f: &LaurentSeries, height: u64) -> Result<String> {
    Ok(format!("{}{}", text_header(f.order(), height), series::format_terms(&f.truncate(height)?)))
}

/// One `[label]` section per basis element.
pub fn k0_text(v: &K0Vector, height: u64) -> Result<String> {
    let mut out = String::new();
    for (label, f) in v.components() {
        out.push_str(&format!("[{} {}]\n", v.basis().kind, label));
        out.push_str(&series::format_terms(&f.truncate(height)?));
    }
    Ok(out)
}

/// One `[row, col]` section per entry.
pub fn matrix_text(m: &SeriesMatrix, height: u64) -> Result<String> {
    let mut out = String::new();
    for (r, row) in m.entries().iter().enumerate() {
        for (c, f) in row.iter().enumerate() {
            out.push_str(&format!("[{} {}, {} {}]\n", m.rows().kind, m.rows().labels[r], m.cols().kind, m.cols().labels[c]));
            out.push_str(&series::format_terms(&f.truncate(height)?));
        }
    }
    Ok(out)
}

/// Dimension table of a module, one `<vertex> <degree> <dim>` line per space.
pub fn module_text(m: &GradedModule) -> String {
    let alg = m.algebra();
    let mut out = String::new();
    for g in m.degrees() {
        for v in 0..alg.vertex_count() {
            let d = m.dim(&g, v);
            if d > 0 {
                out.push_str(&format!("{} {} {}\n", alg.vertex_label(v), g, d));
            }
        }
    }
    out
}

/// Simple modules of a presentation, by label.
pub fn simple_by_label(alg: &Arc<AlgebraTruncation>, label: &str) -> Result<GradedModule> {
    grmod::simple_module(alg, alg.presentation().vertex_index(label)?)
}

/// Coefficient table `degree → coefficient` of a truncation, for comparisons.
pub fn coefficient_map(terms: &[(Degree, Scalar)]) -> HashMap<Degree, Scalar> {
    terms.iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_formats_round_trip() {
        let pairs: SeriesJson = from_json(r#"{"terms":[[[0],"1"],[[2],"-1"]]}"#).unwrap();
        let objects: SeriesJson =
            from_json(r#"{"order":"lex","terms":[{"deg":[0],"coef":"1"},{"deg":[2],"coef":-1}]}"#).unwrap();
        let f = pairs.build(None).unwrap();
        let g = objects.build(None).unwrap();
        assert!(f.agrees_with(&g, 10).unwrap());
        let inv = f.invert(16).unwrap();
        let out = SeriesOut::of(&inv, 6).unwrap();
        let text = to_json(&out);
        let back: SeriesJson = from_json(&text).unwrap();
        let h = back.build(None).unwrap();
        assert_eq!(h.truncate(6).unwrap(), inv.truncate(6).unwrap());
        assert_eq!(series_text(&inv, 4).unwrap(), "# order lex; height 4\n1 x1^0\n1 x1^2\n1 x1^4\n");
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = from_json::<SeriesJson>("{\n  \"terms\": [[[0], \"1\"],\n}").unwrap_err();
        match err {
            Error::Parse(msg) => assert!(msg.starts_with("line 3"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(from_json::<SeriesJson>(r#"{"terms":[[[0],"1/0"]]}"#).unwrap().build(None).is_err());
    }

    #[test]
    fn presentation_and_module() {
        let p: PresentationJson = from_json(
            r#"{"order":"lex","height":8,"vertices":["1"],
                "arrows":[{"name":"x","src":"1","tgt":"1","deg":[2]}],
                "relations":[[{"path":["x","x","x"],"coef":"1"}]]}"#,
        )
        .unwrap();
        let alg = p.expand(None, None).unwrap();
        let m: ModuleJson = from_json(
            r#"{"dims":{"1":{"0":1,"2":1}},"arrows":{"x":{"0":[["1"]]}}}"#,
        )
        .unwrap();
        let m = m.build(&alg).unwrap();
        assert_eq!(m.total_dim(), 2);
        let again = ModuleJson::describe(&m).build(&alg).unwrap();
        assert!(again.same_as(&m));
        let bad: ModuleJson = from_json(r#"{"dims":{"1":{"0":1}},"arrows":{"x":{"0":[["1"]]}}}"#).unwrap();
        assert!(bad.build(&alg).is_err());
    }

    #[test]
    fn complex_from_json() {
        let c: ComplexJson = from_json(
            r#"{"algebra":{"height":12,"vertices":["1"],"arrows":[{"name":"x","src":"1","tgt":"1","deg":[2]}],
                 "relations":[[{"path":["x","x","x"],"coef":1}]]},
                "range":[0,1],
                "components":{
                  "0":{"dims":{"1":{"0":1,"2":1,"4":1}},"arrows":{"x":{"0":[[1]],"2":[[1]]}}},
                  "1":{"dims":{"1":{"2":1,"4":1,"6":1}},"arrows":{"x":{"2":[[1]],"4":[[1]]}}}},
                "diff":{"1":{"1":{"2":[[1]],"4":[[1]]}}}}"#,
        )
        .unwrap();
        let x = c.build(None, None).unwrap();
        let e = x.euler_class().unwrap().get("1");
        assert_eq!(e.truncate(12).unwrap().len(), 2);
    }
}
