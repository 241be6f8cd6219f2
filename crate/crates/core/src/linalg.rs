//! Sparse exact linear algebra over the rationals.
//!
//! Matrices act on column vectors: an `r x c` matrix maps a `c`-dimensional
//! space to an `r`-dimensional one. Rows are stored as column-sorted lists of
//! nonzero entries. Elimination always pivots on the first nonzero entry, so
//! every basis choice is deterministic.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::scalar::{self, Scalar};

type Row = Vec<(usize, Scalar)>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Row>,
}

fn zero_ref() -> &'static Scalar {
    static ZERO: OnceLock<Scalar> = OnceLock::new();
    ZERO.get_or_init(Scalar::zero)
}

/// `target += factor · source`, dropping cancelled entries.
fn axpy(target: &Row, factor: &Scalar, source: &Row) -> Row {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let ti = target.get(i).map_or(usize::MAX, |e| e.0);
        let sj = source.get(j).map_or(usize::MAX, |e| e.0);
        if ti < sj {
            out.push(target[i].clone());
            i += 1;
        } else if sj < ti {
            out.push((sj, factor * &source[j].1));
            j += 1;
        } else {
            let v = &target[i].1 + factor * &source[j].1;
            if !v.is_zero() {
                out.push((ti, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_rows() {
            let row: Vec<String> = row.iter().map(scalar::format).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, Scalar::one())]).collect() }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let n = rows.len();
        let data = rows
            .into_iter()
            .map(|row| {
                assert_eq!(row.len(), cols, "ragged matrix rows");
                row.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Matrix { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| scalar::int(v)).collect()).collect(),
            cols,
        )
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(columns: &[Vec<Scalar>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.data[r].push((c, v.clone()));
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        match self.data[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => &self.data[r][i].1,
            Err(_) => zero_ref(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(i) if v.is_zero() => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = v,
            Err(_) if v.is_zero() => {}
            Err(i) => row.insert(i, (c, v)),
        }
    }

    /// Nonzero entries of row `r` as `(column, value)`, by increasing column.
    pub fn row_entries(&self, r: usize) -> &[(usize, Scalar)] {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.data
            .iter()
            .map(|row| {
                let mut dense = vec![Scalar::zero(); self.cols];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                t.data[*c].push((r, v.clone()));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        let mut acc: Vec<Scalar> = vec![Scalar::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut seen = vec![false; other.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &other.data[*k] {
                    if !seen[*c] {
                        seen[*c] = true;
                        touched.push(*c);
                    }
                    acc[*c] += a * b;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                seen[c] = false;
                let v = std::mem::replace(&mut acc[c], Scalar::zero());
                if !v.is_zero() {
                    out.data[r].push((c, v));
                }
            }
            touched.clear();
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let one = Scalar::one();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &one, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        if s.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|row| row.iter().map(|(c, v)| (*c, v * s)).collect()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero();
                for (c, a) in row {
                    if !v[*c].is_zero() {
                        acc += a * &v[*c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Columns `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row = a.clone();
                row.extend(b.iter().map(|(c, v)| (c + self.cols, v.clone())));
                row
            })
            .collect();
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut position: Vec<Vec<usize>> = vec![Vec::new(); self.cols];
        for (j, &c) in cols.iter().enumerate() {
            position[c].push(j);
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut out: Row =
                    row.iter().flat_map(|(c, v)| position[*c].iter().map(move |&j| (j, v.clone()))).collect();
                out.sort_unstable_by_key(|e| e.0);
                out
            })
            .collect();
        Matrix { rows: self.rows, cols: cols.len(), data }
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix { rows: rows.len(), cols: self.cols, data: rows.iter().map(|&r| self.data[r].clone()).collect() }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        while row < m.rows {
            // rows from `row` on are zero left of every remaining pivot, so
            // the next pivot column is their least leading column
            let Some((p, col)) = (row..m.rows)
                .filter_map(|r| m.data[r].first().map(|e| (r, e.0)))
                .min_by_key(|&(r, c)| (c, r))
            else {
                break;
            };
            m.data.swap(row, p);
            let inv = m.data[row][0].1.recip();
            if !inv.is_one() {
                for e in &mut m.data[row] {
                    e.1 = &e.1 * &inv;
                }
            }
            let pivot = std::mem::take(&mut m.data[row]);
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = match m.data[r].binary_search_by_key(&col, |e| e.0) {
                    Ok(i) => -m.data[r][i].1.clone(),
                    Err(_) => continue,
                };
                m.data[r] = axpy(&m.data[r], &factor, &pivot);
            }
            m.data[row] = pivot;
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, as columns of a `cols x k` matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut index = vec![usize::MAX; self.cols];
        for (j, &f) in free.iter().enumerate() {
            index[f] = j;
        }
        let mut k = Matrix::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.data[f].push((j, Scalar::one()));
        }
        for (i, &p) in pivots.iter().enumerate() {
            for (c, v) in &r.data[i] {
                if !is_pivot[*c] {
                    k.data[p].push((index[*c], -v.clone()));
                }
            }
        }
        k
    }

    /// Indices of columns forming a basis of the column space (first-nonzero pivoting).
    pub fn independent_columns(&self) -> Vec<usize> {
        self.rref().1
    }

    /// A basis of the column space in reduced column echelon form, with the
    /// rows where it restricts to the identity.
    ///
    /// Coordinates of a vector `x` in the column space are then `x` at those rows.
    pub fn column_echelon(&self) -> (Matrix, Vec<usize>) {
        let (r, pivots) = self.transpose().rref();
        let rows: Vec<usize> = (0..pivots.len()).collect();
        (r.select_rows(&rows).transpose(), pivots)
    }

    /// Standard basis indices whose vectors complete the column space to the
    /// whole ambient space.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        let (_, pivots) = self.transpose().rref();
        let mut is_pivot = vec![false; self.rows];
        for p in pivots {
            is_pivot[p] = true;
        }
        (0..self.rows).filter(|&r| !is_pivot[r]).collect()
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let x = self.solve_matrix(&Matrix::from_columns(&[b.to_vec()], self.rows))?;
        Some(x.column(0))
    }

    /// Solves `self * X = B` column by column. `None` if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.rows, self.rows);
        let aug = self.hstack(b);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x.data[p] = r.data[i].iter().filter(|(c, _)| *c >= self.cols).map(|(c, v)| (c - self.cols, v.clone())).collect();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve_matrix(&Matrix::identity(self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated() {
        let a = Matrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn complement_spans_with_image() {
        let a = Matrix::from_i64(&[vec![1], vec![1], vec![0]]);
        let comp = a.complement_coordinates();
        assert_eq!(comp, vec![1, 2]);
        let mut basis = a.clone();
        for c in comp {
            let mut e = vec![Scalar::zero(); 3];
            e[c] = Scalar::one();
            basis = basis.hstack(&Matrix::from_columns(&[e], 3));
        }
        assert_eq!(basis.rank(), 3);
    }

    fn small_matrix() -> impl proptest::strategy::Strategy<Value = Matrix> {
        use proptest::prelude::*;
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], c), r)
                .prop_map(|rows| Matrix::from_i64(&rows))
        })
    }

    proptest::proptest! {
        #[test]
        fn elimination_invariants(a in small_matrix(), b in small_matrix()) {
            let k = a.kernel();
            proptest::prop_assert!(a.mul(&k).is_zero());
            proptest::prop_assert_eq!(a.rank() + k.cols(), a.cols());
            proptest::prop_assert_eq!(a.rank(), a.transpose().rank());

            let (e, pivots) = a.column_echelon();
            proptest::prop_assert_eq!(e.select_rows(&pivots), Matrix::identity(pivots.len()));
            proptest::prop_assert_eq!(a.hstack(&e).rank(), a.rank());
            proptest::prop_assert_eq!(e.cols(), a.rank());
            // every column of a is read off at the pivot rows
            proptest::prop_assert_eq!(e.mul(&a.select_rows(&pivots)), a.clone());

            let comp = a.complement_coordinates();
            let full = a.hstack(&Matrix::identity(a.rows()).select_columns(&comp));
            proptest::prop_assert_eq!(full.rank(), a.rows());

            if a.cols() == b.rows() {
                let ab = a.mul(&b);
                let dense: Vec<Vec<Scalar>> = (0..a.rows())
                    .map(|r| {
                        (0..b.cols())
                            .map(|c| (0..a.cols()).fold(Scalar::zero(), |acc, k| acc + a.get(r, k) * b.get(k, c)))
                            .collect()
                    })
                    .collect();
                proptest::prop_assert_eq!(ab, Matrix::from_rows(dense, b.cols()));
            }
            if a.rows() == b.rows() {
                match a.solve_matrix(&b) {
                    Some(x) => proptest::prop_assert_eq!(a.mul(&x), b.clone()),
                    None => proptest::prop_assert!(a.hstack(&b).rank() > a.rank()),
                }
            }
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = Matrix::from_i64(&[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        let x = a.solve(&[scalar::int(3), scalar::int(2)]).unwrap();
        assert_eq!(x, vec![scalar::int(1), scalar::int(1)]);
        let singular = Matrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        assert!(singular.inverse().is_none());
        assert!(singular.solve(&[scalar::int(1), scalar::int(0)]).is_none());
    }
}
