//! Dense exact linear algebra: matrices, echelon forms, solving, kernels,
//! subspaces and quotient spaces.
//!
//! Matrices act on column vectors. Echelon forms always pivot on the leftmost
//! nonzero column, so a [`Subspace`] has a canonical basis and subspace
//! equality is plain `==`.

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    Singular,
}

pub fn zeros<F: Field>(n: usize) -> Vec<F> {
    vec![F::zero(); n]
}

pub fn unit<F: Field>(n: usize, i: usize) -> Vec<F> {
    let mut v = zeros(n);
    v[i] = F::one();
    v
}

pub fn is_zero<F: Field>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// `y += a * x`
pub fn axpy<F: Field>(y: &mut [F], a: &F, x: &[F]) {
    debug_assert_eq!(y.len(), x.len());
    if a.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        yi.add_mul(a, xi);
    }
}

pub fn scale<F: Field>(a: &F, x: &[F]) -> Vec<F> {
    x.iter().map(|xi| a.mul_ref(xi)).collect()
}

pub fn add<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let mut s = a.clone();
            s.add_assign_ref(b);
            s
        })
        .collect()
}

pub fn sub<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let mut s = a.clone();
            s.sub_assign_ref(b);
            s
        })
        .collect()
}

pub fn dot<F: Field>(x: &[F], y: &[F]) -> F {
    let mut s = F::zero();
    for (a, b) in x.iter().zip(y) {
        s.add_mul(a, b);
    }
    s
}

/// Flattened outer product: index `i * y.len() + j` holds `x[i] * y[j]`.
pub fn kron_vec<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    let mut out = zeros(x.len() * y.len());
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            if !b.is_zero() {
                out[i * y.len() + j] = a.mul_ref(b);
            }
        }
    }
    out
}

/// First index where two vectors differ, for witnesses.
pub fn first_difference<F: Field>(x: &[F], y: &[F]) -> Option<usize> {
    x.iter().zip(y).position(|(a, b)| a != b)
}

pub fn fmt_vec<F: Field>(v: &[F]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: zeros(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self, LaError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(LaError::DimensionMismatch(format!(
                    "row {i} has length {} but expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Mat { rows: n, cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<F>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.data[i * cols.len() + j] = x.clone();
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

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut F {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[F]) {
        assert_eq!(v.len(), self.rows);
        for (i, x) in v.iter().enumerate() {
            self.set(i, j, x.clone());
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.data)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_zero() {
                    t.set(j, i, x.clone());
                }
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "mul_vec: dimension mismatch");
        let mut out: Vec<F> = zeros(self.rows);
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                o.add_mul(self.get(i, j), vj);
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.rows, "vec_mul: dimension mismatch");
        let mut out = zeros(self.cols);
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero() {
                axpy(&mut out, vi, self.row(i));
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, rhs.rows, "mul: dimension mismatch");
        let mut out: Mat<F> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let (o, r) = (i * rhs.cols, k * rhs.cols);
                for j in 0..rhs.cols {
                    let b = &rhs.data[r + j];
                    out.data[o + j].add_mul(a, b);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat { rows: self.rows, cols: self.cols, data: add(&self.data, &rhs.data) }
    }

    pub fn sub(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat { rows: self.rows, cols: self.cols, data: sub(&self.data, &rhs.data) }
    }

    pub fn scale(&self, a: &F) -> Mat<F> {
        Mat { rows: self.rows, cols: self.cols, data: scale(a, &self.data) }
    }

    /// Kronecker product; `(A ⊗ B)(x ⊗ y) = Ax ⊗ By` with [`kron_vec`] layout.
    pub fn kron(&self, rhs: &Mat<F>) -> Mat<F> {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = Mat::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.set(i * rhs.rows + k, j * rhs.cols + l, a.mul_ref(b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Mat::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        out
    }

    pub fn vstack(&self, rhs: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        Mat { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat<F> {
        let mut out = Mat::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reduced row echelon form with leftmost-nonzero pivoting.
    pub fn rref(&self) -> Echelon<F> {
        let mut rows = self.to_rows();
        let pivots = rref_rows(&mut rows, self.cols);
        rows.truncate(pivots.len());
        Echelon { cols: self.cols, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Null space as a canonical subspace.
    pub fn kernel(&self) -> Subspace<F> {
        let ech = self.rref();
        let vecs = ech.kernel_vectors();
        Subspace::span(self.cols, vecs)
    }

    /// Image (column space) as a canonical subspace.
    pub fn image(&self) -> Subspace<F> {
        let cols: Vec<Vec<F>> = (0..self.cols).map(|j| self.col(j)).collect();
        Subspace::span(self.rows, cols)
    }

    /// Exact solution of `self * x = b`. If the solution set is an affine
    /// space of positive dimension, the free coordinates are set to zero.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, LaError> {
        if b.len() != self.rows {
            return Err(LaError::DimensionMismatch(format!(
                "solve: {} rows but right-hand side of length {}",
                self.rows,
                b.len()
            )));
        }
        let bm = Mat::from_cols(&[b.to_vec()], self.rows);
        let x = self.solve_many(&bm)?;
        Ok(x.col(0))
    }

    /// Solves `self * X = B` column by column with one elimination.
    pub fn solve_many(&self, b: &Mat<F>) -> Result<Mat<F>, LaError> {
        if b.rows != self.rows {
            return Err(LaError::DimensionMismatch(format!(
                "solve: {} rows but right-hand side has {}",
                self.rows, b.rows
            )));
        }
        let aug = self.hstack(b);
        let ech = aug.rref();
        if ech.pivots.iter().any(|&p| p >= self.cols) {
            return Err(LaError::NoSolution);
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (r, &p) in ech.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, ech.rows[r][self.cols + j].clone());
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Mat<F>, LaError> {
        if self.rows != self.cols {
            return Err(LaError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        if self.rank() != self.rows {
            return Err(LaError::Singular);
        }
        self.solve_many(&Mat::identity(self.rows))
    }
}

/// Row-reduces in place and returns the pivot columns; rows are reordered so
/// the first `pivots.len()` rows carry the pivots.
fn rref_rows<F: Field>(rows: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul_ref(&inv);
                }
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row.is_empty() || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    let t = f.mul_ref(y);
                    x.sub_assign_ref(&t);
                }
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A matrix in reduced row echelon form (zero rows dropped).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<F> {
    pub cols: usize,
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// One kernel vector per free column.
    pub fn kernel_vectors(&self) -> Vec<Vec<F>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zeros(self.cols);
            v[f] = F::one();
            for (r, &p) in self.pivots.iter().enumerate() {
                let x = &self.rows[r][f];
                if !x.is_zero() {
                    v[p] = -x.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

/// A linear subspace of `F^ambient` with its canonical echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn span(ambient: usize, vectors: Vec<Vec<F>>) -> Self {
        let mut rows = vectors;
        for v in &rows {
            assert_eq!(v.len(), ambient, "span: vector of wrong length");
        }
        let pivots = rref_rows(&mut rows, ambient);
        rows.truncate(pivots.len());
        Subspace { ambient, basis: rows, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| unit(ambient, i)).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coords(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.ambient);
        let c: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut r = v.to_vec();
        for (ci, b) in c.iter().zip(&self.basis) {
            let neg = -ci.clone();
            axpy(&mut r, &neg, b);
        }
        if is_zero(&r) {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        other.ambient == self.ambient && other.basis.iter().all(|v| self.contains(v))
    }

    /// Linear combination of the basis with the given coordinates.
    pub fn element(&self, coords: &[F]) -> Vec<F> {
        assert_eq!(coords.len(), self.dim());
        let mut out = zeros(self.ambient);
        for (c, b) in coords.iter().zip(&self.basis) {
            axpy(&mut out, c, b);
        }
        out
    }

    pub fn sum(&self, other: &Subspace<F>) -> Subspace<F> {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Self::span(self.ambient, v)
    }

    pub fn intersection(&self, other: &Subspace<F>) -> Subspace<F> {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.ambient);
        }
        // Solve sum_i a_i u_i - sum_j b_j w_j = 0.
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| w.iter().map(|x| -x.clone()).collect()));
        let m = Mat::from_cols(&cols, self.ambient);
        let ker = m.kernel();
        let vecs = ker
            .basis
            .iter()
            .map(|k| self.element(&k[..self.dim()]))
            .collect();
        Self::span(self.ambient, vecs)
    }

    /// Image under a linear map.
    pub fn map(&self, m: &Mat<F>) -> Subspace<F> {
        Self::span(m.rows(), self.basis.iter().map(|b| m.mul_vec(b)).collect())
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Mat<F> {
        Mat::from_cols(&self.basis, self.ambient)
    }
}

/// The quotient of `F^ambient` by a relations subspace.
///
/// Representatives are the ambient coordinates that are not pivots of the
/// echelonized relations; `project` maps ambient vectors to coordinates on
/// those representatives and `section` embeds them back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient<F> {
    ambient: usize,
    reps: Vec<usize>,
    project: Mat<F>,
}

impl<F: Field> Quotient<F> {
    pub fn from_relations(ambient: usize, relations: &Subspace<F>) -> Self {
        assert_eq!(relations.ambient(), ambient);
        let mut is_pivot = vec![false; ambient];
        for &p in relations.pivots() {
            is_pivot[p] = true;
        }
        let reps: Vec<usize> = (0..ambient).filter(|&c| !is_pivot[c]).collect();
        let mut project = Mat::zeros(reps.len(), ambient);
        for (k, &q) in reps.iter().enumerate() {
            project.set(k, q, F::one());
        }
        // Each relation row is e_p + (entries on reps) ~ 0.
        for (row, &p) in relations.basis().iter().zip(relations.pivots()) {
            for (k, &q) in reps.iter().enumerate() {
                let x = &row[q];
                if !x.is_zero() {
                    project.set(k, p, -x.clone());
                }
            }
        }
        Quotient { ambient, reps, project }
    }

    /// The quotient by the kernel of `map`, without materializing the
    /// kernel. Produces the same representatives and projection as
    /// [`Quotient::from_relations`] applied to `map.kernel()`.
    pub fn from_map(map: &Mat<F>) -> Self {
        let ambient = map.cols();
        // Column j is a representative iff map(e_j) is independent of the
        // later columns; scan right to left with an incremental echelon.
        let mut basis: Vec<(usize, Vec<F>)> = Vec::new();
        let mut reps = Vec::new();
        for j in (0..ambient).rev() {
            let mut v = map.col(j);
            for (p, b) in &basis {
                if !v[*p].is_zero() {
                    let f = v[*p].div_ref(&b[*p]).expect("nonzero pivot");
                    let neg = -f;
                    axpy(&mut v, &neg, b);
                }
            }
            if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                basis.push((p, v));
                reps.push(j);
            }
        }
        reps.reverse();
        let rq = map.select_cols(&reps);
        let project = rq.solve_many(map).expect("representative columns span the image");
        Quotient { ambient, reps, project }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn project_matrix(&self) -> &Mat<F> {
        &self.project
    }

    pub fn project(&self, v: &[F]) -> Vec<F> {
        self.project.mul_vec(v)
    }

    /// Quotient coordinates of the ambient basis vector `e_j`.
    pub fn project_basis(&self, j: usize) -> Vec<F> {
        self.project.col(j)
    }

    pub fn section(&self, coords: &[F]) -> Vec<F> {
        assert_eq!(coords.len(), self.dim());
        let mut v = zeros(self.ambient);
        for (c, &q) in coords.iter().zip(&self.reps) {
            v[q] = c.clone();
        }
        v
    }

    pub fn relations(&self) -> Subspace<F> {
        self.project.kernel()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, Q};
    use num_traits::Zero;

    fn m(rows: &[&[i64]]) -> Mat<Q> {
        let cols = rows[0].len();
        Mat::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Q::from_i64(x)).collect()).collect(),
            cols,
        )
        .unwrap()
    }

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| Q::from_i64(x)).collect()
    }

    #[test]
    fn solve_identity_and_scalar() {
        let b = v(&[3, -1, 2]);
        assert_eq!(Mat::<Q>::identity(3).solve(&b).unwrap(), b);
        assert_eq!(m(&[&[2]]).solve(&v(&[1])).unwrap(), vec![q(1, 2)]);
    }

    #[test]
    fn solve_reports_errors() {
        assert_eq!(m(&[&[1, 1], &[1, 1]]).solve(&v(&[1, 2])), Err(LaError::NoSolution));
        assert!(matches!(m(&[&[1]]).solve(&v(&[1, 2])), Err(LaError::DimensionMismatch(_))));
    }

    #[test]
    fn solve_zeroes_free_coordinates() {
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        let x = a.solve(&v(&[2, 3])).unwrap();
        assert_eq!(x, v(&[2, 0, 3]));
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        assert_eq!(Mat::<Q>::zeros(2, 2).kernel(), Subspace::full(2));
        assert_eq!(Mat::<Q>::identity(2).kernel().dim(), 0);
    }

    #[test]
    fn subspace_equality_is_canonical() {
        let a = Subspace::span(3, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]);
        let b = Subspace::span(3, vec![v(&[1, 2, 1]), v(&[2, 1, -1])]);
        assert_eq!(a, b);
        assert!(a.contains(&v(&[1, 0, -1])));
        assert!(!a.contains(&v(&[1, 0, 0])));
    }

    #[test]
    fn intersection_and_sum() {
        let a = Subspace::span(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersection(&b), Subspace::span(3, vec![v(&[0, 1, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(3));
    }

    #[test]
    fn quotient_trivial_cases() {
        let q0 = Quotient::<Q>::from_relations(3, &Subspace::zero(3));
        assert_eq!(q0.project_matrix(), &Mat::identity(3));
        let rel = Subspace::span(2, vec![v(&[1, -1])]);
        let q1 = Quotient::from_relations(2, &rel);
        assert_eq!(q1.dim(), 1);
        assert_eq!(q1.reps(), &[1]);
        assert!(q1.project(&v(&[1, -1])).iter().all(|x| x.is_zero()));
        assert_eq!(q1.project(&v(&[1, 0])), v(&[1]));
    }

    #[test]
    fn quotient_from_map_matches_relations() {
        let a = m(&[&[1, 2, 0, 1], &[0, 0, 1, 1], &[1, 2, 1, 2]]);
        let via_map = Quotient::from_map(&a);
        let via_rel = Quotient::from_relations(4, &a.kernel());
        assert_eq!(via_map, via_rel);
        assert_eq!(via_map.relations(), a.kernel());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(LaError::Singular));
    }

    #[test]
    fn kron_matches_vector_layout() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let x = v(&[1, 2]);
        let y = v(&[3, 5]);
        assert_eq!(a.kron(&b).mul_vec(&kron_vec(&x, &y)), kron_vec(&a.mul_vec(&x), &b.mul_vec(&y)));
    }
}
