//! Finite-dimensional unital associative algebras given by structure
//! constants, together with inclusions, centralizers, conditional
//! expectations, dual bases, separability elements and Markov certificates.
//!
//! Elements are coordinate vectors in the algebra's basis. Subalgebras are
//! echelon [`Subspace`]s of an ambient algebra; [`Algebra::subalgebra`]
//! produces their induced structure constants when needed.

use thiserror::Error;

use crate::exactla::{axpy, fmt_vec, is_zero, kron_vec, sub, unit, zeros, LaError, Mat, Quotient, Subspace};
use crate::field::Field;
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("inconsistent structure data: {0}")]
    Shape(String),
    #[error("not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit fails on basis element {0}")]
    BadUnit(usize),
    #[error("not a unital subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("embedding is not an injective unital algebra map: {0}")]
    BadInclusion(String),
    #[error("not a conditional expectation: {0}")]
    BadExpectation(String),
    #[error("no dual bases: {0}")]
    NoDualBases(String),
    #[error("not Kanzaki separable: {0}")]
    NotKanzaki(String),
    #[error("not separable: {0}")]
    NotSeparable(String),
    #[error(transparent)]
    Linear(#[from] LaError),
}

/// A unital associative algebra with basis `e_0..e_{dim-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra<F> {
    dim: usize,
    /// `table[i * dim + j]` lists the nonzero coordinates of `e_i e_j`.
    table: Vec<Vec<(usize, F)>>,
    unit: Vec<F>,
    labels: Vec<String>,
}

impl<F: Field> Algebra<F> {
    /// Validates associativity on all basis triples and the unit on all
    /// basis elements.
    pub fn new(dim: usize, table: Vec<Vec<(usize, F)>>, unit: Vec<F>, labels: Vec<String>) -> Result<Self, AlgebraError> {
        if table.len() != dim * dim {
            return Err(AlgebraError::Shape(format!("expected {} products, got {}", dim * dim, table.len())));
        }
        if unit.len() != dim {
            return Err(AlgebraError::Shape(format!("unit has length {} but dim is {dim}", unit.len())));
        }
        if labels.len() != dim {
            return Err(AlgebraError::Shape(format!("{} labels for dim {dim}", labels.len())));
        }
        let mut clean = Vec::with_capacity(table.len());
        for row in table {
            let mut acc: Vec<F> = zeros(dim);
            for (k, c) in row {
                if k >= dim {
                    return Err(AlgebraError::Shape(format!("basis index {k} out of range")));
                }
                acc[k].add_assign_ref(&c);
            }
            clean.push(sparse(&acc));
        }
        let a = Algebra { dim, table: clean, unit, labels };
        a.validate()?;
        Ok(a)
    }

    /// Builds from a dense product rule `(i, j) -> e_i e_j`.
    pub fn from_fn(dim: usize, unit: Vec<F>, labels: Vec<String>, f: impl Fn(usize, usize) -> Vec<F>) -> Result<Self, AlgebraError> {
        let mut table = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j);
                if v.len() != dim {
                    return Err(AlgebraError::Shape(format!("product ({i}, {j}) has length {}", v.len())));
                }
                table.push(sparse(&v));
            }
        }
        Self::new(dim, table, unit, labels)
    }

    /// Builds from `(i, j, k, c)` entries meaning `e_i e_j` has coefficient
    /// `c` on `e_k`; repeated entries add.
    pub fn from_entries(dim: usize, entries: &[(usize, usize, usize, F)], unit: Vec<F>, labels: Vec<String>) -> Result<Self, AlgebraError> {
        let mut table = vec![Vec::new(); dim * dim];
        for (i, j, k, c) in entries {
            if *i >= dim || *j >= dim {
                return Err(AlgebraError::Shape(format!("product index ({i}, {j}) out of range")));
            }
            table[i * dim + j].push((*k, c.clone()));
        }
        Self::new(dim, table, unit, labels)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let d = self.dim;
        for i in 0..d {
            let ei = unit(d, i);
            if self.mul(&self.unit, &ei) != ei || self.mul(&ei, &self.unit) != ei {
                return Err(AlgebraError::BadUnit(i));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let eij = self.basis_product(i, j);
                for k in 0..d {
                    let lhs = self.mul_sparse_basis(eij, k);
                    let mut rhs: Vec<F> = zeros(d);
                    for (m, c) in self.basis_product(j, k) {
                        for (n, c2) in self.basis_product(i, *m) {
                            rhs[*n].add_mul(c, c2);
                        }
                    }
                    if lhs != rhs {
                        return Err(AlgebraError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    fn mul_sparse_basis(&self, x: &[(usize, F)], k: usize) -> Vec<F> {
        let mut out: Vec<F> = zeros(self.dim);
        for (m, c) in x {
            for (n, c2) in self.basis_product(*m, k) {
                out[*n].add_mul(c, c2);
            }
        }
        out
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground() -> Self {
        Self::diagonal(1)
    }

    /// `k^n` with pointwise product and idempotent basis.
    pub fn diagonal(n: usize) -> Self {
        let labels = (1..=n).map(|i| format!("p{i}")).collect();
        Self::from_fn(n, vec![F::one(); n], labels, |i, j| if i == j { unit(n, i) } else { zeros(n) })
            .expect("k^n is an algebra")
    }

    /// `M_n(k)` on matrix units; `e_{ij}` has index `i * n + j`.
    pub fn matrix(n: usize) -> Self {
        let d = n * n;
        let mut one: Vec<F> = zeros(d);
        for i in 0..n {
            one[i * n + i] = F::one();
        }
        let labels = (0..d).map(|a| format!("e{}{}", a / n + 1, a % n + 1)).collect();
        Self::from_fn(d, one, labels, |a, b| {
            let (i, j, k, l) = (a / n, a % n, b / n, b % n);
            if j == k {
                unit(d, i * n + l)
            } else {
                zeros(d)
            }
        })
        .expect("matrix units form an algebra")
    }

    /// `A ⊗ B` on basis `a * dim(B) + b`.
    pub fn tensor(&self, other: &Algebra<F>) -> Algebra<F> {
        let (d1, d2) = (self.dim, other.dim);
        let labels = (0..d1 * d2)
            .map(|x| format!("{}*{}", self.labels[x / d2], other.labels[x % d2]))
            .collect();
        let unit = kron_vec(&self.unit, &other.unit);
        Self::from_fn(d1 * d2, unit, labels, |x, y| {
            let p = self.mul_basis(x / d2, y / d2);
            let q = other.mul_basis(x % d2, y % d2);
            kron_vec(&p, &q)
        })
        .expect("tensor product of algebras is an algebra")
    }

    pub fn opposite(&self) -> Algebra<F> {
        Self::from_fn(self.dim, self.unit.clone(), self.labels.clone(), |i, j| self.mul_basis(j, i))
            .expect("opposite of an algebra is an algebra")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn one(&self) -> Vec<F> {
        self.unit.clone()
    }

    pub fn unit_ref(&self) -> &[F] {
        &self.unit
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, F)] {
        &self.table[i * self.dim + j]
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Vec<F> {
        let mut v: Vec<F> = zeros(self.dim);
        for (k, c) in self.basis_product(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    /// Nonzero structure constants as `(i, j, k, c)`.
    pub fn entries(&self) -> Vec<(usize, usize, usize, F)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in self.basis_product(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &[F], y: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out: Vec<F> = zeros(self.dim);
        let ys: Vec<(usize, &F)> = y.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(j, yj) in &ys {
                let row = self.basis_product(i, j);
                if row.is_empty() {
                    continue;
                }
                let s = xi.mul_ref(yj);
                for (k, c) in row {
                    out[*k].add_mul(&s, c);
                }
            }
        }
        out
    }

    /// Product of several elements, left to right.
    pub fn mul_all(&self, xs: &[&[F]]) -> Vec<F> {
        let mut acc = self.one();
        for x in xs {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn commutator(&self, x: &[F], y: &[F]) -> Vec<F> {
        sub(&self.mul(x, y), &self.mul(y, x))
    }

    /// Matrix of `y ↦ x y`.
    pub fn left_matrix(&self, x: &[F]) -> Mat<F> {
        let cols: Vec<Vec<F>> = (0..self.dim).map(|j| self.mul(x, &unit(self.dim, j))).collect();
        Mat::from_cols(&cols, self.dim)
    }

    /// Matrix of `y ↦ y x`.
    pub fn right_matrix(&self, x: &[F]) -> Mat<F> {
        let cols: Vec<Vec<F>> = (0..self.dim).map(|j| self.mul(&unit(self.dim, j), x)).collect();
        Mat::from_cols(&cols, self.dim)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// `{x : xs = sx for all s in sub}`.
    pub fn centralizer(&self, sub: &Subspace<F>) -> Subspace<F> {
        assert_eq!(sub.ambient(), self.dim);
        if sub.dim() == 0 {
            return Subspace::full(self.dim);
        }
        let mut m: Option<Mat<F>> = None;
        for s in sub.basis() {
            let block = self.right_matrix(s).sub(&self.left_matrix(s));
            m = Some(match m {
                None => block,
                Some(acc) => acc.vstack(&block),
            });
        }
        m.expect("nonempty").kernel()
    }

    pub fn center(&self) -> Subspace<F> {
        self.centralizer(&Subspace::full(self.dim))
    }

    /// Checks that `sub` contains 1 and is closed under products.
    pub fn check_subalgebra(&self, sub: &Subspace<F>) -> Result<(), AlgebraError> {
        if !sub.contains(&self.unit) {
            return Err(AlgebraError::NotSubalgebra("does not contain the unit".into()));
        }
        for (i, a) in sub.basis().iter().enumerate() {
            for (j, b) in sub.basis().iter().enumerate() {
                if !sub.contains(&self.mul(a, b)) {
                    return Err(AlgebraError::NotSubalgebra(format!("product of basis elements {i} and {j} leaves the subspace")));
                }
            }
        }
        Ok(())
    }

    /// Induced algebra on a subalgebra, in the coordinates of its echelon
    /// basis.
    pub fn subalgebra(&self, sub: &Subspace<F>) -> Result<Algebra<F>, AlgebraError> {
        self.check_subalgebra(sub)?;
        let b = sub.basis();
        let r = b.len();
        let unit = sub.coords(&self.unit).expect("unit is in the subalgebra");
        let labels = (0..r).map(|i| format!("b{i}")).collect();
        Algebra::from_fn(r, unit, labels, |i, j| sub.coords(&self.mul(&b[i], &b[j])).expect("closed"))
    }

    /// Solves for `f ∈ A ⊗ A` with `a f = f a` for all basis `a` and
    /// `μ(f) = 1`, optionally also `f` flip-symmetric. Returns the canonical
    /// solution and whether it is the only one.
    fn solve_separability(&self, symmetric: bool) -> Result<(Vec<F>, bool), LaError> {
        let d = self.dim;
        let n = d * d;
        let mut rows: Vec<Vec<F>> = Vec::new();
        let mut rhs: Vec<F> = Vec::new();
        // (e_a ⊗ 1) f - f (1 ⊗ e_a) = 0, coordinate (p, q):
        // sum_{i,j} f_ij ([e_a e_i]_p [j = q] - [i = p] [e_j e_a]_q).
        for a in 0..d {
            let mut block = vec![zeros::<F>(n); n];
            for i in 0..d {
                for j in 0..d {
                    let col = i * d + j;
                    for (p, c) in self.basis_product(a, i) {
                        block[p * d + j][col].add_assign_ref(c);
                    }
                    for (q, c) in self.basis_product(j, a) {
                        block[i * d + q][col].sub_assign_ref(c);
                    }
                }
            }
            for row in block {
                if !is_zero(&row) {
                    rows.push(row);
                    rhs.push(F::zero());
                }
            }
        }
        if symmetric {
            for i in 0..d {
                for j in (i + 1)..d {
                    let mut row: Vec<F> = zeros(n);
                    row[i * d + j] = F::one();
                    row[j * d + i] = -F::one();
                    rows.push(row);
                    rhs.push(F::zero());
                }
            }
        }
        // mu(f) = 1.
        let mut mu_rows = vec![zeros::<F>(n); d];
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.basis_product(i, j) {
                    mu_rows[*k][i * d + j].add_assign_ref(c);
                }
            }
        }
        for (k, row) in mu_rows.into_iter().enumerate() {
            rows.push(row);
            rhs.push(self.unit[k].clone());
        }
        let m = Mat::from_rows(rows, n)?;
        let f = m.solve(&rhs)?;
        let unique = m.rank() == n;
        Ok((f, unique))
    }

    /// A separability element (not necessarily symmetric).
    pub fn separability_element(&self) -> Result<SeparabilityElement<F>, AlgebraError> {
        match self.solve_separability(false) {
            Ok((f, unique)) => Ok(SeparabilityElement { dim: self.dim, f, unique }),
            Err(LaError::NoSolution) => Err(AlgebraError::NotSeparable("no f with af = fa and μ(f) = 1".into())),
            Err(e) => Err(e.into()),
        }
    }

    /// The symmetric separability element, if the algebra is Kanzaki
    /// separable.
    pub fn kanzaki_element(&self) -> Result<SeparabilityElement<F>, AlgebraError> {
        let sep = match self.solve_separability(true) {
            Ok((f, unique)) => SeparabilityElement { dim: self.dim, f, unique },
            Err(LaError::NoSolution) => {
                return Err(AlgebraError::NotKanzaki("no symmetric f with af = fa and μ(f) = 1".into()))
            }
            Err(e) => return Err(e.into()),
        };
        sep.verify(self, true).map_err(AlgebraError::NotKanzaki)?;
        Ok(sep)
    }

    /// `Tr(L_x)`, the trace of the left regular representation.
    pub fn regular_trace(&self) -> Vec<F> {
        (0..self.dim)
            .map(|i| {
                let mut t = F::zero();
                for j in 0..self.dim {
                    for (k, c) in self.basis_product(i, j) {
                        if *k == j {
                            t.add_assign_ref(c);
                        }
                    }
                }
                t
            })
            .collect()
    }
}

fn sparse<F: Field>(v: &[F]) -> Vec<(usize, F)> {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect()
}

/// `f = Σ f_ij e_i ⊗ e_j`, flattened with index `i * dim + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparabilityElement<F> {
    pub dim: usize,
    pub f: Vec<F>,
    /// Whether the defining linear system has exactly one solution.
    pub unique: bool,
}

impl<F: Field> SeparabilityElement<F> {
    /// Re-verifies `(a ⊗ 1) f = f (1 ⊗ a)` and `μ(f) = 1`, and symmetry if asked.
    pub fn verify(&self, alg: &Algebra<F>, symmetric: bool) -> Result<(), String> {
        let d = self.dim;
        let mut mu: Vec<F> = zeros(d);
        for (idx, c) in self.f.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut mu, c, &alg.mul_basis(idx / d, idx % d));
            }
        }
        if mu != alg.one() {
            return Err(format!("μ(f) = {}", fmt_vec(&mu)));
        }
        for a in 0..d {
            let mut lhs: Vec<F> = zeros(d * d);
            let mut rhs: Vec<F> = zeros(d * d);
            for (idx, c) in self.f.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (i, j) = (idx / d, idx % d);
                for (p, x) in alg.basis_product(a, i) {
                    lhs[p * d + j].add_mul(c, x);
                }
                for (q, x) in alg.basis_product(j, a) {
                    rhs[i * d + q].add_mul(c, x);
                }
            }
            if lhs != rhs {
                return Err(format!("a f != f a for basis element {a}"));
            }
        }
        if symmetric {
            for i in 0..d {
                for j in 0..d {
                    if self.f[i * d + j] != self.f[j * d + i] {
                        return Err(format!("f is not flip-symmetric at ({i}, {j})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// The legs as pairs `(f¹_i, f²_i)` of basis-coordinate vectors.
    pub fn legs(&self) -> Vec<(Vec<F>, Vec<F>)> {
        let d = self.dim;
        self.f
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| {
                let mut a: Vec<F> = zeros(d);
                a[idx / d] = c.clone();
                (a, unit(d, idx % d))
            })
            .collect()
    }
}

/// An injective unital algebra map `small → big`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inclusion<F> {
    pub small: Algebra<F>,
    pub big: Algebra<F>,
    /// `big.dim() × small.dim()`; column `j` is the image of `e_j`.
    pub embed: Mat<F>,
}

impl<F: Field> Inclusion<F> {
    pub fn new(small: Algebra<F>, big: Algebra<F>, embed: Mat<F>) -> Result<Self, AlgebraError> {
        if embed.rows() != big.dim() || embed.cols() != small.dim() {
            return Err(AlgebraError::Shape(format!(
                "embedding is {}x{} but algebras have dims {} and {}",
                embed.rows(),
                embed.cols(),
                small.dim(),
                big.dim()
            )));
        }
        if embed.mul_vec(small.unit_ref()) != big.one() {
            return Err(AlgebraError::BadInclusion("does not preserve the unit".into()));
        }
        for i in 0..small.dim() {
            for j in 0..small.dim() {
                let lhs = embed.mul_vec(&small.mul_basis(i, j));
                let rhs = big.mul(&embed.col(i), &embed.col(j));
                if lhs != rhs {
                    return Err(AlgebraError::BadInclusion(format!("not multiplicative on ({i}, {j})")));
                }
            }
        }
        if embed.rank() != small.dim() {
            return Err(AlgebraError::BadInclusion("not injective".into()));
        }
        Ok(Inclusion { small, big, embed })
    }

    /// `k·1 ⊆ A`.
    pub fn scalars(big: Algebra<F>) -> Self {
        let embed = Mat::from_cols(&[big.one()], big.dim());
        Inclusion { small: Algebra::ground(), big, embed }
    }

    pub fn image(&self) -> Subspace<F> {
        self.embed.image()
    }

    pub fn up(&self, n: &[F]) -> Vec<F> {
        self.embed.mul_vec(n)
    }

    /// `C_big(small)`.
    pub fn centralizer(&self) -> Subspace<F> {
        self.big.centralizer(&self.image())
    }
}

/// An `N`-bimodule projection `E: M → N` with `E ∘ embed = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondExpectation<F> {
    pub incl: Inclusion<F>,
    /// `small.dim() × big.dim()`.
    pub e: Mat<F>,
}

impl<F: Field> CondExpectation<F> {
    pub fn new(incl: Inclusion<F>, e: Mat<F>) -> Result<Self, AlgebraError> {
        let (ds, db) = (incl.small.dim(), incl.big.dim());
        if e.rows() != ds || e.cols() != db {
            return Err(AlgebraError::Shape(format!("expectation is {}x{}, expected {ds}x{db}", e.rows(), e.cols())));
        }
        if e.mul(&incl.embed) != Mat::identity(ds) {
            return Err(AlgebraError::BadExpectation("E is not the identity on the subalgebra".into()));
        }
        for n in 0..ds {
            let en = incl.embed.col(n);
            for x in 0..db {
                let ex = e.col(x);
                let ux = unit(db, x);
                if e.mul_vec(&incl.big.mul(&en, &ux)) != incl.small.mul(&unit(ds, n), &ex) {
                    return Err(AlgebraError::BadExpectation(format!("E(n x) != n E(x) for n = e{n}, x = e{x}")));
                }
                if e.mul_vec(&incl.big.mul(&ux, &en)) != incl.small.mul(&ex, &unit(ds, n)) {
                    return Err(AlgebraError::BadExpectation(format!("E(x n) != E(x) n for n = e{n}, x = e{x}")));
                }
            }
        }
        Ok(CondExpectation { incl, e })
    }

    pub fn small(&self) -> &Algebra<F> {
        &self.incl.small
    }

    pub fn big(&self) -> &Algebra<F> {
        &self.incl.big
    }

    /// `E(x)` in small coordinates.
    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.e.mul_vec(x)
    }

    /// `E(x)` embedded back into the big algebra.
    pub fn apply_up(&self, x: &[F]) -> Vec<F> {
        self.incl.up(&self.apply(x))
    }

    /// `E(xM) = 0 ⇒ x = 0` and `E(Mx) = 0 ⇒ x = 0`.
    pub fn is_nondegenerate(&self) -> bool {
        let db = self.big().dim();
        [false, true].iter().all(|&flip| {
            let cols: Vec<Vec<F>> = (0..db)
                .map(|x| {
                    (0..db)
                        .flat_map(|j| {
                            let p = if flip { self.big().mul_basis(j, x) } else { self.big().mul_basis(x, j) };
                            self.apply(&p)
                        })
                        .collect()
                })
                .collect();
            Mat::from_cols(&cols, db * self.small().dim()).rank() == db
        })
    }

    /// Basis elements of `big` generating it as a right module over `small`.
    fn right_generators(&self) -> Vec<usize> {
        let db = self.big().dim();
        let small_basis: Vec<Vec<F>> = (0..self.small().dim()).map(|n| self.incl.embed.col(n)).collect();
        let mut span = Subspace::zero(db);
        let mut gens = Vec::new();
        for m in 0..db {
            if span.dim() == db {
                break;
            }
            let em = unit(db, m);
            if span.contains(&em) {
                continue;
            }
            let mut vecs = span.basis().to_vec();
            vecs.extend(small_basis.iter().map(|n| self.big().mul(&em, n)));
            span = Subspace::span(db, vecs);
            gens.push(m);
        }
        gens
    }
}

/// Dual bases `{x_i}, {y_i}` for a conditional expectation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBases<F> {
    pub xs: Vec<Vec<F>>,
    pub ys: Vec<Vec<F>>,
    /// `c` when `x_i y_i = c·1`.
    pub lambda_inv: Option<F>,
}

impl<F: Field> DualBases<F> {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Checks `E(m x_i) y_i = m = x_i E(y_i m)` on every basis element `m`.
    pub fn verify(&self, e: &CondExpectation<F>) -> Result<(), String> {
        let big = e.big();
        let d = big.dim();
        for m in 0..d {
            let em = unit(d, m);
            let mut left: Vec<F> = zeros(d);
            let mut right: Vec<F> = zeros(d);
            for (x, y) in self.xs.iter().zip(&self.ys) {
                let a = e.apply_up(&big.mul(&em, x));
                left = crate::exactla::add(&left, &big.mul(&a, y));
                let b = e.apply_up(&big.mul(y, &em));
                right = crate::exactla::add(&right, &big.mul(x, &b));
            }
            if left != em {
                return Err(format!("E(m x_i) y_i != m for m = e{m}: got {}", fmt_vec(&left)));
            }
            if right != em {
                return Err(format!("x_i E(y_i m) != m for m = e{m}: got {}", fmt_vec(&right)));
            }
        }
        Ok(())
    }

    /// `Σ x_i y_i`.
    pub fn product_sum(&self, big: &Algebra<F>) -> Vec<F> {
        let mut s: Vec<F> = zeros(big.dim());
        for (x, y) in self.xs.iter().zip(&self.ys) {
            s = crate::exactla::add(&s, &big.mul(x, y));
        }
        s
    }

    /// `Σ y_i x_i`.
    pub fn reversed_product_sum(&self, big: &Algebra<F>) -> Vec<F> {
        let mut s: Vec<F> = zeros(big.dim());
        for (x, y) in self.xs.iter().zip(&self.ys) {
            s = crate::exactla::add(&s, &big.mul(y, x));
        }
        s
    }
}

/// If `v = c·1`, returns `c`.
pub fn scalar_of<F: Field>(alg: &Algebra<F>, v: &[F]) -> Option<F> {
    let one = alg.unit_ref();
    let p = one.iter().position(|c| !c.is_zero())?;
    let c = v[p].div_ref(&one[p])?;
    if crate::exactla::scale(&c, one) == v {
        Some(c)
    } else {
        None
    }
}

/// Solves for dual bases of `e`, with every `x_i, y_i` in `within` when
/// given. The `y_i` run over the echelon basis of `within` (or of the big
/// algebra); the `x_i` are the canonical solution of the resulting linear
/// system, and pairs with `x_i = 0` are dropped.
pub fn find_dual_bases<F: Field>(e: &CondExpectation<F>, within: Option<&Subspace<F>>) -> Result<DualBases<F>, AlgebraError> {
    let big = e.big();
    let d = big.dim();
    let w = match within {
        Some(w) => w.clone(),
        None => Subspace::full(d),
    };
    let r = w.dim();
    let basis = w.basis();
    // x_i E(y_i m) = m for generators m of big as a right small-module
    // suffices, since both sides are right small-linear in m.
    let gens = e.right_generators();
    let mut cols: Vec<Vec<F>> = Vec::with_capacity(r * r);
    let pre: Vec<Vec<Vec<F>>> = (0..r)
        .map(|i| gens.iter().map(|&g| e.apply_up(&big.mul(&basis[i], &unit(d, g)))).collect())
        .collect();
    for pre_i in &pre {
        for wk in basis {
            let mut col = Vec::with_capacity(gens.len() * d);
            for p in pre_i {
                col.extend(big.mul(wk, p));
            }
            cols.push(col);
        }
    }
    let rhs: Vec<F> = gens.iter().flat_map(|&g| unit::<F>(d, g)).collect();
    let m = Mat::from_cols(&cols, gens.len() * d);
    let c = match m.solve(&rhs) {
        Ok(c) => c,
        Err(LaError::NoSolution) => {
            let cert = infeasibility_certificate(&m, &rhs)
                .map(|y| format!("left null vector {} pairs to a nonzero value with the target", fmt_vec(&y)))
                .unwrap_or_default();
            return Err(AlgebraError::NoDualBases(format!("linear system is infeasible; {cert}")));
        }
        Err(err) => return Err(err.into()),
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..r {
        let mut x: Vec<F> = zeros(d);
        for k in 0..r {
            axpy(&mut x, &c[i * r + k], &basis[k]);
        }
        if !is_zero(&x) {
            xs.push(x);
            ys.push(basis[i].clone());
        }
    }
    let mut db = DualBases { xs, ys, lambda_inv: None };
    db.verify(e).map_err(AlgebraError::NoDualBases)?;
    db.lambda_inv = scalar_of(big, &db.product_sum(big));
    Ok(db)
}

/// A vector `y` with `yᵀA = 0` and `y·b ≠ 0`, proving `Ax = b` infeasible.
pub fn infeasibility_certificate<F: Field>(a: &Mat<F>, b: &[F]) -> Option<Vec<F>> {
    let ker = a.transpose().kernel();
    ker.basis().iter().find(|y| !crate::exactla::dot(y, b).is_zero()).cloned()
}

/// A violation of `E(ux) = E(xu)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryViolation<F> {
    pub u: Vec<F>,
    pub x: usize,
    pub e_ux: Vec<F>,
    pub e_xu: Vec<F>,
}

impl<F: Field> SymmetryViolation<F> {
    pub fn describe(&self) -> String {
        format!(
            "u = {}, x = e{}: E(ux) = {}, E(xu) = {}",
            fmt_vec(&self.u),
            self.x,
            fmt_vec(&self.e_ux),
            fmt_vec(&self.e_xu)
        )
    }
}

/// Checks `E(ux) = E(xu)` for basis `u` of `u_space` and basis `x` of the big
/// algebra.
pub fn is_symmetric<F: Field>(e: &CondExpectation<F>, u_space: &Subspace<F>) -> Result<(), SymmetryViolation<F>> {
    let big = e.big();
    for u in u_space.basis() {
        for x in 0..big.dim() {
            let ex = unit(big.dim(), x);
            let a = e.apply(&big.mul(u, &ex));
            let b = e.apply(&big.mul(&ex, u));
            if a != b {
                return Err(SymmetryViolation { u: u.clone(), x, e_ux: a, e_xu: b });
            }
        }
    }
    Ok(())
}

/// `M ⊗_N M` as the quotient of `M ⊗ M` by `mn ⊗ m' - m ⊗ nm'`.
pub fn relative_tensor<F: Field>(incl: &Inclusion<F>) -> Quotient<F> {
    let big = &incl.big;
    let d = big.dim();
    let mut rels = Vec::new();
    for n in 0..incl.small.dim() {
        let en = incl.embed.col(n);
        let right: Vec<Vec<F>> = (0..d).map(|m| big.mul(&unit(d, m), &en)).collect();
        let left: Vec<Vec<F>> = (0..d).map(|m| big.mul(&en, &unit(d, m))).collect();
        for (m, mn) in right.iter().enumerate() {
            for (mp, nmp) in left.iter().enumerate() {
                let r = sub(&kron_vec(mn, &unit(d, mp)), &kron_vec(&unit(d, m), nmp));
                if !is_zero(&r) {
                    rels.push(r);
                }
            }
        }
    }
    Quotient::from_relations(d * d, &Subspace::span(d * d, rels))
}

/// An extension `N ⊆ M` with conditional expectation and a trace on `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovExtension<F> {
    pub cond: CondExpectation<F>,
    /// Functional on the small algebra.
    pub trace: Vec<F>,
}

impl<F: Field> MarkovExtension<F> {
    /// `T_0 = T ∘ E` as a functional on the big algebra.
    pub fn composite_trace(&self) -> Vec<F> {
        self.cond.e.vec_mul(&self.trace)
    }
}

/// The verified properties of a Markov extension.
#[derive(Clone, Debug)]
pub struct MarkovCertificate<F> {
    pub ext: MarkovExtension<F>,
    pub dual_bases: DualBases<F>,
    pub lambda_inv: Option<F>,
    /// `U = C_M(N)`.
    pub u: Subspace<F>,
    /// Symmetric separability element of `U`, in `U`'s echelon coordinates.
    pub kanzaki: Option<SeparabilityElement<F>>,
    /// Dual bases `a_i, b_i` of `T_0|_U`, as elements of `M`.
    pub u_trace_duals: Option<(Vec<Vec<F>>, Vec<Vec<F>>)>,
    pub report: Report,
}

pub const CERT_ANCHOR: &str = "Markov extension";

impl<F: Field> MarkovCertificate<F> {
    pub fn symmetric(&self) -> bool {
        self.report.passed("symmetric-expectation")
    }

    pub fn strongly_separable(&self) -> bool {
        self.report.passed("expectation-unital") && self.report.passed("strongly-separable")
    }

    pub fn weakly_irreducible(&self) -> bool {
        self.report.passed("centralizer-kanzaki") && self.report.passed("centralizer-trace-nondegenerate")
    }

    pub fn all_passed(&self) -> bool {
        self.report.all_passed()
    }

    pub fn lambda(&self) -> Option<F> {
        self.lambda_inv.as_ref().and_then(|l| l.inv())
    }
}

/// Dual bases of a trace form `t` restricted to a subalgebra `sub`,
/// obtained by [`find_dual_bases`] for the extension `k ⊆ sub`.
pub fn trace_dual_bases<F: Field>(alg: &Algebra<F>, sub: &Subspace<F>, t: &[F]) -> Result<(Vec<Vec<F>>, Vec<Vec<F>>), AlgebraError> {
    let s = alg.subalgebra(sub)?;
    let t_sub: Vec<F> = sub.basis().iter().map(|b| crate::exactla::dot(t, b)).collect();
    let tone = crate::exactla::dot(&t_sub, s.unit_ref());
    let Some(inv) = tone.inv() else {
        return Err(AlgebraError::NoDualBases("trace vanishes on the unit".into()));
    };
    // Normalize so that the functional is a unital projection onto k·1;
    // rescale the x_i afterwards.
    let norm: Vec<F> = t_sub.iter().map(|c| c.mul_ref(&inv)).collect();
    let incl = Inclusion::scalars(s.clone());
    let cond = CondExpectation::new(incl, Mat::from_rows(vec![norm], s.dim())?)?;
    let db = find_dual_bases(&cond, None)?;
    let xs = db.xs.iter().map(|x| sub.element(&crate::exactla::scale(&inv, x))).collect();
    let ys = db.ys.iter().map(|y| sub.element(y)).collect();
    Ok((xs, ys))
}

/// Runs every check of a Markov extension on a full basis.
pub fn certify_markov<F: Field>(ext: MarkovExtension<F>, dual_bases: DualBases<F>) -> MarkovCertificate<F> {
    let cond = &ext.cond;
    let big = cond.big();
    let small = cond.small();
    let mut report = Report::new("Markov extension certificate");
    let anchor = CERT_ANCHOR;

    report.push(Check::from_result("dual-bases", anchor, dual_bases.verify(cond)));
    let e1 = cond.apply(&big.one());
    report.push(if e1 == small.one() {
        Check::pass("expectation-unital", anchor)
    } else {
        Check::fail("expectation-unital", anchor, format!("E(1) = {}", fmt_vec(&e1)))
    });
    report.push(if cond.is_nondegenerate() {
        Check::pass("expectation-nondegenerate", anchor)
    } else {
        Check::fail("expectation-nondegenerate", anchor, "x ↦ E(x·) has a kernel")
    });
    let s = dual_bases.product_sum(big);
    let lambda_inv = scalar_of(big, &s).filter(|c| !c.is_zero());
    report.push(match &lambda_inv {
        Some(_) => Check::pass("strongly-separable", anchor),
        None => Check::fail("strongly-separable", anchor, format!("x_i y_i = {}", fmt_vec(&s))),
    });
    let t1 = crate::exactla::dot(&ext.trace, small.unit_ref());
    report.push(if t1.is_one() {
        Check::pass("trace-normalized", anchor)
    } else {
        Check::fail("trace-normalized", anchor, format!("T(1) = {t1}"))
    });
    let t0 = ext.composite_trace();
    let mut trace_ok = Ok(());
    'outer: for i in 0..big.dim() {
        for j in 0..i {
            let a = crate::exactla::dot(&t0, &big.mul_basis(i, j));
            let b = crate::exactla::dot(&t0, &big.mul_basis(j, i));
            if a != b {
                trace_ok = Err(format!("T0(e{i} e{j}) = {a} but T0(e{j} e{i}) = {b}"));
                break 'outer;
            }
        }
    }
    report.push(Check::from_result("composite-trace", anchor, trace_ok));

    let u = cond.incl.centralizer();
    report.push(Check::from_result(
        "symmetric-expectation",
        anchor,
        is_symmetric(cond, &u).map_err(|v| v.describe()),
    ));
    let kanzaki = big.subalgebra(&u).and_then(|ua| ua.kanzaki_element());
    report.push(Check::from_result(
        "centralizer-kanzaki",
        anchor,
        kanzaki.as_ref().map(|_| ()).map_err(|e| e.to_string()),
    ));
    let u_trace_duals = trace_dual_bases(big, &u, &t0);
    report.push(Check::from_result(
        "centralizer-trace-nondegenerate",
        anchor,
        u_trace_duals.as_ref().map(|_| ()).map_err(|e| e.to_string()),
    ));

    MarkovCertificate {
        dual_bases,
        lambda_inv,
        u,
        kanzaki: kanzaki.ok(),
        u_trace_duals: u_trace_duals.ok(),
        report,
        ext,
    }
}

/// Checks `x_i u ⊗ y_i = x_i ⊗ u y_i` in `M ⊗_N M` for every basis `u` of
/// `U`.
pub fn casimir_shift_check<F: Field>(cert: &MarkovCertificate<F>) -> Result<(), String> {
    let cond = &cert.ext.cond;
    let big = cond.big();
    let q = relative_tensor(&cond.incl);
    for (k, u) in cert.u.basis().iter().enumerate() {
        let mut lhs: Vec<F> = zeros(q.ambient());
        let mut rhs: Vec<F> = zeros(q.ambient());
        for (x, y) in cert.dual_bases.xs.iter().zip(&cert.dual_bases.ys) {
            lhs = crate::exactla::add(&lhs, &kron_vec(&big.mul(x, u), y));
            rhs = crate::exactla::add(&rhs, &kron_vec(x, &big.mul(u, y)));
        }
        if q.project(&lhs) != q.project(&rhs) {
            return Err(format!("fails for centralizer basis element {k}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, Fp, F2, Q};
    use num_traits::{One, Zero};

    fn qv(xs: &[(i64, i64)]) -> Vec<Q> {
        xs.iter().map(|&(a, b)| q(a, b)).collect()
    }

    /// `Q ⊆ Q²` with `E(a, b) = (a + b) / 2`.
    fn q_in_q2() -> CondExpectation<Q> {
        let incl = Inclusion::scalars(Algebra::<Q>::diagonal(2));
        CondExpectation::new(incl, Mat::from_rows(vec![qv(&[(1, 2), (1, 2)])], 2).unwrap()).unwrap()
    }

    /// `Q ⊆ M_2(Q)` with `E = tr / 2`.
    fn q_in_m2() -> CondExpectation<Q> {
        let incl = Inclusion::scalars(Algebra::<Q>::matrix(2));
        CondExpectation::new(incl, Mat::from_rows(vec![qv(&[(1, 2), (0, 1), (0, 1), (1, 2)])], 4).unwrap()).unwrap()
    }

    /// Diagonal `Q² ⊆ M_2(Q)` with the diagonal projection.
    fn q2_in_m2() -> CondExpectation<Q> {
        let embed = Mat::from_rows(vec![qv(&[(1, 1), (0, 1)]), qv(&[(0, 1), (0, 1)]), qv(&[(0, 1), (0, 1)]), qv(&[(0, 1), (1, 1)])], 2).unwrap();
        let incl = Inclusion::new(Algebra::diagonal(2), Algebra::matrix(2), embed).unwrap();
        let e = Mat::from_rows(vec![qv(&[(1, 1), (0, 1), (0, 1), (0, 1)]), qv(&[(0, 1), (0, 1), (0, 1), (1, 1)])], 4).unwrap();
        CondExpectation::new(incl, e).unwrap()
    }

    #[test]
    fn basic_algebras_are_valid() {
        assert_eq!(Algebra::<Q>::ground().dim(), 1);
        assert!(Algebra::<Q>::diagonal(2).is_commutative());
        let m2 = Algebra::<Q>::matrix(2);
        assert_eq!(m2.center(), Subspace::span(4, vec![m2.one()]));
    }

    #[test]
    fn rejects_non_associative_and_bad_unit() {
        let labels = || vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let one = vec![Q::one(), Q::zero(), Q::zero()];
        let err = Algebra::<Q>::from_fn(3, one.clone(), labels(), |i, j| match (i, j) {
            (0, k) | (k, 0) => unit(3, k),
            (1, 1) => unit(3, 2),
            (2, 1) => unit(3, 1),
            _ => zeros(3),
        })
        .unwrap_err();
        assert_eq!(err, AlgebraError::NotAssociative(1, 1, 1));
        let err = Algebra::<Q>::from_fn(3, one, labels(), |_, _| zeros(3)).unwrap_err();
        assert_eq!(err, AlgebraError::BadUnit(0));
    }

    #[test]
    fn centralizers_by_brute_force() {
        let m2 = Algebra::<Q>::matrix(2);
        // Oracle: a matrix commuting with every matrix unit is scalar.
        let mut commuting = Vec::new();
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                for c in -1i64..=1 {
                    for d in -1i64..=1 {
                        let x: Vec<Q> = [a, b, c, d].iter().map(|&t| Q::from_i64(t)).collect();
                        if (0..4).all(|k| is_zero(&m2.commutator(&x, &unit(4, k)))) {
                            commuting.push(x);
                        }
                    }
                }
            }
        }
        assert_eq!(m2.center(), Subspace::span(4, commuting));
        let diag = Subspace::span(4, vec![unit(4, 0), unit(4, 3)]);
        assert_eq!(m2.centralizer(&diag), diag);
        let scalars = Subspace::span(4, vec![m2.one()]);
        assert_eq!(m2.centralizer(&scalars), Subspace::full(4));
    }

    #[test]
    fn dual_bases_for_q_in_q2() {
        let e = q_in_q2();
        let db = find_dual_bases(&e, None).unwrap();
        assert_eq!(db.xs, vec![qv(&[(2, 1), (0, 1)]), qv(&[(0, 1), (2, 1)])]);
        assert_eq!(db.ys, vec![qv(&[(1, 1), (0, 1)]), qv(&[(0, 1), (1, 1)])]);
        assert_eq!(db.lambda_inv, Some(Q::from_i64(2)));
    }

    #[test]
    fn dual_bases_for_q_in_m2() {
        let e = q_in_m2();
        let db = find_dual_bases(&e, None).unwrap();
        // x_i = 2 e_{ji} paired with y_i = e_{ij}.
        assert_eq!(db.len(), 4);
        for (x, y) in db.xs.iter().zip(&db.ys) {
            let k = y.iter().position(|c| !c.is_zero()).unwrap();
            let (i, j) = (k / 2, k % 2);
            assert_eq!(x, &crate::exactla::scale(&Q::from_i64(2), &unit(4, j * 2 + i)));
        }
        assert_eq!(db.lambda_inv, Some(Q::from_i64(4)));
    }

    #[test]
    fn dual_bases_fail_inside_a_too_small_subspace() {
        let e = q_in_q2();
        let scalars = Subspace::span(2, vec![e.big().one()]);
        assert!(matches!(find_dual_bases(&e, Some(&scalars)), Err(AlgebraError::NoDualBases(_))));
    }

    #[test]
    fn kanzaki_elements() {
        let q2 = Algebra::<Q>::diagonal(2);
        let f = q2.kanzaki_element().unwrap();
        assert_eq!(f.f, qv(&[(1, 1), (0, 1), (0, 1), (1, 1)]));
        assert!(f.unique);

        let m2 = Algebra::<Q>::matrix(2);
        let f = m2.kanzaki_element().unwrap();
        let mut expect = zeros::<Q>(16);
        for i in 0..2 {
            for j in 0..2 {
                expect[(i * 2 + j) * 4 + (j * 2 + i)] = q(1, 2);
            }
        }
        assert_eq!(f.f, expect);

        let m2f2 = Algebra::<F2>::matrix(2);
        assert!(matches!(m2f2.kanzaki_element(), Err(AlgebraError::NotKanzaki(_))));
        // Still separable.
        assert!(m2f2.separability_element().is_ok());
        assert!(Algebra::<Fp<3>>::matrix(2).kanzaki_element().is_ok());
    }

    #[test]
    fn kanzaki_element_matches_regular_trace_dual_bases() {
        // Oracle: dual bases of the regular trace with Σ x_i y_i = 1 give the
        // symmetric separability element Σ x_i ⊗ y_i.
        for alg in [Algebra::<Q>::diagonal(3), Algebra::<Q>::matrix(2)] {
            let d = alg.dim();
            let t = alg.regular_trace();
            let (xs, ys) = trace_dual_bases(&alg, &Subspace::full(d), &t).unwrap();
            let mut f = zeros(d * d);
            let mut s = zeros(d);
            for (x, y) in xs.iter().zip(&ys) {
                f = crate::exactla::add(&f, &kron_vec(x, y));
                s = crate::exactla::add(&s, &alg.mul(x, y));
            }
            assert_eq!(s, alg.one());
            assert_eq!(alg.kanzaki_element().unwrap().f, f);
        }
    }

    #[test]
    fn symmetry_of_expectations() {
        let e = q2_in_m2();
        let u = e.incl.centralizer();
        assert!(is_symmetric(&e, &u).is_ok());
        assert!(is_symmetric(&q_in_q2(), &Subspace::span(2, vec![Algebra::<Q>::diagonal(2).one()])).is_ok());
    }

    #[test]
    fn skewed_expectation_is_not_symmetric() {
        // E'(x) = E(x d) with d = diag(1, 2) central in... not central in M2.
        let base = q_in_m2();
        let m2 = base.big().clone();
        let d = qv(&[(2, 3), (1, 3), (0, 1), (4, 3)]);
        let skew = base.e.mul(&m2.right_matrix(&d));
        let e = CondExpectation::new(base.incl.clone(), skew).unwrap();
        let u = e.incl.centralizer();
        let v = is_symmetric(&e, &u).unwrap_err();
        assert_ne!(v.e_ux, v.e_xu);
    }

    #[test]
    fn markov_certificates_for_running_examples() {
        let cases = [
            (q_in_q2(), vec![Q::one()], 2),
            (q_in_m2(), vec![Q::one()], 4),
            (q2_in_m2(), qv(&[(1, 2), (1, 2)]), 2),
        ];
        for (cond, trace, index) in cases {
            let db = find_dual_bases(&cond, None).unwrap();
            let cert = certify_markov(MarkovExtension { cond, trace }, db);
            for c in &cert.report.checks {
                assert!(c.passed, "{c}");
            }
            assert_eq!(cert.lambda_inv, Some(Q::from_i64(index)));
            assert!(casimir_shift_check(&cert).is_ok());
        }
    }

    #[test]
    fn relative_tensor_dimensions() {
        // Over the ground field nothing collapses.
        assert_eq!(relative_tensor(&q_in_q2().incl).dim(), 4);
        assert_eq!(relative_tensor(&q_in_m2().incl).dim(), 16);
        assert_eq!(relative_tensor(&q2_in_m2().incl).dim(), 8);
    }

    #[test]
    fn subalgebra_structure() {
        let m2 = Algebra::<Q>::matrix(2);
        let diag = Subspace::span(4, vec![unit(4, 0), unit(4, 3)]);
        let s = m2.subalgebra(&diag).unwrap();
        assert!(s.is_commutative());
        assert_eq!(s.dim(), 2);
        let upper = Subspace::span(4, vec![unit(4, 1)]);
        assert!(m2.subalgebra(&upper).is_err());
    }

    #[test]
    fn tensor_and_opposite() {
        let q2 = Algebra::<Q>::diagonal(2);
        let t = q2.tensor(&Algebra::matrix(2));
        assert_eq!(t.dim(), 8);
        assert_eq!(t.center().dim(), 2);
        let m2 = Algebra::<Q>::matrix(2);
        let op = m2.opposite();
        assert_eq!(op.mul_basis(1, 2), m2.mul_basis(2, 1));
    }
}
