//! Weak Hopf algebras: the axiom engine, counital maps and subalgebras,
//! integrals, the Hopf test and the dual.
//!
//! Every identity with Sweedler legs is evaluated as a multilinear identity
//! on basis tuples. Tensors are flattened with [`crate::exactla::kron_vec`]
//! layout: `e_p ⊗ e_q` has index `p * dim + q`.
//!
//! The dual uses the pairing `⟨Δ(φ), h ⊗ g⟩ = ⟨φ, hg⟩` with `h` the left
//! tensor factor, and `⟨φψ, h⟩ = ⟨φ ⊗ ψ, Δ(h)⟩`.

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::exactla::{add, axpy, first_difference, fmt_vec, is_zero, kron_vec, unit, zeros, Mat, Subspace};
use crate::field::Field;
use crate::report::{Check, Report};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WhError {
    #[error("inconsistent weak Hopf data: {0}")]
    Shape(String),
    #[error("counital subalgebra characterizations disagree: {0}")]
    Inconsistent(String),
    #[error("Hopf criteria disagree: {0}")]
    EquivalenceViolation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub const AXIOMS: &str = "weak Hopf axioms";
pub const CONSEQUENCES: &str = "weak Hopf consequences";

/// An algebra with coproduct, counit and antipode given as matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakHopf<F> {
    pub alg: Algebra<F>,
    /// `dim² × dim`; column `k` is `Δ(e_k)`.
    pub delta: Mat<F>,
    pub eps: Vec<F>,
    /// `dim × dim`; column `k` is `S(e_k)`.
    pub antipode: Mat<F>,
}

impl<F: Field> WeakHopf<F> {
    /// Checks shapes only; the axioms are checked by [`verify_axioms`].
    pub fn new(alg: Algebra<F>, delta: Mat<F>, eps: Vec<F>, antipode: Mat<F>) -> Result<Self, WhError> {
        let d = alg.dim();
        if delta.rows() != d * d || delta.cols() != d {
            return Err(WhError::Shape(format!("coproduct is {}x{}, expected {}x{d}", delta.rows(), delta.cols(), d * d)));
        }
        if eps.len() != d {
            return Err(WhError::Shape(format!("counit has length {}, expected {d}", eps.len())));
        }
        if antipode.rows() != d || antipode.cols() != d {
            return Err(WhError::Shape(format!("antipode is {}x{}, expected {d}x{d}", antipode.rows(), antipode.cols())));
        }
        Ok(WeakHopf { alg, delta, eps, antipode })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn coproduct(&self, x: &[F]) -> Vec<F> {
        self.delta.mul_vec(x)
    }

    pub fn counit(&self, x: &[F]) -> F {
        crate::exactla::dot(&self.eps, x)
    }

    pub fn s(&self, x: &[F]) -> Vec<F> {
        self.antipode.mul_vec(x)
    }

    pub fn one(&self) -> Vec<F> {
        self.alg.one()
    }

    pub fn delta_one(&self) -> Vec<F> {
        self.coproduct(&self.alg.one())
    }

    /// Product in `H ⊗ H`.
    pub fn mul2(&self, x: &[F], y: &[F]) -> Vec<F> {
        let d = self.dim();
        let mut out: Vec<F> = zeros(d * d);
        let ys: Vec<(usize, &F)> = y.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let (a, b) = (i / d, i % d);
            for &(j, yj) in &ys {
                let (c, e) = (j / d, j % d);
                let left = self.alg.basis_product(a, c);
                let right = self.alg.basis_product(b, e);
                if left.is_empty() || right.is_empty() {
                    continue;
                }
                let s = xi.mul_ref(yj);
                for (k, c1) in left {
                    let s1 = s.mul_ref(c1);
                    for (l, c2) in right {
                        out[k * d + l].add_mul(&s1, c2);
                    }
                }
            }
        }
        out
    }

    /// Product in `H ⊗ H ⊗ H`.
    pub fn mul3(&self, x: &[F], y: &[F]) -> Vec<F> {
        let d = self.dim();
        let mut out: Vec<F> = zeros(d * d * d);
        let ys: Vec<(usize, &F)> = y.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let (a, b, c) = (i / (d * d), (i / d) % d, i % d);
            for &(j, yj) in &ys {
                let (p, q, r) = (j / (d * d), (j / d) % d, j % d);
                let (l0, l1, l2) = (self.alg.basis_product(a, p), self.alg.basis_product(b, q), self.alg.basis_product(c, r));
                if l0.is_empty() || l1.is_empty() || l2.is_empty() {
                    continue;
                }
                let s = xi.mul_ref(yj);
                for (k0, c0) in l0 {
                    let s0 = s.mul_ref(c0);
                    for (k1, c1) in l1 {
                        let s1 = s0.mul_ref(c1);
                        for (k2, c2) in l2 {
                            out[(k0 * d + k1) * d + k2].add_mul(&s1, c2);
                        }
                    }
                }
            }
        }
        out
    }

    /// `(Δ ⊗ id)` applied to a two-leg tensor.
    pub fn delta_left(&self, x: &[F]) -> Vec<F> {
        let d = self.dim();
        let mut out: Vec<F> = zeros(d * d * d);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let (a, b) = (i / d, i % d);
            for pq in 0..d * d {
                let c = self.delta.get(pq, a);
                if !c.is_zero() {
                    out[pq * d + b].add_mul(xi, c);
                }
            }
        }
        out
    }

    /// `(id ⊗ Δ)` applied to a two-leg tensor.
    pub fn delta_right(&self, x: &[F]) -> Vec<F> {
        let d = self.dim();
        let mut out: Vec<F> = zeros(d * d * d);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let (a, b) = (i / d, i % d);
            for qr in 0..d * d {
                let c = self.delta.get(qr, b);
                if !c.is_zero() {
                    out[a * d * d + qr].add_mul(xi, c);
                }
            }
        }
        out
    }

    /// `(Δ ⊗ id)Δ(x)`, the three-leg coproduct.
    pub fn coproduct3(&self, x: &[F]) -> Vec<F> {
        self.delta_left(&self.coproduct(x))
    }

    /// `ε_t(h) = (ε ⊗ id)(Δ(1)(h ⊗ 1))`.
    pub fn eps_t(&self, h: &[F]) -> Vec<F> {
        let d = self.dim();
        let t = self.mul2(&self.delta_one(), &kron_vec(h, self.alg.unit_ref()));
        contract_left(&self.eps, &t, d)
    }

    /// `ε_s(h) = (id ⊗ ε)((1 ⊗ h)Δ(1))`.
    pub fn eps_s(&self, h: &[F]) -> Vec<F> {
        let d = self.dim();
        let t = self.mul2(&kron_vec(self.alg.unit_ref(), h), &self.delta_one());
        contract_right(&self.eps, &t, d)
    }

    pub fn eps_t_matrix(&self) -> Mat<F> {
        let d = self.dim();
        Mat::from_cols(&(0..d).map(|k| self.eps_t(&unit(d, k))).collect::<Vec<_>>(), d)
    }

    pub fn eps_s_matrix(&self) -> Mat<F> {
        let d = self.dim();
        Mat::from_cols(&(0..d).map(|k| self.eps_s(&unit(d, k))).collect::<Vec<_>>(), d)
    }

    /// `m(id ⊗ S)Δ(h)`.
    pub fn id_star_s(&self, h: &[F]) -> Vec<F> {
        self.apply_legs(&self.coproduct(h), |p, q| self.alg.mul(&unit(self.dim(), p), &self.antipode.col(q)))
    }

    /// `m(S ⊗ id)Δ(h)`.
    pub fn s_star_id(&self, h: &[F]) -> Vec<F> {
        self.apply_legs(&self.coproduct(h), |p, q| self.alg.mul(&self.antipode.col(p), &unit(self.dim(), q)))
    }

    /// `Σ t_pq f(p, q)` over the nonzero coordinates of a two-leg tensor.
    pub fn apply_legs(&self, t: &[F], f: impl Fn(usize, usize) -> Vec<F>) -> Vec<F> {
        let d = self.dim();
        let mut out: Vec<F> = zeros(d);
        for (i, c) in t.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &f(i / d, i % d));
            }
        }
        out
    }

    /// Swaps the two legs of a tensor.
    pub fn flip(&self, t: &[F]) -> Vec<F> {
        flip(t, self.dim())
    }

    /// `(S ⊗ S)` on a two-leg tensor.
    pub fn s_tensor_s(&self, t: &[F]) -> Vec<F> {
        self.antipode.kron(&self.antipode).mul_vec(t)
    }

    /// Same algebra, coproduct, counit and antipode, ignoring labels.
    pub fn same_structure(&self, other: &WeakHopf<F>) -> bool {
        self.alg.entries() == other.alg.entries()
            && self.alg.unit_ref() == other.alg.unit_ref()
            && self.delta == other.delta
            && self.eps == other.eps
            && self.antipode == other.antipode
    }

    /// Replaces the antipode, e.g. for mutation tests.
    pub fn with_antipode(&self, antipode: Mat<F>) -> Self {
        WeakHopf { antipode, ..self.clone() }
    }
}

/// `(φ ⊗ id)t` for a functional `φ` given by coordinates.
pub fn contract_left<F: Field>(phi: &[F], t: &[F], d: usize) -> Vec<F> {
    let mut out: Vec<F> = zeros(d);
    for (i, c) in t.iter().enumerate() {
        if !c.is_zero() && !phi[i / d].is_zero() {
            out[i % d].add_mul(c, &phi[i / d]);
        }
    }
    out
}

/// `(id ⊗ φ)t`.
pub fn contract_right<F: Field>(phi: &[F], t: &[F], d: usize) -> Vec<F> {
    let mut out: Vec<F> = zeros(d);
    for (i, c) in t.iter().enumerate() {
        if !c.is_zero() && !phi[i % d].is_zero() {
            out[i / d].add_mul(c, &phi[i % d]);
        }
    }
    out
}

pub fn flip<F: Field>(t: &[F], d: usize) -> Vec<F> {
    let mut out: Vec<F> = zeros(d * d);
    for (i, c) in t.iter().enumerate() {
        if !c.is_zero() {
            out[(i % d) * d + i / d] = c.clone();
        }
    }
    out
}

fn per_basis(d: usize, mut f: impl FnMut(usize) -> Result<(), String>) -> Result<(), String> {
    (0..d).try_for_each(&mut f)
}

fn mismatch<F: Field>(what: &str, lhs: &[F], rhs: &[F]) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        let k = first_difference(lhs, rhs).unwrap_or(0);
        Err(format!("{what}: coordinate {k} is {} vs {}", lhs[k], rhs[k]))
    }
}

/// Checks every axiom separately, each on all basis tuples it involves.
///
/// The axioms come first in dependency order (coalgebra, multiplicativity of
/// the coproduct, weak multiplicativity of the counit, weak
/// comultiplicativity of the unit, the two antipode/counital-map identities,
/// then `S(h₁)h₂S(h₃) = S(h)`); consequences follow.
pub fn verify_axioms<F: Field>(h: &WeakHopf<F>) -> Report {
    let d = h.dim();
    let mut r = Report::new("weak Hopf axioms");
    let deltas: Vec<Vec<F>> = (0..d).map(|k| h.delta.col(k)).collect();

    r.push(Check::from_result(
        "coassociativity",
        AXIOMS,
        per_basis(d, |k| mismatch(&format!("basis {k}"), &h.delta_left(&deltas[k]), &h.delta_right(&deltas[k]))),
    ));
    r.push(Check::from_result(
        "counit",
        AXIOMS,
        per_basis(d, |k| {
            let e = unit(d, k);
            mismatch(&format!("(ε⊗id)Δ on basis {k}"), &contract_left(&h.eps, &deltas[k], d), &e)?;
            mismatch(&format!("(id⊗ε)Δ on basis {k}"), &contract_right(&h.eps, &deltas[k], d), &e)
        }),
    ));
    r.push(Check::from_result(
        "coproduct-multiplicative",
        AXIOMS,
        (|| {
            for i in 0..d {
                for j in 0..d {
                    let lhs = h.coproduct(&h.alg.mul_basis(i, j));
                    let rhs = h.mul2(&deltas[i], &deltas[j]);
                    mismatch(&format!("Δ(e{i} e{j})"), &lhs, &rhs)?;
                }
            }
            Ok(())
        })(),
    ));
    r.push(Check::from_result("counit-weak-multiplicative", AXIOMS, check_counit_weak(h, &deltas)));
    r.push(Check::from_result("unit-weak-comultiplicative", AXIOMS, check_unit_weak(h)));
    r.push(Check::from_result(
        "antipode-target-map",
        AXIOMS,
        per_basis(d, |k| mismatch(&format!("basis {k}"), &h.id_star_s(&unit(d, k)), &h.eps_t(&unit(d, k)))),
    ));
    r.push(Check::from_result(
        "antipode-source-map",
        AXIOMS,
        per_basis(d, |k| mismatch(&format!("basis {k}"), &h.s_star_id(&unit(d, k)), &h.eps_s(&unit(d, k)))),
    ));
    r.push(Check::from_result(
        "antipode-sandwich",
        AXIOMS,
        per_basis(d, |k| {
            let t = h.coproduct3(&unit(d, k));
            let mut lhs = zeros(d);
            for (i, c) in t.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (p, q, s) = (i / (d * d), (i / d) % d, i % d);
                let v = h.alg.mul(&h.alg.mul(&h.antipode.col(p), &unit(d, q)), &h.antipode.col(s));
                axpy(&mut lhs, c, &v);
            }
            mismatch(&format!("basis {k}"), &lhs, &h.antipode.col(k))
        }),
    ));

    r.push(Check::from_result(
        "antipode-anti-multiplicative",
        CONSEQUENCES,
        (|| {
            for i in 0..d {
                for j in 0..d {
                    let lhs = h.s(&h.alg.mul_basis(i, j));
                    let rhs = h.alg.mul(&h.antipode.col(j), &h.antipode.col(i));
                    mismatch(&format!("S(e{i} e{j})"), &lhs, &rhs)?;
                }
            }
            mismatch("S(1)", &h.s(&h.one()), &h.one())
        })(),
    ));
    r.push(Check::from_result(
        "antipode-anti-comultiplicative",
        CONSEQUENCES,
        per_basis(d, |k| {
            let lhs = h.coproduct(&h.antipode.col(k));
            let rhs = h.s_tensor_s(&h.flip(&deltas[k]));
            mismatch(&format!("Δ(S(e{k}))"), &lhs, &rhs)?;
            if h.counit(&h.antipode.col(k)) == h.eps[k] {
                Ok(())
            } else {
                Err(format!("ε(S(e{k})) != ε(e{k})"))
            }
        }),
    ));
    r.push(if h.antipode.rank() == d {
        Check::pass("antipode-bijective", CONSEQUENCES)
    } else {
        Check::fail("antipode-bijective", CONSEQUENCES, format!("rank {} < {d}", h.antipode.rank()))
    });
    r.push(Check::from_result("antipode-unique", CONSEQUENCES, check_antipode_unique(h)));
    let et = h.eps_t_matrix();
    let es = h.eps_s_matrix();
    r.push(Check::from_result(
        "counital-maps-idempotent",
        CONSEQUENCES,
        if et.mul(&et) != et {
            Err("ε_t ∘ ε_t != ε_t".into())
        } else if es.mul(&es) != es {
            Err("ε_s ∘ ε_s != ε_s".into())
        } else {
            Ok(())
        },
    ));
    r
}

fn check_counit_weak<F: Field>(h: &WeakHopf<F>, deltas: &[Vec<F>]) -> Result<(), String> {
    let d = h.dim();
    // eps2[i][j] = ε(e_i e_j)
    let eps2: Vec<Vec<F>> = (0..d).map(|i| (0..d).map(|j| h.counit(&h.alg.mul_basis(i, j))).collect()).collect();
    for g in 0..d {
        for a in 0..d {
            let ag = h.alg.mul_basis(a, g);
            for f in 0..d {
                let mut lhs = F::zero();
                for (k, c) in ag.iter().enumerate() {
                    lhs.add_mul(c, &eps2[k][f]);
                }
                let mut r1 = F::zero();
                let mut r2 = F::zero();
                for (i, c) in deltas[g].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (p, q) = (i / d, i % d);
                    r1.add_mul(c, &eps2[a][p].mul_ref(&eps2[q][f]));
                    r2.add_mul(c, &eps2[a][q].mul_ref(&eps2[p][f]));
                }
                if lhs != r1 || lhs != r2 {
                    return Err(format!("ε(e{a} e{g} e{f}) = {lhs}, ε(h g₁)ε(g₂ f) = {r1}, ε(h g₂)ε(g₁ f) = {r2}"));
                }
            }
        }
    }
    Ok(())
}

fn check_unit_weak<F: Field>(h: &WeakHopf<F>) -> Result<(), String> {
    let one = h.one();
    let d1 = h.delta_one();
    let lhs = h.delta_left(&d1);
    let a = kron_vec(&d1, &one);
    let b = kron_vec(&one, &d1);
    mismatch("(Δ(1)⊗1)(1⊗Δ(1))", &lhs, &h.mul3(&a, &b))?;
    mismatch("(1⊗Δ(1))(Δ(1)⊗1)", &lhs, &h.mul3(&b, &a))
}

/// The antipode equations `m(id⊗S)Δ = ε_t`, `m(S⊗id)Δ = ε_s` and
/// `S(h₁)ε_t(h₂) = S(h)` are linear in `S`; the last is the sandwich axiom
/// rewritten with the first. Uniqueness is a kernel computation.
fn check_antipode_unique<F: Field>(h: &WeakHopf<F>) -> Result<(), String> {
    let d = h.dim();
    let n = d * d;
    let et = h.eps_t_matrix();
    // Unknown s[j * d + k] = coefficient of e_j in S'(e_k).
    let mut rows: Vec<Vec<F>> = Vec::new();
    for k in 0..d {
        let dk = h.delta.col(k);
        let mut b1 = vec![zeros::<F>(n); d];
        let mut b2 = vec![zeros::<F>(n); d];
        let mut b3 = vec![zeros::<F>(n); d];
        for (i, c) in dk.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (p, q) = (i / d, i % d);
            for j in 0..d {
                // e_p S'(e_q) contributes e_p e_j * s[j, q].
                for (out, c2) in h.alg.basis_product(p, j) {
                    b1[*out][j * d + q].add_mul(c, c2);
                }
                // S'(e_p) e_q contributes e_j e_q * s[j, p].
                for (out, c2) in h.alg.basis_product(j, q) {
                    b2[*out][j * d + p].add_mul(c, c2);
                }
                // S'(e_p) ε_t(e_q).
                let etq = et.col(q);
                for (m, c3) in etq.iter().enumerate() {
                    if c3.is_zero() {
                        continue;
                    }
                    let cc = c.mul_ref(c3);
                    for (out, c2) in h.alg.basis_product(j, m) {
                        b3[*out][j * d + p].add_mul(&cc, c2);
                    }
                }
            }
        }
        // Homogeneous form of the third equation: S'(h₁)ε_t(h₂) - S'(h) = 0.
        for (j, row) in b3.iter_mut().enumerate() {
            row[j * d + k].sub_assign_ref(&F::one());
        }
        rows.extend(b1);
        rows.extend(b2);
        rows.extend(b3);
    }
    let m = Mat::from_rows(rows, n).map_err(|e| e.to_string())?;
    let kernel = m.rank();
    if kernel != n {
        return Err(format!("antipode equations have a {}-dimensional solution family", n - kernel));
    }
    Ok(())
}

/// Counital maps, counital subalgebras and their separability elements.
#[derive(Clone, Debug)]
pub struct CounitalData<F> {
    pub eps_t: Mat<F>,
    pub eps_s: Mat<F>,
    pub ht: Subspace<F>,
    pub hs: Subspace<F>,
    /// `(S ⊗ id)Δ(1)`.
    pub e_t: Vec<F>,
    /// `(id ⊗ S)Δ(1)`.
    pub e_s: Vec<F>,
    pub report: Report,
}

pub const COUNITAL: &str = "counital subalgebras";

pub fn counital<F: Field>(h: &WeakHopf<F>) -> Result<CounitalData<F>, WhError> {
    let d = h.dim();
    let eps_t = h.eps_t_matrix();
    let eps_s = h.eps_s_matrix();
    let ht = eps_t.image();
    let hs = eps_s.image();
    let d1 = h.delta_one();
    let right_legs: Vec<Vec<F>> = (0..d).map(|p| contract_left(&unit(d, p), &d1, d)).collect();
    let left_legs: Vec<Vec<F>> = (0..d).map(|q| contract_right(&unit(d, q), &d1, d)).collect();
    if Subspace::span(d, right_legs) != ht {
        return Err(WhError::Inconsistent("image of ε_t differs from the right legs of Δ(1)".into()));
    }
    if Subspace::span(d, left_legs) != hs {
        return Err(WhError::Inconsistent("image of ε_s differs from the left legs of Δ(1)".into()));
    }
    let mut r = Report::new("counital subalgebras");
    let s = &h.antipode;
    r.push(Check::from_result(
        "counital-maps-idempotent",
        COUNITAL,
        if eps_t.mul(&eps_t) == eps_t && eps_s.mul(&eps_s) == eps_s { Ok(()) } else { Err("not idempotent".into()) },
    ));
    r.push(Check::from_result(
        "antipode-intertwines-counital-maps",
        COUNITAL,
        if s.mul(&eps_t) != eps_s.mul(s) {
            Err("S ∘ ε_t != ε_s ∘ S".into())
        } else if s.mul(&eps_s) != eps_t.mul(s) {
            Err("S ∘ ε_s != ε_t ∘ S".into())
        } else {
            Ok(())
        },
    ));
    r.push(Check::from_result(
        "counital-subalgebras-commute",
        COUNITAL,
        (|| {
            for (i, z) in ht.basis().iter().enumerate() {
                for (j, y) in hs.basis().iter().enumerate() {
                    if !is_zero(&h.alg.commutator(z, y)) {
                        return Err(format!("target basis {i} and source basis {j} do not commute"));
                    }
                }
            }
            Ok(())
        })(),
    ));
    r.push(Check::from_result(
        "antipode-target-to-source-anti-isomorphism",
        COUNITAL,
        (|| {
            if ht.map(s) != hs {
                return Err("S(H_t) != H_s".into());
            }
            if ht.dim() != hs.dim() {
                return Err("dimensions differ".into());
            }
            for a in ht.basis() {
                for b in ht.basis() {
                    if s.mul_vec(&h.alg.mul(a, b)) != h.alg.mul(&s.mul_vec(b), &s.mul_vec(a)) {
                        return Err("S is not anti-multiplicative on H_t".into());
                    }
                }
            }
            Ok(())
        })(),
    ));
    let e_t = Mat::identity(d).kron(s).mul_vec(&flip(&d1, d));
    let e_t = flip(&e_t, d);
    let e_s = Mat::identity(d).kron(s).mul_vec(&d1);
    r.push(Check::from_result("target-separability-idempotent", COUNITAL, check_separability_idempotent(h, &e_t, &ht)));
    r.push(Check::from_result("source-separability-idempotent", COUNITAL, check_separability_idempotent(h, &e_s, &hs)));
    Ok(CounitalData { eps_t, eps_s, ht, hs, e_t, e_s, report: r })
}

/// `μ(e) = 1`, both legs of `e` in `sub`, and `(z ⊗ 1)e = e(1 ⊗ z)` for `z` in `sub`.
fn check_separability_idempotent<F: Field>(h: &WeakHopf<F>, e: &[F], sub: &Subspace<F>) -> Result<(), String> {
    let d = h.dim();
    let one = h.one();
    let mu = h.apply_legs(e, |p, q| h.alg.mul_basis(p, q));
    mismatch("μ(e)", &mu, &one)?;
    for p in 0..d {
        let l = contract_right(&unit(d, p), e, d);
        let rr = contract_left(&unit(d, p), e, d);
        if !sub.contains(&l) || !sub.contains(&rr) {
            return Err("a leg leaves the counital subalgebra".into());
        }
    }
    for z in sub.basis() {
        let lhs = h.mul2(&kron_vec(z, &one), e);
        let rhs = h.mul2(e, &kron_vec(&one, z));
        mismatch("(z⊗1)e vs e(1⊗z)", &lhs, &rhs)?;
    }
    Ok(())
}

/// Left, right and two-sided integrals.
#[derive(Clone, Debug)]
pub struct IntegralSpaces<F> {
    pub left: Subspace<F>,
    pub right: Subspace<F>,
    pub two_sided: Subspace<F>,
    /// A left integral with `ε_t(l) = 1`, if one exists.
    pub normalized_left: Option<Vec<F>>,
    /// Normalized left integral exists iff the algebra is separable.
    pub maschke_consistent: bool,
}

pub fn integrals<F: Field>(h: &WeakHopf<F>) -> IntegralSpaces<F> {
    let d = h.dim();
    let et = h.eps_t_matrix();
    let es = h.eps_s_matrix();
    let mut lrows: Option<Mat<F>> = None;
    let mut rrows: Option<Mat<F>> = None;
    for k in 0..d {
        let ek = unit(d, k);
        let l = h.alg.left_matrix(&ek).sub(&h.alg.left_matrix(&et.col(k)));
        let r = h.alg.right_matrix(&ek).sub(&h.alg.right_matrix(&es.col(k)));
        lrows = Some(match lrows {
            None => l,
            Some(m) => m.vstack(&l),
        });
        rrows = Some(match rrows {
            None => r,
            Some(m) => m.vstack(&r),
        });
    }
    let left = lrows.map(|m| m.kernel()).unwrap_or_else(|| Subspace::zero(0));
    let right = rrows.map(|m| m.kernel()).unwrap_or_else(|| Subspace::zero(0));
    let two_sided = left.intersection(&right);
    let normalized_left = if left.dim() == 0 {
        None
    } else {
        let cols: Vec<Vec<F>> = left.basis().iter().map(|b| et.mul_vec(b)).collect();
        Mat::from_cols(&cols, d).solve(&h.one()).ok().map(|c| left.element(&c))
    };
    let separable = h.alg.separability_element().is_ok();
    IntegralSpaces { maschke_consistent: normalized_left.is_some() == separable, left, right, two_sided, normalized_left }
}

/// Checks `hl = ε_t(h)l` for all basis `h`.
pub fn is_left_integral<F: Field>(h: &WeakHopf<F>, l: &[F]) -> bool {
    let d = h.dim();
    (0..d).all(|k| h.alg.mul(&unit(d, k), l) == h.alg.mul(&h.eps_t(&unit(d, k)), l))
}

/// Checks `rh = rε_s(h)` for all basis `h`.
pub fn is_right_integral<F: Field>(h: &WeakHopf<F>, r: &[F]) -> bool {
    let d = h.dim();
    (0..d).all(|k| h.alg.mul(r, &unit(d, k)) == h.alg.mul(r, &h.eps_s(&unit(d, k))))
}

/// `Δ(1) = 1 ⊗ 1`, cross-checked against multiplicativity of `ε` and
/// `H_t = k1`.
pub fn is_hopf<F: Field>(h: &WeakHopf<F>) -> Result<bool, WhError> {
    let d = h.dim();
    let one = h.one();
    let a = h.delta_one() == kron_vec(&one, &one);
    let b = (0..d).all(|i| (0..d).all(|j| h.counit(&h.alg.mul_basis(i, j)) == h.eps[i].mul_ref(&h.eps[j])));
    let scalars = Subspace::span(d, vec![one]);
    let c = h.eps_t_matrix().image() == scalars && h.eps_s_matrix().image() == scalars;
    if a == b && b == c {
        Ok(a)
    } else {
        Err(WhError::EquivalenceViolation(format!("Δ(1) = 1⊗1: {a}, ε multiplicative: {b}, H_t = H_s = k1: {c}")))
    }
}

/// The dual weak Hopf algebra on the dual basis `p_k` of `H*`.
pub fn dual<F: Field>(h: &WeakHopf<F>) -> Result<WeakHopf<F>, WhError> {
    let d = h.dim();
    let labels = h.alg.labels().iter().map(|l| format!("p_{l}")).collect();
    let alg = Algebra::from_fn(d, h.eps.clone(), labels, |p, q| h.delta.row(p * d + q).to_vec())?;
    let mut delta = Mat::zeros(d * d, d);
    for (i, j, k, c) in h.alg.entries() {
        delta.set(i * d + j, k, c);
    }
    let eps = h.one();
    let antipode = h.antipode.transpose();
    WeakHopf::new(alg, delta, eps, antipode)
}

/// Formats a two-leg tensor as `Σ c e_p⊗e_q` using labels.
pub fn fmt_tensor<F: Field>(alg: &Algebra<F>, t: &[F]) -> String {
    let d = alg.dim();
    let parts: Vec<String> = t
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{c} {}⊗{}", alg.labels()[i / d], alg.labels()[i % d]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Adds `v` to column `col`, used by mutation tests.
pub fn perturb_column<F: Field>(m: &Mat<F>, col: usize, v: &[F]) -> Mat<F> {
    let mut out = m.clone();
    out.set_col(col, &add(&m.col(col), v));
    out
}

/// Two-leg tensor as the `d × d` coefficient matrix.
pub fn tensor_matrix<F: Field>(t: &[F], d: usize) -> Mat<F> {
    Mat::from_rows((0..d).map(|p| t[p * d..(p + 1) * d].to_vec()).collect(), d).expect("square")
}

/// Formats a vector with labels.
pub fn fmt_element<F: Field>(alg: &Algebra<F>, v: &[F]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{c} {}", alg.labels()[i]))
        .collect();
    if parts.is_empty() {
        fmt_vec(v)
    } else {
        parts.join(" + ")
    }
}

/// Rewrites `h` in the basis given by the columns of `p` (old coordinates).
pub fn transport<F: Field>(h: &WeakHopf<F>, p: &Mat<F>, labels: Vec<String>) -> Result<WeakHopf<F>, WhError> {
    let d = h.dim();
    let pinv = p.inverse().map_err(|e| WhError::Shape(format!("change of basis: {e}")))?;
    let cols: Vec<Vec<F>> = (0..d).map(|i| p.col(i)).collect();
    let alg = Algebra::from_fn(d, pinv.mul_vec(h.alg.unit_ref()), labels, |i, j| pinv.mul_vec(&h.alg.mul(&cols[i], &cols[j])))?;
    let delta = pinv.kron(&pinv).mul(&h.delta).mul(p);
    let eps = p.vec_mul(&h.eps);
    let antipode = pinv.mul(&h.antipode).mul(p);
    WeakHopf::new(alg, delta, eps, antipode)
}
