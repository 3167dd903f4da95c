//! Module algebras over weak Hopf algebras, the matching comodule algebras
//! over the dual, invariants, smash products and the dimension side of the
//! smash-product duality.

use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError};
use crate::exactla::{axpy, first_difference, kron_vec, unit, zeros, Mat, Quotient, Subspace};
use crate::field::Field;
use crate::report::{Check, Report};
use crate::whopf::{self, WeakHopf, WhError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operation is not well defined on classes: {0}")]
    WellDefinedness(String),
    #[error("invariants are not a unital subalgebra: {0}")]
    NotSubalgebra(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    WeakHopf(#[from] WhError),
}

pub const MODULE: &str = "module algebra";
pub const COMODULE: &str = "comodule algebra";
pub const SMASH: &str = "smash product";
pub const DUALITY: &str = "smash duality";

/// A left action of `h` on `a`; `ops[k]` is the matrix of `e_k · -`.
#[derive(Clone, Debug)]
pub struct ModuleAlgebra<F> {
    pub h: WeakHopf<F>,
    pub a: Algebra<F>,
    pub ops: Vec<Mat<F>>,
}

impl<F: Field> ModuleAlgebra<F> {
    pub fn new(h: WeakHopf<F>, a: Algebra<F>, ops: Vec<Mat<F>>) -> Result<Self, ActionError> {
        let (dh, da) = (h.dim(), a.dim());
        if ops.len() != dh || ops.iter().any(|m| m.rows() != da || m.cols() != da) {
            return Err(ActionError::Shape(format!("need {dh} operators of size {da}x{da}")));
        }
        Ok(ModuleAlgebra { h, a, ops })
    }

    /// `f(k, j)` is `e_k · a_j`.
    pub fn from_fn(h: WeakHopf<F>, a: Algebra<F>, mut f: impl FnMut(usize, usize) -> Vec<F>) -> Result<Self, ActionError> {
        let da = a.dim();
        let ops = (0..h.dim()).map(|k| Mat::from_cols(&(0..da).map(|j| f(k, j)).collect::<Vec<_>>(), da)).collect();
        Self::new(h, a, ops)
    }

    /// The action as one `dim A × (dim H · dim A)` matrix, column `k * dim A + j`.
    pub fn act_matrix(&self) -> Mat<F> {
        let da = self.a.dim();
        let mut out = Mat::zeros(da, self.h.dim() * da);
        for (k, m) in self.ops.iter().enumerate() {
            for j in 0..da {
                out.set_col(k * da + j, &m.col(j));
            }
        }
        out
    }

    /// Matrix of `h · -`.
    pub fn op(&self, h: &[F]) -> Mat<F> {
        let da = self.a.dim();
        let mut out = Mat::zeros(da, da);
        for (k, c) in h.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.ops[k].scale(c));
            }
        }
        out
    }

    pub fn act(&self, h: &[F], a: &[F]) -> Vec<F> {
        let mut out: Vec<F> = zeros(self.a.dim());
        for (k, c) in h.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.ops[k].mul_vec(a));
            }
        }
        out
    }
}

fn first_mismatch<F: Field>(what: impl Fn() -> String, lhs: &[F], rhs: &[F]) -> Result<(), String> {
    match first_difference(lhs, rhs) {
        None => Ok(()),
        Some(k) => Err(format!("{}: coordinate {k} is {} vs {}", what(), lhs[k], rhs[k])),
    }
}

/// Module axioms and both module-algebra axioms, each on all basis tuples.
pub fn verify_module_algebra<F: Field>(m: &ModuleAlgebra<F>) -> Report {
    let (dh, da) = (m.h.dim(), m.a.dim());
    let mut r = Report::new("module algebra");
    r.push(Check::from_result(
        "module-associative",
        MODULE,
        (|| {
            for i in 0..dh {
                for j in 0..dh {
                    let lhs = m.op(&m.h.alg.mul_basis(i, j));
                    let rhs = m.ops[i].mul(&m.ops[j]);
                    if lhs != rhs {
                        let c = (0..da).find(|&c| lhs.col(c) != rhs.col(c)).unwrap_or(0);
                        return Err(format!("(e{i} e{j})·a{c} != e{i}·(e{j}·a{c})"));
                    }
                }
            }
            Ok(())
        })(),
    ));
    r.push(Check::from_result(
        "module-unital",
        MODULE,
        if m.op(&m.h.one()) == Mat::identity(da) { Ok(()) } else { Err("1·a != a".into()) },
    ));
    r.push(Check::from_result(
        "measuring",
        MODULE,
        (|| {
            for k in 0..dh {
                let dk = m.h.delta.col(k);
                for a in 0..da {
                    for b in 0..da {
                        let lhs = m.ops[k].mul_vec(&m.a.mul_basis(a, b));
                        let mut rhs: Vec<F> = zeros(da);
                        for (i, c) in dk.iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let (p, q) = (i / dh, i % dh);
                            axpy(&mut rhs, c, &m.a.mul(&m.ops[p].col(a), &m.ops[q].col(b)));
                        }
                        first_mismatch(|| format!("e{k}·(a{a} a{b})"), &lhs, &rhs)?;
                    }
                }
            }
            Ok(())
        })(),
    ));
    r.push(Check::from_result(
        "unit-action",
        MODULE,
        (|| {
            let one = m.a.one();
            for k in 0..dh {
                let lhs = m.ops[k].mul_vec(&one);
                let rhs = m.act(&m.h.eps_t(&unit(dh, k)), &one);
                first_mismatch(|| format!("e{k}·1"), &lhs, &rhs)?;
            }
            Ok(())
        })(),
    ));
    r
}

/// `{a | h·a = ε_t(h)·a for all h}`, checked to be a unital subalgebra.
pub fn invariants<F: Field>(m: &ModuleAlgebra<F>) -> Result<Subspace<F>, ActionError> {
    let dh = m.h.dim();
    let mut stacked: Option<Mat<F>> = None;
    for k in 0..dh {
        let d = m.ops[k].sub(&m.op(&m.h.eps_t(&unit(dh, k))));
        stacked = Some(match stacked {
            None => d,
            Some(s) => s.vstack(&d),
        });
    }
    let inv = match stacked {
        Some(s) => s.kernel(),
        None => Subspace::full(m.a.dim()),
    };
    check_unital_subalgebra(&m.a, &inv).map_err(ActionError::NotSubalgebra)?;
    Ok(inv)
}

fn check_unital_subalgebra<F: Field>(a: &Algebra<F>, s: &Subspace<F>) -> Result<(), String> {
    if !s.contains(&a.one()) {
        return Err("1 is missing".into());
    }
    for (i, x) in s.basis().iter().enumerate() {
        for (j, y) in s.basis().iter().enumerate() {
            if !s.contains(&a.mul(x, y)) {
                return Err(format!("product of basis elements {i} and {j} leaves the space"));
            }
        }
    }
    Ok(())
}

/// The trivial action `h·z = ε_t(hz)` on the target counital subalgebra,
/// written in the echelon basis of `H_t`.
pub fn trivial_action<F: Field>(h: &WeakHopf<F>) -> Result<ModuleAlgebra<F>, ActionError> {
    let ht = h.eps_t_matrix().image();
    let a = h.alg.subalgebra(&ht)?;
    let d = h.dim();
    let coords = |v: &[F]| ht.coords(v).expect("ε_t lands in H_t");
    ModuleAlgebra::from_fn(h.clone(), a, |k, j| coords(&h.eps_t(&h.alg.mul(&unit(d, k), &ht.basis()[j]))))
}

/// The standard action `φ ⇀ h = h₁⟨φ, h₂⟩` of `H*` on `H`, with `H*` on the
/// dual basis as built by [`whopf::dual`].
pub fn standard_action<F: Field>(h: &WeakHopf<F>) -> Result<ModuleAlgebra<F>, ActionError> {
    let d = h.dim();
    let hd = whopf::dual(h)?;
    ModuleAlgebra::from_fn(hd, h.alg.clone(), |k, j| (0..d).map(|p| h.delta.get(p * d + k, j).clone()).collect())
}

/// The adjoint action `h·a = h₁ a S(h₂)` on the centralizer of `H_s`, in
/// the echelon basis of that centralizer.
pub fn adjoint_action<F: Field>(h: &WeakHopf<F>) -> Result<ModuleAlgebra<F>, ActionError> {
    let hs = h.eps_s_matrix().image();
    let c = h.alg.centralizer(&hs);
    let a = h.alg.subalgebra(&c)?;
    let d = h.dim();
    let coords = |v: &[F]| c.coords(v).ok_or(());
    let mut bad = None;
    let m = ModuleAlgebra::from_fn(h.clone(), a, |k, j| {
        let v = h.apply_legs(&h.delta.col(k), |p, q| h.alg.mul(&h.alg.mul(&unit(d, p), &c.basis()[j]), &h.antipode.col(q)));
        coords(&v).unwrap_or_else(|_| {
            bad = Some((k, j));
            zeros(c.dim())
        })
    })?;
    match bad {
        Some((k, j)) => Err(ActionError::WellDefinedness(format!("e{k}·c{j} leaves the centralizer"))),
        None => Ok(m),
    }
}

/// A right comodule algebra; `rho` is `(dim A · dim K) × dim A`, column `j`
/// is `ρ(a_j)` with index `i * dim K + k`.
#[derive(Clone, Debug)]
pub struct ComoduleAlgebra<F> {
    pub k: WeakHopf<F>,
    pub a: Algebra<F>,
    pub rho: Mat<F>,
}

/// Product in `A ⊗ K`.
pub fn tensor_mul<F: Field>(a: &Algebra<F>, k: &Algebra<F>, x: &[F], y: &[F]) -> Vec<F> {
    let dk = k.dim();
    let mut out: Vec<F> = zeros(a.dim() * dk);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let s = xi.mul_ref(yj);
            for (u, c1) in a.basis_product(i / dk, j / dk) {
                let s1 = s.mul_ref(c1);
                for (v, c2) in k.basis_product(i % dk, j % dk) {
                    out[u * dk + v].add_mul(&s1, c2);
                }
            }
        }
    }
    out
}

impl<F: Field> ComoduleAlgebra<F> {
    pub fn rho(&self, a: &[F]) -> Vec<F> {
        self.rho.mul_vec(a)
    }

    /// Applies `id ⊗ f` to an element of `A ⊗ K`.
    fn id_tensor(&self, t: &[F], f: &Mat<F>) -> Vec<F> {
        Mat::identity(self.a.dim()).kron(f).mul_vec(t)
    }

    /// `{a | ρ(a) = (id ⊗ ε_t)ρ(a)}`.
    pub fn coinvariants(&self) -> Subspace<F> {
        let et = self.k.eps_t_matrix();
        let lift = Mat::identity(self.a.dim()).kron(&et);
        self.rho.sub(&lift.mul(&self.rho)).kernel()
    }
}

pub fn verify_comodule_algebra<F: Field>(c: &ComoduleAlgebra<F>) -> Report {
    let (da, dk) = (c.a.dim(), c.k.dim());
    let mut r = Report::new("comodule algebra");
    r.push(Check::from_result(
        "comodule-coassociative",
        COMODULE,
        (|| {
            for j in 0..da {
                let rj = c.rho.col(j);
                // (ρ ⊗ id)ρ and (id ⊗ Δ)ρ, both in A ⊗ K ⊗ K.
                let mut lhs: Vec<F> = zeros(da * dk * dk);
                let mut rhs: Vec<F> = zeros(da * dk * dk);
                for (i, x) in rj.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let (a, k) = (i / dk, i % dk);
                    axpy(&mut lhs, x, &kron_vec(&c.rho.col(a), &unit(dk, k)));
                    axpy(&mut rhs, x, &kron_vec(&unit(da, a), &c.k.delta.col(k)));
                }
                first_mismatch(|| format!("basis {j}"), &lhs, &rhs)?;
            }
            Ok(())
        })(),
    ));
    r.push(Check::from_result(
        "comodule-counit",
        COMODULE,
        (|| {
            let e = Mat::identity(da).kron(&Mat::from_rows(vec![c.k.eps.clone()], dk).expect("row"));
            if e.mul(&c.rho) == Mat::identity(da) {
                Ok(())
            } else {
                Err("(id ⊗ ε)ρ != id".into())
            }
        })(),
    ));
    r.push(Check::from_result(
        "comodule-multiplicative",
        COMODULE,
        (|| {
            for a in 0..da {
                for b in 0..da {
                    let lhs = c.rho(&c.a.mul_basis(a, b));
                    let rhs = tensor_mul(&c.a, &c.k.alg, &c.rho.col(a), &c.rho.col(b));
                    first_mismatch(|| format!("ρ(a{a} a{b})"), &lhs, &rhs)?;
                }
            }
            Ok(())
        })(),
    ));
    r.push(Check::from_result(
        "comodule-unit",
        COMODULE,
        (|| {
            let r1 = c.rho(&c.a.one());
            first_mismatch(|| "ρ(1)".into(), &r1, &c.id_tensor(&r1, &c.k.eps_t_matrix()))
        })(),
    ));
    r
}

/// Turns a left `H`-module algebra into a right `H*`-comodule algebra,
/// `ρ(a) = Σ_k (e_k·a) ⊗ p_k`, and checks the comodule axioms, the round
/// trip back to the action, and coinvariants = invariants.
pub fn action_comodule_bridge<F: Field>(m: &ModuleAlgebra<F>) -> Result<(ComoduleAlgebra<F>, Report), ActionError> {
    let (dh, da) = (m.h.dim(), m.a.dim());
    let mut rho = Mat::zeros(da * dh, da);
    for (k, op) in m.ops.iter().enumerate() {
        for j in 0..da {
            for i in 0..da {
                let v = op.get(i, j);
                if !v.is_zero() {
                    rho.set(i * dh + k, j, v.clone());
                }
            }
        }
    }
    let c = ComoduleAlgebra { k: whopf::dual(&m.h)?, a: m.a.clone(), rho };
    let mut r = verify_comodule_algebra(&c);
    let back = comodule_to_module(&c)?;
    r.push(Check::from_result(
        "bridge-round-trip",
        COMODULE,
        if back.act_matrix() == m.act_matrix() && back.h.same_structure(&m.h) {
            Ok(())
        } else {
            Err("recovered action differs".into())
        },
    ));
    let inv = invariants(m)?;
    r.push(Check::from_result(
        "coinvariants-equal-invariants",
        COMODULE,
        if c.coinvariants() == inv { Ok(()) } else { Err(format!("coinvariants dim {} vs invariants dim {}", c.coinvariants().dim(), inv.dim())) },
    ));
    Ok((c, r))
}

/// The inverse of the bridge: `h·a = a⁽⁰⁾⟨a⁽¹⁾, h⟩` over `K*`.
pub fn comodule_to_module<F: Field>(c: &ComoduleAlgebra<F>) -> Result<ModuleAlgebra<F>, ActionError> {
    let (dk, da) = (c.k.dim(), c.a.dim());
    let h = whopf::dual(&c.k)?;
    ModuleAlgebra::from_fn(h, c.a.clone(), |k, j| (0..da).map(|i| c.rho.get(i * dk + k, j).clone()).collect())
}

/// `A #H` on `A ⊗_{H_t} H`, stored on quotient representatives.
#[derive(Clone, Debug)]
pub struct Smash<F> {
    pub module: ModuleAlgebra<F>,
    /// Quotient of `A ⊗ H` (index `a * dim H + h`).
    pub quotient: Quotient<F>,
    pub alg: Algebra<F>,
    pub report: Report,
}

impl<F: Field> Smash<F> {
    /// The class of `a # h`.
    pub fn class(&self, a: &[F], h: &[F]) -> Vec<F> {
        self.quotient.project(&kron_vec(a, h))
    }
}

/// `(a#h)(b#g) = a(h₁·b) # h₂g` on ambient basis elements.
fn ambient_product<F: Field>(m: &ModuleAlgebra<F>, x: usize, y: usize) -> Vec<F> {
    let (dh, da) = (m.h.dim(), m.a.dim());
    let (a, h) = (x / dh, x % dh);
    let (b, g) = (y / dh, y % dh);
    let mut out: Vec<F> = zeros(da * dh);
    for (i, c) in m.h.delta.col(h).iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (p, q) = (i / dh, i % dh);
        let left = m.a.mul(&unit(da, a), &m.ops[p].col(b));
        let right = m.h.alg.mul_basis(q, g);
        axpy(&mut out, c, &kron_vec(&left, &right));
    }
    out
}

fn ambient_mul<F: Field>(m: &ModuleAlgebra<F>, x: &[F], y: &[F]) -> Vec<F> {
    let n = x.len();
    let mut out: Vec<F> = zeros(n);
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                axpy(&mut out, &xi.mul_ref(yj), &ambient_product(m, i, j));
            }
        }
    }
    out
}

/// The balancing relations `(a·z) ⊗ h − a ⊗ zh` for `z ∈ H_t`, where
/// `a·z = a(z·1)`, inside `A ⊗ H` (index `a * dim H + h`).
pub fn smash_relations<F: Field>(m: &ModuleAlgebra<F>) -> Subspace<F> {
    let (dh, da) = (m.h.dim(), m.a.dim());
    let ht = m.h.eps_t_matrix().image();
    let one_a = m.a.one();
    let mut rels = Vec::new();
    for z in ht.basis() {
        let z1 = m.act(z, &one_a);
        for a in 0..da {
            let az = m.a.mul(&unit(da, a), &z1);
            for h in 0..dh {
                let zh = m.h.alg.mul(z, &unit(dh, h));
                let mut v = kron_vec(&az, &unit(dh, h));
                axpy(&mut v, &-F::one(), &kron_vec(&unit(da, a), &zh));
                rels.push(v);
            }
        }
    }
    Subspace::span(da * dh, rels)
}

/// Builds the smash product, verifying that the relations form a two-sided
/// ideal against every ambient basis element.
pub fn smash<F: Field>(m: &ModuleAlgebra<F>) -> Result<Smash<F>, ActionError> {
    let n = m.a.dim() * m.h.dim();
    let relations = smash_relations(m);
    let quotient = Quotient::from_relations(n, &relations);
    for (ri, rel) in relations.basis().iter().enumerate() {
        for x in 0..n {
            let ex = unit(n, x);
            if !crate::exactla::is_zero(&quotient.project(&ambient_mul(m, rel, &ex))) {
                return Err(ActionError::WellDefinedness(format!("relation {ri} times ambient basis {x} is not zero in the quotient")));
            }
            if !crate::exactla::is_zero(&quotient.project(&ambient_mul(m, &ex, rel))) {
                return Err(ActionError::WellDefinedness(format!("ambient basis {x} times relation {ri} is not zero in the quotient")));
            }
        }
    }
    let mut report = Report::new("smash product");
    report.push(Check::pass("well-defined", SMASH));
    smash_on_ideal(m, &relations, report)
}

/// The smash product when the caller has already shown that the balancing
/// relations form an ideal, e.g. as the kernel of a multiplicative map.
pub fn smash_on_ideal<F: Field>(m: &ModuleAlgebra<F>, relations: &Subspace<F>, mut report: Report) -> Result<Smash<F>, ActionError> {
    let dh = m.h.dim();
    let quotient = Quotient::from_relations(m.a.dim() * dh, relations);
    let reps = quotient.reps().to_vec();
    let labels = reps.iter().map(|&x| format!("{}#{}", m.a.labels()[x / dh], m.h.alg.labels()[x % dh])).collect();
    let unit_class = quotient.project(&kron_vec(&m.a.one(), &m.h.one()));
    let alg = Algebra::from_fn(quotient.dim(), unit_class, labels, |i, j| quotient.project(&ambient_product(m, reps[i], reps[j])))?;
    report.push(Check::pass("associative-and-unital", SMASH));
    let ht = m.h.eps_t_matrix().image();
    report.push(Check::from_result("right-action-via-antipode-inverse", SMASH, check_right_action(m, &ht)));
    Ok(Smash { module: m.clone(), quotient, alg, report })
}

/// `a(z·1) = S⁻¹(z)·a` for `z` in `H_t`.
fn check_right_action<F: Field>(m: &ModuleAlgebra<F>, ht: &Subspace<F>) -> Result<(), String> {
    let sinv = m.h.antipode.inverse().map_err(|_| "antipode is not invertible".to_string())?;
    let da = m.a.dim();
    let one = m.a.one();
    for (zi, z) in ht.basis().iter().enumerate() {
        let z1 = m.act(z, &one);
        let sz = sinv.mul_vec(z);
        for a in 0..da {
            first_mismatch(|| format!("a{a}·z{zi}"), &m.a.mul(&unit(da, a), &z1), &m.act(&sz, &unit(da, a)))?;
        }
    }
    Ok(())
}

/// `φ·(a#h) = a#(φ ⇀ h)`, an action of `H*` on `A#H`.
pub fn smash_dual_action<F: Field>(s: &Smash<F>) -> Result<ModuleAlgebra<F>, ActionError> {
    let m = &s.module;
    let (dh, da) = (m.h.dim(), m.a.dim());
    let n = dh * da;
    let std = standard_action(&m.h)?;
    // φ ⇀ on the ambient space, then checked to preserve the relations.
    let ambient: Vec<Mat<F>> = std.ops.iter().map(|op| Mat::identity(da).kron(op)).collect();
    let rels = s.quotient.relations();
    for (k, op) in ambient.iter().enumerate() {
        for (ri, rel) in rels.basis().iter().enumerate() {
            if !crate::exactla::is_zero(&s.quotient.project(&op.mul_vec(rel))) {
                return Err(ActionError::WellDefinedness(format!("p{k} does not preserve relation {ri}")));
            }
        }
    }
    let reps = s.quotient.reps().to_vec();
    ModuleAlgebra::from_fn(std.h.clone(), s.alg.clone(), |k, j| s.quotient.project(&ambient[k].mul_vec(&unit(n, reps[j]))))
}

/// Dimensions of `(A#H)#H*` and of the right `A`-module endomorphisms of `A#H`,
/// and of their centers.
#[derive(Clone, Debug)]
pub struct DualityDims {
    pub double_smash: usize,
    pub endomorphisms: usize,
    pub double_smash_center: usize,
    pub endomorphisms_center: usize,
    pub report: Report,
}

/// All `T` with `T M = M T` for every `M` in `mats`, as vectors of length
/// `n²` (row-major).
pub fn commutant<F: Field>(n: usize, mats: &[Mat<F>]) -> Subspace<F> {
    let mut rows = Vec::new();
    for m in mats {
        // (TM - MT)[i][j] = Σ_k T[i][k] M[k][j] - M[i][k] T[k][j]
        for i in 0..n {
            for j in 0..n {
                let mut row: Vec<F> = zeros(n * n);
                for k in 0..n {
                    row[i * n + k].add_assign_ref(m.get(k, j));
                    row[k * n + j].sub_assign_ref(m.get(i, k));
                }
                if !crate::exactla::is_zero(&row) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(n * n);
    }
    Mat::from_rows(rows, n * n).expect("rows have length n²").kernel()
}

fn as_matrix<F: Field>(v: &[F], n: usize) -> Mat<F> {
    Mat::from_rows((0..n).map(|i| v[i * n..(i + 1) * n].to_vec()).collect(), n).expect("square")
}

pub fn duality_dimension_check<F: Field>(m: &ModuleAlgebra<F>) -> Result<DualityDims, ActionError> {
    let s1 = smash(m)?;
    let dual_act = smash_dual_action(&s1)?;
    let s2 = smash(&dual_act)?;
    let n = s1.alg.dim();
    let da = m.a.dim();
    let one_h = m.h.one();
    let right_a: Vec<Mat<F>> = (0..da).map(|a| s1.alg.right_matrix(&s1.class(&unit(da, a), &one_h))).collect();
    let endo = commutant(n, &right_a);
    let endo_mats: Vec<Mat<F>> = endo.basis().iter().map(|v| as_matrix(v, n)).collect();
    let endo_center = commutant(n, &endo_mats).intersection(&endo);
    let dims = DualityDims {
        double_smash: s2.alg.dim(),
        endomorphisms: endo.dim(),
        double_smash_center: s2.alg.center().dim(),
        endomorphisms_center: endo_center.dim(),
        report: Report::new("smash duality"),
    };
    let mut report = Report::new("smash duality");
    report.extend(verify_module_algebra(&dual_act));
    report.push(Check::from_result(
        "dimension",
        DUALITY,
        if dims.double_smash == dims.endomorphisms { Ok(()) } else { Err(format!("{} vs {}", dims.double_smash, dims.endomorphisms)) },
    ));
    report.push(Check::from_result(
        "center-dimension",
        DUALITY,
        if dims.double_smash_center == dims.endomorphisms_center {
            Ok(())
        } else {
            Err(format!("{} vs {}", dims.double_smash_center, dims.endomorphisms_center))
        },
    ));
    Ok(DualityDims { report, ..dims })
}

/// The one-dimensional module algebra `k` over a Hopf algebra, `h·1 = ε(h)`.
pub fn ground_action<F: Field>(h: &WeakHopf<F>) -> Result<ModuleAlgebra<F>, ActionError> {
    ModuleAlgebra::from_fn(h.clone(), Algebra::ground(), |k, _| vec![h.eps[k].clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use crate::groupoid::{groupoid_algebra, Groupoid};
    use num_traits::{One, Zero};

    fn corpus() -> Vec<(&'static str, WeakHopf<Q>)> {
        Groupoid::corpus().into_iter().map(|(n, g)| (n, groupoid_algebra::<Q>(&g).unwrap())).collect()
    }

    #[test]
    fn canonical_actions_are_module_algebras() {
        for (name, h) in corpus() {
            for m in [trivial_action(&h).unwrap(), standard_action(&h).unwrap(), adjoint_action(&h).unwrap()] {
                let r = verify_module_algebra(&m);
                assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
            }
            let d = whopf::dual(&h).unwrap();
            for m in [trivial_action(&d).unwrap(), standard_action(&d).unwrap(), adjoint_action(&d).unwrap()] {
                assert!(verify_module_algebra(&m).all_passed(), "{name} dual");
            }
        }
    }

    #[test]
    fn broken_action_is_reported() {
        let h = groupoid_algebra::<Q>(&Groupoid::cyclic(2)).unwrap();
        let m = standard_action(&h).unwrap();
        let mut ops = m.ops.clone();
        ops[1] = Mat::identity(2);
        let r = verify_module_algebra(&ModuleAlgebra::new(m.h.clone(), m.a.clone(), ops).unwrap());
        assert!(!r.all_passed());
    }

    #[test]
    fn invariants_of_canonical_actions() {
        for (name, h) in corpus() {
            // The standard action fixes exactly H_t; that is k1 only in the Hopf case.
            for k in [h.clone(), whopf::dual(&h).unwrap()] {
                let std = invariants(&standard_action(&k).unwrap()).unwrap();
                assert_eq!(std, k.eps_t_matrix().image(), "{name}");
                assert_eq!(std == Subspace::span(k.dim(), vec![k.one()]), whopf::is_hopf(&k).unwrap(), "{name}");
            }
            let triv = trivial_action(&h).unwrap();
            assert!(invariants(&triv).unwrap().contains(&triv.a.one()), "{name}");
        }
        // kZ2 acting on itself by conjugation: everything is invariant.
        let h = groupoid_algebra::<Q>(&Groupoid::cyclic(2)).unwrap();
        let ad = adjoint_action(&h).unwrap();
        assert_eq!(ad.a.dim(), 2);
        assert_eq!(invariants(&ad).unwrap(), Subspace::full(2));
    }

    #[test]
    fn bridge_of_standard_action_is_the_coproduct() {
        let h = groupoid_algebra::<Q>(&Groupoid::cyclic(2)).unwrap();
        let d = whopf::dual(&h).unwrap();
        let (c, r) = action_comodule_bridge(&standard_action(&d).unwrap()).unwrap();
        assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(c.rho, d.delta);
    }

    #[test]
    fn bridge_round_trips_on_corpus() {
        for (name, h) in corpus() {
            for m in [trivial_action(&h).unwrap(), standard_action(&h).unwrap(), adjoint_action(&h).unwrap()] {
                let (_, r) = action_comodule_bridge(&m).unwrap();
                assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn smash_dimensions() {
        // Hopf case: no collapse.
        for g in [Groupoid::cyclic(2), Groupoid::cyclic(3)] {
            let h = groupoid_algebra::<Q>(&g).unwrap();
            let s = smash(&ground_action(&h).unwrap()).unwrap();
            assert_eq!(s.alg.dim(), h.dim());
            let s = smash(&standard_action(&whopf::dual(&h).unwrap()).unwrap()).unwrap();
            assert_eq!(s.alg.dim(), h.dim() * h.dim());
        }
        // H_t # H collapses to H.
        for (name, h) in corpus() {
            let s = smash(&trivial_action(&h).unwrap()).unwrap();
            assert!(s.report.all_passed(), "{name}");
            assert_eq!(s.alg.dim(), h.dim(), "{name}");
        }
    }

    #[test]
    fn smash_unit_is_neutral() {
        for (name, h) in corpus() {
            let s = smash(&adjoint_action(&h).unwrap()).unwrap();
            let one = s.alg.one();
            for k in 0..s.alg.dim() {
                let e = unit(s.alg.dim(), k);
                assert_eq!(s.alg.mul(&one, &e), e, "{name}");
                assert_eq!(s.alg.mul(&e, &one), e, "{name}");
            }
        }
    }

    #[test]
    fn inconsistent_action_breaks_well_definedness() {
        // Pair groupoid acting on H_t with a twisted unit: id_X swaps the two idempotents.
        let h = groupoid_algebra::<Q>(&Groupoid::pair(2)).unwrap();
        let m = trivial_action(&h).unwrap();
        let mut ops = m.ops.clone();
        let (o, z) = (Q::one(), Q::zero());
        ops[0] = Mat::from_rows(vec![vec![z.clone(), o.clone()], vec![o, z]], 2).unwrap();
        let bad = ModuleAlgebra::new(m.h.clone(), m.a.clone(), ops).unwrap();
        assert!(matches!(smash(&bad), Err(ActionError::WellDefinedness(_))));
    }

    #[test]
    fn smash_dual_action_over_ground_is_standard() {
        let h = groupoid_algebra::<Q>(&Groupoid::cyclic(2)).unwrap();
        let s = smash(&ground_action(&h).unwrap()).unwrap();
        let m = smash_dual_action(&s).unwrap();
        assert!(verify_module_algebra(&m).all_passed());
        assert_eq!(m.act_matrix(), standard_action(&h).unwrap().act_matrix());
    }

    #[test]
    fn duality_dimensions() {
        let h = groupoid_algebra::<Q>(&Groupoid::cyclic(2)).unwrap();
        let d = duality_dimension_check(&ground_action(&h).unwrap()).unwrap();
        assert!(d.report.all_passed(), "{:?}", d.report.failures().collect::<Vec<_>>());
        assert_eq!((d.double_smash, d.endomorphisms), (4, 4));
        for g in [Groupoid::pair(2), Groupoid::cyclic(3)] {
            let h = groupoid_algebra::<Q>(&g).unwrap();
            let d = duality_dimension_check(&trivial_action(&h).unwrap()).unwrap();
            assert!(d.report.all_passed(), "{:?}", d.report.failures().collect::<Vec<_>>());
        }
        let h = groupoid_algebra::<Q>(&Groupoid::pair(2)).unwrap();
        let d = duality_dimension_check(&adjoint_action(&h).unwrap()).unwrap();
        assert!(d.report.all_passed(), "{:?}", d.report.failures().collect::<Vec<_>>());
    }
}
