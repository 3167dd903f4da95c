//! The centralizer lattice of a depth-2 tower, the depth-2 test and the
//! expectations `E_A`, `E_B` on `C`.

use crate::algebra::{find_dual_bases, Algebra, AlgebraError};
use crate::exactla::{add, axpy, dot, scale, unit, zeros, Mat, Quotient, Subspace};
use crate::field::Field;
use crate::report::{Check, Report};

use super::{contained, mismatch, same_space, Depth2Half, MarkovError, Tower, EXPECTATIONS, LATTICE};

/// The bottom of a tower expressed in the coordinates of `M₂`.
#[derive(Clone, Debug)]
pub struct Frame<F> {
    pub n: Algebra<F>,
    pub m: Algebra<F>,
    pub m1: Algebra<F>,
    pub m2: Algebra<F>,
    pub lambda: F,
    pub lambda_inv: F,
    /// `e₁` and `e₂` in `M₂`.
    pub e1: Vec<F>,
    pub e2: Vec<F>,
    /// `T₂ = T ∘ E ∘ E_M ∘ E_{M₁}` as a functional on `M₂`.
    pub t2: Vec<F>,
    pub lift_n: Mat<F>,
    pub lift_m: Mat<F>,
    pub lift_m1: Mat<F>,
    /// `E_{M₁}: M₂ → M₁`.
    pub e_m1: Mat<F>,
    /// `E_M: M₁ → M`.
    pub e_m: Mat<F>,
    /// `E: M → N`.
    pub e: Mat<F>,
    /// `T(xy)` on basis pairs of `M₂`.
    trace_form: Mat<F>,
}

impl<F: Field> Frame<F> {
    pub fn new(t: &Tower<F>) -> Result<Self, MarkovError> {
        if t.depth() < 2 {
            return Err(MarkovError::TooShallow { need: 2, have: t.depth() });
        }
        let m2 = t.m(2).clone();
        let t2 = t.trace(2);
        let d = m2.dim();
        let mut trace_form = Mat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                trace_form.set(i, j, dot(&t2, &m2.mul_basis(i, j)));
            }
        }
        Ok(Frame {
            n: t.n().clone(),
            m: t.m(0).clone(),
            m1: t.m(1).clone(),
            lambda: t.lambda(),
            lambda_inv: t.lambda_inv(),
            e1: t.jones_in(1, 2),
            e2: t.jones(2).to_vec(),
            t2,
            lift_n: t.lift_n_matrix(2),
            lift_m: t.lift_matrix(0, 2),
            lift_m1: t.lift_matrix(1, 2),
            e_m1: t.e_down(2).e.clone(),
            e_m: t.e_down(1).e.clone(),
            e: t.e_down(0).e.clone(),
            trace_form,
            m2,
        })
    }

    pub fn dim(&self) -> usize {
        self.m2.dim()
    }

    pub fn one(&self) -> Vec<F> {
        self.m2.one()
    }

    pub fn mul(&self, x: &[F], y: &[F]) -> Vec<F> {
        self.m2.mul(x, y)
    }

    pub fn mul_all(&self, xs: &[&[F]]) -> Vec<F> {
        self.m2.mul_all(xs)
    }

    /// `T₂(x)`.
    pub fn t(&self, x: &[F]) -> F {
        dot(&self.t2, x)
    }

    /// `T₂(xy)` without forming the product.
    pub fn t_pair(&self, x: &[F], y: &[F]) -> F {
        dot(x, &self.trace_form.mul_vec(y))
    }

    /// `y ↦ (x ↦ T₂(xy))` as a coordinate vector.
    pub fn trace_dual(&self, y: &[F]) -> Vec<F> {
        self.trace_form.mul_vec(y)
    }

    /// `E_{M₁}(x)`, kept in `M₂` coordinates.
    pub fn e_m1_up(&self, x: &[F]) -> Vec<F> {
        self.lift_m1.mul_vec(&self.e_m1.mul_vec(x))
    }

    /// `M₁` coordinates of an element of `M₁ ⊆ M₂`.
    pub fn down_m1(&self, x: &[F]) -> Vec<F> {
        self.e_m1.mul_vec(x)
    }

    /// `M` coordinates of an element of `M ⊆ M₂`.
    pub fn down_m(&self, x: &[F]) -> Vec<F> {
        self.e_m.mul_vec(&self.down_m1(x))
    }

    pub fn up_m1(&self, x: &[F]) -> Vec<F> {
        self.lift_m1.mul_vec(x)
    }

    pub fn up_m(&self, x: &[F]) -> Vec<F> {
        self.lift_m.mul_vec(x)
    }

    /// The two-sided inverse in `M₂`, if any.
    pub fn inverse(&self, x: &[F]) -> Option<Vec<F>> {
        let y = self.m2.left_matrix(x).solve(&self.one()).ok()?;
        (self.mul(&y, x) == self.one()).then_some(y)
    }

    pub fn image_n(&self) -> Subspace<F> {
        self.lift_n.image()
    }

    pub fn image_m(&self) -> Subspace<F> {
        self.lift_m.image()
    }

    pub fn image_m1(&self) -> Subspace<F> {
        self.lift_m1.image()
    }

    /// `span{x y}` over basis pairs.
    pub fn product_span(&self, xs: &Subspace<F>, ys: &Subspace<F>) -> Subspace<F> {
        let mut v = Vec::with_capacity(xs.dim() * ys.dim());
        for x in xs.basis() {
            for y in ys.basis() {
                v.push(self.mul(x, y));
            }
        }
        Subspace::span(self.dim(), v)
    }

    /// `span{x e y}`.
    pub fn sandwich_span(&self, xs: &Subspace<F>, e: &[F], ys: &Subspace<F>) -> Subspace<F> {
        let mut v = Vec::with_capacity(xs.dim() * ys.dim());
        for x in xs.basis() {
            let xe = self.mul(x, e);
            for y in ys.basis() {
                v.push(self.mul(&xe, y));
            }
        }
        Subspace::span(self.dim(), v)
    }
}

/// `U, V, A` are computed in their own levels and also kept in `M₂`
/// coordinates; `W, B, C` live in `M₂`.
#[derive(Clone, Debug)]
pub struct CentralizerLattice<F> {
    pub u: Subspace<F>,
    pub v: Subspace<F>,
    pub w: Subspace<F>,
    pub a: Subspace<F>,
    pub b: Subspace<F>,
    pub c: Subspace<F>,
    /// `U = C_M(N)` in `M`.
    pub u_home: Subspace<F>,
    /// `V = C_{M₁}(M)` in `M₁`.
    pub v_home: Subspace<F>,
    /// `A = C_{M₁}(N)` in `M₁`.
    pub a_home: Subspace<F>,
    pub report: Report,
}

pub fn centralizers<F: Field>(t: &Tower<F>, f: &Frame<F>) -> Result<CentralizerLattice<F>, MarkovError> {
    if t.depth() < 2 {
        return Err(MarkovError::TooShallow { need: 2, have: t.depth() });
    }
    let u_home = t.base_cert.u.clone();
    let v_home = t.levels[0].cert.u.clone();
    let w = t.levels[1].cert.u.clone();
    let n_in_m1 = t.lift_n_matrix(1).image();
    let a_home = f.m1.centralizer(&n_in_m1);
    let b = f.m2.centralizer(&f.image_m());
    let c = f.m2.centralizer(&f.image_n());
    let u = u_home.map(&f.lift_m);
    let v = v_home.map(&f.lift_m1);
    let a = a_home.map(&f.lift_m1);

    let mut r = Report::new("centralizer lattice");
    r.push(Check::from_result("U-in-A", LATTICE, contained("U ⊆ A", &u, &a)));
    r.push(Check::from_result("V-in-A", LATTICE, contained("V ⊆ A", &v, &a)));
    r.push(Check::from_result("V-in-B", LATTICE, contained("V ⊆ B", &v, &b)));
    r.push(Check::from_result("W-in-B", LATTICE, contained("W ⊆ B", &w, &b)));
    r.push(Check::from_result("A-in-C", LATTICE, contained("A ⊆ C", &a, &c)));
    r.push(Check::from_result("B-in-C", LATTICE, contained("B ⊆ C", &b, &c)));
    r.push(Check::from_result("V-is-A-meet-B", LATTICE, same_space("V vs A ∩ B", &v, &a.intersection(&b))));
    let lvl = &t.levels[0].report;
    r.push(Check::from_result(
        "U-anti-isomorphic-to-V",
        LATTICE,
        if lvl.passed("centralizer-anti-isomorphism") && lvl.passed("anti-isomorphism-inverse") {
            Ok(())
        } else {
            Err("φ: U → V is not a verified anti-isomorphism".into())
        },
    ));
    Ok(CentralizerLattice { u, v, w, a, b, c, u_home, v_home, a_home, report: r })
}

/// Dual bases of `E_M` inside `A` and of `E_{M₁}` inside `B`.
#[derive(Clone, Debug)]
pub struct Depth2Data<F> {
    /// In `M₁` coordinates.
    pub zs: Vec<Vec<F>>,
    pub ws: Vec<Vec<F>>,
    /// In `M₂` coordinates.
    pub us: Vec<Vec<F>>,
    pub vs: Vec<Vec<F>>,
    pub report: Report,
}

pub fn depth2_check<F: Field>(t: &Tower<F>, _f: &Frame<F>, lat: &CentralizerLattice<F>) -> Result<Depth2Data<F>, MarkovError> {
    let to_err = |half: Depth2Half, e: AlgebraError| MarkovError::NotDepthTwo { half, reason: e.to_string() };
    let da = find_dual_bases(t.e_down(1), Some(&lat.a_home)).map_err(|e| to_err(Depth2Half::A, e))?;
    let db = find_dual_bases(t.e_down(2), Some(&lat.b)).map_err(|e| to_err(Depth2Half::B, e))?;
    let mut r = Report::new("depth two");
    r.push(Check::from_result(
        "dual-bases-in-A",
        LATTICE,
        da.verify(t.e_down(1)).and_then(|_| {
            if da.xs.iter().chain(&da.ys).all(|x| lat.a_home.contains(x)) {
                Ok(())
            } else {
                Err("a dual basis element leaves A".into())
            }
        }),
    ));
    r.push(Check::from_result(
        "dual-bases-in-B",
        LATTICE,
        db.verify(t.e_down(2)).and_then(|_| {
            if db.xs.iter().chain(&db.ys).all(|x| lat.b.contains(x)) {
                Ok(())
            } else {
                Err("a dual basis element leaves B".into())
            }
        }),
    ));
    Ok(Depth2Data { zs: da.xs, ws: da.ys, us: db.xs, vs: db.ys, report: r })
}

/// `E_A = E_{M₁}|_C` and `E_B(c) = T(c u_j c_i) d_i v_j`, where `a_i, b_i`
/// are trace-dual bases of `U` and `c_i = φ(a_i)`, `d_i = φ(b_i)`.
#[derive(Clone, Debug)]
pub struct Expectations<F> {
    c: Subspace<F>,
    /// Column `k` is `E_B` of the `k`-th echelon basis vector of `C`.
    e_b: Mat<F>,
    /// `c_i, d_i` in `M₂`.
    pub cs: Vec<Vec<F>>,
    pub ds: Vec<Vec<F>>,
    pub report: Report,
}

impl<F: Field> Expectations<F> {
    /// `E_B(x)` for `x ∈ C`.
    pub fn e_b(&self, x: &[F]) -> Result<Vec<F>, String> {
        let k = self.c.coords(x).ok_or("E_B applied outside C")?;
        Ok(self.e_b.mul_vec(&k))
    }

    /// `E_A(x)` for `x ∈ C`, in `M₂` coordinates.
    pub fn e_a(&self, f: &Frame<F>, x: &[F]) -> Vec<F> {
        f.e_m1_up(x)
    }
}

pub fn conditional_expectations<F: Field>(
    t: &Tower<F>,
    f: &Frame<F>,
    lat: &CentralizerLattice<F>,
    d2: &Depth2Data<F>,
) -> Result<Expectations<F>, MarkovError> {
    let (a_s, b_s) = t
        .base_cert
        .u_trace_duals
        .clone()
        .ok_or_else(|| MarkovError::NotCertified("no trace-dual bases on U".into()))?;
    let phi = &t.levels[0].phi;
    let cs: Vec<Vec<F>> = a_s.iter().map(|a| f.up_m1(&phi.mul_vec(a))).collect();
    let ds: Vec<Vec<F>> = b_s.iter().map(|b| f.up_m1(&phi.mul_vec(b))).collect();
    let (us, vs) = (&d2.us, &d2.vs);
    let dim = f.dim();

    let mut uc = Vec::new();
    let mut dv = Vec::new();
    for (u, v) in us.iter().zip(vs) {
        for (c, d) in cs.iter().zip(&ds) {
            uc.push(f.mul(u, c));
            dv.push(f.mul(d, v));
        }
    }
    let e_b_raw = |x: &[F]| {
        let mut out: Vec<F> = zeros(dim);
        for (y, z) in uc.iter().zip(&dv) {
            let s = f.t_pair(x, y);
            if !s.is_zero() {
                axpy(&mut out, &s, z);
            }
        }
        out
    };
    let cols: Vec<Vec<F>> = lat.c.basis().iter().map(|x| e_b_raw(x)).collect();
    let ex = Expectations { c: lat.c.clone(), e_b: Mat::from_cols(&cols, dim), cs, ds, report: Report::new("") };
    let report = expectation_report(f, lat, d2, &ex);
    Ok(Expectations { report, ..ex })
}

fn expectation_report<F: Field>(f: &Frame<F>, lat: &CentralizerLattice<F>, d2: &Depth2Data<F>, ex: &Expectations<F>) -> Report {
    let mut r = Report::new("depth-two expectations");
    let (lambda, lambda_inv) = (&f.lambda, &f.lambda_inv);
    let (cb, bb) = (lat.c.basis(), lat.b.basis());
    let (e1, e2) = (&f.e1, &f.e2);
    let ea = |x: &[F]| ex.e_a(f, x);
    let eb = |x: &[F]| ex.e_b(x);

    r.push(Check::from_result(
        "expectation-A-lands-in-A",
        EXPECTATIONS,
        cb.iter().enumerate().try_for_each(|(k, c)| if lat.a.contains(&ea(c)) { Ok(()) } else { Err(format!("E_A(c{k}) ∉ A")) }),
    ));
    r.push(Check::from_result(
        "expectation-B-lands-in-B",
        EXPECTATIONS,
        cb.iter().enumerate().try_for_each(|(k, c)| if lat.b.contains(&eb(c)?) { Ok(()) } else { Err(format!("E_B(c{k}) ∉ B")) }),
    ));
    r.push(Check::from_result(
        "expectation-B-identity-on-B",
        EXPECTATIONS,
        bb.iter().enumerate().try_for_each(|(k, b)| mismatch(|| format!("E_B(b{k})"), &eb(b)?, b)),
    ));
    r.push(Check::from_result(
        "expectation-B-bimodular",
        EXPECTATIONS,
        bb.iter().enumerate().try_for_each(|(i, b)| {
            cb.iter().enumerate().try_for_each(|(k, c)| {
                let ec = eb(c)?;
                mismatch(|| format!("E_B(b{i}c{k})"), &eb(&f.mul(b, c))?, &f.mul(b, &ec))?;
                mismatch(|| format!("E_B(c{k}b{i})"), &eb(&f.mul(c, b))?, &f.mul(&ec, b))
            })
        }),
    ));
    r.push(Check::from_result(
        "expectation-B-of-jones",
        EXPECTATIONS,
        eb(e1).and_then(|x| mismatch(|| "E_B(e₁)".into(), &x, &scale(lambda, &f.one()))),
    ));
    r.push(Check::from_result(
        "expectation-B-preserves-trace",
        EXPECTATIONS,
        cb.iter().enumerate().try_for_each(|(k, c)| {
            let ec = eb(c)?;
            bb.iter().enumerate().try_for_each(|(i, b)| {
                let (l, rr) = (f.t_pair(&ec, b), f.t_pair(b, c));
                if l == rr {
                    Ok(())
                } else {
                    Err(format!("T(E_B(c{k})b{i}) = {l} but T(b{i}c{k}) = {rr}"))
                }
            })
        }),
    ));
    r.push(Check::from_result(
        "expectation-B-alternative-form",
        EXPECTATIONS,
        cb.iter().enumerate().try_for_each(|(k, c)| {
            let mut alt: Vec<F> = zeros(f.dim());
            for (u, v) in d2.us.iter().zip(&d2.vs) {
                for (ci, di) in ex.cs.iter().zip(&ex.ds) {
                    let s = f.t(&f.mul_all(&[di, v, c]));
                    if !s.is_zero() {
                        axpy(&mut alt, &s, &f.mul(u, ci));
                    }
                }
            }
            mismatch(|| format!("E'_B(c{k})"), &alt, &eb(c)?)
        }),
    ));
    r.push(Check::from_result(
        "commuting-square",
        EXPECTATIONS,
        cb.iter().enumerate().try_for_each(|(k, c)| {
            let ab_ = ea(&eb(c)?);
            let ba = eb(&ea(c))?;
            let mut direct: Vec<F> = zeros(f.dim());
            for (ci, di) in ex.cs.iter().zip(&ex.ds) {
                axpy(&mut direct, &f.t_pair(c, ci), di);
            }
            mismatch(|| format!("E_A E_B(c{k}) vs E_B E_A(c{k})"), &ab_, &ba)?;
            mismatch(|| format!("E_A E_B(c{k}) vs T(c c_i)d_i"), &ab_, &direct)
        }),
    ));
    r.push(Check::from_result(
        "symmetric-square",
        EXPECTATIONS,
        (|| {
            same_space("AB vs C", &f.product_span(&lat.a, &lat.b), &lat.c)?;
            same_space("BA vs C", &f.product_span(&lat.b, &lat.a), &lat.c)?;
            cb.iter().enumerate().try_for_each(|(k, c)| {
                let mut left: Vec<F> = zeros(f.dim());
                let mut right: Vec<F> = zeros(f.dim());
                for (u, v) in d2.us.iter().zip(&d2.vs) {
                    left = add(&left, &f.mul(&ea(&f.mul(c, u)), v));
                    right = add(&right, &f.mul(u, &ea(&f.mul(v, c))));
                }
                mismatch(|| format!("E_A(c{k}u_j)v_j"), &left, c)?;
                mismatch(|| format!("u_j E_A(v_j c{k})"), &right, c)
            })
        })(),
    ));
    r.push(Check::from_result("tensor-over-V-is-C", EXPECTATIONS, tensor_over_v(f, lat)));
    r.push(Check::from_result(
        "pimsner-popa-on-C",
        EXPECTATIONS,
        cb.iter().enumerate().try_for_each(|(k, c)| {
            let e2c = f.mul(e2, c);
            mismatch(|| format!("λ⁻¹e₂E_A(e₂c{k})"), &scale(lambda_inv, &f.mul(e2, &ea(&e2c))), &e2c)?;
            let ce2 = f.mul(c, e2);
            mismatch(|| format!("λ⁻¹E_A(c{k}e₂)e₂"), &scale(lambda_inv, &f.mul(&ea(&ce2), e2)), &ce2)?;
            let e1c = f.mul(e1, c);
            mismatch(|| format!("λ⁻¹e₁E_B(e₁c{k})"), &scale(lambda_inv, &f.mul(e1, &eb(&e1c)?)), &e1c)?;
            let ce1 = f.mul(c, e1);
            mismatch(|| format!("λ⁻¹E_B(c{k}e₁)e₁"), &scale(lambda_inv, &f.mul(&eb(&ce1)?, e1)), &ce1)
        }),
    ));
    let one = Subspace::span(f.dim(), vec![f.one()]);
    let right = |s: &Subspace<F>, e: &[F]| f.sandwich_span(s, e, &one);
    let left = |e: &[F], s: &Subspace<F>| f.sandwich_span(&one, e, s);
    r.push(Check::from_result(
        "jones-cosets",
        EXPECTATIONS,
        (|| {
            same_space("Ce₂ vs Ae₂", &right(&lat.c, e2), &right(&lat.a, e2))?;
            same_space("e₂C vs e₂A", &left(e2, &lat.c), &left(e2, &lat.a))?;
            same_space("Ce₁ vs Be₁", &right(&lat.c, e1), &right(&lat.b, e1))?;
            same_space("e₁C vs e₁B", &left(e1, &lat.c), &left(e1, &lat.b))
        })(),
    ));
    r.push(Check::from_result(
        "C-generated-by-jones",
        EXPECTATIONS,
        (|| {
            same_space("Ae₂A vs C", &f.sandwich_span(&lat.a, e2, &lat.a), &lat.c)?;
            same_space("Be₁B vs C", &f.sandwich_span(&lat.b, e1, &lat.b), &lat.c)
        })(),
    ));
    r
}

/// `A ⊗_V B → C`, `a ⊗ b ↦ ab`, is well defined and bijective.
fn tensor_over_v<F: Field>(f: &Frame<F>, lat: &CentralizerLattice<F>) -> Result<(), String> {
    let (ab, bb) = (lat.a.basis(), lat.b.basis());
    let (na, nb) = (ab.len(), bb.len());
    let n = na * nb;
    let mut rels = Vec::new();
    for v in lat.v.basis() {
        let av: Vec<Vec<F>> = ab.iter().map(|a| lat.a.coords(&f.mul(a, v)).expect("A is closed under V")).collect();
        let vb: Vec<Vec<F>> = bb.iter().map(|b| lat.b.coords(&f.mul(v, b)).expect("B is closed under V")).collect();
        for (i, avi) in av.iter().enumerate() {
            for (j, vbj) in vb.iter().enumerate() {
                let mut rel = crate::exactla::kron_vec(avi, &unit(nb, j));
                axpy(&mut rel, &-F::one(), &crate::exactla::kron_vec(&unit(na, i), vbj));
                rels.push(rel);
            }
        }
    }
    let q = Quotient::from_relations(n, &Subspace::span(n, rels));
    let mut cols = Vec::with_capacity(n);
    for a in ab {
        for b in bb {
            cols.push(f.mul(a, b));
        }
    }
    let mult = Mat::from_cols(&cols, f.dim());
    if !mult.mul(&q.relations().basis_matrix()).is_zero() {
        return Err("multiplication does not factor through A ⊗_V B".into());
    }
    let rank = mult.rank();
    if q.dim() != lat.c.dim() || rank != lat.c.dim() {
        return Err(format!("dim A⊗_V B = {}, rank of multiplication {}, dim C = {}", q.dim(), rank, lat.c.dim()));
    }
    Ok(())
}
