//! The pairing `⟨a, b⟩ = λ⁻² T(a e₂ e₁ w b)` between `A` and `B` and the
//! weak Hopf algebra it induces on `B`.
//!
//! `Δ` on `B` is the transpose of multiplication on `A`, `ε(b) = ⟨1, b⟩`,
//! and `S` is defined by `⟨a, b⟩ = ⟨a, S(b)⟩'` with the second pairing
//! `⟨a, b⟩' = λ⁻² T(b e₁ e₂ w a)`. The structure maps are then re-checked
//! against the closed formulas in `M₂`.

use crate::algebra::Algebra;
use crate::exactla::{add, axpy, dot, kron_vec, scale, unit, zeros, Mat, Subspace};
use crate::field::Field;
use crate::report::{Check, Report};
use crate::whopf::{dual, is_left_integral, is_right_integral, tensor_matrix, transport, verify_axioms, WeakHopf};

use super::{contained, mismatch, same_space, CentralizerLattice, Depth2Data, Expectations, Frame, MarkovError, DERIVED, PAIRING};

#[derive(Clone, Debug)]
pub struct PairingData<F> {
    /// Legs of the symmetric separability element of `V`, in `M₂`.
    pub f: Vec<(Vec<F>, Vec<F>)>,
    /// `w = (f¹ T(f²))⁻¹`, central in `V`.
    pub w: Vec<F>,
    pub w_inv: Vec<F>,
    /// `⟨a_i, b_k⟩` on the echelon bases of `A` and `B`.
    pub gram: Mat<F>,
    /// `⟨a_i, b_k⟩'`.
    pub gram2: Mat<F>,
    /// `⟨x, b_k⟩ = dot(x, pair_cols[k])` for any `x ∈ M₂`.
    pair_cols: Vec<Vec<F>>,
    pub report: Report,
}

impl<F: Field> PairingData<F> {
    /// `⟨x, b_k⟩` with `b_k` the `k`-th echelon basis vector of `B`.
    pub fn pair_basis(&self, x: &[F], k: usize) -> F {
        dot(x, &self.pair_cols[k])
    }
}

pub fn pairing<F: Field>(f: &Frame<F>, lat: &CentralizerLattice<F>, _ex: &Expectations<F>) -> Result<PairingData<F>, MarkovError> {
    let mut r = Report::new("duality pairing");
    let valg = f.m1.subalgebra(&lat.v_home)?;
    let sep = valg.kanzaki_element()?;
    r.push(Check::from_result("separability-element-of-V", PAIRING, sep.verify(&valg, true)));
    let to_m2 = |x: &[F]| f.up_m1(&lat.v_home.element(x));
    let legs: Vec<(Vec<F>, Vec<F>)> = sep.legs().iter().map(|(a, b)| (to_m2(a), to_m2(b))).collect();

    let mut z: Vec<F> = zeros(f.dim());
    for (a, b) in &legs {
        axpy(&mut z, &f.t(b), a);
    }
    let w = f.inverse(&z).ok_or_else(|| MarkovError::Failed {
        stage: PAIRING.into(),
        witness: "f¹T(f²) is not invertible".into(),
    })?;
    r.push(Check::from_result(
        "weight-central-in-V",
        PAIRING,
        (|| {
            if !lat.v.contains(&w) {
                return Err("w is not in V".into());
            }
            for v in lat.v.basis() {
                mismatch(|| "wv = vw".into(), &f.mul(&w, v), &f.mul(v, &w))?;
            }
            Ok(())
        })(),
    ));
    r.push(Check::from_result(
        "separability-normalization",
        PAIRING,
        lat.v.basis().iter().try_for_each(|v| {
            let vw = f.mul(v, &w);
            let mut s: Vec<F> = zeros(f.dim());
            for (a, b) in &legs {
                axpy(&mut s, &f.t_pair(&vw, b), a);
            }
            mismatch(|| "f¹T(vwf²) = v".into(), &s, v)
        }),
    ));

    let lam2 = f.lambda_inv.mul_ref(&f.lambda_inv);
    let e2e1w = f.mul_all(&[&f.e2, &f.e1, &w]);
    let e1e2w = f.mul_all(&[&f.e1, &f.e2, &w]);
    let (ab, bb) = (lat.a.basis(), lat.b.basis());
    let pair_cols: Vec<Vec<F>> = bb.iter().map(|b| scale(&lam2, &f.trace_dual(&f.mul(&e2e1w, b)))).collect();
    let pair2_cols: Vec<Vec<F>> = bb.iter().map(|b| scale(&lam2, &f.trace_dual(&f.mul(b, &e1e2w)))).collect();
    let gram_of = |cols: &[Vec<F>]| {
        let mut g = Mat::zeros(ab.len(), bb.len());
        for (i, a) in ab.iter().enumerate() {
            for (k, c) in cols.iter().enumerate() {
                g.set(i, k, dot(a, c));
            }
        }
        g
    };
    let gram = gram_of(&pair_cols);
    let gram2 = gram_of(&pair2_cols);
    if ab.len() != bb.len() || gram.rank() != ab.len() {
        return Err(MarkovError::SingularGram(format!(
            "dim A = {}, dim B = {}, rank {}",
            ab.len(),
            bb.len(),
            gram.rank()
        )));
    }
    r.push(Check::pass("pairing-nondegenerate", PAIRING));
    if gram2.rank() != ab.len() {
        return Err(MarkovError::SingularGram(format!("second pairing has rank {}", gram2.rank())));
    }
    r.push(Check::pass("second-pairing-nondegenerate", PAIRING));
    Ok(PairingData { f: legs, w, w_inv: z, gram, gram2, pair_cols, report: r })
}

/// The weak Hopf algebra on `B` (echelon basis of `B` in `M₂`) and its
/// dual transported onto `A`.
#[derive(Clone, Debug)]
pub struct DerivedWeakHopf<F> {
    pub b_whopf: WeakHopf<F>,
    pub a_whopf: WeakHopf<F>,
    /// `g = S(w⁻¹) w`, implementing `S²` by conjugation.
    pub g: Vec<F>,
    /// `e₂S⁻¹(e₂) = λe₂w`, the two-sided integral with `ε_t = ε_s = 1`.
    pub haar: Vec<F>,
    pub axioms: Report,
    pub a_axioms: Report,
    pub report: Report,
}

/// Shared data for the identity checks.
struct Ctx<'a, F> {
    f: &'a Frame<F>,
    lat: &'a CentralizerLattice<F>,
    ex: &'a Expectations<F>,
    h: &'a WeakHopf<F>,
    w: &'a [F],
    w_inv: &'a [F],
    s_inv: Mat<F>,
    eps_form: Vec<F>,
    n: usize,
}

impl<F: Field> Ctx<'_, F> {
    fn b(&self, k: usize) -> &[F] {
        &self.lat.b.basis()[k]
    }

    fn el(&self, c: &[F]) -> Vec<F> {
        self.lat.b.element(c)
    }

    fn co(&self, x: &[F]) -> Result<Vec<F>, String> {
        self.lat.b.coords(x).ok_or_else(|| "element is not in B".to_string())
    }

    fn s(&self, x: &[F]) -> Result<Vec<F>, String> {
        Ok(self.el(&self.h.s(&self.co(x)?)))
    }

    fn s_inv(&self, x: &[F]) -> Result<Vec<F>, String> {
        Ok(self.el(&self.s_inv.mul_vec(&self.co(x)?)))
    }

    /// `ε(x) = λ⁻² T(e₂e₁wx)` for `x ∈ M₂`.
    fn eps(&self, x: &[F]) -> F {
        dot(x, &self.eps_form)
    }

    fn e_a(&self, x: &[F]) -> Vec<F> {
        self.f.e_m1_up(x)
    }

    /// Nonzero terms `(p, q, c)` of `Δ(b_k) = Σ c b_p ⊗ b_q`.
    fn legs(&self, k: usize) -> Vec<(usize, usize, F)> {
        let n = self.n;
        (0..n * n)
            .filter(|&i| !self.h.delta.get(i, k).is_zero())
            .map(|i| (i / n, i % n, self.h.delta.get(i, k).clone()))
            .collect()
    }

    fn unit_legs(&self) -> Vec<(usize, usize, F)> {
        let n = self.n;
        let d1 = self.h.delta_one();
        (0..n * n).filter(|&i| !d1[i].is_zero()).map(|i| (i / n, i % n, d1[i].clone())).collect()
    }

    /// A subspace of `M₂` contained in `B`, in `B` coordinates.
    fn in_b(&self, s: &Subspace<F>) -> Result<Subspace<F>, String> {
        let v = s.basis().iter().map(|x| self.co(x)).collect::<Result<Vec<_>, _>>()?;
        Ok(Subspace::span(self.n, v))
    }

    fn m1(&self, x: &[F]) -> Vec<F> {
        self.f.down_m1(x)
    }
}

/// Whether `t ∈ X ⊗ Y` for a two-leg tensor over an algebra of dimension `d`.
fn tensor_in<F: Field>(t: &[F], d: usize, x: &Subspace<F>, y: &Subspace<F>) -> Result<(), String> {
    let m = tensor_matrix(t, d);
    for q in 0..d {
        if !x.contains(&m.col(q)) {
            return Err(format!("first leg paired with basis {q} leaves the space"));
        }
    }
    for p in 0..d {
        if !y.contains(m.row(p)) {
            return Err(format!("second leg paired with basis {p} leaves the space"));
        }
    }
    Ok(())
}

pub fn derive_whopf<F: Field>(
    f: &Frame<F>,
    lat: &CentralizerLattice<F>,
    _d2: &Depth2Data<F>,
    ex: &Expectations<F>,
    pd: &PairingData<F>,
) -> Result<DerivedWeakHopf<F>, MarkovError> {
    let (ab, bb) = (lat.a.basis(), lat.b.basis());
    let n = bb.len();
    let ginv = pd.gram.inverse()?;
    let g2inv = pd.gram2.inverse()?;
    let mut p = Mat::zeros(n * n, n);
    for i in 0..n {
        for j in 0..n {
            let prod = f.mul(&ab[i], &ab[j]);
            for k in 0..n {
                p.set(i * n + j, k, pd.pair_basis(&prod, k));
            }
        }
    }
    let delta = ginv.kron(&ginv).mul(&p);
    let one = f.one();
    let eps: Vec<F> = (0..n).map(|k| pd.pair_basis(&one, k)).collect();
    let antipode = g2inv.mul(&pd.gram);
    let labels = (0..n).map(|k| format!("b{k}")).collect();
    let b_alg = f.m2.subalgebra(&lat.b)?.with_labels(labels);
    let h = WeakHopf::new(b_alg, delta, eps, antipode)?;
    let axioms = verify_axioms(&h);

    let a_labels = (0..n).map(|k| format!("a{k}")).collect();
    let a_whopf = transport(&dual(&h)?, &pd.gram.transpose(), a_labels)?;
    let a_axioms = verify_axioms(&a_whopf);

    let s_inv = h.antipode.inverse().map_err(|e| MarkovError::Failed { stage: DERIVED.into(), witness: format!("S is not invertible: {e}") })?;
    let lam2 = f.lambda_inv.mul_ref(&f.lambda_inv);
    let eps_form = scale(&lam2, &f.trace_dual(&f.mul_all(&[&f.e2, &f.e1, &pd.w])));
    let cx = Ctx { f, lat, ex, h: &h, w: &pd.w, w_inv: &pd.w_inv, s_inv, eps_form, n };

    let mut r = Report::new("derived weak Hopf algebra");
    let mut push = |name: &str, res: Result<(), String>| r.push(Check::from_result(name, DERIVED, res));

    push("coproduct-system-consistent", {
        let g = &pd.gram;
        if g.kron(g).mul(&h.delta) == p {
            Ok(())
        } else {
            Err("(G⊗G)Δ differs from the product pairing".into())
        }
    });
    push("antipode-defining-relation", check_antipode_relation(&cx, pd));
    push("antipode-defining-relation-on-M1", check_antipode_relation_m1(&cx));
    push("counit-from-trace", (0..n).try_for_each(|k| {
        let rhs = f.lambda_inv.mul_ref(&f.t(&f.mul_all(&[&f.e2, cx.w, cx.b(k)])));
        mismatch(|| format!("ε(b{k}) = λ⁻¹T(e₂wb{k})"), &[h.eps[k].clone()], &[rhs])
    }));
    push("counit-antipode-invariant", (0..n).try_for_each(|k| {
        mismatch(|| format!("ε(S(b{k}))"), &[h.counit(&h.antipode.col(k))], &[h.eps[k].clone()])
    }));
    push("unit-coproduct-from-separability", check_unit_coproduct(&cx, pd));
    push("unit-coproduct-in-W-tensor-V", (|| {
        let (w_b, v_b) = (cx.in_b(&lat.w)?, cx.in_b(&lat.v)?);
        tensor_in(&h.delta_one(), n, &w_b, &v_b)
    })());
    push("antipode-inverse-closed-form", check_sinv_closed_form(&cx));
    push("antipode-maps-V-onto-W", (|| {
        let sv = lat.v.basis().iter().map(|v| cx.s(v)).collect::<Result<Vec<_>, _>>()?;
        same_space("S(V) = W", &Subspace::span(f.dim(), sv), &lat.w)
    })());
    push("antipode-inverse-conjugation", (0..n).try_for_each(|k| {
        let inner = f.mul_all(&[cx.w, &cx.s_inv(cx.b(k))?, cx.w_inv]);
        let outer = f.mul_all(&[cx.w, &cx.s_inv(&inner)?, cx.w_inv]);
        mismatch(|| format!("wS⁻¹(wS⁻¹(b{k})w⁻¹)w⁻¹"), &outer, cx.b(k))
    }));
    push("antipode-anti-multiplicative", (0..n).try_for_each(|i| {
        (0..n).try_for_each(|j| {
            let lhs = h.s(&h.alg.mul_basis(i, j));
            let rhs = h.alg.mul(&h.antipode.col(j), &h.antipode.col(i));
            mismatch(|| format!("S(b{i}b{j})"), &lhs, &rhs)
        })
    }));
    let g = (|| -> Result<Vec<F>, String> { Ok(f.mul(&cx.s(cx.w_inv)?, cx.w)) })();
    push("antipode-square-is-inner", (|| {
        let g = g.clone()?;
        let g_inv = f.inverse(&g).ok_or("g is not invertible")?;
        (0..n).try_for_each(|k| {
            let s2 = cx.s(&cx.s(cx.b(k))?)?;
            mismatch(|| format!("S²(b{k}) = g b{k} g⁻¹"), &s2, &f.mul_all(&[&g, cx.b(k), &g_inv]))
        })
    })());
    push("coproduct-right-V-linear", check_right_v_linear(&cx));
    let jones_conj = f.mul_all(&[cx.w_inv, &f.e2, cx.w]);
    push("antipode-inverse-of-jones", cx.s_inv(&f.e2).and_then(|x| mismatch(|| "S⁻¹(e₂) = w⁻¹e₂w".into(), &x, &jones_conj)));
    push("antipode-of-jones", cx.s(&f.e2).and_then(|x| mismatch(|| "S(e₂) = w⁻¹e₂w".into(), &x, &jones_conj)));
    push("jones-absorbs-antipode-on-V", lat.v.basis().iter().try_for_each(|v| {
        mismatch(|| "ve₂ = S(v)e₂".into(), &f.mul(v, &f.e2), &f.mul(&cx.s(v)?, &f.e2))
    }));
    push("expectation-of-jones-is-counit", check_counit_sandwich(&cx));
    push("coproduct-balanced-over-V", check_balanced(&cx));
    push("coproduct-absorbs-unit", (0..n).try_for_each(|k| {
        let dk = h.coproduct(&unit(n, k));
        mismatch(|| format!("Δ(b{k})Δ(1)"), &h.mul2(&dk, &h.delta_one()), &dk)
    }));
    push("expectation-B-pairing-formula", check_e_b_pairing(&cx, pd));
    push("coproduct-reconstruction", check_reconstruction(&cx));
    push("jones-commutation", check_jones_commutation(&cx));
    push("M1-commutation", check_m1_commutation(&cx));
    push("anti-measuring", check_anti_measuring(&cx));
    push("antipode-anti-comultiplicative", (0..n).try_for_each(|k| {
        let lhs = h.coproduct(&h.antipode.col(k));
        let rhs = h.s_tensor_s(&h.flip(&h.coproduct(&unit(n, k))));
        mismatch(|| format!("ΔS(b{k})"), &lhs, &rhs)
    }));
    push("expectation-measuring", check_measuring(&cx));
    push("counital-formulas", check_counital_formulas(&cx));
    push("target-counit-formula", (0..n).try_for_each(|k| {
        let lhs = cx.el(&h.eps_t(&unit(n, k)));
        let rhs = scale(&f.lambda_inv, &cx.e_a(&f.mul(cx.b(k), &f.e2)));
        mismatch(|| format!("ε_t(b{k}) = λ⁻¹E_A(b{k}e₂)"), &lhs, &rhs)
    }));
    push("jones-normalized-left-integral", (|| {
        let e = cx.co(&f.e2)?;
        if !is_left_integral(&h, &e) {
            return Err("e₂ is not a left integral".into());
        }
        mismatch(|| "ε_t(e₂)".into(), &h.eps_t(&e), &h.one())
    })());
    // e₂w⁻¹e₂ = E_M(w⁻¹)e₂ and E_M(w⁻¹) = λ, so e₂S⁻¹(e₂) = λe₂w.
    let haar = scale(&f.lambda, &f.mul(&f.e2, cx.w));
    push("haar-integral", (|| {
        mismatch(|| "e₂S⁻¹(e₂) = λe₂w".into(), &f.mul(&f.e2, &cx.s_inv(&f.e2)?), &haar)?;
        let l = cx.co(&haar)?;
        if !is_left_integral(&h, &l) || !is_right_integral(&h, &l) {
            return Err("e₂w is not a two-sided integral".into());
        }
        mismatch(|| "S(l) = l".into(), &h.s(&l), &l)?;
        mismatch(|| "ε_t(l) = 1".into(), &h.eps_t(&l), &h.one())?;
        mismatch(|| "ε_s(l) = 1".into(), &h.eps_s(&l), &h.one())
    })());
    push("weight-expectation", {
        let em = f.e_m.mul_vec(&f.down_m1(cx.w_inv));
        let target = scale(&f.lambda, &f.m.one());
        mismatch(|| "E_M(w⁻¹) = λ".into(), &em, &target)
    });
    push("target-subalgebra-is-V", (|| {
        let t = Subspace::span(f.dim(), h.eps_t_matrix().image().basis().iter().map(|c| cx.el(c)).collect());
        same_space("H_t = V", &t, &lat.v)
    })());
    push("source-subalgebra-is-W", (|| {
        let s = Subspace::span(f.dim(), h.eps_s_matrix().image().basis().iter().map(|c| cx.el(c)).collect());
        same_space("H_s = W", &s, &lat.w)
    })());
    push("dimensions-match", if ab.len() == n { Ok(()) } else { Err(format!("dim A = {}, dim B = {n}", ab.len())) });
    push("dual-is-A", (|| {
        let a_alg: Algebra<F> = f.m2.subalgebra(&lat.a).map_err(|e| e.to_string())?;
        if a_alg.entries() != a_whopf.alg.entries() {
            return Err("products differ".into());
        }
        mismatch(|| "unit".into(), a_whopf.alg.unit_ref(), a_alg.unit_ref())
    })());
    push("dual-unit-coproduct-in-A-tensor-U", (|| {
        let u_in_a = lat.u.basis().iter().map(|u| lat.a.coords(u).ok_or("U is not in A")).collect::<Result<Vec<_>, _>>()?;
        contained("U ⊆ A", &lat.u, &lat.a)?;
        tensor_in(&a_whopf.delta_one(), n, &Subspace::full(n), &Subspace::span(n, u_in_a))
    })());
    push("A-weak-Hopf-axioms", match a_axioms.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{} fails", c.name)),
    });
    push("B-weak-Hopf-axioms", match axioms.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{} fails", c.name)),
    });

    Ok(DerivedWeakHopf { b_whopf: h.clone(), a_whopf, g: g.unwrap_or_default(), haar, axioms, a_axioms, report: r })
}

/// `E_A(e₂e₁wb) = E_A(S(b)e₁e₂)w`.
fn check_antipode_relation<F: Field>(cx: &Ctx<'_, F>, _pd: &PairingData<F>) -> Result<(), String> {
    let f = cx.f;
    let e2e1w = f.mul_all(&[&f.e2, &f.e1, cx.w]);
    (0..cx.n).try_for_each(|k| {
        let lhs = cx.e_a(&f.mul(&e2e1w, cx.b(k)));
        let rhs = f.mul(&cx.e_a(&f.mul_all(&[&cx.s(cx.b(k))?, &f.e1, &f.e2])), cx.w);
        mismatch(|| format!("E_A(e₂e₁wb{k})"), &lhs, &rhs)
    })
}

/// `E_{M₁}(e₂xwb) = E_{M₁}(S(b)xe₂)w` for `x ∈ M₁`.
fn check_antipode_relation_m1<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let f = cx.f;
    let sb: Vec<Vec<F>> = (0..cx.n).map(|k| cx.s(cx.b(k))).collect::<Result<_, _>>()?;
    for xi in 0..f.m1.dim() {
        let x = f.up_m1(&unit(f.m1.dim(), xi));
        let e2xw = f.mul_all(&[&f.e2, &x, cx.w]);
        let xe2 = f.mul(&x, &f.e2);
        for (k, s) in sb.iter().enumerate() {
            let lhs = f.e_m1_up(&f.mul(&e2xw, cx.b(k)));
            let rhs = f.mul(&f.e_m1_up(&f.mul(s, &xe2)), cx.w);
            mismatch(|| format!("x = m{xi}, b = b{k}"), &lhs, &rhs)?;
        }
    }
    Ok(())
}

/// `Δ(1) = S⁻¹(f¹) ⊗ f² = S(f¹) ⊗ f²`.
fn check_unit_coproduct<F: Field>(cx: &Ctx<'_, F>, pd: &PairingData<F>) -> Result<(), String> {
    let n = cx.n;
    let mut via_s: Vec<F> = zeros(n * n);
    let mut via_sinv: Vec<F> = zeros(n * n);
    for (a, b) in &pd.f {
        let (a, b) = (cx.co(a)?, cx.co(b)?);
        let one = F::one();
        axpy(&mut via_s, &one, &kron_vec(&cx.h.s(&a), &b));
        axpy(&mut via_sinv, &one, &kron_vec(&cx.s_inv.mul_vec(&a), &b));
    }
    let d1 = cx.h.delta_one();
    mismatch(|| "S⁻¹(f¹)⊗f²".into(), &via_sinv, &d1)?;
    mismatch(|| "S(f¹)⊗f²".into(), &via_s, &d1)
}

/// `S⁻¹(b) = λ⁻³ w⁻¹ E_B(e₁e₂E_A(be₁e₂)) w`.
fn check_sinv_closed_form<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let f = cx.f;
    let l3 = f.lambda_inv.mul_ref(&f.lambda_inv).mul_ref(&f.lambda_inv);
    let e1e2 = f.mul(&f.e1, &f.e2);
    (0..cx.n).try_for_each(|k| {
        let inner = cx.e_a(&f.mul(cx.b(k), &e1e2));
        let eb = cx.ex.e_b(&f.mul(&e1e2, &inner))?;
        let rhs = scale(&l3, &f.mul_all(&[cx.w_inv, &eb, cx.w]));
        mismatch(|| format!("S⁻¹(b{k})"), &cx.s_inv(cx.b(k))?, &rhs)
    })
}

/// `Δ(bv) = Δ(b)(v ⊗ 1)` for `v ∈ V`.
fn check_right_v_linear<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let (h, n) = (cx.h, cx.n);
    let one = h.one();
    for v in cx.lat.v.basis() {
        let vc = cx.co(v)?;
        let vt = kron_vec(&vc, &one);
        for k in 0..n {
            let lhs = h.coproduct(&h.alg.mul(&unit(n, k), &vc));
            let rhs = h.mul2(&h.coproduct(&unit(n, k)), &vt);
            mismatch(|| format!("Δ(b{k}v)"), &lhs, &rhs)?;
        }
    }
    Ok(())
}

/// `λ⁻¹E_A(e₂wb)w⁻¹ = ε(b1₁)1₂`.
fn check_counit_sandwich<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let f = cx.f;
    let e2w = f.mul(&f.e2, cx.w);
    let ul = cx.unit_legs();
    (0..cx.n).try_for_each(|k| {
        let lhs = scale(&f.lambda_inv, &f.mul(&cx.e_a(&f.mul(&e2w, cx.b(k))), cx.w_inv));
        let mut rhs: Vec<F> = zeros(f.dim());
        for (p, q, c) in &ul {
            let e = c.mul_ref(&cx.eps(&f.mul(cx.b(k), cx.b(*p))));
            axpy(&mut rhs, &e, cx.b(*q));
        }
        mismatch(|| format!("λ⁻¹E_A(e₂wb{k})w⁻¹"), &lhs, &rhs)
    })
}

/// `Δ(b)(1 ⊗ v) = Δ(b)(S(v) ⊗ 1)` for `v ∈ V`.
fn check_balanced<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let (h, n) = (cx.h, cx.n);
    let one = h.one();
    for v in cx.lat.v.basis() {
        let vc = cx.co(v)?;
        let right = kron_vec(&one, &vc);
        let left = kron_vec(&h.s(&vc), &one);
        for k in 0..n {
            let dk = h.coproduct(&unit(n, k));
            mismatch(|| format!("Δ(b{k})(1⊗v)"), &h.mul2(&dk, &right), &h.mul2(&dk, &left))?;
        }
    }
    Ok(())
}

/// `λ⁻¹E_B(e₁wba) = ⟨a, b₁⟩ w b₂`.
fn check_e_b_pairing<F: Field>(cx: &Ctx<'_, F>, pd: &PairingData<F>) -> Result<(), String> {
    let f = cx.f;
    let e1w = f.mul(&f.e1, cx.w);
    for k in 0..cx.n {
        let e1wb = f.mul(&e1w, cx.b(k));
        let legs = cx.legs(k);
        for (i, a) in cx.lat.a.basis().iter().enumerate() {
            let lhs = scale(&f.lambda_inv, &cx.ex.e_b(&f.mul(&e1wb, a))?);
            let mut acc: Vec<F> = zeros(cx.n);
            for (p, q, c) in &legs {
                acc[*q].add_mul(c, pd.gram.get(i, *p));
            }
            let rhs = f.mul(cx.w, &cx.el(&acc));
            mismatch(|| format!("a{i}, b{k}"), &lhs, &rhs)?;
        }
    }
    Ok(())
}

/// `λ⁻¹ b₂ E_A(e₂wb₁) w⁻¹ = b`.
fn check_reconstruction<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let f = cx.f;
    let e2w = f.mul(&f.e2, cx.w);
    let ea: Vec<Vec<F>> = (0..cx.n).map(|p| f.mul(&cx.e_a(&f.mul(&e2w, cx.b(p))), cx.w_inv)).collect();
    (0..cx.n).try_for_each(|k| {
        let mut s: Vec<F> = zeros(f.dim());
        for (p, q, c) in cx.legs(k) {
            axpy(&mut s, &c, &f.mul(cx.b(q), &ea[p]));
        }
        mismatch(|| format!("b{k}"), &scale(&f.lambda_inv, &s), cx.b(k))
    })
}

/// `w⁻¹e₁wb = λ⁻¹ b₂ w⁻¹ E_A(e₂e₁wb₁)`.
fn check_jones_commutation<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let f = cx.f;
    let e2e1w = f.mul_all(&[&f.e2, &f.e1, cx.w]);
    let r: Vec<Vec<F>> = (0..cx.n).map(|p| f.mul(cx.w_inv, &cx.e_a(&f.mul(&e2e1w, cx.b(p))))).collect();
    let lhs0 = f.mul_all(&[cx.w_inv, &f.e1, cx.w]);
    (0..cx.n).try_for_each(|k| {
        let mut s: Vec<F> = zeros(f.dim());
        for (p, q, c) in cx.legs(k) {
            axpy(&mut s, &c, &f.mul(cx.b(q), &r[p]));
        }
        mismatch(|| format!("b{k}"), &f.mul(&lhs0, cx.b(k)), &scale(&f.lambda_inv, &s))
    })
}

/// `w⁻¹xb = λ⁻¹ b₂ w⁻¹ E_{M₁}(e₂xb₁)` for `x ∈ M₁`.
fn check_m1_commutation<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let f = cx.f;
    let d1 = f.m1.dim();
    let legs: Vec<_> = (0..cx.n).map(|k| cx.legs(k)).collect();
    for xi in 0..d1 {
        let x = f.up_m1(&unit(d1, xi));
        let e2x = f.mul(&f.e2, &x);
        let r: Vec<Vec<F>> = (0..cx.n).map(|p| f.mul(cx.w_inv, &f.e_m1_up(&f.mul(&e2x, cx.b(p))))).collect();
        let winv_x = f.mul(cx.w_inv, &x);
        for (k, lk) in legs.iter().enumerate() {
            let mut s: Vec<F> = zeros(f.dim());
            for (p, q, c) in lk {
                axpy(&mut s, c, &f.mul(cx.b(*q), &r[*p]));
            }
            mismatch(|| format!("x = m{xi}, b{k}"), &f.mul(&winv_x, cx.b(k)), &scale(&f.lambda_inv, &s))?;
        }
    }
    Ok(())
}

/// `E_{M₁}(e₂wyxb) = λ⁻¹ E_{M₁}(e₂wyb₂) w⁻¹ E_{M₁}(e₂wxb₁)` for `x, y ∈ M₁`,
/// evaluated in `M₁` coordinates.
fn check_anti_measuring<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let f = cx.f;
    let (n, d1) = (cx.n, f.m1.dim());
    let e2w = f.mul(&f.e2, cx.w);
    // z[x][k] = E_{M₁}(e₂ w x b_k) in M₁ coordinates.
    let z: Vec<Vec<Vec<F>>> = (0..d1)
        .map(|xi| {
            let e2wx = f.mul(&e2w, &f.up_m1(&unit(d1, xi)));
            (0..n).map(|k| cx.m1(&f.mul(&e2wx, cx.b(k)))).collect()
        })
        .collect();
    let w_inv = cx.m1(cx.w_inv);
    let legs: Vec<_> = (0..n).map(|k| cx.legs(k)).collect();
    for xi in 0..d1 {
        let wz: Vec<Vec<F>> = z[xi].iter().map(|v| f.m1.mul(&w_inv, v)).collect();
        for (k, lk) in legs.iter().enumerate() {
            // inner[q] = Σ_p c_pq w⁻¹ z[x][p]
            let mut inner: Vec<Vec<F>> = vec![zeros(d1); n];
            for (p, q, c) in lk {
                axpy(&mut inner[*q], c, &wz[*p]);
            }
            for yi in 0..d1 {
                let yx = f.m1.mul_basis(yi, xi);
                let mut lhs: Vec<F> = zeros(d1);
                for (zi, c) in yx.iter().enumerate() {
                    if !c.is_zero() {
                        axpy(&mut lhs, c, &z[zi][k]);
                    }
                }
                let mut rhs: Vec<F> = zeros(d1);
                for (q, v) in inner.iter().enumerate() {
                    if !crate::exactla::is_zero(v) {
                        rhs = add(&rhs, &f.m1.mul(&z[yi][q], v));
                    }
                }
                mismatch(|| format!("x = m{xi}, y = m{yi}, b{k}"), &lhs, &scale(&f.lambda_inv, &rhs))?;
            }
        }
    }
    Ok(())
}

/// `E_{M₁}(bxye₂) = λ⁻¹ E_{M₁}(b₁xe₂) E_{M₁}(b₂ye₂)` for `x, y ∈ M₁`, in
/// `M₁` coordinates.
fn check_measuring<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let f = cx.f;
    let (n, d1) = (cx.n, f.m1.dim());
    // q[k][x] = E_{M₁}(b_k x e₂)
    let xe2: Vec<Vec<F>> = (0..d1).map(|xi| f.mul(&f.up_m1(&unit(d1, xi)), &f.e2)).collect();
    let q: Vec<Vec<Vec<F>>> = (0..n).map(|k| xe2.iter().map(|v| cx.m1(&f.mul(cx.b(k), v))).collect()).collect();
    for k in 0..n {
        let lk = cx.legs(k);
        for xi in 0..d1 {
            let mut left: Vec<Vec<F>> = vec![zeros(d1); n];
            for (p, qq, c) in &lk {
                axpy(&mut left[*qq], c, &q[*p][xi]);
            }
            for yi in 0..d1 {
                let xy = f.m1.mul_basis(xi, yi);
                let mut lhs: Vec<F> = zeros(d1);
                for (zi, c) in xy.iter().enumerate() {
                    if !c.is_zero() {
                        axpy(&mut lhs, c, &q[k][zi]);
                    }
                }
                let mut rhs: Vec<F> = zeros(d1);
                for (qq, v) in left.iter().enumerate() {
                    if !crate::exactla::is_zero(v) {
                        rhs = add(&rhs, &f.m1.mul(v, &q[qq][yi]));
                    }
                }
                mismatch(|| format!("x = m{xi}, y = m{yi}, b{k}"), &lhs, &scale(&f.lambda_inv, &rhs))?;
            }
        }
    }
    Ok(())
}

/// `S(b₁)b₂ = 1₁ε(b1₂)` and `b₁S(b₂) = ε(1₁b)1₂`.
fn check_counital_formulas<F: Field>(cx: &Ctx<'_, F>) -> Result<(), String> {
    let (h, n) = (cx.h, cx.n);
    let ul = cx.unit_legs();
    (0..n).try_for_each(|k| {
        let ek = unit(n, k);
        let mut src: Vec<F> = zeros(n);
        let mut tgt: Vec<F> = zeros(n);
        for (p, q, c) in &ul {
            src[*p].add_mul(c, &h.counit(&h.alg.mul_basis(k, *q)));
            tgt[*q].add_mul(c, &h.counit(&h.alg.mul_basis(*p, k)));
        }
        mismatch(|| format!("S(b₁)b₂ for b{k}"), &h.s_star_id(&ek), &src)?;
        mismatch(|| format!("b₁S(b₂) for b{k}"), &h.id_star_s(&ek), &tgt)
    })
}
