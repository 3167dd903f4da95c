//! The derived weak Hopf algebras acting on the tower: `B` on `M₁` by
//! `b ▷ x = λ⁻¹ E_{M₁}(b x e₂)`, `A` on `M` by `a ▷ m = a₁ m S(a₂)`, and the
//! isomorphisms `M₁ # B ≅ M₂`, `M # A ≅ M₁` given by multiplication.

use crate::action::{action_comodule_bridge, invariants, smash_dual_action, smash_on_ideal, smash_relations, verify_module_algebra, ModuleAlgebra, Smash, SMASH};
use crate::algebra::Algebra;
use crate::exactla::{axpy, kron_vec, unit, zeros, Mat, Subspace};
use crate::field::Field;
use crate::report::{Check, Report};

use super::{mismatch, same_space, MarkovError, Pipeline, ACTION};

#[derive(Clone, Debug)]
pub struct DerivedAction<F> {
    pub module: ModuleAlgebra<F>,
    pub report: Report,
}

/// An algebra isomorphism out of a smash product; `map` sends smash
/// coordinates to target coordinates.
#[derive(Clone, Debug)]
pub struct AlgebraIso<F> {
    pub smash: Smash<F>,
    pub map: Mat<F>,
    pub report: Report,
}

fn fails_first(r: &Report) -> Result<(), String> {
    match r.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{} fails", c.name)),
    }
}

/// `M` as a subspace of `M₁`, in `M₁` coordinates.
fn m_in_m1<F: Field>(p: &Pipeline<F>) -> Subspace<F> {
    let f = &p.frame;
    let cols: Vec<Vec<F>> = (0..f.m.dim()).map(|j| f.down_m1(&f.lift_m.col(j))).collect();
    Subspace::span(f.m1.dim(), cols)
}

/// Nonzero terms `(p, q, c)` of column `k` of a coproduct matrix.
fn legs<F: Field>(delta: &Mat<F>, n: usize, k: usize) -> Vec<(usize, usize, F)> {
    (0..n * n)
        .filter(|&i| !delta.get(i, k).is_zero())
        .map(|i| (i / n, i % n, delta.get(i, k).clone()))
        .collect()
}

pub fn action_b_on_m1<F: Field>(p: &Pipeline<F>) -> Result<DerivedAction<F>, MarkovError> {
    let f = &p.frame;
    let lat = &p.lattice;
    let h = &p.derived.b_whopf;
    let (n, d1) = (h.dim(), f.m1.dim());
    let bb = lat.b.basis();
    let xe2: Vec<Vec<F>> = (0..d1).map(|j| f.mul(&f.up_m1(&unit(d1, j)), &f.e2)).collect();
    let module = ModuleAlgebra::from_fn(h.clone(), f.m1.clone(), |k, j| {
        let v = f.down_m1(&f.mul(&bb[k], &xe2[j]));
        v.iter().map(|c| c.mul_ref(&f.lambda_inv)).collect()
    })?;

    let mut r = Report::new("B acting on M1");
    let ma = verify_module_algebra(&module);
    r.push(Check::from_result("B-module-algebra", ACTION, fails_first(&ma)));
    r.extend(ma);

    let sb: Vec<Vec<F>> = (0..n).map(|k| lat.b.element(&h.antipode.col(k))).collect();
    r.push(Check::from_result(
        "B-action-by-conjugation",
        ACTION,
        (0..n).try_for_each(|k| {
            let lk = legs(&h.delta, n, k);
            (0..d1).try_for_each(|j| {
                let x = f.up_m1(&unit(d1, j));
                let mut rhs: Vec<F> = zeros(f.dim());
                for (a, b, c) in &lk {
                    axpy(&mut rhs, c, &f.mul_all(&[&bb[*a], &x, &sb[*b]]));
                }
                mismatch(|| format!("b{k} ▷ m{j} = b₁xS(b₂)"), &f.up_m1(&module.ops[k].col(j)), &rhs)
            })
        }),
    ));

    let a_h = &p.derived.a_whopf;
    let a_m1: Vec<Vec<F>> = lat.a.basis().iter().map(|a| f.down_m1(a)).collect();
    let ms: Vec<Vec<F>> = m_in_m1(p).basis().to_vec();
    r.push(Check::from_result(
        "B-action-on-M-times-A",
        ACTION,
        (0..n).try_for_each(|i| {
            let la = legs(&a_h.delta, n, i);
            ms.iter().enumerate().try_for_each(|(mi, m)| {
                let prod = f.m1.mul(m, &a_m1[i]);
                (0..n).try_for_each(|k| {
                    let mut rhs: Vec<F> = zeros(d1);
                    for (a, q, c) in &la {
                        let s = c.mul_ref(p.pairing.gram.get(*q, k));
                        if !s.is_zero() {
                            axpy(&mut rhs, &s, &f.m1.mul(m, &a_m1[*a]));
                        }
                    }
                    mismatch(|| format!("b{k} ▷ (m{mi} a{i})"), &module.ops[k].mul_vec(&prod), &rhs)
                })
            })
        }),
    ));

    r.push(Check::from_result(
        "B-invariants-are-M",
        ACTION,
        invariants(&module).map_err(|e| e.to_string()).and_then(|inv| same_space("invariants vs M", &inv, &m_in_m1(p))),
    ));

    let (como, bridge) = action_comodule_bridge(&module)?;
    r.push(Check::from_result("B-bridge-comodule", ACTION, fails_first(&bridge)));
    r.extend(bridge);
    r.push(Check::from_result(
        "coaction-restricts-to-A-coproduct",
        ACTION,
        (0..n).try_for_each(|i| {
            let mut expect: Vec<F> = zeros(d1 * n);
            for (a, q, c) in legs(&a_h.delta, n, i) {
                axpy(&mut expect, &c, &kron_vec(&a_m1[a], p.pairing.gram.row(q)));
            }
            mismatch(|| format!("ρ(a{i})"), &como.rho(&a_m1[i]), &expect)
        }),
    ));
    Ok(DerivedAction { module, report: r })
}

/// `a ▷ m = a₁ m S(a₂)` on `M`, with the `A` coproduct and antipode from
/// the derived structure.
pub fn action_a_on_m<F: Field>(p: &Pipeline<F>) -> Result<DerivedAction<F>, MarkovError> {
    let f = &p.frame;
    let lat = &p.lattice;
    let h = &p.derived.a_whopf;
    let (n, dm) = (h.dim(), f.m.dim());
    let ab = lat.a.basis();
    let sa: Vec<Vec<F>> = (0..n).map(|k| lat.a.element(&h.antipode.col(k))).collect();
    let image_m = f.image_m();
    let mut outside = None;
    let mut raw = Vec::with_capacity(n);
    for k in 0..n {
        let lk = legs(&h.delta, n, k);
        let mut cols = Vec::with_capacity(dm);
        for j in 0..dm {
            let m = f.up_m(&unit(dm, j));
            let mut v: Vec<F> = zeros(f.dim());
            for (a, b, c) in &lk {
                axpy(&mut v, c, &f.mul_all(&[&ab[*a], &m, &sa[*b]]));
            }
            if outside.is_none() && !image_m.contains(&v) {
                outside = Some(format!("a{k} ▷ m{j}"));
            }
            cols.push(f.down_m(&v));
        }
        raw.push(Mat::from_cols(&cols, dm));
    }
    let mut r = Report::new("A acting on M");
    r.push(Check::from_result("A-action-lands-in-M", ACTION, outside.map_or(Ok(()), Err)));
    let module = ModuleAlgebra::new(h.clone(), f.m.clone(), raw)?;
    let ma = verify_module_algebra(&module);
    r.push(Check::from_result("A-module-algebra", ACTION, fails_first(&ma)));
    r.extend(ma);

    r.push(Check::from_result(
        "target-counit-sandwich",
        ACTION,
        (0..n).try_for_each(|k| {
            let lk = legs(&h.delta, n, k);
            (0..n).try_for_each(|j| {
                let et = h.eps_t(&unit(n, j));
                let mut lhs: Vec<F> = zeros(n);
                for (a, b, c) in &lk {
                    axpy(&mut lhs, c, &h.alg.mul_all(&[&unit(n, *a), &et, &h.antipode.col(*b)]));
                }
                mismatch(|| format!("a{k}₁ ε_t(a{j}) S(a{k}₂)"), &lhs, &h.eps_t(&h.alg.mul_basis(k, j)))
            })
        }),
    ));
    let n_in_m = Subspace::span(dm, (0..f.n.dim()).map(|j| f.down_m(&f.lift_n.col(j))).collect());
    r.push(Check::from_result(
        "A-invariants-are-N",
        ACTION,
        invariants(&module).map_err(|e| e.to_string()).and_then(|inv| same_space("invariants vs N", &inv, &n_in_m)),
    ));
    Ok(DerivedAction { module, report: r })
}

/// Smash product `X # H` together with the multiplication map into
/// `target`, where `image(x, h)` is the image of `e_x ⊗ e_h`.
///
/// The map is multiplicative on all of `X ⊗ H` iff `h y = (h₁ ▷ y) h₂` in
/// the target; its kernel is then an ideal, and when it equals the
/// balancing relations the smash product is well defined on the quotient.
fn smash_iso<F: Field>(
    module: &ModuleAlgebra<F>,
    target: &Algebra<F>,
    image: impl Fn(usize, usize) -> Vec<F>,
    name: &str,
) -> Result<AlgebraIso<F>, MarkovError> {
    let (dx, dh) = (module.a.dim(), module.h.dim());
    let dt = target.dim();
    let mut cols = Vec::with_capacity(dx * dh);
    for x in 0..dx {
        for h in 0..dh {
            cols.push(image(x, h));
        }
    }
    let full = Mat::from_cols(&cols, dt);
    let img = |v: &[F]| full.mul_vec(v);
    let mut r = Report::new(format!("{name} smash isomorphism"));

    let x1 = |x: usize| img(&kron_vec(&unit(dx, x), &module.h.one()));
    let h1 = |h: usize| img(&kron_vec(&module.a.one(), &unit(dh, h)));
    r.push(Check::from_result(
        format!("{name}-commutation"),
        ACTION,
        (0..dh).try_for_each(|k| {
            let lk = legs(&module.h.delta, dh, k);
            let hk = h1(k);
            (0..dx).try_for_each(|y| {
                let mut rhs: Vec<F> = zeros(dt);
                for (a, b, c) in &lk {
                    axpy(&mut rhs, c, &img(&kron_vec(&module.ops[*a].col(y), &unit(dh, *b))));
                }
                mismatch(|| format!("h{k} y{y} = (h₁ ▷ y) h₂"), &target.mul(&hk, &x1(y)), &rhs)
            })
        }),
    ));
    let rels = smash_relations(module);
    let kernel = full.kernel();
    r.push(Check::from_result(format!("{name}-kernel-is-balancing"), ACTION, same_space("kernel vs relations", &kernel, &rels)));
    let mut sr = Report::new("smash product");
    sr.push(Check::from_result(
        "well-defined",
        SMASH,
        if r.all_passed() { Ok(()) } else { Err("relations are not shown to be the kernel of a multiplicative map".into()) },
    ));
    if !r.all_passed() {
        return Err(MarkovError::Failed { stage: format!("{name} smash"), witness: r.failures().next().map(|c| c.to_string()).unwrap_or_default() });
    }
    let smash = smash_on_ideal(module, &rels, sr)?;
    let reps = smash.quotient.reps().to_vec();
    let map = Mat::from_cols(&reps.iter().map(|&i| full.col(i)).collect::<Vec<_>>(), dt);
    r.push(Check::from_result(
        format!("{name}-bijective"),
        ACTION,
        if map.rows() == map.cols() && map.rank() == dt { Ok(()) } else { Err(format!("{}x{} of rank {}", map.rows(), map.cols(), map.rank())) },
    ));
    r.push(Check::from_result(format!("{name}-unital"), ACTION, mismatch(|| "image of 1".into(), &map.mul_vec(smash.alg.unit_ref()), &target.one())));
    r.push(Check::from_result(
        format!("{name}-multiplicative"),
        ACTION,
        (0..reps.len()).try_for_each(|i| {
            let mi = map.col(i);
            (0..reps.len()).try_for_each(|j| mismatch(|| format!("classes {i}, {j}"), &map.mul_vec(&smash.alg.mul_basis(i, j)), &target.mul(&mi, &map.col(j))))
        }),
    ));
    r.extend(smash.report.clone());
    Ok(AlgebraIso { smash, map, report: r })
}

/// `M₁ # B → M₂`, `x # b ↦ xb`, with inverse `x ↦ E_{M₁}(x u_j) # v_j`.
pub fn psi_iso<F: Field>(p: &Pipeline<F>, b_on_m1: &DerivedAction<F>) -> Result<AlgebraIso<F>, MarkovError> {
    let f = &p.frame;
    let lat = &p.lattice;
    let bb = lat.b.basis();
    let d1 = f.m1.dim();
    let mut iso = smash_iso(&b_on_m1.module, &f.m2, |x, h| f.mul(&f.up_m1(&unit(d1, x)), &bb[h]), "psi")?;
    let vs: Vec<Vec<F>> = p.d2.vs.iter().map(|v| lat.b.coords(v).expect("dual basis in B")).collect();
    let res = (0..f.dim()).try_for_each(|xi| {
        let x = unit(f.dim(), xi);
        let mut cls: Vec<F> = zeros(iso.smash.alg.dim());
        for (u, v) in p.d2.us.iter().zip(&vs) {
            axpy(&mut cls, &F::one(), &iso.smash.class(&f.down_m1(&f.mul(&x, u)), v));
        }
        mismatch(|| format!("ψ(ψ⁻¹(e{xi}))"), &iso.map.mul_vec(&cls), &x)
    });
    iso.report.push(Check::from_result("psi-inverse-formula", ACTION, res));
    Ok(iso)
}

/// `M # A → M₁`, `m # a ↦ ma`, with inverse `x ↦ E_M(x z_j) # w_j`, and the
/// dual action of `A*` on `M # A` matched with the `B`-action on `M₁`.
pub fn phi_iso<F: Field>(p: &Pipeline<F>, a_on_m: &DerivedAction<F>, b_on_m1: &DerivedAction<F>) -> Result<AlgebraIso<F>, MarkovError> {
    let f = &p.frame;
    let lat = &p.lattice;
    let dm = f.m.dim();
    let a_m1: Vec<Vec<F>> = lat.a.basis().iter().map(|a| f.down_m1(a)).collect();
    let m_m1: Vec<Vec<F>> = (0..dm).map(|j| f.down_m1(&f.lift_m.col(j))).collect();
    let mut iso = smash_iso(&a_on_m.module, &f.m1, |m, a| f.m1.mul(&m_m1[m], &a_m1[a]), "phi")?;
    let e_m = &f.e_m;
    let ws: Vec<Vec<F>> = p.d2.ws.iter().map(|w| lat.a.coords(&f.up_m1(w)).expect("dual basis in A")).collect();
    let d1 = f.m1.dim();
    let res = (0..d1).try_for_each(|xi| {
        let x = unit(d1, xi);
        let mut cls: Vec<F> = zeros(iso.smash.alg.dim());
        for (z, w) in p.d2.zs.iter().zip(&ws) {
            axpy(&mut cls, &F::one(), &iso.smash.class(&e_m.mul_vec(&f.m1.mul(&x, z)), w));
        }
        mismatch(|| format!("φ(φ⁻¹(e{xi}))"), &iso.map.mul_vec(&cls), &x)
    });
    iso.report.push(Check::from_result("phi-inverse-formula", ACTION, res));

    let dual_act = smash_dual_action(&iso.smash)?;
    let inv = iso.map.inverse()?;
    let g = &p.pairing.gram;
    let res = (0..g.cols()).try_for_each(|k| {
        let op = iso.map.mul(&dual_act.op(&g.col(k))).mul(&inv);
        if op == b_on_m1.module.ops[k] {
            Ok(())
        } else {
            Err(format!("b{k} acts differently on M₁ and on M # A"))
        }
    });
    iso.report.push(Check::from_result("dual-action-matches-B-action", ACTION, res));
    Ok(iso)
}
