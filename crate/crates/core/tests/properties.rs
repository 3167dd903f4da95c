use std::sync::OnceLock;

use proptest::prelude::*;
use weakhopf::algebra::Algebra;
use weakhopf::appendix::{depth2_example, shift_tau2, Depth2Kind, JonesWords};
use weakhopf::exactla::{dot, is_zero, kron_vec, Mat, Quotient, Subspace};
use weakhopf::groupoid::{groupoid_algebra, groupoid_dual, Groupoid};
use weakhopf::markov::{action_b_on_m1, build_tower, derive_all, DerivedAction, Pipeline, Tower};
use weakhopf::whopf::{counital, WeakHopf};
use weakhopf::{corpus, Field, Fp, Q};

type F7 = Fp<7>;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 32)
}

/// The first `d` entries of `c`, as rationals.
fn elem(c: &[i64], d: usize) -> Vec<Q> {
    (0..d).map(|i| Q::from_i64(c[i % c.len()])).collect()
}

fn mat(c: &[i64], rows: usize, cols: usize) -> Mat<Q> {
    Mat::from_rows((0..rows).map(|i| elem(&c[i * cols..], cols)).collect(), cols).unwrap()
}

fn q2_in_m2() -> &'static Tower<Q> {
    static T: OnceLock<Tower<Q>> = OnceLock::new();
    T.get_or_init(|| build_tower(corpus::certify(corpus::standard("q2-in-m2").unwrap()).unwrap(), 3).unwrap())
}

fn q_in_q2() -> &'static Tower<Q> {
    static T: OnceLock<Tower<Q>> = OnceLock::new();
    T.get_or_init(|| build_tower(corpus::certify(corpus::standard("q-in-q2").unwrap()).unwrap(), 4).unwrap())
}

fn derived() -> &'static (Pipeline<Q>, DerivedAction<Q>) {
    static P: OnceLock<(Pipeline<Q>, DerivedAction<Q>)> = OnceLock::new();
    P.get_or_init(|| {
        let p = derive_all(q2_in_m2()).unwrap();
        let b = action_b_on_m1(&p).unwrap();
        (p, b)
    })
}

fn weak_hopf_corpus() -> &'static Vec<WeakHopf<Q>> {
    static H: OnceLock<Vec<WeakHopf<Q>>> = OnceLock::new();
    H.get_or_init(|| {
        Groupoid::corpus()
            .iter()
            .flat_map(|(_, g)| [groupoid_algebra(g).unwrap(), groupoid_dual(g).unwrap()])
            .collect()
    })
}

/// `E_down(k)(x)` viewed in `M_to`; level `k - 1` is `N` when `k = 0`.
fn expect_up(t: &Tower<Q>, k: usize, x: &[Q], to: usize) -> Vec<Q> {
    let y = t.e_down(k).apply(x);
    if k == 0 {
        t.lift_n(&y, to)
    } else {
        t.lift(&y, k - 1, to)
    }
}

fn lower_dim(t: &Tower<Q>, k: usize) -> usize {
    if k == 0 {
        t.n().dim()
    } else {
        t.m(k - 1).dim()
    }
}

fn lower_up(t: &Tower<Q>, k: usize, y: &[Q]) -> Vec<Q> {
    if k == 0 {
        t.lift_n(y, 0)
    } else {
        t.lift(y, k - 1, k)
    }
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn rank_nullity_and_kernel(c in coeffs(), rows in 1usize..5, cols in 1usize..6) {
        let m = mat(&c, rows, cols);
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.dim(), cols);
        prop_assert_eq!(m.image().dim(), m.rank());
        for v in k.basis() {
            prop_assert!(is_zero(&m.mul_vec(v)));
        }
    }

    #[test]
    fn solve_reproduces_right_hand_side(c in coeffs(), x in coeffs(), rows in 1usize..5, cols in 1usize..6) {
        let m = mat(&c, rows, cols);
        let b = m.mul_vec(&elem(&x, cols));
        let y = m.solve(&b).unwrap();
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn inverse_is_two_sided(c in coeffs(), n in 1usize..5) {
        let m = mat(&c, n, n);
        match m.inverse() {
            Ok(inv) => {
                prop_assert_eq!(m.mul(&inv), Mat::identity(n));
                prop_assert_eq!(inv.mul(&m), Mat::identity(n));
            }
            Err(_) => prop_assert!(m.rank() < n),
        }
    }

    #[test]
    fn subspace_dimension_formula(a in coeffs(), b in coeffs(), k in 0usize..4, l in 0usize..4) {
        let d = 5;
        let u = Subspace::span(d, (0..k).map(|i| elem(&a[i * d..], d)).collect());
        let v = Subspace::span(d, (0..l).map(|i| elem(&b[i * d..], d)).collect());
        let (s, i) = (u.sum(&v), u.intersection(&v));
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
        prop_assert!(u.contains_subspace(&i) && v.contains_subspace(&i));
        prop_assert!(s.contains_subspace(&u) && s.contains_subspace(&v));
    }

    #[test]
    fn quotient_section_is_right_inverse(a in coeffs(), k in 0usize..4, x in coeffs()) {
        let d = 5;
        let rel = Subspace::span(d, (0..k).map(|i| elem(&a[i * d..], d)).collect());
        let q = Quotient::from_relations(d, &rel);
        prop_assert_eq!(q.dim(), d - rel.dim());
        prop_assert_eq!(q.project_matrix().rank(), d - rel.dim());
        let c = elem(&x, q.dim());
        prop_assert_eq!(q.project(&q.section(&c)), c);
        for r in rel.basis() {
            prop_assert!(is_zero(&q.project(r)));
        }
    }

    #[test]
    fn prime_field_laws(a in 0i64..7, b in 0i64..7, c in 0i64..7) {
        let (a, b, c) = (F7::from_i64(a), F7::from_i64(b), F7::from_i64(c));
        prop_assert_eq!(a.mul_ref(&(b + c)), a.mul_ref(&b) + a.mul_ref(&c));
        prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        match a.inv() {
            Some(i) => prop_assert_eq!(a.mul_ref(&i), F7::from_i64(1)),
            None => prop_assert_eq!(a, F7::from_i64(0)),
        }
        prop_assert_eq!(F7::from_i64(7), F7::from_i64(0));
        prop_assert_eq!(F7::from_i64(-1), F7::from_i64(6));
    }

    #[test]
    fn rationals_round_trip_through_text(p in -1000i64..1000, q in 1i64..1000) {
        let x = weakhopf::field::q(p, q);
        prop_assert_eq!(Q::parse_exact(&x.to_string()), Some(x));
    }

    #[test]
    fn algebras_are_associative(x in coeffs(), y in coeffs(), z in coeffs()) {
        for a in [Algebra::<Q>::matrix(2).tensor(&Algebra::diagonal(2)), q2_in_m2().m(2).clone()] {
            let d = a.dim();
            let (x, y, z) = (elem(&x, d), elem(&y, d), elem(&z, d));
            prop_assert_eq!(a.mul(&a.mul(&x, &y), &z), a.mul(&x, &a.mul(&y, &z)));
            prop_assert_eq!(a.mul(&a.one(), &x), x.clone());
            prop_assert_eq!(a.mul(&x, &a.one()), x);
        }
    }

    #[test]
    fn kanzaki_element_is_central_and_splits(x in coeffs(), n in 1usize..4) {
        let a = Algebra::<Q>::matrix(n);
        let d = a.dim();
        let f = a.kanzaki_element().unwrap().f;
        let aa = a.tensor(&a);
        let x = elem(&x, d);
        prop_assert_eq!(aa.mul(&kron_vec(&x, &a.one()), &f), aa.mul(&f, &kron_vec(&a.one(), &x)));
        let mut mu = vec![Q::from_i64(0); d];
        for i in 0..d {
            for j in 0..d {
                for (k, v) in a.mul_basis(i, j).iter().enumerate() {
                    mu[k].add_mul(&f[i * d + j], v);
                }
            }
        }
        prop_assert_eq!(mu, a.one());
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn coproduct_multiplicative_and_antipode_antimultiplicative(x in coeffs(), y in coeffs(), which in 0usize..12) {
        let h = &weak_hopf_corpus()[which];
        let d = h.dim();
        let (x, y) = (elem(&x, d), elem(&y, d));
        let xy = h.alg.mul(&x, &y);
        prop_assert_eq!(h.coproduct(&xy), h.mul2(&h.coproduct(&x), &h.coproduct(&y)));
        prop_assert_eq!(h.s(&xy), h.alg.mul(&h.s(&y), &h.s(&x)));
    }

    #[test]
    fn counital_maps_are_idempotent_into_their_images(x in coeffs(), which in 0usize..12) {
        let h = &weak_hopf_corpus()[which];
        let c = counital(h).unwrap();
        let x = elem(&x, h.dim());
        let (t, s) = (h.eps_t(&x), h.eps_s(&x));
        prop_assert!(c.ht.contains(&t) && c.hs.contains(&s));
        prop_assert_eq!(h.eps_t(&t), t);
        prop_assert_eq!(h.eps_s(&s), s);
    }

    #[test]
    fn jones_projections_compress(x in coeffs(), k in 0usize..3) {
        let t = q2_in_m2();
        let up = k + 1;
        let x = elem(&x, t.m(k).dim());
        let e = t.jones(up);
        let big = t.m(up);
        let xe = t.lift(&x, k, up);
        prop_assert_eq!(big.mul_all(&[e, &xe, e]), big.mul(&expect_up(t, k, &x, up), e));
    }

    #[test]
    fn expectations_are_bimodular(x in coeffs(), a in coeffs(), b in coeffs(), k in 0usize..4) {
        let t = q2_in_m2();
        let m = t.m(k);
        let dl = lower_dim(t, k);
        let (a, b) = (elem(&a, dl), elem(&b, dl));
        let x = elem(&x, m.dim());
        let (au, bu) = (lower_up(t, k, &a), lower_up(t, k, &b));
        let lhs = t.e_down(k).apply(&m.mul_all(&[&au, &x, &bu]));
        let small = t.e_down(k).small();
        prop_assert_eq!(lhs, small.mul_all(&[&a, &t.e_down(k).apply(&x), &b]));
    }

    #[test]
    fn tower_traces_are_markov(x in coeffs(), y in coeffs(), k in 0usize..3) {
        let t = q2_in_m2();
        let m = t.m(k);
        let (x, y) = (elem(&x, m.dim()), elem(&y, m.dim()));
        let tr = t.trace(k);
        prop_assert_eq!(dot(&tr, &m.mul(&x, &y)), dot(&tr, &m.mul(&y, &x)));
        let up = k + 1;
        let xu = t.lift(&x, k, up);
        prop_assert_eq!(dot(&t.trace(up), &xu), dot(&tr, &x));
        let xe = t.m(up).mul(&xu, t.jones(up));
        prop_assert_eq!(dot(&t.trace(up), &xe), t.lambda() * dot(&tr, &x));
    }

    #[test]
    fn derived_action_measures(h in coeffs(), x in coeffs(), y in coeffs()) {
        let (_, act) = derived();
        let m = &act.module;
        let (dh, da) = (m.h.dim(), m.a.dim());
        let (h, x, y) = (elem(&h, dh), elem(&x, da), elem(&y, da));
        let lhs = m.act(&h, &m.a.mul(&x, &y));
        let delta = m.h.coproduct(&h);
        let mut rhs = vec![Q::from_i64(0); da];
        for i in 0..dh {
            for j in 0..dh {
                let c = &delta[i * dh + j];
                if *c == Q::from_i64(0) {
                    continue;
                }
                let hi = m.a.mul(&m.act(&weakhopf::exactla::unit(dh, i), &x), &m.act(&weakhopf::exactla::unit(dh, j), &y));
                weakhopf::exactla::axpy(&mut rhs, c, &hi);
            }
        }
        prop_assert_eq!(lhs, rhs);
        // h · 1 = ε_t(h) · 1
        let one = m.a.one();
        prop_assert_eq!(m.act(&h, &one), m.act(&m.h.eps_t(&h), &one));
    }

    #[test]
    fn shift_is_multiplicative(a in coeffs(), b in coeffs()) {
        let t = q_in_q2();
        let words = JonesWords::new(t, 2).unwrap();
        let x = words.values.mul_vec(&elem(&a, words.dim()));
        let y = words.values.mul_vec(&elem(&b, words.dim()));
        let sx = shift_tau2(t, &x, 2).unwrap().image;
        let sy = shift_tau2(t, &y, 2).unwrap().image;
        let sxy = shift_tau2(t, &t.m(2).mul(&x, &y), 2).unwrap().image;
        prop_assert_eq!(sxy, t.m(4).mul(&sx, &sy));
    }
}

proptest! {
    #![proptest_config(cfg(6))]

    #[test]
    fn generated_depth_two_examples_pass(w in prop::collection::vec(1i64..5, 1..4), k in 1usize..3) {
        // N = k^m with a random faithful trace, U = M_k.
        let total: i64 = w.iter().sum();
        let trace: Vec<Q> = w.iter().map(|&x| weakhopf::field::q(x, total)).collect();
        let kind = if w.len() == 1 {
            Depth2Kind::MatrixOverField(k)
        } else if k == 1 {
            Depth2Kind::Tensor { n: Algebra::diagonal(w.len()), n_trace: trace, u: Algebra::matrix(1) }
        } else {
            Depth2Kind::Tensor { n: Algebra::ground(), n_trace: vec![Q::from_i64(1)], u: Algebra::matrix(k) }
        };
        let ex = depth2_example::<Q>(kind, 64).unwrap();
        prop_assert!(ex.report.all_passed(), "{:?}", ex.report.failures().collect::<Vec<_>>());
    }
}
