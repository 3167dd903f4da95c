//! Composite idempotents, the word shift and the depth-two examples,
//! checked by direct computation in the tower.

use weakhopf::algebra::{Algebra, AlgebraError};
use weakhopf::appendix::{
    composite_idempotent, composite_suite, depth2_example, kanzaki_trace, shift_tau2, AppendixError, Depth2Kind, JonesWords,
};
use weakhopf::exactla::{dot, scale, unit};
use weakhopf::markov::{build_tower, Tower};
use weakhopf::{corpus, Field, Fp, F2, Q};

fn tower(name: &str, depth: usize) -> Tower<Q> {
    build_tower(corpus::certify(corpus::standard(name).unwrap()).unwrap(), depth).unwrap()
}

fn pow(x: &Q, k: usize) -> Q {
    (0..k).fold(Q::from_i64(1), |acc, _| acc * x)
}

#[test]
fn first_composite_idempotent_by_hand() {
    // Index 4 would need the 256-dimensional M3.
    for name in ["q-in-q2", "q2-in-m2"] {
        let t = tower(name, 3);
        let m3 = t.m(3);
        let e = |i| t.jones_in(i, 3);
        let word = m3.mul_all(&[&e(2), &e(1), &e(3), &e(2)]);
        let f1 = scale(&t.lambda_inv(), &word);
        let data = composite_idempotent(&t, 1).unwrap();
        assert_eq!(data.idempotent, f1, "{name}");
        assert_eq!(m3.mul(&f1, &f1), f1, "{name}");
        assert!(data.report.all_passed(), "{name}: {:?}", data.report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn composite_idempotent_has_markov_trace() {
    let (t, data) = composite_suite(corpus::certify(corpus::standard::<Q>("q-in-q2").unwrap()).unwrap(), 2, 64).unwrap();
    assert_eq!(data.len(), 3);
    for d in &data {
        let level = 2 * d.n + 1;
        assert_eq!(dot(&t.trace(level), &d.idempotent), pow(&t.lambda(), d.n + 1), "f{}", d.n);
    }
}

/// `f_n` commutes with `N`, and `F_n` preserves the trace against `N`.
#[test]
fn composite_idempotent_commutes_with_base_and_expectation_preserves_trace() {
    let t = tower("q2-in-m2", 3);
    let dn = t.n().dim();
    for n in 0..=1 {
        let d = composite_idempotent(&t, n).unwrap();
        let top = t.m(2 * n + 1);
        for i in 0..dn {
            let y = t.lift_n(&unit(dn, i), 2 * n + 1);
            assert_eq!(top.mul(&y, &d.idempotent), top.mul(&d.idempotent, &y));
        }
        let mn = t.m(n);
        let tr = t.trace(n);
        for x in 0..mn.dim() {
            for i in 0..dn {
                let y = t.lift_n(&unit(dn, i), n);
                let fx = t.lift_n(&d.to_n.col(x), n);
                assert_eq!(dot(&tr, &mn.mul(&fx, &y)), dot(&tr, &mn.mul(&unit(mn.dim(), x), &y)));
            }
        }
    }
}

#[test]
fn jones_word_dimensions() {
    // Index 4: Catalan numbers. Index 2: powers of two.
    let t = tower("q-in-m2", 2);
    assert_eq!(JonesWords::new(&t, 1).unwrap().dim(), 2);
    assert_eq!(JonesWords::new(&t, 2).unwrap().dim(), 5);
    let t = tower("q-in-q2", 3);
    let dims: Vec<usize> = (1..=3).map(|n| JonesWords::new(&t, n).unwrap().dim()).collect();
    assert_eq!(dims, [2, 4, 8]);
}

#[test]
fn shift_moves_jones_projections_up_two() {
    let t = tower("q-in-q2", 3);
    let s = shift_tau2(&t, t.jones(1), 1).unwrap();
    assert_eq!(s.image, t.jones_in(3, 3));
    assert!(s.report.all_passed());
    let s = shift_tau2(&t, &t.m(1).one(), 1).unwrap();
    assert_eq!(s.image, t.m(3).one());
}

#[test]
fn shift_rejects_elements_outside_the_word_algebra() {
    let t = tower("q-in-q2", 3);
    let words = JonesWords::new(&t, 1).unwrap();
    let d = t.m(1).dim();
    let x = (0..d).map(|i| unit(d, i)).find(|x| words.coords(x).is_err()).expect("M1 is bigger than ⟨1, e1⟩");
    assert_eq!(shift_tau2(&t, &x, 1).unwrap_err(), AppendixError::NotInTLSubalgebra { n: 1 });
}

#[test]
fn kanzaki_trace_of_matrix_algebra_is_regular_trace() {
    for n in 2..=3 {
        let m = Algebra::<Q>::matrix(n);
        assert_eq!(kanzaki_trace(&m).unwrap(), m.regular_trace());
        let m = Algebra::<Fp<5>>::matrix(n);
        assert_eq!(kanzaki_trace(&m).unwrap(), m.regular_trace());
    }
}

#[test]
fn matrix_over_field_is_depth_two() {
    let ex = depth2_example::<Q>(Depth2Kind::MatrixOverField(2), 64).unwrap();
    assert!(ex.report.all_passed(), "{:?}", ex.report.failures().collect::<Vec<_>>());
    assert_eq!(ex.tower.lambda_inv(), Q::from_i64(4));
    // E(1) = 1 and E is tracial on U.
    let e = &ex.cert.ext.cond;
    assert_eq!(e.apply(&e.big().one()), e.small().one());
    let u = e.big();
    for a in 0..u.dim() {
        for b in 0..u.dim() {
            let (x, y) = (unit(u.dim(), a), unit(u.dim(), b));
            assert_eq!(e.apply(&u.mul(&x, &y)), e.apply(&u.mul(&y, &x)));
        }
    }
}

#[test]
fn matrix_over_f2_is_rejected() {
    match depth2_example::<F2>(Depth2Kind::MatrixOverField(2), 64) {
        Err(AppendixError::Algebra(AlgebraError::NotKanzaki(_))) => {}
        other => panic!("expected NotKanzaki, got {:?}", other.map(|e| e.report)),
    }
}

#[test]
fn noncentral_u_is_rejected() {
    let kind = Depth2Kind::Tensor { n: Algebra::<Q>::ground(), n_trace: vec![Q::from_i64(1)], u: Algebra::diagonal(2) };
    assert!(matches!(depth2_example(kind, 64), Err(AppendixError::Precondition(_))));
}

#[test]
fn tensor_with_matrix_algebra_is_depth_two() {
    let kind = Depth2Kind::Tensor { n: Algebra::<Q>::diagonal(2), n_trace: vec![weakhopf::field::q(1, 2), weakhopf::field::q(1, 2)], u: Algebra::matrix(2) };
    let ex = depth2_example(kind, 200).unwrap();
    assert!(ex.report.all_passed(), "{:?}", ex.report.failures().collect::<Vec<_>>());
    assert_eq!(ex.tower.dims(), [2, 8, 32, 128]);
}
