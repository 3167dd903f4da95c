//! Towers, centralizers and the derived structure, checked against
//! quantities computed here from scratch.

use weakhopf::algebra::{relative_tensor, Algebra, MarkovExtension};
use weakhopf::exactla::{unit, Mat};
use weakhopf::markov::{build_tower, derive_all, Pipeline, Tower};
use weakhopf::whopf::{counital, integrals, is_hopf, is_left_integral, is_right_integral, verify_axioms};
use weakhopf::{corpus, Field, Q};

fn tower(ext: MarkovExtension<Q>) -> Tower<Q> {
    build_tower(corpus::certify(ext).unwrap(), 2).unwrap()
}

fn standard(name: &str) -> Tower<Q> {
    tower(corpus::standard(name).unwrap())
}

/// Dimension of `{φ ∈ End_k(big) : φ(xn) = φ(x)n}` for `n` in the image
/// of `small`: the right `small`-module endomorphisms of `big`.
fn right_module_endomorphisms(big: &Algebra<Q>, small: &[Vec<Q>]) -> usize {
    let d = big.dim();
    let mut rows = Vec::new();
    for n in small {
        let r = big.right_matrix(n);
        // φ r - r φ = 0, with φ flattened row-major.
        for i in 0..d {
            for j in 0..d {
                let mut row = vec![Q::from_i64(0); d * d];
                for k in 0..d {
                    row[i * d + k] += r.get(k, j).clone();
                    row[k * d + j] -= r.get(i, k).clone();
                }
                rows.push(row);
            }
        }
    }
    Mat::from_rows(rows, d * d).unwrap().kernel().dim()
}

/// `{x ∈ alg : xs = sx}` by brute force over a basis of `sub`.
fn commutant_dim(alg: &Algebra<Q>, sub: &[Vec<Q>]) -> usize {
    let d = alg.dim();
    let mut rows = Vec::new();
    for s in sub {
        let m = alg.right_matrix(s).sub(&alg.left_matrix(s));
        rows.extend(m.to_rows());
    }
    if rows.is_empty() {
        return d;
    }
    Mat::from_rows(rows, d).unwrap().kernel().dim()
}

fn image_of(t: &Tower<Q>, from: Option<usize>, to: usize) -> Vec<Vec<Q>> {
    match from {
        None => (0..t.n().dim()).map(|i| t.lift_n(&unit(t.n().dim(), i), to)).collect(),
        Some(k) => (0..t.m(k).dim()).map(|i| t.lift(&unit(t.m(k).dim(), i), k, to)).collect(),
    }
}

#[test]
fn basic_construction_is_the_endomorphism_algebra() {
    for name in corpus::STANDARD {
        let t = standard(name);
        let n_in_m = image_of(&t, None, 0);
        assert_eq!(t.m(1).dim(), right_module_endomorphisms(t.m(0), &n_in_m), "{name}: M1");
        let m_in_m1 = image_of(&t, Some(0), 1);
        assert_eq!(t.m(2).dim(), right_module_endomorphisms(t.m(1), &m_in_m1), "{name}: M2");
        assert_eq!(t.m(1).dim(), relative_tensor(&t.e_down(0).incl).dim(), "{name}: M ⊗_N M");
    }
}

#[test]
fn centralizer_dimensions_match_brute_force() {
    for name in corpus::STANDARD {
        let t = standard(name);
        let p = derive_all(&t).unwrap();
        let l = &p.lattice;
        assert_eq!(l.a.dim(), commutant_dim(t.m(1), &image_of(&t, None, 1)), "{name}: A");
        assert_eq!(l.b.dim(), commutant_dim(t.m(2), &image_of(&t, Some(0), 2)), "{name}: B");
        assert_eq!(l.c.dim(), commutant_dim(t.m(2), &image_of(&t, None, 2)), "{name}: C");
        assert_eq!(l.u.dim(), commutant_dim(t.m(0), &image_of(&t, None, 0)), "{name}: U");
        assert_eq!(l.v.dim(), commutant_dim(t.m(1), &image_of(&t, Some(0), 1)), "{name}: V");
    }
}

#[test]
fn tower_dimensions_and_indices() {
    let expect: [(&str, [usize; 4], i64); 3] = [("q-in-q2", [1, 2, 4, 8], 2), ("q-in-m2", [1, 4, 16, 64], 4), ("q2-in-m2", [2, 4, 8, 16], 2)];
    for (name, dims, index) in expect {
        let t = standard(name);
        assert_eq!(t.dims(), dims, "{name}");
        assert_eq!(t.lambda_inv(), Q::from_i64(index), "{name}");
        assert!(t.report.all_passed(), "{name}: {:?}", t.report.failures().collect::<Vec<_>>());
    }
}

fn derived(name: &str) -> Pipeline<Q> {
    derive_all(&standard(name)).unwrap()
}

#[test]
fn derived_structure_passes_independent_checks() {
    for name in corpus::STANDARD {
        let p = derived(name);
        assert!(p.report().all_passed(), "{name}: {:?}", p.report().failures().collect::<Vec<_>>());
        let b = &p.derived.b_whopf;
        assert!(verify_axioms(b).all_passed(), "{name}");
        assert!(verify_axioms(&p.derived.a_whopf).all_passed(), "{name}");

        // H_t and H_s from the counital maps have the dimensions of V and W.
        let c = counital(b).unwrap();
        assert_eq!(c.ht.dim(), p.lattice.v.dim(), "{name}");
        assert_eq!(c.hs.dim(), p.lattice.w.dim(), "{name}");
        assert!(c.report.all_passed(), "{name}");

        // The stored Haar element is a normalized two-sided integral fixed by S.
        let l = p.lattice.b.coords(&p.derived.haar).expect("Haar element lies in B");
        assert!(is_left_integral(b, &l) && is_right_integral(b, &l), "{name}");
        assert_eq!(b.s(&l), l, "{name}");
        assert_eq!(b.eps_t(&l), b.one(), "{name}");
        assert!(integrals(b).maschke_consistent, "{name}");
    }
}

#[test]
fn hopf_only_without_relative_commutant() {
    for name in corpus::STANDARD {
        let p = derived(name);
        assert!(p.lattice.u.dim() > 1);
        assert_eq!(is_hopf(&p.derived.b_whopf), Ok(false), "{name}");
    }
    let p = derive_all(&tower(corpus::identity_extension(2).unwrap())).unwrap();
    assert_eq!(p.lattice.b.dim(), 1);
    assert_eq!(is_hopf(&p.derived.b_whopf), Ok(true));
}

#[test]
fn skewed_expectation_is_not_certified() {
    let ext = corpus::weighted_scalar_in_matrix::<Q>(&[Q::from_i64(2), Q::from_i64(1)]).unwrap();
    let cert = corpus::certify(ext).unwrap();
    assert!(!cert.report.passed("symmetric-expectation"));
    let w = cert.report.get("symmetric-expectation").unwrap().witness.clone().unwrap();
    assert!(w.contains("E(ux)"), "{w}");
    assert!(build_tower(cert, 1).is_err());
}

#[test]
fn subspaces_of_derived_algebras_are_subalgebras() {
    let p = derived("q2-in-m2");
    let m2 = &p.frame.m2;
    for s in [&p.lattice.a, &p.lattice.b, &p.lattice.c, &p.lattice.v, &p.lattice.w] {
        m2.check_subalgebra(s).unwrap();
        assert!(s.contains(&m2.one()));
    }
    assert!(p.lattice.c.contains_subspace(&p.lattice.a));
    assert!(p.lattice.c.contains_subspace(&p.lattice.b));
    // A ∩ B = C_{M₁}(M) = V.
    let ab = p.lattice.a.intersection(&p.lattice.b);
    assert_eq!(ab.dim(), p.lattice.v.dim());
    assert!(ab.contains_subspace(&p.lattice.v));
}
