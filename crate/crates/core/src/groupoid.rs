//! Finite groupoids, their groupoid algebras `kG` and the duals `(kG)*`.
//!
//! The product of two morphisms in `kG` is their composition `g ∘ h` when
//! `source(g) = target(h)` and zero otherwise.

use std::collections::HashMap;

use thiserror::Error;

use crate::algebra::Algebra;
use crate::exactla::{unit, zeros, Mat, Subspace};
use crate::field::Field;
use crate::report::{Check, Report};
use crate::whopf::{self, WeakHopf, WhError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupoidError {
    #[error("bad groupoid: {0}")]
    Invalid(String),
    #[error(transparent)]
    WeakHopf(#[from] WhError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Groupoid {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    inverse: Vec<usize>,
}

impl Groupoid {
    /// `compose` lists `(g, h, g∘h)`; it must be defined exactly when
    /// `source(g) = target(h)`.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: &[(usize, usize, usize)],
        inverse: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        let bad = |m: String| Err(GroupoidError::Invalid(m));
        let n = morphisms.len();
        if identities.len() != objects.len() || inverse.len() != n {
            return bad("identities or inverse table has the wrong length".into());
        }
        for m in &morphisms {
            if m.source >= objects.len() || m.target >= objects.len() {
                return bad(format!("{} has an unknown endpoint", m.name));
            }
        }
        let mut table = HashMap::new();
        for &(g, h, gh) in compose {
            if g >= n || h >= n || gh >= n {
                return bad(format!("composition ({g}, {h}) out of range"));
            }
            if table.insert((g, h), gh).is_some() {
                return bad(format!("composition ({g}, {h}) listed twice"));
            }
        }
        let gr = Groupoid { objects, morphisms, identities, compose: table, inverse };
        gr.validate()?;
        Ok(gr)
    }

    fn validate(&self) -> Result<(), GroupoidError> {
        let bad = |m: String| Err(GroupoidError::Invalid(m));
        let n = self.morphisms.len();
        let name = |g: usize| &self.morphisms[g].name;
        for g in 0..n {
            for h in 0..n {
                let defined = self.morphisms[g].source == self.morphisms[h].target;
                match (defined, self.compose.get(&(g, h))) {
                    (true, None) => return bad(format!("{} ∘ {} missing", name(g), name(h))),
                    (false, Some(_)) => return bad(format!("{} ∘ {} given but not composable", name(g), name(h))),
                    (true, Some(&gh)) => {
                        let m = &self.morphisms[gh];
                        if m.source != self.morphisms[h].source || m.target != self.morphisms[g].target {
                            return bad(format!("{} ∘ {} has the wrong endpoints", name(g), name(h)));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    if let (Some(gh), Some(hk)) = (self.comp(g, h), self.comp(h, k)) {
                        if self.comp(gh, k) != self.comp(g, hk) {
                            return bad(format!("composition not associative at ({}, {}, {})", name(g), name(h), name(k)));
                        }
                    }
                }
            }
        }
        for (x, &id) in self.identities.iter().enumerate() {
            let m = &self.morphisms[id];
            if m.source != x || m.target != x {
                return bad(format!("identity of {} is not a loop at it", self.objects[x]));
            }
            for g in 0..n {
                if self.comp(id, g).is_some_and(|r| r != g) || self.comp(g, id).is_some_and(|r| r != g) {
                    return bad(format!("{} is not neutral for {}", name(id), name(g)));
                }
            }
        }
        for g in 0..n {
            let gi = self.inverse[g];
            let m = &self.morphisms[g];
            if self.comp(gi, g) != Some(self.identities[m.source]) || self.comp(g, gi) != Some(self.identities[m.target]) {
                return bad(format!("inverse of {} is wrong", name(g)));
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    /// `g ∘ h`, if defined.
    pub fn comp(&self, g: usize, h: usize) -> Option<usize> {
        self.compose.get(&(g, h)).copied()
    }

    /// All `(g, h, g∘h)`, sorted.
    pub fn composition_table(&self) -> Vec<(usize, usize, usize)> {
        let mut t: Vec<_> = self.compose.iter().map(|(&(g, h), &gh)| (g, h, gh)).collect();
        t.sort_unstable();
        t
    }

    pub fn is_identity(&self, g: usize) -> bool {
        self.identities.contains(&g)
    }

    pub fn labels(&self) -> Vec<String> {
        self.morphisms.iter().map(|m| m.name.clone()).collect()
    }

    /// One object, one morphism.
    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group of order `n` as a one-object groupoid; `s^k` has index `k`.
    pub fn cyclic(n: usize) -> Self {
        let name = |k: usize| match k {
            0 => "1".to_string(),
            1 => "s".to_string(),
            _ => format!("s{k}"),
        };
        let morphisms = (0..n).map(|k| Morphism { name: name(k), source: 0, target: 0 }).collect();
        let mut compose = Vec::new();
        for a in 0..n {
            for b in 0..n {
                compose.push((a, b, (a + b) % n));
            }
        }
        let inverse = (0..n).map(|k| (n - k) % n).collect();
        Self::new(vec!["*".into()], morphisms, vec![0], &compose, inverse).expect("cyclic group")
    }

    /// The pair groupoid: one morphism `j → i` for every ordered pair,
    /// stored at index `i * n + j`.
    pub fn pair(n: usize) -> Self {
        let obj = |i: usize| if n <= 4 { ["X", "Y", "Z", "W"][i].to_string() } else { format!("X{i}") };
        let objects: Vec<String> = (0..n).map(obj).collect();
        let mut morphisms = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let name = if i == j { format!("id_{}", objects[i]) } else { format!("g_{}{}", objects[i], objects[j]) };
                morphisms.push(Morphism { name, source: j, target: i });
            }
        }
        let mut compose = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    compose.push((i * n + j, j * n + k, i * n + k));
                }
            }
        }
        let identities = (0..n).map(|i| i * n + i).collect();
        let inverse = (0..n * n).map(|g| (g % n) * n + g / n).collect();
        Self::new(objects, morphisms, identities, &compose, inverse).expect("pair groupoid")
    }

    /// Disjoint union; names from `other` are primed if they collide.
    pub fn disjoint_union(&self, other: &Groupoid) -> Self {
        let (no, nm) = (self.objects.len(), self.morphisms.len());
        let fresh = |name: &str, taken: &[String]| {
            let mut s = name.to_string();
            while taken.contains(&s) {
                s.push('\'');
            }
            s
        };
        let mut objects = self.objects.clone();
        for o in &other.objects {
            let s = fresh(o, &objects);
            objects.push(s);
        }
        let mut morphisms = self.morphisms.clone();
        let mut names: Vec<String> = self.labels();
        for m in &other.morphisms {
            let s = fresh(&m.name, &names);
            names.push(s.clone());
            morphisms.push(Morphism { name: s, source: m.source + no, target: m.target + no });
        }
        let mut compose = self.composition_table();
        compose.extend(other.composition_table().into_iter().map(|(g, h, gh)| (g + nm, h + nm, gh + nm)));
        let identities = self.identities.iter().copied().chain(other.identities.iter().map(|i| i + nm)).collect();
        let inverse = self.inverse.iter().copied().chain(other.inverse.iter().map(|i| i + nm)).collect();
        Self::new(objects, morphisms, identities, &compose, inverse).expect("disjoint union of groupoids")
    }

    /// The test corpus: one-object, multi-object and mixed examples.
    pub fn corpus() -> Vec<(&'static str, Groupoid)> {
        vec![
            ("trivial", Self::trivial()),
            ("Z2", Self::cyclic(2)),
            ("Z3", Self::cyclic(3)),
            ("pair2", Self::pair(2)),
            ("pair3", Self::pair(3)),
            ("Z2+pair2", Self::cyclic(2).disjoint_union(&Self::pair(2))),
        ]
    }
}

/// `kG` with `Δ(g) = g⊗g`, `ε(g) = 1`, `S(g) = g⁻¹`.
pub fn groupoid_algebra<F: Field>(g: &Groupoid) -> Result<WeakHopf<F>, GroupoidError> {
    let n = g.len();
    let mut unit_v: Vec<F> = zeros(n);
    for &id in &g.identities {
        unit_v[id] = F::one();
    }
    let entries: Vec<(usize, usize, usize, F)> = g.composition_table().into_iter().map(|(a, b, ab)| (a, b, ab, F::one())).collect();
    let alg = Algebra::from_entries(n, &entries, unit_v, g.labels()).map_err(WhError::from)?;
    let mut delta = Mat::zeros(n * n, n);
    let mut antipode = Mat::zeros(n, n);
    for k in 0..n {
        delta.set(k * n + k, k, F::one());
        antipode.set(g.inverse(k), k, F::one());
    }
    Ok(WeakHopf::new(alg, delta, vec![F::one(); n], antipode)?)
}

/// `(kG)*` built directly on the idempotents `p_g`.
pub fn groupoid_dual<F: Field>(g: &Groupoid) -> Result<WeakHopf<F>, GroupoidError> {
    let n = g.len();
    let labels = g.labels().iter().map(|l| format!("p_{l}")).collect();
    let entries: Vec<(usize, usize, usize, F)> = (0..n).map(|k| (k, k, k, F::one())).collect();
    let alg = Algebra::from_entries(n, &entries, vec![F::one(); n], labels).map_err(WhError::from)?;
    let mut delta = Mat::zeros(n * n, n);
    for (u, v, uv) in g.composition_table() {
        delta.set(u * n + v, uv, F::one());
    }
    let eps = (0..n).map(|k| if g.is_identity(k) { F::one() } else { F::zero() }).collect();
    let mut antipode = Mat::zeros(n, n);
    for k in 0..n {
        antipode.set(g.inverse(k), k, F::one());
    }
    Ok(WeakHopf::new(alg, delta, eps, antipode)?)
}

pub const INTEGRALS: &str = "groupoid integrals";

/// Spanning sets for the integrals of `kG` and `(kG)*`.
#[derive(Clone, Debug)]
pub struct GroupoidIntegrals<F> {
    /// `Σ_{source(g) = e} g`, one per object. With `gh = g ∘ h` and
    /// `ε_t(g) = id_{target(g)}` these are the left integrals.
    pub left: Vec<Vec<F>>,
    /// `Σ_{target(g) = e} g`.
    pub right: Vec<Vec<F>>,
    /// `p_e` for identities `e`, in `(kG)*`.
    pub dual: Vec<Vec<F>>,
    pub report: Report,
}

/// Builds the explicit spanning sets and compares them with
/// [`whopf::integrals`] as subspaces.
pub fn groupoid_integrals<F: Field>(g: &Groupoid) -> Result<GroupoidIntegrals<F>, GroupoidError> {
    let n = g.len();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for x in 0..g.objects.len() {
        let mut l: Vec<F> = zeros(n);
        let mut r: Vec<F> = zeros(n);
        for (k, m) in g.morphisms.iter().enumerate() {
            if m.source == x {
                l[k] = F::one();
            }
            if m.target == x {
                r[k] = F::one();
            }
        }
        left.push(l);
        right.push(r);
    }
    let dual: Vec<Vec<F>> = g.identities.iter().map(|&e| unit(n, e)).collect();
    let kg = whopf::integrals(&groupoid_algebra::<F>(g)?);
    let kgd = whopf::integrals(&groupoid_dual::<F>(g)?);
    let cmp = |what: &str, got: &Subspace<F>, spans: &[Vec<F>]| {
        let want = Subspace::span(n, spans.to_vec());
        if *got == want {
            Ok(())
        } else {
            Err(format!("{what}: computed dimension {}, spanning set dimension {}", got.dim(), want.dim()))
        }
    };
    let mut report = Report::new("groupoid integrals");
    report.push(Check::from_result("left-integrals-of-kG", INTEGRALS, cmp("left", &kg.left, &left)));
    report.push(Check::from_result("right-integrals-of-kG", INTEGRALS, cmp("right", &kg.right, &right)));
    report.push(Check::from_result("left-integrals-of-dual", INTEGRALS, cmp("left", &kgd.left, &dual)));
    report.push(Check::from_result("right-integrals-of-dual", INTEGRALS, cmp("right", &kgd.right, &dual)));
    Ok(GroupoidIntegrals { left, right, dual, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{F2, Q};
    use crate::whopf::{counital, dual, integrals, is_hopf, verify_axioms};
    use num_traits::One;

    #[test]
    fn rejects_bad_tables() {
        let m = |name: &str| Morphism { name: name.into(), source: 0, target: 0 };
        // Missing composition.
        let e = Groupoid::new(vec!["*".into()], vec![m("1")], vec![0], &[], vec![0]);
        assert!(matches!(e, Err(GroupoidError::Invalid(_))));
        // Z2 with a wrong inverse.
        let t = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)];
        let e = Groupoid::new(vec!["*".into()], vec![m("1"), m("s")], vec![0], &t, vec![0, 0]);
        assert!(matches!(e, Err(GroupoidError::Invalid(_))));
        // s ∘ s = s leaves s without an inverse.
        let t = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)];
        assert!(Groupoid::new(vec!["*".into()], vec![m("1"), m("s")], vec![0], &t, vec![0, 1]).is_err());
    }

    #[test]
    fn corpus_passes_all_axioms() {
        for (name, g) in Groupoid::corpus() {
            let h = groupoid_algebra::<Q>(&g).unwrap();
            let r = verify_axioms(&h);
            assert!(r.all_passed(), "{name}: {:?}", r.failures().collect::<Vec<_>>());
            let d = groupoid_dual::<Q>(&g).unwrap();
            assert!(verify_axioms(&d).all_passed(), "{name} dual");
            assert!(d.same_structure(&dual(&h).unwrap()), "{name}: explicit dual differs");
            assert!(dual(&dual(&h).unwrap()).unwrap().same_structure(&h), "{name}: double dual");
            assert!(counital(&h).unwrap().report.all_passed(), "{name} counital");
            assert!(counital(&d).unwrap().report.all_passed(), "{name} dual counital");
        }
    }

    #[test]
    fn corpus_over_f2() {
        for (name, g) in Groupoid::corpus() {
            let h = groupoid_algebra::<F2>(&g).unwrap();
            assert!(verify_axioms(&h).all_passed(), "{name}");
            assert!(verify_axioms(&groupoid_dual::<F2>(&g).unwrap()).all_passed(), "{name}");
        }
    }

    #[test]
    fn pair_groupoid_counital_maps() {
        let g = Groupoid::pair(2);
        let h = groupoid_algebra::<Q>(&g).unwrap();
        let c = counital(&h).unwrap();
        for (k, m) in g.morphisms().iter().enumerate() {
            assert_eq!(c.eps_t.col(k), unit(4, g.identities()[m.target]));
            assert_eq!(c.eps_s.col(k), unit(4, g.identities()[m.source]));
        }
        assert_eq!(c.ht, Subspace::span(4, vec![unit(4, 0), unit(4, 3)]));
        assert_eq!(c.ht, c.hs);
        assert!(!is_hopf(&h).unwrap());
        assert!(is_hopf(&groupoid_algebra::<Q>(&Groupoid::cyclic(2)).unwrap()).unwrap());
        assert!(is_hopf(&groupoid_algebra::<Q>(&Groupoid::trivial()).unwrap()).unwrap());
    }

    #[test]
    fn hopf_case_has_trivial_counital_subalgebra() {
        let h = groupoid_algebra::<Q>(&Groupoid::cyclic(2)).unwrap();
        let c = counital(&h).unwrap();
        assert_eq!(c.ht, Subspace::span(2, vec![h.one()]));
        assert_eq!(h.delta_one(), crate::exactla::kron_vec(&h.one(), &h.one()));
    }

    #[test]
    fn identity_antipode_breaks_the_sandwich_axiom() {
        let h = groupoid_algebra::<Q>(&Groupoid::pair(2)).unwrap();
        let r = verify_axioms(&h.with_antipode(Mat::identity(4)));
        let c = r.get("antipode-sandwich").unwrap();
        assert!(!c.passed);
        assert!(c.witness.as_deref().unwrap().contains("basis 1"));
        assert!(r.passed("coassociativity") && r.passed("counit") && r.passed("coproduct-multiplicative"));
    }

    #[test]
    fn mutated_antipode_fails_only_downstream() {
        // S'(id_X) = id_X + id_Y leaves the two counital-map identities intact.
        let h = groupoid_algebra::<Q>(&Groupoid::pair(2)).unwrap();
        let mut v: Vec<Q> = zeros(4);
        v[3] = Q::one();
        let r = verify_axioms(&h.with_antipode(whopf::perturb_column(&h.antipode, 0, &v)));
        let failed: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["antipode-sandwich", "antipode-anti-multiplicative", "antipode-anti-comultiplicative"]);
        let sandwich = r.checks.iter().position(|c| c.name == "antipode-sandwich").unwrap();
        assert!(r.checks[..sandwich].iter().all(|c| c.passed));
    }

    #[test]
    fn integrals_match_spanning_sets() {
        for (name, g) in Groupoid::corpus() {
            let gi = groupoid_integrals::<Q>(&g).unwrap();
            assert!(gi.report.all_passed(), "{name}: {:?}", gi.report.failures().collect::<Vec<_>>());
            let ints = integrals(&groupoid_algebra::<Q>(&g).unwrap());
            assert_eq!(ints.left.dim(), g.objects().len(), "{name}");
            assert!(ints.maschke_consistent, "{name}");
            assert!(ints.normalized_left.is_some(), "{name}");
        }
        let gi = groupoid_integrals::<Q>(&Groupoid::pair(2)).unwrap();
        assert_eq!(gi.left.len(), 2);
        assert!(gi.left.iter().all(|l| l.iter().filter(|c| c.is_one()).count() == 2));
    }

    #[test]
    fn integrals_in_characteristic_two() {
        // kZ2 over F2 is not semisimple: no normalized integral, no separability element.
        let ints = integrals(&groupoid_algebra::<F2>(&Groupoid::cyclic(2)).unwrap());
        assert!(ints.normalized_left.is_none());
        assert!(ints.maschke_consistent);
        assert_eq!(ints.left.dim(), 1);
    }

    #[test]
    fn z2_is_self_dual_away_from_two() {
        let h = groupoid_algebra::<Q>(&Groupoid::cyclic(2)).unwrap();
        let d = dual(&h).unwrap();
        // p_1 + p_s and p_1 - p_s play the roles of 1 and s.
        let p = Mat::from_rows(vec![vec![Q::one(), Q::one()], vec![Q::one(), -Q::one()]], 2).unwrap();
        let t = whopf::transport(&d, &p, vec!["1".into(), "s".into()]).unwrap();
        assert!(t.same_structure(&h));
        assert_eq!(t.eps, vec![Q::one(), Q::one()]);
    }

    #[test]
    fn integrals_form_one_sided_ideals() {
        for (name, g) in Groupoid::corpus() {
            let h = groupoid_algebra::<Q>(&g).unwrap();
            let ints = integrals(&h);
            for k in 0..h.dim() {
                let e = unit(h.dim(), k);
                for l in ints.left.basis() {
                    assert!(ints.left.contains(&h.alg.mul(l, &e)), "{name}");
                }
                for r in ints.right.basis() {
                    assert!(ints.right.contains(&h.alg.mul(&e, r)), "{name}");
                }
            }
        }
    }

    #[test]
    fn left_integrals_are_not_a_left_ideal() {
        // l = id_X + g_YX is a left integral, but g_XY l = id_X is not.
        let h = groupoid_algebra::<Q>(&Groupoid::pair(2)).unwrap();
        let ints = integrals(&h);
        let l = crate::exactla::add(&unit(4, 0), &unit(4, 2));
        assert!(ints.left.contains(&l));
        let gl = h.alg.mul(&unit(4, 1), &l);
        assert_eq!(gl, unit(4, 0));
        assert!(!ints.left.contains(&gl));
    }

    #[test]
    fn target_sums_are_right_integrals_only() {
        let g = Groupoid::pair(2);
        let h = groupoid_algebra::<Q>(&g).unwrap();
        let gi = groupoid_integrals::<Q>(&g).unwrap();
        for r in &gi.right {
            assert!(whopf::is_right_integral(&h, r));
            assert!(!whopf::is_left_integral(&h, r));
        }
    }
}
