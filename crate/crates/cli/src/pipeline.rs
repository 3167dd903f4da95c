//! The verification pipelines behind each subcommand. A pipeline returns
//! an [`Outcome`]; input problems come back as [`InputError`] instead.

use thiserror::Error;
use weakhopf::algebra::{certify_markov, find_dual_bases, Algebra, MarkovExtension};
use weakhopf::appendix::{composite_idempotent, COMPOSITE};
use weakhopf::exactla::zeros;
use weakhopf::groupoid::{groupoid_algebra, groupoid_dual, groupoid_integrals, Groupoid, INTEGRALS};
use weakhopf::markov::{action_a_on_m, action_b_on_m1, build_tower_within, derive_all, phi_iso, psi_iso, MarkovError, DERIVED, TOWER};
use weakhopf::whopf::{counital, dual, integrals, is_hopf, perturb_column, verify_axioms, WeakHopf, AXIOMS, COUNITAL};
use weakhopf::{corpus, Check, Field, Report, F2, Q};

use crate::spec::{AlgebraSpec, FieldSpec, GroupoidSpec, MarkovSpec, Payload, SpecError, SpecFile, WeakHopfSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{0}")]
    Usage(String),
}

fn usage<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError::Usage(msg.into()))
}

/// Sections of checks plus free-form notes that only the text format shows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub sections: Vec<Report>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn all_passed(&self) -> bool {
        self.sections.iter().all(Report::all_passed)
    }

    pub fn counts(&self) -> (usize, usize) {
        self.sections.iter().map(Report::counts).fold((0, 0), |(a, b), (c, d)| (a + c, b + d))
    }

    fn section(&mut self, r: Report) -> bool {
        let ok = r.all_passed();
        self.sections.push(r);
        ok
    }

    /// Records a stage that could not run, so later stages are skipped.
    fn stopped(&mut self, title: &str, name: &str, anchor: &str, witness: impl Into<String>) {
        let mut r = Report::new(title);
        r.push(Check::fail(name, anchor, witness));
        self.sections.push(r);
    }

    fn absorb(&mut self, prefix: &str, other: Outcome) {
        for mut r in other.sections {
            r.title = format!("{prefix}: {}", r.title);
            self.sections.push(r);
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("{prefix}: {n}")));
    }
}

/// Primes accepted in `{"prime": p}`.
pub const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Runs `$body` with `$f` bound to the scalar type named by `$field`.
macro_rules! with_field {
    ($field:expr, $f:ident => $body:expr) => {
        match $field {
            FieldSpec::Rational => {
                type $f = Q;
                $body
            }
            FieldSpec::Prime(2) => {
                type $f = F2;
                $body
            }
            FieldSpec::Prime(3) => {
                type $f = weakhopf::Fp<3>;
                $body
            }
            FieldSpec::Prime(5) => {
                type $f = weakhopf::Fp<5>;
                $body
            }
            FieldSpec::Prime(7) => {
                type $f = weakhopf::Fp<7>;
                $body
            }
            FieldSpec::Prime(11) => {
                type $f = weakhopf::Fp<11>;
                $body
            }
            FieldSpec::Prime(13) => {
                type $f = weakhopf::Fp<13>;
                $body
            }
            FieldSpec::Prime(p) => usage(format!("unsupported prime {p}; supported: {PRIMES:?}")),
        }
    };
}

// ---------------------------------------------------------------------------
// weak Hopf algebras and groupoids

pub fn verify_wha(spec: &SpecFile) -> Result<Outcome, InputError> {
    with_field!(spec.field, F => verify_wha_in::<F>(spec))
}

fn verify_wha_in<F: Field>(spec: &SpecFile) -> Result<Outcome, InputError> {
    let built = match &spec.payload {
        Payload::WeakHopf(s) => s.build::<F>()?,
        Payload::Groupoid(s) => s.build()?.and_then(|g| groupoid_algebra::<F>(&g).map_err(|e| e.to_string())),
        p => return usage(format!("verify-wha expects a weak-hopf or groupoid file, got {:?}", p.kind())),
    };
    let mut out = Outcome::default();
    match built {
        Ok(h) => weak_hopf_suite(&mut out, &h),
        Err(e) => out.stopped("construction", "weak-Hopf-data-valid", AXIOMS, e),
    }
    Ok(out)
}

/// Axioms, counital subalgebras, integrals and the dual of `h`.
fn weak_hopf_suite<F: Field>(out: &mut Outcome, h: &WeakHopf<F>) {
    out.notes.push(format!("dimension {}", h.dim()));
    out.section(verify_axioms(h));
    match counital(h) {
        Ok(c) => {
            out.notes.push(format!("dim H_t = {}, dim H_s = {}", c.ht.dim(), c.hs.dim()));
            out.section(c.report);
        }
        Err(e) => out.stopped("counital subalgebras", "counital-data", COUNITAL, e.to_string()),
    }
    out.section(integral_report(h));
    let mut r = Report::new("duality");
    match dual(h).and_then(|d| Ok((dual(&d)?, d))) {
        Ok((dd, d)) => {
            r.push(Check::from_result(
                "dual-involution",
                AXIOMS,
                if dd.same_structure(h) { Ok(()) } else { Err("dual(dual(H)) differs from H".into()) },
            ));
            for c in verify_axioms(&d).checks {
                r.push(Check { name: format!("dual: {}", c.name), ..c });
            }
        }
        Err(e) => r.push(Check::fail("dual-exists", AXIOMS, e.to_string())),
    }
    out.section(r);
    match is_hopf(h) {
        Ok(b) => out.notes.push(format!("Hopf algebra: {b}")),
        Err(e) => out.notes.push(format!("Hopf test inconsistent: {e}")),
    }
}

fn integral_report<F: Field>(h: &WeakHopf<F>) -> Report {
    let ints = integrals(h);
    let mut r = Report::new("integrals");
    let nonzero = |name: &str, dim: usize| {
        if dim > 0 {
            Check::pass(name, AXIOMS)
        } else {
            Check::fail(name, AXIOMS, "the space is zero")
        }
    };
    r.push(nonzero("left-integrals-nonzero", ints.left.dim()));
    r.push(nonzero("right-integrals-nonzero", ints.right.dim()));
    r.push(Check::from_result(
        "normalized-integral-iff-separable",
        AXIOMS,
        if ints.maschke_consistent { Ok(()) } else { Err("normalized left integral and separability disagree".into()) },
    ));
    r
}

pub fn groupoid(spec: &SpecFile, with_dual: bool, with_integrals: bool) -> Result<Outcome, InputError> {
    let Payload::Groupoid(s) = &spec.payload else {
        return usage(format!("groupoid expects a groupoid file, got {:?}", spec.payload.kind()));
    };
    let g = match s.build()? {
        Ok(g) => g,
        Err(e) => {
            let mut out = Outcome::default();
            out.stopped("construction", "groupoid-valid", AXIOMS, e);
            return Ok(out);
        }
    };
    with_field!(spec.field, F => Ok(groupoid_in::<F>(&g, with_dual, with_integrals)))
}

fn groupoid_in<F: Field>(g: &Groupoid, with_dual: bool, with_integrals: bool) -> Outcome {
    let mut out = Outcome::default();
    out.notes.push(format!("{} objects, {} morphisms", g.objects().len(), g.len()));
    let kg = match groupoid_algebra::<F>(g) {
        Ok(h) => h,
        Err(e) => {
            out.stopped("groupoid algebra", "groupoid-algebra", AXIOMS, e.to_string());
            return out;
        }
    };
    let mut sub = Outcome::default();
    weak_hopf_suite(&mut sub, &kg);
    out.absorb("kG", sub);
    if with_dual {
        match groupoid_dual::<F>(g) {
            Ok(d) => {
                let mut sub = Outcome::default();
                weak_hopf_suite(&mut sub, &d);
                let mut r = Report::new("dual construction");
                r.push(Check::from_result(
                    "direct-dual-matches-dual",
                    AXIOMS,
                    match dual(&kg) {
                        Ok(x) if x.same_structure(&d) => Ok(()),
                        Ok(_) => Err("dual(kG) differs from the direct construction".into()),
                        Err(e) => Err(e.to_string()),
                    },
                ));
                sub.section(r);
                out.absorb("(kG)*", sub);
            }
            Err(e) => out.stopped("(kG)*", "groupoid-dual", AXIOMS, e.to_string()),
        }
    }
    if with_integrals {
        match groupoid_integrals::<F>(g) {
            Ok(gi) => {
                out.section(gi.report);
            }
            Err(e) => out.stopped("groupoid integrals", "integrals", INTEGRALS, e.to_string()),
        }
    }
    out
}

// ---------------------------------------------------------------------------
// algebras

pub fn algebra(spec: &SpecFile) -> Result<Outcome, InputError> {
    let Payload::Algebra(s) = &spec.payload else {
        return usage(format!("algebra expects an algebra file, got {:?}", spec.payload.kind()));
    };
    with_field!(spec.field, F => algebra_in::<F>(s))
}

fn algebra_in<F: Field>(s: &AlgebraSpec) -> Result<Outcome, InputError> {
    const SEP: &str = "separability";
    let mut out = Outcome::default();
    let a = match s.build::<F>("payload")? {
        Ok(a) => a,
        Err(e) => {
            out.stopped("construction", "associative-unital", SEP, e);
            return Ok(out);
        }
    };
    let mut r = Report::new("separability");
    r.push(Check::pass("associative-unital", SEP));
    r.push(Check::from_result("separable", SEP, a.separability_element().map(|_| ()).map_err(|e| e.to_string())));
    r.push(Check::from_result("kanzaki-separable", SEP, a.kanzaki_element().map(|_| ()).map_err(|e| e.to_string())));
    out.notes.push(format!("dimension {}, center dimension {}", a.dim(), a.center().dim()));
    out.section(r);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Markov towers

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerOptions {
    pub depth: usize,
    pub derive: bool,
    pub appendix_fn: Option<usize>,
    /// Largest allowed dimension of a tower level.
    pub budget: usize,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions { depth: 2, derive: false, appendix_fn: None, budget: 256 }
    }
}

pub fn tower(spec: &SpecFile, opts: TowerOptions) -> Result<Outcome, InputError> {
    let Payload::MarkovExtension(s) = &spec.payload else {
        return usage(format!("tower expects a markov-extension file, got {:?}", spec.payload.kind()));
    };
    with_field!(spec.field, F => tower_in::<F>(s, opts))
}

fn tower_in<F: Field>(s: &MarkovSpec, opts: TowerOptions) -> Result<Outcome, InputError> {
    let mut out = Outcome::default();
    match s.build::<F>()? {
        Ok(ext) => tower_suite(&mut out, ext, opts),
        Err(e) => out.stopped("construction", "extension-valid", TOWER, e),
    }
    Ok(out)
}

fn tower_suite<F: Field>(out: &mut Outcome, ext: MarkovExtension<F>, opts: TowerOptions) {
    let db = match find_dual_bases(&ext.cond, None) {
        Ok(db) => db,
        Err(e) => return out.stopped("Markov extension certificate", "dual-bases", TOWER, e.to_string()),
    };
    let cert = certify_markov(ext, db);
    if let Some(l) = &cert.lambda_inv {
        out.notes.push(format!("index λ⁻¹ = {l}"));
    }
    if !out.section(cert.report.clone()) {
        return;
    }
    let mut depth = opts.depth;
    if opts.derive {
        depth = depth.max(2);
    }
    if let Some(n) = opts.appendix_fn {
        depth = depth.max(2 * n + 1);
    }
    let t = match build_tower_within(cert, depth, opts.budget) {
        Ok(t) => t,
        Err(e) => return out.stopped("Jones tower", "tower-built", TOWER, e.to_string()),
    };
    out.notes.push(format!("dimensions N, M, M1, ...: {:?}", t.dims()));
    if !out.section(t.report.clone()) {
        return;
    }
    if opts.derive {
        derive_suite(out, &t);
    }
    if let Some(n) = opts.appendix_fn {
        for k in 0..=n {
            match composite_idempotent(&t, k) {
                Ok(d) => {
                    out.section(d.report);
                }
                Err(e) => out.stopped(&format!("composite idempotent f{k}"), "composite-idempotent", COMPOSITE, e.to_string()),
            }
        }
    }
}

fn derive_suite<F: Field>(out: &mut Outcome, t: &weakhopf::markov::Tower<F>) {
    let p = match derive_all(t) {
        Ok(p) => p,
        Err(e @ MarkovError::NotDepthTwo { .. }) => return out.stopped("depth-two derivation", "depth-two", DERIVED, e.to_string()),
        Err(e) => return out.stopped("depth-two derivation", "derivation", DERIVED, e.to_string()),
    };
    let l = &p.lattice;
    out.notes.push(format!(
        "dim A = {}, dim B = {}, dim C = {}, dim U = {}, dim V = {}, dim W = {}",
        l.a.dim(),
        l.b.dim(),
        l.c.dim(),
        l.u.dim(),
        l.v.dim(),
        l.w.dim()
    ));
    let mut r = p.report();
    if l.u.dim() == 1 {
        r.push(Check::from_result(
            "trivial-centralizer-gives-Hopf",
            DERIVED,
            match is_hopf(&p.derived.b_whopf) {
                Ok(true) => Ok(()),
                Ok(false) => Err("Δ(1) ≠ 1⊗1".into()),
                Err(e) => Err(e.to_string()),
            },
        ));
    }
    if !out.section(r) {
        return;
    }
    let b = match action_b_on_m1(&p) {
        Ok(b) => b,
        Err(e) => return out.stopped("action of B on M1", "B-action", DERIVED, e.to_string()),
    };
    out.section(b.report.clone());
    let a = match action_a_on_m(&p) {
        Ok(a) => a,
        Err(e) => return out.stopped("action of A on M", "A-action", DERIVED, e.to_string()),
    };
    out.section(a.report.clone());
    match psi_iso(&p, &b) {
        Ok(i) => {
            out.section(i.report);
        }
        Err(e) => out.stopped("M1 # B ≅ M2", "psi", DERIVED, e.to_string()),
    }
    match phi_iso(&p, &a, &b) {
        Ok(i) => {
            out.section(i.report);
        }
        Err(e) => out.stopped("M # A ≅ M1", "phi", DERIVED, e.to_string()),
    }
}

// ---------------------------------------------------------------------------
// built-in examples

fn groupoid_named(name: &str) -> Option<Groupoid> {
    Groupoid::corpus().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g)
}

fn markov_file(name: &str, field: FieldSpec, ext: &MarkovExtension<impl Field>) -> SpecFile {
    SpecFile { name: name.into(), field, payload: Payload::MarkovExtension(MarkovSpec::of(ext)) }
}

/// Names accepted by [`builtin`].
pub fn builtin_names() -> Vec<String> {
    let mut v = Vec::new();
    for (n, _) in Groupoid::corpus() {
        v.push(format!("groupoid:{n}"));
        v.push(format!("kG:{n}"));
        v.push(format!("dual:{n}"));
    }
    v.push("pair2-mutated-antipode".into());
    v.extend(corpus::STANDARD.iter().map(|s| s.to_string()));
    v.push("m2-in-m2".into());
    v.push("skewed-q-in-m2".into());
    v.push("m2-over-q".into());
    v.push("m2-over-f2".into());
    v
}

/// A built-in example as a spec file.
pub fn builtin(name: &str) -> Option<SpecFile> {
    let file = |payload| Some(SpecFile { name: name.into(), field: FieldSpec::Rational, payload });
    if let Some(g) = name.strip_prefix("groupoid:").and_then(groupoid_named) {
        return file(Payload::Groupoid(GroupoidSpec::of(&g)));
    }
    if let Some(g) = name.strip_prefix("kG:").and_then(groupoid_named) {
        return file(Payload::WeakHopf(WeakHopfSpec::of(&groupoid_algebra::<Q>(&g).ok()?)));
    }
    if let Some(g) = name.strip_prefix("dual:").and_then(groupoid_named) {
        return file(Payload::WeakHopf(WeakHopfSpec::of(&groupoid_dual::<Q>(&g).ok()?)));
    }
    match name {
        "pair2-mutated-antipode" => {
            // S'(id_X) = id_X + id_Y: the counital-map identities still hold.
            let h = groupoid_algebra::<Q>(&Groupoid::pair(2)).ok()?;
            let mut v: Vec<Q> = zeros(4);
            v[3] = Q::from_i64(1);
            file(Payload::WeakHopf(WeakHopfSpec::of(&h.with_antipode(perturb_column(&h.antipode, 0, &v)))))
        }
        "skewed-q-in-m2" => {
            let ext = corpus::weighted_scalar_in_matrix::<Q>(&[Q::from_i64(2), Q::from_i64(1)]).ok()?;
            Some(markov_file(name, FieldSpec::Rational, &ext))
        }
        "m2-over-q" => file(Payload::Algebra(AlgebraSpec::of(&Algebra::<Q>::matrix(2)))),
        "m2-over-f2" => Some(SpecFile { name: name.into(), field: FieldSpec::Prime(2), payload: Payload::Algebra(AlgebraSpec::of(&Algebra::<F2>::matrix(2))) }),
        _ => corpus::standard::<Q>(name).map(|ext| markov_file(name, FieldSpec::Rational, &ext)),
    }
}

/// Every built-in groupoid with its dual and integrals, then the three
/// standard towers with the full derivation, then `f_0, f_1, f_2` on the
/// smallest tower.
pub fn full_report() -> Outcome {
    let mut out = Outcome::default();
    for (name, g) in Groupoid::corpus() {
        out.absorb(name, groupoid_in::<Q>(&g, true, true));
    }
    for name in corpus::STANDARD {
        let mut sub = Outcome::default();
        let opts = TowerOptions { derive: true, appendix_fn: (name == "q-in-q2").then_some(2), ..TowerOptions::default() };
        match corpus::standard::<Q>(name) {
            Some(ext) => tower_suite(&mut sub, ext, opts),
            None => sub.stopped("construction", "extension-valid", TOWER, "built-in extension failed to build"),
        }
        out.absorb(name, sub);
    }
    out
}
