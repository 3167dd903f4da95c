//! The composite basic construction: `M_{2n+1}` is the basic construction
//! of `F_n = E ∘ E_M ∘ ⋯ ∘ E_{M_{n-1}}: M_n → N` with Jones idempotent
//! `f_n`. Also the shift `τ²: e_i ↦ e_{i+2}` on words in the Jones
//! idempotents, and a generator of depth-2 extensions `N ⊗ U ⊇ N`.

use thiserror::Error;

use crate::algebra::{certify_markov, find_dual_bases, Algebra, AlgebraError, CondExpectation, DualBases, Inclusion, MarkovCertificate, MarkovExtension};
use crate::exactla::{dot, kron_vec, scale, unit, zeros, LaError, Mat, Subspace};
use crate::field::Field;
use crate::markov::{build_tower_capped, build_tower_within, centralizers, depth2_check, Frame, MarkovError, Tower};
use crate::markov::mismatch;
use crate::report::{Check, Report};

pub const COMPOSITE: &str = "composite basic construction";
pub const SHIFT: &str = "Jones word shift";
pub const EXAMPLE: &str = "depth-two example";

/// Largest tower level built by default.
pub const DEFAULT_BUDGET: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppendixError {
    #[error("element is not in the subalgebra generated by e1..e{n}")]
    NotInTLSubalgebra { n: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Markov(#[from] MarkovError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linear(#[from] LaError),
}

/// A word `e_{w[0]} e_{w[1]} ⋯`; the empty word is `1`.
pub type Word = Vec<usize>;

/// Evaluates a word in `M_level`.
pub fn eval_word<F: Field>(t: &Tower<F>, w: &[usize], level: usize) -> Vec<F> {
    let alg = t.m(level);
    w.iter().fold(alg.one(), |acc, &i| alg.mul(&acc, &t.jones_in(i, level)))
}

/// `e_hi e_{hi-1} ⋯ e_lo`.
fn descending(hi: usize, lo: usize) -> Word {
    (lo..=hi).rev().collect()
}

fn check_level<F: Field>(t: &Tower<F>, need: usize) -> Result<(), AppendixError> {
    if t.depth() < need {
        return Err(MarkovError::TooShallow { need, have: t.depth() }.into());
    }
    Ok(())
}

/// Words in `e_1..e_n` whose values form a basis of the subalgebra they
/// generate in `M_n`, found by closing `{1}` under right multiplication.
#[derive(Clone, Debug)]
pub struct JonesWords<F> {
    pub n: usize,
    pub words: Vec<Word>,
    /// Columns are the values of `words` in `M_n`.
    pub values: Mat<F>,
}

impl<F: Field> JonesWords<F> {
    pub fn new(t: &Tower<F>, n: usize) -> Result<Self, AppendixError> {
        check_level(t, n)?;
        let d = t.m(n).dim();
        let gens: Vec<Vec<F>> = (1..=n).map(|i| t.jones_in(i, n)).collect();
        let mut words: Vec<Word> = vec![vec![]];
        let mut vals = vec![t.m(n).one()];
        let mut span = Subspace::span(d, vals.clone());
        let mut k = 0;
        while k < words.len() {
            for (i, g) in gens.iter().enumerate() {
                let v = t.m(n).mul(&vals[k], g);
                if !span.contains(&v) {
                    span = span.sum(&Subspace::span(d, vec![v.clone()]));
                    let mut w = words[k].clone();
                    w.push(i + 1);
                    words.push(w);
                    vals.push(v);
                }
            }
            k += 1;
        }
        Ok(JonesWords { n, words, values: Mat::from_cols(&vals, d) })
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    /// Coefficients of `x` on the word basis.
    pub fn coords(&self, x: &[F]) -> Result<Vec<F>, AppendixError> {
        self.values.solve(x).map_err(|_| AppendixError::NotInTLSubalgebra { n: self.n })
    }
}

/// `τ²(x)` in `M_{n+2}` and the checks that `τ²` respects the relations.
#[derive(Clone, Debug)]
pub struct Shifted<F> {
    pub image: Vec<F>,
    pub report: Report,
}

fn shift_word(w: &[usize]) -> Word {
    w.iter().map(|i| i + 2).collect()
}

/// Rewrites `x ∈ A_n = ⟨e_1, …, e_n⟩ ⊆ M_n` as a combination of words,
/// shifts each word by `e_i ↦ e_{i+2}` and evaluates in `M_{n+2}`.
pub fn shift_tau2<F: Field>(t: &Tower<F>, x: &[F], n: usize) -> Result<Shifted<F>, AppendixError> {
    check_level(t, n + 2)?;
    let basis = JonesWords::new(t, n)?;
    let c = basis.coords(x)?;
    let top = t.m(n + 2);
    let shifted: Vec<Vec<F>> = basis.words.iter().map(|w| eval_word(t, &shift_word(w), n + 2)).collect();
    let image_of = |c: &[F]| {
        let mut v: Vec<F> = zeros(top.dim());
        for (ci, s) in c.iter().zip(&shifted) {
            crate::exactla::axpy(&mut v, ci, s);
        }
        v
    };
    let image = image_of(&c);

    let lambda = t.lambda();
    let es: Vec<Vec<F>> = (3..=n + 2).map(|i| t.jones_in(i, n + 2)).collect();
    let mut r = Report::new("shift τ²");
    r.push(Check::from_result(
        "shifted-idempotents",
        SHIFT,
        es.iter().enumerate().try_for_each(|(i, e)| mismatch(|| format!("e{}²", i + 3), &top.mul(e, e), e)),
    ));
    r.push(Check::from_result(
        "shifted-braid",
        SHIFT,
        (1..es.len()).try_for_each(|i| {
            let (a, b) = (&es[i - 1], &es[i]);
            mismatch(|| format!("e{}e{}e{}", i + 2, i + 3, i + 2), &top.mul_all(&[a, b, a]), &scale(&lambda, a))?;
            mismatch(|| format!("e{}e{}e{}", i + 3, i + 2, i + 3), &top.mul_all(&[b, a, b]), &scale(&lambda, b))
        }),
    ));
    r.push(Check::from_result(
        "shifted-distant-commute",
        SHIFT,
        (0..es.len()).try_for_each(|i| {
            (i + 2..es.len()).try_for_each(|j| mismatch(|| format!("e{}e{}", i + 3, j + 3), &top.mul(&es[i], &es[j]), &top.mul(&es[j], &es[i])))
        }),
    ));
    let small = t.m(n);
    let cols: Vec<Vec<F>> = (0..basis.dim()).map(|i| basis.values.col(i)).collect();
    r.push(Check::from_result(
        "shift-multiplicative",
        SHIFT,
        (0..basis.dim()).try_for_each(|i| {
            (0..basis.dim()).try_for_each(|j| {
                let prod = basis.coords(&small.mul(&cols[i], &cols[j])).map_err(|e| e.to_string())?;
                mismatch(|| format!("words {i}, {j}"), &image_of(&prod), &top.mul(&shifted[i], &shifted[j]))
            })
        }),
    ));
    Ok(Shifted { image, report: r })
}

/// `f_n ∈ M_{2n+1}` with `F_n: M_n → N` and `F_{M_n}: M_{2n+1} → M_n`.
#[derive(Clone, Debug)]
pub struct CompositeData<F> {
    pub n: usize,
    pub idempotent: Vec<F>,
    /// `F_n`, a `dim N × dim M_n` matrix.
    pub to_n: Mat<F>,
    /// `F_{M_n}`, a `dim M_n × dim M_{2n+1}` matrix.
    pub to_m_n: Mat<F>,
    pub report: Report,
}

/// The word `(e_{n+1}⋯e_1)(e_{n+2}⋯e_2)⋯(e_{2n+1}⋯e_{n+1})`.
pub fn composite_word(n: usize) -> Word {
    (0..=n).flat_map(|j| descending(n + 1 + j, 1 + j)).collect()
}

/// `E_{M_{lo}} ∘ ⋯ ∘ E_{M_{hi-1}}: M_hi → M_lo`, with `M_{-1} = N` written
/// as `lo = None`.
fn composite_expectation<F: Field>(t: &Tower<F>, lo: Option<usize>, hi: usize) -> Mat<F> {
    let start = lo.map_or(0, |l| l + 1);
    let mut m = Mat::identity(t.m(hi).dim());
    for k in (start..=hi).rev() {
        m = t.e_down(k).e.mul(&m);
    }
    m
}

pub fn composite_idempotent<F: Field>(t: &Tower<F>, n: usize) -> Result<CompositeData<F>, AppendixError> {
    let top_level = 2 * n + 1;
    check_level(t, top_level)?;
    let top = t.m(top_level);
    let lambda = t.lambda();
    let lambda_inv = t.lambda_inv();
    let pow = |x: &F, k: usize| (0..k).fold(F::one(), |acc, _| acc.mul_ref(x));
    let f = scale(&pow(&lambda_inv, n * (n + 1) / 2), &eval_word(t, &composite_word(n), top_level));
    let to_n = composite_expectation(t, None, n);
    let to_m_n = composite_expectation(t, Some(n), top_level);
    let dn = t.m(n).dim();
    let ups: Vec<Vec<F>> = (0..dn).map(|x| t.lift(&unit(dn, x), n, top_level)).collect();

    let mut r = Report::new(format!("composite idempotent f{n}"));
    r.push(Check::from_result("idempotent", COMPOSITE, mismatch(|| "f²".into(), &top.mul(&f, &f), &f)));
    r.push(Check::from_result(
        "sandwich",
        COMPOSITE,
        ups.iter().enumerate().try_for_each(|(x, up)| {
            let fx = t.lift_n(&to_n.col(x), top_level);
            let fxf = top.mul_all(&[&f, up, &f]);
            mismatch(|| format!("f x{x} f = f F(x{x})"), &fxf, &top.mul(&f, &fx))?;
            mismatch(|| format!("f x{x} f = F(x{x}) f"), &fxf, &top.mul(&fx, &f))
        }),
    ));
    let expect = scale(&pow(&lambda, n + 1), &t.m(n).one());
    r.push(Check::from_result(
        "expectation-of-idempotent",
        COMPOSITE,
        mismatch(|| format!("F_M{n}(f{n}) = λ^{}", n + 1), &to_m_n.mul_vec(&f), &expect),
    ));
    r.push(Check::from_result(
        "spans-top-level",
        COMPOSITE,
        (|| {
            let mut v = Vec::with_capacity(dn * dn);
            for a in &ups {
                let af = top.mul(a, &f);
                for b in &ups {
                    v.push(top.mul(&af, b));
                }
            }
            let span = Subspace::span(top.dim(), v);
            if span.dim() == top.dim() {
                Ok(())
            } else {
                Err(format!("M{n} f{n} M{n} has dim {} < {}", span.dim(), top.dim()))
            }
        })(),
    ));
    r.push(Check::from_result(
        "composite-expectation-stepwise",
        COMPOSITE,
        (0..dn).try_for_each(|x| {
            let mut v = unit(dn, x);
            for k in (0..=n).rev() {
                v = t.e_down(k).apply(&v);
            }
            mismatch(|| format!("F{n}(x{x})"), &v, &to_n.col(x))
        }),
    ));
    if n == 0 {
        r.push(Check::from_result("base-case", COMPOSITE, mismatch(|| "f0 = e1".into(), &f, t.jones(1))));
    } else {
        let prev = scale(&pow(&lambda_inv, (n - 1) * n / 2), &eval_word(t, &composite_word(n - 1), 2 * n - 1));
        let shifted = shift_tau2(t, &prev, 2 * n - 1)?;
        let left = eval_word(t, &descending(n + 1, 1), top_level);
        let right = eval_word(t, &(2..=n + 1).collect::<Vec<_>>(), top_level);
        let rec = scale(&pow(&lambda_inv, n), &top.mul_all(&[&left, &shifted.image, &right]));
        r.push(Check::from_result("recursive-form", COMPOSITE, mismatch(|| format!("f{n} via τ²(f{})", n - 1), &rec, &f)));
        for c in shifted.report.checks {
            r.push(Check { name: format!("τ²: {}", c.name), ..c });
        }
    }
    Ok(CompositeData { n, idempotent: f, to_n, to_m_n, report: r })
}

/// `f_0, …, f_n` for the largest `n ≤ max_n` with `dim M_{2n+1} ≤ budget`.
pub fn composite_suite<F: Field>(cert: MarkovCertificate<F>, max_n: usize, budget: usize) -> Result<(Tower<F>, Vec<CompositeData<F>>), AppendixError> {
    let tower = build_tower_capped(cert, 2 * max_n + 1, budget)?;
    if tower.depth() == 0 {
        return Err(MarkovError::TooShallow { need: 1, have: 0 }.into());
    }
    let odd = tower.depth() - (tower.depth() + 1) % 2;
    let tower = tower.truncate(odd);
    let data = (0..=(tower.depth() - 1) / 2).map(|n| composite_idempotent(&tower, n)).collect::<Result<_, _>>()?;
    Ok((tower, data))
}

/// Inputs to [`depth2_example`].
#[derive(Clone, Debug)]
pub enum Depth2Kind<F> {
    /// `N ⊆ N ⊗ U` with `T` a trace on `N`.
    Tensor { n: Algebra<F>, n_trace: Vec<F>, u: Algebra<F> },
    /// `k ⊆ M_n(k)`.
    MatrixOverField(usize),
}

#[derive(Clone, Debug)]
pub struct Depth2Example<F> {
    pub cert: MarkovCertificate<F>,
    pub tower: Tower<F>,
    /// The trace `t` on `U` with `λ⁻¹ = t(1)`.
    pub u_trace: Vec<F>,
    pub report: Report,
}

/// The trace `t` with `f¹ t(f² u) = u` for the symmetric separability
/// element `f` of `u`.
pub fn kanzaki_trace<F: Field>(u: &Algebra<F>) -> Result<Vec<F>, AppendixError> {
    let sep = u.kanzaki_element()?;
    let d = u.dim();
    let legs = sep.legs();
    let mut rows = Vec::with_capacity(d * d);
    let mut rhs = Vec::with_capacity(d * d);
    for b in 0..d {
        for r in 0..d {
            let mut row: Vec<F> = zeros(d);
            for (a, c) in &legs {
                if a[r].is_zero() {
                    continue;
                }
                let j = c.iter().position(|x| !x.is_zero()).expect("unit leg");
                for (s, x) in u.basis_product(j, b) {
                    row[*s].add_mul(&a[r], x);
                }
            }
            rows.push(row);
            rhs.push(if r == b { F::one() } else { F::zero() });
        }
    }
    Ok(Mat::from_rows(rows, d)?.solve(&rhs)?)
}

/// `E(n ⊗ u) = λ t(u) n` on `N ⊗ U`, certified, with its depth-2 tower.
pub fn depth2_example<F: Field>(kind: Depth2Kind<F>, budget: usize) -> Result<Depth2Example<F>, AppendixError> {
    let (n_alg, n_trace, u_alg) = match kind {
        Depth2Kind::Tensor { n, n_trace, u } => (n, n_trace, u),
        Depth2Kind::MatrixOverField(k) => (Algebra::ground(), vec![F::one()], Algebra::matrix(k)),
    };
    let mut r = Report::new("depth-two example");
    let t = kanzaki_trace(&u_alg)?;
    r.push(Check::pass("U-kanzaki", EXAMPLE));
    if u_alg.center().dim() != 1 {
        return Err(AppendixError::Precondition(format!("center of U has dimension {}", u_alg.center().dim())));
    }
    r.push(Check::pass("U-central", EXAMPLE));
    let t1 = dot(&t, u_alg.unit_ref());
    let lambda = t1.inv().ok_or_else(|| AppendixError::Precondition("t(1) = 0".into()))?;

    let (dn, du) = (n_alg.dim(), u_alg.dim());
    let m = n_alg.tensor(&u_alg);
    let embed = Mat::from_cols(&(0..dn).map(|i| kron_vec(&unit(dn, i), u_alg.unit_ref())).collect::<Vec<_>>(), dn * du);
    let incl = Inclusion::new(n_alg.clone(), m.clone(), embed)?;
    let mut e = Mat::zeros(dn, dn * du);
    for i in 0..dn {
        for b in 0..du {
            e.set(i, i * du + b, lambda.mul_ref(&t[b]));
        }
    }
    let cond = CondExpectation::new(incl, e)?;
    let u_in_m = Subspace::span(dn * du, (0..du).map(|b| kron_vec(n_alg.unit_ref(), &unit(du, b))).collect());
    let db = find_dual_bases(&cond, Some(&u_in_m))?;
    r.push(Check::pass("dual-bases-in-U", EXAMPLE));
    let cert = certify_markov(MarkovExtension { cond, trace: n_trace }, db.clone());
    r.push(Check::from_result(
        "certified",
        EXAMPLE,
        match cert.report.failures().next() {
            None => Ok(()),
            Some(c) => Err(c.to_string()),
        },
    ));
    let tower = build_tower_within(cert.clone(), 2, budget)?;
    let frame = Frame::new(&tower)?;
    let lat = centralizers(&tower, &frame)?;
    r.push(Check::from_result("depth-two", EXAMPLE, depth2_check(&tower, &frame, &lat).map(|_| ()).map_err(|e| e.to_string())));

    let m1 = tower.m(1);
    let e1 = tower.jones(1);
    let up = |x: &[F]| tower.lift(x, 0, 1);
    let (xs, ys): (Vec<Vec<F>>, Vec<Vec<F>>) = (db.xs.iter().map(|x| up(x)).collect(), db.ys.iter().map(|y| up(y)).collect());
    let mut xp = Vec::with_capacity(xs.len());
    let mut yp = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        let mut a: Vec<F> = zeros(m1.dim());
        let mut b: Vec<F> = zeros(m1.dim());
        for j in 0..xs.len() {
            crate::exactla::axpy(&mut a, &F::one(), &m1.mul_all(&[&xs[j], &xs[i], e1, &ys[j]]));
            crate::exactla::axpy(&mut b, &F::one(), &m1.mul_all(&[&xs[j], &ys[i], e1, &ys[j]]));
        }
        xp.push(a);
        yp.push(b);
    }
    let v = &tower.levels[0].cert.u;
    r.push(Check::from_result(
        "V-dual-bases",
        EXAMPLE,
        (|| {
            if !xp.iter().chain(&yp).all(|x| v.contains(x)) {
                return Err("x'_i or y'_i is not in V".to_string());
            }
            DualBases { xs: xp.clone(), ys: yp.clone(), lambda_inv: None }.verify(tower.e_down(1))
        })(),
    ));
    let zs: Vec<Vec<F>> = xs.iter().map(|x| scale(&t1, &m1.mul(x, e1))).collect();
    let ws: Vec<Vec<F>> = ys.iter().map(|y| m1.mul(e1, y)).collect();
    r.push(Check::from_result(
        "A-dual-bases",
        EXAMPLE,
        (|| {
            if !zs.iter().chain(&ws).all(|x| lat.a_home.contains(x)) {
                return Err("λ⁻¹x_i e₁ or e₁y_i is not in A".to_string());
            }
            DualBases { xs: zs.clone(), ys: ws.clone(), lambda_inv: None }.verify(tower.e_down(1))
        })(),
    ));
    Ok(Depth2Example { cert, tower, u_trace: t, report: r })
}
