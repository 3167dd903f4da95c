//! The basic construction and iterated Jones towers.

use crate::algebra::{certify_markov, scalar_of, Algebra, CondExpectation, DualBases, Inclusion, MarkovCertificate, MarkovExtension};
use crate::exactla::{axpy, dot, kron_vec, scale, unit, zeros, Mat, Quotient, Subspace};
use crate::field::Field;
use crate::report::{Check, Report};

use super::{mismatch, MarkovError, BASIC, TOWER};

/// One step `M_{k-1} ⊆ M_k` of a tower.
#[derive(Clone, Debug)]
pub struct TowerLevel<F> {
    /// The extension `M_{k-1} ⊆ M_k` with `E_{M_{k-1}}`, trace `T_{k-1}` and
    /// dual bases `{λ⁻¹x_i e_k}, {e_k y_i}`, certified.
    pub cert: MarkovCertificate<F>,
    /// `e_k`, the class of `1 ⊗ 1`.
    pub jones: Vec<F>,
    /// `M_k` as a quotient of `M_{k-1} ⊗ M_{k-1}` (index `a * dim + b`).
    pub quotient: Quotient<F>,
    /// Matrix of `x ↦ x_i x e_k y_i`, `M_{k-1} → M_k`.
    pub phi: Mat<F>,
    pub report: Report,
}

impl<F: Field> TowerLevel<F> {
    pub fn algebra(&self) -> &Algebra<F> {
        self.cert.ext.cond.big()
    }

    pub fn e_down(&self) -> &CondExpectation<F> {
        &self.cert.ext.cond
    }

    pub fn dual_bases(&self) -> &DualBases<F> {
        &self.cert.dual_bases
    }
}

fn require_certified<F: Field>(cert: &MarkovCertificate<F>) -> Result<(F, F), MarkovError> {
    if !cert.all_passed() {
        let w: Vec<String> = cert.report.failures().map(|c| c.to_string()).collect();
        return Err(MarkovError::NotCertified(w.join("; ")));
    }
    let li = cert.lambda_inv.clone().ok_or_else(|| MarkovError::NotCertified("x_i y_i is not a scalar".into()))?;
    let l = li.inv().ok_or_else(|| MarkovError::NotCertified("x_i y_i = 0".into()))?;
    Ok((l, li))
}

/// Realizes `M₁ = M ⊗_N M` for a certified extension `N ⊆ M`, with
/// `(a⊗b)(c⊗d) = aE(bc)⊗d`, `e₁ = 1⊗1` and `E_M(a⊗b) = λab`, and certifies
/// `M ⊆ M₁` in turn.
pub fn basic_construction<F: Field>(cert: &MarkovCertificate<F>) -> Result<TowerLevel<F>, MarkovError> {
    construct_within(cert, 0, usize::MAX)
}

/// `level` is only used to label a [`MarkovError::Budget`].
fn construct_within<F: Field>(cert: &MarkovCertificate<F>, level: usize, budget: usize) -> Result<TowerLevel<F>, MarkovError> {
    let (lambda, lambda_inv) = require_certified(cert)?;
    let cond = &cert.ext.cond;
    let m = cond.big();
    let d = m.dim();
    let (xs, ys) = (&cert.dual_bases.xs, &cert.dual_bases.ys);
    let r = xs.len();

    // a ⊗ b ↦ (a E(b x_i))_i is injective on M ⊗_N M and kills exactly the
    // balancing relations, so its column quotient is M₁.
    let mut real = Mat::zeros(r * d, d * d);
    for b in 0..d {
        let eb = unit(d, b);
        let ebx: Vec<Vec<F>> = xs.iter().map(|x| cond.apply_up(&m.mul(&eb, x))).collect();
        for a in 0..d {
            let ea = unit(d, a);
            for (i, v) in ebx.iter().enumerate() {
                for (k, c) in m.mul(&ea, v).into_iter().enumerate() {
                    if !c.is_zero() {
                        real.set(i * d + k, a * d + b, c);
                    }
                }
            }
        }
    }
    let quotient = Quotient::from_map(&real);
    let n1 = quotient.dim();
    if n1 > budget {
        return Err(MarkovError::Budget { level, dim: n1, budget });
    }
    let classes = quotient.project_matrix().transpose().to_rows();
    let class = |t: &[F]| {
        let mut out: Vec<F> = zeros(n1);
        for (j, c) in t.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &classes[j]);
            }
        }
        out
    };

    let reps = quotient.reps().to_vec();
    let ebc: Vec<Vec<Vec<F>>> = (0..d).map(|b| (0..d).map(|c| cond.apply_up(&m.mul_basis(b, c))).collect()).collect();
    let mut one_t: Vec<F> = zeros(d * d);
    for (x, y) in xs.iter().zip(ys) {
        axpy(&mut one_t, &F::one(), &kron_vec(x, y));
    }
    let labels = reps.iter().map(|&j| format!("{}⊗{}", m.labels()[j / d], m.labels()[j % d])).collect();
    let m1 = Algebra::from_fn(n1, class(&one_t), labels, |i, j| {
        let (a, b) = (reps[i] / d, reps[i] % d);
        let (c, e) = (reps[j] / d, reps[j] % d);
        let v = m.mul(&unit(d, a), &ebc[b][c]);
        let mut out: Vec<F> = zeros(n1);
        for (k, x) in v.iter().enumerate() {
            if !x.is_zero() {
                axpy(&mut out, x, &classes[k * d + e]);
            }
        }
        out
    })?;
    let m1 = relabel_if_long(m1);

    let embed_cols: Vec<Vec<F>> = (0..d)
        .map(|a| {
            let ea = unit(d, a);
            let mut t: Vec<F> = zeros(d * d);
            for (x, y) in xs.iter().zip(ys) {
                axpy(&mut t, &F::one(), &kron_vec(&m.mul(&ea, x), y));
            }
            class(&t)
        })
        .collect();
    let embed = Mat::from_cols(&embed_cols, n1);
    let e_cols: Vec<Vec<F>> = reps.iter().map(|&j| scale(&lambda, &m.mul_basis(j / d, j % d))).collect();
    let e_m = Mat::from_cols(&e_cols, d);
    let incl = Inclusion::new(m.clone(), m1.clone(), embed)?;
    let cond1 = CondExpectation::new(incl, e_m)?;

    let one = m.one();
    let jones = class(&kron_vec(&one, &one));
    let up = |x: &[F]| cond1.incl.up(x);
    let xs1: Vec<Vec<F>> = xs.iter().map(|x| scale(&lambda_inv, &m1.mul(&up(x), &jones))).collect();
    let ys1: Vec<Vec<F>> = ys.iter().map(|y| m1.mul(&jones, &up(y))).collect();
    let mut dual1 = DualBases { xs: xs1, ys: ys1, lambda_inv: None };
    dual1.lambda_inv = scalar_of(&m1, &dual1.product_sum(&m1));

    let upx: Vec<Vec<F>> = xs.iter().map(|x| up(x)).collect();
    let upy: Vec<Vec<F>> = ys.iter().map(|y| up(y)).collect();
    let phi_cols: Vec<Vec<F>> = (0..d)
        .map(|a| {
            let ue = m1.mul(&up(&unit(d, a)), &jones);
            let mut out: Vec<F> = zeros(n1);
            for (x, y) in upx.iter().zip(&upy) {
                axpy(&mut out, &F::one(), &m1.mul_all(&[x, &ue, y]));
            }
            out
        })
        .collect();
    let phi = Mat::from_cols(&phi_cols, n1);

    let cert1 = certify_markov(MarkovExtension { cond: cond1, trace: cert.ext.composite_trace() }, dual1);
    let report = construction_report(cert, &cert1, &jones, &phi, &lambda, &lambda_inv);
    Ok(TowerLevel { cert: cert1, jones, quotient, phi, report })
}

/// Deep levels would get exponentially long tensor labels.
fn relabel_if_long<F: Field>(a: Algebra<F>) -> Algebra<F> {
    if a.labels().iter().any(|l| l.chars().count() > 24) {
        let labels = (0..a.dim()).map(|i| format!("m{i}")).collect();
        a.with_labels(labels)
    } else {
        a
    }
}

fn construction_report<F: Field>(
    cert: &MarkovCertificate<F>,
    cert1: &MarkovCertificate<F>,
    e1: &[F],
    phi: &Mat<F>,
    lambda: &F,
    lambda_inv: &F,
) -> Report {
    let cond = &cert.ext.cond;
    let cond1 = &cert1.ext.cond;
    let m = cond.big();
    let m1 = cond1.big();
    let (d, n1) = (m.dim(), m1.dim());
    let up = |x: &[F]| cond1.incl.up(x);
    let mut r = Report::new("basic construction");

    r.push(Check::from_result("jones-idempotent", BASIC, mismatch(|| "e²".into(), &m1.mul(e1, e1), e1)));
    let ups: Vec<Vec<F>> = (0..d).map(|a| up(&unit(d, a))).collect();
    let mut span = Vec::with_capacity(d * d);
    for a in &ups {
        let ae = m1.mul(a, e1);
        for b in &ups {
            span.push(m1.mul(&ae, b));
        }
    }
    let dim = Subspace::span(n1, span).dim();
    r.push(Check::from_result(
        "generated-by-jones",
        BASIC,
        if dim == n1 { Ok(()) } else { Err(format!("M e M has dim {dim} of {n1}")) },
    ));
    r.push(Check::from_result(
        "expectation-of-jones",
        BASIC,
        mismatch(|| "E_M(e)".into(), &cond1.apply(e1), &scale(lambda, &m.one())),
    ));
    r.push(Check::from_result(
        "jones-compresses",
        BASIC,
        (0..d).try_for_each(|x| {
            let ex = &ups[x];
            let ee = up(&cond.apply_up(&unit(d, x)));
            let exe = m1.mul_all(&[e1, ex, e1]);
            mismatch(|| format!("e x{x} e vs E(x{x}) e"), &exe, &m1.mul(&ee, e1))?;
            mismatch(|| format!("e x{x} e vs e E(x{x})"), &exe, &m1.mul(e1, &ee))
        }),
    ));
    r.push(Check::from_result(
        "next-level-certified",
        BASIC,
        if cert1.all_passed() {
            Ok(())
        } else {
            Err(cert1.report.failures().map(|c| c.to_string()).collect::<Vec<_>>().join("; "))
        },
    ));

    let u = &cert.u;
    let v = &cert1.u;
    let phis: Vec<Vec<F>> = u.basis().iter().map(|x| phi.mul_vec(x)).collect();
    r.push(Check::from_result(
        "centralizer-anti-isomorphism",
        BASIC,
        (|| {
            let image = Subspace::span(n1, phis.clone());
            if image != *v {
                return Err(format!("φ(U) has dim {} but V has dim {}", image.dim(), v.dim()));
            }
            if image.dim() != u.dim() {
                return Err("φ is not injective on U".into());
            }
            for (i, a) in u.basis().iter().enumerate() {
                for (j, b) in u.basis().iter().enumerate() {
                    let lhs = phi.mul_vec(&m.mul(a, b));
                    let rhs = m1.mul(&phis[j], &phis[i]);
                    mismatch(|| format!("φ(u{i}u{j}) vs φ(u{j})φ(u{i})"), &lhs, &rhs)?;
                }
            }
            Ok(())
        })(),
    ));
    r.push(Check::from_result(
        "anti-isomorphism-inverse",
        BASIC,
        u.basis().iter().zip(&phis).enumerate().try_for_each(|(i, (a, pa))| {
            let back = scale(lambda_inv, &cond1.apply(&m1.mul(pa, e1)));
            mismatch(|| format!("λ⁻¹E_M(φ(u{i})e)"), &back, a)
        }),
    ));
    r.push(Check::from_result(
        "jones-expectation-symmetric-on-V",
        BASIC,
        v.basis().iter().enumerate().try_for_each(|(i, x)| {
            mismatch(|| format!("E_M(v{i}e) vs E_M(ev{i})"), &cond1.apply(&m1.mul(x, e1)), &cond1.apply(&m1.mul(e1, x)))
        }),
    ));
    let t0 = cert.ext.composite_trace();
    let t1 = cert1.ext.composite_trace();
    r.push(Check::from_result(
        "trace-transfer",
        BASIC,
        u.basis().iter().zip(&phis).enumerate().try_for_each(|(i, (a, pa))| {
            let (l, rr) = (dot(&t1, pa), dot(&t0, a));
            if l == rr {
                Ok(())
            } else {
                Err(format!("T₁(φ(u{i})) = {l} but T₀(u{i}) = {rr}"))
            }
        }),
    ));
    r
}

/// `N ⊆ M ⊆ M₁ ⊆ … ⊆ M_depth`.
#[derive(Clone, Debug)]
pub struct Tower<F> {
    pub base_cert: MarkovCertificate<F>,
    /// `levels[k - 1]` is `M_{k-1} ⊆ M_k`.
    pub levels: Vec<TowerLevel<F>>,
    pub report: Report,
}

impl<F: Field> Tower<F> {
    fn from_levels(base_cert: MarkovCertificate<F>, levels: Vec<TowerLevel<F>>) -> Self {
        let mut t = Tower { base_cert, levels, report: Report::new("Jones tower") };
        t.report = tower_report(&t);
        t
    }

    /// The first `depth` levels of the tower.
    pub fn truncate(mut self, depth: usize) -> Self {
        self.levels.truncate(depth);
        Tower::from_levels(self.base_cert, self.levels)
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn lambda(&self) -> F {
        self.base_cert.lambda().expect("certified")
    }

    pub fn lambda_inv(&self) -> F {
        self.base_cert.lambda_inv.clone().expect("certified")
    }

    pub fn n(&self) -> &Algebra<F> {
        self.base_cert.ext.cond.small()
    }

    /// `M_k`, with `M_0 = M`.
    pub fn m(&self, k: usize) -> &Algebra<F> {
        self.e_down(k).big()
    }

    /// `E_{M_{k-1}}: M_k → M_{k-1}`; for `k = 0` the base `E: M → N`.
    pub fn e_down(&self, k: usize) -> &CondExpectation<F> {
        if k == 0 {
            &self.base_cert.ext.cond
        } else {
            &self.levels[k - 1].cert.ext.cond
        }
    }

    /// `e_k ∈ M_k`, `k ≥ 1`.
    pub fn jones(&self, k: usize) -> &[F] {
        &self.levels[k - 1].jones
    }

    /// `e_k` lifted into `M_to`.
    pub fn jones_in(&self, k: usize, to: usize) -> Vec<F> {
        self.lift(self.jones(k), k, to)
    }

    /// `T_k = T ∘ E ∘ E_M ∘ … ∘ E_{M_{k-1}}` on `M_k`.
    pub fn trace(&self, k: usize) -> Vec<F> {
        if k == 0 {
            self.base_cert.ext.composite_trace()
        } else {
            self.levels[k - 1].cert.ext.composite_trace()
        }
    }

    /// Dimensions of `N, M, M₁, …`.
    pub fn dims(&self) -> Vec<usize> {
        let mut out = vec![self.n().dim()];
        out.extend((0..=self.depth()).map(|k| self.m(k).dim()));
        out
    }

    /// `M_from → M_to`.
    pub fn lift(&self, x: &[F], from: usize, to: usize) -> Vec<F> {
        let mut v = x.to_vec();
        for k in from + 1..=to {
            v = self.e_down(k).incl.up(&v);
        }
        v
    }

    /// `N → M_to`.
    pub fn lift_n(&self, x: &[F], to: usize) -> Vec<F> {
        self.lift(&self.e_down(0).incl.up(x), 0, to)
    }

    pub fn lift_matrix(&self, from: usize, to: usize) -> Mat<F> {
        let mut m = Mat::identity(self.m(from).dim());
        for k in from + 1..=to {
            m = self.e_down(k).incl.embed.mul(&m);
        }
        m
    }

    pub fn lift_n_matrix(&self, to: usize) -> Mat<F> {
        self.lift_matrix(0, to).mul(&self.e_down(0).incl.embed)
    }
}

/// Iterates the basic construction `depth` times and checks the relations
/// among the Jones idempotents and the Markov property of the traces.
pub fn build_tower<F: Field>(cert: MarkovCertificate<F>, depth: usize) -> Result<Tower<F>, MarkovError> {
    build_tower_within(cert, depth, usize::MAX)
}

/// [`build_tower`], stopping with [`MarkovError::Budget`] as soon as a
/// level exceeds `budget` dimensions.
pub fn build_tower_within<F: Field>(cert: MarkovCertificate<F>, depth: usize, budget: usize) -> Result<Tower<F>, MarkovError> {
    require_certified(&cert)?;
    if cert.ext.cond.big().dim() > budget {
        return Err(MarkovError::Budget { level: 0, dim: cert.ext.cond.big().dim(), budget });
    }
    let mut levels: Vec<TowerLevel<F>> = Vec::with_capacity(depth);
    for k in 0..depth {
        let prev = if k == 0 { &cert } else { &levels[k - 1].cert };
        levels.push(construct_within(prev, k + 1, budget)?);
    }
    Ok(Tower::from_levels(cert, levels))
}

/// Builds up to `depth` levels, stopping quietly before the first level
/// over `budget`.
pub fn build_tower_capped<F: Field>(cert: MarkovCertificate<F>, depth: usize, budget: usize) -> Result<Tower<F>, MarkovError> {
    require_certified(&cert)?;
    if cert.ext.cond.big().dim() > budget {
        return Err(MarkovError::Budget { level: 0, dim: cert.ext.cond.big().dim(), budget });
    }
    let mut levels: Vec<TowerLevel<F>> = Vec::with_capacity(depth);
    for k in 0..depth {
        let prev = if k == 0 { &cert } else { &levels[k - 1].cert };
        match construct_within(prev, k + 1, budget) {
            Ok(lvl) => levels.push(lvl),
            Err(MarkovError::Budget { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(Tower::from_levels(cert, levels))
}

fn tower_report<F: Field>(t: &Tower<F>) -> Report {
    let mut r = Report::new("Jones tower");
    for (i, lvl) in t.levels.iter().enumerate() {
        for c in &lvl.report.checks {
            let mut c = c.clone();
            c.name = format!("M{}: {}", i + 1, c.name);
            r.push(c);
        }
    }
    let n = t.depth();
    let (lambda, lambda_inv) = (t.lambda(), t.lambda_inv());
    let top = t.m(n);
    let es: Vec<Vec<F>> = (1..=n).map(|k| t.jones_in(k, n)).collect();

    r.push(Check::from_result(
        "braid-relations",
        TOWER,
        (1..n).try_for_each(|i| {
            let (a, b) = (&es[i - 1], &es[i]);
            mismatch(|| format!("e{i}e{}e{i}", i + 1), &top.mul_all(&[a, b, a]), &scale(&lambda, a))?;
            mismatch(|| format!("e{}e{i}e{}", i + 1, i + 1), &top.mul_all(&[b, a, b]), &scale(&lambda, b))
        }),
    ));
    r.push(Check::from_result(
        "distant-jones-commute",
        TOWER,
        (1..=n).try_for_each(|i| {
            (i + 2..=n).try_for_each(|j| {
                let (a, b) = (&es[i - 1], &es[j - 1]);
                mismatch(|| format!("e{i}e{j} vs e{j}e{i}"), &top.mul(a, b), &top.mul(b, a))
            })
        }),
    ));
    r.push(Check::from_result(
        "pimsner-popa",
        TOWER,
        (1..=n).try_for_each(|k| {
            let alg = t.m(k);
            let cond = t.e_down(k);
            let e = t.jones(k);
            (0..alg.dim()).try_for_each(|x| {
                let ex = unit(alg.dim(), x);
                let xe = alg.mul(&ex, e);
                let rhs = scale(&lambda_inv, &alg.mul(&cond.apply_up(&xe), e));
                mismatch(|| format!("x{x} e{k} in M{k}"), &xe, &rhs)?;
                let ex_ = alg.mul(e, &ex);
                let rhs = scale(&lambda_inv, &alg.mul(e, &cond.apply_up(&ex_)));
                mismatch(|| format!("e{k} x{x} in M{k}"), &ex_, &rhs)
            })
        }),
    ));
    r.push(Check::from_result(
        "markov-trace-property",
        TOWER,
        (1..=n).try_for_each(|k| {
            let (tk, tp) = (t.trace(k), t.trace(k - 1));
            let below = t.m(k - 1).dim();
            (0..below).try_for_each(|x| {
                let xe = t.m(k).mul(&t.lift(&unit(below, x), k - 1, k), t.jones(k));
                let (l, rr) = (dot(&tk, &xe), lambda.mul_ref(&tp[x]));
                if l == rr {
                    Ok(())
                } else {
                    Err(format!("T{k}(x{x} e{k}) = {l} but λT{}(x{x}) = {rr}", k - 1))
                }
            })
        }),
    ));
    let t1 = dot(&t.trace(n), top.unit_ref());
    r.push(if t1.is_one() {
        Check::pass("trace-normalized", TOWER)
    } else {
        Check::fail("trace-normalized", TOWER, format!("T{n}(1) = {t1}"))
    });
    r
}
