//! Small Markov extensions used by the tests, the acceptance suite and the
//! CLI's built-in examples.

use crate::algebra::{certify_markov, find_dual_bases, Algebra, AlgebraError, CondExpectation, Inclusion, MarkovCertificate, MarkovExtension};
use crate::exactla::{unit, zeros, Mat};
use crate::field::Field;

fn frac<F: Field>(p: i64, q: i64) -> Result<F, AlgebraError> {
    F::from_i64(p).div_ref(&F::from_i64(q)).ok_or_else(|| AlgebraError::BadExpectation(format!("{q} is not invertible in the field")))
}

/// `k ⊆ k^n` with `E` the average of the coordinates.
pub fn scalar_in_diagonal<F: Field>(n: usize) -> Result<MarkovExtension<F>, AlgebraError> {
    let big = Algebra::diagonal(n);
    let e = Mat::from_rows(vec![vec![frac(1, n as i64)?; n]], n)?;
    let cond = CondExpectation::new(Inclusion::scalars(big), e)?;
    Ok(MarkovExtension { cond, trace: vec![F::one()] })
}

/// `k ⊆ M_n(k)` with `E = tr / n`.
pub fn scalar_in_matrix<F: Field>(n: usize) -> Result<MarkovExtension<F>, AlgebraError> {
    weighted_scalar_in_matrix(&vec![F::one(); n])
}

/// `k ⊆ M_n(k)` with `E(x) = Σ d_i x_ii / Σ d_i`. Symmetric only when the
/// weights are all equal; used as a negative control.
pub fn weighted_scalar_in_matrix<F: Field>(weights: &[F]) -> Result<MarkovExtension<F>, AlgebraError> {
    let n = weights.len();
    let mut total = F::zero();
    for w in weights {
        total.add_assign_ref(w);
    }
    let inv = total.inv().ok_or_else(|| AlgebraError::BadExpectation("weights sum to zero".into()))?;
    let mut row: Vec<F> = zeros(n * n);
    for (i, w) in weights.iter().enumerate() {
        row[i * n + i] = w.mul_ref(&inv);
    }
    let cond = CondExpectation::new(Inclusion::scalars(Algebra::matrix(n)), Mat::from_rows(vec![row], n * n)?)?;
    Ok(MarkovExtension { cond, trace: vec![F::one()] })
}

/// Diagonal `k^n ⊆ M_n(k)` with the diagonal projection and the uniform
/// trace on `k^n`.
pub fn diagonal_in_matrix<F: Field>(n: usize) -> Result<MarkovExtension<F>, AlgebraError> {
    let d = n * n;
    let embed = Mat::from_cols(&(0..n).map(|i| unit(d, i * n + i)).collect::<Vec<_>>(), d);
    let incl = Inclusion::new(Algebra::diagonal(n), Algebra::matrix(n), embed.clone())?;
    let cond = CondExpectation::new(incl, embed.transpose())?;
    Ok(MarkovExtension { cond, trace: vec![frac(1, n as i64)?; n] })
}

/// `M_n(k) ⊆ M_n(k)` with `E = id` and `T = tr / n`. Index 1 and trivial
/// relative commutant; in finite dimensions `C_M(N) = k` forces `N = M`.
pub fn identity_extension<F: Field>(n: usize) -> Result<MarkovExtension<F>, AlgebraError> {
    let alg = Algebra::matrix(n);
    let d = n * n;
    let incl = Inclusion::new(alg.clone(), alg, Mat::identity(d))?;
    let cond = CondExpectation::new(incl, Mat::identity(d))?;
    let mut trace: Vec<F> = zeros(d);
    for i in 0..n {
        trace[i * n + i] = frac(1, n as i64)?;
    }
    Ok(MarkovExtension { cond, trace })
}

/// Finds dual bases and runs the full certificate.
pub fn certify<F: Field>(ext: MarkovExtension<F>) -> Result<MarkovCertificate<F>, AlgebraError> {
    let db = find_dual_bases(&ext.cond, None)?;
    Ok(certify_markov(ext, db))
}

/// The three running examples by name: `q-in-q2`, `q-in-m2`, `q2-in-m2`.
pub fn standard<F: Field>(name: &str) -> Option<MarkovExtension<F>> {
    match name {
        "q-in-q2" => scalar_in_diagonal(2).ok(),
        "q-in-m2" => scalar_in_matrix(2).ok(),
        "q2-in-m2" => diagonal_in_matrix(2).ok(),
        "m2-in-m2" => identity_extension(2).ok(),
        _ => None,
    }
}

pub const STANDARD: [&str; 3] = ["q-in-q2", "q-in-m2", "q2-in-m2"];
