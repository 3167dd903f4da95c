//! Jones towers of Markov extensions and the depth-2 machinery built on
//! them: the centralizer lattice, the expectations onto `A` and `B`, the
//! duality pairing, the weak Hopf algebra derived on `B`, its action on
//! `M₁` and the two smash-product isomorphisms.
//!
//! Notation: `N ⊆ M ⊆ M₁ ⊆ M₂ ⊆ …`, `U = C_M(N)`, `V = C_{M₁}(M)`,
//! `W = C_{M₂}(M₁)`, `A = C_{M₁}(N)`, `B = C_{M₂}(M)`, `C = C_{M₂}(N)`.
//! Everything from the lattice onwards is computed in the coordinates of
//! `M₂`.

use thiserror::Error;

use crate::action::ActionError;
use crate::algebra::AlgebraError;
use crate::exactla::LaError;
use crate::whopf::WhError;

mod actions;
mod derive;
mod lattice;
mod tower;

pub use actions::{action_a_on_m, action_b_on_m1, phi_iso, psi_iso, AlgebraIso, DerivedAction};
pub use derive::{derive_whopf, pairing, DerivedWeakHopf, PairingData};
pub use lattice::{centralizers, conditional_expectations, depth2_check, CentralizerLattice, Depth2Data, Expectations, Frame};
pub use tower::{basic_construction, build_tower, build_tower_capped, build_tower_within, Tower, TowerLevel};

pub const BASIC: &str = "basic construction";
pub const TOWER: &str = "Jones tower";
pub const LATTICE: &str = "centralizer lattice";
pub const EXPECTATIONS: &str = "depth-two expectations";
pub const PAIRING: &str = "duality pairing";
pub const DERIVED: &str = "derived weak Hopf algebra";
pub const ACTION: &str = "action on the tower";

/// Which half of the depth-2 condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth2Half {
    /// `E_M` has no dual bases in `A`.
    A,
    /// `E_{M₁}` has no dual bases in `B`.
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkovError {
    #[error("extension is not a certified symmetric Markov extension: {0}")]
    NotCertified(String),
    #[error("tower has depth {have}, need {need}")]
    TooShallow { need: usize, have: usize },
    #[error("not depth two ({half:?} half): {reason}")]
    NotDepthTwo { half: Depth2Half, reason: String },
    #[error("M{level} has dimension {dim}, over the budget of {budget}")]
    Budget { level: usize, dim: usize, budget: usize },
    #[error("pairing is degenerate: {0}")]
    SingularGram(String),
    #[error("{stage} failed: {witness}")]
    Failed { stage: String, witness: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linear(#[from] LaError),
    #[error(transparent)]
    WeakHopf(#[from] WhError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// Runs the whole depth-2 pipeline on a tower of depth at least two.
pub fn derive_all<F: crate::field::Field>(t: &Tower<F>) -> Result<Pipeline<F>, MarkovError> {
    let frame = Frame::new(t)?;
    let lattice = centralizers(t, &frame)?;
    let d2 = depth2_check(t, &frame, &lattice)?;
    let ex = conditional_expectations(t, &frame, &lattice, &d2)?;
    let pd = pairing(&frame, &lattice, &ex)?;
    let dw = derive_whopf(&frame, &lattice, &d2, &ex, &pd)?;
    Ok(Pipeline { frame, lattice, d2, ex, pairing: pd, derived: dw })
}

/// Every stage of [`derive_all`].
#[derive(Clone, Debug)]
pub struct Pipeline<F> {
    pub frame: Frame<F>,
    pub lattice: CentralizerLattice<F>,
    pub d2: Depth2Data<F>,
    pub ex: Expectations<F>,
    pub pairing: PairingData<F>,
    pub derived: DerivedWeakHopf<F>,
}

impl<F: crate::field::Field> Pipeline<F> {
    /// Lattice, expectation, pairing and derived-structure checks in order.
    pub fn report(&self) -> crate::report::Report {
        let mut r = crate::report::Report::new("depth-two derivation");
        r.extend(self.lattice.report.clone());
        r.extend(self.d2.report.clone());
        r.extend(self.ex.report.clone());
        r.extend(self.pairing.report.clone());
        r.extend(self.derived.report.clone());
        r
    }
}

/// `Ok` when equal, else the first differing coordinate.
pub(crate) fn mismatch<F: crate::field::Field>(what: impl FnOnce() -> String, lhs: &[F], rhs: &[F]) -> Result<(), String> {
    match crate::exactla::first_difference(lhs, rhs) {
        None => Ok(()),
        Some(k) => Err(format!("{}: coordinate {k} is {} vs {}", what(), lhs[k], rhs[k])),
    }
}

/// `Ok` when `sub ⊆ sup`.
fn contained<F: crate::field::Field>(what: &str, sub: &crate::exactla::Subspace<F>, sup: &crate::exactla::Subspace<F>) -> Result<(), String> {
    if sup.contains_subspace(sub) {
        Ok(())
    } else {
        Err(format!("{what}: dim {} is not inside dim {}", sub.dim(), sup.dim()))
    }
}

/// `Ok` when the subspaces are equal.
fn same_space<F: crate::field::Field>(what: &str, x: &crate::exactla::Subspace<F>, y: &crate::exactla::Subspace<F>) -> Result<(), String> {
    if x == y {
        Ok(())
    } else {
        Err(format!("{what}: dims {} and {}, intersection {}", x.dim(), y.dim(), x.intersection(y).dim()))
    }
}
