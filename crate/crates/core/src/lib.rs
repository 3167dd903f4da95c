//! Exact computations with finite-dimensional weak Hopf algebras and
//! depth-2 Markov extensions.
//!
//! Everything is generic over [`Field`]; the aliases below fix the scalar
//! to the rationals [`Q`] or the prime field [`F2`].

pub mod action;
pub mod algebra;
pub mod appendix;
pub mod corpus;
pub mod exactla;
pub mod field;
pub mod groupoid;
pub mod markov;
pub mod report;
pub mod whopf;

pub use field::{Field, Fp, F2, Q};
pub use report::{Check, Report};

pub type QAlgebra = algebra::Algebra<Q>;
pub type QWeakHopf = whopf::WeakHopf<Q>;
pub type QMarkovExtension = algebra::MarkovExtension<Q>;
pub type QTower = markov::Tower<Q>;
pub type QMat = exactla::Mat<Q>;

pub type F2Algebra = algebra::Algebra<F2>;
pub type F2WeakHopf = whopf::WeakHopf<F2>;
