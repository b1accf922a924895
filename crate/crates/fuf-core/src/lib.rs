//! Combinatorial and numerical toolkit for the free unitary quantum groups
//! `FU_F` and the random walk on their Gromov boundary.
//!
//! The crate covers, at desk scale and in configurable-precision arithmetic:
//!
//! - [`fusion`] — word arithmetic on `Irr(FU_F)` (the free monoid on
//!   `{u, ū}`) and the tensor-decomposition calculus;
//! - [`qarith`] — q-numbers, the parameters `q` and `κ`, quantum dimensions
//!   and the spectral bounds for the Woronowicz matrix built from `F`;
//! - [`traces`] — the convolution algebra of quantum traces `qTr_x`, its
//!   level aggregation, and the trace-restriction gap bound;
//! - [`boundary`] — the harmonic measure on the boundary of the Cayley tree,
//!   in closed form and as a recursion limit, with non-atomicity bounds;
//! - [`walk`] — the induced classical Markov chain on the tree, exact
//!   transient distributions and seeded Monte Carlo of the exit law;
//! - [`lemmas`] — randomized checks of two finite-dimensional operator-norm
//!   inequalities and of a rotation-action norm lower bound;
//! - [`faithfulness`] — the sandwich certificates and disjoint-support
//!   scans behind strong C*-faithfulness of the boundary action.

pub mod boundary;
mod eigen;
mod seeding;
pub mod faithfulness;
pub mod fusion;
pub mod lemmas;
pub mod qarith;
pub mod real;
pub mod traces;
pub mod walk;

pub use fusion::{Decomposition, Letter, Word};
pub use qarith::{QContext, QSpectrum};
pub use real::{Real, RealCtx};
