//! Certifying self-adjointness of inductive algebras.
//!
//! An inductive algebra for a unitary representation `π` of a group `G` on
//! `C^d` is an abelian algebra of matrices `A` with `π(g) A π(g)⁻¹ = A` for
//! all `g`. For compact `G` and irreducible `π`, such algebras are closed
//! under the adjoint. This crate checks that claim numerically, stage by
//! stage, for finite groups, the circle and `O(2)`, and implements the
//! underlying idempotent construction for algebras of functions.
//!
//! - [`numkit`]: dense complex linear algebra with explicit tolerances
//! - [`matalg`]: matrix algebras, weights, nilradical, Gelfand table
//! - [`grouprep`]: group models, commutants, Haar averaging, builtins
//! - [`inductive`]: normalization, weight orbits, the certificate pipeline
//! - [`linf`]: level-set idempotents and the counterexample quotients

pub mod grouprep;
pub mod inductive;
pub mod linf;
pub mod matalg;
pub mod numkit;

pub use numkit::{Matrix, Tolerances, Vector};
