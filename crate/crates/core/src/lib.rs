//! Exact spectral computations for binomial Cayley graphs.
//!
//! A weighted normal Cayley graph on a finite group `G` has adjacency entry
//! `ω(h g⁻¹)` at position `(g, h)`, where `ω` is a natural-valued class
//! function invariant under inversion. Its binomial variant replaces `ω` by
//! `C(ω, k)`. This crate builds those graphs for the symmetric groups `S_m`
//! (weighted by fixed points) and the groups `(Z_m)^n` (weighted by zero
//! coordinates), computes their spectra from irreducible characters, and
//! proves the results by exact rational linear algebra.
//!
//! The same matrices govern particle-box systems: the Gram matrix of the
//! `k`-particle restriction map is exactly a binomial Cayley adjacency
//! matrix, so kernels, ranks and degeneracies of marginal reconstruction
//! problems follow from the spectra.
//!
//! Modules:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`groups`] | `S_m`, `(Z_m)^n`, conjugacy classes, character values |
//! | [`partitions`] | partitions, rim hooks, Murnaghan–Nakayama, crop counts |
//! | [`rsk`] | Robinson–Schensted insertion and increasing subsequences |
//! | [`cayley`] | weight functions and adjacency matrices |
//! | [`spectra`] | closed-form and character-theoretic spectra, verification |
//! | [`exactla`] | exact rational linear algebra and simplex feasibility |
//! | [`particlebox`] | restriction matrices, marginals, degeneracy, simulation |
//! | [`suite`] | end-to-end verification checks with pass/fail reports |

pub mod cayley;
pub mod error;
pub mod exactla;
pub mod groups;
pub mod particlebox;
pub mod partitions;
pub mod rational;
pub mod rsk;
pub mod spectra;
pub mod suite;

pub use error::{Error, Result};
pub use rational::Rat;
