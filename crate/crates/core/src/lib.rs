//! Exact equivariant quantum K-theory of type-A Grassmannians.
//!
//! The crate is layered bottom-up:
//!
//! - [`weyl`]: permutations, parabolic cosets, Bruhat order, partitions and
//!   Schubert index transport along flag projections.
//! - [`laurent`] and [`series`]: the character ring of the torus and
//!   eventually constant q-series over it.
//! - [`gkm`]: `K_T` of partial flag varieties by fixed-point localization.
//! - [`quantum`]: curve neighborhoods, projected Gromov-Witten classes and
//!   the quantum product on `Gr(m,n)`, with verification routines.
//! - [`oracles`]: slow independent reference computations.
//! - [`table`]: the JSON structure-table format.
//! - [`cli`]: the `qk` command line; [`cache`] keeps restriction tables on disk.

pub mod cache;
pub mod cli;
mod dense;
pub mod error;
pub mod gkm;
pub mod laurent;
pub mod oracles;
pub mod quantum;
pub mod series;
pub mod table;
pub mod weyl;

pub use error::{Error, Result};
