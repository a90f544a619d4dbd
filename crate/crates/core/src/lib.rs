//! Exact-arithmetic toolkit for Omega-stability over abelian GIT targets
//! with R-charge.
//!
//! The library analyses R-charged torus packages (a torus acting on a vector
//! space together with a distinguished R-charge character and a polarization),
//! decides Omega-stability of combinatorially encoded LG-quasimaps, enumerates
//! candidate walls in the stability parameter `A`, runs the blowup and
//! contraction engines used in stable reduction, and emits boundedness
//! certificates.  Every computation is exact: integers, arbitrary-precision
//! rationals, and integer lattice normal forms.  No floating point anywhere.
//!
//! Module map:
//! - [`package`]: torus packages, bi-degrees, slopes, support classification,
//!   invariant-monomial enumeration, re-indexing and theta-weight
//!   normalization.
//! - [`quasimap`]: dual-graph quasimap encodings and the Omega-1/2/3 checks.
//! - [`walls`]: candidate wall enumeration in the parameter `A`.
//! - [`msp`]: the finite-automorphism criterion for irreducible MSP
//!   components.
//! - [`reduction`]: the local blowup engine on order pairs.
//! - [`fiber`]: fiber trees and the tail/bridge contraction engine.
//! - [`bounded`]: theta-ray selection, degree polytopes, component bounds,
//!   boundedness certificates.
//! - [`catalog`]: built-in example packages.
//! - [`io`]: JSON encodings of all external interfaces.
//! - [`cli`]: the `glsm-stab` command-line tool.

pub mod error;
pub mod rat;
pub mod lattice;
pub mod lp;
pub mod par;
pub mod package;
pub mod quasimap;
pub mod msp;
pub mod walls;
pub mod reduction;
pub mod fiber;
pub mod bounded;
pub mod catalog;
pub mod io;
pub mod cli;

pub use error::{Error, Result};
pub use rat::Rat;
