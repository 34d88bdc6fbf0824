//! # polywalk
//!
//! MCMC sampling of densities restricted to linearly constrained domains,
//! built around the Hit-&-Run proposal mechanism and its higher-order
//! variants, plus the Gaussian baseline samplers and a benchmark harness.
//!
//! Samplers: `RWMH`, `MALA`, `smMALA`, `Dikin`, `MAPLA`, and the Hit-&-Run
//! family `HR`, `LHR`, `smHR`, `smLHR`. The HR family proposes along feasible
//! chords of the polytope, so every proposal satisfies the constraints by
//! construction; the Gaussian family relies on the Metropolis-Hastings
//! filter to reject infeasible candidates.
//!
//! ## Example: sampling a truncated Gaussian on the unit box
//!
//! ```rust
//! use polywalk::chain::{run_chain, ChainConfig};
//! use polywalk::geometry::make_diamond;
//! use polywalk::proposals::{make_kernel, Parametrization, SamplerKind};
//! use polywalk::targets::{make_gaussian, GaussianKind};
//! use std::sync::Arc;
//!
//! let poly = Arc::new(make_diamond(2, 90.0).unwrap());
//! let target = Arc::new(make_gaussian(GaussianKind::Iso, 2).unwrap());
//! let kernel = make_kernel(
//!     SamplerKind::Hr,
//!     Some(target.clone()),
//!     None,
//!     poly.clone(),
//!     0.5,
//!     Parametrization::Epsilon,
//! )
//! .unwrap();
//! let x0 = polywalk::chain::default_x0(&poly).unwrap();
//! let cfg = ChainConfig { n_kept: 1000, thin: 1, burn_in: 0, seed: 7, tol: 1e-9 };
//! let (samples, stats) = run_chain(kernel.as_ref(), target.as_ref(), &poly, &x0, &cfg).unwrap();
//! assert_eq!(samples.nrows(), 1000);
//! assert!(stats.acceptance_rate > 0.0);
//! ```

pub mod bench;
pub mod chain;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod proposals;
pub mod steps;
pub mod targets;

pub use error::{Error, Result};
pub use geometry::Polytope;
