//! Bochner integration over finite-dimensional ordered Banach spaces.
//!
//! The crate models ordered Banach spaces with polyhedral cones and
//! LP-representable norms ([`space`]), the dominating-element machinery of
//! absolutely dominating norms ([`cone_analysis`]), atomic measure spaces and
//! vector-valued integrals ([`measure`], [`bochner`]), Banach covers with
//! their joins and cover integrals ([`covers`]), and convolution on discrete
//! groups computed as a cover integral ([`convolution`]). All infima are
//! solved by the dense simplex in [`lp`].

pub mod bochner;
pub mod cli;
pub mod cone_analysis;
pub mod convolution;
pub mod covers;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod measure;
pub mod space;
pub mod tol;

pub use error::{OrbaError, Result};
pub use linalg::Matrix;
pub use space::{ConeSpec, NormSpec, OrderedSpace, SpaceId, Vector};
