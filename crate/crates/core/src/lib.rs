//! The zero-order Bessel distribution K(σ), the Laplace-family laws used to approximate
//! it, and the numerical oracles that keep every closed form honest.
// `!(x > 0.0)` is the NaN-rejecting guard throughout; reference constants keep all their digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

mod error;
mod real;

pub mod approx;
pub mod checks;
pub mod dist;
pub mod oracle;
pub mod quadrature;
pub mod sampling;
pub mod specfun;

pub use dist::{
    BesselK, ClassicalLaplace, Distribution, DistributionSpec, LaplaceMean, MartinMaas, Moments, SymmetricGAL,
    ZeroMeanNormal,
};
pub use error::{Error, Result};
pub use quadrature::{integrate, QuadResult, QuadratureConfig};
pub use real::Real;

pub type Dist64 = DistributionSpec<f64>;
pub type Dist32 = DistributionSpec<f32>;
