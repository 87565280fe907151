//! The generalised asymmetric t (GAT) distribution.
//!
//! GAT is obtained by pushing a type IV generalised logistic variate through
//! the inverse-arcsinh map `x = μ + φ·sinh(y − ln c)`. It has six parameters:
//! location `μ`, scale `φ`, tail power `ν`, scale asymmetry `c`, tail-power
//! asymmetry `r` and tail onset `α`. With `c = r = α = 1` it is a rescaled
//! Student t; in the limit `α → 0`, `ν → ∞` with `να` fixed it becomes
//! Johnson's S_U.
//!
//! The crate provides the density, distribution function, quantiles, mode,
//! moments, sampling, value-at-risk and expected shortfall
//! ([`gat`]), the split-t baseline ([`ast`]), maximum-likelihood fitting
//! ([`fit`]), Anderson–Darling goodness of fit with a parametric bootstrap
//! ([`gof`]) and the command-line front end ([`cli`]).

#![allow(clippy::excessive_precision)]

pub mod ast;
pub mod cli;
pub mod error;
pub mod fit;
pub mod fixtures;
pub mod gat;
pub mod gof;
pub mod specfun;

pub use ast::AstParams;
pub use error::{GatError, Result};
pub use gat::{GatParams, MomentReport, PitValue, RiskReport, ShapeConstants};
pub use specfun::RandomStream;
