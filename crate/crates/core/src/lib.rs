//! Bimodal alpha-skew-logistic distribution.
//!
//! Exact density, cdf, mgf and moments on polylogarithm and zeta kernels,
//! mode analysis, random variate generation, location-scale maximum
//! likelihood fitting and AIC/BIC/likelihood-ratio model comparison.

pub mod data;
pub mod dist;
pub mod error;
pub mod extensions;
pub mod fit;
pub mod gof;
pub mod models;
pub mod optim;
pub mod quad;
pub mod sampler;
pub mod specfn;

pub use dist::{
    cdf_limit_blg4, mgf_limit_blg4, normalizing_constant, pdf_limit_blg4, ModeReport, MomentSet,
    StandardBaslg, SymmetricComponent,
};
pub use error::{Error, Result};
