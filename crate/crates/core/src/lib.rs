#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

//! Group Fourier and Gabor transforms on ℝⁿ, ℝ×ℤ_m, the Heisenberg group H₁
//! and the motion group M(2), with Plancherel, isometry and uncertainty
//! verifiers.

pub mod cli;
pub mod error;
pub mod gabor;
pub mod groups;
pub mod io;
pub mod numerics;
pub mod transforms;
pub mod uncertainty;

pub use error::{Error, Result};
