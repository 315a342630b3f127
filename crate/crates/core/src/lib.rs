//! Exact inversion of formal maps `F(z) = z - H(z)` over Q(i).
//!
//! The inverse of the deformation `F_t = z - tH` is written `G_t = z + tN_t`
//! with `N_t = Σ_m N_[m] t^{m-1}`. The slices satisfy
//!
//! ```text
//! N_[1] = H,    (m-1)·N_[m] = Σ_{k+l=m} JN_[k] · N_[l]
//! ```
//!
//! and `G = z + Σ_m N_[m]`. For gradient maps `H = ∇P` the inverse is again
//! a gradient, `N_t = ∇Q_t`, where `Q_t` solves the potential form of the
//! inviscid Burgers equation `∂Q/∂t = ½⟨∇Q, ∇Q⟩` with `Q_0 = P`. Its slices
//! also have a closed form as a weighted sum over binary rooted trees.
//!
//! Modules, bottom-up:
//! - [`coefficients`]: the field Q(i).
//! - [`series`]: sparse polynomials, degree-truncated series, maps, matrices.
//! - [`graded`]: series in an auxiliary parameter `t`.
//! - [`inversion`]: the general recurrence and its verification checks.
//! - [`symmetric`]: the gradient case, Burgers solver, Legendre transform.
//! - [`trees`]: binary rooted trees and the tree expansion.

pub mod coefficients;
pub mod error;
pub mod graded;
pub mod inversion;
pub mod series;
pub mod symmetric;
pub mod trees;

#[cfg(test)]
mod testutil;

pub use coefficients::GaussianRational;
pub use error::{Error, Result};
pub use inversion::NSequence;
pub use series::{FormalMap, Monomial, Order, Poly, SeriesMatrix, TruncatedSeries};
pub use symmetric::QSequence;
pub use trees::{BinaryTree, GeneralTree};
