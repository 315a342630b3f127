//! Sparse multivariate polynomials and power series truncated by total degree.
//!
//! [`Poly`] is the exact sparse polynomial. [`TruncatedSeries`] pairs one with
//! a truncation degree `D` and stands for a power series known modulo terms
//! of total degree `> D`. [`FormalMap`] and [`SeriesMatrix`] are the vector
//! and matrix layers used for Jacobians, Hessians and map composition.

mod map;
mod matrix;
mod poly;
mod truncated;

pub use map::FormalMap;
pub use matrix::SeriesMatrix;
pub use poly::{Monomial, Poly};
pub use truncated::TruncatedSeries;

use std::fmt;

/// Order `o(·)` of a series: the lowest total degree carrying a nonzero
/// coefficient, or `Infinite` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(d) => Some(d),
            Order::Infinite => None,
        }
    }

    pub fn is_at_least(self, d: u32) -> bool {
        self >= Order::Finite(d)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(d) => write!(f, "{d}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}
