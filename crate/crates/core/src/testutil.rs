//! Small constructors shared by the unit tests.

use crate::coefficients::GaussianRational;
use crate::series::{FormalMap, Monomial, Poly, TruncatedSeries};

pub fn q(s: &str) -> GaussianRational {
    s.parse().unwrap()
}

pub fn series(nvars: usize, trunc: u32, terms: &[(&[u32], &str)]) -> TruncatedSeries {
    TruncatedSeries::new(
        Poly::from_terms(nvars, terms.iter().map(|(e, c)| (e.iter().copied(), q(c)))).unwrap(),
        trunc,
    )
}

/// One-variable series from `(exponent, coefficient)` pairs.
pub fn series1(trunc: u32, terms: &[(u32, &str)]) -> TruncatedSeries {
    TruncatedSeries::new(
        Poly::from_terms(1, terms.iter().map(|&(e, c)| ([e], q(c)))).unwrap(),
        trunc,
    )
}

pub fn map(components: Vec<TruncatedSeries>) -> FormalMap {
    FormalMap::new(components).unwrap()
}

/// `(z1 + i·z2)^d` expanded with the binomial theorem.
pub fn linear_power(d: u32, trunc: u32) -> TruncatedSeries {
    let mut binom = 1i64;
    let mut p = Poly::zero(2);
    for k in 0..=d {
        p.add_term(
            Monomial::new([d - k, k]),
            GaussianRational::from(binom) * GaussianRational::i().pow(k),
        );
        binom = binom * i64::from(d - k) / i64::from(k + 1);
    }
    TruncatedSeries::new(p, trunc)
}
