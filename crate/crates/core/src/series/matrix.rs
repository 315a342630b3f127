use std::fmt;

use super::{FormalMap, TruncatedSeries};
use crate::coefficients::GaussianRational;
use crate::error::{Error, Result};

/// Square matrix of truncated series (Jacobians, Hessians and their powers).
#[derive(Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    rows: Vec<Vec<TruncatedSeries>>,
}

impl SeriesMatrix {
    pub fn new(rows: Vec<Vec<TruncatedSeries>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self { rows })
    }

    pub fn identity(n: usize, trunc: u32) -> Self {
        let one = GaussianRational::from(1);
        Self {
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                TruncatedSeries::constant(n, one.clone(), trunc)
                            } else {
                                TruncatedSeries::zero(n, trunc)
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn zero(n: usize, trunc: u32) -> Self {
        Self {
            rows: vec![vec![TruncatedSeries::zero(n, trunc); n]; n],
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<TruncatedSeries>] {
        &self.rows
    }

    /// Smallest truncation among the entries.
    pub fn trunc(&self) -> u32 {
        self.entries().map(TruncatedSeries::trunc).min().unwrap_or(u32::MAX)
    }

    fn entries(&self) -> impl Iterator<Item = &TruncatedSeries> {
        self.rows.iter().flatten()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(TruncatedSeries::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.rows[i][j] == self.rows[j][i]))
    }

    pub fn transpose(&self) -> Self {
        let n = self.size();
        Self {
            rows: (0..n)
                .map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect())
                .collect(),
        }
    }

    pub fn trace(&self) -> Result<TruncatedSeries> {
        let n = self.size();
        let mut acc = match self.rows.first() {
            Some(r) => r[0].clone(),
            None => return Ok(TruncatedSeries::zero(0, u32::MAX)),
        };
        for i in 1..n {
            acc = acc.add(&self.rows[i][i])?;
        }
        Ok(acc)
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.size() != other.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: other.size(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(y)).collect())
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x.scale(s)).collect())
                .collect(),
        }
    }

    pub fn truncate_to(&self, d: u32) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x.truncate_to(d)).collect())
                .collect(),
        }
    }

    /// Matrix product with order-aware entry products.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let n = self.size();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = self.rows[i][0].mul_precise(&other.rows[0][j])?;
                for k in 1..n {
                    acc = acc.add(&self.rows[i][k].mul_precise(&other.rows[k][j])?)?;
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Ok(Self { rows })
    }

    /// `self^k` for `k >= 1`.
    pub fn pow(&self, k: u32) -> Result<Self> {
        assert!(k >= 1, "matrix power must be positive");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Matrix-vector product `M·v`.
    pub fn mul_vec(&self, v: &FormalMap) -> Result<FormalMap> {
        if v.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                found: v.len(),
            });
        }
        let comps = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = row[0].mul_precise(v.component(0))?;
                for (x, y) in row.iter().zip(v.components()).skip(1) {
                    acc = acc.add(&x.mul_precise(y)?)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        FormalMap::new(comps)
    }

    /// Substitutes `map` into every entry.
    pub fn compose(&self, map: &FormalMap) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| x.compose(map)).collect())
            .collect::<Result<_>>()?;
        Ok(Self { rows })
    }

    pub fn eq_mod(&self, other: &Self, d: u32) -> bool {
        self.size() == other.size()
            && self
                .entries()
                .zip(other.entries())
                .all(|(a, b)| a.eq_mod(b, d))
    }
}

impl fmt::Debug for SeriesMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}
