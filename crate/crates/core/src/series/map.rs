use std::fmt;

use num_traits::Zero;

use super::{Monomial, Order, Poly, SeriesMatrix, TruncatedSeries};
use crate::coefficients::GaussianRational;
use crate::error::{Error, Result};

/// An n-tuple of truncated series in n variables, all sharing one
/// truncation degree.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalMap {
    components: Vec<TruncatedSeries>,
}

impl FormalMap {
    /// Builds a map from its components, lowering every truncation to the
    /// smallest one among them.
    pub fn new(components: Vec<TruncatedSeries>) -> Result<Self> {
        let n = components.len();
        if let Some(bad) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.nvars(),
            });
        }
        let trunc = components.iter().map(TruncatedSeries::trunc).min().unwrap_or(0);
        let components = components.iter().map(|c| c.truncate_to(trunc)).collect();
        Ok(Self { components })
    }

    pub fn from_polys(polys: Vec<Poly>, trunc: u32) -> Result<Self> {
        Self::new(
            polys
                .into_iter()
                .map(|p| TruncatedSeries::new(p, trunc))
                .collect(),
        )
    }

    pub fn identity(nvars: usize, trunc: u32) -> Self {
        Self {
            components: (0..nvars)
                .map(|i| TruncatedSeries::var(nvars, i, trunc))
                .collect(),
        }
    }

    pub fn zero(nvars: usize, trunc: u32) -> Self {
        Self {
            components: vec![TruncatedSeries::zero(nvars, trunc); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn trunc(&self) -> u32 {
        self.components.first().map_or(0, TruncatedSeries::trunc)
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    pub fn into_components(self) -> Vec<TruncatedSeries> {
        self.components
    }

    pub fn component(&self, i: usize) -> &TruncatedSeries {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TruncatedSeries::is_zero)
    }

    /// Minimum order over the components.
    pub fn order(&self) -> Order {
        self.components
            .iter()
            .map(TruncatedSeries::order)
            .min()
            .unwrap_or(Order::Infinite)
    }

    pub fn order_bound(&self) -> u32 {
        self.components
            .iter()
            .map(TruncatedSeries::order_bound)
            .min()
            .unwrap_or(u32::MAX)
    }

    /// Maximum degree over the known parts, `None` for the zero map.
    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(|c| c.poly().degree()).max()
    }

    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.components
            .iter()
            .flat_map(|c| c.poly().iter())
            .all(|(m, _)| m.degree() == d)
    }

    pub fn check_constant_free(&self) -> Result<()> {
        let constant = Monomial::one(self.nvars());
        match self
            .components
            .iter()
            .position(|c| !c.coeff(&constant).is_zero())
        {
            Some(component) => Err(Error::ConstantTerm { component }),
            None => Ok(()),
        }
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&TruncatedSeries, &TruncatedSeries) -> Result<TruncatedSeries>,
    ) -> Result<Self> {
        self.check_len(other)?;
        Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect::<Result<_>>()?,
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, TruncatedSeries::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, TruncatedSeries::sub)
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self {
            components: self.components.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            components: self.components.iter().map(TruncatedSeries::neg).collect(),
        }
    }

    pub fn truncate_to(&self, d: u32) -> Self {
        Self {
            components: self.components.iter().map(|c| c.truncate_to(d)).collect(),
        }
    }

    pub fn eq_mod(&self, other: &Self, d: u32) -> bool {
        self.len() == other.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.eq_mod(b, d))
    }

    /// `self ∘ inner`, i.e. `z -> self(inner(z))`.
    pub fn compose(&self, inner: &FormalMap) -> Result<Self> {
        Self::new(
            self.components
                .iter()
                .map(|c| c.compose(inner))
                .collect::<Result<_>>()?,
        )
    }

    /// `(JF)_{ij} = ∂F_i/∂z_j`.
    pub fn jacobian(&self) -> Result<SeriesMatrix> {
        let n = self.nvars();
        let rows = self
            .components
            .iter()
            .map(|c| (0..n).map(|j| c.partial_derivative(j)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        SeriesMatrix::new(rows)
    }

    /// `⟨a, b⟩ = Σ a_i b_i` using order-aware products.
    pub fn inner_product(&self, other: &Self) -> Result<TruncatedSeries> {
        self.check_len(other)?;
        let mut acc: Option<TruncatedSeries> = None;
        for (a, b) in self.components.iter().zip(&other.components) {
            let term = a.mul_precise(b)?;
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| TruncatedSeries::zero(0, u32::MAX)))
    }
}

impl fmt::Debug for FormalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.components.iter()).finish()
    }
}
