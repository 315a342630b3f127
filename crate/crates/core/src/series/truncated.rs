use std::collections::HashMap;
use std::fmt;

use super::{FormalMap, Monomial, Order, Poly, SeriesMatrix};
use crate::coefficients::GaussianRational;
use crate::error::{Error, Result};

/// A power series known modulo terms of total degree `> trunc`.
///
/// Every stored term has degree `<= trunc`. Two series are `==` only when
/// both the stored terms and the truncation agree; use [`Self::eq_mod`] to
/// compare at a common precision.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    poly: Poly,
    trunc: u32,
}

impl TruncatedSeries {
    /// Wraps `poly`, discarding its terms above `trunc`.
    pub fn new(poly: Poly, trunc: u32) -> Self {
        let poly = match poly.degree() {
            Some(d) if d > trunc => poly.truncated(trunc),
            _ => poly,
        };
        Self { poly, trunc }
    }

    pub fn zero(nvars: usize, trunc: u32) -> Self {
        Self::new(Poly::zero(nvars), trunc)
    }

    pub fn constant(nvars: usize, c: GaussianRational, trunc: u32) -> Self {
        Self::new(Poly::constant(nvars, c), trunc)
    }

    pub fn var(nvars: usize, i: usize, trunc: u32) -> Self {
        Self::new(Poly::var(nvars, i), trunc)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.poly.coeff(m)
    }

    /// Order of the known part; `Infinite` when every known coefficient is 0.
    pub fn order(&self) -> Order {
        self.poly.order()
    }

    /// A lower bound for the order of the full (untruncated) series.
    pub fn order_bound(&self) -> u32 {
        self.poly.order().finite().unwrap_or(u32::MAX).min(self.trunc.saturating_add(1))
    }

    /// Lowers the truncation to `min(trunc, d)`.
    pub fn truncate_to(&self, d: u32) -> Self {
        if d >= self.trunc {
            return self.clone();
        }
        Self::new(self.poly.truncated(d), d)
    }

    /// Reinterprets the known part as an exact polynomial truncated at `d`.
    /// Only sound when the series really is that polynomial.
    pub fn retruncate_polynomial(&self, d: u32) -> Self {
        Self::new(self.poly.clone(), d)
    }

    /// Equality of the two series modulo degree `> d`; both must be known
    /// through degree `d`.
    pub fn eq_mod(&self, other: &Self, d: u32) -> bool {
        debug_assert!(d <= self.trunc && d <= other.trunc);
        self.nvars() == other.nvars() && self.poly.truncated(d) == other.poly.truncated(d)
    }

    /// The degree-`d` part. Errors when `d` lies beyond the truncation.
    pub fn homogeneous_component(&self, d: u32) -> Result<Poly> {
        if d > self.trunc {
            return Err(Error::BeyondTruncation {
                degree: d,
                trunc: self.trunc,
            });
        }
        Ok(self.poly.homogeneous_part(d))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let trunc = self.trunc.min(other.trunc);
        Ok(Self::new(self.poly.add(&other.poly)?, trunc))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let trunc = self.trunc.min(other.trunc);
        Ok(Self::new(self.poly.sub(&other.poly)?, trunc))
    }

    pub fn neg(&self) -> Self {
        Self {
            poly: self.poly.neg(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self {
            poly: self.poly.scale(s),
            trunc: self.trunc,
        }
    }

    /// Product truncated at `min(trunc_a, trunc_b)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let trunc = self.trunc.min(other.trunc);
        Ok(Self {
            poly: self.poly.mul_truncated(&other.poly, Some(trunc))?,
            trunc,
        })
    }

    /// Product whose truncation follows from the operands' orders.
    ///
    /// The unknown tail of `a` starts at degree `trunc_a + 1` and gets
    /// multiplied by something of order at least `o(b)`, so the product is
    /// known through `min(trunc_a + o(b), trunc_b + o(a))`. This never loses
    /// precision relative to [`Self::mul`] and is what the recurrences use:
    /// a Jacobian entry known to `D - 1` times a series of order `>= 1` is
    /// still known to `D`.
    pub fn mul_precise(&self, other: &Self) -> Result<Self> {
        let trunc = self
            .trunc
            .saturating_add(other.order_bound())
            .min(other.trunc.saturating_add(self.order_bound()));
        Ok(Self {
            poly: self.poly.mul_truncated(&other.poly, Some(trunc))?,
            trunc,
        })
    }

    /// `∂/∂z_i` for zero-based `i`. The result is known one degree less.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if self.trunc == 0 {
            return Err(Error::TruncationExhausted(
                "cannot differentiate a series truncated at degree 0".into(),
            ));
        }
        Ok(Self {
            poly: self.poly.derivative(i)?,
            trunc: self.trunc - 1,
        })
    }

    pub fn gradient(&self) -> Result<FormalMap> {
        let comps = (0..self.nvars())
            .map(|i| self.partial_derivative(i))
            .collect::<Result<Vec<_>>>()?;
        FormalMap::new(comps)
    }

    pub fn hessian(&self) -> Result<SeriesMatrix> {
        self.gradient()?.jacobian()
    }

    /// `Δ = Σ ∂²/∂z_i²`.
    pub fn laplacian(&self) -> Result<Self> {
        let mut acc = Self::zero(self.nvars(), self.trunc.saturating_sub(2));
        for i in 0..self.nvars() {
            acc = acc.add(&self.partial_derivative(i)?.partial_derivative(i)?)?;
        }
        Ok(acc)
    }

    /// Substitutes `z_i -> map_i`. Every component of `map` must have a zero
    /// constant term.
    ///
    /// Monomial images are built incrementally (`z^e = z^e' · z_i`) and
    /// cached, so each distinct monomial costs one product against a single
    /// map component.
    pub fn compose(&self, map: &FormalMap) -> Result<Self> {
        if map.len() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: map.len(),
            });
        }
        map.check_constant_free()?;

        let out_nvars = map.nvars();
        let map_order = map.order_bound();
        // A monomial of degree e >= 1 whose factors each carry an error of
        // order > trunc(map) contributes error of order > trunc(map) + (e-1)·o(map).
        let trunc = self
            .poly
            .iter()
            .map(|(m, _)| m.degree())
            .filter(|&d| d >= 1)
            .min()
            .map_or(self.trunc, |e| {
                self.trunc
                    .min(map.trunc().saturating_add((e - 1).saturating_mul(map_order)))
            });

        let mut cache: HashMap<Monomial, Poly> = HashMap::new();
        let mut acc = Poly::zero(out_nvars);
        for (m, c) in self.poly.iter() {
            // Terms of degree > trunc map to order > trunc.
            if m.degree() > trunc {
                continue;
            }
            let image = monomial_image(m, map, trunc, &mut cache)?;
            for (mm, cc) in image.iter() {
                acc.add_term(mm.clone(), c * cc);
            }
        }
        Ok(Self::new(acc, trunc))
    }
}

fn monomial_image(
    m: &Monomial,
    map: &FormalMap,
    trunc: u32,
    cache: &mut HashMap<Monomial, Poly>,
) -> Result<Poly> {
    if let Some(p) = cache.get(m) {
        return Ok(p.clone());
    }
    let image = match m.exponents().iter().rposition(|&e| e > 0) {
        None => Poly::constant(map.nvars(), GaussianRational::from(1)),
        Some(i) => {
            let mut parent = m.exponents().to_vec();
            parent[i] -= 1;
            let parent = monomial_image(&Monomial::new(parent), map, trunc, cache)?;
            parent.mul_truncated(map.component(i).poly(), Some(trunc))?
        }
    };
    cache.insert(m.clone(), image.clone());
    Ok(image)
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} + O(deg > {})", self.poly, self.trunc)
    }
}
