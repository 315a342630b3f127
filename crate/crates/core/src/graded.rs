//! Power series in an auxiliary parameter `t` whose coefficients are
//! truncated series in `z`.
//!
//! `t` never becomes a ring variable of the sparse kernel: a [`GradedSeries`]
//! is the list of its `t`-adic slices `[a_0, a_1, …, a_{T-1}]`, known modulo
//! `t^T`. This is the shape of `N_t`, `Q_t`, `F_t = z - tH` and `G_t`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::coefficients::GaussianRational;
use crate::error::{Error, Result};
use crate::series::{FormalMap, Monomial, Poly, SeriesMatrix, TruncatedSeries};

/// `Σ_j slices[j]·t^j`, known modulo `t^len`. All slices share one
/// truncation in `z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSeries {
    slices: Vec<TruncatedSeries>,
}

impl GradedSeries {
    /// Panics on an empty slice list.
    pub fn new(slices: Vec<TruncatedSeries>) -> Self {
        assert!(!slices.is_empty(), "a graded series needs at least one slice");
        let trunc = slices.iter().map(TruncatedSeries::trunc).min().unwrap_or(0);
        Self {
            slices: slices.iter().map(|s| s.truncate_to(trunc)).collect(),
        }
    }

    /// `a` viewed as constant in `t`, known modulo `t^len`.
    pub fn constant_in_t(a: &TruncatedSeries, len: usize) -> Self {
        let mut slices = vec![TruncatedSeries::zero(a.nvars(), a.trunc()); len];
        slices[0] = a.clone();
        Self { slices }
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.slices[0].nvars()
    }

    pub fn trunc(&self) -> u32 {
        self.slices[0].trunc()
    }

    pub fn slice(&self, j: usize) -> &TruncatedSeries {
        &self.slices[j]
    }

    pub fn slices(&self) -> &[TruncatedSeries] {
        &self.slices
    }

    pub fn into_slices(self) -> Vec<TruncatedSeries> {
        self.slices
    }

    pub fn truncate_t(&self, len: usize) -> Self {
        Self::new(self.slices[..len.min(self.len())].to_vec())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let len = self.len().min(other.len());
        Ok(Self::new(
            (0..len)
                .map(|j| self.slices[j].add(&other.slices[j]))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let len = self.len().min(other.len());
        Ok(Self::new(
            (0..len)
                .map(|j| self.slices[j].sub(&other.slices[j]))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self {
            slices: self.slices.iter().map(|x| x.scale(s)).collect(),
        }
    }

    /// Cauchy product in `t` with order-aware products in `z`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let len = self.len().min(other.len());
        let mut out = Vec::with_capacity(len);
        for j in 0..len {
            let mut acc = self.slices[0].mul_precise(&other.slices[j])?;
            for i in 1..=j {
                acc = acc.add(&self.slices[i].mul_precise(&other.slices[j - i])?)?;
            }
            out.push(acc);
        }
        Ok(Self::new(out))
    }

    /// `∂/∂t`; one fewer slice is known.
    pub fn t_derivative(&self) -> Option<Self> {
        if self.len() < 2 {
            return None;
        }
        Some(Self::new(
            (1..self.len())
                .map(|j| self.slices[j].scale(&GaussianRational::from(j as i64)))
                .collect(),
        ))
    }

    /// `∂/∂z_i` applied slice by slice.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        Ok(Self::new(
            self.slices
                .iter()
                .map(|s| s.partial_derivative(i))
                .collect::<Result<_>>()?,
        ))
    }

    pub fn gradient(&self) -> Result<GradedMap> {
        GradedMap::new(
            (0..self.nvars())
                .map(|i| self.partial_derivative(i))
                .collect::<Result<_>>()?,
        )
    }

    /// `Σ_j t^j · a_j(map)`.
    pub fn compose(&self, map: &GradedMap) -> Result<Self> {
        let len = self.len().min(map.len_t());
        let mut acc: Vec<TruncatedSeries> = Vec::with_capacity(len);
        for (j, a) in self.slices.iter().take(len).enumerate() {
            let image = compose_series(a, map, len - j)?;
            for (k, s) in image.slices.into_iter().enumerate() {
                let idx = j + k;
                if idx < acc.len() {
                    acc[idx] = acc[idx].add(&s)?;
                } else {
                    acc.push(s);
                }
            }
        }
        Ok(Self::new(acc))
    }

    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(TruncatedSeries::is_zero)
    }
}

/// A vector of graded series: `z + tN_t`, `F_t = z - tH`, `∇Q_t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedMap {
    components: Vec<GradedSeries>,
}

impl GradedMap {
    pub fn new(components: Vec<GradedSeries>) -> Result<Self> {
        let n = components.len();
        if let Some(bad) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.nvars(),
            });
        }
        let len = components.iter().map(GradedSeries::len).min().unwrap_or(1);
        let trunc = components.iter().map(GradedSeries::trunc).min().unwrap_or(0);
        Ok(Self {
            components: components
                .iter()
                .map(|c| {
                    GradedSeries::new(
                        c.slices[..len].iter().map(|s| s.truncate_to(trunc)).collect(),
                    )
                })
                .collect(),
        })
    }

    /// `z - t·h`, known modulo `t^len`.
    pub fn deformation(h: &FormalMap, len: usize) -> Result<Self> {
        Self::linear_in_t(h, &-GaussianRational::from(1), len)
    }

    /// `z + c·t·h`, known modulo `t^len`.
    pub fn linear_in_t(h: &FormalMap, c: &GaussianRational, len: usize) -> Result<Self> {
        let n = h.nvars();
        let trunc = h.trunc();
        Self::new(
            (0..n)
                .map(|i| {
                    let mut slices = vec![TruncatedSeries::zero(n, trunc); len.max(1)];
                    slices[0] = TruncatedSeries::var(n, i, trunc);
                    if len > 1 {
                        slices[1] = h.component(i).scale(c);
                    }
                    GradedSeries::new(slices)
                })
                .collect(),
        )
    }

    /// Slice `j` of every component as a formal map.
    pub fn slice(&self, j: usize) -> Result<FormalMap> {
        FormalMap::new(self.components.iter().map(|c| c.slice(j).clone()).collect())
    }

    pub fn from_slices(slices: &[FormalMap]) -> Result<Self> {
        let n = slices.first().map_or(0, FormalMap::nvars);
        Self::new(
            (0..n)
                .map(|i| GradedSeries::new(slices.iter().map(|m| m.component(i).clone()).collect()))
                .collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn len_t(&self) -> usize {
        self.components.first().map_or(0, GradedSeries::len)
    }

    pub fn trunc(&self) -> u32 {
        self.components.first().map_or(0, GradedSeries::trunc)
    }

    pub fn component(&self, i: usize) -> &GradedSeries {
        &self.components[i]
    }

    pub fn components(&self) -> &[GradedSeries] {
        &self.components
    }

    fn order_bound(&self) -> u32 {
        self.components
            .iter()
            .flat_map(|c| c.slices.iter())
            .map(TruncatedSeries::order_bound)
            .min()
            .unwrap_or(u32::MAX)
    }

    pub fn compose(&self, inner: &GradedMap) -> Result<Self> {
        Self::new(
            self.components
                .iter()
                .map(|c| c.compose(inner))
                .collect::<Result<_>>()?,
        )
    }

    /// Slice-wise Jacobian.
    pub fn jacobian(&self) -> Result<GradedMatrix> {
        let n = self.nvars();
        GradedMatrix::new(
            self.components
                .iter()
                .map(|c| (0..n).map(|j| c.partial_derivative(j)).collect())
                .collect::<Result<_>>()?,
        )
    }
}

/// Square matrix of graded series.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedMatrix {
    rows: Vec<Vec<GradedSeries>>,
}

impl GradedMatrix {
    pub fn new(rows: Vec<Vec<GradedSeries>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Ok(Self { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn len_t(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .map(GradedSeries::len)
            .min()
            .unwrap_or(0)
    }

    pub fn get(&self, i: usize, j: usize) -> &GradedSeries {
        &self.rows[i][j]
    }

    /// The `t^j` coefficient matrix.
    pub fn slice(&self, j: usize) -> Result<SeriesMatrix> {
        SeriesMatrix::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|x| x.slice(j).clone()).collect())
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.size();
        if other.size() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: other.size(),
            });
        }
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = self.rows[i][0].mul(&other.rows[0][j])?;
                for k in 1..n {
                    acc = acc.add(&self.rows[i][k].mul(&other.rows[k][j])?)?;
                }
                row.push(acc);
            }
            rows.push(row);
        }
        Ok(Self { rows })
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        assert!(k >= 1, "matrix power must be positive");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<GradedSeries> {
        let mut acc = self.rows[0][0].clone();
        for i in 1..self.size() {
            acc = acc.add(&self.rows[i][i])?;
        }
        Ok(acc)
    }

    pub fn compose(&self, map: &GradedMap) -> Result<Self> {
        Self::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|x| x.compose(map)).collect())
                .collect::<Result<_>>()?,
        )
    }
}

/// `a(map)` for a `t`-independent `a`, keeping `len` slices.
///
/// Every slice of every component must be free of constant terms, so the
/// result is governed by the same precision rule as
/// [`TruncatedSeries::compose`].
pub fn compose_series(a: &TruncatedSeries, map: &GradedMap, len: usize) -> Result<GradedSeries> {
    if map.nvars() != a.nvars() {
        return Err(Error::DimensionMismatch {
            expected: a.nvars(),
            found: map.nvars(),
        });
    }
    let len = len.min(map.len_t()).max(1);
    let n = map.nvars();
    let constant = Monomial::one(n);
    for (i, c) in map.components.iter().enumerate() {
        if c.slices.iter().any(|s| !s.coeff(&constant).is_zero()) {
            return Err(Error::ConstantTerm { component: i });
        }
    }

    let map_order = map.order_bound();
    let trunc = a
        .poly()
        .iter()
        .map(|(m, _)| m.degree())
        .filter(|&d| d >= 1)
        .min()
        .map_or(a.trunc(), |e| {
            a.trunc()
                .min(map.trunc().saturating_add((e - 1).saturating_mul(map_order)))
        });

    let mut cache: HashMap<Monomial, Vec<Poly>> = HashMap::new();
    let mut acc = vec![Poly::zero(n); len];
    for (m, c) in a.poly().iter() {
        if m.degree() > trunc {
            continue;
        }
        let image = graded_monomial_image(m, map, trunc, len, &mut cache)?;
        for (slot, p) in acc.iter_mut().zip(&image) {
            for (mm, cc) in p.iter() {
                slot.add_term(mm.clone(), c * cc);
            }
        }
    }
    Ok(GradedSeries::new(
        acc.into_iter().map(|p| TruncatedSeries::new(p, trunc)).collect(),
    ))
}

fn graded_monomial_image(
    m: &Monomial,
    map: &GradedMap,
    trunc: u32,
    len: usize,
    cache: &mut HashMap<Monomial, Vec<Poly>>,
) -> Result<Vec<Poly>> {
    if let Some(p) = cache.get(m) {
        return Ok(p.clone());
    }
    let n = map.nvars();
    let image = match m.exponents().iter().rposition(|&e| e > 0) {
        None => {
            let mut v = vec![Poly::zero(n); len];
            v[0] = Poly::constant(n, GaussianRational::from(1));
            v
        }
        Some(i) => {
            let mut parent = m.exponents().to_vec();
            parent[i] -= 1;
            let parent = graded_monomial_image(&Monomial::new(parent), map, trunc, len, cache)?;
            let factor = &map.components[i].slices;
            let mut out = vec![Poly::zero(n); len];
            for (j, slot) in out.iter_mut().enumerate() {
                for k in 0..=j {
                    if parent[k].is_zero() || factor[j - k].is_zero() {
                        continue;
                    }
                    let prod = parent[k].mul_truncated(factor[j - k].poly(), Some(trunc))?;
                    *slot = slot.add(&prod)?;
                }
            }
            out
        }
    };
    cache.insert(m.clone(), image.clone());
    Ok(image)
}
