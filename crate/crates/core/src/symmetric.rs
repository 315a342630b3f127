//! The gradient case `H = ∇P`.
//!
//! Here the inverse is again a gradient, `N_t = ∇Q_t`, and `Q_t` solves
//!
//! ```text
//! ∂Q/∂t = ½⟨∇Q, ∇Q⟩,    Q_0 = P
//! ```
//!
//! whose `t`-slices obey `Q_[1] = P`,
//! `Q_[m] = 1/(2(m-1)) · Σ_{k+l=m} ⟨∇Q_[k], ∇Q_[l]⟩`.
//!
//! The module also covers the formal Legendre transform of
//! `f = ½Σz_i² - P`, which is `f̄ = ½Σz_i² + Q_{t=1}`, and a scanner that
//! looks for `t`-polynomiality of `Q_t` for homogeneous potentials with
//! nilpotent Hessian.

use std::fmt;

use num_traits::One;
use rayon::prelude::*;

use crate::coefficients::GaussianRational;
use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedSeries};
use crate::inversion::verify_inverse;
use crate::series::{FormalMap, Monomial, Order, Poly, TruncatedSeries};

/// The slices `[Q_[1], …, Q_[M]]` of `Q_t` for a potential `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSequence {
    p: TruncatedSeries,
    terms: Vec<TruncatedSeries>,
    trunc: u32,
}

impl QSequence {
    pub fn p(&self) -> &TruncatedSeries {
        &self.p
    }

    pub fn terms(&self) -> &[TruncatedSeries] {
        &self.terms
    }

    /// `Q_[m]` for `1 <= m <= M`.
    pub fn term(&self, m: usize) -> &TruncatedSeries {
        &self.terms[m - 1]
    }

    pub fn torder(&self) -> usize {
        self.terms.len()
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn nvars(&self) -> usize {
        self.p.nvars()
    }

    /// `Q_t` with `Q_[m]` at `t^{m-1}`.
    pub fn as_graded(&self) -> GradedSeries {
        GradedSeries::new(self.terms.clone())
    }

    /// `Σ_m Q_[m]`, the value at `t = 1`.
    pub fn sum(&self) -> Result<TruncatedSeries> {
        let mut acc = TruncatedSeries::zero(self.nvars(), self.trunc);
        for q in &self.terms {
            acc = acc.add(q)?;
        }
        Ok(acc)
    }
}

fn check_potential_order(p: &TruncatedSeries) -> Result<()> {
    match p.order() {
        Order::Finite(o) if o < 2 => Err(Error::OrderTooLow { required: 2, found: o }),
        _ => Ok(()),
    }
}

/// `Σ_{k+l=m} ⟨g_k, g_l⟩`, summed in a fixed order.
fn gradient_convolution(gradients: &[FormalMap], m: usize) -> Result<TruncatedSeries> {
    let products = (1..m)
        .into_par_iter()
        .map(|k| gradients[k - 1].inner_product(&gradients[m - k - 1]))
        .collect::<Vec<_>>();
    let mut iter = products.into_iter();
    let mut acc = iter.next().expect("m >= 2")?;
    for p in iter {
        acc = acc.add(&p?)?;
    }
    Ok(acc)
}

/// Runs the slice recurrence for `Q_t` up to `t`-order `torder`.
pub fn compute_q_sequence(p: &TruncatedSeries, torder: usize) -> Result<QSequence> {
    if torder == 0 {
        return Err(Error::ZeroTOrder);
    }
    check_potential_order(p)?;
    let d = p.trunc();
    let n = p.nvars();

    if p.is_zero() {
        let mut terms = vec![p.clone()];
        terms.resize(torder, TruncatedSeries::zero(n, d));
        return Ok(QSequence {
            p: p.clone(),
            terms,
            trunc: d,
        });
    }

    let mut terms = vec![p.clone()];
    let mut gradients = vec![p.gradient()?];
    let mut trunc = d;
    for m in 2..=torder {
        let next = gradient_convolution(&gradients, m)?
            .scale(&GaussianRational::ratio(1, 2 * (m as i64 - 1)))
            .truncate_to(d);
        trunc = trunc.min(next.trunc());
        if m < torder {
            gradients.push(next.gradient()?);
        }
        terms.push(next);
    }
    Ok(QSequence {
        p: p.clone(),
        terms,
        trunc,
    })
}

/// `½⟨∇A, ∇A⟩` for a graded `A`, slice by slice in `t`.
fn half_gradient_square(a: &GradedSeries) -> Result<GradedSeries> {
    let grad = a.gradient()?;
    let mut acc: Option<GradedSeries> = None;
    for c in grad.components() {
        let sq = c.mul(c)?;
        acc = Some(match acc {
            None => sq,
            Some(s) => s.add(&sq)?,
        });
    }
    Ok(acc.expect("at least one variable").scale(&GaussianRational::ratio(1, 2)))
}

/// Slices of `∂Q_t/∂t - ½⟨∇Q_t, ∇Q_t⟩` through `t^{M-2}`, recomputed
/// from the stored `Q_[m]` with graded arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurgersResidual {
    pub slices: Vec<TruncatedSeries>,
}

impl BurgersResidual {
    pub fn is_zero(&self) -> bool {
        self.slices.iter().all(TruncatedSeries::is_zero)
    }

    /// Usable `z`-degree of the residual slices.
    pub fn trunc(&self) -> Option<u32> {
        self.slices.first().map(TruncatedSeries::trunc)
    }
}

pub fn burgers_residual(seq: &QSequence) -> Result<BurgersResidual> {
    let q_t = seq.as_graded();
    let Some(dq) = q_t.t_derivative() else {
        return Ok(BurgersResidual { slices: Vec::new() });
    };
    if seq.p.is_zero() {
        return Ok(BurgersResidual {
            slices: dq.into_slices(),
        });
    }
    let rhs = half_gradient_square(&q_t)?;
    Ok(BurgersResidual {
        slices: dq.sub(&rhs)?.into_slices(),
    })
}

/// Solves the potential Burgers problem `∂Q/∂t = ½⟨∇Q, ∇Q⟩`, `Q_0 = P`,
/// through `t`-order `torder` and reports the recomputed residual.
pub fn burgers_solve(p: &TruncatedSeries, torder: usize) -> Result<(QSequence, BurgersResidual)> {
    let seq = compute_q_sequence(p, torder)?;
    let residual = burgers_residual(&seq)?;
    Ok((seq, residual))
}

/// `½Σz_i²` at truncation `trunc`.
pub fn half_square_norm(nvars: usize, trunc: u32) -> TruncatedSeries {
    let mut p = Poly::zero(nvars);
    for i in 0..nvars {
        let mut e = vec![0; nvars];
        e[i] = 2;
        p.add_term(Monomial::new(e), GaussianRational::ratio(1, 2));
    }
    TruncatedSeries::new(p, trunc)
}

/// Splits `f = ½Σz_i² - P` and returns `P`.
fn legendre_potential(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    match f.order() {
        Order::Finite(o) if o < 2 => return Err(Error::OrderTooLow { required: 2, found: o }),
        _ => {}
    }
    if f.trunc() < 2 {
        return Err(Error::NotNormalized);
    }
    let quad = half_square_norm(f.nvars(), f.trunc());
    if f.homogeneous_component(2)? != *quad.poly() {
        return Err(Error::NotNormalized);
    }
    quad.sub(f)
}

/// The formal Legendre transform `f̄ = ½Σz_i² + Σ_m Q_[m]` of
/// `f = ½Σz_i² - P`, characterized by `∇f̄ = (∇f)^{-1}`.
///
/// Normalization forces `o(P) >= 3`, so `o(Q_[m]) >= m + 2` and
/// `M = trunc - 1` slices already determine every degree through `trunc`;
/// the last slice is still checked to vanish.
pub fn legendre_transform(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let p = legendre_potential(f)?;
    let d = f.trunc();
    let torder = (d as usize).saturating_sub(1).max(1);
    let seq = compute_q_sequence(&p, torder)?;
    if torder > 1 && !seq.term(torder).is_zero() {
        return Err(Error::Unstable { degree: d, torder });
    }
    half_square_norm(f.nvars(), d).add(&seq.sum()?)
}

/// Result of checking a Legendre transform against its defining property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreCheck {
    pub transform: TruncatedSeries,
    /// `∇f̄ ∘ ∇f` and `∇f ∘ ∇f̄` are the identity modulo degree `> trunc - 1`.
    pub gradients_inverse: bool,
    /// `f̄̄ = f` modulo degree `> trunc`.
    pub involution: bool,
}

impl LegendreCheck {
    pub fn passed(&self) -> bool {
        self.gradients_inverse && self.involution
    }
}

pub fn check_legendre(f: &TruncatedSeries) -> Result<LegendreCheck> {
    let transform = legendre_transform(f)?;
    let gradients_inverse = verify_inverse(&f.gradient()?, &transform.gradient()?)?;
    let back = legendre_transform(&transform)?;
    Ok(LegendreCheck {
        involution: back.eq_mod(f, f.trunc()),
        gradients_inverse,
        transform,
    })
}

/// Slice-wise outcome of the transport identities under `F_t = z - t∇P`.
/// Entry `j` refers to the `t^j` slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricIdentities {
    /// `(∇Q_t)(F_t) = ∇P`.
    pub gradient_transport: Vec<bool>,
    /// `Q_t(F_t) = P - (t/2)⟨∇P, ∇P⟩`.
    pub potential_transport: Vec<bool>,
    /// `(∂Q_t/∂t)(F_t) = ½⟨∇P, ∇P⟩`.
    pub time_derivative: Vec<bool>,
}

impl SymmetricIdentities {
    pub fn all_hold(&self) -> bool {
        self.gradient_transport
            .iter()
            .chain(&self.potential_transport)
            .chain(&self.time_derivative)
            .all(|&b| b)
    }
}

fn slices_match(actual: &GradedSeries, expected: &[TruncatedSeries]) -> Vec<bool> {
    actual
        .slices()
        .iter()
        .enumerate()
        .map(|(j, a)| match expected.get(j) {
            Some(e) => a.eq_mod(e, a.trunc().min(e.trunc())),
            None => a.is_zero(),
        })
        .collect()
}

pub fn check_symmetric_identities(p: &TruncatedSeries, seq: &QSequence) -> Result<SymmetricIdentities> {
    let n = p.nvars();
    let len = seq.torder();
    if p.is_zero() {
        let all = |k: usize| vec![seq.terms.iter().all(TruncatedSeries::is_zero); k];
        return Ok(SymmetricIdentities {
            gradient_transport: all(len),
            potential_transport: all(len),
            time_derivative: all(len.saturating_sub(1)),
        });
    }
    let grad_p = p.gradient()?;
    let f_t = GradedMap::deformation(&grad_p, len)?;
    let half_norm = grad_p
        .inner_product(&grad_p)?
        .scale(&GaussianRational::ratio(1, 2));

    let q_t = seq.as_graded();
    let grad_q = q_t.gradient()?.compose(&f_t)?;
    let gradient_transport = (0..len)
        .map(|j| {
            let expected = if j == 0 {
                grad_p.clone()
            } else {
                FormalMap::zero(n, grad_p.trunc())
            };
            let actual = grad_q.slice(j)?;
            let d = actual.trunc().min(expected.trunc());
            Ok(actual.eq_mod(&expected, d))
        })
        .collect::<Result<_>>()?;

    let potential_transport = slices_match(&q_t.compose(&f_t)?, &[p.clone(), half_norm.neg()]);

    let time_derivative = match q_t.t_derivative() {
        Some(dq) => slices_match(&dq.compose(&f_t)?, &[half_norm]),
        None => Vec::new(),
    };

    Ok(SymmetricIdentities {
        gradient_transport,
        potential_transport,
        time_derivative,
    })
}

/// Outcome of the Hessian nilpotency and harmonicity checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicityReport {
    pub power: u32,
    /// `Hes(P)^k = 0`.
    pub hessian_power_zero: bool,
    /// Entry `m-1`: `ΔQ_[m] = 0`.
    pub laplacians_zero: Vec<bool>,
    /// Entry `j`: the `t^j` slice of `Hes(Q_t)^k` vanishes.
    pub hessian_slices_nilpotent: Vec<bool>,
}

impl HarmonicityReport {
    pub fn harmonic(&self) -> bool {
        self.laplacians_zero.iter().all(|&b| b)
    }

    pub fn hessian_flow_nilpotent(&self) -> bool {
        self.hessian_slices_nilpotent.iter().all(|&b| b)
    }

    pub fn all_hold(&self) -> bool {
        self.hessian_power_zero && self.harmonic() && self.hessian_flow_nilpotent()
    }
}

pub fn check_harmonicity(p: &TruncatedSeries, seq: &QSequence, k: u32) -> Result<HarmonicityReport> {
    assert!(k >= 1, "power must be at least 1");
    if p.is_zero() {
        let zero = seq.terms.iter().all(TruncatedSeries::is_zero);
        return Ok(HarmonicityReport {
            power: k,
            hessian_power_zero: true,
            laplacians_zero: vec![zero; seq.torder()],
            hessian_slices_nilpotent: vec![zero; seq.torder()],
        });
    }
    let hessian_power_zero = p.hessian()?.pow(k)?.is_zero();
    let laplacians_zero = seq
        .terms
        .par_iter()
        .map(|q| q.laplacian().map(|l| l.is_zero()))
        .collect::<Result<_>>()?;
    let hes_t = seq.as_graded().gradient()?.jacobian()?.pow(k)?;
    let hessian_slices_nilpotent = (0..hes_t.len_t())
        .map(|j| hes_t.slice(j).map(|m| m.is_zero()))
        .collect::<Result<_>>()?;
    Ok(HarmonicityReport {
        power: k,
        hessian_power_zero,
        laplacians_zero,
        hessian_slices_nilpotent,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JcVerdict {
    /// `Q_[m] = 0` for `M0 < m <= M0 + window`; carries `M0`.
    PolynomialWitnessed(usize),
    /// Nonzero slices persist too close to the computed bound.
    Undecided,
}

impl fmt::Display for JcVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JcVerdict::PolynomialWitnessed(m0) => write!(f, "POLYNOMIAL_WITNESSED({m0})"),
            JcVerdict::Undecided => f.write_str("UNDECIDED"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JcScan {
    pub verdict: JcVerdict,
    /// Largest `m <= M` with `Q_[m] != 0`, or 0 when all vanish.
    pub last_nonzero: usize,
    /// Every slice was computed exactly and `Q_[m] = 0` on
    /// `last_nonzero < m <= 2·last_nonzero`. Each later slice is then a sum
    /// of products involving an index in that range, so `Q_t` is a
    /// polynomial in `t` of degree `last_nonzero - 1`.
    pub proven: bool,
    pub sequence: QSequence,
}

/// Scans `Q_t` of a homogeneous `P` with nilpotent Hessian for
/// `t`-polynomiality.
///
/// `P` is lifted to truncation `max(trunc, (d-2)M + 2)`, so that each
/// homogeneous `Q_[m]` of degree `(d-2)m + 2` is computed exactly and a
/// vanishing slice is a genuine zero.
pub fn jc_scan(p: &TruncatedSeries, torder: usize, window: usize) -> Result<JcScan> {
    if torder == 0 {
        return Err(Error::ZeroTOrder);
    }
    if !p.poly().is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let d = p.poly().degree();
    if let Some(d) = d {
        if d < 2 {
            return Err(Error::OrderTooLow { required: 2, found: d });
        }
    }
    let needed = d.map_or(0, |d| (d - 2) * torder as u32 + 2);
    let p = p.retruncate_polynomial(p.trunc().max(needed).max(d.unwrap_or(0)));
    if !p.is_zero() && !p.hessian()?.pow(p.nvars() as u32)?.is_zero() {
        return Err(Error::NotNilpotent);
    }

    let sequence = compute_q_sequence(&p, torder)?;
    let last_nonzero = sequence
        .terms
        .iter()
        .rposition(|q| !q.is_zero())
        .map_or(0, |i| i + 1);
    let verdict = if last_nonzero + window <= torder {
        JcVerdict::PolynomialWitnessed(last_nonzero)
    } else {
        JcVerdict::Undecided
    };
    Ok(JcScan {
        verdict,
        last_nonzero,
        proven: torder >= 2 * last_nonzero,
        sequence,
    })
}

/// `Σ_m Q_[m]·t0^{m-1}`; equals `Q_{t0}` once the sequence has terminated.
pub fn evaluate_polynomial_flow(seq: &QSequence, t0: &GaussianRational) -> Result<TruncatedSeries> {
    let mut power = GaussianRational::one();
    let mut acc = TruncatedSeries::zero(seq.nvars(), seq.trunc);
    for q in &seq.terms {
        acc = acc.add(&q.scale(&power))?;
        power = &power * t0;
    }
    Ok(acc)
}
