//! The general recurrent inversion of `F = z - H`.
//!
//! `N_t` solves the Cauchy problem `∂N/∂t = JN·N`, `N_0 = H`. Comparing
//! `t`-coefficients gives the slice recurrence
//!
//! ```text
//! N_[1] = H,    N_[m] = 1/(m-1) · Σ_{k+l=m} JN_[k] · N_[l]    (m >= 2)
//! ```
//!
//! which [`compute_n_sequence`] runs. Everything is kept modulo total degree
//! `> D`, where `D` is the truncation of `H`. Because `o(N_[l]) >= 1`, a
//! Jacobian entry known through `D - 1` multiplied by `N_[l]` is still known
//! through `D`, so no precision is lost along the recurrence.
//!
//! When `o(H) >= 2` the slices satisfy `o(N_[m]) >= m + 1`, which makes
//! evaluation at a numeric `t` degree-finite; with only `o(H) = 1` it is not,
//! and evaluation at `t != 0` is refused.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::coefficients::GaussianRational;
use crate::error::{Error, Result};
use crate::graded::{compose_series, GradedMap, GradedSeries};
use crate::series::{FormalMap, SeriesMatrix, TruncatedSeries};

/// The slices `[N_[1], …, N_[M]]` of `N_t` for a given `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NSequence {
    h: FormalMap,
    terms: Vec<FormalMap>,
    trunc: u32,
}

impl NSequence {
    pub fn h(&self) -> &FormalMap {
        &self.h
    }

    /// `[N_[1], …, N_[M]]`.
    pub fn terms(&self) -> &[FormalMap] {
        &self.terms
    }

    /// `N_[m]` for `1 <= m <= M`.
    pub fn term(&self, m: usize) -> &FormalMap {
        &self.terms[m - 1]
    }

    /// The `t`-order bound `M`.
    pub fn torder(&self) -> usize {
        self.terms.len()
    }

    /// Largest `z`-degree through which every slice is exact.
    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn nvars(&self) -> usize {
        self.h.nvars()
    }

    /// Whether `o(H) >= 2`, the condition for evaluating at numeric `t`.
    pub fn evaluable(&self) -> bool {
        self.h.order_bound() >= 2
    }

    /// Highest `z`-degree through which `Σ_{m<=M} N_[m] t0^{m-1}` agrees
    /// with `N_{t0}` when `t0 != 0`: the first omitted slice has order
    /// `>= M + 2`.
    pub fn exact_degree_at_nonzero_t(&self) -> u32 {
        self.trunc.min(self.torder() as u32 + 1)
    }

    /// `N_t` evaluated at `t = t0`, truncated to the degrees it determines.
    pub fn evaluate(&self, t0: &GaussianRational) -> Result<FormalMap> {
        if t0.is_zero() {
            return Ok(self.terms[0].clone());
        }
        if !self.evaluable() {
            return Err(Error::NonFiniteEvaluation);
        }
        let exact = self.exact_degree_at_nonzero_t();
        let mut power = GaussianRational::one();
        let mut acc = FormalMap::zero(self.nvars(), exact);
        for term in &self.terms {
            acc = acc.add(&term.scale(&power).truncate_to(exact))?;
            power = &power * t0;
        }
        Ok(acc)
    }

    /// `N_t` as a graded map with slices `N_[1], …, N_[M]` at `t^0 … t^{M-1}`.
    pub fn as_graded(&self) -> Result<GradedMap> {
        GradedMap::from_slices(&self.terms)
    }

    /// `G_t - z = tN_t` as a graded map known modulo `t^{M+1}`.
    fn shift_graded(&self) -> Result<GradedMap> {
        let zero = FormalMap::zero(self.nvars(), self.trunc);
        let mut slices = Vec::with_capacity(self.torder() + 1);
        slices.push(zero);
        slices.extend(self.terms.iter().cloned());
        GradedMap::from_slices(&slices)
    }
}

/// `Σ_{k+l=m} J_k · N_[l]`, summed in a fixed order so results are
/// deterministic regardless of how the products were scheduled.
fn convolve(jacobians: &[SeriesMatrix], terms: &[FormalMap], m: usize) -> Result<FormalMap> {
    let products = (1..m)
        .into_par_iter()
        .map(|k| jacobians[k - 1].mul_vec(&terms[m - k - 1]))
        .collect::<Vec<_>>();
    let mut iter = products.into_iter();
    let mut acc = iter.next().expect("m >= 2")?;
    for p in iter {
        acc = acc.add(&p?)?;
    }
    Ok(acc)
}

/// Runs the slice recurrence for `N_t` up to `t`-order `torder`.
pub fn compute_n_sequence(h: &FormalMap, torder: usize) -> Result<NSequence> {
    if torder == 0 {
        return Err(Error::ZeroTOrder);
    }
    h.check_constant_free()?;
    let d = h.trunc();
    let n = h.nvars();

    // Nothing nonzero is known below degree 1 once the constant term is 0.
    if h.is_zero() || d == 0 {
        let mut terms = vec![h.clone()];
        terms.resize(torder, FormalMap::zero(n, d));
        return Ok(NSequence {
            h: h.clone(),
            terms,
            trunc: d,
        });
    }

    let mut terms = vec![h.clone()];
    let mut jacobians = vec![h.jacobian()?];
    let mut trunc = d;
    for m in 2..=torder {
        let sum = convolve(&jacobians, &terms, m)?;
        let next = sum
            .scale(&GaussianRational::ratio(1, (m - 1) as i64))
            .truncate_to(d);
        trunc = trunc.min(next.trunc());
        if m < torder {
            jacobians.push(next.jacobian()?);
        }
        terms.push(next);
    }
    Ok(NSequence {
        h: h.clone(),
        terms,
        trunc,
    })
}

/// `G_{t0}(z) = z + Σ_{m=1}^{M} N_[m](z)·t0^{m-1}`.
///
/// At `t0 = 0` this is the identity. Otherwise `o(H) >= 2` is required and
/// the result is truncated at the degree the `M` computed slices determine.
pub fn assemble_inverse(seq: &NSequence, t0: &GaussianRational) -> Result<FormalMap> {
    let id = FormalMap::identity(seq.nvars(), seq.trunc());
    if t0.is_zero() {
        return Ok(id);
    }
    let n_t = seq.evaluate(t0)?;
    id.add(&n_t.scale(t0))
}

/// Whether `f ∘ g` and `g ∘ f` are both the identity modulo degree `> D`,
/// `D` being the smaller of the two truncations.
pub fn verify_inverse(f: &FormalMap, g: &FormalMap) -> Result<bool> {
    if f.nvars() != g.nvars() {
        return Err(Error::DimensionMismatch {
            expected: f.nvars(),
            found: g.nvars(),
        });
    }
    f.check_constant_free()?;
    g.check_constant_free()?;
    let d = f.trunc().min(g.trunc());
    let id = FormalMap::identity(f.nvars(), d);
    Ok(f.compose(g)?.eq_mod(&id, d) && g.compose(f)?.eq_mod(&id, d))
}

/// Outcome of the nilpotency equivalence checks, all modulo truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    pub power: u32,
    /// `(JH)^k = 0`.
    pub jh_power_zero: bool,
    /// Entry `j`: the `t^j` slice of `Tr JN_t` vanishes.
    pub trace_slices_zero: Vec<bool>,
    /// Entry `j`: the `t^j` slice of `(JN_t)^k` vanishes.
    pub jn_power_slices_zero: Vec<bool>,
}

impl NilpotencyReport {
    pub fn traces_vanish(&self) -> bool {
        self.trace_slices_zero.iter().all(|&b| b)
    }

    pub fn jn_power_vanishes(&self) -> bool {
        self.jn_power_slices_zero.iter().all(|&b| b)
    }

    /// `(JH)^k = 0 ⇔ (JN_t)^k = 0` always; when `k >= n` both are also
    /// equivalent to `Tr JN_t = 0`.
    pub fn consistent(&self, nvars: usize) -> bool {
        let powers_agree = self.jh_power_zero == self.jn_power_vanishes();
        if self.power as usize >= nvars {
            powers_agree && self.jh_power_zero == self.traces_vanish()
        } else {
            powers_agree
        }
    }
}

pub fn check_nilpotency_equivalence(
    h: &FormalMap,
    seq: &NSequence,
    k: u32,
) -> Result<NilpotencyReport> {
    assert!(k >= 1, "power must be at least 1");
    let jh_power_zero = h.jacobian()?.pow(k)?.is_zero();
    let jn = seq.as_graded()?.jacobian()?;
    let trace = jn.trace()?;
    let power = jn.pow(k)?;
    let jn_power_slices_zero = (0..power.len_t())
        .map(|j| power.slice(j).map(|m| m.is_zero()))
        .collect::<Result<_>>()?;
    Ok(NilpotencyReport {
        power: k,
        jh_power_zero,
        trace_slices_zero: trace.slices().iter().map(TruncatedSeries::is_zero).collect(),
        jn_power_slices_zero,
    })
}

/// `(U_{s,t0}, V_{s,t0}) = (z - s·N_{t0}, z + s·N_{t0+s})`, a mutually
/// inverse pair.
pub fn shifted_inverse_pair(
    seq: &NSequence,
    s: &GaussianRational,
    t0: &GaussianRational,
) -> Result<(FormalMap, FormalMap)> {
    let id = FormalMap::identity(seq.nvars(), seq.trunc());
    if s.is_zero() {
        return Ok((id.clone(), id));
    }
    let t1 = t0 + s;
    if !t0.is_zero() || !t1.is_zero() {
        if !seq.evaluable() {
            return Err(Error::NonFiniteEvaluation);
        }
        let exact = seq.exact_degree_at_nonzero_t();
        if exact < seq.trunc() {
            return Err(Error::InsufficientTOrder {
                computed: seq.torder(),
                exact,
                requested: seq.trunc(),
            });
        }
    }
    let u = id.sub(&seq.evaluate(t0)?.scale(s))?;
    let v = id.add(&seq.evaluate(&t1)?.scale(s))?;
    Ok((u, v))
}

/// The `t`-coefficients `[U_0, …, U_torder]` of `U(z + tN_t(z))`.
pub fn transport(u: &TruncatedSeries, seq: &NSequence, torder: usize) -> Result<Vec<TruncatedSeries>> {
    if torder > seq.torder() {
        return Err(Error::TOrderExceeded {
            requested: torder,
            available: seq.torder(),
        });
    }
    let shift = seq.shift_graded()?;
    let g_t = GradedMap::new(
        (0..seq.nvars())
            .map(|i| {
                let mut slices = shift.component(i).slices().to_vec();
                slices[0] = TruncatedSeries::var(seq.nvars(), i, seq.trunc());
                GradedSeries::new(slices)
            })
            .collect(),
    )?;
    Ok(compose_series(u, &g_t, torder + 1)?.into_slices())
}

/// `(m-1)·N_[m] - Σ_{k+l=m} JN_[k]·N_[l]` for `m = 2..=M`, recomputed from
/// the stored slices. Every entry is zero for a correct sequence.
pub fn recurrence_residual(seq: &NSequence) -> Result<Vec<FormalMap>> {
    let jacobians = seq
        .terms
        .iter()
        .map(FormalMap::jacobian)
        .collect::<Result<Vec<_>>>()?;
    (2..=seq.torder())
        .map(|m| {
            let lhs = seq.term(m).scale(&GaussianRational::from((m - 1) as i64));
            lhs.sub(&convolve(&jacobians, &seq.terms, m)?)
        })
        .collect()
}

/// The `t`-slices of `N_t(F_t(z))` with `F_t = z - tH`. For a correct
/// sequence slice 0 is `H` and all others vanish.
pub fn composition_identity(seq: &NSequence) -> Result<Vec<FormalMap>> {
    let f_t = GradedMap::deformation(&seq.h, seq.torder())?;
    let composed = seq.as_graded()?.compose(&f_t)?;
    (0..composed.len_t()).map(|j| composed.slice(j)).collect()
}

/// For `k = 1..=M`, whether the `t^{k-1}` slice of `JN_t(F_t)` equals
/// `(JH)^k`.
pub fn jacobian_power_identity(seq: &NSequence) -> Result<Vec<bool>> {
    let f_t = GradedMap::deformation(&seq.h, seq.torder())?;
    let composed = seq.as_graded()?.jacobian()?.compose(&f_t)?;
    let jh = seq.h.jacobian()?;
    let mut power = jh.clone();
    let mut out = Vec::with_capacity(composed.len_t());
    for j in 0..composed.len_t() {
        let slice = composed.slice(j)?;
        let d = slice.trunc().min(power.trunc());
        out.push(slice.eq_mod(&power, d));
        power = power.mul(&jh)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Monomial;
    use crate::testutil::{linear_power, map, q, series, series1};

    fn catalan_h(trunc: u32) -> FormalMap {
        map(vec![series1(trunc, &[(2, "1")])])
    }

    #[test]
    fn catalan_slices() {
        let seq = compute_n_sequence(&catalan_h(8), 4).unwrap();
        assert_eq!(seq.term(1).component(0), &series1(8, &[(2, "1")]));
        assert_eq!(seq.term(2).component(0), &series1(8, &[(3, "2")]));
        assert_eq!(seq.term(3).component(0), &series1(8, &[(4, "5")]));
        assert_eq!(seq.term(4).component(0), &series1(8, &[(5, "14")]));
        assert_eq!(seq.trunc(), 8);
    }

    #[test]
    fn triangular_map_has_one_slice() {
        let h = map(vec![series(2, 6, &[(&[0, 2], "1")]), series(2, 6, &[])]);
        let seq = compute_n_sequence(&h, 5).unwrap();
        assert_eq!(seq.term(1), &h);
        for m in 2..=5 {
            assert!(seq.term(m).is_zero(), "N_[{m}]");
        }
        let g = assemble_inverse(&seq, &q("1")).unwrap();
        assert_eq!(
            g,
            map(vec![series(2, 6, &[(&[1, 0], "1"), (&[0, 2], "1")]), series(2, 6, &[(&[0, 1], "1")])])
        );
    }

    #[test]
    fn zero_map_short_circuits() {
        let seq = compute_n_sequence(&FormalMap::zero(3, 5), 4).unwrap();
        assert!(seq.terms().iter().all(FormalMap::is_zero));
        assert_eq!(seq.torder(), 4);
        assert_eq!(
            assemble_inverse(&seq, &q("1")).unwrap(),
            FormalMap::identity(3, 5)
        );
    }

    #[test]
    fn precondition_errors() {
        let h = map(vec![series1(4, &[(0, "1"), (2, "1")])]);
        assert_eq!(compute_n_sequence(&h, 3), Err(Error::ConstantTerm { component: 0 }));
        assert_eq!(compute_n_sequence(&catalan_h(4), 0), Err(Error::ZeroTOrder));

        let linear = map(vec![series(2, 4, &[(&[0, 1], "1")]), series(2, 4, &[])]);
        let seq = compute_n_sequence(&linear, 3).unwrap();
        assert_eq!(assemble_inverse(&seq, &q("1")), Err(Error::NonFiniteEvaluation));
        assert_eq!(assemble_inverse(&seq, &q("0")).unwrap(), FormalMap::identity(2, 4));
    }

    #[test]
    fn assemble_catalan() {
        let seq = compute_n_sequence(&catalan_h(5), 5).unwrap();
        let g = assemble_inverse(&seq, &q("1")).unwrap();
        assert_eq!(
            g,
            map(vec![series1(5, &[(1, "1"), (2, "1"), (3, "2"), (4, "5"), (5, "14")])])
        );
        assert_eq!(assemble_inverse(&seq, &q("0")).unwrap(), FormalMap::identity(1, 5));

        // Too few t-orders: only degrees <= M + 1 are determined.
        let short = compute_n_sequence(&catalan_h(8), 3).unwrap();
        assert_eq!(assemble_inverse(&short, &q("1")).unwrap().trunc(), 4);
    }

    #[test]
    fn verify_examples() {
        let f = map(vec![series1(5, &[(1, "1"), (2, "-1")])]);
        let g = map(vec![series1(5, &[(1, "1"), (2, "1"), (3, "2"), (4, "5"), (5, "14")])]);
        assert!(verify_inverse(&f, &g).unwrap());
        let id = FormalMap::identity(2, 4);
        assert!(verify_inverse(&id, &id).unwrap());
        let f3 = map(vec![series1(3, &[(1, "1"), (2, "-1")])]);
        let g3 = map(vec![series1(3, &[(1, "1"), (2, "1")])]);
        assert!(!verify_inverse(&f3, &g3).unwrap());
        assert!(matches!(
            verify_inverse(&f3, &id),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn nilpotency_for_isotropic_gradient() {
        let h = linear_power(3, 8).gradient().unwrap();
        let seq = compute_n_sequence(&h, 4).unwrap();
        let r = check_nilpotency_equivalence(&h, &seq, 2).unwrap();
        assert!(r.jh_power_zero && r.traces_vanish() && r.jn_power_vanishes());
        assert!(r.consistent(2));
    }

    #[test]
    fn nilpotency_for_triangular_map() {
        let h = map(vec![series(2, 6, &[(&[0, 2], "1")]), series(2, 6, &[])]);
        let seq = compute_n_sequence(&h, 3).unwrap();
        let r = check_nilpotency_equivalence(&h, &seq, 2).unwrap();
        assert!(r.jh_power_zero && r.traces_vanish() && r.jn_power_vanishes());
    }

    #[test]
    fn non_nilpotent_trace_shows_at_order_zero() {
        let h = map(vec![series(2, 6, &[(&[2, 0], "1")]), series(2, 6, &[])]);
        let seq = compute_n_sequence(&h, 3).unwrap();
        let r = check_nilpotency_equivalence(&h, &seq, 2).unwrap();
        assert!(!r.jh_power_zero);
        assert!(!r.trace_slices_zero[0]);
        assert!(!r.jn_power_vanishes());
        assert!(r.consistent(2));
        let trace0 = seq.as_graded().unwrap().jacobian().unwrap().trace().unwrap();
        assert_eq!(trace0.slice(0), &h.jacobian().unwrap().trace().unwrap());
        assert_eq!(trace0.slice(0).coeff(&Monomial::new([1, 0])), q("2"));
    }

    #[test]
    fn shifted_pairs() {
        let seq = compute_n_sequence(&catalan_h(6), 6).unwrap();
        let (u, v) = shifted_inverse_pair(&seq, &q("0"), &q("1/2")).unwrap();
        assert_eq!(u, FormalMap::identity(1, 6));
        assert_eq!(v, FormalMap::identity(1, 6));

        let (u, v) = shifted_inverse_pair(&seq, &q("1"), &q("0")).unwrap();
        assert_eq!(u, map(vec![series1(6, &[(1, "1"), (2, "-1")])]));
        assert_eq!(v, assemble_inverse(&seq, &q("1")).unwrap());
        assert!(verify_inverse(&u, &v).unwrap());

        let h = map(vec![series(2, 6, &[(&[0, 2], "1")]), series(2, 6, &[])]);
        let seq = compute_n_sequence(&h, 6).unwrap();
        let (u, v) = shifted_inverse_pair(&seq, &q("3/2"), &q("-2/3")).unwrap();
        assert_eq!(
            u,
            map(vec![series(2, 6, &[(&[1, 0], "1"), (&[0, 2], "-3/2")]), series(2, 6, &[(&[0, 1], "1")])])
        );
        assert_eq!(
            v,
            map(vec![series(2, 6, &[(&[1, 0], "1"), (&[0, 2], "3/2")]), series(2, 6, &[(&[0, 1], "1")])])
        );

        let short = compute_n_sequence(&catalan_h(8), 3).unwrap();
        assert!(matches!(
            shifted_inverse_pair(&short, &q("1"), &q("0")),
            Err(Error::InsufficientTOrder { .. })
        ));
    }

    #[test]
    fn transport_examples() {
        let seq = compute_n_sequence(&catalan_h(7), 4).unwrap();

        let coord = transport(&series1(7, &[(1, "1")]), &seq, 4).unwrap();
        assert_eq!(coord[0], series1(7, &[(1, "1")]));
        for (m, slice) in coord.iter().enumerate().skip(1) {
            assert_eq!(slice, seq.term(m).component(0));
        }

        let c = transport(&series1(7, &[(0, "3")]), &seq, 3).unwrap();
        assert_eq!(c[0], series1(7, &[(0, "3")]));
        assert!(c[1..].iter().all(TruncatedSeries::is_zero));

        let sq = transport(&series1(7, &[(2, "1")]), &seq, 2).unwrap();
        assert_eq!(sq[1], series1(7, &[(3, "2")]));

        assert!(matches!(
            transport(&series1(7, &[(2, "1")]), &seq, 5),
            Err(Error::TOrderExceeded { .. })
        ));
    }

    #[test]
    fn structural_identities_on_small_example() {
        let h = map(vec![
            series(2, 7, &[(&[1, 1], "1"), (&[0, 3], "-2")]),
            series(2, 7, &[(&[2, 0], "1/2")]),
        ]);
        let seq = compute_n_sequence(&h, 6).unwrap();
        assert!(recurrence_residual(&seq).unwrap().iter().all(FormalMap::is_zero));
        let slices = composition_identity(&seq).unwrap();
        assert!(slices[0].eq_mod(&h, 7));
        assert!(slices[1..].iter().all(FormalMap::is_zero));
        assert!(jacobian_power_identity(&seq).unwrap().iter().all(|&b| b));
    }
}
