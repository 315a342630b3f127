//! Test inputs and independent oracles.
//!
//! The oracles deliberately avoid the library's series kernel: they work on
//! dense coefficient vectors or plain strings.

#![allow(dead_code)]

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::Rng;

use finv_core::{FormalMap, GaussianRational, Monomial, Poly, TruncatedSeries};

pub fn q(s: &str) -> GaussianRational {
    s.parse().unwrap()
}

pub fn series(nvars: usize, trunc: u32, terms: &[(&[u32], &str)]) -> TruncatedSeries {
    TruncatedSeries::new(
        Poly::from_terms(nvars, terms.iter().map(|(e, c)| (e.iter().copied(), q(c)))).unwrap(),
        trunc,
    )
}

pub fn series1(trunc: u32, terms: &[(u32, &str)]) -> TruncatedSeries {
    TruncatedSeries::new(
        Poly::from_terms(1, terms.iter().map(|&(e, c)| ([e], q(c)))).unwrap(),
        trunc,
    )
}

/// Small rational, occasionally with an imaginary part.
pub fn random_coeff(rng: &mut StdRng) -> GaussianRational {
    let re = nonzero_ratio(rng);
    if rng.gen_bool(0.25) {
        re + GaussianRational::i() * nonzero_ratio(rng)
    } else {
        re
    }
}

fn nonzero_ratio(rng: &mut StdRng) -> GaussianRational {
    loop {
        let n = rng.gen_range(-3i64..=3);
        if n != 0 {
            return GaussianRational::ratio(n, rng.gen_range(1i64..=3));
        }
    }
}

fn random_monomial(rng: &mut StdRng, nvars: usize, degree: u32) -> Monomial {
    let mut e = vec![0u32; nvars];
    for _ in 0..degree {
        e[rng.gen_range(0..nvars)] += 1;
    }
    Monomial::new(e)
}

/// A polynomial with 1..=max_terms terms of degrees in `degrees`.
pub fn random_poly(
    rng: &mut StdRng,
    nvars: usize,
    degrees: std::ops::RangeInclusive<u32>,
    max_terms: usize,
) -> Poly {
    loop {
        let mut p = Poly::zero(nvars);
        for _ in 0..rng.gen_range(1..=max_terms) {
            let d = rng.gen_range(degrees.clone());
            p.add_term(random_monomial(rng, nvars, d), random_coeff(rng));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// `H` with `o(H) >= 2` and `deg H <= 4`; components may vanish.
pub fn random_map(rng: &mut StdRng, trunc: u32) -> FormalMap {
    let n = rng.gen_range(1..=3);
    loop {
        let comps: Vec<_> = (0..n)
            .map(|_| {
                if n > 1 && rng.gen_bool(0.2) {
                    TruncatedSeries::zero(n, trunc)
                } else {
                    TruncatedSeries::new(random_poly(rng, n, 2..=4, 3), trunc)
                }
            })
            .collect();
        let h = FormalMap::new(comps).unwrap();
        if !h.is_zero() {
            return h;
        }
    }
}

/// Homogeneous `H` of degree `d`.
pub fn random_homogeneous_map(rng: &mut StdRng, n: usize, d: u32, trunc: u32) -> FormalMap {
    FormalMap::new(
        (0..n)
            .map(|_| TruncatedSeries::new(random_poly(rng, n, d..=d, 2), trunc))
            .collect(),
    )
    .unwrap()
}

/// Potential with `o(P) >= min_order` and `deg P <= 4`.
pub fn random_potential(rng: &mut StdRng, min_order: u32, trunc: u32) -> TruncatedSeries {
    let n = rng.gen_range(1..=3);
    TruncatedSeries::new(random_poly(rng, n, min_order..=4, 4), trunc)
}

/// `(z1 + i·z2)^d`, expanded term by term from the binomial theorem.
pub fn linear_power(d: u32, trunc: u32) -> TruncatedSeries {
    let mut p = Poly::zero(2);
    let mut binom = BigInt::one();
    let mut i_pow = GaussianRational::from(1);
    for k in 0..=d {
        p.add_term(
            Monomial::new([d - k, k]),
            GaussianRational::from(binom.clone()) * &i_pow,
        );
        binom = binom * BigInt::from(d - k) / BigInt::from(k + 1);
        i_pow = i_pow * GaussianRational::i();
    }
    TruncatedSeries::new(p, trunc)
}

type Dense = Vec<BigRational>;

fn dense_mul(a: &[BigRational], b: &[BigRational], len: usize) -> Dense {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients `[z^1 … z^max_degree]` of the inverse of `z - h(z)` for a
/// one-variable real `h` with `o(h) >= 2`, by Lagrange inversion:
/// `[z^n]G = (1/n)·[w^{n-1}] (1 - h(w)/w)^{-n}`.
pub fn lagrange_inverse(h: &[(u32, i64)], max_degree: usize) -> Vec<BigRational> {
    let len = max_degree;
    // u(w) = h(w)/w, so 1 - u has constant term 1.
    let mut u = vec![BigRational::zero(); len];
    for &(e, c) in h {
        assert!(e >= 2, "order at least 2");
        if ((e - 1) as usize) < len {
            u[(e - 1) as usize] += BigRational::from_integer(c.into());
        }
    }
    // (1 - u)^{-1} = Σ u^k.
    let mut geom = vec![BigRational::zero(); len];
    let mut power = vec![BigRational::zero(); len];
    power[0] = BigRational::one();
    for _ in 0..len {
        for (g, p) in geom.iter_mut().zip(&power) {
            *g += p;
        }
        power = dense_mul(&power, &u, len);
    }
    let mut out = Vec::with_capacity(max_degree);
    let mut pow_n = vec![BigRational::zero(); len];
    pow_n[0] = BigRational::one();
    for n in 1..=max_degree {
        pow_n = dense_mul(&pow_n, &geom, len);
        out.push(&pow_n[n - 1] / BigRational::from_integer(BigInt::from(n)));
    }
    out
}

/// `(1/n)·C(2n-2, n-1)`.
pub fn catalan(n: u64) -> BigInt {
    let mut c = BigInt::one();
    for k in 0..(n - 1) {
        c = c * BigInt::from(2 * (n - 1) - k) / BigInt::from(k + 1);
    }
    c / BigInt::from(n)
}

/// Canonical string of an ordered binary tree given as nested parentheses:
/// children are sorted recursively as strings.
fn canonical_string(s: &str) -> String {
    let inner = &s[1..s.len() - 1];
    if inner.is_empty() {
        return "()".into();
    }
    let mut depth = 0;
    let mut split = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    split = i + 1;
                    break;
                }
            }
            _ => unreachable!(),
        }
    }
    let mut kids = [canonical_string(&inner[..split]), canonical_string(&inner[split..])];
    kids.sort();
    format!("({}{})", kids[0], kids[1])
}

/// Every ordered binary tree with `m` leaves, as strings.
fn ordered_trees(m: usize) -> Vec<String> {
    if m == 1 {
        return vec!["()".into()];
    }
    let mut out = Vec::new();
    for a in 1..m {
        for l in ordered_trees(a) {
            for r in ordered_trees(m - a) {
                out.push(format!("({l}{r})"));
            }
        }
    }
    out
}

/// Isomorphism classes with `m` leaves: generate all ordered trees and
/// dedupe by canonical string.
pub fn brute_force_classes(m: usize) -> HashSet<String> {
    ordered_trees(m).iter().map(|s| canonical_string(s)).collect()
}

/// `G = z + H(G)` by fixed-point iteration with plain term-by-term
/// substitution; `trunc` rounds of iteration fix every degree.
pub fn fixed_point_inverse(h: &FormalMap) -> Vec<Poly> {
    let n = h.nvars();
    let d = h.trunc();
    let mut g: Vec<Poly> = (0..n).map(|i| Poly::var(n, i)).collect();
    for _ in 0..d {
        g = (0..n)
            .map(|i| {
                let mut out = Poly::var(n, i);
                for (m, c) in h.component(i).poly().iter() {
                    let mut term = Poly::constant(n, c.clone());
                    for (v, &e) in m.exponents().iter().enumerate() {
                        for _ in 0..e {
                            term = term.mul_truncated(&g[v], Some(d)).unwrap();
                        }
                    }
                    out = out.add(&term).unwrap();
                }
                out
            })
            .collect();
    }
    g
}
