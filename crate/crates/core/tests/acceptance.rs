//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p finv-core --test acceptance`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::SeedableRng;

use finv_core::inversion::{
    assemble_inverse, compute_n_sequence, shifted_inverse_pair, verify_inverse,
};
use finv_core::symmetric::{
    burgers_residual, check_harmonicity, compute_q_sequence, half_square_norm, jc_scan,
    legendre_transform, JcVerdict,
};
use finv_core::trees::{enumerate_up_to, tree_expansion_q, GeneralTree};
use finv_core::{FormalMap, GaussianRational, Monomial, Order, TruncatedSeries};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn sample_maps() -> Vec<FormalMap> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    (0..25).map(|_| random_map(&mut rng, 12)).collect()
}

fn sample_potentials() -> Vec<TruncatedSeries> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0003);
    (0..10).map(|_| random_potential(&mut rng, 2, 10)).collect()
}

fn ac1_composition_identity() -> Outcome {
    for (k, h) in sample_maps().iter().enumerate() {
        let seq = compute_n_sequence(h, 12).map_err(e)?;
        let g = assemble_inverse(&seq, &q("1")).map_err(e)?;
        ensure(g.trunc() == 12, || format!("map {k}: inverse only exact to degree {}", g.trunc()))?;
        let f = FormalMap::identity(h.nvars(), 12).sub(h).map_err(e)?;
        ensure(verify_inverse(&f, &g).map_err(e)?, || format!("map {k}: not an inverse"))?;
    }
    Ok("25 random maps, trunc 12, both composition orders exact".into())
}

fn ac2_catalan() -> Outcome {
    let h = FormalMap::new(vec![series1(8, &[(2, "1")])]).map_err(e)?;
    let seq = compute_n_sequence(&h, 8).map_err(e)?;
    let g = assemble_inverse(&seq, &q("1")).map_err(e)?;
    let oracle = lagrange_inverse(&[(2, 1)], 8);
    let expected = [1, 1, 2, 5, 14, 42, 132, 429];
    for n in 1..=8u32 {
        let c = g.component(0).coeff(&Monomial::new([n]));
        let want = GaussianRational::from(expected[n as usize - 1] as i64);
        ensure(c == want, || format!("degree {n}: got {c}, expected {want}"))?;
        let lagrange = GaussianRational::from(oracle[n as usize - 1].clone());
        ensure(c == lagrange, || format!("degree {n}: Lagrange oracle gives {lagrange}"))?;
        let closed = GaussianRational::from(catalan(u64::from(n)));
        ensure(c == closed, || format!("degree {n}: closed form gives {closed}"))?;
    }
    Ok("1, 1, 2, 5, 14, 42, 132, 429 matches Lagrange inversion".into())
}

fn ac3_tree_expansion() -> Outcome {
    for (k, p) in sample_potentials().iter().enumerate() {
        let seq = compute_q_sequence(p, 6).map_err(e)?;
        for m in 1..=6 {
            let tree = tree_expansion_q(p, m).map_err(e)?;
            ensure(&tree == seq.term(m), || format!("potential {k}, m = {m}: sums differ"))?;
        }
    }
    Ok("10 random potentials, m = 1..6, exact equality".into())
}

fn ac4_burgers_residual() -> Outcome {
    for (k, p) in sample_potentials().iter().enumerate() {
        let seq = compute_q_sequence(p, 6).map_err(e)?;
        let r = burgers_residual(&seq).map_err(e)?;
        ensure(r.slices.len() == 5, || format!("potential {k}: {} residual slices", r.slices.len()))?;
        ensure(r.trunc() >= Some(10), || format!("potential {k}: residual known to {:?}", r.trunc()))?;
        ensure(r.is_zero(), || format!("potential {k}: nonzero residual"))?;
    }
    Ok("residual zero through t^4 (five slices) and z-degree 10".into())
}

fn ac5_gradient_consistency() -> Outcome {
    for (k, p) in sample_potentials().iter().enumerate() {
        let qs = compute_q_sequence(p, 6).map_err(e)?;
        let ns = compute_n_sequence(&p.gradient().map_err(e)?, 6).map_err(e)?;
        for m in 1..=6 {
            let g = qs.term(m).gradient().map_err(e)?;
            ensure(&g == ns.term(m), || format!("potential {k}, m = {m}: ∇Q differs from N"))?;
        }
        let jn = ns.as_graded().map_err(e)?.jacobian().map_err(e)?;
        for j in 0..jn.len_t() {
            ensure(jn.slice(j).map_err(e)?.is_symmetric(), || {
                format!("potential {k}: slice {j} of JN_t not symmetric")
            })?;
        }
    }
    Ok("∇Q_[m] = N_[m] for m <= 6 and JN_t slices symmetric".into())
}

fn ac6_nilpotency() -> Outcome {
    for d in [3, 4] {
        let p = linear_power(d, 10);
        let seq = compute_q_sequence(&p, 6).map_err(e)?;
        let r = check_harmonicity(&p, &seq, 2).map_err(e)?;
        ensure(r.hessian_power_zero, || format!("d = {d}: Hes(P)^2 != 0"))?;
        ensure(r.harmonic(), || format!("d = {d}: some ΔQ_[m] != 0"))?;
        ensure(r.hessian_flow_nilpotent(), || format!("d = {d}: Hes(Q_t)^2 != 0"))?;
    }
    let p = series(2, 10, &[(&[2, 1], "1")]);
    let seq = compute_q_sequence(&p, 6).map_err(e)?;
    let r = check_harmonicity(&p, &seq, 2).map_err(e)?;
    ensure(!r.hessian_power_zero, || "z1²z2: Hes(P)^2 reported zero".into())?;
    ensure(!r.harmonic(), || "z1²z2: reported harmonic".into())?;
    ensure(!r.hessian_flow_nilpotent(), || "z1²z2: Hes(Q_t)^2 reported zero".into())?;
    Ok("(z1+iz2)^3, (z1+iz2)^4 pass all three; z1²z2 fails all three".into())
}

fn ac7_order_and_degree_bounds() -> Outcome {
    for (k, h) in sample_maps().iter().enumerate() {
        let seq = compute_n_sequence(h, 12).map_err(e)?;
        let deg_h = h.degree().unwrap_or(0);
        for m in 1..=12u32 {
            let n_m = seq.term(m as usize);
            if let Order::Finite(o) = n_m.order() {
                ensure(o > m, || format!("map {k}: o(N_[{m}]) = {o}"))?;
            }
            if let Some(deg) = n_m.degree() {
                let bound = (deg_h - 1) * m + 1;
                ensure(deg <= bound, || format!("map {k}: deg N_[{m}] = {deg} > {bound}"))?;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut checked = 0;
    for (n, d) in [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)] {
        let h = random_homogeneous_map(&mut rng, n, d, 14);
        let torder = ((14 - 1) / (d - 1)) as usize;
        let seq = compute_n_sequence(&h, torder).map_err(e)?;
        for m in 1..=torder as u32 {
            let target = (d - 1) * m + 1;
            ensure(seq.term(m as usize).is_homogeneous_of_degree(target), || {
                format!("homogeneous degree {d}, n = {n}: N_[{m}] not of degree {target}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("bounds on 25 maps x 12 slices; {checked} homogeneous slices"))
}

fn ac8_shifted_pairs() -> Outcome {
    let h = FormalMap::new(vec![series1(10, &[(2, "1")])]).map_err(e)?;
    let seq = compute_n_sequence(&h, 10).map_err(e)?;
    for s in ["1", "1/2"] {
        for t0 in ["0", "1/2"] {
            let (u, v) = shifted_inverse_pair(&seq, &q(s), &q(t0)).map_err(e)?;
            ensure(u.trunc() == 10 && v.trunc() == 10, || format!("s = {s}, t0 = {t0}: truncated early"))?;
            ensure(verify_inverse(&u, &v).map_err(e)?, || format!("s = {s}, t0 = {t0}: not inverse"))?;
        }
    }
    Ok("four (s, t0) pairs invert at trunc 10".into())
}

fn ac9_trees() -> Outcome {
    let levels = enumerate_up_to(8);
    let expected = [1, 1, 1, 2, 3, 6, 11, 23];
    for (k, level) in levels.iter().enumerate() {
        let oracle = brute_force_classes(k + 1);
        ensure(level.len() == expected[k], || format!("l = {}: {} trees", k + 1, level.len()))?;
        let ours: std::collections::HashSet<String> =
            level.iter().map(|t| t.encoding().to_owned()).collect();
        ensure(ours.len() == level.len(), || format!("l = {}: duplicates", k + 1))?;
        ensure(ours == oracle, || format!("l = {}: differs from brute force", k + 1))?;
        for t in level {
            ensure(t.beta() == t.beta_recursive(), || format!("β mismatch for {t}"))?;
        }
    }
    let mut fact = BigUint::from(1u32);
    for m in 1..=10u32 {
        fact *= m;
        ensure(GeneralTree::chain(m as usize).factorial() == fact, || format!("C_{m}! != {m}!"))?;
    }
    Ok("counts 1,1,1,2,3,6,11,23; C_m! = m!; both β formulas agree".into())
}

fn ac10_legendre() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_000a);
    for k in 0..10 {
        let p = random_potential(&mut rng, 3, 8);
        let f = half_square_norm(p.nvars(), 8).sub(&p).map_err(e)?;
        let fbar = legendre_transform(&f).map_err(e)?;
        let grad_f = f.gradient().map_err(e)?;
        let grad_fbar = fbar.gradient().map_err(e)?;
        let d = grad_f.trunc();
        let id = FormalMap::identity(f.nvars(), d);
        ensure(grad_fbar.compose(&grad_f).map_err(e)?.eq_mod(&id, d), || {
            format!("sample {k}: ∇f̄ ∘ ∇f != id")
        })?;
        let back = legendre_transform(&fbar).map_err(e)?;
        ensure(back.eq_mod(&f, 8), || format!("sample {k}: transform is not an involution"))?;
    }
    Ok("10 random f, trunc 8: ∇f̄ ∘ ∇f = id and f̄̄ = f".into())
}

fn ac11_jc_scan() -> Outcome {
    for d in [3, 4] {
        let p = linear_power(d, d);
        let scan = jc_scan(&p, 10, 5).map_err(e)?;
        ensure(scan.verdict == JcVerdict::PolynomialWitnessed(1), || {
            format!("d = {d}: verdict {}", scan.verdict)
        })?;
        ensure(scan.sequence.term(1).poly() == p.poly(), || format!("d = {d}: Q_[1] != P"))?;
        ensure(
            scan.sequence.terms()[1..].iter().all(TruncatedSeries::is_zero),
            || format!("d = {d}: Q_t depends on t"),
        )?;
    }
    Ok("POLYNOMIAL_WITNESSED(1) with Q_t = P for d = 3, 4 (the general conjecture is not decided)".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("composition identity", ac1_composition_identity),
        ("Catalan regression", ac2_catalan),
        ("recurrence equals tree expansion", ac3_tree_expansion),
        ("Burgers residual", ac4_burgers_residual),
        ("gradient consistency", ac5_gradient_consistency),
        ("nilpotency equivalences", ac6_nilpotency),
        ("order and degree bounds", ac7_order_and_degree_bounds),
        ("shifted inverse pairs", ac8_shifted_pairs),
        ("tree combinatorics", ac9_trees),
        ("Legendre involution", ac10_legendre),
        ("jc-scan witnesses", ac11_jc_scan),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("[PASS] AC{:<2} {name}: {detail} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] AC{:<2} {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
