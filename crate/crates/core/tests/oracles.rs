//! Cross-checks against closed forms computed independently of the library's
//! recurrences.

use delbound_core::constructions::{
    bound_for_distance, certify, lev_odd_poly, mrrw_bound_closed, mrrw_poly, BoundMethod,
};
use delbound_core::feasibility::Tolerances;
use delbound_core::lp_oracle::{binomial_int, code_zoo, delsarte_lp, hamming_7_4, krawtchouk_int, LpMode};
use delbound_core::orthopoly::{largest_zero, zeros};
use delbound_core::spaces::{hamming_space, sphere_space, MeasureVariant};
use delbound_core::spectral::{spectral_bound_fixed, SignVariant};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn normalized_krawtchouk(n: usize, i: usize, z: usize) -> f64 {
    krawtchouk_int(n, i, z) as f64 / (binomial_int(n as i64, i as i64) as f64).sqrt()
}

#[test]
fn base_system_is_normalized_krawtchouk() {
    for n in 1..=24usize {
        let spec = hamming_space(n).unwrap();
        let t = spec.base_table();
        for j in 0..=n {
            let x = 1.0 - 2.0 * j as f64 / n as f64;
            let p = t.eval_upto(n, x);
            for (i, pi) in p.iter().enumerate() {
                let expect = normalized_krawtchouk(n, i, j);
                assert!((pi - expect).abs() <= 1e-9 * expect.abs().max(1.0), "n={n} i={i} j={j}");
            }
        }
    }
}

#[test]
fn minus_system_is_shifted_krawtchouk() {
    for n in 3..=20usize {
        let spec = hamming_space(n).unwrap();
        let t = spec.table(MeasureVariant::Minus).unwrap();
        for z in 0..n {
            let x = 1.0 - 2.0 * (z as f64 + 1.0) / n as f64;
            let p = t.eval_upto(n - 1, x);
            for (i, pi) in p.iter().enumerate() {
                let expect = normalized_krawtchouk(n - 1, i, z);
                assert!((pi - expect).abs() <= 1e-9 * expect.abs().max(1.0), "n={n} i={i} z={z}");
            }
        }
    }
}

#[test]
fn plusminus_system_is_scaled_krawtchouk() {
    for n in 3..=20usize {
        let spec = hamming_space(n).unwrap();
        let t = spec.table(MeasureVariant::PlusMinus).unwrap();
        let scale = (n as f64 / (n as f64 - 1.0)).sqrt();
        for z in 0..=n - 2 {
            let x = 1.0 - 2.0 * (z as f64 + 1.0) / n as f64;
            let p = t.eval_upto(n - 2, x);
            for (i, pi) in p.iter().enumerate() {
                let expect = scale * normalized_krawtchouk(n - 2, i, z);
                assert!((pi - expect).abs() <= 1e-9 * expect.abs().max(1.0), "n={n} i={i} z={z}");
            }
        }
    }
}

fn legendre(k: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if k == 0 {
        return p0;
    }
    for m in 1..k {
        let m = m as f64;
        let p2 = ((2.0 * m + 1.0) * x * p1 - m * p0) / (m + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

#[test]
fn sphere_three_is_legendre() {
    let spec = sphere_space(3).unwrap();
    let t = spec.base_table();
    for x in [-1.0, -0.71, 0.0, 0.33, 0.999, 1.0] {
        let p = t.eval_upto(30, x);
        for (i, pi) in p.iter().enumerate() {
            let expect = (2.0 * i as f64 + 1.0).sqrt() * legendre(i, x);
            assert!((pi - expect).abs() <= 1e-11 * expect.abs().max(1.0), "i={i} x={x}");
        }
    }
}

#[test]
fn sphere_four_is_chebyshev_second_kind() {
    let spec = sphere_space(4).unwrap();
    let t = spec.base_table();
    for theta in [0.1f64, 0.7, 1.3, 2.9] {
        let x = theta.cos();
        let p = t.eval_upto(40, x);
        for (i, pi) in p.iter().enumerate() {
            let expect = ((i as f64 + 1.0) * theta).sin() / theta.sin();
            assert!((pi - expect).abs() <= 1e-10 * expect.abs().max(1.0), "i={i} x={x}");
        }
    }
}

#[test]
fn sphere_zeros_match_legendre_roots() {
    // roots of P_2, P_3 in closed form
    let spec = sphere_space(3).unwrap();
    let z2 = zeros(&spec, MeasureVariant::Base, 2).unwrap();
    assert!((z2[1] - (1.0f64 / 3.0).sqrt()).abs() < 1e-13);
    let z3 = zeros(&spec, MeasureVariant::Base, 3).unwrap();
    assert!((z3[2] - (3.0f64 / 5.0).sqrt()).abs() < 1e-13);
    assert!(z3[1].abs() < 1e-13);
}

#[test]
fn degree_one_levenshtein_is_plotkin() {
    // f = (x - s)/(1 - s) gives (1 - s)/(-s) = 2d/(2d - n) whenever s <= x_1^- = -1/n
    for n in 2..=30usize {
        let spec = hamming_space(n).unwrap();
        for d in (n / 2 + 1)..=n {
            let s = 1.0 - 2.0 * d as f64 / n as f64;
            if s > -1.0 / n as f64 + 1e-12 {
                continue;
            }
            let r = bound_for_distance(&spec, d, BoundMethod::Lev, tol()).unwrap();
            let plotkin = 2.0 * d as f64 / (2.0 * d as f64 - n as f64);
            assert_eq!(r.degree, 1, "n={n} d={d}");
            assert!((r.bound - plotkin).abs() <= 1e-9 * plotkin, "n={n} d={d}: {} vs {plotkin}", r.bound);
        }
    }
}

#[test]
fn whole_space_lp_and_codes() {
    for n in 1..=10usize {
        let lp = delsarte_lp(n, 1, LpMode::Exact).unwrap();
        assert_eq!(lp.exact.unwrap(), (1u64 << n).to_string());
    }
    let lp = delsarte_lp(7, 3, LpMode::Exact).unwrap();
    assert_eq!(lp.exact.as_deref(), Some("16"));
    assert_eq!(hamming_7_4().size(), 16);
}

#[test]
fn hamming_seven_distance_three_bound_dominates_code() {
    let spec = hamming_space(7).unwrap();
    for m in [BoundMethod::Lev, BoundMethod::Mrrw, BoundMethod::Spectral] {
        if let Ok(r) = bound_for_distance(&spec, 3, m, tol()) {
            assert!(r.bound >= 16.0 - 1e-9, "{m}: {}", r.bound);
        }
    }
    let lev = bound_for_distance(&spec, 3, BoundMethod::Lev, tol()).unwrap();
    assert!(lev.bound >= 16.0);
    let hamming = hamming_space(3).unwrap();
    let r = bound_for_distance(&hamming, 1, BoundMethod::Mrrw, tol()).unwrap();
    assert!((r.bound - 12.0).abs() < 1e-9);
}

#[test]
fn float_and_exact_lp_agree() {
    for n in 1..=12usize {
        for d in 1..=n {
            let f = delsarte_lp(n, d, LpMode::Float).unwrap().value;
            let e = delsarte_lp(n, d, LpMode::Exact).unwrap().value;
            assert!((f - e).abs() <= 1e-9 * e, "n={n} d={d}: {f} vs {e}");
        }
    }
}

#[test]
fn lp_dominates_codes_and_bounds_dominate_lp() {
    for n in 2..=12usize {
        let spec = hamming_space(n).unwrap();
        for d in 1..=n {
            let lp = delsarte_lp(n, d, LpMode::Float).unwrap().value;
            for code in code_zoo(n) {
                if code.min_distance() >= d {
                    assert!(lp >= code.size() as f64 - 1e-9);
                }
            }
            for m in [BoundMethod::Lev, BoundMethod::Mrrw, BoundMethod::Spectral] {
                if let Ok(r) = bound_for_distance(&spec, d, m, tol()) {
                    assert!(r.bound >= lp * (1.0 - 1e-7), "n={n} d={d} {m}: {} < {lp}", r.bound);
                }
            }
        }
    }
}

#[test]
fn whole_space_distance_bounds_dominate_space_size() {
    // the whole space is a code, so anything certified is at least 2^n; tight
    // polynomials need degree n and are usually out of reach
    for n in 3..=12usize {
        let spec = hamming_space(n).unwrap();
        for m in [BoundMethod::Lev, BoundMethod::Mrrw, BoundMethod::Spectral] {
            match bound_for_distance(&spec, 1, m, tol()) {
                Ok(r) => assert!(r.bound >= 2f64.powi(n as i32) * (1.0 - 1e-9), "n={n} {m}: {}", r.bound),
                Err(e) => assert_eq!(e.exit_code(), 3, "n={n} {m}: {e}"),
            }
        }
    }
}

#[test]
fn hamming_eight_levenshtein_examples() {
    let spec = hamming_space(8).unwrap();
    let x3 = largest_zero(&spec, MeasureVariant::Minus, 3).unwrap();
    let f = lev_odd_poly(&spec, 2, x3 - 1e-6).unwrap();
    assert!(certify(&spec, &f, tol()).is_ok());
    let lo = largest_zero(&spec, MeasureVariant::Minus, 2).unwrap();
    let hi = largest_zero(&spec, MeasureVariant::PlusMinus, 2).unwrap();
    let g = delbound_core::lev_even_poly(&spec, 1, 0.5 * (lo + hi)).unwrap();
    assert!(certify(&spec, &g, tol()).is_ok());
}

#[test]
fn fixed_operator_is_weaker_than_best_mrrw() {
    for spec in [hamming_space(12).unwrap(), hamming_space(25).unwrap(), sphere_space(5).unwrap()] {
        for k in 1..6 {
            let Ok(r) = spectral_bound_fixed(&spec, k, SignVariant::Subtractive, tol()) else { continue };
            let best = (0..=delbound_core::constructions::mrrw_max_k(&spec))
                .filter_map(|j| mrrw_poly(&spec, j, r.s).ok())
                .filter_map(|f| certify(&spec, &f, tol()).ok())
                .map(|(b, _)| b)
                .fold(f64::INFINITY, f64::min);
            assert!(r.bound >= best * (1.0 - 1e-9), "k={k}: {} < {best}", r.bound);
            assert!((r.bound - mrrw_bound_closed(&spec, k, r.s).unwrap()).abs() <= 1e-7 * r.bound);
        }
    }
}

#[test]
fn mrrw_bound_blows_up_at_both_window_ends() {
    // p_k(s) -> 0 at the left end and p_(k+1)(s) -> 0 at the right end, so the
    // bound at fixed k is not monotone in s
    let spec = hamming_space(12).unwrap();
    let k = 3;
    let lo = largest_zero(&spec, MeasureVariant::Base, k).unwrap();
    let hi = largest_zero(&spec, MeasureVariant::Base, k + 1).unwrap();
    let at = |frac: f64| certify(&spec, &mrrw_poly(&spec, k, lo + frac * (hi - lo)).unwrap(), tol()).unwrap().0;
    assert!(at(0.001) > at(0.5));
    assert!(at(0.999) > at(0.5));
}

#[test]
fn levenshtein_column_is_monotone_in_distance() {
    for n in [8usize, 15, 24] {
        let spec = hamming_space(n).unwrap();
        let bounds: Vec<f64> = (1..=n)
            .filter_map(|d| bound_for_distance(&spec, d, BoundMethod::Lev, tol()).ok())
            .map(|r| r.bound)
            .collect();
        assert!(bounds.len() >= n / 2);
        for pair in bounds.windows(2) {
            assert!(pair[1] <= pair[0] * (1.0 + 1e-9), "n={n}: {pair:?}");
        }
    }
}
