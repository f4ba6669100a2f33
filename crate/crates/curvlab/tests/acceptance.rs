//! Acceptance suite: every quantitative claim the project makes, pinned to
//! its tolerance, one criterion per test. Each prints a single verdict line.

mod common;

use std::time::Instant;

use curvlab::jet::{finite_difference, DEFAULT_FD_STEP};
use curvlab::metric::{
    page_metric_r, page_metric_x, page_quartic, page_quartic_deriv, round_sphere_metric,
    solve_page_constant, End,
};
use curvlab::verify::quasi_random_samples;

fn verdict(criterion: &str, pass: bool, detail: String) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {criterion}: {status} ({detail})");
    assert!(pass, "{criterion}: {detail}");
}

#[test]
fn criterion_1_quartic_constant() {
    let start = Instant::now();
    let pc = solve_page_constant();
    let residual = page_quartic(pc.a).abs();
    let unique = (1..=10_000).all(|i| page_quartic_deriv(4.0 * i as f64 / 10_000.0) > 0.0);
    let elapsed = start.elapsed();
    verdict(
        "1 (quartic constant)",
        pc.a > 0.0 && pc.a < 1.0 && residual < 1e-13 && unique && elapsed.as_secs_f64() < 1.0,
        format!(
            "a = {:.15}, |p(a)| = {residual:.2e}, p' > 0 on 10^4 grid points, {:.2}s",
            pc.a,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_page_einstein() {
    let start = Instant::now();
    let pc = solve_page_constant();
    let m = page_metric_r(&pc, common::calibrated());
    let report = curvlab::einstein_report(&m, 200).unwrap();
    let elapsed = start.elapsed();
    verdict(
        "2 (Page Einstein residual)",
        report.max_residual < 1e-8 && report.s_drift < 1e-8 && elapsed.as_secs_f64() < 5.0,
        format!(
            "residual = {:.2e} over {} samples, lambda = {:.9}, s drift = {:.2e}, {:.2}s",
            report.max_residual,
            report.samples,
            report.lambda_e,
            report.s_drift,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_3_k01_sign_change() {
    let start = Instant::now();
    let pc = solve_page_constant();
    let scan = curvlab::sign_change_scan(|x| curvlab::page_k01(&pc, x), (-1.0, 1.0), 1000).unwrap();
    let cert = scan.certificate().copied();

    let mx = page_metric_x(&pc, common::calibrated());
    let mut worst = 0.0_f64;
    for i in 1..=1000 {
        let x = -1.0 + 2.0 * i as f64 / 1001.0;
        let engine = curvlab::riemann_frame(&mx, x).unwrap().sectional_frame(0, 1);
        worst = worst.max((curvlab::page_k01(&pc, x) - engine).abs());
    }
    let elapsed = start.elapsed();
    let pass = cert.is_some_and(|c| c.k_pos > 0.0 && c.k_neg < 0.0)
        && worst < 1e-9
        && elapsed.as_secs_f64() < 5.0;
    let detail = match cert {
        Some(c) => format!(
            "K01({:.4}) = {:.4} > 0 > {:.4} = K01({:.4}); closed form vs engine <= {worst:.2e}; {:.2}s",
            c.x_pos,
            c.k_pos,
            c.k_neg,
            c.x_neg,
            elapsed.as_secs_f64()
        ),
        None => "no sign-change certificate".into(),
    };
    verdict("3 (K01 sign change)", pass, detail);
}

#[test]
fn criterion_4_characteristic_numbers() {
    let start = Instant::now();
    let pc = solve_page_constant();
    let conv = common::calibrated();
    let cases = [
        ("page", page_metric_r(&pc, conv), 4.0, 0.0),
        ("s4", round_sphere_metric(conv).unwrap(), 2.0, 0.0),
        (
            "fs",
            curvlab::fubini_study_metric(conv).unwrap(),
            3.0,
            1.0,
        ),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (label, m, chi_expect, tau_abs_expect) in &cases {
        let nums = curvlab::char_numbers(m, 128).unwrap();
        let ok = (nums.chi - chi_expect).abs() < 1e-4
            && (nums.tau.abs() - tau_abs_expect).abs() < 1e-4
            && nums.chi_err < 1e-6
            && nums.tau_err < 1e-6;
        pass &= ok;
        details.push(format!(
            "{label}: chi = {:.6} tau = {:.6} (err {:.1e}/{:.1e})",
            nums.chi, nums.tau, nums.chi_err, nums.tau_err
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed.as_secs_f64() < 30.0;
    verdict(
        "4 (characteristic numbers)",
        pass,
        format!("{}; {:.2}s", details.join("; "), elapsed.as_secs_f64()),
    );
}

#[test]
fn criterion_5_curvature_ranges() {
    let start = Instant::now();
    let conv = common::calibrated();
    let s4 = curvlab::k_range_scan(
        &round_sphere_metric(conv).unwrap(),
        64,
        32,
        curvlab::DEFAULT_SEED,
    )
    .unwrap();
    let fs = curvlab::k_range_scan(
        &curvlab::fubini_study_metric(conv).unwrap(),
        64,
        32,
        curvlab::DEFAULT_SEED,
    )
    .unwrap();
    let elapsed = start.elapsed();
    let pass = (s4.k_min.k - 1.0).abs() < 1e-8
        && (s4.k_max.k - 1.0).abs() < 1e-8
        && (fs.k_min.k - 1.0).abs() < 1e-4
        && (fs.k_max.k - 4.0).abs() < 1e-4
        && elapsed.as_secs_f64() < 60.0;
    verdict(
        "5 (sectional ranges)",
        pass,
        format!(
            "S4 range [{:.9}, {:.9}]; FS range [{:.9}, {:.9}]; {:.2}s",
            s4.k_min.k,
            s4.k_max.k,
            fs.k_min.k,
            fs.k_max.k,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_6_kaehler_identity() {
    let m = curvlab::fubini_study_metric(common::calibrated()).unwrap();
    let mut worst = 0.0_f64;
    for &t in &quasi_random_samples(&m, 20) {
        let (_, dec) = curvlab::ricci_scalar_decompose(&m, t).unwrap();
        let target = dec.s * dec.s / 24.0;
        worst = worst.max((dec.wplus_norm_sq - target).abs() / target.abs());
    }
    verdict(
        "6 (Kaehler identity)",
        worst < 1e-8,
        format!("max relative |W+|^2 vs s^2/24 deviation = {worst:.2e} at 20 points"),
    );
}

#[test]
fn criterion_7_totally_geodesic_bolts() {
    let pc = solve_page_constant();
    let m = page_metric_r(&pc, common::calibrated());
    let (t0, t1) = m.domain();
    let mut pass = t1 > t0; // the two bolts are disjoint: interval interior nonempty
    let mut details = Vec::new();
    for end in [End::Lower, End::Upper] {
        let rep = curvlab::bolt_geodesy_check(&m, end).unwrap();
        pass &= rep.profile_derivative_residual < 1e-6 && rep.shape_operator_limit < 1e-6;
        details.push(format!(
            "{end:?}: d(B^2)/dt -> {:.2e}, |II| -> {:.2e}",
            rep.profile_derivative_residual, rep.shape_operator_limit
        ));
    }
    verdict(
        "7 (totally geodesic bolts)",
        pass,
        details.join("; "),
    );
}

#[test]
fn criterion_8_inequality_predicates() {
    let page = curvlab::inequality_predicates(4.0, 0.0);
    let failing = curvlab::inequality_predicates(6.0, -2.0);
    let pass = page.hitchin_thorpe
        && page.hitchin
        && page.gursky_lebrun
        && failing.hitchin_thorpe
        && !failing.gursky_lebrun;
    verdict(
        "8 (inequality predicates)",
        pass,
        format!(
            "(4,0) -> HT {} H {} GL {}; (6,-2) -> GL {}",
            page.hitchin_thorpe, page.hitchin, page.gursky_lebrun, failing.gursky_lebrun
        ),
    );
}

#[test]
fn criterion_9_property_suites() {
    // tensor symmetries and first Bianchi at 200 points per catalog metric
    let mut sym_worst = 0.0_f64;
    for m in common::catalog() {
        for &t in &quasi_random_samples(&m, 200) {
            let rep = curvlab::riemann_frame(&m, t).unwrap().symmetry_report();
            let scale = rep.scale.max(1e-8);
            sym_worst = sym_worst
                .max(rep.antisym / scale)
                .max(rep.pair / scale)
                .max(rep.bianchi / scale);
        }
    }

    // jets against the finite-difference oracle
    let mut fd_pass = true;
    for m in common::catalog() {
        let (t0, t1) = m.domain();
        for i in 0..100 {
            let t = t0
                + (0.025 + 0.95 * (0.5 + 0.618_033_988_749_894_9 * i as f64).fract()) * (t1 - t0);
            let jets = m.coefficients(t).unwrap();
            for (idx, jet) in jets.iter().enumerate() {
                let value = |x: f64| m.coefficients_unchecked(x).unwrap()[idx].val;
                let (d1, d2) = finite_difference(value, t, DEFAULT_FD_STEP);
                fd_pass &= (jet.d1 - d1).abs() <= 1e-5 * (1.0 + d1.abs());
                fd_pass &= (jet.d2 - d2).abs() <= 1e-3 * (1.0 + d2.abs());
            }
        }
    }

    // the two Page charts agree componentwise (sign flip per 0-index)
    let pc = solve_page_constant();
    let conv = common::calibrated();
    let mr = page_metric_r(&pc, conv);
    let mx = page_metric_x(&pc, conv);
    let mut chart_worst = 0.0_f64;
    for i in 0..50 {
        let r = 0.05 + (std::f64::consts::PI - 0.1) * i as f64 / 49.0;
        let rc_r = curvlab::riemann_frame(&mr, r).unwrap();
        let rc_x = curvlab::riemann_frame(&mx, r.cos()).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let zeros = [a, b, c, d].iter().filter(|&&k| k == 0).count();
                        let sign = if zeros % 2 == 0 { 1.0 } else { -1.0 };
                        chart_worst = chart_worst.max(
                            (rc_r.component(a, b, c, d) - sign * rc_x.component(a, b, c, d))
                                .abs(),
                        );
                    }
                }
            }
        }
    }

    // kappa-rescaling covariance: the round-sphere builder yields identical
    // curvature under every convention
    let mut rescale_worst = 0.0_f64;
    let reference = round_sphere_metric(curvlab::CoframeConvention::new(2.0).unwrap()).unwrap();
    for kappa in [0.5, 1.0, 3.0] {
        let other = round_sphere_metric(curvlab::CoframeConvention::new(kappa).unwrap()).unwrap();
        for &t in &quasi_random_samples(&reference, 25) {
            let rc0 = curvlab::riemann_frame(&reference, t).unwrap();
            let rc1 = curvlab::riemann_frame(&other, t).unwrap();
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        for d in 0..4 {
                            rescale_worst = rescale_worst.max(
                                (rc0.component(a, b, c, d) - rc1.component(a, b, c, d)).abs(),
                            );
                        }
                    }
                }
            }
        }
    }

    let pass =
        sym_worst < 1e-10 && fd_pass && chart_worst < 1e-9 && rescale_worst < 1e-10;
    verdict(
        "9 (property suites)",
        pass,
        format!(
            "symmetries/Bianchi <= {sym_worst:.2e} of scale; jets-vs-FD in tolerance: {fd_pass}; \
             r-vs-x <= {chart_worst:.2e}; rescaling <= {rescale_worst:.2e}"
        ),
    );
}
