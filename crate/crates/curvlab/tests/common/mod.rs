//! Shared fixtures for the integration suites.
#![allow(dead_code)] // each test binary uses its own subset

use curvlab::frame::CoframeConvention;
use curvlab::jet::{finite_difference, Jet2, DEFAULT_FD_STEP};
use curvlab::metric::{
    flat_metric, fubini_study_metric, page_metric_r, page_metric_x, round_sphere_metric,
    solve_page_constant, DiagonalMetric, PageConstants, Profile,
};

pub fn calibrated() -> CoframeConvention {
    CoframeConvention::calibrated()
}

/// Every metric in the catalog under the calibrated convention.
pub fn catalog() -> Vec<DiagonalMetric> {
    let pc = solve_page_constant();
    let conv = calibrated();
    vec![
        page_metric_r(&pc, conv),
        page_metric_x(&pc, conv),
        round_sphere_metric(conv).unwrap(),
        fubini_study_metric(conv).unwrap(),
        flat_metric(),
    ]
}

/// The Einstein members of the catalog.
pub fn einstein_catalog() -> Vec<DiagonalMetric> {
    let pc = solve_page_constant();
    let conv = calibrated();
    vec![
        page_metric_r(&pc, conv),
        round_sphere_metric(conv).unwrap(),
        fubini_study_metric(conv).unwrap(),
    ]
}

/// Replace each profile of `m` by a finite-difference lift of its value
/// function: the value is exact, the two derivatives come from central
/// differences. This is the independent derivative oracle run through the
/// whole curvature pipeline.
pub fn fd_lift(m: &DiagonalMetric) -> DiagonalMetric {
    let lift = |idx: usize| {
        let source = m.clone();
        Profile::native(move |t: Jet2| {
            let value = |x: f64| {
                source
                    .coefficients_unchecked(x)
                    .expect("fd lift evaluates interior points")[idx]
                    .val
            };
            let (d1, d2) = finite_difference(value, t.val, DEFAULT_FD_STEP);
            Jet2::new(value(t.val), d1, d2)
        })
    };
    DiagonalMetric::new(
        format!("{}-fd", m.label()),
        [lift(0), lift(1), lift(2), lift(3)],
        m.domain(),
        m.convention(),
        [
            m.endpoint_kind(curvlab::End::Lower),
            m.endpoint_kind(curvlab::End::Upper),
        ],
    )
}

/// The Page metric in the x chart, spelled as a text config with the root
/// injected as a constant. Exercises the whole expression pipeline against
/// the native builders.
pub fn page_x_config_text(pc: &PageConstants, kappa: f64) -> String {
    let w = "sqrt((1 - aa^2*t^2) / ((3 - aa^2 - aa^2*(1 + aa^2)*t^2) * (1 - t^2)))";
    format!(
        r#"
kappa = {kappa}

[constants]
aa = {a}
fiber = {fiber}

[profile]
A = "{w}"
B = "2*sqrt((1 - aa^2*t^2) / (3 + 6*aa^2 - aa^4))"
C = "2*sqrt((1 - aa^2*t^2) / (3 + 6*aa^2 - aa^4))"
D = "fiber / ({w})"

[domain]
t0 = -1.0
t1 = 1.0
lower = "bolt"
upper = "bolt"
"#,
        a = pc.a,
        fiber = 0.5 * pc.d_coef,
    )
}
