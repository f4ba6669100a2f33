//! Global verifiers: Einstein reports, sign-change certificates, sectional
//! range scans, characteristic-number quadrature, totally-geodesic-bolt
//! checks, curvature inequalities, and the coframe calibration.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::curvature::{self, CurvatureError, FrameCurvature};
use crate::frame::CoframeConvention;
use crate::metric::{self, DiagonalMetric, End, EndpointKind};
use crate::quad;

/// Seed for every quasi-random sampling decision unless overridden.
pub const DEFAULT_SEED: u64 = 2026;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge: chi_err = {chi_err:.3e}, tau_err = {tau_err:.3e}")]
    QuadratureNotConverged { chi_err: f64, tau_err: f64 },
    #[error("endpoint {end:?} is declared {kind:?}, not a bolt")]
    NotABolt { end: End, kind: EndpointKind },
    #[error("calibration needs at least one candidate")]
    NoCandidates,
    #[error(
        "no candidate is Einstein: best kappa = {best_kappa} has residual {best_residual:.3e} \
         (> 1e-6); this signals a formula transcription bug"
    )]
    CalibrationFailed { best_kappa: f64, best_residual: f64 },
}

impl From<metric::MetricError> for VerifyError {
    fn from(e: metric::MetricError) -> Self {
        VerifyError::Curvature(CurvatureError::Metric(e))
    }
}

/// Sample points for global scans: Chebyshev-distributed over the interval
/// shrunk by a small relative margin. The margin keeps the frame-basis
/// conversion away from the few nearest-to-collapse points where float
/// cancellation, not geometry, dominates.
fn chebyshev_samples(m: &DiagonalMetric, n: usize) -> Vec<f64> {
    let (t0, t1) = m.domain();
    let margin = 1e-3 * (t1 - t0);
    let (lo, hi) = (t0 + margin, t1 - margin);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..n)
        .map(|i| mid + half * (PI * (2.0 * i as f64 + 1.0) / (2.0 * n as f64)).cos())
        .collect()
}

/// Golden-ratio low-discrepancy points on the margin-shrunk interval.
pub fn quasi_random_samples(m: &DiagonalMetric, n: usize) -> Vec<f64> {
    let (t0, t1) = m.domain();
    let margin = 0.01 * (t1 - t0);
    let (lo, hi) = (t0 + margin, t1 - margin);
    let phi_inv = 0.618_033_988_749_894_9_f64;
    (0..n)
        .map(|i| {
            let frac = (0.5 + phi_inv * i as f64).fract();
            lo + (hi - lo) * frac
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EinsteinReport {
    /// Einstein constant estimate, `mean(s) / 4`.
    pub lambda_e: f64,
    /// Max over samples of the max-norm of `Ric - lambda * id`.
    pub max_residual: f64,
    pub samples: usize,
    pub s_mean: f64,
    /// Max relative drift of the scalar curvature across samples.
    pub s_drift: f64,
}

/// Test `Ric = lambda g` by sampling. The constant is estimated from the
/// mean scalar curvature rather than fitted per component, so the residual
/// is a genuine Einstein test tied to the contracted-Bianchi constancy of s.
pub fn einstein_report(m: &DiagonalMetric, n_samples: usize) -> Result<EinsteinReport, VerifyError> {
    if n_samples < 2 {
        return Err(VerifyError::InvalidArgument(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let points = chebyshev_samples(m, n_samples);
    let mut riccis = Vec::with_capacity(points.len());
    let mut s_sum = 0.0;
    for &t in &points {
        let (ric, dec) = curvature::ricci_scalar_decompose(m, t)?;
        s_sum += dec.s;
        riccis.push((ric, dec.s));
    }
    let s_mean = s_sum / points.len() as f64;
    let lambda = s_mean / 4.0;
    let mut max_residual = 0.0_f64;
    let mut s_drift = 0.0_f64;
    for (ric, s) in &riccis {
        for a in 0..4 {
            for b in 0..4 {
                let target = if a == b { lambda } else { 0.0 };
                max_residual = max_residual.max((ric[a][b] - target).abs());
            }
        }
        s_drift = s_drift.max((s - s_mean).abs());
    }
    let denom = if s_mean.abs() > 1e-30 { s_mean.abs() } else { 1.0 };
    Ok(EinsteinReport {
        lambda_e: lambda,
        max_residual,
        samples: points.len(),
        s_mean,
        s_drift: s_drift / denom,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SignChangeCertificate {
    pub x_pos: f64,
    pub k_pos: f64,
    pub x_neg: f64,
    pub k_neg: f64,
    /// Bracket of width < 1e-10 around a sign crossing.
    pub crossing: (f64, f64),
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignScan {
    Certificate(SignChangeCertificate),
    NoSignChange { min: f64, max: f64 },
}

impl SignScan {
    pub fn certificate(&self) -> Option<&SignChangeCertificate> {
        match self {
            SignScan::Certificate(c) => Some(c),
            SignScan::NoSignChange { .. } => None,
        }
    }
}

/// Scan `f` on a uniform grid of `n` interior points of the interval; if
/// both signs appear, return the extreme witnesses of each sign plus a
/// bisection-refined crossing bracket.
pub fn sign_change_scan(
    f: impl Fn(f64) -> f64,
    interval: (f64, f64),
    n: usize,
) -> Result<SignScan, VerifyError> {
    if n < 3 {
        return Err(VerifyError::InvalidArgument(format!(
            "need at least 3 grid points, got {n}"
        )));
    }
    let (lo, hi) = interval;
    let step = (hi - lo) / (n as f64 + 1.0);
    let xs: Vec<f64> = (1..=n).map(|i| lo + step * i as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();

    let (mut best_pos, mut best_neg) = (None::<(f64, f64)>, None::<(f64, f64)>);
    for (&x, &v) in xs.iter().zip(&vals) {
        if v > 0.0 && best_pos.is_none_or(|(_, k)| v > k) {
            best_pos = Some((x, v));
        }
        if v < 0.0 && best_neg.is_none_or(|(_, k)| v < k) {
            best_neg = Some((x, v));
        }
    }

    match (best_pos, best_neg) {
        (Some((x_pos, k_pos)), Some((x_neg, k_neg))) => {
            // a grid value sitting exactly on zero is already a crossing
            let exact = xs.iter().zip(&vals).find(|(_, &v)| v == 0.0);
            let (mut a, mut b) = if let Some((&x, _)) = exact {
                (x, x)
            } else {
                xs.windows(2)
                    .zip(vals.windows(2))
                    .find(|(_, v)| v[0] * v[1] < 0.0)
                    .map(|(x, _)| (x[0], x[1]))
                    .expect("both signs present implies an adjacent sign change")
            };
            let mut fa = f(a);
            while b - a > 1e-10 {
                let mid = 0.5 * (a + b);
                let fm = f(mid);
                if fa * fm <= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            Ok(SignScan::Certificate(SignChangeCertificate {
                x_pos,
                k_pos,
                x_neg,
                k_neg,
                crossing: (a, b),
            }))
        }
        _ => {
            let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            Ok(SignScan::NoSignChange { min, max })
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PlaneWitness {
    pub t: f64,
    pub u: [f64; 4],
    pub v: [f64; 4],
    pub k: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct KRangeReport {
    pub k_min: PlaneWitness,
    pub k_max: PlaneWitness,
    pub points: usize,
    pub planes_per_point: usize,
}

fn dot(x: &[f64; 4], y: &[f64; 4]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn normalize(x: &mut [f64; 4]) -> f64 {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        for c in x.iter_mut() {
            *c /= n;
        }
    }
    n
}

/// Orthonormal completion of the plane (u, v) from the standard basis.
fn plane_complement(u: &[f64; 4], v: &[f64; 4]) -> [[f64; 4]; 2] {
    let mut out: Vec<[f64; 4]> = Vec::with_capacity(2);
    for axis in 0..4 {
        let mut w = [0.0; 4];
        w[axis] = 1.0;
        let wu = dot(&w, u);
        let wv = dot(&w, v);
        for c in 0..4 {
            w[c] -= wu * u[c] + wv * v[c];
        }
        for prev in &out {
            let wp = dot(&w, prev);
            for c in 0..4 {
                w[c] -= wp * prev[c];
            }
        }
        if normalize(&mut w) > 0.3 {
            out.push(w);
            if out.len() == 2 {
                break;
            }
        }
    }
    [out[0], out[1]]
}

fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // Box-Muller from two uniforms
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * PI * u2;
    (r * theta.cos(), r * theta.sin())
}

fn random_plane(rng: &mut ChaCha8Rng) -> ([f64; 4], [f64; 4]) {
    loop {
        let mut u = [0.0; 4];
        let mut v = [0.0; 4];
        for i in 0..2 {
            let (a, b) = gaussian_pair(rng);
            u[2 * i] = a;
            u[2 * i + 1] = b;
            let (c, d) = gaussian_pair(rng);
            v[2 * i] = c;
            v[2 * i + 1] = d;
        }
        if normalize(&mut u) < 1e-6 {
            continue;
        }
        let uv = dot(&u, &v);
        for c in 0..4 {
            v[c] -= uv * u[c];
        }
        if normalize(&mut v) > 1e-6 {
            return (u, v);
        }
    }
}

/// Derivative-free local refinement of a plane extremum: coordinate-wise
/// rotations of u and v toward the complement directions with step halving
/// down to 1e-6 angular resolution.
fn refine_extremum(rc: &FrameCurvature, witness: &mut PlaneWitness, maximize: bool) {
    let sign = if maximize { 1.0 } else { -1.0 };
    let mut step = 0.2_f64;
    let mut best = sign * witness.k;
    while step > 1e-6 {
        let comp = plane_complement(&witness.u, &witness.v);
        let mut improved = false;
        for rotate_u in [true, false] {
            for w in &comp {
                for dir in [1.0, -1.0] {
                    let (c, s) = ((dir * step).cos(), (dir * step).sin());
                    let mut u = witness.u;
                    let mut v = witness.v;
                    let target = if rotate_u { &mut u } else { &mut v };
                    for i in 0..4 {
                        target[i] = c * target[i] + s * w[i];
                    }
                    let denom = dot(&u, &u) * dot(&v, &v) - dot(&u, &v).powi(2);
                    if denom < 1e-9 {
                        continue;
                    }
                    let k = rc.evaluate_plane(&u, &v) / denom;
                    if sign * k > best {
                        best = sign * k;
                        witness.u = u;
                        witness.v = v;
                        witness.k = k;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
}

/// Scan sectional curvature over sample points and planes (all six frame
/// planes plus quasi-random ones), then locally refine the global extremes.
pub fn k_range_scan(
    m: &DiagonalMetric,
    n_points: usize,
    n_planes: usize,
    seed: u64,
) -> Result<KRangeReport, VerifyError> {
    if n_points == 0 || n_planes == 0 {
        return Err(VerifyError::InvalidArgument(
            "need at least one point and one plane".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = chebyshev_samples(m, n_points);

    let mut k_min: Option<(PlaneWitness, usize)> = None;
    let mut k_max: Option<(PlaneWitness, usize)> = None;
    let mut curvatures = Vec::with_capacity(points.len());
    for (pi, &t) in points.iter().enumerate() {
        let rc = curvature::riemann_frame(m, t)?;
        let mut consider = |u: [f64; 4], v: [f64; 4], k: f64| {
            let w = PlaneWitness { t, u, v, k };
            if k_min.as_ref().is_none_or(|(b, _)| k < b.k) {
                k_min = Some((w, pi));
            }
            if k_max.as_ref().is_none_or(|(b, _)| k > b.k) {
                k_max = Some((w, pi));
            }
        };
        for (a, b) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            let mut u = [0.0; 4];
            let mut v = [0.0; 4];
            u[a] = 1.0;
            v[b] = 1.0;
            consider(u, v, rc.sectional_frame(a, b));
        }
        for _ in 0..n_planes {
            let (u, v) = random_plane(&mut rng);
            consider(u, v, rc.evaluate_plane(&u, &v));
        }
        curvatures.push(rc);
    }

    let (mut min_w, min_pi) = k_min.expect("at least one sample");
    let (mut max_w, max_pi) = k_max.expect("at least one sample");
    refine_extremum(&curvatures[min_pi], &mut min_w, false);
    refine_extremum(&curvatures[max_pi], &mut max_w, true);

    Ok(KRangeReport {
        k_min: min_w,
        k_max: max_w,
        points: n_points,
        planes_per_point: n_planes,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CharNumbers {
    pub chi: f64,
    pub tau: f64,
    /// Change in chi between quadrature orders Q and 2Q.
    pub chi_err: f64,
    pub tau_err: f64,
    pub order: usize,
}

/// Euler characteristic and signature as curvature integrals,
///
/// ```text
/// 8 pi^2 chi  = int |W+|^2 + |W-|^2 + s^2/24 - |ric0|^2/2  dV
/// 12 pi^2 tau = int |W+|^2 - |W-|^2                        dV
/// ```
///
/// by Gauss-Legendre quadrature of the pointwise decomposition against the
/// volume density `A B C D * sigma_volume`. The error estimate compares
/// orders Q and 2Q; the reported values come from the finer rule.
pub fn char_numbers(m: &DiagonalMetric, quad_order: usize) -> Result<CharNumbers, VerifyError> {
    if quad_order < 8 {
        return Err(VerifyError::InvalidArgument(format!(
            "quadrature order must be >= 8, got {quad_order}"
        )));
    }
    let (t0, t1) = m.domain();
    let sigma_volume = m.convention().sigma_volume;
    let integrals = |order: usize| -> Result<(f64, f64), VerifyError> {
        let (nodes, weights) = quad::gauss_legendre(order);
        let mid = 0.5 * (t0 + t1);
        let half = 0.5 * (t1 - t0);
        let (mut gb, mut sig) = (0.0, 0.0);
        for (x, w) in nodes.iter().zip(&weights) {
            let t = mid + half * x;
            let coeffs = m.coefficients(t)?;
            let dec = curvature::riemann_frame(m, t)?.decompose().1;
            let density =
                coeffs[0].val * coeffs[1].val * coeffs[2].val * coeffs[3].val * sigma_volume;
            gb += w * density
                * (dec.wplus_norm_sq + dec.wminus_norm_sq + dec.s * dec.s / 24.0
                    - dec.ric0_norm_sq / 2.0);
            sig += w * density * (dec.wplus_norm_sq - dec.wminus_norm_sq);
        }
        Ok((gb * half / (8.0 * PI * PI), sig * half / (12.0 * PI * PI)))
    };

    let (chi_coarse, tau_coarse) = integrals(quad_order)?;
    let (chi, tau) = integrals(2 * quad_order)?;
    let chi_err = (chi - chi_coarse).abs();
    let tau_err = (tau - tau_coarse).abs();
    if chi_err > 1e-2 || tau_err > 1e-2 {
        return Err(VerifyError::QuadratureNotConverged { chi_err, tau_err });
    }
    Ok(CharNumbers {
        chi,
        tau,
        chi_err,
        tau_err,
        order: quad_order,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoltReport {
    pub end: End,
    /// |d(B^2)/dt| Richardson-extrapolated to the endpoint.
    pub profile_derivative_residual: f64,
    /// Norm of the bolt sphere's second fundamental form, extrapolated to
    /// the endpoint.
    pub shape_operator_limit: f64,
}

/// Totally-geodesic check for a bolt: both the radial derivative of the
/// sphere profile and the shape operator of the collapsing orbit sphere
/// must vanish in the endpoint limit. Richardson extrapolation from offsets
/// 1e-2, 5e-3, 2.5e-3 cancels the linear and quadratic terms.
pub fn bolt_geodesy_check(m: &DiagonalMetric, end: End) -> Result<BoltReport, VerifyError> {
    let kind = m.endpoint_kind(end);
    if kind != EndpointKind::Bolt {
        return Err(VerifyError::NotABolt { end, kind });
    }
    let (t0, t1) = m.domain();
    let offsets = [1e-2, 5e-3, 2.5e-3];
    let ts = offsets.map(|d| match end {
        End::Lower => t0 + d,
        End::Upper => t1 - d,
    });

    let richardson = |h: [f64; 3]| (8.0 * h[2] - 6.0 * h[1] + h[0]) / 3.0;

    let mut profile_samples = [0.0; 3];
    // shape-operator entries against the two normals e0 and e3:
    // (e0,11), (e0,22), (e0,12 sym), (e3,12 sym); the e3 diagonal entries
    // vanish identically for a diagonal metric.
    let mut ii_samples = [[0.0; 4]; 3];
    for (k, &t) in ts.iter().enumerate() {
        let coeffs = m.coefficients(t)?;
        profile_samples[k] = 2.0 * coeffs[1].val * coeffs[1].d1;
        let conn = curvature::connection_coefficients(m, t)?;
        ii_samples[k] = [
            conn.omega[0][1][1],
            conn.omega[0][2][2],
            0.5 * (conn.omega[0][2][1] + conn.omega[0][1][2]),
            0.5 * (conn.omega[3][2][1] + conn.omega[3][1][2]),
        ];
    }

    let profile_derivative_residual = richardson(profile_samples).abs();
    let mut norm_sq = 0.0;
    for j in 0..4 {
        let lim = richardson([ii_samples[0][j], ii_samples[1][j], ii_samples[2][j]]);
        let mult = if j >= 2 { 2.0 } else { 1.0 };
        norm_sq += mult * lim * lim;
    }
    Ok(BoltReport {
        end,
        profile_derivative_residual,
        shape_operator_limit: norm_sq.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct InequalityReport {
    /// chi >= (3/2) |tau|.
    pub hitchin_thorpe: bool,
    /// chi >= (3/2)^(3/2) |tau|.
    pub hitchin: bool,
    /// (15/4) |tau| < chi <= 9.
    pub gursky_lebrun: bool,
}

/// Evaluate the three curvature inequalities literally, with a 1e-9 slack
/// on the equality comparisons.
pub fn inequality_predicates(chi: f64, tau: f64) -> InequalityReport {
    const SLACK: f64 = 1e-9;
    let at = tau.abs();
    InequalityReport {
        hitchin_thorpe: chi + SLACK >= 1.5 * at,
        hitchin: chi + SLACK >= 1.5_f64.powf(1.5) * at,
        gursky_lebrun: 3.75 * at < chi + SLACK && chi <= 9.0 + SLACK,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CandidateResidual {
    pub kappa: f64,
    pub einstein_residual: f64,
    pub lambda_e: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationReport {
    pub chosen_kappa: f64,
    pub candidates: Vec<CandidateResidual>,
}

/// Determine the coframe convention under which the Page profile formulas
/// are Einstein. Each candidate's residual is reported so the choice is
/// auditable; if none achieves 1e-6 the formulas themselves are wrong and
/// the call fails.
pub fn calibrate_convention(candidates: &[f64]) -> Result<CalibrationReport, VerifyError> {
    if candidates.is_empty() {
        return Err(VerifyError::NoCandidates);
    }
    let pc = metric::solve_page_constant();
    let mut rows = Vec::with_capacity(candidates.len());
    for &kappa in candidates {
        let conv = CoframeConvention::new(kappa).map_err(metric::MetricError::from)?;
        let m = metric::page_metric_r(&pc, conv);
        let report = einstein_report(&m, 128)?;
        rows.push(CandidateResidual {
            kappa,
            einstein_residual: report.max_residual,
            lambda_e: report.lambda_e,
        });
    }
    let best = rows
        .iter()
        .min_by(|a, b| a.einstein_residual.total_cmp(&b.einstein_residual))
        .expect("non-empty");
    if best.einstein_residual > 1e-6 {
        return Err(VerifyError::CalibrationFailed {
            best_kappa: best.kappa,
            best_residual: best.einstein_residual,
        });
    }
    Ok(CalibrationReport {
        chosen_kappa: best.kappa,
        candidates: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::flat_metric;

    #[test]
    fn sign_scan_constant_reports_range() {
        let scan = sign_change_scan(|_| 1.0, (-1.0, 1.0), 100).unwrap();
        match scan {
            SignScan::NoSignChange { min, max } => {
                assert_eq!(min, 1.0);
                assert_eq!(max, 1.0);
            }
            _ => panic!("constant function must not certify a sign change"),
        }
    }

    #[test]
    fn sign_scan_identity_brackets_zero() {
        let scan = sign_change_scan(|x| x, (-1.0, 1.0), 101).unwrap();
        let cert = scan.certificate().expect("x changes sign");
        assert!(cert.k_pos > 0.0 && cert.k_neg < 0.0);
        assert!(cert.crossing.0 <= 0.0 && cert.crossing.1 >= 0.0);
        assert!(cert.crossing.1 - cert.crossing.0 < 1e-10);
    }

    #[test]
    fn flat_metric_verifies_trivially() {
        let m = flat_metric();
        let report = einstein_report(&m, 16).unwrap();
        assert_eq!(report.lambda_e, 0.0);
        assert!(report.max_residual < 1e-12);
        let range = k_range_scan(&m, 4, 4, DEFAULT_SEED).unwrap();
        assert!(range.k_min.k.abs() < 1e-12);
        assert!(range.k_max.k.abs() < 1e-12);
        let nums = char_numbers(&m, 8).unwrap();
        assert!(nums.chi.abs() < 1e-12);
        assert!(nums.tau.abs() < 1e-12);
    }

    #[test]
    fn inequality_examples() {
        let r = inequality_predicates(4.0, 0.0);
        assert!(r.hitchin_thorpe && r.hitchin && r.gursky_lebrun);
        let r = inequality_predicates(6.0, -2.0);
        assert!(r.hitchin_thorpe && r.hitchin);
        assert!(!r.gursky_lebrun);
        let r = inequality_predicates(2.0, 0.0);
        assert!(r.hitchin_thorpe && r.hitchin && r.gursky_lebrun);
    }

    #[test]
    fn bolt_check_rejects_nuts() {
        let conv = CoframeConvention::new(2.0).unwrap();
        let m = crate::metric::round_sphere_metric(conv).unwrap();
        assert!(matches!(
            bolt_geodesy_check(&m, End::Lower),
            Err(VerifyError::NotABolt { .. })
        ));
    }

    #[test]
    fn calibration_requires_candidates() {
        assert!(matches!(
            calibrate_convention(&[]),
            Err(VerifyError::NoCandidates)
        ));
    }

    #[test]
    fn calibration_selects_kappa_two_decisively() {
        let report = calibrate_convention(&[1.0, 2.0]).unwrap();
        assert_eq!(report.chosen_kappa, 2.0);
        for c in &report.candidates {
            if c.kappa == 2.0 {
                assert!(c.einstein_residual < 1e-8, "winner: {:.3e}", c.einstein_residual);
            } else {
                // the wrong convention must fail by orders of magnitude
                assert!(c.einstein_residual > 1e-2, "loser: {:.3e}", c.einstein_residual);
            }
        }
    }
}
