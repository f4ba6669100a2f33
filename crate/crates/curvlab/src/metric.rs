//! The metric catalog: diagonal cohomogeneity-one metrics
//! `g = A^2 dt^2 + B^2 s1^2 + C^2 s2^2 + D^2 s3^2` over an interval, with
//! built-in profiles for the Page metric (in both coordinates), the round
//! 4-sphere, Fubini-Study, and user-defined metrics from config files.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{self, Constants, Expr};
use crate::frame::{CoframeConvention, FrameError};
use crate::jet::Jet2;

/// What happens to the principal orbits at an interval endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointKind {
    /// The s3 circle collapses on a 2-sphere of positive radius (B = C > 0,
    /// D -> 0).
    Bolt,
    /// The whole S^3 collapses to a point (B, C, D -> 0).
    Nut,
    /// No collapse is claimed; nothing is checked.
    Open,
}

impl EndpointKind {
    pub fn parse(s: &str) -> Option<EndpointKind> {
        match s {
            "bolt" => Some(EndpointKind::Bolt),
            "nut" => Some(EndpointKind::Nut),
            "none" | "open" => Some(EndpointKind::Open),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Lower,
    Upper,
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("coefficient {which} failed to evaluate at t = {t}: {source}")]
    CoefficientEval {
        which: char,
        t: f64,
        source: expr::EvalError,
    },
    #[error("coefficient {which} is not positive at t = {t} (value {value})")]
    NonPositive { which: char, t: f64, value: f64 },
    #[error("t = {t} is outside the open interval ({t0}, {t1})")]
    OutsideDomain { t: f64, t0: f64, t1: f64 },
    #[error("declared {kind:?} endpoint at {end:?} does not match profile limits: {detail}")]
    EndpointMismatch {
        end: End,
        kind: EndpointKind,
        detail: String,
    },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("config error: {0}")]
    Config(String),
    #[error("builder self-validation failed: {0}")]
    SelfValidation(String),
}

/// One coefficient function `t -> Jet2`.
#[derive(Clone)]
pub enum Profile {
    Native(Arc<dyn Fn(Jet2) -> Jet2 + Send + Sync>),
    Compiled { ast: Expr, constants: Constants },
}

impl Profile {
    pub fn native(f: impl Fn(Jet2) -> Jet2 + Send + Sync + 'static) -> Self {
        Profile::Native(Arc::new(f))
    }

    pub fn eval(&self, t: Jet2) -> Result<Jet2, expr::EvalError> {
        match self {
            Profile::Native(f) => Ok(f(t)),
            Profile::Compiled { ast, constants } => ast.eval(t, constants),
        }
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Native(_) => f.write_str("Profile::Native(..)"),
            Profile::Compiled { ast, .. } => write!(f, "Profile::Compiled({ast})"),
        }
    }
}

/// A diagonal metric `A^2 dt^2 + B^2 s1^2 + C^2 s2^2 + D^2 s3^2` on an open
/// interval, together with its coframe convention and declared endpoint
/// behaviour.
#[derive(Debug, Clone)]
pub struct DiagonalMetric {
    label: String,
    profiles: [Profile; 4],
    domain: (f64, f64),
    convention: CoframeConvention,
    endpoints: [EndpointKind; 2],
}

pub const COEFFICIENT_NAMES: [char; 4] = ['A', 'B', 'C', 'D'];

impl DiagonalMetric {
    pub fn new(
        label: impl Into<String>,
        profiles: [Profile; 4],
        domain: (f64, f64),
        convention: CoframeConvention,
        endpoints: [EndpointKind; 2],
    ) -> Self {
        DiagonalMetric {
            label: label.into(),
            profiles,
            domain,
            convention,
            endpoints,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn convention(&self) -> CoframeConvention {
        self.convention
    }

    pub fn endpoint_kind(&self, end: End) -> EndpointKind {
        match end {
            End::Lower => self.endpoints[0],
            End::Upper => self.endpoints[1],
        }
    }

    pub fn is_interior(&self, t: f64) -> bool {
        t > self.domain.0 && t < self.domain.1
    }

    /// Jets of A, B, C, D at an interior point.
    pub fn coefficients(&self, t: f64) -> Result<[Jet2; 4], MetricError> {
        if !self.is_interior(t) {
            return Err(MetricError::OutsideDomain {
                t,
                t0: self.domain.0,
                t1: self.domain.1,
            });
        }
        self.coefficients_unchecked(t)
    }

    /// Same as [`coefficients`](Self::coefficients) without the interior
    /// check; used by endpoint-limit extrapolation.
    pub fn coefficients_unchecked(&self, t: f64) -> Result<[Jet2; 4], MetricError> {
        let tj = Jet2::variable(t);
        let mut out = [Jet2::constant(0.0); 4];
        for (i, p) in self.profiles.iter().enumerate() {
            let j = p
                .eval(tj)
                .map_err(|source| MetricError::CoefficientEval {
                    which: COEFFICIENT_NAMES[i],
                    t,
                    source,
                })?;
            out[i] = j;
        }
        Ok(out)
    }

    /// Extrapolated limits of (B, C, D) at an endpoint, from offsets 1e-6,
    /// 2e-6 and 4e-6. Aitken's delta-squared handles any leading power of
    /// the offset, which matters because a collapsing coefficient can behave
    /// like sqrt(offset) in a chart (the Page x-chart fiber does).
    pub fn endpoint_limits(&self, end: End) -> Result<[f64; 3], MetricError> {
        let offsets = [4e-6, 2e-6, 1e-6];
        let mut samples = [[0.0; 3]; 3];
        for (k, delta) in offsets.into_iter().enumerate() {
            let t = match end {
                End::Lower => self.domain.0 + delta,
                End::Upper => self.domain.1 - delta,
            };
            let coeffs = self.coefficients_unchecked(t)?;
            samples[k] = [coeffs[1].val, coeffs[2].val, coeffs[3].val];
        }
        let mut out = [0.0; 3];
        for i in 0..3 {
            let (f0, f1, f2) = (samples[0][i], samples[1][i], samples[2][i]);
            let d1 = f1 - f0;
            let d2 = f2 - f1;
            let dd = d2 - d1;
            out[i] = if dd.abs() < 1e-14 * f2.abs().max(1.0) {
                f2
            } else {
                f2 - d2 * d2 / dd
            };
        }
        Ok(out)
    }

    /// Check the declared endpoint kinds against the numerical limits of the
    /// profiles (tolerance 1e-8).
    pub fn validate_endpoints(&self) -> Result<(), MetricError> {
        const TOL: f64 = 1e-8;
        for end in [End::Lower, End::Upper] {
            let kind = self.endpoint_kind(end);
            let mismatch = |detail: String| MetricError::EndpointMismatch { end, kind, detail };
            match kind {
                EndpointKind::Open => {}
                EndpointKind::Bolt => {
                    let [b, c, d] = self.endpoint_limits(end)?;
                    if d.abs() > TOL {
                        return Err(mismatch(format!("D does not collapse (limit {d:.3e})")));
                    }
                    if (b - c).abs() > TOL {
                        return Err(mismatch(format!("B and C limits differ ({b} vs {c})")));
                    }
                    if b <= TOL {
                        return Err(mismatch(format!("sphere radius not positive (B -> {b:.3e})")));
                    }
                }
                EndpointKind::Nut => {
                    let [b, c, d] = self.endpoint_limits(end)?;
                    for (name, v) in [('B', b), ('C', c), ('D', d)] {
                        if v.abs() > TOL {
                            return Err(mismatch(format!(
                                "{name} does not collapse (limit {v:.3e})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The quartic `p(a) = a^4 + 4a^3 - 6a^2 + 12a - 3` whose unique positive
/// root fixes the Page profile, together with the derived fiber constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PageConstants {
    /// Root of the quartic in (0, 1).
    pub a: f64,
    /// `(2 / (3 + a^2))^2`.
    pub c_coef: f64,
    /// `2 / (3 + a^2)`; square root of `c_coef`.
    pub d_coef: f64,
}

pub fn page_quartic(x: f64) -> f64 {
    ((x + 4.0) * x - 6.0) * x * x + 12.0 * x - 3.0
}

pub fn page_quartic_deriv(x: f64) -> f64 {
    (4.0 * x + 12.0) * x * x - 12.0 * x + 12.0
}

/// Bisect the quartic on [0, 1] (`p(0) = -3 < 0 < 8 = p(1)`) and verify
/// uniqueness of the positive root via `p' > 0` on a dense grid over (0, 4].
pub fn solve_page_constant() -> PageConstants {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    debug_assert!(page_quartic(lo) < 0.0 && page_quartic(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if page_quartic(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    assert!(
        page_quartic(a).abs() < 1e-13,
        "bisection failed to converge: p({a}) = {}",
        page_quartic(a)
    );
    // p' > 0 on (0, 4] makes the bracketed root the only positive one
    // (p(4) > 0 and p is increasing past it).
    for i in 1..=10_000 {
        let x = 4.0 * i as f64 / 10_000.0;
        assert!(
            page_quartic_deriv(x) > 0.0,
            "uniqueness witness failed at x = {x}"
        );
    }
    let d_coef = 2.0 / (3.0 + a * a);
    PageConstants {
        a,
        c_coef: d_coef * d_coef,
        d_coef,
    }
}

/// Page profile helpers in the polar coordinate `r` on (0, pi).
mod page_profiles {
    use super::Jet2;

    /// `V(r) = (1 - a^2 cos^2 r) / (3 - a^2 - a^2 (1 + a^2) cos^2 r)`.
    pub fn v_of_r(a: f64, r: Jet2) -> Jet2 {
        let c2 = r.cos().powi(2);
        let num = Jet2::constant(1.0) - c2 * (a * a);
        let den = Jet2::constant(3.0 - a * a) - c2 * (a * a * (1.0 + a * a));
        num / den
    }

    /// `f(r) = 4 (1 - a^2 cos^2 r) / (3 + 6a^2 - a^4)`.
    pub fn f_of_r(a: f64, r: Jet2) -> Jet2 {
        let c2 = r.cos().powi(2);
        let num = Jet2::constant(1.0) - c2 * (a * a);
        num * (4.0 / (3.0 + 6.0 * a * a - a.powi(4)))
    }

    /// `W(x)^2 = (1 - a^2 x^2) / ((3 - a^2 - a^2 (1 + a^2) x^2)(1 - x^2))`.
    pub fn w_of_x(a: f64, x: Jet2) -> Jet2 {
        let x2 = x.powi(2);
        let num = Jet2::constant(1.0) - x2 * (a * a);
        let den = (Jet2::constant(3.0 - a * a) - x2 * (a * a * (1.0 + a * a)))
            * (Jet2::constant(1.0) - x2);
        (num / den).sqrt()
    }

    /// `g(x) = 2 sqrt((1 - a^2 x^2) / (3 + 6a^2 - a^4))`.
    pub fn g_of_x(a: f64, x: Jet2) -> Jet2 {
        let x2 = x.powi(2);
        let num = Jet2::constant(1.0) - x2 * (a * a);
        (num * (1.0 / (3.0 + 6.0 * a * a - a.powi(4)))).sqrt() * 2.0
    }
}

pub use page_profiles::{f_of_r, g_of_x, v_of_r, w_of_x};

/// Fiber profile constant for the Page metric under the calibrated (kappa=2)
/// convention: `1 / (3 + a^2)`, i.e. half of `d_coef`.
///
/// The half is forced by calibration: with the full `d_coef` the metric is
/// not Einstein under any uniform coframe convention, while this value makes
/// the Einstein residual vanish to rounding and closes the ends smoothly
/// (the bolt collapse rate becomes exactly 1 against the kappa=2 Hopf-fiber
/// period 2 pi).
pub fn page_fiber_scale(pc: &PageConstants) -> f64 {
    0.5 * pc.d_coef
}

/// Page metric in the polar coordinate `r` on (0, pi); both ends are bolts.
pub fn page_metric_r(pc: &PageConstants, conv: CoframeConvention) -> DiagonalMetric {
    let a = pc.a;
    let fiber = page_fiber_scale(pc);
    DiagonalMetric::new(
        "page-r",
        [
            Profile::native(move |r| v_of_r(a, r).sqrt()),
            Profile::native(move |r| f_of_r(a, r).sqrt()),
            Profile::native(move |r| f_of_r(a, r).sqrt()),
            Profile::native(move |r| r.sin() * fiber / v_of_r(a, r).sqrt()),
        ],
        (0.0, PI),
        conv,
        [EndpointKind::Bolt, EndpointKind::Bolt],
    )
}

/// Page metric in the coordinate `x = cos r` on (-1, 1); the coframe is
/// `{W dx, g s1, g s2, (fiber/W) s3}`. Note `dx = -sin r dr`, so this chart
/// carries the opposite orientation to [`page_metric_r`].
pub fn page_metric_x(pc: &PageConstants, conv: CoframeConvention) -> DiagonalMetric {
    let a = pc.a;
    let fiber = page_fiber_scale(pc);
    DiagonalMetric::new(
        "page-x",
        [
            Profile::native(move |x| w_of_x(a, x)),
            Profile::native(move |x| g_of_x(a, x)),
            Profile::native(move |x| g_of_x(a, x)),
            Profile::native(move |x| Jet2::constant(fiber) / w_of_x(a, x)),
        ],
        (-1.0, 1.0),
        conv,
        [EndpointKind::Bolt, EndpointKind::Bolt],
    )
}

/// Round 4-sphere of radius 1: `dt^2 + (kappa/2)^2 sin^2 t (s1^2+s2^2+s3^2)`
/// on (0, pi). Written covariantly in the convention, so every kappa yields
/// the same metric with K = 1 on every plane.
pub fn round_sphere_metric(conv: CoframeConvention) -> Result<DiagonalMetric, MetricError> {
    if conv.kappa <= 0.0 {
        return Err(MetricError::Frame(FrameError::NeedsBoxVolume));
    }
    let half_kappa = 0.5 * conv.kappa;
    let orbit = move |t: Jet2| t.sin() * half_kappa;
    Ok(DiagonalMetric::new(
        "round-s4",
        [
            Profile::native(|_| Jet2::constant(1.0)),
            Profile::native(orbit),
            Profile::native(orbit),
            Profile::native(orbit),
        ],
        (0.0, PI),
        conv,
        [EndpointKind::Nut, EndpointKind::Nut],
    ))
}

/// Fubini-Study metric on CP^2, normalized so sectional curvature runs over
/// [1, 4] (Einstein constant 6): nut at t = 0, bolt at t = pi/2.
///
/// The profile is a candidate that the builder proves correct before
/// returning it: the Einstein residual and the sectional-curvature range are
/// verified numerically, and any failure is an error rather than a wrong
/// metric.
pub fn fubini_study_metric(conv: CoframeConvention) -> Result<DiagonalMetric, MetricError> {
    if conv.kappa <= 0.0 {
        return Err(MetricError::Frame(FrameError::NeedsBoxVolume));
    }
    let half_kappa = 0.5 * conv.kappa;
    let quarter_kappa = 0.25 * conv.kappa;
    let m = DiagonalMetric::new(
        "fubini-study",
        [
            Profile::native(|_| Jet2::constant(1.0)),
            Profile::native(move |t| t.sin() * half_kappa),
            Profile::native(move |t| t.sin() * half_kappa),
            Profile::native(move |t| (t * 2.0).sin() * quarter_kappa),
        ],
        (0.0, PI / 2.0),
        conv,
        [EndpointKind::Nut, EndpointKind::Bolt],
    );
    let report = crate::verify::einstein_report(&m, 64)
        .map_err(|e| MetricError::SelfValidation(e.to_string()))?;
    if report.max_residual >= 1e-8 {
        return Err(MetricError::SelfValidation(format!(
            "Einstein residual {:.3e} exceeds 1e-8",
            report.max_residual
        )));
    }
    let range = crate::verify::k_range_scan(&m, 24, 12, crate::verify::DEFAULT_SEED)
        .map_err(|e| MetricError::SelfValidation(e.to_string()))?;
    if range.k_min.k < 1.0 - 1e-6 || range.k_max.k > 4.0 + 1e-6 {
        return Err(MetricError::SelfValidation(format!(
            "sectional range [{}, {}] escapes [1, 4]",
            range.k_min.k, range.k_max.k
        )));
    }
    Ok(m)
}

/// Flat abelian test metric: unit coefficients in a kappa = 0 frame.
pub fn flat_metric() -> DiagonalMetric {
    DiagonalMetric::new(
        "flat",
        [
            Profile::native(|_| Jet2::constant(1.0)),
            Profile::native(|_| Jet2::constant(1.0)),
            Profile::native(|_| Jet2::constant(1.0)),
            Profile::native(|_| Jet2::constant(1.0)),
        ],
        (0.0, 1.0),
        CoframeConvention::flat(1.0),
        [EndpointKind::Open, EndpointKind::Open],
    )
}

#[derive(Debug, Deserialize)]
struct RawConfig {
    kappa: f64,
    /// Box volume; required when `kappa = 0`.
    volume: Option<f64>,
    #[serde(default)]
    constants: BTreeMap<String, f64>,
    profile: RawProfile,
    domain: RawDomain,
}

#[derive(Debug, Deserialize)]
struct RawProfile {
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
    #[serde(rename = "C")]
    c: String,
    #[serde(rename = "D")]
    d: String,
}

#[derive(Debug, Deserialize)]
struct RawDomain {
    t0: f64,
    t1: f64,
    lower: String,
    upper: String,
}

/// Build a metric from the plain-text config format (see the repository
/// README for the exact grammar). Profiles are compiled through the
/// expression module, spot-checked for positivity on a 64-point grid, and
/// the declared endpoint kinds are verified numerically.
pub fn custom_metric(config_text: &str) -> Result<DiagonalMetric, MetricError> {
    let raw: RawConfig =
        toml::from_str(config_text).map_err(|e| MetricError::Config(e.to_string()))?;

    let convention = if raw.kappa == 0.0 {
        let volume = raw
            .volume
            .ok_or_else(|| MetricError::Config("kappa = 0 requires a box `volume` key".into()))?;
        CoframeConvention::flat(volume)
    } else {
        CoframeConvention::new(raw.kappa)?
    };

    let mut constants = Constants::standard();
    for (name, value) in &raw.constants {
        constants
            .define(name, *value)
            .map_err(|e| MetricError::Config(e.to_string()))?;
    }

    if !(raw.domain.t1 > raw.domain.t0) {
        return Err(MetricError::Config(format!(
            "domain must satisfy t0 < t1, got ({}, {})",
            raw.domain.t0, raw.domain.t1
        )));
    }
    let lower = EndpointKind::parse(&raw.domain.lower)
        .ok_or_else(|| MetricError::Config(format!("unknown endpoint kind {:?}", raw.domain.lower)))?;
    let upper = EndpointKind::parse(&raw.domain.upper)
        .ok_or_else(|| MetricError::Config(format!("unknown endpoint kind {:?}", raw.domain.upper)))?;

    let mut profiles = Vec::with_capacity(4);
    for (which, text) in COEFFICIENT_NAMES
        .iter()
        .zip([&raw.profile.a, &raw.profile.b, &raw.profile.c, &raw.profile.d])
    {
        let ast = expr::parse_expression(text)
            .map_err(|e| MetricError::Config(format!("profile {which}: {e}")))?;
        ast.check_identifiers(&constants)
            .map_err(|e| MetricError::Config(format!("profile {which}: {e}")))?;
        profiles.push(Profile::Compiled {
            ast,
            constants: constants.clone(),
        });
    }
    let profiles: [Profile; 4] = profiles.try_into().expect("four profiles");

    let m = DiagonalMetric::new(
        "custom",
        profiles,
        (raw.domain.t0, raw.domain.t1),
        convention,
        [lower, upper],
    );

    // positivity spot-check on a 64-point grid
    let (t0, t1) = m.domain();
    for i in 0..64 {
        let t = t0 + (t1 - t0) * (i as f64 + 0.5) / 64.0;
        let coeffs = m.coefficients(t)?;
        for (which, j) in COEFFICIENT_NAMES.iter().zip(coeffs.iter()) {
            if !(j.val > 0.0) || !j.is_finite() {
                return Err(MetricError::NonPositive {
                    which: *which,
                    t,
                    value: j.val,
                });
            }
        }
    }

    m.validate_endpoints()?;
    Ok(m)
}
