//! A numerical curvature laboratory for diagonal cohomogeneity-one
//! Riemannian 4-metrics `g = A^2 dt^2 + B^2 s1^2 + C^2 s2^2 + D^2 s3^2` over
//! an interval, in a left-invariant SU(2) coframe.
//!
//! The crate reconstructs the Page metric on the connected sum of two
//! oppositely-oriented projective planes together with a catalog of
//! companion metrics (round 4-sphere, Fubini-Study, user-defined profiles),
//! and mechanically verifies their quantitative properties: the Einstein
//! condition, the sign change of the sectional curvature K01, totally
//! geodesic end-spheres, Gauss-Bonnet and signature integrals,
//! sectional-curvature ranges, and curvature inequalities.
//!
//! Everything runs on exact second-order jets of the profile functions
//! through Cartan's structure equations in the orthonormal frame; finite
//! differences appear only as independent test oracles.

pub mod curvature;
pub mod expr;
pub mod frame;
pub mod jet;
pub mod metric;
pub mod quad;
pub mod verify;

pub use curvature::{
    connection_coefficients, page_k01, riemann_frame, ricci_scalar_decompose, sectional,
    structure_equation_residual, Connection, CurvatureDecomposition, CurvatureError,
    FrameCurvature,
};
pub use expr::{parse_expression, Constants, Expr};
pub use frame::{CoframeConvention, FrameError, CALIBRATED_KAPPA};
pub use jet::{finite_difference, Jet2, JetError};
pub use metric::{
    custom_metric, flat_metric, fubini_study_metric, page_metric_r, page_metric_x,
    round_sphere_metric, solve_page_constant, DiagonalMetric, End, EndpointKind, MetricError,
    PageConstants,
};
pub use verify::{
    bolt_geodesy_check, calibrate_convention, char_numbers, einstein_report,
    inequality_predicates, k_range_scan, sign_change_scan, BoltReport, CalibrationReport,
    CharNumbers, EinsteinReport, InequalityReport, KRangeReport, SignChangeCertificate, SignScan,
    VerifyError, DEFAULT_SEED,
};
