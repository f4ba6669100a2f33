//! Second-order scalar jets: value plus first and second derivative with
//! respect to the profile coordinate `t`.
//!
//! Curvature of a metric is second order in its coefficient functions, so a
//! 2-jet is the smallest structure that lets the frame engine run exactly
//! (no finite differencing) on closed-form profiles.

use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

/// A scalar together with its first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub val: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("jet division by zero (numerator value {numerator})")]
    DivisionByZero { numerator: f64 },
    #[error("sqrt of non-positive jet value {value}")]
    SqrtDomain { value: f64 },
    #[error("abs is not differentiable at 0")]
    AbsAtZero,
    #[error("pow with non-integer exponent {exponent} requires positive base, got {base}")]
    PowDomain { base: f64, exponent: f64 },
}

impl Jet2 {
    pub const fn new(val: f64, d1: f64, d2: f64) -> Self {
        Jet2 { val, d1, d2 }
    }

    /// The coordinate itself: value `t0`, unit first derivative.
    pub const fn variable(t0: f64) -> Self {
        Jet2::new(t0, 1.0, 0.0)
    }

    /// A constant: both derivatives vanish.
    pub const fn constant(c: f64) -> Self {
        Jet2::new(c, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.val.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    pub fn sqrt(self) -> Jet2 {
        let s = self.val.sqrt();
        Jet2 {
            val: s,
            d1: self.d1 / (2.0 * s),
            d2: self.d2 / (2.0 * s) - self.d1 * self.d1 / (4.0 * s * s * s),
        }
    }

    pub fn try_sqrt(self) -> Result<Jet2, JetError> {
        if self.val <= 0.0 {
            return Err(JetError::SqrtDomain { value: self.val });
        }
        Ok(self.sqrt())
    }

    pub fn sin(self) -> Jet2 {
        let (s, c) = self.val.sin_cos();
        Jet2 {
            val: s,
            d1: self.d1 * c,
            d2: self.d2 * c - self.d1 * self.d1 * s,
        }
    }

    pub fn cos(self) -> Jet2 {
        let (s, c) = self.val.sin_cos();
        Jet2 {
            val: c,
            d1: -self.d1 * s,
            d2: -self.d2 * s - self.d1 * self.d1 * c,
        }
    }

    pub fn exp(self) -> Jet2 {
        let e = self.val.exp();
        Jet2 {
            val: e,
            d1: self.d1 * e,
            d2: (self.d2 + self.d1 * self.d1) * e,
        }
    }

    pub fn ln(self) -> Jet2 {
        Jet2 {
            val: self.val.ln(),
            d1: self.d1 / self.val,
            d2: self.d2 / self.val - self.d1 * self.d1 / (self.val * self.val),
        }
    }

    /// Sign function away from zero; rejected at the kink.
    pub fn try_abs(self) -> Result<Jet2, JetError> {
        if self.val == 0.0 {
            return Err(JetError::AbsAtZero);
        }
        Ok(if self.val < 0.0 { -self } else { self })
    }

    pub fn try_div(self, rhs: Jet2) -> Result<Jet2, JetError> {
        if rhs.val == 0.0 {
            return Err(JetError::DivisionByZero {
                numerator: self.val,
            });
        }
        Ok(self / rhs)
    }

    /// Integer power by repeated multiplication; valid for any base.
    pub fn powi(self, n: i32) -> Jet2 {
        match n {
            0 => Jet2::constant(1.0),
            n if n < 0 => Jet2::constant(1.0) / self.powi(-n),
            n => {
                let mut acc = self;
                for _ in 1..n {
                    acc = acc * self;
                }
                acc
            }
        }
    }

    /// General power `self^exp`. Constant integer exponents are routed
    /// through `powi` so negative bases stay legal; anything else needs a
    /// positive base.
    pub fn try_pow(self, exp: Jet2) -> Result<Jet2, JetError> {
        let exp_is_const = exp.d1 == 0.0 && exp.d2 == 0.0;
        if exp_is_const && exp.val.fract() == 0.0 && exp.val.abs() <= 512.0 {
            let n = exp.val as i32;
            if n < 0 && self.val == 0.0 {
                return Err(JetError::DivisionByZero { numerator: 1.0 });
            }
            return Ok(self.powi(n));
        }
        if self.val <= 0.0 {
            return Err(JetError::PowDomain {
                base: self.val,
                exponent: exp.val,
            });
        }
        Ok((exp * self.ln()).exp())
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.val + rhs.val, self.d1 + rhs.d1, self.d2 + rhs.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2::new(self.val - rhs.val, self.d1 - rhs.d1, self.d2 - rhs.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2::new(
            self.val * rhs.val,
            self.d1 * rhs.val + self.val * rhs.d1,
            self.d2 * rhs.val + 2.0 * self.d1 * rhs.d1 + self.val * rhs.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, rhs: Jet2) -> Jet2 {
        // inverse of rhs by the quotient rule, then one multiplication
        let v = rhs.val;
        let inv = Jet2::new(
            1.0 / v,
            -rhs.d1 / (v * v),
            (2.0 * rhs.d1 * rhs.d1 - v * rhs.d2) / (v * v * v),
        );
        self * inv
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.val, -self.d1, -self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        Jet2::new(self.val * rhs, self.d1 * rhs, self.d2 * rhs)
    }
}

/// Central-difference estimates of the first two derivatives of `f` at `t`.
///
/// This is the validation oracle for the jet arithmetic; it is deliberately
/// independent of `Jet2`.
pub fn finite_difference(f: impl Fn(f64) -> f64, t: f64, h: f64) -> (f64, f64) {
    let fp = f(t + h);
    let fm = f(t - h);
    let f0 = f(t);
    ((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h))
}

/// Default step for [`finite_difference`]; balances truncation against
/// round-off at double precision.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
