//! Failure-time laws for systems hit by two independent Poisson shock streams
//! under a competing-risks regime.
//!
//! A system receives shocks of two types, counted by independent homogeneous
//! Poisson processes `N_1(t)` and `N_2(t)` with rates `lambda_1`, `lambda_2`.
//! A random threshold `M` (supported on `{1, 2, ...}`) selects the fatal
//! failure set: the system dies at the first instant at which
//!
//! * `N_1(t) + N_2(t) = M`      (sum scheme),
//! * `min(N_1(t), N_2(t)) = M`  (min scheme, parallel units), or
//! * `max(N_1(t), N_2(t)) = M`  (max scheme, serial units),
//!
//! and the observable outcome is the pair `(T, delta)`: the failure time and
//! the type of the shock that caused it.
//!
//! The crate computes cause-specific sub-densities `f_i(t)`, the survival
//! function, the cause probabilities `P(delta = i)` and the conditional
//! moments `E(T^s | delta = i)` along two independent routes:
//!
//! * [`analytic`]: a generic double-series engine that sums Poisson mass over
//!   the failure sets and risky sets of the chosen scheme, and
//! * [`closed_form`]: per-scheme single-series and fully closed expressions,
//!   including the Bessel-function forms for the standard threshold families.
//!
//! A seeded, parallel Monte Carlo simulator ([`sim`]) of the shock process
//! provides a third, independent check, and [`validate`] bundles all
//! cross-checks into one report.
//!
//! The numeric core is generic over the scalar type through the [`Real`]
//! trait; `f64` is the intended production scalar and concrete aliases for
//! the main types live at the crate root ([`Model64`], [`Rates64`], ...).

pub mod analytic;
pub mod closed_form;
mod error;
pub mod quadrature;
pub mod scheme;
pub mod sim;
pub mod special;
pub mod threshold;
pub mod validate;

pub use error::{Error, Result};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};

/// Scalar type the analytic core is generic over.
///
/// Implemented by `f32` and `f64`. The default tolerances target `f64`;
/// an `f32` instantiation works but cannot honour tolerances below its
/// epsilon.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// Lifts an `f64` constant into the scalar type.
    fn of_f64(v: f64) -> Self {
        Self::from_f64(v).expect("constant not representable in scalar type")
    }

    /// Lifts an unsigned integer into the scalar type (rounded for floats).
    fn of_u64(v: u64) -> Self {
        Self::from_u64(v).expect("integer not representable in scalar type")
    }

    /// Conversion for error payloads and reports.
    fn lossy_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
}

/// `base^n` for unsigned exponents, stable for exponents beyond `i32`.
pub(crate) fn powu<S: Real>(base: S, n: u64) -> S {
    if n <= i32::MAX as u64 {
        base.powi(n as i32)
    } else if base == S::zero() {
        S::zero()
    } else {
        (S::of_u64(n) * base.ln()).exp()
    }
}

/// Value of a series in the extended nonnegative reals.
///
/// Several moment series diverge for heavy-tailed threshold laws (the
/// harmonic family has infinite mean); divergence is data, not an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentValue<S> {
    Finite(S),
    Divergent,
}

impl<S: Real> MomentValue<S> {
    pub fn is_divergent(&self) -> bool {
        matches!(self, MomentValue::Divergent)
    }

    pub fn finite(&self) -> Option<S> {
        match self {
            MomentValue::Finite(v) => Some(*v),
            MomentValue::Divergent => None,
        }
    }
}

pub use scheme::{Cause, LatticePoint, Scheme};

pub type Rates64 = analytic::Rates<f64>;
pub type Rates32 = analytic::Rates<f32>;
pub type EvalConfig64 = analytic::EvalConfig<f64>;
pub type EvalConfig32 = analytic::EvalConfig<f32>;
pub type Model64 = analytic::Model<f64>;
pub type Model32 = analytic::Model<f32>;
pub type Threshold64 = threshold::ThresholdDistribution<f64>;
pub type Threshold32 = threshold::ThresholdDistribution<f32>;
pub type Budget64 = special::SeriesBudget<f64>;
pub type Budget32 = special::SeriesBudget<f32>;
