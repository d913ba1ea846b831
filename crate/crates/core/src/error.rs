use alloc::string::String;
use core::fmt;

use crate::logpolar::ZeroFactor;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The function definition violates a model invariant.
    InvalidFunction(String),
    /// The family's tail sum diverges; no finite truncation is certifiable.
    TailNotSummable,
    /// The certified truncation would need more zeros than can be stored.
    TooManyZeros {
        required: f64,
    },
    /// The evaluation point is a zero of the function.
    ZeroFactor,
    /// A circle passes through a zero.
    AtZero {
        log_r: f64,
    },
    /// A radius lies outside the range where the function model is certified.
    OutOfValidity {
        log_r: f64,
        max_log_radius: f64,
    },
    RangeTooSmall {
        usable: usize,
    },
    /// Bisection of a curve segment exceeded the depth limit.
    RefinementLimit {
        segment: usize,
    },
    EmptyLevelSet,
    NotCrossing,
    /// The circle minimum of `u_M` is positive at a sampled radius.
    HypothesisUnmet {
        log_r: f64,
    },
    /// `1/M(t) < |f| < M(t)` fails at a curve sample.
    HypothesisViolated {
        index: usize,
        log_abs_f: f64,
    },
    PreconditionFailed(String),
    ValidityExceeded {
        step: usize,
    },
    WindowTooSmall,
    /// Arguments beyond ~1e12 radians carry no usable fractional part.
    PrecisionLoss,
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidFunction(msg) => write!(f, "invalid function: {msg}"),
            Error::TailNotSummable => f.write_str("tail sum of the zero family diverges"),
            Error::TooManyZeros { required } => {
                write!(f, "certified truncation needs {required:.3e} zeros")
            }
            Error::ZeroFactor => f.write_str("evaluation point is a zero of the function"),
            Error::AtZero { log_r } => write!(f, "circle log r = {log_r} passes through a zero"),
            Error::OutOfValidity {
                log_r,
                max_log_radius,
            } => write!(
                f,
                "log radius {log_r} exceeds validity limit {max_log_radius}"
            ),
            Error::RangeTooSmall { usable } => {
                write!(f, "only {usable} usable samples (need at least 8)")
            }
            Error::RefinementLimit { segment } => {
                write!(f, "refinement depth exceeded on segment {segment}")
            }
            Error::EmptyLevelSet => f.write_str("level set does not meet the circle"),
            Error::NotCrossing => f.write_str("curve does not cross both circles"),
            Error::HypothesisUnmet { log_r } => {
                write!(f, "circle minimum is positive at log r = {log_r}")
            }
            Error::HypothesisViolated { index, log_abs_f } => write!(
                f,
                "hypothesis 1/M(t) < |f| < M(t) fails at sample {index} (log|f| = {log_abs_f})"
            ),
            Error::PreconditionFailed(msg) => write!(f, "precondition failed: {msg}"),
            Error::ValidityExceeded { step } => {
                write!(f, "validity range exceeded at cascade step {step}")
            }
            Error::WindowTooSmall => f.write_str("no interior component: window too small"),
            Error::PrecisionLoss => f.write_str("argument magnitude exceeds usable precision"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

impl From<ZeroFactor> for Error {
    fn from(_: ZeroFactor) -> Self {
        Error::ZeroFactor
    }
}

pub type Result<T> = core::result::Result<T, Error>;
