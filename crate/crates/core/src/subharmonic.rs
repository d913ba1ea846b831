//! Circle maxima and means of `u_λ = log⁺(|f|/λ)` and the inequalities built
//! on them: the Poisson bound, the Milloux-Schmidt inequality, the identity
//! between the winding of `f(C_λ(r))` and `r T'_λ(r)`, and the wind-growth
//! bound.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2, TAU};

use crate::curves::{delta_arg, level_arc, level_theta, LevelTheta};
use crate::error::{Error, Result};
use crate::logpolar::LogComplex;
use crate::modulus::{log_max_modulus, log_min_modulus};
use crate::product::EntireProductFunction;
use crate::quadrature::integrate;

/// Step in `log r` for `r T'`.
pub const FD_STEP: f64 = 1e-4;
/// Radii on which the vanishing-minimum hypothesis is spot-checked.
pub const MS_SPOT_CHECKS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanSample {
    pub log_r: f64,
    pub b: f64,
    pub t: f64,
    pub r_t_prime: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanProfile {
    pub log_lambda: f64,
    pub samples: Vec<MeanSample>,
}

/// `B_λ(r) = log⁺(M(r)/λ)`.
pub fn b_lambda(f: &EntireProductFunction, log_r: f64, log_lambda: f64) -> Result<f64> {
    Ok((log_max_modulus(f, log_r)? - log_lambda).max(0.0))
}

/// `T_λ(r) = (1/π) ∫_0^π log⁺(|f(re^{iθ})|/λ) dθ`, split at the level angle.
pub fn t_lambda(f: &EntireProductFunction, log_r: f64, log_lambda: f64) -> Result<f64> {
    let upper = match level_theta(f, log_r, log_lambda)? {
        LevelTheta::Empty => return Ok(0.0),
        LevelTheta::FullCircle => PI,
        LevelTheta::Angle(th) => th,
    };
    if upper == 0.0 {
        return Ok(0.0);
    }
    let scale = b_lambda(f, log_r, log_lambda)?;
    let tol = PI * 1e-9f64.max(1e-14 * scale);
    let mut failure = None;
    let integral = integrate(
        |th| match f.eval_log(LogComplex::new(log_r, th)) {
            Ok(v) => (v.log_mod - log_lambda).max(0.0),
            Err(Error::ZeroFactor) => 0.0,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        upper,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(integral.value / PI)
}

/// `r T'_λ(r)`: central difference in `log r`, one Richardson step.
pub fn r_t_prime(f: &EntireProductFunction, log_r: f64, log_lambda: f64) -> Result<f64> {
    let d = |h: f64| -> Result<f64> {
        Ok((t_lambda(f, log_r + h, log_lambda)? - t_lambda(f, log_r - h, log_lambda)?) / (2.0 * h))
    };
    let coarse = d(FD_STEP)?;
    let fine = d(0.5 * FD_STEP)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Both sides of `Δarg f(C_λ(r)) = 2π r T'_λ(r)`.
pub fn winding_mean_identity(
    f: &EntireProductFunction,
    log_r: f64,
    log_lambda: f64,
) -> Result<(f64, f64)> {
    let arc = level_arc(f, log_r, log_lambda, 256)?;
    let lhs = delta_arg(f, &arc)?.delta_arg;
    let rhs = TAU * r_t_prime(f, log_r, log_lambda)?;
    Ok((lhs, rhs))
}

pub fn mean_profile(
    f: &EntireProductFunction,
    log_lambda: f64,
    log_r_lo: f64,
    log_r_hi: f64,
    n: usize,
) -> Result<MeanProfile> {
    let n = n.max(2);
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let x = log_r_lo + (log_r_hi - log_r_lo) * k as f64 / (n - 1) as f64;
        samples.push(MeanSample {
            log_r: x,
            b: b_lambda(f, x, log_lambda)?,
            t: t_lambda(f, x, log_lambda)?,
            r_t_prime: r_t_prime(f, x, log_lambda)?,
        });
    }
    Ok(MeanProfile {
        log_lambda,
        samples,
    })
}

/// `(r0 + r)/(r0 - r)` from log-radii.
pub fn poisson_factor(log_r: f64, log_r0: f64) -> f64 {
    let q = libm::exp(log_r - log_r0);
    (1.0 + q) / (1.0 - q)
}

/// `(4/π) arctan √(r/r0)` from log-radii.
pub fn milloux_factor(log_r: f64, log_r0: f64) -> f64 {
    4.0 / PI * libm::atan(libm::exp(0.5 * (log_r - log_r0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PoissonCheck {
    pub t_r: f64,
    pub b_r: f64,
    pub factor: f64,
    pub t_r0: f64,
    pub holds: bool,
}

/// `T(r) <= B(r) <= ((r0+r)/(r0-r)) T(r0)` with slack `1e-8` (relative to
/// the size of the terms once they exceed one).
pub fn poisson_bound_check(
    f: &EntireProductFunction,
    log_r: f64,
    log_r0: f64,
    log_lambda: f64,
) -> Result<PoissonCheck> {
    if !(log_r < log_r0) {
        return Err(Error::InvalidArgument("need r < r0".into()));
    }
    let t_r = t_lambda(f, log_r, log_lambda)?;
    let b_r = b_lambda(f, log_r, log_lambda)?;
    let t_r0 = t_lambda(f, log_r0, log_lambda)?;
    let factor = poisson_factor(log_r, log_r0);
    let slack = 1e-8 * b_r.max(factor * t_r0).max(1.0);
    Ok(PoissonCheck {
        t_r,
        b_r,
        factor,
        t_r0,
        holds: t_r <= b_r + slack && b_r <= factor * t_r0 + slack,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MillouxCheck {
    pub b_r: f64,
    pub b_r0: f64,
    pub factor: f64,
    pub holds: bool,
}

/// `B(r) <= (4/π) B(r0) arctan √(r/r0)` for `u = log⁺(|f|/M)`.
///
/// The hypothesis that `u` has zero minimum on every circle of radius below
/// `r0` is the statement `m(ρ) <= M`; it is spot-checked on
/// [`MS_SPOT_CHECKS`] radii spread uniformly in `log ρ` below `r0`.
pub fn milloux_schmidt_check(
    f: &EntireProductFunction,
    log_r: f64,
    log_r0: f64,
    log_m_level: f64,
) -> Result<MillouxCheck> {
    if !(log_r < log_r0) {
        return Err(Error::InvalidArgument("need r < r0".into()));
    }
    let lo = log_r.min(0.0) - 1.0;
    for k in 0..MS_SPOT_CHECKS {
        let x = lo + (log_r0 - lo) * k as f64 / MS_SPOT_CHECKS as f64;
        match log_min_modulus(f, x) {
            Ok(v) if v > log_m_level => return Err(Error::HypothesisUnmet { log_r: x }),
            Ok(_) | Err(Error::AtZero { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let b_r = b_lambda(f, log_r, log_m_level)?;
    let b_r0 = b_lambda(f, log_r0, log_m_level)?;
    let factor = milloux_factor(log_r, log_r0);
    let slack = 1e-8 * b_r.max(1.0);
    Ok(MillouxCheck {
        b_r,
        b_r0,
        factor,
        holds: b_r <= factor * b_r0 + slack,
    })
}

/// Right side of the wind-growth bound,
/// `(⅓ B_M(r2/2) - 2 B_M(s) - 4 log M) / (½ log(r2/r1))`, with `r1 = t`,
/// `r2 = t^{1+a}`, `s = t^{1+a/2}` and `M = M(t)`.
pub fn wind_growth_rhs(f: &EntireProductFunction, log_t: f64, a: f64) -> Result<f64> {
    let log_m = log_max_modulus(f, log_t)?;
    let log_r2 = (1.0 + a) * log_t;
    let log_s = (1.0 + 0.5 * a) * log_t;
    let b_half = b_lambda(f, log_r2 - core::f64::consts::LN_2, log_m)?;
    let b_s = b_lambda(f, log_s, log_m)?;
    Ok((b_half / 3.0 - 2.0 * b_s - 4.0 * log_m) / (0.5 * a * log_t))
}

/// `π a t^{a/4} log M(t) / (8√2)`: the lower bound for `B_M(t^{1+a}/2)`.
pub fn growth_lower_bound(log_t: f64, a: f64, log_m: f64) -> f64 {
    PI * a * libm::exp(0.25 * a * log_t) * log_m / (8.0 * SQRT_2)
}
