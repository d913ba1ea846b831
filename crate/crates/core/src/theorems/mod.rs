//! End-to-end verifiers: the winding lower bound for image curves crossing an
//! annulus, the stretch/stretch/wind trichotomy, and the stretch-or-wind
//! cascade built on it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use crate::curves::{branch_arg_profile, extract_annulus_subcurve, Curve};
use crate::error::{Error, Result};
use crate::logpolar::LogComplex;
use crate::modulus::log_max_modulus;
use crate::product::EntireProductFunction;

mod cascade;

pub use cascade::{cascade, l_sequence, CascadeParams, CascadeReport, CascadeStep, Outcome, Seed};

/// `48√2/π ≈ 21.6076`: lower bound for `t^{a/4}`.
pub const T_QUARTER_MIN: f64 = 48.0 * SQRT_2 / PI;
/// `384√2/π ≈ 172.861`: lower bound for `a t^{a/4}`.
pub const A_T_QUARTER_MIN: f64 = 384.0 * SQRT_2 / PI;
/// `π²/(48√2) ≈ 0.145393`: constant of the winding bound.
pub const WINDING_CONSTANT: f64 = PI * PI / (48.0 * SQRT_2);

/// Empirical stand-ins for the existential radii `R_0` (the min condition)
/// and `R_1` (Hadamard convexity), as log-radii. They are recorded in every
/// report.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Surrogates {
    pub log_r0: f64,
    pub log_r1: f64,
}

pub fn admissible_ta(log_t: f64, a: f64, log_r1: f64) -> bool {
    a > 0.0
        && log_t >= log_r1
        && 0.25 * a * log_t >= libm::log(T_QUARTER_MIN)
        && libm::log(a) + 0.25 * a * log_t >= libm::log(A_T_QUARTER_MIN)
}

/// `π² t^{a/4} log M(t) / (48√2 log t)`, evaluated in logs.
pub fn winding_lower_bound(log_t: f64, a: f64, log_m: f64) -> f64 {
    if !(log_m > 0.0 && log_t > 0.0) {
        return 0.0;
    }
    libm::exp(libm::log(WINDING_CONSTANT) + 0.25 * a * log_t + libm::log(log_m) - libm::log(log_t))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WindingCertificate {
    pub log_t: f64,
    pub a: f64,
    pub log_max_t: f64,
    pub subcurve: Curve,
    /// `(z_0, z'_0)` as indices into `subcurve`.
    pub endpoint_indices: (usize, usize),
    pub measured_delta_arg: f64,
    pub lower_bound: f64,
    /// Error allowance on `measured_delta_arg`: twice the truncation bound at
    /// the outer radius plus rounding in the branch arguments.
    pub tail_budget: f64,
    pub admissible: bool,
    /// `None` when `(t, a)` is not admissible: the bound is then not claimed.
    pub passed: Option<bool>,
}

impl WindingCertificate {
    pub fn margin(&self) -> f64 {
        self.measured_delta_arg + self.tail_budget - self.lower_bound
    }
}

fn log_abs(f: &EntireProductFunction, z: LogComplex) -> Result<f64> {
    match f.eval_log(z) {
        Ok(v) => Ok(v.log_mod),
        Err(Error::ZeroFactor) => Ok(f64::NEG_INFINITY),
        Err(e) => Err(e),
    }
}

/// Checks the winding bound on a curve in the closed upper half plane that
/// meets `C(t)` and `C(t^{1+a})` and satisfies `1/M(t) < |f| < M(t)`.
pub fn theorem1_verify(
    f: &EntireProductFunction,
    curve: &Curve,
    log_t: f64,
    a: f64,
    log_r1: f64,
) -> Result<WindingCertificate> {
    if !(a > 0.0 && log_t > 0.0) {
        return Err(Error::InvalidArgument("need a > 0 and t > 1".into()));
    }
    if !curve.in_upper_half_plane() {
        return Err(Error::PreconditionFailed(
            "curve leaves the closed upper half plane".into(),
        ));
    }
    let log_m = log_max_modulus(f, log_t)?;
    for (index, p) in curve.points.iter().enumerate() {
        let v = log_abs(f, *p)?;
        if !(v > -log_m && v < log_m) {
            return Err(Error::HypothesisViolated {
                index,
                log_abs_f: v,
            });
        }
    }
    let log_outer = (1.0 + a) * log_t;
    let subcurve = extract_annulus_subcurve(curve, log_t, log_outer)?;
    let profile = branch_arg_profile(f, &subcurve)?;

    // the largest increase between two points is max - min of the prefix
    // values, taken in path order
    let (mut lo, mut best) = (0usize, (0usize, 0usize, 0.0f64));
    for (i, &v) in profile.iter().enumerate() {
        if v < profile[lo] {
            lo = i;
        }
        if v - profile[lo] > best.2 {
            best = (lo, i, v - profile[lo]);
        }
    }
    let (i0, i1, measured) = best;
    let scale = profile.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (_, top) = subcurve.log_mod_range();
    let tail_budget = 2.0 * f.tail_bound(top) + 1e-12 * scale;

    let lower_bound = winding_lower_bound(log_t, a, log_m);
    let admissible = admissible_ta(log_t, a, log_r1);
    Ok(WindingCertificate {
        log_t,
        a,
        log_max_t: log_m,
        subcurve,
        endpoint_indices: (i0, i1),
        measured_delta_arg: measured,
        lower_bound,
        tail_budget,
        admissible,
        passed: admissible.then_some(measured + tail_budget >= lower_bound),
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TrichotomyEvidence {
    /// `f(γ)` meets both `C(e^log_low)` and `C(e^log_high)`.
    Radii {
        log_low: f64,
        log_high: f64,
    },
    Winding(WindingCertificate),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrichotomyResult {
    pub case: u8,
    pub log_s: f64,
    pub l: f64,
    pub b: f64,
    pub log_max_s: f64,
    /// Extremes of `log|f|` over the samples and the circle crossings.
    pub min_log_abs_f: f64,
    pub max_log_abs_f: f64,
    pub evidence: TrichotomyEvidence,
}

impl TrichotomyResult {
    pub fn certificate(&self) -> Option<&WindingCertificate> {
        match &self.evidence {
            TrichotomyEvidence::Winding(c) => Some(c),
            TrichotomyEvidence::Radii { .. } => None,
        }
    }
}

/// The conditions on `(s, l, b)`; each violated one is listed.
pub fn trichotomy_preconditions(
    f: &EntireProductFunction,
    log_s: f64,
    l: f64,
    b: f64,
    m_exp: f64,
    surrogates: &Surrogates,
) -> Result<Vec<String>> {
    let mut failed = Vec::new();
    if !(b > 0.0) {
        failed.push(format!("b = {b} must be positive"));
        return Ok(failed);
    }
    let floor = 0f64.max(surrogates.log_r0).max(surrogates.log_r1);
    if !(log_s >= floor) {
        failed.push(format!(
            "log s = {log_s} < max(0, log R0, log R1) = {floor}"
        ));
    }
    if !(l >= m_exp.max(1.0 + b)) {
        failed.push(format!("l = {l} < max(m, 1 + b) = {}", m_exp.max(1.0 + b)));
    }
    let log_m = log_max_modulus(f, log_s)?;
    if !(log_m >= 2.0 * log_s) {
        failed.push(format!("log M(s) = {log_m} < 2 log s = {}", 2.0 * log_s));
    }
    let quarter = 0.25 * b * log_s;
    if !(quarter >= libm::log(T_QUARTER_MIN)) {
        failed.push(format!("s^(b/4) = {} < 48√2/π", libm::exp(quarter)));
    }
    if l > b && !(libm::log(b) + quarter - libm::log(l - b) >= libm::log(A_T_QUARTER_MIN)) {
        failed.push(format!(
            "b s^(b/4)/(l - b) = {} < 384√2/π",
            libm::exp(libm::log(b) + quarter - libm::log(l - b))
        ));
    }
    Ok(failed)
}

/// Crossing of the segment `a → b` with `log|z| = level`, linear in
/// `(log|z|, arg z)`.
fn crossing(a: LogComplex, b: LogComplex, level: f64) -> Option<LogComplex> {
    let (lo, hi) = (a.log_mod.min(b.log_mod), a.log_mod.max(b.log_mod));
    if !(lo <= level && level <= hi) || lo == hi {
        return None;
    }
    let s = (level - a.log_mod) / (b.log_mod - a.log_mod);
    Some(LogComplex::new(level, a.arg + s * (b.arg - a.arg)))
}

/// Decides which of the three alternatives holds for a curve in the closed
/// upper half plane meeting `C(s)` and `C(s^l)`:
///
/// 1. `f(γ)` meets `C(M(s))` and `C(M(s)^{l-b})`;
/// 2. `f(γ)` meets `C(M(s)^{1/l})` and `C(M(s))`;
/// 3. `M(s)^{1/l} < |f| < M(s)^{l-b}` on `γ`, and `f(γ)` winds: the winding
///    bound is checked with `t = s^{l-b}`, `a = b/(l-b)`.
///
/// The first case that holds is reported.
pub fn theorem2_classify(
    f: &EntireProductFunction,
    curve: &Curve,
    log_s: f64,
    l: f64,
    b: f64,
    m_exp: f64,
    surrogates: &Surrogates,
) -> Result<TrichotomyResult> {
    let failed = trichotomy_preconditions(f, log_s, l, b, m_exp, surrogates)?;
    if !failed.is_empty() {
        return Err(Error::PreconditionFailed(failed.join("; ")));
    }
    if !curve.in_upper_half_plane() {
        return Err(Error::PreconditionFailed(
            "curve leaves the closed upper half plane".into(),
        ));
    }
    let log_outer = l * log_s;
    let (lo, hi) = curve.log_mod_range();
    if !(lo <= log_s && hi >= log_outer) {
        return Err(Error::NotCrossing);
    }

    // γ is connected, so f(γ) meets C(ρ) exactly when min |f| <= ρ <= max |f|.
    // The crossings of C(s) are included: there |f| <= M(s) is guaranteed.
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut take = |v: f64| {
        min = min.min(v);
        max = max.max(v);
    };
    for p in &curve.points {
        take(log_abs(f, *p)?);
    }
    for w in curve.points.windows(2) {
        for level in [log_s, log_outer] {
            if let Some(z) = crossing(w[0], w[1], level) {
                take(log_abs(f, z)?);
            }
        }
    }

    let log_m = log_max_modulus(f, log_s)?;
    let low = log_m / l;
    let high = (l - b) * log_m;
    let result = |case, evidence| TrichotomyResult {
        case,
        log_s,
        l,
        b,
        log_max_s: log_m,
        min_log_abs_f: min,
        max_log_abs_f: max,
        evidence,
    };
    if min <= log_m && max >= high {
        return Ok(result(
            1,
            TrichotomyEvidence::Radii {
                log_low: log_m,
                log_high: high,
            },
        ));
    }
    if min <= low && max >= log_m {
        return Ok(result(
            2,
            TrichotomyEvidence::Radii {
                log_low: low,
                log_high: log_m,
            },
        ));
    }
    if max < log_m {
        // the min condition puts a point with |f| >= M(s) on every such curve
        return Err(Error::PreconditionFailed(format!(
            "min condition fails on this curve: max log|f| = {max} < log M(s) = {log_m}"
        )));
    }
    if !(low >= 0.0 && min > low && max < high) {
        return Err(Error::PreconditionFailed(format!(
            "middle band violated: log|f| in [{min}, {max}], band ({low}, {high})"
        )));
    }
    let cert = theorem1_verify(f, curve, (l - b) * log_s, b / (l - b), surrogates.log_r1)?;
    Ok(result(3, TrichotomyEvidence::Winding(cert)))
}
