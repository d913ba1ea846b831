//! Maximum and minimum modulus, growth order, Hadamard convexity and the
//! iterated maximum modulus, all in log-radius coordinates.
//!
//! For this function class `|f(re^{iθ})|` is strictly decreasing in
//! `θ ∈ [0, π]`, so `M(r) = |f(r)|` and `m(r) = |f(-r)|`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::logpolar::LogComplex;
use crate::product::EntireProductFunction;
use crate::tower::Tower;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthSample {
    pub log_r: f64,
    pub log_max: f64,
    pub log_min: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GrowthProfile {
    pub samples: Vec<GrowthSample>,
    pub order_estimate: Option<f64>,
    pub hadamard_ok: bool,
}

fn check_validity(f: &EntireProductFunction, log_r: f64) -> Result<()> {
    let max = f.max_log_radius();
    if log_r > max {
        return Err(Error::OutOfValidity {
            log_r,
            max_log_radius: max,
        });
    }
    Ok(())
}

/// `log M(r)`.
pub fn log_max_modulus(f: &EntireProductFunction, log_r: f64) -> Result<f64> {
    check_validity(f, log_r)?;
    Ok(f.eval_log(LogComplex::new(log_r, 0.0))?.log_mod)
}

/// `log M(r)` together with the tail bound of the model at that radius.
pub fn log_max_modulus_bounded(f: &EntireProductFunction, log_r: f64) -> Result<(f64, f64)> {
    Ok((log_max_modulus(f, log_r)?, f.tail_bound(log_r)))
}

/// `log m(r)`; fails with `AtZero` when the circle passes through a zero.
pub fn log_min_modulus(f: &EntireProductFunction, log_r: f64) -> Result<f64> {
    check_validity(f, log_r)?;
    if f.is_zero_radius(log_r) {
        return Err(Error::AtZero { log_r });
    }
    match f.eval_log(LogComplex::new(log_r, PI)) {
        Ok(v) => Ok(v.log_mod),
        Err(Error::ZeroFactor) => Err(Error::AtZero { log_r }),
        Err(e) => Err(e),
    }
}

/// Least-squares slope of `log log M(r)` against `log r`.
pub fn estimate_order(
    f: &EntireProductFunction,
    log_r_lo: f64,
    log_r_hi: f64,
    n_samples: usize,
) -> Result<f64> {
    let mut pts = Vec::with_capacity(n_samples);
    if n_samples >= 2 && log_r_hi > log_r_lo {
        for i in 0..n_samples {
            let x = log_r_lo + (log_r_hi - log_r_lo) * i as f64 / (n_samples - 1) as f64;
            let lm = log_max_modulus(f, x)?;
            if lm > 0.0 {
                pts.push((x, libm::log(lm)));
            }
        }
    }
    if pts.len() < 8 {
        return Err(Error::RangeTooSmall { usable: pts.len() });
    }
    Ok(least_squares_slope(&pts))
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// `M(r^c) >= M(r)^c`, allowing for the tail budget at both radii.
pub fn hadamard_check(f: &EntireProductFunction, log_r: f64, cexp: f64) -> Result<bool> {
    let (hi, tail_hi) = log_max_modulus_bounded(f, cexp * log_r)?;
    let (lo, tail_lo) = log_max_modulus_bounded(f, log_r)?;
    let rounding = 1e-12 * hi.abs().max(1.0);
    Ok(hi >= cexp * lo - tail_hi - cexp * tail_lo - rounding)
}

/// Smallest sampled `log r` in `[lo, hi]` from which `hadamard_check`
/// passes at every later sample: an empirical surrogate for the radius past
/// which Hadamard convexity in the form `M(r^c) >= M(r)^c` holds.
pub fn hadamard_threshold(
    f: &EntireProductFunction,
    log_r_lo: f64,
    log_r_hi: f64,
    cexp: f64,
    n_samples: usize,
) -> Result<Option<f64>> {
    let mut threshold = None;
    for i in (0..n_samples).rev() {
        let x = log_r_lo + (log_r_hi - log_r_lo) * i as f64 / (n_samples.max(2) - 1) as f64;
        if hadamard_check(f, x, cexp)? {
            threshold = Some(x);
        } else {
            break;
        }
    }
    Ok(threshold)
}

/// `ρ log r` beyond which `log M = K r^ρ` is exact to f64 resolution.
const ASYMPTOTIC_FROM: f64 = 40.0;

/// `log M(r)` for a log-radius of any size: exact inside the validity range,
/// from the growth law `log M = K r^ρ` of a closed form beyond it.
pub fn log_max_modulus_tower(f: &EntireProductFunction, log_r: Tower) -> Result<Tower> {
    if let Some(x) = log_r.to_f64() {
        if x <= f.max_log_radius() {
            return Ok(Tower::from_f64(log_max_modulus(f, x)?));
        }
    }
    match f.growth_law() {
        Some((ln_k, rho)) if log_r.scale(rho) >= Tower::from_f64(ASYMPTOTIC_FROM) => {
            Ok(log_r.scale(rho).add_scalar(ln_k).exp())
        }
        _ => Err(Error::OutOfValidity {
            log_r: log_r.to_f64().unwrap_or(f64::INFINITY),
            max_log_radius: f.max_log_radius(),
        }),
    }
}

/// Smallest `log r` in `[lo, hi]` with `log M(r) > coeff * log r`, located
/// on a uniform grid and refined by bisection. With `coeff = 1/eps` this is
/// where `μ(r) > r` starts; with `coeff = 4L²` it is the size condition
/// `M(r) > r^{4L²}`.
pub fn dominance_threshold(
    f: &EntireProductFunction,
    coeff: f64,
    log_r_lo: f64,
    log_r_hi: f64,
) -> Result<Option<f64>> {
    let holds = |x: f64| -> Result<bool> { Ok(log_max_modulus(f, x)? > coeff * x) };
    const GRID: usize = 256;
    let step = (log_r_hi - log_r_lo) / GRID as f64;
    let mut prev = log_r_lo;
    if holds(prev)? {
        return Ok(Some(prev));
    }
    for i in 1..=GRID {
        let x = log_r_lo + step * i as f64;
        if holds(x)? {
            let (mut a, mut b) = (prev, x);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if holds(mid)? {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return Ok(Some(b));
        }
        prev = x;
    }
    Ok(None)
}

/// Searches `(log r, m_exp log r)` for `ρ` with `m(ρ) >= M(r)`; returns the
/// best candidate found if it meets the bound.
///
/// `log m(ρ)` is concave in `ρ` between consecutive zeros, so each gap is
/// searched by ternary search starting from the geometric mean of its ends.
pub fn find_min_condition_rho(
    f: &EntireProductFunction,
    log_r: f64,
    m_exp: f64,
) -> Result<Option<f64>> {
    const MAX_GAPS: usize = 4096;
    let lo = log_r;
    let hi = m_exp * log_r;
    if !(hi > lo) {
        return Err(Error::InvalidArgument(
            "need m_exp > 1 and log r > 0".into(),
        ));
    }
    let target = log_max_modulus(f, log_r)?;
    check_validity(f, hi)?;

    // gap boundaries, ascending
    let mut cuts = f.log_zeros_between(lo, hi, MAX_GAPS);
    cuts.reverse();
    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(lo);
    bounds.extend(cuts);
    bounds.push(hi);

    let m_at = |x: f64| -> f64 {
        match log_min_modulus(f, x) {
            Ok(v) => v,
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let mut best: Option<(f64, f64)> = None;
    let mut consider = |x: f64, v: f64| {
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((x, v));
        }
    };
    consider(lo, m_at(lo));
    consider(hi, m_at(hi));
    // search the widest gaps first (they sit at the top of the interval)
    for w in bounds.windows(2).rev() {
        let (mut a, mut b) = (w[0], w[1]);
        let seed = 0.5 * (a + b);
        consider(seed, m_at(seed));
        for _ in 0..100 {
            if b - a <= 1e-12 * b.abs().max(1.0) {
                break;
            }
            let x1 = a + (b - a) / 3.0;
            let x2 = b - (b - a) / 3.0;
            if m_at(x1) < m_at(x2) {
                a = x1;
            } else {
                b = x2;
            }
        }
        let x = 0.5 * (a + b);
        consider(x, m_at(x));
    }
    Ok(best.filter(|&(_, v)| v >= target).map(|(x, _)| x))
}

/// `λ_0 = log R`, `λ_{k+1} = eps * log M(e^{λ_k})`.
///
/// Only the radii that are evaluated (`λ_0 .. λ_{n-1}`) must lie inside the
/// validity range; the last entry is an output.
pub fn iterate_log_mu(
    f: &EntireProductFunction,
    log_r: f64,
    eps: f64,
    n: usize,
) -> Result<Vec<f64>> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument("eps must lie in (0, 1]".into()));
    }
    let mut out = Vec::with_capacity(n + 1);
    out.push(log_r);
    let mut x = log_r;
    for _ in 0..n {
        x = eps * log_max_modulus(f, x)?;
        out.push(x);
    }
    Ok(out)
}

pub fn iterate_log_max(f: &EntireProductFunction, log_r: f64, n: usize) -> Result<Vec<f64>> {
    iterate_log_mu(f, log_r, 1.0, n)
}

/// Samples `(log r, log M, log m)` on a uniform log-radius grid.
///
/// Radii that hit a zero record `log m = -inf`. `hadamard_ok` reports
/// whether every second divided difference of `log M` is at least `-1e-9`
/// beyond the tail budget.
pub fn growth_profile(
    f: &EntireProductFunction,
    log_r_lo: f64,
    log_r_hi: f64,
    n_samples: usize,
) -> Result<GrowthProfile> {
    if n_samples < 2 || !(log_r_hi > log_r_lo) {
        return Err(Error::RangeTooSmall { usable: n_samples });
    }
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let x = log_r_lo + (log_r_hi - log_r_lo) * i as f64 / (n_samples - 1) as f64;
        let log_min = match log_min_modulus(f, x) {
            Ok(v) => v,
            Err(Error::AtZero { .. }) => f64::NEG_INFINITY,
            Err(e) => return Err(e),
        };
        samples.push(GrowthSample {
            log_r: x,
            log_max: log_max_modulus(f, x)?,
            log_min,
        });
    }
    let hadamard_ok = convexity_violations(f, &samples, 1e-9) == 0;
    let order_estimate = estimate_order(f, log_r_lo, log_r_hi, n_samples).ok();
    Ok(GrowthProfile {
        samples,
        order_estimate,
        hadamard_ok,
    })
}

/// Counts sample triples whose second divided difference of `log M` in
/// `log r` falls below `-slack` (after allowing for the tail budget).
pub fn convexity_violations(
    f: &EntireProductFunction,
    samples: &[GrowthSample],
    slack: f64,
) -> usize {
    samples
        .windows(3)
        .filter(|w| {
            let (x0, x1, x2) = (w[0].log_r, w[1].log_r, w[2].log_r);
            let d1 = (w[1].log_max - w[0].log_max) / (x1 - x0);
            let d2 = (w[2].log_max - w[1].log_max) / (x2 - x1);
            let dd = (d2 - d1) / (x2 - x0);
            let budget = w.iter().map(|s| f.tail_bound(s.log_r)).sum::<f64>()
                / ((x1 - x0).min(x2 - x1) * (x2 - x0))
                + 1e-15 * w[2].log_max.abs() / ((x1 - x0).min(x2 - x1) * (x2 - x0));
            dd < -slack - budget
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{Zero, ZeroFamily};
    use crate::product::ClosedForm;
    use crate::special::log_cosh;
    use alloc::vec;

    fn cosh4() -> EntireProductFunction {
        EntireProductFunction::truncate(&ZeroFamily::CoshSqrt, libm::log(16.0), 1e-10).unwrap()
    }

    fn single() -> EntireProductFunction {
        EntireProductFunction::from_zeros(1.0, 0, vec![Zero { a: 1.0, p: 1 }]).unwrap()
    }

    #[test]
    fn max_modulus_examples() {
        let v = log_max_modulus(&cosh4(), libm::log(4.0)).unwrap();
        assert!((v - 1.325_01).abs() < 1e-5 && (v - log_cosh(2.0)).abs() < 1e-9);
        assert!((log_max_modulus(&single(), 0.0).unwrap() - libm::log(2.0)).abs() < 1e-15);

        let q3 = EntireProductFunction::truncate(
            &ZeroFamily::PowerLaw { alpha: 1.0, q: 3.0 },
            libm::log(8.0),
            1e-12,
        )
        .unwrap();
        let lr = libm::log(8.0);
        let m = log_max_modulus(&q3, lr).unwrap();
        let mut brute = f64::NEG_INFINITY;
        for k in 1..10_000 {
            let th = -PI + 2.0 * PI * k as f64 / 10_000.0;
            brute = brute.max(q3.eval_log(LogComplex::new(lr, th)).unwrap().log_mod);
        }
        assert!((m - brute).abs() <= 1e-9 * m.abs());
    }

    #[test]
    fn max_modulus_outside_validity() {
        assert!(matches!(
            log_max_modulus(&cosh4(), 10.0),
            Err(Error::OutOfValidity { .. })
        ));
    }

    #[test]
    fn min_modulus_examples() {
        let v = log_min_modulus(&cosh4(), libm::log(4.0)).unwrap();
        assert!((v - libm::log(libm::cos(2.0).abs())).abs() < 1e-9);
        assert!(
            (log_min_modulus(&single(), libm::log(3.0)).unwrap() - libm::log(2.0)).abs() < 1e-15
        );
        let a1 = (PI / 2.0) * (PI / 2.0);
        assert!(matches!(
            log_min_modulus(&cosh4(), libm::log(a1)),
            Err(Error::AtZero { .. })
        ));
        let closed = EntireProductFunction::closed_form(ClosedForm::CoshSqrt).unwrap();
        assert!(matches!(
            log_min_modulus(&closed, libm::log(a1)),
            Err(Error::AtZero { .. })
        ));
    }

    #[test]
    fn order_estimates() {
        let (lo, hi) = (libm::log(1e3), libm::log(1e5));
        for form in [ClosedForm::CoshSqrt, ClosedForm::SinhSqrtOverSqrt] {
            let f = EntireProductFunction::closed_form(form).unwrap();
            let rho = estimate_order(&f, lo, hi, 32).unwrap();
            assert!((0.45..=0.55).contains(&rho), "{form:?}: {rho}");
        }
        let q3 =
            EntireProductFunction::closed_form(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }).unwrap();
        let rho = estimate_order(&q3, lo, hi, 32).unwrap();
        assert!((0.28..=0.38).contains(&rho), "{rho}");
        assert!(matches!(
            estimate_order(&q3, lo, hi, 5),
            Err(Error::RangeTooSmall { usable: 5 })
        ));
    }

    #[test]
    fn hadamard_examples() {
        let cosh = EntireProductFunction::closed_form(ClosedForm::CoshSqrt).unwrap();
        assert!(hadamard_check(&cosh, libm::log(100.0), 2.0).unwrap());
        assert!(hadamard_check(&cosh, libm::log(100.0), 1.0 + 1e-12).unwrap());
        let q3 =
            EntireProductFunction::closed_form(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }).unwrap();
        assert!(hadamard_check(&q3, libm::log(50.0), 3.0).unwrap());
    }

    #[test]
    fn min_condition_search() {
        let cosh = EntireProductFunction::closed_form(ClosedForm::CoshSqrt).unwrap();
        assert_eq!(
            find_min_condition_rho(&cosh, libm::log(100.0), 4.0).unwrap(),
            None
        );

        let q3 =
            EntireProductFunction::closed_form(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }).unwrap();
        let lr = libm::log(100.0);
        let rho = find_min_condition_rho(&q3, lr, 4.0)
            .unwrap()
            .expect("order < 1/2");
        assert!(rho > lr && rho <= 4.0 * lr);
        assert!(log_min_modulus(&q3, rho).unwrap() >= log_max_modulus(&q3, lr).unwrap());

        // zero-free interval above a single small zero: m increases, so the
        // search returns the right end of the interval
        let f = EntireProductFunction::from_zeros(1.0, 0, vec![Zero { a: 0.5, p: 3 }]).unwrap();
        let lr = libm::log(2.0);
        let rho = find_min_condition_rho(&f, lr, 3.0).unwrap().unwrap();
        let mut brute = (f64::NEG_INFINITY, 0.0);
        for k in 1..=10_000 {
            let x = lr + 2.0 * lr * k as f64 / 10_000.0;
            let v = log_min_modulus(&f, x).unwrap();
            if v > brute.0 {
                brute = (v, x);
            }
        }
        assert!((rho - brute.1).abs() < 1e-9);
    }

    #[test]
    fn iteration_examples() {
        let cosh = EntireProductFunction::closed_form(ClosedForm::CoshSqrt).unwrap();
        let lr = libm::log(100.0);
        let it = iterate_log_max(&cosh, lr, 2).unwrap();
        assert!((it[0] - 4.6052).abs() < 1e-4 && (it[1] - 9.3069).abs() < 1e-4);
        assert!((it[2] - log_cosh(libm::sqrt(libm::cosh(10.0)))).abs() < 1e-9);

        let mu = iterate_log_mu(&cosh, lr, 0.2, 1).unwrap();
        assert!((mu[1] - 1.8614).abs() < 1e-4 && mu[1] < mu[0]);
        assert_eq!(iterate_log_mu(&cosh, lr, 1.0, 2).unwrap(), it);

        let q3 =
            EntireProductFunction::closed_form(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }).unwrap();
        let it = iterate_log_max(&q3, libm::log(10.0), 3).unwrap();
        assert!(it.windows(2).all(|w| w[1] > w[0]));

        // with M(R) > R^{4L²}, μ = M^{1/8} grows from R
        let lr = dominance_threshold(&q3, 4.0 * 64.0, 1.0, 200.0)
            .unwrap()
            .unwrap();
        let mu = iterate_log_mu(&q3, lr + 1.0, 1.0 / 8.0, 2).unwrap();
        assert!(mu.windows(2).all(|w| w[1] > w[0]), "{mu:?}");
    }

    #[test]
    fn profile_is_convex_and_ordered() {
        let cosh = EntireProductFunction::closed_form(ClosedForm::CoshSqrt).unwrap();
        let p = growth_profile(&cosh, libm::log(10.0), libm::log(1e6), 200).unwrap();
        assert!(p.hadamard_ok);
        assert!(p.samples.iter().all(|s| s.log_max >= s.log_min));
        assert!(p.samples.windows(2).all(|w| w[1].log_max >= w[0].log_max));
    }
}
