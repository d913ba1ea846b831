//! The stretch-or-wind cascade: image curves either stretch across rapidly
//! expanding annuli or wind around the origin.
//!
//! Log-radii are carried as [`Tower`] values: `log r_{n+1} ~ log M(r_n)`
//! leaves `f64` range by the second or third step. Past the evaluation limit
//! of the function model, `log M` comes from its asymptotic growth law, which
//! is only available along the positive axis; polyline seeds stop there.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{theorem2_classify, Surrogates};
use crate::curves::{extract_annulus_subcurve, Curve};
use crate::error::{Error, Result};
use crate::logpolar::LogComplex;
use crate::modulus::{dominance_threshold, log_max_modulus, log_max_modulus_tower};
use crate::product::EntireProductFunction;
use crate::tower::Tower;
use core::f64::consts::PI;

/// Image polylines stop growing here; the step then ends the cascade.
const IMAGE_POINT_BUDGET: usize = 200_000;
const IMAGE_MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, PartialEq)]
pub enum Seed {
    /// `[r_0, r_0^L]` on the positive real axis; the images stay on it.
    PositiveRay,
    Curve(Curve),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Outcome {
    Stretch,
    Wind,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CascadeParams {
    pub l: f64,
    pub eps: f64,
    pub m_exp: f64,
    /// Where `M(r) > r^{4L²}` starts on the sampled range.
    pub log_r: f64,
    pub surrogates: Surrogates,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CascadeStep {
    pub n: usize,
    pub log_r_n: Tower,
    pub l_n: f64,
    pub b: f64,
    pub case: Option<u8>,
    pub outcome: Outcome,
    pub log_max: Option<Tower>,
    pub log_r_next: Option<Tower>,
    /// `log r_{n+1} >= eps log M(r_n) - 1e-9`.
    pub mu_ok: Option<bool>,
    /// `r_n >= r_0^{(4L)^n}`.
    pub growth_ok: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CascadeReport {
    pub params: CascadeParams,
    pub steps: Vec<CascadeStep>,
    pub final_n: usize,
}

impl CascadeReport {
    /// Longest run of consecutive stretch steps.
    pub fn stretch_run(&self) -> usize {
        let (mut best, mut run) = (0, 0);
        for s in &self.steps {
            if s.outcome == Outcome::Stretch {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    }

    pub fn wound(&self) -> bool {
        self.steps.iter().any(|s| s.outcome == Outcome::Wind)
    }
}

/// `L_0 = L - 1`, `L_{k+1} = L_k - 1/(k+1)²`.
pub fn l_sequence(l: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut cur = l - 1.0;
    for k in 0..n {
        out.push(cur);
        let d = (k + 1) as f64;
        cur -= 1.0 / (d * d);
    }
    out
}

/// The trichotomy conditions in tower arithmetic, for radii past `f64`.
fn tower_preconditions(
    log_s: Tower,
    log_m: Tower,
    l: f64,
    b: f64,
    m_exp: f64,
    surrogates: &Surrogates,
) -> Vec<String> {
    let mut failed = Vec::new();
    let floor = 0f64.max(surrogates.log_r0).max(surrogates.log_r1);
    if log_s < Tower::from_f64(floor) {
        failed.push(format!("log s = {log_s} below surrogate thresholds"));
    }
    if !(l >= m_exp.max(1.0 + b)) {
        failed.push(format!("l = {l} < max(m, 1 + b)"));
    }
    if log_m < log_s.scale(2.0) {
        failed.push("log M(s) < 2 log s".to_string());
    }
    let quarter = log_s.scale(0.25 * b);
    if quarter < Tower::from_f64(libm::log(super::T_QUARTER_MIN)) {
        failed.push("s^(b/4) < 48√2/π".to_string());
    }
    let lhs = quarter.add_scalar(libm::log(b) - libm::log(l - b));
    if lhs < Tower::from_f64(libm::log(super::A_T_QUARTER_MIN)) {
        failed.push("b s^(b/4)/(l - b) < 384√2/π".to_string());
    }
    failed
}

/// `f(γ)` as a polyline: sample images, bisecting in the domain until each
/// image step has `|Δarg| < π/2` and `|Δlog|w|| < 1`.
fn image_curve(f: &EntireProductFunction, curve: &Curve) -> Result<Curve> {
    let mut out = Vec::new();
    let first = *curve.points.first().ok_or(Error::NotCrossing)?;
    let mut wa = f.eval_log(first)?;
    out.push(wa);
    for (segment, w) in curve.points.windows(2).enumerate() {
        // depth-first over sub-segments, left to right
        let mut stack = Vec::new();
        let wb = f.eval_log(w[1])?;
        stack.push((w[0], w[1], wb, 0u32));
        while let Some((a, b, fb, depth)) = stack.pop() {
            let fine = (fb.arg - wa.arg).abs() < 0.5 * PI && (fb.log_mod - wa.log_mod).abs() < 1.0;
            if fine {
                out.push(fb);
                wa = fb;
                if out.len() > IMAGE_POINT_BUDGET {
                    return Err(Error::RefinementLimit { segment });
                }
                continue;
            }
            if depth >= IMAGE_MAX_DEPTH {
                return Err(Error::RefinementLimit { segment });
            }
            let m = LogComplex::new(0.5 * (a.log_mod + b.log_mod), 0.5 * (a.arg + b.arg));
            let fm = f.eval_log(m)?;
            stack.push((m, b, fb, depth + 1));
            stack.push((a, m, fm, depth + 1));
        }
    }
    Ok(Curve::open(out))
}

enum Current {
    Ray,
    Polyline(Curve),
}

/// Runs the cascade from `γ_0` (meeting `C(r_0)` and `C(r_0^L)`) for at
/// most `max_steps` steps (capped at 8).
pub fn cascade(
    f: &EntireProductFunction,
    seed: &Seed,
    log_r0: f64,
    m_exp: f64,
    surrogates: &Surrogates,
    max_steps: usize,
) -> Result<CascadeReport> {
    let l = m_exp + 4.0;
    let eps = 1.0 / l;
    let size = 4.0 * l * l;
    let log_r = dominance_threshold(f, size, 1.0, log_r0)?.ok_or_else(|| {
        Error::PreconditionFailed(format!("M(r) > r^{size} fails up to log r0 = {log_r0}"))
    })?;
    if !(log_max_modulus(f, log_r0)? > size * log_r0) {
        return Err(Error::PreconditionFailed(format!(
            "M(r0) <= r0^{size} at log r0 = {log_r0}"
        )));
    }
    let params = CascadeParams {
        l,
        eps,
        m_exp,
        log_r,
        surrogates: *surrogates,
    };
    let mut current = match seed {
        Seed::PositiveRay => Current::Ray,
        Seed::Curve(c) => {
            let (lo, hi) = c.log_mod_range();
            if !(lo <= log_r0 && hi >= l * log_r0) {
                return Err(Error::NotCrossing);
            }
            Current::Polyline(c.clone())
        }
    };

    let max_steps = max_steps.min(8);
    let ls = l_sequence(l, max_steps + 1);
    let log_r0_t = Tower::from_f64(log_r0);
    let mut lambda = log_r0_t;
    let mut steps: Vec<CascadeStep> = Vec::new();
    for n in 0..max_steps {
        let l_n = ls[n];
        let b = 1.0 / ((n + 1) as f64 * (n + 1) as f64);
        let growth_floor = log_r0_t.scale(libm::pow(4.0 * l, n as f64));
        let mut step = CascadeStep {
            n,
            log_r_n: lambda,
            l_n,
            b,
            case: None,
            outcome: Outcome::Stop,
            log_max: None,
            log_r_next: None,
            mu_ok: None,
            growth_ok: !(lambda < growth_floor),
            note: String::new(),
        };
        let log_m = match log_max_modulus_tower(f, lambda) {
            Ok(v) => v,
            Err(e) => {
                step.note = format!("{}: {e}", Error::ValidityExceeded { step: n });
                steps.push(step);
                break;
            }
        };
        step.log_max = Some(log_m);

        let classified = match &current {
            Current::Polyline(c) => match lambda.to_f64() {
                Some(log_s) if l_n * log_s <= f.max_log_radius() => {
                    theorem2_classify(f, &c.folded_upper(), log_s, l_n, b, m_exp, surrogates)
                        .map(|r| (r.case, r.certificate().cloned()))
                }
                _ => Err(Error::ValidityExceeded { step: n }),
            },
            Current::Ray => match lambda.to_f64() {
                Some(log_s) if l_n * log_s <= f.max_log_radius() => {
                    let ray = Curve::log_segment(
                        LogComplex::new(log_s, 0.0),
                        LogComplex::new(l_n * log_s, 0.0),
                        64,
                    );
                    theorem2_classify(f, &ray, log_s, l_n, b, m_exp, surrogates)
                        .map(|r| (r.case, r.certificate().cloned()))
                }
                _ => {
                    // |f| runs from M(s) to M(s^l) along the ray
                    let failed = tower_preconditions(lambda, log_m, l_n, b, m_exp, surrogates);
                    if !failed.is_empty() {
                        Err(Error::PreconditionFailed(failed.join("; ")))
                    } else {
                        log_max_modulus_tower(f, lambda.scale(l_n)).and_then(|top| {
                            if top >= log_m.scale(l_n - b) {
                                Ok((1, None))
                            } else {
                                Err(Error::PreconditionFailed(
                                    "positive ray does not reach M(s)^(l-b)".into(),
                                ))
                            }
                        })
                    }
                }
            },
        };
        let (case, cert) = match classified {
            Ok(v) => v,
            Err(e) => {
                step.note = e.to_string();
                steps.push(step);
                break;
            }
        };
        step.case = Some(case);
        if case == 3 {
            step.outcome = Outcome::Wind;
            if let Some(c) = cert {
                step.note = format!(
                    "measured Δarg {:.6e} >= bound {:.6e}",
                    c.measured_delta_arg, c.lower_bound
                );
            }
            steps.push(step);
            break;
        }
        let next = if case == 1 {
            log_m
        } else {
            log_m.scale(1.0 / l_n)
        };
        step.log_r_next = Some(next);
        step.mu_ok = Some(match (next.to_f64(), log_m.to_f64()) {
            (Some(x), Some(m)) => x >= eps * m - 1e-9,
            _ => !(next < log_m.scale(eps)),
        });
        step.outcome = Outcome::Stretch;

        // γ_{n+1}: the image restricted to the next annulus
        let l_next = ls[n + 1];
        if let Current::Polyline(c) = &current {
            let built = next
                .to_f64()
                .ok_or(Error::ValidityExceeded { step: n })
                .and_then(|x| {
                    let image = image_curve(f, &c.folded_upper())?;
                    extract_annulus_subcurve(&image, x, l_next * x)
                });
            match built {
                Ok(g) => current = Current::Polyline(g),
                Err(e) => {
                    step.note = format!("image curve for the next step unavailable: {e}");
                    steps.push(step);
                    let mut stop = CascadeStep {
                        n: n + 1,
                        log_r_n: next,
                        l_n: l_next,
                        b: 1.0 / ((n + 2) as f64 * (n + 2) as f64),
                        case: None,
                        outcome: Outcome::Stop,
                        log_max: None,
                        log_r_next: None,
                        mu_ok: None,
                        growth_ok: true,
                        note: format!("{}", Error::ValidityExceeded { step: n + 1 }),
                    };
                    stop.growth_ok = !(next < log_r0_t.scale(libm::pow(4.0 * l, (n + 1) as f64)));
                    steps.push(stop);
                    break;
                }
            }
        }
        steps.push(step);
        lambda = next;
    }
    let final_n = steps.last().map_or(0, |s| s.n);
    Ok(CascadeReport {
        params,
        steps,
        final_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::ClosedForm;

    fn cube() -> EntireProductFunction {
        EntireProductFunction::closed_form(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }).unwrap()
    }

    const FREE: Surrogates = Surrogates {
        log_r0: f64::NEG_INFINITY,
        log_r1: f64::NEG_INFINITY,
    };

    #[test]
    fn l_recursion() {
        let ls = l_sequence(8.0, 4);
        assert_eq!(&ls[..3], &[7.0, 6.0, 5.75]);
        assert!((ls[3] - 5.638_888_9).abs() < 1e-6);
        // telescoping: L_n > L - 3 forever
        assert!(l_sequence(6.0, 10_000).iter().all(|&x| x > 3.0));
    }

    #[test]
    fn positive_ray_stretches() {
        let f = cube();
        let r = cascade(&f, &Seed::PositiveRay, 30.0, 2.0, &FREE, 8).unwrap();
        assert!(r.stretch_run() >= 3, "{r:#?}");
        for s in r.steps.iter().filter(|s| s.outcome == Outcome::Stretch) {
            assert_eq!(s.mu_ok, Some(true));
            assert!(s.growth_ok);
            assert!(s.l_n > 3.0);
        }
        // r_1 >= μ(r_0)
        let s0 = &r.steps[0];
        let m0 = s0.log_max.unwrap().to_f64().unwrap();
        assert!(s0.log_r_next.unwrap().to_f64().unwrap() >= m0 / 6.0);
    }

    #[test]
    fn size_condition_is_checked() {
        let f = cube();
        assert!(matches!(
            cascade(&f, &Seed::PositiveRay, 5.0, 2.0, &FREE, 8),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
