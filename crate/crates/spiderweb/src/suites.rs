//! The standard verification matrices shared by the CLI and the acceptance
//! tests. Randomized suites draw from a ChaCha stream keyed by `seed`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use spiderweb_core::curves::{level_curve, Curve};
use spiderweb_core::modulus::{
    find_min_condition_rho, hadamard_threshold, log_max_modulus, log_min_modulus,
};
use spiderweb_core::subharmonic::{
    milloux_schmidt_check, poisson_bound_check, winding_mean_identity, MillouxCheck, PoissonCheck,
};
use spiderweb_core::theorems::{
    theorem1_verify, theorem2_classify, Surrogates, TrichotomyResult, WindingCertificate,
};
use spiderweb_core::{ClosedForm, EntireProductFunction, Error, LogComplex, Result, Zero};

use crate::function_file::FunctionFile;

/// Empirical `R_0`/`R_1` on `[log_lo, log_hi]` (`n` samples): the smallest
/// sample from which the min condition (resp. `M(r²) >= M(r)²`) holds at
/// every later sample. `+∞` when it fails at the top sample.
pub fn estimate_surrogates(
    f: &EntireProductFunction,
    log_lo: f64,
    log_hi: f64,
    m_exp: f64,
    n: usize,
) -> Result<Surrogates> {
    let n = n.max(2);
    let log_r1 = hadamard_threshold(f, log_lo, log_hi, 2.0, n)?.unwrap_or(f64::INFINITY);
    let mut log_r0 = f64::INFINITY;
    for i in (0..n).rev() {
        let x = log_lo + (log_hi - log_lo) * i as f64 / (n - 1) as f64;
        if find_min_condition_rho(f, x, m_exp)?.is_some() {
            log_r0 = x;
        } else {
            break;
        }
    }
    Ok(Surrogates { log_r0, log_r1 })
}

fn preset(form: ClosedForm) -> EntireProductFunction {
    EntireProductFunction::closed_form(form).expect("closed forms are valid")
}

fn spec_of(f: &EntireProductFunction) -> FunctionFile {
    match f.closed() {
        Some(form) => FunctionFile::closed(form),
        None => FunctionFile::explicit(f.stored_zeros().to_vec()),
    }
}

fn squares() -> EntireProductFunction {
    let zeros = (1..=6)
        .map(|n| Zero {
            a: (n * n) as f64,
            p: 1,
        })
        .collect();
    EntireProductFunction::from_zeros(1.0, 0, zeros).expect("ascending zeros")
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityRow {
    pub function: FunctionFile,
    pub log_r: f64,
    pub log_lambda: f64,
    /// Position of `log λ` between `log m(r)` (0) and `log M(r)` (1).
    pub level: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub ok: bool,
}

/// `Δarg f(C_λ(r)) = 2π r T'_λ(r)` on five functions × four levels. The
/// level 0.97 arcs are short and carry the looser 5% tolerance.
pub fn lemma34_matrix() -> Result<Vec<IdentityRow>> {
    let cases: [(EntireProductFunction, f64); 5] = [
        (preset(ClosedForm::CoshSqrt), 30f64.ln()),
        (preset(ClosedForm::SinhSqrtOverSqrt), 50f64.ln()),
        (
            preset(ClosedForm::PowerLaw { alpha: 1.0, q: 2 }),
            200f64.ln(),
        ),
        (
            preset(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }),
            1200f64.ln(),
        ),
        (squares(), 10f64.ln()),
    ];
    let mut rows = Vec::with_capacity(20);
    for (f, log_r) in &cases {
        let hi = log_max_modulus(f, *log_r)?;
        let lo = log_min_modulus(f, *log_r)?;
        for level in [-0.1, 0.3, 0.7, 0.97] {
            let log_lambda = lo + level * (hi - lo);
            let (lhs, rhs) = winding_mean_identity(f, *log_r, log_lambda)?;
            let rel_err = (lhs - rhs).abs() / lhs.abs().max(1.0);
            let tol = if level > 0.9 { 0.05 } else { 0.02 };
            rows.push(IdentityRow {
                function: spec_of(f),
                log_r: *log_r,
                log_lambda,
                level,
                lhs,
                rhs,
                rel_err,
                tol,
                ok: rel_err <= tol,
            });
        }
    }
    Ok(rows)
}

fn suite_function(rng: &mut ChaCha8Rng, with_q3: bool) -> EntireProductFunction {
    let k = rng.gen_range(0..if with_q3 { 5 } else { 3 });
    match k {
        0 => preset(ClosedForm::CoshSqrt),
        1 => preset(ClosedForm::SinhSqrtOverSqrt),
        2 => preset(ClosedForm::PowerLaw { alpha: 1.0, q: 2 }),
        3 => preset(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }),
        _ => squares(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PoissonRow {
    pub function: FunctionFile,
    pub log_r: f64,
    pub log_r0: f64,
    pub log_lambda: f64,
    pub t_r: f64,
    pub b_r: f64,
    pub factor: f64,
    pub t_r0: f64,
    pub holds: bool,
}

/// `T(r) <= B(r) <= (r0+r)/(r0-r) T(r0)` on `n` random `(f, r, r0, λ)`.
pub fn poisson_suite(seed: u64, n: usize) -> Result<Vec<PoissonRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let f = suite_function(&mut rng, true);
        let log_r0 = rng.gen_range(0.5..8.0);
        let log_r = log_r0 - rng.gen_range(0.05..2.0);
        let top = log_max_modulus(&f, log_r0)?;
        let log_lambda = rng.gen_range(-1.0..top + 0.5);
        let PoissonCheck {
            t_r,
            b_r,
            factor,
            t_r0,
            holds,
        } = match poisson_bound_check(&f, log_r, log_r0, log_lambda) {
            Err(Error::AtZero { .. }) => continue,
            other => other?,
        };
        rows.push(PoissonRow {
            function: spec_of(&f),
            log_r,
            log_r0,
            log_lambda,
            t_r,
            b_r,
            factor,
            t_r0,
            holds,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct MillouxRow {
    pub function: FunctionFile,
    pub log_t: f64,
    pub log_r: f64,
    pub log_r0: f64,
    pub log_m_level: f64,
    pub b_r: f64,
    pub b_r0: f64,
    pub factor: f64,
    pub holds: bool,
}

/// `B(r) <= (4/π) B(r0) arctan √(r/r0)` for `u_M`, `M = M(t)`, `t <= r`, on
/// `n` random cases from the order-1/2 presets, whose circle minima stay
/// below 1 so the hypothesis holds for every `t`.
pub fn milloux_suite(seed: u64, n: usize) -> Result<Vec<MillouxRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4d53);
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let f = suite_function(&mut rng, false);
        let log_t = rng.gen_range(0.5..8.0);
        let log_r = log_t + rng.gen_range(0.0..4.0);
        let log_r0 = log_r + rng.gen_range(0.05..3.0);
        let log_m_level = log_max_modulus(&f, log_t)?;
        let MillouxCheck {
            b_r,
            b_r0,
            factor,
            holds,
        } = milloux_schmidt_check(&f, log_r, log_r0, log_m_level)?;
        rows.push(MillouxRow {
            function: spec_of(&f),
            log_t,
            log_r,
            log_r0,
            log_m_level,
            b_r,
            b_r0,
            factor,
            holds,
        });
    }
    Ok(rows)
}

/// The level curve `|f| = M(t)^frac` from `C(t)` out past `C(t^{1+a})`.
pub fn theorem1_curve(f: &EntireProductFunction, log_t: f64, a: f64, frac: f64) -> Result<Curve> {
    let log_m = log_max_modulus(f, log_t)?;
    level_curve(f, log_t, (1.0 + a) * log_t + 0.5, frac * log_m, 256)
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Row {
    pub function: FunctionFile,
    pub frac: f64,
    pub certificate: WindingCertificate,
}

/// Level curves of the order-1/2 presets at `t = 10⁹, a = 1` and
/// `t = e^30, a = 1.5`.
pub fn theorem1_instances() -> Result<Vec<Theorem1Row>> {
    let forms = [
        ClosedForm::CoshSqrt,
        ClosedForm::SinhSqrtOverSqrt,
        ClosedForm::PowerLaw { alpha: 1.0, q: 2 },
    ];
    let mut rows = Vec::new();
    for form in forms {
        let f = preset(form);
        for (log_t, a, frac) in [
            (1e9f64.ln(), 1.0, 0.25),
            (1e9f64.ln(), 1.0, 0.75),
            (30.0, 1.5, 0.5),
        ] {
            let curve = theorem1_curve(&f, log_t, a, frac)?;
            let certificate = theorem1_verify(&f, &curve, log_t, a, 0.0)?;
            rows.push(Theorem1Row {
                function: FunctionFile::closed(form),
                frac,
                certificate,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Row {
    pub function: FunctionFile,
    pub surrogates: Surrogates,
    pub curve_points: usize,
    pub result: TrichotomyResult,
}

/// Random polylines in the closed upper half plane from inside `C(s)` to
/// outside `C(s^l)` for the `q = 3` power law, with `(s, l, b)` drawn so
/// that the conditions of the trichotomy hold.
pub fn theorem2_suite(seed: u64, n: usize) -> Result<Vec<Theorem2Row>> {
    let f = preset(ClosedForm::PowerLaw { alpha: 1.0, q: 3 });
    let m_exp = 2.0;
    let surrogates = estimate_surrogates(&f, 20.0, 26.0, m_exp, 7)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5432);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let b = rng.gen_range(0.75..1.0);
        let l = rng.gen_range(m_exp.max(1.0 + b)..2.5);
        let need = 4.0 * ((spiderweb_core::theorems::A_T_QUARTER_MIN * (l - b) / b).ln()) / b;
        let log_s = need.max(surrogates.log_r0).max(surrogates.log_r1) + rng.gen_range(0.0..3.0);
        let k = 48;
        let mut theta: f64 = rng.gen_range(0.0..PI);
        let mut points = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let x = (log_s - 0.2) + ((l - 1.0) * log_s + 0.4) * i as f64 / k as f64;
            points.push(LogComplex::new(x, theta));
            theta = (theta + rng.gen_range(-0.4..0.4)).clamp(0.0, PI);
        }
        let curve = Curve::open(points);
        let result = theorem2_classify(&f, &curve, log_s, l, b, m_exp, &surrogates)?;
        rows.push(Theorem2Row {
            function: FunctionFile::closed(ClosedForm::PowerLaw { alpha: 1.0, q: 3 }),
            surrogates,
            curve_points: curve.len(),
            result,
        });
    }
    Ok(rows)
}

/// Case-3 instances: the level curve `|f| = M(s)` of `cosh √z` from `C(s)`
/// outward, which stays inside the band. `cosh √z` has no min condition, so
/// `R_0` is supplied by hand (recorded as `log_r0 = 0`).
pub fn theorem2_case3_instances() -> Result<Vec<Theorem2Row>> {
    let f = preset(ClosedForm::CoshSqrt);
    let surrogates = Surrogates {
        log_r0: 0.0,
        log_r1: hadamard_threshold(&f, 1.0, 27.0, 2.0, 27)?.unwrap_or(f64::INFINITY),
    };
    let mut rows = Vec::new();
    // at much larger s^l the level curve hugs the negative axis closer than
    // f64 resolves θ there
    for (log_s, l) in [
        (1e10f64.ln(), 2.5),
        (1e12f64.ln(), 2.5),
        (1e12f64.ln(), 3.0),
        (1e14f64.ln(), 2.5),
    ] {
        let log_m = log_max_modulus(&f, log_s)?;
        let curve = level_curve(&f, log_s, l * log_s, log_m, 600)?;
        let result = theorem2_classify(&f, &curve, log_s, l, 1.0, 2.0, &surrogates)?;
        rows.push(Theorem2Row {
            function: FunctionFile::closed(ClosedForm::CoshSqrt),
            surrogates,
            curve_points: curve.len(),
            result,
        });
    }
    Ok(rows)
}
