//! The function model `f(z) = c z^p0 ∏ (1 + z/a_n)^p_n` and its
//! branch-consistent log-domain evaluation.
//!
//! Every evaluation returns the branch
//! `g(z) = log|c| + iπ[c<0] + p0 Log z + Σ p_n Log(1 + z/a_n)` with principal
//! logarithms. On the plane slit along `(-∞, 0]` each factor avoids the cut,
//! so `g` is a genuine branch of `log f` there; points on the negative axis
//! are read as limits from the upper half plane.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::{validate_zeros, Zero, ZeroFamily};
use crate::logpolar::{reduce_arg, LogComplex};
use crate::special::{hurwitz_zeta, ln_gamma, log_cosh_sqrt, log_sinh_sqrt_over_sqrt};

/// Largest truncation that will be materialized.
pub const MAX_STORED_ZEROS: u64 = 4_000_000;

/// Largest `log |x|` fed to the log-gamma evaluator of power-law products.
const ANALYTIC_LOG_ROOT_LIMIT: f64 = 600.0;

/// How the neglected zeros of a truncation are accounted for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TailMode {
    /// The neglected factors contribute `Σ_{j<=K} (-1)^{j+1} z^j S_j / j`
    /// with `S_j = Σ_{n>N} p_n a_n^{-j}`; while `|z| <= a_{N+1}/2` the
    /// remaining error is at most `2|z|^{K+1} S_{K+1}/(K+1)`.
    Compensated,
    /// Neglected factors are dropped; the error is at most
    /// `|z| Σ_{n>N} p_n/a_n` from `log(1+x) <= x`.
    Plain,
}

/// Number of power sums `K` in the compensated tail.
pub const COMPENSATION_ORDER: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TailModel {
    pub mode: TailMode,
    pub kept: u64,
    /// `S_1 ..= S_K` over the neglected zeros (all zero in plain mode).
    pub sums: [f64; COMPENSATION_ORDER],
    /// `S_{K+1}` (compensated) or `S_1` (plain).
    pub bound_coeff: f64,
    pub max_log_radius: f64,
}

impl TailModel {
    /// Bound on the neglected part of `log f` for `|z| = e^log_r`.
    pub fn bound(&self, log_r: f64) -> f64 {
        if log_r > self.max_log_radius {
            return f64::INFINITY;
        }
        tail_bound(self.mode, log_r, self.bound_coeff)
    }
}

fn tail_bound(mode: TailMode, log_r: f64, coeff: f64) -> f64 {
    if coeff == 0.0 {
        return 0.0;
    }
    match mode {
        TailMode::Compensated => {
            let k1 = (COMPENSATION_ORDER + 1) as f64;
            2.0 / k1 * libm::exp(k1 * log_r + libm::log(coeff))
        }
        TailMode::Plain => libm::exp(log_r + libm::log(coeff)),
    }
}

/// Products evaluated from a closed form instead of a finite zero list.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ClosedForm {
    CoshSqrt,
    SinhSqrtOverSqrt,
    /// `∏ (1 + z/(alpha n^q))` for integer `q >= 2`, through
    /// `1 / ∏_k Γ(1 - x_k)` with `x_k^q = -z/alpha`.
    PowerLaw {
        alpha: f64,
        q: u32,
    },
}

impl ClosedForm {
    fn family(self) -> ZeroFamily {
        match self {
            ClosedForm::CoshSqrt => ZeroFamily::CoshSqrt,
            ClosedForm::SinhSqrtOverSqrt => ZeroFamily::SinhSqrtOverSqrt,
            ClosedForm::PowerLaw { alpha, q } => ZeroFamily::PowerLaw {
                alpha,
                q: f64::from(q),
            },
        }
    }

    fn max_log_radius(self) -> f64 {
        match self {
            ClosedForm::CoshSqrt | ClosedForm::SinhSqrtOverSqrt => 2.0 * ANALYTIC_LOG_ROOT_LIMIT,
            ClosedForm::PowerLaw { alpha, q } => {
                libm::log(alpha) + f64::from(q) * ANALYTIC_LOG_ROOT_LIMIT
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Body {
    Product {
        zeros: Vec<Zero>,
        log_a: Vec<f64>,
        tail: Option<TailModel>,
    },
    Closed(ClosedForm),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntireProductFunction {
    c: f64,
    p0: u32,
    body: Body,
}

impl EntireProductFunction {
    /// A finite product with no tail. Multiplicity-zero entries are dropped.
    pub fn from_zeros(c: f64, p0: u32, zeros: Vec<Zero>) -> Result<Self> {
        validate_zeros(&zeros)?;
        let zeros: Vec<Zero> = zeros.into_iter().filter(|z| z.p > 0).collect();
        Self::build(
            c,
            p0,
            Body::Product {
                log_a: zeros.iter().map(|z| libm::log(z.a)).collect(),
                zeros,
                tail: None,
            },
        )
    }

    /// Closed-form evaluation of a preset or integer power-law family.
    pub fn closed_form(form: ClosedForm) -> Result<Self> {
        if let ClosedForm::PowerLaw { alpha, q } = form {
            if !(alpha > 0.0 && alpha.is_finite()) || q < 2 {
                return Err(Error::InvalidFunction(
                    "closed-form power law needs alpha > 0 and integer q >= 2".into(),
                ));
            }
        }
        Self::build(1.0, 0, Body::Closed(form))
    }

    /// Certified truncation with the compensated tail model.
    pub fn truncate(family: &ZeroFamily, max_log_radius: f64, tol: f64) -> Result<Self> {
        Self::truncate_with(family, max_log_radius, tol, TailMode::Compensated)
    }

    pub fn truncate_with(
        family: &ZeroFamily,
        max_log_radius: f64,
        tol: f64,
        mode: TailMode,
    ) -> Result<Self> {
        family.validate()?;
        if let ZeroFamily::Explicit(zeros) = family {
            return Self::from_zeros(1.0, 0, zeros.clone());
        }
        let kept = required_zero_count(family, max_log_radius, tol, mode)?;
        if kept > MAX_STORED_ZEROS {
            return Err(Error::TooManyZeros {
                required: kept as f64,
            });
        }
        let mut sums = [0.0; COMPENSATION_ORDER];
        let bound_coeff = match mode {
            TailMode::Compensated => {
                for (j, slot) in sums.iter_mut().enumerate() {
                    *slot = family.power_tail(kept, j as u32 + 1)?;
                }
                family.power_tail(kept, COMPENSATION_ORDER as u32 + 1)?
            }
            TailMode::Plain => family.power_tail(kept, 1)?,
        };
        let zeros: Vec<Zero> = (1..=kept).filter_map(|n| family.zero(n)).collect();
        Self::build(
            1.0,
            0,
            Body::Product {
                log_a: zeros.iter().map(|z| libm::log(z.a)).collect(),
                zeros,
                tail: Some(TailModel {
                    mode,
                    kept,
                    sums,
                    bound_coeff,
                    max_log_radius,
                }),
            },
        )
    }

    /// Replaces the constant `c` and the order `p0` of the zero at the origin.
    pub fn with_prefactor(mut self, c: f64, p0: u32) -> Result<Self> {
        self.c = c;
        self.p0 = p0;
        Self::build(self.c, self.p0, self.body)
    }

    fn build(c: f64, p0: u32, body: Body) -> Result<Self> {
        if c == 0.0 || !c.is_finite() {
            return Err(Error::InvalidFunction(
                "c must be nonzero and finite".into(),
            ));
        }
        if let Body::Product { zeros, .. } = &body {
            if zeros.is_empty() && p0 == 0 {
                return Err(Error::InvalidFunction(
                    "constant function: no zeros and p0 = 0".into(),
                ));
            }
        }
        Ok(EntireProductFunction { c, p0, body })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn p0(&self) -> u32 {
        self.p0
    }

    pub fn tail_model(&self) -> Option<&TailModel> {
        match &self.body {
            Body::Product { tail, .. } => tail.as_ref(),
            Body::Closed(_) => None,
        }
    }

    pub fn closed(&self) -> Option<ClosedForm> {
        match self.body {
            Body::Closed(form) => Some(form),
            _ => None,
        }
    }

    /// Stored zeros of a finite product; empty for closed forms.
    pub fn stored_zeros(&self) -> &[Zero] {
        match &self.body {
            Body::Product { zeros, .. } => zeros,
            Body::Closed(_) => &[],
        }
    }

    /// Largest log-radius at which evaluation is certified.
    pub fn max_log_radius(&self) -> f64 {
        match &self.body {
            Body::Product { tail: Some(t), .. } => t.max_log_radius,
            Body::Product { tail: None, .. } => f64::INFINITY,
            Body::Closed(form) => form.max_log_radius(),
        }
    }

    /// Bound on `|log f_true - log f_model|` on the circle `|z| = e^log_r`.
    pub fn tail_bound(&self, log_r: f64) -> f64 {
        match &self.body {
            Body::Product { tail: Some(t), .. } => t.bound(log_r),
            Body::Product { tail: None, .. } => 0.0,
            Body::Closed(form) => {
                if log_r > form.max_log_radius() {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
        }
    }

    /// `log a_n` for 1-based `n`.
    pub fn log_zero(&self, n: u64) -> Option<f64> {
        match &self.body {
            Body::Product { log_a, .. } => log_a.get((n as usize).checked_sub(1)?).copied(),
            Body::Closed(form) => {
                if n == 0 {
                    return None;
                }
                // same rounding as log(a_n) of the generated family
                let a = form.family().zero(n)?.a;
                if a.is_finite() {
                    return Some(libm::log(a));
                }
                let nf = n as f64;
                Some(match form {
                    ClosedForm::CoshSqrt => 2.0 * libm::log((nf - 0.5) * PI),
                    ClosedForm::SinhSqrtOverSqrt => 2.0 * libm::log(nf * PI),
                    ClosedForm::PowerLaw { alpha, q } => {
                        libm::log(*alpha) + f64::from(*q) * libm::log(nf)
                    }
                })
            }
        }
    }

    fn multiplicity(&self, n: u64) -> u32 {
        match &self.body {
            Body::Product { zeros, .. } => zeros[(n - 1) as usize].p,
            Body::Closed(_) => 1,
        }
    }

    /// Number of indices `n` with `a_n < e^log_r` (as `f64`; closed forms
    /// can have more zeros than fit in a `u64`).
    pub fn zero_index_below(&self, log_r: f64) -> f64 {
        match &self.body {
            Body::Product { log_a, .. } => log_a.partition_point(|&la| la < log_r) as f64,
            Body::Closed(form) => {
                // a_n < r  <=>  n < x, with x from inverting the zero formula
                let x = match form {
                    ClosedForm::CoshSqrt => libm::exp(0.5 * log_r) / PI + 0.5,
                    ClosedForm::SinhSqrtOverSqrt => libm::exp(0.5 * log_r) / PI,
                    ClosedForm::PowerLaw { alpha, q } => {
                        libm::exp((log_r - libm::log(*alpha)) / f64::from(*q))
                    }
                };
                if x <= 1.0 {
                    return 0.0;
                }
                let mut n = libm::ceil(x) - 1.0;
                // guard against rounding in the inversion
                if n >= 1.0 && n < 1e15 {
                    while n >= 1.0 && self.log_zero(n as u64).is_some_and(|la| la >= log_r) {
                        n -= 1.0;
                    }
                    while self.log_zero(n as u64 + 1).is_some_and(|la| la < log_r) {
                        n += 1.0;
                    }
                }
                n
            }
        }
    }

    /// `p0 + Σ_{a_n < r} p_n`: the number of zeros inside `|z| < r`.
    pub fn zeros_inside(&self, log_r: f64) -> f64 {
        let base = f64::from(self.p0);
        match &self.body {
            Body::Product { zeros, log_a, .. } => {
                let k = log_a.partition_point(|&la| la < log_r);
                base + zeros[..k].iter().map(|z| f64::from(z.p)).sum::<f64>()
            }
            Body::Closed(_) => base + self.zero_index_below(log_r),
        }
    }

    /// Log-positions of zeros in `(log_lo, log_hi)`, largest first, at most
    /// `limit` of them.
    pub fn log_zeros_between(&self, log_lo: f64, log_hi: f64, limit: usize) -> Vec<f64> {
        let lo = self.zero_index_below(log_lo) + 1.0;
        let mut hi = self.zero_index_below(log_hi);
        let mut out = Vec::new();
        if hi > 1e15 {
            return out;
        }
        while hi >= lo && out.len() < limit {
            if let Some(la) = self.log_zero(hi as u64) {
                if la > log_lo && la < log_hi {
                    out.push(la);
                }
            }
            hi -= 1.0;
        }
        out
    }

    /// Whether `e^log_r` is exactly one of the zeros.
    pub fn is_zero_radius(&self, log_r: f64) -> bool {
        let n = self.zero_index_below(log_r) + 1.0;
        if n > 1e15 {
            return false;
        }
        self.log_zero(n as u64).is_some_and(|la| la == log_r) && self.multiplicity(n as u64) > 0
    }

    /// Asymptotic law `log M(r) ~ K r^rho` as `(ln K, rho)`, for closed forms.
    pub fn growth_law(&self) -> Option<(f64, f64)> {
        match self.closed()? {
            ClosedForm::CoshSqrt | ClosedForm::SinhSqrtOverSqrt => Some((0.0, 0.5)),
            ClosedForm::PowerLaw { alpha, q } => {
                let qf = f64::from(q);
                Some((
                    libm::log(PI / libm::sin(PI / qf)) - libm::log(alpha) / qf,
                    1.0 / qf,
                ))
            }
        }
    }

    /// `log f(z)` on the fixed principal-factor branch.
    pub fn eval_log(&self, z: LogComplex) -> Result<LogComplex> {
        let z = z.principal();
        let mut acc = Accumulator::default();
        acc.add(libm::log(self.c.abs()), if self.c < 0.0 { PI } else { 0.0 });
        if z.is_zero() {
            if self.p0 > 0 {
                return Err(Error::ZeroFactor);
            }
            return Ok(acc.value());
        }
        if self.p0 > 0 {
            let p = f64::from(self.p0);
            acc.add(p * z.log_mod, p * z.arg);
        }
        match &self.body {
            Body::Product { zeros, log_a, tail } => {
                for (zero, la) in zeros.iter().zip(log_a) {
                    let w = LogComplex::new(z.log_mod - la, z.arg).one_plus()?;
                    let p = f64::from(zero.p);
                    acc.add(p * w.log_mod, p * w.arg);
                }
                if let Some(t) = tail {
                    for (j, &sj) in t.sums.iter().enumerate() {
                        if sj == 0.0 {
                            continue;
                        }
                        let k = j as u32 + 1;
                        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                        let term = z.pow_int(k).scale_log(libm::log(sj / f64::from(k)));
                        let (x, y) = term.to_cartesian();
                        acc.add(sign * x, sign * y);
                    }
                }
            }
            Body::Closed(form) => {
                if z.log_mod > form.max_log_radius() {
                    return Err(Error::OutOfValidity {
                        log_r: z.log_mod,
                        max_log_radius: form.max_log_radius(),
                    });
                }
                if z.arg == PI && self.is_zero_radius(z.log_mod) {
                    return Err(Error::ZeroFactor);
                }
                let g = match form {
                    ClosedForm::CoshSqrt => log_cosh_sqrt(z)?,
                    ClosedForm::SinhSqrtOverSqrt => log_sinh_sqrt_over_sqrt(z)?,
                    // ∏(1 + z/(α n²)) = sinh(π√(z/α))/(π√(z/α)); the Γ route
                    // cancels terms of size |z|^{1/2} log|z| near the negative axis
                    ClosedForm::PowerLaw { alpha, q: 2 } => log_sinh_sqrt_over_sqrt(
                        z.scale_log(2.0 * libm::log(PI) - libm::log(*alpha)),
                    )?,
                    ClosedForm::PowerLaw { alpha, q } => {
                        power_law_log(z.scale_log(-libm::log(*alpha)), *q)?
                    }
                };
                // every factor is positive on the positive axis
                acc.add(g.re, if z.arg == 0.0 { 0.0 } else { g.im });
            }
        }
        Ok(acc.value())
    }

    /// `log f` at a positive real point `e^log_r`.
    pub fn eval_log_radius(&self, log_r: f64, theta: f64) -> Result<LogComplex> {
        self.eval_log(LogComplex::new(log_r, theta))
    }

    /// Checks `f(z̄) = conj f(z)` on the evaluated branch: moduli to 1e-10
    /// and arguments to 1e-10 modulo 2π.
    pub fn conj_symmetry_check(&self, z: LogComplex) -> Result<bool> {
        let a = self.eval_log(z)?;
        let b = self.eval_log(z.conj())?;
        let scale = 1.0f64.max(a.log_mod.abs());
        Ok((a.log_mod - b.log_mod).abs() <= 1e-10 * scale
            && reduce_arg(a.arg + b.arg).abs() <= 1e-10 * 1.0f64.max(a.arg.abs()))
    }
}

/// Smallest number of kept zeros meeting `tol` on `|z| <= e^max_log_radius`.
pub fn required_zero_count(
    family: &ZeroFamily,
    max_log_radius: f64,
    tol: f64,
    mode: TailMode,
) -> Result<u64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    family.validate()?;
    if let ZeroFamily::Explicit(z) = family {
        return Ok(z.len() as u64);
    }
    let r = libm::exp(max_log_radius);
    let ok = |n: u64| -> Result<bool> {
        Ok(match mode {
            TailMode::Compensated => {
                family.zero(n + 1).is_some_and(|z| z.a >= 2.0 * r)
                    && tail_bound(
                        mode,
                        max_log_radius,
                        family.power_tail(n, COMPENSATION_ORDER as u32 + 1)?,
                    ) <= tol
            }
            TailMode::Plain => tail_bound(mode, max_log_radius, family.power_tail(n, 1)?) <= tol,
        })
    };
    if ok(0)? {
        return Ok(0);
    }
    let mut hi: u64 = 1;
    while !ok(hi)? {
        if hi >= 1 << 60 {
            return Err(Error::TailNotSummable);
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `Σ_{n≥1} Log(1 + w n^{-q})` for integer `q >= 2`.
fn power_law_log(w: LogComplex, q: u32) -> Result<Complex64> {
    let qf = f64::from(q);
    if w.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if w.log_mod <= libm::log(100.0) {
        // Direct head plus the convergent series of the tail in powers of w.
        let wm = libm::exp(w.log_mod);
        let head = libm::fmax(10.0, libm::ceil(libm::pow(4.0 * wm, 1.0 / qf))) as u64;
        let mut acc = Accumulator::default();
        for n in 1..=head {
            let t = LogComplex::new(w.log_mod - qf * libm::log(n as f64), w.arg).one_plus()?;
            acc.add(t.log_mod, t.arg);
        }
        let wc = w.to_complex();
        let mut power = wc;
        let mut series = Complex64::new(0.0, 0.0);
        let start = head as f64 + 1.0;
        for j in 1..=60u32 {
            let jf = f64::from(j);
            let term = power * (hurwitz_zeta(qf * jf, start) / jf);
            if j % 2 == 1 {
                series += term;
            } else {
                series -= term;
            }
            if term.norm() < 1e-18 * (1.0 + series.norm()) {
                break;
            }
            power *= wc;
        }
        acc.add(series.re, series.im);
        let v = acc.value();
        return Ok(Complex64::new(v.log_mod, v.arg));
    }
    let log_root = w.log_mod / qf;
    let m = libm::exp(log_root);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..q {
        let angle = reduce_arg((w.arg + PI * f64::from(2 * k + 1)) / qf);
        let (s, c) = libm::sincos(angle);
        let x = Complex64::new(m * c, m * s);
        sum -= ln_gamma(Complex64::new(1.0, 0.0) - x)?;
    }
    Ok(sum)
}

/// Neumaier-compensated sum of complex logs.
#[derive(Default, Clone, Copy)]
struct Accumulator {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl Accumulator {
    fn add(&mut self, re: f64, im: f64) {
        neumaier(&mut self.re, &mut self.re_c, re);
        neumaier(&mut self.im, &mut self.im_c, im);
    }

    fn value(&self) -> LogComplex {
        LogComplex::new(self.re + self.re_c, self.im + self.im_c)
    }
}

#[inline]
fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}
