//! Special functions needed by the function model: Hurwitz zeta for tail
//! sums and a principal-branch complex log-gamma for closed-form power-law
//! products.

use core::f64::consts::{LN_2, PI, TAU};

use num_complex::Complex64;

use crate::logpolar::{LogComplex, ZeroFactor};

/// `B_{2j} / (2j)!` for j = 1..=8.
const BERNOULLI_OVER_FACT: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
];

/// `B_{2j} / (2j (2j-1))` for Stirling's series, j = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Hurwitz zeta `Σ_{k≥0} (a+k)^{-s}` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    debug_assert!(s > 1.0 && a > 0.0);
    let shift = if a < 12.0 {
        libm::ceil(12.0 - a) as usize
    } else {
        0
    };
    let mut head = 0.0;
    for k in 0..shift {
        head += libm::pow(a + k as f64, -s);
    }
    let b = a + shift as f64;
    let mut tail = libm::pow(b, 1.0 - s) / (s - 1.0) + 0.5 * libm::pow(b, -s);
    // rising factorial s(s+1)...(s+2j-2) times b^{-s-2j+1}
    let mut rising = s;
    let mut bpow = libm::pow(b, -s - 1.0);
    let inv_b2 = 1.0 / (b * b);
    for (j, coeff) in BERNOULLI_OVER_FACT.iter().enumerate() {
        let term = coeff * rising * bpow;
        tail += term;
        if term.abs() < 1e-18 * tail.abs() {
            break;
        }
        let m = 2.0 * (j as f64 + 1.0);
        rising *= (s + m - 1.0) * (s + m);
        bpow *= inv_b2;
    }
    head + tail
}

/// Principal branch of `log Γ(z)`, continuous on `C \ (-∞, 0]`.
///
/// Points on the cut are read as limits from the upper half plane. Poles
/// (non-positive integers) report [`ZeroFactor`] since they are zeros of
/// `1/Γ`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64, ZeroFactor> {
    if z.im < 0.0 {
        return ln_gamma(z.conj()).map(|v| v.conj());
    }
    if z.re < 0.5 {
        // Γ(z)Γ(1-z) = π / sin(πz) with the branch of log sin(πz) that is
        // continuous on the closed upper half plane:
        // log sin(πz) = -iπz + Log(1 - e^{2iπz}) - ln 2 + iπ/2.
        let nearest = libm::round(z.re);
        let frac = z.re - nearest;
        let u = Complex64::new(-TAU * z.im, TAU * frac);
        let one_minus = -expm1_complex(u);
        if one_minus.re == 0.0 && one_minus.im == 0.0 {
            return Err(ZeroFactor);
        }
        let log_sin = Complex64::new(PI * z.im, -PI * z.re) + one_minus.ln()
            - Complex64::new(LN_2, -PI / 2.0);
        let reflected = ln_gamma_right(Complex64::new(1.0, 0.0) - z);
        return Ok(Complex64::new(libm::log(PI), 0.0) - log_sin - reflected);
    }
    Ok(ln_gamma_right(z))
}

/// `log Γ(z)` for `Re z >= 0.5`.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    const CUTOFF: f64 = 15.0;
    let mut w = z;
    let mut shift_sum = Complex64::new(0.0, 0.0);
    if w.norm() < CUTOFF {
        while w.re < CUTOFF {
            shift_sum += w.ln();
            w += 1.0;
        }
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING.iter() {
        series += p * *c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * libm::log(TAU) + series - shift_sum
}

/// `e^u - 1` without cancellation near `u = 0`.
pub fn expm1_complex(u: Complex64) -> Complex64 {
    let (s, c) = libm::sincos(u.im);
    let em1 = libm::expm1(u.re);
    let half = libm::sin(0.5 * u.im);
    Complex64::new(em1 * c - 2.0 * half * half, libm::exp(u.re) * s)
}

/// Principal square root of a log-polar number with argument in `(-π, π]`.
pub fn sqrt_principal(z: LogComplex) -> Complex64 {
    let m = libm::exp(0.5 * z.log_mod);
    if z.arg == PI {
        // cos(π/2) is 6e-17 in f64, which √r would magnify
        return Complex64::new(0.0, m);
    }
    let (s, c) = libm::sincos(0.5 * z.arg);
    Complex64::new(m * c, m * s)
}

/// `Log cosh √z` on the branch that vanishes at zero, `z` principal.
pub fn log_cosh_sqrt(z: LogComplex) -> Result<Complex64, ZeroFactor> {
    if z.log_mod < 0.0 {
        // Σ z^k / (2k)!
        let zc = z.to_complex();
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..30 {
            term = term * zc / ((2 * k - 1) as f64 * (2 * k) as f64);
            sum += term;
        }
        return Ok(sum.ln());
    }
    let root = sqrt_principal(z);
    let e = LogComplex::new(-2.0 * root.re, -2.0 * root.im);
    let l = e.one_plus()?;
    Ok(Complex64::new(root.re + l.log_mod - LN_2, root.im + l.arg))
}

/// `Log(sinh √z / √z)` on the branch that vanishes at zero, `z` principal.
pub fn log_sinh_sqrt_over_sqrt(z: LogComplex) -> Result<Complex64, ZeroFactor> {
    if z.log_mod < 0.0 {
        // Σ z^k / (2k+1)!
        let zc = z.to_complex();
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..30 {
            term = term * zc / ((2 * k) as f64 * (2 * k + 1) as f64);
            sum += term;
        }
        return Ok(sum.ln());
    }
    let root = sqrt_principal(z);
    let e = LogComplex::new(-2.0 * root.re, PI - 2.0 * root.im);
    let l = e.one_plus()?;
    Ok(Complex64::new(
        root.re + l.log_mod - LN_2 - 0.5 * z.log_mod,
        root.im + l.arg - 0.5 * z.arg,
    ))
}

/// Numerically stable `log cosh x` for real `x`.
pub fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + libm::log1p(libm::exp(-2.0 * a)) - LN_2
}
