//! Complex numbers stored as (natural-log modulus, unreduced argument).
//!
//! Magnitudes like `exp(1e6)` are routine for iterated entire functions, so
//! nothing in this crate ever holds a complex value in Cartesian form unless
//! its modulus is known to be moderate.

use core::f64::consts::{PI, TAU};
use core::fmt;

use num_complex::Complex64;

/// Below this log-modulus `1 + w` is computed from its Taylor series.
pub const SMALL_REGIME: f64 = -40.0;
/// Above this log-modulus `1 + w` is computed as `w * (1 + 1/w)`.
pub const LARGE_REGIME: f64 = 40.0;

/// `1 + w` cancelled to exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroFactor;

impl fmt::Display for ZeroFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("factor vanished: point lies on a zero of the function")
    }
}

impl core::error::Error for ZeroFactor {}

/// A complex number `exp(log_mod + i*arg)`.
///
/// `log_mod == -inf` is the distinguished encoding of zero. `arg` is not
/// reduced modulo 2π; continuation code relies on the unwrapped value.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogComplex {
    pub log_mod: f64,
    pub arg: f64,
}

/// Reduces an angle to `(-π, π]`.
pub fn reduce_arg(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let mut r = libm::remainder(theta, TAU);
    if r <= -PI {
        r += TAU;
    }
    r
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_mod: f64::NEG_INFINITY,
        arg: 0.0,
    };
    pub const ONE: LogComplex = LogComplex {
        log_mod: 0.0,
        arg: 0.0,
    };

    #[inline]
    pub const fn new(log_mod: f64, arg: f64) -> Self {
        LogComplex { log_mod, arg }
    }

    /// The positive real number `exp(log_r)`.
    #[inline]
    pub const fn from_log_radius(log_r: f64) -> Self {
        LogComplex {
            log_mod: log_r,
            arg: 0.0,
        }
    }

    pub fn from_cartesian(x: f64, y: f64) -> Self {
        if x == 0.0 && y == 0.0 {
            return Self::ZERO;
        }
        let mut arg = libm::atan2(y, x);
        if arg == -PI {
            arg = PI;
        }
        LogComplex {
            log_mod: libm::log(libm::hypot(x, y)),
            arg,
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::from_cartesian(z.re, z.im)
    }

    /// Overflows to infinity for `log_mod > ~709`.
    pub fn to_cartesian(self) -> (f64, f64) {
        if self.is_zero() {
            return (0.0, 0.0);
        }
        let m = libm::exp(self.log_mod);
        (m * libm::cos(self.arg), m * libm::sin(self.arg))
    }

    pub fn to_complex(self) -> Complex64 {
        let (x, y) = self.to_cartesian();
        Complex64::new(x, y)
    }

    /// Reads `(log_mod, arg)` as the complex logarithm `log_mod + i*arg`.
    pub fn as_log(self) -> Complex64 {
        Complex64::new(self.log_mod, self.arg)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.log_mod == f64::NEG_INFINITY
    }

    pub fn mul(self, other: LogComplex) -> LogComplex {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        LogComplex {
            log_mod: self.log_mod + other.log_mod,
            arg: self.arg + other.arg,
        }
    }

    /// Division by zero yields an infinite modulus.
    pub fn div(self, other: LogComplex) -> LogComplex {
        if self.is_zero() {
            return Self::ZERO;
        }
        LogComplex {
            log_mod: self.log_mod - other.log_mod,
            arg: self.arg - other.arg,
        }
    }

    pub fn recip(self) -> LogComplex {
        LogComplex {
            log_mod: -self.log_mod,
            arg: -self.arg,
        }
    }

    pub fn pow_int(self, k: u32) -> LogComplex {
        if k == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        let k = f64::from(k);
        LogComplex {
            log_mod: k * self.log_mod,
            arg: k * self.arg,
        }
    }

    /// Real power; the argument is scaled without reduction.
    pub fn powf(self, p: f64) -> LogComplex {
        if self.is_zero() {
            return if p == 0.0 { Self::ONE } else { Self::ZERO };
        }
        LogComplex {
            log_mod: p * self.log_mod,
            arg: p * self.arg,
        }
    }

    pub fn conj(self) -> LogComplex {
        LogComplex {
            log_mod: self.log_mod,
            arg: -self.arg,
        }
    }

    pub fn scale_log(self, log_factor: f64) -> LogComplex {
        if self.is_zero() {
            return self;
        }
        LogComplex {
            log_mod: self.log_mod + log_factor,
            arg: self.arg,
        }
    }

    /// Same point with the argument reduced to `(-π, π]`.
    pub fn principal(self) -> LogComplex {
        LogComplex {
            log_mod: self.log_mod,
            arg: reduce_arg(self.arg),
        }
    }

    /// `1 + self` with full relative accuracy at every magnitude.
    ///
    /// The result's argument lies in `(-π, π]`.
    pub fn one_plus(self) -> Result<LogComplex, ZeroFactor> {
        if self.is_zero() {
            return Ok(Self::ONE);
        }
        if self.log_mod <= SMALL_REGIME {
            return Ok(one_plus_small(self));
        }
        if self.log_mod >= LARGE_REGIME {
            let inv = one_plus_small(self.recip());
            return Ok(LogComplex {
                log_mod: self.log_mod + inv.log_mod,
                arg: reduce_arg(self.arg + inv.arg),
            });
        }
        let m = libm::exp(self.log_mod);
        let th = reduce_arg(self.arg);
        // keep the negative real axis exact so that w = -1 is detected
        let (x, y) = if th == PI {
            (-m, 0.0)
        } else {
            let (s, c) = libm::sincos(th);
            (m * c, m * s)
        };
        let re = 1.0 + x;
        if re == 0.0 && y == 0.0 {
            return Err(ZeroFactor);
        }
        let log_mod = if m < 0.5 {
            // log|1+w| = ½ log1p(2x + |w|²) keeps precision for small w
            0.5 * libm::log1p(2.0 * x + m * m)
        } else {
            libm::log(libm::hypot(re, y))
        };
        let mut arg = libm::atan2(y, re);
        if arg == -PI {
            arg = PI;
        }
        Ok(LogComplex { log_mod, arg })
    }
}

/// `Log(1 + w)` for `|w| <= e^-40` from `w - w²/2`.
fn one_plus_small(w: LogComplex) -> LogComplex {
    if w.is_zero() {
        return LogComplex::ONE;
    }
    let m = libm::exp(w.log_mod);
    let (s, c) = libm::sincos(w.arg);
    let (x, y) = (m * c, m * s);
    // w²/2
    let (x2, y2) = (0.5 * (x * x - y * y), x * y);
    LogComplex {
        log_mod: x - x2,
        arg: y - y2,
    }
}

impl fmt::Display for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            f.write_str("0")
        } else {
            write!(f, "exp({} + {}i)", self.log_mod, self.arg)
        }
    }
}
