//! Zero families: explicit lists, power laws and the two closed-form presets.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::hurwitz_zeta;

/// A zero at `-a` of multiplicity `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Zero {
    pub a: f64,
    pub p: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ZeroFamily {
    Explicit(Vec<Zero>),
    /// `a_n = alpha * n^q`, `p_n = 1`.
    PowerLaw {
        alpha: f64,
        q: f64,
    },
    /// `a_n = ((2n-1)π/2)²`; the product is `cosh √z`.
    CoshSqrt,
    /// `a_n = n²π²`; the product is `sinh √z / √z`.
    SinhSqrtOverSqrt,
}

/// `Σ_{n>N} p_n / a_n` and `Σ_{n>N} p_n / a_n²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSums {
    pub first: f64,
    pub second: f64,
}

impl ZeroFamily {
    pub fn validate(&self) -> Result<()> {
        match self {
            ZeroFamily::Explicit(zeros) => validate_zeros(zeros),
            ZeroFamily::PowerLaw { alpha, q } => {
                if !(*alpha > 0.0 && alpha.is_finite()) || !(*q > 0.0 && q.is_finite()) {
                    return Err(Error::InvalidFunction(
                        "power law needs alpha > 0, q > 0".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, ZeroFamily::Explicit(_))
    }

    /// `a_n` for 1-based `n`; `None` past the end of an explicit list.
    pub fn zero(&self, n: u64) -> Option<Zero> {
        debug_assert!(n >= 1);
        let nf = n as f64;
        match self {
            ZeroFamily::Explicit(z) => z.get((n - 1) as usize).copied(),
            ZeroFamily::PowerLaw { alpha, q } => Some(Zero {
                a: alpha * libm::pow(nf, *q),
                p: 1,
            }),
            ZeroFamily::CoshSqrt => {
                let h = (nf - 0.5) * PI;
                Some(Zero { a: h * h, p: 1 })
            }
            ZeroFamily::SinhSqrtOverSqrt => {
                let h = nf * PI;
                Some(Zero { a: h * h, p: 1 })
            }
        }
    }

    /// Tail sums beyond the first `kept` zeros.
    pub fn tail_sums(&self, kept: u64) -> Result<TailSums> {
        Ok(TailSums {
            first: self.power_tail(kept, 1)?,
            second: self.power_tail(kept, 2)?,
        })
    }

    /// `Σ_{n>kept} p_n a_n^{-j}`.
    pub fn power_tail(&self, kept: u64, j: u32) -> Result<f64> {
        let from = kept as f64 + 1.0;
        let jf = f64::from(j);
        match self {
            ZeroFamily::Explicit(z) => Ok(z
                .iter()
                .skip(kept as usize)
                .map(|zero| f64::from(zero.p) * libm::pow(zero.a, -jf))
                .sum()),
            ZeroFamily::PowerLaw { alpha, q } => {
                if *q <= 1.0 {
                    return Err(Error::TailNotSummable);
                }
                Ok(hurwitz_zeta(q * jf, from) * libm::pow(*alpha, -jf))
            }
            ZeroFamily::CoshSqrt => {
                Ok(hurwitz_zeta(2.0 * jf, from - 0.5) * libm::pow(PI, -2.0 * jf))
            }
            ZeroFamily::SinhSqrtOverSqrt => {
                Ok(hurwitz_zeta(2.0 * jf, from) * libm::pow(PI, -2.0 * jf))
            }
        }
    }
}

/// Checks positivity and strict ordering. Multiplicity-zero entries are
/// allowed here and dropped when a function is built.
pub(crate) fn validate_zeros(zeros: &[Zero]) -> Result<()> {
    let mut prev = 0.0;
    for (i, z) in zeros.iter().enumerate() {
        if !(z.a > 0.0 && z.a.is_finite()) {
            return Err(Error::InvalidFunction(alloc::format!(
                "zero {i}: a = {} must be positive and finite",
                z.a
            )));
        }
        if i > 0 && z.a <= prev {
            return Err(Error::InvalidFunction(alloc::format!(
                "zeros not strictly increasing at index {i} ({} after {prev})",
                z.a
            )));
        }
        prev = z.a;
    }
    Ok(())
}
