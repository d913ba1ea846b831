//! Positive reals represented as iterated exponentials `exp^height(top)`.
//!
//! Iterating the maximum modulus drives log-radii past `f64::MAX` within two
//! or three steps. Radii along the stretching cascade are therefore carried
//! as `Tower` values of the log-radius: `height == 0` is a plain `f64`, and
//! each extra level is one more exponential.

use core::cmp::Ordering;
use core::fmt;

/// Values at or above this are lifted one level.
const CEILING: f64 = 1e300;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tower {
    pub height: u32,
    pub top: f64,
}

impl Tower {
    pub fn from_f64(x: f64) -> Tower {
        Tower { height: 0, top: x }.normalized()
    }

    /// `None` when the value does not fit in an `f64`.
    pub fn to_f64(self) -> Option<f64> {
        match self.height {
            0 => Some(self.top),
            1 if self.top < 709.7 => Some(libm::exp(self.top)),
            _ => None,
        }
    }

    /// `ln` of the value at height 0, `top` below otherwise.
    pub fn ln(self) -> Tower {
        if self.height == 0 {
            Tower::from_f64(libm::log(self.top))
        } else {
            Tower {
                height: self.height - 1,
                top: self.top,
            }
            .normalized()
        }
    }

    pub fn exp(self) -> Tower {
        if self.height == 0 {
            if self.top < 690.0 {
                return Tower::from_f64(libm::exp(self.top));
            }
            return Tower {
                height: 1,
                top: self.top,
            }
            .normalized();
        }
        Tower {
            height: self.height + 1,
            top: self.top,
        }
    }

    /// Multiplies by a positive scalar.
    pub fn scale(self, c: f64) -> Tower {
        debug_assert!(c > 0.0);
        match self.height {
            0 => Tower::from_f64(self.top * c),
            _ => self.ln().add_scalar(libm::log(c)).exp(),
        }
    }

    /// Adds a real scalar; the result must stay positive.
    pub fn add_scalar(self, c: f64) -> Tower {
        match self.height {
            0 => Tower::from_f64(self.top + c),
            // exp(t) + c = exp(t + log1p(c e^{-t}))
            1 => Tower {
                height: 1,
                top: self.top + libm::log1p(c * libm::exp(-self.top)),
            }
            .normalized(),
            // exp(exp(t)) with t >= 690 dwarfs any f64 scalar
            _ => self,
        }
    }

    fn normalized(mut self) -> Tower {
        while self.top >= CEILING && self.top.is_finite() {
            self.top = libm::log(self.top);
            self.height += 1;
        }
        while self.height > 0 && self.top < libm::log(CEILING) {
            self.top = libm::exp(self.top);
            self.height -= 1;
        }
        self
    }
}

impl PartialOrd for Tower {
    fn partial_cmp(&self, other: &Tower) -> Option<Ordering> {
        match self.height.cmp(&other.height) {
            Ordering::Equal => self.top.partial_cmp(&other.top),
            o => {
                // normalized values with positive tops order by height;
                // a height-0 value may be negative, still smaller
                Some(o)
            }
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.height == 0 {
            write!(f, "{}", self.top)
        } else {
            write!(f, "exp^{}({})", self.height, self.top)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_stay_plain() {
        let t = Tower::from_f64(42.0);
        assert_eq!(t.height, 0);
        assert_eq!(t.to_f64(), Some(42.0));
        assert!((t.exp().ln().to_f64().unwrap() - 42.0).abs() < 1e-12);
    }

    #[test]
    fn lifting_and_ordering() {
        let a = Tower::from_f64(5000.0).exp(); // e^5000
        assert_eq!(a.height, 1);
        assert!((a.top - 5000.0).abs() < 1e-9);
        let b = a.exp();
        assert_eq!(b.height, 2);
        assert!(b > a && a > Tower::from_f64(1e299));
        assert!(a.scale(2.0) > a);
        assert!((a.scale(2.0).top - (5000.0 + libm::log(2.0))).abs() < 1e-9);
        assert_eq!(b.add_scalar(1e10), b);
        assert!(b.scale(1.0 / 3.0) <= b);
    }

    #[test]
    fn scale_and_add_round_trip_at_height_zero() {
        let t = Tower::from_f64(3.0).scale(4.0).add_scalar(-2.0);
        assert_eq!(t.to_f64(), Some(10.0));
    }
}
