use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A complex number stored as (ln|z|, arg z).
///
/// Radial spherical functions grow like e^{sr}; this representation keeps
/// them finite far past the f64 overflow point. Zero is encoded with
/// `log_magnitude = -inf` and phase 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_magnitude: f64,
    /// In (-π, π].
    pub phase: f64,
}

/// Reduce an angle into (-π, π].
pub fn wrap_phase(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let two_pi = 2.0 * PI;
    let mut t = theta.rem_euclid(two_pi);
    if t > PI {
        t -= two_pi;
    }
    t
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        log_magnitude: 0.0,
        phase: 0.0,
    };
    pub const ZERO: LogComplex = LogComplex {
        log_magnitude: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_magnitude: f64, phase: f64) -> Self {
        if log_magnitude == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self {
            log_magnitude,
            phase: wrap_phase(phase),
        }
    }

    /// exp(w) for complex w.
    pub fn exp(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z.re == 0.0 && z.im == 0.0 {
            return Self::ZERO;
        }
        Self::new(z.norm().ln(), z.arg())
    }

    pub fn to_complex(self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    pub fn is_zero(self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn abs(self) -> f64 {
        self.log_magnitude.exp()
    }

    /// ln(z) on the principal branch.
    pub fn ln(self) -> Complex64 {
        Complex64::new(self.log_magnitude, self.phase)
    }

    /// self / other.
    pub fn ratio(self, other: LogComplex) -> LogComplex {
        LogComplex::new(
            self.log_magnitude - other.log_magnitude,
            self.phase - other.phase,
        )
    }

    /// |self/other − 1| evaluated without leaving log space.
    pub fn relative_distance(self, other: LogComplex) -> f64 {
        if self.is_zero() && other.is_zero() {
            return 0.0;
        }
        let w = Complex64::new(
            self.log_magnitude - other.log_magnitude,
            wrap_phase(self.phase - other.phase),
        );
        // expm1 for complex w: e^{a}(cos b + i sin b) - 1
        let re = w.re.exp_m1() * w.im.cos() - 2.0 * (0.5 * w.im).sin().powi(2);
        let im = w.re.exp() * w.im.sin();
        re.hypot(im)
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;

    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(
            self.log_magnitude + rhs.log_magnitude,
            self.phase + rhs.phase,
        )
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one() {
        assert!(LogComplex::from_complex(Complex64::new(0.0, 0.0)).is_zero());
        assert_eq!(
            LogComplex::from_complex(Complex64::new(1.0, 0.0)),
            LogComplex::ONE
        );
        assert_eq!(LogComplex::ZERO * LogComplex::ONE, LogComplex::ZERO);
    }

    #[test]
    fn phase_wraps_into_half_open_interval() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(7.0) - (7.0 - 2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn survives_overflow() {
        let big = LogComplex::exp(Complex64::new(1000.0, 3.0));
        let sq = big * big;
        assert_eq!(sq.log_magnitude, 2000.0);
        assert!(big.to_complex().re.is_infinite());
    }

    #[test]
    fn relative_distance_small_values() {
        let a = LogComplex::new(5.0, 0.1);
        let b = LogComplex::new(5.0 + 1e-12, 0.1);
        let d = a.relative_distance(b);
        assert!((d - 1e-12).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn roundtrip_is_exact_to_rounding(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            prop_assume!(re != 0.0 || im != 0.0);
            let z = Complex64::new(re, im);
            let back = LogComplex::from_complex(z).to_complex();
            prop_assert!((back - z).norm() <= 4.0 * f64::EPSILON * z.norm());
        }

        #[test]
        fn multiplication_adds_fields(a in -300f64..300.0, p in -3f64..3.0, b in -300f64..300.0, q in -3f64..3.0) {
            let x = LogComplex::new(a, p);
            let y = LogComplex::new(b, q);
            let prod = x * y;
            prop_assert!((prod.log_magnitude - (a + b)).abs() < 1e-12);
            prop_assert!((prod.phase - wrap_phase(p + q)).abs() < 1e-12);
        }
    }
}
