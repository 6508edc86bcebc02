//! Scalar backends: exact Gaussian rationals and IEEE complex doubles.
//!
//! Everything above this module is generic over [`Scalar`], so the same
//! construction code runs exactly (the default) or in floating point with an
//! absolute tolerance on residuals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;

/// Field operations shared by the exact and floating backends.
///
/// Arithmetic takes references because the exact backend allocates.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// `true` when equality and zero tests carry no rounding.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn imag_unit() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    /// Exact binary value of a finite float.
    fn from_f64(x: f64) -> Self;
    fn from_gaussian(re: &BigRational, im: &BigRational) -> Self {
        Self::from_rational(re).add(&Self::imag_unit().mul(&Self::from_rational(im)))
    }

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;

    fn is_zero(&self) -> bool;
    /// Exact backends ignore `tol` and test for an exact zero.
    fn is_negligible(&self, tol: f64) -> bool;
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).is_negligible(tol)
    }

    fn to_complex64(&self) -> Complex64;
    fn modulus_f64(&self) -> f64 {
        self.to_complex64().norm()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }
    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
    fn scale_int(&self, n: i64) -> Self {
        self.mul(&Self::from_int(n))
    }
}

/// A Gaussian rational `re + i·im` with arbitrary-precision components.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactScalar { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        ExactScalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn imag(im: BigRational) -> Self {
        ExactScalar {
            re: BigRational::zero(),
            im,
        }
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        ExactScalar {
            re: ratio(re.0, re.1),
            im: ratio(im.0, im.1),
        }
    }

    /// `|z|² = re² + im²`, always an exact rational.
    pub fn modulus_squared(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `p` or `p/q`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p`, `p/q` or a plain decimal such as `2.5` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let s = text.trim();
    let bad = || Error::Parse(text.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part = if int == "-" || int.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = int_part.abs() * &scale + frac_part;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(numer, scale));
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}i", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "{}{}{}i",
                    format_rational(&self.re),
                    sign,
                    format_rational(&self.im.abs())
                )
            }
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Serializes a rational as a `"p/q"` string (`serialize_with` helper).
pub fn serialize_rational<S: Serializer>(
    q: &BigRational,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(q))
}

pub fn serialize_opt_rational<S: Serializer>(
    q: &Option<BigRational>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match q {
        Some(q) => serializer.serialize_str(&format_rational(q)),
        None => serializer.serialize_none(),
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> Self {
        Scalar::add(&self, &rhs)
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: Self) -> Self {
        Scalar::sub(&self, &rhs)
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: Self) -> Self {
        Scalar::mul(&self, &rhs)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> Self {
        Scalar::neg(&self)
    }
}

impl Scalar for ExactScalar {
    const EXACT: bool = true;

    fn zero() -> Self {
        ExactScalar::default()
    }

    fn one() -> Self {
        ExactScalar::real(BigRational::one())
    }

    fn imag_unit() -> Self {
        ExactScalar::imag(BigRational::one())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar::real(ratio(num, den))
    }

    fn from_f64(x: f64) -> Self {
        ExactScalar::real(BigRational::from_float(x).expect("finite float"))
    }

    fn from_rational(q: &BigRational) -> Self {
        ExactScalar::real(q.clone())
    }

    fn from_gaussian(re: &BigRational, im: &BigRational) -> Self {
        ExactScalar::new(re.clone(), im.clone())
    }

    fn add(&self, rhs: &Self) -> Self {
        ExactScalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        ExactScalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        // Real and imaginary units are by far the most common operands.
        if self.im.is_zero() && rhs.im.is_zero() {
            return ExactScalar::real(&self.re * &rhs.re);
        }
        if self.re.is_zero() && rhs.re.is_zero() {
            return ExactScalar::real(-(&self.im * &rhs.im));
        }
        ExactScalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn neg(&self) -> Self {
        ExactScalar {
            re: -&self.re,
            im: -&self.im,
        }
    }

    fn inv(&self) -> Option<Self> {
        let d = self.modulus_squared();
        if d.is_zero() {
            return None;
        }
        Some(ExactScalar {
            re: &self.re / &d,
            im: -&self.im / &d,
        })
    }

    fn conj(&self) -> Self {
        ExactScalar {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }

    fn from_rational(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_gaussian(re: &BigRational, im: &BigRational) -> Self {
        Complex64::new(
            re.to_f64().unwrap_or(f64::NAN),
            im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        if *self == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(self.inv())
        }
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn to_complex64(&self) -> Complex64 {
        *self
    }
}

#[cfg(test)]
mod tests {
    use super::{parse_rational, ratio, ExactScalar, Scalar};
    use num_complex::Complex64;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = ExactScalar::imag_unit();
        assert_eq!(i.mul(&i), ExactScalar::from_int(-1));
    }

    #[test]
    fn inverse_of_gaussian() {
        let z = ExactScalar::from_parts((1, 2), (-3, 4));
        let w = z.inv().unwrap();
        assert_eq!(z.mul(&w), ExactScalar::one());
        assert!(ExactScalar::zero().inv().is_none());
    }

    #[test]
    fn conjugate_product_is_modulus_squared() {
        let z = ExactScalar::from_parts((5, 3), (7, 2));
        assert_eq!(z.mul(&z.conj()), ExactScalar::real(z.modulus_squared()));
    }

    #[test]
    fn display_forms() {
        assert_eq!(ExactScalar::from_parts((1, 2), (0, 1)).to_string(), "1/2");
        assert_eq!(ExactScalar::from_parts((0, 1), (-3, 1)).to_string(), "-3i");
        assert_eq!(
            ExactScalar::from_parts((2, 1), (-1, 2)).to_string(),
            "2-1/2i"
        );
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("5/2").unwrap(), q(5, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), q(-7, 1));
        assert_eq!(parse_rational("2.25").unwrap(), q(9, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), q(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn float_negligible_uses_tolerance() {
        let z = Complex64::new(1e-12, 0.0);
        assert!(z.is_negligible(1e-10));
        assert!(!z.is_negligible(1e-13));
    }

    proptest::proptest! {
        #[test]
        fn field_axioms_hold_exactly(
            a in (-20i64..20, 1i64..9, -20i64..20, 1i64..9),
            b in (-20i64..20, 1i64..9, -20i64..20, 1i64..9),
            c in (-20i64..20, 1i64..9, -20i64..20, 1i64..9),
        ) {
            let x = ExactScalar::from_parts((a.0, a.1), (a.2, a.3));
            let y = ExactScalar::from_parts((b.0, b.1), (b.2, b.3));
            let z = ExactScalar::from_parts((c.0, c.1), (c.2, c.3));
            proptest::prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            proptest::prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            proptest::prop_assert_eq!(x.mul(&y), y.mul(&x));
            if let Some(xi) = x.inv() {
                proptest::prop_assert_eq!(x.mul(&xi), ExactScalar::one());
            }
        }
    }
}
