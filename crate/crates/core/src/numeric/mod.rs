//! Precision-generic complex linear algebra.

mod matrix;
mod svd;

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub use matrix::ComplexMatrix;
pub use svd::{svd, truncate_spectrum, SvdResult, Truncation, MAX_SWEEPS};

/// Floating-point width of every real and imaginary component in a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Single => "f32",
            Precision::Double => "f64",
        }
    }

    /// Unit roundoff `u = 2^-p` (half the machine epsilon).
    pub fn unit_roundoff(self) -> f64 {
        match self {
            Precision::Single => f32::EPSILON as f64 / 2.0,
            Precision::Double => f64::EPSILON / 2.0,
        }
    }

    /// Default relative singular-value cutoff used by MPS truncation.
    pub fn default_rel_cutoff(self) -> f64 {
        match self {
            Precision::Single => 1e-6,
            Precision::Double => 1e-12,
        }
    }
}

impl Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Precision {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f32" | "single" | "fp32" => Ok(Precision::Single),
            "f64" | "double" | "fp64" => Ok(Precision::Double),
            other => crate::error::invalid(format!("unknown precision `{other}`")),
        }
    }
}

/// Real scalar type backing one [`Precision`].
///
/// The precision of a value is carried in its type, so a single state,
/// matrix or gate can never mix widths.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    const PRECISION: Precision;

    fn lit(x: f64) -> Self;

    fn as_f64(self) -> f64;

    fn unit_roundoff() -> Self {
        Self::epsilon() / Self::lit(2.0)
    }
}

impl Real for f32 {
    const PRECISION: Precision = Precision::Single;

    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Double;

    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

pub(crate) fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub(crate) fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}
