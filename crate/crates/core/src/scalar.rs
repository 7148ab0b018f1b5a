use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

pub use num_complex::Complex64 as C64;

/// Scalar field used by the dense kernels. Real operators run through `f64`, everything
/// else through `C64`; results are always reported as `C64`.
pub trait Scalar:
    Copy
    + Debug
    + Default
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_re(x: f64) -> Self;
    fn conj(self) -> Self;
    fn abs(self) -> f64;
    fn norm_sqr(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn to_c64(self) -> C64;
    /// Truncates the imaginary part for `f64`.
    fn from_c64(z: C64) -> Self;
    /// `self / |self|`, or one when `self` is zero.
    fn phase(self) -> Self {
        let a = self.abs();
        if a == 0.0 {
            Self::one()
        } else {
            self.scale(1.0 / a)
        }
    }
}

impl Scalar for f64 {
    #[inline(always)]
    fn zero() -> Self {
        0.0
    }
    #[inline(always)]
    fn one() -> Self {
        1.0
    }
    #[inline(always)]
    fn from_re(x: f64) -> Self {
        x
    }
    #[inline(always)]
    fn conj(self) -> Self {
        self
    }
    #[inline(always)]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline(always)]
    fn norm_sqr(self) -> f64 {
        self * self
    }
    #[inline(always)]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline(always)]
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
    #[inline(always)]
    fn from_c64(z: C64) -> Self {
        z.re
    }
}

impl Scalar for C64 {
    #[inline(always)]
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    #[inline(always)]
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    #[inline(always)]
    fn from_re(x: f64) -> Self {
        C64::new(x, 0.0)
    }
    #[inline(always)]
    fn conj(self) -> Self {
        C64::new(self.re, -self.im)
    }
    #[inline(always)]
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
    #[inline(always)]
    fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    #[inline(always)]
    fn scale(self, s: f64) -> Self {
        C64::new(self.re * s, self.im * s)
    }
    #[inline(always)]
    fn to_c64(self) -> C64 {
        self
    }
    #[inline(always)]
    fn from_c64(z: C64) -> Self {
        z
    }
}

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
