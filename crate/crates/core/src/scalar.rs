//! Scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point type the library is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex literal helper.
pub fn cx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Converts any complex value to `Complex<f64>` for reporting.
pub fn to_c64<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// Converts a `Complex<f64>` into the working precision.
pub fn from_c64<T: Real>(z: Complex<f64>) -> Complex<T> {
    cx(z.re, z.im)
}

/// Running sum with optional Neumaier compensation.
///
/// Terms are always added in the order they are pushed, so results are
/// reproducible regardless of how the caller schedules independent sums.
#[derive(Clone, Copy, Debug)]
pub struct Accumulator<T: Real> {
    sum: Complex<T>,
    carry: Complex<T>,
    compensated: bool,
}

impl<T: Real> Accumulator<T> {
    pub fn new(compensated: bool) -> Self {
        Self { sum: Complex::new(T::zero(), T::zero()), carry: Complex::new(T::zero(), T::zero()), compensated }
    }

    #[inline]
    pub fn add(&mut self, x: Complex<T>) {
        if self.compensated {
            self.sum.re = neumaier(self.sum.re, x.re, &mut self.carry.re);
            self.sum.im = neumaier(self.sum.im, x.im, &mut self.carry.im);
        } else {
            self.sum = self.sum + x;
        }
    }

    pub fn total(&self) -> Complex<T> {
        self.sum + self.carry
    }
}

#[inline]
fn neumaier<T: Real>(sum: T, x: T, carry: &mut T) -> T {
    let t = sum + x;
    if sum.abs() >= x.abs() {
        *carry = *carry + ((sum - t) + x);
    } else {
        *carry = *carry + ((x - t) + sum);
    }
    t
}
