//! Central finite differences with optional Richardson extrapolation.

use crate::error::Result;
use crate::operator::ComplexOperator;

/// Values that can be combined linearly by a difference stencil.
pub trait Stencil: Sized {
    /// `a * self + b * other`.
    fn combine(&self, a: f64, other: &Self, b: f64) -> Self;
}

impl Stencil for f64 {
    fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        a * self + b * other
    }
}

impl Stencil for ComplexOperator {
    fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        &self.scale(a) + &other.scale(b)
    }
}

/// Step-size rule `δ = max(floor, relative * |x|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepPolicy {
    pub relative: f64,
    pub floor: f64,
    pub richardson: bool,
}

impl StepPolicy {
    pub fn new(relative: f64) -> Self {
        Self {
            relative,
            floor: 1e-5,
            richardson: false,
        }
    }

    pub fn with_richardson(mut self, on: bool) -> Self {
        self.richardson = on;
        self
    }

    pub fn step(&self, x: f64) -> f64 {
        self.floor.max(self.relative * x.abs())
    }

    /// First derivative at `x` under this policy.
    pub fn derivative<T: Stencil>(&self, f: impl Fn(f64) -> Result<T>, x: f64) -> Result<T> {
        let h = self.step(x);
        if self.richardson {
            richardson(f, x, h)
        } else {
            central(f, x, h)
        }
    }
}

/// `[f(x+h) - f(x-h)] / 2h`, error `O(h²)`.
pub fn central<T: Stencil>(f: impl Fn(f64) -> Result<T>, x: f64, h: f64) -> Result<T> {
    let plus = f(x + h)?;
    let minus = f(x - h)?;
    Ok(plus.combine(0.5 / h, &minus, -0.5 / h))
}

/// One Richardson step on the central difference, error `O(h⁴)`:
/// `[4 D(h) - D(2h)] / 3`.
pub fn richardson<T: Stencil>(f: impl Fn(f64) -> Result<T>, x: f64, h: f64) -> Result<T> {
    let fine = central(&f, x, h)?;
    let coarse = central(&f, x, 2.0 * h)?;
    Ok(fine.combine(4.0 / 3.0, &coarse, -1.0 / 3.0))
}
