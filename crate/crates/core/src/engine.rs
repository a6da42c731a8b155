//! Truncated series evaluation of `θ[ε′;ε](z,τ)` and its first two z-derivatives.
//!
//! ```text
//! θ[ε′;ε](z,τ) = Σ_n exp(πi (n+ε′)² τ + 2πi (n+ε′)(z+ε))
//! ```
//!
//! The top entry is reduced mod 1 before summation (a pure reindexing) and the
//! integer part of the bottom entry is pulled out as the exact factor
//! `e^{2πi n ε′}`. The half-width `N` is the smallest for which a geometric
//! majorant of the omitted terms falls below `abs_tol`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::characteristic::{Characteristic, RealCharacteristic};
use crate::error::{EngineError, ParseError};
use crate::scalar::Real;

/// A point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauPoint<T> {
    value: Complex<T>,
}

impl<T: Real> TauPoint<T> {
    pub fn new(value: Complex<T>) -> Result<Self, EngineError> {
        // NaN must be rejected too.
        if value.im.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(EngineError::NotUpperHalfPlane(
                value.im.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(TauPoint { value })
    }

    pub fn from_parts(re: T, im: T) -> Result<Self, EngineError> {
        Self::new(Complex::new(re, im))
    }

    pub fn value(&self) -> Complex<T> {
        self.value
    }
}

impl<T: Real> fmt::Display for TauPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.value.re, self.value.im)
    }
}

impl<T: Real + FromStr> FromStr for TauPoint<T> {
    type Err = ParseError;

    /// Accepts `a+bi`, `a-bi`, `bi` and `i` with decimal literals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Tau(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t.strip_suffix('i').ok_or_else(bad)?;
        let bytes = body.as_bytes();
        // split at the last sign that is not leading and not part of an exponent
        let split = (1..bytes.len()).rev().find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
        });
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let parse = |x: &str| -> Result<T, ParseError> {
            match x {
                "" | "+" => Ok(T::one()),
                "-" => Ok(-T::one()),
                _ => x.parse::<T>().map_err(|_| bad()),
            }
        };
        let re = if re.is_empty() { T::zero() } else { parse(re)? };
        let im = parse(im)?;
        TauPoint::from_parts(re, im).map_err(|_| bad())
    }
}

/// Truncation policy for the series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesParams<T> {
    /// Bound on the absolute size of the omitted tail.
    pub abs_tol: T,
    pub max_half_width: usize,
    /// Smallest accepted `Im τ`; below it the half-width explodes.
    pub min_imag: T,
}

impl<T: Real> Default for SeriesParams<T> {
    fn default() -> Self {
        SeriesParams {
            abs_tol: T::lit(1e-18),
            max_half_width: 10_000,
            min_imag: T::lit(0.05),
        }
    }
}

/// Value of a truncated series together with diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue<T> {
    pub value: Complex<T>,
    /// Largest modulus of a summed term; the natural scale for cancellation checks.
    pub max_term: T,
    pub half_width: usize,
}

/// Theta evaluator with a fixed truncation policy. Stateless apart from the policy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaEngine<T> {
    pub params: SeriesParams<T>,
}

impl<T: Real> Default for ThetaEngine<T> {
    fn default() -> Self {
        ThetaEngine::new(SeriesParams::default())
    }
}

impl<T: Real> ThetaEngine<T> {
    pub fn new(params: SeriesParams<T>) -> Self {
        ThetaEngine { params }
    }

    pub fn theta(
        &self,
        c: &RealCharacteristic<T>,
        z: Complex<T>,
        tau: &TauPoint<T>,
    ) -> Result<Complex<T>, EngineError> {
        Ok(self.series(c, z, tau, 0, None)?.value)
    }

    pub fn theta_d1(
        &self,
        c: &RealCharacteristic<T>,
        z: Complex<T>,
        tau: &TauPoint<T>,
    ) -> Result<Complex<T>, EngineError> {
        Ok(self.series(c, z, tau, 1, None)?.value)
    }

    pub fn theta_d2(
        &self,
        c: &RealCharacteristic<T>,
        z: Complex<T>,
        tau: &TauPoint<T>,
    ) -> Result<Complex<T>, EngineError> {
        Ok(self.series(c, z, tau, 2, None)?.value)
    }

    /// Theta constant `θ[c](0,τ)` for an exact characteristic.
    pub fn constant(
        &self,
        c: &Characteristic,
        tau: &TauPoint<T>,
    ) -> Result<Complex<T>, EngineError> {
        self.theta(&c.to_real(), Complex::new(T::zero(), T::zero()), tau)
    }

    /// Theta derivative `θ′[c](0,τ)` for an exact characteristic.
    pub fn derivative(
        &self,
        c: &Characteristic,
        tau: &TauPoint<T>,
    ) -> Result<Complex<T>, EngineError> {
        self.theta_d1(&c.to_real(), Complex::new(T::zero(), T::zero()), tau)
    }

    /// `−π θ[0;0] θ[1/2;0] θ[0;1/2]` at `z = 0`.
    pub fn jacobi_rhs(&self, tau: &TauPoint<T>) -> Result<Complex<T>, EngineError> {
        let zero = Complex::new(T::zero(), T::zero());
        let half = T::lit(0.5);
        let t00 = self.theta(&RealCharacteristic::new(T::zero(), T::zero()), zero, tau)?;
        let t10 = self.theta(&RealCharacteristic::new(half, T::zero()), zero, tau)?;
        let t01 = self.theta(&RealCharacteristic::new(T::zero(), half), zero, tau)?;
        Ok(t00 * t10 * t01 * (-T::PI()))
    }

    /// Evaluates the `order`-th z-derivative series (order 0, 1 or 2).
    ///
    /// `half_width` forces a specific truncation instead of the tail-bound choice.
    pub fn series(
        &self,
        c: &RealCharacteristic<T>,
        z: Complex<T>,
        tau: &TauPoint<T>,
        order: u32,
        half_width: Option<usize>,
    ) -> Result<SeriesValue<T>, EngineError> {
        let tau = tau.value();
        if tau.im < self.params.min_imag {
            return Err(EngineError::ImaginaryPartTooSmall {
                im: tau.im.to_f64().unwrap_or(f64::NAN),
                min: self.params.min_imag.to_f64().unwrap_or(f64::NAN),
            });
        }
        let top = c.top - c.top.floor();
        let shift = c.bottom.floor();
        let bottom = c.bottom - shift;
        let n = match half_width {
            Some(n) => n,
            None => self.half_width(tau.im, z.im.abs(), order)?,
        };

        let pi = T::PI();
        let two_pi_i = Complex::new(T::zero(), T::PI() + T::PI());
        let w = z + Complex::new(bottom, T::zero());
        let term = |k: T| -> Complex<T> {
            let arg = Complex::new(T::zero(), pi * k * k) * tau + two_pi_i * w * k;
            let e = arg.exp();
            match order {
                0 => e,
                1 => e * two_pi_i * k,
                _ => e * (two_pi_i * k) * (two_pi_i * k),
            }
        };

        let mut acc = CompensatedSum::new();
        let mut max_term = T::zero();
        let mut push = |t: Complex<T>| {
            max_term = max_term.max(t.norm());
            acc.add(t);
        };
        push(term(top));
        for j in 1..=n {
            let j = T::from_usize(j).unwrap();
            push(term(top + j));
            push(term(top - j));
        }
        // θ[ε′; ε + m] = e^{2πi m ε′} θ[ε′; ε]
        let angle = (T::PI() + T::PI()) * shift * top;
        let factor = Complex::new(angle.cos(), angle.sin());
        Ok(SeriesValue {
            value: acc.total() * factor,
            max_term,
            half_width: n,
        })
    }

    /// Smallest `N` whose omitted tail (both sides, `|k| > N`) is below `abs_tol`.
    ///
    /// Omitted terms satisfy `|k| > N` and are bounded by
    /// `f(k) = (2π|k|)^d exp(−π y k² + 2π |Im z| |k|)`; past `K = N` the ratio of
    /// consecutive bounds is at most `ρ = ((K+1)/K)^d exp(−π y (2K+1) + 2π|Im z|)`.
    pub fn half_width(&self, im_tau: T, abs_im_z: T, order: u32) -> Result<usize, EngineError> {
        let y = im_tau.to_f64().unwrap();
        let s = abs_im_z.to_f64().unwrap();
        let tol = self.params.abs_tol.to_f64().unwrap();
        let d = order as f64;
        let pi = std::f64::consts::PI;
        for n in 1..=self.params.max_half_width {
            let k = n as f64;
            let log_rho = d * ((k + 1.0) / k).ln() - pi * y * (2.0 * k + 1.0) + 2.0 * pi * s;
            if log_rho >= 0.0 {
                continue;
            }
            let log_f = d * (2.0 * pi * k).ln() - pi * y * k * k + 2.0 * pi * s * k;
            let log_tail = std::f64::consts::LN_2 + log_f - (-log_rho.exp()).ln_1p();
            if log_tail < tol.ln() {
                return Ok(n);
            }
        }
        Err(EngineError::TruncationExceeded {
            max: self.params.max_half_width,
        })
    }
}

/// Closed-form zero of `θ[ε′;ε](·,τ)` in the fundamental parallelogram:
/// `τ(1/2 − ε′) + 1/2 − ε`.
pub fn theta_zero_location<T: Real>(c: &RealCharacteristic<T>, tau: &TauPoint<T>) -> Complex<T> {
    let half = T::lit(0.5);
    tau.value() * (half - c.top) + Complex::new(half - c.bottom, T::zero())
}

/// Neumaier summation, componentwise.
struct CompensatedSum<T> {
    re: (T, T),
    im: (T, T),
}

impl<T: Real> CompensatedSum<T> {
    fn new() -> Self {
        CompensatedSum {
            re: (T::zero(), T::zero()),
            im: (T::zero(), T::zero()),
        }
    }

    fn add(&mut self, x: Complex<T>) {
        neumaier(&mut self.re, x.re);
        neumaier(&mut self.im, x.im);
    }

    fn total(&self) -> Complex<T> {
        Complex::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

fn neumaier<T: Real>(state: &mut (T, T), x: T) {
    let (sum, comp) = state;
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}
