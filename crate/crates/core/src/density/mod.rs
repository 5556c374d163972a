//! Floating-point demonstrations that Laurent polynomials are dense in
//! smooth functions on the torus (Fourier truncation) and that polynomials
//! approximate a function together with its derivatives on an interval
//! (Bernstein approximation of a derivative, integrated back up).

mod bernstein;
mod fourier;

pub use bernstein::{interval_error, weierstrass_integrate_approx, BernsteinPoly, IntervalFunction};
pub use fourier::{ck_error, fourier_truncate, multi_indices, TrigPoly};

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::error::{Error, Result};

/// `amp * cos(freq * θ + phase)` terms of a fixed real trigonometric polynomial.
type TrigTerms = &'static [(f64, f64, f64)];

const TRIG_A: TrigTerms = &[(1.0, 0.0, 0.0), (2.0, 1.0, 0.0), (-0.5, 3.0, -FRAC_PI_2), (0.25, 5.0, 0.0)];
const TRIG_B: TrigTerms = &[(0.5, 0.0, 0.0), (-1.0, 2.0, 0.3), (0.75, 4.0, 0.0)];

/// One-variable factor of a catalogue function.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Factor {
    /// `exp(sin θ)`
    ExpSin,
    /// `exp(cos θ)`
    ExpCos,
    Trig(TrigTerms),
}

/// Taylor coefficients of `exp(u(h))` from those of `u`.
fn exp_series(u: &[f64]) -> Vec<f64> {
    let k = u.len();
    let mut g = vec![0.0; k];
    g[0] = u[0].exp();
    for j in 1..k {
        let s: f64 = (1..=j).map(|i| i as f64 * u[i] * g[j - i]).sum();
        g[j] = s / j as f64;
    }
    g
}

impl Factor {
    /// `f(θ), f'(θ), ..., f^(k)(θ)`.
    fn derivatives(&self, theta: f64, k: usize) -> Vec<f64> {
        match self {
            Factor::ExpSin | Factor::ExpCos => {
                let shift = if *self == Factor::ExpSin { 0.0 } else { FRAC_PI_2 };
                let mut fact = 1.0;
                let u: Vec<f64> = (0..=k)
                    .map(|j| {
                        if j > 0 {
                            fact *= j as f64;
                        }
                        (theta + shift + j as f64 * FRAC_PI_2).sin() / fact
                    })
                    .collect();
                let mut fact = 1.0;
                exp_series(&u)
                    .into_iter()
                    .enumerate()
                    .map(|(j, g)| {
                        if j > 0 {
                            fact *= j as f64;
                        }
                        g * fact
                    })
                    .collect()
            }
            Factor::Trig(terms) => (0..=k)
                .map(|j| {
                    terms
                        .iter()
                        .map(|&(amp, freq, phase)| {
                            amp * freq.powi(j as i32) * (freq * theta + phase + j as f64 * FRAC_PI_2).cos()
                        })
                        .sum()
                })
                .collect(),
        }
    }

    fn trig_degree(&self) -> Option<usize> {
        match self {
            Factor::Trig(terms) => Some(terms.iter().map(|t| t.1 as usize).max().unwrap_or(0)),
            _ => None,
        }
    }
}

/// A closed catalogue of smooth periodic functions `f(θ) = ∏_k f_k(θ_k)`
/// with exact derivative rules.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothTestFunction {
    name: &'static str,
    factors: Vec<Factor>,
}

impl SmoothTestFunction {
    pub const NAMES: [&'static str; 4] = ["exp-sin", "exp-sin-cos-2d", "trig-poly", "trig-poly-2d"];

    pub fn by_name(name: &str) -> Result<Self> {
        let factors = match name {
            "exp-sin" => vec![Factor::ExpSin],
            "exp-sin-cos-2d" => vec![Factor::ExpSin, Factor::ExpCos],
            "trig-poly" => vec![Factor::Trig(TRIG_A)],
            "trig-poly-2d" => vec![Factor::Trig(TRIG_A), Factor::Trig(TRIG_B)],
            other => return Err(Error::UnknownPreset(other.to_string())),
        };
        let name = Self::NAMES.into_iter().find(|n| *n == name).expect("listed above");
        Ok(SmoothTestFunction { name, factors })
    }

    pub fn exp_sin() -> Self {
        Self::by_name("exp-sin").expect("catalogue entry")
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    /// Degree when the function is itself a trigonometric polynomial.
    pub fn trig_degree(&self) -> Option<usize> {
        self.factors.iter().map(Factor::trig_degree).try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn eval(&self, theta: &[f64]) -> f64 {
        self.derivative(&vec![0; self.n()], theta)
    }

    /// `∂^α f(θ)`.
    pub fn derivative(&self, alpha: &[usize], theta: &[f64]) -> f64 {
        self.factors
            .iter()
            .zip(alpha)
            .zip(theta)
            .map(|((f, &a), &t)| f.derivatives(t, a)[a])
            .product()
    }
}

impl fmt::Display for SmoothTestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

/// Sup-norm errors of an approximation, one per derivative order.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxReport {
    /// Truncation order `N` (Fourier) or polynomial degree `N` (Bernstein).
    pub parameter: usize,
    /// Sample points per axis.
    pub grid: usize,
    /// `errors[j]` is the largest `sup |∂^α (f - p)|` over `|α| = j`.
    pub errors: Vec<f64>,
}

impl ApproxReport {
    /// The `C^k` error `max_{j <= k} errors[j]`.
    pub fn ck(&self, k: usize) -> f64 {
        self.errors[..=k].iter().copied().fold(0.0, f64::max)
    }
}
