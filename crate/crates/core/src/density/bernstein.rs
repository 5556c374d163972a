use super::ApproxReport;
use crate::error::{Error, Result};

/// Smooth functions on `[0, 1]` with closed-form derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalFunction {
    /// `e^x`
    Exp,
    /// `1 + 2x - 3x^2`
    Quadratic,
    /// `sin(3x)`
    Sin,
}

impl IntervalFunction {
    pub const NAMES: [&'static str; 3] = ["exp", "quadratic", "sin"];

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "exp" => Ok(IntervalFunction::Exp),
            "quadratic" => Ok(IntervalFunction::Quadratic),
            "sin" => Ok(IntervalFunction::Sin),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IntervalFunction::Exp => "exp",
            IntervalFunction::Quadratic => "quadratic",
            IntervalFunction::Sin => "sin",
        }
    }

    /// `f^(j)(x)`.
    pub fn derivative(&self, j: usize, x: f64) -> f64 {
        match self {
            IntervalFunction::Exp => x.exp(),
            IntervalFunction::Quadratic => match j {
                0 => 1.0 + 2.0 * x - 3.0 * x * x,
                1 => 2.0 - 6.0 * x,
                2 => -6.0,
                _ => 0.0,
            },
            IntervalFunction::Sin => 3f64.powi(j as i32) * (3.0 * x + j as f64 * std::f64::consts::FRAC_PI_2).sin(),
        }
    }
}

/// `Σ_k c_k C(N,k) x^k (1-x)^(N-k)` on `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BernsteinPoly {
    coeffs: Vec<f64>,
}

impl BernsteinPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "Bernstein polynomial needs at least one coefficient");
        BernsteinPoly { coeffs }
    }

    /// `B_N(g)` with control values `g(k/N)`.
    pub fn approximate(g: impl Fn(f64) -> f64, degree: usize) -> Self {
        let nd = degree.max(1) as f64;
        Self::new((0..=degree).map(|k| g(k as f64 / nd)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// de Casteljau evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let mut b = self.coeffs.clone();
        let n = b.len();
        for r in 1..n {
            for k in 0..n - r {
                b[k] = (1.0 - x) * b[k] + x * b[k + 1];
            }
        }
        b[0]
    }

    pub fn derivative(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::new(vec![0.0]);
        }
        Self::new(self.coeffs.windows(2).map(|w| n as f64 * (w[1] - w[0])).collect())
    }

    /// The antiderivative taking the value `c` at `0`.
    pub fn antiderivative(&self, c: f64) -> Self {
        let scale = 1.0 / (self.degree() + 1) as f64;
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        let mut acc = c;
        out.push(acc);
        for b in &self.coeffs {
            acc += scale * b;
            out.push(acc);
        }
        Self::new(out)
    }

    pub fn eval_derivative(&self, j: usize, x: f64) -> f64 {
        let mut p = self.clone();
        for _ in 0..j {
            p = p.derivative();
        }
        p.eval(x)
    }
}

/// Approximate `f^(μ)` by its degree-`N` Bernstein polynomial, then integrate
/// `μ` times, fixing each constant by `f^(j)(0)`.
pub fn weierstrass_integrate_approx(f: IntervalFunction, mu: usize, degree: usize) -> BernsteinPoly {
    let mut p = BernsteinPoly::approximate(|x| f.derivative(mu, x), degree);
    for j in (0..mu).rev() {
        p = p.antiderivative(f.derivative(j, 0.0));
    }
    p
}

/// `sup |f^(j) - p^(j)|` on `grid + 1` equispaced points of `[0, 1]`, `j <= k`.
pub fn interval_error(f: IntervalFunction, p: &BernsteinPoly, k: usize, grid: usize) -> ApproxReport {
    let mut errors = Vec::with_capacity(k + 1);
    let mut dp = p.clone();
    for j in 0..=k {
        let worst = (0..=grid)
            .map(|i| {
                let x = i as f64 / grid as f64;
                (f.derivative(j, x) - dp.eval(x)).abs()
            })
            .fold(0.0, f64::max);
        errors.push(worst);
        dp = dp.derivative();
    }
    ApproxReport { parameter: p.degree(), grid, errors }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_linear() {
        let p = BernsteinPoly::approximate(|x| 3.0 - 2.0 * x, 7);
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            assert!((p.eval(x) - (3.0 - 2.0 * x)).abs() < 1e-14);
        }
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let p = BernsteinPoly::new(vec![1.0, -2.0, 0.5, 4.0]);
        let q = p.derivative().antiderivative(p.eval(0.0));
        for i in 0..=8 {
            let x = i as f64 / 8.0;
            assert!((p.eval(x) - q.eval(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn quadratic_exact_with_one_integration() {
        let f = IntervalFunction::Quadratic;
        let p = weierstrass_integrate_approx(f, 1, 2);
        let r = interval_error(f, &p, 1, 200);
        assert!(r.ck(1) <= 1e-10, "{:?}", r.errors);
    }

    #[test]
    fn plain_bernstein_converges() {
        let f = IntervalFunction::Sin;
        let e: Vec<f64> = [8, 32, 128]
            .iter()
            .map(|&n| interval_error(f, &weierstrass_integrate_approx(f, 0, n), 0, 400).ck(0))
            .collect();
        assert!(e[0] > e[1] && e[1] > e[2]);
    }

    #[test]
    fn names() {
        for name in IntervalFunction::NAMES {
            assert_eq!(IntervalFunction::by_name(name).unwrap().name(), name);
        }
    }
}
