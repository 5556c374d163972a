use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{ApproxReport, SmoothTestFunction};
use crate::laurent::Multidegree;

/// `Σ_{|m_k| <= N} c_m e^{i m·θ}`: a Laurent polynomial in `t_k = e^{iθ_k}`.
/// Coefficients are dense, row-major over `m_1, ..., m_n`, each in `-N..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly {
    n: usize,
    degree: usize,
    coeffs: Vec<Complex64>,
}

fn unit(num: i64, den: usize, sign: f64) -> Complex64 {
    let r = num.rem_euclid(den as i64) as f64 / den as f64;
    Complex64::from_polar(1.0, sign * TAU * r)
}

/// Apply `mat` (`out × shape[axis]`, row-major) along one axis of a dense tensor.
fn apply_axis(data: &[Complex64], shape: &[usize], axis: usize, mat: &[Complex64], out: usize) -> Vec<Complex64> {
    let len = shape[axis];
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let mut res = vec![Complex64::new(0.0, 0.0); outer * out * inner];
    for o in 0..outer {
        for r in 0..out {
            let row = &mat[r * len..(r + 1) * len];
            for i in 0..inner {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, m) in row.iter().enumerate() {
                    acc += m * data[(o * len + c) * inner + i];
                }
                res[(o * out + r) * inner + i] = acc;
            }
        }
    }
    res
}

/// All `α` with `|α| = order` in `n` variables, lexicographically descending.
pub fn multi_indices(n: usize, order: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if order == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if n == 1 {
        return vec![vec![order]];
    }
    let mut out = Vec::new();
    for first in (0..=order).rev() {
        for mut rest in multi_indices(n - 1, order - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl TrigPoly {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn side(&self) -> usize {
        2 * self.degree + 1
    }

    fn flat_index(&self, m: &[i64]) -> Option<usize> {
        let d = self.degree as i64;
        let mut idx = 0usize;
        for &mk in m {
            if mk.abs() > d {
                return None;
            }
            idx = idx * self.side() + (mk + d) as usize;
        }
        Some(idx)
    }

    pub fn coeff(&self, m: &[i64]) -> Complex64 {
        self.flat_index(m).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    /// Nonzero terms as `(multidegree, coefficient)`.
    pub fn terms(&self) -> Vec<(Multidegree, Complex64)> {
        let d = self.degree as i64;
        let s = self.side();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(mut idx, c)| {
                let mut m = vec![0i64; self.n];
                for k in (0..self.n).rev() {
                    m[k] = (idx % s) as i64 - d;
                    idx /= s;
                }
                (Multidegree(m), *c)
            })
            .collect()
    }

    /// `∂/∂θ_axis`, computed on coefficients.
    pub fn derivative(&self, axis: usize) -> TrigPoly {
        let mut out = self.clone();
        let d = self.degree as i64;
        let s = self.side();
        let stride: usize = (axis + 1..self.n).map(|_| s).product();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            let mk = ((idx / stride) % s) as i64 - d;
            *c *= Complex64::new(0.0, mk as f64);
        }
        out
    }

    /// `∂^α p(θ)`, summed term by term.
    pub fn eval_derivative(&self, alpha: &[usize], theta: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in self.terms() {
            let mut t = c;
            for ((&mk, &a), &th) in m.as_slice().iter().zip(alpha).zip(theta) {
                t *= Complex64::new(0.0, mk as f64).powu(a as u32) * Complex64::from_polar(1.0, mk as f64 * th);
            }
            acc += t;
        }
        acc
    }

    pub fn eval(&self, theta: &[f64]) -> Complex64 {
        self.eval_derivative(&vec![0; self.n], theta)
    }

    /// `∂^α p` at all points `2πj/grid` of the uniform grid, row-major.
    pub fn eval_grid(&self, alpha: &[usize], grid: usize) -> Vec<Complex64> {
        let s = self.side();
        let d = self.degree as i64;
        let mut data = self.coeffs.clone();
        let mut shape = vec![s; self.n];
        for (axis, &a) in alpha.iter().enumerate() {
            let mut mat = Vec::with_capacity(grid * s);
            for j in 0..grid {
                for idx in 0..s {
                    let m = idx as i64 - d;
                    mat.push(Complex64::new(0.0, m as f64).powu(a as u32) * unit(m * j as i64, grid, 1.0));
                }
            }
            data = apply_axis(&data, &shape, axis, &mat, grid);
            shape[axis] = grid;
        }
        data
    }
}

/// Fourier coefficients `|m_k| <= N` by trapezoidal quadrature on a uniform
/// grid of `max(4N + 1, 128)` points per axis.
pub fn fourier_truncate(f: &SmoothTestFunction, degree: usize) -> TrigPoly {
    let n = f.n();
    let pts = (4 * degree + 1).max(128);
    let s = 2 * degree + 1;
    let total = pts.pow(n as u32);
    let mut samples = Vec::with_capacity(total);
    let mut theta = vec![0.0; n];
    for flat in 0..total {
        let mut rest = flat;
        for k in (0..n).rev() {
            theta[k] = TAU * (rest % pts) as f64 / pts as f64;
            rest /= pts;
        }
        samples.push(Complex64::new(f.eval(&theta), 0.0));
    }
    let mut mat = Vec::with_capacity(s * pts);
    for idx in 0..s {
        let m = idx as i64 - degree as i64;
        for j in 0..pts {
            mat.push(unit(m * j as i64, pts, -1.0) / pts as f64);
        }
    }
    let mut data = samples;
    let mut shape = vec![pts; n];
    for axis in 0..n {
        data = apply_axis(&data, &shape, axis, &mat, s);
        shape[axis] = s;
    }
    TrigPoly { n, degree, coeffs: data }
}

/// `sup |∂^α (f - p)|` over a uniform grid of `grid` points per axis, for
/// every order `|α| <= k`.
pub fn ck_error(f: &SmoothTestFunction, p: &TrigPoly, k: usize, grid: usize) -> ApproxReport {
    let n = f.n();
    let mut errors = Vec::with_capacity(k + 1);
    for order in 0..=k {
        let mut worst: f64 = 0.0;
        for alpha in multi_indices(n, order) {
            let vals = p.eval_grid(&alpha, grid);
            let mut theta = vec![0.0; n];
            for (flat, v) in vals.iter().enumerate() {
                let mut rest = flat;
                for kk in (0..n).rev() {
                    theta[kk] = TAU * (rest % grid) as f64 / grid as f64;
                    rest /= grid;
                }
                worst = worst.max((Complex64::new(f.derivative(&alpha, &theta), 0.0) - v).norm());
            }
        }
        errors.push(worst);
    }
    ApproxReport { parameter: p.degree(), grid, errors }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_poly_recovered() {
        for name in ["trig-poly", "trig-poly-2d"] {
            let f = SmoothTestFunction::by_name(name).unwrap();
            let p = fourier_truncate(&f, 6);
            let r = ck_error(&f, &p, 2, 64);
            assert!(r.ck(2) <= 1e-12, "{name}: {:?}", r.errors);
        }
    }

    #[test]
    fn constant_term_is_mean() {
        let f = SmoothTestFunction::exp_sin();
        let p = fourier_truncate(&f, 0);
        // mean of exp(sin θ) is the modified Bessel value I_0(1)
        let i0 = 1.266_065_877_752_008_4;
        assert!((p.coeff(&[0]).re - i0).abs() < 1e-14);
        let r = ck_error(&f, &p, 0, 512);
        let sup_dev = (1f64.exp() - i0).max(i0 - (-1f64).exp());
        assert!((r.errors[0] - sup_dev).abs() < 1e-12);
    }

    #[test]
    fn grid_and_pointwise_evaluation_agree() {
        let f = SmoothTestFunction::by_name("exp-sin-cos-2d").unwrap();
        let p = fourier_truncate(&f, 5);
        let vals = p.eval_grid(&[1, 1], 8);
        let th = [TAU * 3.0 / 8.0, TAU * 5.0 / 8.0];
        assert!((vals[3 * 8 + 5] - p.eval_derivative(&[1, 1], &th)).norm() < 1e-12);
    }

    #[test]
    fn coefficient_derivative_matches_evaluation() {
        let f = SmoothTestFunction::exp_sin();
        let p = fourier_truncate(&f, 12);
        let dp = p.derivative(0).derivative(0);
        for j in 0..16 {
            let t = TAU * j as f64 / 16.0 + 0.1;
            assert!((dp.eval(&[t]) - p.eval_derivative(&[2], &[t])).norm() < 1e-12);
        }
    }

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(multi_indices(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(multi_indices(1, 3), vec![vec![3]]);
    }

    #[test]
    fn truncation_is_laurent() {
        let p = fourier_truncate(&SmoothTestFunction::by_name("trig-poly").unwrap(), 5);
        let big: Vec<_> = p.terms().into_iter().filter(|(_, c)| c.norm() > 1e-12).map(|(m, _)| m.0[0]).collect();
        assert_eq!(big, vec![-5, -3, -1, 0, 1, 3, 5]);
    }
}
