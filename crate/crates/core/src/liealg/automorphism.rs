use super::presets::{sl_basis, SlBasis};
use super::{LieAlgebra, Realization};
use crate::error::{Error, Result};
use crate::exactnum::{ExactMatrix, Scalar};

/// A finite-order automorphism of `g`, as a matrix acting on coordinate
/// columns, with its exact (minimal) order.
#[derive(Clone, Debug)]
pub struct FiniteAutomorphism {
    matrix: ExactMatrix,
    order: u32,
}

/// One eigenspace of an automorphism: eigenvalue `zeta_r^j` and a basis.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub exponent: u32,
    pub eigenvalue: Scalar,
    pub basis: Vec<Vec<Scalar>>,
}

fn divisors(n: u32) -> impl Iterator<Item = u32> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

impl FiniteAutomorphism {
    /// Validate `matrix` as an automorphism of `g` of exact order `order`.
    pub fn new(g: &LieAlgebra, matrix: ExactMatrix, order: u32) -> Result<Self> {
        let d = g.dim();
        check_square(g, &matrix)?;
        if order == 0 {
            return Err(Error::OrderMismatch("order must be positive".into()));
        }
        check_bracket_preserving(g, &matrix)?;
        let id = ExactMatrix::identity(g.field(), d);
        if matrix.pow(order) != id {
            return Err(Error::OrderMismatch(format!("A^{order} is not the identity")));
        }
        if let Some(smaller) = divisors(order).find(|&k| k < order && matrix.pow(k) == id) {
            return Err(Error::OrderMismatch(format!(
                "declared order {order} but A^{smaller} is already the identity"
            )));
        }
        Ok(FiniteAutomorphism { matrix, order })
    }

    /// Validate `matrix` and determine its order, which must divide `bound`.
    pub fn with_order_dividing(g: &LieAlgebra, matrix: ExactMatrix, bound: u32) -> Result<Self> {
        check_square(g, &matrix)?;
        check_bracket_preserving(g, &matrix)?;
        let id = ExactMatrix::identity(g.field(), g.dim());
        let order = divisors(bound.max(1))
            .find(|&k| matrix.pow(k) == id)
            .ok_or_else(|| Error::OrderMismatch(format!("order does not divide {bound}")))?;
        Self::new(g, matrix, order)
    }

    pub fn identity(g: &LieAlgebra) -> Self {
        FiniteAutomorphism { matrix: ExactMatrix::identity(g.field(), g.dim()), order: 1 }
    }

    /// `x ↦ -xᵀ` on `sl_n` (order 2).
    pub fn sl_negative_transpose(g: &LieAlgebra) -> Result<Self> {
        let n = sl_rank(g)?;
        let basis = sl_basis(n);
        let f = g.field();
        let mut m = ExactMatrix::zeros(f, g.dim(), g.dim());
        for (col, b) in basis.iter().enumerate() {
            let row = match *b {
                SlBasis::Offdiag(i, j) => basis
                    .iter()
                    .position(|c| matches!(c, SlBasis::Offdiag(a, b) if *a == j && *b == i))
                    .expect("transposed basis element exists"),
                SlBasis::Cartan(_) => col,
            };
            m[(row, col)] = Scalar::from_int(f, -1);
        }
        Self::new(g, m, 2)
    }

    /// `Ad(diag(zeta_q^k_1, ..., zeta_q^k_n))` on `sl_n`; the order is computed.
    pub fn sl_inner_diagonal(g: &LieAlgebra, root_order: u32, exponents: &[i64]) -> Result<Self> {
        let n = sl_rank(g)?;
        if exponents.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} diagonal exponents for sl{n}",
                exponents.len()
            )));
        }
        let f = g.field();
        let basis = sl_basis(n);
        let mut m = ExactMatrix::zeros(f, g.dim(), g.dim());
        for (col, b) in basis.iter().enumerate() {
            m[(col, col)] = match *b {
                SlBasis::Offdiag(i, j) => Scalar::root_of_unity(f, exponents[i] - exponents[j], root_order)?,
                SlBasis::Cartan(_) => Scalar::one(f),
            };
        }
        Self::with_order_dividing(g, m, root_order)
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(x)
    }
}

fn check_square(g: &LieAlgebra, m: &ExactMatrix) -> Result<()> {
    let d = g.dim();
    if m.rows() != d || m.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "automorphism is {}x{}, algebra has dimension {d}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn sl_rank(g: &LieAlgebra) -> Result<usize> {
    match g.realization() {
        Realization::SpecialLinear(n) => Ok(*n),
        _ => Err(Error::UnknownPreset(format!("sl_n automorphism preset on {}", g.name()))),
    }
}

fn check_bracket_preserving(g: &LieAlgebra, a: &ExactMatrix) -> Result<()> {
    let d = g.dim();
    let cols: Vec<Vec<Scalar>> = (0..d).map(|i| a.column(i)).collect();
    for i in 0..d {
        for j in (i + 1)..d {
            let lhs = a.mul_vec(&g.bracket(&g.unit(i), &g.unit(j)));
            let rhs = g.bracket(&cols[i], &cols[j]);
            if lhs != rhs {
                return Err(Error::NotAutomorphism { i, j });
            }
        }
    }
    Ok(())
}

/// Eigenspaces of `a` for the eigenvalues `zeta_r^j`, `j = 0..r`, where `r`
/// is the order of `a`. The field of `g` must contain the `r`-th roots of unity.
pub fn automorphism_eigenspaces(g: &LieAlgebra, a: &FiniteAutomorphism) -> Result<Vec<Eigenspace>> {
    let r = a.order();
    let f = g.field();
    let d = g.dim();
    let id = ExactMatrix::identity(f, d);
    let mut out = Vec::with_capacity(r as usize);
    for j in 0..r {
        let lambda = Scalar::root_of_unity(f, j as i64, r)?;
        let basis = a.matrix().sub(&id.scale(&lambda)).nullspace();
        out.push(Eigenspace { exponent: j, eigenvalue: lambda, basis });
    }
    let total: usize = out.iter().map(|e| e.basis.len()).sum();
    if total != d {
        return Err(Error::OrderMismatch(format!(
            "eigenspaces span {total} of {d} dimensions"
        )));
    }
    for ei in &out {
        for ej in &out {
            let target = Scalar::root_of_unity(f, (ei.exponent + ej.exponent) as i64, r)?;
            for x in &ei.basis {
                for y in &ej.basis {
                    let b = g.bracket(x, y);
                    let lhs = a.apply(&b);
                    let rhs: Vec<Scalar> = b.iter().map(|v| v * &target).collect();
                    if lhs != rhs {
                        return Err(Error::GradingViolation(vec![
                            ei.exponent as i64,
                            ej.exponent as i64,
                        ]));
                    }
                }
            }
        }
    }
    Ok(out)
}
