//! Exact arithmetic in cyclotomic fields and exact linear algebra over them.

mod echelon;
mod field;
mod matrix;
mod scalar;

pub use echelon::{sparse_from_pairs, SparseEchelon, SparseRow};
pub use field::{cyclotomic_polynomial, totient, CycloField};
pub use matrix::{ExactMatrix, Rref, Solution};
pub use scalar::{parse_rational, Scalar};

pub(crate) use scalar::split_signed_terms;

use crate::error::Result;

/// The field `Q(zeta_m)`.
pub fn make_cyclotomic(m: u32) -> Result<CycloField> {
    CycloField::new(m)
}

pub fn rank_nullspace(a: &ExactMatrix) -> (usize, Vec<Vec<Scalar>>) {
    a.rank_nullspace()
}

pub fn solve_linear(a: &ExactMatrix, b: &[Scalar]) -> Result<Solution> {
    a.solve(b)
}

/// Least common multiple of a list of positive integers (1 for an empty list).
pub fn lcm_all(values: impl IntoIterator<Item = u32>) -> u32 {
    use num_integer::Integer;
    values.into_iter().fold(1u32, |acc, v| acc.lcm(&v.max(1)))
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Option<Scalar> {
    let mut it = a.iter().zip(b);
    let (x, y) = it.next()?;
    let mut acc = x * y;
    for (x, y) in it {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    Some(acc)
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}
