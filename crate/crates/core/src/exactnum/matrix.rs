use std::fmt;

use super::field::CycloField;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Dense row-major matrix over a cyclotomic field.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: CycloField,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Outcome of [`ExactMatrix::solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// `particular` solves the system; every solution is `particular + span(nullspace)`.
    Consistent { particular: Vec<Scalar>, nullspace: Vec<Vec<Scalar>> },
    /// The right-hand side is not in the column space.
    Inconsistent,
}

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(field: CycloField, rows: usize, cols: usize) -> Self {
        ExactMatrix { field, rows, cols, entries: vec![Scalar::zero(field); rows * cols] }
    }

    pub fn identity(field: CycloField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one(field);
        }
        m
    }

    pub fn from_rows(field: CycloField, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(ExactMatrix { field, rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(field: CycloField, rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(field, x)).collect())
            .collect();
        Self::from_rows(field, data).expect("rectangular integer rows")
    }

    pub fn field(&self) -> CycloField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero(self.field);
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let p = a * b;
                        out[(i, j)] += &p;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        ExactMatrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, s: &Scalar) -> ExactMatrix {
        let entries = self.entries.iter().map(|a| a * s).collect();
        ExactMatrix { field: self.field, rows: self.rows, cols: self.cols, entries }
    }

    pub fn pow(&self, e: u32) -> ExactMatrix {
        assert_eq!(self.rows, self.cols);
        let mut acc = Self::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Stack `other` below `self`.
    pub fn vstack(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        ExactMatrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, entries }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form. Pivot choice: first row with a nonzero
    /// entry in the leftmost unresolved column.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let d = &f * &m[(r, j)];
                    m[(i, j)] -= &d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Rank and a canonical nullspace basis (one vector per free column,
    /// with a 1 in that column and 0 in the other free columns).
    pub fn rank_nullspace(&self) -> (usize, Vec<Vec<Scalar>>) {
        let Rref { matrix, pivots } = self.rref();
        let basis = nullspace_from_rref(&matrix, &pivots);
        (pivots.len(), basis)
    }

    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        self.rank_nullspace().1
    }

    /// Solve `self * x = b` exactly.
    pub fn solve(&self, b: &[Scalar]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(Solution::Inconsistent);
        }
        let mut x = vec![Scalar::zero(self.field); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = matrix[(r, self.cols)].clone();
        }
        Ok(Solution::Consistent { particular: x, nullspace: self.nullspace() })
    }
}

pub(crate) fn nullspace_from_rref(r: &ExactMatrix, pivots: &[usize]) -> Vec<Vec<Scalar>> {
    let field = r.field();
    let mut is_pivot = vec![false; r.cols()];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..r.cols())
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Scalar::zero(field); r.cols()];
            v[f] = Scalar::one(field);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(row, f)];
            }
            v
        })
        .collect()
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
