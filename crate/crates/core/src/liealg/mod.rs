//! Finite-dimensional Lie algebras given by structure constants.

mod automorphism;
mod forms;
mod presets;

pub use automorphism::{automorphism_eigenspaces, Eigenspace, FiniteAutomorphism};
pub use forms::{derivations, killing_form, universal_form, UniversalFormData};
pub use presets::{abelian, direct_sum, sl, sl2, sl3};

use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{CycloField, ExactMatrix, Scalar};

/// Extra structure carried by presets, used to build automorphism presets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    /// `sl_n` in the basis of [`presets::sl`].
    SpecialLinear(usize),
    Abelian,
    DirectSum(Vec<Realization>),
    Custom,
}

/// `[e_i, e_j] = sum_k c[i][j][k] e_k`.
#[derive(Clone)]
pub struct LieAlgebra {
    name: String,
    field: CycloField,
    dim: usize,
    constants: Vec<Scalar>,
    basis_names: Vec<String>,
    realization: Realization,
}

impl LieAlgebra {
    /// Validate and build. `constants` is indexed as `[i][j][k]`.
    pub fn new(
        name: impl Into<String>,
        field: CycloField,
        constants: Vec<Vec<Vec<Scalar>>>,
        basis_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let dim = constants.len();
        for (i, plane) in constants.iter().enumerate() {
            if plane.len() != dim || plane.iter().any(|v| v.len() != dim) {
                return Err(Error::DimensionMismatch(format!(
                    "structure constants slice {i} is not {dim}x{dim}"
                )));
            }
        }
        let flat: Vec<Scalar> = constants.into_iter().flatten().flatten().collect();
        let names = basis_names.unwrap_or_else(|| (0..dim).map(|i| format!("x{i}")).collect());
        if names.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} basis names for dimension {dim}",
                names.len()
            )));
        }
        let alg = LieAlgebra {
            name: name.into(),
            field,
            dim,
            constants: flat,
            basis_names: names,
            realization: Realization::Custom,
        };
        alg.validate()?;
        Ok(alg)
    }

    pub(crate) fn with_realization(mut self, r: Realization) -> Self {
        self.realization = r;
        self
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in i..d {
                for k in 0..d {
                    if self.c(i, j, k) != &-self.c(j, i, k) {
                        return Err(Error::AntisymmetryViolation { i, j, k });
                    }
                }
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                for l in (j + 1)..d {
                    let x = self.bracket(&self.bracket(&self.unit(i), &self.unit(j)), &self.unit(l));
                    let y = self.bracket(&self.bracket(&self.unit(j), &self.unit(l)), &self.unit(i));
                    let z = self.bracket(&self.bracket(&self.unit(l), &self.unit(i)), &self.unit(j));
                    if x.iter().zip(&y).zip(&z).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return Err(Error::JacobiViolation { i, j, k: l });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> CycloField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn realization(&self) -> &Realization {
        &self.realization
    }

    /// Structure constant `c[i][j][k]`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    pub fn unit(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(self.field); self.dim];
        v[i] = Scalar::one(self.field);
        v
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![Scalar::zero(self.field); self.dim]
    }

    /// Bracket of coordinate vectors.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let d = self.dim;
        let mut out = self.zero_vec();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let w = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.constants[(i * d + j) * d + k];
                    if !c.is_zero() {
                        *o += &(&w * c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad x` (columns are images of basis vectors).
    pub fn ad(&self, x: &[Scalar]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.field, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(x, &self.unit(j));
            for (k, v) in col.into_iter().enumerate() {
                m[(k, j)] = v;
            }
        }
        m
    }

    /// Coordinates of the vector as a human-readable combination of basis names.
    pub fn format_vector(&self, v: &[Scalar]) -> String {
        let mut parts = Vec::new();
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(format_term(c, &self.basis_names[i]));
        }
        join_terms(&parts)
    }
}

/// `c*name`, omitting a unit coefficient and parenthesizing non-rational ones.
pub(crate) fn format_term(c: &Scalar, name: &str) -> String {
    match c.as_rational() {
        Some(r) if r == &num_rational::BigRational::from_integer(1.into()) => name.to_string(),
        Some(r) if r == &num_rational::BigRational::from_integer((-1).into()) => format!("-{name}"),
        Some(r) => format!("{r}*{name}"),
        None => format!("({c})*{name}"),
    }
}

/// Join signed terms into `a + b - c`.
pub(crate) fn join_terms(parts: &[String]) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({}, dim {}, {:?})", self.name, self.dim, self.field)
    }
}

/// `make_lie_algebra` from a sparse list of nonzero constants `(i, j, k, c)`
/// with `i < j`; the `j, i` entries are filled in by antisymmetry.
pub fn from_sparse_constants(
    name: &str,
    field: CycloField,
    dim: usize,
    entries: &[(usize, usize, usize, Scalar)],
    basis_names: Option<Vec<String>>,
) -> Result<LieAlgebra> {
    let mut c = vec![vec![vec![Scalar::zero(field); dim]; dim]; dim];
    for (i, j, k, v) in entries {
        if *i >= dim || *j >= dim || *k >= dim {
            return Err(Error::DimensionMismatch(format!("index ({i}, {j}, {k}) out of range")));
        }
        c[*i][*j][*k] = v.clone();
        c[*j][*i][*k] = -v;
    }
    LieAlgebra::new(name, field, c, basis_names)
}
