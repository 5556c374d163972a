use super::{LieAlgebra, Realization};
use crate::exactnum::{CycloField, Scalar};

/// Basis layout of `sl_n`: `E_ij` for `i < j` (lexicographic), then
/// `H_k = E_kk - E_(k+1)(k+1)`, then `E_ji` for `i < j` (lexicographic in
/// `(i, j)`). For `n = 2` this is `e, h, f`.
pub(crate) enum SlBasis {
    Offdiag(usize, usize),
    Cartan(usize),
}

pub(crate) fn sl_basis(n: usize) -> Vec<SlBasis> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(SlBasis::Offdiag(i, j));
        }
    }
    for k in 0..n.saturating_sub(1) {
        out.push(SlBasis::Cartan(k));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(SlBasis::Offdiag(j, i));
        }
    }
    out
}

fn sl_matrix(n: usize, b: &SlBasis) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    match *b {
        SlBasis::Offdiag(i, j) => m[i][j] = 1,
        SlBasis::Cartan(k) => {
            m[k][k] = 1;
            m[k + 1][k + 1] = -1;
        }
    }
    m
}

/// Coordinates of a traceless integer matrix in the [`sl_basis`] layout.
fn sl_coords(basis: &[SlBasis], m: &[Vec<i64>]) -> Vec<i64> {
    basis
        .iter()
        .map(|b| match *b {
            SlBasis::Offdiag(i, j) => m[i][j],
            SlBasis::Cartan(k) => (0..=k).map(|i| m[i][i]).sum(),
        })
        .collect()
}

fn commutator(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
        }
    }
    out
}

pub(crate) fn sl_basis_names(n: usize) -> Vec<String> {
    if n == 2 {
        return vec!["e".into(), "h".into(), "f".into()];
    }
    sl_basis(n)
        .iter()
        .map(|b| match *b {
            SlBasis::Offdiag(i, j) => format!("E{}{}", i + 1, j + 1),
            SlBasis::Cartan(k) => format!("H{}", k + 1),
        })
        .collect()
}

/// `sl_n` for `n >= 2`.
pub fn sl(field: CycloField, n: usize) -> LieAlgebra {
    assert!(n >= 2, "sl_n needs n >= 2");
    let basis = sl_basis(n);
    let mats: Vec<_> = basis.iter().map(|b| sl_matrix(n, b)).collect();
    let d = basis.len();
    let mut c = vec![vec![vec![Scalar::zero(field); d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let coords = sl_coords(&basis, &commutator(&mats[i], &mats[j]));
            for (k, x) in coords.into_iter().enumerate() {
                if x != 0 {
                    c[i][j][k] = Scalar::from_int(field, x);
                }
            }
        }
    }
    LieAlgebra::new(format!("sl{n}"), field, c, Some(sl_basis_names(n)))
        .expect("sl_n structure constants are valid")
        .with_realization(Realization::SpecialLinear(n))
}

/// `sl_2` with basis `e, h, f`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2(field: CycloField) -> LieAlgebra {
    sl(field, 2)
}

pub fn sl3(field: CycloField) -> LieAlgebra {
    sl(field, 3)
}

pub fn abelian(field: CycloField, d: usize) -> LieAlgebra {
    let c = vec![vec![vec![Scalar::zero(field); d]; d]; d];
    LieAlgebra::new(format!("abelian{d}"), field, c, None)
        .expect("zero bracket is a Lie algebra")
        .with_realization(Realization::Abelian)
}

/// Direct sum; basis names get a `#k` suffix for the k-th summand (1-based).
pub fn direct_sum(parts: &[LieAlgebra]) -> LieAlgebra {
    let field = parts.first().map_or(CycloField::rationals(), LieAlgebra::field);
    let d: usize = parts.iter().map(LieAlgebra::dim).sum();
    let mut c = vec![vec![vec![Scalar::zero(field); d]; d]; d];
    let mut names = Vec::with_capacity(d);
    let mut offset = 0;
    for (idx, p) in parts.iter().enumerate() {
        for i in 0..p.dim() {
            for j in 0..p.dim() {
                for k in 0..p.dim() {
                    c[offset + i][offset + j][offset + k] = p.c(i, j, k).clone();
                }
            }
            names.push(format!("{}#{}", p.basis_names()[i], idx + 1));
        }
        offset += p.dim();
    }
    let name = parts.iter().map(LieAlgebra::name).collect::<Vec<_>>().join("+");
    let realization = Realization::DirectSum(parts.iter().map(|p| p.realization().clone()).collect());
    LieAlgebra::new(name, field, c, Some(names))
        .expect("direct sum of Lie algebras is a Lie algebra")
        .with_realization(realization)
}
