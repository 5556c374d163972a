use super::LieAlgebra;
use crate::exactnum::{sparse_from_pairs, ExactMatrix, Scalar, SparseEchelon, SparseRow};

/// `K(x, y) = tr(ad x ∘ ad y)` on basis vectors.
pub fn killing_form(g: &LieAlgebra) -> ExactMatrix {
    let d = g.dim();
    let ads: Vec<ExactMatrix> = (0..d).map(|i| g.ad(&g.unit(i))).collect();
    let mut k = ExactMatrix::zeros(g.field(), d, d);
    for i in 0..d {
        for j in i..d {
            let prod = ads[i].mul(&ads[j]);
            let mut tr = Scalar::zero(g.field());
            for t in 0..d {
                tr += &prod[(t, t)];
            }
            k[(j, i)] = tr.clone();
            k[(i, j)] = tr;
        }
    }
    k
}

/// Canonical basis of `der(g)`: the solution space of
/// `D[x,y] = [Dx,y] + [x,Dy]` in the `d^2` unknowns `D[l][i]`.
/// Matrices act on column vectors (`D e_i = sum_l D[l][i] e_l`).
pub fn derivations(g: &LieAlgebra) -> Vec<ExactMatrix> {
    let d = g.dim();
    let var = |l: usize, i: usize| l * d + i;
    let mut ech = SparseEchelon::new(g.field(), d * d);
    for i in 0..d {
        for j in (i + 1)..d {
            for k in 0..d {
                let mut pairs: Vec<(usize, Scalar)> = Vec::new();
                for p in 0..d {
                    let c = g.c(i, j, p);
                    if !c.is_zero() {
                        pairs.push((var(k, p), c.clone()));
                    }
                }
                for l in 0..d {
                    let c = g.c(l, j, k);
                    if !c.is_zero() {
                        pairs.push((var(l, i), -c));
                    }
                    let c = g.c(i, l, k);
                    if !c.is_zero() {
                        pairs.push((var(l, j), -c));
                    }
                }
                ech.insert(sparse_from_pairs(pairs));
            }
        }
    }
    ech.nullspace()
        .into_iter()
        .map(|v| {
            let rows = v.chunks(d).map(<[Scalar]>::to_vec).collect();
            ExactMatrix::from_rows(g.field(), rows).expect("square chunks")
        })
        .collect()
}

/// `V(g) = Sym²(g) / der(g)·Sym²(g)` together with the universal invariant
/// form `κ(x, y) = [x ⊗_s y]`.
///
/// `Sym²(g)` has basis `e_i ⊗_s e_j`, `i <= j`, ordered lexicographically.
/// Coordinates on `V(g)` are the non-pivot columns of the reduced echelon
/// form of the derivation image; projecting a symmetric tensor means
/// reducing it against that echelon form and reading off those columns.
#[derive(Clone, Debug)]
pub struct UniversalFormData {
    lie_dim: usize,
    image: SparseEchelon,
    /// Sym² indices that carry the coordinates of `V(g)`, in order.
    free: Vec<usize>,
    /// `κ(e_i, e_j)` in `V(g)` coordinates, indexed `[i * d + j]`.
    kappa: Vec<Vec<Scalar>>,
}

pub(crate) fn sym_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // rows before i contribute d + (d - 1) + ... + (d - i + 1) entries
    i * (2 * d + 1 - i) / 2 + (j - i)
}

pub fn universal_form(g: &LieAlgebra) -> UniversalFormData {
    let d = g.dim();
    let n = d * (d + 1) / 2;
    let mut image = SparseEchelon::new(g.field(), n);
    for der in derivations(g) {
        for i in 0..d {
            for j in i..d {
                // D(e_i ⊗ e_j) = D e_i ⊗ e_j + e_i ⊗ D e_j
                let mut pairs = Vec::new();
                for l in 0..d {
                    let a = &der[(l, i)];
                    if !a.is_zero() {
                        pairs.push((sym_index(d, l, j), a.clone()));
                    }
                    let b = &der[(l, j)];
                    if !b.is_zero() {
                        pairs.push((sym_index(d, i, l), b.clone()));
                    }
                }
                image.insert(sparse_from_pairs(pairs));
            }
        }
    }
    let pivots: std::collections::BTreeSet<usize> = image.pivots().collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut data = UniversalFormData { lie_dim: d, image, free, kappa: Vec::new() };
    let mut kappa = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let unit: SparseRow = vec![(sym_index(d, i, j), Scalar::one(g.field()))];
            kappa.push(data.project_sparse(&unit, g));
        }
    }
    data.kappa = kappa;
    data
}

impl UniversalFormData {
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn sym_dim(&self) -> usize {
        self.lie_dim * (self.lie_dim + 1) / 2
    }

    fn project_sparse(&self, v: &SparseRow, g: &LieAlgebra) -> Vec<Scalar> {
        let reduced = self.image.reduce(v);
        let mut out = vec![Scalar::zero(g.field()); self.free.len()];
        for (c, val) in reduced {
            let pos = self.free.binary_search(&c).expect("reduced vector lives on free columns");
            out[pos] = val;
        }
        out
    }

    /// Project a dense `Sym²(g)` vector to `V(g)` coordinates.
    pub fn project(&self, g: &LieAlgebra, sym: &[Scalar]) -> Vec<Scalar> {
        let sparse: SparseRow =
            sym.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone())).collect();
        self.project_sparse(&sparse, g)
    }

    /// The projection as a `dim V × dim Sym²` matrix.
    pub fn projection_matrix(&self, g: &LieAlgebra) -> ExactMatrix {
        let n = self.sym_dim();
        let mut m = ExactMatrix::zeros(g.field(), self.dim(), n);
        for c in 0..n {
            let col = self.project_sparse(&vec![(c, Scalar::one(g.field()))], g);
            for (r, v) in col.into_iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        m
    }

    /// `κ(e_i, e_j)`.
    pub fn kappa_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.kappa[i * self.lie_dim + j]
    }

    /// `κ(x, y)` for coordinate vectors.
    pub fn kappa(&self, g: &LieAlgebra, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(g.field()); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let w = xi * yj;
                for (o, k) in out.iter_mut().zip(self.kappa_basis(i, j)) {
                    if !k.is_zero() {
                        *o += &(&w * k);
                    }
                }
            }
        }
        out
    }

    /// Matrix of the action induced on `V(g)` by a linear map `a` of `g`
    /// (columns are images of the `V(g)` coordinate vectors).
    pub fn induced_action(&self, g: &LieAlgebra, a: &ExactMatrix) -> ExactMatrix {
        let d = self.lie_dim;
        let mut m = ExactMatrix::zeros(g.field(), self.dim(), self.dim());
        for (col, &s) in self.free.iter().enumerate() {
            let (i, j) = sym_pair(d, s);
            let img = self.kappa(g, &a.column(i), &a.column(j));
            for (r, v) in img.into_iter().enumerate() {
                m[(r, col)] = v;
            }
        }
        m
    }
}

pub(crate) fn sym_pair(d: usize, idx: usize) -> (usize, usize) {
    let mut rest = idx;
    for i in 0..d {
        let row = d - i;
        if rest < row {
            return (i, i + rest);
        }
        rest -= row;
    }
    panic!("Sym² index {idx} out of range for dimension {d}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::CycloField;
    use crate::liealg::{abelian, direct_sum, sl2, sl3};

    fn q() -> CycloField {
        CycloField::rationals()
    }

    #[test]
    fn sym_index_roundtrip() {
        for d in 1..6 {
            let mut expected = 0;
            for i in 0..d {
                for j in i..d {
                    assert_eq!(sym_index(d, i, j), expected);
                    assert_eq!(sym_index(d, j, i), expected);
                    assert_eq!(sym_pair(d, expected), (i, j));
                    expected += 1;
                }
            }
        }
    }

    #[test]
    fn sl2_killing_values() {
        let k = killing_form(&sl2(q()));
        assert_eq!(k[(1, 1)], Scalar::from_int(q(), 8));
        assert_eq!(k[(0, 2)], Scalar::from_int(q(), 4));
        assert_eq!(k[(0, 0)], Scalar::zero(q()));
    }

    #[test]
    fn abelian_killing_zero() {
        assert!(killing_form(&abelian(q(), 3)).is_zero());
    }

    #[test]
    fn derivation_dimensions() {
        assert_eq!(derivations(&sl2(q())).len(), 3);
        assert_eq!(derivations(&abelian(q(), 2)).len(), 4);
        assert_eq!(derivations(&direct_sum(&[sl2(q()), sl2(q())])).len(), 6);
    }

    #[test]
    fn universal_form_dimensions() {
        assert_eq!(universal_form(&sl2(q())).dim(), 1);
        assert_eq!(universal_form(&sl3(q())).dim(), 1);
        assert_eq!(universal_form(&abelian(q(), 1)).dim(), 0);
        assert_eq!(universal_form(&direct_sum(&[sl2(q()), sl2(q())])).dim(), 2);
    }

    #[test]
    fn kappa_ratio_matches_killing() {
        let g = sl2(q());
        let u = universal_form(&g);
        let hh = &u.kappa_basis(1, 1)[0];
        let ef = &u.kappa_basis(0, 2)[0];
        assert_eq!(hh / ef, Scalar::from_int(q(), 2));
    }
}
