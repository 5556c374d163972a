//! The universal cocycle `ω(ξ, η) = [κ(ξ, dη)]` with values in
//! `Ω¹ / dΩ⁰ ⊗ V(g)`, its defining identities, and factorization of
//! cochains through it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cohomology::CochainMatrix;
use crate::error::{Error, Result};
use crate::exactnum::{is_zero_vec, CycloField, ExactMatrix, Scalar, Solution};
use crate::eqmap::{EqMapElement, MultiloopAlgebra};
use crate::laurent::{omegabar_weight_dim, Multidegree, OneFormClass};
use crate::liealg::{format_term, join_terms};

/// A finitely supported value in `Ω̄¹ ⊗ V(g)`. At weight `m` the
/// coordinate of `[class coord i] ⊗ [V coord v]` sits at `i * dim V + v`.
/// Zero weights are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct CocycleValue {
    n: usize,
    v_dim: usize,
    field: CycloField,
    weights: BTreeMap<Multidegree, Vec<Scalar>>,
}

impl CocycleValue {
    pub fn zero(n: usize, v_dim: usize, field: CycloField) -> Self {
        CocycleValue { n, v_dim, field, weights: BTreeMap::new() }
    }

    fn zero_like(m: &MultiloopAlgebra) -> Self {
        Self::zero(m.n(), m.v_dim(), m.field())
    }

    pub fn v_dim(&self) -> usize {
        self.v_dim
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = (&Multidegree, &Vec<Scalar>)> {
        self.weights.iter()
    }

    /// Coordinates at weight `m` (zeros if absent).
    pub fn at(&self, m: &Multidegree) -> Vec<Scalar> {
        self.weights.get(m).cloned().unwrap_or_else(|| {
            vec![Scalar::zero(self.field); omegabar_weight_dim(self.n, m) * self.v_dim]
        })
    }

    pub(crate) fn add_at(&mut self, m: &Multidegree, coords: &[Scalar]) {
        if is_zero_vec(coords) {
            return;
        }
        let field = self.field;
        let entry = self
            .weights
            .entry(m.clone())
            .or_insert_with(|| vec![Scalar::zero(field); coords.len()]);
        for (e, c) in entry.iter_mut().zip(coords) {
            *e += c;
        }
        if is_zero_vec(entry) {
            self.weights.remove(m);
        }
    }

    pub fn add(&self, other: &CocycleValue) -> CocycleValue {
        let mut out = self.clone();
        for (m, c) in &other.weights {
            out.add_at(m, c);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> CocycleValue {
        let mut out = CocycleValue::zero(self.n, self.v_dim, self.field);
        for (m, c) in &self.weights {
            let v: Vec<Scalar> = c.iter().map(|x| x * s).collect();
            out.add_at(m, &v);
        }
        out
    }

    fn v_label(&self, v: usize) -> String {
        if self.v_dim == 1 {
            "κ-class".into()
        } else {
            format!("κ-class{}", v + 1)
        }
    }
}

impl fmt::Display for CocycleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weights.is_empty() {
            return write!(f, "0");
        }
        let mut lines = Vec::new();
        for (m, c) in &self.weights {
            let class = OneFormClass::zero(m.clone(), self.field);
            let parts: Vec<String> = c
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(idx, x)| {
                    let (i, v) = (idx / self.v_dim, idx % self.v_dim);
                    format!("{}⊗{} * ({})", class.coord_label(i), self.v_label(v), x)
                })
                .collect();
            lines.push(format!("weight {m}: {}", parts.join(" + ")));
        }
        write!(f, "{}", lines.join("\n"))
    }
}

impl fmt::Debug for CocycleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `ω(t^a ⊗ b_i, t^b ⊗ b_j)` at weight `a + b`, in `Ω̄¹ ⊗ V` coordinates.
pub fn omega_basis(m: &MultiloopAlgebra, a: &Multidegree, i: usize, b: &Multidegree, j: usize) -> Vec<Scalar> {
    let field = m.field();
    let (p, q) = (m.piece_index(a), m.piece_index(b));
    let kappa = m.kappa_coords(p, q, i, j);
    let w = a + b;
    let bvec: Vec<Scalar> = b.as_slice().iter().map(|&x| Scalar::from_int(field, x)).collect();
    let class = OneFormClass::from_vector(w, &bvec, field);
    tensor(class.coords(), kappa)
}

fn tensor(class: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(class.len() * v.len());
    for c in class {
        for x in v {
            out.push(c * x);
        }
    }
    out
}

fn check_parents(x: &EqMapElement, y: &EqMapElement) -> Result<()> {
    if Arc::ptr_eq(x.parent(), y.parent()) {
        Ok(())
    } else {
        Err(Error::MixedParents)
    }
}

/// `Σ x_i y_j κ(b_i, b_j)` for coordinate vectors in pieces `p` and `q`.
fn kappa_sum(m: &MultiloopAlgebra, p: usize, q: usize, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(m.field()); m.v_dim()];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let w = xi * yj;
            for (o, k) in out.iter_mut().zip(m.kappa_coords(p, q, i, j)) {
                if !k.is_zero() {
                    *o += &(&w * k);
                }
            }
        }
    }
    out
}

/// `ω(ξ, η) = [κ(ξ, dη)]`, bilinear over the terms of both arguments.
pub fn omega_alg(xi: &EqMapElement, eta: &EqMapElement) -> Result<CocycleValue> {
    check_parents(xi, eta)?;
    let m = xi.parent();
    let field = m.field();
    let mut out = CocycleValue::zero_like(m);
    for (a, x) in xi.terms() {
        let p = m.piece_index(a);
        for (b, y) in eta.terms() {
            let q = m.piece_index(b);
            let kappa = kappa_sum(m, p, q, x, y);
            if is_zero_vec(&kappa) {
                continue;
            }
            let w = a + b;
            let bvec: Vec<Scalar> = b.as_slice().iter().map(|&v| Scalar::from_int(field, v)).collect();
            let class = OneFormClass::from_vector(w.clone(), &bvec, field);
            out.add_at(&w, &tensor(class.coords(), &kappa));
        }
    }
    Ok(out)
}

/// A `V(g)`-valued one-form `Σ t^a λ_k ⊗ v`, stored per weight with the
/// coordinate of `λ_k ⊗ [V coord v]` at `k * dim V + v`.
#[derive(Clone, PartialEq, Eq)]
pub struct VOneForm {
    n: usize,
    v_dim: usize,
    field: CycloField,
    weights: BTreeMap<Multidegree, Vec<Scalar>>,
}

impl VOneForm {
    fn zero_like(m: &MultiloopAlgebra) -> Self {
        VOneForm { n: m.n(), v_dim: m.v_dim(), field: m.field(), weights: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> impl Iterator<Item = (&Multidegree, &Vec<Scalar>)> {
        self.weights.iter()
    }

    /// Add `t^w (Σ_k f_k λ_k) ⊗ v`.
    fn add_term(&mut self, w: &Multidegree, f: &[Scalar], v: &[Scalar], sign: i64) {
        let coords: Vec<Scalar> =
            tensor(f, v).into_iter().map(|x| x * Scalar::from_int(self.field, sign)).collect();
        if is_zero_vec(&coords) {
            return;
        }
        let field = self.field;
        let entry = self.weights.entry(w.clone()).or_insert_with(|| vec![Scalar::zero(field); coords.len()]);
        for (e, c) in entry.iter_mut().zip(&coords) {
            *e += c;
        }
        if is_zero_vec(entry) {
            self.weights.remove(w);
        }
    }
}

impl fmt::Display for VOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (w, c) in &self.weights {
            for (idx, x) in c.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let (k, v) = (idx / self.v_dim, idx % self.v_dim);
                let l = if self.n == 1 { "L".to_string() } else { format!("L{}", k + 1) };
                parts.push(format_term(x, &format!("t^{w}*{l}⊗v{}", v + 1)));
            }
        }
        write!(f, "{}", join_terms(&parts))
    }
}

impl fmt::Debug for VOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn int_vec(field: CycloField, a: &Multidegree) -> Vec<Scalar> {
    a.as_slice().iter().map(|&x| Scalar::from_int(field, x)).collect()
}

/// `κ(ξ, dη)` in `Ω¹ ⊗ V` before any quotient.
pub fn kappa_d(xi: &EqMapElement, eta: &EqMapElement) -> Result<VOneForm> {
    check_parents(xi, eta)?;
    let m = xi.parent();
    let mut out = VOneForm::zero_like(m);
    for (a, x) in xi.terms() {
        let p = m.piece_index(a);
        for (b, y) in eta.terms() {
            let q = m.piece_index(b);
            let kappa = kappa_sum(m, p, q, x, y);
            out.add_term(&(a + b), &int_vec(m.field(), b), &kappa, 1);
        }
    }
    Ok(out)
}

/// `κ(ξ, dη) + κ(η, dξ) - dκ(ξ, η)` in `Ω¹ ⊗ V`; identically zero.
pub fn antisymmetry_witness(xi: &EqMapElement, eta: &EqMapElement) -> Result<VOneForm> {
    check_parents(xi, eta)?;
    let m = xi.parent();
    let field = m.field();
    let mut out = VOneForm::zero_like(m);
    for (a, x) in xi.terms() {
        let p = m.piece_index(a);
        for (b, y) in eta.terms() {
            let q = m.piece_index(b);
            let w = a + b;
            let kxy = kappa_sum(m, p, q, x, y);
            let kyx = kappa_sum(m, q, p, y, x);
            out.add_term(&w, &int_vec(field, b), &kxy, 1);
            out.add_term(&w, &int_vec(field, a), &kyx, 1);
            out.add_term(&w, &int_vec(field, &w), &kxy, -1);
        }
    }
    Ok(out)
}

/// `ω([ξ,η],ζ) + ω([η,ζ],ξ) + ω([ζ,ξ],η)`; identically zero.
pub fn cocycle_defect(xi: &EqMapElement, eta: &EqMapElement, zeta: &EqMapElement) -> Result<CocycleValue> {
    check_parents(xi, eta)?;
    check_parents(eta, zeta)?;
    let a = omega_alg(&xi.bracket(eta)?, zeta)?;
    let b = omega_alg(&eta.bracket(zeta)?, xi)?;
    let c = omega_alg(&zeta.bracket(xi)?, eta)?;
    Ok(a.add(&b).add(&c))
}

/// Check that an unreduced `V`-valued form is fixed by every generator of Δ:
/// `δ_k` multiplies `t^w` by `ζ_{r_k}^{w_k}` and acts on `V` through `σ_k`.
/// Returns the first weight where invariance fails.
pub fn check_equivariance(m: &MultiloopAlgebra, form: &VOneForm) -> Result<()> {
    let field = m.field();
    let vd = m.v_dim();
    for (w, coords) in form.weights() {
        let inv = m.v_invariants(w);
        for k in 0..m.n() {
            // each λ_k-block must lie in the V-subspace compatible with t^w
            let block: Vec<Scalar> = coords[k * vd..(k + 1) * vd].to_vec();
            if is_zero_vec(&block) {
                continue;
            }
            let mut cols: Vec<Vec<Scalar>> = inv.clone();
            cols.push(block.clone());
            let rank_with = ExactMatrix::from_rows(field, cols).map(|mm| mm.rank()).unwrap_or(0);
            if rank_with != inv.len() {
                return Err(Error::NotInvariant(w.0.clone()));
            }
        }
    }
    Ok(())
}

/// `φ` on the weight-`w` component of `Ω̄¹ ⊗ V`, in the coordinates of
/// [`CocycleValue`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFunctional {
    pub weight: Multidegree,
    pub coeffs: Vec<Scalar>,
}

impl LinearFunctional {
    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    pub fn apply(&self, value: &CocycleValue) -> Scalar {
        let v = value.at(&self.weight);
        let mut acc = Scalar::zero(value.field);
        for (c, x) in self.coeffs.iter().zip(&v) {
            acc += &(c * x);
        }
        acc
    }
}

impl fmt::Display for LinearFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "weight {}: [{}]", self.weight, parts.join(", "))
    }
}

/// `ψ = φ ∘ ω + b ∘ [·,·]` on the window.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub phi: LinearFunctional,
    /// Functional on the weight-`w` slice, in eigenspace coordinates.
    pub b: Vec<Scalar>,
}

/// Solve `ψ(x, y) = φ(ω(x, y)) + b([x, y])` over all basis pairs of the
/// window of `psi`.
pub fn factorize(m: &MultiloopAlgebra, psi: &CochainMatrix) -> Result<Factorization> {
    let w = psi.weight().clone();
    let cutoff = psi.cutoff();
    if !psi.is_cocycle(m) {
        return Err(Error::NotACocycle { weight: w.0.clone(), cutoff });
    }
    let field = m.field();
    let odim = omegabar_weight_dim(m.n(), &w) * m.v_dim();
    let sdim = m.slice_dim(&w);
    let r = m.piece_index(&w);
    let pairs = psi.pairs();
    let mut rows = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        let mut row = omega_basis(m, &x.degree, x.index, &y.degree, y.index);
        debug_assert_eq!(row.len(), odim);
        let (p, q) = (m.piece_index(&x.degree), m.piece_index(&y.degree));
        debug_assert_eq!(m.piece_index(&(&x.degree + &y.degree)), r);
        row.extend(m.bracket_coords(p, q, x.index, y.index).iter().cloned());
        debug_assert_eq!(row.len(), odim + sdim);
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(Factorization {
            phi: LinearFunctional { weight: w, coeffs: vec![Scalar::zero(field); odim] },
            b: vec![Scalar::zero(field); sdim],
        });
    }
    let a = ExactMatrix::from_rows(field, rows)?;
    match a.solve(psi.values())? {
        Solution::Inconsistent => Err(Error::Inconsistent { weight: w.0.clone(), cutoff }),
        Solution::Consistent { particular, .. } => {
            let b = particular[odim..].to_vec();
            let phi = LinearFunctional { weight: w, coeffs: particular[..odim].to_vec() };
            Ok(Factorization { phi, b })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqmap::build_multiloop;
    use crate::laurent::{DegreeCap, TorusAction};
    use crate::liealg::{sl2, FiniteAutomorphism};

    fn md(v: &[i64]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    fn untwisted_sl2() -> Arc<MultiloopAlgebra> {
        let g = sl2(CycloField::rationals());
        let id = FiniteAutomorphism::identity(&g);
        build_multiloop(g, TorusAction::trivial(1), vec![id], DegreeCap::default()).unwrap()
    }

    fn elt(m: &Arc<MultiloopAlgebra>, a: i64, i: usize) -> EqMapElement {
        EqMapElement::from_ambient(m, md(&[a]), &m.algebra().unit(i)).unwrap()
    }

    #[test]
    fn residue_example() {
        let m = untwisted_sl2();
        let v = omega_alg(&elt(&m, 1, 0), &elt(&m, -1, 2)).unwrap();
        let kef = m.universal_form().kappa_basis(0, 2)[0].clone();
        assert_eq!(v.at(&md(&[0])), vec![-kef.clone()]);
        assert_eq!(v.to_string(), format!("weight (0): [L]⊗κ-class * ({})", -kef));
    }

    #[test]
    fn nonzero_weight_vanishes() {
        let m = untwisted_sl2();
        assert!(omega_alg(&elt(&m, 2, 0), &elt(&m, 3, 2)).unwrap().is_zero());
    }

    #[test]
    fn self_pairing_vanishes() {
        let m = untwisted_sl2();
        let x = elt(&m, 2, 0).add(&elt(&m, -2, 2)).unwrap().add(&elt(&m, 0, 1)).unwrap();
        assert!(omega_alg(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn witness_and_defect_vanish() {
        let m = untwisted_sl2();
        let (x, y, z) = (elt(&m, 1, 0), elt(&m, -1, 2), elt(&m, 0, 1));
        assert!(antisymmetry_witness(&x, &y).unwrap().is_zero());
        assert!(antisymmetry_witness(&x, &x).unwrap().is_zero());
        assert!(cocycle_defect(&x, &y, &z).unwrap().is_zero());
        assert!(cocycle_defect(&x, &x, &z).unwrap().is_zero());
        check_equivariance(&m, &kappa_d(&x, &y).unwrap()).unwrap();
    }

    #[test]
    fn mixed_parents() {
        let a = untwisted_sl2();
        let b = untwisted_sl2();
        assert_eq!(omega_alg(&elt(&a, 0, 0), &elt(&b, 0, 2)).unwrap_err(), Error::MixedParents);
    }
}
