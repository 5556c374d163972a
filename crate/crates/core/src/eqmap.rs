//! The twisted multiloop algebra `(C[t1^±1, ..., tn^±1] ⊗ g)^Δ` for
//! `Δ = ∏ Z/r_k` acting on `t_k` by roots of unity and on `g` through
//! commuting finite-order automorphisms `σ_k`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactnum::{is_zero_vec, sparse_from_pairs, CycloField, ExactMatrix, Scalar, SparseEchelon};
use crate::laurent::{DegreeCap, Multidegree, TorusAction};
use crate::liealg::{format_term, join_terms, universal_form, FiniteAutomorphism, LieAlgebra, UniversalFormData};

/// Joint eigenspace `g_m̄ = {x : σ_k x = ζ_{r_k}^{-m_k} x for all k}`.
///
/// The basis is the canonical nullspace basis: vector `j` has a 1 at
/// `free[j]` and zeros at the other free columns, so the coordinates of a
/// member `x` are just `x[free[j]]`.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub residue: Vec<u32>,
    pub basis: Vec<Vec<Scalar>>,
    free: Vec<usize>,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_ambient(&self, coords: &[Scalar], field: CycloField, d: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(field); d];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o += &(c * x);
                }
            }
        }
        out
    }

    /// Coordinates of `x`, or `None` when `x` is not in this piece.
    pub fn coords_of(&self, x: &[Scalar], field: CycloField) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.free.iter().map(|&f| x[f].clone()).collect();
        if self.to_ambient(&coords, field, x.len()) == x {
            Some(coords)
        } else {
            None
        }
    }
}

#[derive(Debug)]
pub struct MultiloopAlgebra {
    algebra: LieAlgebra,
    action: TorusAction,
    automorphisms: Vec<FiniteAutomorphism>,
    cap: DegreeCap,
    pieces: Vec<GradedPiece>,
    uform: UniversalFormData,
    /// Induced action of each `σ_k` on `V(g)`.
    v_actions: Vec<ExactMatrix>,
    /// `[b_i, b_j]` in coordinates of piece `p + q`, indexed `[p][q][i * dim q + j]`.
    brackets: Vec<Vec<Vec<Vec<Scalar>>>>,
    /// `κ(b_i, b_j)` in `V(g)` coordinates, same indexing.
    kappas: Vec<Vec<Vec<Vec<Scalar>>>>,
}

impl MultiloopAlgebra {
    /// Validate the data and compute all graded pieces and bracket tables.
    pub fn build(
        algebra: LieAlgebra,
        action: TorusAction,
        automorphisms: Vec<FiniteAutomorphism>,
        cap: DegreeCap,
    ) -> Result<Self> {
        let n = action.n();
        let field = algebra.field();
        let d = algebra.dim();
        if automorphisms.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} automorphisms for {n} torus generators",
                automorphisms.len()
            )));
        }
        if !field.order().is_multiple_of(action.field_order()) {
            return Err(Error::OrderMismatch(format!(
                "field order {} does not contain the {}-th roots of unity",
                field.order(),
                action.field_order()
            )));
        }
        for (k, s) in automorphisms.iter().enumerate() {
            // re-validate against this algebra: catches matrices built for another one
            FiniteAutomorphism::new(&algebra, s.matrix().clone(), s.order())?;
            if !action.orders()[k].is_multiple_of(s.order()) {
                return Err(Error::OrderMismatch(format!(
                    "σ_{} has order {}, which does not divide r_{} = {}",
                    k + 1,
                    s.order(),
                    k + 1,
                    action.orders()[k]
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (automorphisms[i].matrix(), automorphisms[j].matrix());
                if a.mul(b) != b.mul(a) {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }

        let residues: Vec<Vec<u32>> = action
            .elements()
            .into_iter()
            .map(|e| e.into_iter().map(|x| x as u32).collect())
            .collect();
        let mut pieces = Vec::with_capacity(residues.len());
        for res in &residues {
            pieces.push(joint_eigenspace(&algebra, &action, &automorphisms, res)?);
        }
        let total: usize = pieces.iter().map(GradedPiece::dim).sum();
        if total != d {
            return Err(Error::OrderMismatch(format!("joint eigenspaces span {total} of {d} dimensions")));
        }

        let uform = universal_form(&algebra);
        let v_actions = automorphisms.iter().map(|s| uform.induced_action(&algebra, s.matrix())).collect();

        let mut m = MultiloopAlgebra {
            algebra,
            action,
            automorphisms,
            cap,
            pieces,
            uform,
            v_actions,
            brackets: Vec::new(),
            kappas: Vec::new(),
        };
        m.build_tables()?;
        Ok(m)
    }

    fn build_tables(&mut self) -> Result<()> {
        let g = &self.algebra;
        let field = g.field();
        let d = g.dim();
        let np = self.pieces.len();
        let mut brackets = Vec::with_capacity(np);
        let mut kappas = Vec::with_capacity(np);
        for p in 0..np {
            let mut brow = Vec::with_capacity(np);
            let mut krow = Vec::with_capacity(np);
            for q in 0..np {
                let target = self.sum_index(p, q);
                let (bp, bq) = (&self.pieces[p], &self.pieces[q]);
                let mut bt = Vec::with_capacity(bp.dim() * bq.dim());
                let mut kt = Vec::with_capacity(bp.dim() * bq.dim());
                for x in &bp.basis {
                    for y in &bq.basis {
                        let z = g.bracket(x, y);
                        let coords = self.pieces[target].coords_of(&z, field).ok_or_else(|| {
                            let mut r = bp.residue.iter().map(|&v| v as i64).collect::<Vec<_>>();
                            r.extend(bq.residue.iter().map(|&v| v as i64));
                            Error::GradingViolation(r)
                        })?;
                        debug_assert_eq!(self.pieces[target].to_ambient(&coords, field, d), z);
                        bt.push(coords);
                        kt.push(self.uform.kappa(g, x, y));
                    }
                }
                brow.push(bt);
                krow.push(kt);
            }
            brackets.push(brow);
            kappas.push(krow);
        }
        self.brackets = brackets;
        self.kappas = kappas;
        Ok(())
    }

    fn index_of_residue(&self, res: &[u32]) -> usize {
        let mut idx = 0usize;
        for (&r, &x) in self.action.orders().iter().zip(res) {
            idx = idx * r as usize + x as usize;
        }
        idx
    }

    fn sum_index(&self, p: usize, q: usize) -> usize {
        let res: Vec<u32> = self.pieces[p]
            .residue
            .iter()
            .zip(&self.pieces[q].residue)
            .zip(self.action.orders())
            .map(|((a, b), r)| (a + b) % r)
            .collect();
        self.index_of_residue(&res)
    }

    /// Index of the graded piece containing degree `a`.
    pub fn piece_index(&self, a: &Multidegree) -> usize {
        self.index_of_residue(&self.action.residue(a))
    }

    pub fn piece(&self, a: &Multidegree) -> &GradedPiece {
        &self.pieces[self.piece_index(a)]
    }

    pub fn pieces(&self) -> &[GradedPiece] {
        &self.pieces
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn action(&self) -> &TorusAction {
        &self.action
    }

    pub fn automorphisms(&self) -> &[FiniteAutomorphism] {
        &self.automorphisms
    }

    pub fn field(&self) -> CycloField {
        self.algebra.field()
    }

    pub fn n(&self) -> usize {
        self.action.n()
    }

    pub fn cap(&self) -> DegreeCap {
        self.cap
    }

    pub fn universal_form(&self) -> &UniversalFormData {
        &self.uform
    }

    pub fn v_dim(&self) -> usize {
        self.uform.dim()
    }

    /// Dimension of the degree-`a` slice.
    pub fn slice_dim(&self, a: &Multidegree) -> usize {
        self.piece(a).dim()
    }

    /// `[b_i, b_j]` for `b_i` in piece `p` and `b_j` in piece `q`, in
    /// coordinates of piece `p + q`.
    pub fn bracket_coords(&self, p: usize, q: usize, i: usize, j: usize) -> &[Scalar] {
        &self.brackets[p][q][i * self.pieces[q].dim() + j]
    }

    /// `κ(b_i, b_j)` in `V(g)` coordinates.
    pub fn kappa_coords(&self, p: usize, q: usize, i: usize, j: usize) -> &[Scalar] {
        &self.kappas[p][q][i * self.pieces[q].dim() + j]
    }

    /// Basis of `{v in V(g) : σ_k v = ζ_{r_k}^{-w_k} v for all k}`, the
    /// part of `V(g)` that pairs with weight `w` into a Δ-invariant.
    pub fn v_invariants(&self, w: &Multidegree) -> Vec<Vec<Scalar>> {
        let field = self.field();
        let vd = self.v_dim();
        let mut ech = SparseEchelon::new(field, vd);
        for (k, (va, &r)) in self.v_actions.iter().zip(self.action.orders()).enumerate() {
            let lambda = Scalar::root_of_unity(field, -w.0[k], r).expect("field order checked at build");
            let m = va.sub(&ExactMatrix::identity(field, vd).scale(&lambda));
            for i in 0..vd {
                ech.insert(sparse_from_pairs(m.row(i).iter().cloned().enumerate()));
            }
        }
        ech.nullspace()
    }
}

fn joint_eigenspace(
    g: &LieAlgebra,
    action: &TorusAction,
    automorphisms: &[FiniteAutomorphism],
    residue: &[u32],
) -> Result<GradedPiece> {
    let field = g.field();
    let d = g.dim();
    let mut ech = SparseEchelon::new(field, d);
    for ((s, &r), &m) in automorphisms.iter().zip(action.orders()).zip(residue) {
        let lambda = Scalar::root_of_unity(field, -(m as i64), r)?;
        let a = s.matrix().sub(&ExactMatrix::identity(field, d).scale(&lambda));
        for i in 0..d {
            ech.insert(sparse_from_pairs(a.row(i).iter().cloned().enumerate()));
        }
    }
    let pivots: std::collections::BTreeSet<usize> = ech.pivots().collect();
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    Ok(GradedPiece { residue: residue.to_vec(), basis: ech.nullspace(), free })
}

pub fn build_multiloop(
    algebra: LieAlgebra,
    action: TorusAction,
    automorphisms: Vec<FiniteAutomorphism>,
    cap: DegreeCap,
) -> Result<Arc<MultiloopAlgebra>> {
    MultiloopAlgebra::build(algebra, action, automorphisms, cap).map(Arc::new)
}

/// `{t^a ⊗ v : v in the basis of g_ā}`.
pub fn graded_component(m: &Arc<MultiloopAlgebra>, a: &Multidegree) -> Vec<EqMapElement> {
    let dim = m.slice_dim(a);
    (0..dim)
        .map(|i| {
            let mut coords = vec![Scalar::zero(m.field()); dim];
            coords[i] = Scalar::one(m.field());
            EqMapElement::term(m, a.clone(), coords).expect("coordinates have the slice dimension")
        })
        .collect()
}

/// A finite sum `Σ t^a ⊗ x_a` stored as eigenspace coordinates per degree.
#[derive(Clone)]
pub struct EqMapElement {
    parent: Arc<MultiloopAlgebra>,
    terms: BTreeMap<Multidegree, Vec<Scalar>>,
}

impl EqMapElement {
    pub fn zero(parent: &Arc<MultiloopAlgebra>) -> Self {
        EqMapElement { parent: Arc::clone(parent), terms: BTreeMap::new() }
    }

    /// `t^a ⊗ Σ coords_i b_i`.
    pub fn term(parent: &Arc<MultiloopAlgebra>, a: Multidegree, coords: Vec<Scalar>) -> Result<Self> {
        if a.n() != parent.n() {
            return Err(Error::DimensionMismatch(format!("degree {a} for n = {}", parent.n())));
        }
        parent.cap.check(&a)?;
        let dim = parent.slice_dim(&a);
        if coords.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a slice of dimension {dim}",
                coords.len()
            )));
        }
        let mut e = EqMapElement::zero(parent);
        e.add_coords(a, &coords);
        Ok(e)
    }

    /// `t^a ⊗ x` for an ambient vector `x`, which must lie in `g_ā`.
    pub fn from_ambient(parent: &Arc<MultiloopAlgebra>, a: Multidegree, x: &[Scalar]) -> Result<Self> {
        if x.len() != parent.algebra.dim() {
            return Err(Error::DimensionMismatch(format!("vector of length {}", x.len())));
        }
        let coords = parent.piece(&a).coords_of(x, parent.field()).ok_or_else(|| Error::NotInvariant(a.0.clone()))?;
        Self::term(parent, a, coords)
    }

    pub fn parent(&self) -> &Arc<MultiloopAlgebra> {
        &self.parent
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &Vec<Scalar>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_coords(&mut self, a: Multidegree, coords: &[Scalar]) {
        if is_zero_vec(coords) {
            return;
        }
        let field = self.parent.field();
        let dim = coords.len();
        let entry = self.terms.entry(a.clone()).or_insert_with(|| vec![Scalar::zero(field); dim]);
        for (e, c) in entry.iter_mut().zip(coords) {
            *e += c;
        }
        if is_zero_vec(entry) {
            self.terms.remove(&a);
        }
    }

    fn same_parent(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.parent, &other.parent) {
            Ok(())
        } else {
            Err(Error::MixedParents)
        }
    }

    /// Ambient `g`-coordinates per degree.
    pub fn to_ambient(&self) -> BTreeMap<Multidegree, Vec<Scalar>> {
        let d = self.parent.algebra.dim();
        let field = self.parent.field();
        self.terms
            .iter()
            .map(|(a, c)| (a.clone(), self.parent.piece(a).to_ambient(c, field, d)))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_coords(a.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = EqMapElement::zero(&self.parent);
        for (a, c) in &self.terms {
            let v: Vec<Scalar> = c.iter().map(|x| x * s).collect();
            out.add_coords(a.clone(), &v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Scalar::one(self.parent.field())))
    }

    /// `[t^a ⊗ x, t^b ⊗ y] = t^(a+b) ⊗ [x, y]`, extended bilinearly.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        self.same_parent(other)?;
        let m = &self.parent;
        let mut out = EqMapElement::zero(m);
        for (a, x) in &self.terms {
            let p = m.piece_index(a);
            for (b, y) in &other.terms {
                let q = m.piece_index(b);
                let deg = a + b;
                m.cap.check(&deg)?;
                let r = m.sum_index(p, q);
                let mut acc = vec![Scalar::zero(m.field()); m.pieces[r].dim()];
                for (i, xi) in x.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if yj.is_zero() {
                            continue;
                        }
                        let w = xi * yj;
                        for (o, c) in acc.iter_mut().zip(m.bracket_coords(p, q, i, j)) {
                            if !c.is_zero() {
                                *o += &(&w * c);
                            }
                        }
                    }
                }
                out.add_coords(deg, &acc);
            }
        }
        Ok(out)
    }
}

impl PartialEq for EqMapElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.terms == other.terms
    }
}

impl fmt::Display for EqMapElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.parent.algebra.basis_names();
        let mut parts = Vec::new();
        for (a, x) in self.to_ambient() {
            for (i, c) in x.iter().enumerate() {
                if !c.is_zero() {
                    parts.push(format_term(c, &format!("t^{a}⊗{}", names[i])));
                }
            }
        }
        write!(f, "{}", join_terms(&parts))
    }
}

impl fmt::Debug for EqMapElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Random sparse element: `terms` monomials with degrees in
/// `[-max_degree, max_degree]^n` and small integer coordinates.
pub fn random_element<R: Rng>(
    parent: &Arc<MultiloopAlgebra>,
    rng: &mut R,
    terms: usize,
    max_degree: i64,
) -> EqMapElement {
    let field = parent.field();
    let mut out = EqMapElement::zero(parent);
    for _ in 0..terms {
        let a = Multidegree((0..parent.n()).map(|_| rng.gen_range(-max_degree..=max_degree)).collect());
        let dim = parent.slice_dim(&a);
        if dim == 0 {
            continue;
        }
        let coords: Vec<Scalar> = (0..dim).map(|_| Scalar::from_int(field, rng.gen_range(-3..=3))).collect();
        out.add_coords(a, &coords);
    }
    out
}
