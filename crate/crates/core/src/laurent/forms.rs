use std::collections::BTreeMap;
use std::fmt;

use super::{DegreeCap, LaurentPoly, Multidegree, TorusAction};
use crate::error::{Error, Result};
use crate::exactnum::{CycloField, Scalar};
use crate::liealg::{format_term, join_terms};

/// `Σ c_{a,k} t^a λ_k` with `λ_k = t_k^-1 dt_k`. Each stored vector has
/// length `n` and at least one nonzero entry.
#[derive(Clone, PartialEq, Eq)]
pub struct OneForm {
    nvars: usize,
    field: CycloField,
    terms: BTreeMap<Multidegree, Vec<Scalar>>,
}

impl OneForm {
    pub fn zero(nvars: usize, field: CycloField) -> Self {
        OneForm { nvars, field, terms: BTreeMap::new() }
    }

    /// `c * t^a * λ_k`.
    pub fn term(a: Multidegree, k: usize, c: Scalar) -> Self {
        let mut w = OneForm::zero(a.n(), c.field());
        let mut v = vec![Scalar::zero(c.field()); a.n()];
        v[k] = c;
        w.add_vector(a, &v);
        w
    }

    /// `t^a * Σ_k v_k λ_k`.
    pub fn from_vector(a: Multidegree, v: Vec<Scalar>, field: CycloField) -> Self {
        let mut w = OneForm::zero(a.n(), field);
        w.add_vector(a, &v);
        w
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> CycloField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &Vec<Scalar>)> {
        self.terms.iter()
    }

    /// Coefficient vector at weight `a` (zeros if absent).
    pub fn component(&self, a: &Multidegree) -> Vec<Scalar> {
        self.terms.get(a).cloned().unwrap_or_else(|| vec![Scalar::zero(self.field); self.nvars])
    }

    pub(crate) fn add_vector(&mut self, a: Multidegree, v: &[Scalar]) {
        if v.iter().all(Scalar::is_zero) {
            return;
        }
        let n = self.nvars;
        let field = self.field;
        let entry = self.terms.entry(a.clone()).or_insert_with(|| vec![Scalar::zero(field); n]);
        for (e, x) in entry.iter_mut().zip(v) {
            *e += x;
        }
        if entry.iter().all(Scalar::is_zero) {
            self.terms.remove(&a);
        }
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        let mut out = self.clone();
        for (a, v) in &other.terms {
            out.add_vector(a.clone(), v);
        }
        out
    }

    pub fn neg(&self) -> OneForm {
        self.scale(&-Scalar::one(self.field))
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> OneForm {
        let mut out = OneForm::zero(self.nvars, self.field);
        for (a, v) in &self.terms {
            let scaled: Vec<Scalar> = v.iter().map(|x| x * s).collect();
            out.add_vector(a.clone(), &scaled);
        }
        out
    }

    /// `p · ω`.
    pub fn mul_poly(&self, p: &LaurentPoly, cap: DegreeCap) -> Result<OneForm> {
        let mut out = OneForm::zero(self.nvars, self.field);
        for (b, c) in p.terms() {
            for (a, v) in &self.terms {
                let deg = a + b;
                cap.check(&deg)?;
                let scaled: Vec<Scalar> = v.iter().map(|x| x * c).collect();
                out.add_vector(deg, &scaled);
            }
        }
        Ok(out)
    }

    /// The single weight of a nonzero homogeneous form.
    pub fn homogeneous_weight(&self) -> Option<&Multidegree> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        if it.next().is_some() {
            None
        } else {
            Some(first)
        }
    }

    pub fn weights(&self) -> impl Iterator<Item = &Multidegree> {
        self.terms.keys()
    }
}

pub(crate) fn lambda_name(n: usize, k: usize) -> String {
    if n == 1 {
        "L".into()
    } else {
        format!("L{}", k + 1)
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (a, v) in self.terms.iter().rev() {
            let mono = LaurentPoly::monomial_text(a);
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let l = lambda_name(self.nvars, k);
                let name = if mono.is_empty() { l } else { format!("{mono}*{l}") };
                parts.push(format_term(c, &name));
            }
        }
        write!(f, "{}", join_terms(&parts))
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `d(t^a) = Σ_k a_k t^a λ_k`, extended linearly.
pub fn exterior_d(p: &LaurentPoly) -> OneForm {
    let mut out = OneForm::zero(p.nvars(), p.field());
    for (a, c) in p.terms() {
        let v: Vec<Scalar> = a.as_slice().iter().map(|&ak| c * &Scalar::from_int(p.field(), ak)).collect();
        out.add_vector(a.clone(), &v);
    }
    out
}

/// A class in the weight-`m` component of `Ω¹ / dΩ⁰`.
///
/// For `m != 0` the exact line is spanned by `m` itself; with `k*` the first
/// index where `m_{k*} != 0`, the class of `v` is represented by
/// `v - (v_{k*} / m_{k*}) m` with the (zero) `k*` entry dropped. For `m = 0`
/// nothing is exact and all `n` coordinates are kept.
#[derive(Clone, PartialEq, Eq)]
pub struct OneFormClass {
    weight: Multidegree,
    field: CycloField,
    coords: Vec<Scalar>,
}

fn pivot_index(m: &Multidegree) -> Option<usize> {
    m.as_slice().iter().position(|&x| x != 0)
}

impl OneFormClass {
    pub fn zero(weight: Multidegree, field: CycloField) -> Self {
        let dim = omegabar_weight_dim(weight.n(), &weight);
        OneFormClass { weight, field, coords: vec![Scalar::zero(field); dim] }
    }

    /// Class of `t^m Σ_k v_k λ_k`.
    pub fn from_vector(weight: Multidegree, v: &[Scalar], field: CycloField) -> Self {
        let coords = match pivot_index(&weight) {
            None => v.to_vec(),
            Some(ks) => {
                let mk = Scalar::from_int(field, weight.0[ks]);
                let t = &v[ks] / &mk;
                v.iter()
                    .zip(weight.as_slice())
                    .enumerate()
                    .filter(|(k, _)| *k != ks)
                    .map(|(_, (x, &mi))| x - &(&t * &Scalar::from_int(field, mi)))
                    .collect()
            }
        };
        OneFormClass { weight, field, coords }
    }

    pub fn weight(&self) -> &Multidegree {
        &self.weight
    }

    pub fn field(&self) -> CycloField {
        self.field
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    /// Canonical representative: zero coefficient at the dropped index.
    pub fn lift(&self) -> OneForm {
        let n = self.weight.n();
        let v = match pivot_index(&self.weight) {
            None => self.coords.clone(),
            Some(ks) => {
                let mut v = self.coords.clone();
                v.insert(ks, Scalar::zero(self.field));
                debug_assert_eq!(v.len(), n);
                v
            }
        };
        OneForm::from_vector(self.weight.clone(), v, self.field)
    }

    /// Human-readable name of coordinate `i`, e.g. `[L2]` or `[L]`.
    pub fn coord_label(&self, i: usize) -> String {
        let n = self.weight.n();
        let k = match pivot_index(&self.weight) {
            Some(ks) if i >= ks => i + 1,
            _ => i,
        };
        format!("[{}]", lambda_name(n, k))
    }
}

impl fmt::Display for OneFormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format_term(c, &self.coord_label(i)))
            .collect();
        write!(f, "weight {}: {}", self.weight, join_terms(&parts))
    }
}

impl fmt::Debug for OneFormClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Reduce a form homogeneous of weight `m` to its class.
pub fn reduce_mod_exact(omega: &OneForm, m: &Multidegree) -> Result<OneFormClass> {
    if m.n() != omega.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "weight {m} for a form in {} variables",
            omega.nvars()
        )));
    }
    if let Some(a) = omega.weights().find(|a| *a != m) {
        return Err(Error::NotHomogeneous(a.0.clone()));
    }
    Ok(OneFormClass::from_vector(m.clone(), &omega.component(m), omega.field()))
}

/// `n - 1` for `m != 0`, `n` for `m = 0`.
pub fn omegabar_weight_dim(n: usize, m: &Multidegree) -> usize {
    if m.is_zero() {
        n
    } else {
        n.saturating_sub(1)
    }
}

/// Δ-invariant part of the weight-`m` component, in class coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantPart {
    pub dim: usize,
    pub basis: Vec<Vec<Scalar>>,
}

/// The `λ_k` are Δ-invariant, so the weight-`m` component is invariant
/// exactly when `r_k | m_k` for all `k`, and has no invariants otherwise.
pub fn omegabar_invariants(act: &TorusAction, m: &Multidegree, field: CycloField) -> InvariantPart {
    if !act.is_invariant_weight(m) {
        return InvariantPart { dim: 0, basis: Vec::new() };
    }
    let dim = omegabar_weight_dim(act.n(), m);
    let basis = (0..dim)
        .map(|i| {
            let mut v = vec![Scalar::zero(field); dim];
            v[i] = Scalar::one(field);
            v
        })
        .collect();
    InvariantPart { dim, basis }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> CycloField {
        CycloField::rationals()
    }

    fn md(v: &[i64]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    fn poly(s: &str, n: usize) -> LaurentPoly {
        LaurentPoly::parse(s, n, q(), DegreeCap::default()).unwrap()
    }

    #[test]
    fn d_examples() {
        assert!(exterior_d(&poly("1", 1)).is_zero());
        assert_eq!(exterior_d(&poly("t^5", 1)).to_string(), "5*t^5*L");
        assert_eq!(exterior_d(&poly("t1*t2^2", 2)).to_string(), "t1*t2^2*L1 + 2*t1*t2^2*L2");
    }

    #[test]
    fn reduction_examples() {
        let w = OneForm::term(md(&[5]), 0, Scalar::one(q()));
        assert!(reduce_mod_exact(&w, &md(&[5])).unwrap().is_zero());
        let w = OneForm::term(md(&[0]), 0, Scalar::one(q()));
        let c = reduce_mod_exact(&w, &md(&[0])).unwrap();
        assert_eq!(c.coords(), &[Scalar::one(q())]);
        let w1 = OneForm::term(md(&[1, 0]), 0, Scalar::one(q()));
        let w2 = OneForm::term(md(&[1, 0]), 1, Scalar::one(q()));
        assert!(reduce_mod_exact(&w1, &md(&[1, 0])).unwrap().is_zero());
        let c = reduce_mod_exact(&w2, &md(&[1, 0])).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(!c.is_zero());
        assert_eq!(c.to_string(), "weight (1,0): [L2]");
    }

    #[test]
    fn inhomogeneous_rejected() {
        let w = exterior_d(&poly("t + t^2", 1));
        assert!(matches!(reduce_mod_exact(&w, &md(&[1])), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn lift_is_section() {
        let v = vec![Scalar::from_int(q(), 3), Scalar::from_int(q(), -1), Scalar::from_ratio(q(), 1, 2)];
        let m = md(&[0, 2, -3]);
        let c = OneFormClass::from_vector(m.clone(), &v, q());
        let lifted = c.lift();
        assert_eq!(reduce_mod_exact(&lifted, &m).unwrap(), c);
        // v - lift is exact: a multiple of m
        let diff = OneForm::from_vector(m.clone(), v, q()).sub(&lifted);
        assert!(reduce_mod_exact(&diff, &m).unwrap().is_zero());
    }

    #[test]
    fn weight_dims() {
        assert_eq!(omegabar_weight_dim(1, &md(&[7])), 0);
        assert_eq!(omegabar_weight_dim(1, &md(&[0])), 1);
        assert_eq!(omegabar_weight_dim(3, &md(&[1, 1, 0])), 2);
    }

    #[test]
    fn invariant_examples() {
        let f = CycloField::new(2).unwrap();
        let act = TorusAction::new(vec![2]).unwrap();
        assert_eq!(omegabar_invariants(&act, &md(&[0]), f).dim, 1);
        assert_eq!(omegabar_invariants(&act, &md(&[3]), f).dim, 0);
        let act = TorusAction::new(vec![2, 1]).unwrap();
        assert_eq!(omegabar_invariants(&act, &md(&[2, 5]), f).dim, 1);
    }
}
