use super::{LaurentPoly, Multidegree};
use crate::error::{Error, Result};
use crate::exactnum::{lcm_all, CycloField, Scalar};

/// `Δ = ∏ Z/r_k` acting on `t_k` by `ζ_{r_k}^{δ_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAction {
    orders: Vec<u32>,
}

impl TorusAction {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::OrderMismatch("torus orders must be positive".into()));
        }
        Ok(TorusAction { orders })
    }

    /// Trivial action on `n` variables.
    pub fn trivial(n: usize) -> Self {
        TorusAction { orders: vec![1; n] }
    }

    pub fn n(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// `lcm(r_k)`.
    pub fn field_order(&self) -> u32 {
        lcm_all(self.orders.iter().copied())
    }

    pub fn group_order(&self) -> u64 {
        self.orders.iter().map(|&r| r as u64).product()
    }

    /// All group elements, componentwise reduced, in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &r in &self.orders {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..r as i64).map(move |d| {
                        let mut p = prefix.clone();
                        p.push(d);
                        p
                    })
                })
                .collect();
        }
        out
    }

    /// Exponent `e` such that `δ` scales `t^a` by `ζ_M^e` in a field of order `M`.
    fn exponent(&self, delta: &[i64], a: &Multidegree, field_order: u32) -> i64 {
        self.orders
            .iter()
            .zip(delta)
            .zip(a.as_slice())
            .map(|((&r, &d), &ak)| (field_order / r) as i64 * d * ak)
            .sum()
    }

    /// The scalar by which `δ` acts on `t^a`.
    pub fn character(&self, delta: &[i64], a: &Multidegree, field: CycloField) -> Result<Scalar> {
        let l = self.field_order();
        if !field.order().is_multiple_of(l) {
            return Err(Error::OrderMismatch(format!(
                "field order {} does not contain the {l}-th roots of unity",
                field.order()
            )));
        }
        Ok(Scalar::zeta_pow(field, self.exponent(delta, a, field.order())))
    }

    /// `r_k | a_k` for all `k`: exactly the weights fixed by every `δ`.
    pub fn is_invariant_weight(&self, a: &Multidegree) -> bool {
        self.orders.iter().zip(a.as_slice()).all(|(&r, &ak)| ak.rem_euclid(r as i64) == 0)
    }

    /// `a mod r`, componentwise.
    pub fn residue(&self, a: &Multidegree) -> Vec<u32> {
        self.orders.iter().zip(a.as_slice()).map(|(&r, &ak)| ak.rem_euclid(r as i64) as u32).collect()
    }

    /// `δ · p`.
    pub fn delta_act(&self, delta: &[i64], p: &LaurentPoly) -> Result<LaurentPoly> {
        if delta.len() != self.n() || p.nvars() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "action on {} variables, δ of length {}, polynomial in {}",
                self.n(),
                delta.len(),
                p.nvars()
            )));
        }
        let mut out = LaurentPoly::zero(p.nvars(), p.field());
        for (a, c) in p.terms() {
            let chi = self.character(delta, a, p.field())?;
            out.add_term(a.clone(), &(c * &chi));
        }
        Ok(out)
    }
}
