//! Laurent polynomials `C[t1^±1, ..., tn^±1]`, the torus action of
//! `Δ = ∏ Z/r_k`, one-forms in the logarithmic basis `λ_k = t_k^-1 dt_k`,
//! and the quotient of one-forms by exact forms.

mod action;
mod forms;

pub use action::TorusAction;
pub use forms::{
    exterior_d, omegabar_invariants, omegabar_weight_dim, reduce_mod_exact, InvariantPart, OneForm, OneFormClass,
};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::exactnum::{split_signed_terms, CycloField, Scalar};
use crate::liealg::{format_term, join_terms};

/// A point of `Z^n`. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `max_k |a_k|`.
    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|a| a.abs()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        Multidegree(self.0.iter().map(|a| -a).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Multidegree {
    fn from(v: Vec<i64>) -> Self {
        Multidegree(v)
    }
}

impl From<&[i64]> for Multidegree {
    fn from(v: &[i64]) -> Self {
        Multidegree(v.to_vec())
    }
}

impl Add for &Multidegree {
    type Output = Multidegree;
    fn add(self, rhs: &Multidegree) -> Multidegree {
        assert_eq!(self.n(), rhs.n(), "multidegree length mismatch");
        Multidegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Bound on `|a_k|` for every multidegree produced by ring operations.
/// Exceeding it is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeCap(pub i64);

impl Default for DegreeCap {
    fn default() -> Self {
        DegreeCap(64)
    }
}

impl DegreeCap {
    pub fn check(&self, a: &Multidegree) -> Result<()> {
        if a.sup_norm() > self.0 {
            return Err(Error::DegreeCapExceeded { degree: a.0.clone(), cap: self.0 });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    Scale(Scalar),
}

/// Sparse Laurent polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    nvars: usize,
    field: CycloField,
    terms: BTreeMap<Multidegree, Scalar>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize, field: CycloField) -> Self {
        LaurentPoly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial_unchecked(Multidegree::zero(nvars), c)
    }

    pub fn monomial(a: Multidegree, c: Scalar, cap: DegreeCap) -> Result<Self> {
        cap.check(&a)?;
        Ok(Self::monomial_unchecked(a, c))
    }

    fn monomial_unchecked(a: Multidegree, c: Scalar) -> Self {
        let mut p = LaurentPoly::zero(a.n(), c.field());
        if !c.is_zero() {
            p.terms.insert(a, c);
        }
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Multidegree, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &Multidegree) -> Scalar {
        self.terms.get(a).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub(crate) fn add_term(&mut self, a: Multidegree, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            field: self.field,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = LaurentPoly::zero(self.nvars, self.field);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), &(c * s));
        }
        out
    }

    pub fn mul(&self, other: &Self, cap: DegreeCap) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = LaurentPoly::zero(self.nvars, self.field);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let deg = a + b;
                cap.check(&deg)?;
                out.add_term(deg, &(x * y));
            }
        }
        Ok(out)
    }

    /// Homogeneous weights present in the polynomial.
    pub fn weights(&self) -> impl Iterator<Item = &Multidegree> {
        self.terms.keys()
    }

    /// Parse `"3*t1^2*t2^-1 + 1/2"` (or `"t^3 - t^-1"` when `nvars == 1`).
    pub fn parse(input: &str, nvars: usize, field: CycloField, cap: DegreeCap) -> Result<Self> {
        let err = |reason: String| Error::PolyParse { input: input.to_string(), reason };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input".into()));
        }
        let mut out = LaurentPoly::zero(nvars, field);
        for (negative, term) in split_signed_terms(&s).map_err(err)? {
            let mut coeff = Scalar::one(field);
            let mut deg = vec![0i64; nvars];
            for factor in split_top_level(term, '*') {
                parse_factor(factor, nvars, field, &mut coeff, &mut deg).map_err(err)?;
            }
            if negative {
                coeff = -coeff;
            }
            let a = Multidegree(deg);
            cap.check(&a)?;
            out.add_term(a, &coeff);
        }
        Ok(out)
    }

    /// `t1^a1 * t2^a2` style monomial text (empty for degree 0).
    pub(crate) fn monomial_text(a: &Multidegree) -> String {
        let n = a.n();
        let parts: Vec<String> = a
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(k, &e)| {
                let var = if n == 1 { "t".to_string() } else { format!("t{}", k + 1) };
                if e == 1 {
                    var
                } else {
                    format!("{var}^{e}")
                }
            })
            .collect();
        parts.join("*")
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_factor(
    factor: &str,
    nvars: usize,
    field: CycloField,
    coeff: &mut Scalar,
    deg: &mut [i64],
) -> std::result::Result<(), String> {
    if factor.is_empty() {
        return Err("empty factor".into());
    }
    if let Some(inner) = factor.strip_prefix('(').and_then(|f| f.strip_suffix(')')) {
        let s = Scalar::parse(inner, field).map_err(|e| e.to_string())?;
        *coeff = &*coeff * &s;
        return Ok(());
    }
    if let Some(rest) = factor.strip_prefix('t') {
        let (var, exp) = match rest.split_once('^') {
            Some((v, e)) => (v, e.parse::<i64>().map_err(|_| format!("bad exponent in `{factor}`"))?),
            None => (rest, 1),
        };
        let k = if var.is_empty() {
            if nvars != 1 {
                return Err("bare `t` needs a single variable".into());
            }
            0
        } else {
            let k: usize = var.parse().map_err(|_| format!("bad variable `{factor}`"))?;
            if k == 0 || k > nvars {
                return Err(format!("variable index {k} out of range"));
            }
            k - 1
        };
        deg[k] += exp;
        return Ok(());
    }
    let s = Scalar::parse(factor, field).map_err(|e| e.to_string())?;
    *coeff = &*coeff * &s;
    Ok(())
}

/// Generic `p op q` with the degree cap applied to the result.
pub fn poly_arith(p: &LaurentPoly, q: &LaurentPoly, op: &PolyOp, cap: DegreeCap) -> Result<LaurentPoly> {
    let out = match op {
        PolyOp::Add => p.add(q)?,
        PolyOp::Mul => p.mul(q, cap)?,
        PolyOp::Scale(s) => p.scale(s),
    };
    for a in out.weights() {
        cap.check(a)?;
    }
    Ok(out)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(a, c)| {
                let mono = LaurentPoly::monomial_text(a);
                if mono.is_empty() {
                    c.as_rational().map_or_else(|| format!("({c})"), ToString::to_string)
                } else {
                    format_term(c, &mono)
                }
            })
            .collect();
        write!(f, "{}", join_terms(&parts))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
