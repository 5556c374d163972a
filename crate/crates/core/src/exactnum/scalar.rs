//! Elements of `Q(z)`, `z = zeta_m`, stored as coefficient vectors of length
//! `totient(m)` in the power basis `1, z, ..., z^(phi - 1)`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::CycloField;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct Scalar {
    field: CycloField,
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn zero(field: CycloField) -> Self {
        Scalar { field, coeffs: vec![BigRational::zero(); field.degree()] }
    }

    pub fn one(field: CycloField) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_int(field: CycloField, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics if `den == 0`.
    pub fn from_ratio(field: CycloField, num: i64, den: i64) -> Self {
        Self::from_rational(field, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(field: CycloField, r: BigRational) -> Self {
        let mut s = Self::zero(field);
        s.coeffs[0] = r;
        s
    }

    /// Build from power-basis coefficients of any length; reduced mod `Phi_m`.
    pub fn from_poly(field: CycloField, poly: Vec<BigRational>) -> Self {
        Scalar { field, coeffs: field.reduce(poly) }
    }

    /// The generator `zeta_m`.
    pub fn zeta(field: CycloField) -> Self {
        Self::zeta_pow(field, 1)
    }

    /// `zeta_m^e` for any integer `e`.
    pub fn zeta_pow(field: CycloField, e: i64) -> Self {
        let m = field.order() as i64;
        let e = e.rem_euclid(m) as usize;
        let mut poly = vec![BigRational::zero(); e + 1];
        poly[e] = BigRational::one();
        Self::from_poly(field, poly)
    }

    /// `zeta_r^k` inside a field whose order is a multiple of `r`.
    pub fn root_of_unity(field: CycloField, k: i64, r: u32) -> Result<Self> {
        let m = field.order();
        if r == 0 || !m.is_multiple_of(r) {
            return Err(Error::OrderMismatch(format!(
                "field order {m} is not a multiple of root order {r}"
            )));
        }
        Ok(Self::zeta_pow(field, k * (m / r) as i64))
    }

    pub fn field(&self) -> CycloField {
        self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational number, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        let deg = self.field.degree();
        if deg == 1 || self.as_rational().is_some() {
            return Some(Self::from_rational(self.field, self.coeffs[0].recip()));
        }
        // Solve (multiplication-by-self) y = 1 in the power basis.
        let mut cols = Vec::with_capacity(deg);
        for j in 0..deg {
            let mut xj = vec![BigRational::zero(); j + 1];
            xj[j] = BigRational::one();
            cols.push((self * &Self::from_poly(self.field, xj)).coeffs);
        }
        let mut aug: Vec<Vec<BigRational>> = (0..deg)
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
                row.push(if i == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..deg {
            let piv = (col..deg).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let p = aug[col][col].recip();
            for v in aug[col].iter_mut() {
                *v *= &p;
            }
            for r in 0..deg {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    let pivot_row = aug[col].clone();
                    for (v, q) in aug[r].iter_mut().zip(&pivot_row).skip(col) {
                        *v -= &f * q;
                    }
                }
            }
        }
        let y = aug.into_iter().map(|mut row| row.pop().unwrap()).collect();
        Some(Scalar { field: self.field, coeffs: y })
    }

    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let mut acc = Scalar::one(self.field);
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Parse `"3/2*z^2 - 1*z + 5"` style input.
    pub fn parse(input: &str, field: CycloField) -> Result<Scalar> {
        let err = |reason: &str| Error::ScalarParse { input: input.to_string(), reason: reason.to_string() };
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }
        let mut acc = Scalar::zero(field);
        for (negative, term) in split_signed_terms(&s).map_err(|r| err(&r))? {
            let mut value = Scalar::one(field);
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                if let Some(rest) = factor.strip_prefix('z') {
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|x| x.parse::<i64>().ok())
                            .ok_or_else(|| err("bad exponent"))?
                    };
                    value = &value * &Scalar::zeta_pow(field, e);
                } else {
                    let r = parse_rational(factor).ok_or_else(|| err("bad rational literal"))?;
                    value = &value * &Scalar::from_rational(field, r);
                }
            }
            if negative {
                acc = &acc - &value;
            } else {
                acc = &acc + &value;
            }
        }
        Ok(acc)
    }

    fn promote(&self, field: CycloField) -> Scalar {
        if self.field == field {
            return self.clone();
        }
        let mut out = Scalar::zero(field);
        out.coeffs[0] = self.coeffs[0].clone();
        out
    }
}

/// Parse `"-3/4"`, `"5"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Split at top-level `+`/`-` signs that do not follow `^` (negative
/// exponents) and are not inside parentheses.
pub(crate) fn split_signed_terms(s: &str) -> std::result::Result<Vec<(bool, &str)>, String> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let mut i = 0;
    if let Some(&b) = bytes.first() {
        if b == b'+' || b == b'-' {
            negative = b == b'-';
            start = 1;
            i = 1;
        }
    }
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' => {
                out.push((negative, &s[start..i]));
                negative = bytes[i] == b'-';
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err("unbalanced parentheses".into());
        }
        i += 1;
    }
    if depth != 0 {
        return Err("unbalanced parentheses".into());
    }
    if start >= s.len() {
        return Err("dangling sign".into());
    }
    out.push((negative, &s[start..]));
    Ok(out)
}

fn common_field(a: &Scalar, b: &Scalar) -> CycloField {
    if a.field == b.field {
        a.field
    } else if a.field.is_rational() {
        b.field
    } else if b.field.is_rational() {
        a.field
    } else {
        panic!("mixed cyclotomic fields {:?} and {:?}", a.field, b.field)
    }
}

fn add_ref(a: &Scalar, b: &Scalar) -> Scalar {
    let f = common_field(a, b);
    if a.field == b.field {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        return Scalar { field: f, coeffs };
    }
    add_ref(&a.promote(f), &b.promote(f))
}

fn sub_ref(a: &Scalar, b: &Scalar) -> Scalar {
    let f = common_field(a, b);
    if a.field == b.field {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        return Scalar { field: f, coeffs };
    }
    sub_ref(&a.promote(f), &b.promote(f))
}

fn mul_ref(a: &Scalar, b: &Scalar) -> Scalar {
    let f = common_field(a, b);
    if a.as_rational().is_some() {
        let c = &a.coeffs[0];
        return Scalar { field: f, coeffs: b.promote(f).coeffs.iter().map(|x| c * x).collect() };
    }
    if b.as_rational().is_some() {
        let c = &b.coeffs[0];
        return Scalar { field: f, coeffs: a.promote(f).coeffs.iter().map(|x| x * c).collect() };
    }
    let mut prod = vec![BigRational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    Scalar::from_poly(f, prod)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $func:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $func(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $func(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $func(&self, rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $func(self, &rhs)
            }
        }
    };
}

fn div_ref(a: &Scalar, b: &Scalar) -> Scalar {
    a * &b.inv().expect("division by zero scalar")
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if self.field == rhs.field {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x += y;
            }
        } else {
            *self = add_ref(self, rhs);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if self.field == rhs.field {
            for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *x -= y;
            }
        } else {
            *self = sub_ref(self, rhs);
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = mul_ref(self, rhs);
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.field == other.field {
            return self.coeffs == other.coeffs;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        let mut it = iter;
        let Some(first) = it.next() else {
            return Scalar::zero(CycloField::rationals());
        };
        let mut acc = first.clone();
        for x in it {
            acc += x;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match k {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*z")?,
                _ => write!(f, "{mag}*z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32) -> CycloField {
        CycloField::new(n).unwrap()
    }

    #[test]
    fn i_squared_is_minus_one() {
        let f = q(4);
        let z = Scalar::zeta(f);
        assert_eq!(&z * &z, Scalar::from_int(f, -1));
    }

    #[test]
    fn zeta3_squared_reduces() {
        let f = q(3);
        let z = Scalar::zeta(f);
        let sq = &z * &z;
        let m1 = BigRational::from_integer((-1).into());
        assert_eq!(sq.coeffs(), &[m1.clone(), m1]);
    }

    #[test]
    fn order_one_is_rationals() {
        let f = q(1);
        assert_eq!(f.degree(), 1);
        assert!(Scalar::zeta(f).is_one());
        assert_eq!(Scalar::zeta(q(2)), Scalar::from_int(q(2), -1));
    }

    #[test]
    fn primitivity_up_to_twelve() {
        for m in 1..=12u32 {
            let f = q(m);
            let z = Scalar::zeta(f);
            assert!(z.pow(m as i64).is_one(), "zeta_{m}^{m} != 1");
            for k in 1..m {
                assert!(!z.pow(k as i64).is_one(), "zeta_{m}^{k} == 1");
            }
        }
    }

    #[test]
    fn inverse_in_extension() {
        let f = q(5);
        let a = Scalar::parse("2*z^3 - z + 7/3", f).unwrap();
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert!(Scalar::zero(f).inv().is_none());
    }

    #[test]
    fn display_and_parse() {
        let f = q(5);
        let s = Scalar::parse("3/2*z^2 - 1*z + 5", f).unwrap();
        assert_eq!(s.to_string(), "3/2*z^2 - 1*z + 5");
        assert_eq!(Scalar::parse("-z", f).unwrap().to_string(), "-1*z");
        assert_eq!(Scalar::zero(f).to_string(), "0");
        assert_eq!(Scalar::from_ratio(f, -3, 4).to_string(), "-3/4");
        assert!(Scalar::parse("3/0", f).is_err());
        assert!(Scalar::parse("2*y", f).is_err());
        assert!(Scalar::parse("", f).is_err());
        assert!(Scalar::parse("1 +", f).is_err());
    }

    #[test]
    fn rational_mixes_with_extension() {
        let a = Scalar::from_int(q(1), 2);
        let z = Scalar::zeta(q(3));
        let s = &a * &z + &a;
        assert_eq!(s.field(), q(3));
        assert_eq!(s.to_string(), "2*z + 2");
    }
}
