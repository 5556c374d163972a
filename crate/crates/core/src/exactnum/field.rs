//! Cyclotomic fields `Q(z)` with `z` a primitive `m`-th root of unity.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub(crate) struct FieldData {
    order: u32,
    /// Monic `Phi_m`, lowest degree first, length `degree + 1`.
    modulus: Vec<BigRational>,
}

/// Handle to the cyclotomic field of a given order. Fields are interned, so
/// copying a handle is free and equality is equality of orders.
#[derive(Clone, Copy)]
pub struct CycloField(&'static FieldData);

fn registry() -> &'static Mutex<HashMap<u32, &'static FieldData>> {
    static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static FieldData>>> = OnceLock::new();
    REGISTRY.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Long division of `num` by the monic polynomial `den` (both lowest degree
/// first). Returns the quotient and asserts a zero remainder.
fn exact_div(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigRational::zero()];
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for shift in (0..quot.len()).rev() {
        let c = rem[shift + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[shift + i] -= &c * d;
        }
        quot[shift] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "cyclotomic division left a remainder");
    quot
}

/// Coefficients of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigRational> {
    let mut xm1 = vec![BigRational::zero(); m as usize + 1];
    xm1[0] = -BigRational::one();
    xm1[m as usize] = BigRational::one();
    let mut p = xm1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = exact_div(&p, &cyclotomic_polynomial(d));
        }
    }
    p
}

/// Euler's totient.
pub fn totient(m: u32) -> u32 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u32
}

impl FieldData {
    fn build(order: u32) -> Self {
        FieldData { order, modulus: cyclotomic_polynomial(order) }
    }
}

impl CycloField {
    /// The field `Q(zeta_m)`. Orders 1 and 2 both give the rationals.
    pub fn new(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidFieldOrder);
        }
        let mut reg = registry().lock().expect("field registry poisoned");
        let data = *reg
            .entry(order)
            .or_insert_with(|| Box::leak(Box::new(FieldData::build(order))));
        Ok(CycloField(data))
    }

    /// The rational numbers, presented as `Q(zeta_1)`.
    pub fn rationals() -> Self {
        Self::new(1).expect("order 1 is valid")
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Degree over `Q`, equal to `totient(order)`.
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigRational] {
        &self.0.modulus
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// Reduce a polynomial (lowest degree first, any length) modulo `Phi_m`.
    pub(crate) fn reduce(&self, mut poly: Vec<BigRational>) -> Vec<BigRational> {
        let deg = self.degree();
        if deg == 1 {
            // Phi_1 = x - 1, Phi_2 = x + 1: substitute the root.
            let root = if self.order() == 1 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            let mut acc = BigRational::zero();
            for c in poly.iter().rev() {
                acc = acc * &root + c;
            }
            return vec![acc];
        }
        for i in (deg..poly.len()).rev() {
            let c = std::mem::take(&mut poly[i]);
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.0.modulus[..deg].iter().enumerate() {
                poly[i - deg + j] -= &c * m;
            }
        }
        poly.resize(deg, BigRational::zero());
        poly
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order()
    }
}

impl Eq for CycloField {}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order())
    }
}
