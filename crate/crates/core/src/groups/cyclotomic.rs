//! Exact arithmetic in `Z[ζ]` for a primitive `m`-th root of unity `ζ`.
//!
//! A value is a coefficient vector `c[0..m]` meaning `Σ_j c_j ζ^j`. The
//! representation is not unique; equality and integrality are decided after
//! reducing modulo the `m`-th cyclotomic polynomial `Φ_m`, which is monic, so
//! the division stays in the integers.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicValue {
    order: usize,
    coeffs: Vec<i128>,
}

impl CyclotomicValue {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "root of unity order must be positive");
        CyclotomicValue {
            order,
            coeffs: vec![0; order],
        }
    }

    pub fn from_integer(order: usize, value: i128) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value;
        z
    }

    /// `ζ^j`, with `j` taken modulo the order.
    pub fn root_power(order: usize, j: i64) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[j.rem_euclid(order as i64) as usize] = 1;
        z
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Adds `weight · ζ^j`.
    pub fn add_term(&mut self, j: usize, weight: i128) {
        self.coeffs[j % self.order] += weight;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        CyclotomicValue {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: i128) -> Self {
        CyclotomicValue {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Product, using `ζ^m = 1`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let m = self.order;
        let mut out = Self::zero(m);
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| **b != 0) {
                out.coeffs[(i + j) % m] += a * b;
            }
        }
        out
    }

    /// Complex conjugate: `ζ^j ↦ ζ^{-j}`.
    pub fn conj(&self) -> Self {
        let m = self.order;
        let mut out = Self::zero(m);
        for (j, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[(m - j) % m] += c;
        }
        out
    }

    /// Remainder modulo `Φ_m`: the canonical coordinates in the power basis of degree `< φ(m)`.
    pub fn reduced(&self) -> Result<Vec<i128>> {
        let phi = cyclotomic_polynomial(self.order);
        let deg = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for top in (deg..r.len()).rev() {
            let lead = r[top];
            if lead == 0 {
                continue;
            }
            for (i, &f) in phi.iter().enumerate() {
                let idx = top - deg + i;
                r[idx] = lead
                    .checked_mul(f)
                    .and_then(|x| r[idx].checked_sub(x))
                    .ok_or_else(|| Error::internal("cyclotomic reduction overflowed i128"))?;
            }
        }
        r.truncate(deg);
        Ok(r)
    }

    /// The rational integer this value equals, if it is one.
    pub fn to_integer(&self) -> Result<Option<i128>> {
        let r = self.reduced()?;
        Ok(r[1..].iter().all(|&c| c == 0).then_some(r[0]))
    }

    /// Like [`to_integer`](Self::to_integer) but a non-integral value is an internal error.
    pub fn expect_integer(&self, what: &str) -> Result<i128> {
        self.to_integer()?.ok_or_else(|| {
            Error::internal(format!("{what} is not a rational integer: {self}"))
        })
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(self.reduced()?.iter().all(|&c| c == 0))
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.add(&other.scale(-1)).is_zero()
    }
}

impl fmt::Display for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.reduced().unwrap_or_else(|_| self.coeffs.clone());
        let terms: Vec<String> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(j, c)| match j {
                0 => c.to_string(),
                1 => format!("{c}ζ"),
                _ => format!("{c}ζ^{j}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn poly_cache() -> &'static Mutex<HashMap<usize, Vec<i128>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<i128>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (lowest degree first) of `Φ_m`, from `x^m - 1 = Π_{d | m} Φ_d`.
pub fn cyclotomic_polynomial(m: usize) -> Vec<i128> {
    assert!(m >= 1);
    if let Some(p) = poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let mut num = vec![0i128; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        num = divide_monic(&num, &cyclotomic_polynomial(d));
    }
    poly_cache().lock().unwrap().insert(m, num.clone());
    num
}

fn divide_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; num.len() - dd];
    for top in (dd..num.len()).rev() {
        let q = rem[top];
        quot[top - dd] = q;
        if q != 0 {
            for (i, &c) in den.iter().enumerate() {
                rem[top - dd + i] -= q * c;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "non-exact cyclotomic division");
    quot
}

/// Euler's totient, the degree of `Φ_m`.
pub fn totient(m: usize) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(105), 48);
    }

    #[test]
    fn sums_of_roots() {
        for m in 1..=20 {
            let mut all = CyclotomicValue::zero(m);
            for j in 0..m {
                all.add_term(j, 1);
            }
            let expected = if m == 1 { 1 } else { 0 };
            assert_eq!(all.to_integer().unwrap(), Some(expected));
        }
        // ζ_4 is not rational
        assert_eq!(CyclotomicValue::root_power(4, 1).to_integer().unwrap(), None);
        assert_eq!(CyclotomicValue::root_power(2, 1).to_integer().unwrap(), Some(-1));
    }

    #[test]
    fn conjugate_product_is_norm() {
        let z = CyclotomicValue::root_power(7, 3);
        assert_eq!(z.mul(&z.conj()).to_integer().unwrap(), Some(1));
        let w = z.add(&CyclotomicValue::from_integer(7, 2));
        assert!(w.conj().conj().equals(&w).unwrap());
    }
}
