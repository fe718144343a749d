//! Exact integer polynomials.
//!
//! [`LPoly`] is a Laurent polynomial in `v = q^{1/2}`; exponents are stored in
//! `v`-units. [`QPoly`] is an ordinary polynomial in `q`, used for
//! Kazhdan–Lusztig polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LPoly {
    terms: BTreeMap<i32, i64>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly::default()
    }

    pub fn one() -> Self {
        LPoly::monomial(0, 1)
    }

    /// `c · v^e`.
    pub fn monomial(e: i32, c: i64) -> Self {
        let mut p = LPoly::zero();
        p.add_term(e, c);
        p
    }

    /// `v^e`.
    pub fn v_pow(e: i32) -> Self {
        LPoly::monomial(e, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(it: I) -> Self {
        let mut p = LPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i32, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.terms.get(&e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LPoly { terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return LPoly::zero();
        }
        LPoly { terms: self.terms.iter().map(|(&e, &x)| (e, x * c)).collect() }
    }

    /// `v ↦ v^{-1}`.
    pub fn bar(&self) -> Self {
        LPoly { terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect() }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.iter().all(|(&e, &c)| self.coeff(-e) == c)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    /// Reads the polynomial as one in `q` if every exponent is even and nonnegative.
    pub fn to_qpoly(&self) -> Option<QPoly> {
        let mut coeffs = Vec::new();
        for (&e, &c) in &self.terms {
            if e < 0 || e % 2 != 0 {
                return None;
            }
            let k = (e / 2) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = c;
        }
        Some(QPoly::new(coeffs))
    }
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn q_power(e: i32) -> String {
    if e % 2 == 0 {
        match e / 2 {
            0 => String::new(),
            1 => "q".to_string(),
            k => format!("q^{k}"),
        }
    } else {
        format!("q^({e}/2)")
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (i32, i64)>) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        let m = q_power(e);
        let sign = if c < 0 { "-" } else if first { "" } else { "+" };
        let a = c.abs();
        if m.is_empty() {
            write!(f, "{sign}{a}")?;
        } else if a == 1 {
            write!(f, "{sign}{m}")?;
        } else {
            write!(f, "{sign}{a}{m}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms())
    }
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, rhs: &LPoly) -> LPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, rhs: &LPoly) -> LPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&LPoly> for LPoly {
    fn add_assign(&mut self, rhs: &LPoly) {
        for (e, c) in rhs.terms() {
            self.add_term(e, c);
        }
    }
}

impl SubAssign<&LPoly> for LPoly {
    fn sub_assign(&mut self, rhs: &LPoly) {
        for (e, c) in rhs.terms() {
            self.add_term(e, -c);
        }
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        self.scale(-1)
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

/// Polynomial in `q` with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QPoly {
    coeffs: Vec<i64>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        QPoly { coeffs: vec![1] }
    }

    /// `c · q^k`.
    pub fn monomial(k: usize, c: i64) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        QPoly::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add_term(&mut self, k: usize, c: i64) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, 0);
        }
        self.coeffs[k] += c;
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        QPoly { coeffs: v }
    }

    /// Substitutes `q = v^2`.
    pub fn to_lpoly(&self) -> LPoly {
        LPoly::from_terms(self.coeffs.iter().enumerate().map(|(k, &c)| (2 * k as i32, c)))
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| (2 * k as i32, c)))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&QPoly> for QPoly {
    fn add_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), 0);
        }
        for (k, &c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[k] += c;
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }
}

impl SubAssign<&QPoly> for QPoly {
    fn sub_assign(&mut self, rhs: &QPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), 0);
        }
        for (k, &c) in rhs.coeffs.iter().enumerate() {
            self.coeffs[k] -= c;
        }
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_half_powers() {
        let p = LPoly::from_terms([(-3, 1), (-1, 1)]);
        assert_eq!(p.to_string(), "q^(-3/2)+q^(-1/2)");
        assert_eq!(LPoly::from_terms([(0, 1), (2, 1)]).to_string(), "1+q");
        assert_eq!(LPoly::from_terms([(-2, 1), (0, -1)]).to_string(), "q^-1-1");
        assert_eq!(LPoly::zero().to_string(), "0");
    }

    #[test]
    fn qpoly_basics() {
        let p = QPoly::new(vec![1, 1]);
        assert_eq!(p.to_string(), "1+q");
        assert_eq!((&p * &p).to_string(), "1+2q+q^2");
        assert_eq!(p.to_lpoly().to_qpoly(), Some(p));
    }

    #[test]
    fn zero_terms_dropped() {
        let mut p = LPoly::monomial(1, 2);
        p.add_term(1, -2);
        assert!(p.is_zero());
        assert_eq!(serde_json::to_string(&LPoly::monomial(-3, 2)).unwrap(), r#"{"-3":2}"#);
    }
}
