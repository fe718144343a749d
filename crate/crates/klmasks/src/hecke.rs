//! The Iwahori–Hecke algebra of `S_n` over `Z[v, v^{-1}]`, `v = q^{1/2}`,
//! in the standard basis `T_w`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::perm::{check_reduced, Perm, Side};
use crate::poly::LPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    n: usize,
    terms: BTreeMap<Perm, LPoly>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    perm: Perm,
    poly: LPoly,
}

impl HeckeElement {
    pub fn zero(n: usize) -> Self {
        HeckeElement { n, terms: BTreeMap::new() }
    }

    /// `T_w`.
    pub fn t(w: &Perm) -> Self {
        let mut h = HeckeElement::zero(w.n());
        h.terms.insert(w.clone(), LPoly::one());
        h
    }

    /// `T_{w_1} T_{w_2} ... T_{w_k}` for a reduced word.
    pub fn t_from_word(n: usize, word: &[usize]) -> Result<Self> {
        let w = check_reduced(n, word)?;
        let mut h = HeckeElement::t(&Perm::identity(n));
        for &i in word {
            h = h.mul_generator(i, Side::Right);
        }
        debug_assert_eq!(h, HeckeElement::t(&w));
        Ok(h)
    }

    pub fn from_terms<I: IntoIterator<Item = (Perm, LPoly)>>(n: usize, it: I) -> Result<Self> {
        let mut h = HeckeElement::zero(n);
        for (p, c) in it {
            if p.n() != n {
                return Err(Error::RankMismatch(n, p.n()));
            }
            h.add_term(p, &c);
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Perm) -> LPoly {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Perm, &LPoly)> {
        self.terms.iter()
    }

    /// Terms ordered by length, then lexicographically by one-line word.
    pub fn sorted_terms(&self) -> Vec<(&Perm, &LPoly)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(p, _)| (p.length(), (*p).clone()));
        v
    }

    pub fn add_term(&mut self, w: Perm, c: &LPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn add(&self, other: &HeckeElement) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HeckeElement) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), &-c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LPoly) -> Self {
        let mut out = HeckeElement::zero(self.n);
        for (p, a) in &self.terms {
            out.add_term(p.clone(), &(a * c));
        }
        out
    }

    fn check_rank(&self, other: &HeckeElement) -> Result<()> {
        if self.n != other.n {
            Err(Error::RankMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    /// `T_s · h` or `h · T_s`.
    pub fn mul_generator(&self, i: usize, side: Side) -> Self {
        let q = LPoly::v_pow(2);
        let q_minus_1 = LPoly::from_terms([(2, 1), (0, -1)]);
        let mut out = HeckeElement::zero(self.n);
        for (w, a) in &self.terms {
            let sw = w.mul_s(i, side);
            let down = match side {
                Side::Left => w.has_left_descent(i),
                Side::Right => w.has_right_descent(i),
            };
            if down {
                out.add_term(w.clone(), &(a * &q_minus_1));
                out.add_term(sw, &(a * &q));
            } else {
                out.add_term(sw, a);
            }
        }
        out
    }

    pub fn mul(&self, other: &HeckeElement) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = HeckeElement::zero(self.n);
        for (y, c) in &other.terms {
            let mut part = self.clone();
            for i in y.reduced_word() {
                part = part.mul_generator(i, Side::Right);
            }
            for (p, a) in part.terms {
                out.add_term(p, &(&a * c));
            }
        }
        Ok(out)
    }

    /// The bar involution: `v ↦ v^{-1}`, `T_w ↦ T_{w^{-1}}^{-1}`.
    pub fn bar(&self) -> Self {
        let mut out = HeckeElement::zero(self.n);
        for (w, a) in &self.terms {
            let ab = a.bar();
            for (x, c) in bar_t(w).terms() {
                out.add_term(x.clone(), &(&ab * c));
            }
        }
        out
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("hecke element serializes")
    }
}

impl Serialize for HeckeElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.sorted_terms();
        let mut seq = s.serialize_seq(Some(terms.len()))?;
        for (p, c) in terms {
            seq.serialize_element(&TermJson { perm: p.clone(), poly: c.clone() })?;
        }
        seq.end()
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms.iter().map(|(p, c)| format!("({c})T[{p}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type BarCache = Mutex<HashMap<Perm, Arc<HeckeElement>>>;

fn bar_cache() -> &'static BarCache {
    static CACHE: OnceLock<BarCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `bar(T_w)`, memoized: `bar(T_w) = bar(T_{ws}) · (q^{-1} T_s + (q^{-1} - 1) T_1)`.
pub fn bar_t(w: &Perm) -> Arc<HeckeElement> {
    if let Some(h) = bar_cache().lock().unwrap().get(w) {
        return h.clone();
    }
    let result = match w.right_descents().into_iter().next() {
        None => HeckeElement::t(w),
        Some(i) => {
            let prev = bar_t(&w.mul_s_right(i));
            let qinv = LPoly::v_pow(-2);
            let c1 = LPoly::from_terms([(-2, 1), (0, -1)]);
            let with_s = prev.mul_generator(i, Side::Right).scale(&qinv);
            with_s.add(&prev.scale(&c1)).expect("same rank")
        }
    };
    let result = Arc::new(result);
    bar_cache().lock().unwrap().insert(w.clone(), result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn ts_squared() {
        let s = p("213");
        let h = HeckeElement::t(&s).mul_generator(1, Side::Left);
        assert_eq!(h.coeff(&s), LPoly::from_terms([(2, 1), (0, -1)]));
        assert_eq!(h.coeff(&Perm::identity(3)), LPoly::v_pow(2));
    }

    #[test]
    fn word_independence() {
        let a = HeckeElement::t_from_word(4, &[2, 3, 1, 2]).unwrap();
        let b = HeckeElement::t_from_word(4, &[2, 1, 3, 2]).unwrap();
        assert_eq!(a, b);
        assert!(HeckeElement::t_from_word(3, &[1, 1]).is_err());
    }

    #[test]
    fn bar_is_involution_on_generators() {
        let s = HeckeElement::t(&p("2134"));
        assert_eq!(s.bar().bar(), s);
        assert_eq!(HeckeElement::t(&Perm::identity(4)).bar(), HeckeElement::t(&Perm::identity(4)));
    }
}
