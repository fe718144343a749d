//! Kazhdan–Lusztig polynomials by the classical recursion, and the `C'` and
//! `B'` bases of the Hecke algebra.
//!
//! Columns `x ↦ P_{x,w}` are memoized per `w` in a process-wide cache.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::perm::Perm;
use crate::poly::{LPoly, QPoly};

pub type KlColumn = HashMap<Perm, QPoly>;

type ColumnCache = Mutex<HashMap<Perm, Arc<KlColumn>>>;

fn column_cache() -> &'static ColumnCache {
    static CACHE: OnceLock<ColumnCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `P_{x,w}(q)`; zero unless `x <= w`.
pub fn kl_polynomial(x: &Perm, w: &Perm) -> Result<QPoly> {
    if x.n() != w.n() {
        return Err(Error::RankMismatch(x.n(), w.n()));
    }
    Ok(kl_column(w).get(x).cloned().unwrap_or_default())
}

/// All nonzero `P_{x,w}` for fixed `w`. The key set is the Bruhat interval `[e, w]`.
pub fn kl_column(w: &Perm) -> Arc<KlColumn> {
    if let Some(c) = column_cache().lock().unwrap().get(w) {
        return c.clone();
    }
    let col = Arc::new(compute_column(w));
    column_cache().lock().unwrap().insert(w.clone(), col.clone());
    col
}

/// `μ(z, v)`: the coefficient of `q^{(ℓ(v)-ℓ(z)-1)/2}` in `P_{z,v}`.
pub fn mu(z: &Perm, v: &Perm) -> i64 {
    let (lz, lv) = (z.length(), v.length());
    if lz >= lv || (lv - lz) % 2 == 0 {
        return 0;
    }
    kl_column(v).get(z).map(|p| p.coeff((lv - lz - 1) / 2)).unwrap_or(0)
}

fn compute_column(w: &Perm) -> KlColumn {
    let mut col = KlColumn::new();
    let Some(s) = w.right_descents().into_iter().next() else {
        col.insert(w.clone(), QPoly::one());
        return col;
    };
    let v = w.mul_s_right(s);
    let lw = w.length();
    let pv = kl_column(&v);

    // z < v with zs < z and μ(z, v) ≠ 0, with their columns
    let lv = v.length();
    let mut mus: Vec<(i64, usize, Arc<KlColumn>)> = Vec::new();
    for (z, pz) in pv.iter() {
        let lz = z.length();
        if lz >= lv || (lv - lz) % 2 == 0 || !z.has_right_descent(s) {
            continue;
        }
        let m = pz.coeff((lv - lz - 1) / 2);
        if m != 0 {
            mus.push((m, (lw - lz) / 2, kl_column(z)));
        }
    }

    let mut interval: HashSet<Perm> = HashSet::with_capacity(pv.len() * 2);
    for x in pv.keys() {
        interval.insert(x.clone());
        interval.insert(x.mul_s_right(s));
    }
    for x in interval {
        let xs = x.mul_s_right(s);
        let c = usize::from(x.has_right_descent(s));
        let mut p = QPoly::zero();
        if let Some(a) = pv.get(&xs) {
            p += &a.shift(1 - c);
        }
        if let Some(b) = pv.get(&x) {
            p += &b.shift(c);
        }
        for (m, k, pz) in &mus {
            if let Some(pxz) = pz.get(&x) {
                p -= &pxz.shift(*k).to_scaled(*m);
            }
        }
        if !p.is_zero() {
            col.insert(x, p);
        }
    }
    col
}

trait Scaled {
    fn to_scaled(&self, m: i64) -> QPoly;
}

impl Scaled for QPoly {
    fn to_scaled(&self, m: i64) -> QPoly {
        QPoly::new(self.coeffs().iter().map(|c| c * m).collect())
    }
}

/// The lower Bruhat interval `[e, w]`, sorted by length then lexicographically.
pub fn bruhat_interval(w: &Perm) -> Vec<Perm> {
    let mut v: Vec<Perm> = kl_column(w).keys().cloned().collect();
    v.sort_by_key(|p| (p.length(), p.clone()));
    v
}

/// `C'_w = v^{-ℓ(w)} Σ_{x ≤ w} P_{x,w}(v^2) T_x`.
pub fn cprime_element(w: &Perm) -> HeckeElement {
    let l = w.length() as i32;
    let mut h = HeckeElement::zero(w.n());
    for (x, p) in kl_column(w).iter() {
        h.add_term(x.clone(), &p.to_lpoly().shift(-l));
    }
    h
}

/// `B'_w = v^{-ℓ(w)} Σ_{x ≤ w} T_x`.
pub fn bprime_element(w: &Perm) -> HeckeElement {
    let c = LPoly::v_pow(-(w.length() as i32));
    let mut h = HeckeElement::zero(w.n());
    for x in kl_column(w).keys() {
        h.add_term(x.clone(), &c);
    }
    h
}

/// Coefficients of `h` in the `B'` basis, found by peeling off maximal terms.
pub fn expand_in_bprime(h: &HeckeElement) -> Vec<(Perm, LPoly)> {
    expand_triangular(h, bprime_element)
}

/// Coefficients of `h` in the `C'` basis.
pub fn expand_in_cprime(h: &HeckeElement) -> Vec<(Perm, LPoly)> {
    expand_triangular(h, cprime_element)
}

fn expand_triangular(h: &HeckeElement, basis: fn(&Perm) -> HeckeElement) -> Vec<(Perm, LPoly)> {
    let mut rest = h.clone();
    let mut out = Vec::new();
    while let Some((x, a)) = rest
        .terms()
        .max_by(|(p, _), (q, _)| p.length().cmp(&q.length()).then_with(|| q.cmp(p)))
        .map(|(p, a)| (p.clone(), a.clone()))
    {
        let c = a.shift(x.length() as i32);
        rest = rest.sub(&basis(&x).scale(&c)).expect("same rank");
        out.push((x, c));
    }
    out.sort_by_key(|(p, _)| (p.length(), p.clone()));
    out
}

/// Bar invariance tested through the `C'` expansion: `h` is bar invariant iff
/// every `C'` coefficient is.
pub fn is_bar_invariant_via_cprime(h: &HeckeElement) -> bool {
    expand_in_cprime(h).iter().all(|(_, c)| c.is_bar_invariant())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(kl_polynomial(&p("1234"), &p("4231")).unwrap().to_string(), "1+q");
        assert_eq!(kl_polynomial(&p("1234"), &p("3412")).unwrap().to_string(), "1+q");
        assert!(kl_polynomial(&p("321"), &p("312")).unwrap().is_zero());
    }

    #[test]
    fn cprime_s1() {
        let c = cprime_element(&p("213"));
        assert_eq!(c, bprime_element(&p("213")));
        assert_eq!(c.coeff(&Perm::identity(3)), LPoly::v_pow(-1));
    }

    #[test]
    fn expand_ts1() {
        let e = expand_in_bprime(&HeckeElement::t(&p("213")));
        assert_eq!(e, vec![(Perm::identity(3), LPoly::monomial(0, -1)), (p("213"), LPoly::v_pow(1))]);
    }
}
