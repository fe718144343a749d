//! Masks on reduced words and Deodhar's framework.
//!
//! A mask is a 0/1 vector on a fixed reduced word. Positions are 0-based in
//! the internal API; defect sets exposed through [`DefectProfile`] and JSON
//! use 1-based positions, matching the usual way of writing words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::kl::{bruhat_interval, kl_column};
use crate::perm::{check_reduced, Perm};
use crate::poly::{LPoly, QPoly};

/// Brute-force enumeration of all `2^p` masks is refused above this length.
pub const BRUTE_FORCE_MAX_LEN: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaskClass {
    PlainZero,
    PlainOne,
    ZeroDefect,
    OneDefect,
}

impl MaskClass {
    pub fn is_defect(self) -> bool {
        matches!(self, MaskClass::ZeroDefect | MaskClass::OneDefect)
    }

    /// `+` for zero-defects and plain ones.
    pub fn is_plus(self) -> bool {
        matches!(self, MaskClass::ZeroDefect | MaskClass::PlainOne)
    }

    pub fn glyph(self) -> char {
        match self {
            MaskClass::PlainZero => '0',
            MaskClass::PlainOne => '1',
            MaskClass::ZeroDefect => 'D',
            MaskClass::OneDefect => 'd',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectProfile {
    /// 1-based defect positions.
    pub defects: Vec<usize>,
    pub d: usize,
    pub classes: Vec<MaskClass>,
    pub value: Perm,
}

/// Per-position classification and the value `w^σ`.
pub fn classify(n: usize, word: &[usize], bits: &[bool]) -> (Vec<MaskClass>, Perm) {
    let mut u = Perm::identity(n);
    let mut classes = Vec::with_capacity(word.len());
    for (&s, &b) in word.iter().zip(bits) {
        let defect = u.has_right_descent(s);
        classes.push(match (b, defect) {
            (false, false) => MaskClass::PlainZero,
            (true, false) => MaskClass::PlainOne,
            (false, true) => MaskClass::ZeroDefect,
            (true, true) => MaskClass::OneDefect,
        });
        if b {
            u = u.mul_s_right(s);
        }
    }
    (classes, u)
}

/// `(w^σ, d(σ))`.
pub fn value_and_defects(n: usize, word: &[usize], bits: &[bool]) -> (Perm, usize) {
    let mut u = Perm::identity(n);
    let mut d = 0;
    for (&s, &b) in word.iter().zip(bits) {
        if u.has_right_descent(s) {
            d += 1;
        }
        if b {
            u = u.mul_s_right(s);
        }
    }
    (u, d)
}

/// 0-based defect positions.
pub fn defect_set(n: usize, word: &[usize], bits: &[bool]) -> BTreeSet<usize> {
    let (classes, _) = classify(n, word, bits);
    classes.iter().enumerate().filter(|(_, c)| c.is_defect()).map(|(j, _)| j).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    pub n: usize,
    pub word: Vec<usize>,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn new(n: usize, word: &[usize], bits: Vec<bool>) -> Result<Self> {
        check_reduced(n, word)?;
        if bits.len() != word.len() {
            return Err(Error::LengthMismatch { expected: word.len(), got: bits.len() });
        }
        Ok(Mask { n, word: word.to_vec(), bits })
    }

    pub fn from_bitstring(n: usize, word: &[usize], s: &str) -> Result<Self> {
        Mask::new(n, word, parse_bits(s)?)
    }

    pub fn value(&self) -> Perm {
        value_and_defects(self.n, &self.word, &self.bits).0
    }

    pub fn defect_profile(&self) -> DefectProfile {
        let (classes, value) = classify(self.n, &self.word, &self.bits);
        let defects: Vec<usize> =
            classes.iter().enumerate().filter(|(_, c)| c.is_defect()).map(|(j, _)| j + 1).collect();
        DefectProfile { d: defects.len(), defects, classes, value }
    }

    pub fn bitstring(&self) -> String {
        bits_to_string(&self.bits)
    }
}

impl fmt::Display for Mask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bitstring())
    }
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bad mask character {c:?}"))),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskSet {
    pub n: usize,
    pub word: Vec<usize>,
    #[serde(with = "bitstrings")]
    pub masks: Vec<Vec<bool>>,
}

mod bitstrings {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(masks: &[Vec<bool>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(masks.iter().map(|m| super::bits_to_string(m)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<bool>>, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        v.iter().map(|s| super::parse_bits(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prototype {
    /// `P_x(E) = Σ_{σ ∈ E, w^σ = x} q^{d(σ)}`.
    pub polys: BTreeMap<Perm, QPoly>,
    /// `h(E) = q^{-ℓ(w)/2} Σ_{σ ∈ E} q^{d(σ)} T_{w^σ}`.
    pub h: HeckeElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub x: Perm,
    pub expected: QPoly,
    pub got: QPoly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeodharReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl DeodharReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl MaskSet {
    pub fn new(n: usize, word: &[usize], masks: Vec<Vec<bool>>) -> Result<Self> {
        check_reduced(n, word)?;
        for m in &masks {
            if m.len() != word.len() {
                return Err(Error::LengthMismatch { expected: word.len(), got: m.len() });
            }
        }
        Ok(MaskSet { n, word: word.to_vec(), masks })
    }

    /// Every mask on the word.
    pub fn all(n: usize, word: &[usize]) -> Result<Self> {
        let masks = all_masks(word.len())?;
        MaskSet::new(n, word, masks)
    }

    pub fn w(&self) -> Perm {
        Perm::from_word(self.n, &self.word).expect("validated word")
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn is_distinct(&self) -> bool {
        let s: BTreeSet<&Vec<bool>> = self.masks.iter().collect();
        s.len() == self.masks.len()
    }

    pub fn prototype(&self) -> Prototype {
        let l = self.word.len() as i32;
        let mut polys: BTreeMap<Perm, QPoly> = BTreeMap::new();
        for m in &self.masks {
            let (x, d) = value_and_defects(self.n, &self.word, m);
            polys.entry(x).or_default().add_term(d, 1);
        }
        let mut h = HeckeElement::zero(self.n);
        for (x, p) in &polys {
            h.add_term(x.clone(), &p.to_lpoly().shift(-l));
        }
        Prototype { polys, h }
    }

    pub fn is_bounded(&self) -> bool {
        let w = self.w();
        let lw = w.length();
        self.prototype().polys.iter().all(|(x, p)| {
            x == &w || p.degree().map_or(true, |d| 2 * d + x.length() < lw)
        })
    }

    pub fn contains_all_ones(&self) -> bool {
        self.masks.iter().any(|m| m.iter().all(|&b| b))
    }

    pub fn closed_under_last_flip(&self) -> bool {
        if self.word.is_empty() {
            return true;
        }
        let set: BTreeSet<&Vec<bool>> = self.masks.iter().collect();
        self.masks.iter().all(|m| {
            let mut f = m.clone();
            let last = f.len() - 1;
            f[last] = !f[last];
            set.contains(&f)
        })
    }

    pub fn is_admissible(&self) -> bool {
        self.contains_all_ones() && self.closed_under_last_flip() && self.prototype().h.is_bar_invariant()
    }

    /// Compares `P_x(E)` with `P_{x,w}` for every `x <= w`.
    pub fn deodhar_check(&self) -> Result<DeodharReport> {
        if !self.is_bounded() {
            return Err(Error::Precondition("mask set is not bounded".into()));
        }
        if !self.is_admissible() {
            return Err(Error::Precondition("mask set is not admissible".into()));
        }
        Ok(self.compare_with_oracle())
    }

    /// The comparison part of [`MaskSet::deodhar_check`] without the preconditions.
    pub fn compare_with_oracle(&self) -> DeodharReport {
        let w = self.w();
        let proto = self.prototype();
        let col = kl_column(&w);
        let mut xs: BTreeSet<Perm> = proto.polys.keys().cloned().collect();
        xs.extend(col.keys().cloned());
        let mut mismatches = Vec::new();
        for x in &xs {
            let expected = col.get(x).cloned().unwrap_or_default();
            let got = proto.polys.get(x).cloned().unwrap_or_default();
            if expected != got {
                mismatches.push(Mismatch { x: x.clone(), expected, got });
            }
        }
        DeodharReport { checked: xs.len(), mismatches }
    }
}

/// All `2^p` masks, in lexicographic order of bitstrings.
pub fn all_masks(p: usize) -> Result<Vec<Vec<bool>>> {
    if p > BRUTE_FORCE_MAX_LEN {
        return Err(Error::GuardExceeded(format!("2^{p} masks exceeds the brute-force limit 2^{BRUTE_FORCE_MAX_LEN}")));
    }
    Ok((0u64..(1u64 << p)).map(|k| (0..p).map(|j| (k >> (p - 1 - j)) & 1 == 1).collect()).collect())
}

/// The unique mask with defect set exactly `defects` (0-based) and value `x`,
/// built from the right end: `r_{p+1} = x` and `r_i` is `r_{i+1}` or `r_{i+1} s`.
pub fn fwp_mask(word: &[usize], defects: &BTreeSet<usize>, x: &Perm) -> Option<Vec<bool>> {
    let mut r = x.clone();
    let mut bits = vec![false; word.len()];
    for i in (0..word.len()).rev() {
        let s = word[i];
        let descent = r.has_right_descent(s);
        let flip = if defects.contains(&i) { !descent } else { descent };
        if flip {
            bits[i] = true;
            r = r.mul_s_right(s);
        }
    }
    r.is_identity().then_some(bits)
}

/// All masks with defect set exactly `defects`, one per value in `F_w^P`.
pub fn fwp_ideal(n: usize, word: &[usize], defects: &BTreeSet<usize>) -> Result<MaskSet> {
    let w = check_reduced(n, word)?;
    let masks = bruhat_interval(&w).iter().filter_map(|x| fwp_mask(word, defects, x)).collect();
    MaskSet::new(n, word, masks)
}

/// Masks of [`fwp_ideal`] whose value lies below `bound`.
pub fn fwp_ideal_below(word: &[usize], defects: &BTreeSet<usize>, bound: &Perm) -> Vec<Vec<bool>> {
    bruhat_interval(bound).iter().filter_map(|x| fwp_mask(word, defects, x)).collect()
}

/// `q^{-ℓ/2} Σ q^{d(σ)} T_{w^σ}` over a list of masks, for callers that do not
/// need a full [`MaskSet`].
pub fn h_of(n: usize, word: &[usize], masks: &[Vec<bool>]) -> HeckeElement {
    let l = word.len() as i32;
    let mut h = HeckeElement::zero(n);
    for m in masks {
        let (x, d) = value_and_defects(n, word, m);
        h.add_term(x, &LPoly::v_pow(2 * d as i32 - l));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let m = Mask::from_bitstring(3, &[1, 2, 1], "100").unwrap();
        let prof = m.defect_profile();
        assert_eq!(prof.defects, vec![3]);
        assert_eq!(prof.value, "213".parse().unwrap());
        let m = Mask::from_bitstring(3, &[1, 2, 1], "101").unwrap();
        assert_eq!(m.defect_profile().d, 1);
        assert!(m.value().is_identity());
    }

    #[test]
    fn fwp_example() {
        let word = [2, 1, 3, 2, 3];
        let p: BTreeSet<usize> = [4].into_iter().collect();
        let x = Perm::from_word(4, &[2, 1]).unwrap();
        assert_eq!(bits_to_string(&fwp_mask(&word, &p, &x).unwrap()), "11101");
        let w = Perm::from_word(4, &word).unwrap();
        assert!(fwp_mask(&word, &p, &w).is_none());
    }

    #[test]
    fn all_masks_s1s2s1() {
        let e = MaskSet::all(3, &[1, 2, 1]).unwrap();
        let proto = e.prototype();
        assert_eq!(proto.polys[&Perm::identity(3)].to_string(), "1+q");
        assert!(e.is_admissible());
        assert!(!e.is_bounded());
    }
}
