//! Combinatorial side of the Bott–Samelson resolution of a reduced word.
//!
//! Fixed points are recorded as sorted coordinate index sets: position `j`
//! carries the labels `{w^{σ[j]}(1), …, w^{σ[j]}(d_j)}` where `σ[j]` is the
//! mask truncated after `j` and `d_j` the generator at `j`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{all_masks, classify, value_and_defects, Mask};
use crate::perm::{check_reduced, Perm};
use crate::poly::QPoly;

/// `lpred`, `rpred` and `last` for a word. Positions are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BsIndexing {
    pub n: usize,
    pub word: Vec<usize>,
    pub lpred: Vec<Option<usize>>,
    pub rpred: Vec<Option<usize>>,
    /// `last[d - 1]` is the last position carrying `s_d`.
    pub last: Vec<Option<usize>>,
}

impl BsIndexing {
    pub fn new(n: usize, word: &[usize]) -> Self {
        let mut latest: Vec<Option<usize>> = vec![None; n + 1];
        let mut lpred = Vec::with_capacity(word.len());
        let mut rpred = Vec::with_capacity(word.len());
        for (j, &d) in word.iter().enumerate() {
            lpred.push(latest[d - 1]);
            rpred.push(latest.get(d + 1).copied().flatten());
            latest[d] = Some(j);
        }
        let last = (1..n).map(|d| latest[d]).collect();
        BsIndexing { n, word: word.to_vec(), lpred, rpred, last }
    }

    pub fn last(&self, d: usize) -> Option<usize> {
        self.last.get(d.wrapping_sub(1)).copied().flatten()
    }
}

/// The `±` string of a mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PmEncoding(pub Vec<bool>);

impl PmEncoding {
    pub fn plus_count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for PmEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| if b { '+' } else { '-' }).collect();
        write!(f, "{s}")
    }
}

impl FromStr for PmEncoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(true),
                '-' | '−' => Ok(false),
                _ => Err(Error::Parse(format!("unexpected sign {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PmEncoding)
    }
}

impl Serialize for PmEncoding {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PmEncoding {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn encode_pm(m: &Mask) -> PmEncoding {
    let (classes, _) = classify(m.n, &m.word, &m.bits);
    PmEncoding(classes.iter().map(|c| c.is_plus()).collect())
}

/// Rebuilds the mask left to right: whether a position is a defect only
/// depends on the bits before it.
pub fn decode_pm(n: usize, word: &[usize], e: &PmEncoding) -> Result<Mask> {
    check_reduced(n, word)?;
    if e.0.len() != word.len() {
        return Err(Error::LengthMismatch { expected: word.len(), got: e.0.len() });
    }
    let mut u = Perm::identity(n);
    let mut bits = Vec::with_capacity(word.len());
    for (&s, &plus) in word.iter().zip(&e.0) {
        let b = plus ^ u.has_right_descent(s);
        if b {
            u = u.mul_s_right(s);
        }
        bits.push(b);
    }
    Mask::new(n, word, bits)
}

/// Per-position coordinate index sets, 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BsFixedPoint(pub Vec<Vec<u8>>);

impl BsFixedPoint {
    /// `V_{lpred(j)} ⊂ V_j ⊂ V_{rpred(j)}`, with `E_{d_j - 1}` and `E_{d_j + 1}`
    /// standing in for absent predecessors.
    pub fn satisfies_chains(&self, idx: &BsIndexing) -> bool {
        self.0.iter().enumerate().all(|(j, v)| {
            let d = idx.word[j];
            let lower = match idx.lpred[j] {
                Some(k) => self.0[k].clone(),
                None => staircase_set(d - 1),
            };
            let upper = match idx.rpred[j] {
                Some(k) => self.0[k].clone(),
                None => staircase_set(d + 1),
            };
            v.len() == d && is_subset(&lower, v) && is_subset(v, &upper)
        })
    }
}

fn staircase_set(d: usize) -> Vec<u8> {
    (1..=d as u8).collect()
}

fn is_subset(a: &[u8], b: &[u8]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// The sorted first `d` values of `p`.
pub fn initial_set(p: &Perm, d: usize) -> Vec<u8> {
    let mut s = p.as_slice()[..d].to_vec();
    s.sort_unstable();
    s
}

pub fn fixed_point(m: &Mask) -> BsFixedPoint {
    let mut u = Perm::identity(m.n);
    let mut out = Vec::with_capacity(m.word.len());
    for (&s, &b) in m.word.iter().zip(&m.bits) {
        if b {
            u = u.mul_s_right(s);
        }
        out.push(initial_set(&u, s));
    }
    BsFixedPoint(out)
}

/// Index sets of the flag `(V_{last(1)}, …, V_{last(n-1)})`. A generator that
/// never occurs contributes its standard subspace.
pub fn pi_image(m: &Mask) -> Vec<Vec<u8>> {
    let fp = fixed_point(m);
    let idx = BsIndexing::new(m.n, &m.word);
    (1..m.n)
        .map(|d| match idx.last(d) {
            Some(j) => fp.0[j].clone(),
            None => staircase_set(d),
        })
        .collect()
}

/// `({p(1)}, {p(1), p(2)}, …)` sorted, for `d = 1..n-1`.
pub fn staircase(p: &Perm) -> Vec<Vec<u8>> {
    (1..p.n()).map(|d| initial_set(p, d)).collect()
}

pub fn cell_dimension(m: &Mask) -> usize {
    encode_pm(m).plus_count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberProfile {
    pub x: Perm,
    /// `Σ_{w^σ = x} q^{d(σ)}`.
    pub poly: QPoly,
    /// Largest `d(σ)` over the fiber; absent when the fiber is empty.
    pub max_defects: Option<usize>,
    /// `2 d(σ) < ℓ(w) - ℓ(x)` for every `σ` in the fiber (vacuous when `x = w`).
    pub small_at_x: bool,
    /// The same inequality over every `x < w`.
    pub small: bool,
}

/// Defect polynomials of every fiber, keyed by the value.
pub fn fiber_polynomials(n: usize, word: &[usize]) -> Result<BTreeMap<Perm, QPoly>> {
    check_reduced(n, word)?;
    let masks = all_masks(word.len())?;
    let parts: Vec<(Perm, usize)> = masks.par_iter().map(|bits| value_and_defects(n, word, bits)).collect();
    let mut out: BTreeMap<Perm, QPoly> = BTreeMap::new();
    for (x, d) in parts {
        out.entry(x).or_default().add_term(d, 1);
    }
    Ok(out)
}

pub fn fiber_profile(n: usize, word: &[usize], x: &Perm) -> Result<FiberProfile> {
    if x.n() != n {
        return Err(Error::RankMismatch(n, x.n()));
    }
    let w = check_reduced(n, word)?;
    let lw = w.length();
    let all = fiber_polynomials(n, word)?;
    let small_for = |y: &Perm, p: &QPoly| y == &w || p.degree().map_or(true, |d| 2 * d < lw - y.length());
    let poly = all.get(x).cloned().unwrap_or_default();
    Ok(FiberProfile {
        x: x.clone(),
        max_defects: poly.degree(),
        small_at_x: small_for(x, &poly),
        small: all.iter().all(|(y, p)| small_for(y, p)),
        poly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: [usize; 3] = [1, 2, 1];

    fn m(s: &str) -> Mask {
        Mask::from_bitstring(3, &W, s).unwrap()
    }

    #[test]
    fn small_table() {
        assert_eq!(encode_pm(&m("011")).to_string(), "-++");
        assert_eq!(fixed_point(&m("011")).0, vec![vec![1], vec![1, 3], vec![3]]);
        assert_eq!(fixed_point(&m("000")).0, vec![vec![1], vec![1, 2], vec![1]]);
        assert_eq!(pi_image(&m("101")), staircase(&Perm::identity(3)));
        assert_eq!(cell_dimension(&m("111")), 3);
        assert_eq!(cell_dimension(&m("000")), 0);
    }

    #[test]
    fn decode_inverts_encode() {
        let e: PmEncoding = "-++".parse().unwrap();
        assert_eq!(decode_pm(3, &W, &e).unwrap(), m("011"));
    }

    #[test]
    fn indexing() {
        let idx = BsIndexing::new(3, &W);
        assert_eq!(idx.lpred, vec![None, Some(0), None]);
        assert_eq!(idx.rpred, vec![None, None, Some(1)]);
        assert_eq!(idx.last(1), Some(2));
        assert_eq!(idx.last(2), Some(1));
    }

    #[test]
    fn fiber_of_identity() {
        let f = fiber_profile(3, &W, &Perm::identity(3)).unwrap();
        assert_eq!(f.poly.to_string(), "1+q");
        assert!(!f.small);
        let top = fiber_profile(3, &W, &"321".parse().unwrap()).unwrap();
        assert_eq!(top.poly, QPoly::one());
    }
}
