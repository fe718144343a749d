//! Permutations of `{1..n}` in one-line notation and the type-A Coxeter
//! combinatorics built on them.
//!
//! Composition is as functions: `(a * b)(i) = a(b(i))`. Right multiplication
//! by `s_i` swaps the entries in positions `i` and `i+1`; left multiplication
//! swaps the values `i` and `i+1`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank accepted anywhere in the crate.
pub const MAX_RANK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Perm(Vec<u8>);

impl TryFrom<Vec<u8>> for Perm {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<u8> {
    fn from(p: Perm) -> Vec<u8> {
        p.0
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for &x in &self.0 {
                write!(f, "{}", x)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// Accepts `4,2,3,1`, `4 2 3 1`, `[4231]` or, for n ≤ 9, the bare digits `4231`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
        let vals: Vec<u8> = if t.contains(',') || t.contains(' ') {
            t.split(|c| c == ',' || c == ' ')
                .filter(|x| !x.is_empty())
                .map(|x| x.trim().parse::<u8>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
                .collect::<Result<_>>()?
        } else {
            t.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        Perm::new(vals)
    }
}

impl Perm {
    pub fn new(v: Vec<u8>) -> Result<Self> {
        let n = v.len();
        if n == 0 || n > MAX_RANK {
            return Err(Error::InvalidPermutation(format!("rank {n} out of range")));
        }
        let mut seen = vec![false; n + 1];
        for &x in &v {
            let x = x as usize;
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{v:?}")));
            }
            seen[x] = true;
        }
        Ok(Perm(v))
    }

    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&n), "rank {n} out of range");
        Perm((1..=n as u8).collect())
    }

    /// The product `s_{w_1} s_{w_2} ... s_{w_k}` in `S_n`.
    pub fn from_word(n: usize, word: &[usize]) -> Result<Self> {
        let mut p = Perm::identity(n);
        for &i in word {
            check_generator(i, n)?;
            p.0.swap(i - 1, i);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// `w(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &x)| x as usize == k + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (k, &x) in self.0.iter().enumerate() {
            inv[x as usize - 1] = (k + 1) as u8;
        }
        Perm(inv)
    }

    pub fn multiply(&self, other: &Perm) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::RankMismatch(self.n(), other.n()));
        }
        Ok(Perm(other.0.iter().map(|&b| self.0[b as usize - 1]).collect()))
    }

    /// `w · s_i`: swaps positions `i` and `i+1`.
    pub fn mul_s_right(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.swap(i - 1, i);
        Perm(v)
    }

    /// `s_i · w`: swaps the values `i` and `i+1`.
    pub fn mul_s_left(&self, i: usize) -> Self {
        let a = i as u8;
        Perm(
            self.0
                .iter()
                .map(|&x| {
                    if x == a {
                        a + 1
                    } else if x == a + 1 {
                        a
                    } else {
                        x
                    }
                })
                .collect(),
        )
    }

    pub fn mul_s(&self, i: usize, side: Side) -> Self {
        match side {
            Side::Left => self.mul_s_left(i),
            Side::Right => self.mul_s_right(i),
        }
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let v = &self.0;
        let mut c = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] > v[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn has_right_descent(&self, i: usize) -> bool {
        self.0[i - 1] > self.0[i]
    }

    pub fn has_left_descent(&self, i: usize) -> bool {
        // i+1 appears before i
        let inv = self.inverse();
        inv.has_right_descent(i)
    }

    pub fn right_descents(&self) -> BTreeSet<usize> {
        (1..self.n()).filter(|&i| self.has_right_descent(i)).collect()
    }

    pub fn left_descents(&self) -> BTreeSet<usize> {
        self.inverse().right_descents()
    }

    pub fn descents(&self, side: Side) -> BTreeSet<usize> {
        match side {
            Side::Left => self.left_descents(),
            Side::Right => self.right_descents(),
        }
    }

    pub fn right_ascents(&self) -> BTreeSet<usize> {
        (1..self.n()).filter(|&i| !self.has_right_descent(i)).collect()
    }

    /// `r[i][j] = #{k <= j : w(k) <= i}` for `1 <= i, j <= n`, stored 0-based.
    pub fn rank_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.n();
        let mut r = vec![vec![0u32; n]; n];
        for i in 0..n {
            let mut acc = 0;
            for j in 0..n {
                if (self.0[j] as usize) <= i + 1 {
                    acc += 1;
                }
                r[i][j] = acc;
            }
        }
        r
    }

    /// Bruhat order via rank matrices.
    pub fn bruhat_leq(&self, w: &Perm) -> Result<bool> {
        if self.n() != w.n() {
            return Err(Error::RankMismatch(self.n(), w.n()));
        }
        Ok(bruhat_leq_unchecked(self.as_slice(), w.as_slice()))
    }

    /// One reduced word, found by repeatedly stripping the smallest right descent.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut rev = Vec::with_capacity(self.length());
        while let Some(i) = (1..w.n()).find(|&i| w.has_right_descent(i)) {
            rev.push(i);
            w = w.mul_s_right(i);
        }
        rev.reverse();
        rev
    }

    /// All reduced words, sorted lexicographically.
    pub fn reduced_words(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut suffix = Vec::new();
        collect_reduced_words(self, &mut suffix, &mut out);
        out.sort();
        out
    }

    pub fn is_cograssmannian(&self) -> bool {
        self.right_ascents().len() <= 1
    }

    pub fn is_grassmannian(&self) -> bool {
        self.right_descents().len() <= 1
    }

    /// Avoids the pattern 3412: no `i1<i2<i3<i4` with `w(i3)<w(i4)<w(i1)<w(i2)`.
    pub fn is_covexillary(&self) -> bool {
        let v = &self.0;
        let n = v.len();
        for a in 0..n {
            for b in a + 1..n {
                if v[a] >= v[b] {
                    continue;
                }
                for c in b + 1..n {
                    if v[c] >= v[a] {
                        continue;
                    }
                    for d in c + 1..n {
                        if v[c] < v[d] && v[d] < v[a] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Checks the lifting property for `x < w`, `s_i` a right descent of `w`
    /// and a right ascent of `x`: then `x s_i <= w` and `x <= w s_i`.
    pub fn lifting_check(x: &Perm, w: &Perm, i: usize) -> Result<bool> {
        if x.n() != w.n() {
            return Err(Error::RankMismatch(x.n(), w.n()));
        }
        check_generator(i, w.n())?;
        if x == w || !x.bruhat_leq(w)? {
            return Err(Error::Precondition("x < w required".into()));
        }
        if !w.has_right_descent(i) || x.has_right_descent(i) {
            return Err(Error::Precondition(format!(
                "s_{i} must be a right descent of w and a right ascent of x"
            )));
        }
        Ok(x.mul_s_right(i).bruhat_leq(w)? && x.bruhat_leq(&w.mul_s_right(i))?)
    }

    /// Longest element of the parabolic subgroup generated by `J`.
    pub fn parabolic_longest(j: &BTreeSet<usize>, n: usize) -> Result<Self> {
        for &i in j {
            check_generator(i, n)?;
        }
        let mut v: Vec<u8> = (1..=n as u8).collect();
        let mut start = 0;
        while start < n {
            let mut end = start;
            while end + 1 < n && j.contains(&(end + 1)) {
                end += 1;
            }
            v[start..=end].reverse();
            start = end + 1;
        }
        Ok(Perm(v))
    }

    /// `w = v u` with `u` in `W_J` and `v` having no right descent in `J`.
    pub fn parabolic_decompose(&self, j: &BTreeSet<usize>) -> Result<(Perm, Perm)> {
        for &i in j {
            check_generator(i, self.n())?;
        }
        let mut v = self.clone();
        let mut u_rev = Vec::new();
        while let Some(&i) = j.iter().find(|&&i| v.has_right_descent(i)) {
            v = v.mul_s_right(i);
            u_rev.push(i);
        }
        u_rev.reverse();
        let u = Perm::from_word(self.n(), &u_rev)?;
        Ok((v, u))
    }

    /// All permutations of rank `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (1..=n as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            if !next_permutation(&mut cur) {
                break;
            }
        }
        out
    }
}

pub(crate) fn bruhat_leq_unchecked(x: &[u8], w: &[u8]) -> bool {
    let n = x.len();
    // compare r_x[i][j] >= r_w[i][j] column by column
    let mut cx = vec![0u32; n + 1];
    let mut cw = vec![0u32; n + 1];
    for j in 0..n {
        for i in x[j] as usize..=n {
            cx[i] += 1;
        }
        for i in w[j] as usize..=n {
            cw[i] += 1;
        }
        for i in 1..=n {
            if cx[i] < cw[i] {
                return false;
            }
        }
    }
    true
}

fn collect_reduced_words(w: &Perm, suffix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if w.is_identity() {
        out.push(suffix.iter().rev().copied().collect());
        return;
    }
    for i in w.right_descents() {
        suffix.push(i);
        collect_reduced_words(&w.mul_s_right(i), suffix, out);
        suffix.pop();
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

pub fn check_generator(i: usize, n: usize) -> Result<()> {
    if i == 0 || i >= n {
        Err(Error::InvalidGenerator(i, n))
    } else {
        Ok(())
    }
}

/// Validates that `word` is a reduced expression in `S_n`.
pub fn check_reduced(n: usize, word: &[usize]) -> Result<Perm> {
    let mut p = Perm::identity(n);
    for &i in word {
        check_generator(i, n)?;
        if p.has_right_descent(i) {
            return Err(Error::NotReduced);
        }
        p = p.mul_s_right(i);
    }
    Ok(p)
}

/// Parses a comma separated generator sequence such as `2,1,3,2,3`.
pub fn parse_word(s: &str) -> Result<Vec<usize>> {
    s.split(|c| c == ',' || c == ' ')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().trim_start_matches('s').parse::<usize>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
        .collect()
}

pub fn word_to_string(word: &[usize]) -> String {
    word.iter().map(|i| format!("s{i}")).collect::<Vec<_>>().join("")
}
