//! Heaps of words, string diagrams, and the heap of a cograssmannian
//! permutation `w = v w_0^J` with its ridgeline.
//!
//! The left end of a word is the top of the heap. Entries are identified by
//! their 0-based position in the word.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{check_generator, check_reduced, Perm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heap {
    n: usize,
    word: Vec<usize>,
    levels: Vec<i32>,
    /// `above[i][j]`: entry `i` lies strictly above entry `j`.
    above: Vec<Vec<bool>>,
    covers: Vec<(usize, usize)>,
}

impl Heap {
    pub fn new(n: usize, word: &[usize]) -> Result<Self> {
        for &i in word {
            check_generator(i, n)?;
        }
        let p = word.len();
        let mut above = vec![vec![false; p]; p];
        for j in 0..p {
            for i in (0..j).rev() {
                if word[i].abs_diff(word[j]) <= 1 && !above[i][j] {
                    above[i][j] = true;
                    for k in 0..i {
                        if above[k][i] {
                            above[k][j] = true;
                        }
                    }
                }
            }
        }
        let mut covers = Vec::new();
        for i in 0..p {
            for j in i + 1..p {
                if above[i][j] && !(i + 1..j).any(|k| above[i][k] && above[k][j]) {
                    covers.push((i, j));
                }
            }
        }
        let mut levels = vec![0i32; p];
        for j in (0..p).rev() {
            let mut y = (word[j] % 2) as i32;
            for k in j + 1..p {
                if word[k] == word[j] {
                    y = y.max(levels[k] + 2);
                } else if word[k].abs_diff(word[j]) == 1 {
                    y = y.max(levels[k] + 1);
                }
            }
            levels[j] = y;
        }
        if let Some(&m) = levels.iter().min() {
            // keep the parity of column + level fixed
            let shift = m - m.rem_euclid(2);
            for y in &mut levels {
                *y -= shift;
            }
        }
        Ok(Heap { n, word: word.to_vec(), levels, above, covers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn column(&self, j: usize) -> usize {
        self.word[j]
    }

    pub fn level(&self, j: usize) -> i32 {
        self.levels[j]
    }

    pub fn levels(&self) -> &[i32] {
        &self.levels
    }

    /// Entry `i` lies strictly above entry `j`.
    pub fn is_above(&self, i: usize, j: usize) -> bool {
        self.above[i][j]
    }

    /// Covering pairs `(upper, lower)`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Entries of column `c` from top to bottom.
    pub fn column_entries(&self, c: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.word[j] == c).collect()
    }

    /// Entries with nothing above them.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| (0..j).all(|i| !self.above[i][j])).collect()
    }

    /// Entries with nothing below them.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| (i + 1..self.len()).all(|j| !self.above[i][j])).collect()
    }

    /// The set together with every entry above one of its members.
    pub fn up_closure(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = set.clone();
        for &j in set {
            for i in 0..j {
                if self.above[i][j] {
                    out.insert(i);
                }
            }
        }
        out
    }

    fn upper_cover_in(&self, j: usize, c: usize) -> Option<usize> {
        self.covers.iter().find(|&&(a, b)| b == j && self.word[a] == c).map(|&(a, _)| a)
    }

    fn lower_cover_in(&self, j: usize, c: usize) -> Option<usize> {
        self.covers.iter().find(|&&(a, b)| a == j && self.word[b] == c).map(|&(_, b)| b)
    }

    pub fn nw(&self, j: usize) -> Option<usize> {
        let c = self.word[j];
        if c == 1 {
            None
        } else {
            self.upper_cover_in(j, c - 1)
        }
    }

    pub fn ne(&self, j: usize) -> Option<usize> {
        self.upper_cover_in(j, self.word[j] + 1)
    }

    pub fn sw(&self, j: usize) -> Option<usize> {
        let c = self.word[j];
        if c == 1 {
            None
        } else {
            self.lower_cover_in(j, c - 1)
        }
    }

    pub fn se(&self, j: usize) -> Option<usize> {
        self.lower_cover_in(j, self.word[j] + 1)
    }

    /// Entries ordered by level from the top, left to right within a level.
    pub fn by_levels(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by_key(|&j| (-self.levels[j], self.word[j]));
        idx
    }

    /// Length of the longest chain from `j` down to a minimal element, counting entries.
    pub fn height(&self, j: usize) -> usize {
        let p = self.len();
        let mut h = vec![1usize; p];
        for a in (0..p).rev() {
            for b in a + 1..p {
                if self.above[a][b] {
                    h[a] = h[a].max(h[b] + 1);
                }
            }
        }
        h[j]
    }

    /// Strand picture for a 0/1 mask: strings start in order `1..n` at the top,
    /// cross at entries with bit 1 and bounce at entries with bit 0.
    pub fn strings(&self, bits: &[bool]) -> Result<StringDiagram> {
        if bits.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: bits.len() });
        }
        let mut slots: Vec<u8> = (1..=self.n as u8).collect();
        let mut orders = vec![slots.clone()];
        let mut entering = Vec::with_capacity(self.len());
        let mut exiting = Vec::with_capacity(self.len());
        for (j, &c) in self.word.iter().enumerate() {
            entering.push((slots[c - 1], slots[c]));
            if bits[j] {
                slots.swap(c - 1, c);
            }
            exiting.push((slots[c - 1], slots[c]));
            orders.push(slots.clone());
        }
        Ok(StringDiagram { entering, exiting, orders })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StringDiagram {
    /// Per entry: labels arriving from the NW and from the NE.
    pub entering: Vec<(u8, u8)>,
    /// Per entry: labels leaving to the SW and to the SE.
    pub exiting: Vec<(u8, u8)>,
    /// Strand order at the top and after each entry.
    pub orders: Vec<Vec<u8>>,
}

impl StringDiagram {
    /// The strand order read at the bottom of the heap.
    pub fn bottom(&self) -> Perm {
        Perm::new(self.orders.last().cloned().unwrap_or_default()).expect("strand order is a permutation")
    }

    /// Larger label meeting at entry `j`.
    pub fn big(&self, j: usize) -> u8 {
        self.entering[j].0.max(self.entering[j].1)
    }

    /// Smaller label meeting at entry `j`.
    pub fn small(&self, j: usize) -> u8 {
        self.entering[j].0.min(self.entering[j].1)
    }
}

/// The heap of a cograssmannian `w = v w_0^J` on its canonical word.
#[derive(Debug, Clone)]
pub struct CogHeap {
    pub w: Perm,
    /// The unique right ascent, absent for the longest element.
    pub z: Option<usize>,
    pub v: Perm,
    pub w0j: Perm,
    pub word: Vec<usize>,
    /// Positions `0..v_len` of `word` spell `v`.
    pub v_len: usize,
    pub heap: Heap,
    /// Heap of `v` alone (the same entries as the first `v_len` positions).
    pub v_heap: Heap,
}

impl CogHeap {
    pub fn new(w: &Perm) -> Result<Self> {
        let word = canonical_cog_word(w)?;
        let n = w.n();
        let ascents = w.right_ascents();
        let z = ascents.iter().next().copied();
        let j: BTreeSet<usize> = (1..n).filter(|&i| Some(i) != z).collect();
        let w0j = Perm::parabolic_longest(&j, n)?;
        let v = w.multiply(&w0j)?;
        let v_len = v.length();
        let heap = Heap::new(n, &word)?;
        let v_heap = Heap::new(n, &word[..v_len])?;
        Ok(CogHeap { w: w.clone(), z, v, w0j, word, v_len, heap, v_heap })
    }

    pub fn n(&self) -> usize {
        self.w.n()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// The parabolic generating set `S \ {s_z}`.
    pub fn j_set(&self) -> BTreeSet<usize> {
        (1..self.n()).filter(|&i| Some(i) != self.z).collect()
    }

    /// Number of entries of `v` in column `c`.
    pub fn v_column_count(&self, c: usize) -> usize {
        self.word[..self.v_len].iter().filter(|&&d| d == c).count()
    }

    pub fn ridgeline(&self) -> Ridgeline {
        let vw = &self.word[..self.v_len];
        if vw.is_empty() {
            return Ridgeline { first_column: 0, tops: vec![], parens: String::new(), valleys: vec![] };
        }
        let c_min = *vw.iter().min().expect("nonempty");
        let c_max = *vw.iter().max().expect("nonempty");
        let tops: Vec<usize> = (c_min..=c_max)
            .map(|c| vw.iter().position(|&d| d == c).expect("heap of v spans a contiguous column range"))
            .collect();
        let mut parens = String::new();
        for k in 0..tops.len().saturating_sub(1) {
            let (a, b) = (self.v_heap.level(tops[k]), self.v_heap.level(tops[k + 1]));
            parens.push(if b < a { '(' } else { ')' });
        }
        let bytes = parens.as_bytes();
        let mut valleys = Vec::new();
        for k in 0..bytes.len().saturating_sub(1) {
            if bytes[k] == b'(' && bytes[k + 1] == b')' {
                let col = c_min + k + 1;
                valleys.push(Valley { column: col, capacity: self.v_column_count(col), open_step: k });
            }
        }
        Ridgeline { first_column: c_min, tops, parens, valleys }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ridgeline {
    /// Leftmost column of the heap of `v`.
    pub first_column: usize,
    /// Top entry of each column of `v`, left to right.
    pub tops: Vec<usize>,
    pub parens: String,
    pub valleys: Vec<Valley>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Valley {
    pub column: usize,
    pub capacity: usize,
    /// Index of the valley's `(` in the parenthesis string.
    pub open_step: usize,
}

/// Canonical reduced word of a cograssmannian permutation: the heap of `v`
/// read by levels from the top, followed by
/// `(s_1 … s_{z-1})(s_1 … s_{z-2})…(s_1)(s_{n-1} … s_{z+1})(s_{n-1} … s_{z+2})…(s_{n-1})`.
pub fn canonical_cog_word(w: &Perm) -> Result<Vec<usize>> {
    if !w.is_cograssmannian() {
        return Err(Error::NotCograssmannian(w.to_string()));
    }
    let n = w.n();
    let z = w.right_ascents().into_iter().next();
    let mut word = Vec::with_capacity(w.length());
    let Some(z) = z else {
        for k in (1..n).rev() {
            word.extend(1..=k);
        }
        return Ok(word);
    };
    let j: BTreeSet<usize> = (1..n).filter(|&i| i != z).collect();
    let w0j = Perm::parabolic_longest(&j, n)?;
    let v = w.multiply(&w0j)?;
    let vh = Heap::new(n, &v.reduced_word())?;
    word.extend(vh.by_levels().into_iter().map(|k| vh.column(k)));
    for k in (1..z).rev() {
        word.extend(1..=k);
    }
    for k in z + 1..n {
        word.extend((k..n).rev());
    }
    let check = check_reduced(n, &word)?;
    if check != *w {
        return Err(Error::Internal(format!("canonical word multiplies to {check}, expected {w}")));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_heap_levels() {
        let h = Heap::new(5, &[2, 3, 1, 2, 4]).unwrap();
        assert_eq!(h.levels(), &[2, 1, 1, 0, 0]);
        let mut c = h.covers().to_vec();
        c.sort();
        assert_eq!(c, vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 3)]);
    }

    #[test]
    fn running_example_word_and_ridgeline() {
        let w = Perm::from_word(8, &[1, 5, 7, 2, 4, 6, 3, 5, 4, 1, 2, 3, 1, 2, 1, 7, 6, 5, 7, 6, 7]).unwrap();
        let ch = CogHeap::new(&w).unwrap();
        assert_eq!(ch.word, vec![1, 5, 7, 2, 4, 6, 3, 5, 4, 1, 2, 3, 1, 2, 1, 7, 6, 5, 7, 6, 7]);
        let r = ch.ridgeline();
        assert_eq!(r.parens, "(())()");
        let cols: Vec<(usize, usize)> = r.valleys.iter().map(|v| (v.column, v.capacity)).collect();
        assert_eq!(cols, vec![(3, 1), (6, 1)]);
    }

    #[test]
    fn strings_all_ones() {
        let h = Heap::new(3, &[1, 2, 1]).unwrap();
        let sd = h.strings(&[false, true, true]).unwrap();
        assert_eq!(sd.bottom(), Perm::from_word(3, &[2, 1]).unwrap());
    }
}
