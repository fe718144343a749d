//! Zelevinsky data of a cograssmannian permutation: peak orderings and their
//! rectangles, the fixed-point indexing by partition tuples `τ`, the
//! Kazhdan–Lusztig formula for neat orderings, and the mask set `{σ(τ)}`.
//!
//! Index sets are sorted lists of 1-based coordinate labels. Rectangle and
//! peak indices are 0-based in the API.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bs::{self, cell_dimension, initial_set};
use crate::error::{Error, Result};
use crate::heap::CogHeap;
use crate::mask::{bits_to_string, Mask, MaskSet};
use crate::perm::Perm;
use crate::poly::QPoly;

/// Enumerating `T_P` is refused above this many elements.
pub const TAU_ENUMERATION_MAX: usize = 4_000_000;

/// Orderings are enumerated only up to this many peaks.
pub const MAX_PEAKS_FOR_ORDERINGS: usize = 8;

/// Per-rectangle numbers. `lpred`/`rpred` index earlier rectangles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectData {
    pub d: usize,
    pub ldim: usize,
    pub rdim: usize,
    pub lpred: Option<usize>,
    pub rpred: Option<usize>,
}

impl RectData {
    /// Maximal number of parts of a partition in the rectangle.
    pub fn rows(&self) -> usize {
        self.d - self.ldim
    }

    /// Maximal part size.
    pub fn cols(&self) -> usize {
        self.rdim - self.d
    }
}

/// The numeric skeleton of an ordering: enough to move between `τ` and
/// fixed points without a heap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZelShape {
    pub n: usize,
    pub z: usize,
    pub rects: Vec<RectData>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TauDatum {
    pub partitions: Vec<Vec<usize>>,
    pub x_tau: Perm,
}

impl TauDatum {
    pub fn dimension(&self) -> usize {
        self.partitions.iter().flatten().sum::<usize>() + self.x_tau.length()
    }
}

impl fmt::Display for TauDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .partitions
            .iter()
            .map(|p| if p.is_empty() { "()".into() } else { format!("({})", join(p)) })
            .collect();
        write!(f, "{}; {}", parts.join(" "), self.x_tau)
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn tau_dimension(tau: &TauDatum) -> usize {
    tau.dimension()
}

/// A fixed point `[W_1, …, W_{p-1}, F_1, …, F_{n-1}]` with the derived sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZelFixedPoint {
    pub w: Vec<Vec<u8>>,
    pub f: Vec<Vec<u8>>,
    pub a: Vec<Vec<u8>>,
    pub t: Vec<Vec<u8>>,
    pub d: Vec<Vec<u8>>,
}

impl ZelFixedPoint {
    pub fn key(&self) -> (Vec<Vec<u8>>, Vec<Vec<u8>>) {
        (self.w.clone(), self.f.clone())
    }
}

fn range_set(k: usize) -> Vec<u8> {
    (1..=k as u8).collect()
}

fn minus(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

fn subset(a: &[u8], b: &[u8]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn union(a: &[u8], b: &[u8]) -> Vec<u8> {
    let s: BTreeSet<u8> = a.iter().chain(b).copied().collect();
    s.into_iter().collect()
}

/// Weakly decreasing sequences with at most `rows` positive parts, each at most `cols`.
pub fn partitions_in_box(rows: usize, cols: usize) -> Vec<Vec<usize>> {
    fn go(rows: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == rows {
            return;
        }
        for part in 1..=cap {
            cur.push(part);
            go(rows, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(rows, cols, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.iter().sum::<usize>().cmp(&b.iter().sum()).then_with(|| a.cmp(b)));
    out
}

/// Elements of `S_z × S_{n-z}` in lexicographic order.
pub fn young_subgroup(n: usize, z: usize) -> Vec<Perm> {
    let left = Perm::all(z);
    let right = Perm::all(n - z);
    let mut out = Vec::with_capacity(left.len() * right.len());
    for a in &left {
        for b in &right {
            let mut v: Vec<u8> = a.as_slice().to_vec();
            v.extend(b.as_slice().iter().map(|&y| y + z as u8));
            out.push(Perm::new(v).expect("block permutation"));
        }
    }
    out
}

/// Grassmannian permutation whose first `z` values are `set`.
pub fn grassmannian_of(n: usize, set: &[u8]) -> Perm {
    let rest = minus(&range_set(n), set);
    let mut v = set.to_vec();
    v.extend(rest);
    Perm::new(v).expect("set and complement form a permutation")
}

impl ZelShape {
    pub fn p(&self) -> usize {
        self.rects.len()
    }

    fn bounds(&self, j: usize, w: &[Vec<u8>]) -> (Vec<u8>, Vec<u8>) {
        let r = &self.rects[j];
        let lower = r.lpred.map_or_else(|| range_set(r.ldim), |k| w[k].clone());
        let upper = r.rpred.map_or_else(|| range_set(r.rdim), |k| w[k].clone());
        (lower, upper)
    }

    /// `τ^{(j)}` from `W_1, …, W_p` (with `W_p = F_z`).
    pub fn partitions_from_w(&self, w: &[Vec<u8>]) -> Result<Vec<Vec<usize>>> {
        if w.len() != self.p() {
            return Err(Error::LengthMismatch { expected: self.p(), got: w.len() });
        }
        let mut out = Vec::with_capacity(self.p());
        for (j, r) in self.rects.iter().enumerate() {
            let (lower, upper) = self.bounds(j, w);
            if w[j].len() != r.d || !subset(&lower, &w[j]) || !subset(&w[j], &upper) {
                return Err(Error::NotInImage(format!("W_{} = {:?} violates its inclusion conditions", j + 1, w[j])));
            }
            let a = minus(&upper, &lower);
            let t = minus(&w[j], &lower);
            let d = minus(&a, &t);
            let mut part: Vec<usize> = t.iter().rev().map(|&tk| d.iter().filter(|&&m| m < tk).count()).collect();
            while part.last() == Some(&0) {
                part.pop();
            }
            out.push(part);
        }
        Ok(out)
    }

    /// `W_1, …, W_p` from the partitions, recovering each `T(j)` from `A(j)`.
    pub fn w_from_partitions(&self, partitions: &[Vec<usize>]) -> Result<Vec<Vec<u8>>> {
        if partitions.len() != self.p() {
            return Err(Error::LengthMismatch { expected: self.p(), got: partitions.len() });
        }
        let mut w: Vec<Vec<u8>> = Vec::with_capacity(self.p());
        for (j, r) in self.rects.iter().enumerate() {
            let part = &partitions[j];
            if part.len() > r.rows() || part.iter().any(|&x| x > r.cols()) || part.windows(2).any(|p| p[0] < p[1]) {
                return Err(Error::Precondition(format!("{part:?} is not a partition inside a {}x{} box", r.rows(), r.cols())));
            }
            let (lower, upper) = self.bounds(j, &w);
            let mut a = minus(&upper, &lower);
            if a.len() != r.rdim - r.ldim {
                return Err(Error::NotInImage(format!("A({}) has {} elements, expected {}", j + 1, a.len(), r.rdim - r.ldim)));
            }
            a.reverse();
            let t: Vec<u8> = (0..r.rows())
                .map(|k| a[k + r.cols() - part.get(k).copied().unwrap_or(0)])
                .collect();
            w.push(union(&lower, &t));
        }
        Ok(w)
    }

    fn f_z(&self, w: &[Vec<u8>]) -> Vec<u8> {
        w.last().cloned().unwrap_or_else(|| range_set(self.z))
    }

    /// `u_τ`, the grassmannian permutation of `F_z`.
    pub fn u_of(&self, partitions: &[Vec<usize>]) -> Result<Perm> {
        let w = self.w_from_partitions(partitions)?;
        Ok(grassmannian_of(self.n, &self.f_z(&w)))
    }

    /// `u_τ x_τ`, the image of the fixed point in the flag variety.
    pub fn value(&self, tau: &TauDatum) -> Result<Perm> {
        self.u_of(&tau.partitions)?.multiply(&tau.x_tau)
    }

    fn check_x(&self, x: &Perm) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::RankMismatch(self.n, x.n()));
        }
        if x.as_slice()[..self.z].iter().any(|&y| y as usize > self.z) {
            return Err(Error::Precondition(format!("{x} is not in S_{} x S_{}", self.z, self.n - self.z)));
        }
        Ok(())
    }

    pub fn fixed_point(&self, tau: &TauDatum) -> Result<ZelFixedPoint> {
        self.check_x(&tau.x_tau)?;
        let w = self.w_from_partitions(&tau.partitions)?;
        let u = grassmannian_of(self.n, &self.f_z(&w));
        let ux = u.multiply(&tau.x_tau)?;
        let f = bs::staircase(&ux);
        self.assemble(w, f)
    }

    fn assemble(&self, w: Vec<Vec<u8>>, f: Vec<Vec<u8>>) -> Result<ZelFixedPoint> {
        let (mut a, mut t, mut d) = (Vec::new(), Vec::new(), Vec::new());
        for j in 0..self.p() {
            let (lower, upper) = self.bounds(j, &w);
            let aj = minus(&upper, &lower);
            let tj = minus(&w[j], &lower);
            d.push(minus(&aj, &tj));
            a.push(aj);
            t.push(tj);
        }
        let mut w = w;
        w.truncate(self.p().saturating_sub(1));
        Ok(ZelFixedPoint { w, f, a, t, d })
    }

    /// Fixed point from `W_1, …, W_{p-1}` and the flag, checking membership.
    pub fn fixed_point_from_sets(&self, w: &[Vec<u8>], f: &[Vec<u8>]) -> Result<ZelFixedPoint> {
        let (_, full) = self.tau_and_sets(w, f)?;
        self.assemble(full, f.to_vec())
    }

    /// The inverse of [`ZelShape::fixed_point`].
    pub fn tau_from_sets(&self, w: &[Vec<u8>], f: &[Vec<u8>]) -> Result<TauDatum> {
        Ok(self.tau_and_sets(w, f)?.0)
    }

    fn tau_and_sets(&self, w: &[Vec<u8>], f: &[Vec<u8>]) -> Result<(TauDatum, Vec<Vec<u8>>)> {
        let n = self.n;
        if f.len() != n - 1 {
            return Err(Error::LengthMismatch { expected: n - 1, got: f.len() });
        }
        if w.len() != self.p().saturating_sub(1) {
            return Err(Error::LengthMismatch { expected: self.p().saturating_sub(1), got: w.len() });
        }
        let mut y = Vec::with_capacity(n);
        let mut prev: Vec<u8> = Vec::new();
        for k in 0..n {
            let cur = if k + 1 < n { f[k].clone() } else { range_set(n) };
            if cur.len() != k + 1 || !subset(&prev, &cur) {
                return Err(Error::NotInImage(format!("F_{} = {:?} does not extend the flag", k + 1, cur)));
            }
            y.push(minus(&cur, &prev)[0]);
            prev = cur;
        }
        let y = Perm::new(y)?;
        let fz = if self.z == 0 { vec![] } else { f[self.z - 1].clone() };
        let mut full = w.to_vec();
        if self.p() > 0 {
            full.push(fz.clone());
        } else if fz != range_set(self.z) {
            return Err(Error::NotInImage(format!("F_{} must be standard without peaks", self.z)));
        }
        let partitions = self.partitions_from_w(&full)?;
        let u = grassmannian_of(n, &fz);
        let x_tau = u.inverse().multiply(&y)?;
        Ok((TauDatum { partitions, x_tau }, full))
    }

    /// All partition tuples, first rectangle varying slowest.
    pub fn partition_tuples(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
        for r in &self.rects {
            let parts = partitions_in_box(r.rows(), r.cols());
            out = out
                .into_iter()
                .flat_map(|pre| {
                    parts.iter().map(move |p| {
                        let mut v = pre.clone();
                        v.push(p.clone());
                        v
                    })
                })
                .collect();
        }
        out
    }

    pub fn tau_count(&self) -> u128 {
        let mut c: u128 = 1;
        for r in &self.rects {
            c = c.saturating_mul(binomial(r.rdim - r.ldim, r.d - r.ldim));
        }
        c.saturating_mul(factorial(self.z)).saturating_mul(factorial(self.n - self.z))
    }

    pub fn enumerate_tau(&self) -> Result<Vec<TauDatum>> {
        let count = self.tau_count();
        if count > TAU_ENUMERATION_MAX as u128 {
            return Err(Error::GuardExceeded(format!("{count} tau data exceed {TAU_ENUMERATION_MAX}")));
        }
        let xs = young_subgroup(self.n, self.z);
        let mut out = Vec::with_capacity(count as usize);
        for parts in self.partition_tuples() {
            for x in &xs {
                out.push(TauDatum { partitions: parts.clone(), x_tau: x.clone() });
            }
        }
        Ok(out)
    }

    /// `Σ_τ q^{dim C_τ - ℓ(u_τ x_τ)}` grouped by `u_τ x_τ`.
    pub fn kl_column(&self) -> Result<BTreeMap<Perm, QPoly>> {
        let count = self.tau_count();
        if count > TAU_ENUMERATION_MAX as u128 {
            return Err(Error::GuardExceeded(format!("{count} tau data exceed {TAU_ENUMERATION_MAX}")));
        }
        let xs = young_subgroup(self.n, self.z);
        let tuples = self.partition_tuples();
        let parts: Vec<Vec<(Perm, usize)>> = tuples
            .par_iter()
            .map(|parts| {
                let u = self.u_of(parts)?;
                let size: usize = parts.iter().flatten().sum();
                xs.iter().map(|x| Ok((u.multiply(x)?, size + x.length()))).collect()
            })
            .collect::<Result<_>>()?;
        let mut out: BTreeMap<Perm, QPoly> = BTreeMap::new();
        for (y, dim) in parts.into_iter().flatten() {
            let e = dim.checked_sub(y.length()).ok_or_else(|| {
                Error::Internal(format!("cell of dimension {dim} over {y} of larger length"))
            })?;
            out.entry(y).or_default().add_term(e, 1);
        }
        Ok(out)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |a, b| a.saturating_mul(b))
}

/// One rectangle of an ordering, in heap positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rectangle {
    pub peak: usize,
    pub bottom: usize,
    pub entries: Vec<usize>,
    /// NE-SW diagonals from the NE edge, each listed top to bottom.
    pub ne_sw: Vec<Vec<usize>>,
    /// NW-SE diagonals from the NW edge, each listed top to bottom.
    pub nw_se: Vec<Vec<usize>>,
}

#[derive(Debug, Clone)]
pub struct PeakOrdering {
    pub ch: Arc<CogHeap>,
    /// Word positions of `P_1, …, P_p`.
    pub peaks: Vec<usize>,
    pub heights: Vec<usize>,
    pub rects: Vec<Rectangle>,
    pub shape: ZelShape,
}

/// The diagonal construction to use inside rectangles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    #[default]
    NeSw,
    NwSe,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ne-sw" => Ok(Variant::NeSw),
            "nw-se" => Ok(Variant::NwSe),
            _ => Err(Error::Parse(format!("unknown variant {s:?}, expected ne-sw or nw-se"))),
        }
    }
}

fn cog_with_ascent(w: &Perm) -> Result<CogHeap> {
    let ch = CogHeap::new(w)?;
    if ch.z.is_none() {
        return Err(Error::Precondition(format!("{w} has no ascent")));
    }
    Ok(ch)
}

/// Peaks of the heap of `v`, sorted by column.
pub fn peaks(ch: &CogHeap) -> Vec<usize> {
    let mut p = ch.v_heap.maximal();
    p.sort_by_key(|&j| ch.word[j]);
    p
}

impl PeakOrdering {
    /// The ordering listing peaks by the given columns.
    pub fn from_columns(w: &Perm, columns: &[usize]) -> Result<Self> {
        let ch = Arc::new(cog_with_ascent(w)?);
        let all = peaks(&ch);
        let mut order = Vec::with_capacity(columns.len());
        for &c in columns {
            let j = all
                .iter()
                .copied()
                .find(|&j| ch.word[j] == c)
                .ok_or_else(|| Error::Precondition(format!("no peak in column {c}")))?;
            order.push(j);
        }
        let distinct: BTreeSet<usize> = order.iter().copied().collect();
        if distinct.len() != all.len() || order.len() != all.len() {
            return Err(Error::Precondition(format!("ordering must list each of the {} peaks once", all.len())));
        }
        Self::build(ch, order)
    }

    fn build(ch: Arc<CogHeap>, order: Vec<usize>) -> Result<Self> {
        let h = &ch.v_heap;
        let below = |p: usize| -> BTreeSet<usize> { (0..h.len()).filter(|&e| e == p || h.is_above(p, e)).collect() };
        let p = order.len();
        let mut rects: Vec<Rectangle> = Vec::with_capacity(p);
        let mut data: Vec<RectData> = Vec::with_capacity(p);
        let mut taken: BTreeSet<usize> = BTreeSet::new();
        let mut raw: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); p];
        for j in (0..p).rev() {
            let b = below(order[j]);
            raw[j] = b.difference(&taken).copied().collect();
            taken.extend(b);
        }
        for j in 0..p {
            let set = &raw[j];
            let peak = order[j];
            let inside = |e: &Option<usize>| e.filter(|x| set.contains(x));
            let mut ne_sw = Vec::new();
            let mut start = Some(peak);
            while let Some(s) = start {
                let mut diag = vec![s];
                let mut cur = s;
                while let Some(nx) = inside(&h.sw(cur)) {
                    diag.push(nx);
                    cur = nx;
                }
                ne_sw.push(diag);
                start = inside(&h.se(s));
            }
            let mut nw_se = Vec::new();
            let mut start = Some(peak);
            while let Some(s) = start {
                let mut diag = vec![s];
                let mut cur = s;
                while let Some(nx) = inside(&h.se(cur)) {
                    diag.push(nx);
                    cur = nx;
                }
                nw_se.push(diag);
                start = inside(&h.sw(s));
            }
            let rows = ne_sw.len();
            let cols = ne_sw[0].len();
            let covered: usize = ne_sw.iter().map(Vec::len).sum();
            if ne_sw.iter().any(|d| d.len() != cols) || covered != set.len() || nw_se.len() != cols {
                return Err(Error::Internal(format!("region of peak {} is not a rectangle", j + 1)));
            }
            let bottom = *ne_sw[rows - 1].last().expect("nonempty diagonal");
            let leftmost = *ne_sw[0].last().expect("nonempty diagonal");
            let rightmost = *ne_sw[rows - 1].first().expect("nonempty diagonal");
            let col = |e: usize| ch.word[e];
            let lpred = h.nw(leftmost).and_then(|e| rects.iter().position(|r| r.bottom == e));
            let rpred = h.ne(rightmost).and_then(|e| rects.iter().position(|r| r.bottom == e));
            let rd = RectData { d: col(bottom), ldim: col(leftmost) - 1, rdim: col(rightmost) + 1, lpred, rpred };
            if rd.rows() != rows || rd.cols() != cols {
                return Err(Error::Internal(format!("rectangle {} has inconsistent dimensions", j + 1)));
            }
            if lpred.is_some_and(|k| data[k].d != rd.ldim) || rpred.is_some_and(|k| data[k].d != rd.rdim) {
                return Err(Error::Internal(format!("rectangle {} is misaligned with its predecessor", j + 1)));
            }
            data.push(rd);
            rects.push(Rectangle { peak, bottom, entries: set.iter().copied().collect(), ne_sw, nw_se });
        }
        let heights = order.iter().map(|&e| h.height(e)).collect();
        let shape = ZelShape { n: ch.n(), z: ch.z.expect("checked by caller"), rects: data };
        Ok(PeakOrdering { ch, peaks: order, heights, rects, shape })
    }

    pub fn p(&self) -> usize {
        self.peaks.len()
    }

    pub fn peak_columns(&self) -> Vec<usize> {
        self.peaks.iter().map(|&e| self.ch.word[e]).collect()
    }

    pub fn is_neat(&self) -> bool {
        self.shape.rects.iter().enumerate().all(|(j, r)| {
            let ok = |k: Option<usize>| k.map_or(true, |k| self.heights[j] >= self.heights[k]);
            ok(r.lpred) && ok(r.rpred)
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rects: Vec<serde_json::Value> = self
            .rects
            .iter()
            .zip(&self.shape.rects)
            .enumerate()
            .map(|(j, (r, d))| {
                json!({
                    "peak_column": self.ch.word[r.peak],
                    "height": self.heights[j],
                    "bottom_column": d.d,
                    "ldim": d.ldim,
                    "rdim": d.rdim,
                    "lpred": d.lpred.map(|k| k + 1),
                    "rpred": d.rpred.map(|k| k + 1),
                    "size": r.entries.len(),
                })
            })
            .collect();
        json!({
            "w": self.ch.w,
            "z": self.shape.z,
            "peak_columns": self.peak_columns(),
            "neat": self.is_neat(),
            "rectangles": rects,
        })
    }

    /// `ρ_P` applied to the Bott–Samelson fixed point of a mask on the canonical word.
    pub fn rho_image(&self, bits: &[bool]) -> Result<ZelFixedPoint> {
        let (w, f) = self.rho_sets(bits)?;
        self.shape.fixed_point_from_sets(&w, &f)
    }

    fn rho_sets(&self, bits: &[bool]) -> Result<(Vec<Vec<u8>>, Vec<Vec<u8>>)> {
        let m = Mask::new(self.ch.n(), &self.ch.word, bits.to_vec())?;
        let fp = bs::fixed_point(&m);
        let w = self.rects.iter().take(self.p().saturating_sub(1)).map(|r| fp.0[r.bottom].clone()).collect();
        Ok((w, bs::pi_image(&m)))
    }

    /// Checks that the strings entering each rectangle carry the labels `A(j)`.
    pub fn entering_labels_match(&self, bits: &[bool], fp: &ZelFixedPoint) -> Result<bool> {
        let sd = self.ch.heap.strings(bits)?;
        let h = &self.ch.v_heap;
        for (j, r) in self.rects.iter().enumerate() {
            let inside: BTreeSet<usize> = r.entries.iter().copied().collect();
            let mut labels = BTreeSet::new();
            for &e in &r.entries {
                if !h.nw(e).is_some_and(|x| inside.contains(&x)) {
                    labels.insert(sd.entering[e].0);
                }
                if !h.ne(e).is_some_and(|x| inside.contains(&x)) {
                    labels.insert(sd.entering[e].1);
                }
            }
            if labels.into_iter().collect::<Vec<_>>() != fp.a[j] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn enumerate_orderings(w: &Perm) -> Result<Vec<PeakOrdering>> {
    let ch = Arc::new(cog_with_ascent(w)?);
    let all = peaks(&ch);
    if all.len() > MAX_PEAKS_FOR_ORDERINGS {
        return Err(Error::GuardExceeded(format!("{} peaks exceed {MAX_PEAKS_FOR_ORDERINGS}", all.len())));
    }
    Perm::all(all.len())
        .into_iter()
        .map(|p| PeakOrdering::build(ch.clone(), p.as_slice().iter().map(|&i| all[i as usize - 1]).collect()))
        .collect()
}

/// The first neat ordering in lexicographic order of peak columns.
pub fn default_ordering(w: &Perm) -> Result<PeakOrdering> {
    enumerate_orderings(w)?
        .into_iter()
        .find(PeakOrdering::is_neat)
        .ok_or_else(|| Error::Internal(format!("no neat ordering for {w}")))
}

/// The ordering with `index` (0-based) in lexicographic order, or the default.
pub fn ordering_by_index(w: &Perm, index: Option<usize>) -> Result<PeakOrdering> {
    match index {
        None => default_ordering(w),
        Some(k) => {
            let all = enumerate_orderings(w)?;
            let len = all.len();
            all.into_iter()
                .nth(k)
                .ok_or_else(|| Error::Precondition(format!("ordering index {k} out of range (have {len})")))
        }
    }
}

/// `P_{x,w}` from the cells of a neat ordering.
pub fn zelevinsky_kl(x: &Perm, ordering: &PeakOrdering) -> Result<QPoly> {
    if x.n() != ordering.shape.n {
        return Err(Error::RankMismatch(ordering.shape.n, x.n()));
    }
    Ok(zelevinsky_kl_column(ordering)?.remove(x).unwrap_or_default())
}

pub fn zelevinsky_kl_column(ordering: &PeakOrdering) -> Result<BTreeMap<Perm, QPoly>> {
    if !ordering.is_neat() {
        return Err(Error::NotNeat);
    }
    ordering.shape.kl_column()
}

/// The exit label of a NE-SW diagonal: the first `k` of `a` (ascending) with
/// `g(k) = 0` and `g(next) = 1`, where `g(k) = #{m ∈ c : m < k} - #{m ∈ d : m < k}`.
pub fn choose_k(a: &[u8], c: &[u8], d: &[u8]) -> Option<u8> {
    let g = |k: u8| {
        c.iter().filter(|&&m| m < k).count() as i64 - d.iter().filter(|&&m| m < k).count() as i64
    };
    let g_end = c.len() as i64 - d.len() as i64;
    (0..a.len()).find_map(|i| {
        let next = a.get(i + 1).map_or(g_end, |&k| g(k));
        (g(a[i]) == 0 && next == 1).then_some(a[i])
    })
}

/// The exit label of a NW-SE diagonal, scanning `a` from the top with
/// `g(k) = #{m ∈ c : m > k} - #{m ∈ t : m > k}`.
pub fn choose_k_descending(a: &[u8], c: &[u8], t: &[u8]) -> Option<u8> {
    let g = |k: u8| {
        c.iter().filter(|&&m| m > k).count() as i64 - t.iter().filter(|&&m| m > k).count() as i64
    };
    let g_end = c.len() as i64 - t.len() as i64;
    let desc: Vec<u8> = a.iter().rev().copied().collect();
    (0..desc.len()).find_map(|i| {
        let next = desc.get(i + 1).map_or(g_end, |&k| g(k));
        (g(desc[i]) == 0 && next == 1).then_some(desc[i])
    })
}

/// Strand bookkeeping while signs are assigned in an order compatible with the heap.
struct Tracker<'a> {
    word: &'a [usize],
    exits: Vec<Option<(u8, u8)>>,
    plus: Vec<bool>,
}

impl<'a> Tracker<'a> {
    fn new(word: &'a [usize]) -> Self {
        Tracker { word, exits: vec![None; word.len()], plus: vec![false; word.len()] }
    }

    fn slot_label(&self, j: usize, slot: usize) -> Result<u8> {
        for i in (0..j).rev() {
            let c = self.word[i];
            if c == slot || c + 1 == slot {
                let (sw, se) = self.exits[i].ok_or_else(|| Error::Internal(format!("entry {i} read before it was set")))?;
                return Ok(if c == slot { sw } else { se });
            }
        }
        Ok(slot as u8)
    }

    fn nw_label(&self, j: usize) -> Result<u8> {
        self.slot_label(j, self.word[j])
    }

    fn ne_label(&self, j: usize) -> Result<u8> {
        self.slot_label(j, self.word[j] + 1)
    }

    /// Labels arriving from the NW and from the NE.
    fn entering(&self, j: usize) -> Result<(u8, u8)> {
        let c = self.word[j];
        Ok((self.slot_label(j, c)?, self.slot_label(j, c + 1)?))
    }

    fn set(&mut self, j: usize, plus: bool) -> Result<(u8, u8)> {
        let (a, b) = self.entering(j)?;
        let (big, small) = (a.max(b), a.min(b));
        let out = if plus { (big, small) } else { (small, big) };
        self.exits[j] = Some(out);
        self.plus[j] = plus;
        Ok(out)
    }

    fn bits(&self) -> Result<Vec<bool>> {
        (0..self.word.len())
            .map(|j| {
                let (_, ne) = self.entering(j)?;
                let (sw, _) = self.exits[j].ok_or_else(|| Error::Internal(format!("entry {j} never set")))?;
                Ok(sw == ne)
            })
            .collect()
    }
}

/// Fills a diagonal whose travelling string leaves through the SW exits:
/// `+` where the NW label is below `k`, and at `k`'s entry iff the top NE label is below `k`.
fn fill_sw_diagonal(tr: &mut Tracker, diag: &[usize], k: u8) -> Result<()> {
    let top_ne = tr.ne_label(diag[0])?;
    let mut last = (0, 0);
    for &e in diag {
        let (nw, _) = tr.entering(e)?;
        let plus = if nw == k { top_ne < k } else { nw < k };
        last = tr.set(e, plus)?;
    }
    if last.0 != k {
        return Err(Error::Internal(format!("diagonal was meant to send {k} to the SW, sent {}", last.0)));
    }
    Ok(())
}

/// Mirror of [`fill_sw_diagonal`] for diagonals travelling to the SE.
fn fill_se_diagonal(tr: &mut Tracker, diag: &[usize], k: u8) -> Result<()> {
    let top_nw = tr.nw_label(diag[0])?;
    let mut last = (0, 0);
    for &e in diag {
        let (_, ne) = tr.entering(e)?;
        let plus = if ne == k { top_nw > k } else { ne > k };
        last = tr.set(e, plus)?;
    }
    if last.1 != k {
        return Err(Error::Internal(format!("diagonal was meant to send {k} to the SE, sent {}", last.1)));
    }
    Ok(())
}

/// The mask `σ(τ)` on the canonical word.
pub fn sigma_of_tau(ordering: &PeakOrdering, tau: &TauDatum, variant: Variant) -> Result<Mask> {
    let shape = &ordering.shape;
    let fp = shape.fixed_point(tau)?;
    let ch = &ordering.ch;
    let mut tr = Tracker::new(&ch.word);
    for (j, rect) in ordering.rects.iter().enumerate() {
        let (a, t, d) = (&fp.a[j], &fp.t[j], &fp.d[j]);
        match variant {
            Variant::NeSw => {
                for diag in &rect.ne_sw {
                    let mut c = vec![tr.ne_label(diag[0])?];
                    for &e in diag {
                        c.push(tr.nw_label(e)?);
                    }
                    c.sort_unstable();
                    if !subset(&c, a) {
                        return Err(Error::Internal(format!("strings {c:?} entering rectangle {} lie outside A", j + 1)));
                    }
                    let k = choose_k(a, &c, d)
                        .ok_or_else(|| Error::Internal(format!("no exit label in rectangle {}", j + 1)))?;
                    fill_sw_diagonal(&mut tr, diag, k)?;
                }
            }
            Variant::NwSe => {
                for diag in &rect.nw_se {
                    let mut c = vec![tr.nw_label(diag[0])?];
                    for &e in diag {
                        c.push(tr.ne_label(e)?);
                    }
                    c.sort_unstable();
                    if !subset(&c, a) {
                        return Err(Error::Internal(format!("strings {c:?} entering rectangle {} lie outside A", j + 1)));
                    }
                    let k = choose_k_descending(a, &c, t)
                        .ok_or_else(|| Error::Internal(format!("no exit label in rectangle {}", j + 1)))?;
                    fill_se_diagonal(&mut tr, diag, k)?;
                }
            }
        }
    }
    let x = shape.value(tau)?;
    let z = shape.z;
    let n = shape.n;
    let mut pos = ch.v_len;
    for i in 1..z {
        let len = z - i;
        let diag: Vec<usize> = (pos..pos + len).collect();
        fill_se_diagonal(&mut tr, &diag, x.at(z - i + 1) as u8)?;
        pos += len;
    }
    for i in 1..n - z {
        let len = n - z - i;
        let diag: Vec<usize> = (pos..pos + len).collect();
        fill_sw_diagonal(&mut tr, &diag, x.at(z + i) as u8)?;
        pos += len;
    }
    Mask::new(n, &ch.word, tr.bits()?)
}

/// `{σ(τ) : τ ∈ T_P}` in the order of [`ZelShape::enumerate_tau`].
pub fn construction2_set(ordering: &PeakOrdering, variant: Variant) -> Result<MaskSet> {
    let taus = ordering.shape.enumerate_tau()?;
    let masks: Vec<Vec<bool>> = taus
        .par_iter()
        .map(|t| sigma_of_tau(ordering, t, variant).map(|m| m.bits))
        .collect::<Result<_>>()?;
    MaskSet::new(ordering.shape.n, &ordering.ch.word, masks)
}

/// Postconditions of `σ(τ)`; returns the list of failures.
pub fn check_sigma(ordering: &PeakOrdering, tau: &TauDatum, mask: &Mask) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    let fp = ordering.shape.fixed_point(tau)?;
    let x = ordering.shape.value(tau)?;
    if mask.value() != x {
        bad.push(format!("value {} differs from u x = {x}", mask.value()));
    }
    if cell_dimension(mask) != tau.dimension() {
        bad.push(format!("{} pluses, cell dimension {}", cell_dimension(mask), tau.dimension()));
    }
    match ordering.rho_image(&mask.bits) {
        Ok(img) if img == fp => {}
        Ok(_) => bad.push("rho image differs from the fixed point of tau".into()),
        Err(e) => bad.push(format!("rho image undefined: {e}")),
    }
    if !ordering.entering_labels_match(&mask.bits, &fp)? {
        bad.push("strings entering some rectangle differ from A(j)".into());
    }
    Ok(bad)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub tau: Option<TauDatum>,
    pub masks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionMismatch {
    pub mask: String,
    pub tau: TauDatum,
    pub mask_dimension: usize,
    pub tau_dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeometricReport {
    pub geometric: bool,
    pub masks: usize,
    pub fixed_points: u128,
    pub image_size: usize,
    pub collisions: Vec<Collision>,
    pub dimension_mismatches: Vec<DimensionMismatch>,
    /// Masks whose image is not a fixed point of the ordering's variety.
    pub outside: Vec<String>,
}

/// Whether `ρ_P` matches the set's fixed points bijectively with `T_P`,
/// preserving cell dimensions.
pub fn is_geometric(set: &MaskSet, ordering: &PeakOrdering) -> Result<GeometricReport> {
    if set.word != ordering.ch.word {
        return Err(Error::Precondition("mask set is not on the canonical word of the ordering".into()));
    }
    let shape = &ordering.shape;
    let images: Vec<Result<TauDatum>> = set
        .masks
        .par_iter()
        .map(|bits| {
            let (w, f) = ordering.rho_sets(bits)?;
            shape.tau_from_sets(&w, &f)
        })
        .collect();
    let mut by_tau: BTreeMap<TauDatum, Vec<usize>> = BTreeMap::new();
    let mut outside = Vec::new();
    let mut dimension_mismatches = Vec::new();
    for (i, img) in images.into_iter().enumerate() {
        let bits = &set.masks[i];
        match img {
            Ok(tau) => {
                let m = Mask::new(set.n, &set.word, bits.clone())?;
                let (md, td) = (cell_dimension(&m), tau.dimension());
                if md != td {
                    dimension_mismatches.push(DimensionMismatch {
                        mask: bits_to_string(bits),
                        tau: tau.clone(),
                        mask_dimension: md,
                        tau_dimension: td,
                    });
                }
                by_tau.entry(tau).or_default().push(i);
            }
            Err(Error::NotInImage(_)) => outside.push(bits_to_string(bits)),
            Err(e) => return Err(e),
        }
    }
    let collisions: Vec<Collision> = by_tau
        .iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(t, v)| Collision { tau: Some(t.clone()), masks: v.iter().map(|&i| bits_to_string(&set.masks[i])).collect() })
        .collect();
    let fixed_points = shape.tau_count();
    let geometric = collisions.is_empty()
        && dimension_mismatches.is_empty()
        && outside.is_empty()
        && by_tau.len() as u128 == fixed_points;
    Ok(GeometricReport {
        geometric,
        masks: set.len(),
        fixed_points,
        image_size: by_tau.len(),
        collisions,
        dimension_mismatches,
        outside,
    })
}

/// `τ` read off the fixed point of a Bott–Samelson mask.
pub fn tau_of_mask(ordering: &PeakOrdering, bits: &[bool]) -> Result<TauDatum> {
    let (w, f) = ordering.rho_sets(bits)?;
    ordering.shape.tau_from_sets(&w, &f)
}

/// Rebuilds the flag sets of a value, for callers holding only `u_τ x_τ`.
pub fn flag_sets(x: &Perm) -> Vec<Vec<u8>> {
    (1..x.n()).map(|d| initial_set(x, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    #[test]
    fn choose_k_example() {
        let a: Vec<u8> = (5..=17).collect();
        let mut c = vec![7, 5, 6, 8, 9, 10];
        c.sort_unstable();
        assert_eq!(choose_k(&a, &c, &[5, 8, 12, 14, 16]), Some(6));
    }

    #[test]
    fn box_partitions() {
        assert_eq!(partitions_in_box(1, 1), vec![vec![], vec![1]]);
        assert_eq!(partitions_in_box(2, 2).len(), 6);
    }

    #[test]
    fn four_two_three_one() {
        let o = PeakOrdering::from_columns(&p("4231"), &[1, 3]).unwrap();
        assert_eq!(o.shape.z, 2);
        assert_eq!(o.shape.rects[0], RectData { d: 1, ldim: 0, rdim: 2, lpred: None, rpred: None });
        assert_eq!(o.shape.rects[1].rows(), 1);
        assert_eq!(o.shape.rects[1].cols(), 2);
        assert!(o.is_neat());
        assert_eq!(o.shape.enumerate_tau().unwrap().len(), 24);
        assert_eq!(zelevinsky_kl(&p("1234"), &o).unwrap().to_string(), "1+q");
    }

    #[test]
    fn dimensions() {
        let o = PeakOrdering::from_columns(&p("4231"), &[1, 3]).unwrap();
        let t = TauDatum { partitions: vec![vec![1], vec![2]], x_tau: p("2134") };
        assert_eq!(t.dimension(), 4);
        assert_eq!(o.shape.value(&t).unwrap(), p("4213"));
    }
}
