//! The first mask construction: one mask `σ(t)` per edge labeling `t` of the
//! Lascoux–Schützenberger tree, assembled valley by valley, and the mask set
//! `E_w` obtained from the defect sets `P(t)`.
//!
//! Heap entries are addressed by word position. Inside a segment, valley
//! diagonal `i` (1-based, counted from the lowest valley entry) is stored at
//! index `i - 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heap::{CogHeap, Valley};
use crate::ls::{gamma_from_leaves, EdgeLabeling, LsTree};
use crate::mask::{classify, defect_set, fwp_ideal_below, value_and_defects, MaskSet};
use crate::perm::Perm;

/// Which ridgeline step of each tree edge carries its label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepVariant {
    #[default]
    UpSteps,
    DownSteps,
}

impl FromStr for StepVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up-steps" => Ok(StepVariant::UpSteps),
            "down-steps" => Ok(StepVariant::DownSteps),
            _ => Err(Error::Parse(format!("unknown variant {s:?} (expected up-steps or down-steps)"))),
        }
    }
}

impl fmt::Display for StepVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepVariant::UpSteps => "up-steps",
            StepVariant::DownSteps => "down-steps",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValleyStats {
    pub column: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

/// `λ` keeps all `q(v)` parts, zeros included; the derived partitions keep
/// only their positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionQuad {
    pub lambda: Vec<usize>,
    pub lambda_prime: Vec<usize>,
    pub nu: Vec<usize>,
    pub eta: Vec<usize>,
}

impl PartitionQuad {
    pub fn new(lambda: Vec<usize>, r: usize) -> Self {
        let positive = |v: Vec<isize>| v.into_iter().filter(|&x| x > 0).map(|x| x as usize).collect::<Vec<_>>();
        let lambda_prime = positive(lambda.iter().enumerate().map(|(i, &l)| l as isize - (i as isize + 1)).collect());
        let nu = positive(transpose(&lambda).iter().enumerate().map(|(i, &l)| l as isize - i as isize).collect());
        let eta = positive(nu.iter().map(|&l| l as isize - r as isize).collect());
        PartitionQuad { lambda, lambda_prime, nu, eta }
    }

    pub fn lambda_dagger(&self) -> Vec<usize> {
        transpose(&self.lambda)
    }

    pub fn size(&self) -> usize {
        self.lambda.iter().sum()
    }
}

/// Conjugate partition. Zero parts of the input are ignored.
pub fn transpose(parts: &[usize]) -> Vec<usize> {
    let top = parts.iter().copied().max().unwrap_or(0);
    (1..=top).map(|k| parts.iter().filter(|&&x| x >= k).count()).collect()
}

/// A line is zeroed out when its first entry below region 1 is a `0` of `γ`
/// (or when it has no such entry).
fn zeroed_out(line: &[usize], region1: &BTreeSet<usize>, gamma: &[bool]) -> bool {
    !line.iter().find(|e| !region1.contains(e)).is_some_and(|&e| gamma[e])
}

/// Nonzero parts strictly decrease.
pub fn has_distinct_parts(parts: &[usize]) -> bool {
    parts.windows(2).all(|w| w[0] > w[1]) && parts.iter().all(|&x| x > 0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentRegions {
    pub stats: ValleyStats,
    pub region1: BTreeSet<usize>,
    pub region2: BTreeSet<usize>,
    pub region3: BTreeSet<usize>,
    pub feasible: BTreeSet<usize>,
    /// Valley diagonals, each from its valley entry down to the end of the heap.
    pub diagonals: Vec<Vec<usize>>,
    /// Parallel lines through the lowest region 1 entry of each later column.
    /// They count towards `r(v)` and host rows of `η`, but belong to no region.
    pub continuation: Vec<Vec<usize>>,
    /// Cross-diagonal entries of each valley diagonal, top to bottom.
    pub cross: Vec<Vec<usize>>,
}

impl SegmentRegions {
    pub fn entries(&self) -> BTreeSet<usize> {
        let mut all = self.region1.clone();
        all.extend(&self.region2);
        all.extend(&self.region3);
        all
    }
}

/// Everything the construction produces for one labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction1Term {
    pub labeling: EdgeLabeling,
    pub x: Perm,
    pub gamma: Vec<bool>,
    pub sigma: Vec<bool>,
    /// `P(t)`, 0-based positions.
    pub defects: BTreeSet<usize>,
}

/// A cograssmannian heap together with its tree, ready to build `σ(t)`.
#[derive(Debug, Clone)]
pub struct Construction1 {
    pub ch: CogHeap,
    pub tree: LsTree,
    parens: Vec<u8>,
    valleys: Vec<Valley>,
    /// Vertex whose closing step is the given ridgeline step.
    closer: BTreeMap<usize, usize>,
    /// Position of `(column, index from the top)`.
    grid: BTreeMap<(usize, usize), usize>,
}

impl Construction1 {
    pub fn new(w: &Perm) -> Result<Self> {
        if !w.is_cograssmannian() {
            return Err(Error::NotCograssmannian(w.to_string()));
        }
        let ch = CogHeap::new(w)?;
        let tree = LsTree::from_cog(&ch);
        let ridge = ch.ridgeline();
        let closer = tree
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(i, node)| node.pair.map(|(_, c)| (c, i)))
            .collect();
        let mut grid = BTreeMap::new();
        for c in 1..ch.n() {
            for (k, e) in ch.heap.column_entries(c).into_iter().enumerate() {
                grid.insert((c, k), e);
            }
        }
        Ok(Construction1 { parens: ridge.parens.into_bytes(), valleys: ridge.valleys, ch, tree, closer, grid })
    }

    pub fn valleys(&self) -> &[Valley] {
        &self.valleys
    }

    /// `A_w`.
    pub fn labelings(&self) -> Vec<EdgeLabeling> {
        self.tree.enumerate_labelings()
    }

    pub fn gamma(&self, t: &EdgeLabeling) -> Vec<bool> {
        gamma_from_leaves(&self.ch, &self.tree.leaf_labels(t))
    }

    fn valley_index(&self, column: usize) -> Result<usize> {
        self.valleys
            .iter()
            .position(|v| v.column == column)
            .ok_or_else(|| Error::Precondition(format!("column {column} is not a valley column")))
    }

    fn check_labeling(&self, t: &EdgeLabeling) -> Result<()> {
        if t.labels.len() != self.tree.edge_count() {
            return Err(Error::LengthMismatch { expected: self.tree.edge_count(), got: t.labels.len() });
        }
        Ok(())
    }

    /// Ridgeline steps of the up-step run starting just right of the valley.
    fn up_run(&self, valley: &Valley) -> Vec<usize> {
        (valley.open_step + 1..self.parens.len()).take_while(|&s| self.parens[s] == b')').collect()
    }

    fn step_label(&self, t: &EdgeLabeling, step: usize) -> usize {
        self.closer.get(&step).map_or(0, |&i| t.labels[i - 1])
    }

    fn column_top(&self, c: usize, count: usize) -> Vec<usize> {
        (0..count).map_while(|k| self.grid.get(&(c, k)).copied()).collect()
    }

    fn diagonal_from(&self, start: usize) -> Vec<usize> {
        let mut out = vec![start];
        while let Some(e) = self.ch.heap.se(*out.last().expect("nonempty")) {
            out.push(e);
        }
        out
    }

    /// `p(v)` and the valley diagonals of a valley under `γ`.
    fn diagonals(&self, gamma: &[bool], column: usize) -> (usize, Vec<Vec<usize>>) {
        let col = self.ch.heap.column_entries(column);
        let p = col.iter().filter(|&&e| !gamma[e]).count();
        let diags = (1..=p).map(|i| self.diagonal_from(col[p - i])).collect();
        (p, diags)
    }

    fn region1(&self, column: usize, p: usize, q: usize) -> BTreeSet<usize> {
        (column..=column + q).flat_map(|c| self.column_top(c, p)).collect()
    }

    /// Statistics, the lines of the segment (valley diagonals first, then
    /// continuation lines) and region 1.
    fn stats_with(&self, gamma: &[bool], valley: &Valley) -> (ValleyStats, Vec<Vec<usize>>, BTreeSet<usize>) {
        let v = valley.column;
        let (p, mut lines) = self.diagonals(gamma, v);
        let q = self.up_run(valley).len();
        let r1 = self.region1(v, p, q);
        for j in p + 1..=q + 1 {
            if let Some(&e) = self.column_top(v + j - 1, p).last() {
                lines.push(self.diagonal_from(e));
            }
        }
        let r = lines.iter().filter(|d| !zeroed_out(d, &r1, gamma)).count();
        (ValleyStats { column: v, p, q, r }, lines, r1)
    }

    pub fn valley_stats(&self, t: &EdgeLabeling, column: usize) -> Result<ValleyStats> {
        self.check_labeling(t)?;
        let k = self.valley_index(column)?;
        Ok(self.stats_with(&self.gamma(t), &self.valleys[k]).0)
    }

    pub fn edge_label_partition(&self, t: &EdgeLabeling, column: usize) -> Result<PartitionQuad> {
        let stats = self.valley_stats(t, column)?;
        let valley = &self.valleys[self.valley_index(column)?];
        let lambda = self.up_run(valley).into_iter().map(|s| self.step_label(t, s)).collect();
        Ok(PartitionQuad::new(lambda, stats.r))
    }

    /// The parts of a segment fixed by `γ` alone: statistics, lines and the
    /// three regions. The feasible subregion and the cross-diagonal entries
    /// are left empty.
    fn regions(&self, gamma: &[bool], valley: &Valley) -> Result<SegmentRegions> {
        let (stats, mut lines, region1) = self.stats_with(gamma, valley);
        let ValleyStats { column: v, p, q, r } = stats;
        let zeroed: Vec<bool> = lines.iter().map(|d| zeroed_out(d, &region1, gamma)).collect();
        if zeroed.iter().enumerate().any(|(i, &z)| z != (i >= r)) {
            return Err(Error::Internal(format!("zeroed lines of valley {v} are not a final run")));
        }
        let cols: BTreeSet<usize> = (v..=v + q).collect();
        let mut region2 = BTreeSet::new();
        let mut region3 = BTreeSet::new();
        for (i, d) in lines[..p].iter().enumerate() {
            for &e in d.iter().filter(|e| !region1.contains(e)) {
                if i < r {
                    region2.insert(e);
                } else if cols.contains(&self.ch.heap.column(e)) {
                    region3.insert(e);
                }
            }
        }
        Ok(SegmentRegions {
            stats,
            region1,
            region2,
            region3,
            feasible: BTreeSet::new(),
            cross: vec![vec![]; p],
            continuation: lines.split_off(p),
            diagonals: lines,
        })
    }

    /// Regions of every segment, before cross-diagonal entries are known,
    /// together with the premask that fixes every bit except the zero-defects
    /// placed on cross-diagonal entries.
    fn layout(&self, t: &EdgeLabeling) -> Result<(Vec<SegmentRegions>, Vec<PartitionQuad>, Vec<bool>)> {
        let gamma = self.gamma(t);
        let mut bits = gamma.clone();
        let mut segments = Vec::with_capacity(self.valleys.len());
        let mut quads = Vec::with_capacity(self.valleys.len());
        for valley in &self.valleys {
            let seg = self.regions(&gamma, valley)?;
            let ValleyStats { column: v, p, q, r } = seg.stats;
            let lambda = self.up_run(valley).into_iter().map(|s| self.step_label(t, s)).collect();
            let quad = PartitionQuad::new(lambda, r);
            if quad.lambda.first().is_some_and(|&e| e > p) {
                return Err(Error::Internal(format!("leaf label exceeds p(v) at valley {v}")));
            }
            let cols: BTreeSet<usize> = (v..=v + q).collect();
            let SegmentRegions { region1, region2, region3, diagonals, continuation, .. } = &seg;
            let lines: Vec<&Vec<usize>> = diagonals.iter().chain(continuation).collect();
            for &e in region1 {
                bits[e] = false;
            }
            for (i, &nu_i) in quad.nu.iter().enumerate() {
                let c = v + i + 1;
                let lp = quad.lambda_prime.get(i).copied().unwrap_or(0);
                let start = p
                    .checked_sub(lp + 1)
                    .and_then(|k| self.grid.get(&(c, k)).copied())
                    .filter(|e| region1.contains(e))
                    .ok_or_else(|| Error::Internal(format!("row {} of nu has no start at valley {v}", i + 1)))?;
                let mut e = start;
                for k in 0..nu_i {
                    if !region1.contains(&e) {
                        return Err(Error::Internal(format!("row {} of nu leaves region 1 at valley {v}", i + 1)));
                    }
                    bits[e] = true;
                    if k + 1 < nu_i {
                        e = self.ch.heap.ne(e).ok_or_else(|| Error::Internal("row of nu runs off the heap".into()))?;
                    }
                }
            }
            for &e in region2 {
                bits[e] = true;
            }
            for &e in region3 {
                bits[e] = false;
            }
            let mut feasible = BTreeSet::new();
            for (i, &eta_i) in quad.eta.iter().enumerate() {
                let line = lines
                    .get(r + i)
                    .ok_or_else(|| Error::Internal(format!("no line for row {} of eta at valley {v}", i + 1)))?;
                let mut e = line.iter().copied().find(|e| !region1.contains(e));
                for _ in 0..eta_i {
                    let cur = e
                        .filter(|x| cols.contains(&self.ch.heap.column(*x)))
                        .filter(|x| region3.contains(x) || (!region2.contains(x) && gamma[*x]))
                        .ok_or_else(|| Error::Internal(format!("row {} of eta leaves region 3 at valley {v}", i + 1)))?;
                    feasible.insert(cur);
                    bits[cur] = true;
                    e = self.ch.heap.se(cur);
                }
            }
            segments.push(SegmentRegions { feasible, ..seg });
            quads.push(quad);
        }
        Ok((segments, quads, bits))
    }

    /// Next entry below position `after` that touches string slot `slot`,
    /// with whether it is entered from the northwest.
    fn next_on_slot(&self, after: usize, slot: usize) -> Option<(usize, bool)> {
        let word = &self.ch.word;
        (after + 1..word.len()).find(|&j| word[j] == slot || word[j] + 1 == slot).map(|j| (j, word[j] == slot))
    }

    /// Entries met while moving southwest by the string leaving `from` at its
    /// southeast edge, after its first turn, as long as it keeps crossing.
    fn trace_cross(&self, bits: &[bool], from: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.next_on_slot(from, self.ch.heap.column(from) + 1);
        let mut turned = false;
        while let Some((e, from_nw)) = cur {
            if !from_nw {
                turned = true;
            }
            if turned {
                if from_nw || !bits[e] {
                    break;
                }
                out.push(e);
            }
            let exit_se = from_nw == bits[e];
            let c = self.ch.heap.column(e);
            cur = self.next_on_slot(e, if exit_se { c + 1 } else { c });
        }
        out
    }

    pub fn segments(&self, t: &EdgeLabeling) -> Result<Vec<SegmentRegions>> {
        self.check_labeling(t)?;
        let (mut segments, quads, bits) = self.layout(t)?;
        for (seg, quad) in segments.iter_mut().zip(&quads) {
            let allowed: BTreeSet<usize> = seg.region2.union(&seg.feasible).copied().collect();
            let lines: Vec<&Vec<usize>> = seg.diagonals.iter().chain(&seg.continuation).collect();
            let origins = lines.len().min(seg.stats.r + quad.eta.len() + 1);
            let mut cross: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); seg.diagonals.len()];
            for line in &lines[..origins] {
                let Some(&from) = line.iter().take_while(|e| seg.region1.contains(e)).last() else { continue };
                for e in self.trace_cross(&bits, from).into_iter().filter(|e| allowed.contains(e)) {
                    if let Some(i) = seg.diagonals.iter().position(|d| d.contains(&e)) {
                        cross[i].insert(e);
                    }
                }
            }
            seg.cross = cross.into_iter().map(|s| s.into_iter().collect()).collect();
        }
        Ok(segments)
    }

    /// `σ(t)`.
    pub fn build_sigma_t(&self, t: &EdgeLabeling) -> Result<Vec<bool>> {
        self.check_labeling(t)?;
        let (_, quads, mut bits) = self.layout(t)?;
        let segments = self.segments(t)?;
        for (seg, quad) in segments.iter().zip(&quads) {
            let v = seg.stats.column;
            for (i, &nu_i) in quad.nu.iter().enumerate() {
                let eta_i = quad.eta.get(i).copied().unwrap_or(0);
                let diag = &seg.diagonals[i];
                let outside: Vec<usize> = diag.iter().copied().filter(|e| !seg.region1.contains(e)).collect();
                if outside.len() < eta_i || outside[..eta_i].iter().any(|e| !bits[*e]) {
                    return Err(Error::Internal(format!("one-defects of diagonal {} misplaced at valley {v}", i + 1)));
                }
                let want = nu_i - eta_i;
                let cross = &seg.cross[i];
                if cross.len() < want {
                    return Err(Error::Internal(format!(
                        "diagonal {} at valley {v} has {} cross-diagonal entries, needs {want}",
                        i + 1,
                        cross.len()
                    )));
                }
                for &e in &cross[cross.len() - want..] {
                    if outside[..eta_i].contains(&e) {
                        return Err(Error::Internal(format!("defects collide on diagonal {} at valley {v}", i + 1)));
                    }
                    bits[e] = false;
                }
            }
        }
        Ok(bits)
    }

    pub fn term(&self, t: &EdgeLabeling) -> Result<Construction1Term> {
        let gamma = self.gamma(t);
        let x = value_and_defects(self.ch.n(), &self.ch.word, &gamma).0;
        let sigma = self.build_sigma_t(t)?;
        let defects = defect_set(self.ch.n(), &self.ch.word, &sigma);
        Ok(Construction1Term { labeling: t.clone(), x, gamma, sigma, defects })
    }

    pub fn terms(&self) -> Result<Vec<Construction1Term>> {
        self.labelings().par_iter().map(|t| self.term(t)).collect()
    }

    /// Checks the stated properties of `σ(t)`; returns a list of failures.
    pub fn check_term(&self, term: &Construction1Term) -> Result<Vec<String>> {
        let mut fails = Vec::new();
        let n = self.ch.n();
        let (classes, value) = classify(n, &self.ch.word, &term.sigma);
        if value != term.x {
            fails.push(format!("value {value} differs from x(t) = {}", term.x));
        }
        if term.defects.len() != term.labeling.size() {
            fails.push(format!("{} defects, |t| = {}", term.defects.len(), term.labeling.size()));
        }
        let segments = self.segments(&term.labeling)?;
        let mut seen = BTreeSet::new();
        for (seg, valley) in segments.iter().zip(&self.valleys) {
            let v = valley.column;
            let entries = seg.entries();
            if !seen.is_disjoint(&entries) {
                fails.push(format!("segment of valley {v} overlaps an earlier segment"));
            }
            seen.extend(entries.iter().copied());
            let quad = self.edge_label_partition(&term.labeling, v)?;
            for parts in [&quad.lambda_prime, &quad.nu, &quad.eta] {
                if !has_distinct_parts(parts) {
                    fails.push(format!("repeated parts {parts:?} at valley {v}"));
                }
            }
            let dagger = quad.lambda_dagger();
            for (i, d) in seg.diagonals.iter().enumerate() {
                let got = d.iter().filter(|&&e| entries.contains(&e) && classes[e].is_defect()).count();
                let want = dagger.get(i).copied().unwrap_or(0);
                if got != want {
                    fails.push(format!("diagonal {} of valley {v} has {got} defects, expected {want}", i + 1));
                }
            }
        }
        Ok(fails)
    }

    /// Labels increase away from the root and leaves respect their capacities.
    pub fn is_valid_labeling(&self, t: &EdgeLabeling) -> bool {
        t.labels.len() == self.tree.edge_count()
            && self.tree.nodes.iter().enumerate().skip(1).all(|(i, node)| {
                let own = t.labels[i - 1];
                let above = match node.parent {
                    Some(p) if p > 0 => t.labels[p - 1],
                    _ => 0,
                };
                above <= own && node.valley.map_or(true, |v| own <= v.capacity)
            })
    }

    /// Inverts `t ↦ P(t)`.
    ///
    /// The leaf label of each valley is read from the run of defects in the
    /// next column starting just below its top entry: a run of length `k`
    /// gives `k + 1` when the diagonal running southeast from the entry below
    /// the run carries a defect, and `k` otherwise. Those labels fix `γ(t)`
    /// and hence the segments; defect counts along the valley diagonals then
    /// give `λ^†` for every valley.
    pub fn recover_labeling(&self, defects: &BTreeSet<usize>) -> Result<EdgeLabeling> {
        let not_in_image = || Error::NotInImage(format!("defect set {:?}", defects.iter().map(|j| j + 1).collect::<Vec<_>>()));
        if defects.iter().any(|&j| j >= self.ch.len()) {
            return Err(not_in_image());
        }
        let mut leaves = Vec::with_capacity(self.valleys.len());
        for valley in &self.valleys {
            let next = self.ch.heap.column_entries(valley.column + 1);
            let k = next.iter().skip(1).take_while(|e| defects.contains(e)).count();
            let below = next.get(k + 1).is_some_and(|&c| self.diagonal_from(c).iter().any(|e| defects.contains(e)));
            leaves.push((valley.column, (k + usize::from(below)).min(valley.capacity)));
        }
        let gamma = gamma_from_leaves(&self.ch, &leaves);
        let mut labels = vec![0; self.tree.edge_count()];
        for valley in &self.valleys {
            let seg = self.regions(&gamma, valley)?;
            let entries = seg.entries();
            let dagger: Vec<usize> = seg
                .diagonals
                .iter()
                .map(|d| d.iter().filter(|e| entries.contains(e) && defects.contains(e)).count())
                .collect();
            let lambda = transpose(&dagger);
            if transpose(&lambda) != dagger.iter().copied().take_while(|&x| x > 0).collect::<Vec<_>>() {
                return Err(not_in_image());
            }
            let run = self.up_run(valley);
            if lambda.len() > run.len() {
                return Err(not_in_image());
            }
            for (j, step) in run.into_iter().enumerate() {
                let e = lambda.get(j).copied().unwrap_or(0);
                match self.closer.get(&step) {
                    Some(&i) => labels[i - 1] = e,
                    None if e > 0 => return Err(not_in_image()),
                    None => {}
                }
            }
        }
        let t = EdgeLabeling { labels };
        if !self.is_valid_labeling(&t) || self.term(&t).map_or(true, |term| &term.defects != defects) {
            return Err(not_in_image());
        }
        Ok(t)
    }

    /// `E_w`.
    pub fn construction1_set(&self) -> Result<MaskSet> {
        set_from_terms(self, &self.terms()?)
    }
}

/// `w_0 w w_0`, the reflection of `w` through the middle of its heap.
pub fn mirror_perm(w: &Perm) -> Perm {
    let n = w.n() as u8;
    let image: Vec<u8> = (0..w.n()).rev().map(|i| n + 1 - w.as_slice()[i]).collect();
    Perm::new(image).expect("reflection of a permutation")
}

/// Position of the `k`-th occurrence of each generator, keyed by `(generator, k)`.
fn occurrences(word: &[usize]) -> BTreeMap<(usize, usize), usize> {
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    word.iter()
        .enumerate()
        .map(|(j, &c)| {
            let k = seen.entry(c).or_default();
            *k += 1;
            ((c, *k - 1), j)
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Dual {
    inner: Construction1,
    /// Inner word position to outer word position.
    to_outer: Vec<usize>,
    /// Outer tree vertex to inner tree vertex.
    vertex: Vec<usize>,
}

/// Construction 1 with either choice of labelled ridgeline steps. The
/// down-step construction is the up-step construction on the reflected heap,
/// carried back to the canonical word of `w`.
#[derive(Debug, Clone)]
pub struct VariantConstruction {
    pub variant: StepVariant,
    pub base: Construction1,
    dual: Option<Dual>,
}

impl VariantConstruction {
    pub fn new(w: &Perm, variant: StepVariant) -> Result<Self> {
        let base = Construction1::new(w)?;
        let dual = match variant {
            StepVariant::UpSteps => None,
            StepVariant::DownSteps if base.valleys.is_empty() => None,
            StepVariant::DownSteps => Some(Self::dual_of(&base)?),
        };
        Ok(VariantConstruction { variant, base, dual })
    }

    fn dual_of(base: &Construction1) -> Result<Dual> {
        let n = base.ch.n();
        let inner = Construction1::new(&mirror_perm(&base.ch.w))?;
        let outer_pos = occurrences(&base.ch.word);
        let mut to_outer = vec![0; inner.ch.len()];
        for ((c, k), j) in occurrences(&inner.ch.word) {
            to_outer[j] = *outer_pos
                .get(&(n - c, k))
                .ok_or_else(|| Error::Internal("reflected heap does not match".into()))?;
        }
        let len = base.parens.len();
        let vertex = base
            .tree
            .nodes
            .iter()
            .map(|node| match node.pair {
                None => Some(0),
                Some((o, c)) => inner.tree.nodes.iter().position(|m| m.pair == Some((len - 1 - c, len - 1 - o))),
            })
            .collect::<Option<Vec<usize>>>()
            .ok_or_else(|| Error::Internal("reflected tree does not match".into()))?;
        Ok(Dual { inner, to_outer, vertex })
    }

    pub fn labelings(&self) -> Vec<EdgeLabeling> {
        self.base.labelings()
    }

    fn inner_labeling(dual: &Dual, t: &EdgeLabeling) -> EdgeLabeling {
        let mut labels = vec![0; t.labels.len()];
        for (i, &l) in t.labels.iter().enumerate() {
            labels[dual.vertex[i + 1] - 1] = l;
        }
        EdgeLabeling { labels }
    }

    pub fn term(&self, t: &EdgeLabeling) -> Result<Construction1Term> {
        let Some(dual) = &self.dual else { return self.base.term(t) };
        self.base.check_labeling(t)?;
        let inner = dual.inner.term(&Self::inner_labeling(dual, t))?;
        let carry = |bits: &[bool]| {
            let mut out = vec![false; bits.len()];
            for (j, &b) in bits.iter().enumerate() {
                out[dual.to_outer[j]] = b;
            }
            out
        };
        let sigma = carry(&inner.sigma);
        let n = self.base.ch.n();
        Ok(Construction1Term {
            labeling: t.clone(),
            x: mirror_perm(&inner.x),
            gamma: carry(&inner.gamma),
            defects: defect_set(n, &self.base.ch.word, &sigma),
            sigma,
        })
    }

    /// Structural checks of [`Construction1::check_term`], run where the
    /// segments live: on the reflected heap for the down-step variant.
    pub fn check_term(&self, term: &Construction1Term) -> Result<Vec<String>> {
        let Some(dual) = &self.dual else { return self.base.check_term(term) };
        let mut failures = dual.inner.check_term(&dual.inner.term(&Self::inner_labeling(dual, &term.labeling))?)?;
        let (x, d) = value_and_defects(self.base.ch.n(), &self.base.ch.word, &term.sigma);
        if x != term.x || d != term.labeling.size() {
            failures.push(format!("value {x} with {d} defects after reflection"));
        }
        Ok(failures)
    }

    pub fn terms(&self) -> Result<Vec<Construction1Term>> {
        self.labelings().par_iter().map(|t| self.term(t)).collect()
    }

    pub fn construction1_set(&self) -> Result<MaskSet> {
        set_from_terms(&self.base, &self.terms()?)
    }

    pub fn recover_labeling(&self, defects: &BTreeSet<usize>) -> Result<EdgeLabeling> {
        let Some(dual) = &self.dual else { return self.base.recover_labeling(defects) };
        let inner_defects = (0..dual.to_outer.len()).filter(|j| defects.contains(&dual.to_outer[*j])).collect();
        let inner = dual.inner.recover_labeling(&inner_defects)?;
        let labels = (1..self.base.tree.nodes.len()).map(|i| inner.labels[dual.vertex[i] - 1]).collect();
        let t = EdgeLabeling { labels };
        if self.term(&t)?.defects != *defects {
            return Err(Error::NotInImage("defect set does not round-trip".into()));
        }
        Ok(t)
    }
}

fn set_from_terms(c: &Construction1, terms: &[Construction1Term]) -> Result<MaskSet> {
    let mut masks: Vec<Vec<bool>> = terms
        .par_iter()
        .flat_map_iter(|term| fwp_ideal_below(&c.ch.word, &term.defects, &term.x))
        .collect();
    masks.sort();
    MaskSet::new(c.ch.n(), &c.ch.word, masks)
}

/// Flips the bits at `a` and `b`, which must carry the same pair of strings.
/// The value of the mask is unchanged.
pub fn string_move(n: usize, word: &[usize], bits: &[bool], a: usize, b: usize) -> Result<Vec<bool>> {
    let heap = crate::heap::Heap::new(n, word)?;
    let strings = heap.strings(bits)?;
    let pair = |j: usize| {
        let (x, y) = strings.entering[j];
        (x.min(y), x.max(y))
    };
    if a == b || a >= word.len() || b >= word.len() || pair(a) != pair(b) {
        return Err(Error::Precondition(format!("the strings of entries {} and {} do not meet", a + 1, b + 1)));
    }
    let mut out = bits.to_vec();
    out[a] = !out[a];
    out[b] = !out[b];
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::bits_to_string;

    #[test]
    fn partition_arithmetic() {
        assert_eq!(PartitionQuad::new(vec![2, 1], 0).lambda_prime, vec![1]);
        let q = PartitionQuad::new(vec![2, 2], 1);
        assert_eq!(q.lambda_dagger(), vec![2, 2]);
        assert_eq!(q.nu, vec![2, 1]);
        assert_eq!(q.eta, vec![1]);
        let z = PartitionQuad::new(vec![0], 3);
        assert!(z.lambda_prime.is_empty() && z.nu.is_empty() && z.eta.is_empty());
    }

    #[test]
    fn transpose_is_involutive_on_partitions() {
        assert_eq!(transpose(&[3, 1]), vec![2, 1, 1]);
        assert_eq!(transpose(&transpose(&[4, 2, 2])), vec![4, 2, 2]);
        assert!(has_distinct_parts(&[3, 1]));
        assert!(!has_distinct_parts(&[2, 2]));
    }

    #[test]
    fn zero_labeling_gives_all_ones() {
        let c = Construction1::new(&"4231".parse().unwrap()).unwrap();
        let t = &c.labelings()[0];
        assert_eq!(t.size(), 0);
        let term = c.term(t).unwrap();
        assert!(term.sigma.iter().all(|&b| b));
        assert!(term.defects.is_empty());
        assert_eq!(c.recover_labeling(&BTreeSet::new()).unwrap(), *t);
    }

    #[test]
    fn four_two_three_one_unit_label() {
        let c = Construction1::new(&"4231".parse().unwrap()).unwrap();
        let t = c.labelings().into_iter().find(|t| t.size() == 1).unwrap();
        let v = c.valleys()[0].column;
        let stats = c.valley_stats(&t, v).unwrap();
        assert_eq!(stats.p, 1);
        let term = c.term(&t).unwrap();
        assert_eq!(bits_to_string(&term.sigma), "01010");
        assert_eq!(term.x, "2143".parse().unwrap());
        assert!(c.check_term(&term).unwrap().is_empty());
    }

    #[test]
    fn string_move_keeps_value() {
        let word = [1, 2, 1];
        let bits = [true, true, true];
        let moved = string_move(3, &word, &bits, 0, 2);
        if let Ok(m) = moved {
            assert_eq!(value_and_defects(3, &word, &m).0, value_and_defects(3, &word, &bits).0);
        }
        assert!(string_move(3, &word, &bits, 1, 1).is_err());
    }
}
