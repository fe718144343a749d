//! Lascoux–Schützenberger trees of cograssmannian permutations, their edge
//! labelings, and the Kazhdan–Lusztig and `B'` formulas they produce.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heap::{CogHeap, Valley};
use crate::hecke::HeckeElement;
use crate::kl::{bprime_element, bruhat_interval};
use crate::mask::{fwp_mask, value_and_defects};
use crate::perm::Perm;
use crate::poly::{LPoly, QPoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Parenthesis steps `(open, close)`; absent for the root.
    pub pair: Option<(usize, usize)>,
    /// Present exactly for leaves.
    pub valley: Option<Valley>,
}

/// Vertex 0 is the root; the other vertices are numbered in preorder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LsTree {
    pub nodes: Vec<TreeNode>,
}

impl LsTree {
    pub fn from_cog(ch: &CogHeap) -> Self {
        let ridge = ch.ridgeline();
        let bytes = ridge.parens.as_bytes();
        let mut pairs = Vec::new();
        let mut stack = Vec::new();
        for (k, &b) in bytes.iter().enumerate() {
            if b == b'(' {
                stack.push(k);
            } else if let Some(o) = stack.pop() {
                pairs.push((o, k));
            }
        }
        pairs.sort();
        let mut nodes = vec![TreeNode { parent: None, children: vec![], pair: None, valley: None }];
        // pairs sorted by opening step are already in preorder
        let mut open: Vec<usize> = vec![0];
        for (o, c) in pairs {
            while open.len() > 1 {
                let top = *open.last().expect("nonempty");
                let (_, tc) = nodes[top].pair.expect("non-root");
                if tc > o {
                    break;
                }
                open.pop();
            }
            let parent = *open.last().expect("root stays");
            let id = nodes.len();
            let valley = ridge.valleys.iter().find(|v| v.open_step == o && c == o + 1).copied();
            nodes.push(TreeNode { parent: Some(parent), children: vec![], pair: Some((o, c)), valley });
            nodes[parent].children.push(id);
            open.push(id);
        }
        LsTree { nodes }
    }

    pub fn new(w: &Perm) -> Result<Self> {
        Ok(LsTree::from_cog(&CogHeap::new(w)?))
    }

    /// Number of labelled edges (non-root vertices).
    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn leaves(&self) -> Vec<usize> {
        (1..self.nodes.len()).filter(|&i| self.nodes[i].children.is_empty()).collect()
    }

    /// Nested JSON: `{capacity?, children[], label?}`.
    pub fn to_json(&self, labels: Option<&EdgeLabeling>) -> serde_json::Value {
        self.node_json(0, labels)
    }

    fn node_json(&self, i: usize, labels: Option<&EdgeLabeling>) -> serde_json::Value {
        let node = &self.nodes[i];
        let mut obj = serde_json::Map::new();
        if let Some(v) = node.valley {
            obj.insert("capacity".into(), v.capacity.into());
            obj.insert("column".into(), v.column.into());
        }
        if let (Some(t), true) = (labels, i > 0) {
            obj.insert("label".into(), t.labels[i - 1].into());
        }
        obj.insert(
            "children".into(),
            serde_json::Value::Array(node.children.iter().map(|&c| self.node_json(c, labels)).collect()),
        );
        serde_json::Value::Object(obj)
    }

    /// All valid labelings with leaf capacities overridden by `caps` (indexed by vertex),
    /// in lexicographic order of the preorder label vectors.
    pub fn labelings_with_caps(&self, caps: &[usize]) -> Vec<EdgeLabeling> {
        let m = self.edge_count();
        // bound[i]: the largest label vertex i may carry
        let mut bound = vec![usize::MAX; self.nodes.len()];
        for i in (1..self.nodes.len()).rev() {
            let own = if self.nodes[i].children.is_empty() { caps[i] } else { usize::MAX };
            let kids = self.nodes[i].children.iter().map(|&c| bound[c]).min().unwrap_or(usize::MAX);
            bound[i] = own.min(kids);
        }
        let mut out = Vec::new();
        let mut cur = vec![0usize; m];
        self.fill(1, &bound, &mut cur, &mut out);
        out
    }

    fn fill(&self, i: usize, bound: &[usize], cur: &mut Vec<usize>, out: &mut Vec<EdgeLabeling>) {
        if i == self.nodes.len() {
            out.push(EdgeLabeling { labels: cur.clone() });
            return;
        }
        let lo = match self.nodes[i].parent {
            Some(0) | None => 0,
            Some(p) => cur[p - 1],
        };
        let hi = bound[i];
        if hi == usize::MAX {
            unreachable!("every vertex has a leaf below it");
        }
        for l in lo..=hi {
            cur[i - 1] = l;
            self.fill(i + 1, bound, cur, out);
        }
    }

    /// `A_w`.
    pub fn enumerate_labelings(&self) -> Vec<EdgeLabeling> {
        let caps: Vec<usize> = self.nodes.iter().map(|n| n.valley.map_or(0, |v| v.capacity)).collect();
        self.labelings_with_caps(&caps)
    }

    /// `(valley column, leaf label)` pairs of a labeling, left to right.
    pub fn leaf_labels(&self, t: &EdgeLabeling) -> Vec<(usize, usize)> {
        self.leaves()
            .into_iter()
            .map(|i| (self.nodes[i].valley.expect("leaf").column, t.labels[i - 1]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeLabeling {
    /// Labels of the non-root vertices in preorder.
    pub labels: Vec<usize>,
}

impl EdgeLabeling {
    pub fn size(&self) -> usize {
        self.labels.iter().sum()
    }
}

/// Constant mask obtained by zeroing the top `m` entries of each valley column
/// together with everything above them.
pub fn gamma_from_leaves(ch: &CogHeap, leaves: &[(usize, usize)]) -> Vec<bool> {
    let mut seeds = BTreeSet::new();
    for &(col, m) in leaves {
        for e in ch.heap.column_entries(col).into_iter().take(m) {
            seeds.insert(e);
        }
    }
    let zeros = ch.heap.up_closure(&seeds);
    (0..ch.len()).map(|j| !zeros.contains(&j)).collect()
}

/// `(γ(t), x(t))`.
pub fn gamma_and_x(ch: &CogHeap, tree: &LsTree, t: &EdgeLabeling) -> (Vec<bool>, Perm) {
    let gamma = gamma_from_leaves(ch, &tree.leaf_labels(t));
    let x = value_and_defects(ch.n(), &ch.word, &gamma).0;
    (gamma, x)
}

/// `x̃ = v_x w_0^J` where `x = v_x u` is the parabolic decomposition.
pub fn cograssmannianize(ch: &CogHeap, x: &Perm) -> Result<Perm> {
    let (vx, _) = x.parabolic_decompose(&ch.j_set())?;
    vx.multiply(&ch.w0j)
}

/// `P_{x,w}` as a sum of `q^{|t|}` over labelings with cut-down capacities.
pub fn ls_kl(x: &Perm, w: &Perm) -> Result<QPoly> {
    let ch = CogHeap::new(w)?;
    let tree = LsTree::from_cog(&ch);
    ls_kl_with(&ch, &tree, x)
}

pub fn ls_kl_with(ch: &CogHeap, tree: &LsTree, x: &Perm) -> Result<QPoly> {
    if x.n() != ch.n() {
        return Err(Error::RankMismatch(x.n(), ch.n()));
    }
    if !x.bruhat_leq(&ch.w)? {
        return Ok(QPoly::zero());
    }
    let xt = cograssmannianize(ch, x)?;
    let mask = fwp_mask(&ch.word, &BTreeSet::new(), &xt)
        .ok_or_else(|| Error::Internal(format!("no defect-free mask for {xt} on the canonical word")))?;
    let caps: Vec<usize> = tree
        .nodes
        .iter()
        .map(|node| match node.valley {
            Some(v) => ch.heap.column_entries(v.column).into_iter().filter(|&e| !mask[e]).count(),
            None => 0,
        })
        .collect();
    let mut p = QPoly::zero();
    for t in tree.labelings_with_caps(&caps) {
        p.add_term(t.size(), 1);
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BprimeTerm {
    pub labeling: EdgeLabeling,
    /// Exponent of `q^{1/2}` relative to `B'_{x(t)}` after normalising by `q^{-ℓ(w)/2}`:
    /// `2|t| - (ℓ(w) - ℓ(x(t)))`.
    pub exponent: i32,
    pub x: Perm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BprimeExpansion {
    pub terms: Vec<BprimeTerm>,
    /// The identity `C'_w = Σ_t q^{exponent/2} B'_{x(t)}` holds in the Hecke algebra.
    pub identity_holds: bool,
    /// Each `I(t)` is the principal ideal below `x(t)` (checked only when requested).
    pub ideals_checked: Option<bool>,
}

pub fn cog_bprime_terms(ch: &CogHeap, tree: &LsTree) -> Vec<BprimeTerm> {
    let lw = ch.w.length() as i32;
    tree.enumerate_labelings()
        .into_iter()
        .map(|t| {
            let (_, x) = gamma_and_x(ch, tree, &t);
            let exponent = 2 * t.size() as i32 - (lw - x.length() as i32);
            BprimeTerm { labeling: t, exponent, x }
        })
        .collect()
}

/// `Σ_t q^{exponent/2} B'_{x(t)}`.
pub fn bprime_sum(n: usize, terms: &[BprimeTerm]) -> HeckeElement {
    let mut h = HeckeElement::zero(n);
    for term in terms {
        let b = bprime_element(&term.x).scale(&LPoly::v_pow(term.exponent));
        h = h.add(&b).expect("same rank");
    }
    h
}

/// Expansion of `C'_w` in the `B'` basis, verified exactly against the oracle.
pub fn cog_bprime_expansion(w: &Perm, check_ideals: bool) -> Result<BprimeExpansion> {
    let ch = CogHeap::new(w)?;
    let tree = LsTree::from_cog(&ch);
    let terms = cog_bprime_terms(&ch, &tree);
    let identity_holds = bprime_sum(w.n(), &terms) == crate::kl::cprime_element(w);
    let ideals_checked = if check_ideals { Some(ideals_are_principal(&ch, &tree, &terms)?) } else { None };
    Ok(BprimeExpansion { terms, identity_holds, ideals_checked })
}

/// Checks that `I(t) = {x <= w : every leaf label of t fits in the zero count of x̃}` equals `[e, x(t)]`.
fn ideals_are_principal(ch: &CogHeap, tree: &LsTree, terms: &[BprimeTerm]) -> Result<bool> {
    let interval = bruhat_interval(&ch.w);
    let mut zero_counts = Vec::with_capacity(interval.len());
    for x in &interval {
        let xt = cograssmannianize(ch, x)?;
        let mask = fwp_mask(&ch.word, &BTreeSet::new(), &xt)
            .ok_or_else(|| Error::Internal(format!("no defect-free mask for {xt}")))?;
        let counts: Vec<usize> = tree
            .leaves()
            .into_iter()
            .map(|i| {
                let col = tree.nodes[i].valley.expect("leaf").column;
                ch.heap.column_entries(col).into_iter().filter(|&e| !mask[e]).count()
            })
            .collect();
        zero_counts.push(counts);
    }
    for term in terms {
        let leaf_labels: Vec<usize> = tree.leaf_labels(&term.labeling).into_iter().map(|(_, m)| m).collect();
        for (x, counts) in interval.iter().zip(&zero_counts) {
            let in_ideal = leaf_labels.iter().zip(counts).all(|(m, c)| m <= c);
            if in_ideal != x.bruhat_leq(&term.x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn running() -> Perm {
        Perm::from_word(8, &[1, 5, 7, 2, 4, 6, 3, 5, 4, 1, 2, 3, 1, 2, 1, 7, 6, 5, 7, 6, 7]).unwrap()
    }

    #[test]
    fn running_example_labelings() {
        let tree = LsTree::new(&running()).unwrap();
        let ls: Vec<Vec<usize>> = tree.enumerate_labelings().into_iter().map(|t| t.labels).collect();
        assert_eq!(ls, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1], vec![1, 1, 0], vec![1, 1, 1]]);
    }

    #[test]
    fn second_labeling_x() {
        let w = running();
        let ch = CogHeap::new(&w).unwrap();
        let tree = LsTree::from_cog(&ch);
        let t = &tree.enumerate_labelings()[1];
        let (_, x) = gamma_and_x(&ch, &tree, t);
        let expect =
            Perm::from_word(8, &[1, 2, 4, 3, 5, 4, 1, 2, 3, 1, 2, 1, 7, 6, 5, 7, 6, 7]).unwrap();
        assert_eq!(x, expect);
    }

    #[test]
    fn kl_4231() {
        let w: Perm = "4231".parse().unwrap();
        assert_eq!(ls_kl(&Perm::identity(4), &w).unwrap().to_string(), "1+q");
        assert_eq!(ls_kl(&w, &w).unwrap(), QPoly::one());
    }
}
