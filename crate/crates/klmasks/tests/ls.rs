use std::collections::{BTreeMap, BTreeSet};

use klmasks::heap::CogHeap;
use klmasks::kl::kl_polynomial;
use klmasks::ls::{cog_bprime_expansion, gamma_and_x, ls_kl, LsTree};
use klmasks::perm::Perm;

const RUNNING: [usize; 21] = [1, 5, 7, 2, 4, 6, 3, 5, 4, 1, 2, 3, 1, 2, 1, 7, 6, 5, 7, 6, 7];

fn running() -> Perm {
    Perm::from_word(8, &RUNNING).unwrap()
}

fn cograssmannian(n: usize) -> Vec<Perm> {
    Perm::all(n).into_iter().filter(Perm::is_cograssmannian).collect()
}

// Every label vector with child >= parent and leaf <= capacity.
fn brute_labelings(tree: &LsTree) -> BTreeSet<Vec<usize>> {
    let m = tree.edge_count();
    let caps: Vec<usize> = tree.nodes.iter().map(|n| n.valley.map_or(0, |v| v.capacity)).collect();
    let top = caps.iter().copied().max().unwrap_or(0);
    let mut out = BTreeSet::new();
    let total = (top + 1).pow(m as u32);
    for code in 0..total {
        let labels: Vec<usize> = (0..m).map(|i| code / (top + 1).pow(i as u32) % (top + 1)).collect();
        let ok = (1..tree.nodes.len()).all(|i| {
            let node = &tree.nodes[i];
            let above = match node.parent {
                Some(0) | None => 0,
                Some(p) => labels[p - 1],
            };
            labels[i - 1] >= above && (node.valley.is_none() || labels[i - 1] <= caps[i])
        });
        if ok {
            out.insert(labels);
        }
    }
    out
}

#[test]
fn running_example_tree() {
    let tree = LsTree::new(&running()).unwrap();
    assert_eq!(tree.nodes.len(), 4);
    assert_eq!(tree.nodes[0].children, vec![1, 3]);
    assert_eq!(tree.nodes[1].children, vec![2]);
    assert_eq!(tree.leaves(), vec![2, 3]);
    assert_eq!(tree.nodes[2].valley.unwrap().capacity, 1);
    assert_eq!(tree.nodes[3].valley.unwrap().capacity, 1);
    assert_eq!(tree.enumerate_labelings().len(), 6);
}

#[test]
fn running_example_labeling_value() {
    let ch = CogHeap::new(&running()).unwrap();
    let tree = LsTree::from_cog(&ch);
    let word = [1, 2, 4, 3, 5, 4, 1, 2, 3, 1, 2, 1, 7, 6, 5, 7, 6, 7];
    let expect = Perm::from_word(8, &word).unwrap();
    let xs: Vec<Perm> = tree.enumerate_labelings().iter().map(|t| gamma_and_x(&ch, &tree, t).1).collect();
    assert!(xs.contains(&expect));
    assert!(xs.contains(&running()));
}

#[test]
fn labelings_match_brute_force_in_s6() {
    for w in cograssmannian(6) {
        let tree = LsTree::new(&w).unwrap();
        let got: BTreeSet<Vec<usize>> = tree.enumerate_labelings().into_iter().map(|t| t.labels).collect();
        assert_eq!(got, brute_labelings(&tree), "{w}");
    }
}

#[test]
fn single_leaf_counts() {
    let mut seen = BTreeSet::new();
    for w in cograssmannian(6) {
        let tree = LsTree::new(&w).unwrap();
        if tree.edge_count() == 1 {
            let cap = tree.nodes[1].valley.unwrap().capacity;
            assert_eq!(tree.enumerate_labelings().len(), cap + 1, "{w}");
            seen.insert(cap);
        }
    }
    assert!(seen.len() >= 2);
    let tree = LsTree::new(&"4231".parse().unwrap()).unwrap();
    assert_eq!(tree.edge_count(), 1);
    assert_eq!(tree.enumerate_labelings().len(), 2);
}

#[test]
fn equal_leaf_labels_give_equal_values() {
    for w in cograssmannian(6) {
        let ch = CogHeap::new(&w).unwrap();
        let tree = LsTree::from_cog(&ch);
        let mut by_leaves: BTreeMap<Vec<(usize, usize)>, Perm> = BTreeMap::new();
        for t in tree.enumerate_labelings() {
            let x = gamma_and_x(&ch, &tree, &t).1;
            let prev = by_leaves.entry(tree.leaf_labels(&t)).or_insert_with(|| x.clone());
            assert_eq!(*prev, x, "{w}");
        }
    }
}

#[test]
fn tree_formula_matches_recursion_in_s5() {
    for w in cograssmannian(5) {
        for x in Perm::all(5) {
            assert_eq!(ls_kl(&x, &w).unwrap(), kl_polynomial(&x, &w).unwrap(), "x={x} w={w}");
        }
    }
    assert_eq!(ls_kl(&"1234".parse().unwrap(), &"4231".parse().unwrap()).unwrap().to_string(), "1+q");
}

#[test]
fn bprime_identity_in_s5() {
    for w in cograssmannian(5) {
        let exp = cog_bprime_expansion(&w, true).unwrap();
        assert!(exp.identity_holds, "{w}");
        assert_eq!(exp.ideals_checked, Some(true), "{w}");
    }
}

#[test]
fn running_example_bprime_terms() {
    let exp = cog_bprime_expansion(&running(), false).unwrap();
    let mut e: Vec<i32> = exp.terms.iter().map(|t| t.exponent).collect();
    e.sort();
    assert_eq!(e, vec![-3, -3, -1, -1, -1, 0]);
    assert!(exp.identity_holds);
}
