use klmasks::heap::{canonical_cog_word, CogHeap, Heap};
use klmasks::perm::Perm;

fn p(s: &str) -> Perm {
    s.parse().unwrap()
}

const RUNNING: [usize; 21] = [1, 5, 7, 2, 4, 6, 3, 5, 4, 1, 2, 3, 1, 2, 1, 7, 6, 5, 7, 6, 7];

fn running() -> Perm {
    Perm::from_word(8, &RUNNING).unwrap()
}

#[test]
fn example_heap_covers() {
    let h = Heap::new(5, &[2, 3, 1, 2, 4]).unwrap();
    let mut covers = h.covers().to_vec();
    covers.sort();
    assert_eq!(covers, vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 3)]);
    assert_eq!(h.maximal(), vec![0]);
    let mut min = h.minimal();
    min.sort();
    assert_eq!(min, vec![3, 4]);
    assert_eq!(h.se(0), Some(1));
    assert_eq!(h.sw(0), Some(2));
    assert_eq!(h.ne(3), Some(1));
    assert_eq!(h.nw(4), Some(1));
}

#[test]
fn heap_order_is_transitive_closure_of_adjacency() {
    let word = [2, 1, 3, 2, 3, 4, 1];
    let h = Heap::new(5, &word).unwrap();
    let p = word.len();
    let mut reach = vec![vec![false; p]; p];
    for i in (0..p).rev() {
        for j in i + 1..p {
            reach[i][j] = word[i].abs_diff(word[j]) <= 1 || (i + 1..j).any(|k| reach[i][k] && reach[k][j]);
        }
    }
    for i in 0..p {
        for j in 0..p {
            assert_eq!(h.is_above(i, j), reach[i][j], "{i} {j}");
        }
    }
}

#[test]
fn strings_follow_the_value() {
    for word in [[1, 2, 1], [2, 1, 2]] {
        let h = Heap::new(4, &word).unwrap();
        assert_eq!(h.strings(&[true; 3]).unwrap().bottom(), p("3214"));
    }
    let h = Heap::new(3, &[1, 2, 1]).unwrap();
    let sd = h.strings(&[false, true, true]).unwrap();
    assert_eq!(sd.bottom(), Perm::from_word(3, &[2, 1]).unwrap());
    assert_eq!(sd.entering[1], (2, 3));
}

#[test]
fn running_example_canonical_word() {
    assert_eq!(canonical_cog_word(&running()).unwrap(), RUNNING.to_vec());
    let ch = CogHeap::new(&running()).unwrap();
    assert_eq!(ch.v_len, 9);
    assert_eq!(ch.z, Some(4));
    let r = ch.ridgeline();
    assert_eq!(r.parens, "(())()");
    let caps: Vec<(usize, usize)> = r.valleys.iter().map(|v| (v.column, v.capacity)).collect();
    assert_eq!(caps.len(), 2);
    assert!(caps.iter().all(|&(_, c)| c == 1));
}

#[test]
fn four_two_three_one_canonical_word() {
    let word = canonical_cog_word(&p("4231")).unwrap();
    assert_eq!(Perm::from_word(4, &word).unwrap(), p("4231"));
    assert_eq!(word.len(), 5);
    let ch = CogHeap::new(&p("4231")).unwrap();
    assert_eq!(Perm::from_word(4, &word[..ch.v_len]).unwrap(), p("2413"));
    assert_eq!(&word[ch.v_len..], &[1, 3]);
    assert_eq!(ch.ridgeline().parens, "()");
}

#[test]
fn canonical_words_are_reduced_in_s6() {
    for w in Perm::all(6).into_iter().filter(Perm::is_cograssmannian) {
        let word = canonical_cog_word(&w).unwrap();
        assert_eq!(word.len(), w.length());
        assert_eq!(Perm::from_word(6, &word).unwrap(), w);
    }
}

#[test]
fn not_cograssmannian_is_rejected() {
    assert!(canonical_cog_word(&p("1324")).is_err());
    assert!(Heap::new(3, &[1, 3]).is_err());
}
