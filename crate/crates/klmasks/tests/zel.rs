use std::collections::BTreeSet;

use klmasks::kl::kl_polynomial;
use klmasks::perm::Perm;
use klmasks::zel::{
    choose_k, enumerate_orderings, sigma_of_tau, zelevinsky_kl, PeakOrdering, RectData, TauDatum, Variant,
};

fn p(s: &str) -> Perm {
    s.parse().unwrap()
}

fn big_w() -> Perm {
    Perm::new(vec![23, 21, 17, 16, 15, 12, 11, 10, 8, 4, 3, 2, 22, 20, 19, 18, 14, 13, 9, 7, 6, 5, 1]).unwrap()
}

fn big_ordering() -> PeakOrdering {
    PeakOrdering::from_columns(&big_w(), &[14, 7, 1, 20, 22, 9]).unwrap()
}

fn span(ranges: &[(u8, u8)]) -> Vec<u8> {
    let s: BTreeSet<u8> = ranges.iter().flat_map(|&(a, b)| a..=b).collect();
    s.into_iter().collect()
}

fn rect(d: usize, ldim: usize, rdim: usize, lpred: Option<usize>, rpred: Option<usize>) -> RectData {
    RectData { d, ldim, rdim, lpred, rpred }
}

#[test]
fn large_example_is_cograssmannian_with_ascent_twelve() {
    let w = big_w();
    assert!(w.is_cograssmannian());
    assert_eq!(w.right_ascents().into_iter().collect::<Vec<_>>(), vec![12]);
    assert_eq!(w.length(), 185);
}

#[test]
fn large_example_rectangles() {
    let o = big_ordering();
    let expected = vec![
        rect(15, 12, 17, None, None),
        rect(5, 4, 8, None, None),
        rect(4, 0, 5, None, Some(1)),
        rect(16, 15, 21, Some(0), None),
        rect(17, 16, 23, Some(3), None),
        rect(12, 4, 17, Some(2), Some(4)),
    ];
    assert_eq!(o.shape.rects, expected);
    assert_eq!(o.shape.z, 12);
    let dims: Vec<(usize, usize)> = o.shape.rects.iter().map(|r| (r.rows(), r.cols())).collect();
    assert_eq!(dims, vec![(3, 2), (1, 3), (4, 1), (1, 5), (1, 6), (8, 5)]);
    let sizes: usize = o.rects.iter().map(|r| r.entries.len()).sum();
    assert_eq!(sizes, o.ch.v_len);
}

#[test]
fn large_example_ordering_is_neat() {
    assert!(big_ordering().is_neat());
}

#[test]
fn large_example_partitions() {
    let o = big_ordering();
    let w = vec![
        span(&[(1, 12), (15, 17)]),
        span(&[(1, 4), (7, 7)]),
        span(&[(1, 4)]),
        span(&[(1, 12), (14, 17)]),
        span(&[(1, 17)]),
        span(&[(1, 4), (6, 7), (9, 11), (13, 13), (15, 15), (17, 17)]),
    ];
    let parts = o.shape.partitions_from_w(&w).unwrap();
    let expected: Vec<Vec<usize>> =
        vec![vec![2, 2, 2], vec![2], vec![], vec![1], vec![], vec![5, 4, 3, 2, 2, 2, 1, 1]];
    assert_eq!(parts, expected);
    assert_eq!(o.shape.w_from_partitions(&parts).unwrap(), w);
}

#[test]
fn large_example_rejects_bad_subspace() {
    let o = big_ordering();
    let mut w = vec![span(&[(1, 15)]); 6];
    w[0] = span(&[(1, 11), (13, 16)]);
    assert!(o.shape.partitions_from_w(&w).is_err());
}

#[test]
fn choose_k_instance_from_large_example() {
    let o = big_ordering();
    let parts: Vec<Vec<usize>> =
        vec![vec![2, 2, 2], vec![2], vec![], vec![1], vec![], vec![5, 4, 3, 2, 2, 2, 1, 1]];
    let fp = o.shape.fixed_point(&TauDatum { partitions: parts, x_tau: Perm::identity(23) }).unwrap();
    assert_eq!(fp.a[5], span(&[(5, 17)]));
    assert_eq!(fp.d[5], vec![5, 8, 12, 14, 16]);
    assert_eq!(choose_k(&fp.a[5], &[5, 6, 7, 8, 9, 10], &fp.d[5]), Some(6));
}

#[test]
fn four_two_three_one_orderings_are_neat() {
    let all = enumerate_orderings(&p("4231")).unwrap();
    assert_eq!(all.len(), 2);
    assert!(all.iter().all(PeakOrdering::is_neat));
}

#[test]
fn four_two_three_one_tau_count_and_round_trip() {
    let o = PeakOrdering::from_columns(&p("4231"), &[1, 3]).unwrap();
    let dims: Vec<(usize, usize)> = o.shape.rects.iter().map(|r| (r.rows(), r.cols())).collect();
    assert_eq!(dims, vec![(1, 1), (1, 2)]);
    assert_eq!(o.shape.tau_count(), 24);
    let taus = o.shape.enumerate_tau().unwrap();
    assert_eq!(taus.len(), 24);
    let mut keys = BTreeSet::new();
    for tau in &taus {
        let fp = o.shape.fixed_point(tau).unwrap();
        assert_eq!(&o.shape.tau_from_sets(&fp.w, &fp.f).unwrap(), tau);
        keys.insert(fp.key());
    }
    assert_eq!(keys.len(), 24);
}

#[test]
fn four_two_three_one_cell_dimension() {
    let tau = TauDatum { partitions: vec![vec![1], vec![2]], x_tau: p("1234") };
    assert_eq!(tau.dimension(), 3);
    let o = PeakOrdering::from_columns(&p("4231"), &[1, 3]).unwrap();
    assert_eq!(o.shape.u_of(&tau.partitions).unwrap(), p("2413"));
}

#[test]
fn four_two_three_one_kl_from_cells() {
    for o in enumerate_orderings(&p("4231")).unwrap() {
        assert_eq!(zelevinsky_kl(&p("1234"), &o).unwrap().to_string(), "1+q");
    }
}

#[test]
fn cell_formula_agrees_with_recursion_in_s4() {
    for w in Perm::all(4).into_iter().filter(|w| w.is_cograssmannian() && !w.right_ascents().is_empty()) {
        for o in enumerate_orderings(&w).unwrap().into_iter().filter(PeakOrdering::is_neat) {
            for x in Perm::all(4) {
                assert_eq!(zelevinsky_kl(&x, &o).unwrap(), kl_polynomial(&x, &w).unwrap(), "x={x} w={w}");
            }
        }
    }
}

#[test]
fn sigma_lands_on_its_fixed_point() {
    for o in enumerate_orderings(&p("4231")).unwrap() {
        for variant in [Variant::NeSw, Variant::NwSe] {
            for tau in o.shape.enumerate_tau().unwrap() {
                let m = sigma_of_tau(&o, &tau, variant).unwrap();
                assert_eq!(o.rho_image(&m.bits).unwrap(), o.shape.fixed_point(&tau).unwrap(), "{tau}");
            }
        }
    }
}
