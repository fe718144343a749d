use klmasks::bs::{
    cell_dimension, decode_pm, encode_pm, fiber_profile, fixed_point, pi_image, staircase, BsIndexing,
};
use klmasks::mask::{all_masks, Mask};
use klmasks::perm::Perm;
use klmasks::poly::QPoly;

fn m(s: &str) -> Mask {
    Mask::from_bitstring(3, &[1, 2, 1], s).unwrap()
}

fn every_mask(n: usize) -> Vec<Mask> {
    let mut out = Vec::new();
    for w in Perm::all(n) {
        for word in w.reduced_words() {
            for bits in all_masks(word.len()).unwrap() {
                out.push(Mask::new(n, &word, bits).unwrap());
            }
        }
    }
    out
}

fn sorted_prefix(v: &[u8], d: usize) -> Vec<u8> {
    let mut s = v[..d].to_vec();
    s.sort();
    s
}

#[test]
fn sign_strings() {
    assert_eq!(encode_pm(&m("011")).to_string(), "-++");
    assert_eq!(encode_pm(&m("100")).to_string(), "+-+");
    assert_eq!(cell_dimension(&m("111")), 3);
}

#[test]
fn sign_round_trip_up_to_s4() {
    for n in 2..=4 {
        for mask in every_mask(n) {
            let e = encode_pm(&mask);
            assert_eq!(decode_pm(n, &mask.word, &e).unwrap(), mask);
            assert_eq!(e.to_string().parse::<klmasks::bs::PmEncoding>().unwrap(), e);
        }
    }
}

#[test]
fn table_fixed_points() {
    assert_eq!(fixed_point(&m("011")).0, vec![vec![1], vec![1, 3], vec![3]]);
    assert_eq!(fixed_point(&m("000")).0, vec![vec![1], vec![1, 2], vec![1]]);
    assert_eq!(pi_image(&m("101")), staircase(&Perm::identity(3)));
}

#[test]
fn chains_and_images_up_to_s4() {
    for n in 2..=4 {
        for mask in every_mask(n) {
            let idx = BsIndexing::new(n, &mask.word);
            let fp = fixed_point(&mask);
            assert!(fp.satisfies_chains(&idx));
            let x = mask.value();
            let expect: Vec<Vec<u8>> = (1..n).map(|d| sorted_prefix(x.as_slice(), d)).collect();
            assert_eq!(pi_image(&mask), expect);
        }
    }
}

#[test]
fn plus_count_is_length_plus_defects() {
    for n in 2..=5 {
        let w0 = Perm::new((1..=n as u8).rev().collect()).unwrap();
        let word = w0.reduced_word();
        for bits in all_masks(word.len()).unwrap() {
            let mask = Mask::new(n, &word, bits).unwrap();
            let d = mask.defect_profile().d;
            assert_eq!(cell_dimension(&mask), mask.value().length() + d);
        }
    }
}

#[test]
fn fiber_over_identity() {
    let prof = fiber_profile(3, &[1, 2, 1], &Perm::identity(3)).unwrap();
    assert_eq!(prof.poly, QPoly::new(vec![1, 1]));
    assert!(!prof.small);
    let s1 = Perm::from_word(3, &[1]).unwrap();
    assert!(!fiber_profile(3, &[1, 2, 1], &s1).unwrap().small_at_x);
}
