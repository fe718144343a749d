use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use klmasks::construct1::{string_move, Construction1, StepVariant, VariantConstruction};
use klmasks::heap::Heap;
use klmasks::kl::{cprime_element, kl_column};
use klmasks::perm::Perm;

const RUNNING: [usize; 21] = [1, 5, 7, 2, 4, 6, 3, 5, 4, 1, 2, 3, 1, 2, 1, 7, 6, 5, 7, 6, 7];

fn cograssmannian(n: usize) -> Vec<Perm> {
    Perm::all(n).into_iter().filter(Perm::is_cograssmannian).collect()
}

fn kl_mass(w: &Perm) -> usize {
    kl_column(w).values().map(|p| p.eval_at_one() as usize).sum()
}

fn masked_value(n: usize, word: &[usize], bits: &[bool]) -> Perm {
    let sub: Vec<usize> = word.iter().zip(bits).filter(|(_, &b)| b).map(|(&s, _)| s).collect();
    Perm::from_word(n, &sub).unwrap()
}

fn defect_count(n: usize, word: &[usize], bits: &[bool]) -> usize {
    let mut r = Perm::identity(n);
    let mut d = 0;
    for (&s, &b) in word.iter().zip(bits) {
        if r.has_right_descent(s) {
            d += 1;
        }
        if b {
            r = r.mul_s_right(s);
        }
    }
    d
}

#[test]
fn terms_in_s5() {
    for variant in [StepVariant::UpSteps, StepVariant::DownSteps] {
        for w in cograssmannian(5) {
            let c = VariantConstruction::new(&w, variant).unwrap();
            for term in c.terms().unwrap() {
                let word = &c.base.ch.word;
                assert_eq!(masked_value(5, word, &term.sigma), term.x, "{w} {variant}");
                assert_eq!(defect_count(5, word, &term.sigma), term.labeling.size(), "{w} {variant}");
                assert!(c.check_term(&term).unwrap().is_empty(), "{w} {variant}");
            }
        }
    }
}

#[test]
fn mask_sets_in_s5() {
    for variant in [StepVariant::UpSteps, StepVariant::DownSteps] {
        for w in cograssmannian(5) {
            let set = VariantConstruction::new(&w, variant).unwrap().construction1_set().unwrap();
            assert!(set.is_distinct(), "{w}");
            assert!(set.is_bounded(), "{w}");
            assert!(set.is_admissible(), "{w}");
            assert!(set.deodhar_check().unwrap().passed(), "{w} {variant}");
        }
    }
}

#[test]
fn labelings_are_recovered_from_defects() {
    for variant in [StepVariant::UpSteps, StepVariant::DownSteps] {
        for w in cograssmannian(5) {
            let c = VariantConstruction::new(&w, variant).unwrap();
            for term in c.terms().unwrap() {
                assert_eq!(c.recover_labeling(&term.defects).unwrap(), term.labeling, "{w}");
            }
        }
    }
}

#[test]
fn running_example() {
    let w = Perm::from_word(8, &RUNNING).unwrap();
    let set = Construction1::new(&w).unwrap().construction1_set().unwrap();
    assert_eq!(set.len(), kl_mass(&w));
    assert_eq!(Construction1::new(&w).unwrap().labelings().len(), 6);
    assert!(set.is_bounded());
    assert!(set.contains_all_ones() && set.closed_under_last_flip());
    assert!(set.compare_with_oracle().passed());
    assert_eq!(set.prototype().h, cprime_element(&w));
}

#[test]
fn four_two_three_one_unit_label() {
    let w: Perm = "4231".parse().unwrap();
    let c = Construction1::new(&w).unwrap();
    let t = c.labelings().into_iter().find(|t| t.labels == vec![1]).unwrap();
    for v in c.valleys() {
        assert_eq!(c.valley_stats(&t, v.column).unwrap().p, 1);
    }
    let set = c.construction1_set().unwrap();
    assert_eq!(c.labelings().len(), 2);
    assert_eq!(set.len(), kl_mass(&w));
    assert_eq!(set.len(), 24);
    assert!(set.deodhar_check().unwrap().passed());
}

#[test]
fn string_moves_keep_the_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let words: [(usize, &[usize]); 3] = [(4, &[1, 2, 3, 1, 2, 1]), (5, &[2, 1, 3, 2, 4, 3, 2]), (8, &RUNNING)];
    for (n, word) in words {
        let heap = Heap::new(n, word).unwrap();
        for _ in 0..50 {
            let bits: Vec<bool> = (0..word.len()).map(|_| rng.gen_bool(0.5)).collect();
            let sd = heap.strings(&bits).unwrap();
            for a in 0..word.len() {
                for b in a + 1..word.len() {
                    if (sd.small(a), sd.big(a)) == (sd.small(b), sd.big(b)) {
                        let moved = string_move(n, word, &bits, a, b).unwrap();
                        assert_eq!(masked_value(n, word, &moved), masked_value(n, word, &bits));
                    }
                }
            }
        }
    }
    assert!(string_move(3, &[1, 2, 1], &[true, true, true], 0, 1).is_err());
}

#[test]
fn rejects_non_cograssmannian() {
    assert!(Construction1::new(&"1324".parse().unwrap()).is_err());
}
