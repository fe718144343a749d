use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use klmasks::bs::cell_dimension;
use klmasks::construct1::StepVariant;
use klmasks::mask::{all_masks, Mask};
use klmasks::perm::Perm;
use klmasks::verify::{self, CheckResult};
use klmasks::zel::Variant;

const SEED: u64 = 0x5eed_0006;

struct Criterion {
    id: usize,
    name: &'static str,
    checks: Vec<CheckResult>,
    extra: Vec<String>,
    secs: f64,
}

impl Criterion {
    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.extra.is_empty()
    }
}

fn criterion(id: usize, name: &'static str, body: impl FnOnce(&mut Vec<String>) -> Vec<CheckResult>) -> Criterion {
    let start = Instant::now();
    let mut extra = Vec::new();
    let checks = body(&mut extra);
    Criterion { id, name, checks, extra, secs: start.elapsed().as_secs_f64() }
}

fn sorted_prefix(v: &[u8], d: usize) -> Vec<u8> {
    let mut s = v[..d].to_vec();
    s.sort();
    s
}

// Signs read off the flags directly: V_j sits between the subspace at the
// previous s_{d-1} and the one at the previous s_{d+1}; it is `+` when it
// keeps the larger of the two free coordinates.
fn oracle_plus_count(n: usize, word: &[usize], bits: &[bool]) -> (usize, usize, Perm) {
    let mut r: Vec<u8> = (1..=n as u8).collect();
    let mut latest: Vec<Option<Vec<u8>>> = vec![None; n + 1];
    let mut plus = 0;
    let mut defects = 0;
    for (&d, &b) in word.iter().zip(bits) {
        if r[d - 1] > r[d] {
            defects += 1;
        }
        if b {
            r.swap(d - 1, d);
        }
        let v = sorted_prefix(&r, d);
        let lower = latest[d - 1].clone().unwrap_or_else(|| (1..d as u8).collect());
        let upper = latest.get(d + 1).cloned().flatten().unwrap_or_else(|| (1..=d as u8 + 1).collect());
        let free: Vec<u8> = upper.iter().copied().filter(|x| !lower.contains(x)).collect();
        assert_eq!(free.len(), 2, "flag condition broken at {word:?}");
        if v.contains(&free[1]) {
            plus += 1;
        }
        latest[d] = Some(v);
    }
    (plus, defects, Perm::new(r).expect("permutation"))
}

fn plus_oracle_case(n: usize, word: &[usize], bits: &[bool], failures: &mut Vec<String>) {
    let (plus, d, x) = oracle_plus_count(n, word, bits);
    let lib = cell_dimension(&Mask::new(n, word, bits.to_vec()).expect("reduced"));
    if plus != x.length() + d || lib != plus {
        if failures.len() < 10 {
            failures.push(format!("plus oracle {word:?} {bits:?}: oracle {plus}, library {lib}, l+d {}", x.length() + d));
        }
    }
}

fn random_reduced_word(rng: &mut ChaCha8Rng, w: &Perm) -> Vec<usize> {
    let mut cur = w.clone();
    let mut rev = Vec::new();
    while !cur.is_identity() {
        let descents: Vec<usize> = cur.right_descents().into_iter().collect();
        let i = descents[rng.gen_range(0..descents.len())];
        cur = cur.mul_s_right(i);
        rev.push(i);
    }
    rev.reverse();
    rev
}

fn plus_oracle(failures: &mut Vec<String>) {
    for n in 2..=5 {
        for w in Perm::all(n) {
            for word in w.reduced_words() {
                for bits in all_masks(word.len()).expect("short word") {
                    plus_oracle_case(n, &word, &bits, failures);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let all = Perm::all(6);
    for _ in 0..100_000 {
        let w = &all[rng.gen_range(0..all.len())];
        let word = random_reduced_word(&mut rng, w);
        let bits: Vec<bool> = (0..word.len()).map(|_| rng.gen()).collect();
        plus_oracle_case(6, &word, &bits, failures);
    }
}

fn main() -> ExitCode {
    let both = [StepVariant::UpSteps, StepVariant::DownSteps];
    let criteria = vec![
        criterion(1, "worked examples", |extra| {
            let c = verify::paper_examples();
            if c.millis >= 5000 {
                extra.push(format!("took {} ms", c.millis));
            }
            vec![c]
        }),
        criterion(2, "oracle concordance n<=6", |_| vec![verify::oracle_concordance(6)]),
        criterion(3, "B' expansion identity n<=6", |_| vec![verify::cog_bprime(6)]),
        criterion(4, "construction 1 bounded, admissible, KL n<=6", |_| {
            both.iter()
                .flat_map(|&v| [verify::construction1_terms(6, v), verify::construction1(6, 6, v)])
                .collect()
        }),
        criterion(5, "construction 2 geometric and KL n<=5", |_| {
            vec![verify::construction2(5, Variant::NeSw), verify::construction2(5, Variant::NwSe)]
        }),
        criterion(6, "plus count equals length plus defects", |extra| {
            plus_oracle(extra);
            vec![verify::plus_count(5, 6, 100_000, SEED)]
        }),
        criterion(7, "fwp masks and lower ideals", |_| vec![verify::fwp(5, 8, 100, SEED)]),
        criterion(8, "injectivity n<=6", |_| both.iter().map(|&v| verify::injectivity(6, v)).collect()),
        criterion(9, "smallness n<=5", |_| vec![verify::smallness(5)]),
        criterion(10, "compare constructions n<=6", |_| vec![verify::compare_check(6)]),
    ];

    let mut ok = true;
    for c in &criteria {
        let cases: usize = c.checks.iter().map(|r| r.cases).sum();
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {:>2}: {} ({cases} cases, {:.1} s)", c.id, c.name, c.secs);
        for r in c.checks.iter().filter(|r| !r.passed) {
            for f in &r.failures {
                println!("     {}: {f}", r.name);
            }
        }
        for f in &c.extra {
            println!("     {f}");
        }
        ok &= c.passed();
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
