//! Exhaustive verification suites over small ranks, shared by the `verify`
//! subcommand and the acceptance test.
//!
//! Every check returns a [`CheckResult`]; a check never panics on a failed
//! comparison, it records the first few counterexamples instead.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bs::{cell_dimension, encode_pm, fixed_point};
use crate::construct1::{StepVariant, VariantConstruction};
use crate::error::{Error, Result};
use crate::heap::{CogHeap, Heap};
use crate::kl::{bprime_element, bruhat_interval, kl_polynomial};
use crate::ls::{cog_bprime_expansion, ls_kl, LsTree};
use crate::mask::{all_masks, bits_to_string, defect_set, fwp_ideal_below, fwp_mask, h_of, value_and_defects, Mask};
use crate::perm::Perm;
use crate::poly::LPoly;
use crate::zel::{
    choose_k, construction2_set, enumerate_orderings, is_geometric, zelevinsky_kl_column, PeakOrdering, TauDatum,
    Variant,
};

/// Largest rank accepted by [`verify_all`] and the suites.
pub const MAX_VERIFY_RANK: usize = 7;

const MAX_FAILURES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<String>,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Collects counterexamples while counting cases.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
    failed: bool,
}

impl Tally {
    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed = true;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failed |= other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(f);
            }
        }
    }

    fn error(&mut self, e: Error) {
        self.case(false, || e.to_string());
    }
}

fn run(name: &str, f: impl FnOnce(&mut Tally)) -> CheckResult {
    let start = Instant::now();
    let mut t = Tally::default();
    f(&mut t);
    CheckResult {
        name: name.to_string(),
        passed: !t.failed,
        cases: t.cases,
        failures: t.failures,
        millis: start.elapsed().as_millis(),
    }
}

fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T, &mut Tally) + Sync + Send) -> Tally {
    items
        .par_iter()
        .map(|item| {
            let mut t = Tally::default();
            f(item, &mut t);
            t
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::default(), |mut acc, t| {
            acc.absorb(t);
            acc
        })
}

/// Cograssmannian permutations of every rank `2..=n_max`, in rank then
/// lexicographic order.
pub fn cograssmannian_upto(n_max: usize) -> Vec<Perm> {
    (2..=n_max).flat_map(|n| Perm::all(n).into_iter().filter(Perm::is_cograssmannian)).collect()
}

fn neat_orderings(w: &Perm) -> Result<Vec<PeakOrdering>> {
    Ok(enumerate_orderings(w)?.into_iter().filter(PeakOrdering::is_neat).collect())
}

/// Cograssmannian permutations that have an ascent, so that peak orderings exist.
fn with_ascent(n_max: usize) -> Vec<Perm> {
    cograssmannian_upto(n_max).into_iter().filter(|w| !w.right_ascents().is_empty()).collect()
}

fn check_guard(n_max: usize) -> Result<()> {
    if n_max > MAX_VERIFY_RANK {
        return Err(Error::GuardExceeded(format!("rank {n_max} exceeds the verification limit {MAX_VERIFY_RANK}")));
    }
    Ok(())
}

fn p(s: &str) -> Perm {
    s.parse().expect("literal permutation")
}

fn sets(v: &[&[u8]]) -> Vec<Vec<u8>> {
    v.iter().map(|s| s.to_vec()).collect()
}

/// Worked examples with known answers.
pub fn paper_examples() -> CheckResult {
    run("paper-examples", |t| {
        let mut words = p("3412").reduced_words();
        words.sort();
        t.case(words == vec![vec![2, 1, 3, 2], vec![2, 3, 1, 2]], || format!("reduced words of 3412: {words:?}"));

        match Heap::new(5, &[2, 3, 1, 2, 4]) {
            Ok(h) => {
                let mut covers = h.covers().to_vec();
                covers.sort();
                t.case(h.levels() == [2, 1, 1, 0, 0], || format!("heap levels {:?}", h.levels()));
                t.case(covers == [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3)], || format!("heap covers {covers:?}"));
            }
            Err(e) => t.error(e),
        }

        let word = [2, 1, 3, 2, 3];
        let defects: BTreeSet<usize> = [4].into();
        let x = Perm::from_word(4, &[2, 1]).expect("valid");
        let got = fwp_mask(&word, &defects, &x).map(|m| bits_to_string(&m));
        t.case(got.as_deref() == Some("11101"), || format!("F_w^P mask {got:?}"));
        let values: Vec<Perm> = bruhat_interval(&Perm::from_word(4, &word).expect("valid"))
            .into_iter()
            .filter(|y| fwp_mask(&word, &defects, y).is_some())
            .collect();
        let maximal: BTreeSet<Perm> = values
            .iter()
            .filter(|y| !values.iter().any(|z| z != *y && y.bruhat_leq(z).unwrap_or(false)))
            .cloned()
            .collect();
        let expect: BTreeSet<Perm> = [Perm::from_word(4, &[2, 3, 2]), Perm::from_word(4, &[2, 1, 3])]
            .into_iter()
            .map(|r| r.expect("valid"))
            .collect();
        t.case(maximal == expect, || format!("maximal elements of F_w^P: {maximal:?}"));

        let rows: [(&str, &str, &[usize], usize, &[&[u8]]); 8] = [
            ("000", "---", &[], 0, &[&[1], &[1, 2], &[1]]),
            ("001", "--+", &[1], 0, &[&[1], &[1, 2], &[2]]),
            ("010", "-+-", &[2], 0, &[&[1], &[1, 3], &[1]]),
            ("100", "+-+", &[1], 1, &[&[2], &[1, 2], &[2]]),
            ("101", "+--", &[], 1, &[&[2], &[1, 2], &[1]]),
            ("110", "++-", &[1, 2], 0, &[&[2], &[2, 3], &[2]]),
            ("011", "-++", &[2, 1], 0, &[&[1], &[1, 3], &[3]]),
            ("111", "+++", &[1, 2, 1], 0, &[&[2], &[2, 3], &[3]]),
        ];
        for (bits, signs, value, d, fp) in rows {
            match Mask::from_bitstring(3, &[1, 2, 1], bits) {
                Ok(m) => {
                    let prof = m.defect_profile();
                    let ok = encode_pm(&m).to_string() == signs
                        && Perm::from_word(3, value).ok() == Some(prof.value.clone())
                        && prof.d == d
                        && fixed_point(&m).0 == sets(fp);
                    t.case(ok, || format!("s1s2s1 table row {bits}"));
                }
                Err(e) => t.error(e),
            }
        }

        let running = Perm::from_word(8, &[1, 5, 7, 2, 4, 6, 3, 5, 4, 1, 2, 3, 1, 2, 1, 7, 6, 5, 7, 6, 7]).expect("valid");
        match CogHeap::new(&running) {
            Ok(ch) => {
                let r = ch.ridgeline();
                t.case(r.parens == "(())()", || format!("ridgeline {}", r.parens));
                let tree = LsTree::from_cog(&ch);
                let n = tree.enumerate_labelings().len();
                t.case(n == 6, || format!("{n} labelings"));
            }
            Err(e) => t.error(e),
        }
        match cog_bprime_expansion(&running, false) {
            Ok(exp) => {
                let mut got: Vec<i32> = exp.terms.iter().map(|b| b.exponent).collect();
                got.sort();
                t.case(got == vec![-3, -3, -1, -1, -1, 0], || format!("B' exponents (halves) {got:?}"));
                let heads: BTreeSet<Perm> = exp.terms.iter().map(|b| b.x.clone()).collect();
                let expect: BTreeSet<Perm> = [
                    vec![],
                    vec![6, 7, 5],
                    vec![3, 2, 4, 1, 5],
                    vec![3, 2, 4, 6, 1, 5, 7],
                ]
                .into_iter()
                .map(|prefix| {
                    Perm::from_word(8, &prefix).expect("valid").multiply(&running).expect("same rank")
                })
                .collect();
                t.case(heads == expect, || "B' expansion support".to_string());
                t.case(exp.identity_holds, || "B' expansion identity".to_string());
            }
            Err(e) => t.error(e),
        }

        match PeakOrdering::from_columns(&p("4231"), &[1, 3]) {
            Ok(o) => {
                let table: [(&[usize], &[usize], &str, &str, usize); 12] = [
                    (&[], &[], "1234", "1234", 0),
                    (&[1], &[], "1234", "1234", 1),
                    (&[], &[1], "1234", "1324", 1),
                    (&[1], &[1], "1234", "2314", 2),
                    (&[], &[2], "1234", "1423", 2),
                    (&[1], &[2], "1234", "2413", 3),
                    (&[], &[], "2134", "2134", 1),
                    (&[1], &[], "2134", "2134", 2),
                    (&[], &[1], "2134", "3124", 2),
                    (&[1], &[1], "2134", "3214", 3),
                    (&[], &[2], "2134", "4123", 3),
                    (&[1], &[2], "2134", "4213", 4),
                ];
                for (a, b, xt, value, dim) in table {
                    let tau = TauDatum { partitions: vec![a.to_vec(), b.to_vec()], x_tau: p(xt) };
                    let got = o.shape.value(&tau);
                    let ok = got.as_ref().ok() == Some(&p(value)) && tau.dimension() == dim;
                    t.case(ok, || format!("4231 cell {a:?},{b:?} over {xt}: {got:?}, dim {}", tau.dimension()));
                }
            }
            Err(e) => t.error(e),
        }

        let a: Vec<u8> = (5..=17).collect();
        let k = choose_k(&a, &[5, 6, 7, 8, 9, 10], &[5, 8, 12, 14, 16]);
        t.case(k == Some(6), || format!("choose-k gave {k:?}"));

        let kl = kl_polynomial(&Perm::identity(4), &p("4231")).map(|q| q.to_string());
        t.case(kl.as_deref() == Ok("1+q"), || format!("P_(1234,4231) = {kl:?}"));
    })
}

/// LS trees, Zelevinsky cells and the recursive KL computation agree.
pub fn oracle_concordance(n_max: usize) -> CheckResult {
    run("oracle-concordance", |t| {
        let ws = cograssmannian_upto(n_max);
        t.absorb(par_tally(&ws, |w, t| {
            let orderings = if w.right_ascents().is_empty() {
                Ok(Vec::new())
            } else {
                neat_orderings(w)
            };
            let orderings = match orderings {
                Ok(o) => o,
                Err(e) => return t.error(e),
            };
            let mut columns = Vec::new();
            for o in &orderings {
                match zelevinsky_kl_column(o) {
                    Ok(c) => columns.push((o.peak_columns(), c)),
                    Err(e) => return t.error(e),
                }
            }
            for x in bruhat_interval(w) {
                let (kl, ls) = match (kl_polynomial(&x, w), ls_kl(&x, w)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(e), _) | (_, Err(e)) => return t.error(e),
                };
                t.case(kl == ls, || format!("ls_kl({x},{w}) = {ls}, expected {kl}"));
                for (cols, col) in &columns {
                    let z = col.get(&x).cloned().unwrap_or_default();
                    t.case(z == kl, || format!("zelevinsky_kl({x},{w},{cols:?}) = {z}, expected {kl}"));
                }
            }
        }));
    })
}

/// `C'_w` expands in the `B'` basis along edge labelings.
pub fn cog_bprime(n_max: usize) -> CheckResult {
    run("cog-bprime-expansion", |t| {
        let ws = cograssmannian_upto(n_max);
        t.absorb(par_tally(&ws, |w, t| match cog_bprime_expansion(w, true) {
            Ok(e) => t.case(e.identity_holds && e.ideals_checked == Some(true), || format!("expansion fails for {w}")),
            Err(e) => t.error(e),
        }));
    })
}

/// The first construction yields a bounded admissible set satisfying Deodhar's identity.
pub fn construction1(n_max: usize, hecke_max: usize, variant: StepVariant) -> CheckResult {
    run(&format!("construction1-{variant}"), |t| {
        let ws = cograssmannian_upto(n_max);
        t.absorb(par_tally(&ws, |w, t| {
            let set = match VariantConstruction::new(w, variant).and_then(|c| c.construction1_set()) {
                Ok(s) => s,
                Err(e) => return t.error(e),
            };
            t.case(set.is_distinct(), || format!("{w}: repeated masks"));
            t.case(set.is_bounded(), || format!("{w}: not bounded"));
            let admissible = if w.n() <= hecke_max {
                set.is_admissible()
            } else {
                set.contains_all_ones() && set.closed_under_last_flip()
            };
            t.case(admissible, || format!("{w}: not admissible"));
            let report = set.compare_with_oracle();
            t.case(report.passed(), || format!("{w}: Deodhar mismatch at {:?}", report.mismatches.first()));
        }));
    })
}

/// Per-labeling value, defect count and Hecke identity of the first construction.
pub fn construction1_terms(n_max: usize, variant: StepVariant) -> CheckResult {
    run(&format!("construction1-terms-{variant}"), |t| {
        let ws = cograssmannian_upto(n_max);
        t.absorb(par_tally(&ws, |w, t| {
            let c = match VariantConstruction::new(w, variant) {
                Ok(c) => c,
                Err(e) => return t.error(e),
            };
            let terms = match c.terms() {
                Ok(x) => x,
                Err(e) => return t.error(e),
            };
            let ch = &c.base.ch;
            for term in &terms {
                let (x, d) = value_and_defects(ch.n(), &ch.word, &term.sigma);
                t.case(x == term.x && d == term.labeling.size(), || {
                    format!("{w} t={:?}: value {x} with {d} defects", term.labeling.labels)
                });
                let ideal = fwp_ideal_below(&ch.word, &term.defects, &term.x);
                let exponent = 2 * term.labeling.size() as i32 + term.x.length() as i32 - ch.word.len() as i32;
                let expect = bprime_element(&term.x).scale(&LPoly::v_pow(exponent));
                t.case(h_of(ch.n(), &ch.word, &ideal) == expect, || {
                    format!("{w} t={:?}: h(F^P(t) below x(t)) is not a multiple of B'", term.labeling.labels)
                });
                let problems = c.check_term(term).unwrap_or_else(|e| vec![e.to_string()]);
                t.case(problems.is_empty(), || format!("{w} t={:?}: {problems:?}", term.labeling.labels));
            }
        }));
    })
}

/// The second construction is geometric, bounded, admissible and satisfies Deodhar's identity.
pub fn construction2(n_max: usize, variant: Variant) -> CheckResult {
    run("construction2", |t| {
        let ws = with_ascent(n_max);
        let jobs: Vec<PeakOrdering> = ws
            .iter()
            .flat_map(|w| match neat_orderings(w) {
                Ok(o) => o,
                Err(_) => Vec::new(),
            })
            .collect();
        t.absorb(par_tally(&jobs, |o, t| {
            let w = &o.ch.w;
            let cols = o.peak_columns();
            let set = match construction2_set(o, variant) {
                Ok(s) => s,
                Err(e) => return t.error(e),
            };
            t.case(set.is_distinct(), || format!("{w} {cols:?}: repeated masks"));
            match is_geometric(&set, o) {
                Ok(g) => t.case(g.geometric, || format!("{w} {cols:?}: not geometric")),
                Err(e) => t.error(e),
            }
            t.case(set.is_bounded(), || format!("{w} {cols:?}: not bounded"));
            t.case(set.is_admissible(), || format!("{w} {cols:?}: not admissible"));
            let report = set.compare_with_oracle();
            t.case(report.passed(), || format!("{w} {cols:?}: Deodhar mismatch"));
        }));
    })
}

/// Reduced words of every permutation of rank `n` with length at most `max_len`.
fn reduced_words_upto(n: usize, max_len: usize) -> Vec<(Perm, Vec<usize>)> {
    Perm::all(n)
        .into_iter()
        .filter(|w| w.length() <= max_len)
        .flat_map(|w| w.reduced_words().into_iter().map(move |r| (w.clone(), r)))
        .collect()
}

fn plus_identity(n: usize, word: &[usize], bits: &[bool]) -> bool {
    let (x, d) = value_and_defects(n, word, bits);
    let m = Mask { n, word: word.to_vec(), bits: bits.to_vec() };
    cell_dimension(&m) == x.length() + d
}

/// Plus counts equal `ℓ(w^σ) + d(σ)`, exhaustively at rank `exhaustive`
/// and on random masks at rank `random_rank`.
pub fn plus_count(exhaustive: usize, random_rank: usize, samples: usize, seed: u64) -> CheckResult {
    run("plus-count", |t| {
        let words: Vec<(usize, Vec<usize>)> =
            (2..=exhaustive).flat_map(|n| reduced_words_upto(n, usize::MAX).into_iter().map(move |(_, r)| (n, r))).collect();
        t.absorb(par_tally(&words, |(n, word), t| match all_masks(word.len()) {
            Ok(masks) => {
                for bits in masks {
                    t.case(plus_identity(*n, word, &bits), || format!("{word:?} {}", bits_to_string(&bits)));
                }
            }
            Err(e) => t.error(e),
        }));
        if samples == 0 {
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all = Perm::all(random_rank);
        for _ in 0..samples {
            let w = &all[rng.gen_range(0..all.len())];
            let word = w.reduced_word();
            let bits: Vec<bool> = (0..word.len()).map(|_| rng.gen()).collect();
            t.case(plus_identity(random_rank, &word, &bits), || format!("{word:?} {}", bits_to_string(&bits)));
        }
    })
}

/// `fwp_mask` agrees with filtering all masks, and its values form a lower ideal.
pub fn fwp(n_max: usize, max_len: usize, per_word: usize, seed: u64) -> CheckResult {
    run("fwp-ideal", |t| {
        let words: Vec<(usize, Perm, Vec<usize>)> = (2..=n_max)
            .flat_map(|n| reduced_words_upto(n, max_len).into_iter().map(move |(w, r)| (n, w, r)))
            .collect();
        let seeded: Vec<(u64, &(usize, Perm, Vec<usize>))> =
            words.iter().enumerate().map(|(i, job)| (seed.wrapping_add(i as u64), job)).collect();
        t.absorb(par_tally(&seeded, |(s, (n, w, word)), t| {
            let mut rng = ChaCha8Rng::seed_from_u64(*s);
            let masks = match all_masks(word.len()) {
                Ok(m) => m,
                Err(e) => return t.error(e),
            };
            let profile: Vec<(BTreeSet<usize>, Perm)> = masks
                .iter()
                .map(|bits| (defect_set(*n, word, bits), value_and_defects(*n, word, bits).0))
                .collect();
            let interval = bruhat_interval(w);
            for _ in 0..per_word {
                let defects: BTreeSet<usize> = (0..word.len()).filter(|_| rng.gen_bool(0.25)).collect();
                let brute: BTreeMap<Perm, &Vec<bool>> = masks
                    .iter()
                    .zip(&profile)
                    .filter(|(_, (d, _))| *d == defects)
                    .map(|(m, (_, x))| (x.clone(), m))
                    .collect();
                let fast: BTreeMap<Perm, Vec<bool>> =
                    interval.iter().filter_map(|x| fwp_mask(word, &defects, x).map(|m| (x.clone(), m))).collect();
                let agree = brute.len() == fast.len() && brute.iter().all(|(x, m)| fast.get(x) == Some(*m));
                t.case(agree, || format!("{word:?} P={defects:?}: filtering disagrees"));
                let ideal = fast.keys().all(|x| bruhat_interval(x).iter().all(|y| fast.contains_key(y)));
                t.case(ideal, || format!("{word:?} P={defects:?}: not a lower ideal"));
            }
        }));
    })
}

/// `t ↦ P(t)` is injective and inverted by `recover_labeling`.
pub fn injectivity(n_max: usize, variant: StepVariant) -> CheckResult {
    run(&format!("injectivity-{variant}"), |t| {
        let ws = cograssmannian_upto(n_max);
        t.absorb(par_tally(&ws, |w, t| {
            let c = match VariantConstruction::new(w, variant) {
                Ok(c) => c,
                Err(e) => return t.error(e),
            };
            let terms = match c.terms() {
                Ok(x) => x,
                Err(e) => return t.error(e),
            };
            let distinct: BTreeSet<&BTreeSet<usize>> = terms.iter().map(|term| &term.defects).collect();
            t.case(distinct.len() == terms.len(), || format!("{w}: two labelings share a defect set"));
            for term in &terms {
                let back = c.recover_labeling(&term.defects);
                t.case(back.as_ref().ok() == Some(&term.labeling), || {
                    format!("{w} t={:?}: recovered {back:?}", term.labeling.labels)
                });
            }
        }));
    })
}

/// Fibres of neat Zelevinsky resolutions satisfy `2(dim C_τ - ℓ(x)) < ℓ(w) - ℓ(x)` for `x < w`.
pub fn smallness(n_max: usize) -> CheckResult {
    run("smallness", |t| {
        let jobs: Vec<PeakOrdering> = with_ascent(n_max)
            .iter()
            .flat_map(|w| neat_orderings(w).unwrap_or_default())
            .collect();
        t.absorb(par_tally(&jobs, |o, t| {
            let w = &o.ch.w;
            let lw = w.length();
            let taus = match o.shape.enumerate_tau() {
                Ok(x) => x,
                Err(e) => return t.error(e),
            };
            let mut worst: BTreeMap<Perm, usize> = BTreeMap::new();
            for tau in &taus {
                match o.shape.value(tau) {
                    Ok(x) => {
                        let excess = tau.dimension() - x.length();
                        let e = worst.entry(x).or_insert(0);
                        *e = (*e).max(excess);
                    }
                    Err(e) => return t.error(e),
                }
            }
            for (x, excess) in worst.iter().filter(|(x, _)| *x != w) {
                t.case(2 * excess < lw - x.length(), || {
                    format!("{w} {:?}: fibre over {x} has dimension {excess}", o.peak_columns())
                });
            }
        }));
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareEntry {
    pub w: String,
    pub ordering: Vec<usize>,
    pub geometric: bool,
    pub masks: usize,
    pub fixed_points: u128,
    pub image_size: usize,
    pub collisions: usize,
    pub dimension_mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub n_max: usize,
    pub variant: StepVariant,
    pub geometric: usize,
    pub non_geometric: usize,
    /// Permutations whose set is geometric for no neat ordering.
    pub never_geometric: Vec<String>,
    pub entries: Vec<CompareEntry>,
}

/// Geometricity of first-construction sets under each neat ordering.
pub fn compare_constructions(n_max: usize, variant: StepVariant) -> Result<CompareReport> {
    check_guard(n_max)?;
    let ws = with_ascent(n_max);
    let per_w: Vec<Result<Vec<CompareEntry>>> = ws
        .par_iter()
        .map(|w| {
            let set = VariantConstruction::new(w, variant)?.construction1_set()?;
            neat_orderings(w)?
                .iter()
                .map(|o| {
                    let g = is_geometric(&set, o)?;
                    Ok(CompareEntry {
                        w: w.to_string(),
                        ordering: o.peak_columns(),
                        geometric: g.geometric,
                        masks: g.masks,
                        fixed_points: g.fixed_points,
                        image_size: g.image_size,
                        collisions: g.collisions.len(),
                        dimension_mismatches: g.dimension_mismatches.len(),
                    })
                })
                .collect()
        })
        .collect();
    let mut entries = Vec::new();
    for r in per_w {
        entries.extend(r?);
    }
    let geometric = entries.iter().filter(|e| e.geometric).count();
    let mut some: BTreeMap<&str, bool> = BTreeMap::new();
    for e in &entries {
        *some.entry(&e.w).or_default() |= e.geometric;
    }
    let mut never_geometric: Vec<String> = some.into_iter().filter(|(_, g)| !g).map(|(w, _)| w.to_string()).collect();
    never_geometric.sort_by_key(|w| (w.len(), w.clone()));
    Ok(CompareReport { n_max, variant, geometric, non_geometric: entries.len() - geometric, never_geometric, entries })
}

/// The report completes and is reproducible.
pub fn compare_check(n_max: usize) -> CheckResult {
    run("compare-constructions", |t| {
        let a = compare_constructions(n_max, StepVariant::UpSteps);
        let b = compare_constructions(n_max, StepVariant::UpSteps);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                let same = serde_json::to_string(&a).ok() == serde_json::to_string(&b).ok();
                t.case(same && !a.entries.is_empty(), || "report differs between runs".to_string());
            }
            (Err(e), _) | (_, Err(e)) => t.error(e),
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    PaperExamples,
    OracleConcordance,
    CogBprime,
    Construction1,
    Construction2,
    PlusCount,
    Fwp,
    Injectivity,
    Smallness,
    CompareConstructions,
    All,
}

const SUITES: [(Suite, &str); 11] = [
    (Suite::PaperExamples, "paper-examples"),
    (Suite::OracleConcordance, "oracle-concordance"),
    (Suite::CogBprime, "cog-bprime"),
    (Suite::Construction1, "construction1"),
    (Suite::Construction2, "construction2"),
    (Suite::PlusCount, "plus-count"),
    (Suite::Fwp, "fwp"),
    (Suite::Injectivity, "injectivity"),
    (Suite::Smallness, "smallness"),
    (Suite::CompareConstructions, "compare-constructions"),
    (Suite::All, "all"),
];

impl Suite {
    pub fn names() -> Vec<&'static str> {
        SUITES.iter().map(|(_, n)| *n).collect()
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SUITES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(suite, _)| *suite)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}, expected one of {}", Suite::names().join(", "))))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = SUITES.iter().find(|(s, _)| s == self).map(|(_, n)| *n).expect("listed");
        f.write_str(name)
    }
}

const SEED: u64 = 0x6b6c_6d61_736b;

/// Runs one suite with rank bound `n_max`. Checks whose default bound is
/// smaller than `n_max` keep their own bound.
pub fn run_suite(suite: Suite, n_max: usize) -> Result<VerifyReport> {
    check_guard(n_max)?;
    let small = n_max.min(5);
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::PaperExamples {
        checks.push(paper_examples());
    }
    if all || suite == Suite::OracleConcordance {
        checks.push(oracle_concordance(n_max));
    }
    if all || suite == Suite::CogBprime {
        checks.push(cog_bprime(n_max));
    }
    if all || suite == Suite::Construction1 {
        for v in [StepVariant::UpSteps, StepVariant::DownSteps] {
            checks.push(construction1_terms(n_max, v));
            checks.push(construction1(n_max, n_max, v));
        }
    }
    if all || suite == Suite::Construction2 {
        checks.push(construction2(small, Variant::NeSw));
    }
    if all || suite == Suite::PlusCount {
        let samples = if n_max >= 6 { 100_000 } else { 0 };
        checks.push(plus_count(small, 6, samples, SEED));
    }
    if all || suite == Suite::Fwp {
        checks.push(fwp(small, 8, 100, SEED));
    }
    if all || suite == Suite::Injectivity {
        for v in [StepVariant::UpSteps, StepVariant::DownSteps] {
            checks.push(injectivity(n_max, v));
        }
    }
    if all || suite == Suite::Smallness {
        checks.push(smallness(small));
    }
    if all || suite == Suite::CompareConstructions {
        checks.push(compare_check(n_max));
    }
    Ok(VerifyReport { n_max, checks })
}

pub fn verify_all(n_max: usize) -> Result<VerifyReport> {
    run_suite(Suite::All, n_max)
}
