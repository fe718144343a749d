use std::collections::BTreeSet;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use klmasks::bs::{decode_pm, encode_pm, fiber_profile, fixed_point, pi_image};
use klmasks::construct1::{StepVariant, VariantConstruction};
use klmasks::heap::{CogHeap, Heap};
use klmasks::kl::{bruhat_interval, cprime_element, kl_column, kl_polynomial};
use klmasks::ls::{cog_bprime_expansion, gamma_and_x, ls_kl, LsTree};
use klmasks::mask::{bits_to_string, fwp_ideal, fwp_ideal_below, parse_bits, Mask, MaskSet};
use klmasks::perm::{parse_word, word_to_string};
use klmasks::render::{heap_ascii, heap_svg, mask_ascii, mask_svg};
use klmasks::verify::{compare_constructions, run_suite, Suite, MAX_VERIFY_RANK};
use klmasks::zel::{
    construction2_set, enumerate_orderings, is_geometric, ordering_by_index, sigma_of_tau, zelevinsky_kl_column,
    PeakOrdering, Variant,
};
use klmasks::{Error, Perm};

#[derive(Parser)]
#[command(name = "klmasks", version, about = "Deodhar mask sets and Kazhdan-Lusztig polynomials for cograssmannian permutations")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Worker threads; overrides KLMASKS_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Ascii,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum C1Variant {
    UpSteps,
    DownSteps,
}

impl From<C1Variant> for StepVariant {
    fn from(v: C1Variant) -> Self {
        match v {
            C1Variant::UpSteps => StepVariant::UpSteps,
            C1Variant::DownSteps => StepVariant::DownSteps,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum C2Variant {
    NeSw,
    NwSe,
}

impl From<C2Variant> for Variant {
    fn from(v: C2Variant) -> Self {
        match v {
            C2Variant::NeSw => Variant::NeSw,
            C2Variant::NwSe => Variant::NwSe,
        }
    }
}

/// A reduced word given as comma separated generators, with an optional rank.
#[derive(clap::Args)]
struct WordArgs {
    #[arg(long)]
    word: String,
    /// Rank; defaults to one more than the largest generator.
    #[arg(long)]
    n: Option<usize>,
}

impl WordArgs {
    fn parse(&self) -> Result<(usize, Vec<usize>)> {
        let word = parse_word(&self.word)?;
        let n = self.n.unwrap_or_else(|| word.iter().max().map_or(1, |m| m + 1));
        klmasks::perm::check_reduced(n, &word)?;
        Ok((n, word))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Basic data of a permutation.
    Perm {
        #[arg(long)]
        perm: Perm,
    },
    /// Kazhdan-Lusztig polynomial P_{x,w}, or the whole column when --x is omitted.
    Kl {
        #[arg(long)]
        x: Option<Perm>,
        #[arg(long)]
        w: Perm,
        /// Also compare with the tree formula (cograssmannian w only).
        #[arg(long)]
        ls: bool,
    },
    /// Hecke algebra elements.
    Hecke {
        #[command(subcommand)]
        command: HeckeCommand,
    },
    /// Heap of a word, or of the canonical word of a cograssmannian permutation.
    Heap {
        #[arg(long, conflicts_with = "perm")]
        word: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        perm: Option<Perm>,
    },
    /// Masks on a reduced word.
    Masks {
        #[command(subcommand)]
        command: MasksCommand,
    },
    /// Lascoux-Schutzenberger tree, its edge labelings and the tree formula.
    Ls {
        #[arg(long)]
        perm: Perm,
        #[arg(long)]
        x: Option<Perm>,
    },
    /// The first mask construction.
    Construct1 {
        #[arg(long)]
        perm: Perm,
        #[arg(long, value_enum, default_value_t = C1Variant::UpSteps)]
        variant: C1Variant,
        /// Draw each mask sigma(t).
        #[arg(long)]
        render: bool,
    },
    /// Bott-Samelson fixed points and fibres.
    Bs {
        #[command(subcommand)]
        command: BsCommand,
    },
    /// Zelevinsky resolutions of a cograssmannian permutation.
    Zel {
        #[command(subcommand)]
        command: ZelCommand,
    },
    /// The second mask construction for a peak ordering.
    Construct2 {
        #[arg(long)]
        perm: Perm,
        /// Index of the ordering among all orderings; the first neat one by default.
        #[arg(long)]
        ordering: Option<usize>,
        #[arg(long, value_enum, default_value_t = C2Variant::NeSw)]
        variant: C2Variant,
    },
    /// Geometricity of first-construction sets under every neat ordering.
    CompareConstructions {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = C1Variant::UpSteps)]
        variant: C1Variant,
    },
    /// Run verification suites; exits with status 1 when a check fails.
    Verify {
        #[arg(long, default_value = "all", value_parser = Suite::names())]
        suite: String,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Draw a heap or a mask.
    Render {
        #[command(subcommand)]
        command: RenderCommand,
    },
}

#[derive(Subcommand)]
enum HeckeCommand {
    /// C'_w in the standard basis.
    Cprime {
        #[arg(long)]
        perm: Perm,
    },
    /// C'_w in the B' basis, one term per edge labeling (cograssmannian w).
    Bprime {
        #[arg(long)]
        perm: Perm,
    },
}

#[derive(Subcommand)]
enum MasksCommand {
    /// Value, defects and signs of one mask.
    Profile {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        bits: String,
    },
    /// Masks with a prescribed defect set (1-based positions), optionally below a bound.
    Fwp {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, default_value = "")]
        defects: String,
        #[arg(long)]
        bound: Option<Perm>,
    },
    /// Defect polynomials of every mask on the word.
    All {
        #[command(flatten)]
        word: WordArgs,
    },
}

#[derive(Subcommand)]
enum BsCommand {
    /// Fixed point and flag image of a mask, given as bits or as signs.
    FixedPoint {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long, conflicts_with = "signs")]
        bits: Option<String>,
        #[arg(long)]
        signs: Option<String>,
    },
    /// Poincare polynomial of the fibre over x and the smallness test.
    Fiber {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        x: Perm,
    },
}

#[derive(Subcommand)]
enum ZelCommand {
    /// All peak orderings with their rectangles.
    Orderings {
        #[arg(long)]
        perm: Perm,
    },
    /// Cell data tau of one ordering.
    Tau {
        #[arg(long)]
        perm: Perm,
        #[arg(long)]
        ordering: Option<usize>,
    },
    /// KL polynomials from the cells of a neat ordering.
    Kl {
        #[arg(long)]
        perm: Perm,
        #[arg(long)]
        ordering: Option<usize>,
        #[arg(long)]
        x: Option<Perm>,
    },
    /// Second-construction masks, one per tau.
    Construct2 {
        #[arg(long)]
        perm: Perm,
        #[arg(long)]
        ordering: Option<usize>,
        #[arg(long, value_enum, default_value_t = C2Variant::NeSw)]
        variant: C2Variant,
    },
    /// Geometricity report of the second construction.
    Geometric {
        #[arg(long)]
        perm: Perm,
        #[arg(long)]
        ordering: Option<usize>,
        #[arg(long, value_enum, default_value_t = C2Variant::NeSw)]
        variant: C2Variant,
    },
}

#[derive(Subcommand)]
enum RenderCommand {
    Heap {
        #[command(flatten)]
        word: WordArgs,
    },
    Mask {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        bits: String,
    },
    /// Heap of the canonical word of a cograssmannian permutation.
    Cog {
        #[arg(long)]
        perm: Perm,
    },
}

/// What a subcommand produced: JSON, or a picture for `--format ascii|svg`.
enum Output {
    Json(Value),
    Text(String),
}

struct Outcome {
    output: Output,
    passed: bool,
}

impl From<Value> for Outcome {
    fn from(v: Value) -> Self {
        Outcome { output: Output::Json(v), passed: true }
    }
}

fn perm_json(p: &Perm) -> Value {
    json!(p.to_string())
}

fn defects_json(d: &BTreeSet<usize>) -> Value {
    json!(d.iter().map(|j| j + 1).collect::<Vec<_>>())
}

fn parse_positions(s: &str) -> Result<BTreeSet<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            let k: usize = x.parse().with_context(|| format!("bad position {x:?}"))?;
            if k == 0 {
                bail!("positions are 1-based");
            }
            Ok(k - 1)
        })
        .collect()
}

fn picture(format: Format, heap: &Heap, glyphs: Option<&[char]>) -> Option<String> {
    match format {
        Format::Json => None,
        Format::Ascii => Some(heap_ascii(heap, glyphs)),
        Format::Svg => Some(heap_svg(heap, glyphs)),
    }
}

fn mask_set_json(set: &MaskSet) -> Value {
    json!({
        "n": set.n,
        "word": word_to_string(&set.word),
        "size": set.len(),
        "masks": set.masks.iter().map(|m| bits_to_string(m)).collect::<Vec<_>>(),
    })
}

fn ordering_json(o: &PeakOrdering, index: usize) -> Value {
    let mut v = o.to_json();
    if let Value::Object(map) = &mut v {
        map.insert("index".into(), json!(index));
    }
    v
}

fn resolve_ordering(w: &Perm, index: Option<usize>) -> Result<(usize, PeakOrdering)> {
    let o = ordering_by_index(w, index)?;
    let all = enumerate_orderings(w)?;
    let i = all.iter().position(|p| p.peaks == o.peaks).expect("ordering is listed");
    Ok((i, o))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let format = cli.format;
    Ok(match &cli.command {
        Command::Perm { perm } => json!({
            "perm": perm_json(perm),
            "n": perm.n(),
            "length": perm.length(),
            "reduced_word": word_to_string(&perm.reduced_word()),
            "right_descents": perm.right_descents(),
            "right_ascents": perm.right_ascents(),
            "cograssmannian": perm.is_cograssmannian(),
            "grassmannian": perm.is_grassmannian(),
            "covexillary": perm.is_covexillary(),
        })
        .into(),
        Command::Kl { x, w, ls } => match x {
            Some(x) => {
                let poly = kl_polynomial(x, w)?;
                let mut out = json!({ "x": perm_json(x), "w": perm_json(w), "poly": poly.to_string() });
                if *ls {
                    let tree = ls_kl(x, w)?;
                    out["ls_poly"] = json!(tree.to_string());
                    out["agree"] = json!(tree == poly);
                    return Ok(Outcome { passed: tree == poly, output: Output::Json(out) });
                }
                out.into()
            }
            None => {
                if *ls && !w.is_cograssmannian() {
                    bail!(Error::NotCograssmannian(w.to_string()));
                }
                let col = kl_column(w);
                let mut agree = true;
                let rows: Vec<Value> = bruhat_interval(w)
                    .iter()
                    .map(|x| {
                        let p = col.get(x).cloned().unwrap_or_default();
                        let mut row = json!({ "x": perm_json(x), "poly": p.to_string() });
                        if *ls {
                            let t = ls_kl(x, w).map(|q| q == p).unwrap_or(false);
                            agree &= t;
                            row["agree"] = json!(t);
                        }
                        row
                    })
                    .collect();
                Outcome { output: Output::Json(json!({ "w": perm_json(w), "column": rows })), passed: agree }
            }
        },
        Command::Hecke { command } => match command {
            HeckeCommand::Cprime { perm } => {
                json!({ "w": perm_json(perm), "cprime": cprime_element(perm).to_string() }).into()
            }
            HeckeCommand::Bprime { perm } => {
                let e = cog_bprime_expansion(perm, true)?;
                let terms: Vec<Value> = e
                    .terms
                    .iter()
                    .map(|t| json!({ "labels": t.labeling.labels, "x": perm_json(&t.x), "exponent_half": t.exponent }))
                    .collect();
                let passed = e.identity_holds && e.ideals_checked != Some(false);
                Outcome {
                    output: Output::Json(json!({
                        "w": perm_json(perm),
                        "terms": terms,
                        "identity_holds": e.identity_holds,
                        "ideals_principal": e.ideals_checked,
                    })),
                    passed,
                }
            }
        },
        Command::Heap { word, n, perm } => {
            let (heap, extra) = match (word, perm) {
                (Some(word), None) => {
                    let (n, word) = WordArgs { word: word.clone(), n: *n }.parse()?;
                    (Heap::new(n, &word)?, Value::Null)
                }
                (None, Some(perm)) => {
                    let ch = CogHeap::new(perm)?;
                    let r = ch.ridgeline();
                    let extra = json!({ "z": ch.z, "ridgeline": r.parens, "valleys": r.valleys });
                    (ch.heap.clone(), extra)
                }
                _ => bail!("give exactly one of --word and --perm"),
            };
            if let Some(pic) = picture(format, &heap, None) {
                return Ok(Outcome { output: Output::Text(pic), passed: true });
            }
            let covers: Vec<(usize, usize)> = heap.covers().iter().map(|&(a, b)| (a + 1, b + 1)).collect();
            json!({
                "n": heap.n(),
                "word": word_to_string(heap.word()),
                "levels": heap.levels(),
                "covers": covers,
                "cograssmannian": extra,
            })
            .into()
        }
        Command::Masks { command } => match command {
            MasksCommand::Profile { word, bits } => {
                let (n, word) = word.parse()?;
                let m = Mask::new(n, &word, parse_bits(bits)?)?;
                if format != Format::Json {
                    let pic = if format == Format::Svg { mask_svg(n, &word, &m.bits)? } else { mask_ascii(n, &word, &m.bits)? };
                    return Ok(Outcome { output: Output::Text(pic), passed: true });
                }
                let prof = m.defect_profile();
                json!({
                    "bits": m.bitstring(),
                    "value": perm_json(&prof.value),
                    "defects": prof.defects,
                    "d": prof.d,
                    "signs": encode_pm(&m).to_string(),
                })
                .into()
            }
            MasksCommand::Fwp { word, defects, bound } => {
                let (n, word) = word.parse()?;
                let p = parse_positions(defects)?;
                let set = match bound {
                    Some(b) => MaskSet::new(n, &word, fwp_ideal_below(&word, &p, b))?,
                    None => fwp_ideal(n, &word, &p)?,
                };
                let values: Vec<Value> = set.prototype().polys.keys().map(perm_json).collect();
                let mut out = mask_set_json(&set);
                out["defects"] = defects_json(&p);
                out["values"] = json!(values);
                out.into()
            }
            MasksCommand::All { word } => {
                let (n, word) = word.parse()?;
                let set = MaskSet::all(n, &word)?;
                let proto = set.prototype();
                let polys: Vec<Value> =
                    proto.polys.iter().map(|(x, p)| json!({ "x": perm_json(x), "poly": p.to_string() })).collect();
                json!({
                    "word": word_to_string(&word),
                    "polys": polys,
                    "bounded": set.is_bounded(),
                    "admissible": set.is_admissible(),
                })
                .into()
            }
        },
        Command::Ls { perm, x } => {
            let ch = CogHeap::new(perm)?;
            let tree = LsTree::from_cog(&ch);
            let labelings: Vec<Value> = tree
                .enumerate_labelings()
                .iter()
                .map(|t| {
                    let (_, xt) = gamma_and_x(&ch, &tree, t);
                    json!({ "labels": t.labels, "size": t.size(), "x": perm_json(&xt) })
                })
                .collect();
            let mut out = json!({
                "w": perm_json(perm),
                "ridgeline": ch.ridgeline().parens,
                "tree": tree.to_json(None),
                "labelings": labelings,
            });
            if let Some(x) = x {
                out["x"] = perm_json(x);
                out["poly"] = json!(ls_kl(x, perm)?.to_string());
            }
            out.into()
        }
        Command::Construct1 { perm, variant, render } => {
            let c = VariantConstruction::new(perm, (*variant).into())?;
            let terms = c.terms()?;
            let ch = &c.base.ch;
            if format != Format::Json {
                let mut text = String::new();
                for term in &terms {
                    let pic = if format == Format::Svg {
                        mask_svg(ch.n(), &ch.word, &term.sigma)?
                    } else {
                        mask_ascii(ch.n(), &ch.word, &term.sigma)?
                    };
                    text.push_str(&format!("t = {:?}  x(t) = {}\n{pic}\n", term.labeling.labels, term.x));
                }
                return Ok(Outcome { output: Output::Text(text), passed: true });
            }
            let mut failures = Vec::new();
            let rows: Vec<Value> = terms
                .iter()
                .map(|term| {
                    let problems = c.check_term(term).unwrap_or_else(|e| vec![e.to_string()]);
                    failures.extend(problems.iter().cloned());
                    let mut row = json!({
                        "labels": term.labeling.labels,
                        "x": perm_json(&term.x),
                        "defects": defects_json(&term.defects),
                        "sigma": bits_to_string(&term.sigma),
                    });
                    if *render {
                        row["picture"] = json!(mask_ascii(ch.n(), &ch.word, &term.sigma).unwrap_or_default());
                    }
                    row
                })
                .collect();
            let set = c.construction1_set()?;
            let mut out = mask_set_json(&set);
            out["w"] = perm_json(perm);
            out["variant"] = json!(StepVariant::from(*variant).to_string());
            out["terms"] = json!(rows);
            out["failures"] = json!(failures);
            Outcome { output: Output::Json(out), passed: failures.is_empty() }
        }
        Command::Bs { command } => match command {
            BsCommand::FixedPoint { word, bits, signs } => {
                let (n, word) = word.parse()?;
                let m = match (bits, signs) {
                    (Some(b), None) => Mask::new(n, &word, parse_bits(b)?)?,
                    (None, Some(s)) => decode_pm(n, &word, &s.parse()?)?,
                    _ => bail!("give exactly one of --bits and --signs"),
                };
                json!({
                    "bits": m.bitstring(),
                    "signs": encode_pm(&m).to_string(),
                    "fixed_point": fixed_point(&m),
                    "flag": pi_image(&m),
                })
                .into()
            }
            BsCommand::Fiber { word, x } => {
                let (n, word) = word.parse()?;
                let f = fiber_profile(n, &word, x)?;
                json!({
                    "x": perm_json(&f.x),
                    "poly": f.poly.to_string(),
                    "max_defects": f.max_defects,
                    "small_at_x": f.small_at_x,
                    "small": f.small,
                })
                .into()
            }
        },
        Command::Zel { command } => match command {
            ZelCommand::Orderings { perm } => {
                let all = enumerate_orderings(perm)?;
                json!({
                    "w": perm_json(perm),
                    "orderings": all.iter().enumerate().map(|(i, o)| ordering_json(o, i)).collect::<Vec<_>>(),
                })
                .into()
            }
            ZelCommand::Tau { perm, ordering } => {
                let (i, o) = resolve_ordering(perm, *ordering)?;
                let taus: Vec<Value> = o
                    .shape
                    .enumerate_tau()?
                    .iter()
                    .map(|t| {
                        let value = o.shape.value(t).map(|v| v.to_string()).unwrap_or_default();
                        json!({
                            "partitions": t.partitions,
                            "x_tau": perm_json(&t.x_tau),
                            "u_tau": o.shape.u_of(&t.partitions).map(|u| u.to_string()).unwrap_or_default(),
                            "value": value,
                            "dimension": t.dimension(),
                        })
                    })
                    .collect();
                json!({ "w": perm_json(perm), "ordering": ordering_json(&o, i), "tau": taus }).into()
            }
            ZelCommand::Kl { perm, ordering, x } => {
                let (i, o) = resolve_ordering(perm, *ordering)?;
                let col = zelevinsky_kl_column(&o)?;
                let rows: Vec<Value> = match x {
                    Some(x) => vec![json!({ "x": perm_json(x), "poly": col.get(x).cloned().unwrap_or_default().to_string() })],
                    None => col.iter().map(|(x, p)| json!({ "x": perm_json(x), "poly": p.to_string() })).collect(),
                };
                json!({ "w": perm_json(perm), "ordering": i, "column": rows }).into()
            }
            ZelCommand::Construct2 { perm, ordering, variant } => construct2(perm, *ordering, *variant)?,
            ZelCommand::Geometric { perm, ordering, variant } => {
                let (i, o) = resolve_ordering(perm, *ordering)?;
                let set = construction2_set(&o, (*variant).into())?;
                let report = is_geometric(&set, &o)?;
                let passed = report.geometric;
                Outcome {
                    output: Output::Json(json!({ "w": perm_json(perm), "ordering": i, "report": report })),
                    passed,
                }
            }
        },
        Command::Construct2 { perm, ordering, variant } => construct2(perm, *ordering, *variant)?,
        Command::CompareConstructions { n_max, variant } => {
            let report = compare_constructions(*n_max, (*variant).into())?;
            serde_json::to_value(report)?.into()
        }
        Command::Verify { suite, n_max } => {
            if *n_max > MAX_VERIFY_RANK {
                bail!(Error::GuardExceeded(format!("--n-max {n_max} exceeds {MAX_VERIFY_RANK}")));
            }
            let report = run_suite(suite.parse()?, *n_max)?;
            let passed = report.passed();
            Outcome { output: Output::Json(serde_json::to_value(report)?), passed }
        }
        Command::Render { command } => {
            let text = match command {
                RenderCommand::Heap { word } => {
                    let (n, word) = word.parse()?;
                    let heap = Heap::new(n, &word)?;
                    if format == Format::Svg { heap_svg(&heap, None) } else { heap_ascii(&heap, None) }
                }
                RenderCommand::Mask { word, bits } => {
                    let (n, word) = word.parse()?;
                    let bits = parse_bits(bits)?;
                    if format == Format::Svg { mask_svg(n, &word, &bits)? } else { mask_ascii(n, &word, &bits)? }
                }
                RenderCommand::Cog { perm } => {
                    let ch = CogHeap::new(perm)?;
                    if format == Format::Svg { heap_svg(&ch.heap, None) } else { heap_ascii(&ch.heap, None) }
                }
            };
            if format == Format::Json {
                json!({ "picture": text }).into()
            } else {
                Outcome { output: Output::Text(text), passed: true }
            }
        }
    })
}

fn construct2(perm: &Perm, ordering: Option<usize>, variant: C2Variant) -> Result<Outcome> {
    let (i, o) = resolve_ordering(perm, ordering)?;
    let variant: Variant = variant.into();
    let rows: Vec<Value> = o
        .shape
        .enumerate_tau()?
        .iter()
        .map(|t| {
            let m = sigma_of_tau(&o, t, variant)?;
            Ok(json!({
                "partitions": t.partitions,
                "x_tau": perm_json(&t.x_tau),
                "dimension": t.dimension(),
                "sigma": m.bitstring(),
                "value": perm_json(&m.value()),
            }))
        })
        .collect::<klmasks::Result<_>>()?;
    let set = construction2_set(&o, variant)?;
    let mut out = mask_set_json(&set);
    out["w"] = perm_json(perm);
    out["ordering"] = ordering_json(&o, i);
    out["terms"] = json!(rows);
    Ok(out.into())
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let from_env = std::env::var("KLMASKS_THREADS").ok();
    let threads = match (flag, from_env) {
        (Some(t), _) => Some(t),
        (None, Some(s)) => Some(s.trim().parse().with_context(|| format!("KLMASKS_THREADS={s:?} is not a number"))?),
        (None, None) => None,
    };
    if let Some(t) = threads {
        if t == 0 {
            bail!("thread count must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    Ok(())
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Internal(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let written = match &outcome.output {
                Output::Json(v) => serde_json::to_writer_pretty(&mut stdout, v)
                    .map_err(std::io::Error::from)
                    .and_then(|_| writeln!(stdout)),
                Output::Text(t) => write!(stdout, "{t}"),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
