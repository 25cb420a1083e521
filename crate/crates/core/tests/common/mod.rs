//! Seeded generators shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use gl_core::kripke::{Frame, Model};
use gl_core::syntax::{subformulas, Formula};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x474c_2024;

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// A random formula of depth at most `depth` over `atoms`.
pub fn formula(rng: &mut impl Rng, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Formula::False,
            1 => Formula::True,
            _ => Formula::atom(*atoms.choose(rng).expect("nonempty atoms")),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => Formula::not(formula(rng, atoms, d)),
        1 | 2 => Formula::boxed(formula(rng, atoms, d)),
        3 => Formula::and(formula(rng, atoms, d), formula(rng, atoms, d)),
        4 => Formula::or(formula(rng, atoms, d), formula(rng, atoms, d)),
        5 => Formula::imp(formula(rng, atoms, d), formula(rng, atoms, d)),
        _ => Formula::iff(formula(rng, atoms, d), formula(rng, atoms, d)),
    }
}

pub fn box_count(f: &Formula) -> usize {
    subformulas(f).iter().filter(|g| g.is_box()).count()
}

/// Like [`formula`], resampling until at most `max_boxes` distinct boxed
/// subformulas occur.
pub fn formula_with_boxes(
    rng: &mut impl Rng,
    atoms: &[&str],
    depth: usize,
    max_boxes: usize,
) -> Formula {
    loop {
        let f = formula(rng, atoms, depth);
        if box_count(&f) <= max_boxes {
            return f;
        }
    }
}

/// A random model on `1..=max_worlds` worlds with an arbitrary relation.
pub fn model(rng: &mut impl Rng, max_worlds: usize, atoms: &[&str]) -> Model {
    let n = rng.gen_range(1..=max_worlds);
    let density = rng.gen_range(0.1..0.6);
    let rel: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    let valuation = valuation(rng, n, atoms);
    Model::new(Frame::new(0..n, rel), valuation).expect("well-typed by construction")
}

fn valuation(rng: &mut impl Rng, n: usize, atoms: &[&str]) -> BTreeMap<String, BTreeSet<usize>> {
    atoms
        .iter()
        .map(|a| {
            let set = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            (a.to_string(), set)
        })
        .collect()
}

/// Copies of `m` with one world duplicated: the copy has the original's
/// successors and predecessors, and its valuation. Bisimilar to `m`.
pub fn with_duplicate_world(rng: &mut impl Rng, m: &Model) -> Model {
    let n = m.frame.worlds.len();
    let orig = rng.gen_range(0..n);
    let copy = n;
    let image = |w: usize| if w == copy { orig } else { w };
    let mut rel = BTreeSet::new();
    for a in 0..=n {
        for b in 0..=n {
            if m.frame.related(image(a), image(b)) {
                rel.insert((a, b));
            }
        }
    }
    let valuation = m
        .valuation
        .iter()
        .map(|(k, ws)| {
            let mut ws = ws.clone();
            if ws.contains(&orig) {
                ws.insert(copy);
            }
            (k.clone(), ws)
        })
        .collect();
    Model::new(Frame::new(0..=n, rel), valuation).expect("well-typed by construction")
}

/// A random injective relabeling `0..n -> ids`, shuffled and offset.
pub fn injection(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..n).map(|i| 100 + 3 * i).collect();
    ids.shuffle(rng);
    ids
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Argument lists at which every catalogued lemma is stored as a golden proof.
pub fn golden_args(name: &str, min_args: usize) -> Vec<Formula> {
    let [p, q, r] = ["p", "q", "r"].map(Formula::atom);
    match name {
        "conjlist_map_box" => vec![p, q, r],
        "conjlist_mem" => vec![q.clone(), p, q, r],
        _ => [p, q, r].into_iter().take(min_args).collect(),
    }
}

/// The four ways a proof file is corrupted by the mutation suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    BadIndex,
    WrongAxiom,
    MismatchedMp,
    WrongNec,
}

pub const MUTATIONS: [Mutation; 4] = [
    Mutation::BadIndex,
    Mutation::WrongAxiom,
    Mutation::MismatchedMp,
    Mutation::WrongNec,
];

/// Corrupts one step of a valid proof file; returns the file and the
/// corrupted step, or `None` when the proof has no step of the right shape.
pub fn mutate(
    rng: &mut impl Rng,
    file: &gl_core::calculus::ProofFile,
    kind: Mutation,
) -> Option<(gl_core::calculus::ProofFile, usize)> {
    use gl_core::calculus::{check_proof_table, is_axiom};
    let proof = file.to_proof().expect("valid input file");
    let derived = check_proof_table(&proof)
        .expect("valid input proof")
        .formulas;
    let steps = &file.steps;
    let pick = |rng: &mut dyn rand::RngCore, pred: &dyn Fn(usize) -> bool| {
        let candidates: Vec<usize> = (0..steps.len()).filter(|&i| pred(i)).collect();
        candidates.choose(rng).copied()
    };
    let mut out = file.clone();
    let i = match kind {
        Mutation::BadIndex => {
            let i = pick(rng, &|i| steps[i].axiom.is_none())?;
            let bad = i + rng.gen_range(0..3);
            let s = &mut out.steps[i];
            if let Some(mp) = s.mp.as_mut() {
                mp[rng.gen_range(0..2)] = bad;
            } else {
                s.nec = Some(bad);
            }
            i
        }
        Mutation::WrongAxiom => {
            let i = pick(rng, &|i| steps[i].axiom.is_some())?;
            let f = &derived[i];
            let candidates = [
                Formula::not(f.clone()),
                Formula::boxed(f.clone()),
                Formula::and(f.clone(), Formula::True),
            ];
            let bad = candidates
                .iter()
                .filter(|g| is_axiom(g).is_none())
                .collect::<Vec<_>>()
                .choose(rng)
                .copied()
                .expect("a negation is never an axiom")
                .clone();
            out.steps[i].axiom = Some(bad.to_string());
            i
        }
        Mutation::MismatchedMp => {
            let i = pick(rng, &|i| steps[i].mp.is_some())?;
            let [major, _] = steps[i].mp.unwrap();
            let Formula::Imp(antecedent, _) = &derived[major] else {
                unreachable!("valid major premise")
            };
            let wrong_minor: Vec<usize> = (0..i).filter(|&j| derived[j] != **antecedent).collect();
            match wrong_minor.choose(rng) {
                Some(&j) if rng.gen_bool(0.5) => out.steps[i].mp = Some([major, j]),
                _ => out.steps[i].formula = Some(Formula::not(derived[i].clone()).to_string()),
            }
            i
        }
        Mutation::WrongNec => {
            let i = pick(rng, &|i| steps[i].nec.is_some())?;
            let premise = steps[i].nec.unwrap();
            let others: Vec<usize> = (0..i).filter(|&j| derived[j] != derived[premise]).collect();
            match others.choose(rng) {
                Some(&j) if out.steps[i].formula.is_some() && rng.gen_bool(0.5) => {
                    out.steps[i].nec = Some(j)
                }
                _ => {
                    out.steps[i].formula =
                        Some(Formula::boxed(Formula::not(derived[premise].clone())).to_string())
                }
            }
            i
        }
    };
    Some((out, i))
}

/// Whether the checker's diagnostic is the one a mutation of `kind` must cause.
pub fn expected_error(kind: Mutation, e: &gl_core::calculus::ProofErrorKind) -> bool {
    use gl_core::calculus::ProofErrorKind as K;
    match kind {
        Mutation::BadIndex => matches!(e, K::BadIndex { .. }),
        Mutation::WrongAxiom => matches!(e, K::NotAnAxiom(_)),
        Mutation::MismatchedMp => {
            matches!(e, K::AntecedentMismatch { .. } | K::MpClaimMismatch { .. })
        }
        Mutation::WrongNec => matches!(e, K::NecClaimMismatch { .. }),
    }
}
