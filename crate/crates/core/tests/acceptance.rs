//! End-to-end acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use gl_core::bisim::{covers, is_bisimulation, largest_bisimulation};
use gl_core::calculus::{check_proof, lemma, lemma_statement, ProofFile, Schema, CATALOGUE};
use gl_core::completeness::{
    consistent, decide, extend_maximal_consistent, hintikka_worlds, standard_rel, ClosureContext,
    CompletenessError, Countermodel, Verdict,
};
use gl_core::kripke::{enumerate_frames, frame_report, is_itf, itf_valid_small, lob_instance};
use gl_core::syntax::{parse, subformulas, Formula};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn decide_ok(f: &Formula) -> Result<Verdict, String> {
    decide(f).map_err(|e| format!("`{f}`: {e}"))
}

fn axioms() -> Outcome {
    let mut rng = common::rng(1);
    let mut n = 0;
    for schema in Schema::ALL {
        for _ in 0..20 {
            let args: Vec<Formula> = (0..schema.arity())
                .map(|_| common::formula(&mut rng, &["p", "q"], 3))
                .collect();
            let f = schema.instantiate(&args).expect("arity matches");
            ensure(decide_ok(&f)?.is_theorem(), || {
                format!("{}: `{f}` not a theorem", schema.name())
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} instances"))
}

fn lob() -> Outcome {
    let f = parse("Box(Box p --> p) --> Box p").unwrap();
    ensure(f == lob_instance(), || "parsed Löb differs".into())?;
    ensure(decide_ok(&f)?.is_theorem(), || "Löb not a theorem".into())?;
    Ok("theorem".into())
}

fn consistency() -> Outcome {
    let v = decide_ok(&Formula::False)?;
    let cm = v.countermodel().ok_or("False decided a theorem")?;
    ensure(gl_core::verify_certificate(&v), || {
        "certificate rejected".into()
    })?;
    Ok(format!(
        "countermodel with {} worlds",
        cm.model.worlds.len()
    ))
}

fn named_lemmas() -> Outcome {
    let mut rng = common::rng(4);
    let mut checked = 0;
    for info in CATALOGUE {
        let mut arg_lists = vec![common::golden_args(info.name, info.min_args())];
        for _ in 0..3 {
            let mut args: Vec<Formula> = (0..info.min_args().max(usize::from(info.is_variadic())))
                .map(|_| common::formula(&mut rng, &["p", "q"], 2))
                .collect();
            if info.name == "conjlist_mem" {
                args.insert(0, args.choose(&mut rng).unwrap().clone());
            }
            arg_lists.push(args);
        }
        for args in arg_lists {
            let proof = lemma(info.name, &args).map_err(|e| format!("{}: {e}", info.name))?;
            let conclusion = check_proof(&proof).map_err(|e| format!("{}: {e}", info.name))?;
            let expected = lemma_statement(info.name, &args).map_err(|e| e.to_string())?;
            ensure(conclusion == expected, || {
                format!("{}: proved `{conclusion}`", info.name)
            })?;
            ensure(decide_ok(&conclusion)?.is_theorem(), || {
                format!("{}: `{conclusion}` not a theorem", info.name)
            })?;
            checked += 1;
        }
    }
    for required in ["box_iff", "modusponens_th"] {
        ensure(CATALOGUE.iter().any(|l| l.name == required), || {
            format!("{required} missing")
        })?;
    }
    Ok(format!("{} lemmas, {checked} instances", CATALOGUE.len()))
}

/// Verdicts on the 500 sampled formulas, shared by later criteria.
struct Sample {
    countermodels: Vec<Countermodel>,
    theorems: Vec<Formula>,
}

fn sample() -> Result<Sample, String> {
    let mut rng = common::rng(5);
    let mut countermodels = Vec::new();
    let mut theorems = Vec::new();
    for _ in 0..500 {
        let f = common::formula_with_boxes(&mut rng, &["p", "q"], 4, 3);
        match decide_ok(&f)? {
            Verdict::Theorem => theorems.push(f),
            Verdict::Countermodel(cm) => countermodels.push(cm),
        }
    }
    Ok(Sample {
        countermodels,
        theorems,
    })
}

fn soundness(s: &Sample) -> Outcome {
    for f in &s.theorems {
        let valid = itf_valid_small(f, 3).map_err(|e| e.to_string())?;
        ensure(valid, || {
            format!("theorem `{f}` fails on a small ITF frame")
        })?;
    }
    for cm in &s.countermodels {
        let v = Verdict::Countermodel(cm.clone());
        ensure(gl_core::verify_certificate(&v), || {
            format!("certificate for `{}` rejected", cm.target())
        })?;
    }
    Ok(format!(
        "{} theorems, {} countermodels, 0 violations",
        s.theorems.len(),
        s.countermodels.len()
    ))
}

fn correspondence() -> Outcome {
    let expected: usize = (1..=3).map(|k| 1usize << (k * k)).sum();
    let mut frames = 0;
    let mut itf = 0;
    for fr in enumerate_frames(3).map_err(|e| e.to_string())? {
        let r = frame_report(&fr).map_err(|e| e.to_string())?;
        ensure(r.validates_lob == (r.transitive && r.acyclic), || {
            format!("correspondence fails on {fr:?}")
        })?;
        if is_itf(&fr) {
            ensure(r.validates_lob, || format!("ITF frame {fr:?} refutes Löb"))?;
            itf += 1;
        }
        frames += 1;
    }
    ensure(frames == expected, || {
        format!("{frames} frames, expected {expected}")
    })?;
    Ok(format!("{frames} frames, {itf} ITF"))
}

fn standard_relation(s: &Sample) -> Outcome {
    let mut rng = common::rng(7);
    let mut targets = 0;
    let mut worlds_seen = 0;
    let mut emitted = s.countermodels.len();
    while targets < 150 {
        let f = common::formula(&mut rng, &["p", "q"], 3);
        if subformulas(&f).len() > 6 {
            continue;
        }
        let ctx = ClosureContext::new(&f).map_err(|e| e.to_string())?;
        let ws = hintikka_worlds(&ctx);
        worlds_seen += ws.len();
        for w in &ws {
            ensure(!standard_rel(&ctx, w, w), || {
                format!("`{f}`: {w} sees itself")
            })?;
            for x in &ws {
                if !standard_rel(&ctx, w, x) {
                    continue;
                }
                for y in &ws {
                    ensure(
                        !standard_rel(&ctx, x, y) || standard_rel(&ctx, w, y),
                        || format!("`{f}`: not transitive at {w}, {x}, {y}"),
                    )?;
                }
            }
        }
        if let Some(cm) = decide_ok(&f)?.countermodel() {
            ensure(cm.model.frame_condition_holds(), || {
                format!("`{f}`: frame condition")
            })?;
            emitted += 1;
        }
        targets += 1;
    }
    for cm in &s.countermodels {
        ensure(cm.model.frame_condition_holds(), || {
            format!("`{}`: frame condition", cm.target())
        })?;
    }
    Ok(format!(
        "{targets} targets, {worlds_seen} worlds, {emitted} emitted models"
    ))
}

fn truth_lemma(s: &Sample) -> Outcome {
    let mut checks = 0;
    for cm in &s.countermodels {
        let m = cm.model.to_model();
        for (i, w) in cm.model.worlds.iter().enumerate() {
            for q in cm.model.context.closure() {
                let holds = m.holds(q, i).map_err(|e| e.to_string())?;
                ensure(w.contains(q) == holds, || {
                    format!("`{}`: world {i}, `{q}`", cm.target())
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} membership checks"))
}

fn extension() -> Outcome {
    let mut rng = common::rng(9);
    let mut extended = 0;
    let mut rejected = 0;
    while extended < 200 {
        let f = common::formula_with_boxes(&mut rng, &["p", "q"], 3, 3);
        let ctx = ClosureContext::new(&f).map_err(|e| e.to_string())?;
        let mut pool = ctx.closure().to_vec();
        pool.shuffle(&mut rng);
        let k = rng.gen_range(1..=pool.len().min(3));
        let seed: Vec<Formula> = pool[..k]
            .iter()
            .map(|q| {
                if rng.gen_bool(0.5) {
                    q.clone()
                } else {
                    Formula::not(q.clone())
                }
            })
            .collect();
        if (0..k).any(|i| seed[..i].contains(&seed[i])) {
            continue;
        }
        let is_consistent = consistent(&seed).map_err(|e| e.to_string())?;
        match extend_maximal_consistent(&ctx, &seed) {
            Ok(w) => {
                ensure(is_consistent, || {
                    format!("inconsistent seed {seed:?} extended")
                })?;
                ensure(seed.iter().all(|x| w.contains(x)), || {
                    format!("world {w} drops part of {seed:?}")
                })?;
                extended += 1;
            }
            Err(CompletenessError::Inconsistent(_)) => {
                ensure(!is_consistent, || {
                    format!("consistent seed {seed:?} rejected")
                })?;
                let negated = Formula::not(gl_core::calculus::conjlist(&seed));
                let valid = itf_valid_small(&negated, 3).map_err(|e| e.to_string())?;
                ensure(valid, || format!("seed {seed:?} is satisfiable"))?;
                rejected += 1;
            }
            Err(e) => return Err(format!("seed {seed:?}: {e}")),
        }
    }
    ensure(rejected > 0, || "no inconsistent seed was sampled".into())?;
    Ok(format!(
        "{extended} extended, {rejected} inconsistent rejected"
    ))
}

fn bisimulation(s: &Sample) -> Outcome {
    let mut rng = common::rng(10);
    let formulas: Vec<Formula> = (0..50)
        .map(|_| common::formula(&mut rng, &["p", "q"], 4))
        .collect();
    let mut bisimilar_pairs = 0;
    for i in 0..100 {
        let m1 = common::model(&mut rng, if i % 2 == 0 { 5 } else { 6 }, &["p", "q"]);
        let m2 = if i % 2 == 0 {
            common::with_duplicate_world(&mut rng, &m1)
        } else {
            common::model(&mut rng, 6, &["p", "q"])
        };
        let z = largest_bisimulation(&m1, &m2);
        ensure(is_bisimulation(&m1, &m2, &z).unwrap_or(false), || {
            format!("pair {i}: result is not a bisimulation")
        })?;
        if i % 2 == 0 {
            ensure(covers(&m1, &m2) && covers(&m2, &m1), || {
                format!("pair {i}: duplicate not recognised")
            })?;
        }
        for &(a, b) in &z.pairs {
            for f in &formulas {
                ensure(m1.holds(f, a).unwrap() == m2.holds(f, b).unwrap(), || {
                    format!("pair {i}: `{f}` separates {a} and {b}")
                })?;
            }
        }
        bisimilar_pairs += z.len();
    }
    for cm in s.countermodels.iter().take(20) {
        let cert = cm.to_certificate();
        let ids = common::injection(&mut rng, cert.model.frame.worlds.len());
        let moved = cert.model.relabel(|w| ids[w]);
        let falsified = !moved.holds(cm.target(), ids[cert.witness]).unwrap();
        ensure(falsified, || {
            format!("relabeling rescues `{}`", cm.target())
        })?;
    }
    Ok(format!(
        "100 pairs, {bisimilar_pairs} bisimilar world pairs, 20 relabelings"
    ))
}

fn kernel() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let goldens: Vec<(String, ProofFile)> = CATALOGUE
        .iter()
        .map(|l| {
            let path = common::golden_dir().join(format!("{}.json", l.name));
            let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let file = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", l.name))?;
            Ok((l.name.to_string(), file))
        })
        .collect::<Result<_, String>>()?;
    for (name, file) in &goldens {
        let proof = file.to_proof().map_err(|e| format!("{name}: {e}"))?;
        let conclusion = check_proof(&proof).map_err(|e| format!("{name}: {e}"))?;
        let info = CATALOGUE.iter().find(|l| l.name == name).unwrap();
        let expected = lemma_statement(name, &common::golden_args(name, info.min_args()))
            .map_err(|e| e.to_string())?;
        ensure(conclusion == expected, || {
            format!("{name}: replay proves `{conclusion}`")
        })?;
    }

    let mut rng = common::rng(11);
    let mut rejected = 0;
    let mut attempt = 0;
    while rejected < 30 {
        let kind = common::MUTATIONS[rejected % common::MUTATIONS.len()];
        let (name, file) = goldens.choose(&mut rng).unwrap();
        attempt += 1;
        ensure(attempt < 1000, || "could not build 30 mutants".into())?;
        let Some((bad, step)) = common::mutate(&mut rng, file, kind) else {
            continue;
        };
        let path = dir.path().join(format!("mutant{rejected}.json"));
        fs::write(&path, serde_json::to_string_pretty(&bad).unwrap()).map_err(|e| e.to_string())?;
        let reread: ProofFile = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        let proof = reread.to_proof().map_err(|e| format!("{name}: {e}"))?;
        match check_proof(&proof) {
            Ok(c) => return Err(format!("{name} {kind:?} mutant accepted as `{c}`")),
            Err(e) => {
                ensure(
                    e.step == step && common::expected_error(kind, &e.kind),
                    || format!("{name} {kind:?} at step {step}: got `{e}`"),
                )?;
            }
        }
        rejected += 1;
    }
    Ok(format!(
        "{} golden proofs replay, {rejected} mutants rejected",
        goldens.len()
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failures = 0;
    let mut report = |id: u32, title: &str, outcome: Outcome| match &outcome {
        Ok(detail) => println!("PASS {id:>2} {title}: {detail}"),
        Err(reason) => {
            failures += 1;
            println!("FAIL {id:>2} {title}: {reason}");
        }
    };
    report(1, "axiom acceptance", axioms());
    report(2, "Löb decidability", lob());
    report(3, "consistency", consistency());
    report(4, "named lemmas", named_lemmas());
    match sample() {
        Ok(s) => {
            report(5, "soundness harness", soundness(&s));
            report(6, "frame correspondence", correspondence());
            report(7, "standard-relation laws", standard_relation(&s));
            report(8, "truth lemma", truth_lemma(&s));
            report(9, "maximal consistent extension", extension());
            report(10, "bisimulation invariance", bisimulation(&s));
        }
        Err(e) => {
            for (id, title) in [
                (5, "soundness harness"),
                (7, "standard-relation laws"),
                (8, "truth lemma"),
                (10, "bisimulation invariance"),
            ] {
                report(id, title, Err(e.clone()));
            }
            report(6, "frame correspondence", correspondence());
            report(9, "maximal consistent extension", extension());
        }
    }
    report(11, "kernel integrity", kernel());
    println!(
        "{} of 11 criteria passed in {:.1?}",
        11 - failures,
        start.elapsed()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
