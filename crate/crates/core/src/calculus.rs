//! The GL Hilbert calculus: axiom schemas, linear proof objects, the trusted
//! checker, and proof-building routines for a catalogue of derived lemmas.
//!
//! Only `check_proof` and `is_axiom` are trusted. Everything in
//! [`ProofBuilder`] and [`lemma`] produces plain [`Proof`] values that must
//! pass the checker like any other input.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{parse, Formula, ParseError};

/// The twelve axiom schemas, in the order of the inductive definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Schema {
    /// `p --> (q --> p)`
    AddImp,
    /// `(p --> q --> r) --> (p --> q) --> (p --> r)`
    DistribImp,
    /// `((p --> False) --> False) --> p`
    DoubleNeg,
    /// `(p <-> q) --> p --> q`
    IffImp1,
    /// `(p <-> q) --> q --> p`
    IffImp2,
    /// `(p --> q) --> (q --> p) --> (p <-> q)`
    ImpIff,
    /// `True <-> False --> False`
    True,
    /// `Not p <-> p --> False`
    Not,
    /// `p && q <-> (p --> q --> False) --> False`
    And,
    /// `p || q <-> Not (Not p && Not q)`
    Or,
    /// `Box (p --> q) --> Box p --> Box q`
    BoxImp,
    /// `Box (Box p --> p) --> Box p`
    Lob,
}

impl Schema {
    pub const ALL: [Schema; 12] = [
        Schema::AddImp,
        Schema::DistribImp,
        Schema::DoubleNeg,
        Schema::IffImp1,
        Schema::IffImp2,
        Schema::ImpIff,
        Schema::True,
        Schema::Not,
        Schema::And,
        Schema::Or,
        Schema::BoxImp,
        Schema::Lob,
    ];

    /// 1-based position in the schema list.
    pub fn number(self) -> usize {
        Schema::ALL.iter().position(|&s| s == self).unwrap() + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Schema::AddImp => "axiom_addimp",
            Schema::DistribImp => "axiom_distribimp",
            Schema::DoubleNeg => "axiom_doubleneg",
            Schema::IffImp1 => "axiom_iffimp1",
            Schema::IffImp2 => "axiom_iffimp2",
            Schema::ImpIff => "axiom_impiff",
            Schema::True => "axiom_true",
            Schema::Not => "axiom_not",
            Schema::And => "axiom_and",
            Schema::Or => "axiom_or",
            Schema::BoxImp => "axiom_boximp",
            Schema::Lob => "axiom_boxgl",
        }
    }

    /// Number of metavariables (`p`, `q`, `r`, in that order).
    pub fn arity(self) -> usize {
        match self {
            Schema::True => 0,
            Schema::DoubleNeg | Schema::Not | Schema::Lob => 1,
            Schema::DistribImp => 3,
            _ => 2,
        }
    }

    /// The schema as a pattern whose atoms `p`, `q`, `r` are metavariables.
    pub fn pattern(self) -> Formula {
        let [p, q, r] = ["p", "q", "r"].map(Formula::atom);
        self.instantiate_with(&p, &q, &r)
    }

    /// The schema instance at the given formulas; extra arguments are ignored.
    pub fn instantiate(self, args: &[Formula]) -> Option<Formula> {
        if args.len() < self.arity() {
            return None;
        }
        let fill = |i: usize| args.get(i).cloned().unwrap_or(Formula::True);
        Some(self.instantiate_with(&fill(0), &fill(1), &fill(2)))
    }

    fn instantiate_with(self, p: &Formula, q: &Formula, r: &Formula) -> Formula {
        use Formula as F;
        let (p, q, r) = (p.clone(), q.clone(), r.clone());
        match self {
            Schema::AddImp => F::imp(p.clone(), F::imp(q, p)),
            Schema::DistribImp => F::imp(
                F::imp(p.clone(), F::imp(q.clone(), r.clone())),
                F::imp(F::imp(p.clone(), q), F::imp(p, r)),
            ),
            Schema::DoubleNeg => F::imp(F::imp(F::imp(p.clone(), F::False), F::False), p),
            Schema::IffImp1 => F::imp(F::iff(p.clone(), q.clone()), F::imp(p, q)),
            Schema::IffImp2 => F::imp(F::iff(p.clone(), q.clone()), F::imp(q, p)),
            Schema::ImpIff => F::imp(
                F::imp(p.clone(), q.clone()),
                F::imp(F::imp(q.clone(), p.clone()), F::iff(p, q)),
            ),
            Schema::True => F::iff(F::True, F::imp(F::False, F::False)),
            Schema::Not => F::iff(F::not(p.clone()), F::imp(p, F::False)),
            Schema::And => F::iff(
                F::and(p.clone(), q.clone()),
                F::imp(F::imp(p, F::imp(q, F::False)), F::False),
            ),
            Schema::Or => F::iff(
                F::or(p.clone(), q.clone()),
                F::not(F::and(F::not(p), F::not(q))),
            ),
            Schema::BoxImp => F::imp(
                F::boxed(F::imp(p.clone(), q.clone())),
                F::imp(F::boxed(p), F::boxed(q)),
            ),
            Schema::Lob => F::imp(
                F::boxed(F::imp(F::boxed(p.clone()), p.clone())),
                F::boxed(p),
            ),
        }
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (schema {})", self.name(), self.number())
    }
}

/// Which schema an axiom instantiates, and the metavariable bindings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomWitness {
    pub schema: Schema,
    pub bindings: BTreeMap<String, Formula>,
}

fn match_pattern(pattern: &Formula, f: &Formula, bindings: &mut BTreeMap<String, Formula>) -> bool {
    match (pattern, f) {
        (Formula::Atom(var), _) => match bindings.get(var) {
            Some(bound) => bound == f,
            None => {
                bindings.insert(var.clone(), f.clone());
                true
            }
        },
        (Formula::False, Formula::False) | (Formula::True, Formula::True) => true,
        (Formula::Not(a), Formula::Not(b)) | (Formula::Box(a), Formula::Box(b)) => {
            match_pattern(a, b, bindings)
        }
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Imp(a1, a2), Formula::Imp(b1, b2))
        | (Formula::Iff(a1, a2), Formula::Iff(b1, b2)) => {
            match_pattern(a1, b1, bindings) && match_pattern(a2, b2, bindings)
        }
        _ => false,
    }
}

/// First schema (in list order) that `f` instantiates.
pub fn is_axiom(f: &Formula) -> Option<AxiomWitness> {
    Schema::ALL.iter().find_map(|&schema| {
        let mut bindings = BTreeMap::new();
        match_pattern(&schema.pattern(), f, &mut bindings)
            .then_some(AxiomWitness { schema, bindings })
    })
}

// ---------------------------------------------------------------------------
// Proof objects and the checker

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Axiom(Formula),
    /// Modus ponens from `major: A --> B` and `minor: A`.
    Mp {
        major: usize,
        minor: usize,
        claim: Option<Formula>,
    },
    /// Necessitation: `Box A` from `A`.
    Nec {
        premise: usize,
        claim: Option<Formula>,
    },
}

impl Step {
    fn claim(&self) -> Option<&Formula> {
        match self {
            Step::Axiom(_) => None,
            Step::Mp { claim, .. } | Step::Nec { claim, .. } => claim.as_ref(),
        }
    }
}

/// A linear Hilbert derivation; the conclusion is the last step's formula.
/// Mp and Nec steps may carry the formula they claim to derive, which the
/// checker compares against the derived one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Proof {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofErrorKind {
    #[error("proof has no steps")]
    Empty,
    #[error("reference to step {index}, but only steps before {step} may be cited")]
    BadIndex { step: usize, index: usize },
    #[error("`{0}` is not an instance of any axiom schema")]
    NotAnAxiom(Formula),
    #[error("major premise `{0}` is not an implication")]
    MajorNotImplication(Formula),
    #[error("minor premise `{minor}` does not match antecedent `{antecedent}`")]
    AntecedentMismatch { antecedent: Formula, minor: Formula },
    #[error("modus ponens derives `{derived}`, but the step claims `{claimed}`")]
    MpClaimMismatch { derived: Formula, claimed: Formula },
    #[error("necessitation derives `{derived}`, but the step claims `{claimed}`")]
    NecClaimMismatch { derived: Formula, claimed: Formula },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {kind}")]
pub struct ProofError {
    pub step: usize,
    pub kind: ProofErrorKind,
}

/// Per-step derived formulas and axiom witnesses of a checked proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFormulaTable {
    pub formulas: Vec<Formula>,
    pub witnesses: Vec<Option<AxiomWitness>>,
}

impl StepFormulaTable {
    pub fn conclusion(&self) -> &Formula {
        self.formulas.last().expect("checked proofs are nonempty")
    }
}

/// Checks every step and returns the table of derived formulas.
pub fn check_proof_table(pr: &Proof) -> Result<StepFormulaTable, ProofError> {
    if pr.steps.is_empty() {
        return Err(ProofError {
            step: 0,
            kind: ProofErrorKind::Empty,
        });
    }
    let mut formulas: Vec<Formula> = Vec::with_capacity(pr.steps.len());
    let mut witnesses = Vec::with_capacity(pr.steps.len());
    for (i, step) in pr.steps.iter().enumerate() {
        let fail = |kind| ProofError { step: i, kind };
        let cite = |index: usize| {
            formulas
                .get(index)
                .filter(|_| index < i)
                .ok_or_else(|| fail(ProofErrorKind::BadIndex { step: i, index }))
        };
        let (derived, witness) = match step {
            Step::Axiom(f) => match is_axiom(f) {
                Some(w) => (f.clone(), Some(w)),
                None => return Err(fail(ProofErrorKind::NotAnAxiom(f.clone()))),
            },
            Step::Mp { major, minor, .. } => {
                let major_f = cite(*major)?;
                let minor_f = cite(*minor)?;
                match major_f {
                    Formula::Imp(a, b) if **a == *minor_f => ((**b).clone(), None),
                    Formula::Imp(a, _) => {
                        return Err(fail(ProofErrorKind::AntecedentMismatch {
                            antecedent: (**a).clone(),
                            minor: minor_f.clone(),
                        }))
                    }
                    other => return Err(fail(ProofErrorKind::MajorNotImplication(other.clone()))),
                }
            }
            Step::Nec { premise, .. } => (Formula::boxed(cite(*premise)?.clone()), None),
        };
        if let Some(claimed) = step.claim() {
            if *claimed != derived {
                let (derived, claimed) = (derived, claimed.clone());
                return Err(fail(match step {
                    Step::Nec { .. } => ProofErrorKind::NecClaimMismatch { derived, claimed },
                    _ => ProofErrorKind::MpClaimMismatch { derived, claimed },
                }));
            }
        }
        formulas.push(derived);
        witnesses.push(witness);
    }
    Ok(StepFormulaTable {
        formulas,
        witnesses,
    })
}

/// Checks `pr` and returns its conclusion.
pub fn check_proof(pr: &Proof) -> Result<Formula, ProofError> {
    check_proof_table(pr).map(|t| t.conclusion().clone())
}

// ---------------------------------------------------------------------------
// JSON interface

/// One step of the proof file format: exactly one of `axiom`, `mp`, `nec`,
/// plus an optional claimed `formula` on `mp` and `nec` steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct StepFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axiom: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mp: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nec: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ProofFile {
    pub steps: Vec<StepFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofFileError {
    #[error("step {step}: {source}")]
    Formula { step: usize, source: ParseError },
    #[error("step {0}: expected exactly one of `axiom`, `mp`, `nec`")]
    Shape(usize),
    #[error("step {0}: axiom steps carry their formula in `axiom`, not `formula`")]
    AxiomClaim(usize),
}

impl ProofFile {
    pub fn to_proof(&self) -> Result<Proof, ProofFileError> {
        let steps = self
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let parse_at = |text: &str| {
                    parse(text).map_err(|source| ProofFileError::Formula { step: i, source })
                };
                let claim = s.formula.as_deref().map(parse_at).transpose()?;
                match (&s.axiom, s.mp, s.nec) {
                    (Some(text), None, None) => {
                        if claim.is_some() {
                            return Err(ProofFileError::AxiomClaim(i));
                        }
                        Ok(Step::Axiom(parse_at(text)?))
                    }
                    (None, Some([major, minor]), None) => Ok(Step::Mp {
                        major,
                        minor,
                        claim,
                    }),
                    (None, None, Some(premise)) => Ok(Step::Nec { premise, claim }),
                    _ => Err(ProofFileError::Shape(i)),
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Proof { steps })
    }

    pub fn from_proof(pr: &Proof) -> ProofFile {
        let steps = pr
            .steps
            .iter()
            .map(|s| match s {
                Step::Axiom(f) => StepFile {
                    axiom: Some(f.to_string()),
                    ..Default::default()
                },
                Step::Mp {
                    major,
                    minor,
                    claim,
                } => StepFile {
                    mp: Some([*major, *minor]),
                    formula: claim.as_ref().map(Formula::to_string),
                    ..Default::default()
                },
                Step::Nec { premise, claim } => StepFile {
                    nec: Some(*premise),
                    formula: claim.as_ref().map(Formula::to_string),
                    ..Default::default()
                },
            })
            .collect();
        ProofFile { steps }
    }
}

// ---------------------------------------------------------------------------
// Proof construction

/// Handle to a derived formula inside a [`ProofBuilder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thm(usize);

/// Accumulates a linear proof. Each formula is derived at most once;
/// repeated derivations return the existing step.
///
/// The builder panics if a rule is applied to premises of the wrong shape,
/// which indicates a bug in the calling derivation, never bad user input.
#[derive(Debug, Default)]
pub struct ProofBuilder {
    steps: Vec<Step>,
    formulas: Vec<Formula>,
    index: HashMap<Formula, usize>,
}

fn split_imp(f: &Formula) -> (&Formula, &Formula) {
    match f {
        Formula::Imp(a, b) => (a, b),
        other => panic!("expected an implication, got `{other}`"),
    }
}

fn split_iff(f: &Formula) -> (&Formula, &Formula) {
    match f {
        Formula::Iff(a, b) => (a, b),
        other => panic!("expected a biconditional, got `{other}`"),
    }
}

impl ProofBuilder {
    pub fn new() -> ProofBuilder {
        ProofBuilder::default()
    }

    pub fn formula(&self, t: Thm) -> &Formula {
        &self.formulas[t.0]
    }

    fn push(&mut self, step: Step, f: Formula) -> Thm {
        if let Some(&i) = self.index.get(&f) {
            return Thm(i);
        }
        let i = self.steps.len();
        self.steps.push(step);
        self.index.insert(f.clone(), i);
        self.formulas.push(f);
        Thm(i)
    }

    // Primitive rules.

    pub fn axiom(&mut self, f: Formula) -> Thm {
        assert!(is_axiom(&f).is_some(), "`{f}` is not an axiom");
        self.push(Step::Axiom(f.clone()), f)
    }

    pub fn schema(&mut self, schema: Schema, args: &[Formula]) -> Thm {
        let f = schema
            .instantiate(args)
            .unwrap_or_else(|| panic!("{schema} needs {} arguments", schema.arity()));
        self.axiom(f)
    }

    pub fn mp(&mut self, major: Thm, minor: Thm) -> Thm {
        let (a, b) = split_imp(self.formula(major));
        assert_eq!(a, self.formula(minor), "modus ponens antecedent mismatch");
        let b = b.clone();
        let step = Step::Mp {
            major: major.0,
            minor: minor.0,
            claim: Some(b.clone()),
        };
        self.push(step, b)
    }

    pub fn nec(&mut self, premise: Thm) -> Thm {
        let f = Formula::boxed(self.formula(premise).clone());
        let step = Step::Nec {
            premise: premise.0,
            claim: Some(f.clone()),
        };
        self.push(step, f)
    }

    /// Finishes the proof, ending with `conclusion`: the final step is
    /// moved to the end if it was derived earlier.
    pub fn finish(self, conclusion: Thm) -> Proof {
        let mut steps = self.steps;
        if conclusion.0 + 1 != steps.len() {
            // Re-deriving the conclusion last keeps "conclusion = last step".
            let last = match &steps[conclusion.0] {
                Step::Axiom(f) => Step::Axiom(f.clone()),
                Step::Mp {
                    major,
                    minor,
                    claim,
                } => Step::Mp {
                    major: *major,
                    minor: *minor,
                    claim: claim.clone(),
                },
                Step::Nec { premise, claim } => Step::Nec {
                    premise: *premise,
                    claim: claim.clone(),
                },
            };
            steps.push(last);
        }
        Proof { steps }
    }

    // Implicational combinators over schemas 1 and 2.

    /// `|- a --> a`
    pub fn imp_refl(&mut self, a: &Formula) -> Thm {
        let aa = Formula::imp(a.clone(), a.clone());
        let s1 = self.schema(Schema::AddImp, &[a.clone(), aa.clone()]);
        let s2 = self.schema(Schema::DistribImp, &[a.clone(), aa.clone(), a.clone()]);
        let s3 = self.mp(s2, s1);
        let s4 = self.schema(Schema::AddImp, &[a.clone(), a.clone()]);
        self.mp(s3, s4)
    }

    /// From `|- b` infer `|- a --> b`.
    pub fn add_assum(&mut self, a: &Formula, th: Thm) -> Thm {
        let b = self.formula(th).clone();
        let ax = self.schema(Schema::AddImp, &[b, a.clone()]);
        self.mp(ax, th)
    }

    /// From `|- a --> (b --> c)` and `|- a --> b` infer `|- a --> c`.
    pub fn mp_under(&mut self, abc: Thm, ab: Thm) -> Thm {
        let (a, bc) = split_imp(self.formula(abc));
        let (b, c) = split_imp(bc);
        let (a, b, c) = (a.clone(), b.clone(), c.clone());
        let ax = self.schema(Schema::DistribImp, &[a, b, c]);
        let s = self.mp(ax, abc);
        self.mp(s, ab)
    }

    /// From `|- a --> b` and `|- b --> c` infer `|- a --> c`.
    pub fn imp_trans(&mut self, ab: Thm, bc: Thm) -> Thm {
        let a = split_imp(self.formula(ab)).0.clone();
        let abc = self.add_assum(&a, bc);
        self.mp_under(abc, ab)
    }

    /// Chains `|- f0 --> f1`, `|- f1 --> f2`, ...
    pub fn imp_chain(&mut self, links: &[Thm]) -> Thm {
        let (first, rest) = links.split_first().expect("nonempty chain");
        rest.iter()
            .fold(*first, |acc, &next| self.imp_trans(acc, next))
    }

    /// From `|- a --> (b --> c)` infer `|- b --> (a --> c)`.
    pub fn imp_swap(&mut self, abc: Thm) -> Thm {
        let (a, bc) = split_imp(self.formula(abc));
        let (b, c) = split_imp(bc);
        let (a, b, c) = (a.clone(), b.clone(), c.clone());
        let ax = self.schema(Schema::DistribImp, &[a.clone(), b.clone(), c]);
        let ab_ac = self.mp(ax, abc);
        let b_ab = self.schema(Schema::AddImp, &[b, a]);
        self.imp_trans(b_ab, ab_ac)
    }

    /// `|- (b --> c) --> (a --> b) --> (a --> c)`
    pub fn imp_trans_th(&mut self, a: &Formula, b: &Formula, c: &Formula) -> Thm {
        let dist = self.schema(Schema::DistribImp, &[a.clone(), b.clone(), c.clone()]);
        let bc = Formula::imp(b.clone(), c.clone());
        let lift = self.schema(Schema::AddImp, &[bc, a.clone()]);
        self.imp_trans(lift, dist)
    }

    /// `|- (a --> b) --> (b --> c) --> (a --> c)`
    pub fn imp_trans_th2(&mut self, a: &Formula, b: &Formula, c: &Formula) -> Thm {
        let th = self.imp_trans_th(a, b, c);
        self.imp_swap(th)
    }

    /// `|- (a --> b --> c) --> (b --> a --> c)`
    pub fn imp_swap_th(&mut self, a: &Formula, b: &Formula, c: &Formula) -> Thm {
        let ab = Formula::imp(a.clone(), b.clone());
        let ac = Formula::imp(a.clone(), c.clone());
        let dist = self.schema(Schema::DistribImp, &[a.clone(), b.clone(), c.clone()]);
        let th2 = self.imp_trans_th2(b, &ab, &ac);
        let b_ab = self.schema(Schema::AddImp, &[b.clone(), a.clone()]);
        let pre = self.mp(th2, b_ab);
        self.imp_trans(dist, pre)
    }

    /// `|- a --> (a --> b) --> b`
    pub fn imp_mp_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let refl = self.imp_refl(&Formula::imp(a.clone(), b.clone()));
        self.imp_swap(refl)
    }

    /// From `|- b --> c` infer `|- (a --> b) --> (a --> c)`.
    pub fn imp_mono_right(&mut self, a: &Formula, bc: Thm) -> Thm {
        let (b, c) = split_imp(self.formula(bc));
        let (b, c) = (b.clone(), c.clone());
        let th = self.imp_trans_th(a, &b, &c);
        self.mp(th, bc)
    }

    /// From `|- a' --> a` infer `|- (a --> c) --> (a' --> c)`.
    pub fn imp_mono_left(&mut self, c: &Formula, a2a: Thm) -> Thm {
        let (a2, a) = split_imp(self.formula(a2a));
        let (a2, a) = (a2.clone(), a.clone());
        let th = self.imp_trans_th2(&a2, &a, c);
        self.mp(th, a2a)
    }

    /// From `|- x --> a`, `|- x --> b` and `|- a --> b --> c` infer `|- x --> c`.
    pub fn combine(&mut self, xa: Thm, xb: Thm, abc: Thm) -> Thm {
        let x_bc = self.imp_trans(xa, abc);
        self.mp_under(x_bc, xb)
    }

    // Falsity, negation, truth.

    /// `|- False --> a`
    pub fn ex_falso(&mut self, a: &Formula) -> Thm {
        let neg = Formula::imp(a.clone(), Formula::False);
        let s1 = self.schema(Schema::AddImp, &[Formula::False, neg]);
        let s2 = self.schema(Schema::DoubleNeg, std::slice::from_ref(a));
        self.imp_trans(s1, s2)
    }

    /// `|- True`
    pub fn truth(&mut self) -> Thm {
        let ax = self.schema(Schema::True, &[]);
        let back = self.iff_mp2(ax);
        let ff = self.imp_refl(&Formula::False);
        self.mp(back, ff)
    }

    /// `|- (a --> False) --> Not a`
    pub fn not_intro_th(&mut self, a: &Formula) -> Thm {
        let ax = self.schema(Schema::Not, std::slice::from_ref(a));
        self.iff_mp2(ax)
    }

    /// `|- Not a --> a --> False`
    pub fn not_elim_th(&mut self, a: &Formula) -> Thm {
        let ax = self.schema(Schema::Not, std::slice::from_ref(a));
        self.iff_mp1(ax)
    }

    /// From `|- a --> b` infer `|- (b --> False) --> (a --> False)`.
    pub fn contra_false(&mut self, ab: Thm) -> Thm {
        self.imp_mono_left(&Formula::False, ab)
    }

    /// `|- Not Not a --> a`
    pub fn not_not_elim_th(&mut self, a: &Formula) -> Thm {
        let na = Formula::not(a.clone());
        let nna_elim = self.not_elim_th(&na);
        let a_false_na = self.not_intro_th(a);
        let lift = self.contra_false(a_false_na);
        let dn = self.schema(Schema::DoubleNeg, std::slice::from_ref(a));
        self.imp_chain(&[nna_elim, lift, dn])
    }

    /// `|- a --> Not Not a`
    pub fn not_not_intro_th(&mut self, a: &Formula) -> Thm {
        let na = Formula::not(a.clone());
        let mp = self.imp_mp_th(a, &Formula::False);
        let na_elim = self.not_elim_th(a);
        let lift = self.contra_false(na_elim);
        let intro = self.not_intro_th(&na);
        self.imp_chain(&[mp, lift, intro])
    }

    /// `|- (a --> b) --> (Not b --> Not a)`
    pub fn contrapos_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let step = self.imp_trans_th2(a, b, &Formula::False);
        let nb_elim = self.not_elim_th(b);
        let na_intro = self.not_intro_th(a);
        let bf = Formula::imp(b.clone(), Formula::False);
        let right = self.imp_mono_right(&bf, na_intro);
        let left = self.imp_mono_left(&Formula::not(a.clone()), nb_elim);
        self.imp_chain(&[step, right, left])
    }

    // Biconditional.

    /// From `|- a <-> b` infer `|- a --> b`.
    pub fn iff_mp1(&mut self, iff: Thm) -> Thm {
        let (a, b) = split_iff(self.formula(iff));
        let (a, b) = (a.clone(), b.clone());
        let ax = self.schema(Schema::IffImp1, &[a, b]);
        self.mp(ax, iff)
    }

    /// From `|- a <-> b` infer `|- b --> a`.
    pub fn iff_mp2(&mut self, iff: Thm) -> Thm {
        let (a, b) = split_iff(self.formula(iff));
        let (a, b) = (a.clone(), b.clone());
        let ax = self.schema(Schema::IffImp2, &[a, b]);
        self.mp(ax, iff)
    }

    /// From `|- a --> b` and `|- b --> a` infer `|- a <-> b`.
    pub fn iff_intro(&mut self, ab: Thm, ba: Thm) -> Thm {
        let (a, b) = split_imp(self.formula(ab));
        let (a, b) = (a.clone(), b.clone());
        let ax = self.schema(Schema::ImpIff, &[a, b]);
        let s = self.mp(ax, ab);
        self.mp(s, ba)
    }

    /// `|- a <-> a`
    pub fn iff_refl(&mut self, a: &Formula) -> Thm {
        let r = self.imp_refl(a);
        self.iff_intro(r, r)
    }

    /// `|- (a <-> b) --> (b <-> a)`
    pub fn iff_sym_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let to_ba = self.schema(Schema::IffImp2, &[a.clone(), b.clone()]);
        let to_ab = self.schema(Schema::IffImp1, &[a.clone(), b.clone()]);
        let intro = self.schema(Schema::ImpIff, &[b.clone(), a.clone()]);
        self.combine(to_ba, to_ab, intro)
    }

    // Conjunction and disjunction.

    /// `|- a --> b --> a && b`
    pub fn and_intro_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let r = Formula::imp(a.clone(), Formula::imp(b.clone(), Formula::False));
        // r --> a --> b --> False, swapped to a --> r --> b --> False
        let refl = self.imp_refl(&r);
        let a_r_bf = self.imp_swap(refl);
        // (r --> b --> False) --> (b --> r --> False)
        let swap = self.imp_swap_th(&r, b, &Formula::False);
        let a_b_rf = self.imp_trans(a_r_bf, swap);
        let ax = self.schema(Schema::And, &[a.clone(), b.clone()]);
        let back = self.iff_mp2(ax);
        let under_b = self.imp_mono_right(b, back);
        self.imp_trans(a_b_rf, under_b)
    }

    /// `|- a && b --> a`
    pub fn and_left_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let bf = Formula::imp(b.clone(), Formula::False);
        let ax = self.schema(Schema::And, &[a.clone(), b.clone()]);
        let unfold = self.iff_mp1(ax);
        // (a --> False) --> (a --> b --> False)
        let fbf = self.schema(Schema::AddImp, &[Formula::False, b.clone()]);
        let weaken = self.imp_mono_right(a, fbf);
        debug_assert_eq!(
            split_imp(self.formula(weaken)).1,
            &Formula::imp(a.clone(), bf)
        );
        let lift = self.contra_false(weaken);
        let dn = self.schema(Schema::DoubleNeg, std::slice::from_ref(a));
        self.imp_chain(&[unfold, lift, dn])
    }

    /// `|- a && b --> b`
    pub fn and_right_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let ax = self.schema(Schema::And, &[a.clone(), b.clone()]);
        let unfold = self.iff_mp1(ax);
        let bf = Formula::imp(b.clone(), Formula::False);
        let weaken = self.schema(Schema::AddImp, &[bf, a.clone()]);
        let lift = self.contra_false(weaken);
        let dn = self.schema(Schema::DoubleNeg, std::slice::from_ref(b));
        self.imp_chain(&[unfold, lift, dn])
    }

    /// From `|- x --> a` and `|- x --> b` infer `|- x --> a && b`.
    pub fn and_pair(&mut self, xa: Thm, xb: Thm) -> Thm {
        let a = split_imp(self.formula(xa)).1.clone();
        let b = split_imp(self.formula(xb)).1.clone();
        let intro = self.and_intro_th(&a, &b);
        self.combine(xa, xb, intro)
    }

    /// From `|- a --> b --> c` infer `|- a && b --> c`.
    pub fn uncurry(&mut self, abc: Thm) -> Thm {
        let (a, bc) = split_imp(self.formula(abc));
        let b = split_imp(bc).0.clone();
        let a = a.clone();
        let left = self.and_left_th(&a, &b);
        let right = self.and_right_th(&a, &b);
        let x_bc = self.imp_trans(left, abc);
        self.mp_under(x_bc, right)
    }

    /// From `|- a --> b` infer `|- x && a --> x && b`.
    pub fn and_mono_right(&mut self, x: &Formula, ab: Thm) -> Thm {
        let a = split_imp(self.formula(ab)).0.clone();
        let left = self.and_left_th(x, &a);
        let right = self.and_right_th(x, &a);
        let right_b = self.imp_trans(right, ab);
        self.and_pair(left, right_b)
    }

    /// `|- a && b --> b && a`
    pub fn and_comm_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let left = self.and_left_th(a, b);
        let right = self.and_right_th(a, b);
        self.and_pair(right, left)
    }

    /// `|- (r --> a && b) --> (r --> b)`
    pub fn and_elim_th(&mut self, r: &Formula, a: &Formula, b: &Formula) -> Thm {
        let right = self.and_right_th(a, b);
        self.imp_mono_right(r, right)
    }

    /// `|- (a --> b) && a --> b`
    pub fn modusponens_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let ab = Formula::imp(a.clone(), b.clone());
        let left = self.and_left_th(&ab, a);
        let right = self.and_right_th(&ab, a);
        self.mp_under(left, right)
    }

    /// `|- Not (a && Not a)`
    pub fn non_contradiction(&mut self, a: &Formula) -> Thm {
        let na = Formula::not(a.clone());
        let left = self.and_left_th(a, &na);
        let right = self.and_right_th(a, &na);
        let elim = self.not_elim_th(a);
        let x_a_false = self.imp_trans(right, elim);
        let x_false = self.mp_under(x_a_false, left);
        let intro = self.not_intro_th(&Formula::and(a.clone(), na));
        self.mp(intro, x_false)
    }

    /// `|- a --> a || b` (or `|- b --> a || b` when `right` is set).
    pub fn or_intro_th(&mut self, a: &Formula, b: &Formula, right: bool) -> Thm {
        let (na, nb) = (Formula::not(a.clone()), Formula::not(b.clone()));
        let x = Formula::and(na.clone(), nb.clone());
        let (pick, chosen) = if right {
            (self.and_right_th(&na, &nb), b)
        } else {
            (self.and_left_th(&na, &nb), a)
        };
        let elim = self.not_elim_th(chosen);
        let x_c_false = self.imp_trans(pick, elim);
        let c_x_false = self.imp_swap(x_c_false);
        let not_x = self.not_intro_th(&x);
        let ax = self.schema(Schema::Or, &[a.clone(), b.clone()]);
        let fold = self.iff_mp2(ax);
        self.imp_chain(&[c_x_false, not_x, fold])
    }

    // Modal rules.

    /// From `|- a --> b` infer `|- Box a --> Box b`.
    pub fn box_mono(&mut self, ab: Thm) -> Thm {
        let (a, b) = split_imp(self.formula(ab));
        let (a, b) = (a.clone(), b.clone());
        let boxed = self.nec(ab);
        let k = self.schema(Schema::BoxImp, &[a, b]);
        self.mp(k, boxed)
    }

    /// `|- Box (a && b) --> Box a && Box b`
    pub fn box_and_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let left = self.and_left_th(a, b);
        let right = self.and_right_th(a, b);
        let bl = self.box_mono(left);
        let br = self.box_mono(right);
        self.and_pair(bl, br)
    }

    /// `|- Box a && Box b --> Box (a && b)`
    pub fn box_and_inv_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let ab = Formula::and(a.clone(), b.clone());
        let intro = self.and_intro_th(a, b);
        let first = self.box_mono(intro);
        let k = self.schema(Schema::BoxImp, &[b.clone(), ab]);
        let curried = self.imp_trans(first, k);
        self.uncurry(curried)
    }

    /// `|- Box (a <-> b) --> (Box a <-> Box b)`
    pub fn box_iff_th(&mut self, a: &Formula, b: &Formula) -> Thm {
        let fwd = self.schema(Schema::IffImp1, &[a.clone(), b.clone()]);
        let bwd = self.schema(Schema::IffImp2, &[a.clone(), b.clone()]);
        let box_fwd = self.box_mono(fwd);
        let box_bwd = self.box_mono(bwd);
        let kf = self.schema(Schema::BoxImp, &[a.clone(), b.clone()]);
        let kb = self.schema(Schema::BoxImp, &[b.clone(), a.clone()]);
        let x_ab = self.imp_trans(box_fwd, kf);
        let x_ba = self.imp_trans(box_bwd, kb);
        let (ba_, bb_) = (Formula::boxed(a.clone()), Formula::boxed(b.clone()));
        let intro = self.schema(Schema::ImpIff, &[ba_, bb_]);
        self.combine(x_ab, x_ba, intro)
    }

    /// `|- Box a --> Box Box a`, derived from the Löb schema.
    pub fn box_four_th(&mut self, a: &Formula) -> Thm {
        let ba = Formula::boxed(a.clone());
        let x = Formula::and(ba.clone(), a.clone());
        // Box x --> Box a
        let x_a = self.and_right_th(&ba, a);
        let bx_ba = self.box_mono(x_a);
        // Box x --> a --> x, swapped to a --> Box x --> x
        let intro = self.and_intro_th(&ba, a);
        let bx_a_x = self.imp_trans(bx_ba, intro);
        let a_bx_x = self.imp_swap(bx_a_x);
        let ba_box_step = self.box_mono(a_bx_x);
        let lob = self.schema(Schema::Lob, std::slice::from_ref(&x));
        let x_ba = self.and_left_th(&ba, a);
        let bx_bba = self.box_mono(x_ba);
        self.imp_chain(&[ba_box_step, lob, bx_bba])
    }

    /// `|- Box (conjlist fs) <-> conjlist (map Box fs)`
    pub fn conjlist_map_box(&mut self, fs: &[Formula]) -> Thm {
        match fs {
            [] => {
                let t = self.truth();
                let bt = self.nec(t);
                let fwd = self.add_assum(&Formula::boxed(Formula::True), t);
                let bwd = self.add_assum(&Formula::True, bt);
                self.iff_intro(fwd, bwd)
            }
            [single] => self.iff_refl(&Formula::boxed(single.clone())),
            [head, rest @ ..] => {
                let tail = conjlist(rest);
                let boxed_tail =
                    conjlist(&rest.iter().cloned().map(Formula::boxed).collect::<Vec<_>>());
                let bh = Formula::boxed(head.clone());
                let ih = self.conjlist_map_box(rest);
                let ih_fwd = self.iff_mp1(ih);
                let ih_bwd = self.iff_mp2(ih);
                // Box (h && t) --> Box h && Box t --> Box h && t'
                let split = self.box_and_th(head, &tail);
                let fwd_tail = self.and_mono_right(&bh, ih_fwd);
                let fwd = self.imp_trans(split, fwd_tail);
                // Box h && t' --> Box h && Box t --> Box (h && t)
                let bwd_tail = self.and_mono_right(&bh, ih_bwd);
                let join = self.box_and_inv_th(head, &tail);
                let bwd = self.imp_trans(bwd_tail, join);
                debug_assert_eq!(
                    split_imp(self.formula(fwd)).1,
                    &Formula::and(bh, boxed_tail)
                );
                self.iff_intro(fwd, bwd)
            }
        }
    }

    /// `|- conjlist fs --> fs[i]`
    pub fn conjlist_mem(&mut self, fs: &[Formula], i: usize) -> Thm {
        match fs {
            [single] => self.imp_refl(single),
            [head, rest @ ..] => {
                let tail = conjlist(rest);
                if i == 0 {
                    self.and_left_th(head, &tail)
                } else {
                    let right = self.and_right_th(head, &tail);
                    let inner = self.conjlist_mem(rest, i - 1);
                    self.imp_trans(right, inner)
                }
            }
            [] => panic!("conjlist_mem on an empty list"),
        }
    }
}

/// Right-nested conjunction; `True` for the empty list.
pub fn conjlist(fs: &[Formula]) -> Formula {
    match fs {
        [] => Formula::True,
        [single] => single.clone(),
        [head, rest @ ..] => Formula::and(head.clone(), conjlist(rest)),
    }
}

/// Longest list accepted by [`conjlist_map_box_proof`].
pub const MAX_CONJLIST_PROOF_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("unknown lemma `{0}`")]
    Unknown(String),
    #[error("lemma `{name}` takes {expected} formula arguments, got {got}")]
    Arity {
        name: String,
        expected: String,
        got: usize,
    },
    #[error("`{element}` is not a member of the list")]
    NotAMember { element: Formula },
    #[error("list of {len} formulas exceeds the limit of {limit}")]
    TooLong { len: usize, limit: usize },
}

pub fn conjlist_map_box_proof(fs: &[Formula]) -> Result<Proof, LemmaError> {
    if fs.len() > MAX_CONJLIST_PROOF_LEN {
        return Err(LemmaError::TooLong {
            len: fs.len(),
            limit: MAX_CONJLIST_PROOF_LEN,
        });
    }
    let mut b = ProofBuilder::new();
    let th = b.conjlist_map_box(fs);
    Ok(b.finish(th))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

/// A catalogued lemma: its name, statement pattern and arity.
#[derive(Debug, Clone, Copy)]
pub struct LemmaInfo {
    pub name: &'static str,
    pub statement: &'static str,
    arity: Arity,
}

impl LemmaInfo {
    pub fn arity_description(&self) -> String {
        match self.arity {
            Arity::Exactly(n) => n.to_string(),
            Arity::AtLeast(n) => format!("at least {n}"),
        }
    }

    /// Smallest argument count accepted.
    pub fn min_args(&self) -> usize {
        match self.arity {
            Arity::Exactly(n) | Arity::AtLeast(n) => n,
        }
    }

    pub fn is_variadic(&self) -> bool {
        matches!(self.arity, Arity::AtLeast(_))
    }
}

const fn info(name: &'static str, statement: &'static str, arity: Arity) -> LemmaInfo {
    LemmaInfo {
        name,
        statement,
        arity,
    }
}

/// The lemma catalogue. Statements use `p`, `q`, `r` for the arguments
/// in order; `fs` is the variadic tail.
pub const CATALOGUE: &[LemmaInfo] = &[
    info("imp_refl", "p --> p", Arity::Exactly(1)),
    info("imp_add", "p --> q --> p", Arity::Exactly(2)),
    info(
        "imp_trans_th",
        "(q --> r) --> (p --> q) --> (p --> r)",
        Arity::Exactly(3),
    ),
    info(
        "imp_trans_th2",
        "(p --> q) --> (q --> r) --> (p --> r)",
        Arity::Exactly(3),
    ),
    info(
        "imp_swap_th",
        "(p --> q --> r) --> (q --> p --> r)",
        Arity::Exactly(3),
    ),
    info("imp_mp_th", "p --> (p --> q) --> q", Arity::Exactly(2)),
    info("modusponens_th", "(p --> q) && p --> q", Arity::Exactly(2)),
    info("and_intro_th", "p --> q --> p && q", Arity::Exactly(2)),
    info("and_left_th", "p && q --> p", Arity::Exactly(2)),
    info("and_right_th", "p && q --> q", Arity::Exactly(2)),
    info("and_comm_th", "p && q --> q && p", Arity::Exactly(2)),
    info(
        "and_elim",
        "(r --> p && q) --> (r --> q)",
        Arity::Exactly(3),
    ),
    info("not_intro_th", "(p --> False) --> Not p", Arity::Exactly(1)),
    info("not_elim_th", "Not p --> p --> False", Arity::Exactly(1)),
    info("not_not_elim_th", "Not Not p --> p", Arity::Exactly(1)),
    info("not_not_intro_th", "p --> Not Not p", Arity::Exactly(1)),
    info(
        "contrapos_th",
        "(p --> q) --> Not q --> Not p",
        Arity::Exactly(2),
    ),
    info("non_contradiction", "Not (p && Not p)", Arity::Exactly(1)),
    info("ex_falso_th", "False --> p", Arity::Exactly(1)),
    info("truth", "True", Arity::Exactly(0)),
    info("iff_refl", "p <-> p", Arity::Exactly(1)),
    info("iff_imp1_th", "(p <-> q) --> p --> q", Arity::Exactly(2)),
    info("iff_imp2_th", "(p <-> q) --> q --> p", Arity::Exactly(2)),
    info(
        "iff_intro_th",
        "(p --> q) --> (q --> p) --> (p <-> q)",
        Arity::Exactly(2),
    ),
    info("iff_sym_th", "(p <-> q) --> (q <-> p)", Arity::Exactly(2)),
    info("or_intro_left_th", "p --> p || q", Arity::Exactly(2)),
    info("or_intro_right_th", "q --> p || q", Arity::Exactly(2)),
    info(
        "box_distrib_th",
        "Box (p --> q) --> Box p --> Box q",
        Arity::Exactly(2),
    ),
    info(
        "box_and_th",
        "Box (p && q) --> Box p && Box q",
        Arity::Exactly(2),
    ),
    info(
        "box_and_inv_th",
        "Box p && Box q --> Box (p && q)",
        Arity::Exactly(2),
    ),
    info(
        "box_iff",
        "Box (p <-> q) --> (Box p <-> Box q)",
        Arity::Exactly(2),
    ),
    info("box_true", "Box True", Arity::Exactly(0)),
    info("box_four_th", "Box p --> Box Box p", Arity::Exactly(1)),
    info("lob", "Box (Box p --> p) --> Box p", Arity::Exactly(1)),
    info(
        "conjlist_map_box",
        "Box (CONJLIST fs) <-> CONJLIST (map Box fs)",
        Arity::AtLeast(0),
    ),
    info(
        "conjlist_mem",
        "CONJLIST fs --> p   (p a member of fs)",
        Arity::AtLeast(2),
    ),
];

pub fn lemma_info(name: &str) -> Option<&'static LemmaInfo> {
    CATALOGUE.iter().find(|l| l.name == name)
}

/// Builds a kernel-checkable proof of the named lemma at `args`.
pub fn lemma(name: &str, args: &[Formula]) -> Result<Proof, LemmaError> {
    let info = lemma_info(name).ok_or_else(|| LemmaError::Unknown(name.to_string()))?;
    let arity_ok = match info.arity {
        Arity::Exactly(n) => args.len() == n,
        Arity::AtLeast(n) => args.len() >= n,
    };
    if !arity_ok {
        return Err(LemmaError::Arity {
            name: name.to_string(),
            expected: info.arity_description(),
            got: args.len(),
        });
    }
    if name == "conjlist_map_box" {
        return conjlist_map_box_proof(args);
    }
    let a = |i: usize| &args[i];
    let mut b = ProofBuilder::new();
    let th = match name {
        "imp_refl" => b.imp_refl(a(0)),
        "imp_add" => b.schema(Schema::AddImp, args),
        "imp_trans_th" => b.imp_trans_th(a(0), a(1), a(2)),
        "imp_trans_th2" => b.imp_trans_th2(a(0), a(1), a(2)),
        "imp_swap_th" => b.imp_swap_th(a(0), a(1), a(2)),
        "imp_mp_th" => b.imp_mp_th(a(0), a(1)),
        "modusponens_th" => b.modusponens_th(a(0), a(1)),
        "and_intro_th" => b.and_intro_th(a(0), a(1)),
        "and_left_th" => b.and_left_th(a(0), a(1)),
        "and_right_th" => b.and_right_th(a(0), a(1)),
        "and_comm_th" => b.and_comm_th(a(0), a(1)),
        "and_elim" => b.and_elim_th(a(2), a(0), a(1)),
        "not_intro_th" => b.not_intro_th(a(0)),
        "not_elim_th" => b.not_elim_th(a(0)),
        "not_not_elim_th" => b.not_not_elim_th(a(0)),
        "not_not_intro_th" => b.not_not_intro_th(a(0)),
        "contrapos_th" => b.contrapos_th(a(0), a(1)),
        "non_contradiction" => b.non_contradiction(a(0)),
        "ex_falso_th" => b.ex_falso(a(0)),
        "truth" => b.truth(),
        "iff_refl" => b.iff_refl(a(0)),
        "iff_imp1_th" => b.schema(Schema::IffImp1, args),
        "iff_imp2_th" => b.schema(Schema::IffImp2, args),
        "iff_intro_th" => b.schema(Schema::ImpIff, args),
        "iff_sym_th" => b.iff_sym_th(a(0), a(1)),
        "or_intro_left_th" => b.or_intro_th(a(0), a(1), false),
        "or_intro_right_th" => b.or_intro_th(a(0), a(1), true),
        "box_distrib_th" => b.schema(Schema::BoxImp, args),
        "box_and_th" => b.box_and_th(a(0), a(1)),
        "box_and_inv_th" => b.box_and_inv_th(a(0), a(1)),
        "box_iff" => b.box_iff_th(a(0), a(1)),
        "box_true" => {
            let t = b.truth();
            b.nec(t)
        }
        "box_four_th" => b.box_four_th(a(0)),
        "lob" => b.schema(Schema::Lob, args),
        "conjlist_mem" => {
            let (element, list) = args.split_first().unwrap();
            let i =
                list.iter()
                    .position(|f| f == element)
                    .ok_or_else(|| LemmaError::NotAMember {
                        element: element.clone(),
                    })?;
            b.conjlist_mem(list, i)
        }
        _ => unreachable!("catalogue entry without a derivation"),
    };
    Ok(b.finish(th))
}

/// The statement a catalogued lemma proves at `args`, computed from its
/// pattern independently of the derivation.
pub fn lemma_statement(name: &str, args: &[Formula]) -> Result<Formula, LemmaError> {
    let info = lemma_info(name).ok_or_else(|| LemmaError::Unknown(name.to_string()))?;
    match name {
        "conjlist_map_box" => {
            let boxed: Vec<Formula> = args.iter().cloned().map(Formula::boxed).collect();
            Ok(Formula::iff(
                Formula::boxed(conjlist(args)),
                conjlist(&boxed),
            ))
        }
        "conjlist_mem" => {
            if args.len() < 2 {
                return Err(LemmaError::Arity {
                    name: name.to_string(),
                    expected: info.arity_description(),
                    got: args.len(),
                });
            }
            Ok(Formula::imp(conjlist(&args[1..]), args[0].clone()))
        }
        _ => {
            if args.len() != info.min_args() {
                return Err(LemmaError::Arity {
                    name: name.to_string(),
                    expected: info.arity_description(),
                    got: args.len(),
                });
            }
            let pattern = parse(info.statement).expect("catalogue statements parse");
            let mut subst = BTreeMap::new();
            for (var, f) in ["p", "q", "r"].iter().zip(args) {
                subst.insert(var.to_string(), f.clone());
            }
            Ok(substitute(&pattern, &subst))
        }
    }
}

/// Replaces atoms by their images under `subst`; other atoms are kept.
pub fn substitute(f: &Formula, subst: &BTreeMap<String, Formula>) -> Formula {
    let go = |g: &Formula| Box::new(substitute(g, subst));
    match f {
        Formula::Atom(name) => subst.get(name).cloned().unwrap_or_else(|| f.clone()),
        Formula::False | Formula::True => f.clone(),
        Formula::Not(a) => Formula::Not(go(a)),
        Formula::Box(a) => Formula::Box(go(a)),
        Formula::And(a, b) => Formula::And(go(a), go(b)),
        Formula::Or(a, b) => Formula::Or(go(a), go(b)),
        Formula::Imp(a, b) => Formula::Imp(go(a), go(b)),
        Formula::Iff(a, b) => Formula::Iff(go(a), go(b)),
    }
}
