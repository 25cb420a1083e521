//! Worlds as complete, coherent sets of signed subformulas; the standard
//! accessibility relation; a saturation-based decision procedure; and
//! countermodel certificates that are re-checked against the Kripke
//! semantics.
//!
//! A world over the closure of a target is fixed by the truth values of
//! the atoms and boxed formulas in the closure; every compound member
//! follows by the classical truth tables. For `Not (Box q)` in `w` the
//! saturation step looks for a successor containing `Box q`, `Not q` and
//! `Box B, B` for each `Box B` in `w`. Along such a chain the set of true
//! boxes strictly grows, so the search terminates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::conjlist;
use crate::kripke::{is_itf, Frame, KripkeError, Model, ModelFile, WorldId, WorldNames};
use crate::syntax::{parse, subformulas, Formula, ParseError};

/// Upper bound on atoms plus boxed formulas in a closure.
pub const MAX_DIMENSIONS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompletenessError {
    #[error(
        "size guard: closure has {atoms} atoms and {boxes} boxed formulas; \
         at most {limit} in total are supported"
    )]
    SizeGuard {
        atoms: usize,
        boxes: usize,
        limit: usize,
    },
    #[error("`{0}` is neither a closure member nor the negation of one")]
    OutsideClosure(Formula),
    #[error("`{0}` occurs more than once")]
    Duplicate(Formula),
    #[error("the list [{}] is inconsistent", join(.0))]
    Inconsistent(Vec<Formula>),
    #[error("the list [{}] is not a complete coherent world", join(.0))]
    NotAWorld(Vec<Formula>),
}

fn join(fs: &[Formula]) -> String {
    fs.iter()
        .map(Formula::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    False,
    True,
    /// Position in the base assignment.
    Atom(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Imp(usize, usize),
    Iff(usize, usize),
    /// Base position, closure index of the body.
    Box(usize, usize),
}

/// The subformula closure of a target, with the bookkeeping needed to
/// enumerate and evaluate worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureContext {
    target: Formula,
    closure: Vec<Formula>,
    index: HashMap<Formula, usize>,
    nodes: Vec<Node>,
    atom_count: usize,
    /// Closure indices of the boxed formulas, in closure order.
    boxes: Vec<usize>,
}

impl ClosureContext {
    pub fn new(target: &Formula) -> Result<ClosureContext, CompletenessError> {
        let closure = subformulas(target);
        let atom_count = closure.iter().filter(|f| f.as_atom().is_some()).count();
        let box_count = closure.iter().filter(|f| f.is_box()).count();
        if atom_count + box_count > MAX_DIMENSIONS {
            return Err(CompletenessError::SizeGuard {
                atoms: atom_count,
                boxes: box_count,
                limit: MAX_DIMENSIONS,
            });
        }
        let index: HashMap<Formula, usize> = closure
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        let (mut next_atom, mut next_box) = (0, atom_count);
        let mut boxes = Vec::with_capacity(box_count);
        let nodes = closure
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let ix = |g: &Formula| index[g];
                match f {
                    Formula::False => Node::False,
                    Formula::True => Node::True,
                    Formula::Atom(_) => {
                        next_atom += 1;
                        Node::Atom(next_atom - 1)
                    }
                    Formula::Not(a) => Node::Not(ix(a)),
                    Formula::And(a, b) => Node::And(ix(a), ix(b)),
                    Formula::Or(a, b) => Node::Or(ix(a), ix(b)),
                    Formula::Imp(a, b) => Node::Imp(ix(a), ix(b)),
                    Formula::Iff(a, b) => Node::Iff(ix(a), ix(b)),
                    Formula::Box(a) => {
                        boxes.push(i);
                        next_box += 1;
                        Node::Box(next_box - 1, ix(a))
                    }
                }
            })
            .collect();
        Ok(ClosureContext {
            target: target.clone(),
            closure,
            index,
            nodes,
            atom_count,
            boxes,
        })
    }

    pub fn target(&self) -> &Formula {
        &self.target
    }

    /// Subformulas of the target in canonical order.
    pub fn closure(&self) -> &[Formula] {
        &self.closure
    }

    /// Closure members and their negations, duplicate-free, canonically ordered.
    pub fn signed_closure(&self) -> Vec<Formula> {
        let set: BTreeSet<Formula> = self
            .closure
            .iter()
            .flat_map(|q| [q.clone(), Formula::not(q.clone())])
            .collect();
        set.into_iter().collect()
    }

    pub fn in_closure(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    pub fn in_signed_closure(&self, f: &Formula) -> bool {
        self.in_closure(f) || matches!(f, Formula::Not(g) if self.in_closure(g))
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn box_count(&self) -> usize {
        self.boxes.len()
    }

    /// Number of independently chosen truth values per world.
    pub fn dimensions(&self) -> usize {
        self.atom_count + self.boxes.len()
    }

    pub fn boxed_formulas(&self) -> impl Iterator<Item = &Formula> {
        self.boxes.iter().map(|&i| &self.closure[i])
    }

    /// Evaluates every closure member from a base assignment.
    fn world_from_code(&self, code: u32) -> World {
        let mut truth = vec![false; self.closure.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            truth[i] = match *node {
                Node::False => false,
                Node::True => true,
                Node::Atom(bit) | Node::Box(bit, _) => code >> bit & 1 == 1,
                Node::Not(a) => !truth[a],
                Node::And(a, b) => truth[a] && truth[b],
                Node::Or(a, b) => truth[a] || truth[b],
                Node::Imp(a, b) => !truth[a] || truth[b],
                Node::Iff(a, b) => truth[a] == truth[b],
            };
        }
        let members: BTreeSet<Formula> = self
            .closure
            .iter()
            .zip(&truth)
            .map(|(q, &t)| {
                if t {
                    q.clone()
                } else {
                    Formula::not(q.clone())
                }
            })
            .collect();
        World {
            members: members.into_iter().collect(),
            code,
            truth,
        }
    }

    fn box_mask(&self, w: &World) -> u32 {
        w.code >> self.atom_count
    }

    /// The world whose members are exactly `members` (in any order).
    pub fn world_from_members(&self, members: &[Formula]) -> Result<World, CompletenessError> {
        let set = self.validate_list(members)?;
        let mut code = 0u32;
        for (i, node) in self.nodes.iter().enumerate() {
            if let Node::Atom(bit) | Node::Box(bit, _) = *node {
                if set.contains(&self.closure[i]) {
                    code |= 1 << bit;
                }
            }
        }
        let world = self.world_from_code(code);
        if world.members.iter().cloned().collect::<BTreeSet<_>>() != set {
            return Err(CompletenessError::NotAWorld(members.to_vec()));
        }
        Ok(world)
    }

    fn validate_list(&self, xs: &[Formula]) -> Result<BTreeSet<Formula>, CompletenessError> {
        let mut set = BTreeSet::new();
        for x in xs {
            if !self.in_signed_closure(x) {
                return Err(CompletenessError::OutsideClosure(x.clone()));
            }
            if !set.insert(x.clone()) {
                return Err(CompletenessError::Duplicate(x.clone()));
            }
        }
        Ok(set)
    }
}

/// A complete, propositionally coherent, duplicate-free set of signed
/// closure members, kept in canonical order.
#[derive(Debug, Clone)]
pub struct World {
    members: Vec<Formula>,
    code: u32,
    truth: Vec<bool>,
}

impl World {
    pub fn members(&self) -> &[Formula] {
        &self.members
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.members.binary_search(f).is_ok()
    }

    fn truth_of(&self, closure_index: usize) -> bool {
        self.truth[closure_index]
    }
}

impl PartialEq for World {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for World {}

impl Ord for World {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.members.cmp(&other.members)
    }
}

impl PartialOrd for World {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", join(&self.members))
    }
}

/// Every world over the closure, in canonical order.
pub fn hintikka_worlds(ctx: &ClosureContext) -> Vec<World> {
    let mut worlds: Vec<World> = (0..1u32 << ctx.dimensions())
        .map(|code| ctx.world_from_code(code))
        .collect();
    worlds.sort();
    worlds
}

/// Boxes propagate from `w` to `x` (with their bodies), and some box
/// false at `w` is true at `x`.
pub fn standard_rel(ctx: &ClosureContext, w: &World, x: &World) -> bool {
    let propagates = ctx.boxes.iter().all(|&bi| {
        let Node::Box(_, body) = ctx.nodes[bi] else {
            unreachable!()
        };
        !w.truth_of(bi) || (x.truth_of(bi) && x.truth_of(body))
    });
    let newly_boxed = ctx
        .boxes
        .iter()
        .any(|&bi| x.truth_of(bi) && !w.truth_of(bi));
    propagates && newly_boxed
}

/// Memoized satisfiability search over the worlds of one closure.
pub struct Saturator<'a> {
    ctx: &'a ClosureContext,
    worlds: Vec<World>,
    memo: Vec<Option<bool>>,
}

impl<'a> Saturator<'a> {
    pub fn new(ctx: &'a ClosureContext) -> Saturator<'a> {
        let n = 1usize << ctx.dimensions();
        Saturator {
            ctx,
            worlds: (0..n as u32).map(|c| ctx.world_from_code(c)).collect(),
            memo: vec![None; n],
        }
    }

    /// Every negated box in `w` has a saturated successor refuting its body.
    pub fn saturate(&mut self, w: &World) -> bool {
        self.saturate_code(w.code)
    }

    fn saturate_code(&mut self, code: u32) -> bool {
        if let Some(done) = self.memo[code as usize] {
            return done;
        }
        let ctx = self.ctx;
        let w = self.worlds[code as usize].clone();
        let atoms = ctx.atom_count;
        let box_bits = ctx.boxes.len() as u32;
        let held_mask = ctx.box_mask(&w);
        // Bodies of boxes true at w must hold at every successor.
        let required_bodies: Vec<usize> = ctx
            .boxes
            .iter()
            .filter(|&&bi| w.truth_of(bi))
            .map(|&bi| match ctx.nodes[bi] {
                Node::Box(_, body) => body,
                _ => unreachable!(),
            })
            .collect();
        let mut ok = true;
        for (k, &bi) in ctx.boxes.iter().enumerate() {
            if w.truth_of(bi) {
                continue;
            }
            let Node::Box(_, refuted) = ctx.nodes[bi] else {
                unreachable!()
            };
            let need = held_mask | 1 << k;
            let free = !need & ((1u32 << box_bits) - 1);
            let mut found = false;
            // Supersets of `need` within the box bits, times all atom values.
            let mut extra = free;
            'supersets: loop {
                let mask = need | extra;
                for atom_code in 0..1u32 << atoms {
                    let x_code = atom_code | mask << atoms;
                    let x = &self.worlds[x_code as usize];
                    if x.truth_of(refuted) || !required_bodies.iter().all(|&b| x.truth_of(b)) {
                        continue;
                    }
                    if self.saturate_code(x_code) {
                        found = true;
                        break 'supersets;
                    }
                }
                if extra == 0 {
                    break;
                }
                extra = (extra - 1) & free;
            }
            if !found {
                ok = false;
                break;
            }
        }
        self.memo[code as usize] = Some(ok);
        ok
    }
}

/// Saturation status of a single world; see [`Saturator`] for batch use.
pub fn saturate(ctx: &ClosureContext, w: &World) -> bool {
    Saturator::new(ctx).saturate(w)
}

/// The saturated worlds of a closure, the standard relation on them, and
/// the membership valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardModel {
    pub context: ClosureContext,
    pub worlds: Vec<World>,
    /// Pairs of indices into `worlds`.
    pub rel: BTreeSet<(usize, usize)>,
}

impl StandardModel {
    fn build(context: ClosureContext, worlds: Vec<World>) -> StandardModel {
        // Successors have a strictly larger set of true boxes.
        let mut by_mask: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, w) in worlds.iter().enumerate() {
            by_mask.entry(context.box_mask(w)).or_default().push(i);
        }
        let mut rel = BTreeSet::new();
        for (i, w) in worlds.iter().enumerate() {
            let wm = context.box_mask(w);
            for (&xm, group) in &by_mask {
                if xm == wm || xm & wm != wm {
                    continue;
                }
                for &j in group {
                    if standard_rel(&context, w, &worlds[j]) {
                        rel.insert((i, j));
                    }
                }
            }
        }
        StandardModel {
            context,
            worlds,
            rel,
        }
    }

    pub fn frame(&self) -> Frame {
        Frame::new(0..self.worlds.len(), self.rel.iter().copied())
    }

    /// Atom `a` is true at `w` iff `Atom a` is a closure member of `w`.
    pub fn to_model(&self) -> Model {
        let mut valuation = BTreeMap::new();
        for f in self.context.closure() {
            if let Formula::Atom(name) = f {
                let set = (0..self.worlds.len())
                    .filter(|&i| self.worlds[i].contains(f))
                    .collect();
                valuation.insert(name.clone(), set);
            }
        }
        Model {
            frame: self.frame(),
            valuation,
        }
    }

    /// For every closure member `Box q` and world `w`: `Box q` is in `w`
    /// iff `q` is in every successor of `w`.
    pub fn frame_condition_holds(&self) -> bool {
        self.context.boxed_formulas().all(|bq| {
            let Formula::Box(q) = bq else { unreachable!() };
            self.worlds.iter().enumerate().all(|(i, w)| {
                let all_succ = self
                    .rel
                    .range((i, 0)..=(i, usize::MAX))
                    .all(|&(_, j)| self.worlds[j].contains(q));
                w.contains(bq) == all_succ
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: StandardModel,
    /// Index into `model.worlds` of a world containing `Not target`.
    pub witness: usize,
}

impl Countermodel {
    pub fn witness_world(&self) -> &World {
        &self.model.worlds[self.witness]
    }

    pub fn target(&self) -> &Formula {
        self.model.context.target()
    }

    pub fn to_certificate(&self) -> Certificate {
        let contents = self
            .model
            .worlds
            .iter()
            .enumerate()
            .map(|(i, w)| (i, w.members().iter().cloned().collect()))
            .collect();
        Certificate {
            target: self.target().clone(),
            model: self.model.to_model(),
            names: WorldNames::default(),
            witness: self.witness,
            contents,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)] // built once per call
pub enum Verdict {
    Theorem,
    Countermodel(Countermodel),
}

impl Verdict {
    pub fn is_theorem(&self) -> bool {
        matches!(self, Verdict::Theorem)
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Verdict::Countermodel(c) => Some(c),
            Verdict::Theorem => None,
        }
    }
}

/// GL theoremhood of `f`, with a countermodel when it is not a theorem.
pub fn decide(f: &Formula) -> Result<Verdict, CompletenessError> {
    let ctx = ClosureContext::new(f)?;
    let target_ix = ctx.index[f];
    let mut sat = Saturator::new(&ctx);
    let n = sat.worlds.len() as u32;
    let mut saturated: Vec<World> = Vec::new();
    for code in 0..n {
        if sat.saturate_code(code) {
            saturated.push(sat.worlds[code as usize].clone());
        }
    }
    saturated.sort();
    let Some(witness) = saturated.iter().position(|w| !w.truth_of(target_ix)) else {
        return Ok(Verdict::Theorem);
    };
    Ok(Verdict::Countermodel(Countermodel {
        model: StandardModel::build(ctx, saturated),
        witness,
    }))
}

/// Re-checks a countermodel against the Kripke semantics. A theorem
/// verdict carries no certificate and is rejected.
pub fn verify_certificate(v: &Verdict) -> bool {
    match v {
        Verdict::Theorem => false,
        Verdict::Countermodel(c) => c.to_certificate().verify().is_ok(),
    }
}

/// Not GL-refutable: `Not (conjlist fs)` is not a theorem.
pub fn consistent(fs: &[Formula]) -> Result<bool, CompletenessError> {
    Ok(!decide(&Formula::not(conjlist(fs)))?.is_theorem())
}

/// Extends a consistent list to a world by walking the closure in
/// canonical order and adding each undecided `q` when that stays
/// consistent, `Not q` otherwise.
pub fn extend_maximal_consistent(
    ctx: &ClosureContext,
    xs: &[Formula],
) -> Result<World, CompletenessError> {
    ctx.validate_list(xs)?;
    if !consistent(xs)? {
        return Err(CompletenessError::Inconsistent(xs.to_vec()));
    }
    let mut current = xs.to_vec();
    for q in ctx.closure() {
        let nq = Formula::not(q.clone());
        if current.contains(q) || current.contains(&nq) {
            continue;
        }
        current.push(q.clone());
        if !consistent(&current)? {
            current.pop();
            current.push(nq);
        }
    }
    let world = ctx.world_from_members(&current)?;
    Ok(world)
}

// ---------------------------------------------------------------------------
// Certificates

/// A countermodel in self-contained form: a Kripke model, the claimed
/// contents of each world, and a witness world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub target: Formula,
    pub model: Model,
    pub names: WorldNames,
    pub witness: WorldId,
    pub contents: BTreeMap<WorldId, BTreeSet<Formula>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateFailure {
    #[error("frame is not finite, irreflexive and transitive")]
    NotItf,
    #[error("witness {0} is not a world of the model")]
    UnknownWitness(String),
    #[error("world {0} has no recorded contents")]
    MissingContents(String),
    #[error("world {world} lists `{formula}`, which is outside the signed closure")]
    OutsideClosure { world: String, formula: String },
    #[error("world {world} decides `{formula}` {count} times")]
    Incomplete {
        world: String,
        formula: String,
        count: usize,
    },
    #[error("truth lemma fails at world {world} for `{formula}`: member {member}, holds {holds}")]
    TruthLemma {
        world: String,
        formula: String,
        member: bool,
        holds: bool,
    },
    #[error("witness {0} does not contain the negated target")]
    WitnessLacksNegation(String),
    #[error("target holds at witness {0}")]
    TargetHolds(String),
    #[error(transparent)]
    Closure(#[from] CompletenessError),
}

impl Certificate {
    /// Checks the frame class, world well-formedness, the truth lemma for
    /// every closure member, and falsification at the witness.
    pub fn verify(&self) -> Result<(), CertificateFailure> {
        let ctx = ClosureContext::new(&self.target)?;
        let name = |w: WorldId| self.names.name(w);
        if !is_itf(&self.model.frame) {
            return Err(CertificateFailure::NotItf);
        }
        if !self.model.frame.worlds.contains(&self.witness) {
            return Err(CertificateFailure::UnknownWitness(name(self.witness)));
        }
        for w in self.model.worlds() {
            let contents = self
                .contents
                .get(&w)
                .ok_or_else(|| CertificateFailure::MissingContents(name(w)))?;
            if let Some(stray) = contents.iter().find(|f| !ctx.in_signed_closure(f)) {
                return Err(CertificateFailure::OutsideClosure {
                    world: name(w),
                    formula: stray.to_string(),
                });
            }
            for q in ctx.closure() {
                let member = contents.contains(q);
                let count =
                    usize::from(member) + usize::from(contents.contains(&Formula::not(q.clone())));
                if count != 1 {
                    return Err(CertificateFailure::Incomplete {
                        world: name(w),
                        formula: q.to_string(),
                        count,
                    });
                }
                let holds = self.model.holds(q, w).expect("world is in the frame");
                if member != holds {
                    return Err(CertificateFailure::TruthLemma {
                        world: name(w),
                        formula: q.to_string(),
                        member,
                        holds,
                    });
                }
            }
        }
        let wit = &self.contents[&self.witness];
        if !wit.contains(&Formula::not(self.target.clone())) {
            return Err(CertificateFailure::WitnessLacksNegation(name(self.witness)));
        }
        if self.model.holds(&self.target, self.witness).unwrap_or(true) {
            return Err(CertificateFailure::TargetHolds(name(self.witness)));
        }
        Ok(())
    }

    pub fn to_file(&self) -> CertificateFile {
        CertificateFile {
            model: ModelFile::from_model(&self.model, &self.names),
            witness: self.names.name(self.witness),
            target: self.target.to_string(),
            world_contents: self
                .contents
                .iter()
                .map(|(&w, fs)| {
                    (
                        self.names.name(w),
                        fs.iter().map(Formula::to_string).collect(),
                    )
                })
                .collect(),
        }
    }
}

/// Model JSON extended with `witness`, `target` and `world_contents`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    #[serde(flatten)]
    pub model: ModelFile,
    pub witness: String,
    pub target: String,
    pub world_contents: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateFileError {
    #[error(transparent)]
    Model(#[from] KripkeError),
    #[error("in `{text}`: {source}")]
    Formula { text: String, source: ParseError },
}

impl CertificateFile {
    pub fn to_certificate(&self) -> Result<Certificate, CertificateFileError> {
        let (model, names) = self.model.to_model()?;
        let parse_text = |text: &String| {
            parse(text).map_err(|source| CertificateFileError::Formula {
                text: text.clone(),
                source,
            })
        };
        let lookup = |n: &String| {
            names
                .id(n)
                .ok_or_else(|| KripkeError::UnknownWorldName(n.clone()))
        };
        let mut contents = BTreeMap::new();
        for (world, fs) in &self.world_contents {
            let set = fs
                .iter()
                .map(parse_text)
                .collect::<Result<BTreeSet<_>, _>>()?;
            contents.insert(lookup(world)?, set);
        }
        Ok(Certificate {
            target: parse_text(&self.target)?,
            witness: lookup(&self.witness)?,
            model,
            names,
            contents,
        })
    }
}
