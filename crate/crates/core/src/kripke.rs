//! Finite Kripke frames and models, the forcing relation, frame-class
//! predicates, and brute-force validity on small frames.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{atoms, Formula};

pub type WorldId = usize;

/// Upper bound on `|atoms| * |worlds|` for exhaustive valuation checks.
pub const MAX_VALUATION_BITS: usize = 24;
/// Largest world count accepted by [`enumerate_frames`].
pub const MAX_ENUMERATION_WORLDS: usize = 4;
/// Largest world count accepted by [`itf_valid_small`].
pub const MAX_ORACLE_WORLDS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("unknown world {0}")]
    UnknownWorld(WorldId),
    #[error("unknown world name `{0}`")]
    UnknownWorldName(String),
    #[error("duplicate world name `{0}`")]
    DuplicateWorldName(String),
    #[error("relation pair ({0}, {1}) leaves the world set")]
    IllTypedPair(WorldId, WorldId),
    #[error("valuation of `{atom}` mentions world {world} outside the world set")]
    IllTypedValuation { atom: String, world: WorldId },
    #[error("frame has no worlds")]
    EmptyFrame,
    #[error("size guard: {atoms} atoms x {worlds} worlds exceeds {limit} valuation bits")]
    TooManyValuations {
        atoms: usize,
        worlds: usize,
        limit: usize,
    },
    #[error("size guard: {requested} worlds requested, at most {limit} supported")]
    TooManyWorlds { requested: usize, limit: usize },
}

/// A frame: a world set and an accessibility relation. Construction does
/// not reject ill-typed pairs; [`frame_report`] reports them.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Frame {
    pub worlds: BTreeSet<WorldId>,
    pub rel: BTreeSet<(WorldId, WorldId)>,
}

impl Frame {
    pub fn new(
        worlds: impl IntoIterator<Item = WorldId>,
        rel: impl IntoIterator<Item = (WorldId, WorldId)>,
    ) -> Frame {
        Frame {
            worlds: worlds.into_iter().collect(),
            rel: rel.into_iter().collect(),
        }
    }

    /// Successors of `w` inside the world set.
    pub fn successors(&self, w: WorldId) -> impl Iterator<Item = WorldId> + '_ {
        self.rel
            .range((w, WorldId::MIN)..=(w, WorldId::MAX))
            .map(|&(_, u)| u)
            .filter(|u| self.worlds.contains(u))
    }

    pub fn related(&self, x: WorldId, y: WorldId) -> bool {
        self.rel.contains(&(x, y))
    }

    pub fn is_nonempty(&self) -> bool {
        !self.worlds.is_empty()
    }

    pub fn is_well_typed(&self) -> bool {
        self.rel
            .iter()
            .all(|(x, y)| self.worlds.contains(x) && self.worlds.contains(y))
    }

    pub fn is_irreflexive(&self) -> bool {
        self.worlds.iter().all(|&x| !self.related(x, x))
    }

    pub fn is_transitive(&self) -> bool {
        self.rel.iter().all(|&(x, y)| {
            !self.worlds.contains(&x)
                || !self.worlds.contains(&y)
                || self.successors(y).all(|z| self.related(x, z))
        })
    }

    /// No directed cycle among the worlds, which on a finite carrier is
    /// the same as the converse relation being well-founded.
    pub fn is_acyclic(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Fresh,
            Open,
            Done,
        }
        let mut marks: BTreeMap<WorldId, Mark> =
            self.worlds.iter().map(|&w| (w, Mark::Fresh)).collect();
        for &root in &self.worlds {
            if marks[&root] != Mark::Fresh {
                continue;
            }
            // Iterative DFS; each stack entry holds the node and its pending successors.
            let mut stack: Vec<(WorldId, Vec<WorldId>)> =
                vec![(root, self.successors(root).collect())];
            marks.insert(root, Mark::Open);
            while let Some((node, pending)) = stack.last_mut() {
                match pending.pop() {
                    Some(next) => match marks[&next] {
                        Mark::Open => return false,
                        Mark::Done => {}
                        Mark::Fresh => {
                            marks.insert(next, Mark::Open);
                            let succ = self.successors(next).collect();
                            stack.push((next, succ));
                        }
                    },
                    None => {
                        marks.insert(*node, Mark::Done);
                        stack.pop();
                    }
                }
            }
        }
        true
    }

    /// Graphviz rendering, worlds labelled by id.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph frame {\n");
        for w in &self.worlds {
            let _ = writeln!(out, "  w{w};");
        }
        for (x, y) in &self.rel {
            let _ = writeln!(out, "  w{x} -> w{y};");
        }
        out.push_str("}\n");
        out
    }
}

/// A frame with a valuation. Atoms absent from the valuation are false
/// everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Model {
    pub frame: Frame,
    pub valuation: BTreeMap<String, BTreeSet<WorldId>>,
}

impl Model {
    /// Builds a model, rejecting valuation sets outside the world set.
    pub fn new(
        frame: Frame,
        valuation: BTreeMap<String, BTreeSet<WorldId>>,
    ) -> Result<Model, KripkeError> {
        for (atom, ws) in &valuation {
            if let Some(&world) = ws.iter().find(|w| !frame.worlds.contains(w)) {
                return Err(KripkeError::IllTypedValuation {
                    atom: atom.clone(),
                    world,
                });
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn worlds(&self) -> impl Iterator<Item = WorldId> + '_ {
        self.frame.worlds.iter().copied()
    }

    pub fn atom_true(&self, atom: &str, w: WorldId) -> bool {
        self.valuation.get(atom).is_some_and(|ws| ws.contains(&w))
    }

    /// Truth of `f` at world `w`.
    pub fn holds(&self, f: &Formula, w: WorldId) -> Result<bool, KripkeError> {
        if !self.frame.worlds.contains(&w) {
            return Err(KripkeError::UnknownWorld(w));
        }
        Ok(self.eval(f, w))
    }

    fn eval(&self, f: &Formula, w: WorldId) -> bool {
        match f {
            Formula::False => false,
            Formula::True => true,
            Formula::Atom(a) => self.atom_true(a, w),
            Formula::Not(a) => !self.eval(a, w),
            Formula::And(a, b) => self.eval(a, w) && self.eval(b, w),
            Formula::Or(a, b) => self.eval(a, w) || self.eval(b, w),
            Formula::Imp(a, b) => !self.eval(a, w) || self.eval(b, w),
            Formula::Iff(a, b) => self.eval(a, w) == self.eval(b, w),
            Formula::Box(a) => self.frame.successors(w).all(|u| self.eval(a, u)),
        }
    }

    /// `f` holds at every world under this model's valuation.
    pub fn holds_in(&self, f: &Formula) -> bool {
        self.worlds().all(|w| self.eval(f, w))
    }

    /// Renames every world through `map`, which must be injective.
    pub fn relabel(&self, map: impl Fn(WorldId) -> WorldId) -> Model {
        let frame = Frame::new(
            self.frame.worlds.iter().map(|&w| map(w)),
            self.frame.rel.iter().map(|&(x, y)| (map(x), map(y))),
        );
        let valuation = self
            .valuation
            .iter()
            .map(|(a, ws)| (a.clone(), ws.iter().map(|&w| map(w)).collect()))
            .collect();
        Model { frame, valuation }
    }

    /// Graphviz rendering; each node lists the atoms true there.
    pub fn to_dot(&self, names: &WorldNames) -> String {
        let mut out = String::from("digraph model {\n");
        for w in self.worlds() {
            let true_atoms: Vec<&str> = self
                .valuation
                .iter()
                .filter(|(_, ws)| ws.contains(&w))
                .map(|(a, _)| a.as_str())
                .collect();
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{}\\n{}\"];",
                names.name(w),
                names.name(w),
                true_atoms.join(", ")
            );
        }
        for &(x, y) in &self.frame.rel {
            let _ = writeln!(out, "  \"{}\" -> \"{}\";", names.name(x), names.name(y));
        }
        out.push_str("}\n");
        out
    }
}

/// Free-function form of [`Model::holds`].
pub fn holds(m: &Model, f: &Formula, w: WorldId) -> Result<bool, KripkeError> {
    m.holds(f, w)
}

/// Free-function form of [`Model::holds_in`].
pub fn holds_in(m: &Model, f: &Formula) -> bool {
    m.holds_in(f)
}

/// Every valuation of `atoms(f)` over the frame's worlds, as a model.
fn for_all_valuations(
    fr: &Frame,
    f: &Formula,
    mut check: impl FnMut(&Model) -> bool,
) -> Result<bool, KripkeError> {
    let names: Vec<String> = atoms(f).into_iter().collect();
    let worlds: Vec<WorldId> = fr.worlds.iter().copied().collect();
    let bits = names.len() * worlds.len();
    if bits > MAX_VALUATION_BITS {
        return Err(KripkeError::TooManyValuations {
            atoms: names.len(),
            worlds: worlds.len(),
            limit: MAX_VALUATION_BITS,
        });
    }
    let mut model = Model {
        frame: fr.clone(),
        valuation: BTreeMap::new(),
    };
    for code in 0u64..(1u64 << bits) {
        model.valuation.clear();
        for (ai, name) in names.iter().enumerate() {
            let set = worlds
                .iter()
                .enumerate()
                .filter(|(wi, _)| code >> (ai * worlds.len() + wi) & 1 == 1)
                .map(|(_, &w)| w)
                .collect();
            model.valuation.insert(name.clone(), set);
        }
        if !check(&model) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f` holds at every world of `fr` under every valuation of its atoms.
pub fn valid_on_frame(fr: &Frame, f: &Formula) -> Result<bool, KripkeError> {
    if !fr.is_nonempty() {
        return Err(KripkeError::EmptyFrame);
    }
    for_all_valuations(fr, f, |m| m.holds_in(f))
}

/// Component-wise frame properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameReport {
    pub nonempty: bool,
    pub relation_well_typed: bool,
    pub finite: bool,
    pub irreflexive: bool,
    pub transitive: bool,
    pub acyclic: bool,
    pub validates_lob: bool,
}

/// The single-atom Löb instance `Box (Box p --> p) --> Box p`.
pub fn lob_instance() -> Formula {
    let p = Formula::atom("p");
    Formula::imp(
        Formula::boxed(Formula::imp(Formula::boxed(p.clone()), p.clone())),
        Formula::boxed(p),
    )
}

pub fn frame_report(fr: &Frame) -> Result<FrameReport, KripkeError> {
    let validates_lob = if fr.is_nonempty() {
        valid_on_frame(fr, &lob_instance())?
    } else {
        // Vacuous: there is no world at which the instance could fail.
        true
    };
    Ok(FrameReport {
        nonempty: fr.is_nonempty(),
        relation_well_typed: fr.is_well_typed(),
        finite: true,
        irreflexive: fr.is_irreflexive(),
        transitive: fr.is_transitive(),
        acyclic: fr.is_acyclic(),
        validates_lob,
    })
}

/// Nonempty, well-typed, finite, irreflexive, transitive.
pub fn is_itf(fr: &Frame) -> bool {
    fr.is_nonempty() && fr.is_well_typed() && fr.is_irreflexive() && fr.is_transitive()
}

/// Iterator over every frame on `{0..k-1}` for `k = 1..=n`.
#[derive(Debug, Clone)]
pub struct FrameEnumerator {
    max_worlds: usize,
    worlds: usize,
    code: u64,
}

impl Iterator for FrameEnumerator {
    type Item = Frame;

    fn next(&mut self) -> Option<Frame> {
        if self.worlds > self.max_worlds {
            return None;
        }
        let k = self.worlds;
        let rel = (0..k * k)
            .filter(|bit| self.code >> bit & 1 == 1)
            .map(|bit| (bit / k, bit % k));
        let frame = Frame::new(0..k, rel);
        self.code += 1;
        if self.code == 1u64 << (k * k) {
            self.worlds += 1;
            self.code = 0;
        }
        Some(frame)
    }
}

pub fn enumerate_frames(n: usize) -> Result<FrameEnumerator, KripkeError> {
    if n > MAX_ENUMERATION_WORLDS {
        return Err(KripkeError::TooManyWorlds {
            requested: n,
            limit: MAX_ENUMERATION_WORLDS,
        });
    }
    Ok(FrameEnumerator {
        max_worlds: n,
        worlds: 1,
        code: 0,
    })
}

/// `f` is valid on every ITF frame with at most `n` worlds.
pub fn itf_valid_small(f: &Formula, n: usize) -> Result<bool, KripkeError> {
    if n > MAX_ORACLE_WORLDS {
        return Err(KripkeError::TooManyWorlds {
            requested: n,
            limit: MAX_ORACLE_WORLDS,
        });
    }
    for fr in enumerate_frames(n)?.filter(is_itf) {
        if !valid_on_frame(&fr, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// JSON interface

/// Display names for world ids; ids without a name print as `w<id>`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WorldNames {
    names: BTreeMap<WorldId, String>,
}

impl WorldNames {
    pub fn name(&self, w: WorldId) -> String {
        self.names
            .get(&w)
            .cloned()
            .unwrap_or_else(|| format!("w{w}"))
    }

    pub fn id(&self, name: &str) -> Option<WorldId> {
        self.names
            .iter()
            .find(|(_, n)| n.as_str() == name)
            .map(|(&w, _)| w)
    }
}

/// `{"worlds": [...], "rel": [[a, b], ...], "val": {"p": [...]}}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub rel: Vec<[String; 2]>,
    #[serde(default)]
    pub val: BTreeMap<String, Vec<String>>,
}

impl ModelFile {
    /// Maps names to ids in listing order.
    pub fn to_model(&self) -> Result<(Model, WorldNames), KripkeError> {
        let mut names = WorldNames::default();
        let mut ids = BTreeMap::new();
        for (i, name) in self.worlds.iter().enumerate() {
            if ids.insert(name.as_str(), i).is_some() {
                return Err(KripkeError::DuplicateWorldName(name.clone()));
            }
            names.names.insert(i, name.clone());
        }
        let lookup = |n: &String| {
            ids.get(n.as_str())
                .copied()
                .ok_or_else(|| KripkeError::UnknownWorldName(n.clone()))
        };
        let rel = self
            .rel
            .iter()
            .map(|[x, y]| Ok((lookup(x)?, lookup(y)?)))
            .collect::<Result<BTreeSet<_>, KripkeError>>()?;
        let valuation = self
            .val
            .iter()
            .map(|(a, ws)| Ok((a.clone(), ws.iter().map(lookup).collect::<Result<_, _>>()?)))
            .collect::<Result<BTreeMap<_, _>, KripkeError>>()?;
        let frame = Frame {
            worlds: (0..self.worlds.len()).collect(),
            rel,
        };
        Ok((Model::new(frame, valuation)?, names))
    }

    pub fn from_model(m: &Model, names: &WorldNames) -> ModelFile {
        ModelFile {
            worlds: m.worlds().map(|w| names.name(w)).collect(),
            rel: m
                .frame
                .rel
                .iter()
                .map(|&(x, y)| [names.name(x), names.name(y)])
                .collect(),
            val: m
                .valuation
                .iter()
                .map(|(a, ws)| (a.clone(), ws.iter().map(|&w| names.name(w)).collect()))
                .collect(),
        }
    }
}
