//! Bisimulations between finite models.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kripke::{Model, WorldId, WorldNames};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BisimError {
    #[error("pair ({0}, {1}) leaves the world sets")]
    IllTypedPair(WorldId, WorldId),
    #[error("world {0} is not in the model")]
    UnknownWorld(WorldId),
}

/// Pairs `(world of m1, world of m2)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BisimRelation {
    pub pairs: BTreeSet<(WorldId, WorldId)>,
}

impl BisimRelation {
    pub fn contains(&self, w1: WorldId, w2: WorldId) -> bool {
        self.pairs.contains(&(w1, w2))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn to_named_pairs(&self, n1: &WorldNames, n2: &WorldNames) -> Vec<[String; 2]> {
        self.pairs
            .iter()
            .map(|&(a, b)| [n1.name(a), n2.name(b)])
            .collect()
    }
}

impl FromIterator<(WorldId, WorldId)> for BisimRelation {
    fn from_iter<I: IntoIterator<Item = (WorldId, WorldId)>>(iter: I) -> Self {
        BisimRelation {
            pairs: iter.into_iter().collect(),
        }
    }
}

/// `{"pairs": [["w0", "v0"], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairsFile {
    pub pairs: Vec<[String; 2]>,
}

/// Atoms mentioned by either valuation; everything else is false on both sides.
fn relevant_atoms<'a>(m1: &'a Model, m2: &'a Model) -> BTreeSet<&'a str> {
    m1.valuation
        .keys()
        .chain(m2.valuation.keys())
        .map(String::as_str)
        .collect()
}

fn atoms_agree(atoms: &BTreeSet<&str>, m1: &Model, w1: WorldId, m2: &Model, w2: WorldId) -> bool {
    atoms
        .iter()
        .all(|a| m1.atom_true(a, w1) == m2.atom_true(a, w2))
}

fn zig_zag(
    m1: &Model,
    w1: WorldId,
    m2: &Model,
    w2: WorldId,
    z: &BTreeSet<(WorldId, WorldId)>,
) -> bool {
    let forth = m1
        .frame
        .successors(w1)
        .all(|u1| m2.frame.successors(w2).any(|u2| z.contains(&(u1, u2))));
    let back = m2
        .frame
        .successors(w2)
        .all(|u2| m1.frame.successors(w1).any(|u1| z.contains(&(u1, u2))));
    forth && back
}

/// Every pair agrees on atoms, and each side's moves are matched by the
/// other inside `z`.
pub fn is_bisimulation(m1: &Model, m2: &Model, z: &BisimRelation) -> Result<bool, BisimError> {
    if let Some(&(a, b)) = z
        .pairs
        .iter()
        .find(|(a, b)| !m1.frame.worlds.contains(a) || !m2.frame.worlds.contains(b))
    {
        return Err(BisimError::IllTypedPair(a, b));
    }
    let atoms = relevant_atoms(m1, m2);
    Ok(z.pairs
        .iter()
        .all(|&(w1, w2)| atoms_agree(&atoms, m1, w1, m2, w2) && zig_zag(m1, w1, m2, w2, &z.pairs)))
}

/// Greatest bisimulation, by deleting violating pairs from the
/// atom-agreeing ones until nothing changes.
pub fn largest_bisimulation(m1: &Model, m2: &Model) -> BisimRelation {
    let atoms = relevant_atoms(m1, m2);
    let mut z: BTreeSet<(WorldId, WorldId)> = m1
        .worlds()
        .flat_map(|w1| m2.worlds().map(move |w2| (w1, w2)))
        .filter(|&(w1, w2)| atoms_agree(&atoms, m1, w1, m2, w2))
        .collect();
    loop {
        let doomed: Vec<(WorldId, WorldId)> = z
            .iter()
            .copied()
            .filter(|&(w1, w2)| !zig_zag(m1, w1, m2, w2, &z))
            .collect();
        if doomed.is_empty() {
            return BisimRelation { pairs: z };
        }
        for pair in doomed {
            z.remove(&pair);
        }
    }
}

pub fn bisimilar(m1: &Model, w1: WorldId, m2: &Model, w2: WorldId) -> Result<bool, BisimError> {
    if !m1.frame.worlds.contains(&w1) {
        return Err(BisimError::UnknownWorld(w1));
    }
    if !m2.frame.worlds.contains(&w2) {
        return Err(BisimError::UnknownWorld(w2));
    }
    Ok(largest_bisimulation(m1, m2).contains(w1, w2))
}

/// Every world of `m1` is bisimilar to some world of `m2`.
pub fn covers(m1: &Model, m2: &Model) -> bool {
    let z = largest_bisimulation(m1, m2);
    m1.worlds()
        .all(|w1| m2.worlds().any(|w2| z.contains(w1, w2)))
}
