//! Leaf holonomy: multipliers `q` of deck transformations fixing a leaf
//! `t = t0`, found by enumerating words in the generators.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num::{One, Zero};
use serde::Serialize;

use crate::model::Interval;
use crate::scalar::Rational;

/// The action `t ↦ qt + p` of a deck transformation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    pub q: Rational,
    pub p: Rational,
}

impl AffineMap {
    pub fn new(q: Rational, p: Rational) -> Self {
        Self { q, p }
    }

    pub fn identity() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }

    pub fn apply(&self, t: &Rational) -> Rational {
        &self.q * t + &self.p
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(&self.q * &other.q, &self.q * &other.p + &self.p)
    }

    pub fn inverse(&self) -> Self {
        let qi = self.q.recip();
        Self::new(qi.clone(), -(qi * &self.p))
    }

    pub fn is_translation(&self) -> bool {
        self.q.is_one()
    }

    /// Fixed point `p / (1 − q)` of a non-translation.
    pub fn fixed_point(&self) -> Option<Rational> {
        if self.is_translation() {
            None
        } else {
            Some(&self.p / (Rational::one() - &self.q))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HolonomyClass {
    Trivial,
    Infinite,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolonomyReport {
    /// Multipliers of the enumerated words fixing `t0`, as strings.
    pub multipliers: Vec<String>,
    pub classification: HolonomyClass,
    /// Why a trivial verdict is certain, when it is.
    pub certificate: Option<String>,
    pub words_enumerated: usize,
    pub max_word_length: usize,
}

/// Explores words of length up to `max_word_length` in the generators and
/// their inverses (breadth first, deduplicated by the resulting map).
pub fn holonomy_group(
    generators: &[AffineMap],
    t0: &Rational,
    max_word_length: usize,
    interval: &Interval,
) -> HolonomyReport {
    let mut letters: Vec<AffineMap> = Vec::with_capacity(2 * generators.len());
    for g in generators {
        letters.push(g.clone());
        letters.push(g.inverse());
    }
    let mut seen: HashSet<AffineMap> = HashSet::from([AffineMap::identity()]);
    let mut frontier: VecDeque<(AffineMap, usize)> = VecDeque::from([(AffineMap::identity(), 0)]);
    let mut multipliers: BTreeSet<Rational> = BTreeSet::from([Rational::one()]);
    while let Some((word, len)) = frontier.pop_front() {
        if len == max_word_length {
            continue;
        }
        for letter in &letters {
            let next = letter.compose(&word);
            if seen.insert(next.clone()) {
                if next.apply(t0) == *t0 {
                    multipliers.insert(next.q.clone());
                }
                frontier.push_back((next, len + 1));
            }
        }
    }
    let certificate = trivial_certificate(generators, interval);
    let nontrivial = multipliers.iter().any(|q| !q.is_one());
    let classification = if nontrivial {
        HolonomyClass::Infinite
    } else if certificate.is_some() {
        HolonomyClass::Trivial
    } else {
        HolonomyClass::Inconclusive
    };
    HolonomyReport {
        multipliers: multipliers.iter().map(|q| q.to_string()).collect(),
        classification,
        certificate: if classification == HolonomyClass::Trivial { certificate } else { None },
        words_enumerated: seen.len(),
        max_word_length,
    }
}

/// Cases where the stabilizer of every leaf is provably trivial.
fn trivial_certificate(generators: &[AffineMap], interval: &Interval) -> Option<String> {
    match generators {
        [] => Some("no generators".into()),
        [g] if !g.is_translation() => {
            let fixed = g.fixed_point()?;
            (!interval.contains(&fixed)).then(|| format!("single dilation with fixed point {fixed} outside {interval}"))
        }
        gs if gs.iter().all(|g| g.is_translation() && !g.p.is_zero()) => {
            Some("all generators are nonzero translations".into())
        }
        _ => None,
    }
}
