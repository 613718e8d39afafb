//! String rewriting over letters of the free group.
//!
//! Every rule must strictly decrease in length-lexicographic order, which
//! makes any rule set terminating. Confluence is not discovered here; the
//! caller asserts it with [`RewriteSystem::assume_confluent`], and
//! [`RewriteSystem::unjoinable_critical_pairs`] lets tests spot-check the
//! assertion locally.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("rule {0} does not decrease in length-lex order")]
    NotDecreasing(usize),
    #[error("rule {0} has an empty left-hand side")]
    EmptyLhs(usize),
    #[error("rule set is not marked confluent")]
    NotConfluent,
    #[error("rule {index} uses generator {generator} outside rank {rank}")]
    OutOfRange {
        index: usize,
        generator: usize,
        rank: usize,
    },
}

/// `lhs -> rhs` on raw letter strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
}

fn to_letters(signed: &[i64]) -> Vec<Letter> {
    signed
        .iter()
        .map(|&s| Letter::new(s.unsigned_abs() as usize - 1, s < 0))
        .collect()
}

fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteSystem {
    rank: usize,
    rules: Vec<(Vec<Letter>, Vec<Letter>)>,
    confluent: bool,
}

impl RewriteSystem {
    pub fn new(rank: usize, rules: &[Rule]) -> Result<RewriteSystem, RewriteError> {
        let mut out = Vec::with_capacity(rules.len());
        for (index, rule) in rules.iter().enumerate() {
            for &s in rule.lhs.iter().chain(&rule.rhs) {
                let g = s.unsigned_abs() as usize;
                if s == 0 || g > rank {
                    return Err(RewriteError::OutOfRange {
                        index,
                        generator: g,
                        rank,
                    });
                }
            }
            if rule.lhs.is_empty() {
                return Err(RewriteError::EmptyLhs(index));
            }
            let (lhs, rhs) = (to_letters(&rule.lhs), to_letters(&rule.rhs));
            if shortlex(&lhs, &rhs) != Ordering::Greater {
                return Err(RewriteError::NotDecreasing(index));
            }
            out.push((lhs, rhs));
        }
        Ok(RewriteSystem {
            rank,
            rules: out,
            confluent: false,
        })
    }

    /// Marks the system confluent on the caller's authority.
    pub fn assume_confluent(mut self) -> RewriteSystem {
        self.confluent = true;
        self
    }

    pub fn is_marked_confluent(&self) -> bool {
        self.confluent
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Leftmost-first rewriting until no rule applies.
    pub fn normal_form_letters(&self, input: &[Letter]) -> Vec<Letter> {
        let mut cur = input.to_vec();
        'outer: loop {
            for start in 0..cur.len() {
                for (lhs, rhs) in &self.rules {
                    if cur[start..].starts_with(lhs) {
                        cur.splice(start..start + lhs.len(), rhs.iter().copied());
                        continue 'outer;
                    }
                }
            }
            return cur;
        }
    }

    /// Normal form of a reduced word, freely reduced afterwards.
    pub fn normal_form(&self, w: &Word) -> Result<Word, RewriteError> {
        if !self.confluent {
            return Err(RewriteError::NotConfluent);
        }
        Ok(Word::from_letters(
            w.rank(),
            self.normal_form_letters(w.letters()),
        ))
    }

    /// Overlaps of left-hand sides whose two one-step rewrites do not reach
    /// the same normal form. Empty means locally confluent, hence confluent
    /// given termination.
    pub fn unjoinable_critical_pairs(&self) -> Vec<Vec<Letter>> {
        let mut bad = Vec::new();
        for (a, (l1, r1)) in self.rules.iter().enumerate() {
            for (b, (l2, r2)) in self.rules.iter().enumerate() {
                // Proper suffix of l1 equal to a prefix of l2.
                for k in 1..l1.len().min(l2.len() + 1) {
                    if a == b && k == l1.len() {
                        continue;
                    }
                    if l1[l1.len() - k..] != l2[..k] {
                        continue;
                    }
                    let mut overlap = l1.clone();
                    overlap.extend_from_slice(&l2[k..]);
                    let mut left = r1.clone();
                    left.extend_from_slice(&l2[k..]);
                    let mut right = l1[..l1.len() - k].to_vec();
                    right.extend_from_slice(r2);
                    if self.normal_form_letters(&left) != self.normal_form_letters(&right) {
                        bad.push(overlap);
                    }
                }
                // l2 inside l1.
                if a != b && l2.len() <= l1.len() {
                    for s in 0..=l1.len() - l2.len() {
                        if l1[s..s + l2.len()] != l2[..] {
                            continue;
                        }
                        let mut right = l1[..s].to_vec();
                        right.extend_from_slice(r2);
                        right.extend_from_slice(&l1[s + l2.len()..]);
                        if self.normal_form_letters(r1) != self.normal_form_letters(&right) {
                            bad.push(l1.clone());
                        }
                    }
                }
            }
        }
        bad
    }
}

/// `{aa → 1, bb → 1, a⁻¹ → a, b⁻¹ → b}`: the infinite dihedral group
/// `⟨a, b | a², b²⟩`. Every normal form alternates `a` and `b`.
pub fn infinite_dihedral_rules() -> Vec<Rule> {
    vec![
        Rule {
            lhs: vec![1, 1],
            rhs: vec![],
        },
        Rule {
            lhs: vec![2, 2],
            rhs: vec![],
        },
        Rule {
            lhs: vec![-1],
            rhs: vec![1],
        },
        Rule {
            lhs: vec![-2],
            rhs: vec![2],
        },
    ]
}
