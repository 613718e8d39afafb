//! Area of a relation by search over relator splices.
//!
//! A state is a reduced word. A move splices one symmetrized relator into
//! the current word at some position and freely reduces, at cost 1. The
//! cheapest path from `w` to the empty word is converted into a
//! [`Certificate`] for `w`.
//!
//! The search is breadth-first by cost, bounded by an admissible lower bound
//! on the remaining cost: a move changes the exponent sum of each generator
//! by at most the largest absolute exponent sum of that generator in a
//! relator. Length gives no such bound, since the free reduction after a
//! splice can cascade past the inserted letters (`a·r·a⁻¹` has area 1
//! whatever the length of `a`). Rounds
//! run with an increasing total-cost bound until the empty word is reached
//! or the space within the length cap is exhausted. Within a round each
//! layer is sorted length-lex and expanded in fixed-size chunks whose
//! successors are merged in order, so results (certificate and stats
//! included) do not depend on the number of worker threads.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certificate::{Certificate, CertificateError, Factor, Sign};
use crate::presentation::{Presentation, SymmetrizedRelators};
use crate::word::{push_reduced, Letter, Word};

const CHUNK: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AreaError {
    #[error("presentation has no relators")]
    NoRelators,
    #[error("length cap {length_cap} is below the word length {word_len}")]
    LengthCapTooSmall { length_cap: usize, word_len: usize },
    #[error("node cap must be positive")]
    ZeroNodeCap,
    #[error("word over {found} generators, presentation over {expected}")]
    RankMismatch { found: usize, expected: usize },
    #[error("search produced a certificate that does not verify (bug)")]
    CertificateMismatch,
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SearchCaps {
    /// Longest intermediate word allowed.
    pub length_cap: usize,
    /// Most distinct states stored in one round.
    pub node_cap: usize,
}

impl SearchCaps {
    pub fn new(length_cap: usize, node_cap: usize) -> SearchCaps {
        SearchCaps {
            length_cap,
            node_cap,
        }
    }

    pub fn with_length_cap(self, length_cap: usize) -> SearchCaps {
        SearchCaps { length_cap, ..self }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct SearchStats {
    /// Distinct states stored in the final round.
    pub states_visited: usize,
    /// States expanded over all rounds.
    pub states_expanded: usize,
    pub rounds: usize,
    pub length_cap: usize,
    pub node_cap_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaResult {
    /// Number of factors in `certificate`.
    pub value: usize,
    /// The value is minimal over derivations whose intermediate words stay
    /// within the length cap. False when the node cap cut the search short
    /// and the value is only an upper bound.
    pub exact: bool,
    /// Proven lower bound on the true area, independent of caps.
    pub lower_bound: usize,
    pub certificate: Certificate,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AreaOutcome {
    Found(AreaResult),
    NotFound {
        stats: SearchStats,
        /// Every state within the length cap was explored, so no derivation
        /// within the cap exists.
        exhaustive: bool,
    },
}

impl AreaOutcome {
    pub fn found(self) -> Option<AreaResult> {
        match self {
            AreaOutcome::Found(r) => Some(r),
            AreaOutcome::NotFound { .. } => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            AreaOutcome::Found(r) => &r.stats,
            AreaOutcome::NotFound { stats, .. } => stats,
        }
    }
}

/// Precomputed move table for repeated searches over one presentation.
#[derive(Debug, Clone)]
pub struct AreaSearcher<'p> {
    presentation: &'p Presentation,
    sym: SymmetrizedRelators,
    move_sums: Vec<Vec<i64>>,
    max_move_len: usize,
    /// Largest |exponent sum| of each generator over the moves.
    exp_step: Vec<i64>,
}

struct Node {
    word: Box<[Letter]>,
    parent: u32,
    mv: u32,
    pos: u32,
}

type Successor = (Box<[Letter]>, u32, u32);

struct Expansion {
    successors: Vec<Successor>,
    pruned: bool,
    goal: bool,
}

enum Round {
    Goal {
        parent: u32,
        mv: u32,
        pos: u32,
        exact: bool,
    },
    Exhausted {
        pruned: bool,
    },
    CapHit,
}

fn div_ceil(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn shortlex(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl<'p> AreaSearcher<'p> {
    pub fn new(presentation: &'p Presentation) -> Result<AreaSearcher<'p>, AreaError> {
        if presentation.relators().is_empty() {
            return Err(AreaError::NoRelators);
        }
        let sym = presentation.symmetrize();
        let move_sums: Vec<Vec<i64>> = sym.moves().iter().map(Word::exponent_sums).collect();
        let mut exp_step = vec![0i64; presentation.rank()];
        for sums in &move_sums {
            for (g, s) in sums.iter().enumerate() {
                exp_step[g] = exp_step[g].max(s.abs());
            }
        }
        Ok(AreaSearcher {
            presentation,
            max_move_len: sym.max_len(),
            sym,
            move_sums,
            exp_step,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        self.presentation
    }

    fn exponent_bound(&self, sums: &[i64]) -> Option<usize> {
        let mut h = 0;
        for (g, &s) in sums.iter().enumerate() {
            if s == 0 {
                continue;
            }
            let step = self.exp_step[g];
            if step == 0 {
                return None;
            }
            h = h.max(div_ceil(s.unsigned_abs() as usize, step as usize));
        }
        Some(h)
    }

    /// Lower bound on the area of `w`; `None` when `w` cannot be a relation
    /// because some exponent sum no relator can change is nonzero.
    pub fn lower_bound(&self, w: &Word) -> Option<usize> {
        self.exponent_bound(&w.exponent_sums())
    }

    /// Searches for a cheapest derivation of `w` from the empty word.
    pub fn search(&self, w: &Word, caps: SearchCaps) -> Result<AreaOutcome, AreaError> {
        if w.rank() != self.presentation.rank() {
            return Err(AreaError::RankMismatch {
                found: w.rank(),
                expected: self.presentation.rank(),
            });
        }
        if caps.length_cap < w.len() {
            return Err(AreaError::LengthCapTooSmall {
                length_cap: caps.length_cap,
                word_len: w.len(),
            });
        }
        if caps.node_cap == 0 {
            return Err(AreaError::ZeroNodeCap);
        }
        let mut stats = SearchStats {
            length_cap: caps.length_cap,
            ..SearchStats::default()
        };
        if w.is_empty() {
            stats.states_visited = 1;
            return Ok(AreaOutcome::Found(AreaResult {
                value: 0,
                exact: true,
                lower_bound: 0,
                certificate: Certificate::default(),
                stats,
            }));
        }
        let Some(mut bound) = self.lower_bound(w) else {
            stats.states_visited = 1;
            return Ok(AreaOutcome::NotFound {
                stats,
                exhaustive: true,
            });
        };
        let lower_bound = bound;
        loop {
            stats.rounds += 1;
            let mut nodes = vec![Node {
                word: w.letters().into(),
                parent: u32::MAX,
                mv: 0,
                pos: 0,
            }];
            let outcome = self.round(&mut nodes, bound, caps, &mut stats);
            stats.states_visited += nodes.len();
            match outcome {
                Round::Goal {
                    parent,
                    mv,
                    pos,
                    exact,
                } => {
                    let certificate = self.certificate(&nodes, parent, mv, pos);
                    if certificate.expand(self.presentation)? != *w {
                        return Err(AreaError::CertificateMismatch);
                    }
                    return Ok(AreaOutcome::Found(AreaResult {
                        value: certificate.size(),
                        exact,
                        lower_bound,
                        certificate,
                        stats,
                    }));
                }
                Round::Exhausted { pruned: true } => bound += 1,
                Round::Exhausted { pruned: false } => {
                    return Ok(AreaOutcome::NotFound {
                        stats,
                        exhaustive: true,
                    })
                }
                Round::CapHit => {
                    stats.node_cap_hit = true;
                    return Ok(AreaOutcome::NotFound {
                        stats,
                        exhaustive: false,
                    });
                }
            }
        }
    }

    fn expand(
        &self,
        word: &[Letter],
        depth: usize,
        bound: usize,
        caps: SearchCaps,
        visited: &HashSet<Box<[Letter]>>,
    ) -> Expansion {
        let mut sums = vec![0i64; self.presentation.rank()];
        for l in word {
            sums[l.generator()] += l.sign();
        }
        let mut out = Expansion {
            successors: Vec::new(),
            pruned: false,
            goal: false,
        };
        let mut next_sums = sums.clone();
        let mut buf: Vec<Letter> = Vec::with_capacity(caps.length_cap + self.max_move_len);
        for (k, mv) in self.sym.moves().iter().enumerate() {
            for (g, s) in next_sums.iter_mut().enumerate() {
                *s = sums[g] + self.move_sums[k][g];
            }
            let Some(he) = self.exponent_bound(&next_sums) else {
                continue;
            };
            if depth + 1 + he > bound {
                out.pruned = true;
                continue;
            }
            for pos in 0..=word.len() {
                buf.clear();
                buf.extend_from_slice(&word[..pos]);
                for &l in mv.letters() {
                    push_reduced(&mut buf, l);
                }
                for &l in &word[pos..] {
                    push_reduced(&mut buf, l);
                }
                if buf.len() > caps.length_cap {
                    continue;
                }
                if buf.is_empty() {
                    out.successors.push((Box::new([]), k as u32, pos as u32));
                    out.goal = true;
                    return out;
                }
                if visited.contains(buf.as_slice()) {
                    continue;
                }
                out.successors
                    .push((buf.as_slice().into(), k as u32, pos as u32));
            }
        }
        out
    }

    fn round(
        &self,
        nodes: &mut Vec<Node>,
        bound: usize,
        caps: SearchCaps,
        stats: &mut SearchStats,
    ) -> Round {
        let mut visited: HashSet<Box<[Letter]>> = HashSet::new();
        visited.insert(nodes[0].word.clone());
        let mut layer: Vec<u32> = vec![0];
        let mut depth = 0;
        let mut pruned = false;
        let mut cap_hit = false;
        // After the cap is hit, one further layer is scanned for the goal only.
        let mut goal_only_layers = 0;
        while !layer.is_empty() {
            layer.sort_by(|&a, &b| shortlex(&nodes[a as usize].word, &nodes[b as usize].word));
            let mut next: Vec<u32> = Vec::new();
            for chunk in layer.chunks(CHUNK) {
                let expansions: Vec<Expansion> = chunk
                    .par_iter()
                    .map(|&id| self.expand(&nodes[id as usize].word, depth, bound, caps, &visited))
                    .collect();
                stats.states_expanded += chunk.len();
                for (&id, exp) in chunk.iter().zip(expansions) {
                    pruned |= exp.pruned;
                    for (succ, mv, pos) in exp.successors {
                        if succ.is_empty() {
                            return Round::Goal {
                                parent: id,
                                mv,
                                pos,
                                exact: !cap_hit,
                            };
                        }
                        if cap_hit || visited.contains(&succ) {
                            continue;
                        }
                        if visited.len() >= caps.node_cap {
                            cap_hit = true;
                            continue;
                        }
                        visited.insert(succ.clone());
                        next.push(nodes.len() as u32);
                        nodes.push(Node {
                            word: succ,
                            parent: id,
                            mv,
                            pos,
                        });
                    }
                }
            }
            if cap_hit {
                if goal_only_layers == 1 {
                    break;
                }
                goal_only_layers += 1;
            }
            layer = next;
            depth += 1;
        }
        if cap_hit {
            Round::CapHit
        } else {
            Round::Exhausted { pruned }
        }
    }

    fn certificate(&self, nodes: &[Node], parent: u32, mv: u32, pos: u32) -> Certificate {
        let mut steps = vec![(parent, mv, pos)];
        let mut cur = parent;
        while nodes[cur as usize].parent != u32::MAX {
            let n = &nodes[cur as usize];
            steps.push((n.parent, n.mv, n.pos));
            cur = n.parent;
        }
        steps.reverse();
        let rank = self.presentation.rank();
        let factors = steps
            .into_iter()
            .map(|(from, mv, pos)| {
                // Splicing rotate(r^s, k) at p multiplies on the left by
                // x·ρ·x⁻¹ with x the length-p prefix; ρ = α⁻¹·r^s·α where α
                // is the length-k prefix of r^s. The factor of the original
                // word is the inverse, (x·α⁻¹)·r^{-s}·(x·α⁻¹)⁻¹.
                let origin = self.sym.origin(mv as usize);
                let word = &nodes[from as usize].word;
                let prefix = Word::from_reduced(rank, word[..pos as usize].to_vec());
                let base = self.presentation.relators()[origin.relator].pow(origin.sign as i64);
                let alpha = Word::from_reduced(rank, base.letters()[..origin.rotation].to_vec());
                Factor {
                    conjugator: prefix.mul(&alpha.inverse()),
                    relator: origin.relator,
                    sign: Sign::from_i8(-origin.sign),
                }
            })
            .collect();
        Certificate::new(factors)
    }
}

/// `Area_R(w)` restricted to derivations within `caps`.
pub fn area_search(p: &Presentation, w: &Word, caps: SearchCaps) -> Result<AreaOutcome, AreaError> {
    AreaSearcher::new(p)?.search(w, caps)
}

/// A search repeated with the length cap doubled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Escalation {
    pub first: AreaOutcome,
    pub doubled: AreaOutcome,
    /// Both runs found a derivation and the values agree.
    pub stable: bool,
}

pub fn area_escalate(
    p: &Presentation,
    w: &Word,
    caps: SearchCaps,
) -> Result<Escalation, AreaError> {
    let searcher = AreaSearcher::new(p)?;
    let first = searcher.search(w, caps)?;
    let doubled = searcher.search(w, caps.with_length_cap(caps.length_cap.saturating_mul(2)))?;
    let stable = match (&first, &doubled) {
        (AreaOutcome::Found(a), AreaOutcome::Found(b)) => a.value == b.value,
        _ => false,
    };
    Ok(Escalation {
        first,
        doubled,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_certificate;
    use crate::presentation::parse_presentation;

    const CAPS: SearchCaps = SearchCaps {
        length_cap: 12,
        node_cap: 1_000_000,
    };

    fn area(p: &Presentation, w: &str) -> AreaOutcome {
        area_search(p, &p.parse_word(w).unwrap(), CAPS).unwrap()
    }

    fn value(p: &Presentation, w: &str) -> usize {
        let r = area(p, w).found().expect("found");
        assert!(verify_certificate(p, &p.parse_word(w).unwrap(), &r.certificate).unwrap());
        assert!(r.exact);
        r.value
    }

    #[test]
    fn cyclic_examples() {
        let p = parse_presentation("gens: a\nrels: a^3").unwrap();
        assert_eq!(value(&p, "a^3"), 1);
        assert_eq!(value(&p, "a^6"), 2);
        assert_eq!(value(&p, "a^-9"), 3);
        assert_eq!(value(&p, "1"), 0);
        match area(&p, "a") {
            AreaOutcome::NotFound { exhaustive, .. } => assert!(exhaustive),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn commutator_examples() {
        let p = parse_presentation("gens: x y\nrels: [x,y]").unwrap();
        assert_eq!(value(&p, "x y x^-1 y^-1"), 1);
        assert_eq!(value(&p, "1"), 0);
        assert_eq!(value(&p, "x y^2 x^-1 y^-2"), 2);
        assert_eq!(value(&p, "[x^2, y]"), 2);
        // x is not a relation and cannot become one: exponent sums are invariant.
        match area(&p, "x") {
            AreaOutcome::NotFound { exhaustive, stats } => {
                assert!(exhaustive);
                assert_eq!(stats.states_visited, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dihedral_examples() {
        let p = parse_presentation("gens: a b\nrels: a^2; b^2; (a b)^3").unwrap();
        assert_eq!(value(&p, "(a b)^3"), 1);
        assert_eq!(value(&p, "a a b b"), 2);
        assert_eq!(value(&p, "a^6"), 3);
        assert_eq!(value(&p, "b a b a b a"), 1);
        assert!(area(&p, "a B a b").found().is_none());
    }

    #[test]
    fn conjugated_relator_has_area_one() {
        let p = parse_presentation("gens: a b\nrels: a^2; b^2; (a b)^3").unwrap();
        assert_eq!(value(&p, "a (a b)^-3 a^-1"), 1);
        assert_eq!(value(&p, "b a (a b)^3 a^-1 b^-1"), 1);
    }

    #[test]
    fn cap_errors() {
        let p = parse_presentation("gens: a\nrels: a^3").unwrap();
        let w = p.parse_word("a^6").unwrap();
        assert!(matches!(
            area_search(&p, &w, SearchCaps::new(5, 10)),
            Err(AreaError::LengthCapTooSmall { .. })
        ));
        assert_eq!(
            area_search(&p, &w, SearchCaps::new(6, 0)),
            Err(AreaError::ZeroNodeCap)
        );
        let free = parse_presentation("gens: a\nrels:").unwrap();
        assert_eq!(area_search(&free, &w, CAPS), Err(AreaError::NoRelators));
    }

    #[test]
    fn node_cap_gives_upper_bound_or_not_found() {
        let p = parse_presentation("gens: x y\nrels: [x,y]").unwrap();
        let w = p.parse_word("[x^2, y^2]").unwrap();
        let tight = area_search(&p, &w, SearchCaps::new(12, 1)).unwrap();
        assert!(tight.stats().node_cap_hit);
        if let AreaOutcome::Found(r) = tight {
            assert!(!r.exact);
            assert!(verify_certificate(&p, &w, &r.certificate).unwrap());
        }
        let full = area_search(&p, &w, SearchCaps::new(12, 1_000_000)).unwrap();
        assert_eq!(full.found().unwrap().value, 4);
    }

    #[test]
    fn escalation() {
        let p = parse_presentation("gens: x y\nrels: [x,y]").unwrap();
        let e = area_escalate(
            &p,
            &p.parse_word("[x^2, y]").unwrap(),
            SearchCaps::new(6, 100_000),
        )
        .unwrap();
        assert!(e.stable);
        assert_eq!(e.doubled.found().unwrap().value, 2);
        let a = parse_presentation("gens: a\nrels: a^3").unwrap();
        let e = area_escalate(&a, &a.parse_word("a").unwrap(), SearchCaps::new(4, 1000)).unwrap();
        assert!(!e.stable);
    }

    #[test]
    fn deterministic_across_pools() {
        let p = parse_presentation("gens: a b\nrels: a^2; b^2; (a b)^3").unwrap();
        let w = p.parse_word("a a b b a a").unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| area_search(&p, &w, CAPS).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
