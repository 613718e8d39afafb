//! Todd–Coxeter enumeration of the cosets of the trivial subgroup.
//!
//! HLT strategy: cosets are processed in creation order; at each live coset
//! every relator is scanned and filled, then any missing generator images
//! are defined. Coincidences are processed immediately with a union-find
//! merge that always keeps the lower coset number. The run is fully
//! deterministic for a given presentation and coset limit.

use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("coset limit {max_cosets} exceeded before the table closed")]
    Overflow { max_cosets: usize },
    #[error("coset limit must be at least 1")]
    InvalidLimit,
    #[error("table is incomplete")]
    Incomplete,
    #[error("word over {found} generators traced in a table over {expected}")]
    RankMismatch { found: usize, expected: usize },
}

const NONE: usize = usize::MAX;

/// The right-regular action of a finite group on itself, coset 0 being the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    rank: usize,
    /// `action[c][letter.code()]`.
    action: Vec<Vec<usize>>,
    complete: bool,
}

impl CayleyTable {
    pub fn cosets(&self) -> usize {
        self.action.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn image(&self, coset: usize, letter: Letter) -> usize {
        self.action[coset][letter.code()]
    }

    /// Coset reached from `start` by reading `w`.
    pub fn trace(&self, start: usize, w: &Word) -> Result<usize, CosetError> {
        if !self.complete {
            return Err(CosetError::Incomplete);
        }
        if w.rank() != self.rank {
            return Err(CosetError::RankMismatch {
                found: w.rank(),
                expected: self.rank,
            });
        }
        Ok(w.letters().iter().fold(start, |c, &l| self.image(c, l)))
    }

    /// True iff `w` is the identity of the group.
    pub fn is_trivial(&self, w: &Word) -> Result<bool, CosetError> {
        Ok(self.trace(0, w)? == 0)
    }
}

struct Enumerator {
    width: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    max_cosets: usize,
}

impl Enumerator {
    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut k = c;
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), CosetError> {
        if self.table.len() >= self.max_cosets {
            return Err(CosetError::Overflow {
                max_cosets: self.max_cosets,
            });
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.width]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.rep(a), self.rep(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut k = 0;
        while k < self.queue.len() {
            let e = self.queue[k];
            k += 1;
            for x in 0..self.width {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                if self.table[f][x ^ 1] == e {
                    self.table[f][x ^ 1] = NONE;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t);
                } else if self.table[f1][x ^ 1] != NONE {
                    let t = self.table[f1][x ^ 1];
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][x ^ 1] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, r: &[usize]) -> Result<(), CosetError> {
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = r.len();
        loop {
            while i < j && self.table[f][r[i]] != NONE {
                f = self.table[f][r[i]];
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.table[b][r[j - 1] ^ 1] != NONE {
                b = self.table[b][r[j - 1] ^ 1];
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.table[f][r[i]] = b;
                self.table[b][r[i] ^ 1] = f;
                return Ok(());
            }
            self.define(f, r[i])?;
        }
    }
}

/// Enumerates cosets of the trivial subgroup of the presented group.
///
/// Fails with [`CosetError::Overflow`] once more than `max_cosets` cosets have
/// been defined in total (live or dead); an infinite group always overflows.
pub fn coset_enumerate(p: &Presentation, max_cosets: usize) -> Result<CayleyTable, CosetError> {
    if max_cosets == 0 {
        return Err(CosetError::InvalidLimit);
    }
    let width = 2 * p.rank();
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| r.letters().iter().map(|l| l.code()).collect())
        .collect();
    let mut e = Enumerator {
        width,
        table: vec![vec![NONE; width]],
        parent: vec![0],
        queue: Vec::new(),
        max_cosets,
    };
    let mut c = 0;
    while c < e.table.len() {
        for r in &relators {
            if !e.is_live(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        for x in 0..width {
            if !e.is_live(c) {
                break;
            }
            if e.table[c][x] == NONE {
                e.define(c, x)?;
            }
        }
        c += 1;
    }

    // Compact the live cosets, preserving creation order.
    let mut renumber = vec![NONE; e.table.len()];
    let mut live = Vec::new();
    for (k, slot) in renumber.iter_mut().enumerate() {
        if e.is_live(k) {
            *slot = live.len();
            live.push(k);
        }
    }
    let action: Vec<Vec<usize>> = live
        .iter()
        .map(|&k| {
            (0..width)
                .map(|x| {
                    let t = e.table[k][x];
                    debug_assert!(t != NONE);
                    let t = e.rep(t);
                    renumber[t]
                })
                .collect()
        })
        .collect();
    Ok(CayleyTable {
        rank: p.rank(),
        action,
        complete: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;
    use crate::word::enumerate_ball;

    fn pres(t: &str) -> Presentation {
        parse_presentation(t).unwrap()
    }

    fn assert_permutation_table(t: &CayleyTable) {
        for x in 0..2 * t.rank() {
            let mut seen = vec![false; t.cosets()];
            for c in 0..t.cosets() {
                let d = t.action[c][x];
                assert!(!seen[d]);
                seen[d] = true;
                assert_eq!(t.action[d][x ^ 1], c);
            }
        }
    }

    #[test]
    fn cyclic_five() {
        let p = pres("gens: a\nrels: a^5");
        let t = coset_enumerate(&p, 100).unwrap();
        assert_eq!(t.cosets(), 5);
        assert_permutation_table(&t);
        for w in enumerate_ball(1, 6) {
            let exp = w.exponent_sums()[0];
            assert_eq!(t.is_trivial(&w).unwrap(), exp.rem_euclid(5) == 0, "{w:?}");
        }
    }

    #[test]
    fn dihedral_order_six() {
        let p = pres("gens: a b\nrels: a^2; b^2; (a b)^3");
        let t = coset_enumerate(&p, 1000).unwrap();
        assert_eq!(t.cosets(), 6);
        assert_permutation_table(&t);
        for r in p.relators() {
            assert!(t.is_trivial(r).unwrap());
        }
        // The six normal forms 1, a, b, ab, ba, aba land on distinct cosets.
        let forms = ["1", "a", "b", "a b", "b a", "a b a"];
        let mut cosets: Vec<usize> = forms
            .iter()
            .map(|f| t.trace(0, &p.parse_word(f).unwrap()).unwrap())
            .collect();
        cosets.sort();
        cosets.dedup();
        assert_eq!(cosets.len(), 6);
        assert!(!t.is_trivial(&p.parse_word("a b").unwrap()).unwrap());
    }

    #[test]
    fn infinite_group_overflows() {
        let p = pres("gens: x y\nrels: [x,y]; y^3");
        assert_eq!(
            coset_enumerate(&p, 100),
            Err(CosetError::Overflow { max_cosets: 100 })
        );
        assert_eq!(coset_enumerate(&p, 0), Err(CosetError::InvalidLimit));
    }

    #[test]
    fn dihedral_family_orders() {
        for i in 2..=8 {
            let p = pres(&format!("gens: a b\nrels: a^2; b^2; (a b)^{i}"));
            let t = coset_enumerate(&p, 10_000).unwrap();
            assert_eq!(t.cosets(), 2 * i);
            assert_permutation_table(&t);
        }
    }

    #[test]
    fn larger_groups() {
        // Z/3 x Z/4 and the quaternion group.
        let t = coset_enumerate(&pres("gens: x y\nrels: [x,y]; x^3; y^4"), 10_000).unwrap();
        assert_eq!(t.cosets(), 12);
        let t =
            coset_enumerate(&pres("gens: i j\nrels: i^4; i^2 j^-2; i j i j^-1"), 10_000).unwrap();
        assert_eq!(t.cosets(), 8);
        // A5 as the (2,3,5) triangle group.
        let t = coset_enumerate(&pres("gens: a b\nrels: a^2; b^3; (a b)^5"), 100_000).unwrap();
        assert_eq!(t.cosets(), 60);
        assert_permutation_table(&t);
    }

    #[test]
    fn deterministic() {
        let p = pres("gens: a b\nrels: a^2; b^3; (a b)^5");
        assert_eq!(coset_enumerate(&p, 100_000), coset_enumerate(&p, 100_000));
    }
}
