//! Brute-force area by enumerating products of conjugates.
//!
//! `S_k` is the set of reduced words equal to a product of exactly `k`
//! conjugates `u · r^{±1} · u⁻¹` with `r ∈ R` and `‖u‖ ≤ conj_cap`. Levels up
//! to `⌈k_max / 2⌉` are materialized and `w ∈ S_a · S_b` is tested by
//! scanning the smaller level. Shares nothing with the splice search beyond
//! free-group arithmetic, which is what makes it useful as a cross-check.

use std::collections::HashSet;

use crate::presentation::Presentation;
use crate::word::{enumerate_ball, Word};

pub struct ConjugateProducts {
    rank: usize,
    k_max: usize,
    levels: Vec<HashSet<Word>>,
}

impl ConjugateProducts {
    pub fn new(p: &Presentation, k_max: usize, conj_cap: usize) -> ConjugateProducts {
        let half = k_max.div_ceil(2);
        let mut conjugates = HashSet::new();
        if half > 0 {
            for u in enumerate_ball(p.rank(), conj_cap) {
                for r in p.relators() {
                    conjugates.insert(u.conjugate_unchecked(r));
                    conjugates.insert(u.conjugate_unchecked(&r.inverse()));
                }
            }
        }
        let mut levels = vec![HashSet::from([Word::identity(p.rank())])];
        for k in 1..=half {
            let next: HashSet<Word> = if k == 1 {
                conjugates.clone()
            } else {
                let prev = &levels[k - 1];
                prev.iter()
                    .flat_map(|a| conjugates.iter().map(move |c| a.mul(c)))
                    .collect()
            };
            levels.push(next);
        }
        ConjugateProducts {
            rank: p.rank(),
            k_max,
            levels,
        }
    }

    fn in_product(&self, w: &Word, a: usize, b: usize) -> bool {
        if b == 0 {
            return self.levels[a].contains(w);
        }
        // w = s·t with s ∈ S_a, t ∈ S_b  ⇔  w·t⁻¹ ∈ S_a.
        self.levels[b]
            .iter()
            .any(|t| self.levels[a].contains(&w.mul(&t.inverse())))
    }

    /// Smallest `k ≤ k_max` with `w ∈ S_k`.
    pub fn area(&self, w: &Word) -> Option<usize> {
        assert_eq!(w.rank(), self.rank);
        let half = self.levels.len() - 1;
        (0..=self.k_max).find(|&k| {
            let a = k.min(half);
            self.in_product(w, a, k - a)
        })
    }
}

/// Smallest number of conjugates (each with conjugator length at most
/// `conj_cap`) whose product is `w`, searching up to `k_max`.
pub fn area_exact_small(
    p: &Presentation,
    w: &Word,
    k_max: usize,
    conj_cap: usize,
) -> Option<usize> {
    ConjugateProducts::new(p, k_max, conj_cap).area(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    #[test]
    fn examples() {
        let p = parse_presentation("gens: a\nrels: a^3").unwrap();
        assert_eq!(
            area_exact_small(&p, &p.parse_word("a^6").unwrap(), 3, 4),
            Some(2)
        );
        assert_eq!(
            area_exact_small(&p, &p.parse_word("a").unwrap(), 3, 4),
            None
        );
        assert_eq!(area_exact_small(&p, &Word::identity(1), 3, 4), Some(0));
        let z2 = parse_presentation("gens: x y\nrels: [x,y]").unwrap();
        assert_eq!(
            area_exact_small(&z2, &z2.parse_word("[x,y]").unwrap(), 2, 2),
            Some(1)
        );
    }

    #[test]
    fn odd_k_max_uses_mixed_levels() {
        let p = parse_presentation("gens: a\nrels: a^3").unwrap();
        let cp = ConjugateProducts::new(&p, 3, 2);
        assert_eq!(cp.area(&p.parse_word("a^9").unwrap()), Some(3));
        assert_eq!(cp.area(&p.parse_word("a^12").unwrap()), None);
    }
}
