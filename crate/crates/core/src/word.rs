//! Reduced words in the free group on `m` marked generators.
//!
//! A [`Word`] is always freely reduced. Letters are encoded as small
//! integers `2 * generator + inverse_bit`, so the derived order on
//! [`Letter`] is "generator index, then sign" with the positive letter
//! first. Words compare in length-lexicographic order over that letter
//! order; everything downstream that needs a deterministic tie-break uses it.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest supported generator count.
pub const MAX_GENERATORS: usize = 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: i64, rank: usize },
    #[error("generator count mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("generator count {0} unsupported (must be 1..={MAX_GENERATORS})")]
    BadRank(usize),
    #[error("word is not cyclically reduced")]
    NotCyclicallyReduced,
}

/// One letter: a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    /// `generator` is zero-based.
    pub fn new(generator: usize, inverse: bool) -> Letter {
        debug_assert!(generator < MAX_GENERATORS);
        Letter((generator as u8) << 1 | inverse as u8)
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// +1 for a generator, -1 for an inverse.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    /// Dense code in `0..2m`, usable as a table column.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Letter {
        Letter(code as u8)
    }

    /// Signed one-based index: `g_j` is `j`, `g_j^-1` is `-j`.
    pub fn signed_index(self) -> i64 {
        (self.generator() as i64 + 1) * self.sign()
    }
}

/// Appends `letter` to a reduced sequence, cancelling against the tail.
#[inline]
pub(crate) fn push_reduced(out: &mut Vec<Letter>, letter: Letter) {
    if out.last() == Some(&letter.inverse()) {
        out.pop();
    } else {
        out.push(letter);
    }
}

/// Free reduction of an arbitrary letter sequence.
pub(crate) fn reduce_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Vec<Letter> {
    let iter = letters.into_iter();
    let mut out = Vec::with_capacity(iter.size_hint().0);
    for l in iter {
        push_reduced(&mut out, l);
    }
    out
}

/// A freely reduced word over a fixed number of generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

fn check_rank(rank: usize) -> Result<(), WordError> {
    if rank == 0 || rank > MAX_GENERATORS {
        Err(WordError::BadRank(rank))
    } else {
        Ok(())
    }
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// Reduces the sequence. Letters must already be in range for `rank`.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(rank: usize, letters: I) -> Word {
        let letters = reduce_letters(letters);
        debug_assert!(letters.iter().all(|l| l.generator() < rank));
        Word { rank, letters }
    }

    /// Trusted constructor for sequences known to be reduced.
    pub(crate) fn from_reduced(rank: usize, letters: Vec<Letter>) -> Word {
        debug_assert!(letters.windows(2).all(|p| p[0] != p[1].inverse()));
        Word { rank, letters }
    }

    /// Builds the reduced word from signed one-based generator indices.
    pub fn reduce(rank: usize, signed: &[i64]) -> Result<Word, WordError> {
        check_rank(rank)?;
        let mut letters = Vec::with_capacity(signed.len());
        for &s in signed {
            let index = s.unsigned_abs() as usize;
            if s == 0 || index > rank {
                return Err(WordError::IndexOutOfRange { index: s, rank });
            }
            push_reduced(&mut letters, Letter::new(index - 1, s < 0));
        }
        Ok(Word { rank, letters })
    }

    /// The word `g^exponent` for a zero-based generator.
    pub fn generator_power(rank: usize, generator: usize, exponent: i64) -> Word {
        let letter = Letter::new(generator, exponent < 0);
        Word {
            rank,
            letters: vec![letter; exponent.unsigned_abs() as usize],
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn signed_indices(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.signed_index()).collect()
    }

    fn same_rank(&self, other: &Word) -> Result<(), WordError> {
        if self.rank != other.rank {
            Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        } else {
            Ok(())
        }
    }

    /// Reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        self.same_rank(other)?;
        Ok(self.mul(other))
    }

    pub(crate) fn mul(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.reserve(other.len());
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `u · w · u⁻¹` where `self` is `u`.
    pub fn conjugate(&self, w: &Word) -> Result<Word, WordError> {
        self.same_rank(w)?;
        Ok(self.conjugate_unchecked(w))
    }

    pub(crate) fn conjugate_unchecked(&self, w: &Word) -> Word {
        self.mul(w).mul(&self.inverse())
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&first), Some(&last)) => self.len() == 1 || first != last.inverse(),
            _ => true,
        }
    }

    /// Strips the longest prefix/suffix pair `c … c⁻¹`.
    pub fn cyclically_reduce(&self) -> Word {
        let l = &self.letters;
        let (mut i, mut j) = (0, l.len());
        while j - i >= 2 && l[i] == l[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        Word {
            rank: self.rank,
            letters: l[i..j].to_vec(),
        }
    }

    /// The rotation starting at `offset`.
    pub fn rotate(&self, offset: usize) -> Word {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        let k = offset % n;
        let mut letters = Vec::with_capacity(n);
        letters.extend_from_slice(&self.letters[k..]);
        letters.extend_from_slice(&self.letters[..k]);
        Word {
            rank: self.rank,
            letters,
        }
    }

    /// All distinct rotations, in order of starting offset.
    pub fn cyclic_permutations(&self) -> Result<Vec<Word>, WordError> {
        if !self.is_cyclically_reduced() {
            return Err(WordError::NotCyclicallyReduced);
        }
        if self.is_empty() {
            return Ok(vec![self.clone()]);
        }
        let mut out: Vec<Word> = Vec::with_capacity(self.len());
        for k in 0..self.len() {
            let r = self.rotate(k);
            if !out.contains(&r) {
                out.push(r);
            }
        }
        Ok(out)
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.rank];
        for l in &self.letters {
            sums[l.generator()] += l.sign();
        }
        sums
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{}](", self.rank)?;
        if self.is_empty() {
            write!(f, "1")?;
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l.signed_index())?;
        }
        write!(f, ")")
    }
}

/// Iterator over the reduced words of one fixed length, in lexicographic
/// letter order. Holds the current word and advances it like an odometer.
#[derive(Debug, Clone)]
pub struct ShellIter {
    rank: usize,
    current: Option<Vec<Letter>>,
}

// Smallest letter that does not cancel `prev`.
fn smallest_following(prev: Option<Letter>, rank: usize) -> Option<Letter> {
    (0..2 * rank)
        .map(Letter::from_code)
        .find(|&l| prev.is_none_or(|p| l != p.inverse()))
}

fn next_following(prev: Option<Letter>, current: Letter, rank: usize) -> Option<Letter> {
    (current.code() + 1..2 * rank)
        .map(Letter::from_code)
        .find(|&l| prev.is_none_or(|p| l != p.inverse()))
}

impl ShellIter {
    pub fn new(rank: usize, length: usize) -> ShellIter {
        let mut letters = Vec::with_capacity(length);
        for _ in 0..length {
            let l = smallest_following(letters.last().copied(), rank).expect("rank >= 1");
            letters.push(l);
        }
        ShellIter {
            rank,
            current: Some(letters),
        }
    }

    fn advance(&mut self) {
        let Some(cur) = self.current.as_mut() else {
            return;
        };
        let rank = self.rank;
        let mut pos = cur.len();
        loop {
            if pos == 0 {
                self.current = None;
                return;
            }
            pos -= 1;
            let prev = if pos == 0 { None } else { Some(cur[pos - 1]) };
            if let Some(next) = next_following(prev, cur[pos], rank) {
                cur[pos] = next;
                for k in pos + 1..cur.len() {
                    cur[k] = smallest_following(Some(cur[k - 1]), rank).expect("rank >= 1");
                }
                return;
            }
        }
    }
}

impl Iterator for ShellIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let letters = self.current.clone()?;
        self.advance();
        Some(Word::from_reduced(self.rank, letters))
    }
}

/// Reduced words of length exactly `length`, in lexicographic order.
pub fn enumerate_shell(rank: usize, length: usize) -> ShellIter {
    ShellIter::new(rank, length)
}

/// Every reduced word of length at most `radius`, each exactly once, in
/// length-lexicographic order.
pub fn enumerate_ball(rank: usize, radius: usize) -> impl Iterator<Item = Word> {
    (0..=radius).flat_map(move |k| enumerate_shell(rank, k))
}

/// Number of reduced words of length at most `radius` in the free group of
/// the given rank, `1 + Σ_{k=1..radius} 2m(2m−1)^{k−1}`.
pub fn ball_size(rank: usize, radius: usize) -> u128 {
    let m = rank as u128;
    let mut total = 1u128;
    let mut shell = 2 * m;
    for _ in 1..=radius {
        total += shell;
        shell *= 2 * m - 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &[i64]) -> Word {
        Word::reduce(rank, s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(w(2, &[1, 2, -2, -1]).is_empty());
        assert_eq!(w(2, &[1, 1, -1, 2]).signed_indices(), vec![1, 2]);
        assert_eq!(w(2, &[1, 2, -1]).signed_indices(), vec![1, 2, -1]);
        assert_eq!(
            Word::reduce(2, &[1, 3]),
            Err(WordError::IndexOutOfRange { index: 3, rank: 2 })
        );
        assert!(Word::reduce(2, &[0]).is_err());
    }

    #[test]
    fn concat_examples() {
        let ab = w(2, &[1, 2]);
        assert_eq!(ab.concat(&w(2, &[-2, 1])).unwrap(), w(2, &[1, 1]));
        assert!(ab.concat(&ab.inverse()).unwrap().is_empty());
        assert_eq!(ab.concat(&ab).unwrap(), w(2, &[1, 2, 1, 2]));
        assert!(matches!(
            ab.concat(&w(3, &[1])),
            Err(WordError::RankMismatch { .. })
        ));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w(2, &[1, 2, -1]).inverse(), w(2, &[1, -2, -1]));
        assert!(Word::identity(2).inverse().is_empty());
        assert_eq!(w(1, &[1, 1, 1]).inverse(), w(1, &[-1, -1, -1]));
    }

    #[test]
    fn conjugate_examples() {
        let a = w(2, &[1]);
        assert_eq!(a.conjugate(&w(2, &[2])).unwrap(), w(2, &[1, 2, -1]));
        assert!(a.conjugate(&Word::identity(2)).unwrap().is_empty());
        let a3 = w(2, &[1, 1, 1]);
        assert_eq!(a.conjugate(&a3).unwrap(), a3);
    }

    #[test]
    fn cyclic_permutation_examples() {
        let comm = w(2, &[1, 2, -1, -2]);
        let rots = comm.cyclic_permutations().unwrap();
        assert_eq!(
            rots,
            vec![
                w(2, &[1, 2, -1, -2]),
                w(2, &[2, -1, -2, 1]),
                w(2, &[-1, -2, 1, 2]),
                w(2, &[-2, 1, 2, -1]),
            ]
        );
        assert_eq!(w(1, &[1, 1, 1]).cyclic_permutations().unwrap().len(), 1);
        assert_eq!(
            w(2, &[1, 2]).cyclic_permutations().unwrap(),
            vec![w(2, &[1, 2]), w(2, &[2, 1])]
        );
        assert_eq!(
            w(2, &[1, 2, -1]).cyclic_permutations(),
            Err(WordError::NotCyclicallyReduced)
        );
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w(2, &[1, 2, 2, -1]).cyclically_reduce(), w(2, &[2, 2]));
        assert_eq!(w(2, &[1, -2, 1]).cyclically_reduce(), w(2, &[1, -2, 1]));
        assert!(w(1, &[1]).is_cyclically_reduced());
    }

    #[test]
    fn ball_examples() {
        let ball: Vec<Word> = enumerate_ball(1, 3).collect();
        assert_eq!(ball.len(), 7);
        assert_eq!(enumerate_ball(2, 2).count(), 17);
        let zero: Vec<Word> = enumerate_ball(2, 0).collect();
        assert_eq!(zero, vec![Word::identity(2)]);
    }

    #[test]
    fn ball_order_is_length_lex() {
        let ball: Vec<Word> = enumerate_ball(2, 4).collect();
        assert!(ball.windows(2).all(|p| p[0] < p[1]));
        // x < x^-1 < y < y^-1 on single letters.
        assert_eq!(
            ball[1..5]
                .iter()
                .map(|w| w.signed_indices()[0])
                .collect::<Vec<_>>(),
            vec![1, -1, 2, -2]
        );
    }

    #[test]
    fn ball_counts_against_brute_force() {
        // Independent route: all raw sequences of length <= radius, reduced, deduplicated.
        for rank in 1..=2usize {
            for radius in 0..=4usize {
                let mut seen = std::collections::BTreeSet::new();
                let alphabet: Vec<i64> = (1..=rank as i64).flat_map(|j| [j, -j]).collect();
                let mut frontier: Vec<Vec<i64>> = vec![vec![]];
                for _ in 0..=radius {
                    let mut next = Vec::new();
                    for s in &frontier {
                        let word = Word::reduce(rank, s).unwrap();
                        if word.len() == s.len() {
                            seen.insert(word);
                        }
                        for &a in &alphabet {
                            let mut t = s.clone();
                            t.push(a);
                            next.push(t);
                        }
                    }
                    frontier = next;
                }
                assert_eq!(seen.len() as u128, ball_size(rank, radius));
                assert_eq!(enumerate_ball(rank, radius).count(), seen.len());
            }
        }
    }
}
