//! Finite presentations `⟨X | R⟩` over a marked alphabet.
//!
//! File format, line oriented, `#` comments to end of line:
//!
//! ```text
//! gens: x y
//! rels: [x,y]; y^5
//! ```
//!
//! An empty `rels:` list is a free group.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Alphabet, SyntaxError, SyntaxErrorKind};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{line}:{column}: relator {index} reduces to the empty word")]
    TrivialRelator {
        line: usize,
        column: usize,
        index: usize,
    },
    #[error("relator {0} reduces to the empty word")]
    EmptyRelator(usize),
    #[error("relator {index} is over {found} generators, expected {expected}")]
    RankMismatch {
        index: usize,
        found: usize,
        expected: usize,
    },
}

/// A generator list plus a finite list of nonempty, cyclically reduced,
/// pairwise distinct relators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
    name: Option<String>,
}

impl Presentation {
    /// Cyclically reduces and deduplicates; rejects relators that are trivial
    /// in the free group.
    pub fn new(alphabet: Alphabet, relators: Vec<Word>) -> Result<Presentation, PresentationError> {
        let mut out: Vec<Word> = Vec::with_capacity(relators.len());
        for (index, r) in relators.into_iter().enumerate() {
            if r.rank() != alphabet.rank() {
                return Err(PresentationError::RankMismatch {
                    index,
                    found: r.rank(),
                    expected: alphabet.rank(),
                });
            }
            let r = r.cyclically_reduce();
            if r.is_empty() {
                return Err(PresentationError::EmptyRelator(index));
            }
            if !out.contains(&r) {
                out.push(r);
            }
        }
        Ok(Presentation {
            alphabet,
            relators: out,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Presentation {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// `L`, the longest relator length; `None` for an empty relator list.
    pub fn max_relator_length(&self) -> Option<usize> {
        self.relators.iter().map(Word::len).max()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, SyntaxError> {
        self.alphabet.parse_word(text)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.alphabet.format(w)
    }

    /// Text in the file grammar; parsing it gives back an equal presentation.
    pub fn canonical_text(&self) -> String {
        self.to_string()
    }

    pub fn symmetrize(&self) -> SymmetrizedRelators {
        SymmetrizedRelators::new(self)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gens: {}", self.alphabet)?;
        let rels: Vec<String> = self
            .relators
            .iter()
            .map(|r| self.alphabet.format(r))
            .collect();
        if rels.is_empty() {
            writeln!(f, "rels:")
        } else {
            writeln!(f, "rels: {}", rels.join("; "))
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> PresentationError {
    PresentationError::Syntax(SyntaxError {
        line,
        column,
        kind: SyntaxErrorKind::Other(msg.into()),
    })
}

/// Parses the presentation file grammar.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, strip_comment(l)))
        .filter(|(_, l)| !l.trim().is_empty());

    let (gens_line, gens) = lines
        .next()
        .ok_or_else(|| syntax(1, 1, "missing `gens:` line"))?;
    let gens_body = directive(gens_line, gens, "gens:")?;
    let names: Vec<&str> = gens_body.1.split_whitespace().collect();
    let alphabet =
        Alphabet::new(names.iter().copied()).map_err(|msg| syntax(gens_line, gens_body.0, msg))?;

    let (rels_line, rels) = lines
        .next()
        .ok_or_else(|| syntax(gens_line + 1, 1, "missing `rels:` line"))?;
    let (rels_col, rels_body) = directive(rels_line, rels, "rels:")?;

    if let Some((line, _)) = lines.next() {
        return Err(syntax(line, 1, "unexpected content after `rels:` line"));
    }

    let mut relators = Vec::new();
    let mut positions = Vec::new();
    let mut offset = 0;
    for piece in rels_body.split(';') {
        let column = rels_col + rels_body[..offset].chars().count();
        offset += piece.len() + 1;
        if piece.trim().is_empty() {
            continue;
        }
        let raw = alphabet.parse_raw(piece, rels_line, column)?;
        let lead = piece.chars().take_while(|c| c.is_whitespace()).count();
        positions.push(column + lead);
        relators.push(Word::from_letters(alphabet.rank(), raw));
    }
    for (index, r) in relators.iter().enumerate() {
        if r.cyclically_reduce().is_empty() {
            return Err(PresentationError::TrivialRelator {
                line: rels_line,
                column: positions[index],
                index,
            });
        }
    }
    Presentation::new(alphabet, relators)
}

// Returns (1-based column where the body starts, body).
fn directive<'a>(
    line_no: usize,
    line: &'a str,
    keyword: &str,
) -> Result<(usize, &'a str), PresentationError> {
    let lead = line.len() - line.trim_start().len();
    let rest = &line[lead..];
    match rest.strip_prefix(keyword) {
        Some(body) => Ok((lead + keyword.len() + 1, body)),
        None => Err(syntax(line_no, lead + 1, format!("expected `{keyword}`"))),
    }
}

/// Where a symmetrized move came from: `rotate(relator^sign, rotation)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MoveOrigin {
    pub relator: usize,
    pub sign: i8,
    pub rotation: usize,
}

/// All rotations of every relator and of its inverse, deduplicated. The
/// move table for area search.
#[derive(Debug, Clone)]
pub struct SymmetrizedRelators {
    moves: Vec<Word>,
    origin: Vec<MoveOrigin>,
}

impl SymmetrizedRelators {
    fn new(p: &Presentation) -> SymmetrizedRelators {
        let mut moves: Vec<Word> = Vec::new();
        let mut origin = Vec::new();
        for (relator, r) in p.relators().iter().enumerate() {
            for (sign, base) in [(1i8, r.clone()), (-1, r.inverse())] {
                for rotation in 0..base.len() {
                    let m = base.rotate(rotation);
                    if !moves.contains(&m) {
                        moves.push(m);
                        origin.push(MoveOrigin {
                            relator,
                            sign,
                            rotation,
                        });
                    }
                }
            }
        }
        SymmetrizedRelators { moves, origin }
    }

    pub fn moves(&self) -> &[Word] {
        &self.moves
    }

    pub fn origin(&self, index: usize) -> MoveOrigin {
        self.origin[index]
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.moves.iter().map(Word::len).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let p = parse_presentation("gens: x y\nrels: [x,y]").unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].signed_indices(), vec![1, 2, -1, -2]);

        let p = parse_presentation("gens: a\nrels: a^3").unwrap();
        assert_eq!(p.relators()[0].signed_indices(), vec![1, 1, 1]);

        let p = parse_presentation("gens: a b\nrels: a^2; b^2; (a b)^3").unwrap();
        let lens: Vec<usize> = p.relators().iter().map(Word::len).collect();
        assert_eq!(lens, vec![2, 2, 6]);
    }

    #[test]
    fn comments_blank_lines_and_free_groups() {
        let p = parse_presentation("# Z\n\ngens: x   # one generator\nrels:\n").unwrap();
        assert!(p.relators().is_empty());
        assert_eq!(p.max_relator_length(), None);
    }

    #[test]
    fn relators_are_cyclically_reduced_and_deduplicated() {
        let p = parse_presentation("gens: a b\nrels: b a^3 b^-1; a^3; b^2").unwrap();
        assert_eq!(p.relators().len(), 2);
        assert_eq!(p.relators()[0].signed_indices(), vec![1, 1, 1]);
    }

    #[test]
    fn parse_errors() {
        let e = parse_presentation("gens: x y\nrels: x y x^-1 y^-1; x x^-1").unwrap_err();
        assert!(matches!(
            e,
            PresentationError::TrivialRelator {
                line: 2,
                index: 1,
                ..
            }
        ));
        let e = parse_presentation("gens: x y\nrels: x z").unwrap_err();
        match e {
            PresentationError::Syntax(s) => {
                assert_eq!((s.line, s.column), (2, 9));
                assert!(matches!(s.kind, SyntaxErrorKind::UnknownGenerator(_)));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_presentation("rels: x").is_err());
        assert!(parse_presentation("gens: x x\nrels:").is_err());
        assert!(parse_presentation("gens: x\n").is_err());
        assert!(parse_presentation("gens: x\nrels: x\nmore").is_err());
        // Conjugate of a free cancellation is still trivial.
        assert!(parse_presentation("gens: a\nrels: a a^-1").is_err());
    }

    #[test]
    fn max_relator_length_examples() {
        let l = |t: &str| parse_presentation(t).unwrap().max_relator_length();
        assert_eq!(l("gens: x y\nrels: [x,y]"), Some(4));
        assert_eq!(l("gens: a b\nrels: a^2; b^2; (a b)^3"), Some(6));
        assert_eq!(l("gens: a\nrels: a^5"), Some(5));
    }

    #[test]
    fn symmetrize_examples() {
        let s = parse_presentation("gens: a\nrels: a^3")
            .unwrap()
            .symmetrize();
        assert_eq!(s.len(), 2);
        let s = parse_presentation("gens: x y\nrels: [x,y]")
            .unwrap()
            .symmetrize();
        assert_eq!(s.len(), 8);
        let s = parse_presentation("gens: a b\nrels: a^2")
            .unwrap()
            .symmetrize();
        assert_eq!(s.len(), 2);
        assert_eq!(
            s.origin(1),
            MoveOrigin {
                relator: 0,
                sign: -1,
                rotation: 0
            }
        );
    }

    #[test]
    fn symmetrized_moves_match_their_origin() {
        let p = parse_presentation("gens: a b\nrels: a^2; b^2; (a b)^3; a b a^-1 b^2").unwrap();
        let s = p.symmetrize();
        for (k, m) in s.moves().iter().enumerate() {
            let o = s.origin(k);
            let base = p.relators()[o.relator].pow(o.sign as i64);
            assert_eq!(&base.rotate(o.rotation), m);
        }
    }
}
