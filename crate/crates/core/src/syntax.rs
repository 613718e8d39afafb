//! Textual word syntax.
//!
//! Generators are identifiers. `x^-1` is an inverse, and for single-letter
//! names the uppercase letter is shorthand for it. Juxtaposition is
//! concatenation, `(e)^k` is a power for any nonzero `k`, `[u,v]` expands to
//! `u v u^-1 v^-1`, and `1` is the identity. A run of letters that is not a
//! declared name is read letter by letter when every letter resolves, so
//! `abAB` and `a b A B` parse the same over `gens: a b`.

use std::fmt;

use thiserror::Error;

use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub kind: SyntaxErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxErrorKind {
    #[error("unexpected {0}")]
    Unexpected(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid exponent `{0}`")]
    BadExponent(String),
    #[error("{0}")]
    Other(String),
}

/// Ordered generator names; the order is the marking.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_ident_start(c)) && chars.all(is_ident_char)
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Alphabet, String> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err("at least one generator is required".into());
        }
        if names.len() > crate::word::MAX_GENERATORS {
            return Err(format!("too many generators ({})", names.len()));
        }
        for (k, n) in names.iter().enumerate() {
            if !is_identifier(n) {
                return Err(format!("`{n}` is not an identifier"));
            }
            if names[..k].contains(n) {
                return Err(format!("duplicate generator `{n}`"));
            }
        }
        Ok(Alphabet { names })
    }

    /// `a, b, c, …` for up to 26 generators, `x1, x2, …` beyond.
    pub fn standard(rank: usize) -> Alphabet {
        let names = if rank <= 26 {
            (0..rank)
                .map(|k| ((b'a' + k as u8) as char).to_string())
                .collect()
        } else {
            (1..=rank).map(|k| format!("x{k}")).collect()
        };
        Alphabet { names }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn compact(&self) -> bool {
        self.names
            .iter()
            .all(|n| n.len() == 1 && n.as_bytes()[0].is_ascii_lowercase())
    }

    fn resolve_single(&self, name: &str) -> Option<Letter> {
        if let Some(k) = self.names.iter().position(|n| n == name) {
            return Some(Letter::new(k, false));
        }
        let mut chars = name.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_uppercase() => {
                let lower = c.to_ascii_lowercase().to_string();
                self.names
                    .iter()
                    .position(|n| *n == lower)
                    .map(|k| Letter::new(k, true))
            }
            _ => None,
        }
    }

    fn resolve(&self, name: &str) -> Option<Vec<Letter>> {
        if let Some(l) = self.resolve_single(name) {
            return Some(vec![l]);
        }
        name.chars()
            .map(|c| self.resolve_single(c.encode_utf8(&mut [0; 4])))
            .collect()
    }

    pub fn letter_name(&self, letter: Letter) -> String {
        let base = &self.names[letter.generator()];
        match (letter.is_inverse(), self.compact()) {
            (false, _) => base.clone(),
            (true, true) => base.to_ascii_uppercase(),
            (true, false) => format!("{base}^-1"),
        }
    }

    /// Canonical text of a word; `1` for the identity.
    pub fn format(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = word
            .letters()
            .iter()
            .map(|&l| self.letter_name(l))
            .collect();
        if self.compact() {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    /// Parses and freely reduces a word expression.
    pub fn parse_word(&self, text: &str) -> Result<Word, SyntaxError> {
        let raw = self.parse_raw(text, 1, 1)?;
        Ok(Word::from_letters(self.rank(), raw))
    }

    /// Parses a word expression without free reduction. `line` and
    /// `column_offset` position errors inside a larger document.
    pub fn parse_raw(
        &self,
        text: &str,
        line: usize,
        column_offset: usize,
    ) -> Result<Vec<Letter>, SyntaxError> {
        let mut p = Parser {
            alphabet: self,
            chars: text.char_indices().collect(),
            pos: 0,
            line,
            column_offset,
        };
        let out = p.expr()?;
        p.skip_ws();
        if let Some(c) = p.peek() {
            return Err(p.error(SyntaxErrorKind::Unexpected(format!("`{c}`"))));
        }
        Ok(out)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}

struct Parser<'a> {
    alphabet: &'a Alphabet,
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    column_offset: usize,
}

fn invert_raw(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.column_offset + self.pos
    }

    fn error(&self, kind: SyntaxErrorKind) -> SyntaxError {
        SyntaxError {
            line: self.line,
            column: self.column(),
            kind,
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, want: char) -> Result<(), SyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(SyntaxErrorKind::Unexpected(format!(
                "`{c}`, expected `{want}`"
            )))),
            None => Err(self.error(SyntaxErrorKind::Unexpected(format!(
                "end of input, expected `{want}`"
            )))),
        }
    }

    fn expr(&mut self) -> Result<Vec<Letter>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if is_ident_start(c) || c == '(' || c == '[' || c == '1' => {
                    let t = self.term()?;
                    out.extend(t);
                }
                _ => return Ok(out),
            }
        }
    }

    fn term(&mut self) -> Result<Vec<Letter>, SyntaxError> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits: String = self.chars[start..self.pos]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        let k: i64 = match digits.parse() {
            Ok(k) if k != 0 => k,
            _ => {
                self.pos = start;
                return Err(self.error(SyntaxErrorKind::BadExponent(digits)));
            }
        };
        let unit = if k < 0 { invert_raw(&base) } else { base };
        let reps = k.unsigned_abs() as usize;
        let mut out = Vec::with_capacity(unit.len() * reps);
        for _ in 0..reps {
            out.extend_from_slice(&unit);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Vec<Letter>, SyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some('[') => {
                self.pos += 1;
                let u = self.expr()?;
                self.expect(',')?;
                let v = self.expr()?;
                self.expect(']')?;
                let mut out = u.clone();
                out.extend_from_slice(&v);
                out.extend(invert_raw(&u));
                out.extend(invert_raw(&v));
                Ok(out)
            }
            Some('1') => {
                self.pos += 1;
                Ok(Vec::new())
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if is_ident_char(c)) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos]
                    .iter()
                    .map(|&(_, c)| c)
                    .collect();
                match self.alphabet.resolve(&name) {
                    Some(letters) => Ok(letters),
                    None => {
                        self.pos = start;
                        Err(self.error(SyntaxErrorKind::UnknownGenerator(name)))
                    }
                }
            }
            Some(c) => Err(self.error(SyntaxErrorKind::Unexpected(format!("`{c}`")))),
            None => Err(self.error(SyntaxErrorKind::Unexpected("end of input".into()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Alphabet {
        Alphabet::new(["x", "y"]).unwrap()
    }

    #[test]
    fn commutator_and_powers() {
        let a = xy();
        let w = a.parse_word("[x,y]").unwrap();
        assert_eq!(w.signed_indices(), vec![1, 2, -1, -2]);
        assert_eq!(a.parse_word("(x y)^3").unwrap().len(), 6);
        assert_eq!(
            a.parse_word("(x y)^-1").unwrap().signed_indices(),
            vec![-2, -1]
        );
        assert_eq!(
            a.parse_word("x^-1 X").unwrap().signed_indices(),
            vec![-1, -1]
        );
        assert!(a.parse_word("1").unwrap().is_empty());
        assert!(a.parse_word("x x^-1").unwrap().is_empty());
        assert_eq!(
            a.parse_word("xyXY").unwrap(),
            a.parse_word("[x,y]").unwrap()
        );
    }

    #[test]
    fn multi_letter_names() {
        let a = Alphabet::new(["s1", "s2"]).unwrap();
        let w = a.parse_word("s1 s2^-1 [s1, s2]").unwrap();
        assert_eq!(w.signed_indices(), vec![1, -2, 1, 2, -1, -2]);
        assert_eq!(a.format(&w), "s1 s2^-1 s1 s2 s1^-1 s2^-1");
        assert_eq!(a.parse_word(&a.format(&w)).unwrap(), w);
    }

    #[test]
    fn errors_carry_positions() {
        let a = xy();
        let e = a.parse_word("x z").unwrap_err();
        assert_eq!(e.column, 3);
        assert!(matches!(e.kind, SyntaxErrorKind::UnknownGenerator(ref n) if n == "z"));
        let e = a.parse_word("(x y").unwrap_err();
        assert!(matches!(e.kind, SyntaxErrorKind::Unexpected(_)));
        let e = a.parse_word("x^0").unwrap_err();
        assert!(matches!(e.kind, SyntaxErrorKind::BadExponent(_)));
        assert!(a.parse_word("x, y").is_err());
    }

    #[test]
    fn compact_format_round_trips() {
        let a = xy();
        let w = a.parse_word("x y^-1 x^-1").unwrap();
        assert_eq!(a.format(&w), "xYX");
        assert_eq!(a.parse_word("xYX").unwrap(), w);
        assert_eq!(a.format(&Word::identity(2)), "1");
    }
}
