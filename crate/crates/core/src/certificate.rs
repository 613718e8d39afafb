//! Area certificates: explicit products `∏ u_j · r_j^{±1} · u_j⁻¹`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::syntax::{Alphabet, SyntaxError};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("factor {factor} refers to relator {relator}, but there are only {count}")]
    RelatorOutOfRange {
        factor: usize,
        relator: usize,
        count: usize,
    },
    #[error("factor {factor} has a conjugator over {found} generators, expected {expected}")]
    RankMismatch {
        factor: usize,
        found: usize,
        expected: usize,
    },
    #[error("no substitute certificate for relator {0}")]
    MissingSubstitution(usize),
    #[error("substitute certificate for relator {0} does not expand to that relator")]
    BadSubstitution(usize),
    #[error("composed certificate does not expand to the original word")]
    CompositionMismatch,
    #[error("bad sign `{0}`, expected `+` or `-`")]
    BadSign(String),
    #[error("conjugator of factor {factor}: {source}")]
    Syntax {
        factor: usize,
        #[source]
        source: SyntaxError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i8(s: i8) -> Sign {
        if s < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn exponent(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// One factor `conjugator · relator^sign · conjugator⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub conjugator: Word,
    pub relator: usize,
    pub sign: Sign,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub factors: Vec<Factor>,
}

/// Wire form of a factor. A certificate serializes as a list of these.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub conjugator: String,
    pub relator: usize,
    pub sign: String,
}

impl Certificate {
    pub fn new(factors: Vec<Factor>) -> Certificate {
        Certificate { factors }
    }

    pub fn size(&self) -> usize {
        self.factors.len()
    }

    /// Multiplies the factors out in the free group.
    pub fn expand(&self, p: &Presentation) -> Result<Word, CertificateError> {
        let mut acc = Word::identity(p.rank());
        for (k, f) in self.factors.iter().enumerate() {
            let r = p
                .relators()
                .get(f.relator)
                .ok_or(CertificateError::RelatorOutOfRange {
                    factor: k,
                    relator: f.relator,
                    count: p.relators().len(),
                })?;
            if f.conjugator.rank() != p.rank() {
                return Err(CertificateError::RankMismatch {
                    factor: k,
                    found: f.conjugator.rank(),
                    expected: p.rank(),
                });
            }
            let term = f.conjugator.conjugate_unchecked(&r.pow(f.sign.exponent()));
            acc = acc.mul(&term);
        }
        Ok(acc)
    }

    pub fn to_records(&self, alphabet: &Alphabet) -> Vec<FactorRecord> {
        self.factors
            .iter()
            .map(|f| FactorRecord {
                conjugator: alphabet.format(&f.conjugator),
                relator: f.relator,
                sign: f.sign.symbol().to_string(),
            })
            .collect()
    }

    pub fn from_records(
        alphabet: &Alphabet,
        records: &[FactorRecord],
    ) -> Result<Certificate, CertificateError> {
        let factors = records
            .iter()
            .enumerate()
            .map(|(factor, r)| {
                let conjugator = alphabet
                    .parse_word(&r.conjugator)
                    .map_err(|source| CertificateError::Syntax { factor, source })?;
                let sign = match r.sign.as_str() {
                    "+" => Sign::Plus,
                    "-" => Sign::Minus,
                    other => return Err(CertificateError::BadSign(other.to_string())),
                };
                Ok(Factor {
                    conjugator,
                    relator: r.relator,
                    sign,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Certificate { factors })
    }
}

/// True iff the certificate multiplies out to exactly `w`.
pub fn verify_certificate(
    p: &Presentation,
    w: &Word,
    c: &Certificate,
) -> Result<bool, CertificateError> {
    Ok(c.expand(p)? == *w)
}

/// Substitutes, for every relator `r_j` of `limit` used by `c_w`, a
/// certificate of `r_j` over the relators of `member`.
///
/// The factor `a · r_j^s · a⁻¹` becomes the factors `(a·u, t, s·s′)` of the
/// substitute, in order when `s = +1` and in reverse order when `s = −1`.
/// The result certifies the same word over `member` and has size
/// `Σ |subs[j]|` over the factors of `c_w`.
pub fn compose_certificates(
    limit: &Presentation,
    member: &Presentation,
    c_w: &Certificate,
    subs: &BTreeMap<usize, Certificate>,
) -> Result<Certificate, CertificateError> {
    for f in &c_w.factors {
        let sub = subs
            .get(&f.relator)
            .ok_or(CertificateError::MissingSubstitution(f.relator))?;
        let r = limit
            .relators()
            .get(f.relator)
            .ok_or(CertificateError::MissingSubstitution(f.relator))?;
        if !verify_certificate(member, r, sub)? {
            return Err(CertificateError::BadSubstitution(f.relator));
        }
    }
    let mut factors = Vec::new();
    for f in &c_w.factors {
        let sub = &subs[&f.relator];
        let emit = |g: &Factor| Factor {
            conjugator: f.conjugator.mul(&g.conjugator),
            relator: g.relator,
            sign: f.sign.times(g.sign),
        };
        match f.sign {
            Sign::Plus => factors.extend(sub.factors.iter().map(emit)),
            Sign::Minus => factors.extend(sub.factors.iter().rev().map(emit)),
        }
    }
    let composed = Certificate { factors };
    if composed.expand(member)? != c_w.expand(limit)? {
        return Err(CertificateError::CompositionMismatch);
    }
    Ok(composed)
}
