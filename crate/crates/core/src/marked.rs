//! Marked groups, relation balls and the Gromov–Grigorchuk distance.
//!
//! A marked group is only ever seen through its relation balls
//! `Rel_λ = {w : ‖w‖ ≤ λ, w = 1 in G}`. Two groups at distance `e^{−Λ}` have
//! equal balls up to radius `Λ` and different balls at `Λ + 1`. Λ is kept as
//! an integer; `e^{−Λ}` only appears in display strings.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::families::{FamilyError, FamilySpec};
use crate::oracle::{Oracle, OracleError, OracleSpec, Verdict};
use crate::par;
use crate::presentation::Presentation;
use crate::word::{enumerate_ball, enumerate_shell, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkedError {
    #[error("oracle returned Unknown on `{word}`")]
    Unknown { word: String },
    #[error("marked groups have different generator counts ({0} vs {1})")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// A presentation fixing the marking, paired with a decider for its word
/// problem. Relators of the presentation are not consulted by the decider.
#[derive(Debug, Clone)]
pub struct MarkedGroup {
    presentation: Presentation,
    spec: OracleSpec,
    oracle: Oracle,
}

impl MarkedGroup {
    pub fn new(presentation: Presentation, spec: OracleSpec) -> Result<MarkedGroup, OracleError> {
        let oracle = Oracle::build(&spec, presentation.rank())?;
        Ok(MarkedGroup {
            presentation,
            spec,
            oracle,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn rank(&self) -> usize {
        self.presentation.rank()
    }

    /// `Ok(true)` iff trivial; Unknown is an error.
    pub fn is_trivial(&self, w: &Word) -> Result<bool, MarkedError> {
        match self.oracle.decide(w)? {
            Verdict::Trivial => Ok(true),
            Verdict::NonTrivial => Ok(false),
            Verdict::Unknown { .. } => Err(MarkedError::Unknown {
                word: self.presentation.format_word(w),
            }),
        }
    }
}

/// `Rel_λ`, kept in length-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationBall {
    pub radius: usize,
    pub members: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationBallRecord {
    pub lambda: usize,
    pub members: Vec<String>,
}

impl RelationBall {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.members.binary_search(w).is_ok()
    }

    pub fn to_record(&self, p: &Presentation) -> RelationBallRecord {
        RelationBallRecord {
            lambda: self.radius,
            members: self.members.iter().map(|w| p.format_word(w)).collect(),
        }
    }
}

pub fn rel_ball(g: &MarkedGroup, radius: usize) -> Result<RelationBall, MarkedError> {
    let members = par::map_in_order(enumerate_ball(g.rank(), radius), |w| {
        Ok::<_, MarkedError>(g.is_trivial(w)?.then_some(()))
    })?
    .into_iter()
    .map(|(w, ())| w)
    .collect();
    Ok(RelationBall { radius, members })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MarkedDistance {
    /// Balls agree through `Λ` and differ at `Λ + 1`; distance `e^{−Λ}`.
    Exact(usize),
    /// Balls agree through `λ_max`; distance at most `e^{−λ_max}`.
    AtMost(usize),
}

impl MarkedDistance {
    /// Λ for `Exact`, the radius checked for `AtMost`.
    pub fn lambda(self) -> usize {
        match self {
            MarkedDistance::Exact(l) | MarkedDistance::AtMost(l) => l,
        }
    }

    pub fn kind(self) -> &'static str {
        match self {
            MarkedDistance::Exact(_) => "Exact",
            MarkedDistance::AtMost(_) => "AtMost",
        }
    }

    pub fn display(self) -> String {
        match self {
            MarkedDistance::Exact(l) => format!("e^-{l}"),
            MarkedDistance::AtMost(l) => format!("<= e^-{l}"),
        }
    }
}

impl Serialize for MarkedDistance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MarkedDistance", 3)?;
        st.serialize_field("kind", self.kind())?;
        st.serialize_field("lambda", &self.lambda())?;
        st.serialize_field("display", &self.display())?;
        st.end()
    }
}

/// Compares balls shell by shell and stops at the first disagreement.
pub fn distance(
    g1: &MarkedGroup,
    g2: &MarkedGroup,
    lambda_max: usize,
) -> Result<MarkedDistance, MarkedError> {
    if g1.rank() != g2.rank() {
        return Err(MarkedError::RankMismatch(g1.rank(), g2.rank()));
    }
    // Shell 0 is the identity, trivial in both.
    for radius in 1..=lambda_max {
        let differs = par::find_first(enumerate_shell(g1.rank(), radius), |w| {
            Ok::<_, MarkedError>((g1.is_trivial(w)? != g2.is_trivial(w)?).then_some(()))
        })?;
        if differs.is_some() {
            return Ok(MarkedDistance::Exact(radius - 1));
        }
    }
    Ok(MarkedDistance::AtMost(lambda_max))
}

/// The first word, in length-lex order, trivial in exactly one of the groups.
pub fn separating_word(
    g1: &MarkedGroup,
    g2: &MarkedGroup,
    lambda_max: usize,
) -> Result<Option<Word>, MarkedError> {
    if g1.rank() != g2.rank() {
        return Err(MarkedError::RankMismatch(g1.rank(), g2.rank()));
    }
    Ok(par::find_first(enumerate_ball(g1.rank(), lambda_max), |w| {
        Ok::<_, MarkedError>((g1.is_trivial(w)? != g2.is_trivial(w)?).then_some(()))
    })?
    .map(|(w, ())| w))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceRow {
    pub i: usize,
    pub distance: MarkedDistance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    pub family: String,
    pub lambda_max: usize,
    pub rows: Vec<ConvergenceRow>,
    /// Λ(i) never decreases over the tested range.
    pub non_decreasing: bool,
}

pub fn convergence_report(
    family: &FamilySpec,
    indices: impl IntoIterator<Item = usize>,
    lambda_max: usize,
) -> Result<ConvergenceReport, MarkedError> {
    let limit = family.limit_group()?;
    let mut rows = Vec::new();
    for i in indices {
        let member = family.member_group(i)?;
        rows.push(ConvergenceRow {
            i,
            distance: distance(&member, &limit, lambda_max)?,
        });
    }
    let non_decreasing = rows
        .windows(2)
        .all(|p| p[0].distance.lambda() <= p[1].distance.lambda());
    Ok(ConvergenceReport {
        family: family.name.clone(),
        lambda_max,
        rows,
        non_decreasing,
    })
}
