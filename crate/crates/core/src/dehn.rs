//! Dehn-function values and the finite inequalities relating the Dehn
//! functions of a convergent sequence of marked groups to that of its
//! finitely presented limit.
//!
//! For a limit `⟨X | R⟩` with `L = max ‖r‖` and members `⟨X | R_i⟩` that are
//! quotients of it, with `K_i = max_{r ∈ R} Area_{R_i}(r)`:
//!
//! * `Area_{R_i}(w) ≤ K_i · Area_R(w)` for every relation `w` of the limit,
//!   by substituting member certificates for each limit relator;
//! * hence `δ_i(n) ≤ K_i · δ(n)` once `Rel_n` of member and limit agree;
//! * `K_i ≤ δ_i(L)`, since each `r` is a relation of the member of length
//!   at most `L`;
//! * so `δ_i(n) / δ_i(L) ≤ δ(n)`.
//!
//! The limsup over `i` is not finitely observable; reports carry the
//! per-`i` checks only.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::area::{AreaError, AreaOutcome, AreaResult, AreaSearcher, SearchCaps};
use crate::certificate::Certificate;
use crate::families::{FamilyError, FamilySpec};
use crate::marked::{distance, MarkedDistance, MarkedError, MarkedGroup};
use crate::par;
use crate::presentation::Presentation;
use crate::word::{enumerate_ball, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DehnError {
    #[error("oracle returned Unknown on `{word}`")]
    Unknown { word: String },
    #[error("no derivation of `{word}` within caps (exhaustive: {exhaustive}); the oracle says it is trivial")]
    NotFound { word: String, exhaustive: bool },
    #[error("area search on `{word}`: {source}")]
    Area {
        word: String,
        #[source]
        source: AreaError,
    },
    #[error("limit presentation has no relators, so L is undefined")]
    LUndefined,
    #[error("member {i} is not a quotient of the limit: relator `{relator}` is nontrivial in it")]
    NotAQuotient { i: usize, relator: String },
    #[error("delta_i(L) = 0 for member {i}; the ratio is undefined")]
    ZeroDeltaL { i: usize },
    #[error(transparent)]
    Marked(#[from] MarkedError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DehnOptions {
    pub caps: SearchCaps,
    /// Most witnesses kept per value.
    pub witness_limit: usize,
    /// Skip words that are not cyclically reduced. Sound because area is
    /// conjugation invariant and the cyclic reduction is shorter, but off
    /// unless a family opts in.
    pub cyclic_shortcut: bool,
}

impl DehnOptions {
    pub fn new(caps: SearchCaps) -> DehnOptions {
        DehnOptions {
            caps,
            witness_limit: 16,
            cyclic_shortcut: false,
        }
    }
}

/// `δ(n)` with exactness and the words attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnValue {
    pub n: usize,
    pub value: usize,
    pub exact: bool,
    pub witnesses: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DehnRecord {
    pub n: usize,
    pub value: usize,
    pub exact: bool,
    pub witnesses: Vec<String>,
}

impl DehnValue {
    pub fn to_record(&self, p: &Presentation) -> DehnRecord {
        DehnRecord {
            n: self.n,
            value: self.value,
            exact: self.exact,
            witnesses: self.witnesses.iter().map(|w| p.format_word(w)).collect(),
        }
    }
}

/// Area of every relation of length at most `radius`, in length-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaTable {
    pub radius: usize,
    pub entries: Vec<(Word, AreaResult)>,
}

impl AreaTable {
    pub fn dehn(&self, n: usize, witness_limit: usize) -> DehnValue {
        let within = || self.entries.iter().filter(|(w, _)| w.len() <= n);
        let value = within().map(|(_, a)| a.value).max().unwrap_or(0);
        let exact = within().all(|(_, a)| a.exact);
        let witnesses = if value == 0 {
            vec![Word::identity(self.rank())]
        } else {
            within()
                .filter(|(_, a)| a.value == value)
                .take(witness_limit)
                .map(|(w, _)| w.clone())
                .collect()
        };
        DehnValue {
            n,
            value,
            exact,
            witnesses,
        }
    }

    fn rank(&self) -> usize {
        self.entries.first().map_or(1, |(w, _)| w.rank())
    }
}

fn area_of(
    searcher: Option<&AreaSearcher>,
    p: &Presentation,
    w: &Word,
    caps: SearchCaps,
) -> Result<AreaResult, DehnError> {
    let word = || p.format_word(w);
    let Some(searcher) = searcher else {
        // No relators: only the identity is a relation.
        return Err(DehnError::NotFound {
            word: word(),
            exhaustive: true,
        });
    };
    match searcher.search(w, caps) {
        Ok(AreaOutcome::Found(r)) => Ok(r),
        Ok(AreaOutcome::NotFound { exhaustive, .. }) => Err(DehnError::NotFound {
            word: word(),
            exhaustive,
        }),
        Err(source) => Err(DehnError::Area {
            word: word(),
            source,
        }),
    }
}

/// Areas of all nonempty relations of length at most `radius`.
pub fn area_table(
    g: &MarkedGroup,
    radius: usize,
    opts: &DehnOptions,
) -> Result<AreaTable, DehnError> {
    let p = g.presentation();
    let searcher = match AreaSearcher::new(p) {
        Ok(s) => Some(s),
        Err(AreaError::NoRelators) => None,
        Err(source) => {
            return Err(DehnError::Area {
                word: "1".into(),
                source,
            })
        }
    };
    let words = enumerate_ball(g.rank(), radius)
        .filter(|w| !w.is_empty())
        .filter(|w| !opts.cyclic_shortcut || w.is_cyclically_reduced());
    let entries = par::map_in_order(words, |w| {
        if !g.is_trivial(w).map_err(|e| match e {
            MarkedError::Unknown { word } => DehnError::Unknown { word },
            other => other.into(),
        })? {
            return Ok(None);
        }
        area_of(searcher.as_ref(), p, w, opts.caps).map(Some)
    })?;
    Ok(AreaTable { radius, entries })
}

pub fn dehn(g: &MarkedGroup, n: usize, opts: &DehnOptions) -> Result<DehnValue, DehnError> {
    Ok(area_table(g, n, opts)?.dehn(n, opts.witness_limit))
}

/// `δ(n)` for each requested `n`, sharing one enumeration.
pub fn dehn_table(
    g: &MarkedGroup,
    ns: &[usize],
    opts: &DehnOptions,
) -> Result<Vec<DehnValue>, DehnError> {
    let radius = ns.iter().copied().max().unwrap_or(0);
    let table = area_table(g, radius, opts)?;
    Ok(ns
        .iter()
        .map(|&n| table.dehn(n, opts.witness_limit))
        .collect())
}

/// True iff every relator of `limit` is trivial in `member`.
pub fn quotient_check(limit: &Presentation, member: &MarkedGroup) -> Result<bool, DehnError> {
    Ok(first_nontrivial_relator(limit, member)?.is_none())
}

fn first_nontrivial_relator(
    limit: &Presentation,
    member: &MarkedGroup,
) -> Result<Option<Word>, DehnError> {
    for r in limit.relators() {
        if !member.is_trivial(r)? {
            return Ok(Some(r.clone()));
        }
    }
    Ok(None)
}

/// `K_i`, with one certificate per limit relator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KValue {
    pub value: usize,
    pub exact: bool,
    pub certificates: Vec<Certificate>,
}

pub fn compute_k(
    limit: &Presentation,
    member: &Presentation,
    caps: SearchCaps,
) -> Result<KValue, DehnError> {
    let searcher = AreaSearcher::new(member).ok();
    let mut value = 0;
    let mut exact = true;
    let mut certificates = Vec::new();
    for r in limit.relators() {
        let caps = caps.with_length_cap(caps.length_cap.max(r.len()));
        let a = area_of(searcher.as_ref(), member, r, caps)?;
        value = value.max(a.value);
        exact &= a.exact;
        certificates.push(a.certificate);
    }
    Ok(KValue {
        value,
        exact,
        certificates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quantity {
    pub value: usize,
    pub exact: bool,
}

impl From<&DehnValue> for Quantity {
    fn from(d: &DehnValue) -> Quantity {
        Quantity {
            value: d.value,
            exact: d.exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub numerator: usize,
    pub denominator: usize,
}

impl Ratio {
    pub fn new(numerator: usize, denominator: usize) -> Ratio {
        let g = gcd(numerator, denominator).max(1);
        Ratio {
            numerator: numerator / g,
            denominator: denominator / g,
        }
    }

    pub fn le_integer(self, k: usize) -> bool {
        self.numerator <= k * self.denominator
    }

    pub fn as_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Pass,
    Fail,
    /// Some contributing value is only an upper bound.
    Inconclusive,
    /// The balls disagree at `n`; the inequality is not claimed for this `i`.
    NotApplicable,
}

impl Check {
    fn of(exact: bool, holds: bool) -> Check {
        match (exact, holds) {
            (false, _) => Check::Inconclusive,
            (true, true) => Check::Pass,
            (true, false) => Check::Fail,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Check::Pass => "pass",
            Check::Fail => "fail",
            Check::Inconclusive => "inconclusive",
            Check::NotApplicable => "n/a",
        }
    }
}

/// All quantities for one `(i, n)`.
#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub family: String,
    pub i: usize,
    pub n: usize,
    /// Largest `λ ≤ n` with equal relation balls.
    pub ball_agreement: usize,
    pub delta_i_n: Quantity,
    pub delta_n: Quantity,
    pub K_i: Quantity,
    pub delta_i_L: Quantity,
    pub L: usize,
    pub ratio: Ratio,
    pub inequality_star_ok: Check,
    pub k_le_delta_L_ok: Check,
    pub ratio_le_delta_ok: Check,
}

impl TheoremReport {
    pub fn checks(&self) -> [Check; 3] {
        [
            self.inequality_star_ok,
            self.k_le_delta_L_ok,
            self.ratio_le_delta_ok,
        ]
    }

    pub fn balls_agree(&self) -> bool {
        self.ball_agreement >= self.n
    }
}

/// The whole-family context shared by theorem and corollary checks.
pub struct TheoremContext {
    pub family: FamilySpec,
    pub limit: MarkedGroup,
    pub l: usize,
    pub opts: DehnOptions,
}

impl TheoremContext {
    pub fn new(family: FamilySpec, opts: DehnOptions) -> Result<TheoremContext, DehnError> {
        let l = family
            .limit
            .0
            .max_relator_length()
            .ok_or(DehnError::LUndefined)?;
        let limit = family.limit_group()?;
        let opts = DehnOptions {
            cyclic_shortcut: opts.cyclic_shortcut || family.cyclic_shortcut,
            ..opts
        };
        Ok(TheoremContext {
            family,
            limit,
            l,
            opts,
        })
    }

    pub fn limit_dehn(&self, n: usize) -> Result<DehnValue, DehnError> {
        dehn(&self.limit, n, &self.opts)
    }

    pub fn check(
        &self,
        i: usize,
        n: usize,
        delta_n: &DehnValue,
    ) -> Result<TheoremReport, DehnError> {
        let member = self.family.member_group(i)?;
        let limit_p = self.limit.presentation();
        if let Some(r) = first_nontrivial_relator(limit_p, &member)? {
            return Err(DehnError::NotAQuotient {
                i,
                relator: limit_p.format_word(&r),
            });
        }
        let ball_agreement = match distance(&member, &self.limit, n)? {
            MarkedDistance::Exact(l) | MarkedDistance::AtMost(l) => l,
        };
        let deltas = dehn_table(&member, &[n, self.l], &self.opts)?;
        let (delta_i_n, delta_i_l) = (Quantity::from(&deltas[0]), Quantity::from(&deltas[1]));
        let k = compute_k(limit_p, member.presentation(), self.opts.caps)?;
        let k_i = Quantity {
            value: k.value,
            exact: k.exact,
        };
        let delta_n = Quantity::from(delta_n);
        if delta_i_l.value == 0 {
            return Err(DehnError::ZeroDeltaL { i });
        }
        let ratio = Ratio::new(delta_i_n.value, delta_i_l.value);
        let agree = ball_agreement >= n;
        let star_exact = delta_i_n.exact && delta_n.exact && k_i.exact;
        let inequality_star_ok = if agree {
            Check::of(star_exact, delta_i_n.value <= k_i.value * delta_n.value)
        } else {
            Check::NotApplicable
        };
        let k_le_delta_l_ok = Check::of(k_i.exact && delta_i_l.exact, k_i.value <= delta_i_l.value);
        let ratio_le_delta_ok = if agree {
            Check::of(
                delta_i_n.exact && delta_i_l.exact && delta_n.exact,
                ratio.le_integer(delta_n.value),
            )
        } else {
            Check::NotApplicable
        };
        Ok(TheoremReport {
            family: self.family.name.clone(),
            i,
            n,
            ball_agreement,
            delta_i_n,
            delta_n,
            K_i: k_i,
            delta_i_L: delta_i_l,
            L: self.l,
            ratio,
            inequality_star_ok,
            k_le_delta_L_ok: k_le_delta_l_ok,
            ratio_le_delta_ok,
        })
    }
}

pub fn theorem_check(
    family: &FamilySpec,
    i: usize,
    n: usize,
    opts: &DehnOptions,
) -> Result<TheoremReport, DehnError> {
    let ctx = TheoremContext::new(family.clone(), *opts)?;
    let delta_n = ctx.limit_dehn(n)?;
    ctx.check(i, n, &delta_n)
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryRow {
    pub i: usize,
    pub delta_i_n: Quantity,
    pub delta_i_L: Quantity,
    pub ball_agreement: usize,
    /// Ball agreement at `n`; excluded rows are reported but not checked.
    pub included: bool,
    pub ok: Check,
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub family: String,
    pub n: usize,
    /// `max_i δ_i(L)` over the tested range.
    pub M: Quantity,
    pub delta_n: Quantity,
    pub rows: Vec<CorollaryRow>,
    pub ok: Check,
}

/// `δ_i(n) ≤ M · δ(n)` with `M = max δ_i(L)`, from per-`i` reports sharing
/// one `n`.
pub fn corollary_from_reports(reports: &[TheoremReport]) -> Option<CorollaryReport> {
    let first = reports.first()?;
    let m = Quantity {
        value: reports.iter().map(|r| r.delta_i_L.value).max().unwrap_or(0),
        exact: reports.iter().all(|r| r.delta_i_L.exact),
    };
    let delta_n = first.delta_n;
    let rows: Vec<CorollaryRow> = reports
        .iter()
        .map(|r| {
            let included = r.balls_agree();
            let ok = if included {
                Check::of(
                    m.exact && r.delta_i_n.exact && delta_n.exact,
                    r.delta_i_n.value <= m.value * delta_n.value,
                )
            } else {
                Check::NotApplicable
            };
            CorollaryRow {
                i: r.i,
                delta_i_n: r.delta_i_n,
                delta_i_L: r.delta_i_L,
                ball_agreement: r.ball_agreement,
                included,
                ok,
            }
        })
        .collect();
    Some(CorollaryReport {
        family: first.family.clone(),
        n: first.n,
        M: m,
        delta_n,
        ok: combine(rows.iter().map(|r| r.ok)),
        rows,
    })
}

/// Fail dominates, then inconclusive; all-n/a counts as pass.
pub fn combine(checks: impl IntoIterator<Item = Check>) -> Check {
    let mut out = Check::Pass;
    for c in checks {
        match c {
            Check::Fail => return Check::Fail,
            Check::Inconclusive => out = Check::Inconclusive,
            _ => {}
        }
    }
    out
}

pub fn corollary_check(
    family: &FamilySpec,
    indices: impl IntoIterator<Item = usize>,
    n: usize,
    opts: &DehnOptions,
) -> Result<(Vec<TheoremReport>, Option<CorollaryReport>), DehnError> {
    let ctx = TheoremContext::new(family.clone(), *opts)?;
    let delta_n = ctx.limit_dehn(n)?;
    let reports = indices
        .into_iter()
        .map(|i| ctx.check(i, n, &delta_n))
        .collect::<Result<Vec<_>, _>>()?;
    let corollary = corollary_from_reports(&reports);
    Ok((reports, corollary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cyclic_z, dihedral, zxz};
    use crate::oracle::OracleSpec;
    use crate::presentation::parse_presentation;

    fn opts() -> DehnOptions {
        DehnOptions::new(SearchCaps::new(12, 1_000_000))
    }

    fn group(text: &str, spec: OracleSpec) -> MarkedGroup {
        MarkedGroup::new(parse_presentation(text).unwrap(), spec).unwrap()
    }

    #[test]
    fn dehn_examples() {
        let g = group("gens: a\nrels: a^3", OracleSpec::abelian(&[3]));
        let d = dehn(&g, 2, &opts()).unwrap();
        assert_eq!((d.value, d.exact), (0, true));
        assert_eq!(d.witnesses, vec![Word::identity(1)]);
        let d = dehn(&g, 7, &opts()).unwrap();
        assert_eq!(d.value, 2);
        let strs = d.to_record(g.presentation()).witnesses;
        assert_eq!(strs, vec!["aaaaaa", "AAAAAA"]);

        let z2 = group("gens: x y\nrels: [x,y]", OracleSpec::abelian(&[0, 0]));
        let d = dehn(&z2, 4, &opts()).unwrap();
        assert_eq!((d.value, d.exact, d.witnesses.len()), (1, true, 8));
    }

    #[test]
    fn dehn_of_free_group_is_zero() {
        let g = group("gens: x y\nrels:", OracleSpec::free(2));
        let d = dehn(&g, 6, &opts()).unwrap();
        assert_eq!((d.value, d.exact), (0, true));
    }

    #[test]
    fn unknown_verdicts_abort() {
        let p = parse_presentation("gens: a\nrels: a^3").unwrap();
        let spec = OracleSpec::bounded(&p, SearchCaps::new(6, 1000));
        let g = MarkedGroup::new(p, spec).unwrap();
        assert!(matches!(
            dehn(&g, 3, &opts()),
            Err(DehnError::Unknown { .. })
        ));
    }

    #[test]
    fn small_caps_report_the_word() {
        let g = group("gens: x y\nrels: [x,y]", OracleSpec::abelian(&[0, 0]));
        let tight = DehnOptions::new(SearchCaps::new(6, 1));
        match dehn(&g, 6, &tight) {
            Err(DehnError::NotFound { word, .. }) => assert!(!word.is_empty()),
            other => panic!("{other:?}"),
        }
        let short = DehnOptions::new(SearchCaps::new(3, 1000));
        assert!(matches!(dehn(&g, 4, &short), Err(DehnError::Area { .. })));
    }

    #[test]
    fn table_is_monotone_and_shortcut_agrees() {
        let g = group(
            "gens: a b\nrels: a^2; b^2; (a b)^3",
            OracleSpec::coset_table(
                &parse_presentation("gens: a b\nrels: a^2; b^2; (a b)^3").unwrap(),
                1000,
            ),
        );
        let ns: Vec<usize> = (0..=6).collect();
        let full = dehn_table(&g, &ns, &opts()).unwrap();
        assert!(full.windows(2).all(|p| p[0].value <= p[1].value));
        assert_eq!(full[1].value, 0);
        assert_eq!(full[2].value, 1);
        let mut o = opts();
        o.cyclic_shortcut = true;
        let short = dehn_table(&g, &ns, &o).unwrap();
        let values = |t: &[DehnValue]| t.iter().map(|d| d.value).collect::<Vec<_>>();
        assert_eq!(values(&full), values(&short));
    }

    #[test]
    fn quotient_examples() {
        let z2 = parse_presentation("gens: x y\nrels: [x,y]").unwrap();
        let zz5 = group("gens: x y\nrels: [x,y]; y^5", OracleSpec::abelian(&[0, 5]));
        assert!(quotient_check(&z2, &zz5).unwrap());
        let dinf = parse_presentation("gens: a b\nrels: a^2; b^2").unwrap();
        let (p3, s3) = dihedral().member(3).unwrap();
        assert!(quotient_check(&dinf, &MarkedGroup::new(p3, s3).unwrap()).unwrap());
        let z5 = parse_presentation("gens: a\nrels: a^5").unwrap();
        let z = group("gens: a\nrels:", OracleSpec::abelian(&[0]));
        assert!(!quotient_check(&z5, &z).unwrap());
    }

    #[test]
    fn k_examples() {
        let caps = SearchCaps::new(12, 1_000_000);
        let z2 = parse_presentation("gens: x y\nrels: [x,y]").unwrap();
        let m = parse_presentation("gens: x y\nrels: [x,y]; y^5").unwrap();
        assert_eq!(compute_k(&z2, &m, caps).unwrap().value, 1);
        let a4 = parse_presentation("gens: a\nrels: a^4").unwrap();
        let a2 = parse_presentation("gens: a\nrels: a^2").unwrap();
        let k = compute_k(&a4, &a2, caps).unwrap();
        assert_eq!((k.value, k.exact), (2, true));
    }

    #[test]
    fn theorem_zxz_example() {
        let r = theorem_check(&zxz(), 5, 4, &opts()).unwrap();
        assert_eq!(r.ball_agreement, 4);
        assert_eq!(
            (
                r.delta_i_n.value,
                r.delta_n.value,
                r.K_i.value,
                r.L,
                r.delta_i_L.value
            ),
            (1, 1, 1, 4, 1)
        );
        assert_eq!(r.ratio, Ratio::new(1, 1));
        assert_eq!(r.checks(), [Check::Pass; 3]);
    }

    #[test]
    fn theorem_reports_disagreement_as_informational() {
        let r = theorem_check(&zxz(), 3, 4, &opts()).unwrap();
        assert_eq!(r.ball_agreement, 2);
        assert_eq!(r.inequality_star_ok, Check::NotApplicable);
        assert_eq!(r.k_le_delta_L_ok, Check::Pass);
    }

    #[test]
    fn theorem_refuses_undefined_l() {
        assert!(matches!(
            theorem_check(&cyclic_z(), 3, 2, &opts()),
            Err(DehnError::LUndefined)
        ));
    }

    #[test]
    fn dihedral_theorem() {
        let r = theorem_check(&dihedral(), 4, 3, &opts()).unwrap();
        assert_eq!(r.ball_agreement, 3);
        assert_eq!(r.checks(), [Check::Pass; 3]);
        assert_eq!(r.K_i.value, 1);
    }

    #[test]
    fn corollary_zxz() {
        let (reports, c) = corollary_check(&zxz(), 3..=5, 4, &opts()).unwrap();
        assert_eq!(reports.len(), 3);
        let c = c.unwrap();
        assert_eq!(c.M.value, 1);
        assert_eq!(c.ok, Check::Pass);
        assert_eq!(c.rows.iter().filter(|r| r.included).count(), 1);
    }

    #[test]
    fn ratio_reduces() {
        assert_eq!(
            Ratio::new(4, 6),
            Ratio {
                numerator: 2,
                denominator: 3
            }
        );
        assert!(Ratio::new(3, 2).le_integer(2));
        assert!(!Ratio::new(5, 2).le_integer(2));
    }
}
