//! Finite, certificate-backed computations on marked groups: words in free
//! groups, finite presentations, word-problem oracles, van Kampen areas and
//! Dehn functions, relation balls and the Gromov–Grigorchuk distance, and
//! checks relating Dehn functions along convergent sequences.

pub mod area;
pub mod certificate;
pub mod coset;
pub mod dehn;
pub mod exact_small;
pub mod families;
pub mod marked;
pub mod oracle;
mod par;
pub mod presentation;
pub mod rewriting;
pub mod syntax;
pub mod word;

pub use area::{
    area_escalate, area_search, AreaError, AreaOutcome, AreaResult, AreaSearcher, Escalation,
    SearchCaps, SearchStats,
};
pub use certificate::{
    compose_certificates, verify_certificate, Certificate, CertificateError, Factor, FactorRecord,
    Sign,
};
pub use coset::{coset_enumerate, CayleyTable, CosetError};
pub use dehn::{
    compute_k, corollary_check, dehn, dehn_table, quotient_check, theorem_check, Check,
    CorollaryReport, DehnError, DehnOptions, DehnValue, TheoremReport,
};
pub use exact_small::area_exact_small;
pub use families::{builtin_family, FamilyError, FamilySpec};
pub use marked::{
    convergence_report, distance, rel_ball, MarkedDistance, MarkedError, MarkedGroup, RelationBall,
};
pub use oracle::{Oracle, OracleError, OracleSpec, Verdict};
pub use presentation::{parse_presentation, Presentation, PresentationError};
pub use rewriting::{RewriteSystem, Rule};
pub use syntax::Alphabet;
pub use word::{Letter, Word, WordError};
