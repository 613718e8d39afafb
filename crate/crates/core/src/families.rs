//! Parametric sequences of marked groups converging to a finitely presented
//! limit, each member paired with an exact word-problem oracle.
//!
//! Built in:
//!
//! * `cyclicZ`: `⟨x | x^i⟩ → ⟨x |⟩ = Z`. The limit has no relators, so `L`
//!   is undefined; used for distance and Dehn demos only.
//! * `zxz`: `⟨x, y | [x,y], y^i⟩ → ⟨x, y | [x,y]⟩ = Z²`, abelian oracles.
//! * `dihedral`: `⟨a, b | a², b², (ab)^i⟩ → ⟨a, b | a², b²⟩ = D_∞`, a coset
//!   table for each member and a confluent rewriting system for the limit.
//!
//! User families come from a JSON manifest:
//!
//! ```json
//! {
//!   "name": "cyclic-squares",
//!   "limit": { "presentation": "z.pres", "oracle": "abelian:0" },
//!   "member_template": { "presentation": "gens: x\nrels: x^$i", "oracle": "abelian:$i" },
//!   "valid_i": 2
//! }
//! ```
//!
//! The limit presentation path is relative to the manifest. `$i` is
//! substituted in the member presentation and oracle, which may be given in
//! the short text form or as a JSON object.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use crate::marked::MarkedGroup;
use crate::oracle::{OracleError, OracleSpec, DEFAULT_MAX_COSETS};
use crate::presentation::{parse_presentation, Presentation, PresentationError};
use crate::rewriting::infinite_dihedral_rules;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family `{family}` is defined for i >= {valid_i}, got {i}")]
    BelowValid {
        family: String,
        i: usize,
        valid_i: usize,
    },
    #[error("unknown family `{0}`")]
    Unknown(String),
    #[error("member presentation: {0}")]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("limit and member {i} have different generator counts")]
    RankMismatch { i: usize },
    #[error("manifest: {0}")]
    Manifest(String),
}

type Builder = Arc<dyn Fn(usize) -> Result<(Presentation, OracleSpec), FamilyError> + Send + Sync>;

#[derive(Clone)]
pub struct FamilySpec {
    pub name: String,
    pub limit: (Presentation, OracleSpec),
    member: Builder,
    pub valid_i: usize,
    /// Soundness statement for the oracles.
    pub notes: String,
    /// Dehn enumeration may skip words that are not cyclically reduced.
    pub cyclic_shortcut: bool,
}

impl std::fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FamilySpec")
            .field("name", &self.name)
            .field("limit", &self.limit)
            .field("valid_i", &self.valid_i)
            .finish_non_exhaustive()
    }
}

impl FamilySpec {
    pub fn new(
        name: impl Into<String>,
        limit: (Presentation, OracleSpec),
        valid_i: usize,
        notes: impl Into<String>,
        member: impl Fn(usize) -> Result<(Presentation, OracleSpec), FamilyError>
            + Send
            + Sync
            + 'static,
    ) -> FamilySpec {
        FamilySpec {
            name: name.into(),
            limit,
            member: Arc::new(member),
            valid_i,
            notes: notes.into(),
            cyclic_shortcut: false,
        }
    }

    /// The i-th presentation with its oracle.
    pub fn member(&self, i: usize) -> Result<(Presentation, OracleSpec), FamilyError> {
        if i < self.valid_i {
            return Err(FamilyError::BelowValid {
                family: self.name.clone(),
                i,
                valid_i: self.valid_i,
            });
        }
        let (p, spec) = (self.member)(i)?;
        if p.rank() != self.limit.0.rank() {
            return Err(FamilyError::RankMismatch { i });
        }
        Ok((p, spec))
    }

    pub fn member_group(&self, i: usize) -> Result<MarkedGroup, FamilyError> {
        let (p, spec) = self.member(i)?;
        Ok(MarkedGroup::new(p, spec)?)
    }

    pub fn limit_group(&self) -> Result<MarkedGroup, FamilyError> {
        Ok(MarkedGroup::new(
            self.limit.0.clone(),
            self.limit.1.clone(),
        )?)
    }

    pub fn from_manifest(path: &Path) -> Result<FamilySpec, FamilyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FamilyError::Manifest(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        FamilySpec::from_manifest_str(&text, base)
    }

    pub fn from_manifest_str(text: &str, base_dir: &Path) -> Result<FamilySpec, FamilyError> {
        let m: Manifest =
            serde_json::from_str(text).map_err(|e| FamilyError::Manifest(e.to_string()))?;
        let limit_path = base_dir.join(&m.limit.presentation);
        let limit_text = std::fs::read_to_string(&limit_path)
            .map_err(|e| FamilyError::Manifest(format!("{}: {e}", limit_path.display())))?;
        let limit_p = parse_presentation(&limit_text)?.with_name(format!("{} limit", m.name));
        let limit_spec = oracle_from_value(&m.limit.oracle, &limit_p, None)?;
        let template = m.member_template;
        let name = m.name.clone();
        Ok(FamilySpec::new(
            m.name,
            (limit_p, limit_spec),
            m.valid_i,
            m.notes
                .unwrap_or_else(|| "user manifest; oracle soundness asserted by the author".into()),
            move |i| {
                let text = template.presentation.replace("$i", &i.to_string());
                let p = parse_presentation(&text)?.with_name(format!("{name}({i})"));
                let spec = oracle_from_value(&template.oracle, &p, Some(i))?;
                Ok((p, spec))
            },
        ))
    }
}

#[derive(Deserialize)]
struct Manifest {
    name: String,
    limit: ManifestLimit,
    member_template: ManifestMember,
    valid_i: usize,
    #[serde(default)]
    notes: Option<String>,
}

#[derive(Deserialize)]
struct ManifestLimit {
    presentation: String,
    oracle: serde_json::Value,
}

#[derive(Deserialize)]
struct ManifestMember {
    presentation: String,
    oracle: serde_json::Value,
}

fn oracle_from_value(
    v: &serde_json::Value,
    p: &Presentation,
    i: Option<usize>,
) -> Result<OracleSpec, FamilyError> {
    let subst = |s: &str| match i {
        Some(i) => s
            .replace("\"$i\"", &i.to_string())
            .replace("$i", &i.to_string()),
        None => s.to_string(),
    };
    let text = match v {
        serde_json::Value::String(s) => subst(s),
        other => subst(&other.to_string()),
    };
    Ok(OracleSpec::parse(&text, p)?)
}

fn pres(text: &str, name: String) -> Presentation {
    parse_presentation(text)
        .expect("built-in presentation parses")
        .with_name(name)
}

pub fn cyclic_z() -> FamilySpec {
    FamilySpec::new(
        "cyclicZ",
        (
            pres("gens: x\nrels:", "Z".into()),
            OracleSpec::abelian(&[0]),
        ),
        2,
        "abelian oracles are exact for cyclic groups",
        |i| {
            Ok((
                pres(&format!("gens: x\nrels: x^{i}"), format!("Z/{i}")),
                OracleSpec::abelian(&[i as u64]),
            ))
        },
    )
}

pub fn zxz() -> FamilySpec {
    FamilySpec::new(
        "zxz",
        (
            pres("gens: x y\nrels: [x,y]", "Z^2".into()),
            OracleSpec::abelian(&[0, 0]),
        ),
        2,
        "abelian oracles are exact for Z x Z/i and Z^2 with the standard marking",
        |i| {
            Ok((
                pres(
                    &format!("gens: x y\nrels: [x,y]; y^{i}"),
                    format!("Z x Z/{i}"),
                ),
                OracleSpec::abelian(&[0, i as u64]),
            ))
        },
    )
}

pub fn dihedral() -> FamilySpec {
    FamilySpec::new(
        "dihedral",
        (
            pres("gens: a b\nrels: a^2; b^2", "D_inf".into()),
            OracleSpec::rewriting(2, infinite_dihedral_rules()),
        ),
        2,
        "members use their own complete coset table; the limit uses the complete system aa->1, bb->1, A->a, B->b",
        |i| {
            let p = pres(&format!("gens: a b\nrels: a^2; b^2; (a b)^{i}"), format!("D_{i}"));
            let spec = OracleSpec::coset_table(&p, DEFAULT_MAX_COSETS);
            Ok((p, spec))
        },
    )
}

pub fn builtin_families() -> Vec<FamilySpec> {
    vec![cyclic_z(), zxz(), dihedral()]
}

pub fn builtin_family(name: &str) -> Result<FamilySpec, FamilyError> {
    builtin_families()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| FamilyError::Unknown(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::coset_enumerate;
    use crate::oracle::Oracle;

    #[test]
    fn members() {
        let (p, spec) = zxz().member(5).unwrap();
        assert_eq!(
            p,
            parse_presentation("gens: x y\nrels: [x,y]; y^5")
                .unwrap()
                .with_name("Z x Z/5")
        );
        assert_eq!(spec, OracleSpec::abelian(&[0, 5]));
        let (p, _) = cyclic_z().member(3).unwrap();
        assert_eq!(p.relators()[0].len(), 3);
        let (p, _) = zxz().member(2).unwrap();
        assert_eq!(p.relators().len(), 2);
        assert!(matches!(
            cyclic_z().member(1),
            Err(FamilyError::BelowValid { .. })
        ));
    }

    #[test]
    fn dihedral_tables() {
        let (_, spec) = dihedral().member(3).unwrap();
        match Oracle::build(&spec, 2).unwrap() {
            Oracle::Table(t) => assert_eq!(t.cosets(), 6),
            other => panic!("{other:?}"),
        }
        let (p, _) = dihedral().member(2).unwrap();
        assert_eq!(coset_enumerate(&p, 1000).unwrap().cosets(), 4);
    }

    #[test]
    fn cyclic_limit_has_no_l() {
        assert_eq!(cyclic_z().limit.0.max_relator_length(), None);
        assert_eq!(zxz().limit.0.max_relator_length(), Some(4));
        assert_eq!(dihedral().limit.0.max_relator_length(), Some(2));
    }

    #[test]
    fn manifest() {
        let dir = std::env::temp_dir().join(format!("marklab-manifest-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("z.pres"), "gens: x\nrels:\n").unwrap();
        let text = r#"{
            "name": "cyc",
            "limit": {"presentation": "z.pres", "oracle": "abelian:0"},
            "member_template": {"presentation": "gens: x\nrels: x^$i", "oracle": {"kind": "abelian", "orders": ["$i"]}},
            "valid_i": 3
        }"#;
        let f = FamilySpec::from_manifest_str(text, &dir).unwrap();
        let (p, spec) = f.member(4).unwrap();
        assert_eq!(p.relators()[0].len(), 4);
        assert_eq!(spec, OracleSpec::abelian(&[4]));
        assert!(f.member(2).is_err());
        assert!(FamilySpec::from_manifest_str("{}", &dir).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn lookup() {
        assert_eq!(builtin_family("zxz").unwrap().name, "zxz");
        assert!(builtin_family("nope").is_err());
    }
}
