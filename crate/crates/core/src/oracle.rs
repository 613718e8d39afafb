//! Word-problem deciders.
//!
//! An [`OracleSpec`] is a serializable description; [`Oracle::build`] turns
//! it into a ready decider (coset tables are enumerated once, at build time).
//! Every exact oracle is only correct on its soundness domain, which the
//! spec states in words via [`OracleSpec::soundness_domain`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::area::{AreaError, AreaOutcome, AreaResult, AreaSearcher, SearchCaps};
use crate::coset::{coset_enumerate, CayleyTable, CosetError};
use crate::presentation::{parse_presentation, Presentation, PresentationError};
use crate::rewriting::{RewriteError, RewriteSystem, Rule};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("abelian orders vector has length {found}, expected {expected}")]
    OrdersLength { found: usize, expected: usize },
    #[error("abelian order {0} is invalid (use 0 for infinite or at least 2)")]
    BadOrder(u64),
    #[error("oracle is over {found} generators, expected {expected}")]
    RankMismatch { found: usize, expected: usize },
    #[error("generator partition is invalid: {0}")]
    BadPartition(String),
    #[error("oracle presentation: {0}")]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Area(#[from] AreaError),
    #[error("cannot parse oracle `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Trivial,
    NonTrivial,
    /// The semidecider ran out of budget.
    Unknown {
        length_cap: usize,
        node_cap: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductComponent {
    /// Zero-based generators of the whole group, in the component's order.
    pub generators: Vec<usize>,
    pub oracle: OracleSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleSpec {
    /// `⟨x_1..x_m | all commutators, x_j^{orders[j]}⟩`, 0 meaning infinite order.
    Abelian { orders: Vec<u64> },
    /// Todd–Coxeter over the trivial subgroup of a finite group.
    CosetTable {
        presentation: String,
        max_cosets: usize,
    },
    /// A terminating rule set asserted confluent for the group.
    ConfluentRewriting { rank: usize, rules: Vec<Rule> },
    /// Splice search; only ever answers Trivial or Unknown.
    BoundedDerivation {
        presentation: String,
        length_cap: usize,
        node_cap: usize,
    },
    /// Direct product: decides each block of generators separately.
    Product { components: Vec<ProductComponent> },
}

impl OracleSpec {
    pub fn abelian(orders: &[u64]) -> OracleSpec {
        OracleSpec::Abelian {
            orders: orders.to_vec(),
        }
    }

    pub fn coset_table(p: &Presentation, max_cosets: usize) -> OracleSpec {
        OracleSpec::CosetTable {
            presentation: p.canonical_text(),
            max_cosets,
        }
    }

    pub fn rewriting(rank: usize, rules: Vec<Rule>) -> OracleSpec {
        OracleSpec::ConfluentRewriting { rank, rules }
    }

    pub fn bounded(p: &Presentation, caps: SearchCaps) -> OracleSpec {
        OracleSpec::BoundedDerivation {
            presentation: p.canonical_text(),
            length_cap: caps.length_cap,
            node_cap: caps.node_cap,
        }
    }

    /// Free group on `rank` generators: the empty rewriting system.
    pub fn free(rank: usize) -> OracleSpec {
        OracleSpec::rewriting(rank, Vec::new())
    }

    pub fn is_exact(&self) -> bool {
        match self {
            OracleSpec::BoundedDerivation { .. } => false,
            OracleSpec::Product { components } => components.iter().all(|c| c.oracle.is_exact()),
            _ => true,
        }
    }

    pub fn soundness_domain(&self) -> String {
        match self {
            OracleSpec::Abelian { orders } => format!(
                "abelian groups presented as the direct product of cyclic groups of orders {orders:?} (0 = infinite), one per generator"
            ),
            OracleSpec::CosetTable { .. } => {
                "exactly the group it enumerates; finite groups only".to_string()
            }
            OracleSpec::ConfluentRewriting { .. } => {
                "groups for which the rule set is complete: confluent, with rules holding in the group".to_string()
            }
            OracleSpec::BoundedDerivation { .. } => {
                "any presentation; Trivial answers are certified, others are Unknown".to_string()
            }
            OracleSpec::Product { components } => format!(
                "direct products whose factors are generated by the declared blocks: [{}]",
                components
                    .iter()
                    .map(|c| format!("{:?}: {}", c.generators, c.oracle.soundness_domain()))
                    .collect::<Vec<_>>()
                    .join("; ")
            ),
        }
    }

    /// Short textual form used on the command line, resolved against the
    /// presentation the oracle is for:
    ///
    /// * `abelian:0,5`
    /// * `coset` or `coset:MAX`
    /// * `rewriting:aa->1;bb->1;A->a;B->b`
    /// * `free`
    /// * `bounded:LENGTH_CAP,NODE_CAP`
    /// * any JSON form of the spec, starting with `{`
    pub fn parse(text: &str, p: &Presentation) -> Result<OracleSpec, OracleError> {
        let text = text.trim();
        let bad = || OracleError::Parse(text.to_string());
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|_| bad());
        }
        let (kind, arg) = match text.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (text, None),
        };
        let numbers = |a: &str| -> Result<Vec<u64>, OracleError> {
            a.split(',')
                .map(|s| s.trim().parse::<u64>().map_err(|_| bad()))
                .collect()
        };
        match (kind, arg) {
            ("abelian", Some(a)) => Ok(OracleSpec::Abelian {
                orders: numbers(a)?,
            }),
            ("coset", None) => Ok(OracleSpec::coset_table(p, DEFAULT_MAX_COSETS)),
            ("coset", Some(a)) => {
                let n = a.parse().map_err(|_| bad())?;
                Ok(OracleSpec::coset_table(p, n))
            }
            ("free", None) => Ok(OracleSpec::free(p.rank())),
            ("bounded", Some(a)) => match numbers(a)?.as_slice() {
                &[l, n] => Ok(OracleSpec::bounded(
                    p,
                    SearchCaps::new(l as usize, n as usize),
                )),
                _ => Err(bad()),
            },
            ("rewriting", Some(a)) => {
                let mut rules = Vec::new();
                for piece in a.split(';').filter(|s| !s.trim().is_empty()) {
                    let (l, r) = piece.split_once("->").ok_or_else(bad)?;
                    let raw = |s: &str| -> Result<Vec<i64>, OracleError> {
                        Ok(p.alphabet()
                            .parse_raw(s, 1, 1)
                            .map_err(|e| OracleError::Parse(e.to_string()))?
                            .into_iter()
                            .map(Letter::signed_index)
                            .collect())
                    };
                    rules.push(Rule {
                        lhs: raw(l)?,
                        rhs: raw(r)?,
                    });
                }
                Ok(OracleSpec::rewriting(p.rank(), rules))
            }
            _ => Err(bad()),
        }
    }
}

pub const DEFAULT_MAX_COSETS: usize = 100_000;

/// A built decider.
#[derive(Debug, Clone)]
pub enum Oracle {
    Abelian(Vec<u64>),
    Table(CayleyTable),
    Rewriting(RewriteSystem),
    Bounded {
        presentation: Presentation,
        caps: SearchCaps,
    },
    Product {
        rank: usize,
        components: Vec<(Vec<usize>, Oracle)>,
    },
}

fn check_rank(found: usize, expected: usize) -> Result<(), OracleError> {
    if found != expected {
        Err(OracleError::RankMismatch { found, expected })
    } else {
        Ok(())
    }
}

impl Oracle {
    /// Builds the decider for words over `rank` generators.
    pub fn build(spec: &OracleSpec, rank: usize) -> Result<Oracle, OracleError> {
        match spec {
            OracleSpec::Abelian { orders } => {
                if orders.len() != rank {
                    return Err(OracleError::OrdersLength {
                        found: orders.len(),
                        expected: rank,
                    });
                }
                if let Some(&o) = orders.iter().find(|&&o| o == 1) {
                    return Err(OracleError::BadOrder(o));
                }
                Ok(Oracle::Abelian(orders.clone()))
            }
            OracleSpec::CosetTable {
                presentation,
                max_cosets,
            } => {
                let p = parse_presentation(presentation)?;
                check_rank(p.rank(), rank)?;
                Ok(Oracle::Table(coset_enumerate(&p, *max_cosets)?))
            }
            OracleSpec::ConfluentRewriting { rank: r, rules } => {
                check_rank(*r, rank)?;
                Ok(Oracle::Rewriting(
                    RewriteSystem::new(rank, rules)?.assume_confluent(),
                ))
            }
            OracleSpec::BoundedDerivation {
                presentation,
                length_cap,
                node_cap,
            } => {
                let p = parse_presentation(presentation)?;
                check_rank(p.rank(), rank)?;
                AreaSearcher::new(&p)?;
                Ok(Oracle::Bounded {
                    presentation: p,
                    caps: SearchCaps::new(*length_cap, *node_cap),
                })
            }
            OracleSpec::Product { components } => {
                let mut seen = vec![false; rank];
                let mut built = Vec::with_capacity(components.len());
                for c in components {
                    for &g in &c.generators {
                        if g >= rank || seen[g] {
                            return Err(OracleError::BadPartition(format!(
                                "generator {g} out of range or repeated"
                            )));
                        }
                        seen[g] = true;
                    }
                    if c.generators.is_empty() {
                        return Err(OracleError::BadPartition("empty block".into()));
                    }
                    built.push((
                        c.generators.clone(),
                        Oracle::build(&c.oracle, c.generators.len())?,
                    ));
                }
                if let Some(g) = seen.iter().position(|s| !s) {
                    return Err(OracleError::BadPartition(format!(
                        "generator {g} in no block"
                    )));
                }
                Ok(Oracle::Product {
                    rank,
                    components: built,
                })
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Oracle::Bounded { .. } => false,
            Oracle::Product { components, .. } => components.iter().all(|(_, o)| o.is_exact()),
            _ => true,
        }
    }

    pub fn decide(&self, w: &Word) -> Result<Verdict, OracleError> {
        if w.is_empty() {
            return Ok(Verdict::Trivial);
        }
        let yes = |b: bool| {
            if b {
                Verdict::Trivial
            } else {
                Verdict::NonTrivial
            }
        };
        match self {
            Oracle::Abelian(orders) => abelian_decide(orders, w),
            Oracle::Table(t) => Ok(yes(t.is_trivial(w)?)),
            Oracle::Rewriting(r) => {
                check_rank(w.rank(), r.rank())?;
                Ok(yes(r.normal_form(w)?.is_empty()))
            }
            Oracle::Bounded { presentation, caps } => {
                Ok(bounded_derivation_decide(presentation, w, *caps)?.0)
            }
            Oracle::Product { rank, components } => {
                check_rank(w.rank(), *rank)?;
                let mut out = Verdict::Trivial;
                for (gens, oracle) in components {
                    let projected = project(w, gens);
                    match oracle.decide(&projected)? {
                        Verdict::Trivial => {}
                        Verdict::NonTrivial => return Ok(Verdict::NonTrivial),
                        u @ Verdict::Unknown { .. } => out = u,
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Deletes letters outside `gens` and renumbers the rest block-locally.
fn project(w: &Word, gens: &[usize]) -> Word {
    Word::from_letters(
        gens.len(),
        w.letters().iter().filter_map(|l| {
            gens.iter()
                .position(|&g| g == l.generator())
                .map(|k| Letter::new(k, l.is_inverse()))
        }),
    )
}

/// Trivial iff every exponent sum vanishes modulo its order.
pub fn abelian_decide(orders: &[u64], w: &Word) -> Result<Verdict, OracleError> {
    if orders.len() != w.rank() {
        return Err(OracleError::OrdersLength {
            found: orders.len(),
            expected: w.rank(),
        });
    }
    let trivial = w.exponent_sums().iter().zip(orders).all(|(&s, &o)| {
        if o == 0 {
            s == 0
        } else {
            s.rem_euclid(o as i64) == 0
        }
    });
    Ok(if trivial {
        Verdict::Trivial
    } else {
        Verdict::NonTrivial
    })
}

pub fn table_decide(t: &CayleyTable, w: &Word) -> Result<Verdict, OracleError> {
    Ok(if t.is_trivial(w)? {
        Verdict::Trivial
    } else {
        Verdict::NonTrivial
    })
}

pub fn rewriting_decide(r: &RewriteSystem, w: &Word) -> Result<Verdict, OracleError> {
    Oracle::Rewriting(r.clone()).decide(w)
}

/// Semidecision by splice search. The length cap is raised to `‖w‖` when
/// smaller. Never answers NonTrivial.
pub fn bounded_derivation_decide(
    p: &Presentation,
    w: &Word,
    caps: SearchCaps,
) -> Result<(Verdict, Option<AreaResult>), OracleError> {
    let caps = caps.with_length_cap(caps.length_cap.max(w.len()));
    match AreaSearcher::new(p)?.search(w, caps)? {
        AreaOutcome::Found(r) => Ok((Verdict::Trivial, Some(r))),
        AreaOutcome::NotFound { .. } => Ok((
            Verdict::Unknown {
                length_cap: caps.length_cap,
                node_cap: caps.node_cap,
            },
            None,
        )),
    }
}

/// Builds the oracle and decides one word.
pub fn decide(spec: &OracleSpec, w: &Word) -> Result<Verdict, OracleError> {
    Oracle::build(spec, w.rank())?.decide(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_certificate;
    use crate::rewriting::infinite_dihedral_rules;
    use crate::word::enumerate_ball;

    fn pres(t: &str) -> Presentation {
        parse_presentation(t).unwrap()
    }

    #[test]
    fn abelian_examples() {
        let p = pres("gens: x y\nrels: [x,y]");
        let w = |s: &str| p.parse_word(s).unwrap();
        assert_eq!(
            abelian_decide(&[0, 0], &w("[x,y]")).unwrap(),
            Verdict::Trivial
        );
        assert_eq!(
            abelian_decide(&[0, 5], &w("y^5")).unwrap(),
            Verdict::Trivial
        );
        assert_eq!(
            abelian_decide(&[0, 5], &w("x y^5")).unwrap(),
            Verdict::NonTrivial
        );
        assert_eq!(
            abelian_decide(&[0, 5], &w("y^-10")).unwrap(),
            Verdict::Trivial
        );
        assert!(matches!(
            abelian_decide(&[0], &w("x")),
            Err(OracleError::OrdersLength { .. })
        ));
        assert!(matches!(
            Oracle::build(&OracleSpec::abelian(&[0, 1]), 2),
            Err(OracleError::BadOrder(1))
        ));
    }

    #[test]
    fn table_examples() {
        let d3 = pres("gens: a b\nrels: a^2; b^2; (a b)^3");
        let t = coset_enumerate(&d3, 1000).unwrap();
        assert_eq!(
            table_decide(&t, &d3.parse_word("(a b)^3").unwrap()).unwrap(),
            Verdict::Trivial
        );
        assert_eq!(
            table_decide(&t, &d3.parse_word("a b").unwrap()).unwrap(),
            Verdict::NonTrivial
        );
        let z5 = pres("gens: a\nrels: a^5");
        let t = coset_enumerate(&z5, 100).unwrap();
        assert_eq!(
            table_decide(&t, &z5.parse_word("a^4").unwrap()).unwrap(),
            Verdict::NonTrivial
        );
        for r in d3.relators() {
            assert_eq!(
                table_decide(&coset_enumerate(&d3, 1000).unwrap(), r).unwrap(),
                Verdict::Trivial
            );
        }
    }

    #[test]
    fn rewriting_examples() {
        let r = RewriteSystem::new(2, &infinite_dihedral_rules())
            .unwrap()
            .assume_confluent();
        let p = pres("gens: a b\nrels: a^2; b^2");
        let w = |s: &str| p.parse_word(s).unwrap();
        assert_eq!(
            rewriting_decide(&r, &w("a b b a")).unwrap(),
            Verdict::Trivial
        );
        assert_eq!(
            rewriting_decide(&r, &w("a b a b")).unwrap(),
            Verdict::NonTrivial
        );
        assert_eq!(rewriting_decide(&r, &w("a^2")).unwrap(), Verdict::Trivial);
        let unmarked = RewriteSystem::new(2, &infinite_dihedral_rules()).unwrap();
        assert!(rewriting_decide(&unmarked, &w("a")).is_err());
    }

    #[test]
    fn bounded_examples() {
        let p = pres("gens: a\nrels: a^3");
        let (v, r) = bounded_derivation_decide(
            &p,
            &p.parse_word("a^6").unwrap(),
            SearchCaps::new(12, 100_000),
        )
        .unwrap();
        assert_eq!(v, Verdict::Trivial);
        let r = r.unwrap();
        assert!(verify_certificate(&p, &p.parse_word("a^6").unwrap(), &r.certificate).unwrap());
        let (v, _) =
            bounded_derivation_decide(&p, &p.parse_word("a").unwrap(), SearchCaps::new(12, 100))
                .unwrap();
        assert!(matches!(v, Verdict::Unknown { .. }));

        let z2 = pres("gens: x y\nrels: [x,y]");
        let w = z2.parse_word("x y^2 x^-1 y^-2").unwrap();
        let (v, r) = bounded_derivation_decide(&z2, &w, SearchCaps::new(10, 1_000_000)).unwrap();
        assert_eq!(v, Verdict::Trivial);
        assert!(verify_certificate(&z2, &w, &r.unwrap().certificate).unwrap());
    }

    #[test]
    fn dispatch_examples() {
        let p = pres("gens: x y\nrels: [x,y]; y^3");
        let product = OracleSpec::Product {
            components: vec![
                ProductComponent {
                    generators: vec![0],
                    oracle: OracleSpec::abelian(&[0]),
                },
                ProductComponent {
                    generators: vec![1],
                    oracle: OracleSpec::abelian(&[3]),
                },
            ],
        };
        assert_eq!(
            decide(&product, &p.parse_word("x y^3 x^-1").unwrap()).unwrap(),
            Verdict::Trivial
        );
        assert_eq!(
            decide(&product, &p.parse_word("x y x^-1").unwrap()).unwrap(),
            Verdict::NonTrivial
        );
        for spec in [
            product.clone(),
            OracleSpec::abelian(&[0, 3]),
            OracleSpec::coset_table(&pres("gens: x y\nrels: [x,y]; x^2; y^3"), 100),
            OracleSpec::free(2),
            OracleSpec::bounded(&p, SearchCaps::new(4, 10)),
        ] {
            assert_eq!(decide(&spec, &Word::identity(2)).unwrap(), Verdict::Trivial);
        }
        let bounded = OracleSpec::bounded(&p, SearchCaps::new(8, 1000));
        assert!(matches!(
            decide(&bounded, &p.parse_word("x").unwrap()).unwrap(),
            Verdict::Unknown { .. }
        ));
    }

    #[test]
    fn product_partition_is_validated() {
        let bad = OracleSpec::Product {
            components: vec![ProductComponent {
                generators: vec![0],
                oracle: OracleSpec::abelian(&[0]),
            }],
        };
        assert!(matches!(
            Oracle::build(&bad, 2),
            Err(OracleError::BadPartition(_))
        ));
    }

    #[test]
    fn exact_oracles_agree() {
        // Z/2 x Z/3 three ways, and D3 both as a table and checked against a product-free route.
        let p = pres("gens: x y\nrels: [x,y]; x^2; y^3");
        let abelian = Oracle::build(&OracleSpec::abelian(&[2, 3]), 2).unwrap();
        let table = Oracle::build(&OracleSpec::coset_table(&p, 1000), 2).unwrap();
        let prod = Oracle::build(
            &OracleSpec::Product {
                components: vec![
                    ProductComponent {
                        generators: vec![0],
                        oracle: OracleSpec::abelian(&[2]),
                    },
                    ProductComponent {
                        generators: vec![1],
                        oracle: OracleSpec::coset_table(&pres("gens: y\nrels: y^3"), 100),
                    },
                ],
            },
            2,
        )
        .unwrap();
        for w in enumerate_ball(2, 8) {
            let a = abelian.decide(&w).unwrap();
            assert_eq!(a, table.decide(&w).unwrap(), "{w:?}");
            assert_eq!(a, prod.decide(&w).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn text_forms() {
        let p = pres("gens: a b\nrels: a^2; b^2");
        assert_eq!(
            OracleSpec::parse("abelian:0,5", &p).unwrap(),
            OracleSpec::abelian(&[0, 5])
        );
        assert_eq!(
            OracleSpec::parse("rewriting:aa->1;bb->1;A->a;B->b", &p).unwrap(),
            OracleSpec::rewriting(2, infinite_dihedral_rules())
        );
        assert!(matches!(
            OracleSpec::parse("coset:50", &p).unwrap(),
            OracleSpec::CosetTable { max_cosets: 50, .. }
        ));
        let json = serde_json::to_string(&OracleSpec::abelian(&[3])).unwrap();
        assert_eq!(json, r#"{"kind":"abelian","orders":[3]}"#);
        assert_eq!(
            OracleSpec::parse(&json, &p).unwrap(),
            OracleSpec::abelian(&[3])
        );
        assert!(OracleSpec::parse("nonsense", &p).is_err());
    }
}
