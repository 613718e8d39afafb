//! `marklab`: areas, Dehn functions, relation balls, distances and the
//! convergent-sequence checks from the command line.
//!
//! Exit codes: 0 success, 1 I/O or internal error, 2 bad input (including
//! refusals such as an undefined `L`), 3 no derivation within caps,
//! 4 Unknown oracle verdict or inconclusive check, 5 a failed check.

mod cache;
mod render;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use marklab::dehn::{combine, corollary_from_reports, DehnRecord, TheoremContext};
use marklab::families::builtin_family;
use marklab::marked::separating_word;
use marklab::oracle::DEFAULT_MAX_COSETS;
use marklab::{
    area_escalate, area_search, convergence_report, distance, rel_ball, AreaError, AreaOutcome,
    Check, DehnError, DehnOptions, FamilyError, FamilySpec, MarkedError, MarkedGroup, OracleError,
    OracleSpec, Presentation, SearchCaps, TheoremReport,
};

use cache::Cache;
use render::{Format, Report, Summary, Table};

#[derive(Parser, Debug)]
#[command(
    name = "marklab",
    version,
    about = "Areas, Dehn functions and distances of marked groups"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    #[arg(long, env = "MARKLAB_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Longest intermediate word in area searches; defaults to max(12, input length).
    #[arg(long, global = true, value_parser = positive)]
    length_cap: Option<usize>,
    #[arg(long, default_value_t = 1_000_000, global = true, value_parser = positive)]
    node_cap: usize,
    #[arg(long, default_value_t = 10, global = true)]
    lambda_max: usize,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, value_parser = positive)]
    workers: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
struct Source {
    /// Presentation file.
    #[arg(short = 'p', long = "presentation", conflicts_with_all = ["family", "manifest"])]
    presentation: Option<PathBuf>,
    /// Oracle for `-p`: abelian:ORDERS, coset[:N], free, bounded:L,N, rewriting:RULES or JSON.
    #[arg(long)]
    oracle: Option<String>,
    #[command(flatten)]
    family: FamilyArgs,
}

#[derive(Args, Debug, Clone, Default)]
struct FamilyArgs {
    /// Built-in family: cyclicZ, zxz, dihedral.
    #[arg(long)]
    family: Option<String>,
    /// Family manifest (JSON).
    #[arg(long, conflicts_with = "family")]
    manifest: Option<PathBuf>,
    /// Member index: `5`, `3..6` (inclusive) or `3,5`.
    #[arg(long = "i")]
    i: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Area of a word, with a certificate.
    Area {
        #[arg(short = 'p', long = "presentation")]
        presentation: PathBuf,
        #[arg(short = 'w', long = "word")]
        word: String,
        /// Also search with the length cap doubled and report whether the value is stable.
        #[arg(long)]
        escalate: bool,
    },
    /// Dehn-function values.
    Dehn {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Relation ball of radius --lambda-max.
    RelBall {
        #[command(flatten)]
        source: Source,
    },
    /// Distance between two marked groups, or a family member and its limit.
    Dist {
        #[arg(long = "p1", requires = "p2", conflicts_with_all = ["family", "manifest"])]
        p1: Option<PathBuf>,
        #[arg(long = "p2", requires = "p1")]
        p2: Option<PathBuf>,
        #[arg(long)]
        oracle1: Option<String>,
        #[arg(long)]
        oracle2: Option<String>,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Distances of family members to the limit.
    Converge {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Finite checks relating member and limit Dehn functions.
    VerifyTheorem {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    Unknown(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Input(_) => 2,
            CliError::NotFound(_) => 3,
            CliError::Unknown(_) => 4,
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> CliError {
        match e {
            FamilyError::Oracle(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        CliError::Input(e.to_string())
    }
}

impl From<MarkedError> for CliError {
    fn from(e: MarkedError) -> CliError {
        match e {
            MarkedError::Unknown { .. } => CliError::Unknown(e.to_string()),
            MarkedError::Family(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<DehnError> for CliError {
    fn from(e: DehnError) -> CliError {
        match e {
            DehnError::Unknown { .. } => CliError::Unknown(e.to_string()),
            DehnError::NotFound { .. } => CliError::NotFound(e.to_string()),
            DehnError::LUndefined => CliError::Input(format!("refused: {e}")),
            DehnError::Marked(e) => e.into(),
            DehnError::Family(e) => e.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

struct Ctx {
    common: Common,
    cache: Cache,
}

impl Ctx {
    fn caps(&self, input_len: usize) -> SearchCaps {
        let length_cap = self.common.length_cap.unwrap_or(input_len.max(12));
        SearchCaps::new(length_cap, self.common.node_cap)
    }
}

fn read_presentation(path: &Path) -> Result<Presentation, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let p = marklab::parse_presentation(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    Ok(match name {
        Some(n) => p.with_name(n),
        None => p,
    })
}

fn default_oracle(p: &Presentation) -> OracleSpec {
    if p.relators().is_empty() {
        OracleSpec::free(p.rank())
    } else {
        OracleSpec::coset_table(p, DEFAULT_MAX_COSETS)
    }
}

fn oracle_for(p: &Presentation, text: Option<&str>) -> Result<OracleSpec, CliError> {
    match text {
        Some(t) => Ok(OracleSpec::parse(t, p)?),
        None => Ok(default_oracle(p)),
    }
}

fn parse_indices(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Input(format!("bad index list `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in text.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(out)
}

impl FamilyArgs {
    fn spec(&self) -> Result<Option<FamilySpec>, CliError> {
        if let Some(path) = &self.manifest {
            return Ok(Some(FamilySpec::from_manifest(path)?));
        }
        match &self.family {
            Some(name) => Ok(Some(builtin_family(name)?)),
            None => Ok(None),
        }
    }

    fn require(&self) -> Result<FamilySpec, CliError> {
        self.spec()?
            .ok_or_else(|| CliError::Input("a family is required (--family or --manifest)".into()))
    }

    fn indices(&self) -> Result<Option<Vec<usize>>, CliError> {
        self.i.as_deref().map(parse_indices).transpose()
    }

    fn single_index(&self) -> Result<Option<usize>, CliError> {
        match self.indices()? {
            None => Ok(None),
            Some(v) if v.len() == 1 => Ok(Some(v[0])),
            Some(_) => Err(CliError::Input("this command takes a single --i".into())),
        }
    }
}

/// The marked group named by the source flags: a file, a family member, or
/// a family limit when no index is given.
fn resolve_group(source: &Source) -> Result<(Presentation, OracleSpec), CliError> {
    if let Some(path) = &source.presentation {
        let p = read_presentation(path)?;
        let spec = oracle_for(&p, source.oracle.as_deref())?;
        return Ok((p, spec));
    }
    let family = source.family.require()?;
    let (p, spec) = match source.family.single_index()? {
        Some(i) => family.member(i)?,
        None => family.limit.clone(),
    };
    let spec = match &source.oracle {
        Some(t) => OracleSpec::parse(t, &p)?,
        None => spec,
    };
    Ok((p, spec))
}

fn group(p: Presentation, spec: OracleSpec) -> Result<MarkedGroup, CliError> {
    Ok(MarkedGroup::new(p, spec)?)
}

fn label(p: &Presentation) -> String {
    p.name().map_or_else(
        || p.canonical_text().replace('\n', " ").trim().to_string(),
        str::to_string,
    )
}

fn cmd_area(ctx: &Ctx, path: &Path, word: &str, escalate: bool) -> Result<Report, CliError> {
    let p = read_presentation(path)?;
    let w = p
        .parse_word(word)
        .map_err(|e| CliError::Input(format!("word: {e}")))?;
    let caps = ctx.caps(w.len());
    let area_err = |e: AreaError| match e {
        AreaError::NoRelators => CliError::NotFound(format!("`{word}`: {e}")),
        other => CliError::Input(other.to_string()),
    };
    let (outcome, stable) = if escalate {
        let e = area_escalate(&p, &w, caps).map_err(area_err)?;
        (e.first, Some(e.stable))
    } else {
        (area_search(&p, &w, caps).map_err(area_err)?, None)
    };
    let word_text = p.format_word(&w);
    match outcome {
        AreaOutcome::Found(r) => {
            let records = r.certificate.to_records(p.alphabet());
            let mut json = json!({
                "presentation": p.canonical_text(),
                "word": word_text,
                "value": r.value,
                "exact": r.exact,
                "lower_bound": r.lower_bound,
                "certificate": records,
                "stats": r.stats,
            });
            let mut pairs = vec![
                ("word", word_text.clone()),
                ("value", r.value.to_string()),
                ("exact", r.exact.to_string()),
                ("lower_bound", r.lower_bound.to_string()),
                ("states_visited", r.stats.states_visited.to_string()),
                ("rounds", r.stats.rounds.to_string()),
            ];
            if let Some(stable) = stable {
                json["stable"] = Value::Bool(stable);
                pairs.push(("stable", stable.to_string()));
            }
            let fields = Table::fields(pairs).titled(format!("area in {}", label(&p)));
            let mut cert = Table::new(["k", "conjugator", "relator", "sign"]).titled("certificate");
            for (k, f) in records.iter().enumerate() {
                let rel = p.format_word(&p.relators()[f.relator]);
                cert.row([
                    (k + 1).to_string(),
                    f.conjugator.clone(),
                    rel,
                    f.sign.clone(),
                ]);
            }
            Ok(Report::new(
                json,
                vec![fields, cert],
                Summary::of(r.exact, true),
            ))
        }
        AreaOutcome::NotFound { stats, exhaustive } => {
            let json = json!({
                "presentation": p.canonical_text(),
                "word": word_text,
                "status": "not_found",
                "exhaustive": exhaustive,
                "stats": stats,
            });
            let fields = Table::fields([
                ("word", word_text),
                ("status", "not found".to_string()),
                ("exhaustive", exhaustive.to_string()),
                ("states_visited", stats.states_visited.to_string()),
            ])
            .titled(format!("area in {}", label(&p)));
            Ok(Report::new(json, vec![fields], Summary::Inconclusive).with_code(3))
        }
    }
}

fn dehn_params(p: &Presentation, spec: &OracleSpec, n: usize, opts: &DehnOptions) -> Value {
    json!({
        "presentation": p.canonical_text(),
        "oracle": spec,
        "n": n,
        "caps": opts.caps,
        "witness_limit": opts.witness_limit,
        "cyclic_shortcut": opts.cyclic_shortcut,
    })
}

fn dehn_records(
    ctx: &Ctx,
    p: &Presentation,
    spec: &OracleSpec,
    ns: &[usize],
    opts: &DehnOptions,
) -> Result<Vec<DehnRecord>, CliError> {
    let cached: Vec<Option<DehnRecord>> = ns
        .iter()
        .map(|&n| ctx.cache.get("dehn", &dehn_params(p, spec, n, opts)))
        .collect();
    let missing: Vec<usize> = ns
        .iter()
        .zip(&cached)
        .filter(|(_, c)| c.is_none())
        .map(|(&n, _)| n)
        .collect();
    let mut fresh = Vec::new();
    if !missing.is_empty() {
        let g = group(p.clone(), spec.clone())?;
        for d in marklab::dehn_table(&g, &missing, opts)? {
            let rec = d.to_record(p);
            ctx.cache
                .put("dehn", &dehn_params(p, spec, d.n, opts), &rec);
            fresh.push(rec);
        }
    }
    let mut fresh = fresh.into_iter();
    Ok(cached
        .into_iter()
        .map(|c| c.unwrap_or_else(|| fresh.next().expect("one fresh record per miss")))
        .collect())
}

fn witness_cell(ws: &[String]) -> String {
    const SHOWN: usize = 4;
    let mut s = ws.iter().take(SHOWN).cloned().collect::<Vec<_>>().join(" ");
    if ws.len() > SHOWN {
        s.push_str(&format!(" (+{} more)", ws.len() - SHOWN));
    }
    s
}

fn cmd_dehn(ctx: &Ctx, source: &Source, ns: &[usize]) -> Result<Report, CliError> {
    let (p, spec) = resolve_group(source)?;
    let max_n = ns.iter().copied().max().unwrap_or(0);
    let mut opts = DehnOptions::new(ctx.caps(max_n));
    if source.presentation.is_none() {
        opts.cyclic_shortcut = source.family.require()?.cyclic_shortcut;
    }
    let records = dehn_records(ctx, &p, &spec, ns, &opts)?;
    let exact = records.iter().all(|r| r.exact);
    let mut t = Table::new(["n", "value", "exact", "witnesses"])
        .titled(format!("Dehn function of {}", label(&p)));
    for r in &records {
        t.row([
            r.n.to_string(),
            r.value.to_string(),
            r.exact.to_string(),
            witness_cell(&r.witnesses),
        ]);
    }
    let json = json!({
        "presentation": p.canonical_text(),
        "oracle": spec,
        "caps": opts.caps,
        "values": records,
    });
    Ok(Report::new(json, vec![t], Summary::of(exact, true)))
}

fn cmd_rel_ball(ctx: &Ctx, source: &Source) -> Result<Report, CliError> {
    let (p, spec) = resolve_group(source)?;
    let g = group(p.clone(), spec.clone())?;
    let ball = rel_ball(&g, ctx.common.lambda_max)?;
    let record = ball.to_record(&p);
    let mut t = Table::new(["word"]).titled(format!(
        "Rel_{} of {} ({} elements)",
        record.lambda,
        label(&p),
        record.members.len()
    ));
    for m in &record.members {
        t.row([m]);
    }
    let json = json!({
        "presentation": p.canonical_text(),
        "oracle": spec,
        "lambda": record.lambda,
        "size": record.members.len(),
        "members": record.members,
    });
    Ok(Report::new(json, vec![t], Summary::Verified))
}

fn cmd_dist(
    ctx: &Ctx,
    p1: Option<&Path>,
    p2: Option<&Path>,
    o1: Option<&str>,
    o2: Option<&str>,
    family: &FamilyArgs,
) -> Result<Report, CliError> {
    let (g1, g2) = match (p1, p2) {
        (Some(a), Some(b)) => {
            let (a, b) = (read_presentation(a)?, read_presentation(b)?);
            let (sa, sb) = (oracle_for(&a, o1)?, oracle_for(&b, o2)?);
            (group(a, sa)?, group(b, sb)?)
        }
        _ => {
            let f = family.require()?;
            let i = family
                .single_index()?
                .ok_or_else(|| CliError::Input("--i is required with a family".into()))?;
            (f.member_group(i)?, f.limit_group()?)
        }
    };
    let lambda_max = ctx.common.lambda_max;
    let d = distance(&g1, &g2, lambda_max)?;
    let sep = separating_word(&g1, &g2, lambda_max)?.map(|w| g1.presentation().format_word(&w));
    let json = json!({
        "g1": label(g1.presentation()),
        "g2": label(g2.presentation()),
        "lambda_max": lambda_max,
        "distance": d,
        "separating_word": sep,
    });
    let t = Table::fields([
        ("g1", label(g1.presentation())),
        ("g2", label(g2.presentation())),
        ("kind", d.kind().to_string()),
        ("lambda", d.lambda().to_string()),
        ("distance", d.display()),
        ("separating_word", sep.unwrap_or_else(|| "-".into())),
    ])
    .titled("marked distance");
    Ok(Report::new(json, vec![t], Summary::Verified))
}

fn cmd_converge(ctx: &Ctx, family: &FamilyArgs) -> Result<Report, CliError> {
    let f = family.require()?;
    let indices = family
        .indices()?
        .ok_or_else(|| CliError::Input("--i is required".into()))?;
    let report = convergence_report(&f, indices, ctx.common.lambda_max)?;
    let mut t = Table::new(["i", "kind", "lambda", "distance"]).titled(format!(
        "{} members against the limit (lambda_max {})",
        report.family, report.lambda_max
    ));
    for r in &report.rows {
        t.row([
            r.i.to_string(),
            r.distance.kind().into(),
            r.distance.lambda().to_string(),
            r.distance.display(),
        ]);
    }
    let mut s = Table::fields([("non_decreasing", report.non_decreasing)]);
    s.title = Some("trend".into());
    let json = serde_json::to_value(&report).expect("report serializes");
    Ok(Report::new(json, vec![t, s], Summary::Verified))
}

fn theorem_params(ctx: &TheoremContext, i: usize, n: usize) -> Result<Value, CliError> {
    let (mp, ms) = ctx.family.member(i)?;
    let (lp, ls) = &ctx.family.limit;
    Ok(json!({
        "family": ctx.family.name,
        "limit": lp.canonical_text(),
        "limit_oracle": ls,
        "member": mp.canonical_text(),
        "member_oracle": ms,
        "i": i,
        "n": n,
        "caps": ctx.opts.caps,
        "cyclic_shortcut": ctx.opts.cyclic_shortcut,
    }))
}

fn check_cell(c: Check) -> &'static str {
    c.label()
}

fn cmd_verify_theorem(ctx: &Ctx, family: &FamilyArgs, ns: &[usize]) -> Result<Report, CliError> {
    let f = family.require()?;
    let indices = family
        .indices()?
        .ok_or_else(|| CliError::Input("--i is required".into()))?;
    let l = f
        .limit
        .0
        .max_relator_length()
        .ok_or(DehnError::LUndefined)?;
    let max_n = ns.iter().copied().max().unwrap_or(0).max(l);
    let tctx = TheoremContext::new(f, DehnOptions::new(ctx.caps(max_n)))?;

    let mut reports: Vec<TheoremReport> = Vec::new();
    let mut corollaries = Vec::new();
    for &n in ns {
        let mut delta_n = None;
        let mut at_n = Vec::new();
        for &i in &indices {
            let params = theorem_params(&tctx, i, n)?;
            let report = match ctx.cache.get::<TheoremReport>("theorem", &params) {
                Some(r) => r,
                None => {
                    if delta_n.is_none() {
                        delta_n = Some(tctx.limit_dehn(n)?);
                    }
                    let r = tctx.check(i, n, delta_n.as_ref().expect("set above"))?;
                    ctx.cache.put("theorem", &params, &r);
                    r
                }
            };
            at_n.push(report);
        }
        if let Some(c) = corollary_from_reports(&at_n) {
            corollaries.push(c);
        }
        reports.extend(at_n);
    }

    let all_checks = reports
        .iter()
        .flat_map(|r| r.checks())
        .chain(corollaries.iter().map(|c| c.ok));
    let verdict = combine(all_checks);
    let (summary, code) = match verdict {
        Check::Fail => (Summary::Failed, 5),
        Check::Inconclusive => (Summary::Inconclusive, 4),
        _ => (Summary::Verified, 0),
    };

    let name = &tctx.family.name;
    let mut main = Table::new([
        "i",
        "n",
        "agree",
        "d_i(n)",
        "d(n)",
        "K_i",
        "d_i(L)",
        "L",
        "star",
        "K<=d_i(L)",
        "ratio<=d(n)",
    ])
    .titled(format!("{name}: member checks"));
    for r in &reports {
        let q = |v: marklab::dehn::Quantity| {
            if v.exact {
                v.value.to_string()
            } else {
                format!("<={}", v.value)
            }
        };
        main.row([
            r.i.to_string(),
            r.n.to_string(),
            r.ball_agreement.to_string(),
            q(r.delta_i_n),
            q(r.delta_n),
            q(r.K_i),
            q(r.delta_i_L),
            r.L.to_string(),
            check_cell(r.inequality_star_ok).into(),
            check_cell(r.k_le_delta_L_ok).into(),
            check_cell(r.ratio_le_delta_ok).into(),
        ]);
    }
    let mut cor = Table::new(["n", "M", "d(n)", "included", "excluded", "ok"])
        .titled(format!("{name}: d_i(n) <= M d(n)"));
    for c in &corollaries {
        let ids = |inc: bool| {
            let v: Vec<String> = c
                .rows
                .iter()
                .filter(|r| r.included == inc)
                .map(|r| r.i.to_string())
                .collect();
            if v.is_empty() {
                "-".to_string()
            } else {
                v.join(",")
            }
        };
        cor.row([
            c.n.to_string(),
            c.M.value.to_string(),
            c.delta_n.value.to_string(),
            ids(true),
            ids(false),
            check_cell(c.ok).to_string(),
        ]);
    }
    let mut trend = Table::new(["i", "n", "d_i(n)/d_i(L)", "d(n)", "agree>=n"])
        .titled(format!("{name}: ratio trend"));
    let mut trend_json = Vec::new();
    for r in &reports {
        let ratio = format!("{}/{}", r.ratio.numerator, r.ratio.denominator);
        trend.row([
            r.i.to_string(),
            r.n.to_string(),
            ratio.clone(),
            r.delta_n.value.to_string(),
            r.balls_agree().to_string(),
        ]);
        trend_json.push(json!({
            "i": r.i,
            "n": r.n,
            "ratio": r.ratio,
            "delta_n": r.delta_n.value,
            "balls_agree": r.balls_agree(),
        }));
    }
    let json = json!({
        "family": name,
        "L": tctx.l,
        "reports": reports,
        "corollary": corollaries,
        "trend": trend_json,
        "verdict": verdict,
    });
    Ok(Report::new(json, vec![main, cor, trend], summary).with_code(code))
}

fn run(cli: Cli) -> Result<Report, CliError> {
    if let Some(w) = cli.common.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    let ctx = Ctx {
        cache: Cache::new(cli.common.cache_dir.clone()),
        common: cli.common,
    };
    match &cli.command {
        Command::Area {
            presentation,
            word,
            escalate,
        } => cmd_area(&ctx, presentation, word, *escalate),
        Command::Dehn { source, n } => cmd_dehn(&ctx, source, n),
        Command::RelBall { source } => cmd_rel_ball(&ctx, source),
        Command::Dist {
            p1,
            p2,
            oracle1,
            oracle2,
            family,
        } => cmd_dist(
            &ctx,
            p1.as_deref(),
            p2.as_deref(),
            oracle1.as_deref(),
            oracle2.as_deref(),
            family,
        ),
        Command::Converge { family } => cmd_converge(&ctx, family),
        Command::VerifyTheorem { family, n } => cmd_verify_theorem(&ctx, family, n),
    }
}

/// `-p1`/`-p2` are accepted as spellings of `--p1`/`--p2`.
fn normalize_args(args: impl Iterator<Item = String>) -> Vec<String> {
    args.map(|a| match a.as_str() {
        "-p1" => "--p1".to_string(),
        "-p2" => "--p2".to_string(),
        _ => a,
    })
    .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(normalize_args(std::env::args()));
    let format = cli.common.format;
    match run(cli) {
        Ok(report) => {
            let (out, err) = report.render(format);
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if let Some(e) = err {
                eprintln!("{e}");
            }
            ExitCode::from(report.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_lists() {
        assert_eq!(parse_indices("5").unwrap(), vec![5]);
        assert_eq!(parse_indices("3..6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_indices("3..=4,7").unwrap(), vec![3, 4, 7]);
        assert!(parse_indices("6..3").is_err());
        assert!(parse_indices("x").is_err());
    }

    #[test]
    fn p1_spelling() {
        let args = normalize_args(
            ["marklab", "dist", "-p1", "a", "-p2", "b"]
                .map(String::from)
                .into_iter(),
        );
        let cli = Cli::try_parse_from(args).unwrap();
        match cli.command {
            Command::Dist { p1, p2, .. } => {
                assert_eq!(p1.unwrap(), PathBuf::from("a"));
                assert_eq!(p2.unwrap(), PathBuf::from("b"));
            }
            other => panic!("{other:?}"),
        }
    }
}
