//! Game files, output formatting and the command implementations behind the
//! `rank1-nash` binary.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rank1_core::lemke_howson::{gprime_components, lh_run, reachability, LHPath};
use rank1_core::oracle::{support_enumeration_with, SupportMode};
use rank1_core::parametric::{
    enumerate_with, PivotCase, SweepOptions, SweepTrace, TraceObjective, TraceXi,
};
use rank1_core::polytope::{build_polyhedron, check_nondegenerate, equilibria_by_labels, Side};
use rank1_core::{
    generate_kt, parse_rational, BimatrixGame, EquilibriumPoint, Error, GameClass, RMatrix,
    RankOneFactorization, Rational,
};
use serde::Serialize;

pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const DEGENERATE: i32 = 2;
    pub const PARSE: i32 = 3;
    pub const PRECONDITION: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => exit::PARSE,
            CliError::Io { .. } => exit::IO,
            CliError::Core(Error::DegenerateGame(_)) => exit::DEGENERATE,
            CliError::Core(_) => exit::PRECONDITION,
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

/// Parse the text game format: `m n`, then `m` rows of `A`, then `m` rows of
/// `B`. Entries are integers or `p/q`; `#` starts a comment.
pub fn parse_game(text: &str) -> Result<BimatrixGame, CliError> {
    let mut rows = text.lines().enumerate().filter_map(|(k, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((k + 1, l))
    });
    let (line, header) = rows
        .next()
        .ok_or_else(|| parse_error(1, "empty game file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| parse_error(line, "expected `m n`"))?;
    let [m, n] = dims[..] else {
        return Err(parse_error(line, "expected `m n`"));
    };
    if m == 0 || n == 0 {
        return Err(parse_error(line, "dimensions must be positive"));
    }
    let mut read = |name: &str| -> Result<RMatrix, CliError> {
        let mut data = Vec::with_capacity(m * n);
        for i in 0..m {
            let (line, text) = rows
                .next()
                .ok_or_else(|| parse_error(0, format!("missing row {} of {name}", i + 1)))?;
            let entries: Vec<Rational> = text
                .split_whitespace()
                .map(|t| {
                    parse_rational(t).ok_or_else(|| parse_error(line, format!("bad entry `{t}`")))
                })
                .collect::<Result<_, _>>()?;
            if entries.len() != n {
                return Err(parse_error(
                    line,
                    format!("row of {name} has {} entries, expected {n}", entries.len()),
                ));
            }
            data.extend(entries);
        }
        Ok(RMatrix::from_vec(m, n, data)?)
    };
    let a = read("A")?;
    let b = read("B")?;
    if let Some((line, _)) = rows.next() {
        return Err(parse_error(line, "trailing data after B"));
    }
    Ok(BimatrixGame::new(a, b)?)
}

pub fn format_game(g: &BimatrixGame) -> String {
    let mut out = format!("{} {}\n", g.m(), g.n());
    for mat in [g.a(), g.b()] {
        for i in 0..mat.rows() {
            let row: Vec<String> = mat.row(i).iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn fmt_set(s: &BTreeSet<usize>) -> String {
    let parts: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn parse_csv(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(|t| {
            parse_rational(t.trim())
                .ok_or_else(|| CliError::Usage(format!("bad number `{t}` in --factor")))
        })
        .collect()
}

/// `["b=2,4", "c=2,4"]` in either order.
pub fn parse_factor(args: &[String]) -> Result<(Vec<Rational>, Vec<Rational>), CliError> {
    let (mut b, mut c) = (None, None);
    for a in args {
        match a.split_once('=') {
            Some(("b", v)) => b = Some(parse_csv(v)?),
            Some(("c", v)) => c = Some(parse_csv(v)?),
            _ => {
                return Err(CliError::Usage(format!(
                    "expected b=<csv> or c=<csv>, got `{a}`"
                )))
            }
        }
    }
    match (b, c) {
        (Some(b), Some(c)) => Ok((b, c)),
        _ => Err(CliError::Usage(
            "--factor needs both b=<csv> and c=<csv>".into(),
        )),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rank1-nash",
    version,
    about = "Exact equilibrium enumeration for bimatrix games of rank one"
)]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All equilibria by the parametric sweep (rank at most one).
    Enumerate {
        file: PathBuf,
        /// Factorization of A + B to sweep with, e.g. `--factor b=2,4 c=2,4`.
        #[arg(long, num_args = 2, value_names = ["b=CSV", "c=CSV"])]
        factor: Option<Vec<String>>,
        /// Print the breakpoint table.
        #[arg(long)]
        trace: bool,
    },
    /// All equilibria by support enumeration.
    Oracle {
        file: PathBuf,
        /// Try every support pair, not only equal sizes.
        #[arg(long)]
        strict: bool,
    },
    /// Completely labelled vertex pairs of P and Q.
    Labels { file: PathBuf },
    /// Lemke–Howson paths.
    Lh {
        file: PathBuf,
        #[command(flatten)]
        which: LhWhich,
    },
    /// Components of the graph G′.
    Gprime { file: PathBuf },
    /// Rank of A + B and its factorization when the rank is one.
    Rank { file: PathBuf },
    /// A game of rank one lower with the same equilibria.
    ReduceRank { file: PathBuf },
    /// Non-degeneracy test.
    Check { file: PathBuf },
    /// Write a generated game.
    Generate {
        /// The d × d family with a_ij = 2ij − i² + j², b_ij = 2ij + i² − j².
        #[arg(long, required = true)]
        kt: bool,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct LhWhich {
    /// Missing label (1-based).
    #[arg(long = "r")]
    pub r: Option<usize>,
    /// Every missing label, with the equilibria no path reaches.
    #[arg(long)]
    pub all: bool,
}

#[derive(Serialize)]
pub struct EquilibriumJson {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub payoff1: String,
    pub payoff2: String,
    pub source_xi: Option<String>,
}

impl From<&EquilibriumPoint> for EquilibriumJson {
    fn from(e: &EquilibriumPoint) -> Self {
        EquilibriumJson {
            x: strings(e.x()),
            y: strings(e.y()),
            payoff1: e.payoff1.to_string(),
            payoff2: e.payoff2.to_string(),
            source_xi: e.source_xi.as_ref().map(ToString::to_string),
        }
    }
}

#[derive(Serialize)]
pub struct TraceRowJson {
    /// Breakpoint, or `[lo, hi]` for an open interval.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<[String; 2]>,
    /// A value, or `"negative"` on an open interval.
    pub objective: String,
    pub binding: Vec<usize>,
}

#[derive(Serialize)]
pub struct PivotJson {
    pub xi: String,
    pub case: &'static str,
    pub leaving: usize,
    pub entering: usize,
}

#[derive(Serialize)]
struct EnumerateJson {
    equilibria: Vec<EquilibriumJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<TraceRowJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pivots: Option<Vec<PivotJson>>,
}

fn case_name(c: PivotCase) -> &'static str {
    match c {
        PivotCase::Feasibility => "feasibility",
        PivotCase::Optimality => "optimality",
        PivotCase::Both => "both",
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn equilibrium_line(e: &EquilibriumPoint) -> String {
    let mut s = format!(
        "x = {}  y = {}  payoffs = ({}, {})",
        fmt_vec(e.x()),
        fmt_vec(e.y()),
        e.payoff1,
        e.payoff2
    );
    if let Some(xi) = &e.source_xi {
        let _ = write!(s, "  xi = {xi}");
    }
    s
}

fn equilibria_text(eq: &[EquilibriumPoint]) -> String {
    let mut out = format!(
        "{} equilibri{}\n",
        eq.len(),
        if eq.len() == 1 { "um" } else { "a" }
    );
    for e in eq {
        out.push_str(&equilibrium_line(e));
        out.push('\n');
    }
    out
}

pub fn trace_rows_json(t: &SweepTrace) -> Vec<TraceRowJson> {
    t.rows
        .iter()
        .map(|r| {
            let (xi, interval) = match &r.xi {
                TraceXi::At(x) => (Some(x.to_string()), None),
                TraceXi::Between(lo, hi) => (None, Some([lo.to_string(), hi.to_string()])),
            };
            TraceRowJson {
                xi,
                interval,
                objective: match &r.objective {
                    TraceObjective::Value(v) => v.to_string(),
                    TraceObjective::Negative => "negative".into(),
                },
                binding: r.binding.iter().copied().collect(),
            }
        })
        .collect()
}

fn trace_text(t: &SweepTrace) -> String {
    let rows: Vec<[String; 3]> = t
        .rows
        .iter()
        .map(|r| {
            let xi = match &r.xi {
                TraceXi::At(x) => x.to_string(),
                TraceXi::Between(lo, hi) => format!("({lo}, {hi})"),
            };
            let obj = match &r.objective {
                TraceObjective::Value(v) => v.to_string(),
                TraceObjective::Negative => "< 0".into(),
            };
            [xi, obj, fmt_set(&r.binding)]
        })
        .collect();
    let w0 = rows.iter().map(|r| r[0].len()).max().unwrap_or(0).max(2);
    let w1 = rows.iter().map(|r| r[1].len()).max().unwrap_or(0).max(9);
    let mut out = format!("{:<w0$}  {:<w1$}  binding\n", "xi", "objective");
    for r in &rows {
        let _ = writeln!(out, "{:<w0$}  {:<w1$}  {}", r[0], r[1], r[2]);
    }
    for p in &t.breakpoints {
        let _ = writeln!(
            out,
            "pivot at {}: {}, row {} leaves, row {} enters",
            p.xi,
            case_name(p.case),
            p.leaving,
            p.entering
        );
    }
    out
}

fn read_game(path: &PathBuf) -> Result<BimatrixGame, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    parse_game(&text)
}

fn path_text(p: &LHPath) -> String {
    let mut out = String::new();
    for s in &p.steps {
        let _ = writeln!(out, "  ({} | {})", fmt_set(&s.labels1), fmt_set(&s.labels2));
    }
    out
}

#[derive(Serialize)]
struct StepJson {
    labels1: Vec<usize>,
    labels2: Vec<usize>,
}

#[derive(Serialize)]
struct PathJson {
    r: usize,
    steps: Vec<StepJson>,
    equilibrium: Option<EquilibriumJson>,
}

fn path_json(p: &LHPath) -> PathJson {
    PathJson {
        r: p.missing_label,
        steps: p
            .steps
            .iter()
            .map(|s| StepJson {
                labels1: s.labels1.iter().copied().collect(),
                labels2: s.labels2.iter().copied().collect(),
            })
            .collect(),
        equilibrium: p.equilibrium().map(EquilibriumJson::from),
    }
}

/// Run a parsed command line; the returned text goes to standard output.
pub fn execute(cli: &Cli) -> Result<String, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Enumerate {
            file,
            factor,
            trace,
        } => {
            let g = read_game(file)?;
            let factorization = match factor {
                Some(args) => {
                    let (b, c) = parse_factor(args)?;
                    Some(RankOneFactorization::new(&g, b, c)?)
                }
                None => None,
            };
            let opts = SweepOptions {
                factorization,
                ..SweepOptions::default()
            };
            let t = enumerate_with(&g, &opts)?;
            if json {
                return Ok(to_json(&EnumerateJson {
                    equilibria: t.equilibria.iter().map(Into::into).collect(),
                    trace: trace.then(|| trace_rows_json(&t)),
                    pivots: trace.then(|| {
                        t.breakpoints
                            .iter()
                            .map(|p| PivotJson {
                                xi: p.xi.to_string(),
                                case: case_name(p.case),
                                leaving: p.leaving,
                                entering: p.entering,
                            })
                            .collect()
                    }),
                }));
            }
            let mut out = equilibria_text(&t.equilibria);
            if *trace {
                out.push('\n');
                out.push_str(&trace_text(&t));
            }
            Ok(out)
        }
        Command::Oracle { file, strict } => {
            let g = read_game(file)?;
            let mode = if *strict {
                SupportMode::Strict
            } else {
                SupportMode::EqualSize
            };
            let r = support_enumeration_with(&g, mode);
            if json {
                #[derive(Serialize)]
                struct OracleJson {
                    equilibria: Vec<EquilibriumJson>,
                    degenerate_suspect: bool,
                }
                return Ok(to_json(&OracleJson {
                    equilibria: r.equilibria.iter().map(Into::into).collect(),
                    degenerate_suspect: r.degenerate_suspect,
                }));
            }
            let mut out = equilibria_text(&r.equilibria);
            if r.degenerate_suspect {
                out.push_str("warning: singular support system; the game looks degenerate\n");
            }
            Ok(out)
        }
        Command::Labels { file } => {
            let g = read_game(file)?;
            let eq = equilibria_by_labels(&g)?;
            let p = build_polyhedron(&g, Side::P);
            let q = build_polyhedron(&g, Side::Q);
            let labels = |e: &EquilibriumPoint| {
                let mut pp = e.x().to_vec();
                pp.push(e.payoff2.clone());
                let mut qp = e.y().to_vec();
                qp.push(e.payoff1.clone());
                (
                    p.labels_at(&pp).expect("vertex of P"),
                    q.labels_at(&qp).expect("vertex of Q"),
                )
            };
            if json {
                #[derive(Serialize)]
                struct PairJson {
                    #[serde(flatten)]
                    equilibrium: EquilibriumJson,
                    labels1: Vec<usize>,
                    labels2: Vec<usize>,
                }
                let pairs: Vec<PairJson> = eq
                    .iter()
                    .map(|e| {
                        let (l1, l2) = labels(e);
                        PairJson {
                            equilibrium: e.into(),
                            labels1: l1.into_iter().collect(),
                            labels2: l2.into_iter().collect(),
                        }
                    })
                    .collect();
                return Ok(to_json(&pairs));
            }
            let mut out = equilibria_text(&eq);
            for e in &eq {
                let (l1, l2) = labels(e);
                let _ = writeln!(
                    out,
                    "labels ({} | {}) at {}",
                    fmt_set(&l1),
                    fmt_set(&l2),
                    fmt_vec(e.x())
                );
            }
            Ok(out)
        }
        Command::Lh { file, which } => {
            let g = read_game(file)?;
            if let Some(r) = which.r {
                let path = lh_run(&g, r)?;
                if json {
                    return Ok(to_json(&path_json(&path)));
                }
                let mut out = format!("r = {r}\n");
                out.push_str(&path_text(&path));
                match path.equilibrium() {
                    Some(e) => {
                        let _ = writeln!(out, "reaches {}", equilibrium_line(e));
                    }
                    None => out.push_str("returns to the artificial pair\n"),
                }
                return Ok(out);
            }
            let r = reachability(&g)?;
            let reached: BTreeSet<_> = r.reached.values().map(|e| e.strategies.clone()).collect();
            if json {
                #[derive(Serialize)]
                struct AllJson {
                    paths: Vec<PathJson>,
                    reached: usize,
                    unreached: Vec<EquilibriumJson>,
                }
                return Ok(to_json(&AllJson {
                    paths: r.paths.iter().map(path_json).collect(),
                    reached: reached.len(),
                    unreached: r.unreached.iter().map(Into::into).collect(),
                }));
            }
            let mut out = String::new();
            for p in &r.paths {
                let _ = writeln!(out, "r = {}", p.missing_label);
                out.push_str(&path_text(p));
                match p.equilibrium() {
                    Some(e) => {
                        let _ = writeln!(out, "  reaches {}", equilibrium_line(e));
                    }
                    None => out.push_str("  returns to the artificial pair\n"),
                }
            }
            let _ = writeln!(out, "reached: {}", reached.len());
            let _ = writeln!(out, "unreached: {}", r.unreached.len());
            for e in &r.unreached {
                let _ = writeln!(out, "  {}", equilibrium_line(e));
            }
            Ok(out)
        }
        Command::Gprime { file } => {
            let g = read_game(file)?;
            let c = gprime_components(&g)?;
            if json {
                #[derive(Serialize)]
                struct EqComp {
                    #[serde(flatten)]
                    equilibrium: EquilibriumJson,
                    component: usize,
                    reachable: bool,
                }
                #[derive(Serialize)]
                struct GJson {
                    components: Vec<usize>,
                    artificial_component: usize,
                    equilibria: Vec<EqComp>,
                }
                return Ok(to_json(&GJson {
                    components: c.components.iter().map(Vec::len).collect(),
                    artificial_component: c.artificial_component,
                    equilibria: c
                        .equilibria
                        .iter()
                        .map(|(e, k)| EqComp {
                            equilibrium: e.into(),
                            component: *k,
                            reachable: *k == c.artificial_component,
                        })
                        .collect(),
                }));
            }
            let mut out = format!("{} components\n", c.components.len());
            for (k, comp) in c.components.iter().enumerate() {
                let mark = if k == c.artificial_component {
                    " (artificial pair)"
                } else {
                    ""
                };
                let _ = writeln!(out, "component {k}: {} vertex pairs{mark}", comp.len());
            }
            for (e, k) in &c.equilibria {
                let reach = if *k == c.artificial_component {
                    "reachable"
                } else {
                    "not reachable"
                };
                let _ = writeln!(out, "{}  component {k}, {reach}", equilibrium_line(e));
            }
            Ok(out)
        }
        Command::Rank { file } => {
            let g = read_game(file)?;
            let rank = g.rank();
            let class = match g.classify() {
                GameClass::ZeroSum => "zero-sum",
                GameClass::RowConstant(_) => "row-constant",
                GameClass::General => "general",
            };
            let factor = (rank == 1).then(|| g.factor_rank1()).transpose()?;
            if json {
                #[derive(Serialize)]
                struct RankJson {
                    rank: usize,
                    class: &'static str,
                    b: Option<Vec<String>>,
                    c: Option<Vec<String>>,
                }
                return Ok(to_json(&RankJson {
                    rank,
                    class,
                    b: factor.as_ref().map(|f| strings(f.b())),
                    c: factor.as_ref().map(|f| strings(f.c())),
                }));
            }
            let mut out = format!("rank {rank}\nclass {class}\n");
            if let Some(f) = factor {
                let _ = writeln!(out, "b = {}\nc = {}", fmt_vec(f.b()), fmt_vec(f.c()));
            }
            Ok(out)
        }
        Command::ReduceRank { file } => {
            let g = read_game(file)?;
            let h = g.reduce_rank()?;
            if json {
                #[derive(Serialize)]
                struct GameJson {
                    a: Vec<Vec<String>>,
                    b: Vec<Vec<String>>,
                    rank: usize,
                }
                let rows = |m: &RMatrix| (0..m.rows()).map(|i| strings(m.row(i))).collect();
                return Ok(to_json(&GameJson {
                    a: rows(h.a()),
                    b: rows(h.b()),
                    rank: h.rank(),
                }));
            }
            Ok(format_game(&h))
        }
        Command::Check { file } => {
            let g = read_game(file)?;
            check_nondegenerate(&g)?;
            if json {
                return Ok("{\n  \"nondegenerate\": true\n}\n".into());
            }
            Ok("non-degenerate\n".into())
        }
        Command::Generate { kt: _, d } => {
            if *d == 0 {
                return Err(CliError::Usage("--d must be at least 1".into()));
            }
            Ok(format_game(&generate_kt(*d)))
        }
    }
}
