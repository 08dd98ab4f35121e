use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pdpm_core::constructions::{
    build_gk, build_pk, build_qk, build_sk, gadget_cycle, gadget_halfstar, gadget_k4, GadgetOutput,
};
use pdpm_core::cubic::{k_gadget_blowup, wheel_blowup};
use pdpm_core::matching::{classify, verify_pdpm, ClassVerdict, Constraints, SearchOptions};
use pdpm_core::multigraph::document::{document_digest, write_multigraph};
use pdpm_core::multigraph::graph6::parse_graph6;
use pdpm_core::petersen::{build_p_m, petersen, TypeCounts};
use pdpm_core::multigraph::Provenance;
use pdpm_core::{connectivity, par, Error, Multigraph, Workers};

use crate::cert::{parse_certificates, Certificate, Claim, Outcome};
use crate::checks::{self, CubicOp, CubicParams, Recheck};
use crate::input::{format_budget, load_graph, parse_budget, parse_graph_text, parse_ids, parse_slots};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Verified = 0,
    Failed = 1,
    Exhausted = 2,
    Input = 3,
}

impl Exit {
    fn of(certs: &[Certificate]) -> Exit {
        if certs.iter().any(|c| c.outcome == Outcome::Refuted || (c.outcome == Outcome::Holds && !c.verified)) {
            Exit::Failed
        } else if certs.iter().any(|c| c.outcome == Outcome::Exhausted) {
            Exit::Exhausted
        } else {
            Exit::Verified
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "pdpm", version, about = "Perfect matchings in highly edge-connected regular multigraphs")]
pub struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "PDPM_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Seed for the edge-priority permutation; 0 keeps edge-id order.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a named construction and write its multigraph document.
    Build(BuildArgs),
    /// Check structural properties, one certificate per check.
    Verify(VerifyArgs),
    /// Search for k pairwise disjoint perfect matchings.
    Pdpm(PdpmArgs),
    /// Cubic-graph covers and 2-factors.
    Cubic(CubicArgs),
    /// Classify a graph6 stream of r-regular r-edge-connected graphs.
    Hunt(HuntArgs),
    /// Re-check certificates from the graph and the payload alone.
    VerifyCertificate(VerifyCertArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BuildName {
    #[value(name = "p_k")]
    Pk,
    #[value(name = "q_k")]
    Qk,
    #[value(name = "s_k")]
    Sk,
    #[value(name = "g_k")]
    Gk,
    GadgetCycle,
    GadgetK4,
    GadgetHalfstar,
    WheelBlowup,
    KGadgetBlowup,
    Petersen,
    PPlusMatchings,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    pub name: BuildName,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Matching types for p-plus-matchings, e.g. `0,1,2`.
    #[arg(long)]
    pub types: Option<String>,
    /// Input graph for gadget-halfstar and the blow-ups.
    #[arg(long)]
    pub input: Option<String>,
    /// Replaced vertex for gadget-halfstar.
    #[arg(long, default_value_t = 0)]
    pub vertex: usize,
    /// Graph output; standard output when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Provenance sidecar output.
    #[arg(long)]
    pub prov: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub graph: String,
    /// `regular:r`, `edge-conn:r`, `r-graph:r`, `3-connected`,
    /// `underlying-cubic`, `cyclic-edge-conn:k`; repeat or comma separate.
    #[arg(long = "check", required = true, value_delimiter = ',')]
    pub checks: Vec<String>,
}

#[derive(Args, Debug)]
pub struct PdpmArgs {
    pub graph: String,
    pub k: usize,
    #[arg(long, default_value = "")]
    pub contain: String,
    #[arg(long, default_value = "")]
    pub avoid: String,
    /// `e:i` pairs putting edge `e` in member `i`.
    #[arg(long, default_value = "")]
    pub slot: String,
    /// `unlimited`, a node count, or a duration such as `90s`.
    #[arg(long, env = "PDPM_BUDGET", default_value = "unlimited")]
    pub budget: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CubicCmd {
    Fr,
    Bf,
    Cdc5,
    TwoFactor,
    FrPipeline,
}

#[derive(Args, Debug)]
pub struct CubicArgs {
    pub op: CubicCmd,
    pub graph: String,
    #[arg(long)]
    pub edge: Option<usize>,
    #[arg(long)]
    pub nu: Option<usize>,
    /// Two adjacent edges `a,b` the 2-factor must contain.
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long, env = "PDPM_BUDGET", default_value = "unlimited")]
    pub budget: String,
}

#[derive(Args, Debug)]
pub struct HuntArgs {
    /// graph6 stream; standard input when absent or `-`.
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub r: usize,
    #[arg(long, env = "PDPM_BUDGET", default_value = "unlimited")]
    pub budget_per_graph: String,
    /// Summary plus one line per classified graph.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Certificates of every classified graph.
    #[arg(long)]
    pub certs: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyCertArgs {
    pub certificates: PathBuf,
    /// Graph the certificates refer to; hunt certificates carry their own.
    #[arg(long)]
    pub graph: Option<String>,
    /// Budget for re-running negative searches.
    #[arg(long, env = "PDPM_BUDGET", default_value = "unlimited")]
    pub budget: String,
}

struct Failure(Exit, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource(_) => Exit::Exhausted,
            Error::Internal(_) => Exit::Failed,
            _ => Exit::Input,
        };
        Failure(code, e.to_string())
    }
}

fn input_err(msg: impl Into<String>) -> Failure {
    Failure(Exit::Input, msg.into())
}

fn io_err(e: io::Error) -> Failure {
    Failure(Exit::Input, e.to_string())
}

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Exit {
    let workers = Workers(cli.workers);
    let result = match cli.command {
        Command::Build(a) => build(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Pdpm(a) => pdpm(a, cli.seed, workers, out),
        Command::Cubic(a) => cubic(a, cli.seed, workers, out),
        Command::Hunt(a) => hunt(a, cli.seed, workers, out, err),
        Command::VerifyCertificate(a) => verify_certificate(a, cli.seed, workers, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn options(budget: &str, seed: u64, workers: Workers) -> Result<SearchOptions, Failure> {
    Ok(SearchOptions { budget: parse_budget(budget).map_err(input_err)?, seed, workers })
}

fn sidecar(prov: Option<&Provenance>, gadget: Option<&GadgetOutput>) -> String {
    let mut s = prov.map(Provenance::to_document).unwrap_or_default();
    if let Some(o) = gadget {
        for (name, es) in &o.designated {
            s.push_str(&format!("designated {name}{}\n", es.iter().map(|e| format!(" {e}")).collect::<String>()));
        }
        for (name, vs) in &o.marked {
            s.push_str(&format!("marked {name}{}\n", vs.iter().map(|v| format!(" {v}")).collect::<String>()));
        }
    }
    s
}

fn build(a: BuildArgs, out: &mut dyn Write) -> Result<Exit, Failure> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| input_err(format!("{:?} needs --{flag}", a.name)));
    let input = || -> Result<Multigraph, Failure> {
        load_graph(a.input.as_deref().ok_or_else(|| input_err("this construction needs --input"))?).map_err(input_err)
    };
    let (graph, prov): (Multigraph, String) = match a.name {
        BuildName::Petersen => (petersen(), String::new()),
        BuildName::Pk => (build_pk(need(a.k, "k")?)?, String::new()),
        BuildName::Sk => (build_sk(need(a.k, "k")?)?, String::new()),
        BuildName::PPlusMatchings => {
            let types = parse_ids(a.types.as_deref().unwrap_or("")).map_err(input_err)?;
            let fam = build_p_m(&TypeCounts::from_types(&types)?);
            (fam.graph, sidecar(Some(&fam.provenance), None))
        }
        name => {
            let o = match name {
                BuildName::Qk => build_qk(need(a.k, "k")?)?,
                BuildName::Gk => build_gk(need(a.k, "k")?)?,
                BuildName::GadgetCycle => gadget_cycle(need(a.r, "r")?)?,
                BuildName::GadgetK4 => gadget_k4(need(a.r, "r")?)?,
                BuildName::GadgetHalfstar => gadget_halfstar(&input()?, a.vertex, need(a.k, "k")?)?,
                BuildName::WheelBlowup => wheel_blowup(&input()?)?,
                BuildName::KGadgetBlowup => k_gadget_blowup(&input()?)?,
                _ => unreachable!(),
            };
            let prov = sidecar(Some(&o.provenance), Some(&o));
            (o.graph, prov)
        }
    };
    let doc = write_multigraph(&graph);
    match &a.out {
        Some(path) => fs::write(path, &doc).map_err(io_err)?,
        None => out.write_all(doc.as_bytes()).map_err(io_err)?,
    }
    if let Some(path) = &a.prov {
        fs::write(path, prov).map_err(io_err)?;
    }
    if a.out.is_some() {
        writeln!(out, "n {} m {} {}", graph.n(), graph.m(), document_digest(&graph)).map_err(io_err)?;
    }
    Ok(Exit::Verified)
}

fn parse_check(s: &str) -> Result<Claim, Failure> {
    let (name, arg) = s.split_once(':').map_or((s, None), |(n, a)| (n, Some(a)));
    let num = || -> Result<usize, Failure> {
        arg.and_then(|a| a.parse().ok()).ok_or_else(|| input_err(format!("check `{s}` needs a numeric argument")))
    };
    Ok(match name {
        "regular" => Claim::Regular(num()?),
        "edge-conn" => Claim::EdgeConnectivity(num()?),
        "r-graph" => Claim::RGraph(num()?),
        "3-connected" => Claim::ThreeConnected,
        "underlying-cubic" => Claim::UnderlyingCubic,
        "cyclic-edge-conn" => Claim::CyclicEdgeConnectivity(num()?),
        _ => return Err(input_err(format!("unknown check `{s}`"))),
    })
}

fn emit(out: &mut dyn Write, certs: &[Certificate]) -> Result<(), Failure> {
    for c in certs {
        out.write_all(c.render().as_bytes()).map_err(io_err)?;
    }
    Ok(())
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<Exit, Failure> {
    let g = load_graph(&a.graph).map_err(input_err)?;
    let claims = a.checks.iter().map(|s| parse_check(s)).collect::<Result<Vec<_>, _>>()?;
    let certs = claims.into_iter().map(|c| checks::property(&g, c)).collect::<Result<Vec<_>, _>>()?;
    emit(out, &certs)?;
    Ok(Exit::of(&certs))
}

fn pdpm(a: PdpmArgs, seed: u64, workers: Workers, out: &mut dyn Write) -> Result<Exit, Failure> {
    let g = load_graph(&a.graph).map_err(input_err)?;
    let opts = options(&a.budget, seed, workers)?;
    let mut cons = Constraints::none();
    cons.contain = parse_ids(&a.contain).map_err(input_err)?;
    cons.avoid = parse_ids(&a.avoid).map_err(input_err)?;
    cons.slots = parse_slots(&a.slot).map_err(input_err)?;
    let c = checks::pdpm(&g, a.k, &cons, &opts)?.with_param("budget", format_budget(&opts.budget));
    emit(out, std::slice::from_ref(&c))?;
    Ok(Exit::of(&[c]))
}

fn cubic(a: CubicArgs, seed: u64, workers: Workers, out: &mut dyn Write) -> Result<Exit, Failure> {
    let g = load_graph(&a.graph).map_err(input_err)?;
    let opts = options(&a.budget, seed, workers)?;
    let pair = match a.pair.as_deref().map(parse_ids).transpose().map_err(input_err)? {
        None => None,
        Some(v) if v.len() == 2 => Some((v[0], v[1])),
        Some(_) => return Err(input_err("--pair needs two edge ids")),
    };
    let op = match a.op {
        CubicCmd::Fr => CubicOp::Fr,
        CubicCmd::Bf => CubicOp::Bf,
        CubicCmd::Cdc5 => CubicOp::Cdc5,
        CubicCmd::TwoFactor => CubicOp::TwoFactor,
        CubicCmd::FrPipeline => CubicOp::FrPipeline,
    };
    if a.edge.is_some() != a.nu.is_some() && op != CubicOp::FrPipeline {
        return Err(input_err("--edge and --nu go together"));
    }
    let c = checks::cubic(&g, op, CubicParams { edge: a.edge, nu: a.nu, pair }, &opts)?;
    emit(out, std::slice::from_ref(&c))?;
    Ok(Exit::of(&[c]))
}

/// Counts reported by `hunt`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HuntSummary {
    pub scanned: usize,
    pub regular: usize,
    pub connected_enough: usize,
    pub class1: usize,
    pub class2: usize,
    pub indeterminate: usize,
    pub malformed: usize,
}

impl HuntSummary {
    pub fn render(&self) -> String {
        format!(
            "scanned {}\nregular {}\nconnected-enough {}\nclass1 {}\nclass2 {}\nindeterminate {}\nmalformed {}\n",
            self.scanned, self.regular, self.connected_enough, self.class1, self.class2, self.indeterminate, self.malformed
        )
    }
}

enum Scan {
    Malformed(String),
    NotRegular,
    NotConnected,
    Classified(Certificate),
}

fn scan_line(line: &str, r: usize, opts: &SearchOptions) -> Result<Scan, Error> {
    let g = match parse_graph6(line) {
        Ok(g) => g,
        Err(e) => return Ok(Scan::Malformed(e.to_string())),
    };
    if !g.is_regular(r) || g.n() == 0 {
        return Ok(Scan::NotRegular);
    }
    if !connectivity::is_k_edge_connected(&g, r)?.holds() {
        return Ok(Scan::NotConnected);
    }
    let class = classify(&g, opts)?;
    let mut c = Certificate::new(Claim::Pdpm(r), document_digest(&g)).with_param("k", r).with_param("graph6", line);
    c.seed = opts.seed;
    c.wall_time = class.elapsed;
    match class.verdict {
        ClassVerdict::One(w) => {
            c.verified = verify_pdpm(&g, r, &Constraints::none(), &w.matchings).is_ok();
            c.witness = w.matchings.iter().map(|m| ("matching".to_string(), m.edges().to_vec())).collect();
        }
        ClassVerdict::Two(proof) => {
            c.claim = Claim::NoPdpm(r);
            c.nodes = proof.nodes;
            c.verified = true;
            c = c.with_param("proof", "exhaustive-search");
        }
        ClassVerdict::Indeterminate { nodes } => {
            c.nodes = nodes;
            c.outcome = Outcome::Exhausted;
        }
    }
    Ok(Scan::Classified(c))
}

const HUNT_BATCH: usize = 256;

fn hunt(a: HuntArgs, seed: u64, workers: Workers, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit, Failure> {
    let budget = parse_budget(&a.budget_per_graph).map_err(input_err)?;
    // Each graph is searched on one thread; the pool spreads graphs.
    let opts = SearchOptions { budget, seed, workers: Workers::SEQUENTIAL };
    let reader: Box<dyn BufRead> = match a.input.as_deref() {
        None => Box::new(io::stdin().lock()),
        Some(p) if p.as_os_str() == "-" => Box::new(io::stdin().lock()),
        Some(p) => Box::new(io::BufReader::new(fs::File::open(p).map_err(|e| input_err(format!("{}: {e}", p.display())))?)),
    };
    let mut certs_file = a.certs.as_ref().map(fs::File::create).transpose().map_err(io_err)?;
    let mut summary = HuntSummary::default();
    let mut report_lines = String::new();
    let mut batch: Vec<(usize, String)> = Vec::with_capacity(HUNT_BATCH);
    let mut lines = reader.lines().enumerate();
    loop {
        batch.clear();
        for (i, line) in lines.by_ref() {
            let line = line.map_err(io_err)?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            batch.push((i + 1, line.to_string()));
            if batch.len() == HUNT_BATCH {
                break;
            }
        }
        if batch.is_empty() {
            break;
        }
        let results = par::map(workers, &batch, |(_, l)| scan_line(l, a.r, &opts));
        for ((no, line), res) in batch.iter().zip(results) {
            summary.scanned += 1;
            match res? {
                Scan::Malformed(why) => {
                    summary.malformed += 1;
                    report_lines.push_str(&format!("line {no} malformed {why}\n"));
                    let _ = writeln!(err, "line {no}: skipped malformed input: {why}");
                }
                Scan::NotRegular => {}
                Scan::NotConnected => summary.regular += 1,
                Scan::Classified(c) => {
                    summary.regular += 1;
                    summary.connected_enough += 1;
                    let verdict = match (c.claim, c.outcome) {
                        (_, Outcome::Exhausted) => {
                            summary.indeterminate += 1;
                            "indeterminate"
                        }
                        (Claim::NoPdpm(_), _) => {
                            summary.class2 += 1;
                            let _ = writeln!(err, "!!! CLASS 2 at line {no}: {line}");
                            emit(out, std::slice::from_ref(&c))?;
                            "class2"
                        }
                        _ if c.verified => {
                            summary.class1 += 1;
                            "class1"
                        }
                        _ => return Err(Failure(Exit::Failed, format!("line {no}: class 1 witness failed verification"))),
                    };
                    report_lines.push_str(&format!("line {no} {verdict} {} nodes {}\n", c.graph_digest, c.nodes));
                    if let Some(f) = certs_file.as_mut() {
                        f.write_all(c.render().as_bytes()).map_err(io_err)?;
                    }
                }
            }
        }
    }
    let text = summary.render();
    out.write_all(text.as_bytes()).map_err(io_err)?;
    if let Some(path) = &a.report {
        fs::write(path, text + &report_lines).map_err(io_err)?;
    }
    Ok(if summary.indeterminate > 0 { Exit::Exhausted } else { Exit::Verified })
}

fn verify_certificate(a: VerifyCertArgs, seed: u64, workers: Workers, out: &mut dyn Write) -> Result<Exit, Failure> {
    let text = fs::read_to_string(&a.certificates).map_err(|e| input_err(format!("{}: {e}", a.certificates.display())))?;
    let certs = parse_certificates(&text).map_err(input_err)?;
    let given = a.graph.as_deref().map(load_graph).transpose().map_err(input_err)?;
    let mut opts = options(&a.budget, seed, workers)?;
    let (mut mismatch, mut exhausted) = (false, false);
    for c in &certs {
        opts.seed = c.seed;
        let g = match (&given, c.param("graph6")) {
            (Some(g), _) => g.clone(),
            (None, Some(line)) => parse_graph_text(line).map_err(input_err)?,
            (None, None) => return Err(input_err("certificate carries no graph; pass --graph")),
        };
        let verdict = checks::recheck(&g, c, &opts).map_err(input_err)?;
        let line = match &verdict {
            Recheck::Confirmed => format!("confirmed {} ({:?})", c.claim, c.outcome),
            Recheck::Exhausted => format!("exhausted {}", c.claim),
            Recheck::Mismatch(why) => format!("mismatch {}: {why}", c.claim),
        };
        writeln!(out, "{line}").map_err(io_err)?;
        mismatch |= matches!(verdict, Recheck::Mismatch(_));
        exhausted |= verdict == Recheck::Exhausted;
    }
    Ok(if mismatch {
        Exit::Failed
    } else if exhausted {
        Exit::Exhausted
    } else {
        Exit::Verified
    })
}
