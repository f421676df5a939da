//! `ccut`: batch experiments over the congest-cuts library.

mod report;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use congest_cuts::certificates::{
    certificate_audit, ft_edge_audit, ft_spanner_edges, ft_spanner_vertices, ft_vertex_audit, karger_certificate,
    sparse_certificate,
};
use congest_cuts::derand::{deterministic_min_cut, verify_universal, AuditMode, UniversalFamily};
use congest_cuts::edgeconn::{all_edge_connectivities, EdgeConnMode, Preset};
use congest_cuts::graph::oracle::{self, CutValue};
use congest_cuts::graph::{generate, parse_graph, write_graph, GeneratorSpec};
use congest_cuts::mincut::{randomized_min_cut, randomized_vertex_cut, verify_cut, IterationPlan, Knowledge};
use congest_cuts::sim::{Sim, SimConfig};
use congest_cuts::{EdgeId, Multigraph};
use serde::Serialize;
use serde_json::{json, Value};

use report::{Check, Report};

#[derive(Parser, Debug, Serialize)]
#[command(name = "ccut", version, about = "Exact small cuts in a simulated CONGEST network")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Edge-list graph file.
    #[arg(long, global = true, conflicts_with = "gen")]
    graph: Option<PathBuf>,
    /// Generator spec such as `cycle(6)` or `random-lambda(12,2,0.2)`.
    #[arg(long, global = true)]
    gen: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    gen_seed: u64,
    /// Master seed for the simulator's coins.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Report directory.
    #[serde(skip)]
    #[arg(long, global = true, env = "CCUT_OUT_DIR", default_value = ".")]
    out: PathBuf,
    /// Base name of the report files; defaults to the verb.
    #[serde(skip)]
    #[arg(long, global = true)]
    name: Option<String>,
    /// Skip the oracle cross-check.
    #[arg(long, global = true)]
    no_oracle: bool,
    #[arg(long, global = true, default_value_t = 20)]
    oracle_max_n: usize,
    #[arg(long, global = true, default_value_t = 3)]
    oracle_max_lambda: u64,
    /// Also write the per-message transcript log.
    #[arg(long, global = true)]
    transcript: bool,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "verb", rename_all = "kebab-case")]
enum Command {
    /// Randomized exact min cut up to lambda.
    MincutRand {
        #[arg(long)]
        lambda: u64,
        /// Multiplies the analytic iteration count.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long)]
        early_exit: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Deterministic exact min cut up to lambda.
    MincutDet {
        #[arg(long)]
        lambda: u64,
        /// Cap on family members walked.
        #[arg(long)]
        budget: Option<u128>,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized vertex cut up to lambda.
    Vertexcut {
        #[arg(long)]
        lambda: u64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        iterations: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Checks whether removing the given edge ids disconnects the network.
    VerifyCut {
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<u32>,
        /// Defaults to the number of edges given.
        #[arg(long)]
        lambda: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Connectivity of every edge, exact up to lambda.
    Edgeconn {
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        deterministic: bool,
        #[arg(long, value_enum, default_value_t = PresetArg::Fig)]
        preset: PresetArg,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long)]
        iterations: Option<u64>,
        #[arg(long)]
        early_exit: bool,
        #[arg(long)]
        budget: Option<u128>,
        #[command(flatten)]
        common: Common,
    },
    /// Sparse lambda-connectivity certificate; with --epsilon, the sampled (1-eps) variant.
    Certificate {
        #[arg(long)]
        lambda: u64,
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Fault-tolerant (2k-1)-spanner.
    FtSpanner {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        f: u32,
        /// Vertex faults instead of edge faults.
        #[arg(long)]
        vertex: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Builds an (n, a, b) FT-universal family and exports its description.
    UniversalBuild {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Audits an (n, a, b) FT-universal family.
    UniversalVerify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, value_enum, default_value_t = AuditArg::Exhaustive)]
        mode: AuditArg,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Brute-force cut values of a graph.
    Oracle {
        /// Enumeration cap for witnesses.
        #[arg(long, default_value_t = 3)]
        cap: usize,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Writes a generated graph in edge-list form.
    Gen {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PresetArg {
    Fig,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AuditArg {
    Exhaustive,
    Sampled,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::MincutRand { common, .. }
            | Command::MincutDet { common, .. }
            | Command::Vertexcut { common, .. }
            | Command::VerifyCut { common, .. }
            | Command::Edgeconn { common, .. }
            | Command::Certificate { common, .. }
            | Command::FtSpanner { common, .. }
            | Command::UniversalBuild { common, .. }
            | Command::UniversalVerify { common, .. }
            | Command::Oracle { common, .. }
            | Command::Gen { common } => common,
        }
    }

    fn verb(&self) -> &'static str {
        match self {
            Command::MincutRand { .. } => "mincut-rand",
            Command::MincutDet { .. } => "mincut-det",
            Command::Vertexcut { .. } => "vertexcut",
            Command::VerifyCut { .. } => "verify-cut",
            Command::Edgeconn { .. } => "edgeconn",
            Command::Certificate { .. } => "certificate",
            Command::FtSpanner { .. } => "ft-spanner",
            Command::UniversalBuild { .. } => "universal-build",
            Command::UniversalVerify { .. } => "universal-verify",
            Command::Oracle { .. } => "oracle",
            Command::Gen { .. } => "gen",
        }
    }
}

fn load_graph(c: &Common) -> Result<Multigraph> {
    match (&c.graph, &c.gen) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(parse_graph(&text).with_context(|| format!("parsing {}", path.display()))?)
        }
        (None, Some(spec)) => {
            let spec: GeneratorSpec = spec.parse()?;
            Ok(generate(&spec, c.gen_seed)?)
        }
        (None, None) => bail!("a graph is required: pass --graph FILE or --gen SPEC"),
    }
}

fn checkable(c: &Common, g: &Multigraph, lambda: u64) -> bool {
    !c.no_oracle && g.n() <= c.oracle_max_n && lambda <= c.oracle_max_lambda
}

fn exact_or_none(v: CutValue) -> Option<u64> {
    v.exact()
}

fn run(cmd: &Command) -> Result<Report> {
    let c = cmd.common();
    let mut rep = Report::new(cmd.verb(), serde_json::to_value(cmd)?, c.seed);
    let needs_graph = !matches!(cmd, Command::UniversalBuild { .. } | Command::UniversalVerify { .. });
    let g = if needs_graph { Some(load_graph(c)?) } else { None };
    let config = g.as_ref().map(|g| {
        let cfg = SimConfig::for_graph(g).seed(c.seed);
        if c.transcript { cfg.with_log() } else { cfg }
    });
    let mut sim = g.as_ref().zip(config).map(|(g, cfg)| Sim::new(g, cfg));

    match cmd {
        Command::MincutRand { lambda, scale, iterations, early_exit, .. } => {
            let (g, sim) = (g.as_ref().unwrap(), sim.as_mut().unwrap());
            let k = Knowledge::of(g);
            let mut plan = IterationPlan::edge(*lambda, k.diameter, g.n(), *scale).early_exit(*early_exit);
            if let Some(it) = iterations {
                plan = plan.iterations(*it);
            }
            let res = randomized_min_cut(sim, *lambda, Some(plan));
            rep.check = min_cut_check(c, g, *lambda, res.value, &res.witness);
            rep.result = serde_json::to_value(&res)?;
        }
        Command::MincutDet { lambda, budget, .. } => {
            let (g, sim) = (g.as_ref().unwrap(), sim.as_mut().unwrap());
            let res = deterministic_min_cut(sim, *lambda, *budget)?;
            rep.check = min_cut_check(c, g, *lambda, res.value, &res.witness);
            rep.result = serde_json::to_value(&res)?;
        }
        Command::Vertexcut { lambda, scale, iterations, .. } => {
            let (g, sim) = (g.as_ref().unwrap(), sim.as_mut().unwrap());
            let k = Knowledge::of(g);
            let mut plan = IterationPlan::vertex(*lambda, k.diameter, k.max_degree, g.n(), *scale);
            if let Some(it) = iterations {
                plan = plan.iterations(*it);
            }
            let res = randomized_vertex_cut(sim, *lambda, Some(plan))?;
            rep.check = if checkable(c, g, *lambda) {
                let expected = oracle::global_vertex_cut_value(g, *lambda as usize).and_then(exact_or_none);
                Check::compare(json!(expected), json!(res.value))
            } else {
                Check::Unchecked
            };
            rep.result = serde_json::to_value(&res)?;
        }
        Command::VerifyCut { edges, lambda, .. } => {
            let (g, sim) = (g.as_ref().unwrap(), sim.as_mut().unwrap());
            let ids: Vec<EdgeId> = edges.iter().map(|&e| EdgeId(e)).collect();
            let lambda = lambda.unwrap_or(ids.len() as u64).max(1);
            let diameter = Knowledge::of(g).diameter;
            let verdict = verify_cut(sim, &ids, lambda, diameter, None)?;
            rep.check = if !c.no_oracle && g.n() <= c.oracle_max_n {
                let mask: Vec<bool> = g.edges().iter().map(|e| !ids.contains(&e.id)).collect();
                let reach = oracle::bfs_filtered(g, 0, |p| mask[p], |_| true);
                Check::compare(json!(reach.iter().any(Option::is_none)), json!(verdict.is_cut))
            } else {
                Check::Unchecked
            };
            rep.result = json!({ "edges": ids, "lambda": lambda, "is_cut": verdict.is_cut, "rounds": verdict.rounds });
        }
        Command::Edgeconn { lambda, deterministic, preset, scale, iterations, early_exit, budget, .. } => {
            let (g, sim) = (g.as_ref().unwrap(), sim.as_mut().unwrap());
            let mode = if *deterministic {
                EdgeConnMode::Deterministic { budget: *budget }
            } else {
                let preset = match preset {
                    PresetArg::Fig => Preset::Fig,
                    PresetArg::Text => Preset::Text,
                };
                EdgeConnMode::Randomized { scale: *scale, preset, early_exit: *early_exit, iterations: *iterations }
            };
            let map = all_edge_connectivities(sim, *lambda, &mode)?;
            rep.check = if checkable(c, g, *lambda) {
                let expected: Vec<String> = g
                    .edges()
                    .iter()
                    .map(|e| {
                        let v = oracle::pair_edge_connectivity(g, e.u, e.v);
                        if v <= *lambda { v.to_string() } else { format!(">={}", lambda + 1) }
                    })
                    .collect();
                let got: Vec<String> = map.edges.iter().map(|e| e.lambda_e.to_string()).collect();
                Check::compare(json!(expected), json!(got))
            } else {
                Check::Unchecked
            };
            rep.extra_files.push(("csv".into(), map.to_csv()));
            rep.result = serde_json::to_value(&map)?;
        }
        Command::Certificate { lambda, epsilon, .. } => {
            let (g, sim) = (g.as_ref().unwrap(), sim.as_mut().unwrap());
            let res = match epsilon {
                Some(eps) => karger_certificate(sim, *lambda, *eps)?,
                None => sparse_certificate(sim, *lambda)?,
            };
            rep.check = if epsilon.is_none() && checkable(c, g, *lambda) {
                let audit = certificate_audit(g, &res.edges, *lambda);
                Check::compare(json!(0), json!(audit.violations.len()))
            } else {
                Check::Unchecked
            };
            let h = g.edge_subgraph(g.edges().iter().enumerate().filter(|(_, e)| res.edges.contains(&e.id)).map(|(p, _)| p));
            rep.extra_files.push(("g".into(), write_graph(&h)));
            rep.result = serde_json::to_value(&res)?;
        }
        Command::FtSpanner { k, f, vertex, .. } => {
            let (g, sim) = (g.as_ref().unwrap(), sim.as_mut().unwrap());
            let res = if *vertex { ft_spanner_vertices(sim, *k, *f) } else { ft_spanner_edges(sim, *k, *f) };
            rep.check = if checkable(c, g, *f as u64) && *f <= 2 {
                let audit = if *vertex {
                    ft_vertex_audit(g, &res.edges, res.k, *f as usize)
                } else {
                    ft_edge_audit(g, &res.edges, res.k, *f as usize)
                };
                Check::compare(json!(0), json!(audit.violations.len()))
            } else {
                Check::Unchecked
            };
            rep.result = serde_json::to_value(&res)?;
        }
        Command::UniversalBuild { n, a, b, .. } => {
            let fam = UniversalFamily::build(*n, *a, *b)?;
            rep.result = serde_json::to_value(fam.export())?;
        }
        Command::UniversalVerify { n, a, b, mode, trials, .. } => {
            let fam = UniversalFamily::build(*n, *a, *b)?;
            let mode = match mode {
                AuditArg::Exhaustive => AuditMode::Exhaustive,
                AuditArg::Sampled => AuditMode::Sampled { trials: *trials, seed: c.seed },
            };
            let audit = verify_universal(&fam, mode)?;
            rep.check = Check::compare(json!(0), json!(audit.violations.len()));
            rep.result = json!({ "family": fam.export(), "audit": audit });
        }
        Command::Oracle { cap, s, t, .. } => {
            let g = g.as_ref().unwrap();
            let pair = s.zip(*t);
            let cut = oracle::min_cut_oracle(g, pair, *cap);
            let vertex = match pair {
                Some((s, t)) => json!(oracle::vertex_cut_oracle(g, s, t, *cap)),
                None => json!(oracle::global_vertex_cut_value(g, *cap)),
            };
            rep.result = json!({ "n": g.n(), "m": g.m(), "diameter": g.diameter(), "edge_cut": cut, "vertex_cut": vertex });
        }
        Command::Gen { .. } => {
            let g = g.as_ref().unwrap();
            rep.extra_files.push(("g".into(), write_graph(g)));
            rep.result = json!({ "n": g.n(), "m": g.m() });
        }
    }
    if let Some(sim) = &sim {
        rep.transcript = Some(sim.transcript().metrics());
        if c.transcript {
            rep.extra_files.push(("transcript".into(), sim.transcript().log_lines()));
        }
    }
    Ok(rep)
}

fn min_cut_check(c: &Common, g: &Multigraph, lambda: u64, value: Option<u64>, witness: &[EdgeId]) -> Check {
    if !checkable(c, g, lambda) {
        return Check::Unchecked;
    }
    let expected = oracle::min_cut_oracle(g, None, lambda as usize);
    let value_ok = expected.value.exact() == value;
    let mut w = witness.to_vec();
    w.sort_unstable();
    let witness_ok = value.is_none() || expected.witnesses.contains(&w) || (value == Some(0) && w.is_empty());
    if value_ok && witness_ok {
        Check::Agree
    } else {
        Check::Disagree {
            expected: json!({ "value": expected.value.exact(), "witnesses": expected.witnesses }),
            got: json!({ "value": value, "witness": w }),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let c = cli.command.common().clone();
    let outcome = run(&cli.command).and_then(|rep| {
        let name = c.name.clone().unwrap_or_else(|| cli.command.verb().to_string());
        let path = rep.write(&c.out, &name)?;
        // a closed pipe on stdout is not an error for a batch tool
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&summary(&rep, &path))?);
        Ok(rep.check)
    });
    match outcome {
        Ok(Check::Disagree { .. }) => {
            eprintln!("oracle disagreement; see the report's \"check\" field");
            ExitCode::from(2)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Console summary; large results stay in the report file only.
fn summary(rep: &Report, path: &std::path::Path) -> Value {
    let mut v = json!({ "verb": rep.verb, "report": path, "check": rep.check.status() });
    if rep.result.to_string().len() <= 4096 {
        v["result"] = rep.result.clone();
    }
    v
}
