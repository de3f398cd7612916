//! Command-line front end. Every command writes to the given writer only,
//! so identical invocations give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::connectivity::edge_reports;
use crate::graph::{parse_graph, serialize_graph, Graph};
use crate::matching::{parse_matching, parse_steps, serialize_matching, serialize_steps, validate_sequence, FlipSequence, OddMatching};
use crate::reductions::{
    build_diameter_instance, build_radius_instance, build_radius_witnesses, build_setcover_instance,
    build_witness_pair, parse_formula, parse_roles, parse_setcover, recover_cover, serialize_roles, Meta, Mode,
    ReductionParams, Role, SetCoverReduction,
};
use crate::search::{self, build_flip_graph, flip_distance, SearchConfig, SearchError, DEFAULT_CAP};
use crate::verify::{run_suite, Status, Suite, VerifyOptions};

/// Environment variable holding the default `--budget` of `distance`.
pub const BUDGET_ENV: &str = "ODDFLIP_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "oddflip", version, about = "Flip distance, diameter and radius of odd-matching flip graphs")]
pub struct Cli {
    /// Worker threads (0 = all cores). Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Bound on states stored by any single search.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact flip distance and a shortest flip sequence.
    Distance {
        graph: PathBuf,
        from: PathBuf,
        to: PathBuf,
        /// Only look for sequences of at most this length.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Diameter of the flip graph.
    Diameter { graph: PathBuf },
    /// Radius of the flip graph.
    Radius { graph: PathBuf },
    /// Radius and all center matchings.
    Center { graph: PathBuf },
    /// All odd matchings.
    Enumerate {
        graph: PathBuf,
        /// Print the count only.
        #[arg(long)]
        count: bool,
    },
    /// Per-edge classification and the connectivity verdict.
    Connected { graph: PathBuf },
    /// Generate a reduction instance into a directory.
    Reduce {
        #[command(subcommand)]
        kind: ReduceKind,
    },
    /// Read a flip sequence back through a reduction.
    Recover { dir: PathBuf, sequence: PathBuf },
    /// Cross-check constructions against exact search and oracles.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// State budget for full diameter/radius checks.
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
    },
}

#[derive(Args, Debug)]
struct FormulaArgs {
    formula: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::SafeMinimal)]
    mode: ModeArg,
    /// Constant of the linear diameter bound (closed-form mode).
    #[arg(long)]
    c: Option<usize>,
    /// Length of the forcing path attached to v.
    #[arg(long)]
    ell: Option<usize>,
    /// Bits of the assignment the witness matchings encode (universal block
    /// for diameter; first two blocks for radius). Default all false.
    #[arg(long)]
    assignment: Option<String>,
}

#[derive(Subcommand, Debug)]
enum ReduceKind {
    Diameter(FormulaArgs),
    Radius {
        #[command(flatten)]
        common: FormulaArgs,
        /// Length of the long path P.
        #[arg(long = "big-l")]
        big_l: Option<usize>,
    },
    Setcover {
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Vertices per set path (even).
        #[arg(long = "path-len")]
        path_len: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    SafeMinimal,
    #[value(alias = "paper")]
    ClosedForm,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    All,
    Gadgets,
    Reductions,
    Connectivity,
    Arithmetic,
    Properties,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Computation(String),
    VerificationFailed,
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Computation(_) => 2,
            Failure::VerificationFailed => 3,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn computation(e: impl std::fmt::Display) -> Failure {
    Failure::Computation(e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut buf = String::new();
    let result = execute(&cli, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Computation(m) => {
                    let _ = writeln!(err, "error: {m}");
                }
                Failure::VerificationFailed => {}
            }
            f.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_matching(g: &Graph, path: &Path) -> Result<OddMatching, Failure> {
    parse_matching(g, &read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn search_failure(e: SearchError) -> Failure {
    computation(e)
}

fn execute(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    let cfg = SearchConfig {
        cap: cli.cap,
        jobs: cli.jobs,
    };
    match &cli.command {
        Command::Distance { graph, from, to, budget } => {
            let g = load_graph(graph)?;
            let a = load_matching(&g, from)?;
            let b = load_matching(&g, to)?;
            let budget = match budget {
                Some(b) => Some(*b),
                None => match std::env::var(BUDGET_ENV) {
                    Ok(v) => Some(v.trim().parse().map_err(|_| usage(format!("{BUDGET_ENV}: not an integer: {v}")))?),
                    Err(_) => None,
                },
            };
            let r = flip_distance(&g, &a, &b, budget, &cfg).map_err(search_failure)?;
            match (r.distance, r.witness) {
                (Some(d), Some(w)) => {
                    writeln!(out, "distance {d}").unwrap();
                    out.push_str(&serialize_steps(&w.steps));
                    Ok(())
                }
                _ => {
                    writeln!(out, "unreachable").unwrap();
                    Err(computation("the target is in another component of the flip graph"))
                }
            }
        }
        Command::Diameter { graph } => {
            let d = search::diameter(&load_graph(graph)?, &cfg).map_err(search_failure)?;
            writeln!(out, "diameter {d}").unwrap();
            Ok(())
        }
        Command::Radius { graph } => {
            let (r, _) = search::radius_center(&load_graph(graph)?, &cfg).map_err(search_failure)?;
            writeln!(out, "radius {r}").unwrap();
            Ok(())
        }
        Command::Center { graph } => {
            let (r, centers) = search::radius_center(&load_graph(graph)?, &cfg).map_err(search_failure)?;
            writeln!(out, "radius {r}").unwrap();
            writeln!(out, "centers {}", centers.len()).unwrap();
            for m in &centers {
                out.push('\n');
                out.push_str(&serialize_matching(m));
            }
            Ok(())
        }
        Command::Enumerate { graph, count } => {
            let g = load_graph(graph)?;
            let fg = build_flip_graph(&g, &cfg).map_err(search_failure)?;
            writeln!(out, "count {}", fg.state_count()).unwrap();
            if !count {
                let mut all: Vec<OddMatching> = (0..fg.state_count()).map(|i| fg.state(i)).collect();
                all.sort_by_key(|m| (m.isolated(), m.edges()));
                for m in &all {
                    out.push('\n');
                    out.push_str(&serialize_matching(m));
                }
            }
            Ok(())
        }
        Command::Connected { graph } => {
            let g = load_graph(graph)?;
            let reports = edge_reports(&g).map_err(usage)?;
            for r in &reports {
                let pm = r.pm_endpoint.map_or("-".to_string(), |u| (u + 1).to_string());
                let ok = if r.is_fine() { "ok" } else { "violates" };
                writeln!(out, "edge {} {} {} {pm} {ok}", r.edge.0 + 1, r.edge.1 + 1, r.class).unwrap();
            }
            match reports.iter().find(|r| !r.is_fine()) {
                None => writeln!(out, "connected yes").unwrap(),
                Some(r) => writeln!(out, "connected no {} {}", r.edge.0 + 1, r.edge.1 + 1).unwrap(),
            }
            Ok(())
        }
        Command::Reduce { kind } => reduce(kind, &cfg, out),
        Command::Recover { dir, sequence } => recover(dir, sequence, out),
        Command::Verify { suite, seed, budget } => {
            let suite = match suite {
                SuiteArg::All => Suite::All,
                SuiteArg::Gadgets => Suite::Gadgets,
                SuiteArg::Reductions => Suite::Reductions,
                SuiteArg::Connectivity => Suite::Connectivity,
                SuiteArg::Arithmetic => Suite::Arithmetic,
                SuiteArg::Properties => Suite::Properties,
            };
            let opts = VerifyOptions {
                seed: *seed,
                budget: *budget,
                search: cfg,
            };
            let reports = search::with_jobs(cli.jobs, || run_suite(suite, &opts));
            let mut counts = [0usize; 3];
            for r in &reports {
                writeln!(out, "{}", r.line()).unwrap();
                counts[match r.status {
                    Status::Pass => 0,
                    Status::Fail => 1,
                    Status::Skip => 2,
                }] += 1;
            }
            writeln!(out, "SUMMARY pass={} fail={} skip={}", counts[0], counts[1], counts[2]).unwrap();
            if counts[1] > 0 {
                Err(Failure::VerificationFailed)
            } else {
                Ok(())
            }
        }
    }
}

fn parse_bits(s: Option<&str>, len: usize) -> Result<Vec<bool>, Failure> {
    let Some(s) = s else {
        return Ok(vec![false; len]);
    };
    let bits: Vec<bool> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(usage(format!("assignment must be a string of 0/1, got `{s}`"))),
        })
        .collect::<Result<_, _>>()?;
    if bits.len() != len {
        return Err(usage(format!("assignment needs {len} bits, got {}", bits.len())));
    }
    Ok(bits)
}

fn params(common: &FormulaArgs, cfg: &SearchConfig) -> ReductionParams {
    ReductionParams {
        mode: match common.mode {
            ModeArg::SafeMinimal => Mode::SafeMinimal,
            ModeArg::ClosedForm => Mode::ClosedForm,
        },
        c_constant: common.c,
        ell_override: common.ell,
        search: *cfg,
        ..Default::default()
    }
}

fn write_instance(
    dir: &Path,
    g: &Graph,
    m_in: &OddMatching,
    m_tar: &OddMatching,
    roles: &[Role],
    meta: &Meta,
) -> Result<(), Failure> {
    let io = |e: io::Error| computation(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join("graph.txt"), serialize_graph(g)).map_err(io)?;
    fs::write(dir.join("min.matching"), serialize_matching(m_in)).map_err(io)?;
    fs::write(dir.join("mtar.matching"), serialize_matching(m_tar)).map_err(io)?;
    fs::write(dir.join("roles.txt"), serialize_roles(roles)).map_err(io)?;
    fs::write(dir.join("meta.txt"), meta.to_string()).map_err(io)?;
    Ok(())
}

fn reduce(kind: &ReduceKind, cfg: &SearchConfig, out: &mut String) -> Result<(), Failure> {
    let reduction_failure = |e: crate::reductions::ReductionError| match e {
        crate::reductions::ReductionError::Search(_) | crate::reductions::ReductionError::Invariant(_) => computation(e),
        _ => usage(e),
    };
    match kind {
        ReduceKind::Diameter(common) => {
            let phi = parse_formula(&read(&common.formula)?).map_err(usage)?;
            let inst = build_diameter_instance(&phi, &params(common, cfg)).map_err(reduction_failure)?;
            let m1 = phi.block_sizes().first().copied().unwrap_or(0);
            let x = parse_bits(common.assignment.as_deref(), m1)?;
            let (a, b) = build_witness_pair(&inst, &x).map_err(reduction_failure)?;
            let mut meta = inst.meta();
            meta.push("assignment", bit_string(&x));
            write_instance(&common.out, &inst.graph, &a, &b, &inst.roles, &meta)?;
            out.push_str(&meta.to_string());
        }
        ReduceKind::Radius { common, big_l } => {
            let psi = parse_formula(&read(&common.formula)?).map_err(usage)?;
            let mut p = params(common, cfg);
            p.big_l_override = *big_l;
            let inst = build_radius_instance(&psi, &p).map_err(reduction_failure)?;
            let sizes = psi.block_sizes();
            let bits = parse_bits(common.assignment.as_deref(), sizes[0] + sizes[1])?;
            let (x, y) = bits.split_at(sizes[0]);
            let (a, b) = build_radius_witnesses(&inst, x, y).map_err(reduction_failure)?;
            let mut meta = inst.meta();
            meta.push("assignment", format!("{}/{}", bit_string(x), bit_string(y)));
            write_instance(&common.out, &inst.graph, &a, &b, &inst.roles, &meta)?;
            out.push_str(&meta.to_string());
        }
        ReduceKind::Setcover { instance, out: dir, path_len } => {
            let sc = parse_setcover(&read(instance)?).map_err(usage)?;
            let p = ReductionParams {
                path_len_override: *path_len,
                search: *cfg,
                ..Default::default()
            };
            let red = build_setcover_instance(&sc, &p).map_err(reduction_failure)?;
            let meta = red.meta(&sc);
            write_instance(dir, &red.graph, &red.m_in, &red.m_tar, &red.roles, &meta)?;
            out.push_str(&meta.to_string());
        }
    }
    Ok(())
}

fn bit_string(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

fn recover(dir: &Path, sequence: &Path, out: &mut String) -> Result<(), Failure> {
    let g = load_graph(&dir.join("graph.txt"))?;
    let m_in = load_matching(&g, &dir.join("min.matching"))?;
    let m_tar = load_matching(&g, &dir.join("mtar.matching"))?;
    let roles = parse_roles(g.vertex_count(), &read(&dir.join("roles.txt"))?).map_err(usage)?;
    let meta = Meta::parse(&read(&dir.join("meta.txt"))?).map_err(usage)?;
    let steps = parse_steps(&read(sequence)?).map_err(|e| usage(format!("{}: {e}", sequence.display())))?;
    let seq = FlipSequence { start: m_in, steps };
    let (end, len) = validate_sequence(&g, &seq).map_err(usage)?;
    if end != m_tar {
        return Err(usage("the sequence does not end at the target matching"));
    }
    writeln!(out, "length {len}").unwrap();
    match meta.get("kind") {
        Some("setcover") => {
            let red = SetCoverReduction::from_parts(g, roles, seq.start.clone(), m_tar).map_err(computation)?;
            let cover = recover_cover(&red, &seq).map_err(computation)?;
            let sets: Vec<String> = cover.cover.iter().map(|s| (s + 1).to_string()).collect();
            writeln!(out, "cover {}", sets.join(" ")).unwrap();
            writeln!(out, "size {}", cover.cover.len()).unwrap();
            writeln!(out, "size_bound {}", cover.size_bound).unwrap();
        }
        Some("diameter") | Some("radius") => {
            let threshold: usize = meta
                .get("threshold")
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| usage("meta.txt has no threshold"))?;
            writeln!(out, "threshold {threshold}").unwrap();
            writeln!(out, "within {}", if len <= threshold { "yes" } else { "no" }).unwrap();
        }
        other => return Err(usage(format!("unknown reduction kind {other:?} in meta.txt"))),
    }
    Ok(())
}
