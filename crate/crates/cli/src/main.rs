use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use trackclique::io::{
    detect_kind, parse_csat, parse_graph, parse_sat, parse_tracks, write_assignment, write_csat,
    write_csat_with_gadget, write_graph, write_sat, write_tracks, FileKind,
};
use trackclique::reductions::gadgetize_any;
use trackclique::render::{render, RenderFormat, RenderSpec};
use trackclique::solvers::ENUM_VERTEX_CAP;
use trackclique::verify::{
    gen_csat, gen_sat, inject_fault, random_csat_shape, verify_csat, verify_sat, VerifyReport,
};
use trackclique::{
    brute_force_opt, build_graph, collapse_twins, construct_tracks, gadgetize, max_clique_bb,
    max_clique_enum, validate, CliqueSolution, CsatInstance, IntersectionGraph, TrackFamily,
};

/// Bounded-occurrence Max-2-CSAT to 3-track interval clique: reductions,
/// exact solvers and checks.
#[derive(Parser)]
#[command(name = "trackclique", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replace each disjunctive clause of a sat file with six conjunctions.
    Gadget {
        #[command(flatten)]
        io: Io,
        /// Accept sources whose variables do not occur exactly three times.
        #[arg(long)]
        lenient: bool,
    },
    /// Build the 3-track family of a csat file.
    Reduce(Io),
    /// Export the intersection graph of a csat or tracks file.
    Graph {
        #[command(flatten)]
        io: Io,
        /// One vertex per member instead of one weighted vertex per literal.
        #[arg(long)]
        full: bool,
    },
    /// Solve a csat (z*), tracks or graph (w*) file exactly.
    Solve {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = Engine::Bb)]
        engine: Engine,
        /// Branch-and-bound node limit.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run the check battery on a sat or csat file, or on generated instances.
    Verify {
        /// Input file; omit together with --seeds for generator mode.
        input: Option<String>,
        /// Perturb one literal copy before checking (csat input only).
        #[arg(long)]
        inject_fault: bool,
        /// Generator mode: check this many seeded instances of each kind.
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw a tracks (or csat) file.
    Render {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Pixels per unit in svg output.
        #[arg(long, default_value_t = 40)]
        scale: u32,
        /// Draw every copy of a literal on its own row.
        #[arg(long)]
        copies: bool,
    },
    /// Generate a random valid instance.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, short = 'n')]
        vars: usize,
        /// Clause count (csat only; defaults to the variable count).
        #[arg(long, short = 'm')]
        clauses: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

#[derive(clap::Args)]
struct Io {
    /// Input path, `-` for stdin.
    #[arg(default_value = "-")]
    input: String,
    /// Output path, `-` for stdout.
    #[arg(short, long, default_value = "-")]
    output: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Enum,
    Bb,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Sat,
    Csat,
}

const VERIFY_FAIL: u8 = 1;
const INPUT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn write_output(path: &str, text: &str) -> Result<()> {
    if path == "-" {
        io::stdout()
            .write_all(text.as_bytes())
            .context("writing stdout")
    } else {
        fs::write(path, text).with_context(|| format!("writing {path}"))
    }
}

fn display_name(path: &str) -> &str {
    if path == "-" {
        "<stdin>"
    } else {
        path
    }
}

fn load_csat(path: &str, text: &str) -> Result<CsatInstance> {
    let instance = parse_csat(text).with_context(|| display_name(path).to_string())?;
    let report = validate(&instance);
    if !report.is_valid() {
        bail!("{}: invalid instance: {report}", display_name(path));
    }
    Ok(instance)
}

/// Reads a tracks file, or reduces a csat file on the fly.
fn load_family(path: &str, text: &str) -> Result<TrackFamily> {
    match detect_kind(text).with_context(|| display_name(path).to_string())? {
        FileKind::Tracks => Ok(parse_tracks(text).with_context(|| display_name(path).to_string())?),
        FileKind::Csat => Ok(construct_tracks(&load_csat(path, text)?)?),
        other => bail!(
            "{}: expected a csat or tracks file, found {other:?}",
            display_name(path)
        ),
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gadget { io, lenient } => {
            let text = read_input(&io.input)?;
            let source = parse_sat(&text).with_context(|| display_name(&io.input).to_string())?;
            let (csat, map) = if lenient {
                gadgetize_any(&source)?
            } else {
                let report = validate(&source);
                if !report.is_valid() {
                    bail!("{}: invalid instance: {report}", display_name(&io.input));
                }
                gadgetize(&source)?
            };
            write_output(&io.output, &write_csat_with_gadget(&csat, &map))?;
        }
        Command::Reduce(io) => {
            let text = read_input(&io.input)?;
            let family = construct_tracks(&load_csat(&io.input, &text)?)?;
            write_output(&io.output, &write_tracks(&family))?;
        }
        Command::Graph { io, full } => {
            let text = read_input(&io.input)?;
            let family = load_family(&io.input, &text)?;
            let out = if full {
                write_graph(&build_graph(&family))
            } else {
                write_graph(&collapse_twins(&family)?)
            };
            write_output(&io.output, &out)?;
        }
        Command::Solve { io, engine, budget } => {
            let text = read_input(&io.input)?;
            return solve(&io, &text, engine, budget);
        }
        Command::Verify {
            input,
            inject_fault,
            seeds,
            seed,
        } => return verify(input.as_deref(), inject_fault, seeds, seed),
        Command::Render {
            io,
            format,
            scale,
            copies,
        } => {
            let text = read_input(&io.input)?;
            let family = load_family(&io.input, &text)?;
            let spec = RenderSpec {
                format: match format {
                    Format::Text => RenderFormat::Text,
                    Format::Svg => RenderFormat::Svg,
                },
                scale,
                collapse_copies: !copies,
            };
            write_output(&io.output, &render(&family, &spec)?)?;
        }
        Command::Gen {
            kind,
            vars,
            clauses,
            seed,
            output,
        } => {
            let text = match kind {
                GenKind::Sat => write_sat(&gen_sat(vars, seed)?),
                GenKind::Csat => write_csat(&gen_csat(vars, clauses.unwrap_or(vars), seed)?),
            };
            write_output(&output, &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn solve(io: &Io, text: &str, engine: Engine, budget: Option<u64>) -> Result<ExitCode> {
    let name = display_name(&io.input);
    let mut out = String::new();
    let code = match detect_kind(text).with_context(|| name.to_string())? {
        FileKind::Csat => {
            let instance = load_csat(&io.input, text)?;
            let opt = brute_force_opt(&instance)?;
            out += &format!(
                "z*={}\nassignment={}",
                opt.value,
                write_assignment(&opt.witness)
            );
            ExitCode::SUCCESS
        }
        FileKind::Sat => {
            let instance = parse_sat(text).with_context(|| name.to_string())?;
            let opt = brute_force_opt(&instance)?;
            out += &format!(
                "z*={}\nassignment={}",
                opt.value,
                write_assignment(&opt.witness)
            );
            ExitCode::SUCCESS
        }
        FileKind::Tracks => {
            let family = parse_tracks(text).with_context(|| name.to_string())?;
            // Copies that are not twins (a hand-edited family) are solved uncollapsed.
            match collapse_twins(&family) {
                Ok(graph) => solve_graph(&graph, engine, budget, &mut out)?,
                Err(_) => solve_graph(&build_graph(&family), engine, budget, &mut out)?,
            }
        }
        FileKind::Graph => {
            let graph = parse_graph(text).with_context(|| name.to_string())?;
            solve_graph(&graph, engine, budget, &mut out)?
        }
    };
    write_output(&io.output, &out)?;
    Ok(code)
}

fn solve_graph<L: std::fmt::Display>(
    graph: &IntersectionGraph<L>,
    engine: Engine,
    budget: Option<u64>,
    out: &mut String,
) -> Result<ExitCode> {
    let witness = |s: &CliqueSolution| {
        s.labels(graph)
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    if engine != Engine::Bb && graph.len() > ENUM_VERTEX_CAP {
        bail!(
            "enumeration is limited to {ENUM_VERTEX_CAP} vertices, graph has {}",
            graph.len()
        );
    }
    let bb = (engine != Engine::Enum).then(|| max_clique_bb(graph, budget));
    let en = (engine != Engine::Bb)
        .then(|| max_clique_enum(graph))
        .transpose()?;
    let primary = bb
        .as_ref()
        .or(en.as_ref())
        .expect("at least one engine ran");
    out.push_str(&format!(
        "w*={}\nwitness={}\n",
        primary.weight,
        witness(primary)
    ));
    if let Some(bb) = &bb {
        out.push_str(&format!(
            "bb_nodes={}\noptimal={}\n",
            bb.nodes_explored, bb.optimal
        ));
    }
    if let (Some(bb), Some(en)) = (&bb, &en) {
        let agree = bb.weight == en.weight;
        out.push_str(&format!(
            "enum_weight={}\n{} engines\n",
            en.weight,
            if agree { "PASS" } else { "FAIL" }
        ));
        if !agree {
            return Ok(ExitCode::from(VERIFY_FAIL));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_code(report: &VerifyReport) -> ExitCode {
    if report.passed() {
        ExitCode::SUCCESS
    } else if report.failures().any(|c| c.field == "valid") {
        ExitCode::from(INPUT_ERROR)
    } else {
        ExitCode::from(VERIFY_FAIL)
    }
}

fn verify(input: Option<&str>, fault: bool, seeds: Option<u64>, seed: u64) -> Result<ExitCode> {
    let Some(path) = input else {
        let Some(count) = seeds else {
            bail!("verify needs an input file or --seeds K");
        };
        return verify_generated(count, seed, fault);
    };
    let text = read_input(path)?;
    let name = display_name(path);
    let report = match detect_kind(&text).with_context(|| name.to_string())? {
        FileKind::Sat => {
            if fault {
                bail!("--inject-fault needs a csat input");
            }
            let source = parse_sat(&text).with_context(|| name.to_string())?;
            verify_sat(&source)?
        }
        FileKind::Csat => {
            let instance = load_csat(path, &text)?;
            let mut family = construct_tracks(&instance)?;
            if fault {
                family = inject_fault(&family)?;
            }
            verify_csat(&instance, &family, seed)?
        }
        other => bail!("{name}: expected a sat or csat file, found {other:?}"),
    };
    print!("{}", report.to_text());
    Ok(report_code(&report))
}

fn verify_generated(count: u64, first_seed: u64, fault: bool) -> Result<ExitCode> {
    let (mut csat_pass, mut sat_pass) = (0u64, 0u64);
    let mut first_failure = None;
    for seed in first_seed..first_seed + count {
        let (n, m) = random_csat_shape(6, 12, seed);
        let instance = gen_csat(n, m, seed)?;
        let mut family = construct_tracks(&instance)?;
        if fault {
            family = inject_fault(&family)?;
        }
        let report = verify_csat(&instance, &family, seed)?;
        if report.passed() {
            csat_pass += 1;
        } else if first_failure.is_none() {
            let check = report
                .failures()
                .next()
                .expect("failed report has a failure");
            first_failure = Some(format!("csat seed={seed} {} {}", check.field, check.detail));
        }

        let source = gen_sat(2 * (1 + seed as usize % 3), seed)?;
        let report = verify_sat(&source)?;
        if report.passed() {
            sat_pass += 1;
        } else if first_failure.is_none() {
            let check = report
                .failures()
                .next()
                .expect("failed report has a failure");
            first_failure = Some(format!("sat seed={seed} {} {}", check.field, check.detail));
        }
    }
    let passed = csat_pass == count && sat_pass == count;
    if let Some(failure) = &first_failure {
        println!("FAIL {failure}");
    }
    println!(
        "seeds={count} csat_pass={csat_pass} sat_pass={sat_pass} status={}",
        if passed { "pass" } else { "fail" }
    );
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(VERIFY_FAIL)
    })
}
