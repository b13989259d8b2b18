use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use trackclique::io::{parse_csat, parse_graph, parse_tracks, write_csat};
use trackclique::{build_graph, collapse_twins, construct_tracks, validate, Formula};

const SAMPLE: &str = "p csat 4 4\n1 3 0\n-3 -4 0\n2 -3 0\n-1 4 0\n";
const GOLDEN: &str = include_str!("../../core/tests/golden/sample_tracks.txt");

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trackclique"))
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn solve_sample_both_sides() {
    let out = run(&["solve", "-"], SAMPLE);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("z*=2\n"));

    let tracks = stdout(&run(&["reduce"], SAMPLE));
    let out = run(&["solve", "--engine", "both", "-"], &tracks);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("w*=50\n"));
    assert!(text.contains("PASS engines"));
}

#[test]
fn reduce_output_regraphs_identically() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "sample.csat", SAMPLE);
    let output = dir.path().join("sample.tracks");
    let out = bin()
        .args([
            "reduce",
            input.to_str().unwrap(),
            "-o",
            output.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&output).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('p')).count(), 100);

    let family = parse_tracks(&text).unwrap();
    let in_memory = construct_tracks(&parse_csat(SAMPLE).unwrap()).unwrap();
    assert_eq!(build_graph(&family), build_graph(&in_memory));

    let graph = parse_graph(&stdout(&run(&["graph", output.to_str().unwrap()], ""))).unwrap();
    let collapsed = collapse_twins(&in_memory).unwrap();
    assert_eq!(graph.weights(), collapsed.weights());
    assert!(graph.edges().eq(collapsed.edges()));

    let full = parse_graph(&stdout(&run(&["graph", "--full", "-"], &text))).unwrap();
    assert_eq!(full.len(), 100);
    assert_eq!(full.edge_count(), build_graph(&in_memory).edge_count());
}

#[test]
fn gadget_single_clause_and_valid_source() {
    let out = run(&["gadget", "--lenient"], "p sat 2 1\n1 2 0\n");
    assert_eq!(out.status.code(), Some(0));
    let csat = parse_csat(&stdout(&out)).unwrap();
    assert_eq!(csat.clauses().len(), 6);

    let out = run(&["gadget"], "p sat 2 1\n1 2 0\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("occurs 1 times"));

    let source = stdout(&run(&["gen", "sat", "-n", "6", "--seed", "9"], ""));
    let out = run(&["gadget", "-"], &source);
    assert_eq!(out.status.code(), Some(0));
    assert!(validate(&parse_csat(&stdout(&out)).unwrap()).is_valid());
}

#[test]
fn input_errors_exit_two_and_name_the_line() {
    let out = run(&["reduce"], "c header follows\np csat four 4\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let out = run(&["reduce"], "p csat 2 0\n");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no clauses"), "{}", stderr(&out));

    let out = run(&["solve", "/nonexistent/file.csat"], "");
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["render", "--format", "svg", "--scale", "0"], SAMPLE);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn duplicate_literal_clause_gets_unit_track_three() {
    let tracks = stdout(&run(&["reduce"], "p csat 2 2\n1 1 0\n2 -1 0\n"));
    let clause = tracks.lines().find(|l| l.starts_with("1#")).unwrap();
    assert_eq!(clause, "1# -3 -1 -3 1 -1 1");
}

#[test]
fn verify_sample_and_injected_fault() {
    let out = run(&["verify", "-"], SAMPLE);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains("FAIL"));
    assert!(text.contains("w*=50\n"));
    assert!(text.ends_with("status=pass\n"));

    let out = run(&["verify", "--inject-fault", "-"], SAMPLE);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL complements_disjoint violations=12 first=(+1.1, -1.1)"));
}

#[test]
fn verify_generator_mode() {
    let out = run(&["verify", "--seeds", "100"], "");
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(
        stdout(&out),
        "seeds=100 csat_pass=100 sat_pass=100 status=pass\n"
    );

    let out = run(&["verify", "--seeds", "3", "--inject-fault"], "");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_sat_input() {
    let source = stdout(&run(&["gen", "sat", "-n", "4", "--seed", "1"], ""));
    let out = run(&["verify", "-"], &source);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS block_law"));
}

#[test]
fn render_matches_golden_and_counts_svg_segments() {
    let tracks = stdout(&run(&["reduce"], SAMPLE));
    assert_eq!(stdout(&run(&["render", "-"], &tracks)), GOLDEN);
    let svg = stdout(&run(&["render", "--format", "svg", "--copies"], &tracks));
    assert_eq!(svg.matches("<rect").count(), 300);
    let collapsed = stdout(&run(
        &["render", "--format", "svg", "--scale", "20"],
        SAMPLE,
    ));
    assert_eq!(collapsed.matches("<rect").count(), 36);
}

#[test]
fn gen_is_deterministic_and_valid() {
    let a = stdout(&run(
        &["gen", "csat", "-n", "5", "-m", "8", "--seed", "7"],
        "",
    ));
    let b = stdout(&run(
        &["gen", "csat", "-n", "5", "-m", "8", "--seed", "7"],
        "",
    ));
    assert_eq!(a, b);
    let c = parse_csat(&a).unwrap();
    assert!(validate(&c).is_valid());
    assert_eq!(write_csat(&c), a);

    let out = run(&["gen", "sat", "-n", "3"], "");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_budget_and_enum_cap() {
    let tracks = stdout(&run(&["reduce"], SAMPLE));
    let text = stdout(&run(&["solve", "--budget", "2"], &tracks));
    assert!(text.contains("optimal=false"));

    let full = stdout(&run(&["graph", "--full"], SAMPLE));
    let out = run(&["solve", "--engine", "enum"], &full);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("limited to 20 vertices"));
}
