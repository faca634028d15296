//! End-to-end tests of the command-line interface: exit-code trichotomy,
//! JSON output, witness round-trips, and byte determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_choosekit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code present")
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).expect("temp file written");
    path
}

#[test]
fn classify_reports_not_choosable_with_exit_one() {
    let out = run(&["classify", "--named", "theta(3,3,3)"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("not choosable"), "got: {text}");
    assert!(
        text.contains("witness assignment"),
        "negative verdicts ship a witness: {text}"
    );
}

#[test]
fn classify_reports_choosable_with_exit_zero() {
    let out = run(&["classify", "--named", "glued(cycle(4),cycle(4),2)"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("choosable: case"));
}

#[test]
fn classify_handles_two_one_lists() {
    let even = run(&["classify", "--named", "cycle(6)", "--a", "2", "--b", "1"]);
    assert_eq!(code(&even), 0);
    assert!(stdout(&even).contains("even cycle"));

    let odd = run(&["classify", "--named", "cycle(5)", "--a", "2", "--b", "1"]);
    assert_eq!(code(&odd), 1);
    assert!(stdout(&odd).contains("not choosable from 2-lists"));
}

#[test]
fn classify_splits_disconnected_graphs_into_components() {
    // A square (choosable) next to a pentagon (odd cycle, refuted).
    let graph = tmp_file(
        "two_components.txt",
        "a b\nb c\nc d\nd a\np q\nq r\nr s\ns t\nt p\n",
    );
    let out = run(&["classify", "--graph", graph.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("component {a, b, c, d}: choosable"), "got: {text}");
    assert!(text.contains("component {p, q, r, s, t}: not choosable"));
}

#[test]
fn census_prints_class_counts() {
    let out = run(&["census", "--named", "K(2,3)", "--a", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("pot 4: 1"), "got: {text}");
    assert!(text.contains("pot 5: 6"));
    assert!(text.contains("total: 36"));
}

#[test]
fn census_expectation_mismatch_exits_one() {
    let ok = run(&["census", "--named", "cycle(4)", "--expect", "4:1,5:2,6:2"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("matches the expected counts"));

    let bad = run(&["census", "--named", "cycle(4)", "--expect", "4:1,5:99"]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).contains("differs from the expected counts"));
}

#[test]
fn catalogue_check_passes_cleanly() {
    let out = run(&["catalogue-check"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("all "), "got: {text}");
    assert!(text.contains("checks passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn auto_witness_round_trips_through_solve_and_check() {
    let json = run(&["witness", "--named", "theta4(2,2,2,4)", "--auto", "--json"]);
    assert_eq!(code(&json), 1, "a refuted graph is a negative finding");
    let path = tmp_file("theta2224_witness.json", &stdout(&json));

    // The solver must fail to color the shipped assignment...
    let solve = run(&["solve", "--witness", path.to_str().unwrap()]);
    assert_eq!(code(&solve), 1);
    assert!(stdout(&solve).contains("no 2-fold coloring exists"));

    // ...and the checker must agree it holds.
    let check = run(&["witness", "--check", path.to_str().unwrap()]);
    assert_eq!(code(&check), 0);
    assert!(stdout(&check).contains("witness holds"));
}

#[test]
fn witness_check_refutes_a_colorable_assignment() {
    // C4 with constant 1234 lists is 2-fold colorable, so this "witness"
    // must be rejected.
    let fake = serde_json::json!({
        "graph": { "n": 4, "edges": [[0,1],[1,2],[2,3],[0,3]] },
        "assignment": { "lists": [15, 15, 15, 15], "size": 4 },
        "provenance": ["fabricated for testing"],
    });
    let path = tmp_file("fake_witness.json", &fake.to_string());
    let out = run(&["witness", "--check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("witness refuted"));
}

#[test]
fn witness_auto_on_a_choosable_graph_exits_zero() {
    let out = run(&["witness", "--named", "cycle(6)", "--auto"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("no witness exists"));
}

#[test]
fn verify_certifies_the_square_and_refutes_the_pentagon() {
    let yes = run(&[
        "verify", "--named", "cycle(4)", "--a", "4", "--b", "2", "--pot-bound", "6",
    ]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).contains("certified (4,2)-choosable"));

    let no = run(&[
        "verify", "--named", "cycle(5)", "--a", "4", "--b", "2", "--pot-bound", "4", "--json",
    ]);
    assert_eq!(code(&no), 1);
    let value: serde_json::Value = serde_json::from_str(&stdout(&no)).expect("JSON output");
    assert_eq!(value["certificate"]["verdict"]["counterexample"]["size"], 4);

    // The shipped witness must itself re-refute.
    let path = tmp_file("pentagon_witness.json", &stdout(&no));
    let solve = run(&["solve", "--witness", path.to_str().unwrap()]);
    assert_eq!(code(&solve), 1);
}

#[test]
fn solve_finds_colorings_from_explicit_lists() {
    let lists = tmp_file("c4_lists.txt", "0: 1 2 3 4\n1: 1 2 3 4\n2: 1 2 3 4\n3: 1 2 3 4\n");
    let out = run(&[
        "solve", "--named", "cycle(4)", "--lists", lists.to_str().unwrap(), "--b", "2",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("found a 2-fold coloring"));
}

#[test]
fn forcing_names_the_allowed_pairs_and_shape() {
    // The four-cycle gadget whose assignment leaves vertex 0 exactly four
    // allowed pairs, the two excluded ones sharing a color.
    let lists = tmp_file(
        "c4_forcing_lists.txt",
        "0: 1 2 3 4\n1: 1 2 3 4\n2: 1 2 3 5\n3: 2 3 4 5\n",
    );
    let out = run(&[
        "forcing", "--named", "cycle(4)", "--lists", lists.to_str().unwrap(),
        "--vertex", "0", "--b", "2", "--json",
    ]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("JSON output");
    assert_eq!(value["shape"], "4_out");
    assert_eq!(value["allowed"].as_array().unwrap().len(), 4);
}

#[test]
fn enumerate_flat_lists_every_class_representative() {
    let out = run(&["enumerate-flat", "--named", "cycle(4)", "--a", "4", "--json"]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("JSON output");
    assert_eq!(value["total"], 5);
    assert_eq!(value["representatives"].as_array().unwrap().len(), 5);
}

#[test]
fn construct_verifies_its_own_output() {
    let out = run(&["construct", "--m", "1", "--verify"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("7 vertices"), "got: {text}");
    assert!(text.contains("no 1-fold coloring exists"));

    let big = run(&["construct", "--m", "2", "--verify", "--json"]);
    assert_eq!(code(&big), 0);
    let value: serde_json::Value = serde_json::from_str(&stdout(&big)).expect("JSON output");
    assert_eq!(value["graph"]["n"], 19);
    assert_eq!(value["verified"], true);
}

#[test]
fn usage_errors_exit_two() {
    // Unknown subcommand (clap) and a domain error (unknown named graph)
    // both land on exit 2.
    let unknown = run(&["frobnicate"]);
    assert_eq!(code(&unknown), 2);

    let bad_name = run(&["classify", "--named", "not-a-graph(9)"]);
    assert_eq!(code(&bad_name), 2);

    let missing = run(&["solve", "--named", "cycle(4)"]);
    assert_eq!(code(&missing), 2, "solve without lists is a usage error");
}

#[test]
fn output_is_byte_deterministic_across_runs_and_worker_counts() {
    let first = run(&["verify", "--named", "K(2,3)", "--a", "4", "--b", "2", "--json"]);
    let second = run(&["verify", "--named", "K(2,3)", "--a", "4", "--b", "2", "--json"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(code(&first), 0);

    let parallel = bin()
        .args(["verify", "--named", "K(2,3)", "--a", "4", "--b", "2", "--json"])
        .env("CHOOSEKIT_WORKERS", "4")
        .output()
        .expect("binary runs");
    assert_eq!(first.stdout, parallel.stdout, "verdict independent of worker count");
}
