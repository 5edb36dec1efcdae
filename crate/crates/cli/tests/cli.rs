//! End-to-end tests for the posetlab binary: output formats, exit codes,
//! determinism, and JSON round-trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn posetlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posetlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 output")
}

fn write_fixture(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("fixture written");
    path
}

const DIAMOND: &str = r#"{"labels":["bot","a","b","top"],"covers":[[0,1],[0,2],[1,3],[2,3]]}"#;
const CHAIN2: &str = r#"{"labels":["x","y"],"covers":[[0,1]]}"#;
const POINT: &str = r#"{"labels":["q"],"covers":[]}"#;

#[test]
fn joinmeet_prints_the_worked_example() {
    let out = posetlab(&["ln", "joinmeet", "--n", "12", "1,4,6,7,11", "2,5,9,10"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "join=1,4,6,9,11 meet=2,5,7,10\n");
}

#[test]
fn joinmeet_renders_empty_sets_with_braces() {
    let out = posetlab(&["ln", "joinmeet", "--n", "3", "{}", "{1}"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "join=1 meet={}\n");
}

#[test]
fn hasse_dot_has_eight_nodes_and_eight_edges() {
    let out = posetlab(&["ln", "hasse", "--n", "3", "--dot"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.contains("[label=")).count(), 8);
    assert_eq!(text.lines().filter(|l| l.contains(" -> ")).count(), 8);
}

#[test]
fn hasse_lists_the_four_chain() {
    let out = posetlab(&["ln", "hasse", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{} -> {1}\n{1} -> {2}\n{2} -> {1,2}\n");
}

#[test]
fn hasse_json_round_trips() {
    let out = posetlab(&["ln", "hasse", "--n", "3", "--json"]);
    assert!(out.status.success());
    let (p, layer) = poset_core::io::read_poset_json(&stdout(&out)).unwrap();
    assert_eq!(p.len(), 8);
    assert!(layer.is_none());
}

#[test]
fn single_pair_mobius_matches_the_closed_form() {
    let out = posetlab(&["ln", "mobius", "--n", "4", "--from", "{2}", "--to", "{1,3}"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{2}\t{1,3}\t1\n");
}

#[test]
fn full_mobius_table_is_rank_sorted_and_complete() {
    let out = posetlab(&["ln", "mobius", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // The 4-chain has 10 comparable pairs; the first block is the bottom.
    assert_eq!(text.lines().count(), 10);
    assert!(text.starts_with("{}\t{}\t1\n{}\t{1}\t-1\n{}\t{2}\t0\n{}\t{1,2}\t0\n"));
}

#[test]
fn interval_listing_and_dot_agree_with_the_cube() {
    let out = posetlab(&["ln", "interval", "--n", "4", "--from", "{2}", "--to", "{1,3}"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{2}\n{1,2}\n{3}\n{1,3}\n");
    let open = posetlab(&["ln", "interval", "--n", "4", "--from", "{2}", "--to", "{1,3}", "--open", "--dot"]);
    assert!(open.status.success());
    assert_eq!(stdout(&open).lines().filter(|l| l.contains("[label=")).count(), 2);
}

#[test]
fn slides_list_single_moves() {
    let out = posetlab(&["ln", "slides", "--n", "5", "--set", "{2,4,5}"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{2,3,5}\n{1,4,5}\n");
}

#[test]
fn mobius_tsv_of_the_diamond() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "diamond.json", DIAMOND);
    let out = posetlab(&["mobius", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "bot\tbot\t1\nbot\ta\t-1\nbot\tb\t-1\nbot\ttop\t1\n\
         a\ta\t1\na\ttop\t-1\nb\tb\t1\nb\ttop\t-1\ntop\ttop\t1\n"
    );
}

#[test]
fn complex_reports_f_vector_and_chi() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path(), "diamond.json", DIAMOND);
    let out = posetlab(&["complex", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "f\t4\t5\t2\nchi\t1\n");
    let open = posetlab(&["complex", "--input", input.to_str().unwrap(), "--open-interval", "0", "3"]);
    assert!(open.status.success());
    assert_eq!(stdout(&open), "f\t2\nchi\t2\n");
}

#[test]
fn connect_sum_emits_round_tripping_json() {
    let dir = tempfile::tempdir().unwrap();
    let chain = write_fixture(dir.path(), "chain.json", CHAIN2);
    let point = write_fixture(dir.path(), "point.json", POINT);
    let out = posetlab(&[
        "connect-sum",
        chain.to_str().unwrap(),
        chain.to_str().unwrap(),
        point.to_str().unwrap(),
        "--i0",
        "0:1",
        "--i1",
        "0:0",
    ]);
    assert!(out.status.success());
    let (glued, _) = poset_core::io::read_poset_json(&stdout(&out)).unwrap();
    assert_eq!(glued.len(), 4);
    // Two 2-chains glued top-to-bottom through a point form a 4-chain.
    assert_eq!(glued.cover_pairs(), vec![(0, 1), (1, 2), (2, 3)]);
}

#[test]
fn connect_sum_closed_form_agrees_when_projections_exist() {
    let dir = tempfile::tempdir().unwrap();
    let chain = write_fixture(dir.path(), "chain.json", CHAIN2);
    let point = write_fixture(dir.path(), "point.json", POINT);
    let out = posetlab(&[
        "connect-sum",
        chain.to_str().unwrap(),
        chain.to_str().unwrap(),
        point.to_str().unwrap(),
        "--i0",
        "0:1",
        "--i1",
        "0:0",
        "--closed-form",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("# diff (0 entries)\n"));
}

#[test]
fn closed_form_refuses_incompatible_projections() {
    let dir = tempfile::tempdir().unwrap();
    // Both glue points sit above the bottom, so the bottom has two minimal
    // glue elements over it and the upward projection is undefined.
    let vee = write_fixture(
        dir.path(),
        "vee.json",
        r#"{"labels":["b","t1","t2"],"covers":[[0,1],[0,2]]}"#,
    );
    let anti = write_fixture(dir.path(), "anti.json", r#"{"labels":["u","v"],"covers":[]}"#);
    let args_base = [
        "connect-sum",
        vee.to_str().unwrap(),
        anti.to_str().unwrap(),
        anti.to_str().unwrap(),
        "--i0",
        "0:1,1:2",
        "--i1",
        "0:0,1:1",
    ];
    let plain = posetlab(&args_base);
    assert!(plain.status.success());
    let mut with_flag = args_base.to_vec();
    with_flag.push("--closed-form");
    let refused = posetlab(&with_flag);
    assert_eq!(refused.status.code(), Some(1));
    assert!(stderr(&refused).contains("(M+) fails"));
}

#[test]
fn double_emits_the_canonical_layer_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let chain = write_fixture(dir.path(), "chain.json", CHAIN2);
    let out = posetlab(&["double", chain.to_str().unwrap(), "--sign=-1,1", "--lift", "0:1"]);
    assert!(out.status.success());
    let (doubled, layer) = poset_core::io::read_poset_json(&stdout(&out)).unwrap();
    assert_eq!(doubled.len(), 4);
    assert_eq!(doubled.cover_pairs(), vec![(0, 1), (1, 2), (2, 3)]);
    let layer = layer.expect("canonical layer present");
    assert_eq!(layer.sign, vec![-1, -1, 1, 1]);
    // Doubling the double reads the layer back from the file.
    let again = write_fixture(dir.path(), "doubled.json", &stdout(&out));
    let redoubled = posetlab(&["double", again.to_str().unwrap()]);
    assert!(redoubled.status.success());
    let (p, _) = poset_core::io::read_poset_json(&stdout(&redoubled)).unwrap();
    assert_eq!(p.len(), 8);
}

#[test]
fn verify_mobius_counts_every_ordered_pair() {
    let out = posetlab(&["verify", "--suite", "mobius", "--max-n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    // 4 + 16 + ... + 4^6 ordered pairs.
    assert_eq!(stdout(&out), "suite mobius: 5460 cases, 0 failures\n");
}

#[test]
fn verify_lattice_reports_the_complementation_failures() {
    let out = posetlab(&["verify", "--suite", "lattice", "--max-n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.starts_with("suite lattice: 436 cases, 8 failures\n"));
    // Every failure is the stated complementation law; the lattice laws
    // that are actually provable all hold.
    let fails: Vec<&str> = text.lines().filter(|l| l.contains("FAIL")).collect();
    assert_eq!(fails.len(), 8);
    assert!(fails.iter().all(|l| l.contains("complementation")));
    assert!(fails.iter().any(|l| l.contains("n=2 S={1}")));
}

#[test]
fn verify_surgery_exposes_the_range_containment_defect() {
    let out = posetlab(&["verify", "--suite", "surgery", "--max-n", "6", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let fails: Vec<String> = stdout(&out)
        .lines()
        .filter(|l| l.contains("FAIL"))
        .map(str::to_string)
        .collect();
    assert!(!fails.is_empty());
    // The two theorems hold on every trial; only the stated range
    // containment fails, through cross values from the negated glue range.
    assert!(fails.iter().all(|l| l.contains("range containment")));
}

#[test]
fn verify_double_and_topology_are_clean() {
    let d = posetlab(&["verify", "--suite", "double", "--max-n", "4"]);
    assert_eq!(d.status.code(), Some(0));
    let t = posetlab(&["verify", "--suite", "topology", "--max-n", "4"]);
    assert_eq!(t.status.code(), Some(0));
}

#[test]
fn verify_stdout_is_deterministic() {
    let a = posetlab(&["verify", "--suite", "all", "--max-n", "2", "--seed", "7"]);
    let b = posetlab(&["verify", "--suite", "all", "--max-n", "2", "--seed", "7"]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn verify_json_has_the_fixed_fields() {
    let out = posetlab(&["verify", "--suite", "surgery", "--max-n", "3", "--json"]);
    let reports: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    let report = reports[0].as_object().unwrap();
    for key in ["suite", "cases", "failures", "elapsed_ms"] {
        assert!(report.contains_key(key), "missing field {key}");
    }
    assert_eq!(report.len(), 4);
    assert_eq!(report["suite"], "surgery");
    assert!(report["cases"].as_u64().unwrap() > 0);
    for failure in report["failures"].as_array().unwrap() {
        let failure = failure.as_object().unwrap();
        for key in ["input", "expected", "got"] {
            assert!(failure.contains_key(key), "missing field {key}");
        }
        assert_eq!(failure.len(), 3);
    }
}

#[test]
fn verify_json_is_deterministic_modulo_wall_time() {
    let mut runs = Vec::new();
    for _ in 0..2 {
        let out = posetlab(&["verify", "--suite", "all", "--max-n", "2", "--json"]);
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        for report in v.as_array_mut().unwrap() {
            report.as_object_mut().unwrap().insert("elapsed_ms".into(), 0.into());
        }
        runs.push(v);
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(posetlab(&["ln", "hasse"]).status.code(), Some(2));
    assert_eq!(posetlab(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(posetlab(&["ln", "joinmeet", "--n", "3", "{5}", "{1}"]).status.code(), Some(2));
    assert_eq!(posetlab(&["mobius", "--input", "/nonexistent.json"]).status.code(), Some(2));
    let incomparable =
        posetlab(&["ln", "interval", "--n", "3", "--from", "{2}", "--to", "{1}"]);
    assert_eq!(incomparable.status.code(), Some(2));
}

/// A tower of two-element antichains between rail elements: chain counts
/// blow past any fixed-width integer while the poset stays tiny.
fn overflow_fixture(dir: &Path) -> PathBuf {
    let mut labels: Vec<String> = (0..64).map(|i| format!("\"r{i}\"")).collect();
    let mut covers = Vec::new();
    for i in 0..63 {
        for j in 0..2 {
            let m = labels.len();
            labels.push(format!("\"m{i}_{j}\""));
            covers.push(format!("[{},{}]", i, m));
            covers.push(format!("[{},{}]", m, i + 1));
        }
    }
    let text = format!(
        r#"{{"labels":[{}],"covers":[{}]}}"#,
        labels.join(","),
        covers.join(",")
    );
    write_fixture(dir, "tower.json", &text)
}

#[test]
fn overflow_exits_three_from_both_computations() {
    let dir = tempfile::tempdir().unwrap();
    let input = overflow_fixture(dir.path());
    let complex = posetlab(&["complex", "--input", input.to_str().unwrap()]);
    assert_eq!(complex.status.code(), Some(3));
    assert!(stderr(&complex).contains("overflow"));
    let mobius = posetlab(&["mobius", "--input", input.to_str().unwrap()]);
    assert_eq!(mobius.status.code(), Some(3));
    assert!(stderr(&mobius).contains("element pair"));
}
