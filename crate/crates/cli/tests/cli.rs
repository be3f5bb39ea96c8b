use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_forcing-lab");
const TWO_LEN: &str = r#"[{"type":"min-length"},{"type":"min-length"}]"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("FORCING_LAB_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

#[test]
fn decode_pair_reads_bit_files() {
    let dir = tempfile::tempdir().unwrap();
    let (c, d) = (dir.path().join("c"), dir.path().join("d"));
    fs::write(&c, "000110011\n").unwrap();
    fs::write(&d, "0110011\n").unwrap();
    let out = run(&[
        "decode-pair",
        "--c",
        path(&c),
        "--d",
        path(&d),
        "--count",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("payload: 111"), "{text}");
    assert!(text.contains("boundaries: 1 3 5"), "{text}");
}

#[test]
fn decode_many_on_zeros_is_a_check_failure() {
    let dir = tempfile::tempdir().unwrap();
    let z = dir.path().join("z");
    fs::write(&z, "0000").unwrap();
    let out = run(&[
        "decode-many",
        "--stream",
        path(&z),
        "--stream",
        path(&z),
        "--count",
        "1",
        "--scan-budget",
        "32",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn pair_trace_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("pair.json");
    let out = run(&[
        "entangle-pair",
        "--family",
        TWO_LEN,
        "--payload",
        "bits:111",
        "--stages",
        "2",
        "--out",
        path(&trace),
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(v["format"], "forcing-lab-trace");
    assert_eq!(v["kind"], "pair");
    assert_eq!(v["boundaries"], serde_json::json!([1, 3, 5]));
    let out = run(&["verify", "--trace", path(&trace)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all 5 checks passed"));
}

#[test]
fn trace_goes_to_stdout_without_out() {
    let out = run(&[
        "entangle-pair",
        "--family",
        TWO_LEN,
        "--payload",
        "hex:ff",
        "--stages",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 0);
}

#[test]
fn wide_trace_decodes_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("wide.json");
    let family = r#"[{"type":"min-length"},{"type":"min-length"},{"type":"min-length"},{"type":"min-length"}]"#;
    let out = run(&[
        "entangle-wide",
        "--family",
        family,
        "--payload",
        "bits:101",
        "--steps",
        "3",
        "--out",
        path(&trace),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["decode-wide", "--trace", path(&trace)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("101"), "{}", stdout(&out));
    assert_eq!(code(&run(&["verify", "--trace", path(&trace)])), 0);
}

#[test]
fn generics_feed_bound_chain() {
    let dir = tempfile::tempdir().unwrap();
    let generics = dir.path().join("g.json");
    let bound = dir.path().join("b.json");
    let family =
        r#"{"carrier":"plane","sets":[{"type":"square"},{"type":"square"},{"type":"square"}]}"#;
    let out = run(&[
        "build-generics",
        "--family",
        family,
        "--rows",
        "2",
        "--out",
        path(&generics),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&[
        "bound-chain",
        "--family",
        family,
        "--generics",
        path(&generics),
        "--out",
        path(&bound),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for t in [&generics, &bound] {
        assert_eq!(code(&run(&["verify", "--trace", path(t)])), 0);
    }
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{}").unwrap();
    let cases: [&[&str]; 6] = [
        &[
            "entangle-pair",
            "--family",
            TWO_LEN,
            "--payload",
            "bits:1",
            "--stages",
            "0",
        ],
        &[
            "entangle-pair",
            "--family",
            "[]",
            "--payload",
            "bits:1",
            "--stages",
            "1",
        ],
        &[
            "entangle-pair",
            "--family",
            TWO_LEN,
            "--payload",
            "nope",
            "--stages",
            "1",
        ],
        &[
            "entangle-many",
            "--family",
            TWO_LEN,
            "--k",
            "1",
            "--payload",
            "bits:1",
            "--stages",
            "1",
        ],
        &["verify", "--trace", path(&bad)],
        &["no-such-command"],
    ];
    for args in cases {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(BIN)
        .args([
            "entangle-pair",
            "--family",
            TWO_LEN,
            "--payload",
            "seed:4",
            "--stages",
            "2",
        ])
        .env("FORCING_LAB_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    assert_eq!(v["prng"], "chacha8");
}
