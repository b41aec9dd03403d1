//! End-to-end runs of the binary. Standard output is compared with the files
//! in `tests/golden/`; set `MVDUAL_BLESS=1` to rewrite them.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use mvdual::wajsberg::WajsbergAlgebra;

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn data(name: &str) -> String {
    manifest()
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn mvdual(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_mvdual"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn golden(name: &str, actual: &str) {
    let path: PathBuf = manifest().join("tests/golden").join(format!("{name}.out"));
    if std::env::var_os("MVDUAL_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn case(name: &str, args: &[&str], code: i32) -> Run {
    let run = mvdual(args);
    assert_eq!(run.code, code, "{name}: stderr was {}", run.stderr);
    golden(name, &run.stdout);
    if code == 0 {
        assert!(run.stderr.is_empty(), "{name}: {}", run.stderr);
    } else {
        assert_eq!(run.stderr.lines().count(), 1, "{name}: {}", run.stderr);
    }
    run
}

#[test]
fn build_bn() {
    let run = case(
        "build_bn_a2_n3",
        &["build-bn", "--atoms", "2", "--n", "3"],
        0,
    );
    let a: WajsbergAlgebra = run.stdout.parse().unwrap();
    assert_eq!(a.size(), 16);
    assert!(a.check_axioms().is_ok());
    case(
        "build_bn_a1_n2_json",
        &["build-bn", "--atoms", "1", "--n", "2", "--format", "json"],
        0,
    );
}

#[test]
fn build_m() {
    let run = case("build_m_m6", &["build-m", "--pair", &data("m6.pair")], 0);
    let a: WajsbergAlgebra = run.stdout.parse().unwrap();
    assert_eq!(a.size(), 6);
    case(
        "build_m_post3",
        &["build-m", "--pair", &data("post3.pair")],
        0,
    );
    case(
        "build_m_l2xl3",
        &["build-m", "--pair", &data("l2xl3.pair")],
        0,
    );
    let run = case("build_m_gcd", &["build-m", "--pair", &data("gcd.pair")], 2);
    assert!(run.stderr.starts_with("error: invalid object"));
}

#[test]
fn axioms() {
    case("axioms_l3", &["axioms", "--algebra", &data("l3.alg")], 0);
    let run = case(
        "axioms_corrupt",
        &["axioms", "--algebra", &data("corrupt.alg")],
        1,
    );
    assert!(run.stderr.contains("identities 1, 2, 3, 4 fail"));
    case(
        "axioms_l3_json",
        &["axioms", "--algebra", &data("l3.alg"), "--format", "json"],
        0,
    );
}

#[test]
fn axioms_on_generated_tables() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.alg");
    let run = mvdual(&["build-bn", "--atoms", "3", "--n", "4"]);
    assert_eq!(run.code, 0);
    fs::write(&path, &run.stdout).unwrap();
    let path = path.display().to_string();
    let first = mvdual(&["axioms", "--algebra", &path, "--seed", "7"]);
    assert_eq!(first.code, 0, "{}", first.stderr);
    assert!(first.stdout.contains("(sampled)"));
    assert_eq!(
        mvdual(&["axioms", "--algebra", &path, "--seed", "7"]).stdout,
        first.stdout
    );
}

#[test]
fn primes() {
    case(
        "primes_l2xl3",
        &["primes", "--algebra", &data("l2xl3.alg"), "--n", "6"],
        0,
    );
    let run = case(
        "primes_l4_n2",
        &["primes", "--algebra", &data("l4.alg"), "--n", "2"],
        1,
    );
    assert!(run.stderr.contains("not 3-valued"));
}

#[test]
fn decompose() {
    case(
        "decompose_l2xl3_n6",
        &["decompose", "--algebra", &data("l2xl3.alg"), "--n", "6"],
        0,
    );
    case(
        "decompose_l3_n4",
        &["decompose", "--algebra", &data("l3.alg"), "--n", "4"],
        0,
    );
    case(
        "decompose_l2xl3_json",
        &[
            "decompose",
            "--algebra",
            &data("l2xl3.alg"),
            "--n",
            "2",
            "--format",
            "json",
        ],
        0,
    );
    let run = case(
        "decompose_l4_n2",
        &["decompose", "--algebra", &data("l4.alg"), "--n", "2"],
        2,
    );
    assert!(run.stderr.contains("not 3-valued"));
}

#[test]
fn decompose_output_is_a_pair_file() {
    let run = mvdual(&["decompose", "--algebra", &data("l2xl3.alg"), "--n", "2"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.pair");
    fs::write(&path, &run.stdout).unwrap();
    let rebuilt = mvdual(&["build-m", "--pair", &path.display().to_string()]);
    assert_eq!(rebuilt.code, 0);
    assert!(rebuilt.stdout.contains("6 elements"));
}

#[test]
fn reconstruct() {
    case(
        "reconstruct_l2xl3_n6",
        &["reconstruct", "--algebra", &data("l2xl3.alg"), "--n", "6"],
        0,
    );
    case(
        "reconstruct_l3_n2",
        &["reconstruct", "--algebra", &data("l3.alg"), "--n", "2"],
        0,
    );
}

#[test]
fn roundtrip() {
    let run = case(
        "roundtrip_m6",
        &["roundtrip", "--pair", &data("m6.pair")],
        0,
    );
    assert!(run.stdout.lines().all(|l| l.starts_with("OK ")));
    case(
        "roundtrip_post3",
        &[
            "roundtrip",
            "--pair",
            &data("post3.pair"),
            "--format",
            "json",
        ],
        0,
    );
    case(
        "roundtrip_l2xl3_alg",
        &["roundtrip", "--algebra", &data("l2xl3.alg"), "--n", "6"],
        0,
    );
    let run = mvdual(&["roundtrip", "--algebra", &data("l3.alg")]);
    assert_eq!(run.code, 2);
}

#[test]
fn stone() {
    case("stone_m6", &["stone", "--pair", &data("m6.pair")], 0);
    case(
        "stone_post3_json",
        &["stone", "--pair", &data("post3.pair"), "--format", "json"],
        0,
    );
    case(
        "stone_map_valid",
        &[
            "stone",
            "--pair",
            &data("m6.pair"),
            "--map",
            &data("valid.map"),
        ],
        0,
    );
    let run = case(
        "stone_map_invalid",
        &[
            "stone",
            "--pair",
            &data("m6.pair"),
            "--map",
            &data("invalid.map"),
        ],
        1,
    );
    assert!(run.stderr.contains("point 0") && run.stderr.contains("h(1)"));
}

#[test]
fn suite() {
    let run = case("suite", &["suite"], 0);
    assert_eq!(
        run.stdout
            .lines()
            .filter(|l| l.starts_with("PASS "))
            .count(),
        9
    );
    case(
        "suite_c3_json",
        &["suite", "--criterion", "3", "--format", "json"],
        0,
    );
    let run = case("suite_c0", &["suite", "--criterion", "0"], 2);
    assert!(run.stderr.contains("no criterion 0"));
}

#[test]
fn input_errors() {
    let run = case("unknown_verb", &["frobnicate"], 2);
    assert!(run.stderr.contains("frobnicate"));
    let run = case(
        "missing_file",
        &["axioms", "--algebra", "/nonexistent.alg"],
        2,
    );
    assert!(run.stderr.starts_with("error: /nonexistent.alg"));
    let run = case("bad_format", &["axioms", "--algebra", &data("m6.pair")], 2);
    assert!(run.stderr.contains("wajsberg size="));
}

#[test]
fn deterministic() {
    let a = mvdual(&["suite", "--criterion", "6", "--seed", "3"]);
    let b = mvdual(&["suite", "--criterion", "6", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.code, 0);
}
