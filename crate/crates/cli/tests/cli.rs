use std::path::PathBuf;
use std::process::Command;

use holorec::SequenceTable;
use holorec_cli::bfile::{parse_bfile, write_bfile, BFileDocument};
use holorec_cli::fetch::{BFileCache, FetchError};
use holorec_cli::report::{GuessJson, RecurrenceJson, SelfCheckJson, VerifyJson};
use holorec_cli::run;
use num_bigint::BigInt;
use proptest::prelude::*;

const MATHAR: &str = "a(n) - a(n-1) + (n-1)^2*a(n-2) = 0 for n >= 2";

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn holorec(args: &[&str]) -> holorec_cli::Invocation {
    run(std::iter::once("holorec").chain(args.iter().copied()))
}

#[test]
fn ode2rec_prints_mathar() {
    let inv = holorec(&["ode2rec", "(1+t^2)*D - (1-t)"]);
    assert_eq!(inv.code, 0);
    assert_eq!(inv.stdout, format!("{MATHAR}\n"));

    let inv = holorec(&["ode2rec", "(1+t^2)*D - (1-t)", "--zero-convention"]);
    assert_eq!(inv.stdout, "a(n) - a(n-1) + (n-1)^2*a(n-2) = 0 for n >= 1\n");

    let json: RecurrenceJson =
        serde_json::from_str(&holorec(&["ode2rec", "(1+t^2)*D - (1-t)", "--json"]).stdout).unwrap();
    assert_eq!(json.recurrence, MATHAR);
    assert_eq!((json.order, json.degree, json.n_min), (2, 2, 2));
    assert_eq!(
        json.coefficients,
        vec![vec!["1"], vec!["-1"], vec!["1", "-2", "1"]]
    );
}

#[test]
fn generate_prints_paper_terms() {
    let inv = holorec(&[
        "generate",
        "--rec",
        "a(n) - a(n-1) + (n-1)^2*a(n-2) = 0",
        "--init",
        "1,1",
        "--to",
        "11",
    ]);
    assert_eq!(inv.code, 0, "{}", inv.stderr);
    assert_eq!(
        inv.stdout,
        "1, 1, 0, -4, -4, 60, 160, -2000, -9840, 118160, 915200, -10900800\n"
    );
}

#[test]
fn generate_writes_bfile() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.txt");
    let inv = holorec(&[
        "generate",
        "--ode",
        "D - 1",
        "--init",
        "3",
        "--to",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(inv.code, 0, "{}", inv.stderr);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "0 3\n1 3\n2 3\n3 3\n4 3\n");
}

#[test]
fn verify_fixture_passes() {
    let inv = holorec(&["verify", "--rec", MATHAR, "--bfile", &fixture("b214615.txt")]);
    assert_eq!(inv.code, 0, "{}{}", inv.stdout, inv.stderr);
    assert!(inv.stdout.contains("PASS"));
    assert!(inv.stdout.contains("n = 2..11"));
}

#[test]
fn verify_corrupt_fixture_reports_first_failure() {
    let inv = holorec(&[
        "verify",
        "--rec",
        MATHAR,
        "--bfile",
        &fixture("b214615_corrupt.txt"),
        "--json",
    ]);
    assert_eq!(inv.code, 1);
    let rep: VerifyJson = serde_json::from_str(&inv.stdout).unwrap();
    assert!(!rep.pass);
    assert_eq!(rep.first_failure.unwrap().n, 7);
    assert_eq!(rep.failures, vec![7, 8, 9]);
}

#[test]
fn verify_accepts_inline_terms_with_offset() {
    let inv = holorec(&[
        "verify",
        "--ode",
        "(1+t^2)*D - (1-t)",
        "--terms",
        "60,160,-2000,-9840",
        "--offset",
        "5",
    ]);
    assert_eq!(inv.code, 0, "{}", inv.stderr);
    assert!(inv.stdout.contains("n = 7..8"));
}

#[test]
fn guess_from_fixture() {
    let inv = holorec(&["guess", "--bfile", &fixture("b214615.txt"), "--json"]);
    assert_eq!(inv.code, 0, "{}", inv.stderr);
    let g: GuessJson = serde_json::from_str(&inv.stdout).unwrap();
    assert_eq!(g.candidates.len(), 1);
    assert_eq!(g.candidates[0].recurrence, MATHAR);
    assert_eq!(g.terms_used, 12);

    let inv = holorec(&["guess", "--terms", "1,2,3", "--max-order", "2"]);
    assert_eq!(inv.code, 2);
    assert!(inv.stderr.starts_with("guess:"), "{}", inv.stderr);
}

#[test]
fn series_prints_meixner_values() {
    let inv = holorec(&["series", "--x0", "1", "--order", "6"]);
    assert_eq!(inv.stdout, "1, 1, 0, -4, -4, 60, 160\n");
    let inv = holorec(&["series", "--x0", "0", "--order", "4", "--show-series"]);
    assert_eq!(
        inv.stdout.lines().next().unwrap(),
        "1 + 0*t - 1/2*t^2 + 0*t^3 + 3/8*t^4 + O(t^5)"
    );
    let inv = holorec(&["series", "--x0", "-1", "--order", "3"]);
    assert_eq!(inv.stdout, "1, -1, 0, 4\n");
}

#[test]
fn selfcheck_small_prints_terms() {
    let inv = holorec(&["selfcheck", "--max-n", "11", "--series-order", "20"]);
    assert_eq!(inv.code, 0);
    assert!(inv
        .stdout
        .contains("terms: 1, 1, 0, -4, -4, 60, 160, -2000, -9840, 118160, 915200, -10900800"));
}

#[test]
fn selfcheck_against_corrupt_fixture_fails() {
    let inv = holorec(&[
        "selfcheck",
        "--max-n",
        "20",
        "--series-order",
        "10",
        "--against",
        &fixture("b214615_corrupt.txt"),
        "--json",
    ]);
    assert_eq!(inv.code, 1);
    let j: SelfCheckJson = serde_json::from_str(&inv.stdout).unwrap();
    assert!(!j.pass);
    assert!(j.ode.zero && j.unrolled.pass);
    assert_eq!(j.against.unwrap().first_failure.unwrap().n, 7);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(holorec(&["selfcheck", "--max-n", "1"]).code, 2);
    assert_eq!(holorec(&["ode2rec", "(1+t^2)*D -"]).code, 2);
    assert_eq!(holorec(&["verify", "--rec", MATHAR, "--bfile", &fixture("gap.txt")]).code, 2);
    assert_eq!(holorec(&["verify", "--rec", MATHAR]).code, 2);
    assert_eq!(holorec(&["bogus"]).code, 2);
    let missing = holorec(&["verify", "--rec", MATHAR, "--bfile", "/nonexistent/b.txt"]);
    assert_eq!(missing.code, 3);
}

#[test]
fn unroll_failure_is_mathematical() {
    let inv = holorec(&["generate", "--rec", "2*a(n) - a(n-1) = 0", "--init", "1", "--to", "3"]);
    assert_eq!(inv.code, 1);
    assert!(inv.stderr.contains("not an integer"), "{}", inv.stderr);
}

#[test]
fn ode2rec_generate_verify_compose() {
    let corpus = [
        ("(1+t^2)*D - (1-t)", "1,1"),
        ("D - 1", "1"),
        ("(1-t)*D - 1", "1"),
        ("D - t", "1,0"),
        ("(1-t)*D - (2-t)", "1,2"),
        ("(1-2t)*D - 2", "1"),
        ("D^2 - D - 1", "0,1"),
        ("(1+t^2)*D - (3-t)", "1,3"),
    ];
    for (ode, init) in corpus {
        let rec = holorec(&["ode2rec", ode]);
        assert_eq!(rec.code, 0, "{ode}: {}", rec.stderr);
        let rec = rec.stdout.trim().to_string();
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("b.txt");
        let gen = holorec(&[
            "generate", "--rec", &rec, "--init", init, "--to", "40", "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(gen.code, 0, "{ode}: {}", gen.stderr);
        let ver = holorec(&["verify", "--ode", ode, "--bfile", out.to_str().unwrap()]);
        assert_eq!(ver.code, 0, "{ode}: {}", ver.stdout);
    }
}

#[test]
fn fetch_uses_warm_cache_without_network() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("b214615.txt"), dir.path().join("b214615.txt")).unwrap();
    let cache = BFileCache::new(dir.path(), true);
    let doc = cache.fetch("A214615").unwrap();
    assert_eq!(doc.sequence_id.as_deref(), Some("A214615"));
    assert_eq!(doc.entries.len(), 12);

    let inv = holorec(&[
        "verify",
        "--rec",
        MATHAR,
        "--oeis",
        "A214615",
        "--offline",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(inv.code, 0, "{}", inv.stderr);
}

#[test]
fn fetch_cold_cache_offline_is_explicit() {
    let dir = tempfile::tempdir().unwrap();
    let cache = BFileCache::new(dir.path(), true);
    let err = cache.fetch("A214615").unwrap_err();
    assert!(matches!(err, FetchError::Offline { .. }));
    assert!(err.to_string().contains("--bfile"));
    assert!(matches!(cache.fetch("X1"), Err(FetchError::InvalidId(_))));

    let inv = holorec(&["fetch", "A214615", "--offline", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(inv.code, 3);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_holorec");
    let ok = Command::new(bin)
        .args(["selfcheck", "--max-n", "11", "--series-order", "10"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("selfcheck: PASS"));
    let bad = Command::new(bin)
        .args(["verify", "--rec", MATHAR, "--bfile", &fixture("b214615_corrupt.txt")])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

fn arb_doc() -> impl Strategy<Value = BFileDocument> {
    (
        prop::option::of(100_000u32..9_999_999),
        -5i64..100,
        prop::collection::vec("-?[1-9][0-9]{0,60}|0", 0..40),
    )
        .prop_map(|(id, offset, terms)| BFileDocument {
            sequence_id: id.map(|v| format!("A{v:06}")),
            entries: SequenceTable::new(
                offset,
                terms.iter().map(|t| t.parse::<BigInt>().unwrap()).collect(),
            ),
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, rng_algorithm: prop::test_runner::RngAlgorithm::ChaCha, rng_seed: prop::test_runner::RngSeed::Fixed(0x214615), ..ProptestConfig::default() })]

    #[test]
    fn bfile_round_trip(doc in arb_doc()) {
        let mut expect = doc.clone();
        if expect.entries.is_empty() {
            expect.entries = SequenceTable::default();
        }
        prop_assert_eq!(parse_bfile(write_bfile(&doc).as_bytes()).unwrap(), expect);
    }
}
