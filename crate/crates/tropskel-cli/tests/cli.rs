//! Exercise the binary end to end: exit-code contract, round-trip
//! idempotence, and byte-level determinism of reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_tropskel")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tropskel-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn exit_codes_follow_contract() {
    let dir = tempdir("codes");
    let complex = dir.join("c.json");
    let ext = dir.join("e.json");

    // 0: successful builds.
    let out = run(&[
        "hypersurface",
        fixture("golden_poly.json").to_str().unwrap(),
        "--out",
        complex.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&[
        "extend",
        complex.to_str().unwrap(),
        fixture("octant_fan.json").to_str().unwrap(),
        "--out",
        ext.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    // 0: passing criterion.
    let out = run(&[
        "check",
        "limit",
        ext.to_str().unwrap(),
        fixture("octant_fan.json").to_str().unwrap(),
        "--cell",
        "P1",
        "--cone",
        "sigma23",
    ]);
    assert_eq!(out.status.code(), Some(0));

    // 1: failing criteria with witnesses printed.
    for kind in ["proper", "closed", "continuity"] {
        let out = run(&[
            "check",
            kind,
            ext.to_str().unwrap(),
            fixture("octant_fan.json").to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(1), "kind {kind}");
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("witness"), "kind {kind}: {text}");
    }

    // 2: malformed or invalid inputs.
    let out = run(&["hypersurface", fixture("single_term.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TOO_FEW_TERMS"));

    let out = run(&["hypersurface", fixture("float_poly.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["hypersurface", fixture("no_such_file.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // 2: rank mismatch between complex and fan.
    let out = run(&[
        "extend",
        complex.to_str().unwrap(),
        fixture("p2_fan.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // 2: non-pure dense stratum for the proper check.
    let out = run(&[
        "check",
        "proper",
        fixture("nonpure_complex.json").to_str().unwrap(),
        fixture("p2_fan.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hk_exit_codes() {
    let out = run(&["hk", fixture("line_hk.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("f-vector (1, 3)"), "{text}");
    assert!(text.contains("connected components: 1"));

    let out = run(&["hk", fixture("line_hk_bad_mtrop.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["hk", fixture("line_hk_missing_inclusion.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("MISSING_INCLUSION"));
}

#[test]
fn extend_with_trivial_fan_is_identity() {
    let dir = tempdir("trivial");
    let complex = dir.join("c.json");
    let ext = dir.join("e.json");
    run(&[
        "hypersurface",
        fixture("golden_poly.json").to_str().unwrap(),
        "--out",
        complex.to_str().unwrap(),
    ]);
    let out = run(&[
        "extend",
        complex.to_str().unwrap(),
        fixture("trivial_fan.json").to_str().unwrap(),
        "--out",
        ext.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&complex).unwrap(), std::fs::read(&ext).unwrap());
}

#[test]
fn roundtrip_extension_is_idempotent() {
    let dir = tempdir("roundtrip");
    let complex = dir.join("c.json");
    let ext1 = dir.join("e1.json");
    let ext2 = dir.join("e2.json");
    run(&[
        "hypersurface",
        fixture("golden_poly.json").to_str().unwrap(),
        "--out",
        complex.to_str().unwrap(),
    ]);
    run(&[
        "extend",
        complex.to_str().unwrap(),
        fixture("octant_fan.json").to_str().unwrap(),
        "--out",
        ext1.to_str().unwrap(),
    ]);
    // Re-extending the extended file (its dense stratum) reproduces it.
    let out = run(&[
        "extend",
        ext1.to_str().unwrap(),
        fixture("octant_fan.json").to_str().unwrap(),
        "--out",
        ext2.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let a = std::fs::read(&ext1).unwrap();
    let b = std::fs::read(&ext2).unwrap();
    assert_eq!(a, b, "extension is not idempotent");
}

#[test]
fn strict_and_parallel_flags() {
    let dir = tempdir("flags");
    let complex = dir.join("c.json");
    let ext = dir.join("e.json");
    run(&[
        "hypersurface",
        fixture("golden_poly.json").to_str().unwrap(),
        "--out",
        complex.to_str().unwrap(),
    ]);
    run(&[
        "extend",
        complex.to_str().unwrap(),
        fixture("octant_fan.json").to_str().unwrap(),
        "--out",
        ext.to_str().unwrap(),
    ]);
    // --strict revalidates the derived strata; the output must not change.
    let base = run(&[
        "check",
        "proper",
        ext.to_str().unwrap(),
        fixture("octant_fan.json").to_str().unwrap(),
        "--json",
    ]);
    let strict = run(&[
        "check",
        "proper",
        ext.to_str().unwrap(),
        fixture("octant_fan.json").to_str().unwrap(),
        "--json",
        "--strict",
    ]);
    assert_eq!(base.stdout, strict.stdout);
    // --jobs changes scheduling, never bytes.
    let par = run(&[
        "check",
        "proper",
        ext.to_str().unwrap(),
        fixture("octant_fan.json").to_str().unwrap(),
        "--json",
        "--jobs",
        "4",
    ]);
    assert_eq!(base.stdout, par.stdout);
    // --explain annotates witnesses.
    let explain = run(&[
        "check",
        "closed",
        ext.to_str().unwrap(),
        fixture("octant_fan.json").to_str().unwrap(),
        "--explain",
    ]);
    assert!(String::from_utf8_lossy(&explain.stdout).contains("hypothesis:"));
}
