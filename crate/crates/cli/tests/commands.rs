use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn eqbundle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqbundle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8")
}

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
        .display()
        .to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn odd_line_is_obstructed_for_klein() {
    let o = eqbundle(&["obstruction", "--bundle", "O(-1)", "--group", "klein"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("odd degree"), "{}", stdout(&o));
    let o = eqbundle(&["obstruction", "--bundle", "O(-1)+O(-1)", "--group", "klein"]);
    assert_eq!(o.status.code(), Some(0));
    let o = eqbundle(&["obstruction", "--bundle", "O(-1)", "--group", "cyclic(3)"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn nonsplit_rank_two_has_balanced_type() {
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "b.json",
        r#"{"kind": "bundle", "conductor": 1, "rank": 2, "transition": [["z", "1"], ["0", "z"]]}"#,
    );
    let o = eqbundle(&["split-type", "--bundle", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{1,1}\n");
    assert_eq!(stdout(&eqbundle(&["degree", "--bundle", &f])), "2\n");
    assert_eq!(stdout(&eqbundle(&["hn", "--bundle", &f])), "[(1, 2)]\n");
}

#[test]
fn fuzz_reports_all_matches() {
    let o = eqbundle(&["fuzz", "--seed", "7", "--rank", "3", "--count", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o), "100/100 splitting-type oracle matches\n");
}

#[test]
fn fuzz_decomposition_oracle() {
    let o = eqbundle(&[
        "fuzz",
        "--seed",
        "3",
        "--count",
        "24",
        "--deg-min",
        "-3",
        "--deg-max",
        "3",
        "--target",
        "decompose",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o), "24/24 decomposition oracle matches\n");
}

#[test]
fn reports_are_deterministic() {
    let args = ["--json", "fuzz", "--seed", "11", "--count", "40"];
    let first = stdout(&eqbundle(&args));
    assert_eq!(first, stdout(&eqbundle(&args)));
    assert!(first.contains("\"matches\": 40"));
    let canon = ["canonical", "--group", "klein", "--target", "O(-3)^2+O(2)"];
    assert_eq!(stdout(&eqbundle(&canon)), stdout(&eqbundle(&canon)));
}

#[test]
fn sections_of_twisted_lines() {
    for (d, k, h) in [
        (-1, 0, 0),
        (0, 0, 1),
        (2, 0, 3),
        (1, -1, 1),
        (0, -1, 0),
        (-3, 5, 3),
    ] {
        let bundle = format!("O({d})");
        let twist = k.to_string();
        let o = eqbundle(&["sections", "--bundle", &bundle, "--twist", &twist]);
        assert_eq!(o.status.code(), Some(0));
        assert!(
            stdout(&o).starts_with(&format!("h0(E({k})) = {h}\n")),
            "{}",
            stdout(&o)
        );
    }
}

#[test]
fn bundle_maps_over_group_elements() {
    // On O(1) with z ↦ −z, the constant 1 is a bundle map and z is not (it vanishes at 0).
    let check = |map: &str| {
        eqbundle(&[
            "equiv-check",
            "--bundle",
            "O(1)",
            "--group",
            "cyclic(2)",
            "--element",
            "g",
            "--map",
            map,
        ])
        .status
        .code()
    };
    assert_eq!(check("1"), Some(0));
    assert_eq!(check("z"), Some(1));
    let o = eqbundle(&[
        "equiv-check",
        "--bundle",
        "O(1)",
        "--group",
        "cyclic(2)",
        "--element",
        "h",
        "--map",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn decompose_verify_build_pipeline() {
    let dir = TempDir::new().unwrap();
    let s = dir.path().join("s.json").display().to_string();
    let c = dir.path().join("c.json").display().to_string();
    let b = dir.path().join("b.json").display().to_string();
    let o = eqbundle(&[
        "canonical",
        "--group",
        "klein",
        "--target",
        "O(2)+O(-1)^2+O(0)",
        "--out",
        &s,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(eqbundle(&["validate", &s]).status.code(), Some(0));
    assert_eq!(
        eqbundle(&["decompose", "--structure", &s, "--out", &c])
            .status
            .code(),
        Some(0)
    );
    let o = eqbundle(&["verify-cert", "--certificate", &c, "--structure", &s]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = eqbundle(&[
        "build",
        "--certificate",
        &c,
        "--bundle",
        &s.replace("s.json", "missing.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("E_IO"));
    assert_eq!(
        eqbundle(&["build", "--certificate", &c, "--out", &b])
            .status
            .code(),
        Some(0)
    );
    // Without a target the blocks are assembled on the sorted split model.
    let o = eqbundle(&["equivalent", "--left", &s, "--right", &b]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("E_NOT_COMPARABLE"));
    let o = eqbundle(&["build", "--certificate", &c, "--bundle", &s, "--out", &b]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        eqbundle(&["equivalent", "--left", &s, "--right", &b])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(fs::read_to_string(&b).unwrap(), fs::read_to_string(&s).unwrap());
}

#[test]
fn mutated_certificates_are_rejected() {
    let dir = TempDir::new().unwrap();
    let cert = fs::read_to_string(corpus("klein_two_zero_certificate.json")).unwrap();
    let structure = corpus("klein_two_zero_twisted.json");
    for (from, to, code) in [
        ("\"degree\": 0", "\"degree\": 2", "E_"),
        (
            "\"character\": \"chi(-1,+1)\"}\n  ]",
            "\"character\": \"chi(+1,+1)\"}\n  ]",
            "E_",
        ),
    ] {
        assert!(cert.contains(from));
        let f = write(dir.path(), "m.json", &cert.replacen(from, to, 1));
        let o = eqbundle(&["verify-cert", "--certificate", &f, "--structure", &structure]);
        assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
        assert!(stdout(&o).contains(code));
    }
}

#[test]
fn twisting_changes_the_equivalence_class() {
    let dir = TempDir::new().unwrap();
    let base = corpus("klein_two_zero.json");
    let twisted = corpus("klein_two_zero_twisted.json");
    assert_eq!(
        eqbundle(&["equivalent", "--left", &base, "--right", &twisted])
            .status
            .code(),
        Some(1)
    );
    let back = dir.path().join("back.json").display().to_string();
    let o = eqbundle(&[
        "twist-char",
        "--structure",
        &twisted,
        "--character",
        "chi(-1,+1)",
        "--out",
        &back,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(&back).unwrap(),
        fs::read_to_string(&base).unwrap()
    );
}

#[test]
fn canonical_odd_klein_line_does_not_exist() {
    let o = eqbundle(&["canonical", "--group", "klein", "--target", "O(-1)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("E_NO_SUCH_STRUCTURE"));
    let o = eqbundle(&["canonical", "--group", "klein", "--target", "lift:O(-1)"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn forged_cocycle_fails_validation() {
    // O(−1) over conductor 4 with every Klein element acting by 1 or z.
    let dir = TempDir::new().unwrap();
    let f = write(
        dir.path(),
        "forged.json",
        r#"{"kind": "structure", "group": "klein", "acting": "genuine",
            "bundle": {"kind": "bundle", "conductor": 4, "rank": 1, "transition": [["z^-1"]]},
            "maps": {"e": [["1"]], "a1": [["1"]], "a2": [["z"]], "a1a2": [["z"]]}}"#,
    );
    let o = eqbundle(&["validate", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid structure"), "{}", stdout(&o));
}

#[test]
fn input_errors_exit_two_with_positions() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "{\"kind\": \"bundle\", \"conductor\": 1, \"rank\": 1,\n \"transition\": [[\"z^^2\"]]}",
    );
    let o = eqbundle(&["degree", "--bundle", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.json:2:"), "{}", stderr(&o));
    assert!(stderr(&o).contains("E_PARSE"));

    let truncated = write(dir.path(), "cut.json", "{\"kind\": \"bundle\",\n \"rank\": ");
    let o = eqbundle(&["validate", &truncated]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("cut.json:2:"), "{}", stderr(&o));

    let singular = write(
        dir.path(),
        "sing.json",
        r#"{"kind": "bundle", "conductor": 1, "rank": 2, "transition": [["z", "1"], ["z", "1"]]}"#,
    );
    let o = eqbundle(&["--json", "split-type", "--bundle", &singular]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("\"status\": \"error\""));
    assert!(stdout(&o).contains("E_NON_UNIMODULAR"), "{}", stdout(&o));

    let o = eqbundle(&["obstruction", "--bundle", "O(1)", "--group", "dihedral(3)"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(eqbundle(&["no-such-command"]).status.code(), Some(2));
}
