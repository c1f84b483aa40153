use std::path::Path;
use std::process::{Command, Output};

use hyperoct_cli::{verify_text, CertificateFile};

fn hyperoct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperoct"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn construct_to(dir: &Path, name: &str, n: usize, seed: u64, extra: &[&str]) -> String {
    let path = dir.join(name);
    let (n, seed) = (n.to_string(), seed.to_string());
    let mut args = vec!["construct", "--n", &n, "--seed", &seed, "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = hyperoct(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read_to_string(path).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no {key}"))
}

#[test]
fn genus_table_exceptional_rows() {
    let out = hyperoct(&["genus-table", "--from", "5", "--to", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let genera: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(3).unwrap())
        .collect();
    assert_eq!(genera, ["289", "3841", "26881", "645121"]);
    assert_eq!(text.matches("exceptional").count(), 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        hyperoct(&["genus-table", "--from", "2", "--to", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(hyperoct(&["genus-table", "--from", "3"]).status.code(), Some(2));
    assert_eq!(hyperoct(&["construct", "--n", "2"]).status.code(), Some(2));
    assert_eq!(hyperoct(&["search-min", "--n", "7"]).status.code(), Some(2));
    assert_eq!(hyperoct(&["search-min", "--n", "9", "--long"]).status.code(), Some(2));
    assert_eq!(hyperoct(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = construct_to(dir.path(), "a.txt", 19, 7, &[]);
    let b = construct_to(dir.path(), "b.txt", 19, 7, &[]);
    assert_eq!(a, b);
    assert!(!a.contains('\r'));
    assert_eq!(field(&a, "signature"), "(2,4,6)");
    assert_eq!(field(&a, "genus"), "2657377766797737984001");
    assert_eq!(field(&a, "seed"), "7");

    let parsed = CertificateFile::parse(&a).unwrap();
    assert_eq!(parsed.to_text(), a);
    let out = hyperoct(&["verify", dir.path().join("a.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exceptional_and_lifted_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let five = construct_to(dir.path(), "five.txt", 5, 1, &[]);
    assert_eq!(field(&five, "signature"), "(2,4,10)");
    assert_eq!(field(&five, "genus"), "289");

    let big = construct_to(dir.path(), "big.txt", 41, 1, &[]);
    assert_eq!(field(&big, "signature"), "(2,4,6)");
    assert!(field(&big, "jordan_witness").starts_with("word="));
    assert_eq!(field(&big, "verification_mode"), "jordan+chain");
    verify_text(&big).unwrap();

    let large = construct_to(dir.path(), "large.txt", 77, 2, &["--no-chain-verify"]);
    assert_eq!(field(&large, "verification_mode"), "jordan");
    verify_text(&large).unwrap();
}

#[test]
fn every_sign_bit_flip_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = construct_to(dir.path(), "c.txt", 19, 3, &[]);
    let mut flips = 0;
    for key in ["generator_x", "generator_y"] {
        let value = field(&text, key);
        let bar = value.rfind('|').unwrap() + 2;
        for k in bar..value.len() - 1 {
            let mut mutated = value.to_string();
            let bit = if &value[k..=k] == "0" { "1" } else { "0" };
            mutated.replace_range(k..=k, bit);
            let file = dir.path().join("m.txt");
            std::fs::write(&file, text.replace(value, &mutated)).unwrap();
            let out = hyperoct(&["verify", file.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(1));
            let err = String::from_utf8(out.stderr).unwrap();
            assert!(
                err.contains("element orders check") || err.contains("generation check"),
                "{err}"
            );
            flips += 1;
        }
    }
    assert_eq!(flips, 38);
}

#[test]
fn truncated_and_tampered_files_fail() {
    let dir = tempfile::tempdir().unwrap();
    let text = construct_to(dir.path(), "c.txt", 41, 5, &[]);
    let cut = &text[..text.len() / 2];
    let path = dir.path().join("cut.txt");
    std::fs::write(&path, cut).unwrap();
    let out = hyperoct(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("parse error"));

    let err = verify_text(&text.replace("genus = 3", "genus = 4")).unwrap_err();
    assert!(err.to_string().contains("genus check"), "{err}");
    let err = verify_text(&text.replace("order = 7", "order = 8")).unwrap_err();
    assert!(err.to_string().contains("order check"), "{err}");
    let witness = field(&text, "jordan_witness");
    let bad = witness.replace("power=", "power=1");
    let err = verify_text(&text.replace(witness, &bad)).unwrap_err();
    assert!(err.to_string().contains("witness check"), "{err}");
    assert!(verify_text(&text.replace("n = 41", "n = 40")).is_err());
}

#[test]
fn search_min_reports() {
    let out = hyperoct(&["search-min", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let statuses: Vec<&str> = text.lines().filter(|l| l.starts_with('(')).collect();
    assert!(statuses[0].starts_with("(2,4,6): none"));
    assert!(statuses[1].starts_with("(2,4,8): none"));
    assert!(statuses.last().unwrap().starts_with("(2,4,10): FOUND"));

    let text = String::from_utf8(hyperoct(&["search-min", "--n", "6"]).stdout).unwrap();
    let last = text.lines().rfind(|l| l.starts_with('(')).unwrap();
    assert!(last.starts_with("(2,6,6): FOUND"));
}
