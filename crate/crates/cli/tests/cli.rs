use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use htk_cli::commands::{run, Cli};
use htk_cli::format::{parse, Document};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn htk(args: &[&str]) -> Output {
    let cli = Cli::try_parse_from(std::iter::once("htk").chain(args.iter().copied())).expect("arguments parse");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&cli, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

/// A fresh scratch directory per test.
fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("htk-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

/// Runs `args` and stores stdout in `dir/file`, returning the path.
fn save(dir: &Path, file: &str, args: &[&str]) -> String {
    let o = htk(args);
    assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
    let path = dir.join(file);
    fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn theta_of_cyclic_group_matches_golden() {
    let dir = workdir("golden");
    let z2 = save(&dir, "z2.json", &["build", "zn", "--n", "2"]);
    let o = htk(&["apply", "theta", &z2]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout, include_str!("golden/theta_disc_z2.json"));
}

#[test]
fn exit_codes() {
    let dir = workdir("exit");
    let good = save(&dir, "t.json", &["build", "terminal", "--dim", "1"]);
    assert_eq!(htk(&["validate", &good]).code, 0);

    let broken = dir.join("broken.json");
    fs::write(&broken, "{ not json").unwrap();
    let o = htk(&["validate", broken.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.starts_with("error:"));

    assert_eq!(htk(&["validate", dir.join("missing.json").to_str().unwrap()]).code, 2);
    assert_eq!(htk(&["check", "no-such-suite"]).code, 2);

    let mut doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&good).unwrap()).unwrap();
    let entry = doc["composition"].as_array_mut().unwrap().iter_mut().next().unwrap();
    entry[2] = serde_json::Value::String("fault".into());
    let faulty = dir.join("faulty.json");
    fs::write(&faulty, doc.to_string()).unwrap();
    let o = htk(&["validate", faulty.to_str().unwrap()]);
    assert_eq!(o.code, 1, "{}{}", o.stdout, o.stderr);
}

#[test]
fn bound_too_small_is_reported() {
    let dir = workdir("bound");
    let com2 = save(&dir, "com2.json", &["build", "com"]);
    let o = htk(&["apply", "deloop", &com2]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("exceeds the presentation bound 2"), "{}", o.stderr);
}

#[test]
fn deloop_of_com_is_terminal() {
    let dir = workdir("deloop");
    let com = save(&dir, "com.json", &["--bound", "1", "build", "com"]);
    let d = htk(&["--bound", "1", "apply", "deloop", &com]);
    let t = htk(&["--bound", "1", "build", "terminal", "--dim", "2", "--depth", "1"]);
    assert_eq!(d.code, 0, "{}", d.stderr);
    assert_eq!(d.stdout, t.stdout);
}

#[test]
fn parse_then_write_is_identity() {
    let dir = workdir("roundtrip");
    let z2 = save(&dir, "z2.json", &["build", "zn", "--n", "2"]);
    let init = save(&dir, "init.json", &["build", "init"]);
    let disc = save(&dir, "disc.json", &["build", "disc"]);
    let p = save(&dir, "p.json", &["enum", "functors", &disc, &init, "--nth", "0"]);
    let files = [
        z2.clone(),
        save(&dir, "z2e.json", &["build", "zn", "--n", "2", "--enriched"]),
        save(&dir, "e1.json", &["build", "e1"]),
        save(&dir, "arrow.json", &["build", "cat-arrow"]),
        save(&dir, "graded.json", &["build", "graded", "--over", &disc, "--along", &p, "--target", &init]),
        p,
    ];
    for f in &files {
        let text = fs::read_to_string(f).unwrap();
        let doc = parse(&text).unwrap();
        assert_eq!(doc.to_text(), text, "{f}");
        let o = htk(&["fmt", f]);
        assert_eq!(o.stdout, text, "{f}");
    }
    assert!(matches!(parse(&fs::read_to_string(&files[4]).unwrap()).unwrap(), Document::Graded(_)));
}

#[test]
fn output_is_deterministic() {
    let dir = workdir("determinism");
    let e1 = save(&dir, "e1.json", &["build", "e1"]);
    let a = htk(&["apply", "theta", &e1]).stdout;
    let b = htk(&["apply", "theta", &e1]).stdout;
    assert_eq!(a, b);
}

#[test]
fn left_push_of_terminal_grading_is_the_source() {
    let dir = workdir("pushl");
    let disc = save(&dir, "v.json", &["build", "disc"]);
    let init = save(&dir, "u.json", &["build", "init"]);
    let p = save(&dir, "p.json", &["enum", "functors", &disc, &init, "--nth", "0"]);
    let one = save(&dir, "one.json", &["build", "graded", "--over", &disc]);
    let pushed = htk(&["apply", "pushL", &one, "--along", &p, "--target", &init]);
    let v = htk(&["build", "graded", "--over", &disc, "--along", &p, "--target", &init]);
    assert_eq!(pushed.code, 0, "{}", pushed.stderr);
    assert_eq!(pushed.stdout, v.stdout);
}

#[test]
fn morphisms_validate_against_their_ends() {
    let dir = workdir("morphism");
    let disc = save(&dir, "v.json", &["build", "disc"]);
    let init = save(&dir, "u.json", &["build", "init"]);
    let o = htk(&["enum", "functors", &disc, &init]);
    assert_eq!(o.stdout.trim(), "functors: 1");
    let p = save(&dir, "p.json", &["enum", "functors", &disc, &init, "--nth", "0"]);
    assert_eq!(htk(&["validate", &p, "--source", &disc, "--target", &init]).code, 0);
    assert_eq!(htk(&["enum", "functors", &disc, &init, "--nth", "5"]).code, 2);
}

#[test]
fn field_theories_of_the_cyclic_category() {
    let dir = workdir("field");
    let bz2 = save(&dir, "bz2.json", &["build", "cat-cyclic", "--n", "2"]);
    assert_eq!(htk(&["enum", "field-theories", &bz2]).stdout.trim(), "field-theories: 2");
    let disc = save(&dir, "d3.json", &["build", "cat-discrete", "--k", "3"]);
    assert_eq!(htk(&["enum", "field-theories", &disc]).stdout.trim(), "field-theories: 3");
}

#[test]
fn detheorized_theory_validates() {
    let dir = workdir("detheorize");
    let e1 = save(&dir, "e1.json", &["build", "e1"]);
    let d = save(&dir, "d.json", &["apply", "detheorize", &e1, "--colours", "*:a,b"]);
    assert_eq!(htk(&["validate", &d]).code, 0);
}

#[test]
fn suite_runs_through_check() {
    let o = htk(&["check", "bracket-functor"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.lines().last().unwrap().starts_with("PASS bracket-functor"));
}
