use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn crmap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crmap"))
        .current_dir(dir)
        .env_remove("CRMAP_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

fn write_family(dir: &Path, file: &str, args: &[&str]) {
    let mut all = vec!["family"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", file]);
    let o = crmap(dir, &all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_explicit_and_family_maps() {
    let dir = TempDir::new().unwrap();
    write_family(dir.path(), "h14.json", &["h14"]);
    let o = crmap(dir.path(), &["verify", "h14.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "VERIFIED exact");

    write_family(dir.path(), "m.json", &["thm-i", "--mu", "1/3", "--lambda", "1/3", "--N", "4"]);
    assert_eq!(crmap(dir.path(), &["verify", "m.json"]).status.code(), Some(0));

    write_family(dir.path(), "linear.json", &["linear", "--N", "4"]);
    assert_eq!(stdout(&crmap(dir.path(), &["verify", "linear.json"])).trim(), "VERIFIED exact");

    let o = crmap(dir.path(), &["verify", "h14.json", "--mode", "float"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("VERIFIED float"));
}

#[test]
fn broken_map_lists_residual_terms() {
    let dir = TempDir::new().unwrap();
    let src = r#"{"model":"heisenberg","source_dim":2,"target_dim":4,
        "components":[[{"e":[1,0,0,0],"c":"1"}],[{"e":[2,0,0,0],"c":"1"}],[],[{"e":[0,1,0,0],"c":"1"}]],
        "denominator":[{"e":[0,0,0,0],"c":"1"}]}"#;
    std::fs::write(dir.path().join("broken.json"), src).unwrap();
    let o = crmap(dir.path(), &["verify", "broken.json"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("NOT VERIFIED exact"));
    assert!(out.lines().count() > 1);

    let o = crmap(dir.path(), &["verify", "broken.json", "--mode", "float"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{ not json").unwrap();
    assert_eq!(crmap(dir.path(), &["verify", "bad.json"]).status.code(), Some(2));
    assert_eq!(crmap(dir.path(), &["verify", "missing.json"]).status.code(), Some(2));
    assert_eq!(crmap(dir.path(), &["frobnicate"]).status.code(), Some(2));
    let o = crmap(dir.path(), &["family", "thm-i", "--mu", "1/10", "--lambda", "1", "--N", "5"]);
    assert_eq!(o.status.code(), Some(1));
    write_family(dir.path(), "h24.json", &["h24"]);
    let o = crmap(dir.path(), &["degeneracy", "h24.json", "--point", "1,0"]);
    assert_eq!(o.status.code(), Some(3));
    let o = crmap(dir.path(), &["degeneracy", "h24.json", "--point", "1,x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn degeneracy_reports() {
    let dir = TempDir::new().unwrap();
    write_family(dir.path(), "h24.json", &["h24"]);
    let o = crmap(dir.path(), &["degeneracy", "h24.json", "--point", "0,0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["result"]["locus"]["entries"][0]["report"];
    assert_eq!(r["s"], 1);
    assert_eq!(r["k0"], 2);

    let o = crmap(dir.path(), &["degeneracy", "h24.json", "--grid", "t=-2..2:9", "--format", "json"]);
    let locus = &json(&o)["result"]["locus"];
    assert_eq!(locus["generic_s"], 0);
    assert_eq!(locus["exceptional"], serde_json::json!([4]));
    let entries = locus["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 9);
    for (k, e) in entries.iter().enumerate() {
        assert_eq!(e["report"]["s"], if k == 4 { 1 } else { 0 });
    }

    let o = crmap(dir.path(), &["degeneracy", "h24.json", "--point", "0,0", "--mode", "float", "--format", "json"]);
    let r = &json(&o)["result"]["locus"]["entries"][0]["report"];
    assert_eq!(r["s"], 1);
    assert!(r["gap"]["min_kept"].as_f64().unwrap() > 1e-4);

    write_family(dir.path(), "lebl.json", &["lebl", "--s", "0", "--t", "1/2", "--N", "5"]);
    for seed in ["1", "2", "3"] {
        let o = crmap(
            dir.path(),
            &["degeneracy", "lebl.json", "--point", "random", "--seed", seed, "--format", "json"],
        );
        assert_eq!(json(&o)["result"]["locus"]["entries"][0]["report"]["s"], 2);
    }

    let o = crmap(dir.path(), &["degeneracy", "h24.json", "--point", "0,0", "--tangential", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["result"]["tangential"][0]["report"]["certified"].as_bool().unwrap());
}

#[test]
fn span_and_degree() {
    let dir = TempDir::new().unwrap();
    write_family(dir.path(), "thmI_N6.json", &["thm-i", "--mu", "1", "--lambda", "1", "--N", "6"]);
    assert_eq!(stdout(&crmap(dir.path(), &["span", "thmI_N6.json"])).trim(), "5");
    write_family(dir.path(), "thmII_N5.json", &["thm-ii", "--a", "-1", "--lambda", "1", "--N", "5"]);
    assert_eq!(stdout(&crmap(dir.path(), &["span", "thmII_N5.json"])).trim(), "4");
    write_family(dir.path(), "h14.json", &["h14"]);
    assert_eq!(stdout(&crmap(dir.path(), &["degree", "h14.json"])).trim(), "3");
    write_family(dir.path(), "w.json", &["whitney"]);
    assert_eq!(stdout(&crmap(dir.path(), &["degree", "w.json"])).trim(), "2");
}

#[test]
fn normalize_writes_certificate_and_map() {
    let dir = TempDir::new().unwrap();
    write_family(dir.path(), "m.json", &["thm-ii", "--a", "-1", "--lambda", "1", "--N", "4"]);
    let o = crmap(dir.path(), &["normalize", "m.json", "--out", "n.json", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let cert = &json(&o)["result"]["certificate"];
    assert_eq!(cert["conditions"]["i"], true);
    assert_eq!(cert["conditions"]["xi"], true);
    assert_eq!(crmap(dir.path(), &["verify", "n.json"]).status.code(), Some(0));

    // the linear embedding has f^(2,0) = 0
    write_family(dir.path(), "l.json", &["linear", "--N", "4"]);
    assert_eq!(crmap(dir.path(), &["normalize", "l.json"]).status.code(), Some(3));
}

#[test]
fn cayley_round_trip() {
    let dir = TempDir::new().unwrap();
    write_family(dir.path(), "f24.json", &["f24"]);
    let o = crmap(dir.path(), &["cayley", "f24.json", "--out", "h.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(crmap(dir.path(), &["verify", "h.json"]).status.code(), Some(0));
    let o = crmap(dir.path(), &["cayley", "h.json", "--out", "back.json"]);
    assert_eq!(o.status.code(), Some(0));
    let a = crmap_core::io::read_map(&dir.path().join("f24.json")).unwrap();
    let b = crmap_core::io::read_map(&dir.path().join("back.json")).unwrap();
    assert!(a.cross_eq(&b));

    let o = crmap(dir.path(), &["cayley", "f24.json", "--side", "target", "--out", "mixed.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(crmap(dir.path(), &["verify", "mixed.json"]).status.code(), Some(0));
}

#[test]
fn family_file_round_trips() {
    let dir = TempDir::new().unwrap();
    write_family(dir.path(), "m.json", &["thm-i", "--mu", "1/3", "--lambda", "1/4", "--N", "5"]);
    let back = crmap_core::io::read_map(&dir.path().join("m.json")).unwrap();
    let p = crmap_core::FamilyIParams::new(
        crmap_core::Rational::new(1.into(), 3.into()),
        "1/4".parse().unwrap(),
        5,
    )
    .unwrap();
    assert_eq!(back, crmap_core::family_thm_i(&p).unwrap());
}

#[test]
fn json_reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    write_family(dir.path(), "h24.json", &["h24"]);
    let args = ["degeneracy", "h24.json", "--point", "random", "--point", "0,0", "--format", "json"];
    let a = crmap(dir.path(), &args);
    let b = crmap(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    let with_env = Command::new(env!("CARGO_BIN_EXE_crmap"))
        .current_dir(dir.path())
        .env("CRMAP_SEED", "7")
        .args(args)
        .output()
        .unwrap();
    assert_eq!(json(&with_env)["seed"], 7);
    assert_ne!(with_env.stdout, a.stdout);
}
