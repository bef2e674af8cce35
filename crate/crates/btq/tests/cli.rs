use std::path::PathBuf;
use std::process::{Command, Output};

use btq::export::{ChainComplexJson, GroupJson};
use btq_core::complex::SimplicialComplex;
use btq_core::exact::Coeff;
use serde_json::Value;

fn btq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btq")).args(args).env_remove("BTQ_CACHE_DIR").output().expect("spawn btq")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = btq(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("btq-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn pic_of_the_punctured_line() {
    let v = json(&["pic", "--q", "3", "--punctures", "t,inf"]);
    assert_eq!(v["unit_rank"], 1);
    assert_eq!(v["pic"], "0");
    assert_eq!(v["units"][0]["divisor"], serde_json::json!([-1, 1]));
}

#[test]
fn quotient_of_the_tree_is_a_ray() {
    let v = json(&["quotient", "--q", "2", "--s", "1", "--radius", "4", "--group", "sl2"]);
    assert_eq!(v["vertex_orbits"], 5);
    assert_eq!(v["cell_orbits"], serde_json::json!([5, 4]));
}

#[test]
fn tree_ball_sizes_and_dot() {
    let v = json(&["tree-ball", "--q", "3", "--radius", "2"]);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 1 + 4 + 12);
    let dot = btq(&["--format", "dot", "tree-ball", "--q", "2", "--radius", "1"]);
    assert_eq!(dot.status.code(), Some(0));
    assert!(stdout(&dot).starts_with("graph"));
}

#[test]
fn verify_reports_tap() {
    let out = btq(&["verify", "apartment-spheres"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("TAP version 13\n1..6\n"));
    assert!(!text.contains("not ok"));
    let list = stdout(&btq(&["verify", "--list"]));
    assert_eq!(list.lines().count(), 11);
}

#[test]
fn exit_codes() {
    // Invalid configuration.
    assert_eq!(btq(&["pic", "--q", "3", "--punctures", "t,bogus"]).status.code(), Some(2));
    assert_eq!(btq(&["pic", "--q", "6", "--punctures", "t"]).status.code(), Some(2));
    assert_eq!(btq(&["--format", "csv", "tree-ball", "--q", "2", "--radius", "1"]).status.code(), Some(2));
    assert_eq!(btq(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(btq(&["verify", "no-such-suite"]).status.code(), Some(2));
    // Resource caps.
    assert_eq!(btq(&["tree-ball", "--q", "5", "--radius", "30"]).status.code(), Some(3));
    assert_eq!(btq(&["e1-page", "--group", "sl2", "--q", "5"]).status.code(), Some(3));
    assert_eq!(btq(&["--help"]).status.code(), Some(0));
}

#[test]
fn dry_run_for_every_subcommand() {
    let input = scratch_dir("dry").join("c.json");
    std::fs::write(&input, r#"{"min_degree":0,"dims":[1],"boundaries":[]}"#).unwrap();
    let input = input.to_str().unwrap();
    let cases: &[&[&str]] = &[
        &["tree-ball", "--q", "2", "--radius", "3"],
        &["building-ball", "--q", "2", "--punctures", "t,inf", "--radius", "1"],
        &["pic", "--q", "3", "--punctures", "t,inf"],
        &["kummer", "--q", "3", "--punctures", "t,inf"],
        &["classify", "--q", "3", "--punctures", "t,inf"],
        &["quotient", "--q", "2", "--s", "1"],
        &["model", "--q", "3", "--punctures", "t,inf"],
        &["e1-page"],
        &["homology", "--input", input],
        &["points-complex", "--q", "3", "--max-degree", "2"],
        &["verify", "points"],
    ];
    for args in cases {
        let mut full = vec!["--dry-run"];
        full.extend_from_slice(args);
        let v = json(&full);
        assert_eq!(v["valid"], true, "{args:?}");
        assert_eq!(v["command"], args[0]);
    }
    // Validation still applies.
    assert_eq!(btq(&["--dry-run", "tree-ball", "--q", "5", "--radius", "30"]).status.code(), Some(3));
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let cases: &[&[&str]] = &[
        &["classify", "--q", "3", "--punctures", "t,inf", "--radius", "2"],
        &["quotient", "--q", "2", "--s", "2", "--radius", "2"],
        &["model", "--q", "3", "--punctures", "t,t+1,inf", "--flavor", "N"],
        &["e1-page", "--group", "gl2", "--q", "2", "--radius", "2"],
        &["verify", "localization"],
    ];
    for args in cases {
        let run = |threads: &str| {
            let mut full = vec!["--threads", threads];
            full.extend_from_slice(args);
            let out = btq(&full);
            assert_eq!(out.status.code(), Some(0), "{args:?}");
            out.stdout
        };
        assert_eq!(run("1"), run("4"), "{args:?}");
    }
}

#[test]
fn homology_round_trip() {
    let dir = scratch_dir("homology");
    // A circle with a Z/2 twist: Z -> Z by 2 in degree one.
    let input = dir.join("moore.json");
    std::fs::write(&input, r#"{"min_degree":0,"dims":[1,1],"boundaries":[{"degree":1,"entries":[[0,0,2]]}]}"#).unwrap();
    let v = json(&["--format", "json", "homology", "--input", input.to_str().unwrap()]);
    assert_eq!(v["homology"][0]["torsion"], serde_json::json!(["2"]));
    assert_eq!(v["homology"][1]["free_rank"], 0);
    let csv = stdout(&btq(&["homology", "--input", input.to_str().unwrap(), "--coeff", "Z[1/2]"]));
    assert_eq!(csv, "degree,free_rank,torsion\n0,0,\n1,0,\n");

    // The real projective plane, written by the exporter and read back.
    let facets = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1], [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3]];
    let rp2 = SimplicialComplex::from_facets(6, &facets.map(|f| f.to_vec()));
    let chain = rp2.chain_complex();
    let file = dir.join("rp2.json");
    std::fs::write(&file, serde_json::to_string(&ChainComplexJson::from_complex(&chain)).unwrap()).unwrap();
    let v = json(&["--format", "json", "homology", "--input", file.to_str().unwrap()]);
    let rows = v["homology"].as_array().unwrap();
    let expect: Vec<GroupJson> = chain.homology(Coeff::Z).iter().map(GroupJson::new).collect();
    assert_eq!(rows.len(), expect.len());
    for (row, g) in rows.iter().zip(&expect) {
        let mut row = row.clone();
        row.as_object_mut().unwrap().remove("degree");
        assert_eq!(row, serde_json::to_value(g).unwrap());
    }
    assert_eq!(rows[1]["display"], "Z/2");
}

#[test]
fn bad_chain_complex_is_rejected() {
    let dir = scratch_dir("bad");
    let input = dir.join("bad.json");
    // d1 d2 != 0.
    std::fs::write(
        &input,
        r#"{"min_degree":0,"dims":[1,1,1],"boundaries":[{"degree":1,"entries":[[0,0,1]]},{"degree":2,"entries":[[0,0,1]]}]}"#,
    )
    .unwrap();
    assert_eq!(btq(&["homology", "--input", input.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&input, "not json").unwrap();
    assert_eq!(btq(&["homology", "--input", input.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn quotient_cache_is_reused() {
    let dir = scratch_dir("cache");
    let args = ["quotient", "--q", "3", "--s", "1", "--radius", "3"];
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_btq")).args(args).env("BTQ_CACHE_DIR", &dir).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let first = run();
    let entries: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let path = entries[0].as_ref().unwrap().path();
    assert_eq!(std::fs::read(&path).unwrap(), first);
    // A doctored entry is served as is, so the second run came from the cache.
    let mut doctored: Value = serde_json::from_slice(&first).unwrap();
    doctored["vertex_orbits"] = Value::from(-1);
    let text = format!("{}\n", serde_json::to_string_pretty(&doctored).unwrap());
    std::fs::write(&path, &text).unwrap();
    assert_eq!(run(), text.into_bytes());
}

#[test]
fn config_file_matches_flags() {
    let dir = scratch_dir("config");
    let p1 = dir.join("p1.json");
    std::fs::write(&p1, r#"{"q": 3, "curve": "p1", "punctures": ["t", "t+1", "inf"]}"#).unwrap();
    let from_file = json(&["pic", "--config", p1.to_str().unwrap()]);
    let from_flags = json(&["pic", "--q", "3", "--punctures", "t,t+1,inf"]);
    assert_eq!(from_file, from_flags);
    assert_eq!(from_file["unit_rank"], 2);

    let ell = dir.join("ell.json");
    std::fs::write(&ell, r#"{"q": 5, "curve": "elliptic", "weierstrass": [1, 1], "punctures": ["O"]}"#).unwrap();
    let v = json(&["pic", "--config", ell.to_str().unwrap()]);
    assert_eq!(v["unit_rank"], 0);

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"q": 3, "punctures": ["t"], "colour": "red"}"#).unwrap();
    assert_eq!(btq(&["pic", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(btq(&["pic", "--config", p1.to_str().unwrap(), "--q", "3"]).status.code(), Some(2));
}

#[test]
fn output_file() {
    let dir = scratch_dir("output");
    let path = dir.join("pic.json");
    let out = btq(&["-o", path.to_str().unwrap(), "pic", "--q", "2", "--punctures", "inf"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["unit_rank"], 0);
}
