use std::path::Path;
use std::process::{Command, Output};

use oddcyc::format::{parse_dot, parse_edgelist};
use oddcyc_core::{base_atlas, recognize_sp};

fn oddcyc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddcyc"))
        .args(args)
        .env_remove("ODDCYC_JOBS")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("one JSON document on stdout")
}

#[test]
fn forced_sets_of_small_graphs() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text, set, method) in [
        ("k2", "n=2 s=0 t=1\n0 1\n", "s1", "dp"),
        ("p3", "n=3 s=0 t=1\n0 2\n1 2\n", "sb1", "dp"),
        ("k3", "3; 0 1; 1 2; 0 2; terminals 0 1", "{}", "dp"),
        ("k4", "n=4 s=0 t=1\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n", "{}", "oracle"),
    ] {
        let f = write(dir.path(), name, text);
        let out = oddcyc(&["forced-set", "--k", "2", &f]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v = json(&out);
        assert_eq!(v["name"], set, "{name}");
        assert_eq!(v["method"], method, "{name}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(method));
    }
}

#[test]
fn terminals_flag_overrides_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p3", "n=3\n0 2\n1 2\n");
    let out = oddcyc(&["forced-set", "--k", "2", &f]);
    assert_eq!(out.status.code(), Some(2));
    let out = oddcyc(&["forced-set", "--k", "2", "--terminals", "0", "2", &f]);
    assert_eq!(json(&out)["name"], "s1");
}

#[test]
fn criticality_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3", "Bw\nt 0 1\n");
    let c5 = write(dir.path(), "c5", "n=5\n0 1\n1 2\n2 3\n3 4\n0 4\n");
    let k4 = write(dir.path(), "k4", "n=4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");

    let out = oddcyc(&["check-critical", "--k", "2", &k3]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["critical"], true);
    assert_eq!(v["record"]["witnesses"].as_array().unwrap().len(), 3);

    let out = oddcyc(&["check-critical", "--k", "2", &c5]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "colourable");
    assert_eq!(v["colouring"].as_array().unwrap().len(), 5);

    let out = oddcyc(&["check-critical", "--k", "2", &k4]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["series_parallel"], false);
    assert!(v["note"].as_str().unwrap().contains("not series-parallel"));
    assert_eq!(v["verdict"], "not-minimal");

    // C5 is C7-critical.
    let out = oddcyc(&["check-critical", "--k", "3", &c5]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_and_guard_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad", "n=3 s=0 t=1\n0 1\n0 x\n");
    let out = oddcyc(&["forced-set", "--k", "2", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3, column 3"));
    assert_eq!(oddcyc(&["forced-set", "--k", "0", &bad]).status.code(), Some(2));
    assert_eq!(oddcyc(&["verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(oddcyc(&["enumerate-families", "--k", "2", "--tag", "s1,s1"]).status.code(), Some(2));
    assert_eq!(oddcyc(&["verify", "--k", "2", "--max-vertices", "40"]).status.code(), Some(3));
    assert_eq!(
        oddcyc(&["enumerate-critical", "--k", "9", "--max-vertices", "5"]).status.code(),
        Some(3)
    );
    // Past the colouring-search size limit.
    let edges: String = (0..44).map(|i| format!("{i} {}\n", i + 1)).collect();
    let big = write(dir.path(), "big", &format!("n=45 s=0 t=44\n{edges}"));
    let cyc = write(dir.path(), "cyc", &format!("n=45\n{edges}0 44\n"));
    assert_eq!(oddcyc(&["check-critical", "--k", "2", &cyc]).status.code(), Some(3));
    assert_eq!(
        oddcyc(&["check-critical", "--k", "2", "--override-guards", &cyc]).status.code(),
        Some(1)
    );
    // The set comes from the fold, but witnesses need the colouring search.
    assert_eq!(oddcyc(&["forced-set", "--k", "2", &big]).status.code(), Some(3));
    let out = oddcyc(&["forced-set", "--k", "2", "--override-guards", &big]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["method"], "dp");
}

#[test]
fn family_enumeration_and_mismatch() {
    let out = oddcyc(&["enumerate-families", "--k", "2", "--tag", "all", "--max-vertices", "10", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = out
        .stdout
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 6);
    let mut sizes: Vec<u64> = lines.iter().map(|v| v["vertices"].as_u64().unwrap()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![2, 3, 4, 5, 9, 10]);
    for v in &lines {
        let n = v["edge_count"].as_u64().unwrap() as usize;
        let witnesses = v["new_elements"].as_array().unwrap();
        assert_eq!(witnesses.len(), n);
        assert!(witnesses.iter().all(|w| w.is_u64()));
    }

    let out = oddcyc(&[
        "enumerate-families", "--k", "2", "--tag", "all", "--max-vertices", "10", "--method", "both", "--inject-mismatch",
    ]);
    assert_eq!(out.status.code(), Some(1));

    let out = oddcyc(&["enumerate-families", "--k", "3", "--tag", "refined", "--max-vertices", "7", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn critical_enumeration_is_deterministic() {
    let run = |jobs: &str| {
        Command::new(env!("CARGO_BIN_EXE_oddcyc"))
            .args(["--jobs", jobs, "enumerate-critical", "--k", "2", "--max-vertices", "10", "--method", "both"])
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("3"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let out = oddcyc(&["enumerate-critical", "--k", "2", "--max-vertices", "3", "--format", "graph6"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "Bw\n");
}

#[test]
fn critical_catalog_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.jsonl");
    let out = oddcyc(&[
        "enumerate-critical", "--k", "3", "--max-vertices", "6", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(path).unwrap();
    let records: Vec<oddcyc::report::CriticalRecord> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let sizes: Vec<usize> = records.iter().map(|r| r.vertices).collect();
    assert_eq!(sizes.len(), 2);
    assert!(sizes.contains(&3) && sizes.contains(&5));
}

#[test]
fn verify_passes_at_default_bounds() {
    let out = oddcyc(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() > 10);
    let out = oddcyc(&["verify", "--k", "3", "--max-vertices", "9"]);
    assert_eq!(out.status.code(), Some(0));
}

fn blocks(text: &str) -> Vec<&str> {
    text.split("\n\n").filter(|b| !b.trim().is_empty()).collect()
}

#[test]
fn atlas_matches_golden_file() {
    let out = oddcyc(&["atlas", "--format", "edgelist"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, include_str!("golden/atlas.edgelist"));
    let atlas = base_atlas().unwrap();
    let parsed = blocks(&text);
    assert_eq!(parsed.len(), 6);
    for (h, block) in atlas.iter().zip(parsed) {
        let lg = parse_edgelist(block).unwrap().to_labeled().unwrap();
        assert_eq!(recognize_sp(&lg).unwrap().canonical_key(), h.expr.canonical_key());
    }
}

#[test]
fn atlas_dot_round_trips() {
    let out = oddcyc(&["atlas", "--format", "dot"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let graphs: Vec<String> = text.split_inclusive("}\n").map(str::to_string).collect();
    assert_eq!(graphs.len(), 6);
    for (h, dot) in base_atlas().unwrap().iter().zip(&graphs) {
        assert!(dot.contains("doublecircle"));
        let lg = parse_dot(dot).unwrap().to_labeled().unwrap();
        assert_eq!(recognize_sp(&lg).unwrap().canonical_key(), h.expr.canonical_key());
    }
    let records = oddcyc(&["atlas"]);
    assert_eq!(records.stdout.split(|&b| b == b'\n').filter(|l| !l.is_empty()).count(), 6);
    assert_eq!(oddcyc(&["atlas", "--k", "3"]).status.code(), Some(2));
}
