use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn digitop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digitop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = digitop(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    (v, out.status.code().unwrap())
}

#[test]
fn interval_is_not_rigid() {
    let (r, code) = report(&["check", "rigid", "--input", "interval02"]);
    assert_eq!(code, 0);
    assert_eq!(r["query"], "check rigid");
    assert_eq!(r["verdict"], "false");
    assert_eq!(r["witness"]["assignment"], serde_json::json!([0, 0, 1]));
    assert_eq!(r["tool"], "digitop");
    assert_eq!(r["budget"]["max_nodes"], 10_000_000);
    assert_eq!(r["budget"]["max_states"], 1_000_000);
}

#[test]
fn single_endpoint_does_not_freeze_unit_interval() {
    let (r, code) = report(&["freezing", "verify", "--input", "interval01", "--set", "[[0]]"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "false");
    assert_eq!(r["witness"]["assignment"], serde_json::json!([0, 0]));
    let (r, _) = report(&["cold", "verify", "--input", "interval01", "--set", "[[0]]", "--s", "1"]);
    assert_eq!(r["verdict"], "true");
}

#[test]
fn ring_is_irreducible() {
    let (r, code) = report(&["check", "reducible", "--input", "curve8"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "false");
    assert!(r.get("witness").is_none());
    let (r, _) = report(&["check", "reducible", "--input", "square4"]);
    assert_eq!(r["verdict"], "true");
    assert!(!r["details"]["missed_points"].as_array().unwrap().is_empty());
}

#[test]
fn exhausted_budget_exits_two() {
    let (r, code) = report(&["check", "rigid", "--input", "figure-eight", "--budget-nodes", "5"]);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "unknown");
    assert_eq!(r["stats"]["budget_exhausted"], true);
    assert_eq!(r["budget"]["max_nodes"], 5);
}

#[test]
fn usage_and_input_errors_exit_one() {
    assert_eq!(digitop(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(digitop(&["check", "rigid", "--input", "no-such-image"]).status.code(), Some(1));
    let bad_point = digitop(&["freezing", "verify", "--input", "interval01", "--set", "[[7]]"]);
    assert_eq!(bad_point.status.code(), Some(1));
    assert!(bad_point.stdout.is_empty());
    assert_eq!(
        digitop(&["freezing", "verify", "--input", "interval01", "--set", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(digitop(&["render", "--input", "interval02"]).status.code(), Some(1));
    assert_eq!(digitop(&["check", "rigid", "--input", "curve8", "--budget-nodes", "0"]).status.code(), Some(1));
    assert_eq!(digitop(&["--help"]).status.code(), Some(0));
}

#[test]
fn minimize_and_audit() {
    let (r, _) = report(&["freezing", "minimize", "--input", "interval05"]);
    assert_eq!(r["verdict"], "true");
    assert_eq!(r["details"]["minimal_set"], serde_json::json!([[0], [5]]));
    let (r, _) = report(&["freezing", "minimize", "--input", "interval05", "--set", "[[0],[1]]"]);
    assert_eq!(r["verdict"], "false");
    let (r, _) = report(&["freezing", "audit", "--input", "interval02"]);
    assert_eq!(r["details"]["minimal_cold_sets"], serde_json::json!([[[0], [2]]]));
    assert_eq!(r["details"]["minimal_freezing_sets"], serde_json::json!([[[0], [2]]]));
}

#[test]
fn constructed_documents_load_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("i.json");
    let p = path.to_str().unwrap();
    let (r, code) = report(&["construct", "interval", "0", "2", "--out", p]);
    assert_eq!(code, 0);
    assert_eq!(r["details"]["points"], 3);
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(
        text,
        "{\n  \"dimension\": 1,\n  \"adjacency\": {\"kind\":\"cu\",\"u\":1},\n  \"points\": [[0],[1],[2]]\n}\n"
    );
    let (r, _) = report(&["check", "rigid", "--input", p]);
    assert_eq!(r["verdict"], "false");

    let (r, _) = report(&["construct", "product", "--factor", p, "--factor", "interval01"]);
    assert_eq!(r["details"]["points"], 6);
    assert_eq!(r["details"]["document"]["adjacency"]["kind"], "np");

    let (r, _) = report(&["construct", "box", "--axis", "0:1", "--axis", "0:1", "--u", "2"]);
    assert_eq!((r["details"]["points"].as_u64(), r["details"]["edges"].as_u64()), (Some(4), Some(6)));
}

#[test]
fn np_document_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("np.json");
    let factor = r#"{"dimension":1,"adjacency":{"kind":"cu","u":1},"points":[[0],[1]]}"#;
    fs::write(
        &path,
        format!(
            r#"{{"dimension":2,"adjacency":{{"kind":"np","u":2,"factors":[{factor},{factor}]}},"points":[[0,0],[0,1],[1,0],[1,1]]}}"#
        ),
    )
    .unwrap();
    let (r, _) = report(&["info", "--input", path.to_str().unwrap()]);
    assert_eq!(r["details"]["points"], 4);
    assert_eq!(r["details"]["edges"], 6);
    assert_eq!(r["verdict"], Value::Null);
}

#[test]
fn wedge_of_document_files() {
    let dir = tempfile::tempdir().unwrap();
    let ring = |dx: i64, dy: i64| {
        let pts: Vec<String> = [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)]
            .iter()
            .map(|(a, b)| format!("[{},{}]", a + dx, b + dy))
            .collect();
        format!(
            r#"{{"dimension":2,"adjacency":{{"kind":"cu","u":1}},"points":[{}]}}"#,
            pts.join(",")
        )
    };
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let c = dir.path().join("c.json");
    fs::write(&a, ring(0, 0)).unwrap();
    fs::write(&b, ring(2, 2)).unwrap();
    fs::write(&c, ring(1, 0)).unwrap();
    let (r, code) = report(&["construct", "wedge", "--left", a.to_str().unwrap(), "--right", b.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["details"]["points"], 15);
    assert_eq!(r["details"]["wedge_point"], serde_json::json!([2, 2]));
    let overlap = digitop(&["construct", "wedge", "--left", a.to_str().unwrap(), "--right", c.to_str().unwrap()]);
    assert_eq!(overlap.status.code(), Some(1));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("ring.svg");
    let (r, code) = report(&["render", "--input", "curve8", "--out", svg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["details"]["grid"], "###\n#.#\n###\n");
    let drawing = fs::read_to_string(&svg).unwrap();
    assert_eq!(drawing.matches("<circle").count(), 8);
    assert_eq!(drawing.matches("<line").count(), 8);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["check", "rigid", "--input", "rigid10-c2"];
    let a = digitop(&args).stdout;
    let b = digitop(&args).stdout;
    assert_eq!(a, b);
    let (r, _) = report(&args);
    assert_eq!(r["verdict"], "true");
}

#[test]
fn text_format() {
    let out = digitop(&["--format", "text", "check", "rigid", "--input", "interval02"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digitop "));
    assert!(text.contains("verdict: false"));
    assert!(text.contains("witness: [0, 0, 1]"));
}

#[test]
fn theorem_suite_without_discovered_rigid_images() {
    let (r, code) = report(&["verify-theorems", "--extent", "3", "--samples", "5"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "true");
    let claims = r["details"]["claims"].as_array().unwrap();
    let freezing = claims.iter().find(|c| c["claim"] == "rigid-freezing-iff-cold").unwrap();
    let instances = freezing["instances"].as_array().unwrap();
    assert_eq!(instances.len(), 1);
    assert_eq!(instances[0]["instance"], "figure-eight-c1");
    for d in r["details"]["discoveries"].as_array().unwrap() {
        assert_eq!(d["smallest_rigid_size"], Value::Null);
    }
}
