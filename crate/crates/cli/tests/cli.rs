use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

const L_SHAPE: &str = r#"{"outer": [[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orthoguard"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = tmp(name);
    fs::write(&p, text).unwrap();
    p
}

fn instance(name: &str, model: &str, guards: &str, watch: &str) -> PathBuf {
    write(name, &format!(r#"{{"polygon": {L_SHAPE}, "model": {model}, "guards": {guards}, "watch": {watch}}}"#))
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

fn cardinality(json: &str) -> u64 {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v["cardinality"].as_u64().unwrap()
}

#[test]
fn solve_examples() {
    let s = instance("s.json", r#"{"kind": "S"}"#, r#""all""#, r#""all""#);
    let (code, out, _) = run(bin().args(["solve", "--solver", "dp"]).arg(&s));
    assert_eq!(code, 0);
    assert_eq!(cardinality(&out), 1);

    let sliding = instance("sliding.json", r#"{"kind": "SLIDING"}"#, r#""segments""#, r#""all""#);
    let (code, out, _) = run(bin().arg("solve").arg(&sliding));
    assert_eq!(code, 0);
    assert_eq!(cardinality(&out), 1);

    let ne = instance("ne.json", r#"{"kind": "NE"}"#, r#""all""#, r#""all""#);
    let (code, _, err) = run(bin().arg("solve").arg(&ne));
    assert_eq!(code, 1);
    assert!(err.contains("requires explicit guard and watch point lists"), "{err}");
}

#[test]
fn infeasible_exit_code() {
    // nothing north-east of (1,2) reaches the origin
    let inst = instance("infeasible.json", r#"{"kind": "NE"}"#, "[[1, 2]]", "[[0, 0]]");
    for solver in ["dp", "oracle", "greedy"] {
        let (code, out, _) = run(bin().args(["solve", "--solver", solver]).arg(&inst));
        assert_eq!(code, 2, "{solver}");
        assert!(out.contains("\"infeasible\""), "{out}");
        assert!(out.contains("\"unreachable\""), "{out}");
    }
}

#[test]
fn solution_round_trip_and_verify() {
    let inst = instance("verify.json", r#"{"kind": "PERISCOPE", "k": 1}"#, r#""all""#, r#""all""#);
    let sol = tmp("verify.sol.json");
    let (code, _, _) = run(bin().arg("solve").arg(&inst).arg("--out").arg(&sol));
    assert_eq!(code, 0);
    let text = fs::read_to_string(&sol).unwrap();
    let parsed = orthoguard::instance::SolutionJson::from_json(&text).unwrap();
    assert_eq!(parsed.to_json(), text);
    let (code, out, _) = run(bin().arg("verify").arg(&inst).arg(&sol));
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("ok"));

    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["guards"] = serde_json::json!([]);
    let bad = write("verify.bad.json", &v.to_string());
    let (code, out, _) = run(bin().arg("verify").arg(&inst).arg(&bad));
    assert_eq!(code, 2);
    assert!(out.starts_with("uncovered"));
}

#[test]
fn decomposition_file_feeds_the_solver() {
    let inst = instance("td.json", r#"{"kind": "S"}"#, r#""all""#, "[[2, 0], [0, 2], [0.5, 1.5]]");
    let td = tmp("td.td");
    let (code, _, err) = run(bin().arg("decompose").arg(&inst).arg("--out").arg(&td));
    assert_eq!(code, 0);
    assert!(err.contains("width"));
    let (_, with_td, _) = run(bin().arg("solve").arg(&inst).arg("--td").arg(&td));
    let (_, without, _) = run(bin().arg("solve").arg(&inst));
    assert_eq!(cardinality(&with_td), cardinality(&without));

    let junk = write("junk.td", "s td 1 1 3\nb 1 1\n");
    let (code, _, err) = run(bin().arg("solve").arg(&inst).arg("--td").arg(&junk));
    assert_eq!(code, 1, "{err}");
}

#[test]
fn state_cap_falls_back_to_oracle() {
    let inst = instance("cap.json", r#"{"kind": "S"}"#, r#""all""#, r#""all""#);
    let (code, out, err) = run(bin().arg("solve").arg(&inst).env("ORTHOGUARD_STATE_CAP", "10"));
    assert_eq!(code, 0);
    assert!(err.contains("falling back"), "{err}");
    assert!(out.contains("\"solver\": \"oracle\""));
    assert_eq!(cardinality(&out), 1);
    let (code, _, err) = run(bin().arg("solve").arg(&inst).arg("--no-fallback").env("ORTHOGUARD_STATE_CAP", "10"));
    assert_eq!(code, 1);
    assert!(err.contains("--solver oracle"), "{err}");
}

#[test]
fn gen_is_deterministic_and_thin() {
    let a = run(bin().args(["gen", "--family", "polyomino", "--cells", "30", "--seed", "9"])).1;
    let b = run(bin().args(["gen", "--family", "polyomino", "--cells", "30", "--seed", "9"])).1;
    assert_eq!(a, b);
    let poly = orthoguard::instance::polygon_from_json(&a).unwrap();
    assert_eq!(orthoguard::instance::polygon_to_json(&poly), a);

    let stair = run(bin().args(["gen", "--family", "staircase", "--cells", "5"])).1;
    let px = tmp("stair.px.json");
    let p = write("stair.json", &stair);
    let (code, _, _) = run(bin().arg("pixelate").arg(&p).arg("--out").arg(&px));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&px).unwrap()).unwrap();
    let verts = v["vertices"].as_array().unwrap();
    assert!(verts.len() <= 4 * 5 + 4);
    assert!(verts.iter().all(|v| v["boundary"] == true));

    let (code, _, err) = run(bin().args(["gen", "--family", "polyomino", "--cells", "1", "--holes", "1"]));
    assert_eq!(code, 1, "{err}");
}

#[test]
fn render_layers() {
    let p = write("render.json", L_SHAPE);
    let (code, svg, _) = run(bin().arg("render").arg(&p).args(["--layers", "polygon,pixelation"]));
    assert_eq!(code, 0);
    assert_eq!(svg.matches(r#"class="pixel""#).count(), 3);

    let inst = instance("render-s.json", r#"{"kind": "S"}"#, r#""all""#, r#""all""#);
    let sol = tmp("render-s.sol.json");
    run(bin().arg("solve").arg(&inst).arg("--out").arg(&sol));
    let (_, svg, _) = run(bin().arg("render").arg(&inst).arg("--solution").arg(&sol).args(["--layers", "coverage,guards"]));
    assert_eq!(svg.matches(r#"class="covered""#).count(), 12);
    assert_eq!(svg.matches(r#"class="guard""#).count(), 1);
}

#[test]
fn oracle_queries() {
    let p = write("oracle.json", L_SHAPE);
    let ask = |args: &[&str]| run(bin().arg("oracle").arg(&p).args(args));
    assert_eq!(ask(&["--model", "S", "--guard", "1,1", "--point", "0,2"]).1.trim(), "true");
    assert_eq!(ask(&["--model", "NE", "--guard", "2,1", "--point", "1,2"]).1.trim(), "false");
    assert_eq!(ask(&["--model", "SLIDING", "--camera", "1,0,1,2", "--point", "1.75,0.25"]).1.trim(), "true");
    assert_eq!(ask(&["--model", "SLIDING", "--point", "1,1"]).0, 1);
}

#[test]
fn bench_csv() {
    let csv = tmp("bench.csv");
    let (code, _, err) = run(bin().args([
        "bench", "--families", "staircase", "--sizes", "3,6", "--models", "S,L1:4", "--solvers", "dp,oracle", "--out",
    ]).arg(&csv));
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], orthoguard::bench::CSV_HEADER);
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert!(!err.contains("disagree"));
}
