use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn scg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scg-cli"))
        .args(args)
        .output()
        .expect("run scg-cli")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generated(name: &str) -> tempfile::TempDir {
    let out = tempfile::tempdir().unwrap();
    let o = scg(&[
        "generate",
        fixture(name).to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn generate_reports_counts() {
    let out = tempfile::tempdir().unwrap();
    let o = scg(&[
        "generate",
        fixture("project").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in [
        "files         3",
        "nodes         36",
        "edges         91",
        "failed files  0",
    ] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }
    let files = scg_core::io::list_graph_files(out.path()).unwrap();
    assert_eq!(files.len(), 3);
}

#[test]
fn generate_empty_directory_succeeds() {
    let src = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = scg(&[
        "generate",
        src.path().to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("files         0"));
}

#[test]
fn generate_missing_directory_is_bad_input() {
    let src = tempfile::tempdir().unwrap();
    let missing = src.path().join("nope");
    let o = scg(&["generate", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn generate_keeps_partial_output_on_parse_failure() {
    let src = tempfile::tempdir().unwrap();
    fs::write(src.path().join("Good.java"), "class Good { void f() {} }\n").unwrap();
    fs::write(src.path().join("Bad.java"), "class Bad { void f() {\n").unwrap();
    let out = tempfile::tempdir().unwrap();
    let o = scg(&[
        "generate",
        src.path().to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Bad.java"));
    assert_eq!(scg_core::io::list_graph_files(out.path()).unwrap().len(), 1);
}

#[test]
fn generate_clears_stale_output() {
    let out = generated("project");
    let o = scg(&[
        "generate",
        fixture("fig1").to_str().unwrap(),
        "--out",
        out.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(scg_core::io::list_graph_files(out.path()).unwrap().len(), 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let out = generated("project");
    let dir = out.path().to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["summary", dir, "--graph", "SCG,CCN,CG"],
        vec!["summary", dir, "--format", "json"],
        vec!["crucial", dir, "-k", "5"],
        vec!["crucial", dir, "--format", "json"],
        vec!["similar", dir],
        vec!["partition", dir, "--graph", "SCG,CCN", "--format", "json"],
    ];
    for args in runs {
        let a = scg(&args);
        let b = scg(&args);
        assert!(
            a.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn similar_finds_the_duplicated_method() {
    let out = generated("project");
    let o = scg(&["similar", out.path().to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let pairs = v["pairs"].as_array().expect("pairs array");
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0]["m1"], "shop/Cart#describe().");
    assert_eq!(pairs[0]["m2"], "shop/Report#line().");
    assert_eq!(pairs[0]["s"], 5);
}

#[test]
fn crucial_combined_lists_points() {
    let out = generated("fig1");
    let o = scg(&[
        "crucial",
        out.path().to_str().unwrap(),
        "--metric",
        "combined",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("SCG combined"), "{text}");
    assert!(!text.contains("SCG pagerank"), "{text}");
    assert!(text.contains("p/A#foo()."), "{text}");
}

#[test]
fn unknown_metric_is_bad_input() {
    let out = generated("fig1");
    let o = scg(&["crucial", out.path().to_str().unwrap(), "--metric", "fame"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn non_directory_data_is_bad_input() {
    let o = scg(&["summary", "/definitely/not/here"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_writes_each_view() {
    let out = generated("fig1");
    let dest = tempfile::tempdir().unwrap();
    let o = scg(&[
        "export",
        out.path().to_str().unwrap(),
        "--graph",
        "SCG,CG",
        "--to",
        "graphml",
        "--out",
        dest.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for kind in ["scg", "cg"] {
        let xml = fs::read_to_string(dest.path().join(format!("{kind}.graphml"))).unwrap();
        assert!(xml.contains("<graphml"));
    }
}

#[test]
fn report_can_be_written_to_a_file() {
    let out = generated("fig1");
    let dest = tempfile::tempdir().unwrap();
    let file = dest.path().join("summary.json");
    let o = scg(&[
        "summary",
        out.path().to_str().unwrap(),
        "--format",
        "json",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(file).unwrap()).unwrap();
    assert_eq!(v.as_array().map(Vec::len), Some(1));
}
