use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gsr::format::serialize_structure;
use gsr_core::instances;

fn gsr(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsr"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    for sub in ["", "structures", "reports"] {
        let d = dir.join(sub);
        let mut names: Vec<_> = fs::read_dir(&d)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.is_file())
            .collect();
        names.sort();
        for p in names {
            out.push((
                p.strip_prefix(dir).unwrap().display().to_string(),
                fs::read(&p).unwrap(),
            ));
        }
    }
    out
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "e2.gsr.json",
        &serialize_structure(&instances::boolean_and(3)),
    );
    write(
        dir.path(),
        "example.gsr.json",
        &serialize_structure(&instances::three_element_illustration()),
    );
    let ok = gsr(&["validate", "e2.gsr.json"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), "valid");

    let bad = gsr(&["validate", "example.gsr.json"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(
        text.contains("A2 Distributive slot 1 gammas [0, 0] args [1, 1, 1, 1]"),
        "{text}"
    );

    let json = gsr(
        &["validate", "example.gsr.json", "--format", "json"],
        dir.path(),
    );
    assert_eq!(json.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["axiom"], "A2");
    assert_eq!(v["violations"][0]["slot"], 1);
}

#[test]
fn max_violations_caps_output() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "x.gsr.json",
        &serialize_structure(&instances::three_element_illustration()),
    );
    let o = gsr(
        &[
            "--max-violations",
            "1",
            "validate",
            "x.gsr.json",
            "--format",
            "json",
        ],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let per_axiom: Vec<&str> = v["violations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["axiom"].as_str().unwrap())
        .collect();
    let mut dedup = per_axiom.clone();
    dedup.dedup();
    assert_eq!(per_axiom, dedup);
}

#[test]
fn parse_errors_report_position_and_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "broken.gsr.json",
        "{\n  \"format_version\": 1,\n  \"m\": [\n}",
    );
    let o = gsr(&["validate", "broken.gsr.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3, column"), "{}", stderr(&o));

    let missing = gsr(&["analyze", "absent.gsr.json"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn usage_and_capacity_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = gsr(
        &["enumerate", "-m", "2", "-n", "3", "-r", "1", "-o", "out"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let o = gsr(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = gsr(
        &[
            "enumerate",
            "-m",
            "4",
            "-n",
            "3",
            "-r",
            "1",
            "--all-additions",
            "-o",
            "out",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("capacity"), "{}", stderr(&o));
    let o = gsr(
        &[
            "enumerate",
            "-m",
            "2",
            "-n",
            "3",
            "-r",
            "1",
            "--all-additions",
            "--shard-depth",
            "1",
            "--shard-index",
            "5",
            "-o",
            "out",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let o = gsr(&["--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn enumerate_writes_two_canonical_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "or.json", "[[0,1],[1,1]]\n");
    let o = gsr(
        &[
            "enumerate",
            "-m",
            "2",
            "-n",
            "3",
            "-r",
            "1",
            "--add-file",
            "or.json",
            "--canonical",
            "-o",
            "out",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["valid_count"], 2);
    assert_eq!(summary["canonical_class_count"], 2);
    let out = dir.path().join("out");
    let files: Vec<_> = fs::read_dir(out.join("structures")).unwrap().collect();
    assert_eq!(files.len(), 2);
    let reports: Vec<_> = fs::read_dir(out.join("reports")).unwrap().collect();
    assert_eq!(reports.len(), 2);
    let index: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("index.json")).unwrap()).unwrap();
    assert_eq!(index["entries"].as_object().unwrap().len(), 2);

    // Every file name is the digest of the file's bytes.
    for f in fs::read_dir(out.join("structures")).unwrap() {
        let p = f.unwrap().path();
        let s = gsr::parse_structure(&fs::read_to_string(&p).unwrap()).unwrap();
        let stem = p
            .file_name()
            .unwrap()
            .to_str()
            .unwrap()
            .trim_end_matches(".gsr.json")
            .to_string();
        assert_eq!(stem, gsr_core::classify::content_digest(&s).hex());
        assert_eq!(fs::read_to_string(&p).unwrap(), serialize_structure(&s));
    }

    // Re-running is byte-identical.
    let before = tree(&out);
    let again = gsr(
        &[
            "enumerate",
            "-m",
            "2",
            "-n",
            "3",
            "-r",
            "1",
            "--add-file",
            "or.json",
            "--canonical",
            "-o",
            "out",
        ],
        dir.path(),
    );
    assert_eq!(again.stdout, o.stdout);
    assert_eq!(tree(&out), before);
}

#[test]
fn separate_shard_processes_fill_the_same_store() {
    let dir = tempfile::tempdir().unwrap();
    let base = [
        "enumerate",
        "-m",
        "3",
        "-n",
        "3",
        "-r",
        "1",
        "--all-additions",
        "--no-reports",
    ];
    let mut args: Vec<&str> = base.to_vec();
    args.extend(["-o", "seq"]);
    assert_eq!(gsr(&args, dir.path()).status.code(), Some(0));
    for i in ["0", "1", "2"] {
        let mut args: Vec<&str> = base.to_vec();
        args.extend(["--shard-depth", "1", "--shard-index", i, "-o", "par"]);
        let o = gsr(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["shard"]["index"], i.parse::<u64>().unwrap());
    }
    assert_eq!(tree(&dir.path().join("seq")), tree(&dir.path().join("par")));
}

#[test]
fn analyze_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "e4.gsr.json",
        &serialize_structure(&instances::guarded_first_projection()),
    );
    let a = gsr(&["analyze", "e4.gsr.json"], dir.path());
    let b = gsr(&["analyze", "e4.gsr.json"], dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    for key in [
        "structure_digest",
        "checks",
        "ideals",
        "radicals",
        "spectra",
        "modules",
        "decomposition",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for c in v["checks"].as_array().unwrap() {
        if c["status"] == "fail" {
            assert!(c["witness"].is_string());
        }
    }
    let text = gsr(&["analyze", "e4.gsr.json", "--report", "text"], dir.path());
    assert!(stdout(&text).starts_with("structure "));

    write(
        dir.path(),
        "x.gsr.json",
        &serialize_structure(&instances::three_element_illustration()),
    );
    assert_eq!(
        gsr(&["analyze", "x.gsr.json"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn assoc_mode_flag_overrides_file() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "e2.gsr.json",
        &serialize_structure(&instances::boolean_and(4)),
    );
    let o = gsr(
        &["--assoc-mode", "dornte", "analyze", "e2.gsr.json"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["shape"]["assoc_mode"], "dornte");
    let o = gsr(
        &["--assoc-mode", "bogus", "validate", "e2.gsr.json"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_groups_relabelings() {
    let dir = tempfile::tempdir().unwrap();
    let e4 = instances::guarded_first_projection();
    let swapped = e4.relabel(&[0, 2, 1], None);
    write(dir.path(), "a.gsr.json", &serialize_structure(&e4));
    write(dir.path(), "b.gsr.json", &serialize_structure(&swapped));
    write(
        dir.path(),
        "c.gsr.json",
        &serialize_structure(&instances::boolean_and(3)),
    );
    let o = gsr(&["classify", "."], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class_count"], 2);
    let sizes: Vec<usize> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["members"].as_array().unwrap().len())
        .collect();
    assert!(sizes.contains(&2) && sizes.contains(&1));
}

#[test]
fn modules_and_decompose_commands() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "e2.gsr.json",
        &serialize_structure(&instances::boolean_and(3)),
    );
    write(
        dir.path(),
        "and4.gsr.json",
        &serialize_structure(&instances::boolean_and(4)),
    );
    let o = gsr(
        &[
            "modules",
            "e2.gsr.json",
            "--slot",
            "2",
            "--max-carrier",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["module_classes"], 4);
    assert_eq!(v["primitive_ideals"][0]["ideal"], serde_json::json!([0]));

    let o = gsr(
        &[
            "modules",
            "e2.gsr.json",
            "--slot",
            "2",
            "--max-carrier",
            "7",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));

    let o = gsr(
        &[
            "decompose",
            "and4.gsr.json",
            "--pin",
            "1",
            "--pinned-out",
            "pinned.gsr.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        fs::read_to_string(dir.path().join("pinned.gsr.json")).unwrap(),
        serialize_structure(&instances::boolean_and(3))
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for a in v["pinning"]["audits"].as_array().unwrap() {
        assert_ne!(a["status"], "fail", "{a}");
    }
    let o = gsr(&["decompose", "and4.gsr.json", "--pin", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}
