use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dialecto::corpus::write_annotated;
use dialecto::synth::template_documents;

fn dialecto(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dialecto"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn templates(dir: &Path, how_many: usize) {
    let docs = template_documents("lhe");
    fs::write(
        dir.join("templates.conllu"),
        write_annotated(&docs[..how_many]),
    )
    .unwrap();
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn extract_templates() {
    let dir = tempfile::tempdir().unwrap();
    templates(dir.path(), 24);
    let out = dialecto(
        dir.path(),
        &["extract", "--corpus", "*.conllu", "--out", "out"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = json(&dir.path().join("out/extract_summary.json"));
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["observations"], 96);
    assert_eq!(summary["speakers"], 24);
    for row in summary["distribution"].as_array().unwrap() {
        assert_eq!(row["total"], 24, "{row}");
    }
    let csv = fs::read_to_string(dir.path().join("out/observations.csv")).unwrap();
    assert_eq!(csv.lines().count(), 97);
    assert!(String::from_utf8_lossy(&out.stdout).contains("pro2P (N = 24)"));
}

#[test]
fn unmatched_glob_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dialecto(dir.path(), &["extract", "--corpus", "missing/*.conllu"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("matches no files"));
}

#[test]
fn bad_flag_value_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dialecto(dir.path(), &["cluster", "--measure", "median"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn too_few_speakers_to_cluster() {
    let dir = tempfile::tempdir().unwrap();
    templates(dir.path(), 2);
    let out = dialecto(
        dir.path(),
        &["cluster", "--corpus", "templates.conllu", "--out", "out"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("out/cluster.json").exists());
}

#[test]
fn explicit_k_max_beyond_speakers_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    templates(dir.path(), 24);
    let out = dialecto(
        dir.path(),
        &["cluster", "--corpus", "templates.conllu", "--k-max", "40"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_corpus_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("empty.conllu"), "").unwrap();
    let out = dialecto(
        dir.path(),
        &["extract", "--corpus", "empty.conllu", "--out", "out"],
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("out/observations.csv")).unwrap();
    assert_eq!(
        csv,
        "order,file,speaker_id,variable,variant,preceding_context,match,following_context\n"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("no documents"));
}

#[test]
fn synth_then_cluster_recovers_groups() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "seed = 3\n[synth]\nspeakers_per_profile = 8\n";
    fs::write(dir.path().join("run.toml"), cfg).unwrap();
    let synth = dialecto(dir.path(), &["synth", "--config", "run.toml", "--out", "s"]);
    assert!(
        synth.status.success(),
        "{}",
        String::from_utf8_lossy(&synth.stderr)
    );
    let out = dialecto(
        dir.path(),
        &[
            "cluster",
            "--corpus",
            "s/corpus.conllu",
            "--metadata",
            "s/metadata.csv",
            "--out",
            "c",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json(&dir.path().join("c/cluster.json"));
    assert_eq!(report["optimal_k"], 3);
    for g in report["composition"]["groups"].as_array().unwrap() {
        assert_eq!(g["max_share"], 1.0, "{g}");
    }
    // cluster numbers are 1-based everywhere outside the library
    let assignments = fs::read_to_string(dir.path().join("c/assignments.csv")).unwrap();
    assert!(assignments.lines().skip(1).all(|l| !l.ends_with(",0")));
}

#[test]
fn report_records_failed_stages() {
    let dir = tempfile::tempdir().unwrap();
    templates(dir.path(), 3);
    let out = dialecto(
        dir.path(),
        &["report", "--corpus", "templates.conllu", "--out", "r"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json(&dir.path().join("r/report.json"));
    assert_eq!(report["extract"]["observations"], 12);
    // three speakers are too few for PCA
    assert!(report["pca"]["error"].is_string(), "{report}");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.toml"),
        "[synth]\nspeakers_per_profile = 5\n",
    )
    .unwrap();
    for run in ["a", "b"] {
        let s = dialecto(
            dir.path(),
            &[
                "synth",
                "--config",
                "run.toml",
                "--seed",
                "11",
                "--out",
                &format!("{run}/s"),
            ],
        );
        assert!(s.status.success());
        let r = dialecto(
            dir.path(),
            &[
                "report",
                "--corpus",
                "a/s/corpus.conllu",
                "--permutations",
                "99",
                "--restarts",
                "3",
                "--out",
                &format!("{run}/r"),
            ],
        );
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    for file in [
        "s/corpus.conllu",
        "s/metadata.csv",
        "s/labels.csv",
        "s/synth.json",
        "r/report.json",
    ] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        let b = fs::read(dir.path().join("b").join(file)).unwrap();
        assert!(a == b, "{file} differs between runs");
    }
}
