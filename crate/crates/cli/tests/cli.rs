use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nli_cli::{ExperimentConfig, Overrides};
use nli_core::corpus::assemble_documents;
use nli_core::eval::{cross_validate, CvConfig};
use nli_core::features::{FeatureConfig, FeatureFamily, FunctionWordLexicon};

fn nli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nli"))
        .args(args)
        .env_remove("NLI_SEED")
        .output()
        .expect("binary runs")
}

/// Synthetic corpus plus config in a temp dir; `edit` adjusts the config.
fn fixture(edit: impl FnOnce(&mut serde_json::Value)) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let out = nli(&[
        "synth",
        "--out",
        dir.path().to_str().unwrap(),
        "--texts-per-class",
        "6",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = dir.path().join("exp.json");
    let mut config: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    config["k"] = 5.into();
    edit(&mut config);
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    (dir, path)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn run_writes_every_artifact() {
    let (dir, config) = fixture(|_| {});
    let out = nli(&["run", "--config", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    for name in nli_cli::experiment::ARTIFACTS {
        assert!(
            dir.path().join("out").join(name).is_file(),
            "{name} missing"
        );
    }
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/report.json")).unwrap())
            .unwrap();
    let accuracy = report["evaluation"]["accuracy"].as_f64().unwrap();
    let baseline = report["evaluation"]["random_baseline"].as_f64().unwrap();
    assert!(accuracy >= baseline, "{accuracy} < {baseline}");
}

#[test]
fn table_rows_match_single_family_runs() {
    let (dir, config_path) = fixture(|_| {});
    let out = nli(&["run", "--config", config_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));

    let config = ExperimentConfig::load(&config_path, &Overrides::default()).unwrap();
    let docs = nli_cli::experiment::load_documents(&config).unwrap();
    let lexicon = FunctionWordLexicon::default_turkish();
    let rows = csv_rows(&dir.path().join("out/table2.csv"));
    assert_eq!(rows[0], ["feature", "description", "accuracy"]);
    let families = [
        ("pos1", FeatureFamily::Pos(1)),
        ("pos2", FeatureFamily::Pos(2)),
        ("pos3", FeatureFamily::Pos(3)),
        ("fw", FeatureFamily::FunctionWords),
        ("cfg", FeatureFamily::Cfg),
    ];
    for (id, family) in families {
        let row = rows.iter().find(|r| r[0] == id).unwrap();
        let cv = CvConfig {
            features: FeatureConfig::only(family),
            k: 5,
            seed: config.seed(),
            ..CvConfig::default()
        };
        let expected = cross_validate(&docs, &cv, &lexicon).unwrap().accuracy;
        assert_eq!(row[2].parse::<f64>().unwrap(), expected, "{id}");
    }
    assert!(rows.iter().any(|r| r[0] == "full"));
    assert!(rows
        .iter()
        .any(|r| r[0] == "random_baseline" && r[2] == "0.2"));
}

#[test]
fn svg_cells_match_confusion_csv() {
    let (dir, config) = fixture(|_| {});
    assert!(nli(&["run", "--config", config.to_str().unwrap()])
        .status
        .success());
    let rows = csv_rows(&dir.path().join("out/confusion.csv"));
    let classes: Vec<&str> = rows[0][1..].iter().map(String::as_str).collect();
    assert_eq!(classes, ["AFG", "AL", "ARA", "AZ", "IR"]);

    let svg = fs::read_to_string(dir.path().join("out/confusion.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).expect("well-formed SVG");
    let cells: Vec<_> = doc
        .descendants()
        .filter(|n| n.attribute("class") == Some("cell"))
        .collect();
    assert_eq!(cells.len(), 25);
    for cell in cells {
        let i: usize = cell.attribute("data-row").unwrap().parse().unwrap();
        let j: usize = cell.attribute("data-col").unwrap().parse().unwrap();
        assert_eq!(cell.attribute("data-count").unwrap(), rows[i + 1][j + 1]);
    }
}

#[test]
fn k_of_one_is_a_config_error() {
    let (_dir, config) = fixture(|c| c["k"] = 1.into());
    let out = nli(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("`k`"), "{}", stderr(&out));
}

#[test]
fn missing_manifest_is_a_config_error() {
    let (_dir, config) = fixture(|c| c["manifest"] = "nowhere.json".into());
    let out = nli(&["stats", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nowhere.json"));
}

#[test]
fn malformed_json_names_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.json");
    fs::write(
        &path,
        "{\n  \"manifest\": \"m.json\",\n  \"k\": \"ten\"\n}\n",
    )
    .unwrap();
    let out = nli(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exp.json:3:"), "{}", stderr(&out));
}

#[test]
fn corrupt_annotation_is_a_data_error() {
    let (dir, config) = fixture(|_| {});
    let victim = dir.path().join("corpus/AL_002.conllu");
    let text = fs::read_to_string(&victim)
        .unwrap()
        .replacen("\tNOUN\t", "\tNN\t", 1);
    fs::write(&victim, text).unwrap();
    let out = nli(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(
        msg.contains("AL_002.conllu") && msg.contains("line ") && msg.contains("`NN`"),
        "{msg}"
    );
    assert!(!dir.path().join("out").exists(), "no partial artifacts");
}

#[test]
fn absent_label_is_a_data_error() {
    let (_dir, config) = fixture(|c| c["labels"] = serde_json::json!(["AZ", "IR", "XX"]));
    let out = nli(&["stats", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`XX`"));
}

#[test]
fn seed_precedence() {
    let (_dir, config) = fixture(|c| {
        c.as_object_mut().unwrap().remove("seed");
    });
    let stats = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_nli"));
        cmd.args(["stats", "--config", config.to_str().unwrap()])
            .args(extra);
        match env {
            Some(v) => cmd.env("NLI_SEED", v),
            None => cmd.env_remove("NLI_SEED"),
        };
        let out = cmd.output().unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        String::from_utf8(out.stdout).unwrap()
    };
    let default = stats(&[], None);
    let flag = stats(&["--seed", "5"], None);
    assert_eq!(flag, stats(&[], Some("5")));
    assert_eq!(flag, stats(&["--seed", "5"], Some("999")));
    assert_eq!(default, stats(&["--seed", "0"], None));

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nli"));
    let out = cmd
        .args(["stats", "--config", config.to_str().unwrap()])
        .env("NLI_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn stats_matches_library() {
    let (_dir, config_path) = fixture(|_| {});
    let out = nli(&["stats", "--config", config_path.to_str().unwrap()]);
    assert!(out.status.success());
    let config = ExperimentConfig::load(&config_path, &Overrides::default()).unwrap();
    let texts =
        nli_core::corpus::load_corpus(&config.manifest, Some("essay"), &config.labels).unwrap();
    let docs = assemble_documents(&texts, config.target_tokens, config.seed()).unwrap();
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        nli_core::corpus::corpus_stats(&docs).to_csv()
    );
}

#[test]
fn gridsearch_reports_best_c() {
    let (_dir, config) = fixture(|_| {});
    let out = nli(&[
        "gridsearch",
        "--config",
        config.to_str().unwrap(),
        "--grid",
        "1e-2..1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().filter(|l| l.starts_with("1e")).count(), 3);
    assert!(stdout.contains("best C = "), "{stdout}");

    let out = nli(&[
        "gridsearch",
        "--config",
        config.to_str().unwrap(),
        "--grid",
        "oops",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn lexicon_flag_is_used() {
    let (dir, config) = fixture(|_| {});
    let lexicon = dir.path().join("fw.txt");
    fs::write(&lexicon, "# tiny\nve\nbir\n").unwrap();
    let out = nli(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--lexicon",
        lexicon.to_str().unwrap(),
        "--out",
        dir.path().join("alt").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let vocab = fs::read_to_string(dir.path().join("alt/vocabulary.json")).unwrap();
    assert!(vocab.contains("\"fw:ve\"") && !vocab.contains("\"fw:için\""));
}
