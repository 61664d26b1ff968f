//! The `run`, `stats` and `gridsearch` pipelines.

use std::fs;
use std::path::{Path, PathBuf};

use nli_core::corpus::{
    assemble_documents, corpus_stats, load_corpus, CorpusStats, Document, L1Label,
};
use nli_core::eval::{cross_validate, extract_all, random_baseline, CvConfig, EvalReport};
use nli_core::features::{FeatureConfig, FunctionWordLexicon};
use nli_core::svm::{grid_search_c, train_multiclass, GridSearchResult, SvmParams, DEFAULT_C_GRID};
use nli_core::vectorize::{fit_tfidf, transform};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::heatmap::heatmap_svg;

/// Accuracy of one feature-family run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyRow {
    pub feature: String,
    pub description: String,
    pub accuracy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentEcho {
    pub manifest: String,
    pub genre: Option<String>,
    pub labels: Vec<L1Label>,
    pub target_tokens: usize,
    pub seed: u64,
}

/// Contents of `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentEcho,
    pub corpus: CorpusStats,
    pub table: Vec<FamilyRow>,
    pub evaluation: EvalReport,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: ExperimentReport,
    pub out_dir: PathBuf,
}

pub const ARTIFACTS: [&str; 7] = [
    "report.json",
    "confusion.csv",
    "confusion.svg",
    "table2.csv",
    "stats.csv",
    "model.json",
    "vocabulary.json",
];

fn lexicon(config: &ExperimentConfig) -> Result<FunctionWordLexicon, CliError> {
    Ok(match &config.lexicon {
        Some(path) => FunctionWordLexicon::from_path(path)?,
        None => FunctionWordLexicon::default_turkish(),
    })
}

/// Load the manifest and assemble documents.
pub fn load_documents(config: &ExperimentConfig) -> Result<Vec<Document>, CliError> {
    let texts = load_corpus(&config.manifest, config.genre.as_deref(), &config.labels)?;
    for label in &config.labels {
        if !texts.iter().any(|t| &t.l1 == label) {
            return Err(CliError::Data(format!(
                "{}: L1 `{label}` has no texts{}",
                config.manifest.display(),
                config
                    .genre
                    .as_ref()
                    .map(|g| format!(" of genre `{g}`"))
                    .unwrap_or_default()
            )));
        }
    }
    Ok(assemble_documents(
        &texts,
        config.target_tokens,
        config.seed(),
    )?)
}

fn cv_config(config: &ExperimentConfig, features: FeatureConfig) -> CvConfig {
    CvConfig {
        features,
        c: config.c,
        k: config.k,
        seed: config.seed(),
        tol: config.tol,
        max_iter: config.max_iter,
    }
}

pub fn table_csv(rows: &[FamilyRow]) -> String {
    let mut out = String::from("feature,description,accuracy\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.feature, row.description, row.accuracy
        ));
    }
    out
}

/// Run every enabled family alone and then the configured combination, all
/// on the same fold plan, and write the artifacts once everything succeeded.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let lexicon = lexicon(config)?;
    let documents = load_documents(config)?;
    let stats = corpus_stats(&documents);
    let classes: Vec<L1Label> = stats.rows.keys().cloned().collect();

    let mut table = vec![FamilyRow {
        feature: "random_baseline".into(),
        description: "Random Baseline".into(),
        accuracy: random_baseline(&classes),
    }];
    for family in config.features.families() {
        let report = cross_validate(
            &documents,
            &cv_config(config, FeatureConfig::only(family)),
            &lexicon,
        )?;
        log::info!("{}: accuracy {:.4}", family.id(), report.accuracy);
        table.push(FamilyRow {
            feature: family.id(),
            description: family.description(),
            accuracy: report.accuracy,
        });
    }
    let evaluation = cross_validate(
        &documents,
        &cv_config(config, config.features.clone()),
        &lexicon,
    )?;
    table.push(FamilyRow {
        feature: "full".into(),
        description: "Full Combination".into(),
        accuracy: evaluation.accuracy,
    });

    // Final model on every document, exported for inspection and reuse.
    let counts = extract_all(&documents, &config.features, &lexicon)?;
    let vocab = fit_tfidf(&counts)?;
    let x: Vec<_> = counts.iter().map(|c| transform(c, &vocab)).collect();
    let y: Vec<L1Label> = documents.iter().map(|d| d.l1.clone()).collect();
    let params = SvmParams {
        c: config.c,
        tol: config.tol,
        max_iter: config.max_iter,
        seed: config.seed(),
    };
    let model = train_multiclass(&x, &y, vocab.len(), &params)?;
    let model_file = model.export(vocab.checksum());

    let report = ExperimentReport {
        experiment: ExperimentEcho {
            manifest: config
                .manifest
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default(),
            genre: config.genre.clone(),
            labels: config.labels.clone(),
            target_tokens: config.target_tokens,
            seed: config.seed(),
        },
        corpus: stats,
        table,
        evaluation,
    };

    let files: Vec<(&str, String)> = vec![
        ("report.json", pretty(&report)),
        ("confusion.csv", report.evaluation.confusion.to_csv()),
        ("confusion.svg", heatmap_svg(&report.evaluation.confusion)),
        ("table2.csv", table_csv(&report.table)),
        ("stats.csv", report.corpus.to_csv()),
        ("model.json", pretty(&model_file)),
        ("vocabulary.json", pretty(&vocab)),
    ];
    write_all(&config.out_dir, &files)?;

    Ok(RunOutcome {
        report,
        out_dir: config.out_dir.clone(),
    })
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<(), CliError> {
    let io_err = |p: &Path, e: std::io::Error| CliError::Data(format!("{}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

pub fn run_stats(config: &ExperimentConfig) -> Result<CorpusStats, CliError> {
    Ok(corpus_stats(&load_documents(config)?))
}

pub fn run_gridsearch(
    config: &ExperimentConfig,
    grid: Option<Vec<f64>>,
) -> Result<GridSearchResult, CliError> {
    let grid = grid
        .or_else(|| config.grid.clone())
        .unwrap_or_else(|| DEFAULT_C_GRID.to_vec());
    let lexicon = lexicon(config)?;
    let documents = load_documents(config)?;
    Ok(grid_search_c(
        &documents,
        &cv_config(config, config.features.clone()),
        &grid,
        &lexicon,
    )?)
}
