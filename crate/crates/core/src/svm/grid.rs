use serde::{Deserialize, Serialize};

use crate::corpus::{Document, L1Label};
use crate::error::{Error, Result};
use crate::eval::{cross_validate_counts, extract_all, CvConfig};
use crate::features::FunctionWordLexicon;

/// Decades from 1e-6 to 1e-1, plus 1.
pub const DEFAULT_C_GRID: [f64; 7] = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_c: f64,
    pub best_accuracy: f64,
    /// `(C, pooled CV accuracy)` in grid order.
    pub table: Vec<(f64, f64)>,
}

/// Run the full cross-validation once per C and keep the most accurate,
/// preferring the larger C on ties. All runs share one fold plan.
pub fn grid_search_c(
    documents: &[Document],
    base: &CvConfig,
    grid: &[f64],
    lexicon: &FunctionWordLexicon,
) -> Result<GridSearchResult> {
    if grid.is_empty() {
        return Err(Error::Config("C grid is empty".into()));
    }
    if let Some(c) = grid.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(Error::Config(format!("C must be positive, got {c}")));
    }
    let counts = extract_all(documents, &base.features, lexicon)?;
    let labels: Vec<L1Label> = documents.iter().map(|d| d.l1.clone()).collect();

    let mut table = Vec::with_capacity(grid.len());
    for &c in grid {
        let config = CvConfig { c, ..base.clone() };
        let report = cross_validate_counts(&counts, &labels, &config)?;
        log::info!("C = {c:e}: accuracy {:.4}", report.accuracy);
        table.push((c, report.accuracy));
    }

    let (best_c, best_accuracy) = table
        .iter()
        .copied()
        .reduce(|best, cur| {
            if cur.1 > best.1 || (cur.1 == best.1 && cur.0 > best.0) {
                cur
            } else {
                best
            }
        })
        .expect("grid is non-empty");
    Ok(GridSearchResult {
        best_c,
        best_accuracy,
        table,
    })
}
