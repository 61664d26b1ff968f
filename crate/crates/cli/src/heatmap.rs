//! SVG confusion-matrix heatmap.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nli_core::eval::ConfusionMatrix;

use crate::error::CliError;

const CELL: usize = 64;
const LEFT: usize = 96;
const TOP: usize = 96;
const LIGHT: (f64, f64, f64) = (247.0, 251.0, 255.0);
const DARK: (f64, f64, f64) = (8.0, 48.0, 107.0);

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Cell intensity in `[0, 1]`: the count divided by its row total.
pub fn intensity(confusion: &ConfusionMatrix, row: usize, col: usize) -> f64 {
    let total = confusion.row_sum(row);
    if total == 0 {
        0.0
    } else {
        confusion.cells[row][col] as f64 / total as f64
    }
}

fn fill(t: f64) -> String {
    let mix = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(LIGHT.0, DARK.0),
        mix(LIGHT.1, DARK.1),
        mix(LIGHT.2, DARK.2)
    )
}

pub fn heatmap_svg(confusion: &ConfusionMatrix) -> String {
    let n = confusion.classes.len();
    let width = LEFT + n * CELL + 16;
    let height = TOP + n * CELL + 16;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">Predicted</text>"#,
        LEFT + n * CELL / 2
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{y}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {y})">True</text>"#,
        y = TOP + n * CELL / 2
    );

    for (i, class) in confusion.classes.iter().enumerate() {
        let label = escape(class.as_str());
        let _ = writeln!(
            svg,
            r#"<text class="col-label" x="{}" y="{}" text-anchor="middle" font-size="12">{label}</text>"#,
            LEFT + i * CELL + CELL / 2,
            TOP - 12
        );
        let _ = writeln!(
            svg,
            r#"<text class="row-label" x="{}" y="{}" text-anchor="end" font-size="12">{label}</text>"#,
            LEFT - 10,
            TOP + i * CELL + CELL / 2 + 4
        );
    }

    for (i, row) in confusion.cells.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            let t = intensity(confusion, i, j);
            let (x, y) = (LEFT + j * CELL, TOP + i * CELL);
            let _ = writeln!(
                svg,
                r##"<rect class="cell" data-row="{i}" data-col="{j}" data-count="{count}" data-intensity="{t:.6}" x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}" stroke="#d0d0d0"/>"##,
                fill(t)
            );
            let ink = if t > 0.5 { "white" } else { "black" };
            let _ = writeln!(
                svg,
                r#"<text class="count" x="{}" y="{}" text-anchor="middle" font-size="14" fill="{ink}">{count}</text>"#,
                x + CELL / 2,
                y + CELL / 2 + 5
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn render_heatmap(confusion: &ConfusionMatrix, path: &Path) -> Result<(), CliError> {
    if confusion.classes.is_empty() {
        return Err(CliError::Data(
            "cannot render an empty confusion matrix".into(),
        ));
    }
    fs::write(path, heatmap_svg(confusion))
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
