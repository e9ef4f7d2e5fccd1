//! Deterministic file emitters: RFC-4180 CSV with `\n` endings, a fixed
//! 600x600 SVG scatter, and UTF-8 JSON. Identical config + seeds produce
//! byte-identical files.

use ratlab_core::Error;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub fn write_text(path: &Path, content: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(content.as_bytes())
}

/// CSV of indexed pairs with header `k,w,z`.
pub fn pairs_csv(pairs: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(pairs.len() * 24 + 8);
    out.push_str("k,w,z\n");
    for (i, (w, z)) in pairs.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i + 1, w, z));
    }
    out
}

/// Fixed-size scatter plot of points in [0, alpha]^2: 600x600 view box,
/// 1-px points, no interactivity.
pub fn pairs_svg(pairs: &[(f64, f64)], alpha: f64) -> String {
    let mut out = String::with_capacity(pairs.len() * 40 + 512);
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" \
         viewBox=\"0 0 600 600\">\n",
    );
    out.push_str("<rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"white\"/>\n");
    out.push_str(
        "<rect x=\"0.5\" y=\"0.5\" width=\"599\" height=\"599\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>\n",
    );
    for &(w, z) in pairs {
        let px = (w / alpha * 600.0).clamp(0.0, 599.0);
        let py = (600.0 - z / alpha * 600.0).clamp(0.0, 599.0);
        out.push_str(&format!(
            "<rect x=\"{px:.2}\" y=\"{py:.2}\" width=\"1\" height=\"1\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Output path for one alpha of a multi-alpha run: `base.csv` stays as-is
/// for a single alpha, otherwise `base_a<alpha>.csv`.
pub fn suffixed_path(base: &Path, alpha_label: &str, multi: bool) -> PathBuf {
    if !multi {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let ext = base.extension().and_then(|s| s.to_str());
    let name = match ext {
        Some(e) => format!("{stem}_a{alpha_label}.{e}"),
        None => format!("{stem}_a{alpha_label}"),
    };
    base.with_file_name(name)
}

/// Machine-readable error object emitted on a nonzero exit.
pub fn error_json(err: &Error) -> String {
    let v = serde_json::json!({
        "error": err.kind(),
        "step": err.step(),
        "message": err.to_string(),
    });
    serde_json::to_string_pretty(&v).expect("error json") + "\n"
}

pub fn json_line(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json") + "\n"
}
