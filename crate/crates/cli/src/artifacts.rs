//! Deterministic artifact serialization: CSV densities (15 significant
//! digits) and JSON reports. Identical inputs produce byte-identical
//! files.

use std::path::Path;

use vnpointer_core::measurement::DensityDecomposition;
use vnpointer_core::pointer::PointerGrid;

use crate::error::Result;

/// Scientific notation with 15 significant digits.
pub fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

/// CSV for one density decomposition: position, total, and the three
/// closed-form components.
pub fn density_csv(parts: &DensityDecomposition) -> String {
    let mut out = String::from("q,total,term_unshifted,term_shifted,cross\n");
    for k in 0..parts.grid.len() {
        out.push_str(&sig15(parts.grid.q(k)));
        for column in [&parts.total, &parts.term_unshifted, &parts.term_shifted, &parts.cross] {
            out.push(',');
            out.push_str(&sig15(column[k]));
        }
        out.push('\n');
    }
    out
}

/// Side-by-side CSV of a PS and a PPS density on the same grid.
pub fn compare_csv(grid: &PointerGrid, ps_total: &[f64], pps_total: &[f64]) -> String {
    let mut out = String::from("q,ps_total,pps_total\n");
    for k in 0..grid.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            sig15(grid.q(k)),
            sig15(ps_total[k]),
            sig15(pps_total[k])
        ));
    }
    out
}

/// One row of a sweep summary; `None` renders as an empty cell.
pub struct SweepRow {
    pub value: f64,
    pub ps_cross_l1: f64,
    pub pps_cross_l1: Option<f64>,
    pub pps_momentum_shift: Option<f64>,
    pub postselection_probability: Option<f64>,
    pub weak_value: Option<[f64; 2]>,
    pub normalization: Option<f64>,
}

pub fn sweep_csv(param: &str, rows: &[SweepRow]) -> String {
    let mut out = format!(
        "{param},ps_cross_l1,pps_cross_l1,pps_momentum_shift,postselection_probability,\
         weak_value_re,weak_value_im,normalization\n"
    );
    let cell = |v: Option<f64>| v.map(sig15).unwrap_or_default();
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            sig15(row.value),
            sig15(row.ps_cross_l1),
            cell(row.pps_cross_l1),
            cell(row.pps_momentum_shift),
            cell(row.postselection_probability),
            cell(row.weak_value.map(|w| w[0])),
            cell(row.weak_value.map(|w| w[1])),
            cell(row.normalization),
        ));
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn json_string<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization cannot fail");
    text.push('\n');
    text
}

pub fn write_file(dir: &Path, name: &str, content: &str) -> Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, content)?;
    Ok(path)
}
