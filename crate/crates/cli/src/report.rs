//! Deterministic report rendering and content fingerprints.
//!
//! Every number in a report is printed with a fixed format, and all
//! collections are iterated in a fixed order, so a report is a pure
//! function of the configuration. Wall-clock timings are rendered by
//! [`wall_time_note`] for stdout and never enter report text.

use std::fmt::Write as _;

use dec2d_core::local_ops::Method;
use dec2d_core::system::SparseSym;

use crate::config::Paraboloid;
use crate::driver::{BuiltCase, LevelRun, MethodRun};

/// FNV-1a over a byte stream; used to fingerprint assembled systems.
pub fn fnv1a64(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Fingerprint of a CSR matrix: structure first, then exact value bits.
pub fn matrix_fingerprint(m: &SparseSym) -> u64 {
    let rows = m.row_ptr().iter().flat_map(|&v| (v as u64).to_le_bytes());
    let cols = m.col_idx().iter().flat_map(|&v| (v as u64).to_le_bytes());
    let vals = m.values().iter().flat_map(|v| v.to_bits().to_le_bytes());
    fnv1a64(rows.chain(cols).chain(vals))
}

/// Fingerprint of a vector's exact value bits.
pub fn vector_fingerprint(v: &[f64]) -> u64 {
    fnv1a64(v.iter().flat_map(|x| x.to_bits().to_le_bytes()))
}

/// Fixed scientific format used for every floating value in reports.
pub fn sci(v: f64) -> String {
    format!("{v:.6e}")
}

fn method_block(out: &mut String, run: &MethodRun) {
    let _ = writeln!(out, "method {}", run.method);
    let _ = writeln!(out, "  converged: {}", run.stats.converged);
    let _ = writeln!(out, "  iterations: {}", run.stats.iterations);
    let _ = writeln!(out, "  final residual: {}", sci(run.stats.final_residual));
    let _ = writeln!(out, "  max temperature: {} at node {}", sci(run.max_temp), run.max_temp_node);
    let _ = writeln!(out, "  max element flux magnitude: {}", sci(run.max_element_flux));
    let _ = writeln!(
        out,
        "  max nodal flux magnitude: {} at node {}",
        sci(run.max_nodal_flux),
        run.max_nodal_flux_node
    );
    let _ = writeln!(out, "  stiffness fingerprint: {:016x}", run.stiffness_fp);
    let _ = writeln!(out, "  load fingerprint: {:016x}", run.load_fp);
    if let Some((linf, l2)) = run.errors {
        let _ = writeln!(out, "  error vs exact: linf {}  l2 {}", sci(linf), sci(l2));
    }
}

/// Largest entrywise difference of two equally sized vectors, relative to
/// their largest magnitude.
fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = a
        .iter()
        .chain(b)
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    a.iter().zip(b).fold(0.0f64, |acc, (&x, &y)| acc.max((x - y).abs())) / scale
}

fn cross_method_block(out: &mut String, a: &MethodRun, b: &MethodRun) {
    let _ = writeln!(out, "cross-method ({} vs {})", a.method, b.method);
    let same_pattern = a.matrix.row_ptr() == b.matrix.row_ptr()
        && a.matrix.col_idx() == b.matrix.col_idx();
    if same_pattern {
        let _ = writeln!(out, "  stiffness pattern: identical");
        let _ = writeln!(
            out,
            "  stiffness values: max relative difference {}",
            sci(rel_diff(a.matrix.values(), b.matrix.values()))
        );
    } else {
        let _ = writeln!(out, "  stiffness pattern: DIFFERENT");
    }
    let _ = writeln!(
        out,
        "  load vector: max relative difference {}",
        sci(rel_diff(&a.load, &b.load))
    );
}

fn case_header(out: &mut String, title: &str, case: &BuiltCase) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "mesh: {}", case.source);
    let _ = writeln!(out, "nodes: {}", case.mesh.num_nodes());
    let _ = writeln!(out, "elements: {}", case.mesh.num_elements());
    let _ = writeln!(out, "boundary nodes: {}", case.mesh.boundary_nodes().len());
    let _ = writeln!(out, "materials: {}", case.materials.len());
    let _ = writeln!(out, "dirichlet nodes: {}", case.dirichlet.len());
}

/// Full report of a solve: case summary, one block per method, and a
/// cross-method comparison when two methods ran.
pub fn solve_report(case: &BuiltCase, runs: &[MethodRun]) -> String {
    let mut out = String::new();
    case_header(&mut out, "dec2d solve report", case);
    for run in runs {
        out.push('\n');
        method_block(&mut out, run);
    }
    if let [a, b] = runs {
        out.push('\n');
        cross_method_block(&mut out, a, b);
    }
    out
}

/// Convergence table: one block per method, one row per refinement level,
/// with error columns and the observed L2 order when an exact solution is
/// configured.
pub fn convergence_report(
    source: &str,
    levels: &[LevelRun],
    methods: &[Method],
    exact: Option<&Paraboloid>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dec2d convergence report");
    let plural = if levels.len() == 1 { "level" } else { "levels" };
    let _ = writeln!(out, "mesh: {source} ({} {plural} of midpoint refinement)", levels.len());
    match exact {
        Some(p) => {
            let _ = writeln!(out, "exact: {p}");
        }
        None => {
            let _ = writeln!(out, "exact: none");
        }
    }
    for (mi, &method) in methods.iter().enumerate() {
        out.push('\n');
        let _ = writeln!(out, "method {method}");
        if exact.is_some() {
            let _ = writeln!(
                out,
                "  {:>5} {:>8} {:>9} {:>14} {:>14} {:>7} {:>14} {:>14} {:>7}",
                "level",
                "nodes",
                "elements",
                "max_temp",
                "max_flux",
                "iters",
                "linf_error",
                "l2_error",
                "order"
            );
        } else {
            let _ = writeln!(
                out,
                "  {:>5} {:>8} {:>9} {:>14} {:>14} {:>7}",
                "level", "nodes", "elements", "max_temp", "max_flux", "iters"
            );
        }
        let mut prev_l2: Option<f64> = None;
        for lv in levels {
            let run = &lv.runs[mi];
            let mut row = format!(
                "  {:>5} {:>8} {:>9} {:>14} {:>14} {:>7}",
                lv.level,
                lv.nodes,
                lv.elements,
                sci(run.max_temp),
                sci(run.max_nodal_flux),
                run.stats.iterations
            );
            if let Some((linf, l2)) = run.errors {
                let order = match prev_l2 {
                    Some(p) if l2 > 0.0 && p > 0.0 => format!("{:.2}", (p / l2).log2()),
                    _ => "-".to_string(),
                };
                let _ = write!(row, " {:>14} {:>14} {:>7}", sci(linf), sci(l2), order);
                prev_l2 = Some(l2);
            }
            let _ = writeln!(out, "{row}");
        }
    }
    out
}

/// Stdout-only timing summary; deliberately not part of report artifacts so
/// identical configurations produce byte-identical reports.
pub fn wall_time_note(parts: &[(Method, u128)]) -> String {
    let body = parts
        .iter()
        .map(|(m, ms)| format!("{m} {ms} ms"))
        .collect::<Vec<_>>()
        .join(", ");
    format!("wall time: {body} (stdout only, kept out of report artifacts)")
}
