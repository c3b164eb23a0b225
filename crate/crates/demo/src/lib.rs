//! Browser demo: construct a design, inspect its pairwise aliasing and plot
//! the lower bounds. Every export returns a JSON string.

use serde_json::{json, Value};
use ssd_core::bounds::{certify, lb_lemma2, lb_theorem1};
use ssd_core::constructions::{format_histogram, nonzero_histogram, Recipe, Theorem};
use ssd_core::criteria::{aggregate_stats, projected_a2};
use ssd_core::rational::{display, to_f64};
use ssd_core::Design;
use wasm_bindgen::prelude::*;

/// Largest design the page will build.
pub const MAX_DEMO_COLUMNS: usize = 400;

fn parse_levels(levels: &str) -> Result<Option<Vec<u16>>, String> {
    let levels = levels.trim();
    if levels.is_empty() {
        return Ok(None);
    }
    levels
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u16>()
                .map_err(|_| format!("bad level {t:?}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

/// Builds a design from the same recipe vocabulary as the command line;
/// `k = 0` means unset.
pub fn build(theorem: &str, s: u32, n: usize, k: usize, levels: &str) -> Result<Design, String> {
    let theorem: Theorem = theorem
        .parse()
        .map_err(|e: ssd_core::Error| e.to_string())?;
    let mut recipe = Recipe::new(theorem, s, n);
    if k > 0 {
        recipe = recipe.with_k(k);
    }
    if let Some(g) = parse_levels(levels)? {
        recipe = recipe.with_levels(g);
    }
    let d = recipe.build().map_err(|e| e.to_string())?;
    if d.num_columns() > MAX_DEMO_COLUMNS {
        return Err(format!(
            "{} columns; the demo stops at {MAX_DEMO_COLUMNS}",
            d.num_columns()
        ));
    }
    Ok(d)
}

pub fn summary(theorem: &str, s: u32, n: usize, k: usize, levels: &str) -> Result<Value, String> {
    let d = build(theorem, s, n, k, levels)?;
    let stats = aggregate_stats(&d).map_err(|e| e.to_string())?;
    let bounds = certify(&d).map_err(|e| e.to_string())?;
    Ok(json!({
        "N": d.runs(),
        "m": d.num_columns(),
        "levels": d.levels(),
        "A2": display(&stats.a2),
        "histogram": format_histogram(&nonzero_histogram(&d)),
        "max_projected_A2": display(&stats.max_projected_a2),
        "ave_chi2": display(&stats.ave_chi2),
        "bounds": bounds.to_json(),
        "text": d.to_text(),
    }))
}

pub fn heatmap(theorem: &str, s: u32, n: usize, k: usize, levels: &str) -> Result<Value, String> {
    let d = build(theorem, s, n, k, levels)?;
    let m = d.num_columns();
    let mut cells = vec![vec![0.0; m]; m];
    #[allow(clippy::needless_range_loop)]
    for i in 0..m {
        for j in (i + 1)..m {
            let v = to_f64(&projected_a2(&d, i, j));
            cells[i][j] = v;
            cells[j][i] = v;
        }
    }
    let labels: Vec<String> = d
        .columns()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.label()
                .map_or_else(|| format!("c{}", i + 1), str::to_string)
        })
        .collect();
    Ok(json!({ "labels": labels, "cells": cells }))
}

/// Both equal-level bounds for `m = 2..=m_max`.
pub fn bound_curve(runs: usize, s: u32, m_max: usize) -> Result<Value, String> {
    if !(2..=5000).contains(&m_max) {
        return Err(format!("m_max = {m_max} is outside 2..=5000"));
    }
    let mut ms = Vec::new();
    let mut t1 = Vec::new();
    let mut l2 = Vec::new();
    for m in 2..=m_max {
        ms.push(m);
        t1.push(to_f64(&lb_theorem1(runs, m, s).map_err(|e| e.to_string())?).max(0.0));
        l2.push(to_f64(&lb_lemma2(runs, m, s).map_err(|e| e.to_string())?).max(0.0));
    }
    Ok(json!({ "m": ms, "theorem1": t1, "lemma2": l2 }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = designSummary)]
pub fn design_summary(
    theorem: &str,
    s: u32,
    n: usize,
    k: usize,
    levels: &str,
) -> Result<String, JsValue> {
    to_js(summary(theorem, s, n, k, levels))
}

#[wasm_bindgen(js_name = pairHeatmap)]
pub fn pair_heatmap(
    theorem: &str,
    s: u32,
    n: usize,
    k: usize,
    levels: &str,
) -> Result<String, JsValue> {
    to_js(heatmap(theorem, s, n, k, levels))
}

#[wasm_bindgen(js_name = boundCurve)]
pub fn bound_curve_js(runs: usize, s: u32, m_max: usize) -> Result<String, JsValue> {
    to_js(bound_curve(runs, s, m_max))
}
