//! Browser bindings for the demo page in `www/`. Every function takes plain
//! text and returns a JSON document; failures come back as `{"error": ...}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use statikit::groebner::{Poly, PolyMatrix};
use statikit::json::default_vars;
use statikit::polyhedral::{LatticePoint, RationalCone};
use statikit::staticity::{log_tor_dim_at_most, ModulePresentation};
use statikit::statify::{compute_statification, StatifyOptions};
use statikit::tropical_pic::{firing_script, is_chip_firing_equivalent, jacobian_group, reduced_divisor, Graph};

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Rows separated by `;` or newlines, entries by `,`.
fn parse_matrix(text: &str, nvars: usize) -> Result<ModulePresentation, String> {
    let vars = default_vars(nvars);
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let entries = text
        .split([';', '\n'])
        .map(str::trim)
        .filter(|r| !r.is_empty())
        .map(|row| row.split(',').map(|e| Poly::parse(e.trim(), &names).map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if entries.is_empty() {
        return Err("enter at least one row".into());
    }
    let matrix = PolyMatrix::new(nvars, entries).map_err(|e| e.to_string())?;
    ModulePresentation::on_affine_space(matrix).map_err(|e| e.to_string())
}

fn point(p: &LatticePoint) -> Value {
    match p.to_i64() {
        Some(v) => json!(v),
        None => json!(p.to_string()),
    }
}

fn cone(c: &RationalCone) -> Value {
    Value::Array(c.rays().iter().map(point).collect())
}

fn statify_plane_value(matrix: &str) -> Result<Value, String> {
    let m = parse_matrix(matrix, 2)?;
    let cert = compute_statification(&m, StatifyOptions::default()).map_err(|e| e.to_string())?;
    let cells: Vec<Value> = cert
        .stratification
        .cells
        .iter()
        .map(|cell| {
            json!({
                "pieces": cell.pieces.iter().map(cone).collect::<Vec<_>>(),
                "initial_module": cell.tag.elements().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let charts: Vec<Value> = cert.charts.iter().map(|c| json!({"rays": cone(&c.cone), "static": c.is_static})).collect();
    Ok(json!({
        "kernel": cert.kernel.generators().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "cells": cells,
        "fan": cert.fan.maximal_cones().iter().map(cone).collect::<Vec<_>>(),
        "charts": charts,
        "identity": cert.identity,
        "valid": cert.is_valid(),
    }))
}

/// Statifies a presentation over the quadrant in the variables `x, y`.
#[wasm_bindgen]
pub fn statify_plane(matrix: &str) -> String {
    respond(statify_plane_value(matrix))
}

fn check_static_value(matrix: &str, nvars: usize) -> Result<Value, String> {
    if !(1..=4).contains(&nvars) {
        return Err("use between 1 and 4 variables".into());
    }
    let m = parse_matrix(matrix, nvars)?;
    let flat = log_tor_dim_at_most(&m, 0).map_err(|e| e.to_string())?;
    let stat = log_tor_dim_at_most(&m, 1).map_err(|e| e.to_string())?;
    let vars = default_vars(nvars);
    let faces: Vec<Value> = flat
        .reports
        .iter()
        .zip(&stat.reports)
        .map(|(t1, t2)| {
            let names: Vec<&str> = t1.face.iter().map(|&i| vars[i].as_str()).collect();
            json!({"face": names, "tor1_vanishes": t1.vanishes, "tor2_vanishes": t2.vanishes})
        })
        .collect();
    Ok(json!({"static": stat.holds, "log_flat": flat.holds, "faces": faces}))
}

/// Staticity and log flatness on affine space with variables `x, y, z, ...`.
#[wasm_bindgen]
pub fn check_static(matrix: &str, nvars: usize) -> String {
    respond(check_static_value(matrix, nvars))
}

fn integers(text: &str) -> Result<Vec<i64>, String> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("'{s}' is not an integer")))
        .collect()
}

fn chip_firing_value(vertices: usize, edges: &str, d1: &str, d2: &str) -> Result<Value, String> {
    let ends = integers(&edges.replace('-', " "))?;
    if ends.len() % 2 != 0 || ends.iter().any(|&v| v < 0) {
        return Err("edges are pairs like 0-1".into());
    }
    let edges: Vec<(usize, usize)> = ends.chunks(2).map(|p| (p[0] as usize, p[1] as usize)).collect();
    let g = Graph::new(vertices, edges).map_err(|e| e.to_string())?;
    let (d1, d2) = (integers(d1)?, integers(d2)?);
    let err = |e: statikit::Error| e.to_string();
    let jacobian: Vec<String> = jacobian_group(&g).iter().map(|d| d.to_string()).collect();
    Ok(json!({
        "jacobian": jacobian,
        "reduced": [reduced_divisor(&g, &d1, 0).map_err(err)?, reduced_divisor(&g, &d2, 0).map_err(err)?],
        "equivalent": is_chip_firing_equivalent(&g, &d1, &d2).map_err(err)?,
        "script": firing_script(&g, &d1, &d2).map_err(err)?,
    }))
}

/// Edges as `0-1 1-2 ...`, divisors as whitespace separated integers.
#[wasm_bindgen]
pub fn chip_firing(vertices: usize, edges: &str, d1: &str, d2: &str) -> String {
    respond(chip_firing_value(vertices, edges, d1, d2))
}
