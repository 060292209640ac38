//! Browser bindings for three views: a membership picture of a `d = 2`
//! window, the summand list of the decomposition, and the series table.
//!
//! Each binding is a thin wrapper over a plain function returning JSON, so
//! the logic also runs (and is tested) natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use wallcross::rational::{self, frac};
use wallcross::series::verify_identity;
use wallcross::sod::{enumerate_summands, BoundsMode, MuParam};
use wallcross::zonotope::{make_zonotope, ZonotopeKind};

/// Largest grid side accepted by [`window_grid_json`].
pub const MAX_SIDE: i64 = 121;

#[derive(Debug, Serialize)]
pub struct Grid {
    /// Column coordinates, left to right.
    pub xs: Vec<String>,
    /// Row coordinates, top to bottom.
    pub ys: Vec<String>,
    /// One string per row, `#` inside and `.` outside.
    pub cells: Vec<String>,
    pub inside: usize,
}

fn window_kind(kind: &str, a: u32, r: u32, w: i64) -> Result<ZonotopeKind, String> {
    Ok(match kind {
        "W" => ZonotopeKind::W { d: 2 },
        "WSlice" => ZonotopeKind::WSlice { d: 2, w },
        "V" => ZonotopeKind::V { d: 2, r },
        "Wa" => ZonotopeKind::Wa { d: 2, a },
        "Va" => ZonotopeKind::Va { d: 2, a, r },
        other => return Err(format!("unknown window `{other}`")),
    })
}

/// Membership of the points `(i/den, j/den)` with `|i|, |j| <= extent * den`.
pub fn window_grid(kind: &str, a: u32, r: u32, w: i64, extent: i64, den: i64) -> Result<Grid, String> {
    if den < 1 || extent < 0 || 2 * extent * den + 1 > MAX_SIDE {
        return Err(format!("grid side must be at most {MAX_SIDE} points"));
    }
    let z = make_zonotope(window_kind(kind, a, r, w)?).map_err(|e| e.to_string())?;
    let n = extent * den;
    let coord = |i: i64| frac(i, den);
    let mut cells = Vec::new();
    let mut inside = 0;
    for j in (-n..=n).rev() {
        let mut row = String::new();
        for i in -n..=n {
            let hit = z.contains(&[coord(i), coord(j)]).map_err(|e| e.to_string())?.is_feasible();
            inside += usize::from(hit);
            row.push(if hit { '#' } else { '.' });
        }
        cells.push(row);
    }
    let xs = (-n..=n).map(|i| rational::format(&coord(i))).collect();
    let ys = (-n..=n).rev().map(|j| rational::format(&coord(j))).collect();
    Ok(Grid { xs, ys, cells, inside })
}

pub fn window_grid_json(kind: &str, a: u32, r: u32, w: i64, extent: i64, den: i64) -> Result<String, String> {
    let g = window_grid(kind, a, r, w, extent, den)?;
    serde_json::to_string(&g).map_err(|e| e.to_string())
}

pub fn summands_json(d: u32, r: u32, a: u32, mu: &str, mode: &str) -> Result<String, String> {
    let mu: MuParam = mu.parse().map_err(|e: wallcross::Error| e.to_string())?;
    let mode: BoundsMode = mode.parse().map_err(|e: wallcross::Error| e.to_string())?;
    if d > 8 {
        return Err("d is capped at 8 in the demo".into());
    }
    let s = enumerate_summands(d, r, a, &mu, mode).map_err(|e| e.to_string())?;
    serde_json::to_string(&s).map_err(|e| e.to_string())
}

pub fn series_json(r: u32, order: usize) -> Result<String, String> {
    if order > 30 || r > 6 {
        return Err("the demo stops at D = 30 and r = 6".into());
    }
    let rep = verify_identity(r, order).map_err(|e| e.to_string())?;
    serde_json::to_string(&rep).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = windowGrid)]
pub fn window_grid_js(kind: &str, a: u32, r: u32, w: i32, extent: i32, den: i32) -> Result<String, JsValue> {
    js(window_grid_json(kind, a, r, w.into(), extent.into(), den.into()))
}

#[wasm_bindgen(js_name = summands)]
pub fn summands_js(d: u32, r: u32, a: u32, mu: &str, mode: &str) -> Result<String, JsValue> {
    js(summands_json(d, r, a, mu, mode))
}

#[wasm_bindgen(js_name = seriesTable)]
pub fn series_js(r: u32, order: u32) -> Result<String, JsValue> {
    js(series_json(r, order as usize))
}
