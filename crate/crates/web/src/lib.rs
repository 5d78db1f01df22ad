//! Browser bindings for the halving constructions.
//!
//! Each operation has a plain Rust function returning a JSON string, so
//! it can be tested natively, and a thin `#[wasm_bindgen]` wrapper.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use tradeforge::combinatorics::all_blocks;
use tradeforge::halving::{
    ak_halving, hill_climb_partition, partition_halving, structured_partition_default,
    v10_halving, IndexBase, SearchConfig, TradeDecomposition,
};
use tradeforge::{default_labelling, inclusion, io, sum_decomposition, SignedCollection};

/// Largest order the demo will build; C(30, 3) = 4060 cells.
pub const MAX_DEMO_V: u32 = 30;

#[derive(Debug, Serialize)]
pub struct Cell {
    pub block: Vec<u32>,
    pub coef: i64,
    /// Index into `kinds` of the constituent holding this block.
    pub trade: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct Construction {
    pub v: u32,
    pub method: String,
    pub cells: Vec<Cell>,
    pub kinds: Vec<&'static str>,
    pub volume: u64,
    pub is_halving: bool,
    pub iterations: Option<u64>,
}

fn layout(
    method: &str,
    h: &SignedCollection,
    d: Option<&TradeDecomposition>,
    iterations: Option<u64>,
) -> Construction {
    let mut owner = std::collections::BTreeMap::new();
    let mut kinds = Vec::new();
    if let Some(d) = d {
        for (i, c) in d.constituents.iter().enumerate() {
            kinds.push(c.kind.as_str());
            for b in c.trade.support() {
                owner.insert(b.clone(), i);
            }
        }
    }
    let cells = all_blocks(h.v(), 3)
        .map(|b| Cell {
            coef: h.coefficient(&b),
            trade: owner.get(&b).copied(),
            block: b.elements().to_vec(),
        })
        .collect();
    Construction {
        v: h.v(),
        method: method.to_string(),
        cells,
        kinds,
        volume: inclusion::volume(h).blocks,
        is_halving: inclusion::is_halving(h),
        iterations,
    }
}

fn to_json<T: Serialize>(x: &T) -> Result<String, String> {
    serde_json::to_string(x).map_err(|e| e.to_string())
}

/// Build a halving of `C(X, 3)` with the named method.
pub fn construct_json(method: &str, v: u32, seed: u32) -> Result<String, String> {
    if v > MAX_DEMO_V {
        return Err(format!("the demo is limited to v <= {MAX_DEMO_V}"));
    }
    let err = |e: tradeforge::Error| e.to_string();
    let out = match method {
        "ak" => {
            let o = ak_halving(v, 1_000_000).map_err(err)?;
            layout(method, &o.halving, None, Some(o.iterations))
        }
        "v10" => {
            let (h, d) = v10_halving(&default_labelling(v).map_err(err)?, IndexBase::Zero).map_err(err)?;
            layout(method, &h, Some(&d), None)
        }
        "partition" => {
            let (h, d) = partition_halving(&default_labelling(v).map_err(err)?).map_err(err)?;
            layout(method, &h, Some(&d), None)
        }
        "structured" => {
            let (h, d) = structured_partition_default(&default_labelling(v).map_err(err)?).map_err(err)?;
            layout(method, &h, Some(&d), None)
        }
        "hillclimb" => {
            if v != 10 {
                return Err("hill climbing is defined for v = 10 only".into());
            }
            return hill_climb_json(seed, SearchConfig::default().max_iterations as u32);
        }
        other => return Err(format!("unknown method {other:?}")),
    };
    to_json(&out)
}

/// Randomized search for 15 disjoint minimal trades on ten points.
pub fn hill_climb_json(seed: u32, max_iterations: u32) -> Result<String, String> {
    let cfg = SearchConfig {
        seed: u64::from(seed),
        max_iterations: u64::from(max_iterations.max(1)),
        ..SearchConfig::default()
    };
    let o = hill_climb_partition(&cfg).map_err(|e| e.to_string())?;
    let h = sum_decomposition(&o.decomposition).map_err(|e| e.to_string())?;
    to_json(&layout("hillclimb", &h, Some(&o.decomposition), Some(o.total_iterations)))
}

/// Parse a collection file (text or JSON) and report on it as a 2-trade.
pub fn verify_json(text: &str, one_based: bool) -> Result<String, String> {
    let file = io::parse_auto(text, one_based).map_err(|e| e.to_string())?;
    let report = inclusion::report(2, 0, &file.collection, 1).map_err(|e| e.to_string())?;
    let mut value = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    if let Some(d) = &file.constituents {
        value["constituents"] = serde_json::json!({
            "count": d.len(),
            "pairwise_disjoint": d.pairwise_disjoint(),
        });
    }
    to_json(&value)
}

#[wasm_bindgen]
pub fn construct(method: &str, v: u32, seed: u32) -> Result<String, JsError> {
    construct_json(method, v, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn hill_climb(seed: u32, max_iterations: u32) -> Result<String, JsError> {
    hill_climb_json(seed, max_iterations).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify(text: &str, one_based: bool) -> Result<String, JsError> {
    verify_json(text, one_based).map_err(|e| JsError::new(&e))
}
