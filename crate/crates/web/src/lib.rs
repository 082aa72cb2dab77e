//! Browser bindings: each call takes source text and returns a JSON string,
//! `{"error": ..}` on bad input.

use checkers::api::{self, ApiError, ReduceStrategy, Relation};
use checkers::preorder::Bounds;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn render(r: Result<Value, ApiError>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({"error": e.to_string()}).to_string(),
    }
}

/// Head-reduce `src` with a trace; `full` selects full normalization.
#[wasm_bindgen]
pub fn reduce(src: &str, full: bool, fuel: usize) -> String {
    let s = if full { ReduceStrategy::Full } else { ReduceStrategy::Head };
    render(api::reduce(src, s, fuel, true))
}

/// Run the three preorder deciders at default bounds, except `fuel`.
#[wasm_bindgen]
pub fn compare(lhs: &str, rhs: &str, fuel: usize) -> String {
    let bounds = Bounds { fuel, ..Bounds::default() };
    render(api::compare(lhs, rhs, Relation::All, &bounds))
}

#[wasm_bindgen]
pub fn separate(lhs: &str, rhs: &str, fuel: usize) -> String {
    render(api::separate(lhs, rhs, 6, fuel))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calls_return_json() {
        let v: Value = serde_json::from_str(&reduce("(\\b x. x) @w y", false, 100)).unwrap();
        assert_eq!(v["interactions"], 1);
        let v: Value = serde_json::from_str(&separate("\\x. x", "\\x y. x y", 1000)).unwrap();
        assert!(v["rhs_interactions"].as_u64() > v["lhs_interactions"].as_u64());
        let v: Value = serde_json::from_str(&compare("x", "(", 100)).unwrap();
        assert!(v["error"].is_string());
    }
}
