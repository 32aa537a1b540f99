//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function has a plain Rust counterpart returning
//! `Result<String, String>` so it can be tested natively.

use holorec::exactnum::{parse_bigint, parse_rational};
use holorec::guess::{guess_recurrence, GuessSpec};
use holorec::holonomic::ode_to_recurrence;
use holorec::meixner::build_egf;
use holorec::{DiffOperator, SequenceTable};
use wasm_bindgen::prelude::*;

pub const MAX_ORDER: usize = 200;

/// Comma-separated `n! [t^n] exp(x0 arctan t)/sqrt(1+t^2)` for `n <= order`.
pub fn egf_values(x0: &str, order: usize) -> Result<String, String> {
    let x0 = parse_rational(x0).map_err(|e| format!("x0: {e}"))?;
    if order > MAX_ORDER {
        return Err(format!("order must be at most {MAX_ORDER}"));
    }
    let values = build_egf(&x0, order).egf_values();
    Ok(values.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

/// The recurrence satisfied by the EGF coefficients of solutions of `ode`.
pub fn ode_recurrence(ode: &str) -> Result<String, String> {
    let op: DiffOperator = ode.parse().map_err(|e| format!("{e}"))?;
    Ok(ode_to_recurrence(&op).to_string())
}

/// Guessed recurrences, one per line, for comma- or space-separated terms.
pub fn guess_terms(terms: &str, max_order: usize, max_degree: usize) -> Result<String, String> {
    let terms = terms
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(parse_bigint)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| format!("terms: {e}"))?;
    let spec = GuessSpec {
        max_order,
        max_degree,
        terms: SequenceTable::new(0, terms),
    };
    let found = guess_recurrence(&spec).map_err(|e| e.to_string())?;
    if found.is_empty() {
        return Ok(format!(
            "no recurrence of order <= {max_order} and degree <= {max_degree} fits"
        ));
    }
    Ok(found.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
}

#[wasm_bindgen(js_name = egfValues)]
pub fn egf_values_js(x0: &str, order: usize) -> Result<String, JsError> {
    egf_values(x0, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = odeRecurrence)]
pub fn ode_recurrence_js(ode: &str) -> Result<String, JsError> {
    ode_recurrence(ode).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = guessTerms)]
pub fn guess_terms_js(terms: &str, max_order: usize, max_degree: usize) -> Result<String, JsError> {
    guess_terms(terms, max_order, max_degree).map_err(|e| JsError::new(&e))
}
