use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::config::ScenarioConfig;

/// Top-level report: the resolved configuration, the seed and the result
/// fields of one subcommand.
pub fn document<T: Serialize>(config: &ScenarioConfig, seed: u64, body: &T) -> Result<String, serde_json::Error> {
    let mut top = match serde_json::to_value(body)? {
        Value::Object(map) => map,
        other => {
            let mut map = Map::new();
            map.insert("result".into(), other);
            map
        }
    };
    for value in top.values_mut() {
        round_floats(value);
    }
    top.insert("config".into(), serde_json::to_value(config)?);
    top.insert("seed".into(), Value::from(seed));
    let mut text = serde_json::to_string_pretty(&Value::Object(top))?;
    text.push('\n');
    Ok(text)
}

/// Rounds every non-integer number to six significant digits.
pub fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or_default();
            let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
            if let Some(r) = Number::from_f64(rounded) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}
