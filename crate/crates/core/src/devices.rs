//! Recorded sensor data for robot mode, loaded from JSON:
//!
//! ```json
//! { "level": [15.0, 14.8, 14.6], "pose": [[0.0, 1.0], [0.1, 1.0]] }
//! ```
//!
//! At instant `i` a `robot_get` reads entry `min(i, len - 1)`.

use std::collections::BTreeMap;

use serde_json::Value as Json;

use crate::ast::Value;
use crate::interp::RuntimeError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeviceTable {
    series: BTreeMap<String, Vec<Json>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeviceError {
    #[error("malformed device table: {0}")]
    Json(String),
    #[error("device table must be a JSON object mapping keys to arrays")]
    Shape,
    #[error("device `{0}` has no readings")]
    Empty(String),
}

impl DeviceTable {
    pub fn from_json(text: &str) -> Result<DeviceTable, DeviceError> {
        let json: Json = serde_json::from_str(text).map_err(|e| DeviceError::Json(e.to_string()))?;
        let Json::Object(map) = json else { return Err(DeviceError::Shape) };
        let mut series = BTreeMap::new();
        for (k, v) in map {
            let Json::Array(xs) = v else { return Err(DeviceError::Shape) };
            if xs.is_empty() {
                return Err(DeviceError::Empty(k));
            }
            series.insert(k, xs);
        }
        Ok(DeviceTable { series })
    }

    pub fn insert(&mut self, key: impl Into<String>, readings: Vec<Json>) {
        self.series.insert(key.into(), readings);
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.series.keys().map(String::as_str)
    }

    /// Reading for `key` at `instant`, converted to the shape of `model`.
    pub fn read(&self, key: &str, instant: usize, model: &Value) -> Result<Value, RuntimeError> {
        let err = |message: String| RuntimeError::Device { key: key.to_string(), message };
        let xs = self.series.get(key).ok_or_else(|| err("no such device in the table".into()))?;
        let x = &xs[instant.min(xs.len() - 1)];
        convert(x, model).map_err(err)
    }
}

fn convert(x: &Json, model: &Value) -> Result<Value, String> {
    match (model, x) {
        (Value::Float(_), Json::Number(n)) => {
            n.as_f64().map(Value::Float).ok_or_else(|| format!("{n} is not a float"))
        }
        (Value::Int(_), Json::Number(n)) => n.as_i64().map(Value::Int).ok_or_else(|| format!("{n} is not an integer")),
        (Value::Bool(_), Json::Bool(b)) => Ok(Value::Bool(*b)),
        (Value::Tuple(ms), Json::Array(xs)) if ms.len() == xs.len() => {
            ms.iter().zip(xs).map(|(m, x)| convert(x, m)).collect::<Result<_, _>>().map(Value::Tuple)
        }
        (m, x) => Err(format!("reading {x} does not match the model value {m}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_clamp_to_last_entry() {
        let t = DeviceTable::from_json(r#"{"level": [1.5, 2.5]}"#).unwrap();
        assert_eq!(t.read("level", 0, &Value::Float(0.0)).unwrap(), Value::Float(1.5));
        assert_eq!(t.read("level", 7, &Value::Float(0.0)).unwrap(), Value::Float(2.5));
        assert!(t.read("level", 0, &Value::Bool(true)).is_err());
        assert!(t.read("flow", 0, &Value::Float(0.0)).is_err());
    }

    #[test]
    fn tuple_readings() {
        let t = DeviceTable::from_json(r#"{"p": [[1, true]]}"#).unwrap();
        let m = Value::Tuple(vec![Value::Int(0), Value::Bool(false)]);
        assert_eq!(t.read("p", 0, &m).unwrap(), Value::Tuple(vec![Value::Int(1), Value::Bool(true)]));
    }

    #[test]
    fn rejects_bad_tables() {
        assert_eq!(DeviceTable::from_json("[]"), Err(DeviceError::Shape));
        assert_eq!(DeviceTable::from_json(r#"{"k": []}"#), Err(DeviceError::Empty("k".into())));
        assert!(matches!(DeviceTable::from_json("{"), Err(DeviceError::Json(_))));
    }
}
