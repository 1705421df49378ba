//! Machine-readable reporting: `key=value` lines, or one JSON object with
//! `--json`.

use serde_json::{Map, Value};

pub struct Report {
    json: bool,
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(json: bool) -> Self {
        Report { json, fields: Map::new() }
    }

    pub fn push<V: Into<Value>>(&mut self, key: &str, value: V) {
        let value = value.into();
        if !self.json {
            match &value {
                Value::String(s) => println!("{key}={s}"),
                other => println!("{key}={other}"),
            }
        }
        self.fields.insert(key.to_string(), value);
    }

    pub fn finish(self) {
        if self.json {
            println!("{}", Value::Object(self.fields));
        }
    }
}
