use std::fmt::Write as _;

use serde_json::{Map, Value};

/// Tabular command output. Plain text is a one-line schema header, `# key =
/// value` metadata lines and tab-separated rows; JSON carries the same
/// content as one document.
pub struct Report {
    command: &'static str,
    columns: Vec<&'static str>,
    meta: Vec<(String, Value)>,
    rows: Vec<Vec<Value>>,
}

pub const SCHEMA_VERSION: u32 = 1;

impl Report {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Report {
            command,
            columns: columns.to_vec(),
            meta: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn schema(&self) -> String {
        format!("ampsample-{}/{}", self.command, SCHEMA_VERSION)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# {} columns={}\n", self.schema(), self.columns.join(","));
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k} = {}", plain(v));
        }
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(plain).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut doc = Map::new();
        doc.insert("schema".into(), self.schema().into());
        doc.insert("columns".into(), self.columns.clone().into());
        let meta: Map<String, Value> = self.meta.iter().cloned().collect();
        doc.insert("meta".into(), meta.into());
        let rows: Vec<Value> = self.rows.iter().cloned().map(Value::Array).collect();
        doc.insert("rows".into(), rows.into());
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        s.push('\n');
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_and_json_carry_the_same_content() {
        let mut r = Report::new("demo", &["x", "p"]);
        r.meta("n", 2).meta("label", "bell");
        r.row(vec![json!("00"), json!(0.5)]);
        r.row(vec![json!("11"), Value::Null]);
        assert_eq!(
            r.to_text(),
            "# ampsample-demo/1 columns=x,p\n# n = 2\n# label = bell\n00\t0.5\n11\t-\n"
        );
        let doc: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(doc["schema"], "ampsample-demo/1");
        assert_eq!(doc["meta"]["label"], "bell");
        assert_eq!(doc["rows"][1], json!(["11", null]));
    }
}
