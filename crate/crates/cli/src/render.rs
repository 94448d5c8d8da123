//! Report emission. JSON is the full document; CSV and markdown tables show
//! the report's row list when it has one, otherwise flattened key/value pairs.

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub struct Report {
    pub result: Value,
    /// key of an array of objects inside `result` to tabulate
    pub rows: Option<&'static str>,
}

pub fn render(config: &Value, report: &Report, fmt: Format) -> String {
    match fmt {
        Format::Json => {
            let doc = serde_json::json!({ "config": config, "result": report.result });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let (head, rows) = tabulate(report);
            let mut out = format!("# config: {}\n", compact(config));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&head).expect("in-memory write");
            for r in rows {
                w.write_record(&r).expect("in-memory write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
            out
        }
        Format::Table => {
            let (head, rows) = tabulate(report);
            let esc = |s: &str| s.replace('|', "\\|");
            let mut out = format!("config: `{}`\n\n", compact(config));
            out.push_str(&format!("| {} |\n", head.iter().map(|h| esc(h)).collect::<Vec<_>>().join(" | ")));
            out.push_str(&format!("|{}\n", " --- |".repeat(head.len())));
            for r in rows {
                out.push_str(&format!("| {} |\n", r.iter().map(|c| esc(c)).collect::<Vec<_>>().join(" | ")));
            }
            out
        }
    }
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable")
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => compact(other),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        _ => out.push((prefix.to_string(), cell(v))),
    }
}

fn tabulate(report: &Report) -> (Vec<String>, Vec<Vec<String>>) {
    let rows = report.rows.and_then(|k| report.result.get(k)).and_then(Value::as_array);
    match rows {
        Some(rows) => {
            let mut head: Vec<String> = Vec::new();
            let flat: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| {
                    let mut kv = Vec::new();
                    match r {
                        Value::Object(_) => flatten("", r, &mut kv),
                        _ => kv.push(("value".to_string(), cell(r))),
                    }
                    for (k, _) in &kv {
                        if !head.contains(k) {
                            head.push(k.clone());
                        }
                    }
                    kv
                })
                .collect();
            let body = flat
                .into_iter()
                .map(|kv| {
                    let m: Map<String, Value> = kv.into_iter().map(|(k, v)| (k, Value::String(v))).collect();
                    head.iter().map(|h| m.get(h).map(cell).unwrap_or_default()).collect()
                })
                .collect();
            (head, body)
        }
        None => {
            let mut kv = Vec::new();
            flatten("", &report.result, &mut kv);
            (vec!["key".into(), "value".into()], kv.into_iter().map(|(k, v)| vec![k, v]).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rows_become_columns() {
        let r = Report { result: json!({"rows": [{"a": "1", "b": {"c": 2}}, {"a": "x|y"}]}), rows: Some("rows") };
        let t = render(&json!({}), &r, Format::Table);
        assert!(t.contains("| a | b.c |"));
        assert!(t.contains("| x\\|y |  |"));
        let c = render(&json!({}), &r, Format::Csv);
        assert!(c.ends_with("a,b.c\n1,2\nx|y,\n"));
    }

    #[test]
    fn scalar_reports_flatten() {
        let r = Report { result: json!({"h": "1/2", "n": {"m": true}}), rows: None };
        let c = render(&json!({"k": 12}), &r, Format::Csv);
        assert_eq!(c, "# config: {\"k\":12}\nkey,value\nh,1/2\nn.m,true\n");
    }
}
