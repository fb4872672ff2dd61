use heiskor_core::ScanReport;
use serde_json::{json, Value};

use crate::args::Format;
use crate::commands::Payload;

/// 17 significant digits, enough to round-trip every f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn scan_value(r: &ScanReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| Value::Object(r.columns.iter().cloned().zip(row.iter().map(|&v| json!(v))).collect()))
        .collect();
    json!({
        "kind": r.kind,
        "columns": r.columns,
        "rows": rows,
        "summary": r.summary,
        "grid": r.grid,
    })
}

pub fn payload_value(p: &Payload) -> Value {
    match p {
        Payload::Record(v) => v.clone(),
        Payload::Table(r) => scan_value(r),
    }
}

pub fn render(payload: &Payload, format: Format, meta: &Value) -> Result<String, csv::Error> {
    match format {
        Format::Json => {
            let doc = json!({ "meta": meta, "data": payload_value(payload) });
            Ok(serde_json::to_string_pretty(&doc).expect("json values serialise") + "\n")
        }
        Format::Csv => match payload {
            Payload::Record(v) => record_csv(v),
            Payload::Table(r) => table_csv(r),
        },
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => fmt_f64(n.as_f64().expect("f64 number")),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => unreachable!("flattened before formatting"),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, out)),
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, csv::Error> {
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Nested records become `key,value` rows with dotted keys.
fn record_csv(v: &Value) -> Result<String, csv::Error> {
    let mut pairs = Vec::new();
    flatten("", v, &mut pairs);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["key", "value"])?;
    for (k, v) in pairs {
        w.write_record([k, v])?;
    }
    finish(w)
}

/// Data rows tagged `row`, then `summary` and `grid` rows carrying a name and
/// a value in the first two data columns.
fn table_csv(r: &ScanReport) -> Result<String, csv::Error> {
    let width = r.columns.len().max(2);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["record".to_string()];
    header.extend(r.columns.iter().cloned());
    header.resize(width + 1, String::new());
    w.write_record(&header)?;
    for row in &r.rows {
        let mut rec = vec!["row".to_string()];
        rec.extend(row.iter().map(|&x| fmt_f64(x)));
        rec.resize(width + 1, String::new());
        w.write_record(&rec)?;
    }
    let mut tagged = |tag: &str, k: &str, v: String| {
        let mut rec = vec![tag.to_string(), k.to_string(), v];
        rec.resize(width + 1, String::new());
        w.write_record(&rec)
    };
    for (k, v) in &r.summary {
        tagged("summary", k, fmt_f64(*v))?;
    }
    for (k, v) in &r.grid {
        tagged("grid", k, v.clone())?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 4.610_685_044_478_946e-1, 1e-300, -2.5e17] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn record_flattens_with_dotted_keys() {
        let v = json!({ "a": { "b": 1.5, "c": [true, "x"] }, "n": 3 });
        let s = record_csv(&v).unwrap();
        assert_eq!(
            s,
            "key,value\na.b,1.5000000000000000e0\na.c.0,true\na.c.1,x\nn,3\n"
        );
    }

    #[test]
    fn table_has_row_and_summary_records() {
        let mut r = ScanReport::new("t", &["x", "y", "z"]);
        r.push_row(vec![1.0, 2.0, 3.0]);
        r.summary.insert("c".into(), 0.5);
        r.grid.insert("decades".into(), "-2:2".into());
        let s = table_csv(&r).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "record,x,y,z");
        assert!(lines[1].starts_with("row,1.0000000000000000e0,"));
        assert_eq!(lines[2], "summary,c,5.0000000000000000e-1,");
        assert_eq!(lines[3], "grid,decades,-2:2,");
    }
}
