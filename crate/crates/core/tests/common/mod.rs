#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

pub struct Run {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}):\n{}", self.stdout))
    }
}

pub fn mws(args: &[&str]) -> Run {
    mws_env(args, &[])
}

pub fn mws_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mws"));
    cmd.args(args).env_remove("MWS_ENUM_LIMIT");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("run mws");
    Run {
        status: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Validates `value` against the JSON Schema keywords the shipped schemas use:
/// type, enum, required, properties, additionalProperties, items, minItems,
/// maxItems, minimum, maximum, oneOf and local `$ref`.
pub fn validate(root: &Value, value: &Value) -> Result<(), String> {
    check(root, root, value, "$")
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        other => panic!("unsupported type {other}"),
    }
}

fn check(root: &Value, s: &Value, v: &Value, at: &str) -> Result<(), String> {
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let mut target = root;
        for part in r.trim_start_matches("#/").split('/') {
            target = &target[part];
        }
        assert!(!target.is_null(), "dangling $ref {r}");
        check(root, target, v, at)?;
    }
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            return Err(format!("{at}: expected type {t}, got {v}"));
        }
    }
    if let Some(options) = s.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{at}: {v} not in {options:?}"));
        }
    }
    if let Some(options) = s.get("oneOf").and_then(Value::as_array) {
        let hits = options.iter().filter(|o| check(root, o, v, at).is_ok()).count();
        if hits != 1 {
            return Err(format!("{at}: matched {hits} oneOf branches"));
        }
    }
    if let Some(x) = v.as_f64() {
        if let Some(min) = s.get("minimum").and_then(Value::as_f64) {
            if x < min {
                return Err(format!("{at}: {x} < minimum {min}"));
            }
        }
        if let Some(max) = s.get("maximum").and_then(Value::as_f64) {
            if x > max {
                return Err(format!("{at}: {x} > maximum {max}"));
            }
        }
    }
    if let Some(obj) = v.as_object() {
        for key in s.get("required").and_then(Value::as_array).into_iter().flatten() {
            let key = key.as_str().unwrap();
            if !obj.contains_key(key) {
                return Err(format!("{at}: missing required `{key}`"));
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (key, child) in obj {
            let path = format!("{at}.{key}");
            match props.and_then(|p| p.get(key)) {
                Some(ps) => check(root, ps, child, &path)?,
                None => match s.get("additionalProperties") {
                    Some(Value::Bool(false)) => return Err(format!("{path}: unexpected property")),
                    Some(extra @ Value::Object(_)) => check(root, extra, child, &path)?,
                    _ => {}
                },
            }
        }
    }
    if let Some(arr) = v.as_array() {
        if let Some(min) = s.get("minItems").and_then(Value::as_u64) {
            if (arr.len() as u64) < min {
                return Err(format!("{at}: fewer than {min} items"));
            }
        }
        if let Some(max) = s.get("maxItems").and_then(Value::as_u64) {
            if arr.len() as u64 > max {
                return Err(format!("{at}: more than {max} items"));
            }
        }
        if let Some(items) = s.get("items") {
            for (i, child) in arr.iter().enumerate() {
                check(root, items, child, &format!("{at}[{i}]"))?;
            }
        }
    }
    Ok(())
}

pub fn assert_valid(schema_name: &str, value: &Value) {
    let s = schema(schema_name);
    if let Err(e) = validate(&s, value) {
        panic!("{schema_name} schema violation: {e}\n{value:#}");
    }
}

/// Drops the wall-clock field for byte comparisons.
pub fn strip_clock(stdout: &str) -> String {
    stdout
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_clock_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}
