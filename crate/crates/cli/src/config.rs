//! Loading solver configurations from `key = value` text or JSON.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fracpme::evolve::parse_pairs;
use serde_json::Value;

/// Reads the raw pairs of a config file. Files ending in `.json` hold an
/// object with the same keys; `ic` may also be a nested object.
pub fn load_pairs(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read config '{}'", path.display()))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let pairs = if is_json { json_pairs(&text)? } else { parse_pairs(&text)? };
    Ok(pairs)
}

pub fn json_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let root: Value = serde_json::from_str(text).context("invalid JSON config")?;
    let Value::Object(map) = root else { bail!("JSON config must be an object") };
    let mut out = BTreeMap::new();
    for (k, v) in map {
        match v {
            Value::Object(inner) => {
                for (ik, iv) in inner {
                    out.insert(format!("{k}.{ik}"), scalar(&format!("{k}.{ik}"), &iv)?);
                }
            }
            other => {
                out.insert(k.clone(), scalar(&k, &other)?);
            }
        }
    }
    Ok(out)
}

fn scalar(key: &str, v: &Value) -> Result<String> {
    Ok(match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(|i| scalar(key, i)).collect::<Result<Vec<_>>>()?.join(","),
        _ => bail!("key '{key}': expected a number, string or list"),
    })
}

/// Applies `key=value` command-line overrides.
pub fn apply_overrides(pairs: &mut BTreeMap<String, String>, overrides: &[String]) -> Result<()> {
    for o in overrides {
        let Some((k, v)) = o.split_once('=') else { bail!("override '{o}' is not of the form key=value") };
        pairs.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_flattens_nested_ic_and_lists() {
        let p = json_pairs(r#"{"d": 1, "p_list": [1, 2, "inf"], "ic": {"kind": "gaussian", "sigma": 0.5}}"#).unwrap();
        assert_eq!(p["d"], "1");
        assert_eq!(p["p_list"], "1,2,inf");
        assert_eq!(p["ic.kind"], "gaussian");
        assert_eq!(p["ic.sigma"], "0.5");
        assert!(json_pairs("[1]").is_err());
        assert!(json_pairs(r#"{"d": true}"#).is_err());
    }

    #[test]
    fn overrides_replace_values() {
        let mut p = BTreeMap::new();
        p.insert("eps".to_string(), "1e-4".to_string());
        apply_overrides(&mut p, &["eps=1e-5".into(), "n = 64".into()]).unwrap();
        assert_eq!(p["eps"], "1e-5");
        assert_eq!(p["n"], "64");
        assert!(apply_overrides(&mut p, &["nokey".into()]).is_err());
    }
}
