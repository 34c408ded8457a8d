//! Config files become flags placed ahead of the command line's own flags,
//! so the parser both rejects unknown keys and lets later flags win.

use std::ffi::OsString;

/// Global flags that take a value, for locating the subcommand.
const GLOBAL_VALUED: &[&str] = &["--out", "--seed", "--threads", "--config", "--format"];

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Index just past the subcommand words.
fn subcommand_end(argv: &[OsString]) -> Option<usize> {
    let mut i = 1;
    let mut words = 0;
    let mut want = 1;
    while i < argv.len() {
        let s = argv[i].to_string_lossy();
        if s.starts_with("--") {
            i += if !s.contains('=') && GLOBAL_VALUED.contains(&s.as_ref()) { 2 } else { 1 };
            continue;
        }
        if s.starts_with('-') {
            i += 1;
            continue;
        }
        if words == 0 && s == "experiment" {
            want = 2;
        }
        words += 1;
        i += 1;
        if words == want {
            return Some(i);
        }
    }
    None
}

fn scalar(key: &str, v: &toml::Value) -> Result<String, String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(n) => Ok(n.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        _ => Err(format!("config key `{key}`: expected a string or number")),
    }
}

pub fn table_to_flags(table: &toml::Table) -> Result<Vec<OsString>, String> {
    let mut out = Vec::new();
    for (key, v) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            toml::Value::Boolean(true) => out.push(flag.into()),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let parts = items.iter().map(|x| scalar(key, x)).collect::<Result<Vec<_>, _>>()?;
                out.push(flag.into());
                out.push(parts.join(",").into());
            }
            toml::Value::Table(_) => return Err(format!("config key `{key}`: nested tables are not supported")),
            other => {
                out.push(flag.into());
                out.push(scalar(key, other)?.into());
            }
        }
    }
    Ok(out)
}

/// `argv` with the config file's flags spliced in after the subcommand.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("--config {}: {e}", path.to_string_lossy()))?;
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| format!("--config {}: {}", path.to_string_lossy(), e.message()))?;
    let flags = table_to_flags(&table)?;
    let Some(at) = subcommand_end(&argv) else {
        return Ok(argv);
    };
    let mut out = argv[..at].to_vec();
    out.extend(flags);
    out.extend_from_slice(&argv[at..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn finds_the_subcommand() {
        assert_eq!(subcommand_end(&os(&["w", "--out", "o", "experiment", "ex32", "--js", "2"])), Some(5));
        assert_eq!(subcommand_end(&os(&["w", "dist", "--x", "1,1"])), Some(2));
        assert_eq!(subcommand_end(&os(&["w", "--seed=3"])), None);
    }

    #[test]
    fn values_become_flags() {
        let t: toml::Table = "alpha0 = 0.25\njs = [2, 3]\nno_toy = true\nfamily = \"thm43\"".parse().unwrap();
        let f: Vec<String> = table_to_flags(&t).unwrap().into_iter().map(|s| s.into_string().unwrap()).collect();
        assert_eq!(f, ["--alpha0", "0.25", "--family", "thm43", "--js", "2,3", "--no-toy"]);
        let bad: toml::Table = "[x]\ny = 1".parse().unwrap();
        assert!(table_to_flags(&bad).is_err());
    }
}
