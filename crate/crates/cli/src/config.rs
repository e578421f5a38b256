use std::fs;

pub const SUBCOMMANDS: [&str; 11] =
    ["expsum", "audit", "dual", "density", "count", "series", "hooley", "rho", "appendix", "diamond", "report"];

/// Parses flat `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key=value", i + 1));
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn given(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Splices the entries of `--config FILE` into argv. Command-line flags win over file entries,
/// and a `subcommand` key supplies the subcommand when argv has none.
pub fn merge_config(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let entries = parse_config(&text)?;
    let mut out = args;
    let pos = match out.iter().position(|a| SUBCOMMANDS.contains(&a.as_str())) {
        Some(p) => p + 1,
        None => {
            let sub = entries
                .iter()
                .find(|(k, _)| k == "subcommand")
                .map(|(_, v)| v.clone())
                .ok_or("no subcommand on the command line or in the config")?;
            out.insert(1, sub);
            2
        }
    };
    let mut extra = Vec::new();
    for (k, v) in entries.into_iter().filter(|(k, _)| k != "subcommand" && k != "config") {
        if given(&out, &k) {
            continue;
        }
        match v.as_str() {
            "true" => extra.push(format!("--{k}")),
            "false" => {}
            _ => extra.push(format!("--{k}={v}")),
        }
    }
    out.splice(pos..pos, extra);
    Ok(out)
}
