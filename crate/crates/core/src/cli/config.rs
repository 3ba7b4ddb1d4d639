use std::ffi::OsString;
use std::fs;

/// Reads a flat `key = value` file into `--key value` argument pairs.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_config(text: &str) -> Result<Vec<OsString>, String> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", no + 1))?;
        let key = key.trim();
        if key.is_empty() || key.starts_with('-') || key.contains(char::is_whitespace) {
            return Err(format!("config line {}: bad key '{key}'", no + 1));
        }
        out.push(OsString::from(format!("--{key}")));
        out.push(OsString::from(value.trim()));
    }
    Ok(out)
}

/// Removes `--config FILE` from `args` and splices the file's flags in right
/// after the subcommand, so flags given on the command line win.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            let value = iter.next().ok_or("--config needs a file path")?;
            path = Some(value);
        } else if let Some(value) = text.strip_prefix("--config=") {
            path = Some(OsString::from(value));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let extra = parse_config(&text)?;
    let Some(sub) = rest.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')) else {
        return Err("--config needs a subcommand".to_string());
    };
    let at = sub + 2;
    let tail = rest.split_off(at);
    rest.extend(extra);
    rest.extend(tail);
    Ok(rest)
}
