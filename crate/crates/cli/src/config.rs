//! `key = value` config files, spliced into the argument list ahead of the
//! command-line flags so that the latter win.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

/// Parses `key = value` lines. Blank lines and `#` comments are ignored;
/// keys may use `_` or `-`. `true`/`false` values denote switches.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`, got `{raw}`", lineno + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() || key.starts_with('-') {
            return Err(format!("line {}: bad key `{key}`", lineno + 1));
        }
        if key == "config" {
            return Err(format!("line {}: config files cannot include other config files", lineno + 1));
        }
        pairs.push((key, value));
    }
    Ok(pairs)
}

pub fn config_to_args(pairs: &[(String, String)]) -> Vec<OsString> {
    let mut args = Vec::new();
    for (key, value) in pairs {
        match value.as_str() {
            "true" => args.push(format!("--{key}").into()),
            "false" => {}
            _ => args.push(format!("--{key}={value}").into()),
        }
    }
    args
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn given_on_command_line(argv: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    argv.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.strip_prefix(flag.as_str()).is_some_and(|rest| rest.starts_with('='))
    })
}

/// Inserts the options of the file named by `--config` right after the
/// subcommand, except those also given on the command line.
pub fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let pairs = parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let pairs: Vec<(String, String)> =
        pairs.into_iter().filter(|(k, _)| !given_on_command_line(&argv, k)).collect();
    let insert_at = argv.len().min(2);
    let mut out = argv[..insert_at].to_vec();
    out.extend(config_to_args(&pairs));
    out.extend_from_slice(&argv[insert_at..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines() {
        let pairs = parse_config("# run\nnelx = 30\nmax_outer=10 # cap\n\npgm-ascii = true\nbeta=false\n").unwrap();
        assert_eq!(
            pairs,
            vec![
                ("nelx".into(), "30".into()),
                ("max-outer".into(), "10".into()),
                ("pgm-ascii".into(), "true".into()),
                ("beta".into(), "false".into()),
            ]
        );
        let args: Vec<String> =
            config_to_args(&pairs).into_iter().map(|a| a.into_string().unwrap()).collect();
        assert_eq!(args, ["--nelx=30", "--max-outer=10", "--pgm-ascii"]);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_config("nelx 30").is_err());
        assert!(parse_config("= 3").is_err());
        assert!(parse_config("config = other.cfg").is_err());
    }

    #[test]
    fn command_line_keys_win() {
        let argv: Vec<OsString> =
            ["dualtopo", "probe", "--methods=beso", "--mu", "0.9"].iter().map(Into::into).collect();
        assert!(given_on_command_line(&argv, "methods"));
        assert!(given_on_command_line(&argv, "mu"));
        assert!(!given_on_command_line(&argv, "meshes"));
        assert!(!given_on_command_line(&argv, "m"));
    }

    #[test]
    fn finds_config_flag() {
        let argv: Vec<OsString> = ["dualtopo", "run", "--config=a.cfg"].iter().map(Into::into).collect();
        assert_eq!(config_path(&argv), Some("a.cfg".into()));
        let argv: Vec<OsString> = ["dualtopo", "run", "--config", "b.cfg"].iter().map(Into::into).collect();
        assert_eq!(config_path(&argv), Some("b.cfg".into()));
    }
}
