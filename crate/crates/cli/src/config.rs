//! `--config` files: one `key=value` per line, `#` starts a comment.
//!
//! Entries are spliced into the argument list right after the subcommand,
//! skipping keys already given on the command line and keys the chosen
//! subcommand does not take.

use std::collections::BTreeSet;
use std::fs;

use clap::CommandFactory;

use crate::args::Cli;

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Parses `key=value` lines; keys may carry a leading `--`.
pub fn parse_entries(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut entries = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got {raw:?}", lineno + 1))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", lineno + 1));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

fn long_names(cmd: &clap::Command) -> BTreeSet<String> {
    cmd.get_arguments()
        .filter_map(|a| a.get_long().map(str::to_string))
        .collect()
}

/// Returns `args` with the entries of the `--config` file spliced in.
pub fn expand(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let entries = parse_entries(&text)?;

    let root = Cli::command();
    let globals = long_names(&root);
    let mut known = globals.clone();
    for sub in root.get_subcommands() {
        known.extend(long_names(sub));
    }

    let Some((pos, sub)) = args
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, a)| root.find_subcommand(a).map(|s| (i, s)))
    else {
        // Let clap report the missing subcommand.
        return Ok(args);
    };
    let mut accepted = globals;
    accepted.extend(long_names(sub));
    accepted.remove("config");

    let given: BTreeSet<&str> = args
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a))
        .collect();

    let mut injected = Vec::new();
    for (key, value) in entries {
        if !known.contains(&key) || key == "config" {
            return Err(format!("unknown config key {key:?}"));
        }
        if !accepted.contains(&key) {
            log::debug!("config key {key} does not apply to {}", sub.get_name());
            continue;
        }
        if given.contains(key.as_str()) {
            continue;
        }
        injected.push(format!("--{key}"));
        injected.push(value);
    }
    let mut out = args[..=pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn entries() {
        let e =
            parse_entries("# comment\nkappa = 0.9\n--mu=0.8  # trailing\n\nquantity=capacity,z0_fraction\n").unwrap();
        assert_eq!(
            e,
            vec![
                ("kappa".into(), "0.9".into()),
                ("mu".into(), "0.8".into()),
                ("quantity".into(), "capacity,z0_fraction".into())
            ]
        );
        assert!(parse_entries("kappa 0.9").is_err());
        assert!(parse_entries("=3").is_err());
    }

    #[test]
    fn splices_after_subcommand_and_respects_overrides() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "kappa=0.9\nmu=0.8\nenergy=8\nnc=1\nformat=json").unwrap();
        let path = f.path().to_str().unwrap().to_string();
        let args = strings(&["gaussmem", "--config", &path, "capacity", "--kappa", "0.5"]);
        let out = expand(args).unwrap();
        assert_eq!(out[..4], strings(&["gaussmem", "--config", &path, "capacity"])[..]);
        let rest = &out[4..];
        assert!(rest.windows(2).any(|w| w == ["--mu", "0.8"]));
        assert!(rest.windows(2).any(|w| w == ["--format", "json"]));
        assert!(!rest.iter().any(|a| a == "--nc"));
        assert_eq!(rest.iter().filter(|a| *a == "--kappa").count(), 1);
        assert!(rest.windows(2).any(|w| w == ["--kappa", "0.5"]));
    }

    #[test]
    fn unknown_key_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "colour=red").unwrap();
        let path = f.path().to_str().unwrap().to_string();
        assert!(expand(strings(&["gaussmem", "capacity", "--config", &path])).is_err());
    }

    #[test]
    fn no_config_is_identity() {
        let args = strings(&["gaussmem", "capacity", "--kappa", "1"]);
        assert_eq!(expand(args.clone()).unwrap(), args);
    }
}
