//! `--config <file.toml>`: flag defaults read from a TOML file.
//!
//! Top-level keys apply to every subcommand that has a flag of that name;
//! keys in a `[wall]`, `[tile]`, ... table apply to that subcommand only.
//! Flags given on the command line win. `tile_length` and `tile-length`
//! are the same key.

use std::ffi::OsString;

use anyhow::Context;
use clap::CommandFactory;
use toml::{Table, Value};

use crate::{Cli, Usage};

fn scalar(key: &str, v: &Value) -> anyhow::Result<Option<String>> {
    Ok(match v {
        Value::String(s) => Some(s.clone()),
        Value::Integer(i) => Some(i.to_string()),
        Value::Boolean(true) => Some(String::new()),
        Value::Boolean(false) => None,
        Value::Array(items) => Some(
            items
                .iter()
                .map(|x| match x {
                    Value::Integer(i) => Ok(i.to_string()),
                    _ => Err(Usage(format!(
                        "config key `{key}`: arrays may only hold integers"
                    ))),
                })
                .collect::<Result<Vec<_>, _>>()?
                .join(","),
        ),
        _ => return Err(Usage(format!("config key `{key}` has an unsupported type")).into()),
    })
}

/// Returns `args` with the config file's settings appended as flags.
pub fn expand(mut args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let Some(pos) = args
        .iter()
        .position(|a| a == "--config" || a.to_string_lossy().starts_with("--config="))
    else {
        return Ok(args);
    };
    let flag = args.remove(pos).to_string_lossy().into_owned();
    let path = match flag.strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None if pos < args.len() => args.remove(pos).to_string_lossy().into_owned(),
        None => return Err(Usage("--config needs a path".into()).into()),
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {path}"))?;
    let table: Table = text.parse().map_err(|e| Usage(format!("{path}: {e}")))?;

    let cmd = Cli::command();
    let Some(sub) = args
        .iter()
        .skip(1)
        .find_map(|a| cmd.find_subcommand(a.to_string_lossy().as_ref()))
    else {
        return Ok(args);
    };
    let accepts = |key: &str| sub.get_arguments().any(|a| a.get_long() == Some(key));
    let given = |key: &str| {
        args.iter().any(|a| {
            let a = a.to_string_lossy();
            a == format!("--{key}") || a.starts_with(&format!("--{key}="))
        })
    };

    let mut settings: Vec<(String, Value)> = table
        .iter()
        .map(|(k, v)| (k.replace('_', "-"), v))
        .filter(|(k, v)| !v.is_table() && accepts(k))
        .map(|(k, v)| (k, v.clone()))
        .collect();
    if let Some(Value::Table(own)) = table.get(sub.get_name()) {
        for (k, v) in own {
            let k = &k.replace('_', "-");
            if !accepts(k) {
                return Err(
                    Usage(format!("config: `{}` has no flag --{k}", sub.get_name())).into(),
                );
            }
            settings.retain(|(key, _)| key != k);
            settings.push((k.clone(), v.clone()));
        }
    }
    let mut extra: Vec<OsString> = Vec::new();
    for (key, value) in settings {
        if given(&key) {
            continue;
        }
        match scalar(&key, &value)? {
            Some(s) if s.is_empty() => extra.push(format!("--{key}").into()),
            Some(s) => extra.push(format!("--{key}={s}").into()),
            None => {}
        }
    }
    args.extend(extra);
    Ok(args)
}
