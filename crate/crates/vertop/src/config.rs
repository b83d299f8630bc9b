//! Suite configuration from defaults, a `key = value` file and flags.

use std::path::Path;

use thiserror::Error;
use vertop_core::suites::SuiteConfig;
use vertop_core::{ModeWindow, Rational};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{file}:{line}: {message}")]
    File {
        file: String,
        line: usize,
        message: String,
    },
    #[error("cannot read {file}: {source}")]
    Io {
        file: String,
        source: std::io::Error,
    },
    #[error("invalid value for `{key}`: {message}")]
    Value { key: String, message: String },
}

/// Report rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Keys accepted in config files; flags use the same names.
pub const KEYS: &[&str] = &[
    "N",
    "degree",
    "depth",
    "window",
    "g",
    "n",
    "c",
    "seed",
    "margin",
    "generation",
    "probes",
    "words",
    "max_len",
    "level",
    "slack",
    "format",
];

pub fn parse_window(s: &str) -> Result<ModeWindow, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("`{s}` is not of the form lo..hi"))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound in `{s}`"))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound in `{s}`"))?;
    if lo > hi {
        return Err(format!("window `{s}` is empty"));
    }
    Ok(ModeWindow::new(lo, hi))
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: i64 = num
        .parse()
        .map_err(|_| format!("`{s}` is not a rational number"))?;
    let den: i64 = den
        .parse()
        .map_err(|_| format!("`{s}` is not a rational number"))?;
    if den == 0 {
        return Err(format!("`{s}` has a zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a valid number"))
}

/// Applies one `key = value` setting.
pub fn set(
    cfg: &mut SuiteConfig,
    format: &mut Format,
    key: &str,
    value: &str,
) -> Result<(), ConfigError> {
    let err = |message: String| ConfigError::Value {
        key: key.to_string(),
        message,
    };
    match key {
        "N" => {
            cfg.precision = parse_num(value).map_err(err)?;
            if cfg.precision == 0 {
                return Err(ConfigError::Value {
                    key: key.into(),
                    message: "N must be at least 1".into(),
                });
            }
        }
        "degree" => cfg.degree = parse_num(value).map_err(err)?,
        "depth" => cfg.depth = parse_num(value).map_err(err)?,
        "window" => cfg.window = parse_window(value).map_err(err)?,
        "g" => cfg.g = parse_num(value).map_err(err)?,
        "n" => cfg.n = parse_num(value).map_err(err)?,
        "c" => cfg.c = parse_rational(value).map_err(err)?,
        "seed" => cfg.seed = parse_num(value).map_err(err)?,
        "margin" => cfg.margin = parse_num(value).map_err(err)?,
        "generation" => cfg.generation = parse_num(value).map_err(err)?,
        "probes" => cfg.probes = parse_num(value).map_err(err)?,
        "words" => cfg.words = parse_num(value).map_err(err)?,
        "max_len" => cfg.max_len = parse_num(value).map_err(err)?,
        "level" => cfg.level = parse_rational(value).map_err(err)?,
        "slack" => cfg.slack = parse_num(value).map_err(err)?,
        "format" => {
            *format = match value.trim() {
                "json" => Format::Json,
                "text" => Format::Text,
                other => return Err(err(format!("`{other}` is not json or text"))),
            }
        }
        other => {
            return Err(ConfigError::Value {
                key: other.into(),
                message: format!("unknown key; expected one of {}", KEYS.join(", ")),
            })
        }
    }
    Ok(())
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn load_file(
    path: &Path,
    cfg: &mut SuiteConfig,
    format: &mut Format,
) -> Result<(), ConfigError> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        file: file.clone(),
        source,
    })?;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::File {
                file,
                line: i + 1,
                message: format!("expected key = value, got `{line}`"),
            });
        };
        set(cfg, format, k.trim(), v.trim()).map_err(|e| ConfigError::File {
            file: file.clone(),
            line: i + 1,
            message: e.to_string(),
        })?;
    }
    Ok(())
}

/// Checks the invariants every suite relies on.
pub fn validate(cfg: &SuiteConfig) -> Result<(), ConfigError> {
    let bad = |key: &str, message: &str| {
        Err(ConfigError::Value {
            key: key.into(),
            message: message.into(),
        })
    };
    if cfg.window.is_empty() {
        return bad("window", "window is empty");
    }
    if cfg.g == 0 {
        return bad("g", "g must be at least 1");
    }
    if cfg.n < 2 {
        return bad("n", "n must be at least 2");
    }
    if cfg.probes == 0 {
        return bad("probes", "at least one probe is needed");
    }
    if cfg.max_len == 0 {
        return bad("max_len", "max_len must be at least 1");
    }
    vertop_core::affine::SlnConfig::new(cfg.n, cfg.c.clone()).map_err(|e| ConfigError::Value {
        key: "c".into(),
        message: e.to_string(),
    })?;
    Ok(())
}
