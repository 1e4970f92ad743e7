use serde::Serialize;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown key '{0}'")]
    UnknownKey(String),

    #[error("line {line}: expected 'key = value', got '{text}'")]
    Syntax { line: usize, text: String },

    #[error("invalid value '{value}' for '{key}': {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },

    #[error("key '{key}' does not apply to mode {mode}")]
    NotForMode { key: String, mode: Mode },

    #[error("mode given as both {0} and {1}")]
    ModeConflict(Mode, Mode),

    #[error("no mode given")]
    MissingMode,

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    NullControl,
    Reach,
    GenfunDump,
    Simulate,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::NullControl => "null-control",
            Mode::Reach => "reach",
            Mode::GenfunDump => "genfun-dump",
            Mode::Simulate => "simulate",
            Mode::Verify => "verify",
        }
    }

    /// Keys accepted besides `mode`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            Mode::NullControl => &["s", "K", "tau", "T", "J_max", "nx", "theta", "dt", "output_dir"],
            Mode::Reach => &["K", "tau", "T", "J_max", "N", "nx", "theta", "dt", "output_dir", "target"],
            Mode::GenfunDump => &["J_max", "N", "output_dir"],
            Mode::Simulate => &["T", "nx", "theta", "dt", "mu0", "output_dir"],
            Mode::Verify => &["seed", "output_dir"],
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "null-control" => Mode::NullControl,
            "reach" => Mode::Reach,
            "genfun-dump" | "genfun" => Mode::GenfunDump,
            "simulate" => Mode::Simulate,
            "verify" => Mode::Verify,
            _ => {
                return Err(ConfigError::Value {
                    key: "mode".into(),
                    value: s.into(),
                    reason: "expected null-control, reach, genfun-dump, simulate or verify".into(),
                })
            }
        })
    }
}

pub const KEYS: &[&str] = &[
    "mode", "s", "K", "tau", "T", "J_max", "N", "nx", "theta", "dt", "mu0", "seed", "output_dir",
    "target",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub s: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub tau: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    #[serde(rename = "J_max")]
    pub j_max: usize,
    /// Coefficient depth (reach) or series order (genfun-dump); derived when absent.
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub nx: usize,
    pub theta: f64,
    /// Time step; `0.5·h` adjusted to divide `T` when absent.
    pub dt: Option<f64>,
    pub mu0: f64,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub target: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn defaults(mode: Mode) -> Self {
        ExperimentConfig {
            mode,
            s: 3.0,
            k: 1.0,
            tau: 0.5,
            t_final: 1.0,
            j_max: 8,
            n: None,
            nx: 256,
            theta: 0.5,
            dt: None,
            mu0: 0.0,
            seed: 0,
            output_dir: PathBuf::from("out"),
            target: None,
        }
    }
}

/// Ordered `key = value` pairs; later entries override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub pairs: Vec<(String, String)>,
}

impl RawConfig {
    /// Flat text: one `key = value` per line, `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<Self, ConfigError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(RawConfig { pairs })
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse_text(&text)
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.pairs.push((key.to_string(), value.into()));
    }

    pub fn extend(&mut self, other: RawConfig) {
        self.pairs.extend(other.pairs);
    }
}

fn value<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    v.parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.into(),
        value: v.into(),
        reason: e.to_string(),
    })
}

fn check(ok: bool, key: &str, v: impl fmt::Display, reason: &str) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Value {
            key: key.into(),
            value: v.to_string(),
            reason: reason.into(),
        })
    }
}

/// Resolves `raw` against the defaults of `mode` (or the `mode` key when
/// `mode` is `None`) and validates every parameter before any compute.
pub fn resolve(raw: &RawConfig, mode: Option<Mode>) -> Result<ExperimentConfig, ConfigError> {
    let mut mode = mode;
    for (k, v) in &raw.pairs {
        if !KEYS.contains(&k.as_str()) {
            return Err(ConfigError::UnknownKey(k.clone()));
        }
        if k == "mode" {
            let m: Mode = v.parse()?;
            match mode {
                Some(prev) if prev != m => return Err(ConfigError::ModeConflict(prev, m)),
                _ => mode = Some(m),
            }
        }
    }
    let mode = mode.ok_or(ConfigError::MissingMode)?;
    let mut c = ExperimentConfig::defaults(mode);
    for (k, v) in &raw.pairs {
        let k = k.as_str();
        if k == "mode" {
            continue;
        }
        if !mode.keys().contains(&k) {
            return Err(ConfigError::NotForMode { key: k.into(), mode });
        }
        match k {
            "s" => c.s = value(k, v)?,
            "K" => c.k = value(k, v)?,
            "tau" => c.tau = value(k, v)?,
            "T" => c.t_final = value(k, v)?,
            "J_max" => c.j_max = value(k, v)?,
            "N" => c.n = Some(value(k, v)?),
            "nx" => c.nx = value(k, v)?,
            "theta" => c.theta = value(k, v)?,
            "dt" => c.dt = Some(value(k, v)?),
            "mu0" => c.mu0 = value(k, v)?,
            "seed" => c.seed = value(k, v)?,
            "output_dir" => c.output_dir = PathBuf::from(v),
            "target" => c.target = Some(PathBuf::from(v)),
            _ => unreachable!("key list checked above"),
        }
    }
    check(c.t_final.is_finite() && c.t_final > 0.0, "T", c.t_final, "must be positive")?;
    if matches!(mode, Mode::NullControl | Mode::Reach) {
        check(c.tau > 0.0 && c.tau < c.t_final, "tau", c.tau, "must lie in (0, T)")?;
    }
    check((2.5..5.0).contains(&c.s), "s", c.s, "must lie in [2.5, 5)")?;
    check(c.k.is_finite() && c.k > 0.0, "K", c.k, "must be positive")?;
    check(c.j_max + 1 < gevrey::MAX_JET_ORDER, "J_max", c.j_max, "too large for the jet cap")?;
    check(c.nx >= kawahara_fd::solver::MIN_NX, "nx", c.nx, "must be at least 32")?;
    check((0.5..=1.0).contains(&c.theta), "theta", c.theta, "must lie in [0.5, 1]")?;
    if let Some(dt) = c.dt {
        check(dt > 0.0 && dt <= c.t_final, "dt", dt, "must lie in (0, T]")?;
    }
    check(c.mu0.is_finite() && c.mu0 >= 0.0, "mu0", c.mu0, "must be >= 0")?;
    if let (Mode::GenfunDump, Some(n)) = (mode, c.n) {
        check(n >= 5 * c.j_max + 10, "N", n, "must be at least 5 J_max + 10")?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(pairs: &[(&str, &str)]) -> RawConfig {
        let mut r = RawConfig::default();
        for (k, v) in pairs {
            r.push(k, *v);
        }
        r
    }

    #[test]
    fn flags_with_defaults() {
        let c = resolve(
            &raw(&[("mode", "null-control"), ("T", "1"), ("tau", "0.5"), ("nx", "256")]),
            None,
        )
        .unwrap();
        assert_eq!(c.mode, Mode::NullControl);
        assert_eq!((c.s, c.k, c.theta, c.j_max), (3.0, 1.0, 0.5, 8));
        assert_eq!(c.nx, 256);
    }

    #[test]
    fn reach_target_and_simulate_mu0() {
        let c = resolve(&raw(&[("target", "target.json")]), Some(Mode::Reach)).unwrap();
        assert_eq!(c.target, Some(PathBuf::from("target.json")));
        let c = resolve(&raw(&[("mode", "simulate"), ("mu0", "0.1")]), None).unwrap();
        assert_eq!(c.mu0, 0.1);
    }

    #[test]
    fn errors_name_the_key() {
        let e = resolve(&raw(&[("mode", "reach"), ("bogus", "1")]), None).unwrap_err();
        assert!(e.to_string().contains("bogus"));
        let e = resolve(&raw(&[("mu0", "0.1")]), Some(Mode::Reach)).unwrap_err();
        assert!(matches!(e, ConfigError::NotForMode { ref key, .. } if key == "mu0"));
        let e = resolve(&raw(&[("mode", "reach")]), Some(Mode::Simulate)).unwrap_err();
        assert!(matches!(e, ConfigError::ModeConflict(..)));
        assert!(matches!(resolve(&raw(&[]), None), Err(ConfigError::MissingMode)));
        let e = resolve(&raw(&[("s", "6")]), Some(Mode::NullControl)).unwrap_err();
        assert!(e.to_string().contains("'s'"));
        let e = resolve(&raw(&[("nx", "abc")]), Some(Mode::Simulate)).unwrap_err();
        assert!(matches!(e, ConfigError::Value { .. }));
    }

    #[test]
    fn text_format() {
        let r = RawConfig::parse_text("# demo\nmode = reach\n\nT=2 # horizon\n").unwrap();
        assert_eq!(r.pairs, vec![("mode".into(), "reach".into()), ("T".into(), "2".into())]);
        assert!(matches!(
            RawConfig::parse_text("mode reach"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
    }
}
