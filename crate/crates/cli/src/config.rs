//! Line-oriented `key=value` run configuration.

use cyclohc::dunkl::Convention;
use cyclohc::scalars::{rat, Rational};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

type Res<T> = std::result::Result<T, ConfigError>;

const KEYS: &[&str] = &[
    "n",
    "ell",
    "k",
    "c",
    "C",
    "lambda",
    "x",
    "M",
    "D_max",
    "N",
    "samples",
    "seed",
    "alpha_action",
    "c_sign",
    "degree_bound",
    "ell_max",
    "m_max",
    "quadrature",
    "normalization",
    "tolerance",
];

/// Raw entries, echoed into every report.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub entries: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Res<Self> {
        let mut entries = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key=value", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(ConfigError(format!("line {}: unknown key '{}'", no + 1, k)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(ConfigError(format!("line {}: duplicate key '{}'", no + 1, k)));
            }
        }
        let cfg = RunConfig { entries };
        if cfg.has("c") && cfg.has("C") {
            return Err(ConfigError("'c' and 'C' are mutually exclusive".into()));
        }
        Ok(cfg)
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Res<T> {
        match self.entries.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| ConfigError(format!("cannot parse {} = '{}'", key, v))),
        }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Res<Option<Vec<T>>> {
        let Some(v) = self.entries.get(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| ConfigError(format!("cannot parse entry '{}' of {}", s.trim(), key)))
            })
            .collect::<Res<Vec<T>>>()
            .map(Some)
    }

    /// Points separated by `;`, coordinates by `,`.
    pub fn points(&self, key: &str, n: usize) -> Res<Option<Vec<Vec<f64>>>> {
        let Some(v) = self.entries.get(key) else {
            return Ok(None);
        };
        let mut out = Vec::new();
        for p in v.split(';') {
            let coords: Vec<f64> = p
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| ConfigError(format!("bad coordinate '{}' in {}", s, key)))
                })
                .collect::<Res<_>>()?;
            if coords.len() != n {
                return Err(ConfigError(format!(
                    "point '{}' in {} must have {} coordinates",
                    p.trim(),
                    key,
                    n
                )));
            }
            out.push(coords);
        }
        Ok(Some(out))
    }

    pub fn rationals(&self, key: &str) -> Res<Option<Vec<Rational>>> {
        self.list::<String>(key)?
            .map(|v| {
                v.iter()
                    .map(|s| {
                        if let Ok(i) = s.parse::<i64>() {
                            return Ok(rat(i, 1));
                        }
                        s.parse::<Rational>()
                            .map_err(|_| ConfigError(format!("cannot parse rational '{}' in {}", s, key)))
                    })
                    .collect()
            })
            .transpose()
    }

    /// Convention flags, or `None` if neither flag is set.
    pub fn convention(&self) -> Res<Option<Convention>> {
        if !self.has("alpha_action") && !self.has("c_sign") {
            return Ok(None);
        }
        let a: i8 = self.get("alpha_action", 1)?;
        let s: i8 = self.get("c_sign", -1)?;
        if a.abs() != 1 || s.abs() != 1 {
            return Err(ConfigError("alpha_action and c_sign must be +1 or -1".into()));
        }
        Ok(Some(Convention::new(a, s)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let c = RunConfig::parse("n=2\n# comment\nell = 3\nC=-1,0,1\nx=0.5,1;1,2\n").unwrap();
        assert_eq!(c.get("n", 0usize).unwrap(), 2);
        assert_eq!(c.list::<i64>("C").unwrap(), Some(vec![-1, 0, 1]));
        assert_eq!(c.points("x", 2).unwrap().unwrap().len(), 2);
        assert!(RunConfig::parse("c=1\nC=0,0").is_err());
        assert!(RunConfig::parse("bogus=1").is_err());
        assert!(RunConfig::parse("n").is_err());
        let r = RunConfig::parse("c=1/3,2").unwrap().rationals("c").unwrap().unwrap();
        assert_eq!(r, vec![rat(1, 3), rat(2, 1)]);
    }
}
