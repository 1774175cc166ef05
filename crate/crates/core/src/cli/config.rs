//! Device parameters from a `key=value` file, overridden by flags.

use std::path::Path;

use crate::error::{Error, Result};
use crate::model::DeviceParams;

/// Any subset of the four device constants.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamOverrides {
    pub g: Option<f64>,
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
    pub a0: Option<f64>,
}

impl ParamOverrides {
    /// Values in `self` win over `base`.
    pub fn over(self, base: ParamOverrides) -> ParamOverrides {
        ParamOverrides {
            g: self.g.or(base.g),
            mu1: self.mu1.or(base.mu1),
            mu2: self.mu2.or(base.mu2),
            a0: self.a0.or(base.a0),
        }
    }

    /// Fills gaps from the reference device and validates.
    pub fn resolve(self) -> Result<DeviceParams> {
        let r = DeviceParams::REFERENCE;
        DeviceParams::new(
            self.g.unwrap_or(r.g),
            self.mu1.unwrap_or(r.mu1),
            self.mu2.unwrap_or(r.mu2),
            self.a0.unwrap_or(r.a0),
        )
    }
}

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
/// Unknown or repeated keys are errors.
pub fn parse_config(text: &str) -> Result<ParamOverrides> {
    let mut out = ParamOverrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            msg: format!("expected key=value, got `{content}`"),
        })?;
        let key = key.trim();
        let value: f64 = value.trim().parse().map_err(|_| Error::Config {
            line,
            msg: format!("`{}` is not a number", value.trim()),
        })?;
        let slot = match key {
            "g" => &mut out.g,
            "mu1" => &mut out.mu1,
            "mu2" => &mut out.mu2,
            "a0" => &mut out.a0,
            other => {
                return Err(Error::Config {
                    line,
                    msg: format!("unknown key `{other}` (expected g, mu1, mu2, a0)"),
                })
            }
        };
        if slot.replace(value).is_some() {
            return Err(Error::Config {
                line,
                msg: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<ParamOverrides> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_whitespace() {
        let c = parse_config("# device\n g = 2.0 \n\nmu2=0.5 # trailing\n").unwrap();
        assert_eq!(
            c,
            ParamOverrides {
                g: Some(2.0),
                mu2: Some(0.5),
                ..Default::default()
            }
        );
    }

    #[test]
    fn reports_line_numbers() {
        assert_eq!(
            parse_config("g=1\nmu1 2\n"),
            Err(Error::Config {
                line: 2,
                msg: "expected key=value, got `mu1 2`".into()
            })
        );
        assert!(matches!(parse_config("a0=x"), Err(Error::Config { line: 1, .. })));
        assert!(matches!(parse_config("k=1"), Err(Error::Config { line: 1, .. })));
        assert!(matches!(parse_config("g=1\ng=2"), Err(Error::Config { line: 2, .. })));
    }

    #[test]
    fn flags_win_and_gaps_use_reference() {
        let file = parse_config("g=2\nmu1=5\nmu2=1\na0=3").unwrap();
        let flags = ParamOverrides {
            mu1: Some(6.0),
            ..Default::default()
        };
        let p = flags.over(file).resolve().unwrap();
        assert_eq!((p.g, p.mu1, p.mu2, p.a0), (2.0, 6.0, 1.0, 3.0));
        assert_eq!(ParamOverrides::default().resolve().unwrap(), DeviceParams::REFERENCE);
    }
}
