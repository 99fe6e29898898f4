//! Unit-suffixed quantities in device files.
//!
//! Any physical value may be written as a bare number (SI units) or as a
//! string with an explicit unit suffix, e.g. `"9.871 GHz"`, `"49 us"`,
//! `"80 fF"`. Suffixes are whitelisted per dimension to keep GHz/Hz and
//! pF/fF mistakes loud.

use super::ConfigError;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Frequency,
    Time,
    Capacitance,
    Inductance,
    Length,
    Resistance,
    /// Plain rate, 1/s.
    Rate,
    Dimensionless,
}

impl Dimension {
    fn suffixes(self) -> &'static [(&'static str, f64)] {
        match self {
            Dimension::Frequency => &[
                ("THz", 1e12),
                ("GHz", 1e9),
                ("MHz", 1e6),
                ("kHz", 1e3),
                ("Hz", 1.0),
            ],
            Dimension::Time => &[
                ("ms", 1e-3),
                ("us", 1e-6),
                ("ns", 1e-9),
                ("ps", 1e-12),
                ("s", 1.0),
            ],
            Dimension::Capacitance => &[
                ("uF", 1e-6),
                ("nF", 1e-9),
                ("pF", 1e-12),
                ("fF", 1e-15),
                ("aF", 1e-18),
                ("F", 1.0),
            ],
            Dimension::Inductance => &[
                ("uH", 1e-6),
                ("nH", 1e-9),
                ("pH", 1e-12),
                ("H", 1.0),
            ],
            Dimension::Length => &[
                ("cm", 1e-2),
                ("mm", 1e-3),
                ("um", 1e-6),
                ("nm", 1e-9),
                ("m", 1.0),
            ],
            Dimension::Resistance => &[
                ("GOhm", 1e9),
                ("MOhm", 1e6),
                ("kOhm", 1e3),
                ("Ohm", 1.0),
                ("ohm", 1.0),
            ],
            Dimension::Rate => &[("1/s", 1.0), ("/s", 1.0), ("Hz", 1.0)],
            Dimension::Dimensionless => &[],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Frequency => "frequency",
            Dimension::Time => "time",
            Dimension::Capacitance => "capacitance",
            Dimension::Inductance => "inductance",
            Dimension::Length => "length",
            Dimension::Resistance => "resistance",
            Dimension::Rate => "rate",
            Dimension::Dimensionless => "dimensionless",
        }
    }
}

/// Parses a JSON value as a quantity of the given dimension, returning SI.
pub fn parse_quantity(value: &Value, dim: Dimension, pointer: &str) -> Result<f64, ConfigError> {
    match value {
        Value::Number(n) => n.as_f64().ok_or_else(|| ConfigError {
            pointer: pointer.into(),
            message: "number out of range".into(),
        }),
        Value::String(s) => {
            let trimmed = s.trim();
            // longest suffix first so "Hz" does not shadow "GHz"
            for &(suffix, scale) in dim.suffixes() {
                if let Some(body) = trimmed.strip_suffix(suffix) {
                    let body = body.trim();
                    if body.is_empty() {
                        break;
                    }
                    return body.parse::<f64>().map(|v| v * scale).map_err(|_| ConfigError {
                        pointer: pointer.into(),
                        message: format!("cannot parse `{body}` as a number"),
                    });
                }
            }
            Err(ConfigError {
                pointer: pointer.into(),
                message: format!(
                    "`{trimmed}` is not a valid {} (allowed suffixes: {})",
                    dim.name(),
                    dim.suffixes()
                        .iter()
                        .map(|(s, _)| *s)
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            })
        }
        other => Err(ConfigError {
            pointer: pointer.into(),
            message: format!("expected a number or unit string, got {other}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use serde_json::json;

    #[test]
    fn bare_numbers_are_si() {
        let v = json!(9.871e9);
        assert_eq!(parse_quantity(&v, Dimension::Frequency, "/x").unwrap(), 9.871e9);
    }

    #[test]
    fn suffixes_scale() {
        assert_relative_eq!(
            parse_quantity(&json!("9.871 GHz"), Dimension::Frequency, "/x").unwrap(),
            9.871e9
        );
        assert_relative_eq!(
            parse_quantity(&json!("49 us"), Dimension::Time, "/x").unwrap(),
            49e-6
        );
        assert_relative_eq!(
            parse_quantity(&json!("-1.7 MHz"), Dimension::Frequency, "/x").unwrap(),
            -1.7e6
        );
        assert_relative_eq!(
            parse_quantity(&json!("80fF"), Dimension::Capacitance, "/x").unwrap(),
            80e-15
        );
        assert_relative_eq!(
            parse_quantity(&json!("2003 1/s"), Dimension::Rate, "/x").unwrap(),
            2003.0
        );
    }

    #[test]
    fn wrong_dimension_rejected() {
        let err = parse_quantity(&json!("5 GHz"), Dimension::Time, "/a/b").unwrap_err();
        assert_eq!(err.pointer, "/a/b");
        assert!(err.message.contains("not a valid time"));
    }

    #[test]
    fn ghz_not_shadowed_by_hz() {
        // "GHz" must match as a whole, not as "G" + "Hz"
        assert_eq!(
            parse_quantity(&json!("2 GHz"), Dimension::Frequency, "/x").unwrap(),
            2e9
        );
    }
}
