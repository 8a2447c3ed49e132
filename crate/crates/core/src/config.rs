//! Line-oriented system description.
//!
//! ```text
//! [system]
//! T = 1
//!
//! [a]
//! kind = trig
//! c0 = 2.0102
//! harmonic = 1, 0, 0.01
//!
//! [b]
//! kind = const
//! value = 1
//! ```
//!
//! Sections `[a]` through `[f]` are all required. `#` starts a comment.

use std::fmt::Write as _;

use crate::coeffs::{Harmonic, PeriodicCoefficient, SystemSpec};
use crate::error::{Error, Result};

const NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Const,
    Trig,
}

#[derive(Debug, Default)]
struct CoeffDraft {
    kind: Option<Kind>,
    value: Option<f64>,
    c0: Option<f64>,
    harmonics: Vec<Harmonic>,
    line: usize,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn parse_number(text: &str, line: usize, column: usize) -> Result<f64> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| parse_err(line, column, format!("expected a number, found {:?}", text.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(line, column, "number must be finite"));
    }
    Ok(v)
}

/// Column (1-based, in characters) of `part` inside `line`.
fn column_of(line: &str, part: &str) -> usize {
    let offset = part.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

pub fn parse_config(text: &str) -> Result<SystemSpec> {
    let mut period: Option<f64> = None;
    let mut seen_system = false;
    let mut drafts: [Option<CoeffDraft>; 6] = Default::default();
    // None before any section, Some(None) inside [system], Some(Some(i)) inside a coefficient
    let mut section: Option<Option<usize>> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = column_of(raw, trimmed);
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(parse_err(lineno, col, "unterminated section header"));
            };
            let name = name.trim();
            if name == "system" {
                if seen_system {
                    return Err(parse_err(lineno, col, "duplicate section [system]"));
                }
                seen_system = true;
                section = Some(None);
            } else if let Some(i) = NAMES.iter().position(|n| *n == name) {
                if drafts[i].is_some() {
                    return Err(parse_err(lineno, col, format!("duplicate section [{name}]")));
                }
                drafts[i] = Some(CoeffDraft { line: lineno, ..Default::default() });
                section = Some(Some(i));
            } else {
                return Err(parse_err(lineno, col, format!("unknown section [{name}]")));
            }
            continue;
        }

        let Some((key_part, value_part)) = content.split_once('=') else {
            return Err(parse_err(lineno, col, "expected `key = value`"));
        };
        let key = key_part.trim();
        let value = value_part.trim();
        let vcol = if value.is_empty() { raw.chars().count() + 1 } else { column_of(raw, value) };
        match section {
            None => return Err(parse_err(lineno, col, "key outside of any section")),
            Some(None) => match key {
                "T" => {
                    if period.is_some() {
                        return Err(parse_err(lineno, col, "duplicate key T"));
                    }
                    period = Some(parse_number(value, lineno, vcol)?);
                }
                _ => return Err(parse_err(lineno, col, format!("unknown key {key:?} in [system]"))),
            },
            Some(Some(i)) => {
                let draft = drafts[i].as_mut().expect("section opened");
                match key {
                    "kind" => {
                        if draft.kind.is_some() {
                            return Err(parse_err(lineno, col, "duplicate key kind"));
                        }
                        draft.kind = Some(match value {
                            "const" => Kind::Const,
                            "trig" => Kind::Trig,
                            _ => return Err(parse_err(lineno, vcol, format!("kind must be const or trig, found {value:?}"))),
                        });
                    }
                    "value" | "c0" => {
                        let slot = if key == "value" { &mut draft.value } else { &mut draft.c0 };
                        if slot.is_some() {
                            return Err(parse_err(lineno, col, format!("duplicate key {key}")));
                        }
                        *slot = Some(parse_number(value, lineno, vcol)?);
                    }
                    "harmonic" => {
                        let fields: Vec<&str> = value.split(',').collect();
                        if fields.len() != 3 {
                            return Err(parse_err(lineno, vcol, "harmonic needs `k, cos, sin`"));
                        }
                        let kcol = column_of(raw, fields[0].trim_start());
                        let k: u32 = fields[0]
                            .trim()
                            .parse()
                            .ok()
                            .filter(|&k| k > 0)
                            .ok_or_else(|| parse_err(lineno, kcol, "harmonic order must be a positive integer"))?;
                        let cos = parse_number(fields[1], lineno, column_of(raw, fields[1]))?;
                        let sin = parse_number(fields[2], lineno, column_of(raw, fields[2]))?;
                        draft.harmonics.push(Harmonic::new(k, cos, sin));
                    }
                    _ => return Err(parse_err(lineno, col, format!("unknown key {key:?} in [{}]", NAMES[i]))),
                }
            }
        }
    }

    let period = period.ok_or_else(|| parse_err(text.lines().count().max(1), 1, "missing [system] key T"))?;
    let mut coeffs = Vec::with_capacity(6);
    for (i, draft) in drafts.into_iter().enumerate() {
        let name = NAMES[i];
        let Some(d) = draft else {
            return Err(parse_err(text.lines().count().max(1), 1, format!("missing section [{name}]")));
        };
        let coef = match d.kind {
            None => return Err(parse_err(d.line, 1, format!("section [{name}] has no kind"))),
            Some(Kind::Const) => {
                if d.c0.is_some() || !d.harmonics.is_empty() {
                    return Err(parse_err(d.line, 1, format!("[{name}] is const but has trig keys")));
                }
                let v = d.value.ok_or_else(|| parse_err(d.line, 1, format!("[{name}] is const but has no value")))?;
                PeriodicCoefficient::constant(v)
            }
            Some(Kind::Trig) => {
                if d.value.is_some() {
                    return Err(parse_err(d.line, 1, format!("[{name}] is trig but has a value key")));
                }
                let c0 = d.c0.ok_or_else(|| parse_err(d.line, 1, format!("[{name}] is trig but has no c0")))?;
                PeriodicCoefficient::trig(c0, d.harmonics)
                    .map_err(|e| Error::Validation(format!("coefficient {name}: {e}")))?
            }
        };
        coeffs.push(coef);
    }
    let [a, b, c, d, e, f]: [PeriodicCoefficient; 6] = coeffs.try_into().expect("six coefficients");
    SystemSpec::new(period, a, b, c, d, e, f)
}

/// Text that [`parse_config`] reads back to the same system; numbers carry
/// 17 significant digits.
pub fn print_config(spec: &SystemSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[system]\nT = {:.16e}", spec.period);
    for (name, coef) in spec.coefficients() {
        let _ = writeln!(out, "\n[{name}]");
        match coef {
            PeriodicCoefficient::Constant(v) => {
                let _ = writeln!(out, "kind = const\nvalue = {v:.16e}");
            }
            PeriodicCoefficient::Trigonometric { c0, harmonics } => {
                let _ = writeln!(out, "kind = trig\nc0 = {c0:.16e}");
                for h in harmonics {
                    let _ = writeln!(out, "harmonic = {}, {:.16e}, {:.16e}", h.k, h.cos_coeff, h.sin_coeff);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const WORKED_TEXT: &str = "\
[system]
T = 1
[a]
kind = const
value = 2.0102
[b]
kind = const
value = 1
[c]
kind = const
value = 0.0051
[d]
kind = const
value = 2.0203
[e]
kind = const
value = 0.9898
[f]
kind = const
value = 2
";

    #[test]
    fn parses_worked_example() {
        assert_eq!(parse_config(WORKED_TEXT).unwrap(), SystemSpec::worked_example(1.0));
    }

    #[test]
    fn rejects_negative_c() {
        let text = WORKED_TEXT.replace("value = 0.0051", "value = -0.1");
        match parse_config(&text) {
            Err(Error::Validation(msg)) => assert!(msg.contains("c_L > 0"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_trig_coefficient() {
        let text = WORKED_TEXT.replace(
            "[a]\nkind = const\nvalue = 2.0102",
            "[a]\nkind = trig  # perturbed\nc0 = 2.0102\nharmonic = 1, 0, 0.01",
        );
        let spec = parse_config(&text).unwrap();
        assert!((spec.a.eval(1.0, 0.25) - 2.0202).abs() < 1e-12);
    }

    #[test]
    fn reports_line_and_column() {
        let text = WORKED_TEXT.replace("value = 0.9898", "value = 0.98x8");
        match parse_config(&text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (17, 9)),
            other => panic!("{other:?}"),
        }
        match parse_config("[system]\n  T 1\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config(&WORKED_TEXT.replace("[f]", "[g]")), Err(Error::Parse { line: 18, .. })));
        assert!(matches!(parse_config(&WORKED_TEXT.replace("[e]\nkind = const\nvalue = 0.9898\n", "")), Err(Error::Parse { .. })));
    }

    #[test]
    fn round_trip_worked_example() {
        let spec = SystemSpec::worked_example(0.1);
        assert_eq!(parse_config(&print_config(&spec)).unwrap(), spec);
    }

    fn arb_coeff(positive: bool) -> impl Strategy<Value = PeriodicCoefficient> {
        let lo = if positive { 1.0 } else { -5.0 };
        prop_oneof![
            (lo..5.0f64).prop_map(PeriodicCoefficient::constant),
            (lo..5.0f64, proptest::collection::vec((-0.3..0.3f64, -0.3..0.3f64), 0..3)).prop_map(|(c0, hs)| {
                let harmonics = hs.into_iter().enumerate().map(|(i, (c, s))| Harmonic::new(i as u32 + 1, c, s)).collect();
                PeriodicCoefficient::trig(c0, harmonics).unwrap()
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn round_trip_is_exact(
            period in 0.01..10.0f64,
            a in arb_coeff(false), b in arb_coeff(true), c in arb_coeff(true),
            d in arb_coeff(false), e in arb_coeff(true), f in arb_coeff(true),
        ) {
            let spec = SystemSpec::new(period, a, b, c, d, e, f).unwrap();
            prop_assert_eq!(parse_config(&print_config(&spec)).unwrap(), spec);
        }
    }
}
