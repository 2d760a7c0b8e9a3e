//! Geometry files: `key = value` lines, `#` comments, numbers read as exact
//! decimals (or `p/q` fractions).
//!
//! Three ways to give the platform angle are accepted:
//!
//! * `d1`, `d2`, `d3` and optionally `beta_sign` (`+`/`-`, default `+`);
//! * `d1`, `d3`, `beta_degrees`;
//! * `d1`, `d3`, `betax`, `betay` with `betax^2 + betay^2 = 1` exactly,
//!   optionally with `d2_nominal` recording the side the angle was fitted
//!   to.
//!
//! The base keys `A2x`, `A3x`, `A3y` are always required. `beta_tol` sets
//! the snapping tolerance for the first two forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{GeometryError, ParseError};
use crate::model::geometry::{beta_from_degrees, default_beta_tol};
use crate::model::{Geometry, Orientation};
use crate::numeric::{format_rational, parse_rational, Rational};

const KEYS: [&str; 12] = [
    "A2x",
    "A3x",
    "A3y",
    "d1",
    "d2",
    "d3",
    "beta_sign",
    "beta_degrees",
    "betax",
    "betay",
    "beta_tol",
    "d2_nominal",
];

pub fn parse_geometry_config(text: &str) -> Result<Geometry, GeometryError> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| config_err(line_no, format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let value = value.trim().trim_matches('"');
        if !KEYS.contains(&key) {
            return Err(config_err(line_no, format!("unknown key `{key}`")).into());
        }
        if entries.insert(key, (line_no, value)).is_some() {
            return Err(config_err(line_no, format!("duplicate key `{key}`")).into());
        }
    }

    let num = |key: &str| -> Result<Option<Rational>, GeometryError> {
        match entries.get(key) {
            None => Ok(None),
            Some(&(line, v)) => parse_rational(v)
                .map(Some)
                .map_err(|e| config_err(line, e.to_string()).into()),
        }
    };
    let required = |key: &str| -> Result<Rational, GeometryError> {
        num(key)?.ok_or_else(|| ParseError::MissingKey(key.to_string()).into())
    };

    let a2x = required("A2x")?;
    let a3x = required("A3x")?;
    let a3y = required("A3y")?;
    let d1 = required("d1")?;
    let d3 = required("d3")?;
    let tol = num("beta_tol")?.unwrap_or_else(default_beta_tol);

    let has = |k: &str| entries.contains_key(k);
    let forms = [has("d2"), has("beta_degrees"), has("betax") || has("betay")];
    if forms.iter().filter(|&&f| f).count() != 1 {
        return Err(GeometryError::Invalid(
            "give exactly one of: d2 (with optional beta_sign), beta_degrees, or betax + betay".into(),
        ));
    }
    if has("d2_nominal") && !has("betax") {
        return Err(GeometryError::Invalid("d2_nominal only applies together with betax + betay".into()));
    }
    if has("beta_sign") && !has("d2") {
        return Err(GeometryError::Invalid("beta_sign only applies together with d2".into()));
    }

    if let Some(d2) = num("d2")? {
        let orientation = match entries.get("beta_sign") {
            None => Orientation::CounterClockwise,
            Some(&(line, s)) => parse_sign(s).ok_or_else(|| config_err(line, format!("bad beta_sign `{s}`")))?,
        };
        return Geometry::from_sides(a2x, a3x, a3y, d1, d2, d3, orientation, &tol);
    }
    if let Some(&(line, text)) = entries.get("beta_degrees") {
        let deg: f64 = text
            .parse()
            .map_err(|_| config_err(line, format!("bad beta_degrees `{text}`")))?;
        let (bx, by) = beta_from_degrees(deg, &tol)?;
        return Geometry::from_beta(a2x, a3x, a3y, d1, d3, bx, by);
    }
    let bx = required("betax")?;
    let by = required("betay")?;
    let mut g = Geometry::from_beta(a2x, a3x, a3y, d1, d3, bx, by)?;
    g.d2_nominal = num("d2_nominal")?;
    Ok(g)
}

fn parse_sign(s: &str) -> Option<Orientation> {
    match s {
        "+" | "+1" | "1" | "ccw" | "positive" => Some(Orientation::CounterClockwise),
        "-" | "-1" | "cw" | "negative" => Some(Orientation::Clockwise),
        _ => None,
    }
}

fn config_err(line: usize, message: String) -> ParseError {
    ParseError::Config { line, message }
}

impl Geometry {
    /// Exact dump in the unit-point form; parses back to an identical
    /// geometry.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# 3-RPR geometry (exact values)");
        let _ = writeln!(out, "# implied d2 = {:.15}", self.d2_f64());
        for (k, v) in [
            ("A2x", &self.a2x),
            ("A3x", &self.a3x),
            ("A3y", &self.a3y),
            ("d1", &self.d1),
            ("d3", &self.d3),
            ("betax", &self.beta_x),
            ("betay", &self.beta_y),
        ] {
            let _ = writeln!(out, "{k} = {}", format_rational(v));
        }
        if let Some(d2) = &self.d2_nominal {
            let _ = writeln!(out, "d2_nominal = {}", format_rational(d2));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational::ratio;

    const BENCH: &str = "# benchmark\nA2x = 15.91\nA3x = 0\nA3y = 10\nd1 = 17.04\nd2 = 16.54\nd3 = 20.84\n";

    #[test]
    fn sides_form_matches_builtin_benchmark() {
        let g = parse_geometry_config(BENCH).unwrap();
        let mut b = Geometry::benchmark();
        b.d2_nominal = g.d2_nominal.clone();
        assert_eq!(g, b);
        assert_eq!(g.a2x, ratio(1591, 100));
    }

    #[test]
    fn dump_round_trips_exactly() {
        let g = parse_geometry_config(BENCH).unwrap();
        let again = parse_geometry_config(&g.to_config_string()).unwrap();
        assert_eq!(again, g);
        assert_eq!(again.d2_nominal, Some(ratio(1654, 100)));
        assert!(parse_geometry_config(&format!("{BENCH}d2_nominal = 1\n")).is_err());
        let twice = parse_geometry_config(&again.to_config_string()).unwrap();
        assert_eq!(twice, again);
    }

    #[test]
    fn degrees_form() {
        let text = "A2x=11\nA3x=7\nA3y=10\nd1=5\nd3=5\nbeta_degrees=-37\n";
        let g = parse_geometry_config(text).unwrap();
        assert_eq!(g.orientation(), Orientation::Clockwise);
    }

    #[test]
    fn sign_flag() {
        let g = parse_geometry_config(&format!("{BENCH}beta_sign = -\n")).unwrap();
        assert_eq!(g.orientation(), Orientation::Clockwise);
    }

    #[test]
    fn errors_carry_context() {
        assert!(matches!(
            parse_geometry_config("A2x = 1\nA3x = 0\nA3y = 1\nd1 = 1\nd3 = 1\n"),
            Err(GeometryError::Invalid(_))
        ));
        assert!(matches!(
            parse_geometry_config("A3x = 0\nA3y = 1\nd1 = 1\nd2 = 1\nd3 = 1\n"),
            Err(GeometryError::Parse(ParseError::MissingKey(_)))
        ));
        assert!(matches!(
            parse_geometry_config("A2x = 1.2.3\n"),
            Err(GeometryError::Parse(ParseError::Config { line: 1, .. }))
        ));
        assert!(matches!(
            parse_geometry_config("bogus = 1\n"),
            Err(GeometryError::Parse(ParseError::Config { .. }))
        ));
        assert!(matches!(
            parse_geometry_config("A2x = 1\nA3x = 0\nA3y = 1\nd1 = 1\nd2 = 3\nd3 = 1\n"),
            Err(GeometryError::DegenerateTriangle(_))
        ));
    }
}
