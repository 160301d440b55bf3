//! Problem descriptions: what to compute, parsed from JSON files or inline
//! flags.
//!
//! The JSON schema is permissive about where the mode lives so that the
//! `mode` object embedded in result output can be fed straight back in:
//!
//! * `{"d": 3, "generators": [["0","1/3","0","0"]]}` — subgroup mode
//!   inferred from the `generators` key;
//! * `{"d": 2, "mode": "half_periods", "e1": [...], "e2": [...]}` — mode
//!   as a string with its fields alongside;
//! * `{"d": 2, "mode": {"kind": "half_periods", "e1": [...], "e2": [...]}}`
//!   — mode as a tagged object, exactly as emitted.
//!
//! Integers may be JSON numbers or strings; rationals are strings like
//! `"1/3"`. Errors carry the JSON field path.

use seshadri_core::arith::parse_rational;
use seshadri_core::lattice::{LatticeVector, PolarizedSurface, SubgroupPresentation};
use seshadri_core::{Integer, Rational};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mode {
    Subgroup(Vec<LatticeVector>),
    Torsion(Integer),
    HalfPeriods(LatticeVector, LatticeVector),
    GeneralPoints(Integer),
    Simple,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub surface: PolarizedSurface,
    pub mode: Mode,
}

impl Problem {
    /// The subgroup presentation whose orbit realizes this problem; used
    /// for the derivation trace and for verification. Torsion expands to
    /// the four generators of the m-torsion, half-period pairs to the
    /// difference vector, r general points to the cyclic degeneration.
    pub fn equivalent_presentation(&self) -> SubgroupPresentation {
        let gens = match &self.mode {
            Mode::Subgroup(gens) => gens.clone(),
            Mode::Torsion(m) => {
                let inv = Rational::new(Integer::from(1), m.clone());
                (0..4)
                    .map(|i| {
                        let mut coords: [Rational; 4] = Default::default();
                        coords[i] = inv.clone();
                        LatticeVector::new(coords)
                    })
                    .collect()
            }
            Mode::HalfPeriods(e1, e2) => vec![e2.sub(e1)],
            Mode::GeneralPoints(r) => {
                let mut coords: [Rational; 4] = Default::default();
                coords[0] = Rational::new(Integer::from(1), r.clone());
                vec![LatticeVector::new(coords)]
            }
            Mode::Simple => vec![],
        };
        SubgroupPresentation::new(self.surface.clone(), gens)
    }
}

pub fn parse_spec_file(path: &std::path::Path) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_spec_str(&text)
}

pub fn parse_spec_str(text: &str) -> Result<Problem, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = value
        .as_object()
        .ok_or_else(|| "top level: expected an object".to_string())?;

    let d = integer_field(obj.get("d").ok_or("d: missing")?, "d")?;
    let surface =
        PolarizedSurface::new(d).map_err(|e| format!("d: {e}"))?;

    // locate the mode: explicit string, tagged object, or inferred
    let (kind, fields, prefix): (String, &serde_json::Map<String, Value>, String) =
        match obj.get("mode") {
            None => {
                let kind = if obj.contains_key("generators") {
                    "subgroup"
                } else {
                    "simple"
                };
                (kind.to_string(), obj, String::new())
            }
            Some(Value::String(s)) => (s.clone(), obj, String::new()),
            Some(Value::Object(m)) => {
                let kind = m
                    .get("kind")
                    .and_then(Value::as_str)
                    .ok_or("mode.kind: missing or not a string")?;
                (kind.to_string(), m, "mode.".to_string())
            }
            Some(_) => return Err("mode: expected a string or an object".into()),
        };

    let field = |name: &str| -> Result<&Value, String> {
        fields
            .get(name)
            .ok_or_else(|| format!("{prefix}{name}: missing"))
    };

    let mode = match kind.as_str() {
        "subgroup" => {
            let gens_val = field("generators")?;
            let arr = gens_val
                .as_array()
                .ok_or_else(|| format!("{prefix}generators: expected an array"))?;
            let mut gens = Vec::with_capacity(arr.len());
            for (i, g) in arr.iter().enumerate() {
                gens.push(vector_field(g, &format!("{prefix}generators[{i}]"))?);
            }
            Mode::Subgroup(gens)
        }
        "torsion" => Mode::Torsion(integer_field(field("m")?, &format!("{prefix}m"))?),
        "half_periods" => Mode::HalfPeriods(
            vector_field(field("e1")?, &format!("{prefix}e1"))?,
            vector_field(field("e2")?, &format!("{prefix}e2"))?,
        ),
        "general_points" => {
            Mode::GeneralPoints(integer_field(field("r")?, &format!("{prefix}r"))?)
        }
        "simple" => Mode::Simple,
        other => {
            return Err(format!(
                "{prefix}kind: unknown mode {other:?} (expected subgroup, torsion, half_periods, general_points, or simple)"
            ))
        }
    };

    Ok(Problem { surface, mode })
}

fn integer_field(v: &Value, path: &str) -> Result<Integer, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Integer::from)
            .ok_or_else(|| format!("{path}: not an integer")),
        Value::String(s) => s
            .trim()
            .parse::<Integer>()
            .map_err(|_| format!("{path}: invalid integer {s:?}")),
        _ => Err(format!("{path}: expected an integer or a string")),
    }
}

fn vector_field(v: &Value, path: &str) -> Result<LatticeVector, String> {
    let arr = v
        .as_array()
        .ok_or_else(|| format!("{path}: expected an array of 4 rationals"))?;
    if arr.len() != 4 {
        return Err(format!("{path}: expected 4 coordinates, got {}", arr.len()));
    }
    let mut coords: [Rational; 4] = Default::default();
    for (i, c) in arr.iter().enumerate() {
        coords[i] = rational_field(c, &format!("{path}[{i}]"))?;
    }
    Ok(LatticeVector::new(coords))
}

fn rational_field(v: &Value, path: &str) -> Result<Rational, String> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| format!("{path}: {e}")),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from(Integer::from(i)))
            .ok_or_else(|| format!("{path}: not an integer")),
        _ => Err(format!("{path}: expected a rational string like \"1/3\"")),
    }
}

/// Parses an inline vector flag value: four comma-separated rationals.
pub fn parse_inline_vector(s: &str) -> Result<LatticeVector, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected 4 comma-separated rationals like \"0,1/3,0,0\", got {s:?}"
        ));
    }
    let mut coords: [Rational; 4] = Default::default();
    for (i, p) in parts.iter().enumerate() {
        coords[i] = parse_rational(p).map_err(|e| format!("coordinate {}: {e}", i + 1))?;
    }
    Ok(LatticeVector::new(coords))
}

pub fn parse_integer_arg(s: &str, what: &str) -> Result<Integer, String> {
    s.trim()
        .parse::<Integer>()
        .map_err(|_| format!("{what}: invalid integer {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use seshadri_core::arith::{int, rat};

    #[test]
    fn parses_subgroup_without_explicit_mode() {
        let p = parse_spec_str(r#"{"d":3,"generators":[["0","1/3","0","0"]]}"#).unwrap();
        assert_eq!(p.surface.d(), &int(3));
        match p.mode {
            Mode::Subgroup(gens) => {
                assert_eq!(gens.len(), 1);
                assert_eq!(gens[0].coords()[1], rat(1, 3));
            }
            other => panic!("wrong mode {other:?}"),
        }
    }

    #[test]
    fn parses_half_periods_with_string_mode() {
        let p = parse_spec_str(
            r#"{"d":2,"mode":"half_periods","e1":["0","0","0","0"],"e2":["0","1/2","0","0"]}"#,
        )
        .unwrap();
        assert!(matches!(p.mode, Mode::HalfPeriods(_, _)));
    }

    #[test]
    fn parses_tagged_mode_object() {
        let p = parse_spec_str(r#"{"d":"3","mode":{"kind":"torsion","m":"2"}}"#).unwrap();
        assert_eq!(p.surface.d(), &int(3));
        assert_eq!(p.mode, Mode::Torsion(int(2)));
    }

    #[test]
    fn infers_simple_mode() {
        let p = parse_spec_str(r#"{"d":1}"#).unwrap();
        assert_eq!(p.mode, Mode::Simple);
    }

    #[test]
    fn rejects_bad_degree_with_path() {
        let err = parse_spec_str(r#"{"d":0}"#).unwrap_err();
        assert!(err.starts_with("d:"), "{err}");
    }

    #[test]
    fn rejects_bad_rational_with_path() {
        let err =
            parse_spec_str(r#"{"d":3,"generators":[["0","x","0","0"]]}"#).unwrap_err();
        assert!(err.contains("generators[0][1]"), "{err}");
        let err =
            parse_spec_str(r#"{"d":3,"generators":[["0","1/0","0","0"]]}"#).unwrap_err();
        assert!(err.contains("zero denominator"), "{err}");
    }

    #[test]
    fn rejects_short_vectors() {
        let err = parse_spec_str(r#"{"d":3,"generators":[["0","1/3"]]}"#).unwrap_err();
        assert!(err.contains("4 coordinates"), "{err}");
    }

    #[test]
    fn rejects_unknown_mode() {
        let err = parse_spec_str(r#"{"d":3,"mode":"exotic"}"#).unwrap_err();
        assert!(err.contains("unknown mode"), "{err}");
    }

    #[test]
    fn inline_vector_parsing() {
        let v = parse_inline_vector("0,1/3,0,-1/2").unwrap();
        assert_eq!(v.coords()[1], rat(1, 3));
        assert_eq!(v.coords()[3], rat(-1, 2));
        assert!(parse_inline_vector("1,2,3").is_err());
        assert!(parse_inline_vector("1,2,3,x").is_err());
    }

    #[test]
    fn equivalent_presentations() {
        let p = parse_spec_str(r#"{"d":"3","mode":{"kind":"torsion","m":"2"}}"#).unwrap();
        let pres = p.equivalent_presentation();
        assert_eq!(pres.generators().len(), 4);

        let p = parse_spec_str(
            r#"{"d":2,"mode":"half_periods","e1":["0","0","0","0"],"e2":["0","1/2","0","0"]}"#,
        )
        .unwrap();
        let pres = p.equivalent_presentation();
        assert_eq!(pres.generators().len(), 1);
        assert_eq!(pres.generators()[0].coords()[1], rat(1, 2));

        let p = parse_spec_str(r#"{"d":1,"mode":{"kind":"general_points","r":"4"}}"#).unwrap();
        let pres = p.equivalent_presentation();
        assert_eq!(pres.generators()[0].coords()[0], rat(1, 4));
    }
}
