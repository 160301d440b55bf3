//! Result serialization. Key order is fixed by struct declaration order and
//! is part of the output contract (golden files depend on it); all exact
//! integers and rationals are serialized as strings because fundamental
//! Pell solutions overflow 64-bit JSON numbers routinely.

use crate::problem::{Mode, Problem};
use seshadri_core::arith::decimal_string;
use seshadri_core::descent::gram_matrix;
use seshadri_core::lattice::{superlattice, LatticeVector};
use seshadri_core::pell::{cf_expand, PellSolution};
use seshadri_core::seshadri::{CaseTag, SeshadriResult, RHO_ONE_ASSUMPTION};
use serde::Serialize;

/// Number of significant digits in the display-only decimal rendering.
const DECIMAL_SIG: usize = 12;

#[derive(Serialize)]
pub struct ResultJson {
    d: String,
    mode: ModeJson,
    g: String,
    exponent: String,
    invariant_factors: Vec<String>,
    n: String,
    d_prime: String,
    #[serde(rename = "type_of_M")]
    type_of_m: [String; 2],
    case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pell: Option<PellJson>,
    epsilon: String,
    epsilon_decimal: String,
    upper_bound_squared: String,
    is_lower_bound: bool,
    assumptions: Vec<String>,
}

#[derive(Serialize)]
pub struct PellJson {
    #[serde(rename = "D")]
    d: String,
    l0: String,
    k0: String,
}

impl From<&PellSolution> for PellJson {
    fn from(sol: &PellSolution) -> Self {
        Self {
            d: sol.d.to_string(),
            l0: sol.l0.to_string(),
            k0: sol.k0.to_string(),
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeJson {
    Subgroup { generators: Vec<[String; 4]> },
    Torsion { m: String },
    HalfPeriods { e1: [String; 4], e2: [String; 4] },
    GeneralPoints { r: String },
    Simple,
}

fn vector_strings(v: &LatticeVector) -> [String; 4] {
    let c = v.coords();
    [0, 1, 2, 3].map(|i| c[i].to_string())
}

impl From<&Mode> for ModeJson {
    fn from(mode: &Mode) -> Self {
        match mode {
            Mode::Subgroup(gens) => ModeJson::Subgroup {
                generators: gens.iter().map(|g| vector_strings(&g.canonicalized())).collect(),
            },
            Mode::Torsion(m) => ModeJson::Torsion { m: m.to_string() },
            Mode::HalfPeriods(e1, e2) => ModeJson::HalfPeriods {
                e1: vector_strings(&e1.canonicalized()),
                e2: vector_strings(&e2.canonicalized()),
            },
            Mode::GeneralPoints(r) => ModeJson::GeneralPoints { r: r.to_string() },
            Mode::Simple => ModeJson::Simple,
        }
    }
}

pub fn result_json(problem: &Problem, r: &SeshadriResult) -> ResultJson {
    ResultJson {
        d: r.trace.d.to_string(),
        mode: ModeJson::from(&problem.mode),
        g: r.trace.g.to_string(),
        exponent: r.trace.exponent.to_string(),
        invariant_factors: r.trace.invariant_factors.iter().map(|f| f.to_string()).collect(),
        n: r.trace.n.to_string(),
        d_prime: r.trace.d_prime.to_string(),
        type_of_m: [r.trace.type_of_m.0.to_string(), r.trace.type_of_m.1.to_string()],
        case: match r.case {
            CaseTag::Square => "square".to_string(),
            CaseTag::Pell => "pell".to_string(),
        },
        pell: r.pell.as_ref().map(PellJson::from),
        epsilon: r.epsilon.to_string(),
        epsilon_decimal: decimal_string(&r.epsilon, DECIMAL_SIG),
        upper_bound_squared: r.upper_bound_squared.to_string(),
        is_lower_bound: r.is_lower_bound,
        assumptions: vec![RHO_ONE_ASSUMPTION.to_string()],
    }
}

pub fn to_json_string(r: &ResultJson) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("result serializes");
    s.push('\n');
    s
}

pub fn pell_json_string(sol: &PellSolution) -> String {
    let mut s = serde_json::to_string(&PellJson::from(sol)).expect("solution serializes");
    s.push('\n');
    s
}

fn mode_description(mode: &Mode) -> String {
    match mode {
        Mode::Subgroup(gens) => {
            let list: Vec<String> = gens.iter().map(|g| g.canonicalized().to_string()).collect();
            format!("subgroup generated by {}", list.join(", "))
        }
        Mode::Torsion(m) => format!("full {m}-torsion subgroup"),
        Mode::HalfPeriods(e1, e2) => format!(
            "half-period pair {} and {}",
            e1.canonicalized(),
            e2.canonicalized()
        ),
        Mode::GeneralPoints(r) => format!("{r} very general points (lower bound)"),
        Mode::Simple => "single point".to_string(),
    }
}

/// Step-by-step derivation for `--output text`.
pub fn render_text(problem: &Problem, r: &SeshadriResult) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let t = &r.trace;

    writeln!(out, "Multiple Seshadri constant (assuming rho = 1)").unwrap();
    writeln!(out, "d = {}, {}", t.d, mode_description(&problem.mode)).unwrap();
    writeln!(
        out,
        "Subgroup: order g = {}, exponent {}, invariant factors [{}]",
        t.g,
        t.exponent,
        t.invariant_factors
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    )
    .unwrap();

    let presentation = problem.equivalent_presentation();
    let basis = superlattice(&presentation);
    writeln!(out, "Superlattice basis (rows, lambda1 lambda2 mu1 mu2 coordinates):").unwrap();
    for row in basis.rows() {
        writeln!(
            out,
            "  [{}]",
            row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        )
        .unwrap();
    }
    writeln!(out, "Gram matrix of the polarization form on that basis:").unwrap();
    for row in gram_matrix(&problem.surface, &basis) {
        writeln!(
            out,
            "  [{}]",
            row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        )
        .unwrap();
    }
    writeln!(
        out,
        "Descent: minimal n = {} with nE integral; M of type ({}, {}), d' = n^2 d / g = {}",
        t.n, t.type_of_m.0, t.type_of_m.1, t.d_prime
    )
    .unwrap();

    match (&r.case, &r.pell) {
        (CaseTag::Square, _) => {
            writeln!(
                out,
                "Square case: 2d' = {} is a perfect square, epsilon = sqrt(2d')/n = sqrt(2d/g)",
                &t.d_prime * &seshadri_core::arith::int(2)
            )
            .unwrap();
        }
        (CaseTag::Pell, Some(sol)) => {
            let cf = cf_expand(&sol.d).expect("non-square discriminant");
            writeln!(
                out,
                "Pell equation: l^2 - {} k^2 = 1 (D = 2d'), sqrt(D) = [{}; {}]",
                sol.d,
                cf.a0,
                cf.period
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
            .unwrap();
            writeln!(out, "Fundamental solution: (l0, k0) = ({}, {})", sol.l0, sol.k0).unwrap();
            writeln!(
                out,
                "Formula: epsilon = (k0/l0) * 2dn/g = ({}/{}) * {}",
                sol.k0,
                sol.l0,
                seshadri_core::Rational::new(
                    seshadri_core::arith::int(2) * &t.d * &t.n,
                    t.g.clone()
                )
            )
            .unwrap();
        }
        (CaseTag::Pell, None) => unreachable!("pell case carries a solution"),
    }

    let relation = if r.is_lower_bound { ">=" } else { "=" };
    writeln!(
        out,
        "epsilon {} {} ~ {}",
        relation,
        r.epsilon,
        decimal_string(&r.epsilon, DECIMAL_SIG)
    )
    .unwrap();
    writeln!(
        out,
        "Elementary upper bound: epsilon <= sqrt(2d/g) = sqrt({})",
        r.upper_bound_squared
    )
    .unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_spec_str;
    use seshadri_core::seshadri::torsion_constant;
    use seshadri_core::arith::int;

    #[test]
    fn json_key_order_is_fixed() {
        let problem = parse_spec_str(r#"{"d":3,"mode":{"kind":"torsion","m":"2"}}"#).unwrap();
        let r = torsion_constant(&int(3), &int(2)).unwrap();
        let s = to_json_string(&result_json(&problem, &r));
        let positions: Vec<usize> = [
            "\"d\"",
            "\"mode\"",
            "\"g\"",
            "\"exponent\"",
            "\"invariant_factors\"",
            "\"n\"",
            "\"d_prime\"",
            "\"type_of_M\"",
            "\"case\"",
            "\"pell\"",
            "\"epsilon\"",
            "\"epsilon_decimal\"",
            "\"upper_bound_squared\"",
            "\"is_lower_bound\"",
            "\"assumptions\"",
        ]
        .iter()
        .map(|k| s.find(k).unwrap_or_else(|| panic!("{k} missing in {s}")))
        .collect();
        for w in positions.windows(2) {
            assert!(w[0] < w[1], "key order broken in {s}");
        }
        assert!(s.contains("\"epsilon\": \"3/5\""));
        assert!(s.contains("\"D\": \"6\""));
        assert!(s.ends_with('\n'));
    }

    #[test]
    fn square_case_omits_pell() {
        let problem = parse_spec_str(r#"{"d":2}"#).unwrap();
        let r = seshadri_core::bauer_simple(&int(2)).unwrap();
        let s = to_json_string(&result_json(&problem, &r));
        assert!(!s.contains("\"pell\""));
        assert!(s.contains("\"case\": \"square\""));
        assert!(s.contains("\"epsilon\": \"2\""));
        assert!(s.contains("\"epsilon_decimal\": \"2.00000000000\""));
    }

    #[test]
    fn text_output_mentions_each_step() {
        let problem = parse_spec_str(r#"{"d":3,"mode":{"kind":"torsion","m":"2"}}"#).unwrap();
        let r = torsion_constant(&int(3), &int(2)).unwrap();
        let text = render_text(&problem, &r);
        for needle in [
            "d = 3",
            "order g = 16",
            "Superlattice basis",
            "Gram matrix",
            "minimal n = 4",
            "d' = n^2 d / g = 3",
            "l^2 - 6 k^2 = 1",
            "[2; 2, 4]",
            "(l0, k0) = (5, 2)",
            "epsilon = 3",
            "sqrt(3/8)",
        ] {
            assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
        }
    }

    #[test]
    fn pell_line_format() {
        let sol = seshadri_core::pell::fundamental_solution(&int(2)).unwrap();
        assert_eq!(pell_json_string(&sol), "{\"D\":\"2\",\"l0\":\"3\",\"k0\":\"2\"}\n");
    }
}
