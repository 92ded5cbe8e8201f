//! Canonical report construction. Reports contain only strings, integers,
//! and booleans (never JSON floats), so a parse/serialize round trip is
//! byte-identical; keys serialize in sorted order.

use num_complex::Complex64;
use serde_json::{json, Value};

use lidstone::delta::DeltaProfile;
use lidstone::detector::{Outcome, Verdict, Violation};
use lidstone::entire::ExpansionResult;
use lidstone::gontcharoff::{GontcharoffExpansion, OmegaTable};
use lidstone::poly::Polynomial;
use lidstone::scalar::ExactScalar;
use lidstone::{BasisTable, NodeSystem};

/// 17 significant digits: enough for an exact f64 round trip, fixed width.
fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

fn complex17(z: Complex64) -> Value {
    json!({ "re": f17(z.re), "im": f17(z.im) })
}

fn exact_poly(p: &Polynomial<ExactScalar>) -> Value {
    json!({
        "coefficients": p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "display": p.to_string(),
    })
}

fn approx_poly(p: &Polynomial<Complex64>) -> Value {
    Value::Array(p.coeffs().iter().map(|&c| complex17(c)).collect())
}

pub fn basis_report(nodes: &NodeSystem, basis: &BasisTable) -> Value {
    let lambda: Vec<Value> = (0..=basis.n_max())
        .flat_map(|n| {
            (0..nodes.m()).map(move |j| (n, j))
        })
        .map(|(n, j)| {
            let mut v = exact_poly(basis.lambda(n, j));
            v["n"] = json!(n);
            v["j"] = json!(j);
            v
        })
        .collect();
    json!({
        "command": "basis",
        "m": nodes.m(),
        "nodes": nodes.nodes().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "residues": nodes.residues(),
        "determinant": nodes.determinant().to_string(),
        "admissible": nodes.is_admissible(),
        "lambda": lambda,
    })
}

pub fn delta_report(profile: &DeltaProfile) -> Value {
    json!({
        "command": "delta",
        "origin_order": profile.origin_order,
        "zero_free_radius": f17(profile.zero_free_radius),
        "search_radius": f17(profile.search_radius),
        "contour_samples": profile.contour_samples,
    })
}

pub fn expand_report(exp: &ExpansionResult) -> Value {
    let coefficients: Vec<Value> = exp
        .coeffs
        .iter()
        .enumerate()
        .flat_map(|(n, row)| {
            row.iter().enumerate().map(move |(j, &a)| {
                let mut v = complex17(a);
                v["n"] = json!(n);
                v["j"] = json!(j);
                v
            })
        })
        .collect();
    json!({
        "command": "expand",
        "n_truncation": exp.n_truncation,
        "rho": f17(exp.rho),
        "zero_free_radius": f17(exp.zero_free_radius),
        "coefficients": coefficients,
        "partial_sum": approx_poly(&exp.partial_sum),
    })
}

pub fn gontcharoff_report(table: &OmegaTable, expansion: Option<&GontcharoffExpansion>) -> Value {
    let omega: Vec<Value> = (0..table.len())
        .map(|n| {
            let mut v = exact_poly(table.omega(n));
            v["n"] = json!(n);
            v
        })
        .collect();
    let mut out = json!({
        "command": "gontcharoff",
        "omega": omega,
    });
    if let Some(exp) = expansion {
        out["expansion"] = json!({
            "n_truncation": exp.n_truncation,
            "radius": f17(exp.radius),
            "tail_bound": f17(exp.tail_bound),
            "coefficients": exp.coeffs.iter().map(|&a| complex17(a)).collect::<Vec<_>>(),
            "partial_sum": approx_poly(&exp.partial_sum),
        });
    }
    out
}

pub fn classify_report(verdict: &Verdict) -> Value {
    let evidence: Vec<Value> = verdict
        .evidence
        .iter()
        .map(|g| json!({ "gate": g.gate, "passed": g.passed, "detail": g.detail }))
        .collect();
    let mut out = json!({
        "command": "classify",
        "evidence": evidence,
    });
    match &verdict.outcome {
        Outcome::Polynomial {
            certificate,
            n_cutoff,
            max_residual,
        } => {
            out["verdict"] = json!("polynomial");
            out["certificate"] = approx_poly(certificate);
            out["n_cutoff"] = json!(n_cutoff);
            out["max_residual"] = json!(f17(*max_residual));
        }
        Outcome::HypothesesViolated(v) => {
            out["verdict"] = json!("hypotheses_violated");
            out["reason"] = json!(match v {
                Violation::Growth => "growth",
                Violation::Type => "type",
                Violation::Admissibility => "admissibility",
                Violation::Integrality => "integrality",
            });
        }
        Outcome::Inconclusive(detail) => {
            out["verdict"] = json!("inconclusive");
            out["detail"] = json!(detail);
        }
    }
    out
}

pub fn coefficients_csv(coeffs: &[Vec<Complex64>]) -> String {
    let mut out = String::from("n,j,re,im\n");
    for (n, row) in coeffs.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            out.push_str(&format!("{n},{j},{},{}\n", f17(a.re), f17(a.im)));
        }
    }
    out
}

pub fn polynomial_csv(p: &Polynomial<Complex64>) -> String {
    let mut out = String::from("power,re,im\n");
    for (i, c) in p.coeffs().iter().enumerate() {
        out.push_str(&format!("{i},{},{}\n", f17(c.re), f17(c.im)));
    }
    out
}

pub fn omega_csv(table: &OmegaTable) -> String {
    let mut out = String::from("n,power,coefficient\n");
    for n in 0..table.len() {
        for (i, c) in table.omega(n).coeffs().iter().enumerate() {
            out.push_str(&format!("{n},{i},{c}\n"));
        }
    }
    out
}
