//! Integrality classifiers: gate pipelines that turn "the derivative data is
//! integral and the function grows slowly" into a polynomial certificate.
//! The classifiers are one-directional: absence of a certificate is reported
//! as inconclusive, never as a disproof.

use num_complex::Complex64;

use crate::basis::{BasisTable, NodeSystem};
use crate::delta::KernelSystem;
use crate::entire::{growth_ratio, sup_on_circle, type_estimate, EntireFunction};
use crate::error::{Error, Result};
use crate::gontcharoff::{expand_gontcharoff, NodeSequence};
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, Debug)]
pub struct IntegralityConfig {
    /// How far the derivative data is examined.
    pub n_max: usize,
    /// Proximity to the nearest Gaussian integer that counts as integral.
    pub int_tol: f64,
    /// Proximity to zero that counts as vanishing.
    pub zero_tol: f64,
}

impl IntegralityConfig {
    pub fn new(n_max: usize, int_tol: f64, zero_tol: f64) -> Result<Self> {
        if !(int_tol > 0.0 && int_tol < 0.5) {
            return Err(Error::InvalidSequence(
                "int_tol must lie in (0, 0.5)".into(),
            ));
        }
        if !(zero_tol > 0.0 && zero_tol < int_tol) {
            return Err(Error::InvalidSequence(
                "zero_tol must lie in (0, int_tol)".into(),
            ));
        }
        if n_max < 4 {
            return Err(Error::InvalidSequence("n_max must be at least 4".into()));
        }
        Ok(IntegralityConfig {
            n_max,
            int_tol,
            zero_tol,
        })
    }
}

impl Default for IntegralityConfig {
    fn default() -> Self {
        IntegralityConfig {
            n_max: 32,
            int_tol: 1e-6,
            zero_tol: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    Growth,
    Type,
    Admissibility,
    Integrality,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Polynomial {
        certificate: Polynomial<Complex64>,
        n_cutoff: usize,
        max_residual: f64,
    },
    HypothesesViolated(Violation),
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct GateReport {
    pub gate: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub evidence: Vec<GateReport>,
}

/// Membership rule n -> I_n for derivative products.
#[derive(Clone, Debug)]
pub enum SubsetRule {
    /// The same index set for every n.
    Constant(Vec<usize>),
    /// I_n cycles through a fixed list of index sets.
    Cyclic(Vec<Vec<usize>>),
}

impl SubsetRule {
    pub fn subset(&self, n: usize) -> &[usize] {
        match self {
            SubsetRule::Constant(s) => s,
            SubsetRule::Cyclic(sets) => &sets[n % sets.len()],
        }
    }

    fn validate(&self, node_count: usize) -> Result<()> {
        let all: Vec<&Vec<usize>> = match self {
            SubsetRule::Constant(s) => vec![s],
            SubsetRule::Cyclic(sets) => sets.iter().collect(),
        };
        if all.is_empty() || all.iter().any(|s| s.is_empty()) {
            return Err(Error::InvalidSequence("every I_n must be nonempty".into()));
        }
        if all.iter().flat_map(|s| s.iter()).any(|&j| j >= node_count) {
            return Err(Error::InvalidSequence("subset index out of range".into()));
        }
        Ok(())
    }
}

/// Smallest n_0 <= n_max such that max_{|z| = A} |f^{(n)}(z)| < 1 for every
/// n_0 <= n <= n_max; the sup over the disc is attained on the boundary.
pub fn polya_cutoff(f: &EntireFunction, a: f64, n_max: usize) -> Result<usize> {
    let points = if a == 0.0 { 1 } else { 64 };
    let small = |n: usize| -> bool {
        (0..points).all(|k| {
            let z = Complex64::from_polar(
                a,
                2.0 * std::f64::consts::PI * k as f64 / points as f64,
            );
            f.derivative_at(n, z).norm() < 1.0
        })
    };
    let mut cutoff = None;
    for n in (0..=n_max).rev() {
        if small(n) {
            cutoff = Some(n);
        } else {
            break;
        }
    }
    cutoff.ok_or(Error::CutoffNotFound { n_max })
}

fn near_gaussian_integer(v: Complex64, tol: f64) -> bool {
    (v.re - v.re.round()).abs() <= tol && (v.im - v.im.round()).abs() <= tol
}

/// Fixed sample points in |z| <= radius used for certificate residuals.
fn residual_points(radius: f64) -> Vec<Complex64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    (0..20)
        .map(|k| {
            Complex64::from_polar(
                radius * (k % 5 + 1) as f64 / 5.0,
                2.0 * std::f64::consts::PI * GOLDEN * k as f64,
            )
        })
        .collect()
}

fn certificate_residual(f: &EntireFunction, p: &Polynomial<Complex64>, radius: f64) -> f64 {
    residual_points(radius)
        .into_iter()
        .map(|z| (f.eval(z) - p.eval(&z)).norm())
        .fold(0.0, f64::max)
}

struct Gates {
    evidence: Vec<GateReport>,
}

impl Gates {
    fn new() -> Self {
        Gates {
            evidence: Vec::new(),
        }
    }

    fn record(&mut self, gate: &str, passed: bool, detail: String) {
        self.evidence.push(GateReport {
            gate: gate.to_string(),
            passed,
            detail,
        });
    }

    fn violated(mut self, gate: &str, reason: Violation, detail: String) -> Verdict {
        self.record(gate, false, detail);
        Verdict {
            outcome: Outcome::HypothesesViolated(reason),
            evidence: self.evidence,
        }
    }

    fn inconclusive(mut self, gate: &str, detail: String) -> Verdict {
        self.record(gate, false, detail.clone());
        Verdict {
            outcome: Outcome::Inconclusive(detail),
            evidence: self.evidence,
        }
    }

    fn done(self, outcome: Outcome) -> Verdict {
        Verdict {
            outcome,
            evidence: self.evidence,
        }
    }
}

/// Largest n1 <= n_max/2 such that every row with n1 <= n <= n_max is
/// integral; None if even the upper half contains non-integral data.
fn integral_window(rows: &[Vec<Complex64>], tol: f64) -> Option<usize> {
    let n_max = rows.len() - 1;
    let half = n_max / 2;
    let all_integral =
        |n1: usize| rows[n1..].iter().all(|row| row.iter().all(|&v| near_gaussian_integer(v, tol)));
    (0..=half).rev().find(|&n1| all_integral(n1))
}

/// Theorem-1 pipeline: periodic derivative data f^{(mn+r_j)}(s_j).
pub fn classify_periodic(
    f: &EntireFunction,
    nodes: &NodeSystem,
    cfg: &IntegralityConfig,
) -> Verdict {
    let mut g = Gates::new();

    if !nodes.is_admissible() {
        return g.violated(
            "admissibility",
            Violation::Admissibility,
            "boundary determinant D vanishes".into(),
        );
    }
    g.record("admissibility", true, format!("D = {}", nodes.determinant()));

    let tau = match type_estimate(f) {
        Ok(t) => t,
        Err(e) => return g.inconclusive("type", format!("type estimation failed: {e}")),
    };
    let sys = KernelSystem::new(nodes);
    let profile = match sys.zero_free_radius((2.0 * tau).max(2.0)) {
        Ok(p) => p,
        Err(e) => return g.inconclusive("type", format!("zero-free radius failed: {e}")),
    };
    let tau_hat = profile.zero_free_radius;
    if tau >= tau_hat * (1.0 - 1e-6) {
        return g.violated(
            "type",
            Violation::Type,
            format!("type {tau} is not below the zero-free radius {tau_hat}"),
        );
    }
    g.record("type", true, format!("type {tau} < zero-free radius {tau_hat}"));

    let a = nodes.max_node_abs();
    let growth = growth_ratio(f, a);
    if !growth.satisfied {
        return g.violated(
            "growth",
            Violation::Growth,
            format!("limsup {} >= bound {}", growth.lhs, growth.rhs),
        );
    }
    g.record(
        "growth",
        true,
        format!("limsup {} < bound {}", growth.lhs, growth.rhs),
    );

    let m = nodes.m();
    let r = nodes.residues();
    let s: Vec<Complex64> = nodes.nodes().iter().map(|x| x.to_complex()).collect();
    let rows: Vec<Vec<Complex64>> = (0..=cfg.n_max)
        .map(|n| (0..m).map(|j| f.derivative_at(m * n + r[j], s[j])).collect())
        .collect();

    let n1 = match integral_window(&rows, cfg.int_tol) {
        Some(n1) => n1,
        None => {
            return g.violated(
                "integrality",
                Violation::Integrality,
                "derivative data is not integral on any admissible tail window".into(),
            )
        }
    };
    g.record(
        "integrality",
        true,
        format!("rows {n1}..={} integral within {}", cfg.n_max, cfg.int_tol),
    );

    // Prop. 1 regime: integral entries in the window must actually vanish
    for (n, row) in rows.iter().enumerate().skip(n1) {
        for (j, v) in row.iter().enumerate() {
            if v.norm() > cfg.zero_tol {
                return g.inconclusive(
                    "zero-inference",
                    format!(
                        "window entry (n={n}, j={j}) is integral but not numerically zero: {v}"
                    ),
                );
            }
        }
    }
    g.record(
        "zero-inference",
        true,
        format!("all window entries vanish within {}", cfg.zero_tol),
    );

    let basis = match BasisTable::new(nodes, n1.saturating_sub(1)) {
        Ok(b) => b,
        Err(e) => return g.inconclusive("certificate", format!("basis construction failed: {e}")),
    };
    let mut p = Polynomial::zero();
    for (n, row) in rows.iter().enumerate().take(n1) {
        for (j, v) in row.iter().enumerate() {
            p = p.add(&basis.lambda(n, j).to_approx().scale(v));
        }
    }
    finish_certificate(g, f, p, n1, a)
}

/// Theorem-2(a) pipeline: one derivative per order along a bounded sequence.
pub fn classify_sequence(
    f: &EntireFunction,
    seq: &NodeSequence,
    cfg: &IntegralityConfig,
) -> Verdict {
    let mut g = Gates::new();
    if !seq.is_bounded() {
        return g.inconclusive("sequence", "sequence has no finite bound A".into());
    }
    let a = seq.bound();

    let tau = match type_estimate(f) {
        Ok(t) => t,
        Err(e) => return g.inconclusive("type", format!("type estimation failed: {e}")),
    };
    let ln2 = std::f64::consts::LN_2;
    if tau >= ln2 / a * (1.0 - 1e-9) {
        return g.violated(
            "type",
            Violation::Type,
            format!("type {tau} is not below log(2)/A = {}", ln2 / a),
        );
    }
    g.record("type", true, format!("type {tau} < log(2)/A = {}", ln2 / a));

    let growth = growth_ratio(f, a);
    if !growth.satisfied {
        return g.violated(
            "growth",
            Violation::Growth,
            format!("limsup {} >= bound {}", growth.lhs, growth.rhs),
        );
    }
    g.record(
        "growth",
        true,
        format!("limsup {} < bound {}", growth.lhs, growth.rhs),
    );

    let rows: Vec<Vec<Complex64>> = (0..=cfg.n_max)
        .map(|n| vec![f.derivative_at(n, seq.node(n).to_complex())])
        .collect();
    let n1 = match integral_window(&rows, cfg.int_tol) {
        Some(n1) => n1,
        None => {
            return g.violated(
                "integrality",
                Violation::Integrality,
                "derivative data is not integral on any admissible tail window".into(),
            )
        }
    };
    g.record(
        "integrality",
        true,
        format!("rows {n1}..={} integral within {}", cfg.n_max, cfg.int_tol),
    );

    let n_cut = match polya_cutoff(f, a, cfg.n_max) {
        Ok(c) => n1.max(c),
        Err(e) => return g.inconclusive("zero-inference", format!("no vanishing cutoff: {e}")),
    };
    for (n, row) in rows.iter().enumerate().skip(n_cut) {
        if row[0].norm() > cfg.zero_tol {
            return g.inconclusive(
                "zero-inference",
                format!("window entry n={n} is integral but not numerically zero: {}", row[0]),
            );
        }
    }
    g.record(
        "zero-inference",
        true,
        format!("entries from n={n_cut} vanish within {}", cfg.zero_tol),
    );

    let p = match expand_gontcharoff(f, seq, a, n_cut.saturating_sub(1)) {
        Ok(exp) => exp.partial_sum,
        Err(e) => return g.inconclusive("certificate", format!("reconstruction failed: {e}")),
    };
    finish_certificate(g, f, p, n_cut, a)
}

/// Theorem-2(b) pipeline: integrality of the products
/// prod_{j in I_n} f^{(n)}(s_j).
pub fn classify_products(
    f: &EntireFunction,
    s_list: &[ExactScalar],
    subsets: &SubsetRule,
    a: f64,
    cfg: &IntegralityConfig,
) -> Verdict {
    let mut g = Gates::new();
    if let Err(e) = subsets.validate(s_list.len()) {
        return g.inconclusive("subsets", e.to_string());
    }
    let max_s = s_list.iter().map(|s| s.abs()).fold(0.0, f64::max);
    if max_s.partial_cmp(&a) != Some(std::cmp::Ordering::Less) {
        return g.inconclusive("subsets", format!("max |s_j| = {max_s} must be below A = {a}"));
    }

    let tau = match type_estimate(f) {
        Ok(t) => t,
        Err(e) => return g.inconclusive("type", format!("type estimation failed: {e}")),
    };
    let ln2 = std::f64::consts::LN_2;
    if tau >= ln2 / a * (1.0 - 1e-9) {
        return g.violated(
            "type",
            Violation::Type,
            format!("type {tau} is not below log(2)/A = {}", ln2 / a),
        );
    }
    g.record("type", true, format!("type {tau} < log(2)/A = {}", ln2 / a));

    let growth = growth_ratio(f, a);
    if !growth.satisfied {
        return g.violated(
            "growth",
            Violation::Growth,
            format!("limsup {} >= bound {}", growth.lhs, growth.rhs),
        );
    }
    g.record(
        "growth",
        true,
        format!("limsup {} < bound {}", growth.lhs, growth.rhs),
    );

    // per order: the product over I_n, and the node whose factor is smallest
    let s_c: Vec<Complex64> = s_list.iter().map(|s| s.to_complex()).collect();
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(cfg.n_max + 1);
    let mut w_nodes: Vec<ExactScalar> = Vec::with_capacity(cfg.n_max + 1);
    let mut min_factors: Vec<Complex64> = Vec::with_capacity(cfg.n_max + 1);
    for n in 0..=cfg.n_max {
        let mut product = Complex64::new(1.0, 0.0);
        let mut best: Option<(f64, usize, Complex64)> = None;
        for &j in subsets.subset(n) {
            let factor = f.derivative_at(n, s_c[j]);
            product *= factor;
            if best.is_none_or(|(b, _, _)| factor.norm() < b) {
                best = Some((factor.norm(), j, factor));
            }
        }
        let (_, j, factor) = best.expect("validated nonempty subset");
        rows.push(vec![product]);
        w_nodes.push(s_list[j].clone());
        min_factors.push(factor);
    }

    let n1 = match integral_window(&rows, cfg.int_tol) {
        Some(n1) => n1,
        None => {
            return g.violated(
                "integrality",
                Violation::Integrality,
                "derivative products are not integral on any admissible tail window".into(),
            )
        }
    };
    g.record(
        "integrality",
        true,
        format!("products {n1}..={} integral within {}", cfg.n_max, cfg.int_tol),
    );

    let n_cut = match polya_cutoff(f, a, cfg.n_max) {
        Ok(c) => n1.max(c),
        Err(e) => return g.inconclusive("zero-inference", format!("no vanishing cutoff: {e}")),
    };
    // an integral product of factors below 1 in modulus vanishes, so the
    // smallest factor must itself vanish
    for (n, factor) in min_factors.iter().enumerate().skip(n_cut) {
        if factor.norm() > cfg.zero_tol {
            return g.inconclusive(
                "zero-inference",
                format!("minimal factor at n={n} is not numerically zero: {factor}"),
            );
        }
    }
    g.record(
        "zero-inference",
        true,
        format!("minimal factors from n={n_cut} vanish within {}", cfg.zero_tol),
    );

    let tail = w_nodes.last().cloned().unwrap_or_else(ExactScalar::zero);
    let seq = match NodeSequence::explicit(w_nodes, tail, a) {
        Ok(s) => s,
        Err(e) => return g.inconclusive("certificate", format!("node sequence invalid: {e}")),
    };
    let coeffs: Vec<Complex64> = (0..n_cut)
        .map(|n| f.derivative_at(n, seq.node(n).to_complex()))
        .collect();
    let table = crate::gontcharoff::OmegaTable::new(&seq, n_cut.saturating_sub(1));
    let mut p = Polynomial::zero();
    for (n, v) in coeffs.iter().enumerate() {
        p = p.add(&table.omega(n).to_approx().scale(v));
    }
    finish_certificate(g, f, p, n_cut, a)
}

fn finish_certificate(
    mut g: Gates,
    f: &EntireFunction,
    p: Polynomial<Complex64>,
    n_cutoff: usize,
    a: f64,
) -> Verdict {
    let radius = a.max(1.0);
    let residual = certificate_residual(f, &p, radius);
    let scale = sup_on_circle(f, radius, 64).max(1.0);
    if residual > 1e-8 * scale {
        return g.inconclusive(
            "certificate",
            format!("reconstruction residual {residual} exceeds tolerance"),
        );
    }
    g.record("certificate", true, format!("max residual {residual}"));
    g.done(Outcome::Polynomial {
        certificate: p,
        n_cutoff,
        max_residual: residual,
    })
}
