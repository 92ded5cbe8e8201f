//! Abel-Gontcharoff interpolation: the Omega polynomial family indexed by a
//! node sequence, built three independent ways (recurrence, bordered
//! determinant, iterated integrals), with the Abel closed form for
//! arithmetic-progression nodes, the classical coefficient bounds, and the
//! one-derivative-per-row expansion of small-type entire functions.

use num_complex::Complex64;

use crate::entire::{type_estimate, EntireFunction};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug)]
pub enum SequenceRule {
    /// Finitely many prescribed nodes, then a constant tail value.
    Explicit {
        nodes: Vec<ExactScalar>,
        tail: ExactScalar,
    },
    /// w_n cycles through a fixed list.
    Periodic { cycle: Vec<ExactScalar> },
    /// w_n = a + n * step (unbounded; closed-form identities only).
    Arithmetic { a: ExactScalar, step: ExactScalar },
}

/// A node sequence together with a uniform bound A with |w_n| <= A
/// (infinite for arithmetic progressions).
#[derive(Clone, Debug)]
pub struct NodeSequence {
    rule: SequenceRule,
    bound: f64,
}

impl NodeSequence {
    pub fn explicit(nodes: Vec<ExactScalar>, tail: ExactScalar, bound: f64) -> Result<Self> {
        if bound <= 0.0 || !bound.is_finite() {
            return Err(Error::InvalidSequence(
                "bound must be positive and finite".into(),
            ));
        }
        for w in nodes.iter().chain(std::iter::once(&tail)) {
            if w.abs() > bound {
                return Err(Error::InvalidSequence(format!(
                    "node {w} exceeds the declared bound {bound}"
                )));
            }
        }
        Ok(NodeSequence {
            rule: SequenceRule::Explicit { nodes, tail },
            bound,
        })
    }

    pub fn periodic(cycle: Vec<ExactScalar>, bound: f64) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidSequence("empty cycle".into()));
        }
        if bound <= 0.0 || !bound.is_finite() {
            return Err(Error::InvalidSequence(
                "bound must be positive and finite".into(),
            ));
        }
        for w in &cycle {
            if w.abs() > bound {
                return Err(Error::InvalidSequence(format!(
                    "node {w} exceeds the declared bound {bound}"
                )));
            }
        }
        Ok(NodeSequence {
            rule: SequenceRule::Periodic { cycle },
            bound,
        })
    }

    pub fn arithmetic(a: ExactScalar, step: ExactScalar) -> Result<Self> {
        if step.is_zero() {
            return Err(Error::DegenerateStep);
        }
        Ok(NodeSequence {
            rule: SequenceRule::Arithmetic { a, step },
            bound: f64::INFINITY,
        })
    }

    pub fn rule(&self) -> &SequenceRule {
        &self.rule
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn is_bounded(&self) -> bool {
        self.bound.is_finite()
    }

    pub fn node(&self, n: usize) -> ExactScalar {
        match &self.rule {
            SequenceRule::Explicit { nodes, tail } => {
                nodes.get(n).cloned().unwrap_or_else(|| tail.clone())
            }
            SequenceRule::Periodic { cycle } => cycle[n % cycle.len()].clone(),
            SequenceRule::Arithmetic { a, step } => {
                &a.clone() + &(&step.clone() * &ExactScalar::from_int(n as i64))
            }
        }
    }
}

/// Omega_{n; w} for n = 0..=n_max, built by the defining recurrence
/// Omega_N = z^N/N! - sum_{n<N} (w_n^{N-n}/(N-n)!) Omega_n.
pub struct OmegaTable {
    seq: NodeSequence,
    omegas: Vec<Polynomial<ExactScalar>>,
}

impl OmegaTable {
    pub fn new(seq: &NodeSequence, n_max: usize) -> Self {
        let mut omegas: Vec<Polynomial<ExactScalar>> = Vec::with_capacity(n_max + 1);
        for big_n in 0..=n_max {
            let mut p = Polynomial::monomial(big_n).scale(&inv_factorial(big_n));
            for (n, omega_n) in omegas.iter().enumerate() {
                let w = seq.node(n);
                let coeff = &w.pow((big_n - n) as u32) * &inv_factorial(big_n - n);
                p = p.sub(&omega_n.scale(&coeff));
            }
            omegas.push(p);
        }
        OmegaTable {
            seq: seq.clone(),
            omegas,
        }
    }

    pub fn sequence(&self) -> &NodeSequence {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    pub fn omega(&self, n: usize) -> &Polynomial<ExactScalar> {
        &self.omegas[n]
    }
}

fn inv_factorial(n: usize) -> ExactScalar {
    let mut f = num_bigint::BigInt::from(1);
    for k in 2..=n {
        f *= k as i64;
    }
    ExactScalar::from_real(num_rational::BigRational::new(1.into(), f))
}

/// Omega_{N; w} as (-1)^N times the bordered Taylor determinant, expanded
/// along the first row with exact cofactors.
pub fn omega_determinant(seq: &NodeSequence, big_n: usize) -> Polynomial<ExactScalar> {
    if big_n == 0 {
        return Polynomial::one();
    }
    // rows 1..=N of the matrix (the first row carries the powers of z);
    // row p (1-based) has p-1 leading zeros, then w_{p-1}^q / q! for q >= 0
    let dim = big_n + 1;
    let mut lower: Vec<Vec<ExactScalar>> = Vec::with_capacity(big_n);
    for p in 1..=big_n {
        let w = seq.node(p - 1);
        let mut row = vec![ExactScalar::zero(); dim];
        for col in (p - 1)..dim {
            let q = (col - (p - 1)) as u32;
            row[col] = &w.pow(q) * &inv_factorial(q as usize);
        }
        lower.push(row);
    }
    let mut poly = Polynomial::zero();
    for k in 0..dim {
        // minor: delete column k from the N x N block
        let minor: Vec<Vec<ExactScalar>> = lower
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != k)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let det = crate::basis::exact_determinant(minor);
        let sign = if k % 2 == 0 {
            ExactScalar::one()
        } else {
            -ExactScalar::one()
        };
        let weight = &(&sign * &inv_factorial(k)) * &det;
        poly = poly.add(&Polynomial::monomial(k).scale(&weight));
    }
    if big_n % 2 == 1 {
        poly = poly.neg();
    }
    poly
}

/// Omega_{N; w} as the iterated integral
/// int_{w_0}^{z} int_{w_1}^{t_1} ... int_{w_{N-1}}^{t_{N-1}} 1, computed by
/// the suffix recursion P_N = 1, P_k(z) = int_{w_k}^{z} P_{k+1}.
pub fn omega_integral(seq: &NodeSequence, big_n: usize) -> Polynomial<ExactScalar> {
    let mut p = Polynomial::one();
    for k in (0..big_n).rev() {
        let w = seq.node(k);
        let prim = p.antiderivative_vanishing_at(1, &ExactScalar::zero());
        let shift = prim.eval(&w);
        p = prim.sub(&Polynomial::constant(shift));
    }
    p
}

/// Abel's closed form (1/n!) (z - a)(z - a - n t)^{n-1} for the arithmetic
/// progression w_k = a + k t.
pub fn abel_closed_form(seq: &NodeSequence, n: usize) -> Result<Polynomial<ExactScalar>> {
    let (a, t) = match seq.rule() {
        SequenceRule::Arithmetic { a, step } => (a.clone(), step.clone()),
        _ => {
            return Err(Error::InvalidSequence(
                "closed form requires an arithmetic progression".into(),
            ))
        }
    };
    if n == 0 {
        return Ok(Polynomial::one());
    }
    let z_minus_a = Polynomial::new(vec![-a.clone(), ExactScalar::one()]);
    let shift = &a + &(&t * &ExactScalar::from_int(n as i64));
    let z_minus_ant = Polynomial::new(vec![-shift, ExactScalar::one()]);
    Ok(z_minus_a
        .mul(&z_minus_ant.pow(n - 1))
        .scale(&inv_factorial(n)))
}

/// The classical majorant sequence: c_0 = 1,
/// c_n = 1/n! + sum_{i<n} c_i / (n-i)!; then |Omega_{n;w}|(r) <= c_n r^n
/// whenever every |w_k| <= 1 and r >= 1.
pub fn c_bound_sequence(n_max: usize) -> Vec<f64> {
    let mut c = vec![1.0f64];
    for n in 1..=n_max {
        let mut v = inv_factorial_f64(n);
        for (i, ci) in c.iter().enumerate() {
            v += ci * inv_factorial_f64(n - i);
        }
        c.push(v);
    }
    c
}

fn inv_factorial_f64(n: usize) -> f64 {
    1.0 / (1..=n).map(|k| k as f64).product::<f64>().max(1.0)
}

/// Truncated Abel-Gontcharoff expansion of f with a certified tail bound on
/// |z| <= radius. Requires a bounded sequence, type(f) < ln(2)/A, and
/// A <= radius < ln(2)/type(f).
pub struct GontcharoffExpansion {
    /// coeffs[n] = f^{(n)}(w_n)
    pub coeffs: Vec<Complex64>,
    pub partial_sum: Polynomial<Complex64>,
    pub n_truncation: usize,
    pub radius: f64,
    pub tail_bound: f64,
}

impl GontcharoffExpansion {
    pub fn eval_partial(&self, z: Complex64) -> Complex64 {
        self.partial_sum.eval(&z)
    }
}

pub fn expand_gontcharoff(
    f: &EntireFunction,
    seq: &NodeSequence,
    radius: f64,
    n_trunc: usize,
) -> Result<GontcharoffExpansion> {
    if !seq.is_bounded() {
        return Err(Error::InvalidSequence(
            "expansion requires a bounded sequence".into(),
        ));
    }
    let a = seq.bound();
    let tau = type_estimate(f)?;
    let ln2 = std::f64::consts::LN_2;
    if tau >= ln2 / a * (1.0 - 1e-9) {
        return Err(Error::TypeTooLarge {
            tau,
            bound: ln2 / a,
        });
    }
    let hi = if tau > 0.0 { ln2 / tau } else { f64::INFINITY };
    if !(radius >= a && radius < hi) {
        return Err(Error::RadiusOutOfRange {
            r: radius,
            lo: a,
            hi,
        });
    }

    let table = OmegaTable::new(seq, n_trunc);
    let coeffs: Vec<Complex64> = (0..=n_trunc)
        .map(|n| f.derivative_at(n, seq.node(n).to_complex()))
        .collect();
    let mut partial = Polynomial::zero();
    for (n, a_n) in coeffs.iter().enumerate() {
        partial = partial.add(&table.omega(n).to_approx().scale(a_n));
    }

    // tail: |f^{(n)}(w_n)| <= C tau~^n e^{A tau~} with tau~ = max(tau, 1e-3),
    // and |Omega_n| <= c_n r^n < (kappa r)^n with kappa = 1.5
    let tau_t = tau.max(1e-3);
    let mut c_fit: f64 = 0.0;
    for k in 0..=9.min(n_trunc) {
        c_fit = c_fit.max(f.taylor(k).norm() / tau_t.powi(k as i32));
    }
    let kappa = 1.5;
    let ratio = tau_t * kappa * radius;
    let tail_bound = if ratio < 1.0 {
        c_fit * (a * tau_t).exp() * ratio.powi(n_trunc as i32 + 1) / (1.0 - ratio)
    } else {
        f64::INFINITY
    };

    Ok(GontcharoffExpansion {
        coeffs,
        partial_sum: partial,
        n_truncation: n_trunc,
        radius,
        tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire::Atom;

    fn es(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn ratio(p: i64, q: i64) -> ExactScalar {
        ExactScalar::from_ratio(p, q)
    }

    fn whittaker_seq() -> NodeSequence {
        NodeSequence::periodic(vec![es(1), es(0)], 1.0).unwrap()
    }

    #[test]
    fn three_constructions_agree() {
        let seqs = vec![
            whittaker_seq(),
            NodeSequence::periodic(vec![es(0), es(1), es(-1)], 1.0).unwrap(),
            NodeSequence::explicit(vec![ratio(1, 2), es(-1)], ratio(1, 3), 1.0).unwrap(),
        ];
        for seq in &seqs {
            let table = OmegaTable::new(seq, 10);
            for n in 0..=10 {
                let det = omega_determinant(seq, n);
                let int = omega_integral(seq, n);
                assert_eq!(table.omega(n), &det, "det mismatch at n={n}");
                assert_eq!(table.omega(n), &int, "integral mismatch at n={n}");
            }
        }
    }

    #[test]
    fn interpolation_conditions() {
        // Omega_{n}^{(k)}(w_k) = delta_{kn} for k <= n
        let seq = whittaker_seq();
        let table = OmegaTable::new(&seq, 8);
        for n in 0..=8 {
            for k in 0..=n {
                let v = table.omega(n).derivative(k).eval(&seq.node(k));
                let expect = if k == n {
                    ExactScalar::one()
                } else {
                    ExactScalar::zero()
                };
                assert_eq!(v, expect, "n={n}, k={k}");
            }
        }
    }

    #[test]
    fn printed_low_order_formulas() {
        // with w_0 = 0:
        // 2! Omega_2 = (z - w1)^2 - w1^2
        // 3! Omega_3 = (z - w2)^3 - 3 (w1 - w2)^2 z + w2^3
        // 4! Omega_4 = (z - w3)^4 - 6 (w2 - w3)^2 (z - w1)^2
        //              - 4 (w1 - w3)^3 z + 6 w1^2 (w2 - w3)^2 - w3^4
        let seq = NodeSequence::explicit(
            vec![es(0), ratio(-1, 3), ratio(1, 5), ratio(2, 7)],
            es(0),
            1.0,
        )
        .unwrap();
        let (w1, w2, w3) = (seq.node(1), seq.node(2), seq.node(3));
        let table = OmegaTable::new(&seq, 4);

        let lin = |w: &ExactScalar| Polynomial::new(vec![-w.clone(), ExactScalar::one()]);
        let z = lin(&ExactScalar::zero());
        let cnst = |s: ExactScalar| Polynomial::constant(s);

        let rhs2 = lin(&w1).pow(2).sub(&cnst(&w1 * &w1));
        assert_eq!(table.omega(2).scale(&es(2)), rhs2);

        let rhs3 = lin(&w2)
            .pow(3)
            .sub(&z.scale(&(&ExactScalar::from_int(3) * &(&w1 - &w2).pow(2))))
            .add(&cnst(w2.pow(3)));
        assert_eq!(table.omega(3).scale(&es(6)), rhs3);

        let six = ExactScalar::from_int(6);
        let rhs4 = lin(&w3)
            .pow(4)
            .sub(&lin(&w1).pow(2).scale(&(&six * &(&w2 - &w3).pow(2))))
            .sub(&z.scale(&(&ExactScalar::from_int(4) * &(&w1 - &w3).pow(3))))
            .add(&cnst(&(&six * &w1.pow(2)) * &(&w2 - &w3).pow(2)))
            .sub(&cnst(w3.pow(4)));
        assert_eq!(table.omega(4).scale(&es(24)), rhs4);
    }

    #[test]
    fn abel_closed_form_matches_recurrence() {
        let seq = NodeSequence::arithmetic(ratio(1, 2), ratio(1, 3)).unwrap();
        let table = OmegaTable::new(&seq, 8);
        for n in 0..=8 {
            assert_eq!(&abel_closed_form(&seq, n).unwrap(), table.omega(n), "n={n}");
        }
        assert!(matches!(
            abel_closed_form(&whittaker_seq(), 2),
            Err(Error::InvalidSequence(_))
        ));
    }

    #[test]
    fn shift_identity() {
        // Omega_{n; w + c}(z + c) = Omega_{n; w}(z)
        let seq = NodeSequence::periodic(vec![es(0), es(1), es(-1)], 1.0).unwrap();
        let c = ratio(2, 7);
        let shifted = NodeSequence::periodic(
            vec![&es(0) + &c, &es(1) + &c, &es(-1) + &c],
            2.0,
        )
        .unwrap();
        let t1 = OmegaTable::new(&seq, 6);
        let t2 = OmegaTable::new(&shifted, 6);
        let zs = [es(0), es(1), ratio(-3, 4), ratio(5, 2)];
        for n in 0..=6 {
            for z in &zs {
                assert_eq!(
                    t2.omega(n).eval(&(z + &c)),
                    t1.omega(n).eval(z),
                    "n={n}, z={z}"
                );
            }
        }
    }

    #[test]
    fn c_bounds_and_majorant() {
        let c = c_bound_sequence(200);
        assert_eq!(c[1], 2.0);
        assert_eq!(c[2], 3.0);
        for (n, cn) in c.iter().enumerate().skip(30) {
            assert!(*cn < 1.5f64.powi(n as i32), "n={n}, c_n={cn}");
        }
        // coefficient-sum majorant |Omega_n|(r) <= c_n r^n for |w| <= 1, r >= 1
        let seq = NodeSequence::periodic(vec![es(1), es(-1), es(0)], 1.0).unwrap();
        let table = OmegaTable::new(&seq, 20);
        for r in [1.0f64, 1.3, 2.0] {
            for n in 0..=20 {
                let p = table.omega(n).to_approx();
                let sum: f64 = (0..=n)
                    .map(|i| p.coeff(i).norm() * r.powi(i as i32))
                    .sum();
                assert!(sum <= c[n] * r.powi(n as i32) * (1.0 + 1e-12), "n={n}, r={r}");
            }
        }
    }

    #[test]
    fn whittaker_correspondence() {
        // Omega_{2n} for the cycle (1, 0) equals the Whittaker basis element
        // Lambda_{n,0} of the two-point system s = (1, 0), r = (0, 1)
        use crate::basis::{BasisTable, NodeSystem};
        let nodes = NodeSystem::new(vec![es(1), es(0)], vec![0, 1]).unwrap();
        let basis = BasisTable::new(&nodes, 5).unwrap();
        let table = OmegaTable::new(&whittaker_seq(), 10);
        for n in 0..=5 {
            assert_eq!(table.omega(2 * n), basis.lambda(n, 0), "n={n}");
        }
    }

    #[test]
    fn expansion_of_small_type_exponential() {
        let f = EntireFunction::atom(Atom::Exp {
            a: Complex64::new(0.4, 0.0),
            b: Complex64::new(0.0, 0.0),
        });
        let seq = whittaker_seq();
        let exp = expand_gontcharoff(&f, &seq, 1.2, 25).unwrap();
        assert!(exp.tail_bound < 1e-2, "tail {}", exp.tail_bound);
        for k in 0..12 {
            let z = Complex64::from_polar(1.2 * (k as f64 + 1.0) / 12.0, 0.5 * k as f64);
            let err = (exp.eval_partial(z) - f.eval(z)).norm();
            assert!(err <= exp.tail_bound * (1.0 + 1e-9) + 1e-14, "z={z}, err={err}");
        }
    }

    #[test]
    fn expansion_gates() {
        let seq = whittaker_seq();
        let f = EntireFunction::atom(Atom::Exp {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        });
        assert!(matches!(
            expand_gontcharoff(&f, &seq, 1.0, 10),
            Err(Error::TypeTooLarge { .. })
        ));
        let g = EntireFunction::atom(Atom::Exp {
            a: Complex64::new(0.4, 0.0),
            b: Complex64::new(0.0, 0.0),
        });
        assert!(matches!(
            expand_gontcharoff(&g, &seq, 0.5, 10),
            Err(Error::RadiusOutOfRange { .. })
        ));
        assert!(matches!(
            expand_gontcharoff(&g, &seq, 2.0, 10),
            Err(Error::RadiusOutOfRange { .. })
        ));
    }
}
