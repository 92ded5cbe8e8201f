//! Entire-function machinery: a closed catalogue with exactly known
//! exponential types, derivative evaluation, growth-condition checks, the
//! convergent periodic expansion with its remainder bound, and the Laplace
//! contour cross-check.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::{BasisTable, NodeSystem};
use crate::delta::KernelSystem;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// One catalogue member. The type of each transcendental atom is |a|.
#[derive(Clone, Debug)]
pub enum Atom {
    /// Monomial coefficients, index i = coefficient of z^i.
    Poly(Vec<Complex64>),
    /// e^{az+b}
    Exp { a: Complex64, b: Complex64 },
    Sin { a: Complex64, b: Complex64 },
    Cos { a: Complex64, b: Complex64 },
    Sinh { a: Complex64, b: Complex64 },
    Cosh { a: Complex64, b: Complex64 },
    /// (e^{az} - 1)/(az), extended by 1 at the origin.
    ExpM1OverAz { a: Complex64 },
}

impl Atom {
    fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Atom::Poly(c) => horner(c, z),
            Atom::Exp { a, b } => (a * z + b).exp(),
            Atom::Sin { a, b } => (a * z + b).sin(),
            Atom::Cos { a, b } => (a * z + b).cos(),
            Atom::Sinh { a, b } => (a * z + b).sinh(),
            Atom::Cosh { a, b } => (a * z + b).cosh(),
            Atom::ExpM1OverAz { a } => {
                let w = a * z;
                if w.norm() < 1e-3 {
                    // short series near the removable singularity
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut term = Complex64::new(1.0, 0.0);
                    for k in 1..=12 {
                        acc += term;
                        term = term * w / (k as f64 + 1.0);
                    }
                    acc
                } else {
                    (w.exp() - 1.0) / w
                }
            }
        }
    }

    /// f^{(n)}(z) in closed form.
    fn derivative_at(&self, n: usize, z: Complex64) -> Complex64 {
        let halfpi = Complex64::new(0.0, 0.0) + (n as f64) * PI / 2.0;
        match self {
            Atom::Poly(c) => horner_derivative(c, n, z),
            Atom::Exp { a, b } => a.powi(n as i32) * (a * z + b).exp(),
            Atom::Sin { a, b } => a.powi(n as i32) * (a * z + b + halfpi).sin(),
            Atom::Cos { a, b } => a.powi(n as i32) * (a * z + b + halfpi).cos(),
            Atom::Sinh { a, b } => {
                let w = a * z + b;
                let base = if n.is_multiple_of(2) { w.sinh() } else { w.cosh() };
                a.powi(n as i32) * base
            }
            Atom::Cosh { a, b } => {
                let w = a * z + b;
                let base = if n.is_multiple_of(2) { w.cosh() } else { w.sinh() };
                a.powi(n as i32) * base
            }
            Atom::ExpM1OverAz { a } => {
                // f^{(n)}(z) = sum_k a^{n+k} z^k / ((n+k+1) k!)
                let mut acc = Complex64::new(0.0, 0.0);
                let mut zk_over_fact = Complex64::new(1.0, 0.0);
                let an = a.powi(n as i32);
                let mut ak = Complex64::new(1.0, 0.0);
                for k in 0..10_000usize {
                    let term = an * ak * zk_over_fact / (n as f64 + k as f64 + 1.0);
                    acc += term;
                    if k > 4 && term.norm() <= 1e-18 * acc.norm().max(1e-300) {
                        break;
                    }
                    ak *= a;
                    zk_over_fact = zk_over_fact * z / (k as f64 + 1.0);
                }
                acc
            }
        }
    }

    fn exponential_type(&self) -> f64 {
        match self {
            Atom::Poly(_) => 0.0,
            Atom::Exp { a, .. }
            | Atom::Sin { a, .. }
            | Atom::Cos { a, .. }
            | Atom::Sinh { a, .. }
            | Atom::Cosh { a, .. }
            | Atom::ExpM1OverAz { a } => a.norm(),
        }
    }
}

/// A finite weighted combination of catalogue atoms.
#[derive(Clone, Debug)]
pub struct EntireFunction {
    terms: Vec<(Complex64, Atom)>,
}

impl EntireFunction {
    pub fn new(terms: Vec<(Complex64, Atom)>) -> Self {
        EntireFunction { terms }
    }

    pub fn atom(atom: Atom) -> Self {
        Self::new(vec![(Complex64::new(1.0, 0.0), atom)])
    }

    pub fn poly_real(coeffs: &[f64]) -> Self {
        Self::atom(Atom::Poly(
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        ))
    }

    pub fn terms(&self) -> &[(Complex64, Atom)] {
        &self.terms
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|(w, a)| w * a.eval(z)).sum()
    }

    /// f^{(n)}(s), closed forms per atom.
    pub fn derivative_at(&self, n: usize, s: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(w, a)| w * a.derivative_at(n, s))
            .sum()
    }

    /// Taylor data a_n = f^{(n)}(0), so f(z) = sum a_n z^n / n!.
    pub fn taylor(&self, n: usize) -> Complex64 {
        self.derivative_at(n, Complex64::new(0.0, 0.0))
    }

    /// f^{(n)}(s) summed from the Taylor series; independent route used to
    /// cross-check the closed forms.
    pub fn derivative_at_series(&self, n: usize, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut s_pow_over_fact = Complex64::new(1.0, 0.0);
        for k in 0..10_000usize {
            acc += self.taylor(n + k) * s_pow_over_fact;
            let tau = self.declared_type().max(1.0);
            let tail = (tau * s.norm()).powi(k as i32 + 1)
                / factorial_f64(k + 1)
                * tau.powi(n as i32);
            if k > 8 && tail <= 1e-18 * acc.norm().max(1.0) {
                break;
            }
            s_pow_over_fact = s_pow_over_fact * s / (k as f64 + 1.0);
        }
        acc
    }

    /// Exact exponential type from the catalogue.
    pub fn declared_type(&self) -> f64 {
        self.terms
            .iter()
            .filter(|(w, _)| w.norm() > 0.0)
            .map(|(_, a)| a.exponential_type())
            .fold(0.0, f64::max)
    }

    pub fn max_degree(&self) -> Option<usize> {
        // meaningful only when every term is polynomial
        self.terms
            .iter()
            .map(|(_, a)| match a {
                Atom::Poly(c) => Some(c.len().saturating_sub(1)),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|v| v.into_iter().max().unwrap_or(0))
    }
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn horner_derivative(coeffs: &[Complex64], n: usize, z: Complex64) -> Complex64 {
    if coeffs.len() <= n {
        return Complex64::new(0.0, 0.0);
    }
    let mut d: Vec<Complex64> = Vec::with_capacity(coeffs.len() - n);
    for i in n..coeffs.len() {
        let mut ff = 1.0;
        for q in (i - n + 1)..=i {
            ff *= q as f64;
        }
        d.push(coeffs[i] * ff);
    }
    horner(&d, z)
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product::<f64>().max(1.0)
}

/// Reconciles the declared type with limsup |a_n|^{1/n} over n in [200, 400];
/// a mismatch above 5% is a catalogue-consistency error.
pub fn type_estimate(f: &EntireFunction) -> Result<f64> {
    let declared = f.declared_type();
    let mut measured: f64 = 0.0;
    for n in 200..=400usize {
        let a = f.taylor(n).norm();
        if a > 0.0 {
            measured = measured.max(a.powf(1.0 / n as f64));
        }
    }
    let ok = if declared == 0.0 {
        measured < 1e-2
    } else {
        (measured - declared).abs() <= 0.05 * declared
    };
    if !ok {
        return Err(Error::CatalogueInconsistent { declared, measured });
    }
    Ok(declared)
}

/// max |f| over `samples` points of the circle |z| = r.
pub fn sup_on_circle(f: &EntireFunction, r: f64, samples: usize) -> f64 {
    (0..samples)
        .map(|k| {
            f.eval(Complex64::from_polar(r, 2.0 * PI * k as f64 / samples as f64))
                .norm()
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// (r, e^{-r} sqrt(r) |f|_r) at each sampled radius.
    pub samples: Vec<(f64, f64)>,
}

/// Checks limsup e^{-r} sqrt(r) |f|_r < e^{-A} / sqrt(2 pi), on the radii
/// r = 20, 40, ..., 200, requiring the sampled trend to be nonincreasing.
pub fn growth_ratio(f: &EntireFunction, a: f64) -> GrowthReport {
    assert!(a >= 0.0);
    let samples: Vec<(f64, f64)> = (1..=10)
        .map(|k| {
            let r = 20.0 * k as f64;
            (r, (-r).exp() * r.sqrt() * sup_on_circle(f, r, 256))
        })
        .collect();
    // the limsup is estimated at the largest radius; the nonincreasing trend
    // is what justifies reading a limit off a finite sample
    let lhs = samples.last().map(|&(_, v)| v).unwrap_or(0.0);
    let rhs = (-a).exp() / (2.0 * PI).sqrt();
    let nonincreasing = samples
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9) + 1e-300);
    GrowthReport {
        lhs,
        rhs,
        satisfied: lhs < rhs && nonincreasing,
        samples,
    }
}

/// Truncated periodic expansion with a certified tail bound.
pub struct ExpansionResult {
    /// coeffs[n][j] = f^{(mn+r_j)}(s_j)
    pub coeffs: Vec<Vec<Complex64>>,
    pub partial_sum: Polynomial<Complex64>,
    pub n_truncation: usize,
    /// Contour radius used for the kernel bound, strictly between the type
    /// of f and the zero-free radius.
    pub rho: f64,
    pub zero_free_radius: f64,
    tail_constant: f64,
    tail_ratio: f64,
    residues: Vec<usize>,
    m: usize,
    sys: KernelSystem,
    phi_contour: Vec<(Complex64, Vec<Vec<Complex64>>)>,
}

impl ExpansionResult {
    pub fn eval_partial(&self, z: Complex64) -> Complex64 {
        self.partial_sum.eval(&z)
    }

    /// Upper bound for |f(z) - partial_sum(z)|: the kernel bound
    /// |Lambda_{nj}(z)| <= rho^{-mn-r_j} sup_{|t|=rho} |phi_j(t,z)| against
    /// the fitted coefficient envelope, summed in closed geometric form.
    pub fn remainder_bound(&self, z: Complex64) -> f64 {
        let q = self.tail_ratio;
        if q >= 1.0 {
            return f64::INFINITY;
        }
        let mut total = 0.0;
        for j in 0..self.m {
            let sup_phi = self
                .phi_contour
                .iter()
                .map(|(t, c)| self.sys.phi_with(c, j, *t, z).norm())
                .fold(0.0, f64::max);
            let exponent = (self.m * (self.n_truncation + 1) + self.residues[j]) as i32;
            total += self.tail_constant * sup_phi * q.powi(exponent) / (1.0 - q.powi(self.m as i32));
        }
        total
    }
}

/// Expands f in the biorthogonal basis of `nodes`, truncated at row N.
/// Requires the exponential type of f to be strictly below the zero-free
/// radius of Delta.
pub fn expand_periodic(
    f: &EntireFunction,
    nodes: &NodeSystem,
    n_trunc: usize,
) -> Result<ExpansionResult> {
    if !nodes.is_admissible() {
        return Err(Error::SingularSystem);
    }
    let tau_f = type_estimate(f)?;
    let sys = KernelSystem::new(nodes);
    let search = (2.0 * tau_f).max(2.0);
    let profile = sys.zero_free_radius(search)?;
    let tau_hat = profile.zero_free_radius;
    if tau_f >= tau_hat * (1.0 - 1e-6) {
        return Err(Error::TypeTooLarge {
            tau: tau_f,
            bound: tau_hat,
        });
    }
    let m = nodes.m();
    let r = nodes.residues().to_vec();
    let s: Vec<Complex64> = nodes.nodes().iter().map(|x| x.to_complex()).collect();

    let coeffs: Vec<Vec<Complex64>> = (0..=n_trunc)
        .map(|n| {
            (0..m)
                .map(|j| f.derivative_at(m * n + r[j], s[j]))
                .collect()
        })
        .collect();

    let basis = BasisTable::new(nodes, n_trunc)?;
    let mut partial = Polynomial::zero();
    for (n, row) in coeffs.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            partial = partial.add(&basis.lambda(n, j).to_approx().scale(a));
        }
    }

    let rho = 0.5 * (tau_f + tau_hat);
    // coefficient envelope |a_{nj}| <= C rho_f^{mn+r_j}, fitted on the first
    // rows; rho_f floored away from zero for polynomial inputs
    let rho_f = tau_f.max(1e-3);
    let mut c_fit: f64 = 0.0;
    for (n, row) in coeffs.iter().take(10).enumerate() {
        for (j, a) in row.iter().enumerate() {
            c_fit = c_fit.max(a.norm() / rho_f.powi((m * n + r[j]) as i32));
        }
    }
    let phi_contour: Vec<(Complex64, Vec<Vec<Complex64>>)> = (0..64)
        .map(|k| {
            let t = Complex64::from_polar(rho, 2.0 * PI * k as f64 / 64.0);
            let c = sys.c_matrix(t)?;
            Ok((t, c))
        })
        .collect::<Result<_>>()?;

    Ok(ExpansionResult {
        coeffs,
        partial_sum: partial,
        n_truncation: n_trunc,
        rho,
        zero_free_radius: tau_hat,
        tail_constant: c_fit,
        tail_ratio: rho_f / rho,
        residues: r,
        m,
        sys,
        phi_contour,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct LaplaceCheck {
    pub contour_value: Complex64,
    pub direct_value: Complex64,
    pub residual: f64,
}

/// Evaluates f^{(mn+r_j)}(s_j) as a contour integral of the truncated
/// Laplace transform and compares with the closed-form derivative.
pub fn laplace_contour_check(
    f: &EntireFunction,
    nodes: &NodeSystem,
    n: usize,
    j: usize,
    rho: f64,
) -> Result<LaplaceCheck> {
    let tau_f = type_estimate(f)?;
    if tau_f >= rho {
        return Err(Error::TypeTooLarge {
            tau: tau_f,
            bound: rho,
        });
    }
    let order = nodes.m() * n + nodes.residues()[j];
    let s = nodes.nodes()[j].to_complex();

    // truncated Laplace transform F(t) = sum_k a_k t^{-k-1}
    let mut taylor = Vec::new();
    let mut below = 0;
    for k in 0..2_000usize {
        let a = f.taylor(k);
        taylor.push(a);
        if a.norm() * rho.powi(-(k as i32) - 1) < 1e-18 {
            below += 1;
            if below >= 4 && k > 16 {
                break;
            }
        } else {
            below = 0;
        }
    }

    let samples = 2048;
    let mut acc = Complex64::new(0.0, 0.0);
    for kk in 0..samples {
        let t = Complex64::from_polar(rho, 2.0 * PI * kk as f64 / samples as f64);
        let mut ft = Complex64::new(0.0, 0.0);
        let mut tpow = t.inv();
        for a in &taylor {
            ft += a * tpow;
            tpow /= t;
        }
        acc += t.powi(order as i32) * (t * s).exp() * ft * t;
    }
    let contour_value = acc / samples as f64;
    let direct_value = f.derivative_at(order, s);
    Ok(LaplaceCheck {
        contour_value,
        direct_value,
        residual: (contour_value - direct_value).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn es(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn lidstone() -> NodeSystem {
        NodeSystem::new(vec![es(0), es(1)], vec![0, 0]).unwrap()
    }

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    /// sinh(z - s1)/sinh(s0 - s1) for s0 = 0, s1 = 1.
    fn sharp_sinh() -> EntireFunction {
        let w = 1.0 / (-1.0f64).sinh();
        EntireFunction::new(vec![(
            c(w),
            Atom::Sinh {
                a: c(1.0),
                b: c(-1.0),
            },
        )])
    }

    #[test]
    fn derivative_closed_forms() {
        let f = EntireFunction::poly_real(&[0.0, 0.0, 0.0, 1.0]); // z^3
        assert!((f.derivative_at(2, c(1.0)) - c(6.0)).norm() < 1e-14);

        let f = sharp_sinh();
        for n in 0..=30 {
            let v0 = f.derivative_at(2 * n, c(0.0));
            let v1 = f.derivative_at(2 * n, c(1.0));
            assert!((v0 - c(1.0)).norm() < 1e-10, "n={n}: {v0}");
            assert!(v1.norm() < 1e-10, "n={n}: {v1}");
        }

        // sin(pi (z - s0)/(s1 - s0)) with s0 = 0, s1 = 1
        let f = EntireFunction::atom(Atom::Sin {
            a: c(PI),
            b: c(0.0),
        });
        for n in 0..=30 {
            assert!(f.derivative_at(2 * n, c(0.0)).norm() < 1e-10 * PI.powi(2 * n as i32));
            assert!(f.derivative_at(2 * n, c(1.0)).norm() < 1e-10 * PI.powi(2 * n as i32));
        }
    }

    #[test]
    fn series_route_matches_closed_form() {
        let f = EntireFunction::new(vec![
            (c(2.0), Atom::Exp { a: c(0.5), b: c(0.0) }),
            (c(-1.0), Atom::Cos { a: c(1.0), b: c(0.3) }),
        ]);
        for n in [0usize, 1, 3, 7] {
            let s = Complex64::new(0.4, -0.9);
            let a = f.derivative_at(n, s);
            let b = f.derivative_at_series(n, s);
            assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
        }
    }

    #[test]
    fn type_estimates() {
        let f = EntireFunction::atom(Atom::Exp { a: c(0.5), b: c(0.0) });
        assert_eq!(type_estimate(&f).unwrap(), 0.5);
        let f = EntireFunction::atom(Atom::Sin { a: c(PI), b: c(0.0) });
        assert_eq!(type_estimate(&f).unwrap(), PI);
        let f = EntireFunction::poly_real(&[1.0, 2.0, 3.0]);
        assert_eq!(type_estimate(&f).unwrap(), 0.0);
    }

    #[test]
    fn growth_ratio_fixtures() {
        // (e^z - 1)/z decays like 1/sqrt(r) after the weight
        let f = EntireFunction::atom(Atom::ExpM1OverAz { a: c(1.0) });
        assert!(growth_ratio(&f, 1.0).satisfied);
        // sin z grows like sqrt(r)/2 after the weight
        let f = EntireFunction::atom(Atom::Sin { a: c(1.0), b: c(0.0) });
        assert!(!growth_ratio(&f, 0.0).satisfied);
        // polynomials always satisfy
        let f = EntireFunction::poly_real(&[0.0, 0.0, 5.0]);
        assert!(growth_ratio(&f, 3.0).satisfied);
    }

    #[test]
    fn expansion_of_sine() {
        let f = EntireFunction::atom(Atom::Sin { a: c(1.0), b: c(0.0) });
        let exp = expand_periodic(&f, &lidstone(), 15).unwrap();
        for k in 0..20 {
            let z = Complex64::from_polar(0.05 * (k + 1) as f64, 0.37 * k as f64);
            let err = (exp.eval_partial(z) - f.eval(z)).norm();
            assert!(err < 1e-10, "z={z}, err={err}");
            assert!(err <= exp.remainder_bound(z) + 1e-15);
        }
    }

    #[test]
    fn expansion_rejects_sharp_type() {
        let f = EntireFunction::atom(Atom::Sin { a: c(PI), b: c(0.0) });
        assert!(matches!(
            expand_periodic(&f, &lidstone(), 8),
            Err(Error::TypeTooLarge { .. })
        ));
    }

    #[test]
    fn expansion_of_polynomial_terminates() {
        let f = EntireFunction::poly_real(&[0.0, 0.0, 0.0, 1.0]);
        let exp = expand_periodic(&f, &lidstone(), 6).unwrap();
        for (n, row) in exp.coeffs.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                if 2 * n > 3 {
                    assert!(a.norm() == 0.0, "row {n} col {j}");
                }
            }
        }
        for k in 0..10 {
            let z = Complex64::from_polar(0.2 * k as f64, 0.9 * k as f64);
            assert!((exp.eval_partial(z) - f.eval(z)).norm() < 1e-12);
        }
    }

    #[test]
    fn laplace_check_fixtures() {
        let nodes = lidstone();
        let f = EntireFunction::atom(Atom::Exp { a: c(0.5), b: c(0.0) });
        let chk = laplace_contour_check(&f, &nodes, 1, 1, 1.0).unwrap();
        assert!(chk.residual < 1e-9, "residual {}", chk.residual);
        let expected = c(0.25 * (0.5f64).exp());
        assert!((chk.direct_value - expected).norm() < 1e-12);

        let f = EntireFunction::poly_real(&[0.0, 0.0, 0.0, 1.0]);
        let chk = laplace_contour_check(&f, &nodes, 1, 1, 1.0).unwrap();
        assert!(chk.residual < 1e-10);

        let f = EntireFunction::atom(Atom::Sin { a: c(1.0), b: c(0.0) });
        let chk = laplace_contour_check(&f, &nodes, 3, 0, 2.0).unwrap();
        assert!(chk.residual < 1e-9);
    }

    #[test]
    fn kernel_coefficient_table_for_exponential() {
        // f_t(z) = e^{tz} has a_{nj} = t^{mn+r_j} e^{t s_j}
        let nodes = lidstone();
        let t = c(0.9);
        let f = EntireFunction::atom(Atom::Exp { a: t, b: c(0.0) });
        let exp = expand_periodic(&f, &nodes, 6).unwrap();
        for (n, row) in exp.coeffs.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                let s = nodes.nodes()[j].to_complex();
                let expected = t.powi((2 * n) as i32) * (t * s).exp();
                assert!((a - expected).norm() < 1e-10 * expected.norm().max(1.0));
            }
        }
    }
}
