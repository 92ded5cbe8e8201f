//! Periodic-case interpolation system: the boundary determinant D(s), the
//! degree-<m boundary solver, the biorthogonal basis polynomials built by
//! the antiderivative recurrence, projection/reconstruction, and the
//! coefficient-growth certificate.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{falling_factorial, Coeff, Polynomial};
use crate::scalar::ExactScalar;

/// Nodes s_0..s_{m-1} with derivative residues r_0..r_{m-1}.
///
/// Derivatives of orders mn + r_j are sampled at s_j. The m x m boundary
/// matrix has entry (j, k) = k!/(k-r_j)! s_j^{k-r_j} (zero when k < r_j);
/// the system is admissible iff its determinant D is nonzero.
#[derive(Clone, Debug)]
pub struct NodeSystem {
    s: Vec<ExactScalar>,
    r: Vec<usize>,
    boundary_matrix: Vec<Vec<ExactScalar>>,
    d: ExactScalar,
}

impl NodeSystem {
    /// Requires 0 <= r_j <= m-1 only; r_j > j is accepted but then D = 0
    /// and the system is inadmissible.
    pub fn new(s: Vec<ExactScalar>, r: Vec<usize>) -> Result<Self> {
        if s.is_empty() || s.len() != r.len() {
            return Err(Error::InvalidNodes(format!(
                "need equal nonzero counts of nodes and residues, got {} and {}",
                s.len(),
                r.len()
            )));
        }
        let m = s.len();
        if let Some(&bad) = r.iter().find(|&&rj| rj > m - 1) {
            return Err(Error::InvalidNodes(format!(
                "residue {} out of range 0..={}",
                bad,
                m - 1
            )));
        }
        let boundary_matrix: Vec<Vec<ExactScalar>> = (0..m)
            .map(|j| {
                (0..m)
                    .map(|k| {
                        if k < r[j] {
                            ExactScalar::zero()
                        } else {
                            let ff = ExactScalar::from_bigint(&falling_factorial(k, r[j]));
                            ff.mul(&s[j].pow((k - r[j]) as u32))
                        }
                    })
                    .collect()
            })
            .collect();
        let d = exact_determinant(boundary_matrix.clone());
        Ok(NodeSystem {
            s,
            r,
            boundary_matrix,
            d,
        })
    }

    pub fn m(&self) -> usize {
        self.s.len()
    }

    pub fn nodes(&self) -> &[ExactScalar] {
        &self.s
    }

    pub fn residues(&self) -> &[usize] {
        &self.r
    }

    pub fn boundary_matrix(&self) -> &[Vec<ExactScalar>] {
        &self.boundary_matrix
    }

    /// D(s), the exact boundary determinant.
    pub fn determinant(&self) -> &ExactScalar {
        &self.d
    }

    pub fn is_admissible(&self) -> bool {
        !self.d.is_zero()
    }

    /// max over nodes of |s_j| in double precision.
    pub fn max_node_abs(&self) -> f64 {
        self.s.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Exact determinant by Gaussian elimination over the Gaussian rationals.
pub fn exact_determinant(mut a: Vec<Vec<ExactScalar>>) -> ExactScalar {
    let n = a.len();
    let mut det = ExactScalar::one();
    for col in 0..n {
        let pivot = (col..n).find(|&row| !a[row][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return ExactScalar::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = &det * &p;
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &p;
            for k in col..n {
                let t = &factor * &a[col][k];
                a[row][k] = &a[row][k] - &t;
            }
        }
    }
    det
}

/// Solves A x = b exactly; errors with `SingularSystem` when A is singular.
fn solve_exact_linear(mut a: Vec<Vec<ExactScalar>>, mut b: Vec<ExactScalar>) -> Result<Vec<ExactScalar>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&row| !a[row][col].is_zero())
            .ok_or(Error::SingularSystem)?;
        a.swap(pivot, col);
        b.swap(pivot, col);
        let p = a[col][col].clone();
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let factor = &a[row][col] / &p;
            for k in col..n {
                let t = &factor * &a[col][k];
                a[row][k] = &a[row][k] - &t;
            }
            let t = &factor * &b[col];
            b[row] = &b[row] - &t;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// The unique polynomial L of degree <= m-1 with L^{(r_j)}(s_j) = targets[j].
pub fn solve_boundary(
    nodes: &NodeSystem,
    targets: &[ExactScalar],
) -> Result<Polynomial<ExactScalar>> {
    assert_eq!(targets.len(), nodes.m());
    let coeffs = solve_exact_linear(nodes.boundary_matrix.clone(), targets.to_vec())?;
    Ok(Polynomial::new(coeffs))
}

/// Memoized table of the biorthogonal basis polynomials for one node system.
#[derive(Clone, Debug)]
pub struct BasisTable {
    nodes: NodeSystem,
    table: Vec<Vec<Polynomial<ExactScalar>>>, // table[n][j]
}

impl BasisTable {
    /// Builds the basis by the constructive recurrence: the n = 0 row solves
    /// the delta boundary data; each later row is the m-fold antiderivative
    /// anchored at 0, corrected by a boundary solve.
    pub fn new(nodes: &NodeSystem, n_max: usize) -> Result<Self> {
        if !nodes.is_admissible() {
            return Err(Error::SingularSystem);
        }
        let m = nodes.m();
        let mut table: Vec<Vec<Polynomial<ExactScalar>>> = Vec::with_capacity(n_max + 1);
        let mut row0 = Vec::with_capacity(m);
        for j in 0..m {
            let mut targets = vec![ExactScalar::zero(); m];
            targets[j] = ExactScalar::one();
            row0.push(solve_boundary(nodes, &targets)?);
        }
        table.push(row0);
        for n in 1..=n_max {
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                let l = table[n - 1][j].antiderivative_vanishing_at(m, &ExactScalar::zero());
                let targets: Vec<ExactScalar> = (0..m)
                    .map(|ell| l.derivative(nodes.r[ell]).eval(&nodes.s[ell]))
                    .collect();
                let correction = solve_boundary(nodes, &targets)?;
                row.push(l.sub(&correction));
            }
            table.push(row);
        }
        Ok(BasisTable {
            nodes: nodes.clone(),
            table,
        })
    }

    pub fn nodes(&self) -> &NodeSystem {
        &self.nodes
    }

    pub fn n_max(&self) -> usize {
        self.table.len() - 1
    }

    pub fn lambda(&self, n: usize, j: usize) -> &Polynomial<ExactScalar> {
        &self.table[n][j]
    }
}

/// Single basis polynomial without keeping the table around.
pub fn lambda_polynomial(
    nodes: &NodeSystem,
    n: usize,
    j: usize,
) -> Result<Polynomial<ExactScalar>> {
    Ok(BasisTable::new(nodes, n)?.table[n][j].clone())
}

/// Coefficient table a[k][j] = P^{(mk+r_j)}(s_j); finitely many rows are
/// nonzero, and reconstruction is the exact identity.
pub fn project_polynomial(
    nodes: &NodeSystem,
    p: &Polynomial<ExactScalar>,
) -> Result<Vec<Vec<ExactScalar>>> {
    if !nodes.is_admissible() {
        return Err(Error::SingularSystem);
    }
    let m = nodes.m();
    let deg = p.degree().map(|d| d as i64).unwrap_or(-1);
    let rows = if deg < 0 { 1 } else { (deg as usize) / m + 1 };
    Ok((0..rows)
        .map(|k| {
            (0..m)
                .map(|j| p.derivative(m * k + nodes.r[j]).eval(&nodes.s[j]))
                .collect()
        })
        .collect())
}

/// Sum of a[k][j] * Lambda_{kj} over the table.
pub fn reconstruct_polynomial(
    basis: &BasisTable,
    coeffs: &[Vec<ExactScalar>],
) -> Polynomial<ExactScalar> {
    let mut acc = Polynomial::zero();
    for (k, row) in coeffs.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            if !a.is_zero() {
                acc = acc.add(&basis.lambda(k, j).scale(a));
            }
        }
    }
    acc
}

/// Certified coefficient-growth constant: every basis coefficient satisfies
/// |coeff_i Lambda_{nj}| <= theta^{m(n+1)-i} / i!.
#[derive(Clone, Copy, Debug)]
pub struct ThetaBound {
    pub theta: f64,
    /// Operator constant of the inverse boundary map in the weighted basis
    /// (z^i / i!), measured against the max norm on boundary data.
    pub b: f64,
}

pub fn theta_bound(nodes: &NodeSystem) -> Result<ThetaBound> {
    if !nodes.is_admissible() {
        return Err(Error::SingularSystem);
    }
    let m = nodes.m();
    let mut sols = Vec::with_capacity(m);
    for ell in 0..m {
        let mut targets = vec![ExactScalar::zero(); m];
        targets[ell] = ExactScalar::one();
        sols.push(solve_boundary(nodes, &targets)?);
    }
    // b = max_i i! * sum_ell |coeff_i of the unit solutions|: for arbitrary
    // boundary data t this gives |coeff_i solve(t)| <= b * max|t_ell| / i!.
    let mut b: f64 = 0.0;
    let mut fact = 1.0;
    for i in 0..m {
        if i > 0 {
            fact *= i as f64;
        }
        let col: f64 = sols.iter().map(|p| p.coeff(i).abs()).sum();
        b = b.max(fact * col);
    }
    b = b.max(1e-300);

    let a = nodes.max_node_abs().max(1.0);
    // theta must additionally dominate the n = 0 row directly.
    let mut theta_floor: f64 = 1.0;
    let mut fact = 1.0;
    for i in 0..m {
        if i > 0 {
            fact *= i as f64;
        }
        for p in &sols {
            let c = p.coeff(i).abs();
            if c > 0.0 {
                theta_floor = theta_floor.max((fact * c).powf(1.0 / (m - i) as f64));
            }
        }
    }

    let cond = |theta: f64| theta >= b * a.powi(m as i32) * (a / theta).exp();
    let mut hi = theta_floor;
    while !cond(hi) {
        hi *= 2.0;
    }
    let mut lo = (hi / 2.0).max(theta_floor);
    if cond(lo) {
        lo = theta_floor;
    }
    // smallest certified theta on the grid, bisected to 1e-3 relative
    if cond(lo) {
        hi = lo;
    } else {
        while hi - lo > 1e-3 * hi {
            let mid = 0.5 * (lo + hi);
            if cond(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    Ok(ThetaBound { theta: hi, b })
}

/// Checks the Lemma-5 inequality coefficientwise against a computed table.
pub fn theta_certifies(bound: &ThetaBound, basis: &BasisTable) -> bool {
    let m = basis.nodes().m();
    for n in 0..=basis.n_max() {
        for j in 0..m {
            let p = basis.lambda(n, j);
            let mut fact = 1.0;
            for i in 0..=p.degree().unwrap_or(0) {
                if i > 0 {
                    fact *= i as f64;
                }
                let lhs = p.coeff(i).abs();
                let rhs = bound.theta.powi((m * (n + 1)) as i32 - i as i32) / fact;
                if lhs > rhs * (1.0 + 1e-12) {
                    return false;
                }
            }
        }
    }
    true
}

/// Convenience: approximate images of the basis row for downstream numeric
/// work.
pub fn lambda_approx(basis: &BasisTable, n: usize, j: usize) -> Polynomial<Complex64> {
    basis.lambda(n, j).to_approx()
}
