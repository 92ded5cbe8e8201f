//! Kernel side of the periodic analysis: the exponential matrix M(t), its
//! determinant Delta(t), the inverse coefficients c_{jk}(t), the generating
//! functions phi_j(t, z), the multiplicity of the zero of Delta at the
//! origin, and the certified zero-free radius.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::NodeSystem;
use crate::error::{Error, Result};

/// A node system paired with a primitive m-th root of unity.
#[derive(Clone, Debug)]
pub struct KernelSystem {
    m: usize,
    s: Vec<Complex64>,
    r: Vec<usize>,
    /// zeta_pows[k] = zeta^k for the chosen primitive root.
    zeta_pows: Vec<Complex64>,
}

impl KernelSystem {
    /// Uses zeta = e^{2 pi i / m}. Everything consumed downstream (the zero
    /// set of Delta, the phi_j) is independent of which primitive root is
    /// chosen.
    pub fn new(nodes: &NodeSystem) -> Self {
        Self::with_primitive_root(nodes, 1).expect("exponent 1 is always coprime to m")
    }

    /// zeta = e^{2 pi i g / m}; g must be coprime to m so the root stays
    /// primitive.
    pub fn with_primitive_root(nodes: &NodeSystem, g: usize) -> Result<Self> {
        let m = nodes.m();
        if gcd(g % m.max(1), m) != 1 && m > 1 {
            return Err(Error::InvalidNodes(format!(
                "exponent {} shares a factor with m = {}",
                g, m
            )));
        }
        let zeta_pows = (0..m)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * ((g * k) % m) as f64 / m as f64))
            .collect();
        Ok(KernelSystem {
            m,
            s: nodes.nodes().iter().map(|x| x.to_complex()).collect(),
            r: nodes.residues().to_vec(),
            zeta_pows,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn zeta(&self) -> Complex64 {
        if self.m == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            self.zeta_pows[1]
        }
    }

    /// Entry (k, l) = zeta^{k r_l} exp(zeta^k t s_l).
    pub fn matrix_m(&self, t: Complex64) -> Vec<Vec<Complex64>> {
        (0..self.m)
            .map(|k| {
                (0..self.m)
                    .map(|l| {
                        self.zeta_pows[(k * self.r[l]) % self.m]
                            * (self.zeta_pows[k] * t * self.s[l]).exp()
                    })
                    .collect()
            })
            .collect()
    }

    /// det M(t) by LU with partial pivoting.
    pub fn delta(&self, t: Complex64) -> Complex64 {
        det_lu(self.matrix_m(t))
    }

    /// Inverse of M(t); `NearSingular` when |det| drops below the floor
    /// 1e-13 relative to the Hadamard-style scale of M.
    pub fn c_matrix(&self, t: Complex64) -> Result<Vec<Vec<Complex64>>> {
        let m = self.matrix_m(t);
        let scale: f64 = m
            .iter()
            .map(|row| row.iter().map(|v| v.norm()).fold(0.0, f64::max))
            .product();
        let det = det_lu(m.clone());
        if det.norm() <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NearSingular { t });
        }
        invert(m).ok_or(Error::NearSingular { t })
    }

    /// phi_j(t, z) = sum_k c_{jk}(t) exp(zeta^k t z).
    pub fn phi(&self, j: usize, t: Complex64, z: Complex64) -> Result<Complex64> {
        let c = self.c_matrix(t)?;
        Ok(self.phi_with(&c, j, t, z))
    }

    /// Same, reusing a precomputed inverse for many (j, z).
    pub fn phi_with(
        &self,
        c: &[Vec<Complex64>],
        j: usize,
        t: Complex64,
        z: Complex64,
    ) -> Complex64 {
        (0..self.m)
            .map(|k| c[j][k] * (self.zeta_pows[k] * t * z).exp())
            .sum()
    }

    /// Multiplicity of t = 0 as a zero of Delta. The Taylor coefficients come
    /// from the exact Leibniz expansion of the determinant over permutations:
    /// Delta(t) = sum_sigma sign(sigma) c_sigma exp(lambda_sigma t).
    pub fn origin_zero_order(&self) -> Result<usize> {
        let max_order = self.m * self.m;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); max_order + 1];
        for (perm, sign) in permutations(self.m) {
            let mut c = Complex64::new(sign as f64, 0.0);
            let mut lam = Complex64::new(0.0, 0.0);
            for (l, &k) in perm.iter().enumerate() {
                c *= self.zeta_pows[(k * self.r[l]) % self.m];
                lam += self.zeta_pows[k] * self.s[l];
            }
            let mut pw = Complex64::new(1.0, 0.0);
            let mut fact = 1.0;
            for (nu, slot) in coeffs.iter_mut().enumerate() {
                if nu > 0 {
                    pw *= lam;
                    fact *= nu as f64;
                }
                *slot += c * pw / fact;
            }
        }
        let biggest = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if biggest <= 0.0 {
            return Err(Error::OrderUndetermined { max_order });
        }
        coeffs
            .iter()
            .position(|c| c.norm() >= 1e-8 * biggest)
            .ok_or(Error::OrderUndetermined { max_order })
    }

    /// Number of zeros of Delta (with multiplicity) strictly inside
    /// |t| = rho, by winding of Delta along the contour. Argument steps are
    /// subdivided adaptively until each stays below pi/2.
    pub fn zero_count(&self, rho: f64, samples: usize) -> Result<isize> {
        let vals: Vec<(f64, Complex64)> = (0..samples)
            .into_par_iter()
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / samples as f64;
                (theta, self.delta(Complex64::from_polar(rho, theta)))
            })
            .collect();
        let max_abs = vals.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
        let floor = 1e-12 * max_abs;
        if vals.iter().any(|(_, v)| v.norm() <= floor) {
            return Err(Error::ContourTooClose { radius: rho });
        }
        let mut total = 0.0;
        for k in 0..samples {
            let (t0, v0) = vals[k];
            let (t1, v1) = if k + 1 == samples {
                (2.0 * PI, vals[0].1)
            } else {
                vals[k + 1]
            };
            total += self.arg_step(rho, t0, t1, v0, v1, floor, 0)?;
        }
        Ok((total / (2.0 * PI)).round() as isize)
    }

    #[allow(clippy::too_many_arguments)]
    fn arg_step(
        &self,
        rho: f64,
        theta0: f64,
        theta1: f64,
        v0: Complex64,
        v1: Complex64,
        floor: f64,
        depth: usize,
    ) -> Result<f64> {
        let d = (v1 / v0).arg();
        if d.abs() <= std::f64::consts::FRAC_PI_2 {
            return Ok(d);
        }
        if depth >= 52 {
            return Err(Error::ContourTooClose { radius: rho });
        }
        let mid = 0.5 * (theta0 + theta1);
        let vm = self.delta(Complex64::from_polar(rho, mid));
        if vm.norm() <= floor {
            return Err(Error::ContourTooClose { radius: rho });
        }
        Ok(self.arg_step(rho, theta0, mid, v0, vm, floor, depth + 1)?
            + self.arg_step(rho, mid, theta1, vm, v1, floor, depth + 1)?)
    }

    /// Trapezoidal winding integral of Delta'/Delta with Delta' by central
    /// finite differences; cross-check for contours well away from zeros.
    pub fn winding_quadrature(&self, rho: f64, samples: usize) -> f64 {
        let h = 1e-6 * rho;
        let acc: Complex64 = (0..samples)
            .into_par_iter()
            .map(|k| {
                let theta = 2.0 * PI * k as f64 / samples as f64;
                let t = Complex64::from_polar(rho, theta);
                let dir = Complex64::from_polar(1.0, theta);
                let dp = (self.delta(t + dir * h) - self.delta(t - dir * h)) / (2.0 * h * dir);
                // dt = i t dtheta; (1/2 pi i) * integrand * dt
                dp / self.delta(t) * t
            })
            .sum();
        (acc / samples as f64).re
    }

    /// Largest rho <= search_radius whose argument-principle zero count
    /// equals the origin multiplicity, bisected to 1e-10 relative.
    pub fn zero_free_radius(&self, search_radius: f64) -> Result<DeltaProfile> {
        assert!(search_radius > 0.0, "search radius must be positive");
        let samples = 4096;
        let nu = self.origin_zero_order()? as isize;
        let good = |rho: f64| -> Result<bool> {
            match self.zero_count(rho, samples) {
                Ok(c) => Ok(c == nu),
                Err(Error::ContourTooClose { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        };
        if good(search_radius)? {
            return Ok(DeltaProfile {
                origin_order: nu as usize,
                zero_free_radius: search_radius,
                search_radius,
                contour_samples: samples,
            });
        }
        let mut hi = search_radius;
        let mut lo = search_radius / 2.0;
        let mut halvings = 0;
        while !good(lo)? {
            hi = lo;
            lo /= 2.0;
            halvings += 1;
            if halvings > 200 {
                return Err(Error::ContourTooClose { radius: lo });
            }
        }
        while hi - lo > 1e-10 * hi {
            let mid = 0.5 * (lo + hi);
            if good(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(DeltaProfile {
            origin_order: nu as usize,
            zero_free_radius: 0.5 * (lo + hi),
            search_radius,
            contour_samples: samples,
        })
    }
}

/// Result of the zero-free analysis of Delta.
#[derive(Clone, Copy, Debug)]
pub struct DeltaProfile {
    pub origin_order: usize,
    pub zero_free_radius: f64,
    pub search_radius: f64,
    pub contour_samples: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn det_lu(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for row in col + 1..n {
            let f = a[row][col] / p;
            for k in col..n {
                let t = f * a[col][k];
                a[row][k] -= t;
            }
        }
    }
    det
}

fn invert(a: Vec<Vec<Complex64>>) -> Option<Vec<Vec<Complex64>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Complex64>> = a
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| {
                if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| aug[x][col].norm().total_cmp(&aug[y][col].norm()))?;
        if aug[pivot][col].norm() == 0.0 {
            return None;
        }
        aug.swap(pivot, col);
        let p = aug[col][col];
        for k in 0..2 * n {
            aug[col][k] /= p;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = aug[row][col];
            if f.norm() == 0.0 {
                continue;
            }
            for k in 0..2 * n {
                let t = f * aug[col][k];
                aug[row][k] -= t;
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// All permutations of 0..m with their signs (by inversion count).
fn permutations(m: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    let mut used = vec![false; m];
    build_permutations(m, &mut cur, &mut used, &mut out);
    out
}

fn build_permutations(
    m: usize,
    cur: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<(Vec<usize>, i32)>,
) {
    if cur.len() == m {
        let mut inversions = 0;
        for i in 0..m {
            for j in i + 1..m {
                if cur[i] > cur[j] {
                    inversions += 1;
                }
            }
        }
        out.push((cur.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
        return;
    }
    for v in 0..m {
        if !used[v] {
            used[v] = true;
            cur.push(v);
            build_permutations(m, cur, used, out);
            cur.pop();
            used[v] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn es(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn lidstone() -> KernelSystem {
        KernelSystem::new(&NodeSystem::new(vec![es(0), es(1)], vec![0, 0]).unwrap())
    }

    fn whittaker() -> KernelSystem {
        KernelSystem::new(&NodeSystem::new(vec![es(1), es(0)], vec![0, 1]).unwrap())
    }

    #[test]
    fn matrix_m_lidstone() {
        let sys = lidstone();
        let t = Complex64::new(0.7, 0.3);
        let m = sys.matrix_m(t);
        let one = Complex64::new(1.0, 0.0);
        assert!((m[0][0] - one).norm() < 1e-14);
        assert!((m[0][1] - t.exp()).norm() < 1e-14);
        assert!((m[1][0] - one).norm() < 1e-14);
        assert!((m[1][1] - (-t).exp()).norm() < 1e-13);
    }

    #[test]
    fn delta_closed_forms() {
        let sys = lidstone();
        let t = Complex64::new(1.0, 0.0);
        // Delta = -2 sinh t
        assert!((sys.delta(t) - (-2.0 * t.sinh())).norm() < 1e-12);
        assert!((sys.delta(t).re + 2.3504).abs() < 1e-3);

        let sys = whittaker();
        // Delta = -2 cosh t
        assert!((sys.delta(t) - (-2.0 * t.cosh())).norm() < 1e-12);
        assert!((sys.delta(Complex64::new(0.0, 0.0)).re + 2.0).abs() < 1e-12);
    }

    #[test]
    fn c_matrix_is_inverse() {
        let sys = lidstone();
        let t = Complex64::new(1.0, 0.0);
        let c = sys.c_matrix(t).unwrap();
        let m = sys.matrix_m(t);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += c[i][k] * m[k][j];
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((acc - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn c_matrix_near_singular() {
        let sys = whittaker();
        // cosh(i pi / 2) = cos(pi / 2) = 0
        let t = Complex64::new(0.0, std::f64::consts::FRAC_PI_2);
        assert!(matches!(
            sys.c_matrix(t),
            Err(Error::NearSingular { .. })
        ));
    }

    #[test]
    fn phi_closed_forms() {
        let sys = lidstone();
        let t = Complex64::new(0.8, 0.1);
        let z = Complex64::new(0.3, -0.2);
        let phi0 = sys.phi(0, t, z).unwrap();
        let phi1 = sys.phi(1, t, z).unwrap();
        let expected0 = ((Complex64::new(1.0, 0.0) - z) * t).sinh() / t.sinh();
        let expected1 = (t * z).sinh() / t.sinh();
        assert!((phi0 - expected0).norm() < 1e-12);
        assert!((phi1 - expected1).norm() < 1e-12);

        let sys = whittaker();
        let phi0 = sys.phi(0, t, z).unwrap();
        let expected0 = (t * z).cosh() / t.cosh();
        assert!((phi0 - expected0).norm() < 1e-12);
    }

    #[test]
    fn origin_orders() {
        assert_eq!(lidstone().origin_zero_order().unwrap(), 1);
        assert_eq!(whittaker().origin_zero_order().unwrap(), 0);
        // Poritsky m = 3 distinct nodes: multiplicity m(m-1)/2 = 3
        let p = KernelSystem::new(
            &NodeSystem::new(vec![es(0), es(1), es(2)], vec![0, 0, 0]).unwrap(),
        );
        assert_eq!(p.origin_zero_order().unwrap(), 3);
        // Gontcharoff r_j = j: Delta(0) is a Vandermonde in the roots of unity
        let g = KernelSystem::new(
            &NodeSystem::new(vec![es(0), es(1), es(2)], vec![0, 1, 2]).unwrap(),
        );
        assert_eq!(g.origin_zero_order().unwrap(), 0);
    }

    #[test]
    fn zero_free_radii() {
        let prof = lidstone().zero_free_radius(4.0).unwrap();
        assert!((prof.zero_free_radius - std::f64::consts::PI).abs() < 1e-9);
        let prof = whittaker().zero_free_radius(4.0).unwrap();
        assert!((prof.zero_free_radius - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        // m = 1: Delta never vanishes
        let m1 = KernelSystem::new(&NodeSystem::new(vec![es(0)], vec![0]).unwrap());
        let prof = m1.zero_free_radius(7.5).unwrap();
        assert_eq!(prof.zero_free_radius, 7.5);
    }

    #[test]
    fn quadrature_cross_check() {
        // away from any zero the trapezoidal Delta'/Delta integral matches
        let sys = lidstone();
        let w = sys.winding_quadrature(2.0, 4096);
        assert!((w - 1.0).abs() < 1e-3, "winding {w}");
    }

    #[test]
    fn primitive_root_independence() {
        let nodes = NodeSystem::new(vec![es(0), es(1), es(2), es(3)], vec![0, 0, 0, 0]).unwrap();
        let a = KernelSystem::new(&nodes).zero_free_radius(2.0).unwrap();
        let b = KernelSystem::with_primitive_root(&nodes, 3)
            .unwrap()
            .zero_free_radius(2.0)
            .unwrap();
        assert!((a.zero_free_radius - b.zero_free_radius).abs() < 1e-9);
    }
}
