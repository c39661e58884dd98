use crate::conformal::ConformalMap;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::C64;

/// Coefficients `p_mn` of the Faber polynomials `F_m(z) = Σ_{n=0}^{m} p_mn zⁿ`, `m = 0..=M`.
#[derive(Debug, Clone)]
pub struct FaberMatrix {
    order: usize,
    rows: Vec<Vec<C64>>,
}

/// Runs `F_{m+1} = z·F_m − m·a_m − Σ_{n=0}^{m} a_n·F_{m−n}` from `F_0 = 1`.
pub fn faber_matrix(map: &ConformalMap, order: usize) -> Result<FaberMatrix> {
    faber_from_coeffs(|n| map.coeff(n), order)
}

/// Same recursion driven by an arbitrary coefficient source; `coeff(0)` is `a₀`.
pub(crate) fn faber_from_coeffs(coeff: impl Fn(usize) -> C64, order: usize) -> Result<FaberMatrix> {
    if order < 1 {
        return Err(Error::InvalidInput("Faber order must be at least 1".into()));
    }
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(order + 1);
    rows.push(vec![C64::new(1.0, 0.0)]);
    for m in 0..order {
        let mut next = vec![C64::default(); m + 2];
        for (k, p) in rows[m].iter().enumerate() {
            next[k + 1] += p;
        }
        next[0] -= coeff(m) * m as f64;
        for n in 0..=m {
            let a = coeff(n);
            if a == C64::default() {
                continue;
            }
            for (k, p) in rows[m - n].iter().enumerate() {
                next[k] -= a * p;
            }
        }
        rows.push(next);
    }
    Ok(FaberMatrix { order, rows })
}

impl FaberMatrix {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `[p_m0, p_m1, …, p_mm]`.
    pub fn row(&self, m: usize) -> &[C64] {
        &self.rows[m]
    }

    pub fn p(&self, m: usize, n: usize) -> C64 {
        self.rows[m].get(n).copied().unwrap_or_default()
    }

    /// Lower-triangular `P = (p_mn)_{m,n=1..M}`; constant terms do not enter the GPTs.
    pub fn matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.order, self.order, |i, j| self.p(i + 1, j + 1))
    }

    /// `F_m(z)` by Horner.
    pub fn eval(&self, m: usize, z: C64) -> C64 {
        self.rows[m].iter().rev().fold(C64::default(), |acc, p| acc * z + p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map() -> ConformalMap {
        ConformalMap::new(
            1.0,
            C64::new(0.4, -0.2),
            vec![C64::new(0.3, 0.1), C64::new(-0.1, 0.05), C64::new(0.02, -0.03)],
        )
        .unwrap()
    }

    #[test]
    fn low_order_rows_match_closed_forms() {
        let m = map();
        let (a0, a1, a2) = (m.coeff(0), m.coeff(1), m.coeff(2));
        let f = faber_matrix(&m, 4).unwrap();
        let close = |x: C64, y: C64| (x - y).norm() < 1e-14;

        let r1 = f.row(1);
        assert!(close(r1[0], -a0) && close(r1[1], C64::new(1.0, 0.0)));

        let r2 = f.row(2);
        assert!(close(r2[0], a0 * a0 - a1 * 2.0));
        assert!(close(r2[1], -a0 * 2.0));
        assert!(close(r2[2], C64::new(1.0, 0.0)));

        let r3 = f.row(3);
        assert!(close(r3[0], -a0 * a0 * a0 + a0 * a1 * 3.0 - a2 * 3.0));
        assert!(close(r3[1], (a0 * a0 - a1) * 3.0));
        assert!(close(r3[2], -a0 * 3.0));
        assert!(close(r3[3], C64::new(1.0, 0.0)));
    }

    #[test]
    fn structure_of_p() {
        let m = map();
        let f = faber_matrix(&m, 8).unwrap();
        let p = f.matrix();
        for i in 0..8 {
            assert_eq!(p[(i, i)], C64::new(1.0, 0.0));
            for j in i + 1..8 {
                assert_eq!(p[(i, j)], C64::default());
            }
            if i + 1 < 8 {
                // p_(m+1)m = -(m+1) a0 with m = i + 1
                let expected = -m.a0() * (i as f64 + 2.0);
                assert!((p[(i + 1, i)] - expected).norm() < 1e-13);
            }
        }
        for k in 0..=8 {
            assert_eq!(f.row(k).len(), k + 1);
        }
    }

    #[test]
    fn disk_gives_monomials() {
        let d = ConformalMap::disk(C64::default(), 3.0).unwrap();
        let f = faber_matrix(&d, 6).unwrap();
        let p = f.matrix();
        assert_eq!(p, CMatrix::identity(6, 6));
        assert!(f.row(4)[..4].iter().all(|c| *c == C64::default()));
    }

    #[test]
    fn order_zero_is_rejected() {
        assert!(faber_matrix(&map(), 0).is_err());
    }
}
