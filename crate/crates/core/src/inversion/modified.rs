use crate::error::{Error, Result};
use crate::forward::GptSet;
use crate::linalg::{self, CMatrix};
use crate::C64;

use super::DEFAULT_CONDITION_CAP;

/// `N⁽¹ᐟ²⁾ = N⁽¹⁾(N⁽²⁾)⁻¹` and the data needed to form `𝕄(t)` for any `t`.
#[derive(Debug, Clone)]
pub struct HalfGpts {
    n1: CMatrix,
    n2: CMatrix,
    nhalf: CMatrix,
    /// `conj(N⁽¹ᐟ²⁾)·N⁽¹ᐟ²⁾`
    b: CMatrix,
    n2_condition: f64,
}

impl HalfGpts {
    /// `N⁽²⁾` is inverted as `D⁻¹(D⁻¹N⁽²⁾D⁻¹)⁻¹D⁻¹` with `D = diag(√|N⁽²⁾_nn|)`; its entries
    /// grow like `γ^{2n}`, and the scaled matrix is the one whose condition is capped.
    pub fn new(gpts: &GptSet, condition_cap: f64) -> Result<Self> {
        let n2 = gpts.n2();
        let k = gpts.ord();
        let d: Vec<f64> = (0..k).map(|i| n2[(i, i)].norm().sqrt()).collect();
        if d.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::Singular("N2 has a vanishing diagonal entry".into()));
        }
        let scaled = CMatrix::from_fn(k, k, |i, j| n2[(i, j)] / (d[i] * d[j]));
        let n2_condition = linalg::condition_number(&scaled);
        if !(n2_condition <= condition_cap) {
            return Err(Error::IllConditioned { cond: n2_condition, cap: condition_cap });
        }
        let scaled_inv = scaled
            .lu()
            .try_inverse()
            .ok_or_else(|| Error::Singular("N2 finite section".into()))?;
        let n2_inv = CMatrix::from_fn(k, k, |i, j| scaled_inv[(i, j)] / (d[i] * d[j]));
        let nhalf = gpts.n1() * n2_inv;
        let b = nhalf.map(|z| z.conj()) * &nhalf;
        Ok(Self { n1: gpts.n1().clone(), n2: n2.clone(), nhalf, b, n2_condition })
    }

    pub fn ord(&self) -> usize {
        self.n2.nrows()
    }

    pub fn nhalf(&self) -> &CMatrix {
        &self.nhalf
    }

    pub fn n2_condition(&self) -> f64 {
        self.n2_condition
    }

    /// `𝕄(t) = (I − B)(I − 4t²B)⁻¹` with `B = conj(N⁽¹ᐟ²⁾)N⁽¹ᐟ²⁾`; exactly `I` at `t = ±1/2`.
    pub fn m_of_t(&self, t: f64) -> Result<CMatrix> {
        let k = self.ord();
        let id = linalg::identity(k);
        let four_t2 = 4.0 * t * t;
        if four_t2 == 1.0 {
            return Ok(id);
        }
        let denom = &id - &self.b * C64::new(four_t2, 0.0);
        let inv = linalg::inverse(&denom, &format!("I - 4t^2 conj(Nhalf) Nhalf at t = {t}"))?;
        Ok((id - &self.b) * inv)
    }

    pub fn at(&self, t: f64) -> Result<ModifiedGpts> {
        let m_t = self.m_of_t(t)?;
        // 𝕄 = I at t = ±1/2: return the data untouched so the extreme formulas agree bitwise
        let (tilde1, tilde2) = if 4.0 * t * t == 1.0 {
            (self.n1.clone(), self.n2.clone())
        } else {
            let tilde2 = &m_t * &self.n2;
            (&self.nhalf * &tilde2, tilde2)
        };
        Ok(ModifiedGpts { t, nhalf: self.nhalf.clone(), m_t, tilde1, tilde2, n2_condition: self.n2_condition })
    }
}

/// Modified GPTs `Ñ⁽¹⁾ = N⁽¹ᐟ²⁾𝕄(t)N⁽²⁾`, `Ñ⁽²⁾ = 𝕄(t)N⁽²⁾` at one value of `t`.
#[derive(Debug, Clone)]
pub struct ModifiedGpts {
    t: f64,
    nhalf: CMatrix,
    m_t: CMatrix,
    tilde1: CMatrix,
    tilde2: CMatrix,
    n2_condition: f64,
}

/// Modified GPTs at `t` with the default condition cap on `N⁽²⁾`.
pub fn modified_gpts(gpts: &GptSet, t: f64) -> Result<ModifiedGpts> {
    HalfGpts::new(gpts, DEFAULT_CONDITION_CAP)?.at(t)
}

impl ModifiedGpts {
    pub fn ord(&self) -> usize {
        self.tilde2.nrows()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn nhalf(&self) -> &CMatrix {
        &self.nhalf
    }

    pub fn m_t(&self) -> &CMatrix {
        &self.m_t
    }

    pub fn tilde1(&self) -> &CMatrix {
        &self.tilde1
    }

    pub fn tilde2(&self) -> &CMatrix {
        &self.tilde2
    }

    pub fn n2_condition(&self) -> f64 {
        self.n2_condition
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{faber_matrix, scaling_matrices, ConformalMap};
    use crate::forward::{gpt_analytic, Material};

    fn map() -> ConformalMap {
        ConformalMap::new(
            1.2,
            C64::new(0.1, 0.3),
            vec![C64::new(0.2, -0.1), C64::new(0.05, 0.03)],
        )
        .unwrap()
    }

    #[test]
    fn disk_gives_identity_m() {
        let lam = Material::from_lambda(2.0, 1.0).unwrap();
        let g = gpt_analytic(&ConformalMap::disk(C64::new(0.5, 0.0), 1.0).unwrap(), &lam, 4).unwrap();
        for t in [-3.0, 0.0, 0.7, 2.0] {
            let m = modified_gpts(&g, t).unwrap();
            assert!(linalg::max_abs(m.nhalf()) < 1e-13);
            assert!(linalg::max_abs(&(m.m_t() - linalg::identity(4))) < 1e-13);
        }
    }

    #[test]
    fn extreme_t_is_identity() {
        let g = gpt_analytic(&map(), &Material::perfect_conductor(1.0).unwrap(), 5).unwrap();
        let m = modified_gpts(&g, 0.5).unwrap();
        assert_eq!(m.m_t(), &linalg::identity(5));
        assert_eq!(m.tilde2(), g.n2());
    }

    #[test]
    fn t_zero() {
        let g = gpt_analytic(&map(), &Material::from_lambda(1.3, 1.0).unwrap(), 5).unwrap();
        let m = modified_gpts(&g, 0.0).unwrap();
        let b = m.nhalf().map(|z| z.conj()) * m.nhalf();
        assert!(linalg::max_abs(&(m.m_t() - (linalg::identity(5) - b))) < 1e-13);
    }

    #[test]
    fn tilde_n2_at_true_lambda_is_diagonal_in_faber_basis() {
        let map = map();
        let lambda = -1.7;
        let ord = 6;
        let g = gpt_analytic(&map, &Material::from_lambda(lambda, 1.0).unwrap(), ord).unwrap();
        let m = modified_gpts(&g, lambda).unwrap();
        let p = faber_matrix(&map, ord).unwrap().matrix();
        let s = scaling_matrices(map.gamma(), ord).unwrap();
        let d = p.map(|z| z.conj()) * m.tilde2() * p.transpose() * s.n_inv();
        let expected = s.gamma_2n() * C64::new(2.0 * std::f64::consts::PI / lambda, 0.0);
        assert!(d[(0, 1)].norm() < 1e-10);
        let err = d - &expected;
        // finite sections of N1 N2⁻¹ only couple into the trailing rows
        let lead = 3;
        assert!(linalg::max_abs(&err.view((0, 0), (lead, lead)).into_owned()) < 1e-12 * linalg::max_abs(&expected));
        assert!(linalg::max_abs(&err) < 1e-8 * linalg::max_abs(&expected));
    }

    #[test]
    fn ill_conditioned_n2_is_reported() {
        let g = gpt_analytic(&map(), &Material::from_lambda(1.0, 1.0).unwrap(), 6).unwrap();
        assert!(matches!(HalfGpts::new(&g, 1.0 + 1e-9), Err(Error::IllConditioned { .. })));
    }
}
