//! Dressing transformations: solutions of `g ξ± = ξ̃± g̃`.

use crate::factorization::{factorize_dual, gauss_decompose};
use crate::linalg::{self, c, CMat};
use crate::Result;

#[derive(Debug, Clone)]
pub struct Dressed {
    pub g: CMat,
    pub xi_plus: CMat,
    pub xi_minus: CMat,
}

impl Dressed {
    /// `max(‖gξ₊ − ξ̃₊g̃‖, ‖gξ₋ − ξ̃₋g̃‖)`.
    pub fn equation_residual(&self, g: &CMat, xi_plus: &CMat, xi_minus: &CMat) -> f64 {
        let a = linalg::max_diff(&(g * xi_plus), &(&self.xi_plus * &self.g));
        let b = linalg::max_diff(&(g * xi_minus), &(&self.xi_minus * &self.g));
        a.max(b)
    }
}

/// Factor `k = g ξ₋ ξ₊⁻¹ g⁻¹` as `η₋ η₊⁻¹`; then `ξ̃± = η±`, `g̃ = ξ̃₊⁻¹ g ξ₊`.
pub fn dressing_transform(xi_plus: &CMat, xi_minus: &CMat, g: &CMat) -> Result<Dressed> {
    let inv = |m: &CMat| linalg::inverse(m).expect("group element");
    let k_inv = g * xi_plus * inv(xi_minus) * inv(g);
    let eta = factorize_dual(&k_inv)?;
    let g_t = inv(&eta.plus) * g * xi_plus;
    Ok(Dressed { g: g_t, xi_plus: eta.plus, xi_minus: eta.minus })
}

#[derive(Debug, Clone)]
pub struct DressedBorelPair {
    pub x: CMat,
    pub h: CMat,
    pub xi_plus: CMat,
    pub xi_minus: CMat,
}

/// Dressing on `D(B⁺) ≅ G × H`: with `k = x ξ₋ ξ₊⁻¹ x⁻¹ = L D U` and
/// `a = ([ξ₊]₀ [ξ₋]₀ D)^{1/2}`, set `ξ̃₋ = La`, `ξ̃₊ = (a⁻¹DU)⁻¹`,
/// `x̃ = ξ̃₊⁻¹ x ξ₊`, `h̃ = [ξ̃₊]₀⁻¹ h [ξ₊]₀`. Here `ξ±` are unconstrained
/// elements of `B±`.
pub fn double_borel_dressing(xi_plus: &CMat, xi_minus: &CMat, x: &CMat, h: &CMat) -> Result<DressedBorelPair> {
    let inv = |m: &CMat| linalg::inverse(m).expect("group element");
    let k = x * xi_minus * inv(xi_plus) * inv(x);
    let t = gauss_decompose(&k)?;
    let d = t.cartan_entries();
    let a: Vec<_> = (0..d.len()).map(|i| (xi_plus[(i, i)] * xi_minus[(i, i)] * d[i]).sqrt()).collect();
    let a_inv: Vec<_> = a.iter().map(|z| c(1.0) / z).collect();
    let xm = &t.lower * linalg::diag(&a);
    let xp = inv(&(linalg::diag(&a_inv) * &t.cartan * &t.upper));
    let x_t = inv(&xp) * x * xi_plus;
    let h_t = inv(&linalg::diag_part(&xp)) * h * linalg::diag_part(xi_plus);
    Ok(DressedBorelPair { x: x_t, h: h_t, xi_plus: xp, xi_minus: xm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_dual_element, random_sl, seeded};

    #[test]
    fn identity_dressing_is_trivial() {
        let mut rng = seeded(7);
        let g = random_sl(3, &mut rng);
        let d = dressing_transform(&linalg::eye(3), &linalg::eye(3), &g).unwrap();
        assert!(linalg::max_diff(&d.g, &g) < 1e-12);
    }

    #[test]
    fn dressing_solves_both_equations() {
        let mut rng = seeded(8);
        let g = random_sl(3, &mut rng);
        let (p, m) = random_dual_element(3, 0.2, &mut rng);
        let d = dressing_transform(&p, &m, &g).unwrap();
        assert!(d.equation_residual(&g, &p, &m) < 1e-12);
        let prod = linalg::diag_part(&d.xi_plus) * linalg::diag_part(&d.xi_minus);
        assert!(linalg::max_diff(&prod, &linalg::eye(3)) < 1e-12);
    }
}
