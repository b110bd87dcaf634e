//! Chevalley realization of sl_n, the standard r-matrix and the
//! factorizable-bialgebra checks built on it.
//!
//! Functionals on sl_n are represented by matrices through the trace form,
//! `l(ξ) = tr(L ξ)`.

use crate::cartan_weyl::CartanData;
use crate::linalg::{self, c, CMat, C};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasisKind {
    Cartan(usize),
    Raising(usize, usize),
    Lowering(usize, usize),
}

#[derive(Debug, Clone)]
pub struct BasisElement {
    pub kind: BasisKind,
    pub label: String,
    pub matrix: CMat,
}

/// Chevalley generators, root vectors and an ordered basis of sl_n.
#[derive(Debug, Clone)]
pub struct LieRealization {
    pub n: usize,
    pub cartan: CartanData,
    pub h: Vec<CMat>,
    pub e: Vec<CMat>,
    pub f: Vec<CMat>,
    /// `(i, j, e_α, f_α)` with `e_α = E_ij`, `f_α = E_ji`, `i < j`.
    pub root_vectors: Vec<(usize, usize, CMat, CMat)>,
    pub basis: Vec<BasisElement>,
    /// Inverse of the Cartan matrix, used for dual Cartan vectors.
    a_inv: DMatrix<f64>,
}

pub fn build_sln(n: usize) -> Result<LieRealization> {
    if !(2..=6).contains(&n) {
        return Err(Error::SizeOutOfRange(n));
    }
    let cartan = CartanData::sl(n)?;
    let u = |i, j| linalg::unit(n, i, j);
    let h: Vec<CMat> = (0..n - 1).map(|i| u(i, i) - u(i + 1, i + 1)).collect();
    let e: Vec<CMat> = (0..n - 1).map(|i| u(i, i + 1)).collect();
    let f: Vec<CMat> = (0..n - 1).map(|i| u(i + 1, i)).collect();
    let mut root_vectors = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            root_vectors.push((i, j, u(i, j), u(j, i)));
        }
    }
    let mut basis = Vec::new();
    for (i, m) in h.iter().enumerate() {
        basis.push(BasisElement { kind: BasisKind::Cartan(i), label: format!("H{}", i + 1), matrix: m.clone() });
    }
    for (i, j, ea, _) in &root_vectors {
        basis.push(BasisElement {
            kind: BasisKind::Raising(*i, *j),
            label: format!("E{}{}", i + 1, j + 1),
            matrix: ea.clone(),
        });
    }
    for (i, j, _, fa) in &root_vectors {
        basis.push(BasisElement {
            kind: BasisKind::Lowering(*j, *i),
            label: format!("E{}{}", j + 1, i + 1),
            matrix: fa.clone(),
        });
    }
    let r = n - 1;
    let a = DMatrix::from_fn(r, r, |i, j| cartan.cartan_matrix[i][j] as f64);
    let a_inv = a.try_inverse().expect("Cartan matrix of type A is invertible");
    Ok(LieRealization { n, cartan, h, e, f, root_vectors, basis, a_inv })
}

#[derive(Debug, Clone, Serialize)]
pub struct SerreResiduals {
    pub cartan_commute: f64,
    pub cartan_raising: f64,
    pub cartan_lowering: f64,
    pub raising_lowering: f64,
    pub serre_raising: f64,
    pub serre_lowering: f64,
}

impl SerreResiduals {
    pub fn max(&self) -> f64 {
        [
            self.cartan_commute,
            self.cartan_raising,
            self.cartan_lowering,
            self.raising_lowering,
            self.serre_raising,
            self.serre_lowering,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl LieRealization {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// Residuals of the six defining relation families.
    pub fn serre_residuals(&self) -> SerreResiduals {
        let r = self.rank();
        let a = &self.cartan.cartan_matrix;
        let br = linalg::commutator;
        let mut out = SerreResiduals {
            cartan_commute: 0.0,
            cartan_raising: 0.0,
            cartan_lowering: 0.0,
            raising_lowering: 0.0,
            serre_raising: 0.0,
            serre_lowering: 0.0,
        };
        for i in 0..r {
            for j in 0..r {
                let aij = c(a[i][j] as f64);
                out.cartan_commute = out.cartan_commute.max(linalg::max_abs(&br(&self.h[i], &self.h[j])));
                out.cartan_raising = out
                    .cartan_raising
                    .max(linalg::max_diff(&br(&self.h[i], &self.e[j]), &(&self.e[j] * aij)));
                out.cartan_lowering = out
                    .cartan_lowering
                    .max(linalg::max_diff(&br(&self.h[i], &self.f[j]), &(&self.f[j] * (-aij))));
                let want = if i == j { self.h[i].clone() } else { linalg::zeros(self.n) };
                out.raising_lowering =
                    out.raising_lowering.max(linalg::max_diff(&br(&self.e[i], &self.f[j]), &want));
                if i != j {
                    let power = (1 - a[i][j]) as usize;
                    let mut xe = self.e[j].clone();
                    let mut xf = self.f[j].clone();
                    for _ in 0..power {
                        xe = br(&self.e[i], &xe);
                        xf = br(&self.f[i], &xf);
                    }
                    out.serre_raising = out.serre_raising.max(linalg::max_abs(&xe));
                    out.serre_lowering = out.serre_lowering.max(linalg::max_abs(&xf));
                }
            }
        }
        out
    }

    /// Coordinates of a traceless matrix in the ordered basis.
    pub fn coords(&self, x: &CMat) -> Vec<C> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.dim());
        // diag(x) = Σ c_i H_i  ⇒  c_i = Σ_{k ≤ i} x_kk
        let mut acc = c(0.0);
        for i in 0..n - 1 {
            acc += x[(i, i)];
            out.push(acc);
        }
        for (i, j, _, _) in &self.root_vectors {
            out.push(x[(*i, *j)]);
        }
        for (i, j, _, _) in &self.root_vectors {
            out.push(x[(*j, *i)]);
        }
        out
    }

    pub fn from_coords(&self, coords: &[C]) -> CMat {
        self.basis.iter().zip(coords).fold(linalg::zeros(self.n), |acc, (b, &k)| acc + &b.matrix * k)
    }

    /// Trace-form representative of the functional dual to basis element `k`.
    pub fn dual_basis(&self, k: usize) -> DualVector {
        let n = self.n;
        let m = match self.basis[k].kind {
            BasisKind::Cartan(i) => {
                let mut m = linalg::zeros(n);
                for j in 0..n - 1 {
                    m += &self.h[j] * c(self.a_inv[(i, j)]);
                }
                m
            }
            BasisKind::Raising(i, j) | BasisKind::Lowering(i, j) => linalg::unit(n, j, i),
        };
        DualVector { matrix: m }
    }
}

/// Functional on sl_n, `l(ξ) = tr(matrix · ξ)`, with traceless `matrix`.
#[derive(Debug, Clone)]
pub struct DualVector {
    pub matrix: CMat,
}

impl DualVector {
    pub fn new(matrix: CMat) -> Self {
        DualVector { matrix: linalg::traceless(&matrix) }
    }

    pub fn zero(n: usize) -> Self {
        DualVector { matrix: linalg::zeros(n) }
    }

    pub fn eval(&self, xi: &CMat) -> C {
        (&self.matrix * xi).trace()
    }
}

/// Element `Σ c_ab b_a ⊗ b_b` of sl_n ⊗ sl_n.
#[derive(Debug, Clone)]
pub struct RTensor {
    pub n: usize,
    pub coefficients: DMatrix<C>,
    basis: Vec<CMat>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SparseEntry {
    pub a: usize,
    pub b: usize,
    pub re: f64,
    pub im: f64,
}

/// `r = ½ Σ (B⁻¹)_ij H_i ⊗ H_j + Σ_{α>0} e_α ⊗ f_α`.
pub fn build_r_matrix(real: &LieRealization) -> RTensor {
    let d = real.dim();
    let r = real.rank();
    let mut coeff = DMatrix::from_element(d, d, c(0.0));
    let b = DMatrix::from_fn(r, r, |i, j| real.cartan.symmetrized[i][j] as f64);
    let b_inv = b.try_inverse().expect("symmetrized Cartan matrix is invertible");
    for i in 0..r {
        for j in 0..r {
            coeff[(i, j)] = c(0.5 * b_inv[(i, j)]);
        }
    }
    let m = real.root_vectors.len();
    for k in 0..m {
        coeff[(r + k, r + m + k)] = c(1.0);
    }
    RTensor::from_coefficients(real, coeff)
}

impl RTensor {
    pub fn from_coefficients(real: &LieRealization, coefficients: DMatrix<C>) -> Self {
        RTensor { n: real.n, coefficients, basis: real.basis.iter().map(|b| b.matrix.clone()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_matrix(&self, k: usize) -> &CMat {
        &self.basis[k]
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, usize, C)> + '_ {
        let d = self.dim();
        (0..d).flat_map(move |a| (0..d).map(move |b| (a, b))).filter_map(move |(a, b)| {
            let k = self.coefficients[(a, b)];
            (k.norm() > 0.0).then_some((a, b, k))
        })
    }

    /// The tensor as an `n² × n²` matrix (Kronecker convention).
    pub fn to_tensor_matrix(&self) -> CMat {
        let n2 = self.n * self.n;
        self.nonzero().fold(CMat::zeros(n2, n2), |acc, (a, b, k)| acc + linalg::kron(&self.basis[a], &self.basis[b]) * k)
    }

    /// Flip `σ(r)`.
    pub fn sigma(&self) -> RTensor {
        RTensor { n: self.n, coefficients: self.coefficients.transpose(), basis: self.basis.clone() }
    }

    pub fn symmetric_part(&self) -> RTensor {
        RTensor { n: self.n, coefficients: &self.coefficients + self.coefficients.transpose(), basis: self.basis.clone() }
    }

    pub fn skew_part(&self) -> RTensor {
        RTensor { n: self.n, coefficients: &self.coefficients - self.coefficients.transpose(), basis: self.basis.clone() }
    }

    /// Returns a copy with one coefficient shifted by `eps`.
    pub fn perturbed(&self, a: usize, b: usize, eps: f64) -> RTensor {
        let mut out = self.clone();
        out.coefficients[(a, b)] += c(eps);
        out
    }

    pub fn to_sparse(&self) -> Vec<SparseEntry> {
        self.nonzero().map(|(a, b, k)| SparseEntry { a, b, re: k.re, im: k.im }).collect()
    }

    /// `⟨l ⊗ m, r⟩`.
    pub fn pair(&self, l: &CMat, m: &CMat) -> C {
        self.nonzero().map(|(a, b, k)| k * (l * &self.basis[a]).trace() * (m * &self.basis[b]).trace()).sum()
    }

    /// `⟨r, a ∧ b⟩` with `a ∧ b = ½(a⊗b − b⊗a)` for functionals `a`, `b`.
    pub fn wedge_pair(&self, a: &CMat, b: &CMat) -> C {
        (self.pair(a, b) - self.pair(b, a)) * c(0.5)
    }

    /// `δ(x) = [r, x⊗1 + 1⊗x]` as an `n² × n²` matrix.
    pub fn cobracket(&self, x: &CMat) -> CMat {
        let r = self.to_tensor_matrix();
        cobracket_with(&r, x)
    }

    /// Condition number of the coefficient matrix of `r + σ(r)`.
    pub fn casimir_condition_number(&self) -> f64 {
        let s = linalg::singular_values(&self.symmetric_part().coefficients);
        match (s.first(), s.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            _ => f64::INFINITY,
        }
    }

    /// `r₊(l) = (id ⊗ l)(r)`.
    pub fn r_plus(&self, l: &DualVector) -> CMat {
        let traces: Vec<C> = self.basis.iter().map(|b| l.eval(b)).collect();
        self.nonzero().fold(linalg::zeros(self.n), |acc, (a, b, k)| acc + &self.basis[a] * (k * traces[b]))
    }

    /// `r₋(l) = −(l ⊗ id)(r)`.
    pub fn r_minus(&self, l: &DualVector) -> CMat {
        let traces: Vec<C> = self.basis.iter().map(|b| l.eval(b)).collect();
        self.nonzero().fold(linalg::zeros(self.n), |acc, (a, b, k)| acc - &self.basis[b] * (k * traces[a]))
    }
}

fn cobracket_with(r: &CMat, x: &CMat) -> CMat {
    let id = linalg::eye(x.nrows());
    let s = linalg::kron(x, &id) + linalg::kron(&id, x);
    r * &s - &s * r
}

/// `[r₁₂, r₁₃] + [r₁₂, r₂₃] + [r₁₃, r₂₃]`, max-norm over the `n³ × n³` entries.
pub fn verify_cybe(r: &RTensor) -> f64 {
    let n = r.n;
    let id = linalg::eye(n);
    let n3 = n * n * n;
    let mut r12 = CMat::zeros(n3, n3);
    let mut r13 = CMat::zeros(n3, n3);
    let mut r23 = CMat::zeros(n3, n3);
    for (a, b, k) in r.nonzero() {
        let (x, y) = (&r.basis[a], &r.basis[b]);
        r12 += linalg::kron(&linalg::kron(x, y), &id) * k;
        r13 += linalg::kron(&linalg::kron(x, &id), y) * k;
        r23 += linalg::kron(&linalg::kron(&id, x), y) * k;
    }
    let br = linalg::commutator;
    linalg::max_abs(&(br(&r12, &r13) + br(&r12, &r23) + br(&r13, &r23)))
}

fn wedge(a: &CMat, b: &CMat) -> CMat {
    linalg::kron(a, b) - linalg::kron(b, a)
}

/// Max over generators of `‖[r, x⊗1+1⊗x] − δ_expected(x)‖`, with
/// `δ(e_i) = ½ d_i H_i ∧ e_i`, `δ(f_i) = ½ d_i H_i ∧ f_i`, `δ(H_i) = 0`.
pub fn verify_cocycle(r: &RTensor, real: &LieRealization) -> f64 {
    let rm = r.to_tensor_matrix();
    let n = real.n;
    let mut worst: f64 = 0.0;
    for i in 0..real.rank() {
        let d = c(0.5 * real.cartan.symmetrizers[i] as f64);
        let checks = [
            (&real.h[i], CMat::zeros(n * n, n * n)),
            (&real.e[i], wedge(&real.h[i], &real.e[i]) * d),
            (&real.f[i], wedge(&real.h[i], &real.f[i]) * d),
        ];
        for (x, want) in checks {
            worst = worst.max(linalg::max_diff(&cobracket_with(&rm, x), &want));
        }
    }
    worst
}

/// Factorization map `I(l) = r₊(l) − r₋(l)`.
pub fn factorization_iso(l: &DualVector, r: &RTensor) -> CMat {
    r.r_plus(l) - r.r_minus(l)
}

/// Matrix of `I` from dual-basis coordinates to basis coordinates.
pub fn factorization_matrix(real: &LieRealization, r: &RTensor) -> DMatrix<C> {
    let d = real.dim();
    let mut m = DMatrix::from_element(d, d, c(0.0));
    for k in 0..d {
        let img = real.coords(&factorization_iso(&real.dual_basis(k), r));
        for (j, v) in img.into_iter().enumerate() {
            m[(j, k)] = v;
        }
    }
    m
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    pub rank: usize,
    pub dim: usize,
    pub condition_number: f64,
    pub bijective: bool,
}

pub fn factorization_report(real: &LieRealization, r: &RTensor) -> IsoReport {
    let m = factorization_matrix(real, r);
    let s = linalg::singular_values(&m);
    let rank = linalg::numerical_rank(&m, 1e-12);
    let cond = match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    };
    IsoReport { rank, dim: real.dim(), condition_number: cond, bijective: rank == real.dim() }
}

/// Inverse of the factorization map: the functional `l` with `I(l) = x`.
pub fn factorization_inverse(real: &LieRealization, r: &RTensor, x: &CMat) -> Option<DualVector> {
    let m = factorization_matrix(real, r);
    let rhs = DMatrix::from_column_slice(real.dim(), 1, &real.coords(x));
    let sol = m.lu().solve(&rhs)?;
    let l = (0..real.dim()).fold(linalg::zeros(real.n), |acc, k| acc + &real.dual_basis(k).matrix * sol[(k, 0)]);
    Some(DualVector { matrix: l })
}

/// Induced bracket on 𝔤*: `[l, m]_*(x) = ⟨l ⊗ m, δ(x)⟩`.
pub fn costar_bracket(real: &LieRealization, r: &RTensor, l: &DualVector, m: &DualVector) -> DualVector {
    let rm = r.to_tensor_matrix();
    let lm = linalg::kron(&l.matrix, &m.matrix);
    let mut out = linalg::zeros(real.n);
    for (k, b) in real.basis.iter().enumerate() {
        let v = (&lm * cobracket_with(&rm, &b.matrix)).trace();
        out += &real.dual_basis(k).matrix * v;
    }
    DualVector { matrix: out }
}

/// `⟨y ⊗ z, r + σ(r)⟩`, which equals `tr(yz)` for the standard r.
pub fn symmetric_pairing(r: &RTensor, y: &CMat, z: &CMat) -> C {
    r.symmetric_part().pair(y, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_generators() {
        let g = build_sln(2).unwrap();
        assert_eq!(g.h[0], linalg::diag(&[c(1.0), c(-1.0)]));
        assert_eq!(linalg::commutator(&g.e[0], &g.f[0]), g.h[0]);
        assert_eq!(g.dim(), 3);
    }

    #[test]
    fn sl3_root_vector_is_commutator() {
        let g = build_sln(3).unwrap();
        let e13 = linalg::commutator(&g.e[0], &g.e[1]);
        assert_eq!(e13, linalg::unit(3, 0, 2));
        assert!(g.serre_residuals().max() == 0.0);
    }

    #[test]
    fn size_bounds() {
        assert!(build_sln(1).is_err());
        assert!(build_sln(7).is_err());
    }

    #[test]
    fn coords_round_trip() {
        let g = build_sln(4).unwrap();
        let x = linalg::traceless(&CMat::from_fn(4, 4, |i, j| c((i * 4 + j) as f64 * 0.37 - 1.0)));
        assert!(linalg::max_diff(&g.from_coords(&g.coords(&x)), &x) < 1e-13);
    }

    #[test]
    fn dual_basis_is_dual() {
        let g = build_sln(3).unwrap();
        for k in 0..g.dim() {
            let l = g.dual_basis(k);
            for (j, b) in g.basis.iter().enumerate() {
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((l.eval(&b.matrix) - c(want)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn sl2_r_matrix_coefficients() {
        let g = build_sln(2).unwrap();
        let r = build_r_matrix(&g);
        assert!((r.coefficients[(0, 0)] - c(0.25)).norm() < 1e-15);
        assert_eq!(r.coefficients[(1, 2)], c(1.0));
        let s = r.symmetric_part();
        assert!((s.coefficients[(0, 0)] - c(0.5)).norm() < 1e-15);
        assert_eq!(s.coefficients[(1, 2)], c(1.0));
        assert_eq!(s.coefficients[(2, 1)], c(1.0));
    }

    #[test]
    fn r_plus_minus_on_dual_of_e() {
        let g = build_sln(2).unwrap();
        let r = build_r_matrix(&g);
        let l = DualVector::new(g.f[0].clone());
        assert!(linalg::max_abs(&r.r_plus(&l)) < 1e-15);
        assert!(linalg::max_diff(&r.r_minus(&l), &(-&g.f[0])) < 1e-15);
        assert!(linalg::max_diff(&factorization_iso(&l, &r), &g.f[0]) < 1e-15);
        assert!(linalg::max_abs(&factorization_iso(&DualVector::zero(2), &r)) == 0.0);
    }

    #[test]
    fn cybe_fails_for_casimir_alone() {
        let g = build_sln(2).unwrap();
        let r = build_r_matrix(&g);
        let half = RTensor::from_coefficients(&g, r.symmetric_part().coefficients * c(0.5));
        assert!(verify_cybe(&half) > 1e-2);
    }

    #[test]
    fn sparse_export_counts() {
        let g = build_sln(3).unwrap();
        let r = build_r_matrix(&g);
        assert_eq!(r.to_sparse().len(), 4 + 3);
    }
}
