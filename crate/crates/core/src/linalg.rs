//! Dense complex matrix helpers shared by every module.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C = Complex64;
pub type CMat = DMatrix<C>;

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(n: usize) -> CMat {
    CMat::zeros(n, n)
}

/// Matrix unit `E_ij` (zero-based indices).
pub fn unit(n: usize, i: usize, j: usize) -> CMat {
    let mut m = zeros(n);
    m[(i, j)] = c(1.0);
    m
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| c(rows[i][j]))
}

pub fn from_real(n: usize, data: &[f64]) -> CMat {
    CMat::from_fn(n, n, |i, j| c(data[i * n + j]))
}

pub fn diag(entries: &[C]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { entries[i] } else { c(0.0) })
}

pub fn diagonal_entries(m: &CMat) -> Vec<C> {
    (0..m.nrows()).map(|i| m[(i, i)]).collect()
}

pub fn trace(m: &CMat) -> C {
    m.trace()
}

/// Traceless projection `x - tr(x)/n`.
pub fn traceless(m: &CMat) -> CMat {
    let n = m.nrows();
    let t = m.trace() / c(n as f64);
    let mut out = m.clone();
    for i in 0..n {
        out[(i, i)] -= t;
    }
    out
}

pub fn strict_upper(m: &CMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| if j > i { m[(i, j)] } else { c(0.0) })
}

pub fn strict_lower(m: &CMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| if j < i { m[(i, j)] } else { c(0.0) })
}

pub fn diag_part(m: &CMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| if i == j { m[(i, j)] } else { c(0.0) })
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn det(m: &CMat) -> C {
    if m.nrows() == 0 {
        return c(1.0);
    }
    m.clone().lu().determinant()
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    m.clone().try_inverse()
}

pub fn expm(m: &CMat) -> CMat {
    m.exp()
}

pub fn submatrix(m: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    CMat::from_fn(rows.len(), cols.len(), |a, b| m[(rows[a], cols[b])])
}

/// `det m[rows, cols]`; the empty minor is 1.
pub fn minor(m: &CMat, rows: &[usize], cols: &[usize]) -> C {
    debug_assert_eq!(rows.len(), cols.len());
    det(&submatrix(m, rows, cols))
}

/// Trace gradient of a minor: the matrix `T` with `d minor[ξ] = tr(T ξ)`.
/// `T[j, i]` is the signed cofactor of entry `(i, j)` inside the minor.
pub fn minor_gradient(m: &CMat, rows: &[usize], cols: &[usize]) -> CMat {
    let n = m.nrows();
    let mut t = zeros(n);
    for (a, &i) in rows.iter().enumerate() {
        let r: Vec<usize> = rows.iter().copied().filter(|&k| k != i).collect();
        for (b, &j) in cols.iter().enumerate() {
            let cl: Vec<usize> = cols.iter().copied().filter(|&k| k != j).collect();
            let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
            t[(j, i)] = minor(m, &r, &cl) * c(sign);
        }
    }
    t
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Count of singular values above `rel_tol` times the largest one.
pub fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&top) if top == 0.0 => 0,
        Some(&top) => s.iter().filter(|&&v| v > rel_tol * top).count(),
    }
}

/// Orthonormal basis (as columns) of the right null space of a square matrix.
pub fn null_space(m: &CMat, rel_tol: f64) -> CMat {
    let n = m.ncols();
    let svd = m.clone().svd(true, true);
    let v_t = svd.v_t.expect("v_t requested");
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| top == 0.0 || svd.singular_values[k] <= rel_tol * top)
        .collect();
    CMat::from_fn(n, cols.len(), |i, k| v_t[(cols[k], i)].conj())
}

/// Eigenvalues of a complex square matrix from the complex Schur form.
pub fn eigenvalues(m: &CMat) -> Vec<C> {
    let n = m.nrows();
    let (_, t) = m.clone().schur().unpack();
    let scale = max_abs(m).max(1.0);
    let mut out = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        if k + 1 < n && t[(k + 1, k)].norm() > 1e-14 * scale {
            let (a, b, cc, d) = (t[(k, k)], t[(k, k + 1)], t[(k + 1, k)], t[(k + 1, k + 1)]);
            let tr = a + d;
            let disc = ((a - d) * (a - d) + c(4.0) * b * cc).sqrt();
            out.push((tr + disc) / c(2.0));
            out.push((tr - disc) / c(2.0));
            k += 2;
        } else {
            out.push(t[(k, k)]);
            k += 1;
        }
    }
    out
}

/// Lexicographic order by (Re, Im).
pub fn lex_cmp(a: &C, b: &C) -> std::cmp::Ordering {
    use std::cmp::Ordering::Equal;
    let tol = 1e-9 * a.norm().max(b.norm()).max(1.0);
    let re = if (a.re - b.re).abs() <= tol { Equal } else { a.re.partial_cmp(&b.re).unwrap_or(Equal) };
    re.then(a.im.partial_cmp(&b.im).unwrap_or(Equal))
}

/// Principal `n`-th root used to push a matrix back to determinant one.
pub fn normalize_det(m: &CMat) -> CMat {
    let n = m.nrows() as f64;
    let d = det(m);
    m * d.powf(-1.0 / n)
}

/// Elementary symmetric functions `e_0..e_n` of the eigenvalues, from the
/// characteristic polynomial computed by Faddeev–LeVerrier.
pub fn elementary_symmetric(m: &CMat) -> Vec<C> {
    let n = m.nrows();
    let mut e = vec![c(1.0)];
    let mut mk = eye(n);
    let mut coeff = vec![c(1.0)];
    for k in 1..=n {
        let am = m * &mk;
        let ck = -am.trace() / c(k as f64);
        coeff.push(ck);
        mk = am;
        for i in 0..n {
            mk[(i, i)] += ck;
        }
    }
    for k in 1..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        e.push(coeff[k] * c(sign));
    }
    e
}

pub fn to_real_rows(m: &CMat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect()
}

pub fn max_imag(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minor_gradient_matches_finite_differences() {
        let x = from_real(3, &[1.0, 2.0, 0.5, -0.3, 1.1, 0.7, 0.2, -0.9, 1.4]);
        let rows = [0, 2];
        let cols = [1, 2];
        let t = minor_gradient(&x, &rows, &cols);
        let h = 1e-6;
        for i in 0..3 {
            for j in 0..3 {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[(i, j)] += c(h);
                xm[(i, j)] -= c(h);
                let fd = (minor(&xp, &rows, &cols) - minor(&xm, &rows, &cols)) / c(2.0 * h);
                assert!((fd - t[(j, i)]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn elementary_symmetric_of_diagonal() {
        let x = diag(&[c(2.0), c(3.0), c(5.0)]);
        let e = elementary_symmetric(&x);
        let want = [1.0, 10.0, 31.0, 30.0];
        for (a, b) in e.iter().zip(want) {
            assert!((a.re - b).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_of_rotation_are_complex_pair() {
        let x = from_real(2, &[0.0, -1.0, 1.0, 0.0]);
        let mut ev = eigenvalues(&x);
        ev.sort_by(lex_cmp);
        assert!((ev[0] - C::new(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - C::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn null_space_of_rank_one() {
        let x = from_real(2, &[1.0, 2.0, 2.0, 4.0]);
        let k = null_space(&x, 1e-10);
        assert_eq!(k.ncols(), 1);
        assert!(max_abs(&(&x * &k)) < 1e-12);
    }
}
