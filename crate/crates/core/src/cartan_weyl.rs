//! Root, weight and Weyl-group combinatorics at the Cartan level.
//!
//! Conventions: `a_ij = <α_i^∨, α_j>`, so the simple root `α_j` has
//! fundamental-weight coordinates given by column `j` of the Cartan matrix.
//! Letters of Weyl words are zero-based internally.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("unsupported type {series}{rank}")]
    UnsupportedType { series: String, rank: usize },
    #[error("letter {letter} out of range for rank {rank}")]
    LetterOutOfRange { letter: usize, rank: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
}

impl Series {
    pub fn parse(s: &str) -> Option<Series> {
        match s.trim() {
            "A" | "a" => Some(Series::A),
            "B" | "b" => Some(Series::B),
            "C" | "c" => Some(Series::C),
            "D" | "d" => Some(Series::D),
            _ => None,
        }
    }

    fn min_rank(self) -> usize {
        match self {
            Series::A => 1,
            Series::B | Series::C => 2,
            Series::D => 4,
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
        };
        f.write_str(s)
    }
}

pub const MAX_RANK: usize = 8;

/// Small dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        IntMatrix { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn minus_identity(&self) -> IntMatrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m.set(i, i, m.get(i, i) - 1);
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
    }

    /// Rank over the rationals (fraction-free elimination in i128).
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<i128>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) as i128).collect()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| a[r][col] != 0) else { continue };
            a.swap(rank, p);
            for r in 0..self.rows {
                if r != rank && a[r][col] != 0 {
                    let (f, g) = (a[rank][col], a[r][col]);
                    for k in 0..self.cols {
                        a[r][k] = a[r][k] * f - a[rank][k] * g;
                    }
                    let d = a[r].iter().fold(0i128, |acc, &x| gcd128(acc, x));
                    if d > 1 {
                        for x in a[r].iter_mut() {
                            *x /= d;
                        }
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Basis of the integer kernel `{x ∈ Z^cols : m x = 0}` in row Hermite normal form.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<i64>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<i64>> = m.to_rows();
    let mut u = IntMatrix::identity(cols).to_rows();
    let col_op = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, dst: usize, src: usize, q: i64| {
        for row in a.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in u.iter_mut() {
            row[dst] -= q * row[src];
        }
    };
    let col_swap = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        for row in u.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut p = 0;
    for r in 0..rows {
        if p == cols {
            break;
        }
        for k in (p + 1)..cols {
            while a[r][k] != 0 {
                let q = a[r][p].div_euclid(a[r][k]);
                col_op(&mut a, &mut u, p, k, q);
                col_swap(&mut a, &mut u, p, k);
            }
        }
        if a[r][p] != 0 {
            p += 1;
        } else if let Some(k) = ((p + 1)..cols).find(|&k| a[r][k] != 0) {
            col_swap(&mut a, &mut u, p, k);
            p += 1;
        }
    }
    let basis: Vec<Vec<i64>> = (p..cols).map(|k| (0..cols).map(|i| u[i][k]).collect()).collect();
    row_hermite(basis)
}

/// Row Hermite normal form of a list of integer row vectors (zero rows dropped).
pub fn row_hermite(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return rows;
    }
    let cols = rows[0].len();
    let mut out_rank = 0;
    for col in 0..cols {
        for r in (out_rank + 1)..rows.len() {
            while rows[r][col] != 0 {
                let q = rows[out_rank][col].div_euclid(rows[r][col]);
                for k in 0..cols {
                    rows[out_rank][k] -= q * rows[r][k];
                }
                rows.swap(out_rank, r);
            }
        }
        if out_rank < rows.len() && rows[out_rank][col] != 0 {
            if rows[out_rank][col] < 0 {
                for x in rows[out_rank].iter_mut() {
                    *x = -*x;
                }
            }
            let piv = rows[out_rank][col];
            for r in 0..out_rank {
                let q = rows[r][col].div_euclid(piv);
                if q != 0 {
                    for k in 0..cols {
                        rows[r][k] -= q * rows[out_rank][k];
                    }
                }
            }
            out_rank += 1;
            if out_rank == rows.len() {
                break;
            }
        }
    }
    rows.truncate(out_rank);
    rows
}

/// Cartan data of a finite root system of classical type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CartanData {
    pub series: Series,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub symmetrizers: Vec<i64>,
    pub symmetrized: Vec<Vec<i64>>,
    pub fundamental_weights: Vec<String>,
    pub positive_roots: Vec<Vec<i64>>,
}

pub fn build_cartan_data(series: Series, rank: usize) -> Result<CartanData, CartanError> {
    if rank < series.min_rank() || rank > MAX_RANK {
        return Err(CartanError::UnsupportedType { series: series.to_string(), rank });
    }
    let r = rank;
    let mut a = vec![vec![0i64; r]; r];
    for i in 0..r {
        a[i][i] = 2;
    }
    match series {
        Series::A | Series::B | Series::C => {
            for i in 0..r.saturating_sub(1) {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            if series == Series::B {
                a[r - 1][r - 2] = -2;
            }
            if series == Series::C {
                a[r - 2][r - 1] = -2;
            }
        }
        Series::D => {
            for i in 0..r - 2 {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
            a[r - 3][r - 1] = -1;
            a[r - 1][r - 3] = -1;
        }
    }
    let d = symmetrizers(&a);
    let sym: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| d[i] * a[i][j]).collect()).collect();
    let mut data = CartanData {
        series,
        rank,
        cartan_matrix: a,
        symmetrizers: d,
        symmetrized: sym,
        fundamental_weights: (1..=r).map(|i| format!("ω{i}")).collect(),
        positive_roots: Vec::new(),
    };
    data.positive_roots = enumerate_positive_roots(&data);
    Ok(data)
}

/// Smallest positive integers `d` with `d_i a_ij = a_ji d_j`.
fn symmetrizers(a: &[Vec<i64>]) -> Vec<i64> {
    let r = a.len();
    // d as rationals num/den propagated along the (connected) Dynkin diagram
    let mut num = vec![0i64; r];
    let mut den = vec![1i64; r];
    num[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    let mut seen = vec![false; r];
    seen[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..r {
            if i != j && a[i][j] != 0 && !seen[j] {
                // d_j = d_i a_ij / a_ji
                num[j] = num[i] * a[i][j];
                den[j] = den[i] * a[j][i];
                let g = gcd128(num[j] as i128, den[j] as i128) as i64;
                num[j] /= g;
                den[j] /= g;
                if den[j] < 0 {
                    num[j] = -num[j];
                    den[j] = -den[j];
                }
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    let l = den.iter().fold(1i64, |acc, &x| acc / gcd128(acc as i128, x as i128) as i64 * x);
    let mut d: Vec<i64> = (0..r).map(|i| num[i] * (l / den[i])).collect();
    let g = d.iter().fold(0i128, |acc, &x| gcd128(acc, x as i128)) as i64;
    for x in d.iter_mut() {
        *x /= g;
    }
    d
}

fn reflect_root(cd: &CartanData, i: usize, beta: &mut [i64]) {
    let pairing: i64 = (0..cd.rank).map(|j| cd.cartan_matrix[i][j] * beta[j]).sum();
    beta[i] -= pairing;
}

fn enumerate_positive_roots(cd: &CartanData) -> Vec<Vec<i64>> {
    let r = cd.rank;
    let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for i in 0..r {
        let mut e = vec![0; r];
        e[i] = 1;
        seen.insert(e.clone(), ());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..r {
            let mut g = beta.clone();
            reflect_root(cd, i, &mut g);
            if g.iter().all(|&x| x >= 0) && g.iter().any(|&x| x > 0) && !seen.contains_key(&g) {
                seen.insert(g.clone(), ());
                queue.push_back(g);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_keys().collect();
    roots.sort_by_key(|b| (b.iter().sum::<i64>(), std::cmp::Reverse(b.clone())));
    roots
}

impl CartanData {
    pub fn sl(n: usize) -> Result<CartanData, CartanError> {
        if n < 2 {
            return Err(CartanError::UnsupportedType { series: "A".into(), rank: n.saturating_sub(1) });
        }
        build_cartan_data(Series::A, n - 1)
    }

    /// Matrix of `s_i` on the fundamental-weight basis (columns are images).
    pub fn reflection_matrix(&self, i: usize) -> IntMatrix {
        let r = self.rank;
        let mut m = IntMatrix::identity(r);
        for k in 0..r {
            let v = m.get(k, i) - self.cartan_matrix[k][i];
            m.set(k, i, v);
        }
        m
    }

    /// Simple root `α_i` in fundamental-weight coordinates.
    pub fn simple_root_weight(&self, i: usize) -> Weight {
        Weight { coords: (0..self.rank).map(|k| self.cartan_matrix[k][i]).collect() }
    }

    pub fn positive_root_count(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn is_positive_definite(&self) -> bool {
        // Sylvester's criterion on the symmetrized matrix.
        (1..=self.rank).all(|k| {
            let m = IntMatrix::from_rows(
                &self.symmetrized[..k].iter().map(|row| row[..k].to_vec()).collect::<Vec<_>>(),
            );
            int_det(&m) > 0
        })
    }
}

fn int_det(m: &IntMatrix) -> i128 {
    // Bareiss fraction-free elimination.
    let n = m.rows;
    let mut a: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j) as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match ((k + 1)..n).find(|&r| a[r][k] != 0) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

/// Integral weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight {
    pub coords: Vec<i64>,
}

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight { coords }
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut coords = vec![0; rank];
        coords[i] = 1;
        Weight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![0; rank] }
    }

    /// Always true: coordinates are stored as integers.
    pub fn in_lattice(&self) -> bool {
        true
    }

    pub fn neg(&self) -> Weight {
        Weight { coords: self.coords.iter().map(|x| -x).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

/// Element of the Weyl group, stored as a word in simple reflections.
#[derive(Debug, Clone, Serialize)]
pub struct WeylWord {
    pub letters: Vec<usize>,
    pub action: IntMatrix,
    pub length: usize,
    #[serde(skip)]
    cartan: CartanData,
}

impl PartialEq for WeylWord {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action
    }
}

impl Eq for WeylWord {}

impl WeylWord {
    /// Builds the element from a (not necessarily reduced) word; the stored
    /// letters are the canonical reduced word.
    pub fn new(cd: &CartanData, letters: &[usize]) -> Result<WeylWord, CartanError> {
        if let Some(&l) = letters.iter().find(|&&l| l >= cd.rank) {
            return Err(CartanError::LetterOutOfRange { letter: l, rank: cd.rank });
        }
        let action = word_action(cd, letters);
        let reduced = canonical_reduced_word(cd, letters);
        Ok(WeylWord { length: reduced.len(), letters: reduced, action, cartan: cd.clone() })
    }

    pub fn identity(cd: &CartanData) -> WeylWord {
        WeylWord::new(cd, &[]).expect("empty word")
    }

    pub fn longest(cd: &CartanData) -> WeylWord {
        let mut w = WeylWord::identity(cd);
        loop {
            match (0..cd.rank).find(|&i| !w.has_right_descent(i)) {
                Some(i) => w = w.mul(&WeylWord::new(cd, &[i]).expect("letter")),
                None => return w,
            }
        }
    }

    /// Coxeter element `s_1 s_2 ... s_r`.
    pub fn coxeter(cd: &CartanData) -> WeylWord {
        WeylWord::new(cd, &(0..cd.rank).collect::<Vec<_>>()).expect("coxeter")
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> WeylWord {
        let rev: Vec<usize> = self.letters.iter().rev().copied().collect();
        WeylWord::new(&self.cartan, &rev).expect("valid letters")
    }

    pub fn mul(&self, other: &WeylWord) -> WeylWord {
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        WeylWord::new(&self.cartan, &l).expect("valid letters")
    }

    pub fn act(&self, lambda: &Weight) -> Weight {
        Weight { coords: self.action.apply(&lambda.coords) }
    }

    /// `ℓ(w s_i) < ℓ(w)`, i.e. `w(α_i) < 0`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        let mut beta = vec![0; self.cartan.rank];
        beta[i] = 1;
        apply_word_to_root(&self.cartan, &self.letters, &mut beta);
        beta.iter().any(|&x| x < 0)
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversion_count(&self) -> usize {
        self.cartan
            .positive_roots
            .iter()
            .filter(|b| {
                let mut g = (*b).clone();
                apply_word_to_root(&self.cartan, &self.letters, &mut g);
                g.iter().any(|&x| x < 0)
            })
            .count()
    }

    /// Permutation of `{0..n-1}` for type `A_{n-1}`: `w(j) = s_{i1}(…s_{il}(j))`.
    pub fn permutation(&self) -> Vec<usize> {
        let n = self.cartan.rank + 1;
        (0..n)
            .map(|j| {
                self.letters.iter().rev().fold(j, |j, &k| {
                    if j == k {
                        k + 1
                    } else if j == k + 1 {
                        k
                    } else {
                        j
                    }
                })
            })
            .collect()
    }

    /// Inverse of [`WeylWord::permutation`] for type A.
    pub fn from_permutation(cd: &CartanData, perm: &[usize]) -> Result<WeylWord, CartanError> {
        if perm.len() != cd.rank + 1 {
            return Err(CartanError::RankMismatch(perm.len(), cd.rank + 1));
        }
        let mut p = perm.to_vec();
        let mut collected = Vec::new();
        while let Some(i) = (0..p.len() - 1).find(|&i| p[i] > p[i + 1]) {
            p.swap(i, i + 1);
            collected.push(i);
        }
        collected.reverse();
        WeylWord::new(cd, &collected)
    }

    /// One-based letters for reports.
    pub fn letters_one_based(&self) -> Vec<usize> {
        self.letters.iter().map(|l| l + 1).collect()
    }

    /// Every reduced word of this element.
    pub fn all_reduced_words(&self) -> Vec<Vec<usize>> {
        if self.length == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..self.cartan.rank {
            if self.has_right_descent(i) {
                let shorter = self.mul(&WeylWord::new(&self.cartan, &[i]).expect("letter"));
                for mut w in shorter.all_reduced_words() {
                    w.push(i);
                    out.push(w);
                }
            }
        }
        out.sort();
        out
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.letters.clone();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn label(&self) -> String {
        if self.letters.is_empty() {
            "e".to_string()
        } else {
            self.letters.iter().map(|l| format!("s{}", l + 1)).collect::<Vec<_>>().join("")
        }
    }
}

impl fmt::Display for WeylWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn word_action(cd: &CartanData, letters: &[usize]) -> IntMatrix {
    letters.iter().fold(IntMatrix::identity(cd.rank), |m, &i| m.mul(&cd.reflection_matrix(i)))
}

fn apply_word_to_root(cd: &CartanData, letters: &[usize], beta: &mut [i64]) {
    for &i in letters.iter().rev() {
        reflect_root(cd, i, beta);
    }
}

fn canonical_reduced_word(cd: &CartanData, letters: &[usize]) -> Vec<usize> {
    let mut current: Vec<usize> = letters.to_vec();
    let mut collected = Vec::new();
    loop {
        let descent = (0..cd.rank).find(|&i| {
            let mut beta = vec![0; cd.rank];
            beta[i] = 1;
            apply_word_to_root(cd, &current, &mut beta);
            beta.iter().any(|&x| x < 0)
        });
        match descent {
            Some(i) => {
                current.push(i);
                collected.push(i);
            }
            None => break,
        }
    }
    collected.reverse();
    collected
}

pub fn weyl_act(w: &WeylWord, lambda: &Weight) -> Weight {
    w.act(lambda)
}

/// Integer basis of `ker_Λ(u v⁻¹ − id)`.
pub fn fixed_lattice_basis(u: &WeylWord, v: &WeylWord) -> Result<Vec<Weight>, CartanError> {
    if u.rank() != v.rank() {
        return Err(CartanError::RankMismatch(u.rank(), v.rank()));
    }
    let m = u.action.mul(&v.inverse().action).minus_identity();
    Ok(integer_kernel(&m).into_iter().map(Weight::new).collect())
}

/// Integer basis of `ker_Λ(w − id)`.
pub fn fixed_lattice_of(w: &WeylWord) -> Vec<Weight> {
    integer_kernel(&w.action.minus_identity()).into_iter().map(Weight::new).collect()
}

/// `dim ker_𝔥*(w − id)`.
pub fn fixed_dimension(w: &WeylWord) -> usize {
    w.rank() - w.action.minus_identity().rank()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Support {
    pub indices: Vec<usize>,
    pub dim: usize,
}

/// `|u| ∪ |v|` and `dim H(u,v)`.
pub fn weyl_support(u: &WeylWord, v: &WeylWord) -> Support {
    let mut s = u.support();
    s.extend(v.support());
    s.sort_unstable();
    s.dedup();
    Support { dim: s.len(), indices: s }
}

/// All elements of the Weyl group, ordered by length then canonical word.
pub fn enumerate_weyl_group(cd: &CartanData) -> Vec<WeylWord> {
    let mut seen: BTreeMap<IntMatrix, WeylWord> = BTreeMap::new();
    let e = WeylWord::identity(cd);
    let mut queue = VecDeque::from([e.clone()]);
    seen.insert(e.action.clone(), e);
    while let Some(w) = queue.pop_front() {
        for i in 0..cd.rank {
            let next = w.mul(&WeylWord::new(cd, &[i]).expect("letter"));
            if !seen.contains_key(&next.action) {
                seen.insert(next.action.clone(), next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut all: Vec<WeylWord> = seen.into_values().collect();
    all.sort_by(|a, b| a.length.cmp(&b.length).then(a.letters.cmp(&b.letters)));
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(r: usize) -> CartanData {
        build_cartan_data(Series::A, r).unwrap()
    }

    #[test]
    fn a1_and_a2_data() {
        let a1 = a(1);
        assert_eq!(a1.cartan_matrix, vec![vec![2]]);
        assert_eq!(a1.symmetrizers, vec![1]);
        let a2 = a(2);
        assert_eq!(a2.cartan_matrix, vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(a2.positive_roots.len(), 3);
    }

    #[test]
    fn b2_symmetrizers_make_b_symmetric() {
        let b2 = build_cartan_data(Series::B, 2).unwrap();
        assert_eq!(b2.symmetrizers, vec![2, 1]);
        assert_eq!(b2.symmetrized[0][1], b2.symmetrized[1][0]);
        assert!(b2.is_positive_definite());
        assert_eq!(b2.positive_roots.len(), 4);
    }

    #[test]
    fn root_counts_classical() {
        assert_eq!(build_cartan_data(Series::B, 3).unwrap().positive_roots.len(), 9);
        assert_eq!(build_cartan_data(Series::C, 3).unwrap().positive_roots.len(), 9);
        assert_eq!(build_cartan_data(Series::D, 4).unwrap().positive_roots.len(), 12);
        assert_eq!(a(3).positive_roots.len(), 6);
    }

    #[test]
    fn unsupported_types() {
        assert!(build_cartan_data(Series::A, 0).is_err());
        assert!(build_cartan_data(Series::D, 3).is_err());
        assert!(build_cartan_data(Series::B, 1).is_err());
    }

    #[test]
    fn reflections_on_weights() {
        let a1 = a(1);
        let s = WeylWord::new(&a1, &[0]).unwrap();
        assert_eq!(s.act(&Weight::fundamental(1, 0)).coords, vec![-1]);
        let a2 = a(2);
        let s1 = WeylWord::new(&a2, &[0]).unwrap();
        assert_eq!(s1.act(&Weight::fundamental(2, 0)).coords, vec![-1, 1]);
        let e = WeylWord::identity(&a2);
        let l = Weight::new(vec![3, -7]);
        assert_eq!(e.act(&l), l);
    }

    #[test]
    fn fixed_lattices() {
        let a2 = a(2);
        let c = WeylWord::coxeter(&a2);
        let e = WeylWord::identity(&a2);
        assert!(fixed_lattice_basis(&c, &e).unwrap().is_empty());
        assert_eq!(fixed_lattice_basis(&c, &c).unwrap().len(), 2);
        let a1 = a(1);
        let s = WeylWord::new(&a1, &[0]).unwrap();
        assert!(fixed_lattice_basis(&s, &WeylWord::identity(&a1)).unwrap().is_empty());
        assert_eq!(fixed_lattice_basis(&s, &s).unwrap(), vec![Weight::new(vec![1])]);
        let w0 = WeylWord::longest(&a2);
        assert_eq!(fixed_lattice_of(&w0), vec![Weight::new(vec![1, -1])]);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // 2x - 4y = 0 has kernel generated by (2, 1), not (4, 2).
        let m = IntMatrix::from_rows(&[vec![2, -4]]);
        assert_eq!(integer_kernel(&m), vec![vec![2, 1]]);
        let m = IntMatrix::from_rows(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(integer_kernel(&m), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn supports() {
        let a2 = a(2);
        let e = WeylWord::identity(&a2);
        assert_eq!(weyl_support(&e, &e).dim, 0);
        let s1 = WeylWord::new(&a2, &[0]).unwrap();
        assert_eq!(weyl_support(&s1, &e).indices, vec![0]);
        let c = WeylWord::coxeter(&a2);
        assert_eq!(weyl_support(&c, &c).dim, 2);
    }

    #[test]
    fn longest_element_and_group_orders() {
        assert_eq!(WeylWord::longest(&a(2)).length, 3);
        assert_eq!(enumerate_weyl_group(&a(2)).len(), 6);
        assert_eq!(enumerate_weyl_group(&a(3)).len(), 24);
        assert_eq!(enumerate_weyl_group(&build_cartan_data(Series::B, 2).unwrap()).len(), 8);
    }

    #[test]
    fn permutations_round_trip() {
        let a3 = a(3);
        for w in enumerate_weyl_group(&a3) {
            let p = w.permutation();
            assert_eq!(WeylWord::from_permutation(&a3, &p).unwrap(), w);
            let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(inversions, w.length);
        }
    }

    #[test]
    fn reduction_removes_squares() {
        let a2 = a(2);
        let w = WeylWord::new(&a2, &[0, 1, 1, 0, 1]).unwrap();
        assert_eq!(w.length, 1);
        assert_eq!(w, WeylWord::new(&a2, &[1]).unwrap());
        assert_eq!(WeylWord::new(&a2, &[0, 0, 1, 0, 1]).unwrap(), WeylWord::longest(&a2));
    }
}
