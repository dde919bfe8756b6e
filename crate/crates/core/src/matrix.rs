//! Square matrices over a [`Scalar`]: cutoffs, embeddings, characteristic
//! polynomials, centralizers, Jordanization of regular matrices and the
//! exponential.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{GzError, Result};
use crate::linalg::{self, Dense};
use crate::poly::{MonicPoly, Spectrum};
use crate::scalar::{Mode, Scalar, Tolerance};

/// Square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.n, self.n)?;
        for r in 0..self.n {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(n: usize) -> Self {
        Mat {
            n,
            data: vec![S::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for k in 0..n {
            m.set(k, k, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(GzError::DimensionMismatch(format!(
                    "row {} has length {}, expected {n}",
                    r + 1,
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Mat { n, data })
    }

    /// Build from integer rows; panics on ragged input (test and example helper).
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
        .expect("square integer matrix")
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        Mat { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.n + c] = v;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        (0..self.n).map(|r| self.row(r).to_vec()).collect()
    }

    /// Entries as one vector of length n^2 (row-major).
    pub fn as_vector(&self) -> &[S] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Mat {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scaled(&self, k: &S) -> Self {
        self.map(|v| v.clone() * k.clone())
    }

    pub fn trace(&self) -> S {
        (0..self.n).fold(S::zero(), |acc, k| acc + self.get(k, k).clone())
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.n, |r, c| self.get(c, r).clone())
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Mat::identity(self.n), |acc, _| &acc * self)
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_exact_zero())
    }

    /// Largest entry magnitude, floored at one.
    pub fn scale(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(1.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    /// Exact equality in exact mode, `eps_eq` relative to scale otherwise.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        if self.n != other.n {
            return false;
        }
        if S::MODE == Mode::Exact {
            return self == other;
        }
        self.max_abs_diff(other) <= tol.eq_at(self.scale().max(other.scale()))
    }

    pub fn to_float(&self) -> Mat<Complex64> {
        Mat {
            n: self.n,
            data: self.data.iter().map(|v| v.to_c64()).collect(),
        }
    }

    pub fn from_float(m: &Mat<Complex64>) -> Self {
        Mat {
            n: m.n,
            data: m.data.iter().map(|&v| S::from_c64(v)).collect(),
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(GzError::IndexOutOfRange {
                index: i,
                bound: self.n,
            });
        }
        Ok(())
    }

    /// Top-left `i x i` submatrix.
    pub fn cutoff(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        Ok(Mat::from_fn(i, |r, c| self.get(r, c).clone()))
    }

    /// Place `self` in the top-left corner of an `n x n` zero matrix.
    pub fn embed(&self, n: usize) -> Result<Self> {
        if self.n > n {
            return Err(GzError::DimensionMismatch(format!(
                "cannot embed size {} into size {n}",
                self.n
            )));
        }
        let mut m = Mat::zeros(n);
        for r in 0..self.n {
            for c in 0..self.n {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        Ok(m)
    }

    /// Companion matrix: unit subdiagonal, last column `-c_0..-c_{d-1}`.
    pub fn companion(p: &MonicPoly<S>) -> Self {
        let d = p.degree();
        let mut m = Mat::zeros(d);
        for k in 1..d {
            m.set(k, k - 1, S::one());
        }
        for k in 0..d {
            m.set(k, d - 1, -p.coeffs[k].clone());
        }
        m
    }

    /// Jordan matrix with one block per root, in spectrum order.
    pub fn jordan(s: &Spectrum<S>) -> Self {
        let mut m = Mat::zeros(s.degree());
        let mut off = 0;
        for (lambda, mult) in s.roots() {
            for k in 0..*mult {
                m.set(off + k, off + k, lambda.clone());
                if k + 1 < *mult {
                    m.set(off + k, off + k + 1, S::one());
                }
            }
            off += mult;
        }
        m
    }

    /// `det(tI - M)` by the Faddeev-LeVerrier recurrence.
    pub fn charpoly(&self) -> MonicPoly<S> {
        let n = self.n;
        let mut coeffs = vec![S::zero(); n];
        let mut m = Mat::zeros(n);
        let mut prev = S::one();
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            m = self * &m;
            for d in 0..n {
                let v = m.get(d, d).clone() + prev.clone();
                m.set(d, d, v);
            }
            let am = self * &m;
            let c = -(am.trace() / S::from_i64(k as i64));
            coeffs[n - k] = c.clone();
            prev = c;
        }
        MonicPoly::new(coeffs)
    }

    /// Matrix of `z -> z M - M z` acting on row-major vectorized `z`.
    pub fn commutator_operator(&self) -> Dense<S> {
        let m = self.n;
        let mut op = Dense::zeros(m * m, m * m);
        for r in 0..m {
            for c in 0..m {
                for a in 0..m {
                    for b in 0..m {
                        let mut v = S::zero();
                        if a == r {
                            v = v + self.get(b, c).clone();
                        }
                        if b == c {
                            v = v - self.get(r, a).clone();
                        }
                        if !v.is_exact_zero() {
                            op.set(r * m + c, a * m + b, v);
                        }
                    }
                }
            }
        }
        op
    }

    /// Basis of the centralizer of `self` in gl(m).
    pub fn centralizer_basis(&self, tol: &Tolerance) -> Vec<Self> {
        let m = self.n;
        self.commutator_operator()
            .nullspace(tol)
            .into_iter()
            .map(|v| Mat { n: m, data: v })
            .collect()
    }

    pub fn centralizer_dim(&self, tol: &Tolerance) -> usize {
        let m = self.n;
        m * m - self.commutator_operator().rank(tol)
    }

    pub fn is_regular(&self, tol: &Tolerance) -> bool {
        self.centralizer_dim(tol) == self.n
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let a = Dense {
            rows: n,
            cols: n,
            data: self.data.clone(),
        };
        let mut inv = Mat::zeros(n);
        for c in 0..n {
            let mut e = vec![S::zero(); n];
            e[c] = S::one();
            let col = linalg::solve(&a, &e)?;
            for (r, v) in col.into_iter().enumerate() {
                inv.set(r, c, v);
            }
        }
        Ok(inv)
    }

    /// `g self g^{-1}`.
    pub fn conjugate_by(&self, g: &Self) -> Result<Self> {
        let gi = g.inverse()?;
        Ok(&(g * self) * &gi)
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    fn as_dense(&self) -> Dense<S> {
        Dense {
            rows: self.n,
            cols: self.n,
            data: self.data.clone(),
        }
    }
}

impl<S: Scalar> Add for &Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.n, rhs.n, "size mismatch in add");
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.n, rhs.n, "size mismatch in sub");
        Mat {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Mat<S> {
    type Output = Mat<S>;
    fn neg(self) -> Mat<S> {
        self.map(|v| -v.clone())
    }
}

impl<S: Scalar> Mul for &Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.n, rhs.n, "size mismatch in mul");
        let n = self.n;
        let mut out = Mat::<S>::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_exact_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.get(k, c);
                    if b.is_exact_zero() {
                        continue;
                    }
                    let v = out.get(r, c).clone() + a.clone() * b.clone();
                    out.set(r, c, v);
                }
            }
        }
        out
    }
}

/// Conjugator into Jordan form for a regular matrix: `g M g^{-1} = jordan`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanFrame<S: Scalar> {
    pub g: Mat<S>,
    pub g_inv: Mat<S>,
    pub jordan: Mat<S>,
    pub spectrum: Spectrum<S>,
}

fn vec_norm<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
}

/// `k`-dimensional (near) kernel of a square matrix. Exact mode demands an
/// exact kernel of that dimension; float mode takes the `k` right singular
/// vectors with smallest singular values.
fn kernel_of_dim<S: Scalar>(a: &Mat<S>, k: usize, tol: &Tolerance) -> Result<Vec<Vec<S>>> {
    if S::MODE == Mode::Exact {
        let ker = a.as_dense().nullspace(tol);
        if ker.len() != k {
            return Err(GzError::SpectrumMismatch(format!(
                "generalized eigenspace has dimension {}, expected {k}",
                ker.len()
            )));
        }
        return Ok(ker);
    }
    let n = a.n();
    let f = Dense {
        rows: n,
        cols: n,
        data: a.data.iter().map(|v| v.to_c64()).collect(),
    };
    // every direction is null at tolerance one; ask for the full ordered basis
    let loose = Tolerance {
        eps_rank: f64::INFINITY,
        ..*tol
    };
    let (_, all) = linalg::svd_nullspace(&f, &loose);
    Ok(all[n - k..]
        .iter()
        .rev()
        .map(|v| v.iter().map(|&z| S::from_c64(z)).collect())
        .collect())
}

/// Number of (near) zero singular values of `a`.
fn nullity<S: Scalar>(a: &Mat<S>, tol: &Tolerance) -> usize {
    a.n() - a.as_dense().rank(tol)
}

/// Conjugate a regular matrix into Jordan form with blocks in the order of
/// `s`. For each eigenvalue the chain `N^{m-1} v, ..., N v, v` with
/// `N = M - lambda` fills the block's columns of `g^{-1}`, where `v` is the
/// kernel basis vector of `N^m` maximizing `|N^{m-1} v|` (first index wins
/// ties).
pub fn jordanize_regular<S: Scalar>(m: &Mat<S>, s: &Spectrum<S>, tol: &Tolerance) -> Result<JordanFrame<S>> {
    let n = m.n();
    if s.degree() != n {
        return Err(GzError::SpectrumMismatch(format!(
            "spectrum degree {} for a {n}x{n} matrix",
            s.degree()
        )));
    }
    let mut p = Mat::zeros(n);
    let mut off = 0;
    for (lambda, mult) in s.roots() {
        let nmat = m - &Mat::identity(n).scaled(lambda);
        let nul = nullity(&nmat, tol);
        if nul > 1 {
            return Err(GzError::NotRegular);
        }
        if S::MODE == Mode::Exact && nul == 0 {
            return Err(GzError::SpectrumMismatch(format!("{lambda} is not an eigenvalue")));
        }
        let top = nmat.pow(mult - 1);
        let cands = kernel_of_dim(&nmat.pow(*mult), *mult, tol)?;
        let mut best: Option<(f64, Vec<S>)> = None;
        for v in cands {
            let w = vec_norm(&top.apply(&v));
            if best.as_ref().is_none_or(|(bw, _)| w > *bw) {
                best = Some((w, v));
            }
        }
        let (_, mut v) = best.ok_or_else(|| GzError::Internal("empty eigenspace".into()))?;
        if S::MODE == Mode::Float {
            let inv = S::from_c64(Complex64::new(1.0 / vec_norm(&v), 0.0));
            v = v.into_iter().map(|x| x * inv.clone()).collect();
        }
        // chain v, Nv, ..., N^{m-1}v fills columns off+m-1 down to off
        let mut cur = v;
        for k in (0..*mult).rev() {
            for (r, x) in cur.iter().enumerate() {
                p.set(r, off + k, x.clone());
            }
            cur = nmat.apply(&cur);
        }
        off += mult;
    }
    let g = p.inverse().map_err(|_| GzError::NotRegular)?;
    let jordan = Mat::jordan(s);
    let got = &(&g * m) * &p;
    let ok = if S::MODE == Mode::Exact {
        got == jordan
    } else {
        // multiple eigenvalues are only known to the clustering radius
        let cond = g.scale() * p.scale() * n as f64;
        got.max_abs_diff(&jordan) <= tol.root_radius(s.max_mult(), m.scale()).max(tol.eq_at(m.scale())) * cond
    };
    if !ok {
        return Err(GzError::SpectrumMismatch(format!(
            "Jordan residual {:e}",
            got.max_abs_diff(&jordan)
        )));
    }
    Ok(JordanFrame {
        g,
        g_inv: p,
        jordan,
        spectrum: s.clone(),
    })
}

/// Matrix exponential. Exact mode sums the terminating series of a nilpotent
/// matrix; float mode uses a [6/6] Pade approximant with scaling and squaring.
pub fn mat_exp<S: Scalar>(m: &Mat<S>) -> Result<Mat<S>> {
    let n = m.n();
    if S::MODE == Mode::Exact {
        let mut term = Mat::identity(n);
        let mut sum = Mat::identity(n);
        for k in 1..=n {
            term = (&term * m).scaled(&(S::one() / S::from_i64(k as i64)));
            sum = &sum + &term;
        }
        if !(&term * m).is_zero() {
            return Err(GzError::NonNilpotent);
        }
        return Ok(sum);
    }
    let norm1 = (0..n)
        .map(|c| (0..n).map(|r| m.get(r, c).magnitude()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scaled(&S::from_c64(Complex64::new(0.5f64.powi(s), 0.0)));
    const Q: usize = 6;
    let mut c = 1.0;
    let mut num = Mat::identity(n);
    let mut den = Mat::identity(n);
    let mut pow = Mat::identity(n);
    for k in 1..=Q {
        c *= (Q - k + 1) as f64 / (k * (2 * Q - k + 1)) as f64;
        pow = &pow * &a;
        let term = pow.scaled(&S::from_c64(Complex64::new(c, 0.0)));
        num = &num + &term;
        den = if k % 2 == 0 { &den + &term } else { &den - &term };
    }
    let mut e = &den.inverse()? * &num;
    for _ in 0..s {
        e = &e * &e;
    }
    Ok(e)
}
