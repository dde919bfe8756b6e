//! Rectangular dense systems: rank, nullspace and square solves.
//!
//! Exact scalars go through reduced row echelon form. Floating scalars go
//! through a complex SVD (nalgebra) with a relative singular-value cutoff.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{GzError, Result};
use crate::scalar::{Mode, Scalar, Tolerance};

/// Row-major rectangular matrix used for linear systems.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Dense<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    /// Matrix whose rows are the given vectors (all of length `cols`).
    pub fn from_rows(rows: &[Vec<S>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned());
        }
        Dense {
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Dense::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Largest entry magnitude, floored at one.
    pub fn scale(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(1.0, f64::max)
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        S::rank(self, tol)
    }

    pub fn nullspace(&self, tol: &Tolerance) -> Vec<Vec<S>> {
        S::nullspace(self, tol)
    }
}

/// Rank of a family of vectors. In float mode each nonzero vector is scaled
/// to unit length first, so families mixing very different magnitudes (powers
/// of a matrix, say) are judged by direction only.
pub fn rank_of_vectors<S: Scalar>(vs: &[Vec<S>], dim: usize, tol: &Tolerance) -> usize {
    if vs.is_empty() {
        return 0;
    }
    if S::MODE == Mode::Exact {
        return Dense::from_rows(vs, dim).rank(tol);
    }
    let rows: Vec<Vec<S>> = vs
        .iter()
        .map(|v| {
            let norm = v.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt();
            if norm == 0.0 {
                v.clone()
            } else {
                let inv = S::from_c64(Complex64::new(1.0 / norm, 0.0));
                v.iter().map(|x| x.clone() * inv.clone()).collect()
            }
        })
        .collect();
    Dense::from_rows(&rows, dim).rank(tol)
}

/// Rank and nullspace basis by exact reduced row echelon form. Basis vectors
/// are indexed by free column in increasing order, with a one in the free slot.
pub fn rref_nullspace<S: Scalar>(a: &Dense<S>) -> (usize, Vec<Vec<S>>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_exact_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..m.cols {
                m.data.swap(p * m.cols + c, row * m.cols + c);
            }
        }
        let inv = S::one() / m.get(row, col).clone();
        for c in col..m.cols {
            let v = m.get(row, c).clone() * inv.clone();
            m.set(row, c, v);
        }
        for r in 0..m.rows {
            if r == row || m.get(r, col).is_exact_zero() {
                continue;
            }
            let f = m.get(r, col).clone();
            for c in col..m.cols {
                let v = m.get(r, c).clone() - f.clone() * m.get(row, c).clone();
                m.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let rank = pivots.len();
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![S::zero(); m.cols];
        v[free] = S::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m.get(r, free).clone();
        }
        basis.push(v);
    }
    (rank, basis)
}

/// Rank and nullspace basis from a complex SVD. A singular value counts as
/// zero when it is at most `eps_rank` times the largest one.
pub fn svd_nullspace(a: &Dense<Complex64>, tol: &Tolerance) -> (usize, Vec<Vec<Complex64>>) {
    let cols = a.cols;
    if cols == 0 {
        return (0, Vec::new());
    }
    // thin SVD: pad so that V is square
    let rows = a.rows.max(cols);
    let mut m = DMatrix::<Complex64>::zeros(rows, cols);
    for r in 0..a.rows {
        for c in 0..cols {
            m[(r, c)] = *a.get(r, c);
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let smax = order.first().map(|&i| svd.singular_values[i]).unwrap_or(0.0);
    let cut = tol.eps_rank * smax;
    let rank = if smax == 0.0 {
        0
    } else {
        order.iter().filter(|&&i| svd.singular_values[i] > cut).count()
    };
    let basis = order[rank..]
        .iter()
        .map(|&i| (0..cols).map(|c| v_t[(i, c)].conj()).collect())
        .collect();
    (rank, basis)
}

/// Solve the square system `a x = b` by Gaussian elimination. Exact mode
/// pivots on the first nonzero entry; float mode uses partial pivoting and
/// reports `Singular` below a rounding-level pivot.
pub fn solve<S: Scalar>(a: &Dense<S>, b: &[S]) -> Result<Vec<S>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return Err(GzError::DimensionMismatch(format!(
            "solve needs square system, got {}x{} with rhs {}",
            a.rows,
            a.cols,
            b.len()
        )));
    }
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let thresh = f64::EPSILON * n as f64 * a.scale();
    for col in 0..n {
        let p = if S::MODE == Mode::Exact {
            (col..n).find(|&r| !m.get(r, col).is_exact_zero())
        } else {
            (col..n)
                .max_by(|&r, &s| m.get(r, col).magnitude().total_cmp(&m.get(s, col).magnitude()))
                .filter(|&r| m.get(r, col).magnitude() > thresh)
        };
        let Some(p) = p else {
            return Err(GzError::Singular);
        };
        if p != col {
            for c in 0..n {
                m.data.swap(p * n + c, col * n + c);
            }
            rhs.swap(p, col);
        }
        let piv = m.get(col, col).clone();
        for r in col + 1..n {
            if m.get(r, col).is_exact_zero() {
                continue;
            }
            let f = m.get(r, col).clone() / piv.clone();
            for c in col..n {
                let v = m.get(r, c).clone() - f.clone() * m.get(col, c).clone();
                m.set(r, c, v);
            }
            rhs[r] = rhs[r].clone() - f * rhs[col].clone();
        }
    }
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let mut acc = rhs[r].clone();
        for (c, xc) in x.iter().enumerate().skip(r + 1) {
            acc = acc - m.get(r, c).clone() * xc.clone();
        }
        x[r] = acc / m.get(r, r).clone();
    }
    Ok(x)
}
