//! Upper Hessenberg matrices with unit subdiagonal, which meet every fibre
//! of Φ exactly once.

use crate::error::{GzError, Result};
use crate::linalg::{self, Dense};
use crate::matrix::Mat;
use crate::moment::GZSpec;
use crate::scalar::{Scalar, Tolerance};

/// Unit subdiagonal and zeros below it.
pub fn is_hessenberg<S: Scalar>(x: &Mat<S>, tol: &Tolerance) -> bool {
    let abs = tol.eq_at(x.scale());
    let n = x.n();
    (0..n).all(|r| {
        (0..r).all(|c| {
            let v = x.get(r, c);
            if c + 1 == r {
                v.approx_eq(&S::one(), abs)
            } else {
                v.is_negligible(abs)
            }
        })
    })
}

/// The Hessenberg matrix in the fibre over `c`.
///
/// Level by level, the last column of the next cutoff is the only unknown
/// and the characteristic polynomial is affine in it. The affine map is
/// recovered by probing with the zero column and each unit column, then
/// matched to the prescribed coefficients.
pub fn hessenberg_from_spec<S: Scalar>(c: &GZSpec<S>) -> Result<Mat<S>> {
    let n = c.n();
    let mut x = Mat::zeros(n);
    if n == 0 {
        return Ok(x);
    }
    for k in 1..n {
        x.set(k, k - 1, S::one());
    }
    x.set(0, 0, -c.level(1)?.coeffs[0].clone());
    for size in 2..=n {
        let col = size - 1;
        let target = &c.level(size)?.coeffs;
        let probe = |x: &Mat<S>, unit: Option<usize>| -> Vec<S> {
            let mut m = x.cutoff(size).expect("size <= n");
            for r in 0..size {
                m.set(r, col, S::zero());
            }
            if let Some(r) = unit {
                m.set(r, col, S::one());
            }
            m.charpoly().coeffs
        };
        let base = probe(&x, None);
        let mut lin = Dense::zeros(size, size);
        for r in 0..size {
            let p = probe(&x, Some(r));
            for (k, (a, b)) in p.into_iter().zip(&base).enumerate() {
                lin.set(k, r, a - b.clone());
            }
        }
        let rhs: Vec<S> = target.iter().zip(&base).map(|(t, b)| t.clone() - b.clone()).collect();
        let u = linalg::solve(&lin, &rhs).map_err(|_| GzError::SingularSystem { level: size })?;
        for (r, v) in u.into_iter().enumerate() {
            x.set(r, col, v);
        }
    }
    Ok(x)
}
