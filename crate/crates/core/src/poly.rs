//! Monic polynomials, spectra and the root-finding that links them.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{GzError, Result};
use crate::scalar::{GaussRat, Mode, Scalar, Tolerance};

/// Monic polynomial `t^d + c_{d-1} t^{d-1} + ... + c_0`, stored as
/// `c_0..c_{d-1}`. Degree zero (the constant one) is allowed for
/// intermediate results.
#[derive(Debug, Clone, PartialEq)]
pub struct MonicPoly<S> {
    pub coeffs: Vec<S>,
}

impl<S: Scalar> MonicPoly<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        MonicPoly { coeffs }
    }

    pub fn one() -> Self {
        MonicPoly { coeffs: Vec::new() }
    }

    /// `t^d`.
    pub fn monomial(d: usize) -> Self {
        MonicPoly {
            coeffs: vec![S::zero(); d],
        }
    }

    /// `t - root`.
    pub fn linear(root: S) -> Self {
        MonicPoly { coeffs: vec![-root] }
    }

    /// Normalize an ascending coefficient list by its last entry.
    pub fn from_full(full: &[S]) -> Result<Self> {
        let Some(lead) = full.last() else {
            return Err(GzError::Internal("empty polynomial".into()));
        };
        if lead.is_exact_zero() {
            return Err(GzError::Internal("zero leading coefficient".into()));
        }
        let lead = lead.clone();
        Ok(MonicPoly {
            coeffs: full[..full.len() - 1]
                .iter()
                .map(|c| c.clone() / lead.clone())
                .collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// Ascending coefficients including the leading one.
    pub fn full(&self) -> Vec<S> {
        let mut v = self.coeffs.clone();
        v.push(S::one());
        v
    }

    /// Coefficient of `t^k`, with the implicit leading one.
    pub fn coeff(&self, k: usize) -> S {
        match k.cmp(&self.degree()) {
            Ordering::Less => self.coeffs[k].clone(),
            Ordering::Equal => S::one(),
            Ordering::Greater => S::zero(),
        }
    }

    pub fn eval(&self, t: &S) -> S {
        let mut acc = S::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prod = poly_mul(&self.full(), &other.full());
        MonicPoly {
            coeffs: prod[..prod.len() - 1].to_vec(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(MonicPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative_full(&self) -> Vec<S> {
        self.full()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * S::from_i64(k as i64))
            .collect()
    }

    /// Divide by `t - root`, returning quotient and remainder.
    pub fn div_linear(&self, root: &S) -> (Self, S) {
        let full = self.full();
        let d = self.degree();
        let mut q = vec![S::zero(); d];
        let mut acc = S::zero();
        for k in (0..=d).rev() {
            acc = acc * root.clone() + full[k].clone();
            if k > 0 {
                q[k - 1] = acc.clone();
            }
        }
        let rem = acc;
        // q is monic since the leading term passes through unchanged
        q.pop();
        (MonicPoly { coeffs: q }, rem)
    }

    /// Largest coefficient magnitude, floored at one.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(1.0, f64::max)
    }

    /// Coefficientwise comparison; float mode uses `eps_eq` relative to the
    /// larger of the two scales.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        if self.degree() != other.degree() {
            return false;
        }
        let abs = tol.eq_at(self.scale().max(other.scale()));
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a.approx_eq(b, abs))
    }

    /// Largest coefficient difference divided by the scale of `self`.
    pub fn rel_error(&self, other: &Self) -> f64 {
        if self.degree() != other.degree() {
            return f64::INFINITY;
        }
        let d = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max);
        d / self.scale()
    }
}

/// Product of ascending coefficient lists.
pub fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Coefficients of `p(u + lambda)` in powers of `u`, up to `u^order`.
/// Entry k equals `p^(k)(lambda) / k!`.
pub fn taylor_at<S: Scalar>(p: &MonicPoly<S>, lambda: &S, order: usize) -> Vec<S> {
    taylor_full(&p.full(), lambda, order)
}

/// As [`taylor_at`] for a general ascending coefficient list.
pub fn taylor_full<S: Scalar>(full: &[S], lambda: &S, order: usize) -> Vec<S> {
    let mut work = full.to_vec();
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        if work.is_empty() {
            out.push(S::zero());
            continue;
        }
        // synthetic division by (t - lambda): remainder is the next coefficient
        let d = work.len() - 1;
        let mut q = vec![S::zero(); d];
        let mut acc = S::zero();
        for k in (0..=d).rev() {
            acc = acc * lambda.clone() + work[k].clone();
            if k > 0 {
                q[k - 1] = acc.clone();
            }
        }
        out.push(acc);
        work = q;
    }
    out
}

/// First `m` coefficients of the power series `a / b`; needs `b[0] != 0`.
pub fn series_div<S: Scalar>(a: &[S], b: &[S], m: usize) -> Result<Vec<S>> {
    let b0 = b.first().cloned().unwrap_or_else(S::zero);
    if b0.is_exact_zero() {
        return Err(GzError::Internal("series division by a series with zero constant term".into()));
    }
    let mut q: Vec<S> = Vec::with_capacity(m);
    for k in 0..m {
        let mut acc = a.get(k).cloned().unwrap_or_else(S::zero);
        for j in 1..=k {
            if let Some(bj) = b.get(j) {
                acc = acc - bj.clone() * q[k - j].clone();
            }
        }
        q.push(acc / b0.clone());
    }
    Ok(q)
}

/// Roots with multiplicities in strictly decreasing lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<S> {
    roots: Vec<(S, usize)>,
}

impl<S: Scalar> Spectrum<S> {
    /// Sort into decreasing lexicographic order, merging equal roots.
    pub fn new(mut roots: Vec<(S, usize)>, tol: &Tolerance) -> Result<Self> {
        if roots.iter().any(|(_, m)| *m == 0) {
            return Err(GzError::Schema("root multiplicity must be positive".into()));
        }
        let scale = roots.iter().map(|(r, _)| r.magnitude()).fold(1.0, f64::max);
        let abs = tol.eq_at(scale);
        roots.sort_by(|a, b| b.0.lex_cmp(&a.0, abs));
        let mut merged: Vec<(S, usize)> = Vec::with_capacity(roots.len());
        for (r, m) in roots {
            match merged.last_mut() {
                Some(last) if last.0.lex_cmp(&r, abs) == Ordering::Equal => last.1 += m,
                _ => merged.push((r, m)),
            }
        }
        Ok(Spectrum { roots: merged })
    }

    pub fn roots(&self) -> &[(S, usize)] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    pub fn distinct(&self) -> usize {
        self.roots.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.roots.iter().all(|(_, m)| *m == 1)
    }

    pub fn max_mult(&self) -> usize {
        self.roots.iter().map(|(_, m)| *m).max().unwrap_or(0)
    }

    pub fn scale(&self) -> f64 {
        self.roots.iter().map(|(r, _)| r.magnitude()).fold(1.0, f64::max)
    }

    /// Index of a root equal to `x` within the matching radius.
    pub fn position(&self, x: &S, tol: &Tolerance) -> Option<usize> {
        let scale = self.scale().max(x.magnitude());
        self.roots.iter().position(|(r, m)| {
            if S::MODE == Mode::Exact {
                r == x
            } else {
                (r.clone() - x.clone()).magnitude() <= tol.root_radius(*m, scale)
            }
        })
    }

    pub fn poly(&self) -> MonicPoly<S> {
        poly_from_spectrum(self)
    }
}

/// Expand `prod (t - lambda)^mult`.
pub fn poly_from_spectrum<S: Scalar>(s: &Spectrum<S>) -> MonicPoly<S> {
    s.roots()
        .iter()
        .fold(MonicPoly::one(), |acc, (r, m)| acc.mul(&MonicPoly::linear(r.clone()).pow(*m)))
}

pub fn spectrum_from_poly<S: Scalar>(p: &MonicPoly<S>, tol: &Tolerance) -> Result<Spectrum<S>> {
    S::split(p, tol)
}

/// Distinct roots of `s1` that also occur in `s2`, in the order of `s1`.
/// Float matching uses the clustering radius of the larger multiplicity.
pub fn common_roots<S: Scalar>(s1: &Spectrum<S>, s2: &Spectrum<S>, tol: &Tolerance) -> Vec<S> {
    let scale = s1.scale().max(s2.scale());
    s1.roots()
        .iter()
        .filter(|(r, m)| {
            s2.roots().iter().any(|(r2, m2)| {
                if S::MODE == Mode::Exact {
                    r == r2
                } else {
                    (r.clone() - r2.clone()).magnitude() <= tol.root_radius((*m).max(*m2), scale)
                }
            })
        })
        .map(|(r, _)| r.clone())
        .collect()
}

/// Eigenvalues of the companion matrix of `p`.
pub fn companion_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len();
    if d == 0 {
        return Vec::new();
    }
    let mut c = DMatrix::<Complex64>::zeros(d, d);
    for k in 1..d {
        c[(k, k - 1)] = Complex64::new(1.0, 0.0);
    }
    for k in 0..d {
        c[(k, d - 1)] = -coeffs[k];
    }
    let (_, t) = c.schur().unpack();
    (0..d).map(|k| t[(k, k)]).collect()
}

/// Centroid agglomerative clustering: repeatedly merge the two closest
/// clusters while their centroid distance is within the radius allowed for
/// the merged multiplicity.
pub fn cluster_roots(roots: &[Complex64], tol: &Tolerance, scale: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = roots.iter().map(|&r| (r, 1)).collect();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let d = (clusters[a].0 - clusters[b].0).norm();
                if best.is_none_or(|(_, _, bd)| d < bd) {
                    best = Some((a, b, d));
                }
            }
        }
        let Some((a, b, d)) = best else { break };
        let m = clusters[a].1 + clusters[b].1;
        if d > tol.root_radius(m, scale) {
            break;
        }
        let (ra, ma) = clusters[a];
        let (rb, mb) = clusters.remove(b);
        clusters[a] = ((ra * ma as f64 + rb * mb as f64) / m as f64, m);
    }
    clusters
}

pub(crate) fn split_float(p: &MonicPoly<Complex64>, tol: &Tolerance) -> Result<Spectrum<Complex64>> {
    let roots = companion_roots(&p.coeffs);
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let clusters = cluster_roots(&roots, tol, scale);
    Spectrum::new(clusters, tol)
}

/// Monic gcd by the Euclidean algorithm (exact arithmetic).
fn gcd_exact<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    fn trim<S: Scalar>(v: &mut Vec<S>) {
        while v.last().is_some_and(|c| c.is_exact_zero()) {
            v.pop();
        }
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let lead = b.last().unwrap().clone();
        while a.len() >= b.len() {
            let f = a.last().unwrap().clone() / lead.clone();
            let shift = a.len() - b.len();
            for (k, c) in b.iter().enumerate() {
                a[k + shift] = a[k + shift].clone() - f.clone() * c.clone();
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    let lead = a.last().cloned().unwrap_or_else(S::one);
    a.iter().map(|c| c.clone() / lead.clone()).collect()
}

fn round_gauss(z: Complex64, denom: &BigInt) -> Option<GaussRat> {
    let d = denom.clone();
    let re = BigRational::from_float(z.re.round())?;
    let im = BigRational::from_float(z.im.round())?;
    Some(GaussRat::new(
        re / BigRational::from_integer(d.clone()),
        im / BigRational::from_integer(d),
    ))
}

/// Split over the Gaussian rationals. Roots of the squarefree part are
/// located in floating point, snapped to the lattice allowed by the rational
/// root theorem, and verified exactly.
pub(crate) fn split_gaussian_rational(p: &MonicPoly<GaussRat>, tol: &Tolerance) -> Result<Spectrum<GaussRat>> {
    let mut rest = p.clone();
    let mut found: Vec<(GaussRat, usize)> = Vec::new();
    let mut zero_mult = 0;
    while rest.degree() > 0 && rest.coeffs[0].is_exact_zero() {
        rest.coeffs.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        found.push((GaussRat::zero(), zero_mult));
    }
    while rest.degree() > 0 {
        let sqf_full = {
            let g = gcd_exact(&rest.full(), &rest.derivative_full());
            let (q, r) = poly_divmod(&rest.full(), &g);
            debug_assert!(r.iter().all(|c| c.is_exact_zero()));
            q
        };
        let sqf = MonicPoly::from_full(&sqf_full)?;
        let denom = sqf
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom_lcm()));
        let dz = denom.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
        let approx = companion_roots(&sqf.coeffs.iter().map(|c| c.to_c64()).collect::<Vec<_>>());
        let mut progress = false;
        for mu in approx {
            let candidates = [round_gauss(mu * dz, &denom), round_gauss(mu, &BigInt::one())];
            for cand in candidates.into_iter().flatten() {
                if !rest.eval(&cand).is_exact_zero() {
                    continue;
                }
                let mut mult = 0;
                loop {
                    let (q, r) = rest.div_linear(&cand);
                    if !r.is_exact_zero() {
                        break;
                    }
                    rest = q;
                    mult += 1;
                }
                found.push((cand, mult));
                progress = true;
                break;
            }
        }
        if !progress {
            return Err(GzError::NotSplit);
        }
    }
    Spectrum::new(found, tol)
}

/// Quotient and remainder of ascending coefficient lists (`b` nonzero).
pub fn poly_divmod<S: Scalar>(a: &[S], b: &[S]) -> (Vec<S>, Vec<S>) {
    let mut b = b.to_vec();
    while b.last().is_some_and(|c| c.is_exact_zero()) {
        b.pop();
    }
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (vec![S::zero()], r);
    }
    let lead = b.last().unwrap().clone();
    let mut q = vec![S::zero(); r.len() - b.len() + 1];
    for shift in (0..q.len()).rev() {
        let f = r[shift + b.len() - 1].clone() / lead.clone();
        for (k, c) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].clone() - f.clone() * c.clone();
        }
        q[shift] = f;
    }
    r.truncate(b.len() - 1);
    (q, r)
}
