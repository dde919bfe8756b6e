//! Bordered matrices `[[J, y], [z, w]]` with `J` a regular Jordan matrix:
//! their characteristic polynomials, how to reach a prescribed one, and the
//! action of the centralizer of `J`.
//!
//! For a block with eigenvalue `λ` and size `m`, write
//! `s_l = Σ_j z_j y_{j+l}` (l = 0..m-1). Then
//!
//! ```text
//! det(t - X) = (t - w) Π_k (t - λ_k)^{m_k}
//!            - Σ_k Π_{q≠k} (t - λ_q)^{m_q} Σ_l s_{k,l} (t - λ_k)^{m_k-1-l}
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{GzError, Result};
use crate::linalg::Dense;
use crate::matrix::Mat;
use crate::poly::{poly_mul, series_div, taylor_full, MonicPoly, Spectrum};
use crate::scalar::{Mode, Scalar, Tolerance};

/// Which border coordinate survives at a shared eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `y_{k,m_k} != 0` and `z_{k,1} = 0`.
    Upper,
    /// `z_{k,1} != 0` and `y_{k,m_k} = 0`.
    Lower,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Upper => "U",
            Side::Lower => "L",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = GzError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" | "u" => Ok(Side::Upper),
            "L" | "l" => Ok(Side::Lower),
            other => Err(GzError::Schema(format!("choice must be U or L, got {other:?}"))),
        }
    }
}

/// A side for every shared eigenvalue at one level, in spectrum order.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockChoice<S> {
    pub entries: Vec<(S, Side)>,
}

impl<S: Scalar> BlockChoice<S> {
    pub fn new(entries: Vec<(S, Side)>) -> Self {
        BlockChoice { entries }
    }

    pub fn empty() -> Self {
        BlockChoice { entries: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sides(&self) -> Vec<Side> {
        self.entries.iter().map(|(_, s)| *s).collect()
    }
}

/// Border data attached to one Jordan block.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBlock<S> {
    pub lambda: S,
    pub mult: usize,
    pub z: Vec<S>,
    pub y: Vec<S>,
}

/// A point of the level-i solution variety in bordered coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionPoint<S> {
    pub level: usize,
    pub blocks: Vec<SolutionBlock<S>>,
    pub w: S,
}

impl<S: Scalar> SolutionPoint<S> {
    pub fn new(blocks: Vec<SolutionBlock<S>>, w: S) -> Result<Self> {
        for (k, b) in blocks.iter().enumerate() {
            if b.mult == 0 || b.z.len() != b.mult || b.y.len() != b.mult {
                return Err(GzError::DimensionMismatch(format!(
                    "block {} has multiplicity {} but |z| = {}, |y| = {}",
                    k + 1,
                    b.mult,
                    b.z.len(),
                    b.y.len()
                )));
            }
        }
        let level = blocks.iter().map(|b| b.mult).sum();
        Ok(SolutionPoint { level, blocks, w })
    }

    /// All borders and the corner zero.
    pub fn zero_border(s: &Spectrum<S>) -> Self {
        let blocks = s
            .roots()
            .iter()
            .map(|(l, m)| SolutionBlock {
                lambda: l.clone(),
                mult: *m,
                z: vec![S::zero(); *m],
                y: vec![S::zero(); *m],
            })
            .collect();
        SolutionPoint {
            level: s.degree(),
            blocks,
            w: S::zero(),
        }
    }

    pub fn spectrum(&self) -> Spectrum<S> {
        Spectrum::new(
            self.blocks.iter().map(|b| (b.lambda.clone(), b.mult)).collect(),
            &Tolerance::default(),
        )
        .expect("positive multiplicities")
    }

    /// Read coordinates off an `(i+1) x (i+1)` matrix whose top-left cutoff is
    /// the Jordan matrix of `s`. The cutoff itself is not inspected.
    pub fn from_bordered(m: &Mat<S>, s: &Spectrum<S>) -> Result<Self> {
        let i = s.degree();
        if m.n() != i + 1 {
            return Err(GzError::DimensionMismatch(format!(
                "bordered matrix of size {} for a level-{i} spectrum",
                m.n()
            )));
        }
        let mut blocks = Vec::with_capacity(s.distinct());
        let mut off = 0;
        for (l, k) in s.roots() {
            blocks.push(SolutionBlock {
                lambda: l.clone(),
                mult: *k,
                z: (off..off + k).map(|c| m.get(i, c).clone()).collect(),
                y: (off..off + k).map(|r| m.get(r, i).clone()).collect(),
            });
            off += k;
        }
        Ok(SolutionPoint {
            level: i,
            blocks,
            w: m.get(i, i).clone(),
        })
    }

    pub fn scale(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.z.iter().chain(&b.y).chain(std::iter::once(&b.lambda)))
            .chain(std::iter::once(&self.w))
            .map(|v| v.magnitude())
            .fold(1.0, f64::max)
    }
}

/// The bordered matrix: Jordan blocks, y as last column, z as last row.
pub fn assemble<S: Scalar>(p: &SolutionPoint<S>) -> Mat<S> {
    let i = p.level;
    let mut m = Mat::zeros(i + 1);
    let mut off = 0;
    for b in &p.blocks {
        for k in 0..b.mult {
            m.set(off + k, off + k, b.lambda.clone());
            if k + 1 < b.mult {
                m.set(off + k, off + k + 1, S::one());
            }
            m.set(i, off + k, b.z[k].clone());
            m.set(off + k, i, b.y[k].clone());
        }
        off += b.mult;
    }
    m.set(i, i, p.w.clone());
    m
}

/// `s_l = Σ_j z_j y_{j+l}` for l = 0..m-1.
pub fn convolutions<S: Scalar>(b: &SolutionBlock<S>) -> Vec<S> {
    (0..b.mult)
        .map(|l| {
            (0..b.mult - l).fold(S::zero(), |acc, j| acc + b.z[j].clone() * b.y[j + l].clone())
        })
        .collect()
}

/// Ascending coefficients of `(t - λ)^m`.
fn linear_power<S: Scalar>(lambda: &S, m: usize) -> Vec<S> {
    let lin = vec![-lambda.clone(), S::one()];
    (0..m).fold(vec![S::one()], |acc, _| poly_mul(&acc, &lin))
}

/// `Π_{q≠skip} (t - λ_q)^{m_q}`.
fn block_product<S: Scalar>(blocks: &[SolutionBlock<S>], skip: Option<usize>) -> Vec<S> {
    blocks
        .iter()
        .enumerate()
        .filter(|(q, _)| Some(*q) != skip)
        .fold(vec![S::one()], |acc, (_, b)| poly_mul(&acc, &linear_power(&b.lambda, b.mult)))
}

fn add_into<S: Scalar>(acc: &mut Vec<S>, v: &[S], sign: bool) {
    if acc.len() < v.len() {
        acc.resize(v.len(), S::zero());
    }
    for (a, b) in acc.iter_mut().zip(v) {
        *a = if sign { a.clone() + b.clone() } else { a.clone() - b.clone() };
    }
}

/// Characteristic polynomial of `assemble(p)` from the closed formula.
pub fn xi_charpoly<S: Scalar>(p: &SolutionPoint<S>) -> MonicPoly<S> {
    let whole = block_product(&p.blocks, None);
    let mut out = poly_mul(&[-p.w.clone(), S::one()], &whole);
    for (k, b) in p.blocks.iter().enumerate() {
        let s = convolutions(b);
        let mut q = Vec::new();
        for (l, sl) in s.iter().enumerate() {
            if sl.is_exact_zero() {
                continue;
            }
            let term: Vec<S> = linear_power(&b.lambda, b.mult - 1 - l)
                .into_iter()
                .map(|c| c * sl.clone())
                .collect();
            add_into(&mut q, &term, true);
        }
        if q.is_empty() {
            continue;
        }
        add_into(&mut out, &poly_mul(&block_product(&p.blocks, Some(k)), &q), false);
    }
    MonicPoly::from_full(&out).expect("leading coefficient is one")
}

/// Which blocks of `spec` have an eigenvalue that is also a root of `target`.
pub fn shared_blocks<S: Scalar>(spec: &Spectrum<S>, target: &MonicPoly<S>, tol: &Tolerance) -> Result<Vec<bool>> {
    if S::MODE == Mode::Exact {
        return Ok(spec.roots().iter().map(|(l, _)| target.eval(l).is_exact_zero()).collect());
    }
    let ts = S::split(target, tol)?;
    let common = crate::poly::common_roots(spec, &ts, tol);
    Ok(spec
        .roots()
        .iter()
        .map(|(l, _)| common.iter().any(|c| c == l))
        .collect())
}

/// Border data reaching `target` from Jordan data `spec`.
///
/// `choice` must name exactly the shared eigenvalues. `params[k]`, when
/// given, fixes the free vector of block k: `z` for Lower and unshared
/// blocks (needs `z_1 != 0`), `y` for Upper blocks (needs `y_m != 0`).
/// Defaults are `z = e_1` and `y = e_m`.
pub fn xi_solve<S: Scalar>(
    spec: &Spectrum<S>,
    target: &MonicPoly<S>,
    choice: &BlockChoice<S>,
    params: &[Option<Vec<S>>],
    tol: &Tolerance,
) -> Result<SolutionPoint<S>> {
    let i = spec.degree();
    if target.degree() != i + 1 {
        return Err(GzError::DimensionMismatch(format!(
            "target has degree {}, expected {}",
            target.degree(),
            i + 1
        )));
    }
    if !params.is_empty() && params.len() != spec.distinct() {
        return Err(GzError::InvalidParams(format!(
            "{} parameter slots for {} blocks",
            params.len(),
            spec.distinct()
        )));
    }
    let shared = shared_blocks(spec, target, tol)?;
    let mut sides: Vec<Option<Side>> = vec![None; spec.distinct()];
    for (root, side) in &choice.entries {
        let k = spec
            .position(root, tol)
            .ok_or_else(|| GzError::InvalidChoice(format!("{root} is not an eigenvalue of the level-{i} cutoff")))?;
        if !shared[k] {
            return Err(GzError::InvalidChoice(format!("{root} is not a shared root at level {i}")));
        }
        if sides[k].replace(*side).is_some() {
            return Err(GzError::InvalidChoice(format!("{root} chosen twice")));
        }
    }
    if let Some(k) = (0..spec.distinct()).find(|&k| shared[k] && sides[k].is_none()) {
        return Err(GzError::InvalidChoice(format!(
            "no choice for shared root {}",
            spec.roots()[k].0
        )));
    }

    let mut blocks: Vec<SolutionBlock<S>> = spec
        .roots()
        .iter()
        .map(|(l, m)| SolutionBlock {
            lambda: l.clone(),
            mult: *m,
            z: vec![S::zero(); *m],
            y: vec![S::zero(); *m],
        })
        .collect();
    let tfull = target.full();
    let abs = tol.eq_at(target.scale().max(spec.scale()));
    for k in 0..blocks.len() {
        let m = blocks[k].mult;
        let lambda = blocks[k].lambda.clone();
        // Σ_l s_l u^{m-1-l} ≡ -T(λ+u) / P_k(λ+u)  mod u^m
        let num: Vec<S> = taylor_full(&tfull, &lambda, m - 1).into_iter().map(|c| -c).collect();
        let den = taylor_full(&block_product(&blocks, Some(k)), &lambda, m - 1);
        let r = series_div(&num, &den, m)?;
        let mut s: Vec<S> = (0..m).map(|l| r[m - 1 - l].clone()).collect();
        if shared[k] {
            s[m - 1] = S::zero();
        }
        let side = sides[k].unwrap_or(Side::Lower);
        let given = params.get(k).cloned().flatten();
        if given.as_ref().is_some_and(|v| v.len() != m) {
            return Err(GzError::InvalidParams(format!("block {} parameters need length {m}", k + 1)));
        }
        let b = &mut blocks[k];
        match side {
            Side::Lower => {
                let z = given.unwrap_or_else(|| unit(m, 0));
                if z[0].is_negligible(abs) {
                    return Err(GzError::InvalidParams(format!("block {}: z_1 must be nonzero", k + 1)));
                }
                let mut y = vec![S::zero(); m];
                for l in (0..m).rev() {
                    let mut acc = s[l].clone();
                    for j in 1..m - l {
                        acc = acc - z[j].clone() * y[j + l].clone();
                    }
                    y[l] = acc / z[0].clone();
                }
                b.z = z;
                b.y = y;
            }
            Side::Upper => {
                let y = given.unwrap_or_else(|| unit(m, m - 1));
                if y[m - 1].is_negligible(abs) {
                    return Err(GzError::InvalidParams(format!("block {}: y_m must be nonzero", k + 1)));
                }
                let mut z = vec![S::zero(); m];
                for q in 0..m {
                    // s_{m-1-q} = z_q y_{m-1} + Σ_{p<q} z_p y_{p+m-1-q}
                    let l = m - 1 - q;
                    let mut acc = s[l].clone();
                    for p in 0..q {
                        acc = acc - z[p].clone() * y[p + l].clone();
                    }
                    z[q] = acc / y[m - 1].clone();
                }
                b.z = z;
                b.y = y;
            }
        }
    }
    let trace_j = blocks
        .iter()
        .fold(S::zero(), |acc, b| acc + b.lambda.clone() * S::from_i64(b.mult as i64));
    let w = -target.coeff(i) - trace_j;
    SolutionPoint::new(blocks, w)
}

fn unit<S: Scalar>(m: usize, k: usize) -> Vec<S> {
    let mut v = vec![S::zero(); m];
    v[k] = S::one();
    v
}

/// Invertible upper-triangular Toeplitz matrices, one per block, each given
/// by its first row.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzElt<S> {
    pub blocks: Vec<Vec<S>>,
}

impl<S: Scalar> ToeplitzElt<S> {
    pub fn identity(mults: &[usize]) -> Self {
        ToeplitzElt {
            blocks: mults.iter().map(|&m| unit(m, 0)).collect(),
        }
    }
}

/// First row of the inverse of an upper-triangular Toeplitz matrix.
fn toeplitz_inverse<S: Scalar>(a: &[S]) -> Result<Vec<S>> {
    series_div(&[S::one()], a, a.len())
}

/// `y_k <- T_k y_k`, `z_k <- z_k T_k^{-1}` on every block.
pub fn zi_act<S: Scalar>(g: &ToeplitzElt<S>, p: &SolutionPoint<S>) -> Result<SolutionPoint<S>> {
    if g.blocks.len() != p.blocks.len() || g.blocks.iter().zip(&p.blocks).any(|(a, b)| a.len() != b.mult) {
        return Err(GzError::DimensionMismatch("Toeplitz blocks do not match the point".into()));
    }
    let mut out = p.clone();
    for (k, (a, b)) in g.blocks.iter().zip(out.blocks.iter_mut()).enumerate() {
        if a[0].is_exact_zero() {
            return Err(GzError::SingularToeplitz(k + 1));
        }
        let inv = toeplitz_inverse(a)?;
        let m = b.mult;
        let y: Vec<S> = (0..m)
            .map(|r| (r..m).fold(S::zero(), |acc, c| acc + a[c - r].clone() * b.y[c].clone()))
            .collect();
        let z: Vec<S> = (0..m)
            .map(|c| (0..=c).fold(S::zero(), |acc, r| acc + b.z[r].clone() * inv[c - r].clone()))
            .collect();
        b.y = y;
        b.z = z;
    }
    Ok(out)
}

/// Stabilizer of one block's border data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockStabilizer {
    /// Borders vanish: the whole Toeplitz group, of dimension m.
    Full(usize),
    /// A unipotent subgroup of the given positive dimension.
    Unipotent(usize),
    Trivial,
}

impl BlockStabilizer {
    pub fn dim(self) -> usize {
        match self {
            BlockStabilizer::Full(d) | BlockStabilizer::Unipotent(d) => d,
            BlockStabilizer::Trivial => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerPattern {
    pub blocks: Vec<BlockStabilizer>,
}

impl StabilizerPattern {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim()).sum()
    }
}

/// Per block, the Toeplitz elements fixing `(z, y)`. With `T = I + B`, the
/// fixing equations are `B y = 0` and `z B = 0`; a nonzero border forces
/// `b_0 = 0`, leaving a linear system in `b_1..b_{m-1}`.
pub fn stabilizer_pattern<S: Scalar>(p: &SolutionPoint<S>, tol: &Tolerance) -> StabilizerPattern {
    let abs = tol.eq_at(p.scale());
    let blocks = p
        .blocks
        .iter()
        .map(|b| {
            let m = b.mult;
            if b.z.iter().chain(&b.y).all(|v| v.is_negligible(abs)) {
                return BlockStabilizer::Full(m);
            }
            if m == 1 {
                return BlockStabilizer::Trivial;
            }
            // unknowns b_1..b_{m-1}; rows: (B y)_r and (z B)_c
            let mut sys = Dense::<S>::zeros(2 * m, m - 1);
            for r in 0..m {
                for c in r + 1..m {
                    let v = sys.get(r, c - r - 1).clone() + b.y[c].clone();
                    sys.set(r, c - r - 1, v);
                }
            }
            for c in 0..m {
                for r in 0..c {
                    let v = sys.get(m + c, c - r - 1).clone() + b.z[r].clone();
                    sys.set(m + c, c - r - 1, v);
                }
            }
            let d = (m - 1) - sys.rank(tol);
            if d == 0 {
                BlockStabilizer::Trivial
            } else {
                BlockStabilizer::Unipotent(d)
            }
        })
        .collect();
    StabilizerPattern { blocks }
}

pub fn is_free<S: Scalar>(p: &SolutionPoint<S>, tol: &Tolerance) -> bool {
    stabilizer_pattern(p, tol).dim() == 0
}
