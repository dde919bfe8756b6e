//! A-orbits in a fibre: counting, one representative per orbit, classifying
//! a strongly regular matrix into its orbit, and the nilfibre patterns.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{GzError, Result};
use crate::matrix::{jordanize_regular, Mat};
use crate::moment::{is_strongly_regular, phi, GZSpec};
use crate::poly::{common_roots, Spectrum};
use crate::solution::{assemble, is_free, xi_solve, BlockChoice, Side, SolutionPoint};
use crate::scalar::{Mode, Scalar, Tolerance};

/// One [`BlockChoice`] per level 1..n-1: the complete orbit invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceVector<S> {
    pub levels: Vec<BlockChoice<S>>,
}

impl<S: Scalar> ChoiceVector<S> {
    pub fn new(levels: Vec<BlockChoice<S>>) -> Self {
        ChoiceVector { levels }
    }

    /// Fill the shared-root domains with sides, level by level in order.
    pub fn from_sides(domains: &[Vec<S>], sides: &[Side]) -> Result<Self> {
        let total: usize = domains.iter().map(|d| d.len()).sum();
        if sides.len() != total {
            return Err(GzError::InvalidChoice(format!("{} labels for {total} shared roots", sides.len())));
        }
        let mut it = sides.iter();
        Ok(ChoiceVector {
            levels: domains
                .iter()
                .map(|d| BlockChoice::new(d.iter().map(|r| (r.clone(), *it.next().unwrap())).collect()))
                .collect(),
        })
    }

    pub fn label_count(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    /// All sides, level by level.
    pub fn sides(&self) -> Vec<Side> {
        self.levels.iter().flat_map(|l| l.sides()).collect()
    }
}

impl<S: Scalar> fmt::Display for ChoiceVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .levels
            .iter()
            .map(|l| l.entries.iter().map(|(r, s)| format!("{r}:{s}")).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "({})", parts.join(" | "))
    }
}

/// Labels `(a_1, ..., a_{n-1})` of a nilfibre orbit.
pub type NilChoice = Vec<Side>;

/// A bijection of `{1..n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn from_one_line(v: Vec<usize>) -> Result<Self> {
        let n = v.len();
        let mut seen = vec![false; n + 1];
        for &k in &v {
            if k == 0 || k > n || std::mem::replace(&mut seen[k], true) {
                return Err(GzError::Schema(format!("{v:?} is not a permutation")));
            }
        }
        Ok(Permutation(v))
    }

    /// Order-reversing permutation of `1..=k`, fixing the rest of `1..=n`.
    pub fn longest(k: usize, n: usize) -> Self {
        Permutation((1..=n).map(|i| if i <= k { k + 1 - i } else { i }).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.0[k - 1]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ other)(k) = self(other(k))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation((1..=self.n()).map(|k| self.apply(other.apply(k))).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &k)| k == i + 1)
    }

    /// Cycle notation without fixed points, each cycle starting at its
    /// smallest element; `()` for the identity.
    pub fn cycles(&self) -> String {
        let mut seen = vec![false; self.n() + 1];
        let mut out = String::new();
        for start in 1..=self.n() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            out.push('(');
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                out.push_str(&k.to_string());
                k = self.apply(k);
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberKind {
    /// Adjacent spectra disjoint and every level squarefree.
    Omega,
    /// Adjacent spectra disjoint.
    ThetaOnly,
    /// Some adjacent levels share a root.
    Degenerate,
}

impl FiberKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FiberKind::Omega => "omega",
            FiberKind::ThetaOnly => "theta",
            FiberKind::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberClass {
    /// Number of distinct shared roots between levels i and i+1.
    pub j: Vec<usize>,
    pub kind: FiberKind,
}

/// Shared roots between consecutive levels, in decreasing order.
pub fn choice_domains<S: Scalar>(spectra: &[Spectrum<S>], tol: &Tolerance) -> Vec<Vec<S>> {
    spectra.windows(2).map(|w| common_roots(&w[0], &w[1], tol)).collect()
}

pub fn fiber_class<S: Scalar>(c: &GZSpec<S>, tol: &Tolerance) -> Result<FiberClass> {
    let spectra = c.spectra(tol)?;
    let j: Vec<usize> = choice_domains(&spectra, tol).iter().map(|d| d.len()).collect();
    let kind = if j.iter().any(|&k| k > 0) {
        FiberKind::Degenerate
    } else if spectra.iter().all(|s| s.is_squarefree()) {
        FiberKind::Omega
    } else {
        FiberKind::ThetaOnly
    };
    Ok(FiberClass { j, kind })
}

/// `2^{Σ j_i}`.
pub fn orbit_count<S: Scalar>(c: &GZSpec<S>, tol: &Tolerance) -> Result<u128> {
    let total: usize = fiber_class(c, tol)?.j.iter().sum();
    if total >= 128 {
        return Err(GzError::InvalidParams(format!("2^{total} orbits overflow the counter")));
    }
    Ok(1u128 << total)
}

fn embed_block<S: Scalar>(g: &Mat<S>, n: usize) -> Mat<S> {
    let mut m = Mat::identity(n);
    for r in 0..g.n() {
        for c in 0..g.n() {
            m.set(r, c, g.get(r, c).clone());
        }
    }
    m
}

fn check_choice<S: Scalar>(v: &ChoiceVector<S>, domains: &[Vec<S>]) -> Result<()> {
    if v.levels.len() != domains.len() {
        return Err(GzError::InvalidChoice(format!(
            "choice has {} levels, fibre has {}",
            v.levels.len(),
            domains.len()
        )));
    }
    Ok(())
}

/// The strongly regular matrix of the orbit labelled by `v`.
///
/// Each level's border data is solved with canonical parameters, the
/// bordered matrices are chained by their Jordan conjugators, and the top
/// level is conjugated back down: `Ad(g_{1,2}^{-1} ... g_{n-2,n-1}^{-1})`.
pub fn orbit_representative<S: Scalar>(c: &GZSpec<S>, v: &ChoiceVector<S>, tol: &Tolerance) -> Result<Mat<S>> {
    let n = c.n();
    let spectra = c.spectra(tol)?;
    check_choice(v, &choice_domains(&spectra, tol))?;
    if n == 1 {
        return Ok(Mat::from_fn(1, |_, _| -c.level(1).expect("n = 1").coeffs[0].clone()));
    }
    let mut points: Vec<SolutionPoint<S>> = Vec::with_capacity(n - 1);
    for i in 1..n {
        let p = xi_solve(&spectra[i - 1], c.level(i + 1)?, &v.levels[i - 1], &[], tol)?;
        if !is_free(&p, tol) {
            return Err(GzError::Internal(format!("level-{i} base point has a nontrivial stabilizer")));
        }
        points.push(p);
    }
    let mut x = assemble(&points[n - 2]);
    for i in (1..n - 1).rev() {
        let frame = jordanize_regular(&assemble(&points[i - 1]), &spectra[i], tol)?;
        x = &(&embed_block(&frame.g_inv, n) * &x) * &embed_block(&frame.g, n);
    }
    Ok(x)
}

/// Choice vectors of a fibre in enumeration order: shared roots level by
/// level, the first slot most significant, U before L.
pub fn choice_vectors<S: Scalar>(c: &GZSpec<S>, tol: &Tolerance) -> Result<Vec<ChoiceVector<S>>> {
    let domains = choice_domains(&c.spectra(tol)?, tol);
    let total: usize = domains.iter().map(|d| d.len()).sum();
    if total >= usize::BITS as usize {
        return Err(GzError::InvalidParams(format!("2^{total} orbits are too many to enumerate")));
    }
    (0..1usize << total)
        .map(|mask| {
            let sides: Vec<Side> = (0..total)
                .map(|slot| {
                    if mask >> (total - 1 - slot) & 1 == 0 {
                        Side::Upper
                    } else {
                        Side::Lower
                    }
                })
                .collect();
            ChoiceVector::from_sides(&domains, &sides)
        })
        .collect()
}

pub fn enumerate_orbits<S: Scalar>(c: &GZSpec<S>, tol: &Tolerance) -> Result<Vec<(ChoiceVector<S>, Mat<S>)>> {
    choice_vectors(c, tol)?
        .into_iter()
        .map(|v| {
            let x = orbit_representative(c, &v, tol)?;
            Ok((v, x))
        })
        .collect()
}

/// Orbit label of a strongly regular matrix.
pub fn classify<S: Scalar>(x: &Mat<S>, tol: &Tolerance) -> Result<ChoiceVector<S>> {
    classify_with(x, None, &|_, g| g.clone(), tol)
}

/// [`classify`] with the cutoff spectra supplied (avoids root extraction).
pub fn classify_with_spectra<S: Scalar>(x: &Mat<S>, spectra: &[Spectrum<S>], tol: &Tolerance) -> Result<ChoiceVector<S>> {
    classify_with(x, Some(spectra), &|_, g| g.clone(), tol)
}

/// Classification with a hook on every Jordan conjugator. `twist(i, g)`
/// must return another conjugator of the level-`i` cutoff into the same
/// Jordan matrix (typically `c g` with `c` centralizing it); the answer does
/// not depend on it.
pub fn classify_with<S: Scalar>(
    x: &Mat<S>,
    spectra: Option<&[Spectrum<S>]>,
    twist: &dyn Fn(usize, &Mat<S>) -> Mat<S>,
    tol: &Tolerance,
) -> Result<ChoiceVector<S>> {
    if !is_strongly_regular(x, tol)? {
        return Err(GzError::NotStronglyRegular);
    }
    let n = x.n();
    let spectra = match spectra {
        Some(s) => {
            if s.len() != n || s.iter().enumerate().any(|(k, sp)| sp.degree() != k + 1) {
                return Err(GzError::DimensionMismatch("one spectrum of degree i per level i".into()));
            }
            s.to_vec()
        }
        None => phi(x).spectra(tol)?,
    };
    let domains = choice_domains(&spectra, tol);
    let mut levels: Vec<BlockChoice<S>> = domains.iter().map(|_| BlockChoice::empty()).collect();
    let Some(last) = domains.iter().rposition(|d| !d.is_empty()) else {
        return Ok(ChoiceVector::new(levels));
    };
    let mut cur = x.clone();
    for i in 1..=last + 1 {
        if i > 1 {
            // bring the level-i cutoff into Jordan form
            let frame = jordanize_regular(&cur.cutoff(i)?, &spectra[i - 1], tol)?;
            let g = twist(i, &frame.g);
            let g_inv = g.inverse()?;
            cur = &(&embed_block(&g, n) * &cur) * &embed_block(&g_inv, n);
        }
        if domains[i - 1].is_empty() {
            continue;
        }
        let p = SolutionPoint::from_bordered(&cur.cutoff(i + 1)?, &spectra[i - 1])?;
        let abs = if S::MODE == Mode::Exact { 0.0 } else { tol.eq_at(p.scale()) };
        for root in &domains[i - 1] {
            let k = spectra[i - 1]
                .position(root, tol)
                .ok_or_else(|| GzError::Internal(format!("shared root {root} missing from level {i}")))?;
            let b = &p.blocks[k];
            let z_zero = b.z[0].is_negligible(abs);
            let y_zero = b.y[b.mult - 1].is_negligible(abs);
            let side = match (z_zero, y_zero) {
                (false, true) => Side::Lower,
                (true, false) => Side::Upper,
                _ => {
                    return Err(GzError::Ambiguous {
                        level: i,
                        detail: format!("at {root}: z_1 = {}, y_m = {}", b.z[0], b.y[b.mult - 1]),
                    })
                }
            };
            levels[i - 1].entries.push((root.clone(), side));
        }
    }
    Ok(ChoiceVector::new(levels))
}

/// Positions (1-based) of the nilradical attached to `v`: `U` at level i
/// frees column i+1 above the diagonal, `L` frees row i+1 left of it.
pub fn nil_pattern(v: &[Side]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (k, side) in v.iter().enumerate() {
        let i = k + 1;
        for m in 1..=i {
            out.insert(match side {
                Side::Upper => (m, i + 1),
                Side::Lower => (i + 1, m),
            });
        }
    }
    out
}

/// Strictly lower triangular positions in gl(n).
pub fn lower_pattern(n: usize) -> BTreeSet<(usize, usize)> {
    (1..=n).flat_map(|r| (1..r).map(move |c| (r, c))).collect()
}

/// `σ = τ_1 ⋯ τ_{n-1}` with `τ_i` the longest element of S_{i+1} when
/// `a_i != a_{i+1}` (taking `a_n = L`) and the identity otherwise.
pub fn nil_permutation(v: &[Side]) -> Permutation {
    let n = v.len() + 1;
    let a = |i: usize| if i == n { Side::Lower } else { v[i - 1] };
    (1..n).fold(Permutation::identity(n), |sigma, i| {
        if a(i) != a(i + 1) {
            sigma.compose(&Permutation::longest(i + 1, n))
        } else {
            sigma
        }
    })
}

/// Image of a pattern under `(i, j) -> (σ i, σ j)`.
pub fn permute_pattern(p: &BTreeSet<(usize, usize)>, sigma: &Permutation) -> BTreeSet<(usize, usize)> {
    p.iter().map(|&(r, c)| (sigma.apply(r), sigma.apply(c))).collect()
}

/// Every nonzero entry of `x` lies in `pattern`.
pub fn within_pattern<S: Scalar>(x: &Mat<S>, pattern: &BTreeSet<(usize, usize)>, tol: &Tolerance) -> bool {
    let abs = tol.eq_at(x.scale());
    (0..x.n()).all(|r| (0..x.n()).all(|c| pattern.contains(&(r + 1, c + 1)) || x.get(r, c).is_negligible(abs)))
}
