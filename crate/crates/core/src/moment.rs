//! The GZ functions: the map Φ, trace invariants, their gradients, and the
//! three equivalent tests for strong regularity.

use crate::error::{GzError, Result};
use crate::linalg::{self, Dense};
use crate::matrix::Mat;
use crate::poly::{MonicPoly, Spectrum};
use crate::scalar::{Mode, Scalar, Tolerance};

/// A fibre label: one monic polynomial of degree i for each level i = 1..n,
/// optionally with its known spectrum. Equality looks at the polynomials only.
#[derive(Debug, Clone)]
pub struct GZSpec<S: Scalar> {
    levels: Vec<MonicPoly<S>>,
    spectra: Vec<Option<Spectrum<S>>>,
}

impl<S: Scalar> GZSpec<S> {
    pub fn new(levels: Vec<MonicPoly<S>>) -> Result<Self> {
        for (k, p) in levels.iter().enumerate() {
            if p.degree() != k + 1 {
                return Err(GzError::DimensionMismatch(format!(
                    "level {} polynomial has degree {}",
                    k + 1,
                    p.degree()
                )));
            }
        }
        let spectra = vec![None; levels.len()];
        Ok(GZSpec { levels, spectra })
    }

    /// Build from per-level spectra; the spectra are cached.
    pub fn from_spectra(spectra: Vec<Spectrum<S>>) -> Result<Self> {
        let mut spec = GZSpec::new(spectra.iter().map(|s| s.poly()).collect())?;
        spec.spectra = spectra.into_iter().map(Some).collect();
        Ok(spec)
    }

    /// The nilfibre label `(t, t^2, ..., t^n)`.
    pub fn zero(n: usize) -> Self {
        GZSpec::new((1..=n).map(MonicPoly::monomial).collect()).expect("degrees 1..n")
    }

    /// Attach a known spectrum to level `i` (1-based).
    pub fn set_spectrum(&mut self, i: usize, s: Spectrum<S>, tol: &Tolerance) -> Result<()> {
        self.check_level(i)?;
        if !s.poly().approx_eq(&self.levels[i - 1], tol) {
            return Err(GzError::SpectrumMismatch(format!("supplied roots do not match level {i}")));
        }
        self.spectra[i - 1] = Some(s);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    fn check_level(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            return Err(GzError::IndexOutOfRange {
                index: i,
                bound: self.n(),
            });
        }
        Ok(())
    }

    pub fn level(&self, i: usize) -> Result<&MonicPoly<S>> {
        self.check_level(i)?;
        Ok(&self.levels[i - 1])
    }

    pub fn levels(&self) -> &[MonicPoly<S>] {
        &self.levels
    }

    pub fn cached_spectrum(&self, i: usize) -> Option<&Spectrum<S>> {
        self.spectra.get(i.wrapping_sub(1)).and_then(|s| s.as_ref())
    }

    /// Spectrum of level `i`, from the cache or by root extraction.
    pub fn spectrum(&self, i: usize, tol: &Tolerance) -> Result<Spectrum<S>> {
        self.check_level(i)?;
        match &self.spectra[i - 1] {
            Some(s) => Ok(s.clone()),
            None => S::split(&self.levels[i - 1], tol),
        }
    }

    pub fn spectra(&self, tol: &Tolerance) -> Result<Vec<Spectrum<S>>> {
        (1..=self.n()).map(|i| self.spectrum(i, tol)).collect()
    }

    /// Fill every missing spectrum.
    pub fn with_all_spectra(mut self, tol: &Tolerance) -> Result<Self> {
        for i in 1..=self.n() {
            if self.spectra[i - 1].is_none() {
                self.spectra[i - 1] = Some(S::split(&self.levels[i - 1], tol)?);
            }
        }
        Ok(self)
    }

    pub fn approx_eq(&self, other: &Self, tol: &Tolerance) -> bool {
        self.n() == other.n() && self.levels.iter().zip(&other.levels).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Largest coefficient error of `other` against `self`, each level
    /// measured relative to its own coefficient scale.
    pub fn rel_error(&self, other: &Self) -> f64 {
        if self.n() != other.n() {
            return f64::INFINITY;
        }
        self.levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.rel_error(b))
            .fold(0.0, f64::max)
    }

    pub fn to_float(&self) -> GZSpec<num_complex::Complex64> {
        GZSpec {
            levels: self
                .levels
                .iter()
                .map(|p| MonicPoly::new(p.coeffs.iter().map(|c| c.to_c64()).collect()))
                .collect(),
            spectra: self
                .spectra
                .iter()
                .map(|s| {
                    s.as_ref().map(|s| {
                        Spectrum::new(
                            s.roots().iter().map(|(r, m)| (r.to_c64(), *m)).collect(),
                            &Tolerance::default(),
                        )
                        .expect("positive multiplicities")
                    })
                })
                .collect(),
        }
    }
}

impl<S: Scalar> PartialEq for GZSpec<S> {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}

/// Characteristic polynomials of all cutoffs.
pub fn phi<S: Scalar>(x: &Mat<S>) -> GZSpec<S> {
    let levels = (1..=x.n())
        .map(|i| x.cutoff(i).expect("level in range").charpoly())
        .collect();
    GZSpec::new(levels).expect("cutoff degrees are 1..n")
}

fn check_pair(n: usize, i: usize, j: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(GzError::IndexOutOfRange { index: i, bound: n });
    }
    if j == 0 || j > i {
        return Err(GzError::IndexOutOfRange { index: j, bound: i });
    }
    Ok(())
}

/// `f_{i,j}(x) = tr(x_i^j)`.
pub fn trace_invariant<S: Scalar>(x: &Mat<S>, i: usize, j: usize) -> Result<S> {
    check_pair(x.n(), i, j)?;
    Ok(x.cutoff(i)?.pow(j).trace())
}

/// `embed(x_i^{j-1})`, the trace-form gradient of `f_{i,j}` up to the factor j.
pub fn gradient<S: Scalar>(x: &Mat<S>, i: usize, j: usize) -> Result<Mat<S>> {
    check_pair(x.n(), i, j)?;
    x.cutoff(i)?.pow(j - 1).embed(x.n())
}

/// Gradients for `1 <= j <= i <= n` in (i, j) lexicographic order.
pub fn gradient_basis<S: Scalar>(x: &Mat<S>) -> Vec<Mat<S>> {
    let n = x.n();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 1..=n {
        let xi = x.cutoff(i).expect("level in range");
        let mut p = Mat::identity(i);
        for _ in 1..=i {
            out.push(p.embed(n).expect("i <= n"));
            p = &p * &xi;
        }
    }
    out
}

fn vectors<S: Scalar>(ms: &[Mat<S>]) -> Vec<Vec<S>> {
    ms.iter().map(|m| m.as_vector().to_vec()).collect()
}

/// The GZ differentials are linearly independent at `x`.
pub fn sreg_differentials<S: Scalar>(x: &Mat<S>, tol: &Tolerance) -> bool {
    let n = x.n();
    linalg::rank_of_vectors(&vectors(&gradient_basis(x)), n * n, tol) == n * (n + 1) / 2
}

/// Dimension of `z_{gl(i-1)}(x_{i-1}) ∩ z_{gl(i)}(x_i)` for `i >= 2`, from one
/// stacked commutator system in the unknown `z ∈ gl(i-1)`.
pub fn centralizer_intersection_dim<S: Scalar>(x: &Mat<S>, i: usize, tol: &Tolerance) -> Result<usize> {
    if i < 2 || i > x.n() {
        return Err(GzError::IndexOutOfRange { index: i, bound: x.n() });
    }
    let lo = x.cutoff(i - 1)?;
    let hi = x.cutoff(i)?;
    let k = i - 1;
    let op_lo = lo.commutator_operator();
    let op_hi = hi.commutator_operator();
    let mut sys = Dense::zeros(k * k + i * i, k * k);
    for r in 0..k * k {
        for c in 0..k * k {
            sys.set(r, c, op_lo.get(r, c).clone());
        }
    }
    for r in 0..i * i {
        for a in 0..k {
            for b in 0..k {
                sys.set(k * k + r, a * k + b, op_hi.get(r, a * i + b).clone());
            }
        }
    }
    Ok(k * k - sys.rank(tol))
}

/// Per-level data for the centralizer characterization.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralizerReport {
    /// Entry i-1 tells whether the cutoff x_i is regular.
    pub cutoff_regular: Vec<bool>,
    /// Entry i-1 is the intersection dimension at level i (zero at level 1).
    pub intersection_dims: Vec<usize>,
}

impl CentralizerReport {
    pub fn passes(&self) -> bool {
        self.cutoff_regular.iter().all(|&b| b) && self.intersection_dims.iter().all(|&d| d == 0)
    }

    /// First level whose intersection is nonzero.
    pub fn first_intersection_failure(&self) -> Option<usize> {
        self.intersection_dims.iter().position(|&d| d > 0).map(|k| k + 1)
    }
}

pub fn sreg_centralizers<S: Scalar>(x: &Mat<S>, tol: &Tolerance) -> CentralizerReport {
    let n = x.n();
    let cutoff_regular = (1..=n)
        .map(|i| x.cutoff(i).expect("level in range").is_regular(tol))
        .collect();
    let intersection_dims = (1..=n)
        .map(|i| {
            if i == 1 {
                0
            } else {
                centralizer_intersection_dim(x, i, tol).expect("level in range")
            }
        })
        .collect();
    CentralizerReport {
        cutoff_regular,
        intersection_dims,
    }
}

/// Brackets `[embed(x_i^{j-1}), x]` for `1 <= j <= i <= n-1`. The level-n
/// gradients commute with x and are left out.
pub fn tangent_vectors<S: Scalar>(x: &Mat<S>) -> Vec<Mat<S>> {
    let n = x.n();
    gradient_basis(x)
        .into_iter()
        .take((n - 1) * n / 2)
        .map(|g| g.commutator(x))
        .collect()
}

/// Dimension of the span of the GZ vector fields at x, i.e. of the A-orbit.
pub fn tangent_space_dim<S: Scalar>(x: &Mat<S>, tol: &Tolerance) -> usize {
    let n = x.n();
    if n == 0 {
        return 0;
    }
    linalg::rank_of_vectors(&vectors(&tangent_vectors(x)), n * n, tol)
}

/// All three strong-regularity characterizations side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct SregReport {
    pub n: usize,
    pub via_differentials: bool,
    pub via_centralizers: bool,
    pub centralizers: CentralizerReport,
    pub tangent_dim: usize,
}

impl SregReport {
    pub fn via_tangent(&self) -> bool {
        self.tangent_dim == self.n * (self.n - 1) / 2
    }

    pub fn agree(&self) -> bool {
        self.via_differentials == self.via_centralizers && self.via_centralizers == self.via_tangent()
    }
}

pub fn sreg_report<S: Scalar>(x: &Mat<S>, tol: &Tolerance) -> SregReport {
    let centralizers = sreg_centralizers(x, tol);
    SregReport {
        n: x.n(),
        via_differentials: sreg_differentials(x, tol),
        via_centralizers: centralizers.passes(),
        centralizers,
        tangent_dim: tangent_space_dim(x, tol),
    }
}

/// Strong regularity, refusing to answer when the characterizations disagree.
pub fn is_strongly_regular<S: Scalar>(x: &Mat<S>, tol: &Tolerance) -> Result<bool> {
    let r = sreg_report(x, tol);
    if !r.agree() {
        let detail = format!(
            "differentials {}, centralizers {}, tangent dimension {} of {}",
            r.via_differentials,
            r.via_centralizers,
            r.tangent_dim,
            r.n * (r.n - 1) / 2
        );
        return Err(match S::MODE {
            Mode::Float => GzError::ToleranceDisagreement(detail),
            Mode::Exact => GzError::Internal(detail),
        });
    }
    Ok(r.via_differentials)
}

/// `{f_{i,j}, f_{k,l}}(x) = tr(x [j x_i^{j-1}, l x_k^{l-1}])` with both
/// gradients embedded in gl(n).
pub fn poisson_bracket_residual<S: Scalar>(x: &Mat<S>, (i, j): (usize, usize), (k, l): (usize, usize)) -> Result<S> {
    let a = gradient(x, i, j)?.scaled(&S::from_i64(j as i64));
    let b = gradient(x, k, l)?.scaled(&S::from_i64(l as i64));
    Ok((x * &a.commutator(&b)).trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    type Q = GaussRat;

    fn x_omega() -> Mat<Q> {
        Mat::from_i64(&[&[1, 2, 16], &[1, 0, 4], &[0, 1, -3]])
    }

    fn nsreg(x2: i64, x3: i64, y1: i64) -> Mat<Q> {
        Mat::from_i64(&[&[0, 0, 0, 0], &[1, 0, 0, x2], &[0, 1, 0, x3], &[y1, 0, 0, 0]])
    }

    fn mp(c: &[i64]) -> MonicPoly<Q> {
        MonicPoly::new(c.iter().map(|&v| Q::from_i64(v)).collect())
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&Mat::<Q>::zeros(3)), GZSpec::zero(3));
        let p = phi(&x_omega());
        assert_eq!(p.levels(), &[mp(&[-1]), mp(&[-2, -1]), mp(&[-18, -9, 2])]);
        let d = phi(&Mat::<Q>::from_i64(&[&[1, 0], &[0, 2]]));
        assert_eq!(d.levels(), &[mp(&[-1]), mp(&[2, -3])]);
    }

    #[test]
    fn spec_rejects_wrong_degrees() {
        assert!(GZSpec::new(vec![mp(&[1, 2])]).is_err());
    }

    #[test]
    fn trace_invariants() {
        let x = x_omega();
        assert_eq!(trace_invariant(&x, 1, 1).unwrap(), Q::from_i64(1));
        assert_eq!(trace_invariant(&x, 2, 1).unwrap(), Q::from_i64(1));
        assert_eq!(trace_invariant(&Mat::<Q>::zeros(3), 3, 2).unwrap(), Q::zero());
        assert!(trace_invariant(&x, 2, 3).is_err());
        assert!(trace_invariant(&x, 4, 1).is_err());
    }

    #[test]
    fn gradient_examples() {
        let g = gradient_basis(&Mat::<Q>::zeros(2));
        assert_eq!(g.len(), 3);
        assert_eq!(g[0], Mat::from_i64(&[&[1, 0], &[0, 0]]));
        assert_eq!(g[1], Mat::identity(2));
        assert!(g[2].is_zero());
        let tol = Tolerance::default();
        // diag(1,2) = I + E_22 lies in the span of E_11 and I
        let d = Mat::<Q>::from_i64(&[&[1, 0], &[0, 2]]);
        assert_eq!(linalg::rank_of_vectors(&vectors(&gradient_basis(&d)), 4, &tol), 2);
        assert!(!sreg_differentials(&d, &tol));
        let h = Mat::<Q>::from_i64(&[&[1, 3], &[1, 2]]);
        assert_eq!(linalg::rank_of_vectors(&vectors(&gradient_basis(&h)), 4, &tol), 3);
    }

    #[test]
    fn sreg_examples() {
        let tol = Tolerance::default();
        let r = sreg_report(&x_omega(), &tol);
        assert!(r.via_differentials && r.via_centralizers && r.agree());
        assert_eq!(r.tangent_dim, 3);

        let z = sreg_report(&Mat::<Q>::zeros(3), &tol);
        assert!(!z.via_differentials && !z.via_centralizers);
        assert_eq!(z.centralizers.cutoff_regular, vec![true, false, false]);
        assert_eq!(z.tangent_dim, 0);

        for (x2, x3, y1) in [(1, 0, 1), (2, -3, 5), (-1, 1, 7)] {
            let r = sreg_report(&nsreg(x2, x3, y1), &tol);
            assert!(!r.via_differentials);
            assert!(r.centralizers.cutoff_regular.iter().all(|&b| b));
            assert_eq!(r.centralizers.first_intersection_failure(), Some(4));
            assert!(r.tangent_dim < 6);
            assert!(r.agree());
        }
    }

    #[test]
    fn float_sreg_agrees_on_example() {
        let tol = Tolerance::default();
        assert!(is_strongly_regular(&x_omega().to_float(), &tol).unwrap());
        assert!(!is_strongly_regular(&nsreg(1, 0, 1).to_float(), &tol).unwrap());
    }

    #[test]
    fn level_n_brackets_vanish() {
        let x = x_omega();
        let g = gradient_basis(&x);
        for m in &g[3..] {
            assert!(m.commutator(&x).is_zero());
        }
    }

    #[test]
    fn poisson_examples() {
        let x = x_omega();
        for (i, j, k, l) in [(1, 1, 3, 2), (2, 2, 3, 3), (2, 1, 2, 2), (1, 1, 2, 2)] {
            assert!(poisson_bracket_residual(&x, (i, j), (k, l)).unwrap().is_exact_zero());
        }
        assert!(poisson_bracket_residual(&Mat::<Q>::zeros(3), (3, 3), (2, 2)).unwrap().is_exact_zero());
        assert!(poisson_bracket_residual(&x, (1, 2), (1, 1)).is_err());
    }
}
