//! Gelfand-Zeitlin toolkit on n x n complex matrices.
//!
//! The cutoff characteristic polynomials of `x` form the map [`phi`]. Its
//! fibres are foliated by the orbits of the GZ flows; this crate evaluates
//! and inverts [`phi`], integrates the flows, tests strong regularity, and
//! counts, builds and classifies the strongly regular orbits of any fibre.
//!
//! Every algorithm is generic over [`Scalar`]: [`GaussRat`] for exact
//! Gaussian-rational arithmetic and `Complex64` for floating point, where
//! all zero and rank decisions go through a [`Tolerance`].

pub mod census;
pub mod error;
pub mod flows;
pub mod hessenberg;
pub mod linalg;
pub mod matrix;
pub mod moment;
pub mod poly;
pub mod scalar;
pub mod solution;
pub mod wire;

pub use census::{
    choice_domains, choice_vectors, classify, classify_with, classify_with_spectra, enumerate_orbits, fiber_class,
    lower_pattern, nil_pattern, nil_permutation, orbit_count, orbit_representative, permute_pattern,
    within_pattern, ChoiceVector, FiberClass, FiberKind, NilChoice, Permutation,
};
pub use error::{GzError, Result};
pub use flows::{flow, flow_word, vector_field, FlowStep};
pub use hessenberg::{hessenberg_from_spec, is_hessenberg};
pub use matrix::{jordanize_regular, mat_exp, JordanFrame, Mat};
pub use moment::{
    gradient_basis, is_strongly_regular, phi, poisson_bracket_residual, sreg_centralizers, sreg_differentials,
    sreg_report, tangent_space_dim, trace_invariant, CentralizerReport, GZSpec, SregReport,
};
pub use num_complex::Complex64;
pub use poly::{common_roots, poly_from_spectrum, spectrum_from_poly, taylor_at, MonicPoly, Spectrum};
pub use scalar::{lex_greater, GaussRat, Mode, Scalar, Tolerance};
pub use solution::{
    assemble, is_free, stabilizer_pattern, xi_charpoly, xi_solve, zi_act, BlockChoice, BlockStabilizer, Side,
    SolutionBlock, SolutionPoint, StabilizerPattern, ToeplitzElt,
};
