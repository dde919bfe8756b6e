//! The GZ flows `Ad(exp(t j x_i^{j-1})) x` and their generators.

use crate::error::{GzError, Result};
use crate::matrix::{mat_exp, Mat};
use crate::scalar::Scalar;

/// One flow: level `i` in 1..n-1, power `j` in 1..i, time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowStep<S> {
    pub i: usize,
    pub j: usize,
    pub t: S,
}

impl<S: Scalar> FlowStep<S> {
    pub fn new(i: usize, j: usize, t: S) -> Self {
        FlowStep { i, j, t }
    }

    pub fn inverse(&self) -> Self {
        FlowStep {
            i: self.i,
            j: self.j,
            t: -self.t.clone(),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n < 2 || self.i == 0 || self.i >= n {
            return Err(GzError::IndexOutOfRange {
                index: self.i,
                bound: n.saturating_sub(1),
            });
        }
        if self.j == 0 || self.j > self.i {
            return Err(GzError::IndexOutOfRange {
                index: self.j,
                bound: self.i,
            });
        }
        Ok(())
    }
}

/// `j embed(x_i^{j-1})`.
fn generator<S: Scalar>(x: &Mat<S>, i: usize, j: usize) -> Result<Mat<S>> {
    Ok(x.cutoff(i)?
        .pow(j - 1)
        .embed(x.n())?
        .scaled(&S::from_i64(j as i64)))
}

/// `[j embed(x_i^{j-1}), x]`, the derivative at t = 0 of [`flow`].
pub fn vector_field<S: Scalar>(x: &Mat<S>, i: usize, j: usize) -> Result<Mat<S>> {
    FlowStep::new(i, j, S::zero()).check(x.n())?;
    Ok(generator(x, i, j)?.commutator(x))
}

/// `Ad(exp(t j embed(x_i^{j-1}))) x`. Exact mode needs a nilpotent generator.
pub fn flow<S: Scalar>(x: &Mat<S>, step: &FlowStep<S>) -> Result<Mat<S>> {
    step.check(x.n())?;
    let gen = generator(x, step.i, step.j)?.scaled(&step.t);
    let e = mat_exp(&gen)?;
    let e_inv = mat_exp(&(-&gen))?;
    Ok(&(&e * x) * &e_inv)
}

/// Apply the steps left to right.
pub fn flow_word<S: Scalar>(x: &Mat<S>, steps: &[FlowStep<S>]) -> Result<Mat<S>> {
    steps.iter().try_fold(x.clone(), |acc, s| flow(&acc, s))
}
