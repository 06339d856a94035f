//! Whitney intersection number of `g = G|M` for a polynomial map
//! `G: R^{m+1} -> R^{2m}` (m even) and a hypersurface `M = f^{-1}(0)`.
//!
//! The Jacobian matrix of `(f, g_1, .., g_2m)` is a `(2m+1) x (m+1)` frame;
//! its invariant Λ is computed by [`crate::stiefel`] and
//! `I(g) = (sig Θ_δ + sig Θ_{f·δ}) / 2`, which equals Λ because the frame
//! has an odd number `m + 1` of columns.

use crate::error::{Error, Result};
use crate::poly::{PolyMatrix, Polynomial};
use crate::stiefel::{lambda, HypersurfaceSpec, LambdaReport, PipelineOptions, StiefelProblem};

#[derive(Clone, Debug, PartialEq)]
pub struct ImmersionProblem {
    f: Polynomial,
    g: Vec<Polynomial>,
}

impl ImmersionProblem {
    pub fn new(f: Polynomial, g: Vec<Polynomial>) -> Result<Self> {
        if g.len() % 2 == 1 {
            return Err(Error::InvalidProblem(format!(
                "G has {} components; 2m components are required",
                g.len()
            )));
        }
        let m = g.len() / 2;
        if m < 2 || m % 2 == 1 {
            return Err(Error::InvalidProblem(format!(
                "m = {m}; m must be even and at least 2"
            )));
        }
        if f.nvars() != m + 1 {
            return Err(Error::InvalidProblem(format!(
                "m = {m} needs m + 1 = {} variables, got {}",
                m + 1,
                f.nvars()
            )));
        }
        if g.iter().any(|gi| !gi.same_ring(&f)) {
            return Err(Error::RingMismatch);
        }
        if f.is_zero() {
            return Err(Error::InvalidProblem("hypersurface polynomial f is zero".into()));
        }
        Ok(ImmersionProblem { f, g })
    }

    pub fn m(&self) -> usize {
        self.g.len() / 2
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }

    pub fn g(&self) -> &[Polynomial] {
        &self.g
    }
}

/// The frame whose rows are the gradients of `f, g_1, .., g_2m`.
pub fn build_alpha(problem: &ImmersionProblem) -> Result<StiefelProblem> {
    let ring = problem.f.ring().clone();
    let rows = std::iter::once(&problem.f)
        .chain(&problem.g)
        .map(|p| (0..ring.nvars()).map(|v| p.partial_derivative(v)).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let matrix = PolyMatrix::from_rows(&ring, rows)?;
    StiefelProblem::new(matrix, HypersurfaceSpec::new(problem.f.clone())?)
}

#[derive(Clone, Debug)]
pub struct IntersectionReport {
    pub intersection_number: i64,
    pub lambda: LambdaReport,
}

pub fn intersection_number(problem: &ImmersionProblem, options: &PipelineOptions) -> Result<IntersectionReport> {
    let report = lambda(&build_alpha(problem)?, options)?;
    Ok(IntersectionReport {
        intersection_number: intersection_from_lambda(&report),
        lambda: report,
    })
}

/// `I(g)` from the Λ report of the Jacobian frame.
pub fn intersection_from_lambda(report: &LambdaReport) -> i64 {
    report.lambda
}
