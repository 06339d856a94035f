//! Floating-point cross-check of the exact pipeline.
//!
//! Real points of `V(I)` come from the eigenvectors of the transposed
//! multiplication matrix of a random linear form: for a point `p`, the vector
//! `(b_1(p), .., b_d(p))` of basis monomials evaluated at `p` is a common
//! eigenvector of every `M_{x_i}^T` with eigenvalue `x_i(p)`. Candidates are
//! polished by Gauss-Newton on the Gröbner basis and filtered by residual.
//! Λ is then recomputed as `(-1)^(k-1) * Σ_{f(p) > 0} sgn δ(p)`.
//!
//! The exact signature path is authoritative; this module only confirms it.

use nalgebra::{DMatrix, DVector, Schur, SVD};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::groebner::QuotientAlgebra;
use crate::poly::{rational_to_f64, Polynomial, Rational, RationalMatrix};
use crate::quadform::real_point_count;
use crate::stiefel::{
    delta_polynomials, jacobian_delta, verify_hypotheses, PipelineOptions, StiefelProblem,
    VerifiedProblem,
};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MERGE_TOL: f64 = 1e-6;

const NEWTON_STEPS: usize = 12;

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    /// Residual threshold for accepting a point, and the sign-safety margin.
    pub tol: f64,
    /// Points closer than this (max-norm) are merged.
    pub merge_tol: f64,
    pub seed: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            tol: DEFAULT_TOL,
            merge_tol: DEFAULT_MERGE_TOL,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealPoint {
    pub coordinates: Vec<f64>,
    /// Largest scaled generator value `|g(p)| / max(1, Σ|c_t| |t(p)|)`.
    pub residual: f64,
    pub cluster_tolerance: f64,
}

fn to_dmatrix(m: &RationalMatrix) -> DMatrix<f64> {
    let d = m.dim();
    DMatrix::from_fn(d, d, |i, j| rational_to_f64(m.get(i, j)))
}

fn scaled_residual(gens: &[Polynomial], point: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in gens {
        let v = g.evaluate_f64(point)?.abs() / g.magnitude_f64(point).max(1.0);
        worst = worst.max(v);
    }
    Ok(worst)
}

fn gauss_newton(gens: &[Polynomial], grads: &[Vec<Polynomial>], point: &mut [f64]) -> Result<()> {
    let s = point.len();
    let mut best = scaled_residual(gens, point)?;
    for _ in 0..NEWTON_STEPS {
        if best == 0.0 {
            break;
        }
        let jac = DMatrix::from_fn(gens.len(), s, |i, j| {
            grads[i][j].evaluate_f64(point).unwrap_or(f64::NAN)
        });
        let rhs = DVector::from_iterator(
            gens.len(),
            gens.iter().map(|g| -g.evaluate_f64(point).unwrap_or(f64::NAN)),
        );
        let Ok(step) = SVD::new(jac, true, true).solve(&rhs, 1e-14) else {
            break;
        };
        let trial: Vec<f64> = point.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
        if trial.iter().any(|v| !v.is_finite()) {
            break;
        }
        let r = scaled_residual(gens, &trial)?;
        if r < best {
            best = r;
            point.copy_from_slice(&trial);
        } else {
            break;
        }
    }
    Ok(())
}

/// Real points of the variety of the algebra's ideal.
pub fn solve_real_points(algebra: &QuotientAlgebra, options: &OracleOptions) -> Result<Vec<RealPoint>> {
    let d = algebra.dim();
    if d == 0 {
        return Ok(Vec::new());
    }
    let ring = algebra.gb().ring().clone();
    let s = ring.nvars();
    let gens = algebra.gb().generators().to_vec();
    let grads = gens
        .iter()
        .map(|g| (0..s).map(|v| g.partial_derivative(v)).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut combo = RationalMatrix::zeros(d);
    for m in algebra.var_matrices() {
        let c = Rational::new(rng.gen_range(1..=97).into(), 31.into());
        combo.add_scaled(&c, m);
    }
    let lt = to_dmatrix(&combo).transpose();
    let schur = Schur::try_new(lt.clone(), 1e-14, 10_000)
        .ok_or_else(|| Error::EigenSolver("Schur decomposition did not converge".into()))?;
    let eigenvalues = schur.complex_eigenvalues();

    // x_i(p) = <coords of x_i, eval vector> because b_0 = 1
    let var_coords: Vec<Vec<f64>> = (0..s)
        .map(|v| {
            algebra
                .coords(&Polynomial::var(&ring, v)?)
                .map(|c| c.iter().map(rational_to_f64).collect())
        })
        .collect::<Result<_>>()?;

    let scale = lt.amax().max(1.0);
    let mut points: Vec<RealPoint> = Vec::new();
    for ev in eigenvalues.iter() {
        if ev.im.abs() > 1e-6 * scale {
            continue;
        }
        let shifted = &lt - DMatrix::identity(d, d) * ev.re;
        let svd = SVD::new(shifted, false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::EigenSolver("SVD did not produce right singular vectors".into()))?;
        let (idx, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .ok_or_else(|| Error::EigenSolver("empty spectrum".into()))?;
        let v: Vec<f64> = v_t.row(idx).iter().copied().collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if v[0].abs() < 1e-12 * norm {
            continue;
        }
        let v: Vec<f64> = v.iter().map(|x| x / v[0]).collect();
        let mut coords: Vec<f64> = var_coords
            .iter()
            .map(|c| c.iter().zip(&v).map(|(a, b)| a * b).sum())
            .collect();
        if coords.iter().any(|x| !x.is_finite()) {
            continue;
        }
        gauss_newton(&gens, &grads, &mut coords)?;
        let residual = scaled_residual(&gens, &coords)?;
        if residual > options.tol {
            continue;
        }
        let duplicate = points.iter().position(|p| {
            p.coordinates
                .iter()
                .zip(&coords)
                .all(|(a, b)| (a - b).abs() <= options.merge_tol)
        });
        match duplicate {
            Some(i) if points[i].residual <= residual => {}
            Some(i) => {
                points[i].coordinates = coords;
                points[i].residual = residual;
            }
            None => points.push(RealPoint {
                coordinates: coords,
                residual,
                cluster_tolerance: options.merge_tol,
            }),
        }
    }
    points.sort_by(|a, b| {
        a.coordinates
            .iter()
            .zip(&b.coordinates)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(points)
}

/// Number of distinct real points, as the signature of the trace form of 1.
pub fn count_real_points(algebra: &QuotientAlgebra) -> Result<i64> {
    real_point_count(algebra)
}

/// A located point with the numeric values that decide its contribution.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedPoint {
    pub point: RealPoint,
    pub delta: f64,
    pub f: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleLambda {
    pub lambda: i64,
    pub points: Vec<SignedPoint>,
    pub counted: i64,
}

/// Λ recomputed from signs of `δ` and `f` at numerically located points.
pub fn lambda_by_points(
    problem: &StiefelProblem,
    options: &OracleOptions,
    pipeline: &PipelineOptions,
) -> Result<OracleLambda> {
    lambda_by_points_verified(&verify_hypotheses(problem, pipeline)?, options)
}

/// As [`lambda_by_points`], reusing an already verified problem.
pub fn lambda_by_points_verified(verified: &VerifiedProblem, options: &OracleOptions) -> Result<OracleLambda> {
    let frame = &verified.problem;
    let delta = jacobian_delta(&delta_polynomials(frame.matrix())?)?;
    let points = solve_real_points(&verified.algebra, options)?;
    let counted = count_real_points(&verified.algebra)?;
    if points.len().to_i64() != Some(counted) {
        return Err(Error::PointCountMismatch {
            located: points.len(),
            counted,
        });
    }
    let mut sum = 0i64;
    let mut signed = Vec::with_capacity(points.len());
    for p in points {
        let x = &p.coordinates;
        let dv = delta.evaluate_f64(x)?;
        if dv.abs() <= options.tol * delta.magnitude_f64(x).max(1.0) {
            return Err(Error::SignTooCloseToZero {
                what: "delta",
                value: dv,
            });
        }
        let fv = frame.f().evaluate_f64(x)?;
        if fv.abs() <= options.tol * frame.f().magnitude_f64(x).max(1.0) {
            return Err(Error::SignTooCloseToZero { what: "f", value: fv });
        }
        if fv > 0.0 {
            sum += if dv > 0.0 { 1 } else { -1 };
        }
        signed.push(SignedPoint {
            point: p,
            delta: dv,
            f: fv,
        });
    }
    Ok(OracleLambda {
        lambda: frame.sign_factor() * sum,
        points: signed,
        counted,
    })
}
