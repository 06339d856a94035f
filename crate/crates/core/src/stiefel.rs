//! From a polynomial frame `A(x)` (n rows, k columns, n - k + 1 variables) and
//! a hypersurface `f = 0` to the integer invariant Λ of the frame restricted
//! to the hypersurface.
//!
//! The pipeline: ideal `I` of k x k minors, its quotient algebra, the pivot
//! minor `m` (rows 1..k-1, columns 2..k) which must be a unit modulo `I`,
//! the bordered determinants `Δ_k..Δ_n`, their Jacobian determinant `δ`, and
//! the signatures of the trace forms of `δ` and `f·δ`:
//!
//! ```text
//! Λ = (-1)^(k-1) * (sig Θ_δ + sig Θ_{f·δ}) / 2
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, FormKind, Result};
use crate::groebner::{buchberger_with, BuchbergerOptions, GroebnerBasis, QuotientAlgebra};
use crate::poly::{Monomial, MonomialOrder, PolyMatrix, Polynomial, Rational};
use crate::quadform::{trace_form, Inertia, SymmetricForm};

pub const DEFAULT_RETRIES: usize = 8;

/// The hypersurface `M = f^{-1}(0)` bounding `D = {f >= 0}`.
///
/// Boundedness of `D` and regularity of `M` are not checked here; see
/// [`hypersurface_regularity`] for a partial diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct HypersurfaceSpec {
    f: Polynomial,
}

impl HypersurfaceSpec {
    pub fn new(f: Polynomial) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::InvalidProblem("hypersurface polynomial f is zero".into()));
        }
        Ok(HypersurfaceSpec { f })
    }

    pub fn f(&self) -> &Polynomial {
        &self.f
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StiefelProblem {
    matrix: PolyMatrix,
    hypersurface: HypersurfaceSpec,
}

impl StiefelProblem {
    pub fn new(matrix: PolyMatrix, hypersurface: HypersurfaceSpec) -> Result<Self> {
        let (n, k) = (matrix.rows(), matrix.cols());
        if k < 2 {
            return Err(Error::InvalidProblem(format!(
                "frame has {k} column(s); k >= 2 is required"
            )));
        }
        if n <= k {
            return Err(Error::InvalidProblem(format!(
                "frame is {n}x{k}; n - k > 0 is required"
            )));
        }
        if (n - k) % 2 != 0 {
            return Err(Error::InvalidProblem(format!(
                "frame is {n}x{k}; n - k must be even"
            )));
        }
        let nvars = matrix.ring().nvars();
        if nvars != n - k + 1 {
            return Err(Error::InvalidProblem(format!(
                "a {n}x{k} frame needs n - k + 1 = {} variables, got {nvars}",
                n - k + 1
            )));
        }
        if !hypersurface.f().same_ring(matrix.get(0, 0)) {
            return Err(Error::RingMismatch);
        }
        Ok(StiefelProblem {
            matrix,
            hypersurface,
        })
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn f(&self) -> &Polynomial {
        self.hypersurface.f()
    }

    pub fn hypersurface(&self) -> &HypersurfaceSpec {
        &self.hypersurface
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn k(&self) -> usize {
        self.matrix.cols()
    }

    /// `(-1)^(k-1)`
    pub fn sign_factor(&self) -> i64 {
        if self.k() % 2 == 1 {
            1
        } else {
            -1
        }
    }

    /// Same problem with the frame replaced by `Q * A`.
    pub fn transform_rows(&self, q: &[Vec<i64>]) -> Result<StiefelProblem> {
        StiefelProblem::new(self.matrix.left_mul_integer(q)?, self.hypersurface.clone())
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// All maximal minors, rows chosen in lexicographic order of index sets.
pub fn minors_ideal(matrix: &PolyMatrix) -> Result<Vec<Polynomial>> {
    let (n, k) = (matrix.rows(), matrix.cols());
    if n < k {
        return Err(Error::Shape(format!("{n}x{k} matrix has no maximal minors")));
    }
    let cols: Vec<usize> = (0..k).collect();
    combinations(n, k)
        .into_iter()
        .map(|rows| matrix.select(&rows, &cols).determinant())
        .collect()
}

/// All `size x size` minors.
pub fn minors_of_size(matrix: &PolyMatrix, size: usize) -> Result<Vec<Polynomial>> {
    let mut out = Vec::new();
    for rows in combinations(matrix.rows(), size) {
        for cols in combinations(matrix.cols(), size) {
            out.push(matrix.select(&rows, &cols).determinant()?);
        }
    }
    Ok(out)
}

/// The minor on rows `1..k-1` and columns `2..k`.
pub fn pivot_minor(matrix: &PolyMatrix) -> Result<Polynomial> {
    let k = matrix.cols();
    if k < 2 || matrix.rows() < k - 1 {
        return Err(Error::Shape("pivot minor needs k >= 2".into()));
    }
    let rows: Vec<usize> = (0..k - 1).collect();
    let cols: Vec<usize> = (1..k).collect();
    matrix.select(&rows, &cols).determinant()
}

/// `Δ_i` for `i = k..n`: the determinant of rows `1..k-1` together with row `i`.
pub fn delta_polynomials(matrix: &PolyMatrix) -> Result<Vec<Polynomial>> {
    let (n, k) = (matrix.rows(), matrix.cols());
    if k < 2 || n < k {
        return Err(Error::Shape(format!("{n}x{k} frame has no bordered minors")));
    }
    let cols: Vec<usize> = (0..k).collect();
    (k - 1..n)
        .map(|i| {
            let mut rows: Vec<usize> = (0..k - 1).collect();
            rows.push(i);
            matrix.select(&rows, &cols).determinant()
        })
        .collect()
}

/// Jacobian determinant `∂(Δ_k..Δ_n)/∂(x_1..x_s)`.
pub fn jacobian_delta(deltas: &[Polynomial]) -> Result<Polynomial> {
    let first = deltas
        .first()
        .ok_or_else(|| Error::Shape("empty list of polynomials".into()))?;
    let ring = first.ring().clone();
    if deltas.len() != ring.nvars() {
        return Err(Error::Shape(format!(
            "{} polynomials in {} variables; the Jacobian must be square",
            deltas.len(),
            ring.nvars()
        )));
    }
    let rows = deltas
        .iter()
        .map(|d| (0..ring.nvars()).map(|v| d.partial_derivative(v)).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    PolyMatrix::from_rows(&ring, rows)?.determinant()
}

#[derive(Clone, Copy, Debug)]
pub struct RetryPolicy {
    /// Number of random row transforms tried after the untransformed frame.
    pub retries: usize,
    pub seed: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            retries: DEFAULT_RETRIES,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineOptions {
    pub groebner: BuchbergerOptions,
    pub retry: RetryPolicy,
}

impl PipelineOptions {
    pub fn with_order(order: MonomialOrder) -> Self {
        PipelineOptions {
            groebner: BuchbergerOptions::with_order(order),
            ..Self::default()
        }
    }
}

/// Integer row transform with determinant +1 applied to the frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowTransform {
    /// 1-based index of the random attempt that succeeded.
    pub attempt: usize,
    pub seed: u64,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    pub zero_dimensional: bool,
    pub algebra_dim: usize,
    pub pivot_minor_invertible: bool,
    /// Determinant of multiplication by the pivot minor on the algebra.
    pub pivot_minor_norm: Rational,
    pub theta_delta_nondegenerate: Option<bool>,
    pub theta_f_delta_nondegenerate: Option<bool>,
    pub randomization_applied: Option<RowTransform>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.zero_dimensional
            && self.pivot_minor_invertible
            && self.theta_delta_nondegenerate != Some(false)
            && self.theta_f_delta_nondegenerate != Some(false)
    }
}

/// A problem whose algebraic hypotheses hold, with the objects built while checking them.
#[derive(Clone, Debug)]
pub struct VerifiedProblem {
    pub report: HypothesisReport,
    /// The frame actually used (after any row transform).
    pub problem: StiefelProblem,
    pub algebra: QuotientAlgebra,
    pub pivot_minor: Polynomial,
}

impl VerifiedProblem {
    pub fn gb(&self) -> &GroebnerBasis {
        self.algebra.gb()
    }
}

/// Random unit lower times unit upper triangular integer matrix, entries in [-3, 3].
pub fn random_unimodular(n: usize, rng: &mut impl Rng) -> Vec<Vec<i64>> {
    let mut lower = vec![vec![0i64; n]; n];
    let mut upper = vec![vec![0i64; n]; n];
    for i in 0..n {
        lower[i][i] = 1;
        upper[i][i] = 1;
        for c in &mut lower[i][..i] {
            *c = rng.gen_range(-3..=3);
        }
        for c in &mut upper[i][i + 1..] {
            *c = rng.gen_range(-3..=3);
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|l| lower[i][l] * upper[l][j]).sum())
                .collect()
        })
        .collect()
}

/// Builds the minors ideal and its algebra and checks that the pivot minor is
/// a unit modulo `I`. If it is not, retries with random determinant-one row
/// transforms of the frame; these leave `I` and Λ unchanged.
pub fn verify_hypotheses(problem: &StiefelProblem, options: &PipelineOptions) -> Result<VerifiedProblem> {
    let minors = minors_ideal(problem.matrix())?;
    let gb = match buchberger_with(&minors, options.groebner) {
        Ok(gb) => gb,
        Err(Error::ZeroIdeal) => return Err(Error::NotZeroDimensional),
        Err(e) => return Err(e),
    };
    let algebra = QuotientAlgebra::new(gb)?;

    let mut rng = ChaCha8Rng::seed_from_u64(options.retry.seed);
    let mut candidate = problem.clone();
    let mut transform = None;
    for attempt in 0..=options.retry.retries {
        if attempt > 0 {
            let q = random_unimodular(problem.n(), &mut rng);
            candidate = problem.transform_rows(&q)?;
            transform = Some(RowTransform {
                attempt,
                seed: options.retry.seed,
                matrix: q,
            });
        }
        let m = pivot_minor(candidate.matrix())?;
        let norm = algebra.matrix_of_coords(&algebra.coords(&m)?).determinant();
        if !num_traits::Zero::is_zero(&norm) {
            let report = HypothesisReport {
                zero_dimensional: true,
                algebra_dim: algebra.dim(),
                pivot_minor_invertible: true,
                pivot_minor_norm: norm,
                theta_delta_nondegenerate: None,
                theta_f_delta_nondegenerate: None,
                randomization_applied: transform,
            };
            return Ok(VerifiedProblem {
                report,
                problem: candidate,
                algebra,
                pivot_minor: m,
            });
        }
    }
    Err(Error::PivotMinorDegenerate {
        attempts: options.retry.retries + 1,
    })
}

/// The two trace forms of a verified problem.
#[derive(Clone, Debug)]
pub struct TraceForms {
    pub delta: Polynomial,
    pub delta_residue: Polynomial,
    pub f_delta_residue: Polynomial,
    pub theta_delta: SymmetricForm,
    pub theta_f_delta: SymmetricForm,
}

pub fn trace_forms(verified: &VerifiedProblem) -> Result<TraceForms> {
    let algebra = &verified.algebra;
    let deltas = delta_polynomials(verified.problem.matrix())?;
    let delta = jacobian_delta(&deltas)?;
    let delta_residue = algebra.normal_form(&delta)?;
    let f_delta_residue = algebra.normal_form(&(verified.problem.f() * &delta_residue))?;
    let theta_delta = trace_form(&delta_residue, algebra, FormKind::ThetaDelta.label())?;
    let theta_f_delta = trace_form(&f_delta_residue, algebra, FormKind::ThetaFDelta.label())?;
    Ok(TraceForms {
        delta,
        delta_residue,
        f_delta_residue,
        theta_delta,
        theta_f_delta,
    })
}

/// Full hypothesis check including nondegeneracy of both forms, without
/// failing on a degenerate form.
pub fn check_hypotheses(problem: &StiefelProblem, options: &PipelineOptions) -> Result<HypothesisReport> {
    let verified = verify_hypotheses(problem, options)?;
    let forms = trace_forms(&verified)?;
    let mut report = verified.report;
    report.theta_delta_nondegenerate = Some(forms.theta_delta.is_nondegenerate());
    report.theta_f_delta_nondegenerate = Some(forms.theta_f_delta.is_nondegenerate());
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct LambdaReport {
    pub lambda: i64,
    pub signature_delta: i64,
    pub signature_f_delta: i64,
    pub inertia_delta: Inertia,
    pub inertia_f_delta: Inertia,
    pub algebra_dim: usize,
    pub n: usize,
    pub k: usize,
    /// `(-1)^(k-1)`
    pub sign_factor: i64,
    pub gb: GroebnerBasis,
    pub basis: Vec<Monomial>,
    pub basis_traces: Vec<Rational>,
    pub pivot_minor: Polynomial,
    pub delta_residue: Polynomial,
    pub f_delta_residue: Polynomial,
    pub theta_delta: SymmetricForm,
    pub theta_f_delta: SymmetricForm,
    pub hypotheses: HypothesisReport,
    /// The frame the computation ran on (after any row transform).
    pub problem: StiefelProblem,
    /// Nondegeneracy of both forms forces `V(I) ∩ M = ∅`.
    pub variety_misses_hypersurface: bool,
}

impl LambdaReport {
    /// The stored invariant matches the signature formula and the sum is even.
    pub fn is_consistent(&self) -> bool {
        let sum = self.signature_delta + self.signature_f_delta;
        sum % 2 == 0 && self.lambda == self.sign_factor * sum / 2
    }
}

pub fn lambda(problem: &StiefelProblem, options: &PipelineOptions) -> Result<LambdaReport> {
    lambda_from_verified(verify_hypotheses(problem, options)?)
}

pub fn lambda_from_verified(verified: VerifiedProblem) -> Result<LambdaReport> {
    let forms = trace_forms(&verified)?;
    let mut hypotheses = verified.report.clone();
    let nd_delta = forms.theta_delta.is_nondegenerate();
    let nd_f_delta = forms.theta_f_delta.is_nondegenerate();
    hypotheses.theta_delta_nondegenerate = Some(nd_delta);
    hypotheses.theta_f_delta_nondegenerate = Some(nd_f_delta);
    if !nd_delta {
        return Err(Error::DegenerateForm(FormKind::ThetaDelta));
    }
    if !nd_f_delta {
        return Err(Error::DegenerateForm(FormKind::ThetaFDelta));
    }
    let inertia_delta = forms.theta_delta.inertia();
    let inertia_f_delta = forms.theta_f_delta.inertia();
    let (sd, sfd) = (inertia_delta.signature(), inertia_f_delta.signature());
    let sum = sd + sfd;
    if sum % 2 != 0 {
        return Err(Error::Internal(format!(
            "signature sum {sum} is odd; the degree must be even"
        )));
    }
    let problem = verified.problem;
    let sign_factor = problem.sign_factor();
    let algebra = verified.algebra;
    Ok(LambdaReport {
        lambda: sign_factor * sum / 2,
        signature_delta: sd,
        signature_f_delta: sfd,
        inertia_delta,
        inertia_f_delta,
        algebra_dim: algebra.dim(),
        n: problem.n(),
        k: problem.k(),
        sign_factor,
        gb: algebra.gb().clone(),
        basis: algebra.basis().to_vec(),
        basis_traces: algebra.basis_traces().to_vec(),
        pivot_minor: verified.pivot_minor,
        delta_residue: forms.delta_residue,
        f_delta_residue: forms.f_delta_residue,
        theta_delta: forms.theta_delta,
        theta_f_delta: forms.theta_f_delta,
        hypotheses,
        problem,
        variety_misses_hypersurface: true,
    })
}

/// Outcome of an optional real-emptiness diagnostic on an auxiliary ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealPointDiagnostic {
    /// The auxiliary ideal is zero-dimensional with no real points.
    NoRealPoints,
    /// The auxiliary ideal has this many real points.
    RealPoints(i64),
    /// The auxiliary ideal is not zero-dimensional; nothing is concluded.
    Undetermined,
}

fn real_point_diagnostic(gens: Vec<Polynomial>, options: &PipelineOptions) -> Result<RealPointDiagnostic> {
    let gens: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Ok(RealPointDiagnostic::Undetermined);
    }
    let gb = buchberger_with(&gens, options.groebner)?;
    if !gb.is_zero_dimensional() {
        return Ok(RealPointDiagnostic::Undetermined);
    }
    let algebra = QuotientAlgebra::new(gb)?;
    match crate::quadform::real_point_count(&algebra)? {
        0 => Ok(RealPointDiagnostic::NoRealPoints),
        c => Ok(RealPointDiagnostic::RealPoints(c)),
    }
}

/// Real singular points of `M`: real zeros of `<f, ∂f/∂x_1, ..>`.
pub fn hypersurface_regularity(f: &Polynomial, options: &PipelineOptions) -> Result<RealPointDiagnostic> {
    let mut gens = vec![f.clone()];
    for v in 0..f.nvars() {
        gens.push(f.partial_derivative(v)?);
    }
    real_point_diagnostic(gens, options)
}

/// Real points where the frame drops rank by two or more: real zeros of
/// `I + I_1`, with `I_1` the ideal of (k-1) x (k-1) minors.
pub fn rank_drop_diagnostic(matrix: &PolyMatrix, options: &PipelineOptions) -> Result<RealPointDiagnostic> {
    let mut gens = minors_ideal(matrix)?;
    gens.extend(minors_of_size(matrix, matrix.cols() - 1)?);
    real_point_diagnostic(gens, options)
}
