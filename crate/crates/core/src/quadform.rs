//! Trace quadratic forms on a quotient algebra and their exact inertia.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::groebner::QuotientAlgebra;
use crate::poly::{Polynomial, RationalMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricForm {
    matrix: RationalMatrix,
    label: String,
}

impl SymmetricForm {
    pub fn new(matrix: RationalMatrix, label: impl Into<String>) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::Shape("quadratic form matrix is not symmetric".into()));
        }
        Ok(SymmetricForm {
            matrix,
            label: label.into(),
        })
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn inertia(&self) -> Inertia {
        inertia_of_matrix(&self.matrix)
    }

    pub fn signature(&self) -> i64 {
        self.inertia().signature()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.matrix.determinant().is_zero()
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Inertia {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

impl Inertia {
    pub fn new(positives: usize, negatives: usize, zeros: usize) -> Self {
        Inertia {
            positives,
            negatives,
            zeros,
        }
    }

    pub fn signature(&self) -> i64 {
        self.positives as i64 - self.negatives as i64
    }

    pub fn rank(&self) -> usize {
        self.positives + self.negatives
    }

    pub fn dim(&self) -> usize {
        self.positives + self.negatives + self.zeros
    }
}

/// The form `a -> T(h * a^2)`; entry `(i, j)` is `T(h * b_i * b_j)`.
pub fn trace_form(h: &Polynomial, algebra: &QuotientAlgebra, label: &str) -> Result<SymmetricForm> {
    let d = algebra.dim();
    let mh = algebra.matrix_of_coords(&algebra.coords(h)?);
    // w_k = T(h * b_k)
    let w = mh.vec_mul(algebra.basis_traces());
    let mut m = RationalMatrix::zeros(d);
    for i in 0..d {
        let row = algebra.basis_matrix(i).vec_mul(&w);
        for (j, v) in row.into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    SymmetricForm::new(m, label)
}

pub fn inertia(form: &SymmetricForm) -> Inertia {
    form.inertia()
}

pub fn is_nondegenerate(form: &SymmetricForm) -> bool {
    form.is_nondegenerate()
}

/// Inertia by symmetric Gaussian congruence. A nonzero diagonal entry is
/// eliminated as a 1x1 pivot; when the remaining diagonal is all zero, a
/// nonzero off-diagonal pair forms a hyperbolic 2x2 block worth (+1, -1).
///
/// The input must be symmetric.
pub fn inertia_of_matrix(m: &RationalMatrix) -> Inertia {
    debug_assert!(m.is_symmetric());
    let mut a = m.to_rows();
    let mut active: Vec<usize> = (0..m.dim()).collect();
    let mut out = Inertia::default();
    while !active.is_empty() {
        let pivot = active
            .iter()
            .copied()
            .filter(|&p| !a[p][p].is_zero())
            .min_by_key(|&p| a[p][p].numer().bits() + a[p][p].denom().bits());
        if let Some(p) = pivot {
            let d = a[p][p].clone();
            if d.is_positive() {
                out.positives += 1;
            } else {
                out.negatives += 1;
            }
            active.retain(|&r| r != p);
            for &r in &active {
                if a[r][p].is_zero() {
                    continue;
                }
                let factor = &a[r][p] / &d;
                for &s in &active {
                    if !a[p][s].is_zero() {
                        let delta = &factor * &a[p][s];
                        a[r][s] -= delta;
                    }
                }
            }
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(ii, &i)| {
            active[ii + 1..]
                .iter()
                .find(|&&j| !a[i][j].is_zero())
                .map(|&j| (i, j))
        });
        match pair {
            Some((i, j)) => {
                let b = a[i][j].clone();
                out.positives += 1;
                out.negatives += 1;
                active.retain(|&r| r != i && r != j);
                for &r in &active {
                    for &s in &active {
                        let t = &a[r][i] * &a[s][j] + &a[r][j] * &a[s][i];
                        if !t.is_zero() {
                            a[r][s] -= t / &b;
                        }
                    }
                }
            }
            None => {
                out.zeros += active.len();
                active.clear();
            }
        }
    }
    out
}

/// Signature of `T(1 * a^2)`: the number of distinct real points of the variety.
pub fn real_point_count(algebra: &QuotientAlgebra) -> Result<i64> {
    let one = Polynomial::one(algebra.gb().ring());
    Ok(trace_form(&one, algebra, "theta_one")?.signature())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::buchberger;
    use crate::parse::{parse_poly, parse_rational};
    use crate::poly::{MonomialOrder, Ring};

    fn mat(rows: &[&[&str]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn example_algebra() -> (std::sync::Arc<Ring>, QuotientAlgebra) {
        let r = Ring::new(["x", "y", "z"]).unwrap();
        let gens: Vec<_> = ["2*y - z", "2*x - 2*z - 1", "z^2 + z"]
            .iter()
            .map(|s| parse_poly(s, &r).unwrap())
            .collect();
        let a = QuotientAlgebra::new(buchberger(&gens, MonomialOrder::DegRevLex).unwrap()).unwrap();
        (r, a)
    }

    #[test]
    fn example_trace_forms() {
        let (r, a) = example_algebra();
        let delta = parse_poly("-24 - 75/2*z", &r).unwrap();
        let t = trace_form(&delta, &a, "theta_delta").unwrap();
        assert_eq!(t.matrix(), &mat(&[&["-21/2", "-27/2"], &["-27/2", "27/2"]]));
        let one = trace_form(&Polynomial::one(&r), &a, "theta_one").unwrap();
        assert_eq!(one.matrix(), &mat(&[&["2", "-1"], &["-1", "1"]]));
        assert_eq!(real_point_count(&a).unwrap(), 2);
    }

    #[test]
    fn example_inertias() {
        let a = mat(&[&["-21/2", "-27/2"], &["-27/2", "27/2"]]);
        assert_eq!(inertia_of_matrix(&a), Inertia::new(1, 1, 0));
        let b = mat(&[&["-99/4", "27/4"], &["27/4", "-27/4"]]);
        let ib = inertia_of_matrix(&b);
        assert_eq!(ib, Inertia::new(0, 2, 0));
        assert_eq!(ib.signature(), -2);
        assert!(SymmetricForm::new(a, "a").unwrap().is_nondegenerate());
        assert!(SymmetricForm::new(b, "b").unwrap().is_nondegenerate());
    }

    #[test]
    fn degenerate_forms() {
        let z = RationalMatrix::zeros(3);
        assert_eq!(inertia_of_matrix(&z), Inertia::new(0, 0, 3));
        assert!(!SymmetricForm::new(z, "z").unwrap().is_nondegenerate());
        let d = mat(&[&["1", "0"], &["0", "0"]]);
        assert_eq!(inertia_of_matrix(&d), Inertia::new(1, 0, 1));
        assert!(!SymmetricForm::new(d, "d").unwrap().is_nondegenerate());
        let empty = RationalMatrix::zeros(0);
        assert_eq!(inertia_of_matrix(&empty), Inertia::default());
        assert!(SymmetricForm::new(empty, "e").unwrap().is_nondegenerate());
    }

    #[test]
    fn hyperbolic_blocks() {
        let h = mat(&[&["0", "3"], &["3", "0"]]);
        assert_eq!(inertia_of_matrix(&h), Inertia::new(1, 1, 0));
        // all-zero diagonal with coupling to a third coordinate
        let m = mat(&[&["0", "1", "2"], &["1", "0", "1"], &["2", "1", "0"]]);
        // eigenvalues of this matrix: one positive, two negative
        assert_eq!(inertia_of_matrix(&m), Inertia::new(1, 2, 0));
        let m4 = mat(&[
            &["0", "1", "0", "0"],
            &["1", "0", "0", "0"],
            &["0", "0", "0", "0"],
            &["0", "0", "0", "5"],
        ]);
        assert_eq!(inertia_of_matrix(&m4), Inertia::new(2, 1, 1));
    }

    #[test]
    fn asymmetric_rejected() {
        assert!(SymmetricForm::new(mat(&[&["1", "2"], &["3", "4"]]), "x").is_err());
    }
}
