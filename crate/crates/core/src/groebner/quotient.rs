use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};

use super::basis::GroebnerBasis;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational, RationalMatrix};

/// The finite-dimensional algebra `Q[x]/I` on its standard-monomial basis.
///
/// Matrices act on coordinate column vectors: column `j` of the matrix of
/// multiplication by `h` holds the coordinates of `h * b_j`.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    gb: GroebnerBasis,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    var_matrices: Vec<RationalMatrix>,
    basis_matrices: Vec<RationalMatrix>,
    traces: Vec<Rational>,
}

impl QuotientAlgebra {
    pub fn new(gb: GroebnerBasis) -> Result<Self> {
        if !gb.is_zero_dimensional() {
            return Err(Error::NotZeroDimensional);
        }
        let nvars = gb.ring().nvars();
        let order = gb.order();

        let mut basis = Vec::new();
        if !gb.is_unit() {
            let mut seen = std::collections::HashSet::new();
            let mut queue = VecDeque::from([Monomial::one(nvars)]);
            seen.insert(Monomial::one(nvars));
            while let Some(m) = queue.pop_front() {
                for v in 0..nvars {
                    let next = m.mul(&Monomial::var(nvars, v));
                    if gb.is_standard(&next) && seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
                basis.push(m);
            }
            basis.sort_by(|a, b| order.cmp(a, b));
        }
        let index: HashMap<Monomial, usize> = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let d = basis.len();

        let mut var_matrices = Vec::with_capacity(nvars);
        for v in 0..nvars {
            let x = Monomial::var(nvars, v);
            let mut mat = RationalMatrix::zeros(d);
            for (j, b) in basis.iter().enumerate() {
                let prod = b.mul(&x);
                if let Some(&i) = index.get(&prod) {
                    mat.set(i, j, Rational::one());
                    continue;
                }
                let nf = gb.normal_form(&Polynomial::monomial(gb.ring(), prod, Rational::one()))?;
                for (m, c) in nf.terms() {
                    mat.set(index[m], j, c.clone());
                }
            }
            var_matrices.push(mat);
        }

        // basis is sorted ascending, so each b_k's parent b_k / x_v comes first
        let mut basis_matrices: Vec<RationalMatrix> = Vec::with_capacity(d);
        for b in &basis {
            if b.is_one() {
                basis_matrices.push(RationalMatrix::identity(d));
                continue;
            }
            let v = b
                .exponents()
                .iter()
                .position(|&e| e > 0)
                .expect("non-constant monomial");
            let parent = b.div(&Monomial::var(nvars, v)).expect("divisible");
            let p = index[&parent];
            let m = var_matrices[v].mul(&basis_matrices[p]);
            basis_matrices.push(m);
        }
        let traces = basis_matrices.iter().map(RationalMatrix::trace).collect();

        Ok(QuotientAlgebra {
            gb,
            basis,
            index,
            var_matrices,
            basis_matrices,
            traces,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    /// Standard monomials in ascending order; `1` comes first when `dim > 0`.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_polynomials(&self) -> Vec<Polynomial> {
        self.basis
            .iter()
            .map(|m| Polynomial::monomial(self.gb.ring(), m.clone(), Rational::one()))
            .collect()
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Matrix of multiplication by the variable `x_var`.
    pub fn var_matrix(&self, var: usize) -> &RationalMatrix {
        &self.var_matrices[var]
    }

    pub fn var_matrices(&self) -> &[RationalMatrix] {
        &self.var_matrices
    }

    /// Matrix of multiplication by the `k`-th basis monomial.
    pub fn basis_matrix(&self, k: usize) -> &RationalMatrix {
        &self.basis_matrices[k]
    }

    /// `T(b_k)` for each basis monomial.
    pub fn basis_traces(&self) -> &[Rational] {
        &self.traces
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        self.gb.normal_form(p)
    }

    pub fn coords(&self, p: &Polynomial) -> Result<Vec<Rational>> {
        let nf = self.gb.normal_form(p)?;
        let mut c = vec![Rational::zero(); self.dim()];
        for (m, a) in nf.terms() {
            let i = self
                .basis_index(m)
                .ok_or_else(|| Error::Internal("normal form left a non-standard monomial".into()))?;
            c[i] = a.clone();
        }
        Ok(c)
    }

    pub fn from_coords(&self, coords: &[Rational]) -> Polynomial {
        Polynomial::from_terms(
            self.gb.ring(),
            self.basis.iter().cloned().zip(coords.iter().cloned()),
        )
    }

    /// `T(h)`, the trace of multiplication by `h`, via linearity of `T`.
    pub fn trace_of(&self, h: &Polynomial) -> Result<Rational> {
        let c = self.coords(h)?;
        Ok(c.iter()
            .zip(&self.traces)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, t)| a * t)
            .sum())
    }

    /// Matrix of multiplication by `h`, column by column from normal forms of `h * b_j`.
    pub fn multiplication_matrix(&self, h: &Polynomial) -> Result<RationalMatrix> {
        let d = self.dim();
        let mut mat = RationalMatrix::zeros(d);
        for (j, b) in self.basis.iter().enumerate() {
            let col = self.coords(&h.mul_term(b, &Rational::one()))?;
            for (i, c) in col.into_iter().enumerate() {
                mat.set(i, j, c);
            }
        }
        Ok(mat)
    }

    /// Matrix of multiplication by the element with the given coordinates.
    pub fn matrix_of_coords(&self, coords: &[Rational]) -> RationalMatrix {
        let mut mat = RationalMatrix::zeros(self.dim());
        for (c, m) in coords.iter().zip(&self.basis_matrices) {
            mat.add_scaled(c, m);
        }
        mat
    }
}
