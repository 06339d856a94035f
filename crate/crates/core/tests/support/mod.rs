#![allow(dead_code)]

use std::sync::Arc;

use framedeg::quadform::Inertia;
use framedeg::stiefel::{HypersurfaceSpec, StiefelProblem};
use framedeg::immersion::ImmersionProblem;
use framedeg::{parse_poly, PolyMatrix, Polynomial, Rational, RationalMatrix, Ring};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ring3() -> Arc<Ring> {
    Ring::new(["x", "y", "z"]).unwrap()
}

pub fn p(ring: &Arc<Ring>, s: &str) -> Polynomial {
    parse_poly(s, ring).unwrap()
}

pub fn frame(ring: &Arc<Ring>, rows: &[&[&str]]) -> PolyMatrix {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| p(ring, s)).collect())
        .collect();
    PolyMatrix::from_rows(ring, rows).unwrap()
}

pub const SMALL_FRAME: &[&[&str]] = &[
    &["2*z + 2", "y + 2"],
    &["2*y + 1", "2*y + 1"],
    &["2*x + 1", "y + 2"],
    &["z + 1", "2*y + 1"],
];

pub fn small_example() -> StiefelProblem {
    let r = ring3();
    let f = HypersurfaceSpec::new(p(&r, "1 - x^2 - y^2 - z^2")).unwrap();
    StiefelProblem::new(frame(&r, SMALL_FRAME), f).unwrap()
}

pub fn whitney_example() -> ImmersionProblem {
    let r = Ring::new(["x1", "x2", "x3"]).unwrap();
    ImmersionProblem::new(
        p(&r, "100 - x1^2 - x2^2 - x3^2"),
        vec![
            p(&r, "x3^3 + x2 - x1 - 3*x3"),
            p(&r, "x2^3 + 2*x1 - x2 + x3"),
            p(&r, "x1*x2 + 2*x1"),
            p(&r, "x1*x3 - x2"),
        ],
    )
    .unwrap()
}

/// Characteristic polynomial coefficients `c_0..c_n` (monic, `c_n = 1`) by Faddeev-LeVerrier.
pub fn charpoly(a: &RationalMatrix) -> Vec<Rational> {
    let n = a.dim();
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = q(1, 1);
    let mut m = RationalMatrix::zeros(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = a.mul(&m);
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        m = next;
        let t = a.mul(&m).trace();
        c[n - k] = -t / Rational::from_integer(BigInt::from(k as i64));
    }
    c
}

fn sign_changes(coeffs: &[Rational]) -> usize {
    let signs: Vec<bool> = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Inertia from Descartes' rule applied to the characteristic polynomial.
/// Exact for symmetric matrices, whose eigenvalues are all real.
pub fn descartes_inertia(a: &RationalMatrix) -> Inertia {
    let c = charpoly(a);
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    let reduced = &c[zeros..];
    let positives = sign_changes(reduced);
    let flipped: Vec<Rational> = reduced
        .iter()
        .enumerate()
        .map(|(i, x)| if i % 2 == 1 { -x.clone() } else { x.clone() })
        .collect();
    let negatives = sign_changes(&flipped);
    Inertia::new(positives, negatives, zeros)
}

pub fn random_rational(rng: &mut impl Rng) -> Rational {
    q(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

/// Random symmetric matrix; about a third are built with deficient rank.
pub fn random_symmetric(rng: &mut impl Rng, dim: usize) -> RationalMatrix {
    if dim > 1 && rng.gen_bool(0.35) {
        let r = rng.gen_range(0..dim);
        let b: Vec<Vec<Rational>> = (0..r)
            .map(|_| (0..dim).map(|_| random_rational(rng)).collect())
            .collect();
        let d: Vec<Rational> = (0..r).map(|_| random_rational(rng)).collect();
        let mut m = RationalMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut s = Rational::zero();
                for l in 0..r {
                    s += &b[l][i] * &d[l] * &b[l][j];
                }
                m.set(i, j, s);
            }
        }
        return m;
    }
    let mut m = RationalMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let v = if rng.gen_bool(0.2) { Rational::zero() } else { random_rational(rng) };
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

pub fn random_linear(rng: &mut impl Rng, ring: &Arc<Ring>) -> Polynomial {
    let mut out = Polynomial::from_int(ring, rng.gen_range(-2..=2));
    for v in 0..ring.nvars() {
        let c = rng.gen_range(-2..=2);
        if c != 0 {
            out = &out + &Polynomial::var(ring, v).unwrap().scale(&q(c, 1));
        }
    }
    out
}

/// `R^2 - |x - c|^2` with a small random centre and radius.
pub fn random_ball(rng: &mut impl Rng, ring: &Arc<Ring>) -> Polynomial {
    let r = rng.gen_range(1..=3);
    let mut f = Polynomial::from_int(ring, r * r);
    for v in 0..ring.nvars() {
        let c = Polynomial::constant(ring, q(rng.gen_range(-2..=2), 2));
        let d = &Polynomial::var(ring, v).unwrap() - &c;
        f = &f - &(&d * &d);
    }
    f
}

/// Random `n x k` frame of linear entries over `n - k + 1` variables with a ball as `f`.
pub fn random_problem(rng: &mut impl Rng, n: usize, k: usize) -> StiefelProblem {
    let names: Vec<String> = (0..n - k + 1).map(|i| format!("x{i}")).collect();
    let ring = Ring::new(names).unwrap();
    let rows = (0..n)
        .map(|_| (0..k).map(|_| random_linear(rng, &ring)).collect())
        .collect();
    let matrix = PolyMatrix::from_rows(&ring, rows).unwrap();
    let f = HypersurfaceSpec::new(random_ball(rng, &ring)).unwrap();
    StiefelProblem::new(matrix, f).unwrap()
}

/// Generators `prod_i (x_v - a_{v,i}) * (x_v^2 + c_v)` per variable, with
/// repeated roots, and the number of distinct real points of the ideal.
pub fn linear_product_ideal(rng: &mut impl Rng, ring: &Arc<Ring>) -> (Vec<Polynomial>, i64) {
    let mut gens = Vec::new();
    let mut count = 1i64;
    for v in 0..ring.nvars() {
        let x = Polynomial::var(ring, v).unwrap();
        let mut roots: Vec<i64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(-4..=4)).collect();
        let mut g = Polynomial::one(ring);
        for &a in &roots {
            g = &g * &(&x - &Polynomial::from_int(ring, a));
        }
        if rng.gen_bool(0.4) {
            let c = rng.gen_range(1..=3);
            g = &g * &(&(&x * &x) + &Polynomial::from_int(ring, c));
        }
        roots.sort();
        roots.dedup();
        count *= roots.len() as i64;
        gens.push(g);
    }
    // a triangular shear keeps the point count and makes the ideal less trivial
    if ring.nvars() > 1 && rng.gen_bool(0.5) {
        let x0 = Polynomial::var(ring, 0).unwrap();
        let x1 = Polynomial::var(ring, 1).unwrap();
        let shift = &x0.scale(&q(rng.gen_range(1..=2), 1));
        let sheared: Vec<Polynomial> = gens
            .iter()
            .map(|g| substitute_shift(g, 1, &x1, shift))
            .collect();
        gens = sheared;
    }
    (gens, count)
}

/// `g` with `x_var` replaced by `x_var - shift`.
fn substitute_shift(g: &Polynomial, var: usize, x: &Polynomial, shift: &Polynomial) -> Polynomial {
    let ring = g.ring();
    let image = x - shift;
    let mut out = Polynomial::zero(ring);
    for (m, c) in g.terms() {
        let mut term = Polynomial::constant(ring, c.clone());
        for (v, &e) in m.exponents().iter().enumerate() {
            let base = if v == var { image.clone() } else { Polynomial::var(ring, v).unwrap() };
            term = &term * &base.pow(e);
        }
        out = &out + &term;
    }
    out
}
