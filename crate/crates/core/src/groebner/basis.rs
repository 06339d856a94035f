use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Rational, Ring};

pub const DEFAULT_MAX_SPAIRS: usize = 200_000;

/// Polynomial with terms sorted descending under a runtime-chosen order.
#[derive(Clone, Debug)]
pub(crate) struct OrderedPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl OrderedPoly {
    fn from_poly(p: &Polynomial, order: MonomialOrder) -> Self {
        let mut terms = p.terms().to_vec();
        if order != MonomialOrder::DegRevLex {
            terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        }
        OrderedPoly { terms }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn make_monic(&mut self) {
        let lc = self.terms[0].1.clone();
        if !lc.is_one() {
            for (_, c) in &mut self.terms {
                *c /= &lc;
            }
        }
    }

    fn to_poly(&self, ring: &Arc<Ring>) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.iter().cloned())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Keyed {
    m: Monomial,
    order: MonomialOrder,
}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&self.m, &other.m)
    }
}

/// Full reduction of `terms` by monic `divisors`. When `quotients` is given,
/// the multiplier used for each divisor is accumulated into it.
fn reduce_terms(
    terms: &[(Monomial, Rational)],
    divisors: &[&OrderedPoly],
    order: MonomialOrder,
    mut quotients: Option<&mut Vec<HashMap<Monomial, Rational>>>,
) -> OrderedPoly {
    let mut work: BTreeMap<Keyed, Rational> = terms
        .iter()
        .map(|(m, c)| (Keyed { m: m.clone(), order }, c.clone()))
        .collect();
    let mut rem = Vec::new();
    while let Some((key, c)) = work.pop_last() {
        let hit = divisors
            .iter()
            .enumerate()
            .find_map(|(i, g)| key.m.div(g.lm()).map(|q| (i, g, q)));
        match hit {
            Some((i, g, q)) => {
                for (t, a) in &g.terms[1..] {
                    let k = Keyed {
                        m: t.mul(&q),
                        order,
                    };
                    let delta = &c * a;
                    match work.entry(k) {
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() -= delta;
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(-delta);
                        }
                    }
                }
                if let Some(qs) = quotients.as_deref_mut() {
                    let slot = qs[i].entry(q).or_insert_with(Rational::zero);
                    *slot += &c;
                }
            }
            None => rem.push((key.m, c)),
        }
    }
    OrderedPoly { terms: rem }
}

/// Reduced, monic Gröbner basis of a polynomial ideal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    ring: Arc<Ring>,
    polys: Vec<OrderedPoly>,
    generators: Vec<Polynomial>,
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.generators == other.generators
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BuchbergerOptions {
    pub order: MonomialOrder,
    /// Cap on S-polynomial reductions.
    pub max_spairs: usize,
}

impl Default for BuchbergerOptions {
    fn default() -> Self {
        BuchbergerOptions {
            order: MonomialOrder::DegRevLex,
            max_spairs: DEFAULT_MAX_SPAIRS,
        }
    }
}

impl BuchbergerOptions {
    pub fn with_order(order: MonomialOrder) -> Self {
        BuchbergerOptions {
            order,
            ..Self::default()
        }
    }
}

pub fn buchberger(generators: &[Polynomial], order: MonomialOrder) -> Result<GroebnerBasis> {
    buchberger_with(generators, BuchbergerOptions::with_order(order))
}

/// Buchberger's algorithm with the coprime and chain criteria, normal
/// selection strategy, followed by inter-reduction.
pub fn buchberger_with(generators: &[Polynomial], options: BuchbergerOptions) -> Result<GroebnerBasis> {
    let order = options.order;
    let ring = generators.first().ok_or(Error::ZeroIdeal)?.ring().clone();
    if generators.iter().any(|g| !g.same_ring(&generators[0])) {
        return Err(Error::RingMismatch);
    }
    let mut basis: Vec<OrderedPoly> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut steps = 0usize;

    let mut inputs: Vec<OrderedPoly> = generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| OrderedPoly::from_poly(g, order))
        .collect();
    if inputs.is_empty() {
        return Err(Error::ZeroIdeal);
    }
    inputs.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    for g in inputs {
        let divisors: Vec<&OrderedPoly> = basis.iter().collect();
        let mut h = reduce_terms(&g.terms, &divisors, order, None);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        if h.lm().is_one() {
            return Ok(GroebnerBasis::unit(&ring, order));
        }
        add_to_basis(&mut basis, &mut pending, h);
    }

    while let Some(pair) = select_pair(&basis, &pending, order) {
        pending.remove(&pair);
        let (i, j) = pair;
        let (fi, fj) = (&basis[i], &basis[j]);
        if fi.lm().is_coprime(fj.lm()) {
            continue;
        }
        let lcm = fi.lm().lcm(fj.lm());
        if chain_criterion(&basis, &pending, i, j, &lcm) {
            continue;
        }
        steps += 1;
        if steps > options.max_spairs {
            return Err(Error::StepLimitExceeded {
                limit: options.max_spairs,
            });
        }
        let s = spoly(fi, fj, &lcm, order);
        let divisors: Vec<&OrderedPoly> = basis.iter().collect();
        let mut h = reduce_terms(&s.terms, &divisors, order, None);
        if h.is_zero() {
            continue;
        }
        h.make_monic();
        if h.lm().is_one() {
            return Ok(GroebnerBasis::unit(&ring, order));
        }
        add_to_basis(&mut basis, &mut pending, h);
    }

    Ok(GroebnerBasis::from_polys(&ring, order, interreduce(basis, order)))
}

fn add_to_basis(basis: &mut Vec<OrderedPoly>, pending: &mut HashSet<(usize, usize)>, h: OrderedPoly) {
    let t = basis.len();
    basis.push(h);
    for i in 0..t {
        pending.insert((i, t));
    }
}

fn select_pair(
    basis: &[OrderedPoly],
    pending: &HashSet<(usize, usize)>,
    order: MonomialOrder,
) -> Option<(usize, usize)> {
    pending
        .iter()
        .map(|&(i, j)| (basis[i].lm().lcm(basis[j].lm()), (i, j)))
        .min_by(|a, b| order.cmp(&a.0, &b.0).then(a.1.cmp(&b.1)))
        .map(|(_, p)| p)
}

fn chain_criterion(
    basis: &[OrderedPoly],
    pending: &HashSet<(usize, usize)>,
    i: usize,
    j: usize,
    lcm: &Monomial,
) -> bool {
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    (0..basis.len()).any(|k| {
        k != i
            && k != j
            && basis[k].lm().divides(lcm)
            && !pending.contains(&key(i, k))
            && !pending.contains(&key(j, k))
    })
}

fn spoly(f: &OrderedPoly, g: &OrderedPoly, lcm: &Monomial, order: MonomialOrder) -> OrderedPoly {
    let qf = lcm.div(f.lm()).expect("lcm divisible");
    let qg = lcm.div(g.lm()).expect("lcm divisible");
    let mut acc: HashMap<Monomial, Rational> = HashMap::new();
    for (t, c) in &f.terms[1..] {
        *acc.entry(t.mul(&qf)).or_insert_with(Rational::zero) += c;
    }
    for (t, c) in &g.terms[1..] {
        *acc.entry(t.mul(&qg)).or_insert_with(Rational::zero) -= c;
    }
    let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
    OrderedPoly { terms }
}

fn interreduce(basis: Vec<OrderedPoly>, order: MonomialOrder) -> Vec<OrderedPoly> {
    // drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<OrderedPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lm().divides(g.lm()) && (h.lm() != g.lm() || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&OrderedPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g)
            .collect();
        let mut r = reduce_terms(&minimal[i].terms, &others, order, None);
        r.make_monic();
        reduced.push(r);
    }
    reduced.sort_by(|a, b| order.cmp(a.lm(), b.lm()));
    reduced
}

impl GroebnerBasis {
    fn unit(ring: &Arc<Ring>, order: MonomialOrder) -> Self {
        let one = OrderedPoly::from_poly(&Polynomial::one(ring), order);
        Self::from_polys(ring, order, vec![one])
    }

    fn from_polys(ring: &Arc<Ring>, order: MonomialOrder, polys: Vec<OrderedPoly>) -> Self {
        let generators = polys.iter().map(|p| p.to_poly(ring)).collect();
        GroebnerBasis {
            order,
            ring: ring.clone(),
            polys,
            generators,
        }
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Monic generators sorted by ascending leading monomial.
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.polys.iter().map(OrderedPoly::lm)
    }

    /// Leading monomial of `p` under this basis's order.
    pub fn leading_monomial(&self, p: &Polynomial) -> Option<Monomial> {
        p.terms()
            .iter()
            .map(|(m, _)| m)
            .max_by(|a, b| self.order.cmp(a, b))
            .cloned()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].lm().is_one()
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading_monomials().any(|lm| lm.divides(m))
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        if !p.same_ring(&self.generators[0]) {
            return Err(Error::RingMismatch);
        }
        let divisors: Vec<&OrderedPoly> = self.polys.iter().collect();
        let terms = OrderedPoly::from_poly(p, self.order).terms;
        Ok(reduce_terms(&terms, &divisors, self.order, None).to_poly(&self.ring))
    }

    /// Division with certificate: `p = sum(quotients[i] * generators[i]) + remainder`.
    pub fn divide(&self, p: &Polynomial) -> Result<(Vec<Polynomial>, Polynomial)> {
        if !p.same_ring(&self.generators[0]) {
            return Err(Error::RingMismatch);
        }
        let divisors: Vec<&OrderedPoly> = self.polys.iter().collect();
        let mut qs = vec![HashMap::new(); self.polys.len()];
        let terms = OrderedPoly::from_poly(p, self.order).terms;
        let rem = reduce_terms(&terms, &divisors, self.order, Some(&mut qs));
        let quotients = qs
            .into_iter()
            .map(|q| Polynomial::from_terms(&self.ring, q))
            .collect();
        Ok((quotients, rem.to_poly(&self.ring)))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// True iff every variable has a pure power among the leading monomials
    /// (or the ideal is the unit ideal).
    pub fn is_zero_dimensional(&self) -> bool {
        if self.is_unit() {
            return true;
        }
        let mut covered = vec![false; self.ring.nvars()];
        for lm in self.leading_monomials() {
            if let Some(v) = lm.pure_power_var() {
                covered[v] = true;
            }
        }
        covered.into_iter().all(|c| c)
    }

    /// Checks that every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let divisors: Vec<&OrderedPoly> = self.polys.iter().collect();
        for i in 0..self.polys.len() {
            for j in i + 1..self.polys.len() {
                let lcm = self.polys[i].lm().lcm(self.polys[j].lm());
                let s = spoly(&self.polys[i], &self.polys[j], &lcm, self.order);
                if !reduce_terms(&s.terms, &divisors, self.order, None).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Monic, and no term of any generator divisible by another generator's leading monomial.
    pub fn is_reduced(&self) -> bool {
        self.polys.iter().enumerate().all(|(i, g)| {
            g.terms[0].1.is_one()
                && self.polys.iter().enumerate().all(|(j, h)| {
                    i == j || g.terms.iter().all(|(t, _)| !h.lm().divides(t))
                })
        })
    }
}
