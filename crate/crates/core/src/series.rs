//! Truncated multivariate power series with exact rational coefficients.
//!
//! A [`TruncatedSeries`] of order `R` in `n` variables stores the Taylor
//! coefficients of total degree `<= R`; everything above is unknown and
//! discarded by every operation. The order is part of the value and binary
//! operations refuse to mix orders.
//!
//! A [`DiffeoJet`] is an `n`-tuple of series without constant term whose
//! linear part is invertible: the `R`-jet at the origin of a local
//! diffeomorphism fixing the origin.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rat::{self, Rat};

/// Exponent vector of a monomial `x_1^{e_1} ... x_n^{e_n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The exponent vector of the variable `x_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        MultiIndex(e)
    }

    /// Multi-index counting the occurrences of each variable in `slots`.
    pub fn from_slots(n: usize, slots: &[usize]) -> Self {
        let mut e = vec![0; n];
        for &s in slots {
            e[s] += 1;
        }
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `alpha!` = product of the factorials of the exponents.
    pub fn factorial(&self) -> Rat {
        self.0
            .iter()
            .fold(Rat::one(), |acc, &e| acc * rat::factorial(e as usize))
    }

    /// Sorted list of variables, each repeated by its exponent.
    pub fn to_slots(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize))
            .collect()
    }

    /// All multi-indices in `n` variables of total degree exactly `d`.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=d).rev() {
                prefix.push(e);
                rec(n, d - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if d == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Graded order: total degree first, then `x_1` before `x_2` within a degree.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial truncated at total degree `order`, with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    n: usize,
    order: usize,
    coeffs: BTreeMap<MultiIndex, Rat>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, v)| format!("{}*{:?}", rat::to_string(v), k))
            .collect();
        write!(f, "[{}] + O({})", terms.join(" + "), self.order + 1)
    }
}

impl TruncatedSeries {
    pub fn zero(n: usize, order: usize) -> Self {
        TruncatedSeries {
            n,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, order: usize, c: Rat) -> Self {
        let mut s = Self::zero(n, order);
        s.set(MultiIndex::zero(n), c);
        s
    }

    pub fn one(n: usize, order: usize) -> Self {
        Self::constant(n, order, Rat::one())
    }

    /// The coordinate function `x_i`.
    pub fn variable(n: usize, order: usize, i: usize) -> Self {
        let mut s = Self::zero(n, order);
        s.set(MultiIndex::unit(n, i), Rat::one());
        s
    }

    /// Builds a series from `(exponents, coefficient)` pairs; repeated indices
    /// accumulate, terms above `order` are dropped.
    pub fn from_terms<I>(n: usize, order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rat)>,
    {
        let mut s = Self::zero(n, order);
        for (idx, c) in terms {
            if idx.dim() != n {
                return Err(Error::DimensionMismatch(idx.dim(), n));
            }
            s.add_term(idx, c);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rat)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Rat {
        self.coeffs.get(idx).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&MultiIndex::zero(self.n))
    }

    /// Sets a coefficient; ignored above the truncation order.
    pub fn set(&mut self, idx: MultiIndex, c: Rat) {
        if idx.degree() as usize > self.order {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
    }

    pub fn add_term(&mut self, idx: MultiIndex, c: Rat) {
        if c.is_zero() || idx.degree() as usize > self.order {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), -v);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.order);
        }
        TruncatedSeries {
            n: self.n,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut acc: HashMap<MultiIndex, Rat> = HashMap::new();
        for (ka, va) in &self.coeffs {
            let da = ka.degree() as usize;
            for (kb, vb) in &other.coeffs {
                // both maps iterate in increasing degree
                if da + kb.degree() as usize > self.order {
                    break;
                }
                *acc.entry(ka.add(kb)).or_insert_with(Rat::zero) += va * vb;
            }
        }
        Ok(TruncatedSeries {
            n: self.n,
            order: self.order,
            coeffs: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        })
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, c: &Rat, other: &Self) -> Result<()> {
        self.check(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (k, v) in &other.coeffs {
            self.add_term(k.clone(), c * v);
        }
        Ok(())
    }

    /// Drops all terms above `order`. Raising the order is an error: the
    /// missing coefficients are unknown.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order {
            return Err(Error::InsufficientOrder {
                needed: order,
                have: self.order,
            });
        }
        Ok(TruncatedSeries {
            n: self.n,
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| k.degree() as usize <= order)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        })
    }

    /// Homogeneous component of total degree `d`, kept at the same order.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        TruncatedSeries {
            n: self.n,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| k.degree() as usize == d)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Partial derivative in `x_var`; the result has order `order - 1`.
    pub fn derivative(&self, var: usize) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::InsufficientOrder { needed: 1, have: 0 });
        }
        if var >= self.n {
            return Err(Error::DimensionMismatch(var, self.n));
        }
        let mut out = Self::zero(self.n, self.order - 1);
        for (k, v) in &self.coeffs {
            let e = k.0[var];
            if e == 0 {
                continue;
            }
            let mut idx = k.0.clone();
            idx[var] -= 1;
            out.add_term(MultiIndex(idx), v * rat::rat(e as i64));
        }
        Ok(out)
    }

    /// `self ∘ tau`, truncated at the order of `self`.
    pub fn compose(&self, tau: &DiffeoJet) -> Result<Self> {
        Ok(compose_many(std::slice::from_ref(self), tau)?.remove(0))
    }
}

/// Composes several series of equal order with the same jet, sharing the
/// table of monomials in the components of `tau`.
pub fn compose_many(fs: &[TruncatedSeries], tau: &DiffeoJet) -> Result<Vec<TruncatedSeries>> {
    let Some(first) = fs.first() else {
        return Ok(Vec::new());
    };
    let (n, order) = (first.n, first.order);
    for f in fs {
        if f.n != tau.n {
            return Err(Error::DimensionMismatch(f.n, tau.n));
        }
        if f.order != order {
            return Err(Error::OrderMismatch(f.order, order));
        }
    }
    if tau.order < order {
        return Err(Error::OrderMismatch(tau.order, order));
    }
    let comps = tau
        .components
        .iter()
        .map(|c| c.truncate(order))
        .collect::<Result<Vec<_>>>()?;
    let mut table = MonomialTable::new(n, order, &comps);
    fs.iter()
        .map(|f| {
            let mut out = TruncatedSeries::zero(n, order);
            for (k, v) in &f.coeffs {
                out.add_scaled(v, table.get(k))?;
            }
            Ok(out)
        })
        .collect()
}

/// Memoised products `tau_1^{a_1} ... tau_n^{a_n}`.
struct MonomialTable<'a> {
    comps: &'a [TruncatedSeries],
    cache: HashMap<MultiIndex, TruncatedSeries>,
}

impl<'a> MonomialTable<'a> {
    fn new(n: usize, order: usize, comps: &'a [TruncatedSeries]) -> Self {
        let mut cache = HashMap::new();
        cache.insert(MultiIndex::zero(n), TruncatedSeries::one(n, order));
        MonomialTable { comps, cache }
    }

    fn get(&mut self, idx: &MultiIndex) -> &TruncatedSeries {
        if !self.cache.contains_key(idx) {
            let i = idx.first_nonzero().expect("zero index is seeded");
            let mut parent = idx.clone();
            parent.0[i] -= 1;
            let comps = self.comps;
            let value = self
                .get(&parent)
                .mul(&comps[i])
                .expect("uniform dimension and order");
            self.cache.insert(idx.clone(), value);
        }
        &self.cache[idx]
    }
}

/// `R`-jet of a local diffeomorphism fixing the origin.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffeoJet {
    n: usize,
    order: usize,
    components: Vec<TruncatedSeries>,
    linear: Matrix,
}

impl DiffeoJet {
    /// Validates and wraps `n` component series of common order `>= 1`.
    pub fn new(components: Vec<TruncatedSeries>) -> Result<Self> {
        let n = components.len();
        let order = components.first().map_or(1, |c| c.order);
        if order == 0 {
            return Err(Error::InsufficientOrder { needed: 1, have: 0 });
        }
        for c in &components {
            if c.n != n {
                return Err(Error::DimensionMismatch(c.n, n));
            }
            if c.order != order {
                return Err(Error::OrderMismatch(c.order, order));
            }
            if !c.constant_term().is_zero() {
                return Err(Error::InvalidInput(
                    "diffeomorphism jet must fix the origin".into(),
                ));
            }
        }
        let mut linear = Matrix::zeros(n, n);
        for (k, c) in components.iter().enumerate() {
            for i in 0..n {
                linear[(k, i)] = c.coeff(&MultiIndex::unit(n, i));
            }
        }
        if linear.determinant()?.is_zero() {
            return Err(Error::SingularLinearPart);
        }
        Ok(DiffeoJet {
            n,
            order,
            components,
            linear,
        })
    }

    pub fn identity(n: usize, order: usize) -> Self {
        Self::linear(&Matrix::identity(n), order).expect("identity is invertible")
    }

    /// The linear map `x -> g x` as a jet of the given order.
    pub fn linear(g: &Matrix, order: usize) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::DimensionMismatch(g.rows(), g.cols()));
        }
        let n = g.rows();
        let components = (0..n)
            .map(|k| {
                TruncatedSeries::from_terms(
                    n,
                    order,
                    (0..n).map(|i| (MultiIndex::unit(n, i), g[(k, i)].clone())),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    pub fn linear_part(&self) -> &Matrix {
        &self.linear
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.order)
    }

    pub fn has_identity_linear_part(&self) -> bool {
        self.linear == Matrix::identity(self.n)
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InsufficientOrder { needed: 1, have: 0 });
        }
        Ok(DiffeoJet {
            n: self.n,
            order,
            components: self
                .components
                .iter()
                .map(|c| c.truncate(order))
                .collect::<Result<_>>()?,
            linear: self.linear.clone(),
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DiffeoJet) -> Result<DiffeoJet> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        let components = compose_many(&self.components, other)?;
        Ok(DiffeoJet {
            n: self.n,
            order: self.order,
            components,
            linear: self.linear.mul(&other.linear)?,
        })
    }

    /// Two-sided inverse up to the truncation order.
    ///
    /// Writing `tau = L x + N(x)` with `N` of degree `>= 2`, the fixed point
    /// `sigma = L^{-1}(y - N(sigma(y)))` gains one correct degree per pass.
    pub fn invert(&self) -> Result<DiffeoJet> {
        let linv = self.linear.inverse().ok_or(Error::SingularLinearPart)?;
        let (n, order) = (self.n, self.order);
        let nonlinear: Vec<TruncatedSeries> = self
            .components
            .iter()
            .map(|c| {
                let mut c = c.clone();
                for i in 0..n {
                    c.set(MultiIndex::unit(n, i), Rat::zero());
                }
                c
            })
            .collect();
        let y: Vec<TruncatedSeries> = (0..n)
            .map(|i| TruncatedSeries::variable(n, order, i))
            .collect();
        let apply_linv = |v: &[TruncatedSeries]| -> Result<Vec<TruncatedSeries>> {
            (0..n)
                .map(|k| {
                    let mut out = TruncatedSeries::zero(n, order);
                    for (c, vc) in v.iter().enumerate() {
                        out.add_scaled(&linv[(k, c)], vc)?;
                    }
                    Ok(out)
                })
                .collect()
        };
        let mut sigma = DiffeoJet::linear(&linv, order)?;
        for _ in 1..order {
            let n_of_sigma = compose_many(&nonlinear, &sigma)?;
            let rhs = y
                .iter()
                .zip(&n_of_sigma)
                .map(|(a, b)| a.sub(b))
                .collect::<Result<Vec<_>>>()?;
            sigma = DiffeoJet::new(apply_linv(&rhs)?)?;
        }
        Ok(sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, rat};

    fn x(n: usize, order: usize, i: usize) -> TruncatedSeries {
        TruncatedSeries::variable(n, order, i)
    }

    fn poly(n: usize, order: usize, terms: &[(&[u32], i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(
            n,
            order,
            terms
                .iter()
                .map(|(e, c)| (MultiIndex::new(e.to_vec()), rat(*c))),
        )
        .unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let one = TruncatedSeries::one(1, 2);
        let a = one.add(&x(1, 2, 0)).unwrap();
        let b = one.sub(&x(1, 2, 0)).unwrap();
        assert_eq!(a.mul(&b).unwrap(), poly(1, 2, &[(&[0], 1), (&[2], -1)]));
    }

    #[test]
    fn annihilator_and_truncation() {
        let a = poly(2, 3, &[(&[1, 0], 3), (&[0, 2], -2)]);
        assert!(a.mul(&TruncatedSeries::zero(2, 3)).unwrap().is_zero());
        let s = x(2, 2, 0).add(&x(2, 2, 1)).unwrap();
        let cube = s.mul(&s).unwrap().mul(&s).unwrap();
        assert!(cube.is_zero());
    }

    #[test]
    fn order_and_dimension_are_checked() {
        assert_eq!(
            x(2, 2, 0).add(&x(2, 3, 0)),
            Err(Error::OrderMismatch(2, 3))
        );
        assert_eq!(x(2, 2, 0).mul(&x(3, 2, 0)), Err(Error::DimensionMismatch(2, 3)));
        assert!(x(1, 0, 0).derivative(0).is_err());
    }

    #[test]
    fn graded_order() {
        let mut all: Vec<MultiIndex> = (0..=2).flat_map(|d| MultiIndex::all_of_degree(2, d)).collect();
        all.sort();
        let exps: Vec<Vec<u32>> = all.iter().map(|m| m.0.clone()).collect();
        assert_eq!(
            exps,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
    }

    #[test]
    fn compose_with_identity_and_shear() {
        let id = DiffeoJet::identity(2, 3);
        assert_eq!(x(2, 3, 0).compose(&id).unwrap(), x(2, 3, 0));
        // x1 -> x1 + x2
        let shear = DiffeoJet::new(vec![
            x(2, 3, 0).add(&x(2, 3, 1)).unwrap(),
            x(2, 3, 1),
        ])
        .unwrap();
        let sq = poly(2, 3, &[(&[2, 0], 1)]);
        assert_eq!(
            sq.compose(&shear).unwrap(),
            poly(2, 3, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)])
        );
    }

    #[test]
    fn invert_linear() {
        let g = Matrix::from_i64(&[&[2, 1], &[1, 1]]).unwrap();
        let inv = DiffeoJet::linear(&g, 3).unwrap().invert().unwrap();
        assert_eq!(inv, DiffeoJet::linear(&g.inverse().unwrap(), 3).unwrap());
    }

    #[test]
    fn invert_quadratic_one_variable() {
        // solving (x + x^2) ∘ s = x degree by degree gives s = x - x^2 + 2x^3
        let tau = DiffeoJet::new(vec![poly(1, 3, &[(&[1], 1), (&[2], 1)])]).unwrap();
        let s = tau.invert().unwrap();
        assert_eq!(
            s.components()[0],
            poly(1, 3, &[(&[1], 1), (&[2], -1), (&[3], 2)])
        );
    }

    #[test]
    fn singular_linear_part_is_rejected() {
        let comps = vec![x(2, 2, 0), x(2, 2, 0)];
        assert_eq!(DiffeoJet::new(comps), Err(Error::SingularLinearPart));
    }

    #[test]
    fn derivative_and_parts() {
        let f = TruncatedSeries::from_terms(
            2,
            3,
            vec![
                (MultiIndex::new(vec![2, 1]), frac(1, 2)),
                (MultiIndex::new(vec![1, 0]), rat(4)),
            ],
        )
        .unwrap();
        let d = f.derivative(0).unwrap();
        assert_eq!(d.order(), 2);
        assert_eq!(d.coeff(&MultiIndex::new(vec![1, 1])), rat(1));
        assert_eq!(d.constant_term(), rat(4));
        assert_eq!(f.homogeneous_part(3).len(), 1);
    }
}
