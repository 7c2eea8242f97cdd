//! Normal charts, the reduction map `π_r` to normal tensors, its section,
//! and equivalence of jets under diffeomorphisms with identity linear part.

use num_traits::Zero;

use crate::connections::{pullback, transform, ConnectionJet};
use crate::error::{Error, Result};
use crate::rat::{rat, Rat};
use crate::series::{DiffeoJet, MultiIndex, TruncatedSeries};
use crate::tensors::{
    gl_act_normal, normal_signature, total_symmetrization, DenseTensor, GlElement, NormalTensor,
};

/// `(Γ⁰, …, Γ^r)` with `Γ^m` in `C_m` (or its symmetric variant).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalTensorTuple {
    n: usize,
    symmetric: bool,
    tensors: Vec<NormalTensor>,
}

impl NormalTensorTuple {
    pub fn new(n: usize, symmetric: bool, tensors: Vec<NormalTensor>) -> Result<Self> {
        if tensors.is_empty() {
            return Err(Error::InvalidInput("a tuple needs at least Γ⁰".into()));
        }
        for (m, t) in tensors.iter().enumerate() {
            if t.n() != n {
                return Err(Error::DimensionMismatch(t.n(), n));
            }
            if t.order() != m {
                return Err(Error::OrderMismatch(t.order(), m));
            }
            if t.symmetric() != symmetric {
                return Err(Error::SymmetryViolation(format!(
                    "component {m} has the wrong symmetry flag"
                )));
            }
        }
        Ok(NormalTensorTuple {
            n,
            symmetric,
            tensors,
        })
    }

    pub fn zero(n: usize, r: usize, symmetric: bool) -> Self {
        NormalTensorTuple {
            n,
            symmetric,
            tensors: (0..=r).map(|m| NormalTensor::zero(n, m, symmetric)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.tensors.len() - 1
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn tensors(&self) -> &[NormalTensor] {
        &self.tensors
    }

    pub fn get(&self, m: usize) -> &NormalTensor {
        &self.tensors[m]
    }

    pub fn is_zero(&self) -> bool {
        self.tensors.iter().all(NormalTensor::is_zero)
    }

    pub fn gl_act(&self, g: &GlElement) -> Result<Self> {
        Ok(NormalTensorTuple {
            n: self.n,
            symmetric: self.symmetric,
            tensors: self
                .tensors
                .iter()
                .map(|t| gl_act_normal(g, t))
                .collect::<Result<_>>()?,
        })
    }
}

/// Order-`m` Taylor data of `Γ` as a `(1, m+2)` tensor:
/// `T^k_{ij a_1…a_m} = α!·coeff(Γ^k_{ij}, x^α)` with `α` counting the `a`'s.
pub fn taylor_tensor(j: &ConnectionJet, m: usize) -> DenseTensor {
    let n = j.n();
    DenseTensor::from_fn(n, normal_signature(m), |idx| {
        let alpha = MultiIndex::from_slots(n, &idx[3..]);
        j.gamma(idx[0], idx[1], idx[2]).coeff(&alpha) * alpha.factorial()
    })
}

/// For each `m ≤ r`, the symmetrization of the order-`m` Taylor data over all
/// `m+2` covariant slots. All vanish iff the chart is normal up to order `r`.
pub fn normality_defect(j: &ConnectionJet) -> Vec<DenseTensor> {
    (0..=j.order())
        .map(|m| total_symmetrization(&taylor_tensor(j, m)).expect("normal signature"))
        .collect()
}

pub fn is_normal(j: &ConnectionJet) -> bool {
    normality_defect(j).iter().all(DenseTensor::is_zero)
}

/// Brings `j` into a normal chart. Returns `τ` with identity linear part and
/// `transform(τ, j)`.
///
/// Works on the inverse chart map `σ = τ^{-1}`: adding a homogeneous term
/// `δ` of degree `m+2` to `σ` changes `Σ y_i y_j Γ̃^k_{ij}` in degree `m+2` by
/// `(m+1)(m+2)δ^k` and leaves lower degrees alone.
pub fn normalize(j: &ConnectionJet) -> Result<(DiffeoJet, ConnectionJet)> {
    let (n, r) = (j.n(), j.order());
    let order = r + 2;
    let mut comps: Vec<TruncatedSeries> = DiffeoJet::identity(n, order).components().to_vec();
    for m in 0..=r {
        let current = pullback(&DiffeoJet::new(comps.clone())?, j)?;
        let weight = rat(((m + 1) * (m + 2)) as i64);
        for (k, comp) in comps.iter_mut().enumerate() {
            for a in 0..n {
                for b in 0..n {
                    for (alpha, c) in current.gamma(k, a, b).terms() {
                        if alpha.degree() as usize == m {
                            let beta = alpha.add(&MultiIndex::unit(n, a)).add(&MultiIndex::unit(n, b));
                            comp.add_term(beta, -(c / &weight));
                        }
                    }
                }
            }
        }
    }
    let sigma = DiffeoJet::new(comps)?;
    let normal = pullback(&sigma, j)?;
    debug_assert!(is_normal(&normal));
    Ok((sigma.invert()?, normal))
}

/// `j^r ∇ ↦ (Γ⁰, …, Γ^r)`, the Taylor data in the normal chart.
pub fn pi_r(j: &ConnectionJet) -> Result<NormalTensorTuple> {
    let (_, normal) = normalize(j)?;
    let tensors = (0..=j.order())
        .map(|m| {
            NormalTensor::new(taylor_tensor(&normal, m), m, j.symmetric()).map_err(|e| {
                Error::InternalMismatch(format!("normalized Taylor data outside C_{m}: {e}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    NormalTensorTuple::new(j.n(), j.symmetric(), tensors)
}

/// Polynomial jet `Γ^k_{ij} = Σ_m Σ_α T^m_{k i j a(α)} x^α / α!`, already
/// in a normal chart.
pub fn section_s_r(t: &NormalTensorTuple) -> Result<ConnectionJet> {
    let (n, r) = (t.n, t.order());
    for comp in &t.tensors {
        // re-validate: tuples can be assembled from unchecked JSON
        NormalTensor::new(comp.tensor().clone(), comp.order(), comp.symmetric())?;
    }
    let mut gamma = vec![TruncatedSeries::zero(n, r); n * n * n];
    for comp in &t.tensors {
        let tensor = comp.tensor();
        for flat in 0..tensor.len() {
            let v = &tensor.entries()[flat];
            if v.is_zero() {
                continue;
            }
            let idx = tensor.unflatten(flat);
            // one representative per monomial: sorted derivative indices
            if idx[3..].windows(2).any(|w| w[0] > w[1]) {
                continue;
            }
            let alpha = MultiIndex::from_slots(n, &idx[3..]);
            let coeff: Rat = v / alpha.factorial();
            gamma[(idx[0] * n + idx[1]) * n + idx[2]].add_term(alpha, coeff);
        }
    }
    ConnectionJet::new(n, r, t.symmetric, gamma)
}

/// A jet `τ` with identity linear part such that `transform(τ, j1) = j2`,
/// or `None` when `π_r` separates the two.
pub fn h_equivalence_witness(j1: &ConnectionJet, j2: &ConnectionJet) -> Result<Option<DiffeoJet>> {
    if j1.n() != j2.n() {
        return Err(Error::DimensionMismatch(j1.n(), j2.n()));
    }
    if j1.order() != j2.order() {
        return Err(Error::OrderMismatch(j1.order(), j2.order()));
    }
    if j1.symmetric() != j2.symmetric() {
        return Err(Error::InvalidInput("symmetry flags differ".into()));
    }
    let (tau1, normal1) = normalize(j1)?;
    let (tau2, normal2) = normalize(j2)?;
    // a normal chart is determined by its Taylor data, so equal normal jets
    // is the same as equal π_r
    if normal1 != normal2 {
        return Ok(None);
    }
    let witness = tau2.invert()?.compose(&tau1)?;
    if transform(&witness, j1)? != *j2 {
        return Err(Error::InternalMismatch(
            "equivalence witness does not carry the first jet to the second".into(),
        ));
    }
    Ok(Some(witness))
}

/// `π_r(g·j) = g·π_r(j)` for the linear change of chart `g`.
pub fn pi_equivariance_check(g: &GlElement, j: &ConnectionJet) -> Result<bool> {
    let moved = transform(&DiffeoJet::linear(g.matrix(), j.order() + 2)?, j)?;
    Ok(pi_r(&moved)? == pi_r(j)?.gl_act(g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::{curvature_at_origin, single_constant, torsion_at_origin};
    use crate::random;
    use crate::rat::frac;
    use crate::tensors::{gl_act, NormalTensor};

    #[test]
    fn flat_jet_is_already_normal() {
        let j = ConnectionJet::zero(2, 2, true);
        let (tau, normal) = normalize(&j).unwrap();
        assert!(tau.is_identity());
        assert_eq!(normal, j);
        assert!(pi_r(&j).unwrap().is_zero());
    }

    #[test]
    fn one_dimensional_constant() {
        let c = frac(3, 2);
        let j = single_constant(1, 0, true, 0, 0, 0, c.clone()).unwrap();
        let (tau, normal) = normalize(&j).unwrap();
        assert!(normal.is_flat());
        assert_eq!(tau.components()[0].coeff(&MultiIndex::new(vec![2])), c / rat(2));
    }

    #[test]
    fn defect_at_order_zero_is_symmetric_part() {
        let j = single_constant(2, 1, false, 1, 0, 1, rat(4)).unwrap();
        let defect = normality_defect(&j);
        assert_eq!(*defect[0].get(&[1, 0, 1]), rat(2));
        assert_eq!(*defect[0].get(&[1, 1, 0]), rat(2));
        assert!(defect[1].is_zero());
    }

    #[test]
    fn normalize_gives_normal_chart_with_identity_frame() {
        for (seed, n, r, symmetric) in [(1, 2, 2, true), (2, 3, 1, false), (3, 2, 3, false)] {
            let mut rng = random::seeded(seed);
            let j = random::connection(n, r, symmetric, &mut rng);
            let (tau, normal) = normalize(&j).unwrap();
            assert!(tau.has_identity_linear_part());
            assert_eq!(tau.order(), r + 2);
            assert!(is_normal(&normal));
            assert_eq!(transform(&tau, &j).unwrap(), normal);
        }
    }

    #[test]
    fn round_trip_through_a_random_chart() {
        let mut rng = random::seeded(21);
        let t = random::normal_tuple(2, 2, false, &mut rng).unwrap();
        let base = section_s_r(&t).unwrap();
        let sigma = random::diffeo(2, 4, true, &mut rng);
        let moved = transform(&sigma, &base).unwrap();
        assert!(!is_normal(&moved));
        let (_, normal) = normalize(&moved).unwrap();
        assert_eq!(normal, base);
    }

    #[test]
    fn section_is_normal_and_pi_inverts_it() {
        for (seed, n, r, symmetric) in [(1, 2, 2, true), (2, 2, 2, false), (3, 3, 1, true)] {
            let mut rng = random::seeded(seed);
            let t = random::normal_tuple(n, r, symmetric, &mut rng).unwrap();
            let j = section_s_r(&t).unwrap();
            assert_eq!(j.symmetric(), symmetric);
            assert!(is_normal(&j));
            assert_eq!(pi_r(&j).unwrap(), t);
        }
        assert!(section_s_r(&NormalTensorTuple::zero(2, 1, true)).unwrap().is_flat());
    }

    #[test]
    fn first_component_is_half_the_torsion() {
        let mut rng = random::seeded(8);
        for symmetric in [false, true] {
            let j = random::connection(3, 1, symmetric, &mut rng);
            let t = pi_r(&j).unwrap();
            let half = torsion_at_origin(&j).scale(&frac(1, 2));
            assert_eq!(*t.get(0).tensor(), half);
            assert_eq!(t.get(0).is_zero(), symmetric);
        }
    }

    #[test]
    fn curvature_matches_first_normal_tensor() {
        let mut rng = random::seeded(9);
        let j = random::connection(3, 2, true, &mut rng);
        let g1 = pi_r(&j).unwrap().get(1).tensor().clone();
        let curv = curvature_at_origin(&j).unwrap();
        for f in 0..curv.len() {
            let idx = curv.unflatten(f);
            let (k, i, jj, l) = (idx[0], idx[1], idx[2], idx[3]);
            assert_eq!(curv.get(&idx), &(g1.get(&[k, jj, l, i]) - g1.get(&[k, i, l, jj])));
        }
    }

    #[test]
    fn witness_for_related_jets() {
        let mut rng = random::seeded(12);
        let j1 = random::connection(2, 2, false, &mut rng);
        let sigma = random::diffeo(2, 4, true, &mut rng);
        let j2 = transform(&sigma, &j1).unwrap();
        let w = h_equivalence_witness(&j1, &j2).unwrap().expect("equivalent");
        assert!(w.has_identity_linear_part());
        assert_eq!(transform(&w, &j1).unwrap(), j2);
        let same = h_equivalence_witness(&j1, &j1).unwrap().expect("reflexive");
        assert_eq!(transform(&same, &j1).unwrap(), j1);

        let a = single_constant(2, 0, false, 0, 0, 1, rat(1)).unwrap();
        let b = single_constant(2, 0, false, 0, 0, 1, rat(2)).unwrap();
        assert!(h_equivalence_witness(&a, &b).unwrap().is_none());
    }

    #[test]
    fn equivariance_under_linear_changes() {
        let mut rng = random::seeded(13);
        let j = random::connection(2, 2, false, &mut rng);
        assert!(pi_equivariance_check(&GlElement::identity(2), &j).unwrap());
        let g = random::gl_element(2, &mut rng);
        assert!(pi_equivariance_check(&g, &j).unwrap());
    }

    #[test]
    fn homothety_weight_on_a_single_component() {
        let mut rng = random::seeded(14);
        let mut comps: Vec<NormalTensor> = (0..3).map(|m| NormalTensor::zero(2, m, true)).collect();
        comps[2] = random::normal_tensor(2, 2, true, &mut rng);
        let t = NormalTensorTuple::new(2, true, comps).unwrap();
        let g = GlElement::homothety(2, rat(2)).unwrap();
        let moved = t.gl_act(&g).unwrap();
        assert_eq!(*moved.get(2).tensor(), t.get(2).tensor().scale(&frac(1, 8)));
        assert_eq!(*moved.get(2).tensor(), gl_act(&g, t.get(2).tensor()).unwrap());
    }

    #[test]
    fn one_dimensional_tuple_vanishes() {
        let mut rng = random::seeded(15);
        for r in 0..4 {
            let j = random::connection(1, r, true, &mut rng);
            assert!(pi_r(&j).unwrap().is_zero());
        }
    }

    #[test]
    fn section_rejects_bad_components() {
        let mut t = DenseTensor::zeros(2, normal_signature(0));
        t.set(&[0, 0, 0], rat(1));
        assert!(NormalTensor::new(t, 0, false).is_err());
    }
}
