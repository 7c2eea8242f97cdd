//! Invariant theory of `GL_n` at desk scale.
//!
//! Invariant linear functionals on a sub-representation of a mixed tensor
//! space `(V*)^{⊗p} ⊗ V^{⊗q}` are restrictions of the total contractions
//! `φ_σ`, so their dimension is the rank of the restricted `φ_σ`. This gives
//! the counts of scalar invariants and of natural tensors built from normal
//! tensors.

use std::collections::HashMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::rank_of;
use crate::random;
use crate::rat::{rat, Rat};
use crate::tensors::{gl_act, normal_basis, DenseTensor, GlElement, Variance};

/// Default bound on the number of contracted index pairs.
pub const DEFAULT_CAP_P: usize = 6;

/// Multiplicities `(d_0, …, d_r)` of `S^{d_0}C_0 ⊗ … ⊗ S^{d_r}C_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeProfile {
    d: Vec<usize>,
    p: usize,
    q: usize,
}

impl DegreeProfile {
    pub fn new(d: Vec<usize>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::InvalidInput("a profile has at least d_0".into()));
        }
        let p = d.iter().enumerate().map(|(m, &dm)| (m + 2) * dm).sum();
        let q = d.iter().sum();
        Ok(DegreeProfile { d, p, q })
    }

    pub fn zero(r: usize) -> Self {
        Self::new(vec![0; r + 1]).expect("nonempty")
    }

    pub fn degrees(&self) -> &[usize] {
        &self.d
    }

    pub fn r(&self) -> usize {
        self.d.len() - 1
    }

    /// Covariant slots of the ambient tensor space.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Contravariant slots of the ambient tensor space.
    pub fn q(&self) -> usize {
        self.q
    }

    /// `p − q = Σ (m+1) d_m`.
    pub fn delta(&self) -> usize {
        self.p - self.q
    }

    pub fn is_zero(&self) -> bool {
        self.q == 0
    }

    /// Exponent of `λ` by which `λ·I` acts on the profile's tensor space.
    pub fn homothety_weight(&self) -> i64 {
        -(self.delta() as i64)
    }
}

/// All profiles with `Σ (m+1) d_m = delta` and `Σ d_m ≤ max_total`, in
/// descending lexicographic order.
pub fn enumerate_profiles(r: usize, delta: usize, max_total: usize) -> Vec<DegreeProfile> {
    fn rec(m: usize, r: usize, delta: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let w = m + 1;
        if m == r {
            if delta % w == 0 && delta / w <= budget {
                cur.push(delta / w);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for d in (0..=(delta / w).min(budget)).rev() {
            cur.push(d);
            rec(m + 1, r, delta - d * w, budget - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, delta, max_total, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|d| DegreeProfile::new(d).expect("nonempty"))
        .collect()
}

/// A total contraction restricted to a source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionFunctional {
    /// Covariant slot `a` is paired with contravariant slot `sigma[a]`.
    pub sigma: Vec<usize>,
    pub values: Vec<Rat>,
}

/// A vector given as a sum of tensor products of stored factors.
#[derive(Clone, Debug)]
struct ProductSum {
    terms: Vec<(Rat, Vec<usize>)>,
}

/// A family of vectors in one mixed tensor space, kept factored.
struct Source {
    store: Vec<DenseTensor>,
    signature: Vec<Variance>,
    elements: Vec<ProductSum>,
}

impl Source {
    fn from_tensors(basis: &[DenseTensor]) -> Result<Self> {
        let signature = basis.first().map(|t| t.signature().to_vec()).unwrap_or_default();
        for t in basis {
            if t.signature() != signature.as_slice() {
                return Err(Error::InvalidInput("source basis has mixed signatures".into()));
            }
            if t.n() != basis[0].n() {
                return Err(Error::DimensionMismatch(t.n(), basis[0].n()));
            }
        }
        Ok(Source {
            store: basis.to_vec(),
            signature,
            elements: (0..basis.len())
                .map(|i| ProductSum {
                    terms: vec![(Rat::one(), vec![i])],
                })
                .collect(),
        })
    }

    fn n(&self) -> usize {
        self.store.first().map_or(1, DenseTensor::n)
    }

    fn balance(&self) -> (usize, usize) {
        let cov = self.signature.iter().filter(|&&v| v == Variance::Cov).count();
        (cov, self.signature.len() - cov)
    }

    fn functional(&self, sigma: &[usize]) -> Vec<Rat> {
        let n = self.n();
        let npairs = sigma.len();
        // pair id of every global slot
        let mut pair = vec![0; self.signature.len()];
        let cov: Vec<usize> = (0..self.signature.len())
            .filter(|&s| self.signature[s] == Variance::Cov)
            .collect();
        let contra: Vec<usize> = (0..self.signature.len())
            .filter(|&s| self.signature[s] == Variance::Contra)
            .collect();
        for (a, &s) in cov.iter().enumerate() {
            pair[s] = a;
            pair[contra[sigma[a]]] = a;
        }
        let total = n.pow(npairs as u32);
        let mut cache: HashMap<Vec<usize>, Rat> = HashMap::new();
        self.elements
            .iter()
            .map(|el| {
                let mut acc = Rat::zero();
                for (c, factors) in &el.terms {
                    let v = cache
                        .entry(factors.clone())
                        .or_insert_with(|| self.contract(factors, &pair, total, n, npairs))
                        .clone();
                    if !v.is_zero() {
                        acc += c * v;
                    }
                }
                acc
            })
            .collect()
    }

    fn contract(&self, factors: &[usize], pair: &[usize], total: usize, n: usize, npairs: usize) -> Rat {
        // (pair id, stride) for every slot of every factor
        let mut plan: Vec<Vec<(usize, usize)>> = Vec::with_capacity(factors.len());
        let mut offset = 0;
        for &f in factors {
            let rank = self.store[f].rank();
            plan.push(
                (0..rank)
                    .map(|s| (pair[offset + s], n.pow((rank - 1 - s) as u32)))
                    .collect(),
            );
            offset += rank;
        }
        let mut x = vec![0usize; npairs];
        let mut sum = Rat::zero();
        for step in 0..total {
            if step > 0 {
                // odometer
                let mut i = npairs - 1;
                loop {
                    x[i] += 1;
                    if x[i] < n {
                        break;
                    }
                    x[i] = 0;
                    i -= 1;
                }
            }
            let mut prod: Option<Rat> = None;
            let mut zero = false;
            for (&f, slots) in factors.iter().zip(&plan) {
                let flat: usize = slots.iter().map(|&(p, st)| x[p] * st).sum();
                let e = &self.store[f].entries()[flat];
                if e.is_zero() {
                    zero = true;
                    break;
                }
                prod = Some(match prod {
                    None => e.clone(),
                    Some(v) => v * e,
                });
            }
            if !zero {
                if let Some(v) = prod {
                    sum += v;
                }
            }
        }
        sum
    }

    fn check(&self, cap: usize) -> Result<usize> {
        let (p, q) = self.balance();
        if p != q {
            return Err(Error::UnbalancedVariance { p, q });
        }
        if p > cap {
            return Err(Error::ResourceCap { p, cap });
        }
        Ok(p)
    }

    fn functionals(&self, cap: usize) -> Result<Vec<ContractionFunctional>> {
        let p = self.check(cap)?;
        let perms: Vec<Vec<usize>> = (0..p).permutations(p).collect();
        Ok(perms
            .into_par_iter()
            .map(|sigma| {
                let values = self.functional(&sigma);
                ContractionFunctional { sigma, values }
            })
            .collect())
    }

    fn span_dim(&self, cap: usize) -> Result<usize> {
        let rows = self.functionals(cap)?;
        Ok(rank_of(self.elements.len(), rows.into_iter().map(|f| f.values)))
    }
}

/// All `φ_σ`, `σ ∈ S_p`, evaluated on the given basis.
pub fn contraction_functionals(basis: &[DenseTensor], cap: usize) -> Result<Vec<ContractionFunctional>> {
    Source::from_tensors(basis)?.functionals(cap)
}

/// Dimension of the `GL_n`-invariant functionals on the span of `basis`.
pub fn contraction_span_dim(basis: &[DenseTensor], cap: usize) -> Result<usize> {
    Source::from_tensors(basis)?.span_dim(cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotSymmetry {
    Symmetric,
    Antisymmetric,
}

/// Symmetry conditions on groups of target slots; slots are numbered in
/// `(T*)^{⊗p} ⊗ T^{⊗q}` order, covariant first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TargetSymmetry {
    groups: Vec<(SlotSymmetry, Vec<usize>)>,
}

impl TargetSymmetry {
    pub fn none() -> Self {
        Self::default()
    }

    /// `End(T)`-valued 2-forms: `Λ²T* ⊗ T* ⊗ T` with `p = 3`, `q = 1`.
    pub fn two_form_endo() -> Self {
        Self::antisymmetric(vec![0, 1])
    }

    pub fn symmetric(slots: Vec<usize>) -> Self {
        TargetSymmetry {
            groups: vec![(SlotSymmetry::Symmetric, slots)],
        }
    }

    pub fn antisymmetric(slots: Vec<usize>) -> Self {
        TargetSymmetry {
            groups: vec![(SlotSymmetry::Antisymmetric, slots)],
        }
    }

    pub fn with(mut self, kind: SlotSymmetry, slots: Vec<usize>) -> Self {
        self.groups.push((kind, slots));
        self
    }

    pub fn groups(&self) -> &[(SlotSymmetry, Vec<usize>)] {
        &self.groups
    }

    /// Parses `none`, `two-form-endo`, or `;`-separated `sym:i,j,…` /
    /// `antisym:i,j,…` groups.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "" | "none" => return Ok(Self::none()),
            "two-form-endo" => return Ok(Self::two_form_endo()),
            _ => {}
        }
        let mut out = Self::none();
        for part in s.split(';') {
            let (kind, slots) = part
                .split_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("bad target symmetry `{part}`")))?;
            let kind = match kind.trim() {
                "sym" => SlotSymmetry::Symmetric,
                "antisym" => SlotSymmetry::Antisymmetric,
                other => return Err(Error::InvalidInput(format!("unknown symmetry `{other}`"))),
            };
            let slots = slots
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidInput(format!("bad slot `{t}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            out = out.with(kind, slots);
        }
        Ok(out)
    }

    pub fn describe(&self) -> String {
        if self.groups.is_empty() {
            return "none".into();
        }
        self.groups
            .iter()
            .map(|(k, s)| {
                let k = match k {
                    SlotSymmetry::Symmetric => "sym",
                    SlotSymmetry::Antisymmetric => "antisym",
                };
                format!("{k}:{}", s.iter().join(","))
            })
            .join(";")
    }

    fn validate(&self, p: usize, q: usize) -> Result<()> {
        let mut used = vec![false; p + q];
        for (_, slots) in &self.groups {
            if slots.len() < 2 {
                return Err(Error::InvalidInput("a symmetry group needs two slots".into()));
            }
            for &s in slots {
                if s >= p + q {
                    return Err(Error::InvalidInput(format!("target slot {s} out of range")));
                }
                if std::mem::replace(&mut used[s], true) {
                    return Err(Error::InvalidInput(format!("target slot {s} used twice")));
                }
            }
            if slots.iter().any(|&s| s < p) && slots.iter().any(|&s| s >= p) {
                return Err(Error::InvalidInput(
                    "a symmetry group mixes covariant and contravariant slots".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Basis of the dual of the target `F ⊂ (V*)^{⊗p} ⊗ V^{⊗q}`, realized in
/// `V^{⊗p} ⊗ (V*)^{⊗q}` with the same slot symmetries.
pub fn dual_target_basis(n: usize, p: usize, q: usize, target: &TargetSymmetry) -> Result<Vec<DenseTensor>> {
    target.validate(p, q)?;
    let mut sig = vec![Variance::Contra; p];
    sig.extend(std::iter::repeat(Variance::Cov).take(q));
    let template = DenseTensor::zeros(n, sig.clone());
    let mut out = Vec::new();
    for flat in 0..template.len() {
        let idx = template.unflatten(flat);
        let canonical = target.groups.iter().all(|(kind, slots)| {
            slots.windows(2).all(|w| match kind {
                SlotSymmetry::Symmetric => idx[w[0]] <= idx[w[1]],
                SlotSymmetry::Antisymmetric => idx[w[0]] < idx[w[1]],
            })
        });
        if !canonical {
            continue;
        }
        let mut t = template.clone();
        // sum over the product of the group permutations
        let group_perms: Vec<Vec<(Vec<usize>, i64)>> = target
            .groups
            .iter()
            .map(|(kind, slots)| {
                (0..slots.len())
                    .permutations(slots.len())
                    .map(|perm| {
                        let sign = match kind {
                            SlotSymmetry::Symmetric => 1,
                            SlotSymmetry::Antisymmetric => crate::tensors::permutation_sign(&perm),
                        };
                        (perm, sign)
                    })
                    .collect()
            })
            .collect();
        for choice in group_perms.iter().multi_cartesian_product_or_unit() {
            let mut moved = idx.clone();
            let mut sign = 1;
            for ((_, slots), (perm, s)) in target.groups.iter().zip(&choice) {
                sign *= s;
                for (a, &b) in perm.iter().enumerate() {
                    moved[slots[a]] = idx[slots[b]];
                }
            }
            let f = t.flatten(&moved);
            t.entries_mut()[f] += rat(sign);
        }
        out.push(t);
    }
    Ok(out)
}

/// `multi_cartesian_product` that yields one empty choice for no groups.
trait CartesianOrUnit<'a, T: 'a> {
    fn multi_cartesian_product_or_unit(self) -> Vec<Vec<&'a T>>;
}

impl<'a, T: 'a> CartesianOrUnit<'a, T> for std::slice::Iter<'a, Vec<T>> {
    fn multi_cartesian_product_or_unit(self) -> Vec<Vec<&'a T>> {
        let lists: Vec<&'a Vec<T>> = self.collect();
        if lists.is_empty() {
            return vec![Vec::new()];
        }
        lists.into_iter().map(|l| l.iter()).multi_cartesian_product().collect()
    }
}

/// Why a profile contributes what it does.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reason {
    #[serde(rename = "p≠q")]
    Unbalanced,
    #[serde(rename = "rank")]
    Rank,
    #[serde(rename = "C̃_0=0")]
    SymmetricTorsionFree,
    #[serde(rename = "constants")]
    Constants,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarInvariantReport {
    pub profile: DegreeProfile,
    pub dimension: usize,
    pub reason: Reason,
    /// `p ≠ q` for the ambient space, so the contraction space is zero.
    pub unbalanced: bool,
    pub homothety_weight: i64,
    /// The weight read off from `λ·I` acting on sample normal tensors agrees
    /// with `−Σ (m+1) d_m`.
    pub weight_verified: bool,
}

/// Exponent `w` with `2·I` acting on `C_m` as `2^w`, measured on a sample
/// element; `None` when `C_m = 0`.
fn measured_weight(n: usize, m: usize) -> Result<Option<i64>> {
    let mut rng = random::derived(0x5eed, (n * 100 + m) as u64);
    let t = random::normal_tensor(n, m, false, &mut rng);
    let Some(pos) = t.tensor().entries().iter().position(|e| !e.is_zero()) else {
        return Ok(None);
    };
    let g = GlElement::homothety(n, rat(2))?;
    let moved = gl_act(&g, t.tensor())?;
    let ratio = &moved.entries()[pos] / &t.tensor().entries()[pos];
    let bound = (m + 4) as i64;
    for w in -bound..=bound {
        let two = rat(2);
        let candidate = if w >= 0 {
            num_traits::pow(two, w as usize)
        } else {
            Rat::one() / num_traits::pow(two, (-w) as usize)
        };
        if candidate == ratio {
            return Ok(if moved == t.tensor().scale(&ratio) { Some(w) } else { None });
        }
    }
    Ok(None)
}

/// Dimension of the `GL_n`-invariant linear functionals on
/// `S^{d_0}C_0 ⊗ … ⊗ S^{d_r}C_r`.
pub fn scalar_invariant_dimension(n: usize, profile: &DegreeProfile) -> Result<ScalarInvariantReport> {
    let mut verified = true;
    for (m, &dm) in profile.d.iter().enumerate() {
        if dm == 0 {
            continue;
        }
        if let Some(w) = measured_weight(n, m)? {
            verified &= w == -((m + 1) as i64);
        }
    }
    let (dimension, reason) = if profile.is_zero() {
        (1, Reason::Constants)
    } else {
        (0, Reason::Unbalanced)
    };
    Ok(ScalarInvariantReport {
        profile: profile.clone(),
        dimension,
        reason,
        unbalanced: profile.p != profile.q,
        homothety_weight: profile.homothety_weight(),
        weight_verified: verified,
    })
}

/// Reports for every profile of order `r` with `1 ≤ Σ d_m ≤ max_total`.
pub fn scalar_invariant_survey(n: usize, r: usize, max_total: usize) -> Result<Vec<ScalarInvariantReport>> {
    let max_delta = (r + 1) * max_total;
    let mut out = Vec::new();
    for delta in 1..=max_delta {
        for profile in enumerate_profiles(r, delta, max_total) {
            out.push(scalar_invariant_dimension(n, &profile)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileContribution {
    pub profile: DegreeProfile,
    pub dimension: usize,
    pub reason: Reason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalReport {
    pub n: usize,
    pub r: usize,
    pub p: usize,
    pub q: usize,
    pub symmetric: bool,
    pub target: String,
    pub profiles: Vec<ProfileContribution>,
    pub total: usize,
}

/// Factored basis of `S^{d_0}C_0 ⊗ … ⊗ S^{d_r}C_r ⊗ F*`.
fn profile_source(
    n: usize,
    symmetric: bool,
    profile: &DegreeProfile,
    dual_target: &[DenseTensor],
) -> Source {
    let mut store: Vec<DenseTensor> = Vec::new();
    let mut signature = Vec::new();
    // basis of each symmetric power, as sums of ordered products
    let mut powers: Vec<Vec<ProductSum>> = Vec::new();
    for (m, &dm) in profile.d.iter().enumerate() {
        if dm == 0 {
            continue;
        }
        let start = store.len();
        let basis = normal_basis(n, m, symmetric);
        let ids: Vec<usize> = (start..start + basis.len()).collect();
        for b in basis {
            store.push(b.into_tensor());
        }
        for _ in 0..dm {
            signature.extend(crate::tensors::normal_signature(m));
        }
        let elements = ids
            .iter()
            .copied()
            .combinations_with_replacement(dm)
            .map(|multiset| ProductSum {
                terms: (0..dm)
                    .permutations(dm)
                    .map(|perm| (Rat::one(), perm.iter().map(|&i| multiset[i]).collect()))
                    .collect(),
            })
            .collect();
        powers.push(elements);
    }
    let start = store.len();
    store.extend(dual_target.iter().cloned());
    signature.extend(dual_target.first().map(|t| t.signature().to_vec()).unwrap_or_default());
    powers.push(
        (start..store.len())
            .map(|i| ProductSum {
                terms: vec![(Rat::one(), vec![i])],
            })
            .collect(),
    );

    let mut elements = vec![ProductSum {
        terms: vec![(Rat::one(), Vec::new())],
    }];
    for power in &powers {
        let mut next = Vec::with_capacity(elements.len() * power.len());
        for left in &elements {
            for right in power {
                let mut terms = Vec::with_capacity(left.terms.len() * right.terms.len());
                for (c1, f1) in &left.terms {
                    for (c2, f2) in &right.terms {
                        let mut f = f1.clone();
                        f.extend_from_slice(f2);
                        terms.push((c1 * c2, f));
                    }
                }
                next.push(ProductSum { terms });
            }
        }
        elements = next;
    }
    Source {
        store,
        signature,
        elements,
    }
}

/// `Σ_profiles dim Hom_{GL_n}(S^{d_0}C_0 ⊗ … ⊗ S^{d_r}C_r, F)` over the
/// profiles with `Σ (m+1) d_m = p − q`, where `F ⊂ (V*)^{⊗p} ⊗ V^{⊗q}` is
/// cut out by `target`.
pub fn natural_tensor_dimension(
    n: usize,
    r: usize,
    p: usize,
    q: usize,
    symmetric: bool,
    target: &TargetSymmetry,
    cap: usize,
) -> Result<NaturalReport> {
    if p < q {
        return Err(Error::UnbalancedVariance { p, q });
    }
    let dual = dual_target_basis(n, p, q, target)?;
    let mut profiles = Vec::new();
    for profile in enumerate_profiles(r, p - q, p - q) {
        let (dimension, reason) = if p == 0 && q == 0 {
            (1, Reason::Constants)
        } else if symmetric && profile.d[0] > 0 {
            (0, Reason::SymmetricTorsionFree)
        } else {
            let pairs = profile.p + q;
            if pairs > cap {
                return Err(Error::ResourceCap { p: pairs, cap });
            }
            (profile_source(n, symmetric, &profile, &dual).span_dim(cap)?, Reason::Rank)
        };
        profiles.push(ProfileContribution {
            profile,
            dimension,
            reason,
        });
    }
    let total = profiles.iter().map(|c| c.dimension).sum();
    Ok(NaturalReport {
        n,
        r,
        p,
        q,
        symmetric,
        target: target.describe(),
        profiles,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensors::antisymmetrize;

    fn unit(n: usize, sig: &[Variance], idx: &[usize]) -> DenseTensor {
        let mut t = DenseTensor::zeros(n, sig.to_vec());
        t.set(idx, rat(1));
        t
    }

    fn full_basis(n: usize, sig: &[Variance]) -> Vec<DenseTensor> {
        let len = n.pow(sig.len() as u32);
        let template = DenseTensor::zeros(n, sig.to_vec());
        (0..len).map(|f| unit(n, sig, &template.unflatten(f))).collect()
    }

    #[test]
    fn profiles() {
        let ds = |v: Vec<DegreeProfile>| v.into_iter().map(|p| p.d).collect::<Vec<_>>();
        assert_eq!(ds(enumerate_profiles(3, 0, 5)), vec![vec![0, 0, 0, 0]]);
        assert_eq!(ds(enumerate_profiles(1, 2, 10)), vec![vec![2, 0], vec![0, 1]]);
        assert_eq!(
            ds(enumerate_profiles(2, 3, 10)),
            vec![vec![3, 0, 0], vec![1, 1, 0], vec![0, 0, 1]]
        );
        assert_eq!(ds(enumerate_profiles(2, 3, 2)), vec![vec![1, 1, 0], vec![0, 0, 1]]);
    }

    /// Exhaustive oracle over a box of candidate profiles.
    #[test]
    fn profiles_match_exhaustive_search() {
        for r in 0..3 {
            for delta in 0..7 {
                let mut expected: Vec<Vec<usize>> = (0..=r)
                    .map(|_| 0..=delta)
                    .multi_cartesian_product()
                    .filter(|d| d.iter().enumerate().map(|(m, x)| (m + 1) * x).sum::<usize>() == delta)
                    .filter(|d| d.iter().sum::<usize>() <= 4)
                    .collect();
                expected.sort();
                expected.reverse();
                let got: Vec<Vec<usize>> = enumerate_profiles(r, delta, 4).into_iter().map(|p| p.d).collect();
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn profile_counts() {
        let p = DegreeProfile::new(vec![1, 2]).unwrap();
        assert_eq!((p.p(), p.q(), p.delta(), p.homothety_weight()), (8, 3, 5, -5));
    }

    #[test]
    fn trace_is_the_only_invariant_of_endomorphisms() {
        let sig = [Variance::Cov, Variance::Contra];
        assert_eq!(contraction_span_dim(&full_basis(3, &sig), DEFAULT_CAP_P).unwrap(), 1);
    }

    #[test]
    fn full_mixed_spaces_have_p_factorial_invariants() {
        for p in 1..=3 {
            let mut sig = vec![Variance::Cov; p];
            sig.extend(vec![Variance::Contra; p]);
            assert_eq!(
                contraction_span_dim(&full_basis(p, &sig), DEFAULT_CAP_P).unwrap(),
                (1..=p).product::<usize>()
            );
        }
        // for n < p the contractions become dependent
        let sig = [Variance::Cov, Variance::Cov, Variance::Contra, Variance::Contra];
        assert_eq!(contraction_span_dim(&full_basis(1, &sig), DEFAULT_CAP_P).unwrap(), 1);
    }

    #[test]
    fn wedge_pairing() {
        let sig = [Variance::Cov, Variance::Cov, Variance::Contra, Variance::Contra];
        let mut basis = Vec::new();
        for a in 0..3 {
            for b in a + 1..3 {
                for c in 0..3 {
                    for d in c + 1..3 {
                        let t = unit(3, &sig, &[a, b, c, d]);
                        let t = antisymmetrize(&antisymmetrize(&t, &[0, 1]).unwrap(), &[2, 3]).unwrap();
                        basis.push(t);
                    }
                }
            }
        }
        assert_eq!(contraction_span_dim(&basis, DEFAULT_CAP_P).unwrap(), 1);
    }

    #[test]
    fn errors() {
        let sig = [Variance::Cov, Variance::Cov, Variance::Contra];
        assert_eq!(
            contraction_span_dim(&full_basis(2, &sig), DEFAULT_CAP_P),
            Err(Error::UnbalancedVariance { p: 2, q: 1 })
        );
        let mut sig = vec![Variance::Cov; 3];
        sig.extend(vec![Variance::Contra; 3]);
        assert_eq!(
            contraction_span_dim(&full_basis(1, &sig), 2),
            Err(Error::ResourceCap { p: 3, cap: 2 })
        );
    }

    #[test]
    fn basis_change_does_not_change_rank() {
        let sig = [Variance::Cov, Variance::Contra, Variance::Cov, Variance::Contra];
        let basis = full_basis(2, &sig);
        let mut rng = random::seeded(3);
        let m = random::invertible_matrix(basis.len(), false, &mut rng);
        let changed: Vec<DenseTensor> = (0..basis.len())
            .map(|i| {
                let mut t = DenseTensor::zeros(2, sig.to_vec());
                for (j, b) in basis.iter().enumerate() {
                    t.add_scaled(&m[(i, j)], b).unwrap();
                }
                t
            })
            .collect();
        assert_eq!(
            contraction_span_dim(&changed, DEFAULT_CAP_P).unwrap(),
            contraction_span_dim(&basis, DEFAULT_CAP_P).unwrap()
        );
    }

    #[test]
    fn scalar_invariants() {
        let zero = scalar_invariant_dimension(2, &DegreeProfile::zero(1)).unwrap();
        assert_eq!((zero.dimension, zero.reason), (1, Reason::Constants));
        let one = scalar_invariant_dimension(2, &DegreeProfile::new(vec![1]).unwrap()).unwrap();
        assert_eq!(one.dimension, 0);
        assert_eq!(one.homothety_weight, -1);
        assert!(one.unbalanced && one.weight_verified);
    }

    #[test]
    fn dual_target_dimensions() {
        assert_eq!(dual_target_basis(3, 3, 1, &TargetSymmetry::two_form_endo()).unwrap().len(), 27);
        assert_eq!(dual_target_basis(3, 2, 0, &TargetSymmetry::symmetric(vec![0, 1])).unwrap().len(), 6);
        assert_eq!(dual_target_basis(2, 2, 2, &TargetSymmetry::none()).unwrap().len(), 16);
        assert!(dual_target_basis(2, 2, 1, &TargetSymmetry::antisymmetric(vec![1, 2])).is_err());
        assert_eq!(
            TargetSymmetry::parse("antisym:0,1;sym:2,3").unwrap(),
            TargetSymmetry::antisymmetric(vec![0, 1]).with(SlotSymmetry::Symmetric, vec![2, 3])
        );
        assert_eq!(TargetSymmetry::parse("two-form-endo").unwrap().describe(), "antisym:0,1");
    }

    #[test]
    fn natural_constants_and_one_forms() {
        let none = TargetSymmetry::none();
        assert_eq!(natural_tensor_dimension(3, 2, 0, 0, true, &none, 6).unwrap().total, 1);
        let forms = natural_tensor_dimension(3, 1, 1, 0, true, &none, 6).unwrap();
        assert_eq!(forms.total, 0);
        assert_eq!(forms.profiles.len(), 1);
        assert_eq!(forms.profiles[0].reason, Reason::SymmetricTorsionFree);
    }

    /// `C_0 ≅ V ⊗ Λ²V*` splits into its trace and trace-free parts, so the
    /// equivariant maps `C_0 → Λ²V* ⊗ V` are spanned by the identity and
    /// `T ↦ tr(T) ∧ Id`.
    #[test]
    fn vector_valued_two_forms_from_torsion() {
        let target = TargetSymmetry::antisymmetric(vec![0, 1]);
        let report = natural_tensor_dimension(3, 0, 2, 1, false, &target, 6).unwrap();
        assert_eq!(report.total, 2);
    }
}
