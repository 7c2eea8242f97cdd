//! Dense tensors over `V = Q^n`, symmetrization, and the spaces of normal
//! tensors.
//!
//! The normal-tensor space `C_m` consists of `(1, m+2)`-tensors
//! `T^l_{i j k_1 ... k_m}` symmetric in the last `m` covariant slots whose
//! full symmetrization over all `m+2` covariant slots vanishes. The
//! symmetric variant additionally requires symmetry in `(i, j)`. Both are
//! kernels of the total symmetrization restricted to the partially
//! symmetric tensors, which is how [`normal_basis`] computes them.
//!
//! `GL_n` acts on contravariant slots by `g` and on covariant slots by
//! pullback along `g^{-1}`; the homothety `λ·I` therefore scales `C_m` by
//! `λ^{-(m+1)}`.

use std::collections::HashMap;

use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix};
use crate::rat::{self, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Contra,
    Cov,
}

impl Variance {
    pub fn dual(self) -> Variance {
        match self {
            Variance::Contra => Variance::Cov,
            Variance::Cov => Variance::Contra,
        }
    }
}

/// Signature `(CONTRA, COV × (m+2))` of a normal tensor of order `m`.
pub fn normal_signature(m: usize) -> Vec<Variance> {
    std::iter::once(Variance::Contra)
        .chain(std::iter::repeat(Variance::Cov).take(m + 2))
        .collect()
}

/// Row-major dense tensor with one index range `0..n` per slot.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DenseTensor {
    n: usize,
    signature: Vec<Variance>,
    entries: Vec<Rat>,
}

impl DenseTensor {
    pub fn zeros(n: usize, signature: Vec<Variance>) -> Self {
        let len = n.pow(signature.len() as u32);
        DenseTensor {
            n,
            signature,
            entries: vec![Rat::zero(); len],
        }
    }

    pub fn from_entries(n: usize, signature: Vec<Variance>, entries: Vec<Rat>) -> Result<Self> {
        let len = n.pow(signature.len() as u32);
        if entries.len() != len {
            return Err(Error::DimensionMismatch(entries.len(), len));
        }
        Ok(DenseTensor {
            n,
            signature,
            entries,
        })
    }

    pub fn from_fn(n: usize, signature: Vec<Variance>, mut f: impl FnMut(&[usize]) -> Rat) -> Self {
        let mut t = Self::zeros(n, signature);
        let mut idx = vec![0; t.rank()];
        for flat in 0..t.entries.len() {
            t.unflatten_into(flat, &mut idx);
            t.entries[flat] = f(&idx);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> &[Variance] {
        &self.signature
    }

    /// Number of slots.
    pub fn rank(&self) -> usize {
        self.signature.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Rat] {
        &mut self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, v: Variance) -> usize {
        self.signature.iter().filter(|&&s| s == v).count()
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    pub fn unflatten_into(&self, mut flat: usize, idx: &mut [usize]) {
        for slot in (0..idx.len()).rev() {
            idx[slot] = flat % self.n;
            flat /= self.n;
        }
    }

    pub fn unflatten(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.rank()];
        self.unflatten_into(flat, &mut idx);
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Rat {
        &self.entries[self.flatten(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Rat) {
        let f = self.flatten(idx);
        self.entries[f] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.signature != other.signature {
            return Err(Error::InvalidInput("tensor signatures differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(DenseTensor {
            n: self.n,
            signature: self.signature.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        Ok(DenseTensor {
            n: self.n,
            signature: self.signature.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, c: &Rat) -> Self {
        DenseTensor {
            n: self.n,
            signature: self.signature.clone(),
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Rat, other: &Self) -> Result<()> {
        self.check_same_space(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                *a += c * b;
            }
        }
        Ok(())
    }

    /// Returns the tensor with slots reordered: slot `s` of the result is
    /// slot `perm[s]` of `self`.
    pub fn permute_slots(&self, perm: &[usize]) -> Result<Self> {
        let r = self.rank();
        let mut seen = vec![false; r];
        if perm.len() != r || perm.iter().any(|&p| p >= r || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidInput(format!("{perm:?} is not a slot permutation")));
        }
        let sig = perm.iter().map(|&p| self.signature[p]).collect();
        let mut src = vec![0; r];
        Ok(DenseTensor::from_fn(self.n, sig, |idx| {
            for (s, &p) in perm.iter().enumerate() {
                src[p] = idx[s];
            }
            self.get(&src).clone()
        }))
    }

    /// Contracts slot `slot` with a matrix: `out[.., i, ..] = Σ_c m[i][c] t[.., c, ..]`.
    fn apply_to_slot(&self, slot: usize, m: &Matrix) -> Self {
        let n = self.n;
        let stride = n.pow((self.rank() - 1 - slot) as u32);
        let mut out = DenseTensor::zeros(n, self.signature.clone());
        for flat in 0..self.entries.len() {
            let v = &self.entries[flat];
            if v.is_zero() {
                continue;
            }
            let c = (flat / stride) % n;
            let base = flat - c * stride;
            for i in 0..n {
                let coef = &m[(i, c)];
                if !coef.is_zero() {
                    out.entries[base + i * stride] += coef * v;
                }
            }
        }
        out
    }

    fn check_cov_slots(&self, slots: &[usize]) -> Result<()> {
        for (pos, &s) in slots.iter().enumerate() {
            if s >= self.rank() {
                return Err(Error::InvalidInput(format!("slot {s} out of range")));
            }
            if self.signature[s] != Variance::Cov {
                return Err(Error::InvalidInput(format!("slot {s} is not covariant")));
            }
            if slots[..pos].contains(&s) {
                return Err(Error::InvalidInput(format!("slot {s} repeated")));
            }
        }
        Ok(())
    }

    /// Canonical flat index: the values in `slots` sorted ascending.
    fn sorted_key(&self, flat: usize, slots: &[usize], idx: &mut [usize], vals: &mut Vec<usize>) -> usize {
        self.unflatten_into(flat, idx);
        vals.clear();
        vals.extend(slots.iter().map(|&s| idx[s]));
        vals.sort_unstable();
        for (&s, &v) in slots.iter().zip(vals.iter()) {
            idx[s] = v;
        }
        self.flatten(idx)
    }

    /// Whether `self` is invariant under all permutations of `slots`.
    pub fn is_symmetric_in(&self, slots: &[usize]) -> bool {
        slots.windows(2).all(|w| {
            let mut perm: Vec<usize> = (0..self.rank()).collect();
            perm.swap(w[0], w[1]);
            self.permute_slots(&perm).map(|t| &t == self).unwrap_or(false)
        })
    }

    /// Whether `self` changes sign under transpositions of `slots`.
    pub fn is_antisymmetric_in(&self, slots: &[usize]) -> bool {
        slots.windows(2).all(|w| {
            let mut perm: Vec<usize> = (0..self.rank()).collect();
            perm.swap(w[0], w[1]);
            self.permute_slots(&perm)
                .map(|t| t.add(self).map(|s| s.is_zero()).unwrap_or(false))
                .unwrap_or(false)
        })
    }
}

/// Average of `t` over all permutations of the given covariant slots.
pub fn symmetrize(t: &DenseTensor, slots: &[usize]) -> Result<DenseTensor> {
    t.check_cov_slots(slots)?;
    if slots.len() < 2 {
        return Ok(t.clone());
    }
    // Each distinct arrangement of the slot values occurs exactly once in the
    // flat enumeration, so the orbit average is sum / count per sorted key.
    let mut sums: HashMap<usize, (Rat, u64)> = HashMap::new();
    let mut idx = vec![0; t.rank()];
    let mut vals = Vec::with_capacity(slots.len());
    let mut keys = Vec::with_capacity(t.len());
    for flat in 0..t.len() {
        let key = t.sorted_key(flat, slots, &mut idx, &mut vals);
        keys.push(key);
        let e = sums.entry(key).or_insert_with(|| (Rat::zero(), 0));
        e.0 += &t.entries[flat];
        e.1 += 1;
    }
    let mut out = DenseTensor::zeros(t.n, t.signature.clone());
    for (flat, key) in keys.into_iter().enumerate() {
        let (s, c) = &sums[&key];
        if !s.is_zero() {
            out.entries[flat] = s / rat::rat(*c as i64);
        }
    }
    Ok(out)
}

/// Signed average of `t` over all permutations of the given slots.
pub fn antisymmetrize(t: &DenseTensor, slots: &[usize]) -> Result<DenseTensor> {
    for &s in slots {
        if s >= t.rank() {
            return Err(Error::InvalidInput(format!("slot {s} out of range")));
        }
    }
    let k = slots.len();
    let mut out = DenseTensor::zeros(t.n, t.signature.clone());
    let norm = rat::factorial(k);
    for perm in itertools::Itertools::permutations(0..k, k) {
        let sign = permutation_sign(&perm);
        let mut slot_perm: Vec<usize> = (0..t.rank()).collect();
        for (a, &b) in perm.iter().enumerate() {
            slot_perm[slots[a]] = slots[b];
        }
        let moved = t.permute_slots(&slot_perm)?;
        out.add_scaled(&(rat::rat(sign) / &norm), &moved)?;
    }
    Ok(out)
}

pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// An element of `C_m` (or of the symmetric variant when `symmetric`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalTensor {
    order: usize,
    symmetric: bool,
    tensor: DenseTensor,
}

impl NormalTensor {
    /// Validates all normal-tensor symmetries.
    pub fn new(tensor: DenseTensor, order: usize, symmetric: bool) -> Result<Self> {
        check_partial_symmetry(&tensor, order, symmetric)?;
        if !total_symmetrization_vanishes(&tensor) {
            return Err(Error::SymmetryViolation(format!(
                "symmetrization over all {} covariant slots is nonzero",
                order + 2
            )));
        }
        Ok(NormalTensor {
            order,
            symmetric,
            tensor,
        })
    }

    pub fn zero(n: usize, order: usize, symmetric: bool) -> Self {
        NormalTensor {
            order,
            symmetric,
            tensor: DenseTensor::zeros(n, normal_signature(order)),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn n(&self) -> usize {
        self.tensor.n
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> DenseTensor {
        self.tensor
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero()
    }
}

/// Checks the signature and the symmetries a normal tensor must have before
/// projection: last `m` slots symmetric, first two symmetric if requested.
fn check_partial_symmetry(t: &DenseTensor, m: usize, symmetric: bool) -> Result<()> {
    if t.signature != normal_signature(m) {
        return Err(Error::SymmetryViolation(format!(
            "expected signature (contra, cov x {})",
            m + 2
        )));
    }
    let tail: Vec<usize> = (3..m + 3).collect();
    if !t.is_symmetric_in(&tail) {
        return Err(Error::SymmetryViolation(format!(
            "not symmetric in the last {m} covariant slots"
        )));
    }
    if symmetric && !t.is_symmetric_in(&[1, 2]) {
        return Err(Error::SymmetryViolation(
            "not symmetric in the first two covariant slots".into(),
        ));
    }
    Ok(())
}

fn total_symmetrization_vanishes(t: &DenseTensor) -> bool {
    let slots: Vec<usize> = (1..t.rank()).collect();
    let mut sums: HashMap<usize, Rat> = HashMap::new();
    let mut idx = vec![0; t.rank()];
    let mut vals = Vec::new();
    for flat in 0..t.len() {
        if t.entries[flat].is_zero() {
            continue;
        }
        let key = t.sorted_key(flat, &slots, &mut idx, &mut vals);
        *sums.entry(key).or_insert_with(Rat::zero) += &t.entries[flat];
    }
    sums.values().all(Zero::is_zero)
}

/// Full symmetrization of the `m + 2` covariant slots of a `(1, m+2)` tensor.
pub fn total_symmetrization(t: &DenseTensor) -> Result<DenseTensor> {
    let slots: Vec<usize> = (1..t.rank()).collect();
    symmetrize(t, &slots)
}

/// `t - sym(t)`: the projection onto `C_m` along totally symmetric tensors.
pub fn project_normal(t: &DenseTensor, m: usize, symmetric: bool) -> Result<NormalTensor> {
    check_partial_symmetry(t, m, symmetric)?;
    let sym = total_symmetrization(t)?;
    let proj = t.sub(&sym)?;
    debug_assert!(total_symmetrization_vanishes(&proj));
    Ok(NormalTensor {
        order: m,
        symmetric,
        tensor: proj,
    })
}

/// Closed-form dimension of `C_m` (`symmetric = false`) or of its symmetric
/// variant: `n·a·C(n+m-1, m) − n·C(n+m+1, m+2)` with `a = n(n+1)/2` or `n²`.
pub fn dim_formula(n: usize, m: usize, symmetric: bool) -> usize {
    assert!(n >= 1, "dimension must be positive");
    let first_pair = if symmetric { n * (n + 1) / 2 } else { n * n };
    let domain = n * first_pair * binomial(n + m - 1, m);
    let image = n * binomial(n + m + 1, m + 2);
    domain - image
}

/// A basis vector of the partially symmetric domain `V ⊗ (S²V* or V*⊗V*) ⊗ S^mV*`:
/// the sum of all index tuples in its symmetry orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
struct OrbitElement {
    upper: usize,
    pair: (usize, usize),
    tail: Vec<usize>,
}

fn sorted_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    itertools::Itertools::combinations_with_replacement(0..n, len).collect()
}

fn domain_orbits(n: usize, m: usize, symmetric: bool) -> Vec<OrbitElement> {
    let tails = if m == 0 { vec![Vec::new()] } else { sorted_tuples(n, m) };
    let mut out = Vec::new();
    for upper in 0..n {
        for i in 0..n {
            for j in 0..n {
                if symmetric && j < i {
                    continue;
                }
                for tail in &tails {
                    out.push(OrbitElement {
                        upper,
                        pair: (i, j),
                        tail: tail.clone(),
                    });
                }
            }
        }
    }
    out
}

fn multiset_arrangements(sorted: &[usize]) -> u64 {
    let mut count = factorial_u64(sorted.len());
    for (_, group) in &itertools::Itertools::chunk_by(sorted.iter(), |&&v| v) {
        count /= factorial_u64(group.count());
    }
    count
}

fn factorial_u64(k: usize) -> u64 {
    (1..=k as u64).product()
}

impl OrbitElement {
    fn support_size(&self, symmetric: bool) -> u64 {
        let pairs = if symmetric && self.pair.0 != self.pair.1 { 2 } else { 1 };
        pairs * multiset_arrangements(&self.tail)
    }

    fn all_slots_sorted(&self) -> Vec<usize> {
        let mut v = vec![self.pair.0, self.pair.1];
        v.extend_from_slice(&self.tail);
        v.sort_unstable();
        v
    }

    fn to_tensor(&self, n: usize, m: usize, symmetric: bool, coeff: &Rat, out: &mut DenseTensor) {
        let mut pairs = vec![self.pair];
        if symmetric && self.pair.0 != self.pair.1 {
            pairs.push((self.pair.1, self.pair.0));
        }
        let tails: Vec<Vec<usize>> = if m == 0 {
            vec![Vec::new()]
        } else {
            itertools::Itertools::permutations(self.tail.iter().copied(), m)
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect()
        };
        let mut idx = Vec::with_capacity(m + 3);
        for &(i, j) in &pairs {
            for tail in &tails {
                idx.clear();
                idx.extend([self.upper, i, j]);
                idx.extend_from_slice(tail);
                let f = out.flatten(&idx);
                out.entries[f] += coeff;
            }
        }
        debug_assert_eq!(out.n, n);
    }
}

/// Matrix of the total symmetrization from the partially symmetric domain
/// (orbit-sum basis, columns) to `V ⊗ S^{m+2}V*` (rows indexed by upper
/// index and sorted multiset). Entry = value of the symmetrized orbit sum at
/// the sorted index tuple.
fn symmetrization_matrix(n: usize, m: usize, symmetric: bool) -> (Vec<OrbitElement>, Matrix) {
    let domain = domain_orbits(n, m, symmetric);
    let targets = sorted_tuples(n, m + 2);
    let row_of: HashMap<(usize, Vec<usize>), usize> = (0..n)
        .flat_map(|k| targets.iter().map(move |t| (k, t.clone())))
        .enumerate()
        .map(|(r, key)| (key, r))
        .collect();
    let mut mat = Matrix::zeros(row_of.len(), domain.len());
    for (col, e) in domain.iter().enumerate() {
        let multiset = e.all_slots_sorted();
        let value = rat::frac(
            e.support_size(symmetric) as i64,
            multiset_arrangements(&multiset) as i64,
        );
        mat[(row_of[&(e.upper, multiset)], col)] = value;
    }
    (domain, mat)
}

/// Dimension of the normal space computed as the kernel rank of the
/// symmetrization map (independent of [`dim_formula`]).
pub fn normal_dim_by_rank(n: usize, m: usize, symmetric: bool) -> usize {
    let (domain, mat) = symmetrization_matrix(n, m, symmetric);
    domain.len() - mat.rank()
}

/// Exact basis of the normal space, one vector per free column of the
/// row-reduced symmetrization matrix.
pub fn normal_basis(n: usize, m: usize, symmetric: bool) -> Vec<NormalTensor> {
    let (domain, mat) = symmetrization_matrix(n, m, symmetric);
    let ech: Echelon = mat.echelon();
    ech.kernel()
        .into_iter()
        .map(|v| {
            let mut t = DenseTensor::zeros(n, normal_signature(m));
            for (coef, e) in v.iter().zip(&domain) {
                if !coef.is_zero() {
                    e.to_tensor(n, m, symmetric, coef, &mut t);
                }
            }
            NormalTensor {
                order: m,
                symmetric,
                tensor: t,
            }
        })
        .collect()
}

/// An invertible `n × n` rational matrix with its cached inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlElement {
    matrix: Matrix,
    inverse: Matrix,
}

impl GlElement {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(matrix.rows(), matrix.cols()));
        }
        let inverse = matrix.inverse().ok_or(Error::SingularLinearPart)?;
        Ok(GlElement { matrix, inverse })
    }

    pub fn identity(n: usize) -> Self {
        GlElement {
            matrix: Matrix::identity(n),
            inverse: Matrix::identity(n),
        }
    }

    pub fn homothety(n: usize, lambda: Rat) -> Result<Self> {
        Self::new(Matrix::scalar(n, lambda))
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    pub fn mul(&self, other: &GlElement) -> Result<GlElement> {
        Ok(GlElement {
            matrix: self.matrix.mul(&other.matrix)?,
            inverse: other.inverse.mul(&self.inverse)?,
        })
    }

    pub fn inverse(&self) -> GlElement {
        GlElement {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }
}

/// Left action: contravariant slots by `g`, covariant slots by pullback
/// along `g^{-1}`.
pub fn gl_act(g: &GlElement, t: &DenseTensor) -> Result<DenseTensor> {
    if g.n() != t.n {
        return Err(Error::DimensionMismatch(g.n(), t.n));
    }
    let cov = g.inverse.transpose();
    let mut out = t.clone();
    for (slot, v) in t.signature.iter().enumerate() {
        out = match v {
            Variance::Contra => out.apply_to_slot(slot, &g.matrix),
            Variance::Cov => out.apply_to_slot(slot, &cov),
        };
    }
    Ok(out)
}

/// Derivative of [`gl_act`] at the identity in direction `a`.
pub fn gl_infinitesimal_act(a: &Matrix, t: &DenseTensor) -> Result<DenseTensor> {
    if a.rows() != t.n || a.cols() != t.n {
        return Err(Error::DimensionMismatch(a.rows(), t.n));
    }
    let cov = a.transpose().scale(&-Rat::one());
    let mut out = DenseTensor::zeros(t.n, t.signature.clone());
    for (slot, v) in t.signature.iter().enumerate() {
        let term = match v {
            Variance::Contra => t.apply_to_slot(slot, a),
            Variance::Cov => t.apply_to_slot(slot, &cov),
        };
        out.add_scaled(&Rat::one(), &term)?;
    }
    Ok(out)
}

pub fn gl_act_normal(g: &GlElement, t: &NormalTensor) -> Result<NormalTensor> {
    Ok(NormalTensor {
        order: t.order,
        symmetric: t.symmetric,
        tensor: gl_act(g, &t.tensor)?,
    })
}

/// Standard basis of `gl_n`: the matrix units `E_{ab}`, row-major.
pub fn gl_basis(n: usize) -> Vec<Matrix> {
    (0..n * n)
        .map(|k| {
            let mut e = Matrix::zeros(n, n);
            e[(k / n, k % n)] = Rat::one();
            e
        })
        .collect()
}

/// Dimension of the stabilizer subalgebra `{A ∈ gl_n : A·t = 0 for all t}`.
pub fn isotropy_dimension(n: usize, tensors: &[&DenseTensor]) -> Result<usize> {
    let basis = gl_basis(n);
    let mut columns = Vec::with_capacity(basis.len());
    for a in &basis {
        let mut col = Vec::new();
        for t in tensors {
            col.extend(gl_infinitesimal_act(a, t)?.entries);
        }
        columns.push(col);
    }
    // rank of the (entries × n²) matrix equals the rank of its transpose
    let len = columns.first().map_or(0, Vec::len);
    let rank = crate::linalg::rank_of(len, columns);
    Ok(n * n - rank)
}
