//! Seeded random instances with small exact entries.
//!
//! Every generator draws integers from `[-5, 5]` (denominators from `1..=3`
//! where rational entries are wanted) so exact computations stay fast.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::connections::ConnectionJet;
use crate::error::Result;
use crate::linalg::Matrix;
use crate::rat::{self, Rat};
use crate::reduction::NormalTensorTuple;
use crate::series::{DiffeoJet, MultiIndex, TruncatedSeries};
use crate::tensors::{normal_signature, project_normal, DenseTensor, GlElement, NormalTensor};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for sample `index` of a run seeded with `seed`.
pub fn derived(seed: u64, index: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn small_int(rng: &mut impl Rng) -> Rat {
    rat::rat(rng.gen_range(-5..=5))
}

pub fn small_rational(rng: &mut impl Rng) -> Rat {
    rat::frac(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

/// Random series with terms of degree `min_degree..=order`.
pub fn series(n: usize, order: usize, min_degree: usize, rng: &mut impl Rng) -> TruncatedSeries {
    let terms: Vec<(MultiIndex, Rat)> = (min_degree..=order)
        .flat_map(|d| MultiIndex::all_of_degree(n, d as u32))
        .map(|idx| (idx, small_int(rng)))
        .collect();
    TruncatedSeries::from_terms(n, order, terms).expect("indices have length n")
}

pub fn connection(n: usize, r: usize, symmetric: bool, rng: &mut impl Rng) -> ConnectionJet {
    let mut gamma = vec![TruncatedSeries::zero(n, r); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if symmetric && j < i {
                    gamma[(k * n + i) * n + j] = gamma[(k * n + j) * n + i].clone();
                } else {
                    gamma[(k * n + i) * n + j] = series(n, r, 0, rng);
                }
            }
        }
    }
    ConnectionJet::new(n, r, symmetric, gamma).expect("generated jet is consistent")
}

pub fn invertible_matrix(n: usize, rational: bool, rng: &mut impl Rng) -> Matrix {
    loop {
        let rows: Vec<Vec<Rat>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| if rational { small_rational(rng) } else { small_int(rng) })
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(rows).expect("square");
        if m.inverse().is_some() {
            return m;
        }
    }
}

pub fn gl_element(n: usize, rng: &mut impl Rng) -> GlElement {
    GlElement::new(invertible_matrix(n, true, rng)).expect("invertible by construction")
}

/// Random jet of order `order`; with `identity_linear` the linear part is `I`.
pub fn diffeo(n: usize, order: usize, identity_linear: bool, rng: &mut impl Rng) -> DiffeoJet {
    let linear = if identity_linear {
        Matrix::identity(n)
    } else {
        invertible_matrix(n, false, rng)
    };
    let components = (0..n)
        .map(|k| {
            let mut s = if order >= 2 {
                series(n, order, 2, rng)
            } else {
                TruncatedSeries::zero(n, order)
            };
            for i in 0..n {
                s.set(MultiIndex::unit(n, i), linear[(k, i)].clone());
            }
            s
        })
        .collect();
    DiffeoJet::new(components).expect("invertible linear part")
}

/// Integer tensor with the partial symmetries required of `C_m` inputs.
pub fn partially_symmetric(n: usize, m: usize, symmetric: bool, rng: &mut impl Rng) -> DenseTensor {
    let mut values: HashMap<Vec<usize>, Rat> = HashMap::new();
    DenseTensor::from_fn(n, normal_signature(m), |idx| {
        let mut key = idx.to_vec();
        key[3..].sort_unstable();
        if symmetric && key[2] < key[1] {
            key.swap(1, 2);
        }
        values.entry(key).or_insert_with(|| small_int(rng)).clone()
    })
}

pub fn normal_tensor(n: usize, m: usize, symmetric: bool, rng: &mut impl Rng) -> NormalTensor {
    project_normal(&partially_symmetric(n, m, symmetric, rng), m, symmetric)
        .expect("input has the required partial symmetries")
}

pub fn normal_tuple(n: usize, r: usize, symmetric: bool, rng: &mut impl Rng) -> Result<NormalTensorTuple> {
    NormalTensorTuple::new(
        n,
        symmetric,
        (0..=r).map(|m| normal_tensor(n, m, symmetric, rng)).collect(),
    )
}
