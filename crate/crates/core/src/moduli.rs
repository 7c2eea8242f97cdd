//! Generic dimensions of the moduli of connection jets and their Poincaré
//! coefficients, with the generic isotropy estimated by seeded sampling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::random;
use crate::tensors::{dim_formula, isotropy_dimension, DenseTensor, NormalTensor};

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as i128 / (j + 1) as i128;
    }
    acc as i64
}

/// Orders `m` whose normal spaces enter the moduli of order `r`.
fn orders(r: usize, symmetric: bool) -> std::ops::RangeInclusive<usize> {
    if symmetric {
        1..=r
    } else {
        0..=r
    }
}

/// Stabilizer dimension in `gl_n` of one seeded random tuple.
fn sample_isotropy(n: usize, r: usize, symmetric: bool, seed: u64, index: u64) -> Result<usize> {
    let mut rng = random::derived(seed, index);
    let tuple: Vec<NormalTensor> = orders(r, symmetric)
        .map(|m| random::normal_tensor(n, m, symmetric, &mut rng))
        .collect();
    let refs: Vec<&DenseTensor> = tuple.iter().map(NormalTensor::tensor).collect();
    isotropy_dimension(n, &refs)
}

/// Minimum stabilizer dimension over `samples` random integer tuples in
/// `C_1 × … × C_r` (`C_0 × … × C_r` without symmetry).
pub fn generic_isotropy(n: usize, r: usize, symmetric: bool, samples: usize, seed: u64) -> Result<usize> {
    if samples == 0 {
        return Err(Error::InvalidInput("at least one sample is needed".into()));
    }
    let dims = (0..samples as u64)
        .into_par_iter()
        .map(|s| sample_isotropy(n, r, symmetric, seed, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(dims.into_iter().min().expect("nonempty"))
}

/// `i = 1` at `(n, r) = (2, 1)`, else `0`: the correction `δ²_n δ¹_r`.
pub fn delta_correction(n: usize, r: usize) -> usize {
    usize::from(n == 2 && r == 1)
}

/// Stated generic isotropy for symmetric jets. At `r = 0` nothing is left to
/// act on and the whole of `gl_n` stabilizes.
pub fn isotropy_rule(n: usize, r: usize) -> usize {
    if n == 1 || r == 0 {
        n * n
    } else {
        delta_correction(n, r)
    }
}

/// `Σ dim C_m − (n² − i)`.
pub fn generic_dimension_direct(n: usize, r: usize, symmetric: bool, i: usize) -> i64 {
    let dims: usize = orders(r, symmetric).map(|m| dim_formula(n, m, symmetric)).sum();
    dims as i64 - (n * n) as i64 + i as i64
}

/// `n·a·Σ_{m=0}^{r} C(n+m−1, n−1) − n·Σ_{m=1}^{r+2} C(n+m−1, n−1) + i` with
/// `a = n(n+1)/2` (symmetric) or `n²`.
pub fn generic_dimension_rearranged(n: usize, r: usize, symmetric: bool, i: usize) -> i64 {
    let a = if symmetric { n * (n + 1) / 2 } else { n * n } as i64;
    let n_ = n as i64;
    let first: i64 = (0..=r).map(|m| binomial(n + m - 1, n - 1)).sum();
    let second: i64 = (1..=r + 2).map(|m| binomial(n + m - 1, n - 1)).sum();
    n_ * a * first - n_ * second + i as i64
}

/// Generic dimension of the moduli of `r`-jets with generic isotropy `i`.
/// Both closed forms are evaluated and must agree.
pub fn generic_dimension(n: usize, r: usize, symmetric: bool, i: usize) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if n == 1 {
        return Ok(0);
    }
    let direct = generic_dimension_direct(n, r, symmetric, i);
    let rearranged = generic_dimension_rearranged(n, r, symmetric, i);
    if direct != rearranged {
        return Err(Error::InternalMismatch(format!(
            "generic dimension: direct form {direct}, rearranged form {rearranged}"
        )));
    }
    Ok(direct)
}

/// Samples and seed used for isotropy where no closed rule is available.
pub const DEFAULT_SAMPLES: usize = 5;
pub const DEFAULT_SEED: u64 = 0;

/// Generic dimensions for `r = 0..=r_max`. Symmetric jets use the stated
/// isotropy rule; otherwise the isotropy is sampled, reusing the fact that
/// it can only shrink as `r` grows.
pub fn poincare_coefficients(n: usize, r_max: usize, symmetric: bool) -> Result<Vec<i64>> {
    if n == 1 {
        return Ok(vec![0; r_max + 1]);
    }
    let mut out = Vec::with_capacity(r_max + 1);
    let mut last_i = usize::MAX;
    for r in 0..=r_max {
        let i = if symmetric {
            isotropy_rule(n, r)
        } else if last_i == 0 {
            0
        } else {
            generic_isotropy(n, r, false, DEFAULT_SAMPLES, DEFAULT_SEED)?
        };
        last_i = i;
        out.push(generic_dimension(n, r, symmetric, i)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliReport {
    pub n: usize,
    pub r: usize,
    pub symmetric: bool,
    /// `dim C_m` for `m = 0..=r`.
    pub normal_dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub sampled_isotropy: usize,
    /// Stated value for symmetric jets; absent otherwise.
    pub rule_isotropy: Option<usize>,
    pub isotropy_agrees: Option<bool>,
    /// Computed with the sampled isotropy.
    pub generic_dimension: i64,
    pub poincare: Vec<i64>,
}

pub fn moduli_report(n: usize, r: usize, symmetric: bool, samples: usize, seed: u64) -> Result<ModuliReport> {
    let sampled = generic_isotropy(n, r, symmetric, samples, seed)?;
    let rule = symmetric.then(|| isotropy_rule(n, r));
    Ok(ModuliReport {
        n,
        r,
        symmetric,
        normal_dims: (0..=r).map(|m| dim_formula(n, m, symmetric)).collect(),
        samples,
        seed,
        sampled_isotropy: sampled,
        rule_isotropy: rule,
        isotropy_agrees: rule.map(|i| i == sampled),
        generic_dimension: generic_dimension(n, r, symmetric, sampled)?,
        poincare: poincare_coefficients(n, r, symmetric)?,
    })
}
