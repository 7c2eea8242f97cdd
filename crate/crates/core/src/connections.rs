//! Jets of linear connections in a chart and their transformation law.
//!
//! A [`ConnectionJet`] stores the Christoffel symbols `Γ^k_{ij}` as `n³`
//! truncated series of order `r`. Diffeomorphism jets act on the left:
//! [`transform`] returns the symbols of `τ·∇` in the chart `y = τ(x)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rat::Rat;
use crate::series::{compose_many, DiffeoJet, MultiIndex, TruncatedSeries};
use crate::tensors::{DenseTensor, Variance};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConnectionJet {
    n: usize,
    r: usize,
    symmetric: bool,
    gamma: Vec<TruncatedSeries>,
}

impl ConnectionJet {
    /// `gamma[(k * n + i) * n + j]` holds `Γ^k_{ij}`.
    pub fn new(n: usize, r: usize, symmetric: bool, gamma: Vec<TruncatedSeries>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if gamma.len() != n * n * n {
            return Err(Error::DimensionMismatch(gamma.len(), n * n * n));
        }
        for g in &gamma {
            if g.n() != n {
                return Err(Error::DimensionMismatch(g.n(), n));
            }
            if g.order() != r {
                return Err(Error::OrderMismatch(g.order(), r));
            }
        }
        if symmetric {
            for k in 0..n {
                for i in 0..n {
                    for j in i + 1..n {
                        if gamma[(k * n + i) * n + j] != gamma[(k * n + j) * n + i] {
                            return Err(Error::SymmetryViolation(format!(
                                "Γ^{k}_{{{i}{j}}} differs from Γ^{k}_{{{j}{i}}}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(ConnectionJet {
            n,
            r,
            symmetric,
            gamma,
        })
    }

    /// The flat connection `Γ = 0`.
    pub fn zero(n: usize, r: usize, symmetric: bool) -> Self {
        ConnectionJet {
            n,
            r,
            symmetric,
            gamma: vec![TruncatedSeries::zero(n, r); n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &TruncatedSeries {
        &self.gamma[(k * self.n + i) * self.n + j]
    }

    pub fn gammas(&self) -> &[TruncatedSeries] {
        &self.gamma
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.iter().all(TruncatedSeries::is_zero)
    }

    pub fn truncate(&self, r: usize) -> Result<Self> {
        Ok(ConnectionJet {
            n: self.n,
            r,
            symmetric: self.symmetric,
            gamma: self
                .gamma
                .iter()
                .map(|g| g.truncate(r))
                .collect::<Result<_>>()?,
        })
    }

    /// `Γ^k_{ij}(0)` as a `(1,2)` tensor.
    pub fn value_at_origin(&self) -> DenseTensor {
        let sig = vec![Variance::Contra, Variance::Cov, Variance::Cov];
        DenseTensor::from_fn(self.n, sig, |idx| {
            self.gamma(idx[0], idx[1], idx[2]).constant_term()
        })
    }
}

type SeriesMatrix = Vec<Vec<TruncatedSeries>>;

fn series_matmul(a: &SeriesMatrix, b: &SeriesMatrix, n: usize, order: usize) -> Result<SeriesMatrix> {
    let mut out = vec![vec![TruncatedSeries::zero(n, order); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            for k in 0..n {
                if a[i][k].is_zero() || b[k][j].is_zero() {
                    continue;
                }
                *cell = cell.add(&a[i][k].mul(&b[k][j])?)?;
            }
        }
    }
    Ok(out)
}

/// Inverse of a matrix of series with invertible constant part `l`.
fn series_matrix_inverse(m: &SeriesMatrix, l: &Matrix, n: usize, order: usize) -> Result<SeriesMatrix> {
    let linv = l.inverse().ok_or(Error::SingularLinearPart)?;
    let constant = |mat: &Matrix| -> SeriesMatrix {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| TruncatedSeries::constant(n, order, mat[(i, j)].clone()))
                    .collect()
            })
            .collect()
    };
    // K = -L^{-1} N with N the non-constant part of m
    let mut nonconst = m.clone();
    for row in nonconst.iter_mut() {
        for s in row.iter_mut() {
            s.set(MultiIndex::zero(n), Rat::zero());
        }
    }
    let k = series_matmul(&constant(&linv.scale(&-Rat::one())), &nonconst, n, order)?;
    let id = constant(&Matrix::identity(n));
    // Horner: S = I + K(I + K(...)), exact once K^{order+1} vanishes
    let mut s = id.clone();
    for _ in 0..order {
        s = series_matmul(&k, &s, n, order)?;
        for (i, row) in s.iter_mut().enumerate() {
            row[i] = row[i].add(&id[i][i])?;
        }
    }
    series_matmul(&s, &constant(&linv), n, order)
}

/// Christoffel symbols of `∇` in the chart `x = σ(y)`:
/// `Γ̃ = (Dσ)^{-1} [ (Γ∘σ)(Dσ, Dσ) + ∂²σ ]`.
pub fn pullback(sigma: &DiffeoJet, j: &ConnectionJet) -> Result<ConnectionJet> {
    let (n, r) = (j.n, j.r);
    if sigma.n() != n {
        return Err(Error::DimensionMismatch(sigma.n(), n));
    }
    if sigma.order() < r + 2 {
        return Err(Error::InsufficientOrder {
            needed: r + 2,
            have: sigma.order(),
        });
    }
    let sigma = if sigma.order() > r + 2 {
        sigma.truncate(r + 2)?
    } else {
        sigma.clone()
    };
    let comps = sigma.components();

    let mut d1: SeriesMatrix = Vec::with_capacity(n);
    let mut d2: Vec<SeriesMatrix> = Vec::with_capacity(n);
    for c in comps {
        let firsts: Vec<TruncatedSeries> = (0..n).map(|i| c.derivative(i)).collect::<Result<_>>()?;
        let seconds: SeriesMatrix = firsts
            .iter()
            .map(|f| (0..n).map(|jj| f.derivative(jj)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        d1.push(firsts.iter().map(|f| f.truncate(r)).collect::<Result<_>>()?);
        d2.push(seconds);
    }
    let composed = compose_many(&j.gamma, &sigma)?;
    let minv = series_matrix_inverse(&d1, sigma.linear_part(), n, r)?;

    let idx = |k: usize, i: usize, jj: usize| (k * n + i) * n + jj;
    let mut inner = vec![TruncatedSeries::zero(n, r); n * n * n];
    for a in 0..n {
        // half[b][jj] = Σ_c (Γ^a_{bc}∘σ) ∂_jj σ^c
        let mut half = vec![vec![TruncatedSeries::zero(n, r); n]; n];
        for (b, row) in half.iter_mut().enumerate() {
            for (jj, cell) in row.iter_mut().enumerate() {
                for c in 0..n {
                    let g = &composed[idx(a, b, c)];
                    if !g.is_zero() && !d1[c][jj].is_zero() {
                        cell.add_scaled(&Rat::one(), &g.mul(&d1[c][jj])?)?;
                    }
                }
            }
        }
        for i in 0..n {
            for jj in 0..n {
                if j.symmetric && jj < i {
                    inner[idx(a, i, jj)] = inner[idx(a, jj, i)].clone();
                    continue;
                }
                let mut acc = d2[a][i][jj].clone();
                for b in 0..n {
                    if !half[b][jj].is_zero() && !d1[b][i].is_zero() {
                        acc.add_scaled(&Rat::one(), &d1[b][i].mul(&half[b][jj])?)?;
                    }
                }
                inner[idx(a, i, jj)] = acc;
            }
        }
    }

    let mut gamma = vec![TruncatedSeries::zero(n, r); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for jj in 0..n {
                if j.symmetric && jj < i {
                    gamma[idx(k, i, jj)] = gamma[idx(k, jj, i)].clone();
                    continue;
                }
                let mut acc = TruncatedSeries::zero(n, r);
                for a in 0..n {
                    if !minv[k][a].is_zero() && !inner[idx(a, i, jj)].is_zero() {
                        acc.add_scaled(&Rat::one(), &minv[k][a].mul(&inner[idx(a, i, jj)])?)?;
                    }
                }
                gamma[idx(k, i, jj)] = acc;
            }
        }
    }
    ConnectionJet::new(n, r, j.symmetric, gamma)
}

/// Christoffel symbols of `τ·∇` in the chart `y = τ(x)`. Only the
/// `(r+2)`-jet of `τ` is used.
pub fn transform(tau: &DiffeoJet, j: &ConnectionJet) -> Result<ConnectionJet> {
    if tau.n() != j.n {
        return Err(Error::DimensionMismatch(tau.n(), j.n));
    }
    if tau.order() < j.r + 2 {
        return Err(Error::InsufficientOrder {
            needed: j.r + 2,
            have: tau.order(),
        });
    }
    let sigma = tau.truncate(j.r + 2)?.invert()?;
    pullback(&sigma, j)
}

/// Linear change of chart `y = g x`.
pub fn transform_linear(g: &Matrix, j: &ConnectionJet) -> Result<ConnectionJet> {
    transform(&DiffeoJet::linear(g, j.r + 2)?, j)
}

/// `T^k_{ij} = Γ^k_{ij}(0) − Γ^k_{ji}(0)`.
pub fn torsion_at_origin(j: &ConnectionJet) -> DenseTensor {
    let sig = vec![Variance::Contra, Variance::Cov, Variance::Cov];
    DenseTensor::from_fn(j.n, sig, |idx| {
        let (k, a, b) = (idx[0], idx[1], idx[2]);
        j.gamma(k, a, b).constant_term() - j.gamma(k, b, a).constant_term()
    })
}

/// `R^k_{ijl} = ∂_iΓ^k_{jl} − ∂_jΓ^k_{il} + Σ_s (Γ^k_{is}Γ^s_{jl} − Γ^k_{js}Γ^s_{il})` at 0.
pub fn curvature_at_origin(j: &ConnectionJet) -> Result<DenseTensor> {
    if j.r == 0 {
        return Err(Error::InsufficientOrder { needed: 1, have: 0 });
    }
    let n = j.n;
    let sig = vec![Variance::Contra, Variance::Cov, Variance::Cov, Variance::Cov];
    let c = |k, a, b| j.gamma(k, a, b).constant_term();
    let d = |k, a, b, v| j.gamma(k, a, b).coeff(&MultiIndex::unit(n, v));
    Ok(DenseTensor::from_fn(n, sig, |idx| {
        let (k, i, jj, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut v = d(k, jj, l, i) - d(k, i, l, jj);
        for s in 0..n {
            v += c(k, i, s) * c(s, jj, l) - c(k, jj, s) * c(s, i, l);
        }
        v
    }))
}

/// Jet with every coefficient `Γ^k_{ij}` equal to the constant `value`
/// at `(k, i, j)` and zero elsewhere; convenient in tests and examples.
pub fn single_constant(n: usize, r: usize, symmetric: bool, k: usize, i: usize, j: usize, value: Rat) -> Result<ConnectionJet> {
    let mut gamma = vec![TruncatedSeries::zero(n, r); n * n * n];
    gamma[(k * n + i) * n + j] = TruncatedSeries::constant(n, r, value.clone());
    if symmetric {
        gamma[(k * n + j) * n + i] = TruncatedSeries::constant(n, r, value);
    }
    ConnectionJet::new(n, r, symmetric, gamma)
}
