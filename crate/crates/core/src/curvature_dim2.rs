//! Curvature-like tensors, their identification with `C̃_1`, the Ricci map
//! and the isotropy of pairs `(T₂, ω₂)` in dimension two.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inertia, Echelon, Matrix};
use crate::rat::{frac, rat, Rat};
use crate::tensors::{isotropy_dimension, DenseTensor, NormalTensor, Variance};

fn curvature_signature() -> Vec<Variance> {
    vec![Variance::Contra, Variance::Cov, Variance::Cov, Variance::Cov]
}

fn two_form_signature() -> Vec<Variance> {
    vec![Variance::Cov, Variance::Cov]
}

/// `R^k_{ijl}`, antisymmetric in `(i, j)` and satisfying the linear Bianchi
/// identity `R^k_{ijl} + R^k_{lij} + R^k_{jli} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureLike {
    tensor: DenseTensor,
}

fn satisfies_bianchi(t: &DenseTensor) -> bool {
    (0..t.len()).all(|f| {
        let idx = t.unflatten(f);
        let (k, i, j, l) = (idx[0], idx[1], idx[2], idx[3]);
        (t.get(&[k, i, j, l]) + t.get(&[k, l, i, j]) + t.get(&[k, j, l, i])).is_zero()
    })
}

impl CurvatureLike {
    pub fn new(tensor: DenseTensor) -> Result<Self> {
        if tensor.signature() != curvature_signature().as_slice() {
            return Err(Error::SymmetryViolation("expected a (1,3) tensor".into()));
        }
        if !tensor.is_antisymmetric_in(&[1, 2]) {
            return Err(Error::SymmetryViolation(
                "not antisymmetric in the first two covariant slots".into(),
            ));
        }
        if !satisfies_bianchi(&tensor) {
            return Err(Error::SymmetryViolation("Bianchi identity fails".into()));
        }
        Ok(CurvatureLike { tensor })
    }

    pub fn zero(n: usize) -> Self {
        CurvatureLike {
            tensor: DenseTensor::zeros(n, curvature_signature()),
        }
    }

    pub fn n(&self) -> usize {
        self.tensor.n()
    }

    pub fn tensor(&self) -> &DenseTensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> DenseTensor {
        self.tensor
    }
}

/// `R^k_{ijl} = Γ^k_{jl;i} − Γ^k_{il;j}`.
pub fn c1_to_curv(t: &NormalTensor) -> Result<CurvatureLike> {
    if t.order() != 1 || !t.symmetric() {
        return Err(Error::SymmetryViolation(
            "expected a symmetric normal tensor of order 1".into(),
        ));
    }
    let g = t.tensor();
    let r = DenseTensor::from_fn(g.n(), curvature_signature(), |idx| {
        let (k, i, j, l) = (idx[0], idx[1], idx[2], idx[3]);
        g.get(&[k, j, l, i]) - g.get(&[k, i, l, j])
    });
    CurvatureLike::new(r)
        .map_err(|e| Error::InternalMismatch(format!("image is not curvature-like: {e}")))
}

/// `Γ^k_{ij;l} = (R^k_{lij} + R^k_{lji}) / 3`.
pub fn curv_to_c1(r: &CurvatureLike) -> Result<NormalTensor> {
    let t = &r.tensor;
    let third = frac(1, 3);
    let g = DenseTensor::from_fn(t.n(), crate::tensors::normal_signature(1), |idx| {
        let (k, i, j, l) = (idx[0], idx[1], idx[2], idx[3]);
        (t.get(&[k, l, i, j]) + t.get(&[k, l, j, i])) * &third
    });
    NormalTensor::new(g, 1, true)
}

/// Exact basis of the curvature-like tensors, as the kernel of the
/// antisymmetry and Bianchi constraints on `n⁴` unknowns.
pub fn curvature_like_basis(n: usize) -> Vec<CurvatureLike> {
    let template = DenseTensor::zeros(n, curvature_signature());
    let len = template.len();
    let mut rows = Vec::new();
    for f in 0..len {
        let idx = template.unflatten(f);
        let (k, i, j, l) = (idx[0], idx[1], idx[2], idx[3]);
        let mut anti = vec![Rat::zero(); len];
        anti[template.flatten(&[k, i, j, l])] += rat(1);
        anti[template.flatten(&[k, j, i, l])] += rat(1);
        rows.push(anti);
        let mut bianchi = vec![Rat::zero(); len];
        for pos in [[k, i, j, l], [k, l, i, j], [k, j, l, i]] {
            bianchi[template.flatten(&pos)] += rat(1);
        }
        rows.push(bianchi);
    }
    Echelon::from_rows(len, rows)
        .kernel()
        .into_iter()
        .map(|v| CurvatureLike {
            tensor: DenseTensor::from_entries(n, curvature_signature(), v).expect("n⁴ entries"),
        })
        .collect()
}

/// `ρ(R)_{ij} = Σ_k R^k_{ikj}`.
pub fn ricci(r: &CurvatureLike) -> DenseTensor {
    let t = &r.tensor;
    DenseTensor::from_fn(t.n(), two_form_signature(), |idx| {
        (0..t.n()).fold(Rat::zero(), |acc, k| acc + t.get(&[k, idx[0], k, idx[1]]))
    })
}

/// Symmetric and antisymmetric parts `(ρ_s, ρ_a)` of the Ricci tensor.
pub fn ricci_split(r: &CurvatureLike) -> (DenseTensor, DenseTensor) {
    let rho = ricci(r);
    let swapped = rho.permute_slots(&[1, 0]).expect("two slots");
    let half = frac(1, 2);
    let s = rho.add(&swapped).expect("same shape").scale(&half);
    let a = rho.sub(&swapped).expect("same shape").scale(&half);
    (s, a)
}

/// Columns: `(ρ_s, ρ_a)` of each curvature-like basis tensor in the
/// coordinates `(S_00, S_01, S_11, A_01)`. Only meaningful for `n = 2`.
pub fn ricci_matrix(basis: &[CurvatureLike]) -> Result<Matrix> {
    let mut rows = vec![Vec::with_capacity(basis.len()); 4];
    for b in basis {
        if b.n() != 2 {
            return Err(Error::DimensionMismatch(b.n(), 2));
        }
        let (s, a) = ricci_split(b);
        let coords = [
            s.get(&[0, 0]).clone(),
            s.get(&[0, 1]).clone(),
            s.get(&[1, 1]).clone(),
            a.get(&[0, 1]).clone(),
        ];
        for (row, c) in rows.iter_mut().zip(coords) {
            row.push(c);
        }
    }
    Matrix::from_rows(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IsotropyLabel {
    O2,
    O11,
    #[serde(rename = "larger")]
    Larger,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairIsotropy {
    pub lie_dim: usize,
    pub label: IsotropyLabel,
    /// `(positive, negative, zero)` of `T₂`.
    pub inertia: (usize, usize, usize),
}

/// Stabilizer dimension in `gl_2` of a symmetric `T₂` and a 2-form `ω₂`;
/// the label records the signature of `T₂`.
pub fn pair_isotropy(t2: &DenseTensor, w2: &DenseTensor) -> Result<PairIsotropy> {
    for t in [t2, w2] {
        if t.n() != 2 {
            return Err(Error::DimensionMismatch(t.n(), 2));
        }
        if t.signature() != two_form_signature().as_slice() {
            return Err(Error::InvalidInput("expected covariant 2-tensors".into()));
        }
    }
    if !t2.is_symmetric_in(&[0, 1]) {
        return Err(Error::SymmetryViolation("T₂ must be symmetric".into()));
    }
    if !w2.is_antisymmetric_in(&[0, 1]) {
        return Err(Error::SymmetryViolation("ω₂ must be antisymmetric".into()));
    }
    let lie_dim = isotropy_dimension(2, &[t2, w2])?;
    let m = Matrix::from_rows(vec![
        vec![t2.get(&[0, 0]).clone(), t2.get(&[0, 1]).clone()],
        vec![t2.get(&[1, 0]).clone(), t2.get(&[1, 1]).clone()],
    ])?;
    let inertia = inertia(&m)?;
    let label = match inertia {
        (2, 0, 0) | (0, 2, 0) => IsotropyLabel::O2,
        (1, 1, 0) => IsotropyLabel::O11,
        _ => IsotropyLabel::Larger,
    };
    Ok(PairIsotropy {
        lie_dim,
        label,
        inertia,
    })
}

/// Covariant 2-tensor from a row-major 2×2 array of integers.
pub fn two_tensor(entries: [[i64; 2]; 2]) -> DenseTensor {
    DenseTensor::from_fn(2, two_form_signature(), |idx| {
        Rat::from_integer(entries[idx[0]][idx[1]].into())
    })
}
