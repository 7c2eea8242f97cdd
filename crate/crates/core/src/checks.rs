//! The end-to-end self-test: every structural claim re-verified with fixed
//! seeds and exact arithmetic.

use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::Serialize;

use crate::connections::{curvature_at_origin, torsion_at_origin, transform};
use crate::curvature_dim2::{c1_to_curv, curv_to_c1, curvature_like_basis, ricci_matrix};
use crate::error::Result;
use crate::invariant_theory::{natural_tensor_dimension, scalar_invariant_survey, TargetSymmetry};
use crate::moduli::{
    delta_correction, generic_dimension, generic_dimension_direct, generic_dimension_rearranged,
    generic_isotropy,
};
use crate::random;
use crate::rat::frac;
use crate::reduction::{h_equivalence_witness, pi_equivariance_check, pi_r, section_s_r};
use crate::tensors::{dim_formula, gl_act, gl_act_normal, normal_dim_by_rank};

pub const SELFTEST_SEED: u64 = 20_240_917;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

type Outcome = Result<(bool, String)>;

fn timed(id: u32, name: &'static str, f: impl FnOnce() -> Outcome) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

fn within(start: Instant, budget: Duration) -> bool {
    start.elapsed() <= budget
}

pub fn dimension_oracle() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=4 {
        for m in 0..=4 {
            for symmetric in [false, true] {
                let (f, k) = (dim_formula(n, m, symmetric), normal_dim_by_rank(n, m, symmetric));
                if f != k {
                    bad.push(format!("(n={n}, m={m}, sym={symmetric}): {f} vs {k}"));
                }
            }
        }
    }
    let fast = within(start, Duration::from_secs(120));
    Ok((bad.is_empty() && fast, format!("mismatches {bad:?}, in budget {fast}")))
}

pub fn round_trip(seed: u64) -> Outcome {
    let mut cases = 0;
    for n in 2..=3 {
        for r in 0..=3 {
            for s in 0..10 {
                let mut rng = random::derived(seed, (n * 100 + r * 10 + s) as u64);
                let symmetric = s % 2 == 0;
                let t = random::normal_tuple(n, r, symmetric, &mut rng)?;
                if pi_r(&section_s_r(&t)?)? != t {
                    return Ok((false, format!("round trip fails at n={n}, r={r}, sample {s}")));
                }
                cases += 1;
            }
        }
    }
    Ok((true, format!("{cases} tuples")))
}

pub fn fiber_property(seed: u64) -> Outcome {
    let mut cases = 0;
    for n in 2..=3 {
        for r in 0..=2 {
            for symmetric in [false, true] {
                let mut rng = random::derived(seed, (n * 100 + r * 10 + symmetric as usize) as u64);
                let j = random::connection(n, r, symmetric, &mut rng);
                let tau = random::diffeo(n, r + 2, true, &mut rng);
                let moved = transform(&tau, &j)?;
                if pi_r(&moved)? != pi_r(&j)? {
                    return Ok((false, format!("π_r changes at n={n}, r={r}")));
                }
                match h_equivalence_witness(&j, &moved)? {
                    Some(w) if w.has_identity_linear_part() && transform(&w, &j)? == moved => {}
                    _ => return Ok((false, format!("no verified witness at n={n}, r={r}"))),
                }
                cases += 1;
            }
        }
    }
    Ok((true, format!("{cases} jets")))
}

pub fn equivariance(seed: u64) -> Outcome {
    let mut cases = 0;
    for n in 2..=3 {
        for r in 0..=2 {
            for s in 0..10 {
                let mut rng = random::derived(seed, (n * 1000 + r * 100 + s) as u64);
                let j = random::connection(n, r, s % 2 == 1, &mut rng);
                let g = random::gl_element(n, &mut rng);
                if !pi_equivariance_check(&g, &j)? {
                    return Ok((false, format!("not equivariant at n={n}, r={r}, sample {s}")));
                }
                cases += 1;
            }
        }
    }
    Ok((true, format!("{cases} (g, J) pairs")))
}

pub fn pointwise_consistency(seed: u64) -> Outcome {
    for n in 2..=3 {
        for r in 0..=2 {
            let mut rng = random::derived(seed, (n * 10 + r) as u64);
            let j = random::connection(n, r, false, &mut rng);
            let t = pi_r(&j)?;
            if *t.get(0).tensor() != torsion_at_origin(&j).scale(&frac(1, 2)) {
                return Ok((false, format!("Γ⁰ ≠ torsion/2 at n={n}, r={r}")));
            }
            let s = random::connection(n, r, true, &mut rng);
            let ts = pi_r(&s)?;
            if !ts.get(0).is_zero() {
                return Ok((false, format!("Γ⁰ ≠ 0 for a symmetric jet at n={n}, r={r}")));
            }
            if r >= 1 && curvature_at_origin(&s)? != *c1_to_curv(ts.get(1))?.tensor() {
                return Ok((false, format!("curvature ≠ image of Γ¹ at n={n}, r={r}")));
            }
        }
    }
    Ok((true, "n = 2, 3; r ≤ 2".into()))
}

pub fn collapse_cases(seed: u64) -> Outcome {
    for m in 0..=4 {
        for symmetric in [false, true] {
            if dim_formula(1, m, symmetric) != 0 || normal_dim_by_rank(1, m, symmetric) != 0 {
                return Ok((false, format!("n = 1 normal space nonzero at m={m}")));
            }
        }
    }
    for r in 0..=3 {
        let mut rng = random::derived(seed, r as u64);
        for symmetric in [false, true] {
            if !pi_r(&random::connection(1, r, symmetric, &mut rng))?.is_zero() {
                return Ok((false, format!("π_r ≠ 0 for n = 1, r={r}")));
            }
        }
    }
    for n in 1..=4 {
        if dim_formula(n, 0, true) != 0 || normal_dim_by_rank(n, 0, true) != 0 {
            return Ok((false, format!("C̃_0 ≠ 0 at n={n}")));
        }
    }
    Ok((true, "n = 1 collapses; C̃_0 = 0 for n ≤ 4".into()))
}

pub fn no_invariants() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for n in 1..=3 {
        for r in 0..=3 {
            for rep in scalar_invariant_survey(n, r, 6)? {
                let ok = rep.dimension == 0
                    && rep.unbalanced
                    && rep.weight_verified
                    && rep.homothety_weight != 0;
                if !ok {
                    return Ok((false, format!("profile {:?} at n={n}", rep.profile.degrees())));
                }
                count += 1;
            }
        }
    }
    let fast = within(start, Duration::from_secs(60));
    Ok((fast, format!("{count} profiles, in budget {fast}")))
}

pub fn curvature_uniqueness(cap: usize) -> Outcome {
    let start = Instant::now();
    let report = natural_tensor_dimension(3, 1, 3, 1, true, &TargetSymmetry::two_form_endo(), cap)?;
    let fast = within(start, Duration::from_secs(300));
    let per_profile: Vec<String> = report
        .profiles
        .iter()
        .map(|c| format!("{:?}: {}", c.profile.degrees(), c.dimension))
        .collect();
    Ok((
        report.total == 1 && fast,
        format!("dimension {} ({}), expected 1", report.total, per_profile.join(", ")),
    ))
}

pub fn bianchi_isomorphism(seed: u64) -> Outcome {
    for n in 2..=4 {
        let basis = curvature_like_basis(n);
        if basis.len() != n * n * (n * n - 1) / 3 {
            return Ok((false, format!("dim CurvatureLike = {} at n={n}", basis.len())));
        }
        for b in &basis {
            if c1_to_curv(&curv_to_c1(b)?)? != *b {
                return Ok((false, format!("c1_to_curv ∘ curv_to_c1 ≠ id at n={n}")));
            }
        }
        let mut rng = random::derived(seed, n as u64);
        for _ in 0..3 {
            let t = random::normal_tensor(n, 1, true, &mut rng);
            let r = c1_to_curv(&t)?;
            if curv_to_c1(&r)? != t {
                return Ok((false, format!("curv_to_c1 ∘ c1_to_curv ≠ id at n={n}")));
            }
            let g = random::gl_element(n, &mut rng);
            if *c1_to_curv(&gl_act_normal(&g, &t)?)?.tensor() != gl_act(&g, r.tensor())? {
                return Ok((false, format!("not equivariant at n={n}")));
            }
        }
    }
    Ok((true, "n = 2, 3, 4".into()))
}

pub fn ricci_lemma() -> Outcome {
    let m = ricci_matrix(&curvature_like_basis(2))?;
    let det = m.determinant()?;
    Ok((
        m.rows() == 4 && m.cols() == 4 && !det.is_zero(),
        format!("det = {}", crate::rat::to_string(&det)),
    ))
}

pub fn isotropy_pins(seed: u64) -> Outcome {
    let got = [
        generic_isotropy(2, 1, true, 20, seed)?,
        generic_isotropy(2, 2, true, 20, seed)?,
        generic_isotropy(3, 1, true, 20, seed)?,
    ];
    Ok((got == [1, 0, 0], format!("(2,1), (2,2), (3,1) → {got:?}, seed {seed}")))
}

pub fn moduli_formulas() -> Outcome {
    for n in 1..=5 {
        for r in 0..=6 {
            for symmetric in [true, false] {
                let i = delta_correction(n, r);
                let (a, b) = (
                    generic_dimension_direct(n, r, symmetric, i),
                    generic_dimension_rearranged(n, r, symmetric, i),
                );
                if a != b {
                    return Ok((false, format!("(n={n}, r={r}): {a} vs {b}")));
                }
            }
        }
    }
    let got = [
        generic_dimension(2, 1, true, 1)?,
        generic_dimension(2, 2, true, 0)?,
        generic_dimension(3, 1, true, 0)?,
    ];
    Ok((got == [1, 8, 15], format!("pinned values {got:?}")))
}

/// Runs criteria 1–12 in order.
pub fn run_selftest(cap: usize) -> Vec<CriterionResult> {
    let seed = SELFTEST_SEED;
    vec![
        timed(1, "dimension oracle agreement", dimension_oracle),
        timed(2, "reduction round trip", || round_trip(seed)),
        timed(3, "fiber property", || fiber_property(seed)),
        timed(4, "equivariance", || equivariance(seed)),
        timed(5, "pointwise consistency", || pointwise_consistency(seed)),
        timed(6, "collapse cases", || collapse_cases(seed)),
        timed(7, "no scalar invariants", no_invariants),
        timed(8, "curvature uniqueness", || curvature_uniqueness(cap)),
        timed(9, "Bianchi isomorphism", || bianchi_isomorphism(seed)),
        timed(10, "dimension-2 Ricci lemma", ricci_lemma),
        timed(11, "isotropy pins", || isotropy_pins(seed)),
        timed(12, "moduli formulas", moduli_formulas),
    ]
}
