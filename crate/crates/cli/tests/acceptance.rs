//! One line per acceptance criterion. Exits nonzero if any fails.

use std::collections::HashSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_traits::Zero;

use connmod::connections::{curvature_at_origin, torsion_at_origin, transform, transform_linear, ConnectionJet};
use connmod::curvature_dim2::{c1_to_curv, curv_to_c1, curvature_like_basis, pair_isotropy, ricci_matrix, ricci_split};
use connmod::invariant_theory::{natural_tensor_dimension, scalar_invariant_survey, TargetSymmetry, DEFAULT_CAP_P};
use connmod::moduli::{
    delta_correction, generic_dimension, generic_dimension_direct, generic_dimension_rearranged, generic_isotropy,
};
use connmod::random;
use connmod::rat::{frac, rat};
use connmod::reduction::{h_equivalence_witness, is_normal, pi_r, section_s_r, NormalTensorTuple};
use connmod::tensors::{dim_formula, gl_act, gl_act_normal, isotropy_dimension, normal_dim_by_rank, DenseTensor};
use connmod::Rat;

const SEED: u64 = 7;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn lib<T>(r: connmod::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("error: {e}"))
}

/// Normal tensors are the kernel of total symmetrization on the lower slots.
/// Each orbit basis vector of the domain lands on a single monomial, so the
/// image dimension is the number of distinct (upper, multiset) pairs hit.
fn counting_oracle(n: usize, m: usize, symmetric: bool) -> usize {
    let pairs: Vec<(usize, usize)> = if symmetric {
        (0..n).combinations_with_replacement(2).map(|p| (p[0], p[1])).collect()
    } else {
        (0..n).cartesian_product(0..n).collect()
    };
    let tails: Vec<Vec<usize>> = (0..n).combinations_with_replacement(m).collect();
    let mut domain = 0;
    let mut hit = HashSet::new();
    for k in 0..n {
        for &(i, j) in &pairs {
            for t in &tails {
                domain += 1;
                let mut all = t.clone();
                all.extend([i, j]);
                all.sort_unstable();
                hit.insert((k, all));
            }
        }
    }
    domain - hit.len()
}

fn c1_dimension_oracle() -> Check {
    let start = Instant::now();
    for (n, m, symmetric) in iproduct(1..=4, 0..=4) {
        let (f, k, o) = (
            dim_formula(n, m, symmetric),
            normal_dim_by_rank(n, m, symmetric),
            counting_oracle(n, m, symmetric),
        );
        ensure(f == k && k == o, format!("(n={n}, m={m}, sym={symmetric}): formula {f}, rank {k}, count {o}"))?;
    }
    ensure(start.elapsed() <= Duration::from_secs(120), "over the 120 s budget")?;
    Ok("n ≤ 4, m ≤ 4, both flags".into())
}

fn iproduct(
    ns: std::ops::RangeInclusive<usize>,
    ms: std::ops::RangeInclusive<usize>,
) -> impl Iterator<Item = (usize, usize, bool)> {
    ns.cartesian_product(ms)
        .cartesian_product([false, true])
        .map(|((n, m), s)| (n, m, s))
}

/// The section's Taylor coefficients are the normal tensors divided by α!.
fn section_matches_tuple(j: &ConnectionJet, t: &NormalTensorTuple) -> bool {
    let n = j.n();
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                for (idx, c) in j.gamma(k, a, b).terms() {
                    let mut slots = vec![k, a, b];
                    slots.extend(idx.to_slots());
                    let m = idx.degree() as usize;
                    if c * idx.factorial() != *t.get(m).tensor().get(&slots) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn c2_round_trip() -> Check {
    let mut count = 0;
    for n in 2..=3 {
        for r in 0..=3 {
            for s in 0..10u64 {
                let mut rng = random::derived(SEED, (n * 100 + r * 10) as u64 + s);
                let t = lib(random::normal_tuple(n, r, s % 2 == 1, &mut rng))?;
                let j = lib(section_s_r(&t))?;
                ensure(is_normal(&j), format!("section not normal at n={n}, r={r}"))?;
                ensure(section_matches_tuple(&j, &t), format!("coefficients ≠ T/α! at n={n}, r={r}"))?;
                ensure(lib(pi_r(&j))? == t, format!("π_r ∘ s_r ≠ id at n={n}, r={r}, sample {s}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} tuples"))
}

fn c3_fiber() -> Check {
    let mut count = 0;
    for n in 2..=3 {
        for r in 0..=2 {
            for symmetric in [false, true] {
                let mut rng = random::derived(SEED, (1000 + n * 10 + r) as u64 + symmetric as u64 * 500);
                let j = random::connection(n, r, symmetric, &mut rng);
                let tau = random::diffeo(n, r + 2, true, &mut rng);
                let moved = lib(transform(&tau, &j))?;
                ensure(lib(pi_r(&moved))? == lib(pi_r(&j))?, format!("π_r moved at n={n}, r={r}"))?;
                let w = lib(h_equivalence_witness(&j, &moved))?.ok_or(format!("no witness at n={n}, r={r}"))?;
                ensure(w.has_identity_linear_part(), "witness has nontrivial linear part")?;
                ensure(lib(transform(&w, &j))? == moved, "witness does not carry J₁ to J₂")?;

                // Different normal tensors: no witness.
                let t = lib(pi_r(&j))?;
                if !t.is_zero() {
                    let other = lib(section_s_r(&lib(t.gl_act(&doubling(n)))?))?;
                    ensure(lib(h_equivalence_witness(&j, &other))?.is_none(), "witness between inequivalent jets")?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} jets with random τ ∈ H^r"))
}

/// `g = 2·Id` rescales every nonzero normal tensor, so it moves the class.
fn doubling(n: usize) -> connmod::tensors::GlElement {
    connmod::tensors::GlElement::homothety(n, rat(2)).expect("2 ≠ 0")
}

fn c4_equivariance() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for n in 2..=3 {
        for r in 0..=2 {
            for s in 0..10u64 {
                let mut rng = random::derived(SEED, (2000 + n * 100 + r * 10) as u64 + s);
                let j = random::connection(n, r, s % 2 == 0, &mut rng);
                let g = random::gl_element(n, &mut rng);
                let lhs = lib(pi_r(&lib(transform_linear(g.matrix(), &j))?))?;
                let rhs = lib(lib(pi_r(&j))?.gl_act(&g))?;
                ensure(lhs == rhs, format!("π_r(g·J) ≠ g·π_r(J) at n={n}, r={r}, sample {s}"))?;
                count += 1;
            }
        }
    }
    ensure(start.elapsed() <= Duration::from_secs(60), "over the 60 s budget")?;
    Ok(format!("{count} pairs"))
}

fn c5_pointwise() -> Check {
    for n in 2..=3 {
        for r in 1..=2 {
            let mut rng = random::derived(SEED, (3000 + n * 10 + r) as u64);
            let j = random::connection(n, r, false, &mut rng);
            let t0 = lib(pi_r(&j))?.get(0).tensor().clone();
            let half = frac(1, 2);
            let own_torsion = DenseTensor::from_fn(n, t0.signature().to_vec(), |ix| {
                (j.gamma(ix[0], ix[1], ix[2]).constant_term() - j.gamma(ix[0], ix[2], ix[1]).constant_term()) * &half
            });
            ensure(t0 == own_torsion, format!("Γ⁰ ≠ T/2 at n={n}, r={r}"))?;
            ensure(torsion_at_origin(&j).scale(&half) == own_torsion, "library torsion disagrees")?;

            let s = random::connection(n, r, true, &mut rng);
            let ts = lib(pi_r(&s))?;
            ensure(ts.get(0).is_zero(), "Γ⁰ ≠ 0 for a symmetric jet")?;
            let own = own_curvature(&s);
            ensure(lib(curvature_at_origin(&s))? == own, "library curvature disagrees")?;
            ensure(*lib(c1_to_curv(ts.get(1)))?.tensor() == own, format!("R ≠ image of Γ¹ at n={n}, r={r}"))?;
        }
    }
    Ok("torsion and curvature at 0, n = 2, 3".into())
}

/// `R^k_{ijl} = ∂_iΓ^k_{jl} − ∂_jΓ^k_{il} + Γ^k_{is}Γ^s_{jl} − Γ^k_{js}Γ^s_{il}` at 0.
fn own_curvature(j: &ConnectionJet) -> DenseTensor {
    use connmod::series::MultiIndex;
    use connmod::tensors::Variance::{Contra, Cov};
    let n = j.n();
    let mut out = DenseTensor::zeros(n, vec![Contra, Cov, Cov, Cov]);
    for (k, i, jj, l) in (0..4).map(|_| 0..n).multi_cartesian_product().map(|v| (v[0], v[1], v[2], v[3])) {
        let mut v: Rat = j.gamma(k, jj, l).coeff(&MultiIndex::unit(n, i)) - j.gamma(k, i, l).coeff(&MultiIndex::unit(n, jj));
        for s in 0..n {
            v += j.gamma(k, i, s).constant_term() * j.gamma(s, jj, l).constant_term();
            v -= j.gamma(k, jj, s).constant_term() * j.gamma(s, i, l).constant_term();
        }
        out.set(&[k, i, jj, l], v);
    }
    out
}

fn c6_collapse() -> Check {
    for r in 0..=3 {
        for symmetric in [false, true] {
            let mut rng = random::derived(SEED, 4000 + r as u64);
            let j = random::connection(1, r, symmetric, &mut rng);
            ensure(lib(pi_r(&j))?.is_zero(), format!("π_r ≠ 0 at n = 1, r={r}"))?;
            // Every 1-dimensional jet is equivalent to the flat one.
            let flat = ConnectionJet::zero(1, r, symmetric);
            ensure(lib(h_equivalence_witness(&j, &flat))?.is_some(), "n = 1 jet not flattened")?;
        }
    }
    for n in 1..=4 {
        ensure(dim_formula(n, 0, true) == 0 && counting_oracle(n, 0, true) == 0, format!("C̃_0 ≠ 0 at n={n}"))?;
    }
    for m in 0..=4 {
        ensure(dim_formula(1, m, false) == 0 && dim_formula(1, m, true) == 0, format!("C_{m} ≠ 0 at n = 1"))?;
    }
    Ok("n = 1 flat; C̃_0 = 0".into())
}

fn c7_no_invariants() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for n in 1..=3 {
        for r in 0..=3 {
            for rep in lib(scalar_invariant_survey(n, r, 6))? {
                let d = rep.profile.degrees();
                let weight: usize = d.iter().enumerate().map(|(m, &dm)| (m + 1) * dm).sum();
                ensure(rep.dimension == 0, format!("invariant at n={n}, profile {d:?}"))?;
                ensure(
                    rep.homothety_weight == -(weight as i64) && weight > 0 && rep.weight_verified,
                    format!("weight mismatch at {d:?}"),
                )?;
                count += 1;
            }
        }
    }
    ensure(start.elapsed() <= Duration::from_secs(60), "over the 60 s budget")?;
    Ok(format!("{count} profiles, all zero"))
}

fn c8_curvature_uniqueness() -> Check {
    let start = Instant::now();
    let rep = lib(natural_tensor_dimension(3, 1, 3, 1, true, &TargetSymmetry::two_form_endo(), DEFAULT_CAP_P))?;
    let parts = rep
        .profiles
        .iter()
        .map(|c| format!("{:?}→{}", c.profile.degrees(), c.dimension))
        .join(", ");
    ensure(start.elapsed() <= Duration::from_secs(300), "over the 300 s budget")?;
    ensure(rep.total == 1, format!("dimension {} ({parts}), expected 1", rep.total))?;
    Ok(format!("dimension 1 ({parts})"))
}

fn c9_bianchi() -> Check {
    for n in 2..=4 {
        let basis = curvature_like_basis(n);
        ensure(basis.len() == n * n * (n * n - 1) / 3, format!("dim {} at n={n}", basis.len()))?;
        let mut rng = random::derived(SEED, 5000 + n as u64);
        for _ in 0..3 {
            let t = random::normal_tensor(n, 1, true, &mut rng);
            let r = lib(c1_to_curv(&t))?;
            let rt = r.tensor();
            for (k, i, j, l) in (0..4).map(|_| 0..n).multi_cartesian_product().map(|v| (v[0], v[1], v[2], v[3])) {
                ensure(rt.get(&[k, i, j, l]) == &-rt.get(&[k, j, i, l]), "image not antisymmetric")?;
                let cyc = rt.get(&[k, i, j, l]) + rt.get(&[k, j, l, i]) + rt.get(&[k, l, i, j]);
                ensure(cyc.is_zero(), "image violates Bianchi")?;
            }
            ensure(lib(curv_to_c1(&r))? == t, format!("inverse fails at n={n}"))?;
            let g = random::gl_element(n, &mut rng);
            ensure(
                *lib(c1_to_curv(&lib(gl_act_normal(&g, &t))?))?.tensor() == lib(gl_act(&g, rt))?,
                format!("not equivariant at n={n}"),
            )?;
        }
    }
    Ok("n = 2, 3, 4".into())
}

fn leibniz_det(rows: &[Vec<Rat>]) -> Rat {
    let n = rows.len();
    let mut det = Rat::zero();
    for perm in (0..n).permutations(n) {
        let inversions = (0..n).tuple_combinations().filter(|&(a, b)| perm[a] > perm[b]).count();
        let mut term: Rat = rat(if inversions % 2 == 0 { 1 } else { -1 });
        for (r, &c) in perm.iter().enumerate() {
            term *= &rows[r][c];
        }
        det += term;
    }
    det
}

fn c10_ricci_lemma() -> Check {
    let m = lib(ricci_matrix(&curvature_like_basis(2)))?;
    ensure(m.rows() == 4 && m.cols() == 4, "not 4×4")?;
    let rows: Vec<Vec<Rat>> = (0..4).map(|i| m.row(i).to_vec()).collect();
    let det = leibniz_det(&rows);
    ensure(det == lib(m.determinant())?, "determinants disagree")?;
    ensure(!det.is_zero(), "Ricci map singular")?;
    Ok(format!("det = {det}"))
}

fn c11_isotropy_pins() -> Check {
    let got = [
        lib(generic_isotropy(2, 1, true, 20, SEED))?,
        lib(generic_isotropy(2, 2, true, 20, SEED))?,
        lib(generic_isotropy(3, 1, true, 20, SEED))?,
    ];
    ensure(got == [1, 0, 0], format!("got {got:?}"))?;
    // In dimension two the stabilizer of Γ¹ is the stabilizer of its Ricci pair.
    let mut rng = random::derived(SEED, 6000);
    for _ in 0..5 {
        let t = random::normal_tensor(2, 1, true, &mut rng);
        let r = lib(c1_to_curv(&t))?;
        let (sym, anti) = ricci_split(&r);
        let direct = lib(isotropy_dimension(2, &[t.tensor()]))?;
        ensure(lib(pair_isotropy(&sym, &anti))?.lie_dim == direct, "pair and direct isotropy differ")?;
    }
    Ok(format!("(2,1), (2,2), (3,1) → {got:?}"))
}

fn c12_moduli() -> Check {
    for n in 1..=5 {
        for r in 0..=6 {
            for symmetric in [false, true] {
                let i = delta_correction(n, r);
                let a = generic_dimension_direct(n, r, symmetric, i);
                let b = generic_dimension_rearranged(n, r, symmetric, i);
                let first = usize::from(symmetric);
                let own: i64 = (first..=r).map(|m| counting_oracle(n, m, symmetric) as i64).sum::<i64>()
                    - (n * n) as i64
                    + i as i64;
                ensure(a == b && b == own, format!("(n={n}, r={r}, sym={symmetric}): {a}, {b}, {own}"))?;
            }
        }
    }
    let got = [
        lib(generic_dimension(2, 1, true, 1))?,
        lib(generic_dimension(2, 2, true, 0))?,
        lib(generic_dimension(3, 1, true, 0))?,
    ];
    ensure(got == [1, 8, 15], format!("pinned values {got:?}"))?;
    Ok("n ≤ 5, r ≤ 6; pins 1, 8, 15".into())
}

fn c13_selftest() -> Check {
    let out = Command::new(env!("CARGO_BIN_EXE_connmod"))
        .arg("selftest")
        .output()
        .map_err(|e| format!("could not run the binary: {e}"))?;
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).map_err(|e| format!("selftest output is not JSON: {e}"))?;
    let failed: Vec<String> = doc["criteria"]
        .as_array()
        .into_iter()
        .flatten()
        .filter(|c| c["passed"] != true)
        .map(|c| c["id"].to_string())
        .collect();
    ensure(
        out.status.success() && doc["passed"] == true,
        format!("exit {:?}, failing criteria {failed:?}", out.status.code()),
    )?;
    Ok("exit 0".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Check); 13] = [
        (1, "dimension oracle agreement", c1_dimension_oracle),
        (2, "reduction round trip", c2_round_trip),
        (3, "fiber property", c3_fiber),
        (4, "equivariance", c4_equivariance),
        (5, "pointwise consistency", c5_pointwise),
        (6, "collapse cases", c6_collapse),
        (7, "no scalar invariants", c7_no_invariants),
        (8, "curvature uniqueness", c8_curvature_uniqueness),
        (9, "Bianchi isomorphism", c9_bianchi),
        (10, "dimension-2 Ricci lemma", c10_ricci_lemma),
        (11, "isotropy pins", c11_isotropy_pins),
        (12, "moduli formulas", c12_moduli),
        (13, "selftest", c13_selftest),
    ];
    let mut failures = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {id:>2} [pass] {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failures += 1;
                println!("criterion {id:>2} [FAIL] {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!("acceptance: {} of 13 passed", 13 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
