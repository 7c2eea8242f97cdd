use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use connmod::checks::run_selftest;
use connmod::curvature_dim2::{c1_to_curv, curvature_like_basis, pair_isotropy, ricci_matrix, ricci_split};
use connmod::invariant_theory::{natural_tensor_dimension, scalar_invariant_survey, TargetSymmetry, DEFAULT_CAP_P};
use connmod::json::{
    connection_from_json, connection_to_json, diffeo_to_json, rat_to_json, tuple_from_json,
    tuple_to_json,
};
use connmod::moduli::{moduli_report, poincare_coefficients};
use connmod::rat::{self, Rat};
use connmod::reduction::{h_equivalence_witness, is_normal, normalize, pi_r, section_s_r};
use connmod::tensors::{dim_formula, normal_dim_by_rank, DenseTensor, Variance};
use connmod::{random, Error};

const CAP_ENV: &str = "CONNMOD_CAP_P";

/// Exact reduction of connection jets to normal tensors, and the counts
/// that follow from it. Every command prints one JSON document.
#[derive(Parser)]
#[command(name = "connmod", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Dimension of the normal space C_m (C̃_m with --symmetric).
    Dims {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        symmetric: bool,
    },
    /// Normalize a connection jet and read off its normal tensors.
    Reduce {
        /// Connection JSON file, or `-` for standard input.
        #[arg(long)]
        input: String,
    },
    /// Polynomial connection jet in normal form from a normal-tensor tuple.
    Section {
        #[arg(long)]
        input: String,
    },
    /// Decide equivalence under jets with identity linear part.
    Equiv {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Scalar invariants for every degree profile up to a total degree.
    Invariants {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 6)]
        max_total: usize,
    },
    /// Count natural tensors of type (p, q) built from r-jets.
    Natural {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        symmetric: bool,
        /// `none`, `two-form-endo`, or groups like `antisym:0,1;sym:2,3`.
        #[arg(long, default_value = "none")]
        target: String,
    },
    /// Stabilizer in gl_2 of a symmetric T2 and a 2-form w2.
    Isotropy {
        /// 2×2 matrix as JSON, e.g. `[[1,0],[0,1]]`.
        #[arg(long)]
        t2: String,
        #[arg(long)]
        w2: String,
    },
    /// Normal-space dimensions, sampled isotropy and generic dimension.
    Moduli {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        symmetric: bool,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generic dimensions for r = 0..=rmax.
    Poincare {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        rmax: usize,
        #[arg(long)]
        symmetric: bool,
    },
    /// Ricci matrix and sampled isotropy in dimension two.
    CheckDim2 {
        #[arg(long, default_value_t = 20)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-verify every structural claim with fixed seeds.
    Selftest,
}

struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if matches!(e, Error::InternalMismatch(_)) { 1 } else { 2 },
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: "invalid_input".into(),
        message: message.into(),
    }
}

fn read_json(path: &str) -> Result<Value, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| invalid(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| invalid(format!("reading {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| invalid(format!("{path}: {e}")))
}

fn cap() -> Result<usize, Failure> {
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{CAP_ENV} must be a non-negative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CAP_P),
    }
}

fn parse_2x2(s: &str) -> Result<DenseTensor, Failure> {
    let v: Value = serde_json::from_str(s).map_err(|e| invalid(format!("{s}: {e}")))?;
    let bad = || invalid(format!("expected a 2×2 matrix, got {s}"));
    let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
    let mut entries: Vec<Rat> = Vec::with_capacity(4);
    for row in rows {
        let row = row.as_array().filter(|r| r.len() == 2).ok_or_else(bad)?;
        for e in row {
            entries.push(match e {
                Value::String(t) => rat::parse(t)?,
                Value::Number(x) => rat::rat(x.as_i64().ok_or_else(bad)?),
                _ => return Err(bad()),
            });
        }
    }
    Ok(DenseTensor::from_entries(2, vec![Variance::Cov, Variance::Cov], entries)?)
}

fn run(command: &Command, config: Value) -> Result<(Value, bool), Failure> {
    let out = match *command {
        Command::Dims { n, m, symmetric } => {
            let n = n as usize;
            json!({
                "config": config,
                "dim": dim_formula(n, m, symmetric),
                "dim_by_rank": normal_dim_by_rank(n, m, symmetric),
            })
        }
        Command::Reduce { ref input } => {
            let j = connection_from_json(&read_json(input)?)?;
            let (tau, normal) = normalize(&j)?;
            let tuple = pi_r(&j)?;
            json!({
                "config": config,
                "tau": diffeo_to_json(&tau),
                "normal_jet": connection_to_json(&normal),
                "tuple": tuple_to_json(&tuple),
            })
        }
        Command::Section { ref input } => {
            let t = tuple_from_json(&read_json(input)?)?;
            let j = section_s_r(&t)?;
            json!({
                "config": config,
                "connection": connection_to_json(&j),
                "normal": is_normal(&j),
            })
        }
        Command::Equiv { ref first, ref second } => {
            let a = connection_from_json(&read_json(first)?)?;
            let b = connection_from_json(&read_json(second)?)?;
            let w = h_equivalence_witness(&a, &b)?;
            json!({
                "config": config,
                "equivalent": w.is_some(),
                "witness": w.as_ref().map(diffeo_to_json),
            })
        }
        Command::Invariants { n, r, max_total } => {
            let reports = scalar_invariant_survey(n as usize, r, max_total)?;
            let total: usize = reports.iter().map(|rep| rep.dimension).sum();
            json!({
                "config": config,
                "profiles": reports,
                "total": total,
            })
        }
        Command::Natural {
            n,
            r,
            p,
            q,
            symmetric,
            ref target,
        } => {
            let target = TargetSymmetry::parse(target)?;
            let report = natural_tensor_dimension(n as usize, r, p, q, symmetric, &target, cap()?)?;
            json!({
                "config": config,
                "dim": report.total,
                "profiles": report.profiles,
            })
        }
        Command::Isotropy { ref t2, ref w2 } => {
            let iso = pair_isotropy(&parse_2x2(t2)?, &parse_2x2(w2)?)?;
            json!({
                "config": config,
                "lie_dim": iso.lie_dim,
                "label": iso.label,
                "inertia": iso.inertia,
            })
        }
        Command::Moduli {
            n,
            r,
            symmetric,
            samples,
            seed,
        } => {
            let report = moduli_report(n as usize, r, symmetric, samples as usize, seed)?;
            json!({"config": config, "report": report})
        }
        Command::Poincare { n, rmax, symmetric } => {
            json!({
                "config": config,
                "coefficients": poincare_coefficients(n as usize, rmax, symmetric)?,
            })
        }
        Command::CheckDim2 { samples, seed } => {
            let basis = curvature_like_basis(2);
            let m = ricci_matrix(&basis)?;
            let det = m.determinant()?;
            let mut dims = Vec::new();
            for s in 0..samples {
                let mut rng = random::derived(seed, s);
                let t = random::normal_tensor(2, 1, true, &mut rng);
                let (sym, anti) = ricci_split(&c1_to_curv(&t)?);
                dims.push(pair_isotropy(&sym, &anti)?.lie_dim);
            }
            let invertible = det != rat::rat(0);
            let all_positive = dims.iter().all(|&d| d >= 1);
            let matrix: Vec<Vec<Value>> = (0..m.rows())
                .map(|i| m.row(i).iter().map(rat_to_json).collect())
                .collect();
            let pass = invertible && all_positive;
            return Ok((
                json!({
                    "config": config,
                    "ricci_matrix": matrix,
                    "determinant": rat_to_json(&det),
                    "invertible": invertible,
                    "sampled_isotropy": dims,
                    "isotropy_at_least_one": all_positive,
                    "pass": pass,
                }),
                pass,
            ));
        }
        Command::Selftest => {
            let results = run_selftest(cap()?);
            let passed = results.iter().all(|c| c.passed);
            return Ok((
                json!({"config": config, "criteria": results, "passed": passed}),
                passed,
            ));
        }
    };
    Ok((out, true))
}

fn emit(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    // A closed pipe downstream is not our failure.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion)
                || matches!(e.kind(), ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand)
            {
                e.exit();
            }
            emit(&json!({"error": {"kind": "usage", "message": e.to_string().trim_end()}}));
            return ExitCode::from(2);
        }
    };
    let mut config = serde_json::to_value(&cli.command).expect("flags serialize");
    if matches!(cli.command, Command::Natural { .. } | Command::Selftest) {
        if let (Value::Object(map), Ok(cap)) = (&mut config, cap()) {
            map.insert("cap_p".into(), cap.into());
        }
    }
    match run(&cli.command, config.clone()) {
        Ok((out, ok)) => {
            emit(&out);
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            emit(&json!({
                "config": config,
                "error": {"kind": f.kind, "message": f.message},
            }));
            ExitCode::from(f.code)
        }
    }
}
