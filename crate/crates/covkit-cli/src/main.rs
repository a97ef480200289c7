//! covkit: reproducible batch runs over the reduction chain. Every
//! invocation prints one compact JSON report line on standard output.
//!
//! Exit codes: 0 success (including verifications that answer false), 2
//! validation or usage error, 3 enumeration budget exhausted, 1 I/O
//! failure. Budgets resolve as --budget flag, then the COVKIT_BUDGET
//! environment variable, then 10^6 enumerated items. Rationals on the
//! command line are "numer/denom" strings ("3/4", "2"); floats are not
//! accepted. Subcommands that draw randomness require an explicit --seed.

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use covkit::covers::{from_partition_family, load_cover, save_cover};
use covkit::instances::{
    gen_planted_maxlin, load_instance, save_instance, KMldInstance, MaxLinInstance, MldInstance,
    NcpInstance, ProblemInstance,
};
use covkit::oracle::{
    classify_instance, solve_maxlin_exact, solve_mld_min_weight, solve_ncp_exact,
};
use covkit::partitions::{deterministic_family, load_family, random_family, save_family};
use covkit::rational::{parse_rational, to_pair, Rational};
use covkit::reduce::{
    kmld_to_ncp, maxlin_to_mld, mld_group_cover, mld_group_naive, pipeline_maxlin_to_kmld,
    FamilySource,
};
use covkit::Error;

use covkit_cli::report::*;

const DEFAULT_BUDGET: u64 = 1_000_000;

fn rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "covkit",
    version,
    about = "Gap-preserving reductions between linear-equation and decoding problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted linear-equation instance and write it to a file
    GenMaxlin {
        /// Number of unknowns
        #[arg(long)]
        n: usize,
        /// Number of equations
        #[arg(long)]
        m: usize,
        /// Field modulus (prime)
        #[arg(long)]
        q: u32,
        /// Completeness fraction, e.g. 9/10
        #[arg(long, value_parser = rat)]
        c: Rational,
        /// Soundness fraction; defaults to c/2
        #[arg(long, value_parser = rat)]
        s: Option<Rational>,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: String,
    },
    /// Construct a balanced partition family
    BuildFamily {
        #[command(subcommand)]
        which: BuildFamilyCommand,
    },
    /// Derive a cover family from a balanced partition family
    BuildCover {
        /// Path to the partition family
        #[arg(long)]
        family: String,
        /// Subset density alpha, e.g. 1/2
        #[arg(long, value_parser = rat)]
        alpha: Rational,
        /// Balance slack epsilon
        #[arg(long, value_parser = rat)]
        epsilon: Rational,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        out: String,
    },
    /// Apply one reduction step
    Reduce {
        #[command(subcommand)]
        which: ReduceCommand,
    },
    /// Check a family or cover property; "ok": false still exits 0
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
    /// Solve an instance exactly by brute force
    Solve {
        #[command(subcommand)]
        which: SolveCommand,
    },
    /// Classify an instance against its gap thresholds
    Classify {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Subcommand)]
enum BuildFamilyCommand {
    /// Sample candidate functions and keep the balanced ones
    Random {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = rat)]
        alpha: Rational,
        #[arg(long, value_parser = rat)]
        epsilon: Rational,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        out: String,
    },
    /// Project a diagonal point set along hypercube coordinates
    Deterministic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Subset density the guarantee regime is evaluated at
        #[arg(long, value_parser = rat)]
        alpha: Rational,
        #[arg(long, value_parser = rat)]
        epsilon: Rational,
        #[arg(short, long)]
        out: String,
    },
}

#[derive(Subcommand)]
enum ReduceCommand {
    /// Dualize a linear-equation instance into syndrome decoding
    MaxlinToMld {
        #[arg(long = "in")]
        input: String,
        #[arg(short, long)]
        out: String,
    },
    /// Group by all low-weight chunks
    GroupNaive {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = rat)]
        epsilon: Rational,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        out: String,
    },
    /// Group along a cover family
    GroupCover {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        cover: String,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        out: String,
    },
    /// Rewrite grouped decoding as a nearest-codeword instance
    KmldToNcp {
        #[arg(long = "in")]
        input: String,
        #[arg(short, long)]
        out: String,
    },
    /// Full chain: dualize, build family and cover, group
    Pipeline {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = rat)]
        epsilon: Rational,
        /// "random", "deterministic", or a path to a family file
        #[arg(long)]
        family: String,
        /// Required when --family random
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(short, long)]
        out: String,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Every function's buckets stay within the family's slack bound
    P1 {
        #[arg(long)]
        family: String,
    },
    /// Every subset of density alpha has a balancing function
    P2 {
        #[arg(long)]
        family: String,
        #[arg(long, value_parser = rat)]
        alpha: Rational,
        #[arg(long, value_parser = rat)]
        epsilon: Rational,
        #[arg(long)]
        budget: Option<u64>,
        /// Sample this many subsets instead of checking exhaustively
        #[arg(long)]
        trials: Option<u64>,
        /// Required with --trials
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Every member set respects the cover's size bound
    C1 {
        #[arg(long)]
        cover: String,
    },
    /// Every small-enough subset splits exactly into member sets
    C2 {
        #[arg(long)]
        family: String,
        #[arg(long)]
        cover: String,
        #[arg(long, value_parser = rat)]
        alpha: Rational,
        #[arg(long, value_parser = rat)]
        epsilon: Rational,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Subcommand)]
enum SolveCommand {
    /// Minimize violated equations over all assignments
    Maxlin {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Minimum-weight syndrome decoding up to a weight cap
    Mld {
        #[arg(long = "in")]
        input: String,
        /// Defaults to min(cols, floor(gamma * ell))
        #[arg(long)]
        w_max: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Minimum-weight grouped decoding up to a weight cap
    Kmld {
        #[arg(long = "in")]
        input: String,
        /// Defaults to min(cols, floor(gamma * k))
        #[arg(long)]
        w_max: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Nearest codeword over all coefficient vectors
    Ncp {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        budget: Option<u64>,
    },
}

fn resolve_budget(flag: Option<u64>) -> covkit::Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("COVKIT_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::BadParams(format!("COVKIT_BUDGET=`{v}` is not a nonnegative integer"))
        }),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn want_maxlin(inst: ProblemInstance, path: &str) -> covkit::Result<MaxLinInstance> {
    match inst {
        ProblemInstance::MaxLin(i) => Ok(i),
        other => Err(Error::BadParams(format!(
            "{path} holds a {} instance, expected maxlin",
            other.kind()
        ))),
    }
}

fn want_mld(inst: ProblemInstance, path: &str) -> covkit::Result<MldInstance> {
    match inst {
        ProblemInstance::Mld(i) => Ok(i),
        other => Err(Error::BadParams(format!(
            "{path} holds a {} instance, expected mld",
            other.kind()
        ))),
    }
}

fn want_kmld(inst: ProblemInstance, path: &str) -> covkit::Result<KMldInstance> {
    match inst {
        ProblemInstance::KMld(i) => Ok(i),
        other => Err(Error::BadParams(format!(
            "{path} holds a {} instance, expected kmld",
            other.kind()
        ))),
    }
}

fn want_ncp(inst: ProblemInstance, path: &str) -> covkit::Result<NcpInstance> {
    match inst {
        ProblemInstance::Ncp(i) => Ok(i),
        other => Err(Error::BadParams(format!(
            "{path} holds a {} instance, expected ncp",
            other.kind()
        ))),
    }
}

fn emit<T: serde::Serialize>(report: &T) -> covkit::Result<String> {
    Ok(serde_json::to_string(report)?)
}

fn run(cli: Cli) -> covkit::Result<String> {
    match cli.command {
        Command::GenMaxlin {
            n,
            m,
            q,
            c,
            s,
            seed,
            out,
        } => {
            let s = s.unwrap_or(c / Rational::from_integer(2));
            let (inst, planted) = gen_planted_maxlin(n, m, q, c, s, seed)?;
            let planted_violations = inst.violations(&planted)?;
            save_instance(&ProblemInstance::MaxLin(inst), &out)?;
            emit(&GenMaxlinReport {
                command: "gen-maxlin".into(),
                n,
                m,
                q,
                c: to_pair(c),
                s: to_pair(s),
                seed,
                planted_violations,
                out,
            })
        }
        Command::BuildFamily { which } => match which {
            BuildFamilyCommand::Random {
                m,
                k,
                alpha,
                epsilon,
                seed,
                budget,
                out,
            } => {
                let budget = resolve_budget(budget)?;
                let fam = random_family(m, k, alpha, epsilon, seed, budget)?;
                save_family(&fam, &out)?;
                emit(&BuildFamilyReport {
                    command: "build-family-random".into(),
                    m,
                    k,
                    alpha: to_pair(alpha),
                    epsilon: to_pair(epsilon),
                    seed: Some(seed),
                    functions: fam.len(),
                    guarantee_regime: None,
                    out,
                })
            }
            BuildFamilyCommand::Deterministic {
                m,
                k,
                alpha,
                epsilon,
                out,
            } => {
                let fam = deterministic_family(m, k, alpha, epsilon)?;
                save_family(&fam, &out)?;
                emit(&BuildFamilyReport {
                    command: "build-family-deterministic".into(),
                    m,
                    k,
                    alpha: to_pair(alpha),
                    epsilon: to_pair(epsilon),
                    seed: None,
                    functions: fam.len(),
                    guarantee_regime: Some(fam.guarantee_regime()),
                    out,
                })
            }
        },
        Command::BuildCover {
            family,
            alpha,
            epsilon,
            budget,
            out,
        } => {
            let budget = resolve_budget(budget)?;
            let fam = load_family(&family)?;
            let cover = from_partition_family(&fam, alpha, epsilon, budget)?;
            save_cover(&cover, &out)?;
            emit(&BuildCoverReport {
                command: "build-cover".into(),
                family,
                m: cover.universe_size(),
                k: cover.parts(),
                alpha: to_pair(alpha),
                epsilon: to_pair(epsilon),
                sets: cover.len(),
                size_bound: to_pair(cover.size_bound()),
                out,
            })
        }
        Command::Reduce { which } => match which {
            ReduceCommand::MaxlinToMld { input, out } => {
                let inst = want_maxlin(load_instance(&input)?, &input)?;
                let mld = maxlin_to_mld(&inst)?;
                let (rows, cols) = (mld.matrix().rows(), mld.matrix().cols());
                let (ell, gamma) = (mld.ell(), mld.gamma());
                save_instance(&ProblemInstance::Mld(mld), &out)?;
                emit(&ReduceMaxlinToMldReport {
                    command: "reduce-maxlin-to-mld".into(),
                    input,
                    rows,
                    cols,
                    ell,
                    gamma: to_pair(gamma),
                    out,
                })
            }
            ReduceCommand::GroupNaive {
                input,
                k,
                epsilon,
                budget,
                out,
            } => {
                let budget = resolve_budget(budget)?;
                let inst = want_mld(load_instance(&input)?, &input)?;
                let chunk_weight = inst.ell().div_ceil(k);
                let grouped = mld_group_naive(&inst, k, epsilon, budget)?;
                let labels = grouped.labels().len();
                let gamma_prime = grouped.gamma();
                save_instance(&ProblemInstance::KMld(grouped), &out)?;
                emit(&ReduceGroupNaiveReport {
                    command: "reduce-group-naive".into(),
                    input,
                    k,
                    epsilon: to_pair(epsilon),
                    chunk_weight,
                    labels,
                    gamma_prime: to_pair(gamma_prime),
                    out,
                })
            }
            ReduceCommand::GroupCover {
                input,
                cover,
                budget,
                out,
            } => {
                let budget = resolve_budget(budget)?;
                let inst = want_mld(load_instance(&input)?, &input)?;
                let cov = load_cover(&cover)?;
                let grouped = mld_group_cover(&inst, &cov, budget)?;
                let k = grouped.k();
                let labels = grouped.labels().len();
                let gamma_prime = grouped.gamma();
                save_instance(&ProblemInstance::KMld(grouped), &out)?;
                emit(&ReduceGroupCoverReport {
                    command: "reduce-group-cover".into(),
                    input,
                    cover,
                    k,
                    labels,
                    gamma_prime: to_pair(gamma_prime),
                    out,
                })
            }
            ReduceCommand::KmldToNcp { input, out } => {
                let inst = want_kmld(load_instance(&input)?, &input)?;
                let ncp = kmld_to_ncp(inst.matrix(), inst.target(), inst.k(), inst.gamma())?;
                let (rows, cols) = (ncp.generator().rows(), ncp.generator().cols());
                let (k, gamma) = (ncp.k(), ncp.gamma());
                save_instance(&ProblemInstance::Ncp(ncp), &out)?;
                emit(&ReduceKmldToNcpReport {
                    command: "reduce-kmld-to-ncp".into(),
                    input,
                    rows,
                    cols,
                    k,
                    gamma: to_pair(gamma),
                    out,
                })
            }
            ReduceCommand::Pipeline {
                input,
                k,
                epsilon,
                family,
                seed,
                budget,
                out,
            } => {
                let budget = resolve_budget(budget)?;
                let inst = want_maxlin(load_instance(&input)?, &input)?;
                let source = match family.as_str() {
                    "random" => {
                        let seed = seed.ok_or_else(|| {
                            Error::BadParams("--family random requires --seed".into())
                        })?;
                        FamilySource::Random { seed }
                    }
                    "deterministic" => FamilySource::Deterministic,
                    path => FamilySource::Explicit(load_family(path)?),
                };
                let (grouped, rep) = pipeline_maxlin_to_kmld(&inst, k, epsilon, source, budget)?;
                save_instance(&ProblemInstance::KMld(grouped), &out)?;
                emit(&ReducePipelineReport {
                    command: "reduce-pipeline".into(),
                    input,
                    report: rep,
                    out,
                })
            }
        },
        Command::Verify { which } => match which {
            VerifyCommand::P1 { family } => {
                let fam = load_family(&family)?;
                let violation = fam.check_p1();
                emit(&VerifyReport {
                    command: "verify-p1".into(),
                    ok: violation.is_none(),
                    detail: violation.map(|v| {
                        format!(
                            "function {} sends {} elements to bucket {}",
                            v.function, v.size, v.bucket
                        )
                    }),
                    trials: None,
                    failures: None,
                })
            }
            VerifyCommand::P2 {
                family,
                alpha,
                epsilon,
                budget,
                trials,
                seed,
            } => {
                let fam = load_family(&family)?;
                if let Some(trials) = trials {
                    let seed = seed.ok_or_else(|| {
                        Error::BadParams("--trials requires --seed".into())
                    })?;
                    let failures = fam.check_p2_sampled(alpha, epsilon, trials, seed)?;
                    emit(&VerifyReport {
                        command: "verify-p2".into(),
                        ok: failures == 0,
                        detail: None,
                        trials: Some(trials),
                        failures: Some(failures),
                    })
                } else {
                    let budget = resolve_budget(budget)?;
                    let ce = fam.check_p2_exhaustive(alpha, epsilon, budget)?;
                    emit(&VerifyReport {
                        command: "verify-p2".into(),
                        ok: ce.is_none(),
                        detail: ce.map(|c| format!("no member balances {:?}", c.subset)),
                        trials: None,
                        failures: None,
                    })
                }
            }
            VerifyCommand::C1 { cover } => {
                let cov = load_cover(&cover)?;
                let violation = cov.check_c1();
                emit(&VerifyReport {
                    command: "verify-c1".into(),
                    ok: violation.is_none(),
                    detail: violation.map(|v| {
                        format!("member {} has {} elements, above the size bound", v.index, v.size)
                    }),
                    trials: None,
                    failures: None,
                })
            }
            VerifyCommand::C2 {
                family,
                cover,
                alpha,
                epsilon,
                budget,
            } => {
                let budget = resolve_budget(budget)?;
                let fam = load_family(&family)?;
                let cov = load_cover(&cover)?;
                let ce = cov.check_c2_exhaustive(&fam, alpha, epsilon, budget)?;
                emit(&VerifyReport {
                    command: "verify-c2".into(),
                    ok: ce.is_none(),
                    detail: ce.map(|c| format!("no exact cover of {:?}", c.subset)),
                    trials: None,
                    failures: None,
                })
            }
        },
        Command::Solve { which } => match which {
            SolveCommand::Maxlin { input, budget } => {
                let budget = resolve_budget(budget)?;
                let inst = want_maxlin(load_instance(&input)?, &input)?;
                let (x, opt) = solve_maxlin_exact(&inst, budget)?;
                emit(&SolveReport {
                    command: "solve-maxlin".into(),
                    input,
                    found: true,
                    optimum: Some(opt),
                    witness: Some(x.residues().to_vec()),
                    weight_cap: None,
                })
            }
            SolveCommand::Mld {
                input,
                w_max,
                budget,
            } => {
                let budget = resolve_budget(budget)?;
                let inst = want_mld(load_instance(&input)?, &input)?;
                let cap = match w_max {
                    Some(w) => w.min(inst.matrix().cols()),
                    None => default_weight_cap(inst.gamma(), inst.ell(), inst.matrix().cols())?,
                };
                let found = solve_mld_min_weight(inst.matrix(), inst.target(), cap, budget)?;
                emit(&SolveReport {
                    command: "solve-mld".into(),
                    input,
                    found: found.is_some(),
                    optimum: found.as_ref().map(|(_, w)| *w),
                    witness: found.map(|(e, _)| e.residues().to_vec()),
                    weight_cap: Some(cap),
                })
            }
            SolveCommand::Kmld {
                input,
                w_max,
                budget,
            } => {
                let budget = resolve_budget(budget)?;
                let inst = want_kmld(load_instance(&input)?, &input)?;
                let cap = match w_max {
                    Some(w) => w.min(inst.matrix().cols()),
                    None => default_weight_cap(inst.gamma(), inst.k(), inst.matrix().cols())?,
                };
                let found = solve_mld_min_weight(inst.matrix(), inst.target(), cap, budget)?;
                emit(&SolveReport {
                    command: "solve-kmld".into(),
                    input,
                    found: found.is_some(),
                    optimum: found.as_ref().map(|(_, w)| *w),
                    witness: found.map(|(e, _)| e.residues().to_vec()),
                    weight_cap: Some(cap),
                })
            }
            SolveCommand::Ncp { input, budget } => {
                let budget = resolve_budget(budget)?;
                let inst = want_ncp(load_instance(&input)?, &input)?;
                let (z, dist) = solve_ncp_exact(inst.generator(), inst.target(), budget)?;
                emit(&SolveReport {
                    command: "solve-ncp".into(),
                    input,
                    found: true,
                    optimum: Some(dist),
                    witness: Some(z.residues().to_vec()),
                    weight_cap: None,
                })
            }
        },
        Command::Classify { input, budget } => {
            let budget = resolve_budget(budget)?;
            let inst = load_instance(&input)?;
            let verdict = classify_instance(&inst, budget)?;
            emit(&ClassifyReport {
                command: "classify".into(),
                input,
                kind: inst.kind().into(),
                verdict: verdict.verdict.as_str().into(),
                achieved: verdict.achieved,
                witness: verdict.witness.map(|w| w.residues().to_vec()),
            })
        }
    }
}

fn default_weight_cap(gamma: Rational, yes_weight: usize, cols: usize) -> covkit::Result<usize> {
    let cap = gamma * Rational::from_integer(yes_weight as i64);
    Ok(covkit::rational::floor_to_usize(cap)?.min(cols))
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::TooLarge { .. } | Error::BudgetExceeded { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(line) => {
            println!("{line}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
