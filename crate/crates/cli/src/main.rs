//! `resfin`: witnesses, verification and divisibility profiles from the
//! command line. Errors go to stderr as one JSON object per line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use resfin_core::arith::{dz, gauss_irreducible_count};
use resfin_core::error::{GroupError, ParseError, ProfileError};
use resfin_core::io::{profile_to_csv, threshold_samples_from_csv, witness_from_json, witness_to_json, WitnessLoadError};
use resfin_core::multipoly::{lemma_z_exponents, random_nonzero_multipoly, substitute_powers, ExponentMethod};
use resfin_core::profiler::{
    d_reduction, farb_profile, farb_z, farb_z_table, inequality_audit, threshold_check, Budget, CatalogGroup,
};
use resfin_core::ring::Characteristic;
use resfin_core::specfile::{load_spec, SpecFile};
use resfin_core::witness::{image_order, separate, verify_witness};

#[derive(Parser)]
#[command(name = "resfin", version, about = "Finite quotients witnessing nontrivial elements of linear groups")]
struct Cli {
    /// Seed for the randomized self-checks (recorded in their output).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a witness that a word is nontrivial.
    Witness {
        spec: PathBuf,
        #[arg(long)]
        word: String,
        /// Output file (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "")]
        budget: String,
    },
    /// Check a witness file against a group.
    Verify { spec: PathBuf, witness: PathBuf },
    /// Per-radius divisibility profile as CSV.
    Profile {
        spec: PathBuf,
        #[arg(long)]
        radius: usize,
        /// Budget overrides, e.g. "modulus=13,ball=10000".
        #[arg(long, default_value = "")]
        budget: String,
        /// Also run the reduction search on words up to this length.
        #[arg(long, default_value_t = 0)]
        d_reduction_radius: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smallest image order over the reduction family in which a word survives.
    DReduction {
        spec: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "")]
        budget: String,
    },
    /// |B(r)| for r = 0..=radius.
    Growth {
        spec: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value = "")]
        budget: String,
    },
    /// D_Z(i): the least m ≥ 2 not dividing i.
    Dz {
        #[arg(allow_hyphen_values = true)]
        i: BigInt,
    },
    /// F_Z(n), or an "n,farb" table at the given sample points.
    FarbZ {
        n: Option<u64>,
        /// Comma-separated sample points.
        #[arg(long, value_delimiter = ',')]
        samples: Vec<u64>,
    },
    /// Number of monic irreducibles of degree ℓ over F_p.
    GaussCount { p: BigInt, l: u64 },
    /// Audit w(n) ≤ F(n)^{s(F(n))} for n ≤ max.
    AuditZ {
        #[arg(long)]
        max: u64,
        #[arg(long, default_value = "Z")]
        group: String,
    },
    /// Trend of (ln F)²/ln ln n from a CSV of samples.
    Threshold { csv: PathBuf },
    /// Exponent selection on seeded random polynomials.
    LemmaZCheck {
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

/// A failure with its exit code and machine-readable kind.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: u8, kind: &'static str, message: impl Into<String>) -> Self {
        Failure { code, kind, message: message.into() }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::new(3, "parse", e.to_string())
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::IdentityWord => Failure::new(4, "identity-word", e.to_string()),
            GroupError::BallBudget { .. } => Failure::new(6, "budget", e.to_string()),
            GroupError::BadWord(_) | GroupError::UnknownLabel(_) => Failure::new(3, "bad-word", e.to_string()),
            _ => Failure::new(1, "group", e.to_string()),
        }
    }
}

impl From<ProfileError> for Failure {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::Group(g) => g.into(),
            ProfileError::NotFoundWithinBudget { .. } | ProfileError::HomBudget { .. } => {
                Failure::new(6, "budget", e.to_string())
            }
            ProfileError::Precondition(_) | ProfileError::UnknownGroup(_) | ProfileError::InsufficientRange => {
                Failure::new(3, "input", e.to_string())
            }
            ProfileError::Algebra(_) => Failure::new(1, "algebra", e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::new(1, "io", format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<SpecFile, Failure> {
    Ok(load_spec(path)?)
}

fn budget_for(file: &SpecFile, cli: &str) -> Result<Budget, Failure> {
    Ok(Budget::from_env()?.with_overrides(&file.budget_overrides)?.with_overrides(cli)?)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Witness { spec, word, output, budget } => {
            let file = load(&spec)?;
            let budget = budget_for(&file, &budget)?;
            let spec = &file.spec;
            let word = spec.parse_word(&word)?;
            let mut record = separate(spec, &word)?;
            record.image_order = image_order(spec, &record.hom, budget.max_closure);
            if !record.verified {
                return Err(Failure::new(1, "internal", "witness does not separate the word"));
            }
            emit(&output, &witness_to_json(spec, &record))
        }
        Command::Verify { spec, witness } => {
            let file = load(&spec)?;
            let text = fs::read_to_string(&witness).map_err(|e| io_failure(&witness, e))?;
            let record = match witness_from_json(&file.spec, &text) {
                Ok(r) => r,
                Err(WitnessLoadError::Malformed(m)) => return Err(Failure::new(3, "parse", m)),
                Err(WitnessLoadError::Rejected(reason)) => return Err(Failure::new(5, "rejected", reason.code())),
            };
            verify_witness(&file.spec, &record).map_err(|reason| Failure::new(5, "rejected", reason.code()))?;
            println!("ok");
            Ok(())
        }
        Command::Profile { spec, radius, budget, d_reduction_radius, output } => {
            let file = load(&spec)?;
            let budget = budget_for(&file, &budget)?;
            let profile = farb_profile(&file.spec, radius, &budget, d_reduction_radius)?;
            for failure in profile.failures() {
                let detail = match (&failure.witness, &failure.d_reduction) {
                    (Err(e), _) => e.clone(),
                    (_, Some(Err(e))) => e.clone(),
                    _ => String::new(),
                };
                eprintln!(
                    "{}",
                    json!({"warning": "element", "word": failure.word.render(&file.spec), "message": detail})
                );
            }
            emit(&output, &profile_to_csv(&profile))
        }
        Command::DReduction { spec, word, budget } => {
            let file = load(&spec)?;
            let budget = budget_for(&file, &budget)?;
            let word = file.spec.parse_word(&word)?;
            let r = d_reduction(&file.spec, &word, &budget)?;
            println!(
                "min_order={} exhaustive={} ring={} images=[{}] scope=congruence-quotients",
                r.min_order,
                r.exhaustive,
                r.ring,
                r.images.join(", ")
            );
            Ok(())
        }
        Command::Growth { spec, radius, budget } => {
            let file = load(&spec)?;
            let budget = budget_for(&file, &budget)?;
            let counts = file.spec.word_growth(radius, budget.max_ball)?;
            println!("r,ball_size");
            for (r, c) in counts.iter().enumerate() {
                println!("{r},{c}");
            }
            Ok(())
        }
        Command::Dz { i } => {
            let v = dz(&i).map_err(|e| Failure::new(3, "input", e.to_string()))?;
            println!("{v}");
            Ok(())
        }
        Command::FarbZ { n, samples } => {
            if samples.is_empty() {
                let n = n.ok_or_else(|| Failure::new(3, "input", "give n or --samples"))?;
                if n == 0 {
                    return Err(Failure::new(3, "input", "n must be at least 1"));
                }
                println!("{}", farb_z(n));
                return Ok(());
            }
            if samples.contains(&0) {
                return Err(Failure::new(3, "input", "sample points must be at least 1"));
            }
            let table = farb_z_table(*samples.iter().max().unwrap());
            println!("n,farb");
            for s in samples {
                println!("{s},{}", table[s as usize - 1]);
            }
            Ok(())
        }
        Command::GaussCount { p, l } => {
            let v = gauss_irreducible_count(&p, l).map_err(|e| Failure::new(3, "input", e.to_string()))?;
            println!("{v}");
            Ok(())
        }
        Command::AuditZ { max, group } => {
            let group: CatalogGroup = group.parse()?;
            let report = inequality_audit(group, max)?;
            println!("{report}");
            if report.all_pass() {
                Ok(())
            } else {
                Err(Failure::new(1, "audit", "inequality violated"))
            }
        }
        Command::Threshold { csv } => {
            let text = fs::read_to_string(&csv).map_err(|e| io_failure(&csv, e))?;
            let (samples, infinite) = threshold_samples_from_csv(&text).map_err(|m| Failure::new(3, "parse", m))?;
            let report = threshold_check(&samples, infinite)?;
            println!("{report}");
            Ok(())
        }
        Command::LemmaZCheck { count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut nonzero = 0;
            let mut within = 0;
            let mut recursion = 0;
            let mut disagreements = 0;
            for k in 0..count {
                let ch = match k % 3 {
                    0 => Characteristic::Zero,
                    1 => Characteristic::prime(2).expect("2 is prime"),
                    _ => Characteristic::prime(3).expect("3 is prime"),
                };
                let s = 1 + k % 3;
                let f = random_nonzero_multipoly(&mut rng, &ch, s, 5, 20, 6);
                let choice = lemma_z_exponents(&f).map_err(|e| Failure::new(1, "lemma-z", e.to_string()))?;
                let g = substitute_powers(&f, &choice.exponents).map_err(|e| Failure::new(1, "lemma-z", e.to_string()))?;
                nonzero += usize::from(!g.is_zero());
                if choice.method == ExponentMethod::DegreeRecursion {
                    recursion += 1;
                    within += usize::from(choice.bound_respected);
                }
                disagreements += usize::from(choice.interpretations_disagree);
            }
            println!(
                "seed={} count={count} nonzero={nonzero} recursion={recursion} within_bound={within} interpretations_disagree={disagreements}",
                cli.seed
            );
            if nonzero == count && within == recursion {
                Ok(())
            } else {
                Err(Failure::new(1, "lemma-z", "a substitution vanished or exceeded its bound"))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", json!({"error": f.kind, "message": f.message, "exit_code": f.code}));
            ExitCode::from(f.code)
        }
    }
}
