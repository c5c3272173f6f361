//! Command-line front end: parse an event expression, run one query,
//! print exact rationals.
//!
//! Exit codes: 0 on success, 1 when a refutation or law violation was
//! found, 2 on usage or parse errors.

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use natdens_core::actual::validate_cauchy_grid;
use natdens_core::omniscience::BoundaryKind;
use natdens_core::rational::decimal_string;
use natdens_core::structure::{audit, AuditReport, DensityElem, Subset};
use natdens_core::{
    density_lpo_regular, elaborate, lpo_regular, oscillation_report, parse, witness_from_separation,
    witness_search, ActualEvent, DensityStructure, Elaborated, FiniteFuzzy, FiniteFuzzySpace,
    FiniteKolmogorov, Modulus, ProbabilityStructure, Rational, RegularEvent, Verdict,
};

#[derive(Parser)]
#[command(name = "natdens", version, about = "exact natural-density queries over binary event streams")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Instance {
    Density,
    Kolmogorov,
    Fuzzy,
}

#[derive(Subcommand)]
enum Cmd {
    /// Limiting frequency with a certified error bound
    Density {
        /// Event expression, e.g. "reg([1],[1,0])"
        expr: String,
        /// Approximant index n; the printed value is within 1/n
        #[arg(long, default_value_t = 8)]
        precision: u64,
        /// Convergence rate to assume for non-periodic expressions,
        /// e.g. "4n+1" (taken on trust; use `check` to probe it)
        #[arg(long)]
        modulus: Option<String>,
        /// Append a decimal rendering with this many digits
        #[arg(long)]
        decimal: Option<u32>,
    },
    /// Exact running frequencies over an initial segment
    Freq {
        expr: String,
        #[arg(long)]
        upto: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Probe a convergence certificate on a sample grid
    Check {
        expr: String,
        /// Rate to probe instead of the expression's own certificate
        #[arg(long)]
        modulus: Option<String>,
        /// Largest certificate index n in the grid
        #[arg(long, default_value_t = 16)]
        grid_n: u64,
        /// Largest offset past each settling point
        #[arg(long, default_value_t = 64)]
        grid_offset: u64,
    },
    /// Decide whether a success ever occurs (total on periodic
    /// expressions, budgeted search otherwise)
    Decide {
        expr: String,
        /// Answer at the probability level instead of the witness level
        #[arg(long)]
        pp: bool,
        /// Scan budget for non-periodic expressions
        #[arg(long, default_value_t = 4096)]
        budget: u64,
        /// Convergence rate enabling probability-level answers for
        /// non-periodic expressions
        #[arg(long)]
        modulus: Option<String>,
    },
    /// Run-boundary report on how the running frequency evolves
    Oscillate {
        expr: String,
        #[arg(long)]
        upto: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Audit the probability-structure laws over a sample
    Audit {
        instance: Instance,
        /// Random periodic events in the density sample
        #[arg(long, default_value_t = 50)]
        samples: u64,
        /// Approximant index for probability comparisons
        #[arg(long, default_value_t = 32)]
        precision: u64,
        /// Point count for the finite instances (kolmogorov <= 5, fuzzy <= 3)
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 0xD1CE)]
        seed: u64,
        /// Seed a deliberate strictness fault (kolmogorov only)
        #[arg(long)]
        fault: bool,
    },
}

struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<natdens_core::ParseError> for UsageError {
    fn from(e: natdens_core::ParseError) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_affine_modulus(text: &str) -> Result<Modulus, UsageError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || UsageError(format!("modulus must look like `n`, `4n` or `4n+1`, got `{text}`"));
    let n_at = t.find('n').ok_or_else(bad)?;
    let slope: u128 = match &t[..n_at] {
        "" => 1,
        digits => digits.parse().map_err(|_| bad())?,
    };
    let intercept: u128 = match &t[n_at + 1..] {
        "" => 0,
        rest => rest.strip_prefix('+').ok_or_else(bad)?.parse().map_err(|_| bad())?,
    };
    if slope == 0 {
        return Err(UsageError(format!("modulus `{text}` is not strictly increasing")));
    }
    Ok(Modulus::affine(slope, intercept))
}

/// The expression's probability certificate: its own when the expression
/// is periodic, a supplied rate otherwise. An explicit `--modulus`
/// always wins so suspect rates can be probed.
fn certified(el: &Elaborated, modulus: Option<&str>) -> Result<Option<ActualEvent>, UsageError> {
    if let Some(text) = modulus {
        let m = parse_affine_modulus(text)?;
        return Ok(Some(ActualEvent::from_parts(el.potential(), m)));
    }
    match el {
        Elaborated::Regular { witness, .. } => Ok(Some(witness.clone())),
        Elaborated::General(_) => Ok(None),
    }
}

fn no_witness(what: &str) -> UsageError {
    UsageError(format!(
        "no convergence certificate: the expression is not syntactically periodic, \
         so {what} needs --modulus"
    ))
}

fn run(cmd: Cmd) -> Result<ExitCode, UsageError> {
    match cmd {
        Cmd::Density { expr, precision, modulus, decimal } => {
            if precision == 0 {
                return Err(UsageError("precision must be at least 1".into()));
            }
            let el = elaborate(&parse(&expr)?);
            let rendered = |q: &Rational| match decimal {
                Some(k) => format!(" (decimal rendering: {})", decimal_string(q, k)),
                None => String::new(),
            };
            match (&el, &modulus) {
                (Elaborated::Regular { event, witness }, None) => {
                    let d = event.density();
                    println!("{d} (closed form), approximant error ≤ 1/{precision}");
                    let q = witness.probability().approximant(precision);
                    println!("approximant at n={precision}: {q}{}", rendered(&q));
                }
                _ => {
                    let a = certified(&el, modulus.as_deref())?
                        .ok_or_else(|| no_witness("density"))?;
                    let q = a.probability().approximant(precision);
                    println!(
                        "approximant at n={precision}: {q} (modulus {} taken on trust){}",
                        a.modulus(),
                        rendered(&q)
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Freq { expr, upto, format } => {
            if upto == 0 {
                return Err(UsageError("--upto must be at least 1".into()));
            }
            let e = elaborate(&parse(&expr)?).potential();
            for n in 1..=upto {
                let q = e.frequency(n);
                match format {
                    Format::Text => println!("freq({n}) = {q}"),
                    Format::Tsv => println!("{n}\t{}\t{}", q.numer(), q.denom()),
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Check { expr, modulus, grid_n, grid_offset } => {
            let el = elaborate(&parse(&expr)?);
            let a = certified(&el, modulus.as_deref())?.ok_or_else(|| no_witness("check"))?;
            match validate_cauchy_grid(&a, grid_n, grid_offset) {
                Verdict::ConsistentUpTo(_) => {
                    println!(
                        "consistent: modulus {} on grid n ≤ {grid_n}, offsets ≤ {grid_offset}",
                        a.modulus()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::RefutedAt((n, i, j)) => {
                    println!(
                        "REFUTED: modulus {} at n={n}: frequencies at offsets {i} and {j} \
                         past the settling point differ by more than 1/{n}",
                        a.modulus()
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }

        Cmd::Decide { expr, pp, budget, modulus } => {
            let el = elaborate(&parse(&expr)?);
            match (&el, pp) {
                (Elaborated::Regular { event, .. }, false) => {
                    println!("{}", lpo_regular(event));
                    Ok(ExitCode::SUCCESS)
                }
                (Elaborated::Regular { event, .. }, true) => {
                    println!("{}", density_lpo_regular(event));
                    Ok(ExitCode::SUCCESS)
                }
                (Elaborated::General(e), false) => {
                    println!("{}", witness_search(e, budget));
                    Ok(ExitCode::SUCCESS)
                }
                (Elaborated::General(_), true) => {
                    let a = certified(&el, modulus.as_deref())?
                        .ok_or_else(|| no_witness("a probability-level decision"))?;
                    match witness_from_separation(&a, budget) {
                        Ok(v) => {
                            println!("{v}");
                            Ok(ExitCode::SUCCESS)
                        }
                        Err(e) => {
                            println!("CONTRADICTION: {e}");
                            Ok(ExitCode::from(1))
                        }
                    }
                }
            }
        }

        Cmd::Oscillate { expr, upto, format } => {
            if upto == 0 {
                return Err(UsageError("--upto must be at least 1".into()));
            }
            let e = elaborate(&parse(&expr)?).potential();
            let rep = oscillation_report(&e, upto);
            let kind = |k: BoundaryKind| match k {
                BoundaryKind::SuccessRunEnd => "ones-end",
                BoundaryKind::FailureRunEnd => "zeros-end",
            };
            match format {
                Format::Text => {
                    println!("scanned {} trials, {} run boundaries", rep.scanned, rep.boundaries.len());
                    for row in &rep.boundaries {
                        println!(
                            "{:>10}  {}  {}  min {}  max {}",
                            row.index,
                            row.frequency,
                            kind(row.kind),
                            row.running_min,
                            row.running_max
                        );
                    }
                    println!("tail window [{}, {}]", rep.tail_start, rep.scanned);
                    println!("tail min {}", rep.tail_min);
                    println!("tail max {}", rep.tail_max);
                    match rep.gap_exceeds_inverse {
                        Some(n) => {
                            println!("persistent gap {}, exceeds 1/n from n = {n}", rep.persistent_gap)
                        }
                        None => println!("persistent gap 0"),
                    }
                }
                Format::Tsv => {
                    for row in &rep.boundaries {
                        println!(
                            "{}\t{}\t{}\t{}\t{}",
                            row.index,
                            row.frequency.numer(),
                            row.frequency.denom(),
                            row.running_min,
                            row.running_max
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Cmd::Audit { instance, samples, precision, size, seed, fault } => {
            if fault && instance != Instance::Kolmogorov {
                return Err(UsageError(
                    "--fault seeds a probability override, which only the kolmogorov \
                     instance supports"
                        .into(),
                ));
            }
            let report = match instance {
                Instance::Density => {
                    let s = DensityStructure::new();
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut sample = vec![s.bot(), s.top()];
                    for _ in 0..samples {
                        sample.push(DensityElem::from_regular(random_regular(&mut rng, 8, 8)));
                    }
                    audit(&s, &sample, precision)
                }
                Instance::Kolmogorov => {
                    if fault {
                        let s = FiniteKolmogorov::uniform(["a", "b"])
                            .expect("uniform weights")
                            .with_prob_override(Subset(0), natdens_core::rat(1, 10));
                        let sample = vec![s.subset(&["a"])];
                        audit(&s, &sample, precision)
                    } else {
                        if !(1..=5).contains(&size) {
                            return Err(UsageError("kolmogorov size must be 1..=5".into()));
                        }
                        let labels: Vec<String> =
                            ('a'..).take(size).map(|c| c.to_string()).collect();
                        let s = FiniteKolmogorov::uniform(labels).expect("uniform weights");
                        let sample = s.all_subsets();
                        audit(&s, &sample, precision)
                    }
                }
                Instance::Fuzzy => {
                    if !(1..=3).contains(&size) {
                        return Err(UsageError(
                            "fuzzy size must be 1..=3 (the sample has 5^size elements)".into(),
                        ));
                    }
                    let labels: Vec<String> = ('a'..).take(size).map(|c| c.to_string()).collect();
                    let space = FiniteFuzzySpace::uniform(labels).expect("uniform weights");
                    let s = FiniteFuzzy::new(space);
                    let sample = degree_grid_sample(&s, size);
                    audit(&s, &sample, precision)
                }
            };
            print!("{report}");
            Ok(exit_for(&report))
        }
    }
}

fn exit_for(report: &AuditReport) -> ExitCode {
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn random_regular(rng: &mut ChaCha8Rng, max_pre: usize, max_per: usize) -> RegularEvent {
    let la = rng.gen_range(0..=max_pre);
    let lp = rng.gen_range(1..=max_per);
    let pre: Vec<u8> = (0..la).map(|_| rng.gen_range(0..=1)).collect();
    let per: Vec<u8> = (0..lp).map(|_| rng.gen_range(0..=1)).collect();
    RegularEvent::new(pre, per).expect("nonempty period")
}

/// Every fuzzy element whose degrees come from {0, 1/4, 1/2, 3/4, 1}.
fn degree_grid_sample(s: &FiniteFuzzy, size: usize) -> Vec<Vec<Rational>> {
    let grid: Vec<Rational> =
        [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)].iter().map(|&(n, d)| natdens_core::rat(n, d)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; size];
    loop {
        let degrees: Vec<Rational> = idx.iter().map(|&i| grid[i].clone()).collect();
        out.push(s.element(degrees).expect("grid degrees are valid"));
        let mut k = 0;
        loop {
            if k == size {
                return out;
            }
            idx[k] += 1;
            if idx[k] < grid.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
