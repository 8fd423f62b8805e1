//! Command-line front end: instance lifecycle, verification suites, fiber
//! queries, and machine-readable reports.
//!
//! Exit codes: 0 pass, 1 check failure, 2 genericity exhaustion,
//! 3 I/O or schema error, 4 usage error.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use pfk3::config::Budget;
use pfk3::construction::{
    from_instance_file, point_on_y, sample_instance, to_instance_file, InstanceFile,
    PfaffianInstance,
};
use pfk3::correspondence::{fiber_over_y, fiber_statistics};
use pfk3::report::{
    canonical_json, fp_values, FiberStatsReport, MapPointReport, SplitPointRecord,
    MAP_POINT_SCHEMA, STATS_SCHEMA,
};
use pfk3::verify::{run_suite, Suite, SuiteOptions};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_PASS: u8 = 0;
const EXIT_CHECK_FAILURE: u8 = 1;
const EXIT_GENERICITY: u8 = 2;
const EXIT_IO_SCHEMA: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pfk3",
    version,
    about = "Exact verification toolkit for Pfaffian cubic fourfolds and their K3 surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum KCheck {
    All,
    Pr,
    En,
    Mukai,
}

#[derive(Subcommand)]
enum Command {
    /// Sample six skew forms, certify the instance, and write it out.
    Sample {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 32003)]
        prime: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite against an instance file.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        /// Number of fiber-over-Y checks (default: 5 fast, 20 full).
        #[arg(long)]
        fibers: Option<usize>,
        /// Number of fiber-pair checks (default: 3 fast, 10 full).
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        /// Emit the report as canonical JSON on standard output.
        #[arg(long)]
        json: bool,
        /// Record wall times (reports stop being byte-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Sample a point y of Y and evaluate the degree-4 fiber xi(y).
    MapPoint {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Evaluate this many fibers and report statistics instead.
        #[arg(long)]
        stats: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Run the instance-independent K-theory identity suites.
    Ktheory {
        #[arg(long, value_enum, default_value_t = KCheck::All)]
        check: KCheck,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                print!("{e}");
                ExitCode::from(EXIT_PASS)
            } else {
                eprint!("{e}");
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    let budget = Budget::from_env();
    let code = match cli.command {
        Command::Sample { seed, prime, out } => cmd_sample(seed, prime, out.as_deref(), &budget),
        Command::Verify {
            instance,
            fibers,
            pairs,
            suite,
            json,
            timings,
        } => cmd_verify(&instance, fibers, pairs, suite, json, timings, &budget),
        Command::MapPoint {
            instance,
            seed,
            stats,
            json,
        } => cmd_map_point(&instance, seed, stats, json, &budget),
        Command::Ktheory { check, json } => cmd_ktheory(check, json),
    };
    ExitCode::from(code)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64 with the first twelve primes.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = 1u64;
        let mut base = a as u128;
        let mut e = d;
        let m = n as u128;
        while e > 0 {
            if e & 1 == 1 {
                x = ((x as u128 * base) % m) as u64;
            }
            base = base * base % m;
            e >>= 1;
        }
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn cmd_sample(seed: u64, prime: u64, out: Option<&Path>, budget: &Budget) -> u8 {
    if !is_prime(prime) || prime <= 10_000 {
        eprintln!("error: --prime must be a prime larger than 10000 (got {prime})");
        return EXIT_USAGE;
    }
    let inst = match sample_instance(seed, prime, budget) {
        Ok(inst) => inst,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_GENERICITY;
        }
    };
    let file = to_instance_file(&inst);
    let json = match canonical_json(&file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: serialization failed: {e}");
            return EXIT_IO_SCHEMA;
        }
    };
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_IO_SCHEMA;
            }
            eprintln!(
                "certified instance seed={seed} prime={prime} written to {}",
                path.display()
            );
        }
        None => print!("{json}"),
    }
    EXIT_PASS
}

fn load_instance(path: &Path) -> Result<PfaffianInstance, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_IO_SCHEMA
    })?;
    let file: InstanceFile = serde_json::from_str(&text).map_err(|e| {
        eprintln!("error: {} is not a valid instance file: {e}", path.display());
        EXIT_IO_SCHEMA
    })?;
    from_instance_file(&file).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_IO_SCHEMA
    })
}

fn cmd_verify(
    path: &Path,
    fibers: Option<usize>,
    pairs: Option<usize>,
    suite: SuiteArg,
    json: bool,
    timings: bool,
    budget: &Budget,
) -> u8 {
    let inst = match load_instance(path) {
        Ok(inst) => inst,
        Err(code) => return code,
    };
    let opts = SuiteOptions {
        suite: match suite {
            SuiteArg::Fast => Suite::Fast,
            SuiteArg::Full => Suite::Full,
        },
        fibers,
        pairs,
        timings,
    };
    let report = run_suite(&inst, &opts, budget);
    if json {
        match canonical_json(&report) {
            Ok(s) => print!("{s}"),
            Err(e) => {
                eprintln!("error: serialization failed: {e}");
                return EXIT_IO_SCHEMA;
            }
        }
    } else {
        println!(
            "pfk3 verify: seed={} prime={} suite={}",
            report.seed,
            report.prime,
            opts.suite.name()
        );
        for check in &report.checks {
            let time = check
                .wall_ms
                .map(|ms| format!(" [{ms} ms]"))
                .unwrap_or_default();
            println!(
                "  {} {}{} — {}",
                if check.passed() { "PASS" } else { "FAIL" },
                check.name,
                time,
                check.anchor
            );
            if !check.passed() {
                if let Some(err) = check.witness.get("error") {
                    println!("       {err}");
                }
            }
        }
        println!("verdict: {}", report.verdict);
    }
    if report.passed() {
        EXIT_PASS
    } else {
        if let Some(first) = report.first_failure() {
            eprintln!("check failed: {} ({})", first.name, first.anchor);
        }
        EXIT_CHECK_FAILURE
    }
}

fn cmd_map_point(
    path: &Path,
    seed: u64,
    stats: Option<usize>,
    json: bool,
    budget: &Budget,
) -> u8 {
    let inst = match load_instance(path) {
        Ok(inst) => inst,
        Err(code) => return code,
    };
    if let Some(count) = stats {
        return map_point_stats(&inst, seed, count, json, budget);
    }
    let y = match point_on_y(&inst, seed) {
        Ok(y) => y,
        Err(e) => {
            eprintln!("error: cannot sample a point of Y: {e}");
            return EXIT_CHECK_FAILURE;
        }
    };
    let fiber = match fiber_over_y(&inst, &y, budget) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: fiber computation failed: {e}");
            return EXIT_CHECK_FAILURE;
        }
    };
    let report = MapPointReport {
        schema: MAP_POINT_SCHEMA.into(),
        seed,
        prime: inst.p,
        y: fp_values(&fiber.y),
        status: if fiber.length.is_some() {
            "ok".into()
        } else {
            "degenerate".into()
        },
        length: fiber.length,
        dimension: fiber.dimension,
        eliminant_factor_degrees: fiber.eliminant_factor_degrees.clone(),
        eliminant_squarefree: fiber.eliminant_squarefree,
        split_points: fiber
            .split_points
            .iter()
            .zip(&fiber.split_multiplicities)
            .map(|(pt, &m)| SplitPointRecord {
                plucker: fp_values(&pt.plucker),
                plane_basis: vec![fp_values(&pt.basis.0), fp_values(&pt.basis.1)],
                multiplicity: m,
            })
            .collect(),
        wall_ms: None,
    };
    if json {
        match canonical_json(&report) {
            Ok(s) => print!("{s}"),
            Err(e) => {
                eprintln!("error: serialization failed: {e}");
                return EXIT_IO_SCHEMA;
            }
        }
    } else {
        println!("y = {:?}", report.y);
        match report.length {
            Some(len) => {
                println!("fiber length {len}; eliminant factors (degree, multiplicity):");
                println!("  {:?}", report.eliminant_factor_degrees);
                println!("  squarefree: {}", report.eliminant_squarefree);
                for sp in &report.split_points {
                    println!("  split point {:?} (multiplicity {})", sp.plucker, sp.multiplicity);
                }
            }
            None => println!("degenerate fiber of dimension {}", report.dimension),
        }
    }
    EXIT_PASS
}

fn map_point_stats(
    inst: &PfaffianInstance,
    seed: u64,
    count: usize,
    json: bool,
    budget: &Budget,
) -> u8 {
    let stats = match fiber_statistics(inst, count, seed, budget) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: statistics run failed: {e}");
            return EXIT_CHECK_FAILURE;
        }
    };
    let report = FiberStatsReport {
        schema: STATS_SCHEMA.into(),
        seed,
        prime: inst.p,
        fibers: stats.fibers,
        length_four: stats.length_four,
        squarefree: stats.squarefree,
        squarefree_percent: if stats.fibers == 0 {
            0
        } else {
            stats.squarefree * 100 / stats.fibers
        },
        degree_patterns: stats.degree_patterns.clone(),
    };
    if json {
        match canonical_json(&report) {
            Ok(s) => print!("{s}"),
            Err(e) => {
                eprintln!("error: serialization failed: {e}");
                return EXIT_IO_SCHEMA;
            }
        }
    } else {
        println!(
            "{} fibers: {} of length 4, {} squarefree eliminants ({}%)",
            report.fibers, report.length_four, report.squarefree, report.squarefree_percent
        );
        println!("residue-degree patterns:");
        for (pattern, n) in &report.degree_patterns {
            println!("  {pattern:?}: {n}");
        }
    }
    EXIT_PASS
}

fn cmd_ktheory(check: KCheck, json: bool) -> u8 {
    let inv = pfk3::ktheory::compute_invariants();
    let relevant: Vec<&str> = match check {
        KCheck::All => inv.identities.keys().map(|k| k.as_str()).collect(),
        KCheck::Pr => vec![
            "projector_kills_exceptional",
            "projector_kills_koszul_combinations",
            "projector_of_point_pinned",
            "projector_idempotent",
        ],
        KCheck::En => vec!["en_binomial_identity"],
        KCheck::Mukai => vec!["mukai_matches_chi"],
    };
    let ok = relevant
        .iter()
        .all(|k| inv.identities.get(*k).copied().unwrap_or(false));
    if json {
        let wrapped = serde_json::json!({
            "schema": "pfk3-ktheory/1",
            "check": match check {
                KCheck::All => "all",
                KCheck::Pr => "pr",
                KCheck::En => "en",
                KCheck::Mukai => "mukai",
            },
            "invariants": serde_json::to_value(&inv).unwrap_or_default(),
            "verdict": if ok { "pass" } else { "fail" },
        });
        match canonical_json(&wrapped) {
            Ok(s) => print!("{s}"),
            Err(e) => {
                eprintln!("error: serialization failed: {e}");
                return EXIT_IO_SCHEMA;
            }
        }
    } else {
        match check {
            KCheck::All | KCheck::Pr => {
                println!(
                    "pr([point]) = [point] {:+}*[O(1)] {:+}*[O] {:+}*[O(-1)]",
                    inv.projector_of_point[1], inv.projector_of_point[2], inv.projector_of_point[3]
                );
                println!("chi(pr(point), pr(point)) = {}", inv.chi_pr_point);
            }
            _ => {}
        }
        match check {
            KCheck::All | KCheck::En => {
                let hp = pfk3::ktheory::expected_fiber_hp();
                let values: Vec<String> =
                    (0..4).map(|n| hp.eval_i(n).to_string()).collect();
                println!(
                    "Eagon-Northcott Hilbert values (n = 0..3): {}",
                    values.join(", ")
                );
            }
            _ => {}
        }
        match check {
            KCheck::All | KCheck::Mukai => {
                println!(
                    "Mukai pairings: (1,0,-3)^2 = {}, ext^1 = {}, (1,0,1)^2 = {}",
                    inv.mukai_ideal_self, inv.mukai_ideal_ext1, inv.mukai_structure_self
                );
            }
            _ => {}
        }
        if matches!(check, KCheck::All) {
            println!("Euler characteristics of twists:");
            for (k, v) in &inv.euler_of_twist {
                println!("  chi(O({k})) = {v}");
            }
            println!("identities:");
            for (name, holds) in &inv.identities {
                println!("  {} {}", if *holds { "PASS" } else { "FAIL" }, name);
            }
        }
        println!("verdict: {}", if ok { "pass" } else { "fail" });
    }
    if ok {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILURE
    }
}
