//! Command-line interface: reproducible experiments over the library with
//! file-based inputs and outputs.
//!
//! Structured objects travel as JSON, grids and distributions as CSV (see
//! the library's io module for the exact schemas). Commands that draw
//! randomness require an explicit seed; identical invocations produce
//! byte-identical outputs. On failure a machine-readable error JSON is
//! printed to stderr and the exit code is nonzero.

use bosind::distinguishability::{canonical_form, is_perfectly_distinguishable};
use bosind::interferometer::{occupations, outcome_distribution, permanent_oracle};
use bosind::io::{
    bounds_csv, distribution_csv, from_json_str, to_json_string, CertificateJson, ErrorJson,
    MeasureReportJson, ReconstructionReportJson, RecordsJson, StateJson, UnitaryJson, VectorJson,
};
use bosind::measures::{bounds_row, indistinguishable_part, p_k, trace_distance};
use bosind::operator::ModeAssignment;
use bosind::states::{dicke_state, random_invariant, symmetric_purification, InvariantState};
use bosind::symgroup::Rational;
use bosind::tensor_rep::schur_weyl_blocks;
use bosind::tomography::{
    design_unitaries, random_observable_basis, reconstruct_state, simulate_records,
};
use bosind::{Error, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "bosind",
    about = "Indistinguishability of identical bosons: bounds, measures, certificates, interferometer simulation, tomography",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Expected number of modes; cross-checked against file contents.
    #[arg(long = "M", value_name = "M")]
    modes: Option<usize>,
    /// Expected number of particles; cross-checked against file contents.
    #[arg(long = "N", value_name = "N")]
    particles: Option<usize>,
    /// Invariance/certification tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the closed-form p_2 -> p_N bounds against the exact
    /// linear-program solver (CSV).
    BoundsTable {
        /// Particle numbers, comma separated.
        #[arg(long = "n-list", value_delimiter = ',', default_value = "2,3,4,6,10")]
        n_list: Vec<usize>,
        /// Number of equally spaced p2 grid points in [0, 1].
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Measure a state file: p_k, Schur-Weyl weights, trace-distance check
    /// (JSON report).
    Measure {
        state: std::path::PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Certify perfect distinguishability and, when positive, produce the
    /// canonical-form assignments (JSON certificate).
    Certify {
        state: std::path::PathBuf,
        /// Seed for the canonical-form construction (mandatory: the
        /// construction draws random orbit seeds).
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Evolve a state through an interferometer and tabulate the outcome
    /// distribution (CSV).
    Simulate {
        state: std::path::PathBuf,
        /// Unitary JSON file.
        #[arg(long)]
        unitary: std::path::PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Reconstruct a state from measurement records; writes the state JSON
    /// to --out and the reconstruction report JSON to stdout.
    Tomography {
        /// Records JSON file.
        #[arg(long)]
        records: std::path::PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Canonical symmetric purification of a state (vector JSON on the
    /// doubled space).
    Purify {
        state: std::path::PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Run the oracle-equivalence self-test suite.
    Selftest {
        /// Seed for the randomized checks.
        #[arg(long)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => {}
        Err(e) => {
            let json = ErrorJson::from_error(&e);
            eprintln!(
                "{}",
                serde_json::to_string(&json).unwrap_or_else(|_| e.to_string())
            );
            std::process::exit(1);
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::BoundsTable {
            n_list,
            grid,
            common,
        } => {
            if n_list.is_empty() || n_list.iter().any(|&n| n < 2) {
                return Err(Error::Validation(
                    "the N list must contain values >= 2".into(),
                ));
            }
            if grid < 2 {
                return Err(Error::Validation("need at least 2 grid points".into()));
            }
            let mut rows = Vec::new();
            for &n in &n_list {
                for k in 0..grid {
                    let p2 = Rational::new(k as i128, (grid - 1) as i128);
                    rows.push(bounds_row(n, p2)?);
                }
            }
            emit(&common.out, bounds_csv(&rows))
        }
        Command::Measure { state, common } => {
            let rho = load_state(&state, &common)?;
            let n = rho.particles();
            let p_values: Vec<(usize, f64)> = (2..=n)
                .map(|k| Ok((k, p_k(&rho, k)?)))
                .collect::<Result<_>>()?;
            let blocks = schur_weyl_blocks(&rho)?;
            let dist = match indistinguishable_part(&rho) {
                Ok((ind, _)) => Some(trace_distance(ind.operator(), rho.operator())?),
                Err(Error::NoSymmetricSupport { .. }) => None,
                Err(e) => return Err(e),
            };
            let report = MeasureReportJson::from_blocks(&blocks, &p_values, dist);
            emit(&common.out, to_json_string(&report)?)
        }
        Command::Certify {
            state,
            seed,
            common,
        } => {
            let rho = load_state(&state, &common)?;
            let tol = common
                .tol
                .unwrap_or(bosind::distinguishability::CHARACTER_TOL);
            let cert = is_perfectly_distinguishable(&rho, tol)?;
            let json = if cert.distinguishable {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let form = canonical_form(&rho, &mut rng)?;
                CertificateJson::from_certificate(&form.certificate, Some(&form.assignments))
            } else {
                CertificateJson::from_certificate(&cert, None)
            };
            emit(&common.out, to_json_string(&json)?)
        }
        Command::Simulate {
            state,
            unitary,
            common,
        } => {
            let rho = load_state(&state, &common)?;
            let text = read_file(&unitary)?;
            let u: UnitaryJson = from_json_str(&text)?;
            let u = u.to_matrix()?;
            let dist = outcome_distribution(&rho, &u)?;
            emit(&common.out, distribution_csv(&dist, rho.modes()))
        }
        Command::Tomography { records, common } => {
            let text = read_file(&records)?;
            let parsed: RecordsJson = from_json_str(&text)?;
            check_dims(parsed.m, parsed.n, &common)?;
            let recs = parsed.to_records()?;
            let (state, report) = reconstruct_state(&recs, parsed.m, parsed.n)?;
            let out = common.out.clone().ok_or_else(|| {
                Error::Validation("tomography requires --out for the reconstructed state".into())
            })?;
            write_file(&out, &to_json_string(&StateJson::from_state(&state))?)?;
            print!(
                "{}",
                to_json_string(&ReconstructionReportJson::from_report(&report))?
            );
            Ok(())
        }
        Command::Purify { state, common } => {
            let rho = load_state(&state, &common)?;
            let psi = symmetric_purification(&rho)?;
            let json = VectorJson::from_vector(&psi, rho.modes(), rho.particles());
            emit(&common.out, to_json_string(&json)?)
        }
        Command::Selftest { seed } => selftest(seed),
    }
}

fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &std::path::Path, content: &str) -> Result<()> {
    std::fs::write(path, content)
        .map_err(|e| Error::Validation(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &Option<std::path::PathBuf>, content: String) -> Result<()> {
    match out {
        Some(path) => write_file(path, &content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn check_dims(m: usize, n: usize, common: &Common) -> Result<()> {
    if let Some(expected) = common.modes {
        if expected != m {
            return Err(Error::Validation(format!(
                "--M {expected} does not match the file's M = {m}"
            )));
        }
    }
    if let Some(expected) = common.particles {
        if expected != n {
            return Err(Error::Validation(format!(
                "--N {expected} does not match the file's N = {n}"
            )));
        }
    }
    Ok(())
}

fn load_state(path: &std::path::Path, common: &Common) -> Result<InvariantState<f64>> {
    let text = read_file(path)?;
    let json: StateJson = from_json_str(&text)?;
    check_dims(json.m, json.n, common)?;
    let op = json.to_operator()?;
    match common.tol {
        Some(tol) => InvariantState::certify_with(op, tol),
        None => InvariantState::certify(op),
    }
}

/// Oracle-equivalence checks runnable in the field: each line reports one
/// comparison of two independent computation routes.
fn selftest(seed: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool| {
        println!("selftest {name}: {}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    // permanent oracle vs first quantization
    let mut worst = 0.0f64;
    for (m, n) in [(2usize, 2usize), (2, 3), (3, 2), (3, 3)] {
        for _ in 0..5 {
            let u = bosind::random::random_unitary::<f64, _>(m, &mut rng);
            for m_in in occupations(m, n) {
                let rho = dicke_state::<f64>(&m_in.canonical_assignment()?)?;
                let dist = outcome_distribution(&rho, &u)?;
                for m_out in occupations(m, n) {
                    let gap =
                        (dist.probability(&m_out) - permanent_oracle(&u, &m_in, &m_out)?).abs();
                    worst = worst.max(gap);
                }
            }
        }
    }
    check(
        "interferometer vs permanent oracle (<= 1e-9)",
        worst <= 1e-9,
    );

    // HOM dip
    let rho = dicke_state::<f64>(&ModeAssignment::new(vec![1, 2], 2)?)?;
    let dist = outcome_distribution(&rho, &bosind::interferometer::beamsplitter::<f64>())?;
    let coincidence = dist.probability(&bosind::interferometer::ModeOccupation::new(vec![1, 1])?);
    check("HOM coincidence (<= 1e-12)", coincidence.abs() <= 1e-12);

    // closed-form bounds vs LP on a coarse grid
    let mut bounds_ok = true;
    for n in [2usize, 3, 6, 10] {
        for k in 0..=20i128 {
            let row = bounds_row(n, Rational::new(k, 20))?;
            bounds_ok &= row.lower_lp == row.lower_closed && row.upper_lp == row.upper_closed;
        }
    }
    check("closed-form bounds vs LP oracle (exact)", bounds_ok);

    // Schur-Weyl reassembly and weight consistency
    let mut sw_ok = true;
    for _ in 0..5 {
        let rho = random_invariant::<f64, _>(2, 3, &mut rng)?;
        let blocks = schur_weyl_blocks(&rho)?;
        sw_ok &= (blocks.total_weight() - 1.0).abs() < 1e-10;
        sw_ok &= blocks.reassemble()?.distance(rho.operator()) < 1e-8;
        sw_ok &= (blocks.symmetric_weight() - p_k(&rho, 3)?).abs() < 1e-10;
    }
    check("Schur-Weyl block reassembly (<= 1e-8)", sw_ok);

    // purification round trip
    let mut pure_ok = true;
    for _ in 0..5 {
        let rho = random_invariant::<f64, _>(2, 2, &mut rng)?;
        let psi = symmetric_purification(&rho)?;
        let reduced = bosind::operator::reduced_density(&psi, 2, 2, 2)?;
        pure_ok &= reduced.distance(rho.operator()) < 1e-8;
    }
    check("purification reduction (<= 1e-8)", pure_ok);

    // tomography round trip
    let target = random_invariant::<f64, _>(2, 2, &mut rng)?;
    let basis = random_observable_basis::<f64, _>(2, 2, &mut rng)?;
    let records = simulate_records(&target, &design_unitaries(&basis))?;
    let (rec, _) = reconstruct_state(&records, 2, 2)?;
    check(
        "tomography round trip (<= 1e-6)",
        rec.operator().distance(target.operator()) < 1e-6,
    );

    if failures > 0 {
        return Err(Error::Degeneracy(format!(
            "{failures} selftest check(s) failed"
        )));
    }
    Ok(())
}
