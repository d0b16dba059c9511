//! Command-line front end: runs the verification suites of the `residua`
//! library and emits report envelopes (human text on stdout, canonical
//! machine record at `--out`).
//!
//! Exit status: 0 when every check passes, 1 when any check fails,
//! 2 on usage errors (including size-cap violations without the
//! explicit override).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use residua::forms::{bott_h, calculus_invariant_trials, twisted_form_basis};
use residua::griffiths::vanishing_hodge_numbers;
use residua::poly::{binom, tjurina_total, Tjurina};
use residua::report::{render_dims, CheckRecord, ReportEnvelope};
use residua::strata::{
    fiber_surjectivity_check, jet_separation_check, stratum_codim_estimate, JetSpec, StrataMode,
};
use residua::universal::UniversalEngine;
use residua::{HomogPoly, ProblemSpec};

/// Largest graded piece (by ambient dimension) a default run will put
/// through exact elimination; larger pieces are skipped and reported as
/// info unless `--override-size-cap` is given.
const SIZE_CAP: usize = 50_000;

#[derive(Parser)]
#[command(
    name = "residua",
    version,
    about = "Exact residue calculus on hypersurface families: pole-order Hodge \
             filtrations, characteristic modules, and singular-stratum bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pole-order Hodge filtration of one smooth hypersurface, with the
    /// Jacobian-ring column as an independent second path
    Hodge(HodgeArgs),
    /// Two-path characteristic-module table for the universal family
    Charmod(FamilyArgs),
    /// Section counts, goodness, and intermediate-cohomology bookkeeping
    /// of the universal family
    Universal(FamilyArgs),
    /// Jet matrices and codimension bounds for singular strata
    Strata(StrataArgs),
    /// Full verification suite for one family
    VerifyAll(VerifyArgs),
}

#[derive(Args)]
struct HodgeArgs {
    /// Projective dimension of the ambient space
    #[arg(long)]
    n: usize,
    /// Degree of the hypersurface
    #[arg(long)]
    d: usize,
    /// Defining polynomial, expanded-term grammar in x0..x<n>
    #[arg(long, conflicts_with = "poly_file")]
    poly: Option<String>,
    /// File containing the defining polynomial
    #[arg(long)]
    poly_file: Option<PathBuf>,
    /// Write the machine record here (human text goes to `<out>.txt`)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Largest filtration level k to verify
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    /// RNG seed for the randomized calculus trials
    #[arg(long, default_value_t = 17)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run pieces above the built-in size cap (can take many minutes)
    #[arg(long)]
    override_size_cap: bool,
}

#[derive(Args)]
struct StrataArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Random point configurations per stratum
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 17)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    d: usize,
    #[arg(long, default_value_t = 3)]
    kmax: usize,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 17)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow families beyond the default caps (n <= 3, d <= 5, kmax <= 4)
    /// and run graded pieces above the size cap
    #[arg(long)]
    override_size_cap: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Hodge(args) => run_hodge(args),
        Command::Charmod(args) => run_charmod(args),
        Command::Universal(args) => run_universal(args),
        Command::Strata(args) => run_strata(args),
        Command::VerifyAll(args) => run_verify_all(args),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}

/// Prints the human report, writes files if requested, and maps the
/// verdicts to the exit status.
fn finish(env: ReportEnvelope, out: Option<PathBuf>) -> Result<ExitCode, String> {
    print!("{}", env.human_text());
    if let Some(path) = out {
        env.emit(&path).map_err(|e| e.to_string())?;
    }
    Ok(if env.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn load_poly(args: &HodgeArgs) -> Result<HomogPoly, String> {
    let text = match (&args.poly, &args.poly_file) {
        (Some(t), _) => t.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| format!("{}: {}", path.display(), e))?,
        (None, None) => return Err("provide --poly or --poly-file".into()),
    };
    let f = HomogPoly::parse(text.trim(), args.n + 1).map_err(|e| e.to_string())?;
    if f.degree != args.d {
        return Err(format!(
            "--d {} does not match polynomial degree {}",
            args.d, f.degree
        ));
    }
    Ok(f)
}

fn fermat(spec: &ProblemSpec) -> HomogPoly {
    let n_vars = spec.vars();
    let mut f = HomogPoly::zero(n_vars, spec.d);
    for i in 0..n_vars {
        let mut e = vec![0u8; n_vars];
        e[i] = spec.d as u8;
        f.add_term(e, residua::matrix::rat_int(1));
    }
    f
}

fn run_hodge(args: HodgeArgs) -> Result<ExitCode, String> {
    let spec = ProblemSpec::new(args.n, args.d).map_err(|e| e.to_string())?;
    let f = load_poly(&args)?;
    let mut env = ReportEnvelope::new("hodge");
    env.set_config("n", spec.n);
    env.set_config("d", spec.d);
    env.set_config("poly", f.render());
    hodge_checks(&mut env, &f, None);
    finish(env, args.out)
}

/// Pole-order filtration vs Jacobian ring for one polynomial. When
/// `frozen` is given it is an independently derived expected value for
/// the graded dimensions (e.g. the genus count for plane curves).
fn hodge_checks(env: &mut ReportEnvelope, f: &HomogPoly, frozen: Option<(&[usize], &str)>) {
    let report = match vanishing_hodge_numbers(f) {
        Ok(r) => r,
        Err(e) => {
            env.push(
                CheckRecord::new("hodge.smooth", format!("error: {}", e), true, "hypothesis")
                    .with_input("poly", f.render()),
            );
            return;
        }
    };
    env.push(CheckRecord::new("hodge.smooth", report.smooth, true, "hypothesis"));
    env.push(
        CheckRecord::new(
            "hodge.two-path",
            render_dims(&report.graded_dims),
            render_dims(&report.jacobian_dims),
            "Jacobian-ring second path",
        )
        .with_input("poly", f.render()),
    );
    if let Some((dims, provenance)) = frozen {
        env.push(CheckRecord::new(
            "hodge.graded-dims",
            render_dims(&report.graded_dims),
            render_dims(dims),
            provenance,
        ));
        env.push(CheckRecord::new(
            "hodge.total",
            report.total,
            dims.iter().sum::<usize>(),
            provenance,
        ));
    } else {
        env.push(CheckRecord::info("hodge.total", report.total, "computed"));
    }
}

fn run_charmod(args: FamilyArgs) -> Result<ExitCode, String> {
    let spec = ProblemSpec::new(args.n, args.d).map_err(|e| e.to_string())?;
    let mut env = ReportEnvelope::new("charmod");
    set_family_config(&mut env, &spec, args.kmax);
    let engine = UniversalEngine::new(&spec);
    charmod_checks(&mut env, &engine, args.kmax, args.override_size_cap);
    finish(env, args.out)
}

fn set_family_config(env: &mut ReportEnvelope, spec: &ProblemSpec, kmax: usize) {
    env.set_config("n", spec.n);
    env.set_config("d", spec.d);
    env.set_config("kmax", kmax);
}

/// Theorem B rows: exterior-calculus quotient vs universal Jacobian ring,
/// plus the closed form on the line.
fn charmod_checks(env: &mut ReportEnvelope, engine: &UniversalEngine, kmax: usize, uncapped: bool) {
    let spec = engine.spec;
    let mut hi = 0usize;
    for k in 1..=kmax {
        let ambient = engine.w_space(k as i64, spec.n).dim;
        if ambient > SIZE_CAP && !uncapped {
            env.push(CheckRecord::info(
                format!("charmod.k{}", k),
                format!("skipped: ambient dimension {} exceeds size cap {}", ambient, SIZE_CAP),
                "size cap; rerun with --override-size-cap",
            ));
            continue;
        }
        hi = k;
    }
    if hi == 0 {
        return;
    }
    let table = engine.theorem_b_check(1, hi);
    for row in &table.rows {
        let mut check = CheckRecord::new(
            format!("charmod.k{}", row.k),
            row.dim_c,
            row.dim_ujr,
            "universal Jacobian ring second path",
        )
        .with_input("k", row.k);
        if let Some(cf) = row.closed_form {
            check = check.with_input("closed_form", cf);
            if row.k >= 1 && row.dim_c != cf {
                check.verdict = residua::report::Verdict::Fail;
            }
        }
        env.push(check);
    }
    match table.observed_onset {
        Some(k0) => env.push(CheckRecord::info(
            "charmod.agreement-onset",
            k0,
            "observed, not assumed",
        )),
        None => env.push(CheckRecord::new(
            "charmod.agreement-onset",
            "none",
            "some k",
            "agreement expected from k = 1 on these families",
        )),
    }
}

fn run_universal(args: FamilyArgs) -> Result<ExitCode, String> {
    let spec = ProblemSpec::new(args.n, args.d).map_err(|e| e.to_string())?;
    let mut env = ReportEnvelope::new("universal");
    set_family_config(&mut env, &spec, args.kmax);
    env.set_config("seed", args.seed);
    let engine = UniversalEngine::new(&spec);
    universal_checks(&mut env, &engine, args.kmax, args.seed, args.override_size_cap);
    finish(env, args.out)
}

fn universal_checks(
    env: &mut ReportEnvelope,
    engine: &UniversalEngine,
    kmax: usize,
    seed: u64,
    uncapped: bool,
) {
    let spec = engine.spec;
    let n = spec.n;
    let d = spec.d;

    // Bott cross-check for the section-space model backing every W space.
    let mut bott_mismatches = 0usize;
    for p in 0..=n {
        for m in 0..=8i64 {
            if twisted_form_basis(n, p, m).len() != bott_h(n, p, 0, m) {
                bott_mismatches += 1;
            }
        }
    }
    env.push(CheckRecord::new(
        "universal.bott-cross-check",
        bott_mismatches,
        0,
        "Bott closed form",
    ));

    // Randomized calculus invariants: d^2 = 0 and descent preservation.
    let (bad_d2, bad_descent) = calculus_invariant_trials(&spec, 100, seed);
    env.push(
        CheckRecord::new("universal.d-squared", bad_d2, 0, "calculus identity")
            .with_input("trials", 100),
    );
    env.push(
        CheckRecord::new("universal.descent", bad_descent, 0, "calculus identity")
            .with_input("trials", 100),
    );

    // Lowest filtration level, closed form from the rank-(d-1 choose n)
    // splitting at level one.
    env.push(CheckRecord::new(
        "universal.f1m-sections",
        engine.fkm_sections_dim(1),
        binom(d - 1, n) * binom(n + d, n),
        "closed form",
    ));

    for k in 1..=kmax {
        if (k * d) as i64 - n as i64 - 1 >= 0 {
            env.push(
                CheckRecord::new(
                    format!("universal.goodness-k{}", k),
                    engine.goodness_surjectivity(k),
                    true,
                    "multiplication surjectivity",
                )
                .with_input("k", k),
            );
        }
        env.push(CheckRecord::info(
            format!("universal.n0-sections-k{}", k),
            engine.n0_sections_dim(k),
            "computed",
        ));
    }

    for k in 1..=kmax {
        for i in -(n as i64)..0 {
            let p = (n as i64 + i) as usize;
            let mut cost = engine.w_space(k as i64 + i, p).dim;
            if p >= 1 {
                cost = cost.max(engine.w_space(k as i64 + i - 1, p - 1).dim);
            }
            let name = format!("universal.intermediate-k{}-i{}", k, i);
            if cost > SIZE_CAP && !uncapped {
                env.push(CheckRecord::info(
                    name,
                    format!("skipped: dimension {} exceeds size cap {}", cost, SIZE_CAP),
                    "size cap; rerun with --override-size-cap",
                ));
                continue;
            }
            match engine.intermediate_cohomology(k, i) {
                Ok(c) => env.push(
                    CheckRecord::new(
                        name,
                        c,
                        residua::universal::hodge_bookkeeping(n, k, i),
                        "Hodge bookkeeping of projective space",
                    )
                    .with_input("k", k)
                    .with_input("i", i),
                ),
                Err(e) => env.push(CheckRecord::new(
                    name,
                    format!("error: {}", e),
                    residua::universal::hodge_bookkeeping(n, k, i),
                    "Hodge bookkeeping of projective space",
                )),
            }
        }
    }
}

fn run_strata(args: StrataArgs) -> Result<ExitCode, String> {
    let spec = ProblemSpec::new(args.n, args.d).map_err(|e| e.to_string())?;
    let mut env = ReportEnvelope::new("strata");
    env.set_config("n", spec.n);
    env.set_config("d", spec.d);
    env.set_config("trials", args.trials);
    env.set_config("seed", args.seed);
    strata_checks(&mut env, &spec, args.trials, args.seed)?;
    finish(env, args.out)
}

fn strata_checks(
    env: &mut ReportEnvelope,
    spec: &ProblemSpec,
    trials: usize,
    seed: u64,
) -> Result<(), String> {
    let n = spec.n;
    let modes = [
        ("one-node", StrataMode::MultiNode { n_points: 1 }, n + 1),
        ("two-nodes", StrataMode::MultiNode { n_points: 2 }, 2 * (n + 1)),
        ("triple-point", StrataMode::Multiplicity { r: 3 }, binom(n + 2, n)),
    ];
    for (label, mode, conditions) in modes {
        // An over-determined jet system means the stratum is empty and
        // the codimension bound says nothing; skip it.
        if conditions > binom(n + spec.d, n) {
            env.push(CheckRecord::info(
                format!("strata.{}", label),
                format!("skipped: {} conditions exceed the section space", conditions),
                "empty stratum for this degree",
            ));
            continue;
        }
        let report =
            stratum_codim_estimate(spec, mode, trials, seed).map_err(|e| e.to_string())?;
        env.push(
            CheckRecord::new(
                format!("strata.{}", label),
                report.pass,
                true,
                "codimension bound",
            )
            .with_input("observed_codim", report.observed_codim)
            .with_input("bound", report.bound)
            .with_input("conditions", report.condition_count),
        );
    }
    Ok(())
}

fn rat_points(coords: &[&[i64]]) -> Vec<Vec<residua::Rational>> {
    coords
        .iter()
        .map(|p| p.iter().map(|&c| residua::matrix::rat_int(c)).collect())
        .collect()
}

/// Fixture checks that only exist for specific families: frozen plane
/// curve and K3 dimensions, jet-separation verdicts, and per-fiber
/// surjectivity at nodal and cuspidal curves.
fn fixture_checks(env: &mut ReportEnvelope, spec: &ProblemSpec) -> Result<(), String> {
    let (n, d) = (spec.n, spec.d);
    if n == 2 && (3..=5).contains(&d) {
        let genus = (d - 1) * (d - 2) / 2;
        let dims = vec![genus; 2];
        let f = fermat(spec);
        hodge_checks(env, &f, Some((&dims, "genus count (d-1)(d-2)/2")));
    } else if n == 3 && d == 4 {
        let f = fermat(spec);
        hodge_checks(env, &f, Some((&[1, 19, 1], "K3 surface Hodge diamond")));
    } else {
        let f = fermat(spec);
        hodge_checks(env, &f, None);
    }

    if n == 2 && d == 4 {
        let jet = JetSpec {
            points: rat_points(&[&[1, 0, 0], &[0, 1, 2], &[3, -1, 1]]),
            r: 1,
            d,
        };
        env.push(CheckRecord::new(
            "fixtures.jet-separation-generic",
            jet_separation_check(&jet).map_err(|e| e.to_string())?,
            true,
            "generic first-order jets on quartics",
        ));
        let nodal_quartic =
            HomogPoly::parse("x2^2*x0^2 + x2^2*x1^2 + x0^4 + x1^4", 3).unwrap();
        fiber_fixture(env, "nodal-quartic", &nodal_quartic, 1, true)?;
    }
    if n == 2 && d == 2 {
        let jet = JetSpec {
            points: rat_points(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]),
            r: 1,
            d,
        };
        env.push(CheckRecord::new(
            "fixtures.jet-separation-collinear",
            jet_separation_check(&jet).map_err(|e| e.to_string())?,
            false,
            "conics cannot separate collinear points",
        ));
    }
    if n == 2 && d == 3 {
        let nodal_cubic = HomogPoly::parse("x1^2*x2 - x0^3 - x0^2*x2", 3).unwrap();
        fiber_fixture(env, "nodal-cubic", &nodal_cubic, 1, true)?;
        let cuspidal = HomogPoly::parse("x1^2*x2 - x0^3", 3).unwrap();
        let tau = match tjurina_total(&cuspidal).map_err(|e| e.to_string())? {
            Tjurina::Finite(t) => t.to_string(),
            Tjurina::NonIsolated => "non-isolated".into(),
        };
        env.push(CheckRecord::new(
            "fixtures.cuspidal-cubic-tau",
            tau,
            2,
            "cusp Tjurina number",
        ));
    }
    Ok(())
}

fn fiber_fixture(
    env: &mut ReportEnvelope,
    label: &str,
    f: &HomogPoly,
    tau: usize,
    surjective: bool,
) -> Result<(), String> {
    let computed_tau = match tjurina_total(f).map_err(|e| e.to_string())? {
        Tjurina::Finite(t) => t.to_string(),
        Tjurina::NonIsolated => "non-isolated".into(),
    };
    env.push(
        CheckRecord::new(
            format!("fixtures.{}-tau", label),
            computed_tau,
            tau,
            "isolated-singularity fixture",
        )
        .with_input("poly", f.render()),
    );
    env.push(CheckRecord::new(
        format!("fixtures.{}-surjectivity", label),
        fiber_surjectivity_check(f, 1).map_err(|e| e.to_string())?,
        surjective,
        "stabilized Jacobian quotient",
    ));
    Ok(())
}

fn run_verify_all(args: VerifyArgs) -> Result<ExitCode, String> {
    if !args.override_size_cap && (args.n > 3 || args.d > 5 || args.kmax > 4) {
        return Err(format!(
            "family (n={}, d={}, kmax={}) exceeds the default caps (n <= 3, d <= 5, kmax <= 4); \
             pass --override-size-cap to run it anyway",
            args.n, args.d, args.kmax
        ));
    }
    let spec = ProblemSpec::new(args.n, args.d).map_err(|e| e.to_string())?;
    let mut env = ReportEnvelope::new("verify-all");
    set_family_config(&mut env, &spec, args.kmax);
    env.set_config("trials", args.trials);
    env.set_config("seed", args.seed);

    fixture_checks(&mut env, &spec)?;
    let engine = UniversalEngine::new(&spec);
    charmod_checks(&mut env, &engine, args.kmax, args.override_size_cap);
    universal_checks(&mut env, &engine, args.kmax, args.seed, args.override_size_cap);
    strata_checks(&mut env, &spec, args.trials, args.seed)?;
    finish(env, args.out)
}
