//! Command-line driver: builds or loads a table, runs the requested checks
//! and writes a [`VerificationReport`].
//!
//! Exit codes: 0 verified, 1 a check failed, 2 usage or configuration error,
//! 3 a resource limit left the run incomplete.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bidersolve::{
    bider_residual, bracket_in_span, bracket_is_biderivation, factor_biderivation, solve_bder_parity, BiderOptions, BilinearMap, Certificate,
    ParitySolution,
};
use crate::dersolve::{classify_derivations, solve_derivations, DerOptions};
use crate::exterior::Parity;
use crate::families::{build_lprime, check_hamiltonian_bracket, compare_roots, degree_census, parity_census, Family, LPrime};
use crate::linalg::{Field, PrimeField, Rationals};
use crate::report::{
    BiderParity, BiderSection, DegreeCount, DerParity, DerSection, Dimensions, FactorSummary, HamiltonianIdentity, InnerResidual, JacobiSection,
    Timing, VerificationReport,
};
use crate::scalar::rat;
use crate::structchecks;
use crate::superfields::{export_table, import_table_unchecked, AlgebraTable};
use crate::Error;

#[derive(Parser, Debug)]
#[command(name = "superbider", version, about = "Exact checks for Cartan-type Lie superalgebras and their super-biderivations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
enum Command {
    /// Dimensions, gradings and roots.
    Info(Opts),
    /// Table invariants and the exhaustive super-Jacobi check.
    Jacobi(Opts),
    /// Superderivations, compared with ad L′.
    Der(Opts),
    /// Super-biderivations and the innerness verdict.
    Bder(Opts),
    /// Structural checks on the grading.
    Lemmas(Opts),
    /// Every check above.
    All(Opts),
    /// Writes the structure-constant table in text form.
    Export(Opts),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Info(_) => "info",
            Command::Jacobi(_) => "jacobi",
            Command::Der(_) => "der",
            Command::Bder(_) => "bder",
            Command::Lemmas(_) => "lemmas",
            Command::All(_) => "all",
            Command::Export(_) => "export",
        }
    }

    fn opts(&self) -> &Opts {
        match self {
            Command::Info(o) | Command::Jacobi(o) | Command::Der(o) | Command::Bder(o) | Command::Lemmas(o) | Command::All(o) | Command::Export(o) => o,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FieldMode {
    Exact,
    Modp,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ParityArg {
    Even,
    Odd,
    Both,
}

#[derive(clap::Args, Debug, Clone, PartialEq, Eq)]
struct Opts {
    #[arg(long)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    /// Load the table from a file written by `export` instead of building it.
    #[arg(long, conflicts_with_all = ["family", "n"])]
    table: Option<PathBuf>,
    /// Default: exact, except modp for bder/all on W.
    #[arg(long, value_enum)]
    field: Option<FieldMode>,
    #[arg(long, default_value_t = PrimeField::DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, value_enum, default_value = "both")]
    parity: ParityArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-block row limit; blocks that hit it are reported incomplete.
    #[arg(long)]
    block_limit: Option<usize>,
    /// Include wall-clock timings (makes reports run-dependent).
    #[arg(long)]
    timings: bool,
    /// Do not print the summary.
    #[arg(long)]
    quiet: bool,
}

/// A usage or configuration problem (exit code 2).
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

struct Context {
    table: AlgebraTable,
    family: Option<Family>,
    lprime: Option<LPrime>,
    /// Loaded from a file, so not known to satisfy the invariants.
    external: bool,
}

impl Context {
    fn load(o: &Opts) -> Result<Self, Failure> {
        if let Some(path) = &o.table {
            let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            let table = import_table_unchecked(&text)?;
            let family = table.family().parse::<Family>().ok().filter(|f| f.check(table.n()).is_ok());
            let lprime = match family {
                Some(f) => Some(build_lprime(f, table.n())?).filter(|lp| lp.base_dim == table.dim()),
                None => None,
            };
            return Ok(Context { table, family, lprime, external: true });
        }
        let (Some(family), Some(n)) = (o.family, o.n) else {
            return Err(Failure("either --table or both --family and --n are required".into()));
        };
        let lprime = build_lprime(family, n)?;
        Ok(Context { table: family.build(n)?, family: Some(family), lprime: Some(lprime), external: false })
    }

    fn field_mode(&self, cmd: &Command, o: &Opts) -> FieldMode {
        let big = self.family == Some(Family::W) && !matches!(cmd, Command::Der(_));
        o.field.unwrap_or(if big { FieldMode::Modp } else { FieldMode::Exact })
    }
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn execute(cmd: Command) -> Result<i32, Failure> {
    let o = cmd.opts();
    let ctx = Context::load(o)?;
    if let Command::Export(_) = cmd {
        let text = export_table(&ctx.table);
        match &o.out {
            Some(p) => std::fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display())))?,
            None => print!("{text}"),
        }
        return Ok(0);
    }
    let report = build_report(&cmd, o, &ctx)?;
    if let Some(p) = &o.out {
        std::fs::write(p, report.to_json()).map_err(|e| Failure(format!("{}: {e}", p.display())))?;
    }
    if !o.quiet {
        print!("{}", report.summary());
    }
    Ok(report.exit_code())
}

fn build_report(cmd: &Command, o: &Opts, ctx: &Context) -> Result<VerificationReport, Failure> {
    let t = &ctx.table;
    let mode = ctx.field_mode(cmd, o);
    let field_tag = match mode {
        FieldMode::Exact => Rationals::new().tag(),
        FieldMode::Modp => PrimeField::new(o.prime)?.tag(),
    };
    let scope = ctx.family.is_some_and(|f| f.in_theorem_scope(t.n())) && !ctx.external;
    let mut r = VerificationReport::new(cmd.name(), t.family(), t.n(), scope, field_tag, o.seed);
    let mut timings = Vec::new();
    let mut timed = |name: &str, r: &mut VerificationReport, f: &mut dyn FnMut(&mut VerificationReport) -> Result<(), Failure>| {
        let start = Instant::now();
        let out = f(r);
        timings.push(Timing { section: name.into(), seconds: start.elapsed().as_secs_f64() });
        out
    };

    r.dimensions = Some(dimensions(ctx));
    if ctx.external {
        // the solvers assume a valid table
        if let Err(e) = t.validate() {
            r.check("table-valid", false, Some(e.to_string()));
            r.jacobi = Some(JacobiSection { validation_error: Some(e.to_string()), jacobi: None, hamiltonian_identity: None });
            return Ok(r);
        }
    }
    let all = matches!(cmd, Command::All(_));
    if all || matches!(cmd, Command::Info(_)) {
        timed("info", &mut r, &mut |r| {
            info(ctx, r);
            Ok(())
        })?;
    }
    if all || matches!(cmd, Command::Jacobi(_)) || (ctx.external && !matches!(cmd, Command::Info(_))) {
        timed("jacobi", &mut r, &mut |r| {
            jacobi(ctx, r);
            Ok(())
        })?;
    }
    if all || matches!(cmd, Command::Der(_)) {
        timed("der", &mut r, &mut |r| match mode {
            FieldMode::Exact => der(ctx, o, Rationals::new(), r),
            FieldMode::Modp => der(ctx, o, PrimeField::new(o.prime)?, r),
        })?;
    }
    if all || matches!(cmd, Command::Bder(_)) {
        timed("bder", &mut r, &mut |r| bder(ctx, o, mode, r))?;
    }
    if all || matches!(cmd, Command::Lemmas(_)) {
        timed("lemmas", &mut r, &mut |r| {
            lemmas(ctx, o.seed, r);
            Ok(())
        })?;
    }
    if o.timings {
        r.timings = Some(timings);
    }
    Ok(r)
}

fn dimensions(ctx: &Context) -> Dimensions {
    let t = &ctx.table;
    let (even, odd) = parity_census(t);
    let mut weights: Vec<_> = t.weights().to_vec();
    weights.sort();
    weights.dedup();
    Dimensions {
        dim: t.dim(),
        even,
        odd,
        top_degree: t.top_degree(),
        degree_modulus: t.degree_modulus(),
        degrees: degree_census(t).into_iter().map(|(degree, dim)| DegreeCount { degree, dim }).collect(),
        distinct_weights: weights.len(),
        lprime_dim: ctx.lprime.as_ref().map(|lp| lp.table.dim()),
        lprime_outer: ctx.lprime.as_ref().map(|lp| lp.outer.iter().map(|(_, name)| name.clone()).collect()).unwrap_or_default(),
    }
}

fn info(ctx: &Context, r: &mut VerificationReport) {
    if let (Some(f), Some(lp)) = (ctx.family, &ctx.lprime) {
        let roots = compare_roots(f, &ctx.table, &lp.table);
        let detail = (!roots.matches).then(|| format!("{} missing, {} unexpected", roots.missing.len(), roots.unexpected.len()));
        r.check("roots-match-description", roots.matches, detail);
        r.check("lprime-has-the-same-roots", roots.lprime_equal, None);
        r.roots = Some(roots);
    }
}

fn jacobi(ctx: &Context, r: &mut VerificationReport) {
    let t = &ctx.table;
    let valid = t.validate();
    r.check("table-valid", valid.is_ok(), valid.as_ref().err().map(|e| e.to_string()));
    let report = t.check_super_jacobi();
    r.check("super-jacobi", report.passed, report.counterexample.map(|c| format!("triple {c:?}")));
    let hamiltonian_identity = (ctx.family == Some(Family::H) && !ctx.external).then(|| match check_hamiltonian_bracket(t.n()) {
        Ok(pairs) => HamiltonianIdentity { passed: true, pairs_checked: pairs, counterexample: None },
        Err((f, g)) => HamiltonianIdentity { passed: false, pairs_checked: 0, counterexample: Some([f.to_string(), g.to_string()]) },
    });
    if let Some(h) = &hamiltonian_identity {
        r.check("hamiltonian-bracket-identity", h.passed, None);
    }
    r.jacobi = Some(JacobiSection { validation_error: valid.err().map(|e| e.to_string()), jacobi: Some(report), hamiltonian_identity });
}

fn parities(p: ParityArg) -> Vec<Parity> {
    match p {
        ParityArg::Even => vec![Parity::Even],
        ParityArg::Odd => vec![Parity::Odd],
        ParityArg::Both => vec![Parity::Even, Parity::Odd],
    }
}

fn der<F: Field>(ctx: &Context, o: &Opts, field: F, r: &mut VerificationReport) -> Result<(), Failure> {
    let t = &ctx.table;
    let opts = DerOptions { row_limit: o.block_limit, unblocked: false };
    let mut section = DerSection { parities: Vec::new(), total_dimension: 0 };
    for gamma in parities(o.parity) {
        let sol = solve_derivations(t, gamma, field.clone(), opts)?;
        if !sol.complete {
            r.mark_incomplete();
        }
        let classification = match &ctx.lprime {
            Some(lp) if sol.complete => Some(classify_derivations(&sol, field.clone(), lp)?),
            _ => None,
        };
        if let Some(c) = &classification {
            r.check(&format!("der-{gamma}-equals-ad-lprime"), c.passed, c.witness.clone());
        }
        section.total_dimension += sol.dimension();
        section.parities.push(DerParity {
            parity: gamma,
            unknowns: sol.unknowns,
            dimension: sol.dimension(),
            complete: sol.complete,
            cross_block_rows: sol.cross_block_rows,
            blocks: sol.blocks.clone(),
            classification,
        });
    }
    if let (Some(lp), ParityArg::Both, true) = (&ctx.lprime, o.parity, section.parities.iter().all(|p| p.complete)) {
        let want = lp.table.dim();
        r.check("der-dim-equals-dim-lprime", section.total_dimension == want, Some(format!("{} vs {want}", section.total_dimension)));
    }
    r.derivations = Some(section);
    Ok(())
}

fn record_parity<E>(r: &mut VerificationReport, sol: &ParitySolution<E>) -> BiderParity {
    if !sol.complete {
        r.mark_incomplete();
    }
    let off: Vec<_> = sol.nonzero_off_diagonal().into_iter().cloned().collect();
    let gamma = sol.parity;
    r.check(&format!("bder-{gamma}-rows-stay-in-their-block"), sol.cross_block_rows == 0, None);
    // nullities of unfinished blocks are only upper bounds
    if sol.complete {
        let detail = (!off.is_empty()).then(|| format!("{} nonzero blocks", off.len()));
        r.check(&format!("bder-{gamma}-off-diagonal-blocks-vanish"), off.is_empty(), detail);
        let want = usize::from(gamma == Parity::Even);
        r.check(&format!("bder-{gamma}-nullity-{want}"), sol.total_nullity == want, Some(format!("nullity {}", sol.total_nullity)));
    }
    BiderParity {
        parity: gamma,
        unknowns: sol.unknowns,
        total_nullity: sol.total_nullity,
        complete: sol.complete,
        cross_block_rows: sol.cross_block_rows,
        block_count: sol.blocks.len(),
        nonzero_off_diagonal: off,
        blocks: sol.blocks.clone(),
    }
}

fn bder(ctx: &Context, o: &Opts, mode: FieldMode, r: &mut VerificationReport) -> Result<(), Failure> {
    let t = &ctx.table;
    let opts = BiderOptions { row_limit: o.block_limit, unblocked: false, retain: true };
    let bracket_ok = bracket_is_biderivation(t);
    r.check("bracket-is-a-biderivation", bracket_ok, None);
    let s = t.structure(Rationals::new())?;
    let inner_residuals: Vec<InnerResidual> = [1, -2, 7]
        .into_iter()
        .map(|lambda| InnerResidual { lambda, residual_zero: bider_residual(&s, Parity::Even, &BilinearMap::bracket(&s, &rat(lambda))).is_none() })
        .collect();
    r.check("inner-maps-have-zero-residual", inner_residuals.iter().all(|x| x.residual_zero), None);
    let mut section = BiderSection {
        parities: Vec::new(),
        bracket_is_solution: bracket_ok,
        bracket_in_span: None,
        inner_residuals,
        certificate: None,
        factorizations: Vec::new(),
    };
    match mode {
        FieldMode::Exact => {
            let field = Rationals::new();
            for gamma in parities(o.parity) {
                let sol = solve_bder_parity(t, gamma, field.clone(), opts, bracket_ok)?;
                section.parities.push(record_parity(r, &sol));
                if gamma == Parity::Even && sol.complete {
                    section.bracket_in_span = Some(bracket_in_span(t, field.clone(), &sol)?);
                }
                if let (Some(lp), true) = (&ctx.lprime, sol.complete) {
                    for (i, v) in sol.solutions.iter().enumerate() {
                        let f = factor_biderivation(lp, &BilinearMap::from_global(t.dim(), v));
                        r.check(&format!("bder-{gamma}-solution-{i}-factors"), f.passed(), None);
                        section.factorizations.push(FactorSummary { parity: gamma, solution: i, weight: f.weight, degree: f.degree, status: f.status });
                    }
                }
            }
        }
        FieldMode::Modp => {
            let field = PrimeField::new(o.prime)?;
            let mut sols = Vec::new();
            for gamma in parities(o.parity) {
                let sol = solve_bder_parity(t, gamma, field, opts, bracket_ok)?;
                section.parities.push(record_parity(r, &sol));
                if gamma == Parity::Even && sol.complete {
                    section.bracket_in_span = Some(bracket_in_span(t, field, &sol)?);
                }
                sols.push(sol);
            }
            if let ([even, odd], true) = (sols.as_slice(), sols.iter().all(|s| s.complete)) {
                let cert = Certificate::new(o.prime, even, odd, bracket_ok, section.bracket_in_span == Some(true));
                r.check("modular-certificate-valid", cert.valid, None);
                section.certificate = Some(cert);
            }
        }
    }
    if let Some(in_span) = section.bracket_in_span {
        r.check("bracket-spans-even-solutions", in_span, None);
    }
    r.biderivations = Some(section);
    Ok(())
}

fn lemmas(ctx: &Context, seed: u64, r: &mut VerificationReport) {
    let t = &ctx.table;
    let mut reports = vec![structchecks::check_bracket_onto(t), structchecks::check_generated(t)];
    if let Some(lp) = &ctx.lprime {
        reports.push(structchecks::check_transitive(lp));
    }
    reports.push(structchecks::check_irreducible(t, seed));
    if ctx.family == Some(Family::H) {
        reports.push(structchecks::check_h_pairing(t));
    }
    reports.push(structchecks::check_simplicity_sample(t, seed));
    for l in &reports {
        r.check(&format!("lemma-{}", l.id), l.passed, l.witness.clone());
    }
    r.lemmas = reports;
}
