//! End-to-end acceptance run: one PASS/FAIL line per criterion, each with
//! its time budget. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use superbider::bidersolve::{
    bider_residual, certify_mod_p, enumerate_blocks, factor_biderivation, solve_bder, solve_bder_lie, BiderOptions, BilinearMap,
};
use superbider::dersolve::{classify_derivations, solve_derivations, DerOptions};
use superbider::families::{check_hamiltonian_bracket, compare_roots};
use superbider::linalg::{PrimeField, Rationals};
use superbider::scalar::rat;
use superbider::structchecks::{check_bracket_onto, check_generated, check_h_pairing, check_irreducible, check_simplicity_sample, check_transitive};
use superbider::superfields::export_table;
use superbider::{build_lprime, AlgebraTable, Family, Parity};

type Criterion = (&'static str, fn() -> Outcome);

const INSTANCES: [(Family, usize); 4] = [(Family::W, 4), (Family::S, 4), (Family::STilde, 4), (Family::H, 5)];

fn q() -> Rationals {
    Rationals::new()
}

fn table(f: Family, n: usize) -> AlgebraTable {
    f.build(n).expect("acceptance instance is constructible")
}

/// Outcome of one criterion: failures collected as messages.
struct Outcome(Vec<String>);

impl Outcome {
    fn new() -> Self {
        Outcome(Vec::new())
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.0.push(what());
        }
    }

    fn within(&mut self, start: Instant, budget: Duration, what: &str) {
        let took = start.elapsed();
        self.expect(took <= budget, || format!("{what} took {took:.1?}, budget {budget:?}"));
    }
}

fn construction_sanity() -> Outcome {
    let mut o = Outcome::new();
    for (f, n) in INSTANCES {
        let start = Instant::now();
        let t = table(f, n);
        o.expect(t.validate().is_ok(), || format!("{f}({n}) table invalid"));
        let j = t.check_super_jacobi();
        o.expect(j.passed, || format!("{f}({n}) super-Jacobi fails at {:?}", j.counterexample));
        o.expect(j.triples_checked == t.dim().pow(3), || format!("{f}({n}) Jacobi not exhaustive"));
        o.within(start, Duration::from_secs(10), &format!("{f}({n}) construction + Jacobi"));
    }
    let start = Instant::now();
    let h = check_hamiltonian_bracket(5);
    o.expect(h.is_ok(), || format!("Hamiltonian bracket identity fails at {h:?}"));
    o.expect(h.as_ref().is_ok_and(|pairs| *pairs == 32 * 32), || "Hamiltonian identity not exhaustive at n = 5".into());
    o.within(start, Duration::from_secs(10), "Hamiltonian identity");
    o
}

fn dimension_table() -> Outcome {
    let mut o = Outcome::new();
    for (f, n) in INSTANCES {
        let t = table(f, n);
        let p = 1usize << n;
        // closed forms: n 2^n, (n-1) 2^n + 1 (twice), 2^n - 2
        let (dim, dim0) = match f {
            Family::W => (n * p, n * n),
            Family::S | Family::STilde => ((n - 1) * p + 1, n * n - 1),
            Family::H => (p - 2, n * (n - 1) / 2),
        };
        o.expect(t.dim() == dim, || format!("dim {f}({n}) = {}, expected {dim}", t.dim()));
        let got0 = t.degree_indices(0).len();
        o.expect(got0 == dim0, || format!("dim {f}({n})_0 = {got0}, expected {dim0}"));
    }
    o
}

fn root_systems() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for (f, n) in INSTANCES {
        let lp = build_lprime(f, n).unwrap();
        let c = compare_roots(f, &table(f, n), &lp.table);
        o.expect(c.matches, || format!("{f}({n}) roots: missing {:?}, unexpected {:?}", c.missing, c.unexpected));
        o.expect(c.lprime_equal, || format!("{f}({n}): L' has different roots"));
    }
    o.within(start, Duration::from_secs(10), "root comparison");
    o
}

fn derivations() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for ((f, n), want) in INSTANCES.into_iter().zip([64, 50, 49, 32]) {
        let t = table(f, n);
        let lp = build_lprime(f, n).unwrap();
        o.expect(lp.table.dim() == want, || format!("dim L'({f}{n}) = {}", lp.table.dim()));
        let mut total = 0;
        for gamma in [Parity::Even, Parity::Odd] {
            let sol = solve_derivations(&t, gamma, q(), DerOptions::default()).unwrap();
            total += sol.dimension();
            let c = classify_derivations(&sol, q(), &lp).unwrap();
            o.expect(c.passed, || format!("{f}({n}) Der_{gamma} != ad L'_{gamma}: {:?}", c.witness));
        }
        o.expect(total == want, || format!("dim Der {f}({n}) = {total}, expected {want}"));
    }
    o.within(start, Duration::from_secs(300), "derivations");
    o
}

fn main_theorems() -> Outcome {
    let mut o = Outcome::new();
    for (f, n) in INSTANCES {
        let t = table(f, n);
        let start = Instant::now();
        let budget = Duration::from_secs(if f == Family::W { 1800 } else { 600 });
        let (cert, sol) = certify_mod_p(&t, PrimeField::DEFAULT_PRIME, BiderOptions::default()).unwrap();
        o.expect(cert.valid, || format!("{f}({n}) certificate invalid: {cert:?}"));
        if f != Family::W {
            // exact run as well
            let exact = solve_bder(&t, q(), BiderOptions::default()).unwrap();
            o.expect(exact.inner, || format!("{f}({n}) exact run not inner"));
            o.expect(exact.even.total_nullity == 1 && exact.odd.total_nullity == 0, || format!("{f}({n}) exact nullities differ"));
        }
        o.expect(sol.even.total_nullity == 1, || format!("{f}({n}) even nullity {}", sol.even.total_nullity));
        o.expect(sol.odd.total_nullity == 0, || format!("{f}({n}) odd nullity {}", sol.odd.total_nullity));
        o.expect(sol.bracket_in_span, || format!("{f}({n}) bracket not in solution span"));
        for p in [&sol.even, &sol.odd] {
            let off = p.nonzero_off_diagonal();
            o.expect(off.is_empty(), || format!("{f}({n}) nonzero blocks off weight 0 / degree 0: {off:?}"));
            o.expect(p.cross_block_rows == 0, || format!("{f}({n}) rows crossed blocks"));
        }
        o.within(start, budget, &format!("{f}({n}) biderivations"));
    }
    o
}

fn structural_checks() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for (f, n) in INSTANCES {
        let t = table(f, n);
        let lp = build_lprime(f, n).unwrap();
        let mut reports = vec![check_bracket_onto(&t), check_generated(&t), check_transitive(&lp), check_irreducible(&t, 0), check_simplicity_sample(&t, 0)];
        if f == Family::H {
            reports.push(check_h_pairing(&t));
        }
        for r in reports {
            o.expect(r.passed, || format!("{f}({n}) {}: {:?}", r.id, r.witness));
        }
    }
    o.within(start, Duration::from_secs(300), "structural checks");
    o
}

fn lie_spot_check() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for (name, t, dim) in [("sl(4)", table(Family::S, 4), 15), ("so(5)", table(Family::H, 5), 10)] {
        let l0 = t.degree_zero().unwrap();
        o.expect(l0.dim() == dim, || format!("{name} has dim {}", l0.dim()));
        let sol = solve_bder_lie(&l0, q(), BiderOptions::default()).unwrap();
        o.expect(sol.even.total_nullity == 1 && sol.inner, || format!("{name}: nullity {}, inner {}", sol.even.total_nullity, sol.inner));
    }
    o.within(start, Duration::from_secs(300), "Lie spot check");
    o
}

fn property_suites() -> Outcome {
    let mut o = Outcome::new();
    let start = Instant::now();
    for (f, n) in INSTANCES {
        let t = table(f, n);
        let s = t.structure(q()).unwrap();
        for lambda in [1, -2, 7] {
            let m = BilinearMap::bracket(&s, &rat(lambda));
            o.expect(bider_residual(&s, Parity::Even, &m).is_none(), || format!("{f}({n}): {lambda}[,] has a residual"));
        }
    }

    let w2 = table(Family::W, 2);
    let blocked = solve_bder(&w2, q(), BiderOptions::default()).unwrap();
    let whole = solve_bder(&w2, q(), BiderOptions { unblocked: true, ..Default::default() }).unwrap();
    for (gamma, b, w) in [(Parity::Even, &blocked.even, &whole.even), (Parity::Odd, &blocked.odd, &whole.odd)] {
        let sizes: usize = enumerate_blocks(&w2, gamma).unwrap().iter().map(|x| x.2).sum();
        o.expect(b.total_nullity == w.total_nullity, || format!("W(2) {gamma}: block sum {} vs global {}", b.total_nullity, w.total_nullity));
        o.expect(sizes == w.unknowns, || format!("W(2) {gamma}: block sizes {sizes} vs {}", w.unknowns));
    }

    for (f, n) in INSTANCES {
        let t = table(f, n);
        let lp = build_lprime(f, n).unwrap();
        let sol = solve_bder(&t, q(), BiderOptions::default()).unwrap();
        for v in sol.even.solutions.iter().chain(&sol.odd.solutions) {
            let r = factor_biderivation(&lp, &BilinearMap::from_global(t.dim(), v));
            o.expect(r.passed(), || format!("{f}({n}) factorization: {:?}", r.status));
            o.expect(r.degree == Some(0) && r.parity == Some(Parity::Even), || format!("{f}({n}) factor grading {:?} {:?}", r.degree, r.parity));
        }
    }

    let dir = tempfile::tempdir().unwrap();
    for (f, n) in [(Family::W, 3), (Family::H, 5)] {
        let mut t = table(f, n).without_fields();
        let path = dir.path().join(format!("{f}{n}.txt"));
        std::fs::write(&path, export_table(&t)).unwrap();
        let args = |p: &std::path::Path| ["superbider", "bder", "--quiet", "--table", p.to_str().unwrap()].map(String::from);
        let clean = superbider::cli::run(args(&path));
        o.expect(clean == 0, || format!("{f}({n}) clean table exits {clean}"));
        let (a, b, k, c) = (0..t.dim())
            .flat_map(|a| (0..t.dim()).map(move |b| (a, b)))
            .find_map(|(a, b)| t.bracket_basis(a, b).first().filter(|_| a < b).map(|(k, c)| (a, b, *k, c.clone())))
            .unwrap();
        let sign = if t.parity(a).koszul_negative(t.parity(b)) { rat(1) } else { rat(-1) };
        t.set_constant_unchecked(a, b, k, c.clone() * rat(3));
        t.set_constant_unchecked(b, a, k, c * rat(3) * sign);
        std::fs::write(&path, export_table(&t)).unwrap();
        let mutated = superbider::cli::run(args(&path));
        o.expect(mutated == 1, || format!("{f}({n}) mutated table exits {mutated}"));
    }
    o.within(start, Duration::from_secs(600), "property suites");
    o
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("construction sanity", construction_sanity),
        ("dimension table", dimension_table),
        ("root systems", root_systems),
        ("derivations equal ad L'", derivations),
        ("biderivations are inner", main_theorems),
        ("structural checks", structural_checks),
        ("Lie degree-zero spot check", lie_spot_check),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        if outcome.0.is_empty() {
            println!("PASS {} {name} ({took:.1?})", i + 1);
        } else {
            failed += 1;
            println!("FAIL {} {name} ({took:.1?})", i + 1);
            for msg in &outcome.0 {
                println!("     {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
