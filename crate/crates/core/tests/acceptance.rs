//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta_deriv::orbit::{euler_phi, lcm_period};
use theta_deriv::verify::{
    check_expression_fd, check_fundamental, cross_check_quoted_identities, default_taus,
    random_characteristic, relation_suite, SuiteTolerances,
};
use theta_deriv::{
    build_system, char_chain, orbit_of, partition, ratio, solve_chain, solve_closed_form,
    Characteristic, Engine64, FactorForm, SolverError, SolverOptions, Tau64,
};

const SEED: u64 = 42;
const JACOBI_TOL: f64 = 1e-12;
const FUNDAMENTAL_TOL: f64 = 1e-10;
const GOLDEN_FD_TOL: f64 = 1e-8;
const DET_TOL: f64 = 1e-12;
const SOLVE_TOL: f64 = 1e-12;
const QUOTED_TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-30)
}

fn jacobi_options() -> SolverOptions {
    SolverOptions {
        jacobi: true,
        ..SolverOptions::default()
    }
}

fn criterion_1(engine: &Engine64) -> Outcome {
    let mut worst = 0.0f64;
    for tau in default_taus::<f64>() {
        let d = engine
            .derivative(&Characteristic::half_half(), &tau)
            .unwrap();
        let j = engine.jacobi_rhs(&tau).unwrap();
        worst = worst.max(rel(d, j));
    }
    outcome(
        worst < JACOBI_TOL,
        format!("max residual {worst:.2e} (tol {JACOBI_TOL:.0e})"),
    )
}

fn criterion_2(engine: &Engine64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let taus = [
        Tau64::from_parts(0.0, 1.0).unwrap(),
        Tau64::from_parts(0.3, 1.7).unwrap(),
        Tau64::from_parts(-0.4, 0.9).unwrap(),
    ];
    let mut worst = 0.0f64;
    let mut failures = 0;
    let mut n = 0;
    while n < 200 {
        let c = random_characteristic(&mut rng, 30);
        if c.is_singular() {
            continue;
        }
        n += 1;
        for tau in &taus {
            let r = check_fundamental(engine, &c.to_real(), tau, FUNDAMENTAL_TOL).unwrap();
            worst = worst.max(r.residual);
            failures += usize::from(!r.pass);
        }
    }
    outcome(
        failures == 0,
        format!("{n} characteristics x 3 tau, max residual {worst:.2e}, {failures} failures"),
    )
}

fn criterion_3(engine: &Engine64) -> Outcome {
    let taus = [
        Tau64::from_parts(0.0, 1.0).unwrap(),
        Tau64::from_parts(0.3, 1.7).unwrap(),
        Tau64::from_parts(-0.4, 0.9).unwrap(),
    ];
    let mut matched = 0;
    let mut mismatched = Vec::new();
    let mut degenerate_ok = 0;
    let mut worst_fd = 0.0f64;
    for entry in common::golden() {
        match (
            &entry.expression,
            solve_chain(&entry.target, &jacobi_options()),
        ) {
            (Some(expected), Ok(got)) => {
                let g = got.normalize(FactorForm::Class).unwrap();
                let x = expected.normalize(FactorForm::Class).unwrap();
                if g.monomials == x.monomials {
                    matched += 1;
                } else {
                    mismatched.push(entry.target.to_string());
                }
                for tau in &taus {
                    let r = check_expression_fd(engine, &got, tau, GOLDEN_FD_TOL).unwrap();
                    worst_fd = worst_fd.max(r.residual);
                    if !r.pass {
                        mismatched.push(format!("{} (fd)", entry.target));
                    }
                }
            }
            (None, Err(SolverError::DegenerateIdentity { .. })) => degenerate_ok += 1,
            _ => mismatched.push(entry.target.to_string()),
        }
    }
    outcome(
        mismatched.is_empty() && degenerate_ok == 4,
        format!(
            "{matched} expressions term-for-term, {degenerate_ok}/4 degenerate refused, max fd residual {worst_fd:.2e}{}",
            if mismatched.is_empty() {
                String::new()
            } else {
                format!(", mismatches: {}", mismatched.join(" "))
            }
        ),
    )
}

/// 50 seeded periodic cores with period at most 12.
fn random_cores() -> Vec<Characteristic> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let dens: Vec<i64> = (1..=30).filter(|d| d % 3 != 0).collect();
    let mut out = Vec::new();
    while out.len() < 50 {
        let p = dens[rng.gen_range(0..dens.len())];
        let q = dens[rng.gen_range(0..dens.len())];
        let c = Characteristic::from_ratios(rng.gen_range(0..p), p, rng.gen_range(0..q), q);
        if c.is_singular() || lcm_period(&c) > 12 {
            continue;
        }
        out.push(c);
    }
    out
}

fn numeric_system(
    engine: &Engine64,
    c: &Characteristic,
    tau: &Tau64,
) -> (
    DMatrix<Complex64>,
    DVector<Complex64>,
    Complex64,
    Vec<Complex64>,
) {
    let chain = char_chain(c).unwrap();
    let sys = build_system(&chain).unwrap();
    let m = sys.matrix(engine, tau).unwrap();
    let t = sys.period();
    let a = DMatrix::from_fn(t, t, |i, j| m[i][j]);
    let b = DVector::from_vec(sys.rhs(engine, tau).unwrap());
    let det = sys.det_formula(engine, tau).unwrap();
    let closed = solve_closed_form(&sys)
        .unwrap()
        .iter()
        .map(|e| e.evaluate(engine, tau).unwrap())
        .collect();
    (a, b, det, closed)
}

fn criterion_4_5(engine: &Engine64) -> (Outcome, Outcome) {
    let taus = default_taus::<f64>();
    let mut worst_det = 0.0f64;
    let mut worst_solve = 0.0f64;
    let mut max_t = 0;
    for (i, c) in random_cores().iter().enumerate() {
        let tau = &taus[i % taus.len()];
        let (a, b, det, closed) = numeric_system(engine, c, tau);
        max_t = max_t.max(a.nrows());
        worst_det = worst_det.max(rel(a.clone().determinant(), det));
        let x = a.lu().solve(&b).expect("nonsingular system");
        let scale = x.iter().map(|v| v.norm()).fold(1e-30, f64::max);
        for (k, v) in closed.iter().enumerate() {
            worst_solve = worst_solve.max((x[k] - v).norm() / scale);
        }
    }
    (
        outcome(
            worst_det < DET_TOL,
            format!(
                "50 cores, period <= {max_t}, max residual {worst_det:.2e} (tol {DET_TOL:.0e})"
            ),
        ),
        outcome(
            worst_solve < SOLVE_TOL,
            format!("50 cores, max residual {worst_solve:.2e} (tol {SOLVE_TOL:.0e})"),
        ),
    )
}

fn criterion_6() -> Outcome {
    let printed: [(u64, &[usize]); 8] = [
        (2, &[1]),
        (4, &[2, 1]),
        (5, &[4]),
        (7, &[6]),
        (8, &[2, 2, 2, 1]),
        (11, &[5, 5]),
        (13, &[3, 3, 3, 3]),
        (17, &[16]),
    ];
    let mut problems = Vec::new();
    for (p, sizes) in printed {
        let mut got: Vec<usize> = partition(p).unwrap().iter().map(|o| o.len()).collect();
        let mut want = sizes.to_vec();
        got.sort_unstable();
        want.sort_unstable();
        if got != want {
            problems.push(format!("p={p}: {got:?}"));
        }
    }
    let o = orbit_of(&ratio(1, 15));
    let want = [
        ratio(1, 15),
        ratio(1, 5),
        ratio(3, 5),
        ratio(4, 5),
        ratio(2, 5),
    ];
    if o.elements != want {
        problems.push(format!("O(1/15) = {o}"));
    }
    for p in (2..=200u64).filter(|p| p % 3 != 0) {
        let orbits = partition(p).unwrap();
        let total: usize = orbits.iter().map(|o| o.len()).sum();
        let phi = euler_phi(p);
        if total as u64 != p - 1 || orbits.iter().any(|o| !phi.is_multiple_of(o.len() as u64)) {
            problems.push(format!("p={p}"));
        }
    }
    outcome(
        problems.is_empty(),
        if problems.is_empty() {
            "printed tables, O(1/15), and p <= 200 sums/divisibility".to_string()
        } else {
            problems.join("; ")
        },
    )
}

fn criterion_7(engine: &Engine64) -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = 0;
    for tau in default_taus::<f64>() {
        for r in cross_check_quoted_identities(engine, &tau, QUOTED_TOL).unwrap() {
            worst = worst.max(r.residual);
            failures += usize::from(!r.pass);
        }
    }
    outcome(
        failures == 0,
        format!("3 identities x 5 tau, max residual {worst:.2e} (tol {QUOTED_TOL:.0e})"),
    )
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for entry in common::golden() {
        if entry.expression.is_none() {
            continue;
        }
        n += 1;
        let e = solve_chain(&entry.target, &jacobi_options()).unwrap();
        if e.homogeneity_degree() != Ok(3) {
            bad.push(entry.target.to_string());
        }
        let raw = solve_chain(&entry.target, &SolverOptions::default()).unwrap();
        if raw.homogeneity_degree() != Ok(3) {
            bad.push(format!("{} (before Jacobi)", entry.target));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{n} expressions, degree 3 {}",
            if bad.is_empty() {
                "everywhere".into()
            } else {
                format!("fails for {}", bad.join(" "))
            }
        ),
    )
}

fn criterion_9(engine: &Engine64) -> Outcome {
    let reports = relation_suite(engine, 100, SEED, &SuiteTolerances::default()).unwrap();
    let failures: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {} {}", r.identity, r.characteristic, r.tau))
        .collect();
    outcome(
        failures.is_empty(),
        format!(
            "{} checks over 100 cases, {} failures{}",
            reports.len(),
            failures.len(),
            failures
                .first()
                .map(|f| format!(" (first: {f})"))
                .unwrap_or_default()
        ),
    )
}

fn main() {
    let engine = Engine64::default();
    let mut all = true;
    let mut report = |name: &str, limit: Option<Duration>, start: Instant, o: Outcome| {
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let pass = o.pass && in_time;
        all &= pass;
        let limit_note = limit.map_or(String::new(), |l| format!(", limit {:?}", l));
        println!(
            "{} criterion {name}: {} [{:.2?}{limit_note}]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed
        );
    };

    let t = Instant::now();
    report(
        "1 (Jacobi identity)",
        Some(Duration::from_secs(1)),
        t,
        criterion_1(&engine),
    );
    let t = Instant::now();
    report(
        "2 (fundamental identity)",
        Some(Duration::from_secs(30)),
        t,
        criterion_2(&engine),
    );
    let t = Instant::now();
    report("3 (golden reproduction)", None, t, criterion_3(&engine));
    let t = Instant::now();
    let (c4, c5) = criterion_4_5(&engine);
    report("4 (determinant formula)", None, t, c4);
    report("5 (closed form vs linear solve)", None, t, c5);
    let t = Instant::now();
    report("6 (orbit tables)", None, t, criterion_6());
    let t = Instant::now();
    report("7 (quoted cross-checks)", None, t, criterion_7(&engine));
    let t = Instant::now();
    report("8 (homogeneity)", None, t, criterion_8());
    let t = Instant::now();
    report(
        "9 (property suites)",
        Some(Duration::from_secs(60)),
        t,
        criterion_9(&engine),
    );

    if !all {
        std::process::exit(1);
    }
}
