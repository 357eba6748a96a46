//! Acceptance run: one PASS/FAIL line per criterion. Built without the libtest
//! harness so the lines always reach stdout; exits non-zero if any fails.

use std::time::{Duration, Instant};

use mckaykit::catalog::{self, CartanType};
use mckaykit::deform;
use mckaykit::groups::{build_group, DEFAULT_CAP};
use mckaykit::mckay;
use mckaykit::poisson::Bivector;
use mckaykit::schouten::hp_smooth;
use mckaykit::verify;

// Limits, pinned. All comparisons are exact; only wall-clock budgets vary.
const C1_BUDGET: Duration = Duration::from_secs(1);
const C2_BUDGET: Duration = Duration::from_secs(600);
const C3_MAX_ORDER: usize = 2000;
const C5_MAX_ORDER: usize = 2000;
const C5_BUDGET: Duration = Duration::from_secs(300);
const C7_BUDGET_EACH: Duration = Duration::from_secs(600);
const C9_BUDGET: Duration = Duration::from_secs(120);
const C9_SEED: u64 = 0;
const C10_WINDOW: usize = 10;
const C10_BUDGET: Duration = Duration::from_secs(600);
const C11_MAX_ORDER: usize = 500;
const C11_MAX_DEGREE: usize = 8;
/// Largest |W| whose exponents are computed by enumerating W (E₇, E₈ excluded).
const C11_EXPONENT_CAP: usize = 100_000;

type Check = fn() -> (bool, String);

struct Line {
    n: usize,
    pass: bool,
    what: String,
    took: Duration,
}

fn criterion(n: usize, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (pass, what) = f();
    let took = start.elapsed();
    let l = Line {
        n,
        pass,
        what,
        took,
    };
    println!(
        "criterion {:>2}: {} — {} [{:.2}s]",
        l.n,
        if l.pass { "PASS" } else { "FAIL" },
        l.what,
        l.took.as_secs_f64()
    );
    l
}

fn within(start: Instant, budget: Duration) -> bool {
    start.elapsed() <= budget
}

fn c1() -> (bool, String) {
    let start = Instant::now();
    let mut bad = vec![];
    for n in 2..=12u32 {
        let g = build_group(&format!("cyclic:{n}"), DEFAULT_CAP).unwrap();
        let count = mckay::symplectic_reflections(&g).count;
        if count != n as usize - 1 {
            bad.push(format!("cyclic:{n} → {count}"));
        }
    }
    let fast = within(start, C1_BUDGET);
    (
        bad.is_empty() && fast,
        format!("cyclic:2..12 reflection classes = n−1; mismatches {bad:?}; under {C1_BUDGET:?}: {fast}"),
    )
}

fn c2() -> (bool, String) {
    let start = Instant::now();
    let cases = [
        ("A2", 1),
        ("A3", 1),
        ("A4", 1),
        ("A5", 1),
        ("D4", 1),
        ("E6", 1),
        ("B2", 2),
        ("B3", 2),
        ("B4", 2),
        ("C3", 2),
        ("F4", 2),
        ("G2", 2),
    ];
    let mut bad = vec![];
    for (t, want) in cases {
        let w = catalog::weyl_group(CartanType::parse(t).unwrap(), DEFAULT_CAP).unwrap();
        let got = mckay::symplectic_reflections(&w).count;
        if got != want {
            bad.push(format!("{t}: {got} ≠ {want}"));
        }
    }
    let fast = within(start, C2_BUDGET);
    (
        bad.is_empty() && fast,
        format!("Weyl reflection classes on h⊕h* (12 types incl. E6); mismatches {bad:?}"),
    )
}

fn c3() -> (bool, String) {
    let r = verify::grcenter_axioms(C3_MAX_ORDER, DEFAULT_CAP).unwrap();
    (
        r.pass,
        format!(
            "gr Z(G) commutative/associative/graded/unital and = orbifold Poincaré, {} catalog groups of order ≤ {C3_MAX_ORDER}; counterexample {}",
            r.cases,
            r.counterexample.map_or("none".into(), |v| v.to_string())
        ),
    )
}

fn c4() -> (bool, String) {
    let mut bad = vec![];
    for n in 2..=12usize {
        let g = build_group(&format!("cyclic:{n}"), DEFAULT_CAP).unwrap();
        let p = mckay::gr_center(&g).poincare;
        if p != vec![1, 0, n - 1] {
            bad.push(format!("cyclic:{n} → {p:?}"));
        }
    }
    let s3 = build_group("symmetric:3", DEFAULT_CAP).unwrap();
    let p = mckay::gr_center(&s3).poincare;
    if p != vec![1, 0, 1, 0, 1] {
        bad.push(format!("symmetric:3 → {p:?}"));
    }
    (
        bad.is_empty(),
        format!("Poincaré 1+(n−1)t² for cyclic:2..12 and 1+t²+t⁴ for S₃; mismatches {bad:?}"),
    )
}

fn c5() -> (bool, String) {
    let start = Instant::now();
    let r = verify::lemma_easy(C5_MAX_ORDER, true, DEFAULT_CAP).unwrap();
    let fast = within(start, C5_BUDGET);
    (
        r.pass && fast,
        format!(
            "V^gh = V^g ∩ V^h whenever V^g + V^h = V: {} ordered pairs over all catalog groups of order ≤ {C5_MAX_ORDER}, counterexample {}",
            r.cases,
            r.counterexample.map_or("none".into(), |v| v.to_string())
        ),
    )
}

fn c6() -> (bool, String) {
    let pairs: Vec<(String, String)> = verify::KUNNETH_PAIRS
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    let r = verify::kunneth(&pairs, DEFAULT_CAP).unwrap();
    (
        r.pass && r.cases == 10,
        format!(
            "orbifold Poincaré of G₁×G₂ = product, {} pairs; counterexample {}",
            r.cases,
            r.counterexample.map_or("none".into(), |v| v.to_string())
        ),
    )
}

fn c7() -> (bool, String) {
    let mut ok = true;
    let mut parts = vec![];
    for (t, window, n) in [("A1", 8, 1), ("A2", 10, 2), ("A3", 10, 3)] {
        let start = Instant::now();
        let t = CartanType::parse(t).unwrap();
        let (spec, g) = verify::du_val_group(t, DEFAULT_CAP).unwrap();
        let (plan, alg) = deform::windowed_algebra(&g, window).unwrap();
        let h1 = deform::hp1(&alg, plan);
        let h2 = deform::hp2_first_order(&alg, plan);
        let reflections = mckay::symplectic_reflections(&g).count;
        let good = h1.certified.iter().all(|d| d.dim == 0)
            && h2.certified_total() == n
            && reflections == n
            && within(start, C7_BUDGET_EACH);
        ok &= good;
        let degs: Vec<i64> = h2
            .certified
            .iter()
            .filter(|d| d.dim > 0)
            .map(|d| d.m)
            .collect();
        parts.push(format!(
            "{t} ({spec}, W={window}): HP¹ {} / HP² {} (𝐧={n}, HP² degrees {degs:?}, {:.1}s)",
            h1.certified_total(),
            h2.certified_total(),
            start.elapsed().as_secs_f64()
        ));
    }
    (ok, parts.join("; "))
}

fn c8() -> (bool, String) {
    let mut ok = true;
    let mut parts = vec![];
    for (k, window) in [(1usize, 8u32), (2, 6)] {
        let theta = Bivector::standard(k);
        let dims: Vec<usize> = (0..=2)
            .map(|p| {
                let cells = hp_smooth(&theta, p, window).unwrap();
                assert!(cells.iter().all(|c| c.certified));
                cells.iter().map(|c| c.dim).sum()
            })
            .collect();
        ok &= dims == vec![1, 0, 0];
        parts.push(format!("ℂ^{} (D={window}): HP⁰,HP¹,HP² = {dims:?}", 2 * k));
    }
    (ok, parts.join("; "))
}

fn c9() -> (bool, String) {
    let start = Instant::now();
    let s = verify::schouten_suite(C9_SEED);
    let g = verify::gerstenhaber_suite(C9_SEED);
    let fast = within(start, C9_BUDGET);
    (
        s.pass && g.pass && fast,
        format!(
            "d∘d=0 ×{}, Schouten Jacobi ×{}, Gerstenhaber on {} algebras, tau on {} (ω,f) cases; failures {:?} {:?}",
            s.details["d_squared"],
            s.details["jacobi_triples"],
            g.details["random_algebras"],
            g.details["tau_cases"],
            s.counterexample,
            g.counterexample
        ),
    )
}

fn c10() -> (bool, String) {
    let start = Instant::now();
    let mut ok = true;
    let mut parts = vec![];
    for spec in ["cyclic:2", "cyclic:3"] {
        let g = build_group(spec, DEFAULT_CAP).unwrap();
        let (plan, alg) = deform::windowed_algebra(&g, C10_WINDOW).unwrap();
        let basis: Vec<_> = plan
            .degrees()
            .filter(|&m| plan.is_certified(m))
            .flat_map(|m| deform::hp2_degree(&alg, m, plan.window))
            .collect();
        let mut directions: Vec<Vec<_>> = basis.iter().map(|c| vec![c.clone()]).collect();
        if basis.len() > 1 {
            directions.push(basis.clone());
        }
        let mut solved = 0;
        for d in &directions {
            match deform::mc_extend_sum(&alg, d) {
                Ok(_) => solved += 1,
                Err(e) => {
                    ok = false;
                    parts.push(format!("{spec}: {e}"));
                }
            }
        }
        ok &= !basis.is_empty();
        parts.push(format!(
            "{spec}: {solved}/{} directions unobstructed",
            directions.len()
        ));
    }
    ok &= within(start, C10_BUDGET);
    (
        ok,
        format!(
            "order-2 Maurer–Cartan at W={C10_WINDOW}: {}",
            parts.join("; ")
        ),
    )
}

fn c11() -> (bool, String) {
    let r =
        verify::molien_cross(C11_MAX_ORDER, C11_MAX_DEGREE, C11_EXPONENT_CAP, DEFAULT_CAP).unwrap();
    let groups = r.details["groups"].as_array().map_or(0, Vec::len);
    let exps = r.details["exponents"].as_array().unwrap();
    let computed = exps.iter().filter(|e| e["computed"] == true).count();
    let skipped: Vec<String> = exps
        .iter()
        .filter(|e| e["computed"] == false)
        .map(|e| e["type"].as_str().unwrap().to_string())
        .collect();
    (
        r.pass,
        format!(
            "Molien = invariant dims (deg ≤ {C11_MAX_DEGREE}) on {groups} groups of order ≤ {C11_MAX_ORDER}; Π(m_i+1)=|W| on {computed} types (not enumerated: {skipped:?}); counterexample {}",
            r.counterexample.map_or("none".into(), |v| v.to_string())
        ),
    )
}

fn main() {
    // `cargo test -- --list` and friends probe harness-less targets
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let checks: [(usize, Check); 11] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
    ];
    let lines: Vec<Line> = checks.into_iter().map(|(n, f)| criterion(n, f)).collect();
    let failed: Vec<usize> = lines.iter().filter(|l| !l.pass).map(|l| l.n).collect();
    println!(
        "acceptance: {}/{} criteria pass",
        lines.len() - failed.len(),
        lines.len()
    );
    if !failed.is_empty() {
        println!("acceptance: failing {failed:?}");
        std::process::exit(1);
    }
}
