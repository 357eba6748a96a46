//! Verification suites: randomized and exhaustive checks of the structural
//! identities, each returning a pass/fail report with a counterexample payload.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, CartanType, RootType};
use crate::deform::{self, DeformError};
use crate::exactlin::field::{format_rat, rat_int};
use crate::exactlin::Rat;
use crate::groups::{build_group, GroupError, MatrixGroup};
use crate::mckay;
use crate::poisson::{invariant_basis, molien, Bivector};
use crate::schouten::{self, Cochain, FinAlgebra};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub cases: usize,
    pub counterexample: Option<Value>,
    pub details: Value,
}

impl SuiteReport {
    fn new(suite: &str, cases: usize, failure: Option<Value>, details: Value) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            pass: failure.is_none(),
            cases,
            counterexample: failure,
            details,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error("{0}")]
    Usage(String),
}

/// Catalog groups with |G| ≤ `max_order`, in catalog order.
pub fn catalog_groups(
    max_order: usize,
    cap: usize,
) -> Result<Vec<(String, MatrixGroup)>, GroupError> {
    let mut out = vec![];
    for spec in catalog::small_catalog() {
        if let Some(order) = catalog_order(spec) {
            if order > max_order {
                continue;
            }
        }
        let g = build_group(spec, cap)?;
        if g.order() <= max_order {
            out.push((spec.to_string(), g));
        }
    }
    Ok(out)
}

/// Order known from the spec alone, so large groups are never enumerated.
fn catalog_order(spec: &str) -> Option<usize> {
    let (kind, arg) = spec.split_once(':')?;
    match kind {
        "cyclic" => arg.parse().ok(),
        "binary-dihedral" => arg.parse::<usize>().ok().map(|n| 4 * n),
        "weyl" => CartanType::parse(arg)
            .ok()
            .and_then(|t| usize::try_from(t.weyl_order()).ok()),
        "symmetric" | "permutation" => arg.parse::<usize>().ok().map(|n| (1..=n).product()),
        _ => None,
    }
}

pub fn lemma_easy(
    max_order: usize,
    exhaustive: bool,
    cap: usize,
) -> Result<SuiteReport, GroupError> {
    let groups = catalog_groups(max_order, cap)?;
    let mut rows = vec![];
    let mut failure = None;
    let mut pairs = 0;
    for (name, g) in &groups {
        let r = mckay::check_lemma_easy(g, exhaustive);
        pairs += r.pairs_checked;
        if let (None, Some((a, b))) = (&failure, r.counterexample) {
            failure = Some(json!({
                "group": name,
                "g": g.element(a),
                "h": g.element(b),
            }));
        }
        rows.push(json!({
            "group": name,
            "order": g.order(),
            "pairs_checked": r.pairs_checked,
            "pairs_in_scope": r.pairs_in_scope,
            "pass": r.pass,
        }));
    }
    Ok(SuiteReport::new(
        "lemma-easy",
        pairs,
        failure,
        json!({ "exhaustive": exhaustive, "groups": rows }),
    ))
}

pub fn grcenter_axioms(max_order: usize, cap: usize) -> Result<SuiteReport, GroupError> {
    let groups = catalog_groups(max_order, cap)?;
    let results: Vec<(Value, Option<Value>)> = groups
        .par_iter()
        .map(|(name, g)| {
            let z = mckay::gr_center(g);
            let orb = mckay::orbifold_poincare(g);
            let axioms = z.check_axioms();
            let mut fail = None;
            if let Err(e) = &axioms {
                fail = Some(json!({ "group": name, "axiom": e }));
            } else if orb != z.poincare {
                fail = Some(json!({
                    "group": name,
                    "orbifold_poincare": orb,
                    "grcenter_poincare": z.poincare,
                }));
            }
            (
                json!({ "group": name, "order": g.order(), "poincare": z.poincare, "pass": fail.is_none() }),
                fail,
            )
        })
        .collect();
    let failure = results.iter().find_map(|(_, f)| f.clone());
    Ok(SuiteReport::new(
        "grcenter-axioms",
        results.len(),
        failure,
        json!({ "groups": results.into_iter().map(|(r, _)| r).collect::<Vec<_>>() }),
    ))
}

pub const KUNNETH_PAIRS: [(&str, &str); 10] = [
    ("cyclic:2", "cyclic:3"),
    ("cyclic:2", "cyclic:2"),
    ("cyclic:3", "cyclic:4"),
    ("cyclic:5", "cyclic:2"),
    ("cyclic:2", "binary-dihedral:2"),
    ("binary-dihedral:2", "binary-dihedral:3"),
    ("cyclic:3", "weyl:A2"),
    ("cyclic:2", "symmetric:3"),
    ("weyl:A1", "weyl:B2"),
    ("binary-dihedral:2", "weyl:G2"),
];

pub fn poly_mul(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut c = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    while c.len() > 1 && c.last() == Some(&0) {
        c.pop();
    }
    c
}

pub fn kunneth(pairs: &[(String, String)], cap: usize) -> Result<SuiteReport, GroupError> {
    let mut rows = vec![];
    let mut failure = None;
    for (s1, s2) in pairs {
        let g1 = build_group(s1, cap)?;
        let g2 = build_group(s2, cap)?;
        let prod = g1.direct_product(&g2, cap)?;
        let p1 = mckay::orbifold_poincare(&g1);
        let p2 = mckay::orbifold_poincare(&g2);
        let p = mckay::orbifold_poincare(&prod);
        let expected = poly_mul(&p1, &p2);
        let ok = p == expected;
        if !ok && failure.is_none() {
            failure = Some(json!({ "pair": [s1, s2], "product": p, "expected": expected }));
        }
        rows.push(json!({ "pair": [s1, s2], "factors": [p1, p2], "product": p, "pass": ok }));
    }
    Ok(SuiteReport::new(
        "kunneth",
        pairs.len(),
        failure,
        json!({ "pairs": rows }),
    ))
}

pub fn schouten_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failure = None;
    let so3 = schouten::so3_bivector();
    let standard = Bivector::standard(2);
    let mut d2 = 0;
    for i in 0..100 {
        let (theta, n) = if i % 2 == 0 {
            (&so3, 3)
        } else {
            (&standard, 4)
        };
        let k = rng.gen_range(0..=3);
        let p = schouten::random_polyvector(n, k, 3, &mut rng);
        d2 += 1;
        if let Err(e) = schouten::check_d_squared(&p, theta) {
            failure.get_or_insert(json!({ "identity": "d∘d = 0", "case": i, "error": e }));
        }
    }
    let mut jac = 0;
    for i in 0..50 {
        let n = rng.gen_range(2..=4);
        let ps: Vec<_> = (0..3)
            .map(|_| schouten::random_polyvector(n, rng.gen_range(0..=3.min(n)), 2, &mut rng))
            .collect();
        jac += 1;
        if let Err(e) = schouten::check_schouten(&ps[0], &ps[1], &ps[2]) {
            failure.get_or_insert(json!({ "identity": "graded Jacobi", "case": i, "error": e }));
        }
    }
    SuiteReport::new(
        "schouten",
        d2 + jac,
        failure,
        json!({ "seed": seed, "d_squared": d2, "jacobi_triples": jac }),
    )
}

/// Basis of reduced k-cochains on an algebra with basis {1, x}.
fn reduced_basis_dual(a: &FinAlgebra, k: usize) -> Vec<Cochain> {
    assert_eq!(a.dim(), 2);
    let x = 1 - a.unit;
    (0..2)
        .map(|out| {
            let mut c = Cochain::zero(vec![2; k], 2);
            let mut v = vec![Rat::zero(); 2];
            v[out] = Rat::one();
            c.set(&vec![x; k], &v);
            c
        })
        .collect()
}

pub fn gerstenhaber_suite(seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failure: Option<Value> = None;
    let mut algebras = 0;
    for i in 0..20 {
        let n = rng.gen_range(2..=3);
        let a = schouten::random_algebra(n, &mut rng);
        algebras += 1;
        let mut bad = a.mult().clone();
        let inputs = [rng.gen_range(0..n), rng.gen_range(0..n)];
        let mut v = bad.value(&inputs).to_vec();
        let slot = rng.gen_range(0..n);
        v[slot] += rat_int(rng.gen_range(1..=3));
        bad.set(&inputs, &v);
        for (what, m) in [("algebra", a.mult()), ("perturbed", &bad)] {
            if let Err(e) = schouten::check_mm_associativity(m) {
                failure.get_or_insert(json!({ "identity": "[m,m]=0 iff associative", "case": i, "which": what, "error": e }));
            }
        }
        let cs: Vec<Cochain> = (0..3)
            .map(|_| {
                let k = rng.gen_range(1..=2);
                Cochain::random(vec![n; k], n, &mut rng, 0.6)
            })
            .collect();
        if let Err(e) = schouten::check_gerstenhaber(&cs[0], &cs[1], &cs[2]) {
            failure.get_or_insert(json!({ "identity": "graded Jacobi", "case": i, "error": e }));
        }
        let f = Cochain::random(vec![n; rng.gen_range(0..=2)], n, &mut rng, 0.6);
        let ok = a
            .hochschild_differential(&a.hochschild_differential(&f))
            .is_zero();
        if !ok {
            failure.get_or_insert(json!({ "identity": "δ∘δ = 0", "case": i }));
        }
    }
    let a = FinAlgebra::truncated_poly("x", 2);
    let b = FinAlgebra::truncated_poly("y", 2);
    let ab = a.tensor(&b);
    let fs: Vec<Cochain> = (0..50)
        .map(|_| {
            let k = rng.gen_range(0..=3);
            Cochain::random(vec![4; k], 4, &mut rng, 0.5)
        })
        .collect();
    let mut tau = 0;
    for k in 0..=2 {
        for omega in reduced_basis_dual(&a, k) {
            for (j, f) in fs.iter().enumerate() {
                tau += 1;
                if let Err(e) = schouten::check_tau(&omega, f, &a, &b) {
                    failure.get_or_insert(
                        json!({ "identity": "tau", "omega_arity": k, "f": j, "error": e }),
                    );
                }
            }
        }
    }
    let mut chain = 0;
    for f in fs.iter().filter(|f| f.arity() <= 2).take(10) {
        chain += 1;
        if let Err(e) = schouten::check_chain_map(f, &ab, &a, &b) {
            failure.get_or_insert(json!({ "identity": "shuffle chain map", "error": e }));
        }
    }
    SuiteReport::new(
        "gerstenhaber",
        algebras + tau + chain,
        failure,
        json!({
            "seed": seed,
            "random_algebras": algebras,
            "tau_cases": tau,
            "chain_map_cases": chain,
        }),
    )
}

/// du Val group of an ADE type realised in the catalog (A_n, D_n).
pub fn du_val_group(t: CartanType, cap: usize) -> Result<(String, MatrixGroup), SuiteError> {
    let spec = match t.family {
        RootType::A => format!("cyclic:{}", t.rank + 1),
        RootType::D if t.rank >= 4 => format!("binary-dihedral:{}", t.rank - 2),
        _ => {
            return Err(SuiteError::Usage(format!(
                "no du Val group for type {t} in the catalog"
            )))
        }
    };
    let g = build_group(&spec, cap)?;
    Ok((spec, g))
}

pub fn hp_duval(t: CartanType, window: usize, cap: usize) -> Result<SuiteReport, SuiteError> {
    let (spec, g) = du_val_group(t, cap)?;
    let expected = mckay::symplectic_reflections(&g).count;
    let (plan, alg) = deform::windowed_algebra(&g, window)?;
    let h1 = deform::hp1(&alg, plan);
    let h2 = deform::hp2_first_order(&alg, plan);
    let h1_total = h1.certified_total();
    let h2_total = h2.certified_total();
    let pass = h1_total == 0 && h2_total == expected;
    let failure = (!pass)
        .then(|| json!({ "hp1_total": h1_total, "hp2_total": h2_total, "expected_hp2": expected }));
    Ok(SuiteReport::new(
        "hp-duval",
        2,
        failure,
        json!({
            "type": t.to_string(),
            "group": spec,
            "window": window,
            "internal_degree": plan.internal,
            "dims": [h1_total, h2_total],
            "expected": [0, expected],
            "hp1": h1.certified,
            "hp2": h2.certified,
        }),
    ))
}

pub fn molien_cross(
    max_order: usize,
    max_degree: usize,
    exponent_cap: usize,
    cap: usize,
) -> Result<SuiteReport, GroupError> {
    let groups = catalog_groups(max_order, cap)?;
    let results: Vec<(Value, Option<Value>)> = groups
        .par_iter()
        .map(|(name, g)| {
            let series = molien(g, max_degree);
            let dims: Vec<usize> = (0..=max_degree as u32)
                .map(|d| invariant_basis(g, d).dim())
                .collect();
            let mut fail = None;
            for (d, (c, n)) in series.iter().zip(&dims).enumerate() {
                if *c != rat_int(*n as i64) {
                    fail = Some(json!({
                        "group": name,
                        "degree": d,
                        "molien": format_rat(c),
                        "invariant_dim": n,
                    }));
                    break;
                }
            }
            (
                json!({ "group": name, "order": g.order(), "dims": dims, "pass": fail.is_none() }),
                fail,
            )
        })
        .collect();
    let mut failure = results.iter().find_map(|(_, f)| f.clone());
    let mut types = vec![];
    for t in catalog::catalog_types() {
        if t.weyl_order() > exponent_cap as u128 {
            types.push(json!({ "type": t.to_string(), "weyl_order": t.weyl_order().to_string(), "computed": false }));
            continue;
        }
        let ex = catalog::exponents(t, cap)?;
        let prod: u128 = ex.iter().map(|&m| m as u128 + 1).product();
        let ok = prod == t.weyl_order();
        if !ok && failure.is_none() {
            failure = Some(
                json!({ "type": t.to_string(), "exponents": ex, "product": prod.to_string() }),
            );
        }
        types.push(json!({ "type": t.to_string(), "exponents": ex, "computed": true, "pass": ok }));
    }
    let cases = results.len() + types.len();
    Ok(SuiteReport::new(
        "molien-cross",
        cases,
        failure,
        json!({
            "max_degree": max_degree,
            "groups": results.into_iter().map(|(r, _)| r).collect::<Vec<_>>(),
            "exponents": types,
        }),
    ))
}
