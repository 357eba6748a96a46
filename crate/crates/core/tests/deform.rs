use std::collections::BTreeMap;

use mckaykit::deform::{self, CochainPair, SVec, TruncatedGradedAlgebra};
use mckaykit::exactlin::Rat;
use mckaykit::groups::{build_group, DEFAULT_CAP};
use num_traits::{One, Zero};

/// γ = Σ_k ε^k γ_k with γ_0 the algebra itself; γ_k is a sum of homogeneous pairs.
struct Deformation<'a> {
    alg: &'a TruncatedGradedAlgebra,
    window: usize,
    orders: Vec<Vec<CochainPair>>,
}

fn add_into(acc: &mut BTreeMap<usize, Rat>, v: &SVec, c: &Rat) {
    for (k, x) in v {
        *acc.entry(*k).or_insert_with(Rat::zero) += x * c;
    }
}

fn collect(acc: BTreeMap<usize, Rat>) -> SVec {
    acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
}

impl Deformation<'_> {
    /// k-th order product (psi = false) or bracket on basis elements.
    fn op(&self, k: usize, psi: bool, i: usize, j: usize) -> Option<SVec> {
        if k == 0 {
            return if psi {
                self.alg.br(i, j)
            } else {
                self.alg.mul(i, j)
            }
            .cloned();
        }
        if self.alg.degree(i) + self.alg.degree(j) > self.window {
            return None;
        }
        let mut acc = BTreeMap::new();
        for g in &self.orders[k - 1] {
            let tab = if psi { &g.psi } else { &g.phi };
            let v = tab.get(&(i.min(j), i.max(j))).cloned().unwrap_or_default();
            let sign = if psi && i > j {
                -Rat::one()
            } else {
                Rat::one()
            };
            add_into(&mut acc, &v, &sign);
        }
        Some(collect(acc))
    }

    fn op_vec(&self, k: usize, psi: bool, u: &SVec, v: &SVec) -> Option<SVec> {
        let mut acc = BTreeMap::new();
        for (i, a) in u {
            for (j, b) in v {
                add_into(&mut acc, &self.op(k, psi, *i, *j)?, &(a * b));
            }
        }
        Some(collect(acc))
    }

    /// Number of associativity/Leibniz/Jacobi identities failing at order ε^n,
    /// over all triples on which every term is defined.
    fn violations(&self, n: usize) -> usize {
        let e = |i: usize| vec![(i, Rat::one())];
        let len = self.alg.len();
        let mut bad = 0;
        for a in 0..len {
            for b in 0..len {
                for c in 0..len {
                    let mut terms: [Option<BTreeMap<usize, Rat>>; 3] = [
                        Some(BTreeMap::new()),
                        Some(BTreeMap::new()),
                        Some(BTreeMap::new()),
                    ];
                    let one = Rat::one();
                    let m1 = -Rat::one();
                    for i in 0..=n {
                        let j = n - i;
                        let mut push =
                            |slot: usize, v: Option<SVec>, s: &Rat| match (v, &mut terms[slot]) {
                                (Some(v), Some(acc)) => add_into(acc, &v, s),
                                _ => terms[slot] = None,
                            };
                        let ab = || self.op(j, false, a, b);
                        let bc = || self.op(j, false, b, c);
                        push(0, ab().and_then(|x| self.op_vec(i, false, &x, &e(c))), &one);
                        push(0, bc().and_then(|x| self.op_vec(i, false, &e(a), &x)), &m1);
                        push(1, bc().and_then(|x| self.op_vec(i, true, &e(a), &x)), &one);
                        push(
                            1,
                            self.op(i, true, a, b)
                                .and_then(|x| self.op_vec(j, false, &x, &e(c))),
                            &m1,
                        );
                        push(
                            1,
                            self.op(i, true, a, c)
                                .and_then(|x| self.op_vec(j, false, &e(b), &x)),
                            &m1,
                        );
                        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                            push(
                                2,
                                self.op(j, true, y, z)
                                    .and_then(|w| self.op_vec(i, true, &e(x), &w)),
                                &one,
                            );
                        }
                    }
                    bad += terms
                        .into_iter()
                        .flatten()
                        .filter(|acc| acc.values().any(|x| !x.is_zero()))
                        .count();
                }
            }
        }
        bad
    }
}

fn certified_basis(alg: &TruncatedGradedAlgebra, plan: &deform::WindowPlan) -> Vec<CochainPair> {
    plan.degrees()
        .filter(|&m| plan.is_certified(m))
        .flat_map(|m| deform::hp2_degree(alg, m, plan.window))
        .collect()
}

#[test]
fn second_order_extensions_satisfy_the_identities() {
    let g = build_group("cyclic:3", DEFAULT_CAP).unwrap();
    let (plan, alg) = deform::windowed_algebra(&g, 8).unwrap();
    let basis = certified_basis(&alg, &plan);
    assert_eq!(basis.len(), 2);
    let mut directions: Vec<Vec<CochainPair>> = basis.iter().map(|c| vec![c.clone()]).collect();
    directions.push(basis.clone());
    for parts in directions {
        let second = deform::mc_extend_sum(&alg, &parts).unwrap();
        let d = Deformation {
            alg: &alg,
            window: plan.window,
            orders: vec![parts.clone(), second],
        };
        assert_eq!(d.violations(0), 0, "undeformed algebra");
        assert_eq!(d.violations(1), 0, "first order");
        assert_eq!(d.violations(2), 0, "second order");
        // dropping the correction breaks order two unless it was zero
        let bare = Deformation {
            alg: &alg,
            window: plan.window,
            orders: vec![parts.clone(), vec![]],
        };
        let had_source = d.orders[1].iter().any(|p| !p.is_zero());
        assert_eq!(bare.violations(2) > 0, had_source);
    }
}

#[test]
fn single_direction_matches_sum_api() {
    let g = build_group("cyclic:2", DEFAULT_CAP).unwrap();
    let (plan, alg) = deform::windowed_algebra(&g, 8).unwrap();
    let basis = certified_basis(&alg, &plan);
    let one = deform::mc_extend(&alg, &basis[0]).unwrap();
    let many = deform::mc_extend_sum(&alg, &basis[..1]).unwrap();
    assert_eq!(vec![one], many);
}

#[test]
fn certified_dims_are_stable_in_the_window() {
    for (spec, w) in [("cyclic:2", 8), ("cyclic:3", 8)] {
        let g = build_group(spec, DEFAULT_CAP).unwrap();
        let report = |w| {
            let (plan, alg) = deform::windowed_algebra(&g, w).unwrap();
            let h2 = deform::hp2_first_order(&alg, plan);
            h2.certified
                .into_iter()
                .map(|d| (d.m, d.dim))
                .collect::<BTreeMap<i64, usize>>()
        };
        let (small, large) = (report(w), report(w + 2));
        for (m, dim) in &small {
            assert_eq!(large.get(m), Some(dim), "{spec} degree {m}");
        }
    }
}

#[test]
fn smooth_plane_has_no_higher_cohomology() {
    let g = build_group("trivial:1", DEFAULT_CAP).unwrap();
    let (plan, alg) = deform::windowed_algebra(&g, 6).unwrap();
    assert_eq!(deform::hp1(&alg, plan).certified_total(), 0);
    assert_eq!(deform::hp2_first_order(&alg, plan).certified_total(), 0);
    let h0 = deform::hp0(&alg);
    assert_eq!(h0.certified_total(), 1);
}
