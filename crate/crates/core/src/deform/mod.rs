//! Truncated Poisson cohomology HP⁰, HP¹, HP² of graded Poisson algebras and
//! the order-2 Maurer–Cartan extension.

mod algebra;
mod cohomology;

pub use algebra::{AlgebraSummary, TruncatedGradedAlgebra};
pub use cohomology::{
    add_pairs, check_cocycle, class_normal_form, coboundary, hp0, hp1, hp1_degree, hp2_degree,
    hp2_first_order, mc_extend, mc_extend_sum, CochainPair, HpDegree, HpReport, UncertifiedDegree,
    WindowPlan,
};

use crate::exactlin::Rat;
use crate::groups::MatrixGroup;
use crate::poisson::Bivector;

/// Sparse vector over the global basis of a truncated algebra.
pub type SVec = Vec<(usize, Rat)>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DeformError {
    #[error("structure constants are not rational")]
    NotRational,
    #[error("basis is not closed under the operations")]
    NotClosed,
    #[error("bivector coefficients are not homogeneous of degree ≤ 2")]
    InhomogeneousBracket,
    #[error("cochain does not match the algebra's window")]
    Shape,
    #[error("not a first-order cocycle ({violations} conditions fail)")]
    InvalidCocycle { violations: usize },
    #[error("order-2 extension obstructed in degree {degree} ({conditions} conditions)")]
    Obstructed { degree: i64, conditions: usize },
}

/// ℂ[V]^G tabulated to degree `d`.
pub fn build_truncated(g: &MatrixGroup, d: usize) -> Result<TruncatedGradedAlgebra, DeformError> {
    TruncatedGradedAlgebra::from_group(g, d)
}

/// Window plan for ℂ[V]^G and the algebra built to its internal degree.
pub fn windowed_algebra(
    g: &MatrixGroup,
    window: usize,
) -> Result<(WindowPlan, TruncatedGradedAlgebra), DeformError> {
    let small = build_truncated(g, window)?;
    let gdeg = small.generator_degrees().into_iter().max().unwrap_or(1);
    let plan = WindowPlan::for_generator_degree(window, gdeg);
    Ok((plan, build_truncated(g, plan.internal)?))
}

/// Same for a polynomial ring with bracket θ (generators in degree 1).
pub fn windowed_polynomial_ring(
    theta: &Bivector,
    window: usize,
) -> Result<(WindowPlan, TruncatedGradedAlgebra), DeformError> {
    let plan = WindowPlan::for_generator_degree(window, 1);
    Ok((
        plan,
        TruncatedGradedAlgebra::polynomial_ring(theta, plan.internal)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{sl2_subgroup, symmetric_group, trivial_group, Sl2Kind};
    use crate::exactlin::field::rat_int;
    use crate::groups::DEFAULT_CAP;
    use num_traits::Zero;

    fn cyclic(n: u32) -> MatrixGroup {
        sl2_subgroup(Sl2Kind::Cyclic, n, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn truncated_dims() {
        assert_eq!(
            build_truncated(&cyclic(2), 4).unwrap().dims(),
            vec![1, 0, 3, 0, 5]
        );
        let t = build_truncated(&trivial_group(1).unwrap(), 2).unwrap();
        assert_eq!(t.dims(), vec![1, 2, 3]);
        t.audit().unwrap();
    }

    #[test]
    fn s3_tables_pass_audit() {
        let a = build_truncated(&symmetric_group(3, DEFAULT_CAP).unwrap(), 6).unwrap();
        a.audit().unwrap();
        assert_eq!(a.generator_degrees(), vec![2, 2, 2, 3, 3, 3, 3]);
    }

    #[test]
    fn poisson_center() {
        let plane = TruncatedGradedAlgebra::polynomial_ring(&Bivector::standard(1), 6).unwrap();
        assert_eq!(
            hp0(&plane)
                .certified
                .iter()
                .map(|d| d.dim)
                .collect::<Vec<_>>(),
            vec![1, 0, 0, 0, 0]
        );
        let flat = TruncatedGradedAlgebra::polynomial_ring(&Bivector::zero(2), 4).unwrap();
        assert_eq!(
            hp0(&flat)
                .certified
                .iter()
                .map(|d| d.dim)
                .collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        let a1 = build_truncated(&cyclic(2), 8).unwrap();
        assert_eq!(hp0(&a1).certified_total(), 1);
    }

    #[test]
    fn hp1_examples() {
        let (plan, a) = windowed_algebra(&cyclic(2), 8).unwrap();
        let r = hp1(&a, plan);
        assert_eq!(r.certified_total(), 0, "{r:?}");
        // ℂ[x] with zero bracket: every derivation survives
        let line = TruncatedGradedAlgebra::polynomial_ring(&Bivector::zero(1), 6).unwrap();
        assert_eq!(hp1_degree(&line, 0, 4), 1);
        assert_eq!(hp1_degree(&line, -1, 4), 1);
    }

    #[test]
    fn hp2_a1_and_plane() {
        let (plan, a) = windowed_algebra(&cyclic(2), 8).unwrap();
        let r = hp2_first_order(&a, plan);
        assert_eq!(r.certified_total(), 1, "{r:?}");
        assert_eq!(r.certified.iter().find(|d| d.dim > 0).unwrap().m, -4);
        let (plan, a) = windowed_polynomial_ring(&Bivector::standard(1), 6).unwrap();
        assert_eq!(hp2_first_order(&a, plan).certified_total(), 0);
    }

    #[test]
    fn coboundaries_are_cocycles_and_gauge_invariant() {
        let (plan, a) = windowed_algebra(&cyclic(3), 6).unwrap();
        let m = -4;
        let mut f = std::collections::BTreeMap::new();
        // f(b_u) = Σ b_t with small integer weights
        for u in 0..a.len() {
            let d = a.degree(u) as i64 + m;
            if a.degree(u) <= plan.window && d >= 0 {
                let v: SVec = a
                    .range(d as usize)
                    .map(|t| (t, rat_int(((u + t) % 3) as i64 - 1)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                f.insert(u, v);
            }
        }
        let b = coboundary(&a, m, plan.window, &f);
        assert!(!b.is_zero());
        check_cocycle(&a, &b).unwrap();
        let reps = hp2_degree(&a, m, plan.window);
        assert_eq!(reps.len(), 1);
        let shifted = add_pairs(&reps[0], &b);
        check_cocycle(&a, &shifted).unwrap();
        assert_eq!(
            class_normal_form(&a, &shifted).unwrap(),
            class_normal_form(&a, &reps[0]).unwrap()
        );
    }

    #[test]
    fn mc_order_two() {
        let (plan, a) = windowed_algebra(&cyclic(2), 8).unwrap();
        let zero = CochainPair {
            m: -4,
            window: plan.window,
            bracket_shift: 2,
            phi: Default::default(),
            psi: Default::default(),
        };
        assert!(mc_extend(&a, &zero).unwrap().is_zero());
        for g in hp2_degree(&a, -4, plan.window) {
            mc_extend(&a, &g).unwrap();
        }
        // a non-cocycle is rejected
        let mut bad = zero.clone();
        let top = a.range(4).start;
        bad.phi.insert((top, top), vec![(top, rat_int(1))]);
        assert!(matches!(
            mc_extend(&a, &bad),
            Err(DeformError::InvalidCocycle { .. })
        ));
    }
}
