#![allow(clippy::needless_range_loop)]

use mckaykit::catalog::{sl2_subgroup, Sl2Kind};
use mckaykit::exactlin::field::rat_int;
use mckaykit::exactlin::linalg::SparseEchelon;
use mckaykit::exactlin::{CycloNum, Mat, Rat};
use mckaykit::groups::DEFAULT_CAP;
use mckaykit::mckay;
use proptest::prelude::*;

const CONDUCTORS: [u32; 6] = [1, 3, 4, 5, 8, 12];

fn cyclo() -> impl Strategy<Value = CycloNum> {
    (0..CONDUCTORS.len(), prop::collection::vec(-4i64..=4, 12)).prop_map(|(i, c)| {
        let n = CONDUCTORS[i];
        let coeffs: Vec<Rat> = c.into_iter().take(n as usize).map(rat_int).collect();
        CycloNum::from_powers(n, &coeffs)
    })
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| {
        // small entries and a bias towards zero make rank deficiency common
        prop::collection::vec(
            prop::collection::vec(prop_oneof![Just(0i64), -2i64..=2], c),
            r,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in cyclo(), b in cyclo(), c in cyclo()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert!((&a * &inv).is_one());
        }
    }

    #[test]
    fn rank_nullity(rows in int_matrix(), z in cyclo()) {
        let r = rows.len();
        let c = rows[0].len();
        // twist one row by a cyclotomic scalar so the field is not just ℚ
        let mut m = Mat::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                let x = CycloNum::from_int(rows[i][j]);
                m.set(i, j, if i == 0 && !z.is_zero() { &x * &z } else { x });
            }
        }
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.len(), c);
        for v in &ker {
            prop_assert!(m.apply(v).iter().all(CycloNum::is_zero));
        }
        // sparse elimination over ℚ agrees with the dense rank
        let mut ech = SparseEchelon::<Rat>::new();
        for row in &rows {
            ech.insert(row.iter().enumerate().filter(|(_, x)| **x != 0).map(|(k, x)| (k, rat_int(*x))).collect());
        }
        let q = Mat::from_rows(rows.iter().map(|row| row.iter().map(|&x| CycloNum::from_int(x)).collect()).collect());
        prop_assert_eq!(ech.rank(), q.rank());
    }

    #[test]
    fn cyclic_groups(n in 1u32..=12) {
        let g = sl2_subgroup(Sl2Kind::Cyclic, n, DEFAULT_CAP).unwrap();
        prop_assert_eq!(g.order(), n as usize);
        prop_assert_eq!(g.num_classes(), n as usize);
        prop_assert_eq!(mckay::symplectic_reflections(&g).count, n as usize - 1);
    }
}
