//! Built-in groups: cyclic and binary dihedral subgroups of SL(2), Weyl groups
//! acting on h ⊗ ℂ², symmetric groups, and root-system metadata.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::exactlin::{CycloNum, Mat, Rat, SympSpace};
use crate::groups::{GroupError, MatrixGroup};
use crate::poisson::power_series_inverse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub family: RootType,
    pub rank: usize,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl CartanType {
    pub fn new(family: RootType, rank: usize) -> Result<CartanType, GroupError> {
        let ok = match family {
            RootType::A => rank >= 1,
            RootType::B => rank >= 2,
            RootType::C => rank >= 3,
            RootType::D => rank >= 4,
            RootType::E => (6..=8).contains(&rank),
            RootType::F => rank == 4,
            RootType::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(GroupError::Spec(format!("no root system {family:?}{rank}")))
        }
    }

    /// Parses labels such as `A2`, `e6`, `G2`.
    pub fn parse(s: &str) -> Result<CartanType, GroupError> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => RootType::A,
            Some('B') => RootType::B,
            Some('C') => RootType::C,
            Some('D') => RootType::D,
            Some('E') => RootType::E,
            Some('F') => RootType::F,
            Some('G') => RootType::G,
            _ => return Err(GroupError::Spec(format!("bad root system label {s:?}"))),
        };
        let rank = chars
            .as_str()
            .parse()
            .map_err(|_| GroupError::Spec(format!("bad rank in {s:?}")))?;
        CartanType::new(family, rank)
    }

    pub fn simply_laced(&self) -> bool {
        matches!(self.family, RootType::A | RootType::D | RootType::E)
    }

    /// Cartan matrix a_ij = ⟨α_i^∨, α_j⟩, Bourbaki numbering.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            RootType::A | RootType::B | RootType::C | RootType::F => {
                for i in 0..n - 1 {
                    link(i, i + 1);
                }
            }
            RootType::D => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 3, n - 1);
            }
            RootType::E => {
                link(0, 2);
                link(1, 3);
                for i in 2..n - 1 {
                    link(i, i + 1);
                }
            }
            RootType::G => link(0, 1),
        }
        match self.family {
            RootType::B => a[n - 1][n - 2] = -2,
            RootType::C => a[n - 2][n - 1] = -2,
            RootType::F => a[2][1] = -2,
            RootType::G => a[0][1] = -3,
            _ => {}
        }
        a
    }

    /// Gram matrix of the simple roots: the Cartan matrix symmetrised to integers.
    pub fn gram_matrix(&self) -> Vec<Vec<i64>> {
        let a = self.cartan_matrix();
        let n = self.rank;
        // d_i = (α_i, α_i)/2 with d_i a_ij = d_j a_ji, propagated along the diagram
        let mut d: Vec<Option<Rat>> = vec![None; n];
        d[0] = Some(Rat::from_integer(1.into()));
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if a[i][j] != 0 && d[j].is_none() {
                    let di = d[i].clone().unwrap();
                    d[j] = Some(di * Rat::new(a[i][j].into(), a[j][i].into()));
                    queue.push_back(j);
                }
            }
        }
        let d: Vec<Rat> = d.into_iter().map(Option::unwrap).collect();
        let l = d.iter().fold(num_bigint::BigInt::from(1), |acc, x| {
            num_integer::lcm(acc, x.denom().clone())
        });
        let scale = Rat::from_integer(l);
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = &d[i] * &scale * Rat::from_integer(a[i][j].into());
                        i64::try_from(v.to_integer()).unwrap()
                    })
                    .collect()
            })
            .collect()
    }

    /// Simple reflections on h in the root basis: s_i changes only coordinate i.
    pub fn simple_reflections(&self) -> Vec<Vec<Vec<i64>>> {
        let a = self.cartan_matrix();
        let n = self.rank;
        (0..n)
            .map(|i| {
                let mut s: Vec<Vec<i64>> = (0..n)
                    .map(|r| (0..n).map(|c| (r == c) as i64).collect())
                    .collect();
                for j in 0..n {
                    // coordinate i of s_i(v) is v_i - Σ_j ⟨α_i^∨, α_j⟩ v_j
                    s[i][j] -= a[i][j];
                }
                s
            })
            .collect()
    }

    /// |W| by orbit–stabiliser on fundamental weights, without enumerating W.
    pub fn weyl_order(&self) -> u128 {
        weyl_order_of(&self.cartan_matrix(), &(0..self.rank).collect::<Vec<_>>())
    }

    pub fn resolution_exists(&self) -> ResolutionVerdict {
        let exists = matches!(self.family, RootType::A | RootType::B | RootType::C);
        let note = if exists {
            "h ⊕ h*/W admits a symplectic resolution (Hilbert scheme of points type)"
        } else {
            "h ⊕ h*/W admits no symplectic resolution for types D, E, F, G"
        };
        ResolutionVerdict {
            exists,
            note: note.to_string(),
        }
    }

    /// Number of conjugacy classes of reflections: one per root length.
    pub fn expected_reflection_classes(&self) -> usize {
        if self.simply_laced() {
            1
        } else {
            2
        }
    }
}

fn weyl_order_of(cartan: &[Vec<i64>], nodes: &[usize]) -> u128 {
    if nodes.is_empty() {
        return 1;
    }
    // stabiliser of ω_i is the parabolic subgroup on the remaining nodes;
    // pick the node with the smallest orbit, abandoning larger searches early
    let mut best: Option<(usize, usize)> = None;
    for &i in nodes {
        let limit = best.map_or(usize::MAX, |b| b.1);
        if let Some(size) = weight_orbit_size(cartan, nodes, i, limit) {
            best = Some((i, size));
        }
    }
    let (node, size) = best.unwrap();
    let rest: Vec<usize> = nodes.iter().copied().filter(|&j| j != node).collect();
    size as u128 * weyl_order_of(cartan, &rest)
}

/// Orbit size of ω_i under the parabolic subgroup on `nodes`, or `None` once it reaches `limit`.
fn weight_orbit_size(
    cartan: &[Vec<i64>],
    nodes: &[usize],
    i: usize,
    limit: usize,
) -> Option<usize> {
    let n = cartan.len();
    let mut start = vec![0i64; n];
    start[i] = 1;
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for &k in nodes {
            if w[k] == 0 {
                continue;
            }
            // s_k(λ) = λ − λ_k α_k, α_k in the weight basis is row k of the Cartan matrix
            let img: Vec<i64> = (0..n).map(|j| w[j] - w[k] * cartan[k][j]).collect();
            if seen.insert(img.clone()) {
                if seen.len() >= limit {
                    return None;
                }
                queue.push_back(img);
            }
        }
    }
    Some(seen.len())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolutionVerdict {
    pub exists: bool,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSystemInfo {
    pub label: String,
    pub cartan: Vec<Vec<i64>>,
    pub simple_root_gram: Vec<Vec<i64>>,
    pub weyl_order: u128,
    /// `None` when W exceeds the enumeration cap.
    pub exponents: Option<Vec<usize>>,
    pub resolution_exists: bool,
    pub resolution_note: String,
    pub expected_reflection_classes: usize,
}

/// V = h ⊗ ℂ² with ω = (Gram form on h) ⊗ (area form), W acting on the first factor.
fn doubled(
    reflections: &[Vec<Vec<i64>>],
    gram: &[Vec<i64>],
    cap: usize,
) -> Result<MatrixGroup, GroupError> {
    let r = gram.len();
    let mut form = Mat::zeros(2 * r, 2 * r);
    for i in 0..r {
        for j in 0..r {
            form.set(i, r + j, CycloNum::from_int(gram[i][j]));
            form.set(r + i, j, CycloNum::from_int(-gram[i][j]));
        }
    }
    let space = SympSpace::new(form).map_err(|e| GroupError::Spec(e.to_string()))?;
    let gens: Vec<Mat> = reflections
        .iter()
        .map(|s| {
            let mut m = Mat::zeros(2 * r, 2 * r);
            for i in 0..r {
                for j in 0..r {
                    m.set(i, j, CycloNum::from_int(s[i][j]));
                    m.set(r + i, r + j, CycloNum::from_int(s[i][j]));
                }
            }
            m
        })
        .collect();
    MatrixGroup::generate(&gens, space, cap)
}

/// W acting diagonally on h ⊕ h ≅ h ⊗ ℂ².
pub fn weyl_group(t: CartanType, cap: usize) -> Result<MatrixGroup, GroupError> {
    if t.weyl_order() > cap as u128 {
        return Err(GroupError::CapExceeded { cap });
    }
    doubled(&t.simple_reflections(), &t.gram_matrix(), cap)
}

/// S_n on its reflection representation h = {Σx_i = 0}, doubled (same as W(A_{n−1})).
pub fn symmetric_group(n: usize, cap: usize) -> Result<MatrixGroup, GroupError> {
    if n < 2 {
        return Err(GroupError::Spec("symmetric:n needs n >= 2".into()));
    }
    weyl_group(CartanType::new(RootType::A, n - 1)?, cap)
}

/// S_n permuting coordinates of ℂⁿ, doubled to ℂⁿ ⊗ ℂ².
pub fn permutation_group(n: usize, cap: usize) -> Result<MatrixGroup, GroupError> {
    if n < 1 {
        return Err(GroupError::Spec("permutation:n needs n >= 1".into()));
    }
    let ident: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect();
    let gens: Vec<Vec<Vec<i64>>> = (0..n.saturating_sub(1))
        .map(|i| {
            let mut p = ident.clone();
            p.swap(i, i + 1);
            p
        })
        .collect();
    doubled(&gens, &ident, cap)
}

/// Trivial group on ℂ^{2k}.
pub fn trivial_group(k: usize) -> Result<MatrixGroup, GroupError> {
    MatrixGroup::generate(&[], SympSpace::standard(k), 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Kind {
    Cyclic,
    BinaryDihedral,
}

/// Cyclic ⟨diag(ζ_n, ζ_n⁻¹)⟩, or binary dihedral: cyclic of order 2n plus [[0,1],[−1,0]].
pub fn sl2_subgroup(kind: Sl2Kind, n: u32, cap: usize) -> Result<MatrixGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::Spec("order parameter must be positive".into()));
    }
    let rot = |m: u32| {
        Mat::diag(vec![
            CycloNum::root_of_unity(m, 1),
            CycloNum::root_of_unity(m, -1),
        ])
    };
    let gens = match kind {
        Sl2Kind::Cyclic => vec![rot(n)],
        Sl2Kind::BinaryDihedral => vec![rot(2 * n), Mat::from_ints(&[&[0, 1], &[-1, 0]])],
    };
    MatrixGroup::generate(&gens, SympSpace::standard(1), cap)
}

/// Restriction of the action to the first half h of V = h ⊕ h.
fn h_block(m: &Mat) -> Mat {
    let r = m.rows() / 2;
    let mut out = Mat::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    out
}

/// Molien series of W on h, via class representatives, up to degree `max_deg`.
pub fn molien_on_h(w: &MatrixGroup, max_deg: usize) -> Vec<Rat> {
    let mut acc = vec![CycloNum::from_int(0); max_deg + 1];
    for class in w.classes() {
        let g = h_block(&w.element(class.representative));
        let det = det_one_minus_tg(&g);
        let series = power_series_inverse(&det, max_deg);
        let size = CycloNum::from_int(class.size as i64);
        for (a, s) in acc.iter_mut().zip(series) {
            *a = &*a + &(&size * &s);
        }
    }
    let order = CycloNum::from_int(w.order() as i64).inverse().unwrap();
    acc.into_iter()
        .map(|c| {
            (&c * &order)
                .as_rational()
                .cloned()
                .expect("Molien coefficients are rational")
        })
        .collect()
}

/// Coefficients of det(1 − t·g), constant term first.
pub fn det_one_minus_tg(g: &Mat) -> Vec<CycloNum> {
    // det(1 − t g) = t^n · charpoly(1/t): reverse the characteristic polynomial
    let mut cp = g.charpoly();
    cp.reverse();
    cp
}

/// Factors a series of the form Π 1/(1 − t^{d_i}) and returns the sorted d_i.
pub fn factor_degrees(series: &[Rat], expected_count: usize) -> Option<Vec<usize>> {
    let mut f: Vec<Rat> = series.to_vec();
    let one = Rat::from_integer(1.into());
    if f.first() != Some(&one) {
        return None;
    }
    let mut degrees = vec![];
    while degrees.len() < expected_count {
        let k = (1..f.len()).find(|&k| f[k] != Rat::from_integer(0.into()))?;
        if !f[k].is_integer() || f[k] < Rat::from_integer(0.into()) {
            return None;
        }
        let mult: usize = f[k].to_integer().try_into().ok()?;
        for _ in 0..mult {
            degrees.push(k);
            // multiply by (1 − t^k)
            for j in (k..f.len()).rev() {
                let v = f[j - k].clone();
                f[j] -= v;
            }
        }
    }
    let rest_trivial = f.iter().skip(1).all(|c| *c == Rat::from_integer(0.into()));
    (degrees.len() == expected_count && rest_trivial).then_some(degrees)
}

/// Exponents m_i = d_i − 1 from the Molien series of W on h.
pub fn exponents(t: CartanType, cap: usize) -> Result<Vec<usize>, GroupError> {
    // |W| is known in closed form, so refuse before enumerating
    if t.weyl_order() > cap as u128 {
        return Err(GroupError::CapExceeded { cap });
    }
    let w = weyl_group(t, cap)?;
    Ok(exponents_of(&w, t.rank))
}

pub fn exponents_of(w: &MatrixGroup, rank: usize) -> Vec<usize> {
    // Σ m_i = number of reflections; series needed up to Σ d_i
    let reflections = w
        .classes()
        .iter()
        .filter(|c| {
            let g = h_block(&w.element(c.representative));
            (&g - &Mat::identity(rank)).rank() == 1
        })
        .map(|c| c.size)
        .sum::<usize>();
    let series = molien_on_h(w, reflections + rank);
    let degrees = factor_degrees(&series, rank).expect("Molien series of a Weyl group factors");
    degrees.into_iter().map(|d| d - 1).collect()
}

pub fn root_system_info(t: CartanType, cap: usize) -> RootSystemInfo {
    let verdict = t.resolution_exists();
    let exponents = exponents(t, cap).ok();
    RootSystemInfo {
        label: t.to_string(),
        cartan: t.cartan_matrix(),
        simple_root_gram: t.gram_matrix(),
        weyl_order: t.weyl_order(),
        exponents,
        resolution_exists: verdict.exists,
        resolution_note: verdict.note,
        expected_reflection_classes: t.expected_reflection_classes(),
    }
}

/// Irreducible types listed by `catalog list`.
pub fn catalog_types() -> Vec<CartanType> {
    use RootType::*;
    let mut v = vec![];
    for r in 1..=5 {
        v.push(CartanType { family: A, rank: r });
    }
    for r in 2..=4 {
        v.push(CartanType { family: B, rank: r });
    }
    v.push(CartanType { family: C, rank: 3 });
    v.push(CartanType { family: C, rank: 4 });
    v.push(CartanType { family: D, rank: 4 });
    v.push(CartanType { family: D, rank: 5 });
    for r in 6..=8 {
        v.push(CartanType { family: E, rank: r });
    }
    v.push(CartanType { family: F, rank: 4 });
    v.push(CartanType { family: G, rank: 2 });
    v
}

/// Named small groups used by the verification suites.
pub fn small_catalog() -> Vec<&'static str> {
    vec![
        "cyclic:1",
        "cyclic:2",
        "cyclic:3",
        "cyclic:4",
        "cyclic:5",
        "cyclic:6",
        "cyclic:7",
        "cyclic:8",
        "cyclic:9",
        "cyclic:10",
        "cyclic:11",
        "cyclic:12",
        "binary-dihedral:2",
        "binary-dihedral:3",
        "binary-dihedral:4",
        "binary-dihedral:5",
        "symmetric:2",
        "symmetric:3",
        "symmetric:4",
        "permutation:2",
        "permutation:3",
        "weyl:A1",
        "weyl:A2",
        "weyl:A3",
        "weyl:A4",
        "weyl:A5",
        "weyl:B2",
        "weyl:B3",
        "weyl:B4",
        "weyl:C3",
        "weyl:D4",
        "weyl:F4",
        "weyl:G2",
    ]
}

/// Counts elements with each value of rank(id − g), keyed by that rank.
pub fn codimension_profile(g: &MatrixGroup) -> HashMap<usize, usize> {
    let mut out = HashMap::new();
    for c in g.classes() {
        let r = (&g.element(c.representative) - &Mat::identity(g.dim())).rank();
        *out.entry(r).or_insert(0) += c.size;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::DEFAULT_CAP;

    #[test]
    fn gram_is_symmetric_and_positive_diagonal() {
        for t in catalog_types() {
            let g = t.gram_matrix();
            for i in 0..t.rank {
                assert!(g[i][i] > 0, "{t}");
                for j in 0..t.rank {
                    assert_eq!(g[i][j], g[j][i], "{t}");
                }
            }
        }
    }

    #[test]
    fn weyl_orders_from_orbits() {
        // oracle: standard orders
        let table: &[(&str, u128)] = &[
            ("A1", 2),
            ("A2", 6),
            ("A5", 720),
            ("B2", 8),
            ("B3", 48),
            ("B4", 384),
            ("C3", 48),
            ("D4", 192),
            ("E6", 51840),
            ("E7", 2903040),
            ("E8", 696729600),
            ("F4", 1152),
            ("G2", 12),
        ];
        for &(label, order) in table {
            assert_eq!(
                CartanType::parse(label).unwrap().weyl_order(),
                order,
                "{label}"
            );
        }
    }

    #[test]
    fn small_weyl_closures() {
        for (label, order) in [("A1", 2), ("B2", 8), ("G2", 12), ("A3", 24)] {
            let t = CartanType::parse(label).unwrap();
            let w = weyl_group(t, DEFAULT_CAP).unwrap();
            assert_eq!(w.order(), order, "{label}");
            assert_eq!(w.dim(), 2 * t.rank);
        }
        let b2 = weyl_group(CartanType::parse("B2").unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(b2.num_classes(), 5);
    }

    #[test]
    fn e8_is_over_the_default_cap() {
        let e8 = CartanType::parse("E8").unwrap();
        assert!(matches!(
            weyl_group(e8, DEFAULT_CAP),
            Err(GroupError::CapExceeded { .. })
        ));
    }

    #[test]
    fn sl2_examples() {
        let c4 = sl2_subgroup(Sl2Kind::Cyclic, 4, DEFAULT_CAP).unwrap();
        assert_eq!(c4.order(), 4);
        let q8 = sl2_subgroup(Sl2Kind::BinaryDihedral, 2, DEFAULT_CAP).unwrap();
        assert_eq!(q8.order(), 8);
        let c1 = sl2_subgroup(Sl2Kind::Cyclic, 1, DEFAULT_CAP).unwrap();
        assert_eq!(c1.order(), 1);
    }

    #[test]
    fn exponent_examples() {
        let ex = |s: &str| exponents(CartanType::parse(s).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(ex("A1"), vec![1]);
        assert_eq!(ex("A2"), vec![1, 2]);
        assert_eq!(ex("B2"), vec![1, 3]);
        assert_eq!(ex("G2"), vec![1, 5]);
    }

    #[test]
    fn factor_degrees_rejects_non_products() {
        let r = |v: &[i64]| {
            v.iter()
                .map(|&x| Rat::from_integer(x.into()))
                .collect::<Vec<_>>()
        };
        // 1/((1-t)(1-t^2)) = 1 + t + 2t^2 + 2t^3 + 3t^4
        assert_eq!(factor_degrees(&r(&[1, 1, 2, 2, 3]), 2), Some(vec![1, 2]));
        assert_eq!(factor_degrees(&r(&[1, 0, -1, 0, 0]), 1), None);
    }

    #[test]
    fn resolution_lookup() {
        assert!(CartanType::parse("A3").unwrap().resolution_exists().exists);
        assert!(!CartanType::parse("G2").unwrap().resolution_exists().exists);
        assert!(!CartanType::parse("D4").unwrap().resolution_exists().exists);
        assert!(CartanType::parse("C3").unwrap().resolution_exists().exists);
    }
}
