//! Rank filtration on the class algebra: gr^F Z(G), orbifold Poincaré
//! polynomial, Rees structure constants, and the fixed-space lemma check.

use rayon::prelude::*;
use serde::Serialize;

use crate::exactlin::{fixed_space, CycloNum, Mat};
use crate::groups::MatrixGroup;

/// rank(id − g).
pub fn reflection_rank(g: &Mat) -> usize {
    (&Mat::identity(g.rows()) - g).rank()
}

/// rank(id − g) for each class representative.
pub fn class_ranks(g: &MatrixGroup) -> Vec<usize> {
    g.classes()
        .par_iter()
        .map(|c| reflection_rank(&g.element(c.representative)))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticReflections {
    pub classes: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// Number of conjugacy classes of symplectic reflections.
    pub count: usize,
}

pub fn symplectic_reflections(g: &MatrixGroup) -> SymplecticReflections {
    let ranks = class_ranks(g);
    let classes: Vec<usize> = (0..ranks.len()).filter(|&c| ranks[c] == 2).collect();
    SymplecticReflections {
        class_sizes: classes.iter().map(|&c| g.classes()[c].size).collect(),
        count: classes.len(),
        classes,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: u64,
}

/// gr^F Z(G) on the basis of class sums [C_i] of degree rank(id − g).
#[derive(Clone, Debug, Serialize)]
pub struct GradedCenter {
    pub degrees: Vec<usize>,
    pub class_sizes: Vec<usize>,
    /// Nonzero c̄_{ij}^k; only entries with deg k = deg i + deg j.
    pub constants: Vec<StructureConstant>,
    /// Dimension of each graded piece, indexed by degree.
    pub poincare: Vec<usize>,
}

fn poincare_of(degrees: &[usize]) -> Vec<usize> {
    let top = degrees.iter().copied().max().unwrap_or(0);
    let mut p = vec![0; top + 1];
    for &d in degrees {
        p[d] += 1;
    }
    p
}

pub fn gr_center(g: &MatrixGroup) -> GradedCenter {
    gr_center_from(g, &class_ranks(g), &g.class_structure_constants())
}

fn gr_center_from(g: &MatrixGroup, degrees: &[usize], full: &[Vec<Vec<u64>>]) -> GradedCenter {
    let nc = degrees.len();
    let mut constants = vec![];
    for i in 0..nc {
        for j in 0..nc {
            for k in 0..nc {
                let c = full[i][j][k];
                if c != 0 && degrees[k] == degrees[i] + degrees[j] {
                    constants.push(StructureConstant { i, j, k, c });
                }
            }
        }
    }
    GradedCenter {
        degrees: degrees.to_vec(),
        class_sizes: g.classes().iter().map(|c| c.size).collect(),
        constants,
        poincare: poincare_of(degrees),
    }
}

impl GradedCenter {
    pub fn dense(&self) -> Vec<Vec<Vec<u64>>> {
        let nc = self.degrees.len();
        let mut t = vec![vec![vec![0; nc]; nc]; nc];
        for s in &self.constants {
            t[s.i][s.j][s.k] = s.c;
        }
        t
    }

    /// Commutative, associative, graded, unital, even degrees with 0 only at the unit.
    pub fn check_axioms(&self) -> Result<(), String> {
        let nc = self.degrees.len();
        let t = self.dense();
        if self.degrees.iter().any(|d| d % 2 == 1) {
            return Err("odd filtration degree".into());
        }
        let zeros: Vec<usize> = (0..nc).filter(|&i| self.degrees[i] == 0).collect();
        if zeros.len() != 1 {
            return Err(format!("{} classes of degree 0", zeros.len()));
        }
        let e = zeros[0];
        for s in &self.constants {
            if self.degrees[s.k] != self.degrees[s.i] + self.degrees[s.j] {
                return Err(format!("ungraded constant {s:?}"));
            }
        }
        for i in 0..nc {
            for k in 0..nc {
                let want = u64::from(i == k);
                if t[e][i][k] != want || t[i][e][k] != want {
                    return Err(format!("class {e} is not a unit on class {i}"));
                }
            }
            for j in 0..nc {
                if t[i][j] != t[j][i] {
                    return Err(format!("not commutative at ({i},{j})"));
                }
            }
        }
        for i in 0..nc {
            for j in 0..nc {
                for k in 0..nc {
                    for l in 0..nc {
                        let lhs: u64 = (0..nc).map(|m| t[i][j][m] * t[m][k][l]).sum();
                        let rhs: u64 = (0..nc).map(|m| t[j][k][m] * t[i][m][l]).sum();
                        if lhs != rhs {
                            return Err(format!("not associative at ({i},{j},{k}) -> {l}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Σ over classes of t^{rank(id − g)}, as a coefficient vector.
pub fn orbifold_poincare(g: &MatrixGroup) -> Vec<usize> {
    poincare_of(&class_ranks(g))
}

/// Betti numbers b_0..b_{dim V} of a symplectic resolution, read off gr^F Z(G).
pub fn betti_of_resolution(g: &MatrixGroup) -> Vec<usize> {
    let mut b = vec![0; g.dim() + 1];
    for (d, n) in gr_center(g).poincare.into_iter().enumerate() {
        b[d] = n;
    }
    b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReesConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: u64,
    pub u: usize,
}

/// C_i · C_j = Σ_k c_{ij}^k u^{deg i + deg j − deg k} C_k.
#[derive(Clone, Debug, Serialize)]
pub struct ReesData {
    pub degrees: Vec<usize>,
    pub constants: Vec<ReesConstant>,
}

pub fn rees_center(g: &MatrixGroup) -> ReesData {
    let degrees = class_ranks(g);
    let full = g.class_structure_constants();
    let nc = degrees.len();
    let mut constants = vec![];
    for i in 0..nc {
        for j in 0..nc {
            for k in 0..nc {
                let c = full[i][j][k];
                if c != 0 {
                    let u = (degrees[i] + degrees[j])
                        .checked_sub(degrees[k])
                        .expect("rank filtration is multiplicative");
                    constants.push(ReesConstant { i, j, k, c, u });
                }
            }
        }
    }
    ReesData { degrees, constants }
}

impl ReesData {
    /// Dense constants after setting u = 0 (gr) or u = 1 (Z G).
    pub fn specialize(&self, u_is_zero: bool) -> Vec<Vec<Vec<u64>>> {
        let nc = self.degrees.len();
        let mut t = vec![vec![vec![0; nc]; nc]; nc];
        for s in &self.constants {
            if !u_is_zero || s.u == 0 {
                t[s.i][s.j][s.k] = s.c;
            }
        }
        t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub pass: bool,
    /// Ordered pairs (g, h) examined.
    pub pairs_checked: usize,
    /// Pairs with V^g + V^h = V.
    pub pairs_in_scope: usize,
    /// Element indices of the first failing pair.
    pub counterexample: Option<(usize, usize)>,
}

struct Fixed {
    basis: Vec<Vec<CycloNum>>,
}

/// Checks V^{gh} = V^g ∩ V^h whenever V^g + V^h = V.
///
/// The statement is invariant under simultaneous conjugation, so by default g
/// runs over class representatives and h over all of G; `exhaustive` scans all
/// |G|² pairs instead.
pub fn check_lemma_easy(g: &MatrixGroup, exhaustive: bool) -> LemmaReport {
    let n = g.dim();
    let mats: Vec<Mat> = g.elements().collect();
    let fixed: Vec<Fixed> = mats
        .par_iter()
        .map(|m| Fixed {
            basis: fixed_space(m),
        })
        .collect();
    let firsts: Vec<usize> = if exhaustive {
        (0..g.order()).collect()
    } else {
        g.classes().iter().map(|c| c.representative).collect()
    };
    // (pairs checked, pairs in scope, first counterexample) per first element
    type Tally = (usize, usize, Option<(usize, usize)>);
    let results: Vec<Tally> = firsts
        .par_iter()
        .map(|&a| {
            let mut checked = 0;
            let mut in_scope = 0;
            for b in 0..g.order() {
                checked += 1;
                let (fa, fb) = (&fixed[a].basis, &fixed[b].basis);
                // V^a ∩ V^b = {x ∈ V^a : (b − 1)x = 0}
                let cols: Vec<Vec<CycloNum>> = fa.iter().map(|v| mats[b].apply(v)).collect();
                let diff = Mat::from_columns(
                    n,
                    &cols
                        .iter()
                        .zip(fa)
                        .map(|(bv, v)| bv.iter().zip(v).map(|(x, y)| x - y).collect())
                        .collect::<Vec<_>>(),
                );
                let inter_dim = fa.len() - if fa.is_empty() { 0 } else { diff.rank() };
                if fa.len() + fb.len() - inter_dim != n {
                    continue;
                }
                in_scope += 1;
                let ab = g.mul(a, b);
                let ok = fixed[ab].basis.len() == inter_dim && {
                    // the intersection is fixed by ab
                    let coeffs = if fa.is_empty() {
                        vec![]
                    } else {
                        diff.kernel_basis()
                    };
                    coeffs.iter().all(|c| {
                        let x: Vec<CycloNum> = (0..n)
                            .map(|r| {
                                fa.iter()
                                    .zip(c)
                                    .fold(CycloNum::from_int(0), |acc, (v, w)| &acc + &(&v[r] * w))
                            })
                            .collect();
                        mats[ab].apply(&x) == x
                    })
                };
                if !ok {
                    return (checked, in_scope, Some((a, b)));
                }
            }
            (checked, in_scope, None)
        })
        .collect();
    LemmaReport {
        pass: results.iter().all(|r| r.2.is_none()),
        pairs_checked: results.iter().map(|r| r.0).sum(),
        pairs_in_scope: results.iter().map(|r| r.1).sum(),
        counterexample: results.iter().find_map(|r| r.2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{sl2_subgroup, symmetric_group, Sl2Kind};
    use crate::groups::DEFAULT_CAP;

    #[test]
    fn z2_graded_center() {
        let g = sl2_subgroup(Sl2Kind::Cyclic, 2, DEFAULT_CAP).unwrap();
        let gc = gr_center(&g);
        assert_eq!(gc.poincare, vec![1, 0, 1]);
        // [-1]·[-1] lands in degree 0, so it vanishes in gr
        assert_eq!(gc.constants.len(), 3);
        gc.check_axioms().unwrap();
        let (e, m) = (g.class_of(g.identity()), 1 - g.class_of(g.identity()));
        let rees = rees_center(&g);
        assert!(rees.constants.contains(&ReesConstant {
            i: m,
            j: m,
            k: e,
            c: 1,
            u: 4
        }));
    }

    #[test]
    fn s3_graded_center() {
        let g = symmetric_group(3, DEFAULT_CAP).unwrap();
        let gc = gr_center(&g);
        assert_eq!(gc.poincare, vec![1, 0, 1, 0, 1]);
        let t = gc.degrees.iter().position(|&d| d == 2).unwrap();
        let r = gc.degrees.iter().position(|&d| d == 4).unwrap();
        assert_eq!(gc.dense()[t][t][r], 3);
        assert_eq!(orbifold_poincare(&g), gc.poincare);
        assert_eq!(symplectic_reflections(&g).count, 1);
        assert!(check_lemma_easy(&g, true).pass);
    }
}
