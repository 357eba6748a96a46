//! Graded pieces of ℂ[V]^G.
//!
//! Variables are split into blocks that every generator preserves (connected
//! components of the generators' support), so each generator preserves the
//! block multidegree. A degree-d piece is then the common kernel of (g − 1)
//! over generators, one multidegree at a time.

use std::collections::HashMap;

use serde::Serialize;

use super::poly::{Monomial, Poly};
use crate::exactlin::linalg::{sparse_kernel_with_free, SparseRow};
use crate::exactlin::{CycloNum, Mat};
use crate::groups::MatrixGroup;

/// Basis of (ℂ[V]^G)_d. Basis element k has coefficient 1 at `pivots[k]` and
/// 0 at every other pivot, so coordinates are read off at the pivots.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantPiece {
    pub degree: u32,
    pub basis: Vec<Poly>,
    pub pivots: Vec<Monomial>,
}

impl InvariantPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `f` in this basis, or `None` if `f` is not in the span.
    pub fn coords(&self, f: &Poly) -> Option<Vec<CycloNum>> {
        let c: Vec<CycloNum> = self.pivots.iter().map(|m| f.coeff(m)).collect();
        let mut r = f.clone();
        for (b, ck) in self.basis.iter().zip(&c) {
            r.add_scaled(b, &-ck);
        }
        r.is_zero().then_some(c)
    }
}

/// (1/|G|) Σ_g f∘g.
pub fn reynolds(g: &MatrixGroup, f: &Poly) -> Poly {
    let mut acc = Poly::zero(f.nvars());
    let one = CycloNum::from_int(1);
    for m in g.elements() {
        acc.add_scaled(&f.compose_linear(&m), &one);
    }
    acc.scale(&CycloNum::from_int(g.order() as i64).inverse().unwrap())
}

fn variable_blocks(gens: &[Mat], n: usize) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for g in gens {
        for i in 0..n {
            for j in 0..n {
                if i != j && !g.get(i, j).is_zero() {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = vec![];
    let mut root_index = HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        let k = *root_index.entry(r).or_insert_with(|| {
            blocks.push(vec![]);
            blocks.len() - 1
        });
        blocks[k].push(i);
    }
    blocks
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = vec![];
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Monomials of degree d supported on `block`.
fn block_monomials(n: usize, block: &[usize], d: u32) -> Vec<Monomial> {
    Monomial::of_degree(block.len(), d)
        .into_iter()
        .map(|m| {
            let mut e = vec![0; n];
            for (k, &v) in block.iter().enumerate() {
                e[v] = m.0[k];
            }
            Monomial(e)
        })
        .collect()
}

/// Graded pieces of ℂ[V]^G for degrees 0..=max_deg.
pub fn invariant_pieces(g: &MatrixGroup, max_deg: u32) -> Vec<InvariantPiece> {
    use rayon::prelude::*;
    (0..=max_deg)
        .into_par_iter()
        .map(|d| invariant_basis(g, d))
        .collect()
}

/// Basis of (ℂ[V]^G)_d.
pub fn invariant_basis(g: &MatrixGroup, d: u32) -> InvariantPiece {
    let n = g.dim();
    let gens: Vec<Mat> = g.generators().iter().map(|&i| g.element(i)).collect();
    let blocks = variable_blocks(&gens, n);
    let images: Vec<Vec<Poly>> = gens
        .iter()
        .map(|m| (0..n).map(|i| Poly::linear(&m.row(i))).collect())
        .collect();
    let mut basis = vec![];
    let mut pivots = vec![];
    for comp in compositions(d, blocks.len()) {
        // per block: monomials of the assigned degree and their images under each generator
        let per_block: Vec<Vec<Monomial>> = blocks
            .iter()
            .zip(&comp)
            .map(|(b, &k)| block_monomials(n, b, k))
            .collect();
        let mut cols: Vec<Monomial> = vec![Monomial::one(n)];
        for bm in &per_block {
            cols = cols
                .iter()
                .flat_map(|c| bm.iter().map(move |m| c.mul(m)))
                .collect();
        }
        cols.sort_by(|a, b| b.cmp(a));
        let col_of: HashMap<&Monomial, usize> =
            cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<SparseRow<CycloNum>> = vec![];
        for img in &images {
            let block_img: Vec<HashMap<Monomial, Poly>> = per_block
                .iter()
                .map(|bm| {
                    bm.iter()
                        .map(|m| {
                            (
                                m.clone(),
                                Poly::term(m.clone(), CycloNum::from_int(1)).substitute(img),
                            )
                        })
                        .collect()
                })
                .collect();
            // column images of (g − 1), transposed into row equations
            let mut eqs: HashMap<usize, Vec<(usize, CycloNum)>> = HashMap::new();
            for (ci, mono) in cols.iter().enumerate() {
                let mut prod = Poly::one(n);
                for (bi, block) in blocks.iter().enumerate() {
                    let mut part = vec![0; n];
                    for &v in block {
                        part[v] = mono.0[v];
                    }
                    prod = &prod * &block_img[bi][&Monomial(part)];
                }
                prod.add_term(mono.clone(), &CycloNum::from_int(-1));
                for (m, c) in prod.terms() {
                    let r = col_of[m];
                    eqs.entry(r).or_default().push((ci, c.clone()));
                }
            }
            let mut keys: Vec<usize> = eqs.keys().copied().collect();
            keys.sort_unstable();
            for k in keys {
                let mut row = eqs.remove(&k).unwrap();
                row.sort_by_key(|e| e.0);
                rows.push(row);
            }
        }
        for (free, v) in sparse_kernel_with_free(rows, cols.len()) {
            let p = Poly::from_terms(n, v.iter().map(|(i, c)| (cols[*i].clone(), c.clone())));
            pivots.push(cols[free].clone());
            basis.push(p);
        }
    }
    InvariantPiece {
        degree: d,
        basis,
        pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{sl2_subgroup, Sl2Kind};
    use crate::groups::DEFAULT_CAP;

    #[test]
    fn z2_degree_two() {
        let g = sl2_subgroup(Sl2Kind::Cyclic, 2, DEFAULT_CAP).unwrap();
        let p = invariant_basis(&g, 2);
        assert_eq!(p.dim(), 3);
        assert_eq!(invariant_basis(&g, 3).dim(), 0);
        assert_eq!(invariant_basis(&g, 0).dim(), 1);
        for b in &p.basis {
            assert_eq!(reynolds(&g, b), *b);
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(0, 3), vec![vec![0, 0, 0]]);
    }
}
