use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{DeformError, SVec};
use crate::exactlin::linalg::SparseEchelon;
use crate::exactlin::{CycloNum, Rat};
use crate::groups::MatrixGroup;
use crate::poisson::{bracket, invariant_pieces, Bivector, InvariantPiece, Monomial, Poly};

/// Graded Poisson algebra A_0 ⊕ … ⊕ A_D with the bracket lowering degree by l.
///
/// Products are tabulated while the output stays within degree D. Brackets are
/// tabulated for every pair of basis elements: `None` marks a nonzero bracket
/// of degree > D.
#[derive(Clone, Debug)]
pub struct TruncatedGradedAlgebra {
    max_degree: usize,
    bracket_shift: usize,
    offsets: Vec<usize>,
    degree_of: Vec<usize>,
    basis: Vec<Poly>,
    mult: Vec<Option<SVec>>,
    br: Vec<Option<SVec>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraSummary {
    pub max_degree: usize,
    pub bracket_shift: usize,
    pub dims: Vec<usize>,
    pub generator_degrees: Vec<usize>,
}

fn to_rat(c: &CycloNum) -> Result<Rat, DeformError> {
    c.as_rational().cloned().ok_or(DeformError::NotRational)
}

impl TruncatedGradedAlgebra {
    /// ℂ[V]^G up to degree `d` with the bracket induced by the group's form.
    pub fn from_group(g: &MatrixGroup, d: usize) -> Result<Self, DeformError> {
        let theta = Bivector::symplectic(g.space().form());
        Self::from_pieces(invariant_pieces(g, d as u32), &theta)
    }

    /// The full polynomial ring ℂ[x_1..x_n] up to degree `d` with bracket θ.
    pub fn polynomial_ring(theta: &Bivector, d: usize) -> Result<Self, DeformError> {
        let n = theta.nvars();
        let pieces = (0..=d as u32)
            .map(|k| {
                let mut mons = Monomial::of_degree(n, k);
                mons.reverse();
                InvariantPiece {
                    degree: k,
                    basis: mons
                        .iter()
                        .map(|m| Poly::term(m.clone(), CycloNum::from_int(1)))
                        .collect(),
                    pivots: mons,
                }
            })
            .collect();
        Self::from_pieces(pieces, theta)
    }

    /// Tables from graded bases; θ must have homogeneous coefficients of degree ≤ 2.
    pub fn from_pieces(pieces: Vec<InvariantPiece>, theta: &Bivector) -> Result<Self, DeformError> {
        let max_degree = pieces.len() - 1;
        let theta_deg = theta.entries().next().map_or(Some(0), |(_, p)| p.degree());
        let homogeneous = theta
            .entries()
            .all(|(_, p)| p.is_homogeneous() && p.degree() == theta_deg);
        let bracket_shift = match theta_deg {
            Some(e) if homogeneous && e <= 2 => 2 - e as usize,
            _ => return Err(DeformError::InhomogeneousBracket),
        };
        let mut offsets = vec![0];
        let mut degree_of = vec![];
        let mut basis = vec![];
        for p in &pieces {
            degree_of.extend(std::iter::repeat_n(p.degree as usize, p.dim()));
            basis.extend(p.basis.iter().cloned());
            offsets.push(basis.len());
        }
        let n = basis.len();
        let coords = |f: &Poly, d: usize| -> Result<SVec, DeformError> {
            let c = pieces[d].coords(f).ok_or(DeformError::NotClosed)?;
            let mut v = vec![];
            for (k, x) in c.iter().enumerate() {
                let r = to_rat(x)?;
                if !r.is_zero() {
                    v.push((offsets[d] + k, r));
                }
            }
            Ok(v)
        };
        let cells: Vec<(Option<SVec>, Option<SVec>)> = (0..n * n)
            .into_par_iter()
            .map(|ij| {
                let (i, j) = (ij / n, ij % n);
                if i > j {
                    return Ok((None, None));
                }
                let s = degree_of[i] + degree_of[j];
                let m = if s <= max_degree {
                    Some(coords(&(&basis[i] * &basis[j]), s)?)
                } else {
                    None
                };
                let b = bracket(&basis[i], &basis[j], theta);
                let bv = if b.is_zero() {
                    Some(vec![])
                } else {
                    // nonzero brackets have degree s − l ≥ 0
                    let t = s + theta_deg.unwrap_or(0) as usize - 2;
                    if t <= max_degree {
                        Some(coords(&b, t)?)
                    } else {
                        None
                    }
                };
                Ok((m, bv))
            })
            .collect::<Result<_, DeformError>>()?;
        let mut mult = vec![None; n * n];
        let mut br = vec![None; n * n];
        for i in 0..n {
            for j in i..n {
                let (m, b) = &cells[i * n + j];
                mult[i * n + j] = m.clone();
                mult[j * n + i] = m.clone();
                br[i * n + j] = b.clone();
                br[j * n + i] = b
                    .as_ref()
                    .map(|v| v.iter().map(|(k, x)| (*k, -x)).collect());
            }
        }
        Ok(TruncatedGradedAlgebra {
            max_degree,
            bracket_shift,
            offsets,
            degree_of,
            basis,
            mult,
            br,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn bracket_shift(&self) -> usize {
        self.bracket_shift
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dim(&self, d: usize) -> usize {
        self.offsets[d + 1] - self.offsets[d]
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|d| self.dim(d)).collect()
    }

    /// Global indices of the degree-d basis.
    pub fn range(&self, d: usize) -> std::ops::Range<usize> {
        self.offsets[d]..self.offsets[d + 1]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degree_of[i]
    }

    pub fn basis_poly(&self, i: usize) -> &Poly {
        &self.basis[i]
    }

    /// b_i · b_j, or `None` past the truncation.
    pub fn mul(&self, i: usize, j: usize) -> Option<&SVec> {
        self.mult[i * self.len() + j].as_ref()
    }

    /// {b_i, b_j}, or `None` if nonzero past the truncation.
    pub fn br(&self, i: usize, j: usize) -> Option<&SVec> {
        self.br[i * self.len() + j].as_ref()
    }

    /// Degrees of a minimal generating set (new generators per degree).
    pub fn generator_degrees(&self) -> Vec<usize> {
        let mut out = vec![];
        for d in 1..=self.max_degree {
            let mut ech = SparseEchelon::<Rat>::new();
            for e in 1..d {
                for i in self.range(e) {
                    for j in self.range(d - e) {
                        if let Some(v) = self.mul(i, j) {
                            ech.insert(v.clone());
                        }
                    }
                }
            }
            out.extend(std::iter::repeat_n(d, self.dim(d) - ech.rank()));
        }
        out
    }

    pub fn summary(&self) -> AlgebraSummary {
        AlgebraSummary {
            max_degree: self.max_degree,
            bracket_shift: self.bracket_shift,
            dims: self.dims(),
            generator_degrees: self.generator_degrees(),
        }
    }

    /// Associativity, Leibniz and Jacobi wherever every term is tabulated.
    pub fn audit(&self) -> Result<(), String> {
        let n = self.len();
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
            .collect();
        triples.par_iter().try_for_each(|&(a, b, c)| {
            let ex = |o: Option<SVec>| o;
            // (ab)c = a(bc)
            if let (Some(l), Some(r)) = (
                ex(self.mul(a, b).and_then(|ab| self.mul_vec_right(ab, c))),
                ex(self.mul(b, c).and_then(|bc| self.mul_vec_left(a, bc))),
            ) {
                if l != r {
                    return Err(format!("associativity fails on ({a},{b},{c})"));
                }
            }
            // {a, bc} = {a,b}c + b{a,c}
            let lhs = self.mul(b, c).and_then(|bc| self.br_vec_left(a, bc));
            let r1 = self.br(a, b).and_then(|ab| self.mul_vec_right(ab, c));
            let r2 = self.br(a, c).and_then(|ac| self.mul_vec_left(b, ac));
            if let (Some(l), Some(r1), Some(r2)) = (lhs, r1, r2) {
                if l != add(&r1, &r2) {
                    return Err(format!("Leibniz fails on ({a},{b},{c})"));
                }
            }
            // {a,{b,c}} + {b,{c,a}} + {c,{a,b}} = 0
            let t = [
                self.br(b, c).and_then(|v| self.br_vec_left(a, v)),
                self.br(c, a).and_then(|v| self.br_vec_left(b, v)),
                self.br(a, b).and_then(|v| self.br_vec_left(c, v)),
            ];
            if let [Some(x), Some(y), Some(z)] = t {
                if !add(&add(&x, &y), &z).is_empty() {
                    return Err(format!("Jacobi fails on ({a},{b},{c})"));
                }
            }
            Ok(())
        })
    }

    /// b_a · v.
    pub fn mul_vec_left(&self, a: usize, v: &SVec) -> Option<SVec> {
        let mut acc = BTreeMap::new();
        for (k, x) in v {
            accumulate(&mut acc, self.mul(a, *k)?, x);
        }
        Some(finish(acc))
    }

    /// v · b_c.
    pub fn mul_vec_right(&self, v: &SVec, c: usize) -> Option<SVec> {
        self.mul_vec_left(c, v)
    }

    /// {b_a, v}.
    pub fn br_vec_left(&self, a: usize, v: &SVec) -> Option<SVec> {
        let mut acc = BTreeMap::new();
        for (k, x) in v {
            accumulate(&mut acc, self.br(a, *k)?, x);
        }
        Some(finish(acc))
    }

    /// Poisson center in degrees d ≤ D − l: elements with {z, A_p} = 0 for all tabulated p.
    pub fn poisson_center_dims(&self) -> Vec<usize> {
        let top = self.max_degree.saturating_sub(self.bracket_shift);
        (0..=top)
            .map(|d| {
                // unknown coefficients on the degree-d basis; one row per output coordinate
                let mut rows: BTreeMap<(usize, usize), SVec> = BTreeMap::new();
                for (col, z) in self.range(d).enumerate() {
                    for p in 0..self.len() {
                        if let Some(v) = self.br(z, p) {
                            for (k, x) in v {
                                rows.entry((p, *k)).or_default().push((col, x.clone()));
                            }
                        }
                    }
                }
                let mut ech = SparseEchelon::<Rat>::new();
                for (_, r) in rows {
                    ech.insert(r);
                }
                self.dim(d) - ech.rank()
            })
            .collect()
    }
}

pub(crate) fn accumulate(acc: &mut BTreeMap<usize, Rat>, v: &SVec, c: &Rat) {
    for (k, x) in v {
        *acc.entry(*k).or_insert_with(Rat::zero) += x * c;
    }
}

pub(crate) fn finish(acc: BTreeMap<usize, Rat>) -> SVec {
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub(crate) fn add(a: &SVec, b: &SVec) -> SVec {
    let mut acc = BTreeMap::new();
    accumulate(&mut acc, a, &Rat::from_integer(1.into()));
    accumulate(&mut acc, b, &Rat::from_integer(1.into()));
    finish(acc)
}
