//! Finite subgroups of Sp(V) given by generating matrices.
//!
//! Elements are stored as permutations of a finite faithful point set: the
//! orbit of the standard basis vectors. Composition and hashing then cost
//! O(#points) machine-integer work instead of exact matrix products, and the
//! matrix of any element is recovered from the images of the basis points.

mod spec;

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::exactlin::{CycloNum, Mat, Rat, SympSpace};

pub use spec::{build_group, parse_group_spec, GroupSpec};

/// Default closure cap: large enough for W(E₇), excludes W(E₈).
pub const DEFAULT_CAP: usize = 3_000_000;

#[derive(Debug, thiserror::Error)]
pub enum GroupError {
    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("generator {index} does not preserve the symplectic form")]
    NotSymplectic { index: usize },
    #[error("generator {index} has the wrong shape or is singular")]
    BadGenerator { index: usize },
    #[error("invalid group spec: {0}")]
    Spec(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

type Perm = Box<[u32]>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub size: usize,
}

/// One value per conjugacy class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassFunction {
    pub values: Vec<CycloNum>,
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    space: SympSpace,
    conductor: u32,
    points: Vec<Vec<CycloNum>>,
    basis_points: Vec<u32>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
}

fn point_key(v: &[CycloNum], conductor: u32) -> Vec<Rat> {
    v.iter().flat_map(|x| x.coords_in(conductor)).collect()
}

fn compose(a: &[u32], b: &[u32]) -> Perm {
    // (a ∘ b)(p) = a(b(p))
    b.iter().map(|&p| a[p as usize]).collect()
}

fn invert(a: &[u32]) -> Perm {
    let mut out = vec![0u32; a.len()];
    for (i, &p) in a.iter().enumerate() {
        out[p as usize] = i as u32;
    }
    out.into_boxed_slice()
}

impl MatrixGroup {
    /// Closes the generators under multiplication.
    pub fn generate(gens: &[Mat], space: SympSpace, cap: usize) -> Result<MatrixGroup, GroupError> {
        let n = space.dim();
        for (index, g) in gens.iter().enumerate() {
            if !g.is_square() || g.rows() != n {
                return Err(GroupError::BadGenerator { index });
            }
            if !space.preserves(g) {
                return Err(GroupError::NotSymplectic { index });
            }
        }
        let conductor = gens.iter().map(Mat::conductor).fold(1, num_integer::lcm);

        // faithful point set: orbit of the basis vectors
        let mut points: Vec<Vec<CycloNum>> = vec![];
        let mut seen: HashMap<Vec<Rat>, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let e: Vec<CycloNum> = (0..n)
                .map(|j| CycloNum::from_int((i == j) as i64))
                .collect();
            if seen
                .insert(point_key(&e, conductor), points.len())
                .is_none()
            {
                queue.push_back(points.len());
                points.push(e);
            }
        }
        let point_cap = cap.saturating_mul(n.max(1));
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let img = g.apply(&points[p]);
                let key = point_key(&img, conductor);
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                    if points.len() >= point_cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    e.insert(points.len());
                    queue.push_back(points.len());
                    points.push(img);
                }
            }
        }
        // canonical point order
        let mut order: Vec<usize> = (0..points.len()).collect();
        let keys: Vec<Vec<Rat>> = points.iter().map(|p| point_key(p, conductor)).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut relabel = vec![0u32; points.len()];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new as u32;
        }
        let points: Vec<Vec<CycloNum>> = order.iter().map(|&i| points[i].clone()).collect();
        let lookup: HashMap<Vec<Rat>, u32> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (point_key(p, conductor), i as u32))
            .collect();
        let basis_points: Vec<u32> = (0..n).map(|i| relabel[i]).collect();

        let gen_perms: Vec<Perm> = gens
            .iter()
            .map(|g| {
                points
                    .iter()
                    .map(|p| lookup[&point_key(&g.apply(p), conductor)])
                    .collect()
            })
            .collect();

        // closure by left multiplication with generators
        let identity: Perm = (0..points.len() as u32).collect();
        let mut elems: Vec<Perm> = vec![identity.clone()];
        let mut idx: HashMap<Perm, usize> = HashMap::from([(identity, 0)]);
        let mut head = 0;
        while head < elems.len() {
            for s in &gen_perms {
                let y = compose(s, &elems[head]);
                if !idx.contains_key(&y) {
                    if elems.len() >= cap {
                        return Err(GroupError::CapExceeded { cap });
                    }
                    idx.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
            head += 1;
        }
        drop(idx);

        // canonical element order: images of the basis points, i.e. column-major entries
        elems.sort_by(|a, b| {
            basis_points
                .iter()
                .map(|&p| a[p as usize])
                .cmp(basis_points.iter().map(|&p| b[p as usize]))
        });
        let index: HashMap<Perm, usize> = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let generators = gen_perms.iter().map(|g| index[g]).collect();
        let inverses = elems.iter().map(|e| index[&invert(e)]).collect();

        let mut group = MatrixGroup {
            space,
            conductor,
            points,
            basis_points,
            elements: elems,
            index,
            generators,
            inverses,
            classes: vec![],
            class_of: vec![],
        };
        group.compute_classes();
        Ok(group)
    }

    fn compute_classes(&mut self) {
        let n = self.elements.len();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = vec![];
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = classes.len();
            class_of[start] = c;
            let mut members = vec![start];
            let mut head = 0;
            while head < members.len() {
                let x = members[head];
                for &s in &self.generators {
                    let y = self.conjugate(x, s);
                    if class_of[y] == usize::MAX {
                        class_of[y] = c;
                        members.push(y);
                    }
                }
                head += 1;
            }
            members.sort_unstable();
            classes.push(ConjClass {
                representative: start,
                size: members.len(),
                members,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    /// s·x·s⁻¹ by index.
    pub fn conjugate(&self, x: usize, s: usize) -> usize {
        let t = compose(&self.elements[s], &self.elements[x]);
        let u = compose(&t, &self.elements[self.inverses[s]]);
        self.index[&u]
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &SympSpace {
        &self.space
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn identity(&self) -> usize {
        let id: Perm = (0..self.points.len() as u32).collect();
        self.index[&id]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&compose(&self.elements[a], &self.elements[b])]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// Matrix of element `i`; columns are the images of the basis vectors.
    pub fn element(&self, i: usize) -> Mat {
        let perm = &self.elements[i];
        let cols: Vec<Vec<CycloNum>> = self
            .basis_points
            .iter()
            .map(|&p| self.points[perm[p as usize] as usize].clone())
            .collect();
        Mat::from_columns(self.dim(), &cols)
    }

    pub fn elements(&self) -> impl Iterator<Item = Mat> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let id = self.identity();
        let mut x = a;
        let mut k = 1;
        while x != id {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.class_of[element]
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Class containing the inverses of class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        self.class_of[self.inverses[self.classes[c].representative]]
    }

    /// Coefficients c_{ij}^k of C_i · C_j = Σ_k c_{ij}^k C_k in ℂ[G].
    pub fn class_sum_product(&self, i: usize, j: usize) -> Vec<u64> {
        (0..self.num_classes())
            .map(|k| {
                let z = self.classes[k].representative;
                self.classes[i]
                    .members
                    .iter()
                    .filter(|&&x| self.class_of[self.mul(self.inverses[x], z)] == j)
                    .count() as u64
            })
            .collect()
    }

    /// All structure constants, indexed `[i][j][k]`.
    pub fn class_structure_constants(&self) -> Vec<Vec<Vec<u64>>> {
        let nc = self.num_classes();
        let per_k: Vec<Vec<u64>> = (0..nc)
            .into_par_iter()
            .map(|k| {
                let z = self.classes[k].representative;
                let mut counts = vec![0u64; nc * nc];
                for x in 0..self.order() {
                    let y = self.mul(self.inverses[x], z);
                    counts[self.class_of[x] * nc + self.class_of[y]] += 1;
                }
                counts
            })
            .collect();
        (0..nc)
            .map(|i| {
                (0..nc)
                    .map(|j| (0..nc).map(|k| per_k[k][i * nc + j]).collect())
                    .collect()
            })
            .collect()
    }

    pub fn class_function<F: Fn(&ConjClass) -> CycloNum>(&self, f: F) -> ClassFunction {
        ClassFunction {
            values: self.classes.iter().map(f).collect(),
        }
    }

    /// Direct product acting block-diagonally on V₁ ⊕ V₂.
    pub fn direct_product(
        &self,
        other: &MatrixGroup,
        cap: usize,
    ) -> Result<MatrixGroup, GroupError> {
        let (n1, n2) = (self.dim(), other.dim());
        let block = |a: &Mat, b: &Mat| {
            let mut m = Mat::zeros(n1 + n2, n1 + n2);
            for i in 0..n1 {
                for j in 0..n1 {
                    m.set(i, j, a.get(i, j).clone());
                }
            }
            for i in 0..n2 {
                for j in 0..n2 {
                    m.set(n1 + i, n1 + j, b.get(i, j).clone());
                }
            }
            m
        };
        let form = block(self.space.form(), other.space.form());
        let space = SympSpace::new(form).expect("block sum of symplectic forms");
        let mut gens: Vec<Mat> = self
            .generators
            .iter()
            .map(|&g| block(&self.element(g), &Mat::identity(n2)))
            .collect();
        gens.extend(
            other
                .generators
                .iter()
                .map(|&g| block(&Mat::identity(n1), &other.element(g))),
        );
        MatrixGroup::generate(&gens, space, cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: u32) -> MatrixGroup {
        let g = Mat::diag(vec![
            CycloNum::root_of_unity(n, 1),
            CycloNum::root_of_unity(n, -1),
        ]);
        MatrixGroup::generate(&[g], SympSpace::standard(1), DEFAULT_CAP).unwrap()
    }

    #[test]
    fn cyclic_closure() {
        let g = cyclic(5);
        assert_eq!(g.order(), 5);
        assert_eq!(g.num_classes(), 5);
        let g7 = cyclic(7);
        assert!(g7.classes().iter().all(|c| c.size == 1));
    }

    #[test]
    fn not_symplectic() {
        let g = Mat::diag(vec![CycloNum::from_int(2), CycloNum::from_int(1)]);
        let err = MatrixGroup::generate(&[g], SympSpace::standard(1), 10).unwrap_err();
        assert!(matches!(err, GroupError::NotSymplectic { index: 0 }));
    }

    #[test]
    fn cap_exceeded() {
        let err = MatrixGroup::generate(
            &[Mat::diag(vec![
                CycloNum::root_of_unity(12, 1),
                CycloNum::root_of_unity(12, -1),
            ])],
            SympSpace::standard(1),
            5,
        )
        .unwrap_err();
        assert!(matches!(err, GroupError::CapExceeded { cap: 5 }));
    }

    #[test]
    fn identity_class_and_products() {
        let g = cyclic(5);
        let e = g.class_of(g.identity());
        for j in 0..g.num_classes() {
            let p = g.class_sum_product(e, j);
            for (k, &c) in p.iter().enumerate() {
                assert_eq!(c, (k == j) as u64);
            }
        }
        // singleton classes: C_g · C_g = C_{g²}
        let x = g.generators()[0];
        let x2 = g.mul(x, x);
        let p = g.class_sum_product(g.class_of(x), g.class_of(x));
        assert_eq!(p[g.class_of(x2)], 1);
        assert_eq!(p.iter().sum::<u64>(), 1);
    }

    #[test]
    fn element_matrices_multiply() {
        let g = cyclic(6);
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(&g.element(a) * &g.element(b), g.element(g.mul(a, b)));
            }
        }
        assert_eq!(g.element(g.identity()), Mat::identity(2));
    }
}
