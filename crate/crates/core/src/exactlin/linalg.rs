//! Exact Gaussian elimination, dense and sparse, with first-nonzero pivoting.

use std::collections::BTreeMap;

use super::field::Scalar;

/// Reduced row echelon form in place; returns the pivot columns in order.
pub fn rref<S: Scalar>(rows: &mut [Vec<S>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    x.sub_mul_assign(&f, y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of the right null space, one vector per free column, in column order.
pub fn kernel<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![S::zero(); ncols];
            v[free] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m[r][free].neg();
            }
            v
        })
        .collect()
}

/// A solution of `rows · x = rhs` with free variables set to zero, or `None` if inconsistent.
pub fn solve<S: Scalar>(rows: &[Vec<S>], rhs: &[S]) -> Option<Vec<S>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<S>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![S::zero(); ncols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Sparse row: strictly increasing column indices, no explicit zeros.
pub type SparseRow<S> = Vec<(usize, S)>;

pub fn sparse_from_map<S: Scalar>(m: BTreeMap<usize, S>) -> SparseRow<S> {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn axpy<S: Scalar>(row: &SparseRow<S>, f: &S, pivot: &SparseRow<S>) -> SparseRow<S> {
    // row - f * pivot
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, f.mul(&pivot[j].1).neg()));
            j += 1;
        } else {
            let v = row[i].1.sub(&f.mul(&pivot[j].1));
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental sparse echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct SparseEchelon<S> {
    /// leading column -> normalised row with leading coefficient 1
    pivots: BTreeMap<usize, SparseRow<S>>,
}

impl<S: Scalar> Default for SparseEchelon<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> SparseEchelon<S> {
    pub fn new() -> Self {
        SparseEchelon {
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces leading entries until the leading column is not a pivot.
    pub fn reduce(&self, mut row: SparseRow<S>) -> SparseRow<S> {
        while let Some((c, v)) = row.first().cloned() {
            match self.pivots.get(&c) {
                Some(p) => row = axpy(&row, &v, p),
                None => break,
            }
        }
        row
    }

    /// Reduces every entry that sits on a pivot column.
    pub fn reduce_full(&self, mut row: SparseRow<S>) -> SparseRow<S> {
        let mut k = 0;
        while k < row.len() {
            let (c, v) = row[k].clone();
            match self.pivots.get(&c) {
                Some(p) => row = axpy(&row, &v, p),
                None => k += 1,
            }
        }
        row
    }

    /// Adds a row; returns `true` if it enlarged the span.
    pub fn insert(&mut self, row: SparseRow<S>) -> bool {
        let row = self.reduce(row);
        let Some((c, v)) = row.first().cloned() else {
            return false;
        };
        let inv = v.inv();
        let row = row.into_iter().map(|(k, x)| (k, x.mul(&inv))).collect();
        self.pivots.insert(c, row);
        true
    }

    pub fn contains(&self, row: SparseRow<S>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Pivot rows keyed by leading column.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseRow<S>)> + '_ {
        self.pivots.iter().map(|(c, r)| (*c, r))
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Back-substitutes so that every pivot column appears in exactly one row.
    pub fn into_rref(mut self) -> BTreeMap<usize, SparseRow<S>> {
        // descending order: every larger pivot row is already fully reduced
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        let mut done: BTreeMap<usize, SparseRow<S>> = BTreeMap::new();
        for c in cols.into_iter().rev() {
            let mut r = self.pivots.remove(&c).unwrap();
            let mut k = 1;
            while k < r.len() {
                let (cc, v) = r[k].clone();
                match done.get(&cc) {
                    Some(p) => r = axpy(&r, &v, p),
                    None => k += 1,
                }
            }
            done.insert(c, r);
        }
        done
    }
}

/// Kernel of a sparse system with `ncols` unknowns.
pub fn sparse_kernel<S: Scalar>(rows: Vec<SparseRow<S>>, ncols: usize) -> Vec<SparseRow<S>> {
    sparse_kernel_with_free(rows, ncols)
        .into_iter()
        .map(|(_, v)| v)
        .collect()
}

/// Kernel basis paired with each vector's free column (where it is 1 and the
/// other basis vectors vanish).
pub fn sparse_kernel_with_free<S: Scalar>(
    rows: Vec<SparseRow<S>>,
    ncols: usize,
) -> Vec<(usize, SparseRow<S>)> {
    let mut ech = SparseEchelon::new();
    for r in rows {
        ech.insert(r);
    }
    let rref = ech.into_rref();
    let mut is_pivot = vec![false; ncols];
    for &c in rref.keys() {
        is_pivot[c] = true;
    }
    // free column -> entries from pivot rows
    let mut kernel: BTreeMap<usize, Vec<(usize, S)>> = BTreeMap::new();
    for c in (0..ncols).filter(|&c| !is_pivot[c]) {
        kernel.insert(c, vec![(c, S::one())]);
    }
    for (&p, row) in &rref {
        for (c, v) in row.iter().skip(1) {
            if let Some(k) = kernel.get_mut(c) {
                k.push((p, v.neg()));
            }
        }
    }
    kernel
        .into_iter()
        .map(|(c, mut v)| {
            v.sort_by_key(|e| e.0);
            (c, v)
        })
        .collect()
}

/// Particular solution of a sparse system (rhs as column `ncols`), free variables zero.
pub fn sparse_solve<S: Scalar>(
    rows: Vec<(SparseRow<S>, S)>,
    ncols: usize,
) -> Option<Vec<(usize, S)>> {
    let mut ech = SparseEchelon::new();
    for (mut r, b) in rows {
        if !b.is_zero() {
            r.push((ncols, b));
        }
        ech.insert(r);
    }
    if ech.pivots.contains_key(&ncols) {
        return None;
    }
    let rref = ech.into_rref();
    let mut x = vec![];
    for (&p, row) in &rref {
        if let Some((_, b)) = row.iter().find(|e| e.0 == ncols) {
            x.push((p, b.clone()));
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::field::{rat_int, Rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    fn to_sparse(rows: &[Vec<Rat>]) -> Vec<SparseRow<Rat>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !Scalar::is_zero(*v))
                    .map(|(i, v)| (i, v.clone()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn dense_kernel_and_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        for row in &a {
            let dot: Rat = row.iter().zip(&k[0]).map(|(x, y)| x * y).sum();
            assert!(Scalar::is_zero(&dot));
        }
        let x = solve(&a, &[rat_int(6), rat_int(12), rat_int(2)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(2), rat_int(0)]);
        assert!(solve(&a, &[rat_int(1), rat_int(1), rat_int(0)]).is_none());
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[
            &[0, 1, 0, 2, 0],
            &[1, 0, 3, 0, 0],
            &[1, 1, 3, 2, 0],
            &[0, 0, 0, 1, 1],
        ]);
        let k = sparse_kernel(to_sparse(&a), 5);
        assert_eq!(k.len(), 5 - rank(&a));
        for v in &k {
            for row in &a {
                let dot: Rat = v.iter().map(|(c, x)| &row[*c] * x).sum();
                assert!(Scalar::is_zero(&dot));
            }
        }
        let rhs = [rat_int(3), rat_int(4), rat_int(7), rat_int(2)];
        let rows = to_sparse(&a).into_iter().zip(rhs.iter().cloned()).collect();
        let x = sparse_solve(rows, 5).unwrap();
        let mut dense = vec![rat_int(0); 5];
        for (c, v) in x {
            dense[c] = v;
        }
        for (row, b) in a.iter().zip(&rhs) {
            let dot: Rat = row.iter().zip(&dense).map(|(x, y)| x * y).sum();
            assert_eq!(&dot, b);
        }
    }
}
