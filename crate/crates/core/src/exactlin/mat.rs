use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cyclo::CycloNum;
use super::linalg;
use super::LinalgError;

/// Dense row-major matrix over cyclotomic numbers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<CycloNum>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![CycloNum::from_int(0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, CycloNum::from_int(1));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycloNum>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| CycloNum::from_int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors (all of length `nrows`).
    pub fn from_columns(nrows: usize, cols: &[Vec<CycloNum>]) -> Mat {
        let mut m = Mat::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn diag(entries: Vec<CycloNum>) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycloNum) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[CycloNum] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<CycloNum> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<CycloNum> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<CycloNum>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, s: &CycloNum) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn apply(&self, v: &[CycloNum]) -> Vec<CycloNum> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = CycloNum::from_int(0);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycloNum::is_zero)
    }

    /// Least common multiple of the entry conductors.
    pub fn conductor(&self) -> u32 {
        self.data
            .iter()
            .map(|x| x.canonical().conductor())
            .fold(1, num_integer::lcm)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.to_rows())
    }

    /// Exact basis of the null space, canonical (reduced echelon) choice.
    pub fn kernel_basis(&self) -> Vec<Vec<CycloNum>> {
        linalg::kernel(&self.to_rows(), self.cols)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vec<CycloNum>> = (0..n)
            .map(|i| {
                let mut r = self.row(i);
                r.extend((0..n).map(|j| CycloNum::from_int((i == j) as i64)));
                r
            })
            .collect();
        let piv = linalg::rref(&mut aug);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_rows(
            aug.into_iter().map(|r| r[n..].to_vec()).collect(),
        ))
    }

    /// Coefficients of det(t·I − M), constant term first (Faddeev–LeVerrier).
    pub fn charpoly(&self) -> Vec<CycloNum> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![CycloNum::from_int(0); n + 1];
        coeffs[n] = CycloNum::from_int(1);
        let mut m = Mat::zeros(n, n);
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A·M_k)/k
            let mut mk = self * &m;
            for i in 0..n {
                let d = mk.get(i, i) + &coeffs[n - k + 1];
                mk.set(i, i, d);
            }
            let am = self * &mk;
            let tr = (0..n).fold(CycloNum::from_int(0), |acc, i| &acc + am.get(i, i));
            let inv_k = CycloNum::from_int(k as i64).inverse().unwrap();
            coeffs[n - k] = -(&tr * &inv_k);
            m = mk;
        }
        coeffs
    }

    /// Lexicographic comparison of row-major entries in canonical form.
    pub fn canonical_cmp(&self, other: &Mat) -> std::cmp::Ordering {
        self.rows
            .cmp(&other.rows)
            .then(self.cols.cmp(&other.cols))
            .then_with(|| {
                for (a, b) in self.data.iter().zip(&other.data) {
                    let o = a.canonical_cmp(b);
                    if o.is_ne() {
                        return o;
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rows = Vec::<Vec<CycloNum>>::deserialize(d)?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(D::Error::custom("ragged matrix"));
        }
        Ok(Mat::from_rows(rows))
    }
}

/// V^g = ker(g − id).
pub fn fixed_space(g: &Mat) -> Vec<Vec<CycloNum>> {
    assert!(g.is_square(), "fixed_space needs a square matrix");
    (g - &Mat::identity(g.rows())).kernel_basis()
}

/// A symplectic vector space: even dimension with a nondegenerate skew form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SympSpace {
    form: Mat,
}

impl SympSpace {
    pub fn new(form: Mat) -> Result<SympSpace, LinalgError> {
        if !form.is_square() || !form.rows().is_multiple_of(2) {
            return Err(LinalgError::NotSymplecticForm(
                "form must be square of even size".into(),
            ));
        }
        if form.transpose() != form.scale(&CycloNum::from_int(-1)) {
            return Err(LinalgError::NotSymplecticForm("form is not skew".into()));
        }
        if form.rank() != form.rows() {
            return Err(LinalgError::NotSymplecticForm("form is degenerate".into()));
        }
        Ok(SympSpace { form })
    }

    /// ℂ^{2k} with the block form [[0, I], [−I, 0]].
    pub fn standard(k: usize) -> SympSpace {
        let mut j = Mat::zeros(2 * k, 2 * k);
        for i in 0..k {
            j.set(i, k + i, CycloNum::from_int(1));
            j.set(k + i, i, CycloNum::from_int(-1));
        }
        SympSpace { form: j }
    }

    pub fn dim(&self) -> usize {
        self.form.rows()
    }

    pub fn form(&self) -> &Mat {
        &self.form
    }

    /// gᵀ J g = J.
    pub fn preserves(&self, g: &Mat) -> bool {
        g.is_square() && g.rows() == self.dim() && &(&g.transpose() * &self.form) * g == self.form
    }

    /// Gram matrix of the form on a subspace basis.
    pub fn restrict_form(&self, basis: &[Vec<CycloNum>]) -> Result<Mat, LinalgError> {
        let w = Mat::from_columns(self.dim(), basis);
        if w.rank() != basis.len() {
            return Err(LinalgError::DependentBasis);
        }
        Ok(&(&w.transpose() * &self.form) * &w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycloNum {
        CycloNum::root_of_unity(n, k)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Mat::zeros(2, 2).rank(), 0);
        assert_eq!(Mat::identity(4).rank(), 4);
        let m = Mat::from_rows(vec![
            vec![CycloNum::from_int(1), z(3, 1)],
            vec![z(3, 2), CycloNum::from_int(1)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Mat::identity(3).kernel_basis().is_empty());
        let k = Mat::zeros(3, 3).kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x, &CycloNum::from_int((i == j) as i64));
            }
        }
        let g = Mat::diag(vec![z(4, 1), z(4, -1)]);
        assert!((&g - &Mat::identity(2)).kernel_basis().is_empty());
    }

    #[test]
    fn fixed_space_examples() {
        assert_eq!(fixed_space(&Mat::identity(4)).len(), 4);
        assert!(fixed_space(&Mat::identity(2).scale(&CycloNum::from_int(-1))).is_empty());
    }

    #[test]
    fn restrict_form_examples() {
        let v = SympSpace::standard(2);
        let all: Vec<Vec<CycloNum>> = Mat::identity(4).to_rows();
        assert_eq!(v.restrict_form(&all).unwrap(), v.form().clone());
        let line = vec![vec![1, 2, 3, 4]
            .into_iter()
            .map(CycloNum::from_int)
            .collect()];
        assert_eq!(v.restrict_form(&line).unwrap(), Mat::zeros(1, 1));
        let dep = vec![line[0].clone(), line[0].clone()];
        assert!(matches!(
            v.restrict_form(&dep),
            Err(LinalgError::DependentBasis)
        ));
    }

    #[test]
    fn charpoly_and_inverse() {
        let m = Mat::from_ints(&[&[2, 1], &[1, 3]]);
        let cp = m.charpoly();
        assert_eq!(
            cp,
            vec![5, -5, 1]
                .into_iter()
                .map(CycloNum::from_int)
                .collect::<Vec<_>>()
        );
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(2));
        assert!(Mat::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn symp_space_validation() {
        assert!(SympSpace::new(Mat::identity(2)).is_err());
        assert!(SympSpace::new(Mat::from_ints(&[&[0, 1], &[-1, 0]])).is_ok());
        assert!(SympSpace::new(Mat::zeros(2, 2)).is_err());
    }
}
