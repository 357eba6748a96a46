//! Polyvector fields as superfunctions in x_i and odd ξ_i = ∂_i.
//!
//! Sign convention: [P, Q] = Σ_i (P ∂⃖/∂ξ_i)(∂_i Q) − (P ∂⃖/∂x_i)(∂⃗/∂ξ_i Q),
//! which is the Lie bracket on vector fields and gives [X, f] = X(f).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exactlin::linalg::{SparseEchelon, SparseRow};
use crate::exactlin::CycloNum;
use crate::poisson::{Bivector, Monomial, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polyvector {
    nvars: usize,
    arity: usize,
    /// Sorted k-subsets of variables → coefficient.
    coeffs: BTreeMap<Vec<usize>, Poly>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SchoutenError {
    #[error("bivector violates the Jacobi identity")]
    JacobiViolated,
}

/// Sign of sorting the concatenation, or `None` on a repeated index.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(i64, Vec<usize>)> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    let mut sign = 1;
    // bubble sort counts transpositions; subsets are tiny
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            match v[j].cmp(&v[j + 1]) {
                std::cmp::Ordering::Greater => {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some((sign, v))
}

impl Polyvector {
    pub fn zero(nvars: usize, arity: usize) -> Polyvector {
        Polyvector {
            nvars,
            arity,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn function(f: Poly) -> Polyvector {
        let mut p = Polyvector::zero(f.nvars(), 0);
        p.add(vec![], &f);
        p
    }

    /// f ∂_{i_1} ∧ … ∧ ∂_{i_k} for an arbitrary index order.
    pub fn term(f: Poly, indices: &[usize]) -> Polyvector {
        let mut p = Polyvector::zero(f.nvars(), indices.len());
        if let Some((s, sorted)) = merge_sign(indices, &[]) {
            p.add(sorted, &f.scale(&CycloNum::from_int(s)));
        }
        p
    }

    pub fn from_bivector(b: &Bivector) -> Polyvector {
        let mut p = Polyvector::zero(b.nvars(), 2);
        for (&(i, j), c) in b.entries() {
            p.add(vec![i, j], c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, subset: &[usize]) -> Poly {
        self.coeffs
            .get(subset)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.coeffs.iter()
    }

    fn add(&mut self, subset: Vec<usize>, f: &Poly) {
        if f.is_zero() {
            return;
        }
        let e = self
            .coeffs
            .entry(subset)
            .or_insert_with(|| Poly::zero(f.nvars()));
        e.add_scaled(f, &CycloNum::from_int(1));
        if e.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
    }

    pub fn plus(&self, other: &Polyvector) -> Polyvector {
        assert_eq!(self.arity, other.arity);
        let mut p = self.clone();
        for (s, f) in &other.coeffs {
            p.add(s.clone(), f);
        }
        p
    }

    pub fn scale(&self, c: &CycloNum) -> Polyvector {
        let mut p = Polyvector::zero(self.nvars, self.arity);
        for (s, f) in &self.coeffs {
            p.add(s.clone(), &f.scale(c));
        }
        p
    }

    /// Wedge product P ∧ Q.
    pub fn wedge(&self, other: &Polyvector) -> Polyvector {
        let mut p = Polyvector::zero(self.nvars, self.arity + other.arity);
        for (s, f) in &self.coeffs {
            for (t, g) in &other.coeffs {
                if let Some((sign, u)) = merge_sign(s, t) {
                    p.add(u, &(f * g).scale(&CycloNum::from_int(sign)));
                }
            }
        }
        p
    }

    /// Homogeneous coefficient degree, if all coefficients share one.
    pub fn coefficient_degree(&self) -> Option<u32> {
        let mut degs = self
            .coeffs
            .values()
            .map(|f| (f.is_homogeneous(), f.degree()));
        let (h, d) = degs.next()?;
        if !h || degs.any(|e| e != (true, d)) {
            return None;
        }
        d
    }
}

/// Schouten–Nijenhuis bracket, arity p + q − 1.
pub fn schouten_bracket(p: &Polyvector, q: &Polyvector) -> Polyvector {
    assert_eq!(p.nvars, q.nvars, "variable count mismatch");
    let n = p.nvars;
    if p.arity + q.arity == 0 {
        return Polyvector::zero(n, 0);
    }
    let mut out = Polyvector::zero(n, p.arity + q.arity - 1);
    for (s, f) in &p.coeffs {
        for (t, g) in &q.coeffs {
            for i in 0..n {
                // right ξ-derivative of P against ∂_i Q
                if let Some(pos) = s.iter().position(|&v| v == i) {
                    let dg = g.derivative(i);
                    if !dg.is_zero() {
                        let sr = if (s.len() - 1 - pos) % 2 == 0 { 1 } else { -1 };
                        let rest: Vec<usize> = s.iter().copied().filter(|&v| v != i).collect();
                        if let Some((sign, u)) = merge_sign(&rest, t) {
                            out.add(u, &(f * &dg).scale(&CycloNum::from_int(sr * sign)));
                        }
                    }
                }
                // ∂_i P against the left ξ-derivative of Q
                if let Some(pos) = t.iter().position(|&v| v == i) {
                    let df = f.derivative(i);
                    if !df.is_zero() {
                        let sl = if pos % 2 == 0 { 1 } else { -1 };
                        let rest: Vec<usize> = t.iter().copied().filter(|&v| v != i).collect();
                        if let Some((sign, u)) = merge_sign(s, &rest) {
                            out.add(u, &(&df * g).scale(&CycloNum::from_int(-sl * sign)));
                        }
                    }
                }
            }
        }
    }
    out
}

/// d P = [Θ, P].
pub fn kb_differential(p: &Polyvector, theta: &Bivector) -> Result<Polyvector, SchoutenError> {
    let t = Polyvector::from_bivector(theta);
    if !schouten_bracket(&t, &t).is_zero() {
        return Err(SchoutenError::JacobiViolated);
    }
    Ok(schouten_bracket(&t, p))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(0, n, k, &mut vec![], &mut out);
    out
}

/// Basis of k-polyvectors whose coefficients are monomials of degree c.
fn cell_basis(n: usize, k: usize, c: i64) -> Vec<(Vec<usize>, Monomial)> {
    if c < 0 || k > n {
        return vec![];
    }
    let monos = Monomial::of_degree(n, c as u32);
    subsets(n, k)
        .into_iter()
        .flat_map(|s| monos.iter().map(move |m| (s.clone(), m.clone())))
        .collect()
}

fn image_rows(n: usize, k: usize, c: i64, t: &Polyvector) -> (Vec<SparseRow<CycloNum>>, usize) {
    let src = cell_basis(n, k, c);
    let mut index: BTreeMap<(Vec<usize>, Monomial), usize> = BTreeMap::new();
    let mut rows = vec![];
    for (s, m) in &src {
        let p = Polyvector::term(Poly::term(m.clone(), CycloNum::from_int(1)), s);
        let img = schouten_bracket(t, &p);
        let mut row = vec![];
        for (u, f) in img.entries() {
            for (mm, v) in f.terms() {
                let len = index.len();
                let col = *index.entry((u.clone(), mm.clone())).or_insert(len);
                row.push((col, v.clone()));
            }
        }
        row.sort_by_key(|e| e.0);
        rows.push(row);
    }
    (rows, src.len())
}

fn rank_of(rows: Vec<SparseRow<CycloNum>>) -> usize {
    let mut e = SparseEchelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[derive(Clone, Debug, Serialize)]
pub struct HpCell {
    /// Coefficient degree of the k-polyvectors.
    pub degree: u32,
    pub dim: usize,
    pub certified: bool,
}

/// Graded dimensions of HP^k for the Koszul–Brylinski complex of a bivector
/// with homogeneous coefficients, over coefficient degrees 0..=window.
///
/// d maps coefficient degree c to c + e − 1 (e = degree of Θ's coefficients),
/// so each cell is computed exactly from its neighbours; every reported
/// degree is certified.
pub fn hp_smooth(theta: &Bivector, k: usize, window: u32) -> Result<Vec<HpCell>, SchoutenError> {
    let n = theta.nvars();
    let t = Polyvector::from_bivector(theta);
    if !schouten_bracket(&t, &t).is_zero() {
        return Err(SchoutenError::JacobiViolated);
    }
    let shift: i64 = if t.is_zero() {
        0
    } else {
        t.coefficient_degree()
            .expect("bivector coefficients must be homogeneous of one degree") as i64
            - 1
    };
    let mut out = vec![];
    for c in 0..=window as i64 {
        let dim = cell_basis(n, k, c).len();
        let (rows, _) = image_rows(n, k, c, &t);
        let rank_out = if t.is_zero() { 0 } else { rank_of(rows) };
        let rank_in = if k == 0 || t.is_zero() {
            0
        } else {
            rank_of(image_rows(n, k - 1, c - shift, &t).0)
        };
        out.push(HpCell {
            degree: c as u32,
            dim: dim - rank_out - rank_in,
            certified: true,
        });
    }
    Ok(out)
}

/// Random polyvector with coefficients of degree ≤ `max_deg` and small integer entries.
pub fn random_polyvector(
    nvars: usize,
    arity: usize,
    max_deg: u32,
    rng: &mut impl rand::Rng,
) -> Polyvector {
    let mut p = Polyvector::zero(nvars, arity);
    let subsets: Vec<Vec<usize>> = k_subsets(nvars, arity);
    for s in subsets {
        if !rng.gen_bool(0.6) {
            continue;
        }
        let mut f = Poly::zero(nvars);
        for d in 0..=max_deg {
            for m in Monomial::of_degree(nvars, d) {
                if rng.gen_bool(0.3) {
                    f.add_term(m, &CycloNum::from_int(rng.gen_range(-3..=3)));
                }
            }
        }
        p.add(s, &f);
    }
    p
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return vec![];
    }
    let mut out = vec![];
    for mut rest in k_subsets(n - 1, k - 1) {
        rest.push(n - 1);
        out.push(rest);
    }
    out.extend(k_subsets(n - 1, k));
    out.sort();
    out
}

/// Graded skew-symmetry and graded Jacobi with |P| = arity − 1.
pub fn check_schouten(p: &Polyvector, q: &Polyvector, r: &Polyvector) -> Result<(), String> {
    let deg = |x: &Polyvector| x.arity as i64 - 1;
    let sgn = |e: i64| CycloNum::from_int(if e.rem_euclid(2) == 0 { 1 } else { -1 });
    let (dp, dq, dr) = (deg(p), deg(q), deg(r));
    let pq = schouten_bracket(p, q);
    let qp = schouten_bracket(q, p);
    if !pq.plus(&qp.scale(&sgn(dp * dq))).is_zero() {
        return Err("graded skew-symmetry fails".into());
    }
    if p.arity + q.arity == 0 || q.arity + r.arity == 0 || r.arity + p.arity == 0 {
        return Ok(());
    }
    let t1 = schouten_bracket(p, &schouten_bracket(q, r)).scale(&sgn(dp * dr));
    let t2 = schouten_bracket(q, &schouten_bracket(r, p)).scale(&sgn(dq * dp));
    let t3 = schouten_bracket(r, &schouten_bracket(p, q)).scale(&sgn(dr * dq));
    if !t1.plus(&t2).plus(&t3).is_zero() {
        return Err("graded Jacobi fails".into());
    }
    Ok(())
}

/// d(d P) = 0 for a Poisson bivector Θ.
/// Linear Poisson structure of so(3): {x,y} = z, {y,z} = x, {z,x} = y.
pub fn so3_bivector() -> Bivector {
    let v = |i| Poly::var(3, i);
    Bivector::from_coeffs(3, [((0, 1), v(2)), ((1, 2), v(0)), ((0, 2), -&v(1))])
}

pub fn check_d_squared(p: &Polyvector, theta: &Bivector) -> Result<(), String> {
    let d1 = kb_differential(p, theta).map_err(|e| e.to_string())?;
    let d2 = kb_differential(&d1, theta).map_err(|e| e.to_string())?;
    if d2.is_zero() {
        Ok(())
    } else {
        Err(format!("d∘d ≠ 0 on an arity-{} polyvector", p.arity))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_of_xy() {
        let t = Polyvector::from_bivector(&Bivector::standard(1));
        let xy = &Poly::var(2, 0) * &Poly::var(2, 1);
        let h = schouten_bracket(&t, &Polyvector::function(xy));
        assert_eq!(h.coeff(&[0]), Poly::var(2, 0));
        assert_eq!(h.coeff(&[1]), -&Poly::var(2, 1));
    }

    #[test]
    fn vector_field_brackets() {
        let dx = Polyvector::term(Poly::one(2), &[0]);
        assert!(schouten_bracket(&dx, &dx).is_zero());
        // [x∂y, y∂x] = x∂x − y∂y
        let a = Polyvector::term(Poly::var(2, 0), &[1]);
        let b = Polyvector::term(Poly::var(2, 1), &[0]);
        let want = Polyvector::term(Poly::var(2, 0), &[0])
            .plus(&Polyvector::term(-&Poly::var(2, 1), &[1]));
        assert_eq!(schouten_bracket(&a, &b), want);
        // [X, f] = X(f)
        let f = Polyvector::function(&Poly::var(2, 0) * &Poly::var(2, 0));
        let xf = schouten_bracket(&b, &f);
        assert_eq!(
            xf.coeff(&[]),
            (&Poly::var(2, 0) * &Poly::var(2, 1)).scale(&CycloNum::from_int(2))
        );
    }

    #[test]
    fn plane_de_rham() {
        let t = Bivector::standard(1);
        let dims = |k| {
            hp_smooth(&t, k, 6)
                .unwrap()
                .iter()
                .map(|c| c.dim)
                .collect::<Vec<_>>()
        };
        assert_eq!(dims(0), vec![1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(dims(1), vec![0; 7]);
        assert_eq!(dims(2), vec![0; 7]);
        let z = Bivector::zero(2);
        let h1 = hp_smooth(&z, 1, 2).unwrap();
        assert_eq!(h1.iter().map(|c| c.dim).collect::<Vec<_>>(), vec![2, 4, 6]);
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // θ_xy = z, θ_yz = x: {x,{y,z}} + … ≠ 0
        let b = Bivector::from_coeffs(3, [((0, 1), Poly::var(3, 2)), ((1, 2), Poly::var(3, 0))]);
        let f = Polyvector::function(Poly::var(3, 0));
        if !b.satisfies_jacobi() {
            assert_eq!(kb_differential(&f, &b), Err(SchoutenError::JacobiViolated));
        }
    }

    #[test]
    fn random_identities() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let n = rng.gen_range(2..=4);
            let ps: Vec<Polyvector> = (0..3)
                .map(|_| random_polyvector(n, rng.gen_range(0..=3.min(n)), 2, &mut rng))
                .collect();
            check_schouten(&ps[0], &ps[1], &ps[2]).unwrap();
        }
        let theta = so3_bivector();
        assert!(theta.satisfies_jacobi());
        for k in 0..=2 {
            check_d_squared(&random_polyvector(3, k, 3, &mut rng), &theta).unwrap();
        }
    }
}
