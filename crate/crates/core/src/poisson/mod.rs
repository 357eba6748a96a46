//! Polynomial Poisson algebras ℂ[V] and invariant subalgebras ℂ[V]^G.

mod invariants;
mod poly;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exactlin::{CycloNum, Mat, Rat};
use crate::groups::MatrixGroup;

pub use invariants::{invariant_basis, invariant_pieces, reynolds, InvariantPiece};
pub use poly::{var_names, Monomial, Poly};

/// Bivector Θ = Σ_{i<j} θ_ij ∂_i ∧ ∂_j with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bivector {
    nvars: usize,
    coeffs: BTreeMap<(usize, usize), Poly>,
}

impl Bivector {
    pub fn zero(nvars: usize) -> Bivector {
        Bivector {
            nvars,
            coeffs: BTreeMap::new(),
        }
    }

    /// θ_ij for i < j; zero entries are dropped.
    pub fn from_coeffs(
        nvars: usize,
        entries: impl IntoIterator<Item = ((usize, usize), Poly)>,
    ) -> Bivector {
        let mut b = Bivector::zero(nvars);
        for ((i, j), p) in entries {
            assert!(i < j && j < nvars, "bivector index ({i},{j}) out of order");
            if !p.is_zero() {
                b.coeffs.insert((i, j), p);
            }
        }
        b
    }

    /// Constant bivector from a skew matrix P: {x_i, x_j} = P_ij.
    pub fn constant(p: &Mat) -> Bivector {
        let n = p.rows();
        Bivector::from_coeffs(
            n,
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| ((i, j), Poly::constant(n, p.get(i, j).clone()))),
        )
    }

    /// Poisson structure dual to ω(u,v) = uᵀJv: {x_i, x_j} = (−J⁻¹)_ij, so {x, y} = 1 on ℂ².
    pub fn symplectic(form: &Mat) -> Bivector {
        let inv = form.inverse().expect("symplectic form is invertible");
        Bivector::constant(&inv.scale(&CycloNum::from_int(-1)))
    }

    /// Standard Θ on ℂ^{2k} with {x_i, y_i} = 1.
    pub fn standard(k: usize) -> Bivector {
        Bivector::symplectic(crate::exactlin::SympSpace::standard(k).form())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// θ_ij for any i, j (antisymmetric extension).
    pub fn coeff(&self, i: usize, j: usize) -> Poly {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self
                .coeffs
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| Poly::zero(self.nvars)),
            std::cmp::Ordering::Greater => -&self.coeff(j, i),
            std::cmp::Ordering::Equal => Poly::zero(self.nvars),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Poly)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Jacobi on coordinate functions, which suffices by the Leibniz rule.
    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.nvars;
        let x = |i| Poly::var(n, i);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let s = &(&bracket(&x(i), &bracket(&x(j), &x(k), self), self)
                        + &bracket(&x(j), &bracket(&x(k), &x(i), self), self))
                        + &bracket(&x(k), &bracket(&x(i), &x(j), self), self);
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// {f, g} = Σ_{i<j} θ_ij (∂_i f ∂_j g − ∂_j f ∂_i g).
pub fn bracket(f: &Poly, g: &Poly, theta: &Bivector) -> Poly {
    let n = theta.nvars;
    assert_eq!(f.nvars(), n);
    assert_eq!(g.nvars(), n);
    let mut out = Poly::zero(n);
    if f.is_zero() || g.is_zero() {
        return out;
    }
    let df: Vec<Poly> = (0..n).map(|i| f.derivative(i)).collect();
    let dg: Vec<Poly> = (0..n).map(|i| g.derivative(i)).collect();
    let one = CycloNum::from_int(1);
    for (&(i, j), t) in &theta.coeffs {
        let w = &(&df[i] * &dg[j]) - &(&df[j] * &dg[i]);
        if !w.is_zero() {
            out.add_scaled(&(t * &w), &one);
        }
    }
    out
}

/// Inverse of a power series with invertible constant term, to order `max_deg`.
pub fn power_series_inverse(a: &[CycloNum], max_deg: usize) -> Vec<CycloNum> {
    let a0inv = a[0].inverse().expect("constant term must be invertible");
    let mut b = vec![CycloNum::from_int(0); max_deg + 1];
    b[0] = a0inv.clone();
    for k in 1..=max_deg {
        let mut s = CycloNum::from_int(0);
        for i in 1..=k.min(a.len() - 1) {
            s = &s + &(&a[i] * &b[k - i]);
        }
        b[k] = -(&s * &a0inv);
    }
    b
}

/// Molien series (1/|G|) Σ_g 1/det(1 − t g), coefficients c₀..c_D.
pub fn molien(g: &MatrixGroup, max_deg: usize) -> Vec<Rat> {
    let mut acc = vec![CycloNum::from_int(0); max_deg + 1];
    for class in g.classes() {
        let det = crate::catalog::det_one_minus_tg(&g.element(class.representative));
        let series = power_series_inverse(&det, max_deg);
        let size = CycloNum::from_int(class.size as i64);
        for (a, s) in acc.iter_mut().zip(&series) {
            *a = &*a + &(&size * s);
        }
    }
    let inv = CycloNum::from_int(g.order() as i64).inverse().unwrap();
    acc.iter()
        .map(|c| {
            (c * &inv)
                .as_rational()
                .cloned()
                .expect("Molien coefficients are rational")
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub pass: bool,
    pub pairs_checked: usize,
    /// (degree p, index i, degree q, index j) of the first failing pair.
    pub counterexample: Option<(u32, usize, u32, usize)>,
}

/// Checks that brackets of invariants of degrees p, q with p + q − 2 ≤ D are
/// invariant of degree p + q − 2.
pub fn bracket_closure_check(g: &MatrixGroup, max_deg: u32) -> ClosureReport {
    let theta = Bivector::symplectic(g.space().form());
    let pieces: Vec<InvariantPiece> = (0..=max_deg).map(|d| invariant_basis(g, d)).collect();
    let mut checked = 0;
    for p in 0..=max_deg {
        for q in p..=max_deg {
            if p + q < 2 || p + q - 2 > max_deg {
                continue;
            }
            let target = &pieces[(p + q - 2) as usize];
            for (i, f) in pieces[p as usize].basis.iter().enumerate() {
                for (j, h) in pieces[q as usize].basis.iter().enumerate() {
                    checked += 1;
                    let b = bracket(f, h, &theta);
                    let ok = b.is_zero()
                        || (b.is_homogeneous()
                            && b.degree() == Some(p + q - 2)
                            && target.coords(&b).is_some());
                    if !ok {
                        return ClosureReport {
                            pass: false,
                            pairs_checked: checked,
                            counterexample: Some((p, i, q, j)),
                        };
                    }
                }
            }
        }
    }
    ClosureReport {
        pass: true,
        pairs_checked: checked,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (Poly, Poly) {
        (Poly::var(2, 0), Poly::var(2, 1))
    }

    #[test]
    fn standard_bracket_normalisation() {
        let (x, y) = xy();
        let t = Bivector::standard(1);
        assert_eq!(bracket(&x, &y, &t), Poly::one(2));
        // {x², xy} = 2x·x·{x,y} = 2x²
        let x2 = &x * &x;
        let b = bracket(&x2, &(&x * &y), &t);
        assert_eq!(b, x2.scale(&CycloNum::from_int(2)));
        assert!(t.satisfies_jacobi());
    }

    #[test]
    fn series_inverse() {
        // 1/(1-t)^2 = Σ (k+1) t^k
        let a = [1, -2, 1].map(CycloNum::from_int);
        let b = power_series_inverse(&a, 5);
        for (k, c) in b.iter().enumerate() {
            assert_eq!(*c, CycloNum::from_int(k as i64 + 1));
        }
    }

    #[test]
    fn poly_json_roundtrip() {
        let (x, y) = xy();
        let p = &(&x * &y) + &Poly::constant(2, CycloNum::root_of_unity(3, 1));
        let s = serde_json::to_string(&p).unwrap();
        assert!(
            s.starts_with(r#"{"vars":["x","y"],"terms":[{"exp":[1,1]"#),
            "{s}"
        );
        let q: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
