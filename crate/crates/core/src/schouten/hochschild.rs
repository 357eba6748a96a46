//! Hochschild cochains of finite-dimensional algebras over ℚ.
//!
//! Bracket convention (arity k, l):
//!   f ∘ g = Σ_{i=1}^{k} (−1)^{(i−1)(l−1)} f(a_1, …, g(a_i, …, a_{i+l−1}), …)
//!   [f, g] = f ∘ g − (−1)^{(k−1)(l−1)} g ∘ f
//! so that [m, m] = 2 m∘m vanishes exactly when m is associative.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::exactlin::field::{format_rat, rat_int};
use crate::exactlin::Rat;

/// Multilinear map V_1 ⊗ … ⊗ V_k → W as a dense coefficient tensor,
/// indexed (i_1, …, i_k, out) in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cochain {
    pub in_dims: Vec<usize>,
    pub out_dim: usize,
    #[serde(serialize_with = "ser_rats")]
    pub data: Vec<Rat>,
}

fn ser_rats<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rat))
}

fn multi_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &d in dims {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..d).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect();
    }
    out
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

fn axpy(acc: &mut [Rat], c: &Rat, v: &[Rat]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

impl Cochain {
    pub fn zero(in_dims: Vec<usize>, out_dim: usize) -> Cochain {
        let size = in_dims.iter().product::<usize>() * out_dim;
        Cochain {
            in_dims,
            out_dim,
            data: vec![Rat::zero(); size],
        }
    }

    /// Arity-k cochain on a single space of dimension n.
    pub fn uniform(n: usize, k: usize) -> Cochain {
        Cochain::zero(vec![n; k], n)
    }

    pub fn arity(&self) -> usize {
        self.in_dims.len()
    }

    fn offset(&self, inputs: &[usize]) -> usize {
        let mut o = 0;
        for (i, &d) in inputs.iter().zip(&self.in_dims) {
            o = o * d + i;
        }
        o * self.out_dim
    }

    /// Output vector on basis inputs.
    pub fn value(&self, inputs: &[usize]) -> &[Rat] {
        let o = self.offset(inputs);
        &self.data[o..o + self.out_dim]
    }

    pub fn set(&mut self, inputs: &[usize], v: &[Rat]) {
        let o = self.offset(inputs);
        self.data[o..o + self.out_dim].clone_from_slice(v);
    }

    /// Multilinear evaluation on arbitrary vectors.
    pub fn eval(&self, args: &[Vec<Rat>]) -> Vec<Rat> {
        assert_eq!(args.len(), self.arity());
        let mut out = vec![Rat::zero(); self.out_dim];
        fn rec(
            f: &Cochain,
            args: &[Vec<Rat>],
            pos: usize,
            idx: &mut Vec<usize>,
            c: Rat,
            out: &mut Vec<Rat>,
        ) {
            if pos == args.len() {
                axpy(out, &c, f.value(idx));
                return;
            }
            for (i, a) in args[pos].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                idx.push(i);
                rec(f, args, pos + 1, idx, &c * a, out);
                idx.pop();
            }
        }
        rec(self, args, 0, &mut vec![], Rat::one(), &mut out);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.in_dims, other.in_dims);
        let mut c = self.clone();
        for (a, b) in c.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        c
    }

    pub fn scale(&self, s: &Rat) -> Cochain {
        let mut c = self.clone();
        for a in c.data.iter_mut() {
            *a *= s;
        }
        c
    }

    pub fn random(
        in_dims: Vec<usize>,
        out_dim: usize,
        rng: &mut impl Rng,
        density: f64,
    ) -> Cochain {
        let mut c = Cochain::zero(in_dims, out_dim);
        for a in c.data.iter_mut() {
            if rng.gen_bool(density) {
                *a = rat_int(rng.gen_range(-3..=3));
            }
        }
        c
    }

    /// Vanishes whenever some input is the unit basis vector `unit`.
    pub fn is_reduced(&self, unit: usize) -> bool {
        multi_indices(&self.in_dims)
            .iter()
            .filter(|idx| idx.contains(&unit))
            .all(|idx| self.value(idx).iter().all(Zero::is_zero))
    }

    /// Zeroes every component with a unit input.
    pub fn reduce(&self, unit: usize) -> Cochain {
        let mut c = self.clone();
        let zero = vec![Rat::zero(); self.out_dim];
        for idx in multi_indices(&self.in_dims) {
            if idx.contains(&unit) {
                c.set(&idx, &zero);
            }
        }
        c
    }
}

/// Σ_i (−1)^{(i−1)(l−1)} f(a_1, …, g(a_i, …), …) on uniform cochains.
pub fn compose(f: &Cochain, g: &Cochain) -> Cochain {
    let n = f.out_dim;
    let (k, l) = (f.arity(), g.arity());
    if k == 0 {
        return Cochain::uniform(n, l.saturating_sub(1) + k);
    }
    let mut out = Cochain::uniform(n, k + l - 1);
    for idx in multi_indices(&out.in_dims.clone()) {
        let mut acc = vec![Rat::zero(); n];
        for i in 0..k {
            let inner = g.value(&idx[i..i + l]).to_vec();
            let mut args: Vec<Vec<Rat>> = idx[..i].iter().map(|&a| unit(n, a)).collect();
            args.push(inner);
            args.extend(idx[i + l..].iter().map(|&a| unit(n, a)));
            let sign = if (i * (l + 1)) % 2 == 0 {
                Rat::one()
            } else {
                -Rat::one()
            };
            // (i−1)(l−1) with 1-based i equals i·(l−1) 0-based; parity of i·(l+1) matches
            axpy(&mut acc, &sign, &f.eval(&args));
        }
        out.set(&idx, &acc);
    }
    out
}

/// Gerstenhaber bracket, arity k + l − 1.
pub fn gerstenhaber_bracket(f: &Cochain, g: &Cochain) -> Cochain {
    let (k, l) = (f.arity(), g.arity());
    if k + l == 0 {
        return Cochain::uniform(f.out_dim, 0);
    }
    let a = compose(f, g);
    let b = compose(g, f);
    let sign = if (k + 1) * (l + 1) % 2 == 0 {
        -Rat::one()
    } else {
        Rat::one()
    };
    // (k−1)(l−1) ≡ (k+1)(l+1) mod 2
    a.add(&b.scale(&sign))
}

/// Associator m(m(a,b),c) − m(a,m(b,c)) of a binary operation.
pub fn associator(m: &Cochain) -> Cochain {
    let n = m.out_dim;
    let mut out = Cochain::uniform(n, 3);
    for idx in multi_indices(&[n, n, n]) {
        let ab = m.value(&idx[..2]).to_vec();
        let bc = m.value(&idx[1..]).to_vec();
        let mut v = m.eval(&[ab, unit(n, idx[2])]);
        axpy(&mut v, &-Rat::one(), &m.eval(&[unit(n, idx[0]), bc]));
        out.set(&idx, &v);
    }
    out
}

/// Unital commutative associative algebra with basis element `unit` = 1.
#[derive(Clone, Debug, Serialize)]
pub struct FinAlgebra {
    pub labels: Vec<String>,
    pub unit: usize,
    mult: Cochain,
}

#[derive(Debug, thiserror::Error)]
pub enum AlgebraError {
    #[error("multiplication is not associative")]
    NotAssociative,
    #[error("multiplication is not commutative")]
    NotCommutative,
    #[error("basis element {0} is not a two-sided unit")]
    BadUnit(usize),
}

impl FinAlgebra {
    pub fn new(
        labels: Vec<String>,
        unit: usize,
        mult: Cochain,
    ) -> Result<FinAlgebra, AlgebraError> {
        let n = labels.len();
        assert_eq!(mult.in_dims, vec![n, n]);
        for a in 0..n {
            if mult.value(&[unit, a]) != unit_vec(n, a).as_slice()
                || mult.value(&[a, unit]) != unit_vec(n, a).as_slice()
            {
                return Err(AlgebraError::BadUnit(unit));
            }
            for b in 0..n {
                if mult.value(&[a, b]) != mult.value(&[b, a]) {
                    return Err(AlgebraError::NotCommutative);
                }
            }
        }
        if !associator(&mult).is_zero() {
            return Err(AlgebraError::NotAssociative);
        }
        Ok(FinAlgebra { labels, unit, mult })
    }

    /// ℚ[x]/(x^n) on the basis 1, x, …, x^{n−1}.
    pub fn truncated_poly(var: &str, n: usize) -> FinAlgebra {
        let mut m = Cochain::uniform(n, 2);
        for a in 0..n {
            for b in 0..n {
                if a + b < n {
                    m.set(&[a, b], &unit_vec(n, a + b));
                }
            }
        }
        let labels = (0..n).map(|i| format!("{var}^{i}")).collect();
        FinAlgebra::new(labels, 0, m).expect("truncated polynomial ring")
    }

    /// ℚ[x]/(p(x)) for monic p = x^n + c_{n−1}x^{n−1} + … + c_0 (`low` = c_0..c_{n−1}).
    pub fn monogenic(low: &[Rat]) -> FinAlgebra {
        let n = low.len();
        // x^j for j < 2n−1 reduced mod p
        let mut powers: Vec<Vec<Rat>> = (0..n).map(|i| unit(n, i)).collect();
        for j in n..2 * n - 1 {
            let prev = &powers[j - 1];
            let mut v = vec![Rat::zero(); n];
            v[1..n].clone_from_slice(&prev[..n - 1]);
            let top = prev[n - 1].clone();
            for i in 0..n {
                v[i] -= &top * &low[i];
            }
            powers.push(v);
        }
        let mut m = Cochain::uniform(n, 2);
        for a in 0..n {
            for b in 0..n {
                m.set(&[a, b], &powers[a + b]);
            }
        }
        let labels = (0..n).map(|i| format!("x^{i}")).collect();
        FinAlgebra::new(labels, 0, m).expect("monogenic algebra")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mult(&self) -> &Cochain {
        &self.mult
    }

    pub fn product(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        self.mult.eval(&[a.to_vec(), b.to_vec()])
    }

    /// A ⊗ B with basis (a, b) ↦ a·dim B + b.
    pub fn tensor(&self, other: &FinAlgebra) -> FinAlgebra {
        let (na, nb) = (self.dim(), other.dim());
        let n = na * nb;
        let mut m = Cochain::uniform(n, 2);
        for a1 in 0..na {
            for b1 in 0..nb {
                for a2 in 0..na {
                    for b2 in 0..nb {
                        let pa = self.mult.value(&[a1, a2]);
                        let pb = other.mult.value(&[b1, b2]);
                        m.set(&[a1 * nb + b1, a2 * nb + b2], &kron(pa, pb));
                    }
                }
            }
        }
        let labels = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        FinAlgebra::new(labels, self.unit * nb + other.unit, m).expect("tensor product")
    }

    /// Hochschild coboundary of f ∈ Hom(A^{⊗n}, A).
    pub fn hochschild_differential(&self, f: &Cochain) -> Cochain {
        let n = self.dim();
        let k = f.arity();
        let mut out = Cochain::uniform(n, k + 1);
        for idx in multi_indices(&out.in_dims.clone()) {
            let e = |i: usize| unit(n, idx[i]);
            let mut acc = self.product(&e(0), f.value(&idx[1..]));
            for i in 0..k {
                let mut args: Vec<Vec<Rat>> = (0..i).map(e).collect();
                args.push(self.mult.value(&idx[i..i + 2]).to_vec());
                args.extend((i + 2..=k).map(e));
                let s = if (i + 1) % 2 == 0 {
                    Rat::one()
                } else {
                    -Rat::one()
                };
                axpy(&mut acc, &s, &f.eval(&args));
            }
            let last = self.product(f.value(&idx[..k]), &e(k));
            let s = if (k + 1).is_multiple_of(2) {
                Rat::one()
            } else {
                -Rat::one()
            };
            axpy(&mut acc, &s, &last);
            out.set(&idx, &acc);
        }
        out
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<Rat> {
    unit(n, i)
}

fn kron(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

/// κ_A(ω)(a_1⊗b_1, …, a_k⊗b_k) = ω(a_1, …, a_k) ⊗ b_1⋯b_k.
pub fn kappa(omega: &Cochain, a: &FinAlgebra, b: &FinAlgebra) -> Cochain {
    let (na, nb) = (a.dim(), b.dim());
    let k = omega.arity();
    let mut out = Cochain::uniform(na * nb, k);
    for idx in multi_indices(&out.in_dims.clone()) {
        let aidx: Vec<usize> = idx.iter().map(|i| i / nb).collect();
        let mut bprod = unit(nb, b.unit);
        for i in &idx {
            bprod = b.product(&bprod, &unit(nb, i % nb));
        }
        out.set(&idx, &kron(omega.value(&aidx), &bprod));
    }
    out
}

/// Component (p, q) of the shuffle map: Hom(A^{⊗p} ⊗ B^{⊗q}, A⊗B) with
/// inputs ordered a_1..a_p, b_1..b_q.
///
/// sh(f)(a; b) = Σ_Φ sign(σ_Φ) f(c_1, …, c_{p+q}), with a_i ⊗ 1 at Φ(i) and
/// 1 ⊗ b_j at the complementary positions.
pub fn shuffle_component(f: &Cochain, a: &FinAlgebra, b: &FinAlgebra, p: usize) -> Cochain {
    let (na, nb) = (a.dim(), b.dim());
    let total = f.arity();
    let q = total - p;
    let mut dims = vec![na; p];
    dims.extend(vec![nb; q]);
    let mut out = Cochain::zero(dims.clone(), na * nb);
    let shuffles = subsets_of(total, p);
    for idx in multi_indices(&dims) {
        let mut acc = vec![Rat::zero(); na * nb];
        for phi in &shuffles {
            let mut args = vec![0usize; total];
            let (mut ai, mut bi) = (0, 0);
            for (pos, slot) in args.iter_mut().enumerate() {
                if phi.contains(&pos) {
                    *slot = idx[ai] * nb + b.unit;
                    ai += 1;
                } else {
                    *slot = a.unit * nb + idx[p + bi];
                    bi += 1;
                }
            }
            // inversions between the a-block and b-block
            let inv: usize = phi.iter().enumerate().map(|(i, &pos)| pos - i).sum();
            let s = if inv.is_multiple_of(2) {
                Rat::one()
            } else {
                -Rat::one()
            };
            axpy(&mut acc, &s, f.value(&args));
        }
        out.set(&idx, &acc);
    }
    out
}

/// All components (p = 0..=arity) of sh(f).
pub fn shuffle_map(f: &Cochain, a: &FinAlgebra, b: &FinAlgebra) -> Vec<Cochain> {
    (0..=f.arity())
        .map(|p| shuffle_component(f, a, b, p))
        .collect()
}

fn subsets_of(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
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
    rec(0, n, k, &mut vec![], &mut out);
    out
}

/// [ω, H] for ω ∈ Hom(A^{⊗k}, A) acting on the A-side of H ∈ Hom(A^{⊗p} ⊗ B^{⊗q}, A⊗B).
///
/// Carries the Koszul sign (−1)^{(k−1)q} of passing ω over the q B-inputs,
/// which is what makes sh([κ_A ω, f]) = [ω, sh(f)] hold on the nose.
pub fn bracket_on_first_factor(
    omega: &Cochain,
    h: &Cochain,
    p: usize,
    na: usize,
    nb: usize,
) -> Cochain {
    let k = omega.arity();
    let q = h.arity() - p;
    let newp = p + k - 1;
    let mut dims = vec![na; newp];
    dims.extend(vec![nb; q]);
    let mut out = Cochain::zero(dims.clone(), na * nb);
    if k + p == 0 {
        return out;
    }
    // ω acting on the A-part of an A⊗B vector, with the other A-inputs as basis vectors
    let omega_on = |a_args: &[usize], slot: usize, v: &[Rat]| -> Vec<Rat> {
        let mut res = vec![Rat::zero(); na * nb];
        for bj in 0..nb {
            let apart: Vec<Rat> = (0..na).map(|ai| v[ai * nb + bj].clone()).collect();
            if apart.iter().all(Zero::is_zero) {
                continue;
            }
            let mut args: Vec<Vec<Rat>> = a_args.iter().map(|&x| unit(na, x)).collect();
            args.insert(slot, apart);
            let w = omega.eval(&args);
            for ai in 0..na {
                res[ai * nb + bj] += &w[ai];
            }
        }
        res
    };
    let sign_of = |e: usize| {
        if e.is_multiple_of(2) {
            Rat::one()
        } else {
            -Rat::one()
        }
    };
    for idx in multi_indices(&dims) {
        let (aidx, bidx) = idx.split_at(newp);
        let mut acc = vec![Rat::zero(); na * nb];
        // ω ∘ H
        for i in 0..k {
            if i + p > newp {
                break;
            }
            let mut hin: Vec<usize> = aidx[i..i + p].to_vec();
            hin.extend_from_slice(bidx);
            let inner = h.value(&hin).to_vec();
            let mut rest: Vec<usize> = aidx[..i].to_vec();
            rest.extend_from_slice(&aidx[i + p..]);
            let v = omega_on(&rest, i, &inner);
            axpy(&mut acc, &sign_of(i * (p + 1)), &v);
        }
        // H ∘ ω
        let mut hc = vec![Rat::zero(); na * nb];
        for i in 0..p {
            let w = omega.value(&aidx[i..i + k]).to_vec();
            let mut args: Vec<Vec<Rat>> = aidx[..i].iter().map(|&x| unit(na, x)).collect();
            args.push(w);
            args.extend(aidx[i + k..].iter().map(|&x| unit(na, x)));
            args.extend(bidx.iter().map(|&x| unit(nb, x)));
            axpy(&mut hc, &sign_of(i * (k + 1)), &h.eval(&args));
        }
        axpy(&mut acc, &-sign_of((k + 1) * (p + 1)), &hc);
        if (k + 1) * q % 2 == 1 {
            acc.iter_mut().for_each(|x| *x = -x.clone());
        }
        out.set(&idx, &acc);
    }
    out
}

/// Tensor differential on Hom(A^{⊗p} ⊗ B^{⊗q}, A⊗B): the pair
/// (δ_A H, (−1)^p δ_B H) landing in bidegrees (p+1, q) and (p, q+1).
pub fn tensor_differential(
    h: &Cochain,
    p: usize,
    a: &FinAlgebra,
    b: &FinAlgebra,
) -> (Cochain, Cochain) {
    let (na, nb) = (a.dim(), b.dim());
    let q = h.arity() - p;
    let mut dims_a = vec![na; p + 1];
    dims_a.extend(vec![nb; q]);
    let mut da = Cochain::zero(dims_a.clone(), na * nb);
    let act_a = |x: usize, v: &[Rat], left: bool| -> Vec<Rat> {
        let mut r = vec![Rat::zero(); na * nb];
        for ai in 0..na {
            for bj in 0..nb {
                let c = &v[ai * nb + bj];
                if c.is_zero() {
                    continue;
                }
                let prod = if left {
                    a.mult.value(&[x, ai])
                } else {
                    a.mult.value(&[ai, x])
                };
                for (ak, pc) in prod.iter().enumerate() {
                    r[ak * nb + bj] += c * pc;
                }
            }
        }
        r
    };
    let act_b = |y: usize, v: &[Rat], left: bool| -> Vec<Rat> {
        let mut r = vec![Rat::zero(); na * nb];
        for ai in 0..na {
            for bj in 0..nb {
                let c = &v[ai * nb + bj];
                if c.is_zero() {
                    continue;
                }
                let prod = if left {
                    b.mult.value(&[y, bj])
                } else {
                    b.mult.value(&[bj, y])
                };
                for (bk, pc) in prod.iter().enumerate() {
                    r[ai * nb + bk] += c * pc;
                }
            }
        }
        r
    };
    let sgn = |e: usize| {
        if e.is_multiple_of(2) {
            Rat::one()
        } else {
            -Rat::one()
        }
    };
    for idx in multi_indices(&dims_a) {
        let (ai, bi) = idx.split_at(p + 1);
        let with_b = |av: &[usize]| {
            let mut v = av.to_vec();
            v.extend_from_slice(bi);
            v
        };
        let mut acc = act_a(ai[0], h.value(&with_b(&ai[1..])), true);
        for i in 0..p {
            let mut args: Vec<Vec<Rat>> = ai[..i].iter().map(|&x| unit(na, x)).collect();
            args.push(a.mult.value(&ai[i..i + 2]).to_vec());
            args.extend(ai[i + 2..].iter().map(|&x| unit(na, x)));
            args.extend(bi.iter().map(|&x| unit(nb, x)));
            axpy(&mut acc, &sgn(i + 1), &h.eval(&args));
        }
        let last = act_a(ai[p], h.value(&with_b(&ai[..p])), false);
        axpy(&mut acc, &sgn(p + 1), &last);
        da.set(&idx, &acc);
    }
    let mut dims_b = vec![na; p];
    dims_b.extend(vec![nb; q + 1]);
    let mut db = Cochain::zero(dims_b.clone(), na * nb);
    for idx in multi_indices(&dims_b) {
        let (ai, bi) = idx.split_at(p);
        let with_a = |bv: &[usize]| {
            let mut v = ai.to_vec();
            v.extend_from_slice(bv);
            v
        };
        let mut acc = act_b(bi[0], h.value(&with_a(&bi[1..])), true);
        for j in 0..q {
            let mut args: Vec<Vec<Rat>> = ai.iter().map(|&x| unit(na, x)).collect();
            args.extend(bi[..j].iter().map(|&x| unit(nb, x)));
            args.push(b.mult.value(&bi[j..j + 2]).to_vec());
            args.extend(bi[j + 2..].iter().map(|&x| unit(nb, x)));
            axpy(&mut acc, &sgn(j + 1), &h.eval(&args));
        }
        let last = act_b(bi[q], h.value(&with_a(&bi[..q])), false);
        axpy(&mut acc, &sgn(q + 1), &last);
        db.set(&idx, &acc.iter().map(|x| x * sgn(p)).collect::<Vec<_>>());
    }
    (da, db)
}

/// Random reduced cochain of the given arity.
pub fn random_reduced(a: &FinAlgebra, k: usize, rng: &mut impl Rng) -> Cochain {
    Cochain::random(vec![a.dim(); k], a.dim(), rng, 0.6).reduce(a.unit)
}

/// sh([κ_A ω, f]) = [ω, sh(f)] componentwise; components of sh([κ_A ω, f]) with
/// fewer than k − 1 A-inputs must vanish.
pub fn check_tau(
    omega: &Cochain,
    f: &Cochain,
    a: &FinAlgebra,
    b: &FinAlgebra,
) -> Result<(), String> {
    let k = omega.arity();
    let lhs_full = gerstenhaber_bracket(&kappa(omega, a, b), f);
    let lhs = shuffle_map(&lhs_full, a, b);
    let rhs = shuffle_map(f, a, b);
    for (pp, l) in lhs.iter().enumerate() {
        let expected = if pp + 1 >= k && pp + 1 - k <= f.arity() {
            bracket_on_first_factor(omega, &rhs[pp + 1 - k], pp + 1 - k, a.dim(), b.dim())
        } else {
            Cochain::zero(l.in_dims.clone(), l.out_dim)
        };
        if *l != expected {
            return Err(format!(
                "tau fails for arity {k} / {} at A-degree {pp}",
                f.arity()
            ));
        }
    }
    Ok(())
}

/// sh(δf) = D sh(f), with D the tensor differential, on every component.
pub fn check_chain_map(
    f: &Cochain,
    ab: &FinAlgebra,
    a: &FinAlgebra,
    b: &FinAlgebra,
) -> Result<(), String> {
    let n = f.arity();
    let lhs = shuffle_map(&ab.hochschild_differential(f), a, b);
    let comps = shuffle_map(f, a, b);
    let mut rhs: Vec<Cochain> = lhs
        .iter()
        .map(|c| Cochain::zero(c.in_dims.clone(), c.out_dim))
        .collect();
    for (p, h) in comps.iter().enumerate() {
        let (da, db) = tensor_differential(h, p, a, b);
        rhs[p + 1] = rhs[p + 1].add(&da);
        rhs[p] = rhs[p].add(&db);
    }
    for p in 0..=n + 1 {
        if lhs[p] != rhs[p] {
            return Err(format!("chain map fails at arity {n}, A-degree {p}"));
        }
    }
    Ok(())
}

/// Graded antisymmetry and graded Jacobi with |f| = arity − 1. All arities
/// must be ≥ 1 (a bracket of two 0-cochains would have arity −1).
pub fn check_gerstenhaber(f: &Cochain, g: &Cochain, h: &Cochain) -> Result<(), String> {
    assert!(
        f.arity() > 0 && g.arity() > 0 && h.arity() > 0,
        "arity-0 cochain"
    );
    let deg = |c: &Cochain| c.arity() as i64 - 1;
    let sgn = |e: i64| {
        if e.rem_euclid(2) == 0 {
            Rat::one()
        } else {
            -Rat::one()
        }
    };
    let (df, dg, dh) = (deg(f), deg(g), deg(h));
    let fg = gerstenhaber_bracket(f, g);
    let gf = gerstenhaber_bracket(g, f);
    if fg.add(&gf.scale(&sgn(df * dg))) != Cochain::zero(fg.in_dims.clone(), fg.out_dim) {
        return Err("graded antisymmetry fails".into());
    }
    // (−1)^{|f||h|}[f,[g,h]] + cyclic = 0
    let t1 = gerstenhaber_bracket(f, &gerstenhaber_bracket(g, h)).scale(&sgn(df * dh));
    let t2 = gerstenhaber_bracket(g, &gerstenhaber_bracket(h, f)).scale(&sgn(dg * df));
    let t3 = gerstenhaber_bracket(h, &gerstenhaber_bracket(f, g)).scale(&sgn(dh * dg));
    if !t1.add(&t2).add(&t3).is_zero() {
        return Err("graded Jacobi fails".into());
    }
    Ok(())
}

/// [m, m] = 0 exactly when m is associative.
pub fn check_mm_associativity(m: &Cochain) -> Result<(), String> {
    let mm_zero = gerstenhaber_bracket(m, m).is_zero();
    let assoc = associator(m).is_zero();
    if mm_zero != assoc {
        return Err(format!("[m,m]=0 is {mm_zero} but associativity is {assoc}"));
    }
    Ok(())
}

/// Random commutative algebra ℚ[x]/(p) of dimension n, with a unit-fixing
/// change of basis so structure constants are not monomial.
pub fn random_algebra(n: usize, rng: &mut impl Rng) -> FinAlgebra {
    let low: Vec<Rat> = (0..n).map(|_| rat_int(rng.gen_range(-2..=2))).collect();
    let base = FinAlgebra::monogenic(&low);
    // e_0 = 1, e_i = x^i + Σ_{j<i} c_ij x^j
    let mut p: Vec<Vec<Rat>> = (0..n).map(|i| unit(n, i)).collect();
    for (i, row) in p.iter_mut().enumerate().skip(1) {
        for v in row.iter_mut().take(i) {
            *v = rat_int(rng.gen_range(-1..=1));
        }
    }
    // products of new basis elements, expressed back in the new basis
    let to_new = |v: Vec<Rat>| -> Vec<Rat> {
        // p is unit lower-triangular in the sense e_i = x^i + lower terms: back-substitute from the top
        let mut v = v;
        let mut out = vec![Rat::zero(); n];
        for i in (0..n).rev() {
            let c = v[i].clone();
            if !c.is_zero() {
                for (j, pj) in p[i].iter().enumerate() {
                    v[j] -= &c * pj;
                }
            }
            out[i] = c;
        }
        out
    };
    let mut m = Cochain::uniform(n, 2);
    for i in 0..n {
        for j in 0..n {
            m.set(&[i, j], &to_new(base.product(&p[i], &p[j])));
        }
    }
    let labels = (0..n).map(|i| format!("e{i}")).collect();
    FinAlgebra::new(labels, 0, m).expect("basis change preserves the algebra axioms")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dual() -> (FinAlgebra, FinAlgebra, FinAlgebra) {
        let a = FinAlgebra::truncated_poly("x", 2);
        let b = FinAlgebra::truncated_poly("y", 2);
        let ab = a.tensor(&b);
        (a, b, ab)
    }

    #[test]
    fn mm_vanishes_iff_associative() {
        let a = FinAlgebra::truncated_poly("x", 3);
        assert!(gerstenhaber_bracket(a.mult(), a.mult()).is_zero());
        let mut bad = a.mult().clone();
        bad.set(&[1, 1], &[Rat::one(), Rat::zero(), Rat::one()]);
        assert!(!gerstenhaber_bracket(&bad, &bad).is_zero());
        check_mm_associativity(&bad).unwrap();
    }

    #[test]
    fn bracket_with_multiplication_is_coboundary() {
        // [m, f] = ±δf with this sign convention
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_algebra(3, &mut rng);
        for k in 0..3 {
            let f = Cochain::random(vec![3; k], 3, &mut rng, 0.7);
            let mf = gerstenhaber_bracket(a.mult(), &f);
            let d = a.hochschild_differential(&f);
            let s = if k % 2 == 0 { -Rat::one() } else { Rat::one() };
            assert_eq!(mf, d.scale(&s), "arity {k}");
        }
    }

    #[test]
    fn differential_squares_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_algebra(3, &mut rng);
        let f = Cochain::random(vec![3; 2], 3, &mut rng, 0.7);
        assert!(a
            .hochschild_differential(&a.hochschild_differential(&f))
            .is_zero());
    }

    #[test]
    fn gerstenhaber_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let n = rng.gen_range(2..=3);
            let ar: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=2)).collect();
            let c: Vec<Cochain> = ar
                .iter()
                .map(|&k| Cochain::random(vec![n; k], n, &mut rng, 0.6))
                .collect();
            check_gerstenhaber(&c[0], &c[1], &c[2]).unwrap();
        }
    }

    #[test]
    fn kappa_definition() {
        let (a, b, _) = dual();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = Cochain::random(vec![2, 2], 2, &mut rng, 0.9);
        let k = kappa(&f, &a, &b);
        // (x⊗y, x⊗1): f(x,x) ⊗ y
        let v = k.value(&[3, 2]);
        let fx = f.value(&[1, 1]);
        assert_eq!(v, kron(fx, &unit(2, 1)).as_slice());
    }

    #[test]
    fn shuffle_trivial_components() {
        let (a, b, _) = dual();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = Cochain::random(vec![4, 4], 4, &mut rng, 0.8);
        let sh = shuffle_map(&f, &a, &b);
        // p = 2: plain restriction to a_i ⊗ 1
        assert_eq!(sh[2].value(&[1, 1]), f.value(&[2, 2]));
        assert_eq!(sh[0].value(&[1, 1]), f.value(&[1, 1]));
        // p = 1: f(a⊗1, 1⊗b) − f(1⊗b, a⊗1)
        let mut want = f.value(&[2, 1]).to_vec();
        axpy(&mut want, &-Rat::one(), f.value(&[1, 2]));
        assert_eq!(sh[1].value(&[1, 1]), want.as_slice());
    }

    #[test]
    fn tau_identity() {
        let (a, b, _) = dual();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in 1..=2 {
            for n in 0..=3 {
                let omega = random_reduced(&a, k, &mut rng);
                let f = Cochain::random(vec![4; n], 4, &mut rng, 0.5);
                check_tau(&omega, &f, &a, &b).unwrap();
            }
        }
    }

    #[test]
    fn shuffle_is_chain_map() {
        let (a, b, ab) = dual();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..=2 {
            let f = Cochain::random(vec![4; n], 4, &mut rng, 0.6);
            check_chain_map(&f, &ab, &a, &b).unwrap();
        }
    }
}
