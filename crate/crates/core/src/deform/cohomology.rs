//! Windowed Poisson cohomology of a truncated graded Poisson algebra.
//!
//! Cochains are computed on an algebra tabulated to an internal degree D, but
//! classes are read off after restricting to inputs of total degree ≤ W (the
//! window): dim = dim res_W(Z) − dim res_W(B). Conditions that would involve
//! degrees past D are dropped, so the top of the internal range carries spurious
//! cocycles; the slack D − W keeps them out of the certified degrees.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::algebra::TruncatedGradedAlgebra;
use super::{DeformError, SVec};
use crate::exactlin::field::format_rat;
use crate::exactlin::linalg::{sparse_kernel, sparse_solve, SparseEchelon};
use crate::exactlin::Rat;

const CONST: usize = usize::MAX;

/// Linear expression: (target basis index, unknown or `CONST`, coefficient).
type Expr = Vec<(usize, usize, Rat)>;

fn neg(e: Option<Expr>) -> Option<Expr> {
    e.map(|v| v.into_iter().map(|(t, x, c)| (t, x, -c)).collect())
}

fn constant(v: Option<SVec>) -> Option<Expr> {
    v.map(|v| v.into_iter().map(|(t, c)| (t, CONST, c)).collect())
}

/// φ/ψ unknowns of one degree on pairs of input degree ≤ `window`.
struct Unknowns<'a> {
    alg: &'a TruncatedGradedAlgebra,
    m: i64,
    window: usize,
    phi_base: Vec<usize>,
    psi_base: Vec<usize>,
    /// (is_psi, i, j, target) with i ≤ j (i < j for ψ)
    keys: Vec<(bool, usize, usize, usize)>,
}

enum Slot {
    Out,
    Zero,
    Vars(usize, usize),
}

impl<'a> Unknowns<'a> {
    fn new(alg: &'a TruncatedGradedAlgebra, m: i64, window: usize) -> Self {
        let n = alg.len();
        let mut u = Unknowns {
            alg,
            m,
            window,
            phi_base: vec![usize::MAX; n * n],
            psi_base: vec![usize::MAX; n * n],
            keys: vec![],
        };
        for psi in [false, true] {
            for i in 0..n {
                for j in i..n {
                    if psi && i == j {
                        continue;
                    }
                    if let Slot::Vars(_, t) = u.slot(psi, i, j) {
                        let base = u.keys.len();
                        for tt in alg.range(t) {
                            u.keys.push((psi, i, j, tt));
                        }
                        let tab = if psi {
                            &mut u.psi_base
                        } else {
                            &mut u.phi_base
                        };
                        tab[i * n + j] = base;
                        tab[j * n + i] = base;
                    }
                }
            }
        }
        u
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn slot(&self, psi: bool, i: usize, j: usize) -> Slot {
        let s = self.alg.degree(i) + self.alg.degree(j);
        if s > self.window {
            return Slot::Out;
        }
        if psi && i == j {
            return Slot::Zero;
        }
        let shift = if psi {
            self.alg.bracket_shift() as i64
        } else {
            0
        };
        let t = s as i64 + self.m - shift;
        if t < 0 {
            Slot::Zero
        } else if t as usize > self.alg.max_degree() {
            Slot::Out
        } else {
            let n = self.alg.len();
            let base = if psi {
                self.psi_base[i * n + j]
            } else {
                self.phi_base[i * n + j]
            };
            Slot::Vars(base, t as usize)
        }
    }

    fn at(&self, psi: bool, i: usize, j: usize) -> Option<Expr> {
        match self.slot(psi, i, j) {
            Slot::Out => None,
            Slot::Zero => Some(vec![]),
            Slot::Vars(base, t) => {
                let sign = if psi && i > j {
                    -Rat::one()
                } else {
                    Rat::one()
                };
                Some(
                    self.alg
                        .range(t)
                        .enumerate()
                        .map(|(k, tt)| (tt, base + k, sign.clone()))
                        .collect(),
                )
            }
        }
    }

    /// Σ_k v_k · X(a, b_k) for X = φ or ψ.
    fn left(&self, psi: bool, a: usize, v: Option<&SVec>) -> Option<Expr> {
        let mut out = vec![];
        for (k, c) in v? {
            for (t, x, e) in self.at(psi, a, *k)? {
                out.push((t, x, e * c));
            }
        }
        Some(out)
    }

    fn lmul(&self, a: usize, e: Option<Expr>) -> Option<Expr> {
        let mut out = vec![];
        for (t, x, c) in e? {
            for (t2, y) in self.alg.mul(a, t)? {
                out.push((*t2, x, &c * y));
            }
        }
        Some(out)
    }

    fn lbr(&self, a: usize, e: Option<Expr>) -> Option<Expr> {
        let mut out = vec![];
        for (t, x, c) in e? {
            for (t2, y) in self.alg.br(a, t)? {
                out.push((*t2, x, &c * y));
            }
        }
        Some(out)
    }

    /// First-order associativity, Leibniz and Jacobi on triples of input degree
    /// ≤ `triple_window`, with optional quadratic sources Σ B(x, y) over the
    /// given (outer, inner) pairs.
    fn equations(
        &self,
        triple_window: usize,
        source: Option<&[(&CochainPair, &CochainPair)]>,
    ) -> Vec<(SVec, Rat)> {
        let alg = self.alg;
        let n = alg.len();
        let rows: Vec<Vec<(SVec, Rat)>> = (0..n)
            .into_par_iter()
            .map(|a| {
                let mut out = vec![];
                for b in 0..n {
                    for c in 0..n {
                        if alg.degree(a) + alg.degree(b) + alg.degree(c) > triple_window {
                            continue;
                        }
                        let (ab, bc) = (alg.mul(a, b), alg.mul(b, c));
                        if a <= c {
                            let mut t = vec![
                                self.left(false, a, bc),
                                self.lmul(a, self.at(false, b, c)),
                                neg(self.left(false, c, ab)),
                                neg(self.lmul(c, self.at(false, a, b))),
                            ];
                            for (x, y) in source.unwrap_or(&[]) {
                                t.push(constant(
                                    x.assoc_source(y, alg, a, b, c).map(|v| scale(&v, -1)),
                                ));
                            }
                            push(&mut out, t);
                        }
                        if b <= c {
                            let mut t = vec![
                                self.lbr(a, self.at(false, b, c)),
                                self.left(true, a, bc),
                                neg(self.left(false, c, alg.br(a, b))),
                                neg(self.lmul(c, self.at(true, a, b))),
                                neg(self.left(false, b, alg.br(a, c))),
                                neg(self.lmul(b, self.at(true, a, c))),
                            ];
                            for (x, y) in source.unwrap_or(&[]) {
                                t.push(constant(x.leibniz_source(y, alg, a, b, c)));
                            }
                            push(&mut out, t);
                        }
                        if a <= b && a <= c {
                            let mut t = vec![];
                            for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                                t.push(self.left(true, x, alg.br(y, z)));
                                t.push(self.lbr(x, self.at(true, y, z)));
                            }
                            for (x, y) in source.unwrap_or(&[]) {
                                t.push(constant(x.jacobi_source(y, alg, a, b, c)));
                            }
                            push(&mut out, t);
                        }
                    }
                }
                out
            })
            .collect();
        rows.into_iter().flatten().collect()
    }

    fn to_pair(&self, values: &[(usize, Rat)]) -> CochainPair {
        let mut phi: BTreeMap<(usize, usize), SVec> = BTreeMap::new();
        let mut psi: BTreeMap<(usize, usize), SVec> = BTreeMap::new();
        for (v, c) in values {
            let (is_psi, i, j, t) = self.keys[*v];
            let tab = if is_psi { &mut psi } else { &mut phi };
            tab.entry((i, j)).or_default().push((t, c.clone()));
        }
        for v in phi.values_mut().chain(psi.values_mut()) {
            v.sort_by_key(|e| e.0);
        }
        CochainPair {
            m: self.m,
            window: self.window,
            bracket_shift: self.alg.bracket_shift(),
            phi,
            psi,
        }
    }

    fn coords_of(&self, g: &CochainPair) -> Result<SVec, DeformError> {
        let mut out = vec![];
        for (psi, tab) in [(false, &g.phi), (true, &g.psi)] {
            for (&(i, j), v) in tab {
                match self.slot(psi, i, j) {
                    Slot::Vars(base, t) => {
                        let start = self.alg.range(t).start;
                        out.extend(v.iter().map(|(tt, c)| (base + tt - start, c.clone())));
                    }
                    _ if v.is_empty() => {}
                    _ => return Err(DeformError::Shape),
                }
            }
        }
        out.sort_by_key(|e| e.0);
        Ok(out)
    }
}

fn scale(v: &SVec, s: i64) -> SVec {
    v.iter()
        .map(|(k, c)| (*k, c * Rat::from_integer(s.into())))
        .collect()
}

fn push(out: &mut Vec<(SVec, Rat)>, terms: Vec<Option<Expr>>) {
    if terms.iter().any(Option::is_none) {
        return;
    }
    let mut acc: BTreeMap<usize, BTreeMap<usize, Rat>> = BTreeMap::new();
    for (t, x, c) in terms.into_iter().flatten().flatten() {
        *acc.entry(t).or_default().entry(x).or_insert_with(Rat::zero) += c;
    }
    for (_, row) in acc {
        let mut rhs = Rat::zero();
        let mut r = vec![];
        for (x, c) in row {
            if c.is_zero() {
                continue;
            }
            if x == CONST {
                rhs = -c;
            } else {
                r.push((x, c));
            }
        }
        if !r.is_empty() || !rhs.is_zero() {
            out.push((r, rhs));
        }
    }
}

/// Symmetric φ: A_p ⊗ A_q → A_{p+q+m} and skew ψ: A_p ⊗ A_q → A_{p+q+m−l},
/// stored on basis pairs (i ≤ j, resp. i < j) of input degree ≤ `window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CochainPair {
    pub m: i64,
    pub window: usize,
    pub bracket_shift: usize,
    #[serde(serialize_with = "ser_table")]
    pub phi: BTreeMap<(usize, usize), SVec>,
    #[serde(serialize_with = "ser_table")]
    pub psi: BTreeMap<(usize, usize), SVec>,
}

#[derive(Serialize)]
struct Entry {
    inputs: [usize; 2],
    value: Vec<(usize, String)>,
}

fn ser_table<S: Serializer>(t: &BTreeMap<(usize, usize), SVec>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        t.iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(&(i, j), v)| Entry {
                inputs: [i, j],
                value: v.iter().map(|(k, c)| (*k, format_rat(c))).collect(),
            }),
    )
}

impl CochainPair {
    pub fn is_zero(&self) -> bool {
        self.phi
            .values()
            .chain(self.psi.values())
            .all(Vec::is_empty)
    }

    fn phi_at(&self, alg: &TruncatedGradedAlgebra, i: usize, j: usize) -> Option<SVec> {
        if alg.degree(i) + alg.degree(j) > self.window {
            return None;
        }
        Some(
            self.phi
                .get(&(i.min(j), i.max(j)))
                .cloned()
                .unwrap_or_default(),
        )
    }

    fn psi_at(&self, alg: &TruncatedGradedAlgebra, i: usize, j: usize) -> Option<SVec> {
        if alg.degree(i) + alg.degree(j) > self.window {
            return None;
        }
        let v = self
            .psi
            .get(&(i.min(j), i.max(j)))
            .cloned()
            .unwrap_or_default();
        Some(if i > j { scale(&v, -1) } else { v })
    }

    /// Bilinear extension of φ (or ψ) to vectors.
    fn eval(&self, alg: &TruncatedGradedAlgebra, psi: bool, u: &SVec, v: &SVec) -> Option<SVec> {
        let mut acc = BTreeMap::new();
        for (i, a) in u {
            for (j, b) in v {
                let w = if psi {
                    self.psi_at(alg, *i, *j)?
                } else {
                    self.phi_at(alg, *i, *j)?
                };
                super::algebra::accumulate(&mut acc, &w, &(a * b));
            }
        }
        Some(super::algebra::finish(acc))
    }

    fn unit(i: usize) -> SVec {
        vec![(i, Rat::one())]
    }

    /// φ_x(φ_y(a,b),c) − φ_x(a,φ_y(b,c)) with x = self, y = inner.
    fn assoc_source(
        &self,
        inner: &CochainPair,
        alg: &TruncatedGradedAlgebra,
        a: usize,
        b: usize,
        c: usize,
    ) -> Option<SVec> {
        let l = self.eval(alg, false, &inner.phi_at(alg, a, b)?, &Self::unit(c))?;
        let r = self.eval(alg, false, &Self::unit(a), &inner.phi_at(alg, b, c)?)?;
        Some(super::algebra::add(&l, &scale(&r, -1)))
    }

    /// ψ_x(a,φ_y(b,c)) − φ_y(ψ_x(a,b),c) − φ_y(b,ψ_x(a,c)).
    fn leibniz_source(
        &self,
        inner: &CochainPair,
        alg: &TruncatedGradedAlgebra,
        a: usize,
        b: usize,
        c: usize,
    ) -> Option<SVec> {
        let t1 = self.eval(alg, true, &Self::unit(a), &inner.phi_at(alg, b, c)?)?;
        let t2 = inner.eval(alg, false, &self.psi_at(alg, a, b)?, &Self::unit(c))?;
        let t3 = inner.eval(alg, false, &Self::unit(b), &self.psi_at(alg, a, c)?)?;
        Some(super::algebra::add(
            &t1,
            &scale(&super::algebra::add(&t2, &t3), -1),
        ))
    }

    /// Σ_cyc ψ_x(a, ψ_y(b,c)).
    fn jacobi_source(
        &self,
        inner: &CochainPair,
        alg: &TruncatedGradedAlgebra,
        a: usize,
        b: usize,
        c: usize,
    ) -> Option<SVec> {
        let mut acc = vec![];
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            let t = self.eval(alg, true, &Self::unit(x), &inner.psi_at(alg, y, z)?)?;
            acc = super::algebra::add(&acc, &t);
        }
        Some(acc)
    }
}

/// res_W(ker M): eliminate the out-of-window unknowns (ordered first), then the
/// echelon rows left in window coordinates cut out the restricted kernel.
fn restricted_kernel(eqs: Vec<SVec>, lo: &[Option<usize>], n_lo: usize) -> Vec<SVec> {
    let mut col = vec![0; lo.len()];
    let mut n_hi = 0;
    for (v, l) in lo.iter().enumerate() {
        col[v] = match l {
            Some(l) => usize::MAX - n_lo + l,
            None => {
                n_hi += 1;
                n_hi - 1
            }
        };
    }
    let shift = |c: usize| {
        if c >= usize::MAX - n_lo {
            c - (usize::MAX - n_lo) + n_hi
        } else {
            c
        }
    };
    let rows: Vec<SVec> = eqs
        .into_par_iter()
        .map(|r| {
            let mut r: SVec = r.into_iter().map(|(k, c)| (shift(col[k]), c)).collect();
            r.sort_by_key(|e| e.0);
            r
        })
        .collect();
    let mut ech = SparseEchelon::<Rat>::new();
    for r in normalize_rows(rows) {
        ech.insert(r);
    }
    let lo_rows: Vec<SVec> = ech
        .rows()
        .filter(|(c, _)| *c >= n_hi)
        .map(|(_, r)| r.iter().map(|(k, c)| (k - n_hi, c.clone())).collect())
        .collect();
    sparse_kernel(lo_rows, n_lo)
}

/// Scales rows to leading coefficient 1, drops duplicates, sparsest first.
fn normalize_rows(rows: Vec<SVec>) -> Vec<SVec> {
    let mut rows: Vec<SVec> = rows
        .into_par_iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let inv = r[0].1.recip();
            r.into_iter().map(|(k, c)| (k, c * &inv)).collect()
        })
        .collect();
    rows.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    rows.dedup();
    rows
}

/// Keeps the restricted cocycles that extend the restricted coboundaries.
fn classes(restricted: Vec<SVec>, coboundaries: Vec<SVec>) -> Vec<SVec> {
    let mut ech = SparseEchelon::<Rat>::new();
    for b in coboundaries {
        ech.insert(b);
    }
    restricted
        .into_iter()
        .filter(|r| ech.insert(r.clone()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HpDegree {
    pub m: i64,
    pub dim: usize,
}

/// Degree outside the certified range; `dim` is only filled when scanned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UncertifiedDegree {
    pub m: i64,
    pub dim: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HpReport {
    pub k: usize,
    pub window: usize,
    pub internal_degree: usize,
    pub certified: Vec<HpDegree>,
    pub uncertified: Vec<UncertifiedDegree>,
}

impl HpReport {
    pub fn certified_total(&self) -> usize {
        self.certified.iter().map(|d| d.dim).sum()
    }
}

/// Window W, internal degree D and the certified range [−W, D − W − 2g].
#[derive(Clone, Copy, Debug)]
pub struct WindowPlan {
    pub window: usize,
    pub internal: usize,
    pub certified_max: i64,
    /// Also compute dims in uncertified degrees.
    pub scan_uncertified: bool,
}

impl WindowPlan {
    /// Slack 2g for the maximal generator degree g.
    pub fn for_generator_degree(window: usize, g: usize) -> WindowPlan {
        WindowPlan::with_slack(window, 2 * g, g)
    }

    pub fn with_slack(window: usize, slack: usize, g: usize) -> WindowPlan {
        WindowPlan {
            window,
            internal: window + slack,
            certified_max: slack as i64 - 2 * g as i64,
            scan_uncertified: false,
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        -(self.window as i64)..=self.window as i64
    }

    pub fn is_certified(&self, m: i64) -> bool {
        m <= self.certified_max
    }

    fn scanned(&self) -> Vec<i64> {
        self.degrees()
            .filter(|&m| self.scan_uncertified || self.is_certified(m))
            .collect()
    }
}

/// HP² classes of degree m: representatives restricted to the window.
pub fn hp2_degree(alg: &TruncatedGradedAlgebra, m: i64, window: usize) -> Vec<CochainPair> {
    let u = Unknowns::new(alg, m, alg.max_degree());
    let eqs: Vec<SVec> = u
        .equations(alg.max_degree(), None)
        .into_iter()
        .map(|e| e.0)
        .collect();
    // window coordinates
    let w = Unknowns::new(alg, m, window);
    let lo: Vec<Option<usize>> = u
        .keys
        .iter()
        .map(|&(psi, i, j, t)| {
            if alg.degree(i) + alg.degree(j) > window {
                return None;
            }
            match w.slot(psi, i, j) {
                Slot::Vars(base, tt) => Some(base + t - alg.range(tt).start),
                _ => None,
            }
        })
        .collect();
    let z = restricted_kernel(eqs, &lo, w.len());
    let b = coboundaries2(alg, &w, m);
    classes(z, b).iter().map(|r| w.to_pair(r)).collect()
}

/// (df, δf) for each elementary degree-m map f: b_u ↦ b_t, in window coordinates.
fn coboundaries2(alg: &TruncatedGradedAlgebra, w: &Unknowns, m: i64) -> Vec<SVec> {
    let window = w.window;
    let mut f_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for u in 0..alg.len() {
        let d = alg.degree(u) as i64 + m;
        if alg.degree(u) <= window && d >= 0 && d as usize <= alg.max_degree() {
            for t in alg.range(d as usize) {
                let k = f_index.len();
                f_index.insert((u, t), k);
            }
        }
    }
    // f(b_u) as a linear expression in the f-unknowns
    let f_of = |u: usize| -> Vec<(usize, usize)> {
        let d = alg.degree(u) as i64 + m;
        if d < 0 || d as usize > alg.max_degree() {
            return vec![];
        }
        alg.range(d as usize)
            .map(|t| (t, f_index[&(u, t)]))
            .collect()
    };
    let mut rows: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); f_index.len()];
    let mut put = |fvar: usize, col: usize, c: Rat| {
        *rows[fvar].entry(col).or_insert_with(Rat::zero) += c;
    };
    for (vi, &(psi, i, j, t)) in w.keys.iter().enumerate() {
        let op = |x: usize, y: usize| if psi { alg.br(x, y) } else { alg.mul(x, y) };
        // f(b_i) ∘ b_j + b_i ∘ f(b_j) − f(b_i ∘ b_j)
        for (s, fv) in f_of(i) {
            let prod = op(s, j).expect("coboundary term within the table");
            if let Some((_, c)) = prod.iter().find(|e| e.0 == t) {
                put(fv, vi, c.clone());
            }
        }
        for (s, fv) in f_of(j) {
            let prod = op(i, s).expect("coboundary term within the table");
            if let Some((_, c)) = prod.iter().find(|e| e.0 == t) {
                put(fv, vi, c.clone());
            }
        }
        if let Some(v) = op(i, j) {
            for (k, c) in v {
                if let Some(&fv) = f_index.get(&(*k, t)) {
                    put(fv, vi, -c.clone());
                }
            }
        }
    }
    rows.into_iter()
        .map(|r| r.into_iter().filter(|(_, c)| !c.is_zero()).collect())
        .collect()
}

/// Windowed HP²: certified and uncertified dimensions per degree.
pub fn hp2_first_order(alg: &TruncatedGradedAlgebra, plan: WindowPlan) -> HpReport {
    assert_eq!(
        alg.max_degree(),
        plan.internal,
        "algebra must be built to the internal degree"
    );
    let dims: Vec<HpDegree> = plan
        .scanned()
        .into_par_iter()
        .map(|m| HpDegree {
            m,
            dim: hp2_degree(alg, m, plan.window).len(),
        })
        .collect();
    split(2, plan, dims)
}

fn split(k: usize, plan: WindowPlan, dims: Vec<HpDegree>) -> HpReport {
    let (certified, scanned): (Vec<HpDegree>, Vec<HpDegree>) =
        dims.into_iter().partition(|d| plan.is_certified(d.m));
    let uncertified = plan
        .degrees()
        .filter(|&m| !plan.is_certified(m))
        .map(|m| UncertifiedDegree {
            m,
            dim: scanned.iter().find(|d| d.m == m).map(|d| d.dim),
        })
        .collect();
    HpReport {
        k,
        window: plan.window,
        internal_degree: plan.internal,
        certified,
        uncertified,
    }
}

/// HP¹ classes of degree m: Poisson derivations modulo Hamiltonian ones.
pub fn hp1_degree(alg: &TruncatedGradedAlgebra, m: i64, window: usize) -> usize {
    let top = alg.max_degree();
    // unknowns f(b_u) ∈ A_{deg u + m}
    let mut base = vec![usize::MAX; alg.len()];
    let mut count = 0;
    let mut lo = vec![];
    for u in 0..alg.len() {
        let d = alg.degree(u) as i64 + m;
        if d >= 0 && d as usize <= top {
            base[u] = count;
            for _ in alg.range(d as usize) {
                lo.push((alg.degree(u) <= window).then_some(()));
                count += 1;
            }
        }
    }
    let lo_index: Vec<Option<usize>> = {
        let mut k = 0;
        lo.iter()
            .map(|x| {
                x.map(|_| {
                    k += 1;
                    k - 1
                })
            })
            .collect()
    };
    let f_of = |u: usize| -> Option<Expr> {
        let d = alg.degree(u) as i64 + m;
        if d < 0 {
            return Some(vec![]);
        }
        if d as usize > top {
            return None;
        }
        Some(
            alg.range(d as usize)
                .enumerate()
                .map(|(k, t)| (t, base[u] + k, Rat::one()))
                .collect(),
        )
    };
    let f_vec = |v: Option<&SVec>| -> Option<Expr> {
        let mut out = vec![];
        for (k, c) in v? {
            for (t, x, e) in f_of(*k)? {
                out.push((t, x, e * c));
            }
        }
        Some(out)
    };
    let apply = |op: &dyn Fn(usize, usize) -> Option<SVec>,
                 left: usize,
                 e: Option<Expr>,
                 swap: bool|
     -> Option<Expr> {
        let mut out = vec![];
        for (t, x, c) in e? {
            let r = if swap { op(t, left)? } else { op(left, t)? };
            for (t2, y) in r {
                out.push((t2, x, &c * &y));
            }
        }
        Some(out)
    };
    let mul = |a: usize, b: usize| alg.mul(a, b).cloned();
    let br = |a: usize, b: usize| alg.br(a, b).cloned();
    let mut eqs = vec![];
    for a in 0..alg.len() {
        for b in a..alg.len() {
            if alg.degree(a) + alg.degree(b) > top {
                continue;
            }
            // f(ab) − f(a)b − a f(b)
            push(
                &mut eqs,
                vec![
                    f_vec(alg.mul(a, b)),
                    neg(apply(&mul, b, f_of(a), true)),
                    neg(apply(&mul, a, f_of(b), false)),
                ],
            );
            // f({a,b}) − {f(a),b} − {a,f(b)}
            push(
                &mut eqs,
                vec![
                    f_vec(alg.br(a, b)),
                    neg(apply(&br, b, f_of(a), true)),
                    neg(apply(&br, a, f_of(b), false)),
                ],
            );
        }
    }
    let n_lo = lo_index.iter().flatten().count();
    let z = restricted_kernel(eqs.into_iter().map(|e| e.0).collect(), &lo_index, n_lo);
    // Hamiltonians a ↦ {c, a} for c of degree m + l
    let mut hams = vec![];
    let cd = m + alg.bracket_shift() as i64;
    if cd >= 0 && cd as usize <= top {
        for c in alg.range(cd as usize) {
            let mut row = vec![];
            for u in 0..alg.len() {
                if base[u] == usize::MAX || alg.degree(u) > window {
                    continue;
                }
                let d = (alg.degree(u) as i64 + m) as usize;
                let start = alg.range(d).start;
                for (t, x) in alg.br(c, u).expect("Hamiltonian within the table") {
                    row.push((lo_index[base[u] + t - start].unwrap(), x.clone()));
                }
            }
            row.sort_by_key(|e| e.0);
            hams.push(row);
        }
    }
    classes(z, hams).len()
}

pub fn hp1(alg: &TruncatedGradedAlgebra, plan: WindowPlan) -> HpReport {
    assert_eq!(
        alg.max_degree(),
        plan.internal,
        "algebra must be built to the internal degree"
    );
    let dims: Vec<HpDegree> = plan
        .scanned()
        .into_par_iter()
        .map(|m| HpDegree {
            m,
            dim: hp1_degree(alg, m, plan.window),
        })
        .collect();
    split(1, plan, dims)
}

/// Poisson center dims for degrees 0..=W − l (exact: no truncation involved).
pub fn hp0(alg: &TruncatedGradedAlgebra) -> HpReport {
    let certified = alg
        .poisson_center_dims()
        .into_iter()
        .enumerate()
        .map(|(d, dim)| HpDegree { m: d as i64, dim })
        .collect();
    HpReport {
        k: 0,
        window: alg.max_degree(),
        internal_degree: alg.max_degree(),
        certified,
        uncertified: vec![],
    }
}

/// Checks the first-order conditions for γ on triples of input degree ≤ its window.
pub fn check_cocycle(alg: &TruncatedGradedAlgebra, g: &CochainPair) -> Result<(), DeformError> {
    let u = Unknowns::new(alg, g.m, g.window);
    let x: BTreeMap<usize, Rat> = u.coords_of(g)?.into_iter().collect();
    let bad = u
        .equations(g.window, None)
        .iter()
        .filter(|(row, _)| {
            let s = row.iter().fold(Rat::zero(), |acc, (k, c)| {
                acc + x.get(k).map_or(Rat::zero(), |v| v * c)
            });
            !s.is_zero()
        })
        .count();
    if bad > 0 {
        return Err(DeformError::InvalidCocycle { violations: bad });
    }
    Ok(())
}

/// (df, δf) for a degree-m map given on basis elements of degree ≤ window.
pub fn coboundary(
    alg: &TruncatedGradedAlgebra,
    m: i64,
    window: usize,
    f: &BTreeMap<usize, SVec>,
) -> CochainPair {
    let w = Unknowns::new(alg, m, window);
    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
    // rows of the coboundary matrix are elementary maps b_u ↦ b_t
    let rows = coboundaries2(alg, &w, m);
    let mut k = 0;
    for u in 0..alg.len() {
        let d = alg.degree(u) as i64 + m;
        if alg.degree(u) <= window && d >= 0 && d as usize <= alg.max_degree() {
            for t in alg.range(d as usize) {
                let c = f
                    .get(&u)
                    .and_then(|v| v.iter().find(|e| e.0 == t))
                    .map(|e| e.1.clone());
                if let Some(c) = c {
                    for (col, x) in &rows[k] {
                        *acc.entry(*col).or_insert_with(Rat::zero) += x * &c;
                    }
                }
                k += 1;
            }
        }
    }
    let v: SVec = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    w.to_pair(&v)
}

/// Normal form of γ modulo window coboundaries (same for cohomologous γ).
pub fn class_normal_form(
    alg: &TruncatedGradedAlgebra,
    g: &CochainPair,
) -> Result<CochainPair, DeformError> {
    let w = Unknowns::new(alg, g.m, g.window);
    let mut ech = SparseEchelon::<Rat>::new();
    for b in coboundaries2(alg, &w, g.m) {
        ech.insert(b);
    }
    let v = ech.reduce_full(w.coords_of(g)?);
    Ok(w.to_pair(&v))
}

pub fn add_pairs(a: &CochainPair, b: &CochainPair) -> CochainPair {
    let mut out = a.clone();
    for (tab, other) in [(&mut out.phi, &b.phi), (&mut out.psi, &b.psi)] {
        for (k, v) in other {
            let e = tab.entry(*k).or_default();
            *e = super::algebra::add(e, v);
        }
    }
    out
}

/// Order-2 correction (φ₂, ψ₂) of degree 2m making γ₁ Poisson modulo ε³.
pub fn mc_extend(
    alg: &TruncatedGradedAlgebra,
    g: &CochainPair,
) -> Result<CochainPair, DeformError> {
    let mut out = mc_extend_sum(alg, std::slice::from_ref(g))?;
    Ok(out.pop().expect("one component"))
}

/// Order-2 correction for γ₁ = Σ γ_i with homogeneous γ_i of possibly different
/// degrees: one component per degree m_i + m_j, each solving d γ₂ = Σ B(γ_i, γ_j)
/// over the ordered pairs of that degree. Components are sorted by degree.
pub fn mc_extend_sum(
    alg: &TruncatedGradedAlgebra,
    parts: &[CochainPair],
) -> Result<Vec<CochainPair>, DeformError> {
    for g in parts {
        check_cocycle(alg, g)?;
        if g.window != parts[0].window {
            return Err(DeformError::Shape);
        }
    }
    let mut by_degree: BTreeMap<i64, Vec<(&CochainPair, &CochainPair)>> = BTreeMap::new();
    for x in parts {
        for y in parts {
            by_degree.entry(x.m + y.m).or_default().push((x, y));
        }
    }
    by_degree
        .into_iter()
        .map(|(d, src)| {
            let u = Unknowns::new(alg, d, parts[0].window);
            let eqs = u.equations(parts[0].window, Some(&src));
            let total = eqs.len();
            match sparse_solve(eqs, u.len()) {
                Some(x) => Ok(u.to_pair(&x)),
                None => Err(DeformError::Obstructed {
                    degree: d,
                    conditions: total,
                }),
            }
        })
        .collect()
}
