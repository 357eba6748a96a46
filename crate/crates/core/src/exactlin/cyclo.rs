//! Elements of cyclotomic fields ℚ(ζ_N) in the power basis modulo Φ_N.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{format_rat, parse_rat, Rat};
use super::linalg;

/// Reduction data for one cyclotomic field.
#[derive(Debug)]
pub struct CycloField {
    pub conductor: u32,
    pub degree: usize,
    /// Φ_N, low degree first, monic.
    pub cyclotomic_poly: Vec<i64>,
    /// `powers[k]` is ζ^k written in the power basis, for `0 <= k < N`.
    powers: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = den[dn];
    let mut quot = vec![0i64; rem.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn] / lead;
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &field(d).cyclotomic_poly);
        }
    }
    p
}

fn fields() -> &'static RwLock<HashMap<u32, Arc<CycloField>>> {
    static FIELDS: OnceLock<RwLock<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    FIELDS.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared reduction tables for ℚ(ζ_n), built on first use.
pub fn field(n: u32) -> Arc<CycloField> {
    assert!(n >= 1, "conductor must be positive");
    if let Some(f) = fields().read().unwrap().get(&n) {
        return f.clone();
    }
    let phi = cyclotomic_poly(n);
    let degree = phi.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; degree];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce x^degree = -(phi[0] + ... + phi[degree-1] x^(degree-1))
        let top = cur[degree - 1];
        for i in (1..degree).rev() {
            cur[i] = cur[i - 1] - top * phi[i];
        }
        cur[0] = -top * phi[0];
    }
    let f = Arc::new(CycloField {
        conductor: n,
        degree,
        cyclotomic_poly: phi,
        powers,
    });
    fields().write().unwrap().entry(n).or_insert(f).clone()
}

pub fn euler_phi(n: u32) -> usize {
    field(n).degree
}

/// An element of ℚ(ζ_N), `coeffs[i]` multiplying ζ_N^i.
#[derive(Clone, Debug)]
pub struct CycloNum {
    conductor: u32,
    coeffs: Vec<Rat>,
}

impl CycloNum {
    /// Builds an element from power-basis coordinates of any length, reducing mod Φ_N.
    pub fn from_powers(conductor: u32, coeffs: &[Rat]) -> Self {
        let f = field(conductor);
        let mut out = vec![Rat::zero(); f.degree];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let red = &f.powers[k % conductor as usize];
            for (o, &r) in out.iter_mut().zip(red) {
                if r != 0 {
                    *o += c * Rat::from_integer(r.into());
                }
            }
        }
        Self::normalized(conductor, out)
    }

    fn normalized(conductor: u32, coeffs: Vec<Rat>) -> Self {
        if conductor != 1 && coeffs.iter().skip(1).all(Zero::is_zero) {
            return CycloNum {
                conductor: 1,
                coeffs: vec![coeffs[0].clone()],
            };
        }
        CycloNum { conductor, coeffs }
    }

    pub fn from_rat(r: Rat) -> Self {
        CycloNum {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rat(Rat::from_integer(v.into()))
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let e = k.rem_euclid(n as i64) as usize;
        let f = field(n);
        let coeffs = f.powers[e]
            .iter()
            .map(|&c| Rat::from_integer(c.into()))
            .collect();
        Self::normalized(n, coeffs)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        (self.conductor == 1).then(|| &self.coeffs[0])
    }

    /// Re-expresses the element in ℚ(ζ_L); `L` must be a multiple of the conductor.
    pub fn promote(&self, target: u32) -> CycloNum {
        assert!(
            target.is_multiple_of(self.conductor),
            "conductor {} does not divide {}",
            self.conductor,
            target
        );
        if target == self.conductor {
            return self.clone();
        }
        let step = (target / self.conductor) as usize;
        let f = field(target);
        let mut out = vec![Rat::zero(); f.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let red = &f.powers[(i * step) % target as usize];
            for (o, &r) in out.iter_mut().zip(red) {
                if r != 0 {
                    *o += c * Rat::from_integer(r.into());
                }
            }
        }
        CycloNum {
            conductor: target,
            coeffs: out,
        }
    }

    /// Power-basis coordinates in ℚ(ζ_L) without normalising the conductor back down.
    pub fn coords_in(&self, target: u32) -> Vec<Rat> {
        if !target.is_multiple_of(self.conductor) {
            return self.canonical().promote(target).coeffs_padded(target);
        }
        self.promote(target).coeffs_padded(target)
    }

    fn coeffs_padded(self, target: u32) -> Vec<Rat> {
        if self.conductor == target {
            self.coeffs
        } else {
            let mut v = vec![Rat::zero(); euler_phi(target)];
            v[0] = self.coeffs[0].clone();
            v
        }
    }

    fn common(a: &CycloNum, b: &CycloNum) -> (u32, Vec<Rat>, Vec<Rat>) {
        if a.conductor == b.conductor {
            return (a.conductor, a.coeffs.clone(), b.coeffs.clone());
        }
        let l = a.conductor.lcm(&b.conductor);
        (l, a.promote(l).coeffs, b.promote(l).coeffs)
    }

    /// Smallest conductor whose field contains this element; the canonical form.
    pub fn canonical(&self) -> CycloNum {
        let mut cur = self.clone();
        'outer: loop {
            let n = cur.conductor;
            if n == 1 {
                return cur;
            }
            for p in prime_factors(n) {
                if let Some(d) = cur.descend(n / p) {
                    cur = d;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    fn descend(&self, m: u32) -> Option<CycloNum> {
        let fm = field(m);
        let n = self.conductor;
        // columns: images of ζ_m^j in ℚ(ζ_n)
        let cols: Vec<Vec<Rat>> = (0..fm.degree)
            .map(|j| CycloNum::root_of_unity(m, j as i64).coords_in(n))
            .collect();
        let rows = self.coeffs.len();
        let mat: Vec<Vec<Rat>> = (0..rows)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let y = linalg::solve(&mat, &self.coeffs)?;
        Some(CycloNum::from_powers(m, &y))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    pub fn inverse(&self) -> Option<CycloNum> {
        if self.is_zero() {
            return None;
        }
        if self.conductor == 1 {
            return Some(CycloNum::from_rat(self.coeffs[0].recip()));
        }
        let n = self.conductor;
        let d = self.coeffs.len();
        // multiplication-by-self matrix, column j = self * ζ^j
        let cols: Vec<Vec<Rat>> = (0..d)
            .map(|j| (self * &CycloNum::root_of_unity(n, j as i64)).coords_in(n))
            .collect();
        let mat: Vec<Vec<Rat>> = (0..d)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let mut e0 = vec![Rat::zero(); d];
        e0[0] = Rat::one();
        let y = linalg::solve(&mat, &e0).expect("nonzero element of a field is invertible");
        Some(CycloNum::from_powers(n, &y))
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> CycloNum {
        self.galois(-1)
    }

    /// The automorphism ζ ↦ ζ^a, `a` coprime to the conductor.
    pub fn galois(&self, a: i64) -> CycloNum {
        let n = self.conductor as i64;
        let mut buf = vec![Rat::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            buf[(i as i64 * a).rem_euclid(n) as usize] += c;
        }
        CycloNum::from_powers(self.conductor, &buf)
    }

    pub fn pow(&self, e: u32) -> CycloNum {
        let mut acc = CycloNum::from_int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Total order used for canonical element ordering: conductor, then coefficients.
    pub fn canonical_cmp(&self, other: &CycloNum) -> std::cmp::Ordering {
        let a = self.canonical();
        let b = other.canonical();
        a.conductor
            .cmp(&b.conductor)
            .then_with(|| a.coeffs.cmp(&b.coeffs))
    }
}

pub fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = CycloNum::common(self, other);
        a == b
    }
}

impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let c = self.canonical();
        c.conductor.hash(state);
        c.coeffs.hash(state);
    }
}

impl<'a> Add<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        let (n, mut a, b) = CycloNum::common(self, rhs);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        CycloNum::normalized(n, a)
    }
}

impl<'a> Sub<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        let (n, mut a, b) = CycloNum::common(self, rhs);
        for (x, y) in a.iter_mut().zip(b) {
            *x -= y;
        }
        CycloNum::normalized(n, a)
    }
}

impl<'a> Mul<&'a CycloNum> for &'a CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        if self.conductor == 1 {
            let s = &self.coeffs[0];
            let coeffs = rhs.coeffs.iter().map(|c| c * s).collect();
            return CycloNum::normalized(rhs.conductor, coeffs);
        }
        if rhs.conductor == 1 {
            return rhs * self;
        }
        let (n, a, b) = CycloNum::common(self, rhs);
        let mut conv = vec![Rat::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        CycloNum::from_powers(n, &conv)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl From<i64> for CycloNum {
    fn from(v: i64) -> Self {
        CycloNum::from_int(v)
    }
}

impl From<Rat> for CycloNum {
    fn from(r: Rat) -> Self {
        CycloNum::from_rat(r)
    }
}

impl super::field::Scalar for CycloNum {
    fn zero() -> Self {
        CycloNum::from_int(0)
    }
    fn one() -> Self {
        CycloNum::from_int(1)
    }
    fn is_zero(&self) -> bool {
        CycloNum::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.inverse().expect("inverse of zero")
    }
    fn is_one(&self) -> bool {
        CycloNum::is_one(self)
    }
    fn from_i64(v: i64) -> Self {
        CycloNum::from_int(v)
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            return write!(f, "{}", format_rat(&self.coeffs[0]));
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", format_rat(c))?,
                _ => write!(f, "{}*z{}^{}", format_rat(c), self.conductor, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    #[serde(rename = "N")]
    n: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c = self.canonical();
        CycloJson {
            n: c.conductor,
            coeffs: c.coeffs.iter().map(format_rat).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = CycloJson::deserialize(d)?;
        if j.n == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rat(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() > euler_phi(j.n) {
            return Err(D::Error::custom(format!(
                "expected at most {} coefficients for conductor {}",
                euler_phi(j.n),
                j.n
            )));
        }
        Ok(CycloNum::from_powers(j.n, &coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::field::rat;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(field(1).cyclotomic_poly, vec![-1, 1]);
        assert_eq!(field(4).cyclotomic_poly, vec![1, 0, 1]);
        assert_eq!(field(6).cyclotomic_poly, vec![1, -1, 1]);
        assert_eq!(field(12).cyclotomic_poly, vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(7), 6);
    }

    #[test]
    fn root_of_unity_order() {
        for n in 1..=12u32 {
            let z = CycloNum::root_of_unity(n, 1);
            assert!(z.pow(n).is_one());
            for k in 1..n {
                assert!(!z.pow(k).is_one(), "zeta_{n}^{k}");
            }
        }
    }

    #[test]
    fn inverse_and_conj() {
        let z = CycloNum::root_of_unity(5, 1);
        let a = &z + &CycloNum::from_rat(rat(2, 3));
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(z.conj(), CycloNum::root_of_unity(5, 4));
        assert!(CycloNum::from_int(0).inverse().is_none());
    }

    #[test]
    fn cross_conductor_equality() {
        // ζ_6 = -ζ_3^2, and ζ_12^4 = ζ_3
        let z6 = CycloNum::root_of_unity(6, 1);
        let z3 = CycloNum::root_of_unity(3, 1);
        assert_eq!(z6, -(&z3 * &z3));
        assert_eq!(CycloNum::root_of_unity(12, 4), z3);
        assert_eq!(CycloNum::root_of_unity(12, 4).canonical().conductor(), 3);
        // i = ζ_12^3 lives in ℚ(ζ_4)
        assert_eq!(CycloNum::root_of_unity(12, 3).canonical().conductor(), 4);
        // sqrt(-3) = 2ζ_3 + 1 has conductor 3
        let s = &(&z3 + &z3) + &CycloNum::from_int(1);
        assert_eq!((&s * &s), CycloNum::from_int(-3));
    }

    #[test]
    fn json_roundtrip() {
        let z = &CycloNum::root_of_unity(8, 3) + &CycloNum::from_rat(rat(-1, 2));
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"N":8,"coeffs":["-1/2","0","0","1"]}"#);
        let back: CycloNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
    }
}
