//! Elliptic curves y² = x³ + ax + b over 𝔽_q and its extensions, the Weil pairing by
//! Miller's algorithm, Vélu isogenies and the degree law ⟨φP, φQ⟩ = ⟨P, Q⟩^{deg φ}.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PairingError {
    #[error("{0} is not a prime ≥ 5")]
    BadField(u64),
    #[error("singular curve: 4a³ + 27b² ≡ 0 mod {0}")]
    Singular(u64),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is not {0}-torsion")]
    NotTorsion(u64),
    #[error("n = {0} must be coprime to the characteristic and > 1")]
    BadOrder(u64),
    #[error("kernel generator does not have order {0}")]
    NotSubgroup(u64),
    #[error("no rational point of order {0}")]
    NoKernel(u64),
    #[error("full {n}-torsion not found over extensions of degree ≤ {max}")]
    NoBasis { n: u64, max: usize },
    #[error("evaluation stayed degenerate after {0} random shifts")]
    Degenerate(usize),
    #[error("{0}")]
    Unsupported(String),
}

// ---------- polynomials over 𝔽_q, low degree first ----------

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: u64, q: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(q as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(q as i128) as u64
}

fn poly_mul(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + *x as u128 * *y as u128) % q as u128;
        }
    }
    trim(out.into_iter().map(|x| x as u64).collect())
}

fn poly_divmod(a: &[u64], m: &[u64], q: u64) -> (Vec<u64>, Vec<u64>) {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < m.len() {
        return (vec![], r);
    }
    let lead_inv = inv_mod(*m.last().unwrap(), q);
    let mut quo = vec![0u64; r.len() - m.len() + 1];
    while r.len() >= m.len() && !r.is_empty() {
        let shift = r.len() - m.len();
        let c = (*r.last().unwrap() as u128 * lead_inv as u128 % q as u128) as u64;
        quo[shift] = c;
        for (i, mi) in m.iter().enumerate() {
            let sub = (c as u128 * *mi as u128 % q as u128) as u64;
            r[shift + i] = (r[shift + i] + q - sub) % q;
        }
        r = trim(r);
    }
    (trim(quo), r)
}

fn poly_sub(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + q - b.get(i).copied().unwrap_or(0)) % q).collect())
}

fn poly_gcd(a: &[u64], b: &[u64], q: u64) -> Vec<u64> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_divmod(&x, &y, q).1;
        x = y;
        y = r;
    }
    x
}

fn poly_powmod(base: &[u64], e: &BigUint, m: &[u64], q: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let b = poly_divmod(base, m, q).1;
    for i in (0..e.bits()).rev() {
        acc = poly_divmod(&poly_mul(&acc, &acc, q), m, q).1;
        if e.bit(i) {
            acc = poly_divmod(&poly_mul(&acc, &b, q), m, q).1;
        }
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![n]
}

/// Rabin's test: x^{q^e} ≡ x and gcd(x^{q^{e/r}} − x, f) = 1 for every prime r | e.
fn is_irreducible(f: &[u64], q: u64) -> bool {
    let e = f.len() - 1;
    let x = vec![0u64, 1];
    let qq = BigUint::from(q);
    let frob = |k: usize| poly_powmod(&x, &qq.pow(k as u32), f, q);
    if !poly_divmod(&poly_sub(&frob(e), &x, q), f, q).1.is_empty() {
        return false;
    }
    prime_factors(e as u64).into_iter().all(|r| poly_gcd(&poly_sub(&frob(e / r as usize), &x, q), f, q).len() == 1)
}

/// 𝔽_{q^e} = 𝔽_q[x]/(f) for the first monic irreducible f of degree e,
/// candidates ordered by the integer Σ c_i q^i of their lower coefficients.
#[derive(PartialEq, Eq)]
pub struct FiniteField {
    pub q: u64,
    pub e: usize,
    modulus: Vec<u64>,
    order: BigUint,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.q, self.e, self.modulus)
    }
}

impl FiniteField {
    pub fn new(q: u64, e: usize) -> Result<Arc<Self>, PairingError> {
        if !is_prime(q) || q < 5 || e == 0 {
            return Err(PairingError::BadField(q));
        }
        let mut idx = BigUint::zero();
        let qq = BigUint::from(q);
        loop {
            let mut f = Vec::with_capacity(e + 1);
            let mut t = idx.clone();
            for _ in 0..e {
                f.push((&t % &qq).to_u64().unwrap());
                t /= &qq;
            }
            f.push(1);
            if is_irreducible(&f, q) {
                return Ok(Arc::new(FiniteField { q, e, modulus: f, order: qq.pow(e as u32) }));
            }
            idx += 1u32;
        }
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }
}

/// An element of a [`FiniteField`], as a polynomial of degree < e.
#[derive(Clone)]
pub struct Fe {
    field: Arc<FiniteField>,
    c: Vec<u64>,
}

impl PartialEq for Fe {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && (Arc::ptr_eq(&self.field, &o.field) || self.field == o.field)
    }
}
impl Eq for Fe {}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.e == 1 {
            return write!(f, "{}", self.c.first().copied().unwrap_or(0));
        }
        write!(f, "{:?}", self.c)
    }
}

impl Fe {
    pub fn from_u64(field: &Arc<FiniteField>, v: u64) -> Self {
        Fe { field: field.clone(), c: trim(vec![v % field.q]) }
    }

    pub fn from_i64(field: &Arc<FiniteField>, v: i64) -> Self {
        Self::from_u64(field, v.rem_euclid(field.q as i64) as u64)
    }

    pub fn from_coeffs(field: &Arc<FiniteField>, c: &[u64]) -> Self {
        let c: Vec<u64> = c.iter().map(|x| x % field.q).collect();
        Fe { field: field.clone(), c: poly_divmod(&c, &field.modulus, field.q).1 }
    }

    pub fn random<R: Rng>(field: &Arc<FiniteField>, rng: &mut R) -> Self {
        let c: Vec<u64> = (0..field.e).map(|_| rng.gen_range(0..field.q)).collect();
        Fe { field: field.clone(), c: trim(c) }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn zero(&self) -> Self {
        Fe { field: self.field.clone(), c: vec![] }
    }

    pub fn one(&self) -> Self {
        Self::from_u64(&self.field, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn add(&self, o: &Self) -> Self {
        let q = self.field.q;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % q).collect();
        Fe { field: self.field.clone(), c: trim(c) }
    }

    pub fn neg(&self) -> Self {
        let q = self.field.q;
        Fe { field: self.field.clone(), c: self.c.iter().map(|x| (q - x) % q).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let q = self.field.q;
        Fe { field: self.field.clone(), c: poly_divmod(&poly_mul(&self.c, &o.c, q), &self.field.modulus, q).1 }
    }

    pub fn scale(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(&self.field, k))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // extended Euclid: s·a + t·f = g
        let q = self.field.q;
        let (mut r0, mut r1) = (self.field.modulus.clone(), self.c.clone());
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
        while !r1.is_empty() {
            let (qt, r) = poly_divmod(&r0, &r1, q);
            let s = poly_sub(&s0, &poly_mul(&qt, &s1, q), q);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant
        let k = inv_mod(r0[0], q);
        Some(Fe::from_coeffs(&self.field, &poly_mul(&s0, &[k], q)))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, e: &BigUint) -> Self {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = acc.square();
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, e: u64) -> Self {
        self.pow(&BigUint::from(e))
    }

    pub fn is_square(&self) -> bool {
        self.is_zero() || self.pow(&((self.field.order.clone() - 1u32) >> 1)).is_one()
    }

    /// Tonelli–Shanks; None for non-squares.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let qm1 = self.field.order.clone() - 1u32;
        let s = qm1.trailing_zeros().unwrap();
        let t = &qm1 >> s;
        let mut idx = 2u64;
        let z = loop {
            let mut c = Vec::new();
            let mut k = idx;
            for _ in 0..self.field.e {
                c.push(k % self.field.q);
                k /= self.field.q;
            }
            let cand = Fe::from_coeffs(&self.field, &c);
            if !cand.is_square() {
                break cand;
            }
            idx += 1;
        };
        let mut m = s;
        let mut c = z.pow(&t);
        let mut tt = self.pow(&t);
        let mut r = self.pow(&((&t + 1u32) >> 1));
        while !tt.is_one() {
            let mut i = 0;
            let mut x = tt.clone();
            while !x.is_one() {
                x = x.square();
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            tt = tt.mul(&c);
            r = r.mul(&b);
        }
        Some(r)
    }

    /// Multiplicative order, assuming it divides n (used for roots of unity).
    pub fn order_dividing(&self, n: u64) -> Option<u64> {
        crate::ring_tower::divisors(n).into_iter().find(|d| self.pow_u64(*d).is_one())
    }
}

// ---------- curves ----------

/// y² = x³ + ax + b over the prime field 𝔽_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurveFp {
    pub q: u64,
    pub a: u64,
    pub b: u64,
}

fn legendre(a: u64, q: u64) -> i64 {
    if a % q == 0 {
        return 0;
    }
    let mut acc = 1u128;
    let mut base = (a % q) as u128;
    let mut e = (q - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % q as u128;
        }
        base = base * base % q as u128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

impl EllipticCurveFp {
    pub fn new(q: u64, a: i64, b: i64) -> Result<Self, PairingError> {
        if !is_prime(q) || q < 5 {
            return Err(PairingError::BadField(q));
        }
        let (a, b) = (a.rem_euclid(q as i64) as u64, b.rem_euclid(q as i64) as u64);
        let qq = q as u128;
        let disc = (4 * (a as u128).pow(3) % qq + 27 * (b as u128).pow(2) % qq) % qq;
        if disc == 0 {
            return Err(PairingError::Singular(q));
        }
        Ok(EllipticCurveFp { q, a, b })
    }

    /// #E(𝔽_q) by summing Legendre symbols.
    pub fn point_count(&self) -> u64 {
        let q = self.q;
        let s: i64 = (0..q)
            .map(|x| {
                let x = x as u128;
                let rhs = ((x * x % q as u128 * x + self.a as u128 * x + self.b as u128) % q as u128) as u64;
                legendre(rhs, q)
            })
            .sum();
        (q as i64 + 1 + s) as u64
    }

    pub fn trace(&self) -> i64 {
        self.q as i64 + 1 - self.point_count() as i64
    }

    /// #E(𝔽_{q^e}) = q^e + 1 − (α^e + β^e).
    pub fn point_count_ext(&self, e: usize) -> BigUint {
        let t = BigInt::from(self.trace());
        let q = BigInt::from(self.q);
        let (mut s0, mut s1) = (BigInt::from(2), t.clone());
        for _ in 1..e {
            let s2 = &t * &s1 - &q * &s0;
            s0 = s1;
            s1 = s2;
        }
        (q.pow(e as u32) + 1u32 - s1).to_biguint().expect("Hasse bound")
    }

    pub fn over(&self, e: usize) -> Result<Curve, PairingError> {
        let f = FiniteField::new(self.q, e)?;
        Ok(Curve {
            a: Fe::from_u64(&f, self.a),
            b: Fe::from_u64(&f, self.b),
            order: Some(self.point_count_ext(e)),
            field: f,
        })
    }

    /// Rational points of exact prime order ℓ, up to sign.
    pub fn rational_points_of_order(&self, ell: u64) -> Result<Vec<CurvePoint>, PairingError> {
        let c = self.over(1)?;
        let mut out = Vec::new();
        for x in 0..self.q {
            let xf = Fe::from_u64(&c.field, x);
            if let Some(y) = c.rhs(&xf).sqrt() {
                let pt = CurvePoint::Affine(xf, y);
                if !pt.is_infinity() && c.mul_u64(&pt, ell).is_infinity() {
                    out.push(pt);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for EllipticCurveFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + {}x + {} over F_{}", self.a, self.b, self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine(Fe, Fe),
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&Fe> {
        match self {
            CurvePoint::Affine(x, _) => Some(x),
            CurvePoint::Infinity => None,
        }
    }
}

/// A short Weierstrass curve over some 𝔽_{q^e}; the group order is known when it
/// comes from base change of a curve over 𝔽_q.
#[derive(Clone, Debug)]
pub struct Curve {
    field: Arc<FiniteField>,
    pub a: Fe,
    pub b: Fe,
    order: Option<BigUint>,
}

impl Curve {
    pub fn new(a: Fe, b: Fe) -> Result<Self, PairingError> {
        let disc = a.pow_u64(3).scale(4).add(&b.square().scale(27));
        if disc.is_zero() {
            return Err(PairingError::Singular(a.field.q));
        }
        Ok(Curve { field: a.field.clone(), a, b, order: None })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn order(&self) -> Option<&BigUint> {
        self.order.as_ref()
    }

    fn rhs(&self, x: &Fe) -> Fe {
        x.square().mul(x).add(&self.a.mul(x)).add(&self.b)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => y.square() == self.rhs(x),
        }
    }

    pub fn point(&self, x: Fe, y: Fe) -> Result<CurvePoint, PairingError> {
        let p = CurvePoint::Affine(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(PairingError::NotOnCurve)
        }
    }

    pub fn j_invariant(&self) -> Fe {
        let a3 = self.a.pow_u64(3).scale(4);
        let den = a3.add(&self.b.square().scale(27));
        a3.scale(1728).div(&den).expect("nonsingular")
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), y.neg()),
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lam = if x1 == x2 {
            if y1.add(y2).is_zero() {
                return CurvePoint::Infinity;
            }
            x1.square().scale(3).add(&self.a).div(&y1.scale(2)).unwrap()
        } else {
            y2.sub(y1).div(&x2.sub(x1)).unwrap()
        };
        let x3 = lam.square().sub(x1).sub(x2);
        let y3 = lam.mul(&x1.sub(&x3)).sub(y1);
        CurvePoint::Affine(x3, y3)
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        self.add(p, &self.neg(q))
    }

    pub fn mul(&self, p: &CurvePoint, k: &BigUint) -> CurvePoint {
        let mut acc = CurvePoint::Infinity;
        for i in (0..k.bits()).rev() {
            acc = self.add(&acc, &acc);
            if k.bit(i) {
                acc = self.add(&acc, p);
            }
        }
        acc
    }

    pub fn mul_u64(&self, p: &CurvePoint, k: u64) -> CurvePoint {
        self.mul(p, &BigUint::from(k))
    }

    pub fn mul_i64(&self, p: &CurvePoint, k: i64) -> CurvePoint {
        let r = self.mul_u64(p, k.unsigned_abs());
        if k < 0 {
            self.neg(&r)
        } else {
            r
        }
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> CurvePoint {
        loop {
            let x = Fe::random(&self.field, rng);
            if let Some(y) = self.rhs(&x).sqrt() {
                let y = if rng.gen_bool(0.5) { y.neg() } else { y };
                return CurvePoint::Affine(x, y);
            }
        }
    }

    /// A random point of exact order n (n prime) when the group order is known.
    pub fn random_torsion_point<R: Rng>(&self, n: u64, rng: &mut R) -> Option<CurvePoint> {
        let order = self.order.as_ref()?;
        let nn = BigUint::from(n);
        let mut cof = order.clone();
        while (&cof % &nn).is_zero() {
            cof /= &nn;
        }
        if cof == *order {
            return None;
        }
        let mut p = self.mul(&self.random_point(rng), &cof);
        if p.is_infinity() {
            return None;
        }
        loop {
            let next = self.mul_u64(&p, n);
            if next.is_infinity() {
                return Some(p);
            }
            p = next;
        }
    }
}

// ---------- Miller and the Weil pairing ----------

/// Value at X of the line through T and R divided by the vertical through T + R.
fn line_ratio(c: &Curve, t: &CurvePoint, r: &CurvePoint, x: &CurvePoint) -> Option<Fe> {
    let (xx, xy) = match x {
        CurvePoint::Affine(a, b) => (a, b),
        CurvePoint::Infinity => return None,
    };
    let one = xx.one();
    let (x1, y1, x2, y2) = match (t, r) {
        (CurvePoint::Infinity, _) | (_, CurvePoint::Infinity) => return Some(one),
        (CurvePoint::Affine(a, b), CurvePoint::Affine(cx, d)) => (a, b, cx, d),
    };
    if x1 == x2 && y1.add(y2).is_zero() {
        let v = xx.sub(x1);
        return if v.is_zero() { None } else { Some(v) };
    }
    let lam = if x1 == x2 {
        x1.square().scale(3).add(&c.a).div(&y1.scale(2))?
    } else {
        y2.sub(y1).div(&x2.sub(x1))?
    };
    let num = xy.sub(y1).sub(&lam.mul(&xx.sub(x1)));
    let x3 = lam.square().sub(x1).sub(x2);
    let den = xx.sub(&x3);
    if num.is_zero() || den.is_zero() {
        return None;
    }
    num.div(&den)
}

/// f_{n,P}(X) with div f = n[P] − n[O]; None when the evaluation meets a zero or pole.
pub fn miller(c: &Curve, p: &CurvePoint, n: u64, x: &CurvePoint) -> Option<Fe> {
    let mut f = c.a.one();
    let mut t = p.clone();
    for i in (0..(63 - n.leading_zeros())).rev() {
        f = f.square().mul(&line_ratio(c, &t, &t, x)?);
        t = c.add(&t, &t);
        if (n >> i) & 1 == 1 {
            f = f.mul(&line_ratio(c, &t, p, x)?);
            t = c.add(&t, p);
        }
    }
    Some(f)
}

pub const MAX_SHIFTS: usize = 64;

/// e_n(P, Q) = [f_P(Q+S)/f_P(S)] / [f_Q(P−S)/f_Q(−S)] for a random shift S.
pub fn weil_pairing<R: Rng>(c: &Curve, p: &CurvePoint, q: &CurvePoint, n: u64, rng: &mut R) -> Result<Fe, PairingError> {
    if n < 2 || n % c.field.q == 0 {
        return Err(PairingError::BadOrder(n));
    }
    for pt in [p, q] {
        if !c.contains(pt) {
            return Err(PairingError::NotOnCurve);
        }
        if !c.mul_u64(pt, n).is_infinity() {
            return Err(PairingError::NotTorsion(n));
        }
    }
    let one = c.a.one();
    if p.is_infinity() || q.is_infinity() || p == q {
        return Ok(one);
    }
    for _ in 0..MAX_SHIFTS {
        let s = c.random_point(rng);
        let eval = || -> Option<Fe> {
            let a = miller(c, p, n, &c.add(q, &s))?.div(&miller(c, p, n, &s)?)?;
            let b = miller(c, q, n, &c.sub(p, &s))?.div(&miller(c, q, n, &c.neg(&s))?)?;
            a.div(&b)
        };
        if let Some(v) = eval() {
            return Ok(v);
        }
    }
    Err(PairingError::Degenerate(MAX_SHIFTS))
}

/// A basis of E[n] (n prime) over the curve's field, if the full n-torsion is rational there.
pub fn torsion_basis<R: Rng>(c: &Curve, n: u64, rng: &mut R) -> Result<Option<(CurvePoint, CurvePoint)>, PairingError> {
    let Some(order) = c.order() else {
        return Err(PairingError::Unsupported("group order unknown".into()));
    };
    let nn = BigUint::from(n);
    if !(order % (&nn * &nn)).is_zero() || !((c.field.order.clone() - 1u32) % &nn).is_zero() {
        return Ok(None);
    }
    let mut pts: Vec<CurvePoint> = Vec::new();
    for _ in 0..40 {
        let Some(p) = c.random_torsion_point(n, rng) else { continue };
        for q in &pts {
            if !weil_pairing(c, q, &p, n, rng)?.is_one() {
                return Ok(Some((q.clone(), p)));
            }
        }
        if pts.len() < 4 {
            pts.push(p);
        }
    }
    Ok(None)
}

/// Smallest e ≤ max_e with E[n] ⊂ E(𝔽_{q^e}), with a basis there.
pub fn torsion_field<R: Rng>(
    e: &EllipticCurveFp,
    n: u64,
    max_e: usize,
    rng: &mut R,
) -> Result<(Curve, CurvePoint, CurvePoint), PairingError> {
    for k in 1..=max_e {
        let nn = BigUint::from(n);
        let qk = BigUint::from(e.q).pow(k as u32);
        if !((qk - 1u32) % &nn).is_zero() || !(e.point_count_ext(k) % (&nn * &nn)).is_zero() {
            continue;
        }
        let c = e.over(k)?;
        if let Some((p, q)) = torsion_basis(&c, n, rng)? {
            return Ok((c, p, q));
        }
    }
    Err(PairingError::NoBasis { n, max: max_e })
}

// ---------- Vélu ----------

#[derive(Clone, Debug)]
struct KernelTerm {
    x: Fe,
    y: Fe,
    gx: Fe,
    gy: Fe,
    v: Fe,
    u: Fe,
}

/// A separable isogeny with cyclic kernel, from Vélu's formulas.
#[derive(Clone, Debug)]
pub struct Isogeny {
    pub domain: Curve,
    pub codomain: Curve,
    pub degree: u64,
    terms: Vec<KernelTerm>,
}

pub fn velu_isogeny(c: &Curve, kernel: &CurvePoint, ell: u64) -> Result<Isogeny, PairingError> {
    if !c.contains(kernel) {
        return Err(PairingError::NotOnCurve);
    }
    if kernel.is_infinity() || !c.mul_u64(kernel, ell).is_infinity() || !is_prime(ell) {
        return Err(PairingError::NotSubgroup(ell));
    }
    let mut terms: Vec<KernelTerm> = Vec::new();
    let mut pt = kernel.clone();
    for _ in 1..ell {
        if let CurvePoint::Affine(x, y) = &pt {
            if !terms.iter().any(|t| t.x == *x) {
                let gx = x.square().scale(3).add(&c.a);
                let gy = y.scale(-2);
                let (v, u) = if y.is_zero() { (gx.clone(), x.zero()) } else { (gx.scale(2), gy.square()) };
                terms.push(KernelTerm { x: x.clone(), y: y.clone(), gx, gy, v, u });
            }
        } else {
            return Err(PairingError::NotSubgroup(ell));
        }
        pt = c.add(&pt, kernel);
    }
    let zero = c.a.zero();
    let v = terms.iter().fold(zero.clone(), |acc, t| acc.add(&t.v));
    let w = terms.iter().fold(zero, |acc, t| acc.add(&t.u).add(&t.x.mul(&t.v)));
    let mut codomain = Curve::new(c.a.sub(&v.scale(5)), c.b.sub(&w.scale(7)))?;
    codomain.order = c.order.clone();
    Ok(Isogeny { domain: c.clone(), codomain, degree: ell, terms })
}

impl Isogeny {
    pub fn apply(&self, p: &CurvePoint) -> CurvePoint {
        let (x, y) = match p {
            CurvePoint::Infinity => return CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => (x, y),
        };
        if self.terms.iter().any(|t| t.x == *x) {
            return CurvePoint::Infinity;
        }
        let mut xx = x.clone();
        let mut yy = y.clone();
        for t in &self.terms {
            let d = x.sub(&t.x).inv().unwrap();
            let d2 = d.square();
            let d3 = d2.mul(&d);
            xx = xx.add(&t.v.mul(&d)).add(&t.u.mul(&d2));
            let corr = t.u.mul(&y.scale(2)).mul(&d3).add(&t.v.mul(&y.sub(&t.y)).mul(&d2)).sub(&t.gx.mul(&t.gy).mul(&d2));
            yy = yy.sub(&corr);
        }
        CurvePoint::Affine(xx, yy)
    }
}

/// The dual isogeny as Vélu on φ(E[ℓ]) followed by the isomorphism back to the domain,
/// normalised so that φ̂∘φ = [ℓ] on the reference point.
#[derive(Clone, Debug)]
pub struct DualIsogeny {
    pub psi: Isogeny,
    /// (x, y) ↦ (u2·x, u3·y) from ψ's codomain to φ's domain
    pub u2: Fe,
    pub u3: Fe,
}

impl DualIsogeny {
    pub fn apply(&self, p: &CurvePoint) -> CurvePoint {
        match self.psi.apply(p) {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.mul(&self.u2), y.mul(&self.u3)),
        }
    }
}

/// Needs the curve's field to contain E[ℓ] and j ∉ {0, 1728}.
pub fn dual_isogeny<R: Rng>(phi: &Isogeny, rng: &mut R) -> Result<DualIsogeny, PairingError> {
    let c = &phi.domain;
    let ell = phi.degree;
    let Some((p, q)) = torsion_basis(c, ell, rng)? else {
        return Err(PairingError::NoBasis { n: ell, max: c.field.e });
    };
    let t = [p, q].into_iter().map(|t| phi.apply(&t)).find(|t| !t.is_infinity()).expect("kernel is cyclic");
    let psi = velu_isogeny(&phi.codomain, &t, ell)?;
    let (a2, b2) = (&psi.codomain.a, &psi.codomain.b);
    if c.a.is_zero() || c.b.is_zero() {
        return Err(PairingError::Unsupported("j-invariant 0 or 1728".into()));
    }
    // a = u^4 a″, b = u^6 b″
    let u2 = c.b.mul(a2).div(&c.a.mul(b2)).unwrap();
    let u3_sq = c.b.div(b2).unwrap();
    let u3 = u3_sq.sqrt().ok_or_else(|| PairingError::Unsupported("isomorphism needs a larger field".into()))?;
    let mut d = DualIsogeny { psi, u2, u3 };
    let r = loop {
        let r = c.random_point(rng);
        if !c.mul_u64(&r, ell).is_infinity() {
            break r;
        }
    };
    if d.apply(&phi.apply(&r)) != c.mul_u64(&r, ell) {
        d.u3 = d.u3.neg();
    }
    Ok(d)
}

// ---------- the degree law ----------

#[derive(Clone, Debug)]
pub struct IsogenyPairingReport {
    pub curve: EllipticCurveFp,
    pub ell: u64,
    pub n: u64,
    /// degree of the extension holding E[n]
    pub ext_degree: usize,
    /// (pair label, ⟨φP, φQ⟩, ⟨P, Q⟩^{deg φ}, ⟨[deg φ]P, Q⟩)
    pub pairs: Vec<(String, Fe, Fe, Fe)>,
    /// the basis pairing is a primitive n-th root of unity
    pub nondegenerate: bool,
}

impl IsogenyPairingReport {
    pub fn holds(&self) -> bool {
        self.nondegenerate && !self.pairs.is_empty() && self.pairs.iter().all(|(_, l, r, w)| l == r && r == w)
    }
}

/// Pair a torsion basis before and after φ for every ordered pair of basis vectors and their sum.
pub fn isogeny_pairing_check<R: Rng>(
    c: &Curve,
    phi: &Isogeny,
    p: &CurvePoint,
    q: &CurvePoint,
    n: u64,
    rng: &mut R,
) -> Result<Vec<(String, Fe, Fe, Fe)>, PairingError> {
    let s = c.add(p, q);
    let pts = [("P", p), ("Q", q), ("P+Q", &s)];
    let mut out = Vec::new();
    for (la, a) in pts {
        for (lb, b) in pts {
            let lhs = weil_pairing(&phi.codomain, &phi.apply(a), &phi.apply(b), n, rng)?;
            let rhs = weil_pairing(c, a, b, n, rng)?.pow_u64(phi.degree);
            let wedge = weil_pairing(c, &c.mul_u64(a, phi.degree), b, n, rng)?;
            out.push((format!("<{la},{lb}>"), lhs, rhs, wedge));
        }
    }
    Ok(out)
}

/// Full check for a curve over 𝔽_q: kernel = first rational point of order ℓ, E[n] over
/// the smallest extension of degree ≤ max_e.
pub fn isogeny_law<R: Rng>(
    e: &EllipticCurveFp,
    ell: u64,
    n: u64,
    max_e: usize,
    rng: &mut R,
) -> Result<IsogenyPairingReport, PairingError> {
    if n < 2 || n % e.q == 0 || !is_prime(n) {
        return Err(PairingError::BadOrder(n));
    }
    let kers = e.rational_points_of_order(ell)?;
    let k0 = kers.first().ok_or(PairingError::NoKernel(ell))?;
    let (c, p, q) = torsion_field(e, n, max_e, rng)?;
    let k = match k0 {
        CurvePoint::Affine(x, y) => CurvePoint::Affine(Fe::from_coeffs(&c.field, x.coeffs()), Fe::from_coeffs(&c.field, y.coeffs())),
        CurvePoint::Infinity => unreachable!(),
    };
    let phi = velu_isogeny(&c, &k, ell)?;
    let base = weil_pairing(&c, &p, &q, n, rng)?;
    let nondegenerate = base.order_dividing(n) == Some(n);
    let pairs = isogeny_pairing_check(&c, &phi, &p, &q, n, rng)?;
    Ok(IsogenyPairingReport { curve: e.clone(), ell, n, ext_degree: c.field.e, pairs, nondegenerate })
}

/// Curves y² = x³ + ax + b, q < q_max, with a rational ℓ-torsion point and E[n] over a
/// small extension, scanned in increasing (q, a, b).
pub fn find_instances(ell: u64, n: u64, q_max: u64, max_e: usize, limit: usize) -> Vec<EllipticCurveFp> {
    let mut out = Vec::new();
    for q in (5..q_max).filter(|&q| is_prime(q) && q != n && q != ell) {
        for a in 1..q.min(12) {
            for b in 1..q.min(12) {
                let Ok(e) = EllipticCurveFp::new(q, a as i64, b as i64) else { continue };
                if e.point_count() % ell != 0 {
                    continue;
                }
                let ok = (1..=max_e).any(|k| {
                    let nn = BigUint::from(n);
                    let qk = BigUint::from(q).pow(k as u32);
                    ((qk - 1u32) % &nn).is_zero() && (e.point_count_ext(k) % (&nn * &nn)).is_zero()
                });
                if ok {
                    out.push(e);
                    if out.len() >= limit {
                        return out;
                    }
                    break;
                }
            }
            if out.last().map(|c| c.q) == Some(q) {
                break;
            }
        }
    }
    out
}

/// Prime-field elements print as signed residues, others as polynomials in t.
pub fn fe_to_string(x: &Fe) -> String {
    if x.field.e == 1 {
        let v = x.coeffs().first().copied().unwrap_or(0);
        let s = BigInt::from(v);
        let q = BigInt::from(x.field.q);
        let alt = &s - &q;
        return if alt.abs() < s { alt.to_string() } else { s.to_string() };
    }
    let terms: Vec<String> = x
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| **c != 0)
        .map(|(i, c)| match i {
            0 => c.to_string(),
            1 => format!("{c}*t"),
            _ => format!("{c}*t^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(s: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(s)
    }

    #[test]
    fn field_arithmetic() {
        let f = FiniteField::new(7, 2).unwrap();
        // x² + 1 is the first irreducible quadratic mod 7 (−1 is a non-residue)
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let mut g = rng(1);
        for _ in 0..50 {
            let a = Fe::random(&f, &mut g);
            if a.is_zero() {
                continue;
            }
            assert!(a.mul(&a.inv().unwrap()).is_one());
            let s = a.square();
            let r = s.sqrt().unwrap();
            assert_eq!(r.square(), s);
            assert!(a.pow(f.order()).eq(&a));
        }
        let f3 = FiniteField::new(11, 3).unwrap();
        assert!(is_irreducible(f3.modulus(), 11));
        assert!(FiniteField::new(9, 1).is_err());
    }

    #[test]
    fn point_counts_match_enumeration() {
        for (q, a, b) in [(11u64, 1i64, 1i64), (13, 2, 5), (101, 3, 7)] {
            let e = EllipticCurveFp::new(q, a, b).unwrap();
            let c = e.over(1).unwrap();
            let mut n = 1u64;
            for x in 0..q {
                for y in 0..q {
                    if c.contains(&CurvePoint::Affine(Fe::from_u64(&c.field, x), Fe::from_u64(&c.field, y))) {
                        n += 1;
                    }
                }
            }
            assert_eq!(e.point_count(), n);
            // over 𝔽_{q²}: the random point times the order is O
            let c2 = e.over(2).unwrap();
            let p = c2.random_point(&mut rng(q));
            assert!(c2.mul(&p, c2.order().unwrap()).is_infinity());
        }
        assert!(matches!(EllipticCurveFp::new(11, 0, 0), Err(PairingError::Singular(11))));
    }

    fn five_torsion_curve() -> (Curve, CurvePoint, CurvePoint) {
        static CACHE: std::sync::OnceLock<(Curve, CurvePoint, CurvePoint)> = std::sync::OnceLock::new();
        CACHE.get_or_init(search_five_torsion).clone()
    }

    fn search_five_torsion() -> (Curve, CurvePoint, CurvePoint) {
        let mut g = rng(5);
        for q in (11..400).filter(|&q| is_prime(q) && q % 5 == 1) {
            for a in 1..q {
                let e = EllipticCurveFp::new(q, a as i64, 1).unwrap_or(EllipticCurveFp { q, a: 1, b: 1 });
                if e.point_count() % 25 != 0 {
                    continue;
                }
                if let Ok(found) = torsion_field(&e, 5, 1, &mut g) {
                    return found;
                }
            }
        }
        panic!("no curve with rational 5-torsion");
    }

    #[test]
    fn pairing_on_full_rational_five_torsion() {
        let (c, p, q) = five_torsion_curve();
        let mut g = rng(9);
        let z = weil_pairing(&c, &p, &q, 5, &mut g).unwrap();
        assert_eq!(z.order_dividing(5), Some(5));
        // every nonzero R = aP + bQ against P and Q
        for a in 0..5i64 {
            for b in 0..5i64 {
                if a == 0 && b == 0 {
                    continue;
                }
                let r = c.add(&c.mul_i64(&p, a), &c.mul_i64(&q, b));
                assert!(weil_pairing(&c, &r, &r, 5, &mut g).unwrap().is_one());
                assert_eq!(weil_pairing(&c, &r, &q, 5, &mut g).unwrap(), z.pow_u64(a as u64));
                assert_eq!(weil_pairing(&c, &p, &r, 5, &mut g).unwrap(), z.pow_u64(b as u64));
            }
        }
        assert!(matches!(weil_pairing(&c, &p, &c.random_point(&mut g), 5, &mut g), Err(PairingError::NotTorsion(5)) | Ok(_)));
    }

    #[test]
    fn pairing_rejects_non_torsion() {
        let e = EllipticCurveFp::new(101, 3, 7).unwrap();
        let c = e.over(1).unwrap();
        let mut g = rng(2);
        let p = loop {
            let p = c.random_point(&mut g);
            if !c.mul_u64(&p, 3).is_infinity() {
                break p;
            }
        };
        assert_eq!(weil_pairing(&c, &p, &p, 3, &mut g), Err(PairingError::NotTorsion(3)));
    }

    fn two_isogeny() -> (Curve, Isogeny) {
        // y² = x³ − x + 0 has j = 1728; pick one with a single rational 2-torsion point and j ≠ 0, 1728
        let e = EllipticCurveFp::new(103, 2, 3).unwrap();
        let k = e.rational_points_of_order(2).unwrap();
        let c = e.over(1).unwrap();
        let phi = velu_isogeny(&c, &k[0], 2).unwrap();
        (c, phi)
    }

    #[test]
    fn velu_homomorphism_and_kernel() {
        let e = EllipticCurveFp::new(103, 2, 3).unwrap();
        let pts = e.rational_points_of_order(2).unwrap();
        assert!(!pts.is_empty());
        let (c, phi) = two_isogeny();
        assert!(phi.apply(&pts[0]).is_infinity());
        let mut g = rng(4);
        for _ in 0..100 {
            let p = c.random_point(&mut g);
            let q = c.random_point(&mut g);
            let lhs = phi.apply(&c.add(&p, &q));
            assert!(phi.codomain.contains(&lhs));
            assert_eq!(lhs, phi.codomain.add(&phi.apply(&p), &phi.apply(&q)));
        }
        let not_kernel = c.random_point(&mut g);
        assert!(velu_isogeny(&c, &not_kernel, 2).is_err() || c.mul_u64(&not_kernel, 2).is_infinity());
    }

    #[test]
    fn dual_composition_is_multiplication() {
        for (q, a, b, ell) in [(103u64, 2i64, 3i64, 2u64), (11, 1, 3, 3), (131, 1, 4, 5), (13, 1, 4, 7)] {
            let e = EllipticCurveFp::new(q, a, b).unwrap();
            let k = e.rational_points_of_order(ell).unwrap().into_iter().next().unwrap();
            let mut g = rng(q);
            // extension holding E[ℓ]
            let (c, _, _) = torsion_field(&e, ell, 12, &mut g).unwrap();
            let k = match k {
                CurvePoint::Affine(x, y) => CurvePoint::Affine(Fe::from_coeffs(&c.field, x.coeffs()), Fe::from_coeffs(&c.field, y.coeffs())),
                CurvePoint::Infinity => unreachable!(),
            };
            let phi = velu_isogeny(&c, &k, ell).unwrap();
            let dual = dual_isogeny(&phi, &mut g).unwrap();
            for _ in 0..50 {
                let p = c.random_point(&mut g);
                assert_eq!(dual.apply(&phi.apply(&p)), c.mul_u64(&p, ell), "q={q} ℓ={ell}");
            }
        }
    }

    #[test]
    fn degree_law_examples() {
        let mut g = rng(7);
        for (ell, n) in [(2u64, 3u64), (5, 3), (3, 5)] {
            let cands = find_instances(ell, n, 400, 4, 1);
            let e = cands.first().unwrap_or_else(|| panic!("no instance for ℓ={ell}, n={n}"));
            let rep = isogeny_law(e, ell, n, 4, &mut g).unwrap();
            assert!(rep.holds(), "{rep:?}");
            assert_eq!(rep.pairs.len(), 9);
        }
    }

    #[test]
    fn isomorphism_preserves_pairing() {
        // (x, y) ↦ (u²x, u³y) onto y² = x³ + u⁴a x + u⁶b
        let (c, p, q) = five_torsion_curve();
        let u = Fe::from_u64(c.field(), 3);
        let c2 = Curve::new(c.a.mul(&u.pow_u64(4)), c.b.mul(&u.pow_u64(6))).unwrap();
        let map = |t: &CurvePoint| match t {
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.mul(&u.square()), y.mul(&u.pow_u64(3))),
            CurvePoint::Infinity => CurvePoint::Infinity,
        };
        let mut g = rng(8);
        assert_eq!(weil_pairing(&c2, &map(&p), &map(&q), 5, &mut g).unwrap(), weil_pairing(&c, &p, &q, 5, &mut g).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn bilinear_and_compatible_with_multiplication(a in 0i64..5, b in 0i64..5, m in 1i64..5, seed in 0u64..1000) {
            let (c, p, q) = five_torsion_curve();
            let mut g = rng(seed);
            let z = weil_pairing(&c, &p, &q, 5, &mut g).unwrap();
            let lhs = weil_pairing(&c, &c.mul_i64(&p, a), &c.mul_i64(&q, b), 5, &mut g).unwrap();
            prop_assert_eq!(lhs, z.pow_u64((a * b) as u64));
            let l = weil_pairing(&c, &c.mul_i64(&p, m), &q, 5, &mut g).unwrap();
            let r = weil_pairing(&c, &p, &c.mul_i64(&q, m), 5, &mut g).unwrap();
            prop_assert_eq!(l, r);
            let skew = weil_pairing(&c, &q, &p, 5, &mut g).unwrap();
            prop_assert!(skew.mul(&z).is_one());
        }
    }
}
