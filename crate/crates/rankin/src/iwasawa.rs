//! Truncated Iwasawa algebras Λ = ℤ_p[[ℤ_p^×]] realized as group rings
//! (ℤ/p^r)[(ℤ/p^{m+1})^×], their triple tensor products, specialization at
//! points "j + χ", and the d-regularized p-adic zeta element.

use num_integer::Integer;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

use crate::dirichlet::{crt, CharError, DirichletChar, PadicEmbedding};
use crate::ring_tower::{common_order, rat, CycloElem, RingElem, RingError, ZModPr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IwasawaError {
    #[error("{0} is not a unit mod p")]
    NotUnit(i64),
    #[error("character modulus {modulus} is not a power of p dividing {level}")]
    ConductorTooLarge { modulus: u64, level: u64 },
    #[error("gcd({d}, 6pN) must be 1")]
    BadRegulator { d: i64 },
    #[error("precision: {0}")]
    Precision(String),
    #[error("level mismatch")]
    Mismatch,
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Truncation data shared by every element: coefficients mod p^r, group (ℤ/p^{m+1})^×.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    pub p: u64,
    pub r: u32,
    pub m: u32,
}

impl Level {
    pub fn new(p: u64, r: u32, m: u32) -> Self {
        assert!(p % 2 == 1 && r >= 1);
        Level { p, r, m }
    }

    /// p^{m+1}
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.m + 1)
    }

    pub fn group_order(&self) -> u64 {
        self.modulus() / self.p * (self.p - 1)
    }

    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        let p = self.p;
        (1..self.modulus()).filter(move |u| u % p != 0)
    }

    pub fn scalar(&self, v: i64) -> ZModPr {
        ZModPr::new(self.p, self.r, v)
    }
}

/// Values u ↦ u^j χ(u) on the group, cached for repeated specialization.
///
/// u^j is only well defined mod p^{m+1}, so j ≠ 0 requires r ≤ m+1.
#[derive(Clone, Debug)]
pub struct PointTable {
    level: Level,
    pub j: i64,
    order: u64,
    vals: Vec<CycloElem<ZModPr>>,
}

impl PointTable {
    pub fn new(level: Level, j: i64, chi: &DirichletChar) -> Result<Self, IwasawaError> {
        let big = level.modulus();
        let md = chi.modulus();
        if big % md != 0 {
            return Err(IwasawaError::ConductorTooLarge { modulus: md, level: big });
        }
        if j != 0 && level.r > level.m + 1 {
            return Err(IwasawaError::Precision(format!(
                "u^{j} is not defined mod p^{} on (Z/p^{})^x",
                level.r,
                level.m + 1
            )));
        }
        let emb = PadicEmbedding::new(level.p, level.r);
        let order = emb.wild_order(chi.order())?;
        let zero = CycloElem::scalar(order, level.scalar(0));
        let mut vals = vec![zero; big as usize];
        for u in level.units() {
            let pw = level.scalar(u as i64).pow_i(j).expect("unit");
            vals[u as usize] = emb.char_value(chi, u as i64)?.scale(&pw);
        }
        Ok(PointTable { level, j, order, vals })
    }

    pub fn trivial(level: Level, j: i64) -> Result<Self, IwasawaError> {
        Self::new(level, j, &DirichletChar::trivial(1))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn value(&self, u: u64) -> &CycloElem<ZModPr> {
        &self.vals[(u % self.level.modulus()) as usize]
    }
}

/// Element Σ c_u [u] of (ℤ/p^r)[(ℤ/p^{m+1})^×], stored densely by residue.
#[derive(Clone, PartialEq)]
pub struct IwasawaElem {
    level: Level,
    c: Vec<ZModPr>,
}

impl IwasawaElem {
    pub fn zero(level: Level) -> Self {
        IwasawaElem { level, c: vec![level.scalar(0); level.modulus() as usize] }
    }

    pub fn one(level: Level) -> Self {
        Self::embed_group_element(1, level).unwrap()
    }

    /// [u mod p^{m+1}].
    pub fn embed_group_element(u: i64, level: Level) -> Result<Self, IwasawaError> {
        if u.rem_euclid(level.p as i64) == 0 {
            return Err(IwasawaError::NotUnit(u));
        }
        let mut x = Self::zero(level);
        x.c[u.rem_euclid(level.modulus() as i64) as usize] = level.scalar(1);
        Ok(x)
    }

    pub fn from_terms(level: Level, terms: &[(i64, ZModPr)]) -> Result<Self, IwasawaError> {
        let mut x = Self::zero(level);
        for (u, c) in terms {
            if u.rem_euclid(level.p as i64) == 0 {
                return Err(IwasawaError::NotUnit(*u));
            }
            let i = u.rem_euclid(level.modulus() as i64) as usize;
            x.c[i] = x.c[i] + *c;
        }
        Ok(x)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeff(&self, u: i64) -> ZModPr {
        self.c[u.rem_euclid(self.level.modulus() as i64) as usize]
    }

    /// Nonzero (u, c_u) pairs in increasing u.
    pub fn support(&self) -> impl Iterator<Item = (u64, ZModPr)> + '_ {
        self.c.iter().enumerate().filter(|(_, c)| c.value() != 0).map(|(u, c)| (u as u64, *c))
    }

    pub fn scale(&self, s: ZModPr) -> Self {
        IwasawaElem { level: self.level, c: self.c.iter().map(|x| *x * s).collect() }
    }

    /// Multiply by [g].
    pub fn shift(&self, g: i64) -> Self {
        let n = self.level.modulus() as i64;
        let mut out = Self::zero(self.level);
        for (u, c) in self.support() {
            out.c[((u as i64) * g).rem_euclid(n) as usize] = c;
        }
        out
    }

    /// Image under [u] ↦ [u^{-1}].
    pub fn invert_group(&self) -> Self {
        let n = self.level.modulus() as i64;
        let mut out = Self::zero(self.level);
        for (u, c) in self.support() {
            let inv = (u as i64).extended_gcd(&n).x.rem_euclid(n);
            out.c[inv as usize] = c;
        }
        out
    }

    /// Level m → m−1: sum over fibers of (ℤ/p^{m+1})^× → (ℤ/p^m)^×.
    pub fn reduce_level(&self) -> Result<Self, IwasawaError> {
        if self.level.m == 0 {
            return Err(IwasawaError::Precision("level 0 has no quotient".into()));
        }
        let lv = Level { m: self.level.m - 1, ..self.level };
        let n = lv.modulus();
        let mut out = Self::zero(lv);
        for (u, c) in self.support() {
            let i = (u % n) as usize;
            out.c[i] = out.c[i] + c;
        }
        Ok(out)
    }

    /// Coefficients r → r2 ≤ r.
    pub fn reduce_precision(&self, r2: u32) -> Result<Self, IwasawaError> {
        let lv = Level { r: r2, ..self.level };
        let c = self.c.iter().map(|x| x.reduce_precision(r2)).collect::<Result<_, _>>()?;
        Ok(IwasawaElem { level: lv, c })
    }

    /// The ring map [u] ↦ u^j χ(u), landing in ℤ/p^r[ζ_{p^w}].
    pub fn specialize(&self, j: i64, chi: &DirichletChar) -> Result<CycloElem<ZModPr>, IwasawaError> {
        Ok(self.specialize_table(&PointTable::new(self.level, j, chi)?))
    }

    pub fn specialize_table(&self, t: &PointTable) -> CycloElem<ZModPr> {
        assert_eq!(t.level, self.level, "point table level");
        let mut acc = CycloElem::scalar(t.order, self.level.scalar(0));
        for (u, c) in self.support() {
            acc = acc.plus(&t.vals[u as usize].scale(&c));
        }
        acc
    }

    /// mom^j: specialization at j with trivial character.
    pub fn moment_gamma(&self, j: i64) -> Result<ZModPr, IwasawaError> {
        let v = self.specialize(j, &DirichletChar::trivial(1))?;
        Ok(v.as_scalar().expect("trivial character gives a scalar"))
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.level, o.level, "Iwasawa level mismatch");
    }
}

impl fmt::Debug for IwasawaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.support().map(|(u, c)| format!("{}[{u}]", c.value())).collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl RingElem for IwasawaElem {
    fn zero_like(&self) -> Self {
        Self::zero(self.level)
    }
    fn one_like(&self) -> Self {
        Self::one(self.level)
    }
    fn from_int_like(&self, n: &num_bigint::BigInt) -> Self {
        Self::one(self.level).scale(ZModPr::from_bigint(self.level.p, self.level.r, n))
    }
    fn plus(&self, o: &Self) -> Self {
        self.check(o);
        IwasawaElem { level: self.level, c: self.c.iter().zip(&o.c).map(|(a, b)| *a + *b).collect() }
    }
    fn minus(&self, o: &Self) -> Self {
        self.check(o);
        IwasawaElem { level: self.level, c: self.c.iter().zip(&o.c).map(|(a, b)| *a - *b).collect() }
    }
    fn times(&self, o: &Self) -> Self {
        self.check(o);
        let n = self.level.modulus();
        let mut out = Self::zero(self.level);
        let b: Vec<(u64, ZModPr)> = o.support().collect();
        for (u, c) in self.support() {
            for (v, d) in &b {
                let i = ((u * v) % n) as usize;
                out.c[i] = out.c[i] + c * *d;
            }
        }
        out
    }
    fn negate(&self) -> Self {
        IwasawaElem { level: self.level, c: self.c.iter().map(|x| -*x).collect() }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.value() == 0)
    }
    fn compatible(&self, o: &Self) -> bool {
        self.level == o.level
    }
}

/// Element of Λ ⊗ Λ ⊗ Λ, sparse on triples of residues.
#[derive(Clone, PartialEq)]
pub struct IwasawaTensorElem {
    level: Level,
    terms: BTreeMap<[u64; 3], ZModPr>,
}

impl IwasawaTensorElem {
    pub fn zero(level: Level) -> Self {
        IwasawaTensorElem { level, terms: BTreeMap::new() }
    }

    pub fn one(level: Level) -> Self {
        Self::pure(&IwasawaElem::one(level), &IwasawaElem::one(level), &IwasawaElem::one(level))
    }

    /// [a] ⊗ [b] ⊗ [c]
    pub fn group_element(level: Level, a: i64, b: i64, c: i64) -> Result<Self, IwasawaError> {
        Ok(Self::pure(
            &IwasawaElem::embed_group_element(a, level)?,
            &IwasawaElem::embed_group_element(b, level)?,
            &IwasawaElem::embed_group_element(c, level)?,
        ))
    }

    pub fn pure(a: &IwasawaElem, b: &IwasawaElem, c: &IwasawaElem) -> Self {
        let mut out = Self::zero(a.level);
        for (u, x) in a.support() {
            for (v, y) in b.support() {
                for (w, z) in c.support() {
                    out.add_term([u, v, w], x * y * z);
                }
            }
        }
        out
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<[u64; 3], ZModPr> {
        &self.terms
    }

    fn add_term(&mut self, k: [u64; 3], c: ZModPr) {
        if c.value() == 0 {
            return;
        }
        let e = self.terms.entry(k).or_insert(self.level.scalar(0));
        *e = *e + c;
        if e.value() == 0 {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, s: ZModPr) -> Self {
        let mut out = Self::zero(self.level);
        for (k, c) in &self.terms {
            out.add_term(*k, *c * s);
        }
        out
    }

    /// Specialize each factor at its own point; a ring map to ℤ/p^r[ζ].
    pub fn specialize(&self, points: [&PointTable; 3]) -> CycloElem<ZModPr> {
        let order = points.iter().map(|t| t.order).fold(1, |a, b| a.lcm(&b));
        let lifted: Vec<Vec<CycloElem<ZModPr>>> = points
            .iter()
            .map(|t| t.vals.iter().map(|v| v.lift_to(order).unwrap()).collect())
            .collect();
        let mut acc = CycloElem::scalar(order, self.level.scalar(0));
        for (k, c) in &self.terms {
            let v = lifted[0][k[0] as usize].times(&lifted[1][k[1] as usize]).times(&lifted[2][k[2] as usize]);
            acc = acc.plus(&v.scale(c));
        }
        acc
    }
}

impl fmt::Debug for IwasawaTensorElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> =
            self.terms.iter().map(|(k, c)| format!("{}[{}⊗{}⊗{}]", c.value(), k[0], k[1], k[2])).collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl RingElem for IwasawaTensorElem {
    fn zero_like(&self) -> Self {
        Self::zero(self.level)
    }
    fn one_like(&self) -> Self {
        Self::one(self.level)
    }
    fn from_int_like(&self, n: &num_bigint::BigInt) -> Self {
        Self::one(self.level).scale(ZModPr::from_bigint(self.level.p, self.level.r, n))
    }
    fn plus(&self, o: &Self) -> Self {
        assert_eq!(self.level, o.level);
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, *c);
        }
        out
    }
    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn times(&self, o: &Self) -> Self {
        assert_eq!(self.level, o.level);
        let n = self.level.modulus();
        let mut out = Self::zero(self.level);
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term([a[0] * b[0] % n, a[1] * b[1] % n, a[2] * b[2] % n], *x * *y);
            }
        }
        out
    }
    fn negate(&self) -> Self {
        self.scale(self.level.scalar(-1))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn compatible(&self, o: &Self) -> bool {
        self.level == o.level
    }
}

/// Multiply cyclotomic values of possibly different orders.
pub fn cyclo_times(a: &CycloElem<ZModPr>, b: &CycloElem<ZModPr>) -> CycloElem<ZModPr> {
    let (a, b) = common_order(a, b);
    a.times(&b)
}

/// Check whether two cyclotomic values agree after lifting to a common order.
pub fn cyclo_eq(a: &CycloElem<ZModPr>, b: &CycloElem<ZModPr>) -> bool {
    let (a, b) = common_order(a, b);
    a == b
}

/// The d-regularized zeta element _dζ_p(t(N)) at the given level.
///
/// For every character η of (ℤ/p^{m+1})^× (extended by zero on multiples of p)
/// its value is d²ζ(t(N), η, 0) − d·η(d)^{-1}ζ(dt(N), η, 0). Both partial zeta
/// values are finite Hurwitz sums Σ_a η(a)(1/2 − a/M), M = N·p^{m+1}, so the
/// interpolated function is Σ_x η(x)W(x) with
/// W(x) = d²(1/2 − a/M) − d(1/2 − a'/M), where a ≡ (t, x) and a' ≡ (dt, dx) mod (N, p^{m+1}).
/// Fourier uniqueness on the finite group makes Σ W(x)[x] the element; W is
/// p-integral, which is checked rather than assumed.
pub fn mazur_zeta(t: i64, n: u64, d: i64, level: Level) -> Result<IwasawaElem, IwasawaError> {
    let bad = 6 * level.p as i64 * n as i64;
    if d.gcd(&bad) != 1 {
        return Err(IwasawaError::BadRegulator { d });
    }
    let pm = level.modulus();
    let big = (n * pm) as i64;
    let half = rat(1, 2);
    let d2 = BigRational::from_integer((d * d).into());
    let dq = BigRational::from_integer(d.into());
    let mut out = IwasawaElem::zero(level);
    for x in level.units() {
        let a = crt(t.rem_euclid(n as i64) as u64, n, x, pm) as i64;
        let a2 = crt((d * t).rem_euclid(n as i64) as u64, n, (d.rem_euclid(pm as i64) as u64 * x) % pm, pm) as i64;
        let h = |a: i64| &half - rat(if a == 0 { big } else { a }, big);
        let w = &d2 * h(a) - &dq * h(a2);
        out.c[x as usize] = ZModPr::from_rational(level.p, level.r, &w)
            .map_err(|_| IwasawaError::Precision(format!("coefficient {w} at [{x}] is not p-integral")))?;
    }
    Ok(out)
}

/// The value predicted for _dζ_p(t(N)) at η, from partial zeta sums (η taken mod p^{m+1}).
pub fn mazur_zeta_oracle(
    t: i64,
    n: u64,
    d: i64,
    eta: &DirichletChar,
    level: Level,
) -> Result<CycloElem<ZModPr>, IwasawaError> {
    let eta = eta.induce(level.modulus())?;
    let emb = PadicEmbedding::new(level.p, level.r);
    let one = rat(1, 1);
    let z1 = crate::dirichlet::partial_zeta_at_zero(t, n, &eta);
    let z2 = crate::dirichlet::partial_zeta_at_zero(d * t, n, &eta);
    let eta_d_inv = eta.inverse().value(d, &one);
    // only the combination is p-integral, so combine over ℚ(ζ) first
    let v = z1.scale(&rat(d * d, 1)).minus(&z2.times(&eta_d_inv).scale(&rat(d, 1)));
    Ok(emb.embed(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lv(p: u64, r: u32, m: u32) -> Level {
        Level::new(p, r, m)
    }

    #[test]
    fn group_elements_multiply() {
        let l = lv(5, 3, 1);
        let e = |u| IwasawaElem::embed_group_element(u, l).unwrap();
        assert_eq!(e(1), IwasawaElem::one(l));
        assert_eq!(e(2).times(&e(3)), e(6));
        assert!(IwasawaElem::embed_group_element(10, l).is_err());
        // (1+p)^{p^m} ≡ 1 mod p^{m+1}
        let x = e(6).pow_u(5).reduce_precision(1).unwrap();
        assert_eq!(x, IwasawaElem::one(lv(5, 1, 1)));
    }

    #[test]
    fn specialization_examples() {
        let l = lv(5, 2, 1);
        let triv = DirichletChar::trivial(1);
        for u in [1, 2, 3, 7, 24] {
            let x = IwasawaElem::embed_group_element(u, l).unwrap();
            assert_eq!(x.specialize(0, &triv).unwrap().as_scalar(), Some(l.scalar(1)));
        }
        let two = IwasawaElem::embed_group_element(2, l).unwrap();
        assert_eq!(two.moment_gamma(3).unwrap(), l.scalar(8));
        assert!(two.specialize(1, &DirichletChar::trivial(125)).is_err());
        assert!(IwasawaElem::one(lv(5, 4, 1)).specialize(2, &triv).is_err());
    }

    #[test]
    fn moments() {
        let l = lv(7, 2, 1);
        let x = IwasawaElem::from_terms(l, &[(3, l.scalar(4)), (10, l.scalar(-2)), (48, l.scalar(5))]).unwrap();
        assert_eq!(x.moment_gamma(0).unwrap(), l.scalar(7));
        assert_eq!(x.moment_gamma(1).unwrap(), l.scalar(4 * 3 - 2 * 10 + 5 * 48));
        assert_eq!(x.moment_gamma(2).unwrap(), l.scalar(4 * 9 - 2 * 100 + 5 * 48 * 48));
    }

    #[test]
    fn reduction_maps_are_homomorphisms() {
        let l = lv(3, 3, 2);
        let a = IwasawaElem::from_terms(l, &[(2, l.scalar(5)), (13, l.scalar(1))]).unwrap();
        let b = IwasawaElem::from_terms(l, &[(4, l.scalar(2)), (25, l.scalar(7))]).unwrap();
        assert_eq!(a.times(&b).reduce_level().unwrap(), a.reduce_level().unwrap().times(&b.reduce_level().unwrap()));
        assert_eq!(
            a.times(&b).reduce_precision(1).unwrap(),
            a.reduce_precision(1).unwrap().times(&b.reduce_precision(1).unwrap())
        );
    }

    #[test]
    fn tensor_specialization_is_multiplicative() {
        let l = lv(5, 2, 1);
        let chi = DirichletChar::all(25).into_iter().find(|c| c.order() == 20).unwrap();
        let t0 = PointTable::new(l, 1, &chi).unwrap();
        let t1 = PointTable::trivial(l, 0).unwrap();
        let t2 = PointTable::new(l, 2, &chi.inverse()).unwrap();
        let a = IwasawaTensorElem::group_element(l, 2, 3, 7).unwrap().plus(&IwasawaTensorElem::group_element(l, 4, 1, 1).unwrap());
        let b = IwasawaTensorElem::group_element(l, 11, 2, 3).unwrap().scale(l.scalar(3));
        let lhs = a.times(&b).specialize([&t0, &t1, &t2]);
        let rhs = a.specialize([&t0, &t1, &t2]).times(&b.specialize([&t0, &t1, &t2]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mazur_zeta_trivial_character() {
        let l = lv(5, 4, 1);
        let mu = mazur_zeta(1, 1, 7, l).unwrap();
        let got = mu.specialize(0, &DirichletChar::trivial(1)).unwrap();
        let want = mazur_zeta_oracle(1, 1, 7, &DirichletChar::trivial(1), l).unwrap();
        assert!(cyclo_eq(&got, &want));
        assert!(mazur_zeta(1, 1, 3, l).is_err());
        assert!(mazur_zeta(1, 1, 5, l).is_err());
    }

    #[test]
    fn mazur_zeta_interpolates_all_characters() {
        for (p, m, n, t, d) in [(3u64, 1u32, 1u64, 1i64, 5i64), (5, 1, 4, 3, 7), (7, 0, 5, 2, 11), (3, 2, 2, 1, 7)] {
            let l = lv(p, 3, m);
            let mu = mazur_zeta(t, n, d, l).unwrap();
            for eta in DirichletChar::all(l.modulus()) {
                let got = mu.specialize(0, &eta).unwrap();
                let want = mazur_zeta_oracle(t, n, d, &eta, l).unwrap();
                assert!(cyclo_eq(&got, &want), "p={p} m={m} {eta:?}");
            }
        }
    }

    #[test]
    fn two_regulators_are_consistent() {
        // (d'² − d'[d'^{-1}])·_dζ = (d² − d[d^{-1}])·_{d'}ζ at N = 1
        let l = lv(5, 3, 1);
        let (d, dp) = (7i64, 11i64);
        let reg = |d: i64| IwasawaElem::one(l).scale(l.scalar(d * d)).minus(&IwasawaElem::embed_group_element(d, l).unwrap().invert_group().scale(l.scalar(d)));
        let lhs = reg(dp).times(&mazur_zeta(1, 1, d, l).unwrap());
        let rhs = reg(d).times(&mazur_zeta(1, 1, dp, l).unwrap());
        assert_eq!(lhs, rhs);
    }

    /// Fourier inversion done the long way over ℚ(ζ) at a small level agrees.
    #[test]
    fn fourier_inversion_matches() {
        use crate::ring_tower::cyclotomic_reduce;
        let l = lv(3, 3, 1);
        let (t, n, d) = (1i64, 2u64, 5i64);
        let mu = mazur_zeta(t, n, d, l).unwrap();
        let chars = DirichletChar::all(9);
        let ord = 6u64;
        for x in l.units() {
            // c_x = (1/|G|) Σ_η η(x)^{-1} v(η), all values in ℚ(ζ_6)
            let mut acc = CycloElem::scalar(ord, rat(0, 1));
            for eta in &chars {
                let z1 = crate::dirichlet::partial_zeta_at_zero(t, n, eta);
                let z2 = crate::dirichlet::partial_zeta_at_zero(d * t, n, eta);
                let one = rat(1, 1);
                let ex = eta.inverse().value(x as i64, &one).lift_to(ord).unwrap();
                let ed = eta.inverse().value(d, &one).lift_to(ord).unwrap();
                let v = z1.lift_to(ord).unwrap().scale(&rat(d * d, 1)).minus(&z2.lift_to(ord).unwrap().times(&ed).scale(&rat(d, 1)));
                acc = acc.plus(&v.times(&ex));
            }
            let c = acc.scale(&rat(1, 6));
            let c = cyclotomic_reduce(c.coeffs(), ord, &rat(0, 1)).as_scalar().unwrap();
            assert_eq!(ZModPr::from_rational(3, 3, &c).unwrap(), mu.coeff(x as i64), "x={x}");
        }
    }

    fn arb_elem(l: Level) -> impl Strategy<Value = IwasawaElem> {
        let n = l.modulus() as i64;
        proptest::collection::vec((1..n, 0..(l.p.pow(l.r) as i64)), 0..6).prop_map(move |v| {
            let terms: Vec<(i64, ZModPr)> =
                v.into_iter().filter(|(u, _)| u % l.p as i64 != 0).map(|(u, c)| (u, l.scalar(c))).collect();
            IwasawaElem::from_terms(l, &terms).unwrap()
        })
    }

    fn arb_level() -> impl Strategy<Value = Level> {
        (prop::sample::select(vec![3u64, 5, 7]), 0u32..=2, 1u32..=4).prop_map(|(p, m, r)| Level::new(p, r, m))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn ring_axioms((a, b, c) in arb_level().prop_flat_map(|l| (arb_elem(l), arb_elem(l), arb_elem(l)))) {
            prop_assert_eq!(a.times(&b), b.times(&a));
            prop_assert_eq!(a.times(&b).times(&c), a.times(&b.times(&c)));
            prop_assert_eq!(a.times(&b.plus(&c)), a.times(&b).plus(&a.times(&c)));
            prop_assert_eq!(a.times(&a.one_like()), a.clone());
        }

        #[test]
        fn specialization_is_multiplicative((a, b, k) in arb_level().prop_filter("r ≤ m+1", |l| l.r <= l.m + 1)
            .prop_flat_map(|l| (arb_elem(l), arb_elem(l), 0usize..1000)))
        {
            let l = a.level();
            let chars = DirichletChar::all(l.modulus());
            let chi = &chars[k % chars.len()];
            let j = (k % 4) as i64;
            let t = PointTable::new(l, j, chi).unwrap();
            prop_assert_eq!(a.times(&b).specialize_table(&t), a.specialize_table(&t).times(&b.specialize_table(&t)));
        }
    }
}
