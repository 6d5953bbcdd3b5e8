//! Divided-power symmetric tensors TSym^k of a free rank-2 module with basis
//! x, y; Clebsch–Gordan maps; moment maps on the group ring (ℤ/p^r)[(ℤ/p^r)²];
//! and the projection used for cyclotomic twists.

use num_bigint::BigInt;
use std::collections::BTreeMap;

use crate::ring_tower::{RingElem, ZModPr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TsymError {
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("need 0 ≤ j ≤ min(k, k') (k={k}, k'={k2}, j={j})")]
    Inequality { k: usize, k2: usize, j: usize },
    #[error("ring mismatch")]
    Ring,
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |a, i| a * i)
}

/// Element of TSym^k; `c[i]` is the coefficient of x^{[i]} y^{[k−i]}.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<R: RingElem> {
    k: usize,
    c: Vec<R>,
}

impl<R: RingElem> SymTensor<R> {
    pub fn new(k: usize, c: Vec<R>) -> Result<Self, TsymError> {
        if c.len() != k + 1 {
            return Err(TsymError::Degree(format!("{} coefficients for degree {k}", c.len())));
        }
        Ok(SymTensor { k, c })
    }

    pub fn zero(k: usize, sample: &R) -> Self {
        SymTensor { k, c: vec![sample.zero_like(); k + 1] }
    }

    /// The unit 1 ∈ TSym^0.
    pub fn unit(sample: &R) -> Self {
        SymTensor { k: 0, c: vec![sample.one_like()] }
    }

    /// x^{[i]} y^{[k−i]}.
    pub fn basis(k: usize, i: usize, sample: &R) -> Self {
        let mut t = Self::zero(k, sample);
        t.c[i] = sample.one_like();
        t
    }

    /// (a·x + b·y)^{[k]} = Σ_i a^i b^{k−i} x^{[i]} y^{[k−i]}.
    pub fn divided_power(a: &R, b: &R, k: usize) -> Self {
        SymTensor { k, c: (0..=k).map(|i| a.pow_u(i as u64).times(&b.pow_u((k - i) as u64))).collect() }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> &R {
        &self.c[i]
    }

    pub fn plus(&self, o: &Self) -> Self {
        assert_eq!(self.k, o.k);
        SymTensor { k: self.k, c: self.c.iter().zip(&o.c).map(|(a, b)| a.plus(b)).collect() }
    }

    pub fn scale(&self, s: &R) -> Self {
        SymTensor { k: self.k, c: self.c.iter().map(|a| a.times(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    /// Functoriality for the linear map x ↦ αx + γy, y ↦ βx + δy.
    pub fn linear_map(&self, m: [[&R; 2]; 2]) -> Self {
        let sample = &self.c[0];
        let mut out = Self::zero(self.k, sample);
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let xi = Self::divided_power(m[0][0], m[1][0], i);
            let yi = Self::divided_power(m[0][1], m[1][1], self.k - i);
            out = out.plus(&tsym_product(&xi, &yi).scale(ci));
        }
        out
    }
}

/// x^{[a]}y^{[b]} · x^{[c]}y^{[d]} = C(a+c, a) C(b+d, b) x^{[a+c]}y^{[b+d]}.
pub fn tsym_product<R: RingElem>(a: &SymTensor<R>, b: &SymTensor<R>) -> SymTensor<R> {
    let (m, n) = (a.k, b.k);
    let mut out = SymTensor::zero(m + n, &a.c[0]);
    for (i, ai) in a.c.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (l, bl) in b.c.iter().enumerate() {
            if bl.is_zero() {
                continue;
            }
            let mult = binomial(i + l, i) * binomial(m - i + n - l, m - i);
            let t = ai.times(bl).times(&ai.from_int_like(&mult));
            out.c[i + l] = out.c[i + l].plus(&t);
        }
    }
    out
}

/// Element of TSym^k ⊗ TSym^{k'} with a Tate-twist tag; `c[i][l]` multiplies
/// x^{[i]}y^{[k−i]} ⊗ x^{[l]}y^{[k'−l]}.
#[derive(Clone, Debug, PartialEq)]
pub struct BiTensor<R: RingElem> {
    pub k: usize,
    pub k2: usize,
    pub twist: i64,
    c: Vec<Vec<R>>,
}

impl<R: RingElem> BiTensor<R> {
    pub fn zero(k: usize, k2: usize, twist: i64, sample: &R) -> Self {
        BiTensor { k, k2, twist, c: vec![vec![sample.zero_like(); k2 + 1]; k + 1] }
    }

    pub fn pure(a: &SymTensor<R>, b: &SymTensor<R>) -> Self {
        let c = a.c.iter().map(|x| b.c.iter().map(|y| x.times(y)).collect()).collect();
        BiTensor { k: a.k, k2: b.k, twist: 0, c }
    }

    pub fn coeff(&self, i: usize, l: usize) -> &R {
        &self.c[i][l]
    }

    pub fn add_to(&mut self, i: usize, l: usize, v: &R) {
        self.c[i][l] = self.c[i][l].plus(v);
    }

    pub fn plus(&self, o: &Self) -> Self {
        assert!(self.k == o.k && self.k2 == o.k2 && self.twist == o.twist);
        let c = self.c.iter().zip(&o.c).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a.plus(b)).collect()).collect();
        BiTensor { c, ..self.clone() }
    }

    pub fn scale(&self, s: &R) -> Self {
        let c = self.c.iter().map(|r| r.iter().map(|a| a.times(s)).collect()).collect();
        BiTensor { c, ..self.clone() }
    }

    /// Componentwise TSym product; twists add.
    pub fn times(&self, o: &Self) -> Self {
        let sample = &self.c[0][0];
        let mut out = BiTensor::zero(self.k + o.k, self.k2 + o.k2, self.twist + o.twist, sample);
        for i in 0..=self.k {
            for l in 0..=self.k2 {
                if self.c[i][l].is_zero() {
                    continue;
                }
                for i2 in 0..=o.k {
                    for l2 in 0..=o.k2 {
                        if o.c[i2][l2].is_zero() {
                            continue;
                        }
                        let mult = binomial(i + i2, i)
                            * binomial(self.k - i + o.k - i2, self.k - i)
                            * binomial(l + l2, l)
                            * binomial(self.k2 - l + o.k2 - l2, self.k2 - l);
                        let t = self.c[i][l].times(&o.c[i2][l2]).times(&sample.from_int_like(&mult));
                        out.c[i + i2][l + l2] = out.c[i + i2][l + l2].plus(&t);
                    }
                }
            }
        }
        out
    }

    /// Apply x ↦ x − a·y in the second factor.
    pub fn shear_second(&self, a: &R) -> Self {
        let one = self.c[0][0].one_like();
        let zero = one.zero_like();
        let na = a.negate();
        let mut out = BiTensor::zero(self.k, self.k2, self.twist, &one);
        for l in 0..=self.k2 {
            let img = SymTensor::basis(self.k2, l, &one).linear_map([[&one, &zero], [&na, &one]]);
            for i in 0..=self.k {
                if self.c[i][l].is_zero() {
                    continue;
                }
                for (l2, v) in img.c.iter().enumerate() {
                    out.c[i][l2] = out.c[i][l2].plus(&self.c[i][l].times(v));
                }
            }
        }
        out
    }

    /// Quotient by the span of x ⊠ 1 and 1 ⊠ x: only y^{[k]} ⊠ y^{[k']} survives.
    pub fn kill_x(&self) -> R {
        self.c[0][0].clone()
    }
}

/// Σ_{i=0}^{j} (−1)^i i!(j−i)! x^{[i]}y^{[j−i]} ⊗ x^{[j−i]}y^{[i]}, twist −j.
pub fn cg_cup_element<R: RingElem>(j: usize, sample: &R) -> BiTensor<R> {
    let mut out = BiTensor::zero(j, j, -(j as i64), sample);
    for i in 0..=j {
        let mut v = factorial(i) * factorial(j - i);
        if i % 2 == 1 {
            v = -v;
        }
        out.c[i][j - i] = sample.from_int_like(&v);
    }
    out
}

/// The (a, b) component of the coproduct TSym^{a+b} → TSym^a ⊗ TSym^b.
pub fn coproduct_component<R: RingElem>(t: &SymTensor<R>, a: usize) -> BiTensor<R> {
    let b = t.k - a;
    let mut out = BiTensor::zero(a, b, 0, &t.c[0]);
    for (i, ci) in t.c.iter().enumerate() {
        // x^{[i]}y^{[k−i]} ↦ Σ x^{[i1]}y^{[a−i1]} ⊗ x^{[i−i1]}y^{[b−i+i1]}
        for i1 in 0..=a.min(i) {
            if i - i1 <= b {
                out.c[i1][i - i1] = out.c[i1][i - i1].plus(ci);
            }
        }
    }
    out
}

/// CG^{[k,k',j]}: TSym^{k+k'−2j} → TSym^k ⊗ TSym^{k'}(−j).
pub fn clebsch_gordan_embed<R: RingElem>(t: &SymTensor<R>, k: usize, k2: usize, j: usize) -> Result<BiTensor<R>, TsymError> {
    if j > k.min(k2) {
        return Err(TsymError::Inequality { k, k2, j });
    }
    if t.k + 2 * j != k + k2 {
        return Err(TsymError::Degree(format!("input degree {} but k+k'-2j = {}", t.k, k + k2 - 2 * j)));
    }
    Ok(coproduct_component(t, k - j).times(&cg_cup_element(j, &t.c[0])))
}

/// Element of (ℤ/p^r)[(ℤ/p^r)²].
#[derive(Clone, Debug, PartialEq)]
pub struct GroupRingElem {
    p: u64,
    r: u32,
    terms: BTreeMap<(u64, u64), ZModPr>,
}

impl GroupRingElem {
    pub fn zero(p: u64, r: u32) -> Self {
        GroupRingElem { p, r, terms: BTreeMap::new() }
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.r)
    }

    /// [v] for v = (v1, v2).
    pub fn basis(p: u64, r: u32, v1: i64, v2: i64) -> Self {
        let mut g = Self::zero(p, r);
        g.add_term(v1, v2, ZModPr::one(p, r));
        g
    }

    pub fn add_term(&mut self, v1: i64, v2: i64, c: ZModPr) {
        let n = self.modulus() as i64;
        let key = (v1.rem_euclid(n) as u64, v2.rem_euclid(n) as u64);
        let e = self.terms.entry(key).or_insert(ZModPr::zero(self.p, self.r));
        *e = *e + c;
        if e.value() == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u64, u64), ZModPr> {
        &self.terms
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &o.terms {
            out.add_term(*a as i64, *b as i64, *c);
        }
        out
    }

    /// Convolution: [v]·[w] = [v + w].
    pub fn times(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.p, self.r);
        for ((a, b), c) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                out.add_term((a + a2) as i64, (b + b2) as i64, *c * *c2);
            }
        }
        out
    }

    /// Pushforward along multiplication by an integer A on (ℤ/p^r)².
    pub fn push_scalar(&self, a: i64) -> Self {
        let mut out = Self::zero(self.p, self.r);
        for ((v1, v2), c) in &self.terms {
            out.add_term(*v1 as i64 * a, *v2 as i64 * a, *c);
        }
        out
    }

    fn vec_of(&self, v: (u64, u64)) -> (ZModPr, ZModPr) {
        (ZModPr::new(self.p, self.r, v.0 as i64), ZModPr::new(self.p, self.r, v.1 as i64))
    }
}

/// mom^k: [v] ↦ v^{[k]}, extended linearly.
pub fn divided_power_moment(g: &GroupRingElem, k: usize) -> SymTensor<ZModPr> {
    let z = ZModPr::zero(g.p, g.r);
    let mut out = SymTensor::zero(k, &z);
    for (v, c) in &g.terms {
        let (a, b) = g.vec_of(*v);
        out = out.plus(&SymTensor::divided_power(&a, &b, k).scale(c));
    }
    out
}

/// Image of g under the Iwasawa Clebsch–Gordan map: (Δg) ⊗ (cup element of degree (j, j)).
#[derive(Clone, Debug)]
pub struct IwasawaCg {
    pub diag: Vec<((u64, u64), (u64, u64), ZModPr)>,
    pub cup: BiTensor<ZModPr>,
    p: u64,
    r: u32,
}

pub fn iwasawa_cg(g: &GroupRingElem, j: usize) -> IwasawaCg {
    let diag = g.terms.iter().map(|(v, c)| (*v, *v, *c)).collect();
    IwasawaCg { diag, cup: cg_cup_element(j, &ZModPr::zero(g.p, g.r)), p: g.p, r: g.r }
}

impl IwasawaCg {
    /// (mom^{k−j}·id) ⊗ (mom^{k'−j}·id).
    pub fn moments(&self, k: usize, k2: usize) -> Result<BiTensor<ZModPr>, TsymError> {
        let j = self.cup.k;
        if j > k.min(k2) {
            return Err(TsymError::Inequality { k, k2, j });
        }
        let z = ZModPr::zero(self.p, self.r);
        let mut out = BiTensor::zero(k, k2, self.cup.twist, &z);
        for (v, w, c) in &self.diag {
            let (a, b) = (ZModPr::new(self.p, self.r, v.0 as i64), ZModPr::new(self.p, self.r, v.1 as i64));
            let (a2, b2) = (ZModPr::new(self.p, self.r, w.0 as i64), ZModPr::new(self.p, self.r, w.1 as i64));
            let left = SymTensor::divided_power(&a, &b, k - j);
            let right = SymTensor::divided_power(&a2, &b2, k2 - j);
            out = out.plus(&BiTensor::pure(&left, &right).times(&self.cup).scale(c));
        }
        Ok(out)
    }
}

/// (mom^{k−j}·id) ∘ (1 ⊗ mom^j): [v] ↦ v^{[k−j]} · v^{[j]}.
pub fn moment_after_partial(g: &GroupRingElem, k: usize, j: usize) -> SymTensor<ZModPr> {
    let z = ZModPr::zero(g.p, g.r);
    let mut out = SymTensor::zero(k, &z);
    for (v, c) in &g.terms {
        let (a, b) = g.vec_of(*v);
        let t = tsym_product(&SymTensor::divided_power(&a, &b, k - j), &SymTensor::divided_power(&a, &b, j));
        out = out.plus(&t.scale(c));
    }
    out
}

/// Apply x ↦ x − a·y in the second factor of the CG cup element of degree j and
/// project away everything with an x; returns the coefficient of y^{[j]} ⊠ y^{[j]}.
pub fn twist_projection<R: RingElem>(j: usize, a: &R) -> R {
    cg_cup_element(j, a).shear_second(a).kill_x()
}

/// Outcome of comparing CG∘mom with mom∘CG on every group element of (ℤ/p^r)².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareReport {
    pub compared: usize,
    /// (v, k, k′, j) where the two sides differ
    pub mismatches: Vec<((u64, u64), usize, usize, usize)>,
}

impl SquareReport {
    pub fn holds(&self) -> bool {
        self.compared > 0 && self.mismatches.is_empty()
    }
}

/// Checks the moment/Clebsch–Gordan square for 0 ≤ j ≤ k, k′ ≤ kmax on all basis elements [v].
/// With `flip_cup` the cup element's sign is reversed (a negative control).
pub fn moment_square_check(p: u64, r: u32, kmax: usize, flip_cup: bool) -> SquareReport {
    let n = p.pow(r) as i64;
    let mut rep = SquareReport { compared: 0, mismatches: Vec::new() };
    let minus = ZModPr::new(p, r, -1);
    for v1 in 0..n {
        for v2 in 0..n {
            let g = GroupRingElem::basis(p, r, v1, v2);
            for k in 0..=kmax {
                for k2 in 0..=kmax {
                    for j in 0..=k.min(k2) {
                        let mut cg = iwasawa_cg(&g, j);
                        if flip_cup && j % 2 == 1 {
                            cg.cup = cg.cup.scale(&minus);
                        }
                        let lhs = cg.moments(k, k2).expect("j ≤ k, k′");
                        let rhs = clebsch_gordan_embed(&divided_power_moment(&g, k + k2 - 2 * j), k, k2, j).expect("j ≤ k, k′");
                        rep.compared += 1;
                        if lhs != rhs {
                            rep.mismatches.push(((v1 as u64, v2 as u64), k, k2, j));
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Checks mom^{k−j}·mom^j = C(k, j)·mom^k on a fixed pair of group elements for k ≤ kmax.
pub fn binomial_collapse_check(p: u64, r: u32, kmax: usize) -> bool {
    let g = GroupRingElem::basis(p, r, 3, 7).plus(&GroupRingElem::basis(p, r, 11, 2)).plus(&GroupRingElem::basis(p, r, 1, 0));
    let one = ZModPr::one(p, r);
    (0..=kmax).all(|k| (0..=k).all(|j| moment_after_partial(&g, k, j) == divided_power_moment(&g, k).scale(&one.from_int_like(&binomial(k, j)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(p: u64, r: u32, v: i64) -> ZModPr {
        ZModPr::new(p, r, v)
    }

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn st(c: &[i64]) -> SymTensor<BigInt> {
        SymTensor::new(c.len() - 1, c.iter().map(|x| int(*x)).collect()).unwrap()
    }

    #[test]
    fn product_examples() {
        let x = st(&[0, 1]);
        let y = st(&[1, 0]);
        assert_eq!(tsym_product(&x, &x), st(&[0, 0, 2]));
        assert_eq!(tsym_product(&x, &y), st(&[0, 1, 0]));
        let a = st(&[3, -1, 4]);
        assert_eq!(tsym_product(&SymTensor::unit(&int(0)), &a), a);
        // h^{⊗m}·h^{⊗n} = C(m+n, m) h^{⊗(m+n)}
        let h = |k| SymTensor::divided_power(&int(2), &int(3), k);
        assert_eq!(tsym_product(&h(2), &h(3)), h(5).scale(&int(10)));
    }

    /// Words over {x, y} with coefficients; a symmetric tensor in H^{⊗k}.
    fn to_words(t: &SymTensor<BigInt>) -> BTreeMap<Vec<u8>, BigInt> {
        let k = t.degree();
        let mut out = BTreeMap::new();
        for mask in 0u32..(1 << k) {
            let w: Vec<u8> = (0..k).map(|b| ((mask >> b) & 1) as u8).collect();
            let i = w.iter().filter(|c| **c == 1).count();
            let c = t.coeff(i).clone();
            if c != int(0) {
                out.insert(w, c);
            }
        }
        out
    }

    fn shuffle_product(a: &BTreeMap<Vec<u8>, BigInt>, b: &BTreeMap<Vec<u8>, BigInt>, m: usize, n: usize) -> BTreeMap<Vec<u8>, BigInt> {
        let mut out: BTreeMap<Vec<u8>, BigInt> = BTreeMap::new();
        for pos in 0u32..(1 << (m + n)) {
            if pos.count_ones() as usize != m {
                continue;
            }
            for (wa, ca) in a {
                for (wb, cb) in b {
                    let (mut ia, mut ib) = (0, 0);
                    let mut w = Vec::new();
                    for s in 0..m + n {
                        if (pos >> s) & 1 == 1 {
                            w.push(wa[ia]);
                            ia += 1;
                        } else {
                            w.push(wb[ib]);
                            ib += 1;
                        }
                    }
                    *out.entry(w).or_insert(int(0)) += ca * cb;
                }
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn product_matches_symmetrization(a in proptest::collection::vec(-5i64..5, 1..4), b in proptest::collection::vec(-5i64..5, 1..3)) {
            let (ta, tb) = (st(&a), st(&b));
            let prod = tsym_product(&ta, &tb);
            let words = shuffle_product(&to_words(&ta), &to_words(&tb), ta.degree(), tb.degree());
            let mut want = to_words(&prod);
            want.retain(|_, c| *c != int(0));
            let mut got = words;
            got.retain(|_, c| *c != int(0));
            prop_assert_eq!(got, want);
        }

        #[test]
        fn product_commutative_associative(a in proptest::collection::vec(-9i64..9, 1..4), b in proptest::collection::vec(-9i64..9, 1..4), c in proptest::collection::vec(-9i64..9, 1..4)) {
            let (a, b, c) = (st(&a), st(&b), st(&c));
            prop_assert_eq!(tsym_product(&a, &b), tsym_product(&b, &a));
            prop_assert_eq!(tsym_product(&tsym_product(&a, &b), &c), tsym_product(&a, &tsym_product(&b, &c)));
        }

        #[test]
        fn moment_is_multiplicative_on_group_elements(v in (0i64..27, 0i64..27), w in (0i64..27, 0i64..27), m in 0usize..4, n in 0usize..4) {
            let g = GroupRingElem::basis(3, 3, v.0, v.1);
            let h = GroupRingElem::basis(3, 3, w.0, w.1);
            // mom^m(g)·mom^n(g) = C(m+n, m) mom^{m+n}(g)
            let lhs = tsym_product(&divided_power_moment(&g, m), &divided_power_moment(&g, n));
            let rhs = divided_power_moment(&g, m + n).scale(&z(3, 3, 1).from_int_like(&binomial(m + n, m)));
            prop_assert_eq!(lhs, rhs);
            // pure tensors of distinct elements still multiply bilinearly
            let lhs = tsym_product(&divided_power_moment(&g.plus(&h), 1), &divided_power_moment(&h, n));
            let rhs = tsym_product(&divided_power_moment(&g, 1), &divided_power_moment(&h, n))
                .plus(&tsym_product(&divided_power_moment(&h, 1), &divided_power_moment(&h, n)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn moment_examples() {
        let mut g = GroupRingElem::basis(3, 2, 1, 1);
        g.add_term(2, 5, z(3, 2, 4));
        assert_eq!(divided_power_moment(&g, 0).coeffs(), &[z(3, 2, 5)]);
        let b = GroupRingElem::basis(3, 2, 1, 1);
        assert_eq!(divided_power_moment(&b, 2).coeffs(), &[z(3, 2, 1); 3]);
        let v = GroupRingElem::basis(3, 2, 4, 7);
        let m1 = divided_power_moment(&v, 1);
        assert_eq!(m1.coeffs(), &[z(3, 2, 7), z(3, 2, 4)]);
        // [A·v] has moment A^k·v^{[k]}
        for k in 0..5 {
            let lhs = divided_power_moment(&v.push_scalar(5), k);
            assert_eq!(lhs, divided_power_moment(&v, k).scale(&z(3, 2, 5).pow(k as u64)));
        }
    }

    #[test]
    fn linear_map_on_scalars() {
        let t = st(&[1, 2, 3]);
        let a = int(3);
        let zr = int(0);
        assert_eq!(t.linear_map([[&a, &zr], [&zr, &a]]), t.scale(&int(9)));
    }

    #[test]
    fn cg_examples() {
        let one = int(1);
        let t0 = st(&[2, 5, 7]);
        // j = 0: plain coproduct component
        let cg = clebsch_gordan_embed(&t0, 1, 1, 0).unwrap();
        assert_eq!(cg, coproduct_component(&t0, 1));
        assert_eq!(cg.twist, 0);
        // k = k' = j = 1: y⊗x − x⊗y
        let cg = clebsch_gordan_embed(&SymTensor::unit(&one), 1, 1, 1).unwrap();
        assert_eq!(cg.twist, -1);
        assert_eq!((cg.coeff(0, 1), cg.coeff(1, 0), cg.coeff(0, 0), cg.coeff(1, 1)), (&int(1), &int(-1), &int(0), &int(0)));
        assert!(clebsch_gordan_embed(&SymTensor::unit(&one), 1, 1, 2).is_err());
        assert!(clebsch_gordan_embed(&t0, 1, 1, 1).is_err());
    }

    fn spanning_set(p: u64, r: u32) -> Vec<GroupRingElem> {
        let n = p.pow(r) as i64;
        let mut out = Vec::new();
        for v1 in 0..n {
            for v2 in 0..n {
                out.push(GroupRingElem::basis(p, r, v1, v2));
            }
        }
        out
    }

    #[test]
    fn moment_square_commutes_mod_9() {
        for g in spanning_set(3, 2) {
            for k in 0..=3 {
                for k2 in 0..=3 {
                    for j in 0..=k.min(k2) {
                        let lhs = iwasawa_cg(&g, j).moments(k, k2).unwrap();
                        let rhs = clebsch_gordan_embed(&divided_power_moment(&g, k + k2 - 2 * j), k, k2, j).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn square_check_and_its_control() {
        assert!(moment_square_check(3, 1, 2, false).holds());
        assert!(!moment_square_check(3, 1, 2, true).holds());
        assert!(binomial_collapse_check(3, 2, 3));
    }

    #[test]
    fn binomial_collapse() {
        let g = GroupRingElem::basis(5, 2, 3, 7).plus(&GroupRingElem::basis(5, 2, 11, 2));
        let lhs = moment_after_partial(&g, 2, 1);
        assert_eq!(lhs, divided_power_moment(&g, 2).scale(&z(5, 2, 2)));
        for k in 0..=4 {
            for j in 0..=k {
                let c = z(5, 2, 1).from_int_like(&binomial(k, j));
                assert_eq!(moment_after_partial(&g, k, j), divided_power_moment(&g, k).scale(&c));
            }
        }
    }

    #[test]
    fn twist_projection_examples() {
        assert_eq!(twist_projection(0, &z(5, 3, 2)), z(5, 3, 1));
        assert_eq!(twist_projection(1, &z(5, 3, 1)), z(5, 3, -1));
        assert_eq!(twist_projection(3, &z(5, 3, 2)), z(5, 3, -48));
        for p in [3u64, 5] {
            for a in [1, 2, p as i64 - 1] {
                for j in 0..=4usize {
                    let want = z(p, 4, -a).pow(j as u64) * z(p, 4, 1).from_int_like(&factorial(j));
                    assert_eq!(twist_projection(j, &z(p, 4, a)), want);
                }
            }
        }
    }
}
