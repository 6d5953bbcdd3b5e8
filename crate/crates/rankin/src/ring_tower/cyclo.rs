use num_bigint::BigInt;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::ring::RingElem;
use super::RingError;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut res = n;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            while n % d == 0 {
                n /= d;
            }
            res -= res / d;
        }
        d += 1;
    }
    if n > 1 {
        res -= res / n;
    }
    res
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    v.sort();
    v
}

/// Integer coefficients of Φ_m, constant term first.
pub fn cyclotomic_poly(m: u64) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&m) {
        return v.clone();
    }
    assert!(m >= 1);
    // x^m − 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        num = exact_div(&num, &phi_d);
    }
    let res = Arc::new(num);
    cache.lock().unwrap().insert(m, res.clone());
    res
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut q = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// Residue class modulo Φ_m, stored as exactly φ(m) coefficients.
#[derive(Clone, PartialEq)]
pub struct CycloElem<R: RingElem> {
    m: u64,
    c: Vec<R>,
}

/// Canonical representative of `raw` (coefficients of x^0, x^1, ...) modulo Φ_m.
pub fn cyclotomic_reduce<R: RingElem>(raw: &[R], m: u64, zero: &R) -> CycloElem<R> {
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    let mut w: Vec<R> = raw.to_vec();
    if w.len() < deg {
        w.resize(deg, zero.zero_like());
    }
    for i in (deg..w.len()).rev() {
        let c = w[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if *pj != 0 {
                let t = c.times(&zero.from_i64_like(*pj));
                w[i - deg + j] = w[i - deg + j].minus(&t);
            }
        }
        w[i] = zero.zero_like();
    }
    w.truncate(deg);
    CycloElem { m, c: w }
}

impl<R: RingElem> CycloElem<R> {
    pub fn scalar(m: u64, s: R) -> Self {
        let deg = euler_phi(m) as usize;
        let mut c = vec![s.zero_like(); deg];
        c[0] = s;
        CycloElem { m, c }
    }

    /// ζ_m^e with coefficients in the ring of `sample`.
    pub fn zeta_pow(m: u64, e: i64, sample: &R) -> Self {
        let e = e.rem_euclid(m as i64) as usize;
        let mut raw = vec![sample.zero_like(); e + 1];
        raw[e] = sample.one_like();
        cyclotomic_reduce(&raw, m, sample)
    }

    pub fn from_coeffs(m: u64, coeffs: Vec<R>) -> Self {
        let z = coeffs[0].zero_like();
        cyclotomic_reduce(&coeffs, m, &z)
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn coeff_zero(&self) -> R {
        self.c[0].zero_like()
    }

    /// The value as a scalar if it lies in the coefficient ring.
    pub fn as_scalar(&self) -> Option<R> {
        if self.c.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, s: &R) -> Self {
        CycloElem { m: self.m, c: self.c.iter().map(|x| x.times(s)).collect() }
    }

    /// View as an element of ℤ[ζ_M] for a multiple M of m.
    pub fn lift_to(&self, big: u64) -> Result<Self, RingError> {
        if big % self.m != 0 {
            return Err(RingError::Mismatch(format!("order {} does not divide {big}", self.m)));
        }
        if big == self.m {
            return Ok(self.clone());
        }
        let step = (big / self.m) as usize;
        let z = self.coeff_zero();
        let mut raw = vec![z.clone(); step * (self.c.len().saturating_sub(1)) + 1];
        for (i, x) in self.c.iter().enumerate() {
            raw[i * step] = x.clone();
        }
        Ok(cyclotomic_reduce(&raw, big, &z))
    }

    /// Apply the automorphism ζ ↦ ζ^a (a coprime to m).
    pub fn galois(&self, a: i64) -> Self {
        let m = self.m as i64;
        let z = self.coeff_zero();
        let mut raw = vec![z.clone(); self.m as usize];
        for (i, x) in self.c.iter().enumerate() {
            let e = ((i as i64) * a).rem_euclid(m) as usize;
            raw[e] = raw[e].plus(x);
        }
        cyclotomic_reduce(&raw, self.m, &z)
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn map<S: RingElem>(&self, f: impl Fn(&R) -> S) -> CycloElem<S> {
        CycloElem { m: self.m, c: self.c.iter().map(f).collect() }
    }

    pub fn try_map<S: RingElem>(&self, f: impl Fn(&R) -> Result<S, RingError>) -> Result<CycloElem<S>, RingError> {
        Ok(CycloElem { m: self.m, c: self.c.iter().map(f).collect::<Result<_, _>>()? })
    }

    fn check(&self, o: &Self) {
        if self.m != o.m {
            panic!("cyclotomic order mismatch: {} vs {}", self.m, o.m);
        }
    }
}

/// Bring two elements to a common order lcm(m, m').
pub fn common_order<R: RingElem>(a: &CycloElem<R>, b: &CycloElem<R>) -> (CycloElem<R>, CycloElem<R>) {
    let l = num_integer::lcm(a.m, b.m);
    (a.lift_to(l).unwrap(), b.lift_to(l).unwrap())
}

impl<R: RingElem> fmt::Debug for CycloElem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]{:?}", self.m, self.c)
    }
}

impl<R: RingElem + fmt::Display> fmt::Display for CycloElem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·ζ{}", self.m)?,
                _ => write!(f, "({c})·ζ{}^{i}", self.m)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<R: RingElem> RingElem for CycloElem<R> {
    fn zero_like(&self) -> Self {
        CycloElem { m: self.m, c: self.c.iter().map(|x| x.zero_like()).collect() }
    }
    fn one_like(&self) -> Self {
        CycloElem::scalar(self.m, self.c[0].one_like())
    }
    fn from_int_like(&self, n: &BigInt) -> Self {
        CycloElem::scalar(self.m, self.c[0].from_int_like(n))
    }
    fn plus(&self, o: &Self) -> Self {
        self.check(o);
        CycloElem { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a.plus(b)).collect() }
    }
    fn minus(&self, o: &Self) -> Self {
        self.check(o);
        CycloElem { m: self.m, c: self.c.iter().zip(&o.c).map(|(a, b)| a.minus(b)).collect() }
    }
    fn times(&self, o: &Self) -> Self {
        self.check(o);
        let z = self.coeff_zero();
        let n = self.c.len();
        let mut raw = vec![z.clone(); 2 * n - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] = raw[i + j].plus(&a.times(b));
                }
            }
        }
        cyclotomic_reduce(&raw, self.m, &z)
    }
    fn negate(&self) -> Self {
        CycloElem { m: self.m, c: self.c.iter().map(|x| x.negate()).collect() }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn compatible(&self, o: &Self) -> bool {
        self.m == o.m && self.c[0].compatible(&o.c[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(105).len() - 1, 48);
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn reduction_examples() {
        let z = BigInt::from(0);
        let x4 = cyclotomic_reduce(&ints(&[0, 0, 0, 0, 1]), 4, &z);
        assert_eq!(x4.as_scalar(), Some(BigInt::from(1)));
        let phi3 = cyclotomic_reduce(&ints(&[1, 1, 1]), 3, &z);
        assert!(phi3.is_zero());
        let x5 = cyclotomic_reduce(&ints(&[0, 0, 0, 0, 0, 1]), 5, &z);
        assert_eq!(x5.as_scalar(), Some(BigInt::from(1)));
    }

    #[test]
    fn reduction_idempotent() {
        let z = BigInt::from(0);
        let a = cyclotomic_reduce(&ints(&[3, -1, 4, 1, -5, 9, 2, 6]), 12, &z);
        let b = cyclotomic_reduce(a.coeffs(), 12, &z);
        assert_eq!(a, b);
    }

    #[test]
    fn lift_and_galois() {
        let one = BigInt::from(1);
        let z3 = CycloElem::zeta_pow(3, 1, &one);
        let z6 = CycloElem::zeta_pow(6, 2, &one);
        assert_eq!(z3.lift_to(6).unwrap(), z6);
        let i = CycloElem::zeta_pow(4, 1, &one);
        assert_eq!(i.times(&i.conj()), i.one_like());
        assert_eq!(i.galois(3), i.conj());
    }

    fn elem(m: u64, v: &[i64]) -> CycloElem<BigInt> {
        cyclotomic_reduce(&ints(v), m, &BigInt::from(0))
    }

    proptest::proptest! {
        #[test]
        fn galois_is_multiplicative(m in proptest::sample::select(vec![3u64, 4, 5, 8, 9, 12]), a in 1i64..40,
                                    u in proptest::collection::vec(-9i64..9, 1..10), v in proptest::collection::vec(-9i64..9, 1..10)) {
            proptest::prop_assume!(num_integer::Integer::gcd(&a, &(m as i64)) == 1);
            let (x, y) = (elem(m, &u), elem(m, &v));
            proptest::prop_assert_eq!(x.times(&y).galois(a), x.galois(a).times(&y.galois(a)));
            proptest::prop_assert_eq!(x.plus(&y).galois(a), x.galois(a).plus(&y.galois(a)));
        }

        #[test]
        fn lift_is_multiplicative(u in proptest::collection::vec(-9i64..9, 1..8), v in proptest::collection::vec(-9i64..9, 1..8)) {
            let (x, y) = (elem(4, &u), elem(4, &v));
            proptest::prop_assert_eq!(x.times(&y).lift_to(12).unwrap(), x.lift_to(12).unwrap().times(&y.lift_to(12).unwrap()));
        }
    }
}
