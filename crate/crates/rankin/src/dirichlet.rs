//! Dirichlet characters stored as value tables, Gauss sums, Teichmüller lifts,
//! partial zeta values at s = 0, and the fixed embedding of roots of unity
//! into ℤ/p^r[ζ_{p^w}].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use std::fmt;

use crate::ring_tower::{rat, CycloElem, RingElem, RingError, ZModPr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CharError {
    #[error("not a character: {0}")]
    NotMultiplicative(String),
    #[error("character is not primitive (conductor {conductor}, modulus {modulus})")]
    NotPrimitive { conductor: u64, modulus: u64 },
    #[error("bad character literal: {0}")]
    Parse(String),
    #[error("p divides {0}")]
    NotUnit(i64),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// χ(a) = ζ_order^{table[a mod N]}, or zero when gcd(a, N) > 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirichletChar {
    modulus: u64,
    order: u64,
    table: Vec<Option<u64>>,
}

pub fn units_mod(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|a| a.gcd(&n) == 1).collect()
}

fn mult_order(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut x = a % n;
    let mut k = 1;
    while x != 1 {
        x = x * a % n;
        k += 1;
    }
    k
}

/// Carmichael exponent λ(n).
pub fn carmichael(n: u64) -> u64 {
    units_mod(n).iter().fold(1, |acc, &a| acc.lcm(&mult_order(a, n)))
}

/// Independent generators of (ℤ/n)^× with their orders (an internal direct-product basis).
pub fn unit_group_basis(n: u64) -> Vec<(u64, u64)> {
    let mut basis: Vec<(u64, u64)> = Vec::new();
    let mut m = n;
    let mut q = 2;
    let mut prime_powers = Vec::new();
    while q * q <= m {
        if m % q == 0 {
            let mut pe = 1;
            while m % q == 0 {
                m /= q;
                pe *= q;
            }
            prime_powers.push((q, pe));
        }
        q += 1;
    }
    if m > 1 {
        prime_powers.push((m, m));
    }
    for (q, pe) in prime_powers {
        let rest = n / pe;
        // lift a local generator g mod pe to x ≡ g mod pe, x ≡ 1 mod rest
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                return g % n;
            }
            crt(g % pe, pe, 1, rest)
        };
        if q == 2 {
            if pe == 4 {
                basis.push((lift(3), 2));
            } else if pe >= 8 {
                basis.push((lift(pe - 1), 2));
                basis.push((lift(5), pe / 4));
            }
        } else {
            let phi = pe / q * (q - 1);
            let g = (2..pe).find(|&g| g % q != 0 && mult_order(g, pe) == phi).unwrap();
            basis.push((lift(g), phi));
        }
    }
    basis
}

pub fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    let (mi, ni) = (m as i128, n as i128);
    let e = (mi).extended_gcd(&ni);
    let l = mi * ni;
    let x = (a as i128) + ((b as i128 - a as i128) * e.x).rem_euclid(ni) * mi;
    x.rem_euclid(l) as u64
}

/// Discrete logs of every unit mod n with respect to `unit_group_basis(n)`.
fn discrete_logs(n: u64) -> Vec<Option<Vec<u64>>> {
    let basis = unit_group_basis(n);
    let mut logs: Vec<Option<Vec<u64>>> = vec![None; n.max(1) as usize];
    let mut elems: Vec<(u64, Vec<u64>)> = vec![(1 % n.max(1), vec![])];
    for (g, o) in &basis {
        let mut next = Vec::new();
        for (x, l) in &elems {
            let mut y = *x;
            for k in 0..*o {
                let mut l2 = l.clone();
                l2.push(k);
                next.push((y, l2));
                y = y * g % n;
            }
        }
        elems = next;
    }
    for (x, l) in elems {
        logs[x as usize] = Some(l);
    }
    logs
}

impl DirichletChar {
    pub fn trivial(modulus: u64) -> Self {
        let table = (0..modulus.max(1)).map(|a| if a.gcd(&modulus) == 1 || modulus == 1 { Some(0) } else { None }).collect();
        DirichletChar { modulus: modulus.max(1), order: 1, table }
    }

    /// Build from exponents on the ordered units mod N, with respect to ζ_order.
    pub fn from_unit_exponents(modulus: u64, order: u64, exps: &[u64]) -> Result<Self, CharError> {
        let units = units_mod(modulus);
        if units.len() != exps.len() {
            return Err(CharError::Parse(format!("expected {} exponents, got {}", units.len(), exps.len())));
        }
        let mut table = vec![None; modulus as usize];
        for (u, e) in units.iter().zip(exps) {
            table[*u as usize] = Some(e % order);
        }
        let chi = DirichletChar { modulus, order, table };
        chi.validate()?;
        Ok(chi.normalized())
    }

    /// Characters given by a value function on units, with values as exponents of ζ_order.
    pub fn from_fn(modulus: u64, order: u64, f: impl Fn(u64) -> u64) -> Result<Self, CharError> {
        let exps: Vec<u64> = units_mod(modulus).into_iter().map(f).collect();
        Self::from_unit_exponents(modulus, order, &exps)
    }

    /// All characters mod N, in a fixed order (trivial first).
    pub fn all(modulus: u64) -> Vec<Self> {
        let basis = unit_group_basis(modulus);
        let lam = carmichael(modulus);
        let logs = discrete_logs(modulus);
        let mut ks: Vec<Vec<u64>> = vec![vec![]];
        for (_, o) in &basis {
            ks = ks
                .into_iter()
                .flat_map(|k| (0..*o).map(move |i| {
                    let mut k2 = k.clone();
                    k2.push(i);
                    k2
                }))
                .collect();
        }
        ks.into_iter()
            .map(|k| {
                let table = (0..modulus.max(1))
                    .map(|a| {
                        logs[a as usize].as_ref().map(|l| {
                            l.iter()
                                .zip(&k)
                                .zip(&basis)
                                .map(|((li, ki), (_, o))| li * ki * (lam / o))
                                .sum::<u64>()
                                % lam
                        })
                    })
                    .collect();
                DirichletChar { modulus, order: lam, table }.normalized()
            })
            .collect()
    }

    fn validate(&self) -> Result<(), CharError> {
        let n = self.modulus;
        for a in 0..n {
            for b in 0..n {
                match (self.table[a as usize], self.table[b as usize]) {
                    (Some(x), Some(y)) => {
                        if self.table[(a * b % n) as usize] != Some((x + y) % self.order) {
                            return Err(CharError::NotMultiplicative(format!("χ({a})χ({b}) ≠ χ({})", a * b % n)));
                        }
                    }
                    _ => {}
                }
            }
        }
        if n > 1 && self.table[1] != Some(0) {
            return Err(CharError::NotMultiplicative("χ(1) ≠ 1".into()));
        }
        Ok(())
    }

    /// Shrink `order` to the true order of the character.
    fn normalized(mut self) -> Self {
        let g = self.table.iter().flatten().fold(self.order, |g, &e| g.gcd(&e));
        if g > 1 {
            self.order /= g;
            for e in self.table.iter_mut().flatten() {
                *e /= g;
            }
        }
        self
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Order of χ as a group element (χ takes values in μ_order).
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// Exponent e with χ(a) = ζ_order^e, or None when χ(a) = 0.
    pub fn char_eval(&self, a: i64) -> Option<u64> {
        self.table[a.rem_euclid(self.modulus as i64) as usize]
    }

    /// χ(a) as an exact cyclotomic number in ℤ[ζ_order].
    pub fn value<R: RingElem>(&self, a: i64, sample: &R) -> CycloElem<R> {
        match self.char_eval(a) {
            Some(e) => CycloElem::zeta_pow(self.order, e as i64, sample),
            None => CycloElem::scalar(self.order, sample.zero_like()),
        }
    }

    /// χ(−1) ∈ {±1}.
    pub fn parity(&self) -> i64 {
        match self.char_eval(-1) {
            Some(0) => 1,
            Some(_) => -1,
            None => 1,
        }
    }

    pub fn conductor(&self) -> u64 {
        let n = self.modulus;
        for d in crate::ring_tower::divisors(n) {
            let ok = (0..n).all(|a| a.gcd(&n) != 1 || a % d != 1 % d || self.table[a as usize] == Some(0));
            if ok {
                return d;
            }
        }
        n
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing χ.
    pub fn primitive(&self) -> Self {
        let c = self.conductor();
        let table = (0..c)
            .map(|b| {
                if b.gcd(&c) != 1 && c > 1 {
                    return None;
                }
                // any unit a ≡ b mod c
                (0..self.modulus).find(|a| a % c == b % c && a.gcd(&self.modulus) == 1).and_then(|a| self.table[a as usize])
            })
            .collect();
        DirichletChar { modulus: c, order: self.order, table }.normalized()
    }

    /// χ viewed modulo a multiple M of its modulus.
    pub fn induce(&self, big: u64) -> Result<Self, CharError> {
        if big % self.modulus != 0 {
            return Err(CharError::Parse(format!("{big} is not a multiple of {}", self.modulus)));
        }
        let table = (0..big)
            .map(|a| if a.gcd(&big) == 1 || big == 1 { self.table[(a % self.modulus) as usize] } else { None })
            .collect();
        Ok(DirichletChar { modulus: big, order: self.order, table })
    }

    /// Pointwise product (moduli are combined to their lcm).
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.modulus.lcm(&o.modulus);
        let ord = self.order.lcm(&o.order);
        let (a, b) = (self.induce(n).unwrap(), o.induce(n).unwrap());
        let table = a
            .table
            .iter()
            .zip(&b.table)
            .map(|(x, y)| match (x, y) {
                (Some(x), Some(y)) => Some((x * (ord / self.order) + y * (ord / o.order)) % ord),
                _ => None,
            })
            .collect();
        DirichletChar { modulus: n, order: ord, table }.normalized()
    }

    pub fn inverse(&self) -> Self {
        let table = self.table.iter().map(|x| x.map(|e| (self.order - e) % self.order)).collect();
        DirichletChar { modulus: self.modulus, order: self.order, table }
    }

    /// Exponents on the ordered units, relative to ζ_{λ(N)} (the literal/file convention).
    pub fn unit_exponents(&self) -> Vec<u64> {
        let lam = carmichael(self.modulus);
        units_mod(self.modulus)
            .iter()
            .map(|&u| self.table[u as usize].unwrap() * (lam / self.order))
            .collect()
    }

    /// Parse `chi(N; v1,v2,...)`; the v_i are exponents of ζ_{λ(N)} on the ordered units mod N.
    pub fn parse_literal(s: &str) -> Result<Self, CharError> {
        let s = s.trim();
        let inner = s
            .strip_prefix("chi(")
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| CharError::Parse(s.to_string()))?;
        let (n, vals) = inner.split_once(';').ok_or_else(|| CharError::Parse(s.to_string()))?;
        let n: u64 = n.trim().parse().map_err(|_| CharError::Parse(s.to_string()))?;
        let exps = vals
            .split(',')
            .map(|v| v.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CharError::Parse(s.to_string()))?;
        Self::from_unit_exponents(n, carmichael(n), &exps)
    }

    pub fn to_literal(&self) -> String {
        let e: Vec<String> = self.unit_exponents().iter().map(|x| x.to_string()).collect();
        format!("chi({}; {})", self.modulus, e.join(","))
    }
}

impl fmt::Debug for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

/// G(χ) = Σ_{a mod C} χ(a) ζ_C^a in ℤ[ζ_{lcm(order, C)}].
pub fn gauss_sum(chi: &DirichletChar) -> Result<CycloElem<BigInt>, CharError> {
    let c = chi.modulus;
    if !chi.is_primitive() {
        return Err(CharError::NotPrimitive { conductor: chi.conductor(), modulus: c });
    }
    let m = chi.order.lcm(&c);
    let one = BigInt::from(1);
    let mut raw = vec![BigInt::from(0); m as usize];
    for a in units_mod(c) {
        let e = chi.char_eval(a as i64).unwrap() * (m / chi.order) + a * (m / c);
        raw[(e % m) as usize] += 1;
    }
    Ok(crate::ring_tower::cyclotomic_reduce(&raw, m, &one))
}

/// ζ(t(N), χ, 0) = Σ_{a=1..M, a ≡ t mod N} χ(a)·(1/2 − a/M) with M = N·modulus(χ).
pub fn partial_zeta_at_zero(t: i64, n: u64, chi: &DirichletChar) -> CycloElem<BigRational> {
    let big = n * chi.modulus();
    let z = rat(0, 1);
    let mut raw = vec![z.clone(); chi.order() as usize];
    for a in 1..=big {
        if (a as i64 - t).rem_euclid(n as i64) != 0 {
            continue;
        }
        if let Some(e) = chi.char_eval(a as i64) {
            raw[e as usize] += rat(1, 2) - rat(a as i64, big as i64);
        }
    }
    crate::ring_tower::cyclotomic_reduce(&raw, chi.order(), &z)
}

/// The Teichmüller representative ω(a) ∈ ℤ/p^r.
pub fn teichmuller(a: i64, p: u64, r: u32) -> Result<ZModPr, CharError> {
    if a.rem_euclid(p as i64) == 0 {
        return Err(CharError::NotUnit(a));
    }
    let mut x = ZModPr::new(p, r, a);
    for _ in 0..r {
        x = x.pow(p);
    }
    Ok(x)
}

pub fn least_primitive_root(p: u64) -> u64 {
    (1..p.max(2)).find(|&g| mult_order(g, p) == p - 1).unwrap_or(1)
}

/// The fixed embedding Q̄ ⊃ μ_{(p−1)p^∞} → ℤ_p[ζ_{p^w}]: tame roots of unity go
/// to Teichmüller lifts, ζ_{p−1} ↦ ω(g) for the least primitive root g, and the
/// p-power part stays formal.
#[derive(Clone, Debug)]
pub struct PadicEmbedding {
    pub p: u64,
    pub r: u32,
}

impl PadicEmbedding {
    pub fn new(p: u64, r: u32) -> Self {
        PadicEmbedding { p, r }
    }

    /// Split o = o_t·p^w with o_t | p − 1.
    fn split(&self, o: u64) -> Result<(u64, u64), CharError> {
        let mut w = 1;
        let mut t = o;
        while t % self.p == 0 {
            t /= self.p;
            w *= self.p;
        }
        if (self.p - 1) % t != 0 {
            return Err(CharError::Ring(RingError::Mismatch(format!(
                "μ_{o} does not embed in ℤ_{}[μ_(p^∞)]",
                self.p
            ))));
        }
        Ok((t, w))
    }

    /// Order of the wild cyclotomic ring receiving ℤ[ζ_o].
    pub fn wild_order(&self, o: u64) -> Result<u64, CharError> {
        Ok(self.split(o)?.1)
    }

    /// Image of ζ_o^e as an element of ℤ/p^r[ζ_{p^w}].
    pub fn root_of_unity(&self, o: u64, e: i64) -> Result<CycloElem<ZModPr>, CharError> {
        let (t, w) = self.split(o)?;
        // ζ_o = (ζ_o^{w})^u · (ζ_o^{t})^v with u·w + v·t ≡ 1 mod o
        let eg = (w as i64).extended_gcd(&(t as i64));
        let (u, v) = (eg.x, eg.y);
        let g = least_primitive_root(self.p);
        let tame = teichmuller(g as i64, self.p, self.r)?.pow((self.p - 1) / t);
        let e_t = (e * u).rem_euclid(t as i64) as u64;
        let e_w = (e * v).rem_euclid(w as i64);
        let s = tame.pow(e_t);
        Ok(CycloElem::zeta_pow(w, e_w, &s).scale(&s))
    }

    pub fn embed(&self, x: &CycloElem<BigRational>) -> Result<CycloElem<ZModPr>, CharError> {
        let o = x.order();
        let w = self.wild_order(o)?;
        let z = ZModPr::zero(self.p, self.r);
        let mut acc = CycloElem::scalar(w, z);
        for (i, c) in x.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cz = ZModPr::from_rational(self.p, self.r, c)?;
            acc = acc.plus(&self.root_of_unity(o, i as i64)?.scale(&cz));
        }
        Ok(acc)
    }

    pub fn embed_int(&self, x: &CycloElem<BigInt>) -> Result<CycloElem<ZModPr>, CharError> {
        self.embed(&x.map(|c| BigRational::from_integer(c.clone())))
    }

    /// χ(a) in ℤ/p^r[ζ_{p^w}].
    pub fn char_value(&self, chi: &DirichletChar, a: i64) -> Result<CycloElem<ZModPr>, CharError> {
        let w = self.wild_order(chi.order())?;
        match chi.char_eval(a) {
            Some(e) => self.root_of_unity(chi.order(), e as i64),
            None => Ok(CycloElem::scalar(w, ZModPr::zero(self.p, self.r))),
        }
    }
}
