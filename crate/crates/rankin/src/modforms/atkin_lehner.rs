use num_integer::{Integer, Roots};
use std::fmt;

use super::ModFormError;

/// A class in N(Γ_1(N))/Γ_1(N), modulo scalars, stored as an integer matrix [[a, b], [c, d]].
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct AlGroupElem {
    pub m: [[i128; 2]; 2],
    pub level: u64,
}

impl fmt::Debug for AlGroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

fn mat_mul(x: [[i128; 2]; 2], y: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    let mut z = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    z
}

fn adj(x: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    [[x[1][1], -x[0][1]], [-x[1][0], x[0][0]]]
}

fn det(x: [[i128; 2]; 2]) -> i128 {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

fn in_gamma1(x: [[i128; 2]; 2], n: i128) -> bool {
    det(x) == 1 && x[1][0].rem_euclid(n) == 0 && (x[1][1] - 1).rem_euclid(n) == 0
}

impl AlGroupElem {
    /// Rejects matrices of non-positive determinant and those that do not normalise Γ_1(N)
    /// (tested on the generators T, (1 0; N 1) and conjugation back).
    pub fn new(m: [[i128; 2]; 2], level: u64) -> Result<Self, ModFormError> {
        let g = AlGroupElem { m, level };
        if det(m) <= 0 {
            return Err(ModFormError::Condition(format!("{g:?} has non-positive determinant")));
        }
        let n = level as i128;
        for gen in [[[1, 1], [0, 1]], [[1, 0], [n, 1]]] {
            let conj = mat_mul(mat_mul(m, gen), adj(m));
            let d = det(m);
            let ok = conj.iter().flatten().all(|x| x % d == 0) && in_gamma1(conj.map(|r| r.map(|x| x / d)), n);
            if !ok {
                return Err(ModFormError::Condition(format!("{g:?} does not normalise Γ_1({level})")));
            }
        }
        Ok(g)
    }

    pub fn identity(level: u64) -> Self {
        AlGroupElem { m: [[1, 0], [0, 1]], level }
    }

    pub fn scalar(s: i128, level: u64) -> Self {
        AlGroupElem { m: [[s, 0], [0, s]], level }
    }

    pub fn det(&self) -> i128 {
        det(self.m)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.level, o.level);
        AlGroupElem { m: mat_mul(self.m, o.m), level: self.level }
    }

    /// g ~ h iff g·h^{-1} ∈ ±λ·Γ_1(N) for a rational scalar λ.
    pub fn equivalent(&self, o: &Self) -> bool {
        let x = mat_mul(self.m, adj(o.m));
        let dx = det(x);
        let lam = dx.sqrt();
        if lam * lam != dx {
            return false;
        }
        let n = self.level as i128;
        [lam, -lam].iter().any(|&l| {
            x.iter().flatten().all(|v| v % l == 0) && in_gamma1(x.map(|r| r.map(|v| v / l)), n)
        })
    }
}

fn check_exact(n: u64, q: u64) -> Result<u64, ModFormError> {
    if q == 0 || n % q != 0 || (n / q).gcd(&q) != 1 {
        return Err(ModFormError::Condition(format!("{q} does not divide {n} exactly")));
    }
    Ok(n / q)
}

/// (a b; N d) with ad − bN = 1 and d ≡ x mod Q, d ≡ 1 mod N/Q: the diamond ⟨x⟩_Q.
pub fn diamond_matrix(n: u64, q: u64, x: i64) -> Result<AlGroupElem, ModFormError> {
    let r = check_exact(n, q)?;
    let x = x.rem_euclid(q as i64) as u64;
    if x.gcd(&q) != 1 {
        return Err(ModFormError::Condition(format!("{x} is not a unit mod {q}")));
    }
    let d = crate::dirichlet::crt(x % q, q, 1 % r, r).max(1);
    let d = if d.gcd(&n) == 1 { d } else { d + n };
    // a·d − b·N = 1
    let e = (d as i128).extended_gcd(&(n as i128));
    let (a, b) = (e.x, -e.y);
    AlGroupElem::new([[a, b], [n as i128, d as i128]], n)
}

/// W_Q = (Qx y; Nz Qw) with Qx ≡ 1 mod N/Q, y ≡ −1 mod Q and determinant Q.
pub fn w_matrix(n: u64, q: u64) -> Result<AlGroupElem, ModFormError> {
    let r = check_exact(n, q)? as i128;
    let q = q as i128;
    let x = if r == 1 { 1 } else { q.extended_gcd(&r).x.rem_euclid(r) };
    for t in 0..1000 {
        let y = q * t - 1;
        let a = q * x;
        let e = a.extended_gcd(&(r * y));
        if e.gcd != 1 {
            continue;
        }
        // a·w + (r y)·(−z) = 1
        let (w, z) = (e.x, -e.y);
        return AlGroupElem::new([[a, y], [n as i128 * z, q * w]], n);
    }
    Err(ModFormError::Condition("no W_Q matrix found".into()))
}

#[derive(Clone, Debug)]
pub struct AlReport {
    pub n: u64,
    pub q: u64,
    /// (relation, holds, witness matrices)
    pub relations: Vec<(String, bool, String)>,
}

impl AlReport {
    pub fn holds(&self) -> bool {
        !self.relations.is_empty() && self.relations.iter().all(|r| r.1)
    }

    /// Distinct relation families checked (the square, the diamond twist and the composition law).
    pub fn families(&self) -> usize {
        let mut f: Vec<&str> = self.relations.iter().map(|r| r.0.split(':').next().unwrap()).collect();
        f.dedup();
        f.len()
    }
}

/// Check W_Q² = (Q 0; 0 Q)⟨Q⟩_{N/Q}⟨−1⟩_Q, ⟨d⟩_Q⟨d′⟩_{N/Q}W_Q = W_Q⟨d^{-1}⟩_Q⟨d′⟩_{N/Q}
/// for all units d, d′, and W_{QQ′} = ⟨Q′⟩_Q W_Q W_{Q′} for every Q′ > 1 exactly dividing N/Q.
pub fn atkin_lehner_relations_check(n: u64, q: u64) -> Result<AlReport, ModFormError> {
    let r = check_exact(n, q)?;
    let wq = w_matrix(n, q)?;
    let mut rel = Vec::new();

    let lhs = wq.mul(&wq);
    let rhs = AlGroupElem::scalar(q as i128, n).mul(&diamond_matrix(n, r, q as i64)?).mul(&diamond_matrix(n, q, -1)?);
    rel.push(("square".to_string(), lhs.equivalent(&rhs), format!("W={wq:?} W²={lhs:?} rhs={rhs:?}")));

    for d in (1..q.max(2)).filter(|d| d.gcd(&q) == 1) {
        for d2 in (1..r.max(2)).filter(|d| d.gcd(&r) == 1) {
            let dinv = (d as i64).extended_gcd(&(q as i64)).x;
            let l = diamond_matrix(n, q, d as i64)?.mul(&diamond_matrix(n, r, d2 as i64)?).mul(&wq);
            let rr = wq.mul(&diamond_matrix(n, q, dinv)?).mul(&diamond_matrix(n, r, d2 as i64)?);
            rel.push((format!("twist:{d},{d2}"), l.equivalent(&rr), format!("{l:?} vs {rr:?}")));
        }
    }

    for q2 in crate::ring_tower::divisors(r).into_iter().filter(|&q2| q2 > 1 && (r / q2).gcd(&q2) == 1) {
        let l = w_matrix(n, q * q2)?;
        let rr = diamond_matrix(n, q, q2 as i64)?.mul(&wq).mul(&w_matrix(n, q2)?);
        rel.push((format!("compose:{q2}"), l.equivalent(&rr), format!("{l:?} vs {rr:?}")));
    }
    Ok(AlReport { n, q, relations: rel })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations_hold_on_small_levels() {
        for (n, q) in [(15, 3), (15, 5), (45, 9), (21, 3), (45, 5)] {
            let rep = atkin_lehner_relations_check(n, q).unwrap();
            assert!(rep.holds(), "{rep:?}");
            assert_eq!(rep.families(), 3, "{rep:?}");
        }
    }

    #[test]
    fn composition_at_45() {
        let w45 = w_matrix(45, 45).unwrap();
        let rhs = diamond_matrix(45, 9, 5).unwrap().mul(&w_matrix(45, 9).unwrap()).mul(&w_matrix(45, 5).unwrap());
        assert!(w45.equivalent(&rhs));
        // a wrong diamond breaks it
        let bad = diamond_matrix(45, 9, 2).unwrap().mul(&w_matrix(45, 9).unwrap()).mul(&w_matrix(45, 5).unwrap());
        assert!(!w45.equivalent(&bad));
    }

    #[test]
    fn trivial_divisor_is_identity_class() {
        let w1 = w_matrix(15, 1).unwrap();
        assert!(w1.equivalent(&AlGroupElem::identity(15)));
        let rep = atkin_lehner_relations_check(15, 1).unwrap();
        assert!(rep.holds());
    }

    #[test]
    fn bad_inputs() {
        assert!(w_matrix(45, 3).is_err());
        assert!(diamond_matrix(15, 3, 3).is_err());
        assert!(AlGroupElem::new([[0, 1], [1, 0]], 5).is_err());
        // squaring relation fails without the ⟨−1⟩ factor for Q = 5
        let w = w_matrix(15, 5).unwrap();
        let rhs = AlGroupElem::scalar(5, 15).mul(&diamond_matrix(15, 3, 5).unwrap());
        assert!(!w.mul(&w).equivalent(&rhs));
    }
}
