use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use super::{HeckeOp, ModFormError, ModularFormQExp};
use crate::ring_tower::{hensel_lift, ZMat, ZModPr};

fn ring_of(basis: &[ModularFormQExp<ZModPr>]) -> Result<(u64, u32), ModFormError> {
    let z = basis.first().ok_or_else(|| ModFormError::Condition("empty span".into()))?.zero_elem();
    Ok((z.p(), z.r()))
}

/// Coordinates of `f` in the span, solved on the shared q-precision.
/// The second value is the p-adic precision lost in the solve.
pub fn coordinates(basis: &[ModularFormQExp<ZModPr>], f: &ModularFormQExp<ZModPr>) -> Result<(Vec<ZModPr>, u32), ModFormError> {
    let (p, r) = ring_of(basis)?;
    let t = basis.iter().map(|b| b.precision()).chain([f.precision()]).min().unwrap();
    if t < basis.len() {
        return Err(ModFormError::Precision { have: t, need: format!("at least {} coefficients", basis.len()) });
    }
    let cols: Vec<Vec<ZModPr>> = basis.iter().map(|b| b.coeffs()[..t].to_vec()).collect();
    let m = ZMat::from_columns(p, r, t, &cols);
    let (x, loss) = m
        .solve(&f.coeffs()[..t])
        .map_err(|e| ModFormError::NotStable(format!("image is outside the span through q^{}: {e}", t - 1)))?;
    Ok((x, loss))
}

/// Matrix of `op` on the span (column j = coordinates of op(b_j)), with the worst solve loss.
/// U_ℓ is applied as a raw coefficient operator so that p-adic spans need no level bookkeeping.
pub fn hecke_matrix(basis: &[ModularFormQExp<ZModPr>], op: HeckeOp) -> Result<(ZMat, u32), ModFormError> {
    let (p, r) = ring_of(basis)?;
    let mut cols = Vec::with_capacity(basis.len());
    let mut loss = 0;
    for b in basis {
        let img = match op {
            HeckeOp::U(l) => b.u_raw(l),
            _ => b.apply_hecke(op)?,
        };
        let (c, l) = coordinates(basis, &img)?;
        loss = loss.max(l);
        cols.push(c);
    }
    Ok((ZMat::from_columns(p, r, basis.len(), &cols), loss))
}

#[derive(Clone, Debug)]
pub struct OrdinaryProjection {
    pub up_matrix: ZMat,
    pub e: ZMat,
    pub rank: usize,
    /// Images e(b_j) as forms, one per basis element.
    pub projected: Vec<ModularFormQExp<ZModPr>>,
    pub loss: u32,
    /// Number of p-th powerings needed before the power stabilised.
    pub iterations: usize,
}

impl OrdinaryProjection {
    pub fn is_idempotent(&self) -> bool {
        self.e.mul(&self.e) == self.e
    }

    pub fn commutes_with_up(&self) -> bool {
        self.e.mul(&self.up_matrix) == self.up_matrix.mul(&self.e)
    }

    /// e applied to a coordinate vector.
    pub fn apply(&self, coords: &[ZModPr]) -> Vec<ZModPr> {
        self.e.mul_vec(coords)
    }
}

fn pow_big(a: &ZMat, e: &BigUint) -> ZMat {
    let mut acc = ZMat::identity(a.p(), a.r(), a.rows());
    for i in (0..e.bits()).rev() {
        acc = acc.mul(&acc);
        if e.bit(i) {
            acc = acc.mul(a);
        }
    }
    acc
}

fn combine(basis: &[ModularFormQExp<ZModPr>], coords: &[ZModPr]) -> ModularFormQExp<ZModPr> {
    let t = basis.iter().map(|b| b.precision()).min().unwrap();
    let zero = basis[0].zero_elem().clone();
    let mut c = vec![zero.clone(); t];
    for (b, x) in basis.iter().zip(coords) {
        for (n, slot) in c.iter_mut().enumerate() {
            *slot = *slot + b.coeff(n) * *x;
        }
    }
    ModularFormQExp::new(basis[0].level, basis[0].weight.clone(), basis[0].nebentypus.clone(), c, &zero)
}

/// e = lim U_p^{n!} on a U_p-stable span: first raise to lcm_{f ≤ d}(p^f − 1), which
/// makes the unit part unipotent mod p, then take p-th powers until the matrix stops moving.
pub fn ordinary_projector(basis: &[ModularFormQExp<ZModPr>], p: u64) -> Result<OrdinaryProjection, ModFormError> {
    let (bp, r) = ring_of(basis)?;
    if bp != p {
        return Err(ModFormError::Condition(format!("span is over ℤ/{bp}^r, not ℤ/{p}^r")));
    }
    let (a, loss) = hecke_matrix(basis, HeckeOp::U(p))?;
    let d = basis.len() as u32;
    let mut m = BigUint::one();
    for f in 1..=d {
        m = m.lcm(&(BigUint::from(p).pow(f) - 1u32));
    }
    let mut e = pow_big(&a, &m);
    let mut iterations = 0;
    loop {
        let next = e.pow(p);
        if next == e {
            break;
        }
        e = next;
        iterations += 1;
        if iterations > 4 * (r as usize + d as usize) + 8 {
            return Err(ModFormError::NotStable("U_p power did not stabilise".into()));
        }
    }
    let rank = e.rank_mod_p();
    let projected = (0..basis.len()).map(|j| combine(basis, &e.column(j))).collect();
    Ok(OrdinaryProjection { up_matrix: a, e, rank, projected, loss, iterations })
}

/// The two degeneracy maps between level N and level Np on the old space of an eigenform f0,
/// with pull-backs pr_1^* f0 = f0 and pr_2^* f0 = p^{k+1} V_p f0 as the basis.
#[derive(Clone, Debug)]
pub struct Stabilization {
    pub p: u64,
    pub k: i64,
    pub eps_p: ZModPr,
    pub alpha: ZModPr,
    pub beta: ZModPr,
    /// (Pr^α)^* f0 = f0 − β V_p f0, as coefficients on (f0, V_p f0).
    pub pull_alpha: [ZModPr; 2],
    /// (pr_1)_* ∘ (pr_1^*, pr_2^*) as multiples of f0.
    pub push1: [ZModPr; 2],
    /// (pr_2)_* ∘ (pr_1^*, pr_2^*).
    pub push2: [ZModPr; 2],
    /// (Pr^α)_* ∘ pr_2^* on f0; a unit for ordinary f0.
    pub composite: ZModPr,
}

impl Stabilization {
    pub fn pullback(&self, f0: &ModularFormQExp<ZModPr>) -> ModularFormQExp<ZModPr> {
        let vp = f0.v_op(self.p).scale(&self.beta);
        let c = f0.coeffs().iter().zip(vp.coeffs()).map(|(a, b)| *a - *b).collect();
        ModularFormQExp::new(f0.level * self.p, f0.weight.clone(), f0.nebentypus.clone(), c, f0.zero_elem())
    }

    /// α − β/p = α − ε(p)p^k/α, the value the composite should take.
    pub fn expected_composite(&self) -> ZModPr {
        let pk = self.alpha.with_value(self.p as i64).pow(self.k as u64);
        self.alpha - self.eps_p * pk * self.alpha.inv().expect("unit root")
    }
}

/// Stabilisation data for an eigenform with T_p-eigenvalue a_p and ε(p) at weight k + 2.
/// α is the unit root of X² − a_p X + ε(p)p^{k+1}; β = ε(p)p^{k+1}/α.
pub fn stabilization_maps(a_p: ZModPr, eps_p: ZModPr, p: u64, k: i64) -> Result<Stabilization, ModFormError> {
    if !a_p.is_unit() {
        return Err(ModFormError::NotOrdinary(format!("a_p = {} is not a unit", a_p.signed())));
    }
    let pk1 = a_p.with_value(p as i64).pow((k + 1) as u64);
    let pk = a_p.with_value(p as i64).pow(k as u64);
    let c0 = eps_p * pk1;
    // X² − a_p X + c0, constant-first; the unit root reduces to a_p mod p
    let alpha = hensel_lift(&[c0, -a_p, a_p.with_value(1)], a_p.value() % p)?;
    let alpha_inv = alpha.inv().expect("unit root");
    let beta = c0 * alpha_inv;
    let eps_inv = eps_p.inv().ok_or_else(|| ModFormError::Condition("ε(p) must be a unit".into()))?;
    let p1 = a_p.with_value(p as i64 + 1);
    let push1 = [p1, a_p];
    let push2 = [pk * eps_inv * a_p, pk * p1];
    // β / p^{k+1} = ε(p)/α
    let ratio = eps_p * alpha_inv;
    let composite = push1[1] - ratio * push2[1];
    Ok(Stabilization { p, k, eps_p, alpha, beta, pull_alpha: [a_p.with_value(1), -beta], push1, push2, composite })
}
