use num_integer::Integer;
use num_rational::BigRational;

use super::{ModFormError, ModularFormQExp, Weight};
use crate::dirichlet::{partial_zeta_at_zero, DirichletChar};
use crate::ring_tower::{rat, CycloElem, RingElem};

/// σ_{k−1}(t(N), χ1, χ2, n) = Σ_{uv=n, u ≡ t mod N} χ1(u)χ2(v)v^{k−1}, in ℚ(ζ_o).
pub fn divisor_sum(
    k: u32,
    t: i64,
    n_mod: u64,
    chi1: &DirichletChar,
    chi2: &DirichletChar,
    n: u64,
    order: u64,
) -> CycloElem<BigRational> {
    let one = rat(1, 1);
    let mut acc = CycloElem::scalar(order, rat(0, 1));
    for u in crate::ring_tower::divisors(n) {
        if (u as i64 - t).rem_euclid(n_mod as i64) != 0 {
            continue;
        }
        let v = n / u;
        let (Some(e1), Some(e2)) = (chi1.char_eval(u as i64), chi2.char_eval(v as i64)) else {
            continue;
        };
        let e = e1 * (order / chi1.order()) + e2 * (order / chi2.order());
        let w = BigRational::from_integer(num_bigint::BigInt::from(v).pow(k - 1));
        acc = acc.plus(&CycloElem::zeta_pow(order, e as i64, &one).scale(&w));
    }
    acc
}

/// G^{(k)}(t(N), χ1, χ2) through q^{T−1}, exactly over ℚ(ζ_o), o = lcm of the character orders.
///
/// Requires k = 1 or both characters nontrivial. The constant term is 0 when
/// both are nontrivial and ½(ζ(t(N), χ1, 0) ± ζ(−t(N), χ1, 0)) when k = 1 and
/// χ2 is trivial; the remaining case (k = 1, χ1 trivial, χ2 not) is rejected.
pub fn eisenstein_qexp(
    k: u32,
    t: i64,
    n_mod: u64,
    chi1: &DirichletChar,
    chi2: &DirichletChar,
    prec: usize,
) -> Result<ModularFormQExp<CycloElem<BigRational>>, ModFormError> {
    if k == 0 {
        return Err(ModFormError::Condition("weight must be at least 1".into()));
    }
    let both = !chi1.is_trivial() && !chi2.is_trivial();
    if k != 1 && !both {
        return Err(ModFormError::Condition("need k = 1 or both characters nontrivial".into()));
    }
    let order = chi1.order().lcm(&chi2.order());
    let sign = if k % 2 == 0 { 1 } else { -1 } * chi1.parity() * chi2.parity();
    let zero = CycloElem::scalar(order, rat(0, 1));
    let a0 = if both {
        zero.clone()
    } else if chi2.is_trivial() {
        let z1 = partial_zeta_at_zero(t, n_mod, chi1).lift_to(order)?;
        let z2 = partial_zeta_at_zero(-t, n_mod, chi1).lift_to(order)?;
        z1.plus(&z2.scale(&rat(sign, 1))).scale(&rat(1, 2))
    } else {
        return Err(ModFormError::Condition("constant term is only given for χ2 trivial or both nontrivial".into()));
    };
    let mut c = vec![a0];
    for n in 1..prec as u64 {
        let a = divisor_sum(k, t, n_mod, chi1, chi2, n, order);
        let b = divisor_sum(k, -t, n_mod, chi1, chi2, n, order);
        c.push(a.plus(&b.scale(&rat(sign, 1))));
    }
    c.truncate(prec);
    let level = n_mod * chi1.modulus() * chi2.modulus();
    let neb = if t.rem_euclid(n_mod as i64) == 0 || n_mod <= 2 { Some(chi1.mul(chi2).induce(level)?) } else { None };
    Ok(ModularFormQExp::new(level, Weight::Int(k as i64), neb, c, &zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::DirichletChar;
    use crate::modforms::HeckeOp;

    fn chars(m: u64) -> Vec<DirichletChar> {
        DirichletChar::all(m)
    }

    #[test]
    fn divisor_enumeration_oracle() {
        // independent brute force over all pairs (u, v) with uv = n
        let c5 = chars(5);
        let c25 = chars(25);
        for (chi1, chi2) in [(&c5[1], &c5[2]), (&c25[3], &c5[1]), (&c5[3], &c25[7])] {
            for k in [2u32, 3] {
                for (t, nm) in [(0i64, 1u64), (1, 3), (2, 7)] {
                    let Ok(e) = eisenstein_qexp(k, t, nm, chi1, chi2, 51) else { continue };
                    let o = chi1.order().lcm(&chi2.order());
                    let sign = if k % 2 == 0 { 1 } else { -1 } * chi1.parity() * chi2.parity();
                    for n in 1..=50u64 {
                        let mut raw = vec![rat(0, 1); o as usize];
                        for u in 1..=n {
                            for v in 1..=n {
                                if u * v != n {
                                    continue;
                                }
                                let (Some(e1), Some(e2)) = (chi1.char_eval(u as i64), chi2.char_eval(v as i64)) else {
                                    continue;
                                };
                                let idx = ((e1 * (o / chi1.order()) + e2 * (o / chi2.order())) % o) as usize;
                                let w = rat((v as i64).pow(k - 1), 1);
                                if (u as i64 - t).rem_euclid(nm as i64) == 0 {
                                    raw[idx] += w.clone();
                                }
                                if (u as i64 + t).rem_euclid(nm as i64) == 0 {
                                    raw[idx] += w * rat(sign, 1);
                                }
                            }
                        }
                        let want = crate::ring_tower::cyclotomic_reduce(&raw, o, &rat(0, 1));
                        assert_eq!(e.coeff(n as usize), want, "n = {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn constant_terms() {
        let c5 = chars(5);
        let e = eisenstein_qexp(2, 0, 1, &c5[1], &c5[1], 5).unwrap();
        assert!(e.coeff(0).is_zero());
        let triv = DirichletChar::trivial(1);
        let odd = c5.iter().find(|c| c.parity() == -1).unwrap();
        let e = eisenstein_qexp(1, 1, 3, odd, &triv, 5).unwrap();
        let o = odd.order();
        let want = partial_zeta_at_zero(1, 3, odd)
            .plus(&partial_zeta_at_zero(-1, 3, odd).scale(&rat(-odd.parity(), 1)))
            .scale(&rat(1, 2))
            .lift_to(o)
            .unwrap();
        assert_eq!(e.coeff(0), want);
        assert!(eisenstein_qexp(2, 0, 1, &triv, &c5[1], 5).is_err());
        assert!(eisenstein_qexp(1, 0, 1, &triv, &c5[1], 5).is_err());
    }

    #[test]
    fn weight_one_theta_of_disc_minus_11() {
        // G^{(1)}(0(1), χ_{-11}, 1) = 1 + 2 Σ (Σ_{d|n} χ(d)) q^n
        let chi = DirichletChar::from_fn(11, 2, |a| if [1, 3, 4, 5, 9].contains(&a) { 0 } else { 1 }).unwrap();
        let e = eisenstein_qexp(1, 0, 1, &chi, &DirichletChar::trivial(1), 12).unwrap();
        let vals: Vec<_> = (0..12).map(|n| e.coeff(n).as_scalar().unwrap()).collect();
        let want = [1, 2, 0, 4, 2, 4, 0, 0, 0, 6, 0, 2];
        assert_eq!(vals, want.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>());
        // eigenform for T_2 with eigenvalue 1 + χ(2) = 0
        let t2 = e.apply_hecke(HeckeOp::T(2)).unwrap();
        assert!(t2.coeffs().iter().all(|x| x.is_zero()));
    }
}
