use num_integer::Integer;
use num_rational::BigRational;

use super::{eisenstein_qexp, ModFormError, ModularFormQExp, Weight};
use crate::dirichlet::{DirichletChar, PadicEmbedding};
use crate::iwasawa::{cyclo_eq, mazur_zeta, IwasawaElem, IwasawaTensorElem, Level, PointTable};
use crate::ring_tower::{rat, CycloElem, RingElem, ZModPr};

#[derive(Clone, Debug)]
pub enum EisensteinVariant {
    /// 𝒢(0(N), ν^{-1}, 𝐣), optionally multiplied by c² − c^𝐣ν(c).
    G0 { n: u64, nu: DirichletChar, c: Option<i64> },
    /// _d𝒢(1(N), 2 + ν + 𝐤 − 𝐣, id).
    G1 { n: u64, nu: DirichletChar, d: i64 },
}

/// ν as a scalar of ℤ/p^r; ν must take tame values (order dividing p − 1).
fn tame_value(nu: &DirichletChar, a: i64, level: Level) -> Result<ZModPr, ModFormError> {
    let v = PadicEmbedding::new(level.p, level.r).char_value(nu, a)?;
    if v.order() != 1 {
        return Err(ModFormError::Condition(format!("{nu:?} must have order dividing p − 1")));
    }
    Ok(v.as_scalar().unwrap())
}

fn check_nu(nu: &DirichletChar, level: Level) -> Result<(), ModFormError> {
    let mut m = nu.conductor();
    while m % level.p == 0 {
        m /= level.p;
    }
    if nu.is_trivial() || m != 1 {
        return Err(ModFormError::Condition(format!("ν = {nu:?} must be nontrivial of p-power conductor")));
    }
    Ok(())
}

/// 𝒢(0(N), ν^{-1}, 𝐣) = 2 Σ_{p∤n} q^n Σ_{uv=n, N|u} ν^{-1}(u) v^{-1}[v].
pub fn lambda_adic_g0(n_mod: u64, nu: &DirichletChar, level: Level, prec: usize) -> Result<ModularFormQExp<IwasawaElem>, ModFormError> {
    check_nu(nu, level)?;
    let p = level.p;
    let nu_inv = nu.inverse();
    let zero = IwasawaElem::zero(level);
    let mut c = vec![zero.clone(); prec];
    for (n, slot) in c.iter_mut().enumerate().skip(1) {
        let n = n as u64;
        if n % p == 0 {
            continue;
        }
        let mut acc = zero.clone();
        for u in crate::ring_tower::divisors(n) {
            if u % n_mod != 0 {
                continue;
            }
            let v = n / u;
            let s = tame_value(&nu_inv, u as i64, level)? * level.scalar(v as i64).inv().expect("p ∤ v");
            acc = acc.plus(&IwasawaElem::embed_group_element(v as i64, level)?.scale(s));
        }
        *slot = acc.scale(level.scalar(2));
    }
    let w = Weight::Family(format!("-nu+j, nu = {nu:?}"));
    Ok(ModularFormQExp::new(n_mod, w, None, c, &zero))
}

/// c²[1] − ν(c)[c], the regularising factor of the first family.
pub fn c_factor(c: i64, nu: &DirichletChar, n_mod: u64, level: Level) -> Result<IwasawaElem, ModFormError> {
    if c.gcd(&(6 * level.p as i64 * n_mod as i64)) != 1 {
        return Err(ModFormError::Condition(format!("c = {c} must be prime to 6pN")));
    }
    let one = IwasawaElem::one(level).scale(level.scalar(c * c));
    let cc = IwasawaElem::embed_group_element(c, level)?.scale(tame_value(nu, c, level)?);
    Ok(one.minus(&cc))
}

fn inv_mod(x: u64, m: u64) -> u64 {
    let e = (x as i64).extended_gcd(&(m as i64));
    e.x.rem_euclid(m as i64) as u64
}

/// ι(x) = x ν(x) [x] ⊗ [1] ⊗ [x^{-1}]; factors are (𝐤, unused, 𝐣).
fn iota(x: u64, nu: &DirichletChar, level: Level) -> Result<IwasawaTensorElem, ModFormError> {
    let pm = level.modulus();
    let g = IwasawaTensorElem::group_element(level, x as i64, 1, inv_mod(x % pm, pm) as i64)?;
    Ok(g.scale(level.scalar(x as i64) * tame_value(nu, x as i64, level)?))
}

/// _d𝒢(1(N), 2 + ν + 𝐤 − 𝐣, id) through q^{T−1}. Needs r ≤ m + 1 so that u ↦ u
/// is a function on (ℤ/p^{m+1})^×.
pub fn lambda_adic_g1(
    n_mod: u64,
    nu: &DirichletChar,
    d: i64,
    level: Level,
    prec: usize,
) -> Result<ModularFormQExp<IwasawaTensorElem>, ModFormError> {
    check_nu(nu, level)?;
    if level.r > level.m + 1 {
        return Err(ModFormError::Condition("the second family needs r ≤ m + 1".into()));
    }
    let p = level.p;
    let pm = level.modulus();
    let zero = IwasawaTensorElem::zero(level);
    let minus = IwasawaTensorElem::group_element(level, -1, 1, -1)?.scale(tame_value(nu, -1, level)?);
    let dm = (d.rem_euclid(pm as i64)) as u64;
    let d_twist = IwasawaTensorElem::group_element(level, inv_mod(dm, pm) as i64, 1, d)?
        .scale(tame_value(nu, d, level)?.inv().expect("unit"));
    let cterm = |t: i64, n: u64| -> Result<IwasawaTensorElem, ModFormError> {
        let mut plus = zero.clone();
        let mut mirror = zero.clone();
        for u in crate::ring_tower::divisors(n) {
            if u % p == 0 {
                continue;
            }
            if (u as i64 - t).rem_euclid(n_mod as i64) == 0 {
                plus = plus.plus(&iota(u, nu, level)?);
            }
            if (u as i64 + t).rem_euclid(n_mod as i64) == 0 {
                mirror = mirror.plus(&iota(u, nu, level)?);
            }
        }
        Ok(plus.plus(&minus.times(&mirror)))
    };
    let mut c = Vec::with_capacity(prec);
    // constant term from the regularised zeta element
    let push = |mu: &IwasawaElem| -> Result<IwasawaTensorElem, ModFormError> {
        let mut acc = zero.clone();
        for (x, w) in mu.support() {
            acc = acc.plus(&iota(x, nu, level)?.scale(w));
        }
        Ok(acc)
    };
    let mu_plus = push(&mazur_zeta(1, n_mod, d, level)?)?;
    let mu_minus = push(&mazur_zeta(-1, n_mod, d, level)?)?;
    let half = level.scalar(2).inv().unwrap();
    c.push(mu_plus.plus(&minus.times(&mu_minus)).scale(half));
    let d2 = level.scalar(d * d);
    for n in 1..prec as u64 {
        let a = cterm(1, n)?.scale(d2);
        let b = d_twist.times(&cterm(d, n)?);
        c.push(a.minus(&b));
    }
    c.truncate(prec);
    let w = Weight::Family(format!("2+nu+k-j, nu = {nu:?}"));
    Ok(ModularFormQExp::new(n_mod, w, None, c, &zero))
}

pub fn lambda_adic_eisenstein(variant: &EisensteinVariant, level: Level, prec: usize) -> Result<LambdaForm, ModFormError> {
    Ok(match variant {
        EisensteinVariant::G0 { n, nu, c } => {
            let g = lambda_adic_g0(*n, nu, level, prec)?;
            let g = match c {
                Some(c) => {
                    let cf = c_factor(*c, nu, *n, level)?;
                    g.map(&IwasawaElem::zero(level), |x| x.times(&cf))
                }
                None => g,
            };
            LambdaForm::OneVariable(g)
        }
        EisensteinVariant::G1 { n, nu, d } => LambdaForm::ThreeVariable(lambda_adic_g1(*n, nu, *d, level, prec)?),
    })
}

#[derive(Clone, Debug)]
pub enum LambdaForm {
    OneVariable(ModularFormQExp<IwasawaElem>),
    ThreeVariable(ModularFormQExp<IwasawaTensorElem>),
}

/// Evaluate at 𝐣 = k + 1 + χ.
pub fn specialize_g0(g: &ModularFormQExp<IwasawaElem>, k: i64, chi: &DirichletChar) -> Result<Vec<CycloElem<ZModPr>>, ModFormError> {
    let level = g.zero_elem().level();
    let t = PointTable::new(level, k + 1, chi)?;
    Ok(g.coeffs().iter().map(|x| x.specialize_table(&t)).collect())
}

/// Evaluate at 𝐤 = k + ε, 𝐣 = k + 1 + χ.
pub fn specialize_g1(
    g: &ModularFormQExp<IwasawaTensorElem>,
    k: i64,
    eps: &DirichletChar,
    chi: &DirichletChar,
) -> Result<Vec<CycloElem<ZModPr>>, ModFormError> {
    let level = g.zero_elem().level();
    let tk = PointTable::new(level, k, eps)?;
    let tm = PointTable::trivial(level, 0)?;
    let tj = PointTable::new(level, k + 1, chi)?;
    Ok(g.coeffs().iter().map(|x| x.specialize([&tk, &tm, &tj])).collect())
}

/// Coefficientwise image of an exact cyclotomic q-expansion in ℤ/p^r[ζ_{p^w}].
pub fn embed_series(
    f: &ModularFormQExp<CycloElem<BigRational>>,
    p: u64,
    r: u32,
) -> Result<Vec<CycloElem<ZModPr>>, ModFormError> {
    let emb = PadicEmbedding::new(p, r);
    f.coeffs().iter().map(|x| Ok(emb.embed(x)?)).collect()
}

#[derive(Clone, Debug)]
pub struct NaturalityReport {
    pub compared: usize,
    pub mismatches: Vec<usize>,
    /// Coefficients left out of the comparison, with the reason.
    pub skipped: Vec<(usize, &'static str)>,
}

impl NaturalityReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.compared > 0
    }
}

fn compare(lhs: &[CycloElem<ZModPr>], rhs: &[CycloElem<ZModPr>], skip0: Option<&'static str>) -> NaturalityReport {
    let mut rep = NaturalityReport { compared: 0, mismatches: vec![], skipped: vec![] };
    for (n, (a, b)) in lhs.iter().zip(rhs).enumerate() {
        if n == 0 {
            if let Some(why) = skip0 {
                rep.skipped.push((0, why));
                continue;
            }
        }
        rep.compared += 1;
        if !cyclo_eq(a, b) {
            rep.mismatches.push(n);
        }
    }
    rep
}

/// Compare the specialisation of c·𝒢(0(N), ν^{-1}, 𝐣) at 𝐣 = k+1+χ with
/// (c² − c^{k+1}χ(c)ν(c))·G^{(k+1)}(0(N), ν^{-1}, χ).
///
/// A trivial χ is read as the trivial character mod p (the family only sees
/// p ∤ n), which is only allowed for k = 0; the family has no constant term,
/// so a_0 is then left out.
pub fn g0_naturality(
    n_mod: u64,
    nu: &DirichletChar,
    c: i64,
    k: i64,
    chi: &DirichletChar,
    level: Level,
    prec: usize,
) -> Result<NaturalityReport, ModFormError> {
    if chi.parity() * nu.parity() != if (k + 1) % 2 == 0 { 1 } else { -1 } {
        return Err(ModFormError::Condition("sign condition χ(−1)ν(−1) = (−1)^{k+1} fails".into()));
    }
    let fam = lambda_adic_eisenstein(&EisensteinVariant::G0 { n: n_mod, nu: nu.clone(), c: Some(c) }, level, prec)?;
    let LambdaForm::OneVariable(fam) = fam else { unreachable!() };
    let lhs = specialize_g0(&fam, k, chi)?;
    let (chi_c, skip0) = if chi.is_trivial() {
        if k != 0 {
            return Err(ModFormError::Condition("trivial χ needs k = 0".into()));
        }
        (DirichletChar::trivial(level.p), Some("family has no constant term; trivial χ is depleted at p"))
    } else {
        (chi.clone(), None)
    };
    let g = eisenstein_qexp((k + 1) as u32, 0, n_mod, &nu.inverse(), &chi_c, prec)?;
    let o = g.coeff(0).order();
    let one = rat(1, 1);
    let chinu = chi_c.value(c, &one).lift_to(o)?.times(&nu.value(c, &one).lift_to(o)?);
    let factor = CycloElem::scalar(o, rat(c * c, 1)).minus(&chinu.scale(&BigRational::from_integer(num_bigint::BigInt::from(c).pow((k + 1) as u32))));
    let g = g.map(&g.coeff(0), |x| x.times(&factor));
    let rhs = embed_series(&g, level.p, level.r)?;
    Ok(compare(&lhs, &rhs, skip0))
}

/// Compare the specialisation of _d𝒢(1(N), 2+ν+𝐤−𝐣, id) at 𝐤 = k+ε, 𝐣 = k+1+χ with
/// d²G^{(1)}(1(N), ψ, 1) − dψ(d)^{-1}G^{(1)}(d(N), ψ, 1), ψ = ενχ^{-1} taken mod p^{m+1}.
pub fn g1_naturality(
    n_mod: u64,
    nu: &DirichletChar,
    d: i64,
    k: i64,
    eps: &DirichletChar,
    chi: &DirichletChar,
    level: Level,
    prec: usize,
) -> Result<NaturalityReport, ModFormError> {
    let fam = lambda_adic_g1(n_mod, nu, d, level, prec)?;
    let lhs = specialize_g1(&fam, k, eps, chi)?;
    let pm = level.modulus();
    let psi = eps.induce(pm)?.mul(&nu.induce(pm)?).mul(&chi.inverse().induce(pm)?);
    let triv = DirichletChar::trivial(1);
    let g1 = eisenstein_qexp(1, 1, n_mod, &psi, &triv, prec)?;
    let gd = eisenstein_qexp(1, d, n_mod, &psi, &triv, prec)?;
    let o = g1.coeff(0).order();
    let one = rat(1, 1);
    let psi_d_inv = psi.inverse().value(d, &one).lift_to(o)?.scale(&rat(d, 1));
    let d2 = rat(d * d, 1);
    // combine over ℚ(ζ) first: only the regularised combination is p-integral
    let comb: Vec<CycloElem<BigRational>> =
        g1.coeffs().iter().zip(gd.coeffs()).map(|(a, b)| a.scale(&d2).minus(&b.times(&psi_d_inv))).collect();
    let combined = ModularFormQExp::new(g1.level, g1.weight.clone(), None, comb, &g1.coeff(0));
    let rhs = embed_series(&combined, level.p, level.r)?;
    Ok(compare(&lhs, &rhs, None))
}
