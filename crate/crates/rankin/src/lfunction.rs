//! Rankin–Selberg coefficients, Euler-type factors of the p-adic Rankin–Selberg
//! L-function, specialisation scalars of Beilinson–Flach classes, and a small
//! Hida-style p-adic L-value built from ordinary and isotypic projections.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::dirichlet::{gauss_sum, DirichletChar, PadicEmbedding};
use crate::modforms::{
    coordinates, eisenstein_qexp, hecke_matrix, ordinary_projector, HeckeOp, ModFormError, ModularFormQExp, Weight,
};
use crate::ring_tower::{hensel_lift, rat, CycloElem, RingElem, ZMat, ZModPr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LError {
    #[error("not ordinary: {0}")]
    NotOrdinary(String),
    #[error("parameters out of range: {0}")]
    Range(String),
    #[error("projection failed: {0}")]
    Projection(String),
    #[error(transparent)]
    Form(#[from] ModFormError),
    #[error(transparent)]
    Char(#[from] crate::dirichlet::CharError),
    #[error(transparent)]
    Ring(#[from] crate::ring_tower::RingError),
}

/// Local data at p of an eigenform of weight k + 2: the roots of X² − a_p X + ε(p)p^{k+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenformLocalData {
    pub p: u64,
    pub k: i64,
    pub a_p: ZModPr,
    pub eps_p: ZModPr,
    /// Unit root.
    pub alpha: ZModPr,
    /// a_p − α.
    pub beta: ZModPr,
}

impl EigenformLocalData {
    pub fn new(a_p: ZModPr, eps_p: ZModPr, k: i64) -> Result<Self, LError> {
        let p = a_p.p();
        if !a_p.is_unit() {
            return Err(LError::NotOrdinary(format!("a_p = {} is divisible by p", a_p.signed())));
        }
        if k < -1 {
            return Err(LError::Range(format!("weight {} < 1", k + 2)));
        }
        let c0 = eps_p * a_p.with_value(p as i64).pow((k + 1) as u64);
        let alpha = hensel_lift(&[c0, -a_p, a_p.with_value(1)], a_p.value() % p)?;
        Ok(EigenformLocalData { p, k, a_p, eps_p, alpha, beta: a_p - alpha })
    }

    /// β·p^{-e} computed exactly as ε(p)p^{k+1−e}/α; needs e ≤ k + 1.
    fn beta_over_p(&self, e: i64) -> Result<ZModPr, LError> {
        let shift = self.k + 1 - e;
        if shift < 0 {
            return Err(LError::Range(format!("β/p^{e} is not integral at weight {}", self.k + 2)));
        }
        Ok(self.eps_p * self.alpha.with_value(self.p as i64).pow(shift as u64) * self.alpha.inv().unwrap())
    }

    fn p_pow(&self, e: i64) -> ZModPr {
        self.alpha.with_value(self.p as i64).pow(e as u64)
    }
}

/// A factor (1 − c·ℓ^{shift − 2s})^{-1} of the imprimitive L-series in front of Σ a_n b_n n^{-s}.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactor {
    pub ell: u64,
    pub char_value: CycloElem<BigRational>,
    pub shift: i64,
}

#[derive(Clone, Debug)]
pub struct RankinSeries {
    /// coeffs[n] = χ(n)a_n(f)a_n(g); coeffs[0] = 0.
    pub coeffs: Vec<CycloElem<BigRational>>,
    pub euler_prefix: Vec<LocalFactor>,
}

fn primes_upto(t: usize) -> Vec<u64> {
    (2..t as u64).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

fn weight_of<R: RingElem>(f: &ModularFormQExp<R>) -> Result<i64, LError> {
    match f.weight {
        Weight::Int(k) => Ok(k),
        _ => Err(LError::Range("an integer weight is needed".into())),
    }
}

/// Dirichlet coefficients of the twisted Rankin–Selberg series through n < T.
pub fn rankin_coeffs(
    f: &ModularFormQExp<BigRational>,
    g: &ModularFormQExp<BigRational>,
    chi: &DirichletChar,
    t: usize,
) -> Result<RankinSeries, LError> {
    let t = t.min(f.precision()).min(g.precision());
    let o = chi.order();
    let one = rat(1, 1);
    let mut coeffs = vec![CycloElem::scalar(o, rat(0, 1))];
    for n in 1..t {
        let v = chi.value(n as i64, &one).scale(&(f.coeff(n) * g.coeff(n)));
        coeffs.push(v);
    }
    let (ef, eg) = match (&f.nebentypus, &g.nebentypus) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(LError::Range("both forms need a declared character".into())),
    };
    let psi = ef.mul(&eg).mul(&chi.mul(chi));
    let shift = weight_of(f)? + weight_of(g)? - 2;
    let bad = f.level * g.level * chi.modulus();
    let euler_prefix = primes_upto(t)
        .into_iter()
        .filter(|l| bad % l != 0)
        .map(|l| LocalFactor { ell: l, char_value: psi.value(l as i64, &one), shift })
        .collect();
    Ok(RankinSeries { coeffs, euler_prefix })
}

#[derive(Clone, Debug)]
pub struct InterpolationFactors {
    /// 𝓔(f, g, s + χ) = value·p^{p_shift}.
    pub value: CycloElem<ZModPr>,
    pub p_shift: i64,
    /// 1 − β_f/(pα_f)
    pub e_f: ZModPr,
    /// 1 − β_f/α_f
    pub e_star_f: ZModPr,
}

/// The interpolation factors at s + χ, χ of conductor p^t.
pub fn interpolation_factor(
    fd: &EigenformLocalData,
    gd: &EigenformLocalData,
    s: i64,
    chi: &DirichletChar,
) -> Result<InterpolationFactors, LError> {
    let p = fd.p;
    let one = fd.alpha.with_value(1);
    let af_inv = fd.alpha.inv().unwrap();
    let e_f = one - fd.beta_over_p(1)? * af_inv;
    let e_star_f = one - fd.beta_over_p(0)? * af_inv;
    let cond = chi.conductor();
    let mut t = 0u32;
    let mut c = cond;
    while c % p == 0 {
        c /= p;
        t += 1;
    }
    if c != 1 {
        return Err(LError::Range(format!("χ has conductor {cond}, not a power of {p}")));
    }
    if t == 0 {
        if s < 1 {
            return Err(LError::Range("s ≥ 1 needed for p^{s−1}".into()));
        }
        let ps1 = fd.p_pow(s - 1);
        let ag_inv = gd.alpha.inv().unwrap();
        // p^{s−1}/(α_fβ_g) = α_g p^{s−1}/(α_f ε_g(p) p^{k′+1}); valuation s − 2 − k′
        let v = s - 2 - gd.k;
        if v < 0 {
            return Err(LError::Range(format!("p^{{s−1}}/β_g is not integral for s = {s}")));
        }
        let t2 = fd.p_pow(v) * gd.alpha * af_inv * gd.eps_p.inv().unwrap();
        let prod = (one - ps1 * af_inv * ag_inv)
            * (one - t2)
            * (one - fd.beta_over_p(s)? * gd.alpha)
            * (one - fd.beta_over_p(s)? * gd.beta);
        return Ok(InterpolationFactors { value: CycloElem::scalar(1, prod), p_shift: 0, e_f, e_star_f });
    }
    // G(χ)²·(p^{2s−2}/(α_f²α_gβ_g))^t with α_gβ_g = ε_g(p)p^{k′+1}
    let g = gauss_sum(&chi.primitive())?;
    let emb = PadicEmbedding::new(p, fd.alpha.r());
    let g2 = emb.embed_int(&g.times(&g))?;
    let unit = (af_inv * af_inv * gd.eps_p.inv().unwrap()).pow(t as u64);
    let p_shift = (2 * s - 2 - (gd.k + 1)) * t as i64;
    Ok(InterpolationFactors { value: g2.scale(&unit), p_shift, e_f, e_star_f })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BfFactor {
    /// Factor for the p-stabilised classes at level Np.
    pub level_np: BigRational,
    /// Factor after pushing down to the newforms at level N.
    pub level_n: BigRational,
}

fn binom(n: i64, k: i64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// The scalar relating a Beilinson–Flach class at (k, k′, j) to the L-value.
#[allow(clippy::too_many_arguments)]
pub fn bf_specialization_factor(
    p: u64,
    k: i64,
    k2: i64,
    j: i64,
    alpha_f: &BigRational,
    alpha_g: &BigRational,
    beta_f: &BigRational,
    beta_g: &BigRational,
    eps_f_c: &BigRational,
    eps_g_c: &BigRational,
    c: i64,
) -> Result<BfFactor, LError> {
    if j < 0 || j > k.min(k2) {
        return Err(LError::Range(format!("need 0 ≤ j ≤ min(k, k′), got j = {j}")));
    }
    let one = BigRational::one();
    let pr = |e: i64| BigRational::from_integer(BigInt::from(p)).pow(e as i32);
    let cr = BigRational::from_integer(BigInt::from(c));
    let euler = &one - pr(j) / (alpha_f * alpha_g);
    let cfac = &cr * &cr - cr.pow((2 * j - k - k2) as i32) / (eps_f_c * eps_g_c);
    let fact: BigInt = (1..=j).map(BigInt::from).product();
    let sign = if j % 2 == 0 { 1 } else { -1 };
    let denom = BigRational::from_integer(BigInt::from(sign) * fact * binom(k, j) * binom(k2, j));
    let level_np = euler * cfac / denom;
    let q = pr(1 + j);
    let extra = (&one - alpha_f * beta_g / &q) * (&one - beta_f * alpha_g / &q) * (&one - beta_f * beta_g / &q);
    Ok(BfFactor { level_n: &level_np * extra, level_np })
}

/// λ² = (−N)^k, with λ required to lie in ℚ(μ_N).
pub fn pseudo_eigenvalue_check(lambda: &CycloElem<BigRational>, n: u64, k: u32) -> bool {
    let m = lambda.order();
    let field = n.lcm(&2);
    let g = m.gcd(&field);
    // λ ∈ ℚ(μ_g) iff it is fixed by every ζ ↦ ζ^a with a ≡ 1 mod g
    let in_field = (1..m as i64)
        .filter(|a| a.gcd(&(m as i64)) == 1 && (a - 1) % g as i64 == 0)
        .all(|a| lambda.galois(a) == *lambda);
    if !in_field {
        return false;
    }
    let target = BigRational::from_integer(BigInt::from(-(n as i64)).pow(k));
    lambda.times(lambda) == CycloElem::scalar(m, target)
}

/// Inputs of the Hida-style construction: an eigenform f of level prime to p, the other
/// eigenforms of the same level and weight (to be projected away), and g.
#[derive(Clone, Debug)]
pub struct HidaSetup {
    pub f: ModularFormQExp<BigRational>,
    pub others: Vec<ModularFormQExp<BigRational>>,
    pub g: ModularFormQExp<BigRational>,
    pub p: u64,
    pub r: u32,
}

#[derive(Clone, Debug)]
pub struct HidaValue {
    pub value: ZModPr,
    /// Precision lost in the linear algebra; the value is meaningful mod p^{r−δ}.
    pub delta: u32,
    pub span_dim: usize,
    pub ordinary_rank: usize,
    pub hecke_primes: Vec<u64>,
}

impl HidaValue {
    pub fn reduced(&self) -> Option<ZModPr> {
        let keep = self.value.r().checked_sub(self.delta).filter(|&k| k > 0)?;
        self.value.reduce_precision(keep).ok()
    }
}

fn reduce_form(f: &ModularFormQExp<BigRational>, p: u64, r: u32) -> Result<ModularFormQExp<ZModPr>, LError> {
    Ok(f.try_map(&ZModPr::zero(p, r), |x| ZModPr::from_rational(p, r, x))?)
}

/// Normalised eigenvalue a_ℓ/a_1 of an eigenform given over ℚ.
fn eigenvalue(f: &ModularFormQExp<BigRational>, l: u64) -> Result<BigRational, LError> {
    let a1 = f.coeff(1);
    if Zero::is_zero(&a1) {
        return Err(LError::Projection("eigenform with a_1 = 0".into()));
    }
    Ok(f.coeff(l as usize) / a1)
}

/// The p-adic Rankin–Selberg value at s = w(f) − 1: a_1 of the f-isotypic part of
/// N_aux^{w(f)+w(g)−2s−2}·e_ord(g·E_{N_aux}), where E is the weight w(f) − w(g) Eisenstein series
/// with character ε_f ε_g^{-1} and E_{N_aux} = N_aux·E is its auxiliary-level normalisation.
///
/// The span is {V_d f, V_d h : h ∈ others, d | N_aux/N_f} together with V_p of each,
/// which is U_p-stable. Only j with 1 + j = w(f) − 1 is supported (holomorphic E).
pub fn hida_padic_l_value(setup: &HidaSetup, j: i64, t: usize, n_aux: u64) -> Result<HidaValue, LError> {
    let (p, r) = (setup.p, setup.r);
    let wf = weight_of(&setup.f)?;
    let wg = weight_of(&setup.g)?;
    if wg > j + 1 || j + 1 > wf - 1 {
        return Err(LError::Range(format!("need w(g) ≤ 1 + j ≤ w(f) − 1, got j = {j}")));
    }
    if j + 1 != wf - 1 {
        return Err(LError::Range("only 1 + j = w(f) − 1 is implemented (holomorphic Eisenstein factor)".into()));
    }
    let nf = setup.f.level;
    if n_aux % nf != 0 || n_aux % setup.g.level != 0 || n_aux % p == 0 {
        return Err(LError::Range(format!("auxiliary level {n_aux} must be a multiple of the levels and prime to p")));
    }
    if setup.f.precision() < t || setup.g.precision() < t {
        return Err(LError::Form(ModFormError::Precision { have: setup.f.precision().min(setup.g.precision()), need: format!("{t}") }));
    }
    // ordinarity of f at p
    EigenformLocalData::new(ZModPr::from_rational(p, r, &setup.f.coeff(p as usize))?, ZModPr::one(p, r), wf - 2)?;

    // g·E_{N_aux}
    let (ef, eg) = match (&setup.f.nebentypus, &setup.g.nebentypus) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(LError::Range("declared characters are needed".into())),
    };
    let psi = ef.mul(&eg.inverse()).primitive();
    let e = eisenstein_qexp((wf - wg) as u32, 0, 1, &psi, &DirichletChar::trivial(1), t)?;
    let e = e.try_map(&rat(0, 1), |x| x.as_scalar().ok_or_else(|| LError::Range("Eisenstein factor is not rational".into())))?;
    let zero = ZModPr::zero(p, r);
    let naux = ZModPr::new(p, r, n_aux as i64);
    let g = reduce_form(&setup.g.truncate(t), p, r)?;
    let e = reduce_form(&e, p, r)?.scale(&naux);
    let h = g.multiply(&e)?;
    let h = ModularFormQExp { level: n_aux * p, weight: Weight::Int(wf), nebentypus: Some(DirichletChar::trivial(n_aux * p)), ..h };

    // declared span at level N_aux·p
    let mut basis = Vec::new();
    let divs: Vec<u64> = crate::ring_tower::divisors(n_aux / nf);
    let neb = Some(DirichletChar::trivial(n_aux * p));
    for form in std::iter::once(&setup.f).chain(&setup.others) {
        let fr = reduce_form(&form.truncate(t), p, r)?;
        for &d in &divs {
            for dd in [d, d * p] {
                let v = fr.v_op(dd);
                basis.push(ModularFormQExp { level: n_aux * p, nebentypus: neb.clone(), ..v });
            }
        }
    }
    let span_dim = basis.len();
    let proj = ordinary_projector(&basis, p)?;
    let (hc, loss_h) = coordinates(&basis, &h)?;
    let v = proj.apply(&hc);

    // f-isotypic projection with T_ℓ, ℓ ∤ N_aux·p, separating f from each other eigenform mod p
    let mut pmat = ZMat::identity(p, r, span_dim);
    let mut loss = proj.loss.max(loss_h);
    let mut primes = Vec::new();
    for o in &setup.others {
        let l = primes_upto(t / 2)
            .into_iter()
            .filter(|l| n_aux % l != 0 && *l != p)
            .find(|&l| {
                let d = eigenvalue(&setup.f, l).and_then(|a| Ok(a - eigenvalue(o, l)?));
                d.ok().and_then(|d| ZModPr::from_rational(p, r, &d).ok()).is_some_and(|x| x.is_unit())
            })
            .ok_or_else(|| LError::Projection("no Hecke operator separates f from the other forms".into()))?;
        let (tm, lt) = hecke_matrix(&basis, HeckeOp::T(l))?;
        loss = loss.max(lt);
        let af = ZModPr::from_rational(p, r, &eigenvalue(&setup.f, l)?)?;
        let ao = ZModPr::from_rational(p, r, &eigenvalue(o, l)?)?;
        let inv = (af - ao).inv().unwrap();
        let q = tm.sub(&ZMat::identity(p, r, span_dim).scale(ao)).scale(inv);
        pmat = q.mul(&pmat);
        primes.push(l);
    }
    let w = pmat.mul_vec(&v);
    let mut a1 = zero;
    for (b, x) in basis.iter().zip(&w) {
        a1 = a1 + b.coeff(1) * *x;
    }
    // normalisation N_aux^{w(f)+w(g)−2(1+j)−2} = N_aux^{-1} at the supported edge
    let expo = wf + wg - 2 * (1 + j) - 2;
    let norm = naux.pow_i(expo).unwrap();
    Ok(HidaValue { value: a1 * norm, delta: loss, span_dim, ordinary_rank: proj.rank, hecke_primes: primes })
}

/// E_2(q) − N·E_2(q^N) with E_2 = 1 − 24Σσ(n)qⁿ, the Eisenstein series in M_2(Γ_0(N)) for prime N.
pub fn e2_prime_level(n: u64, prec: usize) -> ModularFormQExp<BigRational> {
    let sigma = |m: usize| (1..=m).filter(|d| m % d == 0).sum::<usize>() as i64;
    let e2 = |m: usize| if m == 0 { 1 } else { -24 * sigma(m) };
    let nn = n as usize;
    let c = (0..prec).map(|m| rat(e2(m) - if m % nn == 0 { n as i64 * e2(m / nn) } else { 0 }, 1)).collect();
    ModularFormQExp::new(n, Weight::Int(2), Some(DirichletChar::trivial(n)), c, &rat(0, 1))
}

/// Setup for a weight-2 newform f on Γ_0(N) with M_2(Γ_0(N)) = ⟨f, E_2(q) − N·E_2(q^N)⟩,
/// which holds for N ∈ {11, 17, 19}.
pub fn hida_setup(f: ModularFormQExp<BigRational>, g: ModularFormQExp<BigRational>, p: u64, r: u32) -> Result<HidaSetup, LError> {
    if f.weight != Weight::Int(2) || ![11, 17, 19].contains(&f.level) {
        return Err(LError::Range(format!("f must have weight 2 and level 11, 17 or 19 (got level {})", f.level)));
    }
    let others = vec![e2_prime_level(f.level, f.precision())];
    Ok(HidaSetup { f, others, g, p, r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::eta_product;
    use proptest::prelude::*;

    fn qform(level: u64, w: i64, chi: DirichletChar, c: Vec<BigInt>) -> ModularFormQExp<BigRational> {
        let c = c.into_iter().map(BigRational::from_integer).collect();
        ModularFormQExp::new(level, Weight::Int(w), Some(chi), c, &rat(0, 1))
    }

    pub(crate) fn chi44() -> DirichletChar {
        // χ_{-11} lifted to 44: the character of η(2τ)η(22τ)
        DirichletChar::from_fn(44, 2, |a| if [1, 3, 4, 5, 9].contains(&(a % 11)) { 0 } else { 1 }).unwrap()
    }

    pub(crate) fn setup(prec: usize, r: u32) -> HidaSetup {
        let f = qform(11, 2, DirichletChar::trivial(11), eta_product(&[(1, 2), (11, 2)], 1, prec));
        let g = qform(44, 1, chi44(), eta_product(&[(2, 1), (22, 1)], 1, prec));
        hida_setup(f, g, 3, r).unwrap()
    }

    #[test]
    fn rankin_coefficients() {
        let s = setup(30, 4);
        let rs = rankin_coeffs(&s.f, &s.f, &DirichletChar::trivial(1), 30).unwrap();
        assert_eq!(rs.coeffs[1].as_scalar(), Some(rat(1, 1)));
        assert_eq!(rs.coeffs[2].as_scalar(), Some(rat(4, 1)));
        assert!(rs.euler_prefix.iter().all(|l| l.ell != 11));
        let chi5 = DirichletChar::all(5).into_iter().nth(1).unwrap();
        let rs = rankin_coeffs(&s.f, &s.f, &chi5, 30).unwrap();
        for n in (5..30).step_by(5) {
            assert!(rs.coeffs[n].is_zero());
        }
        assert!(rs.euler_prefix.iter().all(|l| l.ell != 5));
    }

    #[test]
    fn trivial_character_four_terms() {
        let (p, r) = (5, 6);
        let fd = EigenformLocalData::new(ZModPr::new(p, r, 2), ZModPr::one(p, r), 2).unwrap();
        let gd = EigenformLocalData::new(ZModPr::new(p, r, 3), ZModPr::one(p, r), 0).unwrap();
        assert_eq!(fd.alpha * fd.beta, ZModPr::new(p, r, 125));
        let s = 2;
        let f = interpolation_factor(&fd, &gd, s, &DirichletChar::trivial(1)).unwrap();
        // oracle: divide the explicit roots by powers of p, losing two digits
        let red = |x: ZModPr| x.reduce_precision(r - 2).unwrap();
        let one = ZModPr::one(p, r - 2);
        let bg_over_p = red(gd.beta.divide_by_p_power(1).unwrap());
        let bf_over_p2 = fd.beta.divide_by_p_power(2).unwrap();
        let (af, ag, bg) = (red(fd.alpha), red(gd.alpha), red(gd.beta));
        let want = (one - ZModPr::new(p, r - 2, 5) * (af * ag).inv().unwrap())
            * (one - (af * bg_over_p).inv().unwrap())
            * (one - bf_over_p2 * ag)
            * (one - bf_over_p2 * bg);
        assert_eq!(red(f.value.as_scalar().unwrap()), want);
        let one = ZModPr::one(p, r);
        assert_eq!(f.e_star_f, one - fd.beta * fd.alpha.inv().unwrap());
    }

    #[test]
    fn conductor_p_factor() {
        let (p, r) = (5, 5);
        let fd = EigenformLocalData::new(ZModPr::new(p, r, 2), ZModPr::one(p, r), 2).unwrap();
        let gd = EigenformLocalData::new(ZModPr::new(p, r, 3), ZModPr::one(p, r), 0).unwrap();
        let leg = DirichletChar::from_fn(5, 2, |a| if [1, 4].contains(&a) { 0 } else { 1 }).unwrap();
        let f = interpolation_factor(&fd, &gd, 2, &leg).unwrap();
        // G(χ)² = χ(−1)p = 5 for the Legendre symbol mod 5
        let unit = (fd.alpha * fd.alpha).inv().unwrap();
        assert_eq!(f.p_shift, 1);
        assert!(crate::iwasawa::cyclo_eq(&f.value, &CycloElem::scalar(1, unit * ZModPr::new(p, r, 5))));
    }

    #[test]
    fn bf_factor_values() {
        let q = |n, d| rat(n, d);
        let z = bf_specialization_factor(5, 3, 2, 0, &q(1, 1), &q(1, 1), &q(0, 1), &q(0, 1), &q(1, 1), &q(1, 1), 7).unwrap();
        assert_eq!(z.level_np, (q(1, 1) - q(1, 1)) * (q(49, 1) - q(1, 7 * 7 * 7 * 7 * 7)));
        let one = rat(1, 1);
        // (k, k′, j) = (2, 2, 1), p = 5, toy roots
        let (af, ag, bf, bg) = (q(2, 1), q(3, 1), q(125, 2), q(125, 3));
        let c = 7;
        let x = bf_specialization_factor(5, 2, 2, 1, &af, &ag, &bf, &bg, &one, &one, c).unwrap();
        let euler = q(1, 1) - q(5, 6);
        let cfac = q(49, 1) - q(1, 49);
        let want_np = euler * cfac / q(-4, 1);
        assert_eq!(x.level_np, want_np);
        let want_n = &want_np * (q(1, 1) - q(2 * 125, 3 * 25)) * (q(1, 1) - q(125 * 3, 2 * 25)) * (q(1, 1) - q(125 * 125, 6 * 25));
        assert_eq!(x.level_n, want_n);
        assert!(bf_specialization_factor(5, 2, 1, 2, &af, &ag, &bf, &bg, &one, &one, c).is_err());
    }

    #[test]
    fn pseudo_eigenvalues() {
        assert!(pseudo_eigenvalue_check(&CycloElem::scalar(1, rat(121, 1)), 11, 4));
        assert!(pseudo_eigenvalue_check(&CycloElem::scalar(1, rat(-121, 1)), 11, 4));
        let i11 = CycloElem::zeta_pow(4, 1, &rat(1, 1)).scale(&rat(11, 1));
        assert!(!pseudo_eigenvalue_check(&i11, 11, 2));
        // 12i lies in ℚ(μ_12) but squares to −144
        let i12 = CycloElem::zeta_pow(4, 1, &rat(1, 1)).scale(&rat(12, 1));
        assert!(!pseudo_eigenvalue_check(&i12, 12, 2));
        let s = crate::ring_tower::cyclotomic_reduce(&[rat(0, 1), rat(0, 1), rat(0, 1), rat(2, 1)], 12, &rat(0, 1));
        let root = s.times(&(CycloElem::zeta_pow(12, 1, &rat(1, 1)).plus(&CycloElem::zeta_pow(12, -1, &rat(1, 1)))));
        // 2i·(ζ_12 + ζ_12^{-1}) = 2i√3, squared −12
        assert!(pseudo_eigenvalue_check(&root, 12, 1));
        // level-11 weight 2: λ = −a_11 = −1 and (−11)^0 = 1
        let f = setup(20, 3).f;
        assert!(pseudo_eigenvalue_check(&CycloElem::scalar(1, -f.coeff(11)), 11, 0));
    }

    #[test]
    fn hida_value_matches_stabilisation_and_is_level_independent() {
        let s = setup(241, 6);
        let a = hida_padic_l_value(&s, 0, 240, 44).unwrap();
        let b = hida_padic_l_value(&s, 0, 240, 88).unwrap();
        assert_eq!(a.span_dim, 12);
        assert_eq!(b.span_dim, 16);
        assert!(a.delta < 6 && b.delta < 6);
        let keep = 6 - a.delta.max(b.delta);
        assert_eq!(a.value.reduce_precision(keep).unwrap(), b.value.reduce_precision(keep).unwrap());
        // g·E = f + 4V_2 f + 8V_4 f, so the value is α/(α − β)
        let fd = EigenformLocalData::new(ZModPr::new(3, 6, -1), ZModPr::one(3, 6), 0).unwrap();
        let want = fd.alpha * (fd.alpha - fd.beta).inv().unwrap();
        assert_eq!(a.value.reduce_precision(keep).unwrap(), want.reduce_precision(keep).unwrap());
    }

    #[test]
    fn hida_zero_and_range() {
        let mut s = setup(121, 4);
        assert!(hida_padic_l_value(&s, 1, 120, 44).is_err());
        assert!(hida_padic_l_value(&s, 0, 120, 33).is_err());
        s.g = s.g.scale(&rat(0, 1));
        assert!(hida_padic_l_value(&s, 0, 120, 44).unwrap().value.is_zero());
    }

    proptest! {
        #[test]
        fn four_term_product_symmetric_in_g_roots(af in 1i64..1000, ag in 1i64..1000) {
            prop_assume!(af % 5 != 0 && ag % 5 != 0);
            let (p, r) = (5, 5);
            let fd = EigenformLocalData::new(ZModPr::new(p, r, af), ZModPr::one(p, r), 2).unwrap();
            let gd = EigenformLocalData::new(ZModPr::new(p, r, ag), ZModPr::one(p, r), 0).unwrap();
            let one = ZModPr::one(p, r);
            let x = interpolation_factor(&fd, &gd, 2, &DirichletChar::trivial(1)).unwrap().value.as_scalar().unwrap();
            // the product only depends on a_g and α_gβ_g = 5: with x = 5/α_f and y = β_f/25,
            // (1 − x/α_g)(1 − x/β_g) = 1 − a_g/α_f + 5/α_f², (1 − yα_g)(1 − yβ_g) = 1 − y a_g + 5y²
            let ai = fd.alpha.inv().unwrap();
            let five = ZModPr::new(p, r, 5);
            let y = five * ai;
            let a_g = ZModPr::new(p, r, ag);
            let swapped = (one - a_g * ai + five * ai * ai) * (one - y * a_g + five * y * y);
            prop_assert_eq!(x, swapped);
        }

        #[test]
        fn bf_factor_c_consistency(ci in 0usize..8, di in 0usize..8, k in 0i64..4, k2 in 0i64..4) {
            let units = [7i64, 11, 13, 17, 19, 23, 29, 31];
            let (c, d) = (units[ci], units[di]);
            let j = k.min(k2);
            let one = rat(1, 1);
            let (af, ag, bf, bg) = (rat(2, 1), rat(3, 1), rat(7, 2), rat(11, 3));
            let x = bf_specialization_factor(5, k, k2, j, &af, &ag, &bf, &bg, &one, &one, c).unwrap();
            let y = bf_specialization_factor(5, k, k2, j, &af, &ag, &bf, &bg, &one, &one, d).unwrap();
            let cf = |c: i64| rat(c * c, 1) - rat(c, 1).pow((2 * j - k - k2) as i32);
            prop_assert_eq!(&x.level_n / cf(c), &y.level_n / cf(d));
        }
    }
}
