//! Modular forms as truncated q-expansions over a chosen coefficient ring,
//! with Hecke, diamond and V operators, classical and Λ-adic Eisenstein
//! series, the ordinary projector and Atkin–Lehner matrix relations.

mod atkin_lehner;
mod eisenstein;
mod lambda_adic;
mod newform_file;
mod ordinary;

pub use atkin_lehner::{atkin_lehner_relations_check, diamond_matrix, w_matrix, AlGroupElem, AlReport};
pub use eisenstein::{divisor_sum, eisenstein_qexp};
pub use lambda_adic::{
    c_factor, embed_series, g0_naturality, g1_naturality, lambda_adic_eisenstein, lambda_adic_g0, lambda_adic_g1,
    specialize_g0, specialize_g1, EisensteinVariant, LambdaForm, NaturalityReport,
};
pub use newform_file::{emit_newform, parse_newform, NewformFile};
pub use ordinary::{
    coordinates, hecke_matrix, ordinary_projector, stabilization_maps, OrdinaryProjection, Stabilization,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

use crate::dirichlet::{CharError, DirichletChar, PadicEmbedding};
use crate::iwasawa::IwasawaError;
use crate::ring_tower::{CycloElem, RingElem, RingError, TruncSeries, ZModPr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModFormError {
    #[error("q-precision {have} too small: {need}")]
    Precision { have: usize, need: String },
    #[error("operator {op} needs {requirement} (level {level})")]
    Divisibility { op: String, requirement: String, level: u64 },
    #[error("parameters violate the construction: {0}")]
    Condition(String),
    #[error("span is not stable: {0}")]
    NotStable(String),
    #[error("not ordinary: {0}")]
    NotOrdinary(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("duplicate coefficient a_{n} on lines {first} and {second}")]
    Duplicate { n: usize, first: usize, second: usize },
    #[error("inconsistent header: {0}")]
    Header(String),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Iwasawa(#[from] IwasawaError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Int(i64),
    /// A weight-character of a Λ-adic family, kept as a label.
    Family(String),
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Int(k) => write!(f, "{k}"),
            Weight::Family(s) => write!(f, "{s}"),
        }
    }
}

/// Coefficient rings that can hold the values of a Dirichlet character.
pub trait CharRing: RingElem {
    fn char_like(&self, chi: &DirichletChar, a: i64) -> Result<Self, ModFormError>;
}

fn quadratic_value(chi: &DirichletChar, a: i64) -> Result<i64, ModFormError> {
    match chi.char_eval(a) {
        None => Ok(0),
        Some(0) => Ok(1),
        Some(e) if 2 * e == chi.order() => Ok(-1),
        Some(_) => Err(ModFormError::Condition(format!("{chi:?} is not rational-valued"))),
    }
}

impl CharRing for BigInt {
    fn char_like(&self, chi: &DirichletChar, a: i64) -> Result<Self, ModFormError> {
        Ok(BigInt::from(quadratic_value(chi, a)?))
    }
}

impl CharRing for BigRational {
    fn char_like(&self, chi: &DirichletChar, a: i64) -> Result<Self, ModFormError> {
        Ok(self.from_i64_like(quadratic_value(chi, a)?))
    }
}

impl CharRing for ZModPr {
    fn char_like(&self, chi: &DirichletChar, a: i64) -> Result<Self, ModFormError> {
        let v = PadicEmbedding::new(self.p(), self.r()).char_value(chi, a)?;
        v.as_scalar()
            .filter(|_| v.order() == 1)
            .ok_or_else(|| ModFormError::Condition(format!("{chi:?} has wild values")))
    }
}

impl CharRing for CycloElem<BigRational> {
    fn char_like(&self, chi: &DirichletChar, a: i64) -> Result<Self, ModFormError> {
        Ok(chi.value(a, &self.coeff_zero()).lift_to(self.order())?)
    }
}

impl CharRing for CycloElem<ZModPr> {
    fn char_like(&self, chi: &DirichletChar, a: i64) -> Result<Self, ModFormError> {
        let z = self.coeff_zero();
        let v = PadicEmbedding::new(z.p(), z.r()).char_value(chi, a)?;
        Ok(v.lift_to(self.order())?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeckeOp {
    /// T_ℓ for a prime ℓ ∤ N.
    T(u64),
    /// U_ℓ for a prime ℓ | N.
    U(u64),
    /// ⟨d⟩ for d prime to N.
    Diamond(i64),
    /// V_ℓ: q ↦ q^ℓ, raising the level to ℓN.
    V(u64),
}

#[derive(Clone, PartialEq)]
pub struct ModularFormQExp<R: RingElem> {
    pub level: u64,
    pub weight: Weight,
    /// None for forms on Γ_1(N) with no declared character (e.g. G(t(N)) with t ≢ ±t).
    pub nebentypus: Option<DirichletChar>,
    pub qexp: TruncSeries<R>,
}

impl<R: RingElem> fmt::Debug for ModularFormQExp<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form(N={}, k={}, eps={:?}, {:?})", self.level, self.weight, self.nebentypus, self.qexp)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl<R: RingElem> ModularFormQExp<R> {
    pub fn new(level: u64, weight: Weight, nebentypus: Option<DirichletChar>, coeffs: Vec<R>, zero: &R) -> Self {
        ModularFormQExp { level, weight, nebentypus, qexp: TruncSeries::new("q", zero, coeffs) }
    }

    /// Number of known coefficients a_0 .. a_{T−1}.
    pub fn precision(&self) -> usize {
        self.qexp.precision()
    }

    pub fn coeff(&self, n: usize) -> R {
        self.qexp.coeff(n)
    }

    pub fn coeffs(&self) -> &[R] {
        self.qexp.coeffs()
    }

    pub fn zero_elem(&self) -> &R {
        self.qexp.zero_elem()
    }

    pub fn truncate(&self, t: usize) -> Self {
        ModularFormQExp { qexp: self.qexp.truncate(t), ..self.clone() }
    }

    pub fn map<S: RingElem>(&self, zero: &S, f: impl Fn(&R) -> S) -> ModularFormQExp<S> {
        ModularFormQExp {
            level: self.level,
            weight: self.weight.clone(),
            nebentypus: self.nebentypus.clone(),
            qexp: self.qexp.map(zero, f),
        }
    }

    pub fn try_map<S: RingElem, E>(&self, zero: &S, f: impl Fn(&R) -> Result<S, E>) -> Result<ModularFormQExp<S>, E> {
        let c = self.coeffs().iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(ModularFormQExp::new(self.level, self.weight.clone(), self.nebentypus.clone(), c, zero))
    }

    pub fn scale(&self, s: &R) -> Self {
        ModularFormQExp { qexp: self.qexp.scale(s), ..self.clone() }
    }

    fn same_space(&self, o: &Self) -> Result<(), ModFormError> {
        if self.weight != o.weight {
            return Err(ModFormError::Condition(format!("weights {} and {} differ", self.weight, o.weight)));
        }
        Ok(())
    }

    /// Sum, at the lcm of the levels; characters must agree when both are declared.
    pub fn plus(&self, o: &Self) -> Result<Self, ModFormError> {
        self.same_space(o)?;
        let level = num_integer::lcm(self.level, o.level);
        let neb = match (&self.nebentypus, &o.nebentypus) {
            (Some(a), Some(b)) => {
                let (a, b) = (a.induce(level)?, b.induce(level)?);
                (a == b).then_some(a)
            }
            _ => None,
        };
        Ok(ModularFormQExp { level, weight: self.weight.clone(), nebentypus: neb, qexp: self.qexp.try_add(&o.qexp)? })
    }

    pub fn minus(&self, o: &Self) -> Result<Self, ModFormError> {
        self.plus(&o.scale(&o.zero_elem().from_i64_like(-1)))
    }

    /// Product of forms: weights add, characters multiply, level is the lcm.
    pub fn multiply(&self, o: &Self) -> Result<Self, ModFormError> {
        let weight = match (&self.weight, &o.weight) {
            (Weight::Int(a), Weight::Int(b)) => Weight::Int(a + b),
            (a, b) => Weight::Family(format!("({a})+({b})")),
        };
        let level = num_integer::lcm(self.level, o.level);
        let neb = match (&self.nebentypus, &o.nebentypus) {
            (Some(a), Some(b)) => Some(a.mul(b).induce(level)?),
            _ => None,
        };
        Ok(ModularFormQExp { level, weight, nebentypus: neb, qexp: self.qexp.series_multiply(&o.qexp)? })
    }

    /// V_d for any d ≥ 1 (q ↦ q^d); precision is kept.
    pub fn v_op(&self, d: u64) -> Self {
        ModularFormQExp { level: self.level * d, qexp: self.qexp.substitute_power(d as usize), ..self.clone() }
    }

    /// U_d on coefficients: a_n ↦ a_{nd}, without level checks (used on p-adic spans).
    pub fn u_raw(&self, d: u64) -> Self {
        let d = d as usize;
        let t = self.precision().div_ceil(d);
        let c = (0..t).map(|n| self.coeff(n * d)).collect();
        ModularFormQExp::new(self.level, self.weight.clone(), self.nebentypus.clone(), c, self.zero_elem())
    }
}

impl<R: CharRing> ModularFormQExp<R> {
    pub fn apply_hecke(&self, op: HeckeOp) -> Result<Self, ModFormError> {
        let n = self.level;
        let div_err = |op: &str, req: &str| ModFormError::Divisibility { op: op.into(), requirement: req.into(), level: n };
        match op {
            HeckeOp::U(l) => {
                if !is_prime(l) || n % l != 0 {
                    return Err(div_err(&format!("U_{l}"), "a prime dividing the level"));
                }
                if self.precision() < l as usize {
                    return Err(ModFormError::Precision { have: self.precision(), need: format!("at least {l} for U_{l}") });
                }
                Ok(self.u_raw(l))
            }
            HeckeOp::V(l) => Ok(self.v_op(l)),
            HeckeOp::T(l) => {
                if !is_prime(l) || n % l == 0 {
                    return Err(div_err(&format!("T_{l}"), "a prime not dividing the level"));
                }
                let k = match self.weight {
                    Weight::Int(k) if k >= 1 => k,
                    _ => return Err(ModFormError::Condition("T_ℓ needs an integer weight ≥ 1".into())),
                };
                let eps = self.nebentypus.as_ref().ok_or_else(|| ModFormError::Condition("T_ℓ needs a character".into()))?;
                if self.precision() < l as usize {
                    return Err(ModFormError::Precision { have: self.precision(), need: format!("at least {l} for T_{l}") });
                }
                let z = self.zero_elem();
                let scale = z.char_like(eps, l as i64)?.times(&z.from_int_like(&BigInt::from(l).pow((k - 1) as u32)));
                let u = self.u_raw(l);
                let t = u.precision();
                let c = (0..t)
                    .map(|m| {
                        let mut x = u.coeff(m);
                        if m % l as usize == 0 {
                            x = x.plus(&scale.times(&self.coeff(m / l as usize)));
                        }
                        x
                    })
                    .collect();
                Ok(ModularFormQExp::new(n, self.weight.clone(), self.nebentypus.clone(), c, z))
            }
            HeckeOp::Diamond(d) => {
                if num_integer::gcd(d, n as i64) != 1 {
                    return Err(div_err(&format!("<{d}>"), "d prime to the level"));
                }
                let eps = self.nebentypus.as_ref().ok_or_else(|| ModFormError::Condition("no declared character".into()))?;
                let s = self.zero_elem().char_like(eps, d)?;
                Ok(self.scale(&s))
            }
        }
    }
}

/// q·Π_{(d, e)} Π_n (1 − q^{dn})^e, the η-quotient with the given exponents, shifted by q^{shift}.
pub fn eta_product(factors: &[(u64, i64)], shift: usize, prec: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::from(0); prec];
    if shift < prec {
        s[shift] = BigInt::from(1);
    }
    for &(d, e) in factors {
        let d = d as usize;
        for n in 1.. {
            let step = d * n;
            if step >= prec {
                break;
            }
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    for i in (step..prec).rev() {
                        let t = s[i - step].clone();
                        s[i] -= t;
                    }
                } else {
                    for i in step..prec {
                        let t = s[i - step].clone();
                        s[i] += t;
                    }
                }
            }
        }
    }
    s
}
