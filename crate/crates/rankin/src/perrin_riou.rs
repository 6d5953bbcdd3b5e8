//! The Perrin-Riou big logarithm for unramified φ-modules at finite level.
//!
//! 𝐍 = 𝔻[[π]] is truncated modulo ω_h = (1+π)^{p^h} − 1. With the basis [a] = (1+π)^a,
//! ℤ/p^r[[π]]/(ω_h) is the group ring of ℤ/p^h, φ is [a] ↦ [pa] (π ↦ (1+π)^p − 1) tensored
//! with Φ, and ψ sends [a] to [a/p] mod p^{h−1} when p | a and to 0 otherwise, tensored
//! with Φ^{-1}. The ψ = 0 part is then 𝔻 ⊗ ℤ/p^r[(ℤ/p^h)^×], the Iwasawa algebra at
//! level m = h − 1, which is the Mellin identification.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::dirichlet::{gauss_sum, DirichletChar};
use crate::iwasawa::{IwasawaElem, Level};
use crate::ring_tower::{rat, CycloElem, RingElem, RingError, TruncSeries, ZMat, ZModPr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PrError {
    #[error("Φ is not invertible mod p")]
    Singular,
    #[error("precision: {0}")]
    Precision(String),
    #[error("element is not ψ-fixed (first difference in component {comp}, index {index})")]
    NotPsiFixed { comp: usize, index: usize },
    #[error("boundary term must be Φ-fixed")]
    Boundary,
    #[error("excluded case: {0}")]
    Excluded(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Char(#[from] crate::dirichlet::CharError),
    #[error(transparent)]
    Iwasawa(#[from] crate::iwasawa::IwasawaError),
}

/// 𝔻 = (ℤ/p^r)^d with Frobenius Φ.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiModule {
    pub p: u64,
    pub r: u32,
    pub phi: ZMat,
    phi_inv: ZMat,
}

impl PhiModule {
    pub fn new(phi: ZMat) -> Result<Self, PrError> {
        if phi.rows() != phi.cols() || phi.rows() == 0 {
            return Err(PrError::Shape(format!("Φ is {}×{}", phi.rows(), phi.cols())));
        }
        let phi_inv = phi.inverse().map_err(|_| PrError::Singular)?;
        Ok(PhiModule { p: phi.p(), r: phi.r(), phi, phi_inv })
    }

    pub fn from_rows(p: u64, r: u32, rows: &[Vec<i64>]) -> Result<Self, PrError> {
        let d = rows.len();
        if rows.iter().any(|row| row.len() != d) {
            return Err(PrError::Shape("Φ must be square".into()));
        }
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::new(ZMat::from_i64(p, r, d, d, &flat))
    }

    /// Whitespace-separated integers, row-major; the count must be a square.
    pub fn parse(text: &str, p: u64, r: u32) -> Result<Self, PrError> {
        let v: Vec<i64> = text
            .split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| PrError::Shape(format!("bad entry {t:?}"))))
            .collect::<Result<_, _>>()?;
        let d = (v.len() as f64).sqrt().round() as usize;
        if d * d != v.len() || d == 0 {
            return Err(PrError::Shape(format!("{} entries is not a square count", v.len())));
        }
        Self::new(ZMat::from_i64(p, r, d, d, &v))
    }

    /// A random module of rank d with Φ invertible mod p.
    pub fn random<R: Rng>(rng: &mut R, p: u64, r: u32, d: usize) -> Self {
        let q = p.pow(r) as i64;
        loop {
            let v: Vec<i64> = (0..d * d).map(|_| rng.gen_range(0..q)).collect();
            let m = ZMat::from_i64(p, r, d, d, &v);
            if let Ok(x) = Self::new(m) {
                return x;
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.phi.rows()
    }

    fn one_minus_phi(&self) -> ZMat {
        ZMat::identity(self.p, self.r, self.rank()).sub(&self.phi)
    }

    /// Length of 𝔻^{φ=1}.
    pub fn fixed_length(&self) -> u32 {
        self.one_minus_phi().kernel_length()
    }

    /// Length of 𝔻/(1 − φ)𝔻.
    pub fn cofixed_length(&self) -> u32 {
        self.rank() as u32 * self.r - self.one_minus_phi().image_length()
    }

    pub fn fixed_vectors(&self) -> Vec<Vec<ZModPr>> {
        self.one_minus_phi().kernel_generators()
    }
}

/// An element of 𝔻 ⊗ ℤ/p^r[[π]]/(ω_h), stored in the basis [a] = (1+π)^a, a mod p^h.
#[derive(Clone, Debug, PartialEq)]
pub struct WachElem {
    pub p: u64,
    pub r: u32,
    pub h: u32,
    /// comps[i][a] = coefficient of e_i ⊗ (1+π)^a
    pub comps: Vec<Vec<ZModPr>>,
}

impl WachElem {
    pub fn zero(m: &PhiModule, h: u32) -> Self {
        let n = m.p.pow(h) as usize;
        WachElem { p: m.p, r: m.r, h, comps: vec![vec![ZModPr::zero(m.p, m.r); n]; m.rank()] }
    }

    pub fn size(&self) -> usize {
        self.p.pow(self.h) as usize
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    /// Constant vector v ⊗ 1.
    pub fn constant(m: &PhiModule, h: u32, v: &[ZModPr]) -> Self {
        let mut x = Self::zero(m, h);
        for (c, vi) in x.comps.iter_mut().zip(v) {
            c[0] = *vi;
        }
        x
    }

    /// v ⊗ (1+π)^a.
    pub fn basis(m: &PhiModule, h: u32, i: usize, a: i64) -> Self {
        let mut x = Self::zero(m, h);
        let n = x.size() as i64;
        x.comps[i][a.rem_euclid(n) as usize] = ZModPr::one(m.p, m.r);
        x
    }

    /// From power series in π, one per component (any length; reduced mod ω_h).
    pub fn from_pi_series(m: &PhiModule, h: u32, series: &[TruncSeries<ZModPr>]) -> Result<Self, PrError> {
        if series.len() != m.rank() {
            return Err(PrError::Shape(format!("{} components for rank {}", series.len(), m.rank())));
        }
        let mut x = Self::zero(m, h);
        let n = x.size();
        for (c, s) in x.comps.iter_mut().zip(series) {
            // π^k = Σ_j C(k, j)(−1)^{k−j} [j]
            for (k, a) in s.coeffs().iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let mut binom = BigInt::one();
                for j in 0..=k {
                    let sign = if (k - j) % 2 == 0 { 1 } else { -1 };
                    let b = ZModPr::from_bigint(m.p, m.r, &(&binom * sign));
                    c[j % n] = c[j % n] + *a * b;
                    binom = binom * (k - j) / (j + 1);
                }
            }
        }
        Ok(x)
    }

    /// Canonical representatives of degree < p^h in π.
    pub fn to_pi_series(&self) -> Vec<TruncSeries<ZModPr>> {
        let n = self.size();
        let z = ZModPr::zero(self.p, self.r);
        self.comps
            .iter()
            .map(|c| {
                let mut out = vec![z; n];
                for (a, x) in c.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let mut binom = BigInt::one();
                    for (k, slot) in out.iter_mut().enumerate().take(a + 1) {
                        *slot = *slot + *x * ZModPr::from_bigint(self.p, self.r, &binom);
                        binom = binom * (a - k) / (k + 1);
                    }
                }
                TruncSeries::new("π", &z, out)
            })
            .collect()
    }

    fn check(&self, o: &Self) {
        assert!(self.h == o.h && self.rank() == o.rank() && self.p == o.p && self.r == o.r, "Wach element shape mismatch");
    }

    pub fn plus(&self, o: &Self) -> Self {
        self.check(o);
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| a.iter().zip(b).map(|(x, y)| *x + *y).collect()).collect();
        WachElem { comps, ..self.clone() }
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.scale(ZModPr::new(self.p, self.r, -1)))
    }

    pub fn scale(&self, s: ZModPr) -> Self {
        WachElem { comps: self.comps.iter().map(|c| c.iter().map(|x| *x * s).collect()).collect(), ..self.clone() }
    }

    /// Multiplication by a scalar power series f(π) ∈ ℤ/p^r[[π]]/(ω_h), given in the [a] basis.
    pub fn mul_group(&self, f: &[ZModPr]) -> Self {
        let n = self.size();
        assert_eq!(f.len(), n);
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut out = vec![ZModPr::zero(self.p, self.r); n];
                for (a, x) in c.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (b, y) in f.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        out[(a + b) % n] = out[(a + b) % n] + *x * *y;
                    }
                }
                out
            })
            .collect();
        WachElem { comps, ..self.clone() }
    }

    /// The Γ-action σ_u: (1+π) ↦ (1+π)^u for a unit u.
    pub fn gamma_act(&self, u: i64) -> Self {
        let n = self.size() as i64;
        let mut out = self.clone();
        for (c, oc) in self.comps.iter().zip(out.comps.iter_mut()) {
            for v in oc.iter_mut() {
                *v = ZModPr::zero(self.p, self.r);
            }
            for (a, x) in c.iter().enumerate() {
                let b = (a as i64 * u).rem_euclid(n) as usize;
                oc[b] = oc[b] + *x;
            }
        }
        out
    }

    /// Reduction to level h − 1.
    pub fn reduce(&self) -> Result<Self, PrError> {
        if self.h == 0 {
            return Err(PrError::Precision("cannot reduce below level 0".into()));
        }
        let n = self.size() / self.p as usize;
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut out = vec![ZModPr::zero(self.p, self.r); n];
                for (a, x) in c.iter().enumerate() {
                    out[a % n] = out[a % n] + *x;
                }
                out
            })
            .collect();
        Ok(WachElem { h: self.h - 1, comps, ..self.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().flatten().all(|x| x.is_zero())
    }

    fn flat(&self) -> Vec<ZModPr> {
        self.comps.iter().flatten().copied().collect()
    }

    fn from_flat(m: &PhiModule, h: u32, v: &[ZModPr]) -> Self {
        let n = m.p.pow(h) as usize;
        WachElem { p: m.p, r: m.r, h, comps: v.chunks(n).map(|c| c.to_vec()).collect() }
    }
}

fn apply_matrix(m: &ZMat, comps: &[Vec<ZModPr>], zero: ZModPr) -> Vec<Vec<ZModPr>> {
    let d = comps.len();
    let n = comps[0].len();
    let mut out = vec![vec![zero; n]; d];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, c) in comps.iter().enumerate() {
            let mij = m.get(i, j);
            if mij.is_zero() {
                continue;
            }
            for (a, x) in c.iter().enumerate() {
                row[a] = row[a] + mij * *x;
            }
        }
    }
    out
}

/// φ: (1+π)^a ↦ (1+π)^{pa}, tensored with Φ. Keeps the level.
pub fn phi(m: &PhiModule, x: &WachElem) -> WachElem {
    let n = x.size();
    let z = ZModPr::zero(m.p, m.r);
    let moved: Vec<Vec<ZModPr>> = x
        .comps
        .iter()
        .map(|c| {
            let mut out = vec![z; n];
            for (a, v) in c.iter().enumerate() {
                let b = (a * m.p as usize) % n;
                out[b] = out[b] + *v;
            }
            out
        })
        .collect();
    WachElem { comps: apply_matrix(&m.phi, &moved, z), ..x.clone() }
}

/// ψ: (1+π)^a ↦ (1+π)^{a/p} if p | a, else 0, tensored with Φ^{-1}. Lowers the level by one.
pub fn psi(m: &PhiModule, x: &WachElem) -> Result<WachElem, PrError> {
    if x.h == 0 {
        return Err(PrError::Precision("ψ needs level h ≥ 1".into()));
    }
    let n = x.size() / m.p as usize;
    let z = ZModPr::zero(m.p, m.r);
    let moved: Vec<Vec<ZModPr>> =
        x.comps.iter().map(|c| (0..n).map(|b| c[b * m.p as usize]).collect()).collect();
    Ok(WachElem { h: x.h - 1, comps: apply_matrix(&m.phi_inv, &moved, z), ..x.clone() })
}

/// The linear map x ↦ ψ(x) − x (mod ω_{h−1}) on 𝐍 at level h, as a matrix on flat coordinates.
fn psi_minus_id(m: &PhiModule, h: u32) -> Result<ZMat, PrError> {
    let n = m.p.pow(h) as usize;
    let d = m.rank();
    let rows = d * n / m.p as usize;
    let mut cols = Vec::with_capacity(d * n);
    for i in 0..d {
        for a in 0..n {
            let e = WachElem::basis(m, h, i, a as i64);
            let y = psi(m, &e)?.minus(&e.reduce()?);
            cols.push(y.flat());
        }
    }
    Ok(ZMat::from_columns(m.p, m.r, rows, &cols))
}

/// Generators of 𝐍^{ψ=1} at level h (ψ(x) ≡ x mod ω_{h−1}).
pub fn psi_fixed_basis(m: &PhiModule, h: u32) -> Result<Vec<WachElem>, PrError> {
    let l = psi_minus_id(m, h)?;
    Ok(l.kernel_generators().into_iter().map(|v| WachElem::from_flat(m, h, &v)).collect())
}

/// 𝔻 ⊗ Λ coordinates: one group-ring element per component, plus an optional
/// boundary coordinate in 𝔻^{φ=1} standing for the π^{-1} term.
#[derive(Clone, Debug, PartialEq)]
pub struct MellinImage {
    pub coords: Vec<IwasawaElem>,
    pub boundary: Option<Vec<ZModPr>>,
}

impl MellinImage {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero()) && self.boundary.as_ref().map_or(true, |b| b.iter().all(|x| x.is_zero()))
    }

    /// Left multiplication of every coordinate by a group-ring element.
    pub fn act(&self, lambda: &IwasawaElem) -> Self {
        MellinImage { coords: self.coords.iter().map(|c| lambda.times(c)).collect(), boundary: self.boundary.clone() }
    }
}

/// Mellin coordinates of an element with ψ = 0 (supported on units mod p^h).
pub fn mellin(y: &WachElem) -> Result<Vec<IwasawaElem>, PrError> {
    if y.h == 0 {
        return Err(PrError::Precision("the Mellin basis needs level h ≥ 1".into()));
    }
    let level = Level::new(y.p, y.r, y.h - 1);
    let mut out = Vec::with_capacity(y.rank());
    for (i, c) in y.comps.iter().enumerate() {
        let mut terms = Vec::new();
        for (a, x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if a as u64 % y.p == 0 {
                return Err(PrError::Precision(format!("component {i} has mass at (1+π)^{a}, not in the ψ = 0 part")));
            }
            terms.push((a as i64, *x));
        }
        out.push(IwasawaElem::from_terms(level, &terms)?);
    }
    Ok(out)
}

/// 𝓛(x) = Mellin((1 − φ)x) for ψ(x) = x. With `boundary = Some(c)` the input is
/// π^{-1}c + x where c must be Φ-fixed; c is carried as the boundary coordinate.
pub fn big_log(m: &PhiModule, x: &WachElem, boundary: Option<&[ZModPr]>) -> Result<MellinImage, PrError> {
    let diff = psi(m, x)?.minus(&x.reduce()?);
    if let Some((comp, c)) = diff.comps.iter().enumerate().find(|(_, c)| c.iter().any(|v| !v.is_zero())) {
        let index = c.iter().position(|v| !v.is_zero()).unwrap();
        return Err(PrError::NotPsiFixed { comp, index });
    }
    let bd = match boundary {
        Some(c) => {
            if c.len() != m.rank() || m.phi.mul_vec(c) != c {
                return Err(PrError::Boundary);
            }
            Some(c.to_vec())
        }
        None => None,
    };
    let y = x.minus(&phi(m, x));
    Ok(MellinImage { coords: mellin(&y)?, boundary: bd })
}

/// Lengths (as ℤ_p-modules) in 0 → 𝔻^{φ=1} → 𝐍^{ψ=1} → 𝐍^{ψ=0} → 𝔻/(1−φ) → 0 at level h.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceReport {
    pub d_fixed: u32,
    pub n_psi1: u32,
    pub n_psi0: u32,
    pub d_cofixed: u32,
    /// Length of ker(1 − φ) on 𝐍^{ψ=1}.
    pub kernel: u32,
    /// Length of the image of 1 − φ in 𝐍^{ψ=0}.
    pub image: u32,
    /// Every kernel generator is a constant Φ-fixed vector.
    pub kernel_is_constant: bool,
}

impl SequenceReport {
    pub fn balanced(&self) -> bool {
        self.d_fixed + self.n_psi0 == self.n_psi1 + self.d_cofixed
    }

    pub fn exact(&self) -> bool {
        self.balanced()
            && self.kernel == self.d_fixed
            && self.kernel_is_constant
            && self.n_psi1 == self.kernel + self.image
            && self.n_psi0 - self.image == self.d_cofixed
    }
}

pub fn exact_sequence(m: &PhiModule, h: u32) -> Result<SequenceReport, PrError> {
    let l = psi_minus_id(m, h)?;
    let n_psi1 = l.kernel_length();
    let gens = psi_fixed_basis(m, h)?;
    let n = m.p.pow(h) as usize;
    let units: Vec<usize> = (0..n).filter(|a| *a as u64 % m.p != 0).collect();
    let d = m.rank();
    let n_psi0 = (d * units.len()) as u32 * m.r;
    // (1 − φ) on generators, in unit-support coordinates
    let mut cols = Vec::with_capacity(gens.len());
    for g in &gens {
        let y = g.minus(&phi(m, g));
        cols.push(y.comps.iter().flat_map(|c| units.iter().map(|&a| c[a])).collect::<Vec<_>>());
    }
    let (kernel, image, kernel_is_constant) = if cols.is_empty() {
        (0, 0, true)
    } else {
        let img = ZMat::from_columns(m.p, m.r, d * units.len(), &cols);
        let image = img.image_length();
        // kernel of 1 − φ inside 𝐍^{ψ=1}: stack ψ − 1 and 1 − φ on the whole space
        let mut stacked = Vec::with_capacity(d * n);
        for i in 0..d {
            for a in 0..n {
                let e = WachElem::basis(m, h, i, a as i64);
                let mut col = psi(m, &e)?.minus(&e.reduce()?).flat();
                col.extend(e.minus(&phi(m, &e)).flat());
                stacked.push(col);
            }
        }
        let rows = stacked[0].len();
        let big = ZMat::from_columns(m.p, m.r, rows, &stacked);
        let ker = big.kernel_generators();
        let constant = ker.iter().all(|v| {
            let x = WachElem::from_flat(m, h, v);
            x.comps.iter().all(|c| c.iter().skip(1).all(|t| t.is_zero()))
        });
        (big.kernel_length(), image, constant)
    };
    Ok(SequenceReport {
        d_fixed: m.fixed_length(),
        n_psi1,
        n_psi0,
        d_cofixed: m.cofixed_length(),
        kernel,
        image,
        kernel_is_constant,
    })
}

/// Which comparison map the interpolation factor multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrSide {
    /// j ≤ k′: the Bloch–Kato logarithm side, factor (−1)^{k′−j}/(k′−j)!.
    Log,
    /// j > k′: the dual exponential side, factor (j − k′ − 1)!.
    DualExp,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrFactor {
    pub side: PrSide,
    pub value: CycloElem<BigRational>,
}

/// Scalar relating the big logarithm at j + η to log or exp*, for η of conductor p^ρ.
pub fn pr_interpolation_factor(
    p: u64,
    alpha_f: &BigRational,
    beta_g: &BigRational,
    j: i64,
    eta: &DirichletChar,
    k2: i64,
) -> Result<PrFactor, PrError> {
    let cond = eta.conductor();
    let mut rho = 0u32;
    let mut c = cond;
    while c % p == 0 {
        c /= p;
        rho += 1;
    }
    if c != 1 {
        return Err(PrError::Excluded(format!("η has conductor {cond}, not a power of {p}")));
    }
    let pb = |e: i64| BigRational::from_integer(BigInt::from(p)).pow(e as i32);
    let ab = alpha_f * beta_g;
    let one = BigRational::one();
    let (side, fac) = if j <= k2 {
        let f: BigInt = (1..=(k2 - j)).map(BigInt::from).product();
        let sign = if (k2 - j) % 2 == 0 { 1 } else { -1 };
        (PrSide::Log, BigRational::new(BigInt::from(sign), f))
    } else {
        let f: BigInt = (1..=(j - k2 - 1)).map(BigInt::from).product();
        (PrSide::DualExp, BigRational::from_integer(f))
    };
    if rho == 0 {
        let q = &ab / pb(1 + j);
        if q == one {
            return Err(PrError::Excluded("α_fβ_g = p^{1+j}".into()));
        }
        if Zero::is_zero(&ab) {
            return Err(PrError::Excluded("α_fβ_g = 0".into()));
        }
        let v = (&one - pb(j) / &ab) / (&one - q) * fac;
        return Ok(PrFactor { side, value: CycloElem::scalar(1, v) });
    }
    // G(η)^{-1} = conj(G(η))/p^ρ for primitive η
    let prim = eta.primitive();
    let g = gauss_sum(&prim)?.map(|x| BigRational::from_integer(x.clone()));
    let ginv = g.conj().scale(&(rat(1, 1) / pb(rho as i64)));
    let v = (pb(1 + j) / &ab).pow(rho as i32) * fac;
    Ok(PrFactor { side, value: ginv.scale(&v) })
}
