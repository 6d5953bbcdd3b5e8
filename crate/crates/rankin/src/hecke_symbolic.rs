//! Exact symbolic checks of Hecke-algebra identities in Laurent polynomial
//! rings: the ℓ-stabilisation matrix product, the distribution relation
//! obtained from degeneracy-map rewrite rules, and the Euler factor P_ℓ
//! against the norm-relation polynomial Q_ℓ.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ring_tower::{LaurentPoly, LaurentRing, RingElem};

pub type Poly = LaurentPoly;
pub type HeckeMatrix = Vec<Vec<Poly>>;

fn v(ring: &Arc<LaurentRing>, name: &str) -> Poly {
    LaurentPoly::var(ring, name, 1).unwrap()
}

fn vp(ring: &Arc<LaurentRing>, name: &str, e: i32) -> Poly {
    LaurentPoly::var(ring, name, e).unwrap()
}

fn c(ring: &Arc<LaurentRing>, n: i64) -> Poly {
    LaurentPoly::constant(ring, n)
}

/// Variables T1, T2, S1, S2, P (invertible), s (invertible; stands for σ_ℓ^{-1}).
pub fn hecke_ring() -> Arc<LaurentRing> {
    LaurentRing::new(&[("T1", false), ("T2", false), ("S1", false), ("S2", false), ("P", true), ("s", true)])
}

pub fn mat_mul(a: &HeckeMatrix, b: &HeckeMatrix) -> HeckeMatrix {
    let n = a.len();
    let zero = a[0][0].zero_like();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(zero.clone(), |acc, k| acc.plus(&a[i][k].times(&b[k][j])))).collect())
        .collect()
}

fn mat_sub(a: &HeckeMatrix, b: &HeckeMatrix) -> HeckeMatrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.minus(y)).collect()).collect()
}

fn mat_scale(a: &HeckeMatrix, s: &Poly) -> HeckeMatrix {
    a.iter().map(|r| r.iter().map(|x| x.times(s)).collect()).collect()
}

fn identity(ring: &Arc<LaurentRing>, n: usize) -> HeckeMatrix {
    (0..n).map(|i| (0..n).map(|j| c(ring, (i == j) as i64)).collect()).collect()
}

fn transpose(a: &HeckeMatrix) -> HeckeMatrix {
    (0..a.len()).map(|i| (0..a.len()).map(|j| a[j][i].clone()).collect()).collect()
}

/// The matrices (A'_ℓ, 1) and (1, A'_ℓ); with `graded` every generator carries a factor s.
pub fn stabilisation_matrices(ring: &Arc<LaurentRing>, graded: bool) -> (HeckeMatrix, HeckeMatrix) {
    let g = if graded { v(ring, "s") } else { c(ring, 1) };
    let (t1, t2, s1, s2, p) = (v(ring, "T1"), v(ring, "T2"), v(ring, "S1"), v(ring, "S2"), v(ring, "P"));
    let z = c(ring, 0);
    let gt1 = t1.times(&g);
    let gs1 = s1.times(&g).negate();
    let gt2 = t2.times(&g);
    let gs2 = s2.times(&g).negate();
    let gp = p.times(&g);
    let a1 = vec![
        vec![gt1.clone(), gs1.clone(), z.clone(), z.clone()],
        vec![gp.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), gt1, gs1],
        vec![z.clone(), z.clone(), gp.clone(), z.clone()],
    ];
    let a2 = vec![
        vec![gt2.clone(), z.clone(), gs2.clone(), z.clone()],
        vec![z.clone(), gt2, z.clone(), gs2],
        vec![gp.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), gp, z.clone(), z],
    ];
    (a1, a2)
}

/// First column of (1 − (A,B)/P)(1 − (B,A)/P)(1 − (B,B)/P), B = T − A.
/// With grading on, P itself carries an s, so the denominator is P·s.
pub fn lstab_first_column_from(ring: &Arc<LaurentRing>, a1: &HeckeMatrix, a2: &HeckeMatrix, graded: bool) -> Vec<Poly> {
    let g = if graded { v(ring, "s") } else { c(ring, 1) };
    let id = identity(ring, 4);
    let b1 = mat_sub(&mat_scale(&id, &v(ring, "T1").times(&g)), a1);
    let b2 = mat_sub(&mat_scale(&id, &v(ring, "T2").times(&g)), a2);
    let pinv = vp(ring, "P", -1).times(&if graded { vp(ring, "s", -1) } else { c(ring, 1) });
    let f1 = mat_sub(&id, &mat_scale(&mat_mul(a1, &b2), &pinv));
    let f2 = mat_sub(&id, &mat_scale(&mat_mul(&b1, a2), &pinv));
    let f3 = mat_sub(&id, &mat_scale(&mat_mul(&b1, &b2), &pinv));
    let m = mat_mul(&mat_mul(&f1, &f2), &f3);
    (0..4).map(|i| m[i][0].clone()).collect()
}

pub fn lstab_first_column(graded: bool) -> Vec<Poly> {
    let ring = hecke_ring();
    let (a1, a2) = stabilisation_matrices(&ring, graded);
    lstab_first_column_from(&ring, &a1, &a2, graded)
}

/// The column read off from the pushforward formulas for (pr_a × pr_b)_*, in
/// the order (1,1), (2,1), (1,2), (2,2); s = σ_ℓ^{-1}.
pub fn pushforward_column(ring: &Arc<LaurentRing>) -> Vec<Poly> {
    let (t1, t2, s1, s2, p, s) = (v(ring, "T1"), v(ring, "T2"), v(ring, "S1"), v(ring, "S2"), v(ring, "P"), v(ring, "s"));
    let s2p = s.times(&s);
    let one = c(ring, 1);
    let base = one.minus(&s1.times(&s2).times(&s2p));
    vec![
        base.clone(),
        t2.times(&s).minus(&t1.times(&s2).times(&s2p)),
        t1.times(&s).minus(&s1.times(&t2).times(&s2p)),
        p.times(&s).times(&base),
    ]
}

#[derive(Debug, Clone)]
pub struct LstabReport {
    pub graded_diff: Vec<Poly>,
    pub ungraded_diff: Vec<Poly>,
    pub consistency_diff: Vec<Poly>,
    pub transposed_diff: Vec<Poly>,
}

impl LstabReport {
    pub fn holds(&self) -> bool {
        [&self.graded_diff, &self.ungraded_diff, &self.consistency_diff].iter().all(|d| d.iter().all(|x| x.is_zero()))
    }

    pub fn negative_control_fails(&self) -> bool {
        self.transposed_diff.iter().any(|x| !x.is_zero())
    }
}

pub fn lstab_check() -> LstabReport {
    let ring = hecke_ring();
    let target = pushforward_column(&ring);
    let graded = lstab_first_column(true);
    let ungraded = lstab_first_column(false);
    let at1 = |x: &Poly| x.eval_int("s", 1).unwrap();
    let diff = |a: &[Poly], b: &[Poly]| a.iter().zip(b).map(|(x, y)| x.minus(y)).collect::<Vec<_>>();
    let target1: Vec<Poly> = target.iter().map(at1).collect();
    let graded1: Vec<Poly> = graded.iter().map(at1).collect();
    let (a1, a2) = stabilisation_matrices(&ring, true);
    let transposed = lstab_first_column_from(&ring, &transpose(&a1), &transpose(&a2), true);
    LstabReport {
        graded_diff: diff(&graded, &target),
        ungraded_diff: diff(&ungraded, &target1),
        consistency_diff: diff(&graded1, &ungraded),
        transposed_diff: diff(&transposed, &target),
    }
}

/// Check that (1, −β_f/P, −β_g/P, β_fβ_g/P²) is a left eigenvector of (A'_ℓ, 1)
/// with eigenvalue α_f and of (1, A'_ℓ) with eigenvalue α_g, where
/// T_i = α + β and S_i = αβ/P.
pub fn lstab_eigen_check() -> bool {
    let ring = LaurentRing::new(&[("af", false), ("bf", false), ("ag", false), ("bg", false), ("P", true)]);
    let (af, bf, ag, bg) = (v(&ring, "af"), v(&ring, "bf"), v(&ring, "ag"), v(&ring, "bg"));
    let pinv = vp(&ring, "P", -1);
    let p = v(&ring, "P");
    let z = c(&ring, 0);
    let t1 = af.plus(&bf);
    let s1 = af.times(&bf).times(&pinv);
    let t2 = ag.plus(&bg);
    let s2 = ag.times(&bg).times(&pinv);
    let a1 = vec![
        vec![t1.clone(), s1.negate(), z.clone(), z.clone()],
        vec![p.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), t1, s1.negate()],
        vec![z.clone(), z.clone(), p.clone(), z.clone()],
    ];
    let a2 = vec![
        vec![t2.clone(), z.clone(), s2.negate(), z.clone()],
        vec![z.clone(), t2, z.clone(), s2.negate()],
        vec![p.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), p, z.clone(), z],
    ];
    let row = vec![c(&ring, 1), bf.times(&pinv).negate(), bg.times(&pinv).negate(), bf.times(&bg).times(&pinv).times(&pinv)];
    let times_row = |m: &HeckeMatrix| -> Vec<Poly> {
        (0..4).map(|j| (0..4).fold(c(&ring, 0), |acc, i| acc.plus(&row[i].times(&m[i][j])))).collect()
    };
    let ok1 = times_row(&a1).iter().zip(&row).all(|(x, r)| x.minus(&r.times(&af)).is_zero());
    let ok2 = times_row(&a2).iter().zip(&row).all(|(x, r)| x.minus(&r.times(&ag)).is_zero());
    ok1 && ok2
}

/// Variables for the distribution relation: Hecke generators, L = ℓ, J = ℓ^j,
/// s = σ_ℓ^{-1}, and U1, U2 for (U'_ℓ, 1), (1, U'_ℓ).
pub fn cyclonorm_ring() -> Arc<LaurentRing> {
    LaurentRing::new(&[
        ("T1", false),
        ("T2", false),
        ("S1", false),
        ("S2", false),
        ("L", true),
        ("J", true),
        ("s", true),
        ("U1", false),
        ("U2", false),
    ])
}

/// A formal sum Σ coeff_{ab} · (pr_a × pr_b)_* ∘ (operators in U1, U2).
type PushSum = BTreeMap<(u8, u8), Poly>;

#[derive(Debug, Clone)]
pub struct CyclonormReport {
    pub derived: Poly,
    pub target: Poly,
    pub difference: Poly,
    pub transcript: Vec<String>,
}

/// The operator the distribution relation asserts, with −ℓ^jσ_ℓ optionally dropped.
pub fn cyclonorm_target(ring: &Arc<LaurentRing>, drop_leading: bool) -> Poly {
    let (t1, t2, s1, s2, l, j, s) =
        (v(ring, "T1"), v(ring, "T2"), v(ring, "S1"), v(ring, "S2"), v(ring, "L"), v(ring, "J"), v(ring, "s"));
    let lead = j.times(&vp(ring, "s", -1)).negate();
    let mid = l.plus(&c(ring, 1)).times(&j).times(&s1).times(&s2).minus(&s1.times(&t2).times(&t2)).minus(&t1.times(&t1).times(&s2));
    let mut out = t1.times(&t2)
        .plus(&mid.times(&s))
        .plus(&s1.times(&s2).times(&t1).times(&t2).times(&s.pow(2)))
        .minus(&l.times(&j).times(&s1.pow(2)).times(&s2.pow(2)).times(&s.pow(3)));
    if !drop_leading {
        out = out.plus(&lead);
    }
    out
}

/// Apply (pr_a)_* ∘ U = T (pr_1)_* − S (pr_2)_* and (pr_2)_* ∘ U = P (pr_1)_*
/// in each factor until no U remains.
fn rewrite_pushforwards(ring: &Arc<LaurentRing>, mut sum: PushSum, transcript: &mut Vec<String>) -> PushSum {
    let p = v(ring, "L").times(&v(ring, "J"));
    loop {
        let mut changed = false;
        let mut next: PushSum = BTreeMap::new();
        for ((a, b), coeff) in sum {
            // peel one U from the first factor that still carries one
            let first = coeff.degree_range("U1").is_some_and(|d| d.1 >= 1);
            let second = coeff.degree_range("U2").is_some_and(|d| d.1 >= 1);
            if !first && !second {
                add(&mut next, (a, b), &coeff, ring);
                continue;
            }
            changed = true;
            let (u, t, s, idx) = if first { ("U1", "T1", "S1", a) } else { ("U2", "T2", "S2", b) };
            let (_, hi) = coeff.degree_range(u).unwrap();
            add(&mut next, (a, b), &coeff.coeff_of(u, 0), ring);
            let mut peeled = c(ring, 0);
            for k in 1..=hi {
                peeled = peeled.plus(&coeff.coeff_of(u, k).times(&vp(ring, u, k - 1)));
            }
            let key = |i: u8| if first { (i, b) } else { (a, i) };
            if idx == 1 {
                add(&mut next, key(1), &peeled.times(&v(ring, t)), ring);
                add(&mut next, key(2), &peeled.times(&v(ring, s)).negate(), ring);
            } else {
                add(&mut next, key(1), &peeled.times(&p), ring);
            }
        }
        sum = next;
        if !changed {
            return sum;
        }
        transcript.push(format!("  rewrite: {}", show_sum(&sum)));
    }
}

fn add(sum: &mut PushSum, key: (u8, u8), x: &Poly, ring: &Arc<LaurentRing>) {
    let e = sum.entry(key).or_insert_with(|| c(ring, 0));
    *e = e.plus(x);
}

fn show_sum(sum: &PushSum) -> String {
    sum.iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|((a, b), x)| format!("({x})·(pr{a}×pr{b})"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Derive the image of the class under (pr_1×pr_1)_* ∘ (p̂r_2×p̂r_2)_* by rewriting.
///
/// `ell_divides_m` selects the branch of the second norm relation with no
/// correction term; then the first pushforward is the whole story and the
/// derivation must return (U', U') itself.
pub fn cyclonorm_expand_with(ell_divides_m: bool, drop_leading: bool) -> CyclonormReport {
    let ring = cyclonorm_ring();
    let mut transcript = Vec::new();
    let uu = v(&ring, "U1").times(&v(&ring, "U2"));
    if ell_divides_m {
        transcript.push("second norm relation (ℓ | M): (U', U')".into());
        let target = uu.clone();
        return CyclonormReport { difference: uu.minus(&target), derived: uu, target, transcript };
    }
    let step1 = uu.minus(&v(&ring, "J").times(&vp(&ring, "s", -1)));
    transcript.push(format!("second norm relation: {step1}"));
    let mut sum: PushSum = BTreeMap::new();
    sum.insert((1, 1), step1);
    transcript.push(format!("apply (pr1×pr1): {}", show_sum(&sum)));
    let sum = rewrite_pushforwards(&ring, sum, &mut transcript);
    let hr = hecke_ring();
    let col = pushforward_column(&hr);
    // translate hecke_ring values (P = L·J) into this ring
    let to_local = |x: &Poly| -> Poly {
        let mut out = c(&ring, 0);
        for (e, k) in x.terms() {
            // hecke_ring order: T1 T2 S1 S2 P s
            let ex = vec![e[0], e[1], e[2], e[3], e[4], e[4], e[5], 0, 0];
            out = out.plus(&LaurentPoly::term(&ring, k.clone(), ex).unwrap());
        }
        out
    };
    let image = |a: u8, b: u8| -> Poly {
        match (a, b) {
            (1, 1) => to_local(&col[0]),
            (2, 1) => to_local(&col[1]),
            (1, 2) => to_local(&col[2]),
            _ => to_local(&col[3]),
        }
    };
    let mut derived = c(&ring, 0);
    for ((a, b), coeff) in &sum {
        derived = derived.plus(&coeff.times(&image(*a, *b)));
    }
    transcript.push(format!("substitute pushforward formulas: {derived}"));
    let target = cyclonorm_target(&ring, drop_leading);
    let difference = derived.minus(&target);
    transcript.push(format!("difference from stated operator: {difference}"));
    CyclonormReport { derived, target, difference, transcript }
}

pub fn cyclonorm_expand() -> Poly {
    cyclonorm_expand_with(false, false).difference
}

/// Variables for Euler factors: a_f, a_g, e_f, e_g, L = ℓ, X, plus formal roots a1, a2.
pub fn euler_ring() -> Arc<LaurentRing> {
    LaurentRing::new(&[
        ("af", false),
        ("ag", false),
        ("ef", false),
        ("eg", false),
        ("L", true),
        ("X", true),
        ("r1", false),
        ("r2", false),
    ])
}

/// Replace r^2 by a·r − q repeatedly (r a root of X² − aX + q).
fn reduce_root(x: &Poly, r: &str, a: &Poly, q: &Poly) -> Poly {
    let ring = x.ring().clone();
    let mut cur = x.clone();
    loop {
        let (_, hi) = match cur.degree_range(r) {
            Some(d) => d,
            None => return cur,
        };
        if hi < 2 {
            return cur;
        }
        let top = cur.coeff_of(r, hi).times(&vp(&ring, r, hi));
        let rest = cur.minus(&top);
        let lowered = cur.coeff_of(r, hi).times(&vp(&ring, r, hi - 2)).times(&a.times(&v(&ring, r)).minus(q));
        cur = rest.plus(&lowered);
    }
}

/// P_ℓ(X) = Π (1 − γ_f γ_g X/ℓ) over roots of X² − a_f X + ℓ^{k+1}e_f and
/// X² − a_g X + ℓ^{k'+1}e_g, expanded without radicals.
pub fn euler_factor_p(k: u32, k2: u32) -> Poly {
    let ring = euler_ring();
    let (af, ag, ef, eg, l, x) = (v(&ring, "af"), v(&ring, "ag"), v(&ring, "ef"), v(&ring, "eg"), v(&ring, "L"), v(&ring, "X"));
    let (r1, r2) = (v(&ring, "r1"), v(&ring, "r2"));
    let s1 = af.minus(&r1);
    let s2 = ag.minus(&r2);
    let xl = x.times(&vp(&ring, "L", -1));
    let one = c(&ring, 1);
    let mut prod = one.clone();
    for g1 in [&r1, &s1] {
        for g2 in [&r2, &s2] {
            prod = prod.times(&one.minus(&g1.times(g2).times(&xl)));
        }
    }
    let qf = l.pow(k + 1).times(&ef);
    let qg = l.pow(k2 + 1).times(&eg);
    let red = reduce_root(&reduce_root(&prod, "r1", &af, &qf), "r2", &ag, &qg);
    debug_assert!(red.degree_range("r1").map_or(true, |d| d == (0, 0)));
    debug_assert!(red.degree_range("r2").map_or(true, |d| d == (0, 0)));
    red
}

/// The norm-relation polynomial Q_ℓ(X) for weights k + 2, k' + 2.
pub fn q_polynomial(k: u32, k2: u32, perturb: bool) -> Poly {
    let ring = euler_ring();
    let (af, ag, ef, eg, l, x) = (v(&ring, "af"), v(&ring, "ag"), v(&ring, "ef"), v(&ring, "eg"), v(&ring, "L"), v(&ring, "X"));
    let lkk = l.pow(k + k2);
    let one = c(&ring, 1);
    let x1 = l
        .plus(&one)
        .times(&lkk)
        .times(&ef)
        .times(&eg)
        .minus(&l.pow(k).times(&ef).times(&ag.pow(2)))
        .minus(&l.pow(k2).times(&eg).times(&af.pow(2)));
    let mut x2 = lkk.times(&af).times(&ag).times(&ef).times(&eg);
    if perturb {
        x2 = x2.plus(&one);
    }
    vp(&ring, "X", -1)
        .negate()
        .plus(&af.times(&ag))
        .plus(&x1.times(&x))
        .plus(&x2.times(&x.pow(2)))
        .minus(&l.pow(1 + 2 * k + 2 * k2).times(&ef.pow(2)).times(&eg.pow(2)).times(&x.pow(3)))
}

/// X^{-1}((ℓ−1)(1 − ℓ^e e_f e_g X²) − ℓ P_ℓ(X)).
pub fn q_closed_form(k: u32, k2: u32, exponent: u32) -> Poly {
    let ring = euler_ring();
    let (ef, eg, l, x) = (v(&ring, "ef"), v(&ring, "eg"), v(&ring, "L"), v(&ring, "X"));
    let one = c(&ring, 1);
    let inner = l.minus(&one).times(&one.minus(&l.pow(exponent).times(&ef).times(&eg).times(&x.pow(2))));
    inner.minus(&l.times(&euler_factor_p(k, k2))).times(&vp(&ring, "X", -1))
}

#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub k: u32,
    pub k2: u32,
    /// Q − closed form with the exponent ℓ^{k+k'+2} as printed.
    pub printed_residual: Poly,
    /// Q − closed form with exponent ℓ^{k+k'}.
    pub corrected_residual: Poly,
    /// (Q + X^{-1}P) at ℓ = 1.
    pub mod_residual: Poly,
}

impl CongruenceReport {
    pub fn closed_form_holds(&self) -> bool {
        self.corrected_residual.is_zero()
    }
    pub fn printed_form_holds(&self) -> bool {
        self.printed_residual.is_zero()
    }
    pub fn congruence_holds(&self) -> bool {
        self.mod_residual.is_zero()
    }
}

pub fn q_vs_p_congruence_check(k: u32, k2: u32, perturb: bool) -> CongruenceReport {
    let ring = euler_ring();
    let q = q_polynomial(k, k2, perturb);
    let printed_residual = q.minus(&q_closed_form(k, k2, k + k2 + 2));
    let corrected_residual = q.minus(&q_closed_form(k, k2, k + k2));
    let p = euler_factor_p(k, k2);
    let m = q.plus(&vp(&ring, "X", -1).times(&p));
    let mod_residual = m.eval_int("L", 1).unwrap();
    CongruenceReport { k, k2, printed_residual, corrected_residual, mod_residual }
}

/// The residual −(ℓ−1)²(ℓ+1)ℓ^{k+k'} e_f e_g X predicted for the printed exponent.
pub fn predicted_printed_residual(k: u32, k2: u32) -> Poly {
    let ring = euler_ring();
    let (ef, eg, l, x) = (v(&ring, "ef"), v(&ring, "eg"), v(&ring, "L"), v(&ring, "X"));
    let one = c(&ring, 1);
    let lm = l.minus(&one);
    lm.times(&lm).times(&l.plus(&one)).times(&l.pow(k + k2)).times(&ef).times(&eg).times(&x)
}
