//! The twelve acceptance criteria. Each prints one line:
//! `PASS|FAIL <id> <name> tol=<tolerance> <elapsed> ms (budget <b> ms)`.
//! Any failure, including a blown time budget, makes the target exit nonzero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankin::cli::load_newform;
use rankin::dirichlet::DirichletChar;
use rankin::hecke_symbolic;
use rankin::iwasawa::{cyclo_eq, mazur_zeta, mazur_zeta_oracle, Level};
use rankin::lfunction::{hida_padic_l_value, hida_setup};
use rankin::modforms::{atkin_lehner_relations_check, g0_naturality, g1_naturality, ordinary_projector};
use rankin::pairing::{find_instances, isogeny_law};
use rankin::perrin_riou::{big_log, exact_sequence, phi, psi, psi_fixed_basis, PhiModule, WachElem};
use rankin::ring_tower::ZModPr;
use rankin::tsym;
use std::path::Path;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_lstab() -> Outcome {
    let rep = hecke_symbolic::lstab_check();
    ensure(rep.holds(), || format!("{rep:?}"))?;
    Ok("graded column, ungraded column and s=1 specialisation vanish".into())
}

fn c2_cyclonorm() -> Outcome {
    let d = hecke_symbolic::cyclonorm_expand();
    ensure(d.num_terms() == 0, || format!("{} terms remain", d.num_terms()))?;
    Ok("difference expands to 0".into())
}

fn c3_q_vs_p() -> Outcome {
    for k in 0..=2 {
        for k2 in 0..=2 {
            let rep = hecke_symbolic::q_vs_p_congruence_check(k, k2, false);
            ensure(rep.closed_form_holds(), || format!("closed form, (k,k')=({k},{k2})"))?;
            ensure(rep.congruence_holds(), || format!("congruence, (k,k')=({k},{k2})"))?;
        }
    }
    Ok("9 weight pairs: closed form with exponent k+k' and L=1 congruence".into())
}

fn c4_moments() -> Outcome {
    for r in [2, 3] {
        let rep = tsym::moment_square_check(3, r, 3, false);
        ensure(rep.holds(), || format!("mod 3^{r}: {:?}", &rep.mismatches[..rep.mismatches.len().min(3)]))?;
    }
    ensure(tsym::binomial_collapse_check(3, 2, 3) && tsym::binomial_collapse_check(3, 3, 3), || "binomial collapse".into())?;
    Ok("square commutes over Z/9 and Z/27, k,k' <= 3".into())
}

fn c5_twist() -> Outcome {
    let mut n = 0;
    for p in [3u64, 5] {
        let modulus = p.pow(4) as i64;
        for a in [1, 2, p as i64 - 1] {
            let mut want = 1i64;
            for j in 0..=4usize {
                if j > 0 {
                    // (−a)^j j! built up one factor at a time
                    want = (want * -a * j as i64).rem_euclid(modulus);
                }
                let got = tsym::twist_projection(j, &ZModPr::new(p, 4, a));
                ensure(got == ZModPr::new(p, 4, want), || format!("p={p} a={a} j={j}: {got:?} vs {want}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} cases"))
}

fn c6_naturality() -> Outcome {
    let prec = 50;
    let nus: Vec<_> = DirichletChar::all(5).into_iter().filter(|c| c.conductor() == 5).collect();
    let chis = DirichletChar::all(25);
    let triv = DirichletChar::trivial(1);
    // specialising u^k on (ℤ/p^{m+1})^× mod p^r needs r ≤ m + 1
    let level = Level::new(5, 4, 3);
    let mut g0 = 0;
    for nu in &nus {
        for k in 0..=2i64 {
            for chi in &chis {
                let chi = if chi.is_trivial() { triv.clone() } else { chi.clone() };
                let sign_ok = chi.parity() * nu.parity() == if (k + 1) % 2 == 0 { 1 } else { -1 };
                if !sign_ok || (chi.is_trivial() && k != 0) {
                    continue;
                }
                let rep = g0_naturality(1, nu, 7, k, &chi, level, prec).map_err(|e| e.to_string())?;
                ensure(rep.holds(), || format!("G0 ν={} k={k} χ={}: {:?}", nu.to_literal(), chi.to_literal(), rep.mismatches))?;
                g0 += rep.compared;
            }
        }
    }
    let mut g1 = 0;
    for nu in &nus {
        for k in 0..=2i64 {
            for chi in chis.iter().filter(|c| c.order() <= 2 || c.conductor() == 25).take(4) {
                let rep = g1_naturality(1, nu, 7, k, &triv, chi, level, prec).map_err(|e| e.to_string())?;
                ensure(rep.holds(), || format!("G1 ν={} k={k} χ={}: {:?}", nu.to_literal(), chi.to_literal(), rep.mismatches))?;
                g1 += rep.compared;
            }
        }
    }
    Ok(format!("G0: {g0} coefficients, G1: {g1} coefficients, mod 5^4"))
}

fn c7_mazur() -> Outcome {
    let l = Level::new(5, 4, 2);
    let mu = mazur_zeta(1, 1, 7, l).map_err(|e| e.to_string())?;
    let chars = DirichletChar::all(l.modulus());
    for eta in &chars {
        let got = mu.specialize(0, eta).map_err(|e| e.to_string())?;
        let want = mazur_zeta_oracle(1, 1, 7, eta, l).map_err(|e| e.to_string())?;
        ensure(cyclo_eq(&got, &want), || format!("η = {}", eta.to_literal()))?;
    }
    Ok(format!("{} characters mod 125", chars.len()))
}

fn c8_ordinary() -> Outcome {
    let f = load_newform(Path::new("11a.nf")).map_err(|e| e.to_string())?;
    let f = f.file.to_form_mod(3, 5).map_err(|e| e.to_string())?.truncate(600);
    let e = ordinary_projector(&[f.clone(), f.v_op(3)], 3).map_err(|e| e.to_string())?;
    ensure(e.is_idempotent(), || "e² ≠ e".into())?;
    ensure(e.commutes_with_up(), || "e does not commute with U_3".into())?;
    ensure(e.rank == 1, || format!("rank {}", e.rank))?;
    Ok(format!("e² = e mod 3^5, rank {}", e.rank))
}

fn c9_hida() -> Outcome {
    let r = 6;
    let f = load_newform(Path::new("11a.nf")).map_err(|e| e.to_string())?;
    let g = load_newform(Path::new("44a-wt1.nf")).map_err(|e| e.to_string())?;
    let mut vals = Vec::new();
    for t in [240, 480] {
        let s = hida_setup(f.form.truncate(t + 1), g.form.truncate(t + 1), 3, r).map_err(|e| e.to_string())?;
        for n_aux in [44, 88] {
            let v = hida_padic_l_value(&s, 0, t, n_aux).map_err(|e| e.to_string())?;
            ensure(v.delta < r, || format!("T={t} N={n_aux}: precision loss {} ≥ r", v.delta))?;
            vals.push((t, n_aux, v));
        }
    }
    let keep = r - vals.iter().map(|v| v.2.delta).max().unwrap();
    let base = vals[0].2.value.reduce_precision(keep).unwrap();
    for (t, n, v) in &vals {
        ensure(v.value.reduce_precision(keep).unwrap() == base, || format!("T={t} N={n} differs"))?;
    }
    Ok(format!("value {} agrees mod 3^{keep} across N_aux 44/88, T 240/480", base.value()))
}

fn random_module_with_fixed(rng: &mut ChaCha8Rng, d: usize) -> PhiModule {
    loop {
        // first basis vector is Φ-fixed; the rest is random
        let rows: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| if j == 0 { i64::from(i == 0) } else { rng.gen_range(0..81) }).collect())
            .collect();
        if let Ok(m) = PhiModule::from_rows(3, 4, &rows) {
            return m;
        }
    }
}

fn c10_perrin_riou() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let h = 2;
    let mut with_fixed = 0;
    for i in 0..20 {
        let d = 1 + i % 3;
        let m = if i % 4 == 0 { random_module_with_fixed(&mut rng, d) } else { PhiModule::random(&mut rng, 3, 4, d) };
        if m.fixed_length() > 0 {
            with_fixed += 1;
        }
        // ψ∘φ is the reduction map on a random element
        let mut x = WachElem::zero(&m, h);
        for comp in 0..d {
            for a in 0..9 {
                x = x.plus(&WachElem::basis(&m, h, comp, a).scale(ZModPr::new(3, 4, rng.gen_range(0..81))));
            }
        }
        let back = psi(&m, &phi(&m, &x)).map_err(|e| e.to_string())?;
        ensure(back == x.reduce().map_err(|e| e.to_string())?, || format!("module {i}: ψφ ≠ reduction"))?;
        let rep = exact_sequence(&m, h).map_err(|e| e.to_string())?;
        ensure(rep.exact(), || format!("module {i}: {rep:?}"))?;
        ensure(rep.kernel == rep.d_fixed && rep.kernel_is_constant, || format!("module {i}: kernel {rep:?}"))?;
        // fixed constants are ψ-fixed and die under the big logarithm
        for v in m.fixed_vectors() {
            let c = WachElem::constant(&m, h, &v);
            let img = big_log(&m, &c, None).map_err(|e| e.to_string())?;
            ensure(img.is_zero(), || format!("module {i}: L(fixed) ≠ 0"))?;
        }
        ensure(!psi_fixed_basis(&m, h).map_err(|e| e.to_string())?.is_empty(), || "no ψ-fixed vectors".into())?;
    }
    Ok(format!("20 modules of rank ≤ 3 mod 3^4, {with_fixed} with Φ-fixed vectors"))
}

fn c11_pairing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut n_inst = 0;
    for ell in [2u64, 3, 5, 7] {
        for n in [3u64, 5] {
            if ell == n {
                continue;
            }
            let found = find_instances(ell, n, 200, 12, 2);
            ensure(found.len() == 2, || format!("ℓ={ell} n={n}: {} instances", found.len()))?;
            for e in found {
                let rep = isogeny_law(&e, ell, n, 12, &mut rng).map_err(|x| x.to_string())?;
                ensure(rep.nondegenerate && rep.holds(), || format!("{e} ℓ={ell} n={n}"))?;
                n_inst += 1;
            }
        }
    }
    ensure(n_inst >= 10, || format!("only {n_inst} instances"))?;
    Ok(format!("{n_inst} instances, 9 pairings each"))
}

fn c12_atkin_lehner() -> Outcome {
    let mut n = 0;
    for (lv, q) in [(15, 3), (15, 5), (45, 9), (21, 3)] {
        let rep = atkin_lehner_relations_check(lv, q).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || format!("({lv},{q}): {rep:?}"))?;
        n += 1;
    }
    Ok(format!("{n} (N, Q) pairs"))
}

fn main() {
    let criteria: [(&str, &str, &str, u128, fn() -> Outcome); 12] = [
        ("C01", "lstab-first-column", "exact", 5_000, c1_lstab),
        ("C02", "cyclotomic-norm-relation", "exact", 5_000, c2_cyclonorm),
        ("C03", "euler-factor-congruence", "exact", 5_000, c3_q_vs_p),
        ("C04", "moment-cg-square", "exact mod 3^r", 30_000, c4_moments),
        ("C05", "twist-projection", "exact mod p^4", 5_000, c5_twist),
        ("C06", "eisenstein-naturality", "mod 5^4", 60_000, c6_naturality),
        ("C07", "mazur-zeta-interpolation", "mod 5^4", 30_000, c7_mazur),
        ("C08", "ordinary-projector", "mod 3^5", 10_000, c8_ordinary),
        ("C09", "hida-value-stability", "mod 3^(r-delta)", 120_000, c9_hida),
        ("C10", "perrin-riou-sequence", "mod 3^4", 60_000, c10_perrin_riou),
        ("C11", "isogeny-pairing-law", "exact in F_q^e", 30_000, c11_pairing),
        ("C12", "atkin-lehner-relations", "exact", 5_000, c12_atkin_lehner),
    ];
    let mut failed = 0;
    for (id, name, tol, budget, f) in criteria {
        let t0 = Instant::now();
        let res = f();
        let ms = t0.elapsed().as_millis();
        let (ok, detail) = match res {
            Ok(d) if ms <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!("{} {id} {name:<26} tol={tol:<16} {ms:>7} ms (budget {budget} ms)  {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of 12 passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
