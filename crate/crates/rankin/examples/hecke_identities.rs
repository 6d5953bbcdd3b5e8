//! Symbolic Hecke-algebra identities: the ℓ-stabilisation column, the cyclotomic
//! norm relation and the Euler-factor congruence, printed with their residuals.
use rankin::hecke_symbolic::{cyclonorm_expand, lstab_check, q_vs_p_congruence_check};

fn main() {
    let l = lstab_check();
    println!("l-stabilisation column holds: {}", l.holds());
    println!("cyclotomic norm difference terms: {}", cyclonorm_expand().num_terms());
    for k in 0..=2 {
        for k2 in 0..=2 {
            let r = q_vs_p_congruence_check(k, k2, false);
            println!(
                "(k,k')=({k},{k2}): exponent k+k' {}  exponent k+k'+2 {}  mod (L-1) {}",
                r.closed_form_holds(),
                r.printed_form_holds(),
                r.congruence_holds()
            );
        }
    }
}
