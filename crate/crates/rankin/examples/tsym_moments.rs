//! Divided-power moments: the Clebsch-Gordan square over ℤ/9 and the twist coefficients.
use rankin::ring_tower::ZModPr;
use rankin::tsym::{binomial_collapse_check, moment_square_check, twist_projection};

fn main() {
    let rep = moment_square_check(3, 2, 3, false);
    println!("square over Z/9: {} comparisons, {} mismatches", rep.compared, rep.mismatches.len());
    let flipped = moment_square_check(3, 2, 3, true);
    println!("with the cup sign flipped: {} mismatches", flipped.mismatches.len());
    println!("binomial collapse: {}", binomial_collapse_check(3, 2, 3));
    for j in 0..=4 {
        let v = twist_projection(j, &ZModPr::new(5, 4, 2));
        println!("twist projection j={j}, a=2 mod 5^4: {}", v.value());
    }
}
