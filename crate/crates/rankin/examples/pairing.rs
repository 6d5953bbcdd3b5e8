//! Weil pairing against a 2-isogeny on y² = x³ + 2x + 3 over 𝔽_103.
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rankin::pairing::{fe_to_string, isogeny_law, EllipticCurveFp};

fn main() {
    let e = EllipticCurveFp::new(103, 2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rep = isogeny_law(&e, 2, 5, 12, &mut rng).unwrap();
    println!("{e}: E[5] lives over degree {}", rep.ext_degree);
    for (label, lhs, rhs, _) in &rep.pairs {
        println!("{label:<10} {} = {}", fe_to_string(lhs), fe_to_string(rhs));
    }
    println!("law holds: {}", rep.holds());
}
