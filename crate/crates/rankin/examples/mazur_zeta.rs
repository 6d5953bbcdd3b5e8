//! The regularised zeta measure at p = 5 and its values at characters mod 25.
use rankin::dirichlet::DirichletChar;
use rankin::iwasawa::{cyclo_eq, mazur_zeta, mazur_zeta_oracle, Level};

fn main() {
    let l = Level::new(5, 3, 1);
    let mu = mazur_zeta(1, 1, 7, l).unwrap();
    for eta in DirichletChar::all(l.modulus()).iter().take(6) {
        let v = mu.specialize(0, eta).unwrap();
        let ok = cyclo_eq(&v, &mazur_zeta_oracle(1, 1, 7, eta, l).unwrap());
        println!("{}: {v:?}  matches partial zeta values: {ok}", eta.to_literal());
    }
}
