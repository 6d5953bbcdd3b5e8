//! q-expansion of a weight-1 Eisenstein series with an odd character mod 5,
//! then the p-adic family check at the same data.
use rankin::dirichlet::DirichletChar;
use rankin::iwasawa::Level;
use rankin::modforms::{eisenstein_qexp, g0_naturality};

fn main() {
    let chi = DirichletChar::parse_literal("chi(5; 0,1,3,2)").unwrap();
    let triv = DirichletChar::trivial(1);
    let g = eisenstein_qexp(1, 1, 5, &chi, &triv, 12).unwrap();
    for (n, a) in g.coeffs().iter().enumerate() {
        println!("a_{n} = {a}");
    }
    let nu = DirichletChar::all(5).into_iter().find(|c| c.order() == 4).unwrap();
    let rep = g0_naturality(1, &nu, 7, 0, &triv, Level::new(5, 3, 2), 30).unwrap();
    println!("family specialisation: {} coefficients compared, holds = {}", rep.compared, rep.holds());
}
