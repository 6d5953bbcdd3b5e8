//! Relations among Atkin-Lehner and diamond operators as 2×2 matrices.
use rankin::modforms::atkin_lehner_relations_check;

fn main() {
    for (n, q) in [(15, 3), (15, 5), (45, 9), (21, 3)] {
        let rep = atkin_lehner_relations_check(n, q).unwrap();
        println!("N = {n}, Q = {q}: holds = {}", rep.holds());
        for (name, ok, _) in &rep.relations {
            println!("    {name}: {ok}");
        }
    }
}
