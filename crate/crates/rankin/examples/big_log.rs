//! Big logarithm of a rank-2 φ-module with a fixed vector, and the lengths in
//! its four-term sequence.
use rankin::perrin_riou::{big_log, exact_sequence, psi_fixed_basis, PhiModule, WachElem};

fn main() {
    let m = PhiModule::from_rows(3, 3, &[vec![1, 4], vec![0, 2]]).unwrap();
    let rep = exact_sequence(&m, 2).unwrap();
    println!("{rep:?}");
    println!("exact: {}", rep.exact());
    for v in m.fixed_vectors() {
        let img = big_log(&m, &WachElem::constant(&m, 2, &v), None).unwrap();
        println!("fixed constant maps to zero: {}", img.is_zero());
    }
    let gens = psi_fixed_basis(&m, 2).unwrap();
    let img = big_log(&m, &gens[gens.len() - 1], None).unwrap();
    println!("image of a ψ-fixed generator: {:?}", img.coords);
}
