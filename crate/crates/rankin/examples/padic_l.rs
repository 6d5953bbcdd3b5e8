//! p-adic Rankin-Selberg value for 11a against the weight-1 form of level 44 at p = 3.
use rankin::cli::load_newform;
use rankin::lfunction::{hida_padic_l_value, hida_setup};
use std::path::Path;

fn main() {
    let f = load_newform(Path::new("11a.nf")).unwrap();
    let g = load_newform(Path::new("44a-wt1.nf")).unwrap();
    let s = hida_setup(f.form.truncate(241), g.form.truncate(241), 3, 6).unwrap();
    for n_aux in [44, 88] {
        let v = hida_padic_l_value(&s, 0, 240, n_aux).unwrap();
        println!("N_aux = {n_aux}: L = {} mod 3^{}  (span {}, ordinary rank {})", v.value.value(), 6 - v.delta, v.span_dim, v.ordinary_rank);
    }
}
