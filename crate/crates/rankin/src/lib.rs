//! Exact and p-adic computations around Rankin–Selberg convolutions:
//! Hecke identities, divided-power tensors, Eisenstein families, Iwasawa
//! algebras, the Perrin-Riou big logarithm and Weil pairings.

pub mod cli;
pub mod dirichlet;
pub mod hecke_symbolic;
pub mod modforms;
pub mod iwasawa;
pub mod lfunction;
pub mod pairing;
pub mod perrin_riou;
pub mod tsym;
pub mod ring_tower;
