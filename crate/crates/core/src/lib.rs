pub mod error;
pub mod field;
pub mod groebner;
pub mod ideal;
pub mod linalg;
pub mod monomial;
pub mod monomial_ideal;
pub mod poly;
pub mod ring;
pub mod filtration;
pub mod hilbert;
pub mod reductions;
pub mod theorems;
pub mod session;
pub mod suite;
