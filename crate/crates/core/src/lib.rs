pub mod error;
pub mod exactnum;
pub mod factorize;
pub mod groebner;
pub mod io;
pub mod matrices;
pub mod polysys;
pub mod scalar;
pub mod search;
pub mod toeplitz;
