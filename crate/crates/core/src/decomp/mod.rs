//! Decompositions and certificates.
//!
//! Exact factors are kept exact; anything that needs a square root of a
//! real number is computed in `f64` and carries its residuals.

mod birkhoff;
mod cartan;
mod certificates;
mod iwasawa;
pub mod numeric;

pub use birkhoff::{birkhoff, birkhoff_by_reversal, BirkhoffFactors};
pub use cartan::{cartan, kak_word, polar, CartanFactors, KakLetter, KakWord, PolarFactors};
pub use certificates::{
    diag_test, hole_closed_form, hole_witness, hole_witness_in, nucleus_member, sl2_sqrt, sqrt_chain, DiagCertificate,
    DiagReason, DiagVerdict, HoleWitness, NucleusCertificate, NucleusVerdict, RootLevel, SqrtCertificate,
    SqrtObstruction, SqrtVerdict, CHAIN_RELATIVE_TOL, DEFAULT_CHAIN_DEPTH,
};
pub use iwasawa::{iwasawa, ldl_hermitian, IwasawaFactors, Side};
