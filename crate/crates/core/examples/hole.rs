//! The twist of `u = I + (1 + t) E_12` in `SL_{n+1}(Q[t, t^-1])`: its
//! characteristic polynomial has a non-constant coefficient, so it is not
//! conjugate to a diagonal element, and in the 2x2 case it has no square
//! root in the symmetric set either.
//!
//! `cargo run --example hole -- 3`

use kmdecomp::decomp::{diag_test, hole_witness, sl2_sqrt};

fn main() -> kmdecomp::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .map_or(1, |s| s.parse().expect("n must be a positive integer"));
    let w = hole_witness(n)?;
    println!("u = {}", w.u);
    println!("v = tau(u) = {}", w.v);
    println!("charpoly(v) = {}", w.charpoly);

    let d = diag_test(&w.v);
    let (k, c) = d.obstruction.clone().expect("the witness has an obstruction");
    let e = d.obstruction_invariant().expect("the witness has an obstruction");
    println!(
        "diag_test: {:?}, coefficient of lambda^{k} is {c}, invariant {e}",
        d.verdict
    );

    let small = hole_witness(1)?;
    let r = sl2_sqrt(&small.v)?;
    println!(
        "sl2_sqrt (2x2 case): {:?}, tr(v) + 2 = {} is not a square",
        r.verdict,
        r.obstruction.expect("no root means an obstruction")
    );
    Ok(())
}
