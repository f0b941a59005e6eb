//! Refined Iwasawa decomposition `g = k a u` in `SL_3(Q)`: `a^2` and `u`
//! exact, `k` numeric with its residuals.

use kmdecomp::decomp::{iwasawa, Side};
use kmdecomp::ring::RingSpec;
use kmdecomp::sample::Sampler;

fn main() -> kmdecomp::Result<()> {
    let mut s = Sampler::new(1);
    let g = s.bounded_height_element(RingSpec::Q, 3, 10);
    println!("g = {g}");
    for side in [Side::Plus, Side::Minus] {
        let f = iwasawa(&g, side, 1e-10)?;
        println!("side {}", side.name());
        println!("  a^2 = {}", f.a_squared);
        println!("  u   = {}", f.u);
        println!("  a   = {:?}", f.a());
        println!("  k   = {:.6}", f.k.map(|z| z.re));
        println!("  residual {:.2e}, orthogonality {:.2e}", f.residual, f.orthogonality);
    }
    Ok(())
}
