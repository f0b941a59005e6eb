//! Nucleus membership: a chain of repeated square roots in the spherical
//! model, and the exact obstruction in the affine one.

use kmdecomp::decomp::{hole_witness, nucleus_member};
use kmdecomp::involution::{tau, ThetaSpec};
use kmdecomp::ring::RingSpec;
use kmdecomp::sample::Sampler;

fn main() -> kmdecomp::Result<()> {
    let mut s = Sampler::new(11);
    let g = s.group_element(RingSpec::Q, 3);
    let v = tau(ThetaSpec::for_ring(RingSpec::Q), &g)?;
    let c = nucleus_member(&v, &g, 8)?;
    println!("spherical: {:?}", c.verdict);
    for (j, level) in c.chain.iter().enumerate() {
        println!(
            "  level {}: residual {:.2e} <= {:.2e}",
            j + 1,
            level.residual,
            level.bound
        );
    }

    let w = hole_witness(1)?;
    let c = nucleus_member(&w.v, &w.u, 8)?;
    println!(
        "affine Hole witness: {:?}, routes agree: {:?}",
        c.verdict, c.routes_agree
    );
    Ok(())
}
