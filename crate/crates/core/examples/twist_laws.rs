//! The involution `θ` and twist map `τ(g) = g θ(g)^{-1}` on random elements
//! of both models, checked exactly.

use kmdecomp::involution::{is_member, tau, theta, SubsetTag, ThetaSpec};
use kmdecomp::ring::RingSpec;
use kmdecomp::sample::Sampler;

fn main() -> kmdecomp::Result<()> {
    let mut s = Sampler::new(7);
    for ring in [RingSpec::Q, RingSpec::QI, RingSpec::LAURENT_Q, RingSpec::LAURENT_QI] {
        let spec = ThetaSpec::for_ring(ring);
        let g = s.group_element(ring, 3);
        let h = s.group_element(ring, 3);
        let k = s.k_element(ring, 3);
        let v = tau(spec, &g)?;

        println!("ring {ring}");
        println!("  g        = {g}");
        println!("  tau(g)   = {v}");
        println!(
            "  theta(theta(g)) = g:           {}",
            theta(spec, &theta(spec, &g)?)? == g
        );
        println!(
            "  theta(gh) = theta(g)theta(h):  {}",
            theta(spec, &g.mul(&h)?)? == theta(spec, &g)?.mul(&theta(spec, &h)?)?
        );
        println!(
            "  tau(g) in Q:                   {}",
            is_member(spec, SubsetTag::Q, &v)?
        );
        println!(
            "  k in K:                        {}",
            is_member(spec, SubsetTag::K, &k)?
        );
        println!("  tau(gk) = tau(g):              {}", tau(spec, &g.mul(&k)?)? == v);
        println!("  tau(tau(g)) = tau(g)^2:        {}", tau(spec, &v)? == v.mul(&v)?);
    }
    Ok(())
}
