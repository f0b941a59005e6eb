//! Cartan `g = k1 a k2` and polar `g = p k` decompositions of a shear in
//! `SL_2(Q)`.

use kmdecomp::decomp::{cartan, kak_word, polar};
use kmdecomp::matgrp::GroupElement;

fn main() -> kmdecomp::Result<()> {
    let g = GroupElement::from_json(&serde_json::json!({
        "ring": "q", "n": 2, "entries": [["1", "1"], ["0", "1"]]
    }))?;
    let c = cartan(&g, 1e-12)?;
    println!("singular values {:?} (golden ratio and its inverse)", c.a);
    println!("k1 = {:.6}k2 = {:.6}", c.k1, c.k2);
    println!("residual {:.2e}", c.residual);

    let p = polar(&g, 1e-12)?;
    println!("p = {:.6}p^2 = {:.6}", p.p, &p.p * &p.p);
    println!("leading minors of p {:?}, det {:.12}", p.p_leading_minors, p.p_det);

    println!("KAK word: {}", kak_word(&g, 1e-12)?.word());
    Ok(())
}
