//! Birkhoff factorization `g = u_+ t u_-` by two elimination orders, and an
//! element outside the big cell.

use kmdecomp::decomp::{birkhoff, birkhoff_by_reversal, hole_witness};
use kmdecomp::matgrp::GroupElement;
use kmdecomp::ring::RingSpec;
use kmdecomp::sample::Sampler;

fn main() -> kmdecomp::Result<()> {
    let mut s = Sampler::new(3);
    let g = s.group_element(RingSpec::QI, 3);
    println!("g = {g}");
    match birkhoff(&g, false) {
        Ok(f) => {
            println!("u+ = {}\nt  = {}\nu- = {}", f.u_plus, f.t, f.u_minus);
            println!("recomposes: {}", f.recompose() == g);
            println!("second route agrees: {}", birkhoff_by_reversal(&g)? == f);
        }
        Err(e) => println!("{e}"),
    }

    let w = hole_witness(1)?;
    let f = birkhoff(&w.v, true)?;
    println!("\nv = {}\nu+ = {}, t = {}, u- = {}", w.v, f.u_plus, f.t, f.u_minus);

    let antidiagonal = GroupElement::from_json(&serde_json::json!({
        "ring": "q", "n": 2, "entries": [["0", "1"], ["-1", "0"]]
    }))?;
    println!("\nantidiagonal: {}", birkhoff(&antidiagonal, false).unwrap_err());
    Ok(())
}
