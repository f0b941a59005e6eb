//! Lengths in Weyl groups from the reflection representation, finite-type
//! classification, and straight elements of infinite Weyl groups.

use kmdecomp::coxeter::{classify, find_straight_candidate, is_finite_type, is_straight, Gcm, WeylElement};

fn main() -> kmdecomp::Result<()> {
    let a2 = Gcm::type_a(2);
    let w0 = WeylElement::from_word(&a2, &[0, 1, 0])?;
    println!("A2: l(s1 s2 s1) = {}", w0.length());

    let a1 = Gcm::affine_a(1);
    let c = WeylElement::from_word(&a1, &[0, 1])?;
    println!("affine A1: l((s0 s1)^k) = {:?}", is_straight(&c, 10).lengths);

    for (name, gcm) in [
        ("E8", Gcm::type_e(8)),
        ("G2", Gcm::type_g2()),
        ("affine A2", Gcm::affine_a(2)),
    ] {
        println!(
            "{name}: finite {}, components {:?}",
            is_finite_type(&gcm),
            classify(&gcm)
        );
    }

    let hyperbolic = Gcm::new(vec![vec![2, -1, 0], vec![-1, 2, -3], vec![0, -1, 2]])?;
    match find_straight_candidate(&hyperbolic, 4)? {
        Some(w) => println!("straight element of {hyperbolic:?}: word {:?}", w.word()),
        None => println!("no straight element found within the search depth"),
    }
    Ok(())
}
