//! Minimal spherical coverings of Dynkin diagrams and the resulting bound
//! on the number of `KUK` factors.

use kmdecomp::coxeter::Gcm;
use kmdecomp::dynkin::kuk_bound;

fn main() -> kmdecomp::Result<()> {
    let square = Gcm::new(vec![
        vec![2, -1, 0, -1],
        vec![-1, 2, -1, 0],
        vec![0, -1, 2, -1],
        vec![-1, 0, -1, 2],
    ])?;
    let cases = [
        ("A4", Gcm::type_a(4)),
        ("affine A2", Gcm::affine_a(2)),
        ("affine A3", square),
        ("affine A1", Gcm::affine_a(1)),
    ];
    for (name, gcm) in cases {
        println!("{name}: {}", kuk_bound(&gcm).to_json());
    }
    Ok(())
}
