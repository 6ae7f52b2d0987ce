//! Pseudo-inverse, complement projector and dominant eigenvector on small
//! random matrices.

use maed::channel::draw_rayleigh_channel;
use maed::linalg::{dominant_eigenvector, orth_complement_projector, right_pseudo_inverse, ComplexMatrix, ComplexVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> maed::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let s = draw_rayleigh_channel(&mut rng, 4, 10);
    let pinv = right_pseudo_inverse(&s)?;
    let err = (&s * &pinv).max_abs_diff(&ComplexMatrix::identity(4));
    println!("S S^+ = I to within {err:.1e}");

    let v = ComplexVector::from_vec(draw_rayleigh_channel(&mut rng, 6, 1).as_slice().to_vec());
    let p = orth_complement_projector(&v)?;
    println!("|P v| = {:.1e}, trace P = {:.3}", p.mul_vec(&v)?.norm(), p.trace().re);

    let m = draw_rayleigh_channel(&mut rng, 6, 6);
    let gram = m.matmul_hermitian(&m)?;
    let top = dominant_eigenvector(&gram, 1e-12, 1000, None)?;
    let lambda = top.dot(&gram.mul_vec(&top)?).re;
    println!("largest eigenvalue of M M^H: {lambda:.4}");
    Ok(())
}
