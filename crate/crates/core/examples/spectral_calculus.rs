//! Harmonic decomposition, Laplace eigenvalues and the shifted resolvent on
//! a round sphere, all in exact arithmetic.

use yamabe_glue::poly::{harmonic_decompose, HomPoly};
use yamabe_glue::rational::{frac, int};
use yamabe_glue::spectral::{SphereFunction, SphereSpec};
use yamabe_glue::Result;

fn main() -> Result<()> {
    let sphere = SphereSpec::new(2, frac(9, 4))?;
    for k in 0..4 {
        println!("λ_{k}(S²(3/2)) = {}", sphere.eigenvalue(k));
    }

    // x₁⁴ splits into harmonics of degree 4, 2 and 0 times powers of |x|².
    let x1_4 = HomPoly::monomial(vec![4, 0, 0], int(1));
    for (j, h) in &harmonic_decompose(&x1_4).parts {
        println!("|x|^{} · ({h})", 2 * j);
    }

    let f = SphereFunction::restrict(&x1_4, &sphere)?;
    println!("∫x₁⁴ / Vol = {}", f.integral());
    let g = f.resolvent_shifted(&sphere.eigenvalue(1))?;
    let back = g.laplacian().sub(&g.scale(&sphere.eigenvalue(1)))?;
    assert_eq!(back, f);
    println!("(Δ-λ₁)(Δ-λ₁)⁻¹x₁⁴ = x₁⁴ exactly");
    Ok(())
}
